//! Finitely generated groups with computable word metrics.
//!
//! Three closed families are supported: free groups `F_r`, free abelian groups
//! `Z^n`, and finite groups given by a multiplication table together with a
//! generating subset. Every family carries a fixed word length `ℓ`, and the
//! left-invariant metric `d(g, h) = ℓ(g⁻¹h)`.
//!
//! ```
//! use tempered::groups::{GroupElement, GroupSpec};
//!
//! let f2 = GroupSpec::free(2).unwrap();
//! let g = GroupElement::word(&[1, 2, -1]);
//! assert_eq!(f2.word_length(&g).unwrap(), 3);
//! assert_eq!(f2.ball(2).len(), 17);
//! ```

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of one of the supported groups, in canonical form.
///
/// * `Word`: a freely reduced word; letter `j > 0` is `s(j)` and `-j` is `s(j)⁻¹`.
/// * `Vector`: an integer vector in `Z^n`.
/// * `Index`: a row index of a finite multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Word(Vec<i32>),
    Vector(Vec<i64>),
    Index(usize),
}

impl GroupElement {
    /// Builds a free-group element, freely reducing the letters.
    pub fn word(letters: &[i32]) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        push_reduced(&mut out, letters.iter().copied());
        GroupElement::Word(out)
    }

    /// The free generator `s(j)`, 1-based.
    pub fn generator(j: i32) -> Self {
        GroupElement::Word(vec![j])
    }

    pub fn vector(coords: &[i64]) -> Self {
        GroupElement::Vector(coords.to_vec())
    }

    pub fn index(i: usize) -> Self {
        GroupElement::Index(i)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Word(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Word(w) => {
                let parts: Vec<String> = w
                    .iter()
                    .map(|&l| if l > 0 { format!("s{l}") } else { format!("s{}^-1", -l) })
                    .collect();
                write!(f, "{}", parts.join("·"))
            }
            GroupElement::Vector(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Index(i) => write!(f, "#{i}"),
        }
    }
}

fn push_reduced(out: &mut Vec<i32>, letters: impl IntoIterator<Item = i32>) {
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    /// Symmetric generating set (closed under inverses, identity removed).
    generators: Vec<usize>,
    /// Cayley-graph distance from the identity.
    lengths: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms and that `generators` generate.
    ///
    /// The generating set is closed under inverses here, so callers may pass
    /// either a symmetric set or just one generator per inverse pair.
    pub fn new(table: Vec<Vec<usize>>, generators: &[usize]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {bad} in row {i} is out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut gens: Vec<usize> = Vec::new();
        for &g in generators {
            if g >= n {
                return Err(Error::InvalidGroup(format!("generator {g} is out of range")));
            }
            for x in [g, inverses[g]] {
                if x != identity && !gens.contains(&x) {
                    gens.push(x);
                }
            }
        }
        gens.sort_unstable();

        let mut lengths = vec![usize::MAX; n];
        lengths[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = table[x][s];
                if lengths[y] == usize::MAX {
                    lengths[y] = lengths[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if lengths.contains(&usize::MAX) {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        Ok(FiniteGroup { table, identity, inverses, generators: gens, lengths })
    }

    /// `Z/n` with generator `1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens: Vec<usize> = if n > 1 { vec![1] } else { vec![] };
        FiniteGroup::new(table, &gens)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// One of the supported group families with its word metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// Free group on `rank` generators `s(1), …, s(rank)`.
    Free { rank: usize },
    /// `Z^rank`. With `steps = None` the generators are the unit vectors and
    /// `ℓ` is the ℓ¹ norm; `Some(steps)` (rank 1 only) uses `{±s : s ∈ steps}`.
    Abelian { rank: usize, steps: Option<Vec<i64>> },
    Finite(Arc<FiniteGroup>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free { rank } => write!(f, "F_{rank}"),
            GroupSpec::Abelian { rank, steps: None } => write!(f, "Z^{rank}"),
            GroupSpec::Abelian { rank, steps: Some(s) } => write!(f, "Z^{rank} with steps {s:?}"),
            GroupSpec::Finite(g) => write!(f, "finite group of order {}", g.order()),
        }
    }
}

impl GroupSpec {
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroup("free group rank must be at least 1".into()));
        }
        Ok(GroupSpec::Free { rank })
    }

    pub fn abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroup("free abelian rank must be at least 1".into()));
        }
        Ok(GroupSpec::Abelian { rank, steps: None })
    }

    /// `Z` with the word metric of the generating set `{±s : s ∈ steps}`.
    pub fn integers_with_steps(steps: &[i64]) -> Result<Self> {
        let mut steps: Vec<i64> = steps.iter().map(|s| s.abs()).filter(|&s| s != 0).collect();
        steps.sort_unstable();
        steps.dedup();
        let gcd = steps.iter().fold(0i64, |acc, &s| num_integer::gcd(acc, s));
        if gcd != 1 {
            return Err(Error::InvalidGroup(format!("steps {steps:?} do not generate Z")));
        }
        if steps == [1] {
            return Ok(GroupSpec::Abelian { rank: 1, steps: None });
        }
        Ok(GroupSpec::Abelian { rank: 1, steps: Some(steps) })
    }

    pub fn finite(table: Vec<Vec<usize>>, generators: &[usize]) -> Result<Self> {
        Ok(GroupSpec::Finite(Arc::new(FiniteGroup::new(table, generators)?)))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Ok(GroupSpec::Finite(Arc::new(FiniteGroup::cyclic(n)?)))
    }

    pub fn trivial() -> Self {
        GroupSpec::cyclic(1).expect("the trivial table is a group")
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Free { .. } => GroupElement::Word(Vec::new()),
            GroupSpec::Abelian { rank, .. } => GroupElement::Vector(vec![0; *rank]),
            GroupSpec::Finite(g) => GroupElement::Index(g.identity),
        }
    }

    /// The symmetric generating set, in canonical order.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens = match self {
            GroupSpec::Free { rank } => (1..=*rank as i32)
                .flat_map(|j| [GroupElement::Word(vec![j]), GroupElement::Word(vec![-j])])
                .collect(),
            GroupSpec::Abelian { rank, steps: None } => (0..*rank)
                .flat_map(|i| {
                    [1, -1].map(|sign| {
                        let mut v = vec![0; *rank];
                        v[i] = sign;
                        GroupElement::Vector(v)
                    })
                })
                .collect(),
            GroupSpec::Abelian { steps: Some(steps), .. } => steps
                .iter()
                .flat_map(|&s| [GroupElement::Vector(vec![s]), GroupElement::Vector(vec![-s])])
                .collect(),
            GroupSpec::Finite(g) => g.generators.iter().map(|&i| GroupElement::Index(i)).collect::<Vec<_>>(),
        };
        gens.sort();
        gens
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupSpec::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpec::Abelian { rank, .. }, GroupElement::Vector(v)) => v.len() == *rank,
            (GroupSpec::Finite(fg), GroupElement::Index(i)) => *i < fg.order(),
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::MismatchedGroup { element: g.to_string(), group: self.to_string() })
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul_unchecked(g, h))
    }

    pub(crate) fn mul_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut out = a.clone();
                push_reduced(&mut out, b.iter().copied());
                GroupElement::Word(out)
            }
            (GroupElement::Vector(a), GroupElement::Vector(b)) => {
                GroupElement::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElement::Index(a), GroupElement::Index(b)) => match self {
                GroupSpec::Finite(fg) => GroupElement::Index(fg.mul(*a, *b)),
                _ => unreachable!("index elements only occur in finite groups"),
            },
            _ => unreachable!("checked elements share a representation"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.inv_unchecked(g))
    }

    pub(crate) fn inv_unchecked(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Word(w) => GroupElement::Word(w.iter().rev().map(|l| -l).collect()),
            GroupElement::Vector(v) => GroupElement::Vector(v.iter().map(|x| -x).collect()),
            GroupElement::Index(i) => match self {
                GroupSpec::Finite(fg) => GroupElement::Index(fg.inv(*i)),
                _ => unreachable!("index elements only occur in finite groups"),
            },
        }
    }

    pub fn word_length(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(self.len_unchecked(g))
    }

    pub(crate) fn len_unchecked(&self, g: &GroupElement) -> usize {
        match (self, g) {
            (_, GroupElement::Word(w)) => w.len(),
            (GroupSpec::Abelian { steps: None, .. }, GroupElement::Vector(v)) => {
                v.iter().map(|x| x.unsigned_abs() as usize).sum()
            }
            (GroupSpec::Abelian { steps: Some(steps), .. }, GroupElement::Vector(v)) => {
                integer_word_length(steps, v[0])
            }
            (GroupSpec::Finite(fg), GroupElement::Index(i)) => fg.lengths[*i],
            _ => unreachable!("checked element"),
        }
    }

    /// `d(g, h) = ℓ(g⁻¹h)`.
    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> Result<usize> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.dist_unchecked(g, h))
    }

    pub(crate) fn dist_unchecked(&self, g: &GroupElement, h: &GroupElement) -> usize {
        match (self, g, h) {
            (_, GroupElement::Word(a), GroupElement::Word(b)) => {
                let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                a.len() + b.len() - 2 * common
            }
            (GroupSpec::Abelian { steps: None, .. }, GroupElement::Vector(a), GroupElement::Vector(b)) => {
                a.iter().zip(b).map(|(x, y)| (y - x).unsigned_abs() as usize).sum()
            }
            _ => self.len_unchecked(&self.mul_unchecked(&self.inv_unchecked(g), h)),
        }
    }

    /// All elements with `ℓ(g) ≤ radius`, ordered by length and then by representation.
    pub fn ball(&self, radius: usize) -> Vec<GroupElement> {
        let mut out = match self {
            GroupSpec::Free { rank } => {
                let letters: Vec<i32> = (1..=*rank as i32).flat_map(|j| [j, -j]).collect();
                let mut out = vec![Vec::new()];
                let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
                for _ in 0..radius {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for &l in &letters {
                            if w.last() != Some(&-l) {
                                let mut v = w.clone();
                                v.push(l);
                                next.push(v);
                            }
                        }
                    }
                    out.extend(next.iter().cloned());
                    frontier = next;
                }
                out.into_iter().map(GroupElement::Word).collect::<Vec<_>>()
            }
            GroupSpec::Abelian { rank, steps: None } => {
                let mut out = Vec::new();
                let mut v = vec![0i64; *rank];
                l1_ball(&mut v, 0, radius as i64, &mut out);
                out
            }
            GroupSpec::Abelian { steps: Some(steps), .. } => {
                let mut seen = BTreeMap::from([(0i64, 0usize)]);
                let mut frontier = vec![0i64];
                for depth in 1..=radius {
                    let mut next = Vec::new();
                    for &x in &frontier {
                        for &s in steps {
                            for y in [x + s, x - s] {
                                if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(y) {
                                    e.insert(depth);
                                    next.push(y);
                                }
                            }
                        }
                    }
                    frontier = next;
                }
                seen.into_keys().map(|x| GroupElement::Vector(vec![x])).collect()
            }
            GroupSpec::Finite(fg) => (0..fg.order())
                .filter(|&i| fg.lengths[i] <= radius)
                .map(GroupElement::Index)
                .collect(),
        };
        out.sort_by_cached_key(|g| (self.len_unchecked(g), g.clone()));
        out
    }
}

fn l1_ball(v: &mut Vec<i64>, i: usize, budget: i64, out: &mut Vec<GroupElement>) {
    if i == v.len() {
        out.push(GroupElement::Vector(v.clone()));
        return;
    }
    for x in -budget..=budget {
        v[i] = x;
        l1_ball(v, i + 1, budget - x.abs(), out);
    }
    v[i] = 0;
}

/// Word length of `target` in `Z` for the generating set `{±s}`.
///
/// Steps of a geodesic commute, so they can be ordered to keep every partial
/// sum within `max|s|` of the segment `[0, target]`; a breadth-first search on
/// that window is therefore exact.
fn integer_word_length(steps: &[i64], target: i64) -> usize {
    let reach = steps.iter().copied().max().unwrap_or(1);
    let lo = target.min(0) - reach;
    let hi = target.max(0) + reach;
    let mut dist = vec![usize::MAX; (hi - lo + 1) as usize];
    dist[(0 - lo) as usize] = 0;
    let mut queue = VecDeque::from([0i64]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[(x - lo) as usize];
        if x == target {
            return dx;
        }
        for &s in steps {
            for y in [x + s, x - s] {
                if (lo..=hi).contains(&y) && dist[(y - lo) as usize] == usize::MAX {
                    dist[(y - lo) as usize] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    unreachable!("steps generate Z")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i32]) -> GroupElement {
        GroupElement::word(letters)
    }

    #[test]
    fn multiply_examples() {
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(f2.multiply(&w(&[1]), &w(&[-1])).unwrap(), f2.identity());
        let z2 = GroupSpec::abelian(2).unwrap();
        let p = z2.multiply(&GroupElement::vector(&[2, -3]), &GroupElement::vector(&[-2, 5])).unwrap();
        assert_eq!(p, GroupElement::vector(&[0, 2]));
        let z3 = GroupSpec::cyclic(3).unwrap();
        assert_eq!(z3.multiply(&GroupElement::index(1), &GroupElement::index(2)).unwrap(), GroupElement::index(0));
    }

    #[test]
    fn multiply_rejects_mismatched_elements() {
        let f2 = GroupSpec::free(2).unwrap();
        assert!(matches!(
            f2.multiply(&w(&[1]), &GroupElement::vector(&[1])),
            Err(Error::MismatchedGroup { .. })
        ));
        assert!(f2.multiply(&w(&[3]), &w(&[1])).is_err());
        // unreduced raw words are not canonical
        assert!(!f2.contains(&GroupElement::Word(vec![1, -1])));
        let z2 = GroupSpec::abelian(2).unwrap();
        assert!(z2.word_length(&GroupElement::vector(&[1, 2, 3])).is_err());
    }

    #[test]
    fn word_length_examples() {
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(f2.word_length(&w(&[1, 2, -1])).unwrap(), 3);
        assert_eq!(f2.word_length(&f2.identity()).unwrap(), 0);
        let z2 = GroupSpec::abelian(2).unwrap();
        assert_eq!(z2.word_length(&GroupElement::vector(&[2, -3])).unwrap(), 5);
    }

    #[test]
    fn distance_examples() {
        let f2 = GroupSpec::free(2).unwrap();
        let g = w(&[1, 2, -1, -1]);
        assert_eq!(f2.distance(&g, &g).unwrap(), 0);
        assert_eq!(f2.distance(&w(&[1]), &w(&[1, 2])).unwrap(), 1);
        let z2 = GroupSpec::abelian(2).unwrap();
        let d = z2.distance(&GroupElement::vector(&[1, 1]), &GroupElement::vector(&[-1, 0])).unwrap();
        assert_eq!(d, 3);
    }

    #[test]
    fn ball_examples() {
        let f2 = GroupSpec::free(2).unwrap();
        let b1 = f2.ball(1);
        assert_eq!(b1.len(), 5);
        assert_eq!(b1[0], f2.identity());
        assert_eq!(f2.ball(2).len(), 17);
        let z = GroupSpec::abelian(1).unwrap();
        let b3: Vec<_> = z.ball(3);
        assert_eq!(b3.len(), 7);
        assert_eq!(b3[0], GroupElement::vector(&[0]));
        assert_eq!(b3[1], GroupElement::vector(&[-1]));
        assert_eq!(b3[2], GroupElement::vector(&[1]));
    }

    #[test]
    fn free_group_ball_sizes() {
        for r in 1..=3usize {
            let spec = GroupSpec::free(r).unwrap();
            for radius in 0..=6usize {
                let expected: usize =
                    1 + (1..=radius).map(|j| 2 * r * (2 * r - 1).pow(j as u32 - 1)).sum::<usize>();
                assert_eq!(spec.ball(radius).len(), expected, "r={r} R={radius}");
            }
        }
    }

    #[test]
    fn finite_table_validation() {
        // not associative: a Latin square that is not a group table
        let bad = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert!(GroupSpec::finite(bad, &[1]).is_err());
        // Z/4 generated by 2 only reaches {0, 2}
        let z4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        assert!(matches!(GroupSpec::finite(z4.clone(), &[2]), Err(Error::InvalidGroup(_))));
        let ok = GroupSpec::finite(z4, &[1]).unwrap();
        assert_eq!(ok.generators(), vec![GroupElement::index(1), GroupElement::index(3)]);
        assert_eq!(ok.word_length(&GroupElement::index(2)).unwrap(), 2);
    }

    #[test]
    fn integers_with_two_and_three() {
        let z23 = GroupSpec::integers_with_steps(&[2, 3]).unwrap();
        let len = |x: i64| z23.word_length(&GroupElement::vector(&[x])).unwrap();
        assert_eq!(len(0), 0);
        assert_eq!(len(1), 2);
        assert_eq!(len(2), 1);
        assert_eq!(len(-3), 1);
        assert_eq!(len(4), 2);
        assert_eq!(len(5), 2);
        assert_eq!(len(7), 3);
        assert!(GroupSpec::integers_with_steps(&[2, 4]).is_err());
        // every element within the ball has the advertised length
        for g in z23.ball(3) {
            assert!(z23.word_length(&g).unwrap() <= 3);
        }
        assert_eq!(z23.ball(1).len(), 5);
    }
}
