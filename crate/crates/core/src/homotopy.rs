//! Pushforwards, elementary homotopies and combings.
//!
//! For maps `f, f′: X → Y` the elementary homotopy
//!
//! ```text
//! H(f,f′)(x₀,…,xₙ) = Σ_j (−1)^j (f(x₀),…,f(x_j),f′(x_j),…,f′(xₙ))
//! ```
//!
//! satisfies `H∘δ + δ∘H = f′_* − f_*`. A combing `(f_i)` running from the
//! constant base-point map to the identity turns the telescoping sum
//! `H = Σ_i H(f_i, f_{i+1})` into a contracting homotopy of the reduced
//! complex; on a finitely supported chain only the steps below the largest
//! stabilization index of its points contribute.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::chains::{is_degenerate, Chain, NormSpec};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};
use crate::scalar::{self, Scalar};

/// A total map between point sets, evaluated pointwise.
pub trait PointMap: Sync {
    fn apply(&self, x: &GroupElement) -> Result<GroupElement>;
}

impl<F> PointMap for F
where
    F: Fn(&GroupElement) -> Result<GroupElement> + Sync,
{
    fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self(x)
    }
}

/// A point map described by data, as read from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    Identity,
    Constant(GroupElement),
    /// Left multiplication `x ↦ g·x` in the given group.
    Translate(GroupSpec, GroupElement),
    /// Explicit finite table; points outside the table are rejected.
    Table(BTreeMap<GroupElement, GroupElement>),
    /// The `n`-th stage `f_n` of a combing.
    Stage(Box<Combing>, usize),
    /// `outer ∘ inner`.
    Compose(Box<MapSpec>, Box<MapSpec>),
}

impl PointMap for MapSpec {
    fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        match self {
            MapSpec::Identity => Ok(x.clone()),
            MapSpec::Constant(p) => Ok(p.clone()),
            MapSpec::Translate(group, g) => group.multiply(g, x),
            MapSpec::Table(entries) => {
                entries.get(x).cloned().ok_or_else(|| Error::OutsideDomain(x.to_string()))
            }
            MapSpec::Stage(combing, n) => combing.stage(*n, x),
            MapSpec::Compose(outer, inner) => outer.apply(&inner.apply(x)?),
        }
    }
}

/// `f_*(x₀,…,xₙ) = (f(x₀),…,f(xₙ))`, degenerate images dropped.
pub fn pushforward(f: &dyn PointMap, c: &Chain) -> Result<Chain> {
    let mut out = Chain::zero(c.degree());
    for (t, coeff) in c.terms() {
        let image = t.points().iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
        out.accumulate(image, coeff.clone());
    }
    Ok(out)
}

/// Adds `coeff · H(f,f′)(x)` given the images `fx = f(x)` and `gx = f′(x)`.
fn accumulate_elementary(out: &mut Chain, fx: &[GroupElement], gx: &[GroupElement], coeff: &Scalar) {
    if fx == gx {
        return;
    }
    for j in 0..fx.len() {
        if fx[j] == gx[j] {
            // (…, f(x_j), f′(x_j), …) is degenerate
            continue;
        }
        let mut points = Vec::with_capacity(fx.len() + 1);
        points.extend_from_slice(&fx[..=j]);
        points.extend_from_slice(&gx[j..]);
        if is_degenerate(&points) {
            continue;
        }
        let signed = if j % 2 == 0 { coeff.clone() } else { -coeff.clone() };
        out.accumulate(points, signed);
    }
}

/// The elementary homotopy `H(f,f′)` applied to `c`; raises the degree by one.
pub fn elementary_homotopy(f: &dyn PointMap, f_prime: &dyn PointMap, c: &Chain) -> Result<Chain> {
    let mut out = Chain::zero(c.degree() + 1);
    for (t, coeff) in c.terms() {
        let fx = t.points().iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
        let gx = t.points().iter().map(|x| f_prime.apply(x)).collect::<Result<Vec<_>>>()?;
        accumulate_elementary(&mut out, &fx, &gx, coeff);
    }
    Ok(out)
}

/// Outcome of an exact chain identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// `lhs − rhs`; zero exactly when the identity holds.
    pub discrepancy: Chain,
}

impl IdentityCheck {
    fn compare(lhs: &Chain, rhs: &Chain) -> Self {
        let discrepancy = lhs - rhs;
        IdentityCheck { holds: discrepancy.is_zero(), discrepancy }
    }
}

/// `H∘δ + δ∘H` for a degree-raising operator `h`; in degree 0 the `H∘δ`
/// term is absent (the reduced complex stops at the augmentation kernel).
fn homotopy_commutator(h: &dyn Fn(&Chain) -> Result<Chain>, c: &Chain) -> Result<Chain> {
    let mut lhs = h(c)?.boundary()?;
    if c.degree() > 0 {
        lhs = &lhs + &h(&c.boundary()?)?;
    }
    Ok(lhs)
}

/// Checks `H(f,f′)∘δ + δ∘H(f,f′) = f′_* − f_*` on `c`.
pub fn verify_homotopy_identity(f: &dyn PointMap, f_prime: &dyn PointMap, c: &Chain) -> Result<IdentityCheck> {
    verify_homotopy_identity_with(&|x: &Chain| elementary_homotopy(f, f_prime, x), f, f_prime, c)
}

/// Same check with a caller-supplied operator in place of `H(f,f′)`.
pub fn verify_homotopy_identity_with(
    h: &dyn Fn(&Chain) -> Result<Chain>,
    f: &dyn PointMap,
    f_prime: &dyn PointMap,
    c: &Chain,
) -> Result<IdentityCheck> {
    let lhs = homotopy_commutator(h, c)?;
    let rhs = &pushforward(f_prime, c)? - &pushforward(f, c)?;
    Ok(IdentityCheck::compare(&lhs, &rhs))
}

/// Observed `max d′(f x, f y) / (d(x,y) + 1)` over all pairs of `points`.
pub fn quasi_lipschitz_constant(
    f: &dyn PointMap,
    source: &GroupSpec,
    target: &GroupSpec,
    points: &[GroupElement],
) -> Result<Scalar> {
    let images = points.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
    let mut best = Scalar::zero();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate().skip(i + 1) {
            let d = source.distance(x, y)?;
            let d_img = target.distance(&images[i], &images[j])?;
            best = best.max(scalar::ratio(d_img as i64, d as i64 + 1));
        }
    }
    Ok(best)
}

/// The constants a combing is declared to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombingConstants {
    /// `C` in `d(f_n x, f_n y) ≤ C (d(x,y) + 1)`.
    pub quasi_lipschitz: Scalar,
    /// `S` in `d(f_n x, f_{n+1} x) ≤ S`.
    pub closeness: usize,
    /// `m` in `J(x) ≤ C′ (ℓ(x) + 1)^m`.
    pub growth_order: u32,
    /// `C′` in the growth bound.
    pub growth_constant: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombingRule {
    /// `f_n(g)` is the length-`n` prefix of the reduced word of `g`.
    FreePrefix,
    /// Unit steps toward `x`, exhausting coordinate 1 first, then 2, and so on.
    AbelianStaircase,
    /// Explicit paths `[f_0(x), f_1(x), …, x]`; `f_n(x) = x` past the end.
    Table(BTreeMap<GroupElement, Vec<GroupElement>>),
}

/// A synchronous combing `f_n: X → X` based at the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combing {
    group: GroupSpec,
    rule: CombingRule,
    constants: CombingConstants,
}

/// The prefix combing of the free group `F_r`: linear growth with `C = S = 1`.
pub fn free_group_combing(rank: usize) -> Result<Combing> {
    Ok(Combing {
        group: GroupSpec::free(rank)?,
        rule: CombingRule::FreePrefix,
        constants: CombingConstants {
            quasi_lipschitz: Scalar::one(),
            closeness: 1,
            growth_order: 1,
            growth_constant: Scalar::one(),
        },
    })
}

/// A staircase geodesic combing of `Z^n` with declared `C = 2`, `S = 1`.
pub fn abelian_combing(rank: usize) -> Result<Combing> {
    Ok(Combing {
        group: GroupSpec::abelian(rank)?,
        rule: CombingRule::AbelianStaircase,
        constants: CombingConstants {
            quasi_lipschitz: scalar::int(2),
            closeness: 1,
            growth_order: 1,
            growth_constant: Scalar::one(),
        },
    })
}

impl Combing {
    /// A combing given by explicit paths. Each path must end at its point.
    pub fn from_table(
        group: GroupSpec,
        paths: BTreeMap<GroupElement, Vec<GroupElement>>,
        constants: CombingConstants,
    ) -> Result<Self> {
        for (x, path) in &paths {
            group.check(x)?;
            for p in path {
                group.check(p)?;
            }
            if path.last() != Some(x) {
                return Err(Error::InvalidCombing(format!("path of {x} does not end at {x}")));
            }
        }
        Ok(Combing { group, rule: CombingRule::Table(paths), constants })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rule(&self) -> &CombingRule {
        &self.rule
    }

    pub fn constants(&self) -> &CombingConstants {
        &self.constants
    }

    pub fn base_point(&self) -> GroupElement {
        self.group.identity()
    }

    /// `f_n(x)`.
    pub fn stage(&self, n: usize, x: &GroupElement) -> Result<GroupElement> {
        self.group.check(x)?;
        Ok(match (&self.rule, x) {
            (CombingRule::FreePrefix, GroupElement::Word(w)) => GroupElement::Word(w[..n.min(w.len())].to_vec()),
            (CombingRule::AbelianStaircase, GroupElement::Vector(v)) => {
                let mut budget = n as i64;
                let mut out = vec![0i64; v.len()];
                for (o, &c) in out.iter_mut().zip(v) {
                    let step = budget.min(c.abs());
                    *o = step * c.signum();
                    budget -= step;
                }
                GroupElement::Vector(out)
            }
            (CombingRule::Table(paths), _) => {
                let path = paths.get(x).ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
                path.get(n).cloned().unwrap_or_else(|| x.clone())
            }
            _ => unreachable!("combing rule matches its group family"),
        })
    }

    /// Least `N` with `f_n(x) = x` for every `n ≥ N`.
    pub fn stabilization(&self, x: &GroupElement) -> Result<usize> {
        self.group.check(x)?;
        Ok(match &self.rule {
            CombingRule::FreePrefix | CombingRule::AbelianStaircase => self.group.len_unchecked(x),
            CombingRule::Table(paths) => {
                let path = paths.get(x).ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
                path.iter().rposition(|p| p != x).map_or(0, |i| i + 1)
            }
        })
    }

    /// `[f_0(x), …, f_N(x)]` with `N` the stabilization index.
    pub fn path(&self, x: &GroupElement) -> Result<Vec<GroupElement>> {
        let n = self.stabilization(x)?;
        (0..=n).map(|i| self.stage(i, x)).collect()
    }

    /// `J(x)`, the number of `n` with `f_n(x) ≠ f_{n+1}(x)`.
    pub fn jump_count(&self, x: &GroupElement) -> Result<usize> {
        let path = self.path(x)?;
        Ok(path.windows(2).filter(|p| p[0] != p[1]).count())
    }

    /// The stage `f_n` as a point map.
    pub fn stage_map(&self, n: usize) -> MapSpec {
        MapSpec::Stage(Box::new(self.clone()), n)
    }
}

/// Per-length summary of `J` in a combing report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpShell {
    pub length: usize,
    pub points: usize,
    pub min_jumps: usize,
    pub max_jumps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombingReport {
    pub radius: usize,
    pub points: usize,
    pub max_stabilization: usize,
    /// `max d(f_n x, f_n y) / (d(x,y) + 1)`.
    pub quasi_lipschitz_observed: Scalar,
    /// `max d(f_n x, f_n y) / d(x,y)` over `x ≠ y`.
    pub lipschitz_observed: Scalar,
    pub closeness_observed: usize,
    /// `max J(x) / (ℓ(x) + 1)^m` for the declared order `m`.
    pub growth_constant_observed: Scalar,
    pub jumps: Vec<JumpShell>,
    pub base_point_ok: bool,
    pub stabilization_ok: bool,
    pub quasi_lipschitz_ok: bool,
    pub closeness_ok: bool,
    pub growth_ok: bool,
    pub axioms_ok: bool,
    /// A few human-readable witnesses of failed axioms.
    pub violations: Vec<String>,
}

const MAX_VIOLATIONS: usize = 8;

/// Exhaustively checks the combing axioms on `ball(radius)`.
pub fn verify_combing(combing: &Combing, radius: usize) -> Result<CombingReport> {
    let group = &combing.group;
    let points = group.ball(radius);
    let pt = combing.base_point();
    let stabs = points.iter().map(|x| combing.stabilization(x)).collect::<Result<Vec<_>>>()?;
    let max_stab = stabs.iter().copied().max().unwrap_or(0);
    // stages[n][i] = f_n(points[i]) for n ≤ max_stab + 1
    let stages = (0..=max_stab + 1)
        .map(|n| points.iter().map(|x| combing.stage(n, x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let mut note = |msg: String| {
        if violations.len() < MAX_VIOLATIONS {
            violations.push(msg);
        }
    };

    let mut base_point_ok = true;
    let mut stabilization_ok = true;
    let mut closeness_observed = 0;
    for (i, x) in points.iter().enumerate() {
        if stages[0][i] != pt {
            base_point_ok = false;
            note(format!("f_0({x}) = {} is not the base point", stages[0][i]));
        }
        for stage in &stages[stabs[i]..] {
            if stage[i] != *x {
                stabilization_ok = false;
                note(format!("f_n({x}) = {} ≠ {x} beyond the stabilization index {}", stage[i], stabs[i]));
                break;
            }
        }
        for n in 0..=max_stab {
            let d = group.dist_unchecked(&stages[n][i], &stages[n + 1][i]);
            if d > combing.constants.closeness {
                note(format!("d(f_{n}({x}), f_{}({x})) = {d} exceeds S", n + 1));
            }
            closeness_observed = closeness_observed.max(d);
        }
    }

    // Pairwise quasi-Lipschitz scan, parallel over the first point.
    let (ql, lip, witness) = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut ql = Scalar::zero();
            let mut lip = Scalar::zero();
            let mut witness = None;
            for j in i + 1..points.len() {
                let d = group.dist_unchecked(&points[i], &points[j]) as i64;
                for (n, stage) in stages.iter().enumerate() {
                    let di = group.dist_unchecked(&stage[i], &stage[j]) as i64;
                    let q = scalar::ratio(di, d + 1);
                    if q > combing.constants.quasi_lipschitz && witness.is_none() {
                        witness = Some(format!(
                            "d(f_{n}({}), f_{n}({})) = {di} exceeds C·(d+1) with d = {d}",
                            points[i], points[j]
                        ));
                    }
                    ql = ql.max(q);
                    lip = lip.max(scalar::ratio(di, d));
                }
            }
            (ql, lip, witness)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((Scalar::zero(), Scalar::zero(), None), |(aq, al, aw), (q, l, w)| {
            (aq.max(q), al.max(l), aw.or(w))
        });
    if let Some(w) = witness {
        note(w);
    }

    let m = combing.constants.growth_order;
    let mut growth_constant_observed = Scalar::zero();
    let mut shells: BTreeMap<usize, JumpShell> = BTreeMap::new();
    for (i, x) in points.iter().enumerate() {
        let jumps = (0..=max_stab).filter(|&n| stages[n][i] != stages[n + 1][i]).count();
        let len = group.len_unchecked(x);
        let bound = scalar::pow(&scalar::int(len as i64 + 1), m);
        growth_constant_observed = growth_constant_observed.max(scalar::int(jumps as i64) / bound);
        let shell = shells.entry(len).or_insert(JumpShell { length: len, points: 0, min_jumps: jumps, max_jumps: 0 });
        shell.points += 1;
        shell.min_jumps = shell.min_jumps.min(jumps);
        shell.max_jumps = shell.max_jumps.max(jumps);
    }

    let quasi_lipschitz_ok = ql <= combing.constants.quasi_lipschitz;
    let closeness_ok = closeness_observed <= combing.constants.closeness;
    let growth_ok = growth_constant_observed <= combing.constants.growth_constant;
    if !growth_ok {
        note(format!("J(x)/(ℓ(x)+1)^{m} reaches {growth_constant_observed}"));
    }
    Ok(CombingReport {
        radius,
        points: points.len(),
        max_stabilization: max_stab,
        quasi_lipschitz_observed: ql,
        lipschitz_observed: lip,
        closeness_observed,
        growth_constant_observed,
        jumps: shells.into_values().collect(),
        base_point_ok,
        stabilization_ok,
        quasi_lipschitz_ok,
        closeness_ok,
        growth_ok,
        axioms_ok: base_point_ok && stabilization_ok && quasi_lipschitz_ok && closeness_ok && growth_ok,
        violations,
    })
}

/// `φ − α(φ)·δ_pt` for degree 0; other degrees are returned unchanged.
pub fn reduce(c: &Chain, base_point: &GroupElement) -> Result<Chain> {
    if c.degree() != 0 {
        return Ok(c.clone());
    }
    let aug = c.augmentation()?;
    let mut out = c.clone();
    out.add_scaled(&Chain::point(base_point.clone()), &-aug);
    Ok(out)
}

/// `H = Σ_i H(f_i, f_{i+1})` applied to `chain`.
///
/// With `reduced` set, a degree-0 input is first projected onto the
/// augmentation kernel, where `δH = id` holds.
pub fn contracting_homotopy(combing: &Combing, chain: &Chain, reduced: bool) -> Result<Chain> {
    let input = if reduced { reduce(chain, &combing.base_point())? } else { chain.clone() };
    let mut paths: BTreeMap<&GroupElement, Vec<GroupElement>> = BTreeMap::new();
    for (t, _) in input.terms() {
        for x in t.points() {
            if !paths.contains_key(x) {
                paths.insert(x, combing.path(x)?);
            }
        }
    }
    let mut out = Chain::zero(input.degree() + 1);
    let mut fx = Vec::new();
    let mut gx = Vec::new();
    for (t, coeff) in input.terms() {
        let tuple_paths: Vec<&Vec<GroupElement>> = t.points().iter().map(|x| &paths[x]).collect();
        let steps = tuple_paths.iter().map(|p| p.len() - 1).max().unwrap_or(0);
        for i in 0..steps {
            fx.clear();
            gx.clear();
            for (x, p) in t.points().iter().zip(&tuple_paths) {
                fx.push(p.get(i).unwrap_or(x).clone());
                gx.push(p.get(i + 1).unwrap_or(x).clone());
            }
            accumulate_elementary(&mut out, &fx, &gx, coeff);
        }
    }
    Ok(out)
}

/// Checks `δH + Hδ = id` on `chain` (in degree 0, `δH = id`).
pub fn verify_contraction(combing: &Combing, chain: &Chain) -> Result<IdentityCheck> {
    let lhs = homotopy_commutator(&|c: &Chain| contracting_homotopy(combing, c, false), chain)?;
    Ok(IdentityCheck::compare(&lhs, chain))
}

/// Maximum of the rescaled norm over one shell `ℓ(x₀) = shell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellProfile {
    pub shell: usize,
    pub tuples: usize,
    pub max_ratio: Scalar,
    pub witness: Option<Vec<GroupElement>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileReport {
    pub k: u32,
    pub degree: usize,
    pub length: usize,
    pub radius: usize,
    pub growth_order: u32,
    pub shells: Vec<ShellProfile>,
    /// Largest control radius among all `H(δ_t)`.
    pub max_output_control_radius: usize,
}

impl ProfileReport {
    /// Maximum ratio over shells in `range`; zero if the range is empty.
    pub fn max_over(&self, range: std::ops::RangeInclusive<usize>) -> Scalar {
        self.shells
            .iter()
            .filter(|s| range.contains(&s.shell))
            .map(|s| s.max_ratio.clone())
            .max()
            .unwrap_or_else(Scalar::zero)
    }
}

/// Nondegenerate `(n+1)`-tuples with every `ℓ(x_i) ≤ length` and pairwise
/// distances `≤ radius`, grouped by the index of `x₀` in `ball(length)`.
pub fn controlled_tuples(
    group: &GroupSpec,
    degree: usize,
    length: usize,
    radius: usize,
) -> Vec<(GroupElement, Vec<Vec<GroupElement>>)> {
    let offsets = group.ball(radius);
    group
        .ball(length)
        .into_par_iter()
        .map(|x0| {
            let near: Vec<GroupElement> = offsets
                .iter()
                .map(|b| group.mul_unchecked(&x0, b))
                .filter(|y| group.len_unchecked(y) <= length)
                .collect();
            let mut out = Vec::new();
            let mut current = vec![x0.clone()];
            extend_tuples(group, &near, degree, radius, &mut current, &mut out);
            (x0, out)
        })
        .collect()
}

fn extend_tuples(
    group: &GroupSpec,
    near: &[GroupElement],
    degree: usize,
    radius: usize,
    current: &mut Vec<GroupElement>,
    out: &mut Vec<Vec<GroupElement>>,
) {
    if current.len() == degree + 1 {
        out.push(current.clone());
        return;
    }
    for y in near {
        if current.last() == Some(y) {
            continue;
        }
        if current.iter().skip(1).all(|x| group.dist_unchecked(x, y) <= radius) {
            current.push(y.clone());
            extend_tuples(group, near, degree, radius, current, out);
            current.pop();
        }
    }
}

/// Shell maxima of `‖H(δ_t)‖^k / (ℓ(x₀)+…+ℓ(xₙ)+1)^{k+m}` over controlled tuples.
pub fn homotopy_norm_profile(
    combing: &Combing,
    k: u32,
    degree: usize,
    length: usize,
    radius: usize,
) -> Result<ProfileReport> {
    let group = &combing.group;
    let m = combing.constants.growth_order;
    let norm = NormSpec::Polynomial(k);
    let per_point = controlled_tuples(group, degree, length, radius)
        .into_par_iter()
        .map(|(x0, tuples)| -> Result<_> {
            let mut best = Scalar::zero();
            let mut witness = None;
            let mut control = 0;
            for t in &tuples {
                let h = contracting_homotopy(combing, &Chain::basis(t.clone())?, false)?;
                let total: usize = t.iter().map(|x| group.len_unchecked(x)).sum();
                let denom = scalar::pow(&scalar::int(total as i64 + 1), k + m);
                let r = h.weighted_norm(group, &norm)? / denom;
                control = control.max(h.control_radius(group)?);
                if witness.is_none() || r > best {
                    best = r;
                    witness = Some(t.clone());
                }
            }
            Ok((group.len_unchecked(&x0), tuples.len(), best, witness, control))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut shells: BTreeMap<usize, ShellProfile> = BTreeMap::new();
    let mut max_control = 0;
    for (shell, count, best, witness, control) in per_point {
        max_control = max_control.max(control);
        let entry = shells.entry(shell).or_insert(ShellProfile {
            shell,
            tuples: 0,
            max_ratio: Scalar::zero(),
            witness: None,
        });
        entry.tuples += count;
        if witness.is_some() && (entry.witness.is_none() || best > entry.max_ratio) {
            entry.max_ratio = best;
            entry.witness = witness;
        }
    }
    Ok(ProfileReport {
        k,
        degree,
        length,
        radius,
        growth_order: m,
        shells: shells.into_values().collect(),
        max_output_control_radius: max_control,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn w(letters: &[i32]) -> GroupElement {
        GroupElement::word(letters)
    }

    fn v(c: &[i64]) -> GroupElement {
        GroupElement::vector(c)
    }

    #[test]
    fn pushforward_examples() {
        let c = Chain::from_terms(1, [(vec![w(&[1]), w(&[2])], int(3)), (vec![w(&[1, 2]), w(&[])], int(-1))]).unwrap();
        assert_eq!(pushforward(&MapSpec::Identity, &c).unwrap(), c);
        assert!(pushforward(&MapSpec::Constant(w(&[])), &c).unwrap().is_zero());

        let f1 = free_group_combing(2).unwrap().stage_map(1);
        let t = Chain::basis(vec![w(&[1, 2]), w(&[1])]).unwrap();
        assert!(pushforward(&f1, &t).unwrap().is_zero());
    }

    #[test]
    fn table_map_rejects_points_outside_domain() {
        let table = MapSpec::Table(BTreeMap::from([(w(&[1]), w(&[2]))]));
        let c = Chain::basis(vec![w(&[1]), w(&[2])]).unwrap();
        assert!(matches!(pushforward(&table, &c), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn elementary_homotopy_in_degree_zero() {
        let x = w(&[1]);
        let f = MapSpec::Constant(w(&[]));
        let h = elementary_homotopy(&f, &MapSpec::Identity, &Chain::point(x.clone())).unwrap();
        assert_eq!(h, Chain::basis(vec![w(&[]), x.clone()]).unwrap());
        let same = elementary_homotopy(&f, &f, &Chain::point(x)).unwrap();
        assert!(same.is_zero());
    }

    #[test]
    fn elementary_homotopy_identity_versus_constant() {
        // H(id, pt)(a, b) = (a, pt, pt) − (a, b, pt); the first term is degenerate.
        let (a, b, pt) = (w(&[1]), w(&[2]), w(&[1, 1]));
        let h = elementary_homotopy(&MapSpec::Identity, &MapSpec::Constant(pt.clone()), &Chain::basis(vec![a.clone(), b.clone()]).unwrap())
            .unwrap();
        let expected = Chain::from_terms(2, [(vec![a, b, pt], int(-1))]).unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn sign_flipped_homotopy_is_caught() {
        let f2 = GroupSpec::free(2).unwrap();
        let f = MapSpec::Identity;
        let g = MapSpec::Translate(f2, w(&[2]));
        let c = Chain::basis(vec![w(&[1]), w(&[-2]), w(&[1, 1])]).unwrap();
        assert!(verify_homotopy_identity(&f, &g, &c).unwrap().holds);
        let flipped = |x: &Chain| elementary_homotopy(&f, &g, x).map(|h| -&h);
        let check = verify_homotopy_identity_with(&flipped, &f, &g, &c).unwrap();
        assert!(!check.holds);
        assert!(!check.discrepancy.is_zero());
    }

    #[test]
    fn free_combing_examples() {
        let comb = free_group_combing(2).unwrap();
        assert_eq!(comb.stage(1, &w(&[1, 2])).unwrap(), w(&[1]));
        for n in 0..4 {
            assert_eq!(comb.stage(n, &w(&[])).unwrap(), w(&[]));
        }
        assert_eq!(comb.jump_count(&w(&[1, 2, 1])).unwrap(), 3);
        assert_eq!(comb.stabilization(&w(&[1, 2, 1])).unwrap(), 3);
    }

    #[test]
    fn staircase_examples() {
        let comb = abelian_combing(2).unwrap();
        assert_eq!(comb.stage(2, &v(&[2, 1])).unwrap(), v(&[2, 0]));
        assert_eq!(comb.stage(3, &v(&[-1, -4])).unwrap(), v(&[-1, -2]));
        for n in 0..3 {
            assert_eq!(comb.stage(n, &v(&[0, 0])).unwrap(), v(&[0, 0]));
        }
        assert_eq!(comb.jump_count(&v(&[2, -3])).unwrap(), 5);
    }

    #[test]
    fn verify_combing_on_trivial_ball() {
        let report = verify_combing(&free_group_combing(2).unwrap(), 0).unwrap();
        assert_eq!(report.points, 1);
        assert!(report.axioms_ok);
    }

    #[test]
    fn staircase_respects_declared_constants() {
        let report = verify_combing(&abelian_combing(2).unwrap(), 4).unwrap();
        assert!(report.axioms_ok, "{:?}", report.violations);
        assert_eq!(report.closeness_observed, 1);
        assert!(report.quasi_lipschitz_observed <= int(2));
    }

    #[test]
    fn corrupted_table_combing_fails_closeness() {
        let f2 = GroupSpec::free(2).unwrap();
        let prefix = free_group_combing(2).unwrap();
        let mut paths = BTreeMap::new();
        for x in f2.ball(5) {
            let mut path = prefix.path(&x).unwrap();
            if path.len() > 2 {
                // f_1 ≡ pt, so f_1 → f_2 jumps by two letters
                path[1] = f2.identity();
            }
            paths.insert(x, path);
        }
        let comb = Combing::from_table(f2, paths, prefix.constants().clone()).unwrap();
        let report = verify_combing(&comb, 5).unwrap();
        assert!(!report.closeness_ok);
        assert!(!report.axioms_ok);
        assert_eq!(report.closeness_observed, 2);
        assert!(!report.violations.is_empty());
        // outside the table the combing is undefined
        assert!(matches!(comb.stage(0, &w(&[1, 1, 1, 1, 1, 1])), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn table_paths_must_end_at_their_point() {
        let f2 = GroupSpec::free(2).unwrap();
        let paths = BTreeMap::from([(w(&[1]), vec![w(&[]), w(&[2])])]);
        let constants = free_group_combing(2).unwrap().constants().clone();
        assert!(Combing::from_table(f2, paths, constants).is_err());
    }

    #[test]
    fn contraction_on_the_integers() {
        let comb = abelian_combing(1).unwrap();
        let phi = &Chain::point(v(&[1])) - &Chain::point(v(&[0]));
        let h = contracting_homotopy(&comb, &phi, true).unwrap();
        assert_eq!(h, Chain::basis(vec![v(&[0]), v(&[1])]).unwrap());
        assert_eq!(h.boundary().unwrap(), phi);
        assert!(contracting_homotopy(&comb, &Chain::zero(2), true).unwrap().is_zero());
    }

    #[test]
    fn reduced_flag_projects_degree_zero() {
        let comb = free_group_combing(2).unwrap();
        let phi = Chain::point(w(&[1, 2]));
        let h = contracting_homotopy(&comb, &phi, true).unwrap();
        let reduced = reduce(&phi, &w(&[])).unwrap();
        assert_eq!(h.boundary().unwrap(), reduced);
        assert!(verify_contraction(&comb, &reduced).unwrap().holds);
        assert!(!verify_contraction(&comb, &phi).unwrap().holds);
    }

    #[test]
    fn profile_degree_zero_matches_jump_count() {
        let comb = free_group_combing(2).unwrap();
        let report = homotopy_norm_profile(&comb, 0, 0, 4, 0).unwrap();
        assert_eq!(report.shells[0].max_ratio, int(0));
        for s in &report.shells {
            // ‖H(δ_g)‖^0 = J(g) = ℓ(g)
            assert_eq!(s.max_ratio, ratio(s.shell as i64, s.shell as i64 + 1));
            assert!(s.max_ratio < int(1));
        }
    }

    #[test]
    fn controlled_tuples_respect_radius() {
        let f2 = GroupSpec::free(2).unwrap();
        for (_, tuples) in controlled_tuples(&f2, 2, 2, 1) {
            for t in tuples {
                assert!(!is_degenerate(&t));
                let c = Chain::basis(t).unwrap();
                assert!(c.control_radius(&f2).unwrap() <= 1);
            }
        }
    }

    #[test]
    fn quasi_lipschitz_between_generating_sets() {
        let z1 = GroupSpec::abelian(1).unwrap();
        let z23 = GroupSpec::integers_with_steps(&[2, 3]).unwrap();
        let pts = z1.ball(8);
        let forward = quasi_lipschitz_constant(&MapSpec::Identity, &z1, &z23, &pts).unwrap();
        let backward = quasi_lipschitz_constant(&MapSpec::Identity, &z23, &z1, &pts).unwrap();
        assert!(forward <= int(1));
        assert!(backward <= int(3));
    }
}
