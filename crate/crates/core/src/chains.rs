//! Finitely supported chains on tuples of group elements.
//!
//! A degree-`n` chain is a finitely supported function on nondegenerate
//! `(n+1)`-tuples `(x₀, …, xₙ)`, i.e. tuples with `x_j ≠ x_{j+1}`. Degenerate
//! tuples produced by faces, pushforwards or homotopies are projected to zero
//! on insertion, so every stored term is a basis vector of the normalized
//! complex and no stored coefficient is zero.
//!
//! ```
//! use tempered::chains::Chain;
//! use tempered::groups::GroupElement as G;
//!
//! let (a, b, c) = (G::word(&[1]), G::word(&[2]), G::word(&[1, 2]));
//! let t = Chain::basis(vec![a.clone(), b.clone(), c.clone()]).unwrap();
//! let dt = t.boundary().unwrap();
//! assert_eq!(dt.len(), 3);
//! assert!(dt.boundary().unwrap().is_zero());
//! ```

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};
use crate::scalar::{self, Scalar};

/// A nondegenerate tuple `(x₀, …, xₙ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(Vec<GroupElement>);

impl Tuple {
    pub fn new(points: Vec<GroupElement>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegreeMismatch { expected: "at least one point".into(), found: 0 });
        }
        if let Some(p) = points.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DegenerateTuple(p[0].to_string()));
        }
        Ok(Tuple(points))
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.0
    }

    pub fn into_points(self) -> Vec<GroupElement> {
        self.0
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn is_degenerate(points: &[GroupElement]) -> bool {
    points.windows(2).any(|p| p[0] == p[1])
}

/// A finitely supported chain of fixed degree with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Tuple, Scalar>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    /// The basis chain `δ_t` of a nondegenerate tuple.
    pub fn basis(points: Vec<GroupElement>) -> Result<Self> {
        let t = Tuple::new(points)?;
        let mut c = Chain::zero(t.degree());
        c.terms.insert(t, Scalar::one());
        Ok(c)
    }

    /// `δ_x` in degree 0.
    pub fn point(x: GroupElement) -> Self {
        Chain::basis(vec![x]).expect("a single point is nondegenerate")
    }

    /// Builds a chain from explicit terms, summing repeated tuples.
    ///
    /// Unlike the internal projection used by the chain operations, a
    /// degenerate input tuple is an error here.
    pub fn from_terms<I>(degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<GroupElement>, Scalar)>,
    {
        let mut c = Chain::zero(degree);
        for (points, coeff) in terms {
            let t = Tuple::new(points)?;
            if t.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree.to_string(), found: t.degree() });
            }
            c.add_tuple(t, coeff);
        }
        Ok(c)
    }

    /// Adds `coeff · (points)`, dropping the term if the tuple is degenerate.
    pub(crate) fn accumulate(&mut self, points: Vec<GroupElement>, coeff: Scalar) {
        debug_assert_eq!(points.len(), self.degree + 1);
        if is_degenerate(&points) {
            return;
        }
        self.add_tuple(Tuple(points), coeff);
    }

    fn add_tuple(&mut self, t: Tuple, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, points: &[GroupElement]) -> Scalar {
        self.terms.get(&Tuple(points.to_vec())).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, factor: &Scalar) -> Chain {
        if factor.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * factor)).collect(),
        }
    }

    /// In-place `self += factor · other`.
    pub fn add_scaled(&mut self, other: &Chain, factor: &Scalar) {
        assert_eq!(self.degree, other.degree, "adding chains of different degrees");
        for (t, c) in &other.terms {
            self.add_tuple(t.clone(), c * factor);
        }
    }

    /// Errors unless every point of the support belongs to `group`.
    pub fn check_group(&self, group: &GroupSpec) -> Result<()> {
        for t in self.terms.keys() {
            for x in &t.0 {
                group.check(x)?;
            }
        }
        Ok(())
    }

    /// The simplicial boundary `δ(x₀,…,xₙ) = Σ (−1)^j (x₀,…,x̂_j,…,xₙ)`.
    pub fn boundary(&self) -> Result<Chain> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: "degree ≥ 1 (use augmentation)".into(), found: 0 });
        }
        let mut out = Chain::zero(self.degree - 1);
        for (t, c) in &self.terms {
            for j in 0..t.0.len() {
                let mut face = t.0.clone();
                face.remove(j);
                let coeff = if j % 2 == 0 { c.clone() } else { -c.clone() };
                out.accumulate(face, coeff);
            }
        }
        Ok(out)
    }

    /// Sum of coefficients of a degree-0 chain.
    pub fn augmentation(&self) -> Result<Scalar> {
        if self.degree != 0 {
            return Err(Error::DegreeMismatch { expected: "0".into(), found: self.degree });
        }
        Ok(self.terms.values().fold(Scalar::zero(), |acc, c| acc + c))
    }

    /// `Σ |φ(t)| · w(t)` with the symmetric tuple weight of `spec`.
    pub fn weighted_norm(&self, group: &GroupSpec, spec: &NormSpec) -> Result<Scalar> {
        self.check_group(group)?;
        Ok(self.terms.iter().fold(Scalar::zero(), |acc, (t, c)| {
            let total: usize = t.0.iter().map(|x| group.len_unchecked(x)).sum();
            acc + c.abs() * spec.weight(total)
        }))
    }

    /// Least `R` with `d(x_i, x_j) ≤ R` across every tuple of the support.
    pub fn control_radius(&self, group: &GroupSpec) -> Result<usize> {
        self.check_group(group)?;
        let mut radius = 0;
        for t in self.terms.keys() {
            for (i, x) in t.0.iter().enumerate() {
                for y in &t.0[i + 1..] {
                    radius = radius.max(group.dist_unchecked(x, y));
                }
            }
        }
        Ok(radius)
    }

    /// Translates every tuple diagonally: `g·(x₀,…,xₙ) = (gx₀,…,gxₙ)`.
    pub fn diagonal_action(&self, group: &GroupSpec, g: &GroupElement) -> Result<Chain> {
        group.check(g)?;
        self.check_group(group)?;
        let mut out = Chain::zero(self.degree);
        for (t, c) in &self.terms {
            let image = t.0.iter().map(|x| group.mul_unchecked(g, x)).collect();
            out.add_tuple(Tuple(image), c.clone());
        }
        Ok(out)
    }
}

/// Convolution `(φ ∗ ψ)(g) = Σ_h φ(h) ψ(h⁻¹g)` of degree-0 chains.
pub fn convolve(group: &GroupSpec, phi: &Chain, psi: &Chain) -> Result<Chain> {
    for c in [phi, psi] {
        if c.degree != 0 {
            return Err(Error::DegreeMismatch { expected: "0".into(), found: c.degree });
        }
        c.check_group(group)?;
    }
    let mut out = Chain::zero(0);
    for (a, ca) in &phi.terms {
        for (b, cb) in &psi.terms {
            out.accumulate(vec![group.mul_unchecked(&a.0[0], &b.0[0])], ca * cb);
        }
    }
    Ok(out)
}

impl Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{c}·{t}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which weight a norm puts on a tuple of total length `L = ℓ(x₀)+…+ℓ(xₙ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormSpec {
    /// `(L + 1)^k`; `k = 0` is the plain ℓ¹ norm.
    Polynomial(u32),
    /// `α^L` with `α > 1`.
    Exponential(Scalar),
}

impl NormSpec {
    pub fn exponential(alpha: Scalar) -> Result<Self> {
        if alpha <= Scalar::one() {
            return Err(Error::Parse(format!("exponential base must exceed 1, got {alpha}")));
        }
        Ok(NormSpec::Exponential(alpha))
    }

    pub fn weight(&self, total_length: usize) -> Scalar {
        match self {
            NormSpec::Polynomial(k) => scalar::pow(&scalar::int(total_length as i64 + 1), *k),
            NormSpec::Exponential(alpha) => scalar::pow(alpha, total_length as u32),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Polynomial(k) => write!(f, "‖·‖^{k}"),
            NormSpec::Exponential(a) => write!(f, "|||·|||_{a}"),
        }
    }
}
