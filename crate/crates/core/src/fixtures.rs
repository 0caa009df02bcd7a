//! Seeded random fixtures: chains, point maps and resolution elements drawn
//! from balls of a group. Used by the test suites and by the CLI `--seed`
//! option so that every randomized run is reproducible.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::Chain;
use crate::groups::{GroupElement, GroupSpec};
use crate::homotopy::MapSpec;
use crate::resolutions::ResolutionElement;
use crate::scalar::{self, Scalar};

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational with small numerator and denominator.
pub fn coefficient(rng: &mut FixtureRng) -> Scalar {
    loop {
        let numer = rng.gen_range(-5i64..=5);
        if numer != 0 {
            return scalar::ratio(numer, rng.gen_range(1i64..=3));
        }
    }
}

/// A random degree-`degree` chain with up to `max_terms` terms on `ball(radius)`.
pub fn random_chain(
    rng: &mut FixtureRng,
    group: &GroupSpec,
    degree: usize,
    radius: usize,
    max_terms: usize,
) -> Chain {
    let points = group.ball(radius);
    random_chain_on(rng, &points, degree, max_terms)
}

/// Same, drawing points from an explicit list (which needs two distinct
/// points for positive degree).
pub fn random_chain_on(rng: &mut FixtureRng, points: &[GroupElement], degree: usize, max_terms: usize) -> Chain {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut tuple: Vec<GroupElement> = Vec::with_capacity(degree + 1);
        while tuple.len() <= degree {
            let x = points.choose(rng).expect("nonempty point set").clone();
            if tuple.last() != Some(&x) {
                tuple.push(x);
            }
        }
        out.push((tuple, coefficient(rng)));
    }
    Chain::from_terms(degree, out).expect("sampled tuples are nondegenerate")
}

/// A random chain of the reduced complex: in degree 0 the augmentation is
/// cancelled by a multiple of `δ_e`.
pub fn random_reduced_chain(
    rng: &mut FixtureRng,
    group: &GroupSpec,
    degree: usize,
    radius: usize,
    max_terms: usize,
) -> Chain {
    let mut c = random_chain(rng, group, degree, radius, max_terms);
    if degree == 0 {
        let aug = c.augmentation().expect("degree 0");
        c.add_scaled(&Chain::point(group.identity()), &-aug);
    }
    c
}

/// A table-backed map sending each point of `ball(domain_radius)` to a random
/// point of `ball(image_radius)`.
pub fn random_table_map(
    rng: &mut FixtureRng,
    group: &GroupSpec,
    domain_radius: usize,
    image_radius: usize,
) -> MapSpec {
    let targets = group.ball(image_radius);
    let entries: BTreeMap<GroupElement, GroupElement> = group
        .ball(domain_radius)
        .into_iter()
        .map(|x| (x, targets.choose(rng).expect("nonempty ball").clone()))
        .collect();
    MapSpec::Table(entries)
}

/// A random element of `ℝ[F_r]^r` supported in `ball(radius)`.
pub fn random_resolution_element(
    rng: &mut FixtureRng,
    group: &GroupSpec,
    rank: usize,
    radius: usize,
    max_terms: usize,
) -> ResolutionElement {
    let points = group.ball(radius);
    let components = (0..rank)
        .map(|_| {
            if rng.gen_bool(0.25) {
                Chain::zero(0)
            } else {
                random_chain_on(rng, &points, 0, max_terms)
            }
        })
        .collect();
    ResolutionElement::new(components).expect("degree-0 components")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        let f2 = GroupSpec::free(2).unwrap();
        let a = random_chain(&mut rng(7), &f2, 3, 3, 5);
        let b = random_chain(&mut rng(7), &f2, 3, 3, 5);
        assert_eq!(a, b);
        assert_eq!(a.degree(), 3);
        assert!(a.check_group(&f2).is_ok());
    }

    #[test]
    fn reduced_chains_have_zero_augmentation() {
        let z2 = GroupSpec::abelian(2).unwrap();
        let mut r = rng(1);
        for _ in 0..20 {
            let c = random_reduced_chain(&mut r, &z2, 0, 4, 4);
            assert_eq!(c.augmentation().unwrap(), scalar::int(0));
        }
    }
}
