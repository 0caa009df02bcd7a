//! Rips complexes of finite metric spaces and their simplicial homology.

use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::linalg::{self, RatMatrix};
use crate::scalar::{self, Scalar};

/// A finite metric space with labelled points and an exact distance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Scalar>>,
}

impl FiniteMetricSpace {
    /// Checks symmetry, the zero diagonal, positivity and the triangle inequality.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric(format!("distance table is not {n}×{n}")));
        }
        let zero = scalar::int(0);
        for i in 0..n {
            if dist[i][i] != zero {
                return Err(Error::InvalidMetric(format!("d({i},{i}) is not zero")));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) ≠ d({j},{i})")));
                }
                if i != j && dist[i][j] <= zero {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) must be positive")));
                }
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(Error::InvalidMetric(format!("triangle inequality fails for ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// `ball(radius)` of a group with its word metric.
    pub fn from_group_ball(group: &GroupSpec, radius: usize) -> Self {
        let points = group.ball(radius);
        let dist = points
            .iter()
            .map(|x| points.iter().map(|y| scalar::int(group.dist_unchecked(x, y) as i64)).collect())
            .collect();
        FiniteMetricSpace { labels: points.iter().map(ToString::to_string).collect(), dist }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distance(&self, i: usize, j: usize) -> &Scalar {
        &self.dist[i][j]
    }
}

/// Simplices grouped by dimension; each simplex is a sorted vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Validates that every simplex is sorted, sits in the right dimension,
    /// and has all of its codimension-one faces present.
    pub fn new(mut simplices: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        for (dim, layer) in simplices.iter_mut().enumerate() {
            for s in layer.iter() {
                if s.len() != dim + 1 || s.windows(2).any(|p| p[0] >= p[1]) {
                    return Err(Error::InvalidArgument(format!("{s:?} is not a sorted {dim}-simplex")));
                }
            }
            layer.sort();
            layer.dedup();
        }
        for dim in 1..simplices.len() {
            for s in &simplices[dim] {
                for j in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(j);
                    if simplices[dim - 1].binary_search(&face).is_err() {
                        return Err(Error::InvalidArgument(format!("face {face:?} of {s:?} is missing")));
                    }
                }
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    /// Highest dimension the complex was built to (layers may be empty).
    pub fn max_dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices
            .iter()
            .enumerate()
            .all(|(dim, layer)| layer.iter().all(|s| other.simplices(dim).binary_search(s).is_ok()))
    }

    /// `d_k` for `k = 0..=max_dim`, with `d_0` the `0 × n₀` zero map.
    pub fn boundary_matrices(&self) -> Vec<RatMatrix> {
        let mut out = Vec::with_capacity(self.simplices.len());
        out.push(RatMatrix::zeros(0, self.simplices(0).len()));
        for dim in 1..self.simplices.len() {
            let faces = &self.simplices[dim - 1];
            let mut m = RatMatrix::zeros(faces.len(), self.simplices[dim].len());
            for (col, s) in self.simplices[dim].iter().enumerate() {
                for j in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(j);
                    let row = faces.binary_search(&face).expect("face-closed complex");
                    m.set(row, col, scalar::int(if j % 2 == 0 { 1 } else { -1 }));
                }
            }
            out.push(m);
        }
        out
    }
}

/// The Rips complex: all vertex sets of diameter `≤ radius` with at most
/// `max_dim + 1` vertices.
pub fn build_rips(space: &FiniteMetricSpace, radius: &Scalar, max_dim: usize) -> Result<SimplicialComplex> {
    let n = space.len();
    if n == 0 || max_dim > n - 1 {
        return Err(Error::InvalidArgument(format!("max_dim {max_dim} needs at least {} points, have {n}", max_dim + 1)));
    }
    if *radius < scalar::int(0) {
        return Err(Error::InvalidArgument(format!("negative radius {radius}")));
    }
    let adjacent: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && space.distance(i, j) <= radius).collect()).collect();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|i| vec![i]).collect()];
    for dim in 1..=max_dim {
        let mut layer = Vec::new();
        for s in &simplices[dim - 1] {
            let last = *s.last().expect("nonempty simplex");
            for v in last + 1..n {
                if s.iter().all(|&u| adjacent[u][v]) {
                    let mut t = s.clone();
                    t.push(v);
                    layer.push(t);
                }
            }
        }
        simplices.push(layer);
    }
    SimplicialComplex::new(simplices)
}

/// `[dim H_0, …, dim H_{max_dim}]` of the complex.
pub fn rips_homology(complex: &SimplicialComplex) -> Result<Vec<usize>> {
    linalg::homology_dims(&complex.boundary_matrices())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn uniform(n: usize) -> FiniteMetricSpace {
        let dist = (0..n).map(|i| (0..n).map(|j| int(i64::from(i != j))).collect()).collect();
        FiniteMetricSpace::new((0..n).map(|i| i.to_string()).collect(), dist).unwrap()
    }

    #[test]
    fn radius_zero_gives_vertices_only() {
        let k = build_rips(&uniform(3), &int(0), 2).unwrap();
        assert_eq!(k.counts(), vec![3, 0, 0]);
        assert_eq!(rips_homology(&k).unwrap(), vec![3, 0, 0]);
    }

    #[test]
    fn three_point_clique() {
        let k = build_rips(&uniform(3), &int(1), 2).unwrap();
        assert_eq!(k.counts(), vec![3, 3, 1]);
        assert_eq!(rips_homology(&k).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn integer_interval_is_a_path() {
        let z = GroupSpec::abelian(1).unwrap();
        let k = build_rips(&FiniteMetricSpace::from_group_ball(&z, 2), &int(1), 2).unwrap();
        assert_eq!(k.counts(), vec![5, 4, 0]);
        let k = build_rips(&FiniteMetricSpace::from_group_ball(&z, 3), &int(1), 1).unwrap();
        assert_eq!(rips_homology(&k).unwrap(), vec![1, 0]);
    }

    #[test]
    fn single_point() {
        let k = build_rips(&uniform(1), &int(5), 0).unwrap();
        assert_eq!(rips_homology(&k).unwrap(), vec![1]);
    }

    #[test]
    fn four_cycle_has_a_loop_until_the_diagonals_appear() {
        // the square 0-1-2-3 with path metric
        let d = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]];
        let dist = d.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let square = FiniteMetricSpace::new((0..4).map(|i| i.to_string()).collect(), dist).unwrap();
        assert_eq!(rips_homology(&build_rips(&square, &int(1), 2).unwrap()).unwrap(), vec![1, 1, 0]);
        assert_eq!(rips_homology(&build_rips(&square, &int(2), 3).unwrap()).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn metric_validation() {
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let bad = vec![vec![int(0), int(1), int(5)], vec![int(1), int(0), int(1)], vec![int(5), int(1), int(0)]];
        assert!(matches!(FiniteMetricSpace::new(labels.clone(), bad), Err(Error::InvalidMetric(_))));
        let asym = vec![vec![int(0), int(1), int(1)], vec![int(2), int(0), int(1)], vec![int(1), int(1), int(0)]];
        assert!(FiniteMetricSpace::new(labels, asym).is_err());
        assert!(build_rips(&uniform(2), &int(1), 2).is_err());
    }

    #[test]
    fn complex_validation() {
        assert!(SimplicialComplex::new(vec![vec![vec![0], vec![1]], vec![vec![0, 2]]]).is_err());
        assert!(SimplicialComplex::new(vec![vec![vec![0], vec![1]], vec![vec![1, 0]]]).is_err());
        assert!(SimplicialComplex::new(vec![vec![vec![0], vec![1]], vec![vec![0, 1]]]).is_ok());
    }
}
