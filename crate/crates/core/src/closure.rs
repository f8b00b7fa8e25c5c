//! Arf closure of a finite set of vectors and of a good semigroup given by
//! its small elements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerical::{duval_closure, gcd};
use crate::tree::{
    k_table, validate_tree_matrix, ExtendedLevel, SequenceCollection, SmallElementsSet, TreeMatrix,
};

/// `pos_E(g)`: for each coordinate, the level whose partial sum is `g[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionVector(pub Vec<usize>);

/// Positions of `v` along the branches of `e`.
pub fn positions(e: &SequenceCollection, v: &[u64]) -> Result<PositionVector> {
    if v.len() != e.len() {
        return Err(Error::DimensionMismatch {
            expected: e.len(),
            found: v.len(),
        });
    }
    v.iter()
        .enumerate()
        .map(|(i, &value)| {
            e.branch(i)
                .position(value)
                .ok_or(Error::NotInProjection { coordinate: i, value })
        })
        .collect::<Result<Vec<_>>>()
        .map(PositionVector)
}

/// Outcome of checking whether a vector set has an Arf closure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VectorSetDiagnostics {
    /// Coordinates whose values have gcd above 1, with that gcd.
    pub gcd_failures: Vec<(usize, u64)>,
    /// Pairs of coordinates on which every vector agrees.
    pub indistinguishable: Vec<(usize, usize)>,
}

impl VectorSetDiagnostics {
    pub fn is_ok(&self) -> bool {
        self.gcd_failures.is_empty() && self.indistinguishable.is_empty()
    }

    /// The first failure as an error.
    pub fn to_error(&self) -> Option<Error> {
        if let Some(&(coordinate, gcd)) = self.gcd_failures.first() {
            return Some(Error::CoordinateGcdNotOne { coordinate, gcd });
        }
        self.indistinguishable
            .first()
            .map(|&(i, j)| Error::IndistinguishablePair { i, j })
    }
}

fn check_shape(g: &[Vec<u64>]) -> Result<usize> {
    let n = g.first().ok_or(Error::EmptyInput)?.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    for v in g {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if let Some(coordinate) = v.iter().position(|&x| x == 0) {
            return Err(Error::NonPositiveEntry { coordinate });
        }
    }
    Ok(n)
}

/// Checks the two conditions for `G` to have an Arf closure, listing every
/// failure. Shape errors (empty input, mixed dimensions, zero entries) are
/// returned as errors.
pub fn validate_vector_set(g: &[Vec<u64>]) -> Result<VectorSetDiagnostics> {
    let n = check_shape(g)?;
    let mut diag = VectorSetDiagnostics::default();
    for i in 0..n {
        let d = g.iter().fold(0, |acc, v| gcd(acc, v[i]));
        if d != 1 {
            diag.gcd_failures.push((i, d));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if g.iter().all(|v| v[i] == v[j]) {
                diag.indistinguishable.push((i, j));
            }
        }
    }
    Ok(diag)
}

/// How the gluing level of one pair of branches was determined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDiagnostic {
    pub i: usize,
    pub j: usize,
    /// Every vector sits at the same level on both branches.
    pub in_u: bool,
    pub k_bound: ExtendedLevel,
    /// Least position among vectors whose positions differ, if any.
    pub min_mismatch: Option<usize>,
    pub level: usize,
}

/// A closure: the branch collection, its tree matrix, and per-pair detail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureResult {
    pub collection: SequenceCollection,
    pub matrix: TreeMatrix,
    pub diagnostics: Vec<PairDiagnostic>,
}

/// The smallest Arf good semigroup containing the vectors of `g`.
pub fn arf_closure_of_vectors(g: &[Vec<u64>]) -> Result<ClosureResult> {
    let diag = validate_vector_set(g)?;
    if let Some(err) = diag.to_error() {
        return Err(err);
    }
    let n = g[0].len();
    let branches = (0..n)
        .map(|i| {
            let values: Vec<u64> = g.iter().map(|v| v[i]).collect();
            duval_closure(&values)
        })
        .collect::<Result<Vec<_>>>()?;
    let collection = SequenceCollection::new(branches)?;
    let pos = g
        .iter()
        .map(|v| positions(&collection, v).map(|p| p.0))
        .collect::<Result<Vec<_>>>()?;
    let k = k_table(&collection);

    let mut diagnostics = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let min_mismatch = pos
                .iter()
                .filter(|p| p[i] != p[j])
                .map(|p| p[i].min(p[j]))
                .min();
            let in_u = min_mismatch.is_none();
            let level = match (k[i][j], min_mismatch) {
                (ExtendedLevel::Finite(bound), Some(m)) => bound.min(m),
                (ExtendedLevel::Finite(bound), None) => bound,
                (ExtendedLevel::Unbounded, Some(m)) => m,
                (ExtendedLevel::Unbounded, None) => {
                    unreachable!("identical branches with equal positions imply equal values")
                }
            };
            diagnostics.push(PairDiagnostic {
                i,
                j,
                in_u,
                k_bound: k[i][j],
                min_mismatch,
                level,
            });
        }
    }
    let mut levels = diagnostics.iter().map(|d| d.level);
    let matrix = TreeMatrix::from_fn(n, |_, _| levels.next().expect("one level per pair"));
    if let Err(violation) = validate_tree_matrix(&collection, &matrix) {
        panic!("closure produced an invalid tree: {violation}");
    }
    Ok(ClosureResult {
        collection,
        matrix,
        diagnostics,
    })
}

/// The Arf closure of the good semigroup whose small elements are `small`,
/// computed as the closure of the small elements together with `δ + e_i`.
pub fn arf_closure_of_good_semigroup(small: &SmallElementsSet) -> Result<ClosureResult> {
    let delta = small.conductor();
    let mut g: Vec<Vec<u64>> = small.elements().iter().cloned().collect();
    for i in 0..delta.len() {
        let mut v = delta.to_vec();
        v[i] += 1;
        g.push(v);
    }
    arf_closure_of_vectors(&g)
}
