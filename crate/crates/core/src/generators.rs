//! Generating sets of Arf good semigroups: the generator-set criterion, the
//! character lower bound, the logarithmic distance-vector solver and the
//! explicit generator construction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{
    check_structure, k_table, untwist, ExtendedLevel, SequenceCollection, TreeMatrix,
};

/// Level indices `(j_1, ..., j_n)`, one per branch.
pub type IndexTuple = Vec<usize>;

/// `V_E(j_1, ..., j_n)`: the vector of partial sums at the given levels.
pub fn v_index(e: &SequenceCollection, t: &[usize]) -> Result<Vec<u64>> {
    if t.len() != e.len() {
        return Err(Error::DimensionMismatch {
            expected: e.len(),
            found: t.len(),
        });
    }
    t.iter()
        .enumerate()
        .map(|(i, &j)| {
            if j == 0 {
                Err(Error::IndexOutOfRange { coordinate: i })
            } else {
                Ok(e.branch(i).partial_sum(j))
            }
        })
        .collect()
}

fn pchars(e: &SequenceCollection) -> Vec<BTreeSet<usize>> {
    e.branches().iter().map(|b| b.characters().pchar).collect()
}

/// `C_E`: the largest number of character levels on a single branch, a lower
/// bound for the size of any generating set.
pub fn char_lower_bound(e: &SequenceCollection) -> usize {
    pchars(e).iter().map(BTreeSet::len).max().unwrap_or(0)
}

/// Per-pair evaluation of a candidate generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub q: usize,
    pub r: usize,
    pub required: usize,
    pub k_bound: ExtendedLevel,
    /// `p(q, r) = k_E(q, r)`.
    pub in_p: bool,
    /// Every tuple has the same index on both branches.
    pub all_equal: bool,
    /// `MIN_G(q, r)`, when some tuple separates the two branches.
    pub min_g: Option<usize>,
    pub ok: bool,
}

/// A named failed condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: &'static str,
    pub detail: String,
}

/// Outcome of [`check_generator_set`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub valid: bool,
    /// Character levels of each branch missing from the tuples.
    pub missing_characters: Vec<Vec<usize>>,
    pub pairs: Vec<PairReport>,
    pub failures: Vec<Failure>,
}

/// Decides whether the vectors `V_E(t)`, `t ∈ tuples`, generate the Arf
/// semigroup of the tree `m` over `e`.
pub fn check_generator_set(
    e: &SequenceCollection,
    m: &TreeMatrix,
    tuples: &[IndexTuple],
) -> Result<GeneratorReport> {
    let n = e.len();
    if m.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.dimension(),
        });
    }
    for t in tuples {
        v_index(e, t)?;
    }
    let mut failures = Vec::new();

    let missing_characters: Vec<Vec<usize>> = pchars(e)
        .iter()
        .enumerate()
        .map(|(i, pchar)| {
            pchar
                .iter()
                .copied()
                .filter(|&j| !tuples.iter().any(|t| t[i] == j))
                .collect()
        })
        .collect();
    for (i, missing) in missing_characters.iter().enumerate() {
        if !missing.is_empty() {
            failures.push(Failure {
                condition: "characters",
                detail: format!("branch {}: character levels {missing:?} not covered", i + 1),
            });
        }
    }

    let k = k_table(e);
    let mut pairs = Vec::new();
    for q in 0..n {
        for r in q + 1..n {
            let required = m.get(q, r);
            let k_bound = k[q][r];
            let in_p = k_bound == ExtendedLevel::Finite(required);
            let mismatch = tuples
                .iter()
                .filter(|t| t[q] != t[r])
                .map(|t| t[q].min(t[r]))
                .min();
            let all_equal = mismatch.is_none();
            let min_g = mismatch.map(|x| match k_bound {
                ExtendedLevel::Finite(b) => b.min(x),
                ExtendedLevel::Unbounded => x,
            });
            let ok = if in_p {
                all_equal || min_g == Some(required)
            } else {
                min_g == Some(required)
            };
            if !ok {
                let (condition, detail) = if in_p {
                    (
                        "pair_P",
                        format!(
                            "pair ({}, {}): MIN_G is {min_g:?}, expected k_E = {required}",
                            q + 1,
                            r + 1
                        ),
                    )
                } else {
                    (
                        "pair_bound",
                        format!(
                            "pair ({}, {}): MIN_G is {min_g:?}, expected p = {required}",
                            q + 1,
                            r + 1
                        ),
                    )
                };
                failures.push(Failure { condition, detail });
            }
            pairs.push(PairReport {
                q,
                r,
                required,
                k_bound,
                in_p,
                all_equal,
                min_g,
                ok,
            });
        }
    }
    Ok(GeneratorReport {
        valid: failures.is_empty(),
        missing_characters,
        pairs,
        failures,
    })
}

/// `⌈log₂(m + 1)⌉`.
pub fn ns(m: usize) -> usize {
    (usize::BITS - m.leading_zeros()) as usize
}

/// `MIN(G, i, j)`: the least `min(g[i], g[j])` over vectors separating `i`
/// and `j`.
pub fn min_separating(g: &[Vec<u64>], i: usize, j: usize) -> Option<u64> {
    g.iter()
        .filter(|v| v[i] != v[j])
        .map(|v| v[i].min(v[j]))
        .min()
}

/// Whether `g` is a solution for `d`: `MIN(G, i, j) = min(d_i..d_{j-1})` for
/// all `i < j`.
pub fn is_solution(d: &[u64], g: &[Vec<u64>]) -> bool {
    let m = d.len();
    g.iter().all(|v| v.len() == m + 1)
        && (0..=m).all(|i| {
            (i + 1..=m).all(|j| min_separating(g, i, j) == d[i..j].iter().copied().min())
        })
}

/// A solution for the distance vector `d` with at most `⌈log₂(len + 1)⌉`
/// vectors of length `len + 1`.
pub fn solve_distance_vector(d: &[u64]) -> Result<Vec<Vec<u64>>> {
    if d.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = d.iter().position(|&x| x == 0) {
        return Err(Error::ZeroEntry { index });
    }
    Ok(solve(d))
}

fn solve(d: &[u64]) -> Vec<Vec<u64>> {
    if let [d1] = d {
        return vec![vec![*d1, d1 + 1]];
    }
    let inf = *d.iter().min().expect("nonempty");
    let filler = d.iter().max().expect("nonempty") + 1;
    let parts: Vec<&[u64]> = d.split(|&x| x == inf).collect();
    let sols: Vec<Vec<Vec<u64>>> = parts
        .iter()
        .map(|p| if p.is_empty() { vec![vec![filler]] } else { solve(p) })
        .collect();
    let needs: Vec<usize> = parts
        .iter()
        .zip(&sols)
        .map(|(p, s)| if p.is_empty() { 0 } else { s.len() })
        .collect();

    let n = ns(d.len());
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&a, &b| needs[b].cmp(&needs[a]));
    let mut used = vec![false; 1 << n];
    let mut pattern = vec![Vec::new(); parts.len()];
    for &col in &order {
        // patterns in lexicographic order of their bit vectors (row 0 first)
        let code = (0..1usize << n)
            .map(|c| (c, pattern_bits(c, n)))
            .filter(|(c, bits)| !used[*c] && bits.iter().filter(|&&b| b).count() >= needs[col])
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("enough patterns for every part")
            .0;
        used[code] = true;
        pattern[col] = pattern_bits(code, n);
    }

    let mut rows = Vec::with_capacity(n);
    for row in 0..n {
        let mut v = Vec::with_capacity(d.len() + 1);
        for col in 0..parts.len() {
            if pattern[col][row] {
                let ones_before = pattern[col][..row].iter().filter(|&&b| b).count();
                let sol = &sols[col];
                v.extend_from_slice(&sol[ones_before.min(sol.len() - 1)]);
            } else {
                v.extend(std::iter::repeat_n(inf, parts[col].len() + 1));
            }
        }
        rows.push(v);
    }
    let mut seen = BTreeSet::new();
    rows.retain(|v| v.iter().any(|&x| x != v[0]) && seen.insert(v.clone()));
    rows
}

fn pattern_bits(code: usize, n: usize) -> Vec<bool> {
    (0..n).map(|row| code >> (n - 1 - row) & 1 == 1).collect()
}

/// A generating set built for a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    /// Permutation untwisting the tree; `permutation[k]` is the original
    /// branch at position `k`.
    pub permutation: Vec<usize>,
    /// Index tuples over the original branch order.
    pub tuples: Vec<IndexTuple>,
    pub vectors: Vec<Vec<u64>>,
}

/// Generators of the Arf semigroup of the tree `m`: `C_E` tuples covering the
/// characters plus a solution of the untwisted tree's distance vector.
pub fn build_generators(e: &SequenceCollection, m: &TreeMatrix) -> Result<GeneratorSet> {
    let n = e.len();
    if m.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.dimension(),
        });
    }
    check_structure(m).map_err(Error::InvalidMatrix)?;
    let (perm, d) = untwist(m);
    let permuted = e.permuted(&perm)?;
    let pchar = pchars(&permuted);
    let c = pchar.iter().map(BTreeSet::len).max().unwrap_or(0);
    let l = pchar.iter().flatten().copied().max().unwrap_or(0) + 1;
    let columns: Vec<Vec<usize>> = pchar
        .iter()
        .map(|set| {
            let mut col: Vec<usize> = set.iter().copied().collect();
            col.resize(c, l);
            col
        })
        .collect();

    let mut permuted_tuples: Vec<IndexTuple> = (0..c)
        .map(|p| columns.iter().map(|col| col[p]).collect())
        .collect();
    if n > 1 {
        let d: Vec<u64> = d.iter().map(|&x| x as u64).collect();
        for sol in solve(&d) {
            permuted_tuples.push(sol.into_iter().map(|x| x as usize).collect());
        }
    }

    let mut tuples = Vec::new();
    for t in permuted_tuples {
        let mut orig = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            orig[p] = t[k];
        }
        if !tuples.contains(&orig) {
            tuples.push(orig);
        }
    }
    let vectors = tuples
        .iter()
        .map(|t| v_index(e, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratorSet {
        permutation: perm,
        tuples,
        vectors,
    })
}

/// Checks `k_E(i, j) ≤ min` of the symmetric difference of the two branches'
/// character levels; vacuous when that difference is empty.
pub fn pair_char_bound(e: &SequenceCollection, i: usize, j: usize) -> bool {
    let pi = e.branch(i).characters().pchar;
    let pj = e.branch(j).characters().pchar;
    match pi.symmetric_difference(&pj).min() {
        None => true,
        Some(&bound) => crate::tree::k_bound(e, i, j) <= ExtendedLevel::Finite(bound),
    }
}
