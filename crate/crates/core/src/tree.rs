//! Multiplicity trees of local Arf good semigroups.
//!
//! A tree is described by its collection of branch sequences `E` and an
//! upper-triangular matrix whose entry `p(i, j)` is the highest level at which
//! branches `i` and `j` are glued. Branch indices are 0-based; levels are
//! 1-based.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerical::{MultiplicitySequence, SVector};

/// Ordered collection of branch multiplicity sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequenceCollection {
    branches: Vec<MultiplicitySequence>,
}

impl SequenceCollection {
    pub fn new(branches: Vec<MultiplicitySequence>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { branches })
    }

    /// Builds a collection from raw entry lists, validating each.
    pub fn from_raw<S: AsRef<[u64]>>(raw: &[S]) -> Result<Self> {
        let branches = raw
            .iter()
            .map(|s| MultiplicitySequence::new(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(branches)
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branches(&self) -> &[MultiplicitySequence] {
        &self.branches
    }

    pub fn branch(&self, i: usize) -> &MultiplicitySequence {
        &self.branches[i]
    }

    /// Common padded length `M`: the longest canonical branch plus two 1s.
    pub fn padded_length(&self) -> usize {
        self.branches.iter().map(|b| b.len()).max().unwrap_or(0) + 2
    }

    pub fn s_vectors(&self) -> Vec<SVector> {
        let m = self.padded_length();
        self.branches
            .iter()
            .map(|b| b.s_vector(m).expect("padded length covers every branch"))
            .collect()
    }

    /// The collection seen through `perm`: position `k` holds branch `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        Ok(Self {
            branches: perm.iter().map(|&p| self.branches[p].clone()).collect(),
        })
    }
}

impl Serialize for SequenceCollection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.branches.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SequenceCollection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let branches = Vec::<MultiplicitySequence>::deserialize(deserializer)?;
        SequenceCollection::new(branches).map_err(serde::de::Error::custom)
    }
}

/// A gluing level that may be unbounded. `Unbounded` orders above every
/// finite level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedLevel {
    Finite(usize),
    Unbounded,
}

impl ExtendedLevel {
    pub fn finite(self) -> Option<usize> {
        match self {
            ExtendedLevel::Finite(v) => Some(v),
            ExtendedLevel::Unbounded => None,
        }
    }
}

impl fmt::Display for ExtendedLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedLevel::Finite(v) => write!(f, "{v}"),
            ExtendedLevel::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedLevel::Finite(v) => serializer.serialize_u64(*v as u64),
            ExtendedLevel::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

/// Strict upper-triangular matrix of gluing levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeMatrix {
    n: usize,
    // row-major entries (i, j) for i < j
    upper: Vec<usize>,
}

impl TreeMatrix {
    /// Builds the matrix with `p(i, j) = f(i, j)` for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(f(i, j));
            }
        }
        Self { n, upper }
    }

    /// Parses a full `n x n` matrix with zero diagonal and lower triangle.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(j) = (0..=i).find(|&j| row[j] != 0) {
                return Err(Error::InvalidMatrix(TreeViolation::NonZeroLower { i, j }));
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// `p(i, j)` for `i != j`, in either order.
    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i != j && i < self.n && j < self.n, "entry ({i}, {j}) out of range");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.upper[self.offset(a, b)]
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if j > i { self.get(i, j) } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// The matrix seen through `perm`: entry `(a, b)` is `p(perm[a], perm[b])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        Ok(Self::from_fn(self.n, |a, b| self.get(perm[a], perm[b])))
    }

    /// Inverse of [`TreeMatrix::permuted`].
    pub fn unpermuted(&self, perm: &[usize]) -> Result<Self> {
        self.permuted(&invert_permutation(perm)?)
    }

    pub fn max_level(&self) -> usize {
        self.upper.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for TreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_rows();
        f.write_str("[")?;
        for (i, row) in rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{row:?}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for TreeMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TreeMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<usize>>::deserialize(deserializer)?;
        TreeMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// First constraint a tree matrix violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeViolation {
    DimensionMismatch { expected: usize, found: usize },
    NonZeroLower { i: usize, j: usize },
    ZeroLevel { i: usize, j: usize },
    BoundExceeded { i: usize, j: usize, level: usize, bound: usize },
    Triple { i: usize, j: usize, k: usize },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TreeViolation::DimensionMismatch { expected, found } => {
                write!(f, "matrix has dimension {found}, collection has {expected} branches")
            }
            TreeViolation::NonZeroLower { i, j } => {
                write!(f, "entry ({}, {}) on or below the diagonal is nonzero", i + 1, j + 1)
            }
            TreeViolation::ZeroLevel { i, j } => {
                write!(f, "p({}, {}) is zero; branches are always glued at level 1", i + 1, j + 1)
            }
            TreeViolation::BoundExceeded { i, j, level, bound } => write!(
                f,
                "p({}, {}) = {level} exceeds k_E = {bound}",
                i + 1,
                j + 1
            ),
            TreeViolation::Triple { i, j, k } => write!(
                f,
                "levels of branches {}, {}, {} are not of the form {{x, x, y}} with x <= y",
                i + 1,
                j + 1,
                k + 1
            ),
        }
    }
}

/// `k_E(i, j)`: the highest level at which branches `i` and `j` may be glued.
pub fn k_bound(e: &SequenceCollection, i: usize, j: usize) -> ExtendedLevel {
    let m = e.padded_length();
    let si = e.branch(i).s_vector(m).expect("padded");
    let sj = e.branch(j).s_vector(m).expect("padded");
    split_bound(&si, &sj)
}

fn split_bound(si: &SVector, sj: &SVector) -> ExtendedLevel {
    si.0.iter()
        .zip(&sj.0)
        .filter(|(a, b)| a != b)
        .map(|(&a, &b)| a.min(b))
        .min()
        .map_or(ExtendedLevel::Unbounded, ExtendedLevel::Finite)
}

/// All `k_E(i, j)` at once, as a full symmetric table (diagonal unused).
pub fn k_table(e: &SequenceCollection) -> Vec<Vec<ExtendedLevel>> {
    let svs = e.s_vectors();
    let n = e.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ExtendedLevel::Unbounded
                    } else {
                        split_bound(&svs[i], &svs[j])
                    }
                })
                .collect()
        })
        .collect()
}

fn is_xxy(a: usize, b: usize, c: usize) -> bool {
    let mut v = [a, b, c];
    v.sort_unstable();
    v[0] == v[1]
}

/// Checks the parts of validity that do not depend on `E`: positive levels
/// and the `{x, x, y}` shape of every triple.
pub fn check_structure(m: &TreeMatrix) -> std::result::Result<(), TreeViolation> {
    let n = m.dimension();
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j) == 0 {
                return Err(TreeViolation::ZeroLevel { i, j });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !is_xxy(m.get(i, j), m.get(j, k), m.get(i, k)) {
                    return Err(TreeViolation::Triple { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Full validity check of `m` as a tree over `e`.
pub fn validate_tree_matrix(
    e: &SequenceCollection,
    m: &TreeMatrix,
) -> std::result::Result<(), TreeViolation> {
    if m.dimension() != e.len() {
        return Err(TreeViolation::DimensionMismatch {
            expected: e.len(),
            found: m.dimension(),
        });
    }
    let k = k_table(e);
    let n = e.len();
    for i in 0..n {
        for j in i + 1..n {
            let level = m.get(i, j);
            if level == 0 {
                return Err(TreeViolation::ZeroLevel { i, j });
            }
            if let ExtendedLevel::Finite(bound) = k[i][j] {
                if level > bound {
                    return Err(TreeViolation::BoundExceeded { i, j, level, bound });
                }
            }
        }
    }
    check_structure(m)
}

/// Matrix of the untwisted tree whose consecutive gluing levels are `d`.
pub fn untwisted_to_matrix(e: &SequenceCollection, d: &[usize]) -> Result<TreeMatrix> {
    let n = e.len();
    if d.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: d.len(),
        });
    }
    for (i, &level) in d.iter().enumerate() {
        let bound = k_bound(e, i, i + 1);
        if level == 0 || ExtendedLevel::Finite(level) > bound {
            return Err(Error::LevelExceedsBound {
                index: i,
                level,
                bound: bound.finite().unwrap_or(usize::MAX),
            });
        }
    }
    Ok(untwisted_matrix(d))
}

fn untwisted_matrix(d: &[usize]) -> TreeMatrix {
    TreeMatrix::from_fn(d.len() + 1, |i, j| {
        d[i..j].iter().copied().min().expect("i < j")
    })
}

/// Whether `p(i, j)` is the minimum of the consecutive levels between them.
pub fn is_untwisted(m: &TreeMatrix) -> bool {
    let n = m.dimension();
    (0..n).all(|i| {
        (i + 2..n).all(|j| {
            let min = (i..j).map(|k| m.get(k, k + 1)).min().expect("nonempty");
            m.get(i, j) == min
        })
    })
}

/// Lexicographically least permutation making `m` untwisted, together with
/// the consecutive levels of the permuted tree.
///
/// `perm[k]` is the original branch placed at position `k`. The matrix must
/// pass [`check_structure`].
pub fn untwist(m: &TreeMatrix) -> (Vec<usize>, Vec<usize>) {
    let n = m.dimension();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    // The next branch must lie in the deepest unfinished cluster of the
    // last placed one; the least index there is the lexicographic choice.
    let mut perm = vec![0];
    let mut placed = vec![false; n];
    placed[0] = true;
    while perm.len() < n {
        let last = *perm.last().expect("nonempty");
        let next = (0..n)
            .filter(|&b| !placed[b])
            .max_by(|&a, &b| m.get(last, a).cmp(&m.get(last, b)).then(b.cmp(&a)))
            .expect("unplaced branch remains");
        placed[next] = true;
        perm.push(next);
    }
    let d = perm.windows(2).map(|w| m.get(w[0], w[1])).collect();
    (perm, d)
}

/// The tree of the smallest semigroup in `σ(E)`: `p(i, j) = k_E(i, j)`.
pub fn minimal_tree(e: &SequenceCollection) -> Result<TreeMatrix> {
    let k = k_table(e);
    let n = e.len();
    for i in 0..n {
        for j in i + 1..n {
            if k[i][j] == ExtendedLevel::Unbounded {
                return Err(Error::UnboundedPair { i, j });
            }
        }
    }
    Ok(TreeMatrix::from_fn(n, |i, j| {
        k[i][j].finite().expect("checked finite")
    }))
}

/// All untwisted trees over `e`, as consecutive-level vectors in
/// lexicographic order.
pub fn enumerate_untwisted(e: &SequenceCollection) -> Result<Vec<Vec<usize>>> {
    let bounds = (0..e.len().saturating_sub(1))
        .map(|j| {
            k_bound(e, j, j + 1)
                .finite()
                .ok_or(Error::UnboundedPair { i: j, j: j + 1 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(box_vectors(&bounds))
}

fn box_vectors(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=b).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Every tree over `e`, twisted or not, sorted by matrix entries.
pub fn enumerate_all(e: &SequenceCollection) -> Result<Vec<TreeMatrix>> {
    let k = k_table(e);
    let n = e.len();
    for i in 0..n {
        for j in i + 1..n {
            if k[i][j] == ExtendedLevel::Unbounded {
                return Err(Error::InfiniteFamily { i, j });
            }
        }
    }
    let mut all = BTreeSet::new();
    for perm in permutations(n) {
        let bounds: Vec<usize> = perm
            .windows(2)
            .map(|w| k[w[0]][w[1]].finite().expect("checked finite"))
            .collect();
        for d in box_vectors(&bounds) {
            let tree = untwisted_matrix(&d).unpermuted(&perm)?;
            all.insert(tree);
        }
    }
    Ok(all.into_iter().collect())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(n));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Inverse permutation: `inv[perm[k]] = k`.
pub fn invert_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    Ok(inv)
}

/// A node `n_i^j` of a multiplicity tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub level: usize,
    /// Branches passing through the node, ascending.
    pub branches: Vec<usize>,
    /// `m_{h, level}` at every coordinate `h` in `branches`, zero elsewhere.
    pub value: Vec<u64>,
}

/// Partition of `members` into the classes glued at `level`.
fn classes_at(m: &TreeMatrix, members: &[usize], level: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; members.len()];
    for a in 0..members.len() {
        if assigned[a] {
            continue;
        }
        let mut class = Vec::new();
        for b in a..members.len() {
            if !assigned[b] && (a == b || m.get(members[a], members[b]) >= level) {
                assigned[b] = true;
                class.push(members[b]);
            }
        }
        out.push(class);
    }
    out
}

fn node_value(e: &SequenceCollection, branches: &[usize], level: usize) -> Vec<u64> {
    let mut value = vec![0; e.len()];
    for &h in branches {
        value[h] = e.branch(h).get(level);
    }
    value
}

/// Nodes of the tree for levels `1..=depth`, grouped by level and ordered by
/// their least branch.
pub fn tree_nodes(e: &SequenceCollection, m: &TreeMatrix, depth: usize) -> Result<Vec<Vec<Node>>> {
    if m.dimension() != e.len() {
        return Err(Error::DimensionMismatch {
            expected: e.len(),
            found: m.dimension(),
        });
    }
    check_structure(m).map_err(Error::InvalidMatrix)?;
    let all: Vec<usize> = (0..e.len()).collect();
    Ok((1..=depth)
        .map(|level| {
            classes_at(m, &all, level)
                .into_iter()
                .map(|branches| Node {
                    level,
                    value: node_value(e, &branches, level),
                    branches,
                })
                .collect()
        })
        .collect())
}

/// Graphviz rendering of [`tree_nodes`] output, edges from parent to child.
pub fn nodes_to_dot(levels: &[Vec<Node>]) -> String {
    let id = |node: &Node| format!("n{}_{}", node.level, node.branches[0] + 1);
    let label = |node: &Node| {
        let parts: Vec<String> = node.value.iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    };
    let mut out = String::from("digraph tree {\n");
    for level in levels {
        for node in level {
            let _ = writeln!(out, "  {} [label=\"{}\"];", id(node), label(node));
        }
    }
    for pair in levels.windows(2) {
        for child in &pair[1] {
            if let Some(parent) = pair[0]
                .iter()
                .find(|p| p.branches.contains(&child.branches[0]))
            {
                let _ = writeln!(out, "  {} -> {};", id(parent), id(child));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Conductor `δ` of the semigroup of the tree: on branch `i`, the partial sum
/// up to the later of its last gluing level and its last entry above 1.
pub fn conductor(e: &SequenceCollection, m: &TreeMatrix) -> Vec<u64> {
    let n = e.len();
    (0..n)
        .map(|i| {
            let glued = (0..n).filter(|&j| j != i).map(|j| m.get(i, j)).max().unwrap_or(0);
            let level = glued.max(e.branch(i).len());
            e.branch(i).partial_sum(level)
        })
        .collect()
}

/// Small elements of a good semigroup: the nonzero elements bounded by the
/// conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallElementsSet {
    conductor: Vec<u64>,
    elements: BTreeSet<Vec<u64>>,
}

impl SmallElementsSet {
    /// Validates a set of small elements. The conductor is the componentwise
    /// maximum, which must itself be present; the set must be closed under
    /// componentwise minimum.
    pub fn from_elements(elements: impl IntoIterator<Item = Vec<u64>>) -> Result<Self> {
        let elements: BTreeSet<Vec<u64>> = elements.into_iter().collect();
        let first = elements
            .first()
            .ok_or_else(|| Error::MalformedSmallSet("no elements".into()))?;
        let n = first.len();
        if n == 0 {
            return Err(Error::MalformedSmallSet("zero-dimensional vectors".into()));
        }
        for v in &elements {
            if v.len() != n {
                return Err(Error::MalformedSmallSet(format!(
                    "vector {v:?} has dimension {}, expected {n}",
                    v.len()
                )));
            }
            if v.contains(&0) {
                return Err(Error::MalformedSmallSet(format!(
                    "vector {v:?} has a zero component"
                )));
            }
        }
        let conductor: Vec<u64> = (0..n)
            .map(|i| elements.iter().map(|v| v[i]).max().expect("nonempty"))
            .collect();
        if !elements.contains(&conductor) {
            return Err(Error::MalformedSmallSet(format!(
                "componentwise maximum {conductor:?} is not an element"
            )));
        }
        let set = Self {
            conductor,
            elements,
        };
        if let Some((a, b)) = set.min_closure_violation() {
            return Err(Error::MalformedSmallSet(format!(
                "min({a:?}, {b:?}) is not an element"
            )));
        }
        Ok(set)
    }

    pub fn dimension(&self) -> usize {
        self.conductor.len()
    }

    pub fn conductor(&self) -> &[u64] {
        &self.conductor
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> &BTreeSet<Vec<u64>> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// A pair whose componentwise minimum is missing, if any.
    pub fn min_closure_violation(&self) -> Option<(Vec<u64>, Vec<u64>)> {
        let list: Vec<&Vec<u64>> = self.elements.iter().collect();
        for (x, a) in list.iter().enumerate() {
            for b in &list[x + 1..] {
                let min: Vec<u64> = a.iter().zip(b.iter()).map(|(p, q)| *p.min(q)).collect();
                if !self.elements.contains(&min) {
                    return Some(((*a).clone(), (*b).clone()));
                }
            }
        }
        None
    }

    /// Membership of `v` in the semigroup described by this set.
    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: v.len(),
            });
        }
        if v.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        let capped: Vec<u64> = v
            .iter()
            .zip(&self.conductor)
            .map(|(&x, &c)| x.min(c))
            .collect();
        Ok(capped == self.conductor || self.elements.contains(&capped))
    }
}

/// Small elements of the semigroup of the tree, as sums over finite subtrees
/// rooted at the root, keeping those bounded by the conductor.
pub fn expand_small(e: &SequenceCollection, m: &TreeMatrix) -> SmallElementsSet {
    let delta = conductor(e, m);
    let all: Vec<usize> = (0..e.len()).collect();
    let elements: BTreeSet<Vec<u64>> = subtree_sums(e, m, &delta, &all, 1).into_iter().collect();
    let set = SmallElementsSet {
        conductor: delta,
        elements,
    };
    debug_assert!(set.min_closure_violation().is_none());
    set
}

/// Sums over subtrees rooted at the node of `branches` at `level`, bounded by
/// `delta`. Empty when the node itself already exceeds the bound.
fn subtree_sums(
    e: &SequenceCollection,
    m: &TreeMatrix,
    delta: &[u64],
    branches: &[usize],
    level: usize,
) -> HashSet<Vec<u64>> {
    let within = branches
        .iter()
        .all(|&h| e.branch(h).partial_sum(level) <= delta[h]);
    if !within {
        return HashSet::new();
    }
    let mut acc: HashSet<Vec<u64>> = HashSet::from([node_value(e, branches, level)]);
    for child in classes_at(m, branches, level + 1) {
        let below = subtree_sums(e, m, delta, &child, level + 1);
        if below.is_empty() {
            continue;
        }
        let mut grown = acc.clone();
        for a in &acc {
            for b in &below {
                let sum: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if sum.iter().zip(delta).all(|(s, d)| s <= d) {
                    grown.insert(sum);
                }
            }
        }
        acc = grown;
    }
    acc
}

/// Membership of `v` in the semigroup of the tree.
pub fn contains(e: &SequenceCollection, m: &TreeMatrix, v: &[u64]) -> Result<bool> {
    if v.len() != e.len() {
        return Err(Error::DimensionMismatch {
            expected: e.len(),
            found: v.len(),
        });
    }
    expand_small(e, m).contains(v)
}

/// Whether `S(m1) ⊆ S(m2)` for two trees over the same collection: every
/// entry of `m2` is at most the matching entry of `m1`.
pub fn semigroup_leq(m1: &TreeMatrix, m2: &TreeMatrix) -> Result<bool> {
    if m1.dimension() != m2.dimension() {
        return Err(Error::DimensionMismatch {
            expected: m1.dimension(),
            found: m2.dimension(),
        });
    }
    Ok(m1.upper.iter().zip(&m2.upper).all(|(a, b)| b <= a))
}
