//! Brute-force oracles shared by the integration tests. None of these call
//! into the library routines they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use arf_core::{SequenceCollection, TreeMatrix};
use rand::Rng;

/// Elements of a numerical semigroup given by its sorted gaps-free tail: the
/// set is `elements ∪ [conductor, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumSemigroup {
    pub small: BTreeSet<u64>,
    pub conductor: u64,
}

impl NumSemigroup {
    pub fn contains(&self, x: u64) -> bool {
        x >= self.conductor || self.small.contains(&x)
    }

    pub fn is_subset_of(&self, other: &NumSemigroup) -> bool {
        let top = self.conductor.max(other.conductor);
        (0..=top).all(|x| !self.contains(x) || other.contains(x))
    }
}

/// Partial sums of `seq` padded with 1s, starting from 0, up to `bound`.
pub fn partial_sums(seq: &[u64], bound: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([0]);
    let mut acc = 0;
    let mut j = 0;
    while acc < bound {
        acc += seq.get(j).copied().unwrap_or(1);
        j += 1;
        if acc <= bound {
            out.insert(acc);
        }
    }
    out
}

pub fn is_arf_set(s: &NumSemigroup) -> bool {
    let top = s.conductor;
    let el: Vec<u64> = (0..=top).filter(|&x| s.contains(x)).collect();
    for (a, &x) in el.iter().enumerate() {
        for &y in &el[a..] {
            if x + y <= top && !s.contains(x + y) {
                return false;
            }
            for &z in &el[..=a] {
                // x ≤ y and z ≤ x: y + x - z must be an element
                if !s.contains(y + x - z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every Arf numerical semigroup with conductor at most `bound`. Candidates
/// are grown from the tail (each new first entry is the sum of a run of the
/// following ones) and each is kept only if its element set passes a direct
/// check of the Arf property.
pub fn arf_semigroups_up_to(bound: u64) -> Vec<NumSemigroup> {
    let mut out = vec![NumSemigroup {
        small: BTreeSet::from([0]),
        conductor: 0,
    }];
    let mut stack: Vec<Vec<u64>> = vec![Vec::new()];
    while let Some(seq) = stack.pop() {
        let sum: u64 = seq.iter().sum();
        for run in 1.. {
            let head: u64 = (0..run).map(|k| seq.get(k).copied().unwrap_or(1)).sum();
            if head + sum > bound {
                break;
            }
            if head == 1 {
                continue;
            }
            let mut longer = vec![head];
            longer.extend_from_slice(&seq);
            let s = from_sequence(&longer);
            assert!(is_arf_set(&s), "{longer:?} is not Arf");
            out.push(s);
            stack.push(longer);
        }
    }
    out
}

/// Conductor of the numerical semigroup generated by `values` (gcd 1).
pub fn generated_conductor(values: &[u64]) -> u64 {
    let min = *values.iter().min().unwrap();
    let mut reach = vec![true];
    let mut run = 0;
    let mut x = 0u64;
    loop {
        x += 1;
        let hit = values
            .iter()
            .any(|&v| v <= x && reach[(x - v) as usize]);
        reach.push(hit);
        run = if hit { run + 1 } else { 0 };
        if run == min {
            return x + 1 - min;
        }
    }
}

/// The Arf closure of `values` from its definition: every Arf semigroup
/// containing them contains the generated semigroup, hence everything from
/// its conductor `c` on, and is closed under `x + y - z` for `z <= x, y`.
/// Saturating `values ∪ {0} ∪ [c, ∞)` under that operation gives a set
/// inside every such semigroup which is itself Arf.
pub fn arf_closure_fixed_point(values: &[u64]) -> NumSemigroup {
    let c = generated_conductor(values) as usize;
    let mut member = vec![false; c + 1];
    member[0] = true;
    member[c] = true;
    for &v in values {
        member[(v as usize).min(c)] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        let el: Vec<usize> = (0..c).filter(|&x| member[x]).collect();
        for (a, &z) in el.iter().enumerate() {
            for &x in &el[a..] {
                let shift = x - z;
                for &y in &el[a..] {
                    let w = y + shift;
                    if w >= c {
                        break;
                    }
                    if !member[w] {
                        member[w] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    // conductor of the saturated set
    let mut conductor = c;
    while conductor > 0 && member[conductor - 1] {
        conductor -= 1;
    }
    NumSemigroup {
        small: (0..=conductor as u64).filter(|&x| member[x as usize]).collect(),
        conductor: conductor as u64,
    }
}

/// The least member, under inclusion, of the Arf semigroups with conductor
/// at most `bound` that contain `values`, if that family has one.
pub fn arf_closure_oracle(values: &[u64], bound: u64) -> Option<NumSemigroup> {
    let family: Vec<NumSemigroup> = arf_semigroups_up_to(bound)
        .into_iter()
        .filter(|s| values.iter().all(|&v| s.contains(v)))
        .collect();
    family
        .iter()
        .find(|s| family.iter().all(|t| s.is_subset_of(t)))
        .cloned()
}

/// Numerical semigroup whose elements are the partial sums of `seq`.
pub fn from_sequence(seq: &[u64]) -> NumSemigroup {
    let conductor: u64 = seq.iter().filter(|&&m| m > 1).sum();
    NumSemigroup {
        small: partial_sums(seq, conductor),
        conductor,
    }
}

/// A random Arf multiplicity sequence, built from the tail: each step
/// prepends the sum of a leading run of the current (1-padded) sequence.
pub fn random_arf_sequence<R: Rng>(rng: &mut R, steps: usize, max_run: usize) -> Vec<u64> {
    let mut seq: Vec<u64> = Vec::new();
    for _ in 0..steps {
        let run = rng.gen_range(1..=max_run);
        let head: u64 = (0..run).map(|k| seq.get(k).copied().unwrap_or(1)).sum();
        seq.insert(0, head);
    }
    while seq.last() == Some(&1) {
        seq.pop();
    }
    if seq.is_empty() {
        seq.push(1);
    }
    seq
}

/// Same as [`random_arf_sequence`] from an explicit list of run lengths.
pub fn arf_sequence_from_runs(runs: &[usize]) -> Vec<u64> {
    let mut seq: Vec<u64> = Vec::new();
    for &run in runs {
        let head: u64 = (0..run).map(|k| seq.get(k).copied().unwrap_or(1)).sum();
        seq.insert(0, head);
    }
    while seq.last() == Some(&1) {
        seq.pop();
    }
    if seq.is_empty() {
        seq.push(1);
    }
    seq
}

pub fn raw(e: &SequenceCollection) -> Vec<Vec<u64>> {
    e.branches().iter().map(|b| b.entries().to_vec()).collect()
}

fn entry(seq: &[u64], level: usize) -> u64 {
    seq.get(level - 1).copied().unwrap_or(1)
}

fn prefix(seq: &[u64], level: usize) -> u64 {
    (1..=level).map(|j| entry(seq, j)).sum()
}

/// Elements of the tree's semigroup bounded by `cap`, computed from unions
/// of root paths: a finite rooted subtree is fixed by how deep it reaches on
/// each branch, and branch `h` then reaches the deepest level it shares with
/// any of those paths.
pub fn subtree_sums(e: &[Vec<u64>], p: &TreeMatrix, cap: &[u64]) -> BTreeSet<Vec<u64>> {
    let n = e.len();
    let depth_limit: Vec<usize> = (0..n)
        .map(|i| (1..).find(|&l| prefix(&e[i], l) > cap[i]).unwrap())
        .collect();
    let mut out = BTreeSet::new();
    let mut t = vec![0usize; n];
    loop {
        let v: Vec<u64> = (0..n)
            .map(|h| {
                let reach = (0..n)
                    .map(|i| if i == h { t[i] } else { t[i].min(p.get(i, h)) })
                    .max()
                    .unwrap();
                prefix(&e[h], reach)
            })
            .collect();
        if v.iter().zip(cap).all(|(a, b)| a <= b) {
            out.insert(v);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            t[k] += 1;
            if t[k] <= depth_limit[k] {
                break;
            }
            t[k] = 0;
            k += 1;
        }
    }
}

/// A generous upper bound on the conductor: partial sums one level past
/// every gluing level and every entry above 1.
pub fn conductor_ceiling(e: &[Vec<u64>], p: &TreeMatrix) -> Vec<u64> {
    let deepest = p.max_level().max(e.iter().map(Vec::len).max().unwrap());
    e.iter().map(|s| prefix(s, deepest + 1)).collect()
}

/// The conductor found by search: the point `c` with `[c, top] ⊆ S` such
/// that lowering any coordinate breaks it. Returns the set of elements used.
pub fn conductor_oracle(e: &[Vec<u64>], p: &TreeMatrix) -> (Vec<u64>, BTreeSet<Vec<u64>>) {
    let n = e.len();
    let top: Vec<u64> = conductor_ceiling(e, p).iter().map(|x| x + 2).collect();
    let elements = subtree_sums(e, p, &top);
    let good = |c: &[u64]| box_points(c, &top).all(|v| elements.contains(&v));
    let mut c = top.clone();
    assert!(good(&c));
    loop {
        let mut moved = false;
        for i in 0..n {
            if c[i] == 0 {
                continue;
            }
            let mut lower = c.clone();
            lower[i] -= 1;
            if good(&lower) {
                c = lower;
                moved = true;
            }
        }
        if !moved {
            return (c, elements);
        }
    }
}

/// All integer points of the box `[lo, hi]`.
pub fn box_points<'a>(lo: &'a [u64], hi: &'a [u64]) -> impl Iterator<Item = Vec<u64>> + 'a {
    let mut current = Some(lo.to_vec());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut k = 0;
        loop {
            if k == next.len() {
                current = None;
                break;
            }
            if next[k] < hi[k] {
                next[k] += 1;
                current = Some(next);
                break;
            }
            next[k] = lo[k];
            k += 1;
        }
        Some(out)
    })
}

/// Whether each node at levels `2..=check` is a sum of nodes of a finite
/// subtree hanging below it. `nodes[j-1]` lists `(branches, value)` at level
/// `j`; it must reach far enough below `check` for every such sum to fit.
pub fn node_sum_law(nodes: &[Vec<(Vec<usize>, Vec<u64>)>], check: usize) -> bool {
    for level in 1..check.min(nodes.len()) {
        for (branches, value) in &nodes[level] {
            // sums of rooted subtrees below this node, within `value`
            let mut sums: BTreeSet<Vec<u64>> = BTreeSet::new();
            collect_sums(nodes, level + 1, branches, &vec![0; value.len()], value, &mut sums);
            if !sums.contains(value) {
                return false;
            }
        }
    }
    true
}

/// Sums of unions of descending paths taken from the children of the node
/// whose branch set is `branches`, starting at `level`, bounded by `cap`.
fn collect_sums(
    nodes: &[Vec<(Vec<usize>, Vec<u64>)>],
    level: usize,
    branches: &[usize],
    acc: &[u64],
    cap: &[u64],
    out: &mut BTreeSet<Vec<u64>>,
) {
    out.insert(acc.to_vec());
    if level >= nodes.len() {
        return;
    }
    let children: Vec<&(Vec<usize>, Vec<u64>)> = nodes[level]
        .iter()
        .filter(|(b, _)| b.iter().all(|x| branches.contains(x)))
        .collect();
    // choose, for each child, either nothing or some subtree through it
    let mut partial: BTreeSet<Vec<u64>> = BTreeSet::from([acc.to_vec()]);
    for (child_branches, child_value) in children {
        let mut below = BTreeSet::new();
        let start: Vec<u64> = child_value.clone();
        if start.iter().zip(cap).any(|(a, b)| a > b) {
            continue;
        }
        collect_sums(nodes, level + 1, child_branches, &start, cap, &mut below);
        let mut next = partial.clone();
        for a in &partial {
            for b in &below {
                let s: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if s.iter().zip(cap).all(|(x, y)| x <= y) {
                    next.insert(s);
                }
            }
        }
        partial = next;
    }
    out.extend(partial);
}
