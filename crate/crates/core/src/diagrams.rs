//! Wick-contraction diagrams for the trace moments `E[Tr rho^n]`.
//!
//! `Tr (psi psi^dag)^n` is a circle of alternating `psi_k` / `psi^dag_k`
//! vertices. A complex Gaussian Wick contraction pairs every `psi_k` with
//! some `psi^dag_j`, i.e. it is a permutation of `0..n`. Gluing index lines
//! along the contractions produces closed loops of left (solid) and right
//! (dashed) indices; each loop carries a sector label summed over subject to
//! `C_lr = 1` on every contraction, each left loop weighs `N d_l`, each right
//! loop `N d'_r` and each contraction `1/N`. The power of `N` of a diagram is
//! therefore its Euler characteristic `chi = #loops - n`, and only the
//! non-crossing (planar, `chi = 1`) diagrams survive at large `N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{scaling_constants, ConstraintSpec};

pub const MAX_ALL_PAIRINGS: usize = 8;
pub const MAX_PLANAR_PAIRINGS: usize = 12;
pub const MAX_EXACT_ORDER: usize = 5;

/// A Wick contraction of `Tr rho^n`: `psi_k` is paired with
/// `psi^dag_{matching[k]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WickPairing {
    matching: Vec<usize>,
}

impl WickPairing {
    pub fn new(matching: Vec<usize>) -> Result<Self> {
        let n = matching.len();
        if n == 0 {
            return Err(Error::validation("pairing must have at least one vertex pair"));
        }
        let mut seen = vec![false; n];
        for &j in &matching {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::validation("pairing must be a bijection of 0..n"));
            }
        }
        Ok(WickPairing { matching })
    }

    pub fn order(&self) -> usize {
        self.matching.len()
    }

    pub fn partner(&self, k: usize) -> usize {
        self.matching[k]
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }
}

/// Loop incidence structure induced by a pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopGraph {
    pub order: usize,
    /// Solid-line endpoints grouped into loops.
    pub left_loops: Vec<Vec<usize>>,
    /// Dashed-line endpoints grouped into loops.
    pub right_loops: Vec<Vec<usize>>,
    /// `(left loop, right loop)` joined by each contraction, indexed by the
    /// `psi` vertex.
    pub chords: Vec<(usize, usize)>,
    pub chi: i32,
}

impl LoopGraph {
    pub fn is_planar(&self) -> bool {
        self.chi == 1
    }
}

pub fn catalan(n: usize) -> u64 {
    let mut c = 1u64;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// All `n!` pairings, or only the `Catalan(n)` non-crossing ones.
pub fn enumerate_pairings(n: usize, planar_only: bool) -> Result<Vec<WickPairing>> {
    let limit = if planar_only { MAX_PLANAR_PAIRINGS } else { MAX_ALL_PAIRINGS };
    if !(1..=limit).contains(&n) {
        return Err(Error::size(format!(
            "pairing order must be in 1..={limit} (planar_only = {planar_only}), got {n}"
        )));
    }
    if planar_only {
        Ok(non_crossing_matchings(0, 2 * n)
            .into_iter()
            .map(|pairs| {
                let mut matching = vec![0; n];
                for (a, b) in pairs {
                    // even circle positions are psi vertices, odd ones psi^dag
                    let (psi, dag) = if a % 2 == 0 { (a, b) } else { (b, a) };
                    matching[psi / 2] = dag / 2;
                }
                WickPairing { matching }
            })
            .collect())
    } else {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut out);
        Ok(out)
    }
}

fn permutations(perm: &mut Vec<usize>, k: usize, out: &mut Vec<WickPairing>) {
    if k == perm.len() {
        out.push(WickPairing { matching: perm.clone() });
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, out);
        perm.swap(k, i);
    }
}

/// Non-crossing perfect matchings of circle positions `start..end`: the first
/// point pairs with a partner splitting the rest into two independent arcs.
fn non_crossing_matchings(start: usize, end: usize) -> Vec<Vec<(usize, usize)>> {
    if start >= end {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for partner in (start + 1..end).step_by(2) {
        let inner = non_crossing_matchings(start + 1, partner);
        let outer = non_crossing_matchings(partner + 1, end);
        for a in &inner {
            for b in &outer {
                let mut m = Vec::with_capacity(1 + a.len() + b.len());
                m.push((start, partner));
                m.extend_from_slice(a);
                m.extend_from_slice(b);
                out.push(m);
            }
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

// Endpoint numbering: psi_k has left endpoint 4k and right endpoint 4k+1;
// psi^dag_k has right endpoint 4k+2 and left endpoint 4k+3.
fn psi_left(k: usize) -> usize {
    4 * k
}
fn psi_right(k: usize) -> usize {
    4 * k + 1
}
fn dag_right(k: usize) -> usize {
    4 * k + 2
}
fn dag_left(k: usize) -> usize {
    4 * k + 3
}

pub fn loop_structure(p: &WickPairing) -> LoopGraph {
    let n = p.order();
    let mut uf = UnionFind::new(4 * n);
    for k in 0..n {
        // boundary: dashed alpha_k joins psi_k and psi^dag_k, solid i_{k+1}
        // joins psi^dag_k and psi_{k+1}
        uf.union(psi_right(k), dag_right(k));
        uf.union(dag_left(k), psi_left((k + 1) % n));
        // contraction double line
        let j = p.partner(k);
        uf.union(psi_left(k), dag_left(j));
        uf.union(psi_right(k), dag_right(j));
    }
    let group = |uf: &mut UnionFind, endpoints: Vec<usize>| -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut roots: Vec<usize> = Vec::new();
        let mut loops: Vec<Vec<usize>> = Vec::new();
        let mut id_of = vec![usize::MAX; 4 * n];
        for e in endpoints {
            let root = uf.find(e);
            let id = match roots.iter().position(|&r| r == root) {
                Some(id) => id,
                None => {
                    roots.push(root);
                    loops.push(Vec::new());
                    roots.len() - 1
                }
            };
            loops[id].push(e);
            id_of[e] = id;
        }
        (loops, id_of)
    };
    let (left_loops, left_id) = group(&mut uf, (0..n).flat_map(|k| [psi_left(k), dag_left(k)]).collect());
    let (right_loops, right_id) = group(&mut uf, (0..n).flat_map(|k| [psi_right(k), dag_right(k)]).collect());
    let chords = (0..n).map(|k| (left_id[psi_left(k)], right_id[psi_right(k)])).collect();
    let chi = (left_loops.len() + right_loops.len()) as i32 - n as i32;
    LoopGraph { order: n, left_loops, right_loops, chords, chi }
}

/// Sum over sector labels of the loops of `g`, each left loop weighted by
/// `d_l` and each right loop by `d'_r`, with `C_lr = 1` on every chord.
pub fn sector_sum(g: &LoopGraph, spec: &ConstraintSpec) -> f64 {
    weighted_sector_sum(g, spec.constraint_matrix(), spec.d(), spec.d_prime())
}

/// [`sector_sum`] with arbitrary loop weights (e.g. integer dimensions).
///
/// Labels of the side with fewer loops are enumerated exhaustively, pruning
/// assignments that leave some loop on the other side without an allowed
/// label; the other side then factorizes loop by loop.
pub fn weighted_sector_sum(g: &LoopGraph, c: &[Vec<u8>], d: &[f64], d_prime: &[f64]) -> f64 {
    if g.left_loops.len() <= g.right_loops.len() {
        let chords: Vec<(usize, usize)> = g.chords.clone();
        labeled_sum(g.left_loops.len(), g.right_loops.len(), &chords, c, d, d_prime, false)
    } else {
        let chords: Vec<(usize, usize)> = g.chords.iter().map(|&(l, r)| (r, l)).collect();
        labeled_sum(g.right_loops.len(), g.left_loops.len(), &chords, c, d_prime, d, true)
    }
}

/// Enumerates labels of the `outer` loops; `transposed` means the outer side
/// indexes columns of `c`.
fn labeled_sum(
    outer: usize,
    inner: usize,
    chords: &[(usize, usize)],
    c: &[Vec<u8>],
    outer_w: &[f64],
    inner_w: &[f64],
    transposed: bool,
) -> f64 {
    let masks: Vec<u128> = (0..outer_w.len())
        .map(|a| {
            (0..inner_w.len()).fold(0u128, |m, b| {
                let bit = if transposed { c[b][a] } else { c[a][b] };
                if bit == 1 {
                    m | (1u128 << b)
                } else {
                    m
                }
            })
        })
        .collect();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); outer];
    for &(o, i) in chords {
        if !neighbours[o].contains(&i) {
            neighbours[o].push(i);
        }
    }
    let all = if inner_w.len() == 128 { u128::MAX } else { (1u128 << inner_w.len()) - 1 };
    let mut inner_masks = vec![all; inner];
    let ctx = LabelCtx { masks: &masks, neighbours: &neighbours, outer_w, inner_w };
    ctx.recurse(0, 1.0, &mut inner_masks)
}

struct LabelCtx<'a> {
    masks: &'a [u128],
    neighbours: &'a [Vec<usize>],
    outer_w: &'a [f64],
    inner_w: &'a [f64],
}

impl LabelCtx<'_> {
    fn recurse(&self, loop_idx: usize, weight: f64, inner_masks: &mut [u128]) -> f64 {
        if loop_idx == self.neighbours.len() {
            return inner_masks.iter().fold(weight, |acc, &m| acc * self.mask_weight(m));
        }
        let mut total = 0.0;
        let mut saved = Vec::with_capacity(self.neighbours[loop_idx].len());
        for (label, &w) in self.outer_w.iter().enumerate() {
            let row = self.masks[label];
            saved.clear();
            let mut feasible = true;
            for &i in &self.neighbours[loop_idx] {
                saved.push(inner_masks[i]);
                inner_masks[i] &= row;
                if inner_masks[i] == 0 {
                    feasible = false;
                }
            }
            if feasible {
                total += self.recurse(loop_idx + 1, weight * w, inner_masks);
            }
            for (&i, &m) in self.neighbours[loop_idx].iter().zip(&saved) {
                inner_masks[i] = m;
            }
        }
        total
    }

    fn mask_weight(&self, mut mask: u128) -> f64 {
        let mut sum = 0.0;
        while mask != 0 {
            let b = mask.trailing_zeros() as usize;
            sum += self.inner_w[b];
            mask &= mask - 1;
        }
        sum
    }
}

/// Leading large-`N` coefficient `m_n = lim E[Tr rho^n] / N`.
pub fn planar_moment(spec: &ConstraintSpec, n: usize) -> Result<f64> {
    Ok(enumerate_pairings(n, true)?
        .iter()
        .map(|p| sector_sum(&loop_structure(p), spec))
        .sum())
}

/// Exact `E[Tr rho^n]` at finite integer sector dimensions, summing all
/// `n!` complex Wick contractions.
pub fn finite_moment_exact(
    dims: &[usize],
    dims_prime: &[usize],
    c: &[Vec<u8>],
    n_ref: usize,
    n: usize,
) -> Result<f64> {
    if !(1..=MAX_EXACT_ORDER).contains(&n) {
        return Err(Error::size(format!("exact moments need 1 <= n <= {MAX_EXACT_ORDER}, got {n}")));
    }
    if n_ref == 0 {
        return Err(Error::validation("reference scale N must be positive"));
    }
    if c.len() != dims.len() || c.iter().any(|row| row.len() != dims_prime.len()) {
        return Err(Error::validation("constraint matrix shape does not match dimensions"));
    }
    let d: Vec<f64> = dims.iter().map(|&x| x as f64).collect();
    let dp: Vec<f64> = dims_prime.iter().map(|&x| x as f64).collect();
    let total: f64 = enumerate_pairings(n, false)?
        .iter()
        .map(|p| weighted_sector_sum(&loop_structure(p), c, &d, &dp))
        .sum();
    Ok(total / (n_ref as f64).powi(n as i32))
}

/// `E[Tr rho^n] = sum_chi N^chi * coefficient` for sector dimensions `N d`,
/// returned in decreasing `chi`.
pub fn genus_expansion(spec: &ConstraintSpec, n: usize) -> Result<Vec<(i32, f64)>> {
    let mut terms: Vec<(i32, f64)> = Vec::new();
    for p in enumerate_pairings(n, false)? {
        let g = loop_structure(&p);
        let value = sector_sum(&g, spec);
        match terms.iter_mut().find(|(chi, _)| *chi == g.chi) {
            Some(term) => term.1 += value,
            None => terms.push((g.chi, value)),
        }
    }
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    Ok(terms)
}

/// `mu_n = integral of eps^n p(eps)`, from the planar moment:
/// `eps_scale^n m_n / sum_l d_l`.
pub fn normalized_moment(spec: &ConstraintSpec, n: usize) -> Result<f64> {
    let scale = scaling_constants(spec);
    if n == 0 {
        return Ok(1.0);
    }
    Ok(scale.eps_scale.powi(n as i32) * planar_moment(spec, n)? / scale.sum_d)
}
