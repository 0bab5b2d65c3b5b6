//! Mapping of index codewords onto constellation points.
//!
//! Receivers are served in non-decreasing order of their effective
//! signal-set exponent eta. A receiver's effective codebooks are the cosets
//! of the span of the encoding-matrix rows outside its side-information
//! set; all cosets of one receiver share a single pairwise-distance
//! constraint, and the map is built in two passes over the priority order:
//!
//! 1. *Level pass.* Each receiver in turn is granted the deepest
//!    set-partition level whose intra-subset minimum distance its codebooks
//!    can still all satisfy, given the levels already granted. This is the
//!    subset discipline: a codebook that fits entirely inside one level
//!    subset sees that level's minimum distance.
//! 2. *Refinement pass.* Each receiver in turn is raised to the largest
//!    exact distance any bijection still allows, without disturbing any
//!    other receiver's granted level or any higher-priority receiver's
//!    refined distance. This resolves codebooks that straddle two subsets
//!    of their level.
//!
//! Distances are compared through the constellation's exact integer keys,
//! and feasibility of every candidate threshold is decided by a
//! backtracking search over bijections, so the result is deterministic.

use crate::code::{EncodingMatrix, ReceiverCodeView};
use crate::constellation::{Constellation, Kind};
use crate::gf2::BitVec;
use crate::{Error, Result};

/// Tie handling when several receivers share an eta value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TieRule {
    /// Keep the input order (stable sort).
    InputOrder,
    /// Order ties by position in an explicit id list; the list must be a
    /// permutation of all receiver ids.
    Explicit(Vec<String>),
}

/// Receivers sorted by non-decreasing eta.
#[derive(Debug, Clone)]
pub struct PriorityOrder {
    /// Indices into the view list, highest priority first.
    pub order: Vec<usize>,
    pub ids: Vec<String>,
}

pub fn priority_order(views: &[ReceiverCodeView], tie: &TieRule) -> Result<PriorityOrder> {
    let rank_of = |idx: usize| -> Result<usize> {
        match tie {
            TieRule::InputOrder => Ok(idx),
            TieRule::Explicit(ids) => ids
                .iter()
                .position(|id| *id == views[idx].id)
                .ok_or_else(|| Error::BadPriorityList(format!("unknown id {:?}", views[idx].id))),
        }
    };
    if let TieRule::Explicit(ids) = tie {
        if ids.len() != views.len() {
            return Err(Error::BadPriorityList(format!(
                "list has {} entries for {} receivers",
                ids.len(),
                views.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for id in ids {
            if !seen.insert(id) {
                return Err(Error::BadPriorityList(format!("duplicate id {id:?}")));
            }
        }
    }
    let mut order: Vec<usize> = (0..views.len()).collect();
    let ranks = order.iter().map(|&i| rank_of(i)).collect::<Result<Vec<_>>>()?;
    order.sort_by_key(|&i| (views[i].eta, ranks[i]));
    let ids = order.iter().map(|&i| views[i].id.clone()).collect();
    Ok(PriorityOrder { order, ids })
}

/// A bijection from the 2^N codewords to the 2^N constellation points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    bits: usize,
    /// Codeword id (bit string read as an integer) -> point index.
    assignment: Vec<usize>,
    /// Receiver ids in the priority order used to build the mapping.
    pub receiver_order: Vec<String>,
}

impl Labeling {
    pub fn new(bits: usize, assignment: Vec<usize>, receiver_order: Vec<String>) -> Self {
        let size = 1usize << bits;
        assert_eq!(assignment.len(), size);
        let mut seen = vec![false; size];
        for &p in &assignment {
            assert!(p < size && !seen[p], "labeling is not a bijection");
            seen[p] = true;
        }
        Labeling { bits, assignment, receiver_order }
    }

    pub fn identity(bits: usize) -> Self {
        Labeling::new(bits, (0..1 << bits).collect(), Vec::new())
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn point_index(&self, codeword_id: usize) -> usize {
        self.assignment[codeword_id]
    }

    pub fn point_of(&self, y: &BitVec) -> usize {
        assert_eq!(y.len(), self.bits);
        self.assignment[y.index()]
    }

    /// CSV rows `codeword,point,re,im`, sorted by codeword.
    pub fn to_csv(&self, cons: &Constellation) -> String {
        let mut out = String::from("codeword,point,re,im\n");
        for id in 0..self.assignment.len() {
            let y = BitVec::from_index(self.bits, id);
            let p = cons.point(self.assignment[id]);
            out.push_str(&format!("{},{},{:.6},{:.6}\n", y, self.assignment[id], p.re, p.im));
        }
        out
    }
}

/// Smallest pairwise distance key within any effective codebook of one
/// receiver, or `None` when every codebook is a singleton.
pub fn receiver_min_key(
    cons: &Constellation,
    assignment: &[usize],
    class_of: &[usize],
) -> Option<u64> {
    let mut best: Option<u64> = None;
    for i in 0..assignment.len() {
        for j in (i + 1)..assignment.len() {
            if class_of[i] == class_of[j] {
                let k = cons.dist_key(assignment[i], assignment[j]);
                best = Some(best.map_or(k, |b: u64| b.min(k)));
            }
        }
    }
    best
}

/// Gain vector of a labeling: per eligible receiver in priority order, the
/// effective minimum distance key (MAX for error-free receivers).
pub fn gain_key_vector(
    cons: &Constellation,
    assignment: &[usize],
    partitions: &[Vec<usize>],
) -> Vec<u64> {
    partitions
        .iter()
        .map(|p| receiver_min_key(cons, assignment, p).unwrap_or(u64::MAX))
        .collect()
}

/// Bijective placement search with pairwise minimum-distance constraints.
struct PlacementSearch {
    size: usize,
    /// Distinct distance keys, ascending. Constraint levels index this.
    keys: Vec<u64>,
    /// allowed[level][p] = mask of points at key >= keys[level] from p.
    allowed: Vec<Vec<u64>>,
    /// Candidate mask for the first codeword: symmetry orbit representatives.
    first_mask: u64,
}

impl PlacementSearch {
    fn new(cons: &Constellation) -> Result<Self> {
        let size = cons.size();
        if size > 64 {
            return Err(Error::UnsupportedSize(format!(
                "labeling search supports up to 64 points, constellation has {size}"
            )));
        }
        let keys = cons.distance_keys();
        let full: u64 = if size == 64 { !0 } else { (1u64 << size) - 1 };
        let mut allowed = Vec::with_capacity(keys.len());
        for (lvl, &key) in keys.iter().enumerate() {
            let mut per_point = Vec::with_capacity(size);
            for p in 0..size {
                let mut mask = 0u64;
                for q in 0..size {
                    if q != p && cons.dist_key(p, q) >= key {
                        mask |= 1 << q;
                    }
                }
                per_point.push(mask);
            }
            let _ = lvl;
            allowed.push(per_point);
        }
        let orbits = cons.symmetry_orbits();
        let mut first_mask = 0u64;
        for (p, &o) in orbits.iter().enumerate() {
            if o == p {
                first_mask |= 1 << p;
            }
        }
        first_mask &= full;
        Ok(PlacementSearch { size, keys, allowed, first_mask })
    }

    /// Constraint index of the smallest stored key >= `key`.
    fn level_of_key_at_least(&self, key: u64) -> u8 {
        self.keys.partition_point(|&k| k < key) as u8
    }

    /// Finds a bijection satisfying `req` (pairwise constraint levels), or
    /// proves none exists. Deterministic: minimum-remaining-values variable
    /// order, ascending point order, first codeword pinned to symmetry
    /// orbit representatives.
    fn solve(&self, req: &[Vec<u8>]) -> Option<Vec<usize>> {
        let n = self.size;
        let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
        let mut cand = vec![full; n];
        cand[0] = self.first_mask;
        let mut assign = vec![usize::MAX; n];
        if self.dfs(req, &mut cand, &mut assign, 0) {
            Some(assign)
        } else {
            None
        }
    }

    fn dfs(&self, req: &[Vec<u8>], cand: &mut Vec<u64>, assign: &mut Vec<usize>, done: usize) -> bool {
        let n = self.size;
        if done == n {
            return true;
        }
        // Minimum remaining values; also a union pigeonhole check.
        let mut var = usize::MAX;
        let mut best = u32::MAX;
        let mut union = 0u64;
        for v in 0..n {
            if assign[v] != usize::MAX {
                continue;
            }
            let c = cand[v].count_ones();
            if c == 0 {
                return false;
            }
            union |= cand[v];
            if c < best {
                best = c;
                var = v;
            }
        }
        if (union.count_ones() as usize) < n - done {
            return false;
        }
        let options = cand[var];
        let mut bits = options;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let saved = cand.clone();
            assign[var] = p;
            cand[var] = 1 << p;
            let mut ok = true;
            for u in 0..n {
                if u == var || assign[u] != usize::MAX {
                    continue;
                }
                cand[u] &= !(1u64 << p);
                let lvl = req[var][u];
                if lvl > 0 {
                    cand[u] &= self.allowed[lvl as usize][p];
                }
                if cand[u] == 0 {
                    ok = false;
                    break;
                }
            }
            if ok && self.dfs(req, cand, assign, done + 1) {
                return true;
            }
            *cand = saved;
            assign[var] = usize::MAX;
        }
        false
    }
}

/// Raises the constraint level of every same-class pair to at least `lvl`.
/// Returns false when nothing changed.
fn raise_class_pairs(req: &mut [Vec<u8>], class_of: &[usize], lvl: u8) -> bool {
    let mut changed = false;
    for i in 0..class_of.len() {
        for j in (i + 1)..class_of.len() {
            if class_of[i] == class_of[j] && req[i][j] < lvl {
                req[i][j] = lvl;
                req[j][i] = lvl;
                changed = true;
            }
        }
    }
    changed
}

/// Builds the labeling for the given priority order.
///
/// Receivers with `eta >= N` see the whole constellation no matter what, so
/// they impose no constraints; when no receiver is eligible the codewords
/// are mapped in plain index order. Otherwise the two-pass schedule in the
/// module docs runs over the eligible receivers.
pub fn run_algorithm1(
    code: &EncodingMatrix,
    views: &[ReceiverCodeView],
    cons: &Constellation,
    order: &PriorityOrder,
) -> Result<Labeling> {
    let n_bits = code.len();
    if cons.bits() != n_bits {
        return Err(Error::DimensionMismatch { expected: 1 << n_bits, got: cons.size() });
    }
    let receiver_order: Vec<String> = order.ids.clone();
    let eligible: Vec<usize> =
        order.order.iter().copied().filter(|&i| views[i].eta < n_bits).collect();
    if eligible.is_empty() {
        let mut l = Labeling::identity(n_bits);
        l.receiver_order = receiver_order;
        return Ok(l);
    }

    let search = PlacementSearch::new(cons)?;
    let size = cons.size();
    let tree = crate::constellation::ungerboeck_partition(cons);
    // Smallest intra-subset distance key per partition level.
    let level_keys: Vec<u64> = tree
        .levels
        .iter()
        .map(|subsets| {
            subsets
                .iter()
                .flat_map(|s| {
                    s.iter()
                        .enumerate()
                        .flat_map(move |(a, &i)| s[a + 1..].iter().map(move |&j| cons.dist_key(i, j)))
                })
                .min()
                .unwrap_or(u64::MAX)
        })
        .collect();

    let partitions: Vec<Vec<usize>> =
        eligible.iter().map(|&ri| code.coset_partition(&views[ri].knows)).collect();
    let max_class: Vec<usize> = partitions
        .iter()
        .map(|class_of| {
            let mut sizes = std::collections::HashMap::new();
            for &c in class_of {
                *sizes.entry(c).or_insert(0usize) += 1;
            }
            sizes.values().copied().max().unwrap_or(1)
        })
        .collect();
    // A circular codebook of s points cannot keep separation s*key > M.
    let impossible = |kind: Kind, class_size: usize, key: u64| {
        kind == Kind::Psk && (class_size as u64) * key > size as u64
    };

    let mut req = vec![vec![0u8; size]; size];
    let mut witness: Option<Vec<usize>> = None;
    let mut granted = vec![0u64; eligible.len()];

    // Level pass: deepest feasible partition level per receiver.
    for (e, class_of) in partitions.iter().enumerate() {
        if max_class[e] < 2 {
            continue;
        }
        for level in (1..level_keys.len()).rev() {
            let key = level_keys[level];
            if impossible(cons.kind(), max_class[e], key) {
                continue;
            }
            let lvl_idx = search.level_of_key_at_least(key);
            let mut trial = req.clone();
            if !raise_class_pairs(&mut trial, class_of, lvl_idx) {
                granted[e] = key;
                break;
            }
            if let Some(w) = search.solve(&trial) {
                req = trial;
                witness = Some(w);
                granted[e] = key;
                break;
            }
        }
    }

    // Refinement pass: largest exact distance above the granted level.
    for (e, class_of) in partitions.iter().enumerate() {
        if max_class[e] < 2 {
            continue;
        }
        for lvl_idx in (1..search.keys.len()).rev() {
            let key = search.keys[lvl_idx];
            if key <= granted[e] {
                break;
            }
            if impossible(cons.kind(), max_class[e], key) {
                continue;
            }
            let mut trial = req.clone();
            if !raise_class_pairs(&mut trial, class_of, lvl_idx as u8) {
                granted[e] = key;
                break;
            }
            if let Some(w) = search.solve(&trial) {
                req = trial;
                witness = Some(w);
                granted[e] = key;
                break;
            }
        }
    }

    let assignment = match witness {
        Some(w) => w,
        None => search.solve(&req).expect("unconstrained placement always succeeds"),
    };
    Ok(Labeling::new(n_bits, assignment, receiver_order))
}

/// Exhaustive oracle: enumerates bijections (first codeword pinned to
/// symmetry orbit representatives) and returns one whose gain vector over
/// the eligible receivers, in priority order, is lexicographically maximal.
pub fn brute_force_optimal(
    code: &EncodingMatrix,
    views: &[ReceiverCodeView],
    cons: &Constellation,
    order: &PriorityOrder,
) -> Result<Labeling> {
    let n_bits = code.len();
    let size = cons.size();
    if size > 8 {
        return Err(Error::UnsupportedSize(format!(
            "oracle enumerates bijections only up to 8 points, got {size}"
        )));
    }
    if cons.bits() != n_bits {
        return Err(Error::DimensionMismatch { expected: 1 << n_bits, got: cons.size() });
    }
    let eligible: Vec<usize> =
        order.order.iter().copied().filter(|&i| views[i].eta < n_bits).collect();
    let partitions: Vec<Vec<usize>> =
        eligible.iter().map(|&i| code.coset_partition(&views[i].knows)).collect();
    let orbits = cons.symmetry_orbits();
    let first: Vec<usize> = (0..size).filter(|&p| orbits[p] == p).collect();

    let mut best_vec: Option<Vec<u64>> = None;
    let mut best_assign: Option<Vec<usize>> = None;
    let mut assign = vec![usize::MAX; size];
    let mut used = vec![false; size];

    fn rec(
        depth: usize,
        size: usize,
        first: &[usize],
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == size {
            visit(assign);
            return;
        }
        let options: Vec<usize> = if depth == 0 {
            first.to_vec()
        } else {
            (0..size).filter(|&p| !used[p]).collect()
        };
        for p in options {
            assign[depth] = p;
            used[p] = true;
            rec(depth + 1, size, first, assign, used, visit);
            used[p] = false;
            assign[depth] = usize::MAX;
        }
    }

    {
        let cons_ref = &cons;
        let partitions_ref = &partitions;
        let mut visit = |a: &[usize]| {
            let v = gain_key_vector(cons_ref, a, partitions_ref);
            if best_vec.as_ref().map_or(true, |b| v > *b) {
                best_vec = Some(v);
                best_assign = Some(a.to_vec());
            }
        };
        rec(0, size, &first, &mut assign, &mut used, &mut visit);
    }

    Ok(Labeling::new(n_bits, best_assign.expect("at least one bijection"), order.ids.clone()))
}
