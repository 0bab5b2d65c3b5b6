//! Scalar linear index codes: encoding, per-receiver views of the coded
//! bits, effective codebooks, and the exhaustive decodability check.

use crate::gf2::{consistent_solutions, BitMatrix, BitVec};
use crate::problem::IndexCodingProblem;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// An n-by-N binary encoding matrix `L`; the broadcast codeword is `y = xL`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingMatrix {
    matrix: BitMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawCode {
    n: usize,
    #[serde(rename = "N")]
    len: usize,
    rows: Vec<String>,
}

impl EncodingMatrix {
    /// Wraps a matrix, rejecting rank-deficient codes (`rank2(L) < N`).
    pub fn new(matrix: BitMatrix) -> Result<Self> {
        if matrix.cols() > matrix.rows() {
            return Err(Error::InvalidCode(format!(
                "code length {} exceeds message count {}",
                matrix.cols(),
                matrix.rows()
            )));
        }
        let rank = matrix.rank2();
        if rank != matrix.cols() {
            return Err(Error::InvalidCode(format!(
                "rank {} below code length {}",
                rank,
                matrix.cols()
            )));
        }
        Ok(EncodingMatrix { matrix })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Message count n.
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Code length N (bits per broadcast codeword).
    pub fn len(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawCode = serde_json::from_str(s)?;
        if raw.rows.len() != raw.n {
            return Err(Error::InvalidCode(format!(
                "{} rows for n={}",
                raw.rows.len(),
                raw.n
            )));
        }
        let rows = raw
            .rows
            .iter()
            .map(|r| {
                let v = BitVec::parse(r)?;
                if v.len() != raw.len {
                    return Err(Error::InvalidCode(format!(
                        "row {r:?} has {} bits, expected {}",
                        v.len(),
                        raw.len
                    )));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        EncodingMatrix::new(BitMatrix::from_rows(&rows))
    }

    pub fn to_json(&self) -> String {
        let raw = RawCode {
            n: self.n(),
            len: self.len(),
            rows: (0..self.n()).map(|r| self.matrix.row(r).to_string()).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serialization cannot fail")
    }

    /// Encodes a message word: `y = xL`.
    pub fn encode(&self, x: &BitVec) -> Result<BitVec> {
        self.matrix.mat_vec_mul(x)
    }

    /// Coded bits computable from the given side information alone:
    /// `{j : support(column j) subset of knows}`. 0-based bit indices.
    pub fn known_transmissions(&self, knows: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.len())
            .filter(|&j| {
                self.matrix
                    .column_support(j)
                    .expect("column index in range")
                    .iter()
                    .all(|k| knows.contains(k))
            })
            .collect()
    }

    /// Span-based variant: bit `j` counts as known when its column lies in
    /// the space of side-information coordinates. Agrees with
    /// [`EncodingMatrix::known_transmissions`] for single columns; kept as a
    /// separate route for cross-checking.
    pub fn known_transmissions_span(&self, knows: &BTreeSet<usize>) -> BTreeSet<usize> {
        let units: Vec<BitVec> = knows
            .iter()
            .map(|&k| {
                let mut e = BitVec::zeros(self.n());
                e.set(k, true);
                e
            })
            .collect();
        let base = BitMatrix::row_basis(units.clone(), self.n());
        (0..self.len())
            .filter(|&j| {
                let mut col = BitVec::zeros(self.n());
                for k in self.matrix.column_support(j).expect("in range") {
                    col.set(k, true);
                }
                BitMatrix::reduce(&base, &col).is_zero()
            })
            .collect()
    }

    /// Effective signal-set exponent: `min(n - |knows|, N - |S|)`.
    pub fn eta(&self, knows: &BTreeSet<usize>) -> usize {
        let s = self.known_transmissions(knows).len();
        (self.n() - knows.len()).min(self.len() - s)
    }

    /// True iff the receiver's effective codebook is smaller than the full
    /// code, i.e. side information buys a coding gain opportunity.
    pub fn sicg_eligible(&self, knows: &BTreeSet<usize>) -> bool {
        self.eta(knows) < self.len()
    }

    /// Codewords consistent with one realization of the known messages.
    pub fn effective_codebook(
        &self,
        knows: &BTreeSet<usize>,
        realization: &[(usize, bool)],
    ) -> Vec<BitVec> {
        debug_assert!(realization.iter().all(|(k, _)| knows.contains(k)));
        debug_assert_eq!(realization.len(), knows.len());
        consistent_solutions(&self.matrix, realization)
    }

    /// Exact log2 of every effective codebook size for this receiver: the
    /// rank of the rows outside the side-information set. Never exceeds
    /// [`EncodingMatrix::eta`].
    pub fn effective_rank(&self, knows: &BTreeSet<usize>) -> usize {
        let free_rows: Vec<BitVec> =
            (0..self.n()).filter(|k| !knows.contains(k)).map(|k| self.matrix.row(k)).collect();
        BitMatrix::row_basis(free_rows, self.len()).len()
    }

    /// Partition of all 2^N codewords into effective codebooks (cosets of
    /// the span of the unknown-message rows). Returns per-codeword class
    /// ids; classes are numbered by their smallest codeword.
    pub fn coset_partition(&self, knows: &BTreeSet<usize>) -> Vec<usize> {
        let free_rows: Vec<BitVec> =
            (0..self.n()).filter(|k| !knows.contains(k)).map(|k| self.matrix.row(k)).collect();
        let basis = BitMatrix::row_basis(free_rows, self.len());
        let size = 1usize << self.len();
        let mut rep_to_class = std::collections::BTreeMap::new();
        let mut class_of = vec![0usize; size];
        for id in 0..size {
            let v = BitVec::from_index(self.len(), id);
            let rep = BitMatrix::reduce(&basis, &v).index();
            let next = rep_to_class.len();
            let class = *rep_to_class.entry(rep).or_insert(next);
            class_of[id] = class;
        }
        class_of
    }

    /// Linear decoder coefficients for one receiver: vectors `(u, v)` with
    /// `x_w = <y, u> + <x, v>` and `support(v)` inside the side-information
    /// set. Exists iff the demanded message is decodable from `y` plus side
    /// information under every message realization.
    pub fn decode_functional(
        &self,
        knows: &BTreeSet<usize>,
        want: usize,
    ) -> Option<(BitVec, BitVec)> {
        let n = self.n();
        let cols = self.len() + knows.len();
        // Equations over x: L u + sum_k v_k e_k = e_w.
        let mut a = BitMatrix::zeros(n, cols);
        for r in 0..n {
            for c in 0..self.len() {
                a.set(r, c, self.matrix.get(r, c));
            }
        }
        for (c, &k) in knows.iter().enumerate() {
            a.set(k, self.len() + c, true);
        }
        let mut e_w = BitVec::zeros(n);
        e_w.set(want, true);
        let z = a.solve(&e_w)?;
        let mut u = BitVec::zeros(self.len());
        for j in 0..self.len() {
            u.set(j, z.get(j));
        }
        let mut v = BitVec::zeros(n);
        for (c, &k) in knows.iter().enumerate() {
            v.set(k, z.get(self.len() + c));
        }
        Some((u, v))
    }

    /// Exhaustive decodability check: for every receiver and every pair of
    /// message words agreeing on its side information and producing the
    /// same codeword, the demanded bit must agree.
    pub fn validate(&self, problem: &IndexCodingProblem) -> bool {
        let p = problem.normalize();
        if p.n != self.n() {
            return false;
        }
        let n = self.n();
        for r in &p.receivers {
            let want = *r.wants.iter().next().expect("normalized receiver");
            // Key: (side information realization, codeword) -> demanded bit.
            let mut table: std::collections::HashMap<(u32, u32), bool> =
                std::collections::HashMap::new();
            for w in 0u32..(1 << n) {
                let x = BitVec::from_index(n, w as usize);
                let y = self.encode(&x).expect("dimensions match");
                let mut known = 0u32;
                for (pos, &k) in r.knows.iter().enumerate() {
                    if x.get(k) {
                        known |= 1 << pos;
                    }
                }
                let bit = x.get(want);
                if let Some(&prev) = table.get(&(known, y.index() as u32)) {
                    if prev != bit {
                        return false;
                    }
                } else {
                    table.insert((known, y.index() as u32), bit);
                }
            }
        }
        true
    }
}

/// Everything a labeling or simulation needs to know about one receiver's
/// relationship to the code.
#[derive(Debug, Clone)]
pub struct ReceiverCodeView {
    pub id: String,
    /// Demanded message, 0-based.
    pub want: usize,
    /// Side information, 0-based message indices.
    pub knows: BTreeSet<usize>,
    /// Coded bits known a priori, 0-based bit indices.
    pub s: BTreeSet<usize>,
    pub eta: usize,
    pub sicg_eligible: bool,
    /// log2 of the exact effective codebook size.
    pub effective_rank: usize,
}

/// Builds the per-receiver views for a normalized problem.
pub fn code_views(code: &EncodingMatrix, problem: &IndexCodingProblem) -> Result<Vec<ReceiverCodeView>> {
    let p = problem.normalize();
    if p.n != code.n() {
        return Err(Error::DimensionMismatch { expected: code.n(), got: p.n });
    }
    Ok(p.receivers
        .iter()
        .map(|r| ReceiverCodeView {
            id: r.id.clone(),
            want: *r.wants.iter().next().expect("normalized receiver"),
            knows: r.knows.clone(),
            s: code.known_transmissions(&r.knows),
            eta: code.eta(&r.knows),
            sicg_eligible: code.sicg_eligible(&r.knows),
            effective_rank: code.effective_rank(&r.knows),
        })
        .collect())
}
