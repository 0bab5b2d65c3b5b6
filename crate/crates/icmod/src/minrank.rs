//! Minrank of a side-information graph over GF(2) by exhaustive search.
//!
//! A 0-1 matrix `A` fits the graph when every diagonal entry is 1 and every
//! off-diagonal 1 sits on an edge. The minimum rank over all fitting
//! matrices equals the length of an optimal scalar linear index code, and a
//! witness matrix yields an encoding matrix directly.

use crate::code::EncodingMatrix;
use crate::gf2::BitMatrix;
use crate::problem::SideInfoGraph;
use crate::{Error, Result};

/// Limits for the exhaustive search.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// Maximum number of graph vertices.
    pub max_vertices: usize,
    /// Maximum number of free (edge) positions, i.e. log2 of the search size.
    pub max_free_bits: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_vertices: 16, max_free_bits: 24 }
    }
}

impl SearchLimits {
    /// Applies the `ICMOD_MAX_N` environment override to both limits.
    pub fn from_env() -> Self {
        let mut limits = SearchLimits::default();
        if let Ok(s) = std::env::var("ICMOD_MAX_N") {
            if let Ok(v) = s.trim().parse::<usize>() {
                limits.max_vertices = v;
                limits.max_free_bits = v.saturating_mul(3) / 2;
            }
        }
        limits
    }
}

/// True iff `a` fits the graph: unit diagonal and support within the edges.
pub fn fits(a: &BitMatrix, g: &SideInfoGraph) -> Result<bool> {
    if a.rows() != g.n || a.cols() != g.n {
        return Err(Error::DimensionMismatch { expected: g.n, got: a.rows().max(a.cols()) });
    }
    for i in 0..g.n {
        if !a.get(i, i) {
            return Ok(false);
        }
        for j in 0..g.n {
            if i != j && a.get(i, j) && !g.has_edge(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimum rank over all fitting matrices, with the first witness attaining
/// it in Gray-code enumeration order over the free edge positions.
pub fn minrank(g: &SideInfoGraph, limits: &SearchLimits) -> Result<(usize, BitMatrix)> {
    if g.n > limits.max_vertices {
        return Err(Error::BudgetExceeded(format!(
            "{} vertices exceeds limit {}",
            g.n, limits.max_vertices
        )));
    }
    let free: Vec<(usize, usize)> = g.edge_list();
    if free.len() > limits.max_free_bits {
        return Err(Error::BudgetExceeded(format!(
            "{} free edge positions exceed limit {} (search would cover 2^{} matrices)",
            free.len(),
            limits.max_free_bits,
            free.len()
        )));
    }

    // Start from the identity (all free bits zero) and walk a Gray code so
    // consecutive candidates differ in a single entry.
    let mut a = BitMatrix::identity(g.n);
    let mut best_rank = a.rank2();
    let mut witness = a.clone();
    let total: u64 = 1u64 << free.len();
    for step in 1..total {
        let bit = step.trailing_zeros() as usize;
        let (i, j) = free[bit];
        a.set(i, j, !a.get(i, j));
        let r = a.rank2();
        if r < best_rank {
            best_rank = r;
            witness = a.clone();
            if best_rank == 1 {
                break;
            }
        }
    }
    debug_assert!(fits(&witness, g).unwrap());
    Ok((best_rank, witness))
}

/// Extracts an n-by-N encoding matrix from a fitting witness of rank N.
///
/// The columns of the result are a basis of the row space of `a` (the first
/// linearly independent rows in row order). Each receiver's fitting row is a
/// combination of the basis rows, so the demanded message is recoverable
/// from the coded bits plus side information.
pub fn encoding_matrix_from_witness(a: &BitMatrix) -> Result<EncodingMatrix> {
    let n = a.rows();
    let rank = a.rank2();
    let mut basis_rows: Vec<usize> = Vec::with_capacity(rank);
    for r in 0..n {
        let mut probe: Vec<crate::gf2::BitVec> = basis_rows.iter().map(|&i| a.row(i)).collect();
        probe.push(a.row(r));
        if BitMatrix::row_basis(probe, a.cols()).len() > basis_rows.len() {
            basis_rows.push(r);
        }
        if basis_rows.len() == rank {
            break;
        }
    }
    if basis_rows.len() != rank {
        return Err(Error::InvalidCode("rank deficient witness".into()));
    }
    let mut l = BitMatrix::zeros(n, rank);
    for (col, &br) in basis_rows.iter().enumerate() {
        for k in 0..n {
            l.set(k, col, a.get(br, k));
        }
    }
    EncodingMatrix::new(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{IndexCodingProblem, Receiver};
    use std::collections::BTreeSet;

    fn unicast(knows_1based: &[&[usize]]) -> IndexCodingProblem {
        IndexCodingProblem::new(
            knows_1based.len(),
            knows_1based
                .iter()
                .enumerate()
                .map(|(i, k)| Receiver {
                    id: format!("R{}", i + 1),
                    wants: BTreeSet::from([i]),
                    knows: k.iter().map(|&j| j - 1).collect(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn example1_graph() -> SideInfoGraph {
        unicast(&[&[2, 3, 4, 5, 6, 7], &[1, 3, 4, 5, 7], &[1, 4, 6, 7], &[2, 5, 6], &[1, 2], &[3], &[]])
            .build_side_info_graph()
            .unwrap()
    }

    #[test]
    fn fits_identity_any_graph() {
        let g = example1_graph();
        assert!(fits(&BitMatrix::identity(7), &g).unwrap());
    }

    #[test]
    fn fits_all_ones_complete_graph() {
        let n = 4;
        let list: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let g = SideInfoGraph::from_edge_list(n, &list);
        let mut ones = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                ones.set(i, j, true);
            }
        }
        assert!(fits(&ones, &g).unwrap());
        let (rank, _) = minrank(&g, &SearchLimits::default()).unwrap();
        assert_eq!(rank, 1);
    }

    #[test]
    fn fits_rejects_non_edge() {
        let g = SideInfoGraph::from_edge_list(3, &[(0, 2)]);
        let mut a = BitMatrix::identity(3);
        a.set(0, 1, true);
        assert!(!fits(&a, &g).unwrap());
    }

    #[test]
    fn minrank_empty_graph_is_n() {
        let g = SideInfoGraph::from_edge_list(5, &[]);
        let (rank, w) = minrank(&g, &SearchLimits::default()).unwrap();
        assert_eq!(rank, 5);
        assert_eq!(w, BitMatrix::identity(5));
    }

    #[test]
    fn minrank_example1_is_four() {
        let (rank, _) = minrank(&example1_graph(), &SearchLimits::default()).unwrap();
        assert_eq!(rank, 4);
    }

    #[test]
    fn budget_guard_rejects_large_searches() {
        let g = example1_graph();
        let limits = SearchLimits { max_vertices: 16, max_free_bits: 4 };
        assert!(matches!(minrank(&g, &limits), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn witness_identity_gives_identity_code() {
        let code = encoding_matrix_from_witness(&BitMatrix::identity(4)).unwrap();
        assert_eq!(code.n(), 4);
        assert_eq!(code.len(), 4);
        assert_eq!(*code.matrix(), BitMatrix::identity(4));
    }

    #[test]
    fn witness_code_always_validates() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        let limits = SearchLimits::default();
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let mut knows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
            for (i, k) in knows.iter_mut().enumerate() {
                for j in 0..n {
                    if i != j && rng.gen_bool(0.4) {
                        k.insert(j);
                    }
                }
            }
            let problem = IndexCodingProblem::new(
                n,
                knows
                    .iter()
                    .enumerate()
                    .map(|(i, k)| Receiver {
                        id: format!("R{}", i + 1),
                        wants: BTreeSet::from([i]),
                        knows: k.clone(),
                    })
                    .collect(),
            )
            .unwrap();
            let g = problem.build_side_info_graph().unwrap();
            let (rank, witness) = minrank(&g, &limits).unwrap();
            let code = encoding_matrix_from_witness(&witness).unwrap();
            assert_eq!(code.len(), rank);
            assert!(code.validate(&problem), "witness code must decode {problem:?}");
        }
    }

    #[test]
    fn minrank_monotone_under_edge_removal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let limits = SearchLimits::default();
        for _ in 0..30 {
            let n = rng.gen_range(2..=5);
            let mut list = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.gen_bool(0.4) {
                        list.push((i, j));
                    }
                }
            }
            if list.is_empty() {
                continue;
            }
            let g = SideInfoGraph::from_edge_list(n, &list);
            let (full, _) = minrank(&g, &limits).unwrap();
            let drop = rng.gen_range(0..list.len());
            let reduced: Vec<(usize, usize)> = list
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != drop)
                .map(|(_, &e)| e)
                .collect();
            let g2 = SideInfoGraph::from_edge_list(n, &reduced);
            let (less, _) = minrank(&g2, &limits).unwrap();
            assert!(less >= full, "removing an edge lowered minrank: {less} < {full}");
        }
    }
}
