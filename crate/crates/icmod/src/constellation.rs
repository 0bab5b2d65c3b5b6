//! Energy-normalized 2^N-PSK and 2^N-QAM signal sets, their binary
//! set-partition trees, and the closed-form per-level minimum distances.
//!
//! Energy convention: a PSK symbol carries energy N exactly (N coded bits at
//! unit energy per bit); a QAM constellation has average energy N. Distances
//! are compared through exact integer keys (ring separation for PSK, grid
//! squared distance for QAM) so that labeling searches and oracles never
//! depend on floating-point rounding.

use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

/// One complex signal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPoint {
    pub re: f64,
    pub im: f64,
}

impl SignalPoint {
    pub fn energy(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn dist_sq(&self, other: &SignalPoint) -> f64 {
        let dr = self.re - other.re;
        let di = self.im - other.im;
        dr * dr + di * di
    }
}

/// Constellation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Kind {
    Psk,
    Qam,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Psk => write!(f, "psk"),
            Kind::Qam => write!(f, "qam"),
        }
    }
}

/// A 2^N-point signal set with exact pairwise distance keys.
#[derive(Debug, Clone)]
pub struct Constellation {
    kind: Kind,
    bits: usize,
    points: Vec<SignalPoint>,
    /// Integer grid coordinates (QAM) used for exact distance keys.
    grid: Option<Vec<(i32, i32)>>,
    /// QAM coordinate scale factor squared.
    scale_sq: f64,
}

impl Constellation {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Bits per symbol, N.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[SignalPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> SignalPoint {
        self.points[i]
    }

    /// Exact integer distance surrogate: strictly increasing with geometric
    /// distance, equal keys iff equal distance.
    pub fn dist_key(&self, i: usize, j: usize) -> u64 {
        match &self.grid {
            None => {
                let m = self.size() as i64;
                let d = (i as i64 - j as i64).rem_euclid(m);
                d.min(m - d) as u64
            }
            Some(grid) => {
                let (xi, yi) = grid[i];
                let (xj, yj) = grid[j];
                let dx = (xi - xj) as i64;
                let dy = (yi - yj) as i64;
                (dx * dx + dy * dy) as u64
            }
        }
    }

    /// Squared Euclidean distance for a given key.
    pub fn d2_of_key(&self, key: u64) -> f64 {
        match self.kind {
            Kind::Psk => {
                let m = self.size() as f64;
                let n = self.bits as f64;
                4.0 * n * (PI * key as f64 / m).sin().powi(2)
            }
            Kind::Qam => self.scale_sq * key as f64,
        }
    }

    pub fn d2(&self, i: usize, j: usize) -> f64 {
        self.d2_of_key(self.dist_key(i, j))
    }

    /// All distinct non-zero distance keys, ascending.
    pub fn distance_keys(&self) -> Vec<u64> {
        let mut keys: Vec<u64> = Vec::new();
        for i in 0..self.size() {
            for j in (i + 1)..self.size() {
                keys.push(self.dist_key(i, j));
            }
        }
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    /// Smallest pairwise squared distance of the full set.
    pub fn min_d2(&self) -> f64 {
        self.d2_of_key(self.distance_keys()[0])
    }

    /// Distance-preserving permutations of the point set, generated by the
    /// geometric symmetries of the family (rotations/reflections of the
    /// ring, dihedral maps of the grid).
    pub fn symmetries(&self) -> Vec<Vec<usize>> {
        match &self.grid {
            None => {
                let m = self.size();
                let mut perms = Vec::with_capacity(2 * m);
                for a in 0..m {
                    perms.push((0..m).map(|k| (k + a) % m).collect());
                    perms.push((0..m).map(|k| (a + m - k % m) % m).collect());
                }
                perms
            }
            Some(grid) => {
                let lookup: HashMap<(i32, i32), usize> =
                    grid.iter().enumerate().map(|(i, &g)| (g, i)).collect();
                let maps: [fn((i32, i32)) -> (i32, i32); 8] = [
                    |(x, y)| (x, y),
                    |(x, y)| (-x, y),
                    |(x, y)| (x, -y),
                    |(x, y)| (-x, -y),
                    |(x, y)| (y, x),
                    |(x, y)| (-y, x),
                    |(x, y)| (y, -x),
                    |(x, y)| (-y, -x),
                ];
                let mut perms = Vec::new();
                'outer: for f in maps {
                    let mut perm = Vec::with_capacity(grid.len());
                    for &g in grid {
                        match lookup.get(&f(g)) {
                            Some(&idx) => perm.push(idx),
                            None => continue 'outer,
                        }
                    }
                    perms.push(perm);
                }
                perms
            }
        }
    }

    /// Per-point orbit id (smallest point index reachable by a symmetry).
    pub fn symmetry_orbits(&self) -> Vec<usize> {
        let perms = self.symmetries();
        let mut orbit: Vec<usize> = (0..self.size()).collect();
        for p in &perms {
            for i in 0..self.size() {
                let target = p[i];
                let low = orbit[i].min(orbit[target]);
                orbit[i] = low;
                orbit[target] = low;
            }
        }
        // Propagate to a fixed point.
        loop {
            let mut changed = false;
            for i in 0..self.size() {
                let rep = orbit[orbit[i]];
                if rep < orbit[i] {
                    orbit[i] = rep;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        orbit
    }
}

/// 2^N-PSK with per-symbol energy N; point k sits at angle 2*pi*k/2^N with
/// point 0 on the positive real axis.
pub fn make_psk(bits: usize) -> Result<Constellation> {
    if bits == 0 || bits > 16 {
        return Err(Error::UnsupportedSize(format!("PSK bits {bits} outside 1..=16")));
    }
    let m = 1usize << bits;
    let amp = (bits as f64).sqrt();
    let points = (0..m)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / m as f64;
            SignalPoint { re: amp * theta.cos(), im: amp * theta.sin() }
        })
        .collect();
    Ok(Constellation { kind: Kind::Psk, bits, points, grid: None, scale_sq: 0.0 })
}

/// 2^N-QAM with average energy N.
///
/// Even N: the square grid with odd-integer coordinates, scaled. Odd N: the
/// 2^(N+1)-point square grid at average energy N is split into its two
/// half-lattices and the half containing the most-negative corner is kept,
/// without re-normalization.
pub fn make_qam(bits: usize) -> Result<Constellation> {
    if bits < 2 || bits > 16 {
        return Err(Error::UnsupportedSize(format!("QAM bits {bits} outside 2..=16")));
    }
    let grid_bits = if bits % 2 == 0 { bits } else { bits + 1 };
    let side = 1usize << (grid_bits / 2);
    // Average energy of the unscaled odd-integer grid is 2(side^2 - 1)/3.
    let scale_sq = 1.5 * bits as f64 / (((1usize << grid_bits) - 1) as f64);
    let scale = scale_sq.sqrt();

    let mut coords: Vec<(i32, i32)> = Vec::with_capacity(1 << grid_bits);
    for gy in 0..side as i32 {
        for gx in 0..side as i32 {
            coords.push((2 * gx - (side as i32 - 1), 2 * gy - (side as i32 - 1)));
        }
    }
    if bits % 2 == 1 {
        // Half-lattice checkerboard: keep the class of the (-m, -m) corner.
        let corner = (-(side as i32) + 1, -(side as i32) + 1);
        let class_of = |(x, y): (i32, i32)| ((x + y) / 2).rem_euclid(2);
        let keep = class_of(corner);
        coords.retain(|&c| class_of(c) == keep);
    }
    // Reading order: top row first, left to right.
    coords.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let points = coords
        .iter()
        .map(|&(x, y)| SignalPoint { re: scale * x as f64, im: scale * y as f64 })
        .collect();
    Ok(Constellation { kind: Kind::Qam, bits, points, grid: Some(coords), scale_sq })
}

pub fn make(kind: Kind, bits: usize) -> Result<Constellation> {
    match kind {
        Kind::Psk => make_psk(bits),
        Kind::Qam => make_qam(bits),
    }
}

/// Binary set-partition tree: level j holds 2^j subsets of 2^(N-j) points
/// with strictly increasing intra-subset minimum distance.
#[derive(Debug, Clone)]
pub struct PartitionTree {
    /// levels[j] = list of subsets (sorted point indices), canonical order
    /// by smallest member.
    pub levels: Vec<Vec<Vec<usize>>>,
    /// delta[j] = intra-subset minimum squared distance at level j.
    pub delta: Vec<f64>,
}

/// Splits a subset into the two colour classes of its minimum-distance
/// graph. The graph is an even cycle (PSK) or a grid section (QAM), so it
/// is connected and bipartite; each half doubles the PSK level separation
/// and the QAM squared distance.
fn bipartition(cons: &Constellation, subset: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let min_key = subset
        .iter()
        .enumerate()
        .flat_map(|(a, &i)| subset[a + 1..].iter().map(move |&j| cons.dist_key(i, j)))
        .min()
        .expect("subset of at least two points");
    let mut color = vec![None::<bool>; subset.len()];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..subset.len() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        queue.push_back(start);
        while let Some(a) = queue.pop_front() {
            for b in 0..subset.len() {
                if a != b && cons.dist_key(subset[a], subset[b]) == min_key {
                    match color[b] {
                        None => {
                            color[b] = Some(!color[a].unwrap());
                            queue.push_back(b);
                        }
                        Some(c) => {
                            assert_ne!(c, color[a].unwrap(), "minimum-distance graph not bipartite");
                        }
                    }
                }
            }
        }
    }
    let mut zero = Vec::new();
    let mut one = Vec::new();
    for (a, &i) in subset.iter().enumerate() {
        if color[a].unwrap() {
            one.push(i);
        } else {
            zero.push(i);
        }
    }
    (zero, one)
}

/// Set partitioning of a constellation into N levels.
pub fn ungerboeck_partition(cons: &Constellation) -> PartitionTree {
    let n = cons.bits();
    let mut levels: Vec<Vec<Vec<usize>>> = vec![vec![(0..cons.size()).collect()]];
    for _ in 1..n {
        let prev = levels.last().unwrap();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(prev.len() * 2);
        for subset in prev {
            let (a, b) = bipartition(cons, subset);
            next.push(a);
            next.push(b);
        }
        next.sort_by_key(|s| s[0]);
        levels.push(next);
    }
    let delta: Vec<f64> = levels
        .iter()
        .map(|subsets| {
            subsets
                .iter()
                .flat_map(|s| {
                    s.iter().enumerate().flat_map(move |(a, &i)| {
                        s[a + 1..].iter().map(move |&j| (i, j))
                    })
                })
                .map(|(i, j)| cons.dist_key(i, j))
                .min()
                .map(|k| cons.d2_of_key(k))
                .expect("non-trivial level")
        })
        .collect();
    for w in delta.windows(2) {
        assert!(w[0] < w[1], "partition levels must strictly increase");
    }
    PartitionTree { levels, delta }
}

/// Largest minimum distance achievable by 2^eta points on 2^N-PSK at symbol
/// energy N: `2 sqrt(N) sin(pi / 2^eta)`.
pub fn dmin_psk_formula(bits: usize, eta: usize) -> f64 {
    assert!(eta >= 1 && eta <= bits);
    2.0 * (bits as f64).sqrt() * (PI / (1u64 << eta) as f64).sin()
}

/// QAM counterpart of [`dmin_psk_formula`], by parity of N.
pub fn dmin_qam_formula(bits: usize, eta: usize) -> f64 {
    assert!(eta >= 1 && eta <= bits);
    let n = bits as f64;
    if bits % 2 == 0 {
        2f64.sqrt().powi((bits - eta + 2) as i32) * (1.5 * n / ((1u64 << bits) - 1) as f64).sqrt()
    } else {
        2f64.sqrt().powi((bits - eta + 3) as i32)
            * (1.5 * n / ((1u64 << (bits + 1)) - 1) as f64).sqrt()
    }
}

/// Squared minimum distance of the unit-energy antipodal pair used by the
/// N-fold BPSK reference scheme.
pub fn bpsk_dmin_squared() -> f64 {
    4.0
}

/// Ordered map key -> squared distance, useful for reporting.
pub fn key_distance_table(cons: &Constellation) -> BTreeMap<u64, f64> {
    cons.distance_keys().into_iter().map(|k| (k, cons.d2_of_key(k))).collect()
}
