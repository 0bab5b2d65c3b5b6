//! Seeded Monte Carlo simulation of the broadcast.
//!
//! One trial draws a uniform message word, encodes it, transmits the
//! labeled constellation point over complex AWGN, and runs each receiver's
//! ML decoder over its effective codebook (the codewords consistent with
//! its true side information). The N-fold BPSK reference scheme transmits
//! the same coded bits as N antipodal symbols instead.
//!
//! The SNR axis is Eb/N0 in dB with Eb = 1, the energy per coded bit; a
//! 2^N-ary symbol then carries energy N, equal to the total energy of the
//! reference scheme's N unit-energy symbols. Randomness comes from
//! ChaCha12 with one counter stream per (scheme, receiver, SNR point), so
//! results are reproducible bit for bit regardless of execution order.

use crate::code::{code_views, EncodingMatrix};
use crate::constellation::{Constellation, SignalPoint};
use crate::gf2::BitVec;
use crate::labeling::Labeling;
use crate::problem::IndexCodingProblem;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Channel noise configuration.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    /// Noise power spectral density (energy units); must be positive.
    pub n0: f64,
    /// Scale the reference scheme's per-dimension noise by N/2 to account
    /// for its N real dimensions against the symbol scheme's two.
    pub bandwidth_normalized: bool,
}

impl NoiseModel {
    pub fn from_snr_db(snr_db: f64, bandwidth_normalized: bool) -> Self {
        NoiseModel { n0: 10f64.powf(-snr_db / 10.0), bandwidth_normalized }
    }
}

/// One point of an error-rate curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverCurve {
    pub id: String,
    pub points: Vec<CurvePoint>,
}

/// Result of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Scheme tag: `psk`, `qam` or `bpsk`.
    pub scheme: String,
    /// Pseudorandom generator identifier.
    pub rng_algorithm: &'static str,
    pub seed: u64,
    pub curves: Vec<ReceiverCurve>,
}

const RNG_ALGORITHM: &str = "chacha12";

fn substream(scheme_tag: u64, receiver_idx: usize, snr_idx: usize) -> u64 {
    (scheme_tag << 40) | ((receiver_idx as u64) << 20) | snr_idx as u64
}

/// Constellation point carrying the codeword of `x`.
pub fn transmit(
    x: &BitVec,
    code: &EncodingMatrix,
    labeling: &Labeling,
    cons: &Constellation,
) -> Result<SignalPoint> {
    let y = code.encode(x)?;
    Ok(cons.point(labeling.point_of(&y)))
}

/// Adds circularly symmetric Gaussian noise, variance `n0/2` per real
/// dimension.
pub fn add_noise<R: Rng>(s: SignalPoint, model: &NoiseModel, rng: &mut R) -> SignalPoint {
    let sigma = (model.n0 / 2.0).sqrt();
    let gr: f64 = rng.sample(StandardNormal);
    let gi: f64 = rng.sample(StandardNormal);
    SignalPoint { re: s.re + sigma * gr, im: s.im + sigma * gi }
}

/// ML decision over an effective codebook: candidate codewords with their
/// points, ties resolved toward the lower point index.
fn ml_point_decision(r: &SignalPoint, candidates: &[(usize, usize)], cons: &Constellation) -> usize {
    let mut best_cw = candidates[0].0;
    let mut best_d = f64::INFINITY;
    for &(cw, point) in candidates {
        let d = r.dist_sq(&cons.point(point));
        if d < best_d {
            best_d = d;
            best_cw = cw;
        }
    }
    best_cw
}

/// ML decoding for one receiver given the true side-information
/// realization. Returns the decoded codeword and the demanded bit.
pub fn ml_decode(
    r: &SignalPoint,
    knows: &std::collections::BTreeSet<usize>,
    want: usize,
    realization: &BitVec,
    labeling: &Labeling,
    code: &EncodingMatrix,
    cons: &Constellation,
) -> Result<(BitVec, bool)> {
    let class_of = code.coset_partition(knows);
    // The codebook consistent with the realization: encode any message word
    // that matches it and take that codeword's class.
    let mut x0 = BitVec::zeros(code.n());
    for &k in knows {
        x0.set(k, realization.get(k));
    }
    let class = class_of[code.encode(&x0)?.index()];
    let mut candidates: Vec<(usize, usize)> = (0..class_of.len())
        .filter(|&cw| class_of[cw] == class)
        .map(|cw| (cw, labeling.point_index(cw)))
        .collect();
    candidates.sort_by_key(|&(_, p)| p);
    let cw = ml_point_decision(r, &candidates, cons);
    let y = BitVec::from_index(code.len(), cw);
    let (u, v) = code
        .decode_functional(knows, want)
        .ok_or_else(|| Error::InvalidCode("demanded message is not decodable".into()))?;
    let bit = y.dot(&u) ^ realization.dot(&v);
    Ok((y, bit))
}

struct ReceiverLane {
    id: String,
    want: usize,
    /// Class id per codeword.
    class_of: Vec<usize>,
    /// Class members as (codeword id, point index), sorted by point index.
    class_members: Vec<Vec<(usize, usize)>>,
    /// Decoder coefficients over the codeword and the message word.
    u: BitVec,
    v: BitVec,
    /// Coded bits computable from side information (reference scheme).
    s_bits: Vec<bool>,
}

fn build_lanes(
    problem: &IndexCodingProblem,
    code: &EncodingMatrix,
    labeling: Option<&Labeling>,
) -> Result<Vec<ReceiverLane>> {
    let views = code_views(code, problem)?;
    views
        .iter()
        .map(|view| {
            let class_of = code.coset_partition(&view.knows);
            let n_classes = class_of.iter().max().unwrap() + 1;
            let mut class_members = vec![Vec::new(); n_classes];
            for (cw, &cl) in class_of.iter().enumerate() {
                let point = labeling.map_or(cw, |l| l.point_index(cw));
                class_members[cl].push((cw, point));
            }
            for members in &mut class_members {
                members.sort_by_key(|&(_, p)| p);
            }
            let (u, v) = code.decode_functional(&view.knows, view.want).ok_or_else(|| {
                Error::InvalidCode(format!("receiver {} cannot decode its demand", view.id))
            })?;
            Ok(ReceiverLane {
                id: view.id.clone(),
                want: view.want,
                class_of,
                class_members,
                u,
                v,
                s_bits: (0..code.len()).map(|j| view.s.contains(&j)).collect(),
            })
        })
        .collect()
}

fn masked_dot(word: u32, mask: u32) -> bool {
    (word & mask).count_ones() & 1 == 1
}

/// Symbol-scheme simulation: per receiver and SNR point, the demanded
/// message error rate over `trials` trials.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    problem: &IndexCodingProblem,
    code: &EncodingMatrix,
    labeling: &Labeling,
    cons: &Constellation,
    snr_grid_db: &[f64],
    trials: u64,
    seed: u64,
    model_bandwidth_normalized: bool,
) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    let norm = problem.normalize();
    let lanes = build_lanes(&norm, code, Some(labeling))?;
    let n = code.n();
    let x_mask = (1u32 << n) - 1;
    // Encode table and point table over all message words.
    let encode_table: Vec<u32> = (0..1u32 << n)
        .map(|w| code.encode(&BitVec::from_index(n, w as usize)).expect("sized").index() as u32)
        .collect();
    let point_table: Vec<SignalPoint> =
        (0..1usize << code.len()).map(|cw| cons.point(labeling.point_index(cw))).collect();

    let scheme = cons.kind().to_string();
    let mut curves: Vec<ReceiverCurve> =
        lanes.iter().map(|l| ReceiverCurve { id: l.id.clone(), points: Vec::new() }).collect();
    for (snr_idx, &snr_db) in snr_grid_db.iter().enumerate() {
        let model = NoiseModel::from_snr_db(snr_db, model_bandwidth_normalized);
        for (ri, lane) in lanes.iter().enumerate() {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(substream(0, ri, snr_idx));
            let mut errors = 0u64;
            for _ in 0..trials {
                let xw = rng.gen::<u32>() & x_mask;
                let yid = encode_table[xw as usize] as usize;
                let r = add_noise(point_table[yid], &model, &mut rng);
                let members = &lane.class_members[lane.class_of[yid]];
                let mut best_cw = members[0].0;
                let mut best_d = f64::INFINITY;
                for &(cw, point) in members {
                    let d = r.dist_sq(&cons.point(point));
                    if d < best_d {
                        best_d = d;
                        best_cw = cw;
                    }
                }
                let decoded_bit =
                    masked_dot(best_cw as u32, word_of(&lane.u)) ^ masked_dot(xw, word_of(&lane.v));
                let true_bit = (xw >> (n - 1 - lane.want)) & 1 == 1;
                if decoded_bit != true_bit {
                    errors += 1;
                }
            }
            curves[ri].points.push(CurvePoint {
                snr_db,
                trials,
                errors,
                rate: errors as f64 / trials as f64,
            });
        }
    }
    Ok(SimResult { scheme, rng_algorithm: RNG_ALGORITHM, seed, curves })
}

/// Reference scheme: the N coded bits are sent as N unit-energy antipodal
/// symbols (bit 0 -> +1). Receivers substitute the coded bits they know,
/// slice the rest by sign, and decode the demanded message linearly.
pub fn simulate_bpsk_baseline(
    problem: &IndexCodingProblem,
    code: &EncodingMatrix,
    snr_grid_db: &[f64],
    trials: u64,
    seed: u64,
    bandwidth_normalized: bool,
) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    let norm = problem.normalize();
    let lanes = build_lanes(&norm, code, None)?;
    let n = code.n();
    let len = code.len();
    let x_mask = (1u32 << n) - 1;
    let encode_table: Vec<u32> = (0..1u32 << n)
        .map(|w| code.encode(&BitVec::from_index(n, w as usize)).expect("sized").index() as u32)
        .collect();

    let mut curves: Vec<ReceiverCurve> =
        lanes.iter().map(|l| ReceiverCurve { id: l.id.clone(), points: Vec::new() }).collect();
    for (snr_idx, &snr_db) in snr_grid_db.iter().enumerate() {
        let model = NoiseModel::from_snr_db(snr_db, bandwidth_normalized);
        let dim_scale = if model.bandwidth_normalized { len as f64 / 2.0 } else { 1.0 };
        let sigma = (model.n0 * dim_scale / 2.0).sqrt();
        for (ri, lane) in lanes.iter().enumerate() {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(substream(1, ri, snr_idx));
            let mut errors = 0u64;
            for _ in 0..trials {
                let xw = rng.gen::<u32>() & x_mask;
                let yw = encode_table[xw as usize];
                let mut decided = 0u32;
                for j in 0..len {
                    let bit = (yw >> (len - 1 - j)) & 1 == 1;
                    let known = lane.s_bits[j];
                    let hat = if known {
                        bit
                    } else {
                        let s = if bit { -1.0 } else { 1.0 };
                        let g: f64 = rng.sample(StandardNormal);
                        s + sigma * g < 0.0
                    };
                    if hat {
                        decided |= 1 << (len - 1 - j);
                    }
                }
                let decoded_bit =
                    masked_dot(decided, word_of(&lane.u)) ^ masked_dot(xw, word_of(&lane.v));
                let true_bit = (xw >> (n - 1 - lane.want)) & 1 == 1;
                if decoded_bit != true_bit {
                    errors += 1;
                }
            }
            curves[ri].points.push(CurvePoint {
                snr_db,
                trials,
                errors,
                rate: errors as f64 / trials as f64,
            });
        }
    }
    Ok(SimResult { scheme: "bpsk".into(), rng_algorithm: RNG_ALGORITHM, seed, curves })
}

fn word_of(v: &BitVec) -> u32 {
    v.index() as u32
}

/// Gnuplot-friendly CSV: a single `#` header line, then one row per
/// (scheme, receiver, SNR point).
pub fn curves_csv(results: &[SimResult]) -> String {
    let mut out = String::from("# scheme,receiver,snr_db,trials,errors,rate\n");
    for res in results {
        for curve in &res.curves {
            for p in &curve.points {
                out.push_str(&format!(
                    "{},{},{:.3},{},{},{:.6e}\n",
                    res.scheme, curve.id, p.snr_db, p.trials, p.errors, p.rate
                ));
            }
        }
    }
    out
}
