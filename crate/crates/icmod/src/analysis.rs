//! Per-receiver effective minimum distances, coding gains and distance
//! distributions for a given labeling.

use crate::code::{code_views, EncodingMatrix, ReceiverCodeView};
use crate::constellation::{bpsk_dmin_squared, Constellation, Kind};
use crate::labeling::{priority_order, run_algorithm1, Labeling, TieRule};
use crate::problem::IndexCodingProblem;
use crate::{Error, Result};

/// Everything reported about one receiver under one labeling.
#[derive(Debug, Clone)]
pub struct ReceiverProfile {
    pub id: String,
    pub eta: usize,
    pub effective_rank: usize,
    /// Squared effective minimum distance; infinite when every effective
    /// codebook is a singleton (the receiver decodes error-free).
    pub d_min_squared: f64,
    pub sicg_db: f64,
    pub acg_db: f64,
    pub bandwidth_gain: f64,
    /// Raw gain ratios, for exact testing alongside the rounded dB values.
    pub sicg_ratio: f64,
    pub acg_ratio: f64,
    /// Pairwise squared distances within one effective codebook (the class
    /// of the all-zero realization), ascending with pair counts.
    pub distance_histogram: Vec<(f64, usize)>,
}

/// Smallest squared distance between distinct codewords of any effective
/// codebook of the receiver, under the labeling. Infinite for receivers
/// whose codebooks are all singletons.
pub fn receiver_dmin(
    labeling: &Labeling,
    code: &EncodingMatrix,
    knows: &std::collections::BTreeSet<usize>,
    cons: &Constellation,
) -> f64 {
    let class_of = code.coset_partition(knows);
    match crate::labeling::receiver_min_key(cons, labeling.assignment(), &class_of) {
        Some(k) => cons.d2_of_key(k),
        None => f64::INFINITY,
    }
}

/// Side-information coding gain in dB over a receiver with no side
/// information, i.e. over the full constellation's minimum distance.
pub fn sicg_db(d2: f64, cons: &Constellation) -> Result<f64> {
    if d2 <= 0.0 {
        return Err(Error::Parse(format!("nonpositive squared distance {d2}")));
    }
    Ok(10.0 * (d2 / cons.min_d2()).log10())
}

/// Absolute coding gain in dB over the N-fold BPSK scheme (squared
/// distance 4).
pub fn acg_db(d2: f64) -> Result<f64> {
    if d2 <= 0.0 {
        return Err(Error::Parse(format!("nonpositive squared distance {d2}")));
    }
    Ok(10.0 * (d2 / bpsk_dmin_squared()).log10())
}

/// Bandwidth reduction factor of one 2^N-ary symbol versus N BPSK symbols.
pub fn bandwidth_gain(code_len: usize) -> f64 {
    code_len as f64 / 2.0
}

/// Pairwise squared-distance histogram of the effective codebook seen under
/// the all-zero realization of the side information, ascending.
pub fn distance_distribution(
    labeling: &Labeling,
    code: &EncodingMatrix,
    knows: &std::collections::BTreeSet<usize>,
    cons: &Constellation,
) -> Vec<(f64, usize)> {
    let class_of = code.coset_partition(knows);
    let zero_class = class_of[0];
    let members: Vec<usize> = (0..class_of.len()).filter(|&i| class_of[i] == zero_class).collect();
    let mut counts: std::collections::BTreeMap<u64, usize> = std::collections::BTreeMap::new();
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            let k = cons.dist_key(labeling.point_index(i), labeling.point_index(j));
            *counts.entry(k).or_insert(0) += 1;
        }
    }
    counts.into_iter().map(|(k, c)| (cons.d2_of_key(k), c)).collect()
}

/// PSK wins for effective signal sets of at most four points, QAM beyond.
pub fn psk_qam_recommendation(eta: usize) -> Kind {
    assert!(eta >= 1);
    if eta <= 2 {
        Kind::Psk
    } else {
        Kind::Qam
    }
}

/// Profiles every receiver of a normalized problem under a labeling.
pub fn profiles(
    problem: &IndexCodingProblem,
    code: &EncodingMatrix,
    labeling: &Labeling,
    cons: &Constellation,
) -> Result<Vec<ReceiverProfile>> {
    let views = code_views(code, problem)?;
    views.iter().map(|v| profile_one(v, code, labeling, cons)).collect()
}

fn profile_one(
    view: &ReceiverCodeView,
    code: &EncodingMatrix,
    labeling: &Labeling,
    cons: &Constellation,
) -> Result<ReceiverProfile> {
    let d2 = receiver_dmin(labeling, code, &view.knows, cons);
    let (sicg_ratio, acg_ratio, sicg, acg) = if d2.is_finite() {
        (d2 / cons.min_d2(), d2 / bpsk_dmin_squared(), sicg_db(d2, cons)?, acg_db(d2)?)
    } else {
        (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY)
    };
    Ok(ReceiverProfile {
        id: view.id.clone(),
        eta: view.eta,
        effective_rank: view.effective_rank,
        d_min_squared: d2,
        sicg_db: sicg,
        acg_db: acg,
        bandwidth_gain: bandwidth_gain(code.len()),
        sicg_ratio,
        acg_ratio,
        distance_histogram: distance_distribution(labeling, code, &view.knows, cons),
    })
}

/// CSV rows `receiver,eta,d2,sicg_db,acg_db,bandwidth_gain`, gains rounded
/// to two decimals.
pub fn report_csv(profiles: &[ReceiverProfile]) -> String {
    let mut out = String::from("receiver,eta,d2,sicg_db,acg_db,bandwidth_gain\n");
    for p in profiles {
        out.push_str(&format!(
            "{},{},{:.6},{:.2},{:.2},{:.2}\n",
            p.id, p.eta, p.d_min_squared, p.sicg_db, p.acg_db, p.bandwidth_gain
        ));
    }
    out
}

/// One code length's worth of per-receiver distances in a length sweep.
#[derive(Debug, Clone)]
pub struct GapRow {
    pub code_len: usize,
    /// (receiver id, squared minimum distance), in receiver order.
    pub d2: Vec<(String, f64)>,
    /// Best/worst ratio in dB over receivers with finite distance.
    pub gap_db: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// True when some receiver has no side information at all.
    pub worst_has_no_side_info: bool,
    /// True when the best/worst gap strictly increases down the rows.
    pub gap_strictly_increasing: bool,
}

/// Compares several valid codes for the same problem on one constellation
/// family, reporting per-receiver distances and the best/worst gap per
/// code length.
pub fn n_to_n_gap_report(
    problem: &IndexCodingProblem,
    codes: &[EncodingMatrix],
    kind: Kind,
) -> Result<GapReport> {
    let norm = problem.normalize();
    let mut rows = Vec::with_capacity(codes.len());
    for code in codes {
        if !code.validate(&norm) {
            return Err(Error::InvalidCode(format!(
                "length-{} code fails decodability for this problem",
                code.len()
            )));
        }
        let cons = crate::constellation::make(kind, code.len())?;
        let views = code_views(code, &norm)?;
        let order = priority_order(&views, &TieRule::InputOrder)?;
        let labeling = run_algorithm1(code, &views, &cons, &order)?;
        let profs = profiles(&norm, code, &labeling, &cons)?;
        let finite: Vec<f64> =
            profs.iter().map(|p| p.d_min_squared).filter(|d| d.is_finite()).collect();
        let gap_db = if finite.is_empty() {
            None
        } else {
            let max = finite.iter().cloned().fold(f64::MIN, f64::max);
            let min = finite.iter().cloned().fold(f64::MAX, f64::min);
            Some(10.0 * (max / min).log10())
        };
        rows.push(GapRow {
            code_len: code.len(),
            d2: profs.iter().map(|p| (p.id.clone(), p.d_min_squared)).collect(),
            gap_db,
        });
    }
    let worst_has_no_side_info = norm.receivers.iter().any(|r| r.knows.is_empty());
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap_db).collect();
    let gap_strictly_increasing =
        gaps.len() == rows.len() && gaps.windows(2).all(|w| w[1] > w[0]);
    Ok(GapReport { rows, worst_has_no_side_info, gap_strictly_increasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_psk;

    #[test]
    fn gain_formulas() {
        let cons = make_psk(4).unwrap();
        // Zero gain at the full constellation's minimum distance.
        assert!(sicg_db(cons.min_d2(), &cons).unwrap().abs() < 1e-12);
        assert!(acg_db(4.0).unwrap().abs() < 1e-12);
        assert!((acg_db(16.0).unwrap() - 6.02).abs() < 0.01);
        assert!((acg_db(0.6089637).unwrap() + 8.17).abs() < 0.01);
        assert!((sicg_db(16.0, &cons).unwrap() - 14.19).abs() < 0.01);
        assert!(sicg_db(0.0, &cons).is_err());
        assert!(acg_db(-1.0).is_err());
    }

    #[test]
    fn bandwidth_gain_values() {
        assert_eq!(bandwidth_gain(4), 2.0);
        assert_eq!(bandwidth_gain(3), 1.5);
        assert_eq!(bandwidth_gain(2), 1.0);
    }

    #[test]
    fn recommendation_rule() {
        assert_eq!(psk_qam_recommendation(1), Kind::Psk);
        assert_eq!(psk_qam_recommendation(2), Kind::Psk);
        assert_eq!(psk_qam_recommendation(3), Kind::Qam);
        assert_eq!(psk_qam_recommendation(4), Kind::Qam);
    }

    #[test]
    fn distribution_on_identity_labeling() {
        // Identity code on 4-PSK: one receiver knowing x1 sees cosets of the
        // second row's span; the zero class is {00, 01} mapped to adjacent
        // ring points.
        let code = EncodingMatrix::from_json(r#"{"n": 2, "N": 2, "rows": ["10","01"]}"#).unwrap();
        let cons = make_psk(2).unwrap();
        let lab = Labeling::identity(2);
        let knows = std::collections::BTreeSet::from([0]);
        let hist = distance_distribution(&lab, &code, &knows, &cons);
        assert_eq!(hist.len(), 1);
        assert_eq!(hist[0].1, 1);
        assert!((hist[0].0 - cons.min_d2()).abs() < 1e-12);
        assert!((receiver_dmin(&lab, &code, &knows, &cons) - hist[0].0).abs() < 1e-12);
    }

    #[test]
    fn error_free_receiver_sentinel() {
        // A receiver that knows both messages has singleton codebooks.
        let code = EncodingMatrix::from_json(r#"{"n": 2, "N": 2, "rows": ["10","01"]}"#).unwrap();
        let cons = make_psk(2).unwrap();
        let lab = Labeling::identity(2);
        let knows = std::collections::BTreeSet::from([0, 1]);
        assert!(receiver_dmin(&lab, &code, &knows, &cons).is_infinite());
    }
}
