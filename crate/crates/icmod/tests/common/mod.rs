//! Shared helpers for the integration and acceptance tests.

#![allow(dead_code)]

use icmod::analysis::{profiles, ReceiverProfile};
use icmod::code::{code_views, EncodingMatrix, ReceiverCodeView};
use icmod::constellation::{make, Constellation, Kind};
use icmod::labeling::{priority_order, run_algorithm1, Labeling, PriorityOrder, TieRule};
use icmod::problem::IndexCodingProblem;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load_problem(name: &str) -> IndexCodingProblem {
    let s = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    IndexCodingProblem::from_json(&s).expect("valid problem fixture")
}

pub fn load_code(name: &str) -> EncodingMatrix {
    let s = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    EncodingMatrix::from_json(&s).expect("valid code fixture")
}

pub struct Analyzed {
    pub problem: IndexCodingProblem,
    pub code: EncodingMatrix,
    pub cons: Constellation,
    pub views: Vec<ReceiverCodeView>,
    pub order: PriorityOrder,
    pub labeling: Labeling,
    pub profiles: Vec<ReceiverProfile>,
}

pub fn analyze(problem_file: &str, code_file: &str, kind: Kind, tie: TieRule) -> Analyzed {
    let problem = load_problem(problem_file).normalize();
    let code = load_code(code_file);
    assert!(code.validate(&problem), "fixture code must be decodable");
    let cons = make(kind, code.len()).unwrap();
    let views = code_views(&code, &problem).unwrap();
    let order = priority_order(&views, &tie).unwrap();
    let labeling = run_algorithm1(&code, &views, &cons, &order).unwrap();
    let profiles = profiles(&problem, &code, &labeling, &cons).unwrap();
    Analyzed { problem, code, cons, views, order, labeling, profiles }
}

/// Reported dB values carry two decimals; a table entry matches when the
/// rounded value is within one least significant digit.
pub fn db_matches(computed: f64, table: f64) -> bool {
    let rounded = (computed * 100.0).round() / 100.0;
    (rounded - table).abs() <= 0.01 + 1e-9
}

pub fn d2_matches(computed: f64, table: f64) -> bool {
    (computed - table).abs() <= 0.01 + 1e-9
}

/// Upper tail of the standard normal distribution (Abramowitz-Stegun
/// 7.1.26 rational approximation, absolute error below 1e-7).
pub fn q_function(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - q_function(-x);
    }
    let z = x / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.3275911 * z);
    let poly = t
        * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    0.5 * poly * (-z * z).exp()
}
