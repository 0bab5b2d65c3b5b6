//! Command-line front end: minrank solving, labeling analysis, PSK/QAM
//! comparison and Monte Carlo simulation, all driven by JSON problem and
//! code files and emitting CSV.

use clap::{Parser, Subcommand, ValueEnum};
use icmod::analysis::{profiles, psk_qam_recommendation, report_csv};
use icmod::code::{code_views, EncodingMatrix};
use icmod::constellation::{make, Constellation, Kind};
use icmod::labeling::{priority_order, run_algorithm1, Labeling, TieRule};
use icmod::minrank::{encoding_matrix_from_witness, minrank, SearchLimits};
use icmod::problem::IndexCodingProblem;
use icmod::sim::{curves_csv, simulate, simulate_bpsk_baseline, SimResult};
use icmod::Error;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "icmod", version, about = "Index-coded modulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Psk,
    Qam,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Psk => Kind::Psk,
            KindArg::Qam => Kind::Qam,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the minrank of a single-unicast problem and write an optimal
    /// encoding matrix.
    Minrank {
        /// Problem JSON file.
        #[arg(long)]
        problem: PathBuf,
        /// Output directory for the witness encoding matrix.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Label a constellation for a problem and report per-receiver
    /// distances and gains.
    Analyze {
        #[arg(long)]
        problem: PathBuf,
        /// Encoding matrix JSON; derived by the minrank solver when absent.
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "psk")]
        constellation: KindArg,
        /// Expected code length; fails when the code disagrees.
        #[arg(long)]
        length: Option<usize>,
        /// Comma-separated receiver ids resolving equal-eta ties.
        #[arg(long)]
        priority: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Monte Carlo message-error simulation over AWGN.
    Simulate {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "psk")]
        constellation: KindArg,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        priority: Option<String>,
        /// SNR grid in dB as START:STOP:STEP.
        #[arg(long, default_value = "0:10:1")]
        snr: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also simulate the N-fold BPSK reference scheme.
        #[arg(long)]
        baseline: bool,
        /// Charge the reference scheme for its N/2-fold bandwidth.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        bandwidth_normalized: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Per-receiver PSK versus QAM distances and recommendations.
    Compare {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        priority: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotSingleUnicast(_)
        | Error::InvalidProblem(_)
        | Error::BadPriorityList(_)
        | Error::Parse(_) => 2,
        Error::InvalidCode(_) => 3,
        Error::BudgetExceeded(_) | Error::UnsupportedSize(_) => 4,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Minrank { problem, out } => cmd_minrank(&problem, &out),
        Command::Analyze { problem, code, constellation, length, priority, out } => {
            let p = Pipeline::build(&problem, code.as_deref(), constellation.into(), length, priority)?;
            cmd_analyze(&p, &out)
        }
        Command::Simulate {
            problem,
            code,
            constellation,
            length,
            priority,
            snr,
            trials,
            seed,
            baseline,
            bandwidth_normalized,
            out,
        } => {
            let p = Pipeline::build(&problem, code.as_deref(), constellation.into(), length, priority)?;
            let grid = parse_snr_grid(&snr)?;
            cmd_simulate(&p, &grid, trials, seed, baseline, bandwidth_normalized, &out)
        }
        Command::Compare { problem, code, length, priority, out } => {
            cmd_compare(&problem, code.as_deref(), length, priority, &out)
        }
    }
}

fn load_problem(path: &Path) -> Result<IndexCodingProblem, Error> {
    IndexCodingProblem::from_json(&std::fs::read_to_string(path)?)
}

fn load_code(path: &Path) -> Result<EncodingMatrix, Error> {
    EncodingMatrix::from_json(&std::fs::read_to_string(path)?)
}

fn derive_code(problem: &IndexCodingProblem) -> Result<EncodingMatrix, Error> {
    let graph = problem.build_side_info_graph()?;
    let (_, witness) = minrank(&graph, &SearchLimits::from_env())?;
    encoding_matrix_from_witness(&witness)
}

fn tie_rule(priority: Option<String>) -> TieRule {
    match priority {
        None => TieRule::InputOrder,
        Some(list) => {
            TieRule::Explicit(list.split(',').map(|s| s.trim().to_string()).collect())
        }
    }
}

struct Pipeline {
    problem: IndexCodingProblem,
    code: EncodingMatrix,
    cons: Constellation,
    labeling: Labeling,
}

impl Pipeline {
    fn build(
        problem_path: &Path,
        code_path: Option<&Path>,
        kind: Kind,
        length: Option<usize>,
        priority: Option<String>,
    ) -> Result<Pipeline, Error> {
        let problem = load_problem(problem_path)?.normalize();
        let code = match code_path {
            Some(p) => load_code(p)?,
            None => derive_code(&problem)?,
        };
        if let Some(l) = length {
            if code.len() != l {
                return Err(Error::InvalidCode(format!(
                    "code length {} does not match requested length {l}",
                    code.len()
                )));
            }
        }
        if !code.validate(&problem) {
            return Err(Error::InvalidCode(
                "some receiver cannot decode its demand under this code".into(),
            ));
        }
        let cons = make(kind, code.len())?;
        let views = code_views(&code, &problem)?;
        let order = priority_order(&views, &tie_rule(priority))?;
        let labeling = run_algorithm1(&code, &views, &cons, &order)?;
        Ok(Pipeline { problem, code, cons, labeling })
    }
}

fn cmd_minrank(problem_path: &Path, out: &Path) -> Result<(), Error> {
    let problem = load_problem(problem_path)?;
    let graph = problem.build_side_info_graph()?;
    let (n, witness) = minrank(&graph, &SearchLimits::from_env())?;
    let code = encoding_matrix_from_witness(&witness)?;
    std::fs::create_dir_all(out)?;
    let path = out.join("minrank_L.json");
    std::fs::write(&path, code.to_json())?;
    println!("{n}");
    eprintln!("encoding matrix written to {}", path.display());
    Ok(())
}

fn cmd_analyze(p: &Pipeline, out: &Path) -> Result<(), Error> {
    let profs = profiles(&p.problem, &p.code, &p.labeling, &p.cons)?;
    let report = report_csv(&profs);
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("report.csv"), &report)?;
    std::fs::write(out.join("labeling.csv"), p.labeling.to_csv(&p.cons))?;
    print!("{report}");
    Ok(())
}

fn cmd_simulate(
    p: &Pipeline,
    grid: &[f64],
    trials: u64,
    seed: u64,
    baseline: bool,
    bandwidth_normalized: bool,
    out: &Path,
) -> Result<(), Error> {
    let mut results: Vec<SimResult> = vec![simulate(
        &p.problem,
        &p.code,
        &p.labeling,
        &p.cons,
        grid,
        trials,
        seed,
        bandwidth_normalized,
    )?];
    if baseline {
        results.push(simulate_bpsk_baseline(
            &p.problem,
            &p.code,
            grid,
            trials,
            seed,
            bandwidth_normalized,
        )?);
    }
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("curves.csv"), curves_csv(&results))?;
    let top = grid.last().copied().unwrap_or(0.0);
    println!("message error rates at {top} dB over {trials} trials:");
    for res in &results {
        for curve in &res.curves {
            let point = curve.points.last().expect("non-empty grid");
            println!("  {:<6} {:<6} {:e}", res.scheme, curve.id, point.rate);
        }
    }
    Ok(())
}

fn cmd_compare(
    problem_path: &Path,
    code_path: Option<&Path>,
    length: Option<usize>,
    priority: Option<String>,
    out: &Path,
) -> Result<(), Error> {
    let psk = Pipeline::build(problem_path, code_path, Kind::Psk, length, priority.clone())?;
    let qam = Pipeline::build(problem_path, code_path, Kind::Qam, length, priority)?;
    let psk_profiles = profiles(&psk.problem, &psk.code, &psk.labeling, &psk.cons)?;
    let qam_profiles = profiles(&qam.problem, &qam.code, &qam.labeling, &qam.cons)?;
    let mut csv = String::from("receiver,eta,d2_psk,d2_qam,recommended,better,agree\n");
    for (pp, qp) in psk_profiles.iter().zip(&qam_profiles) {
        let recommended = psk_qam_recommendation(pp.eta.max(1));
        let better = if pp.d_min_squared >= qp.d_min_squared { Kind::Psk } else { Kind::Qam };
        csv.push_str(&format!(
            "{},{},{:.6},{:.6},{},{},{}\n",
            pp.id,
            pp.eta,
            pp.d_min_squared,
            qp.d_min_squared,
            recommended,
            better,
            recommended == better
        ));
    }
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("compare.csv"), &csv)?;
    print!("{csv}");
    Ok(())
}

fn parse_snr_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("snr grid {spec:?} is not START:STOP:STEP")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || stop < start {
        return Err(Error::Parse(format!("snr grid {spec:?} must have step > 0 and stop >= start")));
    }
    let mut grid = Vec::new();
    let mut v = start;
    while v <= stop + 1e-9 {
        grid.push(v);
        v += step;
    }
    Ok(grid)
}
