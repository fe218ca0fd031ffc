//! `ergocycle trivialize`: random unitary cocycles over periodic orbits and
//! finite ℤ-windows, with the conjugation identities checked instance by
//! instance.

use std::f64::consts::TAU;
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ergocycle_core::clockshift::{op_norm, random_unitary, CMat};
use ergocycle_core::cocycle::{trivialize_aperiodic, trivialize_periodic};

use crate::config::resolve_seed;
use crate::report::{all_pass, emit_json, verdict, RunReport};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// periods drawn from 1..=max_period
    #[arg(long, default_value_t = 8)]
    max_period: usize,
    /// fiber dimensions drawn from 1..=max_fiber
    #[arg(long, default_value_t = 4)]
    max_fiber: usize,
    #[arg(long, default_value_t = 5)]
    seed: u64,
    /// JSON report path; stdout when omitted
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConfigEcho {
    count: usize,
    max_period: usize,
    max_fiber: usize,
}

#[derive(Serialize)]
struct Results {
    instances: usize,
    max_periodic_residual: f64,
    max_holonomy_residual: f64,
    max_aperiodic_defect: f64,
    phase_violations: usize,
    failures: usize,
}

pub fn run(args: Args) -> Result<bool, CliError> {
    if args.count == 0 || args.max_period == 0 || args.max_fiber == 0 {
        return Err(CliError::Usage(
            "count, max-period, and max-fiber must be ≥ 1".into(),
        ));
    }
    let seed = resolve_seed(args.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut max_periodic_residual = 0.0f64;
    let mut max_holonomy_residual = 0.0f64;
    let mut max_aperiodic_defect = 0.0f64;
    let mut phase_violations = 0usize;
    let mut failures = 0usize;

    for _ in 0..args.count {
        let k = rng.random_range(1..=args.max_period);
        let n = rng.random_range(1..=args.max_fiber);
        let ws: Vec<CMat> = (0..k).map(|_| random_unitary(n, &mut rng)).collect();

        match trivialize_periodic(&ws) {
            Ok(tr) => {
                max_periodic_residual = max_periodic_residual.max(tr.residual);
                let phase = tr.lambda.arg().rem_euclid(TAU);
                if phase >= TAU / k as f64 + 1e-12 {
                    phase_violations += 1;
                }
                // Z^k must reproduce the loop holonomy W_0·W_{k−1}···W_1
                let mut holonomy = ws[0].clone();
                for w in ws.iter().skip(1).rev() {
                    holonomy = &holonomy * w;
                }
                let mut zk = CMat::identity(n, n);
                for _ in 0..k {
                    zk = &zk * &tr.z;
                }
                max_holonomy_residual = max_holonomy_residual.max(op_norm(&(zk - holonomy)));
            }
            Err(_) => failures += 1,
        }

        // window [lo, lo+k) containing 0; the identity ζ_i W_i ζ_{i−1}* = 1
        // is re-checked here rather than trusted
        let lo = -((k / 2) as i64);
        let ws2: Vec<CMat> = (0..k).map(|_| random_unitary(n, &mut rng)).collect();
        match trivialize_aperiodic(lo, &ws2) {
            Ok(zetas) => {
                for i in 1..k {
                    let lhs = &zetas[i] * &ws2[i] * zetas[i - 1].adjoint();
                    let defect = op_norm(&(lhs - CMat::identity(n, n)));
                    max_aperiodic_defect = max_aperiodic_defect.max(defect);
                }
            }
            Err(_) => failures += 1,
        }
    }

    let verdicts = vec![
        verdict(
            "periodic-conjugation",
            max_periodic_residual <= 1e-10 && failures == 0,
            format!("max residual of ζ_n W_n ζ_{{n−1}}* − Z: {max_periodic_residual:.3e}"),
        ),
        verdict(
            "holonomy-root",
            max_holonomy_residual <= 1e-9,
            format!("max ‖Z^k − holonomy‖: {max_holonomy_residual:.3e}"),
        ),
        verdict(
            "canonical-phase",
            phase_violations == 0,
            "arg λ ∈ [0, 2π/k) on every instance",
        ),
        verdict(
            "window-conjugation",
            max_aperiodic_defect <= 1e-10,
            format!("max defect of ζ_i W_i ζ_{{i−1}}* − 1: {max_aperiodic_defect:.3e}"),
        ),
    ];
    let pass = all_pass(&verdicts);
    let rep = RunReport {
        command: "trivialize",
        version: env!("CARGO_PKG_VERSION"),
        seed,
        config: ConfigEcho {
            count: args.count,
            max_period: args.max_period,
            max_fiber: args.max_fiber,
        },
        results: Results {
            instances: args.count,
            max_periodic_residual,
            max_holonomy_residual,
            max_aperiodic_defect,
            phase_violations,
            failures,
        },
        verdicts,
        all_pass: pass,
    };
    emit_json(&rep, args.report.as_deref())?;
    Ok(pass)
}
