//! `ergocycle convergents`: the continued-fraction table with both
//! correctness columns evaluated per row.

use std::path::PathBuf;

use num::rational::BigRational;
use num::{BigInt, Signed, ToPrimitive};
use serde::Serialize;

use crate::config::parse_theta;
use crate::report::{all_pass, emit_json, emit_text, verdict, RunReport};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// sqrt2m1, golden, or repeating partial quotients like "2,2"
    #[arg(long, default_value = "sqrt2m1")]
    theta: String,
    /// number of rows (r = 0 .. count−1)
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// optional JSON run report path
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConfigEcho {
    theta: String,
    count: usize,
}

#[derive(Serialize)]
struct Row {
    r: usize,
    b_r: u32,
    k_r: String,
    m_r: String,
    err: f64,
    det_identity: i64,
}

pub fn run(args: Args) -> Result<bool, CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("count: must be ≥ 1".into()));
    }
    let theta = parse_theta(&args.theta)?;
    let convs = theta
        .convergents(args.count)
        .map_err(|e| CliError::Module(format!("convergents: {e}")))?;
    let witness = theta.witness_rational();

    let mut csv = String::from("r,b_r,k_r,m_r,err,det_identity\n");
    let mut rows = Vec::with_capacity(convs.len());
    let mut dets_ok = true;
    let mut errs_ok = true;
    // seeded with k_{-1} = 1, m_{-1} = 0
    let mut prev = (BigInt::from(1), BigInt::from(0));
    for c in &convs {
        let det = &c.k * &prev.1 - &prev.0 * &c.m;
        let det_i = det.to_i64().unwrap_or(0);
        let expected = if c.r % 2 == 0 { -1 } else { 1 };
        dets_ok &= det_i == expected;

        let diff = (&witness - c.to_rational()).abs();
        let err = diff.to_f64().unwrap_or(f64::NAN);
        // |θ − k_r/m_r| < 1/m_r², compared exactly
        let bound = BigRational::new(BigInt::from(1), &c.m * &c.m);
        errs_ok &= diff < bound;

        csv.push_str(&format!(
            "{},{},{},{},{:.12e},{}\n",
            c.r, c.digit, c.k, c.m, err, det_i
        ));
        rows.push(Row {
            r: c.r,
            b_r: c.digit,
            k_r: c.k.to_string(),
            m_r: c.m.to_string(),
            err,
            det_identity: det_i,
        });
        prev = (c.k.clone(), c.m.clone());
    }

    emit_text(&csv, args.out.as_deref())?;

    let verdicts = vec![
        verdict(
            "determinant-identity",
            dets_ok,
            "k_r·m_{r−1} − k_{r−1}·m_r = (−1)^{r+1} on every row",
        ),
        verdict(
            "approximation-quality",
            errs_ok,
            "|θ − k_r/m_r| < 1/m_r² on every row",
        ),
    ];
    let pass = all_pass(&verdicts);
    if args.report.is_some() {
        let rep = RunReport {
            command: "convergents",
            version: env!("CARGO_PKG_VERSION"),
            seed: 0,
            config: ConfigEcho {
                theta: args.theta.clone(),
                count: args.count,
            },
            results: rows,
            verdicts,
            all_pass: pass,
        };
        emit_json(&rep, args.report.as_deref())?;
    }
    Ok(pass)
}
