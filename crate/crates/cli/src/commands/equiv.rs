//! `ergocycle equiv-decide`: run one of the exact equivalence deciders on a
//! JSON input document and print the answer (and witness, when one exists)
//! as a single JSON line.

use std::collections::BTreeSet;
use std::path::PathBuf;

use num::rational::BigRational;
use num::{BigInt, ToPrimitive};
use serde_json::{json, Value};

use ergocycle_core::equiv::{
    decide_bernoulli_phases, decide_bernoulli_w, decide_equiv0, decide_rotation_phases, Decision,
    EquivError, PhaseExp,
};
use ergocycle_core::numtheory::{QTheta, Theta};

use crate::config::parse_theta;
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// equiv0, bernoulli-phase, bernoulli-w, or rot-phase
    #[arg(long)]
    case: String,
    /// inline JSON input document
    #[arg(long)]
    input: Option<String>,
    /// read the JSON input document from a file
    #[arg(long)]
    input_file: Option<PathBuf>,
}

fn rational_field(v: &Value, path: &str) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => crate::config::parse_rational(s)
            .map_err(|e| CliError::Usage(format!("{path}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from(BigInt::from(i)))
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{path}: floats are not accepted; write a rational string like \"1/2\""
                ))
            }),
        _ => Err(CliError::Usage(format!(
            "{path}: expected a rational as string or integer"
        ))),
    }
}

/// {"p": .., "q": ..} meaning the exponent p + qθ.
fn phase_field(doc: &Value, key: &str, theta: &Theta) -> Result<PhaseExp, CliError> {
    let obj = doc
        .get(key)
        .ok_or_else(|| CliError::Usage(format!("{key}: missing")))?;
    let p = rational_field(
        obj.get("p")
            .ok_or_else(|| CliError::Usage(format!("{key}.p: missing")))?,
        &format!("{key}.p"),
    )?;
    let q = rational_field(
        obj.get("q")
            .ok_or_else(|| CliError::Usage(format!("{key}.q: missing")))?,
        &format!("{key}.q"),
    )?;
    Ok(PhaseExp::new(QTheta::new(p, q, theta)))
}

fn u64_field(doc: &Value, key: &str) -> Result<u64, CliError> {
    doc.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Usage(format!("{key}: expected a positive integer")))
}

fn letters_field(doc: &Value, key: &str) -> Result<BTreeSet<usize>, CliError> {
    let arr = doc
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage(format!("{key}: expected an array of letters")))?;
    arr.iter()
        .map(|v| {
            v.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| CliError::Usage(format!("{key}: letters must be integers ≥ 0")))
        })
        .collect()
}

fn witness_int(m: &BigInt) -> Value {
    match m.to_i64() {
        Some(i) => json!(i),
        None => json!(m.to_string()),
    }
}

pub fn run(args: Args) -> Result<bool, CliError> {
    let text = match (&args.input, &args.input_file) {
        (Some(s), None) => s.clone(),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("input-file {}: {e}", p.display())))?,
        _ => {
            return Err(CliError::Usage(
                "exactly one of --input or --input-file is required".into(),
            ))
        }
    };
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("input: not valid JSON: {e}")))?;
    let theta = match doc.get("theta") {
        Some(Value::String(s)) => parse_theta(s)?,
        Some(_) => return Err(CliError::Usage("theta: expected a string spec".into())),
        None => Theta::sqrt2m1(),
    };

    let answer = match args.case.as_str() {
        "equiv0" => {
            let eta = phase_field(&doc, "eta", &theta)?;
            match decide_equiv0(&eta) {
                Decision::Yes(m) => json!({"answer": "yes", "witness": {"m": witness_int(&m)}}),
                Decision::No => json!({"answer": "no"}),
            }
        }
        "bernoulli-phase" => {
            let n = u64_field(&doc, "n")?;
            let l1 = phase_field(&doc, "l1", &theta)?;
            let l2 = phase_field(&doc, "l2", &theta)?;
            let l1p = phase_field(&doc, "l1p", &theta)?;
            let l2p = phase_field(&doc, "l2p", &theta)?;
            match decide_bernoulli_phases(&l1, &l2, &l1p, &l2p, n) {
                Decision::Yes(()) => json!({"answer": "yes"}),
                Decision::No => json!({"answer": "no"}),
            }
        }
        "bernoulli-w" => {
            let n = u64_field(&doc, "n")?;
            let alphabet = u64_field(&doc, "alphabet")? as usize;
            let c1 = letters_field(&doc, "c1")?;
            let c1p = letters_field(&doc, "c1p")?;
            match decide_bernoulli_w(&c1, &c1p, n, alphabet) {
                Ok(Decision::Yes(())) => json!({"answer": "yes"}),
                Ok(Decision::No) => json!({"answer": "no"}),
                Err(EquivError::InvalidInput(m)) => {
                    println!("{}", json!({"error": {"kind": "invalid-input", "message": m}}));
                    return Err(CliError::Module("invalid input".into()));
                }
                Err(e) => return Err(CliError::Module(e.to_string())),
            }
        }
        "rot-phase" => {
            let n = u64_field(&doc, "n")?;
            let r1 = phase_field(&doc, "r1", &theta)?;
            let r2 = phase_field(&doc, "r2", &theta)?;
            let r1p = phase_field(&doc, "r1p", &theta)?;
            let r2p = phase_field(&doc, "r2p", &theta)?;
            match decide_rotation_phases(&r1, &r2, &r1p, &r2p, n) {
                Ok(Decision::Yes(a)) => {
                    json!({"answer": "yes", "witness": {"a": a.to_string()}})
                }
                Ok(Decision::No) => json!({"answer": "no"}),
                Err(EquivError::UndecidableInModel(m)) => {
                    json!({"answer": "undecidable-in-model", "detail": m})
                }
                Err(EquivError::InvalidInput(m)) => {
                    println!("{}", json!({"error": {"kind": "invalid-input", "message": m}}));
                    return Err(CliError::Module("invalid input".into()));
                }
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "case: \"{other}\" is not one of equiv0, bernoulli-phase, bernoulli-w, rot-phase"
            )))
        }
    };
    println!("{answer}");
    Ok(true)
}
