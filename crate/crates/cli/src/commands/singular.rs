//! `ergocycle singular-build`: multiplier chart with per-level cover bounds
//! (CSV), digit round-trips, and the quasi-invariance certificate for the
//! lattice-summed measure.

use std::path::PathBuf;

use num::rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ergocycle_core::numtheory::QTheta;
use ergocycle_core::singular::{
    decode_digits, quasi_invariance_check, BitCylinder, CantorChart, DecodeOutcome, NuMeasure,
    NuSet, ProductWeights, SignedDigits,
};

use crate::config::{parse_rational, parse_theta, resolve_seed};
use crate::report::{all_pass, emit_json, emit_text, verdict, RunReport};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// chart depth (number of selected multipliers)
    #[arg(long, default_value_t = 30)]
    depth: usize,
    /// levels reported in the cover CSV
    #[arg(long, default_value_t = 20)]
    cover_levels: usize,
    /// random digit vectors for the round-trip check
    #[arg(long, default_value_t = 200)]
    round_trips: usize,
    /// random cylinder sets for the quasi-invariance check
    #[arg(long, default_value_t = 100)]
    quasi_sets: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// sqrt2m1, golden, or repeating partial quotients like "2,2"
    #[arg(long, default_value = "sqrt2m1")]
    theta: String,
    /// digit-weight pattern, cycled (e.g. "1/2,1/3"); fair when omitted
    #[arg(long)]
    weights: Option<String>,
    /// per-level CSV path (level,m,frac_abs,cover_bound,tail)
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// JSON report path; stdout when omitted
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConfigEcho {
    theta: String,
    depth: usize,
    cover_levels: usize,
    round_trips: usize,
    quasi_sets: usize,
    weights: Vec<String>,
}

#[derive(Serialize)]
struct Results {
    multipliers_head: Vec<String>,
    cover_bound_at_last_level: f64,
    tail_at_depth: f64,
    truncation_sheets: i64,
    series_tail_bound: f64,
    phi_image_mass: [f64; 2],
    round_trip_failures: usize,
    quasi_certified: usize,
    quasi_within_tail: usize,
    quasi_violated: usize,
}

pub fn run(args: Args) -> Result<bool, CliError> {
    if args.depth == 0 {
        return Err(CliError::Usage("depth: must be ≥ 1".into()));
    }
    if args.cover_levels > args.depth {
        return Err(CliError::Usage(format!(
            "cover_levels: {} exceeds depth {}",
            args.cover_levels, args.depth
        )));
    }
    let seed = resolve_seed(args.seed)?;
    let theta = parse_theta(&args.theta)?;
    let chart = CantorChart::new(&theta, args.depth)
        .map_err(|e| CliError::Module(format!("chart: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // per-level cover table; the decay verdict compares exact rationals
    let mut csv = String::from("level,m,frac_abs,cover_bound,tail\n");
    let mut decay_ok = true;
    let mut prev_exact: Option<QTheta> = None;
    let mut last_bound = f64::NAN;
    for level in 1..=args.cover_levels {
        let sel = chart.m(level);
        let bound_exact = chart
            .cover_bound_exact(level)
            .map_err(|e| CliError::Module(format!("cover bound: {e}")))?;
        if let Some(prev) = &prev_exact {
            // 2^l (b_l − a_l) < (2/3) · 2^{l−1} (b_{l−1} − a_{l−1})
            let lhs = bound_exact.scale(&BigRational::from_integer(3.into()));
            let rhs = prev.scale(&BigRational::from_integer(2.into()));
            decay_ok &= (&lhs - &rhs).is_negative();
        }
        let bound = bound_exact.value();
        last_bound = bound;
        csv.push_str(&format!(
            "{},{},{:.12e},{:.12e},{:.12e}\n",
            level,
            sel.m,
            sel.abs_frac.value(),
            bound,
            chart.tail_hi(level).value(),
        ));
        prev_exact = Some(bound_exact);
    }
    if args.out_csv.is_some() {
        emit_text(&csv, args.out_csv.as_deref())?;
    } else if args.report.is_some() {
        // CSV to stdout only when the JSON report goes to a file
        emit_text(&csv, None)?;
    }

    // round-trips: random signed digit vectors decode back exactly
    let mut round_trip_failures = 0usize;
    for _ in 0..args.round_trips {
        let digits: Vec<i8> = (0..args.depth)
            .map(|_| [-1i8, 0, 1][rng.random_range(0..3)])
            .collect();
        let mut t = QTheta::zero(&theta);
        for (i, &d) in digits.iter().enumerate() {
            if d != 0 {
                t = &t + &chart.frac(i + 1).scale(&BigRational::from_integer(d.into()));
            }
        }
        match decode_digits(&chart, &t.frac_rep()) {
            DecodeOutcome::Representable(SignedDigits(got)) if got == digits => {}
            _ => round_trip_failures += 1,
        }
    }

    // quasi-invariance on random cylinder-based sets
    let weights = match &args.weights {
        Some(spec) => {
            let mut pat = Vec::new();
            for (i, w) in spec.split(',').enumerate() {
                pat.push(
                    parse_rational(w)
                        .map_err(|e| CliError::Usage(format!("weights[{i}]: {e}")))?,
                );
            }
            ProductWeights::new(pat).map_err(|e| CliError::Usage(format!("weights: {e}")))?
        }
        None => ProductWeights::constant(BigRational::new(1.into(), 2.into()))
            .map_err(|e| CliError::Module(format!("weights: {e}")))?,
    };
    let weights_echo: Vec<String> = (1..=4).map(|i| weights.a(i).to_string()).collect();
    let nu = NuMeasure::new(chart.clone(), weights)
        .map_err(|e| CliError::Module(format!("measure: {e}")))?;

    let mut sets = vec![NuSet::FullCircle, NuSet::phi_image()];
    while sets.len() < args.quasi_sets.max(2) {
        let mut cyl = BitCylinder::full();
        for _ in 0..rng.random_range(1..=3usize) {
            cyl = cyl.pin(rng.random_range(1..=6), rng.random::<bool>());
        }
        let j = rng.random_range(-2i64..=2);
        sets.push(NuSet::shifted_cylinder(cyl, j));
    }
    let quasi = quasi_invariance_check(&nu, &sets)
        .map_err(|e| CliError::Module(format!("quasi-invariance: {e}")))?;

    let phi_mass = nu
        .measure(&NuSet::phi_image())
        .map_err(|e| CliError::Module(format!("phi image: {e}")))?;

    let results = Results {
        multipliers_head: (1..=args.depth.min(8))
            .map(|i| chart.m(i).m.to_string())
            .collect(),
        cover_bound_at_last_level: last_bound,
        tail_at_depth: chart.tail_hi(chart.depth()).value(),
        truncation_sheets: nu.truncation(),
        series_tail_bound: nu.tail_bound().value(),
        phi_image_mass: [phi_mass.lo.value(), phi_mass.hi.value()],
        round_trip_failures,
        quasi_certified: quasi.certified,
        quasi_within_tail: quasi.within_tail,
        quasi_violated: quasi.violated,
    };

    let verdicts = vec![
        verdict(
            "cover-decay",
            decay_ok,
            "2^l (b_l − a_l) shrinks by a factor < 2/3 per level, exactly",
        ),
        verdict(
            "digit-round-trip",
            round_trip_failures == 0,
            format!("{} random signed digit vectors decode back", args.round_trips),
        ),
        verdict(
            "quasi-invariance",
            quasi.violated == 0,
            format!(
                "γ·ν(A) ≤ ν(σA) ≤ γ⁻¹·ν(A): {} certified, {} within tail, {} violated",
                quasi.certified, quasi.within_tail, quasi.violated
            ),
        ),
    ];
    let pass = all_pass(&verdicts);
    let rep = RunReport {
        command: "singular-build",
        version: env!("CARGO_PKG_VERSION"),
        seed,
        config: ConfigEcho {
            theta: args.theta.clone(),
            depth: args.depth,
            cover_levels: args.cover_levels,
            round_trips: args.round_trips,
            quasi_sets: args.quasi_sets,
            weights: weights_echo,
        },
        results,
        verdicts,
        all_pass: pass,
    };
    emit_json(&rep, args.report.as_deref())?;
    Ok(pass)
}
