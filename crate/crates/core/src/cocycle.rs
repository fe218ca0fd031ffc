//! The unitary cocycle `W = χ_C⊗λ₁u* + χ_D⊗λ₂v*`, its iterates, the
//! `β = Ad(W)∘shift` action on observables, Birkhoff-average ergodicity
//! probes, and cocycle trivialization over finite index sets.
//!
//! Iterates follow `W_0 = 1`, `W_k(x) = W(x)·W_{k−1}(σ^{−1}x)` for k > 0
//! and `W_k(x) = W(σx)*·W_{k+1}(σx)` for k < 0, which unrolls to ordered
//! products of `W` along the backward (resp. forward) orbit. Everything is
//! a product of unitaries, so iterates stay unitary to machine precision
//! regardless of k.

use num::complex::Complex64;
use num::rational::BigRational;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::clockshift::{op_norm, matrix_kth_root, ClockError, ClockPair, CMat};
use crate::dynsys::{
    integrate, shift_apply, BernoulliPoint, DynError, MatCylinderFunction, Obs, Point, System,
    DEFAULT_TABLE_BUDGET,
};
use crate::numtheory::QTheta;

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Linalg(#[from] ClockError),
    #[error("phases must lie on the unit circle")]
    BadPhase,
    #[error("input matrix {0} is not unitary (residual {1:.3e})")]
    NotUnitary(usize, f64),
    #[error("trivialization check failed (residual {0:.3e})")]
    TrivializationCheck(f64),
    #[error("window must contain index 0")]
    WindowMissingZero,
    #[error("{0}")]
    Domain(String),
}

/// The cocycle data: base system, fiber clock/shift pair, twist phases.
#[derive(Debug, Clone)]
pub struct Cocycle {
    pub system: System,
    pub pair: ClockPair,
    pub phases: (Complex64, Complex64),
    /// W ≡ 1: harness-only negative control, never a real instance.
    pub degenerate: bool,
    /// table budget forwarded to cylinder-function growth
    pub beta_budget: usize,
}

impl Cocycle {
    pub fn new(system: System, n: usize) -> Result<Self, CocycleError> {
        let pair = ClockPair::new(n)?;
        Ok(Cocycle {
            system,
            pair,
            phases: (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            degenerate: false,
            beta_budget: DEFAULT_TABLE_BUDGET,
        })
    }

    pub fn with_phases(mut self, l1: Complex64, l2: Complex64) -> Result<Self, CocycleError> {
        if (l1.norm() - 1.0).abs() > 1e-9 || (l2.norm() - 1.0).abs() > 1e-9 {
            return Err(CocycleError::BadPhase);
        }
        self.phases = (l1, l2);
        Ok(self)
    }

    pub fn degenerate(system: System, n: usize) -> Result<Self, CocycleError> {
        let mut c = Cocycle::new(system, n)?;
        c.degenerate = true;
        Ok(c)
    }

    pub fn fiber_dim(&self) -> usize {
        self.pair.n
    }

    fn w_in(&self) -> CMat {
        if self.degenerate {
            CMat::identity(self.pair.n, self.pair.n)
        } else {
            self.pair.u.adjoint() * self.phases.0
        }
    }

    fn w_out(&self) -> CMat {
        if self.degenerate {
            CMat::identity(self.pair.n, self.pair.n)
        } else {
            self.pair.v.adjoint() * self.phases.1
        }
    }

    /// Is x in the distinguished set C?
    pub fn in_c(&self, x: &Point) -> Result<bool, DynError> {
        match (&self.system, x) {
            (System::Bernoulli(b), Point::Bernoulli(p)) => Ok(b.in_c1(p.coord(0, b)?)),
            (System::Circle(c), Point::Circle(q)) => Ok(c.in_c(q)),
            _ => Err(DynError::KindMismatch),
        }
    }

    /// W(x).
    pub fn w_at(&self, x: &Point) -> Result<CMat, DynError> {
        Ok(if self.in_c(x)? {
            self.w_in()
        } else {
            self.w_out()
        })
    }

    /// σ^j of a point.
    pub fn shift_point(&self, x: &Point, j: i64) -> Result<Point, DynError> {
        match (&self.system, x) {
            (System::Bernoulli(_), Point::Bernoulli(p)) => Ok(Point::Bernoulli(p.shifted(j))),
            (System::Circle(c), Point::Circle(q)) => {
                let jt = QTheta::theta_mult(BigRational::from(BigInt::from(j)), c.theta());
                Ok(Point::Circle((q + &jt).frac_floor()))
            }
            _ => Err(DynError::KindMismatch),
        }
    }

    /// W_k(x) for any integer k.
    pub fn w_iterate(&self, x: &Point, k: i64) -> Result<CMat, DynError> {
        let n = self.pair.n;
        let mut acc = CMat::identity(n, n);
        if k >= 0 {
            // W_k(x) = W(x)·W(σ^{−1}x)···W(σ^{−(k−1)}x)
            for j in 0..k {
                let y = self.shift_point(x, -j)?;
                acc *= self.w_at(&y)?;
            }
        } else {
            // W_{−m}(x) = W(σx)*·W(σ²x)*···W(σ^m x)*
            for j in 1..=(-k) {
                let y = self.shift_point(x, j)?;
                acc *= self.w_at(&y)?.adjoint();
            }
        }
        Ok(acc)
    }

    /// β(f)(x) = W(x) f(σ^{−1}x) W(x)*, exactly on the computable algebra.
    pub fn beta_apply(&self, f: &Obs) -> Result<Obs, DynError> {
        let g = shift_apply(&self.system, f, 1)?;
        let w_in = self.w_in();
        let w_out = self.w_out();
        match (&self.system, g) {
            (System::Bernoulli(b), Obs::Bernoulli(g)) => {
                let w_table = MatCylinderFunction::from_fn(0, 1, b.alphabet_size(), 64, |word| {
                    if b.in_c1(word[0]) {
                        w_in.clone()
                    } else {
                        w_out.clone()
                    }
                })
                .expect("one-coordinate table is tiny");
                let out = w_table.combine(&g, self.beta_budget, |w, v| w * v * w.adjoint())?;
                Ok(Obs::Bernoulli(out))
            }
            (System::Circle(c), Obs::Circle(g)) => {
                let ind = c.c_arc();
                let out = g.merge(&ind, |v, inside| {
                    let w = if *inside { &w_in } else { &w_out };
                    w * v * w.adjoint()
                });
                Ok(Obs::Circle(out))
            }
            _ => Err(DynError::KindMismatch),
        }
    }

    /// β^j(f)(x) evaluated pointwise: W_j(x) f(σ^{−j}x) W_j(x)*.
    pub fn beta_pointwise(&self, f: &Obs, x: &Point, j: i64) -> Result<CMat, DynError> {
        let wj = self.w_iterate(x, j)?;
        let y = self.shift_point(x, -j)?;
        let fv = f.eval(&y, &self.system)?;
        Ok(&wj * fv * wj.adjoint())
    }

    /// The invariant trace τ(f) = tr(∫f)/n.
    pub fn tau(&self, f: &Obs) -> Result<Complex64, DynError> {
        let m = integrate(&self.system, f)?;
        let n = m.nrows();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..n {
            tr += m[(i, i)];
        }
        Ok(tr / Complex64::new(n as f64, 0.0))
    }

    /// Deterministic sample points for Birkhoff runs: circle points get
    /// exact dyadic coordinates, shift points get derived extension seeds.
    pub fn default_samples(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| match &self.system {
                System::Circle(c) => {
                    Point::Circle(crate::dynsys::random_circle_point(c.theta(), &mut rng))
                }
                System::Bernoulli(b) => {
                    Point::Bernoulli(BernoulliPoint::seeded(rng.random::<u64>(), b))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "ergodic-consistent")]
    ErgodicConsistent,
    #[serde(rename = "non-ergodic-detected")]
    NonErgodicDetected,
}

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub n: u64,
    pub deviation: f64,
}

/// Result of a Birkhoff ergodicity probe.
#[derive(Debug, Clone, Serialize)]
pub struct ErgodicityReport {
    pub observable: String,
    pub system: String,
    pub fiber_dim: usize,
    pub n_iters: u64,
    pub sample_count: usize,
    /// "exact" = deviation is a sup over the whole space; "sampled" = max
    /// over the sample points.
    pub path: String,
    pub tol: f64,
    pub deviation: f64,
    pub verdict: Verdict,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone)]
pub struct BirkhoffOptions {
    /// verdict threshold; default 5/√N
    pub tol: Option<f64>,
    /// breakpoint budget for the exact circle path
    pub step_budget: usize,
    /// table budget for the exact shift path
    pub table_budget: usize,
    /// record a convergence trace at 1–2–5 decade checkpoints
    pub trace: bool,
}

impl Default for BirkhoffOptions {
    fn default() -> Self {
        BirkhoffOptions {
            tol: None,
            step_budget: 200_000,
            table_budget: DEFAULT_TABLE_BUDGET,
            trace: true,
        }
    }
}

fn checkpoints(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut base = 1u64;
    'outer: loop {
        for m in [1u64, 2, 5] {
            let c = base.saturating_mul(m);
            if c >= n {
                break 'outer;
            }
            out.push(c);
        }
        base = base.saturating_mul(10);
    }
    out.push(n);
    out
}

fn max_dev_obs(avg: &Obs, target: &CMat) -> f64 {
    match avg {
        Obs::Bernoulli(f) => f
            .map(|v| v - target)
            .sup_norm(),
        Obs::Circle(f) => f
            .values()
            .iter()
            .map(|v| op_norm(&(v - target)))
            .fold(0.0, f64::max),
    }
}

/// Can the exact observable path hold N iterations within budget?
fn exact_path_fits(c: &Cocycle, f: &Obs, n_iters: u64, opts: &BirkhoffOptions) -> bool {
    match f {
        Obs::Circle(g) => {
            // each β step adds at most (cuts of C) = 2 breakpoints
            let predicted = g.arc_count() as u64 + 2 * n_iters + 2;
            predicted <= opts.step_budget as u64
        }
        Obs::Bernoulli(g) => {
            let s = match &c.system {
                System::Bernoulli(b) => b.alphabet_size() as u64,
                _ => return false,
            };
            let mut size = g.table_len() as u64;
            for _ in 0..n_iters {
                size = match size.checked_mul(s) {
                    Some(v) if v <= opts.table_budget as u64 => v,
                    _ => return false,
                };
            }
            true
        }
    }
}

/// Birkhoff-average ergodicity probe: deviation of `(1/N)Σ_{j<N} β^j(f)`
/// from `τ(f)·1`, either as an exact sup over the space (small N) or as a
/// max over sample points (large N, parallel across samples).
pub fn birkhoff_test(
    c: &Cocycle,
    f: &Obs,
    label: &str,
    n_iters: u64,
    samples: &[Point],
    opts: &BirkhoffOptions,
) -> Result<ErgodicityReport, CocycleError> {
    if n_iters == 0 {
        return Err(CocycleError::Domain("iteration count must be ≥ 1".into()));
    }
    let n = c.pair.n;
    let tau = c.tau(f)?;
    let target = CMat::identity(n, n) * tau;
    let tol = opts.tol.unwrap_or(5.0 / (n_iters as f64).sqrt());
    let cps = if opts.trace { checkpoints(n_iters) } else { vec![n_iters] };

    let (path, deviation, trace) = if exact_path_fits(c, f, n_iters, opts) {
        let mut acc = f.clone();
        let mut cur = f.clone();
        let mut trace = Vec::new();
        let mut cp_iter = cps.iter().peekable();
        for j in 1..=n_iters {
            if let Some(&&cp) = cp_iter.peek() {
                if cp == j {
                    let avg = scale_obs(&acc, 1.0 / j as f64);
                    trace.push(TracePoint {
                        n: j,
                        deviation: max_dev_obs(&avg, &target),
                    });
                    cp_iter.next();
                }
            }
            if j == n_iters {
                break;
            }
            cur = c.beta_apply(&cur)?;
            acc = add_obs(&acc, &cur)?;
        }
        let dev = trace.last().map(|t| t.deviation).unwrap_or(f64::NAN);
        ("exact".to_string(), dev, trace)
    } else {
        if samples.is_empty() {
            return Err(CocycleError::Domain(
                "sampled path needs at least one sample point".into(),
            ));
        }
        let per_sample: Result<Vec<Vec<f64>>, DynError> = samples
            .par_iter()
            .map(|x| sample_run(c, f, x, &cps, &target))
            .collect();
        let per_sample = per_sample?;
        let trace: Vec<TracePoint> = cps
            .iter()
            .enumerate()
            .map(|(i, &cp)| TracePoint {
                n: cp,
                deviation: per_sample.iter().map(|d| d[i]).fold(0.0, f64::max),
            })
            .collect();
        let dev = trace.last().map(|t| t.deviation).unwrap_or(f64::NAN);
        ("sampled".to_string(), dev, trace)
    };

    let verdict = if deviation <= tol {
        Verdict::ErgodicConsistent
    } else {
        Verdict::NonErgodicDetected
    };
    Ok(ErgodicityReport {
        observable: label.to_string(),
        system: c.system.kind_name().to_string(),
        fiber_dim: n,
        n_iters,
        sample_count: if path == "sampled" { samples.len() } else { 0 },
        path,
        tol,
        deviation,
        verdict,
        trace: if opts.trace { trace } else { Vec::new() },
    })
}

/// One sample point's Birkhoff run, reporting the deviation at each
/// checkpoint. Incremental: maintains W_j and σ^{−j}x across steps.
fn sample_run(
    c: &Cocycle,
    f: &Obs,
    x: &Point,
    cps: &[u64],
    target: &CMat,
) -> Result<Vec<f64>, DynError> {
    let n = c.pair.n;
    let mut acc = CMat::zeros(n, n);
    let mut wj = CMat::identity(n, n);
    let mut devs = Vec::with_capacity(cps.len());
    let mut cp_idx = 0usize;
    let n_iters = *cps.last().unwrap();

    match (&c.system, x) {
        (System::Circle(cs), Point::Circle(q)) => {
            let theta_pt = cs.theta_point();
            let one = QTheta::from_rational(BigRational::from(BigInt::from(1)), cs.theta());
            let g = match f {
                Obs::Circle(g) => g,
                _ => return Err(DynError::KindMismatch),
            };
            let mut y = q.frac_floor(); // σ^{−j}x, kept in [0, 1)
            for j in 0..n_iters {
                let fv = g.eval(&y);
                acc += &wj * fv * wj.adjoint();
                if cps[cp_idx] == j + 1 {
                    let avg = &acc * Complex64::new(1.0 / (j + 1) as f64, 0.0);
                    devs.push(op_norm(&(avg - target)));
                    cp_idx += 1;
                }
                if j + 1 == n_iters {
                    break;
                }
                // W_{j+1}(x) = W_j(x)·W(σ^{−j}x)
                let w = if y < theta_pt { c.w_in() } else { c.w_out() };
                wj *= w;
                y = &y - &theta_pt;
                if y.is_negative() {
                    y = &y + &one;
                }
            }
        }
        (System::Bernoulli(b), Point::Bernoulli(p)) => {
            let g = match f {
                Obs::Bernoulli(g) => g,
                _ => return Err(DynError::KindMismatch),
            };
            for j in 0..n_iters {
                let y = p.shifted(-(j as i64));
                let fv = g.eval(&y, b)?;
                acc += &wj * fv * wj.adjoint();
                if cps[cp_idx] == j + 1 {
                    let avg = &acc * Complex64::new(1.0 / (j + 1) as f64, 0.0);
                    devs.push(op_norm(&(avg - target)));
                    cp_idx += 1;
                }
                if j + 1 == n_iters {
                    break;
                }
                let w = if b.in_c1(p.coord(j as i64, b)?) {
                    c.w_in()
                } else {
                    c.w_out()
                };
                wj *= w;
            }
        }
        _ => return Err(DynError::KindMismatch),
    }
    Ok(devs)
}

fn scale_obs(f: &Obs, s: f64) -> Obs {
    let sc = Complex64::new(s, 0.0);
    match f {
        Obs::Bernoulli(g) => Obs::Bernoulli(g.map(|v| v * sc)),
        Obs::Circle(g) => Obs::Circle(g.map(|v| v * sc)),
    }
}

fn add_obs(a: &Obs, b: &Obs) -> Result<Obs, DynError> {
    match (a, b) {
        (Obs::Bernoulli(x), Obs::Bernoulli(y)) => {
            Ok(Obs::Bernoulli(x.combine(y, usize::MAX, |p, q| p + q)?))
        }
        (Obs::Circle(x), Obs::Circle(y)) => Ok(Obs::Circle(x.merge(y, |p, q| p + q))),
        _ => Err(DynError::KindMismatch),
    }
}

/// Result of trivializing a periodic cocycle: `ζ_n W_n ζ_{n−1}* = Z` for
/// all n mod k, with `Z^k` the loop holonomy and λ a canonical scalar whose
/// phase lies in `[0, 2π/k)`.
#[derive(Debug, Clone)]
pub struct PeriodicTrivialization {
    pub zetas: Vec<CMat>,
    pub z: CMat,
    pub lambda: Complex64,
    pub residual: f64,
}

fn check_unitary(ws: &[CMat]) -> Result<usize, CocycleError> {
    if ws.is_empty() {
        return Err(CocycleError::Domain("need at least one matrix".into()));
    }
    let n = ws[0].nrows();
    for (i, w) in ws.iter().enumerate() {
        if w.nrows() != n || w.ncols() != n {
            return Err(CocycleError::Domain("mixed matrix sizes".into()));
        }
        let res = op_norm(&(w * w.adjoint() - CMat::identity(n, n)));
        if res > 1e-8 {
            return Err(CocycleError::NotUnitary(i, res));
        }
    }
    Ok(n)
}

/// Trivializes a cocycle over a periodic orbit of period k, given
/// `[W_0, …, W_{k−1}]`. Computes the holonomy `P = W_0·W_{k−1}···W_1`,
/// takes its principal k-th root Z, and builds `ζ_0 = 1`,
/// `ζ_n = Z ζ_{n−1} W_n*`. Verifies `ζ_n W_n ζ_{n−1}* = Z` cyclically.
pub fn trivialize_periodic(ws: &[CMat]) -> Result<PeriodicTrivialization, CocycleError> {
    let n = check_unitary(ws)?;
    let k = ws.len();
    let mut holonomy = ws[0].clone();
    for i in (1..k).rev() {
        holonomy *= &ws[i];
    }
    let z = matrix_kth_root(&holonomy, k as u32)?;
    let mut zetas: Vec<CMat> = Vec::with_capacity(k);
    zetas.push(CMat::identity(n, n));
    for i in 1..k {
        let prev = &zetas[i - 1];
        zetas.push(&z * prev * ws[i].adjoint());
    }
    let mut residual: f64 = 0.0;
    for i in 0..k {
        let prev = &zetas[(i + k - 1) % k];
        let lhs = &zetas[i] * &ws[i] * prev.adjoint();
        residual = residual.max(op_norm(&(lhs - &z)));
    }
    if residual > 1e-10 {
        return Err(CocycleError::TrivializationCheck(residual));
    }
    // canonical scalar: fold each holonomy eigenvalue e^{iφ} (φ ∈ [0, 2π))
    // to e^{iφ/k} and take the smallest resulting phase
    let (_, mut eig) = crate::clockshift::unitary_eig(&holonomy)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut best: Option<f64> = None;
    eig.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    for lam in &eig {
        let phi = lam.arg().rem_euclid(two_pi);
        let folded = (phi / k as f64).rem_euclid(two_pi / k as f64);
        best = Some(match best {
            Some(b) if b <= folded => b,
            _ => folded,
        });
    }
    let lambda = Complex64::from_polar(1.0, best.unwrap_or(0.0));
    Ok(PeriodicTrivialization {
        zetas,
        z,
        lambda,
        residual,
    })
}

/// Trivializes a cocycle over a ℤ-window: given `W_n` for
/// `n ∈ [lo, lo+len)` with lo ≤ 0 < lo+len, builds ζ with `ζ_0 = 1`,
/// `ζ_n = ζ_{n−1} W_n*` going up and `ζ_n = ζ_{n+1} W_{n+1}` going down, so
/// `ζ_n W_n ζ_{n−1}* = 1` at every interior index.
pub fn trivialize_aperiodic(lo: i64, ws: &[CMat]) -> Result<Vec<CMat>, CocycleError> {
    let n = check_unitary(ws)?;
    let hi = lo + ws.len() as i64; // exclusive
    if !(lo <= 0 && 0 < hi) {
        return Err(CocycleError::WindowMissingZero);
    }
    let idx = |i: i64| -> usize { (i - lo) as usize };
    let mut zetas: Vec<CMat> = vec![CMat::identity(n, n); ws.len()];
    for i in 1..hi {
        zetas[idx(i)] = &zetas[idx(i - 1)] * ws[idx(i)].adjoint();
    }
    for i in (lo..0).rev() {
        zetas[idx(i)] = &zetas[idx(i + 1)] * &ws[idx(i + 1)];
    }
    let mut residual: f64 = 0.0;
    for i in (lo + 1)..hi {
        let lhs = &zetas[idx(i)] * &ws[idx(i)] * zetas[idx(i - 1)].adjoint();
        residual = residual.max(op_norm(&(lhs - CMat::identity(n, n))));
    }
    if residual > 1e-10 {
        return Err(CocycleError::TrivializationCheck(residual));
    }
    Ok(zetas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clockshift::random_unitary;
    use crate::dynsys::{BernoulliSystem, CircleSystem, CylinderSet};
    use crate::numtheory::Theta;
    use crate::stepfn::CircleStepFn;

    fn circle_cocycle(n: usize) -> Cocycle {
        let sys = System::Circle(CircleSystem::new(Theta::sqrt2m1()).unwrap());
        Cocycle::new(sys, n).unwrap()
    }

    fn coin_cocycle(n: usize) -> Cocycle {
        Cocycle::new(System::Bernoulli(BernoulliSystem::fair_coin()), n).unwrap()
    }

    fn e11(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m
    }

    fn point_fifth(c: &Cocycle) -> Point {
        match &c.system {
            System::Circle(cs) => Point::Circle(QTheta::from_rational(
                BigRational::new(BigInt::from(1), BigInt::from(5)),
                cs.theta(),
            )),
            _ => unreachable!(),
        }
    }

    #[test]
    fn w0_is_identity() {
        let c = circle_cocycle(2);
        let x = point_fifth(&c);
        assert!(op_norm(&(c.w_iterate(&x, 0).unwrap() - CMat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn w2_at_one_fifth_is_ustar_vstar() {
        // x = 0.2 ∈ C, σ^{−1}x = 0.2 − θ ∉ C
        let c = circle_cocycle(2);
        let x = point_fifth(&c);
        let w2 = c.w_iterate(&x, 2).unwrap();
        let expect = c.pair.u.adjoint() * c.pair.v.adjoint();
        assert!(op_norm(&(w2 - expect)) < 1e-12);
    }

    #[test]
    fn negative_iterate_is_adjoint_along_forward_orbit() {
        let c = circle_cocycle(3);
        let x = point_fifth(&c);
        let w_m1 = c.w_iterate(&x, -1).unwrap();
        let sx = c.shift_point(&x, 1).unwrap();
        let expect = c.w_at(&sx).unwrap().adjoint();
        assert!(op_norm(&(w_m1 - expect)) < 1e-12);
    }

    #[test]
    fn cocycle_identity_small_sweep() {
        for c in [circle_cocycle(2), coin_cocycle(3)] {
            let samples = c.default_samples(3, 99);
            for x in &samples {
                for j in [-5i64, -1, 0, 2, 4] {
                    for k in [-3i64, 0, 1, 5] {
                        let lhs = c.w_iterate(x, j + k).unwrap();
                        let wj = c.w_iterate(x, j).unwrap();
                        let y = c.shift_point(x, -j).unwrap();
                        let rhs = wj * c.w_iterate(&y, k).unwrap();
                        assert!(
                            op_norm(&(lhs - rhs)) < 1e-10,
                            "system {} j={j} k={k}",
                            c.system.kind_name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn iterate_reduces_to_counted_word() {
        // with phases (1,1): W_k(x) = phase · u^{−c} v^{−d}, (c,d) = count_cd
        for c in [circle_cocycle(2), circle_cocycle(3), coin_cocycle(2)] {
            let samples = c.default_samples(4, 5);
            for x in &samples {
                for k in [1u64, 2, 5, 9] {
                    let w = c.w_iterate(x, k as i64).unwrap();
                    let (cc, dd) = crate::dynsys::count_cd(&c.system, x, k).unwrap();
                    let word = c.pair.word(-(cc as i64), -(dd as i64));
                    // w·word* must be a unimodular scalar multiple of 1
                    let m = &w * word.adjoint();
                    let lead = m[(0, 0)];
                    assert!((lead.norm() - 1.0).abs() < 1e-10);
                    let scaled = CMat::identity(c.pair.n, c.pair.n) * lead;
                    assert!(
                        op_norm(&(m - scaled)) < 1e-10,
                        "k={k} n={} sys={}",
                        c.pair.n,
                        c.system.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn beta_fixes_scalar_center_up_to_shift() {
        let c = circle_cocycle(2);
        let cs = match &c.system {
            System::Circle(cs) => cs.clone(),
            _ => unreachable!(),
        };
        let t = cs.theta();
        let f = Obs::Circle(CircleStepFn::from_arc(
            &QTheta::zero(t),
            &QTheta::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)), t),
            CMat::identity(2, 2),
            CMat::zeros(2, 2),
            t,
        ));
        let bf = c.beta_apply(&f).unwrap();
        let expect = shift_apply(&c.system, &f, 1).unwrap();
        let samples = c.default_samples(12, 3);
        for x in &samples {
            let a = bf.eval(x, &c.system).unwrap();
            let b = expect.eval(x, &c.system).unwrap();
            assert!(op_norm(&(a - b)) < 1e-12);
        }
    }

    #[test]
    fn degenerate_cocycle_leaves_constants_alone() {
        let c = Cocycle::degenerate(System::Bernoulli(BernoulliSystem::fair_coin()), 2).unwrap();
        let f = Obs::constant(&c.system, e11(2));
        let bf = c.beta_apply(&f).unwrap();
        let x = Point::Bernoulli(BernoulliPoint::seeded(1, &BernoulliSystem::fair_coin()));
        assert!(op_norm(&(bf.eval(&x, &c.system).unwrap() - e11(2))) < 1e-15);
    }

    #[test]
    fn beta_matches_pointwise_conjugation() {
        for c in [circle_cocycle(2), coin_cocycle(2)] {
            let f = match &c.system {
                System::Circle(cs) => {
                    let t = cs.theta();
                    Obs::Circle(CircleStepFn::from_arc(
                        &QTheta::zero(t),
                        &QTheta::from_rational(
                            BigRational::new(BigInt::from(1), BigInt::from(2)),
                            t,
                        ),
                        e11(2),
                        CMat::zeros(2, 2),
                        t,
                    ))
                }
                System::Bernoulli(b) => {
                    let set = CylinderSet::full(b.alphabet_size()).pin(0, &[1]);
                    Obs::Bernoulli(MatCylinderFunction::from_cylinder(&set, e11(2), 2))
                }
            };
            let mut g = f.clone();
            for j in 1..=3 {
                g = c.beta_apply(&g).unwrap();
                for x in &c.default_samples(6, 17) {
                    let a = g.eval(x, &c.system).unwrap();
                    let b = c.beta_pointwise(&f, x, j).unwrap();
                    assert!(
                        op_norm(&(a - b)) < 1e-10,
                        "j={j} sys={}",
                        c.system.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn beta_is_multiplicative_and_preserves_tau() {
        let c = coin_cocycle(2);
        let set = CylinderSet::full(2).pin(0, &[1]);
        let f = Obs::Bernoulli(MatCylinderFunction::from_cylinder(
            &set,
            e11(2) + CMat::identity(2, 2) * Complex64::new(0.0, 0.5),
            2,
        ));
        let set2 = CylinderSet::full(2).pin(1, &[0]);
        let g = Obs::Bernoulli(MatCylinderFunction::from_cylinder(&set2, e11(2), 2));
        let fg = match (&f, &g) {
            (Obs::Bernoulli(a), Obs::Bernoulli(bb)) => {
                Obs::Bernoulli(a.combine(bb, 1 << 20, |x, y| x * y).unwrap())
            }
            _ => unreachable!(),
        };
        let lhs = c.beta_apply(&fg).unwrap();
        let rhs = match (c.beta_apply(&f).unwrap(), c.beta_apply(&g).unwrap()) {
            (Obs::Bernoulli(a), Obs::Bernoulli(bb)) => {
                Obs::Bernoulli(a.combine(&bb, 1 << 20, |x, y| x * y).unwrap())
            }
            _ => unreachable!(),
        };
        for x in &c.default_samples(8, 23) {
            let a = lhs.eval(x, &c.system).unwrap();
            let bb = rhs.eval(x, &c.system).unwrap();
            assert!(op_norm(&(a - bb)) < 1e-12);
        }
        let t1 = c.tau(&f).unwrap();
        let t2 = c.tau(&c.beta_apply(&f).unwrap()).unwrap();
        assert!((t1 - t2).norm() < 1e-12);
    }

    #[test]
    fn birkhoff_constant_observable_has_zero_deviation() {
        let c = circle_cocycle(2);
        let f = Obs::constant(&c.system, CMat::identity(2, 2));
        let samples = c.default_samples(4, 7);
        let rep = birkhoff_test(&c, &f, "one", 50, &samples, &BirkhoffOptions::default()).unwrap();
        assert!(rep.deviation < 1e-12);
        assert_eq!(rep.verdict, Verdict::ErgodicConsistent);
        assert_eq!(rep.path, "exact");
    }

    #[test]
    fn birkhoff_degenerate_control_detects_non_ergodicity() {
        let c = Cocycle::degenerate(System::Bernoulli(BernoulliSystem::fair_coin()), 2).unwrap();
        let f = Obs::constant(&c.system, e11(2));
        let samples = c.default_samples(3, 11);
        let rep =
            birkhoff_test(&c, &f, "e11", 200, &samples, &BirkhoffOptions::default()).unwrap();
        // average stays E11; τ(f)·1 = 1/2; deviation is exactly 1/2
        assert!((rep.deviation - 0.5).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::NonErgodicDetected);
    }

    #[test]
    fn birkhoff_sampled_and_exact_paths_agree() {
        let c = circle_cocycle(2);
        let cs = match &c.system {
            System::Circle(cs) => cs.clone(),
            _ => unreachable!(),
        };
        let t = cs.theta();
        let f = Obs::Circle(CircleStepFn::from_arc(
            &QTheta::zero(t),
            &QTheta::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)), t),
            e11(2),
            CMat::zeros(2, 2),
            t,
        ));
        let samples = c.default_samples(5, 41);
        let n_iters = 60;
        let exact = birkhoff_test(&c, &f, "f", n_iters, &samples, &BirkhoffOptions::default())
            .unwrap();
        assert_eq!(exact.path, "exact");
        let forced = BirkhoffOptions {
            step_budget: 1,
            ..BirkhoffOptions::default()
        };
        let sampled = birkhoff_test(&c, &f, "f", n_iters, &samples, &forced).unwrap();
        assert_eq!(sampled.path, "sampled");
        // sampled max is a lower bound for the exact sup
        assert!(sampled.deviation <= exact.deviation + 1e-9);
        for x in &samples {
            // spot-check one pointwise average against the exact observable
            let mut acc = CMat::zeros(2, 2);
            for j in 0..n_iters {
                acc += c.beta_pointwise(&f, x, j as i64).unwrap();
            }
            let avg = acc * Complex64::new(1.0 / n_iters as f64, 0.0);
            let tau = c.tau(&f).unwrap();
            let dev = op_norm(&(avg - CMat::identity(2, 2) * tau));
            assert!(dev <= sampled.deviation + 1e-9);
        }
    }

    #[test]
    fn birkhoff_positive_control_smoke() {
        let c = circle_cocycle(2);
        let cs = match &c.system {
            System::Circle(cs) => cs.clone(),
            _ => unreachable!(),
        };
        let t = cs.theta();
        let f = Obs::Circle(CircleStepFn::from_arc(
            &QTheta::zero(t),
            &QTheta::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)), t),
            e11(2),
            CMat::zeros(2, 2),
            t,
        ));
        let samples = c.default_samples(6, 2024);
        let opts = BirkhoffOptions {
            step_budget: 1, // force the sampled path
            ..BirkhoffOptions::default()
        };
        let rep = birkhoff_test(&c, &f, "f", 4000, &samples, &opts).unwrap();
        assert!(
            rep.deviation < 0.2,
            "positive control deviated by {}",
            rep.deviation
        );
        // trace exists and ends at N
        assert_eq!(rep.trace.last().unwrap().n, 4000);
    }

    #[test]
    fn trivialize_periodic_clock_square() {
        let pair = ClockPair::new(2).unwrap();
        let ws = vec![pair.u.clone(), pair.u.clone()];
        let tr = trivialize_periodic(&ws).unwrap();
        assert!(op_norm(&(tr.z.clone() - CMat::identity(2, 2))) < 1e-10);
        assert!(op_norm(&(tr.zetas[0].clone() - CMat::identity(2, 2))) < 1e-12);
        assert!(op_norm(&(tr.zetas[1].clone() - pair.u.adjoint())) < 1e-10);
        assert!(tr.residual <= 1e-10);
        assert!((tr.lambda - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn trivialize_periodic_k1_returns_w0() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = random_unitary(3, &mut rng);
        let tr = trivialize_periodic(std::slice::from_ref(&w)).unwrap();
        assert!(op_norm(&(tr.z.clone() - &w)) < 1e-10);
        assert_eq!(tr.zetas.len(), 1);
        assert!(op_norm(&(tr.zetas[0].clone() - CMat::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn trivialize_periodic_random_k4_n3() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ws: Vec<CMat> = (0..4).map(|_| random_unitary(3, &mut rng)).collect();
        let tr = trivialize_periodic(&ws).unwrap();
        assert!(tr.residual <= 1e-10);
        let k = ws.len() as f64;
        let phase = tr.lambda.arg().rem_euclid(2.0 * std::f64::consts::PI);
        assert!(phase < 2.0 * std::f64::consts::PI / k + 1e-12);
        // Z^k reproduces the holonomy
        let mut zk = CMat::identity(3, 3);
        for _ in 0..4 {
            zk = &zk * &tr.z;
        }
        let mut p = ws[0].clone();
        for i in (1..4).rev() {
            p *= &ws[i];
        }
        assert!(op_norm(&(zk - p)) < 1e-9);
    }

    #[test]
    fn trivialize_aperiodic_identity_and_single_v() {
        let pair = ClockPair::new(2).unwrap();
        let id = CMat::identity(2, 2);
        let ws = vec![id.clone(); 4];
        let zetas = trivialize_aperiodic(0, &ws).unwrap();
        for z in &zetas {
            assert!(op_norm(&(z.clone() - &id)) < 1e-12);
        }
        // W_1 = v, others identity, window [0, 4): ζ_n = v* for n ≥ 1
        let mut ws = vec![id.clone(); 4];
        ws[1] = pair.v.clone();
        let zetas = trivialize_aperiodic(0, &ws).unwrap();
        assert!(op_norm(&(zetas[0].clone() - &id)) < 1e-12);
        for z in &zetas[1..] {
            assert!(op_norm(&(z.clone() - pair.v.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn trivialize_aperiodic_random_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let ws: Vec<CMat> = (0..11).map(|_| random_unitary(2, &mut rng)).collect();
        let zetas = trivialize_aperiodic(-5, &ws).unwrap();
        assert_eq!(zetas.len(), 11);
        let idx = |i: i64| (i + 5) as usize;
        assert!(op_norm(&(zetas[idx(0)].clone() - CMat::identity(2, 2))) < 1e-12);
        for i in -4..6i64 {
            let lhs = &zetas[idx(i)] * &ws[idx(i)] * zetas[idx(i - 1)].adjoint();
            assert!(op_norm(&(lhs - CMat::identity(2, 2))) < 1e-10, "i = {i}");
        }
    }

    #[test]
    fn trivialize_rejects_non_unitary() {
        let m = CMat::identity(2, 2) * Complex64::new(2.0, 0.0);
        assert!(matches!(
            trivialize_periodic(std::slice::from_ref(&m)),
            Err(CocycleError::NotUnitary(0, _))
        ));
        assert!(trivialize_aperiodic(1, &[CMat::identity(2, 2)]).is_err());
    }
}
