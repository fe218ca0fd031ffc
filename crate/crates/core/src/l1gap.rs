//! Desk-scale demonstrations of the ℓ¹ obstruction: finite-support elements
//! of ℓ¹(ℤ, C(X)) acting through the covariant representation, the norm
//! lower bound forced by representing a normalized indicator, and the
//! harmonic-series obstruction in the atomic shift model.
//!
//! Only measure-preserving base systems are wired in, so the Radon–Nikodym
//! correction is identically 1 and every shifted copy of a set keeps its
//! measure.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{BigInt, Complex, One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::clockshift::CMat;
use crate::cocycle::Cocycle;
use crate::dynsys::{
    integrate, shift_apply, BernoulliPoint, CylinderSet, DynError,
    MatCylinderFunction, MatStepFunction, Obs, Point, System,
};
use crate::numtheory::QTheta;
use crate::stepfn::ArcSet;

type Complex64 = Complex<f64>;

#[derive(Debug, Error)]
pub enum L1Error {
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error("{0}")]
    Domain(String),
}

/// A finite-support element Σ_k a_k δ_k of ℓ¹(ℤ, C(X)); the coefficients
/// a_k are scalar observables (1×1-valued step or cylinder functions).
#[derive(Debug, Clone, Default)]
pub struct L1Element {
    terms: BTreeMap<i64, Obs>,
}

impl L1Element {
    pub fn new() -> Self {
        L1Element::default()
    }

    pub fn with_term(mut self, k: i64, a: Obs) -> Result<Self, L1Error> {
        if a.fiber_dim() != 1 {
            return Err(L1Error::Domain("coefficients must be scalar (1×1)".into()));
        }
        self.terms.insert(k, a);
        Ok(self)
    }

    /// δ_k with constant coefficient 1.
    pub fn delta(sys: &System, k: i64) -> Self {
        let one = CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
        L1Element {
            terms: BTreeMap::from([(k, Obs::constant(sys, one))]),
        }
    }

    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn term(&self, k: i64) -> Option<&Obs> {
        self.terms.get(&k)
    }

    /// ‖S‖₁ = Σ_k sup|a_k|.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(Obs::sup_norm).sum()
    }
}

/// A vector in L²(X, μ) ⊗ ℂⁿ: one scalar observable per fiber coordinate.
#[derive(Debug, Clone)]
pub struct RepVector {
    comps: Vec<Obs>,
}

impl RepVector {
    pub fn new(comps: Vec<Obs>) -> Result<Self, L1Error> {
        if comps.is_empty() || comps.iter().any(|c| c.fiber_dim() != 1) {
            return Err(L1Error::Domain(
                "components must be non-empty scalar observables".into(),
            ));
        }
        Ok(RepVector { comps })
    }

    /// 1 ⊗ η for a fiber vector η.
    pub fn one_tensor(sys: &System, eta: &[Complex64]) -> Result<Self, L1Error> {
        if eta.is_empty() {
            return Err(L1Error::Domain("fiber vector must be non-empty".into()));
        }
        let comps = eta
            .iter()
            .map(|&z| Obs::constant(sys, CMat::from_element(1, 1, z)))
            .collect();
        Ok(RepVector { comps })
    }

    /// f ⊗ η: a scalar observable spread over a fiber vector.
    pub fn tensor(f: &Obs, eta: &[Complex64]) -> Result<Self, L1Error> {
        if f.fiber_dim() != 1 {
            return Err(L1Error::Domain("tensor factor must be scalar".into()));
        }
        let comps = eta
            .iter()
            .map(|&z| f.map(|m| m * z))
            .collect::<Vec<_>>();
        RepVector::new(comps)
    }

    pub fn fiber_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, j: usize) -> &Obs {
        &self.comps[j]
    }

    /// ‖φ‖₂² = Σ_j ∫ |φ_j|² dμ.
    pub fn norm_sq(&self, sys: &System) -> Result<f64, L1Error> {
        let mut acc = 0.0;
        for c in &self.comps {
            let sq = c.map(|m| CMat::from_element(1, 1, Complex64::new(m[(0, 0)].norm_sqr(), 0.0)));
            acc += integrate(sys, &sq)?[(0, 0)].re;
        }
        Ok(acc)
    }

    pub fn norm(&self, sys: &System) -> Result<f64, L1Error> {
        Ok(self.norm_sq(sys)?.max(0.0).sqrt())
    }

    /// L² distance to another vector of the same fiber dimension.
    pub fn distance(&self, other: &RepVector, sys: &System, budget: usize) -> Result<f64, L1Error> {
        if self.comps.len() != other.comps.len() {
            return Err(L1Error::Domain("fiber dimensions differ".into()));
        }
        let mut acc = 0.0;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            let d = a.combine(b, budget, |x, y| x - y)?;
            let sq = d.map(|m| CMat::from_element(1, 1, Complex64::new(m[(0, 0)].norm_sqr(), 0.0)));
            acc += integrate(sys, &sq)?[(0, 0)].re;
        }
        Ok(acc.max(0.0).sqrt())
    }
}

/// W(x) as an observable: the in-arc value on C, the out value elsewhere.
fn w_one(c: &Cocycle) -> Result<Obs, L1Error> {
    match &c.system {
        System::Bernoulli(b) => {
            let mut vals = Vec::with_capacity(b.alphabet_size());
            for letter in 0..b.alphabet_size() {
                let p = Point::Bernoulli(BernoulliPoint::from_coords(0, &[letter], b));
                vals.push(c.w_at(&p)?);
            }
            Ok(Obs::Bernoulli(MatCylinderFunction::from_fn(
                0,
                1,
                b.alphabet_size(),
                c.beta_budget,
                |word| vals[word[0]].clone(),
            )?))
        }
        System::Circle(cs) => {
            let zero = QTheta::zero(cs.theta());
            let theta_pt = cs.theta_point();
            let w_in = c.w_at(&Point::Circle(zero.clone()))?;
            let w_out = c.w_at(&Point::Circle(theta_pt.clone()))?;
            Ok(Obs::Circle(MatStepFunction::from_arc(
                &zero,
                &theta_pt,
                w_in,
                w_out,
                cs.theta(),
            )))
        }
    }
}

/// The iterated cocycle W_k as an exact observable, for any integer k:
/// W_0 = 1, W_k = W·(W_{k−1}∘σ⁻¹) forward, and W_{−m}(x) = W_m(σᵐx)*.
pub fn w_obs(c: &Cocycle, k: i64) -> Result<Obs, L1Error> {
    let n = c.fiber_dim();
    if k == 0 {
        return Ok(Obs::constant(&c.system, CMat::identity(n, n)));
    }
    let w1 = w_one(c)?;
    let m = k.unsigned_abs();
    let mut acc = w1.clone();
    for _ in 1..m {
        let shifted = shift_apply(&c.system, &acc, 1)?;
        acc = w1.combine(&shifted, c.beta_budget, |a, b| a * b)?;
    }
    if k > 0 {
        Ok(acc)
    } else {
        let back = shift_apply(&c.system, &acc, -(m as i64))?;
        Ok(back.map(|mat| mat.adjoint()))
    }
}

/// π(S)φ = Σ_k (a_k ⊗ 1)·W_k·(Vᵏ ⊗ 1)φ, computed exactly on step and
/// cylinder representations (the base measure is invariant, so Vᵏ is the
/// plain composition with σ⁻ᵏ).
pub fn apply_rep(s: &L1Element, c: &Cocycle, phi: &RepVector) -> Result<RepVector, L1Error> {
    let n = c.fiber_dim();
    if phi.fiber_dim() != n {
        return Err(L1Error::Domain(format!(
            "vector has fiber dimension {}, cocycle has {n}",
            phi.fiber_dim()
        )));
    }
    let sys = &c.system;
    let budget = c.beta_budget;
    let zero = CMat::from_element(1, 1, Complex64::new(0.0, 0.0));
    let mut out: Vec<Obs> = (0..n).map(|_| Obs::constant(sys, zero.clone())).collect();
    for (&k, a_k) in &s.terms {
        let wk = w_obs(c, k)?;
        let shifted: Vec<Obs> = phi
            .comps
            .iter()
            .map(|f| shift_apply(sys, f, k))
            .collect::<Result<_, _>>()?;
        for (i, out_i) in out.iter_mut().enumerate() {
            let mut term = Obs::constant(sys, zero.clone());
            for (j, phi_j) in shifted.iter().enumerate() {
                let entry = wk.map(|m| CMat::from_element(1, 1, m[(i, j)]));
                let prod = entry.combine(phi_j, budget, |e, p| e * p)?;
                term = term.combine(&prod, budget, |x, y| x + y)?;
            }
            let with_a = a_k.combine(&term, budget, |a, t| a * t)?;
            *out_i = out_i.combine(&with_a, budget, |x, y| x + y)?;
        }
    }
    Ok(RepVector { comps: out })
}

/// χ_A as a scalar observable, circle side.
pub fn circle_indicator(arcs: &ArcSet) -> Obs {
    Obs::Circle(arcs.map(|&b| {
        CMat::from_element(1, 1, Complex64::new(if b { 1.0 } else { 0.0 }, 0.0))
    }))
}

/// χ_A as a scalar observable, shift side.
pub fn cylinder_indicator(set: &CylinderSet) -> Obs {
    Obs::Bernoulli(MatCylinderFunction::from_cylinder(
        set,
        CMat::from_element(1, 1, Complex64::new(1.0, 0.0)),
        1,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub applicable: bool,
    pub note: String,
    pub residual: f64,
    pub l1_norm: f64,
    pub mu_a: f64,
    pub sup_shift_mu: f64,
    pub middle_sum: f64,
    pub lower_unit_ok: bool,
    pub upper_ok: bool,
    pub implied_bound: f64,
}

/// Certifies the norm lower-bound chain
///
///   1 ≤ Σ_k ‖a_k‖ μ(σ⁻ᵏA)^{1/2} ≤ ‖S‖₁ · sup_k μ(σᵏA)^{1/2}
///
/// for an S that represents the normalized indicator of A on 1 ⊗ η, and
/// reports the implied bound ‖S‖₁ ≥ sup_k μ(σᵏA)^{−1/2}. If π(S)(1⊗η)
/// misses the target, the check is vacuous and reported as not applicable.
pub fn lower_bound_check(
    s: &L1Element,
    c: &Cocycle,
    a_ind: &Obs,
    eta: &[Complex64],
) -> Result<ChainReport, L1Error> {
    if a_ind.fiber_dim() != 1 {
        return Err(L1Error::Domain("the set indicator must be scalar".into()));
    }
    let norm_eta: f64 = eta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm_eta - 1.0).abs() > 1e-9 {
        return Err(L1Error::Domain("η must be a unit vector".into()));
    }
    let sys = &c.system;
    let budget = c.beta_budget;
    let mu_a = integrate(sys, a_ind)?[(0, 0)].re;

    let mut report = ChainReport {
        applicable: false,
        note: String::new(),
        residual: f64::NAN,
        l1_norm: s.l1_norm(),
        mu_a,
        sup_shift_mu: f64::NAN,
        middle_sum: f64::NAN,
        lower_unit_ok: false,
        upper_ok: false,
        implied_bound: f64::NAN,
    };
    if mu_a <= 0.0 {
        report.note = "A has measure zero; the chain is vacuous".into();
        return Ok(report);
    }

    // precondition: π(S)(1⊗η) = χ_A/√μ(A) ⊗ η
    let one_eta = RepVector::one_tensor(sys, eta)?;
    let psi = apply_rep(s, c, &one_eta)?;
    let scale = Complex64::new(1.0 / mu_a.sqrt(), 0.0);
    let target = RepVector::tensor(&a_ind.map(|m| m * scale), eta)?;
    let residual = psi.distance(&target, sys, budget)?;
    report.residual = residual;
    if residual > 1e-8 {
        report.note = format!("π(S)(1⊗η) misses the normalized indicator (L² residual {residual:.3e})");
        return Ok(report);
    }

    // μ(σ^{-k}A) per support point; the base is invariant so these coincide
    let mut middle = 0.0;
    let mut sup_mu: f64 = 0.0;
    for &k in &s.support() {
        let ind_k = shift_apply(sys, a_ind, -k)?;
        let mu_k = integrate(sys, &ind_k)?[(0, 0)].re;
        sup_mu = sup_mu.max(mu_k);
        middle += s.term(k).unwrap().sup_norm() * mu_k.max(0.0).sqrt();
    }
    sup_mu = sup_mu.max(mu_a);

    report.applicable = true;
    report.sup_shift_mu = sup_mu;
    report.middle_sum = middle;
    report.lower_unit_ok = 1.0 <= middle + 1e-6;
    report.upper_ok = middle <= report.l1_norm * sup_mu.sqrt() + 1e-6;
    report.implied_bound = 1.0 / sup_mu.sqrt();
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct AtomicReport {
    pub k_max: u64,
    /// coefficients forced coordinatewise: π(S)ξ₀ = Σ a_k ξ_k pins a_k = 1/k
    pub forced: Vec<(u64, BigRational)>,
    pub bound: BigRational,
    pub bound_f64: f64,
}

/// The atomic-model obstruction: in ℓ²(ℤ) with π(δ_k) the shift, any
/// finite-support S with π(S)ξ₀ matching Σ_{k≤K} k⁻¹ξ_k on coordinates
/// 1..K must have a_k(atom) = 1/k, hence ‖S‖₁ ≥ H_K, the K-th harmonic
/// number, exactly. H_K → ∞, so no single ℓ¹ element reaches the full
/// target.
pub fn atomic_obstruction(k_max: u64) -> AtomicReport {
    let mut bound = BigRational::zero();
    let mut forced = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let c = BigRational::new(BigInt::one(), BigInt::from(k));
        bound += &c;
        forced.push((k, c));
    }
    let bound_f64 = bound.to_f64().unwrap_or(f64::NAN);
    AtomicReport {
        k_max,
        forced,
        bound,
        bound_f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{BernoulliSystem, CircleSystem};
    use crate::numtheory::Theta;
    use crate::stepfn::CircleStepFn;
    use num::rational::BigRational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn circle_sys() -> System {
        System::Circle(CircleSystem::new(Theta::sqrt2m1()).unwrap())
    }

    fn bern_sys() -> System {
        System::Bernoulli(BernoulliSystem::fair_coin())
    }

    fn unit() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0)]
    }

    fn scalar_const(sys: &System, v: f64) -> Obs {
        Obs::constant(sys, CMat::from_element(1, 1, Complex64::new(v, 0.0)))
    }

    /// arc [a/den, b/den) as an exact QTheta arc set
    fn arc(sys: &System, a: i64, b: i64, den: i64) -> ArcSet {
        let theta = match sys {
            System::Circle(c) => c.theta(),
            _ => panic!("circle only"),
        };
        let qa = QTheta::from_rational(BigRational::new(BigInt::from(a), BigInt::from(den)), theta);
        let qb = QTheta::from_rational(BigRational::new(BigInt::from(b), BigInt::from(den)), theta);
        CircleStepFn::from_arc(&qa, &qb, true, false, theta)
    }

    #[test]
    fn l1_norm_examples() {
        let sys = circle_sys();
        assert!((L1Element::delta(&sys, 0).l1_norm() - 1.0).abs() < 1e-15);
        let mut s = L1Element::new();
        for k in 1..=3i64 {
            s = s
                .with_term(k, scalar_const(&sys, 1.0 / k as f64))
                .unwrap();
        }
        assert!((s.l1_norm() - 11.0 / 6.0).abs() < 1e-14);
        let ind = circle_indicator(&match &sys {
            System::Circle(c) => c.c_arc(),
            _ => unreachable!(),
        });
        let s2 = L1Element::new().with_term(0, ind).unwrap();
        assert!((s2.l1_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rep_of_delta_zero_is_identity() {
        for sys in [circle_sys(), bern_sys()] {
            let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
            let s = L1Element::delta(&sys, 0);
            let phi = RepVector::new(vec![scalar_const(&sys, 0.7)]).unwrap();
            let psi = apply_rep(&s, &c, &phi).unwrap();
            assert!(psi.distance(&phi, &sys, c.beta_budget).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rep_of_delta_one_translates() {
        let sys = circle_sys();
        let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
        let xi = circle_indicator(&arc(&sys, 0, 1, 4));
        let phi = RepVector::tensor(&xi, &unit()).unwrap();
        let s = L1Element::delta(&sys, 1);
        let psi = apply_rep(&s, &c, &phi).unwrap();
        let expected =
            RepVector::tensor(&shift_apply(&sys, &xi, 1).unwrap(), &unit()).unwrap();
        assert!(psi.distance(&expected, &sys, c.beta_budget).unwrap() < 1e-12);
    }

    #[test]
    fn rep_of_multiplication_term() {
        let sys = bern_sys();
        let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
        let b = match &sys {
            System::Bernoulli(b) => b,
            _ => unreachable!(),
        };
        let f = cylinder_indicator(&CylinderSet::full(b.alphabet_size()).pin(0, &[1]));
        let s = L1Element::new().with_term(0, f.clone()).unwrap();
        let one = RepVector::one_tensor(&sys, &unit()).unwrap();
        let psi = apply_rep(&s, &c, &one).unwrap();
        let expected = RepVector::tensor(&f, &unit()).unwrap();
        assert!(psi.distance(&expected, &sys, c.beta_budget).unwrap() < 1e-12);
    }

    #[test]
    fn w_obs_matches_pointwise_iteration() {
        let mut rng = StdRng::seed_from_u64(31);
        for sys in [circle_sys(), bern_sys()] {
            let c = Cocycle::new(sys.clone(), 2).unwrap();
            for k in -3i64..=3 {
                let wk = w_obs(&c, k).unwrap();
                for _ in 0..10 {
                    let x = match &sys {
                        System::Circle(cs) => Point::Circle(
                            crate::dynsys::random_circle_point(cs.theta(), &mut rng),
                        ),
                        System::Bernoulli(b) => {
                            let letters: Vec<usize> =
                                (0..8).map(|_| rng.random_range(0..2)).collect();
                            Point::Bernoulli(BernoulliPoint::from_coords(-4, &letters, b))
                        }
                    };
                    let direct = c.w_iterate(&x, k).unwrap();
                    let tabled = wk.eval(&x, &sys).unwrap();
                    let diff = (&tabled - &direct).map(|z| z.norm()).max();
                    assert!(diff < 1e-10, "k = {k}, diff = {diff}");
                }
            }
        }
    }

    #[test]
    fn representation_is_contractive_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(77);
        let sys = circle_sys();
        let c = Cocycle::new(sys.clone(), 2).unwrap();
        for _ in 0..10 {
            let mut s = L1Element::new();
            for k in -2i64..=2 {
                if rng.random::<bool>() {
                    let v = rng.random::<f64>() * 2.0 - 1.0;
                    s = s.with_term(k, scalar_const(&sys, v)).unwrap();
                }
            }
            let phi = RepVector::new(vec![
                circle_indicator(&arc(&sys, 0, 1, 3)),
                scalar_const(&sys, 0.5),
            ])
            .unwrap();
            let psi = apply_rep(&s, &c, &phi).unwrap();
            let lhs = psi.norm(&sys).unwrap();
            let rhs = s.l1_norm() * phi.norm(&sys).unwrap();
            assert!(lhs <= rhs + 1e-8, "{lhs} > {rhs}");
        }
    }

    #[test]
    fn interval_bound_scales_like_inverse_sqrt_eps() {
        let sys = circle_sys();
        let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
        let mut bounds = Vec::new();
        for den in [4i64, 16, 64] {
            let a = arc(&sys, 0, 1, den);
            let ind = circle_indicator(&a);
            let eps = 1.0 / den as f64;
            let s = L1Element::new()
                .with_term(0, ind.map(|m| m / Complex64::new(eps.sqrt(), 0.0)))
                .unwrap();
            let rep = lower_bound_check(&s, &c, &ind, &unit()).unwrap();
            assert!(rep.applicable, "{}", rep.note);
            assert!(rep.lower_unit_ok && rep.upper_ok);
            assert!((rep.implied_bound - (den as f64).sqrt()).abs() < 1e-9);
            assert!(rep.l1_norm + 1e-9 >= rep.implied_bound);
            bounds.push(rep.implied_bound);
        }
        assert!(bounds[0] < bounds[1] && bounds[1] < bounds[2]);
    }

    #[test]
    fn whole_space_bound_is_achieved_by_delta() {
        let sys = bern_sys();
        let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
        let b = match &sys {
            System::Bernoulli(b) => b,
            _ => unreachable!(),
        };
        let ind = cylinder_indicator(&CylinderSet::full(b.alphabet_size()));
        let s = L1Element::delta(&sys, 0);
        let rep = lower_bound_check(&s, &c, &ind, &unit()).unwrap();
        assert!(rep.applicable);
        assert!((rep.implied_bound - 1.0).abs() < 1e-12);
        assert!((rep.l1_norm - 1.0).abs() < 1e-12);
        assert!(rep.lower_unit_ok && rep.upper_ok);
    }

    #[test]
    fn random_valid_instances_satisfy_the_chain() {
        let mut rng = StdRng::seed_from_u64(123);
        let sys = circle_sys();
        let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
        for trial in 0..8 {
            let den = [3i64, 5, 8][trial % 3];
            let a = arc(&sys, 0, 1, den);
            let ind = circle_indicator(&a);
            let eps = 1.0 / den as f64;
            let target0 = ind.map(|m| m / Complex64::new(eps.sqrt(), 0.0));
            // random side terms; a₀ soaks up the difference so that
            // Σ_k a_k = χ_A/√μ(A) (the shifts act trivially on 1)
            let mut s = L1Element::new();
            let mut correction = target0.clone();
            for k in [-2i64, 1, 3] {
                if rng.random::<bool>() {
                    let amp = Complex64::new(rng.random::<f64>() - 0.5, 0.0);
                    let g = circle_indicator(&arc(&sys, 1, 2, den + k.unsigned_abs() as i64))
                        .map(|m| m * amp);
                    correction = correction
                        .combine(&g, c.beta_budget, |x, y| x - y)
                        .unwrap();
                    s = s.with_term(k, g).unwrap();
                }
            }
            s = s.with_term(0, correction).unwrap();
            let rep = lower_bound_check(&s, &c, &ind, &unit()).unwrap();
            assert!(rep.applicable, "trial {trial}: {}", rep.note);
            assert!(rep.lower_unit_ok, "trial {trial}: middle = {}", rep.middle_sum);
            assert!(rep.upper_ok, "trial {trial}");
        }
    }

    #[test]
    fn mismatched_representation_is_reported_vacuous() {
        let sys = circle_sys();
        let c = Cocycle::degenerate(sys.clone(), 1).unwrap();
        let ind = circle_indicator(&arc(&sys, 0, 1, 4));
        let s = L1Element::delta(&sys, 0);
        let rep = lower_bound_check(&s, &c, &ind, &unit()).unwrap();
        assert!(!rep.applicable);
        assert!(rep.residual > 0.5);
    }

    #[test]
    fn atomic_obstruction_harmonic_numbers() {
        let r1 = atomic_obstruction(1);
        assert_eq!(r1.bound, BigRational::one());
        let r3 = atomic_obstruction(3);
        assert_eq!(
            r3.bound,
            BigRational::new(BigInt::from(11), BigInt::from(6))
        );
        let r50 = atomic_obstruction(50);
        assert!((r50.bound_f64 - 4.49920533).abs() < 1e-7);
        assert_eq!(r50.forced.len(), 50);
        assert_eq!(
            r50.forced[49],
            (50, BigRational::new(BigInt::one(), BigInt::from(50)))
        );
        // strictly increasing in K: the full target is out of reach
        assert!(r1.bound < r3.bound && r3.bound < r50.bound);
    }
}
