//! The singular-measure construction: the embedding Φ of a Bernoulli space
//! into the circle along fast-approximation denominators, signed-digit
//! decoding of circle points, the translation-quasi-invariant measure ν,
//! and the statistics used to probe its spectral type.
//!
//! Everything that can be exact is exact: chart breakpoints and decode
//! residuals are `p + q·θ` scalars, ν₀-masses are rationals, and ν-values
//! are intervals with endpoints in `ℚ + ℚ√2` whose width is a certified
//! truncation tail. Floating point only enters in samplers and in
//! Monte-Carlo estimators, always behind an explicit RNG handle.
//!
//! Note on scope: that ν is ergodic under the rotation is a theorem about
//! the construction, not something this module checks; the testable
//! surrogate verified here is the exact independence of ν₀ on disjoint
//! digit windows. The ergodicity proof obligation is not machine-checked.

use std::collections::HashMap;
use std::fmt;

use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::numtheory::{select_mi, NumError, QTheta, SelectedM, Theta};

/// Extra digits carried past the requested depth so tail sums have exact
/// leading terms and only a geometrically small certified remainder.
const GUARD_DIGITS: usize = 8;

#[derive(Debug, Error)]
pub enum SingularError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("chart depth must be between 1 and 48")]
    BadDepth,
    #[error("weights must lie strictly between 0 and 1")]
    BadWeights,
    #[error("digit index {0} exceeds chart depth")]
    DigitOutOfRange(usize),
    #[error("cannot certify at current chart depth: {0}")]
    Precision(String),
    #[error("union components are not certified pairwise disjoint")]
    NonDisjointUnion,
    #[error("{0}")]
    Domain(String),
}

// ---------------------------------------------------------------------------
// exact arithmetic in ℚ + ℚ√2

/// An element `a + b√2` with rational coefficients; closed under the four
/// field operations, with exact sign decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qsqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Qsqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Qsqrt2 { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Qsqrt2 {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// γ = √2 − 1, the contraction constant of the whole construction.
    pub fn gamma() -> Self {
        Qsqrt2 {
            a: -BigRational::one(),
            b: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√2`.
    pub fn sign(&self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let (sa, sb) = (self.a.cmp(&BigRational::zero()), self.b.cmp(&BigRational::zero()));
        match (sa, sb) {
            (Equal, s) | (s, Equal) => s,
            (Greater, Greater) => Greater,
            (Less, Less) => Less,
            _ => {
                // opposite signs: compare a² with 2b²
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * BigRational::from(BigInt::from(2));
                match a2.cmp(&b2) {
                    Equal => Equal, // impossible for nonzero rationals (√2 irrational)
                    Greater => sa,
                    Less => sb,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == std::cmp::Ordering::Greater
    }

    pub fn mul(&self, o: &Qsqrt2) -> Qsqrt2 {
        let two = BigRational::from(BigInt::from(2));
        Qsqrt2 {
            a: &self.a * &o.a + &self.b * &o.b * &two,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn add(&self, o: &Qsqrt2) -> Qsqrt2 {
        Qsqrt2 {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &Qsqrt2) -> Qsqrt2 {
        Qsqrt2 {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> Qsqrt2 {
        Qsqrt2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Qsqrt2 {
        Qsqrt2 {
            a: &self.a * c,
            b: &self.b * c,
        }
    }

    /// Exact inverse via the conjugate: 1/(a+b√2) = (a−b√2)/(a²−2b²).
    pub fn recip(&self) -> Qsqrt2 {
        let two = BigRational::from(BigInt::from(2));
        let denom = &self.a * &self.a - &self.b * &self.b * two;
        assert!(!denom.is_zero(), "inverse of zero in ℚ+ℚ√2");
        Qsqrt2 {
            a: &self.a / &denom,
            b: -(&self.b / &denom),
        }
    }

    pub fn pow(&self, e: u32) -> Qsqrt2 {
        let mut acc = Qsqrt2::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn cmp_value(&self, o: &Qsqrt2) -> std::cmp::Ordering {
        self.sub(o).sign()
    }

    /// f64 value; cancellation between a and b is resolved exactly before
    /// the final rounding, via a 2⁻²⁵⁶-accurate rational √2.
    pub fn value(&self) -> f64 {
        let s = sqrt2_rational();
        (&self.a + &self.b * s).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Qsqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√2", self.a, self.b)
    }
}

/// Rational approximation of √2 accurate to about 2⁻²⁵⁶, by integer Newton
/// iteration on ⌊√(2·4²⁵⁶)⌋.
fn sqrt2_rational() -> BigRational {
    let bits = 256u32;
    let target: BigInt = BigInt::from(2) << (2 * bits);
    let mut x: BigInt = BigInt::one() << (bits + 1);
    loop {
        let next = (&x + &target / &x) >> 1;
        if next >= x {
            break;
        }
        x = next;
    }
    BigRational::new(x, BigInt::one() << bits)
}

// ---------------------------------------------------------------------------
// the chart

/// The embedding data: fast-approximation multipliers `(m_i)` with
/// `|(m_1θ)| < 1/3` and `|(m_iθ)| < |(m_{i−1}θ)|/3`, plus certified tail
/// intervals at every level. The image of `x ∈ {0,1}^depth` is
/// `Φ(x) = Σ x_i (m_iθ)`, and level-N prefixes land in pairwise disjoint
/// intervals of width `b_N − a_N < |(m_Nθ)|/2`.
#[derive(Debug, Clone)]
pub struct CantorChart {
    theta: Theta,
    depth: usize,
    /// selected multipliers, `depth + GUARD_DIGITS` of them
    selected: Vec<SelectedM>,
    /// suffix sums over known digits: abs/neg/pos parts beyond level i
    abs_suffix: Vec<QTheta>,
    neg_suffix: Vec<QTheta>,
    pos_suffix: Vec<QTheta>,
    /// bound on everything past the last known digit
    remainder: QTheta,
}

impl CantorChart {
    pub fn new(theta: &Theta, depth: usize) -> Result<Self, SingularError> {
        if depth == 0 || depth > 48 {
            return Err(SingularError::BadDepth);
        }
        let total = depth + GUARD_DIGITS;
        let selected = select_mi(theta, total)?;
        let zero = QTheta::zero(theta);
        let mut abs_suffix = vec![zero.clone(); total + 1];
        let mut neg_suffix = vec![zero.clone(); total + 1];
        let mut pos_suffix = vec![zero; total + 1];
        for i in (0..total).rev() {
            let frac = &selected[i].frac;
            abs_suffix[i] = &abs_suffix[i + 1] + &frac.abs();
            if frac.is_negative() {
                neg_suffix[i] = &neg_suffix[i + 1] + frac;
                pos_suffix[i] = pos_suffix[i + 1].clone();
            } else {
                pos_suffix[i] = &pos_suffix[i + 1] + frac;
                neg_suffix[i] = neg_suffix[i + 1].clone();
            }
        }
        let remainder = selected[total - 1].abs_frac.half();
        let chart = CantorChart {
            theta: theta.clone(),
            depth,
            selected,
            abs_suffix,
            neg_suffix,
            pos_suffix,
            remainder,
        };
        // contraction gives Σ_{i>N}|(m_iθ)| < |(m_Nθ)|/2 at every level; the
        // whole sum stays below 1/2, so circle identities reduce to real ones
        for level in 1..=depth {
            if !chart.separation_ok(level) {
                return Err(SingularError::Precision(format!(
                    "tail bound at level {level} not below |(m θ)|/2"
                )));
            }
        }
        let half = QTheta::from_rational(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            theta,
        );
        if chart.tail_hi(0).cmp(&half) != std::cmp::Ordering::Less {
            return Err(SingularError::Precision(
                "total digit mass must stay below 1/2".into(),
            ));
        }
        Ok(chart)
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The i-th multiplier record, 1-based, i ≤ depth.
    pub fn m(&self, i: usize) -> &SelectedM {
        &self.selected[i - 1]
    }

    /// `(m_iθ)` as an exact scalar, 1-based.
    pub fn frac(&self, i: usize) -> &QTheta {
        &self.selected[i - 1].frac
    }

    /// Certified interval for `Σ_{i>level} |(m_iθ)|`.
    pub fn tail_lo(&self, level: usize) -> QTheta {
        self.abs_suffix[level].clone()
    }

    pub fn tail_hi(&self, level: usize) -> QTheta {
        &self.abs_suffix[level] + &self.remainder
    }

    /// Certified enclosures of the per-level extremes `a_N` (sum of the
    /// negative digits past N) and `b_N` (positive ones).
    pub fn level_tails(&self, level: usize) -> ((QTheta, QTheta), (QTheta, QTheta)) {
        let a_hi = self.neg_suffix[level].clone();
        let a_lo = &a_hi - &self.remainder;
        let b_lo = self.pos_suffix[level].clone();
        let b_hi = &b_lo + &self.remainder;
        ((a_lo, a_hi), (b_lo, b_hi))
    }

    /// `|(m_levelθ)| > 2·tail(level)`: prefixes differing at this digit map
    /// to disjoint intervals.
    pub fn separation_ok(&self, level: usize) -> bool {
        let two = BigRational::from(BigInt::from(2));
        let lhs = self.selected[level - 1].abs_frac.clone();
        let rhs = self.tail_hi(level).scale(&two);
        lhs > rhs
    }

    /// Partial image Σ_{i≤depth} bits_i (m_iθ) with a certified bound on
    /// how far the full image can drift from it.
    pub fn phi_map(&self, bits: &[u8], depth: usize) -> Result<(QTheta, QTheta), SingularError> {
        if depth > self.depth || bits.len() < depth {
            return Err(SingularError::DigitOutOfRange(depth));
        }
        let mut acc = QTheta::zero(&self.theta);
        for (i, &b) in bits.iter().take(depth).enumerate() {
            if b > 1 {
                return Err(SingularError::Domain("bits must be 0 or 1".into()));
            }
            if b == 1 {
                acc = &acc + self.frac(i + 1);
            }
        }
        let err = &self.pos_suffix[depth] - &(&self.neg_suffix[depth] - &self.remainder);
        Ok((acc, err))
    }

    /// Certified Lebesgue outer bound `2^N·(b_N − a_N)` for the image set.
    pub fn cover_bound_exact(&self, level: usize) -> Result<QTheta, SingularError> {
        if level > self.depth {
            return Err(SingularError::DigitOutOfRange(level));
        }
        let two_n = BigRational::from(BigInt::one() << level);
        Ok(self.tail_hi(level).scale(&two_n))
    }

    pub fn cover_bound(&self, level: usize) -> Result<f64, SingularError> {
        Ok(self.cover_bound_exact(level)?.value())
    }
}

// ---------------------------------------------------------------------------
// signed-digit decoding

/// A finite signed-digit vector over {−1, 0, +1}, 1-based like the chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedDigits(pub Vec<i8>);

impl SignedDigits {
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Three-way decode outcome. The lemma behind it is exact; the chart is
/// finite, so "can't tell at this depth" stays distinct from a certified
/// "no expansion exists".
#[derive(Debug, Clone)]
pub enum DecodeOutcome {
    Representable(SignedDigits),
    NotRepresentable { failed_at: usize },
    PrecisionError { residual_abs: QTheta },
}

impl DecodeOutcome {
    pub fn is_representable(&self) -> bool {
        matches!(self, DecodeOutcome::Representable(_))
    }
}

/// Greedy signed-digit decode of a circle point against the chart.
///
/// At digit i the three candidate bands around `λ(m_iθ)`, λ ∈ {−1,0,1},
/// have radius `tail(i) < |(m_iθ)|/2`, hence are disjoint: at most one λ
/// can continue, and if none can, no expansion exists. A zero residual at
/// the end is a finite expansion; a residual above the final tail bound is
/// a certificate of non-representability; anything in between is below the
/// chart's resolution.
pub fn decode_digits(chart: &CantorChart, t: &QTheta) -> DecodeOutcome {
    let half = QTheta::from_rational(
        BigRational::new(BigInt::one(), BigInt::from(2)),
        chart.theta(),
    );
    let mut r = t.frac_rep();
    if r.abs() >= half {
        // any expansion satisfies |t| < 1/2 strictly
        return DecodeOutcome::NotRepresentable { failed_at: 0 };
    }
    // every finite expansion is (Σλ_i m_i)θ − Σλ_i round(m_iθ), so both
    // coefficients are integers; a fractional coefficient certifies failure
    // at any depth (e.g. θ/2, which is the all-(−1) tail limit)
    if !r.rational_part().is_integer() || !r.theta_coeff().is_integer() {
        return DecodeOutcome::NotRepresentable { failed_at: 0 };
    }
    let mut digits = Vec::with_capacity(chart.depth());
    for i in 1..=chart.depth() {
        let band = chart.tail_hi(i);
        let mut chosen: Option<i8> = None;
        for lam in [-1i8, 0, 1] {
            let c = match lam {
                -1 => r.clone() + chart.frac(i).clone(),
                0 => r.clone(),
                _ => r.clone() - chart.frac(i).clone(),
            };
            if c.abs() <= band {
                if chosen.is_some() {
                    // bands certified disjoint at chart build; unreachable
                    return DecodeOutcome::PrecisionError {
                        residual_abs: r.abs(),
                    };
                }
                chosen = Some(lam);
            }
        }
        match chosen {
            None => return DecodeOutcome::NotRepresentable { failed_at: i },
            Some(lam) => {
                digits.push(lam);
                if lam == 1 {
                    r = &r - chart.frac(i);
                } else if lam == -1 {
                    r = &r + chart.frac(i);
                }
            }
        }
    }
    if r.is_zero() {
        DecodeOutcome::Representable(SignedDigits(digits))
    } else if r.abs() > chart.tail_hi(chart.depth()) {
        DecodeOutcome::NotRepresentable {
            failed_at: chart.depth() + 1,
        }
    } else {
        DecodeOutcome::PrecisionError {
            residual_abs: r.abs(),
        }
    }
}

/// Whether `Φ(P) ∩ (Φ(P) + t)` carries positive measure (t finitely
/// representable) or is null (certified non-representable).
pub fn intersection_test(
    chart: &CantorChart,
    t: &QTheta,
) -> Result<IntersectionKind, SingularError> {
    match decode_digits(chart, t) {
        DecodeOutcome::Representable(d) => Ok(IntersectionKind::PositiveMeasure(d)),
        DecodeOutcome::NotRepresentable { .. } => Ok(IntersectionKind::Null),
        DecodeOutcome::PrecisionError { residual_abs } => Err(SingularError::Precision(format!(
            "residual {:.3e} below chart resolution",
            residual_abs.value()
        ))),
    }
}

#[derive(Debug, Clone)]
pub enum IntersectionKind {
    PositiveMeasure(SignedDigits),
    Null,
}

// ---------------------------------------------------------------------------
// product weights and ν₀

/// Per-digit weights `a_i = P(x_i = 0)`, strictly inside (0,1); cycled when
/// the list is shorter than the chart depth.
#[derive(Debug, Clone)]
pub struct ProductWeights {
    pattern: Vec<BigRational>,
}

impl ProductWeights {
    pub fn new(pattern: Vec<BigRational>) -> Result<Self, SingularError> {
        if pattern.is_empty() {
            return Err(SingularError::BadWeights);
        }
        let one = BigRational::one();
        if pattern.iter().any(|a| !a.is_positive() || *a >= one) {
            return Err(SingularError::BadWeights);
        }
        Ok(ProductWeights { pattern })
    }

    pub fn constant(a: BigRational) -> Result<Self, SingularError> {
        Self::new(vec![a])
    }

    /// a_i, 1-based.
    pub fn a(&self, i: usize) -> &BigRational {
        &self.pattern[(i - 1) % self.pattern.len()]
    }

    /// P(x_i = 1) = 1 − a_i.
    pub fn p_one(&self, i: usize) -> BigRational {
        BigRational::one() - self.a(i)
    }
}

/// A cylinder in digit space: finitely many pinned bits, 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitCylinder {
    pins: std::collections::BTreeMap<usize, bool>,
}

impl BitCylinder {
    pub fn full() -> Self {
        BitCylinder::default()
    }

    pub fn pin(mut self, i: usize, bit: bool) -> Self {
        assert!(i >= 1, "digit indices are 1-based");
        self.pins.insert(i, bit);
        self
    }

    pub fn pins(&self) -> &std::collections::BTreeMap<usize, bool> {
        &self.pins
    }

    pub fn max_pin(&self) -> usize {
        self.pins.keys().next_back().copied().unwrap_or(0)
    }
}

/// Exact ν₀-mass of a cylinder: product of `a_i` (bit 0) and `1 − a_i`
/// (bit 1) over the pinned digits.
pub fn nu0_mass(weights: &ProductWeights, cyl: &BitCylinder) -> BigRational {
    let mut acc = BigRational::one();
    for (&i, &bit) in cyl.pins() {
        acc *= if bit { weights.p_one(i) } else { weights.a(i).clone() };
    }
    acc
}

/// Exact Radon–Nikodym factor between digit-flip translates:
/// `Π_{i∈I₁} (1−a_i)/a_i · Π_{i∈I₀} a_i/(1−a_i)` (I₁ = digits turned on,
/// I₀ = digits turned off). I₀ and I₁ must be disjoint.
pub fn rn_factor(
    weights: &ProductWeights,
    i0: &[usize],
    i1: &[usize],
) -> Result<BigRational, SingularError> {
    let s0: std::collections::BTreeSet<_> = i0.iter().collect();
    if i1.iter().any(|i| s0.contains(i)) {
        return Err(SingularError::Domain("index sets must be disjoint".into()));
    }
    if i0.iter().chain(i1).any(|&i| i == 0) {
        return Err(SingularError::Domain("digit indices are 1-based".into()));
    }
    let mut acc = BigRational::one();
    for &i in i1 {
        acc *= weights.p_one(i) / weights.a(i);
    }
    for &i in i0 {
        acc *= weights.a(i).clone() / weights.p_one(i);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// the measure ν

/// A ν-measurable test set: the whole circle, or a finite disjoint union of
/// shifted cylinder images `Φ(cyl) + j·θ`.
#[derive(Debug, Clone)]
pub enum NuSet {
    FullCircle,
    Components(Vec<(BitCylinder, i64)>),
}

impl NuSet {
    pub fn phi_image() -> Self {
        NuSet::Components(vec![(BitCylinder::full(), 0)])
    }

    pub fn shifted_cylinder(cyl: BitCylinder, j: i64) -> Self {
        NuSet::Components(vec![(cyl, j)])
    }

    /// σ(A) = A + θ.
    pub fn sigma(&self) -> Self {
        match self {
            NuSet::FullCircle => NuSet::FullCircle,
            NuSet::Components(cs) => {
                NuSet::Components(cs.iter().map(|(c, j)| (c.clone(), j + 1)).collect())
            }
        }
    }
}

/// Exact enclosure of a ν-value: the truncated series plus its certified
/// tail, with endpoints in ℚ + ℚ√2.
#[derive(Debug, Clone)]
pub struct NuInterval {
    pub lo: Qsqrt2,
    pub hi: Qsqrt2,
}

impl NuInterval {
    pub fn width(&self) -> Qsqrt2 {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.value() + self.hi.value())
    }
}

/// The measure `ν(A) = Σ_{k∈ℤ} γ^{1+|k|} ν₀(Φ^{-1}(A + kθ))` with
/// γ = √2 − 1. Truncated at `|k| ≤ K` with the certified tail
/// `γ^{K+1}(1+γ)/(1−γ)` per component; K defaults to the smallest value
/// pushing the tail below 1e−12.
#[derive(Debug, Clone)]
pub struct NuMeasure {
    pub chart: CantorChart,
    pub weights: ProductWeights,
    k_trunc: i64,
    gamma_pows: Vec<Qsqrt2>,
    tail_bound: Qsqrt2,
    /// f64 renderings for the samplers
    frac_f64: Vec<f64>,
    theta_f64: f64,
    gamma_f64: f64,
}

impl NuMeasure {
    pub fn new(chart: CantorChart, weights: ProductWeights) -> Result<Self, SingularError> {
        let gamma = Qsqrt2::gamma();
        let one = Qsqrt2::one();
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12));
        let factor = one.add(&gamma).mul(&one.sub(&gamma).recip());
        let mut k = 1i64;
        loop {
            let tail = gamma.pow(k as u32 + 1).mul(&factor);
            if tail.cmp_value(&Qsqrt2::from_rational(tol.clone())) == std::cmp::Ordering::Less {
                break;
            }
            k += 1;
            if k > 256 {
                return Err(SingularError::Domain("tail target unreachable".into()));
            }
        }
        Self::with_truncation(chart, weights, k)
    }

    pub fn with_truncation(
        chart: CantorChart,
        weights: ProductWeights,
        k_trunc: i64,
    ) -> Result<Self, SingularError> {
        if k_trunc < 1 {
            return Err(SingularError::Domain("truncation must be ≥ 1".into()));
        }
        let gamma = Qsqrt2::gamma();
        let mut gamma_pows = Vec::with_capacity(k_trunc as usize + 3);
        let mut acc = Qsqrt2::one();
        for _ in 0..=(k_trunc as usize + 2) {
            gamma_pows.push(acc.clone());
            acc = acc.mul(&gamma);
        }
        let one = Qsqrt2::one();
        let factor = one.add(&gamma).mul(&one.sub(&gamma).recip());
        let tail_bound = gamma_pows[k_trunc as usize + 1].mul(&factor);
        let frac_f64 = (1..=chart.depth()).map(|i| chart.frac(i).value()).collect();
        let theta_f64 = QTheta::theta_mult(BigRational::one(), chart.theta()).value();
        let gamma_f64 = gamma.value();
        Ok(NuMeasure {
            chart,
            weights,
            k_trunc,
            gamma_pows,
            tail_bound,
            frac_f64,
            theta_f64,
            gamma_f64,
        })
    }

    pub fn truncation(&self) -> i64 {
        self.k_trunc
    }

    pub fn tail_bound(&self) -> &Qsqrt2 {
        &self.tail_bound
    }

    /// ν₀-mass of `{x : Φ(x) ∈ Φ(cyl) + (sθ)}` given the decode of (sθ).
    fn overlap_mass(&self, cyl: &BitCylinder, outcome: &DecodeOutcome) -> Result<BigRational, SingularError> {
        let digits = match outcome {
            DecodeOutcome::NotRepresentable { .. } => return Ok(BigRational::zero()),
            DecodeOutcome::PrecisionError { residual_abs } => {
                return Err(SingularError::Precision(format!(
                    "lattice decision unresolved (residual {:.3e})",
                    residual_abs.value()
                )))
            }
            DecodeOutcome::Representable(d) => d,
        };
        // x = y + λ with y ∈ cyl: digits with λ_i = ±1 pin x_i (and y_i);
        // zero digits carry the cylinder's own pins through
        let mut acc = BigRational::one();
        for (i, &lam) in digits.0.iter().enumerate() {
            let idx = i + 1;
            let pin = cyl.pins().get(&idx).copied();
            match lam {
                1 => {
                    // y_i = 0, x_i = 1
                    if pin == Some(true) {
                        return Ok(BigRational::zero());
                    }
                    acc *= self.weights.p_one(idx);
                }
                -1 => {
                    // y_i = 1, x_i = 0
                    if pin == Some(false) {
                        return Ok(BigRational::zero());
                    }
                    acc *= self.weights.a(idx).clone();
                }
                _ => {
                    if let Some(bit) = pin {
                        acc *= if bit {
                            self.weights.p_one(idx)
                        } else {
                            self.weights.a(idx).clone()
                        };
                    }
                }
            }
        }
        // pins beyond the decode length carry through unchanged
        for (&i, &bit) in cyl.pins() {
            if i > digits.0.len() {
                acc *= if bit {
                    self.weights.p_one(i)
                } else {
                    self.weights.a(i).clone()
                };
            }
        }
        Ok(acc)
    }

    fn decode_shift(&self, cache: &mut HashMap<i64, DecodeOutcome>, s: i64) -> DecodeOutcome {
        cache
            .entry(s)
            .or_insert_with(|| {
                let st = QTheta::theta_mult(BigRational::from(BigInt::from(s)), self.chart.theta());
                decode_digits(&self.chart, &st)
            })
            .clone()
    }

    /// Certified enclosure of ν(A).
    pub fn measure(&self, set: &NuSet) -> Result<NuInterval, SingularError> {
        let mut cache = HashMap::new();
        self.measure_cached(set, &mut cache)
    }

    fn measure_cached(
        &self,
        set: &NuSet,
        cache: &mut HashMap<i64, DecodeOutcome>,
    ) -> Result<NuInterval, SingularError> {
        match set {
            NuSet::FullCircle => {
                let mut partial = Qsqrt2::zero();
                for k in -self.k_trunc..=self.k_trunc {
                    partial = partial.add(&self.gamma_pows[k.unsigned_abs() as usize + 1]);
                }
                Ok(NuInterval {
                    lo: partial.clone(),
                    hi: partial.add(&self.tail_bound),
                })
            }
            NuSet::Components(cs) => {
                self.check_components(cs, cache)?;
                let mut partial = Qsqrt2::zero();
                let mut tail = Qsqrt2::zero();
                for (cyl, j) in cs {
                    if cyl.max_pin() > self.chart.depth() {
                        return Err(SingularError::DigitOutOfRange(cyl.max_pin()));
                    }
                    for k in -self.k_trunc..=self.k_trunc {
                        let outcome = self.decode_shift(cache, j + k);
                        let mass = self.overlap_mass(cyl, &outcome)?;
                        if !mass.is_zero() {
                            let term =
                                self.gamma_pows[k.unsigned_abs() as usize + 1].scale(&mass);
                            partial = partial.add(&term);
                        }
                    }
                    tail = tail.add(&self.tail_bound);
                }
                Ok(NuInterval {
                    lo: partial.clone(),
                    hi: partial.add(&tail),
                })
            }
        }
    }

    /// Union components must be certified pairwise disjoint for additivity.
    fn check_components(
        &self,
        cs: &[(BitCylinder, i64)],
        cache: &mut HashMap<i64, DecodeOutcome>,
    ) -> Result<(), SingularError> {
        for (idx, (c1, j1)) in cs.iter().enumerate() {
            for (c2, j2) in cs.iter().skip(idx + 1) {
                match self.decode_shift(cache, j1 - j2) {
                    DecodeOutcome::NotRepresentable { .. } => continue,
                    DecodeOutcome::PrecisionError { residual_abs } => {
                        return Err(SingularError::Precision(format!(
                            "component disjointness unresolved (residual {:.3e})",
                            residual_abs.value()
                        )))
                    }
                    DecodeOutcome::Representable(digits) => {
                        // the images meet iff some x ∈ c1 and y = x + λ ∈ c2
                        // with all bits staying in {0,1}, λ from the decode
                        // of (j1 − j2)θ
                        let mut compatible = true;
                        for (i, &lam) in digits.0.iter().enumerate() {
                            let idx1 = c1.pins().get(&(i + 1)).copied();
                            let idx2 = c2.pins().get(&(i + 1)).copied();
                            let ok = match lam {
                                1 => idx1 != Some(true) && idx2 != Some(false),
                                -1 => idx1 != Some(false) && idx2 != Some(true),
                                _ => match (idx1, idx2) {
                                    (Some(a), Some(b)) => a == b,
                                    _ => true,
                                },
                            };
                            if !ok {
                                compatible = false;
                                break;
                            }
                        }
                        if compatible {
                            for (&i, &b1) in c1.pins() {
                                if i > digits.0.len() {
                                    if let Some(&b2) = c2.pins().get(&i) {
                                        if b1 != b2 {
                                            compatible = false;
                                            break;
                                        }
                                    }
                                }
                            }
                        }
                        if compatible {
                            return Err(SingularError::NonDisjointUnion);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// One draw from ν: pick the sheet k with probability γ^{1+|k|}, then
    /// digits with P(x_i = 1) = 1 − a_i, and return Φ(x) + kθ mod 1.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        self.sample_detailed(rng).2
    }

    pub fn sample_detailed(&self, rng: &mut impl Rng) -> (i64, Vec<u8>, f64) {
        let k = self.sample_sheet(rng);
        let mut t = k as f64 * self.theta_f64;
        let mut bits = Vec::with_capacity(self.chart.depth());
        for i in 1..=self.chart.depth() {
            let a = self.weights.a(i).to_f64().unwrap();
            let bit = if rng.random::<f64>() >= a { 1u8 } else { 0 };
            bits.push(bit);
            if bit == 1 {
                t += self.frac_f64[i - 1];
            }
        }
        (k, bits, t.rem_euclid(1.0))
    }

    fn sample_sheet(&self, rng: &mut impl Rng) -> i64 {
        let mut u: f64 = rng.random();
        let order = std::iter::once(0i64)
            .chain((1..=64i64).flat_map(|k| [k, -k]));
        for k in order {
            let p = self.gamma_f64.powi(1 + k.abs() as i32);
            if u < p {
                return k;
            }
            u -= p;
        }
        0
    }
}

/// Outcome of certifying one inequality with interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertOutcome {
    /// strict inequality between the enclosures
    Certified,
    /// enclosures overlap: consistent, within truncation tolerance
    WithinTail,
    /// certified violation (should never occur)
    Violated,
}

fn certify_le(lhs: &NuInterval, rhs: &NuInterval) -> CertOutcome {
    use std::cmp::Ordering::*;
    if lhs.hi.cmp_value(&rhs.lo) != Greater {
        CertOutcome::Certified
    } else if lhs.lo.cmp_value(&rhs.hi) != Greater {
        CertOutcome::WithinTail
    } else {
        CertOutcome::Violated
    }
}

#[derive(Debug, Clone)]
pub struct QuasiInvarianceRow {
    pub nu_a: NuInterval,
    pub nu_sigma_a: NuInterval,
    pub lower: CertOutcome,
    pub upper: CertOutcome,
}

#[derive(Debug, Clone)]
pub struct QuasiInvarianceReport {
    pub rows: Vec<QuasiInvarianceRow>,
    pub certified: usize,
    pub within_tail: usize,
    pub violated: usize,
}

/// Checks `γ·ν(A) ≤ ν(σA) ≤ γ⁻¹·ν(A)` on each set, from the exact
/// truncated series.
pub fn quasi_invariance_check(
    nu: &NuMeasure,
    sets: &[NuSet],
) -> Result<QuasiInvarianceReport, SingularError> {
    let gamma = Qsqrt2::gamma();
    let gamma_inv = gamma.recip();
    let mut rows = Vec::with_capacity(sets.len());
    let (mut certified, mut within, mut violated) = (0usize, 0usize, 0usize);
    let mut cache = HashMap::new();
    for set in sets {
        let a = nu.measure_cached(set, &mut cache)?;
        let sa = nu.measure_cached(&set.sigma(), &mut cache)?;
        let lhs = NuInterval {
            lo: gamma.mul(&a.lo),
            hi: gamma.mul(&a.hi),
        };
        let rhs = NuInterval {
            lo: gamma_inv.mul(&a.lo),
            hi: gamma_inv.mul(&a.hi),
        };
        let lower = certify_le(&lhs, &sa);
        let upper = certify_le(&sa, &rhs);
        for o in [lower, upper] {
            match o {
                CertOutcome::Certified => certified += 1,
                CertOutcome::WithinTail => within += 1,
                CertOutcome::Violated => violated += 1,
            }
        }
        rows.push(QuasiInvarianceRow {
            nu_a: a,
            nu_sigma_a: sa,
            lower,
            upper,
        });
    }
    Ok(QuasiInvarianceReport {
        rows,
        certified,
        within_tail: within,
        violated,
    })
}

// ---------------------------------------------------------------------------
// spectral statistics

/// Hellinger-type moment estimate `∫ √(dνσ^{−k}/dν) dν` by importance
/// sampling over the sheet decomposition. Self-normalized, so the estimate
/// is ≤ 1 by Cauchy–Schwarz regardless of sample noise, and k = 0 returns
/// exactly 1.
pub fn spectral_moment(
    nu: &NuMeasure,
    k: i64,
    n_samples: usize,
    rng: &mut impl Rng,
) -> num::complex::Complex64 {
    // sheets reachable by flips of the first few digits dominate; deeper
    // flips move the sheet index by at least m_i and are negligible
    let enum_depth = nu.chart.depth().min(7);
    let m_small: Vec<i64> = (1..=enum_depth)
        .map(|i| nu.chart.m(i).m.to_i64().unwrap_or(i64::MAX / 4))
        .collect();
    let a_f64: Vec<f64> = (1..=enum_depth)
        .map(|i| nu.weights.a(i).to_f64().unwrap())
        .collect();
    let mut sum_sqrt = 0.0f64;
    let mut sum_b = 0.0f64;
    for _ in 0..n_samples {
        let (j, bits, _) = nu.sample_detailed(rng);
        let mut rho = 0.0f64;
        let mut rho_k = 0.0f64;
        // enumerate sign patterns λ over the first enum_depth digits that
        // keep x + λ inside {0,1}
        let patterns = 1usize << enum_depth;
        for pat in 0..patterns {
            let mut s = 0i64;
            let mut w = 1.0f64;
            for (i, &m) in m_small.iter().enumerate() {
                if pat & (1 << i) != 0 {
                    if bits[i] == 0 {
                        // flip 0 → 1
                        s += m;
                        w *= (1.0 - a_f64[i]) / a_f64[i];
                    } else {
                        // flip 1 → 0
                        s -= m;
                        w *= a_f64[i] / (1.0 - a_f64[i]);
                    }
                }
            }
            let sheet = j - s;
            rho += nu.gamma_f64.powi(1 + sheet.abs().min(1_000) as i32) * w;
            rho_k += nu.gamma_f64.powi(1 + (sheet - k).abs().min(1_000) as i32) * w;
        }
        let b = rho_k / rho;
        sum_sqrt += b.sqrt();
        sum_b += b;
    }
    let est = sum_sqrt / (n_samples as f64 * sum_b).sqrt();
    num::complex::Complex64::new(est, 0.0)
}

/// Comparison mode: the k-th moment of the constant vector for Lebesgue
/// measure, as an exact integral: ∫₀¹ e^{2πikx} dx = 0 for k ≠ 0, 1 at 0.
pub fn spectral_moment_lebesgue(k: i64) -> num::complex::Complex64 {
    if k == 0 {
        num::complex::Complex64::new(1.0, 0.0)
    } else {
        num::complex::Complex64::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularityReport {
    pub depth: usize,
    pub samples: usize,
    pub mean_llr: f64,
    pub std_llr: f64,
    pub z_score: f64,
    pub slope_per_digit: f64,
    pub diverges: bool,
}

/// Log-likelihood-ratio divergence test between two digit-weight systems:
/// samples x from the first, accumulates `Σ_i log(P_a(x_i)/P_b(x_i))`, and
/// reports whether the mean grows positively at 5σ. Divergence is the
/// sampling-side signature of mutual singularity.
pub fn mutual_singularity_statistic(
    wa: &ProductWeights,
    wb: &ProductWeights,
    depth: usize,
    n_samples: usize,
    rng: &mut impl Rng,
) -> SingularityReport {
    let mut totals = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let mut t = 0.0f64;
        for i in 1..=depth {
            let a = wa.a(i).to_f64().unwrap();
            let b = wb.a(i).to_f64().unwrap();
            let bit_one = rng.random::<f64>() >= a;
            t += if bit_one {
                ((1.0 - a) / (1.0 - b)).ln()
            } else {
                (a / b).ln()
            };
        }
        totals.push(t);
    }
    let n = n_samples as f64;
    let mean = totals.iter().sum::<f64>() / n;
    let var = totals.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    let std = var.sqrt();
    let z = if std > 0.0 {
        mean / (std / n.sqrt())
    } else if mean > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    SingularityReport {
        depth,
        samples: n_samples,
        mean_llr: mean,
        std_llr: std,
        z_score: z,
        slope_per_digit: mean / depth as f64,
        diverges: z > 5.0 && mean > 0.0,
    }
}
