use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use super::NumError;

/// Bits of the cached fixed-point witness for θ. Sign decisions on `p + qθ`
/// are certified as long as the integer coefficients stay well below this
/// scale; the certification is checked per call, never assumed.
pub const WITNESS_BITS: u64 = 384;

/// Hard cap on continued-fraction digits generated for one context. Periodic
/// sources never get near this in practice; it exists to bound runaway loops.
const MAX_DIGITS: usize = 4000;

/// Where the partial quotients of θ come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitSource {
    /// The digit block repeats forever; θ is a quadratic irrational and every
    /// comparison terminates with a certificate.
    Periodic(Vec<u32>),
    /// Digits extracted from a numeric input up to a stated depth. Decisions
    /// finer than the final convergent bracket fall back to the numeric
    /// witness and are logged.
    Finite(Vec<u32>),
}

impl DigitSource {
    fn digit(&self, r: usize) -> Option<u32> {
        debug_assert!(r >= 1);
        match self {
            DigitSource::Periodic(block) => Some(block[(r - 1) % block.len()]),
            DigitSource::Finite(digits) => digits.get(r - 1).copied(),
        }
    }
}

/// One row of the convergent recursion.
///
/// Seeds: `k_{-2} = 0, k_{-1} = 1, m_{-2} = 1, m_{-1} = 0`, with `b_0 = 0`
/// so that `(k_0, m_0) = (0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub r: usize,
    pub digit: u32,
    pub k: BigInt,
    pub m: BigInt,
}

impl Convergent {
    /// `k_r/m_r` as a rational.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.k.clone(), self.m.clone())
    }
}

struct FixedWitness {
    bits: u64,
    /// ≈ θ·2^bits
    scaled: BigInt,
    /// |θ·2^bits − scaled| ≤ err
    err: BigInt,
}

struct ThetaInner {
    source: DigitSource,
    name: Option<String>,
    /// Numeric witness for Finite sources (the exact input value).
    numeric: Option<BigRational>,
    approx: OnceLock<f64>,
    convergents: Mutex<Vec<Convergent>>,
    witness: OnceLock<FixedWitness>,
}

/// An irrational θ ∈ (0, 1) described by its continued-fraction digits.
///
/// Cloning is cheap (shared handle); the convergent table and the fixed-point
/// witness are cached inside and grown on demand.
#[derive(Clone)]
pub struct Theta(Arc<ThetaInner>);

impl fmt::Debug for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.name {
            Some(n) => write!(f, "Theta({n})"),
            None => write!(f, "Theta({:?} ≈ {:.6})", self.0.source, self.approx()),
        }
    }
}

impl PartialEq for Theta {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.source == other.0.source
    }
}
impl Eq for Theta {}

impl Theta {
    fn from_parts(source: DigitSource, name: Option<String>, numeric: Option<BigRational>) -> Self {
        Theta(Arc::new(ThetaInner {
            source,
            name,
            numeric,
            approx: OnceLock::new(),
            convergents: Mutex::new(vec![Convergent {
                r: 0,
                digit: 0,
                k: BigInt::zero(),
                m: BigInt::one(),
            }]),
            witness: OnceLock::new(),
        }))
    }

    /// θ = √2 − 1 = [0; 2, 2, 2, …].
    pub fn sqrt2m1() -> Self {
        Self::from_parts(DigitSource::Periodic(vec![2]), Some("sqrt2m1".into()), None)
    }

    /// θ = (√5 − 1)/2 = [0; 1, 1, 1, …].
    pub fn golden() -> Self {
        Self::from_parts(DigitSource::Periodic(vec![1]), Some("golden".into()), None)
    }

    /// θ with digit block `b_1..b_p` repeating forever. Digits must be ≥ 1.
    pub fn from_periodic_digits(block: Vec<u32>) -> Result<Self, NumError> {
        if block.is_empty() || block.contains(&0) {
            return Err(NumError::Domain(
                "periodic digit block must be nonempty with all digits ≥ 1".into(),
            ));
        }
        Ok(Self::from_parts(DigitSource::Periodic(block), None, None))
    }

    /// θ from a numeric value in (0, 1), with digits extracted up to `depth`.
    pub fn from_rational_value(x: BigRational, depth: usize) -> Result<Self, NumError> {
        if x <= BigRational::zero() || x >= BigRational::one() {
            return Err(NumError::Domain("theta value must lie in (0, 1)".into()));
        }
        if depth == 0 {
            return Err(NumError::Domain("digit extraction depth must be ≥ 1".into()));
        }
        let mut digits = Vec::new();
        let mut frac = x.clone();
        while digits.len() < depth && !frac.is_zero() {
            let inv = frac.recip();
            let digit = inv.floor().to_integer();
            digits.push(digit.to_u32().ok_or_else(|| {
                NumError::Domain("continued-fraction digit exceeds u32 range".into())
            })?);
            frac = inv - BigRational::from(digit);
        }
        if digits.is_empty() {
            return Err(NumError::Domain("no digits extracted".into()));
        }
        Ok(Self::from_parts(DigitSource::Finite(digits), None, Some(x)))
    }

    /// θ from an `f64` in (0, 1) (converted exactly), digits up to `depth`.
    pub fn from_f64_value(x: f64, depth: usize) -> Result<Self, NumError> {
        let r = BigRational::from_float(x)
            .ok_or_else(|| NumError::Domain("theta value must be finite".into()))?;
        Self::from_rational_value(r, depth)
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn source(&self) -> &DigitSource {
        &self.0.source
    }

    /// Partial quotient `b_r` (r ≥ 1), or None past a finite source.
    pub fn digit(&self, r: usize) -> Option<u32> {
        self.0.source.digit(r)
    }

    /// The convergent of index `r`, extending the cached table as needed.
    /// `None` once a finite digit source is exhausted.
    pub fn convergent(&self, r: usize) -> Option<Convergent> {
        let mut cache = self.0.convergents.lock().unwrap();
        while cache.len() <= r {
            let next_r = cache.len();
            if next_r > MAX_DIGITS {
                return None;
            }
            let digit = self.0.source.digit(next_r)?;
            let (km1, mm1) = {
                let c = &cache[next_r - 1];
                (c.k.clone(), c.m.clone())
            };
            let (km2, mm2) = if next_r >= 2 {
                let c = &cache[next_r - 2];
                (c.k.clone(), c.m.clone())
            } else {
                // virtual r = −1 row
                (BigInt::one(), BigInt::zero())
            };
            let b = BigInt::from(digit);
            cache.push(Convergent {
                r: next_r,
                digit,
                k: &b * &km1 + km2,
                m: &b * &mm1 + mm2,
            });
        }
        Some(cache[r].clone())
    }

    /// First `count` convergents, starting at r = 0.
    pub fn convergents(&self, count: usize) -> Result<Vec<Convergent>, NumError> {
        (0..count)
            .map(|r| self.convergent(r).ok_or(NumError::DigitsExhausted(r)))
            .collect()
    }

    /// f64 approximation of θ.
    pub fn approx(&self) -> f64 {
        *self.0.approx.get_or_init(|| {
            if let Some(x) = &self.0.numeric {
                return x.to_f64().unwrap_or(f64::NAN);
            }
            // a convergent with m ≥ 2^32 is far below f64 resolution
            let mut r = 1;
            loop {
                let c = self.convergent(r).expect("periodic source");
                if c.m.bits() >= 33 || self.convergent(r + 1).is_none() {
                    return c.to_rational().to_f64().unwrap_or(f64::NAN);
                }
                r += 1;
            }
        })
    }

    fn build_witness(&self, bits: u64) -> FixedWitness {
        // Find a convergent with m² ≥ 2^(bits+4); then |θ − k/m| < 1/m²
        // contributes ≤ 2^−4 scaled units, plus ≤ 1/2 from rounding.
        let mut r = 1usize;
        let mut last = self.convergent(0).unwrap();
        // finite sources exhaust the loop early and certify with the
        // bracket width instead
        while let Some(c) = self.convergent(r) {
            let enough = c.m.bits() * 2 >= bits + 8;
            last = c;
            if enough {
                break;
            }
            r += 1;
        }
        let scale = BigInt::one() << bits;
        let scaled = (&last.k * &scale) / &last.m; // floor; off by < 1
        let err = if last.m.bits() * 2 >= bits + 8 {
            BigInt::from(2)
        } else {
            // |θ − k_r/m_r| < 1/(m_r·m_{r−1}) is all the digits certify
            let prev = self.convergent(last.r.saturating_sub(1)).unwrap();
            (&scale / (&last.m * &prev.m.max(BigInt::one()))) + BigInt::from(2)
        };
        FixedWitness {
            bits,
            scaled,
            err,
        }
    }

    fn witness(&self) -> &FixedWitness {
        self.0.witness.get_or_init(|| self.build_witness(WITNESS_BITS))
    }

    /// Cheap f64 screen for the sign of `P + Q·θ`. Returns a sign only when
    /// the floating-point value clears a conservative bound on every rounding
    /// and approximation error involved, so a `Some` answer is certified; the
    /// caller handles `None` with exact arithmetic.
    fn prefilter(&self, p: &BigInt, q: &BigInt) -> Option<Ordering> {
        let pf = p.to_f64()?;
        let qf = q.to_f64()?;
        if !pf.is_finite() || !qf.is_finite() {
            return None;
        }
        let qt = qf * self.approx();
        let t = pf + qt;
        // budget: conversion of p and q (1 ulp each), the θ approximation
        // (absolute error well under 2^-50), the product and sum roundings
        let err = (pf.abs() + qf.abs() + qt.abs() + t.abs()) * 2f64.powi(-48);
        if t.abs() > err {
            Some(t.partial_cmp(&0.0).expect("finite"))
        } else {
            None
        }
    }

    /// Sign of `P + Q·θ` for integers P, Q, certified against the witness
    /// error bound. Escalates precision for periodic sources; for finite
    /// sources an inconclusive comparison falls back to the witness sign and
    /// is logged.
    pub fn sign_linear(&self, p: &BigInt, q: &BigInt) -> Ordering {
        if q.is_zero() {
            return p.cmp(&BigInt::zero());
        }
        if let Some(ord) = self.prefilter(p, q) {
            return ord;
        }
        let w = self.witness();
        if let Some(ord) = decide(w, p, q) {
            return ord;
        }
        if matches!(self.0.source, DigitSource::Periodic(_)) {
            let mut bits = w.bits;
            for _ in 0..4 {
                bits *= 2;
                let deeper = self.build_witness(bits);
                if let Some(ord) = decide(&deeper, p, q) {
                    return ord;
                }
                if deeper_exhausted(&deeper, bits) {
                    break;
                }
            }
        }
        let t = (p << self.witness().bits) + q * &self.witness().scaled;
        log::warn!(
            "theta comparison fell back to the numeric witness (|q| ~ 2^{} bits)",
            q.bits()
        );
        t.cmp(&BigInt::zero())
    }

    /// Sign of `θ − x`.
    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        // θ − a/b with b > 0: sign(bθ − a)
        self.sign_linear(&-x.numer().clone(), x.denom())
    }

    /// Rational proxy accurate to the witness resolution (≲ 2^−380).
    pub fn witness_rational(&self) -> BigRational {
        let w = self.witness();
        BigRational::new(w.scaled.clone(), BigInt::one() << w.bits)
    }
}

fn decide(w: &FixedWitness, p: &BigInt, q: &BigInt) -> Option<Ordering> {
    let t = (p << w.bits) + q * &w.scaled;
    let bound = q.abs() * &w.err;
    if t.abs() > bound {
        Some(t.cmp(&BigInt::zero()))
    } else {
        None
    }
}

fn deeper_exhausted(w: &FixedWitness, requested: u64) -> bool {
    // err stops shrinking once a finite source runs out of digits
    w.err.bits() + 8 >= requested
}
