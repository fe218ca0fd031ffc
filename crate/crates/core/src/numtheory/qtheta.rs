use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::Theta;

/// An exact element `p + q·θ` with rational `p, q` over a fixed θ context.
///
/// Because 1 and θ are linearly independent over ℚ, equality is coefficient
/// equality and the ordering is decided by a certified integer comparison in
/// the θ context. Circle points are carried in this form so that interval
/// membership, sorting, and fractional parts are exact.
#[derive(Clone)]
pub struct QTheta {
    p: BigRational,
    q: BigRational,
    theta: Theta,
}

impl fmt::Debug for QTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}·θ ≈ {:.9})", self.p, self.q, self.value())
    }
}

impl fmt::Display for QTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "{}·θ", self.q)
        } else {
            write!(f, "{} + {}·θ", self.p, self.q)
        }
    }
}

impl QTheta {
    pub fn new(p: BigRational, q: BigRational, theta: &Theta) -> Self {
        QTheta {
            p,
            q,
            theta: theta.clone(),
        }
    }

    pub fn zero(theta: &Theta) -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), theta)
    }

    pub fn from_rational(p: impl Into<BigRational>, theta: &Theta) -> Self {
        Self::new(p.into(), BigRational::zero(), theta)
    }

    pub fn from_int(p: i64, theta: &Theta) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(p)), theta)
    }

    /// `m·θ`.
    pub fn theta_mult(m: impl Into<BigRational>, theta: &Theta) -> Self {
        Self::new(BigRational::zero(), m.into(), theta)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn theta_coeff(&self) -> &BigRational {
        &self.q
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    fn check_ctx(&self, other: &QTheta) {
        assert!(
            self.theta == other.theta,
            "mixed theta contexts in QTheta arithmetic"
        );
    }

    /// Certified sign.
    pub fn sign(&self) -> Ordering {
        if self.q.is_zero() {
            return self.p.cmp(&BigRational::zero());
        }
        // p + qθ over the common positive denominator: sign(P + Qθ)
        let bd = self.p.denom() * self.q.denom();
        let pp = self.p.numer() * self.q.denom();
        let qq = self.q.numer() * self.p.denom();
        debug_assert!(bd.is_positive());
        self.theta.sign_linear(&pp, &qq)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> QTheta {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &BigRational) -> QTheta {
        QTheta::new(&self.p * c, &self.q * c, &self.theta)
    }

    pub fn half(&self) -> QTheta {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return self.p.floor().to_integer();
        }
        // Start from a cheap f64 estimate when the magnitudes guarantee it
        // lands within one of the truth; the loop below certifies with exact
        // sign tests either way. Large coefficients cancel too much for f64,
        // so they keep the witness-precision estimate.
        let est = self
            .p
            .to_f64()
            .zip(self.q.to_f64())
            .map(|(pf, qf)| (pf, qf * self.theta.approx()))
            .filter(|(pf, qt)| pf.abs() + qt.abs() < 2f64.powi(40))
            .and_then(|(pf, qt)| BigInt::from_f64((pf + qt).floor()))
            .unwrap_or_else(|| {
                (&self.p + &self.q * self.theta.witness_rational())
                    .floor()
                    .to_integer()
            });
        let mut n = est;
        loop {
            // need: 0 ≤ x − n < 1
            let low = self - &QTheta::from_rational(BigRational::from(n.clone()), &self.theta);
            match low.sign() {
                Ordering::Less => {
                    n -= 1;
                    continue;
                }
                _ => {
                    let high =
                        &low - &QTheta::from_rational(BigRational::one(), &self.theta);
                    if high.sign() == Ordering::Less {
                        return n;
                    }
                    n += 1;
                }
            }
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac_floor(&self) -> QTheta {
        self - &QTheta::from_rational(BigRational::from(self.floor()), &self.theta)
    }

    /// Representative of `self mod 1` in `(−1/2, 1/2]` (right-closed).
    pub fn frac_rep(&self) -> QTheta {
        let f = self.frac_floor();
        let half = QTheta::from_rational(BigRational::new(BigInt::one(), BigInt::from(2)), &self.theta);
        if (&f - &half).sign() == Ordering::Greater {
            &f - &QTheta::from_rational(BigRational::one(), &self.theta)
        } else {
            f
        }
    }

    /// f64 value, computed through the high-precision witness so that large
    /// coefficients do not lose the fractional part.
    pub fn value(&self) -> f64 {
        (&self.p + &self.q * self.theta.witness_rational())
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl PartialEq for QTheta {
    fn eq(&self, other: &Self) -> bool {
        self.check_ctx(other);
        self.p == other.p && self.q == other.q
    }
}
impl Eq for QTheta {}

impl PartialOrd for QTheta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QTheta {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl Add for &QTheta {
    type Output = QTheta;
    fn add(self, rhs: &QTheta) -> QTheta {
        self.check_ctx(rhs);
        QTheta::new(&self.p + &rhs.p, &self.q + &rhs.q, &self.theta)
    }
}

impl Sub for &QTheta {
    type Output = QTheta;
    fn sub(self, rhs: &QTheta) -> QTheta {
        self.check_ctx(rhs);
        QTheta::new(&self.p - &rhs.p, &self.q - &rhs.q, &self.theta)
    }
}

impl Neg for &QTheta {
    type Output = QTheta;
    fn neg(self) -> QTheta {
        QTheta::new(-&self.p, -&self.q, &self.theta)
    }
}

impl Add for QTheta {
    type Output = QTheta;
    fn add(self, rhs: QTheta) -> QTheta {
        &self + &rhs
    }
}
impl Sub for QTheta {
    type Output = QTheta;
    fn sub(self, rhs: QTheta) -> QTheta {
        &self - &rhs
    }
}
impl Neg for QTheta {
    type Output = QTheta;
    fn neg(self) -> QTheta {
        -&self
    }
}
impl Mul<&BigRational> for &QTheta {
    type Output = QTheta;
    fn mul(self, rhs: &BigRational) -> QTheta {
        self.scale(rhs)
    }
}
