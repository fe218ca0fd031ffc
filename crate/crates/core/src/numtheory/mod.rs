//! Continued fractions and exact arithmetic in `ℚ ⊕ ℚθ`.
//!
//! The convergent recursion is seeded `k_{-2} = 0, k_{-1} = 1, m_{-2} = 1,
//! m_{-1} = 0` with `b_0 = 0`, so `k_r m_{r-1} − k_{r-1} m_r = (−1)^{r+1}`
//! and `|θ − k_r/m_r| < 1/m_r²` hold for every r ≥ 1. Everything downstream
//! (interval breakpoints, digit charts, measure bookkeeping) leans on sign
//! decisions of `p + q·θ`, which [`Theta`] certifies with integer arithmetic.

mod qtheta;
mod theta;

pub use qtheta::QTheta;
pub use theta::{Convergent, DigitSource, Theta, WITNESS_BITS};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use thiserror::Error;

use crate::stepfn::CircleStepFn;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("continued-fraction digits exhausted at r = {0}")]
    DigitsExhausted(usize),
    #[error("denominator selection needs {needed} levels, found {found} before the digit budget ran out")]
    SelectionDepth { needed: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

/// One selected denominator `m_i` with `(m_i θ)`, the representative of
/// `m_i θ` mod 1 in `(−1/2, 1/2]`.
#[derive(Debug, Clone)]
pub struct SelectedM {
    /// 1-based selection index.
    pub index: usize,
    /// Convergent index the denominator came from.
    pub r: usize,
    pub m: BigInt,
    pub frac: QTheta,
    pub abs_frac: QTheta,
}

/// Greedy selection of convergent denominators `m_1 < m_2 < …` with
/// `|(m_1 θ)| < 1/3` and `|(m_i θ)| < |(m_{i−1} θ)|/3`.
///
/// Scanning convergent denominators in order is equivalent to scanning all
/// integers: the smallest `m` beating a threshold that every smaller integer
/// misses is a best approximation, hence a convergent denominator.
pub fn select_mi(theta: &Theta, depth: usize) -> Result<Vec<SelectedM>, NumError> {
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let mut out: Vec<SelectedM> = Vec::with_capacity(depth);
    let mut threshold = QTheta::from_rational(third.clone(), theta);
    let mut last_m = BigInt::zero();
    let cap = 64 * (depth + 2) + 256;
    let mut r = 1usize;
    while out.len() < depth && r <= cap {
        let c = match theta.convergent(r) {
            Some(c) => c,
            None => break,
        };
        r += 1;
        if c.m <= last_m {
            continue;
        }
        let frac = QTheta::theta_mult(BigRational::from(c.m.clone()), theta).frac_rep();
        let abs = frac.abs();
        if (&abs - &threshold).sign() == std::cmp::Ordering::Less {
            threshold = abs.scale(&third);
            last_m = c.m.clone();
            out.push(SelectedM {
                index: out.len() + 1,
                r: c.r,
                m: c.m,
                frac,
                abs_frac: abs,
            });
        }
    }
    if out.len() < depth {
        return Err(NumError::SelectionDepth {
            needed: depth,
            found: out.len(),
        });
    }
    Ok(out)
}

/// `c′(x, m) = #{0 ≤ i < m : x − iθ ∈ [0, θ)}`.
pub fn rotation_count(theta: &Theta, x: &QTheta, m: u64) -> u64 {
    let theta_pt = QTheta::theta_mult(BigRational::one(), theta);
    let mut y = x.frac_floor();
    let mut count = 0u64;
    for i in 0..m {
        if y < theta_pt {
            count += 1;
        }
        if i + 1 < m {
            y = (&y - &theta_pt).frac_floor();
        }
    }
    count
}

/// Exact level sets of `x ↦ c′(x, m)` on the circle.
#[derive(Debug, Clone)]
pub struct CountMeasure {
    pub m: u64,
    /// `[mθ]`, the floor of `mθ`.
    pub floor_mtheta: BigInt,
    /// (count value, total measure), ascending by value.
    pub levels: Vec<(u64, QTheta)>,
}

impl CountMeasure {
    /// Measure of `{c′ = [mθ]}`.
    pub fn low(&self) -> Option<&QTheta> {
        self.level(&self.floor_mtheta)
    }

    /// Measure of `{c′ = [mθ] + 1}`.
    pub fn high(&self) -> Option<&QTheta> {
        self.level(&(&self.floor_mtheta + BigInt::one()))
    }

    fn level(&self, v: &BigInt) -> Option<&QTheta> {
        use num::ToPrimitive;
        let v = v.to_u64()?;
        self.levels.iter().find(|(val, _)| *val == v).map(|(_, l)| l)
    }
}

/// Computes the level sets of `c′(·, m)` by cutting the circle at
/// `{iθ mod 1 : 0 ≤ i ≤ m}` and counting on each resulting arc.
pub fn count_measure(theta: &Theta, m: u64) -> Result<CountMeasure, NumError> {
    if m == 0 {
        return Err(NumError::Domain("m must be ≥ 1".into()));
    }
    let cuts: Vec<QTheta> = (0..=m)
        .map(|i| QTheta::theta_mult(BigRational::from(BigInt::from(i)), theta).frac_floor())
        .collect();
    let mut pairs: Vec<(QTheta, u64)> = cuts.into_iter().map(|c| (c, 0)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    pairs.dedup_by(|a, b| a.0 == b.0);
    let step = CircleStepFn::from_pairs(pairs, theta);
    let counted = {
        let arcs = step.arcs();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let pairs = arcs
            .iter()
            .map(|(start, len, _)| {
                let mid = (start + &len.scale(&half)).frac_floor();
                (start.clone(), rotation_count(theta, &mid, m))
            })
            .collect();
        CircleStepFn::from_pairs(pairs, theta)
    };
    let levels = counted.level_measures();
    let floor_mtheta = QTheta::theta_mult(BigRational::from(BigInt::from(m)), theta).floor();
    Ok(CountMeasure {
        m,
        floor_mtheta,
        levels,
    })
}

/// The closed forms `µ{c′ = [mθ]} = [mθ] + 1 − mθ` and
/// `µ{c′ = [mθ]+1} = mθ − [mθ]`.
pub fn count_measure_closed_form(theta: &Theta, m: u64) -> (QTheta, QTheta) {
    let mtheta = QTheta::theta_mult(BigRational::from(BigInt::from(m)), theta);
    let fl = QTheta::from_rational(BigRational::from(mtheta.floor()), theta);
    let one = QTheta::from_rational(BigRational::one(), theta);
    let low = &(&fl + &one) - &mtheta;
    let high = &mtheta - &fl;
    (low, high)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;
    use std::cmp::Ordering;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn convergents_of_sqrt2m1_start_0_1_1_2_2_5_5_12() {
        let t = Theta::sqrt2m1();
        let cs = t.convergents(4).unwrap();
        let got: Vec<(i64, i64)> = cs
            .iter()
            .map(|c| (c.k.to_i64().unwrap(), c.m.to_i64().unwrap()))
            .collect();
        assert_eq!(got, vec![(0, 1), (1, 2), (2, 5), (5, 12)]);
    }

    #[test]
    fn determinant_identity_holds_for_both_constants() {
        for t in [Theta::sqrt2m1(), Theta::golden()] {
            let cs = t.convergents(16).unwrap();
            for r in 1..16 {
                let det = &cs[r].k * &cs[r - 1].m - &cs[r - 1].k * &cs[r].m;
                let expect = if (r + 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(det, BigInt::from(expect), "r = {r}");
            }
        }
    }

    #[test]
    fn convergents_approximate_to_one_over_m_squared() {
        // |θ − k/m| < 1/m² ⟺ |mθ − k| < 1/m, decided exactly
        for t in [Theta::sqrt2m1(), Theta::golden()] {
            for r in 1..16 {
                let c = t.convergent(r).unwrap();
                let diff = QTheta::new(
                    BigRational::from(-c.k.clone()),
                    BigRational::from(c.m.clone()),
                    &t,
                );
                let bound = QTheta::from_rational(
                    BigRational::new(BigInt::one(), c.m.clone()),
                    &t,
                );
                assert!((&diff.abs() - &bound).sign() == Ordering::Less, "r = {r}");
            }
        }
    }

    #[test]
    fn digit_extraction_recovers_sqrt2m1_prefix() {
        // oracle: √2 − 1 to 30 digits via f64 is [0; 2, 2, 2, …] up front
        let x = 2f64.sqrt() - 1.0;
        let t = Theta::from_f64_value(x, 12).unwrap();
        for r in 1..=10 {
            assert_eq!(t.digit(r), Some(2), "digit {r}");
        }
    }

    #[test]
    fn qtheta_sign_agrees_with_float_on_coarse_cases() {
        let t = Theta::sqrt2m1();
        let approx = t.approx();
        for p in -6i64..=6 {
            for q in -6i64..=6 {
                let x = QTheta::new(rat(p, 2), rat(q, 3), &t);
                let f = p as f64 / 2.0 + q as f64 / 3.0 * approx;
                if f.abs() > 1e-9 {
                    let want = f.partial_cmp(&0.0).unwrap();
                    assert_eq!(x.sign(), want, "p/2={p}, q/3={q}");
                }
            }
        }
    }

    #[test]
    fn frac_rep_of_2theta_is_negative() {
        // 2θ = 0.828…, so (2θ) = 2θ − 1 ≈ −0.1715728752538099
        let t = Theta::sqrt2m1();
        let f = QTheta::theta_mult(BigRational::from(BigInt::from(2)), &t).frac_rep();
        assert_eq!(f.rational_part(), &rat(-1, 1));
        assert_eq!(f.theta_coeff(), &rat(2, 1));
        let oracle = 2.0 * (2f64.sqrt() - 1.0) - 1.0;
        assert!((f.value() - oracle).abs() < 1e-12);
    }

    #[test]
    fn frac_rep_lands_in_half_open_interval_right_closed() {
        let t = Theta::sqrt2m1();
        let half = QTheta::from_rational(rat(1, 2), &t);
        // rational boundary: frac_rep(3/2) = 1/2 kept, not −1/2
        let x = QTheta::from_rational(rat(3, 2), &t);
        assert_eq!(x.frac_rep(), half);
        // dense sweep of p + qθ values
        for p in -8i64..=8 {
            for q in -8i64..=8 {
                let x = QTheta::new(rat(p, 3), rat(q, 5), &t);
                let f = x.frac_rep();
                assert!((&f - &half).sign() != Ordering::Greater);
                let neg_half = QTheta::from_rational(rat(-1, 2), &t);
                assert!((&f - &neg_half).sign() == Ordering::Greater);
                // difference from x is an integer
                let d = &x - &f;
                assert!(d.is_rational() && d.rational_part().is_integer());
            }
        }
    }

    #[test]
    fn floor_matches_float_oracle_small_range() {
        let t = Theta::golden();
        let approx = t.approx();
        for p in -20i64..=20 {
            for q in -20i64..=20 {
                let x = QTheta::new(rat(p, 4), rat(q, 4), &t);
                let f = (p as f64 / 4.0 + q as f64 / 4.0 * approx).floor();
                // floats are exact here: values stay far from integers
                let dist = (p as f64 / 4.0 + q as f64 / 4.0 * approx) - f;
                if dist > 1e-9 && dist < 1.0 - 1e-9 {
                    assert_eq!(x.floor(), BigInt::from(f as i64), "p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn select_mi_sqrt2m1_depth3_is_2_12_70() {
        let t = Theta::sqrt2m1();
        let sel = select_mi(&t, 3).unwrap();
        let ms: Vec<i64> = sel.iter().map(|s| s.m.to_i64().unwrap()).collect();
        assert_eq!(ms, vec![2, 12, 70]);
        // |(2θ)| ≈ 0.1716 < 1/3
        assert!((sel[0].abs_frac.value() - 0.17157287525381).abs() < 1e-10);
    }

    #[test]
    fn select_mi_matches_brute_force_scan() {
        // oracle: greedy over ALL integers m with ‖mθ‖ thresholds, in f64
        // (values are far from the 1/3 boundaries for these θ)
        for t in [Theta::sqrt2m1(), Theta::golden()] {
            let approx = t.approx();
            let dist = |m: u64| {
                let y = (m as f64 * approx).fract();
                y.min(1.0 - y)
            };
            let mut brute = Vec::new();
            let mut thr = 1.0 / 3.0;
            let mut m = 1u64;
            while brute.len() < 3 {
                if dist(m) < thr {
                    thr = dist(m) / 3.0;
                    brute.push(m);
                }
                m += 1;
            }
            let sel = select_mi(&t, 3).unwrap();
            let ms: Vec<u64> = sel.iter().map(|s| s.m.to_u64().unwrap()).collect();
            assert_eq!(ms, brute, "theta = {:?}", t.name());
        }
    }

    #[test]
    fn golden_depth1_selects_2() {
        let sel = select_mi(&Theta::golden(), 1).unwrap();
        assert_eq!(sel[0].m, BigInt::from(2));
    }

    #[test]
    fn rotation_count_at_point_fifth() {
        // θ = √2−1, x = 0.2, m = 2: x ∈ C, x − θ ∉ C
        let t = Theta::sqrt2m1();
        let x = QTheta::from_rational(rat(1, 5), &t);
        assert_eq!(rotation_count(&t, &x, 2), 1);
    }

    #[test]
    fn count_measure_m2_and_m5_match_closed_form() {
        let t = Theta::sqrt2m1();
        for (m, lo, hi) in [(2u64, 0.17157287525381, 0.82842712474619),
                            (5, 0.92893218813453, 0.07106781186547)] {
            let cm = count_measure(&t, m).unwrap();
            assert_eq!(cm.levels.len(), 2, "exactly two level sets");
            let (low, high) = (cm.low().unwrap(), cm.high().unwrap());
            assert!((low.value() - lo).abs() < 1e-10, "m={m} low");
            assert!((high.value() - hi).abs() < 1e-10, "m={m} high");
            let (clo, chi) = count_measure_closed_form(&t, m);
            assert_eq!(low, &clo);
            assert_eq!(high, &chi);
        }
    }

    #[test]
    fn count_measure_values_are_adjacent() {
        let t = Theta::golden();
        for m in [1u64, 3, 7, 20] {
            let cm = count_measure(&t, m).unwrap();
            assert_eq!(cm.levels.len(), 2);
            assert_eq!(cm.levels[1].0, cm.levels[0].0 + 1);
            let total = &cm.levels[0].1 + &cm.levels[1].1;
            assert!(total.is_rational());
            assert_eq!(total.rational_part(), &BigRational::one());
        }
    }
}
