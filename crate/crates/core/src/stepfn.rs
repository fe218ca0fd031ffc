//! Step functions on the circle with exact breakpoints.
//!
//! A `CircleStepFn<V>` is a finite partition of `[0, 1)` into half-open arcs
//! `[c_i, c_{i+1})` (the last arc wraps) with one value per arc. Breakpoints
//! are exact `p + q·θ` scalars, so rotation by multiples of θ, refinement of
//! two partitions, and arc-length bookkeeping never drift.

use num::rational::BigRational;
use num::{BigInt, One};

use crate::numtheory::{QTheta, Theta};

#[derive(Debug, Clone)]
pub struct CircleStepFn<V> {
    theta: Theta,
    /// Strictly increasing, all in [0, 1), nonempty.
    cuts: Vec<QTheta>,
    /// `vals[i]` on `[cuts[i], cuts[i+1])`; `vals[last]` wraps past 1.
    vals: Vec<V>,
}

impl<V> CircleStepFn<V> {
    pub fn constant(v: V, theta: &Theta) -> Self {
        CircleStepFn {
            theta: theta.clone(),
            cuts: vec![QTheta::zero(theta)],
            vals: vec![v],
        }
    }

    /// Builds from `(start, value)` pairs; starts are reduced mod 1 and must
    /// be pairwise distinct.
    pub fn from_pairs(pairs: Vec<(QTheta, V)>, theta: &Theta) -> Self {
        assert!(!pairs.is_empty(), "step function needs at least one arc");
        let mut pairs: Vec<(QTheta, V)> = pairs
            .into_iter()
            .map(|(c, v)| (c.frac_floor(), v))
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        for w in pairs.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate breakpoints");
        }
        let (cuts, vals) = pairs.into_iter().unzip();
        CircleStepFn {
            theta: theta.clone(),
            cuts,
            vals,
        }
    }

    /// Indicator-style function of the arc `[a, b)` (mod 1; wraps when
    /// `b ≤ a` after reduction, except `a == b` which yields all-`outside`).
    pub fn from_arc(a: &QTheta, b: &QTheta, inside: V, outside: V, theta: &Theta) -> Self {
        let a = a.frac_floor();
        let b = b.frac_floor();
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => Self::constant(outside, theta),
            std::cmp::Ordering::Less => {
                Self::from_pairs(vec![(a, inside), (b, outside)], theta)
            }
            std::cmp::Ordering::Greater => {
                Self::from_pairs(vec![(b, outside), (a, inside)], theta)
            }
        }
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn arc_count(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[QTheta] {
        &self.cuts
    }

    pub fn values(&self) -> &[V] {
        &self.vals
    }

    fn active_index(&self, x: &QTheta) -> usize {
        // index of the last cut ≤ x, wrapping below the first cut
        let n = self.cuts.len();
        if *x < self.cuts[0] {
            return n - 1;
        }
        let mut lo = 0usize;
        let mut hi = n;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cuts[mid] <= *x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Value at the point `x` (reduced mod 1).
    pub fn eval(&self, x: &QTheta) -> &V {
        let x = x.frac_floor();
        &self.vals[self.active_index(&x)]
    }

    pub fn map<U>(&self, f: impl FnMut(&V) -> U) -> CircleStepFn<U> {
        CircleStepFn {
            theta: self.theta.clone(),
            cuts: self.cuts.clone(),
            vals: self.vals.iter().map(f).collect(),
        }
    }

    /// `(arc start, arc length, value)` for every arc.
    pub fn arcs(&self) -> Vec<(QTheta, QTheta, &V)> {
        let n = self.cuts.len();
        let one = QTheta::from_rational(BigRational::one(), &self.theta);
        (0..n)
            .map(|i| {
                let start = self.cuts[i].clone();
                let end = if i + 1 < n {
                    self.cuts[i + 1].clone()
                } else {
                    &self.cuts[0] + &one
                };
                let len = &end - &start;
                (start, len, &self.vals[i])
            })
            .collect()
    }

    /// Precomposition with rotation: returns `x ↦ f(x − delta)`, i.e. every
    /// arc moves forward by `delta`.
    pub fn rotate(&self, delta: &QTheta) -> Self
    where
        V: Clone,
    {
        let pairs = self
            .cuts
            .iter()
            .zip(self.vals.iter())
            .map(|(c, v)| (c + delta, v.clone()))
            .collect();
        Self::from_pairs(pairs, &self.theta)
    }

    /// Pointwise combination on the common refinement.
    pub fn merge<W, U>(
        &self,
        other: &CircleStepFn<W>,
        mut f: impl FnMut(&V, &W) -> U,
    ) -> CircleStepFn<U> {
        assert!(self.theta == other.theta, "mixed theta contexts");
        let ca = &self.cuts;
        let cb = &other.cuts;
        let mut merged: Vec<QTheta> = Vec::with_capacity(ca.len() + cb.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < ca.len() || j < cb.len() {
            let next = if j >= cb.len() {
                let c = ca[i].clone();
                i += 1;
                c
            } else if i >= ca.len() {
                let c = cb[j].clone();
                j += 1;
                c
            } else {
                match ca[i].cmp(&cb[j]) {
                    std::cmp::Ordering::Less => {
                        let c = ca[i].clone();
                        i += 1;
                        c
                    }
                    std::cmp::Ordering::Greater => {
                        let c = cb[j].clone();
                        j += 1;
                        c
                    }
                    std::cmp::Ordering::Equal => {
                        let c = ca[i].clone();
                        i += 1;
                        j += 1;
                        c
                    }
                }
            };
            merged.push(next);
        }
        let mut ia = ca.len() - 1;
        let mut ib = cb.len() - 1;
        let (mut pa, mut pb) = (0usize, 0usize);
        let mut vals = Vec::with_capacity(merged.len());
        for c in &merged {
            while pa < ca.len() && ca[pa] <= *c {
                ia = pa;
                pa += 1;
            }
            while pb < cb.len() && cb[pb] <= *c {
                ib = pb;
                pb += 1;
            }
            vals.push(f(&self.vals[ia], &other.vals[ib]));
        }
        CircleStepFn {
            theta: self.theta.clone(),
            cuts: merged,
            vals,
        }
    }

    /// Drops breakpoints between equal adjacent values.
    pub fn simplify(mut self, mut eq: impl FnMut(&V, &V) -> bool) -> Self {
        let mut keep_cuts = Vec::with_capacity(self.cuts.len());
        let mut keep_vals: Vec<V> = Vec::with_capacity(self.vals.len());
        for (c, v) in self.cuts.drain(..).zip(self.vals.drain(..)) {
            if let Some(last) = keep_vals.last() {
                if eq(last, &v) {
                    continue;
                }
            }
            keep_cuts.push(c);
            keep_vals.push(v);
        }
        // wrap merge: first arc continues the last one
        while keep_vals.len() > 1 && eq(&keep_vals[0], keep_vals.last().unwrap()) {
            keep_cuts.remove(0);
            keep_vals.remove(0);
        }
        CircleStepFn {
            theta: self.theta,
            cuts: keep_cuts,
            vals: keep_vals,
        }
    }

    /// Total measure carried by each distinct value, exactly.
    pub fn level_measures(&self) -> Vec<(V, QTheta)>
    where
        V: Ord + Clone,
    {
        let mut acc: std::collections::BTreeMap<V, QTheta> = std::collections::BTreeMap::new();
        for (_, len, v) in self.arcs() {
            acc.entry(v.clone())
                .and_modify(|l| *l = &*l + &len)
                .or_insert(len);
        }
        acc.into_iter().collect()
    }

    /// f64 rendering for sampling-rate evaluation.
    pub fn rendered(&self) -> RenderedStepFn<V>
    where
        V: Clone,
    {
        RenderedStepFn {
            cuts: self.cuts.iter().map(|c| c.value()).collect(),
            vals: self.vals.clone(),
        }
    }
}

impl CircleStepFn<BigRational> {
    /// Exact integral against Lebesgue measure; the θ-part of each arc length
    /// is folded in through the rational pairing `∫ = Σ len_i · v_i`.
    pub fn integrate_exact(&self) -> QTheta {
        let mut acc = QTheta::zero(&self.theta);
        for (_, len, v) in self.arcs() {
            acc = &acc + &len.scale(v);
        }
        acc
    }
}

/// Floating-point rendering of a step function; boundary points may resolve
/// to either neighbor, which is fine for Monte-Carlo style use only.
#[derive(Debug, Clone)]
pub struct RenderedStepFn<V> {
    cuts: Vec<f64>,
    vals: Vec<V>,
}

impl<V> RenderedStepFn<V> {
    pub fn eval(&self, x: f64) -> &V {
        let x = x.rem_euclid(1.0);
        if x < self.cuts[0] {
            return self.vals.last().unwrap();
        }
        let idx = match self
            .cuts
            .binary_search_by(|c| c.partial_cmp(&x).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        &self.vals[idx]
    }
}

/// Measurable unions of arcs, encoded as boolean step functions.
pub type ArcSet = CircleStepFn<bool>;

impl ArcSet {
    pub fn measure(&self) -> QTheta {
        let mut acc = QTheta::zero(self.theta());
        for (_, len, v) in self.arcs() {
            if *v {
                acc = &acc + &len;
            }
        }
        acc
    }

    pub fn measure_f64(&self) -> f64 {
        self.measure().value()
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        self.merge(other, |a, b| *a && *b).simplify(|a, b| a == b)
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        self.merge(other, |a, b| *a || *b).simplify(|a, b| a == b)
    }

    pub fn complement(&self) -> ArcSet {
        self.map(|v| !v)
    }

    pub fn contains(&self, x: &QTheta) -> bool {
        *self.eval(x)
    }
}

/// Splits an arc `[a, b)` into `parts` equal sub-arcs.
pub fn split_arc(a: &QTheta, b: &QTheta, parts: usize) -> Vec<(QTheta, QTheta)> {
    assert!(parts >= 1);
    let len = b - a;
    let step = len.scale(&BigRational::new(BigInt::one(), BigInt::from(parts as i64)));
    (0..parts)
        .map(|i| {
            let lo = a + &step.scale(&BigRational::from(BigInt::from(i as i64)));
            let hi = a + &step.scale(&BigRational::from(BigInt::from((i + 1) as i64)));
            (lo, hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::Theta;

    fn th() -> Theta {
        Theta::sqrt2m1()
    }

    fn q(p: i64, qc: i64, d: i64, theta: &Theta) -> QTheta {
        QTheta::new(
            BigRational::new(BigInt::from(p), BigInt::from(d)),
            BigRational::new(BigInt::from(qc), BigInt::from(d)),
            theta,
        )
    }

    fn tm(m: i64, theta: &Theta) -> QTheta {
        QTheta::theta_mult(BigInt::from(m), theta)
    }

    #[test]
    fn wrapping_arc_has_complement_measure() {
        let t = th();
        let a = q(3, 0, 4, &t);
        let b = q(1, 0, 4, &t);
        let set = ArcSet::from_arc(&a, &b, true, false, &t);
        assert_eq!(set.measure(), q(1, 0, 2, &t));
        assert!(set.contains(&QTheta::zero(&t)));
        assert!(set.contains(&a), "left endpoint belongs to the arc");
        assert!(!set.contains(&b), "right endpoint does not");
        assert!(!set.contains(&q(1, 0, 2, &t)));
    }

    #[test]
    fn degenerate_arc_is_empty() {
        let t = th();
        let a = q(1, 0, 3, &t);
        let set = ArcSet::from_arc(&a, &a, true, false, &t);
        assert!(set.measure().is_zero());
        assert!(!set.contains(&a));
    }

    #[test]
    fn eval_wraps_below_first_cut() {
        let t = th();
        let f = CircleStepFn::from_pairs(vec![(q(1, 0, 4, &t), 7i64), (q(3, 0, 4, &t), 9)], &t);
        assert_eq!(*f.eval(&QTheta::zero(&t)), 9);
        assert_eq!(*f.eval(&q(1, 0, 4, &t)), 7);
        assert_eq!(*f.eval(&q(1, 0, 2, &t)), 7);
        assert_eq!(*f.eval(&q(3, 0, 4, &t)), 9);
    }

    #[test]
    fn rotate_precomposes_with_rotation() {
        let t = th();
        let theta_pt = tm(1, &t);
        let f = ArcSet::from_arc(&QTheta::zero(&t), &theta_pt, true, false, &t);
        let g = f.rotate(&theta_pt); // g(x) = f(x − θ), supported on [θ, 2θ)
        assert!(!g.contains(&QTheta::zero(&t)));
        assert!(g.contains(&theta_pt));
        assert!(g.contains(&q(0, 3, 2, &t))); // 3θ/2 ∈ [θ, 2θ)
        assert!(!g.contains(&tm(2, &t)));
        assert_eq!(g.measure(), f.measure());
    }

    #[test]
    fn intersect_union_complement_measures_are_exact() {
        let t = th();
        let a = ArcSet::from_arc(&QTheta::zero(&t), &q(1, 0, 2, &t), true, false, &t);
        let b = ArcSet::from_arc(&q(1, 0, 4, &t), &q(3, 0, 4, &t), true, false, &t);
        assert_eq!(a.intersect(&b).measure(), q(1, 0, 4, &t));
        assert_eq!(a.union(&b).measure(), q(3, 0, 4, &t));
        assert_eq!(a.complement().measure(), q(1, 0, 2, &t));
        let all = a.union(&a.complement());
        assert_eq!(all.measure(), QTheta::from_int(1, &t));
        assert_eq!(all.arc_count(), 1);
    }

    #[test]
    fn simplify_merges_across_the_wrap() {
        let t = th();
        let f = CircleStepFn::from_pairs(
            vec![(QTheta::zero(&t), 1u8), (q(1, 0, 2, &t), 1)],
            &t,
        )
        .simplify(|a, b| a == b);
        assert_eq!(f.arc_count(), 1);
    }

    #[test]
    fn exact_integral_folds_theta_lengths() {
        let t = th();
        let theta_pt = tm(1, &t);
        // value 2 on [0, θ), 1 on [θ, 1): ∫ = 2θ + (1 − θ) = 1 + θ
        let f = CircleStepFn::from_pairs(
            vec![
                (QTheta::zero(&t), BigRational::from(BigInt::from(2))),
                (theta_pt, BigRational::from(BigInt::from(1))),
            ],
            &t,
        );
        assert_eq!(f.integrate_exact(), q(1, 1, 1, &t));
    }

    #[test]
    fn rendered_matches_exact_eval_on_grid() {
        let t = th();
        let f = CircleStepFn::from_pairs(
            vec![
                (tm(1, &t), 1i32),
                (q(1, 0, 2, &t), 2),
                (q(7, 0, 8, &t), 3),
            ],
            &t,
        );
        let r = f.rendered();
        for i in 0..200 {
            let x = q(i, 0, 200, &t);
            assert_eq!(f.eval(&x), r.eval(i as f64 / 200.0), "i = {i}");
        }
    }

    #[test]
    fn split_arc_pieces_tile_the_arc() {
        let t = th();
        let a = QTheta::zero(&t);
        let b = tm(1, &t);
        let parts = split_arc(&a, &b, 3);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].0, a);
        assert_eq!(parts[2].1, b);
        let mut total = QTheta::zero(&t);
        for (lo, hi) in &parts {
            total = &total + &(hi - lo);
        }
        assert_eq!(total, b);
        assert_eq!(parts[0].1, parts[1].0);
    }

    #[test]
    fn level_measures_accumulate_disjoint_arcs() {
        let t = th();
        let f = CircleStepFn::from_pairs(
            vec![
                (QTheta::zero(&t), 1u8),
                (q(1, 0, 4, &t), 0),
                (q(1, 0, 2, &t), 1),
                (q(3, 0, 4, &t), 0),
            ],
            &t,
        );
        let lm = f.level_measures();
        assert_eq!(lm.len(), 2);
        assert_eq!(lm[0], (0u8, q(1, 0, 2, &t)));
        assert_eq!(lm[1], (1u8, q(1, 0, 2, &t)));
    }
}

