//! The two base dynamical systems and their computable observable algebras.
//!
//! Both systems come with an exact measure: the Bernoulli shift on `Λ^ℤ`
//! carries a product measure with rational weights, the irrational rotation
//! carries Lebesgue measure with all relevant sets having endpoints in
//! `ℤ + ℤθ`. Observables taking values in `M_n` are either finite-window
//! cylinder tables (shift side) or exact step functions (circle side), so
//! shifting, multiplying, and integrating never leave the representable
//! class until an explicit table budget is hit.
//!
//! Conventions: the shift moves indices forward, `(σx)_i = x_{i−1}`, so
//! `f∘σ^{−1}` of a function of `x_0` is the same function of `x_1`, and the
//! rotation is `σ(x) = x + θ` on `[0,1)`. The distinguished set `C` is
//! `{x : x_0 ∈ C₁}` on the shift side and `[0, θ)` on the circle.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::complex::Complex64;
use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clockshift::{op_norm, CMat};
use crate::numtheory::{QTheta, Theta};
use crate::stepfn::CircleStepFn;

/// Cap on cylinder-function table sizes; growing past this switches callers
/// to sampling-based evaluation.
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum DynError {
    #[error("alphabet must have at least two letters")]
    AlphabetTooSmall,
    #[error("weights must be strictly positive and sum to 1")]
    BadWeights,
    #[error("distinguished letter set must be proper and non-empty")]
    BadLetterSet,
    #[error("rotation angle must lie strictly between 0 and 1/2")]
    ThetaOutOfRange,
    #[error("coordinate {0} is outside the point's window and no extension seed is set")]
    CoordinateUnavailable(i64),
    #[error("cylinder table would need {needed} entries, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("observable/point/system kinds do not match")]
    KindMismatch,
    #[error("{0}")]
    Domain(String),
}

/// Bernoulli shift data: alphabet `{0, …, s−1}`, product weights, and the
/// distinguished letter set C₁.
#[derive(Debug, Clone)]
pub struct BernoulliSystem {
    weights: Vec<BigRational>,
    c1: Vec<bool>,
}

impl BernoulliSystem {
    pub fn new(weights: Vec<BigRational>, c1_letters: &[usize]) -> Result<Self, DynError> {
        let s = weights.len();
        if s < 2 {
            return Err(DynError::AlphabetTooSmall);
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(DynError::BadWeights);
        }
        let total: BigRational = weights.iter().sum();
        if total != BigRational::one() {
            return Err(DynError::BadWeights);
        }
        let mut c1 = vec![false; s];
        for &l in c1_letters {
            if l >= s {
                return Err(DynError::BadLetterSet);
            }
            c1[l] = true;
        }
        let k = c1.iter().filter(|b| **b).count();
        if k == 0 || k == s {
            return Err(DynError::BadLetterSet);
        }
        Ok(BernoulliSystem { weights, c1 })
    }

    /// Fair coin on `{0, 1}` with C₁ = {1}.
    pub fn fair_coin() -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        BernoulliSystem::new(vec![half.clone(), half], &[1]).unwrap()
    }

    pub fn alphabet_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, letter: usize) -> &BigRational {
        &self.weights[letter]
    }

    pub fn in_c1(&self, letter: usize) -> bool {
        self.c1[letter]
    }

    pub fn c1_letters(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&l| self.c1[l]).collect()
    }

    /// μ₁(C₁), exactly.
    pub fn c1_weight(&self) -> BigRational {
        (0..self.weights.len())
            .filter(|&l| self.c1[l])
            .map(|l| self.weights[l].clone())
            .sum()
    }

    fn sample_letter(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (l, w) in self.weights.iter().enumerate() {
            acc += w.to_f64().unwrap();
            if u < acc {
                return l;
            }
        }
        self.weights.len() - 1
    }
}

/// Irrational rotation by θ ∈ (0, 1/2) with distinguished arc C = [0, θ).
#[derive(Debug, Clone)]
pub struct CircleSystem {
    theta: Theta,
}

impl CircleSystem {
    pub fn new(theta: Theta) -> Result<Self, DynError> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let zero = BigRational::zero();
        if theta.cmp_rational(&zero) != std::cmp::Ordering::Greater
            || theta.cmp_rational(&half) != std::cmp::Ordering::Less
        {
            return Err(DynError::ThetaOutOfRange);
        }
        Ok(CircleSystem { theta })
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn theta_point(&self) -> QTheta {
        QTheta::theta_mult(BigRational::one(), &self.theta)
    }

    /// Indicator data of C = [0, θ).
    pub fn c_arc(&self) -> crate::stepfn::ArcSet {
        crate::stepfn::ArcSet::from_arc(
            &QTheta::zero(&self.theta),
            &self.theta_point(),
            true,
            false,
            &self.theta,
        )
    }

    pub fn in_c(&self, x: &QTheta) -> bool {
        let y = x.frac_floor();
        y < self.theta_point()
    }
}

#[derive(Debug, Clone)]
pub enum System {
    Bernoulli(BernoulliSystem),
    Circle(CircleSystem),
}

impl System {
    pub fn kind_name(&self) -> &'static str {
        match self {
            System::Bernoulli(_) => "bernoulli",
            System::Circle(_) => "circle",
        }
    }
}

/// A point of `Λ^ℤ`: finitely many pinned coordinates plus an optional
/// seeded extension rule for everything else. Extension values are a pure
/// function of `(seed, index)`, so repeated reads agree and clones share.
#[derive(Debug, Clone)]
pub struct BernoulliPoint {
    pinned: Arc<BTreeMap<i64, usize>>,
    seed: Option<u64>,
    /// index shift: this point is σ^{offset} of the stored data
    offset: i64,
    alphabet: usize,
}

impl BernoulliPoint {
    pub fn from_coords(start: i64, letters: &[usize], sys: &BernoulliSystem) -> Self {
        let s = sys.alphabet_size();
        assert!(letters.iter().all(|&l| l < s), "letter out of alphabet");
        let pinned = letters
            .iter()
            .enumerate()
            .map(|(i, &l)| (start + i as i64, l))
            .collect();
        BernoulliPoint {
            pinned: Arc::new(pinned),
            seed: None,
            offset: 0,
            alphabet: s,
        }
    }

    /// Random point: every coordinate is drawn from μ₁, deterministically in
    /// the seed.
    pub fn seeded(seed: u64, sys: &BernoulliSystem) -> Self {
        BernoulliPoint {
            pinned: Arc::new(BTreeMap::new()),
            seed: Some(seed),
            offset: 0,
            alphabet: sys.alphabet_size(),
        }
    }

    pub fn with_extension_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// σ^j of this point (cheap: shares the coordinate data).
    pub fn shifted(&self, j: i64) -> Self {
        let mut p = self.clone();
        p.offset += j;
        p
    }

    pub fn coord(&self, i: i64, sys: &BernoulliSystem) -> Result<usize, DynError> {
        // (σ^o x)_i = x_{i−o}
        let raw = i - self.offset;
        if let Some(&l) = self.pinned.get(&raw) {
            return Ok(l);
        }
        match self.seed {
            Some(seed) => {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ (raw as u64).wrapping_mul(0x9e3779b97f4a7c15));
                Ok(sys.sample_letter(rng.random::<f64>()))
            }
            None => Err(DynError::CoordinateUnavailable(i)),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }
}

/// A point of either system.
#[derive(Debug, Clone)]
pub enum Point {
    Bernoulli(BernoulliPoint),
    Circle(QTheta),
}

/// Product-type cylinder set: per-coordinate admissible letter masks.
/// Unconstrained coordinates admit everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    constraints: BTreeMap<i64, Vec<bool>>,
    alphabet: usize,
}

impl CylinderSet {
    pub fn full(alphabet: usize) -> Self {
        CylinderSet {
            constraints: BTreeMap::new(),
            alphabet,
        }
    }

    /// Constrains coordinate `i` to the given letters.
    pub fn pin(mut self, i: i64, letters: &[usize]) -> Self {
        let mut mask = vec![false; self.alphabet];
        for &l in letters {
            assert!(l < self.alphabet, "letter out of alphabet");
            mask[l] = true;
        }
        self.constraints.insert(i, mask);
        self
    }

    /// Constrains coordinate `i` by C₁ membership (`true`) or its complement.
    pub fn pin_c1(mut self, i: i64, in_c1: bool, sys: &BernoulliSystem) -> Self {
        let mask = (0..self.alphabet)
            .map(|l| sys.in_c1(l) == in_c1)
            .collect();
        self.constraints.insert(i, mask);
        self
    }

    pub fn constraints(&self) -> &BTreeMap<i64, Vec<bool>> {
        &self.constraints
    }

    /// σ^k of the set: x ∈ σᵏA ⟺ σ^{−k}x ∈ A, so coordinate constraints
    /// move from i to i + k.
    pub fn shifted(&self, k: i64) -> Self {
        CylinderSet {
            constraints: self
                .constraints
                .iter()
                .map(|(i, m)| (i + k, m.clone()))
                .collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn intersect(&self, other: &CylinderSet) -> Self {
        assert_eq!(self.alphabet, other.alphabet);
        let mut constraints = self.constraints.clone();
        for (i, m) in &other.constraints {
            constraints
                .entry(*i)
                .and_modify(|mine| {
                    for (a, b) in mine.iter_mut().zip(m) {
                        *a = *a && *b;
                    }
                })
                .or_insert_with(|| m.clone());
        }
        CylinderSet {
            constraints,
            alphabet: self.alphabet,
        }
    }

    /// Exact product measure.
    pub fn measure(&self, sys: &BernoulliSystem) -> BigRational {
        assert_eq!(self.alphabet, sys.alphabet_size());
        let mut acc = BigRational::one();
        for mask in self.constraints.values() {
            let m: BigRational = (0..self.alphabet)
                .filter(|&l| mask[l])
                .map(|l| sys.weight(l).clone())
                .sum();
            if m.is_zero() {
                return BigRational::zero();
            }
            acc *= m;
        }
        acc
    }

    pub fn contains(&self, x: &BernoulliPoint, sys: &BernoulliSystem) -> Result<bool, DynError> {
        for (i, mask) in &self.constraints {
            if !mask[x.coord(*i, sys)?] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Matrix-valued function of finitely many shift coordinates, stored as a
/// total table over its window `[lo, lo + width)`. Word index is
/// little-endian in the alphabet: `idx = Σ_j letter(lo + j) · s^j`.
#[derive(Debug, Clone)]
pub struct MatCylinderFunction {
    lo: i64,
    width: usize,
    alphabet: usize,
    table: Arc<Vec<CMat>>,
}

impl MatCylinderFunction {
    pub fn from_fn(
        lo: i64,
        width: usize,
        alphabet: usize,
        budget: usize,
        f: impl Fn(&[usize]) -> CMat,
    ) -> Result<Self, DynError> {
        let needed = alphabet
            .checked_pow(width as u32)
            .ok_or(DynError::BudgetExceeded {
                needed: usize::MAX,
                budget,
            })?;
        if needed > budget {
            return Err(DynError::BudgetExceeded { needed, budget });
        }
        let mut word = vec![0usize; width];
        let mut table = Vec::with_capacity(needed);
        for idx in 0..needed {
            let mut rest = idx;
            for w in word.iter_mut() {
                *w = rest % alphabet;
                rest /= alphabet;
            }
            table.push(f(&word));
        }
        Ok(MatCylinderFunction {
            lo,
            width,
            alphabet,
            table: Arc::new(table),
        })
    }

    pub fn constant(value: CMat, alphabet: usize) -> Self {
        MatCylinderFunction {
            lo: 0,
            width: 0,
            alphabet,
            table: Arc::new(vec![value]),
        }
    }

    /// Indicator of a cylinder set times a fixed matrix.
    pub fn from_cylinder(set: &CylinderSet, value: CMat, dim: usize) -> Self {
        let zero = CMat::zeros(dim, dim);
        if set.constraints.is_empty() {
            return Self::constant(value, set.alphabet);
        }
        let lo = *set.constraints.keys().next().unwrap();
        let hi = *set.constraints.keys().next_back().unwrap() + 1;
        let width = (hi - lo) as usize;
        Self::from_fn(lo, width, set.alphabet, usize::MAX, |word| {
            let ok = set.constraints.iter().all(|(i, mask)| {
                let j = (i - lo) as usize;
                mask[word[j]]
            });
            if ok {
                value.clone()
            } else {
                zero.clone()
            }
        })
        .unwrap()
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.width as i64)
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn shifted(&self, k: i64) -> Self {
        let mut g = self.clone();
        g.lo += k;
        g
    }

    pub fn eval(&self, x: &BernoulliPoint, sys: &BernoulliSystem) -> Result<CMat, DynError> {
        let mut idx = 0usize;
        let mut mult = 1usize;
        for j in 0..self.width {
            idx += x.coord(self.lo + j as i64, sys)? * mult;
            mult *= self.alphabet;
        }
        Ok(self.table[idx].clone())
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        MatCylinderFunction {
            lo: self.lo,
            width: self.width,
            alphabet: self.alphabet,
            table: Arc::new(self.table.iter().map(f).collect()),
        }
    }

    /// Pointwise combination on the union window.
    pub fn combine(
        &self,
        other: &Self,
        budget: usize,
        f: impl Fn(&CMat, &CMat) -> CMat,
    ) -> Result<Self, DynError> {
        assert_eq!(self.alphabet, other.alphabet);
        let s = self.alphabet;
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.width as i64).max(other.lo + other.width as i64);
        let width = (hi - lo).max(0) as usize;
        let needed = s.checked_pow(width as u32).ok_or(DynError::BudgetExceeded {
            needed: usize::MAX,
            budget,
        })?;
        if needed > budget {
            return Err(DynError::BudgetExceeded { needed, budget });
        }
        let mut word = vec![0usize; width];
        let mut table = Vec::with_capacity(needed);
        for idx in 0..needed {
            let mut rest = idx;
            for w in word.iter_mut() {
                *w = rest % s;
                rest /= s;
            }
            let sub = |g: &Self| -> usize {
                let mut i = 0usize;
                let mut mult = 1usize;
                for j in 0..g.width {
                    let pos = (g.lo - lo) as usize + j;
                    i += word[pos] * mult;
                    mult *= s;
                }
                i
            };
            table.push(f(&self.table[sub(self)], &other.table[sub(other)]));
        }
        Ok(MatCylinderFunction {
            lo,
            width,
            alphabet: s,
            table: Arc::new(table),
        })
    }

    /// Exact expectation against the product measure: Σ over window words of
    /// (product weight) × value. Word order is fixed, so the result is
    /// bit-reproducible and shift-invariant.
    pub fn integrate(&self, sys: &BernoulliSystem) -> CMat {
        assert_eq!(self.alphabet, sys.alphabet_size());
        let dim = self.table[0].nrows();
        let mut acc = CMat::zeros(dim, self.table[0].ncols());
        let mut word = vec![0usize; self.width];
        for (idx, v) in self.table.iter().enumerate() {
            let mut rest = idx;
            let mut weight = BigRational::one();
            for w in word.iter_mut() {
                *w = rest % self.alphabet;
                rest /= self.alphabet;
                weight *= sys.weight(*w);
            }
            acc += v * Complex64::new(weight.to_f64().unwrap(), 0.0);
        }
        acc
    }

    pub fn sup_norm(&self) -> f64 {
        self.table.iter().map(op_norm).fold(0.0, f64::max)
    }
}

/// Matrix-valued step function on the circle.
pub type MatStepFunction = CircleStepFn<CMat>;

/// A matrix-valued observable for either system.
#[derive(Debug, Clone)]
pub enum Obs {
    Bernoulli(MatCylinderFunction),
    Circle(MatStepFunction),
}

impl Obs {
    pub fn constant(sys: &System, value: CMat) -> Obs {
        match sys {
            System::Bernoulli(b) => {
                Obs::Bernoulli(MatCylinderFunction::constant(value, b.alphabet_size()))
            }
            System::Circle(c) => Obs::Circle(MatStepFunction::constant(value, c.theta())),
        }
    }

    pub fn fiber_dim(&self) -> usize {
        match self {
            Obs::Bernoulli(f) => f.table[0].nrows(),
            Obs::Circle(f) => f.values()[0].nrows(),
        }
    }

    pub fn eval(&self, x: &Point, sys: &System) -> Result<CMat, DynError> {
        match (self, x, sys) {
            (Obs::Bernoulli(f), Point::Bernoulli(p), System::Bernoulli(b)) => f.eval(p, b),
            (Obs::Circle(f), Point::Circle(q), _) => Ok(f.eval(q).clone()),
            _ => Err(DynError::KindMismatch),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Obs::Bernoulli(f) => f.sup_norm(),
            Obs::Circle(f) => f.values().iter().map(op_norm).fold(0.0, f64::max),
        }
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Obs {
        match self {
            Obs::Bernoulli(g) => Obs::Bernoulli(g.map(f)),
            Obs::Circle(g) => Obs::Circle(g.map(f)),
        }
    }

    /// Pointwise combination; both observables must live over the same kind
    /// of system.
    pub fn combine(
        &self,
        other: &Obs,
        budget: usize,
        f: impl Fn(&CMat, &CMat) -> CMat,
    ) -> Result<Obs, DynError> {
        match (self, other) {
            (Obs::Bernoulli(a), Obs::Bernoulli(b)) => Ok(Obs::Bernoulli(a.combine(b, budget, f)?)),
            (Obs::Circle(a), Obs::Circle(b)) => Ok(Obs::Circle(a.merge(b, f))),
            _ => Err(DynError::KindMismatch),
        }
    }
}

/// `f ∘ σ^{−k}`, exactly: window re-indexing on the shift side, breakpoint
/// translation by kθ on the circle.
pub fn shift_apply(sys: &System, f: &Obs, k: i64) -> Result<Obs, DynError> {
    match (sys, f) {
        (System::Bernoulli(_), Obs::Bernoulli(g)) => Ok(Obs::Bernoulli(g.shifted(k))),
        (System::Circle(c), Obs::Circle(g)) => {
            // (f∘σ^{−k})(x) = f(x − kθ): arcs move forward by kθ
            let delta = QTheta::theta_mult(BigRational::from(BigInt::from(k)), c.theta());
            Ok(Obs::Circle(g.rotate(&delta)))
        }
        _ => Err(DynError::KindMismatch),
    }
}

fn cmp_mats(a: &CMat, b: &CMat) -> std::cmp::Ordering {
    a.nrows()
        .cmp(&b.nrows())
        .then(a.ncols().cmp(&b.ncols()))
        .then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// `∫ f dμ` as a matrix. Circle arcs are summed in a canonical order
/// (sorted by exact length, then value), so the float result is invariant
/// under any permutation of the arcs; combined with exact arc lengths this
/// makes the integral bit-identical across rotations of f.
pub fn integrate(sys: &System, f: &Obs) -> Result<CMat, DynError> {
    match (sys, f) {
        (System::Bernoulli(b), Obs::Bernoulli(g)) => Ok(g.integrate(b)),
        (System::Circle(_), Obs::Circle(g)) => {
            let mut terms: Vec<(QTheta, &CMat)> =
                g.arcs().into_iter().map(|(_, len, v)| (len, v)).collect();
            terms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| cmp_mats(a.1, b.1)));
            let dim = g.values()[0].nrows();
            let mut acc = CMat::zeros(dim, g.values()[0].ncols());
            for (len, v) in terms {
                acc += v * Complex64::new(len.value(), 0.0);
            }
            Ok(acc)
        }
        _ => Err(DynError::KindMismatch),
    }
}

/// Exact `|μ(A ∩ σᵏB) − μ(A)μ(B)|` for cylinder sets.
pub fn mixing_gap(
    sys: &BernoulliSystem,
    a: &CylinderSet,
    b: &CylinderSet,
    k: i64,
) -> BigRational {
    let joint = a.intersect(&b.shifted(k)).measure(sys);
    let product = a.measure(sys) * b.measure(sys);
    (joint - product).abs()
}

/// `(c, d)` with `c = #{0 ≤ i < k : σ^{−i}x ∈ C}` and `c + d = k`.
pub fn count_cd(sys: &System, x: &Point, k: u64) -> Result<(u64, u64), DynError> {
    let c = match (sys, x) {
        (System::Bernoulli(b), Point::Bernoulli(p)) => {
            let mut c = 0u64;
            for i in 0..k as i64 {
                if b.in_c1(p.coord(i, b)?) {
                    c += 1;
                }
            }
            c
        }
        (System::Circle(cs), Point::Circle(q)) => {
            crate::numtheory::rotation_count(cs.theta(), q, k)
        }
        _ => return Err(DynError::KindMismatch),
    };
    Ok((c, k - c))
}

/// Exhaustiveness certificate for the special cylinder: the count-residue
/// pairs `(c(x,k) mod n, d(x,k) mod n)` observed at each k, and the k at
/// which all n² pairs had appeared.
#[derive(Debug, Clone)]
pub struct ResidueCertificate {
    pub n: usize,
    pub pairs_in_order: Vec<(u64, u64)>,
    pub k_complete: u64,
}

impl ResidueCertificate {
    pub fn distinct_pairs(&self) -> usize {
        let set: std::collections::BTreeSet<_> = self.pairs_in_order.iter().collect();
        set.len()
    }
}

/// The cylinder S on coordinates `0 .. n²`: a block of n letters in C₁,
/// then n−1 repetitions of (one letter out of C₁ followed by n−1 in C₁).
/// Along any point of S the pairs `(c(x,k) mod n, d(x,k) mod n)` for
/// k = 0, 1, 2, … sweep out all of ℤ/n × ℤ/n; the certificate records the
/// k-range needed, which is exactly 0 ..= n².
pub fn special_cylinder_s(
    n: usize,
    sys: &BernoulliSystem,
) -> Result<(CylinderSet, ResidueCertificate), DynError> {
    if n < 2 {
        return Err(DynError::Domain("fiber dimension must be ≥ 2".into()));
    }
    let mut pattern: Vec<bool> = Vec::with_capacity(n * n);
    pattern.extend(std::iter::repeat_n(true, n));
    for _ in 0..n - 1 {
        pattern.push(false);
        pattern.extend(std::iter::repeat_n(true, n - 1));
    }
    debug_assert_eq!(pattern.len(), n * n);
    let mut set = CylinderSet::full(sys.alphabet_size());
    for (i, &inside) in pattern.iter().enumerate() {
        set = set.pin_c1(i as i64, inside, sys);
    }
    let nn = n as u64;
    let mut seen = std::collections::BTreeSet::new();
    let mut pairs_in_order = Vec::new();
    let mut c = 0u64;
    let mut k_complete = None;
    for k in 0..=(n * n) as u64 {
        let d = k - c;
        let pair = (c % nn, d % nn);
        pairs_in_order.push(pair);
        seen.insert(pair);
        if seen.len() == n * n && k_complete.is_none() {
            k_complete = Some(k);
        }
        if (k as usize) < pattern.len() && pattern[k as usize] {
            c += 1;
        }
    }
    let k_complete = k_complete.expect("residue sweep always completes by k = n²");
    Ok((
        set,
        ResidueCertificate {
            n,
            pairs_in_order,
            k_complete,
        },
    ))
}

/// Uniform random circle point with exact dyadic coordinates.
pub fn random_circle_point(theta: &Theta, rng: &mut impl Rng) -> QTheta {
    let bits: u64 = rng.random::<u64>() >> 11; // 53 bits
    QTheta::from_rational(
        BigRational::new(BigInt::from(bits), BigInt::from(1u64 << 53)),
        theta,
    )
}
