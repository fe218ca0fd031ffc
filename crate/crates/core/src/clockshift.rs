//! The clock/shift pair of unitaries and the small dense complex linear
//! algebra the rest of the crate leans on.
//!
//! `u = diag(1, ω, …, ω^{n−1})` and the cyclic shift `v` satisfy
//! `v u v* = ω u` with `ω = e^{2πi/n}`, and together they generate all of
//! `M_n`: the joint commutant is trivial. The four sandwich maps
//! `φ_1 = u·u*, φ_2 = v·v*, φ_3 = u·v*, φ_4 = v·u*` (left/right
//! multiplication) obey ω-commutation relations that the tests pin down.
//!
//! Eigendecompositions here are only ever needed for unitary matrices of
//! modest size, so instead of pulling in a LAPACK backend the solver is a
//! cyclic complex Jacobi iteration on the Hermitian parts: eigenvectors come
//! out orthonormal by construction, which the k-th root and trivialization
//! code depend on.

use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::Rng;
use thiserror::Error;

pub type CMat = DMatrix<Complex64>;
pub type CVec = nalgebra::DVector<Complex64>;

#[derive(Debug, Error)]
pub enum ClockError {
    #[error("dimension must be ≥ 1")]
    BadDimension,
    #[error("matrix is not square of the expected size")]
    BadShape,
    #[error("matrix is not unitary within tolerance (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("eigensolver did not certify the decomposition (residual {0:.3e})")]
    EigResidual(f64),
    #[error("k must be ≥ 1")]
    BadRootOrder,
}

/// The clock/shift pair in dimension n.
#[derive(Debug, Clone)]
pub struct ClockPair {
    pub n: usize,
    pub omega: Complex64,
    pub u: CMat,
    pub v: CMat,
}

impl ClockPair {
    pub fn new(n: usize) -> Result<Self, ClockError> {
        if n == 0 {
            return Err(ClockError::BadDimension);
        }
        let omega = root_of_unity(n, 1);
        let mut u = CMat::zeros(n, n);
        let mut v = CMat::zeros(n, n);
        for j in 0..n {
            u[(j, j)] = root_of_unity(n, j as i64);
            v[((j + n - 1) % n, j)] = Complex64::new(1.0, 0.0);
        }
        Ok(ClockPair { n, omega, u, v })
    }

    /// `u^a v^b` for integer exponents (negative allowed).
    pub fn word(&self, a: i64, b: i64) -> CMat {
        let n = self.n as i64;
        let a = a.rem_euclid(n) as usize;
        let b = b.rem_euclid(n) as usize;
        let mut m = CMat::identity(self.n, self.n);
        for _ in 0..a {
            m = &self.u * m;
        }
        for _ in 0..b {
            m = &self.v * m;
        }
        m
    }
}

/// ω^k for the n-th root of unity, exact at the f64 level via sin/cos.
pub fn root_of_unity(n: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(n as i64);
    let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
    Complex64::new(ang.cos(), ang.sin())
}

/// The four sandwich maps: 1 ↦ uζu*, 2 ↦ vζv*, 3 ↦ uζv*, 4 ↦ vζu*.
pub fn phi_apply(pair: &ClockPair, which: usize, zeta: &CMat) -> CMat {
    match which {
        1 => &pair.u * zeta * pair.u.adjoint(),
        2 => &pair.v * zeta * pair.v.adjoint(),
        3 => &pair.u * zeta * pair.v.adjoint(),
        4 => &pair.v * zeta * pair.u.adjoint(),
        _ => panic!("phi index must be 1..=4"),
    }
}

fn phi_pow(pair: &ClockPair, which: usize, zeta: &CMat, k: usize) -> CMat {
    let mut m = zeta.clone();
    for _ in 0..k {
        m = phi_apply(pair, which, &m);
    }
    m
}

/// Largest residual over the ω-commutation relations of the sandwich maps,
/// evaluated on the given test matrices:
/// `φ_i^n = id`, `φ_1φ_2 = φ_2φ_1`, `φ_1φ_3 = ω φ_3φ_1`,
/// `φ_1φ_4 = ω̄ φ_4φ_1`, `φ_2φ_3 = ω φ_3φ_2`, `φ_2φ_4 = ω̄ φ_4φ_2`,
/// `φ_3φ_4 = ω̄² φ_4φ_3`, and `φ_3^k(ζ) = u^k ζ u^{-k} · u^k v^{-k}`.
pub fn phi_relations_check(pair: &ClockPair, zetas: &[CMat]) -> f64 {
    let om = pair.omega;
    let pairs: [(usize, usize, Complex64); 5] = [
        (1, 2, Complex64::new(1.0, 0.0)),
        (1, 3, om),
        (1, 4, om.conj()),
        (2, 3, om),
        (2, 4, om.conj()),
    ];
    let mut worst: f64 = 0.0;
    for z in zetas {
        for i in 1..=4 {
            let back = phi_pow(pair, i, z, pair.n);
            worst = worst.max(op_norm(&(&back - z)));
        }
        for &(i, j, scale) in &pairs {
            let lhs = phi_apply(pair, i, &phi_apply(pair, j, z));
            let rhs = phi_apply(pair, j, &phi_apply(pair, i, z)) * scale;
            worst = worst.max(op_norm(&(lhs - rhs)));
        }
        // φ_3 φ_4 = ω̄² φ_4 φ_3
        let lhs = phi_apply(pair, 3, &phi_apply(pair, 4, z));
        let rhs = phi_apply(pair, 4, &phi_apply(pair, 3, z)) * (om * om).conj();
        worst = worst.max(op_norm(&(lhs - rhs)));
        // closed form of φ_3 powers
        for k in 0..=pair.n {
            let lhs = phi_pow(pair, 3, z, k);
            let uk = pair.word(k as i64, 0);
            let vmk = pair.word(0, -(k as i64));
            let rhs = (&uk * z * uk.adjoint()) * (uk * vmk);
            worst = worst.max(op_norm(&(lhs - rhs)));
        }
    }
    worst
}

/// The order-two unitary exchanging `u` and `v` by conjugation; only exists
/// in dimension 2.
pub fn swap_unitary(pair: &ClockPair) -> Option<CMat> {
    if pair.n != 2 {
        return None;
    }
    let s = 1.0 / 2.0_f64.sqrt();
    Some(CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
        ],
    ))
}

/// Orbit of `t0` under conjugation by all words `u^a v^b`, deduplicated.
pub fn gamma_orbit(pair: &ClockPair, t0: &CMat, tol: f64) -> Vec<CMat> {
    let mut orbit: Vec<CMat> = Vec::new();
    for a in 0..pair.n {
        for b in 0..pair.n {
            let w = pair.word(a as i64, b as i64);
            let conj = &w * t0 * w.adjoint();
            if !orbit.iter().any(|m| sup_dist(m, &conj) < tol) {
                orbit.push(conj);
            }
        }
    }
    orbit
}

pub fn sup_dist(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dimension of the joint commutant `{X : XM = MX for all M}` inside M_n.
pub fn commutant_dim(mats: &[CMat]) -> Result<usize, ClockError> {
    if mats.is_empty() {
        return Err(ClockError::BadShape);
    }
    let n = mats[0].nrows();
    if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(ClockError::BadShape);
    }
    let nn = n * n;
    let mut rows = CMat::zeros(mats.len() * nn, nn);
    for (s, m) in mats.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = s * nn + i * n + j;
                // (MX − XM)_{ij} = Σ_a M_{ia} X_{aj} − Σ_b X_{ib} M_{bj}
                for a in 0..n {
                    rows[(row, a * n + j)] += m[(i, a)];
                }
                for b in 0..n {
                    rows[(row, i * n + b)] -= m[(b, j)];
                }
            }
        }
    }
    Ok(nn - rank(&rows, 1e-10))
}

/// Numerical rank by Gaussian elimination with partial pivoting.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let tol = rel_tol * scale * (rows.max(cols) as f64);
    let mut rank = 0usize;
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let mut best = pivot_row;
        let mut best_val = 0.0;
        for r in pivot_row..rows {
            let v = a[(r, col)].norm();
            if v > best_val {
                best_val = v;
                best = r;
            }
        }
        if best_val <= tol {
            continue;
        }
        a.swap_rows(pivot_row, best);
        let inv = Complex64::new(1.0, 0.0) / a[(pivot_row, col)];
        for r in pivot_row + 1..rows {
            let f = a[(r, col)] * inv;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..cols {
                let sub = f * a[(pivot_row, c)];
                a[(r, c)] -= sub;
            }
        }
        rank += 1;
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
/// rotations. Returns `(Q, eigenvalues)` with `Q` unitary (orthonormal
/// columns by construction) and eigenvalues ascending.
pub fn hermitian_eig(h: &CMat) -> (CMat, Vec<f64>) {
    let n = h.nrows();
    assert_eq!(n, h.ncols());
    let mut a = h.clone();
    let mut q = CMat::identity(n, n);
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for r in p + 1..n {
                off = off.max(a[(p, r)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let z = a[(p, r)];
                if z.norm() <= tol * 1e-2 {
                    continue;
                }
                let app = a[(p, p)].re;
                let arr = a[(r, r)].re;
                let phase = z.conj() / z.norm(); // e^{iα} with z·e^{iα} = |z|
                let tau = (arr - app) / (2.0 * z.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J: [p,p]=c, [p,r]=s, [r,p]=−s·u₁, [r,r]=c·u₁  (u₁ = phase)
                let u1 = phase;
                // A ← J^H A J
                for i in 0..n {
                    let aip = a[(i, p)];
                    let air = a[(i, r)];
                    a[(i, p)] = aip * c - air * u1 * s;
                    a[(i, r)] = aip * s + air * u1 * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let arj = a[(r, j)];
                    a[(p, j)] = apj * c - arj * u1.conj() * s;
                    a[(r, j)] = apj * s + arj * u1.conj() * c;
                }
                for i in 0..n {
                    let qip = q[(i, p)];
                    let qir = q[(i, r)];
                    q[(i, p)] = qip * c - qir * u1 * s;
                    q[(i, r)] = qip * s + qir * u1 * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let qs = CMat::from_fn(n, n, |i, j| q[(i, order[j])]);
    let es = order.iter().map(|&i| eig[i]).collect();
    (qs, es)
}

/// Spectral decomposition of a unitary matrix: `(Q, λ)` with `Q` unitary and
/// `p = Q diag(λ) Q*`. Works through the commuting Hermitian parts
/// `(p + p*)/2` and `(p − p*)/2i`, splitting clustered cosine eigenvalues by
/// the sine part, so conjugate eigenvalue pairs separate cleanly.
pub fn unitary_eig(p: &CMat) -> Result<(CMat, Vec<Complex64>), ClockError> {
    let n = p.nrows();
    if n != p.ncols() {
        return Err(ClockError::BadShape);
    }
    let id = CMat::identity(n, n);
    let uni_res = op_norm(&(p * p.adjoint() - &id));
    if uni_res > 1e-8 {
        return Err(ClockError::NotUnitary(uni_res));
    }
    let h = (p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let k = (p - p.adjoint()) * Complex64::new(0.0, -0.5);
    let mut best: Option<(CMat, Vec<Complex64>, f64)> = None;
    for gap in [1e-7, 1e-5, 1e-10] {
        let (q, vals) = hermitian_eig(&h);
        let mut q = q;
        // cluster cosine-equal eigenvalues, then split each cluster by K
        let mut start = 0usize;
        while start < n {
            let mut end = start + 1;
            while end < n && (vals[end] - vals[end - 1]).abs() <= gap {
                end += 1;
            }
            if end - start > 1 {
                let block = q.columns(start, end - start).into_owned();
                let kb = block.adjoint() * &k * &block;
                let (qk, _) = hermitian_eig(&kb);
                let rotated = block * qk;
                q.columns_mut(start, end - start).copy_from(&rotated);
            }
            start = end;
        }
        let mut lambda = Vec::with_capacity(n);
        for j in 0..n {
            let col = q.column(j);
            let mut mu = Complex64::new(0.0, 0.0);
            // μ = q_j^H p q_j
            let pq = p * col;
            for i in 0..n {
                mu += col[i].conj() * pq[i];
            }
            let norm = mu.norm();
            lambda.push(if norm > 0.0 { mu / norm } else { Complex64::new(1.0, 0.0) });
        }
        let lam = CMat::from_fn(n, n, |i, j| {
            if i == j {
                lambda[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let res = op_norm(&(p * &q - &q * lam));
        if res < 1e-10 * (n as f64) {
            return Ok((q, lambda));
        }
        if best.as_ref().map(|b| res < b.2).unwrap_or(true) {
            best = Some((q, lambda, res));
        }
    }
    let (q, lambda, res) = best.unwrap();
    if res < 1e-8 * (n as f64) {
        Ok((q, lambda))
    } else {
        Err(ClockError::EigResidual(res))
    }
}

/// Principal k-th root of a unitary matrix: each eigenvalue `e^{iφ}` with
/// `φ ∈ (−π, π]` maps to `e^{iφ/k}`.
pub fn matrix_kth_root(p: &CMat, k: u32) -> Result<CMat, ClockError> {
    if k == 0 {
        return Err(ClockError::BadRootOrder);
    }
    let (q, lambda) = unitary_eig(p)?;
    let n = p.nrows();
    let root = CMat::from_fn(n, n, |i, j| {
        if i == j {
            let phi = lambda[i].arg(); // (−π, π]
            Complex64::from_polar(1.0, phi / k as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(&q * root * q.adjoint())
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    let gram = m.adjoint() * m;
    let (_, eig) = hermitian_eig(&gram);
    eig.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Haar-ish random unitary: complex Gaussian entries then modified
/// Gram-Schmidt. Deterministic given the RNG state.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let mut m = CMat::from_fn(n, n, |_, _| {
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::new(
            r * (2.0 * std::f64::consts::PI * u2).cos(),
            r * (2.0 * std::f64::consts::PI * u2).sin(),
        )
    });
    for j in 0..n {
        for i in 0..j {
            let qi = m.column(i).into_owned();
            let mut dot = Complex64::new(0.0, 0.0);
            for r in 0..n {
                dot += qi[r].conj() * m[(r, j)];
            }
            for r in 0..n {
                let sub = dot * qi[r];
                m[(r, j)] -= sub;
            }
        }
        let norm: f64 = m.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            m[(r, j)] /= Complex64::new(norm, 0.0);
        }
    }
    m
}

/// Random Hermitian matrix with entries of unit scale (test helper).
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize, j: usize, n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    #[test]
    fn clock_shift_relation_all_n() {
        for n in 1..=8 {
            let pair = ClockPair::new(n).unwrap();
            let lhs = &pair.v * &pair.u * pair.v.adjoint();
            let rhs = &pair.u * pair.omega;
            assert!(op_norm(&(lhs - rhs)) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn n2_pair_is_pauli_z_and_x() {
        let pair = ClockPair::new(2).unwrap();
        assert!((pair.u[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((pair.u[(1, 1)] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((pair.v[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((pair.v[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn joint_commutant_is_trivial_and_single_clock_is_diagonal() {
        for n in 1..=6 {
            let pair = ClockPair::new(n).unwrap();
            assert_eq!(
                commutant_dim(&[pair.u.clone(), pair.v.clone()]).unwrap(),
                1,
                "n = {n}"
            );
        }
        let pair = ClockPair::new(3).unwrap();
        assert_eq!(commutant_dim(std::slice::from_ref(&pair.u)).unwrap(), 3);
    }

    #[test]
    fn gamma_orbit_of_e11_in_dim2() {
        let pair = ClockPair::new(2).unwrap();
        let orbit = gamma_orbit(&pair, &e(0, 0, 2), 1e-9);
        assert_eq!(orbit.len(), 2);
        assert!(sup_dist(&orbit[0], &e(0, 0, 2)) < 1e-12);
        assert!(sup_dist(&orbit[1], &e(1, 1, 2)) < 1e-12);
    }

    #[test]
    fn swap_unitary_exchanges_u_and_v() {
        let pair = ClockPair::new(2).unwrap();
        let z = swap_unitary(&pair).unwrap();
        let zu = &z * &pair.u * z.adjoint();
        let zv = &z * &pair.v * z.adjoint();
        assert!(op_norm(&(zu - &pair.v)) < 1e-12);
        assert!(op_norm(&(zv - &pair.u)) < 1e-12);
    }

    #[test]
    fn phi_relations_hold_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5 {
            let pair = ClockPair::new(n).unwrap();
            let zetas: Vec<CMat> = (0..5).map(|_| random_hermitian(n, &mut rng)).collect();
            assert!(phi_relations_check(&pair, &zetas) <= 1e-10, "n = {n}");
        }
    }

    #[test]
    fn hermitian_eig_recovers_diagonal() {
        let mut d = CMat::zeros(3, 3);
        d[(0, 0)] = Complex64::new(2.0, 0.0);
        d[(1, 1)] = Complex64::new(-1.0, 0.0);
        d[(2, 2)] = Complex64::new(0.5, 0.0);
        let (q, eig) = hermitian_eig(&d);
        assert!((eig[0] + 1.0).abs() < 1e-12);
        assert!((eig[1] - 0.5).abs() < 1e-12);
        assert!((eig[2] - 2.0).abs() < 1e-12);
        assert!(op_norm(&(&q * q.adjoint() - CMat::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn hermitian_eig_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 4, 7] {
            let h = random_hermitian(n, &mut rng);
            let (q, eig) = hermitian_eig(&h);
            let lam = CMat::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(eig[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let res = op_norm(&(&q * lam * q.adjoint() - &h));
            assert!(res < 1e-11, "n = {n}, res = {res:e}");
        }
    }

    #[test]
    fn square_root_of_minus_identity_is_i() {
        let m = CMat::identity(2, 2) * Complex64::new(-1.0, 0.0);
        let z = matrix_kth_root(&m, 2).unwrap();
        let expect = CMat::identity(2, 2) * Complex64::new(0.0, 1.0);
        assert!(op_norm(&(z - expect)) < 1e-12);
    }

    #[test]
    fn kth_root_reconstructs_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 4] {
            for k in [1u32, 2, 5, 8] {
                let p = random_unitary(n, &mut rng);
                let z = matrix_kth_root(&p, k).unwrap();
                let mut zk = CMat::identity(n, n);
                for _ in 0..k {
                    zk = &zk * &z;
                }
                assert!(op_norm(&(zk - &p)) < 1e-10, "n = {n}, k = {k}");
                assert!(
                    op_norm(&(&z * z.adjoint() - CMat::identity(n, n))) < 1e-10,
                    "root stays unitary"
                );
            }
        }
    }

    #[test]
    fn unitary_eig_handles_conjugate_pairs() {
        // rotation block has eigenvalues e^{±iπ/3}: equal cosines
        let c = (std::f64::consts::PI / 3.0).cos();
        let s = (std::f64::consts::PI / 3.0).sin();
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = Complex64::new(c, 0.0);
        m[(0, 1)] = Complex64::new(-s, 0.0);
        m[(1, 0)] = Complex64::new(s, 0.0);
        m[(1, 1)] = Complex64::new(c, 0.0);
        let (q, lambda) = unitary_eig(&m).unwrap();
        let lam = CMat::from_fn(2, 2, |i, j| {
            if i == j {
                lambda[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(op_norm(&(&m * &q - &q * lam)) < 1e-11);
        let mut phases: Vec<f64> = lambda.iter().map(|l| l.arg()).collect();
        phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((phases[0] + std::f64::consts::PI / 3.0).abs() < 1e-11);
        assert!((phases[1] - std::f64::consts::PI / 3.0).abs() < 1e-11);
    }

    #[test]
    fn op_norm_of_projection_is_one() {
        assert!((op_norm(&e(0, 0, 3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_detects_dependent_rows() {
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(2.0, 0.0);
        m[(1, 0)] = Complex64::new(2.0, 0.0);
        m[(1, 1)] = Complex64::new(4.0, 0.0);
        m[(2, 2)] = Complex64::new(1.0, 0.0);
        assert_eq!(rank(&m, 1e-10), 2);
    }
}
