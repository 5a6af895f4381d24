//! Dense symmetric eigendecomposition and the Chebyshev propagator.
//!
//! The eigensolver is the classic Householder tridiagonalization followed by
//! implicit QL iterations with Wilkinson-style shifts. Eigenvectors are
//! accumulated so that `A = Q diag(values) Q^T`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::graph::Graph;
use crate::{Error, Result};

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    n: usize,
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    /// Decomposes the row-major symmetric matrix `a` of size `n x n`.
    ///
    /// Only the lower triangle is read.
    pub fn new(a: &[f64], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n, "matrix storage does not match its size");
        if n == 0 {
            return Ok(SymmetricEigen { n, values: Vec::new(), vectors: Vec::new() });
        }
        let mut v = a.to_vec();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tridiagonalize(&mut v, &mut d, &mut e, n);
        ql_implicit(&mut v, &mut d, &mut e, n)?;
        sort_ascending(&mut v, &mut d, n);
        Ok(SymmetricEigen { n, values: d, vectors: v })
    }

    /// Decomposes the adjacency matrix of `g`.
    pub fn of_graph(g: &Graph) -> Result<Self> {
        SymmetricEigen::new(&g.dense_adjacency(), g.node_count())
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Component `i` of eigenvector `j`.
    #[inline]
    pub fn vector(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.n + j]
    }

    /// Applies `Q exp(-i diag(values) t) Q^T` to `psi`.
    pub fn propagate(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(psi.len(), n);
        // Spectral coefficients c_j = (Q^T psi)_j, rotated by the phase.
        let mut coeff = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in psi.iter().enumerate() {
            if p.re == 0.0 && p.im == 0.0 {
                continue;
            }
            let row = &self.vectors[i * n..(i + 1) * n];
            for (c, &q) in coeff.iter_mut().zip(row) {
                *c += p * q;
            }
        }
        for (c, &lambda) in coeff.iter_mut().zip(&self.values) {
            let phase = -lambda * t;
            *c *= Complex64::new(libm::cos(phase), libm::sin(phase));
        }
        (0..n)
            .map(|i| {
                let row = &self.vectors[i * n..(i + 1) * n];
                row.iter().zip(&coeff).fold(Complex64::new(0.0, 0.0), |acc, (&q, &c)| acc + c * q)
            })
            .collect()
    }
}

fn tridiagonalize(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    let at = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &dk in &d[..i] {
            scale += libm::fabs(dk);
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn ql_implicit(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) -> Result<()> {
    const MAX_SWEEPS: usize = 64;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(libm::fabs(d[l]) + libm::fabs(e[l]));
        let mut m = l;
        while m < n {
            if libm::fabs(e[m]) <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let row = k * n;
                        h = v[row + i + 1];
                        v[row + i + 1] = s * v[row + i] + c * h;
                        v[row + i] = c * v[row + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if libm::fabs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sort_ascending(v: &mut [f64], d: &mut [f64], n: usize) {
    // Selection sort keeps the column swaps to at most n - 1.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in 0..n {
                v.swap(row * n + i, row * n + k);
            }
        }
    }
}

/// Bessel functions `J_0(z), ..., J_order(z)` for `z >= 0`.
///
/// Miller's backward recurrence normalized with `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j_sequence(z: f64, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = order.max(libm::ceil(z) as usize);
    let mut start = top + libm::sqrt(160.0 * top as f64) as usize + 16;
    start += start % 2;
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / z * j[k] - j[k + 1];
        if libm::fabs(j[k - 1]) > 1e250 {
            for x in &mut j[k - 1..] {
                *x *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    let mut k = 2;
    while k <= start {
        norm += 2.0 * j[k];
        k += 2;
    }
    for (o, x) in out.iter_mut().zip(&j) {
        *o = x / norm;
    }
    out
}

/// Applies `exp(-i A t)` to `psi` through a Chebyshev expansion of the
/// sparse adjacency matrix.
///
/// With `A = rho B` and `spec(B) ⊂ [-1, 1]`,
/// `exp(-i rho t B) = J_0(rho t) + 2 sum_k (-i)^k J_k(rho t) T_k(B)`.
/// `rho` is the maximum degree (a Gershgorin bound). The series is cut once
/// the coefficients fall below `1e-17` past the turning point `k > rho t`.
pub fn chebyshev_propagate(g: &Graph, psi: &[Complex64], t: f64) -> Vec<Complex64> {
    let n = g.node_count();
    assert_eq!(psi.len(), n);
    let rho = g.max_degree() as f64;
    let z = rho * t;
    if z == 0.0 {
        return psi.to_vec();
    }
    let order = libm::ceil(z + 20.0 * libm::cbrt(z) + 40.0) as usize;
    let bessel = bessel_j_sequence(z, order);

    let apply = |x: &[Complex64], out: &mut [Complex64]| {
        for (u, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &w in g.neighbors(u) {
                acc += x[w];
            }
            *o = acc / rho;
        }
    };

    let mut result: Vec<Complex64> = psi.iter().map(|&p| p * bessel[0]).collect();
    let mut prev = psi.to_vec();
    let mut cur = vec![Complex64::new(0.0, 0.0); n];
    apply(&prev, &mut cur);
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    // (-i)^k cycles through 1, -i, -1, i.
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    for k in 1..=order {
        let jk = bessel[k];
        if k as f64 > z && libm::fabs(jk) < 1e-17 {
            break;
        }
        let coeff = phases[k % 4] * (2.0 * jk);
        for (r, &c) in result.iter_mut().zip(&cur) {
            *r += coeff * c;
        }
        apply(&cur, &mut next);
        for (nx, &p) in next.iter_mut().zip(&prev) {
            *nx = 2.0 * *nx - p;
        }
        core::mem::swap(&mut prev, &mut cur);
        core::mem::swap(&mut cur, &mut next);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(eig: &SymmetricEigen) -> Vec<f64> {
        let n = eig.dim();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] =
                    (0..n).map(|k| eig.vector(i, k) * eig.values[k] * eig.vector(j, k)).sum();
            }
        }
        a
    }

    #[test]
    fn reconstructs_small_matrix() {
        let a = [4.0, 1.0, -2.0, 1.0, 2.0, 0.5, -2.0, 0.5, 3.0];
        let eig = SymmetricEigen::new(&a, 3).unwrap();
        for (x, y) in reconstruct(&eig).iter().zip(&a) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn one_by_one() {
        let eig = SymmetricEigen::new(&[2.5], 1).unwrap();
        assert_eq!(eig.values, [2.5]);
        assert_eq!(eig.vectors, [1.0]);
    }

    #[test]
    fn star_nine_leaves() {
        let eig = SymmetricEigen::of_graph(&Graph::star(9)).unwrap();
        assert!((eig.values[0] + 3.0).abs() < 1e-12);
        assert!((eig.values[9] - 3.0).abs() < 1e-12);
        for &x in &eig.values[1..9] {
            assert!(x.abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 3), (1, 4)]).unwrap();
        let eig = SymmetricEigen::of_graph(&g).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let dot: f64 = (0..6).map(|i| eig.vector(i, a) * eig.vector(i, b)).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bessel_reference_values() {
        // Abramowitz & Stegun table 9.1.
        let j = bessel_j_sequence(1.0, 3);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((j[2] - 0.114_903_484_931_900_5).abs() < 1e-14);
        let j = bessel_j_sequence(10.0, 1);
        assert!((j[0] + 0.245_935_764_451_348_3).abs() < 1e-13);
        assert!((j[1] - 0.043_472_746_168_861_4).abs() < 1e-13);
    }

    #[test]
    fn bessel_large_argument_normalized() {
        let z = 2500.0;
        let j = bessel_j_sequence(z, 2700);
        let sum: f64 = j[0] + 2.0 * j[2..].iter().step_by(2).sum::<f64>();
        assert!((sum - 1.0).abs() < 1e-12);
        // Asymptotic form J_0(z) ~ sqrt(2 / (pi z)) cos(z - pi/4).
        let approx = (2.0 / (core::f64::consts::PI * z)).sqrt()
            * (z - core::f64::consts::FRAC_PI_4).cos();
        assert!((j[0] - approx).abs() < 1e-5);
    }

    #[test]
    fn chebyshev_matches_spectral() {
        let g = Graph::new(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (4, 6), (2, 5)]).unwrap();
        let eig = SymmetricEigen::of_graph(&g).unwrap();
        let mut psi = vec![Complex64::new(0.0, 0.0); 7];
        psi[2] = Complex64::new(0.6, 0.0);
        psi[5] = Complex64::new(0.0, 0.8);
        for &t in &[0.0, 0.01, 0.5, 3.0, 40.0, 400.0] {
            let a = eig.propagate(&psi, t);
            let b = chebyshev_propagate(&g, &psi, t);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-10, "t={t}: {x} vs {y}");
            }
        }
    }
}
