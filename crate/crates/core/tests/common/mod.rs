//! Independent reference implementations used only by the tests. None of
//! them call into the library's numerics: eigenvalues come from a cyclic
//! complex Jacobi sweep, means from a Cholesky factorization, and the
//! characteristic polynomial from the Faddeev–LeVerrier recursion.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};

pub type C = Complex<f64>;
pub type M = DMatrix<C>;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix by cyclic
/// Jacobi rotations.
pub fn jacobi_eigh(a: &M) -> (Vec<f64>, M) {
    let n = a.nrows();
    let mut a = (a + a.adjoint()) * c(0.5);
    let mut v = M::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]] on coordinates p, q
                let g = [[c(cs), c(sn)], [-phase.conj() * sn, phase.conj() * cs]];
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * g[0][0] + y * g[1][0];
                    a[(k, q)] = x * g[0][1] + y * g[1][1];
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * g[0][0] + y * g[1][0];
                    v[(k, q)] = x * g[0][1] + y * g[1][1];
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = g[0][0].conj() * x + g[1][0].conj() * y;
                    a[(q, k)] = g[0][1].conj() * x + g[1][1].conj() * y;
                }
                a[(p, q)] = c(0.0);
                a[(q, p)] = c(0.0);
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let vals = idx.iter().map(|&i| a[(i, i)].re).collect();
    let vecs = M::from_fn(n, n, |r, k| v[(r, idx[k])]);
    (vals, vecs)
}

/// `f(A)` through the Jacobi decomposition.
pub fn jacobi_fn(a: &M, f: impl Fn(f64) -> f64) -> M {
    let (vals, u) = jacobi_eigh(a);
    let mut scaled = u.clone();
    for (j, &l) in vals.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= f(l);
        }
    }
    let out = scaled * u.adjoint();
    (&out + out.adjoint()) * c(0.5)
}

/// Lower-triangular `L` with `A = L L*`.
pub fn cholesky(a: &M) -> M {
    let n = a.nrows();
    let mut l = M::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        assert!(d > 0.0, "cholesky: matrix not positive definite");
        let d = d.sqrt();
        l[(j, j)] = c(d);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    l
}

/// Inverse of a lower-triangular matrix by forward substitution.
pub fn lower_inverse(l: &M) -> M {
    let n = l.nrows();
    let mut inv = M::zeros(n, n);
    for col in 0..n {
        for i in 0..n {
            let mut s = if i == col { c(1.0) } else { c(0.0) };
            for k in 0..i {
                s -= l[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = s / l[(i, i)];
        }
    }
    inv
}

/// `A #_t B = L (L⁻¹ B L⁻*)ᵗ L*` with `A = L L*`.
pub fn geomean_cholesky(a: &M, b: &M, t: f64) -> M {
    let l = cholesky(a);
    let li = lower_inverse(&l);
    let inner = &li * b * li.adjoint();
    let p = jacobi_fn(&inner, |x| x.powf(t));
    let out = &l * p * l.adjoint();
    (&out + out.adjoint()) * c(0.5)
}

/// `A^{1/2} (A^{-1/2} B A^{-1/2})ᵗ A^{1/2}` with every matrix function taken
/// through the Jacobi decomposition.
pub fn geomean_eigen_path(a: &M, b: &M, t: f64) -> M {
    let half = jacobi_fn(a, f64::sqrt);
    let inv_half = jacobi_fn(a, |v| 1.0 / v.sqrt());
    let inner = &inv_half * b * &inv_half;
    let out = &half * jacobi_fn(&inner, |v| v.powf(t)) * &half;
    (&out + out.adjoint()) * c(0.5)
}

/// `A #_t B` for `A = U diag(a) U*`, `B = U diag(b) U*`.
pub fn geomean_commuting(u: &M, a: &[f64], b: &[f64], t: f64) -> M {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.powf(1.0 - t) * y.powf(t)).collect();
    compose(u, &d)
}

pub fn compose(u: &M, d: &[f64]) -> M {
    let mut scaled = u.clone();
    for (j, &x) in d.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= x;
        }
    }
    let out = scaled * u.adjoint();
    (&out + out.adjoint()) * c(0.5)
}

/// Coefficients `c₀ … cₙ` (with `cₙ = 1`) of `det(λI − A)` by the
/// Faddeev–LeVerrier recursion.
pub fn faddeev_leverrier(a: &M) -> Vec<C> {
    let n = a.nrows();
    let mut coeffs = vec![c(0.0); n + 1];
    coeffs[n] = c(1.0);
    let mut mk = M::zeros(n, n);
    for k in 1..=n {
        mk = a * &mk + M::identity(n, n) * coeffs[n - k + 1];
        coeffs[n - k] = -(a * &mk).trace() / k as f64;
    }
    coeffs
}

/// Elementary symmetric polynomials `e₀ … eₙ` of `x`.
pub fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (i, &v) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e
}

/// Frobenius-relative difference.
pub fn rel(a: &M, b: &M) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Central-difference Hessian of `f` at `x` with step `h`.
#[allow(clippy::needless_range_loop)]
pub fn fd_hessian(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let d = x.len();
    let at = |di: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, s) in di {
            y[i] += s;
        }
        f(&y)
    };
    let mut hess = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let v = if i == j {
                (at(&[(i, h)]) - 2.0 * f(x) + at(&[(i, -h)])) / (h * h)
            } else {
                (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)]) + at(&[(i, -h), (j, -h)])) / (4.0 * h * h)
            };
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess
}

/// Smallest eigenvalue of a real symmetric 2×2 matrix.
pub fn min_eig_2x2(h: &[Vec<f64>]) -> f64 {
    let (a, b, d) = (h[0][0], h[0][1], h[1][1]);
    let mean = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    mean - rad
}

/// `Tr log(X* Aˢ X + Y* Bᵗ Y)` evaluated with the Jacobi oracle.
pub fn trace_log_two_terms(x: &M, a: &M, y: &M, b: &M, s: f64, t: f64) -> f64 {
    let sum = x.adjoint() * jacobi_fn(a, |v| v.powf(s)) * x + y.adjoint() * jacobi_fn(b, |v| v.powf(t)) * y;
    jacobi_eigh(&sum).0.iter().map(|v| v.ln()).sum()
}
