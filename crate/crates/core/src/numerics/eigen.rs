//! Eigenvalue kernels.
//!
//! * General real matrices: Householder reduction to upper Hessenberg form
//!   followed by the Francis double-shift QR iteration. Only eigenvalues are
//!   accumulated; complex conjugate pairs come out of the 2x2 deflation step.
//! * Symmetric matrices: cyclic Jacobi rotations, which are slow but accurate
//!   to a few ulps for the small matrices used here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::Matrix;

const MAX_RESTARTS: u64 = 3;
const MAX_ITER_PER_ROOT: usize = 60;

/// Real and imaginary parts of every eigenvalue of `a`.
pub fn eigenvalues(a: &Matrix, tol: f64) -> Result<Vec<(f64, f64)>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("eigenvalues need a square matrix".into()));
    }
    let n = a.n_rows();
    if n == 1 {
        return Ok(vec![(a[(0, 0)], 0.0)]);
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(vec![(0.0, 0.0); n]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut shift = 0.0;
    for _ in 0..=MAX_RESTARTS {
        let mut h: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        for (i, row) in h.iter_mut().enumerate() {
            row[i] += shift;
        }
        reduce_to_hessenberg(&mut h);
        if let Some(mut roots) = hessenberg_qr(&mut h, tol) {
            for r in &mut roots {
                r.0 -= shift;
            }
            return Ok(roots);
        }
        shift = scale * rng.gen_range(-1.0..1.0);
    }
    Err(Error::NonConvergence(format!(
        "QR iteration stalled after {MAX_RESTARTS} shifted restarts"
    )))
}

/// Largest eigenvalue modulus of `a`.
pub fn spectral_radius(a: &Matrix, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let roots = eigenvalues(a, tol)?;
    Ok(roots.iter().map(|&(re, im)| re.hypot(im)).fold(0.0, f64::max))
}

fn reduce_to_hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i][j];
            }
            f /= hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for row in h.iter_mut().take(high + 1) {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * row[j];
            }
            f /= hh;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. Returns `None`
/// when a single root needs more than `MAX_ITER_PER_ROOT` sweeps.
#[allow(clippy::many_single_char_names)]
fn hessenberg_qr(h: &mut [Vec<f64>], tol: f64) -> Option<Vec<(f64, f64)>> {
    let nn = h.len() as isize;
    let mut d = vec![0.0; nn as usize];
    let mut e = vec![0.0; nn as usize];
    let eps = f64::EPSILON;
    let defl = tol.max(eps);
    let low: isize = 0;
    let mut n = nn - 1;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
    let mut s: f64;
    let mut z: f64;
    let mut w;
    let mut x;
    let mut y;

    macro_rules! m {
        ($i:expr, $j:expr) => {
            h[($i) as usize][($j) as usize]
        };
    }

    let mut norm = 0.0;
    for i in 0..nn {
        for j in (i - 1).max(0)..nn {
            norm += m!(i, j).abs();
        }
    }

    let mut iter = 0usize;
    while n >= low {
        let mut l = n;
        while l > low {
            s = m!(l - 1, l - 1).abs() + m!(l, l).abs();
            if s == 0.0 {
                s = norm;
            }
            if m!(l, l - 1).abs() < defl * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            m!(n, n) += exshift;
            d[n as usize] = m!(n, n);
            e[n as usize] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            w = m!(n, n - 1) * m!(n - 1, n);
            p = (m!(n - 1, n - 1) - m!(n, n)) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            m!(n, n) += exshift;
            m!(n - 1, n - 1) += exshift;
            x = m!(n, n);
            let (nu, nl) = (n as usize, (n - 1) as usize);
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[nl] = x + z;
                d[nu] = d[nl];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nl] = 0.0;
                e[nu] = 0.0;
            } else {
                d[nl] = x + p;
                d[nu] = x + p;
                e[nl] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            x = m!(n, n);
            y = 0.0;
            w = 0.0;
            if l < n {
                y = m!(n - 1, n - 1);
                w = m!(n, n - 1) * m!(n - 1, n);
            }
            // exceptional shifts
            if iter == 10 {
                exshift += x;
                for i in low..=n {
                    m!(i, i) -= x;
                }
                s = m!(n, n - 1).abs() + m!(n - 1, n - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        m!(i, i) -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            if iter > MAX_ITER_PER_ROOT {
                return None;
            }

            let mut mm = n - 2;
            while mm >= l {
                z = m!(mm, mm);
                r = x - z;
                s = y - z;
                p = (r * s - w) / m!(mm + 1, mm) + m!(mm, mm + 1);
                q = m!(mm + 1, mm + 1) - z - r - s;
                r = m!(mm + 2, mm + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if mm == l {
                    break;
                }
                if m!(mm, mm - 1).abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (m!(mm - 1, mm - 1).abs() + z.abs() + m!(mm + 1, mm + 1).abs()))
                {
                    break;
                }
                mm -= 1;
            }

            for i in (mm + 2)..=n {
                m!(i, i - 2) = 0.0;
                if i > mm + 2 {
                    m!(i, i - 3) = 0.0;
                }
            }

            let mut k = mm;
            while k < n {
                let notlast = k != n - 1;
                if k != mm {
                    p = m!(k, k - 1);
                    q = m!(k + 1, k - 1);
                    r = if notlast { m!(k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mm {
                        m!(k, k - 1) = -s * x;
                    } else if l != mm {
                        m!(k, k - 1) = -m!(k, k - 1);
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = m!(k, j) + q * m!(k + 1, j);
                        if notlast {
                            p += r * m!(k + 2, j);
                            m!(k + 2, j) -= p * z;
                        }
                        m!(k, j) -= p * x;
                        m!(k + 1, j) -= p * y;
                    }
                    for i in 0..=n.min(k + 3) {
                        p = x * m!(i, k) + y * m!(i, k + 1);
                        if notlast {
                            p += z * m!(i, k + 2);
                            m!(i, k + 2) -= p * r;
                        }
                        m!(i, k) -= p;
                        m!(i, k + 1) -= p * q;
                    }
                }
                k += 1;
            }
        }
    }
    Some(d.into_iter().zip(e).collect())
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues and a matrix whose columns are the matching
/// orthonormal eigenvectors. The input is symmetrized first.
pub fn symmetric_eigen(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let mut a = s.symmetrized()?;
    let n = a.n_rows();
    let mut v = Matrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off <= f64::MIN_POSITIVE || off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[(i, i)]).collect(), v))
}

/// Largest eigenvalue of the symmetric part of `s`.
pub fn sym_eig_max(s: &Matrix) -> Result<f64> {
    let (vals, _) = symmetric_eigen(s)?;
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}
