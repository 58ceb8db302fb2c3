//! LP solver for `max cᵀx  s.t.  r_jᵀx <= 1` with `x` free.
//!
//! Primal active-set method on the `n`-dimensional problem. The right-hand
//! side is always one, so the origin is strictly feasible and serves as the
//! start. Each step moves along the projection of `c` onto the face cut out by
//! the working rows, or drops the working row with the most negative
//! multiplier. Slacks and vertices are recomputed from the original rows, so
//! rounding does not accumulate across steps. After a run of degenerate steps
//! the choice rules fall back to smallest-index to rule out cycling.

use serde::{Deserialize, Serialize};

use crate::config::DEFAULTS;
use crate::error::{check_dim, Error, Result};
use crate::numerics::matrix::{dot, norm2};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("LP needs at least one constraint row".into()));
        }
        let n = objective.len();
        for r in &rows {
            check_dim(n, r.len())?;
        }
        if objective.iter().chain(rows.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("LP data must be finite".into()));
        }
        Ok(Self { objective, rows })
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal value, or `+inf` when unbounded.
    pub value: f64,
    /// Attaining point (the last visited vertex when unbounded).
    pub point: Vec<f64>,
}

pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    solve_lp_raw(&p.objective, &p.rows, DEFAULTS.lp_pivot)
}

/// Same as [`solve_lp`] without building an [`LpProblem`]; rows are borrowed.
pub(crate) fn solve_lp_raw<R: AsRef<[f64]>>(c: &[f64], rows: &[R], piv_eps: f64) -> Result<LpSolution> {
    let n = c.len();
    let cn = norm2(c);
    if cn == 0.0 {
        return Ok(LpSolution { status: LpStatus::Optimal, value: 0.0, point: vec![0.0; n] });
    }

    // normalized rows: aᵢᵀx <= bᵢ with |aᵢ| = 1; zero rows carry no information
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    let mut b: Vec<f64> = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_ref();
        check_dim(n, r.len())?;
        let nr = norm2(r);
        if nr > 0.0 {
            a.push(r.iter().map(|v| v / nr).collect());
            b.push(1.0 / nr);
        }
    }
    let m = a.len();
    let eps = piv_eps.max(f64::EPSILON);

    let mut x = vec![0.0; n];
    let mut work: Vec<usize> = Vec::with_capacity(n);
    let mut in_work = vec![false; m];
    let max_steps = 10_000 + 50 * (m + n);
    let mut degenerate_run = 0usize;

    for _ in 0..max_steps {
        let bland = degenerate_run > 2 * (n + 1);
        let f = Face::new(&a, &work);
        let d = f.project_out(c);
        let dn = norm2(&d);

        if dn <= 1e3 * eps * cn {
            // c lies in the span of the working rows: check multipliers
            let lambda = f.multipliers(c);
            let drop = if bland {
                (0..work.len()).filter(|&p| lambda[p] < -eps * cn).min_by_key(|&p| work[p])
            } else {
                (0..work.len())
                    .filter(|&p| lambda[p] < -eps * cn)
                    .min_by(|&p, &q| lambda[p].total_cmp(&lambda[q]))
            };
            match drop {
                None => {
                    let value = dot(c, &x);
                    return Ok(LpSolution { status: LpStatus::Optimal, value, point: x });
                }
                Some(p) => {
                    in_work[work[p]] = false;
                    work.remove(p);
                    continue;
                }
            }
        }

        // ratio test along d, rows compared to their original data
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..m {
            if in_work[i] {
                continue;
            }
            let s = dot(&a[i], &d);
            if s <= eps * dn {
                continue;
            }
            let slack = (b[i] - dot(&a[i], &x)).max(0.0);
            let t = slack / s;
            best = match best {
                None => Some((i, t, s)),
                Some((j, bt, bs)) => {
                    let tie = (t - bt).abs() <= 1e-12 * (1.0 + bt.abs());
                    let better = if tie {
                        if bland {
                            i < j
                        } else {
                            s > bs
                        }
                    } else {
                        t < bt
                    };
                    if better {
                        Some((i, t.min(bt), s))
                    } else {
                        Some((j, bt, bs))
                    }
                }
            };
        }
        let Some((enter, t, _)) = best else {
            return Ok(LpSolution { status: LpStatus::Unbounded, value: f64::INFINITY, point: x });
        };
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += t * di;
        }
        work.push(enter);
        in_work[enter] = true;
        if work.len() == n {
            // snap onto the vertex defined by the working rows
            if let Some(v) = Face::new(&a, &work).vertex(&work.iter().map(|&i| b[i]).collect::<Vec<_>>()) {
                x = v;
            }
        }
        degenerate_run = if t * dn <= eps { degenerate_run + 1 } else { 0 };
    }
    Err(Error::NonConvergence(format!("LP exceeded {max_steps} active-set steps")))
}

/// Orthonormal basis of the span of the working rows, from modified
/// Gram–Schmidt with one reorthogonalization pass: `A_Wᵀ = QR`.
struct Face {
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl Face {
    fn new(a: &[Vec<f64>], work: &[usize]) -> Self {
        let w = work.len();
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(w);
        let mut r = vec![vec![0.0; w]; w];
        for (col, &i) in work.iter().enumerate() {
            let mut v = a[i].clone();
            for _ in 0..2 {
                for (k, qk) in q.iter().enumerate() {
                    let h = dot(qk, &v);
                    r[k][col] += h;
                    for (vi, qi) in v.iter_mut().zip(qk) {
                        *vi -= h * qi;
                    }
                }
            }
            let nv = norm2(&v);
            r[col][col] = nv;
            q.push(v.iter().map(|x| x / nv).collect());
        }
        Self { q, r }
    }

    fn project_out(&self, c: &[f64]) -> Vec<f64> {
        let mut d = c.to_vec();
        for _ in 0..2 {
            for qk in &self.q {
                let h = dot(qk, &d);
                for (di, qi) in d.iter_mut().zip(qk) {
                    *di -= h * qi;
                }
            }
        }
        d
    }

    /// `λ` with `A_Wᵀλ ≈ c`: back substitution in `Rλ = Qᵀc`.
    fn multipliers(&self, c: &[f64]) -> Vec<f64> {
        let w = self.q.len();
        let rhs: Vec<f64> = self.q.iter().map(|qk| dot(qk, c)).collect();
        let mut lambda = vec![0.0; w];
        for i in (0..w).rev() {
            let s: f64 = (i + 1..w).map(|j| self.r[i][j] * lambda[j]).sum();
            lambda[i] = (rhs[i] - s) / self.r[i][i];
        }
        lambda
    }

    /// Solution of `A_W x = b_W` for a square working set:
    /// `x = Q R⁻ᵀ b_W` by forward substitution.
    fn vertex(&self, bw: &[f64]) -> Option<Vec<f64>> {
        let w = self.q.len();
        let mut y = vec![0.0; w];
        for i in 0..w {
            let s: f64 = (0..i).map(|j| self.r[j][i] * y[j]).sum();
            y[i] = (bw[i] - s) / self.r[i][i];
        }
        if y.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let n = self.q.first().map_or(0, Vec::len);
        let mut x = vec![0.0; n];
        for (qk, yk) in self.q.iter().zip(&y) {
            for (xi, qi) in x.iter_mut().zip(qk) {
                *xi += yk * qi;
            }
        }
        Some(x)
    }
}
