use crate::config::DEFAULTS;
use crate::error::{check_dim, Error, Result};
use crate::numerics::{dot, solve_lp_raw, symmetric_eigen, LpStatus, Matrix};

/// Polytope `{x : pᵢᵀx <= 1}` in normalized form.
///
/// The right-hand side is always one, so the origin is strictly inside every
/// half-space. Boundedness is not checked on construction; see
/// [`HPolytope::is_bounded`].
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("polytope dimension must be positive".into()));
        }
        if rows.is_empty() {
            return Err(Error::InvalidArgument("polytope needs at least one row".into()));
        }
        for r in &rows {
            check_dim(dim, r.len())?;
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("polytope rows must be finite".into()));
            }
        }
        Ok(Self { dim, rows })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        Self::new(dim, rows)
    }

    /// The interval `[-r, r]`.
    pub fn interval(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidArgument("interval radius must be positive".into()));
        }
        Self::new(1, vec![vec![1.0 / r], vec![-1.0 / r]])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }

    /// `max(0, maxᵢ pᵢᵀx)`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.rows.iter().map(|r| dot(r, x)).fold(0.0, f64::max)
    }

    pub fn support(&self, y: &[f64]) -> Result<f64> {
        super::lp_support(&self.rows, y)
    }

    /// Bounded iff the support is finite along every signed coordinate axis.
    pub fn is_bounded(&self) -> Result<bool> {
        let mut e = vec![0.0; self.dim];
        for i in 0..self.dim {
            for s in [1.0, -1.0] {
                e[i] = s;
                let sol = solve_lp_raw(&e, &self.rows, DEFAULTS.lp_pivot)?;
                if sol.status == LpStatus::Unbounded {
                    return Ok(false);
                }
            }
            e[i] = 0.0;
        }
        Ok(true)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            dim: self.dim,
            rows: self.rows.iter().map(|r| r.iter().map(|v| v / alpha).collect()).collect(),
        }
    }
}

/// Convex hull of a finite point list; the origin must be interior to it.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 || vertices.is_empty() {
            return Err(Error::InvalidArgument("V-polytope needs a dimension and vertices".into()));
        }
        for v in &vertices {
            check_dim(dim, v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("vertices must be finite".into()));
            }
        }
        Ok(Self { dim, vertices })
    }

    pub fn from_vertices(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().map(Vec::len).unwrap_or(0);
        Self::new(dim, vertices)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn support(&self, y: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(v, y)).fold(0.0, f64::max)
    }

    /// Gauge through the polar: `γ(x) = max{xᵀy : vᵢᵀy <= 1}`.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        let sol = solve_lp_raw(x, &self.vertices, DEFAULTS.lp_pivot)?;
        match sol.status {
            LpStatus::Optimal => Ok(sol.value.max(0.0)),
            LpStatus::Unbounded => Err(Error::OriginNotInterior(
                "direction leaves the cone spanned by the vertices".into(),
            )),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().map(|x| x * alpha).collect()).collect(),
        }
    }
}

/// Ellipsoid `{x : xᵀEx <= 1}` with `E` symmetric positive definite.
///
/// The inverse of `E` is precomputed from its eigendecomposition; it is
/// withheld when the condition number exceeds the configured limit, in which
/// case support evaluation and polarity report [`Error::IllConditioned`].
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    shape: Matrix,
    inverse: Option<Matrix>,
    condition: f64,
}

impl PartialEq for Ellipsoid {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
    }
}

impl Ellipsoid {
    pub fn new(e: Matrix) -> Result<Self> {
        if !e.is_square() {
            return Err(Error::InvalidArgument("ellipsoid shape matrix must be square".into()));
        }
        let shape = e.symmetrized()?;
        let (vals, vecs) = symmetric_eigen(&shape)?;
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        if !(lo > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "ellipsoid shape matrix is not positive definite (smallest eigenvalue {lo:e})"
            )));
        }
        let condition = hi / lo;
        let inverse = (condition <= DEFAULTS.max_condition).then(|| {
            let n = shape.n_rows();
            let mut inv = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v: f64 = (0..n).map(|k| vecs[(i, k)] * vecs[(j, k)] / vals[k]).sum();
                    inv[(i, j)] = v;
                    inv[(j, i)] = v;
                }
            }
            inv
        });
        Ok(Self { shape, inverse, condition })
    }

    pub fn dim(&self) -> usize {
        self.shape.n_rows()
    }

    pub fn shape(&self) -> &Matrix {
        &self.shape
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn inverse(&self) -> Result<&Matrix> {
        self.inverse.as_ref().ok_or(Error::IllConditioned(self.condition))
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        // quad_form cannot fail on matching dimensions
        self.shape.quad_form(x).map(|q| q.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }

    pub fn support(&self, y: &[f64]) -> Result<f64> {
        Ok(self.inverse()?.quad_form(y)?.max(0.0).sqrt())
    }

    pub fn polar(&self) -> Result<Self> {
        Self::new(self.inverse()?.clone())
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(self.shape.scaled(1.0 / (alpha * alpha)))
    }
}
