//! Vertex enumeration and hulls in one and two dimensions.
//!
//! Used for plotting exports and for exact direction sets in the Hausdorff
//! estimate; nothing here generalizes beyond the plane.

use crate::error::{Error, Result};
use crate::sets::{HPolytope, SetExpr};

const FEAS_TOL: f64 = 1e-9;

/// Vertices of `{x : rᵢᵀx <= 1}` for `dim ∈ {1, 2}`, counterclockwise in 2-D.
pub fn vertices_of_rows(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let dim = rows.first().map(Vec::len).unwrap_or(0);
    match dim {
        1 => {
            let mut hi = f64::INFINITY;
            let mut lo = f64::NEG_INFINITY;
            for r in rows {
                if r[0] > 0.0 {
                    hi = hi.min(1.0 / r[0]);
                } else if r[0] < 0.0 {
                    lo = lo.max(1.0 / r[0]);
                }
            }
            if !(hi.is_finite() && lo.is_finite()) {
                return Err(Error::Unbounded);
            }
            Ok(vec![vec![lo], vec![hi]])
        }
        2 => {
            if !HPolytope::new(2, rows.to_vec())?.is_bounded()? {
                return Err(Error::Unbounded);
            }
            let mut pts: Vec<[f64; 2]> = Vec::new();
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    let (a, b) = (&rows[i], &rows[j]);
                    let det = a[0] * b[1] - a[1] * b[0];
                    let scale = (a[0].hypot(a[1])) * (b[0].hypot(b[1]));
                    if det.abs() <= 1e-12 * scale {
                        continue;
                    }
                    let p = [(b[1] - a[1]) / det, (a[0] - b[0]) / det];
                    let feasible = rows
                        .iter()
                        .all(|r| r[0] * p[0] + r[1] * p[1] <= 1.0 + FEAS_TOL);
                    if feasible {
                        pts.push(p);
                    }
                }
            }
            let hull = convex_hull(&pts);
            if hull.len() < 3 {
                return Err(Error::OriginNotInterior("degenerate polygon".into()));
            }
            Ok(hull.into_iter().map(|p| p.to_vec()).collect())
        }
        _ => Err(Error::Unsupported(format!("vertex enumeration in dimension {dim}"))),
    }
}

/// Convex hull by monotone chain, counterclockwise, collinear points dropped.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= 1e-12 * (1.0 + b[0].abs()) && (a[1] - b[1]).abs() <= 1e-12 * (1.0 + b[1].abs()));
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs())).max(1e-300);
    let eps = 1e-13 * scale * scale;
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Counterclockwise polygon of a planar polytopic set (or the polar of one).
pub fn polygon(set: &SetExpr) -> Result<Vec<[f64; 2]>> {
    if set.dim() != 2 {
        return Err(Error::Unsupported(format!("export needs a 2-D set, got dimension {}", set.dim())));
    }
    if let Some(rows) = set.h_rows() {
        return Ok(vertices_of_rows(&rows)?.into_iter().map(|v| [v[0], v[1]]).collect());
    }
    if let Some(points) = set.vertex_list() {
        let pts: Vec<[f64; 2]> = points.iter().map(|v| [v[0], v[1]]).collect();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            return Err(Error::OriginNotInterior("degenerate polygon".into()));
        }
        return Ok(hull);
    }
    Err(Error::Unsupported("set is not a polytope with an enumerable representation".into()))
}
