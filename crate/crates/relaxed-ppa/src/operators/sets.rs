//! Closed convex sets with exact projections.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{check_dim, check_finite, Error, Vector};

/// A closed convex subset of `R^n` for which the projection is available in
/// closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSetSpec {
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{ basepoint + span(basis) }`; the basis must be linearly independent.
    AffineSubspace {
        basepoint: Vec<f64>,
        basis: Vec<Vec<f64>>,
    },
    /// `{ x : <normal, x> <= offset }`.
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
}

/// Validated set with any precomputation needed by the projector.
#[derive(Debug, Clone)]
pub struct ConvexSet {
    pub spec: ConvexSetSpec,
    dim: usize,
    /// Orthonormalized basis for the affine variant.
    ortho: Option<DMatrix<f64>>,
}

impl ConvexSet {
    pub fn new(spec: ConvexSetSpec) -> Result<Self, Error> {
        let (dim, ortho) = match &spec {
            ConvexSetSpec::Box { lower, upper } => {
                if lower.len() != upper.len() {
                    return Err(Error::DimensionMismatch {
                        expected: lower.len(),
                        got: upper.len(),
                    });
                }
                if lower.is_empty() {
                    return Err(Error::InvalidParameter("box in dimension 0".into()));
                }
                for (l, u) in lower.iter().zip(upper) {
                    if !(l.is_finite() && u.is_finite()) {
                        return Err(Error::NonFinite("box bound"));
                    }
                    if l > u {
                        return Err(Error::InvalidParameter(format!(
                            "box lower bound {l} exceeds upper bound {u}"
                        )));
                    }
                }
                (lower.len(), None)
            }
            ConvexSetSpec::Ball { center, radius } => {
                if center.is_empty() {
                    return Err(Error::InvalidParameter("ball in dimension 0".into()));
                }
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
                (center.len(), None)
            }
            ConvexSetSpec::AffineSubspace { basepoint, basis } => {
                let n = basepoint.len();
                if n == 0 {
                    return Err(Error::InvalidParameter("subspace in dimension 0".into()));
                }
                for b in basis {
                    if b.len() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            got: b.len(),
                        });
                    }
                }
                let ortho = if basis.is_empty() {
                    DMatrix::zeros(n, 0)
                } else {
                    let m = DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
                    orthonormalize(&m)?
                };
                (n, Some(ortho))
            }
            ConvexSetSpec::Halfspace { normal, offset } => {
                if normal.is_empty() {
                    return Err(Error::InvalidParameter("halfspace in dimension 0".into()));
                }
                if !offset.is_finite() {
                    return Err(Error::NonFinite("halfspace offset"));
                }
                let norm: f64 = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::InvalidParameter(
                        "halfspace normal must be nonzero".into(),
                    ));
                }
                (normal.len(), None)
            }
        };
        Ok(ConvexSet { spec, dim, ortho })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn project(&self, x: &Vector) -> Result<Vector, Error> {
        check_dim(x, self.dim)?;
        check_finite(x, "projection input")?;
        Ok(match &self.spec {
            ConvexSetSpec::Box { lower, upper } => Vector::from_iterator(
                self.dim,
                x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(xi, (l, u))| xi.clamp(*l, *u)),
            ),
            ConvexSetSpec::Ball { center, radius } => {
                let c = Vector::from_column_slice(center);
                let d = x - &c;
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    c + d * (*radius / n)
                }
            }
            ConvexSetSpec::AffineSubspace { basepoint, .. } => {
                let b = Vector::from_column_slice(basepoint);
                let v = self.ortho.as_ref().unwrap();
                &b + v * (v.transpose() * (x - &b))
            }
            ConvexSetSpec::Halfspace { normal, offset } => {
                let a = Vector::from_column_slice(normal);
                let viol = a.dot(x) - offset;
                if viol <= 0.0 {
                    x.clone()
                } else {
                    x - &a * (viol / a.norm_squared())
                }
            }
        })
    }

    /// An arbitrary member of the set, used as a zero-set witness.
    pub fn any_point(&self) -> Vector {
        match &self.spec {
            ConvexSetSpec::Box { lower, upper } => Vector::from_iterator(
                self.dim,
                lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)),
            ),
            ConvexSetSpec::Ball { center, .. } => Vector::from_column_slice(center),
            ConvexSetSpec::AffineSubspace { basepoint, .. } => Vector::from_column_slice(basepoint),
            ConvexSetSpec::Halfspace { normal, offset } => {
                let a = Vector::from_column_slice(normal);
                &a * (offset / a.norm_squared())
            }
        }
    }
}

/// Gram–Schmidt with a rank check; rejects dependent input columns.
fn orthonormalize(m: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let mut q = m.clone();
    for j in 0..q.ncols() {
        let mut col = q.column(j).clone_owned();
        for i in 0..j {
            let qi = q.column(i).clone_owned();
            let proj = qi.dot(&col);
            col -= qi * proj;
        }
        // second pass for numerical orthogonality
        for i in 0..j {
            let qi = q.column(i).clone_owned();
            let proj = qi.dot(&col);
            col -= qi * proj;
        }
        let n = col.norm();
        if n < 1e-10 * (1.0 + m.column(j).norm()) {
            return Err(Error::InvalidParameter(format!(
                "affine subspace basis vectors are linearly dependent (column {j})"
            )));
        }
        col /= n;
        q.set_column(j, &col);
    }
    Ok(q)
}
