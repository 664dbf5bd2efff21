//! Exact zero-set descriptions for the operator catalogue.
//!
//! `zer A` is closed and convex and coincides with the fixed points of every
//! resolvent, so a nonempty verdict always comes with an exact projector
//! `P_{zer A}`. The verdict `Unknown` is reserved for configurations whose
//! zero set exists but has no closed-form projection here.

use nalgebra::DMatrix;

use super::{ConvexSet, OperatorKind, OperatorSpec, KERNEL_CUTOFF, TOL_CONSISTENCY};
use crate::{check_dim, check_finite, Error, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emptiness {
    KnownEmpty,
    KnownNonempty,
    Unknown,
}

#[derive(Debug, Clone)]
enum Projector {
    /// Singleton zero set.
    Point(Vector),
    /// The whole space (zero operator).
    Identity,
    /// zer ∂ι_C = C.
    Set(ConvexSet),
    /// Affine flat `point + range(kernel)` with orthonormal kernel columns.
    Flat { point: Vector, kernel: DMatrix<f64> },
    /// Scalar interval, possibly unbounded on either side.
    Interval { lo: f64, hi: f64 },
    /// Affine flat intersected with the centered ball `B[0;r]`;
    /// `point` is the minimum-norm element of the flat and lies inside.
    FlatBall {
        point: Vector,
        kernel: DMatrix<f64>,
        radius: f64,
    },
}

/// Verdict on `zer A` plus, when known nonempty, the exact projection map.
#[derive(Debug, Clone)]
pub struct ZeroSetOracle {
    pub emptiness: Emptiness,
    projector: Option<Projector>,
    dim: usize,
}

impl ZeroSetOracle {
    pub fn has_projection(&self) -> bool {
        self.projector.is_some()
    }

    /// `P_{zer A}(x)`; `None` when no projection is available.
    pub fn project(&self, x: &Vector) -> Option<Result<Vector, Error>> {
        let proj = self.projector.as_ref()?;
        Some(self.project_with(proj, x))
    }

    fn project_with(&self, proj: &Projector, x: &Vector) -> Result<Vector, Error> {
        check_dim(x, self.dim)?;
        check_finite(x, "projection input")?;
        Ok(match proj {
            Projector::Point(p) => p.clone(),
            Projector::Identity => x.clone(),
            Projector::Set(set) => set.project(x)?,
            Projector::Flat { point, kernel } => {
                point + kernel * (kernel.transpose() * (x - point))
            }
            Projector::Interval { lo, hi } => Vector::from_element(1, x[0].clamp(*lo, *hi)),
            Projector::FlatBall {
                point,
                kernel,
                radius,
            } => {
                // point is the min-norm element, so point ⟂ range(kernel) and
                // ‖point + kernel·s‖² = ‖point‖² + ‖s‖².
                let s = kernel.transpose() * x;
                let within = radius * radius - point.norm_squared();
                let s_norm2 = s.norm_squared();
                if s_norm2 <= within {
                    point + kernel * s
                } else {
                    point + kernel * s * (within.sqrt() / s_norm2.sqrt())
                }
            }
        })
    }
}

pub(super) fn oracle_for(op: &OperatorSpec) -> ZeroSetOracle {
    let dim = op.dim();
    match op.kind() {
        OperatorKind::AffinePsd { q, b } => affine_oracle(q, b, dim),
        OperatorKind::NormalCone { set } => ZeroSetOracle {
            emptiness: Emptiness::KnownNonempty,
            projector: Some(Projector::Set(set.clone())),
            dim,
        },
        OperatorKind::Constant { v } => {
            if v.norm() == 0.0 {
                ZeroSetOracle {
                    emptiness: Emptiness::KnownNonempty,
                    projector: Some(Projector::Identity),
                    dim,
                }
            } else {
                ZeroSetOracle {
                    emptiness: Emptiness::KnownEmpty,
                    projector: None,
                    dim,
                }
            }
        }
        OperatorKind::PiecewiseLinear1d {
            breakpoints,
            slopes,
        } => piecewise_oracle(breakpoints, slopes),
        OperatorKind::BallAugmented { inner, radius } => ball_oracle(inner, *radius, dim),
        OperatorKind::Scaled { inner, .. } => oracle_for(inner),
    }
}

/// Least-squares solve of `Qx = -b`; consistent systems give the affine flat
/// `x_min + ker Q` with `x_min` the minimum-norm solution.
fn affine_oracle(q: &DMatrix<f64>, b: &Vector, dim: usize) -> ZeroSetOracle {
    let eig = q.clone().symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let cutoff = KERNEL_CUTOFF * lam_max.max(1.0);

    // x_min = -Q^+ b via the eigenbasis.
    let ub = eig.eigenvectors.transpose() * b;
    let mut coeffs = Vector::zeros(dim);
    let mut kernel_cols = Vec::new();
    for i in 0..dim {
        let lam = eig.eigenvalues[i];
        if lam.abs() <= cutoff {
            kernel_cols.push(eig.eigenvectors.column(i).clone_owned());
        } else {
            coeffs[i] = -ub[i] / lam;
        }
    }
    let x_min = &eig.eigenvectors * coeffs;
    let residual = (q * &x_min + b).norm();
    if residual > TOL_CONSISTENCY * (1.0 + b.norm()) {
        return ZeroSetOracle {
            emptiness: Emptiness::KnownEmpty,
            projector: None,
            dim,
        };
    }
    let projector = if kernel_cols.is_empty() {
        Projector::Point(x_min)
    } else if kernel_cols.len() == dim {
        Projector::Identity
    } else {
        let kernel = DMatrix::from_columns(&kernel_cols);
        Projector::Flat {
            point: x_min,
            kernel,
        }
    };
    ZeroSetOracle {
        emptiness: Emptiness::KnownNonempty,
        projector: Some(projector),
        dim,
    }
}

/// Minimizer set of a convex piecewise-linear scalar function: an interval,
/// possibly unbounded, or empty when every slope points the same way.
fn piecewise_oracle(breakpoints: &[f64], slopes: &[f64]) -> ZeroSetOracle {
    let m = breakpoints.len();
    let first = slopes[0];
    let last = slopes[m];
    if first > 0.0 || last < 0.0 {
        return ZeroSetOracle {
            emptiness: Emptiness::KnownEmpty,
            projector: None,
            dim: 1,
        };
    }
    let lo = if first == 0.0 {
        f64::NEG_INFINITY
    } else {
        // first index with slope >= 0; minimizers start at that breakpoint
        let i = slopes.iter().position(|s| *s >= 0.0).unwrap();
        breakpoints[i - 1]
    };
    let hi = if last == 0.0 {
        f64::INFINITY
    } else {
        let i = slopes.iter().position(|s| *s > 0.0).unwrap();
        breakpoints[i - 1]
    };
    ZeroSetOracle {
        emptiness: Emptiness::KnownNonempty,
        projector: Some(Projector::Interval { lo, hi }),
        dim: 1,
    }
}

/// Zero set of `Ã = A + ∂ι_{B[0;r]}`.
///
/// When `zer A` meets the open ball, `zer Ã = zer A ∩ B[0;r]` (monotonicity
/// rules out extra boundary zeros), which keeps the projection exact. The
/// constant operator contributes its own boundary zero. Remaining cases have
/// a nonempty zero set (the domain is bounded) but no closed-form projection,
/// so they report `Unknown`.
fn ball_oracle(inner: &OperatorSpec, radius: f64, dim: usize) -> ZeroSetOracle {
    match inner.kind() {
        OperatorKind::Constant { v } => {
            if v.norm() == 0.0 {
                let set = ConvexSet::new(super::ConvexSetSpec::Ball {
                    center: vec![0.0; dim],
                    radius,
                })
                .expect("radius validated at construction");
                return ZeroSetOracle {
                    emptiness: Emptiness::KnownNonempty,
                    projector: Some(Projector::Set(set)),
                    dim,
                };
            }
            // 0 ∈ v + N_B(y) forces ‖y‖ = r with −v ∈ R_+ y.
            let p = v * (-radius / v.norm());
            ZeroSetOracle {
                emptiness: Emptiness::KnownNonempty,
                projector: Some(Projector::Point(p)),
                dim,
            }
        }
        OperatorKind::Scaled { inner, .. } => ball_oracle(inner, radius, dim),
        _ => {
            let inner_oracle = oracle_for(inner);
            if inner_oracle.emptiness == Emptiness::KnownNonempty {
                match inner_oracle.projector {
                    Some(Projector::Point(p)) if p.norm() < radius => {
                        return ZeroSetOracle {
                            emptiness: Emptiness::KnownNonempty,
                            projector: Some(Projector::Point(p)),
                            dim,
                        };
                    }
                    // `point` from the affine oracle is the min-norm zero.
                    Some(Projector::Flat { point, kernel }) if point.norm() < radius => {
                        return ZeroSetOracle {
                            emptiness: Emptiness::KnownNonempty,
                            projector: Some(Projector::FlatBall {
                                point,
                                kernel,
                                radius,
                            }),
                            dim,
                        };
                    }
                    Some(Projector::Identity) => {
                        let set = ConvexSet::new(super::ConvexSetSpec::Ball {
                            center: vec![0.0; dim],
                            radius,
                        })
                        .expect("radius validated at construction");
                        return ZeroSetOracle {
                            emptiness: Emptiness::KnownNonempty,
                            projector: Some(Projector::Set(set)),
                            dim,
                        };
                    }
                    Some(Projector::Interval { lo, hi }) => {
                        if lo <= radius && hi >= -radius {
                            return ZeroSetOracle {
                                emptiness: Emptiness::KnownNonempty,
                                projector: Some(Projector::Interval {
                                    lo: lo.max(-radius),
                                    hi: hi.min(radius),
                                }),
                                dim,
                            };
                        }
                    }
                    _ => {}
                }
            }
            // zer Ã ≠ ∅ always (bounded domain), but its elements sit on the
            // sphere in ways we cannot project onto exactly.
            ZeroSetOracle {
                emptiness: Emptiness::Unknown,
                projector: None,
                dim,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::ConvexSetSpec;

    fn v(s: &[f64]) -> Vector {
        Vector::from_column_slice(s)
    }

    #[test]
    fn unique_zero_of_full_rank_affine() {
        // Q = I, b = (−1, −2): unique zero (1, 2).
        let a = OperatorSpec::affine_psd(DMatrix::identity(2, 2), v(&[-1.0, -2.0])).unwrap();
        let o = a.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        let p = o.project(&v(&[100.0, -3.0])).unwrap().unwrap();
        assert!((p - v(&[1.0, 2.0])).norm() < 1e-9);
    }

    #[test]
    fn constant_operator_zero_set() {
        let a = OperatorSpec::constant(v(&[1.0, 0.0])).unwrap();
        assert_eq!(a.zero_set_oracle().emptiness, Emptiness::KnownEmpty);
        let z = OperatorSpec::constant(v(&[0.0, 0.0])).unwrap();
        let o = z.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        assert_eq!(o.project(&v(&[3.0, 4.0])).unwrap().unwrap(), v(&[3.0, 4.0]));
    }

    #[test]
    fn normal_cone_zero_set_is_the_set() {
        let a = OperatorSpec::normal_cone(
            ConvexSet::new(ConvexSetSpec::Box {
                lower: vec![-1.0, -1.0],
                upper: vec![1.0, 1.0],
            })
            .unwrap(),
        );
        let o = a.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        assert_eq!(o.project(&v(&[3.0, 0.0])).unwrap().unwrap(), v(&[1.0, 0.0]));
    }

    #[test]
    fn rank_deficient_affine_flat() {
        // Q = diag(1, 0), b = (−1, 0): zeros {(1, t)}.
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let a = OperatorSpec::affine_psd(q, v(&[-1.0, 0.0])).unwrap();
        let o = a.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        let p = o.project(&v(&[5.0, 7.0])).unwrap().unwrap();
        assert!((p - v(&[1.0, 7.0])).norm() < 1e-9);
    }

    #[test]
    fn inconsistent_affine_is_empty() {
        // Q = diag(1, 0), b = (0, 1): second equation 0 = −1.
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let a = OperatorSpec::affine_psd(q, v(&[0.0, 1.0])).unwrap();
        assert_eq!(a.zero_set_oracle().emptiness, Emptiness::KnownEmpty);
    }

    #[test]
    fn ball_augmented_keeps_interior_zeros() {
        // zer A = {(0.5, t)} meets B(0; 1): zer Ã is the clipped flat.
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let inner = OperatorSpec::affine_psd(q, v(&[-0.5, 0.0])).unwrap();
        let a = OperatorSpec::ball_augmented(inner, 1.0).unwrap();
        let o = a.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        // projection of a faraway point clips to the sphere within the flat
        let p = o.project(&v(&[0.5, 9.0])).unwrap().unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-9);
        assert!((p[0] - 0.5).abs() < 1e-9);
        // interior projections match the flat projection
        let p2 = o.project(&v(&[3.0, 0.1])).unwrap().unwrap();
        assert!((p2 - v(&[0.5, 0.1])).norm() < 1e-9);
    }

    #[test]
    fn ball_augmented_constant_boundary_zero() {
        let inner = OperatorSpec::constant(v(&[2.0, 0.0])).unwrap();
        let a = OperatorSpec::ball_augmented(inner, 1.5).unwrap();
        let o = a.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        let p = o.project(&v(&[0.0, 0.0])).unwrap().unwrap();
        assert!((p - v(&[-1.5, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn piecewise_minimizer_interval() {
        // f with slopes [−1, 0, 2] and breakpoints [0, 1]: minimized on [0, 1].
        let a = OperatorSpec::piecewise_linear_1d(vec![0.0, 1.0], vec![-1.0, 0.0, 2.0]).unwrap();
        let o = a.zero_set_oracle();
        assert_eq!(o.emptiness, Emptiness::KnownNonempty);
        assert_eq!(o.project(&v(&[5.0])).unwrap().unwrap(), v(&[1.0]));
        assert_eq!(o.project(&v(&[0.5])).unwrap().unwrap(), v(&[0.5]));
        // strictly increasing f: no minimizer
        let b = OperatorSpec::piecewise_linear_1d(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(b.zero_set_oracle().emptiness, Emptiness::KnownEmpty);
    }

    #[test]
    fn projected_points_are_resolvent_fixed_points() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let a = OperatorSpec::affine_psd(q, v(&[-1.0, 0.0])).unwrap();
        let o = a.zero_set_oracle();
        let p = o.project(&v(&[-2.0, 3.5])).unwrap().unwrap();
        for c in [0.01, 0.5, 1.0, 13.0, 99.0] {
            let jp = a.resolvent(c, &p).unwrap();
            assert!((jp - &p).norm() <= 1e-10, "fixed point drift at c = {c}");
        }
    }
}
