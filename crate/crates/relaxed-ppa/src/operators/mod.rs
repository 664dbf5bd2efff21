//! Catalogue of maximally monotone operators on `R^n` with exact resolvents.
//!
//! Every operator here has a resolvent `J_{cA} = (Id + cA)^{-1}` that is
//! computable either in closed form or by a finite solve:
//!
//! * [`OperatorSpec::affine_psd`] — `A(x) = Qx + b` with `Q` symmetric
//!   positive semidefinite; the resolvent is one SPD linear solve.
//! * [`OperatorSpec::normal_cone`] — `A = ∂ι_C`; the resolvent is the
//!   projection onto `C`, independent of the stepsize.
//! * [`OperatorSpec::constant`] — `A(x) ≡ {v}`; the canonical witness of an
//!   empty zero set when `v ≠ 0`.
//! * [`OperatorSpec::piecewise_linear_1d`] — the subdifferential of a convex
//!   piecewise-linear function on `R`, for scalar stress tests.
//! * [`OperatorSpec::ball_augmented`] — `Ã = A + ∂ι_{B[0;r]}`, the
//!   ball-restricted augmentation; its resolvent solves the complementarity
//!   system `(Id + cA + λ·Id) y = x' , λ ≥ 0, ‖y‖ ≤ r, λ(‖y‖ − r) = 0` by
//!   monotone bisection on the multiplier.
//! * [`OperatorSpec::scaled`] — `γA` for `γ > 0`; `J_{c(γA)} = J_{(cγ)A}`.
//!
//! Resolvents are firmly nonexpansive, their fixed points are exactly the
//! zeros of the operator, and `J_{λA}(x) = J_{μA}((μ/λ)x + (1−μ/λ)J_{λA}x)`
//! for any two stepsizes; the tests exercise all three facts on randomized
//! draws from the catalogue.
//!
//! Operators are immutable after construction and safe to share across
//! concurrent runs; resolvent evaluation is pure apart from the optional
//! internally synchronized factorization cache.

mod sets;
mod zeros;

pub use sets::{ConvexSet, ConvexSetSpec};
pub use zeros::{Emptiness, ZeroSetOracle};

use std::collections::HashMap;
use std::sync::Mutex;

use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::{check_dim, check_finite, Error, Vector};

/// Relative eigenvalue floor for certifying positive semidefiniteness.
pub const TOL_PSD: f64 = 1e-10;
/// Relative residual below which an affine zero set counts as nonempty.
pub const TOL_CONSISTENCY: f64 = 1e-8;
/// Relative cutoff on eigenvalue magnitude for the kernel of an affine operator.
pub const KERNEL_CUTOFF: f64 = 1e-10;
/// Relative tolerance on `‖y(λ)‖ − r` in the ball-augmented bisection.
const BALL_ROOT_TOL: f64 = 1e-12;
const BALL_ROOT_MAX_ITERS: usize = 200;

#[derive(Debug, Clone)]
pub enum OperatorKind {
    AffinePsd {
        q: DMatrix<f64>,
        b: Vector,
    },
    NormalCone {
        set: ConvexSet,
    },
    Constant {
        v: Vector,
    },
    /// Subdifferential of the convex piecewise-linear `f` with the given
    /// breakpoints and one more slope than breakpoints.
    PiecewiseLinear1d {
        breakpoints: Vec<f64>,
        slopes: Vec<f64>,
    },
    BallAugmented {
        inner: Box<OperatorSpec>,
        radius: f64,
    },
    Scaled {
        inner: Box<OperatorSpec>,
        factor: f64,
    },
}

/// A validated maximally monotone operator.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    kind: OperatorKind,
    dim: usize,
}

impl OperatorSpec {
    /// `A(x) = Qx + b` for symmetric positive semidefinite `Q`.
    ///
    /// Symmetry is required up to rounding and the matrix is symmetrized;
    /// eigenvalues may not drop below `-TOL_PSD` relative to the largest one.
    pub fn affine_psd(q: DMatrix<f64>, b: Vector) -> Result<Self, Error> {
        if q.nrows() != q.ncols() {
            return Err(Error::InvalidParameter(format!(
                "matrix must be square, got {}x{}",
                q.nrows(),
                q.ncols()
            )));
        }
        let n = q.nrows();
        check_dim(&b, n)?;
        check_finite(&b, "affine offset")?;
        if !q.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("operator matrix"));
        }
        let scale = q.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (q[(i, j)] - q[(j, i)]).abs() > 1e-9 * scale {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let q = (&q + q.transpose()) * 0.5;
        let eig = q.clone().symmetric_eigen();
        let lam_max = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        let floor = -TOL_PSD * lam_max.max(1.0);
        if let Some(l) = eig.eigenvalues.iter().find(|l| **l < floor) {
            return Err(Error::InvalidParameter(format!(
                "matrix has a negative eigenvalue {l}, not monotone"
            )));
        }
        Ok(OperatorSpec {
            kind: OperatorKind::AffinePsd { q, b },
            dim: n,
        })
    }

    /// `A = ∂ι_C` for a catalogued closed convex set.
    pub fn normal_cone(set: ConvexSet) -> Self {
        let dim = set.dim();
        OperatorSpec {
            kind: OperatorKind::NormalCone { set },
            dim,
        }
    }

    /// `A(x) ≡ {v}`. Maximally monotone with `gra A = H × {v}`; its zero set
    /// is empty exactly when `v ≠ 0`.
    pub fn constant(v: Vector) -> Result<Self, Error> {
        check_finite(&v, "constant operator value")?;
        if v.is_empty() {
            return Err(Error::InvalidParameter("operator in dimension 0".into()));
        }
        let dim = v.len();
        Ok(OperatorSpec {
            kind: OperatorKind::Constant { v },
            dim,
        })
    }

    /// Subdifferential of a convex piecewise-linear function on `R`.
    ///
    /// `slopes.len() == breakpoints.len() + 1`, breakpoints strictly
    /// increasing, slopes nondecreasing (convexity).
    pub fn piecewise_linear_1d(breakpoints: Vec<f64>, slopes: Vec<f64>) -> Result<Self, Error> {
        if slopes.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "need {} slopes for {} breakpoints, got {}",
                breakpoints.len() + 1,
                breakpoints.len(),
                slopes.len()
            )));
        }
        if !breakpoints.iter().all(|t| t.is_finite()) || !slopes.iter().all(|s| s.is_finite()) {
            return Err(Error::NonFinite("piecewise data"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if slopes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "slopes must be nondecreasing for convexity".into(),
            ));
        }
        Ok(OperatorSpec {
            kind: OperatorKind::PiecewiseLinear1d {
                breakpoints,
                slopes,
            },
            dim: 1,
        })
    }

    /// `Ã = A + ∂ι_{B[0;r]}` for an inner operator with full domain.
    ///
    /// The construction needs `dom A ∩ B(0;r) ≠ ∅`; every admitted inner
    /// variant has `dom A = R^n`, so the hypothesis holds for any `r > 0`.
    /// Normal cones and nested ball augmentations are rejected: their
    /// augmented resolvents have no finite solve in this catalogue.
    pub fn ball_augmented(inner: OperatorSpec, radius: f64) -> Result<Self, Error> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        match inner.base_kind() {
            OperatorKind::NormalCone { .. } => {
                return Err(Error::InvalidParameter(
                    "ball augmentation of a normal cone has no exact resolvent here".into(),
                ))
            }
            OperatorKind::BallAugmented { .. } => {
                return Err(Error::InvalidParameter(
                    "ball augmentation cannot be nested".into(),
                ))
            }
            _ => {}
        }
        let dim = inner.dim;
        Ok(OperatorSpec {
            kind: OperatorKind::BallAugmented {
                inner: Box::new(inner),
                radius,
            },
            dim,
        })
    }

    /// `γA` for `γ > 0`.
    pub fn scaled(inner: OperatorSpec, factor: f64) -> Result<Self, Error> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scaling factor must be positive, got {factor}"
            )));
        }
        let dim = inner.dim;
        Ok(OperatorSpec {
            kind: OperatorKind::Scaled {
                inner: Box::new(inner),
                factor,
            },
            dim,
        })
    }

    /// Identity operator `A = Id`, i.e. `AffinePsd` with `Q = I`, `b = 0`.
    pub fn identity(dim: usize) -> Self {
        OperatorSpec::affine_psd(DMatrix::identity(dim, dim), Vector::zeros(dim)).unwrap()
    }

    /// Zero operator, whose resolvent is the identity map.
    pub fn zero(dim: usize) -> Self {
        OperatorSpec::affine_psd(DMatrix::zeros(dim, dim), Vector::zeros(dim)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// Unwraps `Scaled` layers to the underlying variant.
    fn base_kind(&self) -> &OperatorKind {
        match &self.kind {
            OperatorKind::Scaled { inner, .. } => inner.base_kind(),
            k => k,
        }
    }

    /// The effective affine form `(c', Q, b)` if this operator is an affine
    /// one under scaling: `A = γ(Qx + b)` acts under stepsize `c` exactly like
    /// `Qx + b` under `cγ`.
    fn affine_under_scaling(&self, c: f64) -> Option<(f64, &DMatrix<f64>, &Vector)> {
        match &self.kind {
            OperatorKind::AffinePsd { q, b } => Some((c, q, b)),
            OperatorKind::Scaled { inner, factor } => inner.affine_under_scaling(c * factor),
            _ => None,
        }
    }

    /// `J_{cA}(x) = (Id + cA)^{-1} x`.
    pub fn resolvent(&self, c: f64, x: &Vector) -> Result<Vector, Error> {
        self.resolvent_impl(c, x, None)
    }

    /// Same as [`resolvent`](Self::resolvent) but reuses matrix
    /// factorizations for repeated stepsizes; schedules usually hold `c`
    /// constant, which makes long runs one factorization plus back-solves.
    pub fn resolvent_cached(
        &self,
        c: f64,
        x: &Vector,
        cache: &FactorCache,
    ) -> Result<Vector, Error> {
        self.resolvent_impl(c, x, Some(cache))
    }

    fn resolvent_impl(
        &self,
        c: f64,
        x: &Vector,
        cache: Option<&FactorCache>,
    ) -> Result<Vector, Error> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "resolvent stepsize must be positive, got {c}"
            )));
        }
        check_dim(x, self.dim)?;
        check_finite(x, "resolvent input")?;
        match &self.kind {
            OperatorKind::AffinePsd { q, b } => affine_resolvent(q, b, c, x, cache),
            OperatorKind::NormalCone { set } => set.project(x),
            OperatorKind::Constant { v } => Ok(x - v * c),
            OperatorKind::PiecewiseLinear1d {
                breakpoints,
                slopes,
            } => Ok(Vector::from_element(
                1,
                piecewise_prox(breakpoints, slopes, c, x[0]),
            )),
            OperatorKind::BallAugmented { inner, radius } => {
                ball_resolvent(inner, *radius, c, x, cache)
            }
            OperatorKind::Scaled { inner, factor } => inner.resolvent_impl(c * factor, x, cache),
        }
    }

    /// Yosida approximation `(1/γ)(x − J_{γA} x)`; the pair
    /// `(J_{γA} x, yosida(γ, x))` lies on the graph of `A`.
    pub fn yosida(&self, gamma: f64, x: &Vector) -> Result<Vector, Error> {
        let j = self.resolvent(gamma, x)?;
        Ok((x - j) / gamma)
    }

    /// Reflected resolvent `T_c = 2 J_{cA} − Id`; nonexpansive.
    pub fn reflected_resolvent(&self, c: f64, x: &Vector) -> Result<Vector, Error> {
        let j = self.resolvent(c, x)?;
        Ok(j * 2.0 - x)
    }

    /// Residual of the stepsize identity
    /// `J_{λA}(x) = J_{μA}((μ/λ)x + (1 − μ/λ) J_{λA} x)`.
    ///
    /// Stays below `1e-9 · (1 + ‖x‖)` for every catalogued operator.
    pub fn resolvent_scaling_residual(
        &self,
        lambda: f64,
        mu: f64,
        x: &Vector,
    ) -> Result<f64, Error> {
        let jl = self.resolvent(lambda, x)?;
        let blended = x * (mu / lambda) + &jl * (1.0 - mu / lambda);
        let jm = self.resolvent(mu, &blended)?;
        Ok((jl - jm).norm())
    }

    /// Exact description of `zer A` where the catalogue permits one.
    pub fn zero_set_oracle(&self) -> ZeroSetOracle {
        zeros::oracle_for(self)
    }
}

/// Synchronized per-stepsize factorization store for affine resolvents.
///
/// Keyed by the exact bit pattern of the effective stepsize; intended to be
/// owned by one run (one operator), though sharing across threads is safe.
#[derive(Debug, Default)]
pub struct FactorCache {
    map: Mutex<HashMap<u64, Cholesky<f64, Dyn>>>,
}

impl FactorCache {
    pub fn new() -> Self {
        Self::default()
    }
}

fn affine_resolvent(
    q: &DMatrix<f64>,
    b: &Vector,
    c: f64,
    x: &Vector,
    cache: Option<&FactorCache>,
) -> Result<Vector, Error> {
    let rhs = x - b * c;
    if let Some(cache) = cache {
        let mut map = cache.map.lock().unwrap();
        let chol = match map.entry(c.to_bits()) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(factor(q, c)?),
        };
        return Ok(chol.solve(&rhs));
    }
    Ok(factor(q, c)?.solve(&rhs))
}

fn factor(q: &DMatrix<f64>, c: f64) -> Result<Cholesky<f64, Dyn>, Error> {
    let n = q.nrows();
    let m = DMatrix::identity(n, n) + q * c;
    // I + cQ is SPD for PSD Q and c > 0; a failure here is an internal error.
    Cholesky::new(m).ok_or_else(|| {
        Error::InvalidParameter("I + cQ failed to factor; operator matrix is not PSD".into())
    })
}

/// Prox of `c·f` for convex piecewise-linear `f` on `R`. The map
/// `y ↦ y + c·∂f(y)` is a monotone staircase; invert it by scanning.
fn piecewise_prox(breakpoints: &[f64], slopes: &[f64], c: f64, x: f64) -> f64 {
    let m = breakpoints.len();
    // Left-most unbounded segment.
    if m == 0 || x - c * slopes[0] < breakpoints[0] {
        return x - c * slopes[0];
    }
    for j in 0..m {
        let t = breakpoints[j];
        // x lands in the vertical part of the staircase at t.
        if x >= t + c * slopes[j] && x <= t + c * slopes[j + 1] {
            return t;
        }
        // x lands inside segment (t_j, t_{j+1}) with slope s_{j+1}.
        let y = x - c * slopes[j + 1];
        let upper = if j + 1 < m {
            breakpoints[j + 1]
        } else {
            f64::INFINITY
        };
        if y > t && y < upper {
            return y;
        }
    }
    x - c * slopes[m]
}

fn ball_resolvent(
    inner: &OperatorSpec,
    radius: f64,
    c: f64,
    x: &Vector,
    cache: Option<&FactorCache>,
) -> Result<Vector, Error> {
    // Multiplier λ = 0: the plain resolvent. Complementarity is satisfied
    // when it already lies in the ball, and then J_{cÃ} x = J_{cA} x.
    let y0 = inner.resolvent_impl(c, x, cache)?;
    if y0.norm() <= radius {
        return Ok(y0);
    }
    match &inner.kind {
        OperatorKind::Constant { v } => {
            // y(λ) = (x − cv)/(1 + λ): the boundary solution is the ball
            // projection of x − cv.
            let z = x - v * c;
            Ok(&z * (radius / z.norm()))
        }
        OperatorKind::PiecewiseLinear1d { .. } => {
            // Scalar case: prox of c(f + ι_[−r,r]) is the clamped prox.
            Ok(Vector::from_element(1, y0[0].clamp(-radius, radius)))
        }
        _ => {
            let (ce, q, b) = inner.affine_under_scaling(c).ok_or_else(|| {
                Error::InvalidParameter(
                    "ball augmentation needs an affine, constant, or scalar inner operator".into(),
                )
            })?;
            ball_affine_boundary(q, b, ce, radius, x)
        }
    }
}

/// Solve `(I + cQ + λI) y = x − cb` for the λ ≥ 0 with `‖y(λ)‖ = r`.
/// `‖y(λ)‖` is strictly decreasing in λ for PSD `Q`, so bisection cannot
/// miss; the bracket grows geometrically until it encloses the root.
fn ball_affine_boundary(
    q: &DMatrix<f64>,
    b: &Vector,
    c: f64,
    radius: f64,
    x: &Vector,
) -> Result<Vector, Error> {
    let n = q.nrows();
    let rhs = x - b * c;
    let eye = DMatrix::identity(n, n);
    let solve = |lambda: f64| -> Result<Vector, Error> {
        let m = &eye * (1.0 + lambda) + q * c;
        Cholesky::new(m)
            .ok_or_else(|| Error::RootFind("shifted system failed to factor".into()))
            .map(|ch| ch.solve(&rhs))
    };

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while solve(hi)?.norm() > radius {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 128 {
            return Err(Error::RootFind(
                "bracket for the ball multiplier did not close".into(),
            ));
        }
    }

    let tol = BALL_ROOT_TOL * radius;
    let mut y = solve(hi)?;
    for _ in 0..BALL_ROOT_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        y = solve(mid)?;
        let r = y.norm();
        if (r - radius).abs() <= tol {
            return Ok(y);
        }
        if r > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = y.norm();
    if (r - radius).abs() <= 1e-9 * radius {
        return Ok(y);
    }
    Err(Error::RootFind(format!(
        "ball multiplier bisection did not converge: |‖y‖ − r| = {:e}",
        (r - radius).abs()
    )))
}
