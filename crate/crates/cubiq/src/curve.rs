//! The plane curve family. For `tau` in `[0, 1/4)` put
//! `alpha = (1 - sqrt(1 - 4 tau)) / 2` and let `c` be the real
//! solution of `64 c^3 + 243 (1 - 4 tau)^2 = 0`. The curve is
//!
//! ```text
//! xi^3 - R(z) xi + D(z) = 0
//! R(z) = 3 z^4 - 3 z - c
//! D(z) = -2 z^6 + 3 z^3 + c z^2 - 3 tau
//! ```
//!
//! Its discriminant factors over the rationals in `u = (1-4tau)^(1/3)`:
//!
//! ```text
//! 4 R^3 - 27 D^2 = (243/256) q1(z) q2(z)^2
//! q2(z) = 3^(1/3) u z - 1
//! ```
//!
//! with `q1` quartic. The simple zeros of the discriminant, the four
//! roots of `q1`, are the branch points: `a1 < b1` real and a
//! conjugate pair `a2 = conj(b2)`, `Im b2 > 0`. The double zero
//! `b_star = (3 (1 - 4 tau))^(-1/3)` of the discriminant is a node:
//! two branches cross there without ramification. At `tau = 0` the
//! pair `a1 = b1` merges; at `tau = 1/12` the node lands on `b1`.

use crate::numerics::{self, C64};
use crate::{Error, Result};
use serde::Serialize;

/// Largest admissible `tau`. The family continues to `1/4` but the
/// conjugate branch points collide with the real axis in the limit,
/// so the solvers stop slightly short.
pub const TAU_MAX: f64 = 0.2499;

/// Curve parameters: `tau`, the mass split `alpha (1 - alpha) = tau`
/// with `alpha < 1/2`, and the field constant `c`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveParam {
    pub tau: f64,
    pub alpha: f64,
    pub c: f64,
}

/// Zeros of the curve discriminant, as points in the `z` plane.
/// `a2 = conj(b2)` is kept implicit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchPointSet {
    pub a1: f64,
    pub b1: f64,
    pub b2: C64,
    pub b_star: f64,
    /// `a1 == b1` to working precision (only at `tau = 0`).
    pub a1_eq_b1: bool,
    /// `b1 == b_star` to the coincidence tolerance (near `tau = 1/12`).
    pub b1_eq_bstar: bool,
}

impl BranchPointSet {
    pub fn a2(&self) -> C64 {
        self.b2.conj()
    }

    /// Largest modulus among the four branch points and the node.
    pub fn max_modulus(&self) -> f64 {
        self.a1
            .abs()
            .max(self.b1.abs())
            .max(self.b2.norm())
            .max(self.b_star.abs())
    }
}

impl CurveParam {
    pub fn new(tau: f64) -> Result<Self> {
        if !(0.0..=TAU_MAX).contains(&tau) {
            return Err(Error::ParamDomain(format!(
                "tau = {tau} outside [0, {TAU_MAX}]"
            )));
        }
        let s = 1.0 - 4.0 * tau;
        let alpha = (1.0 - s.sqrt()) / 2.0;
        let c = -(243.0 / 64.0 * s * s).cbrt();
        Ok(CurveParam { tau, alpha, c })
    }

    pub fn eval_r(&self, z: C64) -> C64 {
        (3.0 * z * z * z - 3.0) * z - self.c
    }

    pub fn eval_d(&self, z: C64) -> C64 {
        let z3 = z * z * z;
        (-2.0 * z3 + 3.0) * z3 + self.c * z * z - 3.0 * self.tau
    }

    /// Unordered branch values over `z`.
    pub fn xi_roots(&self, z: C64) -> [C64; 3] {
        numerics::cubic_roots(-self.eval_r(z), self.eval_d(z))
    }

    /// Coefficients of `q1`, leading power first.
    pub fn q1_coeffs(&self) -> [f64; 5] {
        let u = (1.0 - 4.0 * self.tau).cbrt();
        let t13 = 3.0_f64.cbrt();
        let t23 = 9.0_f64.cbrt();
        [
            256.0 / (3.0 * t23) * u,
            128.0 / 9.0,
            16.0 / t13 * u * u,
            -32.0 * t13 * u,
            16.0 * (1.0 - 8.0 * self.tau),
        ]
    }

    pub fn q2(&self, z: C64) -> C64 {
        3.0_f64.cbrt() * (1.0 - 4.0 * self.tau).cbrt() * z - 1.0
    }

    /// Discriminant of the cubic in `xi` over `z`.
    pub fn discriminant(&self, z: C64) -> C64 {
        let r = self.eval_r(z);
        let d = self.eval_d(z);
        4.0 * r * r * r - 27.0 * d * d
    }

    /// The factored form `(243/256) q1 q2^2`, for consistency checks
    /// against `discriminant`.
    pub fn discriminant_factored(&self, z: C64) -> C64 {
        let c = self.q1_coeffs();
        let q1 = numerics::quartic_eval(c, z);
        let q2 = self.q2(z);
        243.0 / 256.0 * q1 * q2 * q2
    }

    pub fn b_star(&self) -> f64 {
        (3.0 * (1.0 - 4.0 * self.tau)).powf(-1.0 / 3.0)
    }

    pub fn branch_points(&self) -> Result<BranchPointSet> {
        self.branch_points_tol(1e-7)
    }

    /// `coincidence_tol` scales the test for `b1 == b_star`; the
    /// realness collapse for quartic roots is fixed at `1e-7` times
    /// the root scale, matched to eigenvalue accuracy at the `tau = 0`
    /// double root.
    pub fn branch_points_tol(&self, coincidence_tol: f64) -> Result<BranchPointSet> {
        let coef = self.q1_coeffs();
        let roots = numerics::quartic_roots(coef)?;
        let mut reals: Vec<f64> = Vec::new();
        let mut uppers: Vec<C64> = Vec::new();
        for r in roots {
            if r.im.abs() < 1e-7 * (1.0 + r.norm()) {
                reals.push(r.re);
            } else if r.im > 0.0 {
                uppers.push(r);
            }
        }
        if reals.len() != 2 || uppers.len() != 1 {
            return Err(Error::Geometry(format!(
                "branch points: expected two real roots and a conjugate pair, got {} real at tau = {}",
                reals.len(),
                self.tau
            )));
        }
        reals.sort_by(f64::total_cmp);
        let (mut a1, mut b1) = (reals[0], reals[1]);
        let mut a1_eq_b1 = false;
        if (b1 - a1).abs() < 1e-6 * (1.0 + a1.abs()) {
            // A merged pair is a double root of q1; Newton on q1' is
            // well conditioned there while the plain roots are not.
            let mut z = 0.5 * (a1 + b1);
            for _ in 0..60 {
                let dq = ((4.0 * coef[0] * z + 3.0 * coef[1]) * z + 2.0 * coef[2]) * z + coef[3];
                let ddq = (12.0 * coef[0] * z + 6.0 * coef[1]) * z + 2.0 * coef[2];
                let step = dq / ddq;
                z -= step;
                if step.abs() < 1e-16 * (1.0 + z.abs()) {
                    break;
                }
            }
            let qnorm: f64 = coef
                .iter()
                .enumerate()
                .map(|(k, ck)| ck.abs() * z.abs().max(1.0).powi(4 - k as i32))
                .sum();
            if numerics::quartic_eval(coef, C64::from(z)).norm() < 1e-8 * qnorm {
                a1 = z;
                b1 = z;
                a1_eq_b1 = true;
            }
        }
        let b2 = uppers[0];
        let b_star = self.b_star();
        Ok(BranchPointSet {
            a1,
            b1,
            b2,
            b_star,
            a1_eq_b1,
            b1_eq_bstar: (b1 - b_star).abs() < coincidence_tol * (1.0 + b_star.abs()),
        })
    }

    /// Radius beyond every branch point at which the three branches
    /// are separated enough to label by their Laurent behavior.
    pub fn anchor_radius(&self, bps: &BranchPointSet) -> f64 {
        10.0 * (1.0 + bps.max_modulus())
    }

    /// Branch values at large real `x > 0`, labeled by the expansions
    ///
    /// ```text
    /// xi_1 = 2 x^2 - 1/x + O(x^-2)
    /// xi_2 = - x^2 + alpha/x + O(x^-2)
    /// xi_3 = - x^2 + (1 - alpha)/x + O(x^-2)
    /// ```
    ///
    /// Fails if the nearest-target assignment is not a bijection.
    pub fn xi_far_labeled(&self, x: f64) -> Result<[C64; 3]> {
        let roots = self.xi_roots(C64::from(x));
        let targets = [
            2.0 * x * x - 1.0 / x,
            -x * x + self.alpha / x,
            -x * x + (1.0 - self.alpha) / x,
        ];
        let mut picked = [usize::MAX; 3];
        for (j, t) in targets.iter().enumerate() {
            let mut best = f64::INFINITY;
            for (k, r) in roots.iter().enumerate() {
                let d = (r - t).norm();
                if d < best {
                    best = d;
                    picked[j] = k;
                }
            }
        }
        if picked[0] == picked[1] || picked[0] == picked[2] || picked[1] == picked[2] {
            return Err(Error::Geometry(format!(
                "asymptotic labels collide at x = {x}"
            )));
        }
        Ok([roots[picked[0]], roots[picked[1]], roots[picked[2]]])
    }

    /// Real roots `c` of the companion family condition
    /// `c^6 - 486 tau (1 + tau) c^3 + 2187 tau (3 tau - 1)^3 = 0`,
    /// ascending. (Data for comparison runs; nothing downstream uses
    /// these.)
    pub fn genus_one_c(tau: f64) -> [f64; 2] {
        let s = 3.0_f64.sqrt() * (1.0 + 9.0 * tau) * tau.sqrt();
        let base = 9.0 * tau + 9.0 * tau * tau;
        let mut out = [3.0 * (base - s).cbrt(), 3.0 * (base + s).cbrt()];
        out.sort_by(f64::total_cmp);
        out
    }
}
