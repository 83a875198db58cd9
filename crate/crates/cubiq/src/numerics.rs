//! Scalar numeric kernels shared by the higher modules: closed-form
//! cubic roots, quartic roots through a companion matrix, root-chain
//! matching for analytic continuation, quadrature nodes, bisection,
//! and a log-log slope fit.

use crate::{Error, Result};
use nalgebra::Matrix4;

pub type C64 = num_complex::Complex64;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Primitive cube root of unity.
pub const OMEGA: C64 = C64::new(-0.5, SQRT3 / 2.0);

/// Roots of the depressed cubic `t^3 + p t + q = 0`.
///
/// Cardano with the square-root branch chosen to avoid cancellation,
/// then two Newton polish steps per root. Near a double root the
/// result is accurate to about sqrt(eps) times the root scale, which
/// is inherent in the problem, not the method.
pub fn cubic_roots(p: C64, q: C64) -> [C64; 3] {
    let mh = -q / 2.0;
    let mut s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    if (mh.conj() * s).re < 0.0 {
        s = -s;
    }
    let w = mh + s;
    let scale = p.norm().sqrt().max(q.norm().cbrt());
    let mut roots = if w.norm() <= 1e-18 * scale.powi(3) + 1e-300 {
        // p and q both vanish to working precision: triple root.
        let u = (-q).cbrt();
        [u, u * OMEGA, u * OMEGA.conj()]
    } else {
        let u = w.cbrt();
        let r0 = u - p / (3.0 * u);
        let u1 = u * OMEGA;
        let u2 = u * OMEGA.conj();
        [r0, u1 - p / (3.0 * u1), u2 - p / (3.0 * u2)]
    };
    for r in &mut roots {
        for _ in 0..2 {
            let fp = 3.0 * *r * *r + p;
            if fp.norm() <= 1e-10 * (3.0 * r.norm_sqr() + p.norm()) + 1e-300 {
                break;
            }
            let f = *r * *r * *r + p * *r + q;
            *r -= f / fp;
        }
    }
    roots
}

/// Roots of `c[0] z^4 + c[1] z^3 + c[2] z^2 + c[3] z + c[4] = 0`
/// with `c[0] != 0`: companion-matrix eigenvalues, then two Newton
/// polish steps per root.
pub fn quartic_roots(c: [f64; 5]) -> Result<[C64; 4]> {
    if c[0] == 0.0 || !c.iter().all(|x| x.is_finite()) {
        return Err(Error::RootFind("quartic: bad leading coefficient".into()));
    }
    let e: [f64; 4] = [c[1] / c[0], c[2] / c[0], c[3] / c[0], c[4] / c[0]];
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 0.0, 0.0, -e[3],
        1.0, 0.0, 0.0, -e[2],
        0.0, 1.0, 0.0, -e[1],
        0.0, 0.0, 1.0, -e[0],
    );
    let ev = m.complex_eigenvalues();
    let mut roots = [C64::new(0.0, 0.0); 4];
    for (k, r) in roots.iter_mut().enumerate() {
        let mut z = C64::new(ev[k].re, ev[k].im);
        for _ in 0..2 {
            let fp = ((4.0 * z + 3.0 * e[0]) * z + 2.0 * e[1]) * z + e[2];
            if fp.norm() <= 1e-12 * (1.0 + z.norm()).powi(3) {
                break;
            }
            let f = (((z + e[0]) * z + e[1]) * z + e[2]) * z + e[3];
            z -= f / fp;
        }
        *r = z;
    }
    Ok(roots)
}

/// Quartic residual `|q(z)|` for the same coefficient layout.
pub fn quartic_eval(c: [f64; 5], z: C64) -> C64 {
    (((C64::from(c[0]) * z + c[1]) * z + c[2]) * z + c[3]) * z + c[4]
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Reorder `cur` so that slot `k` stays on the chain through
/// `prev[k]`: the permutation minimizing the largest slot
/// displacement. Returns the reordered triple and that displacement.
pub fn match_triple(prev: [C64; 3], cur: [C64; 3]) -> ([C64; 3], f64) {
    let mut best = f64::INFINITY;
    let mut pick = PERMS3[0];
    for perm in PERMS3 {
        let d = (0..3)
            .map(|k| (prev[k] - cur[perm[k]]).norm())
            .fold(0.0_f64, f64::max);
        if d < best {
            best = d;
            pick = perm;
        }
    }
    ([cur[pick[0]], cur[pick[1]], cur[pick[2]]], best)
}

/// Smallest pairwise distance within a triple.
pub fn min_gap(t: [C64; 3]) -> f64 {
    let d01 = (t[0] - t[1]).norm();
    let d02 = (t[0] - t[2]).norm();
    let d12 = (t[1] - t[2]).norm();
    d01.min(d02).min(d12)
}

/// Continue a root triple along `path` by repeated matching.
///
/// `solve` returns the unordered roots over a point. Whenever the
/// matched displacement exceeds a tenth of the local root gap the
/// step is bisected, up to 40 levels, so chains never jump between
/// branches near a collision.
pub fn continue_triple<F>(
    solve: &F,
    start: [C64; 3],
    path: &[C64],
    out: &mut Vec<[C64; 3]>,
) -> Result<()>
where
    F: Fn(C64) -> [C64; 3],
{
    if path.is_empty() {
        return Err(Error::Continuation("empty path".into()));
    }
    out.clear();
    out.reserve(path.len());
    let (first, _) = match_triple(start, solve(path[0]));
    let mut cur = first;
    out.push(first);
    for win in path.windows(2) {
        cur = step_triple(solve, cur, win[0], win[1], 0)?;
        out.push(cur);
    }
    Ok(())
}

fn step_triple<F>(solve: &F, prev: [C64; 3], z0: C64, z1: C64, depth: u32) -> Result<[C64; 3]>
where
    F: Fn(C64) -> [C64; 3],
{
    let (m, disp) = match_triple(prev, solve(z1));
    let gap = min_gap(m).min(min_gap(prev));
    if disp <= 0.1 * gap || (z1 - z0).norm() < 1e-15 * (1.0 + z1.norm()) {
        return Ok(m);
    }
    if depth >= 40 {
        return Err(Error::Continuation(format!(
            "matching did not settle near z = {z1}"
        )));
    }
    let mid = 0.5 * (z0 + z1);
    let half = step_triple(solve, prev, z0, mid, depth + 1)?;
    step_triple(solve, half, mid, z1, depth + 1)
}

/// `n + 1` equally spaced samples of `[lo, hi]` including both ends.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .collect()
}

/// Trapezoid rule over equally spaced samples with complex step `h`,
/// so a straight segment in the plane integrates directly.
pub fn trapezoid(values: &[C64], h: C64) -> C64 {
    if values.len() < 2 {
        return C64::new(0.0, 0.0);
    }
    let inner: C64 = values[1..values.len() - 1].iter().sum();
    (inner + 0.5 * (values[0] + values[values.len() - 1])) * h
}

/// Quadrature nodes for a density on `[lo, hi]` that may blow up like
/// an inverse fractional power at the ends: substitute
/// `x = lo + (hi-lo)(1-cos(theta))/2` and apply the trapezoid rule in
/// `theta`. Node `k` carries weight `w_k` so that
/// `integral f dx ~ sum w_k f(x_k)`; the endpoint weights vanish, so
/// the integrand is never evaluated where it is singular.
pub fn cos_graded_nodes(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let h = std::f64::consts::PI / n as f64;
    let half = 0.5 * (hi - lo);
    (0..=n)
        .map(|k| {
            let th = h * k as f64;
            let x = lo + half * (1.0 - th.cos());
            let w = if k == 0 || k == n {
                0.0
            } else {
                half * th.sin() * h
            };
            (x, w)
        })
        .collect()
}

/// Sign-change bisection for a continuous scalar function.
/// `f(lo)` and `f(hi)` must have opposite signs.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFind(format!(
            "no sign change on [{lo}, {hi}]: f = {flo:.3e}, {fhi:.3e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
