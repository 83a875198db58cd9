//! The three-sheeted surface. Sheets are copies of the plane cut
//! along
//!
//! ```text
//! sheet 1: Delta1 (real) and Delta2 (arc through b2, a2)
//! sheet 2: Delta1 and Delta3 (real)
//! sheet 3: Delta2 and Delta3
//! ```
//!
//! Crossing `Delta1` exchanges sheets 1 and 2, `Delta2` exchanges
//! 1 and 3, `Delta3` exchanges 2 and 3. Below the first critical
//! parameter `Delta3` is empty and `Delta1 = [a1, b1]`; above it
//! `Delta1 = [a_star, b1]` and `Delta3 = [a1, a_star]`, where
//! `a_star` is the single point where the arc meets the real axis.
//!
//! Branch values are labeled by continuation from the positive real
//! anchor beyond all branch points, where the three sheets separate
//! by their Laurent tails. A path from the anchor may cross cuts;
//! each crossing composes the corresponding sheet transposition into
//! the labeling instead of detouring, so every evaluation uses one
//! fixed, deterministic route.

use crate::curve::{BranchPointSet, CurveParam};
use crate::numerics::{self, C64};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sheet {
    One,
    Two,
    Three,
}

impl Sheet {
    pub fn index(self) -> usize {
        match self {
            Sheet::One => 0,
            Sheet::Two => 1,
            Sheet::Three => 2,
        }
    }

    pub fn from_index(k: usize) -> Sheet {
        [Sheet::One, Sheet::Two, Sheet::Three][k]
    }

    /// Label slots whose difference is the momentum on this sheet:
    /// `xi2 - xi3` on sheet 1, `xi1 - xi3` on sheet 2, `xi1 - xi2`
    /// on sheet 3.
    pub fn q_pair(self) -> (usize, usize) {
        match self {
            Sheet::One => (1, 2),
            Sheet::Two => (0, 2),
            Sheet::Three => (0, 1),
        }
    }
}

impl std::fmt::Display for Sheet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Boundary side of a cut. For the real cuts `Plus` is the upper
/// half plane. For the arc, oriented from `a2` up to `b2`, `Plus`
/// is the left side, which contains the far left real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cut {
    Delta1,
    Delta2,
    Delta3,
}

impl Cut {
    /// Sheet indices exchanged across this cut.
    pub fn swaps(self) -> (usize, usize) {
        match self {
            Cut::Delta1 => (0, 1),
            Cut::Delta2 => (0, 2),
            Cut::Delta3 => (1, 2),
        }
    }
}

/// Position of `tau` relative to the critical parameter at which the
/// third measure component appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Precritical,
    Supercritical,
}

/// A point tagged with the sheet it lives on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SheetPoint {
    pub z: C64,
    pub sheet: Sheet,
}

/// Cut layout for one parameter value, plus labeled evaluation.
#[derive(Debug, Clone)]
pub struct CutSystem {
    pub param: CurveParam,
    pub bps: BranchPointSet,
    pub regime: Regime,
    /// Real cut joining sheets 1 and 2.
    pub delta1: (f64, f64),
    /// Real cut joining sheets 2 and 3; empty below the critical
    /// parameter.
    pub delta3: Option<(f64, f64)>,
    /// Arc joining sheets 1 and 3, sampled as a polyline oriented
    /// from `a2` to `b2`. Empty until a trace supplies it; labeled
    /// evaluation is then only valid where no route meets the arc.
    pub delta2: Vec<C64>,
    /// Real-axis point of the arc.
    pub a_star: Option<f64>,
}

impl CutSystem {
    pub fn without_arc(param: CurveParam, regime: Regime, a_star: Option<f64>) -> Result<CutSystem> {
        let bps = param.branch_points()?;
        let (delta1, delta3) = match regime {
            Regime::Precritical => ((bps.a1, bps.b1), None),
            Regime::Supercritical => {
                let s = a_star.ok_or_else(|| {
                    Error::Geometry("supercritical cut layout needs the arc crossing point".into())
                })?;
                if !(bps.a1 < s && s < bps.b1) {
                    return Err(Error::Geometry(format!(
                        "arc crossing {s} outside ({}, {})",
                        bps.a1, bps.b1
                    )));
                }
                ((s, bps.b1), Some((bps.a1, s)))
            }
        };
        Ok(CutSystem {
            param,
            bps,
            regime,
            delta1,
            delta3,
            delta2: Vec::new(),
            a_star,
        })
    }

    /// Install the traced arc. Records its real-axis crossing as
    /// `a_star` if none was given at construction.
    pub fn set_arc(&mut self, polyline: Vec<C64>) -> Result<()> {
        if polyline.len() < 2 {
            return Err(Error::Geometry("arc polyline too short".into()));
        }
        let mut crossing = None;
        for w in polyline.windows(2) {
            if w[0].im * w[1].im < 0.0 {
                let t = w[0].im / (w[0].im - w[1].im);
                crossing = Some(w[0].re + t * (w[1].re - w[0].re));
            }
        }
        if crossing.is_none() {
            return Err(Error::Geometry("arc never meets the real axis".into()));
        }
        if self.a_star.is_none() {
            self.a_star = crossing;
        }
        self.delta2 = polyline;
        Ok(())
    }

    pub fn anchor_radius(&self) -> f64 {
        self.param.anchor_radius(&self.bps)
    }

    /// Distance from `z` to the nearest cut.
    pub fn distance_to_cuts(&self, z: C64) -> f64 {
        let mut d = dist_to_interval(z, self.delta1);
        if let Some(iv) = self.delta3 {
            d = d.min(dist_to_interval(z, iv));
        }
        for e in self.delta2.windows(2) {
            d = d.min(dist_to_segment(z, e[0], e[1]));
        }
        d
    }

    /// All three labeled branch values at `z`, which must stay clear
    /// of every cut.
    pub fn xi_all(&self, z: C64) -> Result<[C64; 3]> {
        if self.distance_to_cuts(z) < 1e-9 * (1.0 + z.norm()) {
            return Err(Error::Geometry(format!(
                "z = {z} lies on a cut; use a boundary evaluation"
            )));
        }
        let mut path = self.route(z);
        path.push(z);
        self.labeled_along(&path)
    }

    pub fn xi_on_sheet(&self, p: SheetPoint) -> Result<C64> {
        Ok(self.xi_all(p.z)?[p.sheet.index()])
    }

    /// Momentum on a sheet: the difference of the two other labeled
    /// branch values, fixed order `q_pair`.
    pub fn q_on_sheet(&self, p: SheetPoint) -> Result<C64> {
        let xs = self.xi_all(p.z)?;
        let (i, j) = p.sheet.q_pair();
        Ok(xs[i] - xs[j])
    }

    /// Labeled boundary triple at real `x` inside one of the real
    /// cuts, approached from above (`Plus`) or below.
    pub fn xi_boundary_real(&self, x: f64, side: Side) -> Result<[C64; 3]> {
        let in1 = x > self.delta1.0 && x < self.delta1.1;
        let in3 = self.delta3.is_some_and(|(lo, hi)| x > lo && x < hi);
        if !in1 && !in3 {
            return Err(Error::Geometry(format!("x = {x} not inside a real cut")));
        }
        let s = if side == Side::Plus { 1.0 } else { -1.0 };
        self.approach(C64::from(x), C64::new(0.0, s))
    }

    /// Labeled boundary triple at vertex `k` of the arc polyline.
    /// `Plus` approaches from the left of the `a2 -> b2` direction.
    pub fn xi_boundary_arc(&self, k: usize, side: Side) -> Result<[C64; 3]> {
        let n = self.delta2.len();
        if n < 2 || k >= n {
            return Err(Error::Geometry(format!("arc vertex {k} out of range")));
        }
        let p = self.delta2[k];
        let tangent = if k + 1 < n {
            self.delta2[k + 1] - p
        } else {
            p - self.delta2[k - 1]
        };
        let normal = C64::i() * tangent / tangent.norm();
        let s = if side == Side::Plus { 1.0 } else { -1.0 };
        self.approach(p, s * normal)
    }

    fn approach(&self, p: C64, dir_unit: C64) -> Result<[C64; 3]> {
        let d = 0.1 * (1.0 + p.norm());
        let w0 = p + d * dir_unit;
        let mut path = self.route(w0);
        let n = 40;
        for k in 0..=n {
            let t = k as f64 / n as f64;
            path.push(w0 + t * (p - w0));
        }
        self.labeled_along(&path)
    }

    /// Route from the labeling anchor to just before `target`: an arc
    /// at the anchor radius, a radial descent, and a final straight
    /// leg from the offset point `target + i s d` within the target's
    /// half plane. The caller appends its own final leg.
    fn route(&self, target: C64) -> Vec<C64> {
        let r_far = self.anchor_radius();
        let s = if target.im >= 0.0 { 1.0 } else { -1.0 };
        let d = 0.25 * (1.0 + target.norm());
        let w = target + C64::new(0.0, s * d);
        let phi = w.arg();
        let mut path = vec![C64::from(r_far)];
        let n_arc = ((phi.abs() / 0.05).ceil() as usize).max(1);
        for k in 1..=n_arc {
            let th = phi * k as f64 / n_arc as f64;
            path.push(r_far * C64::new(th.cos(), th.sin()));
        }
        let n_rad = 160;
        let lr = (w.norm() / r_far).ln();
        let e_phi = C64::new(phi.cos(), phi.sin());
        for k in 1..=n_rad {
            let r = r_far * (lr * k as f64 / n_rad as f64).exp();
            path.push(r * e_phi);
        }
        let n_in = 40;
        for k in 1..=n_in {
            let t = k as f64 / n_in as f64;
            path.push(w + t * (target - w));
        }
        path
    }

    fn labeled_along(&self, path: &[C64]) -> Result<[C64; 3]> {
        let solve = |z: C64| self.param.xi_roots(z);
        let start = self.param.xi_far_labeled(path[0].re)?;
        let mut chains = Vec::new();
        numerics::continue_triple(&solve, start, path, &mut chains)?;
        let end = *chains.last().unwrap();
        // slot -> sheet map, updated at each cut crossing
        let mut m = [0usize, 1, 2];
        for (_, cut) in self.crossing_events(path) {
            let (i, j) = cut.swaps();
            for slot in m.iter_mut() {
                if *slot == i {
                    *slot = j;
                } else if *slot == j {
                    *slot = i;
                }
            }
        }
        let mut out = [C64::new(0.0, 0.0); 3];
        for slot in 0..3 {
            out[m[slot]] = end[slot];
        }
        Ok(out)
    }

    /// Transversal cut crossings along a polyline path, ordered by
    /// path position. Touches at segment endpoints do not count, so
    /// a path may legitimately terminate on a cut.
    fn crossing_events(&self, path: &[C64]) -> Vec<(f64, Cut)> {
        let mut ev: Vec<(f64, Cut)> = Vec::new();
        for (i, seg) in path.windows(2).enumerate() {
            let (p, q) = (seg[0], seg[1]);
            if p.im * q.im < 0.0 {
                let t = p.im / (p.im - q.im);
                let x = p.re + t * (q.re - p.re);
                let gt = i as f64 + t;
                if x > self.delta1.0 && x < self.delta1.1 {
                    ev.push((gt, Cut::Delta1));
                }
                if let Some((lo, hi)) = self.delta3 {
                    if x > lo && x < hi {
                        ev.push((gt, Cut::Delta3));
                    }
                }
            }
            for e in self.delta2.windows(2) {
                if let Some(t) = segment_crossing(p, q, e[0], e[1]) {
                    ev.push((i as f64 + t, Cut::Delta2));
                }
            }
        }
        ev.sort_by(|a, b| a.0.total_cmp(&b.0));
        ev.dedup_by(|a, b| a.1 == b.1 && (a.0 - b.0).abs() < 1e-9);
        ev
    }
}

fn dist_to_interval(z: C64, (lo, hi): (f64, f64)) -> f64 {
    let dx = if z.re < lo {
        lo - z.re
    } else if z.re > hi {
        z.re - hi
    } else {
        0.0
    };
    (dx * dx + z.im * z.im).sqrt()
}

fn dist_to_segment(z: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + t * ab)).norm()
}

fn orient(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Parameter along `p -> q` of a proper crossing with `u -> v`, if
/// one exists. Degenerate touches return `None`.
fn segment_crossing(p: C64, q: C64, u: C64, v: C64) -> Option<f64> {
    let d1 = orient(p, q, u);
    let d2 = orient(p, q, v);
    let d3 = orient(u, v, p);
    let d4 = orient(u, v, q);
    if d1 == 0.0 || d2 == 0.0 || d3 == 0.0 || d4 == 0.0 {
        return None;
    }
    if (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) {
        Some(d3 / (d3 - d4))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // The arc cut stays in the left half plane for every parameter
    // used here, so a system without the arc labels correctly at any
    // point whose route stays on the right.

    fn sys(tau: f64) -> CutSystem {
        CutSystem::without_arc(CurveParam::new(tau).unwrap(), Regime::Precritical, None).unwrap()
    }

    #[test]
    fn layout_follows_the_regime() {
        let s = sys(0.1);
        assert_eq!(s.delta1, (s.bps.a1, s.bps.b1));
        assert!(s.delta3.is_none());
        let p = CurveParam::new(0.2).unwrap();
        assert!(CutSystem::without_arc(p, Regime::Supercritical, None).is_err());
        let sup = CutSystem::without_arc(p, Regime::Supercritical, Some(-0.1)).unwrap();
        assert_eq!(sup.delta1.1, sup.bps.b1);
        assert_eq!(sup.delta1.0, -0.1);
        assert_eq!(sup.delta3, Some((sup.bps.a1, -0.1)));
    }

    #[test]
    fn labeled_values_solve_the_curve_and_split_by_size() {
        let s = sys(0.1);
        for z in [C64::new(2.0, 0.5), C64::new(1.0, 1.2), C64::new(0.4, 0.9)] {
            let xs = s.xi_all(z).unwrap();
            for x in xs {
                let res = x * x * x - s.param.eval_r(z) * x + s.param.eval_d(z);
                assert!(res.norm() < 1e-9 * (1.0 + x.norm().powi(3)));
            }
            // the first sheet carries the large branch
            let d0 = (xs[0] - 2.0 * z * z).norm();
            assert!(d0 < (xs[1] - 2.0 * z * z).norm());
            assert!(d0 < (xs[2] - 2.0 * z * z).norm());
        }
    }

    #[test]
    fn labels_commute_with_conjugation() {
        let s = sys(0.1);
        for z in [C64::new(1.3, 0.7), C64::new(0.5, 0.3), C64::new(2.0, -1.1)] {
            let a = s.xi_all(z).unwrap();
            let b = s.xi_all(z.conj()).unwrap();
            for k in 0..3 {
                assert!((a[k].conj() - b[k]).norm() < 1e-9, "sheet {k} at {z}");
            }
        }
    }

    #[test]
    fn first_cut_boundary_values_pair_up() {
        let s = sys(0.1);
        let x = 0.5 * (s.delta1.0 + s.delta1.1);
        let up = s.xi_boundary_real(x, Side::Plus).unwrap();
        let dn = s.xi_boundary_real(x, Side::Minus).unwrap();
        // sheet 3 passes through untouched and stays real
        assert!(up[2].im.abs() < 1e-9);
        assert!((up[2] - dn[2]).norm() < 1e-9);
        // sheets 1 and 2 meet in a conjugate pair and swap sides
        assert!((up[0] - up[1].conj()).norm() < 1e-9);
        assert!((up[0] - dn[1]).norm() < 1e-9);
        assert!((up[1] - dn[0]).norm() < 1e-9);
        // the jump of sheet 1 across the cut gives a positive density
        assert!(up[0].im > 1e-3);
    }

    #[test]
    fn real_points_beyond_the_node_order_as_expected() {
        for tau in [0.1, 0.2] {
            let p = CurveParam::new(tau).unwrap();
            let s = match tau < 0.19 {
                true => CutSystem::without_arc(p, Regime::Precritical, None).unwrap(),
                false => CutSystem::without_arc(p, Regime::Supercritical, Some(0.0)).unwrap(),
            };
            let x = C64::from(s.bps.b_star + 0.4);
            let xs = s.xi_all(x).unwrap();
            for v in xs {
                assert!(v.im.abs() < 1e-9);
            }
            assert!(xs[1].re < xs[2].re && xs[2].re < xs[0].re, "tau = {tau}");
        }
    }

    #[test]
    fn on_cut_points_are_rejected_without_a_side() {
        let s = sys(0.1);
        let x = 0.5 * (s.delta1.0 + s.delta1.1);
        assert!(s.xi_all(C64::from(x)).is_err());
        assert!(s.xi_boundary_real(s.bps.b1 + 0.2, Side::Plus).is_err());
    }
}
