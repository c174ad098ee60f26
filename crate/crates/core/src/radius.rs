//! Radius equations and their roots, the half-plane map's closed-form radii,
//! and the rational identities witnessing sharpness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::criteria::{BoundFamily, Order, Property};
use crate::error::{Error, Result};
use crate::gallery::{gallery, GalleryId};
use crate::harmonic::HarmonicMap;
pub use crate::verifier::{RadiusResult, RadiusSource};

pub const GRID_POINTS: usize = 10_000;
pub const MAX_RESIDUAL: f64 = 1e-12;
pub const MIN_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RadiusEquationId {
    Eq3_2,
    Eq3_5,
    Eq3_6,
    Eq3_7,
    Eq4_1,
    Eq4_2,
    Eq4_3,
}

impl RadiusEquationId {
    pub fn all() -> [RadiusEquationId; 7] {
        use RadiusEquationId::*;
        [Eq3_2, Eq3_5, Eq3_6, Eq3_7, Eq4_1, Eq4_2, Eq4_3]
    }

    /// Coefficient-bound family and property whose worst-case sum the
    /// equation balances.
    pub fn family(self) -> (BoundFamily, Property) {
        use RadiusEquationId::*;
        match self {
            Eq3_2 => (BoundFamily::Eq12, Property::Starlike),
            Eq3_5 => (BoundFamily::Eq12, Property::Convex),
            Eq3_6 => (BoundFamily::Eq14, Property::Starlike),
            Eq3_7 => (BoundFamily::Eq14, Property::Convex),
            Eq4_1 => (BoundFamily::Eq42sq, Property::Starlike),
            Eq4_2 => (BoundFamily::Eq42sq, Property::Convex),
            Eq4_3 => (BoundFamily::Eq46, Property::Starlike),
        }
    }

    /// Extremal map attaining the radius. Convex cases use the extremal with
    /// its co-analytic part negated.
    pub fn extremal(self, truncation: usize) -> HarmonicMap {
        use RadiusEquationId::*;
        let id = match self {
            Eq3_2 | Eq3_5 => GalleryId::Extremal31,
            Eq3_6 | Eq3_7 => GalleryId::Extremal35,
            Eq4_1 | Eq4_2 => GalleryId::Extremal42,
            Eq4_3 => GalleryId::Extremal46,
        };
        let f = gallery(&id, truncation).expect("fixed entry");
        match self.family().1 {
            Property::Starlike => f,
            Property::Convex => f.negate_coanalytic(),
        }
    }
}

impl fmt::Display for RadiusEquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for RadiusEquationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RadiusEquationId::all()
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::UnknownEquation(s.to_string()))
    }
}

/// The radius polynomial in its factored form.
pub fn equation_value(id: RadiusEquationId, alpha: Order, r: f64) -> f64 {
    use RadiusEquationId::*;
    let a = alpha.value();
    let m = 1.0 - r;
    let p = 1.0 + r;
    match id {
        Eq3_2 => 2.0 * (1.0 - a) * m.powi(4) + a * m.powi(2) - p.powi(2),
        Eq3_5 => {
            2.0 * (1.0 - a) * m.powi(5) + a * p * m.powi(2) - p * (r * r + 6.0 * r + 1.0)
        }
        Eq3_6 => (2.0 - a) * m.powi(3) + a * r * m.powi(2) - 1.0 - r,
        Eq3_7 => 2.0 * (1.0 - a) * m.powi(4) + a * m.powi(2) - (r * r + 4.0 * r + 1.0),
        Eq4_1 => 2.0 * (1.0 - a) * m.powi(4) + a * m.powi(2) - (r * r + r + 1.0),
        Eq4_2 => {
            2.0 * (1.0 - a) * m.powi(5) + a * p * m.powi(2) - p * (r * r + 4.0 * r + 1.0)
        }
        Eq4_3 => {
            12.0 * (1.0 - a) * m.powi(5) + a * (r * r + 3.0 * r + 6.0) * m.powi(2)
                - 6.0 * p.powi(3)
        }
    }
}

struct Root {
    radius: f64,
    bracket: [f64; 2],
    iterations: usize,
}

/// Bisection on a sign-changing bracket, stopping once the bracket is below
/// `tol` and `|q| < MAX_RESIDUAL`, or the bracket cannot shrink further.
fn bisect(q: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<Root> {
    let mut qlo = q(lo);
    if qlo * q(hi) > 0.0 {
        return Err(Error::BracketFailure { lo, hi });
    }
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        let qm = q(mid);
        if (hi - lo <= tol && qm.abs() < MAX_RESIDUAL) || mid <= lo || mid >= hi || qm == 0.0 {
            return Ok(Root {
                radius: mid,
                bracket: [lo, hi],
                iterations,
            });
        }
        iterations += 1;
        if (qm > 0.0) == (qlo > 0.0) {
            lo = mid;
            qlo = qm;
        } else {
            hi = mid;
        }
    }
}

/// Brackets of the sign changes of `q` on a uniform grid over `[0, 1]`.
fn sign_changes(q: &dyn Fn(f64) -> f64, points: usize) -> Vec<(f64, f64)> {
    let xs: Vec<f64> = (0..=points).map(|i| i as f64 / points as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| q(x)).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < points {
        if vals[i] == 0.0 && i > 0 {
            out.push((xs[i - 1], xs[i + 1]));
            i += 2;
            continue;
        }
        if vals[i] * vals[i + 1] < 0.0 {
            out.push((xs[i], xs[i + 1]));
        }
        i += 1;
    }
    out
}

/// The unique root of the radius equation in `(0, 1)`.
pub fn solve_radius(id: RadiusEquationId, alpha: Order, tol: f64) -> Result<RadiusResult> {
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} below {MIN_TOLERANCE}"
        )));
    }
    let q = |r: f64| equation_value(id, alpha, r);
    let brackets = sign_changes(&q, GRID_POINTS);
    let (lo, hi) = match brackets.as_slice() {
        [] => return Err(Error::NoRoot),
        [b] => *b,
        many => return Err(Error::MultipleRoots { count: many.len() }),
    };
    let root = bisect(&q, lo, hi, tol)?;
    let residual = q(root.radius).abs();
    if residual >= MAX_RESIDUAL {
        return Err(Error::NoConvergence(format!(
            "{id}: residual {residual:e} at r = {}",
            root.radius
        )));
    }
    Ok(RadiusResult {
        id: id.to_string(),
        alpha: alpha.value(),
        radius: root.radius,
        residual,
        bracket: root.bracket,
        iterations: root.iterations,
        source: RadiusSource::EquationRoot,
    })
}

/// `1 + u(2u^2 - 5) r + 3 r^2 - u r^3`.
pub fn example11_p(r: f64, u: f64) -> f64 {
    1.0 + u * (2.0 * u * u - 5.0) * r + 3.0 * r * r - u * r * r * r
}

/// Root of `p(r, sqrt((5 + r^2)/6)) = 0`, the order-zero starlike radius of
/// the half-plane map.
pub fn half_plane_starlike_radius_alpha0_check() -> Result<RadiusResult> {
    let q = |r: f64| example11_p(r, ((5.0 + r * r) / 6.0).sqrt());
    let brackets = sign_changes(&q, GRID_POINTS);
    let &(lo, hi) = brackets.first().ok_or(Error::NoRoot)?;
    let root = bisect(&q, lo, hi, MIN_TOLERANCE)?;
    Ok(RadiusResult {
        id: "L:starlike".into(),
        alpha: 0.0,
        radius: root.radius,
        residual: q(root.radius).abs(),
        bracket: root.bracket,
        iterations: root.iterations,
        source: RadiusSource::ClosedForm,
    })
}

/// Starlike radius of order `alpha` of the half-plane map. For `alpha > 0`
/// the binding point is taken at `theta = pi`; at `alpha = 0` the minimum
/// moves off the axis and the radius is `sqrt((7 sqrt 7 - 17)/2)`, not the
/// limit 1. Scans show the `theta = pi` form is exact only for `alpha`
/// above roughly 0.045; below that it overestimates the radius.
pub fn half_plane_starlike_radius(alpha: Order) -> Result<RadiusResult> {
    let a = alpha.value();
    if a == 0.0 {
        return half_plane_starlike_radius_alpha0_check();
    }
    let r = ((1.0 + 8.0 * a).sqrt() - (1.0 + 2.0 * a)) / (2.0 * a);
    // (1 - r)/(1 + r)^2 = alpha, cleared
    let residual = (a * r * r + (1.0 + 2.0 * a) * r + a - 1.0).abs();
    Ok(RadiusResult {
        id: "L:starlike".into(),
        alpha: a,
        radius: r,
        residual,
        bracket: [r, r],
        iterations: 0,
        source: RadiusSource::ClosedForm,
    })
}

/// Convexity polynomial of the half-plane map with `u = cos theta`.
pub fn half_plane_convex_p(alpha: Order, r: f64, u: f64) -> f64 {
    let a = alpha.value();
    let r2 = r * r;
    1.0 - 6.0 * r2 + r2 * r2 + 12.0 * r2 * u * u - 4.0 * r * (1.0 + r2) * u.powi(3)
        - a * (1.0 + (2.0 * u * u - 3.0) * (4.0 * u * (1.0 + r2) - 6.0 * r) * r + r2 * r2)
}

/// Interior critical point in `u` of the convexity polynomial.
pub fn half_plane_u0(alpha: Order, r: f64) -> f64 {
    let a = alpha.value();
    let r2 = r * r;
    let disc = a * (1.0 + 2.0 * a) * (1.0 + r2 * r2) + (1.0 + 4.0 * a + 5.0 * a * a) * r2;
    (r * (1.0 + a) - disc.sqrt()) / ((1.0 + r2) * (1.0 + 2.0 * a))
}

/// `min` of the convexity polynomial over the clamped critical point and the
/// endpoints `u = -1, 1`.
pub fn half_plane_convex_criterion(alpha: Order, r: f64) -> f64 {
    let u = half_plane_u0(alpha, r).clamp(-1.0, 1.0);
    [u, -1.0, 1.0]
        .into_iter()
        .map(|u| half_plane_convex_p(alpha, r, u))
        .fold(f64::INFINITY, f64::min)
}

pub fn half_plane_convex_radius(alpha: Order) -> Result<RadiusResult> {
    let q = |r: f64| half_plane_convex_criterion(alpha, r);
    let brackets = sign_changes(&q, GRID_POINTS);
    let &(lo, hi) = brackets.first().ok_or(Error::BracketFailure { lo: 0.0, hi: 1.0 })?;
    let root = bisect(&q, lo, hi, MIN_TOLERANCE)?;
    Ok(RadiusResult {
        id: "L:convex".into(),
        alpha: alpha.value(),
        radius: root.radius,
        residual: q(root.radius).abs(),
        bracket: root.bracket,
        iterations: root.iterations,
        source: RadiusSource::ClosedForm,
    })
}

/// Convexity polynomial of `L * L`, `u = cos theta`.
pub fn ll_q(r: f64, u: f64) -> f64 {
    let u2 = u * u;
    let c1 = 2.0 * u * (u2 - 2.0);
    let c2 = 8.0 * (1.0 - 4.0 * u2 + 2.0 * u2 * u2);
    let c3 = 2.0 * u * (34.0 - 21.0 * u2 + 4.0 * u2 * u2);
    let c4 = -2.0 * (41.0 - 24.0 * u2 + 8.0 * u2 * u2);
    let coeffs = [1.0, c1, c2, c3, c4, c3, c2, c1, 1.0];
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
}

const U_GRID: usize = 2000;

/// `min_{u in [-1, 1]} q(r, u)` and its argument, by grid and trisection.
pub fn ll_min_over_u(r: f64) -> Result<(f64, f64)> {
    let step = 2.0 / U_GRID as f64;
    let (mut bu, mut bv) = (-1.0, ll_q(r, -1.0));
    for i in 1..=U_GRID {
        let u = -1.0 + step * i as f64;
        let v = ll_q(r, u);
        if v < bv {
            bu = u;
            bv = v;
        }
    }
    let (mut a, mut b) = ((bu - step).max(-1.0), (bu + step).min(1.0));
    for _ in 0..200 {
        if b - a < 1e-14 {
            break;
        }
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if ll_q(r, m1) <= ll_q(r, m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let u = 0.5 * (a + b);
    let v = ll_q(r, u);
    if b - a > 1e-10 {
        return Err(Error::NoConvergence(format!("min over u at r = {r}")));
    }
    Ok(if v < bv { (v, u) } else { (bv, bu) })
}

/// Largest `r` with `min_u q(r, u) >= 0`, and the binding `u`.
pub fn ll_convex_radius() -> Result<(RadiusResult, f64)> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    if ll_min_over_u(hi)?.0 >= 0.0 {
        return Err(Error::BracketFailure { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        if ll_min_over_u(mid)?.0 >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let (v, u) = ll_min_over_u(r)?;
    Ok((
        RadiusResult {
            id: "LL:convex".into(),
            alpha: 0.0,
            radius: r,
            residual: v.abs(),
            bracket: [lo, hi],
            iterations,
            source: RadiusSource::ClosedForm,
        },
        u,
    ))
}

/// The rational expression that equals `alpha` at the solved radius.
pub fn sharpness_value(id: RadiusEquationId, r: f64) -> Result<f64> {
    use RadiusEquationId::*;
    let m2 = (1.0 - r).powi(2);
    let poly = |c: &[f64]| c.iter().rev().fold(0.0, |acc, x| acc * r + x);
    let (num, den) = match id {
        Eq3_2 => (
            poly(&[1.0, -10.0, 11.0, -8.0, 2.0]),
            m2 * poly(&[1.0, -4.0, 2.0]),
        ),
        Eq3_5 => (
            poly(&[1.0, -17.0, 13.0, -21.0, 10.0, -2.0]),
            m2 * poly(&[1.0, -7.0, 6.0, -2.0]),
        ),
        Eq3_6 => (poly(&[1.0, -7.0, 6.0, -2.0]), m2 * poly(&[1.0, -2.0])),
        Eq3_7 => (
            poly(&[1.0, -12.0, 11.0, -8.0, 2.0]),
            m2 * poly(&[1.0, -4.0, 2.0]),
        ),
        Eq4_1 => (
            poly(&[1.0, -9.0, 11.0, -8.0, 2.0]),
            m2 * poly(&[1.0, -4.0, 2.0]),
        ),
        Eq4_2 => (
            poly(&[1.0, -15.0, 15.0, -21.0, 10.0, -2.0]),
            m2 * poly(&[1.0, -7.0, 6.0, -2.0]),
        ),
        Eq4_3 => (
            6.0 * poly(&[1.0, -13.0, 17.0, -21.0, 10.0, -2.0]),
            m2 * poly(&[6.0, -39.0, 35.0, -12.0]),
        ),
    };
    if den.abs() < 1e-300 {
        return Err(Error::ZeroDenominator(r));
    }
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremalId {
    X31,
    X35,
    X42,
    X46,
}

impl ExtremalId {
    pub fn all() -> [ExtremalId; 4] {
        [ExtremalId::X31, ExtremalId::X35, ExtremalId::X42, ExtremalId::X46]
    }

    pub fn gallery_id(self) -> GalleryId {
        match self {
            ExtremalId::X31 => GalleryId::Extremal31,
            ExtremalId::X35 => GalleryId::Extremal35,
            ExtremalId::X42 => GalleryId::Extremal42,
            ExtremalId::X46 => GalleryId::Extremal46,
        }
    }

    /// Equation whose order-zero root is the zero of the Jacobian.
    pub fn equation(self) -> RadiusEquationId {
        match self {
            ExtremalId::X31 => RadiusEquationId::Eq3_2,
            ExtremalId::X35 => RadiusEquationId::Eq3_6,
            ExtremalId::X42 => RadiusEquationId::Eq4_1,
            ExtremalId::X46 => RadiusEquationId::Eq4_3,
        }
    }
}

/// Jacobian of the extremal map on the positive real axis, as a rational
/// function of `r`.
pub fn jacobian_extremal(id: ExtremalId, r: f64) -> f64 {
    let poly = |c: &[f64]| c.iter().rev().fold(0.0, |acc, x| acc * r + x);
    let m = 1.0 - r;
    match id {
        ExtremalId::X31 => {
            poly(&[1.0, -7.0, 6.0, -2.0]) * poly(&[1.0, -10.0, 11.0, -8.0, 2.0]) / m.powi(7)
        }
        // the quadratic factor is 1 - 4r + 2r^2, matching the series
        ExtremalId::X35 => poly(&[1.0, -4.0, 2.0]) * poly(&[1.0, -7.0, 6.0, -2.0]) / m.powi(5),
        ExtremalId::X42 => {
            poly(&[1.0, -7.0, 6.0, -2.0]) * poly(&[1.0, -9.0, 11.0, -8.0, 2.0]) / m.powi(7)
        }
        ExtremalId::X46 => {
            poly(&[1.0, -13.0, 17.0, -21.0, 10.0, -2.0])
                * poly(&[1.0, -11.0, 11.0, -8.0, 2.0])
                / m.powi(9)
        }
    }
}
