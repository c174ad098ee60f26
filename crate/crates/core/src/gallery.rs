//! Named maps with exact coefficient families.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::closed_form::CoefficientFamily;
use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;

#[derive(Clone, Debug, PartialEq)]
pub enum GalleryId {
    /// `k(z) = z / (1 - z)^2`.
    AnalyticKoebe,
    /// `l(z) = z / (1 - z)`.
    AnalyticHalfPlane,
    /// Harmonic Koebe function, dilatation `z`.
    HarmonicKoebe,
    /// Harmonic half-plane map onto `Re w > -1/2`, dilatation `-z`.
    HarmonicHalfPlane,
    /// `z + c conj(z)^n` with `c = (1 - alpha) / (n + alpha)`.
    StarlikeFn { n: u32, alpha: f64 },
    /// `z - (c / n) conj(z)^n`, the Alexander transform of the above.
    ConvexFn { n: u32, alpha: f64 },
    /// `a z + b conj(z)`.
    Affine { a: f64, b: f64 },
    /// `a_1 = 1`, `a_n = -(n+1)(2n+1)/6`, `b_n = (n-1)(2n-1)/6`.
    Extremal31,
    /// `a_1 = 1`, `a_n = -(n+1)/2`, `b_n = (n-1)/2`.
    Extremal35,
    /// `a_1 = 1`, `a_n = -((n+1)/2)^2`, `b_n = ((n-1)/2)^2`.
    Extremal42,
    /// `a_1 = 1`, `a_n = -(n+1)^2(2n+1)/12`, `b_n = (n-1)^2(2n-1)/12`.
    Extremal46,
    /// `L * L`.
    LL,
    /// `L * K`.
    LK,
}

impl GalleryId {
    /// Parameter-free entries, in listing order.
    pub fn fixed() -> Vec<GalleryId> {
        use GalleryId::*;
        vec![
            AnalyticKoebe,
            AnalyticHalfPlane,
            HarmonicKoebe,
            HarmonicHalfPlane,
            Extremal31,
            Extremal35,
            Extremal42,
            Extremal46,
            LL,
            LK,
        ]
    }

    pub fn describe(&self) -> &'static str {
        use GalleryId::*;
        match self {
            AnalyticKoebe => "analytic Koebe function z/(1-z)^2",
            AnalyticHalfPlane => "analytic half-plane map z/(1-z)",
            HarmonicKoebe => "harmonic Koebe function, dilatation z",
            HarmonicHalfPlane => "harmonic half-plane map, dilatation -z",
            StarlikeFn { .. } => "z + c conj(z)^n, c = (1-alpha)/(n+alpha)",
            ConvexFn { .. } => "z - (c/n) conj(z)^n, c = (1-alpha)/(n+alpha)",
            Affine { .. } => "a z + b conj(z)",
            Extremal31 => "2z - K (co-analytic sign of K's bound family)",
            Extremal35 => "2z - L (co-analytic part (n-1)/2)",
            Extremal42 => "2z - L*L (co-analytic part ((n-1)/2)^2)",
            Extremal46 => "2z - L*K (co-analytic part (n-1)^2(2n-1)/12)",
            LL => "L * L",
            LK => "L * K",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GalleryId::StarlikeFn { n, alpha } | GalleryId::ConvexFn { n, alpha } => {
                if n < 2 {
                    return Err(Error::InvalidParameter(format!("n = {n} must be >= 2")));
                }
                if !(0.0..1.0).contains(&alpha) {
                    return Err(Error::InvalidOrder(alpha));
                }
            }
            GalleryId::Affine { a, b } => {
                if !(a.abs() > b.abs()) {
                    return Err(Error::InvalidParameter(format!(
                        "affine map needs |a| > |b|, got a = {a}, b = {b}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for GalleryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GalleryId::*;
        match self {
            AnalyticKoebe => write!(f, "k"),
            AnalyticHalfPlane => write!(f, "l"),
            HarmonicKoebe => write!(f, "K"),
            HarmonicHalfPlane => write!(f, "L"),
            StarlikeFn { n, alpha } => write!(f, "fn:{n}:{alpha}"),
            ConvexFn { n, alpha } => write!(f, "Fn:{n}:{alpha}"),
            Affine { a, b } => write!(f, "affine:{a}:{b}"),
            Extremal31 => write!(f, "x31"),
            Extremal35 => write!(f, "x35"),
            Extremal42 => write!(f, "x42"),
            Extremal46 => write!(f, "x46"),
            LL => write!(f, "LL"),
            LK => write!(f, "LK"),
        }
    }
}

impl FromStr for GalleryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GalleryId::*;
        let unknown = || Error::UnknownMap(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| unknown());
        let id = match parts.as_slice() {
            ["k"] => AnalyticKoebe,
            ["l"] => AnalyticHalfPlane,
            ["K"] => HarmonicKoebe,
            ["L"] => HarmonicHalfPlane,
            ["x31"] => Extremal31,
            ["x35"] => Extremal35,
            ["x42"] => Extremal42,
            ["x46"] => Extremal46,
            ["LL"] => LL,
            ["LK"] => LK,
            [kind @ ("fn" | "Fn"), n, alpha] => {
                let n: u32 = n.trim().parse().map_err(|_| unknown())?;
                let alpha = num(alpha)?;
                if *kind == "fn" {
                    StarlikeFn { n, alpha }
                } else {
                    ConvexFn { n, alpha }
                }
            }
            ["affine", a, b] => Affine {
                a: num(a)?,
                b: num(b)?,
            },
            _ => return Err(unknown()),
        };
        id.validate()?;
        Ok(id)
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn scaled(poly: &[f64], s: f64) -> Vec<f64> {
    poly.iter().map(|p| p * s).collect()
}

// integer numerators of p_j (ascending powers of n) over a common divisor
const K_H: ([f64; 3], f64) = ([1.0, 3.0, 2.0], 6.0);
const K_G: ([f64; 3], f64) = ([1.0, -3.0, 2.0], 6.0);
const L_H: ([f64; 2], f64) = ([1.0, 1.0], 2.0);
const L_G: ([f64; 2], f64) = ([1.0, -1.0], 2.0);

/// Analytic and co-analytic families of a gallery entry.
pub fn families(id: &GalleryId) -> Result<(CoefficientFamily, CoefficientFamily)> {
    use GalleryId::*;
    id.validate()?;
    let poly = CoefficientFamily::polynomial;
    let over = |p: &[f64], d: f64| CoefficientFamily::polynomial_over(p, d);
    let zero = CoefficientFamily::zero;
    let identity = || CoefficientFamily::monomial(1, re(1.0));
    // 2z - F for F with analytic family p/d and co-analytic q/d
    let extremal = |p: &[f64], q: &[f64], d: f64| (over(&scaled(p, -1.0), d).with_override(1, re(1.0)), over(q, d));
    Ok(match *id {
        AnalyticKoebe => (poly(&[0.0, 1.0]), zero()),
        AnalyticHalfPlane => (poly(&[1.0]), zero()),
        HarmonicKoebe => (over(&K_H.0, K_H.1), over(&K_G.0, K_G.1)),
        HarmonicHalfPlane => (over(&L_H.0, L_H.1), over(&L_G.0, L_G.1)),
        StarlikeFn { n, alpha } => {
            let c = (1.0 - alpha) / (n as f64 + alpha);
            (identity(), CoefficientFamily::monomial(n as usize, re(c)))
        }
        ConvexFn { n, alpha } => {
            let c = (1.0 - alpha) / (n as f64 + alpha);
            (
                identity(),
                CoefficientFamily::monomial(n as usize, re(-c / n as f64)),
            )
        }
        Affine { a, b } => (
            CoefficientFamily::monomial(1, re(a)),
            CoefficientFamily::monomial(1, re(b)),
        ),
        Extremal31 => extremal(&K_H.0, &K_G.0, 6.0),
        Extremal35 => extremal(&L_H.0, &scaled(&L_G.0, -1.0), 2.0),
        Extremal42 => extremal(&[1.0, 2.0, 1.0], &[1.0, -2.0, 1.0], 4.0),
        Extremal46 => extremal(&[1.0, 4.0, 5.0, 2.0], &[-1.0, 4.0, -5.0, 2.0], 12.0),
        LL => {
            let (h, g) = (over(&L_H.0, L_H.1), over(&L_G.0, L_G.1));
            (h.product(&h), g.product(&g))
        }
        LK => (
            over(&L_H.0, L_H.1).product(&over(&K_H.0, K_H.1)),
            over(&L_G.0, L_G.1).product(&over(&K_G.0, K_G.1)),
        ),
    })
}

/// The named map with `truncation` stored coefficients and its closed form.
pub fn gallery(id: &GalleryId, truncation: usize) -> Result<HarmonicMap> {
    let (h, g) = families(id)?;
    Ok(HarmonicMap::from_families(h, g, truncation))
}

/// `h = z / (1 - t z)^3`, `g = t z^2 / (1 - t z)^3`: the dilation of `L'`
/// times `z` that fails to be sense-preserving, with `t = sqrt(2) - 1`.
pub fn nonunivalent_convex_preimage(truncation: usize) -> HarmonicMap {
    let l = gallery(&GalleryId::HarmonicHalfPlane, truncation).expect("fixed entry");
    let t = std::f64::consts::SQRT_2 - 1.0;
    l.scale(t).expect("t in (0, 1]").alexander_inverse()
}
