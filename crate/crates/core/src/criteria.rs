//! Coefficient-sum sufficient conditions for fully starlike and fully convex
//! maps of order alpha, and worst-case sums over coefficient-bound families.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::CoefficientFamily;
use crate::error::{Error, Result};
use crate::harmonic::{check_circle, HarmonicMap};
use crate::series::{Tail, TruncatedSeries};

/// Sums within this of 1 still pass.
pub const PASS_TOLERANCE: f64 = 1e-12;

/// Neglected-tail budget for maps with a known coefficient envelope.
pub const TAIL_TOLERANCE: f64 = 1e-13;

const MAX_ORDER: usize = 1 << 20;

/// Order `alpha` with `0 <= alpha < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(f64);

impl Order {
    pub fn new(alpha: f64) -> Result<Order> {
        if (0.0..1.0).contains(&alpha) {
            Ok(Order(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    pub fn zero() -> Order {
        Order(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(a: f64) -> Result<Order> {
        Order::new(a)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Starlike,
    Convex,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Starlike => "starlike",
            Property::Convex => "convex",
        })
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Property> {
        match s {
            "starlike" => Ok(Property::Starlike),
            "convex" => Ok(Property::Convex),
            _ => Err(Error::InvalidParameter(format!("unknown property `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub alpha: f64,
    pub sum: f64,
    pub passed: bool,
    /// Only the stored coefficients were summed.
    pub truncated: bool,
}

impl Certificate {
    /// The sum sits on the boundary value 1.
    pub fn is_boundary(&self) -> bool {
        (self.sum - 1.0).abs() <= PASS_TOLERANCE
    }
}

/// Weight of `|a_n|` (sign -1) or `|b_n|` (sign +1).
fn weight(property: Property, alpha: f64, n: usize, sign: f64) -> f64 {
    let n = n as f64;
    let w = (n + sign * alpha) / (1.0 - alpha);
    match property {
        Property::Starlike => w,
        Property::Convex => n * w,
    }
}

fn stored_sum(f: &HarmonicMap, property: Property, alpha: f64) -> f64 {
    let a: f64 = f
        .h()
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| weight(property, alpha, i + 1, -1.0) * c.norm())
        .sum();
    let b: f64 = f
        .g()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| weight(property, alpha, i + 1, 1.0) * c.norm())
        .sum();
    a + b
}

/// Bound on the weighted sum over the unstored coefficients, `None` when
/// nothing is known about them.
fn tail_contribution(s: &TruncatedSeries, property: Property, alpha: f64) -> Option<f64> {
    // weights are at most 2n (resp. 2n^2) / (1 - alpha)
    let extra = match property {
        Property::Starlike => 1,
        Property::Convex => 2,
    };
    match s.tail() {
        Tail::Unknown => None,
        _ => s
            .tail_bound_at(1.0, extra)
            .map(|b| 2.0 * b / (1.0 - alpha)),
    }
}

fn certify(f: &HarmonicMap, property: Property, alpha: Order) -> Result<Certificate> {
    let a = alpha.value();
    let mut f = f.clone();
    let truncated = loop {
        let th = tail_contribution(f.h(), property, a);
        let tg = tail_contribution(f.g(), property, a);
        match (th, tg) {
            (Some(x), Some(y)) if x + y <= TAIL_TOLERANCE => break false,
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => {
                if f.closed_form().is_none() || f.truncation() >= MAX_ORDER {
                    return Err(Error::TailTooLarge {
                        bound: x + y,
                        tolerance: TAIL_TOLERANCE,
                        modulus: 1.0,
                    });
                }
                f = f.with_truncation(f.truncation() * 2);
            }
            (Some(_), Some(_)) => {
                return Err(Error::UnboundedTail(
                    "coefficient envelope does not decay; the full sum diverges or is unknown",
                ))
            }
            _ => break true,
        }
    };
    let sum = stored_sum(&f, property, a);
    Ok(Certificate {
        property,
        alpha: a,
        sum,
        passed: sum <= 1.0 + PASS_TOLERANCE,
        truncated,
    })
}

/// Weighted sum with weights `(n - alpha)/(1 - alpha)` on `|a_n|`, `n >= 2`,
/// and `(n + alpha)/(1 - alpha)` on `|b_n|`, `n >= 1`.
pub fn starlike_sum(f: &HarmonicMap, alpha: Order) -> Result<Certificate> {
    certify(f, Property::Starlike, alpha)
}

/// As [`starlike_sum`] with the weights multiplied by `n`.
pub fn convex_sum(f: &HarmonicMap, alpha: Order) -> Result<Certificate> {
    certify(f, Property::Convex, alpha)
}

pub fn property_sum(f: &HarmonicMap, property: Property, alpha: Order) -> Result<Certificate> {
    certify(f, property, alpha)
}

/// Coefficient-bound families `|a_n| <= A(n)`, `|b_n| <= B(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundFamily {
    /// `(n+1)(2n+1)/6`, `(n-1)(2n-1)/6`.
    Eq12,
    /// `(n+1)/2`, `(n-1)/2`.
    Eq14,
    /// `((n+1)/2)^2`, `((n-1)/2)^2`.
    Eq42sq,
    /// `(n+1)^2(2n+1)/12`, `(n-1)^2(2n-1)/12`.
    Eq46,
}

impl BoundFamily {
    pub fn all() -> [BoundFamily; 4] {
        [
            BoundFamily::Eq12,
            BoundFamily::Eq14,
            BoundFamily::Eq42sq,
            BoundFamily::Eq46,
        ]
    }

    /// `(A, B)` as polynomials in `n`, ascending powers.
    pub fn bounds(self) -> (Vec<f64>, Vec<f64>) {
        match self {
            BoundFamily::Eq12 => (
                vec![1.0 / 6.0, 0.5, 1.0 / 3.0],
                vec![1.0 / 6.0, -0.5, 1.0 / 3.0],
            ),
            BoundFamily::Eq14 => (vec![0.5, 0.5], vec![-0.5, 0.5]),
            BoundFamily::Eq42sq => (vec![0.25, 0.5, 0.25], vec![0.25, -0.5, 0.25]),
            BoundFamily::Eq46 => (
                vec![1.0 / 12.0, 4.0 / 12.0, 5.0 / 12.0, 2.0 / 12.0],
                vec![-1.0 / 12.0, 4.0 / 12.0, -5.0 / 12.0, 2.0 / 12.0],
            ),
        }
    }
}

impl FromStr for BoundFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<BoundFamily> {
        match s {
            "eq12" => Ok(BoundFamily::Eq12),
            "eq14" => Ok(BoundFamily::Eq14),
            "eq42sq" => Ok(BoundFamily::Eq42sq),
            "eq46" => Ok(BoundFamily::Eq46),
            _ => Err(Error::InvalidParameter(format!("unknown bound family `{s}`"))),
        }
    }
}

/// Worst-case weighted sum of `f(r z)/r` over a bound family, in closed form.
pub fn family_sum(family: BoundFamily, property: Property, alpha: Order, r: f64) -> Result<f64> {
    check_circle(r)?;
    let a = alpha.value();
    let one = Complex64::new(1.0, 0.0);
    let (pa, pb) = family.bounds();
    let weight = |sign: f64| {
        let w = CoefficientFamily::polynomial(&[sign * a, 1.0]);
        match property {
            Property::Starlike => w,
            Property::Convex => w.product(&CoefficientFamily::polynomial(&[0.0, 1.0])),
        }
    };
    let wa = weight(-1.0).product(&CoefficientFamily::polynomial(&pa));
    let wb = weight(1.0).product(&CoefficientFamily::polynomial(&pb));
    // the a_1 term is not part of the sum
    let b1 = wb.coeff(1);
    let total = wa.combine(one, &wb, one).expect("same ratio").with_override(1, b1);
    let w = Complex64::new(r, 0.0);
    Ok(total.rational().eval(w).re / r / (1.0 - a))
}

/// Worst point of an analytic order check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderCheck {
    pub holds: bool,
    pub min: f64,
    pub theta: f64,
}

/// Samples `Re(z s'/s) - alpha` (starlike) or `Re(1 + z s''/s') - alpha`
/// (convex) on `|z| = r`.
pub fn analytic_order_check(
    s: &TruncatedSeries,
    alpha: Order,
    property: Property,
    r: f64,
    samples: usize,
) -> Result<OrderCheck> {
    if (s.coeff(1) - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidParameter(
            "analytic order check needs a normalized series (c_1 = 1)".into(),
        ));
    }
    analytic_order_check_map(&HarmonicMap::analytic(s.clone()), alpha, property, r, samples)
}

/// [`analytic_order_check`] on the analytic part of `f`, using its closed
/// form when present.
pub fn analytic_order_check_map(
    f: &HarmonicMap,
    alpha: Order,
    property: Property,
    r: f64,
    samples: usize,
) -> Result<OrderCheck> {
    check_circle(r)?;
    let samples = samples.max(8);
    let mut worst = OrderCheck {
        holds: true,
        min: f64::INFINITY,
        theta: 0.0,
    };
    for j in 0..samples {
        let theta = std::f64::consts::TAU * j as f64 / samples as f64;
        let z = Complex64::from_polar(r, theta);
        let p = f.parts(z)?;
        let value = match property {
            Property::Starlike => {
                if p.h.norm() < 1e-300 {
                    return Err(Error::Degenerate {
                        what: "s",
                        re: z.re,
                        im: z.im,
                    });
                }
                (z * p.dh / p.h).re
            }
            Property::Convex => {
                if p.dh.norm() < 1e-300 {
                    return Err(Error::Degenerate {
                        what: "s'",
                        re: z.re,
                        im: z.im,
                    });
                }
                (Complex64::new(1.0, 0.0) + z * p.d2h / p.dh).re
            }
        };
        if value < worst.min {
            worst.min = value;
            worst.theta = theta;
        }
    }
    worst.min -= alpha.value();
    worst.holds = worst.min > 0.0;
    Ok(worst)
}
