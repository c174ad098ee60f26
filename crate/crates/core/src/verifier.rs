//! Circle scans of the angular derivatives, ladder checks for fully starlike
//! and fully convex maps, and bisection for empirical radii.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{Order, Property};
use crate::error::{Error, Result};
use crate::harmonic::{check_circle, dtheta_arg_of, dtheta_arg_tangent_of, HarmonicMap, Parts};

pub const DEFAULT_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 256;
pub const DEFAULT_RUNGS: usize = 32;

/// Slack below `alpha` still accepted as a pass; maps that attain their
/// order exactly (affine maps) sit on the boundary.
pub const ORDER_SLACK: f64 = 1e-9;

/// Allowed deviation of the total argument change from `2 pi`.
pub const WINDING_TOLERANCE: f64 = 1e-6;

pub const RADIUS_FLOOR: f64 = 1e-3;
pub const RADIUS_CEILING: f64 = 1.0 - 1e-3;
pub const RADIUS_TOLERANCE: f64 = 1e-5;

const REFINE_MINIMA: usize = 3;
const REFINE_CONVERGED: f64 = 1e-9;
const REFINE_MAX_STEPS: usize = 200;

/// Minimum of a scanned quantity and where it occurs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub r: f64,
    pub alpha: f64,
    pub samples: usize,
    pub min_dtheta_arg: Extremum,
    pub min_dtheta_arg_tangent: Extremum,
    pub min_jacobian_on_circle: f64,
    /// Change of `arg f` once around the circle.
    pub total_arg_variation: f64,
    /// Change of `arg d/dtheta f` once around the circle.
    pub total_tangent_variation: f64,
    pub refined: bool,
}

impl ScanReport {
    pub fn passes(&self, property: Property) -> bool {
        let (min, turn) = match property {
            Property::Starlike => (self.min_dtheta_arg.value, self.total_arg_variation),
            Property::Convex => (
                self.min_dtheta_arg_tangent.value,
                self.total_tangent_variation,
            ),
        };
        min >= self.alpha - ORDER_SLACK && (turn - TAU).abs() <= WINDING_TOLERANCE
    }

    pub fn min_for(&self, property: Property) -> Extremum {
        match property {
            Property::Starlike => self.min_dtheta_arg,
            Property::Convex => self.min_dtheta_arg_tangent,
        }
    }
}

/// One grid point of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub dtheta_arg: f64,
    pub dtheta_arg_tangent: f64,
    pub jacobian: f64,
}

struct Sample {
    row: ScanRow,
    value: Complex64,
    tangent: Complex64,
}

fn sample(f: &HarmonicMap, r: f64, theta: f64) -> Result<Sample> {
    let p = f.parts(Complex64::from_polar(r, theta))?;
    Ok(Sample {
        row: ScanRow {
            theta,
            dtheta_arg: dtheta_arg_of(&p)?,
            dtheta_arg_tangent: dtheta_arg_tangent_of(&p)?,
            jacobian: p.dh.norm_sqr() - p.dg.norm_sqr(),
        },
        value: p.value(),
        tangent: p.radial_numerator(),
    })
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "scan needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

fn grid(f: &HarmonicMap, r: f64, samples: usize) -> Result<Vec<Sample>> {
    check_circle(r)?;
    check_samples(samples)?;
    (0..samples)
        .into_par_iter()
        .map(|j| sample(f, r, TAU * j as f64 / samples as f64))
        .collect()
}

/// Grid values of the angular derivatives and Jacobian on `|z| = r`.
pub fn scan_rows(f: &HarmonicMap, r: f64, samples: usize) -> Result<Vec<ScanRow>> {
    Ok(grid(&f.prefix_for(r), r, samples)?.into_iter().map(|s| s.row).collect())
}

fn winding(points: impl Iterator<Item = Complex64>) -> f64 {
    let pts: Vec<Complex64> = points.collect();
    let n = pts.len();
    (0..n)
        .map(|j| {
            let d = (pts[(j + 1) % n] / pts[j]).arg();
            // arg lies in (-pi, pi]
            if d == PI {
                -PI
            } else {
                d
            }
        })
        .sum()
}

/// Indices of the smallest strict-or-flat local minima of a periodic sequence.
fn local_minima(values: &[f64], count: usize) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&j| {
            let v = values[j];
            v <= values[(j + n - 1) % n] && v <= values[(j + 1) % n]
        })
        .collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx.truncate(count);
    idx
}

/// Trisection search for the minimum of `q` on `[a, b]`.
fn trisect(q: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(Extremum, bool)> {
    let mut best = Extremum {
        value: f64::INFINITY,
        theta: a,
    };
    let mut last = f64::INFINITY;
    for _ in 0..REFINE_MAX_STEPS {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        let (v1, v2) = (q(m1)?, q(m2)?);
        if v1 <= v2 {
            b = m2;
        } else {
            a = m1;
        }
        let (v, t) = if v1 <= v2 { (v1, m1) } else { (v2, m2) };
        if v < best.value {
            best = Extremum { value: v, theta: t };
        }
        if (last - best.value).abs() < REFINE_CONVERGED * (1.0 + best.value.abs()) && b - a < 1e-8 {
            return Ok((best, true));
        }
        last = best.value;
    }
    Ok((best, false))
}

fn refine(
    q: &dyn Fn(f64) -> Result<f64>,
    values: &[f64],
    step: f64,
) -> Result<(Extremum, bool)> {
    let (j0, v0) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, v)| (j, *v))
        .expect("non-empty grid");
    let mut best = Extremum {
        value: v0,
        theta: step * j0 as f64,
    };
    let mut converged = true;
    for j in local_minima(values, REFINE_MINIMA) {
        let centre = step * j as f64;
        let (e, ok) = trisect(q, centre - step, centre + step)?;
        converged &= ok;
        if e.value < best.value {
            best = e;
        }
    }
    best.theta = best.theta.rem_euclid(TAU);
    Ok((best, converged))
}

/// Samples both angular derivatives on `|z| = r`, refines the three lowest
/// grid minima of each, and records the argument changes of `f` and of its
/// tangent.
pub fn scan_circle(f: &HarmonicMap, r: f64, alpha: Order, samples: usize) -> Result<ScanReport> {
    let f = &f.prefix_for(r);
    let pts = grid(f, r, samples)?;
    let step = TAU / samples as f64;
    let arg_vals: Vec<f64> = pts.iter().map(|s| s.row.dtheta_arg).collect();
    let tan_vals: Vec<f64> = pts.iter().map(|s| s.row.dtheta_arg_tangent).collect();
    let at = |t: f64| -> Result<Parts> { f.parts(Complex64::from_polar(r, t)) };
    let (min_arg, ok1) = refine(&|t| dtheta_arg_of(&at(t)?), &arg_vals, step)?;
    let (min_tan, ok2) = refine(&|t| dtheta_arg_tangent_of(&at(t)?), &tan_vals, step)?;
    Ok(ScanReport {
        r,
        alpha: alpha.value(),
        samples,
        min_dtheta_arg: min_arg,
        min_dtheta_arg_tangent: min_tan,
        min_jacobian_on_circle: pts
            .iter()
            .map(|s| s.row.jacobian)
            .fold(f64::INFINITY, f64::min),
        total_arg_variation: winding(pts.iter().map(|s| s.value)),
        total_tangent_variation: winding(pts.iter().map(|s| s.tangent)),
        refined: ok1 && ok2,
    })
}

/// Where a ladder check failed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub r: f64,
    pub theta: f64,
    /// Scanned minimum, or `NaN` when the scan hit a degenerate point.
    pub value: f64,
    pub reason: FailureReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    BelowOrder,
    Winding,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderReport {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Scan resolution for ladder checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderConfig {
    pub samples: usize,
    pub rungs: usize,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            samples: DEFAULT_SAMPLES,
            rungs: DEFAULT_RUNGS,
        }
    }
}

fn rung(f: &HarmonicMap, r: f64, alpha: Order, property: Property, samples: usize) -> Result<Option<Witness>> {
    match scan_circle(f, r, alpha, samples) {
        Ok(rep) => {
            let m = rep.min_for(property);
            if m.value < alpha.value() - ORDER_SLACK {
                return Ok(Some(Witness {
                    r,
                    theta: m.theta,
                    value: m.value,
                    reason: FailureReason::BelowOrder,
                }));
            }
            if !rep.passes(property) {
                return Ok(Some(Witness {
                    r,
                    theta: 0.0,
                    value: m.value,
                    reason: FailureReason::Winding,
                }));
            }
            Ok(None)
        }
        Err(Error::Degenerate { re, im, .. }) => Ok(Some(Witness {
            r,
            theta: im.atan2(re),
            value: f64::NAN,
            reason: FailureReason::Degenerate,
        })),
        Err(e) => Err(e),
    }
}

/// Checks the property on every rung `rho k / K`, `k = 1..K`, of a ladder.
pub fn check_fully(
    f: &HarmonicMap,
    rho: f64,
    alpha: Order,
    property: Property,
    config: LadderConfig,
) -> Result<LadderReport> {
    check_circle(rho)?;
    let rungs = config.rungs.max(1);
    let results: Vec<Option<Witness>> = (1..=rungs)
        .into_par_iter()
        .map(|k| rung(f, rho * k as f64 / rungs as f64, alpha, property, config.samples))
        .collect::<Result<_>>()?;
    let witness = results.into_iter().flatten().next();
    Ok(LadderReport {
        holds: witness.is_none(),
        witness,
    })
}

pub fn is_fully_starlike(f: &HarmonicMap, rho: f64, alpha: Order) -> Result<LadderReport> {
    check_fully(f, rho, alpha, Property::Starlike, LadderConfig::default())
}

pub fn is_fully_convex(f: &HarmonicMap, rho: f64, alpha: Order) -> Result<LadderReport> {
    check_fully(f, rho, alpha, Property::Convex, LadderConfig::default())
}

fn check_nonzero(z: Complex64) -> Result<()> {
    if z == Complex64::new(0.0, 0.0) {
        Err(Error::InvalidParameter("inequality needs z != 0".into()))
    } else {
        check_circle(z.norm()).map_err(|_| Error::OutsideDisk { modulus: z.norm() })
    }
}

/// Cleared-denominator convexity quantity; positive exactly when
/// `d/dtheta arg(d/dtheta f) > alpha` at `z`.
pub fn inequality_23_value(f: &HarmonicMap, z: Complex64, alpha: Order) -> Result<f64> {
    check_nonzero(z)?;
    let p = f.parts(z)?;
    let a = alpha.value();
    if p.radial_numerator().norm() < crate::harmonic::DEGENERACY_THRESHOLD * z.norm() {
        return Err(Error::Degenerate {
            what: "d/dtheta f",
            re: z.re,
            im: z.im,
        });
    }
    let h1 = z * p.dh;
    let g1 = z * p.dg;
    let h2 = h1 + z * z * p.d2h;
    let g2 = g1 + z * z * p.d2g;
    let cross = z * z * (z * p.d2h * p.dg - z * p.dh * p.d2g - 2.0 * a * p.dh * p.dg);
    Ok((h2 * h1.conj()).re - a * h1.norm_sqr() - (g2 * g1.conj()).re - a * g1.norm_sqr() - cross.re)
}

/// Cleared-denominator starlikeness quantity; positive exactly when
/// `d/dtheta arg f > alpha` at `z`.
pub fn inequality_27_value(f: &HarmonicMap, z: Complex64, alpha: Order) -> Result<f64> {
    check_nonzero(z)?;
    let p = f.parts(z)?;
    let a = alpha.value();
    if p.value().norm() < crate::harmonic::DEGENERACY_THRESHOLD * z.norm() {
        return Err(Error::Degenerate {
            what: "f",
            re: z.re,
            im: z.im,
        });
    }
    let (h, g) = (p.h, p.g);
    let cross = z * h * p.dg + 2.0 * a * h * g - z * p.dh * g;
    Ok((z * p.dh * h.conj()).re - a * h.norm_sqr() - (z * p.dg * g.conj()).re - a * g.norm_sqr() - cross.re)
}

pub fn inequality_23(f: &HarmonicMap, z: Complex64, alpha: Order) -> Result<bool> {
    Ok(inequality_23_value(f, z, alpha)? > 0.0)
}

pub fn inequality_27(f: &HarmonicMap, z: Complex64, alpha: Order) -> Result<bool> {
    Ok(inequality_27_value(f, z, alpha)? > 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSource {
    EquationRoot,
    ClosedForm,
    EmpiricalScan,
}

/// A located radius with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusResult {
    pub id: String,
    pub alpha: f64,
    pub radius: f64,
    pub residual: f64,
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub source: RadiusSource,
}

/// Largest `r` on whose ladder the property holds, by bracketing from 0.5
/// and bisecting; ties resolve to the smaller radius.
pub fn empirical_radius(f: &HarmonicMap, alpha: Order, property: Property) -> Result<RadiusResult> {
    empirical_radius_with(f, alpha, property, LadderConfig::default())
}

pub fn empirical_radius_with(
    f: &HarmonicMap,
    alpha: Order,
    property: Property,
    config: LadderConfig,
) -> Result<RadiusResult> {
    let holds = |r: f64| -> Result<bool> { Ok(check_fully(f, r, alpha, property, config)?.holds) };
    if !holds(RADIUS_FLOOR)? {
        return Err(Error::FailsAtFloor {
            floor: RADIUS_FLOOR,
        });
    }
    let mut iterations = 0;
    let (mut lo, mut hi);
    if holds(0.5)? {
        lo = 0.5;
        loop {
            let next = 1.0 - (1.0 - lo) / 2.0;
            iterations += 1;
            if next > RADIUS_CEILING {
                if holds(RADIUS_CEILING)? {
                    return Err(Error::NoFailureFound {
                        limit: RADIUS_CEILING,
                    });
                }
                hi = RADIUS_CEILING;
                break;
            }
            if holds(next)? {
                lo = next;
            } else {
                hi = next;
                break;
            }
        }
    } else {
        hi = 0.5;
        loop {
            let next = hi / 2.0;
            iterations += 1;
            if next <= RADIUS_FLOOR {
                lo = RADIUS_FLOOR;
                break;
            }
            if holds(next)? {
                lo = next;
                break;
            }
            hi = next;
        }
    }
    while hi - lo > RADIUS_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RadiusResult {
        id: format!("scan:{property}"),
        alpha: alpha.value(),
        radius: lo,
        residual: hi - lo,
        bracket: [lo, hi],
        iterations,
        source: RadiusSource::EmpiricalScan,
    })
}
