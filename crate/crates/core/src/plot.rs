//! SVG images of concentric circles and radial spokes under a map.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonic::{check_circle, HarmonicMap};

pub const POINTS_PER_CURVE: usize = 1024;
pub const SPOKES: usize = 16;
const CANVAS: f64 = 512.0;

/// Image polylines; `circles` is ordered by radius, the last is the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotData {
    pub circles: Vec<Vec<Complex64>>,
    pub spokes: Vec<Vec<Complex64>>,
}

impl PlotData {
    pub fn boundary(&self) -> &[Complex64] {
        self.circles.last().map_or(&[], |c| c.as_slice())
    }
}

pub fn plot_data(f: &HarmonicMap, r: f64, curves: usize) -> Result<PlotData> {
    check_circle(r)?;
    if curves == 0 {
        return Err(Error::InvalidParameter("need at least one curve".into()));
    }
    let n = POINTS_PER_CURVE;
    let circles = (1..=curves)
        .map(|k| {
            let rho = r * k as f64 / curves as f64;
            (0..n)
                .map(|j| f.eval(Complex64::from_polar(rho, TAU * j as f64 / n as f64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let spokes = (0..SPOKES)
        .map(|s| {
            let theta = TAU * s as f64 / SPOKES as f64;
            (0..n)
                .map(|j| f.eval(Complex64::from_polar(r * j as f64 / (n - 1) as f64, theta)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlotData { circles, spokes })
}

fn path(points: &[Complex64], closed: bool) -> String {
    let mut d = String::new();
    for (j, p) in points.iter().enumerate() {
        let cmd = if j == 0 { 'M' } else { 'L' };
        write!(d, "{cmd}{:.9},{:.9} ", p.re, p.im).expect("string write");
    }
    if closed {
        d.push('Z');
    } else {
        d.pop();
    }
    d
}

/// Renders the plot. Coordinates are in map units inside a group that flips
/// the y axis; output is deterministic apart from the version comment.
pub fn render_svg(data: &PlotData) -> String {
    let all = data.circles.iter().chain(&data.spokes).flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-12);
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let s = CANVAS / (x1 - x0).max(y1 - y0);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(out, "<!-- harmonica {} -->", env!("CARGO_PKG_VERSION")).expect("string write");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.9} {:.9} {:.9} {:.9}\" width=\"{:.0}\" height=\"{:.0}\">",
        s * x0,
        -s * y1,
        s * (x1 - x0),
        s * (y1 - y0),
        s * (x1 - x0),
        s * (y1 - y0)
    )
    .expect("string write");
    writeln!(
        out,
        "<g transform=\"scale({s:.9},{:.9})\" fill=\"none\" stroke-linejoin=\"round\">",
        -s
    )
    .expect("string write");
    let last = data.circles.len().saturating_sub(1);
    for (k, c) in data.circles.iter().enumerate() {
        if k == last {
            continue;
        }
        writeln!(
            out,
            "<path class=\"circle\" stroke=\"#888888\" vector-effect=\"non-scaling-stroke\" d=\"{}\"/>",
            path(c, true)
        )
        .expect("string write");
    }
    for sp in &data.spokes {
        writeln!(
            out,
            "<path class=\"spoke\" stroke=\"#bbbbbb\" vector-effect=\"non-scaling-stroke\" d=\"{}\"/>",
            path(sp, false)
        )
        .expect("string write");
    }
    writeln!(
        out,
        "<path id=\"boundary\" stroke=\"#000000\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\" d=\"{}\"/>",
        path(data.boundary(), true)
    )
    .expect("string write");
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn plot_svg(f: &HarmonicMap, r: f64, curves: usize) -> Result<String> {
    Ok(render_svg(&plot_data(f, r, curves)?))
}

/// Vertices of the `id="boundary"` path of a rendered plot.
pub fn boundary_vertices(svg: &str) -> Result<Vec<Complex64>> {
    let line = svg
        .lines()
        .find(|l| l.contains("id=\"boundary\""))
        .ok_or_else(|| Error::Format("no boundary path".into()))?;
    let start = line
        .find(" d=\"")
        .ok_or_else(|| Error::Format("boundary path has no data".into()))?
        + 4;
    let end = line[start..]
        .find('"')
        .ok_or_else(|| Error::Format("unterminated path data".into()))?
        + start;
    line[start..end]
        .split_whitespace()
        .filter(|t| *t != "Z")
        .map(|t| {
            let t = t.trim_start_matches(['M', 'L']);
            let (x, y) = t
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad vertex `{t}`")))?;
            let p = |v: &str| v.parse::<f64>().map_err(|_| Error::Format(format!("bad number `{v}`")));
            Ok(Complex64::new(p(x)?, p(y)?))
        })
        .collect()
}

/// Smallest discrete `d arg w / d theta` along a closed polyline sampled at
/// equal parameter steps.
pub fn min_arg_rate(points: &[Complex64]) -> f64 {
    let n = points.len();
    let dt = TAU / n as f64;
    (0..n)
        .map(|j| (points[(j + 1) % n] / points[j]).arg() / dt)
        .fold(f64::INFINITY, f64::min)
}

/// Smallest discrete turning rate of the edge direction along a closed
/// polyline sampled at equal parameter steps.
pub fn min_turning_rate(points: &[Complex64]) -> f64 {
    let n = points.len();
    let dt = TAU / n as f64;
    let edge = |j: usize| points[(j + 1) % n] - points[j % n];
    (0..n)
        .map(|j| (edge(j + 1) / edge(j)).arg() / dt)
        .fold(f64::INFINITY, f64::min)
}
