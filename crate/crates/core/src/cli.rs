//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::criteria::{property_sum, Order, Property};
use crate::error::{Error, Result};
use crate::gallery::{gallery, GalleryId};
use crate::harmonic::HarmonicMap;
use crate::plot::plot_svg;
use crate::radius::{
    half_plane_convex_radius, half_plane_starlike_radius, ll_convex_radius, sharpness_value,
    solve_radius, RadiusEquationId, RadiusResult, MIN_TOLERANCE,
};
use crate::series::{TruncatedSeries, DEFAULT_TRUNCATION};
use crate::verifier::{empirical_radius, scan_circle, scan_rows, DEFAULT_SAMPLES};

pub const TRUNCATION_ENV: &str = "HARMONICA_TRUNCATION";

#[derive(Parser, Debug)]
#[command(name = "harmonica", version, about = "Radii of full starlikeness and convexity for planar harmonic maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a radius equation, or locate a radius of a gallery map.
    Radius(RadiusArgs),
    /// Scan the angular derivatives on one circle.
    Scan(ScanArgs),
    /// Coefficient-sum certificate for a map.
    Certify(CertifyArgs),
    /// Convolve two gallery maps and write the coefficients.
    Convolve(ConvolveArgs),
    /// List gallery maps, or export one map's coefficients.
    Gallery(GalleryArgs),
    /// Render the image of concentric circles as SVG.
    Plot(PlotArgs),
    /// Radius table over equations and orders.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Solve,
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Starlike,
    Convex,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Property {
        match p {
            PropertyArg::Starlike => Property::Starlike,
            PropertyArg::Convex => Property::Convex,
        }
    }
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Gallery name, e.g. `L`, `fn:3:0.5`, `affine:1:0.5`.
    #[arg(long)]
    pub map: Option<String>,
    /// Analytic-part coefficient CSV (`n,re,im`), instead of `--map`.
    #[arg(long, conflicts_with = "map")]
    pub h: Option<PathBuf>,
    /// Co-analytic-part coefficient CSV; zero when omitted.
    #[arg(long, requires = "h")]
    pub g: Option<PathBuf>,
    /// Number of stored coefficients for gallery maps.
    #[arg(long)]
    pub truncation: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[arg(long, conflicts_with = "map")]
    pub equation: Option<String>,
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long, value_enum)]
    pub property: Option<PropertyArg>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = MIN_TOLERANCE)]
    pub tol: f64,
    #[arg(long)]
    pub truncation: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// `csv` writes grid rows, `json` the refined report.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, value_enum)]
    pub property: PropertyArg,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Certify `f(r z)/r` instead of `f`.
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long)]
    pub out_h: Option<PathBuf>,
    #[arg(long)]
    pub out_g: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GalleryArgs {
    /// Export this map instead of listing.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long)]
    pub out_h: Option<PathBuf>,
    #[arg(long)]
    pub out_g: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 8)]
    pub curves: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub truncation: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Comma-separated orders.
    #[arg(long, default_value = "0")]
    pub alphas: String,
    /// `all` or a comma-separated list of equation ids.
    #[arg(long, default_value = "all")]
    pub equations: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Truncation from the flag, then the environment, then the default.
pub fn truncation(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return positive(n);
    }
    match std::env::var(TRUNCATION_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("{TRUNCATION_ENV}={v} is not a count")))
            .and_then(positive),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

fn positive(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::InvalidParameter("truncation must be positive".into()))
    } else {
        Ok(n)
    }
}

fn read_series(path: &Path) -> Result<TruncatedSeries> {
    TruncatedSeries::read_csv(File::open(path)?)
}

fn load_map(args: &MapArgs) -> Result<HarmonicMap> {
    let n = truncation(args.truncation)?;
    match (&args.map, &args.h) {
        (Some(name), _) => gallery(&name.parse::<GalleryId>()?, n),
        (None, Some(h)) => {
            let h = read_series(h)?;
            let g = match &args.g {
                Some(g) => read_series(g)?,
                None => TruncatedSeries::zero(h.order()),
            };
            Ok(HarmonicMap::new(h, g))
        }
        (None, None) => Err(Error::InvalidParameter("give --map or --h".into())),
    }
}

fn sink(out: &Option<PathBuf>, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(body)?;
            w.flush()?;
        }
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn json_line<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let s = serde_json::to_string(v).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn radius_csv(out: &mut dyn Write, r: &RadiusResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "alpha", "radius", "residual", "bracket_lo", "bracket_hi", "iterations", "source"])?;
    let source = serde_json::to_value(r.source).map_err(|e| Error::Format(e.to_string()))?;
    w.write_record([
        r.id.clone(),
        r.alpha.to_string(),
        r.radius.to_string(),
        r.residual.to_string(),
        r.bracket[0].to_string(),
        r.bracket[1].to_string(),
        r.iterations.to_string(),
        source.as_str().unwrap_or_default().to_string(),
    ])?;
    out.write_all(&w.into_inner().map_err(|e| Error::Io(e.to_string()))?)?;
    Ok(())
}

fn cmd_radius(a: &RadiusArgs, out: &mut dyn Write) -> Result<()> {
    let alpha = Order::new(a.alpha)?;
    let result = match (&a.equation, &a.map) {
        (Some(eq), _) => {
            let id: RadiusEquationId = eq.parse()?;
            match a.method.unwrap_or(Method::Solve) {
                Method::Solve | Method::Closed => solve_radius(id, alpha, a.tol)?,
                Method::Scan => {
                    let (_, prop) = id.family();
                    let mut r = empirical_radius(&id.extremal(truncation(a.truncation)?), alpha, prop)?;
                    r.id = id.to_string();
                    r
                }
            }
        }
        (None, Some(name)) => {
            let gid: GalleryId = name.parse()?;
            let prop: Property = a
                .property
                .ok_or_else(|| Error::InvalidParameter("--map needs --property".into()))?
                .into();
            match a.method.unwrap_or(Method::Scan) {
                Method::Closed | Method::Solve => match (&gid, prop) {
                    (GalleryId::HarmonicHalfPlane, Property::Starlike) => half_plane_starlike_radius(alpha)?,
                    (GalleryId::HarmonicHalfPlane, Property::Convex) => half_plane_convex_radius(alpha)?,
                    (GalleryId::LL, Property::Convex) if alpha.value() == 0.0 => ll_convex_radius()?.0,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "no closed form for {gid} ({prop}, alpha = {}); use --method scan",
                            alpha.value()
                        )))
                    }
                },
                Method::Scan => {
                    let f = gallery(&gid, truncation(a.truncation)?)?;
                    let mut r = empirical_radius(&f, alpha, prop)?;
                    r.id = format!("{gid}:{prop}");
                    r
                }
            }
        }
        (None, None) => return Err(Error::InvalidParameter("give --equation or --map".into())),
    };
    match a.format {
        Format::Json => json_line(out, &result),
        Format::Csv => radius_csv(out, &result),
    }
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<()> {
    let f = load_map(&a.map)?;
    let alpha = Order::new(a.alpha)?;
    match a.format {
        Format::Json => {
            let rep = scan_circle(&f, a.r, alpha, a.samples)?;
            let mut buf = Vec::new();
            json_line(&mut buf, &rep)?;
            sink(&a.out, out, &buf)
        }
        Format::Csv => {
            let rows = scan_rows(&f, a.r, a.samples)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            sink(&a.out, out, &buf)
        }
    }
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> Result<()> {
    let mut f = load_map(&a.map)?;
    if let Some(r) = a.r {
        f = f.scale(r)?;
    }
    let cert = property_sum(&f, a.property.into(), Order::new(a.alpha)?)?;
    json_line(out, &cert)
}

fn write_map(f: &HarmonicMap, out_h: &Option<PathBuf>, out_g: &Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    match (out_h, out_g) {
        (None, None) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "h_re", "h_im", "g_re", "g_im"])?;
            for n in 1..=f.truncation() {
                let (a, b) = (f.h().coeff(n), f.g().coeff(n));
                w.write_record([
                    n.to_string(),
                    num(a.re),
                    num(a.im),
                    num(b.re),
                    num(b.im),
                ])?;
            }
            out.write_all(&w.into_inner().map_err(|e| Error::Io(e.to_string()))?)?;
            Ok(())
        }
        _ => {
            if let Some(p) = out_h {
                f.h().write_csv(File::create(p)?)?;
            }
            if let Some(p) = out_g {
                f.g().write_csv(File::create(p)?)?;
            }
            Ok(())
        }
    }
}

// Prints signed zeros as `0`.
fn num(x: f64) -> String {
    (x + 0.0).to_string()
}

fn cmd_convolve(a: &ConvolveArgs, out: &mut dyn Write) -> Result<()> {
    let n = truncation(a.truncation)?;
    let f = gallery(&a.lhs.parse()?, n)?;
    let g = gallery(&a.rhs.parse()?, n)?;
    write_map(&f.convolve(&g), &a.out_h, &a.out_g, out)
}

#[derive(Serialize)]
struct GalleryEntry {
    name: String,
    description: &'static str,
}

fn cmd_gallery(a: &GalleryArgs, out: &mut dyn Write) -> Result<()> {
    match &a.map {
        Some(name) => {
            let f = gallery(&name.parse()?, truncation(a.truncation)?)?;
            write_map(&f, &a.out_h, &a.out_g, out)
        }
        None => {
            let mut ids = GalleryId::fixed();
            ids.push(GalleryId::StarlikeFn { n: 2, alpha: 0.0 });
            ids.push(GalleryId::ConvexFn { n: 2, alpha: 0.0 });
            ids.push(GalleryId::Affine { a: 1.0, b: 0.5 });
            for id in ids {
                let name = match id {
                    GalleryId::StarlikeFn { .. } => "fn:<n>:<alpha>".to_string(),
                    GalleryId::ConvexFn { .. } => "Fn:<n>:<alpha>".to_string(),
                    GalleryId::Affine { .. } => "affine:<a>:<b>".to_string(),
                    _ => id.to_string(),
                };
                json_line(
                    out,
                    &GalleryEntry {
                        name,
                        description: id.describe(),
                    },
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Result<()> {
    let f = gallery(&a.map.parse()?, truncation(a.truncation)?)?;
    let svg = plot_svg(&f, a.r, a.curves)?;
    sink(&a.out, out, svg.as_bytes())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub equation: RadiusEquationId,
    pub alpha: f64,
    pub radius: f64,
    pub residual: f64,
    pub sharpness: f64,
}

/// Solved radii sorted by equation then alpha.
pub fn radius_table(equations: &[RadiusEquationId], alphas: &[f64]) -> Result<Vec<TableRow>> {
    let mut eqs = equations.to_vec();
    eqs.sort();
    eqs.dedup();
    let mut al = alphas.to_vec();
    al.sort_by(f64::total_cmp);
    al.dedup();
    let mut rows = Vec::new();
    for id in eqs {
        for &a in &al {
            let r = solve_radius(id, Order::new(a)?, MIN_TOLERANCE)?;
            rows.push(TableRow {
                equation: id,
                alpha: a,
                radius: r.radius,
                residual: r.residual,
                sharpness: sharpness_value(id, r.radius)?,
            });
        }
    }
    Ok(rows)
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<()> {
    let alphas = a
        .alphas
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad alpha `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let eqs: Vec<RadiusEquationId> = if a.equations.trim() == "all" {
        RadiusEquationId::all().to_vec()
    } else {
        a.equations
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_>>()?
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["equation", "alpha", "radius", "residual", "sharpness"])?;
    for row in radius_table(&eqs, &alphas)? {
        w.write_record([
            row.equation.to_string(),
            row.alpha.to_string(),
            format!("{:.15}", row.radius),
            format!("{:e}", row.residual),
            format!("{:.15}", row.sharpness),
        ])?;
    }
    let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    sink(&a.out, out, &buf)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Radius(a) => cmd_radius(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Convolve(a) => cmd_convolve(a, out),
        Command::Gallery(a) => cmd_gallery(a, out),
        Command::Plot(a) => cmd_plot(a, out),
        Command::Table(a) => cmd_table(a, out),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    execute(&cli, out)
}

/// Machine-readable error record written to stderr.
#[derive(Serialize)]
pub struct ErrorRecord {
    pub code: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> Result<String> {
        let mut buf = Vec::new();
        run(std::iter::once("harmonica").chain(args.iter().copied()), &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn radius_equation_json() {
        let s = run_str(&["radius", "--equation", "Eq4_1", "--alpha", "0"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!((v["radius"].as_f64().unwrap() - 0.129831).abs() < 1e-6);
        assert_eq!(v["source"], "equation_root");
        for k in ["id", "alpha", "radius", "residual", "bracket", "iterations", "source"] {
            assert!(v.get(k).is_some(), "{k}");
        }
    }

    #[test]
    fn radius_closed_form_map() {
        let s = run_str(&["radius", "--map", "L", "--property", "convex", "--method", "closed"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!((v["radius"].as_f64().unwrap() - 0.414214).abs() < 1e-6);
        let s = run_str(&["radius", "--equation", "Eq3_2", "--format", "csv"]).unwrap();
        assert!(s.starts_with("id,alpha,radius,residual,bracket_lo,bracket_hi,iterations,source\nEq3_2,0,0.1129"));
    }

    #[test]
    fn table_rows() {
        let s = run_str(&["table", "--alphas", "0.5,0"]).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "equation,alpha,radius,residual,sharpness");
        assert_eq!(lines.len(), 15);
        assert!(lines[1].starts_with("Eq3_2,0,0.1129029"));
        assert!(lines[2].starts_with("Eq3_2,0.5,"));
    }

    #[test]
    fn certify_boundary_member() {
        let s = run_str(&["certify", "--map", "fn:2:0.5", "--property", "starlike", "--alpha", "0.5"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!((v["sum"].as_f64().unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(v["passed"], true);
        assert_eq!(v["truncated"], false);
    }

    #[test]
    fn convolve_half_plane_with_itself() {
        let s = run_str(&["convolve", "--lhs", "L", "--rhs", "L", "--truncation", "8"]).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "n,h_re,h_im,g_re,g_im");
        assert_eq!(lines[3], "3,4,0,1,0");
    }

    #[test]
    fn scan_koebe_tangent_nonnegative() {
        let s = run_str(&["scan", "--map", "K", "--r", "0.17", "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["min_dtheta_arg_tangent"]["value"].as_f64().unwrap() >= 0.0);
        let csv = run_str(&["scan", "--map", "K", "--r", "0.17", "--samples", "256"]).unwrap();
        assert!(csv.starts_with("theta,dtheta_arg,dtheta_arg_tangent,jacobian\n"));
        assert_eq!(csv.lines().count(), 257);
    }

    #[test]
    fn gallery_listing_and_export() {
        let s = run_str(&["gallery"]).unwrap();
        assert_eq!(s.lines().count(), 13);
        assert!(s.contains("\"name\":\"LK\""));
        let s = run_str(&["gallery", "--map", "L", "--truncation", "3"]).unwrap();
        assert_eq!(s, "n,h_re,h_im,g_re,g_im\n1,1,0,0,0\n2,1.5,0,-0.5,0\n3,2,0,-1,0\n");
    }

    #[test]
    fn errors_carry_codes() {
        let e = run_str(&["radius", "--equation", "Eq9_9"]).unwrap_err();
        assert_eq!(e.code(), "unknown_equation");
        let e = run_str(&["plot", "--map", "nope", "--r", "0.5"]).unwrap_err();
        assert_eq!(e.code(), "unknown_map");
        let e = run_str(&["plot", "--map", "L", "--r", "1.2"]).unwrap_err();
        assert_eq!(e.code(), "invalid_radius");
        let e = run_str(&["radius", "--map", "K", "--property", "convex", "--method", "closed"]).unwrap_err();
        assert_eq!(e.code(), "invalid_parameter");
        let rec = ErrorRecord::from(&e);
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["code"], "invalid_parameter");
    }

    #[test]
    fn coefficient_files_round_trip() {
        let dir = std::env::temp_dir().join(format!("harmonica-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let h = dir.join("h.csv");
        let g = dir.join("g.csv");
        run_str(&[
            "gallery", "--map", "fn:2:0", "--truncation", "4",
            "--out-h", h.to_str().unwrap(), "--out-g", g.to_str().unwrap(),
        ])
        .unwrap();
        let s = run_str(&[
            "certify", "--h", h.to_str().unwrap(), "--g", g.to_str().unwrap(), "--property", "starlike",
        ])
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["truncated"], true);
        assert!((v["sum"].as_f64().unwrap() - 1.0).abs() < 1e-15);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
