//! Harmonic maps `f = h + conj(g)` on the unit disk.

use num_complex::Complex64;

use crate::closed_form::{CoefficientFamily, FamilyEvaluator};
use crate::error::{Error, Result};
use crate::series::{check_disk, TruncatedSeries};

/// Largest admissible truncation-tail bound for series evaluation.
pub const SERIES_TOLERANCE: f64 = 1e-10;

/// Below this modulus `f` or `d/dtheta f` is treated as vanishing.
pub const DEGENERACY_THRESHOLD: f64 = 1e-13;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Exact description of both parts, used for rational evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub h: CoefficientFamily,
    pub g: CoefficientFamily,
}

#[derive(Clone, Debug)]
struct Evaluators {
    h: FamilyEvaluator,
    g: FamilyEvaluator,
}

/// `h, g` and their first two derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parts {
    pub z: Complex64,
    pub h: Complex64,
    pub g: Complex64,
    pub dh: Complex64,
    pub dg: Complex64,
    pub d2h: Complex64,
    pub d2g: Complex64,
}

impl Parts {
    pub fn value(&self) -> Complex64 {
        self.h + self.g.conj()
    }

    /// `z h' - conj(z g')`; `d/dtheta f = i` times this.
    pub fn radial_numerator(&self) -> Complex64 {
        self.z * self.dh - (self.z * self.dg).conj()
    }

    /// `z h' + z^2 h'' + conj(z g' + z^2 g'')`.
    pub fn tangent_numerator(&self) -> Complex64 {
        let z2 = self.z * self.z;
        self.z * self.dh + z2 * self.d2h + (self.z * self.dg + z2 * self.d2g).conj()
    }
}

#[derive(Clone, Debug)]
pub struct HarmonicMap {
    h: TruncatedSeries,
    g: TruncatedSeries,
    closed_form: Option<ClosedForm>,
    evaluators: Option<Evaluators>,
}

impl PartialEq for HarmonicMap {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.g == other.g && self.closed_form == other.closed_form
    }
}

/// Outcome of a sampled sense-preservation check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensePreservation {
    pub holds: bool,
    pub witness: Complex64,
    pub min_jacobian: f64,
}

impl HarmonicMap {
    /// Map from coefficient series; the shorter part is zero-padded.
    pub fn new(h: TruncatedSeries, g: TruncatedSeries) -> Self {
        let order = h.order().max(g.order());
        HarmonicMap {
            h: h.truncate(order),
            g: g.truncate(order),
            closed_form: None,
            evaluators: None,
        }
    }

    /// Analytic map `h` (with `g = 0`).
    pub fn analytic(h: TruncatedSeries) -> Self {
        let order = h.order();
        Self::new(h, TruncatedSeries::zero(order))
    }

    pub fn identity(order: usize) -> Self {
        Self::analytic(TruncatedSeries::identity(order))
    }

    /// Map whose coefficients come from exact families; evaluation uses the
    /// rational closed form and the stored series is the cross-check.
    pub fn from_families(h: CoefficientFamily, g: CoefficientFamily, order: usize) -> Self {
        let hs = h.series(order);
        let gs = g.series(order);
        let mut map = Self::new(hs, gs);
        map.set_closed_form(Some(ClosedForm { h, g }));
        map
    }

    fn set_closed_form(&mut self, cf: Option<ClosedForm>) {
        self.evaluators = cf.as_ref().map(|cf| Evaluators {
            h: cf.h.evaluator(),
            g: cf.g.evaluator(),
        });
        self.closed_form = cf;
    }

    pub fn h(&self) -> &TruncatedSeries {
        &self.h
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn truncation(&self) -> usize {
        self.h.order()
    }

    /// Same map with the closed form dropped, forcing series evaluation.
    pub fn series_only(&self) -> HarmonicMap {
        HarmonicMap::new(self.h.clone(), self.g.clone())
    }

    /// Re-expands the closed form to `order` coefficients.
    pub fn with_truncation(&self, order: usize) -> HarmonicMap {
        match &self.closed_form {
            Some(cf) => HarmonicMap::from_families(cf.h.clone(), cf.g.clone(), order),
            None => HarmonicMap::new(self.h.truncate(order), self.g.truncate(order)),
        }
    }

    /// Same values on `|z| <= r` from as few stored terms as the series
    /// tolerance allows; maps with a closed form are returned as is.
    pub fn prefix_for(&self, r: f64) -> HarmonicMap {
        if self.closed_form.is_some() {
            return self.clone();
        }
        // headroom under the check in check_tail
        let tol = 0.1 * SERIES_TOLERANCE * r.max(1e-3).powi(2);
        HarmonicMap::new(self.h.prefix_within(r, 2, tol), self.g.prefix_within(r, 2, tol))
    }

    /// Values and derivatives of both parts at `z`.
    pub fn parts(&self, z: Complex64) -> Result<Parts> {
        check_disk(z)?;
        if let Some(ev) = &self.evaluators {
            let (h, dh, d2h) = ev.h.eval(z);
            let (g, dg, d2g) = ev.g.eval(z);
            return Ok(Parts {
                z,
                h,
                g,
                dh,
                dg,
                d2h,
                d2g,
            });
        }
        self.series_parts(z)
    }

    /// Like [`parts`](Self::parts) but always through the truncated series.
    pub fn series_parts(&self, z: Complex64) -> Result<Parts> {
        check_disk(z)?;
        self.check_tail(z.norm())?;
        Ok(Parts {
            z,
            h: self.h.eval_raw(z),
            g: self.g.eval_raw(z),
            dh: self.h.eval_derivative_raw(z),
            dg: self.g.eval_derivative_raw(z),
            d2h: self.h.eval_second_derivative_raw(z),
            d2g: self.g.eval_second_derivative_raw(z),
        })
    }

    fn check_tail(&self, modulus: f64) -> Result<()> {
        // second derivatives carry the extra n^2 weight; divide the z^n tail by |z|^2
        let scale = modulus.max(1e-3).powi(2);
        for s in [&self.h, &self.g] {
            if let Some(bound) = s.tail_bound_at(modulus, 2) {
                let bound = bound / scale;
                if bound > SERIES_TOLERANCE {
                    return Err(Error::TailTooLarge {
                        bound,
                        tolerance: SERIES_TOLERANCE,
                        modulus,
                    });
                }
            }
        }
        Ok(())
    }

    /// `h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        if let Some(ev) = &self.evaluators {
            return Ok(ev.h.eval(z).0 + ev.g.eval(z).0.conj());
        }
        self.check_tail(z.norm())?;
        Ok(self.h.eval_raw(z) + self.g.eval_raw(z).conj())
    }

    /// `|h'|^2 - |g'|^2`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        let p = self.parts(z)?;
        Ok(p.dh.norm_sqr() - p.dg.norm_sqr())
    }

    /// `g' / h'`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        let p = self.parts(z)?;
        if p.dh.norm() < DEGENERACY_THRESHOLD {
            return Err(degenerate("h'", z));
        }
        Ok(p.dg / p.dh)
    }

    /// `d/dtheta f(r e^{i theta})`.
    pub fn dtheta(&self, r: f64, theta: f64) -> Result<Complex64> {
        let p = self.parts(Complex64::from_polar(r, theta))?;
        Ok(Complex64::i() * p.radial_numerator())
    }

    /// `d/dtheta arg f(r e^{i theta}) = Re[(z h' - conj(z g')) / f]`.
    pub fn dtheta_arg(&self, r: f64, theta: f64) -> Result<f64> {
        check_circle(r)?;
        let p = self.parts(Complex64::from_polar(r, theta))?;
        dtheta_arg_of(&p)
    }

    /// `d/dtheta arg(d/dtheta f(r e^{i theta}))`.
    pub fn dtheta_arg_tangent(&self, r: f64, theta: f64) -> Result<f64> {
        check_circle(r)?;
        let p = self.parts(Complex64::from_polar(r, theta))?;
        dtheta_arg_tangent_of(&p)
    }

    /// `f * F = h * H + conj(g * G)`.
    pub fn convolve(&self, other: &HarmonicMap) -> HarmonicMap {
        let h = self.h.hadamard(&other.h);
        let g = self.g.hadamard(&other.g);
        let mut out = HarmonicMap::new(h, g);
        if let (Some(a), Some(b)) = (&self.closed_form, &other.closed_form) {
            out.set_closed_form(Some(ClosedForm {
                h: a.h.product(&b.h),
                g: a.g.product(&b.g),
            }));
        }
        out
    }

    /// `f(r z) / r`.
    pub fn scale(&self, r: f64) -> Result<HarmonicMap> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidRadius {
                radius: r,
                range: "(0, 1]",
            });
        }
        if r == 1.0 {
            return Ok(self.clone());
        }
        let mut out = HarmonicMap::new(self.h.dilate(r), self.g.dilate(r));
        out.set_closed_form(self.closed_form.as_ref().map(|cf| ClosedForm {
            h: cf.h.dilate(r),
            g: cf.g.dilate(r),
        }));
        Ok(out)
    }

    /// `F = H + conj(G)` with `z H' = h` and `z G' = -g`.
    pub fn alexander(&self) -> HarmonicMap {
        let mut out = HarmonicMap::new(
            self.h.alexander_integrate(false),
            self.g.alexander_integrate(true),
        );
        let cf = self.closed_form.as_ref().and_then(|cf| {
            Some(ClosedForm {
                h: cf.h.alexander(false)?,
                g: cf.g.alexander(true)?,
            })
        });
        out.set_closed_form(cf);
        out
    }

    /// Inverse of [`alexander`](Self::alexander): `h = z H'`, `g = -z G'`.
    pub fn alexander_inverse(&self) -> HarmonicMap {
        let minus = Complex64::new(-1.0, 0.0);
        let mut out = HarmonicMap::new(self.h.z_derivative(), self.g.z_derivative().scaled(minus));
        out.set_closed_form(self.closed_form.as_ref().map(|cf| ClosedForm {
            h: cf.h.z_derivative(),
            g: cf
                .g
                .z_derivative()
                .combine(minus, &CoefficientFamily::zero().dilate(cf.g.ratio()), ZERO)
                .expect("same ratio"),
        }));
        out
    }

    /// `h + conj(-g)`.
    pub fn negate_coanalytic(&self) -> HarmonicMap {
        let minus = Complex64::new(-1.0, 0.0);
        let mut out = HarmonicMap::new(self.h.clone(), self.g.scaled(minus));
        out.set_closed_form(self.closed_form.as_ref().map(|cf| ClosedForm {
            h: cf.h.clone(),
            g: cf
                .g
                .combine(minus, &CoefficientFamily::zero().dilate(cf.g.ratio()), ZERO)
                .expect("same ratio"),
        }));
        out
    }

    /// Coefficientwise `h + eps g` for unimodular `eps`.
    pub fn analytic_slice(&self, eps: Complex64) -> Result<TruncatedSeries> {
        check_unimodular(eps)?;
        Ok(self.h.linear_combination(Complex64::new(1.0, 0.0), &self.g, eps))
    }

    /// Like [`analytic_slice`](Self::analytic_slice) but keeps the closed
    /// form, as an analytic map `h + eps g` with zero co-analytic part.
    pub fn analytic_slice_map(&self, eps: Complex64) -> Result<HarmonicMap> {
        let series = self.analytic_slice(eps)?;
        let mut out = HarmonicMap::analytic(series);
        let cf = self.closed_form.as_ref().and_then(|cf| {
            Some(ClosedForm {
                h: cf.h.combine(Complex64::new(1.0, 0.0), &cf.g, eps)?,
                g: CoefficientFamily::zero(),
            })
        });
        out.set_closed_form(cf);
        Ok(out)
    }

    /// Samples the Jacobian on a polar grid over `|z| <= r`.
    pub fn sense_preserving_on(&self, r: f64, samples: usize) -> Result<SensePreservation> {
        check_circle(r)?;
        let samples = samples.max(8);
        let rings = (samples / 8).clamp(8, 256);
        let mut worst = SensePreservation {
            holds: true,
            witness: ZERO,
            min_jacobian: self.jacobian(ZERO)?,
        };
        for k in 1..=rings {
            let rho = r * k as f64 / rings as f64;
            for j in 0..samples {
                let theta = std::f64::consts::TAU * j as f64 / samples as f64;
                let z = Complex64::from_polar(rho, theta);
                let jac = self.jacobian(z)?;
                if jac < worst.min_jacobian {
                    worst.min_jacobian = jac;
                    worst.witness = z;
                }
            }
        }
        worst.holds = worst.min_jacobian > 0.0;
        Ok(worst)
    }
}

pub(crate) fn dtheta_arg_of(p: &Parts) -> Result<f64> {
    let f = p.value();
    if f.norm() < DEGENERACY_THRESHOLD * p.z.norm() {
        return Err(degenerate("f", p.z));
    }
    Ok((p.radial_numerator() / f).re)
}

pub(crate) fn dtheta_arg_tangent_of(p: &Parts) -> Result<f64> {
    let d = p.radial_numerator();
    if d.norm() < DEGENERACY_THRESHOLD * p.z.norm() {
        return Err(degenerate("d/dtheta f", p.z));
    }
    Ok((p.tangent_numerator() / d).re)
}

fn degenerate(what: &'static str, z: Complex64) -> Error {
    Error::Degenerate {
        what,
        re: z.re,
        im: z.im,
    }
}

pub(crate) fn check_circle(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius {
            radius: r,
            range: "(0, 1)",
        })
    }
}

fn check_unimodular(eps: Complex64) -> Result<()> {
    if (eps.norm() - 1.0).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "slice parameter must have modulus 1, got {}",
            eps.norm()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{gallery, GalleryId};
    use std::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_map_quantities() {
        let id = HarmonicMap::identity(8);
        let z = Complex64::new(0.3, -0.4);
        assert_eq!(id.eval(z).unwrap(), z);
        assert_eq!(id.jacobian(z).unwrap(), 1.0);
        assert_eq!(id.dilatation(z).unwrap(), ZERO);
        assert!((id.dtheta_arg(0.7, 1.3).unwrap() - 1.0).abs() < 1e-15);
        assert!((id.dtheta_arg_tangent(0.7, 1.3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobian_of_half_plane_map() {
        let l = gallery(&GalleryId::HarmonicHalfPlane, 256).unwrap();
        assert!((l.jacobian(re(0.5)).unwrap() - 48.0).abs() < 1e-12);
    }

    #[test]
    fn dilatations_of_koebe_and_half_plane() {
        let k = gallery(&GalleryId::HarmonicKoebe, 256).unwrap();
        let l = gallery(&GalleryId::HarmonicHalfPlane, 256).unwrap();
        assert!((k.dilatation(re(0.3)).unwrap() - re(0.3)).norm() < 1e-14);
        assert!((l.dilatation(re(0.3)).unwrap() - re(-0.3)).norm() < 1e-14);
        let z = Complex64::new(0.1, 0.5);
        assert!((k.dilatation(z).unwrap() - z).norm() < 1e-13);
        let kk = gallery(&GalleryId::AnalyticKoebe, 64).unwrap();
        assert_eq!(kk.dilatation(z).unwrap(), ZERO);
    }

    #[test]
    fn half_plane_dtheta_arg_at_theta_pi() {
        let l = gallery(&GalleryId::HarmonicHalfPlane, 256).unwrap();
        let r = 5f64.sqrt() - 2.0;
        assert!((l.dtheta_arg(r, PI).unwrap() - 0.5).abs() < 1e-12);
        for &r in &[0.2, 0.6, 0.9] {
            let expect = (1.0 - r) / (1.0 + r) / (1.0 + r);
            assert!((l.dtheta_arg(r, PI).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn half_plane_dtheta_arg_where_cos_theta_equals_r() {
        let l = gallery(&GalleryId::HarmonicHalfPlane, 256).unwrap();
        for &r in &[0.1, 0.45, 0.8, 0.95] {
            let v = l.dtheta_arg(r, r.acos()).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "r={r}: {v}");
        }
    }

    #[test]
    fn tangent_of_f2_at_alpha_zero() {
        let f2 = gallery(&GalleryId::StarlikeFn { n: 2, alpha: 0.0 }, 8).unwrap();
        assert!((f2.dtheta_arg_tangent(0.5, 0.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn tangent_reduces_to_example_form_for_fn() {
        // Re[(z + n^2 c zbar^n) / (z - n c zbar^n)] with c = (1-a)/(n+a)
        for n in 2..6 {
            for &a in &[0.0, 0.3, 0.8] {
                let f = gallery(&GalleryId::StarlikeFn { n, alpha: a }, 8).unwrap();
                let c = (1.0 - a) / (n as f64 + a);
                for &(r, t) in &[(0.4, 0.3), (0.9, 2.0), (0.7, -1.1)] {
                    let z = Complex64::from_polar(r, t);
                    let zb = z.conj().powi(n as i32);
                    let nn = n as f64;
                    let tan = ((z + zb * (nn * nn * c)) / (z - zb * (nn * c))).re;
                    let arg = ((z - zb * (nn * c)) / (z + zb * c)).re;
                    assert!((f.dtheta_arg_tangent(r, t).unwrap() - tan).abs() < 1e-13);
                    assert!((f.dtheta_arg(r, t).unwrap() - arg).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn tangent_reduces_to_shear_form() {
        // g = eps h: Re(1 + z h''/h') (1-|e|^2)|zh'|^2 / |zh' - conj(e zh')|^2
        let h = CoefficientFamily::polynomial(&[1.0]);
        for eps in [re(0.3), Complex64::new(0.0, 0.5), re(-0.7)] {
            let g = h.combine(eps, &CoefficientFamily::zero(), ZERO).unwrap();
            let f = HarmonicMap::from_families(h.clone(), g, 64);
            for &(r, t) in &[(0.5, 0.4), (0.95, 3.0), (0.2, -2.2)] {
                let z = Complex64::from_polar(r, t);
                let one = re(1.0);
                let dh = one / ((one - z) * (one - z));
                let d2h = re(2.0) / ((one - z) * (one - z) * (one - z));
                let zh = z * dh;
                let e2 = eps.norm_sqr();
                let expect = (1.0 - e2) * zh.norm_sqr() / (zh - (eps * zh).conj()).norm_sqr()
                    * (one + z * d2h / dh).re;
                assert!((f.dtheta_arg_tangent(r, t).unwrap() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_points_are_signalled() {
        let zero = HarmonicMap::new(TruncatedSeries::zero(4), TruncatedSeries::zero(4));
        assert!(matches!(zero.dtheta_arg(0.5, 0.0), Err(Error::Degenerate { .. })));
        assert!(matches!(zero.dtheta_arg_tangent(0.5, 0.0), Err(Error::Degenerate { .. })));
        assert!(matches!(zero.dilatation(re(0.2)), Err(Error::Degenerate { .. })));
        let id = HarmonicMap::identity(2);
        assert!(id.eval(re(1.0)).is_err());
        assert!(id.dtheta_arg(1.0, 0.0).is_err());
    }

    #[test]
    fn scale_examples() {
        let k = gallery(&GalleryId::HarmonicKoebe, 64).unwrap();
        assert_eq!(k.scale(1.0).unwrap(), k);
        assert!((k.scale(0.5).unwrap().h().coeff(2) - re(1.25)).norm() < 1e-15);
        assert!(k.scale(0.0).is_err());
        assert!(k.scale(1.5).is_err());
    }

    #[test]
    fn series_tail_guard_triggers() {
        let l = gallery(&GalleryId::HarmonicHalfPlane, 32).unwrap().series_only();
        assert!(matches!(l.eval(re(0.9)), Err(Error::TailTooLarge { .. })));
        assert!(l.eval(re(0.1)).is_ok());
    }

    #[test]
    fn slices_of_half_plane_map() {
        let l = gallery(&GalleryId::HarmonicHalfPlane, 64).unwrap();
        // signed b_n = (1-n)/2: h - g is the Koebe function, h + g is z/(1-z)
        let minus = l.analytic_slice(re(-1.0)).unwrap();
        let plus = l.analytic_slice(re(1.0)).unwrap();
        for n in 1..=64 {
            assert_eq!(minus.coeff(n), re(n as f64));
            assert_eq!(plus.coeff(n), re(1.0));
        }
        assert!(l.analytic_slice(re(0.5)).is_err());
        let k = gallery(&GalleryId::AnalyticKoebe, 16).unwrap();
        assert_eq!(k.analytic_slice(Complex64::new(0.6, 0.8)).unwrap().coeffs(), k.h().coeffs());
    }

    #[test]
    fn sense_preservation_of_koebe_and_identity() {
        let k = gallery(&GalleryId::HarmonicKoebe, 256).unwrap();
        assert!(k.sense_preserving_on(0.9, 256).unwrap().holds);
        assert!(HarmonicMap::identity(4).sense_preserving_on(0.9, 64).unwrap().holds);
    }

    #[test]
    fn convolution_with_analytic_identity_kernel() {
        let l = gallery(&GalleryId::AnalyticHalfPlane, 64).unwrap();
        let f = gallery(&GalleryId::HarmonicKoebe, 64).unwrap();
        let c = l.convolve(&f);
        assert_eq!(c.h().coeffs(), f.h().coeffs());
        assert!(c.g().coeffs().iter().all(|b| *b == ZERO));
    }
}
