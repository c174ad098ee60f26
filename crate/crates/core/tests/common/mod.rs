#![allow(dead_code)]

use std::f64::consts::TAU;

use harmonica::{GalleryId, HarmonicMap};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Every gallery entry with a closed form, parameters drawn at random.
pub fn gallery_id() -> impl Strategy<Value = GalleryId> {
    prop_oneof![
        prop::sample::select(GalleryId::fixed()),
        (2u32..7, 0.0..0.9f64).prop_map(|(n, alpha)| GalleryId::StarlikeFn { n, alpha }),
        (2u32..7, 0.0..0.9f64).prop_map(|(n, alpha)| GalleryId::ConvexFn { n, alpha }),
        (0.5..2.0f64, -0.9..0.9f64).prop_map(|(a, t)| GalleryId::Affine { a, b: a * t }),
    ]
}

/// Random complex coefficients `c_1..c_n`, moduli below `max`.
pub fn coeffs(n: usize, max: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.0..max, 0.0..TAU), n)
        .prop_map(|v| v.into_iter().map(|(m, t)| Complex64::from_polar(m, t)).collect())
}

/// `d/dtheta arg F(theta)` by the five-point central stencil of step `step`.
pub fn fd_arg_rate(f: impl Fn(f64) -> Complex64, theta: f64, step: f64) -> f64 {
    let diff = |k: f64| (f(theta + k * step) / f(theta - k * step)).arg();
    (8.0 * diff(1.0) - diff(2.0)) / (12.0 * step)
}

/// `d/dtheta f` from the two parts, written out independently of the library.
pub fn dtheta_of(f: &HarmonicMap, r: f64, theta: f64) -> Complex64 {
    let z = Complex64::from_polar(r, theta);
    let p = f.parts(z).unwrap();
    Complex64::i() * (z * p.dh - (z * p.dg).conj())
}
