//! Truncated complex power series without constant term.
//!
//! A [`TruncatedSeries`] stores `c_1, ..., c_N` of `sum_{n>=1} c_n z^n`. The
//! constant term is not representable. Each series also carries a [`Tail`]
//! describing what is known about the coefficients beyond `N`, which is what
//! makes evaluation near the unit circle auditable.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of stored coefficients.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Polynomial-times-geometric coefficient envelope:
/// `|c_n| <= constant * n^degree * ratio^(n-1)` for every `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Growth {
    pub constant: f64,
    pub degree: u32,
    pub ratio: f64,
}

impl Growth {
    pub fn polynomial(constant: f64, degree: u32) -> Self {
        Growth {
            constant,
            degree,
            ratio: 1.0,
        }
    }

    /// Envelope of the coefficientwise product.
    pub fn product(self, other: Growth) -> Growth {
        Growth {
            constant: self.constant * other.constant,
            degree: self.degree + other.degree,
            ratio: self.ratio * other.ratio,
        }
    }

    /// Envelope of `a * s + b * t`.
    pub fn sum(self, a: f64, other: Growth, b: f64) -> Growth {
        Growth {
            constant: a * self.constant + b * other.constant,
            degree: self.degree.max(other.degree),
            ratio: self.ratio.max(other.ratio),
        }
    }

    /// Upper bound on `sum_{n > order} n^extra |c_n| modulus^n`.
    pub fn tail(&self, modulus: f64, order: usize, extra_degree: u32) -> f64 {
        if self.constant == 0.0 || modulus == 0.0 {
            return 0.0;
        }
        if self.ratio == 0.0 {
            // only c_1 can be nonzero
            return 0.0;
        }
        let x = self.ratio * modulus;
        if x >= 1.0 {
            return f64::INFINITY;
        }
        self.constant / self.ratio * power_tail(self.degree + extra_degree, x, order)
    }
}

/// Coefficient growth classes of the bound families in use: `C(n) = n^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthClass {
    Linear,
    Quadratic,
    Cubic,
}

impl GrowthClass {
    pub fn degree(self) -> u32 {
        match self {
            GrowthClass::Linear => 1,
            GrowthClass::Quadratic => 2,
            GrowthClass::Cubic => 3,
        }
    }
}

/// What is known about the coefficients past the stored ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail {
    /// The series is a polynomial; every dropped coefficient is zero.
    Exact,
    /// Dropped coefficients obey the envelope.
    Bounded(Growth),
    /// Nothing is known (e.g. coefficients imported from a file).
    Unknown,
}

impl Tail {
    fn product(self, other: Tail) -> Tail {
        match (self, other) {
            (Tail::Exact, _) | (_, Tail::Exact) => Tail::Exact,
            (Tail::Bounded(a), Tail::Bounded(b)) => Tail::Bounded(a.product(b)),
            _ => Tail::Unknown,
        }
    }

    fn sum(self, a: f64, other: Tail, b: f64) -> Tail {
        match (self, other) {
            (Tail::Exact, Tail::Exact) => Tail::Exact,
            (Tail::Exact, Tail::Bounded(g)) => Tail::Bounded(Growth {
                constant: b * g.constant,
                ..g
            }),
            (Tail::Bounded(g), Tail::Exact) => Tail::Bounded(Growth {
                constant: a * g.constant,
                ..g
            }),
            (Tail::Bounded(g), Tail::Bounded(h)) => Tail::Bounded(g.sum(a, h, b)),
            _ => Tail::Unknown,
        }
    }
}

/// `sum_{n>=1} c_n z^n` truncated after `N` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    tail: Tail,
}

/// Result of the ordinary derivative `d/dz`: the constant term `c_1` is split
/// off so the remaining part keeps the no-constant-term shape.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivative {
    pub constant: Complex64,
    pub series: TruncatedSeries,
}

impl TruncatedSeries {
    /// Series from raw coefficients `c_1..c_N`; the tail is unknown.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(TruncatedSeries {
            coeffs,
            tail: Tail::Unknown,
        })
    }

    /// Polynomial with coefficients `c_1..c_N` and nothing beyond.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Ok(Self::new(coeffs)?.with_tail(Tail::Exact))
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        Self::new((1..=order).map(f).collect())
    }

    /// `c z^n`, padded to `order` coefficients.
    pub fn monomial(n: usize, c: Complex64, order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("monomial degree must be >= 1".into()));
        }
        let order = order.max(n);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        coeffs[n - 1] = c;
        Self::polynomial(coeffs)
    }

    pub fn identity(order: usize) -> Self {
        Self::monomial(1, Complex64::new(1.0, 0.0), order.max(1)).expect("order >= 1")
    }

    pub fn zero(order: usize) -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0); order.max(1)]).expect("order >= 1")
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero for `n = 0` and for `n` past the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        if n == 0 || n > self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[n - 1]
        }
    }

    /// Sets the order to `order`, dropping or zero-padding coefficients.
    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let order = order.max(1);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, Complex64::new(0.0, 0.0));
        let tail = self.tail_after_cut(order);
        TruncatedSeries { coeffs, tail }
    }

    /// Tail description once only the first `order` coefficients are kept.
    fn tail_after_cut(&self, order: usize) -> Tail {
        if self.tail == Tail::Exact && order < self.coeffs.len() {
            let c = self.coeffs[order..].iter().map(|c| c.norm()).fold(0.0, f64::max);
            Tail::Bounded(Growth::polynomial(c, 0))
        } else {
            self.tail
        }
    }

    /// `sum c_n z^n` by Horner's scheme.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        Ok(self.eval_raw(z))
    }

    pub(crate) fn eval_raw(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z
    }

    /// `sum n c_n z^(n-1)`.
    pub(crate) fn eval_derivative_raw(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * z + c * (i + 1) as f64;
        }
        acc
    }

    /// `sum n (n-1) c_n z^(n-2)`.
    pub(crate) fn eval_second_derivative_raw(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            let n = (i + 1) as f64;
            acc = acc * z + c * (n * (n - 1.0));
        }
        acc
    }

    pub fn evaluate_derivative(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        Ok(self.eval_derivative_raw(z))
    }

    /// Upper bound on the dropped part of `sum n^extra c_n z^n` at `|z| = modulus`.
    /// `None` when the tail is unknown.
    pub fn tail_bound_at(&self, modulus: f64, extra_degree: u32) -> Option<f64> {
        match self.tail {
            Tail::Exact => Some(0.0),
            Tail::Bounded(g) => Some(g.tail(modulus, self.order(), extra_degree)),
            Tail::Unknown => None,
        }
    }

    /// Shortest prefix whose dropped part, stored coefficients included,
    /// stays below `tol` in the sense of [`tail_bound_at`](Self::tail_bound_at).
    /// The result carries a tail envelope covering everything it dropped.
    /// Series with an unknown or growing tail come back unchanged.
    pub fn prefix_within(&self, modulus: f64, extra_degree: u32, tol: f64) -> TruncatedSeries {
        let (degree, base) = match self.tail {
            Tail::Exact => (0, 0.0),
            Tail::Bounded(g) if g.ratio <= 1.0 => (g.degree, g.constant),
            _ => return self.clone(),
        };
        let order = self.order();
        // suffix[k] = max over stored n > k of |c_n| / n^degree
        let mut suffix = vec![0.0f64; order + 1];
        for k in (0..order).rev() {
            let n = (k + 1) as f64;
            suffix[k] = suffix[k + 1].max(self.coeffs[k].norm() / n.powi(degree as i32));
        }
        let envelope = |n: usize| Growth::polynomial(base.max(suffix[n]), degree);
        let fits = |n: usize| envelope(n).tail(modulus, n, extra_degree) <= tol;
        if !fits(order) {
            return self.clone();
        }
        let (mut lo, mut hi) = (1, order);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if fits(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if lo == order {
            return self.clone();
        }
        let env = envelope(lo);
        TruncatedSeries {
            coeffs: self.coeffs[..lo].to_vec(),
            tail: if env.constant == 0.0 { Tail::Exact } else { Tail::Bounded(env) },
        }
    }

    /// Ordinary derivative with the constant term split off.
    pub fn derivative(&self) -> Derivative {
        let constant = self.coeffs[0];
        let rest: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * (i + 1) as f64)
            .collect();
        let series = if rest.is_empty() {
            TruncatedSeries::zero(1)
        } else {
            TruncatedSeries {
                coeffs: rest,
                tail: match self.tail {
                    Tail::Bounded(g) => Tail::Bounded(Growth {
                        // (n+1) |c_{n+1}| <= C (n+1)^(k+1) s^n <= C 2^(k+1) s n^(k+1) s^(n-1)
                        constant: g.constant * 2f64.powi(g.degree as i32 + 1) * g.ratio,
                        degree: g.degree + 1,
                        ratio: g.ratio,
                    }),
                    t => t,
                },
            }
        };
        Derivative { constant, series }
    }

    /// The operator `z d/dz`: coefficients `n c_n`.
    pub fn z_derivative(&self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i + 1) as f64)
                .collect(),
            tail: match self.tail {
                Tail::Bounded(g) => Tail::Bounded(Growth {
                    degree: g.degree + 1,
                    ..g
                }),
                t => t,
            },
        }
    }

    /// Coefficientwise product; the result has the smaller truncation.
    pub fn hadamard(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let coeffs = self.coeffs[..order]
            .iter()
            .zip(&other.coeffs[..order])
            .map(|(a, b)| a * b)
            .collect();
        let tail = self.tail_after_cut(order).product(other.tail_after_cut(order));
        TruncatedSeries { coeffs, tail }
    }

    /// Coefficients `c_n / n` (negated when `negate`): the series `H` with
    /// `z H' = s`, or `G` with `z G' = -s`.
    pub fn alexander_integrate(&self, negate: bool) -> TruncatedSeries {
        let sign = if negate { -1.0 } else { 1.0 };
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * (sign / (i + 1) as f64))
                .collect(),
            tail: self.tail,
        }
    }

    /// Coefficients `c_n r^(n-1)`, i.e. the series of `s(r z) / r`.
    pub fn dilate(&self, r: f64) -> TruncatedSeries {
        let mut p = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * p;
                p *= r;
                out
            })
            .collect();
        let tail = match self.tail {
            Tail::Bounded(g) => Tail::Bounded(Growth {
                ratio: g.ratio * r,
                ..g
            }),
            t => t,
        };
        TruncatedSeries { coeffs, tail }
    }

    /// `a * self + b * other`, truncated to the shorter order.
    pub fn linear_combination(
        &self,
        a: Complex64,
        other: &TruncatedSeries,
        b: Complex64,
    ) -> TruncatedSeries {
        let order = self.order().max(other.order());
        let coeffs = (1..=order)
            .map(|n| a * self.coeff(n) + b * other.coeff(n))
            .collect();
        let mut tail = self.tail.sum(a.norm(), other.tail, b.norm());
        // zero-padding an exact operand is harmless; padding a non-exact one is not
        if self.order() != other.order() {
            let short = if self.order() < other.order() { self } else { other };
            if short.tail != Tail::Exact {
                tail = Tail::Unknown;
            }
        }
        TruncatedSeries { coeffs, tail }
    }

    pub fn scaled(&self, a: Complex64) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            tail: match self.tail {
                Tail::Bounded(g) => Tail::Bounded(Growth {
                    constant: g.constant * a.norm(),
                    ..g
                }),
                t => t,
            },
        }
    }

    /// Writes `n,re,im` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for (i, c) in self.coeffs.iter().enumerate() {
            wtr.serialize(CsvRow {
                n: i + 1,
                re: c.re,
                im: c.im,
            })?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Reads `n,re,im` rows; `n` must run 1, 2, 3, ... without gaps.
    pub fn read_csv<R: Read>(r: R) -> Result<TruncatedSeries> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["n", "re", "im"] {
            return Err(Error::Format(format!(
                "expected header `n,re,im`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut coeffs = Vec::new();
        for row in rdr.deserialize() {
            let row: CsvRow = row?;
            if row.n != coeffs.len() + 1 {
                return Err(Error::Format(format!(
                    "row index {} out of sequence (expected {})",
                    row.n,
                    coeffs.len() + 1
                )));
            }
            coeffs.push(Complex64::new(row.re, row.im));
        }
        TruncatedSeries::new(coeffs).map_err(|_| Error::Format("no coefficient rows".into()))
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    n: usize,
    re: f64,
    im: f64,
}

pub(crate) fn check_disk(z: Complex64) -> Result<()> {
    let m = z.norm();
    if m < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisk { modulus: m })
    }
}

/// Coefficients of the Eulerian polynomial `A_k`, so that
/// `sum_{n>=1} n^k x^n = x A_k(x) / (1 - x)^(k+1)`.
pub fn eulerian(k: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for m in 1..=k {
        let mut next = vec![0.0; m as usize];
        for (j, slot) in next.iter_mut().enumerate() {
            let j_f = j as f64;
            let left = if j >= 1 { row.get(j - 1).copied().unwrap_or(0.0) } else { 0.0 };
            let here = row.get(j).copied().unwrap_or(0.0);
            *slot = (m as f64 - j_f) * left + (j_f + 1.0) * here;
        }
        row = next;
    }
    row
}

/// `sum_{n>=1} n^k x^n` in closed form, `0 <= x < 1`.
pub fn power_sum(k: u32, x: f64) -> f64 {
    x * eulerian_ratio(k, x)
}

/// `A_k(x) / (1 - x)^(k+1)`, i.e. `sum_{n>=1} n^k x^(n-1)`.
pub fn eulerian_ratio(k: u32, x: f64) -> f64 {
    let a = eulerian(k).iter().rev().fold(0.0, |acc, c| acc * x + c);
    a / (1.0 - x).powi(k as i32 + 1)
}

/// `sum_{n > order} n^k x^n`, summed as
/// `x^N sum_j C(k, j) N^(k-j) sum_{m>=1} m^j x^m` so no cancellation occurs.
pub fn power_tail(k: u32, x: f64, order: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return f64::INFINITY;
    }
    let big_n = order as f64;
    let mut binom = 1.0;
    let mut total = 0.0;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k - j + 1) as f64 / j as f64;
        }
        total += binom * big_n.powi((k - j) as i32) * power_sum(j, x);
    }
    x.powi(order.min(i32::MAX as usize) as i32) * total
}

/// Upper bound on `sum_{n > order} C(n) r^n` for `C(n) = n^k`.
pub fn tail_bound(growth: GrowthClass, r: f64, order: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidRadius {
            radius: r,
            range: "[0, 1)",
        });
    }
    Ok(power_tail(growth.degree(), r, order))
}

/// Smallest truncation order whose tail bound is below `tol`.
pub fn required_order(growth: GrowthClass, r: f64, tol: f64) -> Result<usize> {
    required_order_for_degree(growth.degree(), r, tol)
}

pub(crate) fn required_order_for_degree(degree: u32, r: f64, tol: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidRadius {
            radius: r,
            range: "[0, 1)",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let mut hi = 1usize;
    while power_tail(degree, r, hi) >= tol {
        hi *= 2;
        if hi > 1 << 26 {
            return Err(Error::TailTooLarge {
                bound: power_tail(degree, r, hi),
                tolerance: tol,
                modulus: r,
            });
        }
    }
    let mut lo = hi / 2;
    if power_tail(degree, r, lo.max(1)) < tol {
        return Ok(lo.max(1));
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if power_tail(degree, r, mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
