//! Coefficient families `c_n = s^(n-1) * (p(n) or override_n)` and their
//! exact rational sums.
//!
//! With `p(n) = sum_j p_j n^j`, the sum `sum_n p(n) w^n` equals
//! `sum_j p_j w A_j(w) / (1 - w)^(j+1)` where `A_j` is the Eulerian
//! polynomial. Every named map in the gallery is a pair of such families, and
//! the families stay closed under convolution, dilation and linear slices.

use num_complex::Complex64;

use crate::series::{eulerian, Growth, Tail, TruncatedSeries};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFamily {
    /// `p_j`, coefficient of `n^j`, before division by `denom`.
    poly: Vec<Complex64>,
    /// Common divisor of `p`; integer numerators then round only once.
    denom: f64,
    /// `(n, value)` replacing `p(n)`, sorted by `n`.
    overrides: Vec<(usize, Complex64)>,
    ratio: f64,
}

impl CoefficientFamily {
    pub fn zero() -> Self {
        CoefficientFamily {
            poly: Vec::new(),
            denom: 1.0,
            overrides: Vec::new(),
            ratio: 1.0,
        }
    }

    /// `c_n = p(n)` with `p_j = poly[j]`.
    pub fn polynomial(poly: &[f64]) -> Self {
        CoefficientFamily::polynomial_over(poly, 1.0)
    }

    /// `c_n = p(n) / denom`.
    pub fn polynomial_over(poly: &[f64], denom: f64) -> Self {
        assert!(denom != 0.0, "zero denominator");
        let mut fam = CoefficientFamily {
            poly: poly.iter().map(|&p| Complex64::new(p, 0.0)).collect(),
            denom,
            overrides: Vec::new(),
            ratio: 1.0,
        };
        fam.trim();
        fam
    }

    /// Single term `c z^n`.
    pub fn monomial(n: usize, c: Complex64) -> Self {
        CoefficientFamily::zero().with_override(n, c)
    }

    pub fn with_override(mut self, n: usize, value: Complex64) -> Self {
        assert!(n >= 1, "coefficient index starts at 1");
        match self.overrides.binary_search_by_key(&n, |&(k, _)| k) {
            Ok(i) => self.overrides[i].1 = value,
            Err(i) => self.overrides.insert(i, (n, value)),
        }
        self
    }

    fn trim(&mut self) {
        while self.poly.last().is_some_and(|c| *c == ZERO) {
            self.poly.pop();
        }
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Degree of `p`, `None` for a finite family.
    pub fn degree(&self) -> Option<u32> {
        if self.poly.is_empty() {
            None
        } else {
            Some(self.poly.len() as u32 - 1)
        }
    }

    fn poly_at(&self, n: usize) -> Complex64 {
        let x = n as f64;
        self.poly.iter().rev().fold(ZERO, |acc, p| acc * x + p) / self.denom
    }

    /// `p_j / denom`.
    fn reduced(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.poly.iter().map(|p| p / self.denom)
    }

    /// The undilated value `p(n)` or its override.
    fn raw(&self, n: usize) -> Complex64 {
        match self.overrides.binary_search_by_key(&n, |&(k, _)| k) {
            Ok(i) => self.overrides[i].1,
            Err(_) => self.poly_at(n),
        }
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        if n == 0 {
            return ZERO;
        }
        self.raw(n) * self.ratio.powi(n as i32 - 1)
    }

    fn max_override(&self) -> usize {
        self.overrides.last().map_or(0, |&(n, _)| n)
    }

    /// First `order` coefficients together with a rigorous tail description.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        let order = order.max(1).max(self.max_override());
        let coeffs = (1..=order).map(|n| self.coeff(n)).collect();
        let tail = if self.poly.is_empty() {
            Tail::Exact
        } else {
            Tail::Bounded(Growth {
                constant: self.reduced().map(|p| p.norm()).sum(),
                degree: self.poly.len() as u32 - 1,
                ratio: self.ratio,
            })
        };
        TruncatedSeries::new(coeffs)
            .expect("order >= 1")
            .with_tail(tail)
    }

    /// Coefficientwise product.
    pub fn product(&self, other: &CoefficientFamily) -> CoefficientFamily {
        let mut poly = vec![ZERO; (self.poly.len() + other.poly.len()).saturating_sub(1)];
        for (i, a) in self.poly.iter().enumerate() {
            for (j, b) in other.poly.iter().enumerate() {
                poly[i + j] += a * b;
            }
        }
        let mut idx: Vec<usize> = self
            .overrides
            .iter()
            .chain(&other.overrides)
            .map(|&(n, _)| n)
            .collect();
        idx.sort_unstable();
        idx.dedup();
        let overrides = idx
            .into_iter()
            .map(|n| (n, self.raw(n) * other.raw(n)))
            .collect();
        let mut fam = CoefficientFamily {
            poly,
            denom: self.denom * other.denom,
            overrides,
            ratio: self.ratio * other.ratio,
        };
        fam.trim();
        fam
    }

    /// `a * self + b * other`; `None` when the dilation ratios differ.
    pub fn combine(
        &self,
        a: Complex64,
        other: &CoefficientFamily,
        b: Complex64,
    ) -> Option<CoefficientFamily> {
        if self.ratio != other.ratio {
            return None;
        }
        let len = self.poly.len().max(other.poly.len());
        // keep a shared divisor, otherwise fold the divisors in
        let (denom, da, db) = if self.denom == other.denom {
            (self.denom, 1.0, 1.0)
        } else {
            (1.0, self.denom, other.denom)
        };
        let poly = (0..len)
            .map(|j| {
                a * self.poly.get(j).copied().unwrap_or(ZERO) / da
                    + b * other.poly.get(j).copied().unwrap_or(ZERO) / db
            })
            .collect();
        let mut idx: Vec<usize> = self
            .overrides
            .iter()
            .chain(&other.overrides)
            .map(|&(n, _)| n)
            .collect();
        idx.sort_unstable();
        idx.dedup();
        let overrides = idx
            .into_iter()
            .map(|n| (n, a * self.raw(n) + b * other.raw(n)))
            .collect();
        let mut fam = CoefficientFamily {
            poly,
            denom,
            overrides,
            ratio: self.ratio,
        };
        fam.trim();
        Some(fam)
    }

    /// Coefficients multiplied by `r^(n-1)`.
    pub fn dilate(&self, r: f64) -> CoefficientFamily {
        CoefficientFamily {
            ratio: self.ratio * r,
            ..self.clone()
        }
    }

    /// Coefficients multiplied by `n`.
    pub fn z_derivative(&self) -> CoefficientFamily {
        let mut poly = vec![ZERO];
        poly.extend(self.poly.iter().copied());
        let mut fam = CoefficientFamily {
            poly,
            denom: self.denom,
            overrides: self
                .overrides
                .iter()
                .map(|&(n, v)| (n, v * n as f64))
                .collect(),
            ratio: self.ratio,
        };
        fam.trim();
        fam
    }

    /// Coefficients divided by `n` (and negated). Only representable when
    /// `p(0) = 0`; otherwise the sum involves a logarithm.
    pub fn alexander(&self, negate: bool) -> Option<CoefficientFamily> {
        let sign = if negate { -1.0 } else { 1.0 };
        if self.poly.first().is_some_and(|c| *c != ZERO) {
            return None;
        }
        let poly = self.poly.iter().skip(1).map(|c| c * sign).collect();
        let mut fam = CoefficientFamily {
            poly,
            denom: self.denom,
            overrides: self
                .overrides
                .iter()
                .map(|&(n, v)| (n, v * (sign / n as f64)))
                .collect(),
            ratio: self.ratio,
        };
        fam.trim();
        Some(fam)
    }

    /// `F(w) = sum_n raw(n) w^n` as `N(w) / (1 - w)^m`.
    pub fn rational(&self) -> RationalFn {
        let pow = self.poly.len() as u32;
        let mut num = vec![ZERO; 1];
        for (j, p) in self.reduced().enumerate() {
            // w A_j(w) (1 - w)^(pow - j - 1)
            let mut term: Vec<Complex64> = std::iter::once(ZERO)
                .chain(eulerian(j as u32).into_iter().map(|a| Complex64::new(a, 0.0)))
                .collect();
            for _ in 0..(pow as usize - j - 1) {
                term = poly_mul(&term, &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
            }
            poly_add_scaled(&mut num, &term, p);
        }
        let one_minus_pow = (0..pow).fold(vec![Complex64::new(1.0, 0.0)], |acc, _| {
            poly_mul(&acc, &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)])
        });
        for &(n, v) in &self.overrides {
            let delta = v - self.poly_at(n);
            if delta == ZERO {
                continue;
            }
            let mut mono = vec![ZERO; n + 1];
            mono[n] = Complex64::new(1.0, 0.0);
            poly_add_scaled(&mut num, &poly_mul(&mono, &one_minus_pow), delta);
        }
        RationalFn { num, pow }
    }

    /// Closed-form evaluator for `h(z) = F(s z) / s` and its derivatives.
    pub fn evaluator(&self) -> FamilyEvaluator {
        let f0 = self.rational();
        let f1 = f0.derivative();
        let f2 = f1.derivative();
        FamilyEvaluator {
            f0,
            f1,
            f2,
            ratio: self.ratio,
            first: self.raw(1),
        }
    }
}

/// `N(w) / (1 - w)^pow`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    pub num: Vec<Complex64>,
    pub pow: u32,
}

impl RationalFn {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let n = self.num.iter().rev().fold(ZERO, |acc, c| acc * w + c);
        n / (Complex64::new(1.0, 0.0) - w).powi(self.pow as i32)
    }

    /// `(N'(1 - w) + m N) / (1 - w)^(m+1)`.
    pub fn derivative(&self) -> RationalFn {
        let m = self.pow as f64;
        let dn: Vec<Complex64> = self
            .num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        let mut num = poly_mul(&dn, &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        poly_add_scaled(&mut num, &self.num, Complex64::new(m, 0.0));
        RationalFn {
            num,
            pow: self.pow + 1,
        }
    }
}

/// Precomputed rational forms of `F`, `F'`, `F''`.
#[derive(Clone, Debug)]
pub struct FamilyEvaluator {
    f0: RationalFn,
    f1: RationalFn,
    f2: RationalFn,
    ratio: f64,
    first: Complex64,
}

impl FamilyEvaluator {
    /// `(h(z), h'(z), h''(z))`.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let s = self.ratio;
        if s == 0.0 {
            return (self.first * z, self.first, ZERO);
        }
        let w = z * s;
        (self.f0.eval(w) / s, self.f1.eval(w), self.f2.eval(w) * s)
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Vec<Complex64>, p: &[Complex64], s: Complex64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ZERO);
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += x * s;
    }
}
