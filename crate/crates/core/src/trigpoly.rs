//! Real trigonometric polynomials in `x` with period 1, and their reduction
//! to ordinary polynomials in `u = cos(2πx)`.
//!
//! Coefficients are kept as small dyadic rationals with the powers of π
//! factored out (`pi_power`), so `G`, its derivatives, their products and the
//! Chebyshev reductions are all exact in floating point. The scaled values
//! are produced on demand.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// One of the two idempotents `1 + e(x) ± e((k+2)x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseId {
    pub k: u32,
    pub sign: Sign,
}

impl CaseId {
    pub fn new(k: u32, sign: Sign) -> Self {
        CaseId { k, sign }
    }

    pub fn plus(k: u32) -> Self {
        CaseId::new(k, Sign::Plus)
    }

    pub fn minus(k: u32) -> Self {
        CaseId::new(k, Sign::Minus)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}(k={})", self.sign.symbol(), self.k)
    }
}

/// `π^p · (Σ_m cos[m]·cos(2πmx) + Σ_{m≥1} sin[m-1]·sin(2πmx))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    cos: Vec<f64>,
    /// `sin[i]` multiplies `sin(2π(i+1)x)`; there is no zero-frequency slot.
    sin: Vec<f64>,
    pi_power: u32,
}

/// `π^p · Σ_i coeffs[i]·u^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UPoly {
    coeffs: Vec<f64>,
    pi_power: u32,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TrigPolyError {
    #[error("polynomial has a nonzero sine part (frequency {frequency}); only even polynomials reduce to u = cos 2πx")]
    OddPart { frequency: usize },
}

fn pi_pow(p: u32) -> f64 {
    PI.powi(p as i32)
}

fn trim(v: &mut Vec<f64>) {
    while v.last() == Some(&0.0) {
        v.pop();
    }
}

impl TrigPoly {
    /// Unscaled cosine and sine coefficients times `π^pi_power`.
    pub fn new(cos: Vec<f64>, sin: Vec<f64>, pi_power: u32) -> Self {
        let mut p = TrigPoly { cos, sin, pi_power };
        trim(&mut p.cos);
        trim(&mut p.sin);
        p
    }

    pub fn from_cos(cos: Vec<f64>) -> Self {
        TrigPoly::new(cos, Vec::new(), 0)
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly::from_cos(vec![c])
    }

    pub fn zero() -> Self {
        TrigPoly::new(Vec::new(), Vec::new(), 0)
    }

    pub fn degree(&self) -> usize {
        self.cos.len().saturating_sub(1).max(self.sin.len())
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn raw_cos(&self) -> &[f64] {
        &self.cos
    }

    pub fn raw_sin(&self) -> &[f64] {
        &self.sin
    }

    pub fn cos_coeffs(&self) -> Vec<f64> {
        let s = pi_pow(self.pi_power);
        self.cos.iter().map(|c| c * s).collect()
    }

    pub fn sin_coeffs(&self) -> Vec<f64> {
        let s = pi_pow(self.pi_power);
        self.sin.iter().map(|c| c * s).collect()
    }

    pub fn is_even(&self) -> bool {
        self.sin.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = 2.0 * PI * x;
        let mut acc = 0.0;
        for (m, c) in self.cos.iter().enumerate() {
            if *c != 0.0 {
                acc += c * (m as f64 * v).cos();
            }
        }
        for (i, c) in self.sin.iter().enumerate() {
            if *c != 0.0 {
                acc += c * ((i + 1) as f64 * v).sin();
            }
        }
        acc * pi_pow(self.pi_power)
    }

    /// Term-wise derivative of the given order in `x`.
    pub fn differentiate(&self, order: u32) -> TrigPoly {
        let mut cur = self.clone();
        for _ in 0..order {
            // d/dx cos(2πmx) = -2πm sin(2πmx), d/dx sin(2πmx) = 2πm cos(2πmx)
            let n = cur.degree();
            let mut cos = vec![0.0; n + 1];
            let mut sin = vec![0.0; n];
            for (m, c) in cur.cos.iter().enumerate().skip(1) {
                sin[m - 1] = -2.0 * m as f64 * c;
            }
            for (i, c) in cur.sin.iter().enumerate() {
                let m = i + 1;
                cos[m] = 2.0 * m as f64 * c;
            }
            cur = TrigPoly::new(cos, sin, cur.pi_power + 1);
        }
        cur
    }

    /// Product-to-sum expansion.
    pub fn multiply(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.degree() + other.degree();
        let mut cos = vec![0.0; n + 1];
        let mut sin = vec![0.0; n];
        let add_cos = |cos: &mut Vec<f64>, m: usize, v: f64| cos[m] += v;
        // sin(2πmx) with signed frequency: sin(-a) = -sin(a)
        let add_sin = |sin: &mut Vec<f64>, m: i64, v: f64| {
            if m > 0 {
                sin[m as usize - 1] += v;
            } else if m < 0 {
                sin[(-m) as usize - 1] -= v;
            }
        };
        for (a, ca) in self.cos.iter().enumerate() {
            for (b, cb) in other.cos.iter().enumerate() {
                let p = ca * cb;
                if p == 0.0 {
                    continue;
                }
                if a == 0 || b == 0 {
                    add_cos(&mut cos, a + b, p);
                } else {
                    add_cos(&mut cos, a.abs_diff(b), 0.5 * p);
                    add_cos(&mut cos, a + b, 0.5 * p);
                }
            }
        }
        for (i, sa) in self.sin.iter().enumerate() {
            for (j, sb) in other.sin.iter().enumerate() {
                let p = sa * sb;
                if p == 0.0 {
                    continue;
                }
                let (a, b) = (i + 1, j + 1);
                add_cos(&mut cos, a.abs_diff(b), 0.5 * p);
                add_cos(&mut cos, a + b, -0.5 * p);
            }
        }
        // sin(a)cos(b) = ½[sin(a+b) + sin(a-b)]
        let mut mixed = |s: &[f64], c: &[f64]| {
            for (i, sa) in s.iter().enumerate() {
                for (b, cb) in c.iter().enumerate() {
                    let p = sa * cb;
                    if p == 0.0 {
                        continue;
                    }
                    let a = (i + 1) as i64;
                    let b = b as i64;
                    if b == 0 {
                        add_sin(&mut sin, a, p);
                    } else {
                        add_sin(&mut sin, a + b, 0.5 * p);
                        add_sin(&mut sin, a - b, 0.5 * p);
                    }
                }
            }
        };
        mixed(&self.sin, &other.cos);
        mixed(&other.sin, &self.cos);
        TrigPoly::new(cos, sin, self.pi_power + other.pi_power)
    }

    pub fn power(&self, m: u32) -> TrigPoly {
        (0..m).fold(TrigPoly::constant(1.0), |acc, _| acc.multiply(self))
    }

    /// Mean value over a period, i.e. the constant coefficient.
    pub fn mean(&self) -> f64 {
        self.cos.first().copied().unwrap_or(0.0) * pi_pow(self.pi_power)
    }

    /// Sum of absolute coefficients without the `π^p` factor.
    pub fn raw_coeff_norm(&self) -> f64 {
        self.cos.iter().chain(self.sin.iter()).map(|c| c.abs()).sum()
    }

    /// `Σ|coefficients|`, a bound for the sup norm.
    pub fn coeff_norm(&self) -> f64 {
        self.raw_coeff_norm() * pi_pow(self.pi_power)
    }

    /// Replace each `cos(2πmx)` by the Chebyshev polynomial `T_m(u)`.
    pub fn to_upoly(&self) -> Result<UPoly, TrigPolyError> {
        if let Some(i) = self.sin.iter().position(|&c| c != 0.0) {
            return Err(TrigPolyError::OddPart { frequency: i + 1 });
        }
        let mut out = vec![0.0; self.cos.len().max(1)];
        for (m, t) in chebyshev_t(self.cos.len().saturating_sub(1)).iter().enumerate() {
            let c = self.cos[m];
            for (i, ti) in t.iter().enumerate() {
                out[i] += c * ti;
            }
        }
        Ok(UPoly::new(out, self.pi_power))
    }
}

/// Coefficients of `T_0..=T_n` in ascending powers, by `T_m = 2uT_{m-1} - T_{m-2}`.
pub fn chebyshev_t(n: usize) -> Vec<Vec<f64>> {
    let mut ts: Vec<Vec<f64>> = vec![vec![1.0]];
    if n >= 1 {
        ts.push(vec![0.0, 1.0]);
    }
    for m in 2..=n {
        let mut t = vec![0.0; m + 1];
        for (i, c) in ts[m - 1].iter().enumerate() {
            t[i + 1] += 2.0 * c;
        }
        for (i, c) in ts[m - 2].iter().enumerate() {
            t[i] -= c;
        }
        ts.push(t);
    }
    ts
}

/// `|1 + e(x) ± e((k+2)x)|² = 3 + 2cos(2πx) ± 2cos(2π(k+1)x) ± 2cos(2π(k+2)x)`.
pub fn build_g(case: CaseId) -> TrigPoly {
    let k = case.k as usize;
    let s = case.sign.factor();
    let mut cos = vec![0.0; k + 3];
    cos[0] = 3.0;
    cos[1] += 2.0;
    cos[k + 1] += 2.0 * s;
    cos[k + 2] += 2.0 * s;
    TrigPoly::from_cos(cos)
}

impl UPoly {
    pub fn new(coeffs: Vec<f64>, pi_power: u32) -> Self {
        let mut p = UPoly { coeffs, pi_power };
        trim(&mut p.coeffs);
        if p.coeffs.is_empty() {
            p.coeffs.push(0.0);
        }
        p
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        UPoly::new(coeffs, 0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn raw_coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<f64> {
        let s = pi_pow(self.pi_power);
        self.coeffs.iter().map(|c| c * s).collect()
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c) * pi_pow(self.pi_power)
    }

    pub fn derivative(&self) -> UPoly {
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as f64 * c)
            .collect();
        UPoly::new(d, self.pi_power)
    }

    pub fn multiply(&self, other: &UPoly) -> UPoly {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out, self.pi_power + other.pi_power)
    }

    fn horner_raw(&self, x: Interval) -> Interval {
        self.coeffs
            .iter()
            .rev()
            .fold(Interval::ZERO, |acc, &c| acc * x + Interval::point(c))
    }

    fn pi_scale(&self) -> Interval {
        Interval::pi().powi(self.pi_power)
    }

    /// Rigorous enclosure of the range over `x`: natural Horner form
    /// intersected with the mean-value form.
    pub fn eval_interval(&self, x: Interval) -> Interval {
        let natural = self.horner_raw(x);
        let range = if self.degree() >= 1 && x.width() > 0.0 {
            let c = x.mid();
            let centre = self.horner_raw(Interval::point(c));
            let slope = self.derivative().horner_raw(x);
            let mvf = centre + slope * (x - Interval::point(c));
            natural.intersect(&mvf).unwrap_or(natural)
        } else {
            natural
        };
        range * self.pi_scale()
    }
}
