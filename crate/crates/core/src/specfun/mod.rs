//! Shifted factorials, binomials and terminating (q-)hypergeometric sums.
//!
//! Every product and every series here is accumulated in double-double
//! arithmetic and rounded once at the end. The terminating series that define
//! the Askey-scheme polynomials cancel heavily (for the q-Hahn family at
//! `N = 6` the largest term exceeds the result by fifteen orders of
//! magnitude), so plain `f64` accumulation is not enough even at desk scale.

mod dd;
mod hyp;

pub use dd::DoubleDouble;
pub use hyp::{hyp_terminating, qhyp_terminating, HypParams, QHypParams, QParam};

use crate::error::{Error, Result};

/// Tolerance used to recognise exact termination parameters among float noise.
pub const TERMINATION_TOL: f64 = 1e-9;

/// Shifted factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn poch(a: f64, n: usize) -> f64 {
    let mut acc = DoubleDouble::ONE;
    for k in 0..n {
        acc = acc * (DoubleDouble::from(a) + k as f64);
    }
    acc.to_f64()
}

/// q-shifted factorial `(a;q)_n = (1-a)(1-aq)...(1-aq^{n-1})`.
pub fn qpoch(a: f64, q: f64, n: usize) -> f64 {
    let q = DoubleDouble::from(q);
    let mut aqk = DoubleDouble::from(a);
    let mut acc = DoubleDouble::ONE;
    for _ in 0..n {
        acc = acc * (DoubleDouble::ONE - aqk);
        aqk = aqk * q;
    }
    acc.to_f64()
}

/// Binomial coefficient as an exact integer-valued real.
pub fn binom(n: usize, x: usize) -> Result<f64> {
    if x > n {
        return Err(Error::domain(format!("binomial index {x} exceeds {n}")));
    }
    let k = x.min(n - x) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        match acc.checked_mul(n - k + i) {
            Some(v) => acc = v / i,
            None => return Ok(ln_binom(n as usize, x).exp()),
        }
    }
    Ok(acc as f64)
}

/// Gaussian binomial `(q;q)_N / ((q;q)_x (q;q)_{N-x})`.
pub fn qbinom(n: usize, x: usize, q: f64) -> Result<f64> {
    if x > n {
        return Err(Error::domain(format!("q-binomial index {x} exceeds {n}")));
    }
    let qq = DoubleDouble::from(q);
    let num = qpoch_dd(qq, qq, n);
    let den = qpoch_dd(qq, qq, x) * qpoch_dd(qq, qq, n - x);
    if den.is_zero() {
        return Err(Error::domain(format!("q-binomial with degenerate base q = {q}")));
    }
    Ok((num / den).to_f64())
}

pub(crate) fn qpoch_dd(a: DoubleDouble, q: DoubleDouble, n: usize) -> DoubleDouble {
    let mut aqk = a;
    let mut acc = DoubleDouble::ONE;
    for _ in 0..n {
        acc = acc * (DoubleDouble::ONE - aqk);
        aqk = aqk * q;
    }
    acc
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Signed logarithm: `value = sign * exp(ln_abs)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct SignedLn {
    pub ln_abs: f64,
    pub sign: f64,
}

impl SignedLn {
    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self { ln_abs: f64::NEG_INFINITY, sign: 0.0 }
        } else {
            Self { ln_abs: v.abs().ln(), sign: v.signum() }
        }
    }

    pub fn mul(self, o: Self) -> Self {
        Self { ln_abs: self.ln_abs + o.ln_abs, sign: self.sign * o.sign }
    }

    pub fn div(self, o: Self) -> Self {
        Self { ln_abs: self.ln_abs - o.ln_abs, sign: self.sign * o.sign }
    }

    pub fn pow(self, k: usize) -> Self {
        let sign = if k.is_multiple_of(2) { 1.0 } else { self.sign };
        Self { ln_abs: self.ln_abs * k as f64, sign: if self.sign == 0.0 && k > 0 { 0.0 } else { sign } }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// `ln (a)_n` with sign, accumulated factor by factor.
pub(crate) fn ln_poch(a: f64, n: usize) -> SignedLn {
    let mut s = CompensatedSum::default();
    let mut sign = 1.0;
    for k in 0..n {
        let f = a + k as f64;
        if f == 0.0 {
            return SignedLn { ln_abs: f64::NEG_INFINITY, sign: 0.0 };
        }
        if f < 0.0 {
            sign = -sign;
        }
        s.add(f.abs().ln());
    }
    SignedLn { ln_abs: s.value(), sign }
}

/// `ln (a;q)_n` with sign.
pub(crate) fn ln_qpoch(a: f64, q: f64, n: usize) -> SignedLn {
    let mut s = CompensatedSum::default();
    let mut sign = 1.0;
    let mut aqk = a;
    for _ in 0..n {
        let f = 1.0 - aqk;
        if f == 0.0 {
            return SignedLn { ln_abs: f64::NEG_INFINITY, sign: 0.0 };
        }
        if f < 0.0 {
            sign = -sign;
        }
        s.add(f.abs().ln());
        aqk *= q;
    }
    SignedLn { ln_abs: s.value(), sign }
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    ln_poch(1.0, n).ln_abs
}

pub(crate) fn ln_binom(n: usize, x: usize) -> f64 {
    ln_factorial(n) - ln_factorial(x) - ln_factorial(n - x)
}
