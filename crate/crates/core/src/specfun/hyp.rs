use super::{DoubleDouble, TERMINATION_TOL};
use crate::error::{Error, Result};

/// Parameters of a terminating `rFs` series.
#[derive(Clone, Debug, PartialEq)]
pub struct HypParams {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub z: f64,
}

impl HypParams {
    pub fn new(numerator: impl Into<Vec<f64>>, denominator: impl Into<Vec<f64>>, z: f64) -> Self {
        Self { numerator: numerator.into(), denominator: denominator.into(), z }
    }

    /// Smallest `n` such that some `(a_i)_{n+1}` vanishes, if any.
    pub fn termination_index(&self) -> Option<usize> {
        self.numerator.iter().filter_map(|&a| nonpositive_integer(a)).min()
    }

    pub fn evaluate(&self) -> Result<f64> {
        hyp_terminating(self)
    }
}

fn nonpositive_integer(a: f64) -> Option<usize> {
    let r = a.round();
    if r <= 0.0 && (a - r).abs() <= TERMINATION_TOL {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Terminating generalised hypergeometric sum
/// `sum_n prod (a_i)_n / prod (b_j)_n * z^n / n!`, stopped at the
/// termination index.
pub fn hyp_terminating(p: &HypParams) -> Result<f64> {
    let n_max = p.termination_index().ok_or_else(|| {
        Error::domain(format!("rFs series with numerator {:?} does not terminate", p.numerator))
    })?;
    // (b)_n vanishes from n = m+1 on when b = -m.
    for &b in &p.denominator {
        if let Some(m) = nonpositive_integer(b) {
            if m < n_max {
                return Err(Error::domain(format!(
                    "denominator parameter {b} vanishes before termination at n = {n_max}"
                )));
            }
        }
    }
    let z = DoubleDouble::from(p.z);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for k in 0..n_max {
        let kf = k as f64;
        let mut num = z;
        for &a in &p.numerator {
            num = num * (DoubleDouble::from(a) + kf);
        }
        let mut den = DoubleDouble::from(kf + 1.0);
        for &b in &p.denominator {
            den = den * (DoubleDouble::from(b) + kf);
        }
        term = term * num / den;
        sum = sum + term;
    }
    Ok(sum.to_f64())
}

/// A q-series parameter `coeff * q^power`.
///
/// Keeping the power symbolic means `q^{-x}` and friends are formed in
/// extended precision instead of being rounded to `f64` first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParam {
    pub coeff: DoubleDouble,
    pub power: i64,
}

impl QParam {
    pub const fn new(coeff: f64, power: i64) -> Self {
        Self { coeff: DoubleDouble::from_f64(coeff), power }
    }

    /// `a * b * q^power` with the product kept exact.
    pub fn product(a: f64, b: f64, power: i64) -> Self {
        Self { coeff: DoubleDouble::from(a) * DoubleDouble::from(b), power }
    }

    /// The monomial `q^power`.
    pub const fn q_pow(power: i64) -> Self {
        Self::new(1.0, power)
    }

    pub fn value(&self, q: f64) -> f64 {
        self.to_dd(DoubleDouble::from(q)).to_f64()
    }

    fn to_dd(self, q: DoubleDouble) -> DoubleDouble {
        q.powi(self.power) * self.coeff
    }
}

impl From<f64> for QParam {
    fn from(v: f64) -> Self {
        Self::new(v, 0)
    }
}

/// Parameters of a terminating `r phi s` series in base `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct QHypParams {
    pub numerator: Vec<QParam>,
    pub denominator: Vec<QParam>,
    pub q: f64,
    pub z: QParam,
}

impl QHypParams {
    pub fn new(
        numerator: impl Into<Vec<QParam>>,
        denominator: impl Into<Vec<QParam>>,
        q: f64,
        z: impl Into<QParam>,
    ) -> Self {
        Self { numerator: numerator.into(), denominator: denominator.into(), q, z: z.into() }
    }

    /// Smallest `m` such that a numerator parameter equals `q^{-m}`.
    pub fn termination_index(&self) -> Option<usize> {
        self.numerator.iter().filter_map(|a| q_termination(*a, self.q)).min()
    }

    pub fn evaluate(&self) -> Result<f64> {
        qhyp_terminating(self)
    }
}

const MAX_Q_TERMINATION: usize = 4096;

fn q_termination(a: QParam, q: f64) -> Option<usize> {
    if a.power <= 0 && (a.coeff.to_f64() - 1.0).abs() <= TERMINATION_TOL {
        return Some((-a.power) as usize);
    }
    let v = a.value(q);
    if !(v.is_finite() && v > 0.0) || !(q > 0.0 && q < 1.0) {
        return None;
    }
    let mut target = 1.0f64;
    for m in 0..=MAX_Q_TERMINATION {
        if (v - target).abs() <= TERMINATION_TOL * target {
            return Some(m);
        }
        if target > 2.0 * v {
            break;
        }
        target /= q;
    }
    None
}

/// Terminating basic hypergeometric sum
/// `sum_n prod (a_i;q)_n / prod (b_j;q)_n * [(-1)^n q^{n(n-1)/2}]^{1+s-r} z^n / (q;q)_n`.
pub fn qhyp_terminating(p: &QHypParams) -> Result<f64> {
    if !(p.q > 0.0 && p.q < 1.0) {
        return Err(Error::domain(format!("base q = {} outside (0, 1)", p.q)));
    }
    let n_max = p.termination_index().ok_or_else(|| {
        Error::domain("r phi s series does not terminate (no numerator equals q^{-m})")
    })?;
    let q = DoubleDouble::from(p.q);
    let num: Vec<DoubleDouble> = p.numerator.iter().map(|a| a.to_dd(q)).collect();
    let den: Vec<DoubleDouble> = p.denominator.iter().map(|b| b.to_dd(q)).collect();
    let z = p.z.to_dd(q);
    let excess = 1 + p.denominator.len() as i64 - p.numerator.len() as i64;
    let sign = if excess.rem_euclid(2) == 1 { -1.0 } else { 1.0 };

    let mut qk = DoubleDouble::ONE;
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for k in 0..n_max {
        let mut ratio = z * sign * qk.powi(excess);
        for &a in &num {
            ratio = ratio * (DoubleDouble::ONE - a * qk);
        }
        let mut d = DoubleDouble::ONE - qk * q;
        for &b in &den {
            let f = DoubleDouble::ONE - b * qk;
            if f.abs().to_f64() <= 1e-14 {
                return Err(Error::domain(format!(
                    "denominator factor (b;q)_n vanishes at n = {} before termination at {n_max}",
                    k + 1
                )));
            }
            d = d * f;
        }
        term = term * ratio / d;
        sum = sum + term;
        qk = qk * q;
    }
    Ok(sum.to_f64())
}
