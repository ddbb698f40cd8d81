//! Normalised orthogonality measures, evaluated in log space.
//!
//! Each function takes the measure's own parameters explicitly; the
//! reversible distributions of the chains are these measures at composed
//! parameters.

use crate::error::{Error, Result};
use crate::specfun::{ln_binom, ln_factorial, ln_poch, ln_qpoch, SignedLn};

fn check_range(x: usize, n: usize) -> Result<()> {
    if x > n {
        Err(Error::domain(format!("vertex {x} outside {{0..{n}}}")))
    } else {
        Ok(())
    }
}

pub(crate) fn ln_q_hahn(x: usize, n: usize, a: f64, b: f64, q: f64) -> SignedLn {
    let qbin = ln_qpoch(q, q, n).div(ln_qpoch(q, q, x)).div(ln_qpoch(q, q, n - x));
    qbin.mul(ln_qpoch(a, q, x))
        .mul(ln_qpoch(b, q, n - x))
        .mul(SignedLn::from_value(a).pow(n - x))
        .div(ln_qpoch(a * b, q, n))
}

/// `[N x] (a;q)_x (b;q)_{N-x} a^{N-x} / (ab;q)_N`.
pub fn q_hahn(x: usize, n: usize, a: f64, b: f64, q: f64) -> Result<f64> {
    check_range(x, n)?;
    Ok(ln_q_hahn(x, n, a, b, q).value())
}

pub(crate) fn ln_hahn(x: usize, n: usize, a: f64, b: f64) -> SignedLn {
    SignedLn { ln_abs: ln_binom(n, x), sign: 1.0 }
        .mul(ln_poch(a, x))
        .mul(ln_poch(b, n - x))
        .div(ln_poch(a + b, n))
}

/// `C(N, x) (a)_x (b)_{N-x} / (a+b)_N`.
pub fn hahn(x: usize, n: usize, a: f64, b: f64) -> Result<f64> {
    check_range(x, n)?;
    Ok(ln_hahn(x, n, a, b).value())
}

pub(crate) fn ln_krawtchouk(x: usize, n: usize, a: f64) -> f64 {
    let mut l = ln_binom(n, x);
    if x > 0 {
        l += x as f64 * a.ln();
    }
    if n > x {
        l += (n - x) as f64 * (-a).ln_1p();
    }
    l
}

/// `C(N, x) a^x (1-a)^{N-x}`.
pub fn krawtchouk(x: usize, n: usize, a: f64) -> Result<f64> {
    check_range(x, n)?;
    Ok(ln_krawtchouk(x, n, a).exp())
}

pub(crate) fn ln_charlier(x: usize, a: f64) -> f64 {
    let xa = if x == 0 { 0.0 } else { x as f64 * a.ln() };
    xa - a - ln_factorial(x)
}

/// `a^x e^{-a} / x!`.
pub fn charlier(x: usize, a: f64) -> f64 {
    ln_charlier(x, a).exp()
}

pub(crate) fn ln_meixner(x: usize, a: f64, b: f64) -> SignedLn {
    let xb = if x == 0 { 0.0 } else { x as f64 * b.ln() };
    ln_poch(a, x).mul(SignedLn { ln_abs: xb + a * (-b).ln_1p() - ln_factorial(x), sign: 1.0 })
}

/// `(a)_x b^x (1-b)^a / x!`.
pub fn meixner(x: usize, a: f64, b: f64) -> f64 {
    ln_meixner(x, a, b).value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn krawtchouk_half() {
        let v: Vec<f64> = (0..3).map(|x| krawtchouk(x, 2, 0.5).unwrap()).collect();
        for (g, w) in v.iter().zip([0.25, 0.5, 0.25]) {
            assert!((g - w).abs() < 1e-16);
        }
        assert!(krawtchouk(3, 2, 0.5).is_err());
    }

    #[test]
    fn charlier_at_zero() {
        let p = 0.5 / 0.6;
        assert!((charlier(0, p) - (-p).exp()).abs() < 1e-16);
    }

    #[test]
    fn hahn_at_edge() {
        // pi_H(N, N, a+b, b+c) = (a+b)_N / (a+2b+c)_N
        let (a, b, c, n) = (1.5, 0.7, 2.0, 6);
        let got = hahn(n, n, a + b, b + c).unwrap();
        let want = crate::specfun::poch(a + b, n) / crate::specfun::poch(a + 2.0 * b + c, n);
        assert!((got - want).abs() < 1e-15 * want);
        let got0 = hahn(0, n, a + b, b + c).unwrap();
        let want0 = crate::specfun::poch(b + c, n) / crate::specfun::poch(a + 2.0 * b + c, n);
        assert!((got0 - want0).abs() < 1e-15 * want0);
    }

    #[test]
    fn finite_measures_normalised() {
        let n = 9;
        let sums = [
            (0..=n).map(|x| q_hahn(x, n, 0.3, 0.4, 0.6).unwrap()).sum::<f64>(),
            (0..=n).map(|x| hahn(x, n, 1.3, 0.4).unwrap()).sum::<f64>(),
            (0..=n).map(|x| krawtchouk(x, n, 0.37).unwrap()).sum::<f64>(),
        ];
        for s in sums {
            assert!((s - 1.0).abs() < 1e-13, "{s}");
        }
    }

    #[test]
    fn infinite_measures_normalised() {
        let s: f64 = (0..80).map(|x| charlier(x, 1.7)).sum();
        assert!((s - 1.0).abs() < 1e-14);
        let s: f64 = (0..400).map(|x| meixner(x, 2.0, 0.4)).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn q_hahn_edge_values() {
        // pi_qH(0, N, ab, c) = (c;q)_N (ab)^N / (abc;q)_N and
        // pi_qH(N, N, ab, c) = (ab;q)_N / (abc;q)_N.
        use crate::specfun::qpoch;
        let (q, a, b, c, n) = (0.5, 0.3, 0.4, 0.2, 6);
        let ab = a * b;
        let p0 = q_hahn(0, n, ab, c, q).unwrap();
        let w0 = qpoch(c, q, n) * ab.powi(n as i32) / qpoch(ab * c, q, n);
        assert!((p0 - w0).abs() < 1e-14 * w0);
        let pn = q_hahn(n, n, ab, c, q).unwrap();
        let wn = qpoch(ab, q, n) / qpoch(ab * c, q, n);
        assert!((pn - wn).abs() < 1e-14 * wn);
    }
}
