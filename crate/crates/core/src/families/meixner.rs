use nalgebra::DMatrix;

use super::measures::{ln_hahn, ln_meixner};
use super::{require, triangle, Extent, SolvableChain};
use crate::error::Result;
use crate::specfun::{ln_factorial, ln_poch, CompensatedSum, HypParams, SignedLn};

const NAME: &str = "Meixner";

/// Meixner chain on `Z>=0`.
///
/// `K(x,y) = sum_{z=0}^{min(x,y)} pi_M(x-z, b, c) pi_H(z, y, a, b)`,
/// reversible with respect to `pi_M(x, a+b, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Meixner {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub eps_tail: f64,
}

/// `2F1(-n, -x; A | 1 - 1/c)`.
pub fn meixner_polynomial(n: usize, x: usize, a: f64, c: f64) -> Result<f64> {
    HypParams::new([-(n as f64), -(x as f64)], [a], 1.0 - 1.0 / c).evaluate()
}

/// `d_n^2 = (A)_n c^n / n!`.
pub fn meixner_norm_sq(n: usize, a: f64, c: f64) -> f64 {
    ln_poch(a, n)
        .mul(SignedLn { ln_abs: n as f64 * c.ln() - ln_factorial(n), sign: 1.0 })
        .value()
}

impl SolvableChain for Meixner {
    fn name(&self) -> &'static str {
        NAME
    }

    fn extent(&self) -> Extent {
        Extent::SemiInfinite { eps_tail: self.eps_tail }
    }

    fn validate(&self) -> Result<()> {
        let &Meixner { a, b, c, eps_tail } = self;
        require(NAME, [a, b, c].iter().all(|v| v.is_finite()), "parameters must be finite")?;
        require(NAME, a > 0.0, "a > 0")?;
        require(NAME, b > 0.0, "b > 0")?;
        require(NAME, c > 0.0 && c < 1.0, "0 < c < 1")?;
        require(NAME, eps_tail > 0.0 && eps_tail < 1.0, "0 < eps_tail < 1")
    }

    fn reversible_measure(&self, x: usize) -> f64 {
        ln_meixner(x, self.a + self.b, self.c).value()
    }

    fn kernel(&self, x: usize, y: usize) -> f64 {
        let Meixner { a, b, c, .. } = *self;
        (0..=x.min(y))
            .map(|z| ln_meixner(x - z, b, c).value() * ln_hahn(z, y, a, b).value())
            .collect::<CompensatedSum>()
            .value()
    }

    fn kernel_matrix(&self, m: usize) -> DMatrix<f64> {
        let Meixner { a, b, c, .. } = *self;
        let outer: Vec<f64> = (0..m).map(|i| ln_meixner(i, b, c).value()).collect();
        let inner = triangle(m, |i, j| ln_hahn(i, j, a, b).value());
        DMatrix::from_fn(m, m, |x, y| {
            (0..=x.min(y)).map(|z| outer[x - z] * inner[y][z]).collect::<CompensatedSum>().value()
        })
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        ln_poch(self.a, n).div(ln_poch(self.a + self.b, n)).value()
    }

    fn polynomial(&self, n: usize, x: usize) -> Result<f64> {
        meixner_polynomial(n, x, self.a + self.b, self.c)
    }

    fn norm_const_sq(&self, n: usize) -> f64 {
        meixner_norm_sq(n, self.a + self.b, self.c)
    }
}
