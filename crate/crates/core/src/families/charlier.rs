use nalgebra::DMatrix;

use super::measures::{ln_charlier, ln_krawtchouk};
use super::{require, triangle, Extent, SolvableChain};
use crate::error::Result;
use crate::specfun::{ln_factorial, CompensatedSum, HypParams};

const NAME: &str = "Charlier";

/// Charlier chain on `Z>=0`.
///
/// `K(x,y) = sum_{z=0}^{min(x,y)} pi_C(x-z, b) pi_K(z, y, a)`, reversible
/// with respect to the Poisson law `pi_C(x, p)`, `p = b/(1-a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Charlier {
    pub a: f64,
    pub b: f64,
    pub eps_tail: f64,
}

impl Charlier {
    pub fn p(&self) -> f64 {
        self.b / (1.0 - self.a)
    }
}

/// `2F0(-n, -x; - | -1/p)`.
pub fn charlier_polynomial(n: usize, x: usize, p: f64) -> Result<f64> {
    HypParams::new([-(n as f64), -(x as f64)], [], -1.0 / p).evaluate()
}

/// `d_n^2 = p^n / n!`.
pub fn charlier_norm_sq(n: usize, p: f64) -> f64 {
    (n as f64 * p.ln() - ln_factorial(n)).exp()
}

impl SolvableChain for Charlier {
    fn name(&self) -> &'static str {
        NAME
    }

    fn extent(&self) -> Extent {
        Extent::SemiInfinite { eps_tail: self.eps_tail }
    }

    fn validate(&self) -> Result<()> {
        let &Charlier { a, b, eps_tail } = self;
        require(NAME, a.is_finite() && b.is_finite(), "parameters must be finite")?;
        require(NAME, a > 0.0 && a < 1.0, "0 < a < 1 (kappa(n) = a^n must stay below 1)")?;
        require(NAME, b > 0.0, "b > 0")?;
        require(NAME, eps_tail > 0.0 && eps_tail < 1.0, "0 < eps_tail < 1")
    }

    fn reversible_measure(&self, x: usize) -> f64 {
        ln_charlier(x, self.p()).exp()
    }

    fn kernel(&self, x: usize, y: usize) -> f64 {
        let Charlier { a, b, .. } = *self;
        (0..=x.min(y))
            .map(|z| ln_charlier(x - z, b).exp() * ln_krawtchouk(z, y, a).exp())
            .collect::<CompensatedSum>()
            .value()
    }

    fn kernel_matrix(&self, m: usize) -> DMatrix<f64> {
        let Charlier { a, b, .. } = *self;
        let outer: Vec<f64> = (0..m).map(|i| ln_charlier(i, b).exp()).collect();
        let inner = triangle(m, |i, j| ln_krawtchouk(i, j, a).exp());
        DMatrix::from_fn(m, m, |x, y| {
            (0..=x.min(y)).map(|z| outer[x - z] * inner[y][z]).collect::<CompensatedSum>().value()
        })
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        self.a.powi(n as i32)
    }

    fn polynomial(&self, n: usize, x: usize) -> Result<f64> {
        charlier_polynomial(n, x, self.p())
    }

    fn norm_const_sq(&self, n: usize) -> f64 {
        charlier_norm_sq(n, self.p())
    }
}
