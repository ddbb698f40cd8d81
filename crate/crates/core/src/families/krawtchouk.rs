use nalgebra::DMatrix;

use super::measures::ln_krawtchouk;
use super::{require, triangle, Extent, SolvableChain};
use crate::error::Result;
use crate::specfun::{binom, CompensatedSum, HypParams};

const NAME: &str = "Krawtchouk";

/// Krawtchouk chain on `{0..N}`.
///
/// `K(x,y) = sum_{z=max(x,y)}^{N} pi_K(x, z, b) pi_K(z-y, N-y, a)`,
/// reversible with respect to `pi_K(x, N, p)`, `p = ab/(1-b+ab)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Krawtchouk {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

impl Krawtchouk {
    pub fn p(&self) -> f64 {
        self.a * self.b / (1.0 - self.b + self.a * self.b)
    }
}

fn measure(x: usize, n: usize, a: f64) -> f64 {
    ln_krawtchouk(x, n, a).exp()
}

/// `2F1(-n, -x; -N | 1/p)`.
pub fn krawtchouk_polynomial(n: usize, x: usize, big_n: usize, p: f64) -> Result<f64> {
    HypParams::new([-(n as f64), -(x as f64)], [-(big_n as f64)], 1.0 / p).evaluate()
}

/// `d_n^2 = C(N,n) (p/(1-p))^n`.
pub fn krawtchouk_norm_sq(n: usize, big_n: usize, p: f64) -> f64 {
    binom(big_n, n).unwrap_or(f64::NAN) * (p / (1.0 - p)).powi(n as i32)
}

impl SolvableChain for Krawtchouk {
    fn name(&self) -> &'static str {
        NAME
    }

    fn extent(&self) -> Extent {
        Extent::Finite(self.n)
    }

    fn validate(&self) -> Result<()> {
        let &Krawtchouk { n, a, b } = self;
        require(NAME, a.is_finite() && b.is_finite(), "parameters must be finite")?;
        require(NAME, n >= 1, "N >= 1")?;
        require(NAME, a > 0.0 && a < 1.0, "0 < a < 1")?;
        require(NAME, b > 0.0 && b < 1.0, "0 < b < 1")
    }

    fn reversible_measure(&self, x: usize) -> f64 {
        measure(x, self.n, self.p())
    }

    fn kernel(&self, x: usize, y: usize) -> f64 {
        let Krawtchouk { n, a, b } = *self;
        (x.max(y)..=n)
            .map(|z| measure(x, z, b) * measure(z - y, n - y, a))
            .collect::<CompensatedSum>()
            .value()
    }

    fn kernel_matrix(&self, m: usize) -> DMatrix<f64> {
        let Krawtchouk { n, a, b } = *self;
        let outer = triangle(m, |i, j| measure(i, j, b));
        let inner = triangle(m, |i, j| measure(i, j, a));
        DMatrix::from_fn(m, m, |x, y| {
            (x.max(y)..=n)
                .map(|z| outer[z][x] * inner[n - y][z - y])
                .collect::<CompensatedSum>()
                .value()
        })
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        ((1.0 - self.a) * self.b).powi(n as i32)
    }

    fn polynomial(&self, n: usize, x: usize) -> Result<f64> {
        krawtchouk_polynomial(n, x, self.n, self.p())
    }

    fn norm_const_sq(&self, n: usize) -> f64 {
        krawtchouk_norm_sq(n, self.n, self.p())
    }

    fn polynomial_at_edge(&self, n: usize) -> Option<f64> {
        Some((1.0 - 1.0 / self.p()).powi(n as i32))
    }
}
