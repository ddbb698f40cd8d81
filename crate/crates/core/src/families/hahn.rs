use nalgebra::DMatrix;

use super::measures::ln_hahn;
use super::{require, triangle, Extent, SolvableChain};
use crate::error::Result;
use crate::specfun::{binom, poch, CompensatedSum, HypParams};

const NAME: &str = "Hahn";

/// Hahn chain on `{0..N}`.
///
/// `K(x,y) = sum_{z=max(0,x+y-N)}^{min(x,y)} pi_H(x-z, N-y, b, c) pi_H(z, y, a, b)`,
/// reversible with respect to `pi_H(x, N, a+b, b+c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hahn {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

fn measure(x: usize, n: usize, a: f64, b: f64) -> f64 {
    ln_hahn(x, n, a, b).value()
}

/// `3F2(-n, n+A+B-1, -x; A, -N | 1)`.
pub fn hahn_polynomial(n: usize, x: usize, big_n: usize, a: f64, b: f64) -> Result<f64> {
    HypParams::new([-(n as f64), n as f64 + a + b - 1.0, -(x as f64)], [a, -(big_n as f64)], 1.0).evaluate()
}

/// `d_n^2 = C(N,n) (A)_n (2n+A+B-1) (A+B)_N / ((B)_n (n+A+B-1)_{N+1})`.
pub fn hahn_norm_sq(n: usize, big_n: usize, a: f64, b: f64) -> f64 {
    let s = a + b;
    let c = binom(big_n, n).unwrap_or(f64::NAN) * poch(a, n) / poch(b, n);
    if n == 0 {
        // (2n+s-1)/(n+s-1)_{N+1} = 1/(s)_N at n = 0, also when s = 1.
        return c;
    }
    let nf = n as f64;
    c * (2.0 * nf + s - 1.0) * poch(s, big_n) / poch(nf + s - 1.0, big_n + 1)
}

impl SolvableChain for Hahn {
    fn name(&self) -> &'static str {
        NAME
    }

    fn extent(&self) -> Extent {
        Extent::Finite(self.n)
    }

    fn validate(&self) -> Result<()> {
        let &Hahn { n, a, b, c } = self;
        require(NAME, [a, b, c].iter().all(|v| v.is_finite()), "parameters must be finite")?;
        require(NAME, n >= 1, "N >= 1")?;
        require(NAME, a > 0.0, "a > 0")?;
        require(NAME, b > 0.0, "b > 0")?;
        require(NAME, c > 0.0, "c > 0")
    }

    fn reversible_measure(&self, x: usize) -> f64 {
        measure(x, self.n, self.a + self.b, self.b + self.c)
    }

    fn kernel(&self, x: usize, y: usize) -> f64 {
        let Hahn { n, a, b, c } = *self;
        ((x + y).saturating_sub(n)..=x.min(y))
            .map(|z| measure(x - z, n - y, b, c) * measure(z, y, a, b))
            .collect::<CompensatedSum>()
            .value()
    }

    fn kernel_matrix(&self, m: usize) -> DMatrix<f64> {
        let Hahn { n, a, b, c } = *self;
        let outer = triangle(m, |i, j| measure(i, j, b, c));
        let inner = triangle(m, |i, j| measure(i, j, a, b));
        DMatrix::from_fn(m, m, |x, y| {
            ((x + y).saturating_sub(n)..=x.min(y))
                .map(|z| outer[n - y][x - z] * inner[y][z])
                .collect::<CompensatedSum>()
                .value()
        })
    }

    /// `3F2(-n, n+a+2b+c-1, b; a+b, b+c | 1)`.
    fn eigenvalue(&self, n: usize) -> f64 {
        let Hahn { a, b, c, .. } = *self;
        let nf = n as f64;
        HypParams::new([-nf, nf + a + 2.0 * b + c - 1.0, b], [a + b, b + c], 1.0)
            .evaluate()
            .expect("-n terminates the series and a+b, b+c > 0")
    }

    fn polynomial(&self, n: usize, x: usize) -> Result<f64> {
        hahn_polynomial(n, x, self.n, self.a + self.b, self.b + self.c)
    }

    fn norm_const_sq(&self, n: usize) -> f64 {
        hahn_norm_sq(n, self.n, self.a + self.b, self.b + self.c)
    }

    fn polynomial_at_edge(&self, n: usize) -> Option<f64> {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some(sign * poch(self.b + self.c, n) / poch(self.a + self.b, n))
    }
}
