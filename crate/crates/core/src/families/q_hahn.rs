use nalgebra::DMatrix;

use super::measures::ln_q_hahn;
use super::{invalid, require, triangle, Extent, SolvableChain};
use crate::error::Result;
use crate::specfun::{qbinom, qpoch, CompensatedSum, DoubleDouble, QHypParams, QParam};

const NAME: &str = "qHahn";

/// q-Hahn chain on `{0..N}`.
///
/// `K(x,y) = sum_{z=0}^{min(x,y)} pi_qH(x-z, N-z, b, c) pi_qH(z, y, a, b)`,
/// reversible with respect to `pi_qH(x, N, ab, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QHahn {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
}

impl QHahn {
    fn measure(&self, x: usize, n: usize, a: f64, b: f64) -> f64 {
        ln_q_hahn(x, n, a, b, self.q).value()
    }
}

/// `3phi2(q^-n, A B q^{n-1}, q^-x; A, q^-N | q; q)`.
pub fn q_hahn_polynomial(n: usize, x: usize, big_n: usize, a: f64, b: f64, q: f64) -> Result<f64> {
    polynomial_dd(n, x, big_n, DoubleDouble::from(a), b, q)
}

fn polynomial_dd(n: usize, x: usize, big_n: usize, a: DoubleDouble, b: f64, q: f64) -> Result<f64> {
    let ab = QParam { coeff: a * DoubleDouble::from(b), power: n as i64 - 1 };
    QHypParams::new(
        [QParam::q_pow(-(n as i64)), ab, QParam::q_pow(-(x as i64))],
        [QParam { coeff: a, power: 0 }, QParam::q_pow(-(big_n as i64))],
        q,
        QParam::q_pow(1),
    )
    .evaluate()
}

/// `d_n^2 = [N n] (A, AB/q; q)_n / ((A B q^N, B; q)_n A^n) (1 - AB q^{2n-1}) / (1 - AB/q)`.
pub fn q_hahn_norm_sq(n: usize, big_n: usize, a: f64, b: f64, q: f64) -> f64 {
    let ab = a * b;
    let num = qbinom(big_n, n, q).unwrap_or(f64::NAN) * qpoch(a, q, n) * qpoch(ab / q, q, n);
    let den = qpoch(ab * q.powi(big_n as i32), q, n) * qpoch(b, q, n) * a.powi(n as i32);
    num / den * (1.0 - ab * q.powi(2 * n as i32 - 1)) / (1.0 - ab / q)
}

impl SolvableChain for QHahn {
    fn name(&self) -> &'static str {
        NAME
    }

    fn extent(&self) -> Extent {
        Extent::Finite(self.n)
    }

    fn validate(&self) -> Result<()> {
        let &QHahn { n, a, b, c, q } = self;
        require(NAME, [a, b, c, q].iter().all(|v| v.is_finite()), "parameters must be finite")?;
        require(NAME, n >= 1, "N >= 1")?;
        require(NAME, q > 0.0 && q < 1.0, "0 < q < 1")?;
        require(NAME, a > 0.0 && a < 1.0, "0 < a < 1")?;
        require(NAME, b > 0.0 && b < 1.0, "0 < b < 1 (so that 0 < ab < 1)")?;
        require(NAME, c < 1.0, "c < 1")?;
        // Every q-shifted factorial (alpha; q)_k entering the measures,
        // eigenvalues and norms must be a product of positive factors.
        let qn = q.powi(n as i32);
        let alphas = [
            ("a", a),
            ("b", b),
            ("c", c),
            ("ab", a * b),
            ("bc", b * c),
            ("abc", a * b * c),
            ("abc/q", a * b * c / q),
            ("abc q^N", a * b * c * qn),
        ];
        for (label, alpha) in alphas {
            let mut f = alpha;
            for k in 0..=n {
                if 1.0 - f <= 0.0 {
                    return Err(invalid(
                        NAME,
                        format!("factor 1 - {label} q^{k} = {} is not positive", 1.0 - f),
                    ));
                }
                f *= q;
            }
        }
        if !(1.0 - a * b * c / q > 0.0) {
            return Err(invalid(NAME, "1 - abc/q must be positive"));
        }
        Ok(())
    }

    fn reversible_measure(&self, x: usize) -> f64 {
        self.measure(x, self.n, self.a * self.b, self.c)
    }

    fn kernel(&self, x: usize, y: usize) -> f64 {
        let QHahn { n, a, b, c, .. } = *self;
        (0..=x.min(y))
            .map(|z| self.measure(x - z, n - z, b, c) * self.measure(z, y, a, b))
            .collect::<CompensatedSum>()
            .value()
    }

    fn kernel_matrix(&self, m: usize) -> DMatrix<f64> {
        let QHahn { n, a, b, c, .. } = *self;
        let outer = triangle(m, |i, j| self.measure(i, j, b, c));
        let inner = triangle(m, |i, j| self.measure(i, j, a, b));
        DMatrix::from_fn(m, m, |x, y| {
            (0..=x.min(y))
                .map(|z| outer[n - z][x - z] * inner[y][z])
                .collect::<CompensatedSum>()
                .value()
        })
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        let QHahn { a, b, c, q, .. } = *self;
        b.powi(n as i32) * qpoch(a, q, n) * qpoch(c, q, n) / (qpoch(a * b, q, n) * qpoch(b * c, q, n))
    }

    fn polynomial(&self, n: usize, x: usize) -> Result<f64> {
        let ab = DoubleDouble::from(self.a) * DoubleDouble::from(self.b);
        polynomial_dd(n, x, self.n, ab, self.c, self.q)
    }

    fn norm_const_sq(&self, n: usize) -> f64 {
        q_hahn_norm_sq(n, self.n, self.a * self.b, self.c, self.q)
    }

    fn polynomial_at_edge(&self, n: usize) -> Option<f64> {
        let QHahn { a, b, c, q, .. } = *self;
        let ab = a * b;
        let tri = (n * n.saturating_sub(1) / 2) as i32;
        Some((-ab).powi(n as i32) * q.powi(tri) * qpoch(c, q, n) / qpoch(ab, q, n))
    }
}
