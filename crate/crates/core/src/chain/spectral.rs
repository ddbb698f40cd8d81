use nalgebra::DMatrix;

use super::{eigen, Distribution, MarkovChain};
use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

/// Eigenvalues closer than this are treated as one degenerate block.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Largest tolerated asymmetry of an input to [`eigendecompose`].
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralSource {
    Analytic,
    Numerical,
}

impl SpectralSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectralSource::Analytic => "analytic",
            SpectralSource::Numerical => "numerical",
        }
    }
}

/// Eigen-data of `T = Phi^{-1} K Phi` and `H = 1 - T`.
///
/// Column `n` of `eigenvectors` is the orthonormal eigenvector `phi_hat_n`.
/// For analytic data `norm_consts[n] = d_n` and `phi_hat_n = sqrt(pi) d_n P_n`;
/// numerical data carries `d_n = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub kappa: Vec<f64>,
    pub energies: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub norm_consts: Vec<f64>,
    pub source: SpectralSource,
}

impl SpectralData {
    /// Energies are derived as `1 - kappa` so the relation holds bit for bit.
    pub fn new(
        kappa: Vec<f64>,
        eigenvectors: DMatrix<f64>,
        norm_consts: Vec<f64>,
        source: SpectralSource,
    ) -> Result<Self> {
        let m = kappa.len();
        if eigenvectors.ncols() != m {
            return Err(Error::Dimension { expected: m, found: eigenvectors.ncols() });
        }
        if norm_consts.len() != m {
            return Err(Error::Dimension { expected: m, found: norm_consts.len() });
        }
        let energies = kappa.iter().map(|k| 1.0 - k).collect();
        Ok(Self { kappa, energies, eigenvectors, norm_consts, source })
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    /// Vertex-space dimension.
    pub fn dim(&self) -> usize {
        self.eigenvectors.nrows()
    }

    pub fn is_complete(&self) -> bool {
        self.len() == self.dim()
    }

    pub fn vector(&self, n: usize) -> nalgebra::DVectorView<'_, f64> {
        self.eigenvectors.column(n)
    }

    /// `max |<phi_m, phi_n> - delta_mn|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.eigenvectors.transpose() * &self.eigenvectors;
        (&g - DMatrix::identity(g.nrows(), g.ncols())).amax()
    }

    /// `max |sum_n phi_n(x) phi_n(y) - delta_xy|`.
    pub fn completeness_defect(&self) -> f64 {
        let g = &self.eigenvectors * self.eigenvectors.transpose();
        (&g - DMatrix::identity(g.nrows(), g.ncols())).amax()
    }

    /// `||H phi_n - E(n) phi_n||_inf` for mode `n`.
    pub fn residual(&self, h: &DMatrix<f64>, n: usize) -> f64 {
        let v = self.eigenvectors.column(n);
        (h * v - v * self.energies[n]).amax()
    }

    /// Largest [`Self::residual`] over all modes.
    pub fn max_residual(&self, h: &DMatrix<f64>) -> f64 {
        (0..self.len()).map(|n| self.residual(h, n)).fold(0.0, f64::max)
    }

    /// Mode indices ordered by descending `kappa`.
    pub fn order_by_kappa(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.kappa[b].total_cmp(&self.kappa[a]).then(a.cmp(&b)));
        idx
    }

    /// Groups of mode indices whose `kappa` values chain together within
    /// `threshold`, in descending `kappa` order.
    pub fn degenerate_blocks(&self, threshold: f64) -> Vec<Vec<usize>> {
        let order = self.order_by_kappa();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for n in order {
            match blocks.last_mut() {
                Some(b) if (self.kappa[*b.last().unwrap()] - self.kappa[n]).abs() < threshold => b.push(n),
                _ => blocks.push(vec![n]),
            }
        }
        blocks
    }

    /// `sum_{n in modes} phi_n phi_n^T`.
    pub fn projector(&self, modes: &[usize]) -> DMatrix<f64> {
        let m = self.dim();
        let mut p = DMatrix::zeros(m, m);
        for &n in modes {
            let v = self.eigenvectors.column(n);
            p += v * v.transpose();
        }
        p
    }
}

/// `T(x, y) = K(x, y) sqrt(pi(y)) / sqrt(pi(x))`.
pub fn symmetrize(chain: &MarkovChain) -> Result<DMatrix<f64>> {
    let pi = chain.pi().values();
    if let Some(x) = pi.iter().position(|&p| p <= 0.0) {
        return Err(Error::domain(format!("pi({x}) is not positive")));
    }
    let s: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
    let k = chain.kernel();
    Ok(DMatrix::from_fn(k.nrows(), k.ncols(), |x, y| k[(x, y)] * s[y] / s[x]))
}

/// `H = 1 - T`.
pub fn hamiltonian(chain: &MarkovChain) -> Result<DMatrix<f64>> {
    let t = symmetrize(chain)?;
    let m = t.nrows();
    Ok(DMatrix::identity(m, m) - t)
}

/// Full orthonormal eigenbasis of a symmetric `H`, energies ascending.
///
/// Each eigenvector is signed so that its entry of largest magnitude (the
/// first one on ties) is positive.
pub fn eigendecompose(h: &DMatrix<f64>) -> Result<SpectralData> {
    let m = h.nrows();
    if h.ncols() != m {
        return Err(Error::Dimension { expected: m, found: h.ncols() });
    }
    let asym = (h - h.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(Error::domain(format!("matrix is not symmetric (defect {asym:e})")));
    }
    let (values, vectors) = eigen::jacobi(h);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut evecs = DMatrix::zeros(m, m);
    for (col, &src) in order.iter().enumerate() {
        let v = vectors.column(src);
        let mut best = 0;
        for i in 1..m {
            if v[i].abs() > v[best].abs() {
                best = i;
            }
        }
        let sign = if v[best] < 0.0 { -1.0 } else { 1.0 };
        evecs.set_column(col, &(v * sign));
    }
    let kappa = order.iter().map(|&i| 1.0 - values[i]).collect();
    SpectralData::new(kappa, evecs, vec![1.0; m], SpectralSource::Numerical)
}

/// `K(x, y) = phi0(x)/phi0(y) sum_n kappa(n) phi_n(x) phi_n(y)`, `phi0 = sqrt(pi)`.
pub fn spectral_reconstruct_k(spec: &SpectralData, pi: &Distribution) -> Result<DMatrix<f64>> {
    let m = spec.dim();
    if pi.len() != m {
        return Err(Error::Dimension { expected: m, found: pi.len() });
    }
    if let Some(y) = pi.values().iter().position(|&p| p <= 0.0) {
        return Err(Error::domain(format!("pi({y}) is not positive")));
    }
    let s: Vec<f64> = pi.values().iter().map(|p| p.sqrt()).collect();
    let phi = &spec.eigenvectors;
    Ok(DMatrix::from_fn(m, m, |x, y| {
        let sum = (0..spec.len())
            .map(|n| spec.kappa[n] * phi[(x, n)] * phi[(y, n)])
            .collect::<CompensatedSum>()
            .value();
        s[x] / s[y] * sum
    }))
}

#[cfg(test)]
mod tests {
    use super::super::VertexWindow;
    use super::*;

    fn two_state(alpha: f64, beta: f64) -> MarkovChain {
        let k = DMatrix::from_row_slice(2, 2, &[1.0 - alpha, beta, alpha, 1.0 - beta]);
        let pi = Distribution::new(vec![beta / (alpha + beta), alpha / (alpha + beta)]).unwrap();
        MarkovChain::new(VertexWindow::finite(1), k, pi).unwrap()
    }

    #[test]
    fn symmetric_kernel_uniform_pi_is_its_own_symmetrisation() {
        let c = two_state(0.3, 0.3);
        assert_eq!(symmetrize(&c).unwrap(), *c.kernel());
    }

    #[test]
    fn two_state_off_diagonal_is_geometric_mean() {
        let (a, b) = (0.2, 0.65);
        let t = symmetrize(&two_state(a, b)).unwrap();
        let g = (a * b).sqrt();
        assert!((t[(0, 1)] - g).abs() < 1e-15);
        assert!((t[(1, 0)] - g).abs() < 1e-15);
    }

    #[test]
    fn identity_kernel_has_zero_hamiltonian() {
        let c = MarkovChain::new(VertexWindow::finite(2), DMatrix::identity(3, 3), Distribution::uniform(3))
            .unwrap();
        assert_eq!(hamiltonian(&c).unwrap(), DMatrix::zeros(3, 3));
        let s = eigendecompose(&hamiltonian(&c).unwrap()).unwrap();
        assert_eq!(s.energies, vec![0.0; 3]);
        assert!(s.orthonormality_defect() < 1e-15);
        let k = spectral_reconstruct_k(&s, c.pi()).unwrap();
        assert!((k - DMatrix::identity(3, 3)).amax() < 1e-15);
    }

    #[test]
    fn symmetric_two_state_energies() {
        let alpha = 0.35;
        let h = hamiltonian(&two_state(alpha, alpha)).unwrap();
        let s = eigendecompose(&h).unwrap();
        assert!(s.energies[0].abs() < 1e-15);
        assert!((s.energies[1] - 2.0 * alpha).abs() < 1e-15);
        assert_eq!(s.kappa[0], 1.0);
    }

    #[test]
    fn two_state_round_trip() {
        let c = two_state(0.15, 0.4);
        let s = eigendecompose(&hamiltonian(&c).unwrap()).unwrap();
        let k = spectral_reconstruct_k(&s, c.pi()).unwrap();
        assert!((k - c.kernel()).amax() < 1e-12);
    }

    #[test]
    fn sign_convention() {
        let c = two_state(0.15, 0.4);
        let s = eigendecompose(&hamiltonian(&c).unwrap()).unwrap();
        for n in 0..2 {
            let v = s.vector(n);
            let imax = v.iamax();
            assert!(v[imax] > 0.0);
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(eigendecompose(&h).is_err());
    }

    #[test]
    fn degenerate_blocks_chain_together() {
        let s = SpectralData::new(
            vec![1.0, 0.5, 0.5 + 1e-10, 0.2],
            DMatrix::identity(4, 4),
            vec![1.0; 4],
            SpectralSource::Numerical,
        )
        .unwrap();
        assert_eq!(s.degenerate_blocks(DEGENERACY_THRESHOLD), vec![vec![0], vec![2, 1], vec![3]]);
    }
}
