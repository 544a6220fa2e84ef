//! Gaussian states over `N` modes in the `(x₁…x_N, p₁…p_N)` ordering, with
//! vacuum covariance `I/2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gkp::Quadrature;

const SYMPLECTIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Signal,
    Idler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hg {
    #[serde(rename = "HG01")]
    Hg01,
    #[serde(rename = "HG10")]
    Hg10,
}

/// Bookkeeping label of one optical mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub oeg_id: u8,
    pub band: Band,
    pub hg: Hg,
    pub freq_index: u32,
    pub timebin: u32,
}

impl ModeLabel {
    pub fn new(oeg_id: u8, band: Band, hg: Hg, freq_index: u32, timebin: u32) -> Self {
        ModeLabel { oeg_id, band, hg, freq_index, timebin }
    }

    pub fn delayed(mut self, bins: u32) -> Self {
        self.timebin += bins;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    labels: Vec<ModeLabel>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// The standard symplectic form for `n` modes in block ordering.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        o[(i, n + i)] = 1.0;
        o[(n + i, i)] = -1.0;
    }
    o
}

/// Checks `SᵀΩS = Ω` within `1e-10`.
pub fn is_symplectic(s: &DMatrix<f64>) -> bool {
    if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) {
        return false;
    }
    let o = omega(s.nrows() / 2);
    (s.transpose() * &o * s - o).amax() <= SYMPLECTIC_TOL
}

/// Squeezer on one mode: `x → e^{−r}x`, `p → e^{r}p`.
pub fn squeezer(r: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![(-r).exp(), r.exp()]))
}

/// Fourier rotation on one mode: `x → p`, `p → −x`.
pub fn fourier() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

/// Real beam splitter on two modes:
/// `a → cos θ·a − sin θ·b`, `b → sin θ·a + cos θ·b` on both quadratures.
pub fn beam_splitter(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::zeros(4, 4);
    for off in [0, 2] {
        m[(off, off)] = c;
        m[(off, off + 1)] = -s;
        m[(off + 1, off)] = s;
        m[(off + 1, off + 1)] = c;
    }
    m
}

pub fn balanced_beam_splitter() -> DMatrix<f64> {
    beam_splitter(std::f64::consts::FRAC_PI_4)
}

/// Controlled-phase gate of strength `g`: `p_a += g·x_b`, `p_b += g·x_a`.
pub fn controlled_phase(g: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(4, 4);
    m[(2, 1)] = g;
    m[(3, 0)] = g;
    m
}

/// Mode routing: output mode `i` takes input mode `perm[i]`.
pub fn permutation(perm: &[usize]) -> Result<DMatrix<f64>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::contract("permutation is not a bijection"));
        }
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (i, &p) in perm.iter().enumerate() {
        m[(i, p)] = 1.0;
        m[(n + i, n + p)] = 1.0;
    }
    Ok(m)
}

impl GaussianState {
    pub fn vacuum(labels: Vec<ModeLabel>) -> Result<Self> {
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::contract("duplicate mode label"));
        }
        let n = labels.len();
        Ok(GaussianState { labels, mean: DVector::zeros(2 * n), cov: DMatrix::identity(2 * n, 2 * n) * 0.5 })
    }

    pub fn from_parts(labels: Vec<ModeLabel>, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let mut s = Self::vacuum(labels)?;
        let n2 = 2 * s.num_modes();
        if mean.len() != n2 || cov.nrows() != n2 || cov.ncols() != n2 {
            return Err(Error::contract("mean/covariance size does not match the labels"));
        }
        if (&cov - cov.transpose()).amax() > 1e-12 {
            return Err(Error::contract("covariance is not symmetric"));
        }
        s.mean = mean;
        s.cov = cov;
        Ok(s)
    }

    pub fn num_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index_of(&self, label: &ModeLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Row of quadrature `q` of mode `m` in the mean/covariance.
    pub fn quad_index(&self, mode: usize, q: Quadrature) -> usize {
        match q {
            Quadrature::X => mode,
            Quadrature::P => self.num_modes() + mode,
        }
    }

    pub fn relabel(&mut self, mode: usize, label: ModeLabel) -> Result<()> {
        if self.labels.iter().enumerate().any(|(i, l)| i != mode && *l == label) {
            return Err(Error::contract("relabel would duplicate a mode label"));
        }
        self.labels[mode] = label;
        Ok(())
    }

    /// Applies a `2k×2k` symplectic matrix (local block ordering) to the
    /// listed modes.
    pub fn apply_symplectic(&mut self, s: &DMatrix<f64>, modes: &[usize]) -> Result<()> {
        let k = modes.len();
        if s.nrows() != 2 * k || !is_symplectic(s) {
            return Err(Error::contract("matrix is not symplectic on the target modes"));
        }
        let n = self.num_modes();
        let mut uniq = modes.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() != k || modes.iter().any(|&m| m >= n) {
            return Err(Error::contract("target modes must be distinct and present"));
        }
        let idx: Vec<usize> = modes.iter().copied().chain(modes.iter().map(|m| n + m)).collect();
        let sub_mean = DVector::from_iterator(2 * k, idx.iter().map(|&i| self.mean[i]));
        let new_mean = s * sub_mean;
        for (a, &i) in idx.iter().enumerate() {
            self.mean[i] = new_mean[a];
        }
        // Rows, then columns.
        let rows = DMatrix::from_fn(2 * k, 2 * n, |a, j| self.cov[(idx[a], j)]);
        let rows = s * rows;
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..2 * n {
                self.cov[(i, j)] = rows[(a, j)];
            }
        }
        let cols = DMatrix::from_fn(2 * n, 2 * k, |j, a| self.cov[(j, idx[a])]);
        let cols = cols * s.transpose();
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..2 * n {
                self.cov[(j, i)] = cols[(j, a)];
            }
        }
        Ok(())
    }

    /// Applies a full `2N×2N` symplectic matrix.
    pub fn apply_global(&mut self, s: &DMatrix<f64>) -> Result<()> {
        let n = self.num_modes();
        if s.nrows() != 2 * n || !is_symplectic(s) {
            return Err(Error::contract("matrix is not a symplectic map of the whole state"));
        }
        self.mean = s * &self.mean;
        self.cov = s * &self.cov * s.transpose();
        Ok(())
    }

    /// Conditions on a homodyne outcome of quadrature `q` of `mode` and
    /// removes the mode.
    pub fn homodyne_condition(&mut self, mode: usize, q: Quadrature, outcome: f64) -> Result<()> {
        let n = self.num_modes();
        if mode >= n {
            return Err(Error::contract(format!("mode {mode} not present")));
        }
        let i = self.quad_index(mode, q);
        let var = self.cov[(i, i)];
        if var <= 1e-300 || !var.is_finite() {
            return Err(Error::Singular(format!("measured quadrature of mode {mode} has variance {var}")));
        }
        let col = self.cov.column(i).clone_owned();
        let shift = outcome - self.mean[i];
        self.mean += &col * (shift / var);
        self.cov -= &col * col.transpose() / var;
        let keep: Vec<usize> = (0..2 * n).filter(|&j| j != mode && j != n + mode).collect();
        self.mean = DVector::from_iterator(keep.len(), keep.iter().map(|&j| self.mean[j]));
        self.cov = self.cov.select_rows(&keep).select_columns(&keep);
        self.labels.remove(mode);
        Ok(())
    }

    /// Symplectic eigenvalues, ascending; each appears once.
    ///
    /// Taken as `|Im λ|` of the eigenvalues of `ΩV`, which come in `±iν`
    /// pairs. The Schur route stays accurate on the highly degenerate spectra
    /// of pure graph states, where diagonalizing `√V Ω √V` squared does not.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.num_modes();
        let mut nu: Vec<f64> = (omega(n) * &self.cov).complex_eigenvalues().iter().map(|c| c.im.abs()).collect();
        nu.sort_by(f64::total_cmp);
        nu.into_iter().step_by(2).collect()
    }

    /// Whether `cov + (i/2)Ω ⪰ 0` holds within `tol`, tested on its real
    /// `4N×4N` representation.
    pub fn satisfies_uncertainty(&self, tol: f64) -> bool {
        let n = self.num_modes();
        if n == 0 {
            return true;
        }
        let half = omega(n) * 0.5;
        let mut big = DMatrix::zeros(4 * n, 4 * n);
        big.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&self.cov);
        big.view_mut((2 * n, 2 * n), (2 * n, 2 * n)).copy_from(&self.cov);
        big.view_mut((0, 2 * n), (2 * n, 2 * n)).copy_from(&-&half);
        big.view_mut((2 * n, 0), (2 * n, 2 * n)).copy_from(&half);
        SymmetricEigen::new(big).eigenvalues.min() >= -tol
    }

    /// `det(2·cov)`, equal to 1 for pure states.
    pub fn purity_determinant(&self) -> f64 {
        (&self.cov * 2.0).determinant()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (&self.cov - self.cov.transpose()).amax() <= tol
    }

    /// Symmetry, uncertainty and (for pure inputs) unit `det(2·cov)`.
    pub fn check_physical(&self, tol: f64, pure: bool) -> Result<()> {
        if !self.is_symmetric(tol) {
            return Err(Error::contract("covariance lost symmetry"));
        }
        if !self.satisfies_uncertainty(tol) {
            return Err(Error::contract("covariance violates the uncertainty relation"));
        }
        if pure {
            let nu = self.symplectic_eigenvalues();
            if nu.iter().any(|v| (v - 0.5).abs() > tol) {
                return Err(Error::contract("state is no longer pure"));
            }
        }
        Ok(())
    }

    /// Variance of the linear combination `Σ cᵢ·ξᵢ` of quadratures.
    pub fn variance_of(&self, coeffs: &DVector<f64>) -> f64 {
        (coeffs.transpose() * &self.cov * coeffs)[(0, 0)]
    }
}
