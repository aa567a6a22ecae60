//! Circulant kernels `C_{kl} = c_{(l - k) mod N}` and their diagonalisation.
//!
//! With `c` the first row, the eigenvalues are `lambda_k = sum_l c_l e^{-2 pi i k l / N}`
//! and `C = F^dagger diag(lambda) F` for the unitary forward transform `F`.
//! Products, solves and pseudo-inverses are therefore two DFTs and a
//! diagonal scaling.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::unitary_dft;

/// Default relative threshold below which an eigenvalue counts as zero.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantKernel {
    first_row: Vec<Complex64>,
    eigenvalues: Vec<Complex64>,
}

/// Eigenvalues of the circulant matrix with the given first row.
pub fn circ_eigenvalues(first_row: &[Complex64]) -> Vec<Complex64> {
    let scale = (first_row.len() as f64).sqrt();
    unitary_dft(first_row, true)
        .into_iter()
        .map(|x| x * scale)
        .collect()
}

impl CirculantKernel {
    pub fn new(first_row: Vec<Complex64>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::Shape(
                "circulant kernel needs at least one entry".into(),
            ));
        }
        ensure_finite(&first_row, "circulant first row")?;
        let eigenvalues = circ_eigenvalues(&first_row);
        Ok(Self {
            first_row,
            eigenvalues,
        })
    }

    pub fn len(&self) -> usize {
        self.first_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_row.is_empty()
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        let n = self.len();
        self.first_row[(l + n - k % n) % n]
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    fn check_rhs(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::Shape(format!(
                "circulant kernel of size {} applied to vector of length {}",
                self.len(),
                x.len()
            )));
        }
        ensure_finite(x, "circulant right-hand side")
    }

    fn scale_spectrum(
        &self,
        x: &[Complex64],
        f: impl Fn(Complex64) -> Complex64,
    ) -> Vec<Complex64> {
        let mut spec = unitary_dft(x, false);
        for (s, l) in spec.iter_mut().zip(&self.eigenvalues) {
            *s *= f(*l);
        }
        unitary_dft(&spec, true)
    }

    /// `C x`.
    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_rhs(x)?;
        Ok(self.scale_spectrum(x, |l| l))
    }

    /// `C^{-1} x`; fails if any eigenvalue is at most `tol * max|lambda|`.
    pub fn solve(&self, x: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
        self.check_rhs(x)?;
        let threshold = tol * self.max_abs_eigenvalue();
        if let Some((mode, l)) = self
            .eigenvalues
            .iter()
            .enumerate()
            .find(|(_, l)| l.norm() <= threshold)
        {
            return Err(Error::Singular {
                mode,
                value: l.norm(),
                threshold,
            });
        }
        Ok(self.scale_spectrum(x, |l| l.inv()))
    }

    /// Moore-Penrose pseudo-inverse applied to `x`, zeroing eigenvalues at or
    /// below `tol * max|lambda|`.
    pub fn pinv_apply(&self, x: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
        self.check_rhs(x)?;
        let threshold = tol * self.max_abs_eigenvalue();
        Ok(self.scale_spectrum(x, |l| {
            if l.norm() > threshold {
                l.inv()
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }
}

/// `C^{-1} x` for the circulant matrix with first row `first_row`.
pub fn circ_solve(first_row: &[Complex64], x: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    CirculantKernel::new(first_row.to_vec())?.solve(x, tol)
}

/// `C^+ x` for the circulant matrix with first row `first_row`.
pub fn circ_pinv_apply(
    first_row: &[Complex64],
    x: &[Complex64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    CirculantKernel::new(first_row.to_vec())?.pinv_apply(x, tol)
}
