//! Rectangular Fourier matrices `F_{N,M}` (N rows, M columns) with entries
//! `N^{-1/2} e^{2 pi i n m / N}`.
//!
//! These are never materialised on the hot path. A product with `F_{N,M}`
//! folds the input onto `N` residues (or zero-pads it when `N >= M`) and then
//! runs an `N`-point DFT; the adjoint runs the inverse DFT and replicates the
//! result back to `M` entries.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::unitary_dft;

/// Shape of `F_{N,M}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RfmShape {
    pub rows: usize,
    pub cols: usize,
}

impl RfmShape {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "rectangular Fourier matrix needs positive dimensions, got {rows}x{cols}"
            )));
        }
        Ok(Self { rows, cols })
    }

    /// `ceil(M / N)`: how many times each residue class is hit.
    pub fn fold_count(&self) -> usize {
        self.cols.div_ceil(self.rows)
    }
}

/// Zero-pad `v` to length `n >= v.len()`.
pub fn pad(v: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if n < v.len() {
        return Err(Error::Shape(format!(
            "cannot pad length {} down to {n}",
            v.len()
        )));
    }
    let mut out = v.to_vec();
    out.resize(n, Complex64::new(0.0, 0.0));
    Ok(out)
}

/// First `m <= v.len()` entries of `v`.
pub fn truncate(v: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    if m > v.len() {
        return Err(Error::Shape(format!(
            "cannot truncate length {} up to {m}",
            v.len()
        )));
    }
    Ok(v[..m].to_vec())
}

/// Sum the entries of `v` over residue classes mod `n` (zero-pads when `n >= v.len()`).
pub fn fold(v: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (m, x) in v.iter().enumerate() {
        out[m % n] += x;
    }
    out
}

/// Adjoint of [`fold`]: entry `m` of the result is `w[m mod N]`.
pub fn unfold(w: &[Complex64], m: usize) -> Vec<Complex64> {
    (0..m).map(|i| w[i % w.len()]).collect()
}

fn check_len(got: usize, want: usize, what: &str) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "{what}: expected length {want}, got {got}"
        )))
    }
}

/// `F_{N,M} v`.
pub fn rfm_apply(shape: RfmShape, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(v.len(), shape.cols, "rfm_apply input")?;
    Ok(unitary_dft(&fold(v, shape.rows), false))
}

/// `conj(F_{N,M}) v`, entries `N^{-1/2} e^{-2 pi i n m / N}`.
pub fn rfm_conj_apply(shape: RfmShape, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(v.len(), shape.cols, "rfm_conj_apply input")?;
    Ok(unitary_dft(&fold(v, shape.rows), true))
}

/// `F_{N,M}^dagger w`.
pub fn rfm_adjoint_apply(shape: RfmShape, w: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(w.len(), shape.rows, "rfm_adjoint_apply input")?;
    Ok(unfold(&unitary_dft(w, true), shape.cols))
}

/// `F_{N,M}^T w`, i.e. the adjoint of [`rfm_conj_apply`].
pub fn rfm_transpose_apply(shape: RfmShape, w: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(w.len(), shape.rows, "rfm_transpose_apply input")?;
    Ok(unfold(&unitary_dft(w, false), shape.cols))
}

/// Diagonal projector `P_p` of size `n`: ones in the first `p` slots.
pub fn leading_projector(n: usize, p: usize) -> Vec<f64> {
    (0..n).map(|i| if i < p { 1.0 } else { 0.0 }).collect()
}
