//! Band-limited states mixing all spins `s = 0..=J`, sampled on parallels.
//!
//! Spin `s` contributes `2s + 1` coefficients, stored contiguously at
//! `s^2 + n`, so a band-limited state has `(J + 1)^2` coefficients. The
//! grid puts `2s + 1` equally spaced points on a circle of radius `r_s`,
//! again `(J + 1)^2` points in total, and the square overlap kernel
//! between them is solved by a dense Hermitian factorisation.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, FullPivLU, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::CirculantKernel;
use crate::coherent::{
    coherent_component_unchecked, geometric_mean_of_powers, multi_overlap_unchecked,
};
use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{binom, unit_root, TwiceSpin};

/// Relative eigenvalue threshold below which the grid kernel counts as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Largest supported band limit.
pub const MAX_BAND: u32 = TwiceSpin::MAX / 2;

fn check_band(j_max: u32) -> Result<()> {
    if j_max > MAX_BAND {
        return Err(Error::InvalidParameter(format!(
            "band limit {j_max} exceeds the supported maximum {MAX_BAND}"
        )));
    }
    Ok(())
}

/// Number of coefficients (and grid points) for band limit `J`.
pub fn band_dim(j_max: u32) -> usize {
    let d = j_max as usize + 1;
    d * d
}

/// Flat position of coefficient `n` of spin `s`.
pub fn flat_index(s: u32, n: u32) -> Result<usize> {
    if n > 2 * s {
        return Err(Error::IndexOutOfRange {
            index: i64::from(n),
            max: 2 * i64::from(s),
        });
    }
    Ok((s * s + n) as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBandLimitedState", into = "RawBandLimitedState")]
pub struct BandLimitedState {
    j_max: u32,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBandLimitedState {
    #[serde(rename = "J")]
    j_max: u32,
    coeffs: Vec<Complex64>,
}

impl TryFrom<RawBandLimitedState> for BandLimitedState {
    type Error = Error;
    fn try_from(raw: RawBandLimitedState) -> Result<Self> {
        BandLimitedState::new(raw.j_max, raw.coeffs)
    }
}

impl From<BandLimitedState> for RawBandLimitedState {
    fn from(s: BandLimitedState) -> Self {
        RawBandLimitedState {
            j_max: s.j_max,
            coeffs: s.coeffs,
        }
    }
}

impl BandLimitedState {
    pub fn new(j_max: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        check_band(j_max)?;
        if coeffs.len() != band_dim(j_max) {
            return Err(Error::Shape(format!(
                "band limit {j_max} needs {} coefficients, got {}",
                band_dim(j_max),
                coeffs.len()
            )));
        }
        ensure_finite(&coeffs, "band-limited coefficients")?;
        Ok(Self { j_max, coeffs })
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The `2s + 1` coefficients of spin `s`.
    pub fn spin_block(&self, s: u32) -> Result<&[Complex64]> {
        if s > self.j_max {
            return Err(Error::IndexOutOfRange {
                index: i64::from(s),
                max: i64::from(self.j_max),
            });
        }
        let start = (s * s) as usize;
        Ok(&self.coeffs[start..start + 2 * s as usize + 1])
    }

    /// `(J + 1)^{-1/2} sum_s psi_s(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        ensure_finite(std::slice::from_ref(&z), "evaluation point")?;
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..=self.j_max {
            let start = (s * s) as usize;
            for n in 0..=2 * s as usize {
                acc += self.coeffs[start + n] * coherent_component_unchecked(2 * s, n, z);
            }
        }
        acc / (f64::from(self.j_max) + 1.0).sqrt()
    }
}

/// `r_s = tan(pi (s + 1) / (2 (J + 2)))`, `s = 0..=J`.
pub fn default_radii(j_max: u32) -> Vec<f64> {
    let denom = 2.0 * (f64::from(j_max) + 2.0);
    (0..=j_max)
        .map(|s| (std::f64::consts::PI * (f64::from(s) + 1.0) / denom).tan())
        .collect()
}

/// Parallels grid: `2s + 1` points `r_s e^{2 pi i m / (2s + 1)}` for each spin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct ParallelsGrid {
    j_max: u32,
    radii: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(rename = "J")]
    j_max: u32,
    radii: Vec<f64>,
}

impl TryFrom<RawGrid> for ParallelsGrid {
    type Error = Error;
    fn try_from(raw: RawGrid) -> Result<Self> {
        ParallelsGrid::new(raw.j_max, raw.radii)
    }
}

impl From<ParallelsGrid> for RawGrid {
    fn from(g: ParallelsGrid) -> Self {
        RawGrid {
            j_max: g.j_max,
            radii: g.radii,
        }
    }
}

impl ParallelsGrid {
    pub fn new(j_max: u32, radii: Vec<f64>) -> Result<Self> {
        check_band(j_max)?;
        if radii.len() != j_max as usize + 1 {
            return Err(Error::Shape(format!(
                "band limit {j_max} needs {} radii, got {}",
                j_max + 1,
                radii.len()
            )));
        }
        if let Some(r) = radii.iter().find(|r| !r.is_finite() || **r <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radii must be positive and finite, got {r}"
            )));
        }
        for (a, ra) in radii.iter().enumerate() {
            for rb in &radii[a + 1..] {
                if (ra - rb).abs() <= 1e-9 {
                    return Err(Error::InvalidParameter(format!("radius {ra} is repeated")));
                }
            }
        }
        Ok(Self { j_max, radii })
    }

    pub fn with_default_radii(j_max: u32) -> Result<Self> {
        Self::new(j_max, default_radii(j_max))
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        band_dim(self.j_max)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points in flat order: parallel `s`, then position `m` on it.
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        for (s, r) in self.radii.iter().enumerate() {
            let count = 2 * s + 1;
            out.extend((0..count).map(|m| unit_root(m as i64, count) * *r));
        }
        out
    }
}

/// Dense frame matrix `T_{k, s^2 + n} = (J + 1)^{-1/2} <z_k | s, n - s>`.
pub fn multi_frame_matrix(grid: &ParallelsGrid) -> DMatrix<Complex64> {
    let points = grid.points();
    let scale = 1.0 / (f64::from(grid.j_max) + 1.0).sqrt();
    let dim = grid.len();
    let mut cols = Vec::with_capacity(dim);
    for s in 0..=grid.j_max {
        for n in 0..=2 * s as usize {
            cols.push((s, n));
        }
    }
    DMatrix::from_fn(dim, dim, |k, c| {
        let (s, n) = cols[c];
        coherent_component_unchecked(2 * s, n, points[k]) * scale
    })
}

/// Overlap kernel of the grid, assembled from the parallel radii and angles.
pub fn multi_overlap_kernel(grid: &ParallelsGrid) -> DMatrix<Complex64> {
    let dim = grid.len();
    let mut labels = Vec::with_capacity(dim);
    for (a, r) in grid.radii.iter().enumerate() {
        for m in 0..2 * a + 1 {
            labels.push((a, m, *r));
        }
    }
    let mut out = DMatrix::zeros(dim, dim);
    for row in 0..dim {
        let (a, m, ra) = labels[row];
        out[(row, row)] = Complex64::new(1.0, 0.0);
        for col in row + 1..dim {
            let (b, n, rb) = labels[col];
            let (pa, pb) = (2 * a + 1, 2 * b + 1);
            let turns = (n * pa) as i64 - (m * pb) as i64;
            let num = 1.0 + unit_root(turns, pa * pb) * (ra * rb);
            let kappa = num * num / ((1.0 + ra * ra) * (1.0 + rb * rb));
            let v = geometric_mean_of_powers(kappa, grid.j_max);
            out[(row, col)] = v;
            out[(col, row)] = v.conj();
        }
    }
    out
}

/// Sample `state` on the grid.
pub fn multi_sample(state: &BandLimitedState, grid: &ParallelsGrid) -> Result<MultiSampleVector> {
    if state.j_max != grid.j_max {
        return Err(Error::Shape(format!(
            "state has band limit {}, grid has {}",
            state.j_max, grid.j_max
        )));
    }
    let values = grid
        .points()
        .iter()
        .map(|z| state.eval_unchecked(*z))
        .collect();
    MultiSampleVector::new(grid.clone(), values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMultiSamples", into = "RawMultiSamples")]
pub struct MultiSampleVector {
    grid: ParallelsGrid,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMultiSamples {
    #[serde(rename = "J")]
    j_max: u32,
    radii: Vec<f64>,
    values: Vec<Complex64>,
}

impl TryFrom<RawMultiSamples> for MultiSampleVector {
    type Error = Error;
    fn try_from(raw: RawMultiSamples) -> Result<Self> {
        MultiSampleVector::new(ParallelsGrid::new(raw.j_max, raw.radii)?, raw.values)
    }
}

impl From<MultiSampleVector> for RawMultiSamples {
    fn from(s: MultiSampleVector) -> Self {
        RawMultiSamples {
            j_max: s.grid.j_max,
            radii: s.grid.radii,
            values: s.values,
        }
    }
}

impl MultiSampleVector {
    pub fn new(grid: ParallelsGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "grid has {} points, got {} samples",
                grid.len(),
                values.len()
            )));
        }
        ensure_finite(&values, "sample values")?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &ParallelsGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[derive(Debug, Clone)]
enum Factor {
    Cholesky(Cholesky<Complex64, Dyn>),
    Lu(FullPivLU<Complex64, Dyn, Dyn>),
}

/// Factorised grid kernel, ready for repeated solves.
#[derive(Debug, Clone)]
pub struct MultiSpinKernel {
    grid: ParallelsGrid,
    points: Vec<Complex64>,
    eigenvalues: Vec<f64>,
    factor: Factor,
}

impl MultiSpinKernel {
    pub fn new(grid: &ParallelsGrid) -> Result<Self> {
        Self::with_tolerance(grid, SINGULAR_TOLERANCE)
    }

    /// Factorise, rejecting kernels whose smallest eigenvalue is at most
    /// `tol` times the largest.
    pub fn with_tolerance(grid: &ParallelsGrid, tol: f64) -> Result<Self> {
        let kernel = multi_overlap_kernel(grid);
        let mut eigenvalues: Vec<f64> = SymmetricEigen::new(kernel.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigenvalues.sort_by(|a, b| a.total_cmp(b));
        let largest = eigenvalues.last().copied().unwrap_or(0.0);
        let threshold = tol * largest;
        if eigenvalues[0] <= threshold {
            return Err(Error::Singular {
                mode: 0,
                value: eigenvalues[0],
                threshold,
            });
        }
        let factor = match Cholesky::new(kernel.clone()) {
            Some(c) => Factor::Cholesky(c),
            None => Factor::Lu(FullPivLU::new(kernel)),
        };
        Ok(Self {
            grid: grid.clone(),
            points: grid.points(),
            eigenvalues,
            factor,
        })
    }

    pub fn grid(&self) -> &ParallelsGrid {
        &self.grid
    }

    /// Kernel eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Ratio of the largest to the smallest eigenvalue.
    pub fn condition_number(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1] / self.eigenvalues[0]
    }

    pub fn uses_cholesky(&self) -> bool {
        matches!(self.factor, Factor::Cholesky(_))
    }

    /// `B^{-1} v`.
    pub fn solve(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.points.len() {
            return Err(Error::Shape(format!(
                "kernel of size {} applied to {} values",
                self.points.len(),
                v.len()
            )));
        }
        ensure_finite(v, "right-hand side")?;
        let rhs = DVector::from_column_slice(v);
        let x = match &self.factor {
            Factor::Cholesky(c) => c.solve(&rhs),
            Factor::Lu(lu) => lu.solve(&rhs).ok_or(Error::Singular {
                mode: 0,
                value: self.eigenvalues[0],
                threshold: 0.0,
            })?,
        };
        Ok(x.iter().copied().collect())
    }

    /// Dual weights for `samples`, evaluable anywhere on the sphere.
    pub fn reconstruction(&self, samples: &MultiSampleVector) -> Result<MultiSpinReconstruction> {
        if samples.grid != self.grid {
            return Err(Error::Shape(
                "samples were taken on a different grid".into(),
            ));
        }
        Ok(MultiSpinReconstruction {
            j_max: self.grid.j_max,
            points: self.points.clone(),
            gamma: self.solve(&samples.values)?,
        })
    }

    /// Coefficients `T^dagger B^{-1} psi` of the state with the given samples.
    pub fn coefficients(&self, samples: &MultiSampleVector) -> Result<BandLimitedState> {
        let rec = self.reconstruction(samples)?;
        let t = multi_frame_matrix(&self.grid);
        let coeffs = t.adjoint() * DVector::from_vec(rec.gamma);
        BandLimitedState::new(self.grid.j_max, coeffs.iter().copied().collect())
    }
}

#[derive(Debug, Clone)]
pub struct MultiSpinReconstruction {
    j_max: u32,
    points: Vec<Complex64>,
    gamma: Vec<Complex64>,
}

impl MultiSpinReconstruction {
    pub fn weights(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        ensure_finite(std::slice::from_ref(&z), "evaluation point")?;
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.points
            .iter()
            .zip(&self.gamma)
            .map(|(p, g)| g * multi_overlap_unchecked(self.j_max, z, *p))
            .sum()
    }

    pub fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        ensure_finite(zs, "evaluation points")?;
        Ok(zs.par_iter().map(|z| self.eval_unchecked(*z)).collect())
    }
}

/// Reconstructed value at `z` and the kernel condition number.
pub fn multi_reconstruct(samples: &MultiSampleVector, z: Complex64) -> Result<(Complex64, f64)> {
    let kernel = MultiSpinKernel::new(&samples.grid)?;
    let value = kernel.reconstruction(samples)?.eval(z)?;
    Ok((value, kernel.condition_number()))
}

/// Eigenvalues of the band-limited kernel on `N >= 2J + 1` roots of unity:
/// `(J + 1)^{-1} sum_{s >= n/2} N binom(2s, n) / 2^{2s}` for `n <= 2J`, zero beyond.
pub fn roots_rank_eigens(j_max: u32, n: usize) -> Result<Vec<f64>> {
    check_band(j_max)?;
    if n < 2 * j_max as usize + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least {} roots of unity for band limit {j_max}, got {n}",
            2 * j_max + 1
        )));
    }
    let count = f64::from(j_max) + 1.0;
    Ok((0..n)
        .map(|m| {
            if m > 2 * j_max as usize {
                return 0.0;
            }
            let lo = (m as u32).div_ceil(2);
            (lo..=j_max)
                .map(|s| n as f64 * binom(2 * s, m as i64) / 4f64.powi(s as i32))
                .sum::<f64>()
                / count
        })
        .collect())
}

/// Band-limited overlap kernel on the `n`-th roots of unity (circulant).
pub fn equatorial_kernel(j_max: u32, n: usize) -> Result<CirculantKernel> {
    check_band(j_max)?;
    let one = Complex64::new(1.0, 0.0);
    CirculantKernel::new(
        (0..n)
            .map(|l| multi_overlap_unchecked(j_max, one, unit_root(l as i64, n)))
            .collect(),
    )
}
