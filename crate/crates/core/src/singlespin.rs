//! Sampling a single spin on `N` equally spaced points of a circle and
//! recovering the state from those samples.
//!
//! The default circle is the unit circle, i.e. the `N`-th roots of unity.
//! Depending on `N` against the dimension `2s + 1` the frame is
//! oversampled (`N > 2s + 1`), critical or undersampled (`N < 2s + 1`).
//!
//! Writing the frame as `T = conj(F_{N,2s+1}) diag(W)`, the resolution
//! operator `T^dagger T` is diagonal with entries `lambda_n = |W_n|^2` when
//! `N >= 2s + 1`, and the overlap kernel `B = T T^dagger` is circulant with
//! eigenvalues `hat lambda_k = sum_{n = k mod N} lambda_n`. Every operation
//! below reduces to DFTs and diagonal scalings.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::{CirculantKernel, DEFAULT_TOLERANCE};
use crate::coherent::{
    coherent_component_unchecked, cs_overlap_unchecked, normalized_geometric, normalized_series,
    SpinState,
};
use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{ln_binom, norm2, unit_root, unitary_dft, TwiceSpin};
use crate::rfm::{rfm_conj_apply, rfm_transpose_apply, RfmShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Undersampled,
    Critical,
    Oversampled,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Undersampled => "undersampled",
            Regime::Critical => "critical",
            Regime::Oversampled => "oversampled",
        })
    }
}

/// Circle carrying the sample points `z_k = radius e^{i (phase + 2 pi k / N)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingCircle {
    radius: f64,
    phase: f64,
}

impl SamplingCircle {
    pub const UNIT: SamplingCircle = SamplingCircle {
        radius: 1.0,
        phase: 0.0,
    };

    pub fn new(radius: f64, phase: f64) -> Result<Self> {
        if !radius.is_finite() || !phase.is_finite() {
            return Err(Error::NonFinite("sampling circle"));
        }
        if radius <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sampling radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius, phase })
    }

    /// The circle through the `N` roots of `z^N = c`.
    pub fn roots_of(c: Complex64, n: usize) -> Result<Self> {
        if c.norm() == 0.0 {
            return Err(Error::InvalidParameter(
                "roots of z^N = 0 do not form a circle".into(),
            ));
        }
        Self::new(c.norm().powf(1.0 / n as f64), c.arg() / n as f64)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn is_unit(&self) -> bool {
        self.radius == 1.0
    }
}

impl Default for SamplingCircle {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Spin, number of samples and sampling circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec {
    pub two_s: TwiceSpin,
    pub n: usize,
    pub circle: SamplingCircle,
}

impl FrameSpec {
    /// Sampling at the `n`-th roots of unity.
    pub fn new(two_s: TwiceSpin, n: usize) -> Result<Self> {
        Self::on_circle(two_s, n, SamplingCircle::UNIT)
    }

    pub fn on_circle(two_s: TwiceSpin, n: usize, circle: SamplingCircle) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("at least one sample point is required".into()));
        }
        Ok(Self { two_s, n, circle })
    }

    pub fn dim(&self) -> usize {
        self.two_s.dim()
    }

    pub fn regime(&self) -> Regime {
        match self.n.cmp(&self.dim()) {
            std::cmp::Ordering::Less => Regime::Undersampled,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Greater => Regime::Oversampled,
        }
    }

    /// `ceil((2s + 1) / N)`.
    pub fn fold_count(&self) -> usize {
        self.dim().div_ceil(self.n)
    }

    pub fn shape(&self) -> RfmShape {
        RfmShape {
            rows: self.n,
            cols: self.dim(),
        }
    }

    pub fn point(&self, k: usize) -> Complex64 {
        let rot = Complex64::from_polar(self.circle.radius, self.circle.phase);
        if self.circle.phase == 0.0 {
            unit_root(k as i64, self.n) * self.circle.radius
        } else {
            unit_root(k as i64, self.n) * rot
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }
}

/// Sample values together with the frame they were taken on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampleVector", into = "RawSampleVector")]
pub struct SampleVector {
    spec: FrameSpec,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampleVector {
    two_s: u32,
    n: usize,
    values: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<f64>,
}

impl TryFrom<RawSampleVector> for SampleVector {
    type Error = Error;
    fn try_from(raw: RawSampleVector) -> Result<Self> {
        let circle = SamplingCircle::new(raw.radius.unwrap_or(1.0), raw.phase.unwrap_or(0.0))?;
        let spec = FrameSpec::on_circle(TwiceSpin::new(raw.two_s)?, raw.n, circle)?;
        SampleVector::new(spec, raw.values)
    }
}

impl From<SampleVector> for RawSampleVector {
    fn from(s: SampleVector) -> Self {
        let c = s.spec.circle;
        RawSampleVector {
            two_s: s.spec.two_s.get(),
            n: s.spec.n,
            values: s.values,
            radius: (c.radius != 1.0).then_some(c.radius),
            phase: (c.phase != 0.0).then_some(c.phase),
        }
    }
}

impl SampleVector {
    pub fn new(spec: FrameSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.n {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                spec.n,
                values.len()
            )));
        }
        ensure_finite(&values, "sample values")?;
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Precomputed spectral data of one frame. Cheap to build (linear in
/// `N + 2s`), reusable across many reconstructions.
#[derive(Debug, Clone)]
pub struct Frame {
    spec: FrameSpec,
    weights: Vec<Complex64>,
    resolution: Vec<f64>,
    overlap: Vec<f64>,
    reciprocal: Vec<f64>,
    dual_coeffs: Vec<Complex64>,
    kernel: CirculantKernel,
}

impl Frame {
    pub fn new(spec: FrameSpec) -> Self {
        let two_s = spec.two_s.get();
        let s = spec.two_s.spin();
        let n = spec.n;
        let r = spec.circle.radius;
        let beta = spec.circle.phase;
        let log_norm = (r * r).ln_1p();
        let sqrt_n = (n as f64).sqrt();

        let mut weights = Vec::with_capacity(spec.dim());
        let mut resolution = Vec::with_capacity(spec.dim());
        for m in 0..spec.dim() {
            let log_w = 0.5 * ln_binom(two_s, m as i64) + m as f64 * r.ln() - s * log_norm;
            let mag = log_w.exp();
            weights.push(Complex64::from_polar(sqrt_n * mag, -(m as f64) * beta));
            resolution.push(n as f64 * (2.0 * log_w).exp());
        }

        let mut overlap = vec![0.0; n];
        for (m, l) in resolution.iter().enumerate() {
            overlap[m % n] += l;
        }
        let reciprocal: Vec<f64> = overlap
            .iter()
            .map(|&l| if l > 0.0 { 1.0 / l } else { 0.0 })
            .collect();

        let dual_coeffs = (0..spec.dim())
            .map(|m| {
                let c = (ln_binom(two_s, m as i64) - s * log_norm).exp() * reciprocal[m % n];
                Complex64::new(c, 0.0)
            })
            .collect();

        let r2 = r * r;
        let first_row = (0..n)
            .map(|l| {
                let base = (1.0 + unit_root(l as i64, n) * r2) / (1.0 + r2);
                base.powi(two_s as i32)
            })
            .collect();
        let kernel = CirculantKernel::new(first_row).expect("kernel entries are finite");

        Self {
            spec,
            weights,
            resolution,
            overlap,
            reciprocal,
            dual_coeffs,
            kernel,
        }
    }

    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn regime(&self) -> Regime {
        self.spec.regime()
    }

    /// Diagonal of `T^dagger T`; only diagonal when `N >= 2s + 1`.
    pub fn resolution_eigenvalues(&self) -> Result<&[f64]> {
        if self.regime() == Regime::Undersampled {
            return Err(self.regime_error(
                "resolution_eigenvalues",
                " (the resolution operator is not diagonal)",
            ));
        }
        Ok(&self.resolution)
    }

    /// Eigenvalues of the circulant overlap kernel in Fourier order.
    pub fn overlap_eigenvalues(&self) -> &[f64] {
        &self.overlap
    }

    /// Reciprocals of the nonzero overlap eigenvalues, zero elsewhere.
    pub fn reciprocal_eigenvalues(&self) -> &[f64] {
        &self.reciprocal
    }

    /// The overlap kernel `B_{kl} = <z_k | z_l>`.
    pub fn overlap_kernel(&self) -> &CirculantKernel {
        &self.kernel
    }

    fn regime_error(&self, op: &'static str, detail: &str) -> Error {
        Error::Regime {
            op,
            regime: self.regime(),
            detail: detail.to_string(),
        }
    }

    fn check_samples(&self, samples: &SampleVector) -> Result<()> {
        if samples.spec != self.spec {
            return Err(Error::Shape(format!(
                "samples taken on (two_s = {}, N = {}) do not match frame (two_s = {}, N = {})",
                samples.spec.two_s.get(),
                samples.spec.n,
                self.spec.two_s.get(),
                self.spec.n
            )));
        }
        Ok(())
    }

    fn check_len(&self, v: &[Complex64]) -> Result<()> {
        if v.len() != self.spec.n {
            return Err(Error::Shape(format!(
                "expected {} sample values, got {}",
                self.spec.n,
                v.len()
            )));
        }
        ensure_finite(v, "sample values")
    }

    /// Dense frame matrix `T_{kn} = <z_k | s, n - s>`.
    pub fn frame_matrix(&self) -> DMatrix<Complex64> {
        let points = self.spec.points();
        DMatrix::from_fn(self.spec.n, self.spec.dim(), |k, m| {
            coherent_component_unchecked(self.spec.two_s.get(), m, points[k])
        })
    }

    /// `T a` through one folded DFT.
    pub fn frame_apply(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if coeffs.len() != self.spec.dim() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                self.spec.dim(),
                coeffs.len()
            )));
        }
        let scaled: Vec<_> = coeffs
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| a * w)
            .collect();
        rfm_conj_apply(self.spec.shape(), &scaled)
    }

    /// `T^dagger v`.
    pub fn frame_adjoint_apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(v)?;
        let t = rfm_transpose_apply(self.spec.shape(), v)?;
        Ok(t.iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w.conj())
            .collect())
    }

    /// Samples of `state` at the frame points.
    pub fn sample(&self, state: &SpinState) -> Result<SampleVector> {
        if state.two_s() != self.spec.two_s {
            return Err(Error::Shape(format!(
                "state has two_s = {}, frame has two_s = {}",
                state.two_s().get(),
                self.spec.two_s.get()
            )));
        }
        let values = state.eval_many(&self.spec.points())?;
        SampleVector::new(self.spec, values)
    }

    /// The kernel `L_k(z)` such that the reconstruction is `sum_k psi_k L_k(z)`.
    fn dual_kernel(&self, k: usize, z: Complex64) -> Complex64 {
        let two_s = self.spec.two_s.get();
        let x = z.conj() * self.spec.point(k);
        if self.spec.circle.is_unit() && self.regime() != Regime::Undersampled {
            let scale =
                (f64::from(two_s) * 0.5 * std::f64::consts::LN_2).exp() / self.spec.n as f64;
            normalized_geometric(two_s, x, z.norm_sqr()) * scale
        } else {
            normalized_series(&self.dual_coeffs, two_s, x, z.norm_sqr())
        }
    }

    fn require_unit(&self, op: &'static str) -> Result<()> {
        if self.spec.circle.is_unit() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{op} is defined for the unit circle only"
            )))
        }
    }

    /// Oversampled interpolation kernel
    /// `(2^s / N) (1 + |w|^2)^{-s} sum_{n=0}^{2s} conj(w)^n`.
    pub fn xi(&self, w: Complex64) -> Result<Complex64> {
        self.require_unit("xi")?;
        if self.regime() == Regime::Undersampled {
            return Err(self.regime_error("xi", ""));
        }
        ensure_finite(std::slice::from_ref(&w), "kernel argument")?;
        let two_s = self.spec.two_s.get();
        let scale = (f64::from(two_s) * 0.5 * std::f64::consts::LN_2).exp() / self.spec.n as f64;
        Ok(normalized_geometric(two_s, w.conj(), w.norm_sqr()) * scale)
    }

    /// Undersampled interpolation kernel; agrees with [`Frame::xi`] at critical sampling.
    pub fn xi_hat(&self, w: Complex64) -> Result<Complex64> {
        self.require_unit("xi_hat")?;
        if self.regime() == Regime::Oversampled {
            return Err(self.regime_error("xi_hat", ""));
        }
        ensure_finite(std::slice::from_ref(&w), "kernel argument")?;
        Ok(normalized_series(
            &self.dual_coeffs,
            self.spec.two_s.get(),
            w.conj(),
            w.norm_sqr(),
        ))
    }

    fn reconstruct_values(&self, values: &[Complex64], z: Complex64) -> Complex64 {
        values
            .iter()
            .enumerate()
            .map(|(k, v)| v * self.dual_kernel(k, z))
            .sum()
    }

    /// Value at `z` of the minimum-norm state consistent with the samples.
    /// Exact whenever `N >= 2s + 1`.
    pub fn reconstruct(&self, samples: &SampleVector, z: Complex64) -> Result<Complex64> {
        self.check_samples(samples)?;
        ensure_finite(std::slice::from_ref(&z), "evaluation point")?;
        Ok(self.reconstruct_values(&samples.values, z))
    }

    /// [`Frame::reconstruct`] at many points in parallel.
    pub fn reconstruct_many(
        &self,
        samples: &SampleVector,
        zs: &[Complex64],
    ) -> Result<Vec<Complex64>> {
        self.check_samples(samples)?;
        ensure_finite(zs, "evaluation points")?;
        Ok(zs
            .par_iter()
            .map(|z| self.reconstruct_values(&samples.values, *z))
            .collect())
    }

    /// Coefficients of the minimum-norm state consistent with the samples.
    pub fn coefficients(&self, samples: &SampleVector) -> Result<SpinState> {
        self.check_samples(samples)?;
        let spectrum = unitary_dft(&samples.values, false);
        let n = self.spec.n;
        let coeffs = self
            .weights
            .iter()
            .enumerate()
            .map(|(m, w)| w.conj() * self.reciprocal[m % n] * spectrum[m % n])
            .collect();
        SpinState::new(self.spec.two_s, coeffs)
    }

    /// Reconstruction filter `Delta(k) = N^{-1/2} sum_p mu_p e^{-2 pi i p k / N}`
    /// with `mu_p` the reciprocal overlap eigenvalues.
    pub fn dual_filter(&self) -> Vec<Complex64> {
        let mu: Vec<Complex64> = self
            .reciprocal
            .iter()
            .map(|&m| Complex64::new(m, 0.0))
            .collect();
        unitary_dft(&mu, true)
    }

    /// Dual data `Gamma = B^+ psi`, computed as `N^{-1/2} (Delta * psi)`.
    pub fn dual_data(&self, samples: &SampleVector) -> Result<Vec<Complex64>> {
        self.check_samples(samples)?;
        let delta = self.dual_filter();
        let n = self.spec.n;
        let scale = 1.0 / (n as f64).sqrt();
        Ok((0..n)
            .map(|k| {
                (0..n)
                    .map(|l| delta[(k + n - l) % n] * samples.values[l])
                    .sum::<Complex64>()
                    * scale
            })
            .collect())
    }

    /// Orthogonal projector onto the range of `T` (the identity at critical sampling).
    pub fn range_projector_apply(&self, data: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.regime() == Regime::Undersampled {
            return Err(
                self.regime_error("range_projector_apply", " (every data vector is in range)")
            );
        }
        self.check_len(data)?;
        Ok(self.project(data))
    }

    /// Drops the Fourier modes of `data` where the overlap kernel vanishes.
    fn project(&self, data: &[Complex64]) -> Vec<Complex64> {
        let mut spectrum = unitary_dft(data, false);
        for (p, x) in spectrum.iter_mut().enumerate() {
            if self.overlap[p] == 0.0 {
                *x = Complex64::new(0.0, 0.0);
            }
        }
        unitary_dft(&spectrum, true)
    }

    /// `|| (I - P) psi ||`: distance of the data from the set of exact samples.
    /// Always zero when undersampled.
    pub fn consistency_residual(&self, data: &[Complex64]) -> Result<f64> {
        self.check_len(data)?;
        if self.regime() == Regime::Undersampled {
            return Ok(0.0);
        }
        let projected = self.project(data);
        let diff: Vec<_> = data.iter().zip(&projected).map(|(a, b)| a - b).collect();
        Ok(norm2(&diff))
    }

    /// Interpolant `Phi(z) = sum_l (B^{-1} zeta)_l <z | z_l>` taking the values `zeta`
    /// at the frame points. Oversampled data must lie in the range of `T`.
    pub fn covariant_interpolant(&self, zeta: &[Complex64]) -> Result<CovariantInterpolant> {
        self.check_len(zeta)?;
        let gamma = match self.regime() {
            Regime::Oversampled => {
                let residual = self.consistency_residual(zeta)?;
                let bound = 1e-10 * norm2(zeta);
                if residual > bound {
                    return Err(self.regime_error(
                        "covariant_interpolate",
                        &format!(
                            " (data are not samples of any state: residual {residual:e} exceeds {bound:e})"
                        ),
                    ));
                }
                self.kernel.pinv_apply(zeta, DEFAULT_TOLERANCE)?
            }
            _ => self.kernel.solve(zeta, DEFAULT_TOLERANCE)?,
        };
        Ok(CovariantInterpolant {
            two_s: self.spec.two_s,
            points: self.spec.points(),
            gamma,
        })
    }
}

/// Interpolant built from coherent states centred at the sample points.
#[derive(Debug, Clone)]
pub struct CovariantInterpolant {
    two_s: TwiceSpin,
    points: Vec<Complex64>,
    gamma: Vec<Complex64>,
}

impl CovariantInterpolant {
    /// Expansion weights on the coherent states.
    pub fn weights(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        ensure_finite(std::slice::from_ref(&z), "evaluation point")?;
        Ok(self
            .points
            .iter()
            .zip(&self.gamma)
            .map(|(p, g)| g * cs_overlap_unchecked(self.two_s.get(), z, *p))
            .sum())
    }
}

/// Dense frame matrix `T`.
pub fn frame_matrix(spec: &FrameSpec) -> DMatrix<Complex64> {
    Frame::new(*spec).frame_matrix()
}

/// Samples of `state` at the `n`-th roots of unity.
pub fn sample_state(state: &SpinState, n: usize) -> Result<SampleVector> {
    Frame::new(FrameSpec::new(state.two_s(), n)?).sample(state)
}

pub fn resolution_eigenvalues(spec: &FrameSpec) -> Result<Vec<f64>> {
    Frame::new(*spec)
        .resolution_eigenvalues()
        .map(<[f64]>::to_vec)
}

pub fn overlap_eigenvalues(spec: &FrameSpec) -> Vec<f64> {
    Frame::new(*spec).overlap_eigenvalues().to_vec()
}

pub fn overlap_kernel(spec: &FrameSpec) -> CirculantKernel {
    Frame::new(*spec).overlap_kernel().clone()
}

pub fn xi_kernel(spec: &FrameSpec, w: Complex64) -> Result<Complex64> {
    Frame::new(*spec).xi(w)
}

pub fn xi_hat_kernel(spec: &FrameSpec, w: Complex64) -> Result<Complex64> {
    Frame::new(*spec).xi_hat(w)
}

pub fn reconstruct(samples: &SampleVector, z: Complex64) -> Result<Complex64> {
    Frame::new(samples.spec).reconstruct(samples, z)
}

pub fn coefficients_from_samples(samples: &SampleVector) -> Result<SpinState> {
    Frame::new(samples.spec).coefficients(samples)
}

pub fn dual_filter(spec: &FrameSpec) -> Vec<Complex64> {
    Frame::new(*spec).dual_filter()
}

pub fn dual_data(samples: &SampleVector) -> Result<Vec<Complex64>> {
    Frame::new(samples.spec).dual_data(samples)
}

pub fn range_projector_apply(spec: &FrameSpec, data: &[Complex64]) -> Result<Vec<Complex64>> {
    Frame::new(*spec).range_projector_apply(data)
}

pub fn consistency_residual(samples: &SampleVector) -> Result<f64> {
    Frame::new(samples.spec).consistency_residual(&samples.values)
}

pub fn covariant_interpolate(
    spec: &FrameSpec,
    zeta: &[Complex64],
    z: Complex64,
) -> Result<Complex64> {
    Frame::new(*spec).covariant_interpolant(zeta)?.eval(z)
}
