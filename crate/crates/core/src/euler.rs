//! Conversion between samples of the Majorana function at the roots of
//! unity and samples of the Euler-angle picture `Phi(theta, phi) =
//! sum_m a_m <theta, phi | j, m>` on the parallel `theta = theta0`.
//!
//! Only integer spin `j` with `N = 2j + 1` points is supported. The
//! conversion matrix factors as a diagonal times a circulant, so both
//! directions cost a handful of DFTs. On the equator the circulant loses
//! every odd Fourier mode and the map is no longer invertible; see
//! [`equator_alias`] for what can still be recovered there.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circulant::{CirculantKernel, DEFAULT_TOLERANCE};
use crate::coherent::SpinState;
use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{ln_binom, unit_root, unitary_dft, TwiceSpin};
use crate::singlespin::{Frame, FrameSpec, SampleVector};

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if theta.is_finite() && phi.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("polar angles"))
    }
}

fn check_parallel(theta0: f64) -> Result<()> {
    if !theta0.is_finite() {
        return Err(Error::NonFinite("theta0"));
    }
    if theta0 <= 0.0 || theta0 >= PI {
        return Err(Error::InvalidParameter(format!(
            "theta0 = {theta0} must lie strictly between the poles"
        )));
    }
    Ok(())
}

fn check_order(j: u32, m: i64) -> Result<()> {
    if m.unsigned_abs() > u64::from(j) {
        return Err(Error::IndexOutOfRange {
            index: m,
            max: i64::from(j),
        });
    }
    Ok(())
}

/// Small Wigner matrix element `d^j_{m0}(theta)` (Condon-Shortley phase).
pub fn wigner_d_m0(j: u32, m: i64, theta: f64) -> Result<f64> {
    check_order(j, m)?;
    if !theta.is_finite() {
        return Err(Error::NonFinite("polar angle"));
    }
    Ok(wigner_d_m0_unchecked(j, m, theta))
}

fn wigner_d_m0_unchecked(j: u32, m: i64, theta: f64) -> f64 {
    let ma = m.unsigned_abs() as u32;
    let sign = if m < 0 && ma % 2 == 1 { -1.0 } else { 1.0 };
    let (st, ct) = theta.sin_cos();
    let mut seed = 1.0;
    for i in 1..=ma {
        let fi = f64::from(i);
        seed *= -((2.0 * fi - 1.0) / (2.0 * fi)).sqrt() * st;
    }
    if j == ma {
        return sign * seed;
    }
    let mf = f64::from(ma);
    let mut prev = seed;
    let mut cur = (2.0 * mf + 1.0).sqrt() * ct * seed;
    for l in ma + 2..=j {
        let lf = f64::from(l);
        let next = ((2.0 * lf - 1.0) * ct * cur - ((lf - 1.0).powi(2) - mf * mf).sqrt() * prev)
            / (lf * lf - mf * mf).sqrt();
        prev = cur;
        cur = next;
    }
    sign * cur
}

/// `<theta, phi | j, m> = e^{i m phi} d^j_{m0}(theta)`.
pub fn euler_component(j: u32, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    check_order(j, m)?;
    check_angles(theta, phi)?;
    Ok(euler_component_unchecked(j, m, theta, phi))
}

fn euler_component_unchecked(j: u32, m: i64, theta: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, m as f64 * phi) * wigner_d_m0_unchecked(j, m, theta)
}

/// Orthonormal spherical harmonic `Y_j^m(theta, phi)`.
pub fn sph_harm(j: u32, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    Ok(euler_component(j, m, theta, phi)? * ((2.0 * f64::from(j) + 1.0) / (4.0 * PI)).sqrt())
}

/// Samples of the Euler picture at `phi_k = -2 pi k / N` on the parallel `theta0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEulerSamples", into = "RawEulerSamples")]
pub struct EulerSamples {
    j: u32,
    theta0: f64,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEulerSamples {
    j: u32,
    theta0: f64,
    values: Vec<Complex64>,
}

impl TryFrom<RawEulerSamples> for EulerSamples {
    type Error = Error;
    fn try_from(raw: RawEulerSamples) -> Result<Self> {
        EulerSamples::new(raw.j, raw.theta0, raw.values)
    }
}

impl From<EulerSamples> for RawEulerSamples {
    fn from(s: EulerSamples) -> Self {
        RawEulerSamples {
            j: s.j,
            theta0: s.theta0,
            values: s.values,
        }
    }
}

impl EulerSamples {
    pub fn new(j: u32, theta0: f64, values: Vec<Complex64>) -> Result<Self> {
        TwiceSpin::from_integer_spin(j)?;
        check_parallel(theta0)?;
        if values.len() != 2 * j as usize + 1 {
            return Err(Error::Shape(format!(
                "spin {j} needs {} Euler samples, got {}",
                2 * j + 1,
                values.len()
            )));
        }
        ensure_finite(&values, "Euler samples")?;
        Ok(Self { j, theta0, values })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Azimuth of sample `k`.
    pub fn phi(&self, k: usize) -> f64 {
        sample_azimuth(k, 2 * self.j as usize + 1)
    }
}

fn sample_azimuth(k: usize, n: usize) -> f64 {
    -2.0 * PI * k as f64 / n as f64
}

/// Euler-picture samples of `state` (integer spin) on the parallel `theta0`.
pub fn euler_sample(state: &SpinState, theta0: f64) -> Result<EulerSamples> {
    let j = integer_spin(state.two_s())?;
    check_parallel(theta0)?;
    let n = 2 * j as usize + 1;
    let values = (0..n)
        .map(|k| {
            let phi = sample_azimuth(k, n);
            state
                .coeffs()
                .iter()
                .enumerate()
                .map(|(idx, a)| {
                    a * euler_component_unchecked(j, idx as i64 - i64::from(j), theta0, phi)
                })
                .sum()
        })
        .collect();
    EulerSamples::new(j, theta0, values)
}

fn integer_spin(two_s: TwiceSpin) -> Result<u32> {
    two_s.integer_spin().ok_or_else(|| {
        Error::InvalidParameter(format!("the Euler picture needs integer spin, got {two_s}"))
    })
}

/// The matrix taking dual data to Euler samples, stored as
/// `diag(lambda) * circulant(q)`.
#[derive(Debug, Clone)]
pub struct DiscreteBargmann {
    j: u32,
    theta0: f64,
    diagonal: Vec<Complex64>,
    circulant: CirculantKernel,
}

impl DiscreteBargmann {
    pub fn new(j: u32, theta0: f64) -> Result<Self> {
        TwiceSpin::from_integer_spin(j)?;
        check_parallel(theta0)?;
        let n = 2 * j as usize + 1;
        let (st, ct) = theta0.sin_cos();
        let prefactor =
            (0.5 * ln_binom(2 * j, i64::from(j)) - f64::from(2 * j) * std::f64::consts::LN_2).exp()
                * st.powi(j as i32);
        let diagonal = (0..n)
            .map(|k| unit_root((j as usize * k % n) as i64, n) * prefactor)
            .collect();
        let cot = ct / st;
        let q = (0..n)
            .map(|l| {
                let e = unit_root(l as i64, n);
                (1.0 + 2.0 * cot * e - e * e).powi(j as i32)
            })
            .collect();
        Ok(Self {
            j,
            theta0,
            diagonal,
            circulant: CirculantKernel::new(q)?,
        })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diagonal
    }

    pub fn circulant(&self) -> &CirculantKernel {
        &self.circulant
    }

    /// Eigenvalues of the circulant factor.
    pub fn omega(&self) -> &[Complex64] {
        self.circulant.eigenvalues()
    }

    /// Circulant modes with `|omega_k| <= tol * max |omega|`.
    pub fn dead_modes(&self, tol: f64) -> Vec<usize> {
        let threshold = tol * self.circulant.max_abs_eigenvalue();
        self.omega()
            .iter()
            .enumerate()
            .filter(|(_, w)| w.norm() <= threshold)
            .map(|(k, _)| k)
            .collect()
    }

    /// Dense product of the two factors.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.diagonal.len();
        DMatrix::from_fn(n, n, |k, l| self.diagonal[k] * self.circulant.entry(k, l))
    }
}

/// Dense matrix `K_{kl} = sum_m <theta0, phi_k | j, m> <j, m | z_l>` from its closed form.
pub fn bargmann_matrix(j: u32, theta0: f64, n: usize) -> Result<DMatrix<Complex64>> {
    check_critical(j, n)?;
    check_parallel(theta0)?;
    let (st, ct) = theta0.sin_cos();
    let prefactor =
        (0.5 * ln_binom(2 * j, i64::from(j)) - f64::from(2 * j) * std::f64::consts::LN_2).exp();
    Ok(DMatrix::from_fn(n, n, |k, l| {
        let z = unit_root(l as i64, n);
        let term =
            st * unit_root(k as i64, n) + 2.0 * ct * z - st * unit_root((2 * l + n - k) as i64, n);
        term.powi(j as i32) * prefactor
    }))
}

fn check_critical(j: u32, n: usize) -> Result<()> {
    TwiceSpin::from_integer_spin(j)?;
    if n != 2 * j as usize + 1 {
        return Err(Error::InvalidParameter(format!(
            "the Euler picture uses N = 2j + 1 = {} points, got {n}",
            2 * j + 1
        )));
    }
    Ok(())
}

/// Eigenvalues `omega_k` of the circulant factor.
pub fn omega_eigens(j: u32, theta0: f64, n: usize) -> Result<Vec<Complex64>> {
    check_critical(j, n)?;
    Ok(DiscreteBargmann::new(j, theta0)?.omega().to_vec())
}

fn check_holomorphic(samples: &SampleVector) -> Result<u32> {
    let spec = samples.spec();
    let j = integer_spin(spec.two_s)?;
    check_critical(j, spec.n)?;
    if !spec.circle.is_unit() || spec.circle.phase() != 0.0 {
        return Err(Error::InvalidParameter(
            "Euler conversion needs samples at the roots of unity".into(),
        ));
    }
    Ok(j)
}

/// Euler samples on `theta0` from Majorana samples at the roots of unity.
pub fn holo_to_euler(samples: &SampleVector, theta0: f64) -> Result<EulerSamples> {
    let j = check_holomorphic(samples)?;
    let frame = Frame::new(*samples.spec());
    let gamma = frame
        .overlap_kernel()
        .solve(samples.values(), DEFAULT_TOLERANCE)?;
    let k = DiscreteBargmann::new(j, theta0)?;
    let q_gamma = k.circulant.matvec(&gamma)?;
    let values = q_gamma
        .iter()
        .zip(&k.diagonal)
        .map(|(x, d)| x * d)
        .collect();
    EulerSamples::new(j, theta0, values)
}

/// Majorana samples at the roots of unity from Euler samples, rejecting
/// parallels where modes with `|omega_k| <= tol * max|omega|` make the
/// map non-invertible.
pub fn euler_to_holo(euler: &EulerSamples, tol: f64) -> Result<SampleVector> {
    let k = DiscreteBargmann::new(euler.j, euler.theta0)?;
    let dead = k.dead_modes(tol);
    if !dead.is_empty() {
        return Err(Error::DeadModes { modes: dead });
    }
    let spec = FrameSpec::new(TwiceSpin::from_integer_spin(euler.j)?, euler.values.len())?;
    let frame = Frame::new(spec);
    let unscaled: Vec<_> = euler
        .values
        .iter()
        .zip(&k.diagonal)
        .map(|(x, d)| x / d)
        .collect();
    let mut spectrum = unitary_dft(&unscaled, false);
    for ((x, l), w) in spectrum
        .iter_mut()
        .zip(frame.overlap_eigenvalues())
        .zip(k.omega())
    {
        *x *= *l / w;
    }
    SampleVector::new(spec, unitary_dft(&spectrum, true))
}

/// What survives of a state sampled on the equator.
#[derive(Debug, Clone, PartialEq)]
pub struct EquatorAlias {
    /// Least-squares state with all odd-`n` coefficients set to zero.
    pub state: SpinState,
    /// Coefficient slots (odd `n`) that the equator cannot see.
    pub unrecovered: Vec<usize>,
    /// Norm of the part of the data the fitted state does not explain.
    pub residual: f64,
}

/// Recover the even-`n` coefficients from Euler samples.
///
/// The columns of the sampled harmonic matrix are mutually orthogonal, so
/// the least-squares fit is a column-wise projection. On the equator the
/// odd columns vanish and those coefficients are reported as unrecovered.
pub fn equator_alias(euler: &EulerSamples) -> Result<EquatorAlias> {
    let j = euler.j;
    let n = 2 * j as usize + 1;
    let two_s = TwiceSpin::from_integer_spin(j)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let mut unrecovered = Vec::new();
    for (idx, slot) in coeffs.iter_mut().enumerate() {
        if idx % 2 == 1 {
            unrecovered.push(idx);
            continue;
        }
        let m = idx as i64 - i64::from(j);
        let column: Vec<Complex64> = (0..n)
            .map(|k| euler_component_unchecked(j, m, euler.theta0, euler.phi(k)))
            .collect();
        let norm2: f64 = column.iter().map(|c| c.norm_sqr()).sum();
        if norm2 > 0.0 {
            let dot: Complex64 = column
                .iter()
                .zip(&euler.values)
                .map(|(c, v)| c.conj() * v)
                .sum();
            *slot = dot / norm2;
        }
    }
    let state = SpinState::new(two_s, coeffs)?;
    let refit = euler_sample(&state, euler.theta0)?;
    let residual = refit
        .values
        .iter()
        .zip(&euler.values)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(EquatorAlias {
        state,
        unrecovered,
        residual,
    })
}
