//! Spin states, their Majorana functions and spin coherent state overlaps.
//!
//! A state of spin `s` is stored as the `2s + 1` coefficients `a_n`, `n = 0..=2s`,
//! where slot `n` holds the amplitude of `m = n - s`. Its Majorana function is
//!
//! ```text
//! psi(z) = (1 + |z|^2)^{-s} sum_n a_n binom(2s, n)^{1/2} conj(z)^n
//! ```
//!
//! All evaluators keep the normalisation inside the sum so that large `|z|`
//! or large spin do not overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{binom, ln_binom, norm2, TwiceSpin};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpinState", into = "RawSpinState")]
pub struct SpinState {
    two_s: TwiceSpin,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpinState {
    two_s: u32,
    coeffs: Vec<Complex64>,
}

impl TryFrom<RawSpinState> for SpinState {
    type Error = Error;
    fn try_from(raw: RawSpinState) -> Result<Self> {
        SpinState::new(TwiceSpin::new(raw.two_s)?, raw.coeffs)
    }
}

impl From<SpinState> for RawSpinState {
    fn from(s: SpinState) -> Self {
        RawSpinState {
            two_s: s.two_s.get(),
            coeffs: s.coeffs,
        }
    }
}

impl SpinState {
    pub fn new(two_s: TwiceSpin, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != two_s.dim() {
            return Err(Error::Shape(format!(
                "spin state with two_s = {} needs {} coefficients, got {}",
                two_s.get(),
                two_s.dim(),
                coeffs.len()
            )));
        }
        ensure_finite(&coeffs, "spin state coefficients")?;
        Ok(Self { two_s, coeffs })
    }

    pub fn zeros(two_s: TwiceSpin) -> Self {
        Self {
            two_s,
            coeffs: vec![Complex64::new(0.0, 0.0); two_s.dim()],
        }
    }

    /// The basis state with a single unit coefficient in slot `n`.
    pub fn basis(two_s: TwiceSpin, n: usize) -> Result<Self> {
        if n >= two_s.dim() {
            return Err(Error::IndexOutOfRange {
                index: n as i64,
                max: two_s.get() as i64,
            });
        }
        let mut s = Self::zeros(two_s);
        s.coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn two_s(&self) -> TwiceSpin {
        self.two_s
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.coeffs)
    }

    /// Coefficients multiplied by `binom(2s, n)^{1/2}`: the polynomial
    /// coefficients of the Majorana function.
    pub fn polynomial_coeffs(&self) -> Vec<Complex64> {
        let two_s = self.two_s.get();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * binom(two_s, n as i64).sqrt())
            .collect()
    }

    /// `psi(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z)?;
        Ok(normalized_series(
            &self.polynomial_coeffs(),
            self.two_s.get(),
            z.conj(),
            z.norm_sqr(),
        ))
    }

    /// `psi` at many points, reusing the polynomial coefficients.
    pub fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        ensure_finite(zs, "evaluation points")?;
        let poly = self.polynomial_coeffs();
        let two_s = self.two_s.get();
        Ok(zs
            .iter()
            .map(|z| normalized_series(&poly, two_s, z.conj(), z.norm_sqr()))
            .collect())
    }
}

fn check_point(z: Complex64) -> Result<()> {
    ensure_finite(std::slice::from_ref(&z), "evaluation point")
}

/// `(1 + |z|^2)^{-s} sum_n h_n x^n` for `n = 0..=2s`, with `z_abs2 = |z|^2`.
///
/// For `|x| > 1` the polynomial is evaluated in `1/x` and the leading power
/// is folded into the normaliser in log space.
pub(crate) fn normalized_series(
    h: &[Complex64],
    two_s: u32,
    x: Complex64,
    z_abs2: f64,
) -> Complex64 {
    let s = f64::from(two_s) / 2.0;
    let ax = x.norm();
    if ax <= 1.0 {
        let p = h
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
        p * (-s * z_abs2.ln_1p()).exp()
    } else {
        let u = x.inv();
        let p = h
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c);
        let phase = (x / ax).powi(two_s as i32);
        p * phase * (f64::from(two_s) * ax.ln() - s * z_abs2.ln_1p()).exp()
    }
}

/// `(1 + |z|^2)^{-s} sum_{n=0}^{2s} x^n` using the geometric closed form away
/// from `x = 1`.
pub(crate) fn normalized_geometric(two_s: u32, x: Complex64, z_abs2: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if (one - x).norm() < 0.25 {
        let h = vec![one; two_s as usize + 1];
        return normalized_series(&h, two_s, x, z_abs2);
    }
    let s = f64::from(two_s) / 2.0;
    let terms = two_s as i32 + 1;
    let ax = x.norm();
    if ax <= 1.0 {
        (one - x.powi(terms)) / (one - x) * (-s * z_abs2.ln_1p()).exp()
    } else {
        let u = x.inv();
        let sum = (one - u.powi(terms)) / (one - u);
        let phase = (x / ax).powi(two_s as i32);
        sum * phase * (f64::from(two_s) * ax.ln() - s * z_abs2.ln_1p()).exp()
    }
}

/// Unnormalised monomial `binom(2s, n)^{1/2} conj(z)^n`.
pub fn upsilon(two_s: TwiceSpin, n: usize, z: Complex64) -> Result<Complex64> {
    check_point(z)?;
    if n >= two_s.dim() {
        return Err(Error::IndexOutOfRange {
            index: n as i64,
            max: two_s.get() as i64,
        });
    }
    Ok(z.conj().powu(n as u32) * binom(two_s.get(), n as i64).sqrt())
}

/// `psi(z)` for `state`.
pub fn majorana_eval(state: &SpinState, z: Complex64) -> Result<Complex64> {
    state.eval(z)
}

/// `<z | s, n - s>`: the Majorana function of the basis state in slot `n`.
pub fn coherent_component(two_s: TwiceSpin, n: usize, z: Complex64) -> Result<Complex64> {
    check_point(z)?;
    if n >= two_s.dim() {
        return Err(Error::IndexOutOfRange {
            index: n as i64,
            max: two_s.get() as i64,
        });
    }
    Ok(coherent_component_unchecked(two_s.get(), n, z))
}

pub(crate) fn coherent_component_unchecked(two_s: u32, n: usize, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let s = f64::from(two_s) / 2.0;
    let log_mag = 0.5 * ln_binom(two_s, n as i64) + n as f64 * r.ln() - s * (r * r).ln_1p();
    (z.conj() / r).powi(n as i32) * log_mag.exp()
}

/// Overlap `<z|w> = (1 + w conj(z))^{2s} (1 + |z|^2)^{-s} (1 + |w|^2)^{-s}`.
pub fn cs_overlap(two_s: TwiceSpin, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_point(z)?;
    check_point(w)?;
    Ok(cs_overlap_unchecked(two_s.get(), z, w))
}

pub(crate) fn cs_overlap_unchecked(two_s: u32, z: Complex64, w: Complex64) -> Complex64 {
    let base = (1.0 + w * z.conj()) / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt();
    base.powi(two_s as i32)
}

/// `kappa(z, w) = (1 + w conj(z))^2 / ((1 + |z|^2)(1 + |w|^2))`, the spin-1 overlap.
pub(crate) fn kappa(z: Complex64, w: Complex64) -> Complex64 {
    let num = 1.0 + w * z.conj();
    num * num / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr()))
}

/// Below this distance from 1, `multi_overlap` sums the powers explicitly.
const GEOMETRIC_SWITCH: f64 = 1e-2;

/// Overlap of band-limited coherent states: `(J + 1)^{-1} sum_{s=0}^{J} kappa^s`.
pub fn multi_overlap(j_max: u32, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_point(z)?;
    check_point(w)?;
    Ok(multi_overlap_unchecked(j_max, z, w))
}

pub(crate) fn multi_overlap_unchecked(j_max: u32, z: Complex64, w: Complex64) -> Complex64 {
    geometric_mean_of_powers(kappa(z, w), j_max)
}

pub(crate) fn geometric_mean_of_powers(k: Complex64, j_max: u32) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let count = f64::from(j_max) + 1.0;
    if (one - k).norm() < GEOMETRIC_SWITCH {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = one;
        for _ in 0..=j_max {
            acc += p;
            p *= k;
        }
        acc / count
    } else {
        (one - k.powi(j_max as i32 + 1)) / ((one - k) * count)
    }
}

/// Generating function of the `m = 0` Euler-picture components:
///
/// ```text
/// (1 + |z|^2)^{-j} sqrt((2j)!) / (2^j j!) (sin(t) e^{-i p} + 2 z cos(t) - z^2 sin(t) e^{i p})^j
/// ```
///
/// which equals `sum_m <t, p | j, m> <j, m | z>`.
pub fn bargmann_kernel(j: u32, theta: f64, phi: f64, z: Complex64) -> Result<Complex64> {
    check_point(z)?;
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::NonFinite("Bargmann kernel angles"));
    }
    TwiceSpin::from_integer_spin(j)?;
    let e = Complex64::from_polar(1.0, phi);
    let (st, ct) = theta.sin_cos();
    let poly = st * e.conj() + 2.0 * z * ct - z * z * st * e;
    let base = poly / (1.0 + z.norm_sqr());
    let prefactor =
        (0.5 * ln_binom(2 * j, i64::from(j)) - f64::from(j) * std::f64::consts::LN_2).exp();
    Ok(base.powi(j as i32) * prefactor)
}
