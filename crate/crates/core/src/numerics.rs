//! Scalar helpers shared by every other module: spin bookkeeping, binomial
//! coefficients that stay accurate well past `u64` range, exact roots of unity
//! and the unitary discrete Fourier transform.
//!
//! The forward transform is `(F v)_n = N^{-1/2} sum_m e^{+2 pi i n m / N} v_m`;
//! the inverse uses the opposite sign. Both are unitary.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Twice the spin, so that half-integer spins stay integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct TwiceSpin(u32);

impl TwiceSpin {
    /// Largest supported value; beyond it `binom(2s, s)^{1/2}` leaves `f64` range.
    pub const MAX: u32 = 1024;

    pub fn new(two_s: u32) -> Result<Self> {
        if two_s > Self::MAX {
            return Err(Error::InvalidParameter(format!(
                "two_s = {two_s} exceeds the supported maximum {}",
                Self::MAX
            )));
        }
        Ok(Self(two_s))
    }

    /// Spin `j` given as an integer.
    pub fn from_integer_spin(j: u32) -> Result<Self> {
        Self::new(
            j.checked_mul(2)
                .ok_or_else(|| Error::InvalidParameter(format!("spin {j} is too large")))?,
        )
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Dimension `2s + 1` of the spin space.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn spin(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn integer_spin(self) -> Option<u32> {
        self.0.is_multiple_of(2).then_some(self.0 / 2)
    }
}

impl TryFrom<u32> for TwiceSpin {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TwiceSpin> for u32 {
    fn from(v: TwiceSpin) -> u32 {
        v.0
    }
}

impl fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

const EXACT_BINOM_LIMIT: u32 = 64;

/// Exact binomial coefficient for `n <= 64`; `None` for larger `n`.
/// Entries outside `0 <= k <= n` are `Some(0)`.
pub fn binom_exact(n: u32, k: i64) -> Option<u128> {
    if n > EXACT_BINOM_LIMIT {
        return None;
    }
    if k < 0 || k > i64::from(n) {
        return Some(0);
    }
    Some(exact_binom(n, k as u32))
}

fn exact_binom(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * u128::from(n - i) / u128::from(i + 1);
    }
    c
}

/// `ln(x!) - [(x + 1/2) ln x - x + ln(2 pi)/2]`, the Stirling remainder.
fn stirling_remainder(x: u32) -> f64 {
    let xf = f64::from(x);
    if x < 16 {
        let fact: u64 = (1..=u64::from(x)).product();
        return (fact as f64).ln() - (xf + 0.5) * xf.ln() + xf - 0.5 * (2.0 * PI).ln();
    }
    let x2 = xf * xf;
    (1.0 / 12.0
        - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2)
        / xf
}

/// Natural log of the binomial coefficient; `-inf` outside `0 <= k <= n`.
pub fn ln_binom(n: u32, k: i64) -> f64 {
    if k < 0 || k > i64::from(n) {
        return f64::NEG_INFINITY;
    }
    let k = k as u32;
    if n <= EXACT_BINOM_LIMIT {
        return (exact_binom(n, k) as f64).ln();
    }
    let m = n - k;
    if k == 0 || m == 0 {
        return 0.0;
    }
    let (nf, kf, mf) = (f64::from(n), f64::from(k), f64::from(m));
    kf * (mf / kf).ln_1p()
        + mf * (kf / mf).ln_1p()
        + 0.5 * (nf / (2.0 * PI * kf * mf)).ln()
        + stirling_remainder(n)
        - stirling_remainder(k)
        - stirling_remainder(m)
}

/// Binomial coefficient as `f64`; exact for `n <= 64`, relative error below
/// `1e-13` beyond. Returns `0` outside `0 <= k <= n`.
pub fn binom(n: u32, k: i64) -> f64 {
    if k < 0 || k > i64::from(n) {
        return 0.0;
    }
    if n <= EXACT_BINOM_LIMIT {
        return exact_binom(n, k as u32) as f64;
    }
    ln_binom(n, k).exp()
}

/// `e^{2 pi i k / n}`, exact at multiples of a quarter turn.
pub fn unit_root(k: i64, n: usize) -> Complex64 {
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    if (4 * k) % n_i == 0 {
        return match 4 * k / n_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * (k as f64) / (n as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// The `n` points `e^{2 pi i k / n}`, `k = 0..n`.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n as i64).map(|k| unit_root(k, n)).collect()
}

fn twiddles(n: usize, inverse: bool) -> Vec<Complex64> {
    let sign = if inverse { -1 } else { 1 };
    (0..n as i64).map(|k| unit_root(sign * k, n)).collect()
}

/// Unitary DFT by direct summation. Serves as the reference the fast path is
/// checked against.
pub fn unitary_dft_reference(v: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let w = twiddles(n, inverse);
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|row| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, x) in v.iter().enumerate() {
                acc += w[(row * m) % n] * x;
            }
            acc * scale
        })
        .collect()
}

fn fft_radix2_in_place(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let w = twiddles(n, inverse);
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for t in 0..len / 2 {
                let a = data[start + t];
                let b = data[start + t + len / 2] * w[t * stride];
                data[start + t] = a + b;
                data[start + t + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Unitary DFT; power-of-two lengths of at least 8 take a radix-2 path.
pub fn unitary_dft(v: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = v.len();
    if n < 8 || !n.is_power_of_two() {
        return unitary_dft_reference(v, inverse);
    }
    let mut out = v.to_vec();
    fft_radix2_in_place(&mut out, inverse);
    let scale = 1.0 / (n as f64).sqrt();
    out.iter_mut().for_each(|x| *x *= scale);
    out
}

/// Euclidean norm of a complex vector.
pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus of `a - b`; `a` and `b` must have equal length.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials_are_exact() {
        assert_eq!(binom(4, 2), 6.0);
        assert_eq!(binom(64, 32), 1_832_624_140_942_590_534u64 as f64);
        assert_eq!(binom(5, -1), 0.0);
        assert_eq!(binom(5, 6), 0.0);
    }

    #[test]
    fn twice_spin_limits() {
        assert!(TwiceSpin::new(TwiceSpin::MAX).is_ok());
        assert!(TwiceSpin::new(TwiceSpin::MAX + 1).is_err());
        assert_eq!(TwiceSpin::new(3).unwrap().to_string(), "3/2");
        assert_eq!(TwiceSpin::new(4).unwrap().dim(), 5);
    }

    #[test]
    fn quarter_roots_are_exact() {
        let r = roots_of_unity(4);
        assert_eq!(r[1], Complex64::new(0.0, 1.0));
        assert_eq!(r[2], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn forward_dft_of_quarter_roots() {
        let v = roots_of_unity(4);
        let out = unitary_dft(&v, false);
        let expected = [0.0, 0.0, 0.0, 2.0].map(|x| Complex64::new(x, 0.0));
        assert!(max_abs_diff(&out, &expected) < 1e-15);
    }

    #[test]
    fn radix2_matches_reference() {
        for n in [8usize, 16, 64, 256] {
            let v: Vec<_> = (0..n)
                .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
                .collect();
            for inverse in [false, true] {
                let fast = unitary_dft(&v, inverse);
                let slow = unitary_dft_reference(&v, inverse);
                assert!(max_abs_diff(&fast, &slow) < 1e-12, "n = {n}");
            }
        }
    }
}
