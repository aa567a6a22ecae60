//! Sampling spin states on the Riemann sphere.
//!
//! A spin-`s` state is identified with its Majorana function, a polynomial
//! of degree `2s` in `conj(z)` times `(1 + |z|^2)^{-s}`. This crate samples
//! such functions at roots of unity (or any centred circle) and rebuilds
//! them from the samples, exactly whenever there are at least `2s + 1`
//! points and as the minimum-norm fit otherwise. The same machinery covers
//! band-limited mixtures of spins sampled on parallels and the change of
//! picture to spherical-harmonic (Euler angle) samples.
//!
//! ```
//! use num_complex::Complex64;
//! use riemann_sampling::{coherent::SpinState, numerics::TwiceSpin, singlespin};
//!
//! let two_s = TwiceSpin::new(3).unwrap();
//! let coeffs = vec![Complex64::new(0.5, 0.0); 4];
//! let state = SpinState::new(two_s, coeffs).unwrap();
//! let samples = singlespin::sample_state(&state, 5).unwrap();
//! let z = Complex64::new(0.3, 1.7);
//! let err = (singlespin::reconstruct(&samples, z).unwrap() - state.eval(z).unwrap()).norm();
//! assert!(err < 1e-12);
//! ```

pub mod circulant;
pub mod coherent;
pub mod error;
pub mod euler;
pub mod multispin;
pub mod numerics;
pub mod rfm;
pub mod singlespin;

pub use error::{Error, Result};
pub use num_complex::Complex64;
