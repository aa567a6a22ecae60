//! Python bindings: lists of complex numbers in, lists of complex numbers out.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use riemann_sampling::coherent::{bargmann_kernel as core_bargmann, SpinState};
use riemann_sampling::euler::{euler_sample as core_euler_sample, euler_to_holo, EulerSamples};
use riemann_sampling::multispin::{
    multi_sample as core_multi_sample, BandLimitedState, MultiSampleVector, MultiSpinKernel,
    ParallelsGrid,
};
use riemann_sampling::numerics::TwiceSpin;
use riemann_sampling::singlespin::{Frame, FrameSpec, SampleVector};
use riemann_sampling::Error;

fn py_err(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn state(coeffs: Vec<Complex64>) -> PyResult<SpinState> {
    if coeffs.is_empty() {
        return Err(PyValueError::new_err(
            "a spin state needs at least one coefficient",
        ));
    }
    let two_s = TwiceSpin::new(coeffs.len() as u32 - 1).map_err(py_err)?;
    SpinState::new(two_s, coeffs).map_err(py_err)
}

fn frame(two_s: u32, n: Option<usize>) -> PyResult<Frame> {
    let ts = TwiceSpin::new(two_s).map_err(py_err)?;
    let spec = FrameSpec::new(ts, n.unwrap_or(ts.dim())).map_err(py_err)?;
    Ok(Frame::new(spec))
}

fn samples(two_s: u32, values: Vec<Complex64>) -> PyResult<(Frame, SampleVector)> {
    let f = frame(two_s, Some(values.len()))?;
    let v = SampleVector::new(*f.spec(), values).map_err(py_err)?;
    Ok((f, v))
}

fn grid(j_max: u32, radii: Option<Vec<f64>>) -> PyResult<ParallelsGrid> {
    match radii {
        Some(r) => ParallelsGrid::new(j_max, r),
        None => ParallelsGrid::with_default_radii(j_max),
    }
    .map_err(py_err)
}

/// Majorana function of the state with coefficients `coeffs` at `z`.
#[pyfunction]
fn majorana(coeffs: Vec<Complex64>, z: Complex64) -> PyResult<Complex64> {
    state(coeffs)?.eval(z).map_err(py_err)
}

/// Values of the Majorana function at the `n`-th roots of unity (default `n = 2s + 1`).
#[pyfunction]
#[pyo3(signature = (coeffs, n=None))]
fn sample(coeffs: Vec<Complex64>, n: Option<usize>) -> PyResult<Vec<Complex64>> {
    let st = state(coeffs)?;
    let f = frame(st.two_s().get(), n)?;
    Ok(f.sample(&st).map_err(py_err)?.into_values())
}

/// Reconstruct the Majorana function at each of `zs` from root-of-unity samples.
#[pyfunction]
fn reconstruct(two_s: u32, values: Vec<Complex64>, zs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let (f, v) = samples(two_s, values)?;
    f.reconstruct_many(&v, &zs).map_err(py_err)
}

/// State coefficients recovered from root-of-unity samples (minimum norm when undersampled).
#[pyfunction]
fn coefficients(two_s: u32, values: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let (f, v) = samples(two_s, values)?;
    Ok(f.coefficients(&v).map_err(py_err)?.into_coeffs())
}

/// Eigenvalues of the `N x N` overlap kernel, in Fourier-mode order.
#[pyfunction]
fn overlap_eigenvalues(two_s: u32, n: usize) -> PyResult<Vec<f64>> {
    Ok(frame(two_s, Some(n))?.overlap_eigenvalues().to_vec())
}

/// Diagonal of the resolution operator; requires `N >= 2s + 1`.
#[pyfunction]
fn resolution_eigenvalues(two_s: u32, n: usize) -> PyResult<Vec<f64>> {
    Ok(frame(two_s, Some(n))?
        .resolution_eigenvalues()
        .map_err(py_err)?
        .to_vec())
}

/// Reconstruction filter taps.
#[pyfunction]
fn dual_filter(two_s: u32, n: usize) -> PyResult<Vec<Complex64>> {
    Ok(frame(two_s, Some(n))?.dual_filter())
}

/// Samples of a band-limited state on the parallels grid.
#[pyfunction]
#[pyo3(signature = (j_max, coeffs, radii=None))]
fn multi_sample(
    j_max: u32,
    coeffs: Vec<Complex64>,
    radii: Option<Vec<f64>>,
) -> PyResult<Vec<Complex64>> {
    let st = BandLimitedState::new(j_max, coeffs).map_err(py_err)?;
    let g = grid(j_max, radii)?;
    Ok(core_multi_sample(&st, &g)
        .map_err(py_err)?
        .values()
        .to_vec())
}

/// Band-limited coefficients recovered from parallels-grid samples.
#[pyfunction]
#[pyo3(signature = (j_max, values, radii=None))]
fn multi_coefficients(
    j_max: u32,
    values: Vec<Complex64>,
    radii: Option<Vec<f64>>,
) -> PyResult<Vec<Complex64>> {
    let g = grid(j_max, radii)?;
    let kernel = MultiSpinKernel::new(&g).map_err(py_err)?;
    let v = MultiSampleVector::new(g, values).map_err(py_err)?;
    Ok(kernel.coefficients(&v).map_err(py_err)?.coeffs().to_vec())
}

/// Condition number of the parallels-grid kernel.
#[pyfunction]
#[pyo3(signature = (j_max, radii=None))]
fn multi_condition_number(j_max: u32, radii: Option<Vec<f64>>) -> PyResult<f64> {
    let g = grid(j_max, radii)?;
    Ok(MultiSpinKernel::with_tolerance(&g, 0.0)
        .map_err(py_err)?
        .condition_number())
}

/// Euler-picture samples of an integer-spin state on the parallel `theta0`.
#[pyfunction]
fn euler_sample(coeffs: Vec<Complex64>, theta0: f64) -> PyResult<Vec<Complex64>> {
    let st = state(coeffs)?;
    Ok(core_euler_sample(&st, theta0)
        .map_err(py_err)?
        .values()
        .to_vec())
}

/// Majorana samples at the roots of unity from Euler samples on `theta0`.
#[pyfunction]
#[pyo3(signature = (j, theta0, values, tol=1e-12))]
fn euler_to_majorana(
    j: u32,
    theta0: f64,
    values: Vec<Complex64>,
    tol: f64,
) -> PyResult<Vec<Complex64>> {
    let e = EulerSamples::new(j, theta0, values).map_err(py_err)?;
    Ok(euler_to_holo(&e, tol).map_err(py_err)?.into_values())
}

/// Overlap between a spin-`j` Euler state at `(theta, phi)` and the coherent state at `z`.
#[pyfunction]
fn bargmann_kernel(j: u32, theta: f64, phi: f64, z: Complex64) -> PyResult<Complex64> {
    core_bargmann(j, theta, phi, z).map_err(py_err)
}

#[pymodule]
fn pyriemann(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(majorana, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(resolution_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(dual_filter, m)?)?;
    m.add_function(wrap_pyfunction!(multi_sample, m)?)?;
    m.add_function(wrap_pyfunction!(multi_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(multi_condition_number, m)?)?;
    m.add_function(wrap_pyfunction!(euler_sample, m)?)?;
    m.add_function(wrap_pyfunction!(euler_to_majorana, m)?)?;
    m.add_function(wrap_pyfunction!(bargmann_kernel, m)?)?;
    Ok(())
}
