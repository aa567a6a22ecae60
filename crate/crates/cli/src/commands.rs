use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riemann_sampling::coherent::SpinState;
use riemann_sampling::euler::{
    equator_alias, euler_sample, euler_to_holo, holo_to_euler, DiscreteBargmann,
};
use riemann_sampling::multispin::{
    band_dim, multi_overlap_kernel, multi_sample, BandLimitedState, MultiSpinKernel, ParallelsGrid,
    SINGULAR_TOLERANCE,
};
use riemann_sampling::numerics::{binom, norm2, TwiceSpin};
use riemann_sampling::singlespin::{Frame, FrameSpec, Regime};

use crate::error::{CliError, CliResult};
use crate::io::{num, read_document, Document, Table};

fn random_unit_vector(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = norm2(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub fn gen(two_s: Option<u32>, j_max: Option<u32>, seed: u64) -> CliResult<Document> {
    match (two_s, j_max) {
        (Some(two_s), None) => {
            let two_s = TwiceSpin::new(two_s)?;
            Ok(Document::State(SpinState::new(
                two_s,
                random_unit_vector(two_s.dim(), seed),
            )?))
        }
        (None, Some(j)) => {
            // validate before allocating (J + 1)^2 entries
            ParallelsGrid::with_default_radii(j)?;
            Ok(Document::Band(BandLimitedState::new(
                j,
                random_unit_vector(band_dim(j), seed),
            )?))
        }
        _ => Err(CliError::input("give exactly one of --two-s and --J")),
    }
}

pub struct SampleOptions {
    pub n: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub theta0: Option<f64>,
}

pub fn sample(input: &Path, opts: SampleOptions) -> CliResult<Document> {
    match read_document(input)? {
        Document::State(state) => {
            if opts.radii.is_some() {
                return Err(CliError::input(
                    "--radii applies to band-limited states only",
                ));
            }
            let dim = state.two_s().dim();
            if let Some(theta0) = opts.theta0 {
                if opts.n.is_some_and(|n| n != dim) {
                    return Err(CliError::input(format!(
                        "Euler sampling uses N = 2j + 1 = {dim} points"
                    )));
                }
                return Ok(Document::Euler(euler_sample(&state, theta0)?));
            }
            let spec = FrameSpec::new(state.two_s(), opts.n.unwrap_or(dim))?;
            Ok(Document::Samples(Frame::new(spec).sample(&state)?))
        }
        Document::Band(state) => {
            if opts.theta0.is_some() {
                return Err(CliError::input("--theta0 applies to spin states only"));
            }
            let j = state.j_max();
            if opts.n.is_some_and(|n| n != band_dim(j)) {
                return Err(CliError::input(format!(
                    "a band limit of {j} is sampled on exactly {} points",
                    band_dim(j)
                )));
            }
            let grid = match opts.radii {
                Some(r) => ParallelsGrid::new(j, r)?,
                None => ParallelsGrid::with_default_radii(j)?,
            };
            Ok(Document::MultiSamples(multi_sample(&state, &grid)?))
        }
        other => Err(CliError::input(format!("cannot sample a {}", other.kind()))),
    }
}

/// `n x n` square grid over `[-R, R]^2`, keeping points with `|z| <= R`, row-major.
pub fn disk_grid(n: usize, radius: f64) -> CliResult<Vec<Complex64>> {
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(CliError::input(format!(
            "--radius must be finite and non-negative, got {radius}"
        )));
    }
    let coord = |i: usize| {
        if n == 1 {
            0.0
        } else {
            -radius + 2.0 * radius * i as f64 / (n - 1) as f64
        }
    };
    let mut pts = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            let z = Complex64::new(coord(col), coord(row));
            if z.norm() <= radius * (1.0 + 1e-12) {
                pts.push(z);
            }
        }
    }
    Ok(pts)
}

pub struct Reconstruction {
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub abs_err: Option<Vec<f64>>,
}

impl Reconstruction {
    pub fn to_csv(&self) -> String {
        let mut header = vec!["z_re", "z_im", "psi_re", "psi_im"];
        if self.abs_err.is_some() {
            header.push("abs_err");
        }
        let mut table = Table::new(&header);
        for (i, (z, v)) in self.points.iter().zip(&self.values).enumerate() {
            let mut row = vec![num(z.re), num(z.im), num(v.re), num(v.im)];
            if let Some(err) = &self.abs_err {
                row.push(num(err[i]));
            }
            table.row(row);
        }
        table.finish()
    }

    pub fn to_json(&self) -> String {
        let mut obj = serde_json::json!({ "points": self.points, "values": self.values });
        if let Some(err) = &self.abs_err {
            obj["abs_err"] = serde_json::json!(err);
        }
        let mut s = obj.to_string();
        s.push('\n');
        s
    }
}

fn abs_errors(values: &[Complex64], reference: &[Complex64]) -> Vec<f64> {
    values
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).norm())
        .collect()
}

pub fn reconstruct(
    input: &Path,
    grid: usize,
    radius: f64,
    reference: Option<&Path>,
) -> CliResult<Reconstruction> {
    let points = disk_grid(grid, radius)?;
    let reference = reference.map(read_document).transpose()?;
    match read_document(input)? {
        Document::Samples(samples) => {
            let frame = Frame::new(*samples.spec());
            let values = frame.reconstruct_many(&samples, &points)?;
            let at_samples = frame.reconstruct_many(&samples, &samples.spec().points())?;
            let alias: Vec<_> = at_samples
                .iter()
                .zip(samples.values())
                .map(|(a, b)| a - b)
                .collect();
            eprintln!("regime={}", frame.regime());
            eprintln!("alias_residual={:e}", norm2(&alias));
            if frame.regime() == Regime::Oversampled {
                eprintln!(
                    "consistency_residual={:e}",
                    frame.consistency_residual(samples.values())?
                );
            }
            let abs_err = match reference {
                None => None,
                Some(Document::State(st)) if st.two_s() == samples.spec().two_s => {
                    Some(abs_errors(&values, &st.eval_many(&points)?))
                }
                Some(other) => {
                    return Err(CliError::input(format!(
                        "reference must be a spin state with two_s = {}, got a {}",
                        samples.spec().two_s.get(),
                        other.kind()
                    )))
                }
            };
            Ok(Reconstruction {
                points,
                values,
                abs_err,
            })
        }
        Document::MultiSamples(samples) => {
            let kernel = MultiSpinKernel::new(samples.grid())?;
            let values = kernel.reconstruction(&samples)?.eval_many(&points)?;
            eprintln!("J={}", samples.grid().j_max());
            eprintln!("condition={:e}", kernel.condition_number());
            let abs_err = match reference {
                None => None,
                Some(Document::Band(st)) if st.j_max() == samples.grid().j_max() => {
                    let exact = points
                        .iter()
                        .map(|z| st.eval(*z))
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(abs_errors(&values, &exact))
                }
                Some(other) => {
                    return Err(CliError::input(format!(
                        "reference must be a band-limited state with J = {}, got a {}",
                        samples.grid().j_max(),
                        other.kind()
                    )))
                }
            };
            Ok(Reconstruction {
                points,
                values,
                abs_err,
            })
        }
        Document::Euler(_) => Err(CliError::input(
            "Euler samples must be converted to Majorana samples first (see `convert`)",
        )),
        other => Err(CliError::input(format!(
            "cannot reconstruct from a {}",
            other.kind()
        ))),
    }
}

pub fn coeffs(input: &Path) -> CliResult<Document> {
    match read_document(input)? {
        Document::Samples(samples) => {
            let frame = Frame::new(*samples.spec());
            if frame.regime() == Regime::Undersampled {
                eprintln!("regime=undersampled: returning the minimum-norm state consistent with the samples");
            }
            Ok(Document::State(frame.coefficients(&samples)?))
        }
        Document::MultiSamples(samples) => {
            let kernel = MultiSpinKernel::new(samples.grid())?;
            eprintln!("condition={:e}", kernel.condition_number());
            Ok(Document::Band(kernel.coefficients(&samples)?))
        }
        other => Err(CliError::input(format!(
            "cannot recover coefficients from a {}",
            other.kind()
        ))),
    }
}

pub struct Filter {
    pub two_s: u32,
    pub n: usize,
    pub delta: Vec<Complex64>,
    pub reciprocal: Vec<f64>,
}

impl Filter {
    pub fn to_csv(&self) -> String {
        let mut table = Table::new(&["k", "delta_re", "delta_im", "reciprocal_eigenvalue"]);
        for (k, (d, m)) in self.delta.iter().zip(&self.reciprocal).enumerate() {
            table.row(vec![k.to_string(), num(d.re), num(d.im), num(*m)]);
        }
        table.finish()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::json!({
            "two_s": self.two_s,
            "n": self.n,
            "delta": self.delta,
            "reciprocal_eigenvalues": self.reciprocal,
        })
        .to_string();
        s.push('\n');
        s
    }
}

pub fn filter(two_s: u32, n: usize) -> CliResult<Filter> {
    let frame = Frame::new(FrameSpec::new(TwiceSpin::new(two_s)?, n)?);
    Ok(Filter {
        two_s,
        n,
        delta: frame.dual_filter(),
        reciprocal: frame.reciprocal_eigenvalues().to_vec(),
    })
}

fn dead_mode_error(j: u32, theta0: f64, tol: f64) -> CliResult<()> {
    let dead = DiscreteBargmann::new(j, theta0)?.dead_modes(tol);
    if dead.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = dead.iter().map(usize::to_string).collect();
    Err(CliError::Numerical(format!(
        "the Euler picture on theta0 = {theta0} is not invertible: omega modes {} are below {tol:e} times the largest \
         (odd modes vanish on the equator; `convert --equator-alias` recovers the even coefficients)",
        list.join(", ")
    )))
}

pub struct ConvertOptions {
    pub theta0: Option<f64>,
    pub tol: f64,
    pub equator_alias: bool,
}

pub fn convert(input: &Path, opts: ConvertOptions) -> CliResult<Document> {
    if !(opts.tol.is_finite() && opts.tol >= 0.0) {
        return Err(CliError::input(format!(
            "--tol must be finite and non-negative, got {}",
            opts.tol
        )));
    }
    match read_document(input)? {
        Document::Samples(samples) => {
            if opts.equator_alias {
                return Err(CliError::input("--equator-alias takes Euler samples"));
            }
            let theta0 = opts.theta0.unwrap_or(std::f64::consts::FRAC_PI_4);
            let j = samples.spec().two_s.integer_spin().ok_or_else(|| {
                CliError::input(format!(
                    "the Euler picture needs integer spin, got {}",
                    samples.spec().two_s
                ))
            })?;
            dead_mode_error(j, theta0, opts.tol)?;
            Ok(Document::Euler(holo_to_euler(&samples, theta0)?))
        }
        Document::Euler(euler) => {
            if opts.theta0.is_some() {
                return Err(CliError::input(
                    "Euler samples carry their own theta0; drop --theta0",
                ));
            }
            if opts.equator_alias {
                let fit = equator_alias(&euler)?;
                let slots: Vec<String> = fit.unrecovered.iter().map(usize::to_string).collect();
                eprintln!("unrecovered={}", slots.join(","));
                eprintln!("residual={:e}", fit.residual);
                return Ok(Document::State(fit.state));
            }
            dead_mode_error(euler.j(), euler.theta0(), opts.tol)?;
            Ok(Document::Samples(euler_to_holo(&euler, opts.tol)?))
        }
        other => Err(CliError::input(format!(
            "cannot convert a {}",
            other.kind()
        ))),
    }
}

fn seconds(start: Instant) -> String {
    format!("{:.6e}", start.elapsed().as_secs_f64())
}

/// Spectrum and timings of the single-spin frame for `N` in `n_min..=n_max`.
pub fn bench_single(two_s: u32, n_min: usize, n_max: usize) -> CliResult<String> {
    let ts = TwiceSpin::new(two_s)?;
    let mut table = Table::new(&[
        "two_s",
        "n",
        "regime",
        "lambda_min",
        "lambda_max",
        "lambda_min_nonzero",
        "condition",
        "formula_min",
        "formula_max",
        "assembly_s",
        "solve_s",
    ]);
    for n in n_min.max(1)..=n_max {
        let start = Instant::now();
        let frame = Frame::new(FrameSpec::new(ts, n)?);
        let assembly = seconds(start);
        let eig = frame.overlap_eigenvalues();
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let max = eig.iter().copied().fold(0.0, f64::max);
        let min_nz = eig
            .iter()
            .copied()
            .filter(|&x| x > 0.0)
            .fold(f64::INFINITY, f64::min);
        let (f_min, f_max) = if frame.regime() == Regime::Undersampled {
            (String::new(), String::new())
        } else {
            let closed_form: Vec<f64> = (0..=i64::from(two_s))
                .map(|k| n as f64 * binom(two_s, k) / 2f64.powi(two_s as i32))
                .collect();
            (
                num(closed_form.iter().copied().fold(f64::INFINITY, f64::min)),
                num(closed_form.iter().copied().fold(0.0, f64::max)),
            )
        };
        let basis = frame.sample(&SpinState::basis(ts, 0)?)?;
        let start = Instant::now();
        frame.coefficients(&basis)?;
        let solve = seconds(start);
        table.row(vec![
            two_s.to_string(),
            n.to_string(),
            frame.regime().to_string(),
            num(min),
            num(max),
            num(min_nz),
            num(max / min_nz),
            f_min,
            f_max,
            assembly,
            solve,
        ]);
    }
    Ok(table.finish())
}

/// Spectrum and timings of the parallels-grid kernel for `J` in `j_min..=j_max`.
pub fn bench_multi(j_min: u32, j_max: u32) -> CliResult<String> {
    let mut table = Table::new(&[
        "J",
        "points",
        "lambda_min",
        "lambda_max",
        "condition",
        "singular",
        "assembly_s",
        "solve_s",
    ]);
    for j in j_min..=j_max {
        let grid = ParallelsGrid::with_default_radii(j)?;
        let start = Instant::now();
        multi_overlap_kernel(&grid);
        let assembly = seconds(start);
        let start = Instant::now();
        let kernel = MultiSpinKernel::with_tolerance(&grid, 0.0)?;
        let values = vec![Complex64::new(1.0, 0.0); grid.len()];
        kernel.solve(&values)?;
        let solve = seconds(start);
        let eig = kernel.eigenvalues();
        let (min, max) = (eig[0], eig[eig.len() - 1]);
        table.row(vec![
            j.to_string(),
            grid.len().to_string(),
            num(min),
            num(max),
            num(kernel.condition_number()),
            (min <= SINGULAR_TOLERANCE * max).to_string(),
            assembly,
            solve,
        ]);
    }
    Ok(table.finish())
}
