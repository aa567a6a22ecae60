//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use nalgebra::{DMatrix, DVector};
use riemann_sampling::circulant::CirculantKernel;
use riemann_sampling::coherent::bargmann_kernel;
use riemann_sampling::euler::{
    equator_alias, euler_sample, euler_to_holo, holo_to_euler, omega_eigens, sph_harm,
};
use riemann_sampling::multispin::{
    multi_overlap_kernel, multi_sample, roots_rank_eigens, BandLimitedState, MultiSpinKernel,
    ParallelsGrid,
};
use riemann_sampling::numerics::{binom, unitary_dft, TwiceSpin};
use riemann_sampling::rfm::{rfm_apply, RfmShape};
use riemann_sampling::singlespin::{Frame, FrameSpec, SampleVector};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn frame(two_s: u32, n: usize) -> Frame {
    Frame::new(FrameSpec::new(TwiceSpin::new(two_s).unwrap(), n).unwrap())
}

fn exact_reconstruction() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for two_s in 1..=10u32 {
        for n in two_s as usize + 1..=two_s as usize + 6 {
            let f = frame(two_s, n);
            for _ in 0..50 {
                let st = random_state(&mut rng, two_s);
                let zs: Vec<C> = (0..100).map(|_| random_point(&mut rng, 3.0)).collect();
                let samples = f.sample(&st).unwrap();
                let rec = f.reconstruct_many(&samples, &zs).unwrap();
                let exact = st.eval_many(&zs).unwrap();
                worst = worst.max(max_abs(&rec, &exact));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && secs < 10.0,
        format!("max error {worst:.2e} (limit 1e-10), runtime {secs:.2} s (limit 10 s)"),
    )
}

fn coefficient_recovery() -> Outcome {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for two_s in 1..=10u32 {
        for n in two_s as usize + 1..=two_s as usize + 6 {
            let f = frame(two_s, n);
            for _ in 0..50 {
                let st = random_state(&mut rng, two_s);
                let back = f.coefficients(&f.sample(&st).unwrap()).unwrap();
                worst = worst.max(max_abs(back.coeffs(), st.coeffs()));
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("max coefficient error {worst:.2e} (limit 1e-10)"),
    )
}

fn spectra() -> Outcome {
    let mut worst_res: f64 = 0.0;
    let mut worst_overlap: f64 = 0.0;
    for two_s in 0..=12u32 {
        for n in 1..=16usize {
            let f = frame(two_s, n);
            let t = dense_frame(two_s, &roots(n));
            if n > two_s as usize {
                let gram = t.adjoint() * &t;
                let lib = f.resolution_eigenvalues().unwrap().to_vec();
                let diag: Vec<f64> = (0..gram.nrows()).map(|i| gram[(i, i)].re).collect();
                let off = (0..gram.nrows())
                    .flat_map(|i| {
                        (0..gram.ncols())
                            .filter(move |&j| j != i)
                            .map(move |j| (i, j))
                    })
                    .map(|(i, j)| gram[(i, j)].norm())
                    .fold(0.0, f64::max);
                worst_res = worst_res
                    .max(max_abs_f(&lib, &diag))
                    .max(off)
                    .max(max_abs_f(&sorted(lib), &hermitian_eigs(&gram)));
            }
            let b = &t * t.adjoint();
            let lib = sorted(f.overlap_eigenvalues().to_vec());
            worst_overlap = worst_overlap.max(max_abs_f(&lib, &hermitian_eigs(&b)));
        }
    }
    outcome(
        worst_res <= 1e-11 && worst_overlap <= 1e-11,
        format!("resolution {worst_res:.2e}, overlap {worst_overlap:.2e} (limit 1e-11)"),
    )
}

fn undersampling_alias() -> Outcome {
    let mut rng = rng(4);
    let (mut alias, mut interp, mut minnorm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for two_s in 1..=12u32 {
        for n in 1..=two_s as usize {
            let f = frame(two_s, n);
            let pts = roots(n);
            let t = dense_frame(two_s, &pts);
            let b = &t * t.adjoint();
            let b_inv = b.clone().lu().try_inverse().unwrap();
            let ps = t.adjoint() * b_inv * &t;
            let st = random_state(&mut rng, two_s);
            let samples = f.sample(&st).unwrap();
            let projected = &ps * DVector::from_column_slice(st.coeffs());
            for _ in 0..10 {
                let z = random_point(&mut rng, 3.0);
                let want: C = (0..=two_s as usize)
                    .map(|m| projected[m] * oracle_component(two_s, m, z))
                    .sum();
                alias = alias.max((f.reconstruct(&samples, z).unwrap() - want).norm());
            }
            for (k, zk) in pts.iter().enumerate() {
                for (l, zl) in pts.iter().enumerate() {
                    let v = f.xi_hat(zl * zk.conj()).unwrap();
                    let delta = if k == l { 1.0 } else { 0.0 };
                    interp = interp.max((v - delta).norm());
                }
            }
            for _ in 0..20 {
                let data = random_vec(&mut rng, n);
                let sv = SampleVector::new(*f.spec(), data.clone()).unwrap();
                let lib = f.coefficients(&sv).unwrap();
                let dense = dense_min_norm(&t, &data);
                let lib_norm = lib.norm();
                minnorm = minnorm
                    .max(max_abs(lib.coeffs(), dense.as_slice()))
                    .max((lib_norm - dense.norm()).abs());
            }
        }
    }
    outcome(
        alias <= 1e-10 && interp <= 1e-12 && minnorm <= 1e-10,
        format!(
            "alias {alias:.2e} (1e-10), interpolation {interp:.2e} (1e-12), minimum norm {minnorm:.2e} (1e-10)"
        ),
    )
}

fn filters() -> Outcome {
    let mut delta0: f64 = 0.0;
    for two_s in 0..=20u32 {
        for n in two_s as usize + 1..=two_s as usize + 6 {
            let nf = n as f64;
            let closed = f64::from(two_s + 1) / nf.powf(1.5)
                * (0..=two_s)
                    .map(|k| 2f64.powi(k as i32) / f64::from(k + 1))
                    .sum::<f64>();
            let got = frame(two_s, n).dual_filter()[0];
            delta0 = delta0.max((got - closed).norm() / closed);
        }
    }
    let mut rng = rng(5);
    let (mut over, mut under): (f64, f64) = (0.0, 0.0);
    for two_s in 0..=12u32 {
        for n in 1..=two_s as usize + 6 {
            let f = frame(two_s, n);
            let data = random_vec(&mut rng, n);
            let sv = SampleVector::new(*f.spec(), data.clone()).unwrap();
            let gamma = f.dual_data(&sv).unwrap();
            let bg = f.overlap_kernel().matvec(&gamma).unwrap();
            if n > two_s as usize + 1 {
                let p = f.range_projector_apply(&data).unwrap();
                over = over.max(max_abs(&bg, &p));
            } else {
                under = under.max(max_abs(&bg, &data));
            }
        }
    }
    let two_s = 60u32;
    let n = two_s as usize + 2;
    let r = n - two_s as usize;
    let scale = (n as f64).powf(1.5) / 2f64.powi(two_s as i32);
    let delta = frame(two_s, n).dual_filter();
    let shape = (0..n)
        .map(|k| {
            let want = 1.0 + C::from_polar(1.0, 2.0 * PI * (r * k) as f64 / n as f64);
            (delta[k] * scale - want).norm()
        })
        .fold(0.0, f64::max);
    let shape_limit = 5.0 / f64::from(two_s);
    outcome(
        delta0 <= 1e-12 && over <= 1e-10 && under <= 1e-10 && shape <= shape_limit,
        format!(
            "Delta(0) rel {delta0:.2e} (1e-12), B Gamma - P psi {over:.2e}, B Gamma - psi {under:.2e} (1e-10), \
             large-spin shape {shape:.2e} ({shape_limit:.2e})"
        ),
    )
}

fn fourier_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=8usize {
        let f_n = DMatrix::from_fn(n, n, |r, c| {
            let mut e = vec![C::new(0.0, 0.0); n];
            e[c] = C::new(1.0, 0.0);
            unitary_dft(&e, false)[r]
        });
        worst = worst.max((&f_n - dense_rfm(n, n)).camax());
        for m in 1..=24usize {
            let shape = RfmShape::new(n, m).unwrap();
            let f = DMatrix::from_fn(n, m, |r, c| {
                let mut e = vec![C::new(0.0, 0.0); m];
                e[c] = C::new(1.0, 0.0);
                rfm_apply(shape, &e).unwrap()[r]
            });
            worst = worst.max((&f - dense_rfm(n, m)).camax());
            if n >= m {
                worst = worst.max((f.adjoint() * &f - DMatrix::identity(m, m)).camax());
            }
            let (q, p) = (m / n, m % n);
            let proj = DMatrix::from_fn(n, n, |i, j| {
                if i == j && i < p {
                    C::new(1.0, 0.0)
                } else {
                    C::new(0.0, 0.0)
                }
            });
            let rhs =
                DMatrix::<C>::identity(n, n) * C::new(q as f64, 0.0) + &f_n * proj * f_n.adjoint();
            worst = worst.max((&f * f.adjoint() - rhs).camax());
        }
    }
    let mut rng = rng(6);
    for n in 1..=8usize {
        let row = random_vec(&mut rng, n);
        let k = CirculantKernel::new(row.clone()).unwrap();
        let dense = DMatrix::from_fn(n, n, |r, c| row[(c + n - r) % n]);
        let f_n = dense_rfm(n, n);
        let lam = DMatrix::from_diagonal(&DVector::from_column_slice(k.eigenvalues()));
        worst = worst.max((f_n.adjoint() * lam * &f_n - dense).camax());
        for two_s in 0..=8u32 {
            let fr = frame(two_s, n);
            let t = dense_frame(two_s, &roots(n));
            let lam = DMatrix::from_fn(n, n, |i, j| {
                C::new(
                    if i == j {
                        fr.overlap_eigenvalues()[i]
                    } else {
                        0.0
                    },
                    0.0,
                )
            });
            worst = worst.max((f_n.adjoint() * lam * &f_n - &t * t.adjoint()).camax());
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max entrywise error {worst:.2e} (limit 1e-12)"),
    )
}

fn equatorial_rank() -> Outcome {
    let mut rank_ok = true;
    let mut worst: f64 = 0.0;
    let mut ranks = Vec::new();
    for j in 1..=3u32 {
        let n = ((j + 1) * (j + 1)) as usize;
        let dense = dense_multi_overlap(j, &roots(n));
        let eigs = hermitian_eigs(&dense);
        let largest = eigs[eigs.len() - 1];
        let rank = eigs.iter().filter(|e| **e > 1e-12 * largest).count();
        ranks.push(rank);
        rank_ok &= rank == 2 * j as usize + 1;
        let formula = sorted(roots_rank_eigens(j, n).unwrap());
        worst = worst.max(max_abs_f(&formula, &eigs));
    }
    outcome(
        rank_ok && worst <= 1e-11,
        format!("ranks {ranks:?} (expected 2J+1), formula vs dense {worst:.2e} (limit 1e-11)"),
    )
}

fn multispin_reconstruction() -> Outcome {
    let mut rng = rng(8);
    let mut worst: f64 = 0.0;
    let mut conditions = Vec::new();
    for j in 0..=6u32 {
        let grid = ParallelsGrid::with_default_radii(j).unwrap();
        let kernel = match MultiSpinKernel::new(&grid) {
            Ok(k) => k,
            Err(e) => return outcome(false, format!("J = {j}: {e}")),
        };
        let mut coeffs = random_vec(&mut rng, ((j + 1) * (j + 1)) as usize);
        normalize(&mut coeffs);
        let st = BandLimitedState::new(j, coeffs).unwrap();
        let rec = kernel
            .reconstruction(&multi_sample(&st, &grid).unwrap())
            .unwrap();
        for _ in 0..20 {
            let z = random_point(&mut rng, 3.0);
            worst = worst.max((rec.eval(z).unwrap() - st.eval(z).unwrap()).norm());
        }
        conditions.push(kernel.condition_number());
    }
    let finite = conditions.iter().all(|c| c.is_finite());
    let mut smallest = Vec::new();
    for j in 1..=8u32 {
        let grid = ParallelsGrid::with_default_radii(j).unwrap();
        smallest.push(hermitian_eigs(&multi_overlap_kernel(&grid))[0]);
    }
    let monotone = smallest.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        worst <= 1e-8 && finite && monotone,
        format!(
            "round trip {worst:.2e} (limit 1e-8), condition up to {:.2e}, smallest eigenvalues {}",
            conditions.iter().copied().fold(0.0, f64::max),
            smallest
                .iter()
                .map(|e| format!("{e:.2e}"))
                .collect::<Vec<_>>()
                .join(" > ")
        ),
    )
}

fn euler_picture() -> Outcome {
    let mut rng = rng(9);
    let mut round: f64 = 0.0;
    for j in 0..=4u32 {
        for theta0 in [PI / 6.0, PI / 4.0, PI / 3.0] {
            for _ in 0..10 {
                let st = random_state(&mut rng, 2 * j);
                let samples = frame(2 * j, 2 * j as usize + 1).sample(&st).unwrap();
                let euler = holo_to_euler(&samples, theta0).unwrap();
                let direct = euler_sample(&st, theta0).unwrap();
                round = round.max(max_abs(euler.values(), direct.values()));
                let back = euler_to_holo(&euler, 1e-10).unwrap();
                round = round.max(max_abs(back.values(), samples.values()));
            }
        }
    }
    let mut odd: f64 = 0.0;
    for j in 1..=6u32 {
        let n = 2 * j as usize + 1;
        let omega = omega_eigens(j, PI / 2.0, n).unwrap();
        for k in (1..n).step_by(2) {
            odd = odd.max(omega[k].norm() / n as f64);
        }
    }
    let mut alias: f64 = 0.0;
    for j in 0..=6u32 {
        let st = random_state(&mut rng, 2 * j);
        let euler = euler_sample(&st, PI / 2.0).unwrap();
        let rec = equator_alias(&euler).unwrap();
        for idx in (0..=2 * j as usize).step_by(2) {
            alias = alias.max((rec.state.coeffs()[idx] - st.coeffs()[idx]).norm());
        }
    }
    let mut bargmann: f64 = 0.0;
    for j in 0..=4u32 {
        for a in 0..5 {
            let theta = 0.1 + 0.7 * f64::from(a);
            for b in 0..5 {
                let phi = -2.5 + 1.3 * f64::from(b);
                for c in 0..5 {
                    let z = C::from_polar(0.2 + 0.6 * f64::from(c), 0.9 * f64::from(c) - 1.0);
                    let series: C = (0..=2 * j as usize)
                        .map(|idx| {
                            let m = idx as i64 - i64::from(j);
                            let y = sph_harm(j, m, theta, phi).unwrap()
                                * (4.0 * PI / f64::from(2 * j + 1)).sqrt();
                            y * oracle_component(2 * j, idx, z).conj()
                        })
                        .sum();
                    bargmann =
                        bargmann.max((bargmann_kernel(j, theta, phi, z).unwrap() - series).norm());
                }
            }
        }
    }
    outcome(
        round <= 1e-9 && odd <= 1e-12 && alias <= 1e-10 && bargmann <= 1e-12,
        format!(
            "round trip {round:.2e} (1e-9), equator odd modes {odd:.2e}*N (1e-12*N), \
             equator alias {alias:.2e} (1e-10), Bargmann {bargmann:.2e} (1e-12)"
        ),
    )
}

fn reciprocal_binomial_limit() -> Outcome {
    let two_s = 200u32;
    let sum: f64 = (0..=two_s).map(|n| 1.0 / binom(two_s, i64::from(n))).sum();
    let gap = (sum - 2.0).abs();
    let limit = 3.0 / (f64::from(two_s) / 2.0);
    outcome(
        gap <= limit,
        format!("|sum - 2| = {gap:.3e} (limit {limit:.3e})"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact reconstruction", exact_reconstruction),
        ("coefficient recovery", coefficient_recovery),
        ("resolution and overlap spectra", spectra),
        ("undersampling alias", undersampling_alias),
        ("reconstruction filters", filters),
        ("Fourier and circulant identities", fourier_identities),
        ("equatorial band-limited rank", equatorial_rank),
        ("band-limited reconstruction", multispin_reconstruction),
        ("Euler picture", euler_picture),
        ("reciprocal binomial limit", reciprocal_binomial_limit),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "acceptance {:>2} {:<34} {}  {}",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
