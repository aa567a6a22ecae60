//! End-to-end CLI criterion: gen, sample and coeffs through the real binary.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_riemann-sample");

fn run(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(BIN)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn coeffs(path: &Path) -> Result<Vec<(f64, f64)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    doc["coeffs"]
        .as_array()
        .ok_or("no coeffs")?
        .iter()
        .map(|c| Ok((c[0].as_f64().ok_or("re")?, c[1].as_f64().ok_or("im")?)))
        .collect()
}

fn pipeline_error(dir: &Path, gen_args: &[&str], sample_args: &[&str]) -> Result<f64, String> {
    let state = dir.join("state.json");
    let samples = dir.join("samples.json");
    let back = dir.join("back.json");
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    let mut args = vec!["gen"];
    args.extend_from_slice(gen_args);
    let state_s = s(&state);
    args.extend_from_slice(&["-o", &state_s]);
    run(&args)?;
    let samples_s = s(&samples);
    let mut args = vec!["sample", &state_s];
    args.extend_from_slice(sample_args);
    args.extend_from_slice(&["-o", &samples_s]);
    run(&args)?;
    let back_s = s(&back);
    run(&["coeffs", &samples_s, "-o", &back_s])?;
    let (a, b) = (coeffs(&state)?, coeffs(&back)?);
    if a.len() != b.len() {
        return Err(format!("length {} vs {}", a.len(), b.len()));
    }
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x.0 - y.0).hypot(x.1 - y.1))
        .fold(0.0, f64::max))
}

fn criterion() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for two_s in 1..=10u32 {
        for n in two_s + 1..=two_s + 6 {
            let (ts, ns, seed) = (
                two_s.to_string(),
                n.to_string(),
                (100 * two_s + n).to_string(),
            );
            worst = worst.max(pipeline_error(
                dir.path(),
                &["--two-s", &ts, "--seed", &seed],
                &["-n", &ns],
            )?);
        }
    }
    for j in 1..=3u32 {
        let (js, seed) = (j.to_string(), (7 + j).to_string());
        worst = worst.max(pipeline_error(
            dir.path(),
            &["--J", &js, "--seed", &seed],
            &[],
        )?);
    }
    let once = run(&["gen", "--two-s", "9", "--seed", "42"])?;
    let twice = run(&["gen", "--two-s", "9", "--seed", "42"])?;
    let band_once = run(&["gen", "--J", "3", "--seed", "42"])?;
    let band_twice = run(&["gen", "--J", "3", "--seed", "42"])?;
    let deterministic = once == twice && band_once == band_twice;
    let detail =
        format!("max |c - c'| = {worst:.2e} (tol 1e-11), identical bytes: {deterministic}");
    if worst <= 1e-11 && deterministic {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let (pass, detail) = match criterion() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    println!(
        "acceptance {:>2} {:<34} {}  {}",
        11,
        "end-to-end CLI",
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    if !pass {
        std::process::exit(1);
    }
}
