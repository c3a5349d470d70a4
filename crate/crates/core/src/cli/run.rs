use std::fs;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{RunConfig, Scenario, ScenarioParams};
use crate::collapse::{
    ancilla_state, branch_frequencies, entangle, hit, project_pointer, sample_ensemble, write_ensemble_csv, HitParams,
    LineGrid, OutcomeSampler, WaveFunction,
};
use crate::hybrid::{
    classical_marginal, positivity_report, product_state, quantum_marginal, ClassicalDistribution, Evolution,
    HybridHamiltonian, HybridState, NaiveCounterexample, PositivityTrace, VIOLATION_THRESHOLD,
};
use crate::linalg::pauli;
use crate::phase_space::csv::{fmt_f64, write_scalar_csv};
use crate::phase_space::{coarse_grain, MatrixField};
use crate::stern_gerlach::{
    analytic_propagate, initial_state, numeric_propagate, offdiag_norm, readout, ClassicalProfile, PropagationPath,
};
use crate::{Complex64, Error, Result};

/// Files written by a run, relative to the output directory.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub files: Vec<String>,
    pub warnings: Vec<String>,
}

/// Exit status for a failed run: 1 for invalid input, 2 for numerical
/// failure, 3 for I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => 3,
        Error::NonFiniteState { .. }
        | Error::OffDiagonalUnstable { .. }
        | Error::ZeroProbabilityOutcome { .. }
        | Error::ConditionOnNullEvent { .. } => 2,
        _ => 1,
    }
}

/// The single-line JSON form of an error written to standard error.
pub fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string(), "exit_code": exit_code(e) }).to_string()
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn create(&mut self, name: &str) -> Result<BufWriter<fs::File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(fs::File::create(self.dir.join(name))?))
    }

    fn json(&mut self, name: &str, v: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        self.files.push(name.to_string());
        fs::write(self.dir.join(name), text)?;
        Ok(())
    }

    fn elements(&mut self, tag: &str, f: &MatrixField) -> Result<()> {
        use std::io::Write;
        let d = f.dim();
        let g = *f.grid();
        for a in 0..d {
            for b in a..d {
                let vals = f.element(a, b);
                let mut w = self.create(&format!("element_{a}{b}_{tag}.csv"))?;
                let mut buf = String::with_capacity(vals.len() * 96 + 16);
                buf.push_str("x,p,re,im\n");
                for (c, v) in vals.iter().enumerate() {
                    let (i, j) = g.unindex(c);
                    buf.push_str(&format!("{},{},{},{}\n", fmt_f64(g.x(i)), fmt_f64(g.p(j)), fmt_f64(v.re), fmt_f64(v.im)));
                }
                w.write_all(buf.as_bytes())?;
            }
        }
        Ok(())
    }

    fn marginal(&mut self, name: &str, s: &HybridState) -> Result<()> {
        let w = self.create(name)?;
        write_scalar_csv(&classical_marginal(s), w)
    }
}

fn sigma(name: &str) -> crate::CMatrix {
    match name {
        "sigma1" => pauli::sigma1(),
        "sigma2" => pauli::sigma2(),
        _ => pauli::sigma3(),
    }
}

fn cjson(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn trace_summary(trace: &PositivityTrace) -> Value {
    json!({
        "min_eig": trace.min_eig(),
        "final_min_eig": trace.rows.last().map(|r| r.min_eig),
        "max_trace_drift": trace.max_trace_drift(),
        "max_hermiticity_defect": trace.max_hermiticity_defect(),
        "t_end": trace.rows.last().map(|r| r.t),
        "n_steps": trace.rows.len().saturating_sub(1),
    })
}

fn matrix_json(m: &crate::CMatrix) -> Value {
    let rows: Vec<Vec<Value>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| cjson(m[(i, j)])).collect()).collect();
    json!(rows)
}

/// A random superposition of two or three Gaussian packets inside `grid`.
fn random_packet(grid: LineGrid, rng: &mut ChaCha8Rng) -> Result<WaveFunction> {
    let n = rng.random_range(2..=3);
    let span = 0.5 * (grid.max - grid.min);
    let mid = 0.5 * (grid.max + grid.min);
    let terms: Vec<(Complex64, f64, f64)> = (0..n)
        .map(|_| {
            let c = Complex64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..std::f64::consts::TAU));
            (c, mid + span * rng.random_range(-0.4..0.4), rng.random_range(0.05..0.5))
        })
        .collect();
    WaveFunction::superposition(grid, &terms)
}

fn hit_sample(cfg: &RunConfig, out: &mut Out) -> Result<Value> {
    let ScenarioParams::HitSample { qgrid, delta, weight, phase, separation, variance, n_runs } = cfg.params else {
        unreachable!()
    };
    let a = Complex64::new(weight.sqrt(), 0.0);
    let b = Complex64::from_polar((1.0 - weight).sqrt(), phase);
    let psi = WaveFunction::superposition(qgrid, &[(b, -separation / 2.0, variance), (a, separation / 2.0, variance)])?;
    let runs = sample_ensemble(&psi, delta, n_runs, cfg.seed)?;
    write_ensemble_csv(&runs, out.create("ensemble.csv")?)?;
    let freq = branch_frequencies(&runs, 0.0);
    let mean = runs.iter().map(|r| r.qbar).sum::<f64>() / runs.len() as f64;
    Ok(json!({
        "scenario": cfg.scenario.name(),
        "seed": cfg.seed,
        "delta": delta,
        "n_runs": n_runs,
        "weight_right": psi.mass_in(0.0, f64::INFINITY),
        "branch_frequencies": freq,
        "mean_outcome": mean,
        "mean_position": psi.mean(),
    }))
}

fn hit_equivalence(cfg: &RunConfig, out: &mut Out) -> Result<Value> {
    use std::io::Write;
    let ScenarioParams::HitEquivalence { qgrid, delta, n_states } = cfg.params else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let anc = ancilla_state(delta, LineGrid::centered_on_zero(12.0 * delta, qgrid.spacing())?)?;
    let mut rows = String::from("state,qbar,l2\n");
    let mut l2s = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let psi = random_packet(qgrid, &mut rng)?;
        let qbar = OutcomeSampler::new(&psi, delta)?.draw(&mut rng);
        let phi = entangle(&psi, &anc)?;
        let (chain, _) = project_pointer(&phi, qbar)?;
        let (direct, _) = hit(&psi, HitParams::new(delta, qbar)?)?;
        let l2 = chain.l2_distance(&direct)?;
        rows.push_str(&format!("{k},{},{}\n", fmt_f64(qbar), fmt_f64(l2)));
        l2s.push(l2);
    }
    out.create("equivalence.csv")?.write_all(rows.as_bytes())?;
    Ok(json!({
        "scenario": cfg.scenario.name(),
        "seed": cfg.seed,
        "delta": delta,
        "n_states": n_states,
        "max_l2": l2s.iter().cloned().fold(0.0, f64::max),
        "l2": l2s,
    }))
}

fn hybrid_evolve(cfg: &RunConfig, out: &mut Out) -> Result<Value> {
    let ScenarioParams::HybridEvolve {
        grid,
        generator,
        harmonic,
        coupling,
        ref matrix,
        lambda,
        spin,
        x0,
        p0,
        var_x,
        var_p,
        coarse_grain: smooth,
        dt,
        t_final,
    } = cfg.params
    else {
        unreachable!()
    };
    let base = if harmonic { HybridHamiltonian::harmonic(grid, 2) } else { HybridHamiltonian::zero(grid, 2) };
    let m = sigma(matrix);
    let h = if coupling == 'x' { base.with_x_coupling(lambda, &m)? } else { base.with_p_coupling(lambda, &m)? };
    let rc = ClassicalDistribution::gaussian(grid, x0, p0, var_x, var_p)?;
    let mut s0 = product_state(&spin.density_matrix(), &rc)?;
    if smooth {
        s0 = HybridState::new(coarse_grain(s0.field())?)?;
    }
    let ev = Evolution::new(&h, generator, dt)?;
    let n = (t_final / dt).round() as usize;
    out.marginal("marginal_before.csv", &s0)?;
    let before = s0.clone();
    let (s1, trace) = ev.run(s0, n)?;
    trace.write_csv(out.create("positivity_trace.csv")?)?;
    out.marginal("marginal_after.csv", &s1)?;
    if cfg.dump_elements {
        out.elements("before", before.field())?;
        out.elements("after", s1.field())?;
    }
    let report = positivity_report(s1.field());
    Ok(json!({
        "scenario": cfg.scenario.name(),
        "generator": generator.name(),
        "dt": dt,
        "t_final": t_final,
        "trace": trace_summary(&trace),
        "final_positivity": report,
        "quantum_marginal": matrix_json(&quantum_marginal(&s1)),
    }))
}

fn stern_gerlach(cfg: &RunConfig, out: &mut Out) -> Result<Value> {
    let ScenarioParams::SternGerlach { grid, params, spin, path, n_substeps } = cfg.params else { unreachable!() };
    let s0 = initial_state(spin, grid)?;
    let s1 = match path {
        PropagationPath::Analytic => analytic_propagate(spin, &params, &ClassicalProfile::standard(), grid)?,
        PropagationPath::Numeric => numeric_propagate(&s0, &params, n_substeps)?,
    };
    out.marginal("marginal_before.csv", &s0)?;
    out.marginal("marginal_after.csv", &s1)?;
    if cfg.dump_elements {
        out.elements("before", s0.field())?;
        out.elements("after", s1.field())?;
    }
    let r = readout(&s1, params.g);
    Ok(json!({
        "g": params.g,
        "c_plus": cjson(spin.c_plus),
        "c_minus": cjson(spin.c_minus),
        "p_plus": r.p_plus,
        "p_minus": r.p_minus,
        "pointer_means": [r.pointer_mean_plus, r.pointer_mean_minus],
        "offdiag_norm": r.offdiag_norm,
        "offdiag_norm_initial": offdiag_norm(s0.field()),
        "marginal_coherence": r.marginal_coherence,
        "path": path.name(),
    }))
}

fn positivity_probe(cfg: &RunConfig, out: &mut Out) -> Result<Value> {
    let ScenarioParams::PositivityProbe { grid, generator, lambda, variance, dt, t_final, stop_at_violation } =
        cfg.params
    else {
        unreachable!()
    };
    let probe = NaiveCounterexample { lambda, variance };
    let ev = Evolution::new(&probe.hamiltonian(grid)?, generator, dt)?;
    let n = (t_final / dt).round() as usize;
    let (_, trace) =
        ev.run_until(probe.initial_state(grid)?, n, |r| stop_at_violation && r.min_eig < VIOLATION_THRESHOLD)?;
    trace.write_csv(out.create("positivity_trace.csv")?)?;
    let first = trace.first_below(VIOLATION_THRESHOLD);
    Ok(json!({
        "scenario": cfg.scenario.name(),
        "generator": generator.name(),
        "lambda": lambda,
        "variance": variance,
        "dt": dt,
        "violation_threshold": VIOLATION_THRESHOLD,
        "violated": first.is_some(),
        "first_violation_t": first,
        "trace": trace_summary(&trace),
    }))
}

/// Execute the scenario, writing `summary.json`, `metadata.json` and the
/// scenario's CSV files into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let start = Instant::now();
    fs::create_dir_all(&cfg.output_dir)?;
    let mut out = Out { dir: &cfg.output_dir, files: Vec::new() };
    let summary = match cfg.scenario {
        Scenario::HitSample => hit_sample(cfg, &mut out)?,
        Scenario::HitEquivalence => hit_equivalence(cfg, &mut out)?,
        Scenario::HybridEvolve => hybrid_evolve(cfg, &mut out)?,
        Scenario::SternGerlach => stern_gerlach(cfg, &mut out)?,
        Scenario::PositivityProbe => positivity_probe(cfg, &mut out)?,
    };
    out.json("summary.json", &summary)?;
    let mut files = out.files.clone();
    files.push("metadata.json".into());
    let meta = json!({
        "scenario": cfg.scenario.name(),
        "seed": cfg.seed,
        "config": cfg.resolved,
        "defaulted": cfg.defaulted,
        "warnings": cfg.warnings,
        "versions": { "hybridyn": env!("CARGO_PKG_VERSION") },
        "files": files,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    out.json("metadata.json", &meta)?;
    Ok(RunReport { files: out.files, warnings: cfg.warnings.clone() })
}

/// Human-readable list of scenarios and their keys with defaults.
pub fn describe_scenarios() -> String {
    let mut s = String::new();
    for sc in Scenario::ALL {
        s.push_str(&format!("{}: {}\n", sc.name(), sc.description()));
        for k in sc.keys() {
            s.push_str(&format!("  {:<24} = {:<20} {}\n", k.key, k.default, k.help));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_config;

    fn run_in(text: &str) -> (tempfile::TempDir, RunReport) {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config(text).unwrap().with_overrides(None, Some(dir.path().to_path_buf()), false);
        let r = run(&cfg).unwrap();
        (dir, r)
    }

    #[test]
    fn stern_gerlach_writes_its_files() {
        let (dir, r) = run_in("sg.g = 3.0");
        for f in ["summary.json", "marginal_before.csv", "marginal_after.csv", "metadata.json"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert!(r.files.contains(&"summary.json".to_string()));
        let s: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert!((s["p_plus"].as_f64().unwrap() - 0.5).abs() < 1e-6);
        assert_eq!(s["path"], "analytic");
        let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("metadata.json")).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(m["config"]["sg.c_plus"], json!([h, 0.0]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Validation("x".into())), 1);
        assert_eq!(exit_code(&Error::OffDiagonalUnstable { multiplier: 1e13 }), 2);
        assert_eq!(exit_code(&Error::NonFiniteState { t: 0.1 }), 2);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 3);
        let line = error_json(&Error::Validation("sg.g must be positive".into()));
        let v: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["error"], "ValidationError");
        assert_eq!(v["exit_code"], 1);
        assert!(!line.contains('\n'));
    }

    #[test]
    fn scenario_listing_names_every_key() {
        let s = describe_scenarios();
        for sc in Scenario::ALL {
            assert!(s.contains(sc.name()));
            for k in sc.keys() {
                assert!(s.contains(k.key));
            }
        }
    }
}
