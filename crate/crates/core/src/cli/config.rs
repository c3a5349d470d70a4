use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::collapse::LineGrid;
use crate::hybrid::GeneratorKind;
use crate::phase_space::PhaseGrid;
use crate::stern_gerlach::{self, PropagationPath, SgParams, SpinAmplitudes};
use crate::{Complex64, Error, Result};

/// The runnable scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    HitSample,
    HitEquivalence,
    HybridEvolve,
    SternGerlach,
    PositivityProbe,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::HitSample,
        Scenario::HitEquivalence,
        Scenario::HybridEvolve,
        Scenario::SternGerlach,
        Scenario::PositivityProbe,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::HitSample => "hit-sample",
            Scenario::HitEquivalence => "hit-equivalence",
            Scenario::HybridEvolve => "hybrid-evolve",
            Scenario::SternGerlach => "stern-gerlach",
            Scenario::PositivityProbe => "positivity-probe",
        }
    }

    /// Key prefix owned by the scenario.
    pub fn prefix(&self) -> &'static str {
        match self {
            Scenario::HitSample => "sample",
            Scenario::HitEquivalence => "equiv",
            Scenario::HybridEvolve => "evolve",
            Scenario::SternGerlach => "sg",
            Scenario::PositivityProbe => "probe",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Scenario::HitSample => "Born-rule ensemble of single Gaussian hits on a two-peak state",
            Scenario::HitEquivalence => "direct hit against the explicit ancilla chain on random states",
            Scenario::HybridEvolve => "RK4 evolution of a hybrid state with positivity monitoring",
            Scenario::SternGerlach => "impulsive spin-pointer coupling and pointer readout",
            Scenario::PositivityProbe => "the pinned naive-generator counterexample run",
        }
    }

    fn uses_phase_grid(&self) -> bool {
        matches!(self, Scenario::HybridEvolve | Scenario::SternGerlach | Scenario::PositivityProbe)
    }

    fn default_grid(&self) -> PhaseGrid {
        match self {
            Scenario::SternGerlach => stern_gerlach::default_grid(),
            _ => PhaseGrid::standard(),
        }
    }

    /// Every key the scenario accepts with its default and a one-line note.
    pub fn keys(&self) -> Vec<KeySpec> {
        let mut keys = vec![
            KeySpec::new("scenario", self.name(), "scenario name"),
            KeySpec::new("seed", "0", "64-bit seed for every random draw"),
            KeySpec::new("output.dir", "out", "directory for artifacts"),
            KeySpec::new("output.dump_elements", "false", "also write per-element CSVs"),
        ];
        if self.uses_phase_grid() {
            let g = self.default_grid();
            keys.extend([
                KeySpec::owned("grid.x_min", g.x_min.to_string(), "phase-space x lower edge"),
                KeySpec::owned("grid.x_max", g.x_max.to_string(), "phase-space x upper edge"),
                KeySpec::owned("grid.n_x", g.n_x.to_string(), "cells along x"),
                KeySpec::owned("grid.p_min", g.p_min.to_string(), "phase-space p lower edge"),
                KeySpec::owned("grid.p_max", g.p_max.to_string(), "phase-space p upper edge"),
                KeySpec::owned("grid.n_p", g.n_p.to_string(), "cells along p"),
            ]);
        } else {
            keys.extend([
                KeySpec::new("qgrid.min", "-5", "position grid lower end"),
                KeySpec::new("qgrid.max", "5", "position grid upper end"),
                KeySpec::new("qgrid.n", "501", "position grid nodes"),
            ]);
        }
        keys.extend(match self {
            Scenario::HitSample => vec![
                KeySpec::new("sample.delta", "0.1", "measurement precision"),
                KeySpec::new("sample.weight", "0.7", "|c+|^2 of the right-hand peak"),
                KeySpec::new("sample.phase", "0", "relative phase of the left-hand peak"),
                KeySpec::new("sample.separation", "4", "distance between the peaks"),
                KeySpec::new("sample.variance", "0.04", "position variance of each peak"),
                KeySpec::new("sample.n_runs", "100000", "number of independent hits"),
            ],
            Scenario::HitEquivalence => vec![
                KeySpec::new("equiv.delta", "0.3", "measurement precision"),
                KeySpec::new("equiv.n_states", "10", "random superpositions to compare"),
            ],
            Scenario::HybridEvolve => vec![
                KeySpec::new("evolve.generator", "corrected", "naive or corrected"),
                KeySpec::new("evolve.hamiltonian", "harmonic", "harmonic or none for the classical part"),
                KeySpec::new("evolve.coupling", "x", "coupled variable: x or p"),
                KeySpec::new("evolve.matrix", "sigma3", "coupling matrix: sigma1, sigma2 or sigma3"),
                KeySpec::new("evolve.lambda", "1", "coupling strength"),
                KeySpec::new("evolve.c_plus", "0.7071067811865476", "spin amplitude on |+>"),
                KeySpec::new("evolve.c_minus", "0.7071067811865476", "spin amplitude on |->"),
                KeySpec::new("evolve.x0", "0", "initial mean x"),
                KeySpec::new("evolve.p0", "0", "initial mean p"),
                KeySpec::new("evolve.var_x", "1", "initial variance in x"),
                KeySpec::new("evolve.var_p", "1", "initial variance in p"),
                KeySpec::new("evolve.coarse_grain", "true", "smooth the initial state over Planck cells"),
                KeySpec::new("evolve.dt", "0.001", "time step"),
                KeySpec::new("evolve.t_final", "1", "final time"),
            ],
            Scenario::SternGerlach => vec![
                KeySpec::new("sg.g", "3", "impulse strength; precision is 1/g"),
                KeySpec::new("sg.c_plus", "0.7071067811865476", "spin amplitude on |+>"),
                KeySpec::new("sg.c_minus", "0.7071067811865476", "spin amplitude on |->"),
                KeySpec::new("sg.path", "analytic", "analytic or numeric propagator"),
                KeySpec::new("sg.n_substeps", "1", "pieces of the numeric population shift"),
            ],
            Scenario::PositivityProbe => vec![
                KeySpec::new("probe.generator", "naive", "naive or corrected"),
                KeySpec::new("probe.lambda", "1", "strength of the x sigma1 coupling"),
                KeySpec::new("probe.variance", "0.25", "per-axis variance of the sharp initial Gaussian"),
                KeySpec::new("probe.dt", "0.001", "time step"),
                KeySpec::new("probe.t_final", "1", "final time"),
                KeySpec::new("probe.stop_at_violation", "true", "stop once min_eig < -1e-3"),
            ],
        });
        keys
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| {
            let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
            Error::Validation(format!("scenario must be one of {}, got '{s}'", names.join(", ")))
        })
    }
}

/// One accepted key.
#[derive(Clone, Debug, Serialize)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: String,
    pub help: &'static str,
}

impl KeySpec {
    fn new(key: &'static str, default: &str, help: &'static str) -> Self {
        KeySpec { key, default: default.to_string(), help }
    }

    fn owned(key: &'static str, default: String, help: &'static str) -> Self {
        KeySpec { key, default, help }
    }
}

/// Scenario parameters after validation.
#[derive(Clone, Debug)]
pub enum ScenarioParams {
    HitSample {
        qgrid: LineGrid,
        delta: f64,
        weight: f64,
        phase: f64,
        separation: f64,
        variance: f64,
        n_runs: u64,
    },
    HitEquivalence {
        qgrid: LineGrid,
        delta: f64,
        n_states: usize,
    },
    HybridEvolve {
        grid: PhaseGrid,
        generator: GeneratorKind,
        harmonic: bool,
        coupling: char,
        matrix: String,
        lambda: f64,
        spin: SpinAmplitudes,
        x0: f64,
        p0: f64,
        var_x: f64,
        var_p: f64,
        coarse_grain: bool,
        dt: f64,
        t_final: f64,
    },
    SternGerlach {
        grid: PhaseGrid,
        params: SgParams,
        spin: SpinAmplitudes,
        path: PropagationPath,
        n_substeps: usize,
    },
    PositivityProbe {
        grid: PhaseGrid,
        generator: GeneratorKind,
        lambda: f64,
        variance: f64,
        dt: f64,
        t_final: f64,
        stop_at_violation: bool,
    },
}

/// A fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub dump_elements: bool,
    pub params: ScenarioParams,
    /// Every key with the value in force, as typed JSON.
    pub resolved: BTreeMap<String, Value>,
    /// Keys that took their default.
    pub defaulted: Vec<String>,
    pub warnings: Vec<String>,
}

impl RunConfig {
    /// Apply command-line overrides, keeping the resolved record in step.
    pub fn with_overrides(mut self, seed: Option<u64>, out: Option<PathBuf>, dump_elements: bool) -> Self {
        if let Some(s) = seed {
            self.seed = s;
            self.resolved.insert("seed".into(), json!(s));
            self.defaulted.retain(|k| k != "seed");
        }
        if let Some(o) = out {
            self.resolved.insert("output.dir".into(), json!(o.display().to_string()));
            self.defaulted.retain(|k| k != "output.dir");
            self.output_dir = o;
        }
        if dump_elements {
            self.dump_elements = true;
            self.resolved.insert("output.dump_elements".into(), json!(true));
            self.defaulted.retain(|k| k != "output.dump_elements");
        }
        self
    }
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (no spaces needed).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (body[..k].parse().ok()?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse().ok()?,
        };
        Some(Complex64::new(re, im))
    } else {
        t.parse().ok().map(|re| Complex64::new(re, 0.0))
    }
}

struct Lookup<'a> {
    values: &'a BTreeMap<String, (String, usize)>,
    specs: Vec<KeySpec>,
    resolved: BTreeMap<String, Value>,
    defaulted: Vec<String>,
}

impl Lookup<'_> {
    fn raw(&mut self, key: &str) -> String {
        match self.values.get(key) {
            Some((v, _)) => v.clone(),
            None => {
                self.defaulted.push(key.to_string());
                self.specs.iter().find(|s| s.key == key).map(|s| s.default.clone()).unwrap_or_default()
            }
        }
    }

    fn parse<T: FromStr + Serialize>(&mut self, key: &str, what: &str) -> Result<T> {
        let raw = self.raw(key);
        let v: T = raw.parse().map_err(|_| Error::Validation(format!("{key} must be {what}, got '{raw}'")))?;
        self.resolved.insert(key.to_string(), json!(v));
        Ok(v)
    }

    fn real(&mut self, key: &str) -> Result<f64> {
        let v: f64 = self.parse(key, "a number")?;
        if !v.is_finite() {
            return Err(Error::Validation(format!("{key} must be finite")));
        }
        Ok(v)
    }

    fn positive(&mut self, key: &str) -> Result<f64> {
        let v = self.real(key)?;
        if v <= 0.0 {
            return Err(Error::Validation(format!("{key} must be positive")));
        }
        Ok(v)
    }

    fn count(&mut self, key: &str, min: usize) -> Result<usize> {
        let v: usize = self.parse(key, "a non-negative integer")?;
        if v < min {
            return Err(Error::Validation(format!("{key} must be at least {min}")));
        }
        Ok(v)
    }

    fn flag(&mut self, key: &str) -> Result<bool> {
        self.parse(key, "true or false")
    }

    fn text(&mut self, key: &str, allowed: &[&str]) -> Result<String> {
        let raw = self.raw(key);
        if !allowed.contains(&raw.as_str()) {
            return Err(Error::Validation(format!("{key} must be one of {}, got '{raw}'", allowed.join(", "))));
        }
        self.resolved.insert(key.to_string(), json!(raw));
        Ok(raw)
    }

    fn complex(&mut self, key: &str) -> Result<Complex64> {
        let raw = self.raw(key);
        let c = parse_complex(&raw)
            .filter(|c| c.re.is_finite() && c.im.is_finite())
            .ok_or_else(|| Error::Validation(format!("{key} must be a complex number like 0.6 or 0.6+0.8i, got '{raw}'")))?;
        self.resolved.insert(key.to_string(), json!([c.re, c.im]));
        Ok(c)
    }

    fn spin(&mut self, prefix: &str) -> Result<SpinAmplitudes> {
        let (kp, km) = (format!("{prefix}.c_plus"), format!("{prefix}.c_minus"));
        let (cp, cm) = (self.complex(&kp)?, self.complex(&km)?);
        // the defaults are 1/sqrt 2 to 16 digits; accept that rounding
        let n = cp.norm_sqr() + cm.norm_sqr();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("{kp} and {km} must satisfy |c+|^2 + |c-|^2 = 1, got {n}")));
        }
        let s = n.sqrt();
        SpinAmplitudes::new(cp / s, cm / s)
    }

    fn phase_grid(&mut self) -> Result<PhaseGrid> {
        let x_min = self.real("grid.x_min")?;
        let x_max = self.real("grid.x_max")?;
        let n_x = self.count("grid.n_x", crate::phase_space::MIN_CELLS)?;
        let p_min = self.real("grid.p_min")?;
        let p_max = self.real("grid.p_max")?;
        let n_p = self.count("grid.n_p", crate::phase_space::MIN_CELLS)?;
        PhaseGrid::new(x_min, x_max, n_x, p_min, p_max, n_p)
            .map_err(|e| Error::Validation(format!("grid.*: {e}")))
    }

    fn line_grid(&mut self) -> Result<LineGrid> {
        let min = self.real("qgrid.min")?;
        let max = self.real("qgrid.max")?;
        let n = self.count("qgrid.n", 3)?;
        LineGrid::new(min, max, n).map_err(|e| Error::Validation(format!("qgrid.*: {e}")))
    }

    fn generator(&mut self, key: &str) -> Result<GeneratorKind> {
        let s = self.text(key, &["naive", "corrected"])?;
        Ok(s.parse().expect("checked"))
    }
}

/// Parse and validate flat `key = value` text. Blank lines and lines
/// starting with `#` are skipped. Without a `scenario` line the scenario is
/// inferred from the key prefixes.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut values: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(Error::Parse { line: line_no, message: format!("bad key '{k}'") });
        }
        if v.is_empty() {
            return Err(Error::Parse { line: line_no, message: format!("key '{k}' has no value") });
        }
        if let Some((_, first)) = values.get(k) {
            return Err(Error::Parse { line: line_no, message: format!("key '{k}' already set on line {first}") });
        }
        values.insert(k.to_string(), (v.to_string(), line_no));
    }

    let scenario = match values.get("scenario") {
        Some((s, _)) => s.parse()?,
        None => infer_scenario(&values)?,
    };
    let specs = scenario.keys();
    for k in values.keys() {
        if !specs.iter().any(|s| s.key == k) {
            let valid: Vec<_> = specs.iter().map(|s| s.key).collect();
            return Err(Error::Validation(format!(
                "unknown key '{k}' for scenario {scenario}; valid keys: {}",
                valid.join(", ")
            )));
        }
    }

    let mut l = Lookup { values: &values, specs, resolved: BTreeMap::new(), defaulted: Vec::new() };
    l.resolved.insert("scenario".into(), json!(scenario.name()));
    if !values.contains_key("scenario") {
        l.defaulted.push("scenario".into());
    }
    let seed: u64 = l.parse("seed", "an unsigned 64-bit integer")?;
    let output_dir = PathBuf::from(l.raw("output.dir"));
    l.resolved.insert("output.dir".into(), json!(output_dir.display().to_string()));
    let dump_elements = l.flag("output.dump_elements")?;
    let mut warnings = Vec::new();

    let params = match scenario {
        Scenario::HitSample => {
            let qgrid = l.line_grid()?;
            let delta = l.positive("sample.delta")?;
            let weight = l.real("sample.weight")?;
            if !(0.0..=1.0).contains(&weight) {
                return Err(Error::Validation("sample.weight must lie in [0, 1]".into()));
            }
            let phase = l.real("sample.phase")?;
            let separation = l.positive("sample.separation")?;
            let variance = l.positive("sample.variance")?;
            let n_runs = l.count("sample.n_runs", 1)? as u64;
            ScenarioParams::HitSample { qgrid, delta, weight, phase, separation, variance, n_runs }
        }
        Scenario::HitEquivalence => {
            let qgrid = l.line_grid()?;
            let delta = l.positive("equiv.delta")?;
            let n_states = l.count("equiv.n_states", 1)?;
            ScenarioParams::HitEquivalence { qgrid, delta, n_states }
        }
        Scenario::HybridEvolve => {
            let grid = l.phase_grid()?;
            let generator = l.generator("evolve.generator")?;
            let harmonic = l.text("evolve.hamiltonian", &["harmonic", "none"])? == "harmonic";
            let coupling = l.text("evolve.coupling", &["x", "p"])?.chars().next().expect("non-empty");
            let matrix = l.text("evolve.matrix", &["sigma1", "sigma2", "sigma3"])?;
            let lambda = l.real("evolve.lambda")?;
            let spin = l.spin("evolve")?;
            let x0 = l.real("evolve.x0")?;
            let p0 = l.real("evolve.p0")?;
            let var_x = l.positive("evolve.var_x")?;
            let var_p = l.positive("evolve.var_p")?;
            let coarse_grain = l.flag("evolve.coarse_grain")?;
            let dt = l.positive("evolve.dt")?;
            let t_final = l.positive("evolve.t_final")?;
            ScenarioParams::HybridEvolve {
                grid,
                generator,
                harmonic,
                coupling,
                matrix,
                lambda,
                spin,
                x0,
                p0,
                var_x,
                var_p,
                coarse_grain,
                dt,
                t_final,
            }
        }
        Scenario::SternGerlach => {
            let grid = l.phase_grid()?;
            let g = l.positive("sg.g")?;
            let params = SgParams::new(g)?;
            if let Some(w) = params.warning() {
                warnings.push(w);
            }
            let spin = l.spin("sg")?;
            let path = l.text("sg.path", &["analytic", "numeric"])?.parse().expect("checked");
            let n_substeps = l.count("sg.n_substeps", 1)?;
            ScenarioParams::SternGerlach { grid, params, spin, path, n_substeps }
        }
        Scenario::PositivityProbe => {
            let grid = l.phase_grid()?;
            let generator = l.generator("probe.generator")?;
            let lambda = l.real("probe.lambda")?;
            let variance = l.positive("probe.variance")?;
            let dt = l.positive("probe.dt")?;
            let t_final = l.positive("probe.t_final")?;
            let stop_at_violation = l.flag("probe.stop_at_violation")?;
            ScenarioParams::PositivityProbe { grid, generator, lambda, variance, dt, t_final, stop_at_violation }
        }
    };

    Ok(RunConfig {
        scenario,
        seed,
        output_dir,
        dump_elements,
        params,
        resolved: l.resolved,
        defaulted: l.defaulted,
        warnings,
    })
}

fn infer_scenario(values: &BTreeMap<String, (String, usize)>) -> Result<Scenario> {
    let mut found: Vec<Scenario> = Vec::new();
    for k in values.keys() {
        let prefix = k.split('.').next().unwrap_or("");
        if let Some(s) = Scenario::ALL.into_iter().find(|s| s.prefix() == prefix) {
            if !found.contains(&s) {
                found.push(s);
            }
        }
    }
    match found.as_slice() {
        [s] => Ok(*s),
        [] => Err(Error::Validation("no 'scenario' key and no scenario-specific keys to infer it from".into())),
        many => {
            let names: Vec<_> = many.iter().map(|s| s.name()).collect();
            Err(Error::Validation(format!("keys from several scenarios ({}); set 'scenario'", names.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_stern_gerlach_fills_defaults() {
        let c = parse_config("sg.g = 3.0\n").unwrap();
        assert_eq!(c.scenario, Scenario::SternGerlach);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(c.resolved["sg.c_plus"], json!([h, 0.0]));
        assert_eq!(c.resolved["sg.c_minus"], json!([h, 0.0]));
        assert!(c.defaulted.contains(&"sg.c_plus".to_string()));
        assert!(!c.defaulted.contains(&"sg.g".to_string()));
        match c.params {
            ScenarioParams::SternGerlach { params, grid, .. } => {
                assert_eq!(params.g, 3.0);
                assert_eq!(grid, stern_gerlach::default_grid());
            }
            _ => panic!("wrong scenario"),
        }
    }

    #[test]
    fn negative_g_is_rejected_by_name() {
        let e = parse_config("sg.g = -1").unwrap_err();
        assert!(matches!(&e, Error::Validation(m) if m == "sg.g must be positive"), "{e}");
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let e = parse_config("scenario = stern-gerlach\nsg.gg = 3").unwrap_err();
        let Error::Validation(m) = e else { panic!() };
        assert!(m.contains("sg.gg") && m.contains("sg.g,") && m.contains("sg.path"), "{m}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_config("# comment\nsg.g = 3\nnonsense\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_config("sg.g = 3\nsg.g = 4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.6"), Some(Complex64::new(0.6, 0.0)));
        assert_eq!(parse_complex("0.8i"), Some(Complex64::new(0.0, 0.8)));
        assert_eq!(parse_complex("0.6-0.8i"), Some(Complex64::new(0.6, -0.8)));
        assert_eq!(parse_complex("1e-3+2e-1i"), Some(Complex64::new(1e-3, 0.2)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn mixed_prefixes_need_a_scenario() {
        assert!(parse_config("sg.g = 3\nprobe.lambda = 1").is_err());
        assert!(parse_config("scenario = positivity-probe\nsg.g = 3").is_err());
    }

    #[test]
    fn spin_must_be_normalised() {
        let e = parse_config("sg.c_plus = 1\nsg.c_minus = 1").unwrap_err();
        assert!(matches!(e, Error::Validation(_)));
        let c = parse_config("sg.c_plus = 0.6\nsg.c_minus = 0.8i").unwrap();
        let ScenarioParams::SternGerlach { spin, .. } = c.params else { panic!() };
        assert_eq!(spin.c_minus, Complex64::new(0.0, 0.8));
    }

    #[test]
    fn overrides_update_the_record() {
        let c = parse_config("scenario = hit-sample").unwrap().with_overrides(Some(9), Some("x".into()), true);
        assert_eq!(c.seed, 9);
        assert_eq!(c.resolved["seed"], json!(9));
        assert!(c.dump_elements);
        assert!(!c.defaulted.contains(&"seed".to_string()));
    }
}
