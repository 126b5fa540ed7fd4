//! Flat key=value run configuration: parsing with exhaustive error
//! reporting, canonical (byte-stable) serialization, and constructors for
//! the simulation objects.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dynamics::{
    make_initial, DtPolicy, Forcing, InitialCondition, RunOptions, Scheme, State, StepperConfig,
    SystemClass, SystemSpec,
};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, MAX_DIM};
use crate::spectral::TruncationRadius;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Viscous,
    Inviscid,
    Ideal,
    Full,
}

impl SystemKind {
    fn as_str(&self) -> &'static str {
        match self {
            SystemKind::Viscous => "viscous",
            SystemKind::Inviscid => "inviscid",
            SystemKind::Ideal => "ideal",
            SystemKind::Full => "full",
        }
    }

    fn default_nu(&self) -> f64 {
        match self {
            SystemKind::Viscous | SystemKind::Full => 0.01,
            _ => 0.0,
        }
    }

    fn default_kappa(&self) -> f64 {
        match self {
            SystemKind::Inviscid | SystemKind::Full => 0.01,
            _ => 0.0,
        }
    }

    fn matches(&self, nu: f64, kappa: f64) -> bool {
        let class = SystemClass::classify(nu, kappa);
        matches!(
            (self, class),
            (SystemKind::Viscous, SystemClass::Viscous)
                | (SystemKind::Inviscid, SystemClass::Inviscid)
                | (SystemKind::Ideal, SystemClass::Ideal)
                | (SystemKind::Full, SystemClass::Full)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingKind {
    Zero,
    UnitEn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Auto,
    Rk4,
    Rk4If,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtKind {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmoDepth {
    Auto,
    Fixed(usize),
}

/// Fully resolved run configuration; `serialize` and `parse` round-trip
/// byte-exactly on canonical text.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub schema_version: u32,
    pub system: SystemKind,
    pub nu: f64,
    pub kappa: f64,
    pub forcing: ForcingKind,
    pub grid_dim: usize,
    pub grid_n: usize,
    pub radius: f64,
    pub s: f64,
    pub scheme: SchemeKind,
    pub dt: DtKind,
    pub dt_max: f64,
    pub cfl_safety: f64,
    pub t_end: f64,
    pub seed: u64,
    pub ic_kind: IcKind,
    pub ic_amplitude: f64,
    pub ic_decay_p: f64,
    pub ic_mode: [i64; MAX_DIM],
    pub diagnostics_every: usize,
    pub bmo_depth: BmoDepth,
    pub blowup_ceiling: f64,
    pub output_dir: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    TaylorGreen,
    SingleMode,
    RandomSpectrum,
    RandomTheta,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            system: SystemKind::Viscous,
            nu: 0.01,
            kappa: 0.0,
            forcing: ForcingKind::UnitEn,
            grid_dim: 2,
            grid_n: 64,
            radius: 16.0,
            s: 2.0,
            scheme: SchemeKind::Auto,
            dt: DtKind::Auto,
            dt_max: 0.1,
            cfl_safety: 0.5,
            t_end: 1.0,
            seed: 0,
            ic_kind: IcKind::TaylorGreen,
            ic_amplitude: 1.0,
            ic_decay_p: 4.0,
            ic_mode: [1, 0, 0],
            diagnostics_every: 10,
            bmo_depth: BmoDepth::Auto,
            blowup_ceiling: 1e6,
            output_dir: "out".into(),
        }
    }
}

/// Key order of the canonical serialization.
const KEYS: &[&str] = &[
    "schema_version",
    "system",
    "nu",
    "kappa",
    "forcing",
    "grid.dim",
    "grid.n",
    "R",
    "s",
    "scheme",
    "dt",
    "dt.max",
    "cfl.safety",
    "t_end",
    "seed",
    "ic.kind",
    "ic.amplitude",
    "ic.decay_p",
    "ic.mode",
    "diagnostics.every",
    "bmo.depth",
    "blowup.ceiling",
    "output.dir",
];

impl RunConfig {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let value = self.value_string(key);
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }

    fn value_string(&self, key: &str) -> String {
        match key {
            "schema_version" => self.schema_version.to_string(),
            "system" => self.system.as_str().into(),
            "nu" => format!("{}", self.nu),
            "kappa" => format!("{}", self.kappa),
            "forcing" => match self.forcing {
                ForcingKind::Zero => "zero".into(),
                ForcingKind::UnitEn => "unit_en".into(),
            },
            "grid.dim" => self.grid_dim.to_string(),
            "grid.n" => self.grid_n.to_string(),
            "R" => format!("{}", self.radius),
            "s" => format!("{}", self.s),
            "scheme" => match self.scheme {
                SchemeKind::Auto => "auto".into(),
                SchemeKind::Rk4 => "rk4".into(),
                SchemeKind::Rk4If => "rk4_if".into(),
            },
            "dt" => match self.dt {
                DtKind::Auto => "auto".into(),
                DtKind::Fixed(v) => format!("{v}"),
            },
            "dt.max" => format!("{}", self.dt_max),
            "cfl.safety" => format!("{}", self.cfl_safety),
            "t_end" => format!("{}", self.t_end),
            "seed" => self.seed.to_string(),
            "ic.kind" => match self.ic_kind {
                IcKind::TaylorGreen => "taylor_green".into(),
                IcKind::SingleMode => "single_mode".into(),
                IcKind::RandomSpectrum => "random_spectrum".into(),
                IcKind::RandomTheta => "random_theta".into(),
            },
            "ic.amplitude" => format!("{}", self.ic_amplitude),
            "ic.decay_p" => format!("{}", self.ic_decay_p),
            "ic.mode" => self.ic_mode[..self.grid_dim]
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
            "diagnostics.every" => self.diagnostics_every.to_string(),
            "bmo.depth" => match self.bmo_depth {
                BmoDepth::Auto => "auto".into(),
                BmoDepth::Fixed(d) => d.to_string(),
            },
            "blowup.ceiling" => format!("{}", self.blowup_ceiling),
            "output.dir" => self.output_dir.clone(),
            _ => unreachable!("unknown canonical key {key}"),
        }
    }
}

struct Issues(Vec<String>);

impl Issues {
    fn push(&mut self, line: usize, msg: impl Into<String>) {
        let msg = msg.into();
        if line == 0 {
            self.0.push(format!("(resolved): {msg}"));
        } else {
            self.0.push(format!("line {line}: {msg}"));
        }
    }
}

/// Parse configuration text; `overrides` are (key, value) pairs applied
/// after the file (reported with line 0 on error).
///
/// Either every key parses and validates, or the error lists *all* issues
/// with their line numbers.
pub fn parse_config_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut issues = Issues(Vec::new());
    // key -> (line, value)
    let mut raw: HashMap<String, (usize, String)> = HashMap::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            issues.push(lineno, format!("expected key = value, got '{trimmed}'"));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            issues.push(lineno, format!("unknown key '{key}'"));
            continue;
        }
        if raw.contains_key(&key) {
            issues.push(lineno, format!("duplicate key '{key}'"));
            continue;
        }
        raw.insert(key, (lineno, value));
    }
    for (key, value) in overrides {
        if !KEYS.contains(&key.as_str()) {
            issues.push(0, format!("unknown override key '{key}'"));
            continue;
        }
        raw.insert(key.clone(), (0, value.clone()));
    }

    let mut cfg = RunConfig::default();

    // typed extraction helpers
    macro_rules! take {
        ($key:expr, $parse:expr) => {
            raw.get($key).and_then(|(line, v)| match $parse(v.as_str()) {
                Ok(x) => Some((*line, x)),
                Err(msg) => {
                    issues.push(*line, format!("{}: {msg}", $key));
                    None
                }
            })
        };
    }
    fn p_f64(v: &str) -> std::result::Result<f64, String> {
        v.parse::<f64>().map_err(|_| format!("'{v}' is not a number"))
    }
    fn p_u64(v: &str) -> std::result::Result<u64, String> {
        v.parse::<u64>().map_err(|_| format!("'{v}' is not an unsigned integer"))
    }
    fn p_usize(v: &str) -> std::result::Result<usize, String> {
        v.parse::<usize>().map_err(|_| format!("'{v}' is not an unsigned integer"))
    }

    if let Some((line, v)) = take!("schema_version", p_u64) {
        if v != SCHEMA_VERSION as u64 {
            issues.push(line, format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}"));
        } else {
            cfg.schema_version = v as u32;
        }
    }

    let system_given = take!("system", |v: &str| match v {
        "viscous" => Ok(SystemKind::Viscous),
        "inviscid" => Ok(SystemKind::Inviscid),
        "ideal" => Ok(SystemKind::Ideal),
        "full" => Ok(SystemKind::Full),
        _ => Err(format!("'{v}' is not one of viscous|inviscid|ideal|full")),
    });
    let nu_given = take!("nu", p_f64);
    let kappa_given = take!("kappa", p_f64);

    // Resolve the (system, nu, kappa) triple: explicit values win, the
    // system key fills unstated coefficients, and contradictions are errors.
    match (system_given, nu_given, kappa_given) {
        (Some((_, sys)), nu, kappa) => {
            cfg.system = sys;
            cfg.nu = nu.map(|(_, v)| v).unwrap_or_else(|| sys.default_nu());
            cfg.kappa = kappa.map(|(_, v)| v).unwrap_or_else(|| sys.default_kappa());
            if cfg.nu >= 0.0 && cfg.kappa >= 0.0 && !sys.matches(cfg.nu, cfg.kappa) {
                let line = nu.map(|(l, _)| l).or(kappa.map(|(l, _)| l)).unwrap_or(0);
                issues.push(
                    line,
                    format!(
                        "system = {} is inconsistent with nu = {}, kappa = {}",
                        sys.as_str(),
                        cfg.nu,
                        cfg.kappa
                    ),
                );
            }
        }
        (None, nu, kappa) => {
            cfg.nu = nu.map(|(_, v)| v).unwrap_or(cfg.nu);
            cfg.kappa = kappa.map(|(_, v)| v).unwrap_or(cfg.kappa);
            cfg.system = match SystemClass::classify(cfg.nu.max(0.0), cfg.kappa.max(0.0)) {
                SystemClass::Viscous => SystemKind::Viscous,
                SystemClass::Inviscid => SystemKind::Inviscid,
                SystemClass::Ideal => SystemKind::Ideal,
                SystemClass::Full => SystemKind::Full,
            };
        }
    }
    if cfg.nu < 0.0 {
        let line = nu_given.map(|(l, _)| l).unwrap_or(0);
        issues.push(line, format!("nu must satisfy nu >= 0, got {}", cfg.nu));
    }
    if cfg.kappa < 0.0 {
        let line = kappa_given.map(|(l, _)| l).unwrap_or(0);
        issues.push(line, format!("kappa must satisfy kappa >= 0, got {}", cfg.kappa));
    }

    if let Some((_, v)) = take!("forcing", |v: &str| match v {
        "zero" => Ok(ForcingKind::Zero),
        "unit_en" => Ok(ForcingKind::UnitEn),
        _ => Err(format!("'{v}' is not one of zero|unit_en")),
    }) {
        cfg.forcing = v;
    }
    if let Some((line, v)) = take!("grid.dim", p_usize) {
        if v != 2 && v != 3 {
            issues.push(line, format!("grid.dim must be 2 or 3, got {v}"));
        } else {
            cfg.grid_dim = v;
        }
    }
    if let Some((line, v)) = take!("grid.n", p_usize) {
        if v < 8 || !v.is_power_of_two() {
            issues.push(line, format!("grid.n must be a power of two >= 8, got {v}"));
        } else {
            cfg.grid_n = v;
        }
    }
    if let Some((_, v)) = take!("R", p_f64) {
        cfg.radius = v;
    }
    if let Some((_, v)) = take!("s", p_f64) {
        cfg.s = v;
    }
    if let Some((_, v)) = take!("scheme", |v: &str| match v {
        "auto" => Ok(SchemeKind::Auto),
        "rk4" => Ok(SchemeKind::Rk4),
        "rk4_if" => Ok(SchemeKind::Rk4If),
        _ => Err(format!("'{v}' is not one of auto|rk4|rk4_if")),
    }) {
        cfg.scheme = v;
    }
    if let Some((line, v)) = take!("dt", |v: &str| {
        if v == "auto" {
            Ok(DtKind::Auto)
        } else {
            p_f64(v).map(DtKind::Fixed)
        }
    }) {
        if let DtKind::Fixed(x) = v {
            if !(x > 0.0) {
                issues.push(line, format!("dt must be positive or 'auto', got {x}"));
            }
        }
        cfg.dt = v;
    }
    if let Some((line, v)) = take!("dt.max", p_f64) {
        if !(v > 0.0) {
            issues.push(line, format!("dt.max must be positive, got {v}"));
        } else {
            cfg.dt_max = v;
        }
    }
    if let Some((line, v)) = take!("cfl.safety", p_f64) {
        if !(v > 0.0 && v <= 1.0) {
            issues.push(line, format!("cfl.safety must lie in (0, 1], got {v}"));
        } else {
            cfg.cfl_safety = v;
        }
    }
    if let Some((line, v)) = take!("t_end", p_f64) {
        if !(v >= 0.0) {
            issues.push(line, format!("t_end must be >= 0, got {v}"));
        } else {
            cfg.t_end = v;
        }
    }
    if let Some((_, v)) = take!("seed", p_u64) {
        cfg.seed = v;
    }
    if let Some((_, v)) = take!("ic.kind", |v: &str| match v {
        "taylor_green" => Ok(IcKind::TaylorGreen),
        "single_mode" => Ok(IcKind::SingleMode),
        "random_spectrum" => Ok(IcKind::RandomSpectrum),
        "random_theta" => Ok(IcKind::RandomTheta),
        _ => Err(format!(
            "'{v}' is not one of taylor_green|single_mode|random_spectrum|random_theta"
        )),
    }) {
        cfg.ic_kind = v;
    }
    if let Some((line, v)) = take!("ic.amplitude", p_f64) {
        if !v.is_finite() {
            issues.push(line, "ic.amplitude must be finite".to_string());
        } else {
            cfg.ic_amplitude = v;
        }
    }
    if let Some((line, v)) = take!("ic.decay_p", p_f64) {
        if !(v > 0.0) {
            issues.push(line, format!("ic.decay_p must be positive, got {v}"));
        } else {
            cfg.ic_decay_p = v;
        }
    }
    if let Some((line, v)) = take!("ic.mode", |v: &str| {
        let parts: Vec<&str> = v.split(',').map(str::trim).collect();
        if parts.len() < 2 || parts.len() > MAX_DIM {
            return Err(format!("ic.mode needs 2 or 3 comma-separated integers, got '{v}'"));
        }
        let mut mode = [0i64; MAX_DIM];
        for (i, p) in parts.iter().enumerate() {
            mode[i] = p.parse::<i64>().map_err(|_| format!("'{p}' is not an integer"))?;
        }
        Ok((mode, parts.len()))
    }) {
        let (mode, len) = v;
        if len != cfg.grid_dim && raw.contains_key("grid.dim") {
            issues.push(line, format!("ic.mode has {len} entries but grid.dim = {}", cfg.grid_dim));
        }
        cfg.ic_mode = mode;
    }
    if let Some((line, v)) = take!("diagnostics.every", p_usize) {
        if v == 0 {
            issues.push(line, "diagnostics.every must be >= 1".to_string());
        } else {
            cfg.diagnostics_every = v;
        }
    }
    if let Some((line, v)) = take!("bmo.depth", |v: &str| {
        if v == "auto" {
            Ok(BmoDepth::Auto)
        } else {
            p_usize(v).map(BmoDepth::Fixed)
        }
    }) {
        if let BmoDepth::Fixed(d) = v {
            if d == 0 {
                issues.push(line, "bmo.depth must be >= 1 or 'auto'".to_string());
            }
        }
        cfg.bmo_depth = v;
    }
    if let Some((line, v)) = take!("blowup.ceiling", p_f64) {
        if !(v > 0.0) {
            issues.push(line, format!("blowup.ceiling must be positive, got {v}"));
        } else {
            cfg.blowup_ceiling = v;
        }
    }
    if let Some((_, v)) = take!("output.dir", |v: &str| {
        if v.is_empty() {
            Err("output.dir must not be empty".to_string())
        } else {
            Ok(v.to_string())
        }
    }) {
        cfg.output_dir = v;
    }

    // cross-field validation (line numbers of the contributing keys when present)
    let line_of = |key: &str| raw.get(key).map(|(l, _)| *l).unwrap_or(0);
    if cfg.radius <= 0.0 {
        issues.push(line_of("R"), format!("R must be positive, got {}", cfg.radius));
    } else {
        if 3.0 * cfg.radius > cfg.grid_n as f64 {
            issues.push(
                line_of("R"),
                format!(
                    "R = {} must satisfy 3R <= grid.n = {} (dealias band)",
                    cfg.radius, cfg.grid_n
                ),
            );
        }
        if cfg.radius > (cfg.grid_n / 2 - 1) as f64 {
            issues.push(
                line_of("R"),
                format!("R = {} exceeds the lattice bound n/2 - 1", cfg.radius),
            );
        }
    }
    {
        let class = SystemClass::classify(cfg.nu.max(0.0), cfg.kappa.max(0.0));
        let min_s = class.min_s(cfg.grid_dim);
        if cfg.s <= min_s {
            issues.push(
                line_of("s"),
                format!("s = {} must exceed {} for {}", cfg.s, min_s, class.label()),
            );
        }
    }
    if let BmoDepth::Fixed(d) = cfg.bmo_depth {
        if d >= 1 && (d >= usize::BITS as usize || cfg.grid_n % (1usize << d) != 0) {
            issues.push(
                line_of("bmo.depth"),
                format!("grid.n = {} is not divisible by 2^{d}", cfg.grid_n),
            );
        }
    }
    if cfg.ic_kind == IcKind::SingleMode {
        let ksq: i64 = cfg.ic_mode.iter().map(|k| k * k).sum();
        if ksq == 0 {
            issues.push(line_of("ic.mode"), "ic.mode must be nonzero for single_mode".to_string());
        } else if (ksq as f64).sqrt() > cfg.radius {
            issues.push(
                line_of("ic.mode"),
                format!("ic.mode {:?} lies outside the truncation ball R = {}", &cfg.ic_mode[..cfg.grid_dim], cfg.radius),
            );
        }
        if cfg.ic_mode[cfg.grid_dim..].iter().any(|&k| k != 0) {
            issues.push(line_of("ic.mode"), "ic.mode has entries beyond grid.dim".to_string());
        }
    }

    if issues.0.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(issues.0.join("\n")))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_overrides(text, &[])
}

impl RunConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid_dim, self.grid_n)
    }

    pub fn truncation_radius(&self) -> Result<TruncationRadius> {
        TruncationRadius::new(self.radius, &self.grid()?)
    }

    pub fn forcing(&self) -> Forcing {
        match self.forcing {
            ForcingKind::Zero => Forcing::Zero,
            ForcingKind::UnitEn => Forcing::UnitLastAxis,
        }
    }

    pub fn system_spec(&self) -> Result<SystemSpec> {
        SystemSpec::new(
            self.grid()?,
            self.nu,
            self.kappa,
            self.forcing(),
            self.truncation_radius()?,
            self.s,
        )
    }

    pub fn stepper(&self) -> Result<StepperConfig> {
        let spec = self.system_spec()?;
        let scheme = match self.scheme {
            SchemeKind::Auto => StepperConfig::auto_scheme(&spec),
            SchemeKind::Rk4 => Scheme::Rk4,
            SchemeKind::Rk4If => Scheme::Rk4IntegratingFactor,
        };
        let dt = match self.dt {
            DtKind::Auto => DtPolicy::Auto,
            DtKind::Fixed(v) => DtPolicy::Fixed(v),
        };
        StepperConfig::new(scheme, dt, self.cfl_safety, self.dt_max)
    }

    pub fn resolved_bmo_depth(&self) -> usize {
        match self.bmo_depth {
            BmoDepth::Fixed(d) => d,
            BmoDepth::Auto => self.grid_n.trailing_zeros() as usize,
        }
    }

    pub fn run_options(&self) -> RunOptions {
        let mut opts = RunOptions::new(self.t_end, self.diagnostics_every, self.resolved_bmo_depth());
        opts.norm_ceiling = self.blowup_ceiling;
        opts
    }

    pub fn initial_condition(&self) -> InitialCondition {
        match self.ic_kind {
            IcKind::TaylorGreen => InitialCondition::TaylorGreen,
            IcKind::SingleMode => InitialCondition::SingleMode {
                k: self.ic_mode,
                amplitude: self.ic_amplitude,
            },
            IcKind::RandomSpectrum => InitialCondition::RandomSpectrum {
                decay_p: self.ic_decay_p,
                amplitude: self.ic_amplitude,
                seed: self.seed,
            },
            IcKind::RandomTheta => InitialCondition::RandomTheta {
                decay_p: self.ic_decay_p,
                amplitude: self.ic_amplitude,
                seed: self.seed,
            },
        }
    }

    pub fn initial_state(&self) -> Result<State> {
        make_initial(&self.initial_condition(), self.grid()?, self.truncation_radius()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_yields_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.system, SystemKind::Viscous);
        assert_eq!(cfg.nu, 0.01);
    }

    #[test]
    fn negative_nu_names_the_rule() {
        let err = parse_config("nu = -1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nu"), "{msg}");
        assert!(msg.contains(">= 0"), "{msg}");
        assert!(msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn all_errors_reported_with_line_numbers() {
        let text = "nu = -1\nbogus = 3\ngrid.n = 13\n";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("unknown key 'bogus'"), "{err}");
    }

    #[test]
    fn serialization_roundtrips_byte_exactly() {
        let mut cfg = RunConfig::default();
        cfg.nu = 0.0;
        cfg.kappa = 0.0;
        cfg.system = SystemKind::Ideal;
        cfg.s = 2.5;
        cfg.dt = DtKind::Fixed(1e-3);
        cfg.seed = 981;
        cfg.ic_kind = IcKind::RandomSpectrum;
        let text = cfg.serialize();
        let parsed = parse_config(&text).unwrap();
        assert_eq!(parsed, cfg);
        assert_eq!(parsed.serialize(), text);
    }

    #[test]
    fn system_key_fills_coefficients() {
        let cfg = parse_config("system = ideal\ns = 2.5\n").unwrap();
        assert_eq!(cfg.nu, 0.0);
        assert_eq!(cfg.kappa, 0.0);
        let err = parse_config("system = ideal\nnu = 0.3\ns = 2.5\n").unwrap_err();
        assert!(err.to_string().contains("inconsistent"), "{err}");
    }

    #[test]
    fn overrides_replace_file_values() {
        let cfg =
            parse_config_with_overrides("nu = 0.5\n", &[("nu".into(), "0.25".into())]).unwrap();
        assert_eq!(cfg.nu, 0.25);
        let err = parse_config_with_overrides("", &[("nope".into(), "1".into())]).unwrap_err();
        assert!(err.to_string().contains("override"), "{err}");
    }

    #[test]
    fn duplicate_keys_rejected() {
        let err = parse_config("nu = 0.1\nnu = 0.2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn radius_band_rule() {
        let err = parse_config("R = 30\n").unwrap_err();
        assert!(err.to_string().contains("dealias"), "{err}");
    }

    #[test]
    fn config_builds_simulation_objects() {
        let cfg = parse_config("grid.n = 32\nR = 10\ndt = 0.01\n").unwrap();
        let spec = cfg.system_spec().unwrap();
        assert_eq!(spec.grid().n(), 32);
        let stepper = cfg.stepper().unwrap();
        assert_eq!(stepper.scheme, Scheme::Rk4IntegratingFactor);
        let state = cfg.initial_state().unwrap();
        assert!(state.u.is_divergence_free(1e-12));
        assert_eq!(cfg.resolved_bmo_depth(), 5);
    }
}
