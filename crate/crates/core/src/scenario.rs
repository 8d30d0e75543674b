//! Scenario configuration: strict TOML parsing and the built-in presets.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::atoms::{builtin_atom, detuning_from_multiple, rabi_from_intensity, AtomSpec, Model};
use crate::error::Result;
use crate::initial_state::{normalize_gamma, AtomAmplitudes, FieldAmplitudes, DEFAULT_TAIL_TOL};

pub const DEFAULT_T_START: f64 = 0.0;
pub const DEFAULT_T_END: f64 = 500.0;
pub const DEFAULT_STEPS: usize = 2000;

/// Keys that must appear in every scenario file.
pub const REQUIRED_KEYS: [&str; 7] = [
    "atom",
    "intensity_ratio_1",
    "intensity_ratio_2",
    "detuning_multiple",
    "nbar1",
    "nbar2",
    "zetas",
];

/// Optional keys and their defaults.
pub const OPTIONAL_KEYS: [(&str, &str); 11] = [
    ("name", "file stem"),
    ("delta23_multiple", "detuning_multiple"),
    ("phase1", "0"),
    ("phase2", "0"),
    ("thetas", "[0, 0, 0]"),
    ("tail_tol", "1e-12"),
    ("t_start", "0"),
    ("t_end", "500"),
    ("steps", "2000"),
    ("snapshots", "[]"),
    ("husimi", "true"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax(String),
    Keys { missing: Vec<String>, unknown: Vec<String> },
    Invalid { key: String, message: String },
    UnknownPreset(String),
    Read { path: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax(m) => write!(f, "config parse error: {m}"),
            ConfigError::Keys { missing, unknown } => {
                let mut parts = Vec::new();
                if !missing.is_empty() {
                    parts.push(format!("missing key(s): {}", missing.join(", ")));
                }
                if !unknown.is_empty() {
                    parts.push(format!("unknown key(s): {}", unknown.join(", ")));
                }
                write!(f, "config error: {}", parts.join("; "))
            }
            ConfigError::Invalid { key, message } => write!(f, "config error: key '{key}': {message}"),
            ConfigError::UnknownPreset(name) => write!(
                f,
                "'{name}' is neither a readable file nor a preset (presets: {}, optionally prefixed by li6/ or rb87/)",
                PRESETS.join(", ")
            ),
            ConfigError::Read { path, message } => write!(f, "cannot read {path}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Inline atom table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomTable {
    label: Option<String>,
    omega1: f64,
    omega2: f64,
    omega3: f64,
    gamma_bar: f64,
    time_unit_ns: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AtomChoice {
    Name(String),
    Table(AtomTable),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    atom: AtomChoice,
    intensity_ratio_1: f64,
    intensity_ratio_2: f64,
    detuning_multiple: f64,
    delta23_multiple: Option<f64>,
    nbar1: f64,
    nbar2: f64,
    phase1: Option<f64>,
    phase2: Option<f64>,
    zetas: [f64; 3],
    thetas: Option<[f64; 3]>,
    tail_tol: Option<f64>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    steps: Option<usize>,
    snapshots: Option<Vec<f64>>,
    husimi: Option<bool>,
}

/// A fully resolved scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub atom: AtomSpec,
    /// Beam intensities in units of the saturation intensity.
    pub intensity_ratio_1: f64,
    pub intensity_ratio_2: f64,
    /// `Delta13 = detuning_multiple * Gamma`.
    pub detuning_multiple: f64,
    /// `Delta23 = delta23_multiple * Gamma`.
    pub delta23_multiple: f64,
    pub nbar1: f64,
    pub nbar2: f64,
    pub phase1: f64,
    pub phase2: f64,
    pub zetas: [f64; 3],
    pub thetas: [f64; 3],
    pub tail_tol: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub snapshots: Vec<f64>,
    pub husimi: bool,
}

impl ScenarioConfig {
    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        self.atom.validate().map_err(|e| invalid("atom", e.to_string()))?;
        for (key, v) in [
            ("intensity_ratio_1", self.intensity_ratio_1),
            ("intensity_ratio_2", self.intensity_ratio_2),
            ("nbar1", self.nbar1),
            ("nbar2", self.nbar2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(key, format!("must be finite and non-negative, got {v}")));
            }
        }
        if self.intensity_ratio_1 == 0.0 && self.intensity_ratio_2 == 0.0 {
            return Err(invalid("intensity_ratio_1", "both intensity ratios are zero; the atom is uncoupled"));
        }
        for (key, v) in [
            ("detuning_multiple", self.detuning_multiple),
            ("delta23_multiple", self.delta23_multiple),
            ("phase1", self.phase1),
            ("phase2", self.phase2),
            ("t_start", self.t_start),
            ("t_end", self.t_end),
        ] {
            if !v.is_finite() {
                return Err(invalid(key, format!("must be finite, got {v}")));
            }
        }
        if self.zetas.iter().any(|z| !(z.is_finite() && *z >= 0.0)) {
            return Err(invalid("zetas", "moduli must be finite and non-negative"));
        }
        if self.zetas.iter().all(|z| *z == 0.0) {
            return Err(invalid("zetas", "at least one atomic modulus must be non-zero"));
        }
        if self.thetas.iter().any(|t| !t.is_finite()) {
            return Err(invalid("thetas", "phases must be finite"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(invalid("tail_tol", format!("must lie in (0, 1), got {}", self.tail_tol)));
        }
        if self.steps < 1 {
            return Err(invalid("steps", "must be at least 1"));
        }
        if self.t_end < self.t_start {
            return Err(invalid("t_end", format!("t_end ({}) is before t_start ({})", self.t_end, self.t_start)));
        }
        if self.snapshots.iter().any(|t| !t.is_finite()) {
            return Err(invalid("snapshots", "snapshot times must be finite"));
        }
        Ok(())
    }

    pub fn mu13(&self) -> Result<f64> {
        rabi_from_intensity(self.atom.gamma_bar, self.intensity_ratio_1)
    }

    pub fn mu23(&self) -> Result<f64> {
        rabi_from_intensity(self.atom.gamma_bar, self.intensity_ratio_2)
    }

    pub fn delta13(&self) -> f64 {
        detuning_from_multiple(self.atom.gamma_bar, self.detuning_multiple)
    }

    pub fn delta23(&self) -> f64 {
        detuning_from_multiple(self.atom.gamma_bar, self.delta23_multiple)
    }

    pub fn model(&self) -> Result<Model> {
        Model::new(self.atom.clone(), self.mu13()?, self.mu23()?, self.delta13(), self.delta23())
    }

    pub fn field(&self) -> Result<FieldAmplitudes> {
        FieldAmplitudes::from_mean_photons(self.nbar1, self.phase1, self.nbar2, self.phase2)
    }

    pub fn atom_amplitudes(&self) -> Result<AtomAmplitudes> {
        normalize_gamma(self.zetas, self.thetas)
    }

    /// `steps + 1` equally spaced times from `t_start` to `t_end`.
    pub fn times(&self) -> Vec<f64> {
        let h = (self.t_end - self.t_start) / self.steps as f64;
        (0..=self.steps)
            .map(|i| if i == self.steps { self.t_end } else { self.t_start + i as f64 * h })
            .collect()
    }
}

fn resolve_atom(choice: AtomChoice) -> std::result::Result<AtomSpec, ConfigError> {
    match choice {
        AtomChoice::Name(name) => builtin_atom(&name).map_err(|e| invalid("atom", e.to_string())),
        AtomChoice::Table(t) => AtomSpec::new(
            t.label.unwrap_or_else(|| "custom".into()),
            t.omega1,
            t.omega2,
            t.omega3,
            t.gamma_bar,
            t.time_unit_ns,
        )
        .map_err(|e| invalid("atom", e.to_string())),
    }
}

/// Strict parse of a TOML scenario. `default_name` is used when the file
/// has no `name` key.
pub fn parse_config(text: &str, default_name: &str) -> std::result::Result<ScenarioConfig, ConfigError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let known: Vec<&str> = REQUIRED_KEYS
        .iter()
        .copied()
        .chain(OPTIONAL_KEYS.iter().map(|(k, _)| *k))
        .collect();
    let missing: Vec<String> = REQUIRED_KEYS
        .iter()
        .filter(|k| !table.contains_key(**k))
        .map(|k| k.to_string())
        .collect();
    let mut unknown: Vec<String> = table
        .keys()
        .filter(|k| !known.contains(&k.as_str()))
        .cloned()
        .collect();
    unknown.sort();
    if !missing.is_empty() || !unknown.is_empty() {
        return Err(ConfigError::Keys { missing, unknown });
    }
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let detuning_multiple = raw.detuning_multiple;
    let config = ScenarioConfig {
        name: raw.name.unwrap_or_else(|| default_name.to_string()),
        atom: resolve_atom(raw.atom)?,
        intensity_ratio_1: raw.intensity_ratio_1,
        intensity_ratio_2: raw.intensity_ratio_2,
        detuning_multiple,
        delta23_multiple: raw.delta23_multiple.unwrap_or(detuning_multiple),
        nbar1: raw.nbar1,
        nbar2: raw.nbar2,
        phase1: raw.phase1.unwrap_or(0.0),
        phase2: raw.phase2.unwrap_or(0.0),
        zetas: raw.zetas,
        thetas: raw.thetas.unwrap_or([0.0; 3]),
        tail_tol: raw.tail_tol.unwrap_or(DEFAULT_TAIL_TOL),
        t_start: raw.t_start.unwrap_or(DEFAULT_T_START),
        t_end: raw.t_end.unwrap_or(DEFAULT_T_END),
        steps: raw.steps.unwrap_or(DEFAULT_STEPS),
        snapshots: raw.snapshots.unwrap_or_default(),
        husimi: raw.husimi.unwrap_or(true),
    };
    config.validate()?;
    Ok(config)
}

/// Preset names (the atom defaults to `li6`).
pub const PRESETS: [&str; 6] = ["state1", "state2", "state3", "state4", "raman1", "raman2"];

/// A preset by name, e.g. `state1`, `li6/raman1` or `rb87/state4`.
///
/// Time grids are stretched by `Gamma_li6 / Gamma_atom` so that every atom
/// covers the same number of Rabi periods.
pub fn preset(name: &str) -> std::result::Result<ScenarioConfig, ConfigError> {
    let (atom_name, base) = match name.split_once('/') {
        Some((a, b)) => (a, b),
        None => ("li6", name),
    };
    let atom = builtin_atom(atom_name).map_err(|_| ConfigError::UnknownPreset(name.to_string()))?;
    let li6 = builtin_atom("li6").expect("built in");
    // (I1, I2, n, nbar1, nbar2, zetas)
    let (i1, i2, n, nbar1, nbar2, zetas) = match base {
        "state1" => (3.0, 3.0, 0.0, 3.0, 3.0, [1.0, 0.0, 0.0]),
        "state2" => (3.0, 3.0, 5.0, 3.0, 3.0, [0.0, 1.0, 0.0]),
        "state3" => (3.0, 3.0, 0.0, 3.0, 3.0, [0.0, 0.0, 1.0]),
        "state4" => (3.0, 3.0, 0.0, 3.0, 3.0, [1.0, 1.0, 1.0]),
        "raman1" => (5.0, 0.25, 0.0, 3.0, 1.0, [0.0, 0.0, 1.0]),
        "raman2" => (1.0, 1.0, 10.0, 3.0, 3.0, [1.0, 0.0, 0.0]),
        _ => return Err(ConfigError::UnknownPreset(name.to_string())),
    };
    let stretch = li6.gamma_bar / atom.gamma_bar;
    let canonical = if atom_name == "li6" && !name.contains('/') {
        base.to_string()
    } else {
        format!("{}/{}", atom.label, base)
    };
    Ok(ScenarioConfig {
        name: canonical,
        atom,
        intensity_ratio_1: i1,
        intensity_ratio_2: i2,
        detuning_multiple: n,
        delta23_multiple: n,
        nbar1,
        nbar2,
        phase1: 0.0,
        phase2: 0.0,
        zetas,
        thetas: [0.0; 3],
        tail_tol: DEFAULT_TAIL_TOL,
        t_start: DEFAULT_T_START,
        t_end: DEFAULT_T_END * stretch,
        steps: DEFAULT_STEPS,
        snapshots: Vec::new(),
        husimi: true,
    })
}

/// Loads `spec` as a file if one exists at that path, else as a preset.
pub fn load_scenario(spec: &str) -> std::result::Result<ScenarioConfig, ConfigError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: spec.to_string(),
            message: e.to_string(),
        })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        return parse_config(&text, stem);
    }
    preset(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
atom = "li6"
intensity_ratio_1 = 3
intensity_ratio_2 = 3.0
detuning_multiple = 0
nbar1 = 3
nbar2 = 3
zetas = [1, 0, 0]
"#;

    #[test]
    fn empty_file_lists_every_missing_key() {
        let err = parse_config("", "x").unwrap_err();
        let ConfigError::Keys { missing, unknown } = err else { panic!("{err:?}") };
        assert_eq!(missing.len(), REQUIRED_KEYS.len());
        assert!(unknown.is_empty());
    }

    #[test]
    fn minimal_file_defaults() {
        let c = parse_config(MINIMAL, "mini").unwrap();
        assert_eq!(c.name, "mini");
        assert_eq!(c.delta23_multiple, 0.0);
        assert_eq!(c.steps, 2000);
        assert_eq!(c.t_end, 500.0);
        assert_eq!(c.tail_tol, 1e-12);
        assert_eq!(c.times().len(), 2001);
        assert_eq!(*c.times().last().unwrap(), 500.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = format!("{MINIMAL}\nbogus = 1\n");
        let err = parse_config(&text, "x").unwrap_err();
        assert_eq!(
            err,
            ConfigError::Keys {
                missing: vec![],
                unknown: vec!["bogus".into()]
            }
        );
    }

    #[test]
    fn negative_detuning_allowed() {
        let text = MINIMAL.replace("detuning_multiple = 0", "detuning_multiple = -3");
        let c = parse_config(&text, "x").unwrap();
        assert_eq!(c.detuning_multiple, -3.0);
        assert!(c.delta13() < 0.0);
    }

    #[test]
    fn bad_values() {
        let text = MINIMAL.replace("nbar1 = 3", "nbar1 = \"three\"");
        let err = parse_config(&text, "x").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax(ref m) if m.contains("nbar1")), "{err}");
        let text = MINIMAL.replace("intensity_ratio_1 = 3", "intensity_ratio_1 = -1");
        assert!(matches!(parse_config(&text, "x"), Err(ConfigError::Invalid { .. })));
        let text = format!("{MINIMAL}steps = 0\n");
        assert!(matches!(parse_config(&text, "x"), Err(ConfigError::Invalid { ref key, .. }) if key == "steps"));
        let text = format!("{MINIMAL}t_end = -1\n");
        assert!(parse_config(&text, "x").is_err());
        let text = MINIMAL.replace("zetas = [1, 0, 0]", "zetas = [0, 0, 0]");
        assert!(parse_config(&text, "x").is_err());
        let err = parse_config("atom = \n", "x").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax(ref m) if m.contains("line 1")), "{err}");
    }

    #[test]
    fn inline_atom() {
        let text = MINIMAL.replace(
            "atom = \"li6\"",
            "atom = { label = \"toy\", omega1 = 0.0, omega2 = 0.4, omega3 = 1.0, gamma_bar = 0.01, time_unit_ns = 1.0 }",
        );
        let c = parse_config(&text, "x").unwrap();
        assert_eq!(c.atom.label, "toy");
        let bad = text.replace("omega2 = 0.4", "omega2 = 1.4");
        assert!(parse_config(&bad, "x").is_err());
    }

    #[test]
    fn presets_resolve() {
        for p in PRESETS {
            let c = preset(p).unwrap();
            c.validate().unwrap();
            assert_eq!(c.atom.label, "li6");
            let rb = preset(&format!("rb87/{p}")).unwrap();
            assert_eq!(rb.atom.label, "rb87");
            assert_eq!(rb.name, format!("rb87/{p}"));
        }
        let s1 = preset("state1").unwrap();
        let g = s1.atom.gamma_bar;
        assert!((s1.mu13().unwrap() - g * 1.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(preset("state2").unwrap().detuning_multiple, 5.0);
        let r2 = preset("raman2").unwrap();
        assert!((r2.delta13() - 10.0 * g).abs() < 1e-16);
        assert!(matches!(preset("state9"), Err(ConfigError::UnknownPreset(_))));
        assert!(matches!(preset("cs133/state1"), Err(ConfigError::UnknownPreset(_))));
    }
}
