//! Scenario configuration: a flat `key = value` file, `--set key=value`
//! assignments and per-key flags, applied in that order.

use std::fs;
use std::path::Path;

use squeezed_engine::emp::LogEmpForm;
use squeezed_engine::{Params, Squeeze, Variable};

use crate::error::CliError;

/// What kind of value a key takes; used for help text and validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Real,
    Count,
    Flag,
    Choice(&'static [&'static str]),
    Name,
}

pub struct KeySpec {
    pub name: &'static str,
    pub kind: KeyKind,
    pub help: &'static str,
}

const FITS: &[&str] = &["none", "linear", "quadratic", "sech"];
const FORMS: &[&str] = &["unit", "modified"];
const VARIABLES: &[&str] = &["x", "xh", "xc", "Ea", "ph"];

/// Every recognised configuration key.
pub const KEYS: &[KeySpec] = &[
    KeySpec {
        name: "E1",
        kind: KeyKind::Real,
        help: "ground doublet energy (E1 = E2)",
    },
    KeySpec {
        name: "E2",
        kind: KeyKind::Real,
        help: "second ground level, must equal E1",
    },
    KeySpec {
        name: "Eb",
        kind: KeyKind::Real,
        help: "lower excited level",
    },
    KeySpec {
        name: "Ea",
        kind: KeyKind::Real,
        help: "upper excited level",
    },
    KeySpec {
        name: "g",
        kind: KeyKind::Real,
        help: "system-cavity coupling",
    },
    KeySpec {
        name: "r",
        kind: KeyKind::Real,
        help: "system-bath coupling",
    },
    KeySpec {
        name: "tau",
        kind: KeyKind::Real,
        help: "dephasing rate",
    },
    KeySpec {
        name: "Th",
        kind: KeyKind::Real,
        help: "hot reservoir temperature",
    },
    KeySpec {
        name: "Tc",
        kind: KeyKind::Real,
        help: "cold reservoir temperature",
    },
    KeySpec {
        name: "Tl",
        kind: KeyKind::Real,
        help: "cavity temperature",
    },
    KeySpec {
        name: "x",
        kind: KeyKind::Real,
        help: "cavity squeezing (10 stands in for infinity)",
    },
    KeySpec {
        name: "xh",
        kind: KeyKind::Real,
        help: "hot reservoir squeezing",
    },
    KeySpec {
        name: "xc",
        kind: KeyKind::Real,
        help: "cold reservoir squeezing",
    },
    KeySpec {
        name: "ph",
        kind: KeyKind::Real,
        help: "hot coherence parameter in [0, 1]",
    },
    KeySpec {
        name: "pc",
        kind: KeyKind::Real,
        help: "cold coherence parameter in [0, 1]",
    },
    KeySpec {
        name: "t_final",
        kind: KeyKind::Real,
        help: "integration horizon (default 200/r)",
    },
    KeySpec {
        name: "dt",
        kind: KeyKind::Real,
        help: "integration step (default 0.01/max(r, g^2 (Nl+1)))",
    },
    KeySpec {
        name: "stride",
        kind: KeyKind::Count,
        help: "emit every n-th integration step",
    },
    KeySpec {
        name: "steady_only",
        kind: KeyKind::Flag,
        help: "emit only the linear-solve steady state",
    },
    KeySpec {
        name: "variable",
        kind: KeyKind::Choice(VARIABLES),
        help: "parameter released for power maximization",
    },
    KeySpec {
        name: "lower",
        kind: KeyKind::Real,
        help: "lower bound of the optimized parameter",
    },
    KeySpec {
        name: "upper",
        kind: KeyKind::Real,
        help: "upper bound of the optimized parameter",
    },
    KeySpec {
        name: "grid_points",
        kind: KeyKind::Count,
        help: "coarse grid size of the maximizer",
    },
    KeySpec {
        name: "refine_tol",
        kind: KeyKind::Real,
        help: "golden-section tolerance on the maximizer",
    },
    KeySpec {
        name: "etac_min",
        kind: KeyKind::Real,
        help: "first Carnot efficiency of the EMP grid",
    },
    KeySpec {
        name: "etac_max",
        kind: KeyKind::Real,
        help: "last Carnot efficiency of the EMP grid",
    },
    KeySpec {
        name: "etac_points",
        kind: KeyKind::Count,
        help: "Carnot efficiency grid size (Tc = Th (1 - etaC))",
    },
    KeySpec {
        name: "fit",
        kind: KeyKind::Choice(FITS),
        help: "fit appended to emp output",
    },
    KeySpec {
        name: "eta_l_form",
        kind: KeyKind::Choice(FORMS),
        help: "denominator of the logarithmic EMP estimate",
    },
    KeySpec {
        name: "sweep",
        kind: KeyKind::Name,
        help: "parameter scanned by `sweep`",
    },
    KeySpec {
        name: "from",
        kind: KeyKind::Real,
        help: "first value of the sweep",
    },
    KeySpec {
        name: "to",
        kind: KeyKind::Real,
        help: "last value of the sweep",
    },
    KeySpec {
        name: "points",
        kind: KeyKind::Count,
        help: "number of sweep values",
    },
];

pub fn key_spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitChoice {
    None,
    Linear,
    Quadratic,
    Sech,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: Params,
    pub squeeze: Squeeze,
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    pub stride: usize,
    pub steady_only: bool,
    pub variable: Variable,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub grid_points: usize,
    pub refine_tol: f64,
    pub etac_min: f64,
    pub etac_max: f64,
    pub etac_points: usize,
    pub fit: FitChoice,
    pub eta_l_form: LogEmpForm,
    pub sweep: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: Params::reference(),
            squeeze: Squeeze::unsqueezed(0.5, 0.5),
            t_final: None,
            dt: None,
            stride: 100,
            steady_only: false,
            variable: Variable::X,
            lower: None,
            upper: None,
            grid_points: 256,
            refine_tol: 1e-7,
            etac_min: 0.05,
            etac_max: 0.6,
            etac_points: 12,
            fit: FitChoice::None,
            eta_l_form: LogEmpForm::Unit,
            sweep: "x".into(),
            from: 0.0,
            to: 5.0,
            points: 51,
        }
    }
}

fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("`{key}` expects a number, got `{value}`")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!(
            "`{key}` must be finite, got `{value}`"
        )));
    }
    Ok(v)
}

fn parse_count(key: &str, value: &str) -> Result<usize, CliError> {
    value.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "`{key}` expects a non-negative integer, got `{value}`"
        ))
    })
}

fn parse_flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(CliError::Usage(format!(
            "`{key}` expects true or false, got `{value}`"
        ))),
    }
}

/// Mutable reference to a real-valued physical parameter by key.
pub fn real_slot<'a>(
    params: &'a mut Params,
    sq: &'a mut Squeeze,
    key: &str,
) -> Option<&'a mut f64> {
    Some(match key {
        "E1" => &mut params.e1,
        "E2" => &mut params.e2,
        "Eb" => &mut params.eb,
        "Ea" => &mut params.ea,
        "g" => &mut params.g,
        "r" => &mut params.r,
        "tau" => &mut params.tau,
        "Th" => &mut params.th,
        "Tc" => &mut params.tc,
        "Tl" => &mut params.tl,
        "x" => &mut sq.x,
        "xh" => &mut sq.xh,
        "xc" => &mut sq.xc,
        "ph" => &mut sq.ph,
        "pc" => &mut sq.pc,
        _ => return None,
    })
}

impl ScenarioConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if let Some(slot) = real_slot(&mut self.params, &mut self.squeeze, key) {
            *slot = parse_real(key, value)?;
            return Ok(());
        }
        match key {
            "t_final" => self.t_final = Some(parse_real(key, value)?),
            "dt" => self.dt = Some(parse_real(key, value)?),
            "stride" => self.stride = parse_count(key, value)?,
            "steady_only" => self.steady_only = parse_flag(key, value)?,
            "variable" => {
                self.variable = value
                    .trim()
                    .parse()
                    .map_err(|e| CliError::Usage(format!("{e}")))?;
            }
            "lower" => self.lower = Some(parse_real(key, value)?),
            "upper" => self.upper = Some(parse_real(key, value)?),
            "grid_points" => self.grid_points = parse_count(key, value)?,
            "refine_tol" => self.refine_tol = parse_real(key, value)?,
            "etac_min" => self.etac_min = parse_real(key, value)?,
            "etac_max" => self.etac_max = parse_real(key, value)?,
            "etac_points" => self.etac_points = parse_count(key, value)?,
            "fit" => {
                self.fit = match value.trim() {
                    "none" => FitChoice::None,
                    "linear" => FitChoice::Linear,
                    "quadratic" => FitChoice::Quadratic,
                    "sech" => FitChoice::Sech,
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown fit `{other}` (expected one of {FITS:?})"
                        )))
                    }
                }
            }
            "eta_l_form" => {
                self.eta_l_form = match value.trim() {
                    "unit" => LogEmpForm::Unit,
                    "modified" => LogEmpForm::Modified,
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown form `{other}` (expected unit or modified)"
                        )))
                    }
                }
            }
            "sweep" => {
                let name = value.trim();
                let mut probe = (Params::reference(), Squeeze::default());
                if real_slot(&mut probe.0, &mut probe.1, name).is_none() {
                    return Err(CliError::Usage(format!(
                        "cannot sweep `{name}`: not a physical parameter"
                    )));
                }
                self.sweep = name.to_string();
            }
            "from" => self.from = parse_real(key, value)?,
            "to" => self.to = parse_real(key, value)?,
            "points" => self.points = parse_count(key, value)?,
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown configuration key `{key}`"
                )))
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, overrides: &[(String, String)]) -> Result<(), CliError> {
        overrides.iter().try_for_each(|(k, v)| self.set(k, v))
    }

    /// Physical parameters as `(key, value)` pairs, for output headers.
    pub fn physical_entries(&self) -> Vec<(&'static str, f64)> {
        let (p, s) = (&self.params, &self.squeeze);
        vec![
            ("E1", p.e1),
            ("E2", p.e2),
            ("Eb", p.eb),
            ("Ea", p.ea),
            ("g", p.g),
            ("r", p.r),
            ("tau", p.tau),
            ("Th", p.th),
            ("Tc", p.tc),
            ("Tl", p.tl),
            ("x", s.x),
            ("xh", s.xh),
            ("xc", s.xc),
            ("ph", s.ph),
            ("pc", s.pc),
        ]
    }

    /// Validates the physical part.
    pub fn validate(&self) -> Result<(), CliError> {
        self.params
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        self.squeeze
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Carnot-efficiency grid `etac_min..=etac_max`.
    pub fn etac_grid(&self) -> Result<Vec<f64>, CliError> {
        if self.etac_points == 0 {
            return Err(CliError::Usage(
                "empty Carnot efficiency grid (etac_points = 0)".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.etac_min)
            || !(0.0..1.0).contains(&self.etac_max)
            || self.etac_min > self.etac_max
        {
            return Err(CliError::Usage(format!(
                "need 0 <= etac_min <= etac_max < 1, got {} and {}",
                self.etac_min, self.etac_max
            )));
        }
        Ok(linspace(self.etac_min, self.etac_max, self.etac_points))
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive; the last one is `b` exactly.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Reads a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text).map_err(|e| match e {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_assignment(line).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("line {}: {m}", lineno + 1)),
            other => other,
        })?);
    }
    Ok(out)
}

/// Splits `key=value` (whitespace around `=` allowed) and checks the key.
pub fn parse_assignment(s: &str) -> Result<(String, String), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{s}`")))?;
    let (k, v) = (k.trim(), v.trim());
    if key_spec(k).is_none() {
        return Err(CliError::Usage(format!("unknown configuration key `{k}`")));
    }
    if v.is_empty() {
        return Err(CliError::Usage(format!("missing value for `{k}`")));
    }
    Ok((k.to_string(), v.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_syntax() {
        let pairs =
            parse_config_text("# engine\nTh = 3 \n\n x=1.5 # inline\nfit=linear\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("Th".to_string(), "3".to_string()),
                ("x".to_string(), "1.5".to_string()),
                ("fit".to_string(), "linear".to_string())
            ]
        );
        assert!(parse_config_text("Th 3").is_err());
        assert!(parse_config_text("Tq = 3").is_err());
        assert!(parse_config_text("Th =").is_err());
    }

    #[test]
    fn later_assignments_win() {
        let mut c = ScenarioConfig::default();
        c.apply(&[
            ("Th".into(), "3".into()),
            ("Th".into(), "4".into()),
            ("variable".into(), "Ea".into()),
        ])
        .unwrap();
        assert_eq!(c.params.th, 4.0);
        assert_eq!(c.variable, Variable::Ea);
    }

    #[test]
    fn bad_values_are_usage_errors() {
        let mut c = ScenarioConfig::default();
        for (k, v) in [
            ("Th", "hot"),
            ("Th", "inf"),
            ("points", "-1"),
            ("fit", "cubic"),
            ("sweep", "stride"),
            ("steady_only", "maybe"),
        ] {
            assert!(matches!(c.set(k, v), Err(CliError::Usage(_))), "{k}={v}");
        }
    }

    #[test]
    fn grid_checks() {
        let mut c = ScenarioConfig::default();
        assert_eq!(c.etac_grid().unwrap().len(), 12);
        assert_eq!(*c.etac_grid().unwrap().last().unwrap(), 0.6);
        c.etac_points = 0;
        assert!(c.etac_grid().is_err());
        c.etac_points = 3;
        c.etac_max = 1.0;
        assert!(c.etac_grid().is_err());
    }

    #[test]
    fn every_key_is_settable() {
        let samples = |k: &KeySpec| match k.kind {
            KeyKind::Real => "0.1",
            KeyKind::Count => "20",
            KeyKind::Flag => "true",
            KeyKind::Choice(c) => c[0],
            KeyKind::Name => "xc",
        };
        for k in KEYS {
            let mut c = ScenarioConfig::default();
            c.set(k.name, samples(k))
                .unwrap_or_else(|e| panic!("{}: {e}", k.name));
        }
    }
}
