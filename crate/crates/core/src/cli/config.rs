//! Scenario files: flat `key = value` pairs under `[system]`, `[solver]`
//! and `[detection]` headers. `#` starts a comment.
//!
//! ```text
//! name = example1
//!
//! [system]
//! alpha = 0.1, 0.4, 0.6, 0.9
//! q1 = 0.5
//! q2 = 1.5
//! p11 = 1.5
//! p12 = 3.6
//! p21 = 0.5
//! p22 = 2.4
//! x0 = 1
//! y0 = 1.2
//!
//! [solver]
//! T = 1.5
//! N = 4096
//!
//! [detection]
//! threshold = 1e8
//! budget = 5
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::bounds::PowerLawParams;
use crate::solver::DEFAULT_OVERFLOW_THRESHOLD;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key `{key}` in [{section}]")]
    Missing { section: &'static str, key: &'static str },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub const DEFAULT_STEPS: usize = 4096;
pub const DEFAULT_BUDGET: u32 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub alphas: Vec<f64>,
    /// `alpha` holds the first entry of `alphas`.
    pub system: PowerLawParams,
    /// Horizon; when absent, commands derive one from the blow-up bound.
    pub horizon: Option<f64>,
    pub steps: usize,
    pub threshold: f64,
    pub budget: u32,
}

impl ScenarioConfig {
    pub fn params(&self, alpha: f64) -> PowerLawParams {
        self.system.with_alpha(alpha)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Section {
    Top,
    System,
    Solver,
    Detection,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Top => "top level",
            Section::System => "system",
            Section::Solver => "solver",
            Section::Detection => "detection",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Top => &["name"],
            Section::System => &["alpha", "q1", "q2", "p11", "p12", "p21", "p22", "x0", "y0"],
            Section::Solver => &["T", "N"],
            Section::Detection => &["threshold", "budget"],
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

pub fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    parse(&text, &stem)
}

/// Parses a scenario; `default_name` is used when no `name` key is given.
pub fn parse(text: &str, default_name: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut section = Section::Top;
    let mut seen_sections: Vec<Section> = Vec::new();
    let mut entries: HashMap<(Section, &'static str), Entry> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("unterminated section header `{content}`"),
            })?;
            section = match header.trim() {
                "system" => Section::System,
                "solver" => Section::Solver,
                "detection" => Section::Detection,
                other => {
                    return Err(ConfigError::Syntax {
                        line,
                        message: format!("unknown section [{other}]"),
                    })
                }
            };
            if seen_sections.contains(&section) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("section [{}] appears twice", section.name()),
                });
            }
            seen_sections.push(section);
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let known = section
            .keys()
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("unknown key `{key}` in {}", section.name()),
            })?;
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: format!("key `{key}` has no value"),
            });
        }
        if let Some(prev) = entries.get(&(section, *known)) {
            return Err(ConfigError::Syntax {
                line,
                message: format!("key `{key}` already set on line {}", prev.line),
            });
        }
        entries.insert(
            (section, *known),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }

    if !seen_sections.contains(&Section::System) {
        return Err(ConfigError::Missing {
            section: "system",
            key: "alpha",
        });
    }

    let number = |section: Section, key: &'static str| -> Result<Option<(f64, usize)>, ConfigError> {
        entries
            .get(&(section, key))
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .map(|v| (v, e.line))
                    .map_err(|_| ConfigError::Syntax {
                        line: e.line,
                        message: format!("`{key}` must be a number, got `{}`", e.value),
                    })
            })
            .transpose()
    };
    let required = |key: &'static str| -> Result<(f64, usize), ConfigError> {
        number(Section::System, key)?.ok_or(ConfigError::Missing {
            section: "system",
            key,
        })
    };
    let check = |ok: bool, line: usize, message: String| -> Result<(), ConfigError> {
        if ok {
            Ok(())
        } else {
            Err(ConfigError::Syntax { line, message })
        }
    };

    let alpha_entry = entries
        .get(&(Section::System, "alpha"))
        .ok_or(ConfigError::Missing {
            section: "system",
            key: "alpha",
        })?;
    let mut alphas = Vec::new();
    for part in alpha_entry.value.split(',') {
        let part = part.trim();
        let a: f64 = part.parse().map_err(|_| ConfigError::Syntax {
            line: alpha_entry.line,
            message: format!("`alpha` entries must be numbers, got `{part}`"),
        })?;
        check(
            a > 0.0 && a < 1.0,
            alpha_entry.line,
            format!("alpha must lie in (0,1), got {a}"),
        )?;
        alphas.push(a);
    }

    let mut exps = [0.0; 6];
    for (slot, key) in exps.iter_mut().zip(["q1", "q2", "p11", "p12", "p21", "p22"]) {
        let (v, line) = required(key)?;
        check(v >= 0.0 && v.is_finite(), line, format!("`{key}` must be ≥ 0, got {v}"))?;
        *slot = v;
    }
    let mut inits = [0.0; 2];
    for (slot, key) in inits.iter_mut().zip(["x0", "y0"]) {
        let (v, line) = required(key)?;
        check(v > 0.0 && v.is_finite(), line, format!("`{key}` must be positive, got {v}"))?;
        *slot = v;
    }

    let horizon = match number(Section::Solver, "T")? {
        Some((v, line)) => {
            check(v > 0.0 && v.is_finite(), line, format!("`T` must be positive, got {v}"))?;
            Some(v)
        }
        None => None,
    };
    let steps = match entries.get(&(Section::Solver, "N")) {
        Some(e) => {
            let n: usize = e.value.parse().map_err(|_| ConfigError::Syntax {
                line: e.line,
                message: format!("`N` must be a positive integer, got `{}`", e.value),
            })?;
            check(n >= 1, e.line, "`N` must be at least 1".into())?;
            n
        }
        None => DEFAULT_STEPS,
    };
    let threshold = match number(Section::Detection, "threshold")? {
        Some((v, line)) => {
            check(v > 0.0 && v.is_finite(), line, format!("`threshold` must be positive, got {v}"))?;
            v
        }
        None => DEFAULT_OVERFLOW_THRESHOLD,
    };
    let budget = match entries.get(&(Section::Detection, "budget")) {
        Some(e) => {
            let b: u32 = e.value.parse().map_err(|_| ConfigError::Syntax {
                line: e.line,
                message: format!("`budget` must be a non-negative integer, got `{}`", e.value),
            })?;
            check(b <= 16, e.line, format!("`budget` of {b} doublings is too large"))?;
            b
        }
        None => DEFAULT_BUDGET,
    };
    let name = entries
        .get(&(Section::Top, "name"))
        .map(|e| e.value.clone())
        .unwrap_or_else(|| default_name.to_string());
    if let Some(e) = entries.get(&(Section::Top, "name")) {
        check(
            !name.contains(['/', '\\']),
            e.line,
            "`name` must not contain path separators".into(),
        )?;
    }

    let [q1, q2, p11, p12, p21, p22] = exps;
    let [x0, y0] = inits;
    Ok(ScenarioConfig {
        name,
        system: PowerLawParams {
            alpha: alphas[0],
            q1,
            q2,
            p11,
            p12,
            p21,
            p22,
            x0,
            y0,
        },
        alphas,
        horizon,
        steps,
        threshold,
        budget,
    })
}

/// Serializes a scenario back to the file format.
pub fn render(config: &ScenarioConfig) -> String {
    let p = &config.system;
    let alphas: Vec<String> = config.alphas.iter().map(|a| a.to_string()).collect();
    let mut s = format!(
        "name = {}\n\n[system]\nalpha = {}\nq1 = {}\nq2 = {}\np11 = {}\np12 = {}\np21 = {}\np22 = {}\nx0 = {}\ny0 = {}\n\n[solver]\n",
        config.name,
        alphas.join(", "),
        p.q1,
        p.q2,
        p.p11,
        p.p12,
        p.p21,
        p.p22,
        p.x0,
        p.y0
    );
    if let Some(t) = config.horizon {
        s.push_str(&format!("T = {t}\n"));
    }
    s.push_str(&format!(
        "N = {}\n\n[detection]\nthreshold = {}\nbudget = {}\n",
        config.steps, config.threshold, config.budget
    ));
    s
}
