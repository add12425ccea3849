//! Run settings merged from command-line flags, an optional TOML config
//! file, and per-scenario defaults (flag wins, then file, then default).

use std::path::Path;

use beamnet::{Scheme, SolveConfig};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SettingsError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unknown scheme {name:?} (expected monolithic, staggered or hybrid)")]
    UnknownScheme { name: String },
}

/// Optional settings read from a TOML file; keys mirror the flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSettings {
    pub scheme: Option<String>,
    pub htol: Option<f64>,
    pub steps: Option<usize>,
    pub displacement: Option<f64>,
    pub tol_rel: Option<f64>,
    pub tol_abs: Option<f64>,
    pub max_iters: Option<usize>,
    pub bisections: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

/// Loads the config file when a path is given, otherwise empty settings.
pub fn load_settings(path: Option<&Path>) -> Result<FileSettings, SettingsError> {
    let Some(path) = path else {
        return Ok(FileSettings::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| SettingsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| SettingsError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Resolves a scheme name plus hybrid tolerance into a [`Scheme`].
pub fn parse_scheme(name: &str, htol: f64) -> Result<Scheme, SettingsError> {
    match name {
        "monolithic" => Ok(Scheme::Monolithic),
        "staggered" => Ok(Scheme::Staggered),
        "hybrid" => Ok(Scheme::Hybrid { h_tol: htol }),
        _ => Err(SettingsError::UnknownScheme { name: name.into() }),
    }
}

/// Display name for a scheme, matching the names `parse_scheme` accepts.
pub fn scheme_name(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Monolithic => "monolithic",
        Scheme::Staggered => "staggered",
        Scheme::Hybrid { .. } => "hybrid",
    }
}

/// Solver-related flags shared by every run command; `None` defers to the
/// config file and then the scenario default.
#[derive(Debug, Clone, Default)]
pub struct RunFlags {
    pub scheme: Option<String>,
    pub htol: Option<f64>,
    pub steps: Option<usize>,
    pub displacement: Option<f64>,
    pub tol_rel: Option<f64>,
    pub tol_abs: Option<f64>,
    pub max_iters: Option<usize>,
    pub bisections: Option<usize>,
}

/// Built-in fallbacks for one scenario.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioDefaults {
    pub scheme: &'static str,
    pub steps: usize,
    pub displacement: f64,
}

/// Merges flags, file settings and scenario defaults into a solve config.
pub fn solve_config(
    flags: &RunFlags,
    file: &FileSettings,
    defaults: ScenarioDefaults,
) -> Result<SolveConfig, SettingsError> {
    let scheme_name = flags
        .scheme
        .as_deref()
        .or(file.scheme.as_deref())
        .unwrap_or(defaults.scheme);
    let htol = flags.htol.or(file.htol).unwrap_or(0.01);
    let scheme = parse_scheme(scheme_name, htol)?;
    let steps = flags.steps.or(file.steps).unwrap_or(defaults.steps);
    let displacement = flags
        .displacement
        .or(file.displacement)
        .unwrap_or(defaults.displacement);
    let mut config = SolveConfig::new(scheme, displacement, steps);
    if let Some(tol_rel) = flags.tol_rel.or(file.tol_rel) {
        config.tol_rel = tol_rel;
    }
    if let Some(tol_abs) = flags.tol_abs.or(file.tol_abs) {
        config.tol_abs = Some(tol_abs);
    }
    if let Some(max_iters) = flags.max_iters.or(file.max_iters) {
        config.max_iters = max_iters;
    }
    if let Some(bisections) = flags.bisections.or(file.bisections) {
        config.max_bisections = bisections;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULTS: ScenarioDefaults = ScenarioDefaults {
        scheme: "hybrid",
        steps: 100,
        displacement: 1.0,
    };

    #[test]
    fn defaults_apply_when_nothing_is_set() {
        let config =
            solve_config(&RunFlags::default(), &FileSettings::default(), DEFAULTS)
                .unwrap();
        assert_eq!(config.scheme, Scheme::Hybrid { h_tol: 0.01 });
        assert_eq!(config.n_steps, 100);
        assert_eq!(config.total_displacement, 1.0);
        assert_eq!(config.max_iters, 500);
    }

    #[test]
    fn flags_override_file_which_overrides_defaults() {
        let file: FileSettings = toml::from_str(
            "scheme = \"staggered\"\nsteps = 50\ntol_rel = 1e-8\nseed = 3",
        )
        .unwrap();
        let flags = RunFlags {
            steps: Some(200),
            htol: Some(0.1),
            scheme: Some("hybrid".into()),
            ..RunFlags::default()
        };
        let config = solve_config(&flags, &file, DEFAULTS).unwrap();
        assert_eq!(config.scheme, Scheme::Hybrid { h_tol: 0.1 });
        assert_eq!(config.n_steps, 200);
        assert_eq!(config.tol_rel, 1e-8);
        assert_eq!(file.seed, Some(3));
    }

    #[test]
    fn unknown_keys_and_schemes_are_rejected() {
        let err = toml::from_str::<FileSettings>("stepz = 10").unwrap_err();
        assert!(err.to_string().contains("stepz"));
        assert!(matches!(
            parse_scheme("implicit", 0.01),
            Err(SettingsError::UnknownScheme { .. })
        ));
    }

    #[test]
    fn missing_config_file_is_an_io_error() {
        let err = load_settings(Some(Path::new("/nonexistent/beamnet.toml")))
            .unwrap_err();
        assert!(matches!(err, SettingsError::Io { .. }));
        assert!(load_settings(None).unwrap().scheme.is_none());
    }
}
