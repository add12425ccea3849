//! Scheme comparison: run a list of tangent schemes over a grid of step
//! counts on the same model and tabulate the iteration cost.

use std::time::Instant;

use beamnet::netgen::NetworkModel;
use beamnet::solver::{run, SolveConfig, SolveError, Termination};
use beamnet::Scheme;

/// One scheme under its display label, e.g. `hybrid(0.01)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub label: String,
    pub scheme: Scheme,
}

/// Parses a scheme spec string: `monolithic`, `staggered`, `hybrid` or
/// `hybrid:<h_tol>`.
pub fn parse_scheme_spec(text: &str) -> Result<SchemeSpec, String> {
    let (name, param) = match text.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (text, None),
    };
    match (name, param) {
        ("monolithic", None) => Ok(SchemeSpec {
            label: "monolithic".into(),
            scheme: Scheme::Monolithic,
        }),
        ("staggered", None) => Ok(SchemeSpec {
            label: "staggered".into(),
            scheme: Scheme::Staggered,
        }),
        ("hybrid", param) => {
            let h_tol = match param {
                Some(p) => p
                    .parse::<f64>()
                    .map_err(|_| format!("bad hybrid tolerance {p:?}"))?,
                None => 0.01,
            };
            if !(h_tol > 0.0 && h_tol < 1.0) {
                return Err(format!("hybrid tolerance {h_tol} must lie in (0, 1)"));
            }
            Ok(SchemeSpec {
                label: format!("hybrid({h_tol})"),
                scheme: Scheme::Hybrid { h_tol },
            })
        }
        ("monolithic" | "staggered", Some(p)) => {
            Err(format!("scheme {name} takes no parameter (got {p:?})"))
        }
        _ => Err(format!(
            "unknown scheme {text:?} (expected monolithic, staggered, hybrid \
             or hybrid:<h_tol>)"
        )),
    }
}

/// Outcome of one (scheme, step count) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEntry {
    pub scheme: String,
    pub steps: usize,
    pub completed: bool,
    /// Step at which the run stopped, when it did not complete.
    pub failed_step: Option<usize>,
    pub cumulative_iterations: usize,
    pub wall_time_s: f64,
}

/// Runs the full scheme-by-steps grid. Setup errors abort the grid; cell
/// failures (non-convergence, singular tangents) are recorded as entries.
pub fn run_grid(
    model: &NetworkModel,
    base: &SolveConfig,
    schemes: &[SchemeSpec],
    steps_list: &[usize],
) -> Result<Vec<GridEntry>, SolveError> {
    let mut entries = Vec::with_capacity(schemes.len() * steps_list.len());
    for spec in schemes {
        for &steps in steps_list {
            let config =
                SolveConfig { scheme: spec.scheme, n_steps: steps, ..base.clone() };
            let t0 = Instant::now();
            let report = run(model, &config)?;
            let failed_step = match report.termination {
                Termination::Completed => None,
                Termination::StepFailed { step, .. } => Some(step),
            };
            entries.push(GridEntry {
                scheme: spec.label.clone(),
                steps,
                completed: report.completed(),
                failed_step,
                cumulative_iterations: report.cumulative_iterations,
                wall_time_s: t0.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(entries)
}

/// Plain-text table: one row per scheme (in the given order), one column
/// per step count, cells holding cumulative iterations or `f` for a failed
/// run.
pub fn grid_table(
    entries: &[GridEntry],
    schemes: &[SchemeSpec],
    steps_list: &[usize],
) -> String {
    let label_width = schemes
        .iter()
        .map(|s| s.label.len())
        .max()
        .unwrap_or(6)
        .max(6)
        + 2;
    let mut out = String::new();
    out.push_str(&format!("{:<label_width$}", "scheme"));
    for steps in steps_list {
        out.push_str(&format!("{:>12}", format!("steps={steps}")));
    }
    out.push('\n');
    for spec in schemes {
        out.push_str(&format!("{:<label_width$}", spec.label));
        for &steps in steps_list {
            let cell = entries
                .iter()
                .find(|e| e.scheme == spec.label && e.steps == steps)
                .map(|e| {
                    if e.completed {
                        e.cumulative_iterations.to_string()
                    } else {
                        "f".to_string()
                    }
                })
                .unwrap_or_else(|| "-".to_string());
            out.push_str(&format!("{cell:>12}"));
        }
        out.push('\n');
    }
    out
}

/// CSV with the full per-cell details.
pub fn grid_csv(entries: &[GridEntry]) -> String {
    let mut out = String::from(
        "scheme,steps,completed,failed_step,cumulative_iterations,wall_time_s\n",
    );
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.scheme,
            e.steps,
            e.completed,
            e.failed_step.map(|s| s.to_string()).unwrap_or_default(),
            e.cumulative_iterations,
            e.wall_time_s
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::bar_model;

    fn default_schemes() -> Vec<SchemeSpec> {
        ["staggered", "hybrid:0.01", "monolithic"]
            .iter()
            .map(|s| parse_scheme_spec(s).unwrap())
            .collect()
    }

    #[test]
    fn scheme_specs_parse_and_label() {
        assert_eq!(
            parse_scheme_spec("hybrid:0.1").unwrap().label,
            "hybrid(0.1)"
        );
        assert_eq!(
            parse_scheme_spec("hybrid").unwrap().scheme,
            Scheme::Hybrid { h_tol: 0.01 }
        );
        assert!(parse_scheme_spec("implicit").is_err());
        assert!(parse_scheme_spec("staggered:0.1").is_err());
        assert!(parse_scheme_spec("hybrid:2.0").is_err());
    }

    #[test]
    fn grid_covers_all_cells_and_records_costs() {
        let model = bar_model(2, 0.1).unwrap();
        let base = SolveConfig::new(Scheme::Monolithic, 0.25, 20);
        let schemes = default_schemes();
        let entries = run_grid(&model, &base, &schemes, &[10, 20]).unwrap();
        assert_eq!(entries.len(), 6);
        assert!(entries.iter().all(|e| e.completed), "{entries:#?}");
        let cost = |scheme: &str, steps: usize| {
            entries
                .iter()
                .find(|e| e.scheme == scheme && e.steps == steps)
                .unwrap()
                .cumulative_iterations
        };
        // the bulk-only tangent pays more iterations than the consistent one
        assert!(cost("staggered", 20) > cost("monolithic", 20));

        let table = grid_table(&entries, &schemes, &[10, 20]);
        assert!(table.contains("monolithic"));
        assert!(table.contains("hybrid(0.01)"));
        assert!(table.contains("steps=20"));
        let csv = grid_csv(&entries);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("scheme,steps,"));
    }

    #[test]
    fn elastic_runs_cost_the_same_for_every_scheme() {
        // strength far above the applied load keeps the bar linear
        let model = bar_model(4, 10.0).unwrap();
        let base = SolveConfig::new(Scheme::Monolithic, 0.05, 5);
        let schemes = default_schemes();
        let entries = run_grid(&model, &base, &schemes, &[5]).unwrap();
        let counts: Vec<usize> =
            entries.iter().map(|e| e.cumulative_iterations).collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
    }

    #[test]
    fn failed_cells_render_as_f() {
        let entries = vec![GridEntry {
            scheme: "staggered".into(),
            steps: 10,
            completed: false,
            failed_step: Some(3),
            cumulative_iterations: 42,
            wall_time_s: 0.1,
        }];
        let schemes = vec![parse_scheme_spec("staggered").unwrap()];
        let table = grid_table(&entries, &schemes, &[10]);
        let row = table.lines().find(|l| l.starts_with("staggered")).unwrap();
        assert!(row.trim_end().ends_with('f'));
        let csv = grid_csv(&entries);
        assert!(csv.contains("staggered,10,false,3,42,"));
    }
}
