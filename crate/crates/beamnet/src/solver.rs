//! Incremental Newton driver for displacement-controlled fracture runs.
//!
//! The run ramps the prescribed grip displacement in equal steps. Within a
//! step, hinge states are recomputed from the committed step-start states
//! at every iteration regardless of the tangent scheme, so all schemes walk
//! the same equilibrium path and differ only in how fast (and whether) the
//! iteration settles. States commit only when a step converges.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beam::{
    internal_force, strain_from_displacements, stress_resultants, FiberSection,
    LocalMatrix, LocalVector,
};
use crate::element::{
    scheme_tangent, submatrices, to_global, ElementError, ElementGeometry,
    ElementTangent, Scheme, SubMatrices,
};
use crate::element::apply_rupture;
use crate::hinge::{dissipation, return_map, trial_state, HingeError, HingeState};
use crate::linsolve::{Factorization, LinSolveError, SparseSymmetric};
use crate::netgen::{DofBc, GenError, NetworkElement, NetworkModel};

/// Default relative residual tolerance.
pub const DEFAULT_TOL_REL: f64 = 1e-6;
/// Coefficient of the default absolute tolerance
/// `coeff * max(n_bar) * sqrt(n_elements)`.
pub const DEFAULT_TOL_ABS_COEFF: f64 = 1e-9;
/// Default iteration cap per step.
pub const DEFAULT_MAX_ITERS: usize = 500;
/// Default stiffness-floor tolerance for ruptured degrees of freedom under
/// the monolithic and staggered schemes; the hybrid scheme uses its own.
pub const DEFAULT_H_TOL: f64 = 0.01;

/// Parameters of one displacement-controlled run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub scheme: Scheme,
    /// Final prescribed grip displacement [mm].
    pub total_displacement: f64,
    /// Number of equal ramp steps.
    pub n_steps: usize,
    /// Convergence when the residual norm falls below
    /// `max(tol_rel * r_ref, tol_abs)` with `r_ref` the step's first
    /// residual.
    pub tol_rel: f64,
    /// Absolute residual floor; `None` applies the default coefficient
    /// rule.
    pub tol_abs: Option<f64>,
    pub max_iters: usize,
    /// Times a failed step may be halved before the run stops.
    pub max_bisections: usize,
}

impl SolveConfig {
    pub fn new(scheme: Scheme, total_displacement: f64, n_steps: usize) -> Self {
        Self {
            scheme,
            total_displacement,
            n_steps,
            tol_rel: DEFAULT_TOL_REL,
            tol_abs: None,
            max_iters: DEFAULT_MAX_ITERS,
            max_bisections: 0,
        }
    }
}

/// Why a step failed to converge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StepFailure {
    NotConverged { iterations: usize, residual: f64, reference: f64 },
    /// The tangent factorization hit an exactly zero pivot; `dof` is the
    /// global degree-of-freedom id `6 * node + component`.
    SingularMatrix { dof: usize },
    Diverged { residual: f64 },
}

impl std::fmt::Display for StepFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotConverged { iterations, residual, reference } => write!(
                f,
                "no convergence after {iterations} iterations \
                 (residual {residual:.3e}, reference {reference:.3e})"
            ),
            Self::SingularMatrix { dof } => {
                write!(f, "singular tangent at degree of freedom {dof}")
            }
            Self::Diverged { residual } => {
                write!(f, "residual diverged to {residual:.3e}")
            }
        }
    }
}

/// How the run ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Termination {
    Completed,
    StepFailed { step: usize, failure: StepFailure },
}

/// Converged state of one ramp step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Applied grip displacement [mm].
    pub u: f64,
    /// Grip reaction along the loading direction [N].
    pub reaction: f64,
    /// Nominal stress `reaction / nominal_area` [MPa].
    pub stress: f64,
    /// Linear solves spent on the step.
    pub iterations: usize,
    pub n_ruptured: usize,
    /// Smallest tangent mixing factor seen during the step; 1 when no
    /// element needed regularization.
    pub min_beta: f64,
    /// Recoverable strain energy at the converged state [N mm].
    pub elastic_energy: f64,
    /// Cumulative hinge dissipation [N mm].
    pub dissipated_energy: f64,
    /// Trapezoidal external work of the grip reaction [N mm].
    pub external_work: f64,
}

/// Full run output: per-step history plus final hinge states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub records: Vec<StepRecord>,
    pub termination: Termination,
    /// Linear solves over the whole run.
    pub cumulative_iterations: usize,
    pub final_states: Vec<HingeState>,
}

impl SolveReport {
    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }
}

/// Setup failures that prevent a run from starting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] GenError),
    #[error("invalid solve config: {0}")]
    BadConfig(String),
    #[error(
        "element {element} of length {l_e} mm reaches the snap-back limit \
         {l_max} mm of its section; refine the mesh or raise the fracture \
         energy"
    )]
    SnapBack { element: usize, l_e: f64, l_max: f64 },
    #[error("element {element}: {source}")]
    Element { element: usize, source: ElementError },
    #[error("linear solver resources exhausted")]
    Resource,
}

/// Per-dof boundary kinds expanded from the model's node patterns.
struct DofMap {
    bc: Vec<DofBc>,
    /// Global ids of the free dofs, ascending.
    free: Vec<usize>,
    /// Free-system index per global dof, `usize::MAX` when constrained.
    free_index: Vec<usize>,
}

fn build_dof_map(model: &NetworkModel) -> DofMap {
    let n = model.nodes.len() * 6;
    let mut bc = vec![DofBc::Free; n];
    for node_bc in &model.bcs {
        for (c, kind) in node_bc.dofs.iter().enumerate() {
            bc[node_bc.node * 6 + c] = *kind;
        }
    }
    let free: Vec<usize> =
        (0..n).filter(|&d| bc[d] == DofBc::Free).collect();
    let mut free_index = vec![usize::MAX; n];
    for (k, &d) in free.iter().enumerate() {
        free_index[d] = k;
    }
    DofMap { bc, free, free_index }
}

fn element_dofs(e: &NetworkElement) -> [usize; 12] {
    let mut out = [0usize; 12];
    for c in 0..6 {
        out[c] = e.n1 * 6 + c;
        out[6 + c] = e.n2 * 6 + c;
    }
    out
}

/// Immutable run-wide data: geometry, constant tangent blocks, dof
/// partition and the cached sparsity pattern of the free tangent.
struct System<'m> {
    model: &'m NetworkModel,
    geoms: Vec<ElementGeometry>,
    subs: Vec<SubMatrices>,
    dofs: DofMap,
    pattern: SparseSymmetric,
    /// Per element: (local row, local col, value slot) for the pattern.
    slots: Vec<Vec<(u8, u8, u32)>>,
    /// Stiffness floor factor for ruptured axial dofs.
    h_tol: f64,
    tol_abs: f64,
}

fn scheme_floor(scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Hybrid { h_tol } => h_tol,
        _ => DEFAULT_H_TOL,
    }
}

impl<'m> System<'m> {
    fn build(model: &'m NetworkModel, config: &SolveConfig) -> Result<Self, SolveError> {
        let mut geoms = Vec::with_capacity(model.elements.len());
        let mut subs = Vec::with_capacity(model.elements.len());
        for (i, e) in model.elements.iter().enumerate() {
            let geom = ElementGeometry::from_coords(
                [e.n1, e.n2],
                model.nodes[e.n1],
                model.nodes[e.n2],
            )
            .map_err(|source| SolveError::Element { element: i, source })?;
            let section = &model.sections[e.section];
            let l_max = section.ea() / section.h.abs();
            if geom.l_e >= l_max {
                return Err(SolveError::SnapBack {
                    element: i,
                    l_e: geom.l_e,
                    l_max,
                });
            }
            subs.push(submatrices(section, geom.l_e));
            geoms.push(geom);
        }

        let dofs = build_dof_map(model);
        let mut pairs: Vec<(usize, usize)> =
            (0..dofs.free.len()).map(|k| (k, k)).collect();
        for e in &model.elements {
            let gdofs = element_dofs(e);
            for r in 0..12 {
                let gi = dofs.free_index[gdofs[r]];
                if gi == usize::MAX {
                    continue;
                }
                for c in 0..12 {
                    let gj = dofs.free_index[gdofs[c]];
                    if gj != usize::MAX && gi <= gj {
                        pairs.push((gi, gj));
                    }
                }
            }
        }
        let pattern = SparseSymmetric::from_pairs(dofs.free.len(), pairs)
            .map_err(|_| SolveError::Resource)?;

        let slots: Vec<Vec<(u8, u8, u32)>> = model
            .elements
            .iter()
            .map(|e| {
                let gdofs = element_dofs(e);
                let mut list = Vec::new();
                for r in 0..12 {
                    let gi = dofs.free_index[gdofs[r]];
                    if gi == usize::MAX {
                        continue;
                    }
                    for c in 0..12 {
                        let gj = dofs.free_index[gdofs[c]];
                        if gj != usize::MAX && gi <= gj {
                            let slot = pattern
                                .slot(gi, gj)
                                .expect("pattern covers element couplings");
                            list.push((r as u8, c as u8, slot as u32));
                        }
                    }
                }
                list
            })
            .collect();

        let n_bar_max = model
            .sections
            .iter()
            .map(|s| s.n_bar)
            .fold(0.0f64, f64::max);
        let tol_abs = config.tol_abs.unwrap_or(
            DEFAULT_TOL_ABS_COEFF
                * n_bar_max
                * (model.elements.len().max(1) as f64).sqrt(),
        );

        Ok(Self {
            model,
            geoms,
            subs,
            dofs,
            pattern,
            slots,
            h_tol: scheme_floor(config.scheme),
            tol_abs,
        })
    }
}

/// Outcome of evaluating one element at the current iterate.
struct ElementEval {
    k: LocalMatrix,
    f: LocalVector,
    state: HingeState,
    /// Mixing factor when the hinge was actively softening.
    beta: Option<f64>,
    elastic_energy: f64,
}

fn evaluate_element(
    geom: &ElementGeometry,
    subs: &SubMatrices,
    section: &FiberSection,
    scheme: Scheme,
    floor_tol: f64,
    committed: &HingeState,
    d_global: &LocalVector,
) -> Result<ElementEval, SolveError> {
    let t = geom.transformation();
    let d_local = t * d_global;
    let strain = strain_from_displacements(&d_local, geom.l_e);
    let k_min = floor_tol * subs.ea_over_l;

    let (mut sigma, state, tangent): (_, HingeState, Option<(ElementTangent, bool)>) =
        if committed.ruptured {
            let sigma = stress_resultants(&strain, committed.xi, section, geom.l_e);
            (sigma, *committed, None)
        } else {
            let trial = trial_state(strain.eps, committed, section, geom.l_e);
            let (n, state) = match return_map(&trial, committed, section, geom.l_e) {
                Ok(v) => v,
                Err(HingeError::SnapBack { l_e, l_max }) => {
                    return Err(SolveError::SnapBack { element: usize::MAX, l_e, l_max })
                }
            };
            let mut sigma = stress_resultants(&strain, state.xi, section, geom.l_e);
            sigma.n = n;
            if state.ruptured {
                (sigma, state, None)
            } else {
                let active = state.alpha > committed.alpha;
                let tan = scheme_tangent(subs, scheme, active).map_err(
                    |source| SolveError::Element { element: usize::MAX, source },
                )?;
                (sigma, state, Some((tan, active)))
            }
        };

    let (k, f, beta) = match tangent {
        Some((tan, active)) => {
            let f = internal_force(&sigma, geom.l_e);
            (tan.k, f, active.then_some(tan.beta))
        }
        None => {
            sigma.n = 0.0;
            let mut k = subs.k_dd;
            let mut f = internal_force(&sigma, geom.l_e);
            apply_rupture(&mut k, &mut f, k_min);
            (k, f, None)
        }
    };

    let c = section.c_diag();
    let s = sigma.to_vector();
    let mut elastic_energy = 0.0;
    for i in 0..6 {
        elastic_energy += 0.5 * geom.l_e * s[i] * s[i] / c[i];
    }

    let (k_g, f_g) = to_global(&k, &f, geom);
    Ok(ElementEval { k: k_g, f: f_g, state, beta, elastic_energy })
}

/// One assembled iterate: tangent values, full internal force and the
/// refreshed hinge states.
struct Evaluation {
    values: Vec<f64>,
    f_int: Vec<f64>,
    states: Vec<HingeState>,
    n_ruptured: usize,
    min_beta: f64,
    elastic_energy: f64,
    dissipated_energy: f64,
}

fn evaluate(
    system: &System<'_>,
    u: &[f64],
    committed: &[HingeState],
    scheme: Scheme,
) -> Result<Evaluation, SolveError> {
    let model = system.model;
    let mut values = vec![0.0f64; system.pattern.nnz()];
    let mut f_int = vec![0.0f64; model.nodes.len() * 6];
    let mut states = Vec::with_capacity(model.elements.len());
    let mut n_ruptured = 0usize;
    let mut min_beta = 1.0f64;
    let mut elastic_energy = 0.0f64;
    let mut dissipated_energy = 0.0f64;

    for (i, e) in model.elements.iter().enumerate() {
        let gdofs = element_dofs(e);
        let mut d = LocalVector::zeros();
        for (k, &g) in gdofs.iter().enumerate() {
            d[k] = u[g];
        }
        let eval = evaluate_element(
            &system.geoms[i],
            &system.subs[i],
            &model.sections[e.section],
            scheme,
            system.h_tol,
            &committed[i],
            &d,
        )
        .map_err(|err| match err {
            SolveError::SnapBack { l_e, l_max, .. } => {
                SolveError::SnapBack { element: i, l_e, l_max }
            }
            SolveError::Element { source, .. } => {
                SolveError::Element { element: i, source }
            }
            other => other,
        })?;

        for (k, &g) in gdofs.iter().enumerate() {
            f_int[g] += eval.f[k];
        }
        for &(r, c, slot) in &system.slots[i] {
            values[slot as usize] += eval.k[(r as usize, c as usize)];
        }
        if eval.state.ruptured {
            n_ruptured += 1;
        }
        if let Some(beta) = eval.beta {
            min_beta = min_beta.min(beta);
        }
        elastic_energy += eval.elastic_energy;
        dissipated_energy +=
            dissipation(&eval.state, &model.sections[e.section]);
        states.push(eval.state);
    }

    Ok(Evaluation {
        values,
        f_int,
        states,
        n_ruptured,
        min_beta,
        elastic_energy,
        dissipated_energy,
    })
}

enum StepOutcome {
    Converged { eval: Evaluation, iterations: usize, min_beta: f64 },
    Failed(StepFailure),
}

/// Last numeric factorization, keyed by the exact tangent values. The
/// staggered scheme assembles the same elastic tangent on every iteration
/// between rupture events, so reusing its factorization turns those
/// iterations into cheap back-substitutions; schemes whose tangent changes
/// every iteration miss the cache and pay one vector compare.
#[derive(Default)]
struct FactorCache<'s> {
    entry: Option<(Vec<f64>, Factorization<'s>)>,
}

/// Newton loop for one ramp value. Prescribed dofs are imposed before the
/// first assembly; the first residual norm becomes the step's convergence
/// reference. The iteration count equals the number of linear solves.
fn solve_step<'s>(
    system: &'s System<'_>,
    u: &mut [f64],
    committed: &[HingeState],
    ramp: f64,
    config: &SolveConfig,
    cache: &mut FactorCache<'s>,
) -> Result<StepOutcome, SolveError> {
    for (dof, kind) in system.dofs.bc.iter().enumerate() {
        match kind {
            DofBc::Fixed => u[dof] = 0.0,
            DofBc::Ramp => u[dof] = ramp,
            DofBc::Free => {}
        }
    }

    let mut r_ref = 0.0f64;
    let mut min_beta = 1.0f64;
    for iter in 0..=config.max_iters {
        let eval = evaluate(system, u, committed, config.scheme)?;
        min_beta = min_beta.min(eval.min_beta);
        let mut rhs: Vec<f64> =
            system.dofs.free.iter().map(|&g| eval.f_int[g]).collect();
        let r = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !r.is_finite() {
            return Ok(StepOutcome::Failed(StepFailure::Diverged { residual: r }));
        }
        if iter == 0 {
            r_ref = r;
        }
        if r <= (config.tol_rel * r_ref).max(system.tol_abs) {
            return Ok(StepOutcome::Converged { eval, iterations: iter, min_beta });
        }
        if iter == config.max_iters {
            return Ok(StepOutcome::Failed(StepFailure::NotConverged {
                iterations: iter,
                residual: r,
                reference: r_ref,
            }));
        }

        let cached = cache.entry.as_ref().is_some_and(|(v, _)| *v == eval.values);
        if !cached {
            match system.pattern.factor(&eval.values) {
                Ok(f) => cache.entry = Some((eval.values.clone(), f)),
                Err(LinSolveError::Singular { dof }) => {
                    return Ok(StepOutcome::Failed(StepFailure::SingularMatrix {
                        dof: system.dofs.free[dof],
                    }))
                }
                Err(_) => return Err(SolveError::Resource),
            }
        }
        let factorization = &cache.entry.as_ref().expect("factorized above").1;
        if let Err(err) = factorization.solve_in_place(&mut rhs) {
            return Ok(StepOutcome::Failed(match err {
                LinSolveError::Singular { dof } => StepFailure::SingularMatrix {
                    dof: system.dofs.free[dof],
                },
                _ => StepFailure::Diverged { residual: r },
            }));
        }
        for (k, &g) in system.dofs.free.iter().enumerate() {
            u[g] -= rhs[k];
        }
    }
    unreachable!("loop returns on convergence or exhaustion");
}

fn validate_config(config: &SolveConfig) -> Result<(), SolveError> {
    if config.n_steps == 0 {
        return Err(SolveError::BadConfig("n_steps must be at least 1".into()));
    }
    if !(config.total_displacement >= 0.0) || !config.total_displacement.is_finite() {
        return Err(SolveError::BadConfig(
            "total_displacement must be finite and non-negative".into(),
        ));
    }
    if !(config.tol_rel > 0.0) {
        return Err(SolveError::BadConfig("tol_rel must be positive".into()));
    }
    if config.max_iters == 0 {
        return Err(SolveError::BadConfig("max_iters must be at least 1".into()));
    }
    if let Scheme::Hybrid { h_tol } = config.scheme {
        if !(h_tol > 0.0 && h_tol < 1.0) {
            return Err(SolveError::BadConfig(
                "hybrid h_tol must lie in (0, 1)".into(),
            ));
        }
    }
    Ok(())
}

/// Runs the displacement ramp and returns the step history.
///
/// Setup problems (invalid model or config, elements beyond the snap-back
/// limit) surface as errors; a step that fails to converge ends the run
/// early with the failure recorded in the report's termination.
pub fn run(model: &NetworkModel, config: &SolveConfig) -> Result<SolveReport, SolveError> {
    model.validate()?;
    validate_config(config)?;
    let system = System::build(model, config)?;
    let mut cache = FactorCache::default();

    let mut states = vec![HingeState::default(); model.elements.len()];
    let mut u = vec![0.0f64; model.nodes.len() * 6];
    let mut records: Vec<StepRecord> = Vec::with_capacity(config.n_steps);
    let mut termination = Termination::Completed;
    let mut cumulative_iterations = 0usize;

    let mut applied = 0.0f64;
    let mut reaction_prev = 0.0f64;
    let mut external_work = 0.0f64;
    let du = config.total_displacement / config.n_steps as f64;

    'ramp: for k in 1..=config.n_steps {
        let mut stack: Vec<(f64, usize)> = vec![(du * k as f64, 0)];
        while let Some((target, depth)) = stack.pop() {
            let mut u_try = u.clone();
            match solve_step(&system, &mut u_try, &states, target, config, &mut cache)? {
                StepOutcome::Converged { eval, iterations, min_beta } => {
                    u = u_try;
                    let reaction: f64 = model
                        .moving_nodes
                        .iter()
                        .map(|&n| eval.f_int[6 * n])
                        .sum();
                    external_work +=
                        0.5 * (reaction_prev + reaction) * (target - applied);
                    cumulative_iterations += iterations;
                    records.push(StepRecord {
                        step: records.len() + 1,
                        u: target,
                        reaction,
                        stress: reaction / model.nominal_area,
                        iterations,
                        n_ruptured: eval.n_ruptured,
                        min_beta,
                        elastic_energy: eval.elastic_energy,
                        dissipated_energy: eval.dissipated_energy,
                        external_work,
                    });
                    states = eval.states;
                    applied = target;
                    reaction_prev = reaction;
                }
                StepOutcome::Failed(failure) => {
                    if depth < config.max_bisections {
                        stack.push((target, depth + 1));
                        stack.push(((applied + target) / 2.0, depth + 1));
                    } else {
                        termination = Termination::StepFailed {
                            step: records.len() + 1,
                            failure,
                        };
                        break 'ramp;
                    }
                }
            }
        }
    }

    Ok(SolveReport {
        records,
        termination,
        cumulative_iterations,
        final_states: states,
    })
}

/// Dense global tangent and internal force at a given displacement state,
/// without boundary-condition elimination. Intended for small models and
/// verification; the Newton driver uses the sparse path.
pub fn assemble_dense(
    model: &NetworkModel,
    u: &[f64],
    states: &[HingeState],
    scheme: Scheme,
) -> Result<(DMatrix<f64>, DVector<f64>), SolveError> {
    model.validate()?;
    assert_eq!(u.len(), model.nodes.len() * 6, "displacement vector size");
    assert_eq!(states.len(), model.elements.len(), "state vector size");
    let n = model.nodes.len() * 6;
    let mut k_global = DMatrix::zeros(n, n);
    let mut f_global = DVector::zeros(n);
    let floor_tol = scheme_floor(scheme);

    for (i, e) in model.elements.iter().enumerate() {
        let geom = ElementGeometry::from_coords(
            [e.n1, e.n2],
            model.nodes[e.n1],
            model.nodes[e.n2],
        )
        .map_err(|source| SolveError::Element { element: i, source })?;
        let section = &model.sections[e.section];
        let subs = submatrices(section, geom.l_e);
        let gdofs = element_dofs(e);
        let mut d = LocalVector::zeros();
        for (k, &g) in gdofs.iter().enumerate() {
            d[k] = u[g];
        }
        let eval = evaluate_element(
            &geom, &subs, section, scheme, floor_tol, &states[i], &d,
        )
        .map_err(|err| match err {
            SolveError::SnapBack { l_e, l_max, .. } => {
                SolveError::SnapBack { element: i, l_e, l_max }
            }
            SolveError::Element { source, .. } => {
                SolveError::Element { element: i, source }
            }
            other => other,
        })?;
        for (r, &gr) in gdofs.iter().enumerate() {
            f_global[gr] += eval.f[r];
            for (c, &gc) in gdofs.iter().enumerate() {
                k_global[(gr, gc)] += eval.k[(r, c)];
            }
        }
    }
    Ok((k_global, f_global))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::NodeBc;
    use approx::assert_relative_eq;

    /// Chain of axial elements along x: node 0 clamped, last node ramped,
    /// interior nodes free only in x.
    fn bar_model(n_elements: usize, length: f64, section: FiberSection) -> NetworkModel {
        use DofBc::*;
        let n_nodes = n_elements + 1;
        let nodes: Vec<[f64; 3]> = (0..n_nodes)
            .map(|i| [length * i as f64 / n_elements as f64, 0.0, 0.0])
            .collect();
        let elements: Vec<NetworkElement> = (0..n_elements)
            .map(|i| NetworkElement { n1: i, n2: i + 1, section: 0, fiber: 0 })
            .collect();
        let mut bcs: Vec<NodeBc> = (0..n_nodes)
            .map(|node| NodeBc {
                node,
                dofs: [Free, Fixed, Fixed, Fixed, Fixed, Fixed],
            })
            .collect();
        bcs[0].dofs = [Fixed; 6];
        bcs[n_nodes - 1].dofs = [Ramp, Fixed, Fixed, Fixed, Fixed, Fixed];
        NetworkModel {
            nodes,
            sections: vec![section],
            elements,
            bcs,
            fixed_nodes: vec![0],
            moving_nodes: vec![n_nodes - 1],
            width: length,
            height: 1.0,
            grip_band: 0.0,
            nominal_area: 1.0,
            generation: None,
        }
    }

    fn soft_section(n_bar: f64, g_f: f64) -> FiberSection {
        FiberSection::with_fracture_energy(
            1.0, 0.5, 1.0, 1.0, 2.0, 1.0, 1.0, n_bar, g_f,
        )
        .unwrap()
    }

    /// Piecewise-linear reaction of the axial bar: elastic up to the peak,
    /// softening line down to rupture, zero beyond.
    fn bar_reaction(u: f64, length: f64, n_bar: f64, g_f: f64) -> f64 {
        let k = 1.0 / length;
        let u_peak = n_bar / k;
        let u_rupture = 2.0 * g_f / n_bar;
        if u <= u_peak {
            k * u
        } else if u < u_rupture {
            n_bar * (u_rupture - u) / (u_rupture - u_peak)
        } else {
            0.0
        }
    }

    #[test]
    fn elastic_bar_matches_hookes_law_in_one_iteration() {
        let model = bar_model(4, 0.1, soft_section(10.0, 100.0));
        let config = SolveConfig::new(Scheme::Monolithic, 0.05, 5);
        let report = run(&model, &config).unwrap();
        assert!(report.completed());
        assert_eq!(report.records.len(), 5);
        for rec in &report.records {
            assert_relative_eq!(rec.reaction, 10.0 * rec.u, max_relative = 1e-9);
            assert_eq!(rec.iterations, 1);
            assert_eq!(rec.n_ruptured, 0);
            assert_eq!(rec.min_beta, 1.0);
        }
    }

    #[test]
    fn softening_bar_follows_the_closed_form_curve() {
        let (n_bar, g_f, length) = (0.5, 0.05, 0.1);
        let model = bar_model(2, length, soft_section(n_bar, g_f));
        let config = SolveConfig::new(Scheme::Monolithic, 0.3, 60);
        let report = run(&model, &config).unwrap();
        assert!(report.completed());
        for rec in &report.records {
            let expected = bar_reaction(rec.u, length, n_bar, g_f);
            assert!(
                (rec.reaction - expected).abs() <= 1e-8 * n_bar,
                "u = {}: reaction {} vs {}",
                rec.u,
                rec.reaction,
                expected
            );
        }
        let last = report.records.last().unwrap();
        assert_eq!(last.n_ruptured, 1);
        assert_relative_eq!(last.dissipated_energy, g_f, max_relative = 1e-9);
        assert!(last.reaction.abs() <= 1e-12);
    }

    #[test]
    fn all_schemes_walk_the_same_path() {
        let (n_bar, g_f, length) = (0.5, 0.05, 0.1);
        let model = bar_model(2, length, soft_section(n_bar, g_f));
        let mut histories: Vec<Vec<f64>> = Vec::new();
        for scheme in [
            Scheme::Monolithic,
            Scheme::Staggered,
            Scheme::Hybrid { h_tol: 0.01 },
        ] {
            let config = SolveConfig::new(scheme, 0.3, 60);
            let report = run(&model, &config).unwrap();
            assert!(report.completed(), "{scheme:?} failed");
            histories.push(report.records.iter().map(|r| r.reaction).collect());
        }
        for pair in histories.windows(2) {
            for (a, b) in pair[0].iter().zip(&pair[1]) {
                assert!(
                    (a - b).abs() <= 1e-5 * n_bar,
                    "scheme mismatch: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn hybrid_reports_a_fractional_mixing_factor_while_softening() {
        let (n_bar, g_f, length) = (0.5, 0.05, 0.1);
        let model = bar_model(2, length, soft_section(n_bar, g_f));
        let config = SolveConfig::new(Scheme::Hybrid { h_tol: 0.01 }, 0.3, 60);
        let report = run(&model, &config).unwrap();
        let min_beta = report
            .records
            .iter()
            .map(|r| r.min_beta)
            .fold(1.0f64, f64::min);
        assert!(min_beta > 0.0 && min_beta < 1.0, "min beta {min_beta}");
        let monolithic = run(
            &model,
            &SolveConfig::new(Scheme::Monolithic, 0.3, 60),
        )
        .unwrap();
        assert!(monolithic.records.iter().all(|r| r.min_beta == 1.0));
    }

    #[test]
    fn external_work_balances_stored_and_dissipated_energy() {
        let (n_bar, g_f, length) = (0.5, 0.05, 0.1);
        let model = bar_model(2, length, soft_section(n_bar, g_f));
        let config = SolveConfig::new(Scheme::Monolithic, 0.3, 600);
        let report = run(&model, &config).unwrap();
        for rec in &report.records {
            let internal = rec.elastic_energy + rec.dissipated_energy;
            let scale = rec.external_work.max(internal).max(1e-12);
            assert!(
                (rec.external_work - internal).abs() <= 0.01 * scale,
                "step {}: W {} vs U + D {}",
                rec.step,
                rec.external_work,
                internal
            );
        }
    }

    #[test]
    fn run_is_deterministic() {
        let model = bar_model(2, 0.1, soft_section(0.5, 0.05));
        let config = SolveConfig::new(Scheme::Hybrid { h_tol: 0.01 }, 0.3, 30);
        let a = run(&model, &config).unwrap();
        let b = run(&model, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn snap_back_geometry_is_rejected_up_front() {
        // l_max = EA / |H| = 2 g_f EA / n_bar^2 = 0.08 < element length 0.1
        let model = bar_model(1, 0.1, soft_section(0.5, 0.01));
        let config = SolveConfig::new(Scheme::Monolithic, 0.2, 10);
        match run(&model, &config) {
            Err(SolveError::SnapBack { element, l_e, l_max }) => {
                assert_eq!(element, 0);
                assert_relative_eq!(l_e, 0.1, max_relative = 1e-12);
                assert_relative_eq!(l_max, 0.08, max_relative = 1e-12);
            }
            other => panic!("expected snap-back error, got {other:?}"),
        }
    }

    #[test]
    fn orphan_free_dof_surfaces_as_a_singular_step() {
        let mut model = bar_model(2, 0.1, soft_section(10.0, 100.0));
        model.nodes.push([0.03, 0.5, 0.0]);
        model.bcs.push(NodeBc {
            node: 3,
            dofs: [
                DofBc::Free,
                DofBc::Fixed,
                DofBc::Fixed,
                DofBc::Fixed,
                DofBc::Fixed,
                DofBc::Fixed,
            ],
        });
        let config = SolveConfig::new(Scheme::Monolithic, 0.05, 5);
        let report = run(&model, &config).unwrap();
        assert_eq!(report.records.len(), 0);
        match report.termination {
            Termination::StepFailed {
                step: 1,
                failure: StepFailure::SingularMatrix { dof },
            } => assert_eq!(dof, 3 * 6),
            other => panic!("expected singular failure, got {other:?}"),
        }
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let model = bar_model(2, 0.1, soft_section(0.5, 0.05));
        let mut config = SolveConfig::new(Scheme::Staggered, 0.3, 10);
        config.max_iters = 1;
        let report = run(&model, &config).unwrap();
        assert!(!report.completed());
        match &report.termination {
            Termination::StepFailed { failure, .. } => {
                assert!(matches!(failure, StepFailure::NotConverged { .. }));
            }
            other => panic!("expected step failure, got {other:?}"),
        }
    }

    #[test]
    fn bisection_exhaustion_still_fails_cleanly() {
        let mut model = bar_model(2, 0.1, soft_section(10.0, 100.0));
        model.nodes.push([0.03, 0.5, 0.0]);
        model.bcs.push(NodeBc {
            node: 3,
            dofs: [
                DofBc::Free,
                DofBc::Fixed,
                DofBc::Fixed,
                DofBc::Fixed,
                DofBc::Fixed,
                DofBc::Fixed,
            ],
        });
        let mut config = SolveConfig::new(Scheme::Monolithic, 0.05, 5);
        config.max_bisections = 3;
        let report = run(&model, &config).unwrap();
        assert!(matches!(
            report.termination,
            Termination::StepFailed {
                failure: StepFailure::SingularMatrix { .. },
                ..
            }
        ));
    }

    #[test]
    fn dense_assembly_is_symmetric_and_matches_axial_force() {
        let model = bar_model(2, 0.1, soft_section(0.5, 0.05));
        let mut u = vec![0.0; model.nodes.len() * 6];
        u[6] = 0.01; // interior node displaced axially
        u[12] = 0.02;
        let states = vec![HingeState::default(); 2];
        let (k, f) = assemble_dense(&model, &u, &states, Scheme::Monolithic).unwrap();
        for i in 0..k.nrows() {
            for j in 0..k.ncols() {
                assert!((k[(i, j)] - k[(j, i)]).abs() <= 1e-12);
            }
        }
        // both elements carry N = EA * 0.01 / 0.05 = 0.2: end reactions
        assert_relative_eq!(f[0], -0.2, max_relative = 1e-12);
        assert_relative_eq!(f[12], 0.2, max_relative = 1e-12);
        assert!(f[6].abs() <= 1e-12);
    }

    #[test]
    fn one_element_run_with_no_free_dofs_still_tracks_states() {
        let (n_bar, g_f, length) = (0.5, 0.05, 0.1);
        let model = bar_model(1, length, soft_section(n_bar, g_f));
        let config = SolveConfig::new(Scheme::Monolithic, 0.3, 30);
        let report = run(&model, &config).unwrap();
        assert!(report.completed());
        for rec in &report.records {
            let expected = bar_reaction(rec.u, length, n_bar, g_f);
            assert!((rec.reaction - expected).abs() <= 1e-10);
            assert_eq!(rec.iterations, 0);
        }
        assert!(report.final_states[0].ruptured);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let model = bar_model(1, 0.1, soft_section(10.0, 100.0));
        let mut c = SolveConfig::new(Scheme::Monolithic, 0.1, 0);
        assert!(matches!(run(&model, &c), Err(SolveError::BadConfig(_))));
        c.n_steps = 1;
        c.tol_rel = 0.0;
        assert!(matches!(run(&model, &c), Err(SolveError::BadConfig(_))));
        c.tol_rel = 1e-6;
        c.scheme = Scheme::Hybrid { h_tol: 0.0 };
        assert!(matches!(run(&model, &c), Err(SolveError::BadConfig(_))));
    }
}
