//! Random planar fiber network generation and the model container.
//!
//! Fibers are straight segments deposited in the rectangular sheet
//! `[0, width] x [0, height]` with uniformly random midpoints and in-plane
//! orientations; every fiber lies entirely inside the sheet. Pairwise
//! intersections become rigid bond nodes shared by both fibers (all six
//! degrees of freedom), fibers are split there, long spans are subdivided,
//! and components that do not connect the two grips are pruned. Generation
//! is deterministic for a given spec and seed.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beam::FiberSection;

/// Node-merge tolerance [mm]: intersection and subdivision points closer
/// than this to an existing node snap onto it, so distinct nodes are never
/// closer than `L_MIN` and no element is shorter.
pub const L_MIN: f64 = 1e-3;

/// Serialization format tag and version.
const FORMAT: &str = "beamnet-network";
const VERSION: u32 = 1;

/// Cap on orientation re-draws per fiber when it does not fit the sheet.
const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

/// Geometric and material description of the (single) fiber type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberProperties {
    pub section: FiberSection,
    /// Fiber length [mm].
    pub length: f64,
    /// Cross-section width [mm].
    pub width: f64,
    /// Cross-section height [mm]; doubles as the sheet thickness.
    pub height: f64,
    /// Fiber material density [kg/m^3].
    pub density: f64,
}

/// Triangular edge notch cut into the sheet from the bottom edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NotchSpec {
    /// Opening angle at the apex [deg].
    pub angle_deg: f64,
    /// Depth of the cut from the bottom edge [mm].
    pub depth: f64,
    /// Apex x position along the width [mm].
    pub apex_x: f64,
}

/// Everything needed to generate one network realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Sheet width (loading direction) [mm].
    pub width: f64,
    /// Sheet height [mm].
    pub height: f64,
    /// Sheet areal mass expressed as an equivalent density [kg/m^3].
    pub sheet_density: f64,
    pub fiber: FiberProperties,
    pub seed: u64,
    /// Nodes within this distance of the edges x = 0 and x = width become
    /// grip nodes [mm].
    pub grip_band: f64,
    pub notch: Option<NotchSpec>,
}

/// Constraint of a single degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DofBc {
    Free,
    Fixed,
    /// Follows the prescribed displacement ramp of the run.
    Ramp,
}

/// Per-node boundary conditions, ordered
/// `(u_x, u_y, u_z, theta_x, theta_y, theta_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeBc {
    pub node: usize,
    pub dofs: [DofBc; 6],
}

/// One beam element between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkElement {
    pub n1: usize,
    pub n2: usize,
    /// Index into the model's section table.
    pub section: usize,
    /// Index of the parent fiber, for provenance and rendering.
    pub fiber: usize,
}

/// Bookkeeping of one generation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub n_fibers: usize,
    /// Number of pairwise fiber crossings that produced bond nodes.
    pub n_bonds: usize,
    /// Total element length before pruning [mm].
    pub total_length: f64,
    /// Element length removed by connectivity pruning [mm].
    pub pruned_length: f64,
    /// Elements removed by the notch, if one was applied.
    pub notch_removed_elements: usize,
}

/// Assembled model: geometry, sections, elements and boundary conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkModel {
    pub nodes: Vec<[f64; 3]>,
    pub sections: Vec<FiberSection>,
    pub elements: Vec<NetworkElement>,
    pub bcs: Vec<NodeBc>,
    /// Fully clamped grip nodes at x = 0.
    pub fixed_nodes: Vec<usize>,
    /// Grip nodes at x = width carrying the displacement ramp.
    pub moving_nodes: Vec<usize>,
    pub width: f64,
    pub height: f64,
    /// Band used to select the grip sets [mm].
    pub grip_band: f64,
    /// Cross-section area of the specimen used for nominal stress [mm^2].
    pub nominal_area: f64,
    pub generation: Option<GenerationReport>,
}

/// Grip node sets of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySets {
    pub fixed: Vec<usize>,
    pub moving: Vec<usize>,
}

/// Connectivity diagnostic attached to percolation failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercolationReport {
    pub components: usize,
    pub largest_component_nodes: usize,
    pub components_touching_fixed: usize,
    pub components_touching_moving: usize,
}

impl fmt::Display for PercolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} components (largest {} nodes), {} touch the fixed grip, \
             {} touch the moving grip, none touch both",
            self.components,
            self.largest_component_nodes,
            self.components_touching_fixed,
            self.components_touching_moving
        )
    }
}

/// Generation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid network spec: {0}")]
    BadSpec(String),
    #[error(
        "fibers of length {length} mm cannot be placed in the \
         {width} x {height} mm sheet"
    )]
    FiberTooLong { length: f64, width: f64, height: f64 },
    #[error("no nodes within the {band} mm grip band at the {side} edge")]
    EmptyGrip { side: &'static str, band: f64 },
    #[error("network does not percolate between the grips: {report}")]
    NotPercolated { report: PercolationReport },
    #[error(
        "notch removed {removed} elements and disconnected the grips: {report}"
    )]
    NotchDisconnects { removed: usize, report: PercolationReport },
    #[error("model file is not a {FORMAT} v{VERSION} document: {0}")]
    BadFormat(String),
    #[error("model validation failed: {0}")]
    Invalid(String),
}

/// Number of fibers matching the target sheet mass:
/// `round(rho_s * width * height * t / (rho_f * A * L_f))` with the sheet
/// thickness `t` equal to the fiber height. Both densities enter in kg/m^3,
/// so the unit conversion to kg/mm^3 cancels.
pub fn fiber_count(spec: &NetworkSpec) -> usize {
    let sheet_mass = spec.sheet_density * spec.width * spec.height * spec.fiber.height;
    let fiber_mass = spec.fiber.density * spec.fiber.section.a * spec.fiber.length;
    (sheet_mass / fiber_mass).round() as usize
}

/// One deposited fiber before meshing.
#[derive(Debug, Clone, Copy)]
struct Fiber {
    p1: [f64; 2],
    p2: [f64; 2],
}

/// Generates a network realization from the spec.
pub fn generate(spec: &NetworkSpec) -> Result<NetworkModel, GenError> {
    validate_spec(spec)?;
    let n_f = fiber_count(spec);
    if n_f == 0 {
        return Err(GenError::BadSpec(
            "sheet density too low: zero fibers".into(),
        ));
    }
    let fibers = deposit_fibers(spec, n_f)?;
    let model = build_network(spec, &fibers)?;
    match spec.notch {
        Some(notch) => apply_notch(&model, &notch),
        None => Ok(model),
    }
}

fn validate_spec(spec: &NetworkSpec) -> Result<(), GenError> {
    for (name, v) in [
        ("width", spec.width),
        ("height", spec.height),
        ("sheet_density", spec.sheet_density),
        ("fiber.length", spec.fiber.length),
        ("fiber.height", spec.fiber.height),
        ("fiber.density", spec.fiber.density),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(GenError::BadSpec(format!("{name} must be positive")));
        }
    }
    if spec.grip_band < 0.0 || spec.grip_band >= spec.width / 2.0 {
        return Err(GenError::BadSpec(format!(
            "grip_band {} must lie in [0, width/2)",
            spec.grip_band
        )));
    }
    if spec.fiber.length > spec.width && spec.fiber.length > spec.height {
        return Err(GenError::FiberTooLong {
            length: spec.fiber.length,
            width: spec.width,
            height: spec.height,
        });
    }
    if let Some(n) = &spec.notch {
        if n.depth <= 0.0 || n.depth >= spec.height {
            return Err(GenError::BadSpec(format!(
                "notch depth {} must lie in (0, height)",
                n.depth
            )));
        }
        if n.angle_deg <= 0.0 || n.angle_deg >= 180.0 {
            return Err(GenError::BadSpec(format!(
                "notch angle {} must lie in (0, 180)",
                n.angle_deg
            )));
        }
        if n.apex_x <= 0.0 || n.apex_x >= spec.width {
            return Err(GenError::BadSpec(format!(
                "notch apex {} must lie inside the sheet",
                n.apex_x
            )));
        }
    }
    Ok(())
}

/// Draws fibers with uniform orientation and a midpoint uniform over the
/// positions where the whole fiber fits the sheet; orientations that cannot
/// fit are re-drawn.
fn deposit_fibers(spec: &NetworkSpec, n_f: usize) -> Result<Vec<Fiber>, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let half = spec.fiber.length / 2.0;
    let mut fibers = Vec::with_capacity(n_f);
    for _ in 0..n_f {
        let mut attempts = 0;
        let (phi, cx, cy) = loop {
            let phi: f64 = rng.gen_range(0.0..PI);
            let hx = half * phi.cos().abs();
            let hy = half * phi.sin().abs();
            if 2.0 * hx <= spec.width && 2.0 * hy <= spec.height {
                let cx = rng.gen_range(hx..=spec.width - hx);
                let cy = rng.gen_range(hy..=spec.height - hy);
                break (phi, cx, cy);
            }
            attempts += 1;
            if attempts >= MAX_PLACEMENT_ATTEMPTS {
                return Err(GenError::FiberTooLong {
                    length: spec.fiber.length,
                    width: spec.width,
                    height: spec.height,
                });
            }
        };
        let (dx, dy) = (half * phi.cos(), half * phi.sin());
        fibers.push(Fiber {
            p1: [cx - dx, cy - dy],
            p2: [cx + dx, cy + dy],
        });
    }
    Ok(fibers)
}

/// Node store with snap-to-existing lookup on a uniform grid.
struct NodeStore {
    coords: Vec<[f64; 2]>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl NodeStore {
    fn new() -> Self {
        Self { coords: Vec::new(), grid: HashMap::new() }
    }

    fn cell(p: [f64; 2]) -> (i64, i64) {
        ((p[0] / L_MIN).floor() as i64, (p[1] / L_MIN).floor() as i64)
    }

    /// Returns the id of an existing node within [`L_MIN`] of `p` (the
    /// closest one, lowest id on ties) or inserts a new node.
    fn insert_or_snap(&mut self, p: [f64; 2]) -> usize {
        let (cx, cy) = Self::cell(p);
        let mut best: Option<(f64, usize)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        let q = self.coords[id];
                        let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2))
                            .sqrt();
                        if d <= L_MIN
                            && best.map_or(true, |(bd, bid)| {
                                d < bd || (d == bd && id < bid)
                            })
                        {
                            best = Some((d, id));
                        }
                    }
                }
            }
        }
        if let Some((_, id)) = best {
            return id;
        }
        let id = self.coords.len();
        self.coords.push(p);
        self.grid.entry((cx, cy)).or_default().push(id);
        id
    }
}

/// 2D cross product of `(b - a)` and `(c - a)`.
fn cross(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Intersection parameters `(t, u)` of two segments, if they cross within
/// both (closed) parameter ranges. Parallel pairs report no crossing.
fn segment_intersection(p: &Fiber, q: &Fiber) -> Option<(f64, f64)> {
    let r = [p.p2[0] - p.p1[0], p.p2[1] - p.p1[1]];
    let s = [q.p2[0] - q.p1[0], q.p2[1] - q.p1[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    let scale = (r[0].hypot(r[1])) * (s[0].hypot(s[1]));
    if denom.abs() <= 1e-12 * scale {
        return None;
    }
    let t = cross(p.p1, q.p1, [q.p1[0] + s[0], q.p1[1] + s[1]]) / denom;
    let u = cross(p.p1, q.p1, [p.p1[0] + r[0], p.p1[1] + r[1]]) / denom;
    // cross(p1, q1, q1+s) = (q1-p1) x s and cross(p1, q1, p1+r) = (q1-p1) x r
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

/// Meshes deposited fibers into a pruned, boundary-conditioned model.
fn build_network(spec: &NetworkSpec, fibers: &[Fiber]) -> Result<NetworkModel, GenError> {
    let mut store = NodeStore::new();
    let l_e_max = spec.fiber.length / 2.0;

    // fiber endpoints first, then bond nodes from pairwise crossings
    let ends: Vec<(usize, usize)> = fibers
        .iter()
        .map(|f| (store.insert_or_snap(f.p1), store.insert_or_snap(f.p2)))
        .collect();

    let mut splits: Vec<Vec<(f64, usize)>> = ends
        .iter()
        .map(|&(a, b)| vec![(0.0, a), (1.0, b)])
        .collect();
    let mut n_bonds = 0usize;
    for i in 0..fibers.len() {
        for j in i + 1..fibers.len() {
            if let Some((t, u)) = segment_intersection(&fibers[i], &fibers[j]) {
                let p = [
                    fibers[i].p1[0] + t * (fibers[i].p2[0] - fibers[i].p1[0]),
                    fibers[i].p1[1] + t * (fibers[i].p2[1] - fibers[i].p1[1]),
                ];
                let node = store.insert_or_snap(p);
                splits[i].push((t, node));
                splits[j].push((u, node));
                n_bonds += 1;
            }
        }
    }

    // split fibers at their bond nodes, subdividing long spans
    let mut elements: Vec<NetworkElement> = Vec::new();
    for (fiber_id, list) in splits.iter_mut().enumerate() {
        list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut chain: Vec<usize> = Vec::with_capacity(list.len());
        for &(_, node) in list.iter() {
            if chain.last() != Some(&node) {
                chain.push(node);
            }
        }
        for w in 0..chain.len().saturating_sub(1) {
            let (a, b) = (chain[w], chain[w + 1]);
            if a == b {
                continue;
            }
            let pa = store.coords[a];
            let pb = store.coords[b];
            let len = (pb[0] - pa[0]).hypot(pb[1] - pa[1]);
            let pieces = (len / l_e_max).ceil().max(1.0) as usize;
            let mut prev = a;
            for piece in 1..=pieces {
                let node = if piece == pieces {
                    b
                } else {
                    let s = piece as f64 / pieces as f64;
                    store.insert_or_snap([
                        pa[0] + s * (pb[0] - pa[0]),
                        pa[1] + s * (pb[1] - pa[1]),
                    ])
                };
                if node != prev {
                    elements.push(NetworkElement {
                        n1: prev,
                        n2: node,
                        section: 0,
                        fiber: fiber_id,
                    });
                    prev = node;
                }
            }
        }
    }

    let report = GenerationReport {
        n_fibers: fibers.len(),
        n_bonds,
        total_length: total_length(&store.coords, &elements),
        pruned_length: 0.0,
        notch_removed_elements: 0,
    };
    finish_model(spec, store.coords, elements, report)
}

fn total_length(coords: &[[f64; 2]], elements: &[NetworkElement]) -> f64 {
    elements
        .iter()
        .map(|e| {
            let a = coords[e.n1];
            let b = coords[e.n2];
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .sum()
}

/// Prunes non-load-bearing components, reindexes densely and attaches the
/// boundary conditions.
fn finish_model(
    spec: &NetworkSpec,
    coords: Vec<[f64; 2]>,
    elements: Vec<NetworkElement>,
    mut report: GenerationReport,
) -> Result<NetworkModel, GenError> {
    let n_nodes = coords.len();
    let (fixed, moving) = grip_sets_2d(&coords, spec.width, spec.grip_band)?;

    // union-find over the element graph
    let mut parent: Vec<usize> = (0..n_nodes).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &elements {
        let (ra, rb) = (find(&mut parent, e.n1), find(&mut parent, e.n2));
        if ra != rb {
            parent[ra] = rb;
        }
    }

    let mut touches_fixed: HashMap<usize, bool> = HashMap::new();
    let mut touches_moving: HashMap<usize, bool> = HashMap::new();
    let mut component_size: HashMap<usize, usize> = HashMap::new();
    for n in 0..n_nodes {
        let root = find(&mut parent, n);
        *component_size.entry(root).or_insert(0) += 1;
    }
    for &n in &fixed {
        touches_fixed.insert(find(&mut parent, n), true);
    }
    for &n in &moving {
        touches_moving.insert(find(&mut parent, n), true);
    }
    let load_bearing = |parent: &mut Vec<usize>, node: usize| {
        let root = find(parent, node);
        touches_fixed.get(&root).copied().unwrap_or(false)
            && touches_moving.get(&root).copied().unwrap_or(false)
    };

    let any_path = (0..n_nodes).any(|n| {
        let root = find(&mut parent, n);
        touches_fixed.get(&root).copied().unwrap_or(false)
            && touches_moving.get(&root).copied().unwrap_or(false)
    });
    if !any_path {
        let report = PercolationReport {
            components: component_size.len(),
            largest_component_nodes:
                component_size.values().copied().max().unwrap_or(0),
            components_touching_fixed: touches_fixed.len(),
            components_touching_moving: touches_moving.len(),
        };
        return Err(GenError::NotPercolated { report });
    }

    // keep elements of load-bearing components, reindex nodes densely
    let kept_length_before = total_length(&coords, &elements);
    let mut new_id = vec![usize::MAX; n_nodes];
    let mut nodes: Vec<[f64; 3]> = Vec::new();
    let mut kept: Vec<NetworkElement> = Vec::new();
    for e in &elements {
        if !load_bearing(&mut parent, e.n1) {
            continue;
        }
        for n in [e.n1, e.n2] {
            if new_id[n] == usize::MAX {
                new_id[n] = nodes.len();
                nodes.push([coords[n][0], coords[n][1], 0.0]);
            }
        }
        kept.push(NetworkElement {
            n1: new_id[e.n1],
            n2: new_id[e.n2],
            section: e.section,
            fiber: e.fiber,
        });
    }
    let kept_2d: Vec<[f64; 2]> =
        nodes.iter().map(|p| [p[0], p[1]]).collect();
    report.pruned_length += kept_length_before - total_length(&kept_2d, &kept);

    let (fixed, moving) = grip_sets_2d(&kept_2d, spec.width, spec.grip_band)?;
    let bcs = network_bcs(nodes.len(), &fixed, &moving);

    Ok(NetworkModel {
        nodes,
        sections: vec![spec.fiber.section],
        elements: kept,
        bcs,
        fixed_nodes: fixed,
        moving_nodes: moving,
        width: spec.width,
        height: spec.height,
        grip_band: spec.grip_band,
        nominal_area: spec.height * spec.fiber.height,
        generation: Some(report),
    })
}

/// Grip node sets by x coordinate; errors when a band is empty.
fn grip_sets_2d(
    coords: &[[f64; 2]],
    width: f64,
    band: f64,
) -> Result<(Vec<usize>, Vec<usize>), GenError> {
    let fixed: Vec<usize> = (0..coords.len())
        .filter(|&n| coords[n][0] <= band)
        .collect();
    let moving: Vec<usize> = (0..coords.len())
        .filter(|&n| coords[n][0] >= width - band)
        .collect();
    if fixed.is_empty() {
        return Err(GenError::EmptyGrip { side: "fixed", band });
    }
    if moving.is_empty() {
        return Err(GenError::EmptyGrip { side: "moving", band });
    }
    Ok((fixed, moving))
}

/// Standard tensile boundary conditions: out-of-plane motion is suppressed
/// everywhere, the fixed grip is fully clamped, and the moving grip carries
/// the ramp on u_x with u_y and theta_z held.
fn network_bcs(n_nodes: usize, fixed: &[usize], moving: &[usize]) -> Vec<NodeBc> {
    use DofBc::*;
    let mut bcs: Vec<NodeBc> = (0..n_nodes)
        .map(|node| NodeBc { node, dofs: [Free, Free, Fixed, Fixed, Fixed, Free] })
        .collect();
    for &n in fixed {
        bcs[n].dofs = [Fixed; 6];
    }
    for &n in moving {
        bcs[n].dofs = [Ramp, Fixed, Fixed, Fixed, Fixed, Fixed];
    }
    bcs
}

/// Recomputes the grip sets of an existing model for a given band.
pub fn boundary_sets(model: &NetworkModel, grip_band: f64) -> Result<BoundarySets, GenError> {
    let coords: Vec<[f64; 2]> =
        model.nodes.iter().map(|p| [p[0], p[1]]).collect();
    let (fixed, moving) = grip_sets_2d(&coords, model.width, grip_band)?;
    Ok(BoundarySets { fixed, moving })
}

/// Removes every element that crosses the open notch triangle and re-prunes
/// the network; the grips must stay connected.
pub fn apply_notch(
    model: &NetworkModel,
    notch: &NotchSpec,
) -> Result<NetworkModel, GenError> {
    let depth = notch.depth;
    let half_width = depth * (notch.angle_deg.to_radians() / 2.0).tan();
    let apex = [notch.apex_x, depth];
    let m1 = [notch.apex_x - half_width, 0.0];
    let m2 = [notch.apex_x + half_width, 0.0];

    let coords: Vec<[f64; 2]> =
        model.nodes.iter().map(|p| [p[0], p[1]]).collect();
    let mut kept: Vec<NetworkElement> = Vec::new();
    let mut removed = 0usize;
    for e in &model.elements {
        if segment_hits_triangle(coords[e.n1], coords[e.n2], [m1, m2, apex]) {
            removed += 1;
        } else {
            kept.push(*e);
        }
    }

    let spec_like = NetworkSpec {
        width: model.width,
        height: model.height,
        sheet_density: 1.0,
        fiber: FiberProperties {
            section: model.sections[0],
            length: 1.0,
            width: 1.0,
            height: model.nominal_area / model.height,
            density: 1.0,
        },
        seed: 0,
        grip_band: model.grip_band,
        notch: None,
    };
    let mut report = model.generation.unwrap_or(GenerationReport {
        n_fibers: 0,
        n_bonds: 0,
        total_length: 0.0,
        pruned_length: 0.0,
        notch_removed_elements: 0,
    });
    report.notch_removed_elements += removed;
    let mut out = finish_model(&spec_like, coords, kept, report).map_err(|e| {
        match e {
            GenError::NotPercolated { report } | GenError::NotchDisconnects { report, .. } => {
                GenError::NotchDisconnects { removed, report }
            }
            other => other,
        }
    })?;
    out.sections = model.sections.clone();
    Ok(out)
}

/// True when the segment `a-b` passes through the open triangle interior:
/// an endpoint strictly inside, or a proper crossing of a triangle edge.
fn segment_hits_triangle(a: [f64; 2], b: [f64; 2], tri: [[f64; 2]; 3]) -> bool {
    if point_strictly_inside(a, tri) || point_strictly_inside(b, tri) {
        return true;
    }
    for k in 0..3 {
        let (c, d) = (tri[k], tri[(k + 1) % 3]);
        if proper_crossing(a, b, c, d) {
            return true;
        }
    }
    false
}

fn point_strictly_inside(p: [f64; 2], tri: [[f64; 2]; 3]) -> bool {
    let s0 = cross(tri[0], tri[1], p);
    let s1 = cross(tri[1], tri[2], p);
    let s2 = cross(tri[2], tri[0], p);
    (s0 > 0.0 && s1 > 0.0 && s2 > 0.0) || (s0 < 0.0 && s1 < 0.0 && s2 < 0.0)
}

/// Segments cross at interior points of both (strict inequalities), so
/// touching the notch boundary does not remove an element.
fn proper_crossing(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

#[derive(Serialize, Deserialize)]
struct VersionedModel {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: NetworkModel,
}

impl NetworkModel {
    /// Serializes the model to the versioned JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&VersionedModel {
            format: FORMAT.into(),
            version: VERSION,
            model: self.clone(),
        })
        .expect("model serialization cannot fail")
    }

    /// Parses and validates a versioned JSON document.
    pub fn from_json(text: &str) -> Result<Self, GenError> {
        let doc: VersionedModel = serde_json::from_str(text)
            .map_err(|e| GenError::BadFormat(e.to_string()))?;
        if doc.format != FORMAT || doc.version != VERSION {
            return Err(GenError::BadFormat(format!(
                "got format {:?} v{}",
                doc.format, doc.version
            )));
        }
        doc.model.validate()?;
        Ok(doc.model)
    }

    /// Structural sanity checks shared by generation and deserialization.
    pub fn validate(&self) -> Result<(), GenError> {
        let n = self.nodes.len();
        if self.sections.is_empty() {
            return Err(GenError::Invalid("no sections".into()));
        }
        for p in &self.nodes {
            if p.iter().any(|v| !v.is_finite()) {
                return Err(GenError::Invalid("non-finite node coordinate".into()));
            }
        }
        for (i, e) in self.elements.iter().enumerate() {
            if e.n1 >= n || e.n2 >= n {
                return Err(GenError::Invalid(format!(
                    "element {i} references missing node"
                )));
            }
            if e.n1 == e.n2 {
                return Err(GenError::Invalid(format!("element {i} is degenerate")));
            }
            if e.section >= self.sections.len() {
                return Err(GenError::Invalid(format!(
                    "element {i} references missing section"
                )));
            }
        }
        for bc in &self.bcs {
            if bc.node >= n {
                return Err(GenError::Invalid(
                    "boundary condition references missing node".into(),
                ));
            }
        }
        for &m in self.fixed_nodes.iter().chain(self.moving_nodes.iter()) {
            if m >= n {
                return Err(GenError::Invalid("grip set references missing node".into()));
            }
        }
        if !(self.nominal_area > 0.0) {
            return Err(GenError::Invalid("nominal area must be positive".into()));
        }
        Ok(())
    }
}
