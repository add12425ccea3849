//! Built-in model builders: the axial benchmark bar and the random-sheet
//! tension specimens.

use beamnet::beam::SectionError;
use beamnet::netgen::{
    DofBc, FiberProperties, NetworkElement, NetworkModel, NetworkSpec, NodeBc,
    NotchSpec,
};
use beamnet::FiberSection;

/// Young's modulus of the reference fiber [MPa].
pub const FIBER_E: f64 = 6500.0;
/// Shear modulus of the reference fiber [MPa].
pub const FIBER_G: f64 = 3250.0;
/// Shear correction factor of the square cross section.
pub const FIBER_SHEAR_K: f64 = 0.84;
/// Cross-section area of the reference fiber [mm^2].
pub const FIBER_AREA: f64 = 2.8e-4;
/// Fiber length [mm].
pub const FIBER_LENGTH: f64 = 2.5;
/// Fiber material density [kg/m^3].
pub const FIBER_DENSITY: f64 = 1500.0;
/// Axial strength of one fiber [N].
pub const FIBER_N_BAR: f64 = 0.2352;
/// Default fracture energy [N mm / mm].
pub const DEFAULT_G_F: f64 = 0.1;

/// Length of the benchmark bar [mm].
pub const BAR_LENGTH: f64 = 0.1;
/// Strength knockdown of the bar's first element, which localizes the
/// hinge there independently of the mesh.
pub const BAR_WEAK_FACTOR: f64 = 0.99;

/// Square-section fiber used by the sheet scenarios. The second moments
/// follow the square shape and the torsion constant is taken as their sum.
pub fn default_fiber(g_f: f64) -> Result<FiberProperties, SectionError> {
    let side = FIBER_AREA.sqrt();
    let i = FIBER_AREA * FIBER_AREA / 12.0;
    Ok(FiberProperties {
        section: FiberSection::with_fracture_energy(
            FIBER_E,
            FIBER_G,
            FIBER_SHEAR_K,
            FIBER_AREA,
            2.0 * i,
            i,
            i,
            FIBER_N_BAR,
            g_f,
        )?,
        length: FIBER_LENGTH,
        width: side,
        height: side,
        density: FIBER_DENSITY,
    })
}

/// Uniaxial-tension sheet spec.
pub fn tensile_spec(
    width: f64,
    height: f64,
    sheet_density: f64,
    g_f: f64,
    seed: u64,
    grip_band: f64,
) -> Result<NetworkSpec, SectionError> {
    Ok(NetworkSpec {
        width,
        height,
        sheet_density,
        fiber: default_fiber(g_f)?,
        seed,
        grip_band,
        notch: None,
    })
}

/// Tension sheet with a triangular edge notch.
#[allow(clippy::too_many_arguments)]
pub fn notched_spec(
    width: f64,
    height: f64,
    sheet_density: f64,
    g_f: f64,
    seed: u64,
    grip_band: f64,
    notch: NotchSpec,
) -> Result<NetworkSpec, SectionError> {
    let mut spec = tensile_spec(width, height, sheet_density, g_f, seed, grip_band)?;
    spec.notch = Some(notch);
    Ok(spec)
}

/// Axial bar clamped at one end and ramped at the other, split into
/// `n_elements` equal pieces. Unit modulus and area over a 0.1 mm length;
/// the first element is slightly weaker so failure localizes there and the
/// global response is independent of the subdivision.
pub fn bar_model(n_elements: usize, g_f: f64) -> Result<NetworkModel, SectionError> {
    use DofBc::*;
    assert!(n_elements >= 1, "bar needs at least one element");
    let base =
        FiberSection::with_fracture_energy(1.0, 0.5, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, g_f)?;
    let weak = FiberSection::with_fracture_energy(
        1.0,
        0.5,
        1.0,
        1.0,
        2.0,
        1.0,
        1.0,
        BAR_WEAK_FACTOR,
        g_f,
    )?;
    let n_nodes = n_elements + 1;
    let nodes: Vec<[f64; 3]> = (0..n_nodes)
        .map(|i| [BAR_LENGTH * i as f64 / n_elements as f64, 0.0, 0.0])
        .collect();
    let elements: Vec<NetworkElement> = (0..n_elements)
        .map(|i| NetworkElement {
            n1: i,
            n2: i + 1,
            section: usize::from(i > 0),
            fiber: 0,
        })
        .collect();
    let mut bcs: Vec<NodeBc> = (0..n_nodes)
        .map(|node| NodeBc {
            node,
            dofs: [Free, Fixed, Fixed, Fixed, Fixed, Fixed],
        })
        .collect();
    bcs[0].dofs = [Fixed; 6];
    bcs[n_nodes - 1].dofs = [Ramp, Fixed, Fixed, Fixed, Fixed, Fixed];
    Ok(NetworkModel {
        nodes,
        sections: vec![weak, base],
        elements,
        bcs,
        fixed_nodes: vec![0],
        moving_nodes: vec![n_nodes - 1],
        width: BAR_LENGTH,
        height: 1.0,
        grip_band: 0.0,
        nominal_area: 1.0,
        generation: None,
    })
}

/// Closed-form reaction of the benchmark bar: linear to the peak
/// `BAR_WEAK_FACTOR` at `u = peak / (EA / L)`, then linear softening to
/// zero at `u = 2 g_f / peak`, zero beyond.
pub fn bar_reference(u: f64, g_f: f64) -> f64 {
    let stiffness = 1.0 / BAR_LENGTH;
    let peak = BAR_WEAK_FACTOR;
    let u_peak = peak / stiffness;
    let u_rupture = 2.0 * g_f / peak;
    if u <= u_peak {
        stiffness * u
    } else if u < u_rupture {
        peak * (u_rupture - u) / (u_rupture - u_peak)
    } else {
        0.0
    }
}
