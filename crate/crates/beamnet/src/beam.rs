//! Local kinematics and elastic response of a two-node 3D Timoshenko beam.
//!
//! Element vectors stack node 1 before node 2, each node ordered as
//! `(u_x, u_y, u_z, theta_x, theta_y, theta_z)` in the local frame with x
//! along the beam axis. Strain measures and stress resultants share the
//! ordering `(eps, gamma_y, gamma_z, kappa_x, kappa_y, kappa_z)` and
//! `(N, Q_y, Q_z, M_x, M_y, M_z)`.
//!
//! All integrals use one Gauss point at the element midpoint, where the
//! linear shape functions evaluate to 1/2, so every element integral reduces
//! to `l_e` times the integrand.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Local displacement (or force) vector of a two-node element.
pub type LocalVector = SVector<f64, 12>;
/// Local element matrix.
pub type LocalMatrix = SMatrix<f64, 12, 12>;
/// Strain-displacement matrix evaluated at the midpoint Gauss point.
pub type BMatrix = SMatrix<f64, 6, 12>;

/// Relative tolerance used when validating section consistency.
const SECTION_CONSISTENCY_TOL: f64 = 1e-12;

/// Section data of a fiber: elastic moduli plus the axial failure law.
///
/// The axial softening law is linear: after the axial force reaches `n_bar`
/// it decays with (negative) modulus `h` until the opening reaches
/// `n_bar / |h|`, at which point the fiber ruptures. The dissipated energy
/// per hinge is `g_f = n_bar^2 / (2 |h|)`; constructors keep `h` and `g_f`
/// consistent so either one can be prescribed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSection {
    /// Young's modulus [MPa].
    pub e: f64,
    /// Shear modulus [MPa].
    pub g: f64,
    /// Shear correction factor [-].
    pub k: f64,
    /// Cross-section area [mm^2].
    pub a: f64,
    /// Torsion constant [mm^4].
    pub j: f64,
    /// Second moment of area, first principal axis [mm^4].
    pub i11: f64,
    /// Second moment of area, second principal axis [mm^4].
    pub i22: f64,
    /// Axial strength [N].
    pub n_bar: f64,
    /// Softening modulus, strictly negative [N/mm].
    pub h: f64,
    /// Fracture energy per hinge [N*mm].
    pub g_f: f64,
}

/// Validation failures when building a [`FiberSection`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectionError {
    #[error("section property {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("softening modulus must be negative, got {0}")]
    NonNegativeSoftening(f64),
    #[error(
        "inconsistent softening data: g_f = {g_f} but n_bar^2/(2|h|) = {expected}"
    )]
    Inconsistent { g_f: f64, expected: f64 },
}

impl FiberSection {
    /// Builds a section from its fracture energy; the softening modulus is
    /// derived as `h = -n_bar^2 / (2 g_f)`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_fracture_energy(
        e: f64,
        g: f64,
        k: f64,
        a: f64,
        j: f64,
        i11: f64,
        i22: f64,
        n_bar: f64,
        g_f: f64,
    ) -> Result<Self, SectionError> {
        if g_f <= 0.0 || !g_f.is_finite() {
            return Err(SectionError::NonPositive { name: "g_f", value: g_f });
        }
        let h = -n_bar * n_bar / (2.0 * g_f);
        Self::new(e, g, k, a, j, i11, i22, n_bar, h, g_f)
    }

    /// Builds a section from its softening modulus; the fracture energy is
    /// derived as `g_f = n_bar^2 / (2 |h|)`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_softening_modulus(
        e: f64,
        g: f64,
        k: f64,
        a: f64,
        j: f64,
        i11: f64,
        i22: f64,
        n_bar: f64,
        h: f64,
    ) -> Result<Self, SectionError> {
        if h >= 0.0 || !h.is_finite() {
            return Err(SectionError::NonNegativeSoftening(h));
        }
        let g_f = n_bar * n_bar / (2.0 * h.abs());
        Self::new(e, g, k, a, j, i11, i22, n_bar, h, g_f)
    }

    #[allow(clippy::too_many_arguments)]
    fn new(
        e: f64,
        g: f64,
        k: f64,
        a: f64,
        j: f64,
        i11: f64,
        i22: f64,
        n_bar: f64,
        h: f64,
        g_f: f64,
    ) -> Result<Self, SectionError> {
        for (name, value) in [
            ("e", e),
            ("g", g),
            ("k", k),
            ("a", a),
            ("j", j),
            ("i11", i11),
            ("i22", i22),
            ("n_bar", n_bar),
            ("g_f", g_f),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(SectionError::NonPositive { name, value });
            }
        }
        if h >= 0.0 || !h.is_finite() {
            return Err(SectionError::NonNegativeSoftening(h));
        }
        let expected = n_bar * n_bar / (2.0 * h.abs());
        if (g_f - expected).abs() > SECTION_CONSISTENCY_TOL * expected {
            return Err(SectionError::Inconsistent { g_f, expected });
        }
        Ok(Self { e, g, k, a, j, i11, i22, n_bar, h, g_f })
    }

    /// Axial stiffness `E A` [N].
    pub fn ea(&self) -> f64 {
        self.e * self.a
    }

    /// Shear stiffness `k G A` [N].
    pub fn kga(&self) -> f64 {
        self.k * self.g * self.a
    }

    /// Diagonal of the bulk constitutive matrix
    /// `C = diag(EA, kGA, kGA, GJ, G I11, G I22)`.
    pub fn c_diag(&self) -> SVector<f64, 6> {
        SVector::<f64, 6>::from([
            self.ea(),
            self.kga(),
            self.kga(),
            self.g * self.j,
            self.g * self.i11,
            self.g * self.i22,
        ])
    }
}

/// Generalized strain at the element midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeneralizedStrain {
    /// Axial strain [-].
    pub eps: f64,
    /// Shear strain in the local y direction [-].
    pub gamma_y: f64,
    /// Shear strain in the local z direction [-].
    pub gamma_z: f64,
    /// Twist rate [1/mm].
    pub kappa_x: f64,
    /// Curvature about the local y axis [1/mm].
    pub kappa_y: f64,
    /// Curvature about the local z axis [1/mm].
    pub kappa_z: f64,
}

impl GeneralizedStrain {
    pub fn from_vector(v: &SVector<f64, 6>) -> Self {
        Self {
            eps: v[0],
            gamma_y: v[1],
            gamma_z: v[2],
            kappa_x: v[3],
            kappa_y: v[4],
            kappa_z: v[5],
        }
    }

    pub fn to_vector(&self) -> SVector<f64, 6> {
        SVector::<f64, 6>::from([
            self.eps,
            self.gamma_y,
            self.gamma_z,
            self.kappa_x,
            self.kappa_y,
            self.kappa_z,
        ])
    }
}

/// Stress resultants at the element midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StressResultants {
    /// Axial force [N].
    pub n: f64,
    /// Shear force, local y [N].
    pub q_y: f64,
    /// Shear force, local z [N].
    pub q_z: f64,
    /// Torque [N*mm].
    pub m_x: f64,
    /// Bending moment about local y [N*mm].
    pub m_y: f64,
    /// Bending moment about local z [N*mm].
    pub m_z: f64,
}

impl StressResultants {
    pub fn from_vector(v: &SVector<f64, 6>) -> Self {
        Self { n: v[0], q_y: v[1], q_z: v[2], m_x: v[3], m_y: v[4], m_z: v[5] }
    }

    pub fn to_vector(&self) -> SVector<f64, 6> {
        SVector::<f64, 6>::from([
            self.n, self.q_y, self.q_z, self.m_x, self.m_y, self.m_z,
        ])
    }
}

/// Strain-displacement matrix at the midpoint Gauss point.
///
/// The axial, torsion and curvature rows carry the shape-function
/// derivatives `-1/l_e` and `+1/l_e`; the shear rows additionally couple to
/// the end rotations through the shape-function values 1/2, with
/// `gamma_y = u_y' - theta_z` and `gamma_z = u_z' + theta_y`.
pub fn b_matrix(l_e: f64) -> BMatrix {
    let b1 = -1.0 / l_e;
    let b2 = 1.0 / l_e;
    let n1 = 0.5;
    let n2 = 0.5;
    let mut b = BMatrix::zeros();
    b[(0, 0)] = b1;
    b[(0, 6)] = b2;
    b[(1, 1)] = b1;
    b[(1, 7)] = b2;
    b[(1, 5)] = -n1;
    b[(1, 11)] = -n2;
    b[(2, 2)] = b1;
    b[(2, 8)] = b2;
    b[(2, 4)] = n1;
    b[(2, 10)] = n2;
    b[(3, 3)] = b1;
    b[(3, 9)] = b2;
    b[(4, 4)] = b1;
    b[(4, 10)] = b2;
    b[(5, 5)] = b1;
    b[(5, 11)] = b2;
    b
}

/// Midpoint strain produced by the local end displacements.
pub fn strain_from_displacements(d: &LocalVector, l_e: f64) -> GeneralizedStrain {
    let v = b_matrix(l_e) * d;
    GeneralizedStrain::from_vector(&v)
}

/// Stress resultants for a bulk strain and an axial opening `xi`.
///
/// The opening reduces the regular axial strain to `eps - xi / l_e`; all
/// other components are purely elastic.
pub fn stress_resultants(
    strain: &GeneralizedStrain,
    xi: f64,
    section: &FiberSection,
    l_e: f64,
) -> StressResultants {
    let c = section.c_diag();
    let mut s = strain.to_vector().component_mul(&c);
    s[0] = section.ea() * (strain.eps - xi / l_e);
    StressResultants::from_vector(&s)
}

/// Internal force vector `l_e * B^T * sigma` of the single-point quadrature.
pub fn internal_force(sigma: &StressResultants, l_e: f64) -> LocalVector {
    l_e * b_matrix(l_e).transpose() * sigma.to_vector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn unit_section() -> FiberSection {
        FiberSection::with_softening_modulus(
            1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -0.5,
        )
        .unwrap()
    }

    /// Square paper-fiber section carrying the benchmark values.
    fn paper_fiber(g_f: f64) -> FiberSection {
        let side = 0.00028_f64.sqrt();
        let a = side * side;
        let i = side.powi(4) / 12.0;
        FiberSection::with_fracture_energy(
            6500.0,
            3250.0,
            0.84,
            a,
            2.0 * i,
            i,
            i,
            0.2352,
            g_f,
        )
        .unwrap()
    }

    #[test]
    fn b_matrix_entries_match_hand_evaluation() {
        let l_e = 2.0;
        let b = b_matrix(l_e);
        let mut expected = BMatrix::zeros();
        for (row, col1, col2) in
            [(0, 0, 6), (1, 1, 7), (2, 2, 8), (3, 3, 9), (4, 4, 10), (5, 5, 11)]
        {
            expected[(row, col1)] = -0.5;
            expected[(row, col2)] = 0.5;
        }
        expected[(1, 5)] = -0.5;
        expected[(1, 11)] = -0.5;
        expected[(2, 4)] = 0.5;
        expected[(2, 10)] = 0.5;
        assert_relative_eq!(b, expected, max_relative = TOL);
    }

    #[test]
    fn transverse_motion_with_matching_rotation_gives_zero_shear() {
        let mut d = LocalVector::zeros();
        d[7] = 0.2; // u_y at node 2
        d[5] = 0.2; // theta_z at node 1
        d[11] = 0.2; // theta_z at node 2
        let strain = strain_from_displacements(&d, 1.0);
        assert_relative_eq!(strain.gamma_y, 0.0, epsilon = TOL);
    }

    #[test]
    fn axial_stretch_maps_to_eps_only() {
        let mut d = LocalVector::zeros();
        d[6] = 0.3;
        let strain = strain_from_displacements(&d, 2.0);
        assert_relative_eq!(strain.eps, 0.15, max_relative = TOL);
        let other = strain.to_vector().norm_squared() - strain.eps * strain.eps;
        assert!(other.abs() < TOL);
    }

    #[test]
    fn paper_fiber_axial_and_shear_stiffness() {
        let s = paper_fiber(0.1);
        assert_relative_eq!(s.ea(), 1.82, max_relative = 1e-12);
        assert_relative_eq!(s.kga(), 0.7644, max_relative = 1e-12);
        let c = s.c_diag();
        assert_relative_eq!(c[0], 1.82, max_relative = 1e-12);
        assert_relative_eq!(c[1], 0.7644, max_relative = 1e-12);
        assert_relative_eq!(c[2], 0.7644, max_relative = 1e-12);
    }

    #[test]
    fn paper_fiber_strain_at_strength() {
        let s = paper_fiber(0.1);
        assert_relative_eq!(
            s.n_bar / s.ea(),
            0.12923076923076923,
            max_relative = 1e-12
        );
    }

    #[test]
    fn stress_resultants_subtract_opening_from_axial_strain() {
        let s = unit_section();
        let strain = GeneralizedStrain { eps: 0.9, ..Default::default() };
        let sig = stress_resultants(&strain, 0.4, &s, 2.0);
        assert_relative_eq!(sig.n, 0.7, max_relative = TOL);
    }

    #[test]
    fn unit_shear_stress_spreads_to_forces_and_moments() {
        let sigma = StressResultants { q_y: 1.0, ..Default::default() };
        let f = internal_force(&sigma, 1.0);
        let mut expected = LocalVector::zeros();
        expected[1] = -1.0;
        expected[7] = 1.0;
        expected[5] = -0.5;
        expected[11] = -0.5;
        assert_relative_eq!(f, expected, max_relative = TOL);
    }

    #[test]
    fn section_constructors_round_trip() {
        let a = FiberSection::with_fracture_energy(
            1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.1,
        )
        .unwrap();
        let b = FiberSection::with_softening_modulus(
            1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, a.h,
        )
        .unwrap();
        assert_relative_eq!(a.g_f, b.g_f, max_relative = TOL);
        assert_relative_eq!(a.h, -5.0, max_relative = TOL);
    }

    #[test]
    fn section_rejects_bad_inputs() {
        assert!(FiberSection::with_fracture_energy(
            -1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.1
        )
        .is_err());
        assert!(FiberSection::with_softening_modulus(
            1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5
        )
        .is_err());
        assert!(FiberSection::with_fracture_energy(
            1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0
        )
        .is_err());
    }

    /// Rigid-body displacement of the two-node element: translation by `t`
    /// and infinitesimal rotation `w` about the element midpoint.
    fn rigid_mode(l_e: f64, t: [f64; 3], w: [f64; 3]) -> LocalVector {
        let half = l_e / 2.0;
        let mut d = LocalVector::zeros();
        // node 1 at x = -half, node 2 at x = +half relative to the center
        for (node, x) in [(0, -half), (1, half)] {
            let o = node * 6;
            d[o] = t[0] + 0.0;
            d[o + 1] = t[1] + w[2] * x;
            d[o + 2] = t[2] - w[1] * x;
            d[o + 3] = w[0];
            d[o + 4] = w[1];
            d[o + 5] = w[2];
        }
        d
    }

    proptest! {
        #[test]
        fn internal_force_is_orthogonal_to_rigid_modes(
            sigma in proptest::array::uniform6(-10.0..10.0f64),
            t in proptest::array::uniform3(-1.0..1.0f64),
            w in proptest::array::uniform3(-1.0..1.0f64),
            l_e in 0.01..10.0f64,
        ) {
            let s = StressResultants::from_vector(&SVector::<f64, 6>::from(sigma));
            let f = internal_force(&s, l_e);
            let scale = f.norm().max(1.0);
            for mode in [
                rigid_mode(l_e, t, [0.0; 3]),
                rigid_mode(l_e, [0.0; 3], w),
                rigid_mode(l_e, t, w),
            ] {
                let work = f.dot(&mode);
                prop_assert!(
                    work.abs() <= 1e-12 * scale * mode.norm().max(1.0),
                    "rigid mode carries work {}", work
                );
            }
        }

        #[test]
        fn rigid_modes_produce_no_strain(
            t in proptest::array::uniform3(-1.0..1.0f64),
            w in proptest::array::uniform3(-1.0..1.0f64),
            l_e in 0.01..10.0f64,
        ) {
            let d = rigid_mode(l_e, t, w);
            let strain = strain_from_displacements(&d, l_e).to_vector();
            prop_assert!(strain.norm() <= 1e-12 * d.norm().max(1.0));
        }
    }
}
