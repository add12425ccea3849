//! Element-level tangent stiffness for the three solution schemes and the
//! transformation between local and global axes.
//!
//! With the hinge condensed out, the monolithic tangent is
//! `K_dd - K_dxi K_xixi^-1 K_xid`. Because only the axial jump component is
//! active, the coupling blocks vanish outside the axial entries and the
//! condensation reduces to a rank-one correction with pivot
//! `EA/l_e + h`. The staggered tangent keeps the bulk stiffness `K_dd`; the
//! hybrid tangent mixes the two so that the condensed axial diagonal never
//! drops below the floor `k_min = h_tol * EA / l_e`.

use nalgebra::{Matrix3, SMatrix, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beam::{b_matrix, FiberSection, LocalMatrix, LocalVector};

/// Relative pivot size below which the condensation counts as singular.
const CONDENSATION_PIVOT_TOL: f64 = 1e-14;

/// Direction tolerance for the local-triad reference-axis switch.
const TRIAD_PARALLEL_TOL: f64 = 1e-8;

/// Global solution scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// Consistent condensed tangent; may turn indefinite while softening.
    Monolithic,
    /// Bulk tangent only; hinge states still update every iteration.
    Staggered,
    /// Matrix-regularized mix with stiffness-floor tolerance `h_tol`.
    Hybrid { h_tol: f64 },
}

/// Errors from element tangent evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElementError {
    #[error("element of length {0} is degenerate")]
    DegenerateLength(f64),
    #[error("condensation pivot {pivot} is singular at scale {scale}")]
    SingularCondensation { pivot: f64, scale: f64 },
}

/// Geometry of one element: end nodes, length and local triad.
///
/// `lambda` holds the local axes as rows, so it maps global vectors into
/// the local frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementGeometry {
    pub nodes: [usize; 2],
    pub l_e: f64,
    pub lambda: Matrix3<f64>,
}

impl ElementGeometry {
    /// Builds the geometry from the end-node coordinates.
    ///
    /// The local x axis follows the element; the local y axis is the
    /// normalized cross product of the global z axis with the element axis,
    /// falling back to the global x axis as reference when the element is
    /// (nearly) parallel to global z.
    pub fn from_coords(
        nodes: [usize; 2],
        p1: [f64; 3],
        p2: [f64; 3],
    ) -> Result<Self, ElementError> {
        let a = Vector3::new(p2[0] - p1[0], p2[1] - p1[1], p2[2] - p1[2]);
        let l_e = a.norm();
        if !(l_e > 0.0) || !l_e.is_finite() {
            return Err(ElementError::DegenerateLength(l_e));
        }
        let e_x = a / l_e;
        let mut c = Vector3::z().cross(&e_x);
        if c.norm() < TRIAD_PARALLEL_TOL {
            c = Vector3::x().cross(&e_x);
        }
        let e_y = c / c.norm();
        let e_z = e_x.cross(&e_y);
        let lambda = Matrix3::from_rows(&[
            e_x.transpose(),
            e_y.transpose(),
            e_z.transpose(),
        ]);
        Ok(Self { nodes, l_e, lambda })
    }

    /// Block-diagonal 12x12 transformation built from four copies of
    /// `lambda`; maps global element vectors to local ones.
    pub fn transformation(&self) -> LocalMatrix {
        let mut t = LocalMatrix::zeros();
        for block in 0..4 {
            let o = 3 * block;
            t.fixed_view_mut::<3, 3>(o, o).copy_from(&self.lambda);
        }
        t
    }
}

/// The four tangent blocks of the element with an embedded hinge.
#[derive(Debug, Clone, PartialEq)]
pub struct SubMatrices {
    /// Bulk stiffness `l_e * B^T C B`.
    pub k_dd: LocalMatrix,
    /// Displacement-jump coupling `l_e * B^T C G`.
    pub k_dxi: SMatrix<f64, 12, 6>,
    /// Jump-displacement coupling `l_e * G C B + C* B`.
    pub k_xid: SMatrix<f64, 6, 12>,
    /// Jump block `l_e * G^T C G + H`.
    pub k_xixi: SMatrix<f64, 6, 6>,
    /// Axial bulk stiffness `EA / l_e`, the condensation pivot scale.
    pub ea_over_l: f64,
}

/// Evaluates the tangent blocks. The jump interpolation is
/// `G = -(1/l_e) I`; the degraded modulus matrix `C*` zeroes the axial entry
/// so that only tension drives the hinge, and the softening modulus `h`
/// enters the axial jump entry.
pub fn submatrices(section: &FiberSection, l_e: f64) -> SubMatrices {
    let b = b_matrix(l_e);
    let c = SMatrix::<f64, 6, 6>::from_diagonal(&section.c_diag());
    let mut c_star = c;
    c_star[(0, 0)] = 0.0;
    let g = -1.0 / l_e;

    let k_dd = l_e * b.transpose() * c * b;
    let k_dxi = l_e * g * b.transpose() * c;
    let k_xid = l_e * g * c * b + c_star * b;
    let mut k_xixi = l_e * g * g * c;
    k_xixi[(0, 0)] += section.h;

    SubMatrices { k_dd, k_dxi, k_xid, k_xixi, ea_over_l: section.ea() / l_e }
}

/// Monolithic tangent: rank-one condensation of the active axial jump.
///
/// The inactive jump components are frozen, so only the axial entry of
/// `K_xixi` is inverted. The condensed axial diagonal equals
/// `(EA/l_e) * h / (h + EA/l_e)`.
pub fn condense_monolithic(subs: &SubMatrices) -> Result<LocalMatrix, ElementError> {
    let pivot = subs.k_xixi[(0, 0)];
    if pivot.abs() <= CONDENSATION_PIVOT_TOL * subs.ea_over_l {
        return Err(ElementError::SingularCondensation {
            pivot,
            scale: subs.ea_over_l,
        });
    }
    let col = subs.k_dxi.column(0);
    let row = subs.k_xid.row(0);
    Ok(subs.k_dd - (col * row) / pivot)
}

/// Full 6x6 condensation, kept for verification against the rank-one path.
#[cfg(any(test, feature = "full-condensation"))]
pub fn condense_monolithic_full(
    subs: &SubMatrices,
) -> Result<LocalMatrix, ElementError> {
    let inv = subs.k_xixi.try_inverse().ok_or(
        ElementError::SingularCondensation {
            pivot: subs.k_xixi[(0, 0)],
            scale: subs.ea_over_l,
        },
    )?;
    Ok(subs.k_dd - subs.k_dxi * inv * subs.k_xid)
}

/// Staggered tangent: the bulk stiffness unchanged.
pub fn staggered_stiffness(subs: &SubMatrices) -> LocalMatrix {
    subs.k_dd
}

/// Mixing factor of the hybrid scheme. Above the floor the condensed
/// tangent is used as is; below it the factor is chosen so that the mixed
/// axial diagonal lands exactly on `k_min`.
pub fn hybrid_beta(k_mono_11: f64, k_stagg_11: f64, k_min: f64) -> f64 {
    if k_mono_11 > k_min {
        return 1.0;
    }
    let denominator = k_mono_11 - k_stagg_11;
    if denominator == 0.0 {
        return 1.0;
    }
    (k_min - k_stagg_11) / denominator
}

/// Element tangent with the scheme bookkeeping used in run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementTangent {
    pub k: LocalMatrix,
    /// Mixing factor: 1 for a consistent tangent, 0 for the bulk tangent.
    pub beta: f64,
    /// True when the hybrid floor clipped the axial stiffness.
    pub k_min_active: bool,
}

/// Hybrid tangent `beta * K_mono + (1 - beta) * K_stagg`.
pub fn hybrid_stiffness(
    subs: &SubMatrices,
    h_tol: f64,
) -> Result<ElementTangent, ElementError> {
    let k_min = h_tol * subs.ea_over_l;
    let k_mono = condense_monolithic(subs)?;
    let k_stagg = staggered_stiffness(subs);
    let beta = hybrid_beta(k_mono[(0, 0)], k_stagg[(0, 0)], k_min);
    let k = if beta == 1.0 { k_mono } else { beta * k_mono + (1.0 - beta) * k_stagg };
    Ok(ElementTangent { k, beta, k_min_active: beta < 1.0 })
}

/// Tangent for the requested scheme. With an inactive hinge every scheme
/// returns the bulk stiffness exactly.
pub fn scheme_tangent(
    subs: &SubMatrices,
    scheme: Scheme,
    hinge_active: bool,
) -> Result<ElementTangent, ElementError> {
    if !hinge_active {
        return Ok(ElementTangent {
            k: subs.k_dd,
            beta: 1.0,
            k_min_active: false,
        });
    }
    match scheme {
        Scheme::Monolithic => Ok(ElementTangent {
            k: condense_monolithic(subs)?,
            beta: 1.0,
            k_min_active: false,
        }),
        Scheme::Staggered => Ok(ElementTangent {
            k: staggered_stiffness(subs),
            beta: 0.0,
            k_min_active: false,
        }),
        Scheme::Hybrid { h_tol } => hybrid_stiffness(subs, h_tol),
    }
}

/// Deletes the axial degrees of freedom of a ruptured element: the axial
/// rows and columns (local DOFs 0 and 6) are zeroed, their diagonals are
/// set to the small positive `k_min` to keep the global matrix regular, and
/// the axial internal-force entries are cleared.
pub fn apply_rupture(k: &mut LocalMatrix, f: &mut LocalVector, k_min: f64) {
    for dof in [0, 6] {
        for j in 0..12 {
            k[(dof, j)] = 0.0;
            k[(j, dof)] = 0.0;
        }
        k[(dof, dof)] = k_min;
        f[dof] = 0.0;
    }
}

/// Rotates a local tangent and internal force to global axes:
/// `K' = T^T K T`, `f' = T^T f`.
pub fn to_global(
    k: &LocalMatrix,
    f: &LocalVector,
    geometry: &ElementGeometry,
) -> (LocalMatrix, LocalVector) {
    let t = geometry.transformation();
    (t.transpose() * k * t, t.transpose() * f)
}
