//! Fundamental forms of the surface swept by the moving curve, the normal
//! rotation that zeroes one of the second-fundamental-form directions, and
//! the best-fit associative-plane diagnostic for trajectories.
//!
//! All closed-form coefficients are functions of the frame-normalized
//! fields (|phi1| = k1/sqrt(2)). Entries whose formulas divide by |phi2|
//! are reported as `None` (not applicable) where |phi2| sits below the
//! divisor floor, which is distinct from a structural zero.

use crate::error::{Error, Result};
use crate::frame::HasimotoFields;
use crate::nlss::{DerivEngine, DIVISOR_FLOOR};
use crate::octonion::{cross, ImOctonion};
use nalgebra::SMatrix;
use num_complex::Complex64;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Metric coefficients of the swept surface: ds^2 + 2|phi1|^2 dt^2.
#[derive(Clone, Debug)]
pub struct FirstFundamentalForm {
    pub g_ss: Vec<f64>,
    pub g_tt: Vec<f64>,
    /// flagged where the metric degenerates (|phi1| below the floor)
    pub degenerate: Vec<bool>,
}

pub fn first_fundamental_form(fields: &HasimotoFields) -> FirstFundamentalForm {
    let n = fields.len();
    let mut g_tt = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    for z in &fields.phi[0] {
        let mag = z.norm();
        g_tt.push(2.0 * mag * mag);
        degenerate.push(mag < DIVISOR_FLOOR);
    }
    FirstFundamentalForm {
        g_ss: vec![1.0; n],
        g_tt,
        degenerate,
    }
}

/// Second-fundamental-form coefficients per sample. Indices follow the
/// normal directions 3..7; the symmetric off-diagonal entries are stored
/// once. Structurally zero entries are not stored (see [`SecondFundamentalForm::entry`]).
#[derive(Clone, Debug)]
pub struct SecondFundamentalForm {
    pub h3_11: Vec<f64>,
    pub h3_12: Vec<f64>,
    pub h3_22: Vec<f64>,
    pub h4_22: Vec<f64>,
    pub h5_12: Vec<f64>,
    pub h5_22: Vec<Option<f64>>,
    pub h6_22: Vec<Option<f64>>,
    pub h7_22: Vec<Option<f64>>,
    pub rotated: bool,
    /// rotation angle per sample when rotated
    pub theta: Option<Vec<f64>>,
    pub ds: f64,
    pub s0: f64,
}

impl SecondFundamentalForm {
    pub fn len(&self) -> usize {
        self.h3_11.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h3_11.is_empty()
    }

    /// Entry h^alpha_ij at a sample; structural zeros come back as
    /// `Some(0.0)`, |phi2|-gated entries as `None` where not applicable.
    pub fn entry(&self, alpha: usize, i: usize, j: usize, m: usize) -> Option<f64> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match (alpha, i, j) {
            (3, 1, 1) => Some(self.h3_11[m]),
            (3, 1, 2) => Some(self.h3_12[m]),
            (3, 2, 2) => Some(self.h3_22[m]),
            (4, 2, 2) => Some(self.h4_22[m]),
            (5, 1, 2) => Some(self.h5_12[m]),
            (5, 2, 2) => self.h5_22[m],
            (6, 2, 2) => self.h6_22[m],
            (7, 2, 2) => self.h7_22[m],
            (3..=7, _, _) => Some(0.0),
            _ => None,
        }
    }

    /// Squared Frobenius norm over all entries at a sample (symmetric
    /// off-diagonals counted twice, missing entries as zero).
    pub fn frobenius_sq(&self, m: usize) -> f64 {
        let mut acc = 0.0;
        for alpha in 3..=7 {
            for (i, j, w) in [(1, 1, 1.0), (1, 2, 2.0), (2, 2, 1.0)] {
                if let Some(v) = self.entry(alpha, i, j, m) {
                    acc += w * v * v;
                }
            }
        }
        acc
    }
}

/// Evaluates the closed-form second-fundamental-form coefficients from
/// the fields. Requires |phi1| at or above the divisor floor everywhere.
pub fn second_fundamental_form(fields: &HasimotoFields) -> Result<SecondFundamentalForm> {
    let n = fields.len();
    let phi1 = &fields.phi[0];
    let phi2 = &fields.phi[1];
    let phi3 = &fields.phi[2];
    if let Some((idx, v)) = phi1
        .iter()
        .enumerate()
        .find(|(_, z)| z.norm() < DIVISOR_FLOOR)
        .map(|(i, z)| (i, z.norm()))
    {
        return Err(Error::SingularData {
            what: "phi1",
            index: idx,
            value: v,
        });
    }
    let mut eng = DerivEngine::new(n, fields.ds, fields.periodic);
    let phi1s = eng.d1(phi1, fields.windings[0]);
    let phi1ss = eng.d2(phi1, fields.windings[0]);
    let phi2s = eng.d1(phi2, fields.windings[1]);

    let mut h3_11 = Vec::with_capacity(n);
    let mut h3_12 = Vec::with_capacity(n);
    let mut h3_22 = Vec::with_capacity(n);
    let mut h4_22 = Vec::with_capacity(n);
    let mut h5_12 = Vec::with_capacity(n);
    let mut h5_22 = Vec::with_capacity(n);
    let mut h6_22 = Vec::with_capacity(n);
    let mut h7_22 = Vec::with_capacity(n);
    for m in 0..n {
        let mag1 = phi1[m].norm();
        let mag2 = phi2[m].norm();
        let dlog1 = phi1s[m] / phi1[m];
        h3_11.push(SQRT2 * mag1);
        h3_12.push(SQRT2 * dlog1.im);
        h3_22.push(
            -(phi1[m].conj() * phi1ss[m]).re / (SQRT2 * mag1 * mag1 * mag1)
                + mag2 * mag2 / (SQRT2 * mag1),
        );
        // (|phi2|)_s is smooth wherever phi2 stays away from zero and
        // vanishes identically with phi2
        let mag2_s = if mag2 >= DIVISOR_FLOOR {
            (phi2[m].conj() * phi2s[m]).re / mag2
        } else {
            0.0
        };
        h4_22.push(-(2.0 * dlog1.re * mag2 + mag2_s) / (SQRT2 * mag1));
        h5_12.push(-mag2);
        if mag2 >= DIVISOR_FLOOR {
            // -i [2 (ln conj(phi1)/phi1)_s |phi2|^2 + phi2 conj(phi2)_s
            //     - conj(phi2) phi2_s] / (2 sqrt(2) |phi1| |phi2|)
            let dlog_conj_ratio = Complex64::new(0.0, -2.0 * dlog1.im);
            let num = Complex64::new(0.0, -1.0)
                * (2.0 * dlog_conj_ratio * mag2 * mag2
                    + (phi2[m] * phi2s[m].conj() - phi2[m].conj() * phi2s[m]));
            h5_22.push(Some(num.re / (2.0 * SQRT2 * mag1 * mag2)));
            let z = phi1[m] * phi1[m] * phi1[m] * phi2[m] * phi2[m] * phi3[m];
            let denom = SQRT2 * mag1.powi(4) * mag2;
            h6_22.push(Some(z.re / denom));
            h7_22.push(Some(z.im / denom - 1.5 * mag2));
        } else {
            h5_22.push(None);
            h6_22.push(None);
            h7_22.push(None);
        }
    }
    Ok(SecondFundamentalForm {
        h3_11,
        h3_12,
        h3_22,
        h4_22,
        h5_12,
        h5_22,
        h6_22,
        h7_22,
        rotated: false,
        theta: None,
        ds: fields.ds,
        s0: fields.s0,
    })
}

/// Rotates the (4, 7) normal plane by the angle that zeroes the rotated
/// h4 entries: theta = arccos(h4_22 / sqrt(h4_22^2 + (9/4)|phi2|^2)).
/// The h3, h5, h6 entries are unchanged.
pub fn rotate_frame(
    h: &SecondFundamentalForm,
    fields: &HasimotoFields,
) -> Result<SecondFundamentalForm> {
    let n = h.len();
    let mut theta = Vec::with_capacity(n);
    let mut h4_rot = Vec::with_capacity(n);
    let mut h7_rot = Vec::with_capacity(n);
    for m in 0..n {
        let h4 = h.h4_22[m];
        let mag2 = fields.phi[1][m].norm();
        let d = (h4 * h4 + 2.25 * mag2 * mag2).sqrt();
        if d < DIVISOR_FLOOR {
            return Err(Error::DegenerateRotation { index: m });
        }
        // roundoff can push the ratio marginally outside [-1, 1]
        theta.push((h4 / d).clamp(-1.0, 1.0).acos());
        match h.h7_22[m] {
            Some(h7) => {
                h4_rot.push(d - 3.0 * mag2 * (h7 + 1.5 * mag2) / (2.0 * d));
                h7_rot.push(Some(h4 * (h7 + 1.5 * mag2) / d));
            }
            None => {
                // |phi2| = 0 here: the correction term vanishes with it
                h4_rot.push(d);
                h7_rot.push(None);
            }
        }
    }
    Ok(SecondFundamentalForm {
        h3_11: h.h3_11.clone(),
        h3_12: h.h3_12.clone(),
        h3_22: h.h3_22.clone(),
        h4_22: h4_rot,
        h5_12: h.h5_12.clone(),
        h5_22: h.h5_22.clone(),
        h6_22: h.h6_22.clone(),
        h7_22: h7_rot,
        rotated: true,
        theta: Some(theta),
        ds: h.ds,
        s0: h.s0,
    })
}

/// Best-fit 3-plane of a point cloud with an associativity check of the
/// fitted plane: the plane of the top three principal directions, the max
/// point-to-plane distance, and the distance of u × v from the plane for
/// an orthonormal plane basis (u, v, w).
#[derive(Clone, Debug)]
pub struct PlaneCheckReport {
    /// max distance of any point from the fitted affine 3-plane
    pub residual: f64,
    /// distance of u × v from the fitted plane directions
    pub associativity_residual: f64,
    pub is_associative: bool,
    /// false when fewer than 4 points were supplied
    pub sufficient: bool,
    pub basis: [ImOctonion; 3],
}

pub const ASSOCIATIVE_TOL: f64 = 1e-8;

pub fn associative_plane_check(points: &[ImOctonion]) -> PlaneCheckReport {
    let n = points.len();
    if n < 4 {
        return PlaneCheckReport {
            residual: 0.0,
            associativity_residual: 0.0,
            is_associative: false,
            sufficient: false,
            basis: [
                ImOctonion::basis(0),
                ImOctonion::basis(1),
                ImOctonion::basis(2),
            ],
        };
    }
    let mut centroid = ImOctonion::zero();
    for p in points {
        centroid = centroid + *p;
    }
    centroid = centroid.scale(1.0 / n as f64);
    let mut cov = SMatrix::<f64, 7, 7>::zeros();
    for p in points {
        let d = *p - centroid;
        for a in 0..7 {
            for b in 0..7 {
                cov[(a, b)] += d.0[a] * d.0[b];
            }
        }
    }
    cov /= n as f64;
    let eig = cov.symmetric_eigen();
    // indices of the three largest eigenvalues
    let mut order: Vec<usize> = (0..7).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].partial_cmp(&eig.eigenvalues[*a]).unwrap());
    let mut basis = [ImOctonion::zero(); 3];
    for (k, &idx) in order[..3].iter().enumerate() {
        let col = eig.eigenvectors.column(idx);
        let mut v = [0.0; 7];
        for a in 0..7 {
            v[a] = col[a];
        }
        basis[k] = ImOctonion(v);
    }
    let project = |x: ImOctonion| -> ImOctonion {
        let mut out = x;
        for b in &basis {
            out = out - b.scale(x.dot(b));
        }
        out
    };
    let residual = points
        .iter()
        .map(|p| project(*p - centroid).norm())
        .fold(0.0, f64::max);
    let c = cross(basis[0], basis[1]);
    let associativity_residual = project(c).norm();
    PlaneCheckReport {
        residual,
        associativity_residual,
        is_associative: associativity_residual <= ASSOCIATIVE_TOL && residual <= ASSOCIATIVE_TOL,
        sufficient: true,
        basis,
    }
}

/// Collects all samples of a curve trajectory into one point cloud and
/// runs the plane check.
pub fn trajectory_plane_check(
    trajectory: &crate::flow::Trajectory<crate::curve::CurveState>,
) -> PlaneCheckReport {
    let points: Vec<ImOctonion> = trajectory
        .states
        .iter()
        .flat_map(|s| s.samples.iter().copied())
        .collect();
    associative_plane_check(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{circle, perturbed_circle};
    use crate::flow::{evolve_curve, CurveFlow, FlowConfig, Projection, Scheme};
    use crate::frame::{build_g2_frame, complexify_frame, hasimoto_fields, FrameThresholds};

    fn cn(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Synthetic periodic fields with phi2 bounded away from zero.
    fn synthetic_fields(n: usize, phi3_on: bool) -> HasimotoFields {
        let ds = 2.0 * std::f64::consts::PI / n as f64;
        let mut phi1 = Vec::with_capacity(n);
        let mut phi2 = Vec::with_capacity(n);
        let mut phi3 = Vec::with_capacity(n);
        for m in 0..n {
            let s = m as f64 * ds;
            phi1.push(Complex64::from_polar(0.5 + 0.1 * s.cos(), 0.2 * s.sin()));
            phi2.push(cn(0.3 + 0.05 * s.sin(), 0.02 * (2.0 * s).cos()));
            phi3.push(if phi3_on {
                Complex64::from_polar(0.2 + 0.05 * s.cos(), -0.3 * s.sin())
            } else {
                cn(0.0, 0.0)
            });
        }
        HasimotoFields {
            phi: [phi1, phi2, phi3],
            ds,
            s0: 0.0,
            periodic: true,
            windings: [0.0; 3],
        }
    }

    fn fields_of(c: &crate::curve::CurveState) -> HasimotoFields {
        let f = build_g2_frame(c, ImOctonion::basis(3), &FrameThresholds::default()).unwrap();
        let cf = complexify_frame(&f);
        hasimoto_fields(&f, &cf)
    }

    #[test]
    fn first_form_is_metric_of_the_sweep() {
        let fields = synthetic_fields(64, true);
        let g = first_fundamental_form(&fields);
        for m in 0..64 {
            assert_eq!(g.g_ss[m], 1.0);
            let mag = fields.phi[0][m].norm();
            assert!((g.g_tt[m] - 2.0 * mag * mag).abs() < 1e-15);
            assert!(!g.degenerate[m]);
        }
        // helix-type magnitude: g_tt = k1^2
        let h = crate::curve::helix(1.0, 1.0, 256).unwrap();
        let hf = fields_of(&h);
        let g = first_fundamental_form(&hf);
        for m in 0..hf.len() {
            assert!((g.g_tt[m] - 0.25).abs() < 1e-6);
        }
    }

    #[test]
    fn closed_form_entries() {
        let fields = synthetic_fields(128, true);
        let h = second_fundamental_form(&fields).unwrap();
        for m in 0..h.len() {
            let mag1 = fields.phi[0][m].norm();
            let mag2 = fields.phi[1][m].norm();
            assert!((h.h3_11[m] - SQRT2 * mag1).abs() < 1e-14);
            assert!((h.h5_12[m] + mag2).abs() < 1e-14);
            assert!(h.h5_22[m].is_some());
        }
    }

    #[test]
    fn real_constant_phi1_has_zero_mixed_entry() {
        let n = 64;
        let fields = HasimotoFields {
            phi: [
                vec![cn(0.7, 0.0); n],
                vec![cn(0.2, 0.0); n],
                vec![cn(0.0, 0.0); n],
            ],
            ds: 0.1,
            s0: 0.0,
            periodic: true,
            windings: [0.0; 3],
        };
        let h = second_fundamental_form(&fields).unwrap();
        for m in 0..n {
            assert!(h.h3_12[m].abs() < 1e-13);
        }
    }

    #[test]
    fn quaternionic_data_has_flat_extra_normals() {
        // phi2 = 0 identically: all alpha in {4..7} entries vanish (the
        // |phi2|-gated ones in the limiting sense, reported not-applicable)
        let c = circle(256).unwrap();
        let fields = fields_of(&c);
        let h = second_fundamental_form(&fields).unwrap();
        for m in 0..h.len() {
            assert!(h.h4_22[m].abs() < 1e-8);
            assert!(h.h5_12[m].abs() < 1e-8);
            assert!(h.h5_22[m].is_none());
            assert!(h.h6_22[m].is_none());
            assert!(h.h7_22[m].is_none());
        }
        // and the rotation is degenerate there
        assert!(matches!(
            rotate_frame(&h, &fields),
            Err(Error::DegenerateRotation { .. })
        ));
    }

    #[test]
    fn rotation_zeroes_the_seventh_direction_when_phi3_vanishes() {
        let fields = synthetic_fields(128, false);
        let h = second_fundamental_form(&fields).unwrap();
        let rotated = rotate_frame(&h, &fields).unwrap();
        assert!(rotated.rotated);
        for m in 0..h.len() {
            // h6 = 0 and h7 = -(3/2)|phi2| before rotation
            assert!(h.h6_22[m].unwrap().abs() < 1e-14);
            let mag2 = fields.phi[1][m].norm();
            assert!((h.h7_22[m].unwrap() + 1.5 * mag2).abs() < 1e-12);
            // rotated: both vanish
            assert!(rotated.h6_22[m].unwrap().abs() < 1e-14);
            assert!(rotated.h7_22[m].unwrap().abs() < 1e-10);
            // rotation is orthogonal on the (4, 7) pair
            let before = h.h4_22[m].powi(2) + h.h7_22[m].unwrap().powi(2);
            let after = rotated.h4_22[m].powi(2) + rotated.h7_22[m].unwrap().powi(2);
            assert!((before - after).abs() < 1e-10 * before.max(1.0));
            // structural zeros of the rotated frame
            assert_eq!(rotated.entry(4, 1, 1, m), Some(0.0));
            assert_eq!(rotated.entry(4, 1, 2, m), Some(0.0));
            assert_eq!(rotated.entry(7, 1, 2, m), Some(0.0));
        }
        let theta = rotated.theta.as_ref().unwrap();
        assert!(theta.iter().all(|t| t.is_finite()));
    }

    #[test]
    fn frobenius_norm_invariant_under_rotation() {
        let fields = synthetic_fields(128, true);
        let h = second_fundamental_form(&fields).unwrap();
        let rotated = rotate_frame(&h, &fields).unwrap();
        for m in 0..h.len() {
            let a = h.frobenius_sq(m);
            let b = rotated.frobenius_sq(m);
            assert!((a - b).abs() < 1e-10 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn quaternionic_trajectory_is_associative_plane() {
        let c = circle(128).unwrap();
        let config = FlowConfig {
            dt: 0.1 * c.ds * c.ds,
            t_end: 0.05,
            scheme: Scheme::Rk4,
            projection: Projection::None,
            cfl_limit: 0.2,
            n_outputs: 4,
        };
        let traj = evolve_curve(&c, &CurveFlow::Binormal, &config).unwrap();
        let report = trajectory_plane_check(&traj);
        assert!(report.sufficient);
        assert!(report.residual < 1e-8, "residual {}", report.residual);
        assert!(
            report.associativity_residual < 1e-8,
            "assoc {}",
            report.associativity_residual
        );
        assert!(report.is_associative);
    }

    #[test]
    fn generic_trajectory_fails_plane_test() {
        let c = perturbed_circle(96, 0.05, &[2], 11).unwrap();
        let config = FlowConfig {
            dt: 0.1 * c.ds * c.ds,
            t_end: 0.01,
            scheme: Scheme::Rk4,
            projection: Projection::None,
            cfl_limit: 0.2,
            n_outputs: 1,
        };
        let traj = evolve_curve(&c, &CurveFlow::Binormal, &config).unwrap();
        let report = trajectory_plane_check(&traj);
        assert!(report.sufficient);
        assert!(report.residual > 1e-3);
        assert!(!report.is_associative);
    }

    #[test]
    fn single_point_is_insufficient() {
        let report = associative_plane_check(&[ImOctonion::basis(0)]);
        assert!(!report.sufficient);
        assert_eq!(report.residual, 0.0);
    }
}
