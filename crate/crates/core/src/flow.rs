//! Time integration of the binormal curve flow `γ_t = γ_s × γ_ss`, the
//! sphere map flow `u_t = u × u_ss`, and the modified flow
//! `γ_t = A^{-1}(Aγ_s × Aγ_ss)` for an orthogonal matrix A, with
//! conservation diagnostics.

use crate::curve::CurveState;
use crate::error::{Error, Result};
use crate::grid::{d1_field, d2_clamped, d2_periodic, wrap_get};
use crate::octonion::{
    cross, mat7_apply, mat7_apply_transpose, mat7_orthogonality_dev, ImOctonion, Mat7,
};

/// Integration scheme for the fixed-step explicit stepper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    Midpoint,
}

/// Per-stage projection applied to sphere map states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    None,
    Renormalize,
}

/// Which right-hand side drives a curve evolution.
#[derive(Clone, Debug)]
pub enum CurveFlow {
    Binormal,
    Modified(Mat7),
}

/// Fixed-step integration config. `dt` must satisfy the parabolic-style
/// step bound `dt <= cfl_limit * ds^2`.
#[derive(Clone, Debug)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub projection: Projection,
    pub cfl_limit: f64,
    /// number of output snapshots after the initial state
    pub n_outputs: usize,
}

impl FlowConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        FlowConfig {
            dt,
            t_end,
            scheme: Scheme::Rk4,
            projection: Projection::Renormalize,
            cfl_limit: 0.2,
            n_outputs: 1,
        }
    }

    pub fn validate(&self, ds: f64) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0) {
            return Err(Error::InvalidInput("dt and t_end must be positive".into()));
        }
        let bound = self.cfl_limit * ds * ds;
        if self.dt > bound {
            return Err(Error::InvalidInput(format!(
                "dt = {:.3e} exceeds the step bound {:.3e} (cfl {} * ds^2)",
                self.dt, bound, self.cfl_limit
            )));
        }
        if self.n_outputs == 0 {
            return Err(Error::InvalidInput("need at least one output time".into()));
        }
        Ok(())
    }
}

const BLOWUP_NORM: f64 = 1e6;
const SPHERE_TOL: f64 = 1e-9;

/// Unit-sphere-valued map sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct SphereMapState {
    pub samples: Vec<ImOctonion>,
    pub ds: f64,
    pub s0: f64,
    pub periodic: bool,
    pub time: f64,
}

impl SphereMapState {
    pub fn new(
        samples: Vec<ImOctonion>,
        ds: f64,
        s0: f64,
        periodic: bool,
        time: f64,
    ) -> Result<Self> {
        let state = SphereMapState {
            samples,
            ds,
            s0,
            periodic,
            time,
        };
        state.validate_on_sphere()?;
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn norm_max_dev(&self) -> f64 {
        self.samples
            .iter()
            .map(|u| (u.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn validate_on_sphere(&self) -> Result<()> {
        let dev = self.norm_max_dev();
        if dev > SPHERE_TOL {
            return Err(Error::NotOnSphere {
                time: self.time,
                dev,
            });
        }
        Ok(())
    }

    fn d2(&self) -> Vec<ImOctonion> {
        if self.periodic {
            d2_periodic(wrap_get(&self.samples), self.len(), self.ds)
        } else {
            d2_clamped(&self.samples, self.ds)
        }
    }

    /// Discrete energy (1/2) Σ |u_s|^2 ds.
    pub fn energy(&self) -> f64 {
        let us = d1_field(&self.samples, self.ds, self.periodic);
        0.5 * us.iter().map(|v| v.norm_sq()).sum::<f64>() * self.ds
    }
}

/// Velocity of the binormal flow: γ_s × γ_ss per sample. Equals
/// `-k1 I5` of the frame within discretization error.
pub fn rhs_binormal(curve: &CurveState) -> Vec<ImOctonion> {
    let gs = curve.d1();
    let gss = curve.d2();
    gs.iter()
        .zip(gss.iter())
        .map(|(a, b)| cross(*a, *b))
        .collect()
}

/// Velocity of the modified flow `A^{-1}((Aγ_s) × (Aγ_ss))`; `a` must be
/// orthogonal (its transpose is used as the inverse).
pub fn rhs_modified(curve: &CurveState, a: &Mat7) -> Result<Vec<ImOctonion>> {
    let dev = mat7_orthogonality_dev(a);
    if dev > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "modified-flow matrix is not orthogonal (dev {dev:.3e})"
        )));
    }
    let gs = curve.d1();
    let gss = curve.d2();
    Ok(gs
        .iter()
        .zip(gss.iter())
        .map(|(x, y)| mat7_apply_transpose(a, cross(mat7_apply(a, *x), mat7_apply(a, *y))))
        .collect())
}

/// Velocity of the sphere map flow: u × u_ss per sample. Tangency
/// `<velocity, u> = 0` holds by the cross-product orthogonality.
pub fn rhs_schrodinger_s6(u: &SphereMapState) -> Vec<ImOctonion> {
    let uss = u.d2();
    u.samples
        .iter()
        .zip(uss.iter())
        .map(|(a, b)| cross(*a, *b))
        .collect()
}

/// Evolution output: the states at the requested output times (the initial
/// state first).
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    pub states: Vec<S>,
    pub times: Vec<f64>,
}

fn check_blowup(samples: &[ImOctonion], time: f64) -> Result<()> {
    let mut max: f64 = 0.0;
    for v in samples {
        if !v.is_finite() {
            return Err(Error::BlowUp {
                time,
                norm: f64::INFINITY,
            });
        }
        max = max.max(v.norm());
    }
    if max > BLOWUP_NORM {
        return Err(Error::BlowUp { time, norm: max });
    }
    Ok(())
}

fn axpy(base: &[ImOctonion], c: f64, rate: &[ImOctonion]) -> Vec<ImOctonion> {
    base.iter()
        .zip(rate.iter())
        .map(|(b, r)| *b + r.scale(c))
        .collect()
}

/// One explicit step of `samples` under `rhs`, with the per-stage
/// projection `project` applied to every stage state and the result.
fn step<F, P>(
    samples: &[ImOctonion],
    dt: f64,
    scheme: Scheme,
    rhs: &F,
    project: &P,
) -> Result<Vec<ImOctonion>>
where
    F: Fn(&[ImOctonion]) -> Result<Vec<ImOctonion>>,
    P: Fn(Vec<ImOctonion>) -> Vec<ImOctonion>,
{
    match scheme {
        Scheme::Rk4 => {
            let k1 = rhs(samples)?;
            let s2 = project(axpy(samples, 0.5 * dt, &k1));
            let k2 = rhs(&s2)?;
            let s3 = project(axpy(samples, 0.5 * dt, &k2));
            let k3 = rhs(&s3)?;
            let s4 = project(axpy(samples, dt, &k3));
            let k4 = rhs(&s4)?;
            let mut out = Vec::with_capacity(samples.len());
            for m in 0..samples.len() {
                let incr = k1[m] + k2[m].scale(2.0) + k3[m].scale(2.0) + k4[m];
                out.push(samples[m] + incr.scale(dt / 6.0));
            }
            Ok(project(out))
        }
        Scheme::Midpoint => {
            let k1 = rhs(samples)?;
            let s2 = project(axpy(samples, 0.5 * dt, &k1));
            let k2 = rhs(&s2)?;
            Ok(project(axpy(samples, dt, &k2)))
        }
    }
}

/// Steps per output segment: the configured dt, shrunk slightly if needed
/// so the segment divides evenly. Deterministic in the config.
fn segment_steps(segment: f64, dt: f64) -> (usize, f64) {
    let steps = (segment / dt).ceil().max(1.0) as usize;
    (steps, segment / steps as f64)
}

/// Evolves a curve under the chosen flow. Output states are emitted at
/// `n_outputs` evenly spaced times ending at `t_end`.
pub fn evolve_curve(
    curve: &CurveState,
    flow: &CurveFlow,
    config: &FlowConfig,
) -> Result<Trajectory<CurveState>> {
    config.validate(curve.ds)?;
    if let CurveFlow::Modified(a) = flow {
        let dev = mat7_orthogonality_dev(a);
        if dev > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "modified-flow matrix is not orthogonal (dev {dev:.3e})"
            )));
        }
    }
    let ds = curve.ds;
    let boundary = curve.boundary;
    let rhs = |samples: &[ImOctonion]| -> Result<Vec<ImOctonion>> {
        let state = CurveState {
            samples: samples.to_vec(),
            ds,
            s0: curve.s0,
            boundary,
            time: 0.0,
        };
        Ok(match flow {
            CurveFlow::Binormal => rhs_binormal(&state),
            CurveFlow::Modified(a) => rhs_modified(&state, a)?,
        })
    };
    let project = |v: Vec<ImOctonion>| v;

    let mut states = vec![curve.clone()];
    let mut times = vec![curve.time];
    let mut current = curve.samples.clone();
    let mut t = curve.time;
    let segment = config.t_end / config.n_outputs as f64;
    for _ in 0..config.n_outputs {
        let (steps, dt_eff) = segment_steps(segment, config.dt);
        for _ in 0..steps {
            current = step(&current, dt_eff, config.scheme, &rhs, &project)?;
            t += dt_eff;
            check_blowup(&current, t)?;
        }
        states.push(CurveState {
            samples: current.clone(),
            ds,
            s0: curve.s0,
            boundary,
            time: t,
        });
        times.push(t);
    }
    Ok(Trajectory { states, times })
}

/// Evolves a sphere map under `u_t = u × u_ss`. With
/// `Projection::Renormalize` every stage state is pulled back to the
/// sphere; either way the unit constraint is checked after each step.
pub fn evolve_sphere(
    state: &SphereMapState,
    config: &FlowConfig,
) -> Result<Trajectory<SphereMapState>> {
    config.validate(state.ds)?;
    state.validate_on_sphere()?;
    let ds = state.ds;
    let periodic = state.periodic;
    let rhs = |samples: &[ImOctonion]| -> Result<Vec<ImOctonion>> {
        let s = SphereMapState {
            samples: samples.to_vec(),
            ds,
            s0: state.s0,
            periodic,
            time: 0.0,
        };
        Ok(rhs_schrodinger_s6(&s))
    };
    let renorm = config.projection == Projection::Renormalize;
    let project = move |mut v: Vec<ImOctonion>| {
        if renorm {
            for x in v.iter_mut() {
                *x = x.normalize();
            }
        }
        v
    };

    let mut states = vec![state.clone()];
    let mut times = vec![state.time];
    let mut current = state.samples.clone();
    let mut t = state.time;
    let segment = config.t_end / config.n_outputs as f64;
    for _ in 0..config.n_outputs {
        let (steps, dt_eff) = segment_steps(segment, config.dt);
        for _ in 0..steps {
            current = step(&current, dt_eff, config.scheme, &rhs, &project)?;
            t += dt_eff;
            check_blowup(&current, t)?;
            let snapshot = SphereMapState {
                samples: current.clone(),
                ds,
                s0: state.s0,
                periodic,
                time: t,
            };
            snapshot.validate_on_sphere()?;
        }
        states.push(SphereMapState {
            samples: current.clone(),
            ds,
            s0: state.s0,
            periodic,
            time: t,
        });
        times.push(t);
    }
    Ok(Trajectory { states, times })
}

/// Conservation diagnostics of a trajectory: relative drift of the total
/// arclength, max pointwise speed deviation, sphere-constraint deviation
/// and relative energy drift where applicable.
#[derive(Clone, Debug, Default)]
pub struct ConservationReport {
    pub times: Vec<f64>,
    pub arclength_rel_drift: Vec<f64>,
    pub speed_max_dev: Vec<f64>,
    pub norm_max_dev: Vec<f64>,
    pub energy_rel_drift: Vec<f64>,
}

impl ConservationReport {
    pub fn max_arclength_drift(&self) -> f64 {
        self.arclength_rel_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_speed_dev(&self) -> f64 {
        self.speed_max_dev.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_norm_dev(&self) -> f64 {
        self.norm_max_dev.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.energy_rel_drift.iter().copied().fold(0.0, f64::max)
    }
}

pub fn conservation_curve(trajectory: &Trajectory<CurveState>) -> Result<ConservationReport> {
    let first = trajectory
        .states
        .first()
        .ok_or_else(|| Error::InsufficientData("empty trajectory".into()))?;
    let l0 = first.arclength();
    let mut report = ConservationReport {
        times: trajectory.times.clone(),
        ..Default::default()
    };
    for state in &trajectory.states {
        report
            .arclength_rel_drift
            .push((state.arclength() - l0).abs() / l0);
        let speeds = state.chord_speeds();
        report
            .speed_max_dev
            .push(speeds.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max));
    }
    Ok(report)
}

pub fn conservation_sphere(
    trajectory: &Trajectory<SphereMapState>,
) -> Result<ConservationReport> {
    let first = trajectory
        .states
        .first()
        .ok_or_else(|| Error::InsufficientData("empty trajectory".into()))?;
    let e0 = first.energy();
    let mut report = ConservationReport {
        times: trajectory.times.clone(),
        ..Default::default()
    };
    for state in &trajectory.states {
        report.norm_max_dev.push(state.norm_max_dev());
        report
            .energy_rel_drift
            .push((state.energy() - e0).abs() / e0.max(1e-300));
    }
    Ok(report)
}

/// Sphere map presets.
pub mod u_presets {
    use super::*;

    /// Constant map u ≡ i.
    pub fn constant(n: usize) -> Result<SphereMapState> {
        let ds = 2.0 * std::f64::consts::PI / n as f64;
        SphereMapState::new(vec![ImOctonion::basis(0); n], ds, 0.0, true, 0.0)
    }

    /// Great circle u(s) = cos(m s) i + sin(m s) j over one period of the
    /// grid; a fixed point of the flow since u_ss is parallel to u.
    pub fn great_circle(n: usize, m: usize) -> Result<SphereMapState> {
        let ds = 2.0 * std::f64::consts::PI / n as f64;
        let samples = (0..n)
            .map(|idx| {
                let t = m as f64 * idx as f64 * ds;
                ImOctonion::basis(0).scale(t.cos()) + ImOctonion::basis(1).scale(t.sin())
            })
            .collect();
        SphereMapState::new(samples, ds, 0.0, true, 0.0)
    }

    /// Normalized perturbed circle exciting several coordinates; a
    /// genuinely moving initial state.
    pub fn perturbed(n: usize, amplitude: f64, seed: u64) -> Result<SphereMapState> {
        let curve = crate::curve::perturbed_circle(n, amplitude, &[2, 3], seed)?;
        let samples = curve.samples.iter().map(|x| x.normalize()).collect();
        SphereMapState::new(samples, curve.ds, 0.0, true, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{circle, helix, line, tilted_circle};
    use crate::octonion::{mat7_identity, BLOCK_ROTATION_A};

    #[test]
    fn straight_line_velocity_vanishes() {
        let l = line(5.0, 64).unwrap();
        let v = rhs_binormal(&l);
        for x in v {
            assert!(x.norm() < 1e-12);
        }
    }

    #[test]
    fn circle_velocity_is_unit_k() {
        let c = circle(256).unwrap();
        let v = rhs_binormal(&c);
        let k = ImOctonion::basis(2);
        for x in &v {
            assert!((*x - k).norm() < 1e-6, "velocity {x:?}");
        }
    }

    #[test]
    fn helix_velocity_magnitude_is_k1() {
        let h = helix(1.0, 1.0, 256).unwrap();
        let v = rhs_binormal(&h);
        for x in &v {
            assert!((x.norm() - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn modified_flow_reduces_to_binormal_for_identity() {
        let c = tilted_circle(128).unwrap();
        let v0 = rhs_binormal(&c);
        let v1 = rhs_modified(&c, &mat7_identity()).unwrap();
        for (a, b) in v0.iter().zip(v1.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn modified_flow_matches_binormal_for_automorphism() {
        let base = crate::curve::perturbed_circle(128, 0.05, &[2, 3], 3).unwrap();
        let f = crate::frame::build_g2_frame(
            &base,
            ImOctonion::basis(3),
            &crate::frame::FrameThresholds::default(),
        )
        .unwrap();
        let g = f.automorphism_at(25);
        assert!(crate::octonion::is_g2_automorphism(&g, 1e-9).unwrap());
        let c = tilted_circle(128).unwrap();
        let v0 = rhs_binormal(&c);
        let v1 = rhs_modified(&c, &g).unwrap();
        for (a, b) in v0.iter().zip(v1.iter()) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn modified_flow_differs_for_block_rotation() {
        // on a circle whose plane mixes the rotated (l, il) coordinates the
        // two velocity fields genuinely differ
        let c = tilted_circle(128).unwrap();
        let v0 = rhs_binormal(&c);
        let v1 = rhs_modified(&c, &BLOCK_ROTATION_A).unwrap();
        let max_diff = v0
            .iter()
            .zip(v1.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max);
        assert!(max_diff > 0.5, "velocities too close: {max_diff}");
        // while the plain circle in the (i, j) plane is insensitive to it
        let c2 = circle(128).unwrap();
        let w0 = rhs_binormal(&c2);
        let w1 = rhs_modified(&c2, &BLOCK_ROTATION_A).unwrap();
        for (a, b) in w0.iter().zip(w1.iter()) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn non_orthogonal_matrix_rejected() {
        let mut m = mat7_identity();
        m[0][0] = 2.0;
        let c = circle(64).unwrap();
        assert!(rhs_modified(&c, &m).is_err());
    }

    #[test]
    fn sphere_rhs_is_tangent() {
        let u = u_presets::perturbed(128, 0.1, 5).unwrap();
        let v = rhs_schrodinger_s6(&u);
        for (x, uu) in v.iter().zip(u.samples.iter()) {
            assert!(x.dot(uu).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_and_great_circle_are_fixed_points() {
        let c = u_presets::constant(64).unwrap();
        for v in rhs_schrodinger_s6(&c) {
            assert!(v.norm() < 1e-14);
        }
        let g = u_presets::great_circle(128, 1).unwrap();
        for v in rhs_schrodinger_s6(&g) {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn circle_translates_rigidly() {
        let c = circle(256).unwrap();
        let config = FlowConfig {
            dt: 1e-4,
            t_end: 1.0,
            scheme: Scheme::Rk4,
            projection: Projection::None,
            cfl_limit: 0.2,
            n_outputs: 4,
        };
        let traj = evolve_curve(&c, &CurveFlow::Binormal, &config).unwrap();
        let k = ImOctonion::basis(2);
        let last = traj.states.last().unwrap();
        assert!((last.time - 1.0).abs() < 1e-12);
        for (x0, x1) in c.samples.iter().zip(last.samples.iter()) {
            assert!((*x1 - (*x0 + k)).norm() < 1e-4);
        }
        let report = conservation_curve(&traj).unwrap();
        assert!(report.max_arclength_drift() < 1e-6);
    }

    #[test]
    fn great_circle_flow_is_stationary() {
        let g = u_presets::great_circle(128, 1).unwrap();
        let config = FlowConfig {
            dt: 2e-4,
            t_end: 0.2,
            scheme: Scheme::Rk4,
            projection: Projection::Renormalize,
            cfl_limit: 0.2,
            n_outputs: 1,
        };
        let traj = evolve_sphere(&g, &config).unwrap();
        let last = traj.states.last().unwrap();
        for (a, b) in g.samples.iter().zip(last.samples.iter()) {
            assert!((*a - *b).norm() < 1e-8);
        }
    }

    #[test]
    fn sphere_energy_drift_is_small() {
        let u = u_presets::perturbed(128, 0.1, 5).unwrap();
        let ds = u.ds;
        let config = FlowConfig {
            dt: 0.15 * ds * ds,
            t_end: 0.05,
            scheme: Scheme::Rk4,
            projection: Projection::Renormalize,
            cfl_limit: 0.2,
            n_outputs: 2,
        };
        let traj = evolve_sphere(&u, &config).unwrap();
        let report = conservation_sphere(&traj).unwrap();
        assert!(report.max_norm_dev() < 1e-9);
        assert!(
            report.max_energy_drift() < 1e-5,
            "energy drift {}",
            report.max_energy_drift()
        );
        // the state genuinely moved
        let last = traj.states.last().unwrap();
        let moved = u
            .samples
            .iter()
            .zip(last.samples.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max);
        assert!(moved > 1e-4);
    }

    #[test]
    fn rk4_converges_at_fourth_order_in_time() {
        // compare against a fine-step reference on a short horizon
        let c = crate::curve::perturbed_circle(64, 0.05, &[2, 3], 9).unwrap();
        let t_end = 2e-3;
        let run = |dt: f64| {
            let config = FlowConfig {
                dt,
                t_end,
                scheme: Scheme::Rk4,
                projection: Projection::None,
                cfl_limit: 0.2,
                n_outputs: 1,
            };
            evolve_curve(&c, &CurveFlow::Binormal, &config)
                .unwrap()
                .states
                .last()
                .unwrap()
                .samples
                .clone()
        };
        let reference = run(t_end / 512.0);
        let err = |dt: f64| {
            run(dt)
                .iter()
                .zip(reference.iter())
                .map(|(a, b)| (*a - *b).norm())
                .fold(0.0, f64::max)
        };
        let e1 = err(t_end / 8.0);
        let e2 = err(t_end / 16.0);
        let ratio = e1 / e2;
        assert!(ratio > 12.0, "rk4 time-order ratio {ratio}");
    }

    #[test]
    fn flow_commutes_with_automorphisms() {
        let base = crate::curve::perturbed_circle(96, 0.05, &[2, 3], 3).unwrap();
        let f = crate::frame::build_g2_frame(
            &base,
            ImOctonion::basis(3),
            &crate::frame::FrameThresholds::default(),
        )
        .unwrap();
        let g = f.automorphism_at(10);
        let c = crate::curve::perturbed_circle(96, 0.04, &[2, 3], 21).unwrap();
        let config = FlowConfig {
            dt: 0.1 * c.ds * c.ds,
            t_end: 0.01,
            scheme: Scheme::Rk4,
            projection: Projection::None,
            cfl_limit: 0.2,
            n_outputs: 1,
        };
        let evolved = evolve_curve(&c, &CurveFlow::Binormal, &config).unwrap();
        let rotated = CurveState::new(
            c.samples.iter().map(|x| mat7_apply(&g, *x)).collect(),
            c.ds,
            c.s0,
            c.boundary,
            c.time,
        )
        .unwrap();
        let evolved_rot = evolve_curve(&rotated, &CurveFlow::Binormal, &config).unwrap();
        let last = evolved.states.last().unwrap();
        let last_rot = evolved_rot.states.last().unwrap();
        for (a, b) in last.samples.iter().zip(last_rot.samples.iter()) {
            assert!((mat7_apply(&g, *a) - *b).norm() < 1e-11);
        }
    }

    #[test]
    fn cfl_violation_rejected() {
        let c = circle(256).unwrap();
        let config = FlowConfig::new(1.0, 1.0);
        assert!(matches!(
            evolve_curve(&c, &CurveFlow::Binormal, &config),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn tangent_evolution_matches_sphere_flow() {
        // u := γ_s satisfies u_t = u × u_ss within discretization error:
        // differentiate the binormal velocity in s and compare
        let errs: Vec<f64> = [128usize, 256]
            .iter()
            .map(|&n| {
                let c = crate::curve::perturbed_circle(n, 0.05, &[2, 3], 13).unwrap();
                let v = rhs_binormal(&c);
                let dv = d1_field(&v, c.ds, true);
                let u = SphereMapState {
                    samples: c.d1().iter().map(|x| x.normalize()).collect(),
                    ds: c.ds,
                    s0: c.s0,
                    periodic: true,
                    time: 0.0,
                };
                let w = rhs_schrodinger_s6(&u);
                dv.iter()
                    .zip(w.iter())
                    .map(|(a, b)| (*a - *b).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.8, "equivalence order {order}");
    }
}
