//! Sampled curves in Im(O) on uniform arclength grids, analytic presets,
//! and reparameterization utilities.

use crate::error::{Error, Result};
use crate::grid::{d1_clamped, d1_periodic, d2_clamped, d2_periodic};
use crate::octonion::ImOctonion;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Boundary treatment of a sampled curve.
///
/// `Periodic` covers closed curves (`drift = 0`) and helical curves that
/// repeat up to a constant translation: `γ(s + L) = γ(s) + drift`. Stencils
/// that wrap past the seam add the drift, so a helix can be differentiated
/// at full interior accuracy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    Periodic { drift: ImOctonion },
    Clamped,
}

impl Boundary {
    pub fn periodic() -> Self {
        Boundary::Periodic {
            drift: ImOctonion::zero(),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Boundary::Periodic { .. })
    }
}

/// Curve sampled at uniform arclength spacing `ds`, starting at `s0`.
/// For periodic curves the grid covers one period without repeating the
/// seam sample; for clamped curves both endpoints are stored.
#[derive(Clone, Debug)]
pub struct CurveState {
    pub samples: Vec<ImOctonion>,
    pub ds: f64,
    pub s0: f64,
    pub boundary: Boundary,
    pub time: f64,
}

pub const MIN_SAMPLES: usize = 8;

impl CurveState {
    pub fn new(
        samples: Vec<ImOctonion>,
        ds: f64,
        s0: f64,
        boundary: Boundary,
        time: f64,
    ) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "curve needs at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if !(ds > 0.0 && ds.is_finite()) {
            return Err(Error::InvalidInput(format!("ds must be positive, got {ds}")));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("curve has non-finite samples".into()));
        }
        Ok(CurveState {
            samples,
            ds,
            s0,
            boundary,
            time,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn s_values(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.s0 + n as f64 * self.ds).collect()
    }

    /// Getter resolving any integer index, applying the periodic drift on
    /// wrap. Must not be called out of range on clamped curves.
    pub fn getter(&self) -> impl Fn(isize) -> ImOctonion + '_ {
        let n = self.samples.len() as isize;
        move |m| match self.boundary {
            Boundary::Periodic { drift } => {
                let q = m.div_euclid(n);
                let r = m.rem_euclid(n) as usize;
                if q == 0 {
                    self.samples[r]
                } else {
                    self.samples[r] + drift.scale(q as f64)
                }
            }
            Boundary::Clamped => self.samples[m as usize],
        }
    }

    pub fn d1(&self) -> Vec<ImOctonion> {
        match self.boundary {
            Boundary::Periodic { .. } => d1_periodic(self.getter(), self.len(), self.ds),
            Boundary::Clamped => d1_clamped(&self.samples, self.ds),
        }
    }

    pub fn d2(&self) -> Vec<ImOctonion> {
        match self.boundary {
            Boundary::Periodic { .. } => d2_periodic(self.getter(), self.len(), self.ds),
            Boundary::Clamped => d2_clamped(&self.samples, self.ds),
        }
    }

    /// Chord speeds `|γ_{n+1} - γ_n| / ds` (periodic curves include the
    /// wrap chord, closed through the drift).
    pub fn chord_speeds(&self) -> Vec<f64> {
        let n = self.len();
        let get = self.getter();
        let chords = match self.boundary {
            Boundary::Periodic { .. } => n,
            Boundary::Clamped => n - 1,
        };
        (0..chords)
            .map(|m| (get(m as isize + 1) - get(m as isize)).norm() / self.ds)
            .collect()
    }

    /// Total polygonal arclength.
    pub fn arclength(&self) -> f64 {
        self.chord_speeds().iter().sum::<f64>() * self.ds
    }

    /// Checks unit-speed sampling: `| |γ_{n+1} - γ_n|/ds - 1 | <= tol`.
    pub fn validate_unit_speed(&self, tol: f64) -> Result<()> {
        for (m, v) in self.chord_speeds().iter().enumerate() {
            let dev = (v - 1.0).abs();
            if dev > tol {
                return Err(Error::NonUnitSpeed {
                    index: m,
                    dev,
                    tol,
                });
            }
        }
        Ok(())
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Samples an analytic curve `f(θ)` (with derivative `df`) at `n` uniform
/// arclength points. The arclength function is tabulated with per-interval
/// 5-point Gauss-Legendre quadrature on a fine grid and inverted by
/// bisection plus Newton steps, so the returned samples are unit-speed to
/// near machine precision.
pub fn sample_unit_speed(
    f: &dyn Fn(f64) -> ImOctonion,
    df: &dyn Fn(f64) -> ImOctonion,
    theta_end: f64,
    n: usize,
    boundary_for: &dyn Fn(f64) -> Boundary,
    s0: f64,
) -> Result<CurveState> {
    // Gauss-Legendre 5 nodes/weights on [-1, 1]
    const GL_X: [f64; 5] = [
        -0.906179845938664,
        -0.538469310105683,
        0.0,
        0.538469310105683,
        0.906179845938664,
    ];
    const GL_W: [f64; 5] = [
        0.236926885056189,
        0.478628670499366,
        0.568888888888889,
        0.478628670499366,
        0.236926885056189,
    ];
    let speed = |t: f64| df(t).norm();
    let seg_integral = |a: f64, b: f64| -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        GL_X
            .iter()
            .zip(GL_W.iter())
            .map(|(x, w)| w * speed(c + h * x))
            .sum::<f64>()
            * h
    };
    let fine = (64 * n).max(1024);
    let dtheta = theta_end / fine as f64;
    let mut s_table = Vec::with_capacity(fine + 1);
    s_table.push(0.0);
    // compensated summation keeps the table accurate to ~eps * total
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for m in 0..fine {
        let a = m as f64 * dtheta;
        let y = seg_integral(a, a + dtheta) - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        s_table.push(acc);
    }
    let total = s_table[fine];
    if !(total > 0.0) {
        return Err(Error::InvalidInput("degenerate analytic curve".into()));
    }
    let periodic = boundary_for(total).is_periodic();
    let samples_ds = if periodic {
        total / n as f64
    } else {
        total / (n - 1) as f64
    };
    let s_of = |theta: f64| -> f64 {
        let j = ((theta / dtheta) as usize).min(fine - 1);
        s_table[j] + seg_integral(j as f64 * dtheta, theta)
    };
    let mut samples = Vec::with_capacity(n);
    for m in 0..n {
        let target = m as f64 * samples_ds;
        // bracket from the table, then Newton
        let j = s_table.partition_point(|v| *v < target).min(fine);
        let mut theta = if j == 0 { 0.0 } else { (j as f64 - 0.5) * dtheta };
        for _ in 0..40 {
            let err = s_of(theta) - target;
            let v = speed(theta).max(1e-12);
            let step = err / v;
            theta -= step;
            theta = theta.clamp(0.0, theta_end);
            if step.abs() < 1e-14 * theta_end.max(1.0) {
                break;
            }
        }
        samples.push(f(theta));
    }
    CurveState::new(samples, samples_ds, s0, boundary_for(total), 0.0)
}

fn e(idx: usize) -> ImOctonion {
    ImOctonion::basis(idx)
}

/// Circle of unit radius in the plane of two orthonormal directions,
/// sampled directly (constant speed, so no arclength inversion).
fn planar_circle(u: ImOctonion, v: ImOctonion, n: usize) -> Result<CurveState> {
    let ds = 2.0 * std::f64::consts::PI / n as f64;
    let samples = (0..n)
        .map(|m| {
            let t = m as f64 * ds;
            u.scale(t.cos()) + v.scale(t.sin())
        })
        .collect();
    CurveState::new(samples, ds, 0.0, Boundary::periodic(), 0.0)
}

/// Unit circle in the (i, j) coordinate plane.
pub fn circle(n: usize) -> Result<CurveState> {
    planar_circle(e(0), e(1), n)
}

/// Unit circle in the plane spanned by (i + l)/sqrt(2) and j. Its tangent
/// mixes the (l, il) coordinate plane, so the modified flow genuinely
/// differs from the plain binormal flow on it.
pub fn tilted_circle(n: usize) -> Result<CurveState> {
    planar_circle((e(0) + e(3)).scale(1.0 / 2.0_f64.sqrt()), e(1), n)
}

/// Helix of radius `a` and pitch parameter `b` in the (i, j, k) coordinate
/// space, sampled directly over one turn (the speed sqrt(a^2 + b^2) is
/// constant). Periodic with drift `2π b` along k.
pub fn helix(a: f64, b: f64, n: usize) -> Result<CurveState> {
    let speed = (a * a + b * b).sqrt();
    let ds = 2.0 * std::f64::consts::PI * speed / n as f64;
    let samples = (0..n)
        .map(|m| {
            let t = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            e(0).scale(a * t.cos()) + e(1).scale(a * t.sin()) + e(2).scale(b * t)
        })
        .collect();
    CurveState::new(
        samples,
        ds,
        0.0,
        Boundary::Periodic {
            drift: e(2).scale(2.0 * std::f64::consts::PI * b),
        },
        0.0,
    )
}

/// Straight segment along i, clamped.
pub fn line(length: f64, n: usize) -> Result<CurveState> {
    let ds = length / (n - 1) as f64;
    let samples = (0..n).map(|m| e(0).scale(m as f64 * ds)).collect();
    CurveState::new(samples, ds, 0.0, Boundary::Clamped, 0.0)
}

/// Trigonometric perturbation of the unit circle exciting all seven
/// coordinates, reparameterized to unit speed. Deterministic in the seed.
///
/// The same seed and parameters always produce the same curve; amplitudes
/// are scaled per mode so the perturbation stays small but the second
/// curvature stays well above the divisor floor.
pub fn perturbed_circle(n: usize, amplitude: f64, modes: &[usize], seed: u64) -> Result<CurveState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // coefficient layout: [coord][mode] -> (cos amp, sin amp)
    let mut coeffs = vec![vec![(0.0f64, 0.0f64); modes.len()]; 7];
    for row in coeffs.iter_mut() {
        for c in row.iter_mut() {
            *c = (
                amplitude * (rng.gen::<f64>() * 2.0 - 1.0),
                amplitude * (rng.gen::<f64>() * 2.0 - 1.0),
            );
        }
    }
    let modes: Vec<f64> = modes.iter().map(|m| *m as f64).collect();
    let coeffs2 = coeffs.clone();
    let modes2 = modes.clone();
    let f = move |t: f64| {
        let mut x = e(0).scale(t.cos()) + e(1).scale(t.sin());
        for (d, row) in coeffs.iter().enumerate() {
            let mut v = 0.0;
            for ((ca, sa), m) in row.iter().zip(modes.iter()) {
                v += ca * (m * t).cos() + sa * (m * t).sin();
            }
            x = x + e(d).scale(v);
        }
        x
    };
    let df = move |t: f64| {
        let mut x = e(0).scale(-t.sin()) + e(1).scale(t.cos());
        for (d, row) in coeffs2.iter().enumerate() {
            let mut v = 0.0;
            for ((ca, sa), m) in row.iter().zip(modes2.iter()) {
                v += m * (-ca * (m * t).sin() + sa * (m * t).cos());
            }
            x = x + e(d).scale(v);
        }
        x
    };
    sample_unit_speed(
        &f,
        &df,
        2.0 * std::f64::consts::PI,
        n,
        &|_| Boundary::periodic(),
        0.0,
    )
}

/// Random smooth closed curve: a dominant circle plus seeded low-frequency
/// Fourier modes in all seven coordinates.
pub fn random_fourier(n: usize, max_mode: usize, scale: f64, seed: u64) -> Result<CurveState> {
    let modes: Vec<usize> = (2..=max_mode).collect();
    perturbed_circle(n, scale, &modes, seed)
}

/// Resamples a curve to uniform arclength by local cubic interpolation
/// (Catmull-Rom through the samples), preserving the sample count. Never
/// invoked implicitly by the evolution routines.
pub fn reparameterize(curve: &CurveState) -> Result<CurveState> {
    let n = curve.len();
    let get = curve.getter();
    let periodic = curve.boundary.is_periodic();
    let segs = if periodic { n } else { n - 1 };

    // cubic segment between samples m and m+1 with one-sided tangents at
    // clamped ends
    let point = |m: usize, u: f64| -> ImOctonion {
        let p0 = get(m as isize);
        let p1 = get(m as isize + 1);
        let t0 = if periodic || m > 0 {
            (get(m as isize + 1) - get(m as isize - 1)).scale(0.5)
        } else {
            p1 - p0
        };
        let t1 = if periodic || m + 2 < n {
            (get(m as isize + 2) - get(m as isize)).scale(0.5)
        } else {
            p1 - p0
        };
        let u2 = u * u;
        let u3 = u2 * u;
        p0.scale(2.0 * u3 - 3.0 * u2 + 1.0)
            + t0.scale(u3 - 2.0 * u2 + u)
            + p1.scale(-2.0 * u3 + 3.0 * u2)
            + t1.scale(u3 - u2)
    };

    // arclength of each cubic segment by fine sampling
    const SUB: usize = 16;
    let mut seg_len = Vec::with_capacity(segs);
    for m in 0..segs {
        let mut acc = 0.0;
        let mut prev = point(m, 0.0);
        for q in 1..=SUB {
            let cur = point(m, q as f64 / SUB as f64);
            acc += (cur - prev).norm();
            prev = cur;
        }
        seg_len.push(acc);
    }
    let total: f64 = seg_len.iter().sum();
    let new_ds = if periodic { total / n as f64 } else { total / (n - 1) as f64 };

    let mut samples = Vec::with_capacity(n);
    let mut seg = 0usize;
    let mut seg_start = 0.0;
    for m in 0..n {
        let target = m as f64 * new_ds;
        while seg + 1 < segs && seg_start + seg_len[seg] < target {
            seg_start += seg_len[seg];
            seg += 1;
        }
        // locate within the segment by bisection on chordal length
        let want = (target - seg_start).clamp(0.0, seg_len[seg]);
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let mut acc = 0.0;
            let mut prev = point(seg, 0.0);
            for q in 1..=SUB {
                let u = mid * q as f64 / SUB as f64;
                let cur = point(seg, u);
                acc += (cur - prev).norm();
                prev = cur;
            }
            if acc < want {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        samples.push(point(seg, 0.5 * (lo + hi)));
    }
    CurveState::new(samples, new_ds, curve.s0, curve.boundary, curve.time)
}

/// Default unit-speed tolerance for a grid: the chord of a curve with
/// curvature kappa differs from arclength at second order, so the scale is
/// ds^2 with generous headroom.
pub fn unit_speed_tol(ds: f64) -> f64 {
    (10.0 * ds * ds).max(1e-9)
}

/// Deterministic rng helper for tests and presets.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_unit_speed_and_closed() {
        let c = circle(256).unwrap();
        assert_eq!(c.len(), 256);
        c.validate_unit_speed(unit_speed_tol(c.ds)).unwrap();
        assert!((c.arclength() - 2.0 * std::f64::consts::PI).abs() < 1e-3);
        // drift-free wrap: last-to-first chord matches ds
        let speeds = c.chord_speeds();
        assert!((speeds[255] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn helix_unit_speed_with_drift() {
        let h = helix(1.0, 1.0, 256).unwrap();
        h.validate_unit_speed(unit_speed_tol(h.ds)).unwrap();
        let expected_len = 2.0 * std::f64::consts::PI * 2.0_f64.sqrt();
        assert!((h.ds * 256.0 - expected_len).abs() < 1e-9);
        // derivative across the seam stays smooth thanks to the drift
        let d1 = h.d1();
        for v in &d1 {
            assert!((v.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn perturbed_circle_is_deterministic() {
        let a = perturbed_circle(64, 0.02, &[2, 3], 7).unwrap();
        let b = perturbed_circle(64, 0.02, &[2, 3], 7).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = perturbed_circle(64, 0.02, &[2, 3], 8).unwrap();
        assert_ne!(a.samples, c.samples);
        a.validate_unit_speed(unit_speed_tol(a.ds)).unwrap();
    }

    #[test]
    fn reparameterize_restores_uniform_speed() {
        // distort the circle parameterization, then fix it
        let n = 128;
        let samples: Vec<ImOctonion> = (0..n)
            .map(|m| {
                let t = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
                let t = t + 0.1 * t.sin();
                ImOctonion::basis(0).scale(t.cos()) + ImOctonion::basis(1).scale(t.sin())
            })
            .collect();
        let ds = 2.0 * std::f64::consts::PI / n as f64;
        let bad = CurveState::new(samples, ds, 0.0, Boundary::periodic(), 0.0).unwrap();
        assert!(bad.validate_unit_speed(unit_speed_tol(ds)).is_err());
        let fixed = reparameterize(&bad).unwrap();
        fixed.validate_unit_speed(unit_speed_tol(fixed.ds)).unwrap();
    }

    #[test]
    fn too_few_samples_rejected() {
        let samples = vec![ImOctonion::zero(); 4];
        assert!(CurveState::new(samples, 0.1, 0.0, Boundary::periodic(), 0.0).is_err());
    }
}
