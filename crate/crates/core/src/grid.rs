//! Uniform-grid calculus: finite-difference stencils, cumulative
//! trapezoid integration, and FFT-based derivatives for periodic and
//! quasi-periodic complex fields.
//!
//! Interior stencils are 4th-order centered; clamped grids fall back to
//! one-sided 2nd-order at the two samples nearest each end.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::Arc;

use crate::octonion::{ComplexOctonion, ImOctonion};

/// Element types the stencils operate on.
pub trait Vs: Copy {
    fn vs_zero() -> Self;
    fn vs_add(self, o: Self) -> Self;
    fn vs_scale(self, c: f64) -> Self;
}

impl Vs for f64 {
    fn vs_zero() -> Self {
        0.0
    }
    fn vs_add(self, o: Self) -> Self {
        self + o
    }
    fn vs_scale(self, c: f64) -> Self {
        self * c
    }
}

impl Vs for Complex64 {
    fn vs_zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn vs_add(self, o: Self) -> Self {
        self + o
    }
    fn vs_scale(self, c: f64) -> Self {
        self * c
    }
}

impl Vs for ImOctonion {
    fn vs_zero() -> Self {
        ImOctonion::zero()
    }
    fn vs_add(self, o: Self) -> Self {
        self + o
    }
    fn vs_scale(self, c: f64) -> Self {
        self.scale(c)
    }
}

impl Vs for ComplexOctonion {
    fn vs_zero() -> Self {
        ComplexOctonion::zero()
    }
    fn vs_add(self, o: Self) -> Self {
        self + o
    }
    fn vs_scale(self, c: f64) -> Self {
        let mut c0 = self.0;
        for v in c0.iter_mut() {
            *v *= c;
        }
        ComplexOctonion(c0)
    }
}

fn comb<T: Vs>(terms: &[(f64, T)], scale: f64) -> T {
    let mut acc = T::vs_zero();
    for (c, v) in terms {
        acc = acc.vs_add(v.vs_scale(*c));
    }
    acc.vs_scale(scale)
}

/// 4th-order first derivative on a periodic grid. `get` must resolve any
/// integer index (the caller handles wrapping and drift).
pub fn d1_periodic<T: Vs>(get: impl Fn(isize) -> T, n: usize, ds: f64) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    for m in 0..n as isize {
        out.push(comb(
            &[
                (1.0, get(m - 2)),
                (-8.0, get(m - 1)),
                (8.0, get(m + 1)),
                (-1.0, get(m + 2)),
            ],
            1.0 / (12.0 * ds),
        ));
    }
    out
}

/// 4th-order second derivative on a periodic grid.
pub fn d2_periodic<T: Vs>(get: impl Fn(isize) -> T, n: usize, ds: f64) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    for m in 0..n as isize {
        out.push(comb(
            &[
                (-1.0, get(m - 2)),
                (16.0, get(m - 1)),
                (-30.0, get(m)),
                (16.0, get(m + 1)),
                (-1.0, get(m + 2)),
            ],
            1.0 / (12.0 * ds * ds),
        ));
    }
    out
}

/// First derivative on a clamped grid: 4th-order centered in the interior,
/// 2nd-order one-sided/centered at the two samples nearest each end.
pub fn d1_clamped<T: Vs>(f: &[T], ds: f64) -> Vec<T> {
    let n = f.len();
    assert!(n >= 5, "clamped stencils need at least 5 samples");
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let v = if m == 0 {
            comb(
                &[(-3.0, f[0]), (4.0, f[1]), (-1.0, f[2])],
                1.0 / (2.0 * ds),
            )
        } else if m == n - 1 {
            comb(
                &[(3.0, f[n - 1]), (-4.0, f[n - 2]), (1.0, f[n - 3])],
                1.0 / (2.0 * ds),
            )
        } else if m == 1 || m == n - 2 {
            comb(&[(-1.0, f[m - 1]), (1.0, f[m + 1])], 1.0 / (2.0 * ds))
        } else {
            comb(
                &[
                    (1.0, f[m - 2]),
                    (-8.0, f[m - 1]),
                    (8.0, f[m + 1]),
                    (-1.0, f[m + 2]),
                ],
                1.0 / (12.0 * ds),
            )
        };
        out.push(v);
    }
    out
}

/// Second derivative on a clamped grid, same order layout as [`d1_clamped`].
pub fn d2_clamped<T: Vs>(f: &[T], ds: f64) -> Vec<T> {
    let n = f.len();
    assert!(n >= 5, "clamped stencils need at least 5 samples");
    let h2 = ds * ds;
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let v = if m == 0 {
            comb(
                &[(2.0, f[0]), (-5.0, f[1]), (4.0, f[2]), (-1.0, f[3])],
                1.0 / h2,
            )
        } else if m == n - 1 {
            comb(
                &[
                    (2.0, f[n - 1]),
                    (-5.0, f[n - 2]),
                    (4.0, f[n - 3]),
                    (-1.0, f[n - 4]),
                ],
                1.0 / h2,
            )
        } else if m == 1 || m == n - 2 {
            comb(&[(1.0, f[m - 1]), (-2.0, f[m]), (1.0, f[m + 1])], 1.0 / h2)
        } else {
            comb(
                &[
                    (-1.0, f[m - 2]),
                    (16.0, f[m - 1]),
                    (-30.0, f[m]),
                    (16.0, f[m + 1]),
                    (-1.0, f[m + 2]),
                ],
                1.0 / (12.0 * h2),
            )
        };
        out.push(v);
    }
    out
}

/// Periodic wrap getter over a slice (no drift).
pub fn wrap_get<T: Vs>(f: &[T]) -> impl Fn(isize) -> T + '_ {
    let n = f.len() as isize;
    move |m| f[m.rem_euclid(n) as usize]
}

/// Wrap getter for a quasi-periodic complex field:
/// `f(s + L) = e^{i w} f(s)`, so wrapping past an end multiplies by the
/// corresponding power of the winding phase.
pub fn wrap_get_twisted(
    f: &[ComplexOctonion],
    w: f64,
) -> impl Fn(isize) -> ComplexOctonion + '_ {
    let n = f.len() as isize;
    move |m| {
        let q = m.div_euclid(n);
        let v = f[m.rem_euclid(n) as usize];
        if q == 0 {
            v
        } else {
            v.scale(Complex64::from_polar(1.0, w * q as f64))
        }
    }
}

/// Derivative of a 7-component field stored one sample per entry.
pub fn d1_field(f: &[ImOctonion], ds: f64, periodic: bool) -> Vec<ImOctonion> {
    if periodic {
        d1_periodic(wrap_get(f), f.len(), ds)
    } else {
        d1_clamped(f, ds)
    }
}

pub fn d1_field_c(f: &[ComplexOctonion], ds: f64, periodic: bool) -> Vec<ComplexOctonion> {
    if periodic {
        d1_periodic(wrap_get(f), f.len(), ds)
    } else {
        d1_clamped(f, ds)
    }
}

/// Derivative of a quasi-periodic complex-octonion field with phase
/// winding `w` over the period; clamped grids ignore the winding.
pub fn d1_field_c_twisted(
    f: &[ComplexOctonion],
    ds: f64,
    periodic: bool,
    w: f64,
) -> Vec<ComplexOctonion> {
    if periodic {
        d1_periodic(wrap_get_twisted(f, w), f.len(), ds)
    } else {
        d1_clamped(f, ds)
    }
}

pub fn d1_real(f: &[f64], ds: f64, periodic: bool) -> Vec<f64> {
    if periodic {
        d1_periodic(wrap_get(f), f.len(), ds)
    } else {
        d1_clamped(f, ds)
    }
}

/// Cumulative trapezoid from the first grid sample; `out[0] = 0`.
pub fn cumtrapz(f: &[f64], ds: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in f.windows(2) {
        acc += 0.5 * ds * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Integral over one full period: uniform trapezoid closed by the wrap
/// segment, which reduces to `ds * sum(f)`.
pub fn periodic_integral(f: &[f64], ds: f64) -> f64 {
    f.iter().sum::<f64>() * ds
}

/// FFT-based spectral derivatives for complex fields on a uniform periodic
/// grid, with support for quasi-periodic fields `ψ(s + L) = e^{iw} ψ(s)`:
/// the field is de-twisted by `e^{-i w (s - s0)/L}`, differentiated
/// spectrally, and re-twisted with the product-rule correction.
pub struct SpectralGrid {
    n: usize,
    length: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// signed wavenumbers 2π m / L (first derivative uses 0 at Nyquist)
    k1: Vec<f64>,
    k2: Vec<f64>,
    twists: HashMap<u64, Vec<Complex64>>,
}

impl SpectralGrid {
    pub fn new(n: usize, ds: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let length = n as f64 * ds;
        let mut k1 = vec![0.0; n];
        let mut k2 = vec![0.0; n];
        for (m, (a, b)) in k1.iter_mut().zip(k2.iter_mut()).enumerate() {
            let mm = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            let k = 2.0 * std::f64::consts::PI * mm / length;
            *a = if 2 * m == n { 0.0 } else { k };
            *b = k;
        }
        SpectralGrid {
            n,
            length,
            fwd,
            inv,
            k1,
            k2,
            twists: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn twist(&mut self, w: f64) -> &[Complex64] {
        let n = self.n;
        self.twists.entry(w.to_bits()).or_insert_with(|| {
            (0..n)
                .map(|j| Complex64::from_polar(1.0, -w * j as f64 / n as f64))
                .collect()
        })
    }

    fn transform(&self, f: &[Complex64], filter: &dyn Fn(usize) -> Complex64) -> Vec<Complex64> {
        let mut buf = f.to_vec();
        self.fwd.process(&mut buf);
        for (m, v) in buf.iter_mut().enumerate() {
            *v *= filter(m) / self.n as f64;
        }
        self.inv.process(&mut buf);
        buf
    }

    /// First derivative of a field with winding `w` (0 for periodic).
    pub fn d1(&mut self, f: &[Complex64], w: f64) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n);
        if w == 0.0 {
            let k1 = self.k1.clone();
            return self.transform(f, &|m| Complex64::new(0.0, k1[m]));
        }
        let tw: Vec<Complex64> = self.twist(w).to_vec();
        let chi: Vec<Complex64> = f.iter().zip(tw.iter()).map(|(a, b)| a * b).collect();
        let k1 = self.k1.clone();
        let dchi = self.transform(&chi, &|m| Complex64::new(0.0, k1[m]));
        let wl = w / self.length;
        (0..self.n)
            .map(|j| (dchi[j] + Complex64::new(0.0, wl) * chi[j]) * tw[j].conj())
            .collect()
    }

    /// Second derivative of a field with winding `w`.
    pub fn d2(&mut self, f: &[Complex64], w: f64) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n);
        if w == 0.0 {
            let k2 = self.k2.clone();
            return self.transform(f, &|m| Complex64::new(-k2[m] * k2[m], 0.0));
        }
        let tw: Vec<Complex64> = self.twist(w).to_vec();
        let chi: Vec<Complex64> = f.iter().zip(tw.iter()).map(|(a, b)| a * b).collect();
        let k1 = self.k1.clone();
        let k2 = self.k2.clone();
        let dchi = self.transform(&chi, &|m| Complex64::new(0.0, k1[m]));
        let ddchi = self.transform(&chi, &|m| Complex64::new(-k2[m] * k2[m], 0.0));
        let wl = w / self.length;
        (0..self.n)
            .map(|j| {
                (ddchi[j] + Complex64::new(0.0, 2.0 * wl) * dchi[j] - wl * wl * chi[j])
                    * tw[j].conj()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_periodic_is_fourth_order() {
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&n| {
                let ds = 2.0 * std::f64::consts::PI / n as f64;
                let f: Vec<f64> = (0..n).map(|m| (3.0 * m as f64 * ds).sin()).collect();
                let df = d1_periodic(wrap_get(&f), n, ds);
                (0..n)
                    .map(|m| (df[m] - 3.0 * (3.0 * m as f64 * ds).cos()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 3.7, "measured order {order}");
    }

    #[test]
    fn clamped_ends_are_second_order() {
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&n| {
                let ds = 1.0 / (n - 1) as f64;
                let f: Vec<f64> = (0..n).map(|m| (2.0 * m as f64 * ds).exp()).collect();
                let d2 = d2_clamped(&f, ds);
                (0..n)
                    .map(|m| (d2[m] - 4.0 * (2.0 * m as f64 * ds).exp()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.7, "measured order {order}");
    }

    #[test]
    fn cumtrapz_linear_exact() {
        let f = vec![1.0, 2.0, 3.0, 4.0];
        let integral = cumtrapz(&f, 0.5);
        assert_eq!(integral, vec![0.0, 0.75, 2.0, 3.75]);
    }

    #[test]
    fn spectral_derivative_periodic() {
        let n = 64;
        let ds = 2.0 * std::f64::consts::PI / n as f64;
        let mut sg = SpectralGrid::new(n, ds);
        let f: Vec<Complex64> = (0..n)
            .map(|m| Complex64::from_polar(1.0, 5.0 * m as f64 * ds))
            .collect();
        let df = sg.d1(&f, 0.0);
        let ddf = sg.d2(&f, 0.0);
        for m in 0..n {
            let expect1 = Complex64::new(0.0, 5.0) * f[m];
            let expect2 = Complex64::new(-25.0, 0.0) * f[m];
            assert!((df[m] - expect1).norm() < 1e-10);
            assert!((ddf[m] - expect2).norm() < 1e-9);
        }
    }

    #[test]
    fn spectral_derivative_quasi_periodic() {
        // ψ(s) = e^{i a s} with non-integer a: winding w = a L
        let n = 128;
        let length = 2.0 * std::f64::consts::PI;
        let ds = length / n as f64;
        let a = 2.6180339887;
        let w = a * length;
        let mut sg = SpectralGrid::new(n, ds);
        let f: Vec<Complex64> = (0..n)
            .map(|m| Complex64::from_polar(1.0, a * m as f64 * ds))
            .collect();
        let df = sg.d1(&f, w);
        let ddf = sg.d2(&f, w);
        for m in 0..n {
            assert!((df[m] - Complex64::new(0.0, a) * f[m]).norm() < 1e-9);
            assert!((ddf[m] + a * a * f[m]).norm() < 1e-8);
        }
    }
}
