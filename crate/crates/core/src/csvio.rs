//! CSV readers and writers for curves, sphere maps, field triples, frame
//! fields and surface coefficients. All floats are written with 17
//! significant digits so values round-trip exactly; files are UTF-8 with
//! a header row and '.' decimal separator.

use crate::curve::{Boundary, CurveState};
use crate::error::{Error, Result};
use crate::flow::SphereMapState;
use crate::frame::{G2FrameField, HasimotoFields};
use crate::nlss::NlssState;
use crate::octonion::ImOctonion;
use crate::surface::SecondFundamentalForm;
use num_complex::Complex64;

/// Lossless float formatting: 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

fn parse_f64(field: &str, context: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("{context}: bad float {field:?}: {e}")))
}

fn split_header(line: &str) -> Vec<String> {
    line.split(',').map(|s| s.trim().to_string()).collect()
}

/// Writes a curve (or any 7-component sample array) as
/// `s,c1,...,c7` rows.
pub fn curve_to_csv(state: &CurveState) -> String {
    let mut out = String::from("s,c1,c2,c3,c4,c5,c6,c7\n");
    for (m, x) in state.samples.iter().enumerate() {
        out.push_str(&fmt(state.s0 + m as f64 * state.ds));
        for c in x.0 {
            out.push(',');
            out.push_str(&fmt(c));
        }
        out.push('\n');
    }
    out
}

pub fn sphere_to_csv(state: &SphereMapState) -> String {
    let mut out = String::from("s,c1,c2,c3,c4,c5,c6,c7\n");
    for (m, x) in state.samples.iter().enumerate() {
        out.push_str(&fmt(state.s0 + m as f64 * state.ds));
        for c in x.0 {
            out.push(',');
            out.push_str(&fmt(c));
        }
        out.push('\n');
    }
    out
}

/// Parses `s,c1..c7` rows into a curve with the given boundary treatment.
/// The grid spacing is taken from the s column and must be uniform.
pub fn curve_from_csv(text: &str, boundary: Boundary) -> Result<CurveState> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty curve file".into()))?;
    let cols = split_header(header);
    if cols.len() != 8 || cols[0] != "s" {
        return Err(Error::Parse(format!(
            "expected header s,c1..c7, got {header:?}"
        )));
    }
    let mut s_values = Vec::new();
    let mut samples = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Parse(format!("row {}: expected 8 fields", ln + 2)));
        }
        s_values.push(parse_f64(fields[0], "s column")?);
        let mut c = [0.0; 7];
        for (d, f) in fields[1..].iter().enumerate() {
            c[d] = parse_f64(f, "coordinate")?;
        }
        samples.push(ImOctonion(c));
    }
    if samples.len() < 2 {
        return Err(Error::Parse("need at least two samples".into()));
    }
    let ds = s_values[1] - s_values[0];
    for w in s_values.windows(2) {
        if ((w[1] - w[0]) - ds).abs() > 1e-9 * ds.abs().max(1.0) {
            return Err(Error::Parse("s column is not uniformly spaced".into()));
        }
    }
    CurveState::new(samples, ds, s_values[0], boundary, 0.0)
}

/// Writes a field triple as `s,re1,im1,re2,im2,re3,im3` rows.
pub fn fields_to_csv(fields: &HasimotoFields) -> String {
    let mut out = String::from("s,re1,im1,re2,im2,re3,im3\n");
    for m in 0..fields.len() {
        out.push_str(&fmt(fields.s0 + m as f64 * fields.ds));
        for i in 0..3 {
            let z = fields.phi[i][m];
            out.push(',');
            out.push_str(&fmt(z.re));
            out.push(',');
            out.push_str(&fmt(z.im));
        }
        out.push('\n');
    }
    out
}

pub fn nlss_to_csv(state: &NlssState) -> String {
    let mut out = String::from("s,re1,im1,re2,im2,re3,im3\n");
    for m in 0..state.len() {
        out.push_str(&fmt(state.s0 + m as f64 * state.ds));
        for i in 0..3 {
            let z = state.phi[i][m];
            out.push(',');
            out.push_str(&fmt(z.re));
            out.push(',');
            out.push_str(&fmt(z.im));
        }
        out.push('\n');
    }
    out
}

/// Parses `s,re1,im1,re2,im2,re3,im3` rows into an NLSS state (windings
/// zero; periodic flag supplied by the caller).
pub fn nlss_from_csv(text: &str, periodic: bool) -> Result<NlssState> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field file".into()))?;
    let cols = split_header(header);
    if cols.len() != 7 || cols[0] != "s" {
        return Err(Error::Parse(format!(
            "expected header s,re1,im1,re2,im2,re3,im3, got {header:?}"
        )));
    }
    let mut s_values = Vec::new();
    let mut phi: [Vec<Complex64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse(format!("row {}: expected 7 fields", ln + 2)));
        }
        s_values.push(parse_f64(fields[0], "s column")?);
        for i in 0..3 {
            let re = parse_f64(fields[1 + 2 * i], "re")?;
            let im = parse_f64(fields[2 + 2 * i], "im")?;
            phi[i].push(Complex64::new(re, im));
        }
    }
    if s_values.len() < 2 {
        return Err(Error::Parse("need at least two samples".into()));
    }
    let ds = s_values[1] - s_values[0];
    for w in s_values.windows(2) {
        if ((w[1] - w[0]) - ds).abs() > 1e-9 * ds.abs().max(1.0) {
            return Err(Error::Parse("s column is not uniformly spaced".into()));
        }
    }
    NlssState::new(phi, ds, s_values[0], periodic, [0.0; 3], 0.0)
}

/// Frame and invariants: columns s, the eight invariant functions, then
/// the 49 frame components in row order I4, I1, I2, I3, I5, I6, I7.
pub fn frame_to_csv(frame: &G2FrameField) -> String {
    let mut out = String::from("s,k1,kappa2,rho1,rho2,rho3,alpha,beta1,beta2");
    for name in ["I4", "I1", "I2", "I3", "I5", "I6", "I7"] {
        for d in 1..=7 {
            out.push_str(&format!(",{name}_{d}"));
        }
    }
    out.push('\n');
    for m in 0..frame.len() {
        out.push_str(&fmt(frame.s0 + m as f64 * frame.ds));
        for v in [
            frame.k1[m],
            frame.kappa2[m],
            frame.rho1[m],
            frame.rho2[m],
            frame.rho3[m],
            frame.alpha[m],
            frame.beta1[m],
            frame.beta2[m],
        ] {
            out.push(',');
            out.push_str(&fmt(v));
        }
        for row in frame.rows(m) {
            for c in row.0 {
                out.push(',');
                out.push_str(&fmt(c));
            }
        }
        out.push('\n');
    }
    out
}

/// Surface coefficients; not-applicable entries are left empty.
pub fn surface_to_csv(h: &SecondFundamentalForm) -> String {
    let mut out =
        String::from("s,h3_11,h3_12,h3_22,h4_22,h5_12,h5_22,h6_22,h7_22,theta\n");
    let opt = |v: Option<f64>| v.map(fmt).unwrap_or_default();
    for m in 0..h.len() {
        out.push_str(&fmt(h.s0 + m as f64 * h.ds));
        for v in [h.h3_11[m], h.h3_12[m], h.h3_22[m], h.h4_22[m], h.h5_12[m]] {
            out.push(',');
            out.push_str(&fmt(v));
        }
        for v in [h.h5_22[m], h.h6_22[m], h.h7_22[m]] {
            out.push(',');
            out.push_str(&opt(v));
        }
        out.push(',');
        match &h.theta {
            Some(t) => out.push_str(&fmt(t[m])),
            None => {}
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::circle;

    #[test]
    fn curve_round_trips_exactly() {
        let c = crate::curve::perturbed_circle(64, 0.05, &[2], 3).unwrap();
        let text = curve_to_csv(&c);
        let back = curve_from_csv(&text, c.boundary).unwrap();
        assert_eq!(c.samples, back.samples);
        assert!((c.ds - back.ds).abs() < 1e-15 * c.ds);
    }

    #[test]
    fn nlss_round_trips_exactly() {
        let state = crate::nlss::presets::soliton(1.0, 20.0, 64).unwrap();
        let text = nlss_to_csv(&state);
        let back = nlss_from_csv(&text, true).unwrap();
        assert_eq!(state.phi, back.phi);
    }

    #[test]
    fn bad_headers_are_rejected() {
        assert!(curve_from_csv("x,y\n1,2\n", Boundary::periodic()).is_err());
        assert!(nlss_from_csv("s,re1\n0,1\n", true).is_err());
        let nonuniform = "s,c1,c2,c3,c4,c5,c6,c7\n0,1,0,0,0,0,0,0\n1,1,0,0,0,0,0,0\n2.5,1,0,0,0,0,0,0\n";
        assert!(curve_from_csv(nonuniform, Boundary::periodic()).is_err());
    }

    #[test]
    fn frame_csv_has_expected_columns() {
        let c = circle(64).unwrap();
        let f = crate::frame::build_g2_frame(
            &c,
            ImOctonion::basis(3),
            &crate::frame::FrameThresholds::default(),
        )
        .unwrap();
        let text = frame_to_csv(&f);
        let header = text.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 9 + 49);
        assert_eq!(text.lines().count(), 65);
    }
}
