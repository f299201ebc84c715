use std::fmt::Write;
use std::str::FromStr;

use super::Trajectory;
use crate::error::{Error, Result};

pub const DEFAULT_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "svg" => Ok(ExportFormat::Svg),
            _ => Err(Error::UnsupportedFormat(s.into())),
        }
    }
}

/// `x` rounded to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Shortest decimal for `round_sig(x)`, always with a fractional part.
pub fn fmt_sig(x: f64) -> String {
    let mut s = round_sig(x).to_string();
    if s.bytes().all(|b| b.is_ascii_digit() || b == b'-') {
        s.push_str(".0");
    }
    s
}

/// CSV samples the whole trajectory every `step` seconds; SVG draws one
/// polyline per segment.
pub fn export_trajectory(traj: &Trajectory, format: ExportFormat, step: f64) -> Result<Vec<u8>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Invalid(format!("sampling step {step} must be positive")));
    }
    Ok(match format {
        ExportFormat::Csv => csv(traj, step),
        ExportFormat::Svg => svg(traj, step),
    }
    .into_bytes())
}

fn csv(traj: &Trajectory, step: f64) -> String {
    let mut out = String::from("t,position\n");
    if traj.segments.is_empty() {
        return out;
    }
    let slack = step * 1e-9;
    let mut i = 0u64;
    loop {
        let t = i as f64 * step;
        if t > traj.horizon + slack {
            break;
        }
        let p = traj.position(t).expect("nonempty");
        writeln!(out, "{},{}", fmt_sig(t), fmt_sig(p)).unwrap();
        i += 1;
    }
    out
}

fn svg(traj: &Trajectory, step: f64) -> String {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const PAD: f64 = 20.0;
    let top = traj
        .segments
        .iter()
        .map(|s| s.evolution.apex())
        .fold(0.0, f64::max)
        .max(1e-9);
    let span = traj.horizon.max(1e-9);
    let sx = (W - 2.0 * PAD) / span;
    let sy = (H - 2.0 * PAD) / top;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    for (k, seg) in traj.segments.iter().enumerate() {
        let d = seg.evolution.duration.as_f64();
        let n = ((d / step).ceil() as usize).max(1);
        let pts: Vec<String> = (0..=n)
            .map(|i| {
                let t = d * i as f64 / n as f64;
                let x = PAD + (seg.offset + t) * sx;
                let y = H - PAD - seg.evolution.eval(t) * sy;
                format!("{},{}", fmt_sig(x), fmt_sig(y))
            })
            .collect();
        writeln!(
            out,
            r#"  <polyline id="segment-{k}" fill="none" stroke="black" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::{unfold_ball, BallParams, BallState};
    use super::*;

    fn up(n: usize) -> Trajectory {
        unfold_ball(BallState::new(0.0, 5.0).unwrap(), n, &BallParams::deterministic(9.8, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_sig(0.0), "0.0");
        assert_eq!(fmt_sig(-0.0), "0.0");
        assert_eq!(fmt_sig(0.1 * 3.0), "0.3");
        assert_eq!(fmt_sig(2.0), "2.0");
        assert_eq!(fmt_sig(4.949747468305833), "4.94974747");
        assert_eq!(fmt_sig(-1234567890123.0), "-1234567890000.0");
    }

    #[test]
    fn csv_of_one_segment() {
        let text = String::from_utf8(export_trajectory(&up(1), ExportFormat::Csv, 0.1).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,position");
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[1], "0.0,0.0");
        assert_eq!(lines[2], "0.1,0.451");
    }

    #[test]
    fn empty_trajectory_is_header_only() {
        let b = export_trajectory(&Trajectory::empty(), ExportFormat::Csv, 0.1).unwrap();
        assert_eq!(b, b"t,position\n");
    }

    #[test]
    fn svg_is_xml_with_a_polyline_per_segment() {
        let b = export_trajectory(&up(3), ExportFormat::Svg, 0.05).unwrap();
        let text = String::from_utf8(b.clone()).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let lines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
        assert_eq!(lines, 3);
        assert_eq!(b, export_trajectory(&up(3), ExportFormat::Svg, 0.05).unwrap());
    }

    #[test]
    fn unknown_format() {
        assert_eq!("png".parse::<ExportFormat>(), Err(Error::UnsupportedFormat("png".into())));
        assert_eq!("SVG".parse::<ExportFormat>(), Ok(ExportFormat::Svg));
    }
}
