use std::io::Write;

use super::curve::Curve;
use super::frame::sample_at_arc_length;
use crate::Result;

/// Writes `t, s, x, y, z, kappa, tau, alpha` rows for the given arc-length
/// values, preceded by `#` comment lines.
pub fn write_curve_csv<C: Curve + ?Sized, W: Write>(curve: &C, s_values: &[f64], header: &[String], out: &mut W) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "# units: t, s, x, y, z in length; kappa, tau in 1/length; alpha in radians")?;
    writeln!(out, "t,s,x,y,z,kappa,tau,alpha")?;
    for &s in s_values {
        let a = sample_at_arc_length(curve, s)?;
        let p = a.frame.point;
        writeln!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            a.t, s, p.x, p.y, p.z, a.frame.kappa, a.frame.tau, a.tilt.alpha
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{helix_curve, HelixParams, PerturbationProfile};

    #[test]
    fn csv_has_constant_curvature_column() {
        let h = helix_curve(HelixParams::new(1.0, 1.0).unwrap(), PerturbationProfile::unperturbed()).unwrap();
        let mut buf = Vec::new();
        let s: Vec<f64> = (0..5).map(|i| i as f64).collect();
        write_curve_csv(&h, &s, &[], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(rows.len(), 5);
        for r in rows {
            let k: f64 = r.split(',').nth(5).unwrap().parse().unwrap();
            assert!((k - 0.5).abs() < 1e-12);
        }
    }
}
