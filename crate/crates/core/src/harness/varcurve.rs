//! Asymptotic standard deviations of the estimators as functions of `R`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estim2d::{mle_asymp_var, mom_asymp_var};
use crate::estim3d::mom3d_asymp_var;
use crate::model::Params3D;
use crate::shapes::Dimension;

/// `steps` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..steps)
            .map(|i| {
                let t = i as f64 / (steps - 1) as f64;
                a + (b - a) * t
            })
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(rename = "R")]
    pub band: f64,
    pub first: f64,
    pub second: f64,
}

/// Per-observation asymptotic standard deviations on a grid of `R`.
///
/// In 2D the two curves are `sigma_MOM` and `sigma_MLE` of `L0`; in 3D they are
/// the moment-estimator deviations of `L0` and `M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarCurve {
    pub dimension: Dimension,
    pub labels: [String; 2],
    pub points: Vec<CurvePoint>,
}

pub fn varcurve2d(l0: f64, phi0: f64, grid: &[f64]) -> Result<VarCurve> {
    check(l0, phi0, grid)?;
    let points = grid
        .iter()
        .map(|&r| CurvePoint {
            band: r,
            first: mom_asymp_var(l0, r, phi0).sqrt(),
            second: mle_asymp_var(l0, r, phi0).sqrt(),
        })
        .collect();
    Ok(VarCurve {
        dimension: Dimension::Two,
        labels: ["sigma_mom".into(), "sigma_mle".into()],
        points,
    })
}

pub fn varcurve3d(l0: f64, m: f64, phi0: f64, grid: &[f64]) -> Result<VarCurve> {
    check(l0, phi0, grid)?;
    let points = grid
        .iter()
        .map(|&r| {
            let (vl, vm) = mom3d_asymp_var(&Params3D::with_phi0(l0, m, r, phi0)?);
            Ok(CurvePoint { band: r, first: vl.sqrt(), second: vm.sqrt() })
        })
        .collect::<Result<_>>()?;
    Ok(VarCurve {
        dimension: Dimension::Three,
        labels: ["sigma_l0".into(), "sigma_m".into()],
        points,
    })
}

fn check(l0: f64, phi0: f64, grid: &[f64]) -> Result<()> {
    if !(l0 > 0.0 && l0.is_finite() && phi0 > 0.0 && phi0.is_finite()) {
        return Err(Error::InvalidParams(format!("need l0 > 0 and phi0 > 0, got {l0}, {phi0}")));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty R grid".into()));
    }
    if let Some(r) = grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParams(format!("R must be positive, got {r}")));
    }
    Ok(())
}

impl VarCurve {
    pub fn to_csv_string(&self) -> String {
        let mut out = format!("R,{},{}\n", self.labels[0], self.labels[1]);
        for p in &self.points {
            let _ = writeln!(out, "{:e},{:e},{:e}", p.band, p.first, p.second);
        }
        out
    }

    /// Line plot of both curves against `R` on a log `y` axis.
    pub fn to_svg(&self) -> String {
        let (w, h, pad) = (640.0, 400.0, 50.0);
        let xs: Vec<f64> = self.points.iter().map(|p| p.band).collect();
        let ys: Vec<f64> = self
            .points
            .iter()
            .flat_map(|p| [p.first, p.second])
            .filter(|y| *y > 0.0 && y.is_finite())
            .map(f64::log10)
            .collect();
        let (x0, x1) = bounds(&xs);
        let (y0, y1) = bounds(&ys);
        let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y.log10() - y0) / (y1 - y0) * (h - 2.0 * pad);

        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
        );
        let _ = writeln!(
            svg,
            "<path d=\"M{pad} {pad} V{} H{}\" fill=\"none\" stroke=\"black\"/>",
            h - pad,
            w - pad
        );
        let _ = writeln!(svg, "<text x=\"{}\" y=\"{}\" font-size=\"12\">R</text>", w / 2.0, h - 15.0);
        let _ = writeln!(svg, "<text x=\"{pad}\" y=\"{}\" font-size=\"11\">{x0:.3}</text>", h - pad + 15.0);
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{x1:.3}</text>",
            w - pad,
            h - pad + 15.0
        );
        let _ = writeln!(svg, "<text x=\"5\" y=\"{}\" font-size=\"11\">1e{y0:.1}</text>", h - pad);
        let _ = writeln!(svg, "<text x=\"5\" y=\"{}\" font-size=\"11\">1e{y1:.1}</text>", pad);
        for (k, (label, colour)) in self.labels.iter().zip(["#1f77b4", "#d62728"]).enumerate() {
            let coords: Vec<String> = self
                .points
                .iter()
                .map(|p| (p.band, if k == 0 { p.first } else { p.second }))
                .filter(|(_, y)| *y > 0.0 && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>",
                coords.join(" ")
            );
            let _ = writeln!(
                svg,
                "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{colour}\">{label}</text>",
                w - pad - 80.0,
                pad + 15.0 * (k as f64 + 1.0)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}
