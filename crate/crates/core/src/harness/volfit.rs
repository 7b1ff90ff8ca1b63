//! Weighted least-squares polynomial fit to Monte Carlo volumes of `B(S, r)`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{monte_carlo_volume, VolumeEstimate};
use crate::shapes::Shape;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolFit {
    /// Coefficients in increasing powers of `r`.
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Largest `|residual| / (se sqrt(1 - h))` over the grid.
    pub max_studentized_residual: f64,
    pub chi2_per_dof: f64,
    pub points: Vec<VolumeEstimate>,
}

impl VolFit {
    pub fn eval(&self, r: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("power,coefficient,std_error\n");
        for (k, (c, se)) in self.coefficients.iter().zip(&self.std_errors).enumerate() {
            let _ = writeln!(out, "{k},{c:e},{se:e}");
        }
        out
    }
}

/// Weighted fit of a polynomial of `degree` to the points, weights `1/se^2`.
pub fn fit_polynomial(points: &[VolumeEstimate], degree: usize, se_floor: f64) -> Result<VolFit> {
    let cols = degree + 1;
    let mut rs: Vec<f64> = points.iter().map(|p| p.r).collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    if rs.len() < cols {
        return Err(Error::RankDeficient(format!(
            "{} distinct radii for a degree {degree} fit",
            rs.len()
        )));
    }
    let n = points.len();
    let sd: Vec<f64> = points.iter().map(|p| p.std_error.max(se_floor)).collect();
    // Rows scaled by 1/se, so ordinary least squares on (x, y) is the weighted fit.
    let x = DMatrix::from_fn(n, cols, |i, j| points[i].r.powi(j as i32) / sd[i]);
    let y = DVector::from_fn(n, |i, _| points[i].volume / sd[i]);
    let normal = x.transpose() * &x;
    let chol = normal
        .cholesky()
        .ok_or_else(|| Error::RankDeficient("normal matrix is not positive definite".into()))?;
    let beta = chol.solve(&(x.transpose() * &y));
    let cov = chol.inverse();
    let resid = &y - &x * &beta;
    let mut max_student: f64 = 0.0;
    for i in 0..n {
        let row = x.row(i);
        let h = (row * &cov * row.transpose())[(0, 0)];
        let denom = (1.0 - h).max(f64::EPSILON).sqrt();
        max_student = max_student.max(resid[i].abs() / denom);
    }
    let dof = n.saturating_sub(cols);
    let chi2_per_dof = if dof > 0 { resid.norm_squared() / dof as f64 } else { f64::NAN };
    Ok(VolFit {
        coefficients: beta.iter().copied().collect(),
        std_errors: (0..cols).map(|j| cov[(j, j)].sqrt()).collect(),
        max_studentized_residual: max_student,
        chi2_per_dof,
        points: points.to_vec(),
    })
}

/// Estimates `mu(B(S, r))` on `r_grid` with `n_mc` points each and fits a
/// polynomial of `degree`. Standard errors are floored at `|box| / n_mc`.
pub fn vol_fit(shape: &Shape, r_grid: &[f64], n_mc: usize, degree: usize, seed: u64) -> Result<VolFit> {
    let points = monte_carlo_volume(shape, r_grid, n_mc, seed)?;
    let floor = r_grid
        .iter()
        .map(|&r| shape.box_volume(r) / n_mc as f64)
        .fold(f64::INFINITY, f64::min);
    fit_polynomial(&points, degree, floor)
}
