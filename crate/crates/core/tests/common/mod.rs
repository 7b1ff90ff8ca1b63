//! Independent numerical oracles built from the volume polynomial alone.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-14).integral
}

/// Distance law with `V(r) - V(0) = sum c_k r^k`, `c = [c_1, c_2, ...]`.
#[derive(Clone, Debug)]
pub struct VolumeLaw {
    pub c: Vec<f64>,
    pub band: f64,
}

impl VolumeLaw {
    pub fn planar(l0: f64, phi0: f64, band: f64) -> Self {
        VolumeLaw { c: vec![l0, phi0 * PI], band }
    }

    pub fn spatial(l0: f64, m: f64, phi0: f64, band: f64) -> Self {
        VolumeLaw { c: vec![l0, m, 4.0 / 3.0 * PI * phi0], band }
    }

    pub fn grow(&self, r: f64) -> f64 {
        self.c.iter().enumerate().map(|(k, c)| c * r.powi(k as i32 + 1)).sum()
    }

    pub fn grow_rate(&self, r: f64) -> f64 {
        self.c.iter().enumerate().map(|(k, c)| (k + 1) as f64 * c * r.powi(k as i32)).sum()
    }

    pub fn density(&self, r: f64) -> f64 {
        self.grow_rate(r) / self.grow(self.band)
    }

    pub fn cdf(&self, r: f64) -> f64 {
        self.grow(r.clamp(0.0, self.band)) / self.grow(self.band)
    }

    pub fn expect(&self, g: impl Fn(f64) -> f64) -> f64 {
        integrate(|r| g(r) * self.density(r), 0.0, self.band)
    }

    pub fn raw_moment(&self, k: i32) -> f64 {
        self.expect(|r| r.powi(k))
    }
}

/// Delta-method variance of the planar moment estimator: `Var(D) / (dE[D]/dL)^2`.
pub fn delta_mom_var_2d(l0: f64, phi0: f64, band: f64) -> f64 {
    let mean = |l: f64| VolumeLaw::planar(l, phi0, band).raw_moment(1);
    let h = 1e-3 * l0;
    // Richardson-extrapolated central difference.
    let d1 = (mean(l0 + h) - mean(l0 - h)) / (2.0 * h);
    let d2 = (mean(l0 + h / 2.0) - mean(l0 - h / 2.0)) / h;
    let slope = (4.0 * d2 - d1) / 3.0;
    let law = VolumeLaw::planar(l0, phi0, band);
    let var = law.raw_moment(2) - law.raw_moment(1).powi(2);
    var / (slope * slope)
}

/// Inverse Fisher information about `L0` from the numerically differentiated log density.
pub fn inverse_fisher_2d(l0: f64, phi0: f64, band: f64) -> f64 {
    let h = 1e-4 * l0;
    let log_f = |l: f64, r: f64| VolumeLaw::planar(l, phi0, band).density(r).ln();
    let law = VolumeLaw::planar(l0, phi0, band);
    let info = law.expect(|r| {
        let s = (log_f(l0 + h, r) - log_f(l0 - h, r)) / (2.0 * h);
        s * s
    });
    1.0 / info
}

/// Delta-method variances of the spatial moment estimators of `(L0, M)`.
pub fn delta_mom_var_3d(l0: f64, m: f64, phi0: f64, band: f64) -> (f64, f64) {
    let moments = |l: f64, mm: f64| {
        let law = VolumeLaw::spatial(l, mm, phi0, band);
        [law.raw_moment(1), law.raw_moment(2)]
    };
    let (hl, hm) = (1e-4 * l0.abs().max(1.0), 1e-4 * m.abs().max(1.0));
    let (lp, lm) = (moments(l0 + hl, m), moments(l0 - hl, m));
    let (mp, mm) = (moments(l0, m + hm), moments(l0, m - hm));
    // Jacobian of (E D, E D^2) with respect to (L0, M).
    let j = [
        [(lp[0] - lm[0]) / (2.0 * hl), (mp[0] - mm[0]) / (2.0 * hm)],
        [(lp[1] - lm[1]) / (2.0 * hl), (mp[1] - mm[1]) / (2.0 * hm)],
    ];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
    let law = VolumeLaw::spatial(l0, m, phi0, band);
    let (m1, m2, m3, m4) = (law.raw_moment(1), law.raw_moment(2), law.raw_moment(3), law.raw_moment(4));
    let s = [[m2 - m1 * m1, m3 - m1 * m2], [m3 - m1 * m2, m4 - m2 * m2]];
    let quad = |row: [f64; 2]| {
        row[0] * (s[0][0] * row[0] + s[0][1] * row[1]) + row[1] * (s[1][0] * row[0] + s[1][1] * row[1])
    };
    (quad(inv[0]), quad(inv[1]))
}
