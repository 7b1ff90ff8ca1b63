#![allow(clippy::approx_constant)]

//! Acceptance gate. Runs every criterion with a fixed master seed and prints
//! one PASS/FAIL line per criterion; exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{delta_mom_var_2d, inverse_fisher_2d, VolumeLaw};
use polyvol::estim2d::{
    lambda_mom, mle_asymp_var, mle_l0, mom_asymp_var, mom_l0_from_mean, truncated_l0, DEFAULT_EM_TOLERANCE,
};
use polyvol::estim3d::{g1, g2, lambda3_from_moments, truncated3d};
use polyvol::harness::stats::{robust_stats, running_mean, running_median};
use polyvol::harness::varcurve::{linspace, varcurve2d, varcurve3d};
use polyvol::harness::volfit::{vol_fit, VolFit};
use polyvol::harness::{replicate, Parameter, ReplicationConfig, ReplicationSummary};
use polyvol::model::{density2d, density3d, mixture2d, mixture3d, moments2d, moments3d, offset_boundary_measure};
use polyvol::sampler::{derive_seed, empirical_cdf, kolmogorov_bound_95, monte_carlo_volume, sample_distances};
use polyvol::shapes::{Ball, Disk};
use polyvol::{DistanceSample, Method, ModelTag, Params2D, Params3D, Shape, Shape2D, Shape3D};

const MASTER_SEED: u64 = 20_240_611;
const CONE_M: f64 = 6.9404;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn study(shape: Shape, band: f64, n: usize, b: usize, methods: &[Method], stream: u64) -> ReplicationSummary {
    let mut cfg = ReplicationConfig::new(shape, band, n, b, methods.to_vec());
    cfg.master_seed = derive_seed(MASTER_SEED, stream);
    cfg.em_tolerance = DEFAULT_EM_TOLERANCE;
    replicate(&cfg).expect("replication study")
}

fn median_of(s: &ReplicationSummary, m: Method, p: Parameter) -> f64 {
    s.row(m, p).unwrap().median
}

fn mad_of(s: &ReplicationSummary, m: Method, p: Parameter) -> f64 {
    s.row(m, p).unwrap().scaled_mad
}

fn dbe_of(s: &ReplicationSummary, m: Method) -> f64 {
    s.row(m, Parameter::L0).unwrap().mean_dbe.unwrap()
}

fn two_disk_medians() -> Outcome {
    let s = study(Shape2D::two_disks().into(), 1.0, 20_000, 200, &[Method::Mom, Method::Mle], 1);
    let (mom, mle) = (median_of(&s, Method::Mom, Parameter::L0), median_of(&s, Method::Mle, Parameter::L0));
    let ok = (mom - 3.14).abs() <= 0.10 && (mle - 3.14).abs() <= 0.10;
    outcome(ok, format!("two-disk n=20000 B=200 medians MOM {mom:.4} MLE {mle:.4}, band 3.14 +- 0.10"))
}

const PLANAR_METHODS: [Method; 4] = [Method::Mle, Method::Tmle, Method::Mom, Method::Tmom];
/// Published bounded errors at n = 100, R = 1, in the order of `PLANAR_METHODS`.
const DBE_AT_100: [f64; 4] = [0.530, 0.505, 0.538, 0.514];

fn bounded_error_trend(studies: &[(usize, ReplicationSummary)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, &m) in PLANAR_METHODS.iter().enumerate() {
        let d: Vec<f64> = studies.iter().map(|(_, s)| dbe_of(s, m)).collect();
        let decreasing = d.windows(2).all(|w| w[1] < w[0]);
        let near = (d[0] - DBE_AT_100[k]).abs() <= 0.08;
        ok &= decreasing && near;
        parts.push(format!("{m} {:.3}/{:.3}/{:.3} (ref {:.3})", d[0], d[1], d[2], DBE_AT_100[k]));
    }
    outcome(ok, format!("mean d_BE at n=100/300/1000: {}", parts.join(", ")))
}

fn mad_shrinkage(studies: &[(usize, ReplicationSummary)]) -> Outcome {
    let small = &studies[0].1;
    let large = &studies[2].1;
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [Method::Mom, Method::Mle] {
        let ratio = mad_of(small, m, Parameter::L0) / mad_of(large, m, Parameter::L0);
        ok &= ratio >= 2.3;
        parts.push(format!(
            "{m} {:.3} -> {:.3} (ratio {ratio:.2})",
            mad_of(small, m, Parameter::L0),
            mad_of(large, m, Parameter::L0)
        ));
    }
    outcome(ok, format!("scaled MAD n=100 -> n=1000, need ratio >= 2.3: {}", parts.join(", ")))
}

fn asymptotic_variances() -> Outcome {
    let mom = mom_asymp_var(PI, 1.0, 1.0);
    let mle = mle_asymp_var(PI, 1.0, 1.0);
    let (mom_oracle, mle_oracle) = (delta_mom_var_2d(PI, 1.0, 1.0), inverse_fisher_2d(PI, 1.0, 1.0));
    let grid = linspace(1.0, 2.5, 61);
    let ordered = [1.0, 2.0].iter().all(|&phi0| {
        varcurve2d(PI, phi0, &grid).unwrap().points.iter().all(|p| p.second <= p.first)
    });
    let ok = (mom - 434.26).abs() <= 0.01
        && (mle - 400.33).abs() <= 0.01
        && (mom_oracle - 434.26).abs() <= 0.01
        && (mle_oracle - 400.33).abs() <= 0.01
        && ordered;
    outcome(
        ok,
        format!(
            "sigma2_MOM {mom:.4} (oracle {mom_oracle:.4}), sigma2_MLE {mle:.4} (oracle {mle_oracle:.4}), MLE <= MOM on R in [1, 2.5]: {ordered}"
        ),
    )
}

fn cone_medians(l0_study: &ReplicationSummary, m_study: &ReplicationSummary) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (mom, mle) in [(Method::Mom3d, Method::Mle3d)] {
        for m in [mom, mle] {
            let l = median_of(l0_study, m, Parameter::L0);
            let mm = median_of(m_study, m, Parameter::M);
            ok &= (l - 3.14).abs() <= 0.15 && (mm - 6.94).abs() <= 0.35;
            parts.push(format!("{m} L0(R=1.3) {l:.4} M(R=1.9) {mm:.4}"));
        }
    }
    outcome(ok, format!("cone n=20000 B=200 medians, bands 3.14 +- 0.15 / 6.94 +- 0.35: {}", parts.join(", ")))
}

fn cone_mad_ordering(by_n: &[(usize, ReplicationSummary, ReplicationSummary)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, l0_study, m_study) in by_n {
        for (p, s) in [(Parameter::L0, l0_study), (Parameter::M, m_study)] {
            let (mom, mle) = (mad_of(s, Method::Mom3d, p), mad_of(s, Method::Mle3d, p));
            ok &= mle < mom;
            parts.push(format!("n={n} {}: MLE {mle:.3} < MOM {mom:.3}", p.as_str()));
        }
    }
    outcome(ok, parts.join(", "))
}

fn ks_fixtures() -> Vec<(&'static str, Shape, f64)> {
    vec![
        ("disk", Shape2D::unit_disk().into(), 1.0),
        ("two-disk", Shape2D::two_disks().into(), 1.0),
        ("polyline", Shape2D::bent_polyline().into(), 0.9),
        ("wedge-cut disk", Shape2D::WedgeCutDisk { wedge_angle: PI / 3.0 }.into(), 0.5),
        ("rectangle", Shape2D::Rectangle { min: [0.0, 0.0], max: [1.0, 1.0] }.into(), 1.0),
        (
            "triangle",
            Shape2D::ConvexPolygon { vertices: vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.5]] }.into(),
            0.8,
        ),
        ("ball", Shape3D::unit_ball().into(), 1.0),
        ("cone", Shape3D::example_cone().into(), 1.3),
        ("touching balls", Shape3D::touching_balls().into(), 1.0),
        ("B(A,1)", Shape3D::SegmentPointDilation {}.into(), 1.0),
    ]
}

fn kolmogorov_oracle() -> Outcome {
    let n = 100_000;
    let bound = kolmogorov_bound_95(n);
    let mut ok = true;
    let mut parts = Vec::new();
    for (f, (name, shape, band)) in ks_fixtures().into_iter().enumerate() {
        let v = shape.analytic_volume().unwrap();
        let passed = (0..20)
            .filter(|&t| {
                let seed = derive_seed(derive_seed(MASTER_SEED, 700 + f as u64), t);
                let s = sample_distances(&shape, band, n, seed).unwrap();
                empirical_cdf(&s).unwrap().kolmogorov_distance(|r| v.cdf(r, band)) < bound
            })
            .count();
        ok &= passed >= 18;
        parts.push(format!("{name} {passed}/20"));
    }
    outcome(ok, format!("KS below 1.358/sqrt(n) at n=1e5: {}", parts.join(", ")))
}

fn within_3se(fit: &VolFit, expected: &[f64]) -> (bool, String) {
    let z: Vec<f64> = fit
        .coefficients
        .iter()
        .zip(&fit.std_errors)
        .zip(expected)
        .map(|((c, se), e)| (c - e) / se)
        .collect();
    let ok = z.iter().all(|v| v.abs() <= 3.0);
    let zs: Vec<String> = z.iter().map(|v| format!("{v:+.2}")).collect();
    (ok, format!("z [{}]", zs.join(" ")))
}

fn volume_formulas() -> (Outcome, Outcome) {
    let n_mc = 1_000_000;
    let rho = PI / 3.0;
    let t = (rho / 2.0).tan();
    let wedge_quad = (3.0 * PI - rho) / 2.0 - 1.0 / t;
    // (4/3) pi (1+r)^3 + (3/2) pi (1+r)^2, expanded.
    let displayed_dilation = [17.0 * PI / 6.0, 7.0 * PI, 5.5 * PI, 4.0 * PI / 3.0];
    // (name, shape, radius grid, degree, expected coefficients)
    type FitCase = (&'static str, Shape, Vec<f64>, usize, Vec<f64>);
    let cases: Vec<FitCase> = vec![
        (
            "touching balls",
            Shape3D::touching_balls().into(),
            linspace(0.1, 1.2, 12),
            3,
            vec![8.0 * PI / 3.0, 8.0 * PI, 6.0 * PI, 4.0 * PI / 3.0],
        ),
        ("B(A,1)", Shape3D::SegmentPointDilation {}.into(), linspace(0.1, 1.2, 12), 3, displayed_dilation.to_vec()),
        (
            "wedge-cut disk",
            Shape2D::WedgeCutDisk { wedge_angle: rho }.into(),
            linspace(0.05, 0.55, 12),
            2,
            vec![PI - rho / 2.0, 2.0 * PI - rho + 2.0, wedge_quad],
        ),
        ("two-disk", Shape2D::two_disks().into(), linspace(0.1, 1.5, 12), 2, vec![PI / 8.0, PI, 2.0 * PI]),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut dilation_fit = None;
    for (k, (name, shape, grid, degree, expected)) in cases.into_iter().enumerate() {
        let fit = vol_fit(&shape, &grid, n_mc, degree, derive_seed(MASTER_SEED, 800 + k as u64)).unwrap();
        let (pass, z) = within_3se(&fit, &expected);
        ok &= pass;
        parts.push(format!("{name} {} {z}", if pass { "ok" } else { "off" }));
        if name == "B(A,1)" {
            dilation_fit = Some(fit);
        }
    }
    let corrected = [293.0 * PI / 96.0, 8.0 * PI, 6.0 * PI, 4.0 * PI / 3.0];
    let (pass, z) = within_3se(dilation_fit.as_ref().unwrap(), &corrected);
    (
        outcome(ok, format!("volume fits at nMC=1e6 vs displayed coefficients: {}", parts.join("; "))),
        outcome(pass, format!("B(A,1) fit vs 4/3 pi s^3 + 2 pi s^2 - 9 pi/32, s = 1 + r: {z}")),
    )
}

fn pathology() -> Outcome {
    let s = study(Shape2D::two_disks().into(), 1.0, 100, 10_000, &[Method::Mom, Method::Tmom], 900);
    let mom = s.values(Method::Mom, Parameter::L0);
    let tmom = s.values(Method::Tmom, Parameter::L0);
    let max_mom = mom.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let max_tmom = tmom.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cap = 2.0 * PI * 1.0 * 5.0;
    let abs: Vec<f64> = mom.iter().map(|v| v.abs()).collect();
    let rm = running_mean(&abs);
    let rises = rm.windows(2).any(|w| w[1] > w[0]);
    let falls = rm.windows(2).any(|w| w[1] < w[0]);
    let med = running_median(&mom);
    let last = *med.last().unwrap();
    let drift = med[1999..].iter().map(|m| (m - last).abs() / last.abs()).fold(0.0, f64::max);
    let ok = max_mom > 1e3 && max_tmom <= cap && rises && falls && drift <= 0.02;
    outcome(
        ok,
        format!(
            "n=100 B=1e4: max|MOM| {max_mom:.1} (need > 1e3), max|TMOM| {max_tmom:.3} (cap {cap:.3}), running mean non-monotone: {}, running median drift after 2000: {:.2}%",
            rises && falls,
            100.0 * drift
        ),
    )
}

fn unit_identities() -> Outcome {
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol * b.abs().max(1.0);

    let two: Shape = Shape2D::two_disks().into();
    checks.push(("two-disk distance at origin", close(two.distance(&[0.0, 0.0]).unwrap(), 2.5, 1e-15)));
    checks.push(("two-disk distance at (3.25,0)", close(two.distance(&[3.25, 0.0]).unwrap(), 0.25, 1e-15)));
    let cone: Shape = Shape3D::example_cone().into();
    checks.push(("cone apex distance", cone.distance(&[0.0, 0.0, 1.0]).unwrap() == 0.0));
    let square: Shape = Shape2D::Rectangle { min: [0.0, 0.0], max: [1.0, 1.0] }.into();
    checks.push(("square corner distance", close(square.distance(&[2.0, 2.0]).unwrap(), 2f64.sqrt(), 1e-15)));

    let tv = Shape::from(Shape2D::two_disks()).analytic_volume().unwrap();
    checks.push((
        "two-disk polynomial",
        close(tv.mu, PI / 8.0, 1e-15) && close(tv.l0, PI, 1e-15) && tv.phi0 == 2.0 && tv.r_max == 2.5,
    ));
    checks.push(("two-disk V'(1) = 5 pi", close(offset_boundary_measure(1.0, &tv).unwrap(), 5.0 * PI, 1e-14)));
    let tb = Shape::from(Shape3D::touching_balls()).analytic_volume().unwrap();
    checks.push((
        "touching-balls polynomial",
        close(tb.mu, 8.0 * PI / 3.0, 1e-14) && close(tb.l0, 8.0 * PI, 1e-14) && close(tb.m, 6.0 * PI, 1e-14),
    ));
    let rho = 1.0f64;
    let wv = Shape::from(Shape2D::WedgeCutDisk { wedge_angle: rho }).analytic_volume().unwrap();
    checks.push((
        "wedge-cut disk phi0",
        close(wv.phi0, (3.0 * PI - rho) / (2.0 * PI) - 1.0 / (PI * (rho / 2.0).tan()), 1e-14),
    ));
    let pv = Shape::from(Shape2D::bent_polyline()).analytic_volume().unwrap();
    checks.push(("polyline phi0", close(pv.phi0, 1.25 - 1.0 / PI, 1e-14) && pv.r_max <= 1.0));

    let disk_rate = monte_carlo_volume(&Shape2D::unit_disk().into(), &[1.0], 400_000, MASTER_SEED).unwrap()[0];
    checks.push(("disk band fraction 3 pi / 16", close((disk_rate.volume - PI) / 16.0, 3.0 * PI / 16.0, 0.01)));
    let ball = monte_carlo_volume(&Shape3D::unit_ball().into(), &[1.0], 400_000, MASTER_SEED).unwrap()[0];
    checks.push(("ball of radius 2 volume", (ball.volume - 32.0 * PI / 3.0).abs() <= 3.0 * ball.std_error));

    let p = Params2D::new(PI, 1.0, 1.0).unwrap();
    checks.push(("density2d at 0", close(density2d(0.0, &p).unwrap(), 0.5, 1e-15)));
    let p2 = Params2D::new(PI, 2.0, 1.0).unwrap();
    checks.push(("density2d at 0.5 with phi0 2", close(density2d(0.5, &p2).unwrap(), 1.0, 1e-15)));
    checks.push(("mixture weight 1/2", close(mixture2d(&p).lambda, 0.5, 1e-15)));
    checks.push(("E D = 7/12", close(moments2d(&p).mean, 7.0 / 12.0, 1e-15)));
    checks.push(("Var D = 11/144", close(moments2d(&p).var, 11.0 / 144.0, 1e-14)));
    checks.push(("E D = 11/18 with phi0 2", close(moments2d(&p2).mean, 11.0 / 18.0, 1e-15)));
    checks.push(("MOM at 7/12", close(mom_l0_from_mean(7.0 / 12.0, 1.0, 1.0).unwrap().value, PI, 1e-13)));
    checks.push(("MOM at 0.55", close(mom_l0_from_mean(0.55, 1.0, 1.0).unwrap().value, 7.0 * PI / 3.0, 1e-13)));
    checks.push(("MOM at 11/18 with phi0 2", close(mom_l0_from_mean(11.0 / 18.0, 1.0, 2.0).unwrap().value, PI, 1e-13)));
    checks.push(("sigma2_MOM = 44 pi^2", close(mom_asymp_var(PI, 1.0, 1.0), 44.0 * PI * PI, 1e-14)));
    let sample = |v: Vec<f64>| DistanceSample::new(v, 1.0, ModelTag::Solid, 0).unwrap();
    checks.push(("lambda at 7/12", close(lambda_mom(&sample(vec![7.0 / 12.0])).unwrap(), 0.5, 1e-14)));
    checks.push(("lambda at 2R/3", lambda_mom(&sample(vec![2.0 / 3.0])).unwrap().abs() < 1e-14));
    checks.push(("lambda at R/2", close(lambda_mom(&sample(vec![0.5])).unwrap(), 1.0, 1e-14)));
    let far = mle_l0(&sample(vec![0.9; 5]), 1.0, None).unwrap();
    checks.push(("MLE far sample", far.value == 0.0 && far.flags.boundary_hit));
    checks.push(("truncation at 1/2, K=5", close(truncated_l0(0.5, 5, 1.0, 1.0).unwrap().value, PI * 0.96875, 1e-15)));
    checks.push(("truncation at 0", truncated_l0(0.0, 3, 1.0, 1.0).unwrap().value == 0.0));

    let c = Params3D::new(PI, CONE_M, 1.3).unwrap();
    let law = VolumeLaw::spatial(PI, CONE_M, 1.0, 1.3);
    let mo = moments3d(&c);
    checks.push((
        "cone moments vs quadrature",
        close(mo.mean, law.raw_moment(1), 1e-10) && close(mo.second, law.raw_moment(2), 1e-10),
    ));
    checks.push(("cone mixture weights sum", close(mixture3d(&c).weights.iter().sum(), 1.0, 1e-12)));
    let grid_ok = (0..100).all(|i| {
        let r = 1.3 * i as f64 / 100.0;
        (mixture3d(&c).density(r) - density3d(r, &c).unwrap()).abs() <= 1e-12
    });
    checks.push(("mixture3d equals density3d", grid_ok));
    let grid2_ok = (0..100).all(|i| {
        let r = i as f64 / 100.0;
        (mixture2d(&p).density(r) - density2d(r, &p).unwrap()).abs() <= 1e-12
    });
    checks.push(("mixture2d equals density2d", grid2_ok));
    let ball_like = moments3d(&Params3D::new(1e-12, 0.0, 2.0).unwrap()).mean;
    checks.push(("ball-like mean 3R/4", close(ball_like, 1.5, 1e-9)));
    checks.push((
        "moment maps invert cone moments",
        close(g1(mo.mean, mo.second, 1.3, 1.0), PI, 1e-9) && close(g2(mo.mean, mo.second, 1.3, 1.0), CONE_M, 1e-9),
    ));
    let lam = lambda3_from_moments(mo.mean, mo.second, mo.third, 1.3);
    let w = mixture3d(&c).weights;
    checks.push(("lambda3 at cone moments", (0..3).all(|i| close(lam[i], w[i], 1e-9))));
    let uni = lambda3_from_moments(0.5, 1.0 / 3.0, 0.25, 1.0);
    checks.push(("lambda3 uniform", close(uni[0], 1.0, 1e-12) && uni[1].abs() < 1e-12 && uni[2].abs() < 1e-12));
    let beta = lambda3_from_moments(0.75, 0.6, 0.5, 1.0);
    checks.push(("lambda3 Beta(3,1)", beta[0].abs() < 1e-12 && beta[1].abs() < 1e-12 && close(beta[2], 1.0, 1e-12)));
    let z = truncated3d(0.0, 0.0, 5, 1.0, 1.0).unwrap();
    checks.push(("truncated3d at zero", z.l0 == 0.0 && z.m.abs() < 1e-15));
    let vc = varcurve3d(PI, CONE_M, 1.0, &linspace(1.0, 2.5, 16)).unwrap();
    checks.push(("cone variance curve finite", vc.points.iter().all(|p| p.first > 0.0 && p.second > 0.0 && p.first.is_finite())));

    let (med, mad) = robust_stats(&[1.0, 2.0, 3.0]).unwrap();
    checks.push(("median and MAD of 1,2,3", med == 2.0 && close(mad, 1.4826, 1e-15)));
    let b1 = study(Shape2D::two_disks().into(), 1.0, 50, 1, &[Method::Mom], 1000);
    checks.push(("single replication summary", b1.rows[0].scaled_mad == 0.0 && b1.rows[0].median == b1.raw[0].l0.unwrap()));

    let ball_fit = vol_fit(&Shape3D::Ball(Ball::new([0.0; 3], 1.0)).into(), &linspace(0.1, 1.0, 10), 200_000, 3, 1).unwrap();
    let (ball_ok, _) = within_3se(&ball_fit, &[4.0 * PI / 3.0, 4.0 * PI, 4.0 * PI, 4.0 * PI / 3.0]);
    checks.push(("unit ball Steiner fit", ball_ok));
    let disk_fit =
        vol_fit(&Shape2D::DiskUnion { disks: vec![Disk::new([-2.75, 0.0], 0.25), Disk::new([2.75, 0.0], 0.25)] }.into(), &linspace(0.1, 1.5, 10), 200_000, 2, 2)
            .unwrap();
    let (disk_ok, _) = within_3se(&disk_fit, &[PI / 8.0, PI, 2.0 * PI]);
    checks.push(("two-disk fit", disk_ok));

    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} identities hold", checks.len())
        } else {
            format!("{} of {} identities fail: {}", failed.len(), checks.len(), failed.join(", "))
        },
    )
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let report = |label: &'static str, o: Outcome, results: &mut Vec<(&'static str, Outcome)>| {
        println!("{} {label}: {} [{:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed().as_secs_f64());
        results.push((label, o));
    };

    report("criterion 1", two_disk_medians(), &mut results);

    let planar: Vec<(usize, ReplicationSummary)> = [100usize, 300, 1000]
        .into_iter()
        .map(|n| (n, study(Shape2D::two_disks().into(), 1.0, n, 200, &PLANAR_METHODS, 2 + n as u64)))
        .collect();
    report("criterion 2", bounded_error_trend(&planar), &mut results);
    report("criterion 3", mad_shrinkage(&planar), &mut results);
    report("criterion 4", asymptotic_variances(), &mut results);

    let cone: Shape = Shape3D::example_cone().into();
    let spatial = [Method::Mom3d, Method::Mle3d];
    let by_n: Vec<(usize, ReplicationSummary, ReplicationSummary)> = [5000usize, 20_000]
        .into_iter()
        .map(|n| {
            (
                n,
                study(cone.clone(), 1.3, n, 200, &spatial, 500 + n as u64),
                study(cone.clone(), 1.9, n, 200, &spatial, 600 + n as u64),
            )
        })
        .collect();
    report("criterion 5", cone_medians(&by_n[1].1, &by_n[1].2), &mut results);
    report("criterion 6", cone_mad_ordering(&by_n), &mut results);
    report("criterion 7", kolmogorov_oracle(), &mut results);
    let (displayed, corrected) = volume_formulas();
    report("criterion 8", displayed, &mut results);
    report("criterion 8 (corrected B(A,1))", corrected, &mut results);
    report("criterion 9", pathology(), &mut results);
    report("criterion 10", unit_identities(), &mut results);

    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(l, _)| *l).collect();
    println!("acceptance: {} passed, {} failed", results.len() - failed.len(), failed.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
