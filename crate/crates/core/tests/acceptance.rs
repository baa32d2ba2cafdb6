//! End-to-end acceptance checks. Each test prints one PASS/FAIL line; run
//! with `cargo test --test acceptance -- --nocapture` to see them.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use helixwg::cross_section::*;
use helixwg::effective_model::*;
use helixwg::geometry::*;
use helixwg::numerics::*;
use helixwg::straightened_tube::*;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, ok: bool, elapsed: Duration, budget: Duration, detail: &str) {
    let ok = ok && elapsed < budget;
    println!(
        "criterion {id}: {} ({:.2} s of {:.0} s) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_1_closed_form_geometry() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (r0, b0) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let t = rng.gen_range(-5.0..5.0);
        let h = PerturbedHelix::unperturbed(HelixParams::new(r0, b0).unwrap()).unwrap();
        let f = frenet_frame(&h, t).unwrap();
        let p2 = r0 * r0 * b0 * b0;
        let (k0, tau0) = (r0 * b0 * b0 / (1.0 + p2), b0 / (1.0 + p2));
        let q = (1.0 + p2).sqrt();
        let (s, c) = ((b0 * t).sin(), (b0 * t).cos());
        let t0 = Vector3::new(1.0 / q, -r0 * b0 * s / q, r0 * b0 * c / q);
        let n0 = Vector3::new(0.0, -c, -s);
        let b0v = Vector3::new(r0 * b0 / q, s / q, -c / q);
        worst = worst
            .max((f.kappa - k0).abs())
            .max((f.tau - tau0).abs())
            .max((f.tangent - t0).amax())
            .max((f.normal - n0).amax())
            .max((f.binormal - b0v).amax());
    }
    report("1", worst < 1e-10, start.elapsed(), secs(1), &format!("max deviation {worst:.2e}"));
}

#[test]
fn criterion_2_expansion_coefficients() {
    let start = Instant::now();
    let (r0, b0) = (1.0, 1.3);
    let helix = HelixParams::new(r0, b0).unwrap();
    let pert = |e: f64| PerturbationProfile::bump(1.0, 2.0, 1.0, e);
    let p2 = r0 * r0 * b0 * b0;
    let q = 1.0 + p2;
    let ladder = Ladder::default().points();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let t0 = 1.05 + 1.9 * i as f64 / 19.0;
        let s = t0 * q.sqrt();
        let [d, dd, ddd, _] = pert(1.0).delta_jet(t0);
        let kappa1 = ((b0 * b0 - r0 * r0 * b0.powi(4)) * d - q * ddd) / (q * q);
        let tau1 = -2.0 * (r0 * r0 * b0.powi(4) * d + q * ddd) / (r0 * b0 * q * q);
        let tan1 = -dd / (r0 * b0 * q.sqrt());
        let at = |e: f64| {
            let c = PerturbedHelix::new(helix, pert(e)).unwrap();
            let t = arc_length_param(&c, s).unwrap();
            let (k, tau) = curvature_torsion(&c, t);
            (k, tau, ribbon_tilt(&c, s).unwrap().alpha.tan())
        };
        let k = extract_linear_coefficient(|e| Ok(at(e).0), &ladder, None).unwrap();
        let tau = extract_linear_coefficient(|e| Ok(at(e).1), &ladder, None).unwrap();
        let tan = extract_linear_coefficient(|e| Ok(at(e).2), &ladder, None).unwrap();
        for (got, want) in [(k.value, kappa1), (tau.value, tau1), (tan.value, tan1)] {
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    report("2", worst < 1e-4, start.elapsed(), secs(10), &format!("max relative error {worst:.2e}"));
}

#[test]
fn criterion_3_critical_pitch() {
    let start = Instant::now();
    let c = critical_pitch(TubeKind::Circular).unwrap();
    let r = critical_pitch(TubeKind::Ribbon).unwrap();
    let root5 = 5f64.sqrt();
    let ok = (c.from_coefficient - 1.0).abs() < 1e-3
        && (r.from_coefficient - root5).abs() < 1e-3
        && (c.from_exact_path - 1.0).abs() < 1e-2
        && (r.from_exact_path - root5).abs() < 1e-2;
    let detail = format!(
        "circular {:.6}/{:.6}, ribbon {:.6}/{:.6} (coefficient/exact)",
        c.from_coefficient, c.from_exact_path, r.from_coefficient, r.from_exact_path
    );
    report("3", ok, start.elapsed(), secs(30), &detail);
}

#[test]
fn criterion_4_binding_phase_diagram() {
    let start = Instant::now();
    // (kind, pitch, deformation that binds)
    let claims = [
        (TubeKind::Circular, 0.5, Deformation::Inflate),
        (TubeKind::Circular, 2.0, Deformation::Squeeze),
        (TubeKind::Ribbon, 1.0, Deformation::Inflate),
        (TubeKind::Ribbon, 3.0, Deformation::Squeeze),
    ];
    let mut ok = true;
    let mut ratios = Vec::new();
    for (kind, pitch, binding) in claims {
        for row in phase_diagram(kind, &[pitch], 1e-3, true).unwrap() {
            let expect = row.deformation == binding;
            ok &= row.binds == expect;
            if row.binds {
                let e = row.lowest_eigenvalue;
                let ratio = row.shallow_well_ratio.unwrap_or(f64::NAN);
                ok &= e.is_some_and(|e| e < 0.0) && (0.8..=1.2).contains(&ratio);
                ratios.push(ratio);
            }
        }
    }
    let detail = format!("shallow-well ratios {ratios:.4?}");
    report("4", ok && ratios.len() == 4, start.elapsed(), secs(120), &detail);
}

fn polygon(vertices: &[[f64; 2]]) -> Shape {
    Shape::Polygon {
        vertices: vertices.to_vec(),
    }
}

#[test]
fn criterion_5_energy_slope() {
    let start = Instant::now();
    let h = 0.05;
    let disc = |c: [f64; 2], t0: [f64; 2]| CrossSection::disc(c, 1.0, t0, h).unwrap();
    let square = polygon(&[[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]);
    let rect = polygon(&[[-1.0, -0.6], [1.0, -0.6], [1.0, 0.6], [-1.0, 0.6]]);
    let tri = polygon(&[[-1.0, -0.8], [1.0, -0.8], [0.0, 1.0]]);
    let hex: Vec<[f64; 2]> = (0..6).map(|k| [(k as f64 * PI / 3.0).cos(), (k as f64 * PI / 3.0).sin()]).collect();
    let pent: Vec<[f64; 2]> = (0..5)
        .map(|k| [(0.3 + k as f64 * 0.4 * PI).cos(), (0.3 + k as f64 * 0.4 * PI).sin()])
        .collect();
    let cases = vec![
        (disc([0.0, 0.0], [0.0, 0.0]), 0.0),
        (disc([0.0, 0.0], [0.5, 0.0]), 1.0),
        (disc([0.0, 0.0], [0.3, 0.4]), 2.0),
        (disc([0.2, -0.1], [0.0, 0.0]), 1.5),
        (CrossSection::new(square.clone(), [0.0, 0.0], h).unwrap(), 1.0),
        (CrossSection::new(square, [0.5, 0.2], h).unwrap(), 0.5),
        (CrossSection::new(rect.clone(), [0.0, 0.0], h).unwrap(), 1.0),
        (CrossSection::new(rect, [0.8, 0.3], h).unwrap(), 0.3),
        (CrossSection::new(tri.clone(), [0.0, -0.2], h).unwrap(), 1.0),
        (CrossSection::new(tri, [0.5, -0.6], h).unwrap(), 0.5),
        (CrossSection::new(polygon(&hex), [0.0, 0.0], h).unwrap(), 2.0),
        (CrossSection::new(polygon(&pent), [0.1, 0.1], h).unwrap(), 1.0),
    ];
    let mut ok = true;
    let mut slopes = Vec::new();
    for (cs, beta) in &cases {
        match energy_slope(cs, *beta) {
            Ok(e) => {
                ok &= e.value < 0.0;
                slopes.push(e.value);
            }
            Err(e) => {
                println!("  slope failed for {:?} beta {beta}: {e}", cs.shape);
                ok = false;
            }
        }
    }
    let j01: f64 = 2.404_825_557_695_773;
    let centered = energy_slope(&disc([0.0, 0.0], [0.0, 0.0]), 1.0).unwrap().value;
    let rel = (centered / (-2.0 * j01 * j01) - 1.0).abs();
    ok &= rel < 0.01;
    let detail = format!("{} configurations negative, centered disc off by {:.3}%", slopes.len(), 100.0 * rel);
    report("5", ok && slopes.len() == cases.len(), start.elapsed(), secs(120), &detail);
}

fn base_tube() -> TubeConfig {
    TubeConfig {
        cross_section: CrossSection::disc([0.0, 0.0], 1.0, [0.5, 0.0], 0.09).unwrap(),
        theta_rate: 1.0,
        alpha_profile: AlphaProfile::tent(0.1, 1.0),
        s_box: 8.0,
        s_spacing: 0.2,
        memory_cap: DEFAULT_MEMORY_CAP,
    }
}

#[test]
fn criterion_6_protrusion_binds() {
    let start = Instant::now();
    let cs = CrossSection::disc([0.0, 0.0], 1.0, [0.5, 0.0], 0.05).unwrap();
    let s0 = 1.0;
    let e1 = energy_slope(&cs, 1.0).unwrap().value;
    let mut ratios = Vec::new();
    let mut ok_a = true;
    for eps in [1e-3, 2e-3, 5e-3, 1e-2] {
        let c = TubeConfig {
            cross_section: cs.clone(),
            theta_rate: 1.0,
            alpha_profile: AlphaProfile::tent(eps, s0),
            s_box: 2.0,
            s_spacing: 0.05,
            memory_cap: DEFAULT_MEMORY_CAP,
        };
        let psi = trial_function(&c, s0, eps, eps * eps, TailPolicy::Analytic).unwrap();
        let g = variational_gap(&c, &psi).unwrap();
        let ratio = g.gap / (eps * e1 * s0 * s0);
        ok_a &= g.gap < 0.0 && (ratio - 1.0).abs() < 0.15;
        ratios.push(ratio);
    }
    let r = refinement_check(&base_tube(), 1.5, 0.5).unwrap();
    let ok_b = r.coarse_eigenvalue < r.coarse_threshold
        && r.fine_eigenvalue < r.fine_threshold
        && r.relative_depth_shift < 0.1;
    let detail = format!(
        "(a) gap/(eps E1 s0^2) = {ratios:.3?}; (b) depth {:.5} -> {:.5}, shift {:.1}%",
        r.coarse_threshold - r.coarse_eigenvalue,
        r.fine_threshold - r.fine_eigenvalue,
        100.0 * r.relative_depth_shift
    );
    report("6", ok_a && ok_b, start.elapsed(), secs(600), &detail);
}

/// `J_m(x) = π⁻¹∫₀^π cos(mτ − x sin τ) dτ` by the trapezoidal rule, which is
/// spectrally accurate for this periodic integrand.
fn bessel_j(m: u32, x: f64) -> f64 {
    let n = 400;
    let h = PI / n as f64;
    let sum: f64 = (0..=n)
        .map(|k| {
            let t = k as f64 * h;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            w * (m as f64 * t - x * t.sin()).cos()
        })
        .sum();
    sum * h / PI
}

/// First `count` positive zeros of `J_m`, bracketed on a 0.05 scan.
fn bessel_zeros(m: u32, count: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut a = 0.5 + m as f64;
    while zeros.len() < count {
        let b = a + 0.05;
        if bessel_j(m, a).signum() != bessel_j(m, b).signum() {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if bessel_j(m, lo).signum() == bessel_j(m, mid).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        a = b;
    }
    zeros
}

fn smooth_field(p: [f64; 2], c: [f64; 2]) -> f64 {
    let r2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
    (1.0 - r2).max(0.0).powi(2) * (1.0 + 0.5 * p[0] - 0.3 * p[1] + 0.2 * p[0] * p[1])
}

#[test]
fn criterion_7_oracle_equivalences() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // scaled path against direct assembly on ω(α)
    let h = 0.05;
    let mut worst_scaling = 0.0f64;
    for _ in 0..50 {
        let c = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
        let t0 = [c[0] + rng.gen_range(-0.4..0.4), c[1] + rng.gen_range(-0.4..0.4)];
        let alpha = rng.gen_range(0.8..1.25);
        let beta = rng.gen_range(0.0..2.0);
        let cs = CrossSection::disc(c, 1.0, t0, h).unwrap();
        let g = master_grid(&cs).unwrap();
        let u: Vec<f64> = g.points().map(|p| smooth_field(p, c)).collect();
        let scaled = transverse_form_value(&cs, alpha, beta, &u).unwrap();
        let direct = direct_form_value(&cs, alpha, beta, &|p| smooth_field(p, c)).unwrap();
        worst_scaling = worst_scaling.max((scaled - direct).abs() / scaled / (h * h));
    }

    // straightened form at α ≡ 1 against the helical form
    let gauge = |h: f64| {
        let c = TubeConfig {
            cross_section: CrossSection::disc([0.0, 0.0], 1.0, [0.0, 0.0], h).unwrap(),
            theta_rate: 1.0,
            alpha_profile: AlphaProfile::Flat,
            s_box: 1.0,
            s_spacing: h,
            memory_cap: DEFAULT_MEMORY_CAP,
        };
        let grid = master_grid(&c.cross_section).unwrap();
        let nodes = c.s_nodes();
        let field: Vec<Vec<f64>> = nodes
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let end = i == 0 || i + 1 == nodes.len();
                grid.points()
                    .map(|p| if end { 0.0 } else { (1.0 - s * s).powi(2) * smooth_field(p, [0.0, 0.0]) * (1.0 + 0.4 * s * p[1]) })
                    .collect()
            })
            .collect();
        let (q, _) = tube_form_value(&c, &grid, &field).unwrap();
        let qh = helical_form_value(&c, &grid, &field).unwrap();
        (q - qh).abs() / qh
    };
    let (g1, g2) = (gauge(0.08), gauge(0.04));
    let gauge_order = (g1 / g2).log2();
    let ok_gauge = g1 < 0.08 * 0.08 && g2 < 0.04 * 0.04 && gauge_order > 1.8;

    // centred disc against Bessel zeros: j²_{m,n} + β²m², doubled for m ≠ 0
    let zeros: Vec<Vec<f64>> = (0..4).map(|m| bessel_zeros(m, 2)).collect();
    let mut ok_bessel = true;
    let mut worst_bessel = 0.0f64;
    for beta in [0.0, 0.7, 1.5] {
        let mut oracle: Vec<f64> = Vec::new();
        for (m, zs) in zeros.iter().enumerate() {
            for z in zs {
                let e = z * z + beta * beta * (m * m) as f64;
                oracle.push(e);
                if m > 0 {
                    oracle.push(e);
                }
            }
        }
        oracle.sort_by(f64::total_cmp);
        let spectrum = |h: f64| {
            let cs = CrossSection::disc([0.0, 0.0], 1.0, [0.0, 0.0], h).unwrap();
            let (_, op) = assemble_transverse_operator(&cs, 1.0, beta).unwrap();
            smallest_eigenpairs(&op, 5, 1e-9).unwrap().eigenvalues
        };
        let (coarse, fine) = (spectrum(0.05), spectrum(0.025));
        for i in 0..5 {
            let extrapolated = 2.0 * fine[i] - coarse[i];
            let err = (extrapolated - oracle[i]).abs();
            ok_bessel &= err <= (fine[i] - coarse[i]).abs();
            worst_bessel = worst_bessel.max(err / oracle[i]);
        }
    }
    let ok = worst_scaling < 5.0 && ok_gauge && ok_bessel;
    let detail = format!(
        "scaling max |Δ|/h² = {worst_scaling:.3}; gauge {g1:.2e} -> {g2:.2e} (order {gauge_order:.2}); Bessel max rel {worst_bessel:.2e}"
    );
    report("7", ok, start.elapsed(), secs(120), &detail);
}

#[test]
fn criterion_8_ddot_delta_null() {
    let start = Instant::now();
    let helix = HelixParams::new(1.0, 1.3).unwrap();
    let bump = PerturbationProfile::bump(1.0, 2.0, 1.0, 1e-3);
    let plateau = PerturbationProfile {
        shape: ProfileShape::Plateau { flat: 0.4 },
        ..bump
    };
    let parabolic = PerturbationProfile {
        shape: ProfileShape::Parabolic,
        ..bump
    };
    let mut smooth = 0.0f64;
    let mut rough = f64::INFINITY;
    for kind in TubeKind::ALL {
        smooth = smooth
            .max(ddot_delta_null_check(kind, &helix, &bump).abs())
            .max(ddot_delta_null_check(kind, &helix, &plateau).abs());
        rough = rough.min(ddot_delta_null_check(kind, &helix, &parabolic).abs());
    }
    let detail = format!("C2 profiles {smooth:.2e}, parabolic {rough:.3}");
    report("8", smooth < 1e-8 && rough > 1e-3, start.elapsed(), secs(5), &detail);
}
