//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::{cosine_transform_trapezoid, energy_balance_residual, slit_tail_by_parts, Cx, Fx};
use evanescent::aperture::{tail_probability, ApertureProfile};
use evanescent::mode_spectrum::{decay_depth, Mode};
use evanescent::nearfield::field_at;
use evanescent::probe::{absorption_probability, high_kx_limit, overlap_integral, scenario_section2_with, GaussianPacket, Section2Inputs};
use evanescent::quadrature::{integrate, integrate_semi_infinite, QuadOptions};
use evanescent::quantities::{ScaledUnits, CODATA};
use evanescent::recoil::{
    critical_threshold, energy_balance, entangled_term, gamow_lifetime, recoil_solution, screen_momentum_magnitude,
    ScreenSpec,
};
use evanescent::transfer::{absorbable_kx, ff_exit_momentum, selection_residual, transfer};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

const SCREEN_MASSES: [f64; 5] = [2.0, 10.0, 1e3, 1e6, 1e12];

/// 50 values of kx from 0 to 30, dense around the threshold.
fn kx_sweep(k_c: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..25).map(|i| k_c * i as f64 / 25.0).collect();
    v.extend((0..25).map(|i| k_c * (1.0 + 1e-6 * 10f64.powf(i as f64 * 7.5 / 24.0))));
    v
}

fn lifetime_example() -> Outcome {
    let units = ScaledUnits::new(7.5e6).unwrap();
    let screen = ScreenSpec::from_mass(0.1, &units).unwrap();
    let life = gamow_lifetime(10.0, &screen, &units).unwrap();
    let k0 = 7.5e6;
    let direct = 0.1 / (CODATA.hbar * k0 * 10.0 * k0);
    let tau = life.deep_s;
    let window = (1.6e18..=1.8e18).contains(&tau);
    let quote = (tau / 1.8e18 - 1.0).abs();
    let oracle = (tau / direct - 1.0).abs();
    let routes = (life.exact_s / life.asymptotic_s - 1.0).abs();
    outcome(
        window && quote <= 0.10 && oracle < 1e-12 && routes <= 1e-6,
        format!("tau = {tau:.6e} s, vs 1.8e18 {quote:.3}, vs M/(hbar k0 |kx|) {oracle:.1e}, exact vs asymptotic {routes:.2e}"),
    )
}

fn spread_example() -> Outcome {
    let r = scenario_section2_with(&Section2Inputs::default()).unwrap();
    let t = 0.1 / (1e-3 * CODATA.c);
    let dz = 1e-7;
    let spread = (CODATA.hbar * t / (2.0 * CODATA.electron_mass * dz * dz)).hypot(1.0);
    let oracle = (r.spread_ratio / spread - 1.0).abs();
    let window = (1.5e3..=2.0e3).contains(&r.spread_ratio);
    let quote = (r.quoted_spread_ratio / r.spread_ratio - 1.0).abs();
    outcome(
        window && r.exceeds_three_orders && quote <= 0.25 && oracle < 1e-12 && (r.flight_time_s / t - 1.0).abs() < 1e-15,
        format!(
            "t = {:.4e} s, ratio {:.1} (oracle {oracle:.1e}), flag {}, 1.5e3 off by {quote:.3}; {:.1} at 3e-7 s",
            r.flight_time_s, r.spread_ratio, r.exceeds_three_orders, r.spread_ratio_at_quoted_time
        ),
    )
}

fn four_digits(v: f64) -> String {
    format!("{v:.3e}")
}

fn decay_depth_convention() -> Outcome {
    let r = scenario_section2_with(&Section2Inputs::default()).unwrap();
    let exact = 1.0 / (2.0 * PI * 24f64.sqrt());
    let reduced = 1.0 / 24f64.sqrt();
    let lib = decay_depth(5.0).unwrap() / (2.0 * PI);
    let ok = four_digits(r.z_d_exact_over_lambda0) == four_digits(exact)
        && four_digits(lib) == four_digits(exact)
        && four_digits(r.z_d_reduced_over_lambda0) == four_digits(reduced)
        && four_digits(exact) == "3.249e-2"
        && format!("{:.1}", r.z_d_reduced_over_lambda0) == "0.2";
    outcome(
        ok,
        format!("exact {} lambda0, reduced {} lambda0", four_digits(r.z_d_exact_over_lambda0), four_digits(r.z_d_reduced_over_lambda0)),
    )
}

fn root_validity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let mut cases = 0;
    for &k_m in &SCREEN_MASSES {
        let s = ScreenSpec::new(k_m).unwrap();
        let k_c = critical_threshold(&s).k_c;
        for kx in kx_sweep(k_c).into_iter().chain((1..=10).map(|i| 3.0 * i as f64)).take(50) {
            let sol = recoil_solution(kx, &s).unwrap();
            worst = worst.max(energy_balance(kx, sol.k_tilde, &s).residual);
            let k = Cx::new(Fx::from_f64(sol.k_tilde.re), Fx::from_f64(sol.k_tilde.im));
            let res = energy_balance_residual(&Fx::from_f64(kx), &Fx::from_f64(k_m), &k);
            worst_oracle = worst_oracle.max(res.norm().to_f64());
            cases += 1;
        }
    }
    outcome(
        cases == 250 && worst < 1e-10 && worst_oracle < 1e-10,
        format!("{cases} cases, worst residual {worst:.2e}, extended-precision substitution {worst_oracle:.2e}"),
    )
}

fn energy_ledger() -> Outcome {
    let eps = f64::EPSILON;
    let mut worst_sum: f64 = 0.0;
    let mut worst_width: f64 = 0.0;
    let mut worst_im: f64 = 0.0;
    let mut worst_factor: f64 = 0.0;
    let mut ok = true;
    for &k_m in &SCREEN_MASSES {
        let s = ScreenSpec::new(k_m).unwrap();
        let k_c = critical_threshold(&s).k_c;
        for kx in kx_sweep(k_c).into_iter().chain((1..=10).map(|i| 3.0 * i as f64)).take(50) {
            let sol = recoil_solution(kx, &s).unwrap();
            let sum = (sol.eps_real + sol.screen_energy - 1.0).abs();
            let width = (sol.gamma - sol.screen_width).abs();
            let w = sol.combined_frequency();
            let t = 3.7;
            let term = entangled_term(kx, &s, [0.4, 0.1], [-0.2, 0.3], t).unwrap();
            let factor = (term.time_factor - Complex64::new(0.0, -t).exp()).norm();
            ok &= sum <= 4.0 * eps && width <= 4.0 * eps * sol.gamma.abs() && (w.re - 1.0).abs() <= 4.0 * eps && w.im.abs() < 1e-15;
            ok &= factor < 1e-14;
            worst_sum = worst_sum.max(sum);
            worst_width = worst_width.max(width / sol.gamma.abs().max(f64::MIN_POSITIVE));
            worst_im = worst_im.max(w.im.abs());
            worst_factor = worst_factor.max(factor);
        }
    }
    outcome(
        ok,
        format!(
            "|eps+E-1| <= {:.1} eps, gamma vs Gamma {:.1} eps, Im omega {worst_im:.1e}, time factor {worst_factor:.1e}",
            worst_sum / eps,
            worst_width / eps
        ),
    )
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..hi.log10()))
}

fn algebraic_identities() -> Outcome {
    const N: usize = 10_000;
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    let mut worst = [0f64; 5];
    for _ in 0..N {
        let k_m = log_uniform(&mut rng, 1.0, 1e12);
        let eta = critical_threshold(&ScreenSpec::new(k_m).unwrap()).eta;
        let lhs = (k_m + 1.0) / ((k_m + 2.0) * eta);
        let rhs = eta * (k_m + 1.0) / k_m;
        worst[0] = worst[0].max((lhs - rhs).abs() / rhs);

        let s = ScreenSpec::new(SCREEN_MASSES[rng.gen_range(0..SCREEN_MASSES.len())]).unwrap();
        let sol = recoil_solution(rng.gen_range(-30.0..30.0), &s).unwrap();
        let (a, b) = screen_momentum_magnitude(&sol);
        worst[1] = worst[1].max((a - b).norm() / a.norm().max(1.0));

        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let k0 = sign * log_uniform(&mut rng, 1e-6, 1e6);
        let k_mu = log_uniform(&mut rng, 1e-6, 1e9);
        worst[2] = worst[2].max(ff_exit_momentum(k0, k_mu).unwrap().closed_form_spread());
        let kx = absorbable_kx(k0, k_mu).unwrap();
        worst[3] = worst[3].max(selection_residual(k0, k_mu, kx).abs());
        let t = transfer(k0, k_mu, None).unwrap();
        let d = t.kz_transferred * t.kz_transferred + t.kx_selected * t.kx_selected - 1.0;
        worst[4] = worst[4].max(d.norm() / (t.kx_selected * t.kx_selected));
    }
    outcome(
        worst.iter().all(|&w| w < 1e-12),
        format!(
            "{N} cases each: threshold forms {:.1e}, screen momentum routes {:.1e}, exit momentum {:.1e}, selection {:.1e}, kz^2+kx^2 {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

/// The overlap integral straight from its definition.
fn overlap_by_quadrature(chi: f64, sigma: f64, z0: f64) -> f64 {
    let f = |z: f64| (-0.5 * (sigma * (z - z0)).powi(2) - chi * z).exp();
    let opts = QuadOptions::with_tolerance(0.0, 1e-13);
    let width = 1.0 / sigma;
    let mut cuts = vec![0.0];
    for c in [z0 - 8.0 * width, z0, z0 + 8.0 * width, 40.0 / chi] {
        if c > 0.0 {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(f, w[0], w[1], &opts.panels(8)).unwrap().value;
    }
    total + integrate_semi_infinite(f, *cuts.last().unwrap(), &opts).unwrap().value
}

fn absorption_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for chi in [0.2, 1.0, 24f64.sqrt(), 30.0] {
        for e in 0..=18 {
            let sigma = chi * 10f64.powf(-6.0 + 0.5 * e as f64);
            for zc in [0.0, 0.3, 1.0, 3.0, 10.0, 25.0, 50.0] {
                let z0 = zc / chi;
                let quad = overlap_by_quadrature(chi, sigma, z0);
                worst = worst.max((overlap_integral(chi, sigma, z0) - quad).abs() / quad);
            }
        }
    }
    // sigma -> 0 at fixed z0 chi = 1, first-order bound with C = 1
    let p = ApertureProfile::single_slit(1.0).unwrap();
    let mut bound_ok = true;
    let mut orders = Vec::new();
    for kx in [1.5f64, 5.0, 20.0] {
        let chi = ((kx - 1.0) * (kx + 1.0)).sqrt();
        let lim = high_kx_limit(kx, &p).unwrap().exact;
        let rel = |ratio: f64| {
            let g = GaussianPacket::from_sigma(1.0 / chi, ratio * chi, 0.0).unwrap();
            (absorption_probability(kx, &g, &p).unwrap() / lim - 1.0).abs()
        };
        let (r1, r2) = (rel(1e-2), rel(1e-4));
        bound_ok &= r1 <= 1e-2 && r2 <= 1e-4;
        orders.push((r1.ln() - r2.ln()) / (1e-2f64.ln() - 1e-4f64.ln()));
    }
    let rate_ok = orders.iter().all(|&o| o >= 1.0);
    outcome(
        worst < 1e-10 && bound_ok && rate_ok,
        format!(
            "worst closed form vs quadrature {worst:.2e} over 532 points; observed order in sigma/chi {}",
            orders.iter().map(|o| format!("{o:.2}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn near_field() -> Outcome {
    let mut worst: f64 = 0.0;
    for w in [0.6, 1.0, 2.5] {
        let p = ApertureProfile::gaussian(w).unwrap();
        for x in [0.0, 0.4, 1.3, 3.0] {
            let oracle = cosine_transform_trapezoid(|k| p.amplitude(k), x, 60.0 / w, 1e-3);
            let got = field_at(x, 0.0, &p).unwrap().psi_total;
            worst = worst.max((got.re - oracle).abs() / oracle.abs().max(1e-3)).max(got.im.abs());
        }
    }
    let slit = ApertureProfile::single_slit(1.0).unwrap();
    for x in [0.0, 0.2, 0.3, 0.8, 1.3] {
        let oracle = cosine_transform_trapezoid(|k| slit.amplitude(k), x, 2000.0, 4e-3) + slit_tail_by_parts(x, 1.0, 2000.0);
        let got = field_at(x, 0.0, &slit).unwrap().psi_total.re;
        worst = worst.max((got - oracle).abs() / oracle.abs().max(1.0));
    }
    let mut ratio: f64 = 0.0;
    for x in [0.0, 0.5, 1.0] {
        let s = field_at(x, 50.0, &slit).unwrap();
        ratio = ratio.max(s.psi_cw.norm() / s.psi_rw.norm());
    }
    let z0_ok = worst < 1e-8;
    let far_ok = ratio < 1e-10;
    outcome(
        z0_ok && far_ok,
        format!(
            "z = 0 vs cosine-transform oracle {worst:.1e} ({}); CW/RW at z = 50 is {ratio:.2e} ({})",
            if z0_ok { "ok" } else { "fails" },
            if far_ok { "ok" } else { "fails 1e-10: crawling part decays as 1/z^2" }
        ),
    )
}

fn tail_law() -> Outcome {
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let u = 50.0 * 10f64.powf(i as f64 / 20.0);
            (u.ln(), tail_probability(u, 1.0).unwrap().numeric.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let far = tail_probability(1e4, 1.0).unwrap();
    outcome(
        (slope + 3.0).abs() <= 0.05,
        format!(
            "slope {slope:.4} over [50, 500]; prefactor {:.4} x (8/3)pi at a k' = 1e4 (recorded, not asserted)",
            far.ratio
        ),
    )
}

fn fixed_screen_reduction() -> Outcome {
    let s = ScreenSpec::new(1e12).unwrap();
    let mut worst: f64 = 0.0;
    for kx in [0.5, 2.0, 5.0, 10.0] {
        let free = recoil_solution(kx, &s).unwrap().kz_tilde;
        let fixed = Mode::fixed(kx).kz;
        let scale = fixed.norm();
        worst = worst.max((free.re - fixed.re).abs() / scale).max((free.im - fixed.im).abs() / scale);
    }
    outcome(worst <= 1e-6, format!("worst component difference {worst:.2e} of |kz|"))
}

fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let runs = [
        ("scenario-section2", "section2.toml"),
        ("scenario-section5", "section5.toml"),
        ("lifetime", "section5.toml"),
        ("recoil", "section5.toml"),
        ("field", "section5.toml"),
    ];
    let mut ok = true;
    let mut bytes = 0;
    for (cmd, file) in runs {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_evanescent"))
                .args([cmd, "--config"])
                .arg(dir.join(file))
                .output()
                .unwrap()
        };
        let (a, b) = (once(), once());
        ok &= a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
        bytes += a.stdout.len();
    }
    outcome(ok, format!("{} runs twice, {bytes} bytes compared", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("heavy-screen lifetime example", lifetime_example),
        ("packet spread example", spread_example),
        ("decay-depth conventions", decay_depth_convention),
        ("recoil root validity", root_validity),
        ("energy ledger", energy_ledger),
        ("algebraic identities", algebraic_identities),
        ("absorption closed form and small-sigma limit", absorption_closed_form),
        ("near-field reconstruction", near_field),
        ("tail probability law", tail_law),
        ("fixed-screen reduction", fixed_screen_reduction),
        ("CLI determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let r = check();
        if !r.passed {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if r.passed { "PASS" } else { "FAIL" }, i + 1, r.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1} s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
