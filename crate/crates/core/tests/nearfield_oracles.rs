mod common;

use common::{cosine_transform_trapezoid, slit_tail_by_parts};
use evanescent::aperture::ApertureProfile;
use evanescent::nearfield::{cw_envelope_bound, cw_fraction_profile, field_at, probability_current_x};

#[test]
fn gaussian_screen_field_matches_cosine_transform() {
    for w in [0.6, 1.0, 2.5] {
        let p = ApertureProfile::gaussian(w).unwrap();
        for x in [0.0, 0.4, 1.3, 3.0] {
            let oracle = cosine_transform_trapezoid(|k| p.amplitude(k), x, 60.0 / w, 1e-3);
            let got = field_at(x, 0.0, &p).unwrap().psi_total;
            assert!((got.re - oracle).abs() < 1e-8 * oracle.abs().max(1e-3), "w={w} x={x}: {} vs {oracle}", got.re);
            assert!(got.im.abs() < 1e-12);
        }
    }
}

#[test]
fn slit_screen_field_matches_cosine_transform() {
    let a = 1.0;
    let p = ApertureProfile::single_slit(a).unwrap();
    let k_max = 2000.0;
    for x in [0.0, 0.2, 0.3, 0.8, 1.3] {
        let head = cosine_transform_trapezoid(|k| p.amplitude(k), x, k_max, 4e-3);
        let oracle = head + slit_tail_by_parts(x, a, k_max);
        let got = field_at(x, 0.0, &p).unwrap().psi_total.re;
        let scale = oracle.abs().max(1.0);
        assert!((got - oracle).abs() < 1e-8 * scale, "x={x}: {got} vs {oracle}");
    }
}

#[test]
fn crawling_share_drops_with_height() {
    let p = ApertureProfile::single_slit(1.0).unwrap();
    let frac = |z: f64| {
        let s = field_at(0.0, z, &p).unwrap();
        s.psi_cw.norm() / s.psi_total.norm()
    };
    assert!(frac(5.0) < frac(0.1));

    let prof = cw_fraction_profile(0.0, &[0.0, 0.3, 3.0], &p).unwrap();
    assert!(prof[2].1 < prof[1].1);
    let direct = field_at(0.0, 0.0, &p).unwrap();
    assert_eq!(prof[0].1, direct.psi_cw.norm_sqr() / direct.psi_total.norm_sqr());
}

#[test]
fn crawling_part_far_law() {
    // modes near k = 1 dominate: ψ_cw ≈ 2F(1)cos(x)/z² for large z
    for p in [ApertureProfile::gaussian(1.0).unwrap(), ApertureProfile::single_slit(1.0).unwrap()] {
        let x: f64 = 0.5;
        let lead = 2.0 * p.amplitude(1.0) * x.cos();
        let mut last = f64::INFINITY;
        for z in [50.0, 100.0, 200.0, 400.0] {
            let cw = field_at(x, z, &p).unwrap().psi_cw.re;
            let rel = (cw * z * z / lead - 1.0).abs();
            assert!(rel < 10.0 / (z * z), "z={z}: {rel}");
            assert!(rel < last);
            last = rel;
        }
    }
}

#[test]
fn crawling_part_below_envelope() {
    let p = ApertureProfile::single_slit(1.0).unwrap();
    for z in [0.05, 0.5, 2.0, 8.0] {
        let bound = cw_envelope_bound(z, &p).unwrap();
        for x in [0.0, 0.7, 2.0] {
            let cw = field_at(x, z, &p).unwrap().psi_cw.norm();
            assert!(cw <= bound * (1.0 + 1e-10), "z={z} x={x}: {cw} > {bound}");
        }
    }
}

#[test]
fn linear_in_amplitude() {
    let p = ApertureProfile::single_slit(1.4).unwrap();
    let q = p.clone().scaled(-2.5);
    for (x, z) in [(0.0, 0.0), (0.4, 0.7), (2.0, 3.0)] {
        let a = field_at(x, z, &p).unwrap();
        let b = field_at(x, z, &q).unwrap();
        assert!((b.psi_total - a.psi_total * -2.5).norm() < 1e-12 * a.psi_total.norm().max(1.0));
    }
}

#[test]
fn current_odd_in_x_and_matches_finite_difference() {
    let p = ApertureProfile::single_slit(1.0).unwrap();
    let (x, z) = (2.0, 0.5);
    let j = probability_current_x(x, z, &p).unwrap();
    assert!(j != 0.0 && j.is_finite());
    let jm = probability_current_x(-x, z, &p).unwrap();
    assert!((j + jm).abs() < 1e-12 * j.abs());

    let h = 1e-4;
    let psi = field_at(x, z, &p).unwrap().psi_total;
    let d = (field_at(x + h, z, &p).unwrap().psi_total - field_at(x - h, z, &p).unwrap().psi_total) / (2.0 * h);
    let fd = (psi.conj() * d).im;
    assert!((j - fd).abs() < 1e-5 * j.abs(), "{j} vs {fd}");
}
