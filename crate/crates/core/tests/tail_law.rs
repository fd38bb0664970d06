use std::f64::consts::PI;

use evanescent::aperture::{tail_probability, ApertureProfile};

/// Large-`u` expansion of `2∫_u^∞ |F(t; a = 1)|² dt`.
fn tail_expansion(u: f64) -> f64 {
    let (s, c) = u.sin_cos();
    4.0 * PI * (1.0 / (3.0 * u.powi(3)) + 2.0 * PI * PI / (5.0 * u.powi(5)) - s / u.powi(4) + 4.0 * c / u.powi(5))
}

#[test]
fn matches_asymptotic_expansion() {
    for u in [20.0, 50.0, 73.3, 100.0, 250.0, 500.0, 1000.0] {
        let t = tail_probability(u, 1.0).unwrap();
        let rel = (t.numeric / tail_expansion(u) - 1.0).abs();
        assert!(rel < 50.0 / u.powi(3), "u={u}: rel {rel}");
    }
}

#[test]
fn depends_on_product_only() {
    let a = tail_probability(100.0, 1.0).unwrap().numeric;
    let b = tail_probability(40.0, 2.5).unwrap().numeric;
    assert!((a - b).abs() < 1e-12 * a);
}

#[test]
fn whole_line_is_normalized() {
    for a in [0.3, 1.0, 7.0] {
        let n = ApertureProfile::single_slit(a).unwrap().norm().unwrap();
        assert!((n - 1.0).abs() < 1e-12, "a={a}: {n}");
    }
}

#[test]
fn cubic_slope() {
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
    assert!((slope + 3.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn prefactor_is_half_the_quoted_one() {
    let t = tail_probability(1e4, 1.0).unwrap();
    assert!((t.ratio - 0.5).abs() < 1e-3, "{}", t.ratio);
}
