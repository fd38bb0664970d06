//! Relativistic kinematics of a massive probe absorbing a crawling photon on a
//! fixed screen.
//!
//! Units: momenta in `k0`, energies in `ħ c k0`, so the photon brings energy 1.
//! The probe arrives along x with momentum `K0` and Compton wavenumber `K_μ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Energy and momentum of the probe. `momentum_z` may be complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeState {
    pub omega: f64,
    #[serde(rename = "Kx")]
    pub momentum_x: f64,
    #[serde(rename = "Kz")]
    pub momentum_z: Complex64,
    #[serde(rename = "K_mu")]
    pub k_mu: f64,
}

impl ProbeState {
    /// Free probe moving along x.
    pub fn input(k0_ratio: f64, k_mu: f64) -> Self {
        ProbeState {
            omega: k0_ratio.hypot(k_mu),
            momentum_x: k0_ratio,
            momentum_z: Complex64::new(0.0, 0.0),
            k_mu,
        }
    }

    /// `|Ω² - K_x² - K_z² - K_μ²|` relative to the largest of the four terms,
    /// complex `K_z` included.
    pub fn on_shell_residual(&self) -> f64 {
        let kz2 = self.momentum_z * self.momentum_z;
        let terms = [
            self.omega * self.omega,
            self.momentum_x * self.momentum_x,
            kz2.norm(),
            self.k_mu * self.k_mu,
        ];
        let lhs = Complex64::new(terms[0] - terms[1] - terms[3], 0.0) - kz2;
        lhs.norm() / largest(&terms)
    }
}

fn largest(terms: &[f64]) -> f64 {
    terms.iter().fold(f64::MIN_POSITIVE, |m, t| m.max(t.abs()))
}

fn nondegenerate(k0_ratio: f64, k_mu: f64) -> Result<()> {
    if k0_ratio == 0.0 {
        return Err(Error::Degenerate(
            "K0 = 0: a probe at rest selects no definite kx at fixed photon frequency".into(),
        ));
    }
    if !(k0_ratio.is_finite() && k_mu.is_finite() && k_mu >= 0.0) {
        return Err(Error::domain(
            "transfer",
            format!("need finite K0 and K_mu >= 0, got K0 = {k0_ratio}, K_mu = {k_mu}"),
        ));
    }
    Ok(())
}

/// The only `k_x` a probe with `K0` can absorb: `sign(K0) √(1 + K_μ²/K0²)`.
pub fn absorbable_kx(k0_ratio: f64, k_mu: f64) -> Result<f64> {
    nondegenerate(k0_ratio, k_mu)?;
    Ok(k0_ratio.signum() * k0_ratio.hypot(k_mu) / k0_ratio.abs())
}

/// `|k_x| - 1 = r²/(√(1 + r²) + 1)` with `r = K_μ/K0`; stays positive when
/// `|k_x|` itself rounds to 1 for a very fast probe.
pub fn absorbable_kx_excess(k0_ratio: f64, k_mu: f64) -> Result<f64> {
    nondegenerate(k0_ratio, k_mu)?;
    let r = k_mu / k0_ratio;
    Ok(r * r / (r.hypot(1.0) + 1.0))
}

/// `k̃_z = i K_μ/|K0|`, decaying into the transmission side.
pub fn transferred_kz(k0_ratio: f64, k_mu: f64) -> Result<Complex64> {
    nondegenerate(k0_ratio, k_mu)?;
    Ok(Complex64::new(0.0, k_mu / k0_ratio.abs()))
}

/// `(Ω0 + 1)² - (K0 + k_x)² - (1 - k_x²) - K_μ²`, relative to its largest term.
pub fn selection_residual(k0_ratio: f64, k_mu: f64, kx: f64) -> f64 {
    let big = k0_ratio.hypot(k_mu) + 1.0;
    let terms = [big * big, (k0_ratio + kx).powi(2), (1.0 - kx) * (1.0 + kx), k_mu * k_mu];
    (terms[0] - terms[1] - terms[2] - terms[3]) / largest(&terms)
}

/// Probe state right after absorbing the selected photon.
pub fn post_absorption_state(k0_ratio: f64, k_mu: f64) -> Result<ProbeState> {
    let kx = absorbable_kx(k0_ratio, k_mu)?;
    let kz = transferred_kz(k0_ratio, k_mu)?;
    Ok(ProbeState {
        omega: k0_ratio.hypot(k_mu) + 1.0,
        momentum_x: k0_ratio + kx,
        momentum_z: kz,
        k_mu,
    })
}

/// The input momentum `K0^(m)` at which grating order `m` is absorbed, or
/// `None` when that order is a running wave. Signed like `m`.
pub fn grating_match(m: i64, kd: f64, k_mu: f64) -> Option<f64> {
    let mk = m.unsigned_abs() as f64 * kd;
    if !(mk > 1.0) {
        return None;
    }
    Some(m.signum() as f64 * k_mu / ((mk - 1.0) * (mk + 1.0)).sqrt())
}

/// Far-field momentum magnitude, by three routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitMomentum {
    /// `√((Ω0 + 1)² - K_μ²)`.
    pub from_energy: f64,
    /// `√(K0² + 2√(K_μ² + K0²) + 1)`.
    pub from_input: f64,
    /// `√(K_x² + K_z²)` of the post-absorption state.
    pub from_intermediate: f64,
}

impl ExitMomentum {
    /// Relative difference of the two closed forms.
    pub fn closed_form_spread(&self) -> f64 {
        (self.from_energy - self.from_input).abs() / self.from_energy.max(self.from_input)
    }

    /// Relative difference of all three routes. The component route cancels
    /// when `K_μ ≫ |K0|`; see [`intermediate_residual`].
    pub fn max_relative_spread(&self) -> f64 {
        let v = [self.from_energy, self.from_input, self.from_intermediate];
        let hi = v.iter().cloned().fold(f64::MIN, f64::max);
        let lo = v.iter().cloned().fold(f64::MAX, f64::min);
        (hi - lo) / hi
    }
}

/// `|K_x² + K_z² - K_ff²|` of the post-absorption state, relative to the
/// largest of `K_x²`, `|K_z|²`, `K_ff²`.
pub fn intermediate_residual(state: &ProbeState, exit: &ExitMomentum) -> f64 {
    let kx2 = state.momentum_x * state.momentum_x;
    let kz2 = state.momentum_z * state.momentum_z;
    let ff2 = exit.from_energy * exit.from_energy;
    (Complex64::new(kx2 - ff2, 0.0) + kz2).norm() / largest(&[kx2, kz2.norm(), ff2])
}

pub fn ff_exit_momentum(k0_ratio: f64, k_mu: f64) -> Result<ExitMomentum> {
    let state = post_absorption_state(k0_ratio, k_mu)?;
    let omega0 = k0_ratio.hypot(k_mu);
    // Ω0 - K_μ = K0²/(Ω0 + K_μ) without cancellation
    let gap = k0_ratio * k0_ratio / (omega0 + k_mu);
    let from_energy = ((gap + 1.0) * (omega0 + 1.0 + k_mu)).sqrt();
    let from_input = (k0_ratio * k0_ratio + 2.0 * omega0 + 1.0).sqrt();
    let k2 = Complex64::new(state.momentum_x * state.momentum_x, 0.0) + state.momentum_z * state.momentum_z;
    Ok(ExitMomentum {
        from_energy,
        from_input,
        from_intermediate: k2.sqrt().re,
    })
}

/// One stage of the probe's history: input, near-field intermediate, far-field output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub label: String,
    pub omega: f64,
    /// Known for the first two stages only; the exit direction depends on the edge.
    pub momentum_x: Option<f64>,
    pub momentum_z: Option<Complex64>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferResiduals {
    pub selection: f64,
    pub on_shell: f64,
    /// `|k_z² + k_x² - 1| / max(1, k_x²)`.
    pub photon_dispersion: f64,
    /// The two closed forms for the exit momentum.
    pub exit_momentum_spread: f64,
    /// The exit momentum against the post-absorption components.
    pub intermediate: f64,
    /// `Ω - Ω0 - 1`.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub k0_ratio: f64,
    pub k_mu: f64,
    pub kx_selected: f64,
    pub kz_transferred: Complex64,
    pub input_state: ProbeState,
    pub final_state: ProbeState,
    pub ff_momentum: ExitMomentum,
    pub ff_momentum_magnitude: f64,
    /// Exit direction, supplied by the caller when known.
    pub ff_direction: Option<[f64; 3]>,
    pub stages: Vec<Stage>,
    pub residuals: TransferResiduals,
}

/// The whole absorption and exit sequence for one probe.
pub fn transfer(k0_ratio: f64, k_mu: f64, ff_direction: Option<[f64; 3]>) -> Result<TransferResult> {
    let kx = absorbable_kx(k0_ratio, k_mu)?;
    let kz = transferred_kz(k0_ratio, k_mu)?;
    let input = ProbeState::input(k0_ratio, k_mu);
    let fin = post_absorption_state(k0_ratio, k_mu)?;
    let ff = ff_exit_momentum(k0_ratio, k_mu)?;
    let stages = vec![
        Stage {
            label: "input".into(),
            omega: input.omega,
            momentum_x: Some(input.momentum_x),
            momentum_z: Some(input.momentum_z),
            magnitude: k0_ratio.abs(),
        },
        Stage {
            label: "intermediate, near field".into(),
            omega: fin.omega,
            momentum_x: Some(fin.momentum_x),
            momentum_z: Some(fin.momentum_z),
            magnitude: ff.from_input,
        },
        Stage {
            label: "output, far field".into(),
            omega: fin.omega,
            momentum_x: None,
            momentum_z: None,
            magnitude: ff.from_energy,
        },
    ];
    let residuals = TransferResiduals {
        selection: selection_residual(k0_ratio, k_mu, kx),
        on_shell: fin.on_shell_residual(),
        photon_dispersion: (kz * kz + kx * kx - 1.0).norm() / largest(&[1.0, kx * kx]),
        exit_momentum_spread: ff.closed_form_spread(),
        intermediate: intermediate_residual(&fin, &ff),
        energy: fin.omega - input.omega - 1.0,
    };
    Ok(TransferResult {
        k0_ratio,
        k_mu,
        kx_selected: kx,
        kz_transferred: kz,
        input_state: input,
        final_state: fin,
        ff_momentum: ff,
        ff_momentum_magnitude: ff.from_energy,
        ff_direction,
        stages,
        residuals,
    })
}
