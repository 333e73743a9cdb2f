//! Rotations about the beam (Z) axis and the interference selection rule
//! they imply: two product kets can only interfere when their total beam-axis
//! projections agree.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angmom::TwiceInt;
use crate::compose::{Composer, PreparedState};
use crate::error::{Error, Result};
use crate::states::{Axis, CoupledState, ProductState, Superposition};

/// Relative tolerance for rotation invariance of composed cross sections.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// A pair of product kets `S = (M_A, M_B)` and `S' = (M_A', M_B')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChannelPairKey {
    pub s: (TwiceInt, TwiceInt),
    pub s_prime: (TwiceInt, TwiceInt),
}

impl ChannelPairKey {
    pub fn new(s: (TwiceInt, TwiceInt), s_prime: (TwiceInt, TwiceInt)) -> Self {
        ChannelPairKey { s, s_prime }
    }

    pub fn swapped(&self) -> Self {
        ChannelPairKey { s: self.s_prime, s_prime: self.s }
    }
}

/// `M_A + M_B == M_A' + M_B'`.
pub fn interference_allowed(key: &ChannelPairKey) -> bool {
    key.s.0 + key.s.1 == key.s_prime.0 + key.s_prime.1
}

/// `e^{i M γ}` for a doubled projection `M`.
fn beam_phase(m: TwiceInt, gamma: f64) -> Complex64 {
    Complex64::from_polar(1.0, m.as_f64() * gamma)
}

/// Active rotation by `gamma` about the beam axis.
pub trait BeamRotation: Sized {
    fn rotate_about_beam(&self, gamma: f64) -> Result<Self>;
}

fn require_z(axis: Axis) -> Result<()> {
    if axis != Axis::Z {
        return Err(Error::Axis("beam-axis rotation needs a Z-quantized state".into()));
    }
    Ok(())
}

impl BeamRotation for Superposition {
    fn rotate_about_beam(&self, gamma: f64) -> Result<Self> {
        require_z(self.axis())?;
        Ok(self.map_amplitudes(|l| beam_phase(l.m, gamma)))
    }
}

impl BeamRotation for ProductState {
    fn rotate_about_beam(&self, gamma: f64) -> Result<Self> {
        let a = self.atom_a().rotate_about_beam(gamma)?;
        let b = self.atom_b().rotate_about_beam(gamma)?;
        Ok(ProductState::from_parts_unchecked(a, b))
    }
}

impl BeamRotation for CoupledState {
    fn rotate_about_beam(&self, gamma: f64) -> Result<Self> {
        Ok(self.map_amplitudes(|l| beam_phase(l.m, gamma)))
    }
}

impl BeamRotation for PreparedState {
    fn rotate_about_beam(&self, gamma: f64) -> Result<Self> {
        Ok(match self {
            PreparedState::Single(s) => PreparedState::Single(s.rotate_about_beam(gamma)?),
            PreparedState::Product(p) => PreparedState::Product(p.rotate_about_beam(gamma)?),
            PreparedState::Coupled(c) => PreparedState::Coupled(c.rotate_about_beam(gamma)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    /// `max_γ |σ(γ) − σ(0)| / |σ(0)|` over both processes.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compose the state rotated by `gamma_samples` evenly spaced angles in
/// `[0, 2π)` and compare against the unrotated result.
pub fn verify_rotation_invariance(
    composer: &Composer<'_>,
    state: &PreparedState,
    gamma_samples: usize,
) -> Result<InvarianceReport> {
    let base = composer.compose(state)?;
    let mut max_deviation: f64 = 0.0;
    for k in 0..gamma_samples {
        let gamma = 2.0 * PI * k as f64 / gamma_samples as f64;
        let rotated = composer.compose(&state.rotate_about_beam(gamma)?)?;
        for (now, reference) in [(rotated.sigma_pi, base.sigma_pi), (rotated.sigma_ai, base.sigma_ai)] {
            let scale = if reference.abs() > 0.0 { reference.abs() } else { 1.0 };
            max_deviation = max_deviation.max((now - reference).abs() / scale);
        }
    }
    Ok(InvarianceReport { samples: gamma_samples, max_deviation, pass: max_deviation <= INVARIANCE_TOL })
}
