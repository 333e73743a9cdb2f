//! Control landscapes over the Hopf parameters `(η, ξ)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compose::{compose, ChannelTable, PreparedState, Process};
use crate::error::{Error, Result};
use crate::states::{hopf_state, ControlParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Pi,
    Ai,
    /// `σ_AI / σ_PI`
    Ratio,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Pi => "pi",
            Objective::Ai => "ai",
            Objective::Ratio => "ratio",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            Objective::Ratio => "",
            _ => " a.u.",
        }
    }
}

/// Grid over `η ∈ [0, π]` (endpoints included) and `ξ ∈ [0, 2π)`
/// (upper endpoint excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub eta_points: usize,
    pub xi_points: usize,
    pub objective: Objective,
}

impl GridSpec {
    pub fn new(eta_points: usize, xi_points: usize, objective: Objective) -> Result<Self> {
        if eta_points < 2 || xi_points < 2 {
            return Err(Error::Range(format!("grid {eta_points}x{xi_points} needs at least 2 points per axis")));
        }
        Ok(GridSpec { eta_points, xi_points, objective })
    }

    /// 181 × 361.
    pub fn default_for(objective: Objective) -> Self {
        GridSpec { eta_points: 181, xi_points: 361, objective }
    }

    pub fn eta(&self, i: usize) -> f64 {
        PI * i as f64 / (self.eta_points - 1) as f64
    }

    pub fn xi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.xi_points as f64
    }

    pub fn len(&self) -> usize {
        self.eta_points * self.xi_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Objective value of the prepared Hopf state at `params`.
pub fn evaluate(table: &ChannelTable, params: ControlParams, objective: Objective) -> Result<f64> {
    let state = PreparedState::Single(hopf_state(params)?);
    let r = compose(table, &state)?;
    match objective {
        Objective::Pi => Ok(r.sigma_pi),
        Objective::Ai => Ok(r.sigma_ai),
        Objective::Ratio => r.ratio_ai_pi(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandscapeResult {
    pub spec: GridSpec,
    /// Row-major, `η` outer and `ξ` inner.
    pub values: Vec<f64>,
    pub argmax: ControlParams,
    pub argmin: ControlParams,
    pub max: f64,
    pub min: f64,
    /// `max / min`; infinite when `min` is zero.
    pub control_factor: f64,
    /// Range the objective cannot leave for this table.
    pub channel_bounds: (f64, f64),
}

impl LandscapeResult {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.xi_points + j]
    }

    /// Plain-text summary. With `expected`, states whether that range is
    /// attainable from the table.
    pub fn report(&self, expected: Option<(f64, f64)>) -> String {
        let unit = self.spec.objective.unit();
        let mut out = String::new();
        let _ = writeln!(out, "objective: {}", self.spec.objective.name());
        let _ = writeln!(out, "grid: {} x {}", self.spec.eta_points, self.spec.xi_points);
        let _ =
            writeln!(out, "max: {:.6}{unit} at eta_rad={:.9}, xi_rad={:.9}", self.max, self.argmax.eta, self.argmax.xi);
        let _ =
            writeln!(out, "min: {:.6}{unit} at eta_rad={:.9}, xi_rad={:.9}", self.min, self.argmin.eta, self.argmin.xi);
        let _ = writeln!(out, "control factor: {:.6}", self.control_factor);
        let _ = writeln!(out, "channel bounds: [{:.6}, {:.6}]{unit}", self.channel_bounds.0, self.channel_bounds.1);
        if let Some((lo, hi)) = expected {
            let check = check_range(self.min, self.max, lo, hi);
            let verdict = match check {
                RangeCheck::Matches => "matches",
                RangeCheck::Inside => "lies inside",
                RangeCheck::NotReproducible => "NOT reproducible from",
            };
            let _ = writeln!(
                out,
                "expected range [{lo}, {hi}]{unit} {verdict} the attainable range [{:.6}, {:.6}]{unit}",
                self.min, self.max
            );
            if check == RangeCheck::NotReproducible {
                let _ = writeln!(
                    out,
                    "note: every grid value is a convex combination of channel values and stays within the channel bounds"
                );
            }
        }
        out
    }
}

/// Relation between a claimed range and an attained one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeCheck {
    /// Both endpoints agree within 1%.
    Matches,
    /// Claimed range is a subset of the attained one.
    Inside,
    NotReproducible,
}

pub fn check_range(min: f64, max: f64, lo: f64, hi: f64) -> RangeCheck {
    let close = |a: f64, b: f64| (a - b).abs() <= 0.01 * b.abs().max(a.abs());
    if close(lo, min) && close(hi, max) {
        RangeCheck::Matches
    } else if lo >= min && hi <= max {
        RangeCheck::Inside
    } else {
        RangeCheck::NotReproducible
    }
}

fn objective_bounds(table: &ChannelTable, objective: Objective) -> (f64, f64) {
    match objective {
        Objective::Pi => table.bounds(Process::Pi),
        Objective::Ai => table.bounds(Process::Ai),
        // mediant inequality: a ratio of like-weighted sums stays between
        // the extreme channel ratios
        Objective::Ratio => table
            .channels()
            .iter()
            .filter(|c| c.sigma_pi > 0.0)
            .map(|c| c.sigma_ai / c.sigma_pi)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r))),
    }
}

/// Evaluate the objective on every grid point.
///
/// Rows run in parallel on the current rayon pool; each value depends only
/// on its own grid point so the output does not depend on the thread count.
pub fn scan(table: &ChannelTable, spec: &GridSpec) -> Result<LandscapeResult> {
    let spec = GridSpec::new(spec.eta_points, spec.xi_points, spec.objective)?;
    let rows: Vec<Vec<f64>> = (0..spec.eta_points)
        .into_par_iter()
        .map(|i| {
            let eta = spec.eta(i);
            (0..spec.xi_points)
                .map(|j| evaluate(table, ControlParams { eta, xi: spec.xi(j) }, spec.objective))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = rows.into_iter().flatten().collect();

    let mut imax = 0;
    let mut imin = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[imax] {
            imax = k;
        }
        if v < values[imin] {
            imin = k;
        }
    }
    let at = |k: usize| ControlParams { eta: spec.eta(k / spec.xi_points), xi: spec.xi(k % spec.xi_points) };
    let (max, min) = (values[imax], values[imin]);
    Ok(LandscapeResult {
        spec,
        argmax: at(imax),
        argmin: at(imin),
        max,
        min,
        control_factor: if min > 0.0 { max / min } else { f64::INFINITY },
        channel_bounds: objective_bounds(table, spec.objective),
        values,
    })
}

/// [`scan`] on a dedicated pool of `threads` workers.
pub fn scan_with_threads(table: &ChannelTable, spec: &GridSpec, threads: usize) -> Result<LandscapeResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Range(format!("thread pool: {e}")))?;
    pool.install(|| scan(table, spec))
}

/// `σ_AI / σ_PI` over the grid.
pub fn ratio_surface(table: &ChannelTable, spec: &GridSpec) -> Result<LandscapeResult> {
    scan(table, &GridSpec { objective: Objective::Ratio, ..*spec })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Max,
    Min,
}

/// Relative gain a compass move must exceed to be accepted; keeps rounding
/// noise from walking across flat regions.
pub const COMPASS_MIN_GAIN: f64 = 1e-14;

impl Extremum {
    fn better(self, candidate: f64, best: f64) -> bool {
        let margin = COMPASS_MIN_GAIN * best.abs();
        match self {
            Extremum::Max => candidate > best + margin,
            Extremum::Min => candidate < best - margin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Refined {
    pub params: ControlParams,
    pub value: f64,
    pub evaluations: usize,
}

/// Initial compass step in radians.
pub const COMPASS_START_STEP: f64 = 0.05;
/// Compass search stops once the step drops below this.
pub const COMPASS_MIN_STEP: f64 = 1e-8;

fn wrap_xi(xi: f64) -> f64 {
    let w = xi.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Compass search in `(η, ξ)` with step halving; `ξ` wraps, `η` is clamped.
/// The returned value is never worse than the starting value.
pub fn refine_extremum(
    table: &ChannelTable,
    start: ControlParams,
    mode: Extremum,
    objective: Objective,
) -> Result<Refined> {
    let mut best = ControlParams::new(start.eta, start.xi)?;
    let mut best_value = evaluate(table, best, objective)?;
    let mut evaluations = 1;
    let mut step = COMPASS_START_STEP;

    while step >= COMPASS_MIN_STEP {
        let moves = [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)];
        let mut improved = false;
        for (de, dx) in moves {
            let trial = ControlParams { eta: (best.eta + de).clamp(0.0, PI), xi: wrap_xi(best.xi + dx) };
            if trial == best {
                continue;
            }
            let v = evaluate(table, trial, objective)?;
            evaluations += 1;
            if mode.better(v, best_value) {
                best = trial;
                best_value = v;
                improved = true;
                break;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(Refined { params: best, value: best_value, evaluations })
}

/// Central-difference gradient `(∂/∂η, ∂/∂ξ)` with step `h`.
pub fn objective_gradient(table: &ChannelTable, at: ControlParams, objective: Objective, h: f64) -> Result<(f64, f64)> {
    let f = |eta: f64, xi: f64| evaluate(table, ControlParams { eta, xi: wrap_xi(xi) }, objective);
    let (lo, hi) = ((at.eta - h).max(0.0), (at.eta + h).min(PI));
    let d_eta = (f(hi, at.xi)? - f(lo, at.xi)?) / (hi - lo);
    let d_xi = (f(at.eta, at.xi + h)? - f(at.eta, at.xi - h)?) / (2.0 * h);
    Ok((d_eta, d_xi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseOnlyFactor {
    /// `(η, max_ξ σ / min_ξ σ)` on the sampled `η` grid.
    pub curve: Vec<(f64, f64)>,
    pub eta_star: f64,
    pub factor: f64,
}

/// Control factor reachable with the phase `ξ` alone, at fixed `η`.
///
/// For diagonal tables `σ(ξ) = B(η) + A(η) cos ξ`, so the extremes sit at
/// `ξ = 0` and `ξ = π`. Infinite when the smaller of the two is zero.
pub fn phase_factor_at(table: &ChannelTable, eta: f64, objective: Objective) -> Result<f64> {
    let a = evaluate(table, ControlParams::new(eta, 0.0)?, objective)?;
    let b = evaluate(table, ControlParams::new(eta, PI)?, objective)?;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
}

/// Sample the phase-only factor on `eta_points` values of `η` and refine its
/// maximum over `η`.
pub fn phase_only_factor(table: &ChannelTable, objective: Objective, eta_points: usize) -> Result<PhaseOnlyFactor> {
    if eta_points < 2 {
        return Err(Error::Range("phase-only curve needs at least 2 eta points".into()));
    }
    let curve = (0..eta_points)
        .map(|i| {
            let eta = PI * i as f64 / (eta_points - 1) as f64;
            Ok((eta, phase_factor_at(table, eta, objective)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut eta_star, mut factor) = curve[0];
    for &(eta, f) in &curve[1..] {
        if f > factor {
            eta_star = eta;
            factor = f;
        }
    }
    if factor.is_finite() {
        let mut step = PI / (eta_points - 1) as f64;
        while step >= COMPASS_MIN_STEP {
            let mut improved = false;
            for d in [step, -step] {
                let eta = (eta_star + d).clamp(0.0, PI);
                let f = phase_factor_at(table, eta, objective)?;
                if f > factor {
                    eta_star = eta;
                    factor = f;
                    improved = true;
                    break;
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
    }
    Ok(PhaseOnlyFactor { curve, eta_star, factor })
}
