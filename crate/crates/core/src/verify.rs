//! The invariant suite behind `nuccr verify`.
//!
//! Every check reduces to a single worst-case number compared against a
//! tolerance. Reconciliation of alternative closed forms is carried alongside as
//! information only: those deviations are expected and do not fail the run.

use crate::ccr::{ccr_mixed, ccr_pure};
use crate::dirac::PhysParams;
use crate::error::Result;
use crate::pair::{self, Fault, ReconEntry};
use crate::single;
use crate::tensor::DensityMatrix;
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub p_over_m1: Vec<f64>,
    pub sin2_theta: f64,
    pub dm2_over_m1sq: f64,
    pub ml_over_m1: f64,
    /// Samples per time window, endpoints included.
    pub steps: usize,
    pub fault: Fault,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            p_over_m1: vec![0.1, 1.0, 10.0],
            sin2_theta: PhysParams::DEFAULT_SIN2_THETA,
            dm2_over_m1sq: PhysParams::DEFAULT_DM2_OVER_M1SQ,
            ml_over_m1: PhysParams::DEFAULT_ML_OVER_M1,
            steps: 400,
            fault: Fault::None,
        }
    }
}

impl VerifyOptions {
    pub fn params(&self, p_over_m1: f64) -> Result<PhysParams> {
        PhysParams::from_ratios(p_over_m1, self.sin2_theta, self.dm2_over_m1sq, self.ml_over_m1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Alternative closed forms against brute force, per momentum.
    pub reconciliation: Vec<(f64, Vec<ReconEntry>)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Running maximum of one residual.
struct Worst {
    name: String,
    tolerance: f64,
    max: f64,
}

impl Worst {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), tolerance, max: 0.0 }
    }

    fn see(&mut self, r: f64) {
        // NaN must fail the check, so it poisons the maximum
        if r.is_nan() || r.abs() > self.max {
            self.max = if r.is_nan() { f64::NAN } else { r.abs() };
        }
    }

    fn finish(self) -> Check {
        let pass = self.max <= self.tolerance;
        Check { name: self.name, max_residual: self.max, tolerance: self.tolerance, pass }
    }
}

/// `n` evenly spaced times on `[0, t_max]`.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut reconciliation = Vec::new();
    for &p in &opts.p_over_m1 {
        let params = opts.params(p)?;
        let times = time_grid(params.flavor_window(), opts.steps);
        checks.extend(single_checks(p, &params, &times)?);
        checks.extend(pair_checks(p, &params, &times, opts.fault)?);
        reconciliation.push((p, pair::reconcile(&params, &times)?.entries));
    }
    checks.extend(limit_checks(opts)?);
    Ok(VerifyReport { checks, reconciliation })
}

fn single_checks(p: f64, params: &PhysParams, times: &[f64]) -> Result<Vec<Check>> {
    let tag = |s: &str| format!("single.{s}[p={p}]");
    let mut norm = Worst::new(tag("norm"), tol::IDENTITY);
    let mut density = Worst::new(tag("flavor_closed_vs_brute"), tol::IDENTITY);
    let mut purity = Worst::new(tag("purity_closed_vs_brute"), tol::IDENTITY);
    let mut survival = Worst::new(tag("survival_closed_vs_brute"), tol::IDENTITY);
    let mut ccr = Worst::new(tag("flavor_ccr_residual"), tol::CCR_RESIDUAL);
    let mut spin = Worst::new(tag("spin_separable"), tol::IDENTITY);
    let spin_down = DensityMatrix::diagonal([single::SPIN], &[0.0, 1.0])?;
    for &t in times {
        let state = single::build_state(t, params)?;
        norm.see(state.norm() - 1.0);
        let reduced = state.reduced(&single::FLAVOR)?;
        let brute = single::FlavorDensity::from_reduced(&reduced)?;
        let closed = single::flavor_density_closed(t, params);
        density.see(closed.max_abs_diff(&brute));
        purity.see(single::flavor_purity_closed(t, params) - reduced.purity());
        survival.see(single::survival_probability(t, params) - brute.rho11);
        ccr.see(ccr_pure(&state, &single::FLAVOR)?.residual);
        spin.see(state.reduced(&[single::SPIN])?.max_abs_diff(&spin_down)?);
    }
    Ok(vec![norm.finish(), density.finish(), purity.finish(), survival.finish(), ccr.finish(), spin.finish()])
}

fn pair_checks(p: f64, params: &PhysParams, times: &[f64], fault: Fault) -> Result<Vec<Check>> {
    let tag = |s: &str| format!("pair.{s}[p={p}]");
    let mut norm = Worst::new(tag("norm"), tol::IDENTITY);
    let mut expansion = Worst::new(tag("expansion_vs_direct"), tol::IDENTITY);
    let mut spin = Worst::new(tag("spin_closed_vs_brute"), tol::IDENTITY);
    let mut diagonal = Worst::new(tag("spin_diagonal_constant"), tol::IDENTITY);
    let mut global = Worst::new(tag("spin_ccr_global_residual"), tol::CCR_RESIDUAL);
    let mut parties = Worst::new(tag("spin_ccr_parties_residual"), tol::CCR_RESIDUAL);
    let initial = pair::spin_density_brute(0.0, params)?;
    for &t in times {
        let direct = pair::evolve_pair_state(t, params)?;
        norm.see(direct.norm() - 1.0);
        let expanded = pair::evolve_pair_state_expansion_with(t, params, fault)?;
        let gap = (direct.amplitudes() - expanded.amplitudes()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        expansion.see(gap);
        let reduced = direct.reduced(&pair::SPINS)?;
        let brute = pair::SpinDensity::from_reduced(&reduced)?;
        spin.see(pair::spin_density_closed(t, params)?.max_abs_diff(&brute));
        diagonal.see((brute.a2 - initial.a2).abs().max((brute.b2 - initial.b2).abs()));
        global.see(ccr_pure(&direct, &pair::SPINS)?.residual);
        for k in pair::SPINS {
            parties.see(ccr_mixed(&reduced, &[k])?.residual);
        }
    }
    Ok(vec![norm.finish(), expansion.finish(), spin.finish(), diagonal.finish(), global.finish(), parties.finish()])
}

fn limit_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let sin2 = |pp: &PhysParams| (2.0 * pp.theta()).sin().powi(2);

    let fast = opts.params(1e3)?;
    let mut standard = Worst::new("limit.relativistic_survival[p=1000]", 1e-3);
    let mut pure = Worst::new("limit.relativistic_purity[p=1000]", 1e-3);
    for t in time_grid(fast.flavor_window(), opts.steps) {
        standard.see(single::survival_probability(t, &fast) - single::survival_probability_standard(t, &fast));
        pure.see(1.0 - single::flavor_purity_closed(t, &fast));
    }

    let slow = opts.params(1e-3)?;
    let mut nonrel = Worst::new("limit.nonrelativistic_purity[p=0.001]", 1e-3);
    for t in time_grid(slow.flavor_window(), opts.steps) {
        let approx = 1.0 - sin2(&slow) / 2.0 * (slow.delta_e() * t).sin().powi(2);
        nonrel.see(single::flavor_purity_closed(t, &slow) - approx);
    }

    let base = opts.params(1.0)?;
    let degenerate = PhysParams::new(1.0, 1.0, 1.0, base.m_l(), base.theta())?;
    let mut flat = Worst::new("limit.degenerate_masses", tol::IDENTITY);
    for t in time_grid(base.flavor_window(), opts.steps) {
        flat.see(single::g_function(t, &degenerate));
        flat.see(single::h_function(t, &degenerate));
        flat.see(1.0 - single::survival_probability(t, &degenerate));
    }

    let mut rest = Worst::new("limit.amplitude_at_rest", tol::IDENTITY);
    rest.see(pair::entanglement_amplitude(&opts.params(0.0)?)? - 1.0);

    Ok(vec![standard.finish(), pure.finish(), nonrel.finish(), flat.finish(), rest.finish()])
}
