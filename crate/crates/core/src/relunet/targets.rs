//! Named verification targets: each pairs a network with its reference
//! algorithm, an input distribution and a pass threshold.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::verify::{agreement_on, agreement_rate, agreement_with, max_deviation, samplers, Agreement};
use super::{
    approx_enosr_scalar, build_eno3_explicit, build_eno4_explicit, build_eno_interp_net, build_eno_rec_net,
    build_enosr_class_net, build_enosr_regression_net, trained_deleno,
};
use crate::eno_core::{interp_shift_unchecked, rec_shift_unchecked, scale_input};
use crate::eno_sr::window_indicators;
use crate::error::{Error, Result};

/// Agreement floor for the trained networks.
pub const TRAINED_FLOOR: f64 = 0.985;
/// Allowed deviation of the regression network from the scalar formula.
pub const REGRESSION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Interp3,
    Interp4,
    /// General construction of order `p`.
    InterpN(usize),
    Rec2,
    Rec3,
    SrClass,
    SrReg,
    Trained3,
    Trained4,
}

impl Target {
    pub const ALL: [&'static str; 9] = [
        "interp3", "interp4", "interpN", "rec2", "rec3", "sr-class", "sr-reg", "trained3", "trained4",
    ];

    /// Parses a target name; `p` is only used by `interpN`.
    pub fn parse(name: &str, p: usize) -> Result<Self> {
        Ok(match name {
            "interp3" => Target::Interp3,
            "interp4" => Target::Interp4,
            "interpN" | "interpn" => Target::InterpN(p),
            "rec2" => Target::Rec2,
            "rec3" => Target::Rec3,
            "sr-class" => Target::SrClass,
            "sr-reg" => Target::SrReg,
            "trained3" => Target::Trained3,
            "trained4" => Target::Trained4,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown target '{name}' (expected one of {})",
                    Target::ALL.join(", ")
                )))
            }
        })
    }

    /// Required agreement rate.
    pub fn floor(self) -> f64 {
        match self {
            Target::Trained3 | Target::Trained4 => TRAINED_FLOOR,
            _ => 1.0,
        }
    }

    /// The network under test; `guard` and `eps` only matter for the ENO-SR
    /// targets.
    pub fn network(self, guard: f64, eps: f64) -> Result<super::MlpNetwork> {
        match self {
            Target::Interp3 => Ok(build_eno3_explicit()),
            Target::Interp4 => Ok(build_eno4_explicit()),
            Target::InterpN(p) => build_eno_interp_net(p),
            Target::Rec2 => build_eno_rec_net(2),
            Target::Rec3 => build_eno_rec_net(3),
            Target::SrClass => build_enosr_class_net(guard),
            Target::SrReg => build_enosr_regression_net(eps, guard),
            Target::Trained3 => trained_deleno(3),
            Target::Trained4 => trained_deleno(4),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Interp3 => f.write_str("interp3"),
            Target::Interp4 => f.write_str("interp4"),
            Target::InterpN(p) => write!(f, "interpN(p={p})"),
            Target::Rec2 => f.write_str("rec2"),
            Target::Rec3 => f.write_str("rec3"),
            Target::SrClass => f.write_str("sr-class"),
            Target::SrReg => f.write_str("sr-reg"),
            Target::Trained3 => f.write_str("trained3"),
            Target::Trained4 => f.write_str("trained4"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::parse(s, 5)
    }
}

/// Settings shared by all targets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub guard: f64,
    /// `ε` of the regression network.
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetReport {
    pub target: String,
    pub matches: usize,
    pub total: usize,
    pub rate: f64,
    pub floor: f64,
    /// Regression target only.
    pub max_abs_diff: Option<f64>,
    /// First disagreeing input with (network, reference) answers.
    pub counterexample: Option<(Vec<f64>, String, String)>,
    pub passed: bool,
}

fn report(target: Target, a: Agreement) -> TargetReport {
    let floor = target.floor();
    let rate = a.rate();
    TargetReport {
        target: target.to_string(),
        matches: a.matches,
        total: a.total,
        rate,
        floor,
        max_abs_diff: None,
        counterexample: a.first_mismatch.map(|(x, g, w)| (x, g.to_string(), w.to_string())),
        passed: rate >= floor,
    }
}

fn with_ties(a: Agreement, ties: Agreement) -> Agreement {
    a.merge(ties)
}

/// Runs `target` on `opts.samples` random inputs (plus a deterministic tie
/// suite for the exact selection networks).
pub fn verify_target(target: Target, opts: VerifyOptions) -> Result<TargetReport> {
    if opts.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let (n, seed) = (opts.samples, opts.seed);
    let interp = |p: usize| move |x: &[f64]| interp_shift_unchecked(x, p);
    let rec = |p: usize| move |x: &[f64]| rec_shift_unchecked(x, p);
    let exact_selection = |net: super::MlpNetwork, oracle: &(dyn Fn(&[f64]) -> usize + Sync)| {
        let a = agreement_rate(&net, oracle, samplers::uniform(-1.0, 1.0), n, seed);
        let ties = samplers::tie_suite(net.input_width());
        with_ties(a, agreement_on(&ties, |x, ws| net.classify_with(x, ws), oracle))
    };
    Ok(match target {
        Target::Interp3 => report(target, exact_selection(build_eno3_explicit(), &interp(3))),
        Target::Interp4 => report(target, exact_selection(build_eno4_explicit(), &interp(4))),
        Target::InterpN(p) => report(target, exact_selection(build_eno_interp_net(p)?, &interp(p))),
        Target::Rec2 => report(target, exact_selection(build_eno_rec_net(2)?, &rec(2))),
        Target::Rec3 => report(target, exact_selection(build_eno_rec_net(3)?, &rec(3))),
        Target::SrClass => {
            let net = build_enosr_class_net(opts.guard)?;
            let guard = opts.guard;
            let oracle = move |x: &[f64]| window_indicators(x, guard).class as usize - 1;
            report(target, agreement_rate(&net, oracle, samplers::piecewise_linear(), n, seed))
        }
        Target::SrReg => {
            let net = build_enosr_regression_net(opts.eps, opts.guard)?;
            let (eps, guard) = (opts.eps, opts.guard);
            let deviation = |x: &[f64], ws: &mut super::Workspace| {
                let got = net.forward_with(x, ws)[0];
                got - approx_enosr_scalar(x, eps, guard).unwrap_or(f64::NAN)
            };
            let a = agreement_with(
                n,
                10,
                seed,
                samplers::piecewise_linear(),
                |x, ws| usize::from(!(deviation(x, ws).abs() <= REGRESSION_TOL)),
                |_| 0,
            );
            let (max, _) = max_deviation(n, 10, seed, samplers::piecewise_linear(), deviation);
            let mut r = report(target, a);
            r.max_abs_diff = Some(max);
            if let Some(c) = r.counterexample.as_mut() {
                c.1 = "outside tolerance".into();
                c.2 = format!("|diff| <= {REGRESSION_TOL:e}");
            }
            r
        }
        Target::Trained3 | Target::Trained4 => {
            let p = if target == Target::Trained3 { 3 } else { 4 };
            let net = trained_deleno(p)?;
            let a = agreement_with(
                n,
                2 * p - 2,
                seed,
                samplers::uniform(-1.0, 1.0),
                |x, ws| net.classify_with(&scale_input(x), ws),
                interp(p),
            );
            report(target, a)
        }
    })
}
