//! Numerical audits of solver reports: the two `‖u‖₂` bounds used in the
//! multiplicity arguments, and energy comparisons between solutions.

use serde::{Deserialize, Serialize};

use super::minimize::SolveReport;
use super::problem::ReducedProblem;
use crate::conditions::GenericIneqParams;
use crate::error::{Error, Result};

/// Relative slack when comparing an audit's two sides; covers the
/// discretization residual of the energy identity.
pub const AUDIT_RTOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AuditVerdict {
    Holds { lhs: f64, rhs: f64 },
    Fails { lhs: f64, rhs: f64 },
    NotApplicable { reason: String },
}

impl AuditVerdict {
    fn compare(lhs: f64, rhs: f64) -> Self {
        if lhs <= rhs * (1.0 + AUDIT_RTOL) {
            AuditVerdict::Holds { lhs, rhs }
        } else {
            AuditVerdict::Fails { lhs, rhs }
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, AuditVerdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, AuditVerdict::Fails { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofChainAudit {
    /// `∫u² ≤ I^{(n-2-k)/2} (∫f)^{2/(n-k)} / min f`.
    pub holder: AuditVerdict,
    /// `∫u² ≤ (4P/((4-c)c))^{c/2} I^{(c-2+n-k)/2} (∫f)^{(c-2)/2♯}`, valid
    /// for `2 < c < 4` and `α ≥ (4-c)c D/4`.
    pub multiplier: AuditVerdict,
}

impl ProofChainAudit {
    /// No applicable bound fails.
    pub fn consistent(&self) -> bool {
        !self.holder.fails() && !self.multiplier.fails()
    }
}

/// Evaluates both `‖u‖₂` bounds on a converged report. `generic` supplies
/// `(c, P, D)` for the multiplier bound; without it that bound is reported
/// as not applicable.
pub fn proof_chain_diagnostics(
    problem: &ReducedProblem,
    report: &SolveReport,
    generic: Option<&GenericIneqParams>,
) -> Result<ProofChainAudit> {
    if !report.converged {
        return Err(Error::precondition("audit needs a converged report"));
    }
    if report.u.len() != problem.grid() {
        return Err(Error::domain("report grid does not match problem"));
    }
    let m = problem.reduced_dim();
    let i = report.quotient;
    let lhs = problem.l2_squared(&report.u);
    let f_int = problem.f_integral();
    let holder_rhs = i.powf((m - 2.0) / 2.0) * f_int.powf(2.0 / m) / problem.f_min();
    let holder = AuditVerdict::compare(lhs, holder_rhs);

    let multiplier = match generic {
        None => AuditVerdict::NotApplicable {
            reason: "no generic inequality supplied".into(),
        },
        Some(g) => {
            let c = g.crit;
            if !(c > 2.0 && c < 4.0) {
                AuditVerdict::NotApplicable {
                    reason: format!("critical exponent {c} outside (2, 4)"),
                }
            } else if !(problem.alpha >= g.multiplier() * g.d_const) {
                AuditVerdict::NotApplicable {
                    reason: format!(
                        "alpha {} below multiplier bound {}",
                        problem.alpha,
                        g.multiplier() * g.d_const
                    ),
                }
            } else {
                let rhs = (4.0 * g.p_const / ((4.0 - c) * c)).powf(c / 2.0)
                    * i.powf((c - 2.0 + m) / 2.0)
                    * f_int.powf((c - 2.0) / problem.two_sharp());
                AuditVerdict::compare(lhs, rhs)
            }
        }
    };
    Ok(ProofChainAudit { holder, multiplier })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyOrder {
    Less,
    Greater,
    NotSeparated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySeparation {
    /// Order of `E(a)` relative to `E(b)`.
    pub order: EnergyOrder,
    /// `E(b) - E(a)`.
    pub margin: f64,
    pub a_below_threshold: Option<bool>,
    /// `I(b)` is at least a's existence threshold, so b's infimum cannot
    /// certify existence the way a's does.
    pub b_above_a_threshold: Option<bool>,
}

/// Compares the energies of two converged reports.
pub fn energy_separation(a: &SolveReport, b: &SolveReport) -> Result<EnergySeparation> {
    if !a.converged || !b.converged {
        return Err(Error::precondition("energy comparison needs converged reports"));
    }
    let margin = b.energy - a.energy;
    let scale = a.energy.abs().max(b.energy.abs());
    let order = if margin.abs() <= 1e-12 * scale {
        EnergyOrder::NotSeparated
    } else if margin > 0.0 {
        EnergyOrder::Less
    } else {
        EnergyOrder::Greater
    };
    Ok(EnergySeparation {
        order,
        margin,
        a_below_threshold: a.below_threshold,
        b_above_a_threshold: a.threshold.map(|t| b.quotient >= t),
    })
}
