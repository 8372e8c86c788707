//! Log-space evaluation of determinantal inequalities.
//!
//! Every bound returns an [`InequalityReport`] comparing `log LHS` with `log RHS`.
//! Determinants are never exponentiated; sums of positive terms go through
//! [`crate::logspace`].

mod block;
mod classic;
mod scalar;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use block::{coro26_bound, coro27_ineq, kim_bound, perturb_to_pd, thm21_bound, thm24_bound, thm25_ineq};
pub use classic::{chen_bound, fischer_ineq, hadamard_ineq, oppenheim_ineq, oppenheim_schur_ineq};
pub use scalar::{coro24_check, lemma23_check, SCALAR_INPUT_CAP};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::logspace::{log_margin, serde_f64};

/// A log-margin `≥ -DEFAULT_TOL` counts as holding.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Stable identifiers used by the CLI and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Hadamard,
    Fischer,
    Oppenheim,
    OppenheimSchur,
    Chen,
    Kim,
    Thm21,
    Thm24,
    Thm25,
    Coro26,
    Coro27,
    Lemma23,
    Coro24,
}

impl BoundName {
    pub const ALL: [BoundName; 13] = [
        BoundName::Hadamard,
        BoundName::Fischer,
        BoundName::Oppenheim,
        BoundName::OppenheimSchur,
        BoundName::Chen,
        BoundName::Kim,
        BoundName::Thm21,
        BoundName::Thm24,
        BoundName::Thm25,
        BoundName::Coro26,
        BoundName::Coro27,
        BoundName::Lemma23,
        BoundName::Coro24,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::Hadamard => "hadamard",
            BoundName::Fischer => "fischer",
            BoundName::Oppenheim => "oppenheim",
            BoundName::OppenheimSchur => "oppenheim_schur",
            BoundName::Chen => "chen",
            BoundName::Kim => "kim",
            BoundName::Thm21 => "thm21",
            BoundName::Thm24 => "thm24",
            BoundName::Thm25 => "thm25",
            BoundName::Coro26 => "coro26",
            BoundName::Coro27 => "coro27",
            BoundName::Lemma23 => "lemma23",
            BoundName::Coro24 => "coro24",
        }
    }

    /// Whether the statement admits singular (semidefinite) inputs.
    pub fn admits_semidefinite(&self) -> bool {
        matches!(
            self,
            BoundName::Hadamard
                | BoundName::Fischer
                | BoundName::Oppenheim
                | BoundName::OppenheimSchur
                | BoundName::Thm25
                | BoundName::Coro27
        )
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .iter()
            .copied()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

/// Per-μ diagnostics of a product-form bound, all in natural-log units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundTerms {
    pub mu: usize,
    /// `(Q/q_i)·log(det A_μμ · det 𝑨_{μ−1} / det 𝑨_μ)` for each factor `i`.
    pub ratio_terms: Vec<f64>,
    /// `log R_μ`, where `R_μ` folds the first `m−1` factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_mu_log: Option<f64>,
    /// `log S_μ`, combining the partial product with the last factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_mu_log: Option<f64>,
    /// Log of the per-μ factor `Σ_i x_i − (m−1)` entering the bound.
    pub factor_log: f64,
}

/// One link `lhs ≥ rhs` of an inequality chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainLink {
    #[serde(with = "serde_f64")]
    pub lhs_log: f64,
    #[serde(with = "serde_f64")]
    pub rhs_log: f64,
    #[serde(with = "serde_f64")]
    pub margin_log: f64,
    pub holds: bool,
}

/// The ratio arrangement `det(∏∗𝑨) ≥ ∏(det 𝑨)^{Q/q_i}·[Σ_i (∏_μ det A_μμ / det 𝑨)^{Q/q_i} − (m−1)]`,
/// reported beside the additive arrangement when every factor is nonsingular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioForm {
    #[serde(with = "serde_f64")]
    pub lhs_log: f64,
    #[serde(with = "serde_f64")]
    pub rhs_log: f64,
    #[serde(with = "serde_f64")]
    pub margin_log: f64,
    /// `|slack₁ − slack₂|` of the two arrangements, each normalized by the additive LHS.
    #[serde(with = "serde_f64")]
    pub slack_gap: f64,
    /// `slack_gap ≤ 1e-8`.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InequalityReport {
    pub name: String,
    #[serde(with = "serde_f64")]
    pub lhs_log: f64,
    #[serde(with = "serde_f64")]
    pub rhs_log: f64,
    #[serde(with = "serde_f64")]
    pub margin_log: f64,
    pub holds: bool,
    pub tol: f64,
    #[serde(default)]
    pub terms: Vec<BoundTerms>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<ChainLink>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_form: Option<RatioForm>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs_log: f64, rhs_log: f64, tol: f64) -> Self {
        let margin_log = log_margin(lhs_log, rhs_log);
        InequalityReport {
            name: name.into(),
            lhs_log,
            rhs_log,
            margin_log,
            holds: margin_log >= -tol,
            tol,
            terms: Vec::new(),
            chain: Vec::new(),
            ratio_form: None,
        }
    }

    /// Chain `x₀ ≥ x₁ ≥ … ≥ x_k`. The headline sides are the tightest link, so
    /// `holds` is true exactly when every link holds.
    pub(crate) fn chain(name: impl Into<String>, values: &[f64], tol: f64) -> Self {
        let links: Vec<ChainLink> = values
            .windows(2)
            .map(|w| {
                let margin_log = log_margin(w[0], w[1]);
                ChainLink { lhs_log: w[0], rhs_log: w[1], margin_log, holds: margin_log >= -tol }
            })
            .collect();
        let tightest = links
            .iter()
            .enumerate()
            .fold(0, |best, (k, l)| if l.margin_log < links[best].margin_log { k } else { best });
        let mut report = Self::new(name, links[tightest].lhs_log, links[tightest].rhs_log, tol);
        report.chain = links;
        report
    }

    /// Largest difference in log units between two reports' headline values.
    /// Infinite values match only when equal.
    pub fn discrepancy(&self, other: &InequalityReport) -> f64 {
        fn diff(a: f64, b: f64) -> f64 {
            if a == b {
                0.0
            } else {
                (a - b).abs()
            }
        }
        diff(self.lhs_log, other.lhs_log)
            .max(diff(self.rhs_log, other.rhs_log))
            .max(diff(self.margin_log, other.margin_log))
    }
}

/// Hermitian (default tolerance) with non-negative real diagonal.
pub(crate) fn check_psd_shape(a: &Matrix) -> Result<()> {
    let tol = a.default_hermitian_tol();
    let deviation = a.hermitian_deviation()?;
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    for (index, z) in a.diagonal().into_iter().enumerate() {
        if z.re < 0.0 {
            return Err(Error::NegativeDiagonal { index, value: z.re });
        }
    }
    Ok(())
}

pub(crate) fn same_dims(a: &Matrix, b: &Matrix) -> Result<()> {
    a.require_square()?;
    b.require_square()?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "expected equal dimensions, got {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    Ok(())
}

/// `Σ log a_ii` (real parts).
pub(crate) fn log_diag_product(a: &Matrix) -> f64 {
    a.diagonal().iter().map(|z| z.re.ln()).sum()
}
