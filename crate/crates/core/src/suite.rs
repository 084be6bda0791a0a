//! Named verification suites and their default sizes.

use std::fmt;
use std::str::FromStr;

use crate::diffcomb::{check_cd_axioms, check_dpoly_closure, check_hd_identities, CheckConfig};
use crate::error::{Error, Result};
use crate::metric::{check_convergence, check_enrichment, check_ultrametric};
use crate::model::SampleModel;
use crate::report::{canonicalize, AxiomReport};
use crate::taylor::check_taylor_identities;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Cd,
    Hd,
    Dpoly,
    Taylor,
    Ultrametric,
    Enrichment,
    Convergence,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Cd,
        Suite::Hd,
        Suite::Dpoly,
        Suite::Taylor,
        Suite::Ultrametric,
        Suite::Enrichment,
        Suite::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cd => "cd",
            Suite::Hd => "hd",
            Suite::Dpoly => "dpoly",
            Suite::Taylor => "taylor",
            Suite::Ultrametric => "ultrametric",
            Suite::Enrichment => "enrichment",
            Suite::Convergence => "convergence",
        }
    }

    /// Sample count used when none is given.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Cd | Suite::Enrichment => 200,
            Suite::Hd => 50,
            Suite::Ultrametric => 500,
            Suite::Dpoly | Suite::Taylor | Suite::Convergence => 100,
        }
    }

    /// Suites whose statements involve `1/n!`.
    pub fn needs_nat_inverse(self) -> bool {
        matches!(
            self,
            Suite::Taylor | Suite::Ultrametric | Suite::Enrichment | Suite::Convergence
        )
    }

    /// In a truncated model `k_max` is lowered below the truncation order.
    pub fn run<M: SampleModel>(self, model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
        if self.needs_nat_inverse() {
            model.ring().require_nat_inverse()?;
        }
        let clamped;
        let cfg = match model.truncation_order() {
            Some(k) if cfg.k_max >= k => {
                clamped = CheckConfig {
                    k_max: k.saturating_sub(1),
                    ..*cfg
                };
                &clamped
            }
            _ => cfg,
        };
        let reports = match self {
            Suite::Cd => check_cd_axioms(model, cfg)?,
            Suite::Hd => check_hd_identities(model, cfg)?,
            Suite::Dpoly => {
                let cfg = CheckConfig {
                    max_degree: cfg.max_degree.min(2),
                    ..*cfg
                };
                check_dpoly_closure(model, &cfg)?
            }
            Suite::Taylor => check_taylor_identities(model, cfg)?,
            Suite::Ultrametric => check_ultrametric(model, cfg)?,
            Suite::Enrichment => check_enrichment(model, cfg)?,
            Suite::Convergence => check_convergence(model, cfg)?,
        };
        Ok(canonicalize(reports))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown suite `{s}`")))
    }
}
