//! Executable counterparts of the metatheorems: generators of well-typed
//! processes and property suites over them.

mod enumerate;
mod generate;
mod properties;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use enumerate::{alphabet, distinct_judgments, enumerate_typed_cp, root_contexts};
pub use generate::{generate_typed, GenConfig, GenError, Generated};
pub use properties::{
    check_adequacy, check_equiv_preservation, check_linearity_lemmas, check_scp_step,
    check_semantics_agreement, check_subject_reduction, check_subject_reduction_cp,
    check_subject_reduction_steps, check_weakening, scp_counterpart, suite_options, AdequacyInput,
    Report, Violation,
};

use crate::syntax::Calculus;
use crate::typing::CpDerivation;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SubjectReduction,
    Adequacy,
    Lemmas,
    Agreement,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::SubjectReduction,
        Suite::Adequacy,
        Suite::Lemmas,
        Suite::Agreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubjectReduction => "subject-reduction",
            Suite::Adequacy => "adequacy",
            Suite::Lemmas => "lemmas",
            Suite::Agreement => "agreement",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Which instances a suite runs on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SuiteConfig {
    /// First seed of the random instances.
    pub seed: u64,
    /// Number of random instances.
    pub count: usize,
    /// Size bound of the exhaustive instances.
    pub exhaustive_size: usize,
    /// Derivation height of the random instances.
    pub max_depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: 500,
            exhaustive_size: 4,
            max_depth: 6,
        }
    }
}

/// The exhaustive instances up to `cfg.exhaustive_size`, then `cfg.count`
/// random ones with consecutive seeds.
pub fn instances(cfg: &SuiteConfig) -> Result<Vec<CpDerivation>, GenError> {
    let mut out: Vec<CpDerivation> = enumerate_typed_cp(cfg.exhaustive_size)
        .into_iter()
        .map(|(_, _, d)| d)
        .collect();
    for i in 0..cfg.count as u64 {
        let g = generate_typed(&GenConfig {
            seed: cfg.seed.wrapping_add(i),
            max_depth: cfg.max_depth,
            type_depth: 2,
            calculus: Calculus::Cp,
        })?;
        if let Generated::Cp { derivation, .. } = g {
            out.push(derivation);
        }
    }
    Ok(out)
}

/// Runs one suite over `items`.
pub fn run_suite(suite: Suite, items: &[CpDerivation]) -> Report {
    let name = suite.name();
    Report::collect(name, items, |d| {
        let mut r = Report::new(name);
        let Some((sd, lins)) = scp_counterpart(d) else {
            r.checked = 1;
            r.violations.push(Violation {
                instance: crate::textio::judgment(&d.context, &d.process),
                property: "translation".into(),
                detail: "no SCP counterpart".into(),
            });
            return r;
        };
        match suite {
            Suite::SubjectReduction => {
                r.absorb(check_subject_reduction(&d.context, &sd.process, &lins));
                r.absorb(check_subject_reduction_cp(&d.context, &d.process));
            }
            Suite::Adequacy => {
                r.absorb(check_adequacy(AdequacyInput::Cp(d)));
                r.absorb(check_adequacy(AdequacyInput::Scp(&sd, &lins)));
            }
            Suite::Lemmas => {
                r.absorb(check_weakening(&sd));
                r.absorb(check_linearity_lemmas(&d.context, &sd.process));
                r.absorb(check_equiv_preservation(d, 2));
            }
            Suite::Agreement => r.absorb(check_semantics_agreement(&sd.process)),
        }
        r
    })
}
