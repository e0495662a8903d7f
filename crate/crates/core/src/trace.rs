//! Rule names and the replayable record of a synthetic phase.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::context::ZonedFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "rdr")]
    Rdr,
    #[serde(rename = "udr")]
    Udr,
    #[serde(rename = "rdl")]
    Rdl,
    #[serde(rename = "udl")]
    Udl,
    #[serde(rename = "dr")]
    Dr,
    #[serde(rename = "pr")]
    Pr,
    #[serde(rename = "nl")]
    Nl,
    #[serde(rename = "ar")]
    Ar,
    #[serde(rename = "al")]
    Al,
    #[serde(rename = "rr*")]
    RrTensor,
    #[serde(rename = "rr1")]
    RrOne,
    #[serde(rename = "rr+1")]
    RrPlus1,
    #[serde(rename = "rr+2")]
    RrPlus2,
    #[serde(rename = "rr!")]
    RrBang,
    #[serde(rename = "lr&1")]
    LrWith1,
    #[serde(rename = "lr&2")]
    LrWith2,
    #[serde(rename = "lr|")]
    LrPar,
    #[serde(rename = "lrbot")]
    LrBot,
    #[serde(rename = "lr-o")]
    LrLolli,
    #[serde(rename = "lr?")]
    LrQmark,
    #[serde(rename = "rr&")]
    RrWith,
    #[serde(rename = "rrtop")]
    RrTop,
    #[serde(rename = "rr|")]
    RrPar,
    #[serde(rename = "rrbot")]
    RrBot,
    #[serde(rename = "rr-o")]
    RrLolli,
    #[serde(rename = "rr?")]
    RrQmark,
    #[serde(rename = "lr*")]
    LrTensor,
    #[serde(rename = "lr1")]
    LrOne,
    #[serde(rename = "lr+")]
    LrPlus,
    #[serde(rename = "lr0")]
    LrZero,
    #[serde(rename = "lr!")]
    LrBang,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Rdr => "rdr",
            Rule::Udr => "udr",
            Rule::Rdl => "rdl",
            Rule::Udl => "udl",
            Rule::Dr => "dr",
            Rule::Pr => "pr",
            Rule::Nl => "nl",
            Rule::Ar => "ar",
            Rule::Al => "al",
            Rule::RrTensor => "rr*",
            Rule::RrOne => "rr1",
            Rule::RrPlus1 => "rr+1",
            Rule::RrPlus2 => "rr+2",
            Rule::RrBang => "rr!",
            Rule::LrWith1 => "lr&1",
            Rule::LrWith2 => "lr&2",
            Rule::LrPar => "lr|",
            Rule::LrBot => "lrbot",
            Rule::LrLolli => "lr-o",
            Rule::LrQmark => "lr?",
            Rule::RrWith => "rr&",
            Rule::RrTop => "rrtop",
            Rule::RrPar => "rr|",
            Rule::RrBot => "rrbot",
            Rule::RrLolli => "rr-o",
            Rule::RrQmark => "rr?",
            Rule::LrTensor => "lr*",
            Rule::LrOne => "lr1",
            Rule::LrPlus => "lr+",
            Rule::LrZero => "lr0",
            Rule::LrBang => "lr!",
        }
    }

    pub fn is_decision(self) -> bool {
        matches!(self, Rule::Rdr | Rule::Udr | Rule::Rdl | Rule::Udl | Rule::Dr)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The non-deterministic choice made by a focus rule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Choice {
    None,
    /// Entry closed against the focused atom.
    Consume { entry: ZonedFormula },
    /// Restricted entries sent to the first premise; the rest go to the second.
    Split { left: Vec<ZonedFormula>, right: Vec<ZonedFormula> },
}

/// One step of a synthetic phase.
///
/// Focus steps are listed depth first, first premise before second, which
/// is enough to replay binary rules. Each active step records the rules the
/// canonical strategy applied to one active premise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Decide { rule: Rule, entry: ZonedFormula },
    Focus { rule: Rule, choice: Choice },
    Active { rules: Vec<Rule> },
}

pub type Trace = Vec<Step>;

pub fn render_trace(trace: &[Step]) -> String {
    let mut parts = Vec::new();
    for step in trace {
        match step {
            Step::Decide { rule, entry } => parts.push(format!("{rule}({entry})")),
            Step::Focus { rule, choice: Choice::Split { left, right } } => {
                parts.push(format!("{rule}[{}/{}]", left.len(), right.len()))
            }
            Step::Focus { rule, .. } => parts.push(rule.to_string()),
            Step::Active { rules } if rules.is_empty() => parts.push("{}".into()),
            Step::Active { rules } => {
                parts.push(format!("{{{}}}", rules.iter().map(|r| r.name()).collect::<Vec<_>>().join(" ")))
            }
        }
    }
    parts.join(" ")
}
