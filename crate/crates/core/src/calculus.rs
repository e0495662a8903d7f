//! A uniform face over the two calculi, so that encodings, the adequacy
//! checker and the command line can pick one by name.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classical::{CSequent, Classical};
use crate::error::{Error, Result};
use crate::intuitionistic::{ISequent, Intuitionistic};
use crate::search::{Budget, Probe, RawInstance, Scheduler};
use crate::signature::Signature;
use crate::syntax::ParseMode;
use crate::trace::{Rule, Step, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Classical,
    Intuitionistic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Classical => "classical",
            Kind::Intuitionistic => "intuitionistic",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "calculus", content = "sequent", rename_all = "lowercase")]
pub enum Sequent {
    Classical(CSequent),
    Intuitionistic(ISequent),
}

impl Sequent {
    pub fn kind(&self) -> Kind {
        match self {
            Sequent::Classical(_) => Kind::Classical,
            Sequent::Intuitionistic(_) => Kind::Intuitionistic,
        }
    }

    pub fn is_neutral(&self) -> bool {
        match self {
            Sequent::Classical(s) => s.is_neutral(),
            Sequent::Intuitionistic(s) => s.is_neutral(),
        }
    }

    pub fn classical(&self) -> Result<&CSequent> {
        match self {
            Sequent::Classical(s) => Ok(s),
            Sequent::Intuitionistic(s) => Err(Error::ClassMismatch(format!("`{s}` is not a classical sequent"))),
        }
    }

    pub fn intuitionistic(&self) -> Result<&ISequent> {
        match self {
            Sequent::Intuitionistic(s) => Ok(s),
            Sequent::Classical(s) => Err(Error::ClassMismatch(format!("`{s}` is not an intuitionistic sequent"))),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequent::Classical(s) => write!(f, "{s}"),
            Sequent::Intuitionistic(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// A synthetic inference rule: a neutral conclusion, the multiset of
/// neutral premises, and every phase trace that yields those premises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticRule {
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
    pub witnesses: Vec<Trace>,
}

/// A single decision or focus rule application.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
}

pub trait Calculus: Send + Sync {
    fn kind(&self) -> Kind;
    fn signature(&self) -> &Signature;
    fn parse_sequent(&self, text: &str, mode: ParseMode) -> Result<Sequent>;
    fn validate(&self, s: &Sequent) -> Result<()>;
    fn synthetic_rules(&self, s: &Sequent, budget: &Budget) -> Result<Vec<SyntheticRule>>;
    fn replay(&self, conclusion: &Sequent, trace: &[Step], budget: &Budget) -> Result<Vec<Sequent>>;
    fn rule_instances(&self, s: &Sequent, budget: &Budget) -> Result<Vec<RuleInstance>>;
    fn normalize(&self, s: &Sequent, sched: &mut dyn Scheduler, budget: &Budget) -> Result<Vec<Sequent>>;
}

fn lift<S>(wrap: fn(S) -> Sequent, raw: Vec<RawInstance<S>>) -> Vec<RuleInstance> {
    raw.into_iter()
        .map(|r| RuleInstance {
            rule: r.rule,
            conclusion: wrap(r.conclusion),
            premises: r.premises.into_iter().map(wrap).collect(),
        })
        .collect()
}

impl Calculus for Classical {
    fn kind(&self) -> Kind {
        Kind::Classical
    }

    fn signature(&self) -> &Signature {
        Classical::signature(self)
    }

    fn parse_sequent(&self, text: &str, mode: ParseMode) -> Result<Sequent> {
        let s = CSequent::parse(text, self.signature(), mode)?;
        s.validate(self.signature())?;
        Ok(Sequent::Classical(s))
    }

    fn validate(&self, s: &Sequent) -> Result<()> {
        s.classical()?.validate(self.signature())
    }

    fn synthetic_rules(&self, s: &Sequent, budget: &Budget) -> Result<Vec<SyntheticRule>> {
        Ok(self
            .synthetic_expansions(s.classical()?, budget)?
            .into_iter()
            .map(|r| SyntheticRule {
                conclusion: Sequent::Classical(r.conclusion),
                premises: r.premises.into_iter().map(Sequent::Classical).collect(),
                witnesses: r.traces,
            })
            .collect())
    }

    fn replay(&self, conclusion: &Sequent, trace: &[Step], budget: &Budget) -> Result<Vec<Sequent>> {
        Ok(Classical::replay(self, conclusion.classical()?, trace, budget)?.into_iter().map(Sequent::Classical).collect())
    }

    fn rule_instances(&self, s: &Sequent, budget: &Budget) -> Result<Vec<RuleInstance>> {
        Ok(lift(Sequent::Classical, self.instances(s.classical()?, budget)?))
    }

    fn normalize(&self, s: &Sequent, sched: &mut dyn Scheduler, budget: &Budget) -> Result<Vec<Sequent>> {
        Ok(self.active_normalize_with(s.classical()?, sched, budget)?.into_iter().map(Sequent::Classical).collect())
    }
}

impl Calculus for Intuitionistic {
    fn kind(&self) -> Kind {
        Kind::Intuitionistic
    }

    fn signature(&self) -> &Signature {
        Intuitionistic::signature(self)
    }

    fn parse_sequent(&self, text: &str, mode: ParseMode) -> Result<Sequent> {
        let s = ISequent::parse(text, self.signature(), mode)?;
        s.validate(self.signature())?;
        Ok(Sequent::Intuitionistic(s))
    }

    fn validate(&self, s: &Sequent) -> Result<()> {
        s.intuitionistic()?.validate(self.signature())
    }

    fn synthetic_rules(&self, s: &Sequent, budget: &Budget) -> Result<Vec<SyntheticRule>> {
        Ok(self
            .synthetic_expansions(s.intuitionistic()?, budget)?
            .into_iter()
            .map(|r| SyntheticRule {
                conclusion: Sequent::Intuitionistic(r.conclusion),
                premises: r.premises.into_iter().map(Sequent::Intuitionistic).collect(),
                witnesses: r.traces,
            })
            .collect())
    }

    fn replay(&self, conclusion: &Sequent, trace: &[Step], budget: &Budget) -> Result<Vec<Sequent>> {
        Ok(Intuitionistic::replay(self, conclusion.intuitionistic()?, trace, budget)?
            .into_iter()
            .map(Sequent::Intuitionistic)
            .collect())
    }

    fn rule_instances(&self, s: &Sequent, budget: &Budget) -> Result<Vec<RuleInstance>> {
        Ok(lift(Sequent::Intuitionistic, self.instances(s.intuitionistic()?, budget)?))
    }

    fn normalize(&self, s: &Sequent, sched: &mut dyn Scheduler, budget: &Budget) -> Result<Vec<Sequent>> {
        Ok(self
            .active_normalize_with(s.intuitionistic()?, sched, budget)?
            .into_iter()
            .map(Sequent::Intuitionistic)
            .collect())
    }
}

type Factory = fn(Signature, Option<Arc<dyn Probe>>) -> Box<dyn Calculus>;

const REGISTRY: &[(&str, Factory)] = &[
    ("classical", |sig, probe| match probe {
        Some(p) => Box::new(Classical::with_probe(sig, p)),
        None => Box::new(Classical::new(sig)),
    }),
    ("intuitionistic", |sig, probe| match probe {
        Some(p) => Box::new(Intuitionistic::with_probe(sig, p)),
        None => Box::new(Intuitionistic::new(sig)),
    }),
];

pub fn calculus_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|(n, _)| *n)
}

/// Look a calculus up by name and instantiate it over `sig`.
pub fn calculus(name: &str, sig: Signature) -> Result<Box<dyn Calculus>> {
    calculus_with_probe(name, sig, None)
}

pub fn calculus_with_probe(name: &str, sig: Signature, probe: Option<Arc<dyn Probe>>) -> Result<Box<dyn Calculus>> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make(sig, probe))
        .ok_or_else(|| Error::UnknownName { kind: "calculus", name: name.to_string() })
}

pub fn for_kind(kind: Kind, sig: Signature) -> Box<dyn Calculus> {
    calculus(kind.name(), sig).expect("both kinds are registered")
}
