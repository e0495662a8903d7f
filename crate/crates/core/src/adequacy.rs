//! Depth-bounded proof search over synthetic rules, and the focal and
//! global adequacy checks for an encoding on one source sequent.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{for_kind, Calculus, RuleInstance, Sequent, SyntheticRule};
use crate::corpus::Case;
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::search::Budget;
use crate::signature::{Signature, SignatureSpec};
use crate::trace::{Rule, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Exhausted,
    Open,
}

/// A closed derivation: one synthetic rule at the root, one subderivation
/// per premise, in premise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
    pub witness: Trace,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Derivation::height).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofSearchResult {
    pub sequent: Sequent,
    pub depth: usize,
    pub status: Status,
    /// Distinct closed trees within the bound, saturating at `u64::MAX`.
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub derivation: Option<Derivation>,
}

#[derive(Clone)]
struct Outcome {
    status: Status,
    count: u64,
    derivation: Option<Derivation>,
}

type Memo = Mutex<HashMap<(Sequent, usize), Outcome>>;

/// Search for derivations of a neutral sequent using at most `depth`
/// synthetic phases along every branch.
pub fn prove(calc: &dyn Calculus, s: &Sequent, depth: usize, budget: &Budget) -> Result<ProofSearchResult> {
    calc.validate(s)?;
    if !s.is_neutral() {
        return Err(Error::IllFormed(format!("proof search starts from a neutral sequent, got `{s}`")));
    }
    if depth == 0 {
        return Err(Error::IllFormed("depth must be at least 1".into()));
    }
    let memo = Memo::default();
    let o = search(calc, s, depth, budget, &memo)?;
    Ok(ProofSearchResult { sequent: s.clone(), depth, status: o.status, count: o.count, derivation: o.derivation })
}

fn search(calc: &dyn Calculus, s: &Sequent, depth: usize, budget: &Budget, memo: &Memo) -> Result<Outcome> {
    if depth == 0 {
        return Ok(Outcome { status: Status::Open, count: 0, derivation: None });
    }
    if let Some(o) = memo.lock().unwrap().get(&(s.clone(), depth)) {
        return Ok(o.clone());
    }
    let rules = calc.synthetic_rules(s, budget)?;
    let per_rule: Vec<Vec<Outcome>> = rules
        .par_iter()
        .map(|r| r.premises.iter().map(|p| search(calc, p, depth - 1, budget, memo)).collect())
        .collect::<Result<_>>()?;

    let mut count: u64 = 0;
    let mut derivation = None;
    let mut any_open = false;
    for (rule, subs) in rules.iter().zip(&per_rule) {
        if subs.iter().all(|o| o.status == Status::Proved) {
            let product = subs.iter().fold(rule.witnesses.len() as u64, |acc, o| acc.saturating_mul(o.count));
            count = count.saturating_add(product);
            if derivation.is_none() {
                derivation = Some(Derivation {
                    conclusion: s.clone(),
                    premises: rule.premises.clone(),
                    witness: rule.witnesses[0].clone(),
                    children: subs.iter().map(|o| o.derivation.clone().expect("proved")).collect(),
                });
            }
        } else if !subs.iter().any(|o| o.status == Status::Exhausted) {
            any_open = true;
        }
    }
    let status = if derivation.is_some() {
        Status::Proved
    } else if any_open {
        Status::Open
    } else {
        Status::Exhausted
    };
    let o = Outcome { status, count, derivation };
    memo.lock().unwrap().insert((s.clone(), depth), o.clone());
    Ok(o)
}

/// Source premise `source` is sent to target premise `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseMatch {
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub source: usize,
    pub target: usize,
    pub premises: Vec<PremiseMatch>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    SourceRuleWithoutMatch,
    TargetRuleWithoutPreimage,
}

/// The rule that breaks the matching. `rule` names the inference when the
/// offence was found at the level of single rule instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offending {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<Rule>,
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Bijective,
    Counterexample { kind: CounterexampleKind, offending: Offending },
}

impl Verdict {
    pub fn is_bijective(&self) -> bool {
        matches!(self, Verdict::Bijective)
    }
}

/// Rule instances of the target that no source instance maps onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceAudit {
    pub source_instances: usize,
    pub target_instances: usize,
    pub unmatched_target: Vec<RuleInstance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequacyReport {
    pub direction: String,
    pub conclusion: Sequent,
    pub encoded: Sequent,
    pub source_rules: Vec<SyntheticRule>,
    pub target_rules: Vec<SyntheticRule>,
    pub pairing: Vec<Pair>,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub audit: Option<InstanceAudit>,
}

struct Setup {
    source: Box<dyn Calculus>,
    target: Box<dyn Calculus>,
    encoded: Sequent,
}

fn setup(enc: &dyn Encoding, sig: &Signature, s: &Sequent) -> Result<Setup> {
    if s.kind() != enc.source() {
        return Err(Error::ClassMismatch(format!("{} expects a {} sequent", enc.name(), enc.source())));
    }
    let source = for_kind(enc.source(), sig.clone());
    source.validate(s)?;
    if !s.is_neutral() {
        return Err(Error::IllFormed(format!("adequacy is checked on neutral sequents, got `{s}`")));
    }
    let target = for_kind(enc.target(), enc.target_signature(sig));
    let encoded = enc.encode(sig, s)?;
    target.validate(&encoded)?;
    Ok(Setup { source, target, encoded })
}

fn encode_all(enc: &dyn Encoding, sig: &Signature, seqs: &[Sequent]) -> Result<Vec<Sequent>> {
    seqs.iter().map(|p| enc.encode(sig, p)).collect()
}

/// Pair every source premise with an equal target premise.
fn premise_matching(image: &[Sequent], target: &[Sequent]) -> Vec<PremiseMatch> {
    let mut used = vec![false; target.len()];
    image
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let j = (0..target.len()).find(|&j| !used[j] && &target[j] == p).expect("equal multisets");
            used[j] = true;
            PremiseMatch { source: i, target: j }
        })
        .collect()
}

/// Compare the synthetic rules of a source sequent with those of its
/// encoding, matching by premise multisets.
pub fn check_focal_adequacy(enc: &dyn Encoding, sig: &Signature, s: &Sequent, budget: &Budget) -> Result<AdequacyReport> {
    let Setup { source, target, encoded } = setup(enc, sig, s)?;
    let source_rules = source.synthetic_rules(s, budget)?;
    let target_rules = target.synthetic_rules(&encoded, budget)?;

    let by_premises: BTreeMap<&[Sequent], usize> =
        target_rules.iter().enumerate().map(|(j, r)| (r.premises.as_slice(), j)).collect();
    let mut pairing = Vec::new();
    let mut taken = vec![false; target_rules.len()];
    let mut failure = None;
    for (i, r) in source_rules.iter().enumerate() {
        let mut image = encode_all(enc, sig, &r.premises)?;
        let unsorted = image.clone();
        image.sort();
        match by_premises.get(image.as_slice()) {
            Some(&j) if !taken[j] => {
                taken[j] = true;
                pairing.push(Pair { source: i, target: j, premises: premise_matching(&unsorted, &target_rules[j].premises) });
            }
            _ => {
                failure.get_or_insert(Verdict::Counterexample {
                    kind: CounterexampleKind::SourceRuleWithoutMatch,
                    offending: Offending { rule: None, conclusion: r.conclusion.clone(), premises: r.premises.clone() },
                });
            }
        }
    }
    if failure.is_none() {
        if let Some(j) = taken.iter().position(|t| !t) {
            let r = &target_rules[j];
            failure = Some(Verdict::Counterexample {
                kind: CounterexampleKind::TargetRuleWithoutPreimage,
                offending: Offending { rule: None, conclusion: r.conclusion.clone(), premises: r.premises.clone() },
            });
        }
    }

    let audit = if enc.preserves_rule_instances() {
        let a = audit_instances(enc, sig, source.as_ref(), target.as_ref(), s, &encoded, budget)?;
        if failure.is_none() {
            if let Some(inst) = a.unmatched_target.first() {
                failure = Some(Verdict::Counterexample {
                    kind: CounterexampleKind::TargetRuleWithoutPreimage,
                    offending: Offending {
                        rule: Some(inst.rule),
                        conclusion: inst.conclusion.clone(),
                        premises: inst.premises.clone(),
                    },
                });
            }
        }
        Some(a)
    } else {
        None
    };

    Ok(AdequacyReport {
        direction: enc.name().to_string(),
        conclusion: s.clone(),
        encoded,
        source_rules,
        target_rules,
        pairing,
        verdict: failure.unwrap_or(Verdict::Bijective),
        audit,
    })
}

/// Instances are compared on their encoded conclusion and premises; the
/// rule name is reported but not compared, since decision rules are named
/// differently in the two calculi.
fn audit_instances(
    enc: &dyn Encoding,
    sig: &Signature,
    source: &dyn Calculus,
    target: &dyn Calculus,
    s: &Sequent,
    encoded: &Sequent,
    budget: &Budget,
) -> Result<InstanceAudit> {
    let src = source.rule_instances(s, budget)?;
    let tgt = target.rule_instances(encoded, budget)?;
    let mut images = BTreeSet::new();
    for inst in &src {
        images.insert((enc.encode(sig, &inst.conclusion)?, encode_all(enc, sig, &inst.premises)?));
    }
    let mut unmatched: Vec<RuleInstance> = tgt
        .iter()
        .filter(|t| !images.contains(&(t.conclusion.clone(), t.premises.clone())))
        .cloned()
        .collect();
    unmatched.sort();
    unmatched.dedup();
    Ok(InstanceAudit { source_instances: src.len(), target_instances: tgt.len(), unmatched_target: unmatched })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum GlobalVerdict {
    Agree { provable: bool },
    Disagree { source: Status, target: Status },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalReport {
    pub direction: String,
    pub source: ProofSearchResult,
    pub target: ProofSearchResult,
    #[serde(flatten)]
    pub verdict: GlobalVerdict,
}

/// Run the bounded prover on a sequent and on its encoding at equal depth.
pub fn check_global_adequacy(
    enc: &dyn Encoding,
    sig: &Signature,
    s: &Sequent,
    depth: usize,
    budget: &Budget,
) -> Result<GlobalReport> {
    let Setup { source, target, encoded } = setup(enc, sig, s)?;
    let (a, b) = rayon::join(|| prove(source.as_ref(), s, depth, budget), || prove(target.as_ref(), &encoded, depth, budget));
    let (a, b) = (a?, b?);
    let verdict = match (a.status, b.status) {
        (Status::Open, _) | (_, Status::Open) => GlobalVerdict::Inconclusive,
        (x, y) if x == y => GlobalVerdict::Agree { provable: x == Status::Proved },
        (x, y) => GlobalVerdict::Disagree { source: x, target: y },
    };
    Ok(GlobalReport { direction: enc.name().to_string(), source: a, target: b, verdict })
}

/// The outcome of checking one corpus case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseReport {
    pub index: usize,
    pub signature: SignatureSpec,
    pub focal: AdequacyReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub global: Option<GlobalReport>,
}

/// Check every case in parallel, each under its own budget of `limit`.
/// Results come back in corpus order.
pub fn check_cases(enc: &dyn Encoding, cases: &[Case], depth: Option<usize>, limit: u64) -> Result<Vec<CaseReport>> {
    cases
        .par_iter()
        .enumerate()
        .map(|(index, c)| {
            let focal = check_focal_adequacy(enc, &c.signature, &c.sequent, &Budget::new(limit))?;
            let global = match depth {
                Some(d) => Some(check_global_adequacy(enc, &c.signature, &c.sequent, d, &Budget::new(limit))?),
                None => None,
            };
            Ok(CaseReport { index, signature: c.signature.spec(), focal, global })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::calculus;
    use crate::encoding::encoding;
    use crate::signature::builtin;
    use crate::syntax::ParseMode;

    fn seq(calc: &dyn Calculus, text: &str) -> Sequent {
        calc.parse_sequent(text, ParseMode::User).unwrap()
    }

    #[test]
    fn identity_proves_once() {
        let c = calculus("classical", builtin("mall").unwrap()).unwrap();
        let r = prove(c.as_ref(), &seq(c.as_ref(), "lin:p |- lin:p"), 1, &Budget::default()).unwrap();
        assert_eq!((r.status, r.count), (Status::Proved, 1));
        assert_eq!(r.derivation.unwrap().height(), 1);
    }

    #[test]
    fn lone_negative_atom_is_exhausted() {
        let c = calculus("intuitionistic", builtin("mall").unwrap()).unwrap();
        for depth in 1..4 {
            let r = prove(c.as_ref(), &seq(c.as_ref(), "|- lin:'n"), depth, &Budget::default()).unwrap();
            assert_eq!(r.status, Status::Exhausted);
        }
    }

    #[test]
    fn prove_rejects_zero_depth_and_focused() {
        let c = calculus("classical", builtin("mall").unwrap()).unwrap();
        let s = seq(c.as_ref(), "lin:p |- lin:p");
        assert!(prove(c.as_ref(), &s, 0, &Budget::default()).is_err());
        let f = seq(c.as_ref(), "lin:p |- [p] ; .");
        assert!(prove(c.as_ref(), &f, 1, &Budget::default()).is_err());
    }

    #[test]
    fn c2i_identity_is_bijective() {
        let sig = builtin("mall").unwrap();
        let c = calculus("classical", sig.clone()).unwrap();
        let s = seq(c.as_ref(), "lin:p |- lin:p");
        let r = check_focal_adequacy(encoding("c2i").unwrap(), &sig, &s, &Budget::default()).unwrap();
        assert!(r.verdict.is_bijective());
        assert_eq!(r.pairing.len(), 1);
        assert_eq!(r.encoded.to_string(), "lin:p, lin:(p -o 'k) |- lin:'k");
    }

    #[test]
    fn naive_control_fails_at_instance_level() {
        let sig = builtin("mall").unwrap();
        let c = calculus("intuitionistic", sig.clone()).unwrap();
        let s = seq(c.as_ref(), "lin:(p -o 'n) |- lin:q");
        let r = check_focal_adequacy(encoding("naive-i2c").unwrap(), &sig, &s, &Budget::default()).unwrap();
        let Verdict::Counterexample { kind, offending } = r.verdict else { panic!("expected a counterexample") };
        assert_eq!(kind, CounterexampleKind::TargetRuleWithoutPreimage);
        assert_eq!(offending.rule, Some(Rule::LrLolli));
        let shown: Vec<String> = offending.premises.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec![". |- [p] ; lin:q", ". ; ['n] |- ."]);

        let r = check_focal_adequacy(encoding("i2c").unwrap(), &sig, &s, &Budget::default()).unwrap();
        assert!(r.verdict.is_bijective());
    }

    #[test]
    fn global_depth_too_small_is_inconclusive() {
        let sig = builtin("mall").unwrap();
        let c = calculus("classical", sig.clone()).unwrap();
        let s = seq(c.as_ref(), "lin:p, lin:q |- lin:(p * q)");
        let enc = encoding("c2i").unwrap();
        let r = check_global_adequacy(enc, &sig, &s, 1, &Budget::default()).unwrap();
        assert_eq!(r.verdict, GlobalVerdict::Agree { provable: true });
        let s = seq(c.as_ref(), "lin:p |- lin:(p * ![lin] 'n)");
        let r = check_global_adequacy(enc, &sig, &s, 1, &Budget::default()).unwrap();
        assert_eq!(r.verdict, GlobalVerdict::Inconclusive);
    }
}
