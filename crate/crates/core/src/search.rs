//! Calculus-independent machinery: resource budgets, instrumentation, the
//! active-phase scheduler, and the assembly of synthetic rules out of
//! decision, focus and active steps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::Rng;

use crate::error::{Error, Result};
use crate::syntax::Zone;
use crate::trace::{Choice, Rule, Step, Trace};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A shared cap on the number of sequents constructed by a search.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn charge(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before + n > self.limit {
            Err(Error::ResourceLimit { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeEvent {
    /// A binary focus rule enumerated every distribution of the restricted
    /// entries: `enumerated` candidate premise pairs for `left` restricted
    /// left entries and `right` restricted right entries.
    Split { rule: Rule, left: usize, right: usize, enumerated: usize },
    /// `rr!` or `lr?` at `zone` fired with these passive zones present.
    Promotion { rule: Rule, zone: Zone, passive: Vec<Zone> },
}

pub trait Probe: Send + Sync {
    fn record(&self, event: ProbeEvent);
}

/// A probe that keeps every event, for tests.
#[derive(Default)]
pub struct Recorder(Mutex<Vec<ProbeEvent>>);

impl Recorder {
    pub fn events(&self) -> Vec<ProbeEvent> {
        self.0.lock().unwrap().clone()
    }
}

impl Probe for Recorder {
    fn record(&self, event: ProbeEvent) {
        self.0.lock().unwrap().push(event);
    }
}

/// Chooses which active formula to decompose next. Candidates are offered
/// in canonical order: right-active before left-active, each side sorted.
pub trait Scheduler {
    fn pick(&mut self, candidates: usize) -> usize;
}

pub struct Canonical;

impl Scheduler for Canonical {
    fn pick(&mut self, _: usize) -> usize {
        0
    }
}

pub struct RandomOrder<R: Rng>(pub R);

impl<R: Rng> Scheduler for RandomOrder<R> {
    fn pick(&mut self, candidates: usize) -> usize {
        self.0.gen_range(0..candidates)
    }
}

/// One application of a focus rule.
#[derive(Clone, Debug)]
pub struct FocusInstance<S> {
    pub rule: Rule,
    pub choice: Choice,
    pub premises: Vec<S>,
}

/// The per-calculus primitives the generic phase machinery is built on.
pub(crate) trait Engine: Sync {
    type Seq: Clone + Ord + Hash + Debug + Send + Sync;

    fn is_focused(&self, s: &Self::Seq) -> bool;
    fn decide(&self, s: &Self::Seq) -> Vec<(Step, Self::Seq)>;
    fn focus_step(&self, s: &Self::Seq) -> Vec<FocusInstance<Self::Seq>>;
    /// Number of active formulas left; zero means neutral.
    fn active_candidates(&self, s: &Self::Seq) -> usize;
    /// Decompose the `pick`-th active formula in canonical order.
    fn active_step(&self, s: &Self::Seq, pick: usize) -> (Rule, Vec<Self::Seq>);
}

pub(crate) struct Expansion<S> {
    pub premises: Vec<S>,
    pub traces: BTreeSet<Trace>,
}

pub(crate) fn normalize<E: Engine>(
    e: &E,
    s: &E::Seq,
    sched: &mut dyn Scheduler,
    budget: &Budget,
) -> Result<(Vec<E::Seq>, Vec<Rule>)> {
    let mut out = Vec::new();
    let mut rules = Vec::new();
    let mut work = vec![s.clone()];
    while let Some(cur) = work.pop() {
        let n = e.active_candidates(&cur);
        if n == 0 {
            out.push(cur);
            continue;
        }
        let pick = sched.pick(n);
        let (rule, premises) = e.active_step(&cur, pick);
        budget.charge(premises.len() as u64)?;
        rules.push(rule);
        work.extend(premises.into_iter().rev());
    }
    out.sort();
    Ok((out, rules))
}

type Branch<S> = (Vec<Step>, Vec<S>);

/// Every way of running the focus phase to completion from a focused
/// sequent: the focus steps taken, and the active sequents left over.
pub(crate) fn expand_focus<E: Engine>(e: &E, s: &E::Seq, budget: &Budget) -> Result<Vec<Branch<E::Seq>>> {
    let mut out = Vec::new();
    for inst in e.focus_step(s) {
        budget.charge(inst.premises.len() as u64 + 1)?;
        let mut partial: Vec<Branch<E::Seq>> =
            vec![(vec![Step::Focus { rule: inst.rule, choice: inst.choice.clone() }], Vec::new())];
        for p in &inst.premises {
            let sub = if e.is_focused(p) { expand_focus(e, p, budget)? } else { vec![(Vec::new(), vec![p.clone()])] };
            let mut next = Vec::with_capacity(partial.len() * sub.len());
            for (steps, actives) in &partial {
                for (s2, a2) in &sub {
                    let mut steps = steps.clone();
                    steps.extend(s2.iter().cloned());
                    let mut actives = actives.clone();
                    actives.extend(a2.iter().cloned());
                    next.push((steps, actives));
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        out.extend(partial);
    }
    Ok(out)
}

/// Synthetic rules with a neutral conclusion, keyed by premise multiset.
pub(crate) fn synthetic<E: Engine>(e: &E, s: &E::Seq, budget: &Budget) -> Result<Vec<Expansion<E::Seq>>> {
    let mut table: BTreeMap<Vec<E::Seq>, BTreeSet<Trace>> = BTreeMap::new();
    for (decision, focused) in e.decide(s) {
        budget.charge(1)?;
        for (steps, actives) in expand_focus(e, &focused, budget)? {
            let mut trace = vec![decision.clone()];
            trace.extend(steps);
            let mut premises = Vec::new();
            for a in &actives {
                let (neutral, rules) = normalize(e, a, &mut Canonical, budget)?;
                premises.extend(neutral);
                trace.push(Step::Active { rules });
            }
            premises.sort();
            table.entry(premises).or_default().insert(trace);
        }
    }
    Ok(table.into_iter().map(|(premises, traces)| Expansion { premises, traces }).collect())
}

/// Re-run a recorded trace from its conclusion, returning the premises.
pub(crate) fn replay<E: Engine>(e: &E, s: &E::Seq, trace: &[Step], budget: &Budget) -> Result<Vec<E::Seq>> {
    let bad = |msg: String| Error::IllFormed(format!("trace does not replay: {msg}"));
    let mut steps = trace.iter();
    let first = steps.next().ok_or_else(|| bad("empty trace".into()))?;
    let focused = e
        .decide(s)
        .into_iter()
        .find(|(d, _)| d == first)
        .map(|(_, f)| f)
        .ok_or_else(|| bad(format!("decision {first:?} not available")))?;
    let mut stack = vec![focused];
    let mut actives = Vec::new();
    while let Some(cur) = stack.pop() {
        if !e.is_focused(&cur) {
            actives.push(cur);
            continue;
        }
        let Some(Step::Focus { rule, choice }) = steps.next() else {
            return Err(bad(format!("expected a focus step for {cur:?}")));
        };
        let inst = e
            .focus_step(&cur)
            .into_iter()
            .find(|i| i.rule == *rule && i.choice == *choice)
            .ok_or_else(|| bad(format!("focus rule {rule} not applicable")))?;
        stack.extend(inst.premises.into_iter().rev());
    }
    let mut premises = Vec::new();
    for a in &actives {
        let Some(Step::Active { rules }) = steps.next() else {
            return Err(bad("missing active step".into()));
        };
        let (neutral, applied) = normalize(e, a, &mut Canonical, budget)?;
        if &applied != rules {
            return Err(bad(format!("active rules {applied:?} differ from recorded {rules:?}")));
        }
        premises.extend(neutral);
    }
    if steps.next().is_some() {
        return Err(bad("trailing steps".into()));
    }
    premises.sort();
    Ok(premises)
}

/// A single rule application met during decision and focus phases.
pub(crate) struct RawInstance<S> {
    pub rule: Rule,
    pub conclusion: S,
    pub premises: Vec<S>,
}

/// All decision and focus rule instances reachable from a neutral sequent.
pub(crate) fn instances<E: Engine>(e: &E, s: &E::Seq, budget: &Budget) -> Result<Vec<RawInstance<E::Seq>>> {
    fn walk<E: Engine>(e: &E, s: &E::Seq, budget: &Budget, out: &mut Vec<RawInstance<E::Seq>>) -> Result<()> {
        for inst in e.focus_step(s) {
            budget.charge(1)?;
            for p in &inst.premises {
                if e.is_focused(p) {
                    walk(e, p, budget, out)?;
                }
            }
            out.push(RawInstance { rule: inst.rule, conclusion: s.clone(), premises: inst.premises });
        }
        Ok(())
    }
    let mut out = Vec::new();
    for (d, f) in e.decide(s) {
        let Step::Decide { rule, .. } = d else { unreachable!() };
        walk(e, &f, budget, &mut out)?;
        out.push(RawInstance { rule, conclusion: s.clone(), premises: vec![f] });
    }
    Ok(out)
}

/// All subsets of `n` restricted entries, as bit masks over `0..n`.
pub(crate) fn masks(n: usize) -> impl Iterator<Item = u64> {
    assert!(n < 63, "too many restricted entries to split");
    0..(1u64 << n)
}
