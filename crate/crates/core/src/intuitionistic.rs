//! The focused intuitionistic restriction: one formula on the right.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classical::{bag_or_dot, bracketed, bracketed_prefix, ctx_or_dot, top_level_semicolon};
use crate::context::{parse_bag, parse_context, split_list, Bag, Context, ZonedFormula};
use crate::error::{Error, ParseError, Result};
use crate::search::{self, masks, Budget, Engine, FocusInstance, Probe, ProbeEvent, Scheduler};
use crate::signature::Signature;
use crate::syntax::{parse_formula_with, Formula, Node, ParseMode, Zone};
use crate::trace::{Choice, Rule, Step, Trace};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ISequent {
    RightFocus { left: Context, focus: Formula },
    LeftFocus { left: Context, focus: Formula, right: ZonedFormula },
    ActiveR { left: Context, left_active: Bag, right_active: Formula },
    ActiveP { left: Context, left_active: Bag, right: ZonedFormula },
}

impl ISequent {
    pub fn neutral(left: Context, right: ZonedFormula) -> Self {
        ISequent::ActiveP { left, left_active: Bag::new(), right }
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self, ISequent::ActiveP { left_active, .. } if left_active.is_empty())
    }

    pub fn is_focused(&self) -> bool {
        matches!(self, ISequent::RightFocus { .. } | ISequent::LeftFocus { .. })
    }

    pub fn left(&self) -> &Context {
        match self {
            ISequent::RightFocus { left, .. }
            | ISequent::LeftFocus { left, .. }
            | ISequent::ActiveR { left, .. }
            | ISequent::ActiveP { left, .. } => left,
        }
    }

    /// The right passive entry, when the shape has one.
    pub fn right(&self) -> Option<&ZonedFormula> {
        match self {
            ISequent::LeftFocus { right, .. } | ISequent::ActiveP { right, .. } => Some(right),
            _ => None,
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = self.left().iter().map(|z| &z.formula).collect();
        match self {
            ISequent::RightFocus { focus, .. } => out.push(focus),
            ISequent::LeftFocus { focus, right, .. } => {
                out.push(focus);
                out.push(&right.formula);
            }
            ISequent::ActiveR { left_active, right_active, .. } => {
                out.extend(left_active.items());
                out.push(right_active);
            }
            ISequent::ActiveP { left_active, right, .. } => {
                out.extend(left_active.items());
                out.push(&right.formula);
            }
        }
        out
    }

    pub fn parse(text: &str, sig: &Signature, mode: ParseMode) -> Result<Self, ParseError> {
        let turn = text
            .find("|-")
            .ok_or_else(|| ParseError::Syntax { pos: text.len(), msg: "expected `|-`".into() })?;
        if let Some(again) = text[turn + 2..].find("|-") {
            return Err(ParseError::Syntax { pos: turn + 2 + again, msg: "more than one `|-`".into() });
        }
        let (lhs, rhs, roff) = (&text[..turn], &text[turn + 2..], turn + 2);

        let (gamma, left_focus, omega) = match top_level_semicolon(lhs) {
            Some(i) => {
                let rest = &lhs[i + 1..];
                match bracketed(rest) {
                    Some((a, inner)) => {
                        let f = parse_formula_with(inner, Some(sig), mode).map_err(|e| e.shifted(i + 1 + a))?;
                        (parse_context(&lhs[..i], 0, sig, mode)?, Some(f), Bag::new())
                    }
                    None => (parse_context(&lhs[..i], 0, sig, mode)?, None, parse_bag(rest, i + 1, sig, mode)?),
                }
            }
            None => (parse_context(lhs, 0, sig, mode)?, None, Bag::new()),
        };

        let one_entry = |piece: &str, off: usize| -> Result<ZonedFormula, ParseError> {
            let c = parse_context(piece, off, sig, mode)?;
            if c.len() != 1 {
                return Err(ParseError::Syntax {
                    pos: off,
                    msg: format!("exactly one right-hand entry is required, found {}", c.len()),
                });
            }
            Ok(c.entries()[0].clone())
        };
        let empty = |piece: &str| split_list(piece).is_empty();

        if let Some((a, inner, after)) = bracketed_prefix(rhs) {
            let f = parse_formula_with(inner, Some(sig), mode).map_err(|e| e.shifted(roff + a))?;
            let tail = rhs[after..].trim();
            if !(tail.is_empty() || tail.strip_prefix(';').is_some_and(empty)) {
                return Err(ParseError::Syntax { pos: roff + after, msg: "nothing may follow a right focus".into() });
            }
            if left_focus.is_some() {
                return Err(ParseError::Syntax { pos: turn, msg: "a sequent has at most one focus".into() });
            }
            if !omega.is_empty() {
                return Err(ParseError::Syntax { pos: turn, msg: "no left-active formulas alongside a right focus".into() });
            }
            return Ok(ISequent::RightFocus { left: gamma, focus: f });
        }

        match top_level_semicolon(rhs) {
            Some(i) => {
                let (x, y) = (&rhs[..i], &rhs[i + 1..]);
                if left_focus.is_some() {
                    return Err(ParseError::Syntax { pos: roff, msg: "a left focus takes a single right entry".into() });
                }
                match (empty(x), empty(y)) {
                    (true, false) => Ok(ISequent::ActiveP { left: gamma, left_active: omega, right: one_entry(y, roff + i + 1)? }),
                    (false, true) => {
                        let xs = split_list(x);
                        if xs.len() != 1 {
                            return Err(ParseError::Syntax { pos: roff, msg: "exactly one right-active formula is allowed".into() });
                        }
                        let f = parse_formula_with(xs[0].1, Some(sig), mode).map_err(|e| e.shifted(roff + xs[0].0))?;
                        Ok(ISequent::ActiveR { left: gamma, left_active: omega, right_active: f })
                    }
                    _ => Err(ParseError::Syntax {
                        pos: roff,
                        msg: "exactly one of the right-active and right-passive parts must be filled".into(),
                    }),
                }
            }
            None => {
                let right = one_entry(rhs, roff)?;
                Ok(match left_focus {
                    Some(n) => ISequent::LeftFocus { left: gamma, focus: n, right },
                    None => ISequent::ActiveP { left: gamma, left_active: omega, right },
                })
            }
        }
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let bad = |m: String| Err(Error::IllFormed(m));
        for f in self.formulas() {
            if !f.well_formed() {
                return bad(format!("`{f}` violates a polarity constraint"));
            }
            if f.has_classical_only() {
                return bad(format!("`{f}` uses a connective without intuitionistic rules (par or bot)"));
            }
            if let Some(z) = f.zones().into_iter().find(|z| !sig.contains(z)) {
                return bad(format!("zone `{z}` in `{f}` is not in the signature"));
            }
        }
        for zf in self.left().iter().chain(self.right()) {
            if !sig.contains(&zf.zone) {
                return bad(format!("zone `{}` is not in the signature", zf.zone));
            }
        }
        if let Some(zf) = self.left().iter().find(|zf| !zf.formula.is_pat()) {
            return bad(format!("left passive entry `{zf}` must be negative or a positive atom"));
        }
        if let Some(zf) = self.right().filter(|zf| !zf.formula.is_nat()) {
            return bad(format!("right passive entry `{zf}` must be positive or a negative atom"));
        }
        match self {
            ISequent::RightFocus { focus, .. } if !focus.is_positive() => bad(format!("right focus `{focus}` must be positive")),
            ISequent::LeftFocus { focus, .. } if !focus.is_negative() => bad(format!("left focus `{focus}` must be negative")),
            ISequent::ActiveR { left_active, right_active, .. } => {
                if !right_active.is_pat() {
                    return bad(format!("right active `{right_active}` must be negative or a positive atom"));
                }
                check_left_active(left_active)
            }
            ISequent::ActiveP { left_active, .. } => check_left_active(left_active),
            _ => Ok(()),
        }
    }
}

fn check_left_active(b: &Bag) -> Result<()> {
    match b.items().iter().find(|f| !f.is_nat()) {
        Some(f) => Err(Error::IllFormed(format!("left active `{f}` must be positive or a negative atom"))),
        None => Ok(()),
    }
}

impl fmt::Display for ISequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ISequent::RightFocus { left, focus } => write!(f, "{} |- [{focus}]", ctx_or_dot(left)),
            ISequent::LeftFocus { left, focus, right } => write!(f, "{} ; [{focus}] |- {right}", ctx_or_dot(left)),
            ISequent::ActiveP { left, right, .. } if self.is_neutral() => {
                if left.is_empty() {
                    write!(f, "|- {right}")
                } else {
                    write!(f, "{left} |- {right}")
                }
            }
            ISequent::ActiveR { left, left_active, right_active } => {
                let r = if right_active.is_atom() { right_active.to_string() } else { format!("({right_active})") };
                write!(f, "{} ; {} |- {r} ; .", ctx_or_dot(left), bag_or_dot(left_active))
            }
            ISequent::ActiveP { left, left_active, right } => {
                write!(f, "{} ; {} |- . ; {right}", ctx_or_dot(left), bag_or_dot(left_active))
            }
        }
    }
}

impl fmt::Debug for ISequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ISynthetic {
    pub conclusion: ISequent,
    pub premises: Vec<ISequent>,
    pub traces: Vec<Trace>,
}

#[derive(Clone)]
pub struct Intuitionistic {
    sig: Signature,
    probe: Option<Arc<dyn Probe>>,
}

impl Intuitionistic {
    pub fn new(sig: Signature) -> Self {
        Intuitionistic { sig, probe: None }
    }

    pub fn with_probe(sig: Signature, probe: Arc<dyn Probe>) -> Self {
        Intuitionistic { sig, probe: Some(probe) }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    fn emit(&self, e: ProbeEvent) {
        if let Some(p) = &self.probe {
            p.record(e);
        }
    }

    pub fn decide(&self, s: &ISequent) -> Vec<(Rule, ISequent)> {
        Engine::decide(self, s)
            .into_iter()
            .map(|(step, f)| match step {
                Step::Decide { rule, .. } => (rule, f),
                _ => unreachable!(),
            })
            .collect()
    }

    pub fn focus_step(&self, s: &ISequent) -> Vec<FocusInstance<ISequent>> {
        Engine::focus_step(self, s)
    }

    pub fn active_normalize(&self, s: &ISequent, budget: &Budget) -> Result<Vec<ISequent>> {
        Ok(search::normalize(self, s, &mut search::Canonical, budget)?.0)
    }

    pub fn active_normalize_with(&self, s: &ISequent, sched: &mut dyn Scheduler, budget: &Budget) -> Result<Vec<ISequent>> {
        Ok(search::normalize(self, s, sched, budget)?.0)
    }

    pub fn synthetic_expansions(&self, s: &ISequent, budget: &Budget) -> Result<Vec<ISynthetic>> {
        if !s.is_neutral() {
            return Err(Error::IllFormed(format!("`{s}` is not neutral")));
        }
        Ok(search::synthetic(self, s, budget)?
            .into_iter()
            .map(|x| ISynthetic { conclusion: s.clone(), premises: x.premises, traces: x.traces.into_iter().collect() })
            .collect())
    }

    pub fn replay(&self, s: &ISequent, trace: &[Step], budget: &Budget) -> Result<Vec<ISequent>> {
        search::replay(self, s, trace, budget)
    }

    pub(crate) fn instances(&self, s: &ISequent, budget: &Budget) -> Result<Vec<search::RawInstance<ISequent>>> {
        search::instances(self, s, budget)
    }

    fn splits(
        &self,
        rule: Rule,
        left: &Context,
        mut build: impl FnMut(Context, Context) -> Vec<ISequent>,
    ) -> Vec<FocusInstance<ISequent>> {
        let (lu, lr) = left.partition(&self.sig);
        let n = lr.len();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut enumerated = 0;
        for mask in masks(n) {
            enumerated += 1;
            let mut first: Vec<_> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| lr[i].clone()).collect();
            let second: Vec<_> = (0..n).filter(|&i| mask & (1 << i) == 0).map(|i| lr[i].clone()).collect();
            first.sort();
            let choice = Choice::Split { left: first.clone(), right: Vec::new() };
            if !seen.insert(choice.clone()) {
                continue;
            }
            let premises = build(lu.union(&Context::from(first)), lu.union(&Context::from(second)));
            out.push(FocusInstance { rule, choice, premises });
        }
        self.emit(ProbeEvent::Split { rule, left: n, right: 0, enumerated });
        out
    }

    fn promotion_ok<'a>(&self, rule: Rule, z: &Zone, passive: impl Iterator<Item = &'a ZonedFormula> + Clone) -> bool {
        let ok = passive.clone().all(|x| self.sig.le(z, &x.zone));
        if ok {
            self.emit(ProbeEvent::Promotion { rule, zone: z.clone(), passive: passive.map(|x| x.zone.clone()).collect() });
        }
        ok
    }
}

impl Engine for Intuitionistic {
    type Seq = ISequent;

    fn is_focused(&self, s: &ISequent) -> bool {
        s.is_focused()
    }

    fn decide(&self, s: &ISequent) -> Vec<(Step, ISequent)> {
        let ISequent::ActiveP { left, left_active, right } = s else { return Vec::new() };
        if !left_active.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        if right.formula.is_positive() {
            out.push((
                Step::Decide { rule: Rule::Dr, entry: right.clone() },
                ISequent::RightFocus { left: left.clone(), focus: right.formula.clone() },
            ));
        }
        for i in left.distinct_indices() {
            let zf = &left.entries()[i];
            if !zf.formula.is_negative() {
                continue;
            }
            let (rule, rest) = if self.sig.is_unrestricted(&zf.zone) {
                (Rule::Udl, left.clone())
            } else {
                (Rule::Rdl, left.without_index(i))
            };
            out.push((
                Step::Decide { rule, entry: zf.clone() },
                ISequent::LeftFocus { left: rest, focus: zf.formula.clone(), right: right.clone() },
            ));
        }
        out
    }

    fn focus_step(&self, s: &ISequent) -> Vec<FocusInstance<ISequent>> {
        let one = |rule, premises| vec![FocusInstance { rule, choice: Choice::None, premises }];
        match s {
            ISequent::RightFocus { left, focus } => match focus.node() {
                Node::PosAtom(_) => left
                    .distinct_indices()
                    .into_iter()
                    .filter(|&i| &left.entries()[i].formula == focus && left.without_index(i).all_unrestricted(&self.sig))
                    .map(|i| FocusInstance {
                        rule: Rule::Pr,
                        choice: Choice::Consume { entry: left.entries()[i].clone() },
                        premises: Vec::new(),
                    })
                    .collect(),
                Node::Tensor(a, b) => self.splits(Rule::RrTensor, left, |l1, l2| {
                    vec![
                        ISequent::RightFocus { left: l1, focus: a.clone() },
                        ISequent::RightFocus { left: l2, focus: b.clone() },
                    ]
                }),
                Node::One if left.all_unrestricted(&self.sig) => one(Rule::RrOne, Vec::new()),
                Node::Plus(a, b) => vec![
                    FocusInstance {
                        rule: Rule::RrPlus1,
                        choice: Choice::None,
                        premises: vec![ISequent::RightFocus { left: left.clone(), focus: a.clone() }],
                    },
                    FocusInstance {
                        rule: Rule::RrPlus2,
                        choice: Choice::None,
                        premises: vec![ISequent::RightFocus { left: left.clone(), focus: b.clone() }],
                    },
                ],
                Node::Bang(z, a) if self.promotion_ok(Rule::RrBang, z, left.iter()) => one(
                    Rule::RrBang,
                    vec![ISequent::ActiveR { left: left.clone(), left_active: Bag::new(), right_active: a.clone() }],
                ),
                _ => Vec::new(),
            },
            ISequent::LeftFocus { left, focus, right } => match focus.node() {
                Node::NegAtom(_) if &right.formula == focus && left.all_unrestricted(&self.sig) => vec![FocusInstance {
                    rule: Rule::Nl,
                    choice: Choice::Consume { entry: right.clone() },
                    premises: Vec::new(),
                }],
                Node::With(a, b) => vec![
                    FocusInstance {
                        rule: Rule::LrWith1,
                        choice: Choice::None,
                        premises: vec![ISequent::LeftFocus { left: left.clone(), focus: a.clone(), right: right.clone() }],
                    },
                    FocusInstance {
                        rule: Rule::LrWith2,
                        choice: Choice::None,
                        premises: vec![ISequent::LeftFocus { left: left.clone(), focus: b.clone(), right: right.clone() }],
                    },
                ],
                Node::Lolli(a, b) => self.splits(Rule::LrLolli, left, |l1, l2| {
                    vec![
                        ISequent::RightFocus { left: l1, focus: a.clone() },
                        ISequent::LeftFocus { left: l2, focus: b.clone(), right: right.clone() },
                    ]
                }),
                Node::Qmark(z, a) if self.promotion_ok(Rule::LrQmark, z, left.iter().chain(std::iter::once(right))) => one(
                    Rule::LrQmark,
                    vec![ISequent::ActiveP { left: left.clone(), left_active: Bag::from(vec![a.clone()]), right: right.clone() }],
                ),
                _ => Vec::new(),
            },
            _ => Vec::new(),
        }
    }

    fn active_candidates(&self, s: &ISequent) -> usize {
        match s {
            ISequent::ActiveR { left_active, .. } => 1 + left_active.len(),
            ISequent::ActiveP { left_active, .. } => left_active.len(),
            _ => 0,
        }
    }

    fn active_step(&self, s: &ISequent, pick: usize) -> (Rule, Vec<ISequent>) {
        let lin = self.sig.working().clone();
        if let ISequent::ActiveR { left, left_active, right_active } = s {
            if pick == 0 {
                let r = |omega: Bag, n: Formula| ISequent::ActiveR { left: left.clone(), left_active: omega, right_active: n };
                let p = |zf: ZonedFormula| ISequent::ActiveP { left: left.clone(), left_active: left_active.clone(), right: zf };
                return match right_active.node() {
                    Node::PosAtom(_) | Node::NegAtom(_) => (Rule::Ar, vec![p(ZonedFormula::new(lin, right_active.clone()))]),
                    Node::With(a, b) => (Rule::RrWith, vec![r(left_active.clone(), a.clone()), r(left_active.clone(), b.clone())]),
                    Node::Top => (Rule::RrTop, Vec::new()),
                    Node::Lolli(a, b) => (Rule::RrLolli, vec![r(left_active.with(a.clone()), b.clone())]),
                    Node::Qmark(z, a) => (Rule::RrQmark, vec![p(ZonedFormula::new(z.clone(), a.clone()))]),
                    _ => unreachable!("`{right_active}` cannot be right-active here"),
                };
            }
        }
        let (left, omega, i) = match s {
            ISequent::ActiveR { left, left_active, .. } => (left, left_active, pick - 1),
            ISequent::ActiveP { left, left_active, .. } => (left, left_active, pick),
            _ => unreachable!("active step on a focused sequent"),
        };
        let f = &omega.items()[i];
        let rest = omega.without_index(i);
        let mk = |omega: Bag, left: Context| match s {
            ISequent::ActiveR { right_active, .. } => {
                ISequent::ActiveR { left, left_active: omega, right_active: right_active.clone() }
            }
            ISequent::ActiveP { right, .. } => ISequent::ActiveP { left, left_active: omega, right: right.clone() },
            _ => unreachable!(),
        };
        match f.node() {
            Node::PosAtom(_) | Node::NegAtom(_) => (Rule::Al, vec![mk(rest, left.with(ZonedFormula::new(lin, f.clone())))]),
            Node::Tensor(a, b) => (Rule::LrTensor, vec![mk(rest.with(a.clone()).with(b.clone()), left.clone())]),
            Node::One => (Rule::LrOne, vec![mk(rest, left.clone())]),
            Node::Plus(a, b) => (Rule::LrPlus, vec![mk(rest.with(a.clone()), left.clone()), mk(rest.with(b.clone()), left.clone())]),
            Node::Zero => (Rule::LrZero, Vec::new()),
            Node::Bang(z, a) => (Rule::LrBang, vec![mk(rest, left.with(ZonedFormula::new(z.clone(), a.clone())))]),
            _ => unreachable!("`{f}` cannot be left-active"),
        }
    }
}
