//! The focused two-sided classical calculus.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::{parse_bag, parse_context, Bag, Context, ZonedFormula};
use crate::error::{Error, ParseError, Result};
use crate::search::{self, masks, Budget, Engine, FocusInstance, Probe, ProbeEvent, Scheduler};
use crate::signature::Signature;
use crate::syntax::{parse_formula_with, Formula, Node, ParseMode};
use crate::trace::{Choice, Rule, Step, Trace};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CSequent {
    RightFocus { left: Context, focus: Formula, right: Context },
    LeftFocus { left: Context, focus: Formula, right: Context },
    Active { left: Context, left_active: Bag, right_active: Bag, right: Context },
}

impl CSequent {
    pub fn neutral(left: Context, right: Context) -> Self {
        CSequent::Active { left, left_active: Bag::new(), right_active: Bag::new(), right }
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self, CSequent::Active { left_active, right_active, .. } if left_active.is_empty() && right_active.is_empty())
    }

    pub fn is_focused(&self) -> bool {
        !matches!(self, CSequent::Active { .. })
    }

    pub fn left(&self) -> &Context {
        match self {
            CSequent::RightFocus { left, .. } | CSequent::LeftFocus { left, .. } | CSequent::Active { left, .. } => left,
        }
    }

    pub fn right(&self) -> &Context {
        match self {
            CSequent::RightFocus { right, .. } | CSequent::LeftFocus { right, .. } | CSequent::Active { right, .. } => {
                right
            }
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = self.left().iter().map(|z| &z.formula).collect();
        out.extend(self.right().iter().map(|z| &z.formula));
        match self {
            CSequent::RightFocus { focus, .. } | CSequent::LeftFocus { focus, .. } => out.push(focus),
            CSequent::Active { left_active, right_active, .. } => {
                out.extend(left_active.items());
                out.extend(right_active.items());
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

        let (right_focus, xi, delta) = match bracketed_prefix(rhs) {
            Some((a, inner, after)) => {
                let f = parse_formula_with(inner, Some(sig), mode).map_err(|e| e.shifted(roff + a))?;
                let tail = rhs[after..].trim_start();
                let tail_off = roff + rhs.len() - tail.len();
                let delta = if tail.is_empty() {
                    Context::new()
                } else if let Some(t) = tail.strip_prefix(';') {
                    parse_context(t, tail_off + 1, sig, mode)?
                } else {
                    return Err(ParseError::Syntax { pos: tail_off, msg: "expected `;` after right focus".into() });
                };
                (Some(f), Bag::new(), delta)
            }
            None => match top_level_semicolon(rhs) {
                Some(i) => (
                    None,
                    parse_bag(&rhs[..i], roff, sig, mode)?,
                    parse_context(&rhs[i + 1..], roff + i + 1, sig, mode)?,
                ),
                None => (None, Bag::new(), parse_context(rhs, roff, sig, mode)?),
            },
        };

        match (left_focus, right_focus) {
            (Some(_), Some(_)) => Err(ParseError::Syntax { pos: turn, msg: "a sequent has at most one focus".into() }),
            (Some(n), None) => {
                if !xi.is_empty() {
                    return Err(ParseError::Syntax { pos: roff, msg: "no right-active formulas alongside a left focus".into() });
                }
                Ok(CSequent::LeftFocus { left: gamma, focus: n, right: delta })
            }
            (None, Some(p)) => {
                if !omega.is_empty() {
                    return Err(ParseError::Syntax { pos: turn, msg: "no left-active formulas alongside a right focus".into() });
                }
                Ok(CSequent::RightFocus { left: gamma, focus: p, right: delta })
            }
            (None, None) => Ok(CSequent::Active { left: gamma, left_active: omega, right_active: xi, right: delta }),
        }
    }

    /// Check the class restrictions on every position and every zone.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let bad = |m: String| Err(Error::IllFormed(m));
        for f in self.formulas() {
            if !f.well_formed() {
                return bad(format!("`{f}` violates a polarity constraint"));
            }
            if let Some(z) = f.zones().into_iter().find(|z| !sig.contains(z)) {
                return bad(format!("zone `{z}` in `{f}` is not in the signature"));
            }
        }
        for zf in self.left().iter().chain(self.right().iter()) {
            if !sig.contains(&zf.zone) {
                return bad(format!("zone `{}` is not in the signature", zf.zone));
            }
        }
        if let Some(zf) = self.left().iter().find(|zf| !zf.formula.is_pat()) {
            return bad(format!("left passive entry `{zf}` must be negative or a positive atom"));
        }
        if let Some(zf) = self.right().iter().find(|zf| !zf.formula.is_nat()) {
            return bad(format!("right passive entry `{zf}` must be positive or a negative atom"));
        }
        match self {
            CSequent::RightFocus { focus, .. } if !focus.is_positive() => bad(format!("right focus `{focus}` must be positive")),
            CSequent::LeftFocus { focus, .. } if !focus.is_negative() => bad(format!("left focus `{focus}` must be negative")),
            CSequent::Active { left_active, right_active, .. } => {
                if let Some(f) = left_active.items().iter().find(|f| !f.is_nat()) {
                    return bad(format!("left active `{f}` must be positive or a negative atom"));
                }
                if let Some(f) = right_active.items().iter().find(|f| !f.is_pat()) {
                    return bad(format!("right active `{f}` must be negative or a positive atom"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn top_level_semicolon(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ';' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// `s` is exactly `[ ... ]` up to whitespace: offset and contents.
pub(crate) fn bracketed(s: &str) -> Option<(usize, &str)> {
    let (a, inner, after) = bracketed_prefix(s)?;
    s[after..].trim().is_empty().then_some((a, inner))
}

/// `s` starts with a balanced `[ ... ]`: offset of contents, contents, end.
pub(crate) fn bracketed_prefix(s: &str) -> Option<(usize, &str, usize)> {
    let t = s.trim_start();
    if !t.starts_with('[') {
        return None;
    }
    let start = s.len() - t.len();
    let mut depth = 0i32;
    for (i, c) in t.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some((start + 1, &t[1..i], start + i + 1));
                }
            }
            _ => {}
        }
    }
    None
}

pub(crate) fn ctx_or_dot(c: &Context) -> String {
    if c.is_empty() {
        ".".into()
    } else {
        c.to_string()
    }
}

pub(crate) fn bag_or_dot(b: &Bag) -> String {
    if b.is_empty() {
        ".".into()
    } else {
        b.to_string()
    }
}

impl fmt::Display for CSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CSequent::RightFocus { left, focus, right } => {
                write!(f, "{} |- [{focus}] ; {}", ctx_or_dot(left), ctx_or_dot(right))
            }
            CSequent::LeftFocus { left, focus, right } => {
                write!(f, "{} ; [{focus}] |- {}", ctx_or_dot(left), ctx_or_dot(right))
            }
            CSequent::Active { left, right, .. } if self.is_neutral() => {
                let l = left.to_string();
                let r = right.to_string();
                match (l.is_empty(), r.is_empty()) {
                    (true, true) => f.write_str("|-"),
                    (true, false) => write!(f, "|- {r}"),
                    (false, true) => write!(f, "{l} |-"),
                    (false, false) => write!(f, "{l} |- {r}"),
                }
            }
            CSequent::Active { left, left_active, right_active, right } => write!(
                f,
                "{} ; {} |- {} ; {}",
                ctx_or_dot(left),
                bag_or_dot(left_active),
                bag_or_dot(right_active),
                ctx_or_dot(right)
            ),
        }
    }
}

impl fmt::Debug for CSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// A synthetic rule of the classical calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSynthetic {
    pub conclusion: CSequent,
    pub premises: Vec<CSequent>,
    pub traces: Vec<Trace>,
}

#[derive(Clone)]
pub struct Classical {
    sig: Signature,
    probe: Option<Arc<dyn Probe>>,
}

impl Classical {
    pub fn new(sig: Signature) -> Self {
        Classical { sig, probe: None }
    }

    pub fn with_probe(sig: Signature, probe: Arc<dyn Probe>) -> Self {
        Classical { sig, probe: Some(probe) }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    fn emit(&self, e: ProbeEvent) {
        if let Some(p) = &self.probe {
            p.record(e);
        }
    }

    fn require_neutral(&self, s: &CSequent) -> Result<()> {
        if s.is_neutral() {
            Ok(())
        } else {
            Err(Error::IllFormed(format!("`{s}` is not neutral")))
        }
    }

    pub fn decide(&self, s: &CSequent) -> Vec<(Rule, CSequent)> {
        Engine::decide(self, s)
            .into_iter()
            .map(|(step, f)| match step {
                Step::Decide { rule, .. } => (rule, f),
                _ => unreachable!(),
            })
            .collect()
    }

    pub fn focus_step(&self, s: &CSequent) -> Vec<FocusInstance<CSequent>> {
        Engine::focus_step(self, s)
    }

    pub fn active_normalize(&self, s: &CSequent, budget: &Budget) -> Result<Vec<CSequent>> {
        Ok(search::normalize(self, s, &mut search::Canonical, budget)?.0)
    }

    pub fn active_normalize_with(&self, s: &CSequent, sched: &mut dyn Scheduler, budget: &Budget) -> Result<Vec<CSequent>> {
        Ok(search::normalize(self, s, sched, budget)?.0)
    }

    pub fn synthetic_expansions(&self, s: &CSequent, budget: &Budget) -> Result<Vec<CSynthetic>> {
        self.require_neutral(s)?;
        Ok(search::synthetic(self, s, budget)?
            .into_iter()
            .map(|x| CSynthetic { conclusion: s.clone(), premises: x.premises, traces: x.traces.into_iter().collect() })
            .collect())
    }

    pub fn replay(&self, s: &CSequent, trace: &[Step], budget: &Budget) -> Result<Vec<CSequent>> {
        search::replay(self, s, trace, budget)
    }

    pub(crate) fn instances(&self, s: &CSequent, budget: &Budget) -> Result<Vec<search::RawInstance<CSequent>>> {
        search::instances(self, s, budget)
    }

    /// Distribute restricted entries between two premises in every way.
    fn splits(
        &self,
        rule: Rule,
        left: &Context,
        right: &Context,
        mut build: impl FnMut(Context, Context, Context, Context) -> Vec<CSequent>,
    ) -> Vec<FocusInstance<CSequent>> {
        let (lu, lr) = left.partition(&self.sig);
        let (ru, rr) = right.partition(&self.sig);
        let (n, m) = (lr.len(), rr.len());
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut enumerated = 0;
        for mask in masks(n + m) {
            enumerated += 1;
            let pick = |i: usize| mask & (1 << i) != 0;
            let l1: Vec<_> = (0..n).filter(|&i| pick(i)).map(|i| lr[i].clone()).collect();
            let l2: Vec<_> = (0..n).filter(|&i| !pick(i)).map(|i| lr[i].clone()).collect();
            let r1: Vec<_> = (0..m).filter(|&i| pick(n + i)).map(|i| rr[i].clone()).collect();
            let r2: Vec<_> = (0..m).filter(|&i| !pick(n + i)).map(|i| rr[i].clone()).collect();
            let choice = Choice::Split { left: sorted(l1.clone()), right: sorted(r1.clone()) };
            if !seen.insert(choice.clone()) {
                continue;
            }
            let premises = build(
                lu.union(&Context::from(l1)),
                ru.union(&Context::from(r1)),
                lu.union(&Context::from(l2)),
                ru.union(&Context::from(r2)),
            );
            out.push(FocusInstance { rule, choice, premises });
        }
        self.emit(ProbeEvent::Split { rule, left: n, right: m, enumerated });
        out
    }

    fn promotion_ok(&self, rule: Rule, z: &crate::Zone, left: &Context, right: &Context) -> bool {
        let ok = left.iter().chain(right.iter()).all(|x| self.sig.le(z, &x.zone));
        if ok {
            let passive = left.iter().chain(right.iter()).map(|x| x.zone.clone()).collect();
            self.emit(ProbeEvent::Promotion { rule, zone: z.clone(), passive });
        }
        ok
    }
}

fn sorted(mut v: Vec<ZonedFormula>) -> Vec<ZonedFormula> {
    v.sort();
    v
}

impl Engine for Classical {
    type Seq = CSequent;

    fn is_focused(&self, s: &CSequent) -> bool {
        s.is_focused()
    }

    fn decide(&self, s: &CSequent) -> Vec<(Step, CSequent)> {
        let CSequent::Active { left, right, .. } = s else { return Vec::new() };
        if !s.is_neutral() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for i in right.distinct_indices() {
            let zf = &right.entries()[i];
            if !zf.formula.is_positive() {
                continue;
            }
            let (rule, rest) = if self.sig.is_unrestricted(&zf.zone) {
                (Rule::Udr, right.clone())
            } else {
                (Rule::Rdr, right.without_index(i))
            };
            out.push((
                Step::Decide { rule, entry: zf.clone() },
                CSequent::RightFocus { left: left.clone(), focus: zf.formula.clone(), right: rest },
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
                CSequent::LeftFocus { left: rest, focus: zf.formula.clone(), right: right.clone() },
            ));
        }
        out
    }

    fn focus_step(&self, s: &CSequent) -> Vec<FocusInstance<CSequent>> {
        let one = |rule, premises| vec![FocusInstance { rule, choice: Choice::None, premises }];
        match s {
            CSequent::RightFocus { left, focus, right } => match focus.node() {
                Node::PosAtom(_) => {
                    if !right.all_unrestricted(&self.sig) {
                        return Vec::new();
                    }
                    let mut out = Vec::new();
                    for i in left.distinct_indices() {
                        let zf = &left.entries()[i];
                        if &zf.formula == focus && left.without_index(i).all_unrestricted(&self.sig) {
                            out.push(FocusInstance {
                                rule: Rule::Pr,
                                choice: Choice::Consume { entry: zf.clone() },
                                premises: Vec::new(),
                            });
                        }
                    }
                    out
                }
                Node::Tensor(a, b) => self.splits(Rule::RrTensor, left, right, |l1, r1, l2, r2| {
                    vec![
                        CSequent::RightFocus { left: l1, focus: a.clone(), right: r1 },
                        CSequent::RightFocus { left: l2, focus: b.clone(), right: r2 },
                    ]
                }),
                Node::One => {
                    if left.all_unrestricted(&self.sig) && right.all_unrestricted(&self.sig) {
                        one(Rule::RrOne, Vec::new())
                    } else {
                        Vec::new()
                    }
                }
                Node::Plus(a, b) => vec![
                    FocusInstance {
                        rule: Rule::RrPlus1,
                        choice: Choice::None,
                        premises: vec![CSequent::RightFocus { left: left.clone(), focus: a.clone(), right: right.clone() }],
                    },
                    FocusInstance {
                        rule: Rule::RrPlus2,
                        choice: Choice::None,
                        premises: vec![CSequent::RightFocus { left: left.clone(), focus: b.clone(), right: right.clone() }],
                    },
                ],
                Node::Zero => Vec::new(),
                Node::Bang(z, a) => {
                    if self.promotion_ok(Rule::RrBang, z, left, right) {
                        one(
                            Rule::RrBang,
                            vec![CSequent::Active {
                                left: left.clone(),
                                left_active: Bag::new(),
                                right_active: Bag::from(vec![a.clone()]),
                                right: right.clone(),
                            }],
                        )
                    } else {
                        Vec::new()
                    }
                }
                _ => Vec::new(),
            },
            CSequent::LeftFocus { left, focus, right } => match focus.node() {
                Node::NegAtom(_) => {
                    if !left.all_unrestricted(&self.sig) {
                        return Vec::new();
                    }
                    let mut out = Vec::new();
                    for i in right.distinct_indices() {
                        let zf = &right.entries()[i];
                        if &zf.formula == focus && right.without_index(i).all_unrestricted(&self.sig) {
                            out.push(FocusInstance {
                                rule: Rule::Nl,
                                choice: Choice::Consume { entry: zf.clone() },
                                premises: Vec::new(),
                            });
                        }
                    }
                    out
                }
                Node::With(a, b) => vec![
                    FocusInstance {
                        rule: Rule::LrWith1,
                        choice: Choice::None,
                        premises: vec![CSequent::LeftFocus { left: left.clone(), focus: a.clone(), right: right.clone() }],
                    },
                    FocusInstance {
                        rule: Rule::LrWith2,
                        choice: Choice::None,
                        premises: vec![CSequent::LeftFocus { left: left.clone(), focus: b.clone(), right: right.clone() }],
                    },
                ],
                Node::Top => Vec::new(),
                Node::Par(a, b) => self.splits(Rule::LrPar, left, right, |l1, r1, l2, r2| {
                    vec![
                        CSequent::LeftFocus { left: l1, focus: a.clone(), right: r1 },
                        CSequent::LeftFocus { left: l2, focus: b.clone(), right: r2 },
                    ]
                }),
                Node::Bot => {
                    if left.all_unrestricted(&self.sig) && right.all_unrestricted(&self.sig) {
                        one(Rule::LrBot, Vec::new())
                    } else {
                        Vec::new()
                    }
                }
                Node::Lolli(a, b) => self.splits(Rule::LrLolli, left, right, |l1, r1, l2, r2| {
                    vec![
                        CSequent::RightFocus { left: l1, focus: a.clone(), right: r1 },
                        CSequent::LeftFocus { left: l2, focus: b.clone(), right: r2 },
                    ]
                }),
                Node::Qmark(z, a) => {
                    if self.promotion_ok(Rule::LrQmark, z, left, right) {
                        one(
                            Rule::LrQmark,
                            vec![CSequent::Active {
                                left: left.clone(),
                                left_active: Bag::from(vec![a.clone()]),
                                right_active: Bag::new(),
                                right: right.clone(),
                            }],
                        )
                    } else {
                        Vec::new()
                    }
                }
                _ => Vec::new(),
            },
            CSequent::Active { .. } => Vec::new(),
        }
    }

    fn active_candidates(&self, s: &CSequent) -> usize {
        match s {
            CSequent::Active { left_active, right_active, .. } => left_active.len() + right_active.len(),
            _ => 0,
        }
    }

    fn active_step(&self, s: &CSequent, pick: usize) -> (Rule, Vec<CSequent>) {
        let CSequent::Active { left, left_active, right_active, right } = s else {
            unreachable!("active step on a focused sequent")
        };
        let lin = self.sig.working().clone();
        if pick < right_active.len() {
            let f = &right_active.items()[pick];
            let xi = right_active.without_index(pick);
            let mk = |xi: Bag, right: Context, omega: Bag| CSequent::Active {
                left: left.clone(),
                left_active: omega,
                right_active: xi,
                right,
            };
            match f.node() {
                Node::PosAtom(_) | Node::NegAtom(_) => {
                    (Rule::Ar, vec![mk(xi, right.with(ZonedFormula::new(lin, f.clone())), left_active.clone())])
                }
                Node::With(a, b) => (
                    Rule::RrWith,
                    vec![
                        mk(xi.with(a.clone()), right.clone(), left_active.clone()),
                        mk(xi.with(b.clone()), right.clone(), left_active.clone()),
                    ],
                ),
                Node::Top => (Rule::RrTop, Vec::new()),
                Node::Par(a, b) => (Rule::RrPar, vec![mk(xi.with(a.clone()).with(b.clone()), right.clone(), left_active.clone())]),
                Node::Bot => (Rule::RrBot, vec![mk(xi, right.clone(), left_active.clone())]),
                Node::Lolli(a, b) => (Rule::RrLolli, vec![mk(xi.with(b.clone()), right.clone(), left_active.with(a.clone()))]),
                Node::Qmark(z, a) => {
                    (Rule::RrQmark, vec![mk(xi, right.with(ZonedFormula::new(z.clone(), a.clone())), left_active.clone())])
                }
                _ => unreachable!("positive non-atom `{f}` in right-active context"),
            }
        } else {
            let i = pick - right_active.len();
            let f = &left_active.items()[i];
            let omega = left_active.without_index(i);
            let mk = |omega: Bag, left: Context| CSequent::Active {
                left,
                left_active: omega,
                right_active: right_active.clone(),
                right: right.clone(),
            };
            match f.node() {
                Node::PosAtom(_) | Node::NegAtom(_) => (Rule::Al, vec![mk(omega, left.with(ZonedFormula::new(lin, f.clone())))]),
                Node::Tensor(a, b) => (Rule::LrTensor, vec![mk(omega.with(a.clone()).with(b.clone()), left.clone())]),
                Node::One => (Rule::LrOne, vec![mk(omega, left.clone())]),
                Node::Plus(a, b) => {
                    (Rule::LrPlus, vec![mk(omega.with(a.clone()), left.clone()), mk(omega.with(b.clone()), left.clone())])
                }
                Node::Zero => (Rule::LrZero, Vec::new()),
                Node::Bang(z, a) => (Rule::LrBang, vec![mk(omega, left.with(ZonedFormula::new(z.clone(), a.clone())))]),
                _ => unreachable!("negative non-atom `{f}` in left-active context"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::builtin;

    fn seq(text: &str, sig: &Signature) -> CSequent {
        let s = CSequent::parse(text, sig, ParseMode::User).unwrap();
        s.validate(sig).unwrap();
        s
    }

    #[test]
    fn parse_shapes_and_print() {
        let sig = builtin("ll").unwrap();
        for text in [
            "lin:p |- lin:p",
            "|- lin:p",
            "lin:p |-",
            "|-",
            "lin:p, u:'m |- [p] ; .",
            ". ; ['n] |- lin:'n",
            "lin:p ; (p * q) |- ('n & 'm) ; u:q",
        ] {
            let s = seq(text, &sig);
            assert_eq!(s.to_string(), text, "printing {text}");
            assert_eq!(seq(&s.to_string(), &sig), s);
        }
        assert!(seq("lin:p |- ; lin:p", &sig).is_neutral());
        assert!(seq("u:'n ; |- ; u:'n", &sig).is_neutral());
    }

    #[test]
    fn parse_rejects_double_focus() {
        let sig = builtin("ll").unwrap();
        assert!(CSequent::parse("; ['n] |- [p] ; .", &sig, ParseMode::User).is_err());
    }

    #[test]
    fn validation_checks_classes() {
        let sig = builtin("ll").unwrap();
        let s = CSequent::parse("lin:(p * q) |- lin:p", &sig, ParseMode::User).unwrap();
        assert!(s.validate(&sig).is_err());
        let s = CSequent::parse("lin:p |- lin:(p -o 'n)", &sig, ParseMode::User).unwrap();
        assert!(s.validate(&sig).is_err());
    }

    #[test]
    fn decide_examples() {
        let mall = builtin("mall").unwrap();
        let c = Classical::new(mall.clone());
        let d = c.decide(&seq("lin:p |- lin:p", &mall));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, Rule::Rdr);
        assert_eq!(d[0].1, seq("lin:p |- [p] ; .", &mall));

        let ll = builtin("ll").unwrap();
        let c = Classical::new(ll.clone());
        let d = c.decide(&seq("u:'n |- u:'n", &ll));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, Rule::Udl);
        assert_eq!(d[0].1, seq("u:'n ; ['n] |- u:'n", &ll));

        assert!(c.decide(&seq("|-", &ll)).is_empty());
    }

    #[test]
    fn focus_examples() {
        let ll = builtin("ll").unwrap();
        let c = Classical::new(ll.clone());
        let pr = c.focus_step(&seq("lin:p, u:'m |- [p] ; .", &ll));
        assert_eq!(pr.len(), 1);
        assert_eq!(pr[0].rule, Rule::Pr);
        assert!(pr[0].premises.is_empty());

        assert!(c.focus_step(&seq("lin:p |- [![u] 'n] ; .", &ll)).is_empty());

        let plus = c.focus_step(&seq("lin:p |- [p + q] ; .", &ll));
        assert_eq!(plus.iter().map(|i| i.rule).collect::<Vec<_>>(), vec![Rule::RrPlus1, Rule::RrPlus2]);
    }

    #[test]
    fn active_examples() {
        let ll = builtin("ll").unwrap();
        let c = Classical::new(ll.clone());
        let b = Budget::default();
        let with = c.active_normalize(&seq(". ; . |- ('n & 'm) ; .", &ll), &b).unwrap();
        assert_eq!(with, vec![seq("|- lin:'m", &ll), seq("|- lin:'n", &ll)]);
        assert!(c.active_normalize(&seq(". ; 0 |- . ; .", &ll), &b).unwrap().is_empty());
        let q = c.active_normalize(&seq(". ; . |- ?[u] p ; .", &ll), &b).unwrap();
        assert_eq!(q, vec![seq("|- u:p", &ll)]);
    }

    #[test]
    fn synthetic_examples() {
        let mall = builtin("mall").unwrap();
        let c = Classical::new(mall.clone());
        let b = Budget::default();
        let rules = c.synthetic_expansions(&seq("lin:p |- lin:p", &mall), &b).unwrap();
        assert_eq!(rules.len(), 1);
        assert!(rules[0].premises.is_empty());

        let rules = c.synthetic_expansions(&seq("|- lin:(![lin] 'n) * (![lin] 'm)", &mall), &b).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].premises, vec![seq("|- lin:'m", &mall), seq("|- lin:'n", &mall)]);

        assert!(c.synthetic_expansions(&seq("lin:p |- lin:'n", &mall), &b).unwrap().is_empty());
    }

    #[test]
    fn traces_replay() {
        let ll = builtin("ll").unwrap();
        let c = Classical::new(ll.clone());
        let b = Budget::default();
        let s = seq("u:p, lin:q, lin:(p -o ?[lin] q) |- lin:(p * ![u] ('n | 'm)), lin:q", &ll);
        let rules = c.synthetic_expansions(&s, &b).unwrap();
        assert!(!rules.is_empty());
        for r in &rules {
            for t in &r.traces {
                assert_eq!(c.replay(&s, t, &b).unwrap(), r.premises);
            }
        }
    }
}
