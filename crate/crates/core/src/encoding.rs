//! Encodings between the two calculi.
//!
//! `c2i` maps classical sequents into the intuitionistic calculus over the
//! same signature, negating with a reserved answer atom `k`. `i2c` maps
//! intuitionistic sequents into the classical calculus over the split
//! signature. `naive-i2c` is the identity into the unsplit signature and
//! exists to exhibit why splitting is needed.

use serde::{Deserialize, Serialize};

use crate::calculus::{Kind, Sequent};
use crate::classical::CSequent;
use crate::context::{Bag, Context, ZonedFormula};
use crate::error::{Error, Result};
use crate::intuitionistic::ISequent;
use crate::signature::{split_zone, Form, Signature};
use crate::syntax::{Atom, Formula, Node, Zone, ANSWER_ATOM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum C2iMode {
    /// Positions that are focused or passive on the left.
    Eq,
    /// Positions that are focused or passive on the right.
    Ne,
    /// Left-active position.
    EqActive,
    /// Right-active position.
    NeActive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum I2cMode {
    Lp,
    Lf,
    Rf,
    La,
    Ra,
    Rp,
}

fn answer() -> Formula {
    Formula::neg(ANSWER_ATOM)
}

fn not(p: Formula) -> Formula {
    Formula::lolli(p, answer())
}

fn dual(name: &crate::syntax::Symbol) -> Formula {
    Atom::negative(name.as_str()).dual().expect("negative atom").formula()
}

fn reject_reserved(f: &Formula) -> Result<()> {
    if f.has_reserved_atom() {
        Err(Error::Encoding(format!("`{f}` already contains a reserved atom")))
    } else {
        Ok(())
    }
}

/// The classical-to-intuitionistic translation of one formula.
pub fn c2i_formula(f: &Formula, mode: C2iMode, sig: &Signature) -> Result<Formula> {
    reject_reserved(f)?;
    let c = C2i { lin: sig.working().clone() };
    Ok(match mode {
        C2iMode::Eq => c.eq(f),
        C2iMode::Ne => c.ne(f),
        C2iMode::EqActive => {
            if !f.is_nat() {
                return Err(Error::ClassMismatch(format!("left-active position needs a positive formula or negative atom, got `{f}`")));
            }
            c.eq_act(f)
        }
        C2iMode::NeActive => {
            if !f.is_pat() {
                return Err(Error::ClassMismatch(format!("right-active position needs a negative formula or positive atom, got `{f}`")));
            }
            c.ne_act(f)
        }
    })
}

struct C2i {
    lin: Zone,
}

impl C2i {
    /// `!_z X` whose promotion leaves `body` in the left-active context and
    /// ends with the answer atom on the right. The atomic case asks for the
    /// answer through `?_lin` so that images stay distinct.
    fn shift(&self, z: &Zone, body: Formula, atomic: bool) -> Formula {
        let goal = if atomic { Formula::qmark(self.lin.clone(), answer()) } else { answer() };
        Formula::bang(z.clone(), Formula::lolli(body, goal))
    }

    fn eq(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::PosAtom(_) => f.clone(),
            Node::Tensor(a, b) => Formula::tensor(self.eq(a), self.eq(b)),
            Node::One => Formula::one(),
            Node::Plus(a, b) => Formula::plus(self.eq(a), self.eq(b)),
            Node::Zero => Formula::zero(),
            Node::Bang(z, a) => match a.node() {
                Node::PosAtom(_) => self.shift(z, self.ne_act(a), true),
                _ => self.shift(z, self.ne_act(a), false),
            },
            _ => not(self.ne(f)),
        }
    }

    fn ne(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::NegAtom(n) => dual(n),
            Node::With(a, b) => Formula::plus(self.ne(a), self.ne(b)),
            Node::Top => Formula::zero(),
            Node::Par(a, b) => Formula::tensor(self.ne(a), self.ne(b)),
            Node::Bot => Formula::one(),
            Node::Lolli(a, b) => Formula::tensor(self.eq(a), self.ne(b)),
            Node::Qmark(z, a) => match a.node() {
                Node::NegAtom(_) => self.shift(z, self.eq_act(a), true),
                _ => self.shift(z, self.eq_act(a), false),
            },
            _ => not(self.eq(f)),
        }
    }

    fn eq_act(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::PosAtom(_) => f.clone(),
            Node::NegAtom(_) => Formula::bang(self.lin.clone(), self.eq(f)),
            Node::Tensor(a, b) => Formula::tensor(self.eq_act(a), self.eq_act(b)),
            Node::One => Formula::one(),
            Node::Plus(a, b) => Formula::plus(self.eq_act(a), self.eq_act(b)),
            Node::Zero => Formula::zero(),
            Node::Bang(z, a) => Formula::bang(z.clone(), self.eq(a)),
            _ => unreachable!("`{f}` cannot be left-active"),
        }
    }

    fn ne_act(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::NegAtom(n) => dual(n),
            Node::PosAtom(_) => Formula::bang(self.lin.clone(), self.ne(f)),
            Node::With(a, b) => Formula::plus(self.ne_act(a), self.ne_act(b)),
            Node::Top => Formula::zero(),
            Node::Par(a, b) => Formula::tensor(self.ne_act(a), self.ne_act(b)),
            Node::Bot => Formula::one(),
            Node::Lolli(a, b) => Formula::tensor(self.eq_act(a), self.ne_act(b)),
            Node::Qmark(z, a) => Formula::bang(z.clone(), self.ne(a)),
            _ => unreachable!("`{f}` cannot be right-active"),
        }
    }

    fn left(&self, zf: &ZonedFormula) -> ZonedFormula {
        ZonedFormula::new(zf.zone.clone(), self.eq(&zf.formula))
    }

    fn right(&self, zf: &ZonedFormula) -> ZonedFormula {
        ZonedFormula::new(zf.zone.clone(), self.ne(&zf.formula))
    }

    fn passive(&self, left: &Context, right: &Context) -> Context {
        left.map(|zf| self.left(zf)).union(&right.map(|zf| self.right(zf)))
    }
}

/// The classical-to-intuitionistic translation of a sequent. The target
/// signature is the source signature.
pub fn c2i_sequent(s: &CSequent, sig: &Signature) -> Result<ISequent> {
    for f in s.formulas() {
        reject_reserved(f)?;
    }
    let c = C2i { lin: sig.working().clone() };
    Ok(match s {
        CSequent::RightFocus { left, focus, right } => ISequent::RightFocus { left: c.passive(left, right), focus: c.eq(focus) },
        CSequent::LeftFocus { left, focus, right } => ISequent::RightFocus { left: c.passive(left, right), focus: c.ne(focus) },
        CSequent::Active { left, left_active, right_active, right } => {
            let mut omega: Vec<Formula> = left_active.items().iter().map(|f| c.eq_act(f)).collect();
            omega.extend(right_active.items().iter().map(|f| c.ne_act(f)));
            ISequent::ActiveP {
                left: c.passive(left, right),
                left_active: Bag::from(omega),
                right: ZonedFormula::new(sig.working().clone(), answer()),
            }
        }
    })
}

/// The intuitionistic-to-classical translation of one formula, over the
/// split form of `sig`. Zoned modes (`lp`, `rp`) act on the formula part;
/// use [`i2c_zoned`] for the zone.
pub fn i2c_formula(f: &Formula, mode: I2cMode, sig: &Signature) -> Result<Formula> {
    if f.has_classical_only() {
        return Err(Error::Encoding(format!("`{f}` is not an intuitionistic formula")));
    }
    let wants = match mode {
        I2cMode::Lp | I2cMode::Ra => f.is_pat(),
        I2cMode::Lf => f.is_negative(),
        I2cMode::Rf => f.is_positive(),
        I2cMode::La | I2cMode::Rp => f.is_nat(),
    };
    if !wants {
        return Err(Error::ClassMismatch(format!("`{f}` is not in the domain of the {mode:?} translation")));
    }
    let e = I2c { lin: sig.working().clone() };
    Ok(match mode {
        I2cMode::Lp => e.lp(f),
        I2cMode::Lf => e.lf(f),
        I2cMode::Rf => e.rf(f),
        I2cMode::La => e.la(f),
        I2cMode::Ra => e.ra(f),
        I2cMode::Rp => e.rp(f),
    })
}

/// `lp` or `rp` on a zoned formula: the zone moves to its left or right form.
pub fn i2c_zoned(zf: &ZonedFormula, mode: I2cMode, sig: &Signature) -> Result<ZonedFormula> {
    let form = match mode {
        I2cMode::Lp => Form::Left,
        I2cMode::Rp => Form::Right,
        _ => return Err(Error::ClassMismatch(format!("{mode:?} does not act on zoned formulas"))),
    };
    Ok(ZonedFormula::new(split_zone(&zf.zone, form), i2c_formula(&zf.formula, mode, sig)?))
}

struct I2c {
    lin: Zone,
}

impl I2c {
    fn l(z: &Zone) -> Zone {
        split_zone(z, Form::Left)
    }

    fn r(z: &Zone) -> Zone {
        split_zone(z, Form::Right)
    }

    fn lp(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::PosAtom(_) => f.clone(),
            _ => self.lf(f),
        }
    }

    fn lf(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::NegAtom(_) | Node::Top => f.clone(),
            Node::Qmark(z, a) => Formula::qmark(Self::r(z), self.la(a)),
            Node::With(a, b) => Formula::with(self.lf(a), self.lf(b)),
            Node::Lolli(a, b) => Formula::lolli(self.rf(a), self.lf(b)),
            _ => unreachable!("`{f}` has no left-focus translation"),
        }
    }

    fn rf(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::PosAtom(_) | Node::One | Node::Zero => f.clone(),
            Node::Bang(z, a) => Formula::bang(Self::l(z), self.ra(a)),
            Node::Tensor(a, b) => Formula::tensor(self.rf(a), self.rf(b)),
            Node::Plus(a, b) => Formula::plus(self.rf(a), self.rf(b)),
            _ => unreachable!("`{f}` has no right-focus translation"),
        }
    }

    fn la(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::PosAtom(_) | Node::NegAtom(_) | Node::One | Node::Zero => f.clone(),
            Node::Bang(z, a) => Formula::bang(Self::l(z), self.lp(a)),
            Node::Tensor(a, b) => Formula::tensor(self.la(a), self.la(b)),
            Node::Plus(a, b) => Formula::plus(self.la(a), self.la(b)),
            _ => unreachable!("`{f}` has no left-active translation"),
        }
    }

    fn ra(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::PosAtom(_) | Node::NegAtom(_) => {
                Formula::par(Formula::qmark(Self::r(&self.lin), f.clone()), Formula::bot())
            }
            Node::Qmark(z, a) => Formula::qmark(Self::r(z), self.rp(a)),
            Node::With(a, b) => Formula::with(self.ra(a), self.ra(b)),
            Node::Top => f.clone(),
            Node::Lolli(a, b) => Formula::lolli(self.la(a), self.ra(b)),
            _ => unreachable!("`{f}` has no right-active translation"),
        }
    }

    fn rp(&self, f: &Formula) -> Formula {
        match f.node() {
            Node::NegAtom(_) => f.clone(),
            _ => self.rf(f),
        }
    }

    fn left(&self, c: &Context) -> Context {
        c.map(|zf| ZonedFormula::new(Self::l(&zf.zone), self.lp(&zf.formula)))
    }

    fn right(&self, zf: &ZonedFormula) -> Context {
        Context::from(vec![ZonedFormula::new(Self::r(&zf.zone), self.rp(&zf.formula))])
    }
}

fn reject_classical_only(s: &ISequent) -> Result<()> {
    match s.formulas().into_iter().find(|f| f.has_classical_only()) {
        Some(f) => Err(Error::Encoding(format!("`{f}` is not an intuitionistic formula"))),
        None => Ok(()),
    }
}

/// The intuitionistic-to-classical translation of a sequent, landing in the
/// split form of `sig`.
pub fn i2c_sequent(s: &ISequent, sig: &Signature) -> Result<CSequent> {
    reject_classical_only(s)?;
    let e = I2c { lin: sig.working().clone() };
    let la = |b: &Bag| Bag::from(b.items().iter().map(|f| e.la(f)).collect::<Vec<_>>());
    Ok(match s {
        ISequent::RightFocus { left, focus } => {
            CSequent::RightFocus { left: e.left(left), focus: e.rf(focus), right: Context::new() }
        }
        ISequent::LeftFocus { left, focus, right } => {
            CSequent::LeftFocus { left: e.left(left), focus: e.lf(focus), right: e.right(right) }
        }
        ISequent::ActiveR { left, left_active, right_active } => CSequent::Active {
            left: e.left(left),
            left_active: la(left_active),
            right_active: Bag::from(vec![e.ra(right_active)]),
            right: Context::new(),
        },
        ISequent::ActiveP { left, left_active, right } => CSequent::Active {
            left: e.left(left),
            left_active: la(left_active),
            right_active: Bag::new(),
            right: e.right(right),
        },
    })
}

/// Read an intuitionistic sequent as a classical one, unchanged.
pub fn naive_sequent(s: &ISequent) -> CSequent {
    match s.clone() {
        ISequent::RightFocus { left, focus } => CSequent::RightFocus { left, focus, right: Context::new() },
        ISequent::LeftFocus { left, focus, right } => CSequent::LeftFocus { left, focus, right: Context::from(vec![right]) },
        ISequent::ActiveR { left, left_active, right_active } => CSequent::Active {
            left,
            left_active,
            right_active: Bag::from(vec![right_active]),
            right: Context::new(),
        },
        ISequent::ActiveP { left, left_active, right } => {
            CSequent::Active { left, left_active, right_active: Bag::new(), right: Context::from(vec![right]) }
        }
    }
}

pub trait Encoding: Send + Sync {
    fn name(&self) -> &'static str;
    fn source(&self) -> Kind;
    fn target(&self) -> Kind;
    fn target_signature(&self, source: &Signature) -> Signature;
    fn encode(&self, sig: &Signature, s: &Sequent) -> Result<Sequent>;
    /// True when every source rule instance should map to a target rule
    /// instance of the same name, which allows a rule-by-rule audit.
    fn preserves_rule_instances(&self) -> bool {
        false
    }
}

pub struct C2iEncoding;
pub struct I2cEncoding;
pub struct NaiveI2cEncoding;

impl Encoding for C2iEncoding {
    fn name(&self) -> &'static str {
        "c2i"
    }
    fn source(&self) -> Kind {
        Kind::Classical
    }
    fn target(&self) -> Kind {
        Kind::Intuitionistic
    }
    fn target_signature(&self, source: &Signature) -> Signature {
        source.clone()
    }
    fn encode(&self, sig: &Signature, s: &Sequent) -> Result<Sequent> {
        Ok(Sequent::Intuitionistic(c2i_sequent(s.classical()?, sig)?))
    }
}

impl Encoding for I2cEncoding {
    fn name(&self) -> &'static str {
        "i2c"
    }
    fn source(&self) -> Kind {
        Kind::Intuitionistic
    }
    fn target(&self) -> Kind {
        Kind::Classical
    }
    fn target_signature(&self, source: &Signature) -> Signature {
        source.split()
    }
    fn encode(&self, sig: &Signature, s: &Sequent) -> Result<Sequent> {
        Ok(Sequent::Classical(i2c_sequent(s.intuitionistic()?, sig)?))
    }
}

impl Encoding for NaiveI2cEncoding {
    fn name(&self) -> &'static str {
        "naive-i2c"
    }
    fn source(&self) -> Kind {
        Kind::Intuitionistic
    }
    fn target(&self) -> Kind {
        Kind::Classical
    }
    fn target_signature(&self, source: &Signature) -> Signature {
        source.clone()
    }
    fn encode(&self, _: &Signature, s: &Sequent) -> Result<Sequent> {
        Ok(Sequent::Classical(naive_sequent(s.intuitionistic()?)))
    }
    fn preserves_rule_instances(&self) -> bool {
        true
    }
}

static ENCODINGS: [&dyn Encoding; 3] = [&C2iEncoding, &I2cEncoding, &NaiveI2cEncoding];

pub fn encoding_names() -> impl Iterator<Item = &'static str> {
    ENCODINGS.iter().map(|e| e.name())
}

pub fn encoding(name: &str) -> Result<&'static dyn Encoding> {
    ENCODINGS
        .iter()
        .copied()
        .find(|e| e.name() == name)
        .ok_or_else(|| Error::UnknownName { kind: "encoding", name: name.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::builtin;
    use crate::syntax::{parse_formula, parse_formula_unchecked, ParseMode};

    fn f(text: &str) -> Formula {
        parse_formula_unchecked(text, ParseMode::Internal).unwrap()
    }

    #[test]
    fn c2i_examples() {
        let ll = builtin("ll").unwrap();
        assert_eq!(c2i_formula(&f("'n | 'm"), C2iMode::Ne, &ll).unwrap(), f("n^ * m^"));
        assert_eq!(c2i_formula(&f("![u] 'n"), C2iMode::Eq, &ll).unwrap(), f("![u] (n^ -o 'k)"));
        assert_eq!(c2i_formula(&f("bot"), C2iMode::Ne, &ll).unwrap(), f("1"));
        assert_eq!(c2i_formula(&f("p"), C2iMode::Ne, &ll).unwrap(), f("p -o 'k"));
        assert!(c2i_formula(&f("'k"), C2iMode::Eq, &ll).is_err());
    }

    #[test]
    fn c2i_sequent_examples() {
        let mall = builtin("mall").unwrap();
        let s = CSequent::parse("lin:p |- lin:p", &mall, ParseMode::User).unwrap();
        let t = c2i_sequent(&s, &mall).unwrap();
        assert_eq!(t, ISequent::parse("lin:p, lin:(p -o 'k) |- lin:'k", &mall, ParseMode::Internal).unwrap());

        let s = CSequent::parse(". ; ['n] |- lin:'n", &mall, ParseMode::User).unwrap();
        let t = c2i_sequent(&s, &mall).unwrap();
        assert_eq!(t, ISequent::parse("lin:n^ |- [n^]", &mall, ParseMode::Internal).unwrap());

        let s = CSequent::parse(". ; . |- ('n | 'm) ; .", &mall, ParseMode::User).unwrap();
        let t = c2i_sequent(&s, &mall).unwrap();
        assert_eq!(t, ISequent::parse(". ; (n^ * m^) |- . ; lin:'k", &mall, ParseMode::Internal).unwrap());
    }

    #[test]
    fn i2c_examples() {
        let ll = builtin("ll").unwrap();
        let rf = i2c_formula(&f("![u] (p -o 'n)"), I2cMode::Rf, &ll).unwrap();
        let ra = i2c_formula(&f("p -o 'n"), I2cMode::Ra, &ll).unwrap();
        assert_eq!(rf, Formula::bang(Zone::new("u.l"), ra));
        assert_eq!(i2c_formula(&f("p"), I2cMode::Ra, &ll).unwrap(), f("?[lin.r] p | bot"));
        assert_eq!(i2c_formula(&f("p * 1"), I2cMode::La, &ll).unwrap(), f("p * 1"));
        assert_eq!(i2c_formula(&f("?[u] p"), I2cMode::Lf, &ll).unwrap(), f("?[u.r] p"));
        assert!(i2c_formula(&f("'n | 'm"), I2cMode::Lf, &ll).is_err());
        assert!(i2c_formula(&f("p"), I2cMode::Lf, &ll).is_err());
    }

    #[test]
    fn i2c_sequent_examples() {
        let mall = builtin("mall").unwrap();
        let split = mall.split();
        let s = ISequent::parse("lin:p |- lin:q", &mall, ParseMode::User).unwrap();
        assert_eq!(
            i2c_sequent(&s, &mall).unwrap(),
            CSequent::parse("lin.l:p |- lin.r:q", &split, ParseMode::User).unwrap()
        );
        let s = ISequent::parse("|- [![lin] 'n]", &mall, ParseMode::User).unwrap();
        let expected = CSequent::parse(". |- [![lin.l] (?[lin.r] 'n | bot)] ; .", &split, ParseMode::User).unwrap();
        assert_eq!(i2c_sequent(&s, &mall).unwrap(), expected);
    }

    #[test]
    fn registry() {
        assert_eq!(encoding_names().collect::<Vec<_>>(), vec!["c2i", "i2c", "naive-i2c"]);
        assert!(encoding("naive-i2c").unwrap().preserves_rule_instances());
        assert!(!encoding("i2c").unwrap().preserves_rule_instances());
        assert!(encoding("c2c").is_err());
        let _ = parse_formula;
    }
}
