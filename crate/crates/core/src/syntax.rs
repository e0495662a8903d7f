//! Polarized formulas: representation, concrete syntax, and printing.
//!
//! Positive formulas are built from positive atoms with `*`, `1`, `+`, `0`
//! and `![z]`; negative formulas from negative atoms with `&`, `top`, `|`,
//! `bot`, `-o` and `?[z]`. The two classes meet only through the zoned
//! shifts, whose operands are restricted:
//!
//! * `![z] A` requires `A` to be a negative formula or a positive atom;
//! * `?[z] A` requires `A` to be a positive formula or a negative atom.
//!
//! Negative atoms carry a leading apostrophe in the concrete syntax (`'n`),
//! positive atoms are bare identifiers (`p`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::signature::Signature;

/// Name of the answer atom used by the classical-to-intuitionistic encoding.
pub const ANSWER_ATOM: &str = "k";

/// Suffix marking the positive dual of a negative atom.
pub const DUAL_SUFFIX: char = '^';

/// An interned-by-refcount identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// A subexponential zone name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Zone(Symbol);

impl Zone {
    pub fn new(s: &str) -> Self {
        Zone(Symbol::new(s))
    }

    pub fn as_str(&self) -> &str {
        self.0.as_str()
    }
}

impl fmt::Debug for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zone({})", self.0)
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<&str> for Zone {
    fn from(s: &str) -> Self {
        Zone::new(s)
    }
}

impl Serialize for Zone {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Zone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() || !s.chars().all(is_zone_char) {
            return Err(serde::de::Error::custom(format!("invalid zone name `{s}`")));
        }
        Ok(Zone::new(&s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        })
    }
}

/// An atomic formula together with its polarity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: Symbol,
    pub polarity: Polarity,
}

impl Atom {
    pub fn positive(name: &str) -> Self {
        Atom { name: Symbol::new(name), polarity: Polarity::Positive }
    }

    pub fn negative(name: &str) -> Self {
        Atom { name: Symbol::new(name), polarity: Polarity::Negative }
    }

    /// True for names the encodings reserve for themselves.
    pub fn is_reserved(&self) -> bool {
        is_reserved_name(self.name.as_str())
    }

    /// The positive atom standing for the dual of a negative atom.
    ///
    /// Injective, and never equal to an atom a user can write, because the
    /// `^` suffix is rejected by the user-facing parser.
    pub fn dual(&self) -> Result<Atom, crate::Error> {
        match self.polarity {
            Polarity::Negative => {
                let mut name = String::with_capacity(self.name.as_str().len() + 1);
                name.push_str(self.name.as_str());
                name.push(DUAL_SUFFIX);
                Ok(Atom::positive(&name))
            }
            Polarity::Positive => Err(crate::Error::ClassMismatch(format!(
                "dual_atom expects a negative atom, got positive atom `{}`",
                self.name
            ))),
        }
    }

    pub fn formula(&self) -> Formula {
        match self.polarity {
            Polarity::Positive => Formula::from_node(Node::PosAtom(self.name.clone())),
            Polarity::Negative => Formula::from_node(Node::NegAtom(self.name.clone())),
        }
    }
}

pub(crate) fn is_reserved_name(name: &str) -> bool {
    name == ANSWER_ATOM || name.contains(DUAL_SUFFIX)
}

/// The constructors of the formula tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    PosAtom(Symbol),
    Tensor(Formula, Formula),
    One,
    Plus(Formula, Formula),
    Zero,
    Bang(Zone, Formula),
    NegAtom(Symbol),
    With(Formula, Formula),
    Top,
    Par(Formula, Formula),
    Bot,
    Lolli(Formula, Formula),
    Qmark(Zone, Formula),
}

/// An immutable, cheaply clonable polarized formula.
///
/// The smart constructors panic when given operands of the wrong class;
/// untrusted input goes through [`parse_formula`], which reports polarity
/// errors instead.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(Arc<Node>);

impl Formula {
    fn from_node(node: Node) -> Self {
        Formula(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn pos(name: &str) -> Self {
        Formula::from_node(Node::PosAtom(Symbol::new(name)))
    }

    pub fn neg(name: &str) -> Self {
        Formula::from_node(Node::NegAtom(Symbol::new(name)))
    }

    pub fn one() -> Self {
        Formula::from_node(Node::One)
    }

    pub fn zero() -> Self {
        Formula::from_node(Node::Zero)
    }

    pub fn top() -> Self {
        Formula::from_node(Node::Top)
    }

    pub fn bot() -> Self {
        Formula::from_node(Node::Bot)
    }

    pub fn tensor(a: Formula, b: Formula) -> Self {
        assert!(a.is_positive() && b.is_positive(), "tensor over non-positive operands");
        Formula::from_node(Node::Tensor(a, b))
    }

    pub fn plus(a: Formula, b: Formula) -> Self {
        assert!(a.is_positive() && b.is_positive(), "plus over non-positive operands");
        Formula::from_node(Node::Plus(a, b))
    }

    pub fn with(a: Formula, b: Formula) -> Self {
        assert!(a.is_negative() && b.is_negative(), "with over non-negative operands");
        Formula::from_node(Node::With(a, b))
    }

    pub fn par(a: Formula, b: Formula) -> Self {
        assert!(a.is_negative() && b.is_negative(), "par over non-negative operands");
        Formula::from_node(Node::Par(a, b))
    }

    pub fn lolli(a: Formula, b: Formula) -> Self {
        assert!(a.is_positive() && b.is_negative(), "lolli needs positive antecedent and negative consequent");
        Formula::from_node(Node::Lolli(a, b))
    }

    pub fn bang(zone: Zone, a: Formula) -> Self {
        assert!(a.is_pat(), "bang operand must be negative or a positive atom");
        Formula::from_node(Node::Bang(zone, a))
    }

    pub fn qmark(zone: Zone, a: Formula) -> Self {
        assert!(a.is_nat(), "qmark operand must be positive or a negative atom");
        Formula::from_node(Node::Qmark(zone, a))
    }

    pub fn polarity(&self) -> Polarity {
        match self.node() {
            Node::PosAtom(_)
            | Node::Tensor(..)
            | Node::One
            | Node::Plus(..)
            | Node::Zero
            | Node::Bang(..) => Polarity::Positive,
            Node::NegAtom(_)
            | Node::With(..)
            | Node::Top
            | Node::Par(..)
            | Node::Bot
            | Node::Lolli(..)
            | Node::Qmark(..) => Polarity::Negative,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.polarity() == Polarity::Negative
    }

    pub fn atom(&self) -> Option<Atom> {
        match self.node() {
            Node::PosAtom(s) => Some(Atom { name: s.clone(), polarity: Polarity::Positive }),
            Node::NegAtom(s) => Some(Atom { name: s.clone(), polarity: Polarity::Negative }),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.node(), Node::PosAtom(_) | Node::NegAtom(_))
    }

    /// Negative formula or positive atom (the class allowed under `!`, in
    /// left-passive and in right-active positions).
    pub fn is_pat(&self) -> bool {
        self.is_negative() || matches!(self.node(), Node::PosAtom(_))
    }

    /// Positive formula or negative atom (the class allowed under `?`, in
    /// right-passive and in left-active positions).
    pub fn is_nat(&self) -> bool {
        self.is_positive() || matches!(self.node(), Node::NegAtom(_))
    }

    /// Number of connective levels; atoms and units have depth 0.
    pub fn depth(&self) -> usize {
        match self.node() {
            Node::PosAtom(_) | Node::NegAtom(_) | Node::One | Node::Zero | Node::Top | Node::Bot => 0,
            Node::Bang(_, a) | Node::Qmark(_, a) => 1 + a.depth(),
            Node::Tensor(a, b) | Node::Plus(a, b) | Node::With(a, b) | Node::Par(a, b) | Node::Lolli(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Visit every subformula, root first.
    pub fn for_each(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self.node() {
            Node::Bang(_, a) | Node::Qmark(_, a) => a.for_each(f),
            Node::Tensor(a, b) | Node::Plus(a, b) | Node::With(a, b) | Node::Par(a, b) | Node::Lolli(a, b) => {
                a.for_each(f);
                b.for_each(f);
            }
            _ => {}
        }
    }

    pub fn zones(&self) -> Vec<Zone> {
        let mut out = Vec::new();
        self.for_each(&mut |g| {
            if let Node::Bang(z, _) | Node::Qmark(z, _) = g.node() {
                out.push(z.clone());
            }
        });
        out
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each(&mut |g| {
            if let Some(a) = g.atom() {
                out.push(a);
            }
        });
        out
    }

    /// True if an answer atom or a dual atom occurs anywhere.
    pub fn has_reserved_atom(&self) -> bool {
        self.atoms().iter().any(Atom::is_reserved)
    }

    /// True if `⅋` or `⊥` occurs anywhere.
    pub fn has_classical_only(&self) -> bool {
        let mut found = false;
        self.for_each(&mut |g| found |= matches!(g.node(), Node::Par(..) | Node::Bot));
        found
    }

    /// Re-check every polarity constraint from the root down.
    pub fn well_formed(&self) -> bool {
        let ok = match self.node() {
            Node::Tensor(a, b) | Node::Plus(a, b) => a.is_positive() && b.is_positive(),
            Node::With(a, b) | Node::Par(a, b) => a.is_negative() && b.is_negative(),
            Node::Lolli(a, b) => a.is_positive() && b.is_negative(),
            Node::Bang(_, a) => a.is_pat(),
            Node::Qmark(_, a) => a.is_nat(),
            _ => true,
        };
        ok && match self.node() {
            Node::Bang(_, a) | Node::Qmark(_, a) => a.well_formed(),
            Node::Tensor(a, b) | Node::Plus(a, b) | Node::With(a, b) | Node::Par(a, b) | Node::Lolli(a, b) => {
                a.well_formed() && b.well_formed()
            }
            _ => true,
        }
    }

    /// Pretty-printer using the usual linear logic glyphs.
    pub fn unicode(&self) -> Unicode<'_> {
        Unicode(self)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

// Binding strength: higher binds tighter.
const PREC_LOLLI: u8 = 1;
const PREC_ADD: u8 = 2;
const PREC_MUL: u8 = 3;
const PREC_ATOM: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f.node() {
        Node::Lolli(..) => PREC_LOLLI,
        Node::Plus(..) | Node::With(..) => PREC_ADD,
        Node::Tensor(..) | Node::Par(..) => PREC_MUL,
        _ => PREC_ATOM,
    }
}

struct Glyphs {
    tensor: &'static str,
    plus: &'static str,
    with: &'static str,
    par: &'static str,
    lolli: &'static str,
    top: &'static str,
    bot: &'static str,
    unicode: bool,
}

const ASCII: Glyphs = Glyphs {
    tensor: " * ",
    plus: " + ",
    with: " & ",
    par: " | ",
    lolli: " -o ",
    top: "top",
    bot: "bot",
    unicode: false,
};

const UNICODE: Glyphs = Glyphs {
    tensor: " ⊗ ",
    plus: " ⊕ ",
    with: " & ",
    par: " ⅋ ",
    lolli: " ⊸ ",
    top: "⊤",
    bot: "⊥",
    unicode: true,
};

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, g: &Glyphs) -> fmt::Result {
    let operand = |out: &mut fmt::Formatter<'_>, sub: &Formula, needs_parens: bool| -> fmt::Result {
        if needs_parens {
            out.write_str("(")?;
            write_formula(out, sub, g)?;
            out.write_str(")")
        } else {
            write_formula(out, sub, g)
        }
    };
    let p = prec(f);
    match f.node() {
        Node::PosAtom(s) => write!(out, "{s}"),
        Node::NegAtom(s) => write!(out, "'{s}"),
        Node::One => out.write_str("1"),
        Node::Zero => out.write_str("0"),
        Node::Top => out.write_str(g.top),
        Node::Bot => out.write_str(g.bot),
        Node::Tensor(a, b) | Node::Plus(a, b) | Node::With(a, b) | Node::Par(a, b) => {
            let op = match f.node() {
                Node::Tensor(..) => g.tensor,
                Node::Plus(..) => g.plus,
                Node::With(..) => g.with,
                _ => g.par,
            };
            operand(out, a, prec(a) < p)?;
            out.write_str(op)?;
            operand(out, b, prec(b) <= p)
        }
        Node::Lolli(a, b) => {
            operand(out, a, prec(a) <= p)?;
            out.write_str(g.lolli)?;
            operand(out, b, prec(b) < p)
        }
        Node::Bang(z, a) | Node::Qmark(z, a) => {
            let sym = if matches!(f.node(), Node::Bang(..)) { '!' } else { '?' };
            if g.unicode {
                write!(out, "{sym}_{z} ")?;
            } else {
                write!(out, "{sym}[{z}] ")?;
            }
            operand(out, a, prec(a) < PREC_ATOM)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, &ASCII)
    }
}

pub struct Unicode<'a>(&'a Formula);

impl fmt::Display for Unicode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.0, &UNICODE)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_formula_unchecked(&s, ParseMode::Internal).map_err(serde::de::Error::custom)
    }
}

/// Whether reserved atom names are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    /// User input: `k` and names ending in `^` are rejected.
    User,
    /// Output of the encodings: reserved names are allowed.
    Internal,
}

/// Parse a formula in user mode, checking every zone against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_formula_with(text, Some(sig), ParseMode::User)
}

/// Parse without a signature: zone names are accepted as written.
pub fn parse_formula_unchecked(text: &str, mode: ParseMode) -> Result<Formula, ParseError> {
    parse_formula_with(text, None, mode)
}

pub fn parse_formula_with(text: &str, sig: Option<&Signature>, mode: ParseMode) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, sig, mode, end: text.len() };
    let f = p.lolli()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::Syntax { pos: t.pos, msg: format!("unexpected {}", t.kind) });
    }
    Ok(f)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_zone_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Pos(String),
    Neg(String),
    One,
    Zero,
    Top,
    Bot,
    Star,
    PlusOp,
    Amp,
    Bar,
    Lolli,
    LParen,
    RParen,
    Bang(String),
    Qmark(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Pos(s) => write!(f, "atom `{s}`"),
            Tok::Neg(s) => write!(f, "atom `'{s}`"),
            Tok::One => f.write_str("`1`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::Top => f.write_str("`top`"),
            Tok::Bot => f.write_str("`bot`"),
            Tok::Star => f.write_str("`*`"),
            Tok::PlusOp => f.write_str("`+`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Lolli => f.write_str("`-o`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Bang(z) => write!(f, "`![{z}]`"),
            Tok::Qmark(z) => write!(f, "`?[{z}]`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let ident_at = |start: usize| -> (String, usize) {
        let mut j = start;
        let mut s = String::new();
        while j < chars.len() && is_ident_char(chars[j].1) {
            s.push(chars[j].1);
            j += 1;
        }
        while j < chars.len() && chars[j].1 == DUAL_SUFFIX {
            s.push(DUAL_SUFFIX);
            j += 1;
        }
        (s, j)
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '*' => Some(Tok::Star),
            '+' => Some(Tok::PlusOp),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '1' => Some(Tok::One),
            '0' => Some(Tok::Zero),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token { kind, pos });
            i += 1;
            continue;
        }
        match c {
            '-' => {
                if i + 1 < chars.len() && chars[i + 1].1 == 'o' {
                    out.push(Token { kind: Tok::Lolli, pos });
                    i += 2;
                } else {
                    return Err(ParseError::Syntax { pos, msg: "expected `-o`".into() });
                }
            }
            '\'' => {
                if i + 1 < chars.len() && is_ident_start(chars[i + 1].1) {
                    let (s, j) = ident_at(i + 1);
                    out.push(Token { kind: Tok::Neg(s), pos });
                    i = j;
                } else {
                    return Err(ParseError::Syntax { pos, msg: "expected identifier after `'`".into() });
                }
            }
            '!' | '?' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].1.is_whitespace() {
                    j += 1;
                }
                if j >= chars.len() || chars[j].1 != '[' {
                    return Err(ParseError::Syntax { pos, msg: format!("expected `[zone]` after `{c}`") });
                }
                j += 1;
                let mut zone = String::new();
                while j < chars.len() && is_zone_char(chars[j].1) {
                    zone.push(chars[j].1);
                    j += 1;
                }
                if zone.is_empty() || j >= chars.len() || chars[j].1 != ']' {
                    return Err(ParseError::Syntax { pos, msg: "malformed zone annotation".into() });
                }
                let kind = if c == '!' { Tok::Bang(zone) } else { Tok::Qmark(zone) };
                out.push(Token { kind, pos });
                i = j + 1;
            }
            c if is_ident_start(c) => {
                let (s, j) = ident_at(i);
                let kind = match s.as_str() {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    _ => Tok::Pos(s),
                };
                out.push(Token { kind, pos });
                i = j;
            }
            _ => return Err(ParseError::Syntax { pos, msg: format!("unexpected character `{c}`") }),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    sig: Option<&'a Signature>,
    mode: ParseMode,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn lolli(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.additive()?;
        if let Some(Token { kind: Tok::Lolli, pos }) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.lolli()?;
            if !lhs.is_positive() || !rhs.is_negative() {
                return Err(ParseError::Polarity {
                    pos,
                    msg: format!(
                        "`-o` needs a positive antecedent and a negative consequent, got {} and {}",
                        lhs.polarity(),
                        rhs.polarity()
                    ),
                });
            }
            return Ok(Formula::lolli(lhs, rhs));
        }
        Ok(lhs)
    }

    fn binary_chain(
        &mut self,
        ops: &[Tok],
        operand: fn(&mut Self) -> Result<Formula, ParseError>,
    ) -> Result<Formula, ParseError> {
        let mut acc = operand(self)?;
        while let Some(t) = self.peek().cloned() {
            if !ops.contains(&t.kind) {
                break;
            }
            self.pos += 1;
            let rhs = operand(self)?;
            acc = combine(&t, acc, rhs)?;
        }
        Ok(acc)
    }

    fn additive(&mut self) -> Result<Formula, ParseError> {
        self.binary_chain(&[Tok::PlusOp, Tok::Amp], Self::multiplicative)
    }

    fn multiplicative(&mut self) -> Result<Formula, ParseError> {
        self.binary_chain(&[Tok::Star, Tok::Bar], Self::prefix)
    }

    fn zone(&self, z: &str, pos: usize) -> Result<Zone, ParseError> {
        if let Some(sig) = self.sig {
            if !sig.contains(&Zone::new(z)) {
                return Err(ParseError::UnknownZone { pos, zone: z.to_string() });
            }
        }
        Ok(Zone::new(z))
    }

    fn atom_name(&self, name: &str, pos: usize) -> Result<(), ParseError> {
        if self.mode == ParseMode::User && is_reserved_name(name) {
            return Err(ParseError::Reserved { pos, name: name.to_string() });
        }
        Ok(())
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        let Some(t) = self.next() else {
            return Err(ParseError::Syntax { pos: self.end, msg: "unexpected end of input".into() });
        };
        match t.kind {
            Tok::Pos(s) => {
                self.atom_name(&s, t.pos)?;
                Ok(Formula::pos(&s))
            }
            Tok::Neg(s) => {
                self.atom_name(&s, t.pos)?;
                Ok(Formula::neg(&s))
            }
            Tok::One => Ok(Formula::one()),
            Tok::Zero => Ok(Formula::zero()),
            Tok::Top => Ok(Formula::top()),
            Tok::Bot => Ok(Formula::bot()),
            Tok::LParen => {
                let f = self.lolli()?;
                match self.next() {
                    Some(Token { kind: Tok::RParen, .. }) => Ok(f),
                    Some(t) => Err(ParseError::Syntax { pos: t.pos, msg: format!("expected `)`, found {}", t.kind) }),
                    None => Err(ParseError::Syntax { pos: self.end, msg: "unclosed `(`".into() }),
                }
            }
            Tok::Bang(z) => {
                let zone = self.zone(&z, t.pos)?;
                let a = self.prefix()?;
                if !a.is_pat() {
                    return Err(ParseError::Polarity {
                        pos: t.pos,
                        msg: "`!` applies to a negative formula or a positive atom".into(),
                    });
                }
                Ok(Formula::bang(zone, a))
            }
            Tok::Qmark(z) => {
                let zone = self.zone(&z, t.pos)?;
                let a = self.prefix()?;
                if !a.is_nat() {
                    return Err(ParseError::Polarity {
                        pos: t.pos,
                        msg: "`?` applies to a positive formula or a negative atom".into(),
                    });
                }
                Ok(Formula::qmark(zone, a))
            }
            other => Err(ParseError::Syntax { pos: t.pos, msg: format!("unexpected {other}") }),
        }
    }
}

fn combine(op: &Token, a: Formula, b: Formula) -> Result<Formula, ParseError> {
    let (positive, name) = match op.kind {
        Tok::Star => (true, "`*`"),
        Tok::PlusOp => (true, "`+`"),
        Tok::Amp => (false, "`&`"),
        _ => (false, "`|`"),
    };
    let wanted = if positive { Polarity::Positive } else { Polarity::Negative };
    if a.polarity() != wanted || b.polarity() != wanted {
        return Err(ParseError::Polarity {
            pos: op.pos,
            msg: format!("{name} requires {wanted} children, got {} and {}", a.polarity(), b.polarity()),
        });
    }
    Ok(match op.kind {
        Tok::Star => Formula::tensor(a, b),
        Tok::PlusOp => Formula::plus(a, b),
        Tok::Amp => Formula::with(a, b),
        _ => Formula::par(a, b),
    })
}

/// `polarity_of` from the operation list; a free-function alias.
pub fn polarity_of(f: &Formula) -> Polarity {
    f.polarity()
}

/// `dual_atom` from the operation list.
pub fn dual_atom(n: &Atom) -> Result<Atom, crate::Error> {
    n.dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::builtin;

    fn ll() -> Signature {
        builtin("ll").unwrap()
    }

    #[test]
    fn parses_bang_over_lolli() {
        let f = parse_formula("![u] (p -o 'n)", &ll()).unwrap();
        let expected = Formula::bang(Zone::new("u"), Formula::lolli(Formula::pos("p"), Formula::neg("n")));
        assert_eq!(f, expected);
    }

    #[test]
    fn par_of_positive_atoms_is_a_polarity_error() {
        let err = parse_formula("p | q", &ll()).unwrap_err();
        assert!(matches!(err, ParseError::Polarity { pos: 2, .. }), "{err:?}");
    }

    #[test]
    fn qmark_admits_negative_atom() {
        let f = parse_formula("?[u] 'n", &ll()).unwrap();
        assert_eq!(f, Formula::qmark(Zone::new("u"), Formula::neg("n")));
    }

    #[test]
    fn unknown_zone_rejected() {
        let err = parse_formula("![w] 'n", &ll()).unwrap_err();
        assert_eq!(err, ParseError::UnknownZone { pos: 0, zone: "w".into() });
    }

    #[test]
    fn reserved_names_rejected_in_user_mode() {
        assert!(matches!(parse_formula("'k", &ll()), Err(ParseError::Reserved { .. })));
        assert!(matches!(parse_formula("n^ * p", &ll()), Err(ParseError::Reserved { .. })));
        assert!(parse_formula_unchecked("n^ -o 'k", ParseMode::Internal).is_ok());
    }

    #[test]
    fn bang_operand_class() {
        assert!(parse_formula("![u] p", &ll()).is_ok());
        assert!(matches!(parse_formula("![u] (p * q)", &ll()), Err(ParseError::Polarity { .. })));
        assert!(matches!(parse_formula("?[u] ('n & 'm)", &ll()), Err(ParseError::Polarity { .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = ll();
        let pq = Formula::tensor(Formula::pos("p"), Formula::pos("q"));
        let f = parse_formula("p * q -o 'n & 'm | 'o", &sig).unwrap();
        let rhs = Formula::with(Formula::neg("n"), Formula::par(Formula::neg("m"), Formula::neg("o")));
        assert_eq!(f, Formula::lolli(pq.clone(), rhs));
        let g = parse_formula("p -o q -o 'm", &sig).unwrap();
        assert_eq!(g, Formula::lolli(Formula::pos("p"), Formula::lolli(Formula::pos("q"), Formula::neg("m"))));
        let h = parse_formula("p * q + r", &sig).unwrap();
        assert_eq!(h, Formula::plus(pq, Formula::pos("r")));
    }

    #[test]
    fn polarity_examples() {
        assert_eq!(polarity_of(&Formula::one()), Polarity::Positive);
        assert_eq!(polarity_of(&Formula::lolli(Formula::pos("p"), Formula::neg("n"))), Polarity::Negative);
        assert_eq!(polarity_of(&Formula::bang(Zone::new("lin"), Formula::neg("n"))), Polarity::Positive);
    }

    #[test]
    fn dual_atom_naming() {
        assert_eq!(dual_atom(&Atom::negative("n")).unwrap(), Atom::positive("n^"));
        assert_eq!(dual_atom(&Atom::negative("foo")).unwrap(), Atom::positive("foo^"));
        assert!(dual_atom(&Atom::positive("p")).is_err());
    }

    #[test]
    fn unicode_printing() {
        let f = parse_formula("![u] ('n | 'm) * 1 -o top & bot", &ll()).unwrap();
        assert_eq!(f.unicode().to_string(), "!_u ('n ⅋ 'm) ⊗ 1 ⊸ ⊤ & ⊥");
        assert_eq!(f.to_string(), "![u] ('n | 'm) * 1 -o top & bot");
    }

    #[test]
    fn error_positions_point_at_the_offending_token() {
        let err = parse_formula("(p * q", &ll()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { pos: 6, .. }), "{err:?}");
        let err = parse_formula("p -o q", &ll()).unwrap_err();
        assert!(matches!(err, ParseError::Polarity { pos: 2, .. }), "{err:?}");
    }
}
