//! Zoned formulas and the multiset contexts that hold them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::signature::Signature;
use crate::syntax::{parse_formula_with, Formula, ParseMode, Zone};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZonedFormula {
    pub zone: Zone,
    pub formula: Formula,
}

impl ZonedFormula {
    pub fn new(zone: Zone, formula: Formula) -> Self {
        ZonedFormula { zone, formula }
    }

    /// Parse `zone:formula`.
    pub fn parse(text: &str, sig: Option<&Signature>, mode: ParseMode) -> Result<Self, ParseError> {
        let Some(colon) = text.find(':') else {
            return Err(ParseError::Syntax { pos: 0, msg: format!("expected `zone:formula`, got `{}`", text.trim()) });
        };
        let raw = &text[..colon];
        let lead = raw.len() - raw.trim_start().len();
        let name = raw.trim();
        if name.is_empty() || !name.chars().all(crate::syntax::is_zone_char) {
            return Err(ParseError::Syntax { pos: lead, msg: format!("invalid zone name `{name}`") });
        }
        let zone = Zone::new(name);
        if let Some(sig) = sig {
            if !sig.contains(&zone) {
                return Err(ParseError::UnknownZone { pos: lead, zone: name.to_string() });
            }
        }
        let formula = parse_formula_with(&text[colon + 1..], sig, mode).map_err(|e| e.shifted(colon + 1))?;
        Ok(ZonedFormula { zone, formula })
    }
}

impl fmt::Display for ZonedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.formula.is_atom() || matches!(self.formula.node(), crate::Node::One | crate::Node::Zero | crate::Node::Top | crate::Node::Bot) {
            write!(f, "{}:{}", self.zone, self.formula)
        } else {
            write!(f, "{}:({})", self.zone, self.formula)
        }
    }
}

impl fmt::Debug for ZonedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ZonedFormula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ZonedFormula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ZonedFormula::parse(&s, None, ParseMode::Internal).map_err(serde::de::Error::custom)
    }
}

/// A finite multiset of zoned formulas, kept sorted so that equal
/// multisets are equal values.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Context(Vec<ZonedFormula>);

impl<'de> Deserialize<'de> for Context {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Context::from(Vec::<ZonedFormula>::deserialize(d)?))
    }
}

impl From<Vec<ZonedFormula>> for Context {
    fn from(mut v: Vec<ZonedFormula>) -> Self {
        v.sort();
        Context(v)
    }
}

impl FromIterator<ZonedFormula> for Context {
    fn from_iter<I: IntoIterator<Item = ZonedFormula>>(iter: I) -> Self {
        Context::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl Context {
    pub fn new() -> Self {
        Context(Vec::new())
    }

    pub fn entries(&self) -> &[ZonedFormula] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ZonedFormula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, zf: ZonedFormula) {
        let at = self.0.partition_point(|x| x <= &zf);
        self.0.insert(at, zf);
    }

    pub fn with(&self, zf: ZonedFormula) -> Context {
        let mut c = self.clone();
        c.insert(zf);
        c
    }

    pub fn without_index(&self, i: usize) -> Context {
        let mut v = self.0.clone();
        v.remove(i);
        Context(v)
    }

    /// Remove one occurrence of `zf`, if present.
    pub fn without(&self, zf: &ZonedFormula) -> Option<Context> {
        let i = self.0.binary_search(zf).ok()?;
        Some(self.without_index(i))
    }

    pub fn union(&self, other: &Context) -> Context {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Context::from(v)
    }

    /// Indices of the first occurrence of every distinct entry.
    pub fn distinct_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| i == 0 || self.0[i - 1] != self.0[i]).collect()
    }

    pub fn all_unrestricted(&self, sig: &Signature) -> bool {
        self.0.iter().all(|zf| sig.is_unrestricted(&zf.zone))
    }

    /// Split into the unrestricted and the restricted sub-multisets.
    pub fn partition(&self, sig: &Signature) -> (Context, Vec<ZonedFormula>) {
        let (u, r): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|zf| sig.is_unrestricted(&zf.zone));
        (Context(u), r)
    }

    pub fn map(&self, f: impl FnMut(&ZonedFormula) -> ZonedFormula) -> Context {
        Context::from(self.0.iter().map(f).collect::<Vec<_>>())
    }

    pub fn try_map<E>(&self, f: impl FnMut(&ZonedFormula) -> Result<ZonedFormula, E>) -> Result<Context, E> {
        Ok(Context::from(self.0.iter().map(f).collect::<Result<Vec<_>, E>>()?))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, zf) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{zf}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// A multiset of formulas without zones, used for the active contexts.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Bag(Vec<Formula>);

impl<'de> Deserialize<'de> for Bag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Bag::from(Vec::<Formula>::deserialize(d)?))
    }
}

impl From<Vec<Formula>> for Bag {
    fn from(mut v: Vec<Formula>) -> Self {
        v.sort();
        Bag(v)
    }
}

impl FromIterator<Formula> for Bag {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Bag::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl Bag {
    pub fn new() -> Self {
        Bag(Vec::new())
    }

    pub fn items(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(&self, f: Formula) -> Bag {
        let mut v = self.0.clone();
        let at = v.partition_point(|x| x <= &f);
        v.insert(at, f);
        Bag(v)
    }

    pub fn without_index(&self, i: usize) -> Bag {
        let mut v = self.0.clone();
        v.remove(i);
        Bag(v)
    }
}

impl fmt::Display for Bag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if a.is_atom() {
                write!(f, "{a}")?;
            } else {
                write!(f, "({a})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Bag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Split a comma-separated list at top level (outside parentheses),
/// returning each piece with its byte offset. `.`, `·` and blank mean empty.
pub(crate) fn split_list(text: &str) -> Vec<(usize, &str)> {
    let t = text.trim();
    if t.is_empty() || t == "." || t == "·" {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

pub(crate) fn parse_context(text: &str, offset: usize, sig: &Signature, mode: ParseMode) -> Result<Context, ParseError> {
    split_list(text)
        .into_iter()
        .map(|(at, piece)| ZonedFormula::parse(piece, Some(sig), mode).map_err(|e| e.shifted(offset + at)))
        .collect::<Result<Vec<_>, _>>()
        .map(Context::from)
}

pub(crate) fn parse_bag(text: &str, offset: usize, sig: &Signature, mode: ParseMode) -> Result<Bag, ParseError> {
    split_list(text)
        .into_iter()
        .map(|(at, piece)| parse_formula_with(piece, Some(sig), mode).map_err(|e| e.shifted(offset + at)))
        .collect::<Result<Vec<_>, _>>()
        .map(Bag::from)
}
