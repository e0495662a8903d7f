//! Subexponential signatures `⟨Z, ≤, lin, U⟩` and their split forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{is_zone_char, Zone};

/// The on-disk description of a signature, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureSpec {
    pub zones: Vec<Zone>,
    #[serde(default)]
    pub order: Vec<(Zone, Zone)>,
    pub working: Zone,
    #[serde(default)]
    pub unrestricted: Vec<Zone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    EmptyZoneSet,
    DuplicateZone { zone: Zone },
    BadZoneName { zone: String },
    UnknownZone { zone: Zone, field: String },
    WorkingMissing { zone: Zone },
    NotUpwardClosed { lower: Zone, upper: Zone },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyZoneSet => f.write_str("zone set is empty"),
            Violation::DuplicateZone { zone } => write!(f, "zone `{zone}` listed twice"),
            Violation::BadZoneName { zone } => write!(f, "`{zone}` is not a valid zone name"),
            Violation::UnknownZone { zone, field } => write!(f, "`{zone}` in {field} is not a declared zone"),
            Violation::WorkingMissing { zone } => write!(f, "working zone `{zone}` is not a declared zone"),
            Violation::NotUpwardClosed { lower, upper } => write!(
                f,
                "unrestricted set is not upward closed: {lower} <= {upper} and {lower} is unrestricted but {upper} is not"
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Left,
    Right,
}

impl Form {
    fn suffix(self) -> &'static str {
        match self {
            Form::Left => "l",
            Form::Right => "r",
        }
    }
}

/// The origin of a zone in a split signature.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZoneLabel {
    pub base: Zone,
    pub form: Form,
}

/// A validated signature with its preorder closure precomputed.
#[derive(Clone, PartialEq, Eq)]
pub struct Signature {
    zones: Vec<Zone>,
    index: BTreeMap<Zone, usize>,
    generators: Vec<(Zone, Zone)>,
    closure: Vec<Vec<bool>>,
    working: Zone,
    unrestricted: Vec<bool>,
    labels: Option<Vec<ZoneLabel>>,
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signature")
            .field("zones", &self.zones)
            .field("order", &self.order_pairs())
            .field("working", &self.working)
            .field("unrestricted", &self.unrestricted_zones())
            .finish()
    }
}

/// Check every signature invariant, collecting all violations.
pub fn validate(spec: &SignatureSpec) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if spec.zones.is_empty() {
        out.push(Violation::EmptyZoneSet);
    }
    let mut seen = BTreeSet::new();
    for z in &spec.zones {
        if z.as_str().is_empty() || !z.as_str().chars().all(is_zone_char) {
            out.push(Violation::BadZoneName { zone: z.to_string() });
        }
        if !seen.insert(z.clone()) {
            out.push(Violation::DuplicateZone { zone: z.clone() });
        }
    }
    if !seen.contains(&spec.working) {
        out.push(Violation::WorkingMissing { zone: spec.working.clone() });
    }
    for (a, b) in &spec.order {
        for z in [a, b] {
            if !seen.contains(z) {
                out.push(Violation::UnknownZone { zone: z.clone(), field: "order".into() });
            }
        }
    }
    for z in &spec.unrestricted {
        if !seen.contains(z) {
            out.push(Violation::UnknownZone { zone: z.clone(), field: "unrestricted".into() });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    let sig = Signature::build(spec, None);
    for (i, lower) in sig.zones.iter().enumerate() {
        for (j, upper) in sig.zones.iter().enumerate() {
            if sig.closure[i][j] && sig.unrestricted[i] && !sig.unrestricted[j] {
                out.push(Violation::NotUpwardClosed { lower: lower.clone(), upper: upper.clone() });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

impl Signature {
    pub fn new(spec: &SignatureSpec) -> Result<Self> {
        validate(spec).map_err(Error::Signature)?;
        Ok(Signature::build(spec, None))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SignatureSpec = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Signature::new(&spec)
    }

    fn build(spec: &SignatureSpec, labels: Option<Vec<ZoneLabel>>) -> Self {
        let mut zones: Vec<Zone> = spec.zones.clone();
        let mut labels = labels.map(|ls| zones.iter().cloned().zip(ls).collect::<BTreeMap<_, _>>());
        zones.sort();
        zones.dedup();
        let index: BTreeMap<Zone, usize> = zones.iter().cloned().enumerate().map(|(i, z)| (z, i)).collect();
        let n = zones.len();
        let mut closure = vec![vec![false; n]; n];
        for (i, row) in closure.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut generators: Vec<(Zone, Zone)> = spec.order.clone();
        generators.sort();
        generators.dedup();
        for (a, b) in &generators {
            if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
                closure[i][j] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if closure[i][k] {
                    let row = closure[k].clone();
                    for (cell, via) in closure[i].iter_mut().zip(row) {
                        *cell |= via;
                    }
                }
            }
        }
        let unrestricted = zones.iter().map(|z| spec.unrestricted.contains(z)).collect();
        let labels = labels.as_mut().map(|m| zones.iter().map(|z| m[z].clone()).collect());
        Signature { zones, index, generators, closure, working: spec.working.clone(), unrestricted, labels }
    }

    pub fn spec(&self) -> SignatureSpec {
        SignatureSpec {
            zones: self.zones.clone(),
            order: self.generators.clone(),
            working: self.working.clone(),
            unrestricted: self.unrestricted_zones(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.spec()).expect("signature spec serializes")
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    pub fn working(&self) -> &Zone {
        &self.working
    }

    pub fn contains(&self, z: &Zone) -> bool {
        self.index.contains_key(z)
    }

    fn idx(&self, z: &Zone) -> Result<usize> {
        self.index.get(z).copied().ok_or_else(|| Error::UnknownName { kind: "zone", name: z.to_string() })
    }

    /// Reflexive-transitive closure of the generating order.
    pub fn leq(&self, a: &Zone, b: &Zone) -> Result<bool> {
        Ok(self.closure[self.idx(a)?][self.idx(b)?])
    }

    /// `leq` for zones already known to belong to the signature.
    pub fn le(&self, a: &Zone, b: &Zone) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.closure[i][j],
            _ => false,
        }
    }

    pub fn is_unrestricted(&self, z: &Zone) -> bool {
        self.index.get(z).is_some_and(|&i| self.unrestricted[i])
    }

    pub fn unrestricted_zones(&self) -> Vec<Zone> {
        self.zones.iter().zip(&self.unrestricted).filter(|(_, &u)| u).map(|(z, _)| z.clone()).collect()
    }

    /// Generating pairs as given; see [`Signature::closure_pairs`] for the full relation.
    pub fn order_pairs(&self) -> &[(Zone, Zone)] {
        &self.generators
    }

    /// All strict pairs `a ≤ b` with `a ≠ b` of the closed relation.
    pub fn closure_pairs(&self) -> Vec<(Zone, Zone)> {
        let mut out = Vec::new();
        for (i, a) in self.zones.iter().enumerate() {
            for (j, b) in self.zones.iter().enumerate() {
                if i != j && self.closure[i][j] {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    pub fn label(&self, z: &Zone) -> Option<&ZoneLabel> {
        let i = *self.index.get(z)?;
        self.labels.as_ref().map(|ls| &ls[i])
    }

    pub fn is_split(&self) -> bool {
        self.labels.is_some()
    }

    /// The split form: every zone is doubled into a left and a right copy,
    /// and each right copy sits below its own left copy.
    pub fn split(&self) -> Signature {
        let mut zones = Vec::new();
        let mut labels = Vec::new();
        for z in &self.zones {
            for form in [Form::Left, Form::Right] {
                zones.push(split_zone(z, form));
                labels.push(ZoneLabel { base: z.clone(), form });
            }
        }
        let mut order = Vec::new();
        for (a, b) in &self.generators {
            order.push((split_zone(a, Form::Left), split_zone(b, Form::Left)));
            order.push((split_zone(a, Form::Right), split_zone(b, Form::Right)));
        }
        for z in &self.zones {
            order.push((split_zone(z, Form::Right), split_zone(z, Form::Left)));
        }
        let spec = SignatureSpec {
            zones,
            order,
            working: split_zone(&self.working, Form::Left),
            unrestricted: self.unrestricted_zones().iter().map(|z| split_zone(z, Form::Left)).collect(),
        };
        Signature::build(&spec, Some(labels))
    }
}

/// Name of a zone of the split form.
pub fn split_zone(z: &Zone, form: Form) -> Zone {
    Zone::new(&format!("{}.{}", z, form.suffix()))
}

pub fn builtin(name: &str) -> Result<Signature> {
    let z = Zone::new;
    let spec = match name {
        "mall" => SignatureSpec { zones: vec![z("lin")], order: vec![], working: z("lin"), unrestricted: vec![] },
        "ll" => SignatureSpec {
            zones: vec![z("lin"), z("u")],
            order: vec![(z("lin"), z("u"))],
            working: z("lin"),
            unrestricted: vec![z("u")],
        },
        "l" => SignatureSpec { zones: vec![z("lin")], order: vec![], working: z("lin"), unrestricted: vec![z("lin")] },
        _ => return Err(Error::UnknownName { kind: "signature", name: name.to_string() }),
    };
    Signature::new(&spec)
}

pub const BUILTINS: [&str; 3] = ["mall", "ll", "l"];

/// Search for a bijection on zones that preserves and reflects `≤` and
/// preserves the unrestricted set. With `working` set, the working zone
/// must also map to the working zone.
pub fn find_isomorphism(a: &Signature, b: &Signature, working: bool) -> Option<BTreeMap<Zone, Zone>> {
    let n = a.zones.len();
    if n != b.zones.len() {
        return None;
    }
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(a: &Signature, b: &Signature, working: bool, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == a.zones.len() {
            return true;
        }
        for j in 0..b.zones.len() {
            if used[j] || a.unrestricted[i] != b.unrestricted[j] {
                continue;
            }
            if working && (a.zones[i] == a.working) != (b.zones[j] == b.working) {
                continue;
            }
            let consistent = perm.iter().enumerate().all(|(k, &m)| {
                a.closure[i][k] == b.closure[j][m] && a.closure[k][i] == b.closure[m][j]
            }) && a.closure[i][i] == b.closure[j][j];
            if !consistent {
                continue;
            }
            used[j] = true;
            perm.push(j);
            if go(a, b, working, perm, used) {
                return true;
            }
            perm.pop();
            used[j] = false;
        }
        false
    }
    if go(a, b, working, &mut perm, &mut used) {
        Some(a.zones.iter().cloned().zip(perm.iter().map(|&j| b.zones[j].clone())).collect())
    } else {
        None
    }
}
