//! Seeded random signatures, formulas and sequents for property suites and
//! the `check --fuzz` corpus. Everything is reproducible from the seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Kind, Sequent};
use crate::classical::CSequent;
use crate::context::{Bag, Context, ZonedFormula};
use crate::intuitionistic::ISequent;
use crate::signature::{Signature, SignatureSpec};
use crate::syntax::{Formula, Zone};

const POS_ATOMS: [&str; 2] = ["p", "q"];
const NEG_ATOMS: [&str; 2] = ["n", "m"];
const ZONE_POOL: [&str; 3] = ["lin", "a", "b"];

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_depth: usize,
    pub max_entries: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_depth: 3, max_entries: 3 }
    }
}

/// A source sequent together with the signature it lives over.
#[derive(Clone, Debug)]
pub struct Case {
    pub signature: Signature,
    pub sequent: Sequent,
}

pub struct Generator {
    rng: ChaCha8Rng,
    shape: Shape,
}

impl Generator {
    pub fn new(seed: u64, shape: Shape) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), shape }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Up to three zones including the working zone `lin`, a random
    /// preorder, and a random upward-closed unrestricted set.
    pub fn signature(&mut self) -> Signature {
        let n = self.rng.gen_range(1..=ZONE_POOL.len());
        let zones: Vec<Zone> = ZONE_POOL[..n].iter().map(|z| Zone::new(z)).collect();
        let mut order = Vec::new();
        for x in &zones {
            for y in &zones {
                if x != y && self.rng.gen_bool(0.3) {
                    order.push((x.clone(), y.clone()));
                }
            }
        }
        let seeds: Vec<Zone> = zones.iter().filter(|_| self.rng.gen_bool(0.3)).cloned().collect();
        let base = Signature::new(&SignatureSpec {
            zones: zones.clone(),
            order: order.clone(),
            working: Zone::new("lin"),
            unrestricted: Vec::new(),
        })
        .expect("no unrestricted zones");
        let unrestricted: Vec<Zone> =
            zones.iter().filter(|y| seeds.iter().any(|x| base.le(x, y))).cloned().collect();
        Signature::new(&SignatureSpec { zones, order, working: Zone::new("lin"), unrestricted })
            .expect("upward closure is valid")
    }

    fn zone(&mut self, sig: &Signature) -> Zone {
        sig.zones().choose(&mut self.rng).expect("nonempty").clone()
    }

    fn leaf(&mut self, positive: bool, classical: bool) -> Formula {
        let r = self.rng.gen_range(0..6);
        match (positive, r) {
            (true, 0) => Formula::one(),
            (true, 1) => Formula::zero(),
            (true, _) => Formula::pos(POS_ATOMS.choose(&mut self.rng).unwrap()),
            (false, 0) => Formula::top(),
            (false, 1) if classical => Formula::bot(),
            (false, _) => Formula::neg(NEG_ATOMS.choose(&mut self.rng).unwrap()),
        }
    }

    pub fn positive(&mut self, sig: &Signature, depth: usize, classical: bool) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.leaf(true, classical);
        }
        match self.rng.gen_range(0..3) {
            0 => Formula::tensor(self.positive(sig, depth - 1, classical), self.positive(sig, depth - 1, classical)),
            1 => Formula::plus(self.positive(sig, depth - 1, classical), self.positive(sig, depth - 1, classical)),
            _ => {
                let z = self.zone(sig);
                Formula::bang(z, self.pat(sig, depth - 1, classical))
            }
        }
    }

    pub fn negative(&mut self, sig: &Signature, depth: usize, classical: bool) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.leaf(false, classical);
        }
        let choices = if classical { 4 } else { 3 };
        match self.rng.gen_range(0..choices) {
            0 => Formula::with(self.negative(sig, depth - 1, classical), self.negative(sig, depth - 1, classical)),
            1 => Formula::lolli(self.positive(sig, depth - 1, classical), self.negative(sig, depth - 1, classical)),
            2 => {
                let z = self.zone(sig);
                Formula::qmark(z, self.nat(sig, depth - 1, classical))
            }
            _ => Formula::par(self.negative(sig, depth - 1, classical), self.negative(sig, depth - 1, classical)),
        }
    }

    /// A negative formula or a positive atom.
    pub fn pat(&mut self, sig: &Signature, depth: usize, classical: bool) -> Formula {
        if self.rng.gen_bool(0.25) {
            Formula::pos(POS_ATOMS.choose(&mut self.rng).unwrap())
        } else {
            self.negative(sig, depth, classical)
        }
    }

    /// A positive formula or a negative atom.
    pub fn nat(&mut self, sig: &Signature, depth: usize, classical: bool) -> Formula {
        if self.rng.gen_bool(0.25) {
            Formula::neg(NEG_ATOMS.choose(&mut self.rng).unwrap())
        } else {
            self.positive(sig, depth, classical)
        }
    }

    fn entries(&mut self, sig: &Signature, n: usize, left: bool, classical: bool) -> Context {
        let d = self.shape.max_depth;
        (0..n)
            .map(|_| {
                let z = self.zone(sig);
                let f = if left { self.pat(sig, d, classical) } else { self.nat(sig, d, classical) };
                ZonedFormula::new(z, f)
            })
            .collect()
    }

    fn bag(&mut self, sig: &Signature, n: usize, left: bool, classical: bool) -> Bag {
        let d = self.shape.max_depth;
        (0..n).map(|_| if left { self.nat(sig, d, classical) } else { self.pat(sig, d, classical) }).collect()
    }

    fn count(&mut self) -> usize {
        self.rng.gen_range(0..=self.shape.max_entries)
    }

    pub fn classical_neutral(&mut self, sig: &Signature) -> CSequent {
        let (l, r) = (self.count(), self.count());
        CSequent::neutral(self.entries(sig, l, true, true), self.entries(sig, r, false, true))
    }

    pub fn intuitionistic_neutral(&mut self, sig: &Signature) -> ISequent {
        let l = self.count();
        let left = self.entries(sig, l, true, false);
        let z = self.zone(sig);
        let d = self.shape.max_depth;
        let right = ZonedFormula::new(z, self.nat(sig, d, false));
        ISequent::neutral(left, right)
    }

    pub fn classical_active(&mut self, sig: &Signature) -> CSequent {
        let (l, r, o, x) = (self.count(), self.count(), self.count().max(1), self.count());
        CSequent::Active {
            left: self.entries(sig, l, true, true),
            left_active: self.bag(sig, o, true, true),
            right_active: self.bag(sig, x, false, true),
            right: self.entries(sig, r, false, true),
        }
    }

    pub fn intuitionistic_active(&mut self, sig: &Signature) -> ISequent {
        let (l, o) = (self.count(), self.count().max(1));
        let left = self.entries(sig, l, true, false);
        let left_active = self.bag(sig, o, true, false);
        let d = self.shape.max_depth;
        if self.rng.gen_bool(0.5) {
            ISequent::ActiveR { left, left_active, right_active: self.pat(sig, d, false) }
        } else {
            let z = self.zone(sig);
            ISequent::ActiveP { left, left_active, right: ZonedFormula::new(z, self.nat(sig, d, false)) }
        }
    }

    pub fn neutral(&mut self, kind: Kind, sig: &Signature) -> Sequent {
        match kind {
            Kind::Classical => Sequent::Classical(self.classical_neutral(sig)),
            Kind::Intuitionistic => Sequent::Intuitionistic(self.intuitionistic_neutral(sig)),
        }
    }

    pub fn active(&mut self, kind: Kind, sig: &Signature) -> Sequent {
        match kind {
            Kind::Classical => Sequent::Classical(self.classical_active(sig)),
            Kind::Intuitionistic => Sequent::Intuitionistic(self.intuitionistic_active(sig)),
        }
    }

    /// A neutral case over a fresh random signature.
    pub fn case(&mut self, kind: Kind) -> Case {
        let signature = self.signature();
        let sequent = self.neutral(kind, &signature);
        Case { signature, sequent }
    }
}

/// `count` neutral cases of the given kind from `seed`. With `fixed`, every
/// case uses that signature instead of a random one.
pub fn corpus(kind: Kind, seed: u64, count: usize, shape: Shape, fixed: Option<&Signature>) -> Vec<Case> {
    let mut g = Generator::new(seed, shape);
    (0..count)
        .map(|_| match fixed {
            Some(sig) => Case { signature: sig.clone(), sequent: g.neutral(kind, sig) },
            None => g.case(kind),
        })
        .collect()
}
