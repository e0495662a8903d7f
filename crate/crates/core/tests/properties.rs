use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subexp_core::adequacy::check_focal_adequacy;
use subexp_core::calculus::{calculus_with_probe, for_kind, Kind};
use subexp_core::classical::{CSequent, Classical};
use subexp_core::corpus::{Generator, Shape};
use subexp_core::encoding::{c2i_formula, encoding, i2c_formula, C2iMode, I2cMode};
use subexp_core::intuitionistic::{ISequent, Intuitionistic};
use subexp_core::search::{Budget, Canonical, ProbeEvent, RandomOrder, Recorder};
use subexp_core::signature::{split_zone, Form};
use subexp_core::syntax::{parse_formula, Node};
use subexp_core::{Formula, Sequent};

fn generator(seed: u64) -> Generator {
    Generator::new(seed, Shape::default())
}

fn has_unit(f: &Formula) -> bool {
    let mut found = false;
    f.for_each(&mut |g| found |= matches!(g.node(), Node::One | Node::Zero | Node::Top | Node::Bot));
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn formula_text_round_trip(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        let f = if seed % 2 == 0 { g.pat(&sig, 3, true) } else { g.nat(&sig, 3, true) };
        prop_assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Formula>(&json).unwrap(), f);
    }

    #[test]
    fn sequent_text_and_json_round_trip(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        for s in [g.neutral(Kind::Classical, &sig), g.active(Kind::Classical, &sig),
                  g.neutral(Kind::Intuitionistic, &sig), g.active(Kind::Intuitionistic, &sig)] {
            let calc = for_kind(s.kind(), sig.clone());
            prop_assert_eq!(&calc.parse_sequent(&s.to_string(), subexp_core::ParseMode::User).unwrap(), &s);
            let json = serde_json::to_string(&s).unwrap();
            prop_assert_eq!(serde_json::from_str::<Sequent>(&json).unwrap(), s);
        }
    }

    #[test]
    fn order_is_a_preorder_and_u_upward_closed(seed in any::<u64>()) {
        let sig = generator(seed).signature();
        let zs = sig.zones();
        for x in zs {
            prop_assert!(sig.le(x, x));
            for y in zs {
                if sig.is_unrestricted(x) && sig.le(x, y) {
                    prop_assert!(sig.is_unrestricted(y));
                }
                for z in zs {
                    if sig.le(x, y) && sig.le(y, z) {
                        prop_assert!(sig.le(x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn split_laws(seed in any::<u64>()) {
        let sig = generator(seed).signature();
        let sp = sig.split();
        prop_assert_eq!(sp.zones().len(), 2 * sig.zones().len());
        prop_assert_eq!(sp.working(), &split_zone(sig.working(), Form::Left));
        for x in sig.zones() {
            let (xl, xr) = (split_zone(x, Form::Left), split_zone(x, Form::Right));
            prop_assert!(sp.le(&xr, &xl));
            prop_assert_eq!(sp.is_unrestricted(&xl), sig.is_unrestricted(x));
            prop_assert!(!sp.is_unrestricted(&xr));
            for y in sig.zones() {
                let (yl, yr) = (split_zone(y, Form::Left), split_zone(y, Form::Right));
                prop_assert_eq!(sp.le(&xl, &yl), sig.le(x, y));
                prop_assert_eq!(sp.le(&xr, &yr), sig.le(x, y));
                prop_assert_eq!(sp.le(&xr, &yl), sig.le(x, y));
                prop_assert!(!sp.le(&xl, &yr));
            }
        }
    }

    #[test]
    fn active_phase_is_confluent(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        for kind in [Kind::Classical, Kind::Intuitionistic] {
            let s = g.active(kind, &sig);
            let calc = for_kind(kind, sig.clone());
            let canonical = calc.normalize(&s, &mut Canonical, &Budget::default()).unwrap();
            for k in 0..4 {
                let mut sched = RandomOrder(ChaCha8Rng::seed_from_u64(seed ^ k));
                prop_assert_eq!(&calc.normalize(&s, &mut sched, &Budget::default()).unwrap(), &canonical);
            }
            for n in &canonical {
                prop_assert!(n.is_neutral());
            }
        }
    }

    #[test]
    fn classical_decisions_match_eligible_entries(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        let s = g.classical_neutral(&sig);
        let mut eligible: Vec<_> = s.right().iter().filter(|zf| zf.formula.is_positive()).map(|zf| (1, zf.clone()))
            .chain(s.left().iter().filter(|zf| zf.formula.is_negative()).map(|zf| (0, zf.clone())))
            .collect();
        eligible.sort();
        eligible.dedup();
        let decided = Classical::new(sig.clone()).decide(&s);
        prop_assert_eq!(decided.len(), eligible.len());
        for (rule, f) in decided {
            prop_assert!(f.is_focused());
            prop_assert_eq!(rule.name().starts_with('u'), {
                let gone = f.left().len() + f.right().len() < s.left().len() + s.right().len();
                !gone
            });
        }
    }

    #[test]
    fn intuitionistic_decisions_match_eligible_entries(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        let s = g.intuitionistic_neutral(&sig);
        let mut left: Vec<_> = s.left().iter().filter(|zf| zf.formula.is_negative()).collect();
        left.dedup();
        let right = usize::from(s.right().unwrap().formula.is_positive());
        prop_assert_eq!(Intuitionistic::new(sig).decide(&s).len(), left.len() + right);
    }

    #[test]
    fn promotions_respect_the_order_and_splits_are_exhaustive(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        for kind in [Kind::Classical, Kind::Intuitionistic] {
            let rec = Arc::new(Recorder::default());
            let calc = calculus_with_probe(kind.name(), sig.clone(), Some(rec.clone())).unwrap();
            let s = g.neutral(kind, &sig);
            calc.synthetic_rules(&s, &Budget::default()).unwrap();
            for e in rec.events() {
                match e {
                    ProbeEvent::Promotion { zone, passive, .. } => {
                        for x in passive {
                            prop_assert!(sig.le(&zone, &x), "{} fired over {}", zone, x);
                        }
                    }
                    ProbeEvent::Split { left, right, enumerated, .. } => {
                        prop_assert_eq!(enumerated, 1usize << (left + right));
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_replay_and_premises_are_well_formed(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        for kind in [Kind::Classical, Kind::Intuitionistic] {
            let calc = for_kind(kind, sig.clone());
            let s = g.neutral(kind, &sig);
            for rule in calc.synthetic_rules(&s, &Budget::default()).unwrap() {
                prop_assert!(!rule.witnesses.is_empty());
                for w in &rule.witnesses {
                    prop_assert_eq!(&calc.replay(&s, w, &Budget::default()).unwrap(), &rule.premises);
                }
                for p in &rule.premises {
                    prop_assert!(p.is_neutral());
                    calc.validate(p).unwrap();
                    if let Sequent::Intuitionistic(i) = p {
                        prop_assert!(i.right().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn encodings_land_in_the_target(seed in any::<u64>()) {
        let mut g = generator(seed);
        let sig = g.signature();
        for (name, kind) in [("c2i", Kind::Classical), ("i2c", Kind::Intuitionistic), ("naive-i2c", Kind::Intuitionistic)] {
            let enc = encoding(name).unwrap();
            let target = for_kind(enc.target(), enc.target_signature(&sig));
            for s in [g.neutral(kind, &sig), g.active(kind, &sig)] {
                let t = enc.encode(&sig, &s).unwrap();
                target.validate(&t).unwrap();
                prop_assert_eq!(t.is_neutral(), s.is_neutral());
            }
        }
    }

    // Active-role images may coincide, e.g. left-active `'n` and `![lin] 'n`,
    // since both reach the same neutral sequent.
    #[test]
    fn c2i_is_injective_without_units(a in any::<u64>(), b in any::<u64>()) {
        let sig = generator(a).signature();
        let mut ga = generator(a);
        let mut gb = generator(b);
        ga.signature();
        gb.signature();
        let pairs = [
            (C2iMode::Eq, ga.pat(&sig, 3, true), gb.pat(&sig, 3, true)),
            (C2iMode::Ne, ga.nat(&sig, 3, true), gb.nat(&sig, 3, true)),
        ];
        for (mode, f, h) in pairs {
            if f != h && !has_unit(&f) && !has_unit(&h) {
                prop_assert_ne!(c2i_formula(&f, mode, &sig).unwrap(), c2i_formula(&h, mode, &sig).unwrap());
            }
        }
    }

    #[test]
    fn i2c_is_injective(a in any::<u64>(), b in any::<u64>()) {
        let sig = generator(a).signature();
        let mut ga = generator(a);
        let mut gb = generator(b);
        ga.signature();
        gb.signature();
        let pairs = [
            (I2cMode::Lp, ga.pat(&sig, 3, false), gb.pat(&sig, 3, false)),
            (I2cMode::La, ga.nat(&sig, 3, false), gb.nat(&sig, 3, false)),
            (I2cMode::Ra, ga.pat(&sig, 3, false), gb.pat(&sig, 3, false)),
            (I2cMode::Rp, ga.nat(&sig, 3, false), gb.nat(&sig, 3, false)),
        ];
        for (mode, f, h) in pairs {
            if f != h {
                prop_assert_ne!(i2c_formula(&f, mode, &sig).unwrap(), i2c_formula(&h, mode, &sig).unwrap());
            }
        }
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let mut g = generator(seed);
        let case = g.case(Kind::Intuitionistic);
        let enc = encoding("i2c").unwrap();
        let once = serde_json::to_string(&check_focal_adequacy(enc, &case.signature, &case.sequent, &Budget::default()).unwrap()).unwrap();
        let twice = serde_json::to_string(&check_focal_adequacy(enc, &case.signature, &case.sequent, &Budget::default()).unwrap()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn bijection_preserves_rule_counts(seed in any::<u64>()) {
        let mut g = generator(seed);
        for (name, kind) in [("c2i", Kind::Classical), ("i2c", Kind::Intuitionistic)] {
            let case = g.case(kind);
            let r = check_focal_adequacy(encoding(name).unwrap(), &case.signature, &case.sequent, &Budget::default()).unwrap();
            if r.verdict.is_bijective() {
                prop_assert_eq!(r.source_rules.len(), r.target_rules.len());
                prop_assert_eq!(r.pairing.len(), r.source_rules.len());
                for pair in &r.pairing {
                    prop_assert_eq!(r.source_rules[pair.source].premises.len(), pair.premises.len());
                }
            }
        }
    }
}

#[test]
fn parsed_sequents_reject_wrong_calculus() {
    let sig = subexp_core::builtin("mall").unwrap();
    assert!(ISequent::parse("lin:p |- lin:p, lin:q", &sig, subexp_core::ParseMode::User).is_err());
    let s = CSequent::parse("lin:p |- lin:p, lin:q", &sig, subexp_core::ParseMode::User).unwrap();
    assert!(encoding("i2c").unwrap().encode(&sig, &Sequent::Classical(s)).is_err());
}
