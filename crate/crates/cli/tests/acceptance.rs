//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Set `SUBEXP_BLESS=1` to rewrite the JSON goldens.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subexp_cli::{run, EXIT_OK, EXIT_REFUTED};
use subexp_core::adequacy::{check_cases, prove, GlobalVerdict, Status};
use subexp_core::calculus::{calculus, calculus_with_probe, for_kind, Kind};
use subexp_core::corpus::{corpus, Generator, Shape};
use subexp_core::encoding::encoding;
use subexp_core::search::{Budget, Canonical, ProbeEvent, RandomOrder, Recorder, DEFAULT_BUDGET};
use subexp_core::signature::find_isomorphism;
use subexp_core::trace::Rule;
use subexp_core::{builtin, ParseMode, Sequent};

const SEED: u64 = 1;
const SUITE: usize = 500;
const TIME_LIMIT: Duration = Duration::from_secs(300);

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn focal_suite(dir: &str, kind: Kind, seed: u64, count: usize, sig: Option<&str>) -> Verdict {
    let start = Instant::now();
    let fixed = sig.map(|s| builtin(s).unwrap());
    let cases = corpus(kind, seed, count, Shape::default(), fixed.as_ref());
    let reports = match check_cases(encoding(dir).unwrap(), &cases, None, DEFAULT_BUDGET) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("error: {e}")),
    };
    let bijective = reports.iter().filter(|r| r.focal.verdict.is_bijective()).count();
    let busy = reports.iter().filter(|r| !r.focal.source_rules.is_empty()).count();
    let elapsed = start.elapsed();
    let first_bad = reports.iter().find(|r| !r.focal.verdict.is_bijective()).map(|r| format!(", first failure: case {} `{}`", r.index, r.focal.conclusion));
    verdict(
        bijective == count && elapsed < TIME_LIMIT,
        format!("{bijective}/{count} bijective, {busy} with rules, {:.2}s{}", elapsed.as_secs_f64(), first_bad.unwrap_or_default()),
    )
}

fn criterion_1() -> Verdict {
    focal_suite("c2i", Kind::Classical, SEED, SUITE, None)
}

fn criterion_2() -> Verdict {
    focal_suite("i2c", Kind::Intuitionistic, SEED, SUITE, None)
}

fn criterion_3() -> Verdict {
    let out = run(["check", "--dir", "naive-i2c", "--sig", "mall", "--json", "lin:(p -o 'n) |- lin:q"]);
    if out.code != EXIT_REFUTED {
        return verdict(false, format!("exit {} instead of {EXIT_REFUTED}", out.code));
    }
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let off = &v["offending"];
    let premises: Vec<Sequent> = serde_json::from_value(off["premises"].clone()).unwrap();
    let mall = builtin("mall").unwrap();
    let c = calculus("classical", mall).unwrap();
    let expected = vec![
        c.parse_sequent(". |- [p] ; lin:q", ParseMode::User).unwrap(),
        c.parse_sequent(". ; ['n] |- .", ParseMode::User).unwrap(),
    ];
    let conclusion: Sequent = serde_json::from_value(off["conclusion"].clone()).unwrap();
    let ok = v["verdict"] == "counterexample"
        && v["kind"] == "target-rule-without-preimage"
        && off["rule"] == "lr-o"
        && premises == expected
        && conclusion == c.parse_sequent(". ; [p -o 'n] |- lin:q", ParseMode::User).unwrap();
    verdict(ok, format!("offending {} instance with premises {}", off["rule"], premises.iter().map(|p| format!("`{p}`")).collect::<Vec<_>>().join(" and ")))
}

fn criterion_4() -> Verdict {
    let iso = find_isomorphism(&builtin("l").unwrap().split(), &builtin("ll").unwrap(), false);
    let suite = focal_suite("i2c", Kind::Intuitionistic, SEED, SUITE, Some("l"));
    let map = iso.as_ref().map(|m| m.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" "));
    verdict(iso.is_some() && suite.pass, format!("isomorphism [{}]; {}", map.unwrap_or_else(|| "none".into()), suite.detail))
}

fn goldens_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("goldens")
}

fn criterion_5() -> Verdict {
    let cases = [
        ("promotion_and_axiom", "ll", "u:p |- lin:(p * ![u] 'n)", 1),
        ("par_under_promotion", "mall", "|- lin:![lin] ('n | 'm)", 1),
        ("right_decision", "mall", "lin:p, lin:q |- lin:(p * q)", 1),
    ];
    let bless = std::env::var_os("SUBEXP_BLESS").is_some();
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, sig, seq, pairs) in cases {
        let out = run(["check", "--dir", "c2i", "--sig", sig, "--json", seq]);
        let again = run(["check", "--dir", "c2i", "--sig", sig, "--json", seq]);
        let path = goldens_dir().join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(goldens_dir()).unwrap();
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let golden = std::fs::read_to_string(&path).unwrap_or_default();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap_or_default();
        let ok = out.code == EXIT_OK
            && out.stdout == again.stdout
            && out.stdout == golden
            && v["verdict"] == "bijective"
            && v["pairing"].as_array().map(Vec::len) == Some(pairs);
        pass &= ok;
        notes.push(format!("{name} {}", if ok { "ok" } else { "MISMATCH" }));
    }
    verdict(pass, notes.join(", "))
}

fn criterion_6() -> Verdict {
    let mut g = Generator::new(SEED, Shape::default());
    let mut checked = 0;
    let mut bad = 0;
    for i in 0..SUITE {
        let sig = g.signature();
        for kind in [Kind::Classical, Kind::Intuitionistic] {
            let s = g.active(kind, &sig);
            let calc = for_kind(kind, sig.clone());
            let canonical = calc.normalize(&s, &mut Canonical, &Budget::default()).unwrap();
            for k in 0..10u64 {
                let mut sched = RandomOrder(ChaCha8Rng::seed_from_u64(SEED * 1_000_003 + (i as u64) * 10 + k));
                if calc.normalize(&s, &mut sched, &Budget::default()).unwrap() != canonical {
                    bad += 1;
                }
            }
            checked += 1;
        }
    }
    verdict(bad == 0, format!("{checked} active sequents x 10 orderings, {bad} mismatches"))
}

fn criterion_7() -> Verdict {
    let mall = builtin("mall").unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    for (kind, text) in [
        (Kind::Classical, "lin:p |- lin:p"),
        (Kind::Classical, "lin:'n |- lin:'n"),
        (Kind::Intuitionistic, "lin:p |- lin:p"),
        (Kind::Intuitionistic, "lin:'n |- lin:'n"),
    ] {
        let c = for_kind(kind, mall.clone());
        let s = c.parse_sequent(text, ParseMode::User).unwrap();
        let r = prove(c.as_ref(), &s, 2, &Budget::default()).unwrap();
        pass &= r.status == Status::Proved;
        notes.push(format!("{kind} `{text}` {:?}", r.status));
    }
    let rec = Arc::new(Recorder::default());
    let mut g = Generator::new(SEED, Shape::default());
    for _ in 0..SUITE {
        let sig = g.signature();
        let c = calculus_with_probe("classical", sig.clone(), Some(rec.clone())).unwrap();
        let s = g.neutral(Kind::Classical, &sig);
        c.synthetic_rules(&s, &Budget::default()).unwrap();
    }
    let c = calculus_with_probe("classical", builtin("ll").unwrap(), Some(rec.clone())).unwrap();
    let s = c.parse_sequent("lin:p, lin:q, u:'o |- lin:(p * q), lin:'n, lin:'m", ParseMode::User).unwrap();
    c.synthetic_rules(&s, &Budget::default()).unwrap();
    let splits: Vec<_> = rec
        .events()
        .into_iter()
        .filter_map(|e| match e {
            ProbeEvent::Split { rule: Rule::RrTensor, left, right, enumerated } => Some((left + right, enumerated)),
            _ => None,
        })
        .collect();
    let exact = splits.iter().all(|&(nm, e)| e == 1 << nm);
    let widest = splits.iter().map(|&(nm, _)| nm).max().unwrap_or(0);
    pass &= exact && widest >= 4;
    notes.push(format!("{} rr* splits all 2^(n+m), widest n+m={widest}", splits.len()));
    verdict(pass, notes.join("; "))
}

fn criterion_8() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for (dir, kind) in [("c2i", Kind::Classical), ("i2c", Kind::Intuitionistic)] {
        let cases = corpus(kind, SEED, SUITE, Shape::default(), None);
        let reports = check_cases(encoding(dir).unwrap(), &cases, Some(3), DEFAULT_BUDGET).unwrap();
        let (mut settled, mut agree, mut disagree) = (0, 0, 0);
        for r in &reports {
            let g = r.global.as_ref().unwrap();
            if g.source.status == Status::Open {
                continue;
            }
            settled += 1;
            match g.verdict {
                GlobalVerdict::Agree { .. } => agree += 1,
                _ => disagree += 1,
            }
        }
        pass &= disagree == 0 && agree == settled;
        notes.push(format!("{dir}: {settled} settled, {agree} agree, {disagree} not agreeing"));
    }
    verdict(pass, notes.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("c2i focal adequacy on random classical sequents", criterion_1),
        ("i2c focal adequacy on random intuitionistic sequents", criterion_2),
        ("naive control yields the stray lolli split", criterion_3),
        ("split(l) is isomorphic to ll and i2c holds over l", criterion_4),
        ("proof-case pairings match the JSON goldens", criterion_5),
        ("active phase is confluent under random orderings", criterion_6),
        ("atomic identities prove and tensor splits are exhaustive", criterion_7),
        ("global adequacy agrees on settled sequents", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {}: {} | {name} | {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
