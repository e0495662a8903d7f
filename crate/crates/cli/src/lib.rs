//! The `subexp` command line: parse, translate, prove, list synthetic
//! rules, check adequacy, and inspect signatures.
//!
//! Exit statuses: 0 success, bijective or proved; 1 counterexample,
//! disagreement or exhausted search; 2 usage or validation error; 3 search
//! bound reached without a decision.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context as _};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use subexp_core::adequacy::{
    check_cases, check_focal_adequacy, check_global_adequacy, prove, AdequacyReport, Derivation, GlobalReport,
    GlobalVerdict, ProofSearchResult, Status, Verdict,
};
use subexp_core::calculus::{calculus, for_kind, Calculus};
use subexp_core::context::ZonedFormula;
use subexp_core::corpus::{corpus, Shape};
use subexp_core::encoding::{c2i_formula, encoding, i2c_formula, i2c_zoned, C2iMode, Encoding, I2cMode};
use subexp_core::search::{Budget, DEFAULT_BUDGET};
use subexp_core::signature::BUILTINS;
use subexp_core::syntax::{parse_formula, parse_formula_with};
use subexp_core::trace::render_trace;
use subexp_core::{builtin, ParseMode, Sequent, Signature, SyntheticRule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OPEN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "subexp", version, about = "Focused proof search and adequacy checking for subexponential logic")]
struct Cli {
    /// Signature: a built-in name (mall, ll, l) or a path to a JSON file.
    #[arg(long, global = true)]
    sig: Option<String>,
    /// Use the split form of the signature.
    #[arg(long, global = true)]
    split: bool,
    /// Read inputs from a file, one per line; `#` starts a comment line.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<PathBuf>,
    #[arg(long, global = true)]
    json: bool,
    /// Print connectives with Unicode symbols.
    #[arg(long, global = true)]
    unicode: bool,
    /// Cap on sequents constructed per search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a formula or sequent and print it in canonical form.
    Parse {
        #[arg(long, default_value = "classical")]
        calc: String,
        /// Treat the input as a formula rather than a sequent.
        #[arg(long)]
        formula: bool,
        input: Option<String>,
    },
    /// Apply an encoding to a formula or a sequent.
    Translate {
        #[arg(long)]
        dir: String,
        /// eq, ne, eq-act, ne-act (c2i); lp, lf, rf, la, ra, rp (i2c); or sequent.
        #[arg(long, default_value = "sequent")]
        mode: String,
        input: Option<String>,
    },
    /// Depth-bounded proof search on a neutral sequent.
    Prove {
        #[arg(long, default_value = "classical")]
        calc: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        input: Option<String>,
    },
    /// List the synthetic rules of a neutral sequent.
    Synthetics {
        #[arg(long, default_value = "classical")]
        calc: String,
        input: Option<String>,
    },
    /// Check focal adequacy of an encoding, and global adequacy with --depth.
    Check {
        #[arg(long)]
        dir: String,
        #[arg(long)]
        depth: Option<usize>,
        /// Check a seeded random corpus of this many cases instead of an input.
        #[arg(long, value_name = "COUNT")]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        input: Option<String>,
    },
    /// Describe a signature.
    Sig {
        #[arg(long, value_name = "SIG")]
        show: String,
    },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the command line on `argv`, which excludes the program name.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("subexp".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok((code, out)) => {
            let stdout = if cli.unicode && !cli.json { unicode(&out) } else { out };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

type Rendered = anyhow::Result<(i32, String)>;

fn load_signature(name: &str) -> anyhow::Result<Signature> {
    if BUILTINS.contains(&name) {
        return Ok(builtin(name)?);
    }
    let text = std::fs::read_to_string(name).with_context(|| format!("reading signature `{name}`"))?;
    Ok(Signature::from_json(&text)?)
}

fn signature(cli: &Cli) -> anyhow::Result<Signature> {
    let sig = load_signature(cli.sig.as_deref().unwrap_or("mall"))?;
    Ok(if cli.split { sig.split() } else { sig })
}

fn inputs(cli: &Cli, input: &Option<String>) -> anyhow::Result<Vec<String>> {
    match (&cli.file, input) {
        (Some(_), Some(_)) => bail!("give the input inline or with --file, not both"),
        (None, Some(s)) => Ok(vec![s.clone()]),
        (None, None) => bail!("missing input"),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let items: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            if items.is_empty() {
                bail!("{} has no inputs", path.display());
            }
            Ok(items)
        }
    }
}

/// How bad an exit status is, for combining several inputs.
fn severity(code: i32) -> u8 {
    match code {
        EXIT_USAGE => 3,
        EXIT_REFUTED => 2,
        EXIT_OPEN => 1,
        _ => 0,
    }
}

/// Run `each` on every input and join the results. With `--json`, several
/// inputs print as one array.
fn over_inputs(cli: &Cli, items: &[String], mut each: impl FnMut(&str) -> anyhow::Result<(i32, String, Value)>) -> Rendered {
    let mut code = EXIT_OK;
    let mut text = String::new();
    let mut values = Vec::new();
    for item in items {
        let (c, t, v) = each(item)?;
        if severity(c) > severity(code) {
            code = c;
        }
        text.push_str(&t);
        values.push(v);
    }
    if cli.json {
        let v = if values.len() == 1 { values.pop().unwrap() } else { Value::Array(values) };
        Ok((code, format!("{}\n", serde_json::to_string_pretty(&v)?)))
    } else {
        Ok((code, text))
    }
}

fn dispatch(cli: &Cli) -> Rendered {
    match &cli.cmd {
        Cmd::Sig { show } => show_signature(cli, show),
        Cmd::Parse { calc, formula, input } => {
            let sig = signature(cli)?;
            let items = inputs(cli, input)?;
            if *formula {
                return over_inputs(cli, &items, |text| {
                    let f = parse_formula(text, &sig)?;
                    let v = json!({ "formula": f, "polarity": f.polarity() });
                    Ok((EXIT_OK, format!("{f}\n"), v))
                });
            }
            let c = calculus(calc, sig)?;
            over_inputs(cli, &items, |text| {
                let s = c.parse_sequent(text, ParseMode::User)?;
                Ok((EXIT_OK, format!("{s}\n"), serde_json::to_value(&s)?))
            })
        }
        Cmd::Translate { dir, mode, input } => translate(cli, dir, mode, &inputs(cli, input)?),
        Cmd::Prove { calc, depth, input } => {
            let c = calculus(calc, signature(cli)?)?;
            let items = inputs(cli, input)?;
            over_inputs(cli, &items, |text| {
                let s = c.parse_sequent(text, ParseMode::User)?;
                let r = prove(c.as_ref(), &s, *depth, &Budget::new(cli.budget))?;
                let code = match r.status {
                    Status::Proved => EXIT_OK,
                    Status::Exhausted => EXIT_REFUTED,
                    Status::Open => EXIT_OPEN,
                };
                Ok((code, render_proof(&r), serde_json::to_value(&r)?))
            })
        }
        Cmd::Synthetics { calc, input } => {
            let c = calculus(calc, signature(cli)?)?;
            let items = inputs(cli, input)?;
            over_inputs(cli, &items, |text| {
                let s = c.parse_sequent(text, ParseMode::User)?;
                let rules = c.synthetic_rules(&s, &Budget::new(cli.budget))?;
                let mut out = format!("{s}\n{} synthetic rule(s)\n", rules.len());
                render_rules(&mut out, &rules, "");
                Ok((EXIT_OK, out, serde_json::to_value(&rules)?))
            })
        }
        Cmd::Check { dir, depth, fuzz, seed, input } => {
            let enc = encoding(dir)?;
            if depth == &Some(0) {
                bail!("--depth must be at least 1");
            }
            match fuzz {
                Some(count) => {
                    if input.is_some() || cli.file.is_some() {
                        bail!("--fuzz generates its own inputs");
                    }
                    fuzz_check(cli, enc, *count, *seed, *depth)
                }
                None => {
                    let sig = signature(cli)?;
                    let source = for_kind(enc.source(), sig.clone());
                    let items = inputs(cli, input)?;
                    over_inputs(cli, &items, |text| check_one(cli, enc, &sig, source.as_ref(), text, *depth))
                }
            }
        }
    }
}

fn show_signature(cli: &Cli, name: &str) -> Rendered {
    let sig = load_signature(name)?;
    let sig = if cli.split { sig.split() } else { sig };
    if cli.json {
        return Ok((EXIT_OK, format!("{}\n", sig.to_json())));
    }
    let list = |zs: Vec<String>| if zs.is_empty() { "(none)".to_string() } else { zs.join(", ") };
    let mut out = String::new();
    writeln!(out, "zones: {}", list(sig.zones().iter().map(|z| z.to_string()).collect()))?;
    writeln!(out, "working: {}", sig.working())?;
    writeln!(out, "unrestricted: {}", list(sig.unrestricted_zones().iter().map(|z| z.to_string()).collect()))?;
    writeln!(out, "order:")?;
    let strict: Vec<_> = sig.closure_pairs().into_iter().filter(|(a, b)| a != b).collect();
    if strict.is_empty() {
        writeln!(out, "  (discrete)")?;
    }
    for (a, b) in strict {
        writeln!(out, "  {a} <= {b}")?;
    }
    Ok((EXIT_OK, out))
}

fn c2i_mode(mode: &str) -> Option<C2iMode> {
    Some(match mode {
        "eq" => C2iMode::Eq,
        "ne" => C2iMode::Ne,
        "eq-act" => C2iMode::EqActive,
        "ne-act" => C2iMode::NeActive,
        _ => return None,
    })
}

fn i2c_mode(mode: &str) -> Option<I2cMode> {
    Some(match mode {
        "lp" => I2cMode::Lp,
        "lf" => I2cMode::Lf,
        "rf" => I2cMode::Rf,
        "la" => I2cMode::La,
        "ra" => I2cMode::Ra,
        "rp" => I2cMode::Rp,
        _ => return None,
    })
}

fn translate(cli: &Cli, dir: &str, mode: &str, items: &[String]) -> Rendered {
    let enc = encoding(dir)?;
    let sig = signature(cli)?;
    let target_sig = enc.target_signature(&sig);
    let target_spec = serde_json::to_value(target_sig.spec())?;
    let wrap = |input: &str, output: String| -> anyhow::Result<(i32, String, Value)> {
        let v = json!({ "direction": dir, "mode": mode, "input": input, "output": output, "target_signature": target_spec });
        Ok((EXIT_OK, format!("{output}\n"), v))
    };
    if mode == "sequent" {
        let source = for_kind(enc.source(), sig.clone());
        return over_inputs(cli, items, |text| {
            let s = source.parse_sequent(text, ParseMode::User)?;
            let t = enc.encode(&sig, &s)?;
            let (code, out, mut v) = wrap(text, t.to_string())?;
            v["sequent"] = serde_json::to_value(&t)?;
            Ok((code, out, v))
        });
    }
    match dir {
        "c2i" => {
            let m = c2i_mode(mode).ok_or_else(|| anyhow!("c2i has modes eq, ne, eq-act, ne-act and sequent, not `{mode}`"))?;
            over_inputs(cli, items, |text| {
                let f = parse_formula(text, &sig)?;
                wrap(text, c2i_formula(&f, m, &sig)?.to_string())
            })
        }
        "i2c" => {
            let m = i2c_mode(mode).ok_or_else(|| anyhow!("i2c has modes lp, lf, rf, la, ra, rp and sequent, not `{mode}`"))?;
            over_inputs(cli, items, |text| {
                if matches!(m, I2cMode::Lp | I2cMode::Rp) && text.contains(':') {
                    let zf = ZonedFormula::parse(text, Some(&sig), ParseMode::User)?;
                    return wrap(text, i2c_zoned(&zf, m, &sig)?.to_string());
                }
                let f = parse_formula_with(text, Some(&sig), ParseMode::User)?;
                wrap(text, i2c_formula(&f, m, &sig)?.to_string())
            })
        }
        _ => bail!("{dir} only translates whole sequents; use --mode sequent"),
    }
}

fn check_one(
    cli: &Cli,
    enc: &dyn Encoding,
    sig: &Signature,
    source: &dyn Calculus,
    text: &str,
    depth: Option<usize>,
) -> anyhow::Result<(i32, String, Value)> {
    let s = source.parse_sequent(text, ParseMode::User)?;
    let focal = check_focal_adequacy(enc, sig, &s, &Budget::new(cli.budget))?;
    let global = match depth {
        Some(d) => Some(check_global_adequacy(enc, sig, &s, d, &Budget::new(cli.budget))?),
        None => None,
    };
    let code = verdict_code(&focal, global.as_ref());
    let mut out = render_report(&focal);
    if let Some(g) = &global {
        out.push_str(&render_global(g));
    }
    let mut v = serde_json::to_value(&focal)?;
    if let Some(g) = &global {
        v["global"] = serde_json::to_value(g)?;
    }
    Ok((code, out, v))
}

fn verdict_code(focal: &AdequacyReport, global: Option<&GlobalReport>) -> i32 {
    let disagree = matches!(global.map(|g| &g.verdict), Some(GlobalVerdict::Disagree { .. }));
    if focal.verdict.is_bijective() && !disagree {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}

fn fuzz_check(cli: &Cli, enc: &dyn Encoding, count: usize, seed: u64, depth: Option<usize>) -> Rendered {
    let fixed = match &cli.sig {
        Some(_) => Some(signature(cli)?),
        None => None,
    };
    let cases = corpus(enc.source(), seed, count, Shape::default(), fixed.as_ref());
    let reports = check_cases(enc, &cases, depth, cli.budget)?;
    let failures: Vec<_> = reports.iter().filter(|r| verdict_code(&r.focal, r.global.as_ref()) != EXIT_OK).collect();
    let bijective = reports.iter().filter(|r| r.focal.verdict.is_bijective()).count();
    let tally = |f: fn(&GlobalVerdict) -> bool| reports.iter().filter(|r| r.global.as_ref().is_some_and(|g| f(&g.verdict))).count();
    let agree = tally(|v| matches!(v, GlobalVerdict::Agree { .. }));
    let disagree = tally(|v| matches!(v, GlobalVerdict::Disagree { .. }));
    let inconclusive = tally(|v| matches!(v, GlobalVerdict::Inconclusive));
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_REFUTED };
    if cli.json {
        let mut v = json!({
            "direction": enc.name(),
            "seed": seed,
            "count": count,
            "bijective": bijective,
            "failures": failures,
        });
        if depth.is_some() {
            v["global"] = json!({ "agree": agree, "disagree": disagree, "inconclusive": inconclusive });
        }
        return Ok((code, format!("{}\n", serde_json::to_string_pretty(&v)?)));
    }
    let mut out = format!("{}: {count} cases from seed {seed}, {bijective} bijective\n", enc.name());
    if depth.is_some() {
        writeln!(out, "global: {agree} agree, {disagree} disagree, {inconclusive} inconclusive")?;
    }
    for r in failures {
        writeln!(out, "\ncase {} over {}", r.index, serde_json::to_string(&r.signature)?)?;
        out.push_str(&render_report(&r.focal));
        if let Some(g) = &r.global {
            out.push_str(&render_global(g));
        }
    }
    Ok((code, out))
}

fn premises_line(ps: &[Sequent]) -> String {
    if ps.is_empty() {
        "(none)".to_string()
    } else {
        ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("  |  ")
    }
}

fn render_rules(out: &mut String, rules: &[SyntheticRule], indent: &str) {
    for (i, r) in rules.iter().enumerate() {
        let _ = writeln!(out, "{indent}[{i}] premises: {}", premises_line(&r.premises));
        for w in &r.witnesses {
            let _ = writeln!(out, "{indent}    via {}", render_trace(w));
        }
    }
}

fn render_report(r: &AdequacyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "direction: {}", r.direction);
    let _ = writeln!(out, "conclusion: {}", r.conclusion);
    let _ = writeln!(out, "encoded: {}", r.encoded);
    let _ = writeln!(out, "source rules: {}", r.source_rules.len());
    render_rules(&mut out, &r.source_rules, "  ");
    let _ = writeln!(out, "target rules: {}", r.target_rules.len());
    render_rules(&mut out, &r.target_rules, "  ");
    if !r.pairing.is_empty() {
        let _ = writeln!(out, "pairing:");
        for p in &r.pairing {
            let _ = writeln!(out, "  source {} <-> target {}", p.source, p.target);
        }
    }
    match &r.verdict {
        Verdict::Bijective => out.push_str("verdict: bijective\n"),
        Verdict::Counterexample { kind, offending } => {
            let kind = serde_json::to_value(kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let _ = writeln!(out, "verdict: counterexample ({kind})");
            match offending.rule {
                Some(rule) => {
                    let _ = writeln!(out, "offending {rule} instance: {}", offending.conclusion);
                }
                None => {
                    let _ = writeln!(out, "offending rule on: {}", offending.conclusion);
                }
            }
            let _ = writeln!(out, "  premises: {}", premises_line(&offending.premises));
        }
    }
    out
}

fn render_global(g: &GlobalReport) -> String {
    let verdict = match &g.verdict {
        GlobalVerdict::Agree { provable: true } => "agree (provable)".to_string(),
        GlobalVerdict::Agree { provable: false } => "agree (not provable)".to_string(),
        GlobalVerdict::Disagree { source, target } => format!("disagree (source {source:?}, target {target:?})"),
        GlobalVerdict::Inconclusive => "inconclusive".to_string(),
    };
    format!(
        "global at depth {}: {verdict}\n  source {:?} count {}, target {:?} count {}\n",
        g.source.depth, g.source.status, g.source.count, g.target.status, g.target.count
    )
}

fn render_derivation(out: &mut String, d: &Derivation, indent: usize) {
    let pad = "  ".repeat(indent);
    let _ = writeln!(out, "{pad}{}", d.conclusion);
    let _ = writeln!(out, "{pad}  by {}", render_trace(&d.witness));
    for c in &d.children {
        render_derivation(out, c, indent + 1);
    }
}

fn render_proof(r: &ProofSearchResult) -> String {
    let mut out = format!(
        "sequent: {}\ndepth: {}\nstatus: {}\ncount: {}\n",
        r.sequent,
        r.depth,
        serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        r.count
    );
    if let Some(d) = &r.derivation {
        out.push_str("derivation:\n");
        render_derivation(&mut out, d, 1);
    }
    out
}

/// Rewrite ASCII connectives into their Unicode forms. Identifiers are
/// left alone apart from the unit keywords.
fn unicode(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '^' | '.')) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let quoted = start > 0 && chars[start - 1] == '\'';
            out.push_str(match word.as_str() {
                "bot" if !quoted => "⊥",
                "top" if !quoted => "⊤",
                w => w,
            });
            continue;
        }
        match (c, next) {
            ('|', Some('-')) => {
                out.push('⊢');
                i += 2;
            }
            ('-', Some('o')) => {
                out.push('⊸');
                i += 2;
            }
            ('|', _) => {
                out.push('⅋');
                i += 1;
            }
            ('*', _) => {
                out.push('⊗');
                i += 1;
            }
            ('+', _) => {
                out.push('⊕');
                i += 1;
            }
            ('!' | '?', Some('[')) => {
                let close = chars[i..].iter().position(|&x| x == ']').map(|p| p + i);
                match close {
                    Some(j) => {
                        out.push(c);
                        out.push('_');
                        out.extend(&chars[i + 2..j]);
                        i = j + 1;
                    }
                    None => {
                        out.push(c);
                        i += 1;
                    }
                }
            }
            _ => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unicode_rewrites_connectives_only() {
        assert_eq!(unicode("lin:(![u] 'bot | top -o q) |- a:bot"), "lin:(!_u 'bot ⅋ ⊤ ⊸ q) ⊢ a:⊥");
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["--help"]).code, EXIT_OK);
        assert_eq!(run(["frobnicate"]).code, EXIT_USAGE);
    }
}
