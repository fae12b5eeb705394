use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use padchar::apartment::ApartmentPoint;
use padchar::arith::{Qi, Rational, Sign};
use padchar::charform::{
    class_context, eval_char, eval_stable_sum, eval_twisted_char, stability_check, term_signs, untwisted_discrepancies,
};
use padchar::disc::{check_part_disc, disc_val_gamma, disc_val_tail, disc_val_xstar};
use padchar::fuzz;
use padchar::mp::{index_product_const, index_product_cor, verify_gxf_card, TorusLattice};
use padchar::rootgal::systems::System;
use padchar::rootgal::IntMatrix;
use padchar::scenario::{Built, Scenario};
use padchar::signs::{assemble, Level, SignReport};
use padchar::Error;
use rand::seq::SliceRandom;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "padchar", version, about = "Signs, discriminants and character sums for positive-depth supercuspidals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    scenario: PathBuf,
    /// Also write the result as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every sign of the scenario, per level and per layer.
    Signs(Common),
    /// Discriminant valuations and the factorization check.
    Disc(Common),
    /// Random checks of the cardinality lemma and the index products.
    MpVerify {
        #[arg(long, default_value = "A1")]
        system: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "PADCHAR_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// The character sum with its per-class terms.
    Char {
        #[command(flatten)]
        common: Common,
        /// Drop ε^noram (toral scenarios only).
        #[arg(long, conflicts_with = "stable")]
        twisted: bool,
        /// The stable sum over H-stable classes.
        #[arg(long)]
        stable: bool,
    },
    /// Compares stable sums at γ and at a stable conjugate, and reports the
    /// untwisted discrepancies.
    Stability {
        #[command(flatten)]
        common: Common,
        /// identity | negation | reflection:<k> | a JSON integer matrix
        #[arg(long, default_value = "identity")]
        twist: String,
        /// Replacement point for the conjugate, as NAME=c1,c2,...
        #[arg(long)]
        twist_point: Vec<String>,
        /// Additional random Weyl twists.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, env = "PADCHAR_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Lists every problem with the scenario.
    Validate(Common),
}

/// Exit status 1: bad input; 2: a computed identity failed.
enum Failure {
    Invalid(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Mismatch(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, outcome) = match cli.cmd {
        Cmd::Signs(c) => (c.report.clone(), cmd_signs(&c.scenario)),
        Cmd::Disc(c) => (c.report.clone(), cmd_disc(&c.scenario)),
        Cmd::MpVerify { system, trials, seed, report } => (report, cmd_mp_verify(&system, trials, seed)),
        Cmd::Char { common, twisted, stable } => (common.report.clone(), cmd_char(&common.scenario, twisted, stable)),
        Cmd::Stability { common, twist, twist_point, trials, seed } => {
            (common.report.clone(), cmd_stability(&common.scenario, &twist, &twist_point, trials, seed))
        }
        Cmd::Validate(c) => (c.report.clone(), cmd_validate(&c.scenario)),
    };
    let (value, code) = match outcome {
        Ok(v) => {
            let failed = v.get("ok").and_then(Value::as_bool) == Some(false);
            (v, if failed { 2 } else { 0 })
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            (json!({"ok": false, "error": msg}), 1)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            (json!({"ok": false, "mismatch": msg}), 2)
        }
    };
    if let Some(path) = report {
        let text = serde_json::to_string_pretty(&value).expect("report serializes");
        if let Err(e) = std::fs::write(&path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}

fn load(path: &Path) -> Result<(Scenario, Built), Failure> {
    let s = Scenario::load(path)?;
    let problems = s.problems();
    if !problems.is_empty() {
        return Err(Failure::Invalid(problems.join("; ")));
    }
    let b = s.build()?;
    Ok((s, b))
}

fn print_signs(rep: &SignReport) {
    println!("{:<8} {:>8} {:>9} {:>10} {:>9}", "level", "tilde_e", "eps_unram", "eps_nosymm", "eps_noram");
    for (l, s) in &rep.levels {
        let name = match l {
            Level::G => "G",
            Level::GPrime => "G'",
            Level::H => "H",
            Level::HPrime => "H'",
        };
        let [a, b, c, d] = [s.tilde_e, s.eps_unram, s.eps_nosymm, s.eps_noram].map(|x| x.to_string());
        println!("{name:<8} {a:>8} {b:>9} {c:>10} {d:>9}");
    }
    println!();
    println!("{:<8} {:>8} {:>9} {:>10} {:>9} {:>4} {:>7}", "layer", "tilde_e", "eps_unram", "eps_nosymm", "eps_noram", "e", "eps_ram");
    for (name, s) in [("G/G'", &rep.g_over_gprime), ("H/H'", &rep.h_over_hprime), ("pi'", &rep.pi)] {
        let [a, b, c, d, e] = [s.tilde_e, s.eps_unram, s.eps_nosymm, s.eps_noram, s.e].map(|x| x.to_string());
        println!("{name:<8} {a:>8} {b:>9} {c:>10} {d:>9} {e:>4} {:>7}", s.eps_ram.to_string());
    }
    println!();
    println!("composed: {}", rep.composed);
    let tc = &rep.twisting_character;
    match (&tc.class, tc.trivial_class) {
        (Some(c), Some(trivial)) => {
            println!("twisting character: roots {:?}, class {c:?} in X*/2X* ({})", tc.roots, if trivial { "trivial" } else { "nontrivial" })
        }
        _ => println!("twisting character: roots {:?}", tc.roots),
    }
    for c in &rep.noram_contributions {
        println!("  orbit of {:?} ({:?}): {}", c.root, c.kind, c.sign);
    }
    if let Some(id) = &rep.stable_identity {
        println!("stable-sign identity: {} vs {} ({})", id.lhs, id.rhs, if id.holds { "holds" } else { "FAILS" });
    }
}

fn cmd_signs(path: &Path) -> Outcome {
    let (s, b) = load(path)?;
    let rep = assemble(&b.ctx)?;
    println!("scenario {}", s.name);
    print_signs(&rep);
    let ok = rep.stable_identity.as_ref().is_none_or(|i| i.holds);
    Ok(json!({"ok": ok, "scenario": s.name, "signs": rep}))
}

fn cmd_disc(path: &Path) -> Outcome {
    let (s, b) = load(path)?;
    let rg = &b.ctx.rg;
    let ap = &b.ctx.approx;
    let full = disc_val_gamma(rg, &ap.gamma);
    let head = disc_val_gamma(rg, &ap.head());
    let tail = disc_val_tail(rg, ap);
    let xstar = disc_val_xstar(rg, &b.ctx.covector);
    let ok = check_part_disc(rg, ap);
    println!("ord D_G(gamma)       = {full}");
    println!("ord D_G(gamma_<r)    = {head}");
    println!("ord D_H(gamma_>=r)   = {tail}");
    println!("ord D_G(X*)          = {xstar}");
    println!("factorization: {}", if ok { "holds" } else { "FAILS" });
    Ok(json!({
        "ok": ok, "scenario": s.name,
        "gamma": full, "head": head, "tail": tail, "xstar": xstar,
    }))
}

fn cmd_mp_verify(system: &str, trials: usize, seed: u64) -> Outcome {
    let sys: System = system.parse()?;
    let mut rng = fuzz::rng(seed);
    let frobs = fuzz::frobenius_choices(sys);
    let residue = padchar::rootgal::ResidueField { p: 5, f: 1 };
    let (mut gxf_pass, mut index_pass) = (0usize, 0usize);
    let mut failures = vec![];
    for k in 0..trials {
        let frob = frobs.choose(&mut rng).expect("nonempty").clone();
        let rg = if k % 4 == 3 { fuzz::ramified_model(sys, residue, frob.clone()) } else { fuzz::unramified_model(sys, residue, frob.clone()) }?;
        let pt = fuzz::random_point(&rg, "x", &mut rng)?;
        let (f, g) = fuzz::random_depth_pair(&rg, &mut rng);
        match verify_gxf_card(&rg, &pt, &f, &g, &TorusLattice::default_for(&rg)) {
            Ok(true) => gxf_pass += 1,
            Ok(false) => failures.push(format!("trial {k}: cardinality lemma")),
            Err(e) => failures.push(format!("trial {k}: {e}")),
        }
        let mut ctx = fuzz::random_unramified_context(sys, residue, &mut rng)?;
        ctx.point = fuzz::random_point(&ctx.rg, "x", &mut rng)?;
        let tl = TorusLattice::default_for(&ctx.rg);
        let cor = index_product_const(&ctx, &tl).and_then(|_| index_product_cor(&ctx, &tl));
        match cor {
            Ok(c) if c.lhs.same_cardinality(&c.rhs)? => index_pass += 1,
            Ok(_) => failures.push(format!("trial {k}: index-product ratio")),
            Err(e) => failures.push(format!("trial {k}: {e}")),
        }
    }
    println!("{sys}: cardinality lemma {gxf_pass}/{trials} pass, index products {index_pass}/{trials} pass (seed {seed})");
    for f in &failures {
        eprintln!("{f}");
    }
    Ok(json!({
        "ok": failures.is_empty(), "system": sys.to_string(), "trials": trials, "seed": seed,
        "gxf_card_pass": gxf_pass, "index_product_pass": index_pass, "failures": failures,
    }))
}

fn cmd_char(path: &Path, twisted: bool, stable: bool) -> Outcome {
    let (s, b) = load(path)?;
    let input = b.input();
    let mut missing = vec![];
    let mut terms = vec![];
    if stable {
        for key in b.classes.h_stable_classes() {
            let Some(rep) = b.classes.classes.iter().find(|c| c.h_stable_class == key && c.contains_head) else { continue };
            if b.chi.get(&rep.id).is_err() {
                missing.push(format!("character value for class {}", rep.id));
            }
            if b.stable.get(key, &b.element).is_err() {
                missing.push(format!("stable orbital value for {key}"));
            }
            terms.push(json!({"h_stable_class": key, "representative": rep.id}));
        }
    } else {
        for c in b.classes.classes.iter().filter(|c| c.rational && c.contains_head) {
            if b.chi.get(&c.id).is_err() {
                missing.push(format!("character value for class {}", c.id));
            }
            if b.orbital.get(&c.id, &b.element).is_err() {
                missing.push(format!("orbital value for class {}", c.id));
            }
            let t = term_signs(&class_context(&input, c)?)?;
            terms.push(json!({"class": c.id, "signs": t}));
        }
    }
    if !missing.is_empty() {
        return Err(Failure::Invalid(format!("missing oracle entries: {}", missing.join(", "))));
    }
    let value: Qi = if stable {
        eval_stable_sum(&input, &b.chi, &b.stable)?
    } else if twisted {
        eval_twisted_char(&input, &b.chi, &b.orbital)?
    } else {
        eval_char(&input, &b.chi, &b.orbital)?
    };
    for t in &terms {
        println!("{t}");
    }
    println!("value: {value}");
    let mode = if stable { "stable" } else if twisted { "twisted" } else { "plain" };
    Ok(json!({"ok": true, "scenario": s.name, "mode": mode, "value": value, "terms": terms}))
}

fn parse_twist(spec: &str, rank: usize, datum: &padchar::rootgal::RootDatum) -> Result<IntMatrix, Failure> {
    let bad = |m: String| Failure::Invalid(format!("twist {spec:?}: {m}"));
    match spec {
        "identity" => Ok(IntMatrix::identity(rank)),
        "negation" => Ok(IntMatrix::scalar(rank, -1)),
        s if s.starts_with("reflection:") => {
            let k: usize = s["reflection:".len()..].parse().map_err(|_| bad("expected a root index".into()))?;
            if k >= datum.len() {
                return Err(bad(format!("only {} roots", datum.len())));
            }
            Ok(datum.reflection(k))
        }
        s => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
            IntMatrix::from_rows(&rows).map_err(|e| bad(e.to_string()))
        }
    }
}

fn cmd_stability(path: &Path, twist: &str, twist_points: &[String], trials: usize, seed: u64) -> Outcome {
    let (s, b) = load(path)?;
    let rg = &b.ctx.rg;
    let w = parse_twist(twist, rg.rank(), rg.datum())?;
    let mut points = b.points.clone();
    for tp in twist_points {
        let (name, coords) = tp.split_once('=').ok_or_else(|| Failure::Invalid(format!("bad --twist-point {tp:?}")))?;
        let coords: Vec<Rational> =
            coords.split(',').map(|c| c.trim().parse()).collect::<Result<_, _>>().map_err(|e: Error| Failure::Invalid(e.to_string()))?;
        points.insert(name.to_string(), ApartmentPoint::at_coordinates(name, coords).resolve(rg)?);
    }
    let input = b.input();
    let out = stability_check(&input, &b.chi, &b.stable, &w, Some(&points), None)?;
    println!("twist {twist}: {} vs {} ({})", out.at_gamma, out.at_conjugate, if out.holds { "equal" } else { "DIFFER" });
    let mut all_hold = out.holds;
    let mut random = vec![];
    if trials > 0 {
        let mut rng = fuzz::rng(seed);
        let weyl = rg.datum().weyl_group();
        let mut pass = 0;
        for _ in 0..trials {
            let w = weyl.choose(&mut rng).expect("nonempty");
            let o = stability_check(&input, &b.chi, &b.stable, w, None, None)?;
            if o.holds {
                pass += 1;
            } else {
                random.push(json!({"twist": w.rows(), "at_gamma": o.at_gamma, "at_conjugate": o.at_conjugate}));
            }
        }
        all_hold &= pass == trials;
        println!("random twists: {pass}/{trials} equal (seed {seed})");
    }
    let anti: Vec<Value> = untwisted_discrepancies(&input)?
        .into_iter()
        .map(|(a, c, sign)| {
            let verdict = if sign == Sign::Minus { "untwisted sum not stable" } else { "agree" };
            println!("untwisted {a} vs {c}: {sign} ({verdict})");
            json!({"classes": [a, c], "discrepancy": sign})
        })
        .collect();
    Ok(json!({
        "ok": all_hold, "scenario": s.name, "twist": twist,
        "at_gamma": out.at_gamma, "at_conjugate": out.at_conjugate, "holds": out.holds,
        "random_failures": random, "untwisted_discrepancies": anti,
    }))
}

fn cmd_validate(path: &Path) -> Outcome {
    let s = Scenario::load(path)?;
    let problems = s.problems();
    if problems.is_empty() {
        println!("{}: valid", s.name);
        Ok(json!({"ok": true, "scenario": s.name, "problems": []}))
    } else {
        for p in &problems {
            eprintln!("{p}");
        }
        Err(Failure::Invalid(format!("{} problem(s)", problems.len())))
    }
}
