//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification or consistency check failed,
//! 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use rayon::prelude::*;
use serde_json::json;

use crate::diagram::{self, CheckedDiagram, HandleDiagram, HomologyProfile, PochetteDesignation};
use crate::gluing::{compose_h1, compose_h2, exponent_sums, natural_lift, synthesize_word, verify_word, LiftGenerator};
use crate::intlin::AbelianGroup;
use crate::slope::{Mod2Framing, SlopeFraction};
use crate::surgery::{self, Classification, Mode, SurgeryHypotheses};
use crate::template::{self, expr::Value, FamilyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pochette", version, about = "Pochette surgery calculus on 4-manifold handle data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of the closed 4-manifold presented by a diagram file.
    Homology {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Homology of a pochette surgery on the manifold of a diagram file.
    Surgery(SurgeryArgs),
    /// Gluing word for a slope and mod 2 framing.
    Word {
        #[arg(long, allow_hyphen_values = true)]
        slope: SlopeFraction,
        #[arg(long, default_value = "0")]
        eps: Mod2Framing,
        /// Also print the natural lift of the reglued meridian.
        #[arg(long)]
        lift: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check every gluing and surgery invariant for all coprime |p|, |q| <= N.
    Verify {
        #[arg(long, default_value_t = 30)]
        range: u32,
        #[arg(long)]
        json: bool,
    },
    /// Instantiate a diagram family (`fig1`, `fig2`, or a template file).
    Family(FamilyArgs),
}

#[derive(Debug, Args)]
pub struct SurgeryArgs {
    pub path: PathBuf,
    /// Dotted circle and 0-framed 2-handle of the pochette, as `c,u`.
    #[arg(long)]
    pub pochette: String,
    #[arg(long, allow_hyphen_values = true)]
    pub slope: SlopeFraction,
    #[arg(long, default_value = "0")]
    pub eps: Mod2Framing,
    #[arg(long, value_enum, default_value_t = ModeArg::Algebraic)]
    pub mode: ModeArg,
    /// Withdraw the assertion that t2 vanishes.
    #[arg(long)]
    pub no_t2_zero: bool,
    /// Withdraw the assertion that the longitude is null-homologous in the exterior.
    #[arg(long)]
    pub no_l_null: bool,
    /// Withdraw the assertion on the image of H2 of the boundary.
    #[arg(long)]
    pub no_h2_image: bool,
    /// Declare whether the result is simply connected.
    #[arg(long)]
    pub simply_connected: Option<bool>,
    /// Write the JSON certificate here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Algebraic,
    Diagram,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    pub template: String,
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long)]
    pub s: Option<i64>,
    #[arg(long)]
    pub t: Option<i64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_tuple)]
    pub m: Option<Tuple>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_tuple)]
    pub n: Option<Tuple>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_tuple)]
    pub signs: Option<Tuple>,
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<i64>,
    /// Give every 2-handle through the pochette's dotted circle a 0-framed meridian.
    #[arg(long)]
    pub meridians: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A comma-separated integer tuple such as `1,-1,0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tuple(pub Vec<i64>);

fn parse_tuple(s: &str) -> Result<Tuple, String> {
    if s.trim().is_empty() {
        return Ok(Tuple(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Tuple)
}

/// A failure carrying its exit code.
struct Fail(i32, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

type Outcome = Result<i32, Fail>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Homology { path, json } => homology(&path, json, out),
        Command::Surgery(args) => surgery_cmd(&args, out),
        Command::Word { slope, eps, lift, json } => word(slope, eps, lift, json, out),
        Command::Verify { range, json } => verify(range, json, out),
        Command::Family(args) => family(&args, out),
    }
}

fn io(e: std::io::Error) -> Fail {
    usage(e.to_string())
}

fn load_diagram(path: &Path) -> Result<CheckedDiagram, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let d = HandleDiagram::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    diagram::validate(d).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn homology(path: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let d = load_diagram(path)?;
    let profile = diagram::homology_closed(&d).map_err(|e| usage(e.to_string()))?;
    let chi = diagram::euler_characteristic(&d);
    if json {
        let v = json!({
            "name": d.name,
            "profile": profile,
            "profile_text": profile.to_string(),
            "euler_characteristic": chi,
            "homology_sphere": profile.is_homology_sphere(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("value serializes")).map_err(io)?;
    } else {
        if !d.name.is_empty() {
            writeln!(out, "diagram: {}", d.name).map_err(io)?;
        }
        for (n, g) in profile.h.iter().enumerate() {
            let g = g.as_ref().map_or_else(|| "?".to_string(), AbelianGroup::to_string);
            writeln!(out, "H{n} = {g}").map_err(io)?;
        }
        writeln!(out, "euler characteristic: {chi}").map_err(io)?;
        writeln!(out, "homology 4-sphere: {}", profile.is_homology_sphere()).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn surgery_cmd(a: &SurgeryArgs, out: &mut dyn Write) -> Outcome {
    let d = load_diagram(&a.path)?;
    let poch = PochetteDesignation::parse(&a.pochette)
        .ok_or_else(|| usage(format!("--pochette expects `<1-handle>,<2-handle>`, got `{}`", a.pochette)))?;
    let hyp = SurgeryHypotheses {
        t2_zero: !a.no_t2_zero,
        l_nullhomologous: !a.no_l_null,
        h2_image_constrained: !a.no_h2_image,
        simply_connected_result: a.simply_connected,
    };
    let mode = match a.mode {
        ModeArg::Algebraic => Mode::Algebraic,
        ModeArg::Diagram => Mode::Diagram,
    };
    let cert = surgery::certify_diagram(&d, &poch, a.slope, a.eps, &hyp, mode).map_err(|e| usage(e.to_string()))?;
    let text = cert.to_json();
    if let Some(path) = &a.out {
        std::fs::write(path, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if a.json {
        writeln!(out, "{text}").map_err(io)?;
    } else {
        writeln!(out, "slope {} eps {}: word {}", cert.slope, cert.eps, cert.word).map_err(io)?;
        writeln!(out, "base:   {}", cert.base_profile).map_err(io)?;
        writeln!(out, "result: {}", cert.profile_text).map_err(io)?;
        writeln!(out, "classification: {}", cert.classification).map_err(io)?;
        writeln!(out, "verdict: {}", cert.homeomorphism).map_err(io)?;
        if cert.gluck {
            writeln!(out, "this is a Gluck surgery").map_err(io)?;
        }
        if let Some(dc) = &cert.diagram {
            writeln!(out, "diagram: {} ({})", dc.profile_text, if dc.agrees { "agrees" } else { "DISAGREES" })
                .map_err(io)?;
        }
    }
    Ok(if cert.consistent() { EXIT_OK } else { EXIT_FAILURE })
}

fn word(slope: SlopeFraction, eps: Mod2Framing, lift: bool, json: bool, out: &mut dyn Write) -> Outcome {
    let w = synthesize_word(slope, eps).map_err(|e| usage(e.to_string()))?;
    let action = compose_h1(&w);
    let (a, b) = action.image_of_m();
    let l = lift.then(|| natural_lift(slope));
    if json {
        let h2 = compose_h2(&w);
        let mut v = json!({
            "slope": slope,
            "eps": eps,
            "word": w,
            "h1_action": action,
            "image_of_m": [a, b],
            "determinant": action.determinant(),
            "h2_magnitudes": h2.magnitudes(),
            "h2_sign_patterns": h2.sign_patterns(),
        });
        if let Some(l) = &l {
            v["lift"] = json!(l);
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("value serializes")).map_err(io)?;
    } else {
        writeln!(out, "{w}").map_err(io)?;
        writeln!(out, "H1 action {action}: m -> {a}m + {b}l").map_err(io)?;
        if let Some(l) = &l {
            writeln!(out, "lift: {l}").map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Failures for one slope representative and framing.
fn check_gluing(p: i64, q: i64, eps: Mod2Framing) -> Vec<String> {
    let mut bad = Vec::new();
    let slope = SlopeFraction::new(p, q).expect("coprime by construction");
    let tag = format!("{p}/{q} eps {eps}");
    if !verify_word(slope, eps) {
        bad.push(format!("{tag}: word does not realise the slope"));
    }
    if let Ok(w) = synthesize_word(slope, eps) {
        let want = [u128::from(p.unsigned_abs()), u128::from(q.unsigned_abs())];
        for (r, m) in compose_h2(&w).resolutions {
            if [m[0][0].unsigned_abs(), m[1][0].unsigned_abs()] != want {
                bad.push(format!("{tag}: [B] image magnitudes wrong under {r:?}"));
            }
        }
    }
    if eps == Mod2Framing::ZERO {
        let lift = natural_lift(slope);
        if exponent_sums(&lift) != (p, q) {
            bad.push(format!("{tag}: lift abelianizes wrongly"));
        }
        if p != 0 && q != 0 && lift.letter_count(LiftGenerator::M) != p.unsigned_abs() {
            bad.push(format!("{tag}: lift has the wrong number of m letters"));
        }
    }
    bad
}

fn check_surgery(p: i64, q: i64) -> Vec<String> {
    let mut bad = Vec::new();
    let tag = format!("{p}/{q}");
    let s4 = HomologyProfile::homology_sphere();
    let hyp = SurgeryHypotheses::default();
    let slope = SlopeFraction::new(p, q).expect("coprime by construction");
    let run = |s, e| surgery::surgery_homology(&s4, s, e, &hyp);
    let (Ok(r0), Ok(r1), Ok(rn)) = (
        run(slope, Mod2Framing::ZERO),
        run(slope, Mod2Framing::ONE),
        run(slope.negated(), Mod2Framing::ZERO),
    ) else {
        return vec![format!("{tag}: surgery failed")];
    };
    if r0 != r1 {
        bad.push(format!("{tag}: result depends on eps"));
    }
    if r0 != rn {
        bad.push(format!("{tag}: result depends on the slope representative"));
    }
    let n = p.unsigned_abs();
    let z = AbelianGroup::free(1);
    let h1 = AbelianGroup::cyclic(&n.into());
    let p0 = &r0.profile;
    if p0.group(0) != Some(&z) || p0.group(4) != Some(&z) || p0.group(1) != Some(&h1) {
        bad.push(format!("{tag}: H0, H1 or H4 wrong: {p0}"));
    }
    let divisors: Vec<u64> = r0.mv_elementary_divisors.iter().filter_map(|d| d.try_into().ok()).collect();
    let want = if n == 0 { vec![1] } else { vec![1, n] };
    if divisors != want || r0.mv_free_rank != usize::from(n == 0) {
        bad.push(format!("{tag}: MV elementary divisors {divisors:?}"));
    }
    if n == 1 && (r0.classification != Classification::HomologySphere || !p0.is_homology_sphere()) {
        bad.push(format!("{tag}: expected a homology sphere"));
    }
    if n != 1 && r0.classification != Classification::TorsionH1(n) {
        bad.push(format!("{tag}: classification {:?}", r0.classification));
    }
    bad
}

/// Every coprime pair with `|p|, |q| <= n`, both signs of each.
pub fn coprime_pairs(n: u32) -> Vec<(i64, i64)> {
    let n = i64::from(n);
    (-n..=n)
        .flat_map(|p| (-n..=n).map(move |q| (p, q)))
        .filter(|&(p, q)| p.gcd(&q) == 1)
        .collect()
}

fn verify(range: u32, json: bool, out: &mut dyn Write) -> Outcome {
    let pairs = coprime_pairs(range);
    let mut failures: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|&(p, q)| {
            let mut f = check_gluing(p, q, Mod2Framing::ZERO);
            f.extend(check_gluing(p, q, Mod2Framing::ONE));
            f.extend(check_surgery(p, q));
            f
        })
        .collect();
    failures.sort();
    let cases = pairs.len() * 2;
    if json {
        let v = json!({ "range": range, "cases": cases, "failures": failures });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("value serializes")).map_err(io)?;
    } else {
        for f in &failures {
            writeln!(out, "FAIL {f}").map_err(io)?;
        }
        writeln!(out, "verified {cases} slope/framing cases with |p|, |q| <= {range}: {} failures", failures.len())
            .map_err(io)?;
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

fn family(a: &FamilyArgs, out: &mut dyn Write) -> Outcome {
    let t = if template::BUILTIN.contains(&a.template.as_str()) {
        template::builtin(&a.template)
    } else {
        template::load(Path::new(&a.template))
    }
    .map_err(|e| usage(e.to_string()))?;
    let mut params = FamilyParams::new();
    for (name, v) in [("k", a.k), ("s", a.s), ("t", a.t), ("sign", a.sign)] {
        if let Some(v) = v {
            params.insert(name.to_string(), Value::Int(v));
        }
    }
    for (name, v) in [("m", &a.m), ("n", &a.n), ("signs", &a.signs)] {
        if let Some(v) = v {
            params.insert(name.to_string(), Value::Tuple(v.0.clone()));
        }
    }
    let inst = template::instantiate(&t, &params, a.meridians).map_err(|e| usage(e.to_string()))?;
    let text = serde_json::to_string_pretty(&*inst.diagram).expect("diagram serializes");
    match &a.out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            writeln!(
                out,
                "wrote {} to {} (pochette {},{})",
                inst.diagram.name,
                path.display(),
                inst.pochette.one_handle,
                inst.pochette.two_handle
            )
            .map_err(io)?;
        }
        None => writeln!(out, "{text}").map_err(io)?,
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("pochette").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn word_command() {
        let (code, out, _) = run_str(&["word", "--slope", "3/2", "--eps", "0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("E2.E1^2\n"), "{out}");
        assert!(out.contains("m -> 3m + 2l"));
        let (code, out, _) = run_str(&["word", "--slope", "-3/2", "--eps", "1", "--lift"]);
        assert_eq!(code, 0);
        assert!(out.contains("m -> -3m + 2l"), "{out}");
        assert!(out.contains("lift: "));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["word", "--slope", "4/2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["word", "--slope", "1/2", "--eps", "2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["homology", "/nonexistent/x.json"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn small_verify() {
        let (code, out, _) = run_str(&["verify", "--range", "6"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains(": 0 failures"));
    }

    #[test]
    fn tuples() {
        assert_eq!(parse_tuple("1,-1, 2"), Ok(Tuple(vec![1, -1, 2])));
        assert_eq!(parse_tuple(""), Ok(Tuple(vec![])));
        assert!(parse_tuple("1,x").is_err());
    }

    #[test]
    fn pairs() {
        let ps = coprime_pairs(1);
        assert_eq!(ps.len(), 8);
        assert!(ps.contains(&(0, 1)) && ps.contains(&(-1, 0)) && !ps.contains(&(0, 0)));
    }
}
