//! `loopconf`: command-line front end for the loop W(a,b) conformal algebra
//! checkers and solvers. Every subcommand writes one JSON report.
//!
//! Exit codes: 0 on pass, 1 on an axiom failure or a mismatch with the
//! expected classification, 2 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use loopconf_core::central_ext::{check_two_cocycle, family_to_cocycle, solve_central, CocycleFamily};
use loopconf_core::conformal_core::{check_graded, check_jacobi, check_skew, TableAlgebra, TableFile};
use loopconf_core::conformal_modules::{
    check_module, search_degree_one_submodules, solve_rank1, standard_action, ModuleParams,
};
use loopconf_core::derivations::{d_family, is_derivation, is_inner_on, solve_derivations, SeqA};
use loopconf_core::exactalg::{parse_rat, serde_rat};
use loopconf_core::formal_dist::{
    check_fourier_consistency, check_mode_algebra, sweep_mode_commutation, verify_closure, LoopParams,
    DEFAULT_SLACK,
};
use loopconf_core::module_ext::{
    check_ext_cm, check_ext_mc, solve_ext_cm, solve_ext_mc, ExtCocycleCm, ExtCocycleMc, ExtParams,
};
use loopconf_core::{AlgebraSpec, AxiomReport, IndexRange, Rat};

#[derive(Parser)]
#[command(name = "loopconf", version, about = "Exact checks and solvers for the loop W(a,b) Lie conformal algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Skew symmetry, Jacobi identity and grading of the λ-bracket.
    VerifyAlgebra(VerifyAlgebraArgs),
    /// Closure, λ-bracket and mode commutators of the formal distributions.
    VerifyDistribution(VerifyDistributionArgs),
    /// Conformal derivations modulo inner ones.
    Derivations(DerivationsArgs),
    /// Rank-one conformal modules.
    Rank1(Rank1Args),
    /// 2-cocycles with values in a one-dimensional center.
    Central(CentralArgs),
    /// Extensions between ℂ_β and a rank-one module.
    Ext(ExtArgs),
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Args, Serialize)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyAlgebraArgs {
    #[arg(long, value_parser = rat_arg, default_value = "0", allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    b: Rat,
    #[arg(long, default_value_t = 4)]
    window: i64,
    /// Bracket table (JSON) to check instead of the loop algebra.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Serialize)]
struct VerifyDistributionArgs {
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    a: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    b: Rat,
    /// Conformal weight of the I-distributions.
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    x: Rat,
    /// Modes α with |α| <= modes are sampled.
    #[arg(long, default_value_t = 6)]
    modes: i64,
    /// Loop indices |i| <= window.
    #[arg(long, default_value_t = 3)]
    window: i64,
    /// Left Fourier labels m for the commutator formula.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    m: Vec<i64>,
    /// Loop indices |i| <= this for the commutator sweep and the mode
    /// algebra check.
    #[arg(long, default_value_t = 1)]
    commutator_window: i64,
    /// Modes |α| <= this for the skew and Jacobi check of the mode algebra.
    #[arg(long, default_value_t = 2)]
    algebra_modes: i64,
    /// Which checks to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closure,fourier,commutation,algebra")]
    checks: Vec<DistCheck>,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DistCheck {
    Closure,
    Fourier,
    Commutation,
    Algebra,
}

#[derive(Args, Serialize)]
struct DerivationsArgs {
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    b: Rat,
    /// Derivation degrees to solve.
    #[arg(long, value_delimiter = ',', default_value = "-1,0,1", allow_hyphen_values = true)]
    degree: Vec<i64>,
    #[arg(long, default_value_t = 4)]
    window: i64,
    #[arg(long, default_value_t = 2)]
    interior: i64,
    #[arg(long, default_value_t = 3)]
    pdeg: u32,
    #[arg(long, default_value_t = 3)]
    ldeg: u32,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Serialize)]
struct Rank1Args {
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    b: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    delta: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    alpha: Rat,
    #[arg(long, value_parser = rat_arg, default_value = "1", allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    c: Rat,
    #[arg(long, value_parser = rat_arg, default_value = "0", allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    d: Rat,
    #[arg(long, default_value_t = 3)]
    window: i64,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Serialize)]
struct CentralArgs {
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    b: Rat,
    #[arg(long, default_value_t = 3)]
    window: i64,
    /// Interior index sums |i+j| <= interior.
    #[arg(long, default_value_t = 1)]
    interior: i64,
    #[arg(long, default_value_t = 5)]
    ldeg: u32,
    /// Cocycle family (JSON) to verify on the window.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Dir {
    /// ℂ_β is the submodule.
    Mc,
    /// The rank-one module is the submodule.
    Cm,
}

#[derive(Args, Serialize)]
struct ExtArgs {
    #[arg(long, value_enum)]
    dir: Dir,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    b: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    delta: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    alpha: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    beta: Rat,
    #[arg(long, value_parser = rat_arg, default_value = "1", allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    c: Rat,
    #[arg(long, value_parser = rat_arg, default_value = "0", allow_hyphen_values = true)]
    #[serde(with = "serde_rat")]
    d: Rat,
    #[arg(long, default_value_t = 4)]
    window: i64,
    #[arg(long, default_value_t = 2)]
    interior: i64,
    #[arg(long, default_value_t = 3)]
    pdeg: u32,
    #[arg(long, default_value_t = 4)]
    ldeg: u32,
    /// JSON list of cocycles to check instead of solving.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Verdict {
    Pass,
    Fail,
    Discrepancy,
}

impl Verdict {
    fn from_pass(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn from_match(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Discrepancy
        }
    }
}

#[derive(Serialize)]
struct Report<'a, C: Serialize, R: Serialize> {
    command: &'static str,
    config: &'a C,
    status: Verdict,
    result: R,
}

fn check_window(window: i64, interior: i64) -> Result<()> {
    if window < 0 || interior < 0 {
        bail!("window and interior must be non-negative");
    }
    if interior > window {
        bail!("interior {interior} exceeds window {window}");
    }
    Ok(())
}

fn emit<C: Serialize, R: Serialize>(
    command: &'static str,
    config: &C,
    out: &Output,
    status: Verdict,
    result: R,
) -> Result<Verdict> {
    let rep = Report {
        command,
        config,
        status,
        result,
    };
    let text = serde_json::to_string_pretty(&rep)? + "\n";
    match &out.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(status)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
}

#[derive(Serialize)]
struct AlgebraResult {
    skew: AxiomReport,
    jacobi: AxiomReport,
    graded: AxiomReport,
}

fn verify_algebra(a: &VerifyAlgebraArgs) -> Result<Verdict> {
    let alg = match &a.input {
        Some(p) => {
            let f: TableFile = read_json(p)?;
            AlgebraSpec::Table(TableAlgebra::from_file(&f)?)
        }
        None => AlgebraSpec::clw(a.b.clone()),
    };
    let w = IndexRange::symmetric(a.window);
    let r = AlgebraResult {
        skew: check_skew(&alg, &w),
        jacobi: check_jacobi(&alg, &w),
        graded: check_graded(&alg, &w),
    };
    let ok = r.skew.passed() && r.jacobi.passed() && r.graded.passed();
    emit("verify-algebra", a, &a.output, Verdict::from_pass(ok), r)
}

#[derive(Serialize)]
struct DistributionResult {
    #[serde(with = "serde_rat")]
    closing_weight: Rat,
    closure: Option<AxiomReport>,
    fourier: Option<AxiomReport>,
    mode_commutation: Option<AxiomReport>,
    mode_algebra: Option<AxiomReport>,
}

fn verify_distribution(a: &VerifyDistributionArgs) -> Result<Verdict> {
    check_window(a.window.max(a.commutator_window), a.commutator_window)?;
    check_window(a.modes.max(a.algebra_modes), a.algebra_modes)?;
    if a.m.iter().any(|m| *m < 0) {
        bail!("commutator labels must be non-negative");
    }
    let p = LoopParams::new(a.a.clone(), a.b.clone());
    let loops = IndexRange::symmetric(a.window);
    let modes = IndexRange::symmetric(a.modes);
    let small_loops = IndexRange::symmetric(a.commutator_window);
    let on = |c: DistCheck| a.checks.contains(&c);
    let r = DistributionResult {
        closing_weight: p.closing_weight(),
        closure: on(DistCheck::Closure).then(|| verify_closure(&p, &a.x, &loops, &modes)),
        fourier: on(DistCheck::Fourier).then(|| check_fourier_consistency(&p, &a.x, &loops, &modes)),
        mode_commutation: on(DistCheck::Commutation)
            .then(|| sweep_mode_commutation(&p, &a.x, &small_loops, &a.m, &modes, DEFAULT_SLACK)),
        mode_algebra: on(DistCheck::Algebra)
            .then(|| check_mode_algebra(&p, &IndexRange::symmetric(a.algebra_modes), &small_loops)),
    };
    let ok = [&r.closure, &r.fourier, &r.mode_commutation, &r.mode_algebra]
        .iter()
        .all(|c| c.as_ref().is_none_or(|c| c.passed()));
    emit("verify-distribution", a, &a.output, Verdict::from_pass(ok), r)
}

#[derive(Serialize)]
struct DFamilyCheck {
    /// `L_i ↦ I_{i+degree}`, `I_i ↦ 0`.
    degree: i64,
    is_derivation: bool,
    is_inner: bool,
}

#[derive(Serialize)]
struct DerivationEntry {
    expected_quotient_dim: usize,
    report: loopconf_core::derivations::DerivationReport,
    d_family: DFamilyCheck,
}

fn derivations(a: &DerivationsArgs) -> Result<Verdict> {
    check_window(a.window, a.interior)?;
    let alg = AlgebraSpec::clw(a.b.clone());
    let w = IndexRange::symmetric(a.window);
    let expected = usize::from(a.b == Rat::from_integer(0.into()));
    let mut entries = Vec::new();
    let mut ok = true;
    for &deg in &a.degree {
        let report = solve_derivations(&a.b, deg, a.window, a.interior, a.pdeg, a.ldeg);
        let seq: SeqA = [(deg, Rat::from_integer(1.into()))].into_iter().collect();
        let m = d_family(&seq, &w);
        let d = DFamilyCheck {
            degree: deg,
            is_derivation: is_derivation(&alg, &m, &w).passed(),
            is_inner: is_inner_on(&a.b, &m, deg, a.window, a.interior, a.pdeg, a.ldeg),
        };
        ok &= report.quotient_dim == expected && report.inner_contained;
        if expected == 1 {
            ok &= d.is_derivation && !d.is_inner;
        }
        entries.push(DerivationEntry {
            expected_quotient_dim: expected,
            report,
            d_family: d,
        });
    }
    emit("derivations", a, &a.output, Verdict::from_match(ok), entries)
}

#[derive(Serialize)]
struct Rank1Result {
    standard_action: AxiomReport,
    expected_g_dimension: usize,
    solutions: Vec<loopconf_core::conformal_modules::Rank1Solution>,
    submodules: loopconf_core::conformal_modules::SubmoduleSearch,
}

fn rank1(a: &Rank1Args) -> Result<Verdict> {
    if a.window < 1 {
        bail!("window must be at least 1");
    }
    let w = IndexRange::symmetric(a.window);
    let prm = ModuleParams::new(a.delta.clone(), a.alpha.clone(), a.c.clone(), a.d.clone());
    let alg = AlgebraSpec::clw(a.b.clone());
    let standard = check_module(&alg, &standard_action(&a.b, &prm, &w).to_module(), &w);
    let solutions = solve_rank1(&a.b, &w, &[(a.delta.clone(), a.alpha.clone())], std::slice::from_ref(&a.c));
    let expected = usize::from(a.b == Rat::from_integer(0.into()));
    let mut ok = standard.passed();
    for s in &solutions {
        ok &= s.quadratic_ok && s.module_ok && (!s.geometric || s.g_dimension == expected);
    }
    let r = Rank1Result {
        standard_action: standard,
        expected_g_dimension: expected,
        solutions,
        submodules: search_degree_one_submodules(&a.b, &prm, &w),
    };
    emit("rank1", a, &a.output, Verdict::from_pass(ok), r)
}

#[derive(Serialize)]
struct FamilyCheck {
    family: CocycleFamily,
    report: AxiomReport,
}

#[derive(Serialize)]
struct CentralResult {
    pattern_matches: bool,
    solution: loopconf_core::central_ext::CentralReport,
    family_check: Option<FamilyCheck>,
}

fn central(a: &CentralArgs) -> Result<Verdict> {
    check_window(a.window, a.interior)?;
    let sums = IndexRange::symmetric(a.interior);
    let solution = solve_central(&a.b, a.window, &sums, a.ldeg);
    let family_check = match &a.input {
        Some(p) => {
            let family: CocycleFamily = read_json(p)?;
            let w = IndexRange::symmetric(a.window);
            let report = check_two_cocycle(&a.b, &family_to_cocycle(&a.b, &family, &w), &w);
            Some(FamilyCheck { family, report })
        }
        None => None,
    };
    let pattern_matches = solution.pattern_matches();
    let ok = pattern_matches
        && solution.depends_only_on_sum
        && solution.families_fit
        && family_check.as_ref().is_none_or(|f| f.report.passed());
    let r = CentralResult {
        pattern_matches,
        solution,
        family_check,
    };
    emit("central", a, &a.output, Verdict::from_match(ok), r)
}

#[derive(Serialize)]
struct CocycleVerdict {
    index: usize,
    direct: bool,
    generic: bool,
    agree: bool,
}

fn ext(a: &ExtArgs) -> Result<Verdict> {
    check_window(a.window, a.interior)?;
    let prm = ExtParams::new(
        a.b.clone(),
        ModuleParams::new(a.delta.clone(), a.alpha.clone(), a.c.clone(), a.d.clone()),
        a.beta.clone(),
    );
    let w = IndexRange::symmetric(a.window);
    if let Some(p) = &a.input {
        let checks: Vec<_> = match a.dir {
            Dir::Mc => read_json::<Vec<ExtCocycleMc>>(p)?
                .iter()
                .map(|cx| check_ext_mc(&prm, cx, &w))
                .collect(),
            Dir::Cm => read_json::<Vec<ExtCocycleCm>>(p)?
                .iter()
                .map(|cx| check_ext_cm(&prm, cx, &w))
                .collect(),
        };
        let verdicts: Vec<CocycleVerdict> = checks
            .iter()
            .enumerate()
            .map(|(index, c)| CocycleVerdict {
                index,
                direct: c.direct.passed(),
                generic: c.generic.passed(),
                agree: c.agree(),
            })
            .collect();
        let ok = checks.iter().all(|c| c.passed());
        return emit("ext", a, &a.output, Verdict::from_pass(ok), verdicts);
    }
    let r = match a.dir {
        Dir::Mc => solve_ext_mc(&prm, a.window, a.interior, a.ldeg),
        Dir::Cm => solve_ext_cm(&prm, a.window, a.interior, a.pdeg, a.ldeg),
    };
    let status = Verdict::from_match(!r.has_discrepancy());
    emit("ext", a, &a.output, status, r)
}

fn run(cli: &Cli) -> Result<Verdict> {
    match &cli.command {
        Command::VerifyAlgebra(a) => verify_algebra(a),
        Command::VerifyDistribution(a) => verify_distribution(a),
        Command::Derivations(a) => derivations(a),
        Command::Rank1(a) => rank1(a),
        Command::Central(a) => central(a),
        Command::Ext(a) => ext(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
