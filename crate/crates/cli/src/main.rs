mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cjlab_core::choice::interdep::{
    self, check_interdependency, InterdepOptions, RowOutcome, EXHAUSTIVE_MAX,
};
use cjlab_core::choice::{check_property, Choice, ChoiceFunction, Property, Verdict};
use cjlab_core::cjmodel::axioms::{check_axioms_with, AxiomOptions, SweepMode};
use cjlab_core::cjmodel::{
    build_example_1_1, build_example_1_1_forced, check_frame, CJModel, FrameCondition, FrameWitness,
};
use cjlab_core::consequence::{
    check_logical_rule, correspondence_check, correspondence_sweep, ConsequenceRelation,
    FiniteLanguage, Rule,
};
use cjlab_core::formula::render;
use cjlab_core::modal::{
    agreement_check, minimal_models_formula, ratm_counterexample, translate_and_schema,
    translate_conditional, translate_ratm, BiModalModel,
};
use cjlab_core::par::Exec;
use cjlab_core::prefstruct::PrefStructure;
use cjlab_core::represent::{
    normalize_one_infinity, represent_ranked, verify_representation, VerifyFailure,
};
use cjlab_core::{json, parse, Set};

use report::{digest, Builder, Report};

#[derive(Parser)]
#[command(
    name = "cjlab",
    version,
    about = "Finite-model checks for dyadic deontic logic and ranked preference semantics"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled search.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest universe size for enumerations.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Comma-separated check ids to run.
    #[arg(long, global = true, value_delimiter = ',')]
    only: Vec<String>,
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

impl Global {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn wants(&self, id: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|o| o == id)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Frame conditions and axiom schemas of a model file.
    CheckCj {
        file: PathBuf,
        /// Assignments per schema when the model is too large to enumerate.
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// The four-world model that satisfies the axioms but not O(p/p).
    #[command(name = "example-1-1")]
    Example11 {
        /// Add M(p) to ob(M(p)) and close under 5-b.
        #[arg(long = "force-5d")]
        force_5d: bool,
    },
    /// Logical rules of the consequence relation induced by a choice function.
    Rules {
        #[command(flatten)]
        input: ChoiceInput,
    },
    /// Algebraic laws of a choice function.
    Props {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Implications between laws, checked over all small choice functions.
    Interdep {
        /// Row id; all rows when omitted.
        #[arg(long)]
        row: Option<String>,
        /// Functions sampled per size above the exhaustive bound.
        #[arg(long, default_value_t = 2_000)]
        samples: u64,
    },
    /// Agreement of rules and laws over the rows of the correspondence.
    Correspond {
        /// A single choice function; otherwise sweep the language.
        #[command(flatten)]
        input: OptionalChoiceInput,
        /// Sampled functions for a two-atom sweep.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Ranked structure for a choice function with (μ⊆), (μ∅), (μ=).
    Represent {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the structure against the function.
        #[arg(long)]
        verify: bool,
    },
    /// One copy or an ω chain per point, same μ.
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra copyless points added to the base set.
        #[arg(long, value_delimiter = ',')]
        extra: Vec<String>,
    },
    /// Bimodal formula for a conditional or schema.
    Translate {
        #[arg(value_enum)]
        kind: Translation,
        /// Argument formulas, in the order of the chosen translation.
        formulas: Vec<String>,
        /// Evaluate the translation at the entry world of this model.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Conditional agreement matrix of a bimodal model.
    Agree {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Args)]
struct ChoiceInput {
    /// Choice function on the subsets of the language's models.
    #[arg(long = "in")]
    input: PathBuf,
    /// Atom names; `p0, p1, ..` when omitted.
    #[arg(long, value_delimiter = ',')]
    atoms: Vec<String>,
}

#[derive(Args)]
struct OptionalChoiceInput {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Atom names, or a count for a sweep.
    #[arg(long, value_delimiter = ',')]
    atoms: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Translation {
    /// α ⇒ β
    Cond,
    /// The minimal α-worlds.
    Min,
    /// Rational monotony on φ, ψ, ψ′.
    Ratm,
    /// The AND schema on φ_m, φ, φ′.
    And,
}

/// A semantic failure exits 1, bad input exits 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Run<T> = std::result::Result<T, InputError>;

struct Inputs {
    args: Vec<String>,
    files: Vec<Vec<u8>>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Run<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let text = String::from_utf8(bytes.clone())
            .with_context(|| format!("{} is not UTF-8", path.display()))?;
        self.files.push(bytes);
        Ok(text)
    }

    fn digest(&self) -> String {
        digest(&self.args, self.files.iter().map(Vec::as_slice))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Inputs {
        args: std::env::args().skip(1).collect(),
        files: Vec::new(),
    };
    let start = Instant::now();
    let mut b = Builder::new();
    let name = command_name(&cli.command);
    if let Err(InputError(e)) = run(&cli, &mut inputs, &mut b) {
        eprintln!("cjlab: {e:#}");
        return ExitCode::from(2);
    }
    let report = b.finish(name, inputs.digest(), start.elapsed());
    if cli.global.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        print!("{}", report.to_text());
    }
    exit_code(&report)
}

fn exit_code(r: &Report) -> ExitCode {
    if r.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckCj { .. } => "check-cj",
        Command::Example11 { .. } => "example-1-1",
        Command::Rules { .. } => "rules",
        Command::Props { .. } => "props",
        Command::Interdep { .. } => "interdep",
        Command::Correspond { .. } => "correspond",
        Command::Represent { .. } => "represent",
        Command::Normalize { .. } => "normalize",
        Command::Translate { .. } => "translate",
        Command::Agree { .. } => "agree",
    }
}

fn run(cli: &Cli, inputs: &mut Inputs, b: &mut Builder) -> Run<()> {
    let g = &cli.global;
    match &cli.command {
        Command::CheckCj { file, samples } => {
            let m = json::read_cj(&inputs.read(file)?)?;
            check_cj(g, &m, *samples, b);
        }
        Command::Example11 { force_5d } => example(g, *force_5d, b)?,
        Command::Rules { input } => {
            let rel = relation(inputs, &input.input, &input.atoms)?;
            rules(g, &rel, b)?;
        }
        Command::Props { input } => {
            let cf = json::read_choice(&inputs.read(input)?)?;
            props(g, &cf, b)?;
        }
        Command::Interdep { row, samples } => interdep(g, row.as_deref(), *samples, b)?,
        Command::Correspond { input, samples } => correspond(g, inputs, input, *samples, b)?,
        Command::Represent { input, out, verify } => {
            let cf = json::read_choice(&inputs.read(input)?)?;
            represent(&cf, out.as_deref(), *verify, b)?;
        }
        Command::Normalize { input, out, extra } => {
            let s = json::read_pref(&inputs.read(input)?)?;
            normalize(&s, extra, out.as_deref(), b)?;
        }
        Command::Translate {
            kind,
            formulas,
            model,
        } => {
            let m = match model {
                Some(p) => Some(json::read_modal(&inputs.read(p)?)?),
                None => None,
            };
            translate(*kind, formulas, m.as_ref(), b)?;
        }
        Command::Agree { model } => {
            let m = json::read_modal(&inputs.read(model)?)?;
            agree(g, &m, b);
        }
    }
    Ok(())
}

fn names(universe: &[String], s: Set) -> String {
    let items: Vec<&str> = s.iter().map(|i| universe[i].as_str()).collect();
    format!("{{{}}}", items.join(","))
}

fn frame_witness(worlds: &[String], w: &FrameWitness) -> String {
    let n = |s: Set| names(worlds, s);
    match *w {
        FrameWitness::World(i) => format!("world {}", worlds[i]),
        FrameWitness::Context { x } => format!("X={}", n(x)),
        FrameWitness::Triple { x, y, z } => format!("X={} Y={} Z={}", n(x), n(y), n(z)),
        FrameWitness::Completion { x, y, z, demanded } => format!(
            "X={} Y={} Z={} missing (Z-X)∪Y={}",
            n(x),
            n(y),
            n(z),
            n(demanded)
        ),
    }
}

fn check_cj(g: &Global, m: &CJModel, samples: u64, b: &mut Builder) {
    let frame_wanted = |c: FrameCondition| g.wants("frame") || g.wants(c.label());
    let axiom_wanted = |id: u8| g.wants("axioms") || g.wants(&id.to_string());
    let frame = check_frame(m);
    for r in &frame.results {
        if frame_wanted(r.condition) {
            b.check(
                r.condition.label(),
                r.witness.as_ref().map(|w| frame_witness(m.worlds(), w)),
            );
        }
    }
    if !(1..=15).any(axiom_wanted) {
        return;
    }
    let opts = AxiomOptions {
        exec: g.exec(),
        samples,
        seed: g.seed,
        ..AxiomOptions::default()
    };
    let report = check_axioms_with(m, &opts);
    if let SweepMode::Sampled { seed, samples } = report.mode {
        b.seed = Some(seed);
        b.line(format!("axioms sampled: {samples} assignments per schema"));
    }
    for r in &report.results {
        if axiom_wanted(r.id) {
            b.check(
                format!("axiom {}", r.id),
                r.counterexample.as_ref().map(|w| {
                    let sets: Vec<String> = w
                        .assignment
                        .iter()
                        .map(|&(l, s)| format!("{l}={}", names(m.worlds(), s)))
                        .collect();
                    format!(
                        "{} at {}: {}",
                        w.variant,
                        m.worlds()[w.world],
                        sets.join(" ")
                    )
                }),
            );
        }
    }
}

fn example(g: &Global, force: bool, b: &mut Builder) -> Run<()> {
    let m = if force {
        build_example_1_1_forced()
    } else {
        build_example_1_1()
    };
    let frame = check_frame(&m);
    let axioms = check_axioms_with(
        &m,
        &AxiomOptions {
            exec: g.exec(),
            ..AxiomOptions::default()
        },
    );
    let opp = parse("O(p / p)")?;
    let valid = m.is_valid(&opp)?;
    let d5 = frame.get(FrameCondition::D5);
    b.line(format!(
        "axioms: {}/15 pass; 5-d: {}; O(p/p): {}",
        axioms.passed(),
        if d5.pass() { "pass" } else { "FAIL" },
        if valid { "valid" } else { "not valid" }
    ));
    for r in &frame.results {
        b.check(
            r.condition.label(),
            r.witness.as_ref().map(|w| frame_witness(m.worlds(), w)),
        );
    }
    for r in &axioms.results {
        b.check(
            format!("axiom {}", r.id),
            r.counterexample.as_ref().map(|w| w.variant.to_string()),
        );
    }
    let countermodel = (!valid).then(|| {
        let fails = m
            .universe()
            .minus(m.truth_set(&opp).expect("evaluated above"));
        format!("false at {}", names(m.worlds(), fails))
    });
    b.check("O(p/p) valid", countermodel);
    Ok(())
}

fn relation(inputs: &mut Inputs, path: &Path, atoms: &[String]) -> Run<ConsequenceRelation> {
    let cf = json::read_choice(&inputs.read(path)?)?;
    let lang = language(atoms, cf.universe_size())?;
    Ok(ConsequenceRelation::new(lang, cf)?)
}

fn language(atoms: &[String], models: usize) -> Run<FiniteLanguage> {
    if !models.is_power_of_two() {
        return Err(
            anyhow!("universe of {models} elements is not the model set of a language").into(),
        );
    }
    let k = models.trailing_zeros() as usize;
    if atoms.is_empty() {
        return Ok(FiniteLanguage::numbered(k));
    }
    if atoms.len() != k {
        return Err(anyhow!("{} atoms given for {models} models", atoms.len()).into());
    }
    Ok(FiniteLanguage::new(atoms.to_vec())?)
}

fn world_names(lang: &FiniteLanguage) -> Vec<String> {
    (0..lang.model_count())
        .map(|w| format!("[{}]", lang.world_name(w)))
        .collect()
}

fn rules(g: &Global, rel: &ConsequenceRelation, b: &mut Builder) -> Run<()> {
    let selected = select(&g.only, Rule::ALL.as_slice(), |r| r.key())?;
    let worlds = world_names(rel.language());
    for rule in selected {
        let r = check_logical_rule(rel, rule);
        b.check(
            rule.key(),
            r.counterexample.map(|w| {
                w.named_sets()
                    .map(|(l, s)| format!("{l}={}", names(&worlds, s)))
                    .collect::<Vec<_>>()
                    .join(" ")
            }),
        );
    }
    Ok(())
}

/// `all` filtered by `--only`, rejecting unknown ids.
fn select<T: Copy>(only: &[String], all: &[T], key: impl Fn(T) -> &'static str) -> Run<Vec<T>> {
    for o in only {
        if !all.iter().any(|&t| key(t) == o) {
            return Err(anyhow!("unknown check id `{o}`").into());
        }
    }
    Ok(all
        .iter()
        .copied()
        .filter(|&t| only.is_empty() || only.iter().any(|o| o == key(t)))
        .collect())
}

fn props(g: &Global, cf: &ChoiceFunction, b: &mut Builder) -> Run<()> {
    for p in select(&g.only, Property::ALL.as_slice(), |p| p.key())? {
        let r = check_property(cf, p);
        let witness = r
            .counterexample
            .filter(|_| r.verdict == Verdict::Fail)
            .map(|c| {
                let mut parts: Vec<String> = c
                    .named_sets()
                    .map(|(l, s)| format!("{l}={}", names(cf.universe(), s)))
                    .collect();
                if let Some(a) = c.element {
                    parts.push(format!("a={}", cf.universe()[a]));
                }
                parts.join(" ")
            });
        let vacuous = r.verdict == Verdict::Vacuous;
        b.check(
            if vacuous {
                format!("{} (vacuous)", p.key())
            } else {
                p.key().to_string()
            },
            witness,
        );
    }
    Ok(())
}

fn interdep(g: &Global, row: Option<&str>, samples: u64, b: &mut Builder) -> Run<()> {
    let rows: Vec<_> = match row {
        Some(id) => vec![interdep::row(id).ok_or_else(|| anyhow!("unknown row `{id}`"))?],
        None => interdep::rows().iter().collect(),
    };
    let cap = g.cap.unwrap_or(EXHAUSTIVE_MAX);
    let sampling = (cap > EXHAUSTIVE_MAX).then_some((g.seed, samples));
    if sampling.is_some() {
        b.seed = Some(g.seed);
    }
    let opts = InterdepOptions {
        cap,
        exec: g.exec(),
        sampling,
    };
    for r in rows {
        let report = check_interdependency(r, &opts)?;
        b.line(format!(
            "{r}: {} ({} instances)",
            report.summary(),
            report.instances
        ));
        let witness = match &report.outcome {
            RowOutcome::Counterexample(w) => Some(format!(
                "{} fails on {:?}",
                w.failed.key(),
                w.choice.to_choice_function()
            )),
            RowOutcome::NoWitness => Some(report.summary()),
            _ => None,
        };
        b.check(format!("row {}", r.id), witness);
    }
    Ok(())
}

fn correspond(
    g: &Global,
    inputs: &mut Inputs,
    input: &OptionalChoiceInput,
    samples: u64,
    b: &mut Builder,
) -> Run<()> {
    if let Some(path) = &input.input {
        let rel = relation(inputs, path, &input.atoms)?;
        for a in correspondence_check(&rel) {
            b.check(
                format!("row {}", a.row.id),
                (!a.agrees()).then(|| {
                    format!(
                        "{}: rule {} law {} side {}",
                        a.row, a.rule_holds, a.law_holds, a.side_holds
                    )
                }),
            );
        }
        return Ok(());
    }
    let atoms = match input.atoms.as_slice() {
        [] => 1,
        [k] => k
            .parse()
            .map_err(|_| anyhow!("--atoms expects a count without --in"))?,
        _ => bail_input("--atoms expects a count without --in")?,
    };
    if atoms == 0 || atoms > 2 {
        bail_input("sweeps cover one or two atoms")?;
    }
    let sampling = (atoms == 2).then_some((g.seed, samples));
    if sampling.is_some() {
        b.seed = Some(g.seed);
    }
    let s = correspondence_sweep(atoms, sampling, g.exec());
    b.line(format!(
        "{} functions ({}), {} rows",
        s.functions,
        if s.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        },
        s.exercised.len()
    ));
    b.check(
        "correspondence",
        s.disagreement
            .as_ref()
            .map(|(f, ids)| format!("rows {} disagree on {f:?}", ids.join(","))),
    );
    Ok(())
}

fn bail_input<T>(msg: &str) -> Run<T> {
    Err(anyhow!("{msg}").into())
}

fn write_out(path: Option<&Path>, text: &str, b: &mut Builder) -> Run<()> {
    match path {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            b.line(format!("wrote {}", p.display()));
        }
        None => b.line(text.trim_end()),
    }
    Ok(())
}

fn represent(cf: &ChoiceFunction, out: Option<&Path>, verify: bool, b: &mut Builder) -> Run<()> {
    let s = match represent_ranked(cf) {
        Ok(s) => s,
        Err(e) => {
            b.check("representable", Some(e.to_string()));
            return Ok(());
        }
    };
    b.check("representable", None);
    write_out(out, &json::write_pref(&s), b)?;
    if verify {
        b.check(
            "verified",
            verify_representation(cf, &s).err().map(|f| match f {
                VerifyFailure::Mu { set, expected, got } => format!(
                    "μ({}) = {} but f gives {}",
                    names(cf.universe(), set),
                    names(cf.universe(), got),
                    names(cf.universe(), expected)
                ),
                other => format!("{other:?}"),
            }),
        );
    }
    Ok(())
}

fn normalize(s: &PrefStructure, extra: &[String], out: Option<&Path>, b: &mut Builder) -> Run<()> {
    let mut z = s.points().to_vec();
    z.extend(extra.iter().cloned());
    let n = match normalize_one_infinity(s, &z) {
        Ok(n) => n,
        Err(e) => {
            b.check("normalizable", Some(e.to_string()));
            return Ok(());
        }
    };
    b.check("normalizable", None);
    let changed = Set::full(s.point_count())
        .subsets()
        .find(|&x| s.mu(x) != n.mu(x))
        .map(|x| format!("μ differs on {}", names(s.points(), x)));
    b.check("same μ", changed);
    write_out(out, &json::write_pref(&n), b)
}

fn translate(
    kind: Translation,
    args: &[String],
    model: Option<&BiModalModel>,
    b: &mut Builder,
) -> Run<()> {
    let arity = match kind {
        Translation::Min => 1,
        Translation::Cond => 2,
        Translation::Ratm | Translation::And => 3,
    };
    if args.len() != arity {
        bail_input(&format!("expected {arity} formulas, got {}", args.len()))?;
    }
    let fs = args
        .iter()
        .map(|a| parse(a).with_context(|| format!("parsing `{a}`")))
        .collect::<Result<Vec<_>>>()?;
    let t = match kind {
        Translation::Min => minimal_models_formula(&fs[0]),
        Translation::Cond => translate_conditional(&fs[0], &fs[1]),
        Translation::Ratm => translate_ratm(&fs[0], &fs[1], &fs[2]),
        Translation::And => translate_and_schema(&fs[0], &fs[1], &fs[2]),
    };
    b.line(render(&t));
    if let Some(m) = model {
        let holds = m.eval_entry(&t)?;
        b.check(
            format!("true at {}", m.worlds()[m.entry()]),
            (!holds).then(|| "false".to_string()),
        );
    }
    Ok(())
}

fn agree(g: &Global, m: &BiModalModel, b: &mut Builder) {
    let report = agreement_check(m);
    let universe = m.worlds();
    b.line(format!(
        "{} definable sets, {} pairs; rows α, columns β",
        report.sets.len(),
        report.pairs
    ));
    for (i, row) in report.matrix.iter().enumerate() {
        let cells: String = row.iter().map(|&v| if v { '1' } else { '0' }).collect();
        b.line(format!("{:<16} {cells}", names(universe, report.sets[i])));
    }
    if g.wants("agree") {
        b.check(
            "agree",
            report.disagreements.first().map(|&(a, c, modal)| {
                format!(
                    "α={} β={} modal {modal}",
                    names(universe, a),
                    names(universe, c)
                )
            }),
        );
    }
    if g.wants("ratm") {
        let ranked = m.preference().is_ranked().is_ok();
        if ranked {
            b.check(
                "ratm",
                ratm_counterexample(m).map(|sets| {
                    sets.iter()
                        .map(|&s| names(universe, s))
                        .collect::<Vec<_>>()
                        .join(" ")
                }),
            );
        } else {
            b.line("R′ not ranked; ratm not checked");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_rejects_unknown_ids() {
        let only = vec!["and".to_string(), "nope".to_string()];
        assert!(select(&only, Rule::ALL.as_slice(), |r| r.key()).is_err());
        let only = vec!["cut".to_string()];
        assert_eq!(
            select(&only, Rule::ALL.as_slice(), |r| r.key()).ok(),
            Some(vec![Rule::Cut])
        );
    }

    #[test]
    fn language_from_universe() {
        assert!(language(&[], 3).is_err());
        assert_eq!(language(&[], 4).ok().map(|l| l.atoms().len()), Some(2));
        assert!(language(&["a".into()], 4).is_err());
    }
}
