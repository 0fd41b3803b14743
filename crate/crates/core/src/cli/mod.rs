//! Command-line front end. [`main_from_args`] parses arguments, dispatches and returns
//! the exit code: 0 ok, 1 mismatch, 2 usage or input error, 3 budget exceeded or unknown.

mod examples;

pub use examples::{run_examples, small_constant_models, ExampleRecord, RecordStatus};

use crate::chase::{chase, prove_sequent, reduces, representing_model, ChaseBudget, ChaseStatus, Presentation, Verdict};
use crate::decompose::{self, canonical_decomposition, equational_scale, parse_scale, DecompBudget, Scale};
use crate::error::{Error, Result};
use crate::gatrank;
use crate::gauge::{self, check_gauge, ncat_gauge_rules, ncat_theory, parse_gauge_rules, terms_up_to, toy_gauge_rules, Ncat};
use crate::structure::{enumerate_homs, parse_hom, parse_models, print_model, structure_to_json, Hom, ModelDoc};
use crate::syntax::{parse_context, parse_formula, parse_sequents, parse_term, Context, Term, Theory};
use crate::topdec;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Largest model the chase may build.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = positive)]
    pub max_elements: usize,
    /// Largest number of chase rounds.
    #[arg(long, global = true, default_value_t = 1_000, value_parser = positive)]
    pub max_rounds: usize,
    /// Largest number of decomposition steps.
    #[arg(long, global = true, default_value_t = 64, value_parser = positive)]
    pub max_steps: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Corpus directory used by `examples` (default: the bundled one).
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn chase_budget(&self) -> ChaseBudget {
        ChaseBudget { max_elements: self.max_elements, max_rounds: self.max_rounds }
    }

    pub fn decomp_budget(&self) -> DecompBudget {
        DecompBudget { chase: self.chase_budget(), max_steps: self.max_steps }
    }

    pub fn corpus_dir(&self) -> PathBuf {
        self.corpus.clone().unwrap_or_else(default_corpus)
    }
}

/// `$HORNDEC_CORPUS`, or the corpus shipped with the crate sources.
pub fn default_corpus() -> PathBuf {
    std::env::var_os("HORNDEC_CORPUS")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"))
}

#[derive(Debug, Clone, Args)]
pub struct MorphismArgs {
    #[arg(long)]
    pub theory: PathBuf,
    /// Source model file (first model in the file).
    #[arg(long)]
    pub from: PathBuf,
    /// Target model file (first model in the file).
    #[arg(long)]
    pub to: PathBuf,
    /// Homomorphism file; if absent the hom must be unique.
    #[arg(long)]
    pub hom: Option<PathBuf>,
    /// Scale file; default is the equational scale.
    #[arg(long)]
    pub scale: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse and sort-check a theory, and check models and homs against it.
    Check {
        theory: PathBuf,
        #[arg(long = "model")]
        models: Vec<PathBuf>,
        /// Hom file, resolved against the given models.
        #[arg(long)]
        hom: Option<PathBuf>,
    },
    /// Free model on a presentation file, or the representing model of `[ctx] φ`.
    Free {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, conflicts_with_all = ["context", "formula"])]
        presentation: Option<PathBuf>,
        #[arg(long)]
        context: Option<String>,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Decide a Horn sequent `[ctx] φ |- ψ` by chasing its premise.
    Prove {
        #[arg(long)]
        theory: PathBuf,
        sequent: String,
    },
    /// Canonical decomposition trace of a homomorphism.
    Decompose {
        #[command(flatten)]
        morphism: MorphismArgs,
        /// Write a DOT rendering of the tower here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decomposition number of a homomorphism.
    Decnum {
        #[command(flatten)]
        morphism: MorphismArgs,
        /// Exit 1 unless the result equals this.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Image factorization through the equational scale.
    Image {
        #[command(flatten)]
        morphism: MorphismArgs,
    },
    /// Certify a gauge on all terms up to a depth.
    GaugeCheck {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        scale: Option<PathBuf>,
        /// `builtin:ncat`, `builtin:toy`, or a rules file.
        #[arg(long)]
        rules: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Number of variables per sort.
        #[arg(long, default_value_t = 2)]
        vars: usize,
        /// Check a random sample of this many terms instead of all.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Normal form of a term over strict n-categories.
    NcatNormalize {
        n: usize,
        term: String,
        /// Variables allowed in the term.
        #[arg(long, default_value = "x,y,z,w,x',y',z',w'")]
        vars: String,
    },
    /// Monotone-quotient / light decomposition of a finite continuous map.
    Topdec {
        #[arg(long, conflicts_with = "space", required_unless_present = "space")]
        lambda: Option<usize>,
        /// JSON map file.
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Dependency ranks and the decomposition-number bound of a GAT.
    GatRank { file: PathBuf },
    /// Run the bundled example table.
    Examples {
        #[arg(default_value = "")]
        filter: String,
    },
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "horndec", version, about = "Partial Horn logic, free models and decomposition numbers")]
pub struct RunConfig {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => {
            let out = run(&cfg);
            print!("{}", out.output);
            out.code
        }
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let name = command_name(&cfg.command);
    let (code, text, json) = match dispatch(cfg) {
        Ok(r) => r,
        Err(e) => {
            let code = match e {
                Error::BudgetExceeded | Error::NotStabilized(_) => EXIT_BUDGET,
                _ => EXIT_USAGE,
            };
            (code, format!("error: {e}\n"), json!({ "error": e.to_string() }))
        }
    };
    let output = match cfg.global.format {
        Format::Text => text,
        Format::Json => {
            let env = json!({ "version": 1, "command": name, "exitCode": code, "result": json });
            serde_json::to_string_pretty(&env).expect("serializable") + "\n"
        }
    };
    Outcome { code, output }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Free { .. } => "free",
        Command::Prove { .. } => "prove",
        Command::Decompose { .. } => "decompose",
        Command::Decnum { .. } => "decnum",
        Command::Image { .. } => "image",
        Command::GaugeCheck { .. } => "gauge-check",
        Command::NcatNormalize { .. } => "ncat-normalize",
        Command::Topdec { .. } => "topdec",
        Command::GatRank { .. } => "gat-rank",
        Command::Examples { .. } => "examples",
    }
}

type Reply = (i32, String, Value);

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn at(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col, msg: format!("{}: {msg}", path.display()) },
        e => e,
    }
}

pub fn load_theory(path: &Path) -> Result<Theory> {
    crate::syntax::parse_theory(&read(path)?).map_err(|e| at(path, e))
}

pub fn load_models(th: &Theory, path: &Path) -> Result<Vec<ModelDoc>> {
    parse_models(th, &read(path)?).map_err(|e| at(path, e))
}

pub fn load_model(th: &Theory, path: &Path) -> Result<ModelDoc> {
    load_models(th, path)?.into_iter().next().ok_or_else(|| Error::Invalid(format!("{}: no model", path.display())))
}

fn load_scale(th: &Theory, path: Option<&Path>) -> Result<Scale> {
    match path {
        None => Ok(equational_scale(th)),
        Some(p) => parse_scale(th, &read(p)?).map_err(|e| at(p, e)),
    }
}

/// Theory, scale and homomorphism named by the arguments.
pub fn load_morphism(m: &MorphismArgs) -> Result<(Theory, Scale, Hom)> {
    let th = load_theory(&m.theory)?;
    let scale = load_scale(&th, m.scale.as_deref())?;
    let from = load_model(&th, &m.from)?;
    let to = load_model(&th, &m.to)?;
    let hom = match &m.hom {
        Some(p) => parse_hom(&read(p)?, &[from, to]).map_err(|e| at(p, e))?.hom,
        None => {
            let (s, t) = (Arc::new(from.structure), Arc::new(to.structure));
            let mut homs = enumerate_homs(&s, &t);
            if homs.len() != 1 {
                return Err(Error::Hom(format!("{} homomorphisms from {} to {}; pass --hom", homs.len(), from.name, to.name)));
            }
            homs.pop().unwrap()
        }
    };
    Ok((th, scale, hom))
}

fn dispatch(cfg: &RunConfig) -> Result<Reply> {
    let g = &cfg.global;
    match &cfg.command {
        Command::Check { theory, models, hom } => check(theory, models, hom.as_deref()),
        Command::Free { theory, presentation, context, formula } => {
            free(g, theory, presentation.as_deref(), context.as_deref(), formula.as_deref())
        }
        Command::Prove { theory, sequent } => prove(g, theory, sequent),
        Command::Decompose { morphism, dot } => {
            let (th, scale, hom) = load_morphism(morphism)?;
            let trace = canonical_decomposition(&th, &scale, &hom, g.decomp_budget())?;
            if let Some(p) = dot {
                std::fs::write(p, decompose::trace_dot(&trace))
                    .map_err(|e| Error::Io { path: p.display().to_string(), msg: e.to_string() })?;
            }
            let tj = decompose::trace_json(&scale, &trace);
            let mut text = String::new();
            for s in &tj.steps {
                let fired: Vec<String> =
                    s.fired_matches.iter().map(|m| format!("{}({})", m.label, m.assignment.join(","))).collect();
                let _ = writeln!(
                    text,
                    "step {}: {} elements, {} merges, {} fresh{} {}",
                    s.index,
                    s.elements,
                    s.merges,
                    s.fresh,
                    if s.iso { ", iso" } else { "" },
                    fired.join(" ")
                );
            }
            let code = match tj.decnum {
                Some(k) => {
                    let _ = writeln!(text, "decnum {k}");
                    EXIT_OK
                }
                None => {
                    let _ = writeln!(text, "not stabilized after {} steps", g.max_steps);
                    EXIT_BUDGET
                }
            };
            Ok((code, text, serde_json::to_value(&tj).expect("serializable")))
        }
        Command::Decnum { morphism, expect } => {
            let (th, scale, hom) = load_morphism(morphism)?;
            let k = decompose::decnum(&th, &scale, &hom, g.decomp_budget())?;
            let code = match expect {
                Some(e) if *e != k => EXIT_MISMATCH,
                _ => EXIT_OK,
            };
            Ok((code, format!("{k}\n"), json!({ "decnum": k, "expected": expect })))
        }
        Command::Image { morphism } => {
            let (th, _, hom) = load_morphism(morphism)?;
            let (epi, mono) = decompose::image_factorization(&th, &hom, g.decomp_budget())?;
            let image = &epi.target;
            let text = print_model(&th.sig, "Image", &th.name, image)
                + &format!("# epi surjective: {}, mono injective: {}\n", epi.is_surjective(), mono.is_injective());
            let j = json!({
                "image": structure_to_json(&th.sig, "Image", &th.name, image),
                "epiSurjective": epi.is_surjective(),
                "monoInjective": mono.is_injective(),
            });
            Ok((EXIT_OK, text, j))
        }
        Command::GaugeCheck { theory, scale, rules, depth, vars, sample } => {
            gauge_check(g, theory, scale.as_deref(), rules, *depth, *vars, *sample)
        }
        Command::NcatNormalize { n, term, vars } => ncat_normalize(g, *n, term, vars),
        Command::Topdec { lambda, space } => {
            let f = match (lambda, space) {
                (Some(l), _) => {
                    if *l == 0 {
                        return Err(Error::Invalid("λ must be positive".into()));
                    }
                    topdec::koizumi_space(*l).2
                }
                (None, Some(p)) => {
                    let j: topdec::MapJson = serde_json::from_str(&read(p)?)
                        .map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
                    topdec::map_from_json(&j)?
                }
                (None, None) => return Err(Error::Invalid("pass --lambda or --space".into())),
            };
            let t = topdec::monotone_light_decomposition(&f, g.max_steps)?;
            let tj = topdec::trace_json(&t);
            let mut text = String::new();
            for s in &tj.steps {
                let cls: Vec<String> = s.classes.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
                let _ = writeln!(text, "step {}: {} points {}", s.index, s.points, cls.join(" "));
            }
            let _ = writeln!(text, "stabilized at {}", t.stabilization_index.expect("finite spaces stabilize"));
            Ok((EXIT_OK, text, serde_json::to_value(&tj).expect("serializable")))
        }
        Command::GatRank { file } => {
            let spec = gatrank::parse_gat(&read(file)?).map_err(|e| at(file, e))?;
            let r = gatrank::rank_report(&spec)?;
            let mut text = String::new();
            for (s, k) in &r.ranks {
                let _ = writeln!(text, "{s}\t{k}");
            }
            for v in &r.violations {
                let _ = writeln!(text, "violation: {} context rank {} > result rank {}", v.decl, v.context_rank, v.result_rank);
            }
            let _ = writeln!(text, "max rank {}", r.max_rank);
            match r.bound {
                Some(b) => {
                    let _ = writeln!(text, "bound {b}");
                }
                None => text.push_str("bound none (not non-descending)\n"),
            }
            Ok((EXIT_OK, text, serde_json::to_value(&r).expect("serializable")))
        }
        Command::Examples { filter } => {
            let recs = run_examples(&g.corpus_dir(), filter, g);
            let mut text = String::new();
            for r in &recs {
                let _ = writeln!(text, "{:<4} {:<22} expected [{}] measured [{}]", r.status.as_str(), r.name, r.expected, r.measured);
            }
            let code = recs.iter().map(|r| r.status.exit_code()).max().unwrap_or(EXIT_OK);
            Ok((code, text, serde_json::to_value(&recs).expect("serializable")))
        }
    }
}

fn check(theory: &Path, models: &[PathBuf], hom: Option<&Path>) -> Result<Reply> {
    let th = load_theory(theory)?;
    let mut text = format!(
        "theory {}: {} sorts, {} functions, {} relations, {} sequents\n",
        th.name,
        th.sig.sorts.len(),
        th.sig.funcs.len(),
        th.sig.rels.len(),
        th.sequents.len()
    );
    let mut code = EXIT_OK;
    let mut docs = Vec::new();
    let mut results = Vec::new();
    for p in models {
        for d in load_models(&th, p)? {
            let verdict = match d.structure.is_model(&th) {
                Ok(()) => "model".to_string(),
                Err((i, a)) => {
                    code = EXIT_MISMATCH;
                    let asg: Vec<String> = a.iter().map(|(k, v)| format!("{k}={}", d.structure.name(*v))).collect();
                    format!("fails `{}` at [{}]", th.sig.sequent(&th.sequents[i]), asg.join(", "))
                }
            };
            let _ = writeln!(text, "model {} ({} elements): {verdict}", d.name, d.structure.len());
            results.push(json!({ "model": d.name, "elements": d.structure.len(), "verdict": verdict }));
            docs.push(d);
        }
    }
    let mut hom_json = Value::Null;
    if let Some(p) = hom {
        let h = parse_hom(&read(p)?, &docs).map_err(|e| at(p, e))?;
        let _ = writeln!(
            text,
            "hom {} : {} -> {}: injective {}, surjective {}",
            h.name,
            h.source,
            h.target,
            h.hom.is_injective(),
            h.hom.is_surjective()
        );
        hom_json = json!({ "hom": h.name, "injective": h.hom.is_injective(), "surjective": h.hom.is_surjective() });
    }
    let j = json!({
        "theory": th.name,
        "sorts": th.sig.sorts.len(),
        "functions": th.sig.funcs.len(),
        "relations": th.sig.rels.len(),
        "sequents": th.sequents.len(),
        "models": results,
        "hom": hom_json,
    });
    Ok((code, text, j))
}

fn free(g: &GlobalOpts, theory: &Path, presentation: Option<&Path>, context: Option<&str>, formula: Option<&str>) -> Result<Reply> {
    let th = load_theory(theory)?;
    let (name, r) = match presentation {
        Some(p) => {
            let d = load_model(&th, p)?;
            let r = chase(&th, &Presentation { base: d.structure, forced: Vec::new() }, g.chase_budget());
            (d.name, r)
        }
        None => {
            let ctx = parse_context(&th.sig, context.unwrap_or("[]"))?;
            let phi = parse_formula(&th.sig, &ctx, formula.unwrap_or("top"))?;
            ("Free".to_string(), representing_model(&th, &ctx, &phi, g.chase_budget()).0)
        }
    };
    let code = if r.status == ChaseStatus::Complete { EXIT_OK } else { EXIT_BUDGET };
    let mut text = print_model(&th.sig, &name, &th.name, &r.model);
    if code != EXIT_OK {
        text.push_str("# budget exceeded; partial result\n");
    }
    let j = json!({
        "status": r.status,
        "stats": r.stats,
        "model": structure_to_json(&th.sig, &name, &th.name, &r.model),
    });
    Ok((code, text, j))
}

fn prove(g: &GlobalOpts, theory: &Path, sequent: &str) -> Result<Reply> {
    let th = load_theory(theory)?;
    let seqs = parse_sequents(&th.sig, sequent)?;
    let reports: Vec<_> = seqs.iter().map(|s| prove_sequent(&th, s, g.chase_budget())).collect();
    let verdict = if reports.iter().all(|r| r.verdict == Verdict::Valid) {
        Verdict::Valid
    } else if reports.iter().any(|r| r.verdict == Verdict::Invalid) {
        Verdict::Invalid
    } else {
        Verdict::Unknown
    };
    let mut text = format!("{verdict:?}\n");
    for (s, r) in seqs.iter().zip(&reports) {
        let _ = writeln!(
            text,
            "  {}: {:?} (rounds {}, elements {}, merges {})",
            th.sig.sequent(s),
            r.verdict,
            r.stats.rounds,
            r.stats.elements,
            r.stats.merges
        );
    }
    let j = json!({
        "verdict": verdict,
        "sequents": seqs.iter().zip(&reports).map(|(s, r)| json!({
            "sequent": th.sig.sequent(s), "verdict": r.verdict, "stats": r.stats,
        })).collect::<Vec<_>>(),
    });
    Ok((verdict_code(verdict), text, j))
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Valid => EXIT_OK,
        Verdict::Invalid => EXIT_MISMATCH,
        Verdict::Unknown => EXIT_BUDGET,
    }
}

/// Rules named on the command line.
pub fn load_rules(th: &Theory, scale: &Scale, spec: &str) -> Result<gauge::GaugeRules> {
    match spec {
        "builtin:ncat" => ncat_gauge_rules(th).ok_or_else(|| Error::Invalid("theory is not a strict n-category theory".into())),
        "builtin:toy" => toy_gauge_rules(th).ok_or_else(|| Error::Invalid("theory lacks the constants a, b, c, d".into())),
        path => {
            let p = Path::new(path);
            parse_gauge_rules(th, scale, &read(p)?).map_err(|e| at(p, e))
        }
    }
}

/// `vars` fresh variables per sort, named `x1, x2, …` (suffixed by sort index when several sorts).
pub fn variables(th: &Theory, vars: usize) -> Vec<Term> {
    let many = th.sig.sorts.len() > 1;
    (0..th.sig.sorts.len())
        .flat_map(|s| {
            (1..=vars).map(move |i| Term::var(&if many { format!("x{s}_{i}") } else { format!("x{i}") }, s))
        })
        .collect()
}

fn gauge_check(
    g: &GlobalOpts,
    theory: &Path,
    scale: Option<&Path>,
    rules: &str,
    depth: usize,
    vars: usize,
    sample: Option<usize>,
) -> Result<Reply> {
    let th = load_theory(theory)?;
    let scale = load_scale(&th, scale)?;
    let rules = load_rules(&th, &scale, rules)?;
    let mut terms = terms_up_to(&th.sig, &variables(&th, vars), depth);
    if let Some(k) = sample {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(g.seed);
        terms.shuffle(&mut rng);
        terms.truncate(k);
    }
    let cert = check_gauge(&th, &scale, &rules, &terms, g.chase_budget())?;
    let mut text = String::new();
    for c in &cert.checks {
        let verdict = if c.certified() { "ok" } else { "FAIL" };
        let _ = writeln!(text, "{}\t{}\t{}\t{}", c.term, c.sharp, verdict, c.defining);
    }
    let _ = writeln!(text, "{:?} ({} terms, gamma {})", cert.status, cert.checks.len(), gauge::gamma(&rules, &terms));
    let code = match cert.status {
        gauge::CertStatus::Certified => EXIT_OK,
        gauge::CertStatus::Refuted => EXIT_MISMATCH,
        gauge::CertStatus::Incomplete => EXIT_BUDGET,
    };
    let j = json!({ "status": cert.status, "gamma": gauge::gamma(&rules, &terms), "checks": cert.checks });
    Ok((code, text, j))
}

fn ncat_normalize(g: &GlobalOpts, n: usize, term: &str, vars: &str) -> Result<Reply> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let th = ncat_theory(n);
    let nc = Ncat::detect(&th.sig).expect("generated theory");
    let vars: Vec<(String, usize)> = vars.split(',').map(|v| (v.trim().to_string(), 0)).filter(|(v, _)| !v.is_empty()).collect();
    let ctx = Context::new(vars)?;
    let t = parse_term(&th.sig, &ctx, term)?;
    let nf = nc.normalize(&t);
    let used = t.min_context();
    let rep = reduces(&th, &used, &t, &nf, g.chase_budget());
    let text = format!("{}\n{:?}\n", th.sig.term(&nf), rep.verdict);
    let j = json!({
        "term": th.sig.term(&t),
        "normal": th.sig.term(&nf),
        "sharp": nc.sharp(&t),
        "sharpNormal": nc.sharp(&nf),
        "verdict": rep.verdict,
    });
    Ok((verdict_code(rep.verdict), text, j))
}
