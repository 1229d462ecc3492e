use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use gzloc::cat::{CompositionTable, FiniteCategory, Functor, SigmaSet};
use gzloc::format::{self, FormatError, Presentation};
use gzloc::fractions::{build_fraction_category, build_right_fraction_category, check_left_fraction_axioms, FractionError};
use gzloc::verify::{self, SearchError, VerifyError};
use gzloc::words::{self, Family, LocalizedPresentation, Verdict, DEFAULT_BUDGET};

const OK: u8 = 0;
const PROPERTY_FAILS: u8 = 1;
const INPUT_ERROR: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "gzloc", version, about = "Localization of finite presented categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fractions,
    Words,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a presentation.
    Validate { file: PathBuf },
    /// Localize at the file's sigma.
    Localize {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_enum, default_value = "left")]
        side: Side,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide equality of two zigzag words, e.g. `f.~t` or `@X`.
    Equal {
        file: PathBuf,
        word1: String,
        word2: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Report the left fraction conditions and three-for-two.
    CheckFractions { file: PathBuf },
    /// Print every morphism inverted by the localization.
    Saturate { file: PathBuf },
    /// Localize at all morphisms.
    Groupoidify {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare functors and natural transformations out of the localization
    /// with sigma-inverting ones out of the base.
    Lemma12 {
        file: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Compare word equality with fraction classes on all short words.
    BridgeCheck {
        file: PathBuf,
        #[arg(long)]
        max_word_len: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Search for equivalent symbols without a common symbol under both.
    FindCounterexample {
        #[arg(long, default_value_t = 4)]
        max_obj: usize,
        #[arg(long, default_value_t = 12)]
        max_mor: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn load(path: &Path) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(INPUT_ERROR, format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| Failure::new(INPUT_ERROR, format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::new(INPUT_ERROR, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fraction_failure(c: &FiniteCategory, e: FractionError) -> Failure {
    fraction_failure_titled(c, e, "left fraction conditions fail")
}

fn fraction_failure_titled(c: &FiniteCategory, e: FractionError, title: &str) -> Failure {
    match e {
        FractionError::AxiomsFail(r) => Failure::new(PROPERTY_FAILS, format!("{title}:\n{}", r.lines(c).join("\n"))),
        other => Failure::new(PROPERTY_FAILS, other.to_string()),
    }
}

fn verify_failure(c: &FiniteCategory, e: VerifyError) -> Failure {
    match e {
        VerifyError::SizeBound { .. } => Failure::new(BUDGET, e.to_string()),
        VerifyError::Fractions(f) => fraction_failure(c, f),
    }
}

fn localized_text(header: &str, category: &FiniteCategory, projection: &Functor) -> String {
    let mut out = String::new();
    writeln!(out, "# {header}").unwrap();
    out.push_str(&format::serialize(category, &SigmaSet::empty(category)));
    out.push_str(&format::serialize_functor("P", projection));
    out
}

fn validate(file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::new(INPUT_ERROR, format!("{}: {e}", file.display())))?;
    match format::parse(&text) {
        Ok(p) => {
            println!(
                "ok: {} objects, {} morphisms, {} in sigma",
                p.category.obj_count(),
                p.category.mor_count(),
                p.sigma.len()
            );
            Ok(OK)
        }
        Err(e @ FormatError::Validation(_)) => Err(Failure::new(PROPERTY_FAILS, e.to_string())),
        Err(e) => Err(Failure::new(INPUT_ERROR, format!("{}: {e}", file.display()))),
    }
}

fn localize(file: &Path, method: Method, side: Side, output: Option<&Path>) -> Outcome {
    let p = load(file)?;
    let c = Arc::new(p.category);
    let s = p.sigma;
    match (method, side) {
        (Method::Fractions, Side::Left) => {
            let frac = build_fraction_category(&c, &s).map_err(|e| fraction_failure(&c, e))?;
            emit(output, &localized_text("left fractions", &frac.category, &frac.projection))?;
        }
        (Method::Fractions, Side::Right) => {
            let frac = build_right_fraction_category(&c, &s).map_err(|e| {
                fraction_failure_titled(&c.opposite(), e, "right fraction conditions fail (checked as left conditions on the opposite)")
            })?;
            emit(output, &localized_text("right fractions", &frac.category, &frac.projection))?;
        }
        (Method::Words, _) => {
            let graph = words::gz_graph(&c, &s);
            let instances = words::gz_relation_instances(&c, &s);
            let mut out = String::new();
            writeln!(out, "objects {}", c.obj_count()).unwrap();
            writeln!(out, "morphisms {}", c.mor_count()).unwrap();
            writeln!(out, "sigma {}", s.len()).unwrap();
            writeln!(out, "graph vertices {} edges {}", graph.vertex_count(), graph.edges().len()).unwrap();
            for fam in Family::ALL {
                let n = instances.iter().filter(|i| i.family == fam).count();
                writeln!(out, "family {} instances {n}", fam.number()).unwrap();
            }
            emit(output, &out)?;
        }
    }
    Ok(OK)
}

fn equal(file: &Path, w1: &str, w2: &str, budget: usize) -> Outcome {
    let p = load(file)?;
    let c = Arc::new(p.category);
    let s = p.sigma;
    let parse = |w: &str| format::parse_word(&c, &s, w).map_err(|e| Failure::new(INPUT_ERROR, e.to_string()));
    let (a, b) = (parse(w1)?, parse(w2)?);
    let lp = LocalizedPresentation::with_budget(c.clone(), s.clone(), budget);
    match lp.words_equal(&a, &b) {
        Verdict::Equal(cert) => {
            println!("Equal");
            for line in cert.lines(&c) {
                println!("  {line}");
            }
            Ok(OK)
        }
        Verdict::EqualByFractions => {
            println!("Equal (same fraction class; no rewrite chain within budget)");
            Ok(OK)
        }
        Verdict::Distinct => {
            println!("Distinct");
            Ok(PROPERTY_FAILS)
        }
        Verdict::NotProvenEqual { note, budget_exhausted } => {
            if a.source() != b.source() || a.target(&c) != b.target(&c) {
                println!("Distinct ({note})");
                return Ok(PROPERTY_FAILS);
            }
            println!("NotProvenEqual ({note})");
            Ok(if budget_exhausted { BUDGET } else { PROPERTY_FAILS })
        }
    }
}

fn check_fractions(file: &Path) -> Outcome {
    let p = load(file)?;
    let report = check_left_fraction_axioms(&p.category, &p.sigma);
    for line in report.lines(&p.category) {
        println!("{line}");
    }
    Ok(if report.has_left_fractions() { OK } else { PROPERTY_FAILS })
}

fn saturate(file: &Path) -> Outcome {
    let p = load(file)?;
    let c = Arc::new(p.category);
    let sat = words::saturation(&c, &p.sigma).map_err(|e| fraction_failure(&c, e))?;
    let names: Vec<&str> = sat.members().map(|m| c.mor_name(m)).collect();
    println!("sigma {}", names.join(", "));
    Ok(OK)
}

fn groupoidify(file: &Path, output: Option<&Path>) -> Outcome {
    let p = load(file)?;
    let c = Arc::new(p.category);
    let (g, proj) = words::groupoid_completion(&c).map_err(|e| fraction_failure(&c, e))?;
    emit(output, &localized_text("groupoid completion", &g, &proj))?;
    Ok(OK)
}

fn lemma12(file: &Path, target: &Path) -> Outcome {
    let p = load(file)?;
    let x = load(target)?;
    let c = Arc::new(p.category);
    let x = Arc::new(x.category);
    let r = verify::check_lemma_1_2(&c, &p.sigma, &x).map_err(|e| verify_failure(&c, e))?;
    println!("functors out of the localization: {}", r.functors_from_localization);
    println!("functors out of the base: {}", r.functors_from_base);
    println!("sigma-inverting functors: {}", r.inverting_functors);
    for n in &r.nat_counts {
        println!(
            "natural transformations {} => {}: {} = {}",
            n.first, n.second, n.from_localization, n.from_base
        );
    }
    for f in &r.failures {
        println!("FAIL: {f}");
    }
    Ok(if r.holds() { OK } else { PROPERTY_FAILS })
}

fn bridge_check(file: &Path, max_len: usize, budget: usize) -> Outcome {
    let p = load(file)?;
    let c = Arc::new(p.category);
    let r = verify::check_theorem_lfproperty(&c, &p.sigma, max_len, budget).map_err(|e| verify_failure(&c, e))?;
    println!("words {}", r.words);
    println!("parallel pairs {}", r.pairs);
    println!("equal {} distinct {}", r.equal, r.distinct);
    println!(
        "equal by reduction {} by search {} by fractions {}",
        r.by_reduction, r.by_search, r.fallback
    );
    println!("not proven {}", r.not_proven);
    println!("certificates checked {} invalid {}", r.certificates_checked, r.bad_certificates);
    for m in &r.mismatches {
        println!("MISMATCH: {m}");
    }
    Ok(if r.holds() { OK } else { PROPERTY_FAILS })
}

fn find_counterexample(max_obj: usize, max_mor: usize, seed: u64, output: Option<&Path>) -> Outcome {
    match verify::search_beyond_under_counterexample(max_obj, max_mor, seed) {
        Ok(inst) => {
            let c = &inst.category;
            let mut out = String::new();
            writeln!(out, "# u = {}", inst.u.display(c)).unwrap();
            writeln!(out, "# v = {}", inst.v.display(c)).unwrap();
            writeln!(out, "# intermediary {}", c.mor_name(inst.intermediary)).unwrap();
            writeln!(out, "# categories examined {}", inst.categories_examined).unwrap();
            for line in &inst.transcript {
                writeln!(out, "# {line}").unwrap();
            }
            out.push_str(&format::serialize(c, &inst.sigma));
            emit(output, &out)?;
            Ok(OK)
        }
        Err(e @ SearchError::NotFound { .. }) => Err(Failure::new(BUDGET, e.to_string())),
        Err(e) => Err(Failure::new(PROPERTY_FAILS, e.to_string())),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Localize {
            file,
            method,
            side,
            output,
        } => localize(&file, method, side, output.as_deref()),
        Command::Equal {
            file,
            word1,
            word2,
            budget,
        } => equal(&file, &word1, &word2, budget),
        Command::CheckFractions { file } => check_fractions(&file),
        Command::Saturate { file } => saturate(&file),
        Command::Groupoidify { file, output } => groupoidify(&file, output.as_deref()),
        Command::Lemma12 { file, target } => lemma12(&file, &target),
        Command::BridgeCheck {
            file,
            max_word_len,
            budget,
        } => bridge_check(&file, max_word_len, budget),
        Command::FindCounterexample {
            max_obj,
            max_mor,
            seed,
            output,
        } => find_counterexample(max_obj, max_mor, seed, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
