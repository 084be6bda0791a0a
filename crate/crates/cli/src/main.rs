use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cdc_core::diffcomb::{CheckConfig, PowerRuleMutant};
use cdc_core::dsl::{ModelKind, Session};
use cdc_core::jets::{jet_primitive, JetModel, DEFAULT_ORDER, PRIMITIVES};
use cdc_core::random::{random_poly_map, RandomMapSpec};
use cdc_core::report::AxiomReport;
use cdc_core::suite::Suite;
use cdc_core::{Error, PolyModel, SampleModel, Semiring, Status};

/// Exact differential calculus on polynomial maps and jets.
#[derive(Debug, Parser)]
#[command(name = "cdc", version)]
struct Cli {
    /// nat, rat or zmod:<m>
    #[arg(long, global = true, default_value = "rat")]
    semiring: String,

    /// poly, jet:<K>, or jet (order taken from --order)
    #[arg(long, global = true, default_value = "poly")]
    model: String,

    #[arg(long, global = true, env = "CDC_SEED", default_value_t = 42)]
    seed: u64,

    /// Jet truncation order
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    order: usize,

    /// Highest derivative order checked by the suites
    #[arg(long, global = true, default_value_t = 4)]
    kmax: usize,

    /// Samples per suite (each suite has its own default)
    #[arg(long, global = true)]
    samples: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mutant {
    PowerRule,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an expression
    Eval {
        expr: String,
        /// Domain arity of the result (inferred from the variables by default)
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Run a verification suite: cd, hd, dpoly, taylor, ultrametric,
    /// enrichment, convergence or all
    Verify {
        suite: String,
        #[arg(long, value_enum, hide = true)]
        mutant: Option<Mutant>,
    },
    /// Print the coefficient table of the jet primitives
    Jet { names: Vec<String> },
    /// Emit a random map
    Gen {
        #[arg(long, default_value_t = 1)]
        domain: usize,
        #[arg(long, default_value_t = 1)]
        codomain: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Ok(result) = std::panic::catch_unwind(|| run(&cli)) else {
        return ExitCode::from(1);
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let ring: Semiring = cli.semiring.parse()?;
    let model = match cli.model.as_str() {
        "jet" => ModelKind::Jet(cli.order),
        token => token.parse()?,
    };
    let session = Session::new(ring, model)?;
    match &cli.command {
        Command::Eval { expr, arity } => eval(cli, &session, expr, *arity),
        Command::Verify { suite, mutant } => verify(cli, &session, suite, *mutant),
        Command::Jet { names } => jet_table(cli, &session, names),
        Command::Gen {
            domain,
            codomain,
            degree,
        } => generate(cli, &session, *domain, *codomain, *degree),
    }
}

fn header(cli: &Cli, session: &Session, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("semiring".into(), json!(session.ring().to_string()));
    m.insert("model".into(), json!(session.model().to_string()));
    m.insert("seed".into(), json!(cli.seed));
    m
}

fn emit(doc: serde_json::Map<String, Value>) {
    println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable"));
}

fn eval(cli: &Cli, session: &Session, expr: &str, arity: Option<usize>) -> Outcome {
    let result = session.eval(expr, arity)?;
    match cli.output {
        Output::Text => println!("{result}"),
        Output::Json => {
            let mut doc = header(cli, session, "eval");
            doc.insert("expr".into(), json!(expr));
            doc.insert("result".into(), result.to_json());
            emit(doc);
        }
    }
    Ok(())
}

fn run_suite(session: &Session, suite: Suite, cfg: &CheckConfig, mutant: Option<Mutant>) -> cdc_core::Result<Vec<AxiomReport>> {
    let ring = session.ring();
    match (session.model(), mutant) {
        (ModelKind::Poly, None) => suite.run(&PolyModel::new(ring), cfg),
        (ModelKind::Poly, Some(Mutant::PowerRule)) => suite.run(&PowerRuleMutant::new(ring), cfg),
        (ModelKind::Jet(k), None) => suite.run(&JetModel::new(k)?, cfg),
        (ModelKind::Jet(_), Some(_)) => Err(Error::UnknownModel("mutants exist only for poly".into())),
    }
}

#[derive(Default)]
struct Summary {
    suites: usize,
    skipped: usize,
    clauses: usize,
    holds: usize,
    violated: usize,
    undetermined: usize,
}

impl Summary {
    fn add(&mut self, reports: &[AxiomReport]) {
        self.suites += 1;
        for r in reports {
            self.clauses += 1;
            match r.status {
                Status::Holds => self.holds += 1,
                Status::Violated => self.violated += 1,
                Status::Undetermined => self.undetermined += 1,
            }
        }
    }

    fn pass(&self) -> bool {
        self.holds == self.clauses
    }

    fn to_json(&self) -> Value {
        json!({
            "suites": self.suites,
            "skipped": self.skipped,
            "clauses": self.clauses,
            "holds": self.holds,
            "violated": self.violated,
            "undetermined": self.undetermined,
            "result": if self.pass() { "pass" } else { "fail" },
        })
    }
}

fn verify(cli: &Cli, session: &Session, which: &str, mutant: Option<Mutant>) -> Outcome {
    let suites: Vec<Suite> = match which {
        "all" => Suite::ALL.to_vec(),
        name => vec![name.parse()?],
    };
    let text = cli.output == Output::Text;
    let mut summary = Summary::default();
    let mut docs = Vec::new();
    for suite in suites {
        let cfg = CheckConfig {
            seed: cli.seed,
            samples: cli.samples.unwrap_or(suite.default_samples()),
            k_max: cli.kmax,
            ..CheckConfig::default()
        };
        let skip = suite.needs_nat_inverse() && !session.ring().supports_nat_inverse();
        if skip && which == "all" {
            let reason = session.ring().require_nat_inverse().unwrap_err().to_string();
            summary.skipped += 1;
            if text {
                println!("== {suite} skipped: {reason}");
            }
            docs.push(json!({"suite": suite.name(), "skipped": reason}));
            continue;
        }
        let reports = run_suite(session, suite, &cfg, mutant)?;
        summary.add(&reports);
        if text {
            println!(
                "== {suite} ({}, {}, seed {}, {} samples)",
                session.ring(),
                session.model(),
                cli.seed,
                cfg.samples
            );
            for r in &reports {
                println!("{r}");
            }
            std::io::stdout().flush().ok();
        }
        docs.push(json!({"suite": suite.name(), "samples": cfg.samples, "reports": reports}));
    }
    if text {
        let s = &summary;
        println!(
            "summary suites={} skipped={} clauses={} holds={} violated={} undetermined={} result={}",
            s.suites,
            s.skipped,
            s.clauses,
            s.holds,
            s.violated,
            s.undetermined,
            if s.pass() { "pass" } else { "fail" }
        );
    } else {
        let mut doc = header(cli, session, "verify");
        doc.insert("kmax".into(), json!(cli.kmax));
        doc.insert("suites".into(), Value::Array(docs));
        doc.insert("summary".into(), summary.to_json());
        emit(doc);
    }
    if summary.pass() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn jet_table(cli: &Cli, session: &Session, names: &[String]) -> Outcome {
    let order = match session.model() {
        ModelKind::Jet(k) => k,
        ModelKind::Poly => cli.order,
    };
    let names: Vec<String> = if names.is_empty() {
        PRIMITIVES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    let mut rows = Vec::new();
    for name in &names {
        let jet = jet_primitive(name, order)?;
        let coeffs: Vec<String> = (1..=order as u32).map(|k| jet.coefficient(k).to_string()).collect();
        match cli.output {
            Output::Text => println!("{name}: {}", coeffs.join(", ")),
            Output::Json => rows.push(json!({
                "name": name,
                "coefficients": coeffs,
                "text": jet.to_string(),
                "jet": jet.to_json(),
            })),
        }
    }
    if cli.output == Output::Json {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), json!("jet"));
        m.insert("order".into(), json!(order));
        m.insert("primitives".into(), Value::Array(rows));
        emit(m);
    }
    Ok(())
}

fn generate(cli: &Cli, session: &Session, domain: usize, codomain: usize, degree: usize) -> Outcome {
    let spec = RandomMapSpec::new(session.ring(), domain, codomain, degree, cli.seed);
    let (text, value) = match session.model() {
        ModelKind::Poly => {
            let map = random_poly_map(&spec)?;
            (map.to_string(), json!({"map": map.to_json()}))
        }
        ModelKind::Jet(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let jet = JetModel::new(k)?.random_map(&mut rng, domain, codomain, degree);
            (jet.to_string(), json!({"jet": jet.to_json()}))
        }
    };
    match cli.output {
        Output::Text => println!("{text}"),
        Output::Json => {
            let mut doc = header(cli, session, "gen");
            doc.insert("spec".into(), json!(spec));
            doc.insert("text".into(), json!(text));
            if let Value::Object(extra) = value {
                doc.extend(extra);
            }
            emit(doc);
        }
    }
    Ok(())
}
