//! The `actcode` command line.
//!
//! Exit codes: 0 success or PASS, 1 FAIL, 2 malformed input or failed
//! validation, 3 no winning strategy, 4 code incomplete for the SUT,
//! 5 SUT protocol or i/o failure.

mod check;

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adaptor::{
    serve_lines, AdaptorError, AdaptorSession, InProcessSut, LineSut, Resolver, SutEndpoint, SutError,
};
use crate::code::CodeMap;
use crate::doc::{self, DocError};
use crate::error::Error;
use crate::gen;
use crate::label::{CompatRel, Label};
use crate::lts::Lts;
use crate::operators;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_WINNING: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;
pub const EXIT_SUT: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "actcode",
    version,
    about = "Action codes for transition systems and Mealy machines"
)]
struct Cli {
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print state and transition counts of the result to stderr.
    #[arg(long, global = true)]
    stats: bool,
    /// Seed for generators and simulated SUTs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelArg {
    Identity,
    SameInput,
}

impl From<RelArg> for CompatRel {
    fn from(r: RelArg) -> Self {
        match r {
            RelArg::Identity => CompatRel::Identity,
            RelArg::SameInput => CompatRel::SameInput,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contract a concrete system along a code.
    Contract {
        #[arg(long)]
        code: PathBuf,
        machine: PathBuf,
    },
    /// Refine an abstract system along a code.
    Refine {
        #[arg(long)]
        code: PathBuf,
        machine: PathBuf,
    },
    /// Concretize an abstract system along a code, completing with chaos.
    Concretize {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value = "identity")]
        rel: RelArg,
        machine: PathBuf,
    },
    /// Compose two codes: OUTER maps B to A-words, INNER maps C to B-words.
    Compose { outer: PathBuf, inner: PathBuf },
    /// Check a property or law and print PASS or FAIL with a witness.
    Check {
        #[command(subcommand)]
        check: check::CheckCommand,
    },
    /// Run the adaptor between abstract inputs and a system under test.
    Adaptor(AdaptorArgs),
    /// Generate a random instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Convert a code to its tree form.
    ToTree { code: PathBuf },
    /// Convert a code tree back to its map form.
    ToMap { tree: PathBuf },
    /// Serve a Mealy machine over the line protocol on stdin and stdout.
    SutServe {
        machine: PathBuf,
        /// Scripted choices for output nondeterminism instead of the seed.
        #[arg(long)]
        script: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct AdaptorArgs {
    #[arg(long)]
    code: PathBuf,
    /// Simulate this Mealy machine in-process.
    #[arg(long, group = "sut")]
    sut_file: Option<PathBuf>,
    /// Run this shell command and talk to it over stdin and stdout.
    #[arg(long, group = "sut")]
    sut_exec: Option<String>,
    /// Connect to a SUT at host:port.
    #[arg(long, group = "sut")]
    sut_tcp: Option<String>,
    /// Whitespace-separated choice indices resolving output nondeterminism
    /// of an in-process SUT.
    #[arg(long, requires = "sut_file")]
    script: Option<PathBuf>,
    /// Abstract inputs, one per line; stdin if absent.
    #[arg(long)]
    inputs: Option<PathBuf>,
    /// Do not send RESET to an external SUT before the session.
    #[arg(long)]
    no_reset: bool,
    /// Per-exchange timeout for external SUTs, in milliseconds.
    #[arg(long, default_value_t = 5000)]
    timeout_ms: u64,
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Random LTS over atomic labels.
    Lts {
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        labels: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        deterministic: bool,
    },
    /// Random Mealy machine.
    Mealy {
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        inputs: usize,
        #[arg(long, default_value_t = 2)]
        outputs: usize,
        #[arg(long)]
        input_enabled: bool,
        #[arg(long)]
        output_deterministic: bool,
    },
    /// Random prefix-free code.
    Code {
        /// Number of abstract labels.
        #[arg(long = "abstract", default_value_t = 3)]
        abstract_labels: usize,
        /// Number of concrete labels.
        #[arg(long, default_value_t = 2)]
        concrete: usize,
        #[arg(long, default_value_t = 3)]
        maxlen: usize,
        /// Generate a determinate, winning Mealy code for adaptors instead;
        /// `--abstract` then counts abstract inputs.
        #[arg(long)]
        adaptor: bool,
        #[arg(long, default_value_t = 2)]
        outputs: usize,
    },
}

/// A command failure with its exit code and machine-readable kind.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            message: message.into(),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidSymbol(_) => "invalid-symbol",
        Error::InvalidLabel(_) => "invalid-label",
        Error::MixedLabels(..) => "mixed-labels",
        Error::UnknownInitial(_) => "unknown-initial",
        Error::LabelNotInAlphabet { .. } => "label-not-in-alphabet",
        Error::AlphabetMismatch(_) => "alphabet-mismatch",
        Error::NotDeterministic => "not-deterministic",
        Error::EmptyWord(_) => "empty-word",
        Error::PrefixClash(..) => "prefix-clash",
        Error::DuplicateEntry(_) => "duplicate-entry",
        Error::InvalidTree(_) => "invalid-tree",
        Error::LetterNotInSource { .. } => "letter-not-in-source",
        Error::Inconclusive(_) => "inconclusive",
        Error::NotMealy(_) => "not-mealy",
        Error::NotInputEnabled { .. } => "not-input-enabled",
        Error::NotDeterminate { .. } => "not-determinate",
        Error::NotWinning(_) => "not-winning",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotWinning(_) => EXIT_NOT_WINNING,
            _ => EXIT_INVALID,
        };
        Failure::new(code, error_kind(&e), e.to_string())
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Json(m) => Failure::new(EXIT_INVALID, "json", m),
            DocError::Schema(m) => Failure::new(EXIT_INVALID, "schema", m),
            DocError::Invalid(e) => e.into(),
        }
    }
}

impl From<SutError> for Failure {
    fn from(e: SutError) -> Self {
        Failure::new(EXIT_SUT, "sut", e.to_string())
    }
}

impl From<AdaptorError> for Failure {
    fn from(e: AdaptorError) -> Self {
        match e {
            AdaptorError::Invalid(e) => e.into(),
            AdaptorError::NotWinning(_) => Failure::new(EXIT_NOT_WINNING, "not-winning", e.to_string()),
            AdaptorError::CodeIncomplete { .. } => Failure::new(EXIT_INCOMPLETE, "code-incomplete", e.to_string()),
            AdaptorError::Sut(e) => e.into(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INVALID, "io", format!("{}: {e}", path.display())))
}

pub(crate) fn load_lts(path: &Path) -> Result<Lts, Failure> {
    doc::parse_lts(&read_file(path)?).map_err(|e| with_path(e.into(), path))
}

pub(crate) fn load_code(path: &Path) -> Result<CodeMap, Failure> {
    doc::parse_any_code(&read_file(path)?).map_err(|e| with_path(e.into(), path))
}

fn with_path(mut f: Failure, path: &Path) -> Failure {
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

/// Where the primary output goes.
pub(crate) struct Output {
    target: Option<PathBuf>,
    stats: bool,
}

impl Output {
    pub(crate) fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.target {
            Some(p) => {
                fs::write(p, text).map_err(|e| Failure::new(EXIT_INVALID, "io", format!("{}: {e}", p.display())))
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| Failure::new(EXIT_INVALID, "io", e.to_string()))
            }
        }
    }

    fn writer(&self) -> Result<Box<dyn Write>, Failure> {
        match &self.target {
            Some(p) => fs::File::create(p)
                .map(|f| Box::new(f) as Box<dyn Write>)
                .map_err(|e| Failure::new(EXIT_INVALID, "io", format!("{}: {e}", p.display()))),
            None => Ok(Box::new(io::stdout())),
        }
    }

    fn lts(&self, m: &Lts) -> CmdResult {
        if self.stats {
            eprintln!("states: {}, transitions: {}", m.states().len(), m.transitions().len());
        }
        self.write(&doc::render_lts(m))?;
        Ok(EXIT_PASS)
    }

    fn code(&self, c: &CodeMap) -> CmdResult {
        if self.stats {
            eprintln!("entries: {}", c.len());
        }
        self.write(&doc::render_code(c))?;
        Ok(EXIT_PASS)
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error[{}]: {}", f.kind, f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> CmdResult {
    let out = Output {
        target: cli.out,
        stats: cli.stats,
    };
    match cli.command {
        Command::Contract { code, machine } => out.lts(&operators::contract(&load_code(&code)?, &load_lts(&machine)?)?),
        Command::Refine { code, machine } => out.lts(&operators::refine(&load_code(&code)?, &load_lts(&machine)?)?),
        Command::Concretize { code, rel, machine } => out.lts(&operators::concretize(
            &load_code(&code)?,
            &rel.into(),
            &load_lts(&machine)?,
        )?),
        Command::Compose { outer, inner } => out.code(&load_code(&outer)?.compose(&load_code(&inner)?)?),
        Command::Check { check } => check::run(check, &out),
        Command::Adaptor(args) => adaptor(args, &out, cli.seed),
        Command::Gen { kind } => generate(kind, &out, cli.seed),
        Command::ToTree { code } => {
            let tree = load_code(&code)?.to_tree();
            if out.stats {
                eprintln!("nodes: {}", tree.lts().states().len());
            }
            out.write(&doc::render_tree(&tree))?;
            Ok(EXIT_PASS)
        }
        Command::ToMap { tree } => {
            let text = read_file(&tree)?;
            out.code(&doc::parse_tree(&text).map_err(|e| with_path(e.into(), &tree))?.to_map())
        }
        Command::SutServe { machine, script } => {
            let m = load_lts(&machine)?;
            let resolver = match script {
                Some(p) => Resolver::scripted(parse_script(&read_file(&p)?)?),
                None => Resolver::seeded(cli.seed),
            };
            let mut sut = InProcessSut::new(m, resolver)?;
            let stdin = io::stdin();
            serve_lines(&mut sut, stdin.lock(), io::stdout())
                .map_err(|e| Failure::new(EXIT_SUT, "io", e.to_string()))?;
            Ok(EXIT_PASS)
        }
    }
}

fn parse_script(text: &str) -> Result<Vec<usize>, Failure> {
    text.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Failure::new(EXIT_INVALID, "script", format!("bad choice index {t:?}")))
        })
        .collect()
}

fn adaptor(args: AdaptorArgs, out: &Output, seed: u64) -> CmdResult {
    let tree = load_code(&args.code)?.to_tree();
    let timeout = Duration::from_millis(args.timeout_ms);
    let sut_io = |e: io::Error| Failure::new(EXIT_SUT, "sut", e.to_string());
    let (sut, external): (Box<dyn SutEndpoint>, bool) = if let Some(p) = &args.sut_file {
        let resolver = match &args.script {
            Some(s) => Resolver::scripted(parse_script(&read_file(s)?)?),
            None => Resolver::seeded(seed),
        };
        (Box::new(InProcessSut::new(load_lts(p)?, resolver)?), false)
    } else if let Some(cmd) = &args.sut_exec {
        (Box::new(LineSut::spawn(cmd, timeout).map_err(sut_io)?), true)
    } else if let Some(addr) = &args.sut_tcp {
        (Box::new(LineSut::connect(addr, timeout).map_err(sut_io)?), true)
    } else {
        return Err(Failure::new(
            EXIT_INVALID,
            "usage",
            "one of --sut-file, --sut-exec or --sut-tcp is required",
        ));
    };
    let mut session = AdaptorSession::new(tree, sut)?;
    if external && !args.no_reset {
        session.sut_mut().reset()?;
    }
    let input: Box<dyn BufRead> = match &args.inputs {
        Some(p) => {
            let f = fs::File::open(p).map_err(|e| Failure::new(EXIT_INVALID, "io", format!("{}: {e}", p.display())))?;
            Box::new(BufReader::new(f))
        }
        None => Box::new(BufReader::new(io::stdin())),
    };
    let mut sink = out.writer()?;
    let mut printed = 0;
    let mut flush =
        |session: &AdaptorSession<Box<dyn SutEndpoint>>, sink: &mut Box<dyn Write>| -> Result<(), Failure> {
            for e in &session.transcript()[printed..] {
                writeln!(sink, "{e}").map_err(|e| Failure::new(EXIT_INVALID, "io", e.to_string()))?;
            }
            printed = session.transcript().len();
            sink.flush()
                .map_err(|e| Failure::new(EXIT_INVALID, "io", e.to_string()))
        };
    for line in input.lines() {
        let line = line.map_err(|e| Failure::new(EXIT_INVALID, "io", e.to_string()))?;
        let x = line.trim();
        if x.is_empty() {
            continue;
        }
        let result = session.handle(x);
        flush(&session, &mut sink)?;
        result?;
    }
    Ok(EXIT_PASS)
}

fn generate(kind: GenKind, out: &Output, seed: u64) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positive = |n: usize, what: &str| {
        if n == 0 {
            Err(Failure::new(EXIT_INVALID, "usage", format!("{what} must be positive")))
        } else {
            Ok(())
        }
    };
    match kind {
        GenKind::Lts {
            states,
            labels,
            density,
            deterministic,
        } => {
            positive(states, "--states")?;
            positive(labels, "--labels")?;
            if !(0.0..=1.0).contains(&density) {
                return Err(Failure::new(EXIT_INVALID, "usage", "--density must be within [0, 1]"));
            }
            let alphabet = gen::atomic_alphabet(labels);
            let used: Vec<Label> = alphabet.iter().cloned().collect();
            let m = if deterministic {
                gen::random_deterministic_lts(&mut rng, states, &alphabet, &used, density)
            } else {
                gen::random_lts(&mut rng, states, &alphabet, &used, density)
            };
            out.lts(&m)
        }
        GenKind::Mealy {
            states,
            inputs,
            outputs,
            input_enabled,
            output_deterministic,
        } => {
            positive(states, "--states")?;
            positive(inputs, "--inputs")?;
            positive(outputs, "--outputs")?;
            let (i, o) = gen::io_symbols(inputs, outputs);
            let opts = gen::MealyOptions {
                input_enabled,
                output_deterministic,
            };
            out.lts(&gen::random_mealy(&mut rng, states, &i, &o, opts))
        }
        GenKind::Code {
            abstract_labels,
            concrete,
            maxlen,
            adaptor,
            outputs,
        } => {
            positive(abstract_labels, "--abstract")?;
            positive(concrete, "--concrete")?;
            positive(maxlen, "--maxlen")?;
            if adaptor {
                positive(outputs, "--outputs")?;
                if abstract_labels > concrete {
                    return Err(Failure::new(
                        EXIT_INVALID,
                        "usage",
                        "--abstract may not exceed --concrete for adaptor codes",
                    ));
                }
                let (i, o) = gen::io_symbols(concrete, outputs);
                let xs: Vec<String> = (0..abstract_labels).map(|n| format!("X{n}")).collect();
                out.code(&gen::random_adaptor_code(&mut rng, &i, &o, &xs, maxlen))
            } else {
                let source = gen::atomic_alphabet(concrete);
                let target = (0..abstract_labels).map(|n| Label::Atomic(format!("B{n}"))).collect();
                out.code(&gen::random_code(&mut rng, &source, &target, abstract_labels, maxlen))
            }
        }
    }
}
