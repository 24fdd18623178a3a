//! `lexperm`: command line access to every pipeline in the `lexperm` crate.
//!
//! Inputs are read from files (or stdin for `-` / a missing path); results go to
//! stdout as text or, with `--format json`, one JSON object per line. Failures
//! print `error[<code>]: <message>` on stderr and exit with status 2.

mod output;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use lexperm::circuit::{random_circuit, FlipInstance};
use lexperm::cnf::{build_formula, check_symmetry, local_min_solution, parse_dimacs};
use lexperm::dcr::{coloring_to_dcr, dcr_to_globalmin1, decode_coloring, DcrInstance, Graph};
use lexperm::one_perm::{local_min_one_perm, orbit_min_one_perm};
use lexperm::search::{is_local_min_left, verify_local_opt, verify_local_opt_raw};
use lexperm::{
    BitString, Error, GeneratorSet, LocalMinInstance, Permutation, PrioritizedBitString,
    PriorityOrder, ReducedInstance, SearchOptions, SearchState, Word,
};

use output::Out;

#[derive(Parser, Debug)]
#[command(
    name = "lexperm",
    version,
    about = "Lexicographic minimization under permutation groups"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by all subcommands.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Seed for subcommands that generate random data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Step cap for local search walks.
    #[arg(long, global = true, default_value_t = lexperm::search::DEFAULT_MAX_STEPS, value_parser = positive_usize)]
    max_steps: usize,
    /// Largest orbit enumerated by `orbit`.
    #[arg(long, global = true, default_value_t = lexperm::perm::DEFAULT_ORBIT_CAP, value_parser = positive_usize)]
    orbit_cap: usize,
    /// Largest lcm of moduli searched by `dcr solve`.
    #[arg(long, global = true, default_value_t = lexperm::dcr::DEFAULT_LCM_CAP, value_parser = positive_u64)]
    lcm_cap: u64,
    /// Largest permutation order scanned by `orbit-min` and `dcr to-perm`.
    #[arg(long, global = true, default_value_t = lexperm::dcr::DEFAULT_LCM_CAP, value_parser = positive_u64)]
    order_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local minimum of x∘π^k for a single permutation.
    OnePerm {
        /// Bitstring such as 00100001.
        #[arg(long)]
        string: String,
        /// Permutation in 1-based cycle notation, e.g. "(1 2 5)(3 4)".
        #[arg(long)]
        perm: String,
    },
    /// Global minimum of x∘π^t over all t, by exhaustive scan.
    OrbitMin {
        #[arg(long)]
        string: String,
        #[arg(long)]
        perm: String,
        /// Priority order: 1-based positions, most significant first.
        #[arg(long)]
        order: Option<String>,
    },
    /// Size of the orbit of an instance's start string under its generators.
    Orbit {
        /// Instance file (`N <n> K <k>`, `start`, `order`, `name = cycles` lines).
        instance: Option<PathBuf>,
    },
    /// Disjunctive Chinese remainder instances.
    #[command(subcommand)]
    Dcr(DcrCommand),
    /// FLIP on NAND circuits.
    #[command(subcommand)]
    Flip(FlipCommand),
    /// Reduction from FLIP to local minimization under permutations.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Standard algorithm on a generic instance file.
    Search(SearchArgs),
    /// Check local optimality of a word or a raw permutation.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Word file (`word a b c`).
        #[arg(long, conflicts_with = "perm")]
        word: Option<PathBuf>,
        /// Permutation in cycle notation; membership is checked first.
        #[arg(long)]
        perm: Option<String>,
    },
    /// CNF realization of the reduction.
    #[command(subcommand)]
    Cnf(CnfCommand),
    /// Run all acceptance checks.
    Selftest {
        #[arg(long, default_value_t = 1, value_parser = positive_usize)]
        jobs: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DcrCommand {
    /// Smallest t avoiding every forbidden residue. Input lines: `m: s1 s2 ...`.
    Solve { file: Option<PathBuf> },
    /// 3-coloring instance (DIMACS `p edge n m` / `e u v`) to DCR.
    FromGraph { file: Option<PathBuf> },
    /// DCR to a single-permutation instance with forbidden positions.
    ToPerm {
        file: Option<PathBuf>,
        /// Also scan the orbit for the first string that is zero on every
        /// forbidden position.
        #[arg(long)]
        scan: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FlipCommand {
    /// Evaluate a netlist (`inputs n`, `gate <id> NAND <src> <src>`, `outputs g<id> ...`).
    Eval {
        netlist: PathBuf,
        #[command(flatten)]
        input: InputArg,
    },
    /// Best-improvement walk over single-bit flips.
    Greedy {
        netlist: PathBuf,
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        trace: bool,
    },
    /// Report whether the input is a FLIP local minimum.
    Check {
        netlist: PathBuf,
        #[command(flatten)]
        input: InputArg,
    },
    /// Print a random netlist (uses --seed).
    Random {
        #[arg(long)]
        inputs: usize,
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value_t = 1)]
        outputs: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArg {
    /// Input bits, e.g. 011.
    #[arg(long)]
    input: Option<String>,
    /// File holding `input <bits>` or just the bits.
    #[arg(long)]
    input_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// Build the reduced instance file from a netlist.
    Build {
        netlist: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Standard algorithm on a reduced instance.
    Search(SearchArgs),
    /// FLIP input encoded by a word.
    Map {
        instance: PathBuf,
        word: Option<PathBuf>,
    },
    /// Word over the sigma generators reaching a FLIP input.
    Embed {
        instance: PathBuf,
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Instance file.
    #[arg(long = "instance", value_name = "FILE")]
    instance_flag: Option<PathBuf>,
    #[arg(value_name = "INSTANCE", conflicts_with = "instance_flag")]
    instance: Option<PathBuf>,
    #[arg(long)]
    start_word: Option<PathBuf>,
    /// Print every visited string.
    #[arg(long)]
    trace: bool,
    /// Use neighbors g∘π instead of π∘g (experimental).
    #[arg(long)]
    left_action: bool,
}

#[derive(Subcommand, Debug)]
enum CnfCommand {
    /// Write the DIMACS formula and its symmetry sidecar.
    Build {
        netlist: Option<PathBuf>,
        /// DIMACS output path; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Symmetry sidecar path; defaults to the output path with extension `sym`.
        #[arg(long)]
        sym: Option<PathBuf>,
    },
    /// Check every generator of a sidecar against a formula.
    CheckSym { cnf: PathBuf, sym: PathBuf },
    /// Greedy descent over the symmetries from the stored start assignment.
    Localmin {
        cnf: PathBuf,
        sym: PathBuf,
        /// Start assignment; defaults to the `c start` line.
        #[arg(long)]
        start: Option<String>,
        /// Netlist used to decode the C_0 input of the result.
        #[arg(long)]
        netlist: Option<PathBuf>,
    },
}

/// Errors of the front end: library errors plus a few of its own.
#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Io(_) => "IoError",
            CliError::Usage(_) => "UsageError",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_input(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_bits(text: &str) -> CliResult<BitString> {
    let t = text.trim();
    let t = t.strip_prefix("input").unwrap_or(t).trim();
    Ok(t.parse::<BitString>()?)
}

fn read_bits(arg: &InputArg) -> CliResult<BitString> {
    match (&arg.input, &arg.input_file) {
        (Some(s), _) => parse_bits(s),
        (None, Some(p)) => {
            let text = read_input(Some(p))?;
            let line = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| {
                    l.starts_with("input")
                        || (!l.is_empty() && l.chars().all(|c| c == '0' || c == '1'))
                })
                .ok_or_else(|| CliError::Usage(format!("{}: no input line", p.display())))?;
            parse_bits(line)
        }
        (None, None) => Err(CliError::Usage("an input is required".into())),
    }
}

/// Words may come from the output of `search`; only its `word` line counts.
fn parse_word_file(text: &str) -> Word {
    let word_lines: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().starts_with("word"))
        .collect();
    if word_lines.is_empty() {
        Word::parse(text)
    } else {
        Word::parse(&word_lines.join("\n"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_target(false)
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let out = Out::new(cli.config.format == Format::Json);
    match run(&cli.command, &cli.config, &out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.message());
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Command, cfg: &RunConfig, out: &Out) -> CliResult<ExitCode> {
    match cmd {
        Command::OnePerm { string, perm } => {
            let x: BitString = string.parse()?;
            let p = Permutation::parse_cycles(perm, x.len())?;
            let r = local_min_one_perm(&x, &p)?;
            let y = r.string(&x);
            let cycle = r.cycle_id.map_or("none".to_string(), |c| c.to_string());
            out.emit(
                format!(
                    "k={}\ncycle={cycle}\nstring={y}\nwitness={}",
                    r.exponent, r.witness
                ),
                json!({"kind": "one-perm", "k": r.exponent, "cycle": r.cycle_id,
                       "string": y.to_string(), "witness": r.witness.to_string()}),
            );
        }
        Command::OrbitMin {
            string,
            perm,
            order,
        } => {
            let x: BitString = string.parse()?;
            let p = Permutation::parse_cycles(perm, x.len())?;
            let order = match order {
                Some(o) => PriorityOrder::parse(o)?,
                None => PriorityOrder::identity(x.len()),
            };
            let best =
                orbit_min_one_perm(&PrioritizedBitString::new(x, order)?, &p, cfg.order_cap)?;
            out.emit(
                format!("t={}\nstring={}", best.exponent, best.string),
                json!({"kind": "orbit-min", "t": best.exponent, "string": best.string.to_string()}),
            );
        }
        Command::Orbit { instance } => {
            let inst = LocalMinInstance::parse(&read_input(instance.as_deref())?)?;
            let orbit = inst.gens.orbit_of_string(&inst.x.bits, cfg.orbit_cap)?;
            out.emit(
                format!("orbit size {}", orbit.len()),
                json!({"kind": "orbit", "size": orbit.len()}),
            );
        }
        Command::Dcr(c) => run_dcr(c, cfg, out)?,
        Command::Flip(c) => run_flip(c, cfg, out)?,
        Command::Reduce(c) => run_reduce(c, cfg, out)?,
        Command::Search(args) => run_search(args, cfg, out)?,
        Command::Verify {
            instance,
            word,
            perm,
        } => {
            let inst = LocalMinInstance::parse(&read_input(Some(instance))?)?;
            let ok = match (word, perm) {
                (_, Some(p)) => {
                    let p = Permutation::parse_cycles(p, inst.gens.degree())?;
                    verify_local_opt_raw(&inst.x, &inst.gens, &p)?
                }
                (w, None) => {
                    let w = parse_word_file(&read_input(w.as_deref())?);
                    verify_local_opt(&inst.x, &inst.gens, &w)?
                }
            };
            out.emit(
                if ok { "LOCAL_OPT" } else { "NOT_LOCAL_OPT" }.to_string(),
                json!({"kind": "verify", "local_opt": ok}),
            );
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Cnf(c) => return run_cnf(c, cfg, out),
        Command::Selftest { jobs } => {
            let outcomes = lexperm_selftest::run_all(*jobs);
            for o in &outcomes {
                out.emit(
                    o.to_string(),
                    json!({"kind": "criterion", "id": o.id, "name": o.name, "passed": o.passed,
                           "seconds": o.elapsed.as_secs_f64(), "limit": o.limit.as_secs(),
                           "detail": o.detail}),
                );
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            out.emit(
                format!("{} passed, {failed} failed", outcomes.len() - failed),
                json!({"kind": "summary", "passed": outcomes.len() - failed, "failed": failed}),
            );
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_dcr(cmd: &DcrCommand, cfg: &RunConfig, out: &Out) -> CliResult {
    match cmd {
        DcrCommand::Solve { file } => {
            let text = read_input(file.as_deref())?;
            let inst = DcrInstance::parse(&text)?;
            let primes = primes_comment(&text);
            match inst.solve_bruteforce(cfg.lcm_cap)? {
                Some(t) => {
                    let mut lines = format!("SAT t={t}");
                    let coloring = primes.map(|p| {
                        decode_coloring(t, &p)
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                    });
                    if let Some(c) = &coloring {
                        lines.push_str(&format!("\ncoloring {}", c.join(" ")));
                    }
                    out.emit(
                        lines,
                        json!({"kind": "dcr-solve", "sat": true, "t": t, "coloring": coloring}),
                    );
                }
                None => out.emit("UNSAT".into(), json!({"kind": "dcr-solve", "sat": false})),
            }
        }
        DcrCommand::FromGraph { file } => {
            let g = Graph::parse_dimacs(&read_input(file.as_deref())?)?;
            let red = coloring_to_dcr(&g)?;
            let primes: Vec<String> = red.primes.iter().map(u64::to_string).collect();
            let text = format!("# primes {}\n{}", primes.join(" "), red.instance);
            out.emit(
                text.trim_end().to_string(),
                json!({"kind": "dcr-instance", "primes": red.primes, "text": red.instance.to_string()}),
            );
        }
        DcrCommand::ToPerm { file, scan } => {
            let inst = DcrInstance::parse(&read_input(file.as_deref())?)?;
            let red = dcr_to_globalmin1(&inst);
            let forbidden: Vec<usize> = red.forbidden.iter().map(|p| p + 1).collect();
            let witness = if *scan {
                Some(red.zero_prefix_witness(cfg.order_cap)?)
            } else {
                None
            };
            let mut text = format!(
                "N {} K 1\nstart {}\norder {}\npi = {}\n# forbidden {}",
                red.string.len(),
                red.string,
                red.order,
                red.perm,
                forbidden
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            if let Some(w) = witness {
                text.push_str(&format!(
                    "\n# witness {}",
                    w.map_or("none".to_string(), |t| t.to_string())
                ));
            }
            out.emit(
                text,
                json!({"kind": "dcr-perm", "string": red.string.to_string(), "perm": red.perm.to_string(),
                       "order": red.order.to_string(), "forbidden": forbidden, "witness": witness.flatten()}),
            );
        }
    }
    Ok(())
}

fn primes_comment(text: &str) -> Option<Vec<u64>> {
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?.trim().strip_prefix("primes")?;
        rest.split_whitespace().map(|t| t.parse().ok()).collect()
    })
}

fn load_netlist(path: Option<&Path>) -> CliResult<FlipInstance> {
    Ok(FlipInstance::parse_netlist(&read_input(path)?)?)
}

fn run_flip(cmd: &FlipCommand, cfg: &RunConfig, out: &Out) -> CliResult {
    match cmd {
        FlipCommand::Eval { netlist, input } => {
            let c = load_netlist(Some(netlist))?;
            let x = read_bits(input)?;
            let e = c.eval(&x)?;
            let gates: String = e
                .gate_values
                .iter()
                .map(|&v| if v { '1' } else { '0' })
                .collect();
            out.emit(
                format!("output {}\ngates {gates}", e.outputs),
                json!({"kind": "flip-eval", "output": e.outputs.to_string(), "gates": gates}),
            );
        }
        FlipCommand::Greedy {
            netlist,
            input,
            trace,
        } => {
            let c = load_netlist(Some(netlist))?;
            let run = c.flip_greedy(&read_bits(input)?, cfg.max_steps)?;
            let mut text = format!(
                "input {}\nstatus {}\nsteps {}",
                run.input,
                run.status,
                run.steps()
            );
            if *trace {
                for x in &run.trace {
                    text.push_str(&format!("\ntrace {x}"));
                }
            }
            let trace_json: Vec<String> = run.trace.iter().map(BitString::to_string).collect();
            out.emit(
                text,
                json!({"kind": "flip-greedy", "input": run.input.to_string(), "status": run.status.to_string(),
                       "steps": run.steps(), "trace": trace_json}),
            );
        }
        FlipCommand::Check { netlist, input } => {
            let c = load_netlist(Some(netlist))?;
            let x = read_bits(input)?;
            match c.flip_local_check(&x)? {
                None => out.emit(
                    "LOCAL_MIN".into(),
                    json!({"kind": "flip-check", "local_min": true}),
                ),
                Some(j) => out.emit(
                    format!("IMPROVABLE j={}", j + 1),
                    json!({"kind": "flip-check", "local_min": false, "j": j + 1}),
                ),
            }
        }
        FlipCommand::Random {
            inputs,
            gates,
            outputs,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let c = random_circuit(&mut rng, *inputs, *gates, *outputs)?;
            out.emit(
                c.to_netlist().trim_end().to_string(),
                json!({"kind": "netlist", "text": c.to_netlist()}),
            );
        }
    }
    Ok(())
}

fn run_reduce(cmd: &ReduceCommand, cfg: &RunConfig, out: &Out) -> CliResult {
    match cmd {
        ReduceCommand::Build { netlist, out: path } => {
            let inst = ReducedInstance::build(&load_netlist(netlist.as_deref())?);
            let text = inst.to_instance_file();
            match path {
                Some(p) => write_file(p, &text)?,
                None => out.emit(
                    text.trim_end().to_string(),
                    json!({"kind": "reduced-instance", "text": text}),
                ),
            }
        }
        ReduceCommand::Search(args) => run_search(args, cfg, out)?,
        ReduceCommand::Map { instance, word } => {
            let inst = ReducedInstance::from_instance_file(&read_input(Some(instance))?)?;
            let w = parse_word_file(&read_input(word.as_deref())?);
            let x = inst.map_solution(&w)?;
            out.emit(
                format!("input {x}"),
                json!({"kind": "flip-input", "input": x.to_string()}),
            );
        }
        ReduceCommand::Embed { instance, input } => {
            let inst = ReducedInstance::from_instance_file(&read_input(Some(instance))?)?;
            let w = inst.embed_flip_solution(&read_bits(input)?)?;
            out.emit(w.to_string(), json!({"kind": "word", "word": w.letters()}));
        }
    }
    Ok(())
}

fn run_search(args: &SearchArgs, cfg: &RunConfig, out: &Out) -> CliResult {
    let path = args.instance_flag.as_ref().or(args.instance.as_ref());
    let inst = LocalMinInstance::parse(&read_input(path.map(PathBuf::as_path))?)?;
    let start = match &args.start_word {
        Some(p) => parse_word_file(&read_input(Some(p))?),
        None => Word::new(),
    };
    let opts = SearchOptions {
        max_steps: cfg.max_steps,
        left_action: args.left_action,
        record_trace: args.trace || out.is_json(),
    };
    let s = lexperm::standard_algorithm(&inst.x, &inst.gens, &start, &opts)?;
    let local = if args.left_action {
        is_local_min_left(&inst.x, &inst.gens, &s.current)?
    } else {
        verify_local_opt(&inst.x, &inst.gens, &s.word)?
    };
    emit_search(&s, local, args.trace, out);
    Ok(())
}

fn emit_search(s: &SearchState, verified: bool, trace: bool, out: &Out) {
    let mut text = format!(
        "{}\nstring {}\nstatus {}\nsteps {}\nverified {verified}",
        s.word, s.string, s.status, s.steps
    );
    if trace {
        for y in &s.trace {
            text.push_str(&format!("\ntrace {y}"));
        }
    }
    let trace_json: Vec<String> = s.trace.iter().map(BitString::to_string).collect();
    out.emit(
        text,
        json!({"kind": "search", "word": s.word.letters(), "string": s.string.to_string(),
               "status": s.status.to_string(), "steps": s.steps, "verified": verified,
               "permutation": s.current.to_string(), "trace": trace_json}),
    );
}

fn run_cnf(cmd: &CnfCommand, cfg: &RunConfig, out: &Out) -> CliResult<ExitCode> {
    match cmd {
        CnfCommand::Build {
            netlist,
            out: path,
            sym,
        } => {
            let f = build_formula(&load_netlist(netlist.as_deref())?);
            let dimacs = f.to_dimacs();
            let sym_path = sym
                .clone()
                .or_else(|| path.as_ref().map(|p| p.with_extension("sym")));
            match path {
                Some(p) => write_file(p, &dimacs)?,
                None => out.emit(
                    dimacs.trim_end().to_string(),
                    json!({"kind": "dimacs", "text": dimacs, "symmetries": f.symmetry_file()}),
                ),
            }
            if let Some(p) = sym_path {
                write_file(&p, &f.symmetry_file())?;
            }
        }
        CnfCommand::CheckSym { cnf, sym } => {
            let file = parse_dimacs(&read_input(Some(cnf))?)?;
            let gens = GeneratorSet::parse(&read_input(Some(sym))?, file.cnf.num_vars)?;
            let mut failed = 0;
            for (name, p) in gens.iter() {
                let ok = check_symmetry(&file.cnf, p)?;
                failed += !ok as usize;
                out.emit(
                    format!("{name} {}", if ok { "OK" } else { "FAIL" }),
                    json!({"kind": "symmetry", "name": name, "ok": ok}),
                );
            }
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        CnfCommand::Localmin {
            cnf,
            sym,
            start,
            netlist,
        } => {
            let file = parse_dimacs(&read_input(Some(cnf))?)?;
            let gens = GeneratorSet::parse(&read_input(Some(sym))?, file.cnf.num_vars)?;
            let alpha = match (start, &file.start) {
                (Some(s), _) => s.parse::<BitString>()?,
                (None, Some(s)) => s.clone(),
                (None, None) => {
                    return Err(CliError::Usage(
                        "no start assignment: pass --start or a `c start` line".into(),
                    ))
                }
            };
            let priority = file
                .priority
                .clone()
                .unwrap_or_else(|| PriorityOrder::identity(file.cnf.num_vars));
            let opts = SearchOptions {
                max_steps: cfg.max_steps,
                ..SearchOptions::default()
            };
            let s = local_min_solution(&file.cnf, &gens, &priority, &alpha, &opts)?;
            let decoded = match netlist {
                Some(p) => {
                    let f = build_formula(&load_netlist(Some(p))?);
                    if f.cnf != file.cnf {
                        return Err(CliError::Usage("netlist does not match the formula".into()));
                    }
                    Some(f.decode_input(&s.string))
                }
                None => None,
            };
            let mut text = format!(
                "assignment {}\nstatus {}\nsteps {}\n{}",
                s.string, s.status, s.steps, s.word
            );
            if let Some(x) = &decoded {
                text.push_str(&format!("\ninput {x}"));
            }
            out.emit(
                text,
                json!({"kind": "cnf-localmin", "assignment": s.string.to_string(), "status": s.status.to_string(),
                       "steps": s.steps, "word": s.word.letters(), "input": decoded.map(|x| x.to_string())}),
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
