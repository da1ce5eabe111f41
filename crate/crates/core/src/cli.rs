//! Command-line front end.
//!
//! Every command reads JSON state files and writes JSON to `-o FILE`, or to
//! standard output when `-o` is omitted. `-` as an input path reads standard
//! input, so commands compose in pipelines:
//!
//! ```text
//! trisect new from-heegaard 2 | trisect balance - -o balanced.json
//! ```
//!
//! Human-readable lines go to standard output when the JSON goes to a file,
//! and to standard error otherwise. Exit codes: 0 success, 1 domain error,
//! 2 usage, I/O or format error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::catalogue::{construct, ConstructorKind, FORMAL_DESTAB_NOTE};
use crate::error::Error;
use crate::explorer::{self, ExploreOptions, MoveGraphNode};
use crate::files::{script_from_json, script_to_json, state_from_json, state_to_json};
use crate::moves::{apply_destabilization, apply_stabilization, balance, build_heegaard, fake_heegaard_stab};
use crate::planner::{plan_common_stabilization, replay};
use crate::profile::Handlebody;
use crate::script::{Arc, DestabMove, MoveScript, StabMove};
use crate::state::TrisectionState;

#[derive(Debug, Parser)]
#[command(name = "trisect", version, about = "Trisection move calculus on the parameter shadow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a state from the catalogue.
    New {
        /// trivial, from-heegaard, split-heegaard, open-book, tunnel,
        /// connect-sum, surface-bundle or koda-ozawa.
        kind: String,
        params: Vec<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Print profile, genera, feasibility, balancedness and triviality.
    Show { file: PathBuf },
    /// Stabilize one handlebody along an arc.
    Stab {
        file: PathBuf,
        #[arg(long, value_parser = parse_handlebody)]
        handlebody: Handlebody,
        /// same:cK or distinct:cK,cL
        #[arg(long)]
        arc: Arc,
        #[command(flatten)]
        out: Output,
    },
    /// Formal inverse of a stabilization; `--arc` names the components consumed.
    Destab {
        file: PathBuf,
        #[arg(long, value_parser = parse_handlebody)]
        handlebody: Handlebody,
        #[arg(long)]
        arc: Arc,
        #[command(flatten)]
        out: Output,
    },
    /// Stabilize until all three handlebodies have the same genus.
    Balance {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Also write the move script here.
        #[arg(long, value_name = "FILE")]
        script: Option<PathBuf>,
    },
    /// Stabilize one handlebody until the opposite surface is a disk.
    BuildHeegaard {
        file: PathBuf,
        #[arg(long, value_parser = parse_handlebody)]
        handlebody: Handlebody,
        #[command(flatten)]
        out: Output,
        #[arg(long, value_name = "FILE")]
        script: Option<PathBuf>,
    },
    /// Stabilize H2 then H1: one Heegaard stabilization between them.
    FakeStab {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Drive two states to a common stabilization.
    Plan {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0)]
        rs_bound: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Breadth-first search of the parameter move graph.
    Explore {
        #[arg(long, value_name = "FILE")]
        start: PathBuf,
        #[arg(long)]
        max_sum: u32,
        /// Report a shortest stabilization sequence to this state's parameters.
        #[arg(long, value_name = "FILE")]
        shortest_to: Option<PathBuf>,
        /// Write the realized shortest script here.
        #[arg(long, value_name = "FILE", requires = "shortest_to")]
        script: Option<PathBuf>,
        /// Identify states that differ by relabeling the handlebodies.
        #[arg(long)]
        quotient: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Exhaustively check the move-calculus properties up to a size.
    Verify {
        #[arg(long)]
        max_sum: u32,
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Apply a move script to a state.
    Replay {
        file: PathBuf,
        script: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_handlebody(s: &str) -> Result<Handlebody, String> {
    let t = s.strip_prefix('H').or_else(|| s.strip_prefix('h')).unwrap_or(s);
    t.parse::<u8>()
        .ok()
        .and_then(Handlebody::from_index)
        .ok_or_else(|| format!("expected 1, 2 or 3, got {s:?}"))
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(e) if e.is_domain() => 1,
            _ => 2,
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        if path == Path::new("-") {
            if self.stdin_used {
                return Err(Failure::Io("standard input can be read only once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("cannot read standard input: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
        }
    }

    fn read_state(&mut self, path: &Path) -> CliResult<TrisectionState> {
        let text = self.read(path)?;
        Ok(state_from_json(&text)?)
    }

    fn write_file(&mut self, path: &Path, text: &str) -> CliResult {
        fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
    }

    /// Writes the primary JSON output and returns where human lines belong.
    fn emit(&mut self, out: &Output, text: &str) -> CliResult<Human> {
        match &out.output {
            Some(p) => {
                self.write_file(p, text)?;
                Ok(Human::Stdout)
            }
            None => {
                self.stdout.write_all(text.as_bytes()).map_err(io_failure)?;
                Ok(Human::Stderr)
            }
        }
    }

    fn say(&mut self, to: Human, line: impl AsRef<str>) -> CliResult {
        let w: &mut dyn Write = match to {
            Human::Stdout => self.stdout,
            Human::Stderr => self.stderr,
        };
        writeln!(w, "{}", line.as_ref()).map_err(io_failure)
    }
}

#[derive(Clone, Copy)]
enum Human {
    Stdout,
    Stderr,
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Io(e.to_string())
}

/// Runs the CLI on the process's standard streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Same as [`run`] with explicit streams.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { stdin, stdout, stderr, stdin_used: false };
    let result = dispatch(cli.command, &mut io);
    let _ = io.stdout.flush();
    match result {
        Ok(code) => code,
        Err(f) => {
            let msg = match &f {
                Failure::Lib(e) => e.to_string(),
                Failure::Io(m) => format!("Io: {m}"),
            };
            let _ = writeln!(io.stderr, "error: {msg}");
            f.exit_code()
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io) -> CliResult<i32> {
    match cmd {
        Command::New { kind, params, out } => {
            let s = construct(ConstructorKind::parse(&kind, &params)?)?;
            let to = io.emit(&out, &state_to_json(&s))?;
            io.say(to, format!("profile: {}", s.profile()))?;
            for n in s.notes() {
                io.say(to, n)?;
            }
        }
        Command::Show { file } => {
            let s = io.read_state(&file)?;
            for line in show_lines(&s) {
                io.say(Human::Stdout, line)?;
            }
        }
        Command::Stab { file, handlebody, arc, out } => {
            let s = io.read_state(&file)?;
            let next = apply_stabilization(&s, &StabMove::new(handlebody, arc))?;
            let to = io.emit(&out, &state_to_json(&next))?;
            io.say(to, format!("profile: {}", next.profile()))?;
        }
        Command::Destab { file, handlebody, arc, out } => {
            let s = io.read_state(&file)?;
            let next = apply_destabilization(&s, &DestabMove::new(handlebody, arc))?;
            let to = io.emit(&out, &state_to_json(&next))?;
            io.say(to, format!("profile: {}", next.profile()))?;
            io.say(Human::Stderr, format!("caveat: {FORMAL_DESTAB_NOTE}"))?;
        }
        Command::Balance { file, out, script } => {
            let s = io.read_state(&file)?;
            let (next, moves) = balance(&s)?;
            write_script(io, script.as_deref(), &moves)?;
            let to = io.emit(&out, &state_to_json(&next))?;
            io.say(to, format!("moves: {}", moves.len()))?;
            io.say(to, format!("profile: {}", next.profile()))?;
        }
        Command::BuildHeegaard { file, handlebody, out, script } => {
            let s = io.read_state(&file)?;
            let (next, genus, moves) = build_heegaard(&s, handlebody)?;
            write_script(io, script.as_deref(), &moves)?;
            let to = io.emit(&out, &state_to_json(&next))?;
            io.say(to, format!("moves: {}", moves.len()))?;
            io.say(to, format!("heegaard genus: {genus}"))?;
            io.say(to, format!("profile: {}", next.profile()))?;
        }
        Command::FakeStab { file, out } => {
            let s = io.read_state(&file)?;
            let next = fake_heegaard_stab(&s)?;
            let to = io.emit(&out, &state_to_json(&next))?;
            io.say(to, format!("profile: {}", next.profile()))?;
        }
        Command::Plan { a, b, rs_bound, out } => {
            let sa = io.read_state(&a)?;
            let sb = io.read_state(&b)?;
            let report = plan_common_stabilization(&sa, &sb, rs_bound)?;
            let to = io.emit(&out, &report.to_json())?;
            io.say(to, format!("final profile: {}", report.final_profile))?;
            io.say(
                to,
                format!(
                    "moves: a={} b={}",
                    report.a.steps.concatenated().len(),
                    report.b.steps.concatenated().len()
                ),
            )?;
            io.say(to, "scope: equal parameters and move provenance only; isotopy is not certified")?;
        }
        Command::Explore { start, max_sum, shortest_to, script, quotient, threads } => {
            let s = io.read_state(&start)?;
            let node = MoveGraphNode::from_state(&s);
            let opts = ExploreOptions { relabel_quotient: quotient, threads };
            let layers = explorer::bfs_layers(node, max_sum, &opts);
            let total: usize = layers.iter().map(|l| l.len()).sum();
            io.say(Human::Stdout, format!("start: {} {}", s.profile(), node))?;
            for (k, layer) in layers.iter().enumerate() {
                let items: Vec<String> = layer.iter().map(|n| n.profile().to_string()).collect();
                io.say(Human::Stdout, format!("depth {k}: {} node(s): {}", layer.len(), items.join(" ")))?;
            }
            io.say(Human::Stdout, format!("reachable: {total} node(s) with sum_h <= {max_sum}"))?;
            if let Some(target) = shortest_to {
                let t = io.read_state(&target)?;
                let goal = MoveGraphNode::from_state(&t);
                let bound = max_sum.saturating_sub(node.sum_h());
                match explorer::shortest_path(node, goal, bound) {
                    Some(path) => {
                        let moves = explorer::realize(&s, &path)?;
                        io.say(Human::Stdout, format!("shortest: {} move(s) to {}", moves.len(), t.profile()))?;
                        for r in moves.iter() {
                            io.say(Human::Stdout, format!("  {} {}", r.handlebody, r.arc))?;
                        }
                        write_script(io, script.as_deref(), &moves)?;
                    }
                    None => {
                        io.say(Human::Stdout, format!("shortest: none to {} within sum_h <= {max_sum}", t.profile()))?;
                        return Ok(1);
                    }
                }
            }
        }
        Command::Verify { max_sum, out, threads } => {
            let opts = ExploreOptions { relabel_quotient: false, threads };
            let report = explorer::verify_properties(max_sum, &opts);
            let to = io.emit(&out, &report.to_json())?;
            for p in &report.properties {
                let verdict = if p.pass { "PASS" } else { "FAIL" };
                io.say(to, format!("{verdict} {}", p.property))?;
            }
            io.say(to, format!("scope: {}", report.scope))?;
            if !report.all_pass() {
                return Ok(1);
            }
        }
        Command::Replay { file, script, out } => {
            let s = io.read_state(&file)?;
            let moves = script_from_json(&io.read(&script)?)?;
            let next = replay(&s, &moves)?;
            let to = io.emit(&out, &state_to_json(&next))?;
            io.say(to, format!("moves: {}", moves.len()))?;
            io.say(to, format!("profile: {}", next.profile()))?;
        }
    }
    Ok(0)
}

fn write_script(io: &mut Io, path: Option<&Path>, script: &MoveScript) -> CliResult {
    match path {
        Some(p) => io.write_file(p, &script_to_json(script)),
        None => Ok(()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn show_lines(s: &TrisectionState) -> Vec<String> {
    let sum = s.summary();
    let g = sum.genera;
    let components: Vec<String> = s.link().components().map(|c| c.to_string()).collect();
    let mut lines = vec![
        format!("label: {}", s.label()),
        format!("profile: {}", sum.profile),
        format!("genera: g12={} g13={} g23={}", g.g12, g.g13, g.g23),
        format!("link: {} component(s): {}", sum.b, components.join(" ")),
        format!("feasible: {}", yes_no(sum.feasible)),
        format!("balanced: {}", yes_no(sum.balanced)),
        format!("trivial: {}", yes_no(sum.trivial)),
        format!("history: {} move(s)", s.history().len()),
    ];
    lines.extend(s.notes());
    lines
}
