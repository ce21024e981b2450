//! The `posheap` command line: build heaps, solve the inverse problems on
//! PHT files, cross-check against brute force, and export DOT.
//!
//! Exit codes: 0 on success, 1 when the instance has no answer (or a
//! verified text does not match), 2 on usage and format errors.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand};
use posheap_core::dot::{sketch_to_dot, trace_to_dot};
use posheap_core::gen::random_text;
use posheap_core::inference::{self, InferError, Outcome};
use posheap_core::oracle::{brute_force_oracle, OracleError, DEFAULT_MAX_LEN};
use posheap_core::pht::{parse_pht, write_pht};
use posheap_core::trace::{build_trace_graph, compute_sigma, reconstruct_suffix_links};
use posheap_core::{Alphabet, Flags, HeapSketch, PositionHeap, ProblemKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "posheap", version, about = "Position heaps and the texts behind them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the heap of TEXT and print it as a PHT document.
    Build {
        text: String,
        /// Record this alphabet in the document.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Print one text whose heap matches FILE, or `invalid`.
    Infer {
        #[command(flatten)]
        instance: Instance,
    },
    /// Print how many texts match FILE.
    Count {
        #[command(flatten)]
        instance: Instance,
    },
    /// Print every text matching FILE, one per line.
    Enum {
        #[command(flatten)]
        instance: Instance,
        /// Stop after this many texts.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check whether the heap of TEXT matches FILE.
    Verify {
        file: String,
        text: String,
        #[arg(long, value_parser = parse_problem)]
        problem: Option<ProblemKind>,
    },
    /// Print FILE, or its trace graph, in DOT.
    ExportDot {
        file: String,
        /// Draw the trace graph instead of the tree (needs labels).
        #[arg(long)]
        trace: bool,
    },
    /// Brute-force every text matching FILE (exponential; length-capped).
    Oracle {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
    },
    /// Print a random valid text.
    Gen {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args, Debug)]
struct Instance {
    /// PHT document, or `-` for standard input.
    file: String,
    /// Which problem to solve; defaults to the richest the file supports.
    #[arg(long, value_parser = parse_problem)]
    problem: Option<ProblemKind>,
    /// Overrides the alphabet recorded in the file.
    #[arg(long)]
    alphabet: Option<String>,
}

fn parse_problem(s: &str) -> Result<ProblemKind, String> {
    s.trim_start_matches(['P', 'p'])
        .parse::<u8>()
        .ok()
        .and_then(ProblemKind::from_number)
        .ok_or_else(|| format!("expected 1, 2, 3 or 4, got {s:?}"))
}

/// A failed command: what to print on stderr and the exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn invalid(message: impl fmt::Display) -> Self {
        Failure { code: EXIT_INVALID, message: message.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e)
    }
}

impl From<InferError> for Failure {
    fn from(e: InferError) -> Self {
        match e {
            InferError::AlphabetTooSmall { .. } => Failure::invalid(e),
            _ => Failure::usage(e),
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Nothing is written to the process streams directly.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "posheap: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<u8, Failure> {
    match cmd {
        Command::Build { text, alphabet } => {
            let text = text.into_bytes();
            let (heap, links) = PositionHeap::from_text(&text).map_err(Failure::invalid)?;
            let mut s = HeapSketch::from_heap(&heap, &links, Flags { numbered: true, labeled: true, links: true });
            if let Some(a) = alphabet {
                let a = parse_alphabet(&a)?;
                if let Some(&c) = text.iter().find(|&&c| !a.contains(c)) {
                    return Err(Failure::usage(format!("letter {:?} is not in the alphabet", c as char)));
                }
                s.set_alphabet(Some(a));
            }
            out.write_all(write_pht(&s).map_err(Failure::usage)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Infer { instance } => {
            let (kind, s, a) = instance.load()?;
            match inference::infer(kind, &s, a.as_ref())? {
                Outcome::Solved(sol) => {
                    out.write_all(&sol.text)?;
                    writeln!(out)?;
                    Ok(EXIT_OK)
                }
                Outcome::Invalid(_) => {
                    writeln!(out, "invalid")?;
                    Ok(EXIT_INVALID)
                }
            }
        }
        Command::Count { instance } => {
            let (kind, s, a) = instance.load()?;
            let n = inference::count(kind, &s, a.as_ref())?;
            writeln!(out, "{n}")?;
            Ok(if n.is_zero() { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Enum { instance, limit } => {
            let (kind, s, a) = instance.load()?;
            let stream = inference::enumerate(kind, &s, a.as_ref())?;
            let mut any = false;
            for text in stream.take(limit.unwrap_or(usize::MAX)) {
                out.write_all(&text)?;
                writeln!(out)?;
                any = true;
            }
            Ok(if any || limit == Some(0) { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Verify { file, text, problem } => {
            let s = load_sketch(&file)?;
            let kind = pick_problem(problem, &s)?;
            if inference::verify_text(kind, &s, text.as_bytes())? {
                writeln!(out, "ok")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "mismatch")?;
                Ok(EXIT_INVALID)
            }
        }
        Command::ExportDot { file, trace } => {
            let s = load_sketch(&file)?;
            if !trace {
                out.write_all(sketch_to_dot(&s).as_bytes())?;
                return Ok(EXIT_OK);
            }
            if !s.flags().labeled {
                return Err(Failure::usage("the trace graph needs a labeled tree"));
            }
            let links = reconstruct_suffix_links(&s).map_err(Failure::invalid)?;
            let sigma = compute_sigma(&s, &links).map_err(Failure::invalid)?;
            let g = build_trace_graph(&s, &links, &sigma).map_err(Failure::invalid)?;
            out.write_all(trace_to_dot(&g, &s).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Oracle { instance, max_len } => {
            let (kind, s, a) = instance.load()?;
            let a = a
                .or_else(|| s.alphabet().cloned())
                .ok_or_else(|| Failure::usage("the oracle needs an alphabet (--alphabet or in the file)"))?;
            let found = brute_force_oracle(&s, kind, &a, max_len).map_err(|e| match e {
                OracleError::CapExceeded { .. } => Failure::usage(format!("{e}; raise --max-len to allow it")),
                _ => Failure::usage(e),
            })?;
            for text in &found {
                out.write_all(text)?;
                writeln!(out)?;
            }
            Ok(if found.is_empty() { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Gen { len, alphabet, seed } => {
            let a = parse_alphabet(&alphabet)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let text = random_text(&mut rng, len, &a)
                .ok_or_else(|| Failure::usage(format!("no valid text of length {len} over one letter")))?;
            out.write_all(&text)?;
            writeln!(out)?;
            Ok(EXIT_OK)
        }
    }
}

impl Instance {
    fn load(&self) -> Result<(ProblemKind, HeapSketch, Option<Alphabet>), Failure> {
        let s = load_sketch(&self.file)?;
        let kind = pick_problem(self.problem, &s)?;
        let a = self.alphabet.as_deref().map(parse_alphabet).transpose()?;
        Ok((kind, s, a))
    }
}

fn pick_problem(requested: Option<ProblemKind>, s: &HeapSketch) -> Result<ProblemKind, Failure> {
    match requested {
        Some(k) => Ok(k),
        None => ProblemKind::of(s.flags()).ok_or_else(|| Failure::usage("the file has no numbers, labels or links")),
    }
}

fn parse_alphabet(letters: &str) -> Result<Alphabet, Failure> {
    Alphabet::new(letters.as_bytes()).map_err(Failure::usage)
}

fn load_sketch(path: &str) -> Result<HeapSketch, Failure> {
    let doc = if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?
    };
    parse_pht(&doc).map_err(|e| Failure::usage(format!("{path}: {e}")))
}
