//! `arf`: command-line access to Arf closures, multiplicity trees and
//! generator sets. Input is a JSON object read from a file or standard
//! input; results are JSON on standard output.
//!
//! Exit status: 0 on success, 1 for usage or malformed input, 2 when the
//! input is well-formed but fails validation (diagnostics on stderr).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use arf_core::closure::{
    arf_closure_of_good_semigroup, arf_closure_of_vectors, validate_vector_set, ClosureResult,
};
use arf_core::generators::{
    build_generators, char_lower_bound, check_generator_set, solve_distance_vector,
};
use arf_core::numerical::{duval_closure, MultiplicitySequence};
use arf_core::tree::{
    self, enumerate_all, enumerate_untwisted, expand_small, nodes_to_dot, tree_nodes,
    untwisted_to_matrix, validate_tree_matrix, SequenceCollection, SmallElementsSet, TreeMatrix,
    TreeViolation,
};
use arf_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "arf", version, about = "Arf good semigroups of N^n")]
struct Cli {
    #[command(flatten)]
    io: IoArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// JSON input file, or `-` for standard input
    #[arg(long, global = true, default_value = "-")]
    input: PathBuf,
    /// Output format; `dot` applies to `expand` and `enumerate`
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Number of tree levels drawn in DOT output
    #[arg(long, global = true)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Arf closure of a vector set: {"vectors": [[...], ...]}
    ClosureVectors,
    /// Arf closure of a good semigroup: {"small": [[...], ...]}
    ClosureGood,
    /// Multiplicity sequence of the Arf closure: {"values": [...]}
    Duval,
    /// Trees over a collection: {"sequences": [[...], ...]}
    Enumerate {
        /// Untwisted trees as consecutive-level vectors
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        untwisted: bool,
        /// All trees as matrices
        #[arg(long)]
        all: bool,
    },
    /// Small elements and conductor of a tree: {"sequences", "matrix"}
    Expand,
    /// Membership of a vector: {"sequences", "matrix", "vector"}
    Contains,
    /// Restriction numbers and characters: {"sequence"} or {"sequences"}
    Characters,
    /// Generator-set criterion: {"sequences", "matrix", "tuples"}
    CheckGenerators,
    /// Generators of a tree's semigroup: {"sequences", "matrix"}
    BuildGenerators,
    /// Solution of a distance vector: {"d": [...]}
    SolveD,
    /// Validate a sequence {"sequence"} or a tree {"sequences", "matrix"}
    Validate,
}

/// Why a command did not produce a result.
enum Failure {
    Usage(String),
    Invalid(Value),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Invalid(error_json(&err))
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(Output::Json(value)) => {
            println!("{}", to_pretty(&value));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(message)) => {
            eprintln!("{}", to_pretty(&json!({ "error": "usage", "message": message })));
            ExitCode::from(1)
        }
        Err(Failure::Invalid(diagnostics)) => {
            eprintln!("{}", to_pretty(&diagnostics));
            ExitCode::from(2)
        }
    }
}

fn to_pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

fn run(cli: &Cli) -> Outcome {
    let input = read_input(&cli.io.input)?;
    if cli.io.format == Format::Dot
        && !matches!(cli.command, Command::Expand | Command::Enumerate { .. })
    {
        return Err(Failure::Usage(
            "--format dot applies only to expand and enumerate".into(),
        ));
    }
    match &cli.command {
        Command::ClosureVectors => closure_vectors(&input),
        Command::ClosureGood => closure_good(&input),
        Command::Duval => duval(&input),
        Command::Enumerate { untwisted, .. } => enumerate(&input, *untwisted, &cli.io),
        Command::Expand => expand(&input, &cli.io),
        Command::Contains => contains(&input),
        Command::Characters => characters(&input),
        Command::CheckGenerators => check_generators(&input),
        Command::BuildGenerators => build(&input),
        Command::SolveD => solve_d(&input),
        Command::Validate => validate(&input),
    }
}

fn read_input(path: &PathBuf) -> Result<Value, Failure> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid JSON: {e}")))
}

fn field<T: DeserializeOwned>(input: &Value, name: &str) -> Result<T, Failure> {
    let value = input
        .get(name)
        .ok_or_else(|| Failure::Usage(format!("missing field \"{name}\"")))?;
    T::deserialize(value).map_err(|e| Failure::Usage(format!("field \"{name}\": {e}")))
}

fn error_json(err: &Error) -> Value {
    let kind = match err {
        Error::EmptyInput => "empty_input",
        Error::ZeroEntry { .. } => "zero_entry",
        Error::NotArfSequence { .. } => "not_arf_sequence",
        Error::PaddingTooShort { .. } => "padding_too_short",
        Error::MalformedSVector { .. } => "malformed_s_vector",
        Error::GcdNotOne { .. } => "gcd",
        Error::CoordinateGcdNotOne { .. } => "gcd",
        Error::IndistinguishablePair { .. } => "indistinguishable_pair",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NonPositiveEntry { .. } => "non_positive_entry",
        Error::LevelExceedsBound { .. } => "level_exceeds_bound",
        Error::UnboundedPair { .. } => "unbounded_pair",
        Error::InfiniteFamily { .. } => "infinite_family",
        Error::InvalidMatrix(_) => "invalid_matrix",
        Error::NotInProjection { .. } => "not_in_projection",
        Error::MalformedSmallSet(_) => "malformed_small_set",
        Error::IndexOutOfRange { .. } => "index_out_of_range",
        Error::InvalidPermutation(_) => "invalid_permutation",
    };
    json!({ "error": kind, "message": err.to_string() })
}

fn violation_json(v: &TreeViolation) -> Value {
    let mut out = json!({ "message": v.to_string() });
    let extra = match *v {
        TreeViolation::DimensionMismatch { expected, found } => {
            json!({ "kind": "dimension", "expected": expected, "found": found })
        }
        TreeViolation::NonZeroLower { i, j } => {
            json!({ "kind": "nonzero_lower", "entry": [i + 1, j + 1] })
        }
        TreeViolation::ZeroLevel { i, j } => json!({ "kind": "zero_level", "pair": [i + 1, j + 1] }),
        TreeViolation::BoundExceeded { i, j, level, bound } => json!({
            "kind": "bound", "pair": [i + 1, j + 1], "level": level, "bound": bound
        }),
        TreeViolation::Triple { i, j, k } => {
            json!({ "kind": "triple", "branches": [i + 1, j + 1, k + 1] })
        }
    };
    for (key, value) in extra.as_object().expect("object literal") {
        out[key] = value.clone();
    }
    out
}

fn sequences(input: &Value) -> Result<SequenceCollection, Failure> {
    let raw: Vec<Vec<u64>> = field(input, "sequences")?;
    Ok(SequenceCollection::from_raw(&raw)?)
}

/// The collection and matrix of a valid tree.
fn tree_input(input: &Value) -> Result<(SequenceCollection, TreeMatrix), Failure> {
    let e = sequences(input)?;
    let rows: Vec<Vec<usize>> = field(input, "matrix")?;
    let m = TreeMatrix::from_rows(&rows)?;
    validate_tree_matrix(&e, &m).map_err(|v| {
        Failure::Invalid(json!({ "error": "invalid_tree", "violation": violation_json(&v) }))
    })?;
    Ok((e, m))
}

fn closure_json(c: &ClosureResult) -> Value {
    let pairs: Vec<Value> = c
        .diagnostics
        .iter()
        .map(|d| {
            json!({
                "pair": [d.i + 1, d.j + 1],
                "in_u": d.in_u,
                "k_bound": d.k_bound,
                "min_mismatch": d.min_mismatch,
                "level": d.level,
            })
        })
        .collect();
    json!({
        "sequences": c.collection,
        "matrix": c.matrix,
        "diagnostics": { "pairs": pairs },
    })
}

fn closure_vectors(input: &Value) -> Outcome {
    let g: Vec<Vec<u64>> = field(input, "vectors")?;
    let diag = validate_vector_set(&g)?;
    if !diag.is_ok() {
        let gcd: Vec<Value> = diag
            .gcd_failures
            .iter()
            .map(|&(c, d)| json!({ "coordinate": c + 1, "gcd": d }))
            .collect();
        let pairs: Vec<Value> = diag
            .indistinguishable
            .iter()
            .map(|&(i, j)| json!([i + 1, j + 1]))
            .collect();
        return Err(Failure::Invalid(json!({
            "error": "invalid_vector_set",
            "gcd_failures": gcd,
            "indistinguishable_pairs": pairs,
        })));
    }
    Ok(Output::Json(closure_json(&arf_closure_of_vectors(&g)?)))
}

fn closure_good(input: &Value) -> Outcome {
    let small: Vec<Vec<u64>> = field(input, "small")?;
    let small = SmallElementsSet::from_elements(small)?;
    Ok(Output::Json(closure_json(&arf_closure_of_good_semigroup(&small)?)))
}

fn duval(input: &Value) -> Outcome {
    let values: Vec<u64> = field(input, "values")?;
    if values.is_empty() {
        return Err(Error::EmptyInput.into());
    }
    if values.contains(&0) {
        return Err(Error::NonPositiveEntry { coordinate: 0 }.into());
    }
    let seq = duval_closure(&values)?;
    Ok(Output::Json(json!({ "sequence": seq })))
}

fn default_depth(e: &SequenceCollection, m: &TreeMatrix) -> usize {
    let longest = e.branches().iter().map(MultiplicitySequence::len).max().unwrap_or(0);
    m.max_level().max(longest) + 1
}

fn enumerate(input: &Value, untwisted: bool, io: &IoArgs) -> Outcome {
    let e = sequences(input)?;
    let matrices: Vec<TreeMatrix> = if untwisted {
        let vectors = enumerate_untwisted(&e)?;
        if io.format == Format::Json {
            return Ok(Output::Json(json!({ "count": vectors.len(), "vectors": vectors })));
        }
        vectors
            .iter()
            .map(|d| untwisted_to_matrix(&e, d))
            .collect::<Result<_, _>>()?
    } else {
        enumerate_all(&e)?
    };
    match io.format {
        Format::Json => Ok(Output::Json(json!({ "count": matrices.len(), "matrices": matrices }))),
        Format::Dot => {
            let mut text = String::new();
            for m in &matrices {
                let depth = io.depth.unwrap_or_else(|| default_depth(&e, m));
                text.push_str(&nodes_to_dot(&tree_nodes(&e, m, depth)?));
            }
            Ok(Output::Text(text))
        }
    }
}

fn expand(input: &Value, io: &IoArgs) -> Outcome {
    let (e, m) = tree_input(input)?;
    match io.format {
        Format::Json => {
            let small = expand_small(&e, &m);
            Ok(Output::Json(json!({
                "conductor": small.conductor(),
                "small": small.elements(),
            })))
        }
        Format::Dot => {
            let depth = io.depth.unwrap_or_else(|| default_depth(&e, &m));
            Ok(Output::Text(nodes_to_dot(&tree_nodes(&e, &m, depth)?)))
        }
    }
}

fn contains(input: &Value) -> Outcome {
    let (e, m) = tree_input(input)?;
    let v: Vec<u64> = field(input, "vector")?;
    Ok(Output::Json(json!({ "contains": tree::contains(&e, &m, &v)? })))
}

fn characters(input: &Value) -> Outcome {
    if input.get("sequence").is_some() {
        let raw: Vec<u64> = field(input, "sequence")?;
        let seq = MultiplicitySequence::new(&raw)?;
        return Ok(Output::Json(json!(seq.characters())));
    }
    let e = sequences(input)?;
    let branches: Vec<Value> = e.branches().iter().map(|b| json!(b.characters())).collect();
    Ok(Output::Json(json!({
        "branches": branches,
        "lower_bound": char_lower_bound(&e),
    })))
}

fn check_generators(input: &Value) -> Outcome {
    let (e, m) = tree_input(input)?;
    let tuples: Vec<Vec<usize>> = field(input, "tuples")?;
    let report = check_generator_set(&e, &m, &tuples)?;
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| {
            json!({
                "pair": [p.q + 1, p.r + 1],
                "required": p.required,
                "k_bound": p.k_bound,
                "in_p": p.in_p,
                "all_equal": p.all_equal,
                "min_g": p.min_g,
                "ok": p.ok,
            })
        })
        .collect();
    let out = json!({
        "valid": report.valid,
        "missing_characters": report.missing_characters,
        "pairs": pairs,
        "failures": report.failures,
    });
    if report.valid {
        Ok(Output::Json(out))
    } else {
        Err(Failure::Invalid(out))
    }
}

fn build(input: &Value) -> Outcome {
    let (e, m) = tree_input(input)?;
    let gens = build_generators(&e, &m)?;
    let permutation: Vec<usize> = gens.permutation.iter().map(|p| p + 1).collect();
    Ok(Output::Json(json!({
        "permutation": permutation,
        "tuples": gens.tuples,
        "vectors": gens.vectors,
    })))
}

fn solve_d(input: &Value) -> Outcome {
    let d: Vec<u64> = field(input, "d")?;
    Ok(Output::Json(json!({ "solution": solve_distance_vector(&d)? })))
}

#[derive(Deserialize)]
struct ValidateInput {
    sequence: Option<Vec<u64>>,
}

fn validate(input: &Value) -> Outcome {
    let only_sequence = ValidateInput::deserialize(input)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .sequence;
    if let Some(raw) = only_sequence {
        let seq = MultiplicitySequence::new(&raw)?;
        return Ok(Output::Json(json!({ "valid": true, "sequence": seq })));
    }
    let (e, m) = tree_input(input)?;
    Ok(Output::Json(json!({ "valid": true, "sequences": e, "matrix": m })))
}
