//! Command-line front end: descriptor I/O and one subcommand per decision
//! procedure. Verdicts print as JSON on stdout; exit codes are scriptable:
//! 0 = decided true / success, 1 = decided false, 2 = invalid input,
//! 3 = resource cap exceeded.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use acdmult::{
    example_4_9, iso, mult_contains, mult_of, near_iso, random_descriptor, realizable, realize,
    ring_iso, self_mult_iso, Error, GenConfig, GroupDescriptor, MultElement, Provenance,
    TypeComponent, UnitConfig, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(
    name = "acdmult",
    version,
    about = "Exact deciders for block-rigid CRQ groups of ring type and their multiplication groups"
)]
struct Cli {
    /// Cap on enumerated unit-subgroup elements (overrides $ACDMULT_CAP)
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Whether -1 counts as a generator of the localization unit subgroup
    #[arg(long, global = true, value_enum, default_value_t = MinusOne::Include)]
    minus_one: MinusOne,

    /// Pretty-print the JSON output
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MinusOne {
    Include,
    Exclude,
}

#[derive(Subcommand)]
enum Command {
    /// Check a descriptor against every structural invariant
    Validate { file: String },
    /// Write the descriptor of the multiplication group
    Mult { file: String },
    /// Decide near-isomorphism of two descriptors
    NearIso { a: String, b: String },
    /// Decide isomorphism of two descriptors
    Iso { a: String, b: String },
    /// Decide whether two member multiplications define isomorphic rings
    RingIso { g: String, u: String, v: String },
    /// Decide membership of a multiplication in the multiplication group
    MultMember { g: String, u: String },
    /// Decide whether a group is isomorphic to its multiplication group
    SelfMultIso { g: String },
    /// Write a group whose multiplication group realizes the input
    Realize { m: String },
    /// Decide whether the input is realizable as a multiplication group
    Realizable { m: String },
    /// Generate a random valid descriptor
    GenRandom {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_types: u32,
        #[arg(long, default_value_t = 3)]
        max_rank: u64,
        /// Comma-separated primes for the infinite prime sets
        #[arg(long, value_delimiter = ',')]
        prime_pool: Option<Vec<u64>>,
        /// Comma-separated values for the invariants m
        #[arg(long, value_delimiter = ',')]
        modulus_pool: Option<Vec<u64>>,
    },
    /// Generate the rank-k counterexample group for the prime p
    #[command(name = "gen-4-9")]
    Gen49 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
    },
    /// Split a descriptor into its clipped and completely decomposable parts
    MainDecompose { g: String },
}

/// Decision output: `witness` only on a positive result that defines one.
#[derive(Serialize)]
struct Verdict<W: Serialize> {
    result: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<W>,
    diagnostics: Vec<String>,
}

impl<W: Serialize> Verdict<W> {
    fn from_witness(witness: Option<W>) -> Self {
        Verdict {
            result: witness.is_some(),
            witness,
            diagnostics: Vec::new(),
        }
    }
}

/// Placeholder witness type for witness-free verdicts.
type NoWitness = ();

fn plain_verdict(result: bool) -> Verdict<NoWitness> {
    Verdict {
        result,
        witness: None,
        diagnostics: Vec::new(),
    }
}

#[derive(Serialize)]
struct ErrorOutput {
    error: String,
}

#[derive(Serialize)]
struct GeneratedDescriptor<'a> {
    components: &'a [TypeComponent],
    provenance: Provenance,
}

#[derive(Serialize)]
struct Decomposition {
    g1: Option<GroupDescriptor>,
    c: Option<GroupDescriptor>,
}

struct Rendered {
    json: String,
    code: u8,
}

struct CliError {
    message: String,
    code: u8,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(rendered) => {
            println!("{}", rendered.json);
            ExitCode::from(rendered.code)
        }
        Err(e) => {
            let output = render(
                &ErrorOutput {
                    error: e.message,
                },
                pretty,
            );
            println!("{output}");
            ExitCode::from(e.code)
        }
    }
}

fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("output serializes")
}

fn run(cli: Cli) -> Result<Rendered, CliError> {
    let pretty = cli.pretty;
    let cap = cli
        .cap
        .or_else(|| {
            std::env::var("ACDMULT_CAP")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_CAP);
    let cfg = UnitConfig {
        include_minus_one: cli.minus_one == MinusOne::Include,
        cap,
    };

    let decided = |result: bool, json: String| Rendered {
        json,
        code: u8::from(!result),
    };
    let success = |json: String| Rendered { json, code: 0 };

    match cli.command {
        Command::Validate { file } => {
            let g: GroupDescriptor = parse(&read_input(&file)?, "descriptor")?;
            let violations = g.violations();
            if violations.is_empty() {
                Ok(success(render(&plain_verdict(true), pretty)))
            } else {
                let verdict = Verdict::<NoWitness> {
                    result: false,
                    witness: None,
                    diagnostics: violations.iter().map(|v| v.to_string()).collect(),
                };
                Ok(Rendered {
                    json: render(&verdict, pretty),
                    code: 2,
                })
            }
        }
        Command::Mult { file } => {
            let g: GroupDescriptor = parse(&read_input(&file)?, "descriptor")?;
            Ok(success(render(&mult_of(&g)?, pretty)))
        }
        Command::NearIso { a, b } => {
            let a: GroupDescriptor = parse(&read_input(&a)?, "descriptor")?;
            let b: GroupDescriptor = parse(&read_input(&b)?, "descriptor")?;
            let result = near_iso(&a, &b)?;
            Ok(decided(result, render(&plain_verdict(result), pretty)))
        }
        Command::Iso { a, b } => {
            let a: GroupDescriptor = parse(&read_input(&a)?, "descriptor")?;
            let b: GroupDescriptor = parse(&read_input(&b)?, "descriptor")?;
            let verdict = Verdict::from_witness(iso(&a, &b, &cfg)?);
            Ok(decided(verdict.result, render(&verdict, pretty)))
        }
        Command::RingIso { g, u, v } => {
            let g: GroupDescriptor = parse(&read_input(&g)?, "descriptor")?;
            let u: MultElement = parse(&read_input(&u)?, "multiplication")?;
            let v: MultElement = parse(&read_input(&v)?, "multiplication")?;
            let verdict = Verdict::from_witness(ring_iso(&g, &u, &v, &cfg)?);
            Ok(decided(verdict.result, render(&verdict, pretty)))
        }
        Command::MultMember { g, u } => {
            let g: GroupDescriptor = parse(&read_input(&g)?, "descriptor")?;
            let u: MultElement = parse(&read_input(&u)?, "multiplication")?;
            let verdict = Verdict::from_witness(mult_contains(&g, &u)?);
            Ok(decided(verdict.result, render(&verdict, pretty)))
        }
        Command::SelfMultIso { g } => {
            let g: GroupDescriptor = parse(&read_input(&g)?, "descriptor")?;
            let verdict = Verdict::from_witness(self_mult_iso(&g, &cfg)?);
            Ok(decided(verdict.result, render(&verdict, pretty)))
        }
        Command::Realize { m } => {
            let m: GroupDescriptor = parse(&read_input(&m)?, "descriptor")?;
            Ok(success(render(&realize(&m)?, pretty)))
        }
        Command::Realizable { m } => {
            let m: GroupDescriptor = parse(&read_input(&m)?, "descriptor")?;
            let result = realizable(&m)?;
            Ok(decided(result, render(&plain_verdict(result), pretty)))
        }
        Command::GenRandom {
            seed,
            max_types,
            max_rank,
            prime_pool,
            modulus_pool,
        } => {
            let defaults = GenConfig::default();
            let gen_cfg = GenConfig {
                seed,
                max_types,
                max_rank,
                prime_pool: prime_pool.unwrap_or(defaults.prime_pool),
                modulus_pool: modulus_pool.unwrap_or(defaults.modulus_pool),
            };
            let g = random_descriptor(&gen_cfg)?;
            let output = GeneratedDescriptor {
                components: &g.components,
                provenance: Provenance::random(seed),
            };
            Ok(success(render(&output, pretty)))
        }
        Command::Gen49 { k, p } => {
            let g = example_4_9(k, p, &cfg)?;
            let output = GeneratedDescriptor {
                components: &g.components,
                provenance: Provenance::example_4_9(k, p),
            };
            Ok(success(render(&output, pretty)))
        }
        Command::MainDecompose { g } => {
            let g: GroupDescriptor = parse(&read_input(&g)?, "descriptor")?;
            let (g1, c) = g.main_decomposition()?;
            Ok(success(render(&Decomposition { g1, c }, pretty)))
        }
    }
}

/// `-` reads standard input; anything else is a path.
fn read_input(spec: &str) -> Result<String, CliError> {
    if spec == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| CliError {
                message: format!("reading standard input: {e}"),
                code: 2,
            })?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError {
            message: format!("reading {spec}: {e}"),
            code: 2,
        })
    }
}

/// Parses JSON, pointing at the offending field on failure.
fn parse<T: DeserializeOwned>(text: &str, kind: &str) -> Result<T, CliError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|e| CliError {
        message: format!("malformed {kind} at {}: {}", e.path(), e.inner()),
        code: 2,
    })
}
