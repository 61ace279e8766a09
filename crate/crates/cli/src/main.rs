//! Command-line front end: every subcommand reads JSON files, prints one
//! report to stdout and exits 0 when it answered, 2 when a search budget
//! ran out, and 1 on bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use autalg::affine::{
    build_digit_automaton, icp_to_generators, verify_affine_action,
    AffineGeneratorSet, IcpInstance,
};
use autalg::automaton::{compose, Automaton};
use autalg::elements::acts_as_identity;
use autalg::enumeration::{
    enumerate_ball, find_positive_relation, find_relation, semigroup_order, Mode, OrderResult,
};
use autalg::error::Error;
use autalg::orbits::{check_orbit_coincidence, orbit, orbital_graph, stabilizer_elements};
use autalg::semantics::{act, SAutomaton};
use autalg::tiles::{find_torus_tiling, grid_to_ppm, tile_square, TileSet};

#[derive(Parser)]
#[command(
    name = "autalg",
    about = "Automata, the semigroups and groups they generate, and Wang tilings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
    Ppm,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Semigroup,
    Inverse,
    Group,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Semigroup => Mode::Semigroup,
            ModeArg::Inverse => Mode::Inverse,
            ModeArg::Group => Mode::Group,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report the structural predicates of an automaton
    Props {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Swap input and output letters (on a renamed state copy)
    Invert {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Swap the roles of states and letters
    Dual {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compose two automata over the same alphabet; FIRST runs on the
    /// input and AFTER consumes its output
    Compose {
        after: PathBuf,
        first: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The k-fold composition of an automaton with itself
    Power {
        automaton: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply a state sequence to a word
    Act {
        automaton: PathBuf,
        /// State sequence, rightmost state acts first
        #[arg(long)]
        seq: String,
        #[arg(long)]
        word: String,
    },
    /// Semi-decide finiteness by enumerating balls up to a radius budget
    Order {
        automaton: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Semigroup)]
        mode: ModeArg,
    },
    /// Search for two distinct sequences with equal actions
    Relations {
        automaton: PathBuf,
        #[arg(long)]
        maxlen: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Semigroup)]
        mode: ModeArg,
    },
    /// Search for a sequence of positive generators acting as identity
    PositiveRelations {
        automaton: PathBuf,
        #[arg(long)]
        maxlen: usize,
    },
    /// The orbit of a word under single-state actions
    Orbit {
        automaton: PathBuf,
        #[arg(long)]
        word: String,
        /// Also act with the formal inverse states
        #[arg(long)]
        inverses: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The orbital graph with inverse generators included
    Schreier {
        automaton: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Positive sequences fixing a word, up to a length bound
    Stabilizers {
        automaton: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        maxlen: usize,
    },
    /// Compare the orbit with and without inverse generators
    CoincidenceCheck {
        automaton: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Build the digit automaton of an integer matrix set
    SvBuild {
        matrices: PathBuf,
        /// Override the automatically chosen modulus
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check that digit-automaton states act as their affine maps
    SvVerify {
        matrices: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Encode a word-pair instance as block-diagonal matrices
    IcpEncode { instance: PathBuf },
    /// Report the determinism flags of a tile set
    TilesProps { tiles: PathBuf },
    /// Translate tiles into the automaton with one transition per tile
    TilesToAutomaton {
        tiles: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search for a tiling of a square with free boundary
    TileSquare {
        tiles: PathBuf,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search for the smallest torus tiling within bounds
    Torus {
        tiles: PathBuf,
        #[arg(long)]
        max_width: usize,
        #[arg(long)]
        max_height: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<Automaton, Error> {
    Automaton::from_json(&read_to_string(path)?)
}

fn load_deterministic(path: &Path) -> Result<SAutomaton, Error> {
    SAutomaton::new(load_automaton(path)?)
}

fn load_tiles(path: &Path) -> Result<TileSet, Error> {
    TileSet::from_json(&read_to_string(path)?)
}

fn emit_automaton(a: &Automaton, format: Format) -> Result<(), Error> {
    match format {
        Format::Json => println!("{}", a.to_json()),
        Format::Dot => print!("{}", a.to_dot()),
        _ => {
            return Err(Error::InvalidArgument(
                "this command supports --format json or dot".into(),
            ))
        }
    }
    Ok(())
}

const EXIT_ANSWERED: u8 = 0;
const EXIT_BUDGET: u8 = 2;

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Props { automaton, format } => {
            let report = load_automaton(&automaton)?.properties();
            match format {
                Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
                Format::Text => {
                    let rows = [
                        ("deterministic", report.deterministic),
                        ("complete", report.complete),
                        ("reversible", report.reversible),
                        ("inverse-deterministic", report.inverse_deterministic),
                        ("inverse-complete", report.inverse_complete),
                        ("inverse-reversible", report.inverse_reversible),
                        ("bi-deterministic", report.bi_deterministic),
                        ("bi-complete", report.bi_complete),
                        ("bi-reversible", report.bi_reversible),
                        ("generates semigroup (S)", report.is_s),
                        ("generates inverse semigroup (S~)", report.is_sbar),
                        ("generates group (G)", report.is_g),
                    ];
                    for (name, value) in rows {
                        println!("{name:<32} {value}");
                    }
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "props supports --format json or text".into(),
                    ))
                }
            }
            Ok(EXIT_ANSWERED)
        }
        Command::Invert { automaton, format } => {
            emit_automaton(&load_automaton(&automaton)?.inverse(), format)?;
            Ok(EXIT_ANSWERED)
        }
        Command::Dual { automaton, format } => {
            emit_automaton(&load_automaton(&automaton)?.dual(), format)?;
            Ok(EXIT_ANSWERED)
        }
        Command::Compose {
            after,
            first,
            format,
        } => {
            let composed = compose(&load_automaton(&after)?, &load_automaton(&first)?)?;
            emit_automaton(&composed, format)?;
            Ok(EXIT_ANSWERED)
        }
        Command::Power {
            automaton,
            k,
            format,
        } => {
            emit_automaton(&load_automaton(&automaton)?.power(k)?, format)?;
            Ok(EXIT_ANSWERED)
        }
        Command::Act {
            automaton,
            seq,
            word,
        } => {
            let aut = load_deterministic(&automaton)?;
            let seq = aut.parse_state_seq(&seq)?;
            let word = aut.parse_word(&word)?;
            match act(&aut, &seq, &word)? {
                Some(out) => println!(
                    "{}",
                    json!({"status": "defined", "output": aut.format_word(&out)})
                ),
                None => println!("{}", json!({"status": "undefined"})),
            }
            Ok(EXIT_ANSWERED)
        }
        Command::Order {
            automaton,
            budget,
            mode,
        } => {
            let aut = load_deterministic(&automaton)?;
            match semigroup_order(&aut, budget, mode.into())? {
                OrderResult::Finite(n) => {
                    let report = enumerate_ball(&aut, budget, mode.into())?;
                    println!(
                        "{}",
                        json!({"status": "finite", "order": n, "growth": report.growth})
                    );
                    Ok(EXIT_ANSWERED)
                }
                OrderResult::Unknown(growth) => {
                    println!("{}", json!({"status": "unknown", "growth": growth}));
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Relations {
            automaton,
            maxlen,
            mode,
        } => {
            let aut = load_deterministic(&automaton)?;
            let base = aut.automaton().clone();
            match find_relation(&aut, maxlen, mode.into())? {
                Some(w) => {
                    let reference = if w.left.extended {
                        aut.extended()?.machine.automaton().clone()
                    } else {
                        base
                    };
                    println!(
                        "{}",
                        json!({
                            "status": "found",
                            "left": w.left.names(&reference),
                            "right": w.right.names(&reference),
                        })
                    );
                    Ok(EXIT_ANSWERED)
                }
                None => {
                    println!("{}", json!({"status": "none", "maxlen": maxlen}));
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::PositiveRelations { automaton, maxlen } => {
            let aut = load_deterministic(&automaton)?;
            match find_positive_relation(&aut, maxlen)? {
                Some(w) => {
                    debug_assert!(acts_as_identity(&aut, &w.left.states));
                    println!(
                        "{}",
                        json!({
                            "status": "found",
                            "witness": w.left.names(&aut),
                        })
                    );
                    Ok(EXIT_ANSWERED)
                }
                None => {
                    println!("{}", json!({"status": "none", "maxlen": maxlen}));
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Orbit {
            automaton,
            word,
            inverses,
            format,
        } => {
            let aut = load_deterministic(&automaton)?;
            let parsed = aut.parse_word(&word)?;
            if format == Format::Dot {
                let graph = orbital_graph(&aut, &parsed, inverses)?;
                print!("{}", graph.to_dot(&aut)?);
                return Ok(EXIT_ANSWERED);
            }
            let orb = orbit(&aut, &parsed, inverses)?;
            let per_level: Vec<usize> = (1..=parsed.len())
                .map(|k| orbit(&aut, &parsed[..k], inverses).map(|o| o.len()))
                .collect::<Result<_, _>>()?;
            println!(
                "{}",
                json!({
                    "word": aut.format_word(&parsed),
                    "inverses": inverses,
                    "size": orb.len(),
                    "orbit": orb.iter().map(|w| aut.format_word(w)).collect::<Vec<_>>(),
                    "sizes_per_level": per_level,
                })
            );
            Ok(EXIT_ANSWERED)
        }
        Command::Schreier {
            automaton,
            word,
            format,
        } => {
            let aut = load_deterministic(&automaton)?;
            let parsed = aut.parse_word(&word)?;
            let graph = orbital_graph(&aut, &parsed, true)?;
            match format {
                Format::Dot => print!("{}", graph.to_dot(&aut)?),
                Format::Json => {
                    let ext = aut.extended()?;
                    let nodes: Vec<String> =
                        graph.nodes.iter().map(|w| aut.format_word(w)).collect();
                    let edges: Vec<serde_json::Value> = graph
                        .edges
                        .iter()
                        .map(|&(s, q, t)| {
                            json!([nodes[s], ext.machine.state_name(q), nodes[t]])
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "center": aut.format_word(&graph.center),
                            "nodes": nodes,
                            "edges": edges,
                        })
                    );
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "schreier supports --format json or dot".into(),
                    ))
                }
            }
            Ok(EXIT_ANSWERED)
        }
        Command::Stabilizers {
            automaton,
            word,
            maxlen,
        } => {
            let aut = load_deterministic(&automaton)?;
            let parsed = aut.parse_word(&word)?;
            let stabs = stabilizer_elements(&aut, &parsed, maxlen)?;
            println!(
                "{}",
                json!({
                    "word": aut.format_word(&parsed),
                    "maxlen": maxlen,
                    "stabilizers": stabs.iter().map(|s| s.names(&aut)).collect::<Vec<_>>(),
                })
            );
            Ok(EXIT_ANSWERED)
        }
        Command::CoincidenceCheck { automaton, word } => {
            let aut = load_deterministic(&automaton)?;
            let parsed = aut.parse_word(&word)?;
            let coincide = check_orbit_coincidence(&aut, &parsed)?;
            println!(
                "{}",
                json!({"word": aut.format_word(&parsed), "coincide": coincide})
            );
            Ok(EXIT_ANSWERED)
        }
        Command::SvBuild {
            matrices,
            modulus,
            format,
        } => {
            let gens = AffineGeneratorSet::from_json(&read_to_string(&matrices)?, modulus)?;
            let digit = build_digit_automaton(&gens)?;
            emit_automaton(&digit.automaton, format)?;
            Ok(EXIT_ANSWERED)
        }
        Command::SvVerify {
            matrices,
            depth,
            samples,
            modulus,
            seed,
        } => {
            use rand::{Rng, SeedableRng};
            let gens = AffineGeneratorSet::from_json(&read_to_string(&matrices)?, modulus)?;
            let digit = build_digit_automaton(&gens)?;
            let machine = SAutomaton::new(digit.automaton.clone())?;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut all_passed = true;
            for mi in 0..gens.matrices().len() {
                let zero = vec![num_bigint::BigInt::from(0); gens.dim()];
                for _ in 0..samples {
                    let z: Vec<num_bigint::BigInt> = (0..gens.dim())
                        .map(|_| num_bigint::BigInt::from(rng.gen_range(-50i64..=50)))
                        .collect();
                    if !verify_affine_action(&digit, &machine, mi, &zero, &z, depth)? {
                        all_passed = false;
                    }
                }
            }
            println!(
                "{}",
                json!({
                    "generators": gens.matrices().len(),
                    "modulus": gens.modulus(),
                    "depth": depth,
                    "samples": samples,
                    "all_passed": all_passed,
                })
            );
            Ok(EXIT_ANSWERED)
        }
        Command::IcpEncode { instance } => {
            let inst = IcpInstance::from_json(&read_to_string(&instance)?)?;
            let gens = icp_to_generators(&inst)?;
            println!("{}", gens.to_json());
            Ok(EXIT_ANSWERED)
        }
        Command::TilesProps { tiles } => {
            let report = load_tiles(&tiles)?.determinism_report();
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(EXIT_ANSWERED)
        }
        Command::TilesToAutomaton { tiles, format } => {
            emit_automaton(&load_tiles(&tiles)?.to_automaton(), format)?;
            Ok(EXIT_ANSWERED)
        }
        Command::TileSquare {
            tiles,
            size,
            format,
        } => {
            let set = load_tiles(&tiles)?;
            match tile_square(&set, size)? {
                Some(tiling) => {
                    match format {
                        Format::Json => {
                            let rows: Vec<Vec<usize>> = (0..tiling.height)
                                .map(|y| {
                                    (0..tiling.width).map(|x| tiling.tile_at(x, y)).collect()
                                })
                                .collect();
                            println!(
                                "{}",
                                json!({"status": "found", "size": size, "rows": rows})
                            );
                        }
                        Format::Ppm => print!(
                            "{}",
                            grid_to_ppm(tiling.width, tiling.height, &tiling.cells, 16)
                        ),
                        _ => {
                            return Err(Error::InvalidArgument(
                                "tile-square supports --format json or ppm".into(),
                            ))
                        }
                    }
                    Ok(EXIT_ANSWERED)
                }
                None => {
                    // A definitive no: the square admits no tiling at all.
                    println!("{}", json!({"status": "none", "size": size}));
                    Ok(EXIT_ANSWERED)
                }
            }
        }
        Command::Torus {
            tiles,
            max_width,
            max_height,
            format,
        } => {
            let set = load_tiles(&tiles)?;
            match find_torus_tiling(&set, max_width, max_height)? {
                Some(tiling) => {
                    match format {
                        Format::Json => {
                            let rows: Vec<Vec<usize>> = (0..tiling.height)
                                .map(|y| {
                                    (0..tiling.width).map(|x| tiling.tile_at(x, y)).collect()
                                })
                                .collect();
                            println!(
                                "{}",
                                json!({
                                    "status": "found",
                                    "width": tiling.width,
                                    "height": tiling.height,
                                    "rows": rows,
                                })
                            );
                        }
                        Format::Ppm => print!(
                            "{}",
                            grid_to_ppm(tiling.width, tiling.height, &tiling.cells, 16)
                        ),
                        _ => {
                            return Err(Error::InvalidArgument(
                                "torus supports --format json or ppm".into(),
                            ))
                        }
                    }
                    Ok(EXIT_ANSWERED)
                }
                None => {
                    println!(
                        "{}",
                        json!({
                            "status": "none-within-bounds",
                            "max_width": max_width,
                            "max_height": max_height,
                        })
                    );
                    Ok(EXIT_BUDGET)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
