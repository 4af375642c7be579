mod corpus;
mod docs;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gog_core::dichotomy::{classify_with, Verdict, DEFAULT_VERIFY_N};
use gog_core::efficiency::{is_efficient, Bond};
use gog_core::growth::{estimate_degree, growth_table, iterated_table, DegreeEstimate};
use gog_core::hconj::h_reduce;
use gog_core::{Basis, GraphOfGroups, Letter, PathWord, Syllable, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use docs::{aut_file_from_doc, aut_file_to_doc, gog_from_doc, parse_doc, spec_from_doc, AutFile, AutFileDoc, GogDoc, SpecDoc};

#[derive(Parser, Debug)]
#[command(name = "gogtwist", version, about = "Graph-of-groups words, Dehn twists and growth classification")]
pub struct Cli {
    /// Seed for commands that sample random inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Free reduction of a word, or normal form of a path word with --gog.
    Reduce {
        #[arg(long, required_unless_present = "gog")]
        basis: Option<String>,
        #[arg(long, conflicts_with = "basis")]
        gog: Option<String>,
        #[arg(long)]
        word: String,
        /// Start vertex of a path word.
        #[arg(long)]
        start: Option<String>,
    },
    /// Image of a free-group word or a path word.
    Apply {
        #[arg(long)]
        aut: String,
        #[command(flatten)]
        input: WordInput,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Twisted reduction trace of a closed word.
    HReduce {
        #[arg(long)]
        aut: String,
        #[command(flatten)]
        input: WordInput,
    },
    /// Exit code 0 when the word is twisted-conjugate into a vertex group.
    IsHZero {
        #[arg(long)]
        aut: String,
        #[command(flatten)]
        input: WordInput,
    },
    /// Efficiency report of a Dehn twist; exit code 0 iff efficient.
    CheckEfficient {
        #[arg(long)]
        aut: String,
    },
    /// CSV of lengths of the iterates of a word.
    Growth {
        #[arg(long)]
        aut: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        max_k: usize,
        /// Cyclic lengths instead of lengths.
        #[arg(long)]
        cyclic: bool,
        /// Iterated products w φ(w) ... φ^(k-1)(w) instead of iterates.
        #[arg(long)]
        iterated: bool,
        /// Append the degree estimate as a JSON line.
        #[arg(long)]
        estimate: bool,
    },
    /// Linear or at least quadratic growth of a partial twist; exit code 0
    /// linear, 2 quadratic.
    Classify {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = DEFAULT_VERIFY_N)]
        verify: usize,
    },
    /// Prints the normalized JSON of an automorphism file.
    Show {
        #[arg(long)]
        aut: String,
    },
    /// Runs the bundled fixture corpus.
    Fixtures,
    /// Randomized normal-form and homomorphism checks on sampled path words.
    Laws {
        #[arg(long)]
        aut: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

#[derive(clap::Args, Debug)]
#[group(required = true, multiple = false)]
struct WordInput {
    /// Word over the identification basis.
    #[arg(long)]
    word: Option<String>,
    /// Path word such as "a @e b @ebar".
    #[arg(long)]
    path: Option<String>,
    /// Start vertex of --path.
    #[arg(long, requires = "path")]
    start: Option<String>,
}

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, code: 0 }
    }
}

type CmdResult = Result<Outcome, String>;

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub steps: Vec<String>,
    pub conjugator: String,
    pub result_length: usize,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HReduceDoc {
    pub start: String,
    pub steps: Vec<String>,
    pub result: String,
    pub conjugator: String,
    pub result_length: usize,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BondDoc {
    pub first: String,
    pub second: String,
    pub bond: String,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub minimal: bool,
    pub invisible_vertices: Vec<String>,
    pub proper_power_edges: Vec<String>,
    pub unused_edges: Vec<String>,
    pub bonded_pairs: Vec<BondDoc>,
    pub efficient: bool,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateDoc {
    pub degree: u32,
    pub c_low: String,
    pub c_high: String,
    pub ok: bool,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub edge: String,
    pub word: String,
    pub degree: u32,
    pub table: String,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub verdict: String,
    pub offending_edges: Vec<String>,
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawsDoc {
    pub seed: u64,
    pub samples: usize,
    pub reduce_idempotent: usize,
    pub homomorphism: usize,
    pub inverse: usize,
}

fn load(path: &str) -> Result<String, String> {
    if let Some(name) = path.strip_prefix("bundled:") {
        return corpus::bundled(name).map(str::to_string).ok_or_else(|| format!("no bundled file {name:?}"));
    }
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn load_aut(path: &str) -> Result<AutFile, String> {
    let doc: AutFileDoc = parse_doc(&load(path)?).map_err(|e| format!("{path}: {e}"))?;
    aut_file_from_doc(&doc).map_err(|e| format!("{path}: {e}"))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn core(e: gog_core::Error) -> String {
    e.to_string()
}

fn vertex_arg(g: &GraphOfGroups, start: &Option<String>) -> Result<Option<usize>, String> {
    start.as_deref().map(|s| g.vertex_id(s).map_err(core)).transpose()
}

/// The input as a path word; free-group words are read through the
/// identification.
fn path_input(f: &AutFile, input: &WordInput) -> Result<PathWord, String> {
    match (&input.word, &input.path) {
        (Some(w), None) => {
            let w = f.theta.basis().parse(w).map_err(core)?;
            f.theta.encode(&f.gog, &w).map_err(core)
        }
        (None, Some(p)) => f.gog.parse_path(p, vertex_arg(&f.gog, &input.start)?).map_err(core),
        _ => Err("give exactly one of --word and --path".into()),
    }
}

fn estimate_doc(e: &DegreeEstimate) -> EstimateDoc {
    EstimateDoc {
        degree: e.degree,
        c_low: e.c_low.to_string(),
        c_high: e.c_high.to_string(),
        ok: e.ok,
    }
}

pub fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Reduce { basis, gog, word, start } => {
            if let Some(path) = gog {
                let doc: GogDoc = parse_doc(&load(&path)?).map_err(|e| format!("{path}: {e}"))?;
                let g = gog_from_doc(&doc, "").map_err(|e| format!("{path}: {e}"))?;
                let p = g.parse_path(&word, vertex_arg(&g, &start)?).map_err(core)?;
                return Ok(Outcome::ok(g.format_path(&p) + "\n"));
            }
            let symbols: Vec<&str> = basis.as_deref().unwrap_or_default().split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let b = Basis::new(symbols).map_err(core)?;
            Ok(Outcome::ok(b.format(&b.parse(&word).map_err(core)?) + "\n"))
        }
        Cmd::Apply { aut, input, power } => {
            let f = load_aut(&aut)?;
            if let Some(w) = &input.word {
                let phi = f.aut.induced_morphism(&f.theta).map_err(core)?;
                let mut cur = f.theta.basis().parse(w).map_err(core)?;
                for _ in 0..power {
                    cur = phi.apply(&cur);
                }
                return Ok(Outcome::ok(f.theta.basis().format(&cur) + "\n"));
            }
            let mut cur = path_input(&f, &input)?;
            for _ in 0..power {
                cur = f.aut.apply(&cur);
            }
            Ok(Outcome::ok(f.gog.format_path(&cur) + "\n"))
        }
        Cmd::HReduce { aut, input } => {
            let f = load_aut(&aut)?;
            let t = h_reduce(&f.aut, &path_input(&f, &input)?).map_err(core)?;
            let g = &f.gog;
            Ok(Outcome::ok(json(&HReduceDoc {
                start: g.format_path(&t.start),
                steps: t.steps.iter().map(|p| g.format_path(p)).collect(),
                result: g.format_path(&t.result),
                conjugator: g.format_path(&t.conjugator),
                result_length: t.result.path_length(),
            })))
        }
        Cmd::IsHZero { aut, input } => {
            let f = load_aut(&aut)?;
            let t = h_reduce(&f.aut, &path_input(&f, &input)?).map_err(core)?;
            let g = &f.gog;
            let doc = TraceDoc {
                steps: t.steps.iter().map(|p| g.format_path(p)).collect(),
                conjugator: g.format_path(&t.conjugator),
                result_length: t.result.path_length(),
            };
            Ok(Outcome {
                stdout: json(&doc),
                code: if doc.result_length == 0 { 0 } else { 1 },
            })
        }
        Cmd::CheckEfficient { aut } => {
            let f = load_aut(&aut)?;
            let d = f.twist.as_ref().ok_or("check-efficient needs a file with a twist")?;
            let r = is_efficient(d);
            let g = &f.gog;
            let doc = ReportDoc {
                minimal: r.minimal,
                invisible_vertices: r.invisible_vertices.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
                proper_power_edges: r.proper_power_edges.iter().map(|&e| g.edge_name(e).to_string()).collect(),
                unused_edges: r.unused_edges.iter().map(|&e| g.edge_name(e).to_string()).collect(),
                bonded_pairs: r
                    .bonded_pairs
                    .iter()
                    .map(|&(a, b, bond)| BondDoc {
                        first: g.edge_name(a).to_string(),
                        second: g.edge_name(b).to_string(),
                        bond: match bond {
                            Bond::Positive => "positive",
                            Bond::Negative => "negative",
                            Bond::None => "none",
                        }
                        .to_string(),
                    })
                    .collect(),
                efficient: r.efficient,
            };
            Ok(Outcome {
                stdout: json(&doc),
                code: if r.efficient { 0 } else { 1 },
            })
        }
        Cmd::Growth { aut, word, max_k, cyclic, iterated, estimate } => {
            let f = load_aut(&aut)?;
            let phi = f.aut.induced_morphism(&f.theta).map_err(core)?;
            let w = f.theta.basis().parse(&word).map_err(core)?;
            let table = if iterated {
                iterated_table(|x| phi.apply(x), &w, max_k, cyclic)
            } else {
                growth_table(|x| phi.apply(x), &w, max_k, cyclic).map_err(core)?
            };
            let mut out = table.to_csv();
            if estimate {
                out.push_str(&json(&estimate_doc(&estimate_degree(&table).map_err(core)?)));
            }
            Ok(Outcome::ok(out))
        }
        Cmd::Classify { spec, verify } => {
            let doc: SpecDoc = parse_doc(&load(&spec)?).map_err(|e| format!("{spec}: {e}"))?;
            let s = spec_from_doc(&doc).map_err(|e| format!("{spec}: {e}"))?;
            let c = classify_with(&s, verify).map_err(core)?;
            let g = s.top();
            let id = s.identification().map_err(core)?;
            let out = ClassifyDoc {
                verdict: match c.verdict {
                    Verdict::DehnTwistLinear => "linear-dehn-twist",
                    Verdict::AtLeastQuadratic => "at-least-quadratic",
                }
                .to_string(),
                offending_edges: c.offending_edges.iter().map(|&e| g.edge_name(e).to_string()).collect(),
                witnesses: c
                    .witnesses
                    .iter()
                    .map(|w| WitnessDoc {
                        edge: g.edge_name(w.witness.edge).to_string(),
                        word: id.basis().format(&w.witness.word),
                        degree: w.estimate.degree,
                        table: w.table.to_csv(),
                    })
                    .collect(),
            };
            Ok(Outcome {
                stdout: json(&out),
                code: if c.verdict == Verdict::DehnTwistLinear { 0 } else { 2 },
            })
        }
        Cmd::Show { aut } => Ok(Outcome::ok(json(&aut_file_to_doc(&load_aut(&aut)?)))),
        Cmd::Fixtures => corpus::run_corpus(),
        Cmd::Laws { aut, samples, max_len } => {
            let f = load_aut(&aut)?;
            let g = &f.gog;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut doc = LawsDoc {
                seed: cli.seed,
                samples,
                reduce_idempotent: 0,
                homomorphism: 0,
                inverse: 0,
            };
            for _ in 0..samples {
                let u = random_path(g, &mut rng, None, max_len);
                let v = random_path(g, &mut rng, Some(u.end()), max_len);
                if g.reduce_from(u.start(), &u.syllables()).map_err(core)? != u {
                    doc.reduce_idempotent += 1;
                }
                let uv = g.multiply(&u, &v).map_err(core)?;
                if f.aut.apply(&uv) != g.multiply(&f.aut.apply(&u), &f.aut.apply(&v)).map_err(core)? {
                    doc.homomorphism += 1;
                }
                if f.aut.apply(&g.invert(&u)) != g.invert(&f.aut.apply(&u)) {
                    doc.inverse += 1;
                }
            }
            let failed = doc.reduce_idempotent + doc.homomorphism + doc.inverse > 0;
            Ok(Outcome {
                stdout: json(&doc),
                code: if failed { 1 } else { 0 },
            })
        }
    }
}

/// Random walk with vertex syllables of length at most two.
fn random_path(g: &GraphOfGroups, rng: &mut ChaCha8Rng, start: Option<usize>, max_len: usize) -> PathWord {
    let mut v = start.unwrap_or_else(|| rng.gen_range(0..g.vertex_count()));
    let s0 = v;
    let q = rng.gen_range(0..=max_len);
    let mut syl = Vec::new();
    let syllable = |v: usize, rng: &mut ChaCha8Rng| {
        let rank = g.basis(v).rank();
        let len = if rank == 0 { 0 } else { rng.gen_range(0..=2) };
        let letters = (0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)));
        Syllable::Vertex(v, Word::from_letters(letters))
    };
    for _ in 0..q {
        syl.push(syllable(v, rng));
        let out: Vec<usize> = g.edges().filter(|&e| g.initial(e) == v).collect();
        if out.is_empty() {
            break;
        }
        let e = out[rng.gen_range(0..out.len())];
        syl.push(Syllable::Stable(e));
        v = g.terminal(e);
    }
    syl.push(syllable(v, rng));
    g.reduce_from(s0, &syl).expect("connected walk")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::de::DeserializeOwned;

    fn output(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("gogtwist").chain(args.iter().copied())).unwrap();
        run(cli).unwrap()
    }

    /// Emitted text parses into its document type and serializes back to
    /// the same bytes.
    fn round_trip<T: Serialize + DeserializeOwned>(args: &[&str]) {
        let text = output(args).stdout;
        let doc: T = parse_doc(text.trim_end()).unwrap();
        assert_eq!(json(&doc), text, "{args:?}");
    }

    #[test]
    fn documents_round_trip() {
        round_trip::<ClassifyDoc>(&["classify", "--spec", "bundled:case2.json", "--verify", "40"]);
        round_trip::<ClassifyDoc>(&["classify", "--spec", "bundled:case1.json"]);
        round_trip::<ReportDoc>(&["check-efficient", "--aut", "bundled:loop_zero.json"]);
        round_trip::<HReduceDoc>(&["h-reduce", "--aut", "bundled:loop.json", "--path", "@e a @ebar b"]);
        round_trip::<TraceDoc>(&["is-h-zero", "--aut", "bundled:loop.json", "--word", "t b t^-1"]);
        round_trip::<LawsDoc>(&["laws", "--aut", "bundled:loop.json", "--samples", "50"]);
        round_trip::<AutFileDoc>(&["show", "--aut", "bundled:loop.json"]);
        let csv = output(&["growth", "--aut", "bundled:loop.json", "--word", "t", "--max-k", "20", "--estimate"]).stdout;
        let last = csv.lines().last().unwrap();
        let doc: EstimateDoc = parse_doc(last).unwrap();
        assert_eq!(json(&doc), format!("{last}\n"));
    }

    #[test]
    fn seed_changes_samples_only() {
        let a = output(&["laws", "--aut", "bundled:loop.json", "--seed", "3", "--samples", "20"]).stdout;
        let b = output(&["laws", "--aut", "bundled:loop.json", "--seed", "3", "--samples", "20"]).stdout;
        assert_eq!(a, b);
        let g = fixtures_loop();
        let mut r1 = ChaCha8Rng::seed_from_u64(1);
        let mut r2 = ChaCha8Rng::seed_from_u64(2);
        let w1: Vec<PathWord> = (0..8).map(|_| random_path(&g, &mut r1, None, 4)).collect();
        let w2: Vec<PathWord> = (0..8).map(|_| random_path(&g, &mut r2, None, 4)).collect();
        assert_ne!(w1, w2);
    }

    fn fixtures_loop() -> GraphOfGroups {
        gog_core::fixtures::loop_gog()
    }
}
