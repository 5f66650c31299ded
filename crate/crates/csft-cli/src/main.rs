use std::fs;
use std::path::{Path, PathBuf};
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use csft::csg::{self, CsgMorphism, Family, FiniteGroup};
use csft::evaluator::{self, EvaluationContext};
use csft::frobenius::{self, FrobeniusPresentation};
use csft::graph::{random_graph, StructuredGraph};
use csft::io::{self, GraphJson, MorphismJson, WreathJson};
use csft::operad;
use csft::oracle;
use csft::tensor::{Field, Tensor};

#[derive(Parser)]
#[command(name = "csft", version, about = "Crossed simplicial groups, structured graphs and Frobenius algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// `g . f` for morphisms `f: [n] -> [m]` and `g: [m] -> [k]`.
    Compose {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
    },
    /// Canonical factorization `f = phi . g`.
    Factorize {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The duality functor on a morphism.
    Dualize {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// `chi_2` of an element of `G_0`.
    Chi2 {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// `eta_n` of an element of `G_n`.
    Eta {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Contracts the internal edge through a half-edge.
    Contract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        edge: usize,
    },
    /// Contracts edges until every component is a rose.
    Normalize {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Checks the Frobenius axioms for a family.
    FrobCheck {
        #[arg(long)]
        algebra: PathBuf,
        /// Family such as `Cyclic`, `NCyclic:4`, `Paradihedral`.
        #[arg(long)]
        family: String,
        /// Largest `n` for the `eta_n` checks.
        #[arg(long, default_value_t = frobenius::ETA_MAX_N)]
        max_n: usize,
    },
    /// Evaluates a graph against an algebra.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the brute-force axiom oracle.
    Oracle {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Runs the randomized evaluator harness.
    Harness {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Writes the built-in algebras and graphs to a directory.
    Examples {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Number of random graphs per family.
        #[arg(long, default_value_t = 3)]
        random: usize,
    },
}

/// Input problems exit with 2, failed checks with 1.
enum Failure {
    Input(String),
    Check(Value, String),
}

type Outcome = Result<(Value, String), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_morphism(path: &Path) -> Result<CsgMorphism, Failure> {
    io::parse_morphism(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<StructuredGraph, Failure> {
    io::parse_graph(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_algebra(path: &Path) -> Result<FrobeniusPresentation, Failure> {
    io::parse_algebra(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn family_for(spec: &str, algebra: &FrobeniusPresentation) -> Result<Family, Failure> {
    let fam = io::parse_family(spec).map_err(input)?;
    Ok(match &algebra.companion {
        Some(g) => fam.with_companion(g.clone()),
        None => fam,
    })
}

fn morphism_value(f: &CsgMorphism) -> Value {
    serde_json::to_value(MorphismJson::from_morphism(f)).unwrap()
}

fn graph_value(g: &StructuredGraph) -> Value {
    serde_json::to_value(GraphJson::from_graph(g)).unwrap()
}

fn graph_text(g: &StructuredGraph) -> String {
    let hs = g.half_edges();
    let mut lines = vec![format!("{} vertices {:?}, {} edges", g.vertex_count(), g.arities(), g.edge_count())];
    for (k, h) in hs.iter().enumerate() {
        let role = if g.is_external(k) { "leg".to_string() } else { format!("paired with {}", g.pairing()[k]) };
        lines.push(format!("  {k}: vertex {} slot {} side {} twist {} {role}", h.vertex, h.slot, h.side, h.twist));
    }
    lines.push(format!("in {:?} out {:?}", g.ins(), g.outs()));
    lines.join("\n")
}

fn tensor_text(t: &Tensor) -> String {
    let entries: Vec<String> = t.entries().iter().map(ToString::to_string).collect();
    format!("shape {:?}\n[{}]", t.shape(), entries.join(", "))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Compose { first, second } => {
            let (f, g) = (read_morphism(&first)?, read_morphism(&second)?);
            let h = csg::compose(&f, &g).map_err(input)?;
            Ok((morphism_value(&h), h.to_string()))
        }
        Command::Factorize { input: path } => {
            let f = read_morphism(&path)?;
            let (phi, g) = csg::factorize(&f);
            let trivial = g == CsgMorphism::identity(f.family(), f.source());
            let text = format!("delta part {phi}\ngroup part {}", if trivial { "identity".to_string() } else { g.to_string() });
            Ok((json!({"delta": morphism_value(&phi), "group": morphism_value(&g), "group_is_identity": trivial}), text))
        }
        Command::Dualize { input: path } => {
            let f = read_morphism(&path)?;
            let d = csg::dualize(&f);
            Ok((morphism_value(&d), d.to_string()))
        }
        Command::Chi2 { input: path } => {
            let f = read_morphism(&path)?;
            let w = operad::compute_chi2(&f).map_err(input)?;
            Ok((serde_json::to_value(WreathJson::from_wreath(&w)).unwrap(), w.to_string()))
        }
        Command::Eta { input: path } => {
            let g = read_morphism(&path)?;
            let w = operad::compute_eta_standard(g.source(), &g).map_err(input)?;
            Ok((serde_json::to_value(WreathJson::from_wreath(&w)).unwrap(), w.to_string()))
        }
        Command::Contract { graph, edge } => {
            let g = read_graph(&graph)?.contract_edge(edge).map_err(input)?;
            Ok((graph_value(&g), graph_text(&g)))
        }
        Command::Normalize { graph } => {
            let g = read_graph(&graph)?.normalize_to_rose().map_err(input)?;
            Ok((graph_value(&g), graph_text(&g)))
        }
        Command::FrobCheck { algebra, family, max_n } => {
            let p = read_algebra(&algebra)?;
            let fam = family_for(&family, &p)?;
            let verdict = frobenius::check_frobenius_bounded(&p, &fam, max_n);
            let value = serde_json::to_value(&verdict).unwrap();
            let mut text = format!("{} for {}: {}", p.name, fam, if verdict.passed() { "pass" } else { "fail" });
            for c in verdict.checks.iter().filter(|c| !c.passed) {
                text.push_str(&format!("\n  {}: {}", c.name, c.detail));
            }
            if let Some(e) = &verdict.internal_error {
                text.push_str(&format!("\n  internal error: {e}"));
            }
            if verdict.passed() {
                Ok((value, text))
            } else {
                Err(Failure::Check(value, text))
            }
        }
        Command::Eval { graph, algebra, out } => {
            let p = read_algebra(&algebra)?;
            let g = read_graph(&graph)?;
            let ctx = EvaluationContext::new(p, g.family()).map_err(input)?;
            let t = ctx.evaluate(&g).map_err(input)?;
            let value = serde_json::to_value(io::tensor_json(&t)).unwrap();
            if let Some(path) = out {
                fs::write(&path, io::to_json(&value)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            Ok((value, tensor_text(&t)))
        }
        Command::Oracle { family, max_n } => {
            let fam = io::parse_family(&family).map_err(input)?;
            let cap = std::env::var("CSFT_MAX_N").ok().and_then(|v| v.parse::<usize>().ok());
            let max_n = cap.map_or(max_n, |c| max_n.min(c));
            let report = oracle::run_suite(&fam, max_n);
            let value = serde_json::to_value(&report).unwrap();
            let text = report
                .checks
                .iter()
                .map(|c| format!("{} {}: {} instances, {} violations", if c.passed() { "pass" } else { "FAIL" }, c.name, c.instances, c.violations.len()))
                .collect::<Vec<_>>()
                .join("\n");
            if report.passed() {
                Ok((value, text))
            } else {
                Err(Failure::Check(value, text))
            }
        }
        Command::Harness { algebra, family, seed, trials } => {
            let p = read_algebra(&algebra)?;
            let fam = family_for(&family, &p)?;
            let ctx = EvaluationContext::new(p, &fam).map_err(input)?;
            let report = evaluator::verify_invariance(&ctx, trials, seed).merge(evaluator::verify_functoriality(&ctx, trials, seed));
            let value = serde_json::to_value(&report).unwrap();
            let text = report
                .checks
                .iter()
                .map(|c| format!("{} {}: {} trials, {} failures", if c.passed() { "pass" } else { "FAIL" }, c.name, c.instances, c.violations.len()))
                .collect::<Vec<_>>()
                .join("\n");
            if report.passed() {
                Ok((value, text))
            } else {
                Err(Failure::Check(value, text))
            }
        }
        Command::Examples { dir, seed, random } => {
            let written = write_examples(&dir, seed, random).map_err(|e| Failure::Input(e.to_string()))?;
            let text = format!("wrote {} files to {}", written.len(), dir.display());
            Ok((json!({"files": written}), text))
        }
    }
}

fn write_examples(dir: &Path, seed: u64, random: usize) -> std::io::Result<Vec<String>> {
    let mut written = Vec::new();
    let mut put = |name: String, text: String| -> std::io::Result<()> {
        let path = dir.join(&name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, text)?;
        written.push(name);
        Ok(())
    };
    let f5 = Field::fp(5).expect("prime");
    for m in 1..=4 {
        put(format!("algebras/group_algebra_{m}.json"), io::algebra_to_json(&frobenius::group_algebra(m, Field::Q)))?;
        put(format!("algebras/truncated_polynomials_{m}.json"), io::algebra_to_json(&frobenius::truncated_polynomials(m, Field::Q)))?;
    }
    for k in 1..=4 {
        let p = frobenius::matrix_algebra_twisted(2, &[1, k], f5).with_reflection(frobenius::matrix_transpose(2, f5));
        put(format!("algebras/m2f5_u1{k}.json"), io::algebra_to_json(&p))?;
    }
    put("algebras/group_algebra_3_h2.json".into(), io::algebra_to_json(&frobenius::equivariant_example()))?;
    let families = [
        Family::cyclic(),
        Family::dihedral(),
        Family::n_cyclic(2),
        Family::n_cyclic(4),
        Family::n_dihedral(2),
        Family::paracyclic(),
        Family::paradihedral(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for fam in &families {
        let tag = io::family_short(fam).replace(':', "");
        put(format!("graphs/{tag}/m2.json"), io::graph_to_json(&StructuredGraph::multiplication(fam, 2)))?;
        put(format!("graphs/{tag}/b2p2.json"), io::graph_to_json(&evaluator::nondegeneracy_graph(fam)))?;
        put(format!("graphs/{tag}/p1.json"), io::graph_to_json(&StructuredGraph::cotrace(fam, 0)))?;
        put(format!("graphs/{tag}/identity.json"), io::graph_to_json(&StructuredGraph::identity(fam)))?;
        let twists = evaluator::sample_twists(fam);
        for k in 0..random {
            let g = random_graph(fam, &evaluator::harness_spec(), &twists, &mut rng);
            put(format!("graphs/{tag}/random_{k}.json"), io::graph_to_json(&g))?;
        }
    }
    let h = Family::cyclic().with_companion(FiniteGroup::cyclic(2));
    put("graphs/Cyclic_H2/m2.json".into(), io::graph_to_json(&StructuredGraph::multiplication(&h, 2)))?;
    let lambda4 = Family::n_cyclic(4);
    put("morphisms/rotation_NCyclic4.json".into(), io::morphism_to_json(&CsgMorphism::rotation(&lambda4, 0, 1)))?;
    put("morphisms/reflection_Dihedral.json".into(), io::morphism_to_json(&CsgMorphism::reflection(&Family::dihedral(), 0, 0)))?;
    put("morphisms/face_Cyclic.json".into(), io::morphism_to_json(&CsgMorphism::delta(&Family::cyclic(), 2, vec![0, 2]).expect("face")))?;
    Ok(written)
}

fn emit(format: Format, value: &Value, text: &str) {
    let out = match format {
        Format::Json => io::to_json(value),
        Format::Text => text.to_string(),
    };
    // a closed pipe downstream is not an error
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, text)) => {
            emit(cli.format, &value, &text);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(value, text)) => {
            emit(cli.format, &value, &text);
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
