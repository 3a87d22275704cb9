//! `qg4`: analysis, generation and verification of n-ary quasigroups of order 4.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qg4::autotopy::{analyze_autotopies_with, are_isotopic_with, DEFAULT_ARITY_CAP};
use qg4::construct::{
    builtin, chain_tree, construction_t, l_bullet, latin_squares, linear,
    random_construction_t_spec,
};
use qg4::decompose::{
    find_split, floor_bound, full_decomposition, make_proper, reduce_decomposition, tree_stats,
    DecompositionTree, TreeDoc, TreeStats,
};
use qg4::semilinear::semilinear_profile;
use qg4::{Error, Quasigroup, SearchOptions};

const EXIT_MALFORMED: u8 = 1;
const EXIT_NOT_LATIN: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qg4",
    version,
    about = "Autotopy groups and decompositions of n-ary quasigroups of order 4"
)]
struct Cli {
    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest arity accepted by the brute-force searches.
    #[arg(long, global = true, default_value_t = DEFAULT_ARITY_CAP)]
    max_arity: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: semilinearity, linearity, reducibility, autotopy group and bounds.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Autotopy group order, optionally with generators or all elements.
    Atp {
        file: PathBuf,
        #[arg(long, conflicts_with = "elements")]
        generators: bool,
        #[arg(long)]
        elements: bool,
    },
    /// Decomposition tree and its statistics as JSON.
    Decompose {
        file: PathBuf,
        #[arg(long, conflicts_with = "reduced")]
        proper: bool,
        #[arg(long)]
        reduced: bool,
    },
    /// Write a named quasigroup in qg4 format.
    Gen {
        kind: Kind,
        #[arg(short = 'n')]
        arity: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Also write the decomposition tree (chain and construction-t only).
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Check the lower and upper bounds on the autotopy group order.
    Verify {
        file: PathBuf,
        /// A decomposition tree of the same quasigroup to check as well.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Print an isotopy taking the first quasigroup to the second, or "none".
    Isotopic { first: PathBuf, second: PathBuf },
    /// Distribution of autotopy orders over all Latin squares of order 4.
    Enumerate {
        #[arg(short = 'n')]
        arity: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Linear,
    Lbullet,
    Chain,
    Z4,
    Xor2,
    G3,
    H3,
    ConstructionT,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotLatin { .. } => EXIT_NOT_LATIN,
            Error::CapExceeded { .. } | Error::ArityTooLarge { .. } | Error::NotMaterialized => {
                EXIT_CAP
            }
            _ => EXIT_MALFORMED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_MALFORMED,
        message: message.into(),
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path) -> Result<Quasigroup, Failure> {
    Ok(Quasigroup::parse_qg4(&read_input(path)?)?)
}

fn load_tree(path: &Path) -> Result<DecompositionTree, Failure> {
    let text = String::from_utf8(read_input(path)?).map_err(|e| usage(e.to_string()))?;
    Ok(DecompositionTree::from_json(&text)?)
}

fn write_output(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pow4(n: usize) -> u128 {
    4u128.pow(n as u32)
}

#[derive(Serialize)]
struct BoundChecks {
    /// `order >= 2^(floor(n/2)+2)`.
    lower: bool,
    /// `order <= 6*4^n`, with equality exactly for linear quasigroups.
    upper: bool,
    /// `order <= 2*4^n` unless linear.
    nonlinear_max: bool,
}

impl BoundChecks {
    fn new(n: usize, order: u64, linear: bool) -> Self {
        let order = order as u128;
        BoundChecks {
            lower: order >= floor_bound(n) as u128,
            upper: order <= 6 * pow4(n) && (order == 6 * pow4(n)) == linear,
            nonlinear_max: linear || order <= 2 * pow4(n),
        }
    }

    fn all(&self) -> bool {
        self.lower && self.upper && self.nonlinear_max
    }
}

#[derive(Serialize)]
struct Report {
    arity: usize,
    latin: bool,
    semilinear: Vec<Vec<String>>,
    linear: bool,
    reducible: bool,
    atp_order: u64,
    atp_generators: Vec<String>,
    transitive: bool,
    bound_checks: BoundChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<TreeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<TreeStats>,
}

fn report(q: &Quasigroup, opts: &SearchOptions) -> Result<Report, Failure> {
    let n = q.arity();
    let analysis = analyze_autotopies_with(q, opts)?;
    let profile = semilinear_profile(q);
    let linear = profile.is_linear();
    let tree = if n >= 2 {
        Some(make_proper(&full_decomposition(q)?)?)
    } else {
        None
    };
    Ok(Report {
        arity: n,
        latin: true,
        semilinear: profile
            .assignments
            .iter()
            .map(|a| a.iter().map(|p| p.to_string()).collect())
            .collect(),
        linear,
        reducible: n >= 3 && find_split(q).is_some(),
        atp_order: analysis.group.order,
        atp_generators: analysis
            .group
            .generators
            .iter()
            .map(|g| g.to_string())
            .collect(),
        transitive: analysis.is_transitive(),
        bound_checks: BoundChecks::new(n, analysis.group.order, linear),
        stats: tree.as_ref().map(tree_stats),
        tree: tree.as_ref().map(|t| t.to_doc()),
    })
}

fn print_report(r: &Report) {
    println!("arity {}", r.arity);
    println!("latin {}", r.latin);
    if r.semilinear.is_empty() {
        println!("semilinear none");
    }
    for a in &r.semilinear {
        println!("semilinear {}", a.join(" "));
    }
    println!("linear {}", r.linear);
    println!("reducible {}", r.reducible);
    println!("order {}", r.atp_order);
    println!("transitive {}", r.transitive);
    for g in &r.atp_generators {
        println!("generator {g}");
    }
    let b = &r.bound_checks;
    println!("lower bound {}", if b.lower { "ok" } else { "violated" });
    println!("upper bound {}", if b.upper { "ok" } else { "violated" });
    println!(
        "nonlinear bound {}",
        if b.nonlinear_max { "ok" } else { "violated" }
    );
    if let Some(s) = &r.stats {
        println!(
            "tree N={} V={} E={} B={} F={} Gamma={} L={}",
            s.leaves, s.nodes, s.bald, s.bridges, s.forks, s.bunches, s.bald_bunches
        );
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))
}

fn analyze(file: &Path, json: bool, opts: &SearchOptions) -> Outcome {
    let r = report(&load(file)?, opts)?;
    if json {
        println!("{}", to_json(&r)?);
    } else {
        print_report(&r);
    }
    Ok(())
}

fn atp(file: &Path, generators: bool, elements: bool, opts: &SearchOptions) -> Outcome {
    let q = load(file)?;
    let group = analyze_autotopies_with(&q, opts)?.group;
    println!("order {}", group.order);
    if generators {
        for g in &group.generators {
            println!("{g}");
        }
    }
    if elements {
        for e in group.elements()? {
            println!("{e}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeOutput {
    tree: TreeDoc,
    stats: TreeStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    isotopy: Option<String>,
}

fn decompose(file: &Path, proper: bool, reduced: bool) -> Outcome {
    let q = load(file)?;
    if q.arity() < 2 {
        return Err(usage("decomposition needs arity at least 2"));
    }
    let mut tree = full_decomposition(&q)?;
    let mut isotopy = None;
    if proper || reduced {
        tree = make_proper(&tree)?;
    }
    if reduced {
        let (r, i) = reduce_decomposition(&tree)?;
        tree = r;
        isotopy = Some(i.to_string());
    }
    let out = DecomposeOutput {
        stats: tree_stats(&tree),
        tree: tree.to_doc(),
        isotopy,
    };
    println!("{}", to_json(&out)?);
    Ok(())
}

fn generate(
    kind: Kind,
    arity: Option<usize>,
    seed: u64,
) -> Result<(Quasigroup, Option<DecompositionTree>), Failure> {
    let need = |what: &str| arity.ok_or_else(|| usage(format!("gen {what} needs -n")));
    let fixed = |name: &str, n: usize| -> Result<Quasigroup, Failure> {
        match arity {
            Some(a) if a != n => Err(usage(format!("{name} has arity {n}, not {a}"))),
            _ => Ok(builtin(name)?),
        }
    };
    Ok(match kind {
        Kind::Linear => (linear(need("linear")?)?, None),
        Kind::Lbullet => (l_bullet(need("lbullet")?)?, None),
        Kind::Chain => {
            let t = chain_tree(need("chain")?)?;
            (t.eval()?, Some(t))
        }
        Kind::ConstructionT => {
            let (t, q) =
                construction_t(&random_construction_t_spec(need("construction-t")?, seed)?)?;
            (q, Some(t))
        }
        Kind::Z4 => (fixed("z4", 2)?, None),
        Kind::Xor2 => (fixed("xor2", 2)?, None),
        Kind::G3 => (fixed("g3", 3)?, None),
        Kind::H3 => (fixed("h3", 3)?, None),
    })
}

fn gen(
    kind: Kind,
    arity: Option<usize>,
    seed: u64,
    output: Option<&Path>,
    tree_out: Option<&Path>,
) -> Outcome {
    let (q, tree) = generate(kind, arity, seed)?;
    if let Some(path) = tree_out {
        let t = tree.ok_or_else(|| usage("only chain and construction-t come with a tree"))?;
        fs::write(path, t.to_json())?;
    }
    write_output(output, &q.to_qg4())
}

fn verify(file: &Path, tree: Option<&Path>, opts: &SearchOptions) -> Outcome {
    let q = load(file)?;
    let n = q.arity();
    let order = analyze_autotopies_with(&q, opts)?.group.order;
    let linear = semilinear_profile(&q).is_linear();
    let checks = BoundChecks::new(n, order, linear);
    let mut ok = checks.all();
    println!("order {order}");
    println!(
        "lower bound 2^{} <= {order}: {}",
        n / 2 + 2,
        if checks.lower { "ok" } else { "violated" }
    );
    if linear {
        let met = order as u128 == 6 * pow4(n);
        println!(
            "linear upper bound 6*4^{n} met with equality: {}",
            if met { "ok" } else { "violated" }
        );
    } else {
        println!(
            "nonlinear upper bound {order} <= 2*4^{n}: {}",
            if checks.nonlinear_max && checks.upper {
                "ok"
            } else {
                "violated"
            }
        );
    }
    if let Some(path) = tree {
        let t = load_tree(path)?;
        let same = t.eval()? == q;
        let s = tree_stats(&t);
        println!(
            "tree evaluates to input: {}",
            if same { "ok" } else { "violated" }
        );
        println!(
            "Gamma = V - B ({} = {} - {}): {}",
            s.bunches,
            s.nodes,
            s.bridges,
            if s.bunch_count_identity() {
                "ok"
            } else {
                "violated"
            }
        );
        ok &= same && s.bunch_count_identity();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: "verification failed".into(),
        })
    }
}

fn isotopic(first: &Path, second: &Path, opts: &SearchOptions) -> Outcome {
    match are_isotopic_with(&load(first)?, &load(second)?, opts)? {
        Some(t) => println!("{t}"),
        None => println!("none"),
    }
    Ok(())
}

fn enumerate(arity: usize, opts: &SearchOptions) -> Outcome {
    if arity != 2 {
        return Err(usage("enumerate supports only -n 2"));
    }
    let squares = latin_squares();
    let mut orders: BTreeMap<u64, usize> = BTreeMap::new();
    for q in &squares {
        *orders
            .entry(analyze_autotopies_with(q, opts)?.group.order)
            .or_default() += 1;
    }
    println!("squares {}", squares.len());
    for (order, count) in orders {
        println!("order {order}: {count}");
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    if cli.max_arity > DEFAULT_ARITY_CAP {
        eprintln!(
            "warning: search cap raised to arity {}; brute-force cost grows like 16^n",
            cli.max_arity
        );
    }
    let opts = SearchOptions {
        max_arity: cli.max_arity,
        ..SearchOptions::default()
    };
    match cli.command {
        Command::Analyze { file, json } => analyze(&file, json, &opts),
        Command::Atp {
            file,
            generators,
            elements,
        } => atp(&file, generators, elements, &opts),
        Command::Decompose {
            file,
            proper,
            reduced,
        } => decompose(&file, proper, reduced),
        Command::Gen {
            kind,
            arity,
            seed,
            output,
            tree,
        } => gen(kind, arity, seed, output.as_deref(), tree.as_deref()),
        Command::Verify { file, tree } => verify(&file, tree.as_deref(), &opts),
        Command::Isotopic { first, second } => isotopic(&first, &second, &opts),
        Command::Enumerate { arity } => enumerate(arity, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
