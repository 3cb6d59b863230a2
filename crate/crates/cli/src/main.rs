use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use ratindex::chart::parse_word_tree;
use ratindex::datalog::{chain_to_cfg, evaluate, parse_chain_program};
use ratindex::intersection::{bar_hillel, shortest_witness, shortest_words};
use ratindex::lab::{
    bound_value, classify, measure_rho, rho_csv, BoundFormula, Family, MeasureConfig, RhoEstimate, Strategy,
};
use ratindex::nested::{alpha_of_tree, oscillation, oscillation_bruteforce, parse_moves};
use ratindex::reach::all_pairs_reach;
use ratindex::{cyk, parse_grammar, to_cnf, CnfGrammar, Error, Grammar, LabeledGraph, Nfa};

mod selftest;

#[derive(Parser)]
#[command(name = "ratindex", version, about = "Context-free grammars against automata and graphs")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Longest well-nested word handed to the brute-force oscillation.
    #[arg(long, global = true, default_value_t = 20)]
    cap_osc_brute: usize,
    /// Largest state count for exhaustive automaton enumeration.
    #[arg(long, global = true, default_value_t = 3)]
    cap_exhaustive_n: usize,
    /// Worker threads for measure-rho (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Chomsky normal form of a grammar.
    Cnf(GrammarArg),
    /// Decide membership of a word.
    Member {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        word: String,
    },
    /// Print the trimmed product grammar with an automaton.
    Intersect {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        nfa: PathBuf,
    },
    /// Shortest word in the intersection with an automaton.
    Shortest {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        nfa: PathBuf,
        /// Also print the accepting run.
        #[arg(long)]
        path: bool,
    },
    /// All-pairs CFL-reachability as `nonterminal, source, target` lines.
    Reach {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Facts for every nonterminal instead of the start symbol only.
        #[arg(long)]
        all: bool,
    },
    /// Dimension and oscillation of a parse tree (in the grammar as written)
    /// or of a well-nested word.
    TreeMetrics {
        #[arg(long, required_unless_present = "moves")]
        grammar: Option<PathBuf>,
        #[arg(long, requires = "grammar")]
        word: Option<String>,
        /// A push/pop word such as `āaāa` or `()()`.
        #[arg(long, conflicts_with_all = ["grammar", "word"])]
        moves: Option<String>,
        /// Cross-check oscillation by exhaustive search.
        #[arg(long)]
        brute: bool,
    },
    /// Classify a grammar and sample parse trees.
    Classify {
        #[command(flatten)]
        grammar: GrammarArg,
        /// Ultralinear decomposition, one level per line, lowest first.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Measure the shortest-word growth over automata of increasing size.
    MeasureRho(MeasureArgs),
    /// Evaluate a bound formula on a range of sizes.
    Bounds(BoundsArgs),
    /// Evaluate a chain Datalog program on a graph.
    DatalogEval {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Print the grammar of the program instead of evaluating it.
        #[arg(long)]
        show_grammar: bool,
    },
    /// Run quick built-in consistency checks.
    Selftest,
}

#[derive(Args)]
struct GrammarArg {
    #[arg(long)]
    grammar: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyKind {
    /// Exhaustive up to the cap, random beyond it.
    Auto,
    Exhaustive,
    Random,
    TwoCycle,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    grammar: GrammarArg,
    #[arg(long, value_enum, default_value_t = StrategyKind::Auto)]
    strategy: StrategyKind,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    /// Automata per size for random sampling.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Cycle lengths `p:q` for the two-cycle strategy; all splits of n when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pairs: Vec<(usize, usize)>,
    /// Stop after this many automata per size and report a lower bound.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundClass {
    Linear,
    Dimension,
    Oscillation,
    Superlinear,
    Ultralinear,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    class: BoundClass,
    /// Grammar supplying |N|; overrides --nonterminals.
    #[arg(long)]
    grammar: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    nonterminals: u64,
    /// Dimension, oscillation or top ultralinear level.
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    c: u64,
    #[arg(long, default_value_t = 1)]
    n_min: u64,
    #[arg(long, default_value_t = 10)]
    n_max: u64,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (p, q) = s.split_once(':').ok_or_else(|| format!("expected p:q, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(p)?, num(q)?))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_grammar(path: &Path) -> Result<Grammar> {
    parse_grammar(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_cnf(path: &Path) -> Result<CnfGrammar> {
    let g = load_grammar(path)?;
    to_cnf(&g).with_context(|| format!("converting {} to normal form", path.display()))
}

fn load_nfa(path: &Path) -> Result<Nfa> {
    Nfa::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<LabeledGraph> {
    LabeledGraph::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_partition(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(read(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect())
}

fn node(d: &LabeledGraph, name: &str) -> Result<usize> {
    d.node_index(name).with_context(|| format!("no node `{name}` in the graph"))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Cnf(a) => write!(out, "{}", load_cnf(&a.grammar)?)?,
        Command::Member { grammar, word } => {
            let g = load_cnf(&grammar.grammar)?;
            let member = match g.tokenize(&word) {
                Ok(tokens) if tokens.is_empty() => g.epsilon_at_start(),
                Ok(tokens) => cyk::cyk_membership(&g, &tokens),
                Err(Error::NotInAlphabet(_)) => false,
                Err(e) => return Err(e.into()),
            };
            writeln!(out, "{member}")?;
        }
        Command::Intersect { grammar, nfa } => {
            let tg = bar_hillel(&load_cnf(&grammar.grammar)?, &load_nfa(&nfa)?);
            info!("{} realizable triples, {} productions", tg.triples().len(), tg.productions().len());
            write!(out, "{tg}")?;
        }
        Command::Shortest { grammar, nfa, path } => {
            let (g, k) = (load_cnf(&grammar.grammar)?, load_nfa(&nfa)?);
            let tg = bar_hillel(&g, &k);
            let table = shortest_words(&tg);
            match shortest_witness(&tg, &table) {
                None => writeln!(out, "empty")?,
                Some(w) => {
                    writeln!(out, "{}\t{}", w.word.len(), g.format_word(&w.word))?;
                    if path {
                        let run: Vec<&str> = w.path.iter().map(|&q| k.states()[q].as_str()).collect();
                        writeln!(out, "{}", run.join(" "))?;
                    }
                }
            }
        }
        Command::Reach { grammar, graph, source, target, all } => {
            let (g, d) = (load_cnf(&grammar.grammar)?, load_graph(&graph)?);
            let source = source.map(|s| node(&d, &s)).transpose()?;
            let target = target.map(|t| node(&d, &t)).transpose()?;
            let rel = all_pairs_reach(&g, &d);
            for (a, i, j) in rel.facts() {
                if (all || a == g.start()) && source.is_none_or(|s| s == i) && target.is_none_or(|t| t == j) {
                    writeln!(out, "{}\t{}\t{}", g.nonterminals()[a], d.nodes()[i], d.nodes()[j])?;
                }
            }
        }
        Command::TreeMetrics { grammar, word, moves, brute } => {
            let (dim, w) = match (grammar, word, moves) {
                (_, _, Some(m)) => (None, parse_moves(&m)?),
                (Some(path), Some(word), None) => {
                    let g = load_grammar(&path)?;
                    let tree = parse_word_tree(&g, &word)?.with_context(|| format!("`{word}` is not in the language"))?;
                    (Some(tree.dimension()), alpha_of_tree(&tree).moves().to_vec())
                }
                _ => bail!("give --grammar with --word, or --moves"),
            };
            let osc = oscillation(&w)?;
            let mut line = match dim {
                Some(d) => format!("dim={d} osc={osc}"),
                None => format!("osc={osc}"),
            };
            if brute {
                match oscillation_bruteforce(&w, cli.cap_osc_brute) {
                    Ok(b) => line += &format!(" osc_brute={b}"),
                    Err(e @ Error::CapExceeded { .. }) => warn!("skipping brute force: {e}"),
                    Err(e) => return Err(e.into()),
                }
            }
            writeln!(out, "{line}")?;
        }
        Command::Classify { grammar, partition, samples } => {
            let g = load_grammar(&grammar.grammar)?;
            let partition = partition.map(|p| load_partition(&p)).transpose()?;
            write!(out, "{}", classify(&g, partition.as_deref(), samples, cli.seed)?)?;
        }
        Command::MeasureRho(args) => {
            let config = MeasureConfig { workers: cli.workers, cap_exhaustive_n: cli.cap_exhaustive_n, budget: args.budget };
            let csv = measure(&args, cli.seed, &config)?;
            match &args.output {
                Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(csv.as_bytes())?,
            }
        }
        Command::Bounds(args) => bounds(&args, out)?,
        Command::DatalogEval { program, graph, show_grammar } => {
            let p = parse_chain_program(&read(&program)?).with_context(|| format!("parsing {}", program.display()))?;
            if show_grammar {
                write!(out, "{}", chain_to_cfg(&p)?)?;
                return Ok(());
            }
            let d = load_graph(&graph)?;
            for (i, j) in evaluate(&p, &d)? {
                writeln!(out, "{}\t{}\t{}", p.query(), d.nodes()[i], d.nodes()[j])?;
            }
        }
        Command::Selftest => {
            if !selftest::run(out)? {
                bail!("self-test failed");
            }
        }
    }
    Ok(())
}

fn measure(args: &MeasureArgs, seed: u64, config: &MeasureConfig) -> Result<String> {
    let g = load_cnf(&args.grammar.grammar)?;
    let mut jobs: Vec<(usize, Strategy)> = Vec::new();
    match args.strategy {
        StrategyKind::TwoCycle if !args.pairs.is_empty() => {
            for &(p, q) in &args.pairs {
                jobs.push((p + q, Strategy::Family(Family::TwoCycle { p, q })));
            }
        }
        kind => {
            if args.n_min == 0 || args.n_min > args.n_max {
                bail!("need 1 <= n-min <= n-max");
            }
            for n in args.n_min..=args.n_max {
                let random = Strategy::Random { count: args.count, seed };
                let strategy = match kind {
                    StrategyKind::Auto if n <= config.cap_exhaustive_n && g.terminals().len() <= 2 => Strategy::Exhaustive,
                    StrategyKind::Exhaustive => Strategy::Exhaustive,
                    StrategyKind::TwoCycle => Strategy::Family(Family::TwoCycleSplits),
                    _ => random,
                };
                jobs.push((n, strategy));
            }
        }
    }
    let mut points: Vec<RhoEstimate> = Vec::new();
    for (n, strategy) in jobs {
        let estimate = match measure_rho(&g, n, &strategy, config) {
            Ok(e) => e,
            Err(Error::BudgetExceeded { partial }) => {
                warn!("n={n}: budget reached after {} automata, reporting a lower bound", partial.tested_count);
                *partial
            }
            Err(e) => return Err(e).with_context(|| format!("measuring n={n}")),
        };
        info!("n={n}: value {:?} over {} automata", estimate.value, estimate.tested_count);
        points.push(estimate);
    }
    Ok(rho_csv(&g, &points))
}

fn bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<()> {
    let nonterminals = match &args.grammar {
        Some(path) => load_grammar(path)?.nonterminals().len() as u64,
        None => args.nonterminals,
    };
    let (k, c) = (args.k, args.c);
    let formula = match args.class {
        BoundClass::Linear => BoundFormula::Linear { c },
        BoundClass::Dimension => BoundFormula::Dimension { nonterminals, d: k, c },
        BoundClass::Oscillation => BoundFormula::Oscillation { nonterminals, k, c },
        BoundClass::Superlinear => BoundFormula::Superlinear { c },
        BoundClass::Ultralinear => BoundFormula::Ultralinear { k, c },
    };
    // An ultralinear grammar with top level k has trees of dimension at most
    // k + 1, so the dimension bound applies as well and is reported beside it.
    let companion = matches!(args.class, BoundClass::Ultralinear)
        .then(|| BoundFormula::Dimension { nonterminals, d: k + 1, c });
    info!("bound {formula}");
    match &companion {
        Some(_) => writeln!(out, "n,bound,dimension_bound")?,
        None => writeln!(out, "n,bound")?,
    }
    for n in args.n_min..=args.n_max {
        match &companion {
            Some(d) => writeln!(out, "{n},{},{}", bound_value(&formula, n), bound_value(d, n))?,
            None => writeln!(out, "{n},{}", bound_value(&formula, n))?,
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RATINDEX_LOG", "warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Into::into));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
