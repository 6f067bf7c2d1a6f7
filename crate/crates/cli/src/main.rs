//! Command-line interface for the game-value engine: parse posets, games,
//! regions and strips; enumerate, canonicalize, compare, monotonize, combine;
//! evaluate Hex regions; and run the strip pipeline.
//!
//! Exit codes: 0 success, 1 I/O error, 2 parse error, 3 precondition or
//! unsupported input, 4 resource limit, 5 property violation.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hexval::algebra::{
    map_game, opposite, opposite_universe, parse_binary_map, parse_unary_map, sum, sum_map,
    sum_universe, PairMemo, UnaryMemo,
};
use hexval::canonical::{canonical_form, canonical_form_traced};
use hexval::enumerate::{enumerate_canonical_passable, hasse, EnumerateBudget};
use hexval::error::Error;
use hexval::lr::{left_classes, right_classes};
use hexval::monotone::{shrink_monotone, to_monotone};
use hexval::poset::Poset;
use hexval::region::{parse_region, region_value};
use hexval::strip::{
    benefit_table_k4, best_patterns, build_outcome_poset, build_outcome_poset_ordered,
    detect_period, min_connecting_stones, verify_certificate, OutcomeOrder,
};
use hexval::text::{parse_game, print_game};
use hexval::Universe;

#[derive(Parser)]
#[command(name = "hexval", version, about = "combinatorial game values for Hex regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cap on interned game terms.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    budget_nodes: usize,

    /// Approximate memory budget in megabytes.
    #[arg(long, global = true, default_value_t = 8192)]
    budget_mb: usize,

    /// Worker count; accepted for compatibility, results never depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all canonical passable values over a poset up to a depth.
    Enumerate {
        poset: String,
        #[arg(long)]
        depth: usize,
        /// Write the Hasse diagram as `edge <a> <b>` lines.
        #[arg(long)]
        hasse: Option<String>,
    },
    /// Reduce a game expression to canonical form.
    Canon {
        poset: String,
        game: String,
        /// Print one simplification step per line.
        #[arg(long)]
        trace: bool,
    },
    /// Compare two games: <=, <|, and equivalence, both ways.
    Compare { poset: String, game1: String, game2: String },
    /// Replace a passable game by an equivalent monotone game.
    Monotonize { poset: String, game: String },
    /// Disjunctive sum of two games over the product poset.
    Sum { poset1: String, poset2: String, game1: String, game2: String },
    /// Relabel a game along a monotone map file (`map: a -> b` lines).
    Map { poset_src: String, poset_dst: String, map_file: String, game: String },
    /// Mapped sum: f(G + H) for a binary map file (`map: a b -> c` lines).
    SumMap {
        poset1: String,
        poset2: String,
        poset_target: String,
        map_file: String,
        game1: String,
        game2: String,
    },
    /// The opposite game over the reversed poset.
    Opp { poset: String, game: String },
    /// One representative option set per left/right equivalence class of the
    /// enumerated catalog.
    LrClasses {
        poset: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Side::Left)]
        side: Side,
    },
    /// Evaluate a Hex region file: canonical value and its outcome poset.
    HexEval {
        region: String,
        /// Override the empty-cell budget.
        #[arg(long)]
        budget_cells: Option<usize>,
    },
    /// Strip pipeline for k x n boards.
    Strip {
        #[command(subcommand)]
        cmd: StripCmd,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Args)]
struct StripOpts {
    #[arg(short)]
    k: usize,
    /// Use the behavioral simulation order on outcomes (faster for k=5).
    #[arg(long)]
    simulation_order: bool,
}

#[derive(Subcommand)]
enum StripCmd {
    /// Minimum black stones for a virtual connection on the k x n board.
    MinStones {
        #[command(flatten)]
        opts: StripOpts,
        #[arg(short)]
        n: usize,
    },
    /// Min-stones table for widths k..=N.
    Table {
        #[command(flatten)]
        opts: StripOpts,
        #[arg(long)]
        to: usize,
    },
    /// Best pattern triples at one width.
    Best {
        #[command(flatten)]
        opts: StripOpts,
        #[arg(short)]
        n: usize,
    },
    /// Verify the cost/benefit certificate (k = 4).
    Certify {
        #[command(flatten)]
        opts: StripOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } => 2,
        Error::InvalidArgument(_) | Error::Precondition(_) | Error::UnsupportedPoset(_) => 3,
        Error::ResourceLimit(_) => 4,
        Error::PropertyViolation(_) | Error::Internal(_) => 5,
    }
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))
}

fn load_poset(path: &str) -> Result<Poset, Error> {
    Poset::parse(&read(path)?)
}

struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn new(format: Format) -> Self {
        Out { format, buf: String::new() }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Human => {
                let _ = writeln!(self.buf, "{key}: {value}");
            }
            Format::Records => {
                let _ = writeln!(self.buf, "{key}\t{value}");
            }
        }
    }

    fn line(&mut self, text: impl std::fmt::Display) {
        let _ = writeln!(self.buf, "{text}");
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    let mut out = Out::new(cli.format);
    match &cli.command {
        Command::Enumerate { poset, depth, hasse: hasse_path } => {
            let p = load_poset(poset)?;
            let mut u = Universe::new(p);
            let budget = EnumerateBudget {
                max_terms: cli
                    .budget_nodes
                    .min(cli.budget_mb.saturating_mul(1024 * 1024) / 96),
                ..Default::default()
            };
            let catalog = enumerate_canonical_passable(&mut u, *depth, &budget)?;
            let values = catalog.all_values();
            for (i, &g) in values.iter().enumerate() {
                match cli.format {
                    Format::Human => out.line(format_args!(
                        "G{i} (depth {}) = {}",
                        u.depth(g),
                        print_game(&u, g)
                    )),
                    Format::Records => out.kv(&format!("G{i}"), print_game(&u, g)),
                }
            }
            out.kv("total", values.len());
            out.kv(
                "per-depth",
                catalog
                    .by_depth
                    .iter()
                    .map(|v| v.len().to_string())
                    .collect::<Vec<_>>()
                    .join("/"),
            );
            if !catalog.complete {
                out.kv("complete", "no (budget reached)");
            }
            if let Some(path) = hasse_path {
                let edges = hasse(&mut u, &values);
                let mut text = String::new();
                for (i, j) in edges {
                    let _ = writeln!(text, "edge G{i} G{j}");
                }
                std::fs::write(path, text)
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}")))?;
                out.kv("hasse", path);
            }
        }
        Command::Canon { poset, game, trace } => {
            let p = load_poset(poset)?;
            let mut u = Universe::new(p);
            let g = parse_game(&mut u, game)?;
            if *trace {
                let (c, steps) = canonical_form_traced(&mut u, g);
                for step in &steps {
                    out.line(step.describe(&u));
                }
                out.kv("canonical", print_game(&u, c));
            } else {
                let c = canonical_form(&mut u, g);
                out.kv("canonical", print_game(&u, c));
            }
        }
        Command::Compare { poset, game1, game2 } => {
            let p = load_poset(poset)?;
            let mut u = Universe::new(p);
            let g = parse_game(&mut u, game1)?;
            let h = parse_game(&mut u, game2)?;
            out.kv("leq", u.leq(g, h));
            out.kv("geq", u.leq(h, g));
            out.kv("tri", u.tri(g, h));
            out.kv("tri-rev", u.tri(h, g));
            let verdict = if u.equivalent(g, h) {
                "equivalent"
            } else if u.leq(g, h) {
                "strictly-below"
            } else if u.leq(h, g) {
                "strictly-above"
            } else {
                "incomparable"
            };
            out.kv("verdict", verdict);
        }
        Command::Monotonize { poset, game } => {
            let p = load_poset(poset)?;
            let mut u = Universe::new(p);
            let g = parse_game(&mut u, game)?;
            let m = to_monotone(&mut u, g)?;
            out.kv("monotone", print_game(&u, m));
            out.kv("depth", u.depth(m));
            out.kv("nodes", u.position_count(m));
            let s = shrink_monotone(&mut u, m)?;
            out.kv("shrunk", print_game(&u, s));
            out.kv("shrunk-depth", u.depth(s));
            out.kv("shrunk-nodes", u.position_count(s));
        }
        Command::Sum { poset1, poset2, game1, game2 } => {
            let pa = load_poset(poset1)?;
            let pb = load_poset(poset2)?;
            let mut ua = Universe::new(pa);
            let mut ub = Universe::new(pb);
            let g = parse_game(&mut ua, game1)?;
            let h = parse_game(&mut ub, game2)?;
            let mut dst = sum_universe(&ua, &ub)?;
            let mut memo = PairMemo::default();
            let s = sum(&ua, &ub, &mut dst, g, h, &mut memo)?;
            out.kv("sum", print_game(&dst, s));
            let c = canonical_form(&mut dst, s);
            out.kv("canonical", print_game(&dst, c));
        }
        Command::Map { poset_src, poset_dst, map_file, game } => {
            let ps = load_poset(poset_src)?;
            let pd = load_poset(poset_dst)?;
            let f = parse_unary_map(&ps, &pd, &read(map_file)?)?;
            let mut us = Universe::new(ps);
            let mut ud = Universe::new(pd);
            let g = parse_game(&mut us, game)?;
            let mut memo = UnaryMemo::default();
            let m = map_game(&us, &mut ud, &f, g, &mut memo)?;
            out.kv("mapped", print_game(&ud, m));
            let c = canonical_form(&mut ud, m);
            out.kv("canonical", print_game(&ud, c));
        }
        Command::SumMap { poset1, poset2, poset_target, map_file, game1, game2 } => {
            let pa = load_poset(poset1)?;
            let pb = load_poset(poset2)?;
            let pc = load_poset(poset_target)?;
            let f = parse_binary_map(&pa, &pb, &pc, &read(map_file)?)?;
            let mut ua = Universe::new(pa);
            let mut ub = Universe::new(pb);
            let g = parse_game(&mut ua, game1)?;
            let h = parse_game(&mut ub, game2)?;
            let mut dst = Universe::new(pc);
            let mut memo = PairMemo::default();
            let s = sum_map(&ua, &ub, &mut dst, &f, g, h, &mut memo)?;
            out.kv("sum", print_game(&dst, s));
            let c = canonical_form(&mut dst, s);
            out.kv("canonical", print_game(&dst, c));
        }
        Command::Opp { poset, game } => {
            let p = load_poset(poset)?;
            let mut u = Universe::new(p);
            let g = parse_game(&mut u, game)?;
            let mut dst = opposite_universe(&u)?;
            let mut memo = UnaryMemo::default();
            let o = opposite(&u, &mut dst, g, &mut memo)?;
            out.kv("opposite", print_game(&dst, o));
        }
        Command::LrClasses { poset, depth, side } => {
            let p = load_poset(poset)?;
            let mut u = Universe::new(p);
            let catalog = enumerate_canonical_passable(&mut u, *depth, &Default::default())?;
            let values = catalog.all_values();
            let reps = match side {
                Side::Left => left_classes(&mut u, &values)?,
                Side::Right => right_classes(&mut u, &values)?,
            };
            for rep in &reps {
                let texts: Vec<String> = rep.iter().map(|&g| print_game(&u, g)).collect();
                out.line(texts.join(" "));
            }
            out.kv("classes", reps.len());
        }
        Command::HexEval { region, budget_cells } => {
            let mut r = parse_region(&read(region)?)?;
            if let Some(b) = budget_cells {
                r.set_budget(*b);
            }
            let eval = region_value(&r)?;
            let poset = eval.universe.poset();
            out.kv("region", r.name());
            out.kv(
                "outcome-poset",
                poset
                    .atoms()
                    .map(|(_, s)| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            for (a, b) in poset.covers() {
                out.kv("cover", format_args!("{} < {}", poset.atom_name(a), poset.atom_name(b)));
            }
            out.kv("value", print_game(&eval.universe, eval.value));
        }
        Command::Strip { cmd } => run_strip(cmd, &mut out)?,
    }
    Ok(out.buf)
}

fn strip_ctx(opts: &StripOpts) -> Result<hexval::strip::StripCtx, Error> {
    if opts.simulation_order {
        build_outcome_poset_ordered(opts.k, OutcomeOrder::Simulation)
    } else {
        build_outcome_poset(opts.k)
    }
}

fn run_strip(cmd: &StripCmd, out: &mut Out) -> Result<(), Error> {
    match cmd {
        StripCmd::MinStones { opts, n } => {
            let mut ctx = strip_ctx(opts)?;
            let rows = best_patterns(&mut ctx, (*n).min(opts.k * 4))?;
            let stones = min_connecting_stones(&mut ctx, &rows, *n)?;
            out.kv("k", opts.k);
            out.kv("n", n);
            out.kv("min-stones", stones);
            // witness pattern when the width was computed directly
            if *n < rows.len() {
                if let Some(t) = rows[*n]
                    .iter()
                    .find(|t| t.stones == stones)
                {
                    for &(r, c) in &t.pattern {
                        out.line(format_args!("B {r} {c}"));
                    }
                }
            }
        }
        StripCmd::Table { opts, to } => {
            let mut ctx = strip_ctx(opts)?;
            let rows = best_patterns(&mut ctx, (*to).min(opts.k * 4))?;
            for n in opts.k..=*to {
                let stones = min_connecting_stones(&mut ctx, &rows, n)?;
                out.kv(&format!("n{n}"), stones);
            }
        }
        StripCmd::Best { opts, n } => {
            let mut ctx = strip_ctx(opts)?;
            let rows = best_patterns(&mut ctx, *n)?;
            for t in &rows[*n] {
                let coords: Vec<String> =
                    t.pattern.iter().map(|(r, c)| format!("B {r} {c}")).collect();
                out.line(format_args!(
                    "({}, {}, {})  {}",
                    print_game(&ctx.universe, t.value),
                    t.stones,
                    t.width,
                    coords.join("  ")
                ));
            }
            out.kv("triples", rows[*n].len());
        }
        StripCmd::Certify { opts } => {
            if opts.k != 4 {
                return Err(Error::Precondition("certify supports k = 4".into()));
            }
            let mut ctx = strip_ctx(opts)?;
            let table = benefit_table_k4(&mut ctx)?;
            let report = verify_certificate(&mut ctx, &table)?;
            out.kv("step-cases", report.step_cases);
            out.kv("step-failures", report.step_failures.len());
            out.kv("base-cases", report.base_cases);
            out.kv("base-failures", report.base_failures.len());
            out.kv("benefit-monotone", report.monotone_ok);
            for f in report.step_failures.iter().chain(&report.base_failures) {
                out.line(format_args!("FAIL {f}"));
            }
            // the detected period, as certificate context
            let rows = best_patterns(&mut ctx, 10)?;
            let (p, q, base) = detect_period(&mut ctx, &rows)?;
            out.kv("period", format_args!("width+{p} stones+{q} from width {base}"));
            if !report.passed() {
                return Err(Error::PropertyViolation("cost/benefit certificate failed".into()));
            }
            out.kv("certificate", "pass");
        }
    }
    Ok(())
}
