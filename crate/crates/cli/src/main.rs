use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use operad_pbw::bar::{BarComplex, HomologyReport};
use operad_pbw::corpus::load;
use operad_pbw::dual::{dual, DualMode};
use operad_pbw::field::Field;
use operad_pbw::format::{parse_element, print, with_field};
use operad_pbw::free::pointed_shuffles;
use operad_pbw::ideal::{check_pbw, dimension_table, ExactReducer, PbwReport};
use operad_pbw::presentation::Presentation;
use operad_pbw::rewrite::RewriteSystem;

#[derive(Parser)]
#[command(name = "operad-pbw", version, about = "PBW bases, Koszul duals and bar homology of quadratic operads")]
struct Cli {
    /// Output style for reports.
    #[arg(long, value_enum, default_value_t = Style::Table, global = true)]
    format: Style,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Style {
    Table,
    Json,
    /// One `s r d value` line per number.
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the PBW basis cell by cell.
    Check {
        file: String,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Print the dual presentation.
    Dual {
        file: String,
        #[arg(long, default_value = "kdual")]
        mode: DualMode,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Dimensions of the weight-graded components.
    Dims {
        file: String,
        #[arg(long)]
        max_arity: usize,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Homology of the reduced bar construction.
    Bar {
        file: String,
        #[arg(long)]
        max_weight: usize,
        #[arg(long)]
        max_arity: usize,
        /// Override the ground field (`Q` or `F<p>`, e.g. `F101`).
        #[arg(long)]
        field: Option<Field>,
        /// Skip cells with more chains than this.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    /// Normal form of an element.
    Nf {
        file: String,
        #[arg(long)]
        expr: String,
        /// Reduce by cellwise elimination instead of rewriting.
        #[arg(long)]
        exact: bool,
    },
    /// List the pointed shuffles of type (m, n, i).
    Shuffles { m: usize, n: usize, i: usize },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn split(p: &Presentation) -> Result<RewriteSystem, Failure> {
    Ok(RewriteSystem::new(p)?)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Check { file, max_weight, max_arity } => {
            let rs = split(&load(file)?)?;
            let report = check_pbw(&rs, *max_weight, *max_arity);
            show_check(cli.format, &report);
            if let Some(c) = report.first_failure() {
                eprintln!(
                    "not PBW at weight {} arity {}: {} basis monomials, dimension {}",
                    c.weight, c.arity, c.basis_count, c.dimension
                );
                if let Some(w) = &c.witness {
                    eprintln!("relation among basis monomials: {w} = 0");
                }
            }
            Ok(report.is_pbw())
        }
        Command::Dual { file, mode, output } => {
            let rs = split(&load(file)?)?;
            let text = print(&dual(&rs, *mode)?);
            match output {
                Some(path) => fs::write(path, text).map_err(|e| Failure(format!("cannot write `{path}`: {e}")))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Dims { file, max_arity, max_weight } => {
            let rs = split(&load(file)?)?;
            let table = dimension_table(&rs, *max_weight, *max_arity);
            match cli.format {
                Style::Table => {
                    println!("{:>3} {:>3} {:>10}", "s", "r", "dim");
                    for (s, r, d) in &table {
                        println!("{s:>3} {r:>3} {d:>10}");
                    }
                }
                Style::Json => {
                    let cells: Vec<_> = table.iter().map(|(s, r, d)| json!({"s": s, "r": r, "dim": d})).collect();
                    println!("{}", json!({"name": rs.presentation().name, "cells": cells}));
                }
                Style::Records => {
                    for (s, r, d) in &table {
                        println!("{}", json!({"s": s, "r": r, "d": null, "value": d}));
                    }
                }
            }
            Ok(true)
        }
        Command::Bar { file, max_weight, max_arity, field, cap } => {
            let mut p = load(file)?;
            if let Some(f) = field {
                p = with_field(&p, *f)?;
            }
            let rs = split(&p)?;
            let report = BarComplex::new(&rs).homology(*max_weight, *max_arity, *cap);
            show_bar(cli.format, &report);
            for c in report.cells.iter().filter(|c| c.skipped) {
                eprintln!("skipped weight {} arity {}: more than {cap} chains", c.weight, c.arity);
            }
            Ok(report.is_diagonal())
        }
        Command::Nf { file, expr, exact } => {
            let rs = split(&load(file)?)?;
            let x = parse_element(rs.gens(), expr)?;
            let y = if *exact { ExactReducer::new(&rs).reduce(&x) } else { rs.normal_form(&x)? };
            println!("{}", y.display(rs.gens()));
            Ok(true)
        }
        Command::Shuffles { m, n, i } => {
            if *i == 0 || i > m || *n == 0 {
                return Err(Failure(format!("need 1 <= i <= m and n >= 1, got m={m} n={n} i={i}")));
            }
            for w in pointed_shuffles(*m, *n, *i).iter() {
                println!("{w}");
            }
            Ok(true)
        }
    }
}

fn show_check(style: Style, report: &PbwReport) {
    match style {
        Style::Table => {
            println!("{}: quadratic basis {}", report.name, report.quadratic_basis.join(", "));
            println!("{:>3} {:>3} {:>10} {:>10} {:>10} {:>10}  ok", "s", "r", "monomials", "ideal", "dim", "basis");
            for c in report.cells.iter().filter(|c| c.monomials > 0) {
                println!(
                    "{:>3} {:>3} {:>10} {:>10} {:>10} {:>10}  {}",
                    c.weight,
                    c.arity,
                    c.monomials,
                    c.ideal_rank,
                    c.dimension,
                    c.basis_count,
                    if c.ok() { "yes" } else { "NO" }
                );
            }
        }
        Style::Json => println!("{}", serde_json::to_string(report).expect("serializable")),
        Style::Records => {
            for c in &report.cells {
                println!("{}", json!({"s": c.weight, "r": c.arity, "d": null, "value": c.dimension}));
            }
        }
    }
}

fn show_bar(style: Style, report: &HomologyReport) {
    match style {
        Style::Table => {
            println!("{}: homology ranks by bar degree", report.name);
            println!("{:>3} {:>3}  {:<24} {:>6} {:>6}  d^2=0", "s", "r", "H_1..H_s", "K", "dual");
            for c in &report.cells {
                let h = if c.skipped { "skipped".to_string() } else { format!("{:?}", c.homology) };
                println!(
                    "{:>3} {:>3}  {:<24} {:>6} {:>6}  {}",
                    c.weight, c.arity, h, c.koszul_dim, c.dual_basis_count, c.square_zero
                );
            }
        }
        Style::Json => {
            let cells: Vec<_> = report
                .cells
                .iter()
                .map(|c| {
                    let ranks: Vec<_> = c.homology.iter().enumerate().map(|(k, h)| json!([k + 1, h])).collect();
                    json!({"s": c.weight, "r": c.arity, "homology": ranks, "koszul_dim": c.koszul_dim,
                           "dual_basis_count": c.dual_basis_count, "square_zero": c.square_zero, "skipped": c.skipped})
                })
                .collect();
            println!("{}", json!({"name": report.name, "diagonal": report.is_diagonal(), "cells": cells}));
        }
        Style::Records => {
            for c in report.cells.iter().filter(|c| !c.skipped) {
                for (k, h) in c.homology.iter().enumerate() {
                    println!("{}", json!({"s": c.weight, "r": c.arity, "d": k + 1, "value": h}));
                }
            }
        }
    }
}
