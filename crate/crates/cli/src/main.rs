use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncrs_core::catalog::{apply_mapping, mapping_table, FamilyId, MappingId};
use ncrs_core::identity::{
    residual, residual_with, suite_cases, trace_identity, IdentityId, Mode, Report,
    DEFAULT_MAX_ORDER,
};
use ncrs_core::limits::{compare_with_classical, limit_mapping_set, LimitMode};
use ncrs_core::textio::{
    parse_poly, print_limit, print_poly, print_report, print_table, print_trace, Format,
};
use ncrs_core::Error;

/// `println!` that tolerates a closed stdout (e.g. piping into `head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// Symbolic verification of continual Lie algebras with noncommutative
/// tensor-power root spaces.
#[derive(Parser)]
#[command(name = "ncrs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every applicable identity of a family on generic monomials.
    Verify {
        family: FamilyId,
        /// Largest argument order tried (ignored with --orders).
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        /// Check a single order triple, e.g. 2,1,1.
        #[arg(long, value_parser = parse_orders)]
        orders: Option<Orders>,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate one mapping on two expressions.
    Apply {
        family: FamilyId,
        mapping: MappingId,
        #[arg(allow_hyphen_values = true)]
        phi: String,
        #[arg(allow_hyphen_values = true)]
        psi: String,
        #[arg(long, default_value = "ascii")]
        format: Format,
    },
    /// Commutative limit of a noncommutative family.
    Limit {
        family: FamilyId,
        #[arg(long, default_value = "order-one")]
        mode: LimitMode,
        /// Run redjac1-4 (or witt-jacobi) on the limit, with and without
        /// Leibniz expansion.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Show the expansion of one identity step by step.
    Trace {
        family: FamilyId,
        identity: IdentityId,
        #[arg(long, value_parser = parse_orders)]
        orders: Orders,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long, default_value = "ascii")]
        format: Format,
    },
    /// Print the defining formulas of a family and their generic values.
    Table {
        family: FamilyId,
        /// Orders of the generic arguments, e.g. 2,1.
        #[arg(long, value_parser = parse_orders, default_value = "1,1")]
        orders: Orders,
        #[arg(long, default_value = "ascii")]
        format: Format,
    },
}

#[derive(Args)]
struct ModeFlags {
    /// Sort atoms inside every word before the zero test.
    #[arg(long)]
    commutative: bool,
    /// Expand derivatives of products by the Leibniz rule (implies
    /// --commutative).
    #[arg(long)]
    leibniz: bool,
}

impl ModeFlags {
    /// Classical families live in a commutative algebra, so they are always
    /// checked commutatively.
    fn mode_for(&self, family: FamilyId) -> Mode {
        Mode::new(self.commutative || family.is_classical(), self.leibniz)
    }
}

#[derive(Clone)]
struct Orders(Vec<usize>);

fn parse_orders(s: &str) -> Result<Orders, String> {
    let orders: Vec<usize> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad order `{x}`"))
        })
        .collect::<Result<_, _>>()?;
    if orders.is_empty() || orders.len() > 3 || orders.contains(&0) {
        return Err("orders are 1 to 3 positive integers separated by commas".into());
    }
    Ok(Orders(orders))
}

enum Outcome {
    Pass,
    Violated,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(reports: &[Report], json: bool) -> Outcome {
    let fmt = if json { Format::Json } else { Format::Ascii };
    for r in reports {
        out!("{}", print_report(r, fmt));
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if !json {
        out!(
            "{} checks, {} passed, {} failed",
            reports.len(),
            reports.len() - failed,
            failed
        );
    }
    if failed == 0 {
        Outcome::Pass
    } else {
        Outcome::Violated
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Verify {
            family,
            max_order,
            orders,
            mode,
            json,
        } => {
            let mode = mode.mode_for(family);
            let reports = match orders {
                Some(Orders(orders)) => {
                    let wanted = orders.len().max(2);
                    suite_cases(&family, 1, mode)
                        .into_iter()
                        .filter(|(id, _)| id.arity() <= wanted)
                        .map(|(id, _)| residual(family, id, &pad(&orders, id.arity()), mode))
                        .collect::<Result<Vec<_>, _>>()?
                }
                None => suite_cases(&family, max_order.max(1), mode)
                    .into_iter()
                    .map(|(id, o)| residual(family, id, &o, mode))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            Ok(emit(&reports, json))
        }
        Command::Apply {
            family,
            mapping,
            phi,
            psi,
            format,
        } => {
            let phi = parse_poly(&phi)?;
            let psi = parse_poly(&psi)?;
            out!(
                "{}",
                print_poly(&apply_mapping(family, mapping, &phi, &psi)?, format)
            );
            Ok(Outcome::Pass)
        }
        Command::Limit {
            family,
            mode,
            verify,
            json,
        } => {
            let set = limit_mapping_set(family, mode)?;
            let reference = family.classical_counterpart();
            let comparison = match reference {
                Some(r) => compare_with_classical(&set, r)?,
                None => Vec::new(),
            };
            let fmt = if json { Format::Json } else { Format::Ascii };
            let reference_name = reference.map(|r| r.to_string());
            out!(
                "{}",
                print_limit(&set, &comparison, reference_name.as_deref(), fmt).trim_end()
            );
            if !verify {
                return Ok(Outcome::Pass);
            }
            let ids: Vec<IdentityId> = if family.is_single() {
                vec![IdentityId::Redjac1, IdentityId::WittJacobi]
            } else {
                IdentityId::LOCAL.to_vec()
            };
            let mut reports = Vec::new();
            for m in [Mode::COMMUTATIVE, Mode::LEIBNIZ] {
                for id in &ids {
                    reports.push(residual_with(&set, *id, &[1, 1, 1], m)?);
                }
            }
            Ok(emit(&reports, json))
        }
        Command::Trace {
            family,
            identity,
            orders,
            mode,
            format,
        } => {
            let t = trace_identity(
                family,
                identity,
                &pad(&orders.0, identity.arity()),
                mode.mode_for(family),
            )?;
            out!("{}", print_trace(&t, format).trim_end());
            Ok(if t.residual().is_zero() {
                Outcome::Pass
            } else {
                Outcome::Violated
            })
        }
        Command::Table {
            family,
            orders,
            format,
        } => {
            let o = pad(&orders.0, 2);
            let entries = mapping_table(family, (o[0], o[1]))?;
            out!(
                "{}",
                print_table(family.name(), &entries, format).trim_end()
            );
            Ok(Outcome::Pass)
        }
    }
}

/// Repeats the last order until `n` orders are given; extra orders are kept
/// and truncated by the engine.
fn pad(orders: &[usize], n: usize) -> Vec<usize> {
    let mut v = orders.to_vec();
    while v.len() < n {
        v.push(*orders.last().unwrap_or(&1));
    }
    v
}
