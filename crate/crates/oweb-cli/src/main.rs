//! `oweb` — command-line frontend for the orthogonal-web verification
//! library: relation suites, expression evaluation, hom dimensions, and
//! matrix dumps, with deterministic human and JSON output.
//!
//! Exit codes: 0 all checks pass, 1 at least one relation failed,
//! 2 usage error / size cap exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use oweb::classical;
use oweb::extalg;
use oweb::intertwiners::Morphisms;
use oweb::qcombinat;
use oweb::qrep::{build_context, RepContext};
use oweb::report::{self, RelationRecord, Status};
use oweb::weblang;
use std::process::ExitCode;

/// Default size cap (matrix cells) for suite instances and queries.
const DEFAULT_MAX_DIM: usize = 65536;

#[derive(Parser)]
#[command(name = "oweb", version, about = "Exact verification of the quantum orthogonal web category")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Relations,
    Extalg,
    Classical,
    Coefficients,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report per-instance pass/fail.
    Verify {
        /// Rank of the orthogonal group O(m).
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Size cap in matrix cells; instances above it are skipped.
        #[arg(long)]
        max_dim: Option<usize>,
        /// Largest k for the classical clasp/antisymmetrizer checks.
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Parse, typecheck, and evaluate a web expression.
    Eval {
        #[arg(long)]
        m: usize,
        /// Expression, e.g. "cup(1);cap(1)" or "m(1,1);s(1,1)".
        expr: String,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Exact dimension of the intertwiner space between two words.
    Dim {
        #[arg(long)]
        m: usize,
        /// Comma-separated labels, e.g. "1,1" (empty string for the unit).
        #[arg(long, default_value = "")]
        source: String,
        #[arg(long, default_value = "")]
        target: String,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Dump a cached intertwiner matrix.
    Dump {
        #[arg(long)]
        m: usize,
        /// One of: braiding, braiding-neg, mul, split, cup, cap, psi, phi,
        /// phi1, quad.
        #[arg(long)]
        op: String,
        /// Labels for the op: one integer for cup/cap/psi/phi, two
        /// comma-separated for mul/split.
        #[arg(long, default_value = "")]
        labels: String,
        #[arg(long, value_enum, default_value = "json")]
        format: DumpFormat,
    },
}

fn effective_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("OWEB_MAX_DIM")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_MAX_DIM)
}

/// A representation context for rank m is only built when the total
/// dimension 2^m of the exterior algebra fits under the cap; otherwise
/// every instance that needs it is reported as skipped.
fn context_fits(m: usize, cap: usize) -> bool {
    m < usize::BITS as usize && (1usize << m) <= cap
}

fn skip_record(name: &str, m: usize) -> RelationRecord {
    RelationRecord::with_params(name, &[("m", m as i64)], Status::Skip, 0, 0, 0)
}

fn relations_records(ctx: Option<&RepContext>, m: usize, cap: usize) -> Vec<RelationRecord> {
    match ctx {
        Some(ctx) => weblang::relation_suite_with_cap(ctx, cap),
        None => vec![skip_record("relation-suite", m)],
    }
}

fn extalg_records(m: usize, cap: usize) -> Vec<RelationRecord> {
    if !context_fits(m, cap) {
        return vec![skip_record("extalg-ambiguity", m)];
    }
    let rep = extalg::ambiguity_check(m);
    rep.entries
        .iter()
        .map(|e| {
            let params: Vec<(&str, i64)> = vec![
                ("m", m as i64),
                ("x", e.word[0] as i64),
                ("y", e.word[1] as i64),
                ("z", e.word[2] as i64),
            ];
            let status = if e.pass { Status::Pass } else { Status::Fail };
            RelationRecord::with_params(
                "extalg-ambiguity",
                &params,
                status,
                0,
                0,
                usize::from(!e.pass),
            )
        })
        .collect()
}

fn classical_records(
    ctx: Option<&RepContext>,
    m: usize,
    cap: usize,
    max_k: usize,
) -> Vec<RelationRecord> {
    let mut out = Vec::new();
    let Some(ctx) = ctx else {
        return vec![skip_record("classical-suite", m)];
    };
    let mi = m as i64;
    let from_bool = |name: &str, params: &[(&str, i64)], r: Result<bool, classical::ClassicalError>| {
        match r {
            Ok(true) => RelationRecord::with_params(name, params, Status::Pass, 0, 0, 0),
            Ok(false) => RelationRecord::with_params(name, params, Status::Fail, 0, 0, 1),
            Err(classical::ClassicalError::TooLarge { .. }) => {
                RelationRecord::with_params(name, params, Status::Skip, 0, 0, 0)
            }
            Err(e) => panic!("classical check {name} errored: {e}"),
        }
    };

    out.push(from_bool(
        "classical-crossing",
        &[("m", mi)],
        classical::classical_crossing_check(ctx),
    ));
    for k in 1..=max_k.min(m) {
        out.push(from_bool(
            "clasp-equals-signed-permutation-sum",
            &[("m", mi), ("k", k as i64)],
            classical::claspvssym_check(ctx, k, cap),
        ));
    }
    for k in 1..max_k.min(m) {
        out.push(from_bool(
            "doublecoset-recursion",
            &[("m", mi), ("k", k as i64)],
            classical::doublecoset_recursion_check(m, k, cap),
        ));
    }
    // a_{m+1} = 0 and the clasp through Λ^{m+1} vanishes
    match classical::antisymmetrizer(m, m + 1, cap) {
        Ok(a) => out.push(RelationRecord::with_params(
            "antisymmetrizer-vanishes-beyond-rank",
            &[("m", mi), ("k", mi + 1)],
            if a.is_zero() { Status::Pass } else { Status::Fail },
            a.nnz(),
            0,
            a.nnz(),
        )),
        Err(classical::ClassicalError::TooLarge { .. }) => out.push(RelationRecord::with_params(
            "antisymmetrizer-vanishes-beyond-rank",
            &[("m", mi), ("k", mi + 1)],
            Status::Skip,
            0,
            0,
            0,
        )),
        Err(e) => panic!("antisymmetrizer errored: {e}"),
    }
    out
}

fn coefficient_records() -> Vec<RelationRecord> {
    qcombinat::identity_checks()
        .into_iter()
        .map(|c| {
            let status = if c.pass { Status::Pass } else { Status::Fail };
            RelationRecord::with_params(
                &format!("coefficient:{}", c.description),
                &[("m", c.m)],
                status,
                0,
                0,
                usize::from(!c.pass),
            )
        })
        .collect()
}

fn cmd_verify(m: usize, suite: Suite, json: bool, cap: usize, max_k: usize) -> ExitCode {
    if m == 0 {
        eprintln!("error: m must be at least 1");
        return ExitCode::from(2);
    }
    let ctx = if context_fits(m, cap) {
        Some(build_context(m).expect("m >= 1"))
    } else {
        None
    };
    let mut records = Vec::new();
    if matches!(suite, Suite::Relations | Suite::All) {
        records.extend(relations_records(ctx.as_ref(), m, cap));
    }
    if matches!(suite, Suite::Extalg | Suite::All) {
        records.extend(extalg_records(m, cap));
    }
    if matches!(suite, Suite::Classical | Suite::All) {
        records.extend(classical_records(ctx.as_ref(), m, cap, max_k));
    }
    if matches!(suite, Suite::Coefficients | Suite::All) {
        records.extend(coefficient_records());
    }
    let (pass, fail, skip) = report::tally(&records);
    if json {
        let doc = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "m": m,
            "suite": match suite {
                Suite::Relations => "relations",
                Suite::Extalg => "extalg",
                Suite::Classical => "classical",
                Suite::Coefficients => "coefficients",
                Suite::All => "all",
            },
            "records": records,
            "summary": { "pass": pass, "fail": fail, "skip": skip },
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        print!("{}", report::to_table(&records));
    }
    if fail > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_eval(m: usize, expr: &str, cap: usize) -> ExitCode {
    if m == 0 || !context_fits(m, cap) {
        eprintln!("error: rank {m} exceeds the size cap (or is zero)");
        return ExitCode::from(2);
    }
    let e = match weblang::parse(expr) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    if let Err(err) = weblang::typecheck(&e) {
        eprintln!("error: {err}");
        return ExitCode::from(2);
    }
    let ctx = build_context(m).expect("m >= 1");
    let ev = weblang::Evaluator::new(&ctx);
    match ev.measure(&e) {
        Ok((_, _, cells)) if cells > cap => {
            eprintln!("error: expression needs {cells} matrix cells, cap is {cap}");
            return ExitCode::from(2);
        }
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
        _ => {}
    }
    let f = match ev.eval(&e) {
        Ok(f) => f,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    if f.mat.nrows() == 1 && f.mat.ncols() == 1 && f.source.iter().all(|&l| l == 0)
        && f.target.iter().all(|&l| l == 0)
    {
        println!("{}", f.mat.get(0, 0));
    } else {
        println!(
            "matrix {}x{}  source {:?}  target {:?}",
            f.mat.nrows(),
            f.mat.ncols(),
            f.source,
            f.target
        );
        for (r, c, v) in f.mat.entries() {
            println!("({r},{c}) = {v}");
        }
    }
    ExitCode::SUCCESS
}

fn parse_word(text: &str) -> Result<Vec<usize>, String> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(vec![]);
    }
    t.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad label '{p}'"))
        })
        .collect()
}

fn cmd_dim(m: usize, source: &str, target: &str, cap: usize) -> ExitCode {
    if m == 0 || !context_fits(m, cap) {
        eprintln!("error: rank {m} exceeds the size cap (or is zero)");
        return ExitCode::from(2);
    }
    let (s, t) = match (parse_word(source), parse_word(target)) {
        (Ok(s), Ok(t)) => (s, t),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = build_context(m).expect("m >= 1");
    match ctx.hom_dim(&s, &t, cap) {
        Ok(d) => {
            println!("{d}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_dump(m: usize, op: &str, labels: &str, format: DumpFormat, cap: usize) -> ExitCode {
    if m == 0 || !context_fits(m, cap) {
        eprintln!("error: rank {m} exceeds the size cap (or is zero)");
        return ExitCode::from(2);
    }
    let labels = match parse_word(labels) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let one_label = |d: &[usize]| -> usize { d.first().copied().unwrap_or(1) };
    let two_labels = |d: &[usize]| -> (usize, usize) {
        (
            d.first().copied().unwrap_or(1),
            d.get(1).copied().unwrap_or(1),
        )
    };
    let ctx = build_context(m).expect("m >= 1");
    let mo = Morphisms::new(&ctx);
    let (mat, source, target) = match op {
        "braiding" => {
            let f = mo.braiding(true);
            (f.mat, f.source, f.target)
        }
        "braiding-neg" => {
            let f = mo.braiding(false);
            (f.mat, f.source, f.target)
        }
        "mul" => {
            let (i, j) = two_labels(&labels);
            if i + j > m {
                eprintln!("error: mul labels {i},{j} exceed rank {m}");
                return ExitCode::from(2);
            }
            let f = mo.mul_map(i, j);
            (f.mat, f.source, f.target)
        }
        "split" => {
            let (i, j) = two_labels(&labels);
            if i + j > m {
                eprintln!("error: split labels {i},{j} exceed rank {m}");
                return ExitCode::from(2);
            }
            let f = mo.split(i, j);
            (f.mat, f.source, f.target)
        }
        "cup" => {
            let k = one_label(&labels);
            if k > m {
                eprintln!("error: cup label {k} exceeds rank {m}");
                return ExitCode::from(2);
            }
            let f = mo.cup(k);
            (f.mat, f.source, f.target)
        }
        "cap" => {
            let k = one_label(&labels);
            if k > m {
                eprintln!("error: cap label {k} exceeds rank {m}");
                return ExitCode::from(2);
            }
            let f = mo.cap(k);
            (f.mat, f.source, f.target)
        }
        "psi" => {
            let k = one_label(&labels);
            if k > m {
                eprintln!("error: psi label {k} exceeds rank {m}");
                return ExitCode::from(2);
            }
            (mo.psi(k), vec![k], vec![k])
        }
        "phi" => {
            let k = one_label(&labels);
            if k > m {
                eprintln!("error: phi label {k} exceeds rank {m}");
                return ExitCode::from(2);
            }
            (mo.phi(k), vec![k], vec![k])
        }
        "phi1" => (mo.phi1(), vec![1], vec![1]),
        "quad" => {
            let f = mo.quad_vertex();
            (f.mat, f.source, f.target)
        }
        other => {
            eprintln!("error: unknown op '{other}'");
            return ExitCode::from(2);
        }
    };
    match format {
        DumpFormat::Json => {
            let entries: Vec<serde_json::Value> = mat
                .entries()
                .map(|(r, c, v)| serde_json::json!([r, c, v.to_string()]))
                .collect();
            let doc = serde_json::json!({
                "m": m,
                "op": op,
                "labels": labels,
                "source": source,
                "target": target,
                "rows": mat.nrows(),
                "cols": mat.ncols(),
                "entries": entries,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        DumpFormat::Csv => {
            println!("row,col,value");
            for (r, c, v) in mat.entries() {
                println!("{r},{c},\"{v}\"");
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            m,
            suite,
            json,
            max_dim,
            max_k,
        } => cmd_verify(m, suite, json, effective_cap(max_dim), max_k.unwrap_or(m + 1)),
        Command::Eval { m, expr, max_dim } => cmd_eval(m, &expr, effective_cap(max_dim)),
        Command::Dim {
            m,
            source,
            target,
            max_dim,
        } => cmd_dim(m, &source, &target, effective_cap(max_dim)),
        Command::Dump {
            m,
            op,
            labels,
            format,
        } => cmd_dump(m, &op, &labels, format, effective_cap(None)),
    }
}
