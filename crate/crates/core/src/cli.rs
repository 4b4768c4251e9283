//! Command-line front end: expansion tables, Dedekind-sum evaluation,
//! trajectory traces, cluster verification, and the identity-verification
//! suite, in text, CSV, or JSON.
//!
//! Exit codes: 0 = all checks passed, 1 = a mathematical check failed,
//! 2 = invalid input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::Signed;

use crate::asymptotics::{
    self, integer_parts, required_nhat, cluster_check, verify_mirror_identity, verify_shift_identity,
    verify_ksequence_values, verify_shifted_ksequence,
};
use crate::cfrac::convergents_of;
use crate::dedekind::{bhk, s_naive, s_reciprocity, BhkSweep, DedekindSum};
use crate::error::{Error, Result};
use crate::format::{format_fixed, format_rational, format_scientific, parse_decimal};
use crate::numerics::Int;
use crate::shallit::{check_symmetry, Expansion, Symmetry};

#[derive(Parser)]
#[command(
    name = "dedekind-cluster",
    version,
    about = "Exact Dedekind sums along the convergents of sum(1/b^(2^j)) and certified \
             verification of their cluster structure"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the output to a file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Fractional digits in decimal renderings
    #[arg(long, global = true, default_value_t = 12)]
    digits: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the partial quotients a_1..a_{2^j} of the expansion of x(b)
    Expand {
        /// Base b >= 3
        #[arg(long)]
        b: u64,
        /// Level j >= 1; the table has 2^j rows
        #[arg(long)]
        j: u32,
    },
    /// Dedekind sum s(m/n) and S(m/n) = 12 s(m/n), cross-checked across methods
    Sum {
        /// Numerator of a coprime pair (pair mode, with --n)
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        /// Denominator of a coprime pair (pair mode, with --m)
        #[arg(long)]
        n: Option<u64>,
        /// Base of the expansion (convergent mode, with --k)
        #[arg(long)]
        b: Option<u64>,
        /// Convergent index (convergent mode, with --b)
        #[arg(long)]
        k: Option<usize>,
        /// Largest denominator for which the O(n) defining sum is evaluated
        #[arg(long, default_value_t = 100_000)]
        naive_limit: u64,
    },
    /// Trace k, a_k, L(k), S(s_k/t_k) along the convergents of x(b)
    Trace {
        #[arg(long)]
        b: u64,
        /// Last index to trace (rows run k = 0..=max-k)
        #[arg(long)]
        max_k: usize,
    },
    /// Localize r cluster values for (b, i) and check convergence of the sums
    Cluster {
        #[arg(long)]
        b: u64,
        /// Interval index i >= 0
        #[arg(long)]
        i: u32,
        /// Number of cluster values to separate
        #[arg(long)]
        r: u32,
        /// Largest sampled shift; must be at least 2^(i+r+3)
        #[arg(long)]
        nhat_max: usize,
        /// Target enclosure width (exact decimal, e.g. 1e-12)
        #[arg(long, default_value = "1e-12")]
        eps: String,
    },
    /// Run the whole identity-verification suite over a grid
    Verify {
        /// Base or inclusive base range, e.g. 3 or 3..6
        #[arg(long)]
        b: String,
        /// Largest block size n = 2^m in the sweeps
        #[arg(long, default_value_t = 2048)]
        max_n: usize,
        /// Largest index i in the k-sequence checks
        #[arg(long, default_value_t = 4)]
        max_i: u32,
        /// Largest count r in the shifted k-sequence checks
        #[arg(long, default_value_t = 4)]
        max_r: u32,
        /// Fault-injection hook: bump quotient a_K before checking
        #[arg(long, hide = true, value_name = "K")]
        corrupt: Option<usize>,
    },
}

/// A rendered result table; the single carrier for all three output formats.
struct Table {
    command: &'static str,
    config: Vec<(&'static str, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    pass: bool,
}

impl Table {
    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut config = serde_json::Map::new();
        for (k, v) in &self.config {
            config.insert((*k).to_string(), serde_json::Value::String(v.clone()));
        }
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert((*col).to_string(), serde_json::Value::String(cell.clone()));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut top = serde_json::Map::new();
        top.insert("command".into(), serde_json::Value::String(self.command.into()));
        top.insert("config".into(), serde_json::Value::Object(config));
        top.insert("rows".into(), serde_json::Value::Array(rows));
        top.insert("pass".into(), serde_json::Value::Bool(self.pass));
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(top))
            .expect("JSON rendering cannot fail");
        s.push('\n');
        s
    }

    fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.config {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        let header: Vec<String> = self
            .columns
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<width$}", width = w))
            .collect();
        out.push_str(header.join("  ").trim_end());
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> =
                row.iter().zip(&widths).map(|(c, w)| format!("{c:<width$}", width = w)).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str(&format!("pass: {}\n", self.pass));
        out
    }
}

/// Parse the process arguments, run the command, and return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(table) => {
            let rendered = table.render(cli.format);
            if let Err(e) = emit(&cli.out, &rendered) {
                eprintln!("error: {e}");
                return 2;
            }
            if table.pass {
                0
            } else {
                1
            }
        }
        Err(Error::DistinctnessUndecided) => {
            eprintln!("error: {}", Error::DistinctnessUndecided);
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(out: &Option<PathBuf>, rendered: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered),
        None => std::io::stdout().write_all(rendered.as_bytes()),
    }
}

fn execute(cli: &Cli) -> Result<Table> {
    match &cli.command {
        Command::Expand { b, j } => cmd_expand(*b, *j),
        Command::Sum { m, n, b, k, naive_limit } => {
            cmd_sum(*m, *n, *b, *k, *naive_limit, cli.digits)
        }
        Command::Trace { b, max_k } => cmd_trace(*b, *max_k, cli.digits),
        Command::Cluster { b, i, r, nhat_max, eps } => {
            cmd_cluster(*b, *i, *r, *nhat_max, eps, cli.digits)
        }
        Command::Verify { b, max_n, max_i, max_r, corrupt } => {
            cmd_verify(b, *max_n, *max_i, *max_r, *corrupt)
        }
    }
}

fn cmd_expand(b: u64, j: u32) -> Result<Table> {
    let exp = Expansion::new(b, j)?;
    let rows = exp
        .quotients()
        .iter()
        .enumerate()
        .map(|(idx, &a)| vec![(idx + 1).to_string(), a.to_string()])
        .collect();
    Ok(Table {
        command: "expand",
        config: vec![("b", b.to_string()), ("j", j.to_string())],
        columns: vec!["k", "a_k"],
        rows,
        pass: true,
    })
}

fn sum_row(
    m: &Int,
    n: &Int,
    value: &DedekindSum,
    methods: &str,
    agree: bool,
    digits: u32,
) -> Vec<String> {
    let s = value.classical();
    let scaled = value.scaled();
    vec![
        m.to_string(),
        n.to_string(),
        format_rational(s),
        format_fixed(s, digits),
        format_rational(&scaled),
        format_fixed(&scaled, digits),
        methods.to_string(),
        agree.to_string(),
    ]
}

const SUM_COLUMNS: [&str; 8] = ["m", "n", "s", "s_decimal", "S", "S_decimal", "methods", "agree"];

fn cmd_sum(
    m: Option<i64>,
    n: Option<u64>,
    b: Option<u64>,
    k: Option<usize>,
    naive_limit: u64,
    digits: u32,
) -> Result<Table> {
    match (m, n, b, k) {
        (Some(m), Some(n), None, None) => {
            let (m, n) = (Int::from(m), Int::from(n));
            let by_descent = s_reciprocity(&m, &n)?;
            let (methods, agree) = if n <= Int::from(naive_limit) {
                ("naive+reciprocity", s_naive(&m, &n)? == by_descent)
            } else {
                ("reciprocity", true)
            };
            Ok(Table {
                command: "sum",
                config: vec![
                    ("mode", "pair".into()),
                    ("m", m.to_string()),
                    ("n", n.to_string()),
                    ("naive_limit", naive_limit.to_string()),
                ],
                columns: SUM_COLUMNS.to_vec(),
                rows: vec![sum_row(&m, &n, &by_descent, methods, agree, digits)],
                pass: agree,
            })
        }
        (None, None, Some(b), Some(k)) => {
            let mut exp = Expansion::new(b, 1)?;
            exp.ensure_len(k)?;
            let terms = std::iter::once(0u64).chain(exp.quotients()[..k].iter().copied());
            let conv = convergents_of(terms).last().expect("non-empty walk");
            let by_formula = bhk(exp.quotients(), k)?;
            let by_descent = s_reciprocity(&conv.num, &conv.den)?;
            let mut agree = by_formula == by_descent;
            let methods = if conv.den <= Int::from(naive_limit) {
                agree = agree && s_naive(&conv.num, &conv.den)? == by_formula;
                "bhk+reciprocity+naive"
            } else {
                "bhk+reciprocity"
            };
            Ok(Table {
                command: "sum",
                config: vec![
                    ("mode", "convergent".into()),
                    ("b", b.to_string()),
                    ("k", k.to_string()),
                    ("naive_limit", naive_limit.to_string()),
                ],
                columns: SUM_COLUMNS.to_vec(),
                rows: vec![sum_row(&conv.num, &conv.den, &by_formula, methods, agree, digits)],
                pass: agree,
            })
        }
        _ => Err(Error::Usage("sum needs either --m and --n, or --b and --k".to_string())),
    }
}

fn cmd_trace(b: u64, max_k: usize, digits: u32) -> Result<Table> {
    let mut exp = Expansion::new(b, 1)?;
    exp.ensure_len(max_k)?;
    let l = integer_parts(&exp)?;
    let sums: Vec<DedekindSum> = BhkSweep::new(exp.quotients(), max_k)?.collect();
    let rows = (0..=max_k)
        .map(|k| {
            let a_k = if k == 0 { 0 } else { exp.quotients()[k - 1] };
            let scaled = sums[k].scaled();
            vec![
                k.to_string(),
                a_k.to_string(),
                l[k].to_string(),
                format_rational(&scaled),
                format_fixed(&scaled, digits),
            ]
        })
        .collect();
    Ok(Table {
        command: "trace",
        config: vec![("b", b.to_string()), ("max_k", max_k.to_string())],
        columns: vec!["k", "a_k", "L", "S", "S_decimal"],
        rows,
        pass: true,
    })
}

fn cmd_cluster(
    b: u64,
    i: u32,
    r: u32,
    nhat_max: usize,
    eps_text: &str,
    digits: u32,
) -> Result<Table> {
    let eps = parse_decimal(eps_text)?;
    if !eps.is_positive() {
        return Err(Error::NonPositiveEps);
    }
    let reports = cluster_check(b, i, r, &eps, nhat_max)?;
    let pass = reports.iter().all(|rep| rep.passed());
    let rows = reports
        .iter()
        .map(|rep| {
            let samples: Vec<String> = rep
                .samples
                .iter()
                .map(|s| {
                    format!(
                        "{}:{}:{}",
                        s.nhat,
                        format_fixed(&s.value, digits),
                        format_scientific(&s.distance_upper, 3)
                    )
                })
                .collect();
            vec![
                rep.target.l.to_string(),
                rep.target.k_il.to_string(),
                format_rational(&rep.target.predicted_lo),
                format_rational(&rep.target.predicted_hi),
                format_rational(rep.target.limit.lo()),
                format_rational(rep.target.limit.hi()),
                format_fixed(&rep.target.limit.midpoint(), digits),
                rep.in_interval.to_string(),
                rep.disjoint.to_string(),
                rep.strictly_converging.to_string(),
                format_scientific(&rep.final_distance, 3),
                format_rational(&rep.tolerance),
                samples.join(";"),
            ]
        })
        .collect();
    Ok(Table {
        command: "cluster",
        config: vec![
            ("b", b.to_string()),
            ("i", i.to_string()),
            ("r", r.to_string()),
            ("nhat_max", nhat_max.to_string()),
            ("eps", eps_text.to_string()),
        ],
        columns: vec![
            "l",
            "k_il",
            "predicted_lo",
            "predicted_hi",
            "limit_lo",
            "limit_hi",
            "limit_decimal",
            "in_interval",
            "disjoint",
            "converging",
            "final_distance",
            "tolerance",
            "samples",
        ],
        rows,
        pass,
    })
}

fn parse_base_range(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::BadDecimal(text.to_string());
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.parse().map_err(|_| bad())?;
        let hi: u64 = hi.parse().map_err(|_| bad())?;
        if lo < 3 {
            return Err(Error::BaseTooSmall(lo));
        }
        if hi < lo || hi - lo > 64 {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        let b: u64 = text.parse().map_err(|_| bad())?;
        if b < 3 {
            return Err(Error::BaseTooSmall(b));
        }
        Ok(vec![b])
    }
}

fn cmd_verify(
    b_text: &str,
    max_n: usize,
    max_i: u32,
    max_r: u32,
    corrupt: Option<usize>,
) -> Result<Table> {
    if !max_n.is_power_of_two() || max_n < 8 {
        return Err(Error::NotPowerOfTwo { value: max_n as u64, min: 8 });
    }
    let bases = parse_base_range(b_text)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut pass = true;
    let push = |rows: &mut Vec<Vec<String>>, check: &str, b: u64, n: usize, extra: String, ok: bool| {
        rows.push(vec![check.to_string(), b.to_string(), n.to_string(), extra, ok.to_string()]);
    };
    for &b in &bases {
        // the k-sequence check at (max_i, max_n) reaches the deepest index
        let deepest = asymptotics::k_seq(max_i, max_n)?.k.max(2 * max_n + max_n / 2);
        let mut exp = Expansion::new(b, 1)?;
        exp.ensure_len(deepest)?;
        if let Some(k) = corrupt {
            exp.corrupt_quotient(k)?;
        }

        let mut n = 4;
        while n <= max_n {
            let ok = check_symmetry(&exp, Symmetry::Reflection, n)?;
            pass &= ok;
            push(&mut rows, "quotient-reflection", b, n, String::new(), ok);
            let ok = verify_mirror_identity(&exp, n)?;
            pass &= ok;
            push(&mut rows, "integer-part-mirror", b, n, String::new(), ok);
            if n >= 8 {
                let ok = check_symmetry(&exp, Symmetry::Palindrome, n)?;
                pass &= ok;
                push(&mut rows, "quotient-palindrome", b, n, String::new(), ok);
                let ok = check_symmetry(&exp, Symmetry::Repetition, n)?;
                pass &= ok;
                push(&mut rows, "quotient-repetition", b, n, String::new(), ok);
                let ok = verify_shift_identity(&exp, n)?;
                pass &= ok;
                push(&mut rows, "integer-part-shift", b, n, String::new(), ok);
                let ok = verify_ksequence_values(&exp, n, max_i)?;
                pass &= ok;
                push(&mut rows, "integer-part-ksequence", b, n, format!("i<={max_i}"), ok);
            }
            n *= 2;
        }
        for i in 0..=max_i {
            for r in 1..=max_r {
                let mut nhat = required_nhat(i, r)?;
                while nhat <= max_n {
                    let ok = verify_shifted_ksequence(&exp, i, r, nhat)?;
                    pass &= ok;
                    push(
                        &mut rows,
                        "integer-part-shifted-ksequence",
                        b,
                        nhat,
                        format!("i={i};r={r}"),
                        ok,
                    );
                    nhat *= 2;
                }
            }
        }
    }
    Ok(Table {
        command: "verify",
        config: vec![
            ("b", b_text.to_string()),
            ("max_n", max_n.to_string()),
            ("max_i", max_i.to_string()),
            ("max_r", max_r.to_string()),
            ("corrupt", corrupt.map(|k| k.to_string()).unwrap_or_else(|| "none".into())),
        ],
        columns: vec!["check", "b", "n", "extra", "pass"],
        rows,
        pass,
    })
}
