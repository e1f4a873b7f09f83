//! Command-line front end: basis listings, composition and rewriting of
//! operation words, dimension tables and the verification checks.

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use partition_ops::check::{
    adem_r_sweep, bar_check, bm_agreement, dual_confluence, lie_suite, nishida_suite, stability,
    translation_bijection, CheckReport,
};
use partition_ops::dual::{normal_form_dual, unstable_ext_basis, DualElement, DualOpWord, Variant};
use partition_ops::free::{bm_basis, dims_bm, dims_free, free_basis};
use partition_ops::par::Exec;
use partition_ops::power::{compose, op_basis, PowerOp, RWord};
use partition_ops::primal::{primal_adem_rewrite, word_degree};
use partition_ops::steenrod::{parse_mixed, slinear_op_basis, steenrod_adem_rewrite, SlinearAlgebra, SteenrodWord};
use partition_ops::word::{show_word, tokenize, Letter};
use partition_ops::Prime;

const WORD_SYNTAX: &str = "\
Word syntax: letters separated by spaces, written outermost first and applied
right to left. R-letters `R3`, `bR2` (odd p), a trailing `B` for the
self-bracket; Dyer-Lashof letters `Q3`, `bQ1`; Steenrod letters `Sq2`, `P1`,
`bP1` (= β P^1), `b` alone for β. `1` is the identity word.

Degrees are homotopy (homological) degrees unless --cohomological is given,
which negates every displayed degree.

The environment variable PARTITION_OPS_MEM_MB caps the memory of the bar
complex oracle (default 2048).";

#[derive(Parser, Debug)]
#[command(name = "partition-ops", version, about = "Enumerate, compose, rewrite and check power operations on partition Lie algebras", after_help = WORD_SYNTAX)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Display cohomological degrees (negated).
    #[arg(long, global = true)]
    cohomological: bool,
    /// Seed for sampled property runs, echoed in the output metadata.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List a basis sorted by weight, degree and word.
    #[command(allow_negative_numbers = true)]
    Basis(BasisArgs),
    /// Compose two operation words: OUTER after INNER on a class of degree j.
    #[command(allow_negative_numbers = true)]
    Compose(ComposeArgs),
    /// Put a word in normal form.
    #[command(allow_negative_numbers = true)]
    Rewrite(RewriteArgs),
    /// Run a verification sweep; exits with status 1 on any failure.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Dimensions of the free basis and the sequence count per cell.
    #[command(allow_negative_numbers = true)]
    Dims(DimsArgs),
}

#[derive(Args, Debug, Clone)]
struct WindowArgs {
    /// Lowest degree listed.
    #[arg(long = "min-degree", allow_hyphen_values = true)]
    min_degree: Option<i64>,
    /// Highest degree listed.
    #[arg(long = "max-degree", allow_hyphen_values = true)]
    max_degree: Option<i64>,
    /// Degree window as LO:HI (overrides --min-degree/--max-degree).
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
}

impl WindowArgs {
    /// The window in homotopy degrees. Explicit bounds are read in the
    /// displayed grading; the defaults `lo`, `hi` are homotopy degrees.
    fn resolve(&self, cohomological: bool, lo: i64, hi: i64) -> Result<(i64, i64)> {
        let given = self.window.or(match (self.min_degree, self.max_degree) {
            (None, None) => None,
            (a, b) if cohomological => Some((a.unwrap_or(-hi), b.unwrap_or(-lo))),
            (a, b) => Some((a.unwrap_or(lo), b.unwrap_or(hi))),
        });
        let (lo, hi) = match given {
            Some((a, b)) if cohomological => (-b, -a),
            Some(w) => w,
            None => (lo, hi),
        };
        ensure!(hi.saturating_sub(lo) <= 100_000, "degree window {lo}:{hi} is too wide");
        Ok((lo, hi))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BasisKind {
    /// Admissible R-words on a class of degree j.
    Unary,
    /// The free algebra on generators of degrees --gens.
    Free,
    /// Operations on a class of degree j over the sphere.
    Slinear,
    /// Admissible dual words on a class of degree j.
    Ext,
}

#[derive(Args, Debug)]
struct BasisArgs {
    #[arg(long, value_enum, default_value_t = BasisKind::Unary)]
    kind: BasisKind,
    #[arg(short, default_value_t = 2)]
    p: u32,
    #[arg(short, default_value_t = 0)]
    j: i64,
    /// Generator degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    gens: Vec<i64>,
    /// List only these weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u64>,
    /// Largest weight listed (default p^2).
    #[arg(long = "weight-cap")]
    weight_cap: Option<u64>,
    /// Dual variant for --kind ext.
    #[arg(long, value_enum, default_value_t = VariantArg::Additive)]
    variant: VariantArg,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Additive,
    Full,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Additive => Variant::Additive,
            VariantArg::Full => Variant::Full,
        }
    }
}

#[derive(Args, Debug)]
struct ComposeArgs {
    #[arg(short, default_value_t = 2)]
    p: u32,
    /// Degree of the class the inner word acts on.
    #[arg(short)]
    j: i64,
    /// Outer word, applied second.
    outer: String,
    /// Inner word, applied first.
    inner: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RewriteKind {
    /// R-words in the power ring on a class of degree j.
    R,
    /// Dyer-Lashof words.
    Primal,
    /// Dual words, written in Q-notation for the dual letters.
    Dual,
    /// Steenrod monomials.
    Steenrod,
    /// Mixed Steenrod and R-words evaluated on a class of degree j.
    Nishida,
}

#[derive(Args, Debug)]
struct RewriteArgs {
    #[arg(long, value_enum, default_value_t = RewriteKind::R)]
    kind: RewriteKind,
    #[arg(short, default_value_t = 2)]
    p: u32,
    #[arg(short, default_value_t = 0)]
    j: i64,
    /// Dual variant for --kind dual.
    #[arg(long, value_enum, default_value_t = VariantArg::Additive)]
    variant: VariantArg,
    word: String,
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Free basis against the sequence count in every cell.
    #[command(allow_negative_numbers = true)]
    Bm {
        #[arg(short, default_value_t = 2)]
        p: u32,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        gens: Vec<i64>,
        #[arg(long = "weight-cap", default_value_t = 16)]
        weight_cap: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Bar complex homology against admissible dual words (p = 2).
    #[command(allow_negative_numbers = true)]
    Bar {
        #[arg(short, default_value_t = 2)]
        p: u32,
        #[arg(short, default_value_t = 0)]
        j: i64,
        /// Weight cap, at most 4.
        #[arg(short = 'W', default_value_t = 4)]
        w: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Dual confluence, operation Adem relations and the translation bijection.
    #[command(allow_negative_numbers = true)]
    Adem {
        #[arg(short, default_value_t = 2)]
        p: u32,
        /// Letter indices range over [-N, N].
        #[arg(long = "index-window", default_value_t = 8)]
        index_window: i64,
        /// Sources range over [-N, N].
        #[arg(long = "source-window", default_value_t = 4)]
        source_window: i64,
    },
    /// Restricted Lie axioms on a free algebra.
    #[command(allow_negative_numbers = true)]
    Lie {
        #[arg(short, default_value_t = 2)]
        p: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        gens: Vec<i64>,
        #[arg(long = "weight-cap", default_value_t = 6)]
        weight_cap: u64,
    },
    /// Nishida relations: homogeneity and agreement of evaluation orders.
    Nishida {
        #[arg(short, default_value_t = 2)]
        p: u32,
        #[arg(long = "index-window", default_value_t = 8)]
        index_window: i64,
        #[arg(long = "source-window", default_value_t = 4)]
        source_window: i64,
    },
    /// Stability of operations under suspension.
    Stability {
        #[arg(short, default_value_t = 2)]
        p: u32,
        #[arg(long = "source-window", default_value_t = 4)]
        source_window: i64,
        #[arg(long = "width", default_value_t = 12)]
        width: i64,
    },
}

#[derive(Args, Debug)]
struct DimsArgs {
    #[arg(short, default_value_t = 2)]
    p: u32,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    gens: Vec<i64>,
    #[arg(long = "weight-cap", default_value_t = 8)]
    weight_cap: u64,
    #[command(flatten)]
    window: WindowArgs,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

/// One listed element.
#[derive(Clone, Debug, Serialize)]
struct Row {
    word: String,
    degree: i64,
    weight: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<u32>,
}

/// Echo of the configuration in machine-readable output.
#[derive(Clone, Debug, Serialize)]
struct Meta {
    command: String,
    p: Option<u32>,
    grading: &'static str,
    window: Option<(i64, i64)>,
    weight_cap: Option<u64>,
    format: Format,
    seed: u64,
}

struct Ctx {
    format: Format,
    cohomological: bool,
    seed: u64,
    exec: Exec,
}

impl Ctx {
    fn meta(&self, command: &str, p: Option<Prime>, window: Option<(i64, i64)>, weight_cap: Option<u64>) -> Meta {
        let window = window.map(|(lo, hi)| if self.cohomological { (-hi, -lo) } else { (lo, hi) });
        Meta {
            command: command.to_string(),
            p: p.map(Prime::get),
            grading: if self.cohomological { "cohomological" } else { "homotopy" },
            window,
            weight_cap,
            format: self.format,
            seed: self.seed,
        }
    }

    fn degree(&self, d: i64) -> i64 {
        if self.cohomological {
            -d
        } else {
            d
        }
    }

    fn emit_rows(&self, meta: &Meta, mut rows: Vec<Row>, text: Option<String>) -> Result<()> {
        for r in &mut rows {
            r.degree = self.degree(r.degree);
        }
        let out = io::stdout();
        let mut out = out.lock();
        match self.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Doc<'a> {
                    meta: &'a Meta,
                    rows: &'a [Row],
                }
                serde_json::to_writer_pretty(&mut out, &Doc { meta, rows: &rows })?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["word", "degree", "weight", "coeff"])?;
                for r in &rows {
                    let c = r.coefficients.map(|c| c.to_string()).unwrap_or_default();
                    w.write_record([r.word.clone(), r.degree.to_string(), r.weight.to_string(), c])?;
                }
                w.flush()?;
            }
            Format::Text => match text {
                Some(t) => writeln!(out, "{t}")?,
                None => {
                    for r in &rows {
                        match r.coefficients {
                            Some(c) => writeln!(out, "{}\t{}\t{}\t{}", r.word, r.degree, r.weight, c)?,
                            None => writeln!(out, "{}\t{}\t{}", r.word, r.degree, r.weight)?,
                        }
                    }
                }
            },
        }
        Ok(())
    }
}

fn prime(p: u32) -> Result<Prime> {
    Prime::new(p).with_context(|| format!("-p {p}"))
}

/// Sorts by weight, displayed degree and word.
fn sort_rows(ctx: &Ctx, rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        (a.weight, ctx.degree(a.degree), &a.word).cmp(&(b.weight, ctx.degree(b.degree), &b.word))
    });
}

/// Number of letters whose weight p^k stays within the cap.
fn letters_within(p: Prime, cap: u64) -> usize {
    let mut k = 0;
    while (p.get() as u64).saturating_pow(k as u32 + 1) <= cap {
        k += 1;
    }
    k
}

fn show_dual(w: &DualOpWord) -> String {
    if w.letters.is_empty() {
        return "1".into();
    }
    w.letters
        .iter()
        .map(|l| format!("({})*", l.show("Q")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_basis(ctx: &Ctx, a: &BasisArgs) -> Result<()> {
    let p = prime(a.p)?;
    let cap = match (a.weights.iter().max(), a.weight_cap) {
        (Some(&m), Some(c)) => m.min(c),
        (Some(&m), None) => m,
        (None, Some(c)) => c,
        (None, None) => (p.get() as u64).pow(2),
    };
    let keep = |w: u64| w <= cap && (a.weights.is_empty() || a.weights.contains(&w));
    let base = if a.kind == BasisKind::Free {
        a.gens.iter().copied().min().unwrap_or(0)
    } else {
        a.j
    };
    let reach = cap as i64 * (base.abs() + 1) + 20;
    let (lo, hi) = a.window.resolve(ctx.cohomological, base - reach, base + reach)?;
    let mut rows: Vec<Row> = match a.kind {
        BasisKind::Unary => op_basis(p, a.j, letters_within(p, cap), lo, hi)
            .into_iter()
            .map(|w| Row {
                word: w.to_string(),
                degree: w.target(),
                weight: w.weight(),
                coefficients: None,
            })
            .collect(),
        BasisKind::Free => {
            ensure!(!a.gens.is_empty(), "--gens is empty");
            free_basis(p, &a.gens, lo, hi, cap, ctx.exec)
                .into_iter()
                .map(|e| Row {
                    word: e.show(),
                    degree: e.degree(),
                    weight: e.weight(),
                    coefficients: None,
                })
                .collect()
        }
        BasisKind::Slinear => {
            let (alg, basis) = slinear_op_basis(p, a.j, lo, hi, cap, ctx.exec);
            basis
                .into_iter()
                .map(|e| Row {
                    word: alg.show(&e),
                    degree: e.degree(),
                    weight: e.weight(),
                    coefficients: None,
                })
                .collect()
        }
        BasisKind::Ext => {
            let k = letters_within(p, cap);
            unstable_ext_basis(p, a.j, a.variant.into(), k, lo, hi)
                .into_iter()
                .map(|w| Row {
                    word: show_dual(&w),
                    degree: w.total_target(),
                    weight: w.weight(),
                    coefficients: None,
                })
                .collect()
        }
    };
    rows.retain(|r| keep(r.weight) && r.degree >= lo && r.degree <= hi);
    sort_rows(ctx, &mut rows);
    let meta = ctx.meta("basis", Some(p), Some((lo, hi)), Some(cap));
    ctx.emit_rows(&meta, rows, None)
}

fn op_rows(op: &PowerOp) -> Vec<Row> {
    op.rwords()
        .into_iter()
        .map(|(w, c)| Row {
            word: w.to_string(),
            degree: w.target(),
            weight: w.weight(),
            coefficients: Some(c),
        })
        .collect()
}

/// Parses an R-word and checks that each letter exists where it acts.
fn parse_op(p: Prime, j: i64, s: &str) -> Result<PowerOp> {
    let w = RWord::parse(p, j, s).with_context(|| format!("word `{s}`"))?;
    ensure!(
        w.to_dual().letters_exist(),
        "word `{s}` has a letter that does not exist on a class of degree {j}"
    );
    Ok(PowerOp::from_rword(&w)?)
}

fn cmd_compose(ctx: &Ctx, a: &ComposeArgs) -> Result<()> {
    let p = prime(a.p)?;
    let inner = parse_op(p, a.j, &a.inner)?;
    let Some(mid) = inner.target() else {
        let meta = ctx.meta("compose", Some(p), None, None);
        return ctx.emit_rows(&meta, Vec::new(), Some("0".into()));
    };
    let outer = parse_op(p, mid, &a.outer)?;
    let c = compose(&outer, &inner)?;
    let meta = ctx.meta("compose", Some(p), None, None);
    ctx.emit_rows(&meta, op_rows(&c), Some(c.to_string()))
}

fn letters_of(s: &str, symbol: &str) -> Result<Vec<Letter>> {
    let tokens = tokenize(s)?;
    tokens
        .iter()
        .map(|t| {
            if t.symbol == symbol && t.indexed {
                Ok(t.letter)
            } else {
                bail!("expected `{symbol}` letters in `{s}`")
            }
        })
        .collect()
}

fn cmd_rewrite(ctx: &Ctx, a: &RewriteArgs) -> Result<()> {
    let p = prime(a.p)?;
    let q = p.get() as u64;
    let (rows, text): (Vec<Row>, String) = match a.kind {
        RewriteKind::R => {
            let op = parse_op(p, a.j, &a.word)?;
            (op_rows(&op), op.to_string())
        }
        RewriteKind::Primal => {
            let word = letters_of(&a.word, "Q")?;
            let nf = primal_adem_rewrite(p, &word)?;
            let rows: Vec<Row> = nf
                .iter()
                .map(|(w, c)| Row {
                    word: show_word(w, "Q"),
                    degree: word_degree(p, w),
                    weight: q.pow(w.len() as u32),
                    coefficients: Some(c),
                })
                .collect();
            let text = partition_ops::fp::format_comb(&nf, |w| show_word(w, "Q"));
            (rows, text)
        }
        RewriteKind::Dual => {
            let word = letters_of(&a.word, "Q")?;
            let w = DualOpWord::new(p, a.j, word, a.variant.into());
            let nf = normal_form_dual(&DualElement::from_word(&w))?;
            let words = nf.words();
            let rows: Vec<Row> = words
                .iter()
                .map(|(w, c)| Row {
                    word: show_dual(w),
                    degree: w.total_target(),
                    weight: w.weight(),
                    coefficients: Some(*c),
                })
                .collect();
            (rows.clone(), join_rows(&rows))
        }
        RewriteKind::Steenrod => {
            let w = SteenrodWord::parse(p, &a.word)?;
            let nf = steenrod_adem_rewrite(&w)?;
            let rows: Vec<Row> = nf
                .iter()
                .map(|(v, c)| Row {
                    word: v.to_string(),
                    degree: -v.drop(),
                    weight: 1,
                    coefficients: Some(c),
                })
                .collect();
            (rows.clone(), join_rows(&rows))
        }
        RewriteKind::Nishida => {
            let word = parse_mixed(p, &a.word)?;
            let mut alg = SlinearAlgebra::new(p, vec![a.j]);
            let v = alg.evaluate(&word, 0)?;
            let rows: Vec<Row> = v
                .iter()
                .map(|(e, c)| Row {
                    word: alg.show(e),
                    degree: e.degree(),
                    weight: e.weight(),
                    coefficients: Some(c),
                })
                .collect();
            (rows, alg.show_sum(&v))
        }
    };
    let meta = ctx.meta("rewrite", Some(p), None, None);
    ctx.emit_rows(&meta, rows, Some(text))
}

fn join_rows(rows: &[Row]) -> String {
    if rows.is_empty() {
        return "0".into();
    }
    rows.iter()
        .map(|r| match r.coefficients {
            Some(1) | None => r.word.clone(),
            Some(c) => format!("{c} {}", r.word),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Check name, prime, window, weight cap and the reports.
type CheckRun = (&'static str, Prime, Option<(i64, i64)>, Option<u64>, Vec<CheckReport>);

fn cmd_check(ctx: &Ctx, c: &CheckCommand) -> Result<bool> {
    let exec = ctx.exec;
    let (name, p, window, cap, reports): CheckRun = match c {
        CheckCommand::Bm {
            p,
            gens,
            weight_cap,
            window,
        } => {
            let p = prime(*p)?;
            ensure!(!gens.is_empty(), "--gens is empty");
            let (lo, hi) = window.resolve(ctx.cohomological, -30, 5)?;
            let r = bm_agreement(p, gens, lo, hi, *weight_cap, exec);
            ("bm", p, Some((lo, hi)), Some(*weight_cap), vec![r])
        }
        CheckCommand::Bar { p, j, w, window } => {
            let p = prime(*p)?;
            ensure!(p.is_two(), "the bar oracle runs at p = 2 only");
            ensure!((1..=4).contains(w), "-W must lie in 1..=4");
            let lo = (*j).min(4 * j);
            let (lo, hi) = window.resolve(ctx.cohomological, lo, lo + 23)?;
            let r = bar_check(*j, *w, lo, hi, exec)?;
            ("bar", p, Some((lo, hi)), Some(*w), vec![r])
        }
        CheckCommand::Adem {
            p,
            index_window,
            source_window,
        } => {
            let p = prime(*p)?;
            let reports = vec![
                dual_confluence(p, *index_window, *source_window, exec),
                adem_r_sweep(p, *index_window, *source_window, exec),
                translation_bijection(p, *source_window, 3, *index_window),
            ];
            ("adem", p, None, None, reports)
        }
        CheckCommand::Lie { p, gens, weight_cap } => {
            let p = prime(*p)?;
            ensure!(!gens.is_empty() && gens.len() <= 3, "--gens takes one to three degrees");
            ("lie", p, None, Some(*weight_cap), vec![lie_suite(p, gens, *weight_cap)])
        }
        CheckCommand::Nishida {
            p,
            index_window,
            source_window,
        } => {
            let p = prime(*p)?;
            let r = nishida_suite(p, *index_window, *source_window, exec);
            ("nishida", p, None, None, vec![r])
        }
        CheckCommand::Stability {
            p,
            source_window,
            width,
        } => {
            let p = prime(*p)?;
            ("stability", p, None, None, vec![stability(p, *source_window, 3, *width)])
        }
    };
    let passed = reports.iter().all(CheckReport::passed);
    let meta = ctx.meta(&format!("check {name}"), Some(p), window, cap);
    let out = io::stdout();
    let mut out = out.lock();
    match ctx.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: &'a Meta,
                passed: bool,
                rows: &'a [CheckReport],
            }
            serde_json::to_writer_pretty(&mut out, &Doc { meta: &meta, passed, rows: &reports })?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "cases", "failures", "verdict"])?;
            for r in &reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                w.write_record([r.name.clone(), r.cases.to_string(), r.failure_count.to_string(), verdict.into()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            writeln!(out, "{}", if passed { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(passed)
}

fn cmd_dims(ctx: &Ctx, a: &DimsArgs) -> Result<()> {
    let p = prime(a.p)?;
    ensure!(!a.gens.is_empty(), "--gens is empty");
    let (lo, hi) = a.window.resolve(ctx.cohomological, -20, 5)?;
    let free = dims_free(&free_basis(p, &a.gens, lo, hi, a.weight_cap, ctx.exec));
    let seq = dims_bm(&bm_basis(p, &a.gens, lo, hi, a.weight_cap, ctx.exec));
    #[derive(Serialize)]
    struct DimRow {
        degree: i64,
        weight: u64,
        free: usize,
        sequences: usize,
    }
    let mut keys: Vec<(i64, u64)> = free.keys().chain(seq.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let mut rows: Vec<DimRow> = keys
        .into_iter()
        .map(|(d, w)| DimRow {
            degree: ctx.degree(d),
            weight: w,
            free: free.get(&(d, w)).copied().unwrap_or(0),
            sequences: seq.get(&(d, w)).copied().unwrap_or(0),
        })
        .collect();
    rows.sort_by_key(|r| (r.weight, r.degree));
    let meta = ctx.meta("dims", Some(p), Some((lo, hi)), Some(a.weight_cap));
    let out = io::stdout();
    let mut out = out.lock();
    match ctx.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: &'a Meta,
                rows: &'a [DimRow],
            }
            serde_json::to_writer_pretty(&mut out, &Doc { meta: &meta, rows: &rows })?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "degree\tweight\tfree\tsequences")?;
            for r in &rows {
                writeln!(out, "{}\t{}\t{}\t{}", r.degree, r.weight, r.free, r.sequences)?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let mut exec = Exec::Parallel;
    if let Some(n) = cli.jobs {
        ensure!(n >= 1, "--jobs must be at least 1");
        if n == 1 {
            exec = Exec::Sequential;
        } else {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the thread pool")?;
        }
    }
    let ctx = Ctx {
        format: cli.format,
        cohomological: cli.cohomological,
        seed: cli.seed,
        exec,
    };
    match &cli.command {
        Command::Basis(a) => cmd_basis(&ctx, a).map(|_| true),
        Command::Compose(a) => cmd_compose(&ctx, a).map(|_| true),
        Command::Rewrite(a) => cmd_rewrite(&ctx, a).map(|_| true),
        Command::Check(c) => cmd_check(&ctx, c),
        Command::Dims(a) => cmd_dims(&ctx, a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
