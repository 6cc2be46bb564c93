// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use scbsynth::algebra::{expr_to_pauli_sum, HamiltonianExpr, Pauli};
use scbsynth::circuit::{Circuit, Gate, Topology};
use scbsynth::direct::{synthesize_direct, ComplexMode, DirectSynthesisOptions};
use scbsynth::fd::assemble;
use scbsynth::fermion::{pair_gate_b, FermionTerm};
use scbsynth::hubo::{crossover_threshold, synthesize_hubo, CountModel};
use scbsynth::lcu::be_term_split;
use scbsynth::text::{self, Report, Verification};
use scbsynth::usual::{trotter_product_with, Strategy, TrotterPlan};
use scbsynth::verify::{expr_distance, DEFAULT_TOLERANCE};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "scbsynth", version, about = "Circuit synthesis over the single component operator basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize exp(-i theta H), one fragment per term.
    Synth(SynthArgs),
    /// Expand an expression into Pauli strings.
    Pauli(ExprArgs),
    /// Block-encode each term as a weighted sum of unitaries.
    Lcu(LcuArgs),
    /// Product-formula circuit for exp(-i theta H).
    Trotter(TrotterArgs),
    /// Gate counts of a synthesized expression or a HUBO problem.
    Count(CountArgs),
    /// Compare a synthesized circuit with the exact evolution.
    Verify(VerifyArgs),
    /// Phase-separation circuit of a HUBO problem file.
    Hubo(HuboArgs),
    /// Evolution circuit of a fermionic term file.
    Fermion(FileArgs),
    /// Operator expression of a finite-difference grid file.
    Fd(FdArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Direct,
    Usual,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Chain,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexArg {
    Exact,
    Split,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutArg {
    Text,
    Json,
}

#[derive(Args)]
struct ExprArgs {
    /// Operator expression.
    #[arg(short = 'e', long = "expr", conflicts_with = "file", allow_hyphen_values = true)]
    expr: Option<String>,
    /// File holding an operator expression.
    #[arg(short = 'f', long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    out: OutArg,
}

#[derive(Args)]
struct SynthOpts {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_enum, default_value = "direct")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "chain")]
    parity: ParityArg,
    #[arg(long = "complex-mode", value_enum, default_value = "exact")]
    complex_mode: ComplexArg,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    input: ExprArgs,
    #[command(flatten)]
    opts: SynthOpts,
}

#[derive(Args)]
struct LcuArgs {
    #[command(flatten)]
    input: ExprArgs,
}

#[derive(Args)]
struct TrotterArgs {
    #[command(flatten)]
    input: ExprArgs,
    #[command(flatten)]
    opts: SynthOpts,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long, default_value_t = 1)]
    order: u8,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    input: ExprArgs,
    #[command(flatten)]
    opts: SynthOpts,
    /// HUBO problem file instead of an expression.
    #[arg(long, conflicts_with_all = ["expr", "file"])]
    hubo: Option<PathBuf>,
    /// Report direct and usual two-qubit totals side by side.
    #[arg(long)]
    compare: bool,
    /// Count multi-controlled phases with the no-ancilla formula.
    #[arg(long)]
    no_ancilla: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: ExprArgs,
    #[command(flatten)]
    opts: SynthOpts,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long, default_value_t = 1)]
    order: u8,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Corrupt the gate at this index before comparing (self-test).
    #[arg(long)]
    mutate: Option<usize>,
}

#[derive(Args)]
struct HuboArgs {
    file: PathBuf,
    #[command(flatten)]
    opts: SynthOpts,
    #[arg(long, value_enum, default_value = "text")]
    out: OutArg,
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_enum, default_value = "text")]
    out: OutArg,
}

#[derive(Args)]
struct FdArgs {
    file: PathBuf,
    /// Also print the dense matrix (small grids only).
    #[arg(long)]
    dense: bool,
    #[arg(long, value_enum, default_value = "text")]
    out: OutArg,
}

/// Error with the exit code it maps to.
struct Failure(u8, String);

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }

    fn parse(e: impl ToString) -> Self {
        Failure(EXIT_PARSE, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_expr(a: &ExprArgs) -> Result<HamiltonianExpr, Failure> {
    let src = match (&a.expr, &a.file) {
        (Some(e), _) => e.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => return Err(Failure::usage("give an expression with -e or a file with -f")),
    };
    text::parse(&src).map_err(Failure::parse)
}

impl SynthOpts {
    fn direct(&self) -> DirectSynthesisOptions {
        let topo = match self.parity {
            ParityArg::Chain => Topology::Chain,
            ParityArg::Tree => Topology::Tree,
        };
        let mode = match self.complex_mode {
            ComplexArg::Exact => ComplexMode::ExactAxis,
            ComplexArg::Split => ComplexMode::Split,
        };
        DirectSynthesisOptions::new(self.theta).with_topology(topo).with_complex_mode(mode)
    }

    fn strategy(&self) -> Strategy {
        match self.strategy {
            StrategyArg::Direct => Strategy::Direct,
            StrategyArg::Usual => Strategy::Usual,
        }
    }
}

fn product(expr: &HamiltonianExpr, opts: &SynthOpts, steps: usize, order: u8) -> Result<Circuit, Failure> {
    let plan = TrotterPlan::new(order, steps, opts.theta);
    trotter_product_with(expr, &plan, opts.strategy(), &opts.direct()).map_err(Failure::usage)
}

fn emit(c: &Circuit, out: OutArg, verification: Option<Verification>) {
    match out {
        OutArg::Text => print!("{}", c.listing()),
        OutArg::Json => println!("{}", Report::of(c, verification).to_json()),
    }
}

fn pauli_letter(p: Pauli) -> char {
    match p {
        Pauli::X => 'X',
        Pauli::Y => 'Y',
        Pauli::Z => 'Z',
    }
}

fn cmd_pauli(a: &ExprArgs) -> Outcome {
    let expr = load_expr(a)?;
    let strings = expr_to_pauli_sum(&expr);
    let rows: Vec<(f64, f64, String)> = strings
        .iter()
        .map(|s| {
            let word: Vec<String> = s.letters.iter().map(|(q, p)| format!("{}{q}", pauli_letter(*p))).collect();
            let word = if word.is_empty() { "I0".to_string() } else { word.join(" ") };
            (s.coefficient.re, s.coefficient.im, word)
        })
        .collect();
    match a.out {
        OutArg::Text => {
            for (re, im, w) in &rows {
                if *im == 0.0 {
                    println!("{re:?} * {w}");
                } else {
                    println!("({re:?}{}{:?}i) * {w}", if *im < 0.0 { '-' } else { '+' }, im.abs());
                }
            }
            println!("# strings={}", rows.len());
        }
        OutArg::Json => {
            let list: Vec<_> = rows.iter().map(|(re, im, w)| json!({"re": re, "im": im, "string": w})).collect();
            println!("{}", serde_json::to_string_pretty(&json!({"count": rows.len(), "strings": list})).unwrap());
        }
    }
    Ok(())
}

fn cmd_lcu(a: &LcuArgs) -> Outcome {
    let expr = load_expr(&a.input)?;
    let mut parts = Vec::new();
    for (i, t) in expr.terms().iter().enumerate() {
        for d in be_term_split(t).map_err(Failure::usage)? {
            parts.push((i, t.to_string(), d));
        }
    }
    match a.input.out {
        OutArg::Text => {
            for (i, t, d) in &parts {
                println!("## term {i}: {t}");
                println!("# pairs={} one_norm={:?}", d.len(), d.one_norm());
                for (c, u) in &d.pairs {
                    println!("coefficient={c:?}");
                    print!("{}", u.listing());
                }
            }
        }
        OutArg::Json => {
            let list: Vec<_> = parts
                .iter()
                .map(|(i, t, d)| {
                    let pairs: Vec<_> = d
                        .pairs
                        .iter()
                        .map(|(c, u)| json!({"coefficient": c, "counts": scbsynth::circuit::count(u), "listing": u.listing()}))
                        .collect();
                    json!({"term": i, "expr": t, "one_norm": d.one_norm(), "pairs": pairs})
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&list).unwrap());
        }
    }
    Ok(())
}

fn cmd_count(a: &CountArgs) -> Outcome {
    let model = CountModel { no_ancilla: a.no_ancilla };
    if let Some(path) = &a.hubo {
        let p = text::parse_hubo(&read(path)?).map_err(Failure::parse)?;
        let (direct, usual) = model.problem_totals(&p).map_err(Failure::usage)?;
        let threshold = crossover_threshold(&model);
        let mut v = json!({
            "variables": p.num_vars(),
            "max_order": p.max_order(),
            "direct_two_qubit": direct,
            "usual_two_qubit": usual,
        });
        if a.compare {
            v["crossover_threshold"] = json!(threshold);
            v["note"] = json!(format!(
                "a single order-n phase gate beats the dense order-n Pauli expansion from n = {threshold}"
            ));
            v["fewer_two_qubit"] = json!(if direct <= usual { "direct" } else { "usual" });
        }
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
        return Ok(());
    }
    let expr = load_expr(&a.input)?;
    let c = product(&expr, &a.opts, 1, 1)?;
    let r = Report::of(&c, None);
    match a.input.out {
        OutArg::Json => println!("{}", r.to_json()),
        OutArg::Text => {
            for (k, n) in &r.counts.per_kind {
                println!("{k}: {n}");
            }
            for (k, n) in &r.counts.keyed {
                println!("{k}: {n}");
            }
            println!("two_qubit: {}", r.counts.two_qubit_count);
            println!("multi_qubit: {}", r.counts.multi_qubit_count);
            println!("depth: {}", r.depth);
            println!("rotations: {}", r.rotations);
        }
    }
    Ok(())
}

/// Single-gate corruption: rotations get their angle shifted, every other
/// gate gets an extra X behind it.
fn mutate(c: &Circuit, index: usize) -> Result<Circuit, Failure> {
    if index >= c.len() {
        return Err(Failure::usage(format!("gate index {index} out of range for {} gates", c.len())));
    }
    let mut out = Circuit::new(c.num_qubits().max(1));
    for (i, g) in c.gates().iter().enumerate() {
        if i != index {
            out.push(g.clone()).map_err(Failure::usage)?;
            continue;
        }
        match g.kind.angle() {
            Some(t) if g.kind.is_rotation() => {
                let mut m = g.clone();
                m.kind = g.kind.with_angle(t + 0.7);
                out.push(m).map_err(Failure::usage)?;
            }
            _ => {
                out.push(g.clone()).map_err(Failure::usage)?;
                let q = g.targets.first().copied().unwrap_or(0);
                out.push(Gate::x(q)).map_err(Failure::usage)?;
            }
        }
    }
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let expr = load_expr(&a.input)?;
    let mut c = product(&expr, &a.opts, a.steps, a.order)?;
    if let Some(i) = a.mutate {
        c = mutate(&c, i)?;
    }
    let d = expr_distance(&expr, &c, a.opts.theta).map_err(Failure::usage)?;
    let v = Verification::new(d, a.tolerance);
    match a.input.out {
        OutArg::Text => println!(
            "phase_distance: {d:.3e} (tolerance {:e}): {}",
            a.tolerance,
            if v.pass { "PASS" } else { "FAIL" }
        ),
        OutArg::Json => println!("{}", Report::of(&c, Some(v)).to_json()),
    }
    if v.pass {
        Ok(())
    } else {
        Err(Failure(EXIT_VERIFY, String::new()))
    }
}

fn cmd_hubo(a: &HuboArgs) -> Outcome {
    let p = text::parse_hubo(&read(&a.file)?).map_err(Failure::parse)?;
    let c = synthesize_hubo(&p, a.opts.theta, a.opts.strategy()).map_err(Failure::usage)?;
    emit(&c, a.out, None);
    Ok(())
}

fn cmd_fermion(a: &FileArgs) -> Outcome {
    let terms = text::parse_fermion(&read(&a.file)?).map_err(Failure::parse)?;
    let mut parts = Vec::new();
    for t in &terms {
        let c = match (t, t.to_term().map_err(Failure::usage)?) {
            (FermionTerm::Pair { alpha, beta }, _) => pair_gate_b(*alpha, *beta, a.theta).map_err(Failure::usage)?,
            (_, Some(term)) => synthesize_direct(&term, &DirectSynthesisOptions::new(a.theta)).map_err(Failure::usage)?,
            (_, None) => unreachable!("only the pair gate has no qubit term"),
        };
        parts.push(c);
    }
    let n = parts.iter().map(Circuit::num_qubits).max().unwrap_or(1);
    let mut all = Circuit::new(n);
    for p in &parts {
        all.append(p).map_err(Failure::usage)?;
    }
    emit(&all, a.out, None);
    Ok(())
}

fn cmd_fd(a: &FdArgs) -> Outcome {
    let p = text::parse_grid(&read(&a.file)?).map_err(Failure::parse)?;
    let expr = assemble(&p).map_err(Failure::usage)?;
    let dense = if a.dense {
        let m = expr.dense().map_err(Failure::usage)?;
        let m = m.matrix();
        Some((0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)].re).collect::<Vec<f64>>()).collect::<Vec<_>>())
    } else {
        None
    };
    match a.out {
        OutArg::Text => {
            println!("# qubits={} terms={}", expr.num_qubits(), expr.len());
            println!("{expr}");
            if let Some(rows) = dense {
                for r in rows {
                    let cells: Vec<String> = r.iter().map(|x| format!("{x:>6}")).collect();
                    println!("{}", cells.join(" "));
                }
            }
        }
        OutArg::Json => {
            let terms: Vec<String> = expr.terms().iter().map(ToString::to_string).collect();
            let mut v = json!({"num_qubits": expr.num_qubits(), "terms": terms});
            if let Some(rows) = dense {
                v["dense"] = json!(rows);
            }
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Synth(a) => {
            let expr = load_expr(&a.input)?;
            let c = product(&expr, &a.opts, 1, 1)?;
            emit(&c, a.input.out, None);
            Ok(())
        }
        Command::Pauli(a) => cmd_pauli(a),
        Command::Lcu(a) => cmd_lcu(a),
        Command::Trotter(a) => {
            let expr = load_expr(&a.input)?;
            let c = product(&expr, &a.opts, a.steps, a.order)?;
            emit(&c, a.input.out, None);
            Ok(())
        }
        Command::Count(a) => cmd_count(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Hubo(a) => cmd_hubo(a),
        Command::Fermion(a) => cmd_fermion(a),
        Command::Fd(a) => cmd_fd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
