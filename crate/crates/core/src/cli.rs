//! The `dwalg` command line: verification batteries and constructions with
//! text output on stdout and an optional JSON report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::centralizer::{centralizer_with, CentralizerOptions, Method};
use crate::diffop::DiffOp;
use crate::dwalgebra::{
    center, center_decompose, cubic_relation, curve_relation, decompose, ds_relations,
    hermite_bridge_check, product_table_relations, rel_relations, Relation,
};
use crate::error::{Error, Result};
use crate::exactfield::{Bindings, Rat, RatFunc, Var};
use crate::gegenbauer::{
    eigen_residual, expected_eigenvalues, generators, gram_entry, monic_mop_closed,
    monic_mop_coeffs, MonicMOP,
};
use crate::json::diffop_from_json;
use crate::report::{Check, Report};

#[derive(Debug, Parser)]
#[command(
    name = "dwalg",
    version,
    about = "Exact checks for the Gegenbauer matrix weight and its operator algebra"
)]
pub struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Numeric values for `n`, `p`; symbolic when omitted.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long, value_name = "RAT")]
    pub n: Option<Rat>,
    #[arg(long, value_name = "RAT")]
    pub p: Option<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Targets {
    C1,
    C1c2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product table of D1..D4, the relations of A and B, and the
    /// reconstruction of D1..D4 from A and B.
    VerifyRelations {
        #[command(flatten)]
        params: Params,
    },
    /// Q_w D_i = Lambda_w(D_i) Q_w for w up to --wmax.
    Eigencheck {
        #[arg(long, default_value_t = 12)]
        wmax: usize,
        #[command(flatten)]
        params: Params,
    },
    /// Monic orthogonal polynomials from both constructions.
    Mop {
        #[arg(long, default_value_t = 12)]
        wmax: usize,
        #[command(flatten)]
        params: Params,
    },
    /// Writes an operator in the span of I and (D1+D2)^i Dj.
    Decompose {
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
    },
    /// Writes a central operator as p(C1) + q(C1) C2.
    CenterDecompose {
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
    },
    /// Relations of the Hermite bridge, in the eigenvalue and operator
    /// representations.
    BridgeCheck {
        /// Skip the (slower) operator representation.
        #[arg(long)]
        eigen_only: bool,
    },
    /// Centralizer of the center generators among operators of order
    /// <= --order with coefficients of degree <= --deg.
    Centralizer {
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Defaults to order + 4.
        #[arg(long)]
        deg: Option<usize>,
        #[arg(long, value_enum, default_value_t = Targets::C1)]
        targets: Targets,
        #[arg(long, default_value_t = CentralizerOptions::default().max_terms)]
        max_terms: usize,
    },
    /// Exact Gram blocks (Q_i, Q_j) at even n.
    Orthogonality {
        #[arg(long, default_value = "4")]
        n: Rat,
        #[arg(long, default_value = "1")]
        p: Rat,
        #[arg(long, default_value_t = 6)]
        wmax: usize,
    },
    /// A quick run of checks that should always pass.
    Selftest,
}

impl Cli {
    /// Parses a full argument vector, program name first.
    pub fn from_args<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Cli::try_parse_from(args)
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyRelations { .. } => "verify-relations",
            Command::Eigencheck { .. } => "eigencheck",
            Command::Mop { .. } => "mop",
            Command::Decompose { .. } => "decompose",
            Command::CenterDecompose { .. } => "center-decompose",
            Command::BridgeCheck { .. } => "bridge-check",
            Command::Centralizer { .. } => "centralizer",
            Command::Orthogonality { .. } => "orthogonality",
            Command::Selftest => "selftest",
        }
    }
}

fn bindings(params: &Params) -> Result<Option<Bindings>> {
    let mut b = Bindings::new();
    if let Some(n) = &params.n {
        b.insert(Var::N, n.clone());
    }
    if let Some(p) = &params.p {
        b.insert(Var::P, p.clone());
    }
    if let (Some(n), Some(p)) = (&params.n, &params.p) {
        if !p.is_positive() || (p * &Rat::from_int(2)) >= *n {
            return Err(Error::InvalidParameters(format!(
                "need 0 < p < n/2, got n = {n}, p = {p}"
            )));
        }
    }
    Ok((!b.is_empty()).then_some(b))
}

fn specialize(d: &DiffOp, b: Option<&Bindings>) -> Result<DiffOp> {
    match b {
        Some(b) => d.evaluate(b),
        None => Ok(d.clone()),
    }
}

fn relation_checks(rels: Vec<Relation>, b: Option<&Bindings>) -> Result<Vec<Check>> {
    rels.into_iter()
        .map(|r| {
            Ok(Check::residual(
                r.name.clone(),
                &specialize(&r.residual, b)?,
            ))
        })
        .collect()
}

fn verify_relations(b: Option<&Bindings>) -> Result<Vec<Check>> {
    let mut out = relation_checks(product_table_relations(), b)?;
    out.extend(relation_checks(rel_relations(), b)?);
    out.extend(relation_checks(vec![cubic_relation()], b)?);
    out.extend(relation_checks(ds_relations(), b)?);
    Ok(out)
}

fn mop(w: usize, b: Option<&Bindings>) -> Result<MonicMOP> {
    let q = monic_mop_closed(w);
    Ok(match b {
        Some(b) => MonicMOP {
            w,
            poly: q.poly.evaluate(b)?,
        },
        None => q,
    })
}

fn eigencheck(wmax: usize, b: Option<&Bindings>) -> Result<Vec<Check>> {
    let g = generators();
    let expected = expected_eigenvalues();
    let mut out = Vec::new();
    for (i, (d, e)) in g.all().iter().zip(&expected).enumerate() {
        let got = d.eigenvalue_map();
        let name = format!("Lambda_w(D{}) matches the closed form", i + 1);
        out.push(Check::from_bool(name, got == *e, || {
            json!(format!("got {got}, expected {e}"))
        }));
    }
    let ops: Vec<DiffOp> = g
        .all()
        .iter()
        .map(|d| specialize(d, b))
        .collect::<Result<_>>()?;
    let per_w: Vec<Vec<Check>> = (0..=wmax)
        .into_par_iter()
        .map(|w| {
            let q = mop(w, b)?;
            ops.iter()
                .enumerate()
                .map(|(i, d)| {
                    let r = eigen_residual(&q, d)?;
                    let name = format!("Q_{w} D{} = Lambda_{w}(D{}) Q_{w}", i + 1, i + 1);
                    Ok(Check::from_bool(name, r.is_zero(), || {
                        serde_json::to_value(&r).expect("serializable")
                    }))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    out.extend(per_w.into_iter().flatten());
    Ok(out)
}

fn mop_report(wmax: usize, b: Option<&Bindings>, report: &mut Report) -> Result<()> {
    let mut polys = Vec::new();
    for w in 0..=wmax {
        let closed = monic_mop_closed(w);
        let coeffs = monic_mop_coeffs(w);
        report.push(Check::from_bool(
            format!("Q_{w}: closed form = coefficient formula"),
            closed == coeffs,
            || json!({"difference": &closed.poly - &coeffs.poly}),
        ));
        report.push(Check::from_bool(
            format!("Q_{w} is monic"),
            closed.is_monic(),
            || json!(closed.poly),
        ));
        let q = mop(w, b)?;
        polys.push(json!({"w": w, "poly": q.poly}));
    }
    report.data = Some(json!(polys));
    Ok(())
}

fn read_op(path: &Path) -> Result<DiffOp> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameters(format!("cannot read {}: {e}", path.display())))?;
    diffop_from_json(&text)
}

fn decompose_report(op: &DiffOp, report: &mut Report) -> Result<()> {
    match decompose(op) {
        Ok(dec) => {
            let back = dec.reassemble();
            report.push(Check::residual(
                "decomposition reassembles the operator",
                &(&back - op),
            ));
            report.data = Some(json!({"decomposition": dec, "text": dec.to_string()}));
        }
        Err(Error::NonMember(why)) => report.push(Check::fail("operator lies in D(W)", json!(why))),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn center_decompose_report(op: &DiffOp, report: &mut Report) -> Result<()> {
    match center_decompose(op) {
        Ok(dec) => {
            report.push(Check::residual(
                "p(C1) + q(C1) C2 reassembles the operator",
                &(&dec.reassemble() - op),
            ));
            report.data = Some(json!({"decomposition": dec, "text": dec.to_string()}));
        }
        Err(e @ (Error::NotCentral(_) | Error::DecompositionFailure(_))) => report.push(
            Check::fail("operator decomposes over C1, C2", json!(e.to_string())),
        ),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn centralizer_report(
    order: usize,
    deg: usize,
    targets: Targets,
    max_terms: usize,
    report: &mut Report,
) -> Result<()> {
    let (c1, c2) = center();
    let ts: Vec<DiffOp> = match targets {
        Targets::C1 => vec![c1.clone()],
        Targets::C1c2 => vec![c1.clone(), c2.clone()],
    };
    let opts = CentralizerOptions {
        max_terms,
        ..Default::default()
    };
    let sp = centralizer_with(&ts, order, deg, &opts)?;
    let bound: Vec<Vec<DiffOp>> = match &sp.method {
        Method::Symbolic => vec![ts.clone()],
        Method::NumericSpecialized { bindings } => {
            let first = bindings.first().expect("at least one binding");
            let b: Bindings = first
                .iter()
                .map(|(k, v)| Ok((crate::exactfield::mpoly::parse_var(k)?, v.parse()?)))
                .collect::<Result<_>>()?;
            vec![ts.iter().map(|t| t.evaluate(&b)).collect::<Result<_>>()?]
        }
    };
    for (k, x) in sp.basis.iter().enumerate() {
        let mut worst = DiffOp::zero(2);
        for t in &bound[0] {
            let c = x.commutator(t)?;
            if !c.is_zero() {
                worst = c;
                break;
            }
        }
        report.push(Check::residual(
            format!("basis element {k} commutes with the targets"),
            &worst,
        ));
        if sp.method == Method::Symbolic {
            let ok = decompose(x).map(|d| d.reassemble() == *x).unwrap_or(false);
            report.push(Check::from_bool(
                format!("basis element {k} lies in D(W)"),
                ok,
                || json!(x),
            ));
        }
    }
    report.data = Some(json!({
        "dimension": sp.dimension,
        "method": sp.method,
        "order_bound": order,
        "degree_bound": deg,
        "basis": sp.basis,
    }));
    Ok(())
}

fn orthogonality(n: &Rat, p: &Rat, wmax: usize, report: &mut Report) -> Result<()> {
    let mut diag = Vec::new();
    for i in 0..=wmax {
        for j in i..=wmax {
            let g = gram_entry(i, j, n, p)?;
            if i == j {
                let minors = g.leading_minors();
                let pd = minors
                    .iter()
                    .all(|m| m.as_constant().is_some_and(|c| c.is_positive()));
                report.push(Check::from_bool(
                    format!("(Q_{i}, Q_{i}) is positive definite"),
                    pd,
                    || json!(g),
                ));
                diag.push(json!({"w": i, "block": g}));
            } else {
                report.push(Check::from_bool(
                    format!("(Q_{i}, Q_{j}) = 0"),
                    g.is_zero(),
                    || json!(g),
                ));
            }
        }
    }
    report.data = Some(json!({"n": n.to_string(), "p": p.to_string(), "diagonal": diag}));
    Ok(())
}

fn selftest(report: &mut Report) -> Result<()> {
    report.extend(relation_checks(product_table_relations(), None)?);
    report.extend(relation_checks(ds_relations(), None)?);
    report.extend(relation_checks(
        vec![cubic_relation(), curve_relation()],
        None,
    )?);
    report.extend(eigencheck(3, None)?);
    for w in 0..=4 {
        report.push(Check::from_bool(
            format!("Q_{w}: closed form = coefficient formula"),
            monic_mop_closed(w) == monic_mop_coeffs(w),
            || json!("constructions differ"),
        ));
    }
    let mut sub = Report::new("orthogonality");
    orthogonality(&Rat::from_int(4), &Rat::one(), 3, &mut sub)?;
    report.extend(sub.checks);
    let g = generators();
    let dec = decompose(&(&g.d3 * &g.d4))?;
    report.push(Check::residual(
        "decompose(D3 D4) reassembles",
        &(&dec.reassemble() - &(&g.d3 * &g.d4)),
    ));
    let sp = crate::centralizer::centralizer_truncated(&[DiffOp::identity(2)], 0, 0)?;
    report.push(Check::from_bool(
        "constants commute with I",
        sp.dimension == 4,
        || json!(sp.dimension),
    ));
    let scalar = DiffOp::scalar(2, RatFunc::from_int(3));
    report.push(Check::from_bool(
        "center_decompose(3 I)",
        center_decompose(&scalar).is_ok(),
        || json!("failed"),
    ));
    Ok(())
}

/// Runs one command and assembles its report.
pub fn execute(command: &Command) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(command.name());
    match command {
        Command::VerifyRelations { params } => {
            report.extend(verify_relations(bindings(params)?.as_ref())?)
        }
        Command::Eigencheck { wmax, params } => {
            report.extend(eigencheck(*wmax, bindings(params)?.as_ref())?)
        }
        Command::Mop { wmax, params } => {
            mop_report(*wmax, bindings(params)?.as_ref(), &mut report)?
        }
        Command::Decompose { op } => decompose_report(&read_op(op)?, &mut report)?,
        Command::CenterDecompose { op } => center_decompose_report(&read_op(op)?, &mut report)?,
        Command::BridgeCheck { eigen_only } => report.extend(hermite_bridge_check(!eigen_only)),
        Command::Centralizer {
            order,
            deg,
            targets,
            max_terms,
        } => centralizer_report(
            *order,
            deg.unwrap_or(order + 4),
            *targets,
            *max_terms,
            &mut report,
        )?,
        Command::Orthogonality { n, p, wmax } => orthogonality(n, p, *wmax, &mut report)?,
        Command::Selftest => selftest(&mut report)?,
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

fn print_text(report: &Report) {
    for c in &report.checks {
        println!("{c}");
    }
    if let Some(data) = &report.data {
        println!(
            "{}",
            serde_json::to_string_pretty(data).expect("serializable")
        );
    }
    let failed = report.failures().count();
    println!(
        "{}: {} checks, {failed} failed ({:.2}s)",
        report.command,
        report.checks.len(),
        report.elapsed
    );
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code: 0 when every check passes, 1 when one fails, 2 on usage
/// or input errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::from_args(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    print_text(&report);
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&report).expect("serializable");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if report.all_passed() {
        0
    } else {
        1
    }
}
