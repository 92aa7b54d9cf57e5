//! Batch command-line surface over `projcalc-core`.

pub mod parse;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use projcalc_core::onedim::{bernoulli_parity_check, t_poly_csv, transvectant, TransvectantSpec};
use projcalc_core::poly::{MultiIndex, PhasePoly};
use projcalc_core::projsym::{
    casimir_eigenvalue, casimir_operator, check_recurrence, coefficient_table_csv, cocycle_defect_on_basis,
    conjugation_sign_check, equivariance_sweep, equivariant_hom_basis, gamma1_closed, gamma2_closed, gamma_extract,
    geodesic_quantize, quantize, quotient_iso, second_order_iso, sl_generators, symbol_map, transported_action,
    CoeffKind, GammaMap,
};
use projcalc_core::starprod::star;
use projcalc_core::{DiffOp, Rational, UniPoly, VectorField};

pub use parse::{parse_op, parse_poly, parse_rational, ParseError, ParseErrorKind};

type Poly = PhasePoly<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "projcalc", version, about = "Exact projectively equivariant symbol calculus")]
pub struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Dimension of the base space.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Density weight, as p/q.
    #[arg(long, global = true, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    /// Second density weight, as p/q.
    #[arg(long, global = true, value_parser = parse_rational, allow_hyphen_values = true)]
    mu: Option<Rational>,
    /// Fiber degree; a rational order for `tkj`.
    #[arg(long, global = true, value_parser = parse_rational, allow_hyphen_values = true)]
    k: Option<Rational>,
    #[arg(long, global = true)]
    ell: Option<u32>,
    /// Coefficient degree of probes, or ansatz order for `check homdim`.
    #[arg(long, global = true)]
    depth: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equivariant symbol of an operator.
    Symbolize {
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// Equivariant quantization of a symbol.
    Quantize {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    Compose {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Formal adjoint, landing in weight 1 - lambda.
    Conjugate {
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// Lie derivative of an operator along X (a polynomial linear in xi).
    Act {
        #[arg(allow_hyphen_values = true)]
        field: String,
        #[arg(allow_hyphen_values = true)]
        target: String,
        /// Treat the target as a symbol and apply the transported action.
        #[arg(long)]
        symbol: bool,
    },
    Star {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Degree-lowering component of the transported action.
    Gamma {
        #[arg(allow_hyphen_values = true)]
        field: String,
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Compare with the closed form (ell = 1 or 2).
        #[arg(long)]
        check: bool,
    },
    Check {
        #[command(subcommand)]
        what: CheckKind,
    },
    /// Transvectant of two x1-polynomials on the line.
    Transvectant {
        #[arg(allow_hyphen_values = true)]
        phi: String,
        #[arg(allow_hyphen_values = true)]
        psi: String,
        #[arg(long)]
        m: u32,
    },
    /// t_k^j as a polynomial in lambda.
    Tkj {
        #[arg(long)]
        j: u32,
    },
    /// Quantization of g^ij xi_i xi_j at weight 1/2; rows split by ';', entries by ','.
    Geodesic {
        #[arg(allow_hyphen_values = true)]
        g_inv: String,
    },
    /// Module isomorphism between weights lambda and mu.
    Iso {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Coefficient table as CSV.
    Coeffs {
        #[arg(long, value_enum, default_value_t = Kind::Symbol)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Symbol,
    Quantization,
}

#[derive(Subcommand, Debug)]
enum CheckKind {
    Equivariance,
    Recurrence,
    Cocycle {
        /// Use the extracted map rather than the closed form.
        #[arg(long)]
        extracted: bool,
        /// Largest degree of the monomial probe fields.
        #[arg(long, default_value_t = 2)]
        field_degree: u32,
    },
    Casimir,
    Conjsign,
    Homdim {
        #[arg(long, default_value_t = 2)]
        coeff_degree: u32,
    },
}

/// Exit status and streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse { what: String, err: ParseError },
    Lib(projcalc_core::Error),
}

impl From<projcalc_core::Error> for Failure {
    fn from(e: projcalc_core::Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

struct Report {
    body: String,
    ok: bool,
    note: Option<String>,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, ok: true, note: None }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(f) => {
            let msg = match f {
                Failure::Usage(m) => format!("usage error: {m}"),
                Failure::Parse { what, err } => format!("{what}: {err}"),
                Failure::Lib(e) => format!("error: {e}"),
            };
            return Outcome { code: 2, stdout: String::new(), stderr: msg + "\n" };
        }
    };
    let mut body = report.body;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    let mut stderr = report.note.map(|n| n + "\n").unwrap_or_default();
    let stdout = match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return Outcome { code: 2, stdout: String::new(), stderr: format!("cannot write {}: {e}\n", path.display()) };
            }
            String::new()
        }
        None => body,
    };
    if !report.ok && stderr.is_empty() {
        stderr = "verification failed\n".into();
    }
    Outcome { code: if report.ok { 0 } else { 1 }, stdout, stderr }
}

impl Common {
    fn n(&self) -> usize {
        self.n.unwrap_or(1)
    }

    fn lambda(&self) -> Res<Rational> {
        self.lambda.clone().ok_or_else(|| Failure::Usage("--lambda is required".into()))
    }

    fn mu(&self) -> Res<Rational> {
        self.mu.clone().ok_or_else(|| Failure::Usage("--mu is required".into()))
    }

    fn k_int(&self) -> Res<u32> {
        let k = self.k.as_ref().ok_or_else(|| Failure::Usage("--k is required".into()))?;
        if !k.is_integer() || k.is_negative() {
            return Err(Failure::Usage(format!("--k must be a nonnegative integer here, got {k}")));
        }
        k.to_integer().to_u32().ok_or_else(|| Failure::Usage(format!("--k {k} is too large")))
    }

    fn ell(&self) -> Res<u32> {
        self.ell.ok_or_else(|| Failure::Usage("--ell is required".into()))
    }

    fn formats(&self, allowed: &[Format]) -> Res<Format> {
        if allowed.contains(&self.format) {
            Ok(self.format)
        } else {
            Err(Failure::Usage(format!("--format {:?} is not available for this command", self.format).to_lowercase()))
        }
    }
}

fn poly_arg(what: &str, text: &str, n: usize) -> Res<Poly> {
    parse_poly(text, n).map_err(|err| Failure::Parse { what: what.into(), err })
}

fn op_arg(what: &str, text: &str, n: usize, lambda: &Rational) -> Res<DiffOp> {
    parse_op(text, n, lambda.clone()).map_err(|err| Failure::Parse { what: what.into(), err })
}

fn field_arg(what: &str, text: &str, n: usize) -> Res<VectorField> {
    Ok(VectorField::new(poly_arg(what, text, n)?)?)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn show_poly(p: &Poly, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(p),
        _ => p.to_string(),
    }
}

fn show_op(a: &DiffOp, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(a),
        _ => a.to_string(),
    }
}

fn dispatch(cli: &Cli) -> Res<Report> {
    let c = &cli.common;
    match &cli.command {
        Command::Symbolize { op } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let a = op_arg("operator", op, c.n(), &c.lambda()?)?;
            Ok(Report::ok(show_poly(&symbol_map(&a), fmt)))
        }
        Command::Quantize { poly } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let p = poly_arg("symbol", poly, c.n())?;
            Ok(Report::ok(show_op(&quantize(&p, &c.lambda()?), fmt)))
        }
        Command::Compose { a, b } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let lam = c.lambda()?;
            let a = op_arg("first operator", a, c.n(), &lam)?;
            let b = op_arg("second operator", b, c.n(), &lam)?;
            Ok(Report::ok(show_op(&a.compose(&b)?, fmt)))
        }
        Command::Conjugate { op } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let a = op_arg("operator", op, c.n(), &c.lambda()?)?;
            Ok(Report::ok(show_op(&a.conjugate(), fmt)))
        }
        Command::Act { field, target, symbol } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let lam = c.lambda()?;
            let x = field_arg("field", field, c.n())?;
            if *symbol {
                let p = poly_arg("symbol", target, c.n())?;
                Ok(Report::ok(show_poly(&transported_action(&x, &p, &lam)?, fmt)))
            } else {
                let a = op_arg("operator", target, c.n(), &lam)?;
                Ok(Report::ok(show_op(&a.lie_op(&x)?, fmt)))
            }
        }
        Command::Star { f, g } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let f = poly_arg("first symbol", f, c.n())?;
            let g = poly_arg("second symbol", g, c.n())?;
            let s = star(&f, &g, &c.lambda()?)?;
            let body = match fmt {
                Format::Json => to_json(&s),
                _ if s.terms.is_empty() => "0".into(),
                _ => s.terms.iter().map(|(r, p)| format!("hbar^{r}: {p}")).collect::<Vec<_>>().join("\n"),
            };
            Ok(Report::ok(body))
        }
        Command::Gamma { field, poly, check } => gamma_cmd(c, field, poly, *check),
        Command::Check { what } => check_cmd(c, what),
        Command::Transvectant { phi, psi, m } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let phi = line_poly("phi", phi)?;
            let psi = line_poly("psi", psi)?;
            let spec = TransvectantSpec::new(*m, c.lambda()?, c.mu()?);
            let out = from_line(&transvectant(&phi, &psi, &spec));
            Ok(Report::ok(match fmt {
                Format::Json => to_json(&json!({ "spec": spec, "result": out })),
                _ => out.to_string(),
            }))
        }
        Command::Tkj { j } => tkj_cmd(c, *j),
        Command::Geodesic { g_inv } => {
            let fmt = c.formats(&[Format::Text, Format::Json])?;
            let m = parse_matrix(g_inv)?;
            Ok(Report::ok(show_op(&geodesic_quantize(&m)?, fmt)))
        }
        Command::Iso { poly } => iso_cmd(c, poly),
        Command::Coeffs { kind } => {
            c.formats(&[Format::Text, Format::Csv])?;
            let kind = match kind {
                Kind::Symbol => CoeffKind::Symbol,
                Kind::Quantization => CoeffKind::Quantization,
            };
            Ok(Report::ok(coefficient_table_csv(kind, c.k_int()?, c.n(), &c.lambda()?)))
        }
    }
}

/// An `x1`-polynomial as a univariate polynomial.
fn line_poly(what: &str, text: &str) -> Res<UniPoly> {
    let p = poly_arg(what, text, 1)?;
    if !p.is_x_only() {
        return Err(Failure::Lib(projcalc_core::Error::NotXOnly));
    }
    let mut coeffs = Vec::new();
    for (m, c) in p.terms() {
        let d = m.x()[0] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Rational::zero());
        }
        coeffs[d] = c.clone();
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

fn from_line(u: &UniPoly) -> Poly {
    let mut p = PhasePoly::zero(1);
    for (d, c) in u.coeffs().iter().enumerate() {
        p = p + &PhasePoly::monomial(c.clone(), &[d as u32], &[0]);
    }
    p
}

fn gamma_cmd(c: &Common, field: &str, poly: &str, check: bool) -> Res<Report> {
    let fmt = c.formats(&[Format::Text, Format::Json])?;
    let (n, lam, ell) = (c.n(), c.lambda()?, c.ell()?);
    let x = field_arg("field", field, n)?;
    let p = poly_arg("symbol", poly, n)?;
    let got = gamma_extract(ell, &x, &lam, &p)?;
    let mut rep = Report::ok(show_poly(&got, fmt));
    if check {
        let closed = match ell {
            1 => gamma1_closed(&x, &lam, &p)?,
            2 => gamma2_closed(&x, &lam, &p)?,
            _ => return Err(Failure::Usage("closed forms exist for --ell 1 and 2 only".into())),
        };
        if closed != got {
            rep.ok = false;
            rep.note = Some(format!("closed form differs: {closed}"));
        }
    }
    Ok(rep)
}

fn monomials(n: usize, k: u32, coeff_degree: u32) -> Vec<Poly> {
    let xis = MultiIndex::all_of_order(n, k);
    MultiIndex::all_up_to_order(n, coeff_degree)
        .iter()
        .flat_map(|e| xis.iter().map(move |b| PhasePoly::monomial(Rational::one(), e.as_slice(), b.as_slice())))
        .collect()
}

/// Monomial fields `x^a d_i` with `|a| <= degree`.
fn monomial_fields(n: usize, degree: u32) -> Vec<VectorField> {
    let mut out = Vec::new();
    for a in MultiIndex::all_up_to_order(n, degree) {
        for i in 0..n {
            let xi = MultiIndex::unit(n, i);
            let p = PhasePoly::monomial(Rational::one(), a.as_slice(), xi.as_slice());
            out.push(VectorField::new(p).expect("fiber degree one"));
        }
    }
    out
}

fn summary(name: &str, checked: usize, failures: &[String], fmt: Format) -> Report {
    let ok = failures.is_empty();
    let body = match fmt {
        Format::Json => to_json(&json!({ "check": name, "checked": checked, "passed": ok, "failures": failures })),
        _ => {
            let mut s = format!("{name}: {} ({checked} checked, {} failed)", if ok { "ok" } else { "FAILED" }, failures.len());
            for f in failures {
                write!(s, "\n  {f}").expect("writing to a String");
            }
            s
        }
    };
    Report { body, ok, note: None }
}

fn check_cmd(c: &Common, what: &CheckKind) -> Res<Report> {
    let fmt = c.formats(&[Format::Text, Format::Json])?;
    let n = c.n();
    match what {
        CheckKind::Equivariance => {
            let r = equivariance_sweep(n, &c.lambda()?, c.k_int()?, c.depth.unwrap_or(3));
            let fails: Vec<String> =
                r.failures.iter().map(|e| format!("{} on {}: {}", e.generator, e.input, e.defect)).collect();
            Ok(summary("equivariance", r.checked, &fails, fmt))
        }
        CheckKind::Recurrence => {
            let r = check_recurrence(c.k_int()?, n, &c.lambda()?);
            let fails: Vec<String> = r
                .residuals
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(ell, v)| format!("ell = {ell}: residual {v}"))
                .collect();
            Ok(summary("recurrence", r.residuals.len(), &fails, fmt))
        }
        CheckKind::Cocycle { extracted, field_degree } => {
            let (lam, ell, k) = (c.lambda()?, c.ell()?, c.k_int()?);
            let g = match (ell, extracted) {
                (_, true) => GammaMap::extracted(ell, lam),
                (1, false) => GammaMap::gamma1(lam),
                (2, false) => GammaMap::gamma2(lam),
                _ => return Err(Failure::Usage("closed forms exist for --ell 1 and 2; pass --extracted".into())),
            };
            let fields = monomial_fields(n, *field_degree);
            let pairs: Vec<(usize, usize)> =
                (0..fields.len()).flat_map(|a| (a + 1..fields.len()).map(move |b| (a, b))).collect();
            let found = pairs
                .par_iter()
                .map(|&(a, b)| {
                    let d = cocycle_defect_on_basis(&g, &fields[a], &fields[b], k, c.depth.unwrap_or(2))?;
                    Ok(d.into_iter()
                        .map(|(p, v)| format!("X = {}, Y = {} on {p}: {v}", fields[a].as_poly(), fields[b].as_poly()))
                        .collect::<Vec<_>>())
                })
                .collect::<projcalc_core::Result<Vec<_>>>()?;
            let fails: Vec<String> = found.into_iter().flatten().collect();
            Ok(summary("cocycle", pairs.len(), &fails, fmt))
        }
        CheckKind::Casimir => {
            let k = c.k_int()?;
            let cas = casimir_operator::<Rational>(n);
            let ev: Rational = casimir_eigenvalue(k, n);
            let probes = monomials(n, k, c.depth.unwrap_or(2));
            let fails: Vec<String> = probes
                .par_iter()
                .filter_map(|p| {
                    let img = cas.apply(p);
                    (img != p.scale(&ev)).then(|| format!("{p} -> {img}, expected eigenvalue {ev}"))
                })
                .collect();
            Ok(summary("casimir", probes.len(), &fails, fmt))
        }
        CheckKind::Conjsign => {
            let (k, lam) = (c.k_int()?, c.lambda()?);
            let probes = monomials(n, k, c.depth.unwrap_or(2));
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            let results = probes
                .par_iter()
                .map(|p| {
                    let img = conjugation_sign_check(p, &lam)?;
                    Ok((img != p.scale(&sign)).then(|| format!("{p} -> {img}")))
                })
                .collect::<projcalc_core::Result<Vec<_>>>()?;
            let fails: Vec<String> = results.into_iter().flatten().collect();
            Ok(summary("conjsign", probes.len(), &fails, fmt))
        }
        CheckKind::Homdim { coeff_degree } => {
            let (k, ell) = (c.k_int()?, c.ell()?);
            let order = c.depth.unwrap_or(3);
            let basis = equivariant_hom_basis::<Rational>(k, ell, n, order, *coeff_degree);
            let expect = usize::from(k == ell);
            let mut fails = Vec::new();
            if basis.dim() != expect {
                fails.push(format!("dimension {} where {expect} was expected", basis.dim()));
            } else if expect == 1 && basis.scalar_multiple(0, 2).is_none() {
                fails.push("basis map is not a multiple of the identity".into());
            }
            let mut rep = summary("homdim", 1, &fails, fmt);
            if fmt == Format::Text {
                rep.body = format!("dim = {}\n{}", basis.dim(), rep.body);
            }
            Ok(rep)
        }
    }
}

fn tkj_cmd(c: &Common, j: u32) -> Res<Report> {
    let fmt = c.format;
    let k = c.k.clone().ok_or_else(|| Failure::Usage("--k is required".into()))?;
    let r = bernoulli_parity_check(&k, j)?;
    let body = match fmt {
        Format::Csv => t_poly_csv(std::slice::from_ref(&r)),
        Format::Json => to_json(&json!({
            "k": k.to_string(),
            "j": j,
            "monomial": r.poly.coeffs().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "bernoulli": r.bernoulli.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "involution": r.involution,
            "wrong_parity": r.wrong_parity(),
        })),
        Format::Text => format!(
            "t_{k}^{j}(lambda) = {}\n            = {}",
            basis_string(r.poly.coeffs(), |d| match d {
                0 => String::new(),
                1 => "lambda".into(),
                _ => format!("lambda^{d}"),
            }),
            basis_string(&r.bernoulli, |d| format!("B{d}(lambda)")),
        ),
    };
    let mut rep = Report::ok(body);
    if !r.passed() {
        rep.ok = false;
        rep.note = Some(format!(
            "parity check failed: involution {}, wrong-parity Bernoulli indices {:?}",
            r.involution,
            r.wrong_parity()
        ));
    }
    Ok(rep)
}

fn basis_string(coeffs: &[Rational], name: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (d, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let atom = name(d);
        let mag = c.abs();
        let sign = match (out.is_empty(), c.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sign);
        match (atom.is_empty(), mag.is_one()) {
            (true, _) => write!(out, "{mag}"),
            (false, true) => write!(out, "{atom}"),
            (false, false) => write!(out, "{mag} {atom}"),
        }
        .expect("writing to a String");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Rows separated by `;`, entries by `,`; the dimension is the row count.
fn parse_matrix(text: &str) -> Res<Vec<Vec<Poly>>> {
    let rows: Vec<(usize, &str)> = split_with_offsets(text, 0, ';');
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (off, row) in rows {
        let mut entries = Vec::new();
        for (eoff, entry) in split_with_offsets(row, off, ',') {
            let p = parse_poly(entry, n).map_err(|err| Failure::Parse {
                what: "matrix entry".into(),
                err: shift_error(err, text, eoff),
            })?;
            entries.push(p);
        }
        out.push(entries);
    }
    Ok(out)
}

fn split_with_offsets(text: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == sep {
            out.push((base + start, &text[start..i]));
            start = i + ch.len_utf8();
        }
    }
    out.push((base + start, &text[start..]));
    out
}

/// Moves an error position from an entry to the whole matrix text.
fn shift_error(mut err: ParseError, whole: &str, offset: usize) -> ParseError {
    let before = &whole[..offset];
    let line0 = before.matches('\n').count() + 1;
    let col0 = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    if err.line == 1 {
        err.column += col0 - 1;
    }
    err.line += line0 - 1;
    err
}

fn iso_cmd(c: &Common, poly: &str) -> Res<Report> {
    let fmt = c.formats(&[Format::Text, Format::Json])?;
    let (lam, mu, n) = (c.lambda()?, c.mu()?, c.n());
    let iso = match c.k {
        Some(_) => quotient_iso(c.k_int()?, &lam, &mu)?,
        None => second_order_iso(&lam, &mu)?,
    };
    let p = poly_arg("symbol", poly, n)?;
    let mut fails = Vec::new();
    for g in sl_generators::<Rational>(n) {
        let d = iso.intertwining_defect(&g.field, &p)?;
        if !d.is_zero() {
            fails.push(format!("{}: {d}", g.kind));
        }
    }
    let mut rep = Report::ok(show_poly(&iso.apply(&p), fmt));
    if !fails.is_empty() {
        rep.ok = false;
        rep.note = Some(format!("intertwining defect\n  {}", fails.join("\n  ")));
    }
    Ok(rep)
}

/// Caps the global thread pool from `PROJCALC_THREADS`.
pub fn init_threads() {
    if let Some(t) = std::env::var("PROJCALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}
