//! The job-file front end. A job is a short plain-text script:
//!
//! ```text
//! field GF(2)(z);
//! invert z;
//! f = y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y;
//! resolve;
//! ```
//!
//! Statements end with `;`. `field` picks the coefficient tower, `invert`
//! moves an ambient variable into the tower as an invertible coefficient,
//! `f = <expr>` sets the curve, and the final command is one of
//! `invariant`, `polyhedron`, `center`, `blowup`, `resolve`, `verify`,
//! `render`. Optional `output <prefix>;` redirects file artifacts and
//! `format svg|ascii;` selects the render style. The full EBNF ships in
//! `docs/job-grammar.md`.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 certified failure
//! (budget exhaustion, tower cap, or a violated internal certificate).

use std::fmt::Write as _;

use crate::charpoly::{
    invariant, polyhedron_to_ascii, polyhedron_to_svg, quasiregular_check, result_to_json,
};
use crate::error::{Error, Result};
use crate::exactfield::Tower;
use crate::mpoly::{LocalModel, Poly};
use crate::oracle::independent_order;
use crate::resolver::{absorb_invertible, resolve, tree_to_dot, tree_to_json, NodeKind};
use crate::wblowup::{chart_to_json, log_order};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Invariant,
    Polyhedron,
    Center,
    Blowup,
    Resolve,
    Verify,
    Render,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Ascii,
}

/// A parsed job: everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub field: String,
    pub invert: Vec<String>,
    pub polynomial: String,
    pub command: Command,
    pub output: Option<String>,
    pub format: RenderFormat,
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            text,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c == '#' {
                while let Some(c2) = self.text[self.pos..].chars().next() {
                    self.pos += c2.len_utf8();
                    if c2 == '\n' {
                        self.line += 1;
                        self.col = 1;
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.pos += c.len_utf8();
                if c == '\n' {
                    self.line += 1;
                    self.col = 1;
                } else {
                    self.col += 1;
                }
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    /// Read one word (up to whitespace or `;`).
    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest
            .char_indices()
            .find(|(_, c)| c.is_whitespace() || *c == ';' || *c == '=')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.err("expected a word"));
        }
        let w = rest[..end].to_string();
        self.advance(end);
        Ok(w)
    }

    /// Read raw text up to the next `;`.
    fn until_semi(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        match rest.find(';') {
            Some(i) => {
                let s = rest[..i].trim().to_string();
                self.advance(i);
                Ok(s)
            }
            None => Err(self.err("missing ';'")),
        }
    }

    fn expect(&mut self, token: char) -> Result<()> {
        self.skip_ws();
        match self.text[self.pos..].chars().next() {
            Some(c) if c == token => {
                self.advance(c.len_utf8());
                Ok(())
            }
            _ => Err(self.err(&format!("expected '{token}'"))),
        }
    }

    fn advance(&mut self, bytes: usize) {
        for c in self.text[self.pos..self.pos + bytes].chars() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += bytes;
    }
}

/// Parse a job script. Errors carry (line, column).
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let mut sc = Scanner::new(text);
    let mut field = None;
    let mut invert = Vec::new();
    let mut polynomial = None;
    let mut command = None;
    let mut output = None;
    let mut format = RenderFormat::Ascii;
    if sc.at_end() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty job".into(),
        });
    }
    while !sc.at_end() {
        let kw = sc.word()?;
        match kw.as_str() {
            "field" => {
                field = Some(sc.until_semi()?);
            }
            "invert" => {
                invert.push(sc.word()?);
            }
            "f" => {
                sc.expect('=')?;
                polynomial = Some(sc.until_semi()?);
            }
            "output" => {
                output = Some(sc.until_semi()?);
            }
            "format" => {
                format = match sc.word()?.as_str() {
                    "svg" => RenderFormat::Svg,
                    "ascii" => RenderFormat::Ascii,
                    other => return Err(sc.err(&format!("unknown format '{other}'"))),
                };
            }
            "invariant" => command = Some(Command::Invariant),
            "polyhedron" => command = Some(Command::Polyhedron),
            "center" => command = Some(Command::Center),
            "blowup" => command = Some(Command::Blowup),
            "resolve" => command = Some(Command::Resolve),
            "verify" => command = Some(Command::Verify),
            "render" => command = Some(Command::Render),
            other => return Err(sc.err(&format!("unknown statement '{other}'"))),
        }
        sc.expect(';')?;
    }
    Ok(JobSpec {
        field: field.ok_or_else(|| sc.err("job has no 'field' statement"))?,
        invert,
        polynomial: polynomial.ok_or_else(|| sc.err("job has no 'f = ...' statement"))?,
        command: command.ok_or_else(|| sc.err("job has no command"))?,
        output,
        format,
    })
}

/// Canonical text of a job; `parse_job(print_job(j))` reproduces `j`.
pub fn print_job(job: &JobSpec) -> String {
    let mut out = format!("field {};\n", job.field);
    for v in &job.invert {
        let _ = writeln!(out, "invert {v};");
    }
    let _ = writeln!(out, "f = {};", job.polynomial);
    if let Some(o) = &job.output {
        let _ = writeln!(out, "output {o};");
    }
    if job.format == RenderFormat::Svg {
        let _ = writeln!(out, "format svg;");
    }
    let cmd = match job.command {
        Command::Invariant => "invariant",
        Command::Polyhedron => "polyhedron",
        Command::Center => "center",
        Command::Blowup => "blowup",
        Command::Resolve => "resolve",
        Command::Verify => "verify",
        Command::Render => "render",
    };
    let _ = writeln!(out, "{cmd};");
    out
}

/// Identify variables and build the local model: `y` (or the single
/// non-inverted variable besides the parameters) is the transverse
/// parameter; the remaining non-inverted variables, in order of first
/// appearance, are the x-parameters.
fn build_model(job: &JobSpec) -> Result<LocalModel> {
    let tower = Tower::parse_descriptor(&job.field)?;
    let mut vars = Vec::new();
    // Collect identifiers in order of first appearance.
    let mut chars = job.polynomial.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c.is_alphabetic() || c == '_' {
            let mut j = i + c.len_utf8();
            while let Some(&(k, c2)) = chars.peek() {
                if c2.is_alphanumeric() || c2 == '_' {
                    chars.next();
                    j = k + c2.len_utf8();
                } else {
                    break;
                }
            }
            let name = job.polynomial[i..j].to_string();
            if !vars.contains(&name) {
                vars.push(name);
            }
        }
    }
    // Tower generators are coefficients, not curve variables.
    vars.retain(|v| tower.generator_by_name(v).is_none());
    let inverted: Vec<String> = job.invert.clone();
    for v in &inverted {
        if !vars.contains(v) {
            return Err(Error::InvalidInput(format!(
                "inverted variable '{v}' does not occur in f"
            )));
        }
    }
    let mut params: Vec<String> = vars
        .iter()
        .filter(|v| !inverted.contains(v))
        .cloned()
        .collect();
    let ypos = params
        .iter()
        .position(|v| v == "y")
        .unwrap_or_else(|| params.len().saturating_sub(1));
    let yparam = params.remove(ypos);
    if params.is_empty() {
        // A germ like y^2 still sits in a two-dimensional ambient space.
        let ambient = if yparam == "x" { "x1" } else { "x" };
        params.push(ambient.to_string());
        vars.insert(0, ambient.to_string());
    }
    let f = Poly::parse(&job.polynomial, &tower, &vars)?;
    if inverted.is_empty() {
        let mut frame = params.clone();
        frame.push(yparam.clone());
        let map: Vec<usize> = vars
            .iter()
            .map(|v| frame.iter().position(|w| w == v).unwrap())
            .collect();
        LocalModel::new(tower, params, yparam, f.reframe(&frame, &map))
    } else {
        absorb_invertible(&tower, &f, &inverted, &params, &yparam)
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::DissolutionBudget { .. }
        | Error::BudgetExhausted(_)
        | Error::UnsupportedTower(_)
        | Error::Internal(_) => 2,
        _ => 1,
    }
}

/// Run a job; prints a summary to `out` and writes artifacts next to the
/// output prefix (default `curveres-out`). Returns the process exit code.
pub fn run_job(job: &JobSpec, out: &mut String) -> i32 {
    match run_job_inner(job, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn write_artifact(job: &JobSpec, suffix: &str, data: &str, out: &mut String) -> Result<()> {
    let prefix = job.output.as_deref().unwrap_or("curveres-out");
    let path = format!("{prefix}.{suffix}");
    std::fs::write(&path, data)?;
    let _ = writeln!(out, "wrote {path}");
    Ok(())
}

fn run_job_inner(job: &JobSpec, out: &mut String) -> Result<()> {
    let m = build_model(job)?;
    let _ = writeln!(out, "tower: {}", m.tower.descriptor());
    let _ = writeln!(out, "f = {}", m.f.render());
    match job.command {
        Command::Invariant | Command::Polyhedron | Command::Render => {
            if quasiregular_check(&m)? {
                let _ = writeln!(out, "verdict: quasi-regular (nothing to resolve)");
                return Ok(());
            }
            let (inv, r) = invariant(&m)?;
            let _ = writeln!(out, "order: {}", inv.a1);
            match &r.delta {
                Some(d) => {
                    let _ = writeln!(out, "delta: {d}");
                }
                None => {
                    let _ = writeln!(out, "delta: infinity");
                }
            }
            let _ = writeln!(out, "invariant: {inv}");
            for (v, l) in &r.z_change {
                let _ = writeln!(out, "dissolved vertex {v:?} with coefficient {}", l.render());
            }
            match job.command {
                Command::Polyhedron => {
                    let json = result_to_json(&r);
                    write_artifact(job, "polyhedron.json", &json.to_string(), out)?;
                    let _ = writeln!(out, "{}", polyhedron_to_ascii(&r.polyhedron));
                }
                Command::Render => {
                    if r.polyhedron.dim > 2 {
                        let json = result_to_json(&r);
                        write_artifact(job, "polyhedron.json", &json.to_string(), out)?;
                        let _ = writeln!(out, "notice: no plot for more than two parameters");
                    } else {
                        match job.format {
                            RenderFormat::Svg => {
                                let svg = polyhedron_to_svg(&r.polyhedron, r.delta.as_ref());
                                write_artifact(job, "polyhedron.svg", &svg, out)?;
                            }
                            RenderFormat::Ascii => {
                                let _ = writeln!(out, "{}", polyhedron_to_ascii(&r.polyhedron));
                            }
                        }
                    }
                }
                _ => {}
            }
            Ok(())
        }
        Command::Center | Command::Blowup => {
            if quasiregular_check(&m)? {
                let _ = writeln!(out, "verdict: quasi-regular (nothing to resolve)");
                return Ok(());
            }
            let (inv, r) = invariant(&m)?;
            let step = crate::resolver::blowup_step(&r, &inv)?;
            let _ = writeln!(
                out,
                "center: ({}^{}, {}^{})",
                step.center.params.0, step.center.exponents.0, step.center.params.1, step.center.exponents.1
            );
            let _ = writeln!(
                out,
                "weights: ({}, {}), l = {}",
                step.reduced.weights.0, step.reduced.weights.1, step.reduced.ell
            );
            if job.command == Command::Blowup {
                let _ = writeln!(out, "chart: {}", step.chart.variables.join(", "));
                let _ = writeln!(out, "transform: {}", step.transform.f_prime.render());
                let _ = writeln!(
                    out,
                    "stabilizers: mu_{} and mu_{} at the special points, mu_{} generically",
                    step.stabilizers.at_p2_axis, step.stabilizers.at_p1_axis, step.stabilizers.generic
                );
                let json = chart_to_json(&step.chart, &step.transform);
                write_artifact(job, "chart.json", &json.to_string(), out)?;
            }
            Ok(())
        }
        Command::Resolve | Command::Verify => {
            let tree = resolve(&m)?;
            summarize_tree(&tree.root, out);
            let _ = writeln!(out, "max depth: {}", tree.max_depth);
            let json = tree_to_json(&tree);
            write_artifact(job, "tree.json", &json.to_string(), out)?;
            write_artifact(job, "tree.dot", &tree_to_dot(&tree), out)?;
            if job.command == Command::Verify {
                let checked = verify_tree(&m, &tree.root)?;
                let _ = writeln!(out, "verified {checked} certificate entries independently");
            }
            Ok(())
        }
    }
}

fn summarize_tree(n: &crate::resolver::ResolutionNode, out: &mut String) {
    match &n.kind {
        NodeKind::RegularLeaf => {
            let _ = writeln!(out, "[{}] regular", n.label);
        }
        NodeKind::Blowup(b) => {
            let _ = writeln!(
                out,
                "[{}] invariant {} weights ({}, {}) certified {} exceptional points, max order {}",
                n.label,
                b.invariant,
                b.reduced.weights.0,
                b.reduced.weights.1,
                b.certificate.entries.len(),
                b.certificate.entries.iter().map(|e| e.order).max().unwrap_or(0)
            );
            for (_, c) in &n.children {
                summarize_tree(c, out);
            }
        }
    }
}

/// Re-check every certificate entry of the root blow-up with the dense
/// independent order routine; children were checked the same way when the
/// recursion built them.
fn verify_tree(m: &LocalModel, n: &crate::resolver::ResolutionNode) -> Result<usize> {
    let mut count = 0;
    if let NodeKind::Blowup(b) = &n.kind {
        let tower = b.transform.f_prime.tower().clone();
        let points = crate::resolver::exceptional_points(&b.transform, &b.chart, &tower)?;
        for p in &points {
            let a = log_order(&b.transform, &p.ext, &[p.coords.0.clone(), p.coords.1.clone()])?;
            let lead = b.transform.f_lead.set_var_one(0);
            // Reduce to the two exceptional coordinates for the dense check.
            let vars = b.transform.f_prime.vars().to_vec();
            let two = vec![vars[1].clone(), vars[2].clone()];
            let map = vec![0usize, 0, 1];
            let lead2 = lead.reframe(&two, &map);
            let o = independent_order(&lead2, &p.ext, &[p.coords.0.clone(), p.coords.1.clone()])?;
            if o != a {
                return Err(Error::Internal(format!(
                    "independent order {o} disagrees with the certificate {a}"
                )));
            }
            if o >= b.invariant.a1 {
                return Err(Error::Internal("certificate violated on re-check".into()));
            }
            count += 1;
        }
        for (_, c) in &n.children {
            count += verify_tree(m, c)?;
        }
    }
    Ok(count)
}

/// Process entry point: `curveres <job-file>` (or `-` for stdin).
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 2 || args[1] == "-h" || args[1] == "--help" {
        eprintln!("usage: curveres <job-file>   (use '-' to read the job from stdin)");
        eprintln!();
        eprintln!("job example:");
        eprintln!("  field QQ;");
        eprintln!("  f = y^2 - x^3;");
        eprintln!("  resolve;");
        return 1;
    }
    let text = if args[1] == "-" {
        use std::io::Read;
        let mut s = String::new();
        if std::io::stdin().read_to_string(&mut s).is_err() {
            eprintln!("error: could not read stdin");
            return 1;
        }
        s
    } else {
        match std::fs::read_to_string(&args[1]) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: could not read {}: {e}", args[1]);
                return 1;
            }
        }
    };
    let job = match parse_job(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let mut out = String::new();
    let code = run_job(&job, &mut out);
    print!("{out}");
    code
}
