//! Subcommands. Every command returns its report; exit codes are
//! 0 when every record passes, 1 on a failed check, 2 on bad input.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use quasibos::bosonization::{bosonize, check_bosonization, check_split, split, ProjectionData};
use quasibos::coalgebra::check_coalgebra;
use quasibos::dqb::{check_dqb, check_dqb_morphism, from_group_cocycle, DualQuasiBialgebra};
use quasibos::graded::{crossed_check, crossed_to_yd, gr_projection, grouplikes_form_group, pointed_filtration, yd_to_crossed};
use quasibos::hopfmod::check_trimodule;
use quasibos::linalg::Matrix;
use quasibos::preantipode::{check_derived_identities, check_preantipode, solve_preantipode};
use quasibos::yd::{check_braided_bialgebra, check_yd, yd_morphism_defect};
use quasibos::{Field, Report};

use crate::qk::{self, Object, Workspace};

#[derive(Parser, Debug)]
#[command(name = "qk", version, about = "Exact checks for dual quasi-bialgebras, their Yetter-Drinfeld modules and bosonizations")]
pub struct Cli {
    /// Read every scalar in this field instead of the declared one (Q or F<p>)
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<Field>,
    /// Write constructed objects to this .qk file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Tab-separated `report`, `record` and `overall` lines
    Records,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the axioms of one object
    Check {
        kind: CheckKind,
        /// FILE.qk#NAME, or FILE.qk for the last object of that kind
        target: String,
    },
    /// Solve for a preantipode
    Solve {
        what: SolveKind,
        target: String,
    },
    /// Build R#H from a braided bialgebra R over H
    Bosonize {
        h: String,
        r: String,
        /// Name of the bosonization in the output
        #[arg(long, default_value = "B")]
        name: String,
    },
    /// Recover R from A with a projection σ: H → A, π: A → H
    Split {
        a: String,
        h: String,
        sigma: String,
        pi: String,
        /// Preantipode of H to use
        #[arg(long, conflicts_with = "solve")]
        preantipode: Option<String>,
        /// Solve for a preantipode of H
        #[arg(long)]
        solve: bool,
    },
    /// Associated graded of a pointed A, with its canonical projection
    Gr {
        a: String,
        /// Grouplike basis elements spanning the coradical (labels)
        #[arg(long, value_delimiter = ',')]
        grouplikes: Option<Vec<String>>,
    },
    /// Turn a group with a 3-cocycle into explicit structure constants
    FromGroup { target: String },
    /// Translate between YD modules over k^θG and crossed (G, θ)-modules
    Convert { direction: Direction, target: String },
    /// Run every applicable check on every object in a file
    Suite { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Coalgebra,
    Dqb,
    Yd,
    Trimodule,
    Braided,
    Crossed,
    Preantipode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveKind {
    Preantipode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Yd2crossed,
    Crossed2yd,
}

fn parse_field(s: &str) -> Result<Field, String> {
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let p = s.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()).ok_or_else(|| format!("expected Q or F<p>, got {s}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

/// Bad input: unreadable files, parse errors, unknown references.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub struct Output {
    pub reports: Vec<Report>,
    /// Written to --out, or printed when the command's product is text.
    pub workspace: Option<Workspace>,
    pub print_workspace: bool,
}

impl Output {
    fn report(r: Report) -> Output {
        Output { reports: vec![r], workspace: None, print_workspace: false }
    }
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }
}

/// Files are loaded once so objects from one file share their base structures.
struct Loader {
    field: Option<Field>,
    files: HashMap<String, Workspace>,
}

impl Loader {
    fn file(&mut self, path: &str) -> Result<&Workspace, InputError> {
        if !self.files.contains_key(path) {
            let text = fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
            let ws = qk::parse_with_field(&text, self.field).map_err(|e| InputError(format!("{path}: {e}")))?;
            self.files.insert(path.to_string(), ws);
        }
        Ok(&self.files[path])
    }

    /// Resolves FILE#NAME (or FILE alone) to (file, name, object).
    fn get(&mut self, target: &str, kind: &str) -> Result<(Workspace, String, Object), InputError> {
        let (path, name) = match target.rsplit_once('#') {
            Some((p, n)) => (p, Some(n)),
            None => (target, None),
        };
        let ws = self.file(path)?;
        let (n, o) = ws.pick(kind, name).map_err(|e| InputError(format!("{target}: {e}")))?;
        Ok((ws.clone(), n.to_string(), o.clone()))
    }

    fn dqb(&mut self, target: &str) -> Result<(Workspace, String, Arc<DualQuasiBialgebra>), InputError> {
        let (ws, n, o) = self.get(target, "dqb")?;
        let Object::Dqb { dqb, .. } = o else { unreachable!() };
        Ok((ws, n, dqb))
    }

    fn map(&mut self, target: &str, rows: usize, cols: usize) -> Result<Matrix, InputError> {
        let (_, n, o) = self.get(target, "map")?;
        let Object::Map { matrix, .. } = o else { unreachable!() };
        if (matrix.rows(), matrix.cols()) != (rows, cols) {
            return Err(InputError(format!("map {n} is {}x{}, expected {rows}x{cols}", matrix.rows(), matrix.cols())));
        }
        Ok(matrix)
    }
}

/// A workspace holding `name` from `src` together with the group it was declared from.
fn seeded(field: Field, src: &Workspace, name: &str) -> Workspace {
    let mut out = Workspace::new(field);
    if let Some(Object::Dqb { group: Some(g), .. }) = src.get(name) {
        if let Some(obj) = src.get(g) {
            out.insert(g.clone(), obj.clone());
        }
    }
    if let Some(obj) = src.get(name) {
        out.insert(name, obj.clone());
    }
    out
}

fn fresh(ws: &Workspace, want: &str) -> String {
    let mut name = want.to_string();
    let mut k = 1;
    while ws.get(&name).is_some() {
        name = format!("{want}{k}");
        k += 1;
    }
    name
}

pub fn execute(cli: &Cli) -> Result<Output, InputError> {
    let mut ld = Loader { field: cli.field, files: HashMap::new() };
    match &cli.command {
        Command::Check { kind, target } => check(&mut ld, *kind, target).map(Output::report),
        Command::Solve { target, .. } => {
            let (ws, hn, h) = ld.dqb(target)?;
            let mut rep = Report::new(format!("preantipode of {hn}"));
            let Some(sol) = solve_preantipode(&h) else {
                rep.fail("solve", "no preantipode (system inconsistent)");
                return Ok(Output::report(rep));
            };
            rep.pass(format!("solution space has dimension {}", sol.solution_dim));
            rep.absorb("", check_preantipode(&h, &sol.s));
            rep.absorb("", check_derived_identities(&h, &sol.s));
            let mut out = seeded(h.field(), &ws, &hn);
            let sn = fresh(&out, &format!("S_{hn}"));
            out.insert(sn, Object::Preantipode { over: hn, s: sol.s });
            Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: false })
        }
        Command::Bosonize { h, r, name } => {
            let (ws, hn, hd) = ld.dqb(h)?;
            let (_, rn, ro) = ld.get(r, "braided")?;
            let Object::Braided { bialgebra, .. } = ro else { unreachable!() };
            if *hd != *bialgebra.carrier.base() {
                return Err(InputError(format!("{rn} is not braided over {hn}")));
            }
            let mut rep = Report::new(format!("bosonization of {rn} over {hn}"));
            let bos = match bosonize(&hd, &bialgebra) {
                Ok(b) => b,
                Err(e) => {
                    rep.fail("construction", e.to_string());
                    return Ok(Output::report(rep));
                }
            };
            rep.absorb("", check_bosonization(&bos));
            let mut out = seeded(hd.field(), &ws, &hn);
            let rn = fresh(&out, &rn);
            out.insert(rn, Object::Braided { over: hn.clone(), bialgebra });
            let bn = fresh(&out, name);
            out.insert(bn.clone(), Object::Dqb { dqb: bos.b.clone(), group: None });
            let sn = fresh(&out, "sigma");
            out.insert(sn, Object::Map { src: hn.clone(), dst: bn.clone(), matrix: bos.sigma });
            let pn = fresh(&out, "pi");
            out.insert(pn, Object::Map { src: bn, dst: hn, matrix: bos.pi });
            Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: false })
        }
        Command::Split { a, h, sigma, pi, preantipode, solve } => {
            let (_, an, ad) = ld.dqb(a)?;
            let (ws, hn, hd) = ld.dqb(h)?;
            let sm = ld.map(sigma, ad.dim(), hd.dim())?;
            let pm = ld.map(pi, hd.dim(), ad.dim())?;
            let p = ProjectionData::new(ad, hd.clone(), sm, pm).map_err(|e| InputError(e.to_string()))?;
            let mut rep = Report::new(format!("splitting of {an} over {hn}"));
            let s = match (preantipode, solve) {
                (Some(t), _) => {
                    let (_, _, o) = ld.get(t, "preantipode")?;
                    let Object::Preantipode { s, .. } = o else { unreachable!() };
                    if (s.rows(), s.cols()) != (hd.dim(), hd.dim()) {
                        return Err(InputError(format!("{t} is not a preantipode of {hn}")));
                    }
                    s
                }
                (None, true) => match solve_preantipode(&hd) {
                    Some(sol) => sol.s,
                    None => {
                        rep.fail("preantipode", format!("{hn} has no preantipode (system inconsistent)"));
                        return Ok(Output::report(rep));
                    }
                },
                (None, false) => return Err(InputError("give --preantipode FILE#NAME or --solve".into())),
            };
            rep.absorb("", check_split(&p, &s));
            let mut out = seeded(hd.field(), &ws, &hn);
            if let Ok(sp) = split(&p, &s) {
                let rn = fresh(&out, "R");
                out.insert(rn, Object::Braided { over: hn, bialgebra: sp.r });
            }
            Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: false })
        }
        Command::Gr { a, grouplikes } => {
            let (_, an, ad) = ld.dqb(a)?;
            let idx = match grouplikes {
                Some(gs) => Some(
                    gs.iter()
                        .map(|g| ad.labels().iter().position(|l| l == g).ok_or_else(|| InputError(format!("{an} has no basis element {g}"))))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => None,
            };
            gr(&ad, &an, idx.as_deref())
        }
        Command::FromGroup { target } => {
            let (_, gn, o) = ld.get(target, "group")?;
            let Object::Group(g) = o else { unreachable!() };
            let dqb = from_group_cocycle(&g).map_err(|e| InputError(format!("{gn}: {e}")))?;
            let mut rep = Report::new(format!("k^θ{gn}"));
            rep.absorb("", check_dqb(&dqb));
            let mut out = Workspace::new(dqb.field());
            out.insert(format!("k{gn}"), Object::Dqb { dqb: Arc::new(dqb), group: None });
            Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: true })
        }
        Command::Convert { direction, target } => convert(&mut ld, *direction, target),
        Command::Suite { file } => {
            let path = file.to_string_lossy().into_owned();
            let ws = ld.file(&path)?.clone();
            Ok(Output { reports: suite(&ws), workspace: None, print_workspace: false })
        }
    }
}

fn check(ld: &mut Loader, kind: CheckKind, target: &str) -> Result<Report, InputError> {
    let k = match kind {
        CheckKind::Coalgebra => "coalgebra",
        CheckKind::Dqb => "dqb",
        CheckKind::Yd => "yd",
        CheckKind::Trimodule => "trimodule",
        CheckKind::Braided => "braided",
        CheckKind::Crossed => "crossed",
        CheckKind::Preantipode => "preantipode",
    };
    let (ws, name, obj) = ld.get(target, k)?;
    Ok(check_object(&ws, &name, &obj))
}

fn check_object(ws: &Workspace, name: &str, obj: &Object) -> Report {
    let mut rep = Report::new(format!("{} {name}", obj.kind()));
    match obj {
        Object::Group(_) => rep.pass("group with normalized 3-cocycle"),
        Object::Coalgebra(c) => rep.absorb("", check_coalgebra(c)),
        Object::Dqb { dqb, .. } => rep.absorb("", check_dqb(dqb)),
        Object::Yd { module, .. } => rep.absorb("", check_yd(module)),
        Object::Trimodule { module, .. } => rep.absorb("", check_trimodule(module)),
        Object::Braided { bialgebra, .. } => rep.absorb("", check_braided_bialgebra(bialgebra)),
        Object::Crossed { module, .. } => rep.absorb("", crossed_check(module)),
        Object::Preantipode { over, s } => match ws.dqb(over) {
            Some(h) => {
                rep.absorb("", check_preantipode(h, s));
                rep.absorb("", check_derived_identities(h, s));
            }
            None => rep.fail("base", format!("{over} is not a dqb")),
        },
        Object::Map { src, dst, matrix } => match (ws.get(src), ws.get(dst)) {
            (Some(Object::Dqb { dqb: a, .. }), Some(Object::Dqb { dqb: b, .. })) => rep.absorb("", check_dqb_morphism(matrix, a, b)),
            (Some(Object::Yd { module: v, .. }), Some(Object::Yd { module: w, .. })) => {
                rep.record("YD morphism", yd_morphism_defect(matrix, v, w));
            }
            _ => rep.skip("morphism", "no morphism notion between these kinds"),
        },
    }
    rep
}

fn suite(ws: &Workspace) -> Vec<Report> {
    let mut reports = Vec::new();
    for (name, obj) in &ws.objects {
        let mut rep = check_object(ws, name, obj);
        if let Object::Dqb { dqb, .. } = obj {
            match solve_preantipode(dqb) {
                Some(sol) => rep.absorb("preantipode: ", check_preantipode(dqb, &sol.s)),
                // a missing preantipode is a property of H, not a failed axiom
                None => rep.pass("preantipode solve: no solution (system inconsistent)"),
            }
        }
        reports.push(rep);
    }
    reports
}

fn gr(a: &Arc<DualQuasiBialgebra>, an: &str, grouplikes: Option<&[usize]>) -> Result<Output, InputError> {
    let mut rep = Report::new(format!("associated graded of {an}"));
    rep.absorb("", grouplikes_form_group(a));
    let built = pointed_filtration(a, grouplikes).and_then(|f| gr_projection(a, &f));
    let (g, p) = match built {
        Ok(x) => x,
        Err(e) => {
            rep.fail("construction", e.to_string());
            return Ok(Output::report(rep));
        }
    };
    if g.certified {
        rep.pass("coradical certified");
    } else {
        rep.skip("coradical certified", g.status());
    }
    rep.absorb("gr: ", check_dqb(&g.dqb));
    rep.absorb("", p.check());
    let gd = p.a.clone();
    let hd = p.h.clone();
    let mut out = Workspace::new(a.field());
    let (grn, hn) = (format!("gr{an}"), format!("{an}0"));
    out.insert(hn.clone(), Object::Dqb { dqb: hd.clone(), group: None });
    out.insert(grn.clone(), Object::Dqb { dqb: gd, group: None });
    out.insert("sigma", Object::Map { src: hn.clone(), dst: grn.clone(), matrix: p.sigma.clone() });
    out.insert("pi", Object::Map { src: grn, dst: hn.clone(), matrix: p.pi.clone() });
    match solve_preantipode(&hd) {
        Some(sol) => {
            rep.absorb("split: ", check_split(&p, &sol.s));
            if let Ok(sp) = split(&p, &sol.s) {
                out.insert("R", Object::Braided { over: hn, bialgebra: sp.r });
            }
        }
        None => rep.skip("split", "degree-0 part has no preantipode"),
    }
    Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: false })
}

fn convert(ld: &mut Loader, dir: Direction, target: &str) -> Result<Output, InputError> {
    match dir {
        Direction::Yd2crossed => {
            let (ws, name, o) = ld.get(target, "yd")?;
            let Object::Yd { over, module } = o else { unreachable!() };
            let Some(Object::Dqb { group: Some(gn), .. }) = ws.get(&over) else {
                return Err(InputError(format!("{over} is not declared from a group")));
            };
            let mut rep = Report::new(format!("crossed module from {name}"));
            let mut out = Workspace::new(module.field());
            match yd_to_crossed(&module) {
                Ok(c) => {
                    rep.absorb("", crossed_check(&c));
                    if let Some(g) = ws.get(gn) {
                        out.insert(gn.clone(), g.clone());
                    }
                    out.insert(name, Object::Crossed { group: gn.clone(), module: c });
                }
                Err(e) => rep.fail("conversion", e.to_string()),
            }
            Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: true })
        }
        Direction::Crossed2yd => {
            let (ws, name, o) = ld.get(target, "crossed")?;
            let Object::Crossed { group: gn, module } = o else { unreachable!() };
            let h = Arc::new(from_group_cocycle(&module.group).map_err(|e| InputError(e.to_string()))?);
            let mut rep = Report::new(format!("YD module from {name}"));
            let mut out = Workspace::new(h.field());
            if let Some(g) = ws.get(&gn) {
                out.insert(gn.clone(), g.clone());
            }
            let hn = fresh(&out, &format!("k{gn}"));
            out.insert(hn.clone(), Object::Dqb { dqb: h.clone(), group: Some(gn) });
            match crossed_to_yd(&module, h) {
                Ok(v) => {
                    rep.absorb("", check_yd(&v));
                    out.insert(name, Object::Yd { over: hn, module: v });
                }
                Err(e) => rep.fail("conversion", e.to_string()),
            }
            Ok(Output { reports: vec![rep], workspace: Some(out), print_workspace: true })
        }
    }
}

/// Runs a parsed command line, writing to stdout and stderr; returns the exit code.
/// `argv` is echoed at the top of the report.
pub fn run(cli: &Cli, argv: &[String]) -> i32 {
    let out = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let echo = argv.join(" ");
    match cli.format {
        Format::Text => println!("$ qk {echo}"),
        Format::Records => println!("command\t{}", quasibos::report::escape(&echo)),
    }
    for r in &out.reports {
        match cli.format {
            Format::Text => println!("{r}"),
            Format::Records => print!("{}", r.to_records()),
        }
    }
    if let Some(ws) = &out.workspace {
        let text = qk::serialize(ws);
        match &cli.out {
            Some(path) => {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return 2;
                }
            }
            None if out.print_workspace && cli.format == Format::Text => print!("\n{text}"),
            None => {}
        }
    }
    if out.passed() {
        0
    } else {
        1
    }
}
