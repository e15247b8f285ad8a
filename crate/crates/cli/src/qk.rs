//! The `.qk` structure-constants format.
//!
//! Line oriented. `field Q` or `field F<p>` comes first; then blocks opened by
//! `object <kind> <name> [over <H> | group <G>] [dim <n> basis <labels…>]` or
//! `map <name> <src> <dst>`, each followed by sparse entries
//! `<key> <index…> = <value>`. Indices are basis labels (labels win) or
//! 0-based positions. `#` starts a comment. Unlisted Δ, ε, m, u, actions and
//! coactions are zero; unlisted ω entries take the counital value
//! ε(x)ε(y)ε(z) and unlisted θ entries are 1.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use quasibos::coalgebra::{Coalgebra, Functional};
use quasibos::dqb::{from_group_cocycle, DualQuasiBialgebra, GroupCocycleData};
use quasibos::graded::CrossedGModule;
use quasibos::hopfmod::Trimodule;
use quasibos::linalg::{zero_vector, Matrix, Vector};
use quasibos::yd::{BraidedBialgebra, Comodule, YDModule};
use quasibos::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug)]
pub enum Object {
    Group(GroupCocycleData),
    Coalgebra(Coalgebra),
    /// `group` names the group object when the structure was declared from it.
    Dqb { dqb: Arc<DualQuasiBialgebra>, group: Option<String> },
    Yd { over: String, module: YDModule },
    Trimodule { over: String, module: Trimodule },
    Braided { over: String, bialgebra: BraidedBialgebra },
    Crossed { group: String, module: CrossedGModule },
    Preantipode { over: String, s: Matrix },
    Map { src: String, dst: String, matrix: Matrix },
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Group(_) => "group",
            Object::Coalgebra(_) => "coalgebra",
            Object::Dqb { .. } => "dqb",
            Object::Yd { .. } => "yd",
            Object::Trimodule { .. } => "trimodule",
            Object::Braided { .. } => "braided",
            Object::Crossed { .. } => "crossed",
            Object::Preantipode { .. } => "preantipode",
            Object::Map { .. } => "map",
        }
    }

    fn labels(&self) -> Vec<String> {
        match self {
            Object::Group(g) => g.labels.clone(),
            Object::Coalgebra(c) => c.labels().to_vec(),
            Object::Dqb { dqb, .. } => dqb.labels().to_vec(),
            Object::Yd { module, .. } => module.labels().to_vec(),
            Object::Trimodule { module, .. } => module.labels().to_vec(),
            Object::Braided { bialgebra, .. } => bialgebra.carrier.labels().to_vec(),
            Object::Crossed { module, .. } => module.labels.clone(),
            Object::Preantipode { .. } | Object::Map { .. } => Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub objects: Vec<(String, Object)>,
}

impl Workspace {
    pub fn new(field: Field) -> Workspace {
        Workspace { field, objects: Vec::new() }
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    /// Adds or replaces `name`.
    pub fn insert(&mut self, name: impl Into<String>, obj: Object) {
        let name = name.into();
        match self.objects.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = obj,
            None => self.objects.push((name, obj)),
        }
    }

    pub fn dqb(&self, name: &str) -> Option<&Arc<DualQuasiBialgebra>> {
        match self.get(name)? {
            Object::Dqb { dqb, .. } => Some(dqb),
            _ => None,
        }
    }

    /// The object named `name`, or the last object of `kind` when `name` is None.
    pub fn pick(&self, kind: &str, name: Option<&str>) -> Result<(&str, &Object), String> {
        let found = match name {
            Some(n) => self.objects.iter().find(|(m, _)| m == n),
            None => self.objects.iter().rev().find(|(_, o)| o.kind() == kind),
        };
        match found {
            Some((n, o)) if o.kind() == kind => Ok((n.as_str(), o)),
            Some((n, o)) => Err(format!("{n} is a {}, not a {kind}", o.kind())),
            None => Err(match name {
                Some(n) => format!("no object named {n}"),
                None => format!("no {kind} object in file"),
            }),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Space {
    Own,
    Base,
    Src,
    Dst,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    Scalar,
    Label(Space),
}

fn keys(kind: &str) -> &'static [(&'static str, &'static [Space], Value)] {
    use Space::*;
    const S: Value = Value::Scalar;
    match kind {
        "group" => &[("mul", &[Own, Own], Value::Label(Own)), ("theta", &[Own, Own, Own], S)],
        "coalgebra" => &[("delta", &[Own, Own, Own], S), ("counit", &[Own], S)],
        "dqb" => &[
            ("delta", &[Own, Own, Own], S),
            ("counit", &[Own], S),
            ("mult", &[Own, Own, Own], S),
            ("unit", &[Own], S),
            ("omega", &[Own, Own, Own], S),
        ],
        "yd" => &[("coaction", &[Own, Base, Own], S), ("action", &[Base, Own, Own], S)],
        "trimodule" => &[
            ("lcoaction", &[Own, Base, Own], S),
            ("rcoaction", &[Own, Own, Base], S),
            ("raction", &[Own, Base, Own], S),
            ("laction", &[Base, Own, Own], S),
        ],
        "braided" => &[
            ("coaction", &[Own, Base, Own], S),
            ("action", &[Base, Own, Own], S),
            ("mult", &[Own, Own, Own], S),
            ("unit", &[Own], S),
            ("delta", &[Own, Own, Own], S),
            ("counit", &[Own], S),
        ],
        "crossed" => &[("grade", &[Own], Value::Label(Base)), ("action", &[Base, Own, Own], S)],
        "preantipode" => &[("entry", &[Base, Base], S)],
        "map" => &[("entry", &[Dst, Src], S)],
        _ => &[],
    }
}

const KINDS: [&str; 8] = ["group", "coalgebra", "dqb", "yd", "trimodule", "braided", "crossed", "preantipode"];

#[derive(Clone, Debug)]
enum Val {
    S(Scalar),
    L(usize),
}

struct Block {
    kind: String,
    name: String,
    line: usize,
    /// `over` or `group` reference, or (src, dst) for maps
    base: Option<String>,
    dst: Option<String>,
    labels: Vec<String>,
    entries: BTreeMap<(String, Vec<usize>), Val>,
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (ci, (bi, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((c0, b0)) = start.take() {
                out.push((c0 + 1, &line[b0..bi]));
            }
        } else if start.is_none() {
            start = Some((ci, bi));
        }
    }
    if let Some((c0, b0)) = start {
        out.push((c0 + 1, &line[b0..]));
    }
    out
}

fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, ch) in line.char_indices() {
        if ch == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = ch.is_whitespace();
    }
    line
}

fn resolve(labels: &[String], tok: &str) -> Option<usize> {
    labels.iter().position(|l| l == tok).or_else(|| tok.parse::<usize>().ok().filter(|&i| i < labels.len()))
}

pub fn parse(text: &str) -> Result<Workspace, ParseError> {
    parse_with_field(text, None)
}

/// Parses, reading scalars in `field` instead of the declared field when given.
pub fn parse_with_field(text: &str, field: Option<Field>) -> Result<Workspace, ParseError> {
    let mut ws: Option<Workspace> = None;
    let mut block: Option<Block> = None;
    let err = |line: usize, col: usize, msg: String| ParseError { line, col, msg };
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(strip_comment(raw));
        let Some(&(c0, head)) = toks.first() else { continue };
        match head {
            "field" => {
                if ws.is_some() {
                    return Err(err(ln, c0, "field declared twice or after objects".into()));
                }
                let (c1, v) = *toks.get(1).ok_or_else(|| err(ln, c0, "field needs Q or F<p>".into()))?;
                let declared = if v == "Q" {
                    Field::Rationals
                } else if let Some(p) = v.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
                    Field::prime(p).map_err(|e| err(ln, c1, e.to_string()))?
                } else {
                    return Err(err(ln, c1, format!("unknown field '{v}'")));
                };
                ws = Some(Workspace::new(field.unwrap_or(declared)));
            }
            "object" | "map" => {
                let w = ws.as_mut().ok_or_else(|| err(ln, c0, "missing field line".into()))?;
                if let Some(b) = block.take() {
                    finish(w, b)?;
                }
                block = Some(header(&toks, ln, w)?);
            }
            _ => {
                let w = ws.as_ref().ok_or_else(|| err(ln, c0, "missing field line".into()))?;
                let b = block.as_mut().ok_or_else(|| err(ln, c0, format!("entry '{head}' outside an object")))?;
                entry(&toks, ln, w, b)?;
            }
        }
    }
    let mut w = ws.ok_or_else(|| err(1, 1, "missing field line".into()))?;
    if let Some(b) = block.take() {
        finish(&mut w, b)?;
    }
    Ok(w)
}

fn header(toks: &[(usize, &str)], ln: usize, ws: &Workspace) -> Result<Block, ParseError> {
    let err = |col: usize, msg: String| ParseError { line: ln, col, msg };
    let end = toks.last().map_or(1, |t| t.0);
    let need = |i: usize, what: &str| toks.get(i).copied().ok_or_else(|| err(end, format!("expected {what}")));
    let check_name = |(c, n): (usize, &str)| -> Result<String, ParseError> {
        if n.contains('#') || n.contains('=') {
            return Err(err(c, format!("name '{n}' may not contain '#' or '='")));
        }
        if ws.get(n).is_some() {
            return Err(err(c, format!("duplicate object name {n}")));
        }
        Ok(n.to_string())
    };
    let known = |(c, n): (usize, &str)| -> Result<String, ParseError> {
        ws.get(n).map(|_| n.to_string()).ok_or_else(|| err(c, format!("unknown reference {n}")))
    };
    if toks[0].1 == "map" {
        let name = check_name(need(1, "map name")?)?;
        let src = known(need(2, "source object")?)?;
        let dst = known(need(3, "target object")?)?;
        return Ok(Block { kind: "map".into(), name, line: ln, base: Some(src), dst: Some(dst), labels: Vec::new(), entries: BTreeMap::new() });
    }
    let (ck, kind) = need(1, "object kind")?;
    if !KINDS.contains(&kind) {
        return Err(err(ck, format!("unknown object kind '{kind}'")));
    }
    let name = check_name(need(2, "object name")?)?;
    let mut i = 3;
    let mut base = None;
    let mut dim = None;
    let mut labels = Vec::new();
    while i < toks.len() {
        let (c, t) = toks[i];
        match t {
            "over" | "group" => {
                base = Some(known(need(i + 1, "reference")?)?);
                i += 2;
            }
            "dim" => {
                let (cd, d) = need(i + 1, "dimension")?;
                dim = Some(d.parse::<usize>().map_err(|_| err(cd, format!("bad dimension '{d}'")))?);
                i += 2;
            }
            "basis" => {
                labels = toks[i + 1..].iter().map(|t| t.1.to_string()).collect();
                for (j, (cl, l)) in toks[i + 1..].iter().enumerate() {
                    if l.contains('=') || labels[..j].contains(&l.to_string()) {
                        return Err(err(*cl, format!("bad or repeated basis label '{l}'")));
                    }
                }
                i = toks.len();
            }
            _ => return Err(err(c, format!("unexpected '{t}' in header"))),
        }
    }
    let needs_base = matches!(kind, "yd" | "trimodule" | "braided" | "crossed" | "preantipode");
    if needs_base && base.is_none() {
        return Err(err(end, format!("{kind} needs 'over <H>' (or 'group <G>' for crossed)")));
    }
    let from_group = kind == "dqb" && base.is_some();
    if kind != "preantipode" && !from_group {
        let d = dim.ok_or_else(|| err(end, "missing 'dim'".into()))?;
        if labels.is_empty() && d > 0 {
            labels = (0..d).map(|k| k.to_string()).collect();
        }
        if labels.len() != d {
            return Err(err(end, format!("basis has {} labels but dim is {d}", labels.len())));
        }
    }
    Ok(Block { kind: kind.to_string(), name, line: ln, base, dst: None, labels, entries: BTreeMap::new() })
}

fn space_labels(ws: &Workspace, b: &Block, s: Space) -> Vec<String> {
    let of = |n: &Option<String>| n.as_deref().and_then(|n| ws.get(n)).map(|o| o.labels()).unwrap_or_default();
    match s {
        Space::Own => b.labels.clone(),
        Space::Base | Space::Src => of(&b.base),
        Space::Dst => of(&b.dst),
    }
}

fn entry(toks: &[(usize, &str)], ln: usize, ws: &Workspace, b: &mut Block) -> Result<(), ParseError> {
    let err = |col: usize, msg: String| ParseError { line: ln, col, msg };
    let (ck, key) = toks[0];
    let Some(&(_, spaces, value)) = keys(&b.kind).iter().find(|k| k.0 == key) else {
        return Err(err(ck, format!("'{key}' is not an entry of a {}", b.kind)));
    };
    if b.kind == "dqb" && b.base.is_some() {
        return Err(err(ck, "a dqb declared from a group takes no entries".into()));
    }
    let eq = toks.iter().position(|t| t.1 == "=").ok_or_else(|| err(ck, "expected '='".into()))?;
    if eq != spaces.len() + 1 {
        return Err(err(toks[eq.min(toks.len() - 1)].0, format!("'{key}' takes {} indices", spaces.len())));
    }
    if toks.len() != eq + 2 {
        return Err(err(toks.last().unwrap().0, "expected exactly one value after '='".into()));
    }
    let mut idx = Vec::with_capacity(spaces.len());
    for (k, &s) in spaces.iter().enumerate() {
        let (c, t) = toks[1 + k];
        let labels = space_labels(ws, b, s);
        idx.push(resolve(&labels, t).ok_or_else(|| err(c, format!("unknown basis element '{t}'")))?);
    }
    let (cv, v) = toks[eq + 1];
    let val = match value {
        Value::Scalar => Val::S(ws.field.parse(v).map_err(|e| err(cv, e.to_string()))?),
        Value::Label(s) => Val::L(resolve(&space_labels(ws, b, s), v).ok_or_else(|| err(cv, format!("unknown basis element '{v}'")))?),
    };
    if b.entries.insert((key.to_string(), idx), val).is_some() {
        return Err(err(ck, "duplicate entry".into()));
    }
    Ok(())
}

struct Entries<'a> {
    b: &'a Block,
    f: Field,
}

impl Entries<'_> {
    fn scalars(&self, key: &str) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> + '_ {
        let key = key.to_string();
        self.b.entries.iter().filter(move |((k, _), _)| *k == key).filter_map(|((_, i), v)| match v {
            Val::S(s) => Some((i, s)),
            Val::L(_) => None,
        })
    }
    fn labels_of(&self, key: &str) -> Vec<(Vec<usize>, usize)> {
        self.b
            .entries
            .iter()
            .filter(|((k, _), _)| k == key)
            .filter_map(|((_, i), v)| match v {
                Val::L(l) => Some((i.clone(), *l)),
                Val::S(_) => None,
            })
            .collect()
    }
    fn vector(&self, key: &str, d: usize) -> Vector {
        let mut v = zero_vector(self.f, d);
        for (i, s) in self.scalars(key) {
            v[i[0]] = s.clone();
        }
        v
    }
    fn coalgebra(&self, d: usize) -> quasibos::Result<Coalgebra> {
        let mut delta = vec![Vec::new(); d];
        for (i, s) in self.scalars("delta") {
            delta[i[0]].push((i[1], i[2], s.clone()));
        }
        Coalgebra::from_terms(self.f, self.b.labels.clone(), delta, self.vector("counit", d))
    }
    fn mult_table(&self, d: usize) -> Vec<Vec<Vector>> {
        let mut m = vec![vec![zero_vector(self.f, d); d]; d];
        for (i, s) in self.scalars("mult") {
            m[i[0]][i[1]][i[2]] = s.clone();
        }
        m
    }
}

fn finish(ws: &mut Workspace, b: Block) -> Result<(), ParseError> {
    let oerr = |msg: String| ParseError { line: b.line, col: 1, msg: format!("object {}: {msg}", b.name) };
    let f = ws.field;
    let e = Entries { b: &b, f };
    let d = b.labels.len();
    let base_dqb = || -> Result<Arc<DualQuasiBialgebra>, ParseError> {
        let n = b.base.as_deref().unwrap_or_default();
        ws.dqb(n).cloned().ok_or_else(|| oerr(format!("{n} is not a dqb")))
    };
    let obj = match b.kind.as_str() {
        "group" => {
            let mut mul = vec![vec![usize::MAX; d]; d];
            for (i, l) in e.labels_of("mul") {
                mul[i[0]][i[1]] = l;
            }
            if let Some(a) = (0..d).find(|&a| mul[a].contains(&usize::MAX)) {
                return Err(oerr(format!("multiplication table incomplete in row {}", b.labels[a])));
            }
            let mut theta = vec![f.one(); d * d * d];
            for (i, s) in e.scalars("theta") {
                theta[(i[0] * d + i[1]) * d + i[2]] = s.clone();
            }
            let g = GroupCocycleData { labels: b.labels.clone(), mul, theta };
            g.validate().map_err(|x| oerr(x.to_string()))?;
            Object::Group(g)
        }
        "coalgebra" => Object::Coalgebra(e.coalgebra(d).map_err(|x| oerr(x.to_string()))?),
        "dqb" => match &b.base {
            Some(g) => {
                let Some(Object::Group(gd)) = ws.get(g) else { return Err(oerr(format!("{g} is not a group"))) };
                let dqb = from_group_cocycle(gd).map_err(|x| oerr(x.to_string()))?;
                Object::Dqb { dqb: Arc::new(dqb), group: Some(g.clone()) }
            }
            None => {
                let coalg = e.coalgebra(d).map_err(|x| oerr(x.to_string()))?;
                let eps = coalg.counit().clone();
                let mut omega = Functional::from_fn(d, 3, |ix| &(&eps[ix[0]] * &eps[ix[1]]) * &eps[ix[2]]).values().to_vec();
                for (i, s) in e.scalars("omega") {
                    omega[(i[0] * d + i[1]) * d + i[2]] = s.clone();
                }
                let omega = Functional::new(d, 3, omega).map_err(|x| oerr(x.to_string()))?;
                let dqb = DualQuasiBialgebra::new(coalg, e.mult_table(d), e.vector("unit", d), omega).map_err(|x| oerr(x.to_string()))?;
                Object::Dqb { dqb: Arc::new(dqb), group: None }
            }
        },
        "yd" | "braided" => {
            let h = base_dqb()?;
            let n = h.dim();
            let mut co = vec![Vec::new(); d];
            for (i, s) in e.scalars("coaction") {
                co[i[0]].push((i[1], i[2], s.clone()));
            }
            let comodule = Comodule::new(h, b.labels.clone(), co).map_err(|x| oerr(x.to_string()))?;
            let mut action = vec![vec![zero_vector(f, d); d]; n];
            for (i, s) in e.scalars("action") {
                action[i[0]][i[1]][i[2]] = s.clone();
            }
            let module = YDModule::new(comodule, action).map_err(|x| oerr(x.to_string()))?;
            let over = b.base.clone().unwrap_or_default();
            if b.kind == "yd" {
                Object::Yd { over, module }
            } else {
                let table = e.mult_table(d);
                let mult = Matrix::from_fn(f, d, d * d, |k, c| table[c / d][c % d][k].clone());
                let mut delta = Matrix::zeros(f, d * d, d);
                for (i, s) in e.scalars("delta") {
                    delta.set(i[1] * d + i[2], i[0], s.clone());
                }
                let bialgebra = BraidedBialgebra { carrier: module, mult, unit: e.vector("unit", d), delta, counit: e.vector("counit", d) };
                Object::Braided { over, bialgebra }
            }
        }
        "trimodule" => {
            let h = base_dqb()?;
            let n = h.dim();
            let mut lco = Matrix::zeros(f, n * d, d);
            let mut rco = Matrix::zeros(f, d * n, d);
            let mut ract = Matrix::zeros(f, d, d * n);
            let mut lact = Matrix::zeros(f, d, n * d);
            for (i, s) in e.scalars("lcoaction") {
                lco.set(i[1] * d + i[2], i[0], s.clone());
            }
            for (i, s) in e.scalars("rcoaction") {
                rco.set(i[1] * n + i[2], i[0], s.clone());
            }
            for (i, s) in e.scalars("raction") {
                ract.set(i[2], i[0] * n + i[1], s.clone());
            }
            let has_l = e.scalars("laction").next().is_some();
            for (i, s) in e.scalars("laction") {
                lact.set(i[2], i[0] * d + i[1], s.clone());
            }
            let module = Trimodule::new(h, b.labels.clone(), lco, rco, ract, has_l.then_some(lact)).map_err(|x| oerr(x.to_string()))?;
            Object::Trimodule { over: b.base.clone().unwrap_or_default(), module }
        }
        "crossed" => {
            let g = b.base.clone().unwrap_or_default();
            let Some(Object::Group(gd)) = ws.get(&g) else { return Err(oerr(format!("{g} is not a group"))) };
            let mut grading = vec![usize::MAX; d];
            for (i, l) in e.labels_of("grade") {
                grading[i[0]] = l;
            }
            if let Some(x) = grading.iter().position(|&g| g == usize::MAX) {
                return Err(oerr(format!("{} has no grade", b.labels[x])));
            }
            let n = gd.order();
            let mut action = vec![vec![zero_vector(f, d); d]; n];
            for (i, s) in e.scalars("action") {
                action[i[0]][i[1]][i[2]] = s.clone();
            }
            let module = CrossedGModule::new(gd.clone(), b.labels.clone(), grading, action).map_err(|x| oerr(x.to_string()))?;
            Object::Crossed { group: g, module }
        }
        "preantipode" => {
            let h = base_dqb()?;
            let n = h.dim();
            let mut s = Matrix::zeros(f, n, n);
            for (i, v) in e.scalars("entry") {
                s.set(i[0], i[1], v.clone());
            }
            Object::Preantipode { over: b.base.clone().unwrap_or_default(), s }
        }
        "map" => {
            let src = b.base.clone().unwrap_or_default();
            let dst = b.dst.clone().unwrap_or_default();
            let (ns, nd) = (ws.get(&src).map_or(0, |o| o.labels().len()), ws.get(&dst).map_or(0, |o| o.labels().len()));
            let mut m = Matrix::zeros(f, nd, ns);
            for (i, v) in e.scalars("entry") {
                m.set(i[0], i[1], v.clone());
            }
            Object::Map { src, dst, matrix: m }
        }
        k => return Err(oerr(format!("unknown kind {k}"))),
    };
    ws.objects.push((b.name.clone(), obj));
    Ok(())
}

fn line(out: &mut String, key: &str, idx: &[&str], v: impl fmt::Display) {
    out.push_str(key);
    for i in idx {
        out.push(' ');
        out.push_str(i);
    }
    out.push_str(&format!(" = {v}\n"));
}

fn header_line(out: &mut String, kind: &str, name: &str, base: Option<(&str, &str)>, labels: Option<&[String]>) {
    out.push_str(&format!("object {kind} {name}"));
    if let Some((k, b)) = base {
        out.push_str(&format!(" {k} {b}"));
    }
    if let Some(l) = labels {
        out.push_str(&format!(" dim {}", l.len()));
        if !l.is_empty() {
            out.push_str(" basis ");
            out.push_str(&l.join(" "));
        }
    }
    out.push('\n');
}

fn coalgebra_entries(out: &mut String, c: &Coalgebra) {
    let l = c.labels();
    let d = c.dim();
    let dm = c.delta_matrix();
    for i in 0..d {
        for r in 0..d * d {
            let v = dm.get(r, i);
            if !v.is_zero() {
                line(out, "delta", &[&l[i], &l[r / d], &l[r % d]], v);
            }
        }
    }
    for i in 0..d {
        if !c.eps(i).is_zero() {
            line(out, "counit", &[&l[i]], c.eps(i));
        }
    }
}

/// Canonical text: objects in declaration order, entries in index order,
/// only nonzero (or, for ω and θ, non-default) values.
pub fn serialize(ws: &Workspace) -> String {
    let mut out = format!("field {}\n", ws.field);
    for (name, obj) in &ws.objects {
        out.push('\n');
        match obj {
            Object::Group(g) => {
                let l = &g.labels;
                let d = l.len();
                header_line(&mut out, "group", name, None, Some(l));
                for a in 0..d {
                    for b in 0..d {
                        line(&mut out, "mul", &[&l[a], &l[b]], &l[g.mul[a][b]]);
                    }
                }
                for a in 0..d {
                    for b in 0..d {
                        for c in 0..d {
                            if !g.theta(a, b, c).is_one() {
                                line(&mut out, "theta", &[&l[a], &l[b], &l[c]], g.theta(a, b, c));
                            }
                        }
                    }
                }
            }
            Object::Coalgebra(c) => {
                header_line(&mut out, "coalgebra", name, None, Some(c.labels()));
                coalgebra_entries(&mut out, c);
            }
            Object::Dqb { dqb, group: Some(g) } => {
                let _ = dqb;
                header_line(&mut out, "dqb", name, Some(("group", g)), None);
            }
            Object::Dqb { dqb, group: None } => {
                let l = dqb.labels();
                let d = dqb.dim();
                header_line(&mut out, "dqb", name, None, Some(l));
                coalgebra_entries(&mut out, dqb.coalgebra());
                for i in 0..d {
                    for j in 0..d {
                        for (k, v) in dqb.mul_basis(i, j).iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                            line(&mut out, "mult", &[&l[i], &l[j], &l[k]], v);
                        }
                    }
                }
                for (i, v) in dqb.unit().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    line(&mut out, "unit", &[&l[i]], v);
                }
                let eps = dqb.coalgebra().counit();
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let def = &(&eps[i] * &eps[j]) * &eps[k];
                            if *dqb.w(i, j, k) != def {
                                line(&mut out, "omega", &[&l[i], &l[j], &l[k]], dqb.w(i, j, k));
                            }
                        }
                    }
                }
            }
            Object::Yd { over, module } => {
                header_line(&mut out, "yd", name, Some(("over", over)), Some(module.labels()));
                yd_entries(&mut out, module);
            }
            Object::Braided { over, bialgebra: r } => {
                header_line(&mut out, "braided", name, Some(("over", over)), Some(r.carrier.labels()));
                yd_entries(&mut out, &r.carrier);
                let l = r.carrier.labels();
                let d = l.len();
                for i in 0..d {
                    for j in 0..d {
                        for (k, v) in r.mul_basis(i, j).iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                            line(&mut out, "mult", &[&l[i], &l[j], &l[k]], v);
                        }
                    }
                }
                for (i, v) in r.unit.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    line(&mut out, "unit", &[&l[i]], v);
                }
                for i in 0..d {
                    for (rr, v) in r.delta_basis(i).iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        line(&mut out, "delta", &[&l[i], &l[rr / d], &l[rr % d]], v);
                    }
                }
                for (i, v) in r.counit.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    line(&mut out, "counit", &[&l[i]], v);
                }
            }
            Object::Trimodule { over, module: m } => {
                header_line(&mut out, "trimodule", name, Some(("over", over)), Some(m.labels()));
                let l = m.labels();
                let hl = m.base().labels();
                let d = l.len();
                let n = hl.len();
                for x in 0..d {
                    for r in 0..n * d {
                        let v = m.left_coaction().get(r, x);
                        if !v.is_zero() {
                            line(&mut out, "lcoaction", &[&l[x], &hl[r / d], &l[r % d]], v);
                        }
                    }
                }
                for x in 0..d {
                    for r in 0..d * n {
                        let v = m.right_coaction().get(r, x);
                        if !v.is_zero() {
                            line(&mut out, "rcoaction", &[&l[x], &l[r / n], &hl[r % n]], v);
                        }
                    }
                }
                for x in 0..d {
                    for h in 0..n {
                        for k in 0..d {
                            let v = m.right_action().get(k, x * n + h);
                            if !v.is_zero() {
                                line(&mut out, "raction", &[&l[x], &hl[h], &l[k]], v);
                            }
                        }
                    }
                }
                if let Some(la) = m.left_action() {
                    for h in 0..n {
                        for x in 0..d {
                            for k in 0..d {
                                let v = la.get(k, h * d + x);
                                if !v.is_zero() {
                                    line(&mut out, "laction", &[&hl[h], &l[x], &l[k]], v);
                                }
                            }
                        }
                    }
                }
            }
            Object::Crossed { group, module: v } => {
                header_line(&mut out, "crossed", name, Some(("group", group)), Some(&v.labels));
                let l = &v.labels;
                let gl = &v.group.labels;
                for (x, &g) in v.grading.iter().enumerate() {
                    line(&mut out, "grade", &[&l[x]], &gl[g]);
                }
                for (h, row) in v.action.iter().enumerate() {
                    for (x, img) in row.iter().enumerate() {
                        for (k, c) in img.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            line(&mut out, "action", &[&gl[h], &l[x], &l[k]], c);
                        }
                    }
                }
            }
            Object::Preantipode { over, s } => {
                header_line(&mut out, "preantipode", name, Some(("over", over)), None);
                let hl = ws.get(over).map(|o| o.labels()).unwrap_or_default();
                matrix_entries(&mut out, s, &hl, &hl);
            }
            Object::Map { src, dst, matrix } => {
                out.push_str(&format!("map {name} {src} {dst}\n"));
                let sl = ws.get(src).map(|o| o.labels()).unwrap_or_default();
                let dl = ws.get(dst).map(|o| o.labels()).unwrap_or_default();
                matrix_entries(&mut out, matrix, &dl, &sl);
            }
        }
    }
    out
}

fn matrix_entries(out: &mut String, m: &Matrix, rows: &[String], cols: &[String]) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !v.is_zero() {
                line(out, "entry", &[&rows[i], &cols[j]], v);
            }
        }
    }
}

fn yd_entries(out: &mut String, m: &YDModule) {
    let l = m.labels();
    let hl = m.base().labels();
    let d = l.len();
    let co = m.comodule();
    for x in 0..d {
        let mut terms: Vec<_> = co.terms(x).to_vec();
        terms.sort_by_key(|t| (t.0, t.1));
        for (h, w, c) in terms {
            if !c.is_zero() {
                line(out, "coaction", &[&l[x], &hl[h], &l[w]], c);
            }
        }
    }
    for h in 0..hl.len() {
        for x in 0..d {
            for (k, c) in m.act_basis(h, x).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                line(out, "action", &[&hl[h], &l[x], &l[k]], c);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HEAD: &str = "field Q\nobject dqb H dim 2 basis 1 g\ndelta 1 1 1 = 1\ndelta g g g = 1\ncounit 1 = 1\ncounit g = 1\nmult 1 1 1 = 1\nmult 1 g g = 1\nmult g 1 g = 1\nmult g g 1 = 1\nunit 1 = 1\n";

    #[test]
    fn unlisted_omega_is_counital() {
        let ws = parse(HEAD).unwrap();
        let h = ws.dqb("H").unwrap();
        assert!(h.w(1, 1, 1).is_one());
        let ws = parse(&format!("{HEAD}omega g g g = -1\n")).unwrap();
        assert_eq!(*ws.dqb("H").unwrap().w(1, 1, 1), Field::Rationals.int(-1));
    }

    #[test]
    fn labels_take_precedence_over_positions() {
        // label "1" is position 0; position 1 is g
        let a = parse(&format!("{HEAD}object coalgebra C dim 2 basis 1 g\ndelta 1 1 1 = 1\ncounit 1 = 1\n")).unwrap();
        let Some(Object::Coalgebra(c)) = a.get("C") else { panic!() };
        assert!(c.eps(0).is_one() && c.eps(1).is_zero());
        let b = parse("field Q\nobject coalgebra C dim 2 basis u v\ndelta 1 1 1 = 1\ncounit 1 = 1\n").unwrap();
        let Some(Object::Coalgebra(c)) = b.get("C") else { panic!() };
        assert!(c.eps(1).is_one() && c.eps(0).is_zero());
    }

    #[test]
    fn comments_and_fractions() {
        let ws = parse("field F7 # seven\nobject coalgebra C dim 1 basis c\ndelta c c c = 1 # grouplike\ncounit c = 8/1\n").unwrap();
        let Some(Object::Coalgebra(c)) = ws.get("C") else { panic!() };
        assert!(c.eps(0).is_one());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("object dqb H dim 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        let e = parse("field Q\nobject dqb H dim 1 basis a\ndelta a a a = 1\ndelta a a a = 2\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.msg.contains("duplicate"));
        let e = parse("field Q\nobject yd V over K dim 1 basis v\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 18));
        let e = parse("field Q\nobject dqb H dim 1 basis a\nmult a a = 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 10));
        let e = parse("field Q\nobject dqb H dim 1 basis a\ndelta a a a = 1/0\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 15));
    }

    #[test]
    fn non_invertible_omega_names_the_object() {
        let e = parse("field Q\nobject dqb Bad dim 1 basis a\ndelta a a a = 1\ncounit a = 1\nmult a a a = 1\nunit a = 1\nomega a a a = 0\n").unwrap_err();
        assert!(e.msg.starts_with("object Bad:"), "{e}");
    }

    #[test]
    fn invalid_group_is_rejected() {
        let e = parse("field Q\nobject group G dim 2 basis 1 g\nmul 1 1 = 1\nmul 1 g = g\nmul g 1 = g\n").unwrap_err();
        assert!(e.msg.contains("incomplete"));
    }

    proptest! {
        #[test]
        fn maps_round_trip(entries in proptest::collection::vec((0usize..2, 0usize..2, -5i64..5, 1i64..4), 0..6)) {
            let mut ws = parse(HEAD).unwrap();
            let f = ws.field;
            let mut m = Matrix::zeros(f, 2, 2);
            for (i, j, a, b) in entries {
                m.set(i, j, f.frac(a, b).unwrap());
            }
            ws.insert("phi", Object::Map { src: "H".into(), dst: "H".into(), matrix: m.clone() });
            let text = serialize(&ws);
            let back = parse(&text).unwrap();
            prop_assert_eq!(serialize(&back), text);
            let Some(Object::Map { matrix, .. }) = back.get("phi") else { panic!() };
            prop_assert_eq!(matrix, &m);
        }
    }
}
