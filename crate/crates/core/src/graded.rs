//! The associated graded gr A of a pointed dual quasi-bialgebra, its
//! projection onto the coradical, and cocycle-crossed G-modules as a
//! concrete model of YD modules over k^θG.

use std::sync::Arc;

use rand::Rng;

use crate::bosonization::ProjectionData;
use crate::coalgebra::{find_basis_grouplike_indices, graded_coalgebra, verify_grouplike, wedge_filtration, Filtration, Functional};
use crate::dqb::{sub_dqb, DualQuasiBialgebra, GroupCocycleData};
use crate::error::{Error, Result};
use crate::hopfmod::basis_labels;
use crate::linalg::{unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::report::Report;
use crate::scalar::{Field, Scalar};
use crate::yd::{Comodule, YDModule};

/// gr A in the basis of filtration representatives.
#[derive(Clone, Debug)]
pub struct GradedDqb {
    pub dqb: DualQuasiBialgebra,
    pub degrees: Vec<usize>,
    /// columns: representatives in the basis of A
    pub reps: Matrix,
    pub reps_inv: Matrix,
    /// layer 0 is spanned by basis grouplikes and its wedge filtration is the given one
    pub certified: bool,
}

impl GradedDqb {
    pub fn status(&self) -> &'static str {
        if self.certified {
            "certified coradical"
        } else {
            "declared, not certified"
        }
    }
}

/// The wedge filtration generated by basis grouplikes (all of them, or the given indices).
pub fn pointed_filtration(a: &DualQuasiBialgebra, grouplikes: Option<&[usize]>) -> Result<Filtration> {
    let c = a.coalgebra();
    let f = a.field();
    let n = a.dim();
    let idx: Vec<usize> = match grouplikes {
        Some(g) => {
            if let Some(&bad) = g.iter().find(|&&i| i >= n || !verify_grouplike(c, &unit_vector(f, n, i))) {
                let name = a.labels().get(bad).cloned().unwrap_or_else(|| bad.to_string());
                return Err(Error::Precondition(format!("{name} is not grouplike")));
            }
            g.to_vec()
        }
        None => find_basis_grouplike_indices(c),
    };
    let d = Subspace::span(f, n, &idx.iter().map(|&i| unit_vector(f, n, i)).collect::<Vec<_>>());
    let names: Vec<&str> = idx.iter().map(|&i| a.labels()[i].as_str()).collect();
    wedge_filtration(c, &d)?.ok_or_else(|| Error::Precondition(format!("wedge filtration of span{{{}}} does not exhaust A", names.join(","))))
}

fn layer_of(f: &Filtration, deg: usize) -> &Subspace {
    &f.layers[deg.min(f.layers.len() - 1)]
}

pub fn gr_dqb(a: &DualQuasiBialgebra, filt: &Filtration) -> Result<GradedDqb> {
    let gc = graded_coalgebra(a.coalgebra(), filt)?;
    let a0 = &filt.layers[0];
    if !a0.contains(a.unit()) {
        return Err(Error::Precondition("1 is not in A₀".into()));
    }
    sub_dqb(a, a0.basis(), None).map_err(|e| Error::Precondition(format!("A₀ is not a dual quasi-subbialgebra: {e}")))?;
    for (da, la) in filt.layers.iter().enumerate() {
        for (db, lb) in filt.layers.iter().enumerate() {
            let target = layer_of(filt, da + db);
            for x in la.basis() {
                for y in lb.basis() {
                    if !target.contains(&a.mul(x, y)) {
                        return Err(Error::Precondition(format!("A_{da}·A_{db} ⊄ A_{}: {}·{}", da + db, a.label(x), a.label(y))));
                    }
                }
            }
        }
    }
    let n = a.dim();
    let f = a.field();
    let deg = &gc.degrees;
    let reps: Vec<Vector> = (0..n).map(|i| gc.reps.col(i)).collect();
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = gc.reps_inv.apply(&a.mul(&reps[i], &reps[j]));
                    c.into_iter().enumerate().map(|(k, x)| if deg[k] == deg[i] + deg[j] { x } else { f.zero() }).collect()
                })
                .collect()
        })
        .collect();
    let unit = gc.reps_inv.apply(a.unit());
    let omega = Functional::from_fn(n, 3, |ix| {
        if ix.iter().all(|&i| deg[i] == 0) {
            a.omega_of(&reps[ix[0]], &reps[ix[1]], &reps[ix[2]])
        } else {
            f.zero()
        }
    });
    let dqb = DualQuasiBialgebra::new(gc.coalgebra.clone(), mult, unit, omega)?;
    let gl = Subspace::span(f, n, &find_basis_grouplike_indices(a.coalgebra()).into_iter().map(|i| unit_vector(f, n, i)).collect::<Vec<_>>());
    let certified = a0.contains_space(&gl) && gl.contains_space(a0) && wedge_filtration(a.coalgebra(), a0)?.as_ref() == Some(filt);
    Ok(GradedDqb { dqb, degrees: gc.degrees, reps: gc.reps, reps_inv: gc.reps_inv, certified })
}

/// gr A with σ: A₀ → gr A the inclusion and π: gr A → A₀ the degree-0 projection.
pub fn gr_projection(a: &DualQuasiBialgebra, filt: &Filtration) -> Result<(GradedDqb, ProjectionData)> {
    let gr = gr_dqb(a, filt)?;
    let f = a.field();
    let n = a.dim();
    let zero: Vec<usize> = (0..n).filter(|&i| gr.degrees[i] == 0).collect();
    let k = zero.len();
    let basis: Vec<Vector> = zero.iter().map(|&i| unit_vector(f, n, i)).collect();
    let labels = zero.iter().map(|&i| gr.dqb.labels()[i].clone()).collect();
    let h = sub_dqb(&gr.dqb, &basis, Some(labels))?;
    let sigma = Matrix::from_columns(f, n, &basis);
    let pi = Matrix::from_fn(f, k, n, |r, c| if zero[r] == c { f.one() } else { f.zero() });
    let p = ProjectionData::new(Arc::new(gr.dqb.clone()), Arc::new(h), sigma, pi)?;
    Ok((gr, p))
}

/// The basis grouplikes of A form a group under the multiplication.
pub fn grouplikes_form_group(a: &DualQuasiBialgebra) -> Report {
    let mut rep = Report::new("grouplikes");
    let f = a.field();
    let n = a.dim();
    let g = find_basis_grouplike_indices(a.coalgebra());
    let as_basis = |v: &Vector| g.iter().copied().find(|&k| *v == unit_vector(f, n, k));
    let mut closed = None;
    'c: for &x in &g {
        for &y in &g {
            if as_basis(a.mul_basis(x, y)).is_none() {
                closed = Some(format!("{}·{} = {}", a.labels()[x], a.labels()[y], a.label(a.mul_basis(x, y))));
                break 'c;
            }
        }
    }
    rep.record("closed under multiplication", closed);
    let one = as_basis(a.unit());
    rep.record("contains 1", one.is_none().then(|| "1 is not a basis grouplike".into()));
    let inv = one.and_then(|e| {
        g.iter()
            .find(|&&x| !g.iter().any(|&y| as_basis(a.mul_basis(x, y)) == Some(e) && as_basis(a.mul_basis(y, x)) == Some(e)))
            .map(|&x| format!("{} has no inverse", a.labels()[x]))
    });
    rep.record("inverses", inv);
    rep
}

/// V = ⊕ V_g with basis-homogeneous grading and h▸ given on basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedGModule {
    pub group: GroupCocycleData,
    pub labels: Vec<String>,
    pub grading: Vec<usize>,
    /// action[h][v] = h▸v
    pub action: Vec<Vec<Vector>>,
}

impl CrossedGModule {
    pub fn new(group: GroupCocycleData, labels: Vec<String>, grading: Vec<usize>, action: Vec<Vec<Vector>>) -> Result<CrossedGModule> {
        let d = labels.len();
        let n = group.order();
        let ok = grading.len() == d
            && grading.iter().all(|&g| g < n)
            && action.len() == n
            && action.iter().all(|row| row.len() == d && row.iter().all(|v| v.len() == d));
        if !ok {
            return Err(Error::Shape(format!("crossed module data does not fit dim {d} over a group of order {n}")));
        }
        Ok(CrossedGModule { group, labels, grading, action })
    }

    /// k concentrated in degree 1 with trivial action.
    pub fn unit(group: GroupCocycleData) -> Result<CrossedGModule> {
        let f = group.field();
        let e = group.identity().ok_or_else(|| Error::Precondition("monoid has no identity".into()))?;
        let n = group.order();
        CrossedGModule::new(group, vec!["1".into()], vec![e], vec![vec![vec![f.one()]]; n])
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Field {
        self.group.field()
    }

    pub fn act(&self, h: usize, x: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field(), self.dim());
        for (v, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, a) in out.iter_mut().zip(&self.action[h][v]) {
                *o += &(c * a);
            }
        }
        out
    }
}

fn conj(g: &GroupCocycleData, h: usize, x: usize) -> Result<usize> {
    let hi = g.inverse(h).ok_or_else(|| Error::Precondition("not a group".into()))?;
    Ok(g.mul[g.mul[h][x]][hi])
}

/// θ(hlgl⁻¹h⁻¹,h,l)θ(h,l,g)/θ(h,lgl⁻¹,l).
pub fn crossed_ratio(gr: &GroupCocycleData, h: usize, l: usize, g: usize) -> Result<Scalar> {
    let lg = conj(gr, l, g)?;
    let hlg = conj(gr, h, lg)?;
    let num = gr.theta(hlg, h, l) * gr.theta(h, l, g);
    let den = gr.theta(h, lg, l).inv().ok_or_else(|| Error::Invalid("θ has a zero value".into()))?;
    Ok(&num * &den)
}

pub fn crossed_check(v: &CrossedGModule) -> Report {
    let mut rep = Report::new("crossed module");
    let gr = &v.group;
    if !gr.is_group() {
        let bad = (0..gr.order()).find(|&a| gr.inverse(a).is_none()).unwrap_or(0);
        rep.fail("group", format!("{} has no inverse", gr.labels[bad]));
        return rep;
    }
    let f = v.field();
    let d = v.dim();
    let n = gr.order();
    let lab = |x: &Vector| crate::coalgebra::format_combination(x, |i| v.labels[i].clone());
    let mut comp = None;
    'c: for h in 0..n {
        for x in 0..d {
            let want = conj(gr, h, v.grading[x]).expect("group");
            let img = &v.action[h][x];
            if let Some(y) = (0..d).find(|&y| !img[y].is_zero() && v.grading[y] != want) {
                comp = Some(format!("at ({},{}): {}▸{} has a component {} of degree {}", gr.labels[h], v.labels[x], gr.labels[h], v.labels[x], v.labels[y], gr.labels[v.grading[y]]));
                break 'c;
            }
        }
    }
    rep.record("h▸V_g ⊆ V_{hgh⁻¹}", comp);
    let mut ass = None;
    'a: for h in 0..n {
        for l in 0..n {
            for x in 0..d {
                let lhs = v.act(h, &v.action[l][x]);
                let r = crossed_ratio(gr, h, l, v.grading[x]).expect("group");
                let rhs: Vector = v.action[gr.mul[h][l]][x].iter().map(|c| c * &r).collect();
                if lhs != rhs {
                    ass = Some(format!("at ({},{},{}): h▸(l▸v) = {} but ratio·(hl)▸v = {}", gr.labels[h], gr.labels[l], v.labels[x], lab(&lhs), lab(&rhs)));
                    break 'a;
                }
            }
        }
    }
    rep.record("twisted associativity", ass);
    let e = gr.identity().expect("group");
    let unit = (0..d).find(|&x| v.action[e][x] != unit_vector(f, d, x));
    rep.record("1▸v = v", unit.map(|x| format!("at {}", v.labels[x])));
    rep
}

fn require_group_base(over: &DualQuasiBialgebra, g: &GroupCocycleData) -> Result<()> {
    match over.group() {
        Some(b) if b == g => Ok(()),
        Some(_) => Err(Error::BaseMismatch),
        None => Err(Error::Precondition("base is not given by a group and a 3-cocycle".into())),
    }
}

/// ρ(v) = g⊗v on V_g and h⊳v = h▸v.
pub fn crossed_to_yd(v: &CrossedGModule, over: Arc<DualQuasiBialgebra>) -> Result<YDModule> {
    require_group_base(&over, &v.group)?;
    let f = v.field();
    let co = Comodule::new(over, v.labels.clone(), v.grading.iter().enumerate().map(|(x, &g)| vec![(g, x, f.one())]).collect())?;
    YDModule::new(co, v.action.clone())
}

/// The inverse of `crossed_to_yd`; each basis vector must be homogeneous.
pub fn yd_to_crossed(w: &YDModule) -> Result<CrossedGModule> {
    let gr = w.base().group().ok_or_else(|| Error::Precondition("base is not given by a group and a 3-cocycle".into()))?.clone();
    let co = w.comodule();
    let grading = (0..w.dim())
        .map(|x| match co.terms(x) {
            [(g, y, c)] if *y == x && c.is_one() => Ok(*g),
            _ => Err(Error::Invalid(format!("coaction of {} is not homogeneous: {}", w.labels()[x], co.label_hv(&unit_vector(w.field(), w.dim(), x))))),
        })
        .collect::<Result<Vec<_>>>()?;
    let n = gr.order();
    let action = (0..n).map(|h| (0..w.dim()).map(|x| w.act_basis(h, x).clone()).collect()).collect();
    CrossedGModule::new(gr, w.labels().to_vec(), grading, action)
}

/// (V⊗W)_g = ⊕ V_h⊗W_{h⁻¹g}, h▸(v⊗w) = θ(hgh⁻¹,hlh⁻¹,h)θ(h,g,l)/θ(hgh⁻¹,h,l)·(h▸v)⊗(h▸w).
pub fn crossed_tensor(v: &CrossedGModule, w: &CrossedGModule) -> Result<CrossedGModule> {
    if v.group != w.group {
        return Err(Error::BaseMismatch);
    }
    let gr = &v.group;
    let f = v.field();
    let (dv, dw) = (v.dim(), w.dim());
    let n = gr.order();
    let mut grading = Vec::with_capacity(dv * dw);
    for a in 0..dv {
        for b in 0..dw {
            grading.push(gr.mul[v.grading[a]][w.grading[b]]);
        }
    }
    let mut action = vec![Vec::with_capacity(dv * dw); n];
    for (h, row) in action.iter_mut().enumerate() {
        for a in 0..dv {
            for b in 0..dw {
                let (g, l) = (v.grading[a], w.grading[b]);
                let (hg, hl) = (conj(gr, h, g)?, conj(gr, h, l)?);
                let den = gr.theta(hg, h, l).inv().ok_or_else(|| Error::Invalid("θ has a zero value".into()))?;
                let c = &(gr.theta(hg, hl, h) * gr.theta(h, g, l)) * &den;
                let mut out = zero_vector(f, dv * dw);
                crate::hopfmod::add_outer(&mut out, &c, &v.action[h][a], &w.action[h][b]);
                row.push(out);
            }
        }
    }
    CrossedGModule::new(gr.clone(), basis_labels(&v.labels, &w.labels), grading, action)
}

/// c(v⊗w) = (g▸w)⊗v for v ∈ V_g, as a (dim W·dim V) × (dim V·dim W) matrix.
pub fn crossed_braiding(v: &CrossedGModule, w: &CrossedGModule) -> Matrix {
    let f = v.field();
    let (dv, dw) = (v.dim(), w.dim());
    let mut m = Matrix::zeros(f, dw * dv, dv * dw);
    for a in 0..dv {
        for b in 0..dw {
            let gw = &w.action[v.grading[a]][b];
            for (y, c) in gw.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                m.set(y * dv + a, a * dw + b, c.clone());
            }
        }
    }
    m
}

/// A generator of a cyclic group and its powers t⁰, t¹, …
fn cyclic_powers(gr: &GroupCocycleData) -> Option<Vec<usize>> {
    let e = gr.identity()?;
    let n = gr.order();
    (0..n).find_map(|t| {
        let mut p = vec![e];
        for _ in 1..n {
            let next = gr.mul[t][*p.last().expect("nonempty")];
            if next == e {
                return None;
            }
            p.push(next);
        }
        (gr.mul[t][p[n - 1]] == e).then_some(p)
    })
}

fn mth_roots(f: Field, m: usize, c: &Scalar) -> Vec<Scalar> {
    let candidates: Vec<Scalar> = match f.characteristic() {
        0 => vec![f.one(), -f.one()],
        p => (1..p as i64).map(|k| f.int(k)).collect(),
    };
    candidates.into_iter().filter(|x| x.pow(m as u64) == *c).collect()
}

fn random_invertible(rng: &mut impl Rng, f: Field, d: usize) -> (Matrix, Matrix) {
    loop {
        let p = Matrix::from_fn(f, d, d, |_, _| f.int(rng.gen_range(-2..=2)));
        if let Some(q) = p.inverse() {
            return (p, q);
        }
    }
}

/// A random crossed module over a cyclic group: one or two homogeneous
/// components, the generator acting by a random conjugate of a diagonal or
/// companion solution of t^m = (product of ratios)·Id, extended to all powers
/// through twisted associativity.
pub fn random_crossed_module(rng: &mut impl Rng, group: &GroupCocycleData) -> Result<CrossedGModule> {
    let pw = cyclic_powers(group).ok_or_else(|| Error::Precondition("group is not cyclic".into()))?;
    let m = pw.len();
    let f = group.field();
    let t = pw[1.min(m - 1)];
    let comps = rng.gen_range(1..=2);
    let mut blocks: Vec<(usize, Matrix)> = Vec::new();
    for _ in 0..comps {
        let g = pw[rng.gen_range(0..m)];
        // t^m▸v = Π ratio(t,t^k,g)⁻¹ · T^m v must be v
        let mut c = f.one();
        for &tk in pw.iter().take(m).skip(1) {
            c = &c * &crossed_ratio(group, t, tk, g)?;
        }
        let roots = mth_roots(f, m, &c);
        let base = if roots.is_empty() {
            Matrix::from_fn(f, m, m, |r, col| {
                if col + 1 < m {
                    if r == col + 1 { f.one() } else { f.zero() }
                } else if r == 0 {
                    c.clone()
                } else {
                    f.zero()
                }
            })
        } else {
            let s = rng.gen_range(1..=2);
            Matrix::from_fn(f, s, s, |r, col| if r == col { roots[rng.gen_range(0..roots.len())].clone() } else { f.zero() })
        };
        let (p, q) = random_invertible(rng, f, base.rows());
        blocks.push((g, p.mul(&base).mul(&q)));
    }
    let d: usize = blocks.iter().map(|(_, b)| b.rows()).sum();
    let mut grading = Vec::with_capacity(d);
    let mut tmat = Matrix::zeros(f, d, d);
    let mut off = 0;
    for (g, b) in &blocks {
        for i in 0..b.rows() {
            grading.push(*g);
            for j in 0..b.rows() {
                tmat.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    // act[k] is the matrix of t^k▸
    let mut act = vec![Matrix::identity(f, d)];
    for k in 1..m {
        let prev = act.last().expect("nonempty");
        let next = tmat.mul(prev);
        let cols = (0..d)
            .map(|x| {
                let r = crossed_ratio(group, t, pw[k - 1], grading[x])?.inv().expect("θ invertible");
                Ok(next.col(x).iter().map(|c| c * &r).collect())
            })
            .collect::<Result<Vec<Vector>>>()?;
        act.push(Matrix::from_columns(f, d, &cols));
    }
    let mut action = vec![Vec::new(); m];
    for (k, &h) in pw.iter().enumerate() {
        action[h] = (0..d).map(|x| act[k].col(x)).collect();
    }
    let labels = (0..d).map(|i| format!("v{i}")).collect();
    CrossedGModule::new(group.clone(), labels, grading, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bosonization::{braided_iso_defect, check_split, split};
    use crate::dqb::{check_dqb, check_dqb_morphism, from_group_cocycle};
    use crate::fixtures;
    use crate::preantipode::solve_preantipode;
    use crate::report::Status;
    use crate::yd::{check_yd, yd_braiding, yd_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gr_of(a: &DualQuasiBialgebra) -> GradedDqb {
        gr_dqb(a, &pointed_filtration(a, None).unwrap()).unwrap()
    }

    #[test]
    fn cosemisimple_gr_is_itself() {
        let a = fixtures::fix1();
        let g = gr_of(&a);
        assert!(g.certified);
        assert!(g.reps.is_identity());
        assert!(check_dqb_morphism(&g.reps, &g.dqb, &a).passed());
    }

    #[test]
    fn coradically_graded_fixtures() {
        for a in [fixtures::fix3(), fixtures::fix4()] {
            let g = gr_of(&a);
            assert!(g.certified, "{}", g.status());
            assert!(check_dqb(&g.dqb).passed());
            // explicit iso from the grading
            let rep = check_dqb_morphism(&g.reps, &g.dqb, &a);
            assert!(rep.passed(), "{rep}");
            let n = a.dim();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if g.degrees[i] + g.degrees[j] + g.degrees[k] > 0 {
                            assert!(g.dqb.w(i, j, k).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fix4_reassociator_lives_on_grouplikes() {
        let a = fixtures::fix4();
        let g = gr_of(&a);
        assert_eq!(g.degrees.iter().filter(|&&d| d == 0).count(), 4);
        assert!(g.dqb.omega().values().iter().any(|w| (-w).is_one()));
    }

    #[test]
    fn undeclared_grouplike_is_rejected() {
        let a = fixtures::fix3();
        assert!(matches!(pointed_filtration(&a, Some(&[2])), Err(Error::Precondition(_))));
        // span{1} is a subcoalgebra whose wedge filtration stalls
        assert!(matches!(pointed_filtration(&a, Some(&[0])), Err(Error::Precondition(_))));
    }

    #[test]
    fn gr_split_recovers_sweedler_diagram() {
        let a = fixtures::fix3();
        let (_, p) = gr_projection(&a, &pointed_filtration(&a, None).unwrap()).unwrap();
        assert!(p.check().passed());
        let s = solve_preantipode(&p.h).unwrap().s;
        let rep = check_split(&p, &s);
        assert!(rep.passed(), "{rep}");
        let sp = split(&p, &s).unwrap();
        let r0 = fixtures::r_sweedler(p.h.clone());
        assert_eq!(sp.r.dim(), 2);
        assert_eq!(braided_iso_defect(&Matrix::identity(a.field(), 2), &r0, &sp.r), None);
    }

    #[test]
    fn gr_split_on_fix4() {
        let a = fixtures::fix4();
        let (_, p) = gr_projection(&a, &pointed_filtration(&a, None).unwrap()).unwrap();
        let s = solve_preantipode(&p.h).unwrap().s;
        let rep = check_split(&p, &s);
        assert!(rep.passed(), "{rep}");
        assert_eq!(split(&p, &s).unwrap().r.dim(), 2);
    }

    #[test]
    fn grouplikes_of_fixtures() {
        assert!(grouplikes_form_group(&fixtures::fix3()).passed());
        assert!(grouplikes_form_group(&fixtures::fix4()).passed());
        let rep = grouplikes_form_group(&fixtures::fix5());
        assert_eq!(rep.status_of("inverses"), Some(&Status::Fail));
    }

    fn one_dim(gr: GroupCocycleData, grade: usize, g_acts: i64) -> CrossedGModule {
        let f = gr.field();
        CrossedGModule::new(gr, vec!["x".into()], vec![grade], vec![vec![vec![f.one()]], vec![vec![f.int(g_acts)]]]).unwrap()
    }

    #[test]
    fn crossed_examples() {
        let sign = fixtures::z2_sign();
        assert!(crossed_check(&CrossedGModule::unit(sign.clone()).unwrap()).passed());
        // at grade g the ratio at (g,g,x) is θ(g,g,g) = −1, so g▸g▸x must be −x
        for c in [-1, 2] {
            let rep = crossed_check(&one_dim(sign.clone(), 1, c));
            assert_eq!(rep.status_of("twisted associativity"), Some(&Status::Fail));
            assert!(rep.witness_of("twisted associativity").unwrap().starts_with("at (g,g,x)"));
        }
        let over = Arc::new(fixtures::fix2());
        let blk = yd_to_crossed(&fixtures::z2_block(over.clone())).unwrap();
        assert!(crossed_check(&blk).passed());
        let back = crossed_to_yd(&blk, over).unwrap();
        assert_eq!(back, fixtures::z2_block(back.over().clone()));
        assert_eq!(yd_to_crossed(&back).unwrap(), blk);
    }

    #[test]
    fn crossed_tensor_and_braiding_over_trivial_cocycle() {
        let v = one_dim(fixtures::z2_trivial(), 1, -1);
        assert!(crossed_check(&v).passed());
        let vv = crossed_tensor(&v, &v).unwrap();
        assert_eq!(vv.grading, vec![0]);
        let c = crossed_braiding(&v, &v);
        assert_eq!(c.get(0, 0), &(-v.field().one()));
    }

    #[test]
    fn non_homogeneous_coaction_is_rejected() {
        let over = Arc::new(fixtures::fix1());
        let f = over.field();
        let co = Comodule::new(over.clone(), vec!["x".into()], vec![vec![(0, 0, f.frac(1, 2).unwrap()), (1, 0, f.frac(1, 2).unwrap())]]).unwrap();
        let w = YDModule::new(co, vec![vec![vec![f.one()]], vec![vec![f.one()]]]).unwrap();
        match yd_to_crossed(&w) {
            Err(Error::Invalid(m)) => assert!(m.contains("coaction of x"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_family_matches_yd_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for data in [fixtures::z2_sign(), fixtures::z4_f5()] {
            let over = Arc::new(from_group_cocycle(&data).unwrap());
            let mods: Vec<CrossedGModule> = (0..12).map(|_| random_crossed_module(&mut rng, &data).unwrap()).collect();
            for v in &mods {
                let rep = crossed_check(v);
                assert!(rep.passed(), "{rep}");
                let y = crossed_to_yd(v, over.clone()).unwrap();
                assert!(check_yd(&y).passed());
                assert_eq!(&yd_to_crossed(&y).unwrap(), v);
            }
            for pair in mods.windows(2).take(4) {
                let (v, w) = (&pair[0], &pair[1]);
                let (yv, yw) = (crossed_to_yd(v, over.clone()).unwrap(), crossed_to_yd(w, over.clone()).unwrap());
                let t = yd_to_crossed(&yd_tensor(&yv, &yw).unwrap()).unwrap();
                let ct = crossed_tensor(v, w).unwrap();
                assert_eq!((&t.grading, &t.action), (&ct.grading, &ct.action));
                assert_eq!(yd_braiding(&yv, &yw).unwrap(), crossed_braiding(v, w));
            }
        }
    }
}
