//! The bosonization R#H of a bialgebra R in the YD category over H, its
//! canonical projection, and the converse splitting of a dual quasi-bialgebra
//! with a projection onto a preantipode-bearing H.
//!
//! Carrier convention: basis r⊗h has index r·n + h with n = dim H.

use std::sync::Arc;

use crate::coalgebra::{Coalgebra, Functional};
use crate::dqb::{check_dqb, check_dqb_morphism, DualQuasiBialgebra};
use crate::error::{Error, Result};
use crate::hopfmod::{add_outer, basis_labels, phi2, psi2, solve_columns, Iso, Trimodule};
use crate::linalg::{unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::preantipode::check_preantipode;
use crate::report::Report;
use crate::yd::{check_braided_bialgebra, same_base, BraidedBialgebra, Comodule, YDModule};

/// A with morphisms σ: H → A and π: A → H, π∘σ = Id_H expected.
#[derive(Clone, Debug)]
pub struct ProjectionData {
    pub a: Arc<DualQuasiBialgebra>,
    pub h: Arc<DualQuasiBialgebra>,
    /// dim A × dim H
    pub sigma: Matrix,
    /// dim H × dim A
    pub pi: Matrix,
}

impl ProjectionData {
    pub fn new(a: Arc<DualQuasiBialgebra>, h: Arc<DualQuasiBialgebra>, sigma: Matrix, pi: Matrix) -> Result<ProjectionData> {
        let (na, nh) = (a.dim(), h.dim());
        if (sigma.rows(), sigma.cols()) != (na, nh) || (pi.rows(), pi.cols()) != (nh, na) {
            return Err(Error::Shape(format!("σ must be {na}x{nh} and π {nh}x{na}")));
        }
        if a.field() != h.field() {
            return Err(Error::Field("A and H live over different fields".into()));
        }
        Ok(ProjectionData { a, h, sigma, pi })
    }

    /// A = H with σ = π = Id.
    pub fn identity(h: Arc<DualQuasiBialgebra>) -> ProjectionData {
        let id = Matrix::identity(h.field(), h.dim());
        ProjectionData { a: h.clone(), h, sigma: id.clone(), pi: id }
    }

    pub fn check(&self) -> Report {
        let mut rep = Report::new("projection");
        let ps = self.pi.mul(&self.sigma);
        rep.record("π∘σ = Id_H", (!ps.is_identity()).then(|| match ps.first_difference(&Matrix::identity(ps.field(), ps.rows())) {
            Some((r, c)) => format!("at {}: coefficient of {} is {}", self.h.labels()[c], self.h.labels()[r], ps.get(r, c)),
            None => "not the identity".into(),
        }));
        rep.absorb("σ: ", check_dqb_morphism(&self.sigma, &self.h, &self.a));
        rep.absorb("π: ", check_dqb_morphism(&self.pi, &self.a, &self.h));
        rep
    }

    /// A in the category of trimodules over H: ρˡ = π(a₁)⊗a₂, ρʳ = a₁⊗π(a₂),
    /// a·h = aσ(h), h·a = σ(h)a.
    pub fn trimodule(&self) -> Trimodule {
        let (a, h) = (&*self.a, &*self.h);
        let f = a.field();
        let (na, nh) = (a.dim(), h.dim());
        let mut lco = Matrix::zeros(f, nh * na, na);
        let mut rco = Matrix::zeros(f, na * nh, na);
        for i in 0..na {
            for (p, q, c) in a.coalgebra().delta(i) {
                let (pp, pq) = (self.pi.col(*p), self.pi.col(*q));
                for x in 0..nh {
                    if !pp[x].is_zero() {
                        lco.add_to(x * na + q, i, &(c * &pp[x]));
                    }
                    if !pq[x].is_zero() {
                        rco.add_to(p * nh + x, i, &(c * &pq[x]));
                    }
                }
            }
        }
        let ract = Matrix::from_fn(f, na, na * nh, |r, c| a.mul(&unit_vector(f, na, c / nh), &self.sigma.col(c % nh))[r].clone());
        let lact = Matrix::from_fn(f, na, nh * na, |r, c| a.mul(&self.sigma.col(c / na), &unit_vector(f, na, c % na))[r].clone());
        Trimodule::new(self.h.clone(), a.labels().to_vec(), lco, rco, ract, Some(lact)).expect("shapes")
    }
}

/// R#H together with its canonical projection and the data it was built from.
#[derive(Clone, Debug)]
pub struct Bosonization {
    pub b: Arc<DualQuasiBialgebra>,
    pub h: Arc<DualQuasiBialgebra>,
    pub r: BraidedBialgebra,
    pub sigma: Matrix,
    pub pi: Matrix,
}

impl Bosonization {
    pub fn projection(&self) -> ProjectionData {
        ProjectionData { a: self.b.clone(), h: self.h.clone(), sigma: self.sigma.clone(), pi: self.pi.clone() }
    }
}

fn require_valid(h: &Arc<DualQuasiBialgebra>, r: &BraidedBialgebra) -> Result<()> {
    if !same_base(h, r.carrier.over()) {
        return Err(Error::BaseMismatch);
    }
    let rep = check_braided_bialgebra(r);
    if let Some(bad) = rep.first_failure() {
        return Err(Error::Invalid(format!("R is not a bialgebra in the YD category: {} {}", bad.name, bad.witness.clone().unwrap_or_default())));
    }
    Ok(())
}

/// m_B[(r⊗h)⊗(s⊗k)] from its element formula, as a (dn) × (dn)² matrix.
pub fn bosonization_product(h: &DualQuasiBialgebra, r: &BraidedBialgebra) -> Matrix {
    let f = h.field();
    let n = h.dim();
    let d = r.dim();
    let dn = d * n;
    let co = r.carrier.comodule();
    let l6 = h.coalgebra().legs(6);
    let l5 = h.coalgebra().legs(5);
    let mut out = Matrix::zeros(f, dn, dn * dn);
    for a in 0..d {
        let r2 = co.coact_iter(&unit_vector(f, d, a), 2);
        for b in 0..d {
            let s2 = co.coact_iter(&unit_vector(f, d, b), 2);
            for hh in 0..n {
                for k in 0..n {
                    let col = (a * n + hh) * dn + b * n + k;
                    let mut acc = zero_vector(f, dn);
                    for (rs, r0) in &r2 {
                        for (hs, ch) in &l6[hh] {
                            for (ss, s0) in &s2 {
                                for (ks, ck) in &l5[k] {
                                    let c = &(ch * ck) * &h.winv_vec3(rs[0], hs[0], h.mul_basis(ss[0], ks[0]));
                                    if c.is_zero() {
                                        continue;
                                    }
                                    let c = &c * h.w(hs[1], ss[1], ks[1]);
                                    if c.is_zero() {
                                        continue;
                                    }
                                    let y = r.carrier.act(hs[2], s0);
                                    let prod = h.mul_basis(hs[5], ks[4]);
                                    for (ys, y0) in co.coact_iter(&y, 2) {
                                        let c2 = &c * h.winv(ys[0], hs[3], ks[2]);
                                        if c2.is_zero() {
                                            continue;
                                        }
                                        let c3 = &c2 * &h.w_vec3(rs[1], ys[1], h.mul_basis(hs[4], ks[3]));
                                        if c3.is_zero() {
                                            continue;
                                        }
                                        let rs0 = r.mul(r0, &y0);
                                        add_outer(&mut acc, &c3, &rs0, prod);
                                    }
                                }
                            }
                        }
                    }
                    for (i, x) in acc.into_iter().enumerate() {
                        out.set(i, col, x);
                    }
                }
            }
        }
    }
    out
}

/// Δ_B(r⊗h) = ω⁻¹(r¹₋₁⊗r²₋₂⊗h₁) r¹₀⊗r²₋₁h₂⊗r²₀⊗h₃, as a (dn)² × dn matrix.
pub fn bosonization_coproduct(h: &DualQuasiBialgebra, r: &BraidedBialgebra) -> Matrix {
    let f = h.field();
    let n = h.dim();
    let d = r.dim();
    let dn = d * n;
    let co = r.carrier.comodule();
    let l3 = h.coalgebra().legs(3);
    let mut out = Matrix::zeros(f, dn * dn, dn);
    for a in 0..d {
        let dr = r.delta_basis(a);
        for hh in 0..n {
            let col = a * n + hh;
            for (idx, c) in dr.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (p, q) = (idx / d, idx % d);
                for (x, p0) in co.coact(&unit_vector(f, d, p)) {
                    for (ys, q0) in co.coact_iter(&unit_vector(f, d, q), 2) {
                        for (hs, ch) in &l3[hh] {
                            let w = h.winv(x, ys[0], hs[0]);
                            if w.is_zero() {
                                continue;
                            }
                            let cc = &(c * ch) * w;
                            let mut left = zero_vector(f, dn);
                            add_outer(&mut left, &cc, &p0, h.mul_basis(ys[1], hs[1]));
                            let mut right = zero_vector(f, dn);
                            add_outer(&mut right, &f.one(), &q0, &unit_vector(f, n, hs[2]));
                            let mut t = zero_vector(f, dn * dn);
                            add_outer(&mut t, &f.one(), &left, &right);
                            for (i, v) in t.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                out.add_to(i, col, v);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// m_B assembled as F(m_R)∘φ₂(R,R)∘χ.
pub fn bosonization_product_composite(r: &BraidedBialgebra) -> Result<Matrix> {
    let n = r.carrier.base().dim();
    let (bt, p) = phi2(&r.carrier, &r.carrier)?;
    let fm = r.mult.kron(&Matrix::identity(r.field(), n));
    Ok(fm.mul(&p.forward).mul(&bt.quotient.proj))
}

/// Δ_B assembled as j∘ψ₂(R,R)⁻¹∘F(Δ_R).
pub fn bosonization_coproduct_composite(r: &BraidedBialgebra) -> Result<Matrix> {
    let n = r.carrier.base().dim();
    let (ct, q) = psi2(&r.carrier, &r.carrier)?;
    let fd = r.delta.kron(&Matrix::identity(r.field(), n));
    Ok(ct.subspace.inclusion().mul(&q.inverse).mul(&fd))
}

/// R#H on R⊗H with ω_B = ε_R⊗ε_R⊗ε_R⊗ω_H, σ(h) = 1⊗h, π(r⊗h) = ε(r)h.
pub fn bosonize(h: &Arc<DualQuasiBialgebra>, r: &BraidedBialgebra) -> Result<Bosonization> {
    require_valid(h, r)?;
    let f = h.field();
    let n = h.dim();
    let d = r.dim();
    let dn = d * n;
    let mult = bosonization_product(h, r);
    let delta = bosonization_coproduct(h, r);
    let labels = basis_labels(r.carrier.labels(), h.labels());
    let terms = (0..dn)
        .map(|c| (0..dn * dn).filter(|&i| !delta.get(i, c).is_zero()).map(|i| (i / dn, i % dn, delta.get(i, c).clone())).collect())
        .collect();
    let counit: Vector = (0..dn).map(|i| &r.counit[i / n] * h.coalgebra().eps(i % n)).collect();
    let coalg = Coalgebra::from_terms(f, labels, terms, counit)?;
    let table = (0..dn).map(|i| (0..dn).map(|j| mult.col(i * dn + j)).collect()).collect();
    let mut unit = zero_vector(f, dn);
    add_outer(&mut unit, &f.one(), &r.unit, h.unit());
    let er = &r.counit;
    let omega = Functional::from_fn(dn, 3, |ix| {
        let e = &(&er[ix[0] / n] * &er[ix[1] / n]) * &er[ix[2] / n];
        if e.is_zero() {
            e
        } else {
            &e * h.w(ix[0] % n, ix[1] % n, ix[2] % n)
        }
    });
    let b = DualQuasiBialgebra::new(coalg, table, unit, omega)?;
    let sigma = Matrix::from_fn(f, dn, n, |i, c| if i % n == c { r.unit[i / n].clone() } else { f.zero() });
    let pi = Matrix::from_fn(f, n, dn, |x, c| if c % n == x { er[c / n].clone() } else { f.zero() });
    Ok(Bosonization { b: Arc::new(b), h: h.clone(), r: r.clone(), sigma, pi })
}

/// Axioms of B, the projection, the identities tying B to H through π, and
/// agreement of the element formulas with their categorical composites.
pub fn check_bosonization(bos: &Bosonization) -> Report {
    let mut rep = Report::new("bosonization");
    let (b, h) = (&*bos.b, &*bos.h);
    let f = b.field();
    let (nb, n) = (b.dim(), h.dim());
    rep.absorb("B: ", check_dqb(b));
    rep.absorb("", bos.projection().check());
    let pi = &bos.pi;
    let mut om = None;
    'o: for i in 0..nb {
        for j in 0..nb {
            for k in 0..nb {
                let rhs = h.omega_of(&pi.col(i), &pi.col(j), &pi.col(k));
                if &rhs != b.w(i, j, k) {
                    om = Some(format!("at ({},{},{})", b.labels()[i], b.labels()[j], b.labels()[k]));
                    break 'o;
                }
            }
        }
    }
    rep.record("ω_B = ω_H(π⊗π⊗π)", om);
    let mut pm = None;
    'm: for i in 0..nb {
        for j in 0..nb {
            if pi.apply(b.mul_basis(i, j)) != h.mul(&pi.col(i), &pi.col(j)) {
                pm = Some(format!("at ({},{})", b.labels()[i], b.labels()[j]));
                break 'm;
            }
        }
    }
    rep.record("π m_B = m_H(π⊗π)", pm);
    let pp = pi.kron(pi);
    let dh = h.coalgebra().delta_matrix();
    rep.record("(π⊗π)Δ_B = Δ_H π", (pp.mul(&b.coalgebra().delta_matrix()) != dh.mul(pi)).then(|| "coproducts differ".into()));
    let eps_h = Matrix::from_rows(f, &[h.coalgebra().counit().clone()]).expect("row");
    let eps_b = Matrix::from_rows(f, &[b.coalgebra().counit().clone()]).expect("row");
    rep.record("ε_B = ε_H π", (eps_h.mul(pi) != eps_b).then(|| "counits differ".into()));
    rep.record("π u_B = u_H", (&pi.apply(b.unit()) != h.unit()).then(|| "π(1) ≠ 1".into()));
    let _ = n;
    match bosonization_product_composite(&bos.r) {
        Ok(m) => rep.record("m_B = F(m_R)φ₂χ", m.first_difference(&bosonization_product(h, &bos.r)).map(|(_, c)| format!("at column {c}"))),
        Err(e) => rep.fail("m_B = F(m_R)φ₂χ", e.to_string()),
    }
    match bosonization_coproduct_composite(&bos.r) {
        Ok(m) => rep.record("Δ_B = jψ₂⁻¹F(Δ_R)", m.first_difference(&bosonization_coproduct(h, &bos.r)).map(|(_, c)| format!("at column {c}"))),
        Err(e) => rep.fail("Δ_B = jψ₂⁻¹F(Δ_R)", e.to_string()),
    }
    rep
}

fn require_split(p: &ProjectionData, s: &Matrix) -> Result<()> {
    if let Some(bad) = p.check().first_failure() {
        return Err(Error::Precondition(format!("not a projection: {} {}", bad.name, bad.witness.clone().unwrap_or_default())));
    }
    if !check_preantipode(&p.h, s).passed() {
        return Err(Error::Precondition("S is not a preantipode of H".into()));
    }
    Ok(())
}

/// τ(a) = ω_A[a₁⊗σSπ(a₃)₁⊗a₄] a₂σSπ(a₃)₂.
pub fn split_tau(p: &ProjectionData, s: &Matrix) -> Result<Matrix> {
    require_split(p, s)?;
    let a = &*p.a;
    let f = a.field();
    let na = a.dim();
    let l4 = a.coalgebra().legs(4);
    let mut out = Matrix::zeros(f, na, na);
    for i in 0..na {
        let mut acc = zero_vector(f, na);
        for (xs, c) in &l4[i] {
            let z = p.sigma.apply(&s.apply(&p.pi.col(xs[2])));
            let dz = a.coalgebra().delta_of(&z);
            for (pq, cz) in dz.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let (u, v) = (pq / na, pq % na);
                let w = a.w(xs[0], u, xs[3]);
                if w.is_zero() {
                    continue;
                }
                let cc = &(c * cz) * w;
                for (k, m) in a.mul_basis(xs[1], v).iter().enumerate().filter(|(_, m)| !m.is_zero()) {
                    acc[k] += &(&cc * m);
                }
            }
        }
        for (k, x) in acc.into_iter().enumerate() {
            out.set(k, i, x);
        }
    }
    Ok(out)
}

/// R = τ(A) with its YD bialgebra structure and ε_A: R⊗H → A.
#[derive(Clone, Debug)]
pub struct Split {
    pub r: BraidedBialgebra,
    /// R inside A
    pub image: Subspace,
    /// forward ε_A(r⊗h) = rσ(h), inverse a ↦ τ(a₁)⊗π(a₂)
    pub iso: Iso,
}

pub fn split(p: &ProjectionData, s: &Matrix) -> Result<Split> {
    let t = split_tau(p, s)?;
    let (a, h) = (&*p.a, &*p.h);
    let f = a.field();
    let (na, n) = (a.dim(), h.dim());
    let image = Subspace::image(&t);
    let basis = image.basis().to_vec();
    let d = basis.len();
    let coords = |v: &Vector| image.coords(v).ok_or_else(|| Error::Invalid("element leaves τ(A)".into()));
    let labels: Vec<String> = basis.iter().map(|v| a.label(v)).collect();
    // ρ_R(r) = π(r₁)⊗r₂
    let mut rho = Matrix::zeros(f, n * d, d);
    for (j, v) in basis.iter().enumerate() {
        let dv = a.coalgebra().delta_of(v);
        let mut by_h = vec![zero_vector(f, na); n];
        for (pq, c) in dv.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (x, px) in p.pi.col(pq / na).iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                by_h[x][pq % na] += &(c * px);
            }
        }
        for (x, w) in by_h.iter().enumerate() {
            for (i, c) in coords(w)?.iter().enumerate() {
                rho.add_to(x * d + i, j, c);
            }
        }
    }
    let co = Comodule::from_matrix(p.h.clone(), labels, &rho)?;
    // h⊳r = τ[σ(h)r]
    let action = (0..n)
        .map(|x| basis.iter().map(|v| coords(&t.apply(&a.mul(&p.sigma.col(x), v)))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let carrier = YDModule::new(co, action)?;
    let mut mult_cols = Vec::with_capacity(d * d);
    for x in &basis {
        for y in &basis {
            mult_cols.push(coords(&a.mul(x, y))?);
        }
    }
    let mult = Matrix::from_columns(f, d, &mult_cols);
    let unit = coords(a.unit())?;
    // Δ_R(r) = τ(r₁)⊗τ(r₂)
    let tt = t.kron(&t);
    let inc = image.inclusion();
    let delta = solve_columns(&inc.kron(&inc), &tt.mul(&a.coalgebra().delta_matrix()).mul(&inc))?;
    let counit = basis.iter().map(|v| a.coalgebra().eps_of(v)).collect();
    let r = BraidedBialgebra { carrier, mult, unit, delta, counit };
    let forward = Matrix::from_fn(f, na, d * n, |k, c| a.mul(&basis[c / n], &p.sigma.col(c % n))[k].clone());
    let mut inverse = Matrix::zeros(f, d * n, na);
    for i in 0..na {
        let mut acc = zero_vector(f, d * n);
        for (u, v, c) in a.coalgebra().delta(i) {
            add_outer(&mut acc, c, &coords(&t.col(*u))?, &p.pi.col(*v));
        }
        for (k, x) in acc.into_iter().enumerate() {
            inverse.set(k, i, x);
        }
    }
    Ok(Split { r, image, iso: Iso { forward, inverse } })
}

/// Certifies a splitting: R is a YD bialgebra, and ε_A is an isomorphism of
/// dual quasi-bialgebras R#H ≅ A (both directions, composites the identity).
pub fn check_split(p: &ProjectionData, s: &Matrix) -> Report {
    let mut rep = Report::new("splitting");
    let sp = match split(p, s) {
        Ok(sp) => sp,
        Err(e) => {
            rep.fail("split", e.to_string());
            return rep;
        }
    };
    rep.absorb("R: ", check_braided_bialgebra(&sp.r));
    let bos = match bosonize(&p.h, &sp.r) {
        Ok(b) => b,
        Err(e) => {
            rep.fail("R#H", e.to_string());
            return rep;
        }
    };
    rep.record("ε_A∘ε_A⁻¹ = Id", sp.iso.defect());
    rep.absorb("ε_A: ", check_dqb_morphism(&sp.iso.forward, &bos.b, &p.a));
    rep.absorb("ε_A⁻¹: ", check_dqb_morphism(&sp.iso.inverse, &p.a, &bos.b));
    rep.record(
        "ε_A σ_B = σ_A",
        (sp.iso.forward.mul(&bos.sigma) != p.sigma).then(|| "σ is not preserved".into()),
    );
    rep
}

/// Convenience wrapper solving for S first.
pub fn split_with_solved_preantipode(p: &ProjectionData) -> Result<Split> {
    let s = crate::preantipode::solve_preantipode(&p.h).ok_or_else(|| Error::Precondition("H has no preantipode".into()))?;
    split(p, &s.s)
}

/// Defect of f: R → R' as an isomorphism of YD bialgebras.
pub fn braided_iso_defect(fm: &Matrix, r: &BraidedBialgebra, r2: &BraidedBialgebra) -> Option<String> {
    if fm.rows() != fm.cols() || fm.inverse().is_none() {
        return Some("not invertible".into());
    }
    if let Some(w) = crate::yd::yd_morphism_defect(fm, &r.carrier, &r2.carrier) {
        return Some(format!("YD structure: {w}"));
    }
    if fm.mul(&r.mult) != r2.mult.mul(&fm.kron(fm)) {
        return Some("multiplication not preserved".into());
    }
    if fm.apply(&r.unit) != r2.unit {
        return Some("unit not preserved".into());
    }
    if fm.kron(fm).mul(&r.delta) != r2.delta.mul(fm) {
        return Some("coproduct not preserved".into());
    }
    let f = r.field();
    let e2 = Matrix::from_rows(f, std::slice::from_ref(&r2.counit)).expect("row");
    if e2.mul(fm).row(0) != r.counit {
        return Some("counit not preserved".into());
    }
    None
}

/// The canonical identification R → split(R#H).r, r ↦ coords of r⊗1.
pub fn canonical_iso(bos: &Bosonization, sp: &Split) -> Result<Matrix> {
    let f = bos.b.field();
    let n = bos.h.dim();
    let d = bos.r.dim();
    let cols = (0..d)
        .map(|i| {
            let mut x = zero_vector(f, d * n);
            add_outer(&mut x, &f.one(), &unit_vector(f, d, i), bos.h.unit());
            sp.image.coords(&x).ok_or_else(|| Error::Invalid("r⊗1 is not in τ(B)".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(f, sp.image.dim(), &cols))
}

/// Both round trips on R: split∘bosonize recovers R, bosonize∘split recovers B.
pub fn round_trip(h: &Arc<DualQuasiBialgebra>, r: &BraidedBialgebra, s: &Matrix) -> Report {
    let mut rep = Report::new("round trip");
    let bos = match bosonize(h, r) {
        Ok(b) => b,
        Err(e) => {
            rep.fail("bosonize", e.to_string());
            return rep;
        }
    };
    let p = bos.projection();
    match split(&p, s) {
        Ok(sp) => {
            let w = canonical_iso(&bos, &sp).map_or_else(|e| Some(e.to_string()), |c| braided_iso_defect(&c, r, &sp.r));
            rep.record("split(R#H) ≅ R", w);
        }
        Err(e) => rep.fail("split(R#H) ≅ R", e.to_string()),
    }
    rep.absorb("", check_split(&p, s));
    rep
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hopfmod::{check_trimodule, tau};
    use crate::preantipode::solve_preantipode;

    fn b1() -> Arc<DualQuasiBialgebra> {
        Arc::new(fixtures::fix1())
    }
    fn b2() -> Arc<DualQuasiBialgebra> {
        Arc::new(fixtures::fix2())
    }
    fn s_of(h: &DualQuasiBialgebra) -> Matrix {
        solve_preantipode(h).expect("preantipode").s
    }
    fn same_structure(a: &DualQuasiBialgebra, b: &DualQuasiBialgebra) -> bool {
        let n = a.dim();
        n == b.dim()
            && a.coalgebra().delta_matrix() == b.coalgebra().delta_matrix()
            && a.coalgebra().counit() == b.coalgebra().counit()
            && a.unit() == b.unit()
            && (0..n).all(|i| (0..n).all(|j| a.mul_basis(i, j) == b.mul_basis(i, j)))
            && a.omega().values() == b.omega().values()
    }

    #[test]
    fn trivial_r_gives_h_back() {
        for h in [b1(), b2(), Arc::new(fixtures::fix3())] {
            let bos = bosonize(&h, &BraidedBialgebra::unit_object(h.clone())).unwrap();
            assert!(same_structure(&bos.b, &h));
            assert!(bos.pi.is_identity());
            assert!(check_bosonization(&bos).passed());
        }
    }

    #[test]
    fn sweedler_biproduct_is_h4() {
        let bos = bosonize(&b1(), &fixtures::r_sweedler(b1())).unwrap();
        // oracle: the hand-written table, identifying x⊗g with xg
        assert!(same_structure(&bos.b, &fixtures::fix3()));
        let b = &bos.b;
        let f = b.field();
        let e = |i| unit_vector(f, 4, i);
        // basis 1⊗1, 1⊗g, x⊗1, x⊗g
        assert_eq!(b.mul(&e(1), &e(2)), e(3).iter().map(|c| -c).collect::<Vector>());
        assert_eq!(b.mul(&e(2), &e(1)), e(3));
        let rep = check_bosonization(&bos);
        assert!(rep.passed(), "{rep}");
        assert!(solve_preantipode(b).is_some());
    }

    #[test]
    fn fix4_is_a_genuine_dual_quasi_bialgebra() {
        let h = b2();
        let bos = bosonize(&h, &fixtures::trivial_braided(&fixtures::fix3(), h.clone())).unwrap();
        assert_eq!(bos.b.dim(), 8);
        let rep = check_bosonization(&bos);
        assert!(rep.passed(), "{rep}");
        assert!(bos.b.omega().values().iter().any(|w| !w.is_zero() && !w.is_one()));
        assert!(same_structure(&bos.b, &fixtures::fix4()));
    }

    #[test]
    fn invalid_r_is_rejected() {
        let h = b2();
        match bosonize(&h, &fixtures::r_sweedler(h.clone())) {
            Err(Error::Invalid(w)) => assert!(w.contains("quasi-associative action"), "{w}"),
            other => panic!("expected Invalid, got {other:?}"),
        }
        assert!(matches!(bosonize(&b1(), &fixtures::r_sweedler(b2())), Err(Error::BaseMismatch)));
    }

    #[test]
    fn split_tau_on_sweedler_biproduct() {
        let bos = bosonize(&b1(), &fixtures::r_sweedler(b1())).unwrap();
        let p = bos.projection();
        let s = s_of(&p.h);
        let t = split_tau(&p, &s).unwrap();
        let f = t.field();
        let e = |i| unit_vector(f, 4, i);
        assert_eq!(t.apply(&e(2)), e(2));
        assert_eq!(t.apply(&e(1)), e(0));
        assert_eq!(t.mul(&t), t);
        let a = p.trimodule();
        assert!(check_trimodule(&a).passed());
        assert_eq!(t, tau(&a, &s));
    }

    #[test]
    fn split_tau_is_idempotent_on_fix4() {
        let h = b2();
        let bos = bosonize(&h, &fixtures::trivial_braided(&fixtures::fix3(), h.clone())).unwrap();
        let p = bos.projection();
        let s = s_of(&h);
        let t = split_tau(&p, &s).unwrap();
        assert_eq!(t.mul(&t), t);
        assert_eq!(t, tau(&p.trimodule(), &s));
        assert_eq!(Subspace::image(&t).dim(), 4);
    }

    #[test]
    fn identity_projection_splits_off_k() {
        for h in [b1(), b2()] {
            let p = ProjectionData::identity(h.clone());
            let s = s_of(&h);
            let t = split_tau(&p, &s).unwrap();
            let img = Subspace::image(&t);
            assert_eq!(img.dim(), 1);
            assert!(img.contains(h.unit()));
            let sp = split(&p, &s).unwrap();
            assert_eq!(sp.r.dim(), 1);
            let rep = check_split(&p, &s);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn round_trips() {
        let h1 = b1();
        let rep = round_trip(&h1, &fixtures::r_sweedler(h1.clone()), &s_of(&h1));
        assert!(rep.passed(), "{rep}");
        let h2 = b2();
        let rep = round_trip(&h2, &fixtures::trivial_braided(&fixtures::fix3(), h2.clone()), &s_of(&h2));
        assert!(rep.passed(), "{rep}");
        let rep = round_trip(&h2, &BraidedBialgebra::unit_object(h2.clone()), &s_of(&h2));
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn split_rejects_non_preantipode() {
        let p = ProjectionData::identity(b2());
        let bad = Matrix::zeros(p.h.field(), 2, 2);
        assert!(matches!(split_tau(&p, &bad), Err(Error::Precondition(_))));
    }
}
