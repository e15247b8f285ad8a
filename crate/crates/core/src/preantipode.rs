//! Preantipodes: checks, the linear solver, derived identities, and the
//! passage from a cocommutative preantipode to an ordinary antipode.

use crate::coalgebra::Functional;
use crate::dqb::{DualQuasiBialgebra, GroupCocycleData};
use crate::error::{Error, Result};
use crate::linalg::{axpy, solve_sparse_ranked, unit_vector, zero_vector, Matrix, SparseRow, Vector};
use crate::report::Report;
use crate::scalar::Scalar;

/// x⊗y as a vector of length n², index p·n + q.
pub fn tensor2(x: &[Scalar], y: &[Scalar]) -> Vector {
    let n = y.len();
    let f = x.first().or(y.first()).map(|s| s.field()).expect("nonempty");
    let mut out = zero_vector(f, x.len() * n);
    for (p, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (q, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out[p * n + q] = a * b;
            }
        }
    }
    out
}

fn columns(s: &Matrix) -> Vec<Vector> {
    (0..s.cols()).map(|j| s.col(j)).collect()
}

/// Per basis element h: S(h₁)₁h₂ ⊗ S(h₁)₂ − 1⊗S(h).
fn left_colinearity_residual(h: &DualQuasiBialgebra, sc: &[Vector], i: usize) -> Vector {
    let n = h.dim();
    let mut out = tensor2(h.unit(), &sc[i]);
    for v in out.iter_mut() {
        *v = -&*v;
    }
    for (i1, i2, c) in h.coalgebra().delta(i) {
        for (p, sp) in sc[*i1].iter().enumerate() {
            if sp.is_zero() {
                continue;
            }
            let cs = c * sp;
            for (a, b, d) in h.coalgebra().delta(p) {
                let left = h.mul_basis(*a, *i2);
                let coef = &cs * d;
                for (k, lk) in left.iter().enumerate() {
                    if !lk.is_zero() {
                        out[k * n + b] += &(lk * &coef);
                    }
                }
            }
        }
    }
    out
}

/// Per basis element h: S(h₂)₁ ⊗ h₁S(h₂)₂ − S(h)⊗1.
fn right_colinearity_residual(h: &DualQuasiBialgebra, sc: &[Vector], i: usize) -> Vector {
    let n = h.dim();
    let mut out = tensor2(&sc[i], h.unit());
    for v in out.iter_mut() {
        *v = -&*v;
    }
    for (i1, i2, c) in h.coalgebra().delta(i) {
        for (p, sp) in sc[*i2].iter().enumerate() {
            if sp.is_zero() {
                continue;
            }
            let cs = c * sp;
            for (a, b, d) in h.coalgebra().delta(p) {
                let right = h.mul_basis(*i1, *b);
                let coef = &cs * d;
                for (k, rk) in right.iter().enumerate() {
                    if !rk.is_zero() {
                        out[a * n + k] += &(rk * &coef);
                    }
                }
            }
        }
    }
    out
}

/// ω(h₁ ⊗ S(h₂) ⊗ h₃), without the ε(h) subtracted.
fn omega_s_value(h: &DualQuasiBialgebra, sc: &[Vector], s3: &[(Vec<usize>, Scalar)]) -> Scalar {
    let mut acc = h.field().zero();
    for (idx, c) in s3 {
        let w = h.w_vec2(idx[0], &sc[idx[1]], idx[2]);
        if !w.is_zero() {
            acc += &(c * &w);
        }
    }
    acc
}

pub fn check_preantipode(h: &DualQuasiBialgebra, s: &Matrix) -> Report {
    let mut rep = Report::new("preantipode");
    let n = h.dim();
    if s.rows() != n || s.cols() != n {
        rep.fail("shape", format!("S is {}x{}, expected {n}x{n}", s.rows(), s.cols()));
        return rep;
    }
    let sc = columns(s);
    let c = h.coalgebra();
    let l = h.labels();
    let w1 = (0..n).find(|&i| left_colinearity_residual(h, &sc, i).iter().any(|v| !v.is_zero())).map(|i| {
        let r = left_colinearity_residual(h, &sc, i);
        let rhs = tensor2(h.unit(), &sc[i]);
        let lhs: Vector = r.iter().zip(&rhs).map(|(a, b)| a + b).collect();
        format!("at {}: S(h₁)₁h₂⊗S(h₁)₂ = {} but 1⊗S(h) = {}", l[i], c.label_of_tensor2(&lhs), c.label_of_tensor2(&rhs))
    });
    rep.record("S(h₁)₁h₂⊗S(h₁)₂ = 1⊗S(h)", w1);
    let w2 = (0..n).find(|&i| right_colinearity_residual(h, &sc, i).iter().any(|v| !v.is_zero())).map(|i| {
        let r = right_colinearity_residual(h, &sc, i);
        let rhs = tensor2(&sc[i], h.unit());
        let lhs: Vector = r.iter().zip(&rhs).map(|(a, b)| a + b).collect();
        format!("at {}: S(h₂)₁⊗h₁S(h₂)₂ = {} but S(h)⊗1 = {}", l[i], c.label_of_tensor2(&lhs), c.label_of_tensor2(&rhs))
    });
    rep.record("S(h₂)₁⊗h₁S(h₂)₂ = S(h)⊗1", w2);
    let s3 = c.splits(3);
    let w3 = (0..n).find_map(|i| {
        let v = omega_s_value(h, &sc, &s3[i]);
        (&v != c.eps(i)).then(|| format!("at {}: ω(h₁⊗S(h₂)⊗h₃) = {v} but ε(h) = {}", l[i], c.eps(i)))
    });
    rep.record("ω(h₁⊗S(h₂)⊗h₃) = ε(h)", w3);
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreantipodeSolution {
    pub s: Matrix,
    /// Dimension of the affine space of all preantipodes.
    pub solution_dim: usize,
}

/// Stacks both colinearity identities (n·n² equations each) and the ω-normalization (n equations) in the
/// n² entries of S and solves exactly.
pub fn solve_preantipode(h: &DualQuasiBialgebra) -> Option<PreantipodeSolution> {
    let n = h.dim();
    let f = h.field();
    let n2 = n * n;
    let neq = 2 * n * n2 + n;
    // unknown u = a·n + b is the coefficient of e_a in S(e_b)
    let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(n2);
    let s3 = h.coalgebra().splits(3);
    for a in 0..n {
        for b in 0..n {
            let mut sc = vec![zero_vector(f, n); n];
            sc[b] = unit_vector(f, n, a);
            let mut col = Vec::new();
            for i in 0..n {
                for (k, v) in left_colinearity_residual(h, &sc, i).into_iter().enumerate() {
                    if !v.is_zero() {
                        col.push((i * n2 + k, v));
                    }
                }
                for (k, v) in right_colinearity_residual(h, &sc, i).into_iter().enumerate() {
                    if !v.is_zero() {
                        col.push((n * n2 + i * n2 + k, v));
                    }
                }
                let v = omega_s_value(h, &sc, &s3[i]);
                if !v.is_zero() {
                    col.push((2 * n * n2 + i, v));
                }
            }
            cols.push(col);
        }
    }
    let mut rows: Vec<SparseRow> = vec![Vec::new(); neq];
    for (u, col) in cols.into_iter().enumerate() {
        for (r, v) in col {
            rows[r].push((u, v));
        }
    }
    for i in 0..n {
        let e = h.coalgebra().eps(i);
        if !e.is_zero() {
            rows[2 * n * n2 + i].push((n2, e.clone()));
        }
    }
    rows.retain(|r| !r.is_empty());
    let (x, rank) = solve_sparse_ranked(f, rows, n2)?;
    let s = Matrix::from_fn(f, n, n, |a, b| x[a * n + b].clone());
    Some(PreantipodeSolution { s, solution_dim: n2 - rank })
}

/// S(g) = θ(g,g⁻¹,g)⁻¹ g⁻¹ on a group basis; None for a monoid.
pub fn group_preantipode(d: &GroupCocycleData) -> Option<Matrix> {
    let n = d.order();
    let f = d.field();
    let mut s = Matrix::zeros(f, n, n);
    for g in 0..n {
        let gi = d.inverse(g)?;
        s.set(gi, g, d.theta(g, gi, g).inv()?);
    }
    Some(s)
}

/// h₁S(h₂) = εS(h)1 = S(h₁)h₂ and ω⁻¹(S(h₁)⊗h₂⊗S(h₃)) = εS(h).
/// A failure after the precondition passes is an implementation bug.
pub fn check_derived_identities(h: &DualQuasiBialgebra, s: &Matrix) -> Report {
    let mut rep = Report::new("preantipode consequences");
    let pre = check_preantipode(h, s);
    if let Some(bad) = pre.first_failure() {
        let why = format!("precondition violated: {} ({})", bad.name, bad.witness.clone().unwrap_or_default());
        rep.fail("precondition: S is a preantipode", why.clone());
        rep.skip("h₁S(h₂) = εS(h)1", why.clone());
        rep.skip("S(h₁)h₂ = εS(h)1", why.clone());
        rep.skip("ω⁻¹(S(h₁)⊗h₂⊗S(h₃)) = εS(h)", why);
        return rep;
    }
    rep.pass("precondition: S is a preantipode");
    let n = h.dim();
    let f = h.field();
    let sc = columns(s);
    let c = h.coalgebra();
    let l = h.labels();
    let es: Vec<Scalar> = sc.iter().map(|v| c.eps_of(v)).collect();
    let mut left = None;
    let mut right = None;
    for i in 0..n {
        let want: Vector = h.unit().iter().map(|u| u * &es[i]).collect();
        let mut a = zero_vector(f, n);
        let mut b = zero_vector(f, n);
        for (i1, i2, k) in c.delta(i) {
            axpy(&mut a, k, &h.mul_left(*i1, &sc[*i2]));
            axpy(&mut b, k, &h.mul_right(&sc[*i1], *i2));
        }
        if left.is_none() && a != want {
            left = Some(format!("at {}: h₁S(h₂) = {} but εS(h)1 = {}", l[i], h.label(&a), h.label(&want)));
        }
        if right.is_none() && b != want {
            right = Some(format!("at {}: S(h₁)h₂ = {} but εS(h)1 = {}", l[i], h.label(&b), h.label(&want)));
        }
    }
    rep.record("h₁S(h₂) = εS(h)1", left);
    rep.record("S(h₁)h₂ = εS(h)1", right);
    let s3 = c.splits(3);
    let w = (0..n).find_map(|i| {
        let mut acc = f.zero();
        for (idx, k) in &s3[i] {
            acc += &(k * &h.omega_inv_of(&sc[idx[0]], &unit_vector(f, n, idx[1]), &sc[idx[2]]));
        }
        (acc != es[i]).then(|| format!("at {}: ω⁻¹(S(h₁)⊗h₂⊗S(h₃)) = {acc} but εS(h) = {}", l[i], es[i]))
    });
    rep.record("ω⁻¹(S(h₁)⊗h₂⊗S(h₃)) = εS(h)", w);
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiHopfData {
    pub s: Matrix,
    pub alpha: Functional,
    pub beta: Functional,
}

/// s(h) = S(h₃)₁ ω(h₁⊗S(h₃)₂⊗h₂), α = ε, β = εS.
pub fn cocommutative_to_hopf(h: &DualQuasiBialgebra, s: &Matrix) -> Result<QuasiHopfData> {
    if !h.is_cocommutative() {
        return Err(Error::Precondition("H is not cocommutative".into()));
    }
    let pre = check_preantipode(h, s);
    if let Some(bad) = pre.first_failure() {
        return Err(Error::Precondition(format!(
            "S is not a preantipode: {} {}",
            bad.name,
            bad.witness.clone().unwrap_or_default()
        )));
    }
    let n = h.dim();
    let f = h.field();
    let sc = columns(s);
    let c = h.coalgebra();
    let s3 = c.splits(3);
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut out = zero_vector(f, n);
        for (idx, k) in &s3[i] {
            for (p, sp) in sc[idx[2]].iter().enumerate() {
                if sp.is_zero() {
                    continue;
                }
                for (a, b, d) in c.delta(p) {
                    let w = h.w(idx[0], *b, idx[1]);
                    if !w.is_zero() {
                        out[*a] += &(&(&(k * sp) * d) * w);
                    }
                }
            }
        }
        cols.push(out);
    }
    let small_s = Matrix::from_columns(f, n, &cols);
    let alpha = Functional::new(n, 1, c.counit().clone())?;
    let beta = Functional::new(n, 1, sc.iter().map(|v| c.eps_of(v)).collect())?;
    Ok(QuasiHopfData { s: small_s, alpha, beta })
}

/// (β∗s)(h) = β(h₁)s(h₂) as a matrix.
pub fn functional_times_map(h: &DualQuasiBialgebra, beta: &Functional, s: &Matrix) -> Matrix {
    let n = h.dim();
    let f = h.field();
    let cols: Vec<Vector> = (0..n)
        .map(|i| {
            let mut out = zero_vector(f, n);
            for (a, b, k) in h.coalgebra().delta(i) {
                let coef = k * beta.at(&[*a]);
                if !coef.is_zero() {
                    axpy(&mut out, &coef, &s.col(*b));
                }
            }
            out
        })
        .collect();
    Matrix::from_columns(f, n, &cols)
}

/// Ordinary antipode axioms s(h₁)h₂ = ε(h)1 = h₁s(h₂).
pub fn check_antipode(h: &DualQuasiBialgebra, s: &Matrix) -> Report {
    let mut rep = Report::new("antipode");
    let n = h.dim();
    let f = h.field();
    let sc = columns(s);
    let c = h.coalgebra();
    let mut left = None;
    let mut right = None;
    for i in 0..n {
        let want: Vector = h.unit().iter().map(|u| u * c.eps(i)).collect();
        let mut a = zero_vector(f, n);
        let mut b = zero_vector(f, n);
        for (i1, i2, k) in c.delta(i) {
            axpy(&mut a, k, &h.mul_right(&sc[*i1], *i2));
            axpy(&mut b, k, &h.mul_left(*i1, &sc[*i2]));
        }
        if left.is_none() && a != want {
            left = Some(format!("at {}: s(h₁)h₂ = {}", h.labels()[i], h.label(&a)));
        }
        if right.is_none() && b != want {
            right = Some(format!("at {}: h₁s(h₂) = {}", h.labels()[i], h.label(&b)));
        }
    }
    rep.record("s(h₁)h₂ = ε(h)1", left);
    rep.record("h₁s(h₂) = ε(h)1", right);
    rep
}

pub fn check_quasi_hopf(h: &DualQuasiBialgebra, q: &QuasiHopfData) -> Report {
    let mut rep = Report::new("dual quasi-Hopf structure");
    let n = h.dim();
    let f = h.field();
    let c = h.coalgebra();
    let l = h.labels();
    if q.s.rows() != n || q.s.cols() != n || q.alpha.dim() != n || q.beta.dim() != n {
        rep.fail("shape", "s, α, β must live on H");
        return rep;
    }
    let sc = columns(&q.s);
    let al = |i: usize| q.alpha.at(&[i]).clone();
    let be = |i: usize| q.beta.at(&[i]).clone();

    let mut anti = None;
    for i in 0..n {
        let lhs = c.delta_of(&sc[i]);
        let mut rhs = zero_vector(f, n * n);
        for (a, b, k) in c.delta(i) {
            axpy(&mut rhs, k, &tensor2(&sc[*b], &sc[*a]));
        }
        if lhs != rhs {
            anti = Some(format!("at {}: Δs = {} but (s⊗s)Δ^op = {}", l[i], c.label_of_tensor2(&lhs), c.label_of_tensor2(&rhs)));
            break;
        }
        if &c.eps_of(&sc[i]) != c.eps(i) {
            anti = Some(format!("at {}: εs ≠ ε", l[i]));
            break;
        }
    }
    rep.record("s is a coalgebra anti-homomorphism", anti);

    let s3 = c.splits(3);
    let s5 = c.splits(5);
    let mut a1 = None;
    let mut a2 = None;
    for i in 0..n {
        let mut x = zero_vector(f, n);
        let mut y = zero_vector(f, n);
        for (idx, k) in &s3[i] {
            let cb = k * &be(idx[1]);
            if !cb.is_zero() {
                axpy(&mut x, &cb, &h.mul_left(idx[0], &sc[idx[2]]));
            }
            let ca = k * &al(idx[1]);
            if !ca.is_zero() {
                axpy(&mut y, &ca, &h.mul_right(&sc[idx[0]], idx[2]));
            }
        }
        let wb: Vector = h.unit().iter().map(|u| u * &be(i)).collect();
        let wa: Vector = h.unit().iter().map(|u| u * &al(i)).collect();
        if a1.is_none() && x != wb {
            a1 = Some(format!("at {}: h₁β(h₂)s(h₃) = {} but β(h)1 = {}", l[i], h.label(&x), h.label(&wb)));
        }
        if a2.is_none() && y != wa {
            a2 = Some(format!("at {}: s(h₁)α(h₂)h₃ = {} but α(h)1 = {}", l[i], h.label(&y), h.label(&wa)));
        }
    }
    rep.record("ant 1", a1);
    rep.record("ant 2", a2);

    let mut a3 = None;
    for i in 0..n {
        let mut left = f.zero();
        let mut right = f.zero();
        for (idx, k) in &s5[i] {
            let cl = &(k * &be(idx[1])) * &al(idx[3]);
            if !cl.is_zero() {
                left += &(&cl * &h.w_vec2(idx[0], &sc[idx[2]], idx[4]));
            }
            let cr = &(k * &al(idx[1])) * &be(idx[3]);
            if !cr.is_zero() {
                right += &(&cr * &h.omega_inv_of(&sc[idx[0]], &unit_vector(f, n, idx[2]), &sc[idx[4]]));
            }
        }
        if left != *c.eps(i) {
            a3 = Some(format!("at {}: ω(h₁⊗β(h₂)s(h₃)α(h₄)⊗h₅) = {left} but ε(h) = {}", l[i], c.eps(i)));
            break;
        }
        if right != *c.eps(i) {
            a3 = Some(format!("at {}: ω⁻¹(s(h₁)⊗α(h₂)h₃β(h₄)⊗s(h₅)) = {right} but ε(h) = {}", l[i], c.eps(i)));
            break;
        }
    }
    rep.record("ant 3", a3);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::report::Status;

    fn diag(h: &DualQuasiBialgebra, vals: &[i64]) -> Matrix {
        let f = h.field();
        Matrix::from_fn(f, vals.len(), vals.len(), |i, j| if i == j { f.int(vals[i]) } else { f.zero() })
    }

    #[test]
    fn closed_forms_pass() {
        let h1 = fixtures::fix1();
        assert!(check_preantipode(&h1, &diag(&h1, &[1, 1])).passed());
        let h2 = fixtures::fix2();
        assert!(check_preantipode(&h2, &diag(&h2, &[1, -1])).passed());
        assert_eq!(group_preantipode(h2.group().unwrap()).unwrap(), diag(&h2, &[1, -1]));
    }

    #[test]
    fn constant_one_fails_left_colinearity_at_g() {
        // oracle: S(1) = S(g) = 1 gives S(g)₁g⊗S(g)₂ = g⊗1 ≠ 1⊗1
        let h = fixtures::fix1();
        let f = h.field();
        let s = Matrix::from_fn(f, 2, 2, |i, _| if i == 0 { f.one() } else { f.zero() });
        let r = check_preantipode(&h, &s);
        assert_eq!(r.status_of("S(h₁)₁h₂⊗S(h₁)₂ = 1⊗S(h)"), Some(&Status::Fail));
        assert!(r.witness_of("S(h₁)₁h₂⊗S(h₁)₂ = 1⊗S(h)").unwrap().starts_with("at g:"));
        // the identity matrix is a genuine preantipode on kZ₂
        assert!(check_preantipode(&h, &Matrix::identity(f, 2)).passed());
    }

    #[test]
    fn solver_on_fixtures() {
        let h1 = fixtures::fix1();
        let s1 = solve_preantipode(&h1).unwrap();
        assert_eq!(s1.s, diag(&h1, &[1, 1]));
        assert_eq!(s1.solution_dim, 0);
        let h2 = fixtures::fix2();
        assert_eq!(solve_preantipode(&h2).unwrap().s, diag(&h2, &[1, -1]));
        assert!(solve_preantipode(&fixtures::fix5()).is_none());
        let h4 = fixtures::fix3();
        let s = solve_preantipode(&h4).unwrap();
        assert!(check_preantipode(&h4, &s.s).passed());
    }

    #[test]
    fn derived_identities() {
        let h2 = fixtures::fix2();
        assert!(check_derived_identities(&h2, &diag(&h2, &[1, -1])).passed());
        let r = check_derived_identities(&h2, &diag(&h2, &[1, 1]));
        assert_eq!(r.status_of("precondition: S is a preantipode"), Some(&Status::Fail));
        assert_eq!(r.status_of("h₁S(h₂) = εS(h)1"), Some(&Status::Skipped));
    }

    #[test]
    fn cocommutative_gives_dual_quasi_hopf() {
        let h2 = fixtures::fix2();
        let s = diag(&h2, &[1, -1]);
        let q = cocommutative_to_hopf(&h2, &s).unwrap();
        assert_eq!(q.s, diag(&h2, &[1, 1]));
        assert_eq!(q.beta.values(), &[h2.field().int(1), h2.field().int(-1)][..]);
        assert!(check_quasi_hopf(&h2, &q).passed());
        assert!(check_antipode(&h2, &q.s).passed());
        assert_eq!(functional_times_map(&h2, &q.beta, &q.s), s);
        assert!(cocommutative_to_hopf(&fixtures::fix3(), &Matrix::identity(h2.field(), 4)).is_err());
    }

    #[test]
    fn beta_eps_fails_ant3_first() {
        let h2 = fixtures::fix2();
        let f = h2.field();
        let eps = Functional::new(2, 1, vec![f.one(), f.one()]).unwrap();
        let q = QuasiHopfData { s: Matrix::identity(f, 2), alpha: eps.clone(), beta: eps };
        let r = check_quasi_hopf(&h2, &q);
        assert_eq!(r.status_of("ant 1"), Some(&Status::Pass));
        assert_eq!(r.status_of("ant 2"), Some(&Status::Pass));
        assert!(r.witness_of("ant 3").unwrap().starts_with("at g:"));
    }

    #[test]
    fn hopf_antipode_is_preantipode() {
        // H₄: S(1)=1, S(g)=g, S(x)=−xg, S(xg)=x... oracle from s(x) = −g⁻¹x = −gx = xg
        let h = fixtures::fix3();
        let f = h.field();
        let mut s = Matrix::zeros(f, 4, 4);
        s.set(0, 0, f.one());
        s.set(1, 1, f.one());
        // S(x) = −g x = x g
        s.set(3, 2, f.one());
        // S(xg) = S(g)S(x) = g·xg = −x
        s.set(2, 3, f.int(-1));
        assert!(check_antipode(&h, &s).passed());
        assert!(check_preantipode(&h, &s).passed());
    }
}
