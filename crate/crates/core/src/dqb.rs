//! Dual quasi-bialgebras: structure, full axiom suite, morphisms, k^θG.

use crate::coalgebra::{check_coalgebra, convolution_inverse, convolve, rep_label, Coalgebra, Functional};
use crate::error::{Error, Result};
use crate::linalg::{axpy, unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::report::Report;
use crate::scalar::{Field, Scalar};
use crate::tensor::SparseTensor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualQuasiBialgebra {
    coalg: Coalgebra,
    /// mult[i][j] = e_i · e_j
    mult: Vec<Vec<Vector>>,
    unit: Vector,
    omega: Functional,
    omega_inv: Functional,
    group: Option<GroupCocycleData>,
}

impl DualQuasiBialgebra {
    /// Computes ω⁻¹; fails if ω is not convolution invertible.
    pub fn new(coalg: Coalgebra, mult: Vec<Vec<Vector>>, unit: Vector, omega: Functional) -> Result<Self> {
        check_shapes(&coalg, &mult, &unit, &omega)?;
        let omega_inv = convolution_inverse(&coalg, &omega)
            .ok_or_else(|| Error::NotInvertible("reassociator has no convolution inverse".into()))?;
        Ok(DualQuasiBialgebra { coalg, mult, unit, omega, omega_inv, group: None })
    }

    /// Uses a supplied ω⁻¹ after checking both convolution identities.
    pub fn with_inverse(
        coalg: Coalgebra,
        mult: Vec<Vec<Vector>>,
        unit: Vector,
        omega: Functional,
        omega_inv: Functional,
    ) -> Result<Self> {
        check_shapes(&coalg, &mult, &unit, &omega)?;
        let e = Functional::counit_power(&coalg, 3);
        if convolve(&coalg, &omega, &omega_inv)? != e || convolve(&coalg, &omega_inv, &omega)? != e {
            return Err(Error::NotInvertible("supplied ω⁻¹ is not the convolution inverse of ω".into()));
        }
        Ok(DualQuasiBialgebra { coalg, mult, unit, omega, omega_inv, group: None })
    }

    pub fn from_tensors(coalg: Coalgebra, mult: &SparseTensor, unit: Vector, omega: Functional) -> Result<Self> {
        let n = coalg.dim();
        if mult.shape() != [n, n, n] {
            return Err(Error::Shape("mult must be n×n×n".into()));
        }
        let f = coalg.field();
        let mut m = vec![vec![zero_vector(f, n); n]; n];
        for (idx, v) in mult.nonzeros() {
            m[idx[0]][idx[1]][idx[2]] = v;
        }
        DualQuasiBialgebra::new(coalg, m, unit, omega)
    }

    pub fn field(&self) -> Field {
        self.coalg.field()
    }
    pub fn dim(&self) -> usize {
        self.coalg.dim()
    }
    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalg
    }
    pub fn labels(&self) -> &[String] {
        self.coalg.labels()
    }
    pub fn unit(&self) -> &Vector {
        &self.unit
    }
    pub fn omega(&self) -> &Functional {
        &self.omega
    }
    pub fn omega_inv(&self) -> &Functional {
        &self.omega_inv
    }
    pub fn group(&self) -> Option<&GroupCocycleData> {
        self.group.as_ref()
    }

    pub fn w(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.omega.at(&[i, j, k])
    }

    pub fn winv(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.omega_inv.at(&[i, j, k])
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i][j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field(), self.dim());
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    axpy(&mut out, &(a * b), &self.mult[i][j]);
                }
            }
        }
        out
    }

    /// e_i · x
    pub fn mul_left(&self, i: usize, x: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field(), self.dim());
        for (j, b) in x.iter().enumerate() {
            if !b.is_zero() {
                axpy(&mut out, b, &self.mult[i][j]);
            }
        }
        out
    }

    /// x · e_j
    pub fn mul_right(&self, x: &[Scalar], j: usize) -> Vector {
        let mut out = zero_vector(self.field(), self.dim());
        for (i, a) in x.iter().enumerate() {
            if !a.is_zero() {
                axpy(&mut out, a, &self.mult[i][j]);
            }
        }
        out
    }

    pub fn mult_tensor(&self) -> SparseTensor {
        let n = self.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, v) in self.mult[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        entries.push((vec![i, j, k], v.clone()));
                    }
                }
            }
        }
        SparseTensor::from_entries(self.field(), vec![n, n, n], entries).expect("in range")
    }

    /// The basis index of 1_H, when the unit is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.dim()).filter(|&i| !self.unit[i].is_zero()).collect();
        (nz.len() == 1 && self.unit[nz[0]].is_one()).then(|| nz[0])
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(), i)
    }

    pub fn is_cocommutative(&self) -> bool {
        self.coalg.is_cocommutative()
    }

    pub fn label(&self, x: &[Scalar]) -> String {
        self.coalg.label_of(x)
    }

    pub fn without_group(mut self) -> Self {
        self.group = None;
        self
    }

    pub fn with_group(mut self, g: GroupCocycleData) -> Self {
        self.group = Some(g);
        self
    }

    /// ω as a trilinear form on vectors.
    pub fn omega_of(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Scalar {
        self.omega.eval(&[x, y, z])
    }

    pub fn omega_inv_of(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Scalar {
        self.omega_inv.eval(&[x, y, z])
    }

    /// ω(e_i, e_j, x) for a vector third argument.
    pub fn w_vec3(&self, i: usize, j: usize, x: &[Scalar]) -> Scalar {
        dot_fn(x, |k| self.w(i, j, k))
    }

    pub fn winv_vec3(&self, i: usize, j: usize, x: &[Scalar]) -> Scalar {
        dot_fn(x, |k| self.winv(i, j, k))
    }

    pub fn w_vec1(&self, x: &[Scalar], j: usize, k: usize) -> Scalar {
        dot_fn(x, |i| self.w(i, j, k))
    }

    pub fn winv_vec1(&self, x: &[Scalar], j: usize, k: usize) -> Scalar {
        dot_fn(x, |i| self.winv(i, j, k))
    }

    pub fn w_vec2(&self, i: usize, x: &[Scalar], k: usize) -> Scalar {
        dot_fn(x, |j| self.w(i, j, k))
    }

    pub fn winv_vec2(&self, i: usize, x: &[Scalar], k: usize) -> Scalar {
        dot_fn(x, |j| self.winv(i, j, k))
    }
}

pub fn dot_fn<'a>(x: &[Scalar], f: impl Fn(usize) -> &'a Scalar) -> Scalar {
    let mut acc = x.first().map(|s| s.field().zero()).unwrap_or_else(|| Field::Rationals.zero());
    for (k, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let v = f(k);
        if !v.is_zero() {
            acc += &(a * v);
        }
    }
    acc
}

fn check_shapes(c: &Coalgebra, mult: &[Vec<Vector>], unit: &[Scalar], omega: &Functional) -> Result<()> {
    let n = c.dim();
    if mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
        return Err(Error::Shape("multiplication table must be n×n×n".into()));
    }
    if unit.len() != n {
        return Err(Error::Shape("unit must have length n".into()));
    }
    if omega.arity() != 3 || omega.dim() != n {
        return Err(Error::Shape("reassociator must be a trilinear functional on H".into()));
    }
    Ok(())
}

fn lab3(h: &DualQuasiBialgebra, a: usize, b: usize, c: usize) -> String {
    let l = h.labels();
    format!("({},{},{})", l[a], l[b], l[c])
}

pub fn check_dqb(h: &DualQuasiBialgebra) -> Report {
    let mut rep = Report::new("dual quasi-bialgebra axioms");
    rep.absorb("", check_coalgebra(&h.coalg));
    let n = h.dim();
    let f = h.field();
    let l = h.labels().to_vec();
    let s2 = h.coalg.splits(2);
    let s3 = h.coalg.splits(3);

    // m is a coalgebra map
    let mut witness = None;
    'outer: for i in 0..n {
        for j in 0..n {
            let lhs = h.coalg.delta_of(&h.mult[i][j]);
            let mut rhs = zero_vector(f, n * n);
            for (i1, i2, a) in h.coalg.delta(i) {
                for (j1, j2, b) in h.coalg.delta(j) {
                    let ab = a * b;
                    let x = &h.mult[*i1][*j1];
                    let y = &h.mult[*i2][*j2];
                    for (p, xp) in x.iter().enumerate() {
                        if xp.is_zero() {
                            continue;
                        }
                        let c = &ab * xp;
                        for (q, yq) in y.iter().enumerate() {
                            if !yq.is_zero() {
                                rhs[p * n + q] += &(&c * yq);
                            }
                        }
                    }
                }
            }
            if lhs != rhs {
                witness = Some(format!(
                    "at ({},{}): Δ(m) = {} but (m⊗m)Δ = {}",
                    l[i],
                    l[j],
                    h.coalg.label_of_tensor2(&lhs),
                    h.coalg.label_of_tensor2(&rhs)
                ));
                break 'outer;
            }
            let e = h.coalg.eps_of(&h.mult[i][j]);
            if e != h.coalg.eps(i) * h.coalg.eps(j) {
                witness = Some(format!("at ({},{}): ε(m) = {e} but ε⊗ε = {}", l[i], l[j], h.coalg.eps(i) * h.coalg.eps(j)));
                break 'outer;
            }
        }
    }
    rep.record("multiplication is a coalgebra map", witness);

    let du = h.coalg.delta_of(&h.unit);
    let mut uu = zero_vector(f, n * n);
    for p in 0..n {
        for q in 0..n {
            uu[p * n + q] = &h.unit[p] * &h.unit[q];
        }
    }
    let unit_w = if du != uu {
        Some(format!("Δ(1) = {}", h.coalg.label_of_tensor2(&du)))
    } else if !h.coalg.eps_of(&h.unit).is_one() {
        Some(format!("ε(1) = {}", h.coalg.eps_of(&h.unit)))
    } else {
        None
    };
    rep.record("unit is a coalgebra map", unit_w);

    let mut lu = None;
    let mut ru = None;
    for i in 0..n {
        let e = h.basis(i);
        let a = h.mul(&h.unit, &e);
        let b = h.mul(&e, &h.unit);
        if lu.is_none() && a != e {
            lu = Some(format!("1·{} = {}", l[i], h.label(&a)));
        }
        if ru.is_none() && b != e {
            ru = Some(format!("{}·1 = {}", l[i], h.label(&b)));
        }
    }
    rep.record("left unit", lu);
    rep.record("right unit", ru);

    // ω(H⊗H⊗m) ∗ ω(m⊗H⊗H) = (ε⊗ω) ∗ ω(H⊗m⊗H) ∗ (ω⊗ε) on basis 4-tuples
    let mut cocycle = None;
    'c: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut lhs = f.zero();
                    for (a1, a2, ca) in h.coalg.delta(a) {
                        for (b1, b2, cb) in h.coalg.delta(b) {
                            for (c1, c2, cc) in h.coalg.delta(c) {
                                for (d1, d2, cd) in h.coalg.delta(d) {
                                    let x = h.w_vec3(*a1, *b1, &h.mult[*c1][*d1]);
                                    if x.is_zero() {
                                        continue;
                                    }
                                    let y = h.w_vec1(&h.mult[*a2][*b2], *c2, *d2);
                                    if y.is_zero() {
                                        continue;
                                    }
                                    lhs += &(&(&(ca * cb) * &(cc * cd)) * &(&x * &y));
                                }
                            }
                        }
                    }
                    let mut rhs = f.zero();
                    for (aa, ca) in &s2[a] {
                        for (bb, cb) in &s3[b] {
                            for (cc_, ccf) in &s3[c] {
                                for (dd, cd) in &s2[d] {
                                    let x = h.w(bb[0], cc_[0], dd[0]);
                                    if x.is_zero() {
                                        continue;
                                    }
                                    let y = h.w_vec2(aa[0], &h.mult[bb[1]][cc_[1]], dd[1]);
                                    if y.is_zero() {
                                        continue;
                                    }
                                    let z = h.w(aa[1], bb[2], cc_[2]);
                                    rhs += &(&(&(ca * cb) * &(ccf * cd)) * &(&(x * &y) * z));
                                }
                            }
                        }
                    }
                    if lhs != rhs {
                        cocycle = Some(format!(
                            "at ({},{},{},{}): ω(H⊗H⊗m)∗ω(m⊗H⊗H) = {lhs} but (ε⊗ω)∗ω(H⊗m⊗H)∗(ω⊗ε) = {rhs}",
                            l[a], l[b], l[c], l[d]
                        ));
                        break 'c;
                    }
                }
            }
        }
    }
    rep.record("3-cocycle", cocycle);

    // ω(h,k,l) = ε(h)ε(k)ε(l) when one argument is 1
    let mut unital = None;
    'u: for a in 0..n {
        for b in 0..n {
            let ea = h.basis(a);
            let eb = h.basis(b);
            let want = h.coalg.eps(a) * h.coalg.eps(b);
            let cases = [
                (h.omega_of(&h.unit, &ea, &eb), format!("(1,{},{})", l[a], l[b])),
                (h.omega_of(&ea, &h.unit, &eb), format!("({},1,{})", l[a], l[b])),
                (h.omega_of(&ea, &eb, &h.unit), format!("({},{},1)", l[a], l[b])),
            ];
            for (got, at) in cases {
                if got != want {
                    unital = Some(format!("ω{at} = {got} but ε⊗ε⊗ε = {want}"));
                    break 'u;
                }
            }
        }
    }
    rep.record("quasi-unitarity of ω", unital);

    // x₁(y₁z₁)ω(x₂,y₂,z₂) = ω(x₁,y₁,z₁)(x₂y₂)z₂
    let mut qa = None;
    'q: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut lhs = zero_vector(f, n);
                let mut rhs = zero_vector(f, n);
                for (a1, a2, ca) in h.coalg.delta(a) {
                    for (b1, b2, cb) in h.coalg.delta(b) {
                        for (c1, c2, cc) in h.coalg.delta(c) {
                            let coef = &(ca * cb) * cc;
                            let w2 = h.w(*a2, *b2, *c2);
                            if !w2.is_zero() {
                                let v = h.mul_left(*a1, &h.mult[*b1][*c1]);
                                axpy(&mut lhs, &(&coef * w2), &v);
                            }
                            let w1 = h.w(*a1, *b1, *c1);
                            if !w1.is_zero() {
                                let v = h.mul_right(&h.mult[*a2][*b2], *c2);
                                axpy(&mut rhs, &(&coef * w1), &v);
                            }
                        }
                    }
                }
                if lhs != rhs {
                    qa = Some(format!(
                        "at {}: m(H⊗m)∗ω = {} but ω∗m(m⊗H) = {}",
                        lab3(h, a, b, c),
                        h.label(&lhs),
                        h.label(&rhs)
                    ));
                    break 'q;
                }
            }
        }
    }
    rep.record("quasi-associativity", qa);

    let e = Functional::counit_power(&h.coalg, 3);
    let inv_ok = convolve(&h.coalg, &h.omega, &h.omega_inv).is_ok_and(|x| x == e)
        && convolve(&h.coalg, &h.omega_inv, &h.omega).is_ok_and(|x| x == e);
    rep.record(
        "ω⁻¹ is the convolution inverse of ω",
        (!inv_ok).then(|| "ω∗ω⁻¹ or ω⁻¹∗ω differs from ε⊗ε⊗ε".to_string()),
    );
    rep
}

/// Checks that `f` (target.dim × source.dim) is a morphism of dual quasi-bialgebras.
pub fn check_dqb_morphism(f: &Matrix, src: &DualQuasiBialgebra, tgt: &DualQuasiBialgebra) -> Report {
    let mut rep = Report::new("dual quasi-bialgebra morphism");
    let n = src.dim();
    let m = tgt.dim();
    if f.rows() != m || f.cols() != n {
        rep.fail("shape", format!("matrix is {}x{}, expected {m}x{n}", f.rows(), f.cols()));
        return rep;
    }
    let fld = src.field();
    let img: Vec<Vector> = (0..n).map(|i| f.col(i)).collect();
    let ls = src.labels();

    let mut coalg = None;
    for i in 0..n {
        let lhs = tgt.coalg.delta_of(&img[i]);
        let mut rhs = zero_vector(fld, m * m);
        for (j, k, c) in src.coalg.delta(i) {
            for (p, x) in img[*j].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (q, y) in img[*k].iter().enumerate() {
                    if !y.is_zero() {
                        rhs[p * m + q] += &(&(c * x) * y);
                    }
                }
            }
        }
        if lhs != rhs {
            coalg = Some(format!(
                "at {}: Δ'(f) = {} but (f⊗f)Δ = {}",
                ls[i],
                tgt.coalg.label_of_tensor2(&lhs),
                tgt.coalg.label_of_tensor2(&rhs)
            ));
            break;
        }
        if tgt.coalg.eps_of(&img[i]) != *src.coalg.eps(i) {
            coalg = Some(format!("at {}: ε'(f) = {} but ε = {}", ls[i], tgt.coalg.eps_of(&img[i]), src.coalg.eps(i)));
            break;
        }
    }
    rep.record("coalgebra map", coalg);

    let mut mult = None;
    'm: for i in 0..n {
        for j in 0..n {
            let lhs = tgt.mul(&img[i], &img[j]);
            let rhs = f.apply(&src.mult[i][j]);
            if lhs != rhs {
                mult = Some(format!("at ({},{}): f(x)f(y) = {} but f(xy) = {}", ls[i], ls[j], tgt.label(&lhs), tgt.label(&rhs)));
                break 'm;
            }
        }
    }
    rep.record("multiplicative", mult);

    let fu = f.apply(&src.unit);
    rep.record("unital", (fu != tgt.unit).then(|| format!("f(1) = {}", tgt.label(&fu))));

    let mut om = None;
    'o: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = tgt.omega_of(&img[i], &img[j], &img[k]);
                let rhs = src.w(i, j, k);
                if &lhs != rhs {
                    om = Some(format!("at {}: ω'(f⊗f⊗f) = {lhs} but ω = {rhs}", lab3(src, i, j, k)));
                    break 'o;
                }
            }
        }
    }
    rep.record("reassociator compatible", om);
    rep
}

/// A finite monoid with a normalized 3-cocycle θ: G×G×G → k^×.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCocycleData {
    pub labels: Vec<String>,
    /// mul[a][b] = index of ab
    pub mul: Vec<Vec<usize>>,
    /// θ(a,b,c) stored at (a·n + b)·n + c
    pub theta: Vec<Scalar>,
}

impl GroupCocycleData {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Field {
        self.theta[0].field()
    }

    pub fn theta(&self, a: usize, b: usize, c: usize) -> &Scalar {
        let n = self.order();
        &self.theta[(a * n + b) * n + c]
    }

    pub fn identity(&self) -> Option<usize> {
        let n = self.order();
        (0..n).find(|&e| (0..n).all(|a| self.mul[e][a] == a && self.mul[a][e] == a))
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        let e = self.identity()?;
        (0..self.order()).find(|&b| self.mul[a][b] == e && self.mul[b][a] == e)
    }

    pub fn is_group(&self) -> bool {
        (0..self.order()).all(|a| self.inverse(a).is_some())
    }

    /// Cyclic group Z_n with θ(a,b,c) = ζ^{power·a·⌊(b+c)/n⌋} for the first primitive
    /// n-th root of unity ζ of the field; error if the field has none.
    pub fn cyclic(n: usize, power: u64, field: Field) -> Result<GroupCocycleData> {
        let zeta = field
            .primitive_roots_of_unity(n as u64)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Field(format!("{field} has no primitive {n}-th root of unity")))?;
        let labels = cyclic_labels(n);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut theta = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    theta.push(zeta.pow(power * (a * ((b + c) / n)) as u64));
                }
            }
        }
        let d = GroupCocycleData { labels, mul, theta };
        d.validate()?;
        Ok(d)
    }

    pub fn trivial(labels: Vec<String>, mul: Vec<Vec<usize>>, field: Field) -> GroupCocycleData {
        let n = labels.len();
        GroupCocycleData { labels, mul, theta: vec![field.one(); n * n * n] }
    }

    /// Multiplies θ by the coboundary of a normalized 2-cochain φ:
    /// θ'(a,b,c) = θ(a,b,c)·φ(b,c)φ(a,bc)/(φ(ab,c)φ(a,b)).
    pub fn perturb(&self, phi: &[Scalar]) -> GroupCocycleData {
        let n = self.order();
        let p = |a: usize, b: usize| &phi[a * n + b];
        let mut theta = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let num = &(p(b, c) * p(a, self.mul[b][c])) * self.theta(a, b, c);
                    let den = p(self.mul[a][b], c) * p(a, b);
                    theta.push(&num / &den);
                }
            }
        }
        GroupCocycleData { labels: self.labels.clone(), mul: self.mul.clone(), theta }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        if n == 0 || self.mul.len() != n || self.mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Invalid("multiplication table must be n×n with entries < n".into()));
        }
        if self.theta.len() != n * n * n {
            return Err(Error::Invalid("θ table must have n³ entries".into()));
        }
        let l = &self.labels;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Err(Error::Invalid(format!("table not associative at ({},{},{})", l[a], l[b], l[c])));
                    }
                }
            }
        }
        let e = self.identity().ok_or_else(|| Error::Invalid("table has no identity".into()))?;
        if let Some(k) = self.theta.iter().position(Scalar::is_zero) {
            return Err(Error::Invalid(format!("θ vanishes at index {k}")));
        }
        for a in 0..n {
            for b in 0..n {
                if !self.theta(a, e, b).is_one() {
                    return Err(Error::Invalid(format!("θ not normalized: θ({},1,{}) ≠ 1", l[a], l[b])));
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let lhs = &(self.theta(h, k, m) * self.theta(g, self.mul[h][k], m)) * self.theta(g, h, k);
                        let rhs = self.theta(g, h, self.mul[k][m]) * self.theta(self.mul[g][h], k, m);
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "3-cocycle identity fails at ({},{},{},{})",
                                l[g], l[h], l[k], l[m]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn cyclic_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|a| match a {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{a}"),
        })
        .collect()
}

/// k^θG: grouplike basis, product from the table, ω = θ.
pub fn from_group_cocycle(d: &GroupCocycleData) -> Result<DualQuasiBialgebra> {
    d.validate()?;
    let n = d.order();
    let f = d.field();
    let coalg = Coalgebra::grouplike(f, d.labels.clone());
    let mult = (0..n).map(|a| (0..n).map(|b| unit_vector(f, n, d.mul[a][b])).collect()).collect();
    let unit = unit_vector(f, n, d.identity().expect("validated"));
    let omega = Functional::new(n, 3, d.theta.clone())?;
    let inv = Functional::new(n, 3, d.theta.iter().map(|t| t.inv().expect("nonzero")).collect())?;
    Ok(DualQuasiBialgebra::with_inverse(coalg, mult, unit, omega, inv)?.with_group(d.clone()))
}

/// Restriction to a subspace closed under Δ and m and containing 1, in the given basis.
pub fn sub_dqb(h: &DualQuasiBialgebra, basis: &[Vector], labels: Option<Vec<String>>) -> Result<DualQuasiBialgebra> {
    let f = h.field();
    let n = h.dim();
    let k = basis.len();
    let p = Matrix::from_columns(f, n, basis);
    let sub = Subspace::span(f, n, basis);
    if sub.dim() != k {
        return Err(Error::Invalid("sub-basis is linearly dependent".into()));
    }
    // coordinates w.r.t. the given basis: solve P c = v
    let coords = |v: &[Scalar]| -> Result<Vector> {
        crate::linalg::solve_linear(&p, v)?
            .filter(|c| p.apply(c) == v)
            .ok_or_else(|| Error::Precondition(format!("{} leaves the subspace", h.label(v))))
    };
    let mut delta = Vec::with_capacity(k);
    let mut counit = Vec::with_capacity(k);
    for b in basis {
        let d = h.coalg.delta_of(b);
        // Δ(b) = Σ c_{ij} b_i⊗b_j: solve (P⊗P)c = d
        let pp = p.kron(&p);
        let c = crate::linalg::solve_linear(&pp, &d)?
            .filter(|c| pp.apply(c) == d)
            .ok_or_else(|| Error::Precondition(format!("Δ({}) leaves the subspace", h.label(b))))?;
        let mut terms = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if !c[i * k + j].is_zero() {
                    terms.push((i, j, c[i * k + j].clone()));
                }
            }
        }
        delta.push(terms);
        counit.push(h.coalg.eps_of(b));
    }
    let labels = labels.unwrap_or_else(|| basis.iter().map(|b| rep_label(&h.coalg, b)).collect());
    let coalg = Coalgebra::from_terms(f, labels, delta, counit)?;
    let mut mult = vec![vec![Vec::new(); k]; k];
    for i in 0..k {
        for j in 0..k {
            mult[i][j] = coords(&h.mul(&basis[i], &basis[j]))?;
        }
    }
    let unit = coords(&h.unit)?;
    let omega = Functional::from_fn(k, 3, |idx| h.omega_of(&basis[idx[0]], &basis[idx[1]], &basis[idx[2]]));
    let omega_inv = Functional::from_fn(k, 3, |idx| h.omega_inv_of(&basis[idx[0]], &basis[idx[1]], &basis[idx[2]]));
    DualQuasiBialgebra::with_inverse(coalg, mult, unit, omega, omega_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_pass() {
        for h in [fixtures::fix1(), fixtures::fix2(), fixtures::fix3(), fixtures::fix5()] {
            let r = check_dqb(&h);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn unnormalized_omega_is_rejected() {
        let h = fixtures::fix2();
        let f = h.field();
        // ω(g,g,1) = -1 breaks quasi-unitarity and the cocycle identity
        let mut bad = h.omega().values().to_vec();
        bad[(2 + 1) * 2] = f.int(-1);
        let hb = DualQuasiBialgebra::new(
            h.coalgebra().clone(),
            (0..2).map(|i| (0..2).map(|j| h.mul_basis(i, j).clone()).collect()).collect(),
            h.unit().clone(),
            Functional::new(2, 3, bad).unwrap(),
        )
        .unwrap();
        let r = check_dqb(&hb);
        assert_eq!(r.status_of("quasi-unitarity of ω"), Some(&crate::report::Status::Fail));
        assert!(r.witness_of("quasi-unitarity of ω").unwrap().contains("(g,g,1)"));
        assert_eq!(r.status_of("3-cocycle"), Some(&crate::report::Status::Fail));
        assert!(r.witness_of("3-cocycle").unwrap().starts_with("at (g,g,1,1)"));
    }

    #[test]
    fn flipping_the_sign_entry_gives_the_trivial_cocycle() {
        // ω(g,g,g) is the only non-unit value of FIX2; setting it to +1 yields FIX1
        let h = fixtures::fix2();
        let f = h.field();
        let mut vals = h.omega().values().to_vec();
        vals[7] = f.one();
        let flipped = DualQuasiBialgebra::new(
            h.coalgebra().clone(),
            (0..2).map(|i| (0..2).map(|j| h.mul_basis(i, j).clone()).collect()).collect(),
            h.unit().clone(),
            Functional::new(2, 3, vals).unwrap(),
        )
        .unwrap();
        assert!(check_dqb(&flipped).passed());
        assert_eq!(flipped, fixtures::fix1().without_group());
    }

    #[test]
    fn cocommutativity() {
        assert!(fixtures::fix1().is_cocommutative());
        assert!(fixtures::fix2().is_cocommutative());
        assert!(!fixtures::fix3().is_cocommutative());
    }

    #[test]
    fn cyclic_cocycles() {
        assert!(GroupCocycleData::cyclic(3, 1, Field::Rationals).is_err());
        let f7 = Field::prime(7).unwrap();
        let z3 = GroupCocycleData::cyclic(3, 1, f7).unwrap();
        assert!(check_dqb(&from_group_cocycle(&z3).unwrap()).passed());
        let z2 = GroupCocycleData::cyclic(2, 1, Field::Rationals).unwrap();
        assert_eq!(from_group_cocycle(&z2).unwrap(), fixtures::fix2());
    }

    #[test]
    fn morphisms() {
        let h = fixtures::fix2();
        let id = Matrix::identity(h.field(), 2);
        assert!(check_dqb_morphism(&id, &h, &h).passed());
        // g ↦ 1
        let f = h.field();
        let collapse = Matrix::from_columns(f, 2, &[vec![f.one(), f.zero()], vec![f.one(), f.zero()]]);
        let r = check_dqb_morphism(&collapse, &h, &h);
        assert_eq!(r.status_of("reassociator compatible"), Some(&crate::report::Status::Fail));
        assert_eq!(r.status_of("coalgebra map"), Some(&crate::report::Status::Pass));
    }
}
