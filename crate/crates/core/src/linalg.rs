//! Dense matrices, exact RREF on sparse rows, solving, kernels, subspaces and quotients.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;

/// Sorted by column, no stored zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, rows: &[Vector]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { field, rows: rows.len(), cols, data: rows.concat() })
    }

    /// Columns are the images of the source basis vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Panics on shape mismatch; use `try_mul` at API boundaries.
    pub fn mul(&self, o: &Matrix) -> Matrix {
        self.try_mul(o).expect("matrix shapes")
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut out = vec![self.field.zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Kronecker product; row index (i1, i2) flattens to i1 * rows(b) + i2.
    pub fn kron(&self, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows * b.rows, self.cols * b.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..b.rows {
                    for j2 in 0..b.cols {
                        let c = b.get(i2, j2);
                        if !c.is_zero() {
                            out.set(i1 * b.rows + i2, j1 * b.cols + j2, a * c);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn sparse_rows(&self) -> Vec<SparseRow> {
        (0..self.rows).map(|i| to_sparse(self.row(i))).collect()
    }

    pub fn rank(&self) -> usize {
        rref(self.field, self.sparse_rows()).rank()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let rows = (0..n)
            .map(|i| {
                let mut r = to_sparse(self.row(i));
                r.push((n + i, self.field.one()));
                r
            })
            .collect();
        let red = rref(self.field, rows);
        if red.pivots.len() != n || red.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for (i, row) in red.rows.iter().enumerate() {
            for (c, v) in row {
                if *c >= n {
                    inv.set(i, c - n, v.clone());
                }
            }
        }
        Some(inv)
    }

    /// First entry where the two matrices differ.
    pub fn first_difference(&self, o: &Matrix) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != o.get(i, j))
    }
}

pub fn to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(field: Field, row: &SparseRow, len: usize) -> Vector {
    let mut v = vec![field.zero(); len];
    for (i, x) in row {
        v[*i] = x.clone();
    }
    v
}

pub fn zero_vector(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// acc += c * x
pub fn axpy(acc: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a += &(c * b);
        }
    }
}

/// a - c * b on sorted sparse rows.
fn sparse_sub_scaled(a: &SparseRow, c: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &SparseRow, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// Reduced row echelon form: rows sorted by pivot column, pivots equal to 1,
/// pivot columns zero in every other row. Unique for a given row space.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<SparseRow>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(_field: Field, input: Vec<SparseRow>) -> Rref {
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut where_: HashMap<usize, usize> = HashMap::new();
    for mut r in input {
        let hits: Vec<(usize, Scalar)> =
            r.iter().filter(|(c, _)| where_.contains_key(c)).cloned().collect();
        for (c, v) in hits {
            r = sparse_sub_scaled(&r, &v, &rows[where_[&c]]);
        }
        let Some((pc, lead)) = r.first().cloned() else { continue };
        let inv = lead.inv().expect("nonzero lead");
        for e in r.iter_mut() {
            e.1 = &e.1 * &inv;
        }
        for other in rows.iter_mut() {
            if let Some(v) = entry(other, pc).cloned() {
                *other = sparse_sub_scaled(other, &v, &r);
            }
        }
        where_.insert(pc, rows.len());
        rows.push(r);
        pivots.push(pc);
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    Rref {
        rows: order.iter().map(|&i| rows[i].clone()).collect(),
        pivots: order.iter().map(|&i| pivots[i]).collect(),
    }
}

/// Some x with A·x = b, free variables pinned to zero; None if inconsistent.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != a.rows {
        return Err(Error::Shape(format!("matrix has {} rows, rhs has {}", a.rows, b.len())));
    }
    let n = a.cols;
    let rows = (0..a.rows)
        .map(|i| {
            let mut r = to_sparse(a.row(i));
            if !b[i].is_zero() {
                r.push((n, b[i].clone()));
            }
            r
        })
        .collect();
    Ok(solve_sparse(a.field, rows, n))
}

/// Same as `solve_linear` for rows already in sparse form, with the right-hand
/// side stored in column `n`.
pub fn solve_sparse(field: Field, augmented: Vec<SparseRow>, n: usize) -> Option<Vector> {
    solve_sparse_ranked(field, augmented, n).map(|(x, _)| x)
}

/// Also returns the rank of the coefficient part, so the solution space has
/// dimension n − rank.
pub fn solve_sparse_ranked(field: Field, augmented: Vec<SparseRow>, n: usize) -> Option<(Vector, usize)> {
    let red = rref(field, augmented);
    if red.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = zero_vector(field, n);
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        if let Some(v) = entry(row, n) {
            x[p] = v.clone();
        }
    }
    Some((x, red.rank()))
}

/// Basis of {x : A·x = 0}, returned in reduced row echelon form.
pub fn kernel_basis(a: &Matrix) -> Vec<Vector> {
    kernel_of_rows(a.field, a.sparse_rows(), a.cols)
}

pub fn kernel_of_rows(field: Field, rows: Vec<SparseRow>, n: usize) -> Vec<Vector> {
    let red = rref(field, rows);
    let pivot_set: std::collections::HashSet<usize> = red.pivots.iter().copied().collect();
    let mut raw = Vec::new();
    for f in (0..n).filter(|c| !pivot_set.contains(c)) {
        let mut x: SparseRow = vec![(f, field.one())];
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            if let Some(v) = entry(row, f) {
                x.push((p, -v));
            }
        }
        x.sort_by_key(|e| e.0);
        raw.push(x);
    }
    rref(field, raw).rows.iter().map(|r| to_dense(field, r, n)).collect()
}

/// Basis of {X (rows×cols) : op(X) = 0} for a linear `op`, found by probing
/// the unit matrices; unknown (i, j) has index i·cols + j.
pub fn kernel_of_linear_map(field: Field, rows: usize, cols: usize, op: impl Fn(&Matrix) -> Matrix) -> Vec<Matrix> {
    let nvar = rows * cols;
    let images: Vec<Matrix> = (0..nvar)
        .map(|v| {
            let mut e = Matrix::zeros(field, rows, cols);
            e.set(v / cols, v % cols, field.one());
            op(&e)
        })
        .collect();
    let Some(first) = images.first() else { return Vec::new() };
    let (r, c) = (first.rows, first.cols);
    let mut eqs: Vec<SparseRow> = vec![Vec::new(); r * c];
    for (v, img) in images.iter().enumerate() {
        for i in 0..r {
            for j in 0..c {
                let x = img.get(i, j);
                if !x.is_zero() {
                    eqs[i * c + j].push((v, x.clone()));
                }
            }
        }
    }
    eqs.retain(|e| !e.is_empty());
    kernel_of_rows(field, eqs, nvar)
        .into_iter()
        .map(|k| Matrix::from_fn(field, rows, cols, |i, j| k[i * cols + j].clone()))
        .collect()
}

/// A subspace of k^ambient with a canonical (RREF) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Subspace {
        let red = rref(field, vectors.iter().map(|v| to_sparse(v)).collect());
        Subspace {
            field,
            ambient,
            basis: red.rows.iter().map(|r| to_dense(field, r, ambient)).collect(),
            pivots: red.pivots,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: vec![], pivots: vec![] }
    }

    pub fn whole(field: Field, ambient: usize) -> Subspace {
        let basis: Vec<Vector> = (0..ambient).map(|i| unit_vector(field, ambient, i)).collect();
        Subspace { field, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn kernel(a: &Matrix) -> Subspace {
        Subspace::span(a.field, a.cols, &kernel_basis(a))
    }

    pub fn image(a: &Matrix) -> Subspace {
        let cols: Vec<Vector> = (0..a.cols).map(|j| a.col(j)).collect();
        Subspace::span(a.field, a.rows, &cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates in the stored basis; None if v is not in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient);
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = zero_vector(self.field, self.ambient);
        for (ci, b) in c.iter().zip(&self.basis) {
            axpy(&mut rebuilt, ci, b);
        }
        (rebuilt.as_slice() == v).then_some(c)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_space(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    /// ambient × dim matrix whose columns are the basis vectors.
    pub fn inclusion(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.basis)
    }

    /// Matrix of `map` restricted to this subspace, in coordinates of `target`.
    pub fn restrict(&self, map: &Matrix, target: &Subspace) -> Result<Matrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let img = map.apply(b);
            cols.push(
                target
                    .coords(&img)
                    .ok_or_else(|| Error::Invalid("map does not land in target subspace".into()))?,
            );
        }
        Ok(Matrix::from_columns(self.field, target.dim(), &cols))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &all)
    }

    /// Rows spanning the annihilator; x ∈ self iff every row kills x.
    pub fn annihilator(&self) -> Vec<Vector> {
        kernel_of_rows(self.field, self.basis.iter().map(|b| to_sparse(b)).collect(), self.ambient)
    }

    /// Basis vectors of `self` completing `inner` (which must be contained in it):
    /// those of an echelon basis of self whose pivots are not pivots of inner.
    pub fn complement_of(&self, inner: &Subspace) -> Vec<Vector> {
        let mut rows: Vec<SparseRow> = inner.basis.iter().map(|b| to_sparse(b)).collect();
        let base = rows.len();
        rows.extend(self.basis.iter().map(|b| to_sparse(b)));
        let mut kept = Vec::new();
        let mut acc = rref(self.field, rows[..base].to_vec());
        for r in &rows[base..] {
            let mut trial = acc.rows.clone();
            trial.push(r.clone());
            let next = rref(self.field, trial);
            if next.rank() > acc.rank() {
                kept.push(to_dense(self.field, r, self.ambient));
                acc = next;
            }
        }
        kept
    }
}

/// k^ambient modulo a subspace, with the echelon-complement section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub kernel: Subspace,
    /// dim × ambient
    pub proj: Matrix,
    /// ambient × dim
    pub section: Matrix,
}

impl Quotient {
    pub fn by(kernel: Subspace) -> Quotient {
        let field = kernel.field;
        let n = kernel.ambient;
        let pivot_set: std::collections::HashSet<usize> = kernel.pivots.iter().copied().collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut proj = Matrix::zeros(field, free.len(), n);
        let mut section = Matrix::zeros(field, n, free.len());
        for (i, &c) in free.iter().enumerate() {
            proj.set(i, c, field.one());
            section.set(c, i, field.one());
        }
        for (b, &p) in kernel.basis.iter().zip(&kernel.pivots) {
            for (c, v) in b.iter().enumerate() {
                if let Some(&i) = pos.get(&c) {
                    if !v.is_zero() {
                        proj.set(i, p, -v);
                    }
                }
            }
        }
        Quotient { kernel, proj, section }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rationals.int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Matrix::from_rows(Field::Rationals, &rows).unwrap()
    }

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(Field::Rationals, 2);
        assert_eq!(solve_linear(&a, &[q(1), q(2)]).unwrap(), Some(vec![q(1), q(2)]));
    }

    #[test]
    fn solve_inconsistent() {
        assert_eq!(solve_linear(&mat(&[&[1, 1], &[2, 2]]), &[q(1), q(3)]).unwrap(), None);
    }

    #[test]
    fn solve_pins_free_variables() {
        assert_eq!(solve_linear(&mat(&[&[1, 1]]), &[q(1)]).unwrap(), Some(vec![q(1), q(0)]));
    }

    #[test]
    fn solve_shape_error() {
        assert!(solve_linear(&mat(&[&[1, 1]]), &[q(1), q(1)]).is_err());
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&Matrix::identity(Field::Rationals, 3)).is_empty());
        let z = kernel_basis(&Matrix::zeros(Field::Rationals, 2, 2));
        assert_eq!(z, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert_eq!(kernel_basis(&mat(&[&[1, 1]])), vec![vec![q(1), q(-1)]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = mat(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(mat(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn quotient_section() {
        let k = Subspace::span(Field::Rationals, 3, &[vec![q(1), q(1), q(0)]]);
        let quo = Quotient::by(k);
        assert_eq!(quo.dim(), 2);
        assert!(quo.proj.mul(&quo.section).is_identity());
        assert!(is_zero_vector(&quo.proj.apply(&[q(1), q(1), q(0)])));
    }

    #[test]
    fn subspace_coords() {
        let s = Subspace::span(Field::Rationals, 3, &[vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]]);
        let v = vec![q(2), q(5), q(7)];
        let c = s.coords(&v).unwrap();
        assert_eq!(s.inclusion().apply(&c), v);
        assert!(!s.contains(&[q(0), q(0), q(1)]));
    }
}
