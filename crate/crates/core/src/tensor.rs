//! Multi-index tensors with sparse or dense storage and pairwise contraction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    Sparse(BTreeMap<Vec<usize>, Scalar>),
    Dense(Vec<Scalar>),
}

/// Zero entries are never stored in sparse mode. Storage switches to dense
/// when more than half of the entries are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTensor {
    field: Field,
    shape: Vec<usize>,
    storage: Storage,
}

fn flat(shape: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}

fn unflat(shape: &[usize], mut k: usize) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for a in (0..shape.len()).rev() {
        idx[a] = k % shape[a];
        k /= shape[a];
    }
    idx
}

impl SparseTensor {
    pub fn zeros(field: Field, shape: Vec<usize>) -> SparseTensor {
        SparseTensor { field, shape, storage: Storage::Sparse(BTreeMap::new()) }
    }

    pub fn from_entries(
        field: Field,
        shape: Vec<usize>,
        entries: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Result<SparseTensor> {
        let mut map: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (idx, v) in entries {
            if idx.len() != shape.len() || idx.iter().zip(&shape).any(|(i, n)| i >= n) {
                return Err(Error::Shape(format!("index {idx:?} outside shape {shape:?}")));
            }
            let slot = map.entry(idx).or_insert_with(|| field.zero());
            *slot += &v;
        }
        map.retain(|_, v| !v.is_zero());
        let mut t = SparseTensor { field, shape, storage: Storage::Sparse(map) };
        t.rebalance();
        Ok(t)
    }

    /// Dense values in row-major order over `shape`.
    pub fn from_dense(field: Field, shape: Vec<usize>, values: Vec<Scalar>) -> Result<SparseTensor> {
        let total: usize = shape.iter().product();
        if values.len() != total {
            return Err(Error::Shape(format!("{} values for shape {shape:?}", values.len())));
        }
        let mut t = SparseTensor { field, shape, storage: Storage::Dense(values) };
        t.rebalance();
        Ok(t)
    }

    fn total(&self) -> usize {
        self.shape.iter().product()
    }

    fn rebalance(&mut self) {
        let total = self.total();
        let nnz = self.nnz();
        let want_dense = total > 0 && 2 * nnz > total;
        match (&self.storage, want_dense) {
            (Storage::Sparse(m), true) => {
                let mut d = vec![self.field.zero(); total];
                for (k, v) in m {
                    d[flat(&self.shape, k)] = v.clone();
                }
                self.storage = Storage::Dense(d);
            }
            (Storage::Dense(d), false) => {
                let m = d
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (unflat(&self.shape, k), v.clone()))
                    .collect();
                self.storage = Storage::Sparse(m);
            }
            _ => {}
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Sparse(m) => m.len(),
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
        }
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        match &self.storage {
            Storage::Sparse(m) => m.get(idx).cloned().unwrap_or_else(|| self.field.zero()),
            Storage::Dense(d) => d[flat(&self.shape, idx)].clone(),
        }
    }

    /// Nonzero entries in lexicographic index order.
    pub fn nonzeros(&self) -> Vec<(Vec<usize>, Scalar)> {
        match &self.storage {
            Storage::Sparse(m) => m.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Storage::Dense(d) => d
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (unflat(&self.shape, k), v.clone()))
                .collect(),
        }
    }

    pub fn add(&self, o: &SparseTensor) -> Result<SparseTensor> {
        if self.shape != o.shape {
            return Err(Error::Shape("tensor sum of different shapes".into()));
        }
        SparseTensor::from_entries(self.field, self.shape.clone(), self.nonzeros().into_iter().chain(o.nonzeros()))
    }

    /// Sums over each pair (axis of self, axis of other); output axes are the
    /// unpaired axes of self followed by the unpaired axes of other.
    pub fn contract(&self, o: &SparseTensor, pairs: &[(usize, usize)]) -> Result<SparseTensor> {
        for &(a, b) in pairs {
            if a >= self.shape.len() || b >= o.shape.len() {
                return Err(Error::Shape(format!("axis pair ({a},{b}) out of range")));
            }
            if self.shape[a] != o.shape[b] {
                return Err(Error::Shape(format!(
                    "axis {a} has dim {} but axis {b} has dim {}",
                    self.shape[a], o.shape[b]
                )));
            }
        }
        let left_free: Vec<usize> = (0..self.shape.len()).filter(|a| !pairs.iter().any(|p| p.0 == *a)).collect();
        let right_free: Vec<usize> = (0..o.shape.len()).filter(|b| !pairs.iter().any(|p| p.1 == *b)).collect();
        let mut shape: Vec<usize> = left_free.iter().map(|&a| self.shape[a]).collect();
        shape.extend(right_free.iter().map(|&b| o.shape[b]));

        let mut by_key: BTreeMap<Vec<usize>, Vec<(Vec<usize>, Scalar)>> = BTreeMap::new();
        for (idx, v) in o.nonzeros() {
            let key: Vec<usize> = pairs.iter().map(|p| idx[p.1]).collect();
            let rest: Vec<usize> = right_free.iter().map(|&b| idx[b]).collect();
            by_key.entry(key).or_default().push((rest, v));
        }
        let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (idx, v) in self.nonzeros() {
            let key: Vec<usize> = pairs.iter().map(|p| idx[p.0]).collect();
            let Some(partners) = by_key.get(&key) else { continue };
            let head: Vec<usize> = left_free.iter().map(|&a| idx[a]).collect();
            for (rest, w) in partners {
                let mut k = head.clone();
                k.extend(rest);
                let slot = out.entry(k).or_insert_with(|| self.field.zero());
                *slot += &(&v * w);
            }
        }
        SparseTensor::from_entries(self.field, shape, out)
    }

    /// Reorders axes: output axis i is input axis perm[i].
    pub fn permute(&self, perm: &[usize]) -> Result<SparseTensor> {
        if perm.len() != self.shape.len() {
            return Err(Error::Shape("permutation length".into()));
        }
        let shape = perm.iter().map(|&a| self.shape[a]).collect();
        SparseTensor::from_entries(
            self.field,
            shape,
            self.nonzeros().into_iter().map(|(idx, v)| (perm.iter().map(|&a| idx[a]).collect(), v)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rationals.int(n)
    }

    fn identity(n: usize) -> SparseTensor {
        SparseTensor::from_entries(Field::Rationals, vec![n, n], (0..n).map(|i| (vec![i, i], q(1)))).unwrap()
    }

    #[test]
    fn identity_contracts_to_vector() {
        let v = SparseTensor::from_entries(Field::Rationals, vec![3], vec![(vec![0], q(2)), (vec![2], q(5))]).unwrap();
        assert_eq!(identity(3).contract(&v, &[(1, 0)]).unwrap(), v);
    }

    #[test]
    fn counit_axiom_on_kz2() {
        let delta = SparseTensor::from_entries(
            Field::Rationals,
            vec![2, 2, 2],
            vec![(vec![0, 0, 0], q(1)), (vec![1, 1, 1], q(1))],
        )
        .unwrap();
        let eps = SparseTensor::from_entries(Field::Rationals, vec![2], vec![(vec![0], q(1)), (vec![1], q(1))]).unwrap();
        assert_eq!(delta.contract(&eps, &[(2, 0)]).unwrap(), identity(2));
        assert_eq!(delta.contract(&eps, &[(1, 0)]).unwrap(), identity(2));
    }

    #[test]
    fn kz2_multiplication_associative_by_contraction() {
        // m[i][j][k]: e_i e_j = e_k with k = i + j mod 2
        let m = SparseTensor::from_entries(
            Field::Rationals,
            vec![2, 2, 2],
            (0..2).flat_map(|i| (0..2).map(move |j| (vec![i, j, (i + j) % 2], q(1)))),
        )
        .unwrap();
        // (e_a e_b) e_c : contract output of first with left input of second -> [a, b, c, out]
        let left = m.contract(&m, &[(2, 0)]).unwrap();
        // e_a (e_b e_c): [b, c, t] with m[a, t, out] -> [b, c, a, out] then reorder
        let right = m.contract(&m, &[(2, 1)]).unwrap().permute(&[2, 0, 1, 3]).unwrap();
        assert_eq!(left, right);
        // oracle: brute force over the 2^3 triples
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let out = (a + b + c) % 2;
                    assert_eq!(left.get(&[a, b, c, out]), q(1));
                }
            }
        }
    }

    #[test]
    fn dense_fallback() {
        let t = SparseTensor::from_dense(Field::Rationals, vec![2, 2], vec![q(1), q(1), q(1), q(0)]).unwrap();
        assert!(t.is_dense());
        let s = SparseTensor::from_dense(Field::Rationals, vec![2, 2], vec![q(1), q(0), q(0), q(0)]).unwrap();
        assert!(!s.is_dense());
        assert_eq!(t.get(&[1, 1]), q(0));
    }

    #[test]
    fn axis_mismatch_is_error() {
        assert!(identity(2).contract(&identity(3), &[(0, 0)]).is_err());
    }
}
