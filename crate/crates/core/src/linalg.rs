//! Dense exact linear algebra over `F_p`.
//!
//! Matrices are row-major with entries kept reduced. Vectors are plain
//! `Vec<u32>` residues. Elimination pivots on the first nonzero entry, so every
//! result is deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// Number of products of two residues that can be summed in a `u64` before reducing.
fn lazy_chunk(field: &PrimeField) -> usize {
    let m = (field.modulus() as u64 - 1).max(1);
    ((u64::MAX / (m * m)) as usize).clamp(1, 1 << 20)
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds from residues; entries are reduced mod p.
    pub fn from_entries(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: Vec<u32>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let p = field.modulus();
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::from_entries(field, rows.len(), cols, entries)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, dim: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(field, dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
            for (i, &v) in c.iter().enumerate() {
                m.entries[i * m.cols + j] = v % field.modulus();
            }
        }
        Ok(m)
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = field.reduce(f(i, j));
            }
        }
        m
    }

    pub fn diagonal(field: PrimeField, diag: &[u32]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d % field.modulus();
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn element(&self, i: usize, j: usize) -> FieldElement {
        self.field.wrap(self.get(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(self.with_entries(entries))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(self.with_entries(entries))
    }

    fn with_entries(&self, entries: Vec<u32>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        self.with_entries(self.entries.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// `self - c * I`.
    pub fn sub_scalar(&self, c: u32) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let e = &mut m.entries[i * self.cols + i];
            *e = self.field.sub(*e, c);
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = self.field.modulus() as u64;
        let chunk = lazy_chunk(&self.field);
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![0u32; n * m];
        let mut acc = vec![0u64; m];
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0;
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.entries[k * m..(k + 1) * m];
                for (s, &b) in acc.iter_mut().zip(brow) {
                    *s += a * b as u64;
                }
                pending += 1;
                if pending == chunk {
                    acc.iter_mut().for_each(|s| *s %= p);
                    pending = 0;
                }
            }
            for (o, s) in out[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                *o = (s % p) as u32;
            }
        }
        Ok(Matrix {
            field: self.field,
            rows: n,
            cols: m,
            entries: out,
        })
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.field.modulus() as u64;
        let chunk = lazy_chunk(&self.field);
        Ok((0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut s = 0u64;
                for (c, (&a, &b)) in row.iter().zip(v).enumerate() {
                    s += a as u64 * b as u64;
                    if (c + 1) % chunk == 0 {
                        s %= p;
                    }
                }
                (s % p) as u32
            })
            .collect())
    }

    /// Kronecker product: block `(i, j)` is `self[i][j] * other`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.entries[(i * other.rows + k) * c + j * other.cols + l] =
                            f.mul(a, other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let p = f.modulus() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.entries[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.entries.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.entries[r * cols + c]).expect("pivot is nonzero");
            for e in &mut self.entries[r * cols + c..(r + 1) * cols] {
                *e = f.mul(*e, inv);
            }
            let pivot_row: Vec<u32> = self.entries[r * cols + c..(r + 1) * cols].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.entries[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = p - factor as u64;
                for (e, &pv) in self.entries[i * cols + c..(i + 1) * cols]
                    .iter_mut()
                    .zip(&pivot_row)
                {
                    *e = ((*e as u64 + neg * pv as u64) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref_with_pivots();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut vectors = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            vectors.push(v);
        }
        Subspace::span(f, self.cols, &vectors).expect("kernel vectors have ambient length")
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.entries[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.entries[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            inv.entries[i * n..(i + 1) * n]
                .copy_from_slice(&aug.entries[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Ok(inv)
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        })
        .expect("plain data serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({"rows": self.rows, "cols": self.cols, "entries": self.entries})
    }

    pub fn from_json(field: PrimeField, s: &str) -> Result<Matrix> {
        let m: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        if let Some(&bad) = m.entries.iter().find(|&&e| e >= field.modulus()) {
            return Err(Error::Json(format!(
                "entry {bad} not reduced mod {}",
                field.modulus()
            )));
        }
        Matrix::from_entries(field, m.rows, m.cols, m.entries)
    }
}

/// A subspace of `F_p^n`, stored as the nonzero rows of an RREF basis matrix.
/// Two subspaces are equal iff their basis matrices are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Wraps a basis; fails if the rows are dependent.
    pub fn new(basis: Matrix) -> Result<Self> {
        let (r, pivots) = basis.rref_with_pivots();
        if pivots.len() != basis.rows() {
            return Err(Error::DependentRows {
                rank: pivots.len(),
                rows: basis.rows(),
            });
        }
        Ok(Subspace {
            ambient_dim: basis.cols(),
            basis: r,
            pivots,
        })
    }

    /// Span of arbitrary vectors (dependent ones are dropped).
    pub fn span(field: PrimeField, ambient_dim: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        let m = if vectors.is_empty() {
            Matrix::zeros(field, 0, ambient_dim)
        } else {
            let m = Matrix::from_rows(field, vectors)?;
            if m.cols() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.cols(),
                });
            }
            m
        };
        let (r, pivots) = m.rref_with_pivots();
        let k = pivots.len();
        let basis = Matrix {
            field,
            rows: k,
            cols: ambient_dim,
            entries: r.entries[..k * ambient_dim].to_vec(),
        };
        Ok(Subspace {
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.row_vectors()
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    /// Residue of `v` after elimination against the RREF basis.
    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut w = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c == 0 {
                continue;
            }
            for (x, &b) in w.iter_mut().zip(self.basis.row(row)) {
                *x = f.sub(*x, f.mul(c, b));
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(self.reduce(v).iter().all(|&x| x == 0))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let f = self.field();
        let (du, dv) = (self.dim(), other.dim());
        if du == 0 || dv == 0 {
            return Ok(Subspace::zero(f, self.ambient_dim));
        }
        // x = a U = b V  <=>  (a, -b) [U; V] = 0
        let stacked = self.basis.stack(&other.basis)?;
        let relations = stacked.transpose().kernel_basis();
        let vectors: Vec<Vec<u32>> = relations
            .basis_vectors()
            .into_iter()
            .map(|rel| {
                let a = Matrix::from_entries(f, 1, du, rel[..du].to_vec()).expect("length du");
                a.mul(&self.basis).expect("conformable").entries
            })
            .collect();
        Subspace::span(f, self.ambient_dim, &vectors)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for v in self.basis_vectors() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `v` lies in `s`.
pub fn in_span(v: &[u32], s: &Subspace) -> Result<bool> {
    s.contains(v)
}

/// Rank of the matrix whose rows are `vectors`.
pub fn rank_of_stack(field: PrimeField, vectors: &[Vec<u32>]) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(field, vectors)?.rank())
}

/// Incrementally maintained echelon basis, used when spinning vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        EchelonBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            let c = w[*pc];
            if c == 0 {
                continue;
            }
            for (x, &b) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, b));
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if independent; returns whether the span grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]).expect("nonzero");
        for x in &mut w {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push((pc, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        let v: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| f().reduce(x)).collect())
            .collect();
        Matrix::from_rows(f(), &v).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(f(), 3);
        assert_eq!(id.rref(), id);
        assert_eq!(m(&[&[2, 2], &[1, 1]]).rref(), m(&[&[1, 1], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(f(), 3).kernel_basis().dim(), 0);
        let k = m(&[&[1, 1], &[1, 1]]).kernel_basis();
        assert_eq!(k.basis_vectors(), vec![vec![1, 100]]);
    }

    #[test]
    fn kronecker_examples() {
        let k = Matrix::identity(f(), 2).kronecker(&Matrix::identity(f(), 3));
        assert_eq!(k, Matrix::identity(f(), 6));
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            a.kronecker(&b),
            m(&[&[0, 1, 0, 2], &[1, 0, 2, 0], &[0, 3, 0, 4], &[3, 0, 4, 0]])
        );
    }

    #[test]
    fn intersect_examples() {
        let e1 = Subspace::span(f(), 3, &[vec![1, 0, 0]]).unwrap();
        let e2 = Subspace::span(f(), 3, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
        let full = Subspace::full(f(), 3);
        assert_eq!(full.intersect(&e1).unwrap(), e1);
        let bad = Subspace::full(f(), 2);
        assert!(matches!(
            e1.intersect(&bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn span_membership() {
        let s = Subspace::span(f(), 3, &[vec![1, 2, 3], vec![0, 1, 1]]).unwrap();
        assert!(in_span(&[0, 0, 0], &s).unwrap());
        for v in s.basis_vectors() {
            assert!(in_span(&v, &s).unwrap());
        }
        assert!(s.contains(&[1, 3, 4]).unwrap());
        assert!(!s.contains(&[0, 0, 1]).unwrap());
        assert!(s.contains(&[1, 2]).is_err());
        let r = rank_of_stack(f(), &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(r, 2);
    }

    #[test]
    fn dependent_basis_rejected() {
        let b = m(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            Subspace::new(b),
            Err(Error::DependentRows { rank: 1, rows: 2 })
        ));
    }

    #[test]
    fn inverse_and_singular() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(f(), 2));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn json_form() {
        let a = m(&[&[1, 2, 3], &[4, 5, 100]]);
        let s = a.to_json();
        assert_eq!(s, r#"{"rows":2,"cols":3,"entries":[1,2,3,4,5,100]}"#);
        assert_eq!(Matrix::from_json(f(), &s).unwrap(), a);
        assert!(Matrix::from_json(f(), r#"{"rows":1,"cols":1,"entries":[101]}"#).is_err());
        assert!(Matrix::from_json(f(), r#"{"rows":2,"cols":1,"entries":[1]}"#).is_err());
    }

    #[test]
    fn echelon_basis() {
        let mut e = EchelonBasis::new(f(), 3);
        assert!(e.insert(&[1, 1, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 2, 1]));
        assert!(e.contains(&[2, 3, 1]));
        assert_eq!(e.len(), 2);
    }
}
