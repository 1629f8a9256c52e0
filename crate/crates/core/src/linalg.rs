//! Dense matrices and subspaces over a finite field.
//!
//! Subspaces are always kept as the nonzero rows of a reduced row-echelon
//! basis, so two [`Subspace`] values are equal exactly when they span the
//! same space.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

pub type Vector = Vec<Fe>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&x| self.field.format(x)).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Builds a matrix from rows of equal length; `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vector]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Matrix from small integers, reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| field.from_int(x))).collect();
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Fe) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn check_field(&self, other: &Field) -> Result<()> {
        if &self.field != other {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(&other.field)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("matrix sum of different shapes".into()));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Matrix-vector product `m * v`.
    pub fn apply(&self, v: &[Fe]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows).map(|r| dot(f, self.row(r), v)).collect())
    }

    /// Gauss-Jordan elimination to reduced row-echelon form.
    pub fn rref(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let x = f.mul(m.get(r, j), inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, rank: r, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// The null space `{x : m x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let f = &self.field;
        let ech = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let basis: Vec<Vector> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[fc] = Fe::ONE;
                for (i, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(ech.matrix.get(i, fc));
                }
                v
            })
            .collect();
        Subspace::from_vectors(f, self.cols, &basis).expect("kernel vectors have the right length")
    }

    pub fn is_invertible(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("invertibility of a non-square matrix".into()));
        }
        Ok(self.rank() == self.rows)
    }

    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, Fe::ONE);
        }
        let ech = aug.rref();
        if ech.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Ok(None);
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, ech.matrix.get(r, n + c));
            }
        }
        Ok(Some(inv))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// The map induced on an invariant subspace, in the coordinates of its
    /// canonical basis; `None` if `s` is not mapped into itself.
    pub fn restrict_to(&self, s: &Subspace) -> Option<Matrix> {
        let m = s.dim();
        let mut out = Matrix::zeros(&self.field, m, m);
        for j in 0..m {
            let image = self.apply(s.basis().row(j)).ok()?;
            let coords = s.coordinates(&image)?;
            for (i, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        Some(out)
    }

    /// Stacks rows of `self` above rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(&other.field)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack of different widths".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }
}

pub fn dot(f: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Bilinear pairing `x^T g y`.
pub fn pair(g: &Matrix, x: &[Fe], y: &[Fe]) -> Fe {
    let f = g.field();
    let mut acc = Fe::ZERO;
    for (i, &xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        acc = f.add(acc, f.mul(xi, dot(f, g.row(i), y)));
    }
    acc
}

pub fn scale(f: &Field, s: Fe, v: &[Fe]) -> Vector {
    v.iter().map(|&x| f.mul(s, x)).collect()
}

pub fn axpy(f: &Field, s: Fe, x: &[Fe], y: &[Fe]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| f.add(f.mul(s, a), b)).collect()
}

pub fn is_zero_vector(v: &[Fe]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![Fe::ZERO; n];
    v[i] = Fe::ONE;
    v
}

/// Every vector of GF(q)^n in lexicographic order (first coordinate most
/// significant).
pub fn all_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vector> + '_ {
    let q = f.order() as u64;
    let total = q.checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut idx| {
        let mut v = vec![Fe::ZERO; n];
        for slot in v.iter_mut().rev() {
            *slot = Fe((idx % q) as u32);
            idx /= q;
        }
        v
    })
}

/// A subspace of GF(q)^n stored by its canonical reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}; {:?})", self.dim(), self.ambient_dim, self.basis)
    }
}

impl Subspace {
    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace { ambient_dim: n, basis: Matrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        Subspace { ambient_dim: n, basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Subspace {
        let ech = m.rref();
        let mut data = ech.matrix.data;
        data.truncate(ech.rank * m.cols());
        Subspace {
            ambient_dim: m.cols(),
            basis: Matrix { field: m.field().clone(), rows: ech.rank, cols: m.cols(), data },
            pivots: ech.pivots,
        }
    }

    pub fn from_vectors(field: &Field, n: usize, vectors: &[Vector]) -> Result<Subspace> {
        Ok(Subspace::row_space(&Matrix::from_rows(field, n, vectors)?))
    }

    pub fn span_units(field: &Field, n: usize, idx: &[usize]) -> Subspace {
        let vs: Vec<Vector> = idx.iter().map(|&i| unit_vector(n, i)).collect();
        Subspace::from_vectors(field, n, &vs).expect("unit vectors")
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Canonical basis; rows are the basis vectors.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.field() != other.field() {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Fe]) -> Option<Vector> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let f = self.field();
        let coords: Vector = self.pivots.iter().map(|&p| v[p]).collect();
        let mut recon = vec![Fe::ZERO; self.ambient_dim];
        for (i, &c) in coords.iter().enumerate() {
            if !c.is_zero() {
                recon = axpy(f, c, self.basis.row(i), &recon);
            }
        }
        (recon == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection via the Zassenhaus block matrix `[[A, A], [B, 0]]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim;
        let f = self.field();
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for r in 0..self.dim() {
            let mut v = self.basis.row(r).to_vec();
            v.extend_from_slice(self.basis.row(r));
            rows.push(v);
        }
        for r in 0..other.dim() {
            let mut v = other.basis.row(r).to_vec();
            v.extend(std::iter::repeat_n(Fe::ZERO, n));
            rows.push(v);
        }
        let ech = Matrix::from_rows(f, 2 * n, &rows)?.rref();
        let inter: Vec<Vector> =
            (0..ech.rank).filter(|&r| ech.pivots[r] >= n).map(|r| ech.matrix.row(r)[n..].to_vec()).collect();
        Subspace::from_vectors(f, n, &inter)
    }

    /// Orthogonal complement `{v : B(u, v) = 0 for all u in self}` where
    /// `B(x, y) = x^T gram y`.
    pub fn perp(&self, gram: &Matrix) -> Result<Subspace> {
        let n = self.ambient_dim;
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} Gram matrix for ambient dimension {n}",
                gram.rows(),
                gram.cols()
            )));
        }
        if self.is_zero() {
            return Ok(Subspace::full(self.field(), n));
        }
        Ok(self.basis.mul(gram)?.kernel())
    }

    /// A complement spanned by the unit vectors at the non-pivot columns.
    pub fn coordinate_complement(&self) -> Subspace {
        let idx: Vec<usize> = (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect();
        Subspace::span_units(self.field(), self.ambient_dim, &idx)
    }
}
