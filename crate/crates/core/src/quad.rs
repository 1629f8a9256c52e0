//! Quadratic spaces `(GF(q)^n, Q)` and virtual quadratic spaces `(V, Q, U)`.
//!
//! A quadratic form is stored by its upper-triangular coefficient matrix `C`
//! with `Q(x) = sum_{i <= j} C_ij x_i x_j`. In characteristic 2 the Gram
//! matrix `C + C^T` loses the diagonal of `C`, so `C` is the representation
//! that works in every characteristic.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::{self, Matrix, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSpace {
    coeffs: Matrix,
}

/// Folds an arbitrary square matrix `M` into the upper-triangular matrix
/// defining the same quadratic form `x^T M x`.
pub fn fold_upper(m: &Matrix) -> Matrix {
    let f = m.field();
    let n = m.rows();
    let mut out = Matrix::zeros(f, n, n);
    for i in 0..n {
        out.set(i, i, m.get(i, i));
        for j in i + 1..n {
            out.set(i, j, f.add(m.get(i, j), m.get(j, i)));
        }
    }
    out
}

impl QuadraticSpace {
    pub fn new(coeffs: Matrix) -> Result<QuadraticSpace> {
        if !coeffs.is_square() {
            return Err(Error::ShapeMismatch(format!("coefficient matrix is {}x{}", coeffs.rows(), coeffs.cols())));
        }
        for r in 0..coeffs.rows() {
            for c in 0..r {
                if !coeffs.get(r, c).is_zero() {
                    return Err(Error::LowerTriangularEntry { row: r, col: c });
                }
            }
        }
        Ok(QuadraticSpace { coeffs })
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Result<QuadraticSpace> {
        QuadraticSpace::new(Matrix::from_ints(field, rows))
    }

    /// The form `sum_{i<=j} c_ij x_i x_j` from a list of `(i, j, c)` terms.
    pub fn from_terms(field: &Field, n: usize, terms: &[(usize, usize, Fe)]) -> Result<QuadraticSpace> {
        let mut m = Matrix::zeros(field, n, n);
        for &(i, j, c) in terms {
            if i >= n || j >= n {
                return Err(Error::ShapeMismatch(format!("term ({i},{j}) outside dimension {n}")));
            }
            let (i, j) = (i.min(j), i.max(j));
            m.set(i, j, field.add(m.get(i, j), c));
        }
        QuadraticSpace::new(m)
    }

    pub fn zero_space(field: &Field) -> QuadraticSpace {
        QuadraticSpace { coeffs: Matrix::zeros(field, 0, 0) }
    }

    /// `sum_{i=1}^{k} x_{2i-1} x_{2i}`.
    pub fn hyperbolic(field: &Field, k: usize) -> QuadraticSpace {
        let mut m = Matrix::zeros(field, 2 * k, 2 * k);
        for i in 0..k {
            m.set(2 * i, 2 * i + 1, Fe::ONE);
        }
        QuadraticSpace { coeffs: m }
    }

    pub fn field(&self) -> &Field {
        self.coeffs.field()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &[Fe]) -> Result<Fe> {
        if x.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for a form of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self.eval(x))
    }

    #[inline]
    pub(crate) fn eval(&self, x: &[Fe]) -> Fe {
        let f = self.field();
        let n = self.dim();
        let mut acc = Fe::ZERO;
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let mut row = Fe::ZERO;
            for (j, &xj) in x.iter().enumerate().skip(i) {
                row = f.add(row, f.mul(self.coeffs.get(i, j), xj));
            }
            acc = f.add(acc, f.mul(x[i], row));
        }
        acc
    }

    /// Gram matrix `C + C^T` of `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn gram(&self) -> Matrix {
        self.coeffs.add(&self.coeffs.transpose()).expect("square")
    }

    pub fn bilinear(&self, x: &[Fe], y: &[Fe]) -> Fe {
        linalg::pair(&self.gram(), x, y)
    }

    /// Non-degeneracy of the associated bilinear form.
    pub fn is_nondegenerate(&self) -> bool {
        self.gram().rank() == self.dim()
    }

    /// `Rad Q = {v in ker B : Q(v) = 0}`.
    ///
    /// In odd characteristic `Q(v) = B(v, v) / 2` vanishes on `ker B`. In
    /// characteristic 2, `Q` restricted to `ker B` is additive with
    /// `Q(cv) = c^2 Q(v)`, so `v -> sqrt(Q(v))` is linear there and the
    /// radical is its kernel.
    pub fn radical(&self) -> Subspace {
        let f = self.field();
        let k = self.gram().kernel();
        if !f.is_char_two() || k.is_zero() {
            return k;
        }
        let kb = k.basis_vectors();
        let functional: Vector = kb.iter().map(|b| f.sqrt(self.eval(b)).expect("char 2 is perfect")).collect();
        let coeff_kernel = Matrix::from_rows(f, kb.len(), &[functional]).expect("shape").kernel();
        let vectors: Vec<Vector> = coeff_kernel
            .basis_vectors()
            .iter()
            .map(|c| c.iter().zip(&kb).fold(vec![Fe::ZERO; self.dim()], |acc, (&ci, b)| linalg::axpy(f, ci, b, &acc)))
            .collect();
        Subspace::from_vectors(f, self.dim(), &vectors).expect("shape")
    }

    pub fn has_trivial_radical(&self) -> bool {
        self.radical().is_zero()
    }

    pub fn direct_sum(&self, other: &QuadraticSpace) -> Result<QuadraticSpace> {
        if self.field() != other.field() {
            return Err(Error::MixedFields);
        }
        let (a, b) = (self.dim(), other.dim());
        let mut m = Matrix::zeros(self.field(), a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                m.set(i, j, self.coeffs.get(i, j));
            }
        }
        for i in 0..b {
            for j in 0..b {
                m.set(a + i, a + j, other.coeffs.get(i, j));
            }
        }
        Ok(QuadraticSpace { coeffs: m })
    }

    /// The form `y -> Q(map y)` for an `n x m` matrix `map`.
    pub fn pullback(&self, map: &Matrix) -> Result<QuadraticSpace> {
        if map.rows() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "map with {} rows for a form of dimension {}",
                map.rows(),
                self.dim()
            )));
        }
        let m = map.transpose().mul(&self.coeffs)?.mul(map)?;
        Ok(QuadraticSpace { coeffs: fold_upper(&m) })
    }

    /// `Q|_S` in the coordinates of the canonical basis of `S`.
    pub fn restrict(&self, s: &Subspace) -> Result<QuadraticSpace> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::AmbientMismatch(s.ambient_dim(), self.dim()));
        }
        self.pullback(&s.basis().transpose())
    }

    /// Whether the square matrix `m` (acting on column vectors) is an
    /// invertible map with `Q(m x) = Q(x)`, decided on coefficients.
    pub fn is_isometry(&self, m: &Matrix) -> Result<bool> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a form of dimension {}",
                m.rows(),
                m.cols(),
                self.dim()
            )));
        }
        Ok(m.is_invertible()? && self.pullback(m)? == *self)
    }
}

/// A non-degenerate ambient space `(V, Q)` with a distinguished subspace `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualQuadraticSpace {
    ambient: QuadraticSpace,
    u: Subspace,
}

impl VirtualQuadraticSpace {
    pub fn new(ambient: QuadraticSpace, u: Subspace) -> Result<VirtualQuadraticSpace> {
        if u.ambient_dim() != ambient.dim() {
            return Err(Error::AmbientMismatch(u.ambient_dim(), ambient.dim()));
        }
        if u.field() != ambient.field() {
            return Err(Error::MixedFields);
        }
        if !ambient.is_nondegenerate() {
            return Err(Error::DegenerateAmbient);
        }
        Ok(VirtualQuadraticSpace { ambient, u })
    }

    /// `(U, Q, U)` for a form with invertible Gram matrix.
    pub fn whole(space: QuadraticSpace) -> Result<VirtualQuadraticSpace> {
        let u = Subspace::full(space.field(), space.dim());
        VirtualQuadraticSpace::new(space, u)
    }

    pub fn ambient(&self) -> &QuadraticSpace {
        &self.ambient
    }

    pub fn subspace(&self) -> &Subspace {
        &self.u
    }

    pub fn field(&self) -> &Field {
        self.ambient.field()
    }

    /// The virtual dimension, `dim U`.
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn u_perp(&self) -> Subspace {
        self.u.perp(&self.ambient.gram()).expect("shapes checked at construction")
    }

    /// `N = U ∩ U^⊥`.
    pub fn isotropic_part(&self) -> Subspace {
        self.u.intersect(&self.u_perp()).expect("same ambient")
    }

    /// `Q|_U` in the coordinates of the canonical basis of `U`.
    pub fn restricted_form(&self) -> QuadraticSpace {
        self.ambient.restrict(&self.u).expect("same ambient")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.restricted_form().has_trivial_radical()
    }

    /// Minimal means `U^⊥ ⊆ U`.
    pub fn is_minimal(&self) -> bool {
        self.u_perp().is_subspace_of(&self.u)
    }
}
