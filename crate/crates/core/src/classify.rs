//! Normal forms and isomorphism classes of quadratic forms with trivial
//! radical.
//!
//! Classification splits off hyperbolic planes through singular vectors
//! until the residual is anisotropic (dimension 0, 1 or 2), then normalizes
//! the residual:
//!
//! * plus type: `x1 x2 + ... + x_{2k-1} x_{2k}`
//! * odd dimension: `... + x_{2k+1}^2` (or `e x_{2k+1}^2` for a non-square
//!   residual in odd characteristic)
//! * minus type: `... + x^2 - e y^2` (odd characteristic) or
//!   `... + x^2 + x y + e y^2` (characteristic 2)
//!
//! where `e` is [`Field::canonical_e`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::iso_groups;
use crate::linalg::{self, all_vectors, Matrix, Subspace, Vector};
use crate::quad::QuadraticSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Plus,
    Minus,
    OddDim,
}

impl Kind {
    /// `ε` for even dimensions.
    pub fn epsilon(self) -> Option<i8> {
        match self {
            Kind::Plus => Some(1),
            Kind::Minus => Some(-1),
            Kind::OddDim => None,
        }
    }

    pub fn witt_index(self, dim: usize) -> usize {
        match self {
            Kind::Plus | Kind::OddDim => dim / 2,
            Kind::Minus => dim / 2 - 1,
        }
    }

    /// Whether a trivial-radical form of this type exists in `dim`.
    pub fn fits(self, dim: usize) -> bool {
        match self {
            Kind::OddDim => dim % 2 == 1,
            Kind::Plus => dim.is_multiple_of(2),
            Kind::Minus => dim.is_multiple_of(2) && dim >= 2,
        }
    }

    /// Types available in dimension `dim`.
    pub fn for_dim(dim: usize) -> Vec<Kind> {
        [Kind::Plus, Kind::Minus, Kind::OddDim].into_iter().filter(|k| k.fits(dim)).collect()
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Plus => "plus",
            Kind::Minus => "minus",
            Kind::OddDim => "odd_dim",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareClass {
    Square,
    NonSquare,
}

/// Normal form of `dim`-dimensional forms of the given type. The square
/// class only matters for odd dimension in odd characteristic.
pub fn standard_form(field: &Field, dim: usize, kind: Kind, class: SquareClass) -> Result<QuadraticSpace> {
    if !kind.fits(dim) {
        return Err(Error::ParityMismatch { dim, kind: kind.to_string() });
    }
    let k = kind.witt_index(dim);
    let planes = QuadraticSpace::hyperbolic(field, k);
    let e = field.canonical_e();
    let residual = match kind {
        Kind::Plus => QuadraticSpace::zero_space(field),
        Kind::OddDim => {
            let c = match class {
                SquareClass::NonSquare if !field.is_char_two() => e,
                _ => Fe::ONE,
            };
            QuadraticSpace::from_terms(field, 1, &[(0, 0, c)])?
        }
        Kind::Minus if field.is_char_two() => {
            QuadraticSpace::from_terms(field, 2, &[(0, 0, Fe::ONE), (0, 1, Fe::ONE), (1, 1, e)])?
        }
        Kind::Minus => QuadraticSpace::from_terms(field, 2, &[(0, 0, Fe::ONE), (1, 1, field.neg(e))])?,
    };
    planes.direct_sum(&residual)
}

/// Outcome of [`canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub field: Field,
    pub dim: usize,
    pub kind: Kind,
    pub witt_index: usize,
    pub canonical: QuadraticSpace,
    /// Rows are the canonical basis vectors in input coordinates; the
    /// canonical form is `y -> Q(basis^T y)`.
    pub basis: Matrix,
    /// Maps input coordinates to canonical coordinates:
    /// `canonical(transform x) = Q(x)`.
    pub transform: Matrix,
    /// `e`, when the minus-type residual uses it.
    pub e_used: Option<Fe>,
    /// Square class of the 1-dimensional residual (odd dimension, odd
    /// characteristic only).
    pub square_class: Option<SquareClass>,
}

impl ClassificationReport {
    pub fn char_is_even(&self) -> bool {
        self.field.is_char_two()
    }

    /// Invariants distinguishing isomorphism classes of quadratic forms.
    pub fn isometry_key(&self) -> (usize, Kind, usize, Option<SquareClass>) {
        (self.dim, self.kind, self.witt_index, self.square_class)
    }

    /// Invariants distinguishing classes of non-degenerate virtual quadratic
    /// spaces: the square class of an odd-dimensional residual is ignored,
    /// since `Q` and `e Q` have the same isometries.
    pub fn virtual_key(&self) -> (usize, Kind, usize) {
        (self.dim, self.kind, self.witt_index)
    }
}

/// First nonzero `v` with `Q(v) = 0` in lexicographic order.
pub fn find_singular_vector(qs: &QuadraticSpace, budget: &Budget) -> Result<Option<Vector>> {
    if !qs.has_trivial_radical() {
        return Err(Error::NonTrivialRadical);
    }
    scan_singular(qs, budget)
}

fn scan_singular(qs: &QuadraticSpace, budget: &Budget) -> Result<Option<Vector>> {
    budget.check_scan(qs.field().order(), qs.dim())?;
    Ok(all_vectors(qs.field(), qs.dim()).skip(1).find(|x| qs.eval(x).is_zero()))
}

/// Number of `x` (including 0) with `Q(x) = 0`.
pub fn count_singular_vectors(qs: &QuadraticSpace, budget: &Budget) -> Result<u64> {
    budget.check_scan(qs.field().order(), qs.dim())?;
    Ok(all_vectors(qs.field(), qs.dim()).filter(|x| qs.eval(x).is_zero()).count() as u64)
}

/// A hyperbolic plane split off a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperbolicSplit {
    /// `[v, w]` with `Q(v) = Q(w) = 0` and `B(v, w) = 1`.
    pub plane: [Vector; 2],
    /// `⟨v, w⟩^⊥`.
    pub residual_space: Subspace,
    /// The form on `residual_space`, in its canonical coordinates.
    pub residual: QuadraticSpace,
}

/// Splits off the plane through the singular vector `v`: picks `w` with
/// `B(v, w) = 1`, replaces it by `w - Q(w) v` (which is singular because
/// `Q(w + λv) = Q(w) + λ B(v, w)`), and restricts to the complement.
pub fn split_hyperbolic(qs: &QuadraticSpace, v: &[Fe]) -> Result<HyperbolicSplit> {
    let f = qs.field();
    let n = qs.dim();
    if !qs.evaluate(v)?.is_zero() {
        return Err(Error::NotSingular);
    }
    let gram = qs.gram();
    let gv = gram.apply(v)?;
    let Some(j) = gv.iter().position(|x| !x.is_zero()) else {
        return Err(Error::InRadical);
    };
    let w = linalg::scale(f, f.inv(gv[j]).expect("nonzero"), &linalg::unit_vector(n, j));
    let w = linalg::axpy(f, f.neg(qs.eval(&w)), v, &w);
    let plane = Subspace::from_vectors(f, n, &[v.to_vec(), w.clone()])?;
    let residual_space = plane.perp(&gram)?;
    let residual = qs.restrict(&residual_space)?;
    Ok(HyperbolicSplit { plane: [v.to_vec(), w], residual_space, residual })
}

/// Maps a vector given in the coordinates of the rows of `basis` back to
/// the ambient coordinates.
fn lift(f: &Field, basis: &[Vector], coords: &[Fe], n: usize) -> Vector {
    coords.iter().zip(basis).fold(vec![Fe::ZERO; n], |acc, (&c, b)| linalg::axpy(f, c, b, &acc))
}

/// Reduces a trivial-radical form to its normal form.
pub fn canonical_form(qs: &QuadraticSpace, budget: &Budget) -> Result<ClassificationReport> {
    if !qs.has_trivial_radical() {
        return Err(Error::NonTrivialRadical);
    }
    let f = qs.field();
    let n = qs.dim();
    let mut residual = qs.clone();
    let mut residual_basis: Vec<Vector> = Matrix::identity(f, n).row_vectors();
    let mut new_basis: Vec<Vector> = Vec::with_capacity(n);
    let mut witt_index = 0;

    while let Some(v) = scan_singular(&residual, budget)? {
        let split = split_hyperbolic(&residual, &v)?;
        for p in &split.plane {
            new_basis.push(lift(f, &residual_basis, p, n));
        }
        residual_basis = split.residual_space.basis_vectors().iter().map(|c| lift(f, &residual_basis, c, n)).collect();
        residual = split.residual;
        witt_index += 1;
    }

    let e = f.canonical_e();
    let (kind, e_used, square_class, tail) = match residual.dim() {
        0 => (Kind::Plus, None, None, Vec::new()),
        1 => {
            let c = residual.coeffs().get(0, 0);
            let (class, target) = if f.is_char_two() || f.is_square(c) {
                (SquareClass::Square, Fe::ONE)
            } else {
                (SquareClass::NonSquare, e)
            };
            // c λ^2 = target
            let lambda = f.sqrt(f.div(target, c)?)?;
            let class = (!f.is_char_two()).then_some(class);
            (Kind::OddDim, None, class, vec![linalg::scale(f, lambda, &residual_basis[0])])
        }
        2 => {
            let target = standard_form(f, 2, Kind::Minus, SquareClass::Square)?;
            let (b1, b2) = anisotropic_plane_basis(&residual, &target)?;
            let tail = vec![lift(f, &residual_basis, &b1, n), lift(f, &residual_basis, &b2, n)];
            (Kind::Minus, Some(e), None, tail)
        }
        d => return Err(Error::Internal(format!("anisotropic residual of dimension {d}"))),
    };
    new_basis.extend(tail);

    let basis = Matrix::from_rows(f, n, &new_basis)?;
    let canonical = qs.pullback(&basis.transpose())?;
    let expected = standard_form(f, n, kind, square_class.unwrap_or(SquareClass::Square))?;
    if canonical != expected {
        return Err(Error::Internal("reduction did not reach the normal form".into()));
    }
    let transform =
        basis.transpose().inverse()?.ok_or_else(|| Error::Internal("canonical basis is singular".into()))?;
    if canonical.pullback(&transform)? != *qs {
        return Err(Error::Internal("transform is not an isometry onto the normal form".into()));
    }
    Ok(ClassificationReport {
        field: f.clone(),
        dim: n,
        kind,
        witt_index,
        canonical,
        basis,
        transform,
        e_used,
        square_class,
    })
}

/// Basis `(b1, b2)` of an anisotropic plane carrying it to `target`, found by
/// search: `b1` ranges over vectors with `Q(b1) = target(e1)`, `b2` over all
/// vectors.
fn anisotropic_plane_basis(residual: &QuadraticSpace, target: &QuadraticSpace) -> Result<(Vector, Vector)> {
    let f = residual.field();
    let t = target.coeffs();
    for b1 in all_vectors(f, 2).skip(1) {
        if residual.eval(&b1) != t.get(0, 0) {
            continue;
        }
        for b2 in all_vectors(f, 2).skip(1) {
            if residual.eval(&b2) == t.get(1, 1) && residual.bilinear(&b1, &b2) == t.get(0, 1) {
                let m = Matrix::from_rows(f, 2, &[b1.clone(), b2.clone()])?;
                if m.is_invertible()? {
                    return Ok((b1, b2));
                }
            }
        }
    }
    Err(Error::Internal("anisotropic plane does not match the minus normal form".into()))
}

/// Whether two forms over the same field are isometric. Trivial-radical
/// forms are compared through their normal forms; otherwise an explicit
/// isometry is searched for.
pub fn is_isomorphic(a: &QuadraticSpace, b: &QuadraticSpace, budget: &Budget) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::MixedFields);
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let (ra, rb) = (a.radical(), b.radical());
    if ra.dim() != rb.dim() || a.gram().rank() != b.gram().rank() {
        return Ok(false);
    }
    if ra.is_zero() {
        let (ca, cb) = (canonical_form(a, budget)?, canonical_form(b, budget)?);
        return Ok(ca.isometry_key() == cb.isometry_key());
    }
    Ok(iso_groups::find_isometry(b, a, budget)?.is_some())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusClass {
    pub kind: Kind,
    pub witt_index: usize,
    /// First form of the class in enumeration order.
    pub representative: QuadraticSpace,
    /// Number of coefficient matrices in the class.
    pub forms: u64,
    /// Split by square class of the residual (odd dimension, odd
    /// characteristic); empty otherwise.
    pub by_square_class: BTreeMap<SquareClass, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub field: Field,
    pub dim: usize,
    pub total_forms: u64,
    pub trivial_radical_forms: u64,
    pub classes: Vec<CensusClass>,
    /// 2 for even, 1 for odd dimension.
    pub expected_classes: usize,
}

/// The `index`-th upper-triangular coefficient matrix in enumeration order.
fn form_from_index(f: &Field, n: usize, mut index: u64) -> QuadraticSpace {
    let q = f.order() as u64;
    let mut m = Matrix::zeros(f, n, n);
    for i in (0..n).rev() {
        for j in (i..n).rev() {
            m.set(i, j, Fe((index % q) as u32));
            index /= q;
        }
    }
    QuadraticSpace::new(m).expect("upper triangular")
}

/// Exhaustively classifies every form on `GF(q)^n` with trivial radical up to
/// virtual isomorphism.
pub fn class_census(field: &Field, n: usize, budget: &Budget) -> Result<CensusReport> {
    let total = budget.check_scan(field.order(), n * (n + 1) / 2)?;
    let mut buckets: BTreeMap<(usize, Kind, usize), CensusClass> = BTreeMap::new();
    let mut trivial = 0;
    for index in 0..total {
        let qs = form_from_index(field, n, index);
        if !qs.has_trivial_radical() {
            continue;
        }
        trivial += 1;
        let report = canonical_form(&qs, budget)?;
        let entry = buckets.entry(report.virtual_key()).or_insert_with(|| CensusClass {
            kind: report.kind,
            witt_index: report.witt_index,
            representative: qs.clone(),
            forms: 0,
            by_square_class: BTreeMap::new(),
        });
        entry.forms += 1;
        if let Some(c) = report.square_class {
            *entry.by_square_class.entry(c).or_default() += 1;
        }
    }
    Ok(CensusReport {
        field: field.clone(),
        dim: n,
        total_forms: total,
        trivial_radical_forms: trivial,
        classes: buckets.into_values().collect(),
        expected_classes: if n.is_multiple_of(2) { 2 } else { 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, d: u32) -> Field {
        Field::new(p, d, None).unwrap()
    }

    fn form(f: &Field, rows: &[&[i64]]) -> QuadraticSpace {
        QuadraticSpace::from_ints(f, rows).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn singular_vector_examples() {
        let f3 = gf(3, 1);
        let h = QuadraticSpace::hyperbolic(&f3, 1);
        assert_eq!(find_singular_vector(&h, &b()).unwrap(), Some(vec![Fe(0), Fe(1)]));
        let f2 = gf(2, 1);
        assert_eq!(find_singular_vector(&form(&f2, &[&[1, 1], &[0, 1]]), &b()).unwrap(), None);
        assert_eq!(find_singular_vector(&form(&f3, &[&[1]]), &b()).unwrap(), None);
        assert_eq!(find_singular_vector(&form(&f2, &[&[1, 0], &[0, 1]]), &b()), Err(Error::NonTrivialRadical));
    }

    #[test]
    fn split_examples() {
        let f3 = gf(3, 1);
        let s = split_hyperbolic(&QuadraticSpace::hyperbolic(&f3, 1), &[Fe(0), Fe(1)]).unwrap();
        assert_eq!(s.residual.dim(), 0);

        let q = form(&f3, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]]);
        let s = split_hyperbolic(&q, &[Fe(0), Fe(1), Fe(0)]).unwrap();
        assert_eq!(s.residual, form(&f3, &[&[1]]));
        assert_eq!(q.eval(&s.plane[1]), Fe(0));
        assert_eq!(q.bilinear(&s.plane[0], &s.plane[1]), Fe(1));

        let f2 = gf(2, 1);
        let minus4 = standard_form(&f2, 4, Kind::Minus, SquareClass::Square).unwrap();
        let s = split_hyperbolic(&minus4, &[Fe(0), Fe(1), Fe(0), Fe(0)]).unwrap();
        let minus2 = standard_form(&f2, 2, Kind::Minus, SquareClass::Square).unwrap();
        assert!(is_isomorphic(&s.residual, &minus2, &b()).unwrap());

        assert_eq!(split_hyperbolic(&q, &[Fe(0), Fe(0), Fe(1)]), Err(Error::NotSingular));
        let deg = form(&f3, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(split_hyperbolic(&deg, &[Fe(0), Fe(0), Fe(1)]), Err(Error::InRadical));
    }

    #[test]
    fn canonical_form_examples() {
        let f2 = gf(2, 1);
        let r = canonical_form(&QuadraticSpace::hyperbolic(&f2, 2), &b()).unwrap();
        assert_eq!((r.kind, r.witt_index), (Kind::Plus, 2));

        let r = canonical_form(&form(&f2, &[&[1, 1], &[0, 1]]), &b()).unwrap();
        assert_eq!((r.kind, r.witt_index, r.e_used), (Kind::Minus, 0, Some(Fe(1))));

        let f3 = gf(3, 1);
        let r = canonical_form(&form(&f3, &[&[0, 2, 0], &[0, 0, 0], &[0, 0, 1]]), &b()).unwrap();
        assert_eq!((r.kind, r.witt_index), (Kind::OddDim, 1));
        assert_eq!(r.square_class, Some(SquareClass::Square));

        let r = canonical_form(&form(&f3, &[&[2]]), &b()).unwrap();
        assert_eq!(r.square_class, Some(SquareClass::NonSquare));
        assert_eq!(r.canonical, form(&f3, &[&[2]]));

        assert_eq!(canonical_form(&form(&f2, &[&[1, 0], &[0, 1]]), &b()), Err(Error::NonTrivialRadical));
    }

    #[test]
    fn transform_is_congruence() {
        let f4 = gf(2, 2);
        let a = Fe(2);
        let q = QuadraticSpace::from_terms(&f4, 3, &[(0, 0, a), (0, 1, Fe(3)), (1, 2, Fe(1)), (2, 2, a)]).unwrap();
        let r = canonical_form(&q, &b()).unwrap();
        let congruent = crate::quad::fold_upper(&r.basis.mul(q.coeffs()).unwrap().mul(&r.basis.transpose()).unwrap());
        assert_eq!(&congruent, r.canonical.coeffs());
        assert_eq!(r.canonical.pullback(&r.transform).unwrap(), q);
    }

    #[test]
    fn isomorphism_examples() {
        let f3 = gf(3, 1);
        let h = QuadraticSpace::hyperbolic(&f3, 1);
        assert!(is_isomorphic(&h, &form(&f3, &[&[0, 2], &[0, 0]]), &b()).unwrap());
        let f2 = gf(2, 1);
        let plus = QuadraticSpace::hyperbolic(&f2, 1);
        let minus = form(&f2, &[&[1, 1], &[0, 1]]);
        assert!(!is_isomorphic(&plus, &minus, &b()).unwrap());
        assert!(is_isomorphic(&minus, &minus, &b()).unwrap());
        let d1 = form(&f2, &[&[1, 0], &[0, 1]]);
        let d2 = form(&f2, &[&[1, 0], &[0, 0]]);
        assert!(is_isomorphic(&d1, &d2, &b()).unwrap());
    }

    #[test]
    fn singular_counts() {
        let f3 = gf(3, 1);
        assert_eq!(count_singular_vectors(&QuadraticSpace::hyperbolic(&f3, 1), &b()).unwrap(), 5);
        let f2 = gf(2, 1);
        assert_eq!(count_singular_vectors(&form(&f2, &[&[1, 1], &[0, 1]]), &b()).unwrap(), 1);
        assert_eq!(count_singular_vectors(&QuadraticSpace::hyperbolic(&f2, 2), &b()).unwrap(), 10);
    }

    #[test]
    fn small_census() {
        let f2 = gf(2, 1);
        assert_eq!(class_census(&f2, 2, &b()).unwrap().classes.len(), 2);
        let r = class_census(&gf(3, 1), 1, &b()).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].by_square_class.len(), 2);
        assert_eq!(class_census(&f2, 3, &b()).unwrap().classes.len(), 1);
    }

    #[test]
    fn census_respects_budget() {
        let tiny = Budget { max_scan: 10, ..Budget::default() };
        assert!(matches!(class_census(&gf(2, 1), 3, &tiny), Err(Error::BudgetExceeded(_))));
    }
}
