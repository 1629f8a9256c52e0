//! Isometry groups `Iso(U)` and `Iso(V, U)`: exhaustive enumeration, the
//! closed-form orders, and the restriction map `Iso(V, U) -> Iso(U)`.
//!
//! Enumeration backtracks over the images of a basis. An image `y_i` of the
//! basis vector `b_i` must satisfy `Q(y_i) = Q(b_i)`,
//! `B(y_i, y_j) = B(b_i, b_j)` for `j < i`, and keep the images linearly
//! independent. Because `Q(sum c_i b_i) = sum c_i^2 Q(b_i) +
//! sum_{i<j} c_i c_j B(b_i, b_j)`, every complete assignment is an isometry.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::classify::{self, Kind, SquareClass};
use crate::embedding;
use crate::error::{Error, Result};
use crate::field::{prime_power, Fe, Field};
use crate::linalg::{self, all_vectors, Matrix, Subspace, Vector};
use crate::quad::{QuadraticSpace, VirtualQuadraticSpace};

/// An explicitly enumerated group of isometries of `space` fixing `fixed`
/// pointwise (`fixed = U^⊥` for a virtual space, `{0}` otherwise).
#[derive(Debug, Clone)]
pub struct IsometrySet {
    pub space: QuadraticSpace,
    pub fixed: Subspace,
    /// Sorted by entries, so the list is canonical.
    pub elements: Vec<Matrix>,
    pub order: u64,
    /// Candidate images examined by the search.
    pub nodes: u64,
}

impl IsometrySet {
    fn new(space: QuadraticSpace, fixed: Subspace, mut elements: Vec<Matrix>, nodes: u64) -> Self {
        elements.sort_by(|a, b| a.data().cmp(b.data()));
        let order = elements.len() as u64;
        IsometrySet { space, fixed, elements, order, nodes }
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.elements.binary_search_by(|e| e.data().cmp(m.data())).is_ok()
    }

    /// Checks that the set is a group of isometries fixing `fixed`: identity,
    /// membership conditions on every element, and closure under products and
    /// inverses (exhaustively up to order 200, on 100 random pairs above).
    pub fn check_group_axioms(&self, seed: u64) -> std::result::Result<(), String> {
        let n = self.space.dim();
        let f = self.space.field();
        if !self.contains(&Matrix::identity(f, n)) {
            return Err("identity missing".into());
        }
        let fixed = self.fixed.basis_vectors();
        for g in &self.elements {
            if !self.space.is_isometry(g).map_err(|e| e.to_string())? {
                return Err(format!("{g:?} is not an isometry"));
            }
            if fixed.iter().any(|w| g.apply(w).ok().as_ref() != Some(w)) {
                return Err(format!("{g:?} moves the fixed subspace"));
            }
        }
        let pairs: Vec<(usize, usize)> = if self.order <= 200 {
            let k = self.elements.len();
            (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let idx: Vec<usize> = (0..self.elements.len()).collect();
            (0..100).map(|_| (*idx.choose(&mut rng).unwrap(), *idx.choose(&mut rng).unwrap())).collect()
        };
        for (i, j) in pairs {
            let (a, b) = (&self.elements[i], &self.elements[j]);
            let prod = a.mul(b).map_err(|e| e.to_string())?;
            if !self.contains(&prod) {
                return Err(format!("not closed: {a:?} * {b:?}"));
            }
            let inv = a.inverse().map_err(|e| e.to_string())?.ok_or("singular element")?;
            if !self.contains(&inv) {
                return Err(format!("inverse of {a:?} missing"));
            }
        }
        Ok(())
    }
}

/// Whether two lists of matrices contain the same elements.
pub fn same_elements(a: &[Matrix], b: &[Matrix]) -> bool {
    let key = |m: &[Matrix]| {
        let mut v: Vec<Vec<Fe>> = m.iter().map(|x| x.data().to_vec()).collect();
        v.sort();
        v.dedup();
        v
    };
    key(a) == key(b)
}

/// Backtracking search for linear maps sending a source basis to vectors of
/// a target form with matching norms and pairings.
struct BasisImageSearch<'a> {
    target: &'a QuadraticSpace,
    target_gram: Matrix,
    vectors: Vec<Vector>,
    /// Candidate vector indices per level (already filtered by norm).
    candidates: Vec<Vec<usize>>,
    /// `pairings[i][j] = B(b_i, b_j)` for `j < i`.
    pairings: Vec<Vec<Fe>>,
    /// Images of the first basis vectors, fixed in advance.
    fixed: Vec<Vector>,
    max_nodes: u64,
    nodes: u64,
}

struct Frame {
    images: Vec<Vector>,
    gram_images: Vec<Vector>,
    echelon: Vec<(Vector, usize)>,
}

impl<'a> BasisImageSearch<'a> {
    /// `source_norms[i] = Q(b_i)` and `source_pairings[i][j] = B(b_i, b_j)`.
    fn new(
        target: &'a QuadraticSpace,
        source_norms: &[Fe],
        source_pairings: Vec<Vec<Fe>>,
        fixed: Vec<Vector>,
        budget: &Budget,
    ) -> Result<Self> {
        let f = target.field();
        let n = target.dim();
        budget.check_search(f.order(), n)?;
        budget.check_scan(f.order(), n)?;
        let vectors: Vec<Vector> = all_vectors(f, n).collect();
        let mut by_norm: HashMap<Fe, Vec<usize>> = HashMap::new();
        for (i, v) in vectors.iter().enumerate().skip(1) {
            by_norm.entry(target.eval(v)).or_default().push(i);
        }
        let candidates = source_norms.iter().map(|c| by_norm.get(c).cloned().unwrap_or_default()).collect();
        Ok(BasisImageSearch {
            target,
            target_gram: target.gram(),
            vectors,
            candidates,
            pairings: source_pairings,
            fixed,
            max_nodes: budget.max_nodes,
            nodes: 0,
        })
    }

    /// Calls `visit` on every complete list of images until it returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[Vector]) -> bool) -> Result<()> {
        let f = self.target.field().clone();
        let mut frame = Frame { images: Vec::new(), gram_images: Vec::new(), echelon: Vec::new() };
        for w in self.fixed.clone() {
            if !push_independent(&f, &mut frame.echelon, &w) {
                return Err(Error::Internal("fixed images are dependent".into()));
            }
            frame.gram_images.push(self.target_gram.apply(&w)?);
            frame.images.push(w);
        }
        self.descend(&f, &mut frame, visit).map(|_| ())
    }

    fn descend(&mut self, f: &Field, frame: &mut Frame, visit: &mut dyn FnMut(&[Vector]) -> bool) -> Result<bool> {
        let level = frame.images.len();
        if level == self.candidates.len() {
            return Ok(visit(&frame.images));
        }
        for ci in 0..self.candidates[level].len() {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::BudgetExceeded(format!("more than {} search nodes", self.max_nodes)));
            }
            let x = &self.vectors[self.candidates[level][ci]];
            let compatible =
                frame.gram_images.iter().zip(&self.pairings[level]).all(|(gy, &want)| linalg::dot(f, x, gy) == want);
            if !compatible {
                continue;
            }
            let mut echelon = frame.echelon.clone();
            if !push_independent(f, &mut echelon, x) {
                continue;
            }
            let x = x.clone();
            let saved = std::mem::replace(&mut frame.echelon, echelon);
            frame.gram_images.push(self.target_gram.apply(&x)?);
            frame.images.push(x);
            let keep_going = self.descend(f, frame, visit)?;
            frame.images.pop();
            frame.gram_images.pop();
            frame.echelon = saved;
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Adds `v` to an echelon list if it is independent of it.
fn push_independent(f: &Field, echelon: &mut Vec<(Vector, usize)>, v: &[Fe]) -> bool {
    let mut r = v.to_vec();
    for (row, pivot) in echelon.iter() {
        let c = r[*pivot];
        if !c.is_zero() {
            r = linalg::axpy(f, f.neg(c), row, &r);
        }
    }
    let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let inv = f.inv(r[pivot]).expect("nonzero");
    echelon.push((linalg::scale(f, inv, &r), pivot));
    true
}

fn source_data(form: &QuadraticSpace, basis: &[Vector]) -> (Vec<Fe>, Vec<Vec<Fe>>) {
    let gram = form.gram();
    let norms = basis.iter().map(|b| form.eval(b)).collect();
    let pairings =
        (0..basis.len()).map(|i| (0..i).map(|j| linalg::pair(&gram, &basis[i], &basis[j])).collect()).collect();
    (norms, pairings)
}

/// Matrix (acting on columns) sending each `basis[i]` to `images[i]`.
fn map_from_images(f: &Field, basis_inv: &Matrix, images: &[Vector]) -> Result<Matrix> {
    let n = images.len();
    let r = Matrix::from_rows(f, n, images)?.transpose();
    r.mul(basis_inv)
}

fn enumerate_fixing(space: &QuadraticSpace, fixed: &Subspace, budget: &Budget) -> Result<IsometrySet> {
    let f = space.field();
    let n = space.dim();
    let mut basis = fixed.basis_vectors();
    let r = basis.len();
    basis.extend(fixed.coordinate_complement().basis_vectors());
    let (norms, pairings) = source_data(space, &basis);
    let p = Matrix::from_rows(f, n, &basis)?.transpose();
    let p_inv = p.inverse()?.ok_or_else(|| Error::Internal("basis is singular".into()))?;
    let mut search = BasisImageSearch::new(space, &norms, pairings, basis[..r].to_vec(), budget)?;
    let mut elements = Vec::new();
    let mut failure = None;
    search.run(&mut |images| match map_from_images(f, &p_inv, images) {
        Ok(m) => {
            elements.push(m);
            true
        }
        Err(e) => {
            failure = Some(e);
            false
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(IsometrySet::new(space.clone(), fixed.clone(), elements, search.nodes))
}

/// Enumerates `Iso(U)` for a quadratic space.
pub fn enumerate_isometries(qs: &QuadraticSpace, budget: &Budget) -> Result<IsometrySet> {
    enumerate_fixing(qs, &Subspace::zero(qs.field(), qs.dim()), budget)
}

/// Enumerates `Iso(V, U)`: isometries of the ambient fixing `U^⊥` pointwise.
pub fn enumerate_virtual_isometries(vqs: &VirtualQuadraticSpace, budget: &Budget) -> Result<IsometrySet> {
    enumerate_fixing(vqs.ambient(), &vqs.u_perp(), budget)
}

/// Searches for an invertible `m` with `target(m x) = source(x)`.
pub fn find_isometry(source: &QuadraticSpace, target: &QuadraticSpace, budget: &Budget) -> Result<Option<Matrix>> {
    if source.field() != target.field() {
        return Err(Error::MixedFields);
    }
    if source.dim() != target.dim() {
        return Ok(None);
    }
    let f = source.field();
    let n = source.dim();
    let basis = Matrix::identity(f, n).row_vectors();
    let (norms, pairings) = source_data(source, &basis);
    let mut search = BasisImageSearch::new(target, &norms, pairings, Vec::new(), budget)?;
    let mut found = None;
    search.run(&mut |images| {
        found = Some(images.to_vec());
        false
    })?;
    found.map(|images| Matrix::from_rows(f, n, &images).map(|m| m.transpose())).transpose()
}

/// Which group an order formula describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    /// `Iso(U)` of the quadratic space itself.
    Classical,
    /// `Iso(V, U)` of a non-degenerate virtual space.
    Virtual,
}

/// Exact order of the isometry group of a non-degenerate (virtual) space of
/// dimension `dim` over GF(q):
///
/// * `2 q^{k^2-k} (q^k - ε) prod_{i=1}^{k-1} (q^{2i} - 1)` for `dim = 2k`,
/// * `2 q^{k^2} prod_{i=1}^{k} (q^{2i} - 1)` for `dim = 2k+1`, halved for
///   classical semantics in even characteristic.
pub fn order_formula(q: u64, dim: usize, kind: Kind, semantics: Semantics) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("field order {q}")));
    }
    if dim == 0 || !kind.fits(dim) {
        return Err(Error::ParityMismatch { dim, kind: kind.to_string() });
    }
    let qb = BigUint::from(q);
    let k = (dim / 2) as u32;
    let two = BigUint::from(2u32);
    let prod = |upto: u32| -> BigUint { (1..=upto).map(|i| qb.pow(2 * i) - BigUint::one()).product::<BigUint>() };
    Ok(match kind {
        Kind::Plus | Kind::Minus => {
            let qk = qb.pow(k);
            let factor = if kind == Kind::Plus { qk - BigUint::one() } else { qk + BigUint::one() };
            &two * qb.pow(k * k - k) * factor * prod(k - 1)
        }
        Kind::OddDim => {
            let base = qb.pow(k * k) * prod(k);
            if semantics == Semantics::Classical && q.is_multiple_of(2) {
                base
            } else {
                two * base
            }
        }
    })
}

/// Images and kernel of `Iso(V, U) -> Iso(U)`.
#[derive(Debug, Clone)]
pub struct Restriction {
    /// Restricted maps, acting on `Q|_U` in the canonical coordinates of `U`.
    pub image: IsometrySet,
    /// Elements of `Iso(V, U)` acting trivially on `U`.
    pub kernel: IsometrySet,
}

/// Restricts every element of an enumerated `Iso(V, U)` to `U`.
pub fn restriction_map(vqs: &VirtualQuadraticSpace, iso: &IsometrySet) -> Result<Restriction> {
    if !vqs.is_minimal() {
        return Err(Error::NotMinimal);
    }
    if !vqs.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let u = vqs.subspace();
    let f = vqs.field();
    let id_u = Matrix::identity(f, u.dim());
    let mut image: HashSet<Matrix> = HashSet::new();
    let mut kernel = Vec::new();
    for g in &iso.elements {
        let r = g.restrict_to(u).ok_or_else(|| Error::Internal("isometry does not preserve U".into()))?;
        if r == id_u {
            kernel.push(g.clone());
        }
        image.insert(r);
    }
    if image.len() as u64 * kernel.len() as u64 != iso.order {
        return Err(Error::Internal("|image| * |kernel| != |Iso(V, U)|".into()));
    }
    let image = IsometrySet::new(vqs.restricted_form(), Subspace::zero(f, u.dim()), image.into_iter().collect(), 0);
    let kernel = IsometrySet::new(iso.space.clone(), iso.fixed.clone(), kernel, 0);
    Ok(Restriction { image, kernel })
}

/// Result of comparing the restriction image with an independent
/// enumeration of `Iso(U)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub virtual_order: u64,
    pub image_order: u64,
    pub kernel_order: u64,
    pub iso_u_order: u64,
    pub surjective: bool,
}

pub fn check_surjectivity(vqs: &VirtualQuadraticSpace, budget: &Budget) -> Result<SurjectivityReport> {
    let iso = enumerate_virtual_isometries(vqs, budget)?;
    let res = restriction_map(vqs, &iso)?;
    let iso_u = enumerate_isometries(&vqs.restricted_form(), budget)?;
    Ok(SurjectivityReport {
        virtual_order: iso.order,
        image_order: res.image.order,
        kernel_order: res.kernel.order,
        iso_u_order: iso_u.order,
        surjective: same_elements(&res.image.elements, &iso_u.elements),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum VerifyStatus {
    Matched,
    Mismatched,
    Skipped(String),
}

/// One cell of the order-verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupOrderReport {
    pub q: u64,
    pub dim: usize,
    pub k: usize,
    pub kind: Kind,
    pub semantics: Semantics,
    pub formula_value: BigUint,
    pub enumerated_value: Option<u64>,
    pub status: VerifyStatus,
}

impl GroupOrderReport {
    pub fn epsilon(&self) -> Option<i8> {
        self.kind.epsilon()
    }

    /// `Some(formula == enumeration)`, or `None` for a skipped cell.
    pub fn matches(&self) -> Option<bool> {
        match self.status {
            VerifyStatus::Matched => Some(true),
            VerifyStatus::Mismatched => Some(false),
            VerifyStatus::Skipped(_) => None,
        }
    }
}

/// Prime powers in `2..=qmax`.
pub fn field_orders(qmax: u64) -> Vec<u64> {
    (2..=qmax).filter(|&q| prime_power(q).is_some()).collect()
}

pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, d) = prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    Field::new(p, d, None)
}

pub type FormulaFn<'a> = &'a dyn Fn(u64, usize, Kind, Semantics) -> Result<BigUint>;

/// Enumerates the group for one `(q, dim, kind, semantics)` cell.
pub fn enumerate_cell(q: u64, dim: usize, kind: Kind, semantics: Semantics, budget: &Budget) -> Result<u64> {
    let field = field_of_order(q)?;
    let form = classify::standard_form(&field, dim, kind, SquareClass::Square)?;
    match semantics {
        Semantics::Classical => Ok(enumerate_isometries(&form, budget)?.order),
        Semantics::Virtual => {
            let vqs = embedding::embed_ambient(&form)?;
            Ok(enumerate_virtual_isometries(&vqs, budget)?.order)
        }
    }
}

/// Cells of the sweep: both types in even dimension, classical and virtual
/// semantics in odd dimension.
pub fn sweep_cells(qmax: u64, dimmin: usize, dimmax: usize) -> Vec<(u64, usize, Kind, Semantics)> {
    let mut cells = Vec::new();
    for q in field_orders(qmax) {
        for dim in dimmin.max(1)..=dimmax {
            for kind in Kind::for_dim(dim) {
                if kind == Kind::OddDim {
                    cells.push((q, dim, kind, Semantics::Classical));
                    cells.push((q, dim, kind, Semantics::Virtual));
                } else {
                    cells.push((q, dim, kind, Semantics::Classical));
                }
            }
        }
    }
    cells
}

/// Compares formula and enumeration on every cell of the sweep.
pub fn verify_orders(qmax: u64, dimmin: usize, dimmax: usize, budget: &Budget) -> Vec<GroupOrderReport> {
    verify_orders_with(qmax, dimmin, dimmax, budget, &order_formula)
}

/// [`verify_orders`] against an arbitrary formula.
pub fn verify_orders_with(
    qmax: u64,
    dimmin: usize,
    dimmax: usize,
    budget: &Budget,
    formula: FormulaFn<'_>,
) -> Vec<GroupOrderReport> {
    sweep_cells(qmax, dimmin, dimmax)
        .into_iter()
        .map(|(q, dim, kind, semantics)| {
            let formula_value = formula(q, dim, kind, semantics).unwrap_or_default();
            let (enumerated_value, status) = match enumerate_cell(q, dim, kind, semantics, budget) {
                Ok(n) if BigUint::from(n) == formula_value => (Some(n), VerifyStatus::Matched),
                Ok(n) => (Some(n), VerifyStatus::Mismatched),
                Err(e) => (None, VerifyStatus::Skipped(e.to_string())),
            };
            GroupOrderReport { q, dim, k: dim / 2, kind, semantics, formula_value, enumerated_value, status }
        })
        .collect()
}
