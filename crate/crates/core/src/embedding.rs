//! Hyperbolic complements, symplectic bases, embedding of a quadratic space
//! into a virtual quadratic space, and minimalization.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::iso_groups;
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::quad::{QuadraticSpace, VirtualQuadraticSpace};

/// A hyperbolic subspace `Σ = N ⊕ Ñ` built around a totally isotropic `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperbolicComplement {
    pub sigma: Subspace,
    pub n_tilde: Subspace,
    /// The pairs `(u_i, v_i)` with `B(u_i, v_i) = 1`, in construction order.
    pub pairs: Vec<(Vector, Vector)>,
}

/// The pieces of a virtual space `(V, U)` used by minimalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalDecomposition {
    /// `N = U ∩ U^⊥`
    pub n_sub: Subspace,
    /// `M = U ∩ Σ^⊥`
    pub m_sub: Subspace,
    /// `Σ = N ⊕ Ñ`
    pub sigma: Subspace,
    pub n_tilde: Subspace,
    /// `M̂ = M^⊥ ∩ Σ^⊥`
    pub m_hat: Subspace,
    /// `V_m = U + Σ`
    pub vm: Subspace,
    /// Diagnostic only: whether `U ⊆ U^⊥` also holds in `V`.
    pub u_within_u_perp: bool,
}

/// First basis vector `b` of `within` with `B(u, b) != 0`, rescaled so that
/// `B(u, b) = 1`.
fn find_partner(gram: &Matrix, u: &[Fe], within: &Subspace) -> Option<Vector> {
    let f = gram.field();
    (0..within.dim()).find_map(|i| {
        let b = within.basis().row(i);
        let s = linalg::pair(gram, u, b);
        f.inv(s).map(|si| linalg::scale(f, si, b))
    })
}

fn check_gram(gram: &Matrix, n: usize) -> Result<()> {
    if gram.rows() != n || gram.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} Gram matrix for ambient dimension {n}",
            gram.rows(),
            gram.cols()
        )));
    }
    Ok(())
}

fn restricted_gram(gram: &Matrix, s: &Subspace) -> Matrix {
    let b = s.basis();
    b.mul(gram).and_then(|m| m.mul(&b.transpose())).expect("shapes agree")
}

/// Embeds a totally isotropic `N` into a hyperbolic `Σ = N ⊕ Ñ` with
/// `dim Σ = 2 dim N` and `N^⊥ ∩ Σ = N`.
///
/// Repeatedly takes `u` = first basis vector of the remaining `N`, pairs it
/// with `v` satisfying `B(u, v) = 1` and continues inside `⟨u, v⟩^⊥`.
pub fn hyperbolic_complement(gram: &Matrix, n_sub: &Subspace) -> Result<HyperbolicComplement> {
    let n = n_sub.ambient_dim();
    check_gram(gram, n)?;
    if gram.rank() != n {
        return Err(Error::DegenerateAmbient);
    }
    if !restricted_gram(gram, n_sub).is_zero() {
        return Err(Error::NotTotallyIsotropic);
    }
    let f = gram.field();
    let mut remaining_space = Subspace::full(f, n);
    let mut remaining_n = n_sub.clone();
    let mut pairs = Vec::new();
    while !remaining_n.is_zero() {
        let u = remaining_n.basis().row(0).to_vec();
        let v = find_partner(gram, &u, &remaining_space)
            .ok_or_else(|| Error::Internal("no hyperbolic partner in a non-degenerate space".into()))?;
        let plane = Subspace::from_vectors(f, n, &[u.clone(), v.clone()])?;
        remaining_space = remaining_space.intersect(&plane.perp(gram)?)?;
        remaining_n = remaining_n.intersect(&remaining_space)?;
        pairs.push((u, v));
    }
    let all: Vec<Vector> = pairs.iter().flat_map(|(u, v)| [u.clone(), v.clone()]).collect();
    let tildes: Vec<Vector> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let sigma = Subspace::from_vectors(f, n, &all)?;
    let n_tilde = Subspace::from_vectors(f, n, &tildes)?;

    if sigma.dim() != 2 * n_sub.dim() {
        return Err(Error::Internal("dim Σ != 2 dim N".into()));
    }
    if n_sub.perp(gram)?.intersect(&sigma)? != *n_sub {
        return Err(Error::Internal("N^⊥ ∩ Σ != N".into()));
    }
    if restricted_gram(gram, &sigma).rank() != sigma.dim() {
        return Err(Error::Internal("B restricted to Σ is degenerate".into()));
    }
    Ok(HyperbolicComplement { sigma, n_tilde, pairs })
}

/// A basis `(e_1, f_1, ..., e_k, f_k)` of a characteristic-2 space with an
/// invertible alternating Gram matrix in which `B(e_i, f_i) = 1` and all
/// other pairings vanish. Rows of the result are the basis vectors.
pub fn symplectic_basis(gram: &Matrix) -> Result<Matrix> {
    let f = gram.field();
    if !f.is_char_two() {
        return Err(Error::NotCharacteristicTwo);
    }
    if !gram.is_square() {
        return Err(Error::ShapeMismatch("non-square Gram matrix".into()));
    }
    let n = gram.rows();
    if !gram.is_symmetric() || (0..n).any(|i| !gram.get(i, i).is_zero()) {
        return Err(Error::NotAlternating);
    }
    if n % 2 == 1 {
        let kernel = gram.kernel();
        let certificate = kernel.basis().row(0).iter().map(|x| x.index() as u64).collect();
        return Err(Error::OddDimension { dim: n, certificate });
    }
    if gram.rank() != n {
        return Err(Error::DegenerateGram);
    }
    let mut remaining = Subspace::full(f, n);
    let mut rows = Vec::with_capacity(n);
    while !remaining.is_zero() {
        let e = remaining.basis().row(0).to_vec();
        let partner =
            find_partner(gram, &e, &remaining).ok_or_else(|| Error::Internal("alternating form lost rank".into()))?;
        let plane = Subspace::from_vectors(f, n, &[e.clone(), partner.clone()])?;
        remaining = remaining.intersect(&plane.perp(gram)?)?;
        rows.push(e);
        rows.push(partner);
    }
    let basis = Matrix::from_rows(f, n, &rows)?;
    if basis.mul(gram)?.mul(&basis.transpose())? != hyperbolic_gram(f, n / 2) {
        return Err(Error::Internal("symplectic basis does not reach normal form".into()));
    }
    Ok(basis)
}

/// Block-diagonal Gram matrix of `k` hyperbolic planes.
pub fn hyperbolic_gram(f: &crate::field::Field, k: usize) -> Matrix {
    QuadraticSpace::hyperbolic(f, k).gram()
}

/// Embeds `(U, Q)` into a minimal virtual quadratic space.
///
/// With `N = U ∩ U^⊥` spanned by the canonical basis `b_1..b_m` (pivot
/// columns `p_i`), the ambient is `V = U ⊕ Ñ` with coordinates `(x, t)` and
/// `Q̃(x, t) = Q(x) + sum_i t_i f_i(x)`, where `f_i` is the dual basis of `N`
/// extended by zero on the span of the non-pivot unit vectors, i.e.
/// `f_i(x) = x_{p_i}`. `U` is the first `dim U` coordinates.
pub fn embed_ambient(u_space: &QuadraticSpace) -> Result<VirtualQuadraticSpace> {
    embed_ambient_with(u_space, &[])
}

/// Like [`embed_ambient`], additionally adding `c_i t_i^2` for the given
/// `tilde_norms`. This changes `Q̃` off `U`; in characteristic 2 it leaves
/// the Gram matrix unchanged.
pub fn embed_ambient_with(u_space: &QuadraticSpace, tilde_norms: &[Fe]) -> Result<VirtualQuadraticSpace> {
    let f = u_space.field();
    let n = u_space.dim();
    let n_sub = u_space.gram().kernel();
    let m = n_sub.dim();
    if tilde_norms.len() > m {
        return Err(Error::InvalidArgument(format!("{} extra norms for {m} hyperbolic partners", tilde_norms.len())));
    }
    let mut coeffs = Matrix::zeros(f, n + m, n + m);
    for i in 0..n {
        for j in i..n {
            coeffs.set(i, j, u_space.coeffs().get(i, j));
        }
    }
    for (i, &p) in n_sub.pivots().iter().enumerate() {
        coeffs.set(p, n + i, Fe::ONE);
    }
    for (i, &c) in tilde_norms.iter().enumerate() {
        coeffs.set(n + i, n + i, c);
    }
    let ambient = QuadraticSpace::new(coeffs)?;
    let u = Subspace::span_units(f, n + m, &(0..n).collect::<Vec<_>>());
    let vqs = VirtualQuadraticSpace::new(ambient, u).map_err(|e| match e {
        Error::DegenerateAmbient => Error::Internal("embedded ambient is degenerate".into()),
        other => other,
    })?;
    if !vqs.is_minimal() {
        return Err(Error::Internal("embedded virtual space is not minimal".into()));
    }
    if vqs.restricted_form() != *u_space {
        return Err(Error::Internal("ambient form does not restrict to Q on U".into()));
    }
    Ok(vqs)
}

/// Cuts `(V, U)` down to the minimal `(V_m, U)` with `V_m = U + Σ`,
/// re-expressed in the coordinates of the canonical basis of `V_m`.
pub fn minimalize(vqs: &VirtualQuadraticSpace) -> Result<(VirtualQuadraticSpace, MinimalDecomposition)> {
    let f = vqs.field();
    let gram = vqs.ambient().gram();
    let n = vqs.ambient().dim();
    let u = vqs.subspace();
    let u_perp = vqs.u_perp();
    let n_sub = u.intersect(&u_perp)?;
    let hc = hyperbolic_complement(&gram, &n_sub)?;
    let sigma_perp = hc.sigma.perp(&gram)?;
    let m_sub = u.intersect(&sigma_perp)?;
    let m_hat = m_sub.perp(&gram)?.intersect(&sigma_perp)?;
    let vm = u.sum(&hc.sigma)?;

    let decomposition = MinimalDecomposition {
        u_within_u_perp: u.is_subspace_of(&u_perp),
        n_sub,
        m_sub,
        sigma: hc.sigma,
        n_tilde: hc.n_tilde,
        m_hat,
        vm,
    };
    decomposition.check(vqs)?;

    let d = &decomposition;
    let ambient = vqs.ambient().restrict(&d.vm)?;
    let u_coords: Vec<Vector> = u
        .basis_vectors()
        .iter()
        .map(|b| d.vm.coordinates(b).ok_or_else(|| Error::Internal("U not inside V_m".into())))
        .collect::<Result<_>>()?;
    let u_in_vm = Subspace::from_vectors(f, d.vm.dim(), &u_coords)?;
    let minimal =
        VirtualQuadraticSpace::new(ambient, u_in_vm).map_err(|_| Error::Internal("V_m is degenerate".into()))?;
    if !minimal.is_minimal() {
        return Err(Error::Internal("minimalized space is not minimal".into()));
    }
    debug_assert_eq!(n, d.vm.dim() + d.m_hat.dim());
    Ok((minimal, decomposition))
}

impl MinimalDecomposition {
    /// Checks every structural identity of the decomposition against `vqs`.
    pub fn check(&self, vqs: &VirtualQuadraticSpace) -> Result<()> {
        let gram = vqs.ambient().gram();
        let n = vqs.ambient().dim();
        let u = vqs.subspace();
        let u_perp = vqs.u_perp();
        let fail = |what: &str| Err(Error::Internal(format!("decomposition: {what}")));
        let orthogonal = |a: &Subspace, b: &Subspace| {
            a.basis().mul(&gram).and_then(|m| m.mul(&b.basis().transpose())).map(|m| m.is_zero())
        };

        if self.n_sub.sum(&self.m_sub)? != *u || !self.n_sub.intersect(&self.m_sub)?.is_zero() {
            return fail("U != N ⊕ M");
        }
        if !orthogonal(&self.n_sub, &self.m_sub)? {
            return fail("N not orthogonal to M");
        }
        let whole = self.m_sub.sum(&self.m_hat)?.sum(&self.sigma)?;
        if !whole.is_full() || self.m_sub.dim() + self.m_hat.dim() + self.sigma.dim() != n {
            return fail("V != M ⊕ M̂ ⊕ Σ");
        }
        if !orthogonal(&self.m_sub, &self.m_hat)?
            || !orthogonal(&self.m_sub, &self.sigma)?
            || !orthogonal(&self.m_hat, &self.sigma)?
        {
            return fail("M, M̂, Σ not pairwise orthogonal");
        }
        if self.m_hat.sum(&self.n_sub)? != u_perp {
            return fail("U^⊥ != M̂ ⊕ N");
        }
        if self.sigma.dim() != 2 * self.n_sub.dim() {
            return fail("dim Σ != 2 dim N");
        }
        if u_perp.intersect(&self.sigma)? != self.n_sub || u.intersect(&self.sigma)? != self.n_sub {
            return fail("U ∩ Σ or U^⊥ ∩ Σ differs from N");
        }
        if self.vm.dim() != u.dim() + self.n_sub.dim() {
            return fail("dim V_m != dim U + dim N");
        }
        Ok(())
    }
}

/// Checks `Iso(V, U) = Iso(V_m, U)` by enumerating both groups: every
/// element of `Iso(V, U)` restricts to `V_m`, and the restrictions are
/// exactly `Iso(V_m, U)`.
pub fn iso_preserving_restriction_check(vqs: &VirtualQuadraticSpace, budget: &Budget) -> Result<bool> {
    let (minimal, decomposition) = minimalize(vqs)?;
    let big = iso_groups::enumerate_virtual_isometries(vqs, budget)?;
    let small = iso_groups::enumerate_virtual_isometries(&minimal, budget)?;
    if big.order != small.order {
        return Ok(false);
    }
    let mut restricted = Vec::with_capacity(big.elements.len());
    for g in &big.elements {
        match g.restrict_to(&decomposition.vm) {
            Some(r) => restricted.push(r),
            None => return Ok(false),
        }
    }
    Ok(iso_groups::same_elements(&restricted, &small.elements))
}
