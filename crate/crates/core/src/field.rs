//! Arithmetic in finite fields GF(p^d).
//!
//! An element of GF(p^d) = GF(p)[x]/(m(x)) is a residue polynomial
//! `c_0 + c_1 x + ... + c_{d-1} x^{d-1}`. It is stored packed as the integer
//! `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` (see [`Fe`]), which is also the
//! enumeration order used everywhere ("lexicographic" order on elements).
//! Fields of order at most 256 cache full addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;
const SQRT_SCAN_LIMIT: u32 = 1024;

/// A field element: the packed coefficient vector of its residue polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Serializable description of a field: characteristic, degree and
/// (optionally) the defining polynomial, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

struct Inner {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Handle to a finite field. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.0.p, self.0.d, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.d == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.d)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Splits `q` as `p^d` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q.is_multiple_of(*k))?;
    let mut rest = q;
    let mut d = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p as u32, d))
}

// Polynomials over GF(p), constant term first, no trailing zeros except for
// the zero polynomial which is empty.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm] as u64, p as u64 - 2, p as u64);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
        for (i, &c) in m.iter().enumerate() {
            let sub = (factor * c as u64) % p as u64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digits(mut x: u32, p: u32, d: u32) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let c = x % p;
            x /= p;
            c
        })
        .collect()
}

/// The monic polynomial of degree `deg` whose lower coefficients are the
/// base-`p` digits of `index`.
fn monic_from_index(index: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut v = digits(index, p, deg);
    v.push(1);
    v
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most `deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    poly_trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let deg = (f.len() - 1) as u32;
    for k in 1..=deg / 2 {
        for idx in 0..p.pow(k) {
            let g = monic_from_index(idx, p, k);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Arithmetic operation selector for [`FieldElement::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Field {
    /// Builds GF(p^d). Without a modulus the first monic irreducible of degree
    /// `d` in enumeration order is used.
    pub fn new(p: u32, d: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        Self::with_limit(p, d, modulus, DEFAULT_MAX_ORDER)
    }

    pub fn with_limit(p: u32, d: u32, modulus: Option<Vec<u32>>, limit: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::CompositeCharacteristic(p as u64));
        }
        if d == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(d).filter(|&q| q <= limit.min(u32::MAX as u64));
        let q = q.ok_or(Error::FieldTooLarge { p: p as u64, d, limit })? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != d as usize + 1 || m[d as usize] != 1 {
                    return Err(Error::MalformedModulus(d));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::CoefficientOutOfRange { value: c as u64, p });
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
            None => (0..p.pow(d))
                .map(|idx| monic_from_index(idx, p, d))
                .find(|m| is_irreducible(m, p))
                .ok_or(Error::Internal("no irreducible polynomial found".into()))?,
        };
        let pow_p = (0..d).map(|i| p.pow(i)).collect();
        let mut inner =
            Inner { p, d, q, modulus, pow_p, add: Vec::new(), mul: Vec::new(), neg: Vec::new(), inv: Vec::new() };
        inner.neg = (0..q).map(|a| inner.neg_raw(a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(inner.add_raw(a, b) as u16);
                    mul.push(inner.mul_raw(a, b) as u16);
                }
            }
            inner.add = add;
            inner.mul = mul;
        }
        let mut inv = vec![0; q as usize];
        for a in 1..q {
            inv[a as usize] = inner.pow_raw(a, q as u64 - 2);
        }
        inner.inv = inv;
        Ok(Field(Arc::new(inner)))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Field::new(spec.p, spec.d, spec.modulus.clone())
    }

    /// The resolved specification (modulus always present).
    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, d: self.0.d, modulus: Some(self.0.modulus.clone()) }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.d
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_char_two(&self) -> bool {
        self.0.p == 2
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// All q elements in enumeration order, starting with 0.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.0.d as usize {
            return Err(Error::ShapeMismatch(format!("{} coefficients for a degree-{} field", coeffs.len(), self.0.d)));
        }
        let mut x = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.p {
                return Err(Error::CoefficientOutOfRange { value: c as u64, p: self.0.p });
            }
            x += c * self.0.pow_p[i];
        }
        Ok(Fe(x))
    }

    /// Element with the given packed index.
    pub fn element(&self, index: u64) -> Result<Fe> {
        if index >= self.0.q as u64 {
            return Err(Error::CoefficientOutOfRange { value: index, p: self.0.p });
        }
        Ok(Fe(index as u32))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.d)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let q = self.0.q;
        if q <= TABLE_LIMIT {
            Fe(self.0.add[(a.0 * q + b.0) as usize] as u32)
        } else {
            Fe(self.0.add_raw(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let q = self.0.q;
        if q <= TABLE_LIMIT {
            Fe(self.0.mul[(a.0 * q + b.0) as usize] as u32)
        } else {
            Fe(self.0.mul_raw(a.0, b.0))
        }
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!a.is_zero()).then(|| Fe(self.0.inv[a.0 as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn is_square(&self, a: Fe) -> bool {
        if self.is_char_two() || a.is_zero() {
            return true;
        }
        self.pow(a, (self.0.q as u64 - 1) / 2) == Fe::ONE
    }

    /// A square root of `a`. In odd characteristic the root with the smaller
    /// index is returned.
    pub fn sqrt(&self, a: Fe) -> Result<Fe> {
        let q = self.0.q as u64;
        if self.is_char_two() {
            // a^q = a, so a^(q/2) squares to a.
            return Ok(self.pow(a, q / 2));
        }
        if !self.is_square(a) {
            return Err(Error::NotASquare);
        }
        if a.is_zero() {
            return Ok(Fe::ZERO);
        }
        if self.0.q <= SQRT_SCAN_LIMIT {
            return self
                .elements()
                .find(|&x| self.square(x) == a)
                .ok_or(Error::Internal("square without a root".into()));
        }
        let r = self.tonelli_shanks(a);
        Ok(r.min(self.neg(r)))
    }

    fn tonelli_shanks(&self, a: Fe) -> Fe {
        let q = self.0.q as u64;
        let mut s = 0;
        let mut t = q - 1;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let z = self.canonical_e();
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        while b != Fe::ONE {
            let mut i = 0;
            let mut b2 = b;
            while b2 != Fe::ONE {
                b2 = self.square(b2);
                i += 1;
            }
            let mut g = c;
            for _ in 0..(m - i - 1) {
                g = self.square(g);
            }
            x = self.mul(x, g);
            c = self.square(g);
            b = self.mul(b, c);
            m = i;
        }
        x
    }

    /// The distinguished element `e` of the minus-type normal form: in odd
    /// characteristic the first non-square, in characteristic 2 the first `e`
    /// for which `x^2 + x + e` has no root.
    pub fn canonical_e(&self) -> Fe {
        if self.is_char_two() {
            let mut hit = vec![false; self.0.q as usize];
            for x in self.elements() {
                hit[self.add(self.square(x), x).0 as usize] = true;
            }
            // x -> x^2 + x is 2-to-1, so half the elements are missed.
            self.elements().find(|e| !hit[e.0 as usize]).expect("x^2+x is not surjective")
        } else {
            self.elements().find(|&e| !self.is_square(e)).expect("odd field has non-squares")
        }
    }

    /// Human-readable form: an integer in prime fields, otherwise a
    /// polynomial in `a`.
    pub fn format(&self, x: Fe) -> String {
        if self.0.d == 1 {
            return x.0.to_string();
        }
        let cs = self.coeffs(x);
        let mut terms = Vec::new();
        for (i, &c) in cs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl Inner {
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.d == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (digits(a, self.p, self.d), digits(b, self.p, self.d));
        da.iter().zip(&db).zip(&self.pow_p).map(|((x, y), w)| ((x + y) % self.p) * w).sum()
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        digits(a, self.p, self.d).iter().zip(&self.pow_p).map(|(x, w)| ((self.p - x) % self.p) * w).sum()
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.d == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (da, db) = (digits(a, self.p, self.d), digits(b, self.p, self.d));
        let mut prod = vec![0u64; 2 * self.d as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let r = poly_rem(&prod, &self.modulus, self.p);
        r.iter().zip(&self.pow_p).map(|(c, w)| c * w).sum()
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }
}

/// A field element bundled with its field, for standalone checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format(self.value), self.field)
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Fe) -> Self {
        FieldElement { field: field.clone(), value }
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        let f = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement::new(f, value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, d: u32) -> Field {
        Field::new(p, d, None).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(2, 3).modulus(), &[1, 1, 0, 1]);
        assert!(matches!(Field::new(4, 1, None), Err(Error::CompositeCharacteristic(4))));
        assert!(matches!(Field::new(2, 2, Some(vec![1, 0, 1])), Err(Error::ReducibleModulus(2))));
        assert!(matches!(Field::new(2, 2, Some(vec![1, 1])), Err(Error::MalformedModulus(2))));
        assert!(matches!(Field::new(2, 17, None), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn arith_examples() {
        let f3 = gf(3, 1);
        assert_eq!(f3.mul(Fe(2), Fe(2)), Fe(1));
        let f4 = gf(2, 2);
        let alpha = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.mul(alpha, alpha), f4.from_coeffs(&[1, 1]).unwrap());
        let f5 = gf(5, 1);
        assert_eq!(f5.div(Fe(2), Fe(3)).unwrap(), Fe(4));
        assert_eq!(f5.div(Fe(2), Fe(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FieldElement::new(&gf(3, 1), Fe(1));
        let b = FieldElement::new(&gf(5, 1), Fe(1));
        assert_eq!(a.arith(&b, ArithOp::Add), Err(Error::MixedFields));
        let c = FieldElement::new(&gf(3, 1), Fe(2));
        assert_eq!(a.arith(&c, ArithOp::Add).unwrap().value, Fe(0));
    }

    #[test]
    fn squares_and_roots() {
        let f3 = gf(3, 1);
        assert!(!f3.is_square(Fe(2)));
        assert_eq!(f3.sqrt(Fe(2)), Err(Error::NotASquare));
        assert!(gf(5, 1).is_square(Fe(4)));
        assert_eq!(gf(7, 1).sqrt(Fe(2)).unwrap(), Fe(3));
        let f4 = gf(2, 2);
        assert_eq!(f4.sqrt(Fe(2)).unwrap(), Fe(3));
    }

    #[test]
    fn canonical_e_examples() {
        assert_eq!(gf(2, 1).canonical_e(), Fe(1));
        assert_eq!(gf(3, 1).canonical_e(), Fe(2));
        assert_eq!(gf(2, 2).canonical_e(), Fe(2));
        assert_eq!(gf(2, 2).canonical_e(), gf(2, 2).canonical_e());
    }

    #[test]
    fn enumeration_order() {
        let f4 = gf(2, 2);
        let els: Vec<_> = f4.elements().map(|x| f4.coeffs(x)).collect();
        assert_eq!(els, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(gf(3, 1).elements().collect::<Vec<_>>(), vec![Fe(0), Fe(1), Fe(2)]);
    }

    #[test]
    fn tonelli_shanks_large_field() {
        // 1031 is prime and above the scan limit.
        let f = gf(1031, 1);
        for a in [Fe(2), Fe(5), Fe(1000), Fe(17)] {
            let sq = f.square(a);
            let r = f.sqrt(sq).unwrap();
            assert_eq!(f.square(r), sq);
            assert!(r <= f.neg(r));
        }
        // Untabulated extension field.
        let f = gf(3, 6);
        let x = f.from_coeffs(&[1, 2, 0, 1, 1, 2]).unwrap();
        let r = f.sqrt(f.square(x)).unwrap();
        assert_eq!(f.square(r), f.square(x));
    }

    #[test]
    fn format_elements() {
        let f9 = gf(3, 2);
        assert_eq!(f9.format(f9.from_coeffs(&[2, 1]).unwrap()), "a+2");
        assert_eq!(f9.format(Fe(0)), "0");
        assert_eq!(gf(5, 1).format(Fe(3)), "3");
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
