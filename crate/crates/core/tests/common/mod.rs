//! Brute-force oracles. They work from definitions with schoolbook
//! polynomial arithmetic and share nothing with the library beyond the
//! element encoding.

#![allow(dead_code)]

use rand::Rng;
use vqs::{Fe, Field, Matrix, QuadraticSpace, Subspace};

/// GF(p^d) with arithmetic on coefficient vectors.
#[derive(Clone)]
pub struct SlowField {
    pub p: u32,
    pub d: usize,
    pub modulus: Vec<u32>,
}

impl SlowField {
    pub fn of(f: &Field) -> Self {
        SlowField { p: f.characteristic(), d: f.degree() as usize, modulus: f.modulus().to_vec() }
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.d as u32)
    }

    fn digits(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.d)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    fn pack(&self, cs: &[u32]) -> Fe {
        Fe(cs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.d == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        let (x, y) = (self.digits(a), self.digits(b));
        self.pack(&x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: Fe) -> Fe {
        self.pack(&self.digits(a).iter().map(|c| (self.p - c) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.d == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.d];
        for (i, &s) in x.iter().enumerate() {
            for (j, &t) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + s as u64 * t as u64) % p;
            }
        }
        // the modulus is monic: x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        for k in (self.d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..self.d {
                let m = self.modulus[i] as u64;
                prod[k - self.d + i] = (prod[k - self.d + i] + (p - c) * m) % p;
            }
        }
        self.pack(&prod[..self.d].iter().map(|&c| c as u32).collect::<Vec<_>>())
    }

    pub fn elements(&self) -> Vec<Fe> {
        (0..self.order()).map(Fe).collect()
    }

    pub fn vectors(&self, n: usize) -> Vec<Vec<Fe>> {
        let q = self.order();
        let total = (q as u64).pow(n as u32);
        (0..total)
            .map(|mut i| {
                let mut v = vec![Fe(0); n];
                for slot in v.iter_mut().rev() {
                    *slot = Fe((i % q as u64) as u32);
                    i /= q as u64;
                }
                v
            })
            .collect()
    }

    /// `Q(x) = sum_{i <= j} c_ij x_i x_j`.
    pub fn eval(&self, c: &Matrix, x: &[Fe]) -> Fe {
        let mut acc = Fe(0);
        for i in 0..x.len() {
            for j in i..x.len() {
                acc = self.add(acc, self.mul(c.get(i, j), self.mul(x[i], x[j])));
            }
        }
        acc
    }

    /// `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn polar(&self, c: &Matrix, x: &[Fe], y: &[Fe]) -> Fe {
        let s: Vec<Fe> = x.iter().zip(y).map(|(&a, &b)| self.add(a, b)).collect();
        self.sub(self.sub(self.eval(c, &s), self.eval(c, x)), self.eval(c, y))
    }

    /// `m x` for a column vector `x`.
    pub fn apply(&self, m: &Matrix, x: &[Fe]) -> Vec<Fe> {
        (0..m.rows()).map(|r| (0..m.cols()).fold(Fe(0), |acc, c| self.add(acc, self.mul(m.get(r, c), x[c])))).collect()
    }
}

fn is_zero(v: &[Fe]) -> bool {
    v.iter().all(|x| x.0 == 0)
}

/// All `v` with `Q(v) = 0` and `B(v, w) = 0` for every `w`.
pub fn brute_radical(qs: &QuadraticSpace) -> Vec<Vec<Fe>> {
    let sf = SlowField::of(qs.field());
    let all = sf.vectors(qs.dim());
    all.iter()
        .filter(|v| sf.eval(qs.coeffs(), v).0 == 0 && all.iter().all(|w| sf.polar(qs.coeffs(), v, w).0 == 0))
        .cloned()
        .collect()
}

/// Every element of a subspace, by brute force over the ambient space.
pub fn members(s: &Subspace) -> Vec<Vec<Fe>> {
    SlowField::of(s.field()).vectors(s.ambient_dim()).into_iter().filter(|v| s.contains(v)).collect()
}

/// `m` is injective and `Q(m x) = Q(x)` for all `x`.
pub fn pointwise_isometry(qs: &QuadraticSpace, m: &Matrix) -> bool {
    let sf = SlowField::of(qs.field());
    sf.vectors(qs.dim()).iter().all(|x| {
        let y = sf.apply(m, x);
        (is_zero(x) || !is_zero(&y)) && sf.eval(qs.coeffs(), &y) == sf.eval(qs.coeffs(), x)
    })
}

/// All `n x n` matrices over the field, in index order.
pub fn all_matrices(f: &Field, n: usize) -> Vec<Matrix> {
    let sf = SlowField::of(f);
    sf.vectors(n * n).into_iter().map(|d| Matrix::from_vec(f, n, n, d).unwrap()).collect()
}

/// Invertible matrices, detected by injectivity on all vectors.
pub fn invertible_matrices(f: &Field, n: usize) -> Vec<Matrix> {
    let sf = SlowField::of(f);
    let vs = sf.vectors(n);
    all_matrices(f, n).into_iter().filter(|m| vs.iter().all(|x| is_zero(x) || !is_zero(&sf.apply(m, x)))).collect()
}

/// The value table `x -> Q(x)` over all vectors.
pub fn value_table(qs: &QuadraticSpace) -> Vec<Fe> {
    let sf = SlowField::of(qs.field());
    sf.vectors(qs.dim()).iter().map(|x| sf.eval(qs.coeffs(), x)).collect()
}

/// Some invertible `m` in `gl` with `b(m x) = a(x)` for all `x`.
pub fn brute_isomorphic(a: &QuadraticSpace, b: &QuadraticSpace, gl: &[Matrix]) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let sf = SlowField::of(a.field());
    let vs = sf.vectors(a.dim());
    let ta = value_table(a);
    gl.iter().any(|m| vs.iter().zip(&ta).all(|(x, &qa)| sf.eval(b.coeffs(), &sf.apply(m, x)) == qa))
}

/// All upper-triangular coefficient matrices of size `n`.
pub fn all_forms(f: &Field, n: usize) -> Vec<QuadraticSpace> {
    let sf = SlowField::of(f);
    let slots = n * (n + 1) / 2;
    sf.vectors(slots)
        .into_iter()
        .map(|vals| {
            let mut m = Matrix::zeros(f, n, n);
            let mut it = vals.into_iter();
            for i in 0..n {
                for j in i..n {
                    m.set(i, j, it.next().unwrap());
                }
            }
            QuadraticSpace::new(m).unwrap()
        })
        .collect()
}

pub fn random_form<R: Rng>(rng: &mut R, f: &Field, n: usize) -> QuadraticSpace {
    let q = f.order();
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, Fe(rng.gen_range(0..q)));
        }
    }
    QuadraticSpace::new(m).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, f: &Field, rows: usize, cols: usize) -> Matrix {
    let q = f.order();
    let data = (0..rows * cols).map(|_| Fe(rng.gen_range(0..q))).collect();
    Matrix::from_vec(f, rows, cols, data).unwrap()
}

pub fn random_invertible<R: Rng>(rng: &mut R, f: &Field, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, f, n, n);
        if m.is_invertible().unwrap() {
            return m;
        }
    }
}

pub fn gf(p: u32, d: u32) -> Field {
    Field::new(p, d, None).unwrap()
}

pub fn gf_of(q: u32) -> Field {
    let (p, d) = vqs::field::prime_power(q as u64).unwrap();
    gf(p, d)
}

/// `Iso(Q)` by scanning every matrix; columns must carry the norms of the
/// unit vectors before the full pointwise test is run.
pub fn brute_isometries(qs: &QuadraticSpace) -> Vec<Matrix> {
    let f = qs.field();
    let n = qs.dim();
    let sf = SlowField::of(f);
    let units: Vec<Vec<Fe>> = (0..n).map(|i| (0..n).map(|j| Fe((i == j) as u32)).collect()).collect();
    let unit_norms: Vec<Fe> = units.iter().map(|e| sf.eval(qs.coeffs(), e)).collect();
    let columns: Vec<Vec<Vec<Fe>>> = unit_norms
        .iter()
        .map(|&c| sf.vectors(n).into_iter().filter(|v| sf.eval(qs.coeffs(), v) == c).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    'outer: loop {
        let mut m = Matrix::zeros(f, n, n);
        for (c, &k) in choice.iter().enumerate() {
            for (r, &e) in columns[c][k].iter().enumerate() {
                m.set(r, c, e);
            }
        }
        if pointwise_isometry(qs, &m) {
            out.push(m);
        }
        for c in 0..n {
            choice[c] += 1;
            if choice[c] < columns[c].len() {
                continue 'outer;
            }
            choice[c] = 0;
        }
        break;
    }
    out
}
