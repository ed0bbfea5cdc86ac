//! Exact arithmetic in GF(p^e).
//!
//! Elements are encoded densely as integers in `[0, q)`. The base-p digits of
//! an index are the coefficients of a polynomial over GF(p), constant term in
//! the least-significant digit, reduced modulo the field's defining
//! polynomial. Index 0 is zero and index 1 is one.
//!
//! The defining polynomial is the lexicographically smallest monic
//! irreducible of degree `e`, comparing coefficient lists from the constant
//! term upward. This is not the Conway polynomial; it is chosen so that any
//! other tool can reproduce the encoding with a few lines of code.
//!
//! ```
//! use planeforge::gf::FieldSpec;
//!
//! let gf4 = FieldSpec::new(2, 2).unwrap();
//! assert_eq!(gf4.modulus(), &[1, 1, 1]); // x^2 + x + 1
//! let x = gf4.element(2).unwrap();
//! assert_eq!(gf4.mul(x, x).unwrap().index(), 3); // x * x = x + 1
//! ```

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const MAX_ORDER: u64 = 1 << 16;

/// A finite field GF(p^e) with precomputed log/antilog and inverse tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial, constant term first, length `e + 1`.
    /// Empty for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
}

/// An element of a specific [`FieldSpec`].
///
/// The element remembers the order of its field so that operands from
/// different fields are rejected instead of silently mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    index: u32,
    order: u32,
}

impl FieldElement {
    pub fn index(self) -> u32 {
        self.index
    }

    /// Order of the field this element belongs to.
    pub fn order(self) -> u32 {
        self.order
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^e).
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e < 1 {
            return Err(Error::InvalidExponent(e));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, e })?;
        let (p, q) = (p as u32, q as u32);

        let modulus = if e == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, e)
        };

        let mut field = FieldSpec {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            inv: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// Builds the field of the given prime-power order.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, e)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, constant term first, including the leading 1.
    /// Empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::ElementOutOfRange { index, q: self.q });
        }
        Ok(FieldElement {
            index,
            order: self.q,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            index: 0,
            order: self.q,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            index: 1,
            order: self.q,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |index| FieldElement {
            index,
            order: self.q,
        })
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if a.order != self.q {
            return Err(Error::MixedFields {
                left: self.q,
                right: a.order,
            });
        }
        Ok(())
    }

    fn check_pair(&self, a: FieldElement, b: FieldElement) -> Result<()> {
        if a.order != b.order {
            return Err(Error::MixedFields {
                left: a.order,
                right: b.order,
            });
        }
        self.check(a)
    }

    fn wrap(&self, index: u32) -> FieldElement {
        FieldElement {
            index,
            order: self.q,
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check_pair(a, b)?;
        Ok(self.wrap(self.add_index(a.index, b.index)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check_pair(a, b)?;
        Ok(self.wrap(self.add_index(a.index, self.neg_index(b.index))))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check_pair(a, b)?;
        Ok(self.wrap(self.mul_index(a.index, b.index)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(self.neg_index(a.index)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.inv_index(a.index).map(|i| self.wrap(i))
    }

    // Index-level arithmetic. Callers guarantee indices are in range.

    pub fn add_index(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg_index(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul_index(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(s % order) as usize]
    }

    pub fn inv_index(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.inv[a as usize])
    }

    /// Schoolbook product of two encoded polynomials reduced by the modulus.
    /// Only used while building the tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let p = self.p;
        let da = digits(a, p, self.e as usize);
        let db = digits(b, p, self.e as usize);
        let mut prod = vec![0u32; 2 * self.e as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let rem = poly_rem(&prod, &self.modulus, p);
        undigits(&rem, p)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let order = self.q - 1;
        let mut exp = vec![0u32; q];
        let mut log = vec![0u32; q];
        if q == 2 {
            exp[0] = 1;
            log[1] = 0;
        } else {
            // smallest generator of the multiplicative group
            let generator = (2..self.q)
                .find(|&g| {
                    let mut x = 1;
                    for k in 1..order {
                        x = self.mul_slow(x, g);
                        if x == 1 {
                            return k == order;
                        }
                    }
                    true
                })
                .expect("a finite field has a primitive element");
            let mut x = 1;
            for k in 0..order {
                exp[k as usize] = x;
                log[x as usize] = k;
                x = self.mul_slow(x, generator);
            }
        }
        let mut inv = vec![0u32; q];
        for a in 1..q {
            let l = log[a];
            inv[a] = exp[((order - l) % order) as usize];
        }
        self.exp = exp;
        self.log = log;
        self.inv = inv;
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p), padded to
/// `deg(m)` coefficients.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    for top in (dm..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - dm + i;
            r[idx] = (r[idx] + p - (c * mi) % p) % p;
        }
    }
    r.truncate(dm);
    r.resize(dm, 0);
    r
}

/// Monic polynomials of the given degree, constant term first, in
/// lexicographic order of their coefficient lists.
fn monic_polys(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(degree);
    (0..count).map(move |code| {
        let mut coeffs = vec![0; degree as usize + 1];
        let mut rest = code;
        // c_0 is the most significant digit of `code`
        for j in (0..degree as usize).rev() {
            coeffs[j] = rest % p;
            rest /= p;
        }
        coeffs[degree as usize] = 1;
        coeffs
    })
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let degree = poly.len() as u32 - 1;
    (1..=degree / 2)
        .all(|d| monic_polys(p, d).all(|g| poly_rem(poly, &g, p).iter().any(|&c| c != 0)))
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    monic_polys(p, e)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
