//! Exact arithmetic for small finite fields GF(p^e).
//!
//! Elements are dense indices `0..q`: the index is the base-`p` encoding of
//! the coefficient vector of the representative polynomial, low degree first,
//! so `0` is the field zero and `1` the field one. The defining modulus is
//! the lexicographically smallest monic irreducible of the requested degree,
//! which makes every table reproducible across runs.

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: usize = 4096;

/// Orders up to this get dense add/mul tables; larger fields fall back to
/// digitwise addition and exp/log multiplication.
const TABLE_MAX_Q: usize = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u32),
    #[error("degree {0} out of range 1..=6")]
    DegreeOutOfRange(u32),
    #[error("field order {0} exceeds {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("Tits endomorphism needs q an odd power of 2, got p={p}, e={e}")]
    NotOddCharTwo { p: u32, e: u32 },
    #[error("conjugation map needs a square order field, got degree {0}")]
    OddDegree(u32),
}

/// A finite field with dense element indices and reproducible tables.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: usize,
    /// Monic modulus, coefficients low-to-high, length e+1.
    modulus: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    inv_table: Vec<u16>,
    neg_table: Vec<u16>,
    /// exp[i] = g^i for a fixed primitive element g; exp has length q-1.
    exp: Vec<u16>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u16>,
}

/// The map x -> x^(p^k) on a fixed field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldAutomorphism {
    exponent: u32,
}

impl FieldAutomorphism {
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn apply(&self, field: &FiniteField, x: usize) -> usize {
        let mut y = x;
        for _ in 0..self.exponent {
            y = field.pow(y, field.p as u64);
        }
        y
    }

    pub fn is_identity_on(&self, field: &FiniteField) -> bool {
        (0..field.order()).all(|x| self.apply(field, x) == x)
    }
}

/// Builds GF(p^e) with the canonical modulus.
pub fn field_build(p: u32, e: u32) -> Result<FiniteField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NonPrime(p));
    }
    if !(1..=6).contains(&e) {
        return Err(FieldError::DegreeOutOfRange(e));
    }
    let q = (p as usize).checked_pow(e).filter(|&q| q <= MAX_ORDER);
    let q = q.ok_or_else(|| FieldError::OrderTooLarge((p as usize).saturating_pow(e)))?;

    let modulus = smallest_irreducible(p, e);
    let mut field = FiniteField {
        p,
        e,
        q,
        modulus,
        add_table: None,
        mul_table: None,
        inv_table: Vec::new(),
        neg_table: Vec::new(),
        exp: Vec::new(),
        log: Vec::new(),
    };
    field.build_tables();
    Ok(field)
}

/// sigma with sigma^2 = squaring, for q = 2^e with e odd.
pub fn tits_endomorphism(field: &FiniteField) -> Result<FieldAutomorphism, FieldError> {
    if field.p != 2 || field.e % 2 == 0 {
        return Err(FieldError::NotOddCharTwo { p: field.p, e: field.e });
    }
    // 2k = 1 (mod e) has the solution k = (e+1)/2; reduce so q = 2 gives the identity.
    let k = ((field.e + 1) / 2) % field.e;
    Ok(FieldAutomorphism { exponent: k })
}

/// The involutory automorphism x -> x^(p^(e/2)) of a square-order field.
pub fn conjugation_map(field: &FiniteField) -> Result<FieldAutomorphism, FieldError> {
    if field.e % 2 != 0 {
        return Err(FieldError::OddDegree(field.e));
    }
    Ok(FieldAutomorphism { exponent: field.e / 2 })
}

impl FiniteField {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.q && b < self.q);
        match &self.add_table {
            Some(t) => t[a * self.q + b] as usize,
            None => self.add_raw(a, b),
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg_table[a] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.q && b < self.q);
        match &self.mul_table {
            Some(t) => t[a * self.q + b] as usize,
            None => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let i = self.log[a] as usize + self.log[b] as usize;
                    self.exp[i % (self.q - 1)] as usize
                }
            }
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "zero has no inverse");
        self.inv_table[a] as usize
    }

    pub fn pow(&self, a: usize, n: u64) -> usize {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a] as u64;
        let m = (self.q - 1) as u64;
        self.exp[((l % m) * (n % m) % m) as usize] as usize
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: usize) -> usize {
        self.pow(a, self.p as u64)
    }

    /// Sum of an iterator of elements.
    pub fn sum<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Dot product of two coordinate slices.
    pub fn dot(&self, xs: &[usize], ys: &[usize]) -> usize {
        assert_eq!(xs.len(), ys.len());
        xs.iter().zip(ys).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Embeds a prime-field scalar 0..p as a field element (repeated one).
    pub fn from_int(&self, n: u32) -> usize {
        (n % self.p) as usize
    }

    fn digits(&self, mut a: usize) -> Vec<u32> {
        let mut d = vec![0u32; self.e as usize];
        for slot in d.iter_mut() {
            *slot = (a % self.p as usize) as u32;
            a /= self.p as usize;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> usize {
        let mut a = 0usize;
        for &c in d.iter().rev() {
            a = a * self.p as usize + c as usize;
        }
        a
    }

    fn add_raw(&self, a: usize, b: usize) -> usize {
        let da = self.digits(a);
        let db = self.digits(b);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p).collect();
        self.undigits(&sum)
    }

    fn mul_raw(&self, a: usize, b: usize) -> usize {
        let da = self.digits(a);
        let db = self.digits(b);
        let prod = poly_mul_mod(&da, &db, &self.modulus, self.p);
        self.undigits(&prod)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        self.neg_table = (0..q)
            .map(|a| {
                let d = self.digits(a);
                let nd: Vec<u32> = d.iter().map(|&c| (self.p - c) % self.p).collect();
                self.undigits(&nd) as u16
            })
            .collect();

        // exp/log over a primitive element found by exhaustive order test.
        let mut exp = vec![0u16; q - 1];
        let mut log = vec![0u16; q];
        'search: for g in 2..q {
            let mut x = 1usize;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = x as u16;
                if x == 1 && i > 0 {
                    continue 'search; // order of g divides i < q-1
                }
                x = self.mul_raw(x, g);
            }
            if x == 1 {
                break;
            }
        }
        if q == 2 {
            exp[0] = 1;
        }
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u16;
        }
        self.exp = exp;
        self.log = log;

        self.inv_table = vec![0u16; q];
        for a in 1..q {
            let l = self.log[a] as usize;
            self.inv_table[a] = self.exp[(q - 1 - l) % (q - 1)];
        }

        if q <= TABLE_MAX_Q {
            let mut add = vec![0u16; q * q];
            let mut mul = vec![0u16; q * q];
            for a in 0..q {
                for b in a..q {
                    let s = self.add_raw(a, b) as u16;
                    let m = self.mul_raw(a, b) as u16;
                    add[a * q + b] = s;
                    add[b * q + a] = s;
                    mul[a * q + b] = m;
                    mul[b * q + a] = m;
                }
            }
            self.add_table = Some(add);
            self.mul_table = Some(mul);
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// First monic irreducible of degree e over GF(p), scanning the low-to-high
/// base-p encodings of the non-leading coefficients in increasing order.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let pe = (p as usize).pow(e);
    for k in 0..pe {
        let mut poly = Vec::with_capacity(e as usize + 1);
        let mut rest = k;
        for _ in 0..e {
            poly.push((rest % p as usize) as u32);
            rest /= p as usize;
        }
        poly.push(1);
        if poly_is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible of degree {e} over GF({p}) exists");
}

fn poly_is_irreducible(poly: &[u32], p: u32) -> bool {
    let e = poly.len() - 1;
    if e == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=e/2.
    for d in 1..=e / 2 {
        let count = (p as usize).pow(d as u32);
        for k in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut rest = k;
            for _ in 0..d {
                div.push((rest % p as usize) as u32);
                rest /= p as usize;
            }
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of a by monic b over GF(p); coefficients low-to-high.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * bc) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// (a*b) mod m over GF(p); all coefficient vectors low-to-high, m monic.
fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let e = m.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ac) in a.iter().enumerate() {
        if ac == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ac * bc) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(e, 0);
    r
}
