//! Finite fields F_{p^n} with a canonical modulus and a deterministic
//! element-index bijection.
//!
//! Elements are plain indices in `[0, p^n)`: the index is the little-endian
//! base-p encoding of the coefficient tuple in the polynomial basis
//! 1, x, ..., x^{n-1}. Index 0 is zero, index 1 is the multiplicative
//! identity. Multiplication goes through discrete log/exp tables built once
//! at construction, so all per-element operations are O(1) or O(n).

use crate::error::{Error, Result};
use serde::Serialize;

/// An element index in `[0, p^n)`.
pub type Elem = usize;

/// Defining data of F_{p^n}: characteristic, degree, and monic modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    /// Coefficients `c_0..c_n` of the modulus polynomial, with `c_n = 1`.
    pub modulus: Vec<u64>,
}

/// A fully constructed field with precomputed arithmetic tables.
pub struct Field {
    spec: FieldSpec,
    q: usize,
    /// exp[t] = index of sigma^t for t in [0, q-1).
    exp: Vec<u32>,
    /// log[x] = t with sigma^t = x, for x != 0.
    log: Vec<u32>,
    trace_tab: Vec<u8>,
    neg_tab: Vec<u32>,
    sigma: Elem,
    canonical: bool,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

// ---- polynomial arithmetic over Z_p (dense u64 coefficient vectors) ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    // m monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for i in 0..=dm {
                let idx = shift + i;
                r[idx] = (r[idx] + p - lead * m[i] % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut prod);
    poly_rem(&prod, m, p)
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        // make y monic before reducing
        let lead = *y.last().unwrap();
        let inv = mod_inv(lead, p);
        let ym: Vec<u64> = y.iter().map(|&c| c * inv % p).collect();
        let r = poly_rem(&x, &ym, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_sub_x(mut a: Vec<u64>, p: u64) -> Vec<u64> {
    // a - x
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + p - 1) % p;
    poly_trim(&mut a);
    a
}

/// Rabin irreducibility test for a monic polynomial over Z_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = (f.len() - 1) as u32;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^{p^n} == x mod f
    let mut xp = x.clone();
    for _ in 0..n {
        xp = poly_pow_mod(&xp, p, f, p);
    }
    if poly_sub_x(xp, p) != vec![0] {
        return false;
    }
    // gcd(x^{p^{n/r}} - x, f) = 1 for each prime r | n
    for r in prime_factors(n as u64) {
        let k = n as u64 / r;
        let mut xq = x.clone();
        for _ in 0..k {
            xq = poly_pow_mod(&xq, p, f, p);
        }
        let g = poly_gcd(&poly_sub_x(xq, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree n over Z_p whose coefficient tuple
/// `(c_{n-1}, ..., c_0)` is lexicographically smallest. Deterministic.
pub fn canonical_modulus(p: u64, n: u32) -> Vec<u64> {
    if n == 1 {
        // convention: x
        return vec![0, 1];
    }
    let count = p.pow(n);
    for i in 0..count {
        // digit j of i (little-endian) is c_j, so increasing i walks the
        // (c_{n-1}, ..., c_0) tuples in lexicographic order
        let mut coeffs = vec![0u64; n as usize + 1];
        coeffs[n as usize] = 1;
        let mut v = i;
        for c in coeffs.iter_mut().take(n as usize) {
            *c = v % p;
            v /= p;
        }
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible of every degree exists")
}

impl FieldSpec {
    pub fn canonical(p: u64, n: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n < 1 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        Ok(FieldSpec {
            p,
            n,
            modulus: canonical_modulus(p, n),
        })
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.n)
    }
}

impl Field {
    /// Builds the canonical field F_{p^n}.
    pub fn canonical(p: u64, n: u32) -> Result<Field> {
        Field::new(FieldSpec::canonical(p, n)?)
    }

    /// Builds a field from an explicit spec; the modulus must be monic,
    /// reduced, and irreducible.
    pub fn new(spec: FieldSpec) -> Result<Field> {
        if !is_prime(spec.p) {
            return Err(Error::NotPrime(spec.p));
        }
        let p = spec.p;
        let n = spec.n;
        if spec.modulus.len() != n as usize + 1
            || spec.modulus[n as usize] != 1
            || spec.modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::BadModulusShape { expected: n });
        }
        if !is_irreducible(&spec.modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        let canonical = spec.modulus == canonical_modulus(p, n);
        let q = spec.order();

        // neg table: digitwise negation of the coefficient tuple
        let mut neg_tab = vec![0u32; q];
        for (x, t) in neg_tab.iter_mut().enumerate() {
            let mut v = x;
            let mut out = 0usize;
            let mut place = 1usize;
            for _ in 0..n {
                let d = v % p as usize;
                let nd = if d == 0 { 0 } else { p as usize - d };
                out += nd * place;
                place *= p as usize;
                v /= p as usize;
            }
            *t = out as u32;
        }

        // raw polynomial multiply on indices (used only during table build)
        let idx_to_poly = |x: usize| -> Vec<u64> {
            let mut v = x;
            let mut c = vec![0u64; n as usize];
            for ci in c.iter_mut() {
                *ci = (v % p as usize) as u64;
                v /= p as usize;
            }
            poly_trim(&mut c);
            c
        };
        let poly_to_idx = |c: &[u64]| -> usize {
            let mut out = 0usize;
            let mut place = 1usize;
            for i in 0..n as usize {
                let d = if i < c.len() { c[i] as usize } else { 0 };
                out += d * place;
                place *= p as usize;
            }
            out
        };
        let raw_mul = |a: usize, b: usize| -> usize {
            poly_to_idx(&poly_mul_mod(
                &idx_to_poly(a),
                &idx_to_poly(b),
                &spec.modulus,
                p,
            ))
        };
        let raw_pow = |a: usize, e: u64| -> usize {
            poly_to_idx(&poly_pow_mod(&idx_to_poly(a), e, &spec.modulus, p))
        };

        // primitive element: smallest index of full multiplicative order
        let group_order = (q - 1) as u64;
        let factors = prime_factors(group_order);
        let mut sigma = 0usize;
        'outer: for cand in 2..q {
            for &r in &factors {
                if raw_pow(cand, group_order / r) == 1 {
                    continue 'outer;
                }
            }
            sigma = cand;
            break;
        }
        if q == 2 {
            sigma = 1; // trivial multiplicative group
        }
        assert!(sigma != 0, "no primitive element found");

        let mut exp = vec![0u32; q.max(2) - 1];
        let mut log = vec![0u32; q];
        let mut cur = 1usize;
        for (t, e) in exp.iter_mut().enumerate() {
            *e = cur as u32;
            log[cur] = t as u32;
            cur = raw_mul(cur, sigma);
        }
        debug_assert_eq!(cur, 1);

        // trace table: Tr(x) = sum of x^{p^i}
        let mut trace_tab = vec![0u8; q];
        let digit_add = |a: usize, b: usize| -> usize {
            let mut out = 0usize;
            let mut place = 1usize;
            let (mut va, mut vb) = (a, b);
            for _ in 0..n {
                let s = (va % p as usize + vb % p as usize) % p as usize;
                out += s * place;
                place *= p as usize;
                va /= p as usize;
                vb /= p as usize;
            }
            out
        };
        for x in 1..q {
            let t = log[x] as u64;
            let mut acc = 0usize;
            let mut pe = 1u64;
            for _ in 0..n {
                let conj = exp[((t * pe) % group_order) as usize] as usize;
                acc = digit_add(acc, conj);
                pe = pe * p % group_order.max(1);
            }
            debug_assert!(acc < p as usize, "trace must land in the prime subfield");
            trace_tab[x] = acc as u8;
        }

        Ok(Field {
            spec,
            q,
            exp,
            log,
            trace_tab,
            neg_tab,
            sigma,
            canonical,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    /// Field order p^n.
    pub fn order(&self) -> usize {
        self.q
    }

    /// Whether the modulus is the canonical (lex-smallest) one.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Coefficient tuple of an element, little-endian.
    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        let p = self.spec.p as usize;
        let mut v = x;
        let mut out = vec![0u64; self.spec.n as usize];
        for c in out.iter_mut() {
            *c = (v % p) as u64;
            v /= p;
        }
        out
    }

    /// Index from a coefficient tuple (entries reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Elem {
        let p = self.spec.p as usize;
        let mut out = 0usize;
        let mut place = 1usize;
        for i in 0..self.spec.n as usize {
            let d = if i < coeffs.len() {
                coeffs[i] as usize % p
            } else {
                0
            };
            out += d * place;
            place *= p;
        }
        out
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p as usize;
        let mut out = 0usize;
        let mut place = 1usize;
        let (mut va, mut vb) = (a, b);
        while va != 0 || vb != 0 {
            let s = (va % p + vb % p) % p;
            out += s * place;
            place *= p;
            va /= p;
            vb /= p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.neg_tab[a] as Elem
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let go = (self.q - 1) as u64;
        self.exp[((self.log[a] as u64 + self.log[b] as u64) % go) as usize] as Elem
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse {
                p: self.spec.p,
                n: self.spec.n,
            });
        }
        let go = (self.q - 1) as u64;
        Ok(self.exp[((go - self.log[a] as u64) % go) as usize] as Elem)
    }

    /// x^e with exponent reduction mod p^n - 1 for nonzero base; 0^0 = 1.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let go = (self.q - 1) as u64;
        let t = (self.log[a] as u128 * (e % go) as u128 % go as u128) as usize;
        self.exp[t] as Elem
    }

    /// Tr_n(x) as a value in Z_p.
    pub fn trace(&self, x: Elem) -> u8 {
        self.trace_tab[x]
    }

    /// The smallest-index multiplicative generator.
    pub fn primitive(&self) -> Elem {
        self.sigma
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::Precondition("order of zero undefined".into()));
        }
        let go = (self.q - 1) as u64;
        if go <= 1 {
            return Ok(1);
        }
        // order of sigma^t is (q-1)/gcd(t, q-1)
        let t = self.log[a] as u64;
        Ok(if t == 0 { 1 } else { go / gcd(t, go) })
    }

    /// The sequence sigma^0, sigma^1, ..., sigma^{p^n-2} for primitive sigma.
    pub fn element_powers(&self, sigma: Elem) -> Result<Vec<Elem>> {
        if sigma == 0 || (self.q > 2 && self.mult_order(sigma)? != (self.q - 1) as u64) {
            return Err(Error::NotPrimitive { index: sigma });
        }
        let mut out = Vec::with_capacity(self.q - 1);
        let mut cur = 1usize;
        for _ in 0..self.q - 1 {
            out.push(cur);
            cur = self.mul(cur, sigma);
        }
        Ok(out)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
