//! Exact arithmetic in Z[zeta_p], the ring of integers generated by a
//! primitive p-th root of unity, in the power basis 1, zeta, ..., zeta^{p-2}.
//!
//! All coefficients are 64-bit integers with checked arithmetic: an
//! overflow aborts with a hard error rather than wrapping, since every
//! downstream criterion is an exact equality.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Largest supported p is 7, so at most 6 basis coefficients.
const MAX_COEFFS: usize = 6;

const OVERFLOW_MSG: &str =
    "cyclotomic coefficient overflow: value exceeds 64 bits, reduce the field degree";

#[inline]
fn ck_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect(OVERFLOW_MSG)
}

#[inline]
fn ck_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect(OVERFLOW_MSG)
}

/// An element of Z[zeta_p] for p in {2, 3, 5, 7}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u8,
    c: [i64; MAX_COEFFS],
}

impl CycInt {
    pub fn zero(p: u64) -> CycInt {
        assert!((2..=7).contains(&p), "unsupported characteristic {p}");
        CycInt {
            p: p as u8,
            c: [0; MAX_COEFFS],
        }
    }

    pub fn from_int(p: u64, v: i64) -> CycInt {
        let mut z = CycInt::zero(p);
        z.c[0] = v;
        z
    }

    pub fn one(p: u64) -> CycInt {
        CycInt::from_int(p, 1)
    }

    /// zeta_p^{e mod p} in reduced power-basis form.
    pub fn root_power(p: u64, e: i64) -> CycInt {
        let mut z = CycInt::zero(p);
        let e = e.rem_euclid(p as i64) as usize;
        if e < p as usize - 1 {
            z.c[e] = 1;
        } else {
            // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
            for i in 0..p as usize - 1 {
                z.c[i] = -1;
            }
        }
        z
    }

    /// Builds sum_e counts[e] * zeta^e from a length-p exponent histogram.
    pub fn from_exponent_counts(p: u64, counts: &[i64]) -> CycInt {
        debug_assert_eq!(counts.len(), p as usize);
        let mut z = CycInt::zero(p);
        let k = p as usize - 1;
        for (e, &cnt) in counts.iter().enumerate() {
            if e < k {
                z.c[e] = ck_add(z.c[e], cnt);
            } else {
                for i in 0..k {
                    z.c[i] = ck_add(z.c[i], -cnt);
                }
            }
        }
        z
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c[..self.p as usize - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&x| x == 0)
    }

    pub fn add(&self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mixed characteristics");
        let mut out = *self;
        for i in 0..self.p as usize - 1 {
            out.c[i] = ck_add(out.c[i], rhs.c[i]);
        }
        out
    }

    pub fn sub(&self, rhs: &CycInt) -> CycInt {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CycInt {
        let mut out = *self;
        for x in out.c.iter_mut() {
            *x = x.checked_neg().expect(OVERFLOW_MSG);
        }
        out
    }

    pub fn scale(&self, k: i64) -> CycInt {
        let mut out = *self;
        for x in out.c.iter_mut() {
            *x = ck_mul(*x, k);
        }
        out
    }

    pub fn mul(&self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mixed characteristics");
        let k = self.p as usize - 1;
        // expand to exponents 0..2k-2, then reduce
        let mut acc = [0i64; 2 * MAX_COEFFS];
        for i in 0..k {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..k {
                if rhs.c[j] == 0 {
                    continue;
                }
                acc[i + j] = ck_add(acc[i + j], ck_mul(self.c[i], rhs.c[j]));
            }
        }
        reduce(self.p, &mut acc)
    }

    /// Multiplication by zeta^e; cheap exponent rotation.
    pub fn mul_root(&self, e: i64) -> CycInt {
        let p = self.p as usize;
        let k = p - 1;
        let e = e.rem_euclid(p as i64) as usize;
        let mut acc = [0i64; 2 * MAX_COEFFS];
        for i in 0..k {
            acc[(i + e) % p] = ck_add(acc[(i + e) % p], self.c[i]);
        }
        reduce(self.p, &mut acc)
    }

    /// Complex conjugation, the ring map zeta -> zeta^{p-1}.
    pub fn conj(&self) -> CycInt {
        let p = self.p as usize;
        let k = p - 1;
        let mut acc = [0i64; 2 * MAX_COEFFS];
        for i in 0..k {
            let e = (i * k) % p; // i * (p-1) mod p = p - i for i >= 1
            acc[e] = ck_add(acc[e], self.c[i]);
        }
        reduce(self.p, &mut acc)
    }

    /// a * conj(a); lies in the real subfield.
    pub fn norm_sq(&self) -> CycInt {
        self.mul(&self.conj())
    }

    /// Some(c_0) when all higher basis coefficients vanish.
    pub fn as_rational_integer(&self) -> Option<i64> {
        if self.coeffs()[1..].iter().all(|&x| x == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    /// |a|^2 as a rational integer, when it is one.
    pub fn rational_norm_sq(&self) -> Option<i64> {
        self.norm_sq().as_rational_integer()
    }

    /// Numeric embedding at zeta = e^{2 pi i / p}; test oracle only.
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.p as f64;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (i, &c) in self.coeffs().iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / p;
            re += c as f64 * theta.cos();
            im += c as f64 * theta.sin();
        }
        (re, im)
    }
}

/// Reduces an exponent-indexed accumulator (entries for zeta^0..zeta^{2p-4})
/// to the power basis.
fn reduce(p: u8, acc: &mut [i64; 2 * MAX_COEFFS]) -> CycInt {
    let pu = p as usize;
    let k = pu - 1;
    // fold exponents >= p down by p (zeta^p = 1)
    for e in (pu..2 * k - 1).rev() {
        if acc[e] != 0 {
            acc[e - pu] = ck_add(acc[e - pu], acc[e]);
            acc[e] = 0;
        }
    }
    // zeta^{p-1} = -(1 + ... + zeta^{p-2})
    let top = acc[k];
    let mut out = CycInt::zero(p as u64);
    for i in 0..k {
        out.c[i] = ck_add(acc[i], -top);
    }
    out
}

impl std::fmt::Debug for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CycInt(p={}, {:?})", self.p, self.coeffs())
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs().len()))?;
        for c in self.coeffs() {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl std::ops::Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        CycInt::add(&self, &rhs)
    }
}

impl std::ops::Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        CycInt::sub(&self, &rhs)
    }
}

impl std::ops::Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        CycInt::mul(&self, &rhs)
    }
}

impl std::ops::AddAssign for CycInt {
    fn add_assign(&mut self, rhs: CycInt) {
        *self = CycInt::add(self, &rhs);
    }
}
