//! Exact Walsh transforms over F_{p^n}, spectrum classification, the
//! autocorrelation table, and convolution.
//!
//! The fast transform runs over the additive group (isomorphic to Z_p^n):
//! Tr(mu x) is rewritten in coordinates through the trace pairing, the table
//! is transformed axis by axis with p-point butterflies, and the result is
//! permuted back to element indexing. Cost O(n p^{n+1}) ring operations.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::functions::{component, derivative, PAryFunction, VectorialFunction};
use rayon::prelude::*;
use serde::Serialize;

/// The table mu -> W(mu) of Walsh values in Z[zeta_p].
pub struct WalshSpectrum {
    pub values: Vec<CycInt>,
    pub p: u64,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Bent,
    SPlateaued,
    NotPlateaued,
}

/// Classification of a spectrum: bent, s-plateaued, or neither (with the
/// first offending mu as witness).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumClass {
    pub kind: SpectrumKind,
    pub s: Option<u32>,
    pub amplitude_sq: Option<i64>,
    pub support_size: usize,
    pub witness: Option<usize>,
}

impl SpectrumClass {
    pub fn is_plateaued(&self) -> bool {
        self.kind != SpectrumKind::NotPlateaued
    }

    pub fn plateaued_s(&self) -> Option<u32> {
        self.s
    }
}

fn parseval_check(field: &Field, values: &[CycInt]) {
    // individual |W(mu)|^2 may be irrational for p >= 5, but the total
    // lies in Z
    let q = field.order() as i64;
    let mut total = CycInt::zero(field.p());
    for v in values {
        total += v.norm_sq();
    }
    assert_eq!(
        total.as_rational_integer(),
        Some(q.checked_mul(q).unwrap()),
        "Parseval identity violated"
    );
}

/// Direct double-loop Walsh transform; the reference oracle.
pub fn walsh_naive(f: &PAryFunction) -> WalshSpectrum {
    let field = &f.field;
    let p = field.p();
    let q = field.order();
    let mut values = Vec::with_capacity(q);
    for mu in 0..q {
        let mut counts = vec![0i64; p as usize];
        for x in 0..q {
            let e = (f.values[x] + p as u8 - field.trace(field.mul(mu, x))) % p as u8;
            counts[e as usize] += 1;
        }
        values.push(CycInt::from_exponent_counts(p, &counts));
    }
    parseval_check(field, &values);
    WalshSpectrum {
        values,
        p,
        n: field.n(),
    }
}

/// In-place multidimensional DFT over Z_p^n with kernel zeta^{sign <x,y>}.
fn additive_dft(p: usize, n: u32, table: &mut [CycInt], sign: i64) {
    let mut stride = 1usize;
    let mut line = vec![CycInt::zero(p as u64); p];
    for _ in 0..n {
        let block = stride * p;
        let mut base = 0;
        while base < table.len() {
            for off in 0..stride {
                for (j, l) in line.iter_mut().enumerate() {
                    *l = table[base + off + j * stride];
                }
                for k in 0..p {
                    let mut acc = CycInt::zero(p as u64);
                    for (j, l) in line.iter().enumerate() {
                        acc += l.mul_root(sign * (j * k) as i64);
                    }
                    table[base + off + k * stride] = acc;
                }
            }
            base += block;
        }
        stride = block;
    }
}

/// mu -> y permutation induced by the trace pairing: y_j = Tr(basis_j * mu).
fn trace_coordinates(field: &Field, mu: Elem) -> usize {
    let p = field.p() as usize;
    let mut y = 0usize;
    let mut place = 1usize;
    let mut basis = 1usize; // index of x^j is p^j
    for _ in 0..field.n() {
        y += field.trace(field.mul(basis, mu)) as usize * place;
        place *= p;
        basis *= p;
    }
    y
}

/// Transform of an arbitrary CycInt table: mu -> sum_x t(x) zeta^{sign Tr(mu x)}.
/// `sign = -1` gives the Walsh/Fourier kernel of the forward transform.
pub fn fourier_table(field: &Field, table: &[CycInt], sign: i64) -> Vec<CycInt> {
    assert_eq!(table.len(), field.order());
    let mut work = table.to_vec();
    additive_dft(field.p() as usize, field.n(), &mut work, sign);
    (0..field.order())
        .map(|mu| work[trace_coordinates(field, mu)])
        .collect()
}

/// Fast Walsh transform; identical output to `walsh_naive`.
pub fn walsh_fast(f: &PAryFunction) -> WalshSpectrum {
    let field = &f.field;
    let p = field.p();
    let table: Vec<CycInt> = f
        .values
        .iter()
        .map(|&v| CycInt::root_power(p, v as i64))
        .collect();
    let values = fourier_table(field, &table, -1);
    parseval_check(field, &values);
    WalshSpectrum {
        values,
        p,
        n: field.n(),
    }
}

/// Classifies a spectrum; s is inferred, never supplied.
pub fn classify(spectrum: &WalshSpectrum) -> SpectrumClass {
    let p = spectrum.p as i64;
    let n = spectrum.n;
    let q = spectrum.values.len();
    let mut amplitude: Option<i64> = None;
    let mut support = 0usize;
    for (mu, v) in spectrum.values.iter().enumerate() {
        let norm = match v.rational_norm_sq() {
            Some(x) => x,
            None => return not_plateaued(mu, support),
        };
        if norm == 0 {
            continue;
        }
        support += 1;
        match amplitude {
            None => amplitude = Some(norm),
            Some(a) if a == norm => {}
            Some(_) => return not_plateaued(mu, support),
        }
    }
    let amp = amplitude.expect("Parseval forbids an all-zero spectrum");
    // amp must be p^{n+s} with integer s in [0, n]
    let mut e = 0u32;
    let mut v = amp;
    while v % p == 0 {
        v /= p;
        e += 1;
    }
    if v != 1 || e < n || e > 2 * n {
        return not_plateaued(0, support);
    }
    let s = e - n;
    // support = p^{n-s}, mutually redundant with the amplitude via Parseval
    assert_eq!(support, (p as usize).pow(n - s), "Parseval inconsistency");
    let _ = q;
    SpectrumClass {
        kind: if s == 0 {
            SpectrumKind::Bent
        } else {
            SpectrumKind::SPlateaued
        },
        s: Some(s),
        amplitude_sq: Some(amp),
        support_size: support,
        witness: None,
    }
}

fn not_plateaued(witness: usize, support: usize) -> SpectrumClass {
    SpectrumClass {
        kind: SpectrumKind::NotPlateaued,
        s: None,
        amplitude_sq: None,
        support_size: support,
        witness: Some(witness),
    }
}

pub fn classify_function(f: &PAryFunction) -> SpectrumClass {
    classify(&walsh_fast(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum VectorialVerdict {
    /// Every nonzero component is s-plateaued for the same s.
    SPlateaued { s: u32 },
    /// All components plateaued but with mixed s.
    PlateauedMixed,
    /// Some component is not plateaued.
    Not { witness_b: usize },
}

#[derive(Serialize)]
pub struct VectorialClassification {
    /// Per-component classes, index i holds component b = i + 1.
    pub components: Vec<SpectrumClass>,
    pub verdict: VectorialVerdict,
}

/// Classifies every nonzero component of F; deterministic regardless of
/// evaluation order.
pub fn classify_vectorial(func: &VectorialFunction) -> VectorialClassification {
    let qm = func.codomain.order();
    let components: Vec<SpectrumClass> = (1..qm)
        .into_par_iter()
        .map(|b| classify_function(&component(func, b).expect("b nonzero")))
        .collect();
    let verdict = if let Some(i) = components.iter().position(|c| !c.is_plateaued()) {
        VectorialVerdict::Not { witness_b: i + 1 }
    } else {
        let s0 = components[0].s.unwrap();
        if components.iter().all(|c| c.s == Some(s0)) {
            VectorialVerdict::SPlateaued { s: s0 }
        } else {
            VectorialVerdict::PlateauedMixed
        }
    };
    VectorialClassification {
        components,
        verdict,
    }
}

/// Autocorrelation table a -> Delta_f(a) = sum_x zeta^{D_a f(x)}.
pub fn delta_transform(f: &PAryFunction) -> Vec<CycInt> {
    let field = &f.field;
    let p = field.p();
    let q = field.order();
    (0..q)
        .map(|a| {
            let da = derivative(f, a);
            let mut counts = vec![0i64; p as usize];
            for &v in &da.values {
                counts[v as usize] += 1;
            }
            CycInt::from_exponent_counts(p, &counts)
        })
        .collect()
}

/// (F * G)(a) = sum_x F(x) G(x - a), exact, over the additive group.
pub fn convolve(field: &Field, f: &[CycInt], g: &[CycInt]) -> Result<Vec<CycInt>> {
    let q = field.order();
    if f.len() != q || g.len() != q {
        return Err(Error::Precondition(
            "convolution tables must match the group order".into(),
        ));
    }
    Ok((0..q)
        .map(|a| {
            let mut acc = CycInt::zero(field.p());
            for x in 0..q {
                acc += f[x].mul(&g[field.sub(x, a)]);
            }
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::functions::trace_power;
    use std::sync::Arc;

    fn f9() -> Arc<Field> {
        Arc::new(Field::canonical(3, 2).unwrap())
    }

    fn f27() -> Arc<Field> {
        Arc::new(Field::canonical(3, 3).unwrap())
    }

    #[test]
    fn zero_function_spectrum() {
        let fld = f9();
        let f = PAryFunction::zero(fld.clone());
        for w in [walsh_naive(&f), walsh_fast(&f)] {
            assert_eq!(w.values[0].as_rational_integer(), Some(9));
            assert!(w.values[1..].iter().all(|v| v.is_zero()));
        }
        let c = classify(&walsh_naive(&f));
        assert_eq!(c.kind, SpectrumKind::SPlateaued);
        assert_eq!(c.s, Some(2));
        assert_eq!(c.amplitude_sq, Some(81));
        assert_eq!(c.support_size, 1);
    }

    #[test]
    fn linear_function_has_singleton_support() {
        let fld = f27();
        let c = 11usize;
        let f = PAryFunction::linear(fld.clone(), c);
        let w = walsh_naive(&f);
        for (mu, v) in w.values.iter().enumerate() {
            if mu == c {
                assert_eq!(v.as_rational_integer(), Some(27));
            } else {
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn tr_x2_over_f9_is_bent() {
        let f = trace_power(f9(), 2);
        let w = walsh_naive(&f);
        assert!(w.values.iter().all(|v| v.rational_norm_sq() == Some(9)));
        let c = classify(&w);
        assert_eq!(c.kind, SpectrumKind::Bent);
        assert_eq!(c.s, Some(0));
    }

    #[test]
    fn tr_x5_over_f27_is_1_plateaued() {
        let f = trace_power(f27(), 5);
        let c = classify(&walsh_fast(&f));
        assert_eq!(c.kind, SpectrumKind::SPlateaued);
        assert_eq!(c.s, Some(1));
        assert_eq!(c.amplitude_sq, Some(81));
        assert_eq!(c.support_size, 9);
    }

    #[test]
    fn fast_equals_naive_exhaustive_small_and_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2u64, 4u32), (3, 3), (5, 2)] {
            let fld = Arc::new(Field::canonical(p, n).unwrap());
            for _ in 0..20 {
                let values: Vec<u8> =
                    (0..fld.order()).map(|_| rng.gen_range(0..p) as u8).collect();
                let f = PAryFunction::new(fld.clone(), values).unwrap();
                assert_eq!(walsh_naive(&f).values, walsh_fast(&f).values);
            }
        }
    }

    #[test]
    fn classify_vectorial_identity_and_x5() {
        let fld = f27();
        let id = crate::functions::power_map(fld.clone(), 1);
        let v = classify_vectorial(&id);
        assert_eq!(v.verdict, VectorialVerdict::SPlateaued { s: 3 });
        let x5 = crate::functions::power_map(fld.clone(), 5);
        let v = classify_vectorial(&x5);
        assert_eq!(v.verdict, VectorialVerdict::SPlateaued { s: 1 });
    }

    #[test]
    fn x2_over_f9_is_planar() {
        let x2 = crate::functions::power_map(f9(), 2);
        let v = classify_vectorial(&x2);
        assert_eq!(v.verdict, VectorialVerdict::SPlateaued { s: 0 });
    }

    #[test]
    fn delta_transform_shapes() {
        let fld = f9();
        let f = trace_power(fld.clone(), 2);
        let d = delta_transform(&f);
        assert_eq!(d[0].as_rational_integer(), Some(9));
        assert!(d[1..].iter().all(|v| v.is_zero()));
        // linear function: |Delta(a)|^2 = p^{2n} everywhere
        let lin = PAryFunction::linear(fld, 5);
        for v in delta_transform(&lin) {
            assert_eq!(v.rational_norm_sq(), Some(81));
        }
    }

    #[test]
    fn convolution_identities() {
        let fld = f27();
        let q = fld.order();
        // delta at zero is the identity for convolution
        let mut delta0 = vec![CycInt::zero(3); q];
        delta0[0] = CycInt::one(3);
        let t: Vec<CycInt> = (0..q).map(|i| CycInt::from_int(3, i as i64 % 5 - 2)).collect();
        assert_eq!(convolve(&fld, &t, &delta0).unwrap(), t);
        // all-ones * all-ones = constant p^n
        let ones = vec![CycInt::one(3); q];
        let c = convolve(&fld, &ones, &ones).unwrap();
        assert!(c.iter().all(|v| v.as_rational_integer() == Some(27)));
    }

    #[test]
    fn convolution_theorem_exact() {
        use rand::{Rng, SeedableRng};
        let fld = f9();
        let q = fld.order();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f: Vec<CycInt> = (0..q)
                .map(|_| {
                    CycInt::root_power(3, rng.gen_range(0..3))
                        .scale(rng.gen_range(-3..4))
                })
                .collect();
            let g: Vec<CycInt> = (0..q)
                .map(|_| {
                    CycInt::root_power(3, rng.gen_range(0..3))
                        .scale(rng.gen_range(-3..4))
                })
                .collect();
            let conv = convolve(&fld, &f, &g).unwrap();
            let lhs = fourier_table(&fld, &conv, -1);
            let fh = fourier_table(&fld, &f, -1);
            // with (F*G)(a) = sum F(x)G(x-a), the product pairs F^(mu) with G^(-mu)
            let gh = fourier_table(&fld, &g, -1);
            for mu in 0..q {
                assert_eq!(lhs[mu], fh[mu].mul(&gh[fld.neg(mu)]));
            }
        }
    }

    #[test]
    fn inversion_recovers_the_function() {
        let fld = f27();
        let f = trace_power(fld.clone(), 5);
        let w = walsh_fast(&f);
        // p^n zeta^{f(x)} = sum_mu W(mu) zeta^{+Tr(mu x)}
        let back = fourier_table(&fld, &w.values, 1);
        for x in 0..fld.order() {
            assert_eq!(
                back[x],
                CycInt::root_power(3, f.values[x] as i64).scale(27)
            );
        }
    }
}
