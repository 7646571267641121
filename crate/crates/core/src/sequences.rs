//! m-sequences, decimations, exact cross-correlation spectra, the bridge
//! between cross-correlation and the Walsh transform of Tr(x^d), and the
//! classical decimation families with three-valued cross-correlation.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{gcd, Elem, Field};
use crate::functions::trace_power;
use crate::walsh::walsh_fast;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// u(t) = Tr_n(sigma^t) for the canonical primitive element sigma, with
/// period p^n - 1.
#[derive(Clone)]
pub struct MSequence {
    pub field: Arc<Field>,
    pub sigma: Elem,
    pub values: Vec<u8>,
}

pub fn m_sequence(field: &Arc<Field>) -> MSequence {
    let sigma = field.primitive();
    let period = field.order() - 1;
    let mut values = Vec::with_capacity(period);
    let mut x = 1usize; // sigma^0
    for _ in 0..period {
        values.push(field.trace(x));
        x = field.mul(x, sigma);
    }
    MSequence {
        field: field.clone(),
        sigma,
        values,
    }
}

impl MSequence {
    pub fn period(&self) -> usize {
        self.values.len()
    }

    /// Occurrence counts per symbol; the m-sequence balance profile is
    /// (p^{n-1} - 1) zeros and p^{n-1} of every other symbol.
    pub fn value_profile(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.field.p() as usize];
        for &v in &self.values {
            counts[v as usize] += 1;
        }
        counts
    }
}

/// v(t) = u(dt mod (p^n - 1)).
pub fn decimate(u: &MSequence, d: u64) -> Vec<u8> {
    let per = u.period() as u64;
    (0..per).map(|t| u.values[(d * t % per) as usize]).collect()
}

/// Exact table tau -> theta(tau) in Z[zeta_p].
#[derive(Clone, Debug, Serialize)]
pub struct CrossCorrSpectrum {
    pub p: u64,
    pub values: Vec<CycInt>,
}

impl CrossCorrSpectrum {
    /// Sum over all shifts (recorded in reports, not gated).
    pub fn total(&self) -> CycInt {
        let mut acc = CycInt::zero(self.p);
        for v in &self.values {
            acc += *v;
        }
        acc
    }
}

/// theta(tau) = sum_t zeta^{u(t + tau) - v(t)}.
pub fn cross_correlation(u: &MSequence, v: &[u8]) -> Result<CrossCorrSpectrum> {
    let per = u.period();
    if v.len() != per {
        return Err(Error::Precondition(format!(
            "period mismatch: {} vs {}",
            per,
            v.len()
        )));
    }
    let p = u.field.p();
    let values: Vec<CycInt> = (0..per)
        .into_par_iter()
        .map(|tau| {
            let mut counts = vec![0i64; p as usize];
            for t in 0..per {
                let e = (u.values[(t + tau) % per] + p as u8 - v[t]) % p as u8;
                counts[e as usize] += 1;
            }
            CycInt::from_exponent_counts(p, &counts)
        })
        .collect();
    Ok(CrossCorrSpectrum { p, values })
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeReport {
    pub d: u64,
    pub holds: bool,
    pub witness_tau: Option<usize>,
}

/// Verifies theta(tau) = -1 + W_{F_1}(sigma^tau) exactly at every shift,
/// with theta from the sequence pipeline and W from the transform of
/// F_1 = Tr(x^d). Any mismatch indicates an indexing bug, not a finding.
pub fn walsh_bridge_check(field: &Arc<Field>, d: u64) -> Result<BridgeReport> {
    let u = m_sequence(field);
    let v = decimate(&u, d);
    let theta = cross_correlation(&u, &v)?;
    let f1 = trace_power(field.clone(), d);
    let w = walsh_fast(&f1);
    let minus_one = CycInt::from_int(field.p(), -1);
    let mut sigma_pow = 1usize; // sigma^tau
    let mut witness_tau = None;
    for tau in 0..u.period() {
        let rhs = minus_one.add(&w.values[sigma_pow]);
        if theta.values[tau] != rhs {
            witness_tau = Some(tau);
            break;
        }
        sigma_pow = field.mul(sigma_pow, u.sigma);
    }
    Ok(BridgeReport {
        d,
        holds: witness_tau.is_none(),
        witness_tau,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeValuedVerdict {
    pub three_valued: bool,
    /// s with theta in {-1, -1 +- p^{(n+s)/2}}, when three-valued.
    pub s: Option<u32>,
    /// Distinct rational values actually taken, sorted; None marks a
    /// non-rational entry in the spectrum.
    pub value_set: Option<Vec<i64>>,
}

/// Tests whether the spectrum lies in {-1, -1 + A, -1 - A} with
/// A = p^{(n+s)/2} for some integer s in [0, n] of the right parity.
pub fn three_valued_classify(spectrum: &CrossCorrSpectrum, p: u64, n: u32) -> ThreeValuedVerdict {
    let mut rational = Vec::with_capacity(spectrum.values.len());
    for v in &spectrum.values {
        match v.as_rational_integer() {
            Some(r) => rational.push(r),
            None => {
                return ThreeValuedVerdict {
                    three_valued: false,
                    s: None,
                    value_set: None,
                }
            }
        }
    }
    let mut value_set: Vec<i64> = rational.clone();
    value_set.sort_unstable();
    value_set.dedup();
    let s = (0..=n).filter(|s| (n + s) % 2 == 0).find(|&s| {
        let a = (p as i64).pow((n + s) / 2);
        value_set.iter().all(|&v| v == -1 || v == -1 + a || v == -1 - a)
            && value_set.contains(&(-1 + a))
            && value_set.contains(&(-1 - a))
            && value_set.contains(&-1)
    });
    ThreeValuedVerdict {
        three_valued: s.is_some(),
        s,
        value_set: Some(value_set),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KnownDecimation {
    pub d: u64,
    pub s: u32,
    /// gcd(p^n - 1, d), verified to be 1.
    pub gcd_certificate: u64,
}

/// The two classical decimations d = (p^{2k} + 1)/2 and d = p^{2k} - p^k + 1
/// with s = gcd(n, k), valid when n/s is odd; each comes with a computed
/// coprimality certificate against p^n - 1.
pub fn known_decimations(p: u64, n: u32, k: u32) -> Result<Vec<KnownDecimation>> {
    if p % 2 == 0 {
        return Err(Error::Precondition("requires an odd prime p".into()));
    }
    let s = gcd(n as u64, k as u64) as u32;
    if (n / s) % 2 == 0 {
        return Err(Error::Precondition(format!(
            "hypothesis violated: n/s = {} is even (n = {n}, k = {k}, s = {s})",
            n / s
        )));
    }
    let modulus = p.pow(n) - 1;
    let d1 = (p.pow(2 * k) + 1) / 2;
    let d2 = p.pow(2 * k) - p.pow(k) + 1;
    let out: Vec<KnownDecimation> = [d1, d2]
        .into_iter()
        .map(|d| KnownDecimation {
            d,
            s,
            gcd_certificate: gcd(modulus, d % modulus),
        })
        .collect();
    for kd in &out {
        if kd.gcd_certificate != 1 {
            return Err(Error::Precondition(format!(
                "decimation {} is not coprime to {} (gcd = {})",
                kd.d, modulus, kd.gcd_certificate
            )));
        }
    }
    Ok(out)
}
