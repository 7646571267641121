//! The matrix characterization of plateaued functions (MM*M = p^{n+s} M),
//! its corollaries (second-derivative double sum, autocorrelation energy),
//! the Kronecker and direct-sum constructions, partially bent detection,
//! and the design-theoretic factorization of the graph development.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::functions::{derivative, graph_pary, PAryFunction};
use crate::pgds::{expected_graph_params, PgdsParams};
use crate::walsh::{classify_function, delta_transform, SpectrumClass};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Dense matrix budget (maximum dimension); overridable through the
/// PLATEAU_LAB_BUDGET environment variable.
pub fn matrix_budget() -> usize {
    std::env::var("PLATEAU_LAB_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(243)
}

fn check_budget(dim: usize) -> Result<()> {
    let budget = matrix_budget();
    if dim > budget {
        Err(Error::SizeBudget { size: dim, budget })
    } else {
        Ok(())
    }
}

/// Dense square matrix over Z[zeta_p].
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    pub dim: usize,
    pub p: u64,
    data: Vec<CycInt>,
}

impl CycMatrix {
    pub fn new(dim: usize, p: u64) -> CycMatrix {
        CycMatrix {
            dim,
            p,
            data: vec![CycInt::zero(p); dim * dim],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> &CycInt {
        &self.data[x * self.dim + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: CycInt) {
        self.data[x * self.dim + y] = v;
    }

    pub fn mul(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let data: Vec<CycInt> = (0..dim * dim)
            .into_par_iter()
            .map(|idx| {
                let (x, y) = (idx / dim, idx % dim);
                let mut acc = CycInt::zero(self.p);
                for k in 0..dim {
                    acc += self.get(x, k).mul(rhs.get(k, y));
                }
                acc
            })
            .collect();
        CycMatrix {
            dim,
            p: self.p,
            data,
        }
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        let dim = self.dim;
        let mut out = CycMatrix::new(dim, self.p);
        for x in 0..dim {
            for y in 0..dim {
                out.set(y, x, self.get(x, y).conj());
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> CycMatrix {
        CycMatrix {
            dim: self.dim,
            p: self.p,
            data: self.data.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// Kronecker product, blocks ordered row-major by self's index.
    pub fn kronecker(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.p, rhs.p);
        let dim = self.dim * rhs.dim;
        let mut out = CycMatrix::new(dim, self.p);
        for x1 in 0..self.dim {
            for y1 in 0..self.dim {
                let a = self.get(x1, y1);
                for x2 in 0..rhs.dim {
                    for y2 in 0..rhs.dim {
                        out.set(
                            x1 * rhs.dim + x2,
                            y1 * rhs.dim + y2,
                            a.mul(rhs.get(x2, y2)),
                        );
                    }
                }
            }
        }
        out
    }

    /// First entry where self != rhs * k.
    fn mismatch_against_scaled(&self, rhs: &CycMatrix, k: &CycInt) -> Option<(usize, usize)> {
        for x in 0..self.dim {
            for y in 0..self.dim {
                if *self.get(x, y) != rhs.get(x, y).mul(k) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// M with m_{x,y} = zeta^{f(x+y)}; symmetric by commutativity of addition.
pub fn build_m(f: &PAryFunction) -> Result<CycMatrix> {
    let fld = &f.field;
    let q = fld.order();
    check_budget(q)?;
    let p = fld.p();
    let mut m = CycMatrix::new(q, p);
    for x in 0..q {
        for y in 0..q {
            m.set(x, y, CycInt::root_power(p, f.values[fld.add(x, y)] as i64));
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct MmmReport {
    /// MM*M is exactly p^{n+s} M for this s.
    pub s: Option<u32>,
    pub proportional: bool,
    /// First entry violating proportionality, when any.
    pub witness: Option<(usize, usize)>,
    pub class: SpectrumClass,
    pub agrees_with_classify: bool,
}

/// Exact verification of MM*M = p^{n+s} M, with the scale factor read off
/// the matrices themselves and cross-checked against the spectrum verdict.
pub fn verify_mmm(f: &PAryFunction) -> Result<MmmReport> {
    let m = build_m(f)?;
    let a = m.mul(&m.conj_transpose()).mul(&m);
    // every entry of M is a root of unity, so the candidate scale factor is
    // A_{00} * conj(M_{00})
    let candidate = a.get(0, 0).mul(&m.get(0, 0).conj());
    let witness = a.mismatch_against_scaled(&m, &candidate);
    let n = f.field.n();
    let p = f.field.p() as i64;
    let s = match (witness, candidate.as_rational_integer()) {
        (None, Some(c)) => (n..=2 * n).find(|&e| p.checked_pow(e).is_some() && p.pow(e) == c),
        _ => None,
    }
    .map(|e| e - n);
    let class = classify_function(f);
    let agrees = s == class.plateaued_s();
    assert!(
        agrees,
        "matrix identity and spectrum classification disagree: s = {s:?} vs {class:?}"
    );
    Ok(MmmReport {
        s,
        proportional: witness.is_none(),
        witness,
        class,
        agrees_with_classify: agrees,
    })
}

/// Sum over all (a, b) of zeta^{D_a D_b f(u)} for a fixed u.
pub fn second_derivative_sum(f: &PAryFunction, u: Elem) -> CycInt {
    let fld = &f.field;
    let q = fld.order();
    let p = fld.p();
    let pz = p as usize;
    let mut counts = vec![0i64; pz];
    // D_a D_b f(u) = f(u+a+b) - f(u+a) - f(u+b) + f(u)
    let fu = f.values[u] as usize;
    for a in 0..q {
        let ua = fld.add(u, a);
        for b in 0..q {
            let e = (f.values[fld.add(ua, b)] as usize + fu + 2 * pz
                - f.values[ua] as usize
                - f.values[fld.add(u, b)] as usize)
                % pz;
            counts[e] += 1;
        }
    }
    CycInt::from_exponent_counts(p, &counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondDerivativeReport {
    pub constant: bool,
    /// The common value when constant (as a rational integer if it is one).
    pub value: Option<CycInt>,
    pub witness_u: Option<Elem>,
    pub matches_p_pow_n_plus_s: bool,
}

/// Checks that the double sum is independent of u and equals p^{n+s}.
pub fn verify_second_derivative_sum(f: &PAryFunction) -> SecondDerivativeReport {
    let q = f.field.order();
    let sums: Vec<CycInt> = (0..q)
        .into_par_iter()
        .map(|u| second_derivative_sum(f, u))
        .collect();
    let first = sums[0];
    let witness_u = (1..q).find(|&u| sums[u] != first);
    let constant = witness_u.is_none();
    let class = classify_function(f);
    let matches = constant
        && match class.plateaued_s() {
            Some(s) => {
                first.as_rational_integer() == Some((f.field.p() as i64).pow(f.field.n() + s))
            }
            None => false,
        };
    SecondDerivativeReport {
        constant,
        value: if constant { Some(first) } else { None },
        witness_u,
        matches_p_pow_n_plus_s: matches,
    }
}

/// Total autocorrelation energy sum_a |Delta_f(a)|^2 as a rational integer.
pub fn delta_energy(f: &PAryFunction) -> i64 {
    let delta = delta_transform(f);
    let mut total = CycInt::zero(f.field.p());
    for d in &delta {
        total += d.norm_sq();
    }
    total
        .as_rational_integer()
        .expect("an autocorrelation energy is a rational integer")
}

#[derive(Clone, Debug, Serialize)]
pub struct KroneckerReport {
    pub skipped: bool,
    pub reason: Option<String>,
    pub s1: Option<u32>,
    pub s2: Option<u32>,
    pub factor: Option<i64>,
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

/// Builds P = M_f (x) M_g and verifies PP*P = p^{n+m+s1+s2} P.
pub fn kronecker_verify(f: &PAryFunction, g: &PAryFunction) -> Result<KroneckerReport> {
    if f.field.p() != g.field.p() {
        return Err(Error::Precondition(
            "Kronecker factors must share the characteristic".into(),
        ));
    }
    check_budget(f.field.order() * g.field.order())?;
    let s1 = classify_function(f).plateaued_s();
    let s2 = classify_function(g).plateaued_s();
    let (s1v, s2v) = match (s1, s2) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Ok(KroneckerReport {
                skipped: true,
                reason: Some("an input function is not plateaued".into()),
                s1,
                s2,
                factor: None,
                holds: false,
                witness: None,
            })
        }
    };
    let p = f.field.p() as i64;
    let factor = p.pow(f.field.n() + g.field.n() + s1v + s2v);
    let pm = build_m(f)?.kronecker(&build_m(g)?);
    let triple = pm.mul(&pm.conj_transpose()).mul(&pm);
    let witness = triple.mismatch_against_scaled(&pm, &CycInt::from_int(f.field.p(), factor));
    Ok(KroneckerReport {
        skipped: false,
        reason: None,
        s1,
        s2,
        factor: Some(factor),
        holds: witness.is_none(),
        witness,
    })
}

/// h on F_{p^{n1+n2}} (canonical modulus) with h(x) = f(w) + g(u), where u
/// is the first n2 base-p coordinates of x and w the remaining n1; an
/// (s1+s2)-plateaued function when f, g are s1-, s2-plateaued.
pub fn direct_sum(f: &PAryFunction, g: &PAryFunction) -> Result<PAryFunction> {
    let p = f.field.p();
    if p != g.field.p() {
        return Err(Error::Precondition(
            "direct sum requires a common characteristic".into(),
        ));
    }
    let big = Arc::new(Field::canonical(p, f.field.n() + g.field.n())?);
    let qg = g.field.order();
    let values: Vec<u8> = (0..big.order())
        .map(|x| (f.values[x / qg] + g.values[x % qg]) % p as u8)
        .collect();
    PAryFunction::new(big, values)
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearStructureSpace {
    pub members: Vec<Elem>,
    /// c_a with D_a f = c_a, aligned with members.
    pub constants: Vec<u8>,
    /// a -> c_a is itself additive (checked, not assumed).
    pub constants_additive: bool,
}

impl LinearStructureSpace {
    pub fn dim(&self, p: u64) -> u32 {
        let mut d = 0;
        let mut v = 1usize;
        while v < self.members.len() {
            v *= p as usize;
            d += 1;
        }
        assert_eq!(v, self.members.len(), "linear space size is not a p power");
        d
    }
}

/// All a with D_a f constant, with the constants; asserts subgroup closure.
pub fn linear_structures(f: &PAryFunction) -> LinearStructureSpace {
    let fld = &f.field;
    let q = fld.order();
    let mut members = Vec::new();
    let mut constants = Vec::new();
    let mut constant_of = vec![None::<u8>; q];
    for a in 0..q {
        let d = derivative(f, a);
        let c = d.values[0];
        if d.values.iter().all(|&v| v == c) {
            members.push(a);
            constants.push(c);
            constant_of[a] = Some(c);
        }
    }
    let p = fld.p() as u8;
    let mut additive = true;
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            let ab = fld.add(a, b);
            match constant_of[ab] {
                None => panic!("linear structures are not closed under addition"),
                Some(c) => {
                    if c != (constants[i] + constants[j]) % p {
                        additive = false;
                    }
                }
            }
        }
    }
    LinearStructureSpace {
        members,
        constants,
        constants_additive: additive,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartiallyBentReport {
    pub partially_bent: bool,
    /// An a with D_a f neither balanced nor constant, when rejected.
    pub witness: Option<Elem>,
    pub lambda_dim: Option<u32>,
    pub class: SpectrumClass,
    /// classify(f) = SPlateaued(s) with p^s = |Lambda|.
    pub consistent: bool,
}

/// Every derivative balanced or constant; on success |Lambda| = p^s with s
/// the plateau order of f.
pub fn is_partially_bent(f: &PAryFunction) -> PartiallyBentReport {
    let fld = &f.field;
    let q = fld.order();
    let p = fld.p() as usize;
    let target = q / p;
    let mut witness = None;
    for a in 0..q {
        let d = derivative(f, a);
        let c = d.values[0];
        if d.values.iter().all(|&v| v == c) {
            continue;
        }
        let mut counts = vec![0usize; p];
        for &v in &d.values {
            counts[v as usize] += 1;
        }
        if counts.iter().any(|&c| c != target) {
            witness = Some(a);
            break;
        }
    }
    let partially_bent = witness.is_none();
    let class = classify_function(f);
    let (lambda_dim, consistent) = if partially_bent {
        let dim = linear_structures(f).dim(fld.p());
        (Some(dim), class.plateaued_s() == Some(dim))
    } else {
        (None, true)
    };
    PartiallyBentReport {
        partially_bent,
        witness,
        lambda_dim,
        class,
        consistent,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaReport {
    pub lambda_size: usize,
    pub holds_on_lambda: bool,
    /// Elements off Lambda where T_a nevertheless equals G_f (recorded,
    /// not asserted either way).
    pub equal_off_lambda: Vec<Elem>,
}

/// For T_a = {(x + a, f(x) + f(a))}: asserts T_a = G_f for every a in
/// Lambda. Requires f(0) = 0.
pub fn t_a_lemma_check(f: &PAryFunction) -> Result<TaReport> {
    if f.values[0] != 0 {
        return Err(Error::Precondition("lemma hypothesis f(0) = 0 violated".into()));
    }
    let fld = &f.field;
    let q = fld.order();
    let p = fld.p() as u8;
    let lambda = linear_structures(f);
    // T_a = G_f iff f(x + a) = f(x) + f(a) for all x
    let translates_to_graph = |a: Elem| -> bool {
        (0..q).all(|x| f.values[fld.add(x, a)] == (f.values[x] + f.values[a]) % p)
    };
    let holds_on_lambda = lambda.members.iter().all(|&a| translates_to_graph(a));
    assert!(holds_on_lambda, "T_a = G_f failed on the linear space");
    let lambda_set: Vec<bool> = {
        let mut s = vec![false; q];
        for &a in &lambda.members {
            s[a] = true;
        }
        s
    };
    let equal_off_lambda = (0..q)
        .filter(|&a| !lambda_set[a] && translates_to_graph(a))
        .collect();
    Ok(TaReport {
        lambda_size: lambda.members.len(),
        holds_on_lambda,
        equal_off_lambda,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignReport {
    pub point_count: usize,
    pub multiplicity_constant: bool,
    pub block_multiplicity: Option<usize>,
    pub distinct_blocks: usize,
    pub lambda_dim: u32,
    pub params: PgdsParams,
    pub identity_holds: bool,
}

/// Development design of the graph of f inside F_{p^n} x F_p: all group
/// translates as blocks. Confirms constant block multiplicity p^{dim
/// Lambda}, extracts the reduced incidence matrix N (one column per
/// distinct block), and verifies NN^tN = ((beta-alpha)/p^m') N +
/// (alpha/p^m') J exactly in integer arithmetic.
pub fn design_factorization_check(f: &PAryFunction) -> Result<DesignReport> {
    let fld = &f.field;
    let q = fld.order();
    let p = fld.p() as usize;
    let v = q * p;
    if v > 729 {
        return Err(Error::SizeBudget {
            size: v,
            budget: 729,
        });
    }
    if f.values[0] != 0 {
        return Err(Error::Precondition("requires f(0) = 0".into()));
    }
    let class = classify_function(f);
    let s = class.plateaued_s().ok_or_else(|| {
        Error::Precondition("design factorization requires a plateaued function".into())
    })?;
    let lambda = linear_structures(f);
    let lambda_dim = lambda.dim(fld.p());
    if lambda_dim < 1 {
        return Err(Error::Precondition(
            "requires a nontrivial linear structure space".into(),
        ));
    }
    let graph = graph_pary(f);

    // translate of the graph by group element (g, h), as a sorted point set
    let translate = |g: Elem, h: usize| -> Vec<usize> {
        let mut block: Vec<usize> = graph
            .members
            .iter()
            .map(|&m| {
                let (x, y) = (m % q, m / q);
                fld.add(x, g) + q * ((y + h) % p)
            })
            .collect();
        block.sort_unstable();
        block
    };
    let mut block_counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for g in 0..q {
        for h in 0..p {
            *block_counts.entry(translate(g, h)).or_insert(0) += 1;
        }
    }
    let mult = *block_counts.values().next().unwrap();
    let multiplicity_constant = block_counts.values().all(|&c| c == mult);
    let distinct = block_counts.len();
    let expected_mult = p.pow(lambda_dim);
    let params = expected_graph_params(fld.p(), fld.n(), 1, s)?;
    if !multiplicity_constant || mult != expected_mult {
        return Ok(DesignReport {
            point_count: v,
            multiplicity_constant,
            block_multiplicity: if multiplicity_constant { Some(mult) } else { None },
            distinct_blocks: distinct,
            lambda_dim,
            params,
            identity_holds: false,
        });
    }

    // reduced incidence matrix N: v x distinct, 0/1
    let mut n_mat = vec![vec![0i64; distinct]; v];
    for (j, block) in block_counts.keys().enumerate() {
        for &pt in block {
            n_mat[pt][j] = 1;
        }
    }
    // NN^t, then (NN^t)N
    let mut nnt = vec![vec![0i64; v]; v];
    for x in 0..v {
        for y in 0..v {
            let mut acc = 0i64;
            for j in 0..distinct {
                acc += n_mat[x][j] * n_mat[y][j];
            }
            nnt[x][y] = acc;
        }
    }
    let pm = mult as i64;
    let coeff_n = (params.beta - params.alpha) / pm;
    let coeff_j = params.alpha / pm;
    let divisible =
        (params.beta - params.alpha) % pm == 0 && params.alpha % pm == 0;
    let mut identity_holds = divisible;
    'outer: for x in 0..v {
        if !identity_holds {
            break;
        }
        for j in 0..distinct {
            let mut acc = 0i64;
            for y in 0..v {
                acc += nnt[x][y] * n_mat[y][j];
            }
            if acc != coeff_n * n_mat[x][j] + coeff_j {
                identity_holds = false;
                break 'outer;
            }
        }
    }
    Ok(DesignReport {
        point_count: v,
        multiplicity_constant,
        block_multiplicity: Some(mult),
        distinct_blocks: distinct,
        lambda_dim,
        params,
        identity_holds,
    })
}
