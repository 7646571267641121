//! Partial geometric difference set verification, by exhaustive
//! difference counts and independently by character sums, together with
//! the graph parameter formulas, the second-derivative count
//! characterization, the ternary partition construction and its converse.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::functions::{level_sets, trace_power, vectorial_derivative, PAryFunction, VectorialFunction};
use crate::walsh::{classify_function, SpectrumClass, SpectrumKind};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// An elementary abelian group with enumerable characters: either the
/// additive group of one field or of a product of two fields over the
/// same prime.
#[derive(Clone)]
pub enum AbelianGroup {
    Additive(Arc<Field>),
    Product(Arc<Field>, Arc<Field>),
}

impl AbelianGroup {
    pub fn product(a: Arc<Field>, b: Arc<Field>) -> Result<AbelianGroup> {
        if a.p() != b.p() {
            return Err(Error::Precondition(
                "product group factors must share the characteristic".into(),
            ));
        }
        Ok(AbelianGroup::Product(a, b))
    }

    pub fn order(&self) -> usize {
        match self {
            AbelianGroup::Additive(f) => f.order(),
            AbelianGroup::Product(a, b) => a.order() * b.order(),
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            AbelianGroup::Additive(f) => f.p(),
            AbelianGroup::Product(a, _) => a.p(),
        }
    }

    pub fn sub(&self, g: usize, h: usize) -> usize {
        match self {
            AbelianGroup::Additive(f) => f.sub(g, h),
            AbelianGroup::Product(a, b) => {
                let qa = a.order();
                a.sub(g % qa, h % qa) + qa * b.sub(g / qa, h / qa)
            }
        }
    }

    pub fn add(&self, g: usize, h: usize) -> usize {
        match self {
            AbelianGroup::Additive(f) => f.add(g, h),
            AbelianGroup::Product(a, b) => {
                let qa = a.order();
                a.add(g % qa, h % qa) + qa * b.add(g / qa, h / qa)
            }
        }
    }

    /// Exponent of chi_chi(g) as a power of zeta_p; chi = 0 is principal.
    pub fn char_exponent(&self, chi: usize, g: usize) -> u8 {
        match self {
            AbelianGroup::Additive(f) => f.trace(f.mul(chi, g)),
            AbelianGroup::Product(fa, fb) => {
                let qa = fa.order();
                let (a, b) = (chi % qa, chi / qa);
                let (x, y) = (g % qa, g / qa);
                (fa.trace(fa.mul(a, x)) + fb.trace(fb.mul(b, y))) % self.p() as u8
            }
        }
    }

    /// chi(S) as an exact cyclotomic integer.
    pub fn char_sum(&self, chi: usize, set: &[usize]) -> CycInt {
        let p = self.p();
        let mut counts = vec![0i64; p as usize];
        for &s in set {
            counts[self.char_exponent(chi, s) as usize] += 1;
        }
        CycInt::from_exponent_counts(p, &counts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PgdsParams {
    pub v: i64,
    pub k: i64,
    pub alpha: i64,
    pub beta: i64,
}

impl PgdsParams {
    /// Double-counting identity k^3 = (beta - alpha) k + alpha v.
    pub fn consistent(&self) -> bool {
        self.k.pow(3) == (self.beta - self.alpha) * self.k + self.alpha * self.v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Delta,
    Character,
}

#[derive(Clone, Debug, Serialize)]
pub struct PgdsVerdict {
    pub is_pgds: bool,
    pub params: Option<PgdsParams>,
    /// Group element (delta method) or character index (character method)
    /// where verification first breaks.
    pub witness: Option<usize>,
    pub method: Method,
}

/// delta(g) = #{(s,t) in S x S : g = s - t}, for every g.
pub fn delta_table(set: &[usize], group: &AbelianGroup) -> Vec<i64> {
    let mut table = vec![0i64; group.order()];
    for &s in set {
        for &t in set {
            table[group.sub(s, t)] += 1;
        }
    }
    table
}

fn check_set(set: &[usize], group: &AbelianGroup) -> Result<()> {
    let v = group.order();
    if set.iter().any(|&s| s >= v) {
        return Err(Error::Precondition("set member outside the group".into()));
    }
    let mut seen = vec![false; v];
    for &s in set {
        if seen[s] {
            return Err(Error::Precondition("duplicate set member".into()));
        }
        seen[s] = true;
    }
    if set.len() <= 2 || set.len() >= v {
        return Err(Error::Precondition(format!(
            "PGDS definition requires 2 < k < v (k = {}, v = {})",
            set.len(),
            v
        )));
    }
    Ok(())
}

/// Exhaustive verification straight from the defining delta-count sums.
pub fn verify_pgds_delta(set: &[usize], group: &AbelianGroup) -> Result<PgdsVerdict> {
    check_set(set, group)?;
    let v = group.order();
    let delta = delta_table(set, group);
    let mut member = vec![false; v];
    for &s in set {
        member[s] = true;
    }
    let mut alpha: Option<i64> = None;
    let mut beta: Option<i64> = None;
    for x in 0..v {
        let mut t = 0i64;
        for &y in set {
            t += delta[group.sub(x, y)];
        }
        let slot = if member[x] { &mut beta } else { &mut alpha };
        match *slot {
            None => *slot = Some(t),
            Some(c) if c == t => {}
            Some(_) => {
                return Ok(PgdsVerdict {
                    is_pgds: false,
                    params: None,
                    witness: Some(x),
                    method: Method::Delta,
                })
            }
        }
    }
    let params = PgdsParams {
        v: v as i64,
        k: set.len() as i64,
        alpha: alpha.expect("k < v leaves a non-member"),
        beta: beta.expect("k > 0"),
    };
    debug_assert!(params.consistent());
    Ok(PgdsVerdict {
        is_pgds: true,
        params: Some(params),
        witness: None,
        method: Method::Delta,
    })
}

/// Independent verification through the character-sum criterion: S is a
/// PGDS iff |chi(S)|^2 takes at most one nonzero value over non-principal
/// characters; (alpha, beta) are then recovered from the counting identity.
pub fn verify_pgds_character(set: &[usize], group: &AbelianGroup) -> Result<PgdsVerdict> {
    check_set(set, group)?;
    let v = group.order();
    let k = set.len() as i64;
    let fail = |witness: usize| PgdsVerdict {
        is_pgds: false,
        params: None,
        witness: Some(witness),
        method: Method::Character,
    };
    // parallel scan; verdict reduced to the smallest witness index
    let norms: Vec<Option<i64>> = (1..v)
        .into_par_iter()
        .map(|chi| group.char_sum(chi, set).rational_norm_sq())
        .collect();
    let mut theta: Option<i64> = None;
    for (i, n) in norms.iter().enumerate() {
        let n = match n {
            Some(n) => *n,
            None => return Ok(fail(i + 1)),
        };
        if n == 0 {
            continue;
        }
        match theta {
            None => theta = Some(n),
            Some(t) if t == n => {}
            Some(_) => return Ok(fail(i + 1)),
        }
    }
    let theta = theta.unwrap_or(0);
    // k^3 = theta k + alpha v
    let num = k.pow(3) - theta * k;
    if num % v as i64 != 0 || num < 0 {
        // criterion held formally but the parameters are non-integral:
        // internal inconsistency, reported as failure
        return Ok(fail(0));
    }
    let alpha = num / v as i64;
    let params = PgdsParams {
        v: v as i64,
        k,
        alpha,
        beta: theta + alpha,
    };
    debug_assert!(params.consistent());
    Ok(PgdsVerdict {
        is_pgds: true,
        params: Some(params),
        witness: None,
        method: Method::Character,
    })
}

/// Graph parameters of an s-plateaued F: F_{p^n} -> F_{p^m} predicted by
/// the character argument: v = p^{n+m}, k = p^n,
/// alpha = p^{2n-m} - p^{n+s-m}, beta = p^{n+s} + alpha.
pub fn expected_graph_params(p: u64, n: u32, m: u32, s: u32) -> Result<PgdsParams> {
    if s > n {
        return Err(Error::Precondition("s must satisfy 0 <= s <= n".into()));
    }
    if m > n + s {
        return Err(Error::Precondition(format!(
            "alpha is non-integral: m = {m} exceeds n + s = {}",
            n + s
        )));
    }
    let p = p as i64;
    let alpha = p.pow(2 * n - m) - p.pow(n + s - m);
    let beta = p.pow(n + s) + alpha;
    Ok(PgdsParams {
        v: p.pow(n + m),
        k: p.pow(n),
        alpha,
        beta,
    })
}

/// N_F(c, x) = #{(t, a) : D_t F(a) - D_t F(x) = c}, by exhaustive count.
pub fn n_f_counts(func: &VectorialFunction, c: Elem, x: Elem) -> i64 {
    n_f_histogram(func, x)[c]
}

fn n_f_histogram(func: &VectorialFunction, x: Elem) -> Vec<i64> {
    let dom = &func.domain;
    let cod = &func.codomain;
    let q = dom.order();
    let mut hist = vec![0i64; cod.order()];
    // precompute D_t F(x) over t
    let dx: Vec<Elem> = (0..q)
        .map(|t| cod.sub(func.values[dom.add(x, t)], func.values[x]))
        .collect();
    for t in 0..q {
        for a in 0..q {
            let dta = cod.sub(func.values[dom.add(a, t)], func.values[a]);
            hist[cod.sub(dta, dx[t])] += 1;
        }
    }
    hist
}

#[derive(Clone, Debug, Serialize)]
pub struct NfReport {
    pub two_valued: bool,
    pub alpha: Option<i64>,
    pub beta: Option<i64>,
    /// First (c, x) where the two-valued shape breaks.
    pub witness: Option<(usize, usize)>,
    /// Verdict of the graph delta verifier, for the cross-check.
    pub graph_verdict: PgdsVerdict,
    pub consistent_with_graph: bool,
}

/// Checks that N_F(c, x) depends only on whether c = 0, uniformly in x,
/// and cross-checks the equivalence with the graph PGDS verdict.
pub fn verify_nf_characterization(func: &VectorialFunction) -> Result<NfReport> {
    let q = func.domain.order();
    let mut alpha: Option<i64> = None;
    let mut beta: Option<i64> = None;
    let mut witness: Option<(usize, usize)> = None;
    'outer: for x in 0..q {
        let hist = n_f_histogram(func, x);
        for (c, &count) in hist.iter().enumerate() {
            let slot = if c == 0 { &mut beta } else { &mut alpha };
            match *slot {
                None => *slot = Some(count),
                Some(v) if v == count => {}
                Some(_) => {
                    witness = Some((c, x));
                    break 'outer;
                }
            }
        }
    }
    let two_valued = witness.is_none();
    let g = crate::functions::graph(func);
    let group = AbelianGroup::product(func.domain.clone(), func.codomain.clone())?;
    let graph_verdict = verify_pgds_delta(&g.members, &group)?;
    let consistent = two_valued == graph_verdict.is_pgds
        && (!two_valued
            || graph_verdict.params.map(|p| (p.alpha, p.beta))
                == Some((alpha.unwrap_or(0), beta.unwrap())));
    Ok(NfReport {
        two_valued,
        alpha: if two_valued { alpha } else { None },
        beta: if two_valued { beta } else { None },
        witness,
        graph_verdict,
        consistent_with_graph: consistent,
    })
}

/// Plancherel over the full character group: sum_chi |chi(S)|^2 = v k,
/// unconditionally.
pub fn group_ring_lemma_check(set: &[usize], group: &AbelianGroup) -> bool {
    let v = group.order();
    let mut total = CycInt::zero(group.p());
    for chi in 0..v {
        total += group.char_sum(chi, set).norm_sq();
    }
    total.as_rational_integer() == Some(v as i64 * set.len() as i64)
}

// ---- the ternary partition theorem and its converse ----

#[derive(Clone, Debug, Serialize)]
pub struct SetVerdictPair {
    pub size: usize,
    pub delta: PgdsVerdict,
    pub character: PgdsVerdict,
    pub methods_agree: bool,
    pub matches_stated_params: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleCheck {
    /// C = 3^{(n+s-2)/2}; absent when n + s is odd.
    pub c: Option<i64>,
    /// Characters a where (x_a, y_a) lands in a case the proof excludes.
    pub violations: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub d: u64,
    pub trace_class: SpectrumClass,
    pub stated_params: PgdsParams,
    /// beta - alpha from the proof's amplitude, 3^{n+s-2}; differs from the
    /// stated parameters when s != 1 (flagged, not failed).
    pub amplitude_mismatch_flag: bool,
    pub sets: Vec<SetVerdictPair>,
    pub all_pgds: bool,
    pub tuple_check: Option<TupleCheck>,
}

/// Runs the full level-set verification of Tr(x^d) over F_{3^n}.
pub fn verify_partition_theorem(field: &Arc<Field>, d: u64) -> Result<PartitionReport> {
    if field.p() != 3 || field.n() < 3 {
        return Err(Error::Precondition(
            "partition theorem requires p = 3 and n >= 3".into(),
        ));
    }
    let n = field.n();
    let f1 = trace_power(field.clone(), d);
    let sets = level_sets(&f1);
    let trace_class = classify_function(&f1);
    let stated_params = PgdsParams {
        v: 3i64.pow(n),
        k: 3i64.pow(n - 1),
        alpha: 3i64.pow(2 * n - 3) - 3i64.pow(n - 2),
        beta: 3i64.pow(n - 1) + 3i64.pow(2 * n - 3) - 3i64.pow(n - 2),
    };
    let s = trace_class.s;
    let amplitude_mismatch_flag = match s {
        Some(s) => s != 1,
        None => true,
    };
    let group = AbelianGroup::Additive(field.clone());
    let degenerate = |method: Method| PgdsVerdict {
        is_pgds: false,
        params: None,
        witness: None,
        method,
    };
    let verdicts: Vec<SetVerdictPair> = sets
        .par_iter()
        .map(|set| -> Result<SetVerdictPair> {
            // a level set outside 2 < k < v fails the definition outright
            // (e.g. a constant trace power), rather than erroring the run
            if set.len() <= 2 || set.len() >= field.order() {
                return Ok(SetVerdictPair {
                    size: set.len(),
                    delta: degenerate(Method::Delta),
                    character: degenerate(Method::Character),
                    methods_agree: true,
                    matches_stated_params: false,
                });
            }
            let delta = verify_pgds_delta(set, &group)?;
            let character = verify_pgds_character(set, &group)?;
            let methods_agree =
                delta.is_pgds == character.is_pgds && delta.params == character.params;
            let matches_stated = delta.is_pgds && delta.params == Some(stated_params);
            Ok(SetVerdictPair {
                size: set.len(),
                delta,
                character,
                methods_agree,
                matches_stated_params: matches_stated,
            })
        })
        .collect::<Result<_>>()?;
    let all_pgds = verdicts.iter().all(|v| v.delta.is_pgds);

    // re-derive the proof's (x_a, y_a) decomposition of chi_a(D_1) and
    // check the realized tuples avoid the excluded cases
    let tuple_check = s.map(|s| {
        let c_int = if (n + s) % 2 == 0 {
            Some(3i64.pow((n + s - 2) / 2))
        } else {
            None
        };
        let violations = match c_int {
            None => Vec::new(),
            Some(c) => {
                let allowed = [(0, 0), (0, c), (0, -c), (c, c), (-c, -c)];
                (1..field.order())
                    .filter(|&a| {
                        let chi = group.char_sum(a, &sets[1]);
                        let (xa, ya) = (chi.coeffs()[0], chi.coeffs()[1]);
                        !allowed.contains(&(xa, ya))
                    })
                    .collect()
            }
        };
        TupleCheck {
            c: c_int,
            violations,
        }
    });

    Ok(PartitionReport {
        d,
        trace_class,
        stated_params,
        amplitude_mismatch_flag,
        sets: verdicts,
        all_pgds,
        tuple_check,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConverseReport {
    pub partition_ok: bool,
    /// lambda = 3^{(n+s-1)/2} for an integer s in [0, n].
    pub lambda_ok: bool,
    pub s: Option<u32>,
    pub pgds_ok: [bool; 3],
    pub membership_ok: bool,
    pub membership_witness: Option<(usize, usize)>,
    /// 0: all sizes equal; 1 / 2: the two unbalanced cases; None: no case fits.
    pub cardinality_case: Option<u8>,
    pub inner_product_ok: bool,
    pub all_hypotheses_hold: bool,
    pub constructed_class: Option<SpectrumClass>,
}

/// Hypothesis-by-hypothesis check of the converse construction: given a
/// partition D_0, D_1, D_2 of F_{3^n} and lambda, verify every stated
/// hypothesis, and only on full success build f (value i on D_i) and
/// classify it. Returns a diagnosis either way.
pub fn converse_partition_check(
    field: &Arc<Field>,
    parts: &[Vec<Elem>; 3],
    lambda: i64,
) -> Result<(ConverseReport, Option<PAryFunction>)> {
    if field.p() != 3 {
        return Err(Error::Precondition("converse construction requires p = 3".into()));
    }
    let n = field.n();
    let q = field.order();

    // partition hypothesis
    let mut seen = vec![false; q];
    let mut partition_ok = parts.iter().map(Vec::len).sum::<usize>() == q;
    'p: for part in parts {
        for &x in part {
            if x >= q || seen[x] {
                partition_ok = false;
                break 'p;
            }
            seen[x] = true;
        }
    }

    // lambda = 3^{(n+s-1)/2} with 0 <= s <= n
    let mut e = 0u32;
    let mut v = lambda;
    while v > 1 && v % 3 == 0 {
        v /= 3;
        e += 1;
    }
    let lambda_power_of_3 = lambda >= 1 && v == 1;
    let s_signed = 2 * e as i64 + 1 - n as i64;
    let lambda_ok = lambda_power_of_3 && (0..=n as i64).contains(&s_signed);
    let s = if lambda_ok { Some(s_signed as u32) } else { None };

    if !partition_ok || !lambda_ok {
        return Ok((
            ConverseReport {
                partition_ok,
                lambda_ok,
                s,
                pgds_ok: [false; 3],
                membership_ok: false,
                membership_witness: None,
                cardinality_case: None,
                inner_product_ok: false,
                all_hypotheses_hold: false,
                constructed_class: None,
            },
            None,
        ));
    }
    let s_val = s.unwrap();
    let group = AbelianGroup::Additive(field.clone());

    let mut pgds_ok = [false; 3];
    for (i, part) in parts.iter().enumerate() {
        pgds_ok[i] = verify_pgds_delta(part, &group)
            .map(|v| v.is_pgds)
            .unwrap_or(false);
    }

    // chi_a(D_i) in {0, +-lambda, +-lambda zeta, +-lambda zeta^2}
    let allowed: Vec<CycInt> = {
        let mut out = vec![CycInt::zero(3)];
        for e in 0..3 {
            let z = CycInt::root_power(3, e).scale(lambda);
            out.push(z);
            out.push(z.neg());
        }
        out
    };
    let mut membership_ok = true;
    let mut membership_witness = None;
    'm: for a in 1..q {
        for (i, part) in parts.iter().enumerate() {
            let chi = group.char_sum(a, part);
            if !allowed.contains(&chi) {
                membership_ok = false;
                membership_witness = Some((a, i));
                break 'm;
            }
        }
    }

    // cardinality trichotomy
    let sizes = [parts[0].len() as i64, parts[1].len() as i64, parts[2].len() as i64];
    let base = 3i64.pow(n - 1);
    let t = if (n + s_val) % 2 == 0 {
        Some(3i64.pow((n + s_val - 2) / 2))
    } else {
        None
    };
    let cardinality_case = if sizes.iter().all(|&x| x == base) {
        Some(0u8)
    } else if let Some(t) = t {
        let matches_case = |lo: i64, hi: i64| {
            (0..3).any(|k| {
                (0..3).all(|i| sizes[i] == if i == k { hi } else { lo })
            })
        };
        if matches_case(base - t, base + 2 * t) {
            Some(1)
        } else if matches_case(base + t, base - 2 * t) {
            Some(2)
        } else {
            None
        }
    } else {
        None
    };

    // |<z_a, e>|^2 in {0, 3 lambda^2} with z_a the character-sum triple
    // and e = (1, zeta, zeta^2)
    let three_lambda_sq = 3 * lambda * lambda;
    let inner_product_ok = (1..q).all(|a| {
        let mut w = group.char_sum(a, &parts[0]);
        w += group.char_sum(a, &parts[1]).mul_root(1);
        w += group.char_sum(a, &parts[2]).mul_root(2);
        matches!(w.rational_norm_sq(), Some(x) if x == 0 || x == three_lambda_sq)
    });

    let all = pgds_ok.iter().all(|&b| b)
        && membership_ok
        && cardinality_case.is_some()
        && inner_product_ok;

    let (constructed_class, func) = if all {
        let mut values = vec![0u8; q];
        for (i, part) in parts.iter().enumerate() {
            for &x in part {
                values[x] = i as u8;
            }
        }
        let f = PAryFunction::new(field.clone(), values)?;
        let class = classify_function(&f);
        assert_eq!(
            class.s,
            Some(s_val),
            "converse hypotheses held but the constructed function is not s-plateaued"
        );
        assert_ne!(class.kind, SpectrumKind::NotPlateaued);
        (Some(class), Some(f))
    } else {
        (None, None)
    };

    Ok((
        ConverseReport {
            partition_ok,
            lambda_ok,
            s,
            pgds_ok,
            membership_ok,
            membership_witness,
            cardinality_case,
            inner_product_ok,
            all_hypotheses_hold: all,
            constructed_class,
        },
        func,
    ))
}

/// Checks the proof-step spectrum shift for permutation power maps:
/// for b = c^d, the component spectra satisfy W_{F_b}(a) = W_{F_1}(a / c).
pub fn component_shift_check(func: &VectorialFunction, c: Elem) -> Result<bool> {
    let dom = &func.domain;
    if c == 0 {
        return Err(Error::Precondition("c must be nonzero".into()));
    }
    let _ = vectorial_derivative(func, 0); // touch: func must be total
    let d_of_c = func.values[c];
    let f_b = crate::functions::component(func, d_of_c)?;
    let f_1 = crate::functions::component(func, 1)?;
    let wb = crate::walsh::walsh_fast(&f_b);
    let w1 = crate::walsh::walsh_fast(&f_1);
    let cinv = dom.inv(c)?;
    Ok((0..dom.order()).all(|a| wb.values[a] == w1.values[dom.mul(a, cinv)]))
}

// ---- set file format ----

/// Parses the set file format: a group descriptor header ("v", "p n", or
/// "p n m" followed by modulus lines as in the truth-table format), then one
/// member index per line.
pub fn read_set_file(text: &str) -> Result<(AbelianGroup, Vec<usize>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("expected integer, got '{t}'"),
            })
        })
        .collect::<Result<_>>()?;
    let next_modulus = |lines: &mut dyn Iterator<Item = (usize, &str)>,
                            p: u64,
                            deg: u32|
     -> Result<Arc<Field>> {
        let (ln, l) = lines.next().ok_or(Error::Parse {
            line: ln + 1,
            msg: "missing modulus line".into(),
        })?;
        let modulus: Vec<u64> = l
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: ln,
                    msg: format!("expected integer, got '{t}'"),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Arc::new(Field::new(FieldSpec { p, n: deg, modulus }).map_err(
            |e| Error::Parse {
                line: ln,
                msg: format!("bad modulus: {e}"),
            },
        )?))
    };
    let group = match nums.len() {
        1 => {
            // bare order: must be a prime power p^n; the canonical field is used
            let v = nums[0];
            let mut p = 2;
            while v % p != 0 {
                p += 1;
                if p * p > v {
                    p = v;
                    break;
                }
            }
            let mut n = 0u32;
            let mut rem = v;
            while rem % p == 0 {
                rem /= p;
                n += 1;
            }
            if rem != 1 || n == 0 {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("group order {v} is not a prime power"),
                });
            }
            AbelianGroup::Additive(Arc::new(Field::canonical(p, n).map_err(|e| {
                Error::Parse {
                    line: ln,
                    msg: format!("{e}"),
                }
            })?))
        }
        2 => AbelianGroup::Additive(next_modulus(&mut lines, nums[0], nums[1] as u32)?),
        3 => {
            let dom = next_modulus(&mut lines, nums[0], nums[1] as u32)?;
            let cod = next_modulus(&mut lines, nums[0], nums[2] as u32)?;
            AbelianGroup::product(dom, cod).map_err(|e| Error::Parse {
                line: ln,
                msg: format!("{e}"),
            })?
        }
        k => {
            return Err(Error::Parse {
                line: ln,
                msg: format!("header must have 1..3 fields, got {k}"),
            })
        }
    };
    let v = group.order();
    let mut members = Vec::new();
    for (ln, l) in lines {
        let idx: usize = l.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("expected member index, got '{l}'"),
        })?;
        if idx >= v {
            return Err(Error::Parse {
                line: ln,
                msg: format!("member index {idx} outside group of order {v}"),
            });
        }
        members.push(idx);
    }
    Ok((group, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{graph, power_map};
    use crate::walsh::{classify_vectorial, VectorialVerdict};

    fn f27() -> Arc<Field> {
        Arc::new(Field::canonical(3, 3).unwrap())
    }

    #[test]
    fn delta_table_of_a_subgroup() {
        // D_0 of the trace over F_9 is a subgroup of order 3
        let f9 = Arc::new(Field::canonical(3, 2).unwrap());
        let sub: Vec<usize> = (0..9).filter(|&x| f9.trace(x) == 0).collect();
        assert_eq!(sub.len(), 3);
        let g = AbelianGroup::Additive(f9.clone());
        let table = delta_table(&sub, &g);
        for x in 0..9 {
            let expect = if sub.contains(&x) { 3 } else { 0 };
            assert_eq!(table[x], expect);
        }
        assert_eq!(table.iter().sum::<i64>(), 9);
        assert_eq!(table[0], sub.len() as i64);
    }

    #[test]
    fn graph_of_x2_over_f3_is_a_semiregular_rds() {
        let f3 = Arc::new(Field::canonical(3, 1).unwrap());
        let sq = power_map(f3.clone(), 2);
        let g = graph(&sq);
        let group = AbelianGroup::product(f3.clone(), f3.clone()).unwrap();
        let table = delta_table(&g.members, &group);
        // (3,3,3,1)-RDS: delta(0) = 3, delta = 1 off the forbidden subgroup
        // {0} x F_3, delta = 0 on its nonzero part
        assert_eq!(table[0], 3);
        for y in 1..3 {
            assert_eq!(table[3 * y], 0);
        }
        for x in 1..3 {
            for y in 0..3 {
                assert_eq!(table[x + 3 * y], 1);
            }
        }
        let v = verify_pgds_delta(&g.members, &group).unwrap();
        assert!(v.is_pgds);
    }

    #[test]
    fn subgroup_is_a_pgds_with_alpha_zero() {
        let f27 = f27();
        let sub: Vec<usize> = (0..27).filter(|&x| f27.trace(x) == 0).collect();
        let g = AbelianGroup::Additive(f27.clone());
        let d = verify_pgds_delta(&sub, &g).unwrap();
        assert!(d.is_pgds);
        let k = sub.len() as i64;
        assert_eq!(d.params.unwrap().alpha, 0);
        assert_eq!(d.params.unwrap().beta, k * k);
        let c = verify_pgds_character(&sub, &g).unwrap();
        assert_eq!(c.params, d.params);
    }

    #[test]
    fn x5_graph_is_a_pgds_with_the_theorem_parameters() {
        let fld = f27();
        let x5 = power_map(fld.clone(), 5);
        let g = graph(&x5);
        let group = AbelianGroup::product(fld.clone(), fld.clone()).unwrap();
        let d = verify_pgds_delta(&g.members, &group).unwrap();
        assert!(d.is_pgds);
        let expect = PgdsParams {
            v: 729,
            k: 27,
            alpha: 24,
            beta: 105,
        };
        assert_eq!(d.params, Some(expect));
        let c = verify_pgds_character(&g.members, &group).unwrap();
        assert!(c.is_pgds);
        assert_eq!(c.params, Some(expect));
        assert_eq!(expected_graph_params(3, 3, 3, 1).unwrap(), expect);
    }

    #[test]
    fn expected_params_specializations() {
        // p-ary case m = 1: beta - alpha = p^{n+s}, v = p^{n+1}
        let p = expected_graph_params(3, 4, 1, 2).unwrap();
        assert_eq!(p.beta - p.alpha, 3i64.pow(6));
        assert_eq!(p.v, 3i64.pow(5));
        // bent graph parameters at p = 3, n = 2
        let b = expected_graph_params(3, 2, 1, 0).unwrap();
        assert_eq!(
            b,
            PgdsParams {
                v: 27,
                k: 9,
                alpha: 3i64.pow(3) - 3,
                beta: 3i64.pow(3) - 3 + 9
            }
        );
        assert!(expected_graph_params(3, 2, 4, 1).is_err());
        assert!(b.consistent());
    }

    #[test]
    fn nf_counts_for_linear_maps() {
        let fld = f27();
        let lin = power_map(fld.clone(), 3); // Frobenius, additive
        assert_eq!(n_f_counts(&lin, 0, 5), 27 * 27);
        assert_eq!(n_f_counts(&lin, 1, 5), 0);
        // counting identity
        let total: i64 = (0..27).map(|c| n_f_counts(&lin, c, 4)).sum();
        assert_eq!(total, 27 * 27);
    }

    #[test]
    fn nf_characterization_matches_graph_verdict() {
        let fld = f27();
        for d in [1u64, 3, 5, 7] {
            let f = power_map(fld.clone(), d);
            let rep = verify_nf_characterization(&f).unwrap();
            assert!(rep.consistent_with_graph, "d = {d}");
            let cls = classify_vectorial(&f);
            let plateaued = matches!(cls.verdict, VectorialVerdict::SPlateaued { .. });
            assert_eq!(rep.two_valued, plateaued, "d = {d}");
        }
    }

    #[test]
    fn group_ring_lemma_on_arbitrary_sets() {
        let fld = f27();
        let g = AbelianGroup::Additive(fld.clone());
        let f5 = trace_power(fld.clone(), 5);
        let sets = level_sets(&f5);
        assert!(group_ring_lemma_check(&sets[1], &g));
        assert!(group_ring_lemma_check(&[], &g));
        let arbitrary: Vec<usize> = vec![0, 1, 5, 9, 13, 14, 20];
        assert!(group_ring_lemma_check(&arbitrary, &g));
    }

    #[test]
    fn partition_theorem_holds_at_n3_d5() {
        let fld = f27();
        let rep = verify_partition_theorem(&fld, 5).unwrap();
        assert!(rep.all_pgds);
        assert!(!rep.amplitude_mismatch_flag);
        let expect = PgdsParams {
            v: 27,
            k: 9,
            alpha: 24,
            beta: 33,
        };
        for s in &rep.sets {
            assert!(s.methods_agree);
            assert!(s.matches_stated_params);
            assert_eq!(s.delta.params, Some(expect));
        }
        let t = rep.tuple_check.unwrap();
        assert_eq!(t.c, Some(3));
        assert!(t.violations.is_empty());
    }

    #[test]
    fn linear_trace_partition_is_cosets() {
        let fld = f27();
        let rep = verify_partition_theorem(&fld, 1).unwrap();
        // level sets of a linear trace are subgroup cosets; verdict computed
        for s in &rep.sets {
            assert!(s.methods_agree);
        }
        assert!(rep.amplitude_mismatch_flag); // s = n != 1
    }

    #[test]
    fn converse_reconstruction_roundtrip() {
        // balanced level sets of a 2-plateaued function over F_{3^3}: take
        // f = Tr(x) (linear, s = 3) -- character sums are 0 or +-27*zeta^e?
        // Use instead Tr(x^5) with lambda from its amplitude when integral.
        // n = 3, s = 1 gives lambda = 3^{3/2}, non-integral: hypothesis
        // check must reject lambda = 5 (not a power of 3) and lambda = 3
        // (s = 0 but membership fails).
        let fld = f27();
        let f5 = trace_power(fld.clone(), 5);
        let sets = level_sets(&f5);
        let parts = [sets[0].clone(), sets[1].clone(), sets[2].clone()];
        let (rep, f) = converse_partition_check(&fld, &parts, 5).unwrap();
        assert!(!rep.lambda_ok);
        assert!(f.is_none());
        // lambda = 3 corresponds to s = 2e+1-n = 0; the real amplitude is
        // 3^{n+1}, so the membership test must reject with a witness
        let (rep, f) = converse_partition_check(&fld, &parts, 3).unwrap();
        assert!(rep.lambda_ok && rep.partition_ok);
        assert!(!rep.all_hypotheses_hold);
        assert!(f.is_none());
    }

    #[test]
    fn converse_hypotheses_clash_on_cardinality_parity() {
        // An integral lambda = 3^{(n+s-1)/2} forces n + s odd, but then the
        // unbalanced cardinality cases need 3^{(n+s-2)/2}, which is not an
        // integer. A bent function (here Tr(x^2) over F_{3^3}, lambda = 3)
        // satisfies the PGDS, membership, and inner-product hypotheses on
        // the nose yet has three distinct level-set sizes, so the checker
        // must report exactly the cardinality case as unmet.
        let fld = f27();
        let f = trace_power(fld.clone(), 2);
        let sets = level_sets(&f);
        let parts = [sets[0].clone(), sets[1].clone(), sets[2].clone()];
        let (rep, g) = converse_partition_check(&fld, &parts, 3).unwrap();
        assert!(rep.lambda_ok && rep.partition_ok);
        assert!(rep.pgds_ok.iter().all(|&b| b), "{rep:?}");
        assert!(rep.membership_ok && rep.inner_product_ok, "{rep:?}");
        assert_eq!(rep.cardinality_case, None);
        assert!(!rep.all_hypotheses_hold);
        assert!(g.is_none());
        let mut sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![6, 9, 12]);
    }

    #[test]
    fn component_shift_property() {
        let fld = f27();
        let x5 = power_map(fld.clone(), 5);
        for c in [1usize, 2, 7] {
            assert!(component_shift_check(&x5, c).unwrap());
        }
    }

    #[test]
    fn set_file_roundtrip() {
        let text = "3 3\n1 2 0 1\n0\n1\n5\n9\n";
        let (g, s) = read_set_file(text).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(s, vec![0, 1, 5, 9]);
        let (g, s) = read_set_file("27\n0\n13\n").unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(s, vec![0, 13]);
        assert!(read_set_file("3 3\n1 2 0 1\n99\n").is_err());
        assert!(read_set_file("12\n0\n").is_err());
    }
}
