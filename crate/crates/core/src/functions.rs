//! Value-table representations of p-ary and vectorial functions, the
//! standard constructions (power maps, trace compositions), derivative
//! operators, graphs, and the truth-table file format.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use std::sync::Arc;

/// f: F_{p^n} -> F_p as a dense table indexed by element index.
#[derive(Clone)]
pub struct PAryFunction {
    pub field: Arc<Field>,
    pub values: Vec<u8>,
}

/// F: F_{p^n} -> F_{p^m} as a dense table of codomain element indices.
#[derive(Clone)]
pub struct VectorialFunction {
    pub domain: Arc<Field>,
    pub codomain: Arc<Field>,
    pub values: Vec<Elem>,
}

/// The graph {(x, F(x))} inside F_{p^n} x F_{p^m}; pair index = x + p^n * y.
#[derive(Clone, Debug)]
pub struct GraphSet {
    pub domain_order: usize,
    pub codomain_order: usize,
    pub members: Vec<usize>,
}

impl PAryFunction {
    pub fn new(field: Arc<Field>, values: Vec<u8>) -> Result<PAryFunction> {
        if values.len() != field.order() {
            return Err(Error::Precondition(format!(
                "table length {} != field order {}",
                values.len(),
                field.order()
            )));
        }
        if values.iter().any(|&v| v as u64 >= field.p()) {
            return Err(Error::Precondition("table entry out of [0, p)".into()));
        }
        Ok(PAryFunction { field, values })
    }

    pub fn zero(field: Arc<Field>) -> PAryFunction {
        let q = field.order();
        PAryFunction {
            field,
            values: vec![0; q],
        }
    }

    pub fn eval(&self, x: Elem) -> u8 {
        self.values[x]
    }

    /// f(x) = Tr(c x).
    pub fn linear(field: Arc<Field>, c: Elem) -> PAryFunction {
        let values = (0..field.order())
            .map(|x| field.trace(field.mul(c, x)))
            .collect();
        PAryFunction { field, values }
    }
}

impl VectorialFunction {
    pub fn new(
        domain: Arc<Field>,
        codomain: Arc<Field>,
        values: Vec<Elem>,
    ) -> Result<VectorialFunction> {
        if domain.p() != codomain.p() {
            return Err(Error::Precondition(
                "domain and codomain must share the characteristic".into(),
            ));
        }
        if values.len() != domain.order() {
            return Err(Error::Precondition(format!(
                "table length {} != domain order {}",
                values.len(),
                domain.order()
            )));
        }
        if values.iter().any(|&v| v >= codomain.order()) {
            return Err(Error::Precondition("table entry out of codomain".into()));
        }
        Ok(VectorialFunction {
            domain,
            codomain,
            values,
        })
    }

    pub fn eval(&self, x: Elem) -> Elem {
        self.values[x]
    }

    /// Whether the value table is a bijection.
    pub fn is_permutation(&self) -> bool {
        if self.domain.order() != self.codomain.order() {
            return false;
        }
        let mut seen = vec![false; self.codomain.order()];
        for &v in &self.values {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }
}

/// F(x) = x^d with F(0) = 0; codomain = domain.
pub fn power_map(field: Arc<Field>, d: u64) -> VectorialFunction {
    let values = (0..field.order())
        .map(|x| if x == 0 { 0 } else { field.pow(x, d) })
        .collect();
    VectorialFunction {
        domain: field.clone(),
        codomain: field,
        values,
    }
}

/// f(x) = Tr_n(x^d), with the convention 0^0 = 1.
pub fn trace_power(field: Arc<Field>, d: u64) -> PAryFunction {
    let values = (0..field.order())
        .map(|x| field.trace(field.pow(x, d)))
        .collect();
    PAryFunction { field, values }
}

/// Component function F_b(x) = Tr_m(b F(x)) for nonzero b.
pub fn component(func: &VectorialFunction, b: Elem) -> Result<PAryFunction> {
    if b == 0 {
        return Err(Error::ZeroComponent);
    }
    let cod = &func.codomain;
    let values = func
        .values
        .iter()
        .map(|&y| cod.trace(cod.mul(b, y)))
        .collect();
    Ok(PAryFunction {
        field: func.domain.clone(),
        values,
    })
}

/// D_a f(x) = f(x+a) - f(x).
pub fn derivative(f: &PAryFunction, a: Elem) -> PAryFunction {
    let fld = &f.field;
    let p = fld.p() as u8;
    let values = (0..fld.order())
        .map(|x| (f.values[fld.add(x, a)] + p - f.values[x]) % p)
        .collect();
    PAryFunction {
        field: f.field.clone(),
        values,
    }
}

/// D_a D_b f(x) = f(x+a+b) + f(x) - f(x+a) - f(x+b).
pub fn second_derivative(f: &PAryFunction, a: Elem, b: Elem) -> PAryFunction {
    let fld = &f.field;
    let p = fld.p() as u8;
    let ab = fld.add(a, b);
    let values = (0..fld.order())
        .map(|x| {
            (f.values[fld.add(x, ab)] + f.values[x] + 2 * p
                - f.values[fld.add(x, a)]
                - f.values[fld.add(x, b)])
                % p
        })
        .collect();
    PAryFunction {
        field: f.field.clone(),
        values,
    }
}

/// D_t F(x) = F(x+t) - F(x) for vectorial F.
pub fn vectorial_derivative(func: &VectorialFunction, t: Elem) -> VectorialFunction {
    let dom = &func.domain;
    let cod = &func.codomain;
    let values = (0..dom.order())
        .map(|x| cod.sub(func.values[dom.add(x, t)], func.values[x]))
        .collect();
    VectorialFunction {
        domain: func.domain.clone(),
        codomain: func.codomain.clone(),
        values,
    }
}

/// The graph {(x, F(x))} with pair index x + p^n * F(x).
pub fn graph(func: &VectorialFunction) -> GraphSet {
    let qn = func.domain.order();
    let members = (0..qn).map(|x| x + qn * func.values[x]).collect();
    GraphSet {
        domain_order: qn,
        codomain_order: func.codomain.order(),
        members,
    }
}

/// Graph of a p-ary function, in F_{p^n} x F_p.
pub fn graph_pary(f: &PAryFunction) -> GraphSet {
    let qn = f.field.order();
    let members = (0..qn).map(|x| x + qn * f.values[x] as usize).collect();
    GraphSet {
        domain_order: qn,
        codomain_order: f.field.p() as usize,
        members,
    }
}

/// Level sets D_i = f^{-1}(i), i in [0, p).
pub fn level_sets(f: &PAryFunction) -> Vec<Vec<Elem>> {
    let p = f.field.p() as usize;
    let mut out = vec![Vec::new(); p];
    for (x, &v) in f.values.iter().enumerate() {
        out[v as usize].push(x);
    }
    out
}

// ---- truth-table file format ----

pub enum TruthTable {
    PAry(PAryFunction),
    Vectorial(VectorialFunction),
}

fn parse_nums(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("expected integer, got '{t}'"),
            })
        })
        .collect()
}

/// Parses the truth-table text format:
/// line 1 "p n" (p-ary) or "p n m" (vectorial); line 2 domain modulus
/// c_0..c_n; line 3 codomain modulus (vectorial only); then p^n value lines.
pub fn read_truth_table(text: &str) -> Result<TruthTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let head = parse_nums(header, ln)?;
    let (p, n, m) = match head.len() {
        2 => (head[0], head[1] as u32, None),
        3 => (head[0], head[1] as u32, Some(head[2] as u32)),
        k => {
            return Err(Error::Parse {
                line: ln,
                msg: format!("header must have 2 or 3 fields, got {k}"),
            })
        }
    };
    let (ln, modline) = lines.next().ok_or(Error::Parse {
        line: ln + 1,
        msg: "missing domain modulus line".into(),
    })?;
    let modulus = parse_nums(modline, ln)?;
    let domain = Arc::new(
        Field::new(FieldSpec { p, n, modulus }).map_err(|e| Error::Parse {
            line: ln,
            msg: format!("bad domain modulus: {e}"),
        })?,
    );
    let codomain = match m {
        None => None,
        Some(m) => {
            let (ln, modline) = lines.next().ok_or(Error::Parse {
                line: ln + 1,
                msg: "missing codomain modulus line".into(),
            })?;
            let modulus = parse_nums(modline, ln)?;
            Some(Arc::new(Field::new(FieldSpec { p, n: m, modulus }).map_err(
                |e| Error::Parse {
                    line: ln,
                    msg: format!("bad codomain modulus: {e}"),
                },
            )?))
        }
    };
    let q = domain.order();
    let mut values = Vec::with_capacity(q);
    let mut last_line = ln;
    for (ln, l) in lines {
        last_line = ln;
        let v = parse_nums(l, ln)?;
        if v.len() != 1 {
            return Err(Error::Parse {
                line: ln,
                msg: "expected one value per line".into(),
            });
        }
        values.push(v[0] as usize);
    }
    if values.len() != q {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("expected {q} value lines, got {}", values.len()),
        });
    }
    match codomain {
        None => {
            if values.iter().any(|&v| v as u64 >= p) {
                return Err(Error::Parse {
                    line: last_line,
                    msg: "value out of [0, p)".into(),
                });
            }
            Ok(TruthTable::PAry(PAryFunction::new(
                domain,
                values.iter().map(|&v| v as u8).collect(),
            )?))
        }
        Some(cod) => Ok(TruthTable::Vectorial(VectorialFunction::new(
            domain, cod, values,
        )?)),
    }
}

pub fn write_pary_truth_table(f: &PAryFunction) -> String {
    let spec = f.field.spec();
    let mut out = format!("{} {}\n", spec.p, spec.n);
    out.push_str(
        &spec
            .modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    for v in &f.values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn write_vectorial_truth_table(func: &VectorialFunction) -> String {
    let d = func.domain.spec();
    let c = func.codomain.spec();
    let fmt = |m: &[u64]| {
        m.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = format!("{} {} {}\n{}\n{}\n", d.p, d.n, c.n, fmt(&d.modulus), fmt(&c.modulus));
    for v in &func.values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f27() -> Arc<Field> {
        Arc::new(Field::canonical(3, 3).unwrap())
    }

    #[test]
    fn power_map_identity_and_frobenius() {
        let f = f27();
        let id = power_map(f.clone(), 1);
        assert_eq!(id.values, (0..27).collect::<Vec<_>>());
        let frob = power_map(f.clone(), 3);
        assert!(frob.is_permutation());
        // Frobenius is additive
        for x in 0..27 {
            for y in 0..27 {
                assert_eq!(
                    frob.eval(f.add(x, y)),
                    f.add(frob.eval(x), frob.eval(y))
                );
            }
        }
    }

    #[test]
    fn x5_is_a_permutation_of_f27() {
        let f = power_map(f27(), 5);
        assert!(f.is_permutation()); // gcd(5, 26) = 1
    }

    #[test]
    fn trace_power_basics() {
        let fld = f27();
        let f0 = trace_power(fld.clone(), 0);
        let tr1 = fld.trace(1);
        assert!(f0.values.iter().all(|&v| v == tr1));
        let f5 = trace_power(fld.clone(), 5);
        assert_eq!(f5.eval(0), 0);
        // x^5 permutes, trace is balanced: each value hit 9 times
        let sets = level_sets(&f5);
        assert_eq!(sets.iter().map(Vec::len).collect::<Vec<_>>(), vec![9, 9, 9]);
    }

    #[test]
    fn component_functions() {
        let fld = f27();
        let id = power_map(fld.clone(), 1);
        let c1 = component(&id, 1).unwrap();
        for x in 0..27 {
            assert_eq!(c1.eval(x), fld.trace(x));
        }
        assert!(component(&id, 0).is_err());
        // all 26 components of x^5 are distinct tables
        let f5 = power_map(fld.clone(), 5);
        let tables: Vec<_> = (1..27).map(|b| component(&f5, b).unwrap().values).collect();
        for i in 0..tables.len() {
            for j in i + 1..tables.len() {
                assert_ne!(tables[i], tables[j]);
            }
        }
        // linearity in b
        for b1 in 1..27usize {
            for b2 in 1..27usize {
                let b3 = fld.add(b1, b2);
                if b3 == 0 {
                    continue;
                }
                let lhs = component(&f5, b3).unwrap();
                let f1 = component(&f5, b1).unwrap();
                let f2 = component(&f5, b2).unwrap();
                for x in 0..27 {
                    assert_eq!(lhs.eval(x), (f1.eval(x) + f2.eval(x)) % 3);
                }
            }
        }
    }

    #[test]
    fn derivative_shapes() {
        let fld = f27();
        let f5 = trace_power(fld.clone(), 5);
        let d0 = derivative(&f5, 0);
        assert!(d0.values.iter().all(|&v| v == 0));
        // linear function has constant derivative Tr(c a)
        let lin = PAryFunction::linear(fld.clone(), 7);
        for a in 0..27 {
            let da = derivative(&lin, a);
            let expect = fld.trace(fld.mul(7, a));
            assert!(da.values.iter().all(|&v| v == expect));
        }
    }

    #[test]
    fn quadratic_derivatives_balanced_f9() {
        let fld = Arc::new(Field::canonical(3, 2).unwrap());
        let f = trace_power(fld.clone(), 2);
        for a in 1..9 {
            let da = derivative(&f, a);
            let sets = level_sets(&da);
            assert_eq!(sets.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3, 3]);
        }
    }

    #[test]
    fn second_derivative_symmetry_and_unfolding() {
        let fld = f27();
        let f = trace_power(fld.clone(), 5);
        for (a, b) in [(0usize, 3usize), (4, 9), (13, 13), (1, 26)] {
            let ab = second_derivative(&f, a, b);
            let ba = second_derivative(&f, b, a);
            assert_eq!(ab.values, ba.values);
            let unfolded = derivative(&derivative(&f, b), a);
            assert_eq!(ab.values, unfolded.values);
        }
        // quadratic: D_a D_b f constant in x
        let f9 = Arc::new(Field::canonical(3, 2).unwrap());
        let q = trace_power(f9.clone(), 2);
        for a in 0..9 {
            for b in 0..9 {
                let dd = second_derivative(&q, a, b);
                assert!(dd.values.iter().all(|&v| v == dd.values[0]));
            }
        }
    }

    #[test]
    fn graph_encoding_x2_over_f3() {
        let f3 = Arc::new(Field::canonical(3, 1).unwrap());
        let sq = power_map(f3, 2);
        let g = graph(&sq);
        assert_eq!(g.members, vec![0, 4, 5]);
        assert_eq!(g.members.len(), 3);
    }

    #[test]
    fn level_sets_partition_and_negation_symmetry() {
        let fld = f27();
        let f = trace_power(fld.clone(), 5); // odd d
        let sets = level_sets(&f);
        assert_eq!(sets.iter().map(Vec::len).sum::<usize>(), 27);
        // f(-x) = -f(x) for odd d: D_1 = -D_2 as sets
        let neg_d2: std::collections::BTreeSet<_> =
            sets[2].iter().map(|&x| fld.neg(x)).collect();
        let d1: std::collections::BTreeSet<_> = sets[1].iter().copied().collect();
        assert_eq!(neg_d2, d1);
    }

    #[test]
    fn truth_table_roundtrip_and_rejection() {
        let fld = f27();
        let f = trace_power(fld.clone(), 5);
        let text = write_pary_truth_table(&f);
        match read_truth_table(&text).unwrap() {
            TruthTable::PAry(g) => assert_eq!(g.values, f.values),
            _ => panic!("expected p-ary"),
        }
        // wrong count rejected
        let truncated: String = text.lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(read_truth_table(&truncated).is_err());
        // out-of-range entry rejected
        let bad = text.replace("\n2\n", "\n7\n");
        assert!(read_truth_table(&bad).is_err());

        let v = power_map(fld, 5);
        let vt = write_vectorial_truth_table(&v);
        match read_truth_table(&vt).unwrap() {
            TruthTable::Vectorial(w) => assert_eq!(w.values, v.values),
            _ => panic!("expected vectorial"),
        }
    }
}
