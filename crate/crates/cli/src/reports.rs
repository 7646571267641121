//! Report assembly for every CLI verb. Reports are plain serde structs so
//! the JSON output is byte-deterministic: no timing, no maps with
//! unordered keys, and every input needed to reproduce the numbers (field
//! spec, primitive element, d, file hashes) is embedded.

use plateau_core::error::{Error, Result};
use plateau_core::field::{gcd, Field, FieldSpec};
use plateau_core::functions::{
    component, graph, level_sets, power_map, read_truth_table, trace_power, write_pary_truth_table,
    PAryFunction, TruthTable, VectorialFunction,
};
use plateau_core::matrixchar::{
    delta_energy, direct_sum, kronecker_verify, matrix_budget, verify_mmm,
    verify_second_derivative_sum, KroneckerReport, MmmReport, SecondDerivativeReport,
};
use plateau_core::pgds::{
    expected_graph_params, group_ring_lemma_check, read_set_file, verify_nf_characterization,
    verify_partition_theorem, verify_pgds_character, verify_pgds_delta, AbelianGroup, NfReport,
    PartitionReport, PgdsParams, PgdsVerdict,
};
use plateau_core::sequences::{
    cross_correlation, decimate, m_sequence, three_valued_classify, walsh_bridge_check,
    BridgeReport, ThreeValuedVerdict,
};
use plateau_core::walsh::{
    classify_function, classify_vectorial, SpectrumClass, VectorialVerdict,
};
use plateau_core::CycInt;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::sync::Arc;

pub const TOOL_NAME: &str = "plateau";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: TOOL_NAME,
        version: TOOL_VERSION,
    }
}

/// Where a function came from, with enough detail to reproduce it.
#[derive(Serialize)]
pub struct SourceInfo {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

pub fn file_sha256(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

// ---- field ----

#[derive(Serialize)]
pub struct FieldReport {
    pub tool: ToolInfo,
    pub spec: FieldSpec,
    pub canonical: bool,
    /// Index of the canonical primitive element.
    pub sigma: usize,
    /// Occurrence counts of each trace value over the whole field.
    pub trace_profile: Vec<usize>,
}

pub fn cmd_field(p: u64, n: u32, modulus: Option<Vec<u64>>) -> Result<(String, bool)> {
    let field = match modulus {
        Some(modulus) => Field::new(FieldSpec { p, n, modulus })?,
        None => Field::canonical(p, n)?,
    };
    let mut trace_profile = vec![0usize; p as usize];
    for x in 0..field.order() {
        trace_profile[field.trace(x) as usize] += 1;
    }
    let report = FieldReport {
        tool: tool_info(),
        spec: field.spec().clone(),
        canonical: field.is_canonical(),
        sigma: field.primitive(),
        trace_profile,
    };
    Ok((to_json(&report), true))
}

// ---- analyze ----

#[derive(Serialize)]
pub struct GraphSection {
    pub expected_params: Option<PgdsParams>,
    pub delta: PgdsVerdict,
    pub character: PgdsVerdict,
    pub methods_agree: bool,
    /// PGDS verdict matches the plateaued classification per the
    /// graph-equivalence theorem.
    pub matches_classification: bool,
}

#[derive(Serialize)]
pub struct MatrixSection {
    /// Checked on the component b = 1 when the input is vectorial.
    pub mmm: MmmReport,
    pub second_derivative: SecondDerivativeReport,
    pub delta_energy: i64,
    pub delta_energy_matches: bool,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub domain: FieldSpec,
    pub codomain: FieldSpec,
    pub sigma: usize,
    pub source: SourceInfo,
    pub classification: VectorialVerdict,
    pub components: Vec<SpectrumClass>,
    pub graph: GraphSection,
    pub nf: NfReport,
    /// None when the domain exceeds the matrix budget.
    pub matrix: Option<MatrixSection>,
    pub cross_method_agreement: bool,
}

/// Wraps a p-ary function as a vectorial one with codomain F_p so the
/// analysis pipeline is uniform.
fn as_vectorial(f: &PAryFunction) -> Result<VectorialFunction> {
    let cod = Arc::new(Field::canonical(f.field.p(), 1)?);
    VectorialFunction::new(
        f.field.clone(),
        cod,
        f.values.iter().map(|&v| v as usize).collect(),
    )
}

pub fn analyze_vectorial(func: &VectorialFunction, source: SourceInfo) -> Result<(String, bool)> {
    let cls = classify_vectorial(func);
    let g = graph(func);
    let group = AbelianGroup::product(func.domain.clone(), func.codomain.clone())?;
    let delta = verify_pgds_delta(&g.members, &group)?;
    let character = verify_pgds_character(&g.members, &group)?;
    let methods_agree = delta.is_pgds == character.is_pgds && delta.params == character.params;
    let expected = match cls.verdict {
        VectorialVerdict::SPlateaued { s } => Some(expected_graph_params(
            func.domain.p(),
            func.domain.n(),
            func.codomain.n(),
            s,
        )?),
        _ => None,
    };
    let matches_classification = match expected {
        Some(params) => delta.is_pgds && delta.params == Some(params),
        None => !delta.is_pgds,
    };
    let nf = verify_nf_characterization(func)?;
    let matrix = if func.domain.order() <= matrix_budget() {
        let f1 = component(func, 1)?;
        let mmm = verify_mmm(&f1)?;
        let second = verify_second_derivative_sum(&f1);
        let energy = delta_energy(&f1);
        let f1_class = classify_function(&f1);
        let energy_matches = match f1_class.plateaued_s() {
            Some(s) => {
                energy == (f1.field.p() as i64).pow(2 * f1.field.n() + s)
            }
            None => true, // one-directional: no predicted value
        };
        Some(MatrixSection {
            mmm,
            second_derivative: second,
            delta_energy: energy,
            delta_energy_matches: energy_matches,
        })
    } else {
        None
    };
    let matrix_ok = matrix.as_ref().map_or(true, |m| {
        m.mmm.agrees_with_classify && m.delta_energy_matches
    });
    let agreement =
        methods_agree && matches_classification && nf.consistent_with_graph && matrix_ok;
    let report = AnalysisReport {
        tool: tool_info(),
        domain: func.domain.spec().clone(),
        codomain: func.codomain.spec().clone(),
        sigma: func.domain.primitive(),
        source,
        classification: cls.verdict,
        components: cls.components,
        graph: GraphSection {
            expected_params: expected,
            delta,
            character,
            methods_agree,
            matches_classification,
        },
        nf,
        matrix,
        cross_method_agreement: agreement,
    };
    Ok((to_json(&report), agreement))
}

pub fn cmd_analyze(
    p: u64,
    n: u32,
    m: Option<u32>,
    power: Option<u64>,
    trace_power_d: Option<u64>,
    file: Option<&Path>,
) -> Result<(String, bool)> {
    let picked = [power.is_some(), trace_power_d.is_some(), file.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if picked != 1 {
        return Err(Error::Precondition(
            "exactly one of --power, --trace-power, --file is required".into(),
        ));
    }
    if let Some(d) = power {
        let field = Arc::new(Field::canonical(p, n)?);
        if let Some(m) = m {
            if m != n {
                return Err(Error::Precondition(
                    "a power map has codomain degree m = n".into(),
                ));
            }
        }
        let func = power_map(field, d);
        return analyze_vectorial(
            &func,
            SourceInfo {
                kind: "power",
                d: Some(d),
                file: None,
                sha256: None,
            },
        );
    }
    if let Some(d) = trace_power_d {
        let field = Arc::new(Field::canonical(p, n)?);
        let f = trace_power(field, d);
        return analyze_vectorial(
            &as_vectorial(&f)?,
            SourceInfo {
                kind: "trace-power",
                d: Some(d),
                file: None,
                sha256: None,
            },
        );
    }
    let path = file.unwrap();
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let source = SourceInfo {
        kind: "file",
        d: None,
        file: Some(path.display().to_string()),
        sha256: Some(file_sha256(&bytes)),
    };
    match read_truth_table(&text)? {
        TruthTable::PAry(f) => analyze_vectorial(&as_vectorial(&f)?, source),
        TruthTable::Vectorial(func) => analyze_vectorial(&func, source),
    }
}

// ---- partition ----

#[derive(Serialize)]
pub struct PartitionCmdReport {
    pub tool: ToolInfo,
    pub field: FieldSpec,
    pub sigma: usize,
    pub report: PartitionReport,
}

pub fn cmd_partition(p: u64, n: u32, d: u64) -> Result<(String, bool)> {
    let field = Arc::new(Field::canonical(p, n)?);
    let report = verify_partition_theorem(&field, d)?;
    let pass = report.all_pgds;
    let out = PartitionCmdReport {
        tool: tool_info(),
        field: field.spec().clone(),
        sigma: field.primitive(),
        report,
    };
    Ok((to_json(&out), pass))
}

// ---- xcorr ----

#[derive(Serialize)]
pub struct XcorrReport {
    pub tool: ToolInfo,
    pub field: FieldSpec,
    pub sigma: usize,
    pub d: u64,
    pub bijective: bool,
    pub spectrum: Vec<CycInt>,
    pub spectrum_total: CycInt,
    pub bridge: BridgeReport,
    pub three_valued: ThreeValuedVerdict,
    /// classify_vectorial(x^d) verdict when d is coprime to p^n - 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectorial: Option<VectorialVerdict>,
    /// three-valued s equals the vectorial plateau order, when both apply.
    pub theorem_agrees: bool,
}

pub fn build_xcorr_report(p: u64, n: u32, d: u64) -> Result<XcorrReport> {
    let field = Arc::new(Field::canonical(p, n)?);
    let u = m_sequence(&field);
    let v = decimate(&u, d);
    let theta = cross_correlation(&u, &v)?;
    let bridge = walsh_bridge_check(&field, d)?;
    let three = three_valued_classify(&theta, p, n);
    let bijective = gcd(field.order() as u64 - 1, d % (field.order() as u64 - 1).max(1)) == 1;
    let vectorial = if bijective {
        Some(classify_vectorial(&power_map(field.clone(), d)).verdict)
    } else {
        None
    };
    let theorem_agrees = match (&three.s, &vectorial) {
        (Some(s), Some(VectorialVerdict::SPlateaued { s: vs })) => s == vs,
        (Some(_), Some(_)) => false,
        _ => true,
    };
    Ok(XcorrReport {
        tool: tool_info(),
        field: field.spec().clone(),
        sigma: u.sigma,
        d,
        bijective,
        spectrum_total: theta.total(),
        spectrum: theta.values,
        bridge,
        three_valued: three,
        vectorial,
        theorem_agrees,
    })
}

pub fn xcorr_csv(report: &XcorrReport) -> String {
    let mut out = String::from("tau,theta_as_coeffs,is_rational,rational_value\n");
    for (tau, v) in report.spectrum.iter().enumerate() {
        let coeffs: Vec<String> = v.coeffs().iter().map(|c| c.to_string()).collect();
        let rat = v.as_rational_integer();
        out.push_str(&format!(
            "{},{},{},{}\n",
            tau,
            coeffs.join(";"),
            rat.is_some(),
            rat.map(|r| r.to_string()).unwrap_or_default()
        ));
    }
    out
}

pub fn cmd_xcorr(p: u64, n: u32, d: u64, csv: bool) -> Result<(String, bool)> {
    let report = build_xcorr_report(p, n, d)?;
    let pass = report.bridge.holds && report.theorem_agrees;
    let text = if csv {
        xcorr_csv(&report)
    } else {
        to_json(&report)
    };
    Ok((text, pass))
}

// ---- kronecker / direct sum ----

#[derive(Serialize)]
pub struct KroneckerCmdReport {
    pub tool: ToolInfo,
    pub f_source: SourceInfo,
    pub g_source: SourceInfo,
    pub s1: Option<u32>,
    pub s2: Option<u32>,
    pub sum_field: FieldSpec,
    pub sum_class: SpectrumClass,
    /// classify(h) = SPlateaued(s1 + s2) as the construction predicts.
    pub sum_as_predicted: bool,
    /// Matrix identity on P = M (x) N, when within budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<KroneckerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_file: Option<String>,
}

fn read_pary_file(path: &Path) -> Result<(PAryFunction, SourceInfo)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let source = SourceInfo {
        kind: "file",
        d: None,
        file: Some(path.display().to_string()),
        sha256: Some(file_sha256(&bytes)),
    };
    match read_truth_table(&text)? {
        TruthTable::PAry(f) => Ok((f, source)),
        TruthTable::Vectorial(_) => Err(Error::Precondition(format!(
            "{}: expected a p-ary truth table, found a vectorial one",
            path.display()
        ))),
    }
}

pub fn cmd_kronecker(f_path: &Path, g_path: &Path, out: Option<&Path>) -> Result<(String, bool)> {
    let (f, f_source) = read_pary_file(f_path)?;
    let (g, g_source) = read_pary_file(g_path)?;
    let s1 = classify_function(&f).plateaued_s();
    let s2 = classify_function(&g).plateaued_s();
    let h = direct_sum(&f, &g)?;
    let sum_class = classify_function(&h);
    let sum_as_predicted = match (s1, s2) {
        (Some(a), Some(b)) => sum_class.plateaued_s() == Some(a + b),
        _ => true, // construction predicts nothing for non-plateaued inputs
    };
    let matrix = if f.field.order() * g.field.order() <= matrix_budget() {
        Some(kronecker_verify(&f, &g)?)
    } else {
        None
    };
    let out_file = match out {
        Some(path) => {
            std::fs::write(path, write_pary_truth_table(&h))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let matrix_ok = matrix
        .as_ref()
        .map_or(true, |m| m.skipped || m.holds);
    let pass = sum_as_predicted && matrix_ok;
    let report = KroneckerCmdReport {
        tool: tool_info(),
        f_source,
        g_source,
        s1,
        s2,
        sum_field: h.field.spec().clone(),
        sum_class,
        sum_as_predicted,
        matrix,
        out_file,
    };
    Ok((to_json(&report), pass))
}

// ---- pgds-verify ----

#[derive(Serialize)]
pub struct PgdsVerifyReport {
    pub tool: ToolInfo,
    pub source: SourceInfo,
    pub group_order: usize,
    pub set_size: usize,
    pub delta: PgdsVerdict,
    pub character: PgdsVerdict,
    pub methods_agree: bool,
    pub group_ring_lemma: bool,
}

pub fn cmd_pgds_verify(path: &Path) -> Result<(String, bool)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let (group, members) = read_set_file(&text)?;
    let delta = verify_pgds_delta(&members, &group)?;
    let character = verify_pgds_character(&members, &group)?;
    let methods_agree = delta.is_pgds == character.is_pgds && delta.params == character.params;
    let lemma = group_ring_lemma_check(&members, &group);
    let pass = delta.is_pgds && methods_agree && lemma;
    let report = PgdsVerifyReport {
        tool: tool_info(),
        source: SourceInfo {
            kind: "file",
            d: None,
            file: Some(path.display().to_string()),
            sha256: Some(file_sha256(&bytes)),
        },
        group_order: group.order(),
        set_size: members.len(),
        delta,
        character,
        methods_agree,
        group_ring_lemma: lemma,
    };
    Ok((to_json(&report), pass))
}

// ---- matrix-verify ----

#[derive(Serialize)]
pub struct MatrixVerifyReport {
    pub tool: ToolInfo,
    pub field: FieldSpec,
    pub source: SourceInfo,
    pub class: SpectrumClass,
    pub mmm: MmmReport,
    pub second_derivative: SecondDerivativeReport,
    pub delta_energy: i64,
    pub delta_energy_matches: bool,
    pub all_methods_agree: bool,
}

pub fn cmd_matrix_verify(
    p: Option<u64>,
    n: Option<u32>,
    trace_power_d: Option<u64>,
    file: Option<&Path>,
) -> Result<(String, bool)> {
    let (f, source) = match (trace_power_d, file) {
        (Some(d), None) => {
            let (p, n) = match (p, n) {
                (Some(p), Some(n)) => (p, n),
                _ => {
                    return Err(Error::Precondition(
                        "--trace-power requires --p and --n".into(),
                    ))
                }
            };
            let field = Arc::new(Field::canonical(p, n)?);
            (
                trace_power(field, d),
                SourceInfo {
                    kind: "trace-power",
                    d: Some(d),
                    file: None,
                    sha256: None,
                },
            )
        }
        (None, Some(path)) => read_pary_file(path)?,
        _ => {
            return Err(Error::Precondition(
                "exactly one of --trace-power, --file is required".into(),
            ))
        }
    };
    let class = classify_function(&f);
    let mmm = verify_mmm(&f)?;
    let second = verify_second_derivative_sum(&f);
    let energy = delta_energy(&f);
    let energy_matches = match class.plateaued_s() {
        Some(s) => energy == (f.field.p() as i64).pow(2 * f.field.n() + s),
        None => true,
    };
    let second_ok = second.constant == class.is_plateaued()
        && (!second.constant || second.matches_p_pow_n_plus_s);
    let agree = mmm.agrees_with_classify && second_ok && energy_matches;
    let report = MatrixVerifyReport {
        tool: tool_info(),
        field: f.field.spec().clone(),
        source,
        class,
        mmm,
        second_derivative: second,
        delta_energy: energy,
        delta_energy_matches: energy_matches,
        all_methods_agree: agree,
    };
    Ok((to_json(&report), agree))
}

/// Graph PGDS check reused by the sweep.
pub fn graph_pgds_summary(func: &VectorialFunction) -> Result<(bool, Option<PgdsParams>)> {
    let g = graph(func);
    let group = AbelianGroup::product(func.domain.clone(), func.codomain.clone())?;
    let v = verify_pgds_delta(&g.members, &group)?;
    Ok((v.is_pgds, v.params))
}

/// Level-set helper reused by the sweep summary.
pub fn level_set_sizes(f: &PAryFunction) -> Vec<usize> {
    level_sets(f).iter().map(Vec::len).collect()
}
