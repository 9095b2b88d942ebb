use std::fs;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use symspace_core::catalog::{all_models, build_spec, CatalogError, ModelSpec};
use symspace_core::lts::LtsDescriptor;
use symspace_core::quotient::{quotient_report, quotient_theorem_pipeline, Gate, QuotientError, QuotientReport};
use symspace_core::subspace::lattice::{density_witness, golden_convergents};
use symspace_core::subspace::{lts_of_subspace, lts_roundtrip_check, ChartReport, SplitReport};
use symspace_core::verify::{verify_lts, verify_model, SuiteBounds, VerifyReport};
use symspace_core::{Lts64, Model64, Subspace64, Tol64};

use crate::render::{emit, json, sci, table};
use crate::{Common, Failure, Format};

/// Bound on the aligned quotient tensor against `quotient_lts`.
const TENSOR_TOL: f64 = 1e-8;

fn tolerance(common: &Common) -> Result<Tol64, Failure> {
    let d = Tol64::default();
    Tol64::new(common.tol_abs.unwrap_or(d.abs_eps), common.tol_rel.unwrap_or(d.rel_eps))
        .map_err(|e| Failure::usage(e.to_string()))
}

fn spec(common: &Common) -> Result<ModelSpec, Failure> {
    let parsed = if common.params.is_empty() {
        common.model.parse()
    } else {
        ModelSpec::from_parts(&common.model, &common.params)
    };
    parsed.map_err(|e| Failure::usage(e.to_string()))
}

fn model(common: &Common, tol: &Tol64) -> Result<Model64, Failure> {
    build_spec(&spec(common)?, tol).map_err(|e| match e {
        CatalogError::UnknownModel(_) | CatalogError::BadParams { .. } => Failure::usage(e.to_string()),
        _ => Failure::check(e.to_string()),
    })
}

fn rng(common: &Common) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(common.seed)
}

fn parse_vector(s: &str, dim: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v = s
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("--{what}: {e}")))?;
    if v.len() != dim {
        return Err(Failure::usage(format!("--{what} has {} coordinates, g- has dimension {dim}", v.len())));
    }
    Ok(v)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    seed: u64,
    samples: usize,
    passed: bool,
    reports: &'a [VerifyReport],
}

pub fn verify(common: &Common, tensor: Option<&Path>, samples: usize) -> Result<u8, Failure> {
    let tol = tolerance(common)?;
    let reports = match tensor {
        Some(path) => {
            let raw = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let desc: LtsDescriptor<f64> =
                serde_json::from_str(&raw).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let m = Lts64::from_descriptor(&desc).map_err(|e| Failure::usage(e.to_string()))?;
            vec![verify_lts(&m, &tol)]
        }
        None => {
            let models = if common.model == "all" {
                all_models(&tol).map_err(|e| Failure::check(e.to_string()))?
            } else {
                vec![model(common, &tol)?]
            };
            let bounds = SuiteBounds { samples, ..SuiteBounds::default() };
            let mut rng = rng(common);
            models
                .iter()
                .map(|m| verify_model(m, &bounds, &mut rng).map_err(|e| Failure::check(format!("{}: {e}", m.name))))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let passed = reports.iter().all(VerifyReport::passed);
    let body = match common.format.unwrap_or(Format::Text) {
        Format::Json => json(&VerifyOutput {
            seed: common.seed,
            samples,
            passed,
            reports: &reports,
        }),
        f => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .flat_map(|r| {
                    r.checks.iter().map(|c| {
                        vec![
                            r.model.clone(),
                            c.name.clone(),
                            sci(c.max_residual),
                            sci(c.threshold),
                            if c.pass { "pass" } else { "FAIL" }.to_string(),
                        ]
                    })
                })
                .collect();
            table(f, &["model", "check", "max_residual", "threshold", "result"], &rows)
        }
    };
    emit(common, &body)?;
    for r in &reports {
        for c in r.failures() {
            eprintln!("{}: {} failed ({} > {})", r.model, c.name, sci(c.max_residual), sci(c.threshold));
        }
    }
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct TrotterRow {
    k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<u64>,
    error: f64,
}

#[derive(Serialize)]
struct TrotterOutput {
    model: String,
    x: Vec<f64>,
    y: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<Vec<f64>>,
    target: Vec<f64>,
    rows: Vec<TrotterRow>,
}

pub fn trotter(
    common: &Common,
    x: &str,
    y: &str,
    z: Option<&str>,
    k_min: u64,
    k_max: u64,
    l: Option<u64>,
) -> Result<u8, Failure> {
    let tol = tolerance(common)?;
    let m = model(common, &tol)?;
    let space = &m.space;
    let d = space.dim();
    let x = parse_vector(x, d, "x")?;
    let y = parse_vector(y, d, "y")?;
    let z = z.map(|z| parse_vector(z, d, "z")).transpose()?;
    let ks: Vec<u64> = std::iter::successors(Some(k_min), |&k| k.checked_mul(2))
        .take_while(|&k| k <= k_max)
        .collect();
    let fail = |e: symspace_core::symspace::SymError| Failure::check(e.to_string());
    let (target, rows) = match &z {
        None => {
            let target: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let t = space.exp_point(&target).map_err(fail)?;
            let rows = ks
                .iter()
                .map(|&k| {
                    let p = space.trotter_sum_sym(&x, &y, k)?;
                    Ok(TrotterRow { k, l: None, error: p.distance(&t) })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            (target, rows)
        }
        Some(z) => {
            let lts = space.lts_of_pair().map_err(fail)?;
            let target = lts.bracket(&x, &y, z).map_err(|e| Failure::check(e.to_string()))?;
            let t = space.exp_point(&target).map_err(fail)?;
            let rows = ks
                .iter()
                .map(|&k| {
                    let l = l.unwrap_or(k);
                    let p = space.trotter_bracket_sym(&x, &y, z, k, l)?;
                    Ok(TrotterRow { k, l: Some(l), error: p.distance(&t) })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            (target, rows)
        }
    };
    let body = match common.format.unwrap_or(Format::Csv) {
        Format::Json => json(&TrotterOutput {
            model: m.name.clone(),
            x,
            y,
            z,
            target,
            rows,
        }),
        f => {
            let header: &[&str] = if z.is_some() { &["k", "l", "error"] } else { &["k", "error"] };
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut c = vec![r.k.to_string()];
                    c.extend(r.l.map(|l| l.to_string()));
                    c.push(format!("{:e}", r.error));
                    c
                })
                .collect();
            table(f, header, &cells)
        }
    };
    emit(common, &body)?;
    Ok(0)
}

#[derive(Serialize)]
struct ExactWitness {
    p: String,
    q: String,
    /// `q phi - p`, the second coordinate over `pi` of a line point.
    offset: f64,
    on_line: bool,
    is_base: bool,
}

#[derive(Serialize)]
struct GateFailure {
    stage: String,
    witness: Vec<f64>,
    explanation: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    exact_witnesses: Vec<ExactWitness>,
}

#[derive(Serialize)]
struct QuotientOutput {
    model: String,
    ideal: String,
    n_basis: Vec<Vec<f64>>,
    seed: u64,
    status: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chart: Option<ChartReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<SplitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<QuotientReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gate: Option<GateFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn select_ideal(m: &Model64, ideal: Option<&str>, tol: &Tol64) -> Result<(String, Subspace64, Gate<f64>), Failure> {
    let names = || m.designated_ideals.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(", ");
    let Some(text) = ideal else {
        let first = m
            .designated_ideals
            .first()
            .ok_or_else(|| Failure::usage(format!("{} has no designated ideals; pass --ideal", m.name)))?;
        return Ok((first.name.clone(), first.n.clone(), first.gate.clone()));
    };
    if let Some(i) = m.designated_ideals.iter().find(|i| i.name == text) {
        return Ok((i.name.clone(), i.n.clone(), i.gate.clone()));
    }
    let d = m.space.dim();
    let vectors = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_vector(s, d, "ideal"))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|f| Failure::usage(format!("{} (designated ideals: {})", f.message, names())))?;
    let n = Subspace64::span(d, &vectors, tol);
    // a span equal to a designated ideal reuses its gate (lattice, probes)
    let gate = m
        .designated_ideals
        .iter()
        .find(|i| i.n.same_span(&n, tol))
        .map(|i| i.gate.clone())
        .unwrap_or_default();
    Ok((text.to_string(), n, gate))
}

fn exact_witnesses(m: &Model64) -> Vec<ExactWitness> {
    if m.spec != ModelSpec::TorusAbelian {
        return Vec::new();
    }
    golden_convergents(5000)
        .iter()
        .skip(3)
        .map(|(p, q)| {
            let w = density_witness(p, q);
            ExactWitness {
                p: p.to_string(),
                q: q.to_string(),
                offset: w.u[1].to_f64(),
                on_line: w.on_golden_line(),
                is_base: w.is_base(),
            }
        })
        .collect()
}

pub fn quotient(common: &Common, ideal: Option<&str>, samples: usize) -> Result<u8, Failure> {
    let tol = tolerance(common)?;
    let m = model(common, &tol)?;
    let (name, n, gate) = select_ideal(&m, ideal, &tol)?;
    let mut rng = rng(common);
    let mut out = QuotientOutput {
        model: m.name.clone(),
        ideal: name,
        n_basis: n.basis().to_vec(),
        seed: common.seed,
        status: "quotient",
        passed: false,
        quotient_dim: None,
        chart: None,
        split: None,
        report: None,
        gate: None,
        error: None,
    };
    let code = match quotient_theorem_pipeline(&m.space, &n, &gate, &mut rng) {
        Ok(qr) => {
            out.quotient_dim = Some(qr.quotient.dim());
            out.chart = Some(qr.chart.clone());
            out.split = Some(qr.split.clone());
            match quotient_report(&qr, samples, &mut rng) {
                Ok(report) => {
                    out.passed = report.passed(TENSOR_TOL);
                    out.report = Some(report);
                }
                Err(e) => {
                    out.status = "report_failed";
                    out.error = Some(e.to_string());
                }
            }
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(QuotientError::GateRejected { stage, witness }) => {
            let explanation = format!(
                "the {stage} criterion failed, so N = <Exp n> is not a symmetric subspace of M: \
                 M/N admits no symmetric-space structure making M -> M/N a weak submersion"
            );
            eprintln!("symspace: {explanation}; witness {witness:?}");
            out.status = "gate_rejected";
            out.gate = Some(GateFailure {
                stage,
                witness,
                explanation,
                exact_witnesses: exact_witnesses(&m),
            });
            3
        }
        Err(e) => {
            out.status = match e {
                QuotientError::NotIdeal => "not_ideal",
                QuotientError::NotFaithful { .. } => "not_faithful",
                QuotientError::Dimension { .. } => "dimension",
                _ => "error",
            };
            out.error = Some(e.to_string());
            1
        }
    };
    let body = match common.format.unwrap_or(Format::Text) {
        Format::Json => json(&out),
        f => table(f, &["field", "value"], &quotient_rows(&out)),
    };
    emit(common, &body)?;
    Ok(code)
}

fn quotient_rows(out: &QuotientOutput) -> Vec<Vec<String>> {
    let mut rows = vec![
        vec!["model".into(), out.model.clone()],
        vec!["ideal".into(), out.ideal.clone()],
        vec!["n_dim".into(), out.n_basis.len().to_string()],
        vec!["status".into(), out.status.into()],
        vec!["passed".into(), out.passed.to_string()],
    ];
    if let Some(d) = out.quotient_dim {
        rows.push(vec!["quotient_dim".into(), d.to_string()]);
    }
    if let Some(r) = &out.report {
        let c = &r.rank_checks;
        rows.push(vec!["l_dim".into(), c.l_dim.to_string()]);
        rows.push(vec!["l_prime_dim".into(), c.l_prime_dim.to_string()]);
        rows.push(vec!["l_contains_l_prime".into(), c.l_contains_l_prime.to_string()]);
        rows.push(vec!["projection_rank".into(), c.projection_rank.to_string()]);
        rows.push(vec!["kernel_is_n".into(), c.kernel_is_n.to_string()]);
        rows.push(vec!["tensor_mismatch".into(), sci(r.tensor_mismatch)]);
        for (k, v) in &r.sample_pass_rates {
            rows.push(vec![k.clone(), format!("{v}")]);
        }
    }
    if let Some(g) = &out.gate {
        rows.push(vec!["gate_stage".into(), g.stage.clone()]);
        rows.push(vec!["gate_witness".into(), format!("{:?}", g.witness)]);
        rows.push(vec!["explanation".into(), g.explanation.clone()]);
        let exact = g.exact_witnesses.iter().filter(|w| w.on_line && !w.is_base).count();
        if !g.exact_witnesses.is_empty() {
            rows.push(vec!["exact_line_points".into(), exact.to_string()]);
        }
    }
    if let Some(e) = &out.error {
        rows.push(vec!["error".into(), e.clone()]);
    }
    rows
}

#[derive(Serialize)]
struct SubspaceRow {
    model: String,
    subspace: String,
    expected_dim: usize,
    extracted_dim: Option<usize>,
    certified: usize,
    unknown: usize,
    matches: bool,
    roundtrip: bool,
}

pub fn subspace(common: &Common) -> Result<u8, Failure> {
    let tol = tolerance(common)?;
    let m = model(common, &tol)?;
    let rows: Vec<SubspaceRow> = m
        .designated_subspaces
        .iter()
        .map(|s| {
            let ex = lts_of_subspace(&s.subspace).ok();
            SubspaceRow {
                model: m.name.clone(),
                subspace: s.name.clone(),
                expected_dim: s.lts.dim(),
                extracted_dim: ex.as_ref().map(|e| e.subspace.dim()),
                certified: ex.as_ref().map_or(0, |e| e.certified),
                unknown: ex.as_ref().map_or(0, |e| e.unknown),
                matches: ex.as_ref().is_some_and(|e| e.subspace.same_span(&s.lts, &tol)),
                roundtrip: lts_roundtrip_check(&s.lts, &m.space),
            }
        })
        .collect();
    let ok = rows.iter().all(|r| r.matches && r.roundtrip);
    let opt = |o: Option<String>| o.unwrap_or_else(|| "-".into());
    let body = match common.format.unwrap_or(Format::Text) {
        Format::Json => json(&rows),
        f => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.subspace.clone(),
                        r.expected_dim.to_string(),
                        opt(r.extracted_dim.map(|d| d.to_string())),
                        r.certified.to_string(),
                        r.unknown.to_string(),
                        r.matches.to_string(),
                        r.roundtrip.to_string(),
                    ]
                })
                .collect();
            table(
                f,
                &["subspace", "expected_dim", "extracted_dim", "certified", "unknown", "matches", "roundtrip"],
                &cells,
            )
        }
    };
    emit(common, &body)?;
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct ModelRow {
    name: String,
    ambient_n: usize,
    g_dim: usize,
    minus_dim: usize,
    global_form: String,
    subspaces: Vec<String>,
    ideals: Vec<String>,
    morphisms: Vec<String>,
}

pub fn models(common: &Common) -> Result<u8, Failure> {
    let tol = tolerance(common)?;
    let rows: Vec<ModelRow> = all_models(&tol)
        .map_err(|e| Failure::check(e.to_string()))?
        .into_iter()
        .map(|m| ModelRow {
            ambient_n: m.pair.ambient_n(),
            g_dim: m.pair.dim(),
            minus_dim: m.space.dim(),
            global_form: m.metadata.global_form.clone(),
            subspaces: m.designated_subspaces.iter().map(|s| s.name.clone()).collect(),
            ideals: m.designated_ideals.iter().map(|s| s.name.clone()).collect(),
            morphisms: m.designated_morphisms.iter().map(|s| s.name.clone()).collect(),
            name: m.name,
        })
        .collect();
    let body = match common.format.unwrap_or(Format::Text) {
        Format::Json => json(&rows),
        f => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.ambient_n.to_string(),
                        r.g_dim.to_string(),
                        r.minus_dim.to_string(),
                        r.global_form.clone(),
                        r.ideals.join(" "),
                    ]
                })
                .collect();
            table(f, &["model", "n", "dim g", "dim g-", "global form", "ideals"], &cells)
        }
    };
    emit(common, &body)?;
    Ok(0)
}
