//! Deterministic machine reports: pretty-printed JSON with sorted keys, no
//! wall-clock content, and sha-256 fingerprints for the instance bytes and the
//! computed basis. Two runs over the same input produce byte-identical output.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::assoc_graded::{FlatDecision, GradedPipeline};
use crate::chainring::{Flavor, RingSpec, Scalar};
use crate::flatness::{NormalForm, RankReport};
use crate::freemod::{Element, Monomial, ModuleMonomial};
use crate::groebner::{Basis, CompletionStats, ReductionTrace};
use crate::oracle::OracleFlatnessReport;
use crate::parse::Instance;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Fingerprint of a rendered basis: sha-256 over the lines joined by `\n`.
pub fn lines_fingerprint(lines: &[String]) -> String {
    sha256_hex(lines.join("\n").as_bytes())
}

pub fn ring_value(ring: RingSpec) -> Value {
    json!({
        "p": ring.p(),
        "a": ring.a(),
        "flavor": match ring.flavor() {
            Flavor::EquiChar => "pi",
            Flavor::MixedChar => "p",
        },
    })
}

pub fn render_elements(elements: &[Element], names: &[String]) -> Vec<String> {
    elements.iter().map(|e| e.render(names)).collect()
}

/// A bare ring monomial in the same style `Element::render` uses: `x^2*y`, or
/// `1` for the trivial monomial.
fn mono_str(mono: &Monomial, names: &[String]) -> String {
    let pieces: Vec<String> = mono
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect();
    if pieces.is_empty() {
        "1".to_string()
    } else {
        pieces.join("*")
    }
}

/// A module monomial rendered with its component marker when the rank is > 1.
pub fn module_mono_str(basis: &Basis, m: &ModuleMonomial, names: &[String]) -> String {
    Element::single(basis.ring(), basis.order().clone(), Scalar::one(basis.ring()), m.clone())
        .render(names)
}

pub fn instance_value(instance: &Instance, fingerprint: &str) -> Value {
    json!({
        "fingerprint": fingerprint,
        "ring": ring_value(instance.ring),
        "vars": instance.vars,
        "rank": instance.rank,
        "order": instance.order.to_string(),
        "generators": render_elements(&instance.gens, &instance.vars),
    })
}

/// The full report string: envelope with sorted keys, pretty-printed, trailing
/// newline.
pub fn envelope(command: &str, instance: Value, result: Value) -> String {
    let doc = json!({
        "command": command,
        "instance": instance,
        "result": result,
        "status": "ok",
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serialization");
    s.push('\n');
    s
}

pub fn stats_value(stats: &CompletionStats) -> Value {
    json!({
        "pairs_processed": stats.pairs_processed,
        "zero_reductions": stats.zero_reductions,
        "inserted": stats.inserted,
    })
}

pub fn basis_value(basis: &Basis, stats: Option<&CompletionStats>, names: &[String]) -> Value {
    let lines = render_elements(basis.elements(), names);
    let mut v = json!({
        "kind": basis.status().name(),
        "elements": lines,
        "fingerprint": lines_fingerprint(&lines),
        "homogeneous": basis.is_homogeneous(),
    });
    if let Some(stats) = stats {
        v["stats"] = stats_value(stats);
    }
    v
}

pub fn normal_form_value(nf: &NormalForm, basis: &Basis, names: &[String]) -> Value {
    let coordinates: Vec<Value> = nf
        .coordinates
        .iter()
        .map(|(x, c)| {
            json!({
                "monomial": module_mono_str(basis, x, names),
                "coefficient": c.to_string(),
            })
        })
        .collect();
    json!({
        "coordinates": coordinates,
        "expansion": nf.expansion.render(names),
        "member": nf.is_zero(),
    })
}

pub fn trace_value(trace: &ReductionTrace, names: &[String]) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "reducer": s.reducer,
                "monomial": mono_str(&s.mono, names),
                "coefficient": s.coeff.to_string(),
            })
        })
        .collect();
    json!({
        "steps": steps,
        "remainder": trace.final_element.render(names),
    })
}

pub fn rank_value(rank: &RankReport, names: &[String]) -> Value {
    match rank {
        RankReport::Infinite { component, variable } => json!({
            "rank": "infinite",
            "witness": {
                "component": component + 1,
                "variable": names[*variable],
            },
        }),
        RankReport::Finite { rank, per_degree } => json!({
            "rank": rank,
            "per_degree": per_degree,
        }),
    }
}

pub fn pipeline_value(pipeline: &GradedPipeline, names: &[String]) -> Value {
    json!({
        "twin_ring": ring_value(pipeline.twin_ring),
        "standard_basis": render_elements(&pipeline.standard_basis, names),
        "initial_forms": render_elements(&pipeline.initial_forms, names),
        "graded_basis": basis_value(&pipeline.graded_basis, Some(&pipeline.graded_stats), names),
    })
}

pub fn flat_value(decision: &FlatDecision, names: &[String]) -> Value {
    let report = decision.report();
    let witness = report.witness.as_ref().map(|(x, m)| {
        json!({ "monomial": module_mono_str(decision.carrier(), x, names), "m_value": m })
    });
    let mut v = json!({
        "flat": report.flat,
        "criteria": {
            "table": report.by_table,
            "unit_divisor": report.by_unit_divisor,
            "minimal_units": report.by_minimal_units,
        },
        "witness": witness,
        "per_degree_free": report.per_degree_free,
        "max_degree": report.max_degree,
    });
    match decision {
        FlatDecision::Graded { basis, .. } => {
            v["route"] = json!("graded");
            v["carrier_basis"] = basis_value(basis, None, names);
        }
        FlatDecision::ViaGraded { pipeline, slices_validated, .. } => {
            v["route"] = json!("associated-graded");
            v["pipeline"] = pipeline_value(pipeline, names);
            v["slices_validated"] = json!(slices_validated);
        }
    }
    v
}

pub fn oracle_value(report: &OracleFlatnessReport) -> Value {
    let per_degree: Vec<Value> = report
        .per_degree
        .iter()
        .enumerate()
        .map(|(d, inv)| {
            json!({
                "degree": d,
                "exponents": inv.exponents,
                "free_rank": inv.free_rank,
                "free": inv.is_free(),
            })
        })
        .collect();
    json!({
        "flat": report.flat,
        "first_non_free_degree": report.first_non_free_degree,
        "max_degree": report.max_degree,
        "per_degree": per_degree,
    })
}
