use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use superdyn::classifier::ObstructionKind;
use superdyn::witness::{NormKind, ScaledScalar, WitnessCertificate, WitnessSearch};
use superdyn::{DynamicsClass, LawReport};

pub const SCHEMA: &str = "superdyn/1";

/// Versioned JSON report. Field order is fixed; there is no timestamp, so
/// identical inputs give identical bytes.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub tool_version: &'static str,
    pub input_digest: String,
    pub config: Value,
    pub results: Value,
}

impl Report {
    pub fn new(command: &'static str, input_digest: String, config: Value, results: Value) -> Self {
        Self {
            schema: SCHEMA,
            command,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest,
            config,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn scalar(s: &ScaledScalar) -> Value {
    json!({
        "value": complex(s.value()),
        "mantissa": complex(s.mantissa),
        "log_scale": s.log_scale,
    })
}

pub fn certificate(c: &WitnessCertificate) -> Value {
    json!({ "n": c.n, "lambda": scalar(&c.lambda), "residual": c.residual })
}

pub fn search(s: &WitnessSearch) -> Value {
    let x = match &s.best.norm_kind {
        NormKind::Operator => Value::Null,
        NormKind::Vector(x) => Value::Array(x.iter().map(|z| complex(*z)).collect()),
    };
    json!({
        "success": s.success(),
        "first_success": s.first_success,
        "vector": x,
        "best": certificate(&s.best),
        "certificates": s.certificates.iter().map(certificate).collect::<Vec<_>>(),
    })
}

fn obstruction_fields(kind: &ObstructionKind) -> Value {
    match kind {
        ObstructionKind::ModulusMismatch { first, second } => {
            json!({ "first": complex(*first), "second": complex(*second) })
        }
        ObstructionKind::JordanBlock {
            eigenvalue,
            algebraic_mult,
            geometric_mult,
        } => json!({
            "eigenvalue": complex(*eigenvalue),
            "algebraic_mult": algebraic_mult,
            "geometric_mult": geometric_mult,
        }),
        ObstructionKind::ZeroRadius { radius } => json!({ "radius": radius }),
    }
}

pub fn class(k: &DynamicsClass) -> Value {
    let s = &k.spectrum;
    let eigenvalues: Vec<Value> = s
        .eigenvalues
        .iter()
        .map(|e| {
            json!({
                "value": complex(e.value),
                "algebraic_mult": e.algebraic_mult,
                "geometric_mult": e.geometric_mult,
            })
        })
        .collect();
    let certificate = k.certificate.as_ref().map(|c| {
        json!({
            "radius": c.radius,
            "eigenbasis_condition": c.eigenbasis_condition,
            "canonical_form": c.canonical_form.data().iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        })
    });
    let obstruction = k.obstruction.as_ref().map(|o| {
        json!({
            "kind": o.kind.name(),
            "detail": o.detail,
            "data": obstruction_fields(&o.kind),
        })
    });
    json!({
        "verdict": format!("{:?}", k.verdict),
        "certificate": certificate,
        "obstruction": obstruction,
        "eigenvalues": eigenvalues,
        "modulus_min": s.modulus_min,
        "modulus_max": s.modulus_max,
        "diagonalizability_margin": k.diagonalizability_margin,
    })
}

pub fn law(r: &LawReport) -> Value {
    let measurements: serde_json::Map<String, Value> = r
        .measurements
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    json!({
        "law": r.law.name(),
        "passed": r.passed,
        "margin": r.margin,
        "detail": r.detail,
        "measurements": measurements,
    })
}
