//! JSON reports and their plain-text rendering.

use localroots::lab::{AllOrdersVerdict, Certificate, Order, RootVerdict, TowerWitness};
use localroots::local::{FieldDescriptor, LocalMatrix};
use serde_json::{json, Map, Value};

pub fn matrix(m: &LocalMatrix) -> Value {
    serde_json::to_value(m.to_json()).expect("matrix files serialize")
}

pub fn order(o: &Order) -> Value {
    match o {
        Order::Finite(d) => Value::String(d.to_string()),
        Order::Infinite => Value::String("infinite".into()),
    }
}

pub fn precision(field: &FieldDescriptor) -> Value {
    match field {
        FieldDescriptor::Rational => Value::Null,
        other => Value::from(other.precision()),
    }
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::OneParameter { log } => json!({"kind": "one_parameter", "log": matrix(log)}),
        Certificate::Identity => json!({"kind": "identity"}),
        Certificate::Blocked { k, prime, reason } => json!({
            "kind": "blocked",
            "k": k.to_string(),
            "prime": prime,
            "reason": reason,
        }),
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn all_orders(v: &AllOrdersVerdict) -> (Value, Value) {
    (Value::from(yes_no(v.holds)), certificate(&v.certificate))
}

pub fn root(v: &RootVerdict) -> Value {
    let mut cert = Map::new();
    cert.insert("reason".into(), Value::String(v.reason.clone()));
    if let Some(w) = &v.witness {
        cert.insert("witness".into(), matrix(w));
    }
    Value::Object(cert)
}

pub fn tower(t: &TowerWitness, verified: bool) -> Value {
    json!({
        "q": t.q,
        "depth": t.depth,
        "verified": verified,
        "witnesses": t.witnesses.iter().map(matrix).collect::<Vec<_>>(),
    })
}

pub fn envelope(op: &str, verdict: Value, certificate: Value, precision_used: Value) -> Value {
    json!({
        "op": op,
        "verdict": verdict,
        "certificate": certificate,
        "precision_used": precision_used,
    })
}

fn is_matrix(m: &Map<String, Value>) -> bool {
    m.len() == 3 && m.contains_key("field") && m.contains_key("n") && m.contains_key("entries")
}

/// `p^v * u_p + O(p^(v + precision))` for a p-adic entry object.
fn padic_text(m: &Map<String, Value>) -> Option<String> {
    let p = m.get("p")?.as_u64()?;
    let prec = m.get("precision")?.as_i64()?;
    let digits = m.get("unit_digits")?.as_str()?;
    let Some(v) = m.get("valuation")?.as_i64() else {
        return Some("0".into());
    };
    let body = if digits == "0" { String::new() } else if v == 0 { format!("{digits}_{p} + ") } else { format!("{p}^{v} * {digits}_{p} + ") };
    Some(format!("{body}O({p}^{})", v + prec))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) => padic_text(m).unwrap_or_else(|| v.to_string()),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn field_text(f: &Value) -> String {
    match f.get("kind").and_then(Value::as_str) {
        Some("padic") => format!("Q_{}", scalar_text(&f["p"])),
        Some("laurent") => {
            let p = f["p"].as_u64().unwrap_or(0);
            let s = f.get("s").and_then(Value::as_u64).unwrap_or(1) as u32;
            format!("F_{}((t))", p.pow(s))
        }
        _ => "Q".into(),
    }
}

fn render_into(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) if is_matrix(m) => {
            out.push_str(&format!("{pad}{key}: matrix over {}\n", field_text(&m["field"])));
            for row in m["entries"].as_array().into_iter().flatten() {
                let cells: Vec<String> = row.as_array().into_iter().flatten().map(scalar_text).collect();
                out.push_str(&format!("{pad}  [{}]\n", cells.join(", ")));
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                render_into(out, k, x, indent + 1);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", cells.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                render_into(out, &format!("[{i}]"), x, indent + 1);
            }
        }
        scalar => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(scalar))),
    }
}

/// Indented `key: value` lines; matrices print one row per line.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = report {
        for key in ["op", "verdict", "certificate", "precision_used"] {
            if let Some(v) = m.get(key) {
                render_into(&mut out, key, v, 0);
            }
        }
        for (k, v) in m {
            if !["op", "verdict", "certificate", "precision_used"].contains(&k.as_str()) {
                render_into(&mut out, k, v, 0);
            }
        }
    }
    out
}
