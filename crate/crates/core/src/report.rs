//! Canonical JSON reports. Keys are sorted; counts and other quantities
//! that may exceed `2^53` are decimal strings.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::chardata::Datum;
use crate::error::{Result, UflError};
use crate::geometry;
use crate::instance::InstanceFile;
use crate::lattice::enumerate::class_label;
use crate::local::Series;
use crate::orbital::{FlReport, Kappa, Partition};

/// Sorted keys, two-space indentation, trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn error_value(e: &UflError) -> Value {
    json!({"error": {"code": e.code(), "message": e.to_string(), "path": e.path()}})
}

fn counts_value(counts: &BTreeMap<Vec<u8>, u64>) -> Value {
    Value::Object(counts.iter().map(|(l, c)| (class_label(l), json!(c.to_string()))).collect())
}

pub fn invariants_value(inst: &InstanceFile, datum: &Datum, set: &[usize]) -> Result<Value> {
    let inv = datum.invariants(set)?;
    let c0: Vec<String> = inv.c0.iter().map(|c| format!("{c:?}")).collect();
    Ok(json!({
        "command": "invariants",
        "datum_hash": inst.datum_hash(),
        "q": inst.q,
        "J": inst.ids(set),
        "n": inv.n,
        "e": inv.e,
        "f": inv.f,
        "delta": inv.delta,
        "r_ij": inv.r,
        "a_J": inv.a,
        "delta_J": inv.delta_j,
        "c0": c0,
        "lambda0": inv.lambda0,
        "b0": inv.b0,
        "m_J": inv.m_j,
        "disc_valuation": inv.disc_valuation,
        "precision": inv.precision,
    }))
}

pub fn orbital_value(inst: &InstanceFile, set: &[usize], lambda: &[u8], count: u64, enumerator: &str) -> Value {
    json!({
        "command": "orbital",
        "datum_hash": inst.datum_hash(),
        "J": inst.ids(set),
        "lambda": class_label(lambda),
        "count": count.to_string(),
        "enumerator": enumerator,
    })
}

fn ids_of(inst: &InstanceFile, part: &Partition) -> Value {
    json!([inst.ids(&part.i1), inst.ids(&part.i2)])
}

pub fn fl_value(inst: &InstanceFile, rep: &FlReport) -> Value {
    let mut by_kappa = Map::new();
    for (k, v) in [Kappa::Kappa1, Kappa::Kappa2].iter().zip(&rep.o_kappa) {
        by_kappa.insert(k.name().into(), json!(v.to_string()));
    }
    let mut obj = json!({
        "command": "flverify",
        "datum_hash": inst.datum_hash(),
        "q": inst.q,
        "partition": ids_of(inst, &rep.partition),
        "counts": counts_value(&rep.counts),
        "shift": rep.shift,
        "O_kappa": rep.o_kappa[0].to_string(),
        "O_kappa_by_character": Value::Object(by_kappa),
        "part_counts": [counts_value(&rep.part_counts[0]), counts_value(&rep.part_counts[1])],
        "SO_H": rep.so_h.to_string(),
        "r": rep.r,
        "transfer": rep.transfer.to_string(),
        "enumerator": rep.enumerator.name(),
        "verdict": if rep.verdict() { "PASS" } else { "FAIL" },
    });
    if let Some(o) = &rep.oracle {
        let compared: Vec<Value> = o
            .compared
            .iter()
            .map(|(set, l, n)| json!({"J": inst.ids(set), "lambda": class_label(l), "naive": n.to_string()}))
            .collect();
        obj["oracle"] = json!({"agree": o.agree, "compared": compared, "skipped": o.skipped});
    }
    obj
}

fn series_strings(a: &[Series]) -> Vec<String> {
    a.iter().map(|x| x.to_string()).collect()
}

fn valuation_value(s: &Series) -> Result<Value> {
    if s.is_exact_zero() {
        return Ok(Value::Null);
    }
    Ok(json!(s.valuation()?))
}

/// Characteristic points of `P_{I1}`, `P_{I2}` and their product, with the
/// Kostant section, discriminants and the intersection profile.
pub fn spectral_value(inst: &InstanceFile, datum: &Datum, part: &Partition) -> Result<Value> {
    let one = Series::one(datum.ctx());
    let a1 = geometry::point_of_poly(&datum.poly_j(&part.i1));
    let a2 = geometry::point_of_poly(&datum.poly_j(&part.i2));
    let a = geometry::endo_product(&a1, &a2, &one);
    let direct = geometry::point_of_poly(&datum.poly_j(&part.union()));
    let product_ok = a.iter().zip(&direct).all(|(x, y)| x.agrees_with(y));
    let kostant_ok = [&a1, &a2, &a]
        .iter()
        .all(|pt| geometry::point_of_poly(&geometry::kostant_section(pt).charpoly()).iter().zip(pt.iter()).all(|(x, y)| x.agrees_with(y)));
    let d = geometry::spectral_discriminant(&a, &one);
    let d1 = geometry::spectral_discriminant(&a1, &one);
    let d2 = geometry::spectral_discriminant(&a2, &one);
    let res = geometry::poly_of_point(&a1, &one).resultant(&geometry::poly_of_point(&a2, &one));
    let vd = valuation_value(&d)?;
    let identity = match (vd.as_i64(), valuation_value(&d1)?.as_i64(), valuation_value(&d2)?.as_i64(), valuation_value(&res)?.as_i64()) {
        (Some(v), Some(v1), Some(v2), Some(vr)) => v == v1 + v2 + 2 * vr,
        _ => false,
    };
    let profile = geometry::intersection_profile(datum, part)?;
    let points: Vec<Value> = profile
        .points
        .iter()
        .map(|z| json!({"factor": z.factor, "degree": z.degree, "multiplicity": z.multiplicity, "inert": z.inert}))
        .collect();
    Ok(json!({
        "command": "spectral",
        "datum_hash": inst.datum_hash(),
        "partition": ids_of(inst, part),
        "a": series_strings(&a),
        "a1": series_strings(&a1),
        "a2": series_strings(&a2),
        "tau_parity": geometry::has_tau_parity(&a),
        "product_matches_P_I": product_ok,
        "kostant_roundtrip": kostant_ok,
        "discriminant_valuation": vd,
        "reduced": geometry::is_reduced(&a, &one)?,
        "discriminant_identity": identity,
        "tangent_injective": geometry::tangent_injectivity(&a1, &a2, &one)?,
        "intersection_profile": {
            "points": points,
            "m": profile.m,
            "sign": profile.sign(),
            "r_total": profile.r_total,
        },
    }))
}
