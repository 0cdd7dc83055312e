//! Instance files: JSON with schema validation, JSON-pointer error paths and
//! a canonical emitter.

use std::collections::HashSet;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::chardata::{Coeff, Datum, FactorSpec};
use crate::error::{Result, UflError};
use crate::orbital::Partition;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceOptions {
    pub precision_override: Option<i64>,
    pub enum_cap: Option<usize>,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub q: u32,
    pub factors: Vec<FactorSpec>,
    pub partition: Option<(Vec<String>, Vec<String>)>,
    pub options: InstanceOptions,
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    // sorted so the first reported key does not depend on input order
    let mut keys: Vec<&String> = obj.keys().collect();
    keys.sort();
    for k in keys {
        if !allowed.contains(&k.as_str()) {
            return Err(UflError::UnknownField { path: format!("{path}/{k}"), field: k.clone() });
        }
    }
    Ok(())
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| UflError::schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| UflError::schema(path, "expected an array"))
}

fn required<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| UflError::schema(format!("{path}/{key}"), "missing required field"))
}

fn int(v: &Value, path: &str, min: i64, max: i64) -> Result<i64> {
    let x = v.as_i64().ok_or_else(|| UflError::schema(path, "expected an integer"))?;
    if x < min || x > max {
        return Err(UflError::schema(path, format!("expected an integer in [{min}, {max}]")));
    }
    Ok(x)
}

fn string(v: &Value, path: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| UflError::schema(path, "expected a string"))
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

const MAX_EXPONENT: i64 = 1 << 20;

fn parse_factor(v: &Value, path: &str, q: u32) -> Result<FactorSpec> {
    let obj = object(v, path)?;
    check_keys(obj, path, &["e", "f", "gamma", "id"])?;
    let id = string(required(obj, path, "id")?, &format!("{path}/id"))?;
    if id.is_empty() {
        return Err(UflError::schema(format!("{path}/id"), "id must be nonempty"));
    }
    let e = int(required(obj, path, "e")?, &format!("{path}/e"), 1, 64)? as u32;
    let f = int(required(obj, path, "f")?, &format!("{path}/f"), 1, 63)? as u32;
    if f.is_multiple_of(2) {
        return Err(UflError::schema(format!("{path}/f"), "residue degree must be odd"));
    }
    let gpath = format!("{path}/gamma");
    let mut gamma = Vec::new();
    for (k, m) in array(required(obj, path, "gamma")?, &gpath)?.iter().enumerate() {
        let mpath = format!("{gpath}/{k}");
        let parts = array(m, &mpath)?;
        if parts.len() != 3 {
            return Err(UflError::schema(&mpath, "expected [t_pow, pi_pow, coeff]"));
        }
        let tp = int(&parts[0], &format!("{mpath}/0"), 0, MAX_EXPONENT)?;
        let pp = int(&parts[1], &format!("{mpath}/1"), 0, MAX_EXPONENT)?;
        let cpath = format!("{mpath}/2");
        let coeff = match &parts[2] {
            Value::String(s) if s == "eps" => Coeff::Eps,
            Value::Array(ds) => {
                if ds.len() > 2 * f as usize {
                    return Err(UflError::schema(&cpath, format!("at most {} digits", 2 * f)));
                }
                let digits = ds
                    .iter()
                    .enumerate()
                    .map(|(i, d)| int(d, &format!("{cpath}/{i}"), 0, q as i64 - 1).map(|x| x as u32))
                    .collect::<Result<Vec<u32>>>()?;
                Coeff::Digits(digits)
            }
            _ => return Err(UflError::schema(&cpath, "expected \"eps\" or an array of base-p digits")),
        };
        gamma.push((tp, pp, coeff));
    }
    Ok(FactorSpec { id, e, f, gamma })
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| UflError::schema("", format!("invalid JSON: {e}")))?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<InstanceFile> {
    let obj = object(v, "")?;
    check_keys(obj, "", &["factors", "options", "partition", "q"])?;
    let q = int(required(obj, "", "q")?, "/q", 3, 1 << 16)?;
    if !is_prime(q) || q % 2 == 0 {
        return Err(UflError::schema("/q", "q must be an odd prime"));
    }
    let q = q as u32;
    let fs = array(required(obj, "", "factors")?, "/factors")?;
    if fs.is_empty() {
        return Err(UflError::schema("/factors", "at least one factor is required"));
    }
    let mut factors = Vec::new();
    let mut seen = HashSet::new();
    for (k, f) in fs.iter().enumerate() {
        let path = format!("/factors/{k}");
        let spec = parse_factor(f, &path, q)?;
        if !seen.insert(spec.id.clone()) {
            return Err(UflError::schema(format!("{path}/id"), format!("duplicate id {:?}", spec.id)));
        }
        factors.push(spec);
    }
    let partition = match obj.get("partition") {
        None => None,
        Some(p) => {
            let parts = array(p, "/partition")?;
            if parts.len() != 2 {
                return Err(UflError::schema("/partition", "expected two lists of ids"));
            }
            let mut lists = Vec::new();
            let mut used = HashSet::new();
            for (a, part) in parts.iter().enumerate() {
                let ppath = format!("/partition/{a}");
                let ids = array(part, &ppath)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| string(x, &format!("{ppath}/{i}")))
                    .collect::<Result<Vec<String>>>()?;
                if ids.is_empty() {
                    return Err(UflError::schema("/partition", "parts must be nonempty"));
                }
                for id in &ids {
                    if !seen.contains(id) {
                        return Err(UflError::schema("/partition", format!("unknown id {id:?}")));
                    }
                    if !used.insert(id.clone()) {
                        return Err(UflError::schema("/partition", format!("id {id:?} used twice")));
                    }
                }
                lists.push(ids);
            }
            let second = lists.pop().expect("two parts");
            let first = lists.pop().expect("two parts");
            Some((first, second))
        }
    };
    let mut options = InstanceOptions::default();
    if let Some(o) = obj.get("options") {
        let oo = object(o, "/options")?;
        check_keys(oo, "/options", &["enum_cap", "jobs", "precision_override"])?;
        if let Some(x) = oo.get("precision_override") {
            options.precision_override = Some(int(x, "/options/precision_override", 1, 1 << 16)?);
        }
        if let Some(x) = oo.get("enum_cap") {
            options.enum_cap = Some(int(x, "/options/enum_cap", 0, 64)? as usize);
        }
        if let Some(x) = oo.get("jobs") {
            options.jobs = Some(int(x, "/options/jobs", 1, 1024)? as usize);
        }
    }
    Ok(InstanceFile { q, factors, partition, options })
}

fn factor_json(f: &FactorSpec) -> Value {
    let gamma: Vec<Value> = f
        .gamma
        .iter()
        .map(|(tp, pp, c)| {
            let coeff = match c {
                Coeff::Eps => json!("eps"),
                Coeff::Digits(d) => json!(d),
            };
            json!([tp, pp, coeff])
        })
        .collect();
    json!({"id": f.id, "e": f.e, "f": f.f, "gamma": gamma})
}

impl InstanceFile {
    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("q".into(), json!(self.q));
        obj.insert("factors".into(), Value::Array(self.factors.iter().map(factor_json).collect()));
        if let Some((a, b)) = &self.partition {
            obj.insert("partition".into(), json!([a, b]));
        }
        let mut o = Map::new();
        if let Some(x) = self.options.precision_override {
            o.insert("precision_override".into(), json!(x));
        }
        if let Some(x) = self.options.enum_cap {
            o.insert("enum_cap".into(), json!(x));
        }
        if let Some(x) = self.options.jobs {
            o.insert("jobs".into(), json!(x));
        }
        if !o.is_empty() {
            obj.insert("options".into(), Value::Object(o));
        }
        Value::Object(obj)
    }

    /// Canonical text: sorted keys, two-space indentation, trailing newline.
    pub fn emit(&self) -> String {
        crate::report::canonical(&self.to_value())
    }

    /// SHA-256 of the canonical form of `q` and the factors.
    pub fn datum_hash(&self) -> String {
        let core = json!({"q": self.q, "factors": self.factors.iter().map(factor_json).collect::<Vec<_>>()});
        hex::encode(Sha256::digest(crate::report::canonical(&core).as_bytes()))
    }

    pub fn datum(&self, precision: Option<i64>) -> Result<Datum> {
        Ok(Datum::from_specs(self.q, &self.factors)?.with_precision_override(precision.or(self.options.precision_override)))
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.id == id)
    }

    pub fn indices(&self, ids: &[String], path: &str) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| self.index_of(id).ok_or_else(|| UflError::schema(path, format!("unknown id {id:?}"))))
            .collect()
    }

    pub fn partition(&self) -> Result<Partition> {
        let (a, b) = self.partition.as_ref().ok_or_else(|| UflError::schema("/partition", "a partition is required"))?;
        Partition::new(self.indices(a, "/partition")?, self.indices(b, "/partition")?)
    }

    /// `I1 u I2` when a partition is given, all factors otherwise.
    pub fn default_set(&self) -> Result<Vec<usize>> {
        match &self.partition {
            Some(_) => Ok(self.partition()?.union()),
            None => Ok((0..self.factors.len()).collect()),
        }
    }

    pub fn ids(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&i| self.factors[i].id.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODE3: &str = r#"{"q": 3, "factors": [{"id": "1", "e": 1, "f": 1, "gamma": []},
        {"id": "2", "e": 1, "f": 1, "gamma": [[1, 0, "eps"]]}], "partition": [["1"], ["2"]]}"#;

    fn path_of(r: Result<InstanceFile>) -> (String, String) {
        let e = r.unwrap_err();
        (e.code().to_string(), e.path().unwrap_or_default().to_string())
    }

    #[test]
    fn parse_node3() {
        let inst = parse_instance(NODE3).unwrap();
        assert_eq!(inst.factors.len(), 2);
        assert_eq!(inst.factors[1].gamma, vec![(1, 0, Coeff::Eps)]);
        let again = parse_instance(&inst.emit()).unwrap();
        assert_eq!(again, inst);
        assert_eq!(again.emit(), inst.emit());
    }

    #[test]
    fn schema_errors() {
        let dup = NODE3.replace(r#""id": "2""#, r#""id": "1""#);
        assert_eq!(path_of(parse_instance(&dup)), ("SchemaError".into(), "/factors/1/id".into()));
        let unknown = NODE3.replace(r#"[["1"], ["2"]]"#, r#"[["1"], ["3"]]"#);
        assert_eq!(path_of(parse_instance(&unknown)), ("SchemaError".into(), "/partition".into()));
        let extra = NODE3.replace(r#""q": 3"#, r#""q": 3, "colour": 1"#);
        assert_eq!(path_of(parse_instance(&extra)), ("UnknownFieldError".into(), "/colour".into()));
        let bad_q = NODE3.replace(r#""q": 3"#, r#""q": 9"#);
        assert_eq!(path_of(parse_instance(&bad_q)), ("SchemaError".into(), "/q".into()));
        let bad_coeff = NODE3.replace(r#""eps""#, r#""pi""#);
        assert_eq!(path_of(parse_instance(&bad_coeff)), ("SchemaError".into(), "/factors/1/gamma/0/2".into()));
    }
}
