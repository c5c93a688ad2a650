//! JSON forms of elements, points, trees and results. Every top-level
//! document carries `"schema": "1"`.
//!
//! Elements are written as integers over a finite field (the residue index;
//! for `F_4` the indices of `0, 1, x, x²`) and for p-adic zero, and as
//! `{"v": valuation, "digits": [unit digits, least significant first]}`
//! otherwise. On input, integers, rational strings `"a/b"` and `F_4` labels
//! are accepted as well.

use serde_json::{json, Map, Value};

use crate::constructions::{ClassificationResult, Verdict};
use crate::geometry::Sphere;
use crate::isotree::{BallMap, IsometryTree, Leaf, NonlinearityCertificate, SphereAction, TableMap, Witness};
use crate::oracle::{IsometryCensus, IsoscelesReport};
use crate::scalars::{f4_label_index, Field, FieldElement};
use crate::spaces::{Point, Space, SpaceDescriptor};
use crate::tingley::{Obstruction, SphereIsometrySpec, SphereMap};
use crate::value::NormValue;
use crate::Domain;

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

type JResult<T> = std::result::Result<T, JsonError>;

fn err<T>(path: &str, message: impl Into<String>) -> JResult<T> {
    Err(JsonError { path: path.to_string(), message: message.into() })
}

/// Adds the schema tag to an object.
pub fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        let mut out = Map::new();
        out.insert("schema".into(), Value::from(SCHEMA));
        out.extend(std::mem::take(m));
        *m = out;
    }
    v
}

fn field_of<'a>(v: &'a Value, key: &str, path: &str) -> JResult<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => err(path, format!("missing field \"{key}\"")),
    }
}

fn check_schema(v: &Value, path: &str) -> JResult<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => err(&format!("{path}.schema"), format!("unsupported schema {other}")),
    }
}

pub fn value_to_json(v: &NormValue) -> Value {
    Value::String(v.to_string())
}

pub fn value_from_json(v: &Value, path: &str) -> JResult<NormValue> {
    match v {
        Value::String(s) => s.parse().or_else(|e: crate::value::ParseValueError| err(path, e.to_string())),
        Value::Number(n) => match n.as_u64() {
            Some(k) => Ok(NormValue::integer(k as i128)),
            None => err(path, "expected a nonnegative integer or a rational string"),
        },
        _ => err(path, "expected a rational string such as \"1/3\""),
    }
}

pub fn element_to_json(field: &Field, x: &FieldElement) -> Value {
    match x {
        FieldElement::Residue(i) => Value::from(*i),
        FieldElement::PadicZero => Value::from(0),
        FieldElement::Padic { val, .. } => {
            let mut digits = field.digits(x).unwrap();
            while digits.last() == Some(&0) {
                digits.pop();
            }
            json!({ "v": val, "digits": digits })
        }
    }
}

pub fn element_from_json(field: &Field, v: &Value, path: &str) -> JResult<FieldElement> {
    let arith = |e: crate::scalars::ArithError| JsonError { path: path.to_string(), message: e.to_string() };
    let is_f4 = field.order() == Some(4);
    match v {
        Value::Number(n) => {
            let Some(k) = n.as_i64() else { return err(path, "expected an integer") };
            if is_f4 {
                return match u32::try_from(k) {
                    Ok(i) if i < 4 => Ok(FieldElement::Residue(i)),
                    _ => err(path, "F_4 elements are indices 0..3 or labels 0, 1, x, x^2"),
                };
            }
            field.from_integer(k).map_err(arith)
        }
        Value::String(s) => {
            if is_f4 {
                return match f4_label_index(s) {
                    Some(i) => Ok(FieldElement::Residue(i)),
                    None => err(path, format!("unknown F_4 label {s:?}")),
                };
            }
            let (n, d) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            match (n.trim().parse::<i64>(), d.trim().parse::<i64>()) {
                (Ok(n), Ok(d)) if d != 0 => field.from_rational(n, d).map_err(arith),
                _ => err(path, format!("expected an integer or \"a/b\", got {s:?}")),
            }
        }
        Value::Object(_) => {
            let Some(p) = field.prime() else { return err(path, "digit form needs a p-adic field") };
            let val = field_of(v, "v", path)?
                .as_i64()
                .ok_or(())
                .or_else(|_| err(&format!("{path}.v"), "expected an integer"))?;
            let Some(digits) = field_of(v, "digits", path)?.as_array() else {
                return err(&format!("{path}.digits"), "expected an array of digits");
            };
            let mut acc = field.zero();
            for (k, d) in digits.iter().enumerate() {
                let dpath = format!("{path}.digits[{k}]");
                let Some(d) = d.as_u64().filter(|d| *d < p) else {
                    return err(&dpath, format!("expected a digit below {p}"));
                };
                if d == 0 {
                    continue;
                }
                let pos = i32::try_from(val + k as i64).or_else(|_| err(&dpath, "position out of range"))?;
                let term = field.uniformizer_power(pos).unwrap().map_err(arith)?;
                let term = field.mul(&term, &field.from_integer(d as i64).map_err(arith)?).map_err(arith)?;
                acc = field.add(&acc, &term).map_err(arith)?;
            }
            Ok(acc)
        }
        _ => err(path, "expected an integer, a string or {\"v\", \"digits\"}"),
    }
}

pub fn point_to_json(space: &Space, x: &Point) -> Value {
    Value::Array(x.coords().iter().map(|c| element_to_json(space.field(), c)).collect())
}

pub fn point_from_json(space: &Space, v: &Value, path: &str) -> JResult<Point> {
    let Some(items) = v.as_array() else { return err(path, "expected an array of coordinates") };
    if items.len() != space.dim() {
        return err(path, format!("expected {} coordinates, got {}", space.dim(), items.len()));
    }
    let coords = items
        .iter()
        .enumerate()
        .map(|(i, c)| element_from_json(space.field(), c, &format!("{path}[{i}]")))
        .collect::<JResult<Vec<_>>>()?;
    Ok(Point::new(coords))
}

pub fn space_from_json(v: &Value, path: &str) -> JResult<Space> {
    let desc: SpaceDescriptor = serde_json::from_value(v.clone()).or_else(|e| err(path, e.to_string()))?;
    if desc.dim != desc.weights.len() {
        return err(&format!("{path}.weights"), format!("expected {} weights, got {}", desc.dim, desc.weights.len()));
    }
    Space::new(desc).or_else(|e| err(path, e.to_string()))
}

pub fn space_to_json(space: &Space) -> Value {
    serde_json::to_value(space.descriptor()).expect("descriptor serialises")
}

fn leaf_to_json(space: &Space, leaf: &Leaf) -> Value {
    let f = space.field();
    match leaf {
        Leaf::Identity => Value::from("identity"),
        Leaf::Negation => Value::from("negation"),
        Leaf::Scalar(l) => json!({ "scalar": element_to_json(f, l) }),
        Leaf::Matrix(m) => {
            let rows: Vec<Value> =
                m.iter().map(|r| Value::Array(r.iter().map(|e| element_to_json(f, e)).collect())).collect();
            json!({ "matrix": rows })
        }
    }
}

fn leaf_from_json(space: &Space, v: &Value, path: &str) -> JResult<Leaf> {
    let e = |x: crate::Error| JsonError { path: path.to_string(), message: x.to_string() };
    match v {
        Value::String(s) if s == "identity" => Ok(Leaf::Identity),
        Value::String(s) if s == "negation" => Ok(Leaf::Negation),
        Value::Object(m) if m.contains_key("scalar") => {
            let l = element_from_json(space.field(), &m["scalar"], &format!("{path}.scalar"))?;
            Leaf::scalar(space, l).map_err(e)
        }
        Value::Object(m) if m.contains_key("matrix") => {
            let mpath = format!("{path}.matrix");
            let Some(rows) = m["matrix"].as_array() else { return err(&mpath, "expected an array of rows") };
            let rows = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let rp = format!("{mpath}[{i}]");
                    let Some(r) = r.as_array() else { return err(&rp, "expected a row") };
                    r.iter()
                        .enumerate()
                        .map(|(j, x)| element_from_json(space.field(), x, &format!("{rp}[{j}]")))
                        .collect()
                })
                .collect::<JResult<Vec<Vec<_>>>>()?;
            Leaf::matrix(space, rows, &leaf_domain(space).map_err(e)?).map_err(e)
        }
        _ => err(path, "expected \"identity\", \"negation\", {\"scalar\": …} or {\"matrix\": …}"),
    }
}

/// Points on which a matrix leaf read from JSON must preserve norms.
fn leaf_domain(space: &Space) -> crate::Result<Domain> {
    match space.field().prime() {
        None => Domain::finite(space),
        Some(_) => {
            let top = *space.weights().iter().max().unwrap();
            Domain::with_depth(space, &top, 2)
        }
    }
}

fn tree_body(space: &Space, tree: &IsometryTree) -> Value {
    let spheres: Vec<Value> = tree.spheres().map(|a| action_to_json(space, a, tree.depth)).collect();
    json!({ "depth": tree.depth, "leaf": leaf_to_json(space, &tree.leaf), "spheres": spheres })
}

fn action_to_json(space: &Space, a: &SphereAction, depth: u32) -> Value {
    let children: Vec<Value> = a
        .maps()
        .iter()
        .map(|m| {
            if m.child.is_identity() && m.child.depth == depth.saturating_sub(1) {
                Value::from("identity")
            } else {
                tree_body(space, &m.child)
            }
        })
        .collect();
    let mut obj = json!({ "radius": value_to_json(&a.radius()), "sigma": a.sigma(), "children": children });
    for (key, pick) in [("pre", (|m: &BallMap| &m.pre) as fn(&BallMap) -> &Point), ("post", |m: &BallMap| &m.post)] {
        if a.maps().iter().any(|m| !space.is_zero(pick(m))) {
            obj[key] = Value::Array(a.maps().iter().map(|m| point_to_json(space, pick(m))).collect());
        }
    }
    obj
}

pub fn tree_to_json(space: &Space, tree: &IsometryTree) -> Value {
    with_schema(tree_body(space, tree))
}

pub fn tree_from_json(space: &Space, v: &Value) -> JResult<IsometryTree> {
    check_schema(v, "$")?;
    tree_at(space, v, "$", None)
}

fn tree_at(space: &Space, v: &Value, path: &str, default_depth: Option<u32>) -> JResult<IsometryTree> {
    if v.as_str() == Some("identity") {
        return match default_depth {
            Some(d) => Ok(IsometryTree::identity(d)),
            None => err(path, "a top-level tree must be an object"),
        };
    }
    if !v.is_object() {
        return err(path, "expected a tree object or \"identity\"");
    }
    let depth = match v.get("depth") {
        Some(d) => d
            .as_u64()
            .and_then(|d| u32::try_from(d).ok())
            .ok_or(())
            .or_else(|_| err(&format!("{path}.depth"), "expected a small nonnegative integer"))?,
        None => match default_depth {
            Some(d) => d,
            None => return err(path, "missing field \"depth\""),
        },
    };
    let leaf = match v.get("leaf") {
        Some(l) => leaf_from_json(space, l, &format!("{path}.leaf"))?,
        None => Leaf::Identity,
    };
    let mut tree = IsometryTree::from_leaf(depth, leaf);
    let spheres = match v.get("spheres") {
        Some(Value::Array(a)) => a.as_slice(),
        Some(_) => return err(&format!("{path}.spheres"), "expected an array"),
        None => &[],
    };
    for (k, s) in spheres.iter().enumerate() {
        let sp = format!("{path}.spheres[{k}]");
        let r = value_from_json(field_of(s, "radius", &sp)?, &format!("{sp}.radius"))?;
        let Some(sigma) = field_of(s, "sigma", &sp)?.as_array() else {
            return err(&format!("{sp}.sigma"), "expected an array");
        };
        let sigma = sigma
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_u64()
                    .map(|x| x as usize)
                    .ok_or(())
                    .or_else(|_| err(&format!("{sp}.sigma[{i}]"), "expected an index"))
            })
            .collect::<JResult<Vec<_>>>()?;
        let n = sigma.len();
        let children = match s.get("children") {
            Some(Value::Array(c)) => c
                .iter()
                .enumerate()
                .map(|(i, c)| tree_at(space, c, &format!("{sp}.children[{i}]"), Some(depth.saturating_sub(1))))
                .collect::<JResult<Vec<_>>>()?,
            Some(_) => return err(&format!("{sp}.children"), "expected an array"),
            None => vec![IsometryTree::identity(depth.saturating_sub(1)); n],
        };
        let offsets = |key: &str| -> JResult<Vec<Point>> {
            match s.get(key) {
                None => Ok(vec![space.zero(); n]),
                Some(Value::Array(a)) => {
                    a.iter().enumerate().map(|(i, p)| point_from_json(space, p, &format!("{sp}.{key}[{i}]"))).collect()
                }
                Some(_) => err(&format!("{sp}.{key}"), "expected an array of points"),
            }
        };
        let (pre, post) = (offsets("pre")?, offsets("post")?);
        if children.len() != n || pre.len() != n || post.len() != n {
            return err(&sp, format!("sigma has {n} entries but children/pre/post lengths differ"));
        }
        let maps = children
            .into_iter()
            .zip(pre.into_iter().zip(post))
            .map(|(child, (pre, post))| BallMap { pre, post, child })
            .collect();
        let action = SphereAction::new(space, r, sigma, maps).or_else(|e| err(&sp, e.to_string()))?;
        tree.insert(action).or_else(|e| err(&sp, e.to_string()))?;
    }
    Ok(tree)
}

pub fn witness_to_json(space: &Space, w: &Witness) -> Value {
    let p = |x: &Point| point_to_json(space, x);
    match w {
        Witness::Distance { x, y, before, after } => {
            json!({ "kind": "distance", "x": p(x), "y": p(y), "before": value_to_json(before), "after": value_to_json(after) })
        }
        Witness::Escapes { x, image } => json!({ "kind": "escapes", "x": p(x), "image": p(image) }),
        Witness::Evaluation { x, error } => json!({ "kind": "evaluation", "x": p(x), "error": error }),
        Witness::NotOnto { missing } => json!({ "kind": "not_onto", "missing": p(missing) }),
    }
}

pub fn certificate_to_json(space: &Space, c: &NonlinearityCertificate) -> Value {
    let p = |x: &Point| point_to_json(space, x);
    match c {
        NonlinearityCertificate::Additive { x, y, fx, fy, fxy } => {
            json!({ "kind": "additive", "x": p(x), "y": p(y), "fx": p(fx), "fy": p(fy), "fxy": p(fxy) })
        }
        NonlinearityCertificate::Scalar { lambda, x, fx, flx } => json!({
            "kind": "scalar",
            "lambda": element_to_json(space.field(), lambda),
            "x": p(x),
            "fx": p(fx),
            "flx": p(flx),
        }),
    }
}

pub fn classification_to_json(space: Option<&Space>, r: &ClassificationResult) -> Value {
    let case = format!("{:?}", r.case);
    let body = match (&r.verdict, space) {
        (Verdict::ZeroSpace, _) => json!({ "verdict": "ZeroSpace", "case": case }),
        (Verdict::AllCentredIsometriesLinear, _) => json!({ "verdict": "AllCentredIsometriesLinear", "case": case }),
        (Verdict::NonlinearWitness { tree, certificate }, Some(s)) => json!({
            "verdict": "NonlinearWitness",
            "case": case,
            "tree": tree_body(s, tree),
            "certificate": certificate_to_json(s, certificate),
        }),
        (Verdict::NonlinearWitness { .. }, None) => json!({ "verdict": "NonlinearWitness", "case": case }),
    };
    with_schema(body)
}

pub fn pairs_to_json(space: &Space, pairs: &[(Point, Point)]) -> Value {
    Value::Array(pairs.iter().map(|(a, b)| json!([point_to_json(space, a), point_to_json(space, b)])).collect())
}

pub fn pairs_from_json(space: &Space, v: &Value, path: &str) -> JResult<Vec<(Point, Point)>> {
    let Some(items) = v.as_array() else { return err(path, "expected an array of [x, f(x)] pairs") };
    items
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let pp = format!("{path}[{i}]");
            match pair.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => Ok((
                    point_from_json(space, a, &format!("{pp}[0]"))?,
                    point_from_json(space, b, &format!("{pp}[1]"))?,
                )),
                _ => err(&pp, "expected a pair [x, f(x)]"),
            }
        })
        .collect()
}

pub fn census_to_json(space: &Space, c: &IsometryCensus) -> Value {
    with_schema(json!({
        "space": serde_json::to_value(&c.space).expect("descriptor serialises"),
        "total": c.total.to_string(),
        "linear": c.linear.to_string(),
        "affine": c.affine.to_string(),
        "all_linear": c.total == c.linear,
        "sampled": c.sampled,
        "representative": c.representative.as_ref().map(|r| pairs_to_json(space, r)),
    }))
}

pub fn isosceles_to_json(space: &Space, r: &IsoscelesReport) -> Value {
    with_schema(json!({
        "passed": r.passed(),
        "triples": r.triples,
        "violation": r.violation.as_ref().map(|(x, y, z)| json!([point_to_json(space, x), point_to_json(space, y), point_to_json(space, z)])),
    }))
}

pub fn sphere_to_json(space: &Space, s: &Sphere) -> Value {
    match s {
        Sphere::Empty(r) => with_schema(json!({ "radius": value_to_json(r), "empty": true, "classes": [] })),
        Sphere::Decomposed(d) => {
            let classes: Vec<Value> = d
                .classes
                .iter()
                .map(|c| json!({ "index": c.index, "representative": point_to_json(space, &c.representative) }))
                .collect();
            with_schema(
                json!({ "radius": value_to_json(&d.radius), "depth": d.depth, "empty": false, "classes": classes }),
            )
        }
    }
}

pub fn obstruction_to_json(o: &Obstruction) -> Value {
    let vs = |v: &[NormValue]| Value::Array(v.iter().map(value_to_json).collect());
    match o {
        Obstruction::TrivialValuationSingleton => json!({ "reason": "TrivialValuationSingleton" }),
        Obstruction::RadiusMismatch { r, r2, spheres_isometric } => json!({
            "reason": "RadiusMismatch",
            "r": value_to_json(r),
            "r2": value_to_json(r2),
            "spheres_isometric": spheres_isometric,
        }),
        Obstruction::ValueSetMismatch { x, y } => json!({ "reason": "ValueSetMismatch", "x": vs(x), "y": vs(y) }),
    }
}

/// A sphere isometry with the optional extension parameters.
#[derive(Debug, Clone)]
pub struct ExtensionInput {
    pub spec: SphereIsometrySpec,
    pub x0: Option<Point>,
    pub alpha: Option<FieldElement>,
}

/// `{"x": space, "y": space, "r", "r2", "tau": {"pairs": [[x, τ(x)], …],
/// "resolution": n} | {"tree": tree}, "x0"?, "alpha"?}`.
pub fn extension_input_from_json(v: &Value) -> JResult<ExtensionInput> {
    check_schema(v, "$")?;
    let x = space_from_json(field_of(v, "x", "$")?, "$.x")?;
    let y = space_from_json(field_of(v, "y", "$")?, "$.y")?;
    let r = value_from_json(field_of(v, "r", "$")?, "$.r")?;
    let r2 = match v.get("r2") {
        Some(r2) => value_from_json(r2, "$.r2")?,
        None => r,
    };
    let t = field_of(v, "tau", "$")?;
    let tau = if let Some(tree) = t.get("tree") {
        SphereMap::Tree(tree_at(&x, tree, "$.tau.tree", None)?)
    } else if let Some(pairs) = t.get("pairs") {
        let pairs = pairs_from_json(&x, pairs, "$.tau.pairs")?;
        let resolution = match t.get("resolution") {
            Some(n) => n
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or(())
                .or_else(|_| err("$.tau.resolution", "expected an integer"))?,
            None => 0,
        };
        SphereMap::Table { pairs: TableMap::new(pairs), resolution }
    } else {
        return err("$.tau", "expected {\"pairs\": …} or {\"tree\": …}");
    };
    let x0 = v.get("x0").map(|p| point_from_json(&x, p, "$.x0")).transpose()?;
    let alpha = v.get("alpha").map(|a| element_from_json(x.field(), a, "$.alpha")).transpose()?;
    Ok(ExtensionInput { spec: SphereIsometrySpec { x, y, r, r2, tau }, x0, alpha })
}

pub fn extension_input_to_json(input: &ExtensionInput) -> Value {
    let s = &input.spec;
    let tau = match &s.tau {
        SphereMap::Tree(t) => json!({ "tree": tree_body(&s.x, t) }),
        SphereMap::Table { pairs, resolution } => {
            json!({ "pairs": pairs_to_json(&s.x, &pairs.pairs()), "resolution": resolution })
        }
    };
    let mut v = json!({
        "x": space_to_json(&s.x),
        "y": space_to_json(&s.y),
        "r": value_to_json(&s.r),
        "r2": value_to_json(&s.r2),
        "tau": tau,
    });
    if let Some(x0) = &input.x0 {
        v["x0"] = point_to_json(&s.x, x0);
    }
    if let Some(a) = &input.alpha {
        v["alpha"] = element_to_json(s.x.field(), a);
    }
    with_schema(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isotree::random_tree;
    use crate::scalars::FieldDescriptor;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q3sq() -> Space {
        Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::padic(3, 8, -16, 16), &[1, 1])).unwrap()
    }

    #[test]
    fn elements() {
        let q = q3sq();
        let f = q.field();
        let third = f.from_rational(1, 3).unwrap();
        let j = element_to_json(f, &third);
        assert_eq!(j, json!({ "v": -1, "digits": [1] }));
        assert_eq!(element_from_json(f, &j, "$").unwrap(), third);
        assert_eq!(element_from_json(f, &json!("1/3"), "$").unwrap(), third);
        assert_eq!(element_from_json(f, &json!({ "v": -2, "digits": [0, 1] }), "$").unwrap(), third);
        assert_eq!(element_to_json(f, &f.zero()), json!(0));

        let f4 = Field::new(FieldDescriptor::finite(4)).unwrap();
        assert_eq!(element_from_json(&f4, &json!("x^2"), "$").unwrap(), FieldElement::Residue(3));
        assert_eq!(element_from_json(&f4, &json!(2), "$").unwrap(), FieldElement::Residue(2));
        assert!(element_from_json(&f4, &json!(7), "$").is_err());
    }

    #[test]
    fn errors_carry_paths() {
        let q = q3sq();
        let bad = json!({ "depth": 2, "spheres": [{ "radius": "1", "sigma": [0, 1, 2, 3, 4, 5, 6, 7], "children": ["identity", "identity", 3] }] });
        let e = tree_from_json(&q, &bad).unwrap_err();
        assert_eq!(e.path, "$.spheres[0].children[2]");
        let bad = json!({ "depth": 2, "spheres": [{ "radius": "1", "sigma": [0, 0, 2, 3, 4, 5, 6, 7] }] });
        assert_eq!(tree_from_json(&q, &bad).unwrap_err().path, "$.spheres[0]");
        let bad = json!({ "schema": "2", "depth": 1 });
        assert_eq!(tree_from_json(&q, &bad).unwrap_err().path, "$.schema");
    }

    #[test]
    fn leaves_round_trip() {
        let f3 = Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(3), &[1, 1])).unwrap();
        let v = json!({ "depth": 0, "leaf": { "matrix": [[1, 1], [0, 1]] }, "spheres": [] });
        let t = tree_from_json(&f3, &v).unwrap();
        assert_eq!(tree_to_json(&f3, &t), with_schema(v));
        let v = json!({ "depth": 0, "leaf": { "matrix": [[1, 1], [1, 1]] } });
        assert!(tree_from_json(&f3, &v).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn trees_round_trip(seed in any::<u64>()) {
            let q = q3sq();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let radii = [NormValue::new(1, 9), NormValue::new(1, 3), NormValue::ONE];
            let t = random_tree(&q, &radii, 3, &mut rng).unwrap();
            let j = tree_to_json(&q, &t);
            let text = serde_json::to_string(&j).unwrap();
            let back = tree_from_json(&q, &serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back, t);
        }

        #[test]
        fn padic_elements_round_trip(val in -10i32..10, unit in 1u64..6561) {
            let q = q3sq();
            prop_assume!(unit % 3 != 0);
            let x = FieldElement::Padic { val, unit };
            prop_assert_eq!(element_from_json(q.field(), &element_to_json(q.field(), &x), "$").unwrap(), x);
        }
    }
}
