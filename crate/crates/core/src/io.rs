//! JSON schemas for every input and output type.
//!
//! Readers walk a [`serde_json::Value`] and report schema violations as
//! [`Error::Schema`] with a JSON-pointer location. Unknown object keys are
//! rejected. Writers emit objects with sorted keys and floats with 17
//! significant digits, so identical data always serializes to identical
//! bytes.
//!
//! Scalars are integers, `"p/q"` strings, decimal numbers or `{"re", "im"}`
//! objects of those. Exact mode rejects exponent notation.

use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use crate::betti::{FpGroup, Letter, Representation, Word};
use crate::cech::{Additive, Cochain, CoefficientSystem, CoverNerve, Multiplicative};
use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianSystem, HypergeometricParams};
use crate::lattice::{LatticeConnection, TriangulatedSurface};
use crate::localsys::GCocycle;
use crate::numkit::{format_rational, gaussian, parse_rational, rat_to_f64, Field, GaussianRational, Matrix, Rational, C64};

fn schema(loc: &str, msg: impl std::fmt::Display) -> Error {
    let loc = if loc.is_empty() { "/" } else { loc };
    Error::Schema(format!("at {loc}: {msg}"))
}

fn child(loc: &str, key: impl std::fmt::Display) -> String {
    format!("{loc}/{key}")
}

/// Parses a JSON document, reporting syntax errors with line and column.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Schema(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Serializes a value with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

/// An object restricted to the given keys, with the `required` ones present.
fn object<'a>(v: &'a Value, loc: &str, required: &[&str], optional: &[&str]) -> Result<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| schema(loc, "expected an object"))?;
    if let Some(k) = map.keys().find(|k| !required.contains(&k.as_str()) && !optional.contains(&k.as_str())) {
        return Err(schema(loc, format!("unknown field \"{k}\"")));
    }
    if let Some(k) = required.iter().find(|k| !map.contains_key(**k)) {
        return Err(schema(loc, format!("missing field \"{k}\"")));
    }
    Ok(map)
}

fn array<'a>(v: &'a Value, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(loc, "expected an array"))
}

fn uint(v: &Value, loc: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(loc, "expected a non-negative integer"))
}

fn uints(v: &Value, loc: &str) -> Result<Vec<usize>> {
    array(v, loc)?.iter().enumerate().map(|(i, x)| uint(x, &child(loc, i))).collect()
}

/// Float with 17 significant digits; non-finite values become strings.
pub fn float_json(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    Value::Number(format!("{x:.16e}").parse::<Number>().expect("formatted float is a JSON number"))
}

fn rational_part(v: &Value, loc: &str) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(loc, "expected a number or a \"p/q\" string")),
    };
    parse_rational(&text).ok_or_else(|| schema(loc, format!("\"{text}\" is not an exact rational")))
}

fn float_part(v: &Value, loc: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| schema(loc, "number out of range")),
        Value::String(s) => parse_rational(s).map(|q| rat_to_f64(&q)).ok_or_else(|| schema(loc, format!("\"{s}\" is not a number"))),
        _ => Err(schema(loc, "expected a number or a \"p/q\" string")),
    }
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Field {
    fn from_json(v: &Value, loc: &str) -> Result<Self>;
    fn to_json(&self) -> Value;
}

fn complex_parts<R>(v: &Value, loc: &str, part: impl Fn(&Value, &str) -> Result<R>) -> Result<(R, Option<R>)> {
    if v.is_object() {
        let m = object(v, loc, &["re", "im"], &[])?;
        Ok((part(&m["re"], &child(loc, "re"))?, Some(part(&m["im"], &child(loc, "im"))?)))
    } else {
        Ok((part(v, loc)?, None))
    }
}

impl JsonScalar for GaussianRational {
    fn from_json(v: &Value, loc: &str) -> Result<Self> {
        let (re, im) = complex_parts(v, loc, rational_part)?;
        Ok(gaussian(re, im.unwrap_or_default()))
    }

    fn to_json(&self) -> Value {
        if self.im == Rational::default() {
            Value::String(format_rational(&self.re))
        } else {
            let mut m = Map::new();
            m.insert("re".into(), Value::String(format_rational(&self.re)));
            m.insert("im".into(), Value::String(format_rational(&self.im)));
            Value::Object(m)
        }
    }
}

impl JsonScalar for C64 {
    fn from_json(v: &Value, loc: &str) -> Result<Self> {
        let (re, im) = complex_parts(v, loc, float_part)?;
        Ok(C64::new(re, im.unwrap_or(0.0)))
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("re".into(), float_json(self.re));
        m.insert("im".into(), float_json(self.im));
        Value::Object(m)
    }
}

pub fn matrix_from_json<T: JsonScalar>(v: &Value, loc: &str) -> Result<Matrix<T>> {
    let rows = array(v, loc)?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let l = child(loc, i);
            array(r, &l)?.iter().enumerate().map(|(j, x)| T::from_json(x, &child(&l, j))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len() || r.is_empty()) {
        return Err(schema(loc, "expected a non-empty rectangular grid"));
    }
    Matrix::from_rows(rows).map_err(|e| schema(loc, e))
}

pub fn matrix_to_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| Value::Array(r.iter().map(T::to_json).collect())).collect())
}

fn square<T: JsonScalar>(v: &Value, loc: &str, rank: usize) -> Result<Matrix<T>> {
    let m = matrix_from_json(v, loc)?;
    if m.rows() != rank || m.cols() != rank {
        return Err(schema(loc, format!("expected a {rank}×{rank} matrix")));
    }
    Ok(m)
}

/// Words are lists of `[generator, ±1]` pairs with generators numbered from 1.
pub fn word_from_json(v: &Value, loc: &str) -> Result<Word> {
    array(v, loc)?
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let l_loc = child(loc, i);
            let pair = array(l, &l_loc)?;
            let (Some(g), Some(e), 2) = (pair.first().and_then(Value::as_u64), pair.get(1).and_then(Value::as_i64), pair.len()) else {
                return Err(schema(&l_loc, "expected [generator, ±1]"));
            };
            match (g, e) {
                (0, _) => Err(schema(&l_loc, "generators are numbered from 1")),
                (g, 1) => Ok(Letter::gen(g as usize - 1)),
                (g, -1) => Ok(Letter::inv(g as usize - 1)),
                _ => Err(schema(&l_loc, "exponent must be +1 or -1")),
            }
        })
        .collect()
}

pub fn word_to_json(w: &Word) -> Value {
    Value::Array(w.letters().iter().map(|l| serde_json::json!([l.generator + 1, l.exponent()])).collect())
}

pub fn words_from_json(v: &Value, loc: &str) -> Result<Vec<Word>> {
    array(v, loc)?.iter().enumerate().map(|(i, w)| word_from_json(w, &child(loc, i))).collect()
}

pub fn group_from_json(v: &Value, loc: &str) -> Result<FpGroup> {
    let m = object(v, loc, &["generators", "relators"], &[])?;
    let n = uint(&m["generators"], &child(loc, "generators"))?;
    let relators = words_from_json(&m["relators"], &child(loc, "relators"))?;
    FpGroup::new(n, relators).map_err(|e| schema(loc, e))
}

pub fn group_to_json(g: &FpGroup) -> Value {
    serde_json::json!({
        "generators": g.generators(),
        "relators": g.relators().iter().map(word_to_json).collect::<Vec<_>>(),
    })
}

/// `{"rank", "images", "group"?}`; without a group, the surface group of
/// genus `images/2` is assumed.
pub fn representation_from_json<T: JsonScalar>(v: &Value) -> Result<Representation<T>> {
    let m = object(v, "", &["rank", "images"], &["group"])?;
    let rank = uint(&m["rank"], "/rank")?;
    let images = array(&m["images"], "/images")?
        .iter()
        .enumerate()
        .map(|(i, x)| square(x, &child("/images", i), rank))
        .collect::<Result<Vec<Matrix<T>>>>()?;
    let group = match m.get("group") {
        Some(g) => group_from_json(g, "/group")?,
        None if images.len() % 2 == 0 && !images.is_empty() => crate::betti::surface_group((images.len() / 2) as u32)?,
        None => return Err(schema("/images", "without \"group\", an even positive number of images is expected")),
    };
    if group.generators() != images.len() {
        return Err(schema("/images", format!("{} images for {} generators", images.len(), group.generators())));
    }
    Representation::new(group, images)
}

pub fn representation_to_json<T: JsonScalar>(r: &Representation<T>) -> Value {
    serde_json::json!({
        "rank": r.rank(),
        "images": r.images().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "group": group_to_json(r.group()),
    })
}

pub fn nerve_from_json(v: &Value) -> Result<CoverNerve> {
    let m = object(v, "", &["n", "maximalSimplices"], &[])?;
    let n = uint(&m["n"], "/n")?;
    let simplices = array(&m["maximalSimplices"], "/maximalSimplices")?
        .iter()
        .enumerate()
        .map(|(i, s)| uints(s, &child("/maximalSimplices", i)))
        .collect::<Result<Vec<_>>>()?;
    CoverNerve::from_maximal(n, &simplices).map_err(|e| schema("/maximalSimplices", e))
}

pub fn nerve_to_json(n: &CoverNerve) -> Value {
    serde_json::json!({ "n": n.vertex_count(), "maximalSimplices": n.maximal_simplices() })
}

fn parse_key(key: &str, sep: char, loc: &str) -> Result<Vec<usize>> {
    key.split(sep)
        .map(|p| p.trim().parse::<usize>().map_err(|_| schema(loc, format!("malformed key \"{key}\""))))
        .collect()
}

fn simplex_key(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// A cochain file before its values are interpreted in a coefficient group.
#[derive(Debug, Clone)]
pub struct CochainFile {
    pub degree: usize,
    pub coefficients: CoefficientSystem,
    values: BTreeMap<Vec<usize>, (String, Value)>,
}

pub fn cochain_file_from_json(v: &Value) -> Result<CochainFile> {
    let m = object(v, "", &["degree", "coefficients", "values"], &[])?;
    let degree = uint(&m["degree"], "/degree")?;
    let coefficients = match m["coefficients"].as_str() {
        Some("Z") => CoefficientSystem::Z,
        Some("C") => CoefficientSystem::C,
        Some("Cx") => CoefficientSystem::Cx,
        _ => return Err(schema("/coefficients", "expected \"Z\", \"C\" or \"Cx\"")),
    };
    let raw = m["values"].as_object().ok_or_else(|| schema("/values", "expected an object keyed by simplices"))?;
    let mut values = BTreeMap::new();
    for (k, x) in raw {
        let loc = child("/values", k);
        let mut s = parse_key(k, ',', &loc)?;
        if s.len() != degree + 1 {
            return Err(schema(&loc, format!("expected a {degree}-simplex")));
        }
        s.sort_unstable();
        values.insert(s, (loc, x.clone()));
    }
    Ok(CochainFile { degree, coefficients, values })
}

impl CochainFile {
    /// Values on every simplex of `nerve`; absent simplices get `identity`.
    fn resolve<A>(&self, nerve: &CoverNerve, identity: A, parse: impl Fn(&Value, &str) -> Result<A>) -> Result<Vec<A>>
    where
        A: Clone,
    {
        if let Some((s, (loc, _))) = self.values.iter().find(|(s, _)| nerve.index_of(s).is_none()) {
            return Err(schema(loc, format!("{s:?} is not a simplex of the nerve")));
        }
        nerve
            .simplices(self.degree)
            .iter()
            .map(|s| self.values.get(s).map_or(Ok(identity.clone()), |(loc, x)| parse(x, loc)))
            .collect()
    }

    fn expect(&self, c: CoefficientSystem) -> Result<()> {
        if self.coefficients != c {
            return Err(schema("/coefficients", format!("expected {c:?} coefficients, found {:?}", self.coefficients)));
        }
        Ok(())
    }

    pub fn integral(&self, nerve: &CoverNerve) -> Result<Cochain<i64>> {
        self.expect(CoefficientSystem::Z)?;
        let values = self.resolve(nerve, 0, |x, loc| x.as_i64().ok_or_else(|| schema(loc, "expected an integer")))?;
        Cochain::new(nerve, self.degree, values)
    }

    pub fn additive<T: JsonScalar>(&self, nerve: &CoverNerve) -> Result<Cochain<Additive<T>>> {
        self.expect(CoefficientSystem::C)?;
        let values = self.resolve(nerve, Additive(T::zero()), |x, loc| T::from_json(x, loc).map(Additive))?;
        Cochain::new(nerve, self.degree, values)
    }

    pub fn multiplicative(&self, nerve: &CoverNerve) -> Result<Cochain<Multiplicative<C64>>> {
        self.expect(CoefficientSystem::Cx)?;
        let values = self.resolve(nerve, Multiplicative(C64::new(1.0, 0.0)), |x, loc| {
            let z = C64::from_json(x, loc)?;
            if z.norm() == 0.0 {
                return Err(schema(loc, "Cx values must be nonzero"));
            }
            Ok(Multiplicative(z))
        })?;
        Cochain::new(nerve, self.degree, values)
    }
}

fn cochain_json<A>(nerve: &CoverNerve, degree: usize, coefficients: &str, values: &[A], enc: impl Fn(&A) -> Value) -> Value {
    let values: Map<String, Value> = nerve.simplices(degree).iter().zip(values).map(|(s, x)| (simplex_key(s), enc(x))).collect();
    serde_json::json!({ "degree": degree, "coefficients": coefficients, "values": values })
}

pub fn integral_cochain_to_json(nerve: &CoverNerve, c: &Cochain<i64>) -> Value {
    cochain_json(nerve, c.degree(), "Z", c.values(), |x| Value::from(*x))
}

pub fn additive_cochain_to_json<T: JsonScalar>(nerve: &CoverNerve, c: &Cochain<Additive<T>>) -> Value {
    cochain_json(nerve, c.degree(), "C", c.values(), |x| x.0.to_json())
}

pub fn multiplicative_cochain_to_json(nerve: &CoverNerve, c: &Cochain<Multiplicative<C64>>) -> Value {
    cochain_json(nerve, c.degree(), "Cx", c.values(), |x| x.0.to_json())
}

fn oriented_matrices<T: JsonScalar>(v: &Value, loc: &str, sep: char, rank: usize) -> Result<BTreeMap<(usize, usize), Matrix<T>>> {
    let raw = v.as_object().ok_or_else(|| schema(loc, "expected an object keyed by edges"))?;
    let mut out = BTreeMap::new();
    for (k, x) in raw {
        let l = child(loc, k);
        let e = parse_key(k, sep, &l)?;
        let [a, b] = e[..] else {
            return Err(schema(&l, format!("expected an edge key \"a{sep}b\"")));
        };
        if out.contains_key(&(b, a)) {
            return Err(schema(&l, "edge given in both orientations"));
        }
        out.insert((a, b), square(x, &l, rank)?);
    }
    Ok(out)
}

/// `{"rank", "transitions": {"i,j": matrix}}`; every nerve edge must be given.
pub fn gcocycle_from_json<T: JsonScalar>(v: &Value, nerve: &CoverNerve) -> Result<GCocycle<T>> {
    let m = object(v, "", &["rank", "transitions"], &[])?;
    let rank = uint(&m["rank"], "/rank")?;
    let given = oriented_matrices(&m["transitions"], "/transitions", ',', rank)?;
    if let Some((a, b)) = given.keys().find(|(a, b)| !nerve.has_edge(*a, *b)) {
        return Err(schema(&child("/transitions", format!("{a},{b}")), "not an edge of the nerve"));
    }
    if let Some(e) = nerve.simplices(1).iter().find(|e| !given.contains_key(&(e[0], e[1])) && !given.contains_key(&(e[1], e[0]))) {
        return Err(schema("/transitions", format!("missing edge \"{},{}\"", e[0], e[1])));
    }
    GCocycle::new(rank, given)
}

pub fn gcocycle_to_json<T: JsonScalar>(c: &GCocycle<T>) -> Value {
    let transitions: Map<String, Value> =
        c.sorted_transitions().filter(|((i, j), _)| i < j).map(|((i, j), m)| (format!("{i},{j}"), matrix_to_json(m))).collect();
    serde_json::json!({ "rank": c.rank(), "transitions": transitions })
}

/// `{"rank", "values": [matrix per vertex]}`.
pub fn gauge_from_json<T: JsonScalar>(v: &Value, vertices: usize) -> Result<Vec<Matrix<T>>> {
    let m = object(v, "", &["rank", "values"], &[])?;
    let rank = uint(&m["rank"], "/rank")?;
    let values = array(&m["values"], "/values")?;
    if values.len() != vertices {
        return Err(schema("/values", format!("expected {vertices} matrices, one per vertex")));
    }
    values.iter().enumerate().map(|(i, x)| square(x, &child("/values", i), rank)).collect()
}

pub fn surface_from_json(v: &Value) -> Result<TriangulatedSurface> {
    let m = object(v, "", &["vertices", "triangles"], &[])?;
    let n = uint(&m["vertices"], "/vertices")?;
    let triangles = array(&m["triangles"], "/triangles")?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let l = child("/triangles", i);
            <[usize; 3]>::try_from(uints(t, &l)?).map_err(|_| schema(&l, "expected three vertices"))
        })
        .collect::<Result<Vec<_>>>()?;
    TriangulatedSurface::new(n, triangles)
}

pub fn surface_to_json(s: &TriangulatedSurface) -> Value {
    serde_json::json!({ "vertices": s.vertex_count(), "triangles": s.triangles() })
}

/// `{"rank", "transport": {"u>v": matrix}}`.
pub fn connection_from_json<T: JsonScalar>(v: &Value, surface: &TriangulatedSurface) -> Result<LatticeConnection<T>> {
    let m = object(v, "", &["rank", "transport"], &[])?;
    let rank = uint(&m["rank"], "/rank")?;
    let given = oriented_matrices(&m["transport"], "/transport", '>', rank)?;
    LatticeConnection::new(surface, rank, given)
}

pub fn connection_to_json<T: JsonScalar>(c: &LatticeConnection<T>) -> Value {
    let transport: Map<String, Value> =
        c.sorted_transports().filter(|((u, v), _)| u < v).map(|((u, v), m)| (format!("{u}>{v}"), matrix_to_json(m))).collect();
    serde_json::json!({ "rank": c.rank(), "transport": transport })
}

/// `{"rank", "A0", "A1"}`, always read in floating point.
pub fn system_from_json(v: &Value) -> Result<FuchsianSystem> {
    let m = object(v, "", &["rank", "A0", "A1"], &[])?;
    let rank = uint(&m["rank"], "/rank")?;
    FuchsianSystem::new(square(&m["A0"], "/A0", rank)?, square(&m["A1"], "/A1", rank)?)
}

pub fn system_to_json(s: &FuchsianSystem) -> Value {
    serde_json::json!({ "rank": s.rank(), "A0": matrix_to_json(s.a0()), "A1": matrix_to_json(s.a1()) })
}

/// `{"a", "b", "c"}`.
pub fn hypergeometric_from_json(v: &Value) -> Result<HypergeometricParams> {
    let m = object(v, "", &["a", "b", "c"], &[])?;
    Ok(HypergeometricParams { a: C64::from_json(&m["a"], "/a")?, b: C64::from_json(&m["b"], "/b")?, c: C64::from_json(&m["c"], "/c")? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes;
    use crate::numkit::{gi, gq};

    fn doc(s: &str) -> Value {
        parse_document(s).unwrap()
    }

    #[test]
    fn scalars() {
        assert_eq!(GaussianRational::from_json(&doc("\"-3/4\""), "").unwrap(), gq(-3, 4));
        assert_eq!(GaussianRational::from_json(&doc("0.25"), "").unwrap(), gq(1, 4));
        assert_eq!(GaussianRational::from_json(&doc(r#"{"re": 1, "im": "2"}"#), "").unwrap(), gi(1, 2));
        assert!(GaussianRational::from_json(&doc("1e-3"), "").is_err());
        assert_eq!(C64::from_json(&doc(r#"{"re": 0.5, "im": "-1/4"}"#), "").unwrap(), C64::new(0.5, -0.25));
        assert_eq!(gq(-3, 4).to_json(), Value::String("-3/4".into()));
        assert_eq!(serde_json::to_string(&float_json(0.1)).unwrap(), "1.0000000000000001e-1");
    }

    #[test]
    fn unknown_fields_and_positions() {
        let e = nerve_from_json(&doc(r#"{"n": 3, "maximalSimplices": [[0,1,2]], "extra": 1}"#)).unwrap_err();
        assert_eq!(e, Error::Schema("at /: unknown field \"extra\"".into()));
        let e = system_from_json(&doc(r#"{"rank": 1, "A0": [["x"]], "A1": [[0]]}"#)).unwrap_err();
        assert!(matches!(e, Error::Schema(ref m) if m.starts_with("at /A0/0/0:")), "{e}");
        let e = parse_document("{\"n\": 3,\n  ]").unwrap_err();
        assert!(matches!(e, Error::Schema(ref m) if m.starts_with("line 2, column 3")), "{e}");
    }

    #[test]
    fn nerve_and_surface_round_trip() {
        let n = CoverNerve::from_triangulation(&complexes::torus());
        assert_eq!(nerve_from_json(&nerve_to_json(&n)).unwrap(), n);
        let s = TriangulatedSurface::from_triangulation(&complexes::torus()).unwrap();
        assert_eq!(surface_from_json(&surface_to_json(&s)).unwrap().triangles(), s.triangles());
    }

    #[test]
    fn group_uses_one_based_generators() {
        let g = group_from_json(&doc(r#"{"generators": 2, "relators": [[[1,1],[2,1],[1,-1],[2,-1]]]}"#), "").unwrap();
        assert_eq!(g, crate::betti::surface_group(1).unwrap());
        assert_eq!(group_from_json(&group_to_json(&g), "").unwrap(), g);
    }

    #[test]
    fn cochains_fill_identity() {
        let n = CoverNerve::from_triangulation(&complexes::torus());
        let f = cochain_file_from_json(&doc(r#"{"degree": 1, "coefficients": "Cx", "values": {"1,0": {"re": 0, "im": 1}}}"#)).unwrap();
        let u = f.multiplicative(&n).unwrap();
        assert_eq!(u.edge_value(&n, 0, 1).unwrap().0, C64::new(0.0, 1.0));
        assert_eq!(u.values().iter().filter(|x| x.0 == C64::new(1.0, 0.0)).count(), n.count(1) - 1);
        assert!(f.integral(&n).is_err());
        let z = Cochain::from_fn(&n, 1, |s| (s[0] + 2 * s[1]) as i64);
        let back = cochain_file_from_json(&integral_cochain_to_json(&n, &z)).unwrap().integral(&n).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn gcocycle_round_trip_and_missing_edge() {
        let n = CoverNerve::from_triangulation(&complexes::torus());
        let c = GCocycle::<GaussianRational>::identity(&n, 2);
        assert_eq!(gcocycle_from_json::<GaussianRational>(&gcocycle_to_json(&c), &n).unwrap(), c);
        let e = gcocycle_from_json::<GaussianRational>(&doc(r#"{"rank": 1, "transitions": {"0,1": [[1]]}}"#), &n).unwrap_err();
        assert!(matches!(e, Error::Schema(ref m) if m.contains("missing edge")));
    }

    #[test]
    fn connection_round_trip() {
        let s = TriangulatedSurface::from_triangulation(&complexes::torus()).unwrap();
        let c = LatticeConnection::<C64>::trivial(&s, 1);
        assert_eq!(connection_from_json::<C64>(&connection_to_json(&c), &s).unwrap(), c);
    }
}
