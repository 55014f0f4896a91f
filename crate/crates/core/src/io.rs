//! JSON and CSV formats for complexes, rings, tables and reports.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::dga::{ClassVector, Cochain, Complex, Dga, MultiDegree};
use crate::error::{Error, Result};
use crate::face::SimplicialComplex;
use crate::lie::{form, GradedLie};
use crate::linalg::{Field, Scalar};
use crate::massey::{MasseyOutcome, MasseyStatus};
use crate::ring::{BettiTable, MonomialQuotient};

/// Version tag carried by every report.
pub const SCHEMA: u32 = 1;

pub(crate) fn bigints_as_strings<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    m: usize,
    #[serde(default)]
    minimal_nonfaces: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    facets: Option<Vec<Vec<usize>>>,
}

fn bad(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(e.to_string())
}

/// Parses `{"m": .., "minimal_nonfaces": [..]}` or `{"m": .., "facets": [..]}`.
pub fn complex_from_json(text: &str) -> Result<SimplicialComplex> {
    let c: ComplexJson = serde_json::from_str(text).map_err(bad)?;
    match (c.minimal_nonfaces, c.facets) {
        (Some(nf), None) => SimplicialComplex::from_minimal_nonfaces(c.m, &nf),
        (None, Some(f)) => SimplicialComplex::from_facets(c.m, &f),
        _ => Err(Error::InvalidInput("give exactly one of minimal_nonfaces and facets".into())),
    }
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    json!({"m": k.m(), "minimal_nonfaces": k.minimal_nonfaces()})
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingJson {
    n: usize,
    gens: Vec<Vec<u32>>,
}

/// Parses `{"n": .., "gens": [[exponents..], ..]}`.
pub fn ring_from_json(text: &str, field: Field) -> Result<MonomialQuotient> {
    let r: RingJson = serde_json::from_str(text).map_err(bad)?;
    MonomialQuotient::new(r.n, r.gens, field)
}

pub fn ring_to_json(a: &MonomialQuotient) -> Value {
    json!({"n": a.n_vars, "gens": a.generators})
}

#[derive(Debug, Deserialize)]
struct GeneratorJson {
    i: usize,
    w: i32,
}

#[derive(Debug, Deserialize)]
struct TermJson {
    k: usize,
    c: String,
}

#[derive(Debug, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    terms: Vec<TermJson>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LieJson {
    Named {
        #[serde(default)]
        name: Option<String>,
        #[serde(rename = "W")]
        w: usize,
    },
    Custom {
        generators: Vec<GeneratorJson>,
        brackets: Vec<BracketJson>,
    },
}

/// Parses `{"name": "m0" | "witt_plus", "W": ..}` or an explicit presentation.
pub fn lie_from_json(text: &str, field: Field) -> Result<GradedLie> {
    match serde_json::from_str::<LieJson>(text).map_err(bad)? {
        LieJson::Named { name, w } => named_lie(name.as_deref().unwrap_or("m0"), w, field),
        LieJson::Custom { generators, brackets } => {
            let gens: Vec<(usize, i32)> = generators.iter().map(|g| (g.i, g.w)).collect();
            let mut br = Vec::new();
            for b in brackets {
                let mut terms = Vec::new();
                for t in b.terms {
                    terms.push((t.k, field.parse_scalar(&t.c)?));
                }
                br.push(((b.i, b.j), terms));
            }
            GradedLie::custom(field, &gens, br)
        }
    }
}

pub fn named_lie(name: &str, w: usize, field: Field) -> Result<GradedLie> {
    match name {
        "m0" => GradedLie::m0(w, field),
        "witt_plus" | "w+" => GradedLie::witt_plus(w, field),
        other => Err(Error::InvalidInput(format!("unknown Lie algebra {other:?}"))),
    }
}

/// Parses a form such as `e2^e5 - 3*e3^e4`, `-e1` or `1/2*e2`.
pub fn parse_form(text: &str, field: Field) -> Result<Cochain<u64>> {
    let mut out = Cochain::zero();
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::InvalidInput("empty form".into()));
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('*') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (coef, mono) = match body.find('e') {
            Some(0) => (field.one(), body),
            Some(p) => (field.parse_scalar(body[..p].trim_end_matches('*'))?, &body[p..]),
            None => return Err(Error::InvalidInput(format!("term {t:?} has no generator"))),
        };
        let mut idx = Vec::new();
        for f in mono.split('^') {
            let i: usize = f
                .strip_prefix('e')
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad factor {f:?}")))?;
            if i == 0 || i > 63 {
                return Err(Error::InvalidInput(format!("generator index {i} out of range")));
            }
            idx.push(i);
        }
        let coef = if sign < 0 { coef.neg() } else { coef };
        out = out.add(&form(&idx, coef));
    }
    Ok(out)
}

fn degree_json(d: &MultiDegree) -> Value {
    json!({"coh": d.coh, "aux": d.aux})
}

/// Class coordinates per multidegree, with a representative cocycle.
pub fn class_json<A: Dga>(cx: &Complex<A>, c: &ClassVector) -> Result<Value> {
    let coords: Vec<Value> = c
        .coords
        .iter()
        .map(|(d, v)| json!({"degree": degree_json(d), "coords": v.iter().map(scalar_json).collect::<Vec<_>>()}))
        .collect();
    Ok(json!({"zero": c.is_zero(), "representative": cx.format(&cx.class_rep(c)?), "coords": coords}))
}

/// Report of a Massey product outcome.
pub fn outcome_json<A: Dga>(cx: &Complex<A>, o: &MasseyOutcome<A::Mono>) -> Result<Value> {
    let mut v = json!({
        "status": o.status.label(),
        "triviality": o.triviality.label(),
        "scope": format!("{:?}", o.scope).to_lowercase(),
        "params": o.params,
        "complete": o.complete,
    });
    let extra = match &o.status {
        MasseyStatus::Undefined { proven } => json!({"proven": proven}),
        MasseyStatus::DefinedStrict(c) => json!({"value": class_json(cx, c)?}),
        MasseyStatus::DefinedAffine {
            representative,
            indeterminacy,
        } => json!({
            "value": class_json(cx, representative)?,
            "indeterminacy": indeterminacy.iter().map(|c| class_json(cx, c)).collect::<Result<Vec<_>>>()?,
        }),
        MasseyStatus::DefinedSampled { samples, family, complete } => json!({
            "samples": samples.iter().map(|c| class_json(cx, c)).collect::<Result<Vec<_>>>()?,
            "family": match family {
                Some(f) => json!({
                    "base": class_json(cx, &f.base)?,
                    "directions": f.directions.iter().map(|c| class_json(cx, c)).collect::<Result<Vec<_>>>()?,
                }),
                None => Value::Null,
            },
            "family_complete": complete,
        }),
    };
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        dst.extend(src);
    }
    if let Some(w) = &o.witness {
        let entries: Vec<Value> = (0..=w.order())
            .flat_map(|i| (i + 1..=w.order()).map(move |j| (i, j)))
            .filter(|(i, j)| !w.get(*i, *j).is_zero())
            .map(|(i, j)| json!({"i": i, "j": j, "entry": cx.format(w.get(i, j))}))
            .collect();
        v["witness"] = Value::Array(entries);
    }
    Ok(v)
}

/// Exact scalar as `"p/q"` (or `"p"`).
pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

fn support_list(a: &[u32]) -> Option<Vec<usize>> {
    a.iter()
        .all(|e| *e <= 1)
        .then(|| a.iter().enumerate().filter(|(_, e)| **e == 1).map(|(i, _)| i + 1).collect())
}

/// `{"field", "entries": [{"i", "I" | "multidegree", "dim"}]}`.
pub fn betti_to_json(t: &BettiTable) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .map(|((i, a), d)| match support_list(a) {
            Some(set) => json!({"i": i, "I": set, "dim": d}),
            None => json!({"i": i, "multidegree": a, "dim": d}),
        })
        .collect();
    json!({"field": t.field, "entries": entries})
}

/// CSV with columns `i,I,dim`; `I` is space separated (or the exponent vector).
pub fn betti_to_csv(t: &BettiTable) -> String {
    let mut out = String::from("i,I,dim\n");
    for ((i, a), d) in &t.entries {
        let key = match support_list(a) {
            Some(set) => set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
            None => a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(":"),
        };
        out.push_str(&format!("{i},{key},{d}\n"));
    }
    out
}

/// Wraps a payload with the schema version and command name.
pub fn report(command: &str, payload: Value) -> Value {
    let mut v = json!({"schema": SCHEMA, "command": command});
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, payload) {
        dst.extend(src);
    }
    v
}

#[derive(Serialize)]
struct Row<'a> {
    key: &'a str,
    value: String,
}

/// Flat `key,value` CSV for simple reports.
pub fn pairs_to_csv(rows: &[(String, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let r = Row { key: k, value: v.clone() };
        out.push_str(&format!("{},{}\n", r.key, r.value));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_parse() {
        let f = Field::Rational;
        let x = parse_form("e2^e5 - 3*e3^e4", f).unwrap();
        assert_eq!(x, form(&[2, 5], f.one()).add(&form(&[3, 4], f.from_i64(-3))));
        assert_eq!(parse_form("-1/2*e1", f).unwrap(), form(&[1], f.parse_scalar("-1/2").unwrap()));
        assert!(parse_form("3", f).is_err());
    }

    #[test]
    fn lie_presentations() {
        let f = Field::Rational;
        assert_eq!(lie_from_json(r#"{"name": "witt_plus", "W": 6}"#, f).unwrap().dim(), 6);
        let h = lie_from_json(
            r#"{"generators": [{"i":1,"w":1},{"i":2,"w":1},{"i":3,"w":2}],
                "brackets": [{"i":1,"j":2,"terms":[{"k":3,"c":"1"}]}]}"#,
            f,
        )
        .unwrap();
        assert_eq!(h.bracket(2, 1), vec![(3, f.from_i64(-1))]);
    }

    #[test]
    fn complex_roundtrip() {
        let k = complex_from_json(r#"{"m": 4, "facets": [[1,2],[2,3],[3,4],[4,1]]}"#).unwrap();
        assert_eq!(k.minimal_nonfaces(), vec![vec![1, 3], vec![2, 4]]);
        let back = complex_from_json(&complex_to_json(&k).to_string()).unwrap();
        assert_eq!(back, k);
        assert!(complex_from_json(r#"{"m": 2}"#).is_err());
    }
}
