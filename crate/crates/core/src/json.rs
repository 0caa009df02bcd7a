//! JSON documents for groups, elements, chains, combings, point maps, metric
//! spaces and reports.
//!
//! | document | shape |
//! |---|---|
//! | group | `{"family":"free","rank":2}`, `{"family":"abelian","rank":2}` (optional `"steps":[2,3]` for rank 1), `{"family":"finite","table":[[…]],"generators":[…]}`, `{"family":"cyclic","order":3}` |
//! | element | signed letter list `[1,-2]` / integer vector `[2,-3]` / table index `1` |
//! | chain | `{"degree":n,"terms":[{"tuple":[elem,…],"coeff":"p/q"},…]}` with an optional `"group"` |
//! | chain set | `{"group":G,"chains":[chain,…]}` |
//! | combing | `{"kind":"free_prefix","rank":2}`, `{"kind":"abelian_staircase","rank":n}`, `{"kind":"table","group":G,"paths":[{"point":x,"path":[…]}],"constants":{…}}` |
//! | point map | `{"kind":"identity"}`, `{"kind":"constant","point":x}`, `{"kind":"translate","by":x}`, `{"kind":"table","entries":[[x,y],…]}`, `{"kind":"stage","comb":C,"n":k}`, `{"kind":"compose","outer":M,"inner":M}` |
//! | metric space | `{"points":[…],"dist":[[…]]}` |
//!
//! Coefficients and other exact values are written as `"p/q"` strings and
//! accepted either as strings or as JSON numbers.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::chains::Chain;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};
use crate::homotopy::{
    free_group_combing, abelian_combing, CombingReport, Combing, CombingConstants, CombingRule, IdentityCheck,
    MapSpec, ProfileReport,
};
use crate::resolutions::GrowthReport;
use crate::rips::{FiniteMetricSpace, SimplicialComplex};
use crate::scalar::{self, Scalar};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{what} must be a natural number, got {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array, got {v}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(format!("{what} must be a string, got {v}")))
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn group_from_json(v: &Value) -> Result<GroupSpec> {
    match as_str(field(v, "family")?, "family")? {
        "free" => GroupSpec::free(as_usize(field(v, "rank")?, "rank")?),
        "abelian" => {
            let rank = as_usize(field(v, "rank")?, "rank")?;
            match v.get("steps") {
                None => GroupSpec::abelian(rank),
                Some(steps) if rank == 1 => {
                    let steps = as_array(steps, "steps")?
                        .iter()
                        .map(|s| s.as_i64().ok_or_else(|| parse_err("steps must be integers")))
                        .collect::<Result<Vec<_>>>()?;
                    GroupSpec::integers_with_steps(&steps)
                }
                Some(_) => Err(Error::Unsupported("custom steps are only supported for rank 1".into())),
            }
        }
        "finite" => {
            let table = as_array(field(v, "table")?, "table")?
                .iter()
                .map(|row| as_array(row, "table row")?.iter().map(|x| as_usize(x, "table entry")).collect())
                .collect::<Result<Vec<Vec<usize>>>>()?;
            let gens = as_array(field(v, "generators")?, "generators")?
                .iter()
                .map(|x| as_usize(x, "generator"))
                .collect::<Result<Vec<_>>>()?;
            GroupSpec::finite(table, &gens)
        }
        "cyclic" => GroupSpec::cyclic(as_usize(field(v, "order")?, "order")?),
        other => Err(parse_err(format!("unknown group family {other:?}"))),
    }
}

pub fn group_to_json(group: &GroupSpec) -> Value {
    match group {
        GroupSpec::Free { rank } => json!({"family": "free", "rank": rank}),
        GroupSpec::Abelian { rank, steps: None } => json!({"family": "abelian", "rank": rank}),
        GroupSpec::Abelian { rank, steps: Some(steps) } => json!({"family": "abelian", "rank": rank, "steps": steps}),
        GroupSpec::Finite(fg) => json!({"family": "finite", "table": fg.table(), "generators": fg.generators()}),
    }
}

pub fn element_from_json(group: &GroupSpec, v: &Value) -> Result<GroupElement> {
    let element = match group {
        GroupSpec::Free { .. } => {
            let letters = as_array(v, "free-group element")?
                .iter()
                .map(|l| {
                    l.as_i64()
                        .and_then(|x| i32::try_from(x).ok())
                        .ok_or_else(|| parse_err(format!("letter {l} is not an integer")))
                })
                .collect::<Result<Vec<_>>>()?;
            GroupElement::word(&letters)
        }
        GroupSpec::Abelian { .. } => {
            let coords = as_array(v, "abelian element")?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| parse_err(format!("coordinate {x} is not an integer"))))
                .collect::<Result<Vec<_>>>()?;
            GroupElement::Vector(coords)
        }
        GroupSpec::Finite(_) => GroupElement::Index(as_usize(v, "finite-group element")?),
    };
    group.check(&element)?;
    Ok(element)
}

pub fn element_to_json(g: &GroupElement) -> Value {
    match g {
        GroupElement::Word(w) => json!(w),
        GroupElement::Vector(v) => json!(v),
        GroupElement::Index(i) => json!(i),
    }
}

pub fn chain_from_json(group: &GroupSpec, v: &Value) -> Result<Chain> {
    let degree = as_usize(field(v, "degree")?, "degree")?;
    let terms = as_array(field(v, "terms")?, "terms")?
        .iter()
        .map(|t| {
            let tuple = as_array(field(t, "tuple")?, "tuple")?
                .iter()
                .map(|x| element_from_json(group, x))
                .collect::<Result<Vec<_>>>()?;
            Ok((tuple, scalar::from_json(field(t, "coeff")?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Chain::from_terms(degree, terms)
}

pub fn chain_to_json(c: &Chain) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .map(|(t, coeff)| {
            json!({
                "tuple": t.points().iter().map(element_to_json).collect::<Vec<_>>(),
                "coeff": scalar::to_json(coeff),
            })
        })
        .collect();
    json!({"degree": c.degree(), "terms": terms})
}

/// Reads a chain set: `{"group":G,"chains":[…]}`, a single chain document,
/// or a bare array of chains. `fallback` supplies the group when the
/// document does not name one.
pub fn chains_from_json(v: &Value, fallback: Option<&GroupSpec>) -> Result<(GroupSpec, Vec<Chain>)> {
    let group = match (v.get("group"), fallback) {
        (Some(g), _) => group_from_json(g)?,
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(parse_err("no group given: add a \"group\" field or pass --group")),
    };
    let docs: Vec<&Value> = if let Some(list) = v.get("chains") {
        as_array(list, "chains")?.iter().collect()
    } else if let Some(list) = v.as_array() {
        list.iter().collect()
    } else {
        vec![v]
    };
    let chains = docs.into_iter().map(|c| chain_from_json(&group, c)).collect::<Result<Vec<_>>>()?;
    Ok((group, chains))
}

pub fn chains_to_json(group: &GroupSpec, chains: &[Chain]) -> Value {
    json!({"group": group_to_json(group), "chains": chains.iter().map(chain_to_json).collect::<Vec<_>>()})
}

fn constants_from_json(v: Option<&Value>) -> Result<CombingConstants> {
    let default = CombingConstants {
        quasi_lipschitz: scalar::int(1),
        closeness: 1,
        growth_order: 1,
        growth_constant: scalar::int(1),
    };
    let Some(v) = v else { return Ok(default) };
    Ok(CombingConstants {
        quasi_lipschitz: v.get("C").map(scalar::from_json).transpose()?.unwrap_or(default.quasi_lipschitz),
        closeness: v.get("S").map(|s| as_usize(s, "S")).transpose()?.unwrap_or(default.closeness),
        growth_order: v.get("m").map(|m| as_usize(m, "m")).transpose()?.map_or(default.growth_order, |m| m as u32),
        growth_constant: v
            .get("growth_constant")
            .map(scalar::from_json)
            .transpose()?
            .unwrap_or(default.growth_constant),
    })
}

fn constants_to_json(c: &CombingConstants) -> Value {
    json!({
        "C": scalar::to_json(&c.quasi_lipschitz),
        "S": c.closeness,
        "m": c.growth_order,
        "growth_constant": scalar::to_json(&c.growth_constant),
    })
}

pub fn combing_from_json(v: &Value) -> Result<Combing> {
    match as_str(field(v, "kind")?, "kind")? {
        "free_prefix" => free_group_combing(as_usize(field(v, "rank")?, "rank")?),
        "abelian_staircase" => abelian_combing(as_usize(field(v, "rank")?, "rank")?),
        "table" => {
            let group = group_from_json(field(v, "group")?)?;
            let mut paths = BTreeMap::new();
            for entry in as_array(field(v, "paths")?, "paths")? {
                let point = element_from_json(&group, field(entry, "point")?)?;
                let path = as_array(field(entry, "path")?, "path")?
                    .iter()
                    .map(|x| element_from_json(&group, x))
                    .collect::<Result<Vec<_>>>()?;
                paths.insert(point, path);
            }
            Combing::from_table(group, paths, constants_from_json(v.get("constants"))?)
        }
        other => Err(parse_err(format!("unknown combing kind {other:?}"))),
    }
}

pub fn combing_to_json(c: &Combing) -> Value {
    let rank = match c.group() {
        GroupSpec::Free { rank } | GroupSpec::Abelian { rank, .. } => *rank,
        GroupSpec::Finite(_) => 0,
    };
    match c.rule() {
        CombingRule::FreePrefix => json!({"kind": "free_prefix", "rank": rank}),
        CombingRule::AbelianStaircase => json!({"kind": "abelian_staircase", "rank": rank}),
        CombingRule::Table(paths) => json!({
            "kind": "table",
            "group": group_to_json(c.group()),
            "paths": paths.iter().map(|(x, p)| json!({
                "point": element_to_json(x),
                "path": p.iter().map(element_to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "constants": constants_to_json(c.constants()),
        }),
    }
}

pub fn map_from_json(group: &GroupSpec, v: &Value) -> Result<MapSpec> {
    match as_str(field(v, "kind")?, "kind")? {
        "identity" => Ok(MapSpec::Identity),
        "constant" => Ok(MapSpec::Constant(element_from_json(group, field(v, "point")?)?)),
        "translate" => Ok(MapSpec::Translate(group.clone(), element_from_json(group, field(v, "by")?)?)),
        "table" => {
            let mut entries = BTreeMap::new();
            for pair in as_array(field(v, "entries")?, "entries")? {
                let pair = as_array(pair, "table entry")?;
                if pair.len() != 2 {
                    return Err(parse_err("table entries are [point, image] pairs"));
                }
                entries.insert(element_from_json(group, &pair[0])?, element_from_json(group, &pair[1])?);
            }
            Ok(MapSpec::Table(entries))
        }
        "stage" => {
            let comb = combing_from_json(field(v, "comb")?)?;
            if comb.group() != group {
                return Err(Error::MismatchedGroup { element: "combing".into(), group: group.to_string() });
            }
            Ok(MapSpec::Stage(Box::new(comb), as_usize(field(v, "n")?, "n")?))
        }
        "compose" => Ok(MapSpec::Compose(
            Box::new(map_from_json(group, field(v, "outer")?)?),
            Box::new(map_from_json(group, field(v, "inner")?)?),
        )),
        other => Err(parse_err(format!("unknown map kind {other:?}"))),
    }
}

pub fn metric_space_from_json(v: &Value) -> Result<FiniteMetricSpace> {
    let labels = as_array(field(v, "points")?, "points")?
        .iter()
        .map(|p| match p {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    let dist = as_array(field(v, "dist")?, "dist")?
        .iter()
        .map(|row| as_array(row, "dist row")?.iter().map(scalar::from_json).collect())
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    FiniteMetricSpace::new(labels, dist)
}

/// An exact value together with a decimal rendering for humans.
pub fn exact(value: &Scalar) -> Value {
    json!({"exact": scalar::to_json(value), "decimal": scalar::decimal(value, 6)})
}

pub fn check_to_json(check: &IdentityCheck) -> Value {
    json!({"holds": check.holds, "discrepancy": chain_to_json(&check.discrepancy)})
}

pub fn combing_report_to_json(r: &CombingReport) -> Value {
    json!({
        "radius": r.radius,
        "points": r.points,
        "max_stabilization": r.max_stabilization,
        "C_obs": exact(&r.quasi_lipschitz_observed),
        "lipschitz_obs": exact(&r.lipschitz_observed),
        "S_obs": r.closeness_observed,
        "growth_constant_obs": exact(&r.growth_constant_observed),
        "J": r.jumps.iter().map(|s| json!({
            "length": s.length, "points": s.points, "min": s.min_jumps, "max": s.max_jumps,
        })).collect::<Vec<_>>(),
        "base_point_ok": r.base_point_ok,
        "stabilization_ok": r.stabilization_ok,
        "quasi_lipschitz_ok": r.quasi_lipschitz_ok,
        "closeness_ok": r.closeness_ok,
        "growth_ok": r.growth_ok,
        "axioms_ok": r.axioms_ok,
        "violations": r.violations,
    })
}

pub fn profile_report_to_json(r: &ProfileReport) -> Value {
    json!({
        "k": r.k,
        "degree": r.degree,
        "length": r.length,
        "radius": r.radius,
        "growth_order": r.growth_order,
        "shells": r.shells.iter().map(|s| json!({
            "shell": s.shell,
            "tuples": s.tuples,
            "max_ratio": exact(&s.max_ratio),
            "witness": s.witness.as_ref().map(|t| t.iter().map(element_to_json).collect::<Vec<_>>()),
        })).collect::<Vec<_>>(),
        "max_output_control_radius": r.max_output_control_radius,
        "note": "maxima over enumerated shells only; continuation beyond the last shell is not asserted",
    })
}

pub fn growth_report_to_json(r: &GrowthReport) -> Value {
    json!({
        "k": r.k,
        "constant": exact(&r.constant),
        "witness": r.witness.iter().map(element_to_json).collect::<Vec<_>>(),
        "shell_maxima": r.shell_maxima.iter().map(exact).collect::<Vec<_>>(),
        "looks_superpolynomial": r.looks_superpolynomial,
    })
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    let mut obj = Map::new();
    obj.insert("counts".into(), json!(k.counts()));
    obj.insert("simplices".into(), json!((0..=k.max_dim()).map(|d| k.simplices(d)).collect::<Vec<_>>()));
    Value::Object(obj)
}

pub fn cohomology_report(group: &GroupSpec, method: &str, dims: &[usize]) -> Value {
    json!({"group": group_to_json(group), "method": method, "dims": dims})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_documents() {
        for text in [
            r#"{"family":"free","rank":2}"#,
            r#"{"family":"abelian","rank":3}"#,
            r#"{"family":"abelian","rank":1,"steps":[2,3]}"#,
            r#"{"family":"finite","table":[[0,1],[1,0]],"generators":[1]}"#,
        ] {
            let g = group_from_json(&parse_value(text).unwrap()).unwrap();
            assert_eq!(group_from_json(&group_to_json(&g)).unwrap(), g);
        }
        assert!(group_from_json(&parse_value(r#"{"family":"free","rank":0}"#).unwrap()).is_err());
        assert!(group_from_json(&parse_value(r#"{"family":"braid","rank":3}"#).unwrap()).is_err());
        let z3 = group_from_json(&parse_value(r#"{"family":"cyclic","order":3}"#).unwrap()).unwrap();
        assert_eq!(z3, GroupSpec::cyclic(3).unwrap());
    }

    #[test]
    fn chain_documents() {
        let f2 = GroupSpec::free(2).unwrap();
        let text = r#"{"degree":1,"terms":[{"tuple":[[1],[1,2]],"coeff":"3/4"},{"tuple":[[],[-2]],"coeff":-2}]}"#;
        let c = chain_from_json(&f2, &parse_value(text).unwrap()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.coefficient(&[GroupElement::word(&[1]), GroupElement::word(&[1, 2])]), scalar::ratio(3, 4));
        assert_eq!(chain_from_json(&f2, &chain_to_json(&c)).unwrap(), c);
        let degenerate = r#"{"degree":1,"terms":[{"tuple":[[1],[1]],"coeff":"1"}]}"#;
        assert!(chain_from_json(&f2, &parse_value(degenerate).unwrap()).is_err());
        let wrong_group = r#"{"degree":0,"terms":[{"tuple":[[3]],"coeff":"1"}]}"#;
        assert!(chain_from_json(&f2, &parse_value(wrong_group).unwrap()).is_err());
    }

    #[test]
    fn chain_sets_need_a_group() {
        let doc = parse_value(r#"{"degree":0,"terms":[{"tuple":[[1]],"coeff":"1"}]}"#).unwrap();
        assert!(chains_from_json(&doc, None).is_err());
        let f2 = GroupSpec::free(2).unwrap();
        let (_, chains) = chains_from_json(&doc, Some(&f2)).unwrap();
        assert_eq!(chains.len(), 1);
        let set = chains_to_json(&f2, &chains);
        assert_eq!(chains_from_json(&set, None).unwrap(), (f2, chains));
    }

    #[test]
    fn combing_and_map_documents() {
        let c = combing_from_json(&parse_value(r#"{"kind":"free_prefix","rank":2}"#).unwrap()).unwrap();
        assert_eq!(combing_from_json(&combing_to_json(&c)).unwrap(), c);
        let f2 = c.group().clone();
        let m = map_from_json(
            &f2,
            &parse_value(r#"{"kind":"compose","outer":{"kind":"translate","by":[1]},"inner":{"kind":"stage","comb":{"kind":"free_prefix","rank":2},"n":1}}"#)
                .unwrap(),
        )
        .unwrap();
        use crate::homotopy::PointMap;
        assert_eq!(m.apply(&GroupElement::word(&[2, 1])).unwrap(), GroupElement::word(&[1, 2]));
    }

    #[test]
    fn metric_space_document() {
        let v = parse_value(r#"{"points":["a","b",3],"dist":[[0,1,"3/2"],[1,0,1],["3/2",1,0]]}"#).unwrap();
        let x = metric_space_from_json(&v).unwrap();
        assert_eq!(x.labels(), &["a", "b", "3"]);
        assert_eq!(*x.distance(0, 2), scalar::ratio(3, 2));
    }
}
