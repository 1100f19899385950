//! JSON reader for [`OrbifoldInput`].

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::{CohomologyData, GroupData, OrbifoldError, OrbifoldInput, SectorClass, SectorComponent};
use crate::arith::{parse_rat, Rat};
use crate::fock::TwistData;
use crate::genus::{FixedPoint, LineDatum};

/// Inputs shipped with the crate, by file name.
pub const BUNDLED_INPUTS: &[(&str, &str)] =
    &[("p1_z2.json", include_str!("../../fixtures/p1_z2.json")), ("p1_s3.json", include_str!("../../fixtures/p1_s3.json"))];

pub fn bundled_input(name: &str) -> Option<&'static str> {
    BUNDLED_INPUTS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

type R<T> = Result<T, OrbifoldError>;

fn err<T>(path: &str, msg: impl Into<String>) -> R<T> {
    Err(OrbifoldError::at(path, msg))
}

fn object<'a>(v: &'a Value, path: &str) -> R<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| err(path, "expected an object"), Ok)
}

fn array<'a>(v: &'a Value, path: &str) -> R<&'a Vec<Value>> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> R<&'a Value> {
    m.get(key).map_or_else(|| err(&format!("{path}.{key}"), "missing field"), Ok)
}

fn int(v: &Value, path: &str) -> R<i64> {
    v.as_i64().map_or_else(|| err(path, "expected an integer"), Ok)
}

fn index(v: &Value, path: &str) -> R<usize> {
    v.as_u64().map_or_else(|| err(path, "expected a nonnegative integer"), |x| Ok(x as usize))
}

fn rational(v: &Value, path: &str) -> R<Rat> {
    match v {
        Value::String(s) => parse_rat(s).or_else(|e| err(path, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap())),
        _ => err(path, "expected a rational string \"a/b\""),
    }
}

fn element_key(k: &str, path: &str, order: usize) -> R<usize> {
    match k.parse::<usize>() {
        Ok(x) if x < order => Ok(x),
        _ => err(&format!("{path}.{k}"), format!("not an element id in 0..{order}")),
    }
}

/// Parses and validates an orbifold description.
pub fn parse_orbifold_input(text: &str) -> Result<OrbifoldInput, OrbifoldError> {
    let root: Value = serde_json::from_str(text).map_err(|e| OrbifoldError::at("$", format!("invalid JSON: {e}")))?;
    let top = object(&root, "$")?;
    let dim = index(field(top, "dim", "$")?, "dim")?;
    let group = parse_group(field(top, "group", "$")?)?;
    let classes = array(field(top, "classes", "$")?, "classes")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_class(c, &format!("classes[{i}]"), &group))
        .collect::<R<Vec<_>>>()?;
    let mut input = OrbifoldInput { dim, group, classes, warnings: Vec::new() };
    input.validate()?;
    Ok(input)
}

fn parse_group(v: &Value) -> R<GroupData> {
    let m = object(v, "group")?;
    let group = match (m.get("table"), m.get("permutations")) {
        (Some(t), None) => {
            let rows = array(t, "group.table")?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let p = format!("group.table[{i}]");
                    array(r, &p)?.iter().enumerate().map(|(j, x)| index(x, &format!("{p}[{j}]"))).collect::<R<Vec<_>>>()
                })
                .collect::<R<Vec<_>>>()?;
            GroupData::from_table(rows).map_err(|e| OrbifoldError::at("group.table", e.to_string()))?
        }
        (None, Some(ps)) => {
            let perms = array(ps, "group.permutations")?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let p = format!("group.permutations[{i}]");
                    array(r, &p)?.iter().enumerate().map(|(j, x)| index(x, &format!("{p}[{j}]"))).collect::<R<Vec<_>>>()
                })
                .collect::<R<Vec<_>>>()?;
            GroupData::from_permutations(&perms).map_err(|e| OrbifoldError::at("group.permutations", e.to_string()))?
        }
        _ => return err("group", "expected exactly one of \"table\" or \"permutations\""),
    };
    if let Some(o) = m.get("order") {
        let o = index(o, "group.order")?;
        if o != group.order() {
            return err("group.order", format!("declared order {o} but the group has {} elements", group.order()));
        }
    }
    Ok(group)
}

fn parse_class(v: &Value, path: &str, group: &GroupData) -> R<SectorClass> {
    let m = object(v, path)?;
    let rep = index(field(m, "rep", path)?, &format!("{path}.rep"))?;
    if rep >= group.order() {
        return err(&format!("{path}.rep"), format!("not an element id in 0..{}", group.order()));
    }
    let cp = format!("{path}.components");
    let components = array(field(m, "components", path)?, &cp)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_component(c, &format!("{cp}[{i}]"), rep, group))
        .collect::<R<Vec<_>>>()?;
    Ok(SectorClass { rep, components })
}

fn parse_component(v: &Value, path: &str, rep: usize, group: &GroupData) -> R<SectorComponent> {
    let m = object(v, path)?;
    let name = field(m, "name", path)?.as_str().map_or_else(|| err(&format!("{path}.name"), "expected a string"), Ok)?.to_string();
    let mg = int(field(m, "mg", path)?, &format!("{path}.mg"))?;
    if mg < 1 || mg > u32::MAX as i64 {
        return err(&format!("{path}.mg"), "m_g must be a positive integer");
    }
    let ep = format!("{path}.exponents");
    let exponents = array(field(m, "exponents", path)?, &ep)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let e = int(x, &format!("{ep}[{i}]"))?;
            if e < 0 || e >= mg {
                return err(&format!("{ep}[{i}]"), format!("exponent {e} out of range 0..{mg}"));
            }
            Ok(e as u32)
        })
        .collect::<R<Vec<_>>>()?;
    let twist = TwistData::new(exponents, mg as u32).map_err(|e| OrbifoldError::at(&ep, e.to_string()))?;

    let hp = format!("{path}.cohomology");
    let coh = object(field(m, "cohomology", path)?, &hp)?;
    let cohomology = match (coh.get("characters"), coh.get("invariant_dims")) {
        (Some(ch), None) => {
            let cp = format!("{hp}.characters");
            let mut out = BTreeMap::new();
            for (k, traces) in object(ch, &cp)? {
                let h = element_key(k, &cp, group.order())?;
                let tp = format!("{cp}.{k}");
                let t = array(traces, &tp)?.iter().enumerate().map(|(i, x)| int(x, &format!("{tp}[{i}]"))).collect::<R<Vec<_>>>()?;
                out.insert(h, t);
            }
            CohomologyData::Characters(out)
        }
        (None, Some(d)) => {
            let dp = format!("{hp}.invariant_dims");
            CohomologyData::InvariantDims(array(d, &dp)?.iter().enumerate().map(|(i, x)| int(x, &format!("{dp}[{i}]"))).collect::<R<_>>()?)
        }
        _ => return err(&hp, "expected exactly one of \"characters\" or \"invariant_dims\""),
    };

    let localization = match m.get("localization") {
        None => None,
        Some(l) => {
            let lp = format!("{path}.localization");
            let mut out = BTreeMap::new();
            for (k, pts) in object(l, &lp)? {
                let h = element_key(k, &lp, group.order())?;
                let pp = format!("{lp}.{k}");
                let points =
                    array(pts, &pp)?.iter().enumerate().map(|(i, p)| parse_point(p, &format!("{pp}[{i}]"))).collect::<R<Vec<_>>>()?;
                out.insert(h, points);
            }
            Some(out)
        }
    };
    Ok(SectorComponent { name, rep, twist, cohomology, localization })
}

fn parse_point(v: &Value, path: &str) -> R<FixedPoint> {
    let m = object(v, path)?;
    let point = match m.get("point") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return err(&format!("{path}.point"), "expected a string"),
        None => String::new(),
    };
    let lp = format!("{path}.lines");
    let lines = array(field(m, "lines", path)?, &lp)?
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let p = format!("{lp}[{i}]");
            let lm = object(l, &p)?;
            let lambda = rational(field(lm, "lambda", &p)?, &format!("{p}.lambda"))?;
            if lambda < Rat::from_integer(0) || lambda >= Rat::from_integer(1) {
                return err(&format!("{p}.lambda"), "lambda must lie in [0, 1)");
            }
            let zeta = rational(field(lm, "zeta", &p)?, &format!("{p}.zeta"))?;
            let w = int(field(lm, "w", &p)?, &format!("{p}.w"))?;
            let tangent = field(lm, "tangent", &p)?.as_bool().map_or_else(|| err(&format!("{p}.tangent"), "expected a boolean"), Ok)?;
            Ok(LineDatum { lambda, zeta, w, tangent })
        })
        .collect::<R<Vec<_>>>()?;
    Ok(FixedPoint { point, lines })
}
