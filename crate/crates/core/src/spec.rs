//! The JSON spec-file format.
//!
//! Indices are 1-based in the file. A form is `{"b": {"<dirs>": poly}}`
//! where `<dirs>` lists the coordinate directions, as concatenated digits on
//! charts of dimension at most 9 and comma-separated otherwise (`""` for
//! 0-forms). A cochain table is `{"k": {"I|J": form}}` with `I` the
//! antisymmetric and `J` the symmetric frame indices.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebroid::forms::{mask_indices, mask_of};
use crate::algebroid::{AlgebroidPresentation, PolyMatrix, VForm};
use crate::connections::{ARep, LinearConnection};
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::ideals::{CouplingTriple, IMConnection, IdealBundle};
use crate::poly::{default_var_names, Poly};
use crate::weil::WeilCochain;

/// Splitting data `(v, U)` for obstruction computations; the connection is
/// taken from the spec's `connection`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub symbol: Vec<Vec<Poly>>,
    pub u: BTreeMap<usize, VForm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub variables: Vec<String>,
    pub algebroid: AlgebroidPresentation,
    pub ideal: Option<Vec<usize>>,
    pub representation: Option<ARep>,
    pub connection: Option<LinearConnection>,
    pub im_connection: Option<WeilCochain>,
    pub splitting: Option<Splitting>,
    pub cochains: Vec<WeilCochain>,
    pub curving: Option<VForm>,
}

fn perr(path: &str, reason: impl Into<String>) -> Error {
    Error::parse(path, reason)
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| perr(path, format!("missing field '{key}'")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| perr(path, "expected a non-negative integer"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| perr(path, "expected a string"))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(perr(path, format!("unknown field '{k}'")));
        }
    }
    Ok(())
}

/// Parse `"i,j,k"` into 0-based indices, each below the matching bound.
fn index_tuple(key: &str, bounds: &[usize], path: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = if key.is_empty() {
        vec![]
    } else {
        key.split(',').collect()
    };
    if parts.len() != bounds.len() {
        return Err(perr(
            path,
            format!("key '{key}' needs {} comma-separated indices", bounds.len()),
        ));
    }
    parts
        .iter()
        .zip(bounds)
        .map(|(s, &b)| {
            let i: usize = s
                .trim()
                .parse()
                .map_err(|_| perr(path, format!("'{s}' is not an index")))?;
            if i == 0 || i > b {
                return Err(perr(path, format!("index {i} out of range 1..={b}")));
            }
            Ok(i - 1)
        })
        .collect()
}

fn index_list(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_poly(v: &Value, vars: &[String], path: &str) -> Result<Poly> {
    let s = as_str(v, path)?;
    Poly::parse(s, vars).map_err(|e| match e {
        Error::Parse { path: p, reason } => perr(path, format!("{reason} in {p}")),
        other => other,
    })
}

fn dirs_key(mask: u32, n: usize) -> String {
    let idx: Vec<String> = mask_indices(mask).iter().map(|a| (a + 1).to_string()).collect();
    if n <= 9 {
        idx.concat()
    } else {
        idx.join(",")
    }
}

fn parse_dirs(key: &str, n: usize, degree: usize, path: &str) -> Result<u32> {
    let parts: Vec<String> = if key.is_empty() {
        vec![]
    } else if key.contains(',') || n > 9 {
        key.split(',').map(str::to_string).collect()
    } else {
        key.chars().map(|c| c.to_string()).collect()
    };
    let mut idx = Vec::with_capacity(parts.len());
    for s in &parts {
        let a: usize = s
            .trim()
            .parse()
            .map_err(|_| perr(path, format!("'{key}' is not a list of directions")))?;
        if a == 0 || a > n {
            return Err(perr(path, format!("direction {a} out of range 1..={n}")));
        }
        idx.push(a - 1);
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(perr(path, format!("directions in '{key}' must be strictly increasing")));
    }
    if idx.len() != degree {
        return Err(perr(path, format!("expected a {degree}-form, got directions '{key}'")));
    }
    Ok(mask_of(&idx))
}

pub fn form_to_json(w: &VForm, vars: &[String]) -> Value {
    let mut out = Map::new();
    for ((b, mask), p) in w.components() {
        let entry = out
            .entry((b + 1).to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        entry
            .as_object_mut()
            .unwrap()
            .insert(dirs_key(*mask, w.nvars()), Value::String(p.to_string_with(vars)));
    }
    Value::Object(out)
}

pub fn form_from_json(
    v: &Value,
    vars: &[String],
    rank: usize,
    degree: usize,
    path: &str,
) -> Result<VForm> {
    let n = vars.len();
    let mut out = VForm::zero(n, rank, degree);
    for (bk, comps) in as_object(v, path)? {
        let bpath = format!("{path}.{bk}");
        let b = index_tuple(bk, &[rank], &bpath)?[0];
        for (dk, pv) in as_object(comps, &bpath)? {
            let dpath = format!("{bpath}.\"{dk}\"");
            let mask = parse_dirs(dk, n, degree, &dpath)?;
            let p = parse_poly(pv, vars, &dpath)?;
            out.add_component(b, mask, &p);
        }
    }
    Ok(out)
}

pub fn cochain_tables_to_json(c: &WeilCochain, vars: &[String]) -> Value {
    let mut out = Map::new();
    for k in c.valid_components() {
        let mut comp = Map::new();
        for ((i, j), w) in c.entries(k) {
            comp.insert(format!("{}|{}", index_list(i), index_list(j)), form_to_json(w, vars));
        }
        if !comp.is_empty() {
            out.insert(k.to_string(), Value::Object(comp));
        }
    }
    Value::Object(out)
}

pub fn cochain_to_json(c: &WeilCochain, vars: &[String]) -> Value {
    json!({
        "p": c.level(),
        "q": c.degree(),
        "rank": c.value_rank(),
        "tables": cochain_tables_to_json(c, vars),
    })
}

pub fn cochain_tables_from_json(
    v: &Value,
    vars: &[String],
    r: usize,
    m: usize,
    p: usize,
    q: usize,
    path: &str,
) -> Result<WeilCochain> {
    let n = vars.len();
    let mut c = WeilCochain::zero(n, r, m, p, q);
    for (kk, comp) in as_object(v, path)? {
        let kpath = format!("{path}.{kk}");
        let k: usize = kk
            .parse()
            .map_err(|_| perr(&kpath, "component key must be a level k"))?;
        if !c.has_component(k) {
            return Err(perr(&kpath, format!("component {k} is not stored for W^({p},{q})")));
        }
        for (slot, w) in as_object(comp, &kpath)? {
            let spath = format!("{kpath}.\"{slot}\"");
            let (a, s) = slot
                .split_once('|')
                .ok_or_else(|| perr(&spath, "slot key must look like 'I|J'"))?;
            let anti = index_tuple(a, &vec![r; p - k], &spath)?;
            let sym = index_tuple(s, &vec![r; k], &spath)?;
            let mut sorted = anti.clone();
            sorted.sort();
            if sorted != anti || sorted.windows(2).any(|x| x[0] == x[1]) {
                return Err(perr(&spath, "antisymmetric indices must be strictly increasing"));
            }
            if sym.windows(2).any(|x| x[0] > x[1]) {
                return Err(perr(&spath, "symmetric indices must be non-decreasing"));
            }
            let form = form_from_json(w, vars, m, q - k, &spath)?;
            c.set(k, &anti, &sym, form);
        }
    }
    Ok(c)
}

pub fn cochain_from_json(v: &Value, vars: &[String], r: usize, path: &str) -> Result<WeilCochain> {
    let obj = as_object(v, path)?;
    check_keys(obj, &["p", "q", "rank", "tables"], path)?;
    let p = as_usize(get(obj, "p", path)?, &format!("{path}.p"))?;
    let q = as_usize(get(obj, "q", path)?, &format!("{path}.q"))?;
    let m = as_usize(get(obj, "rank", path)?, &format!("{path}.rank"))?;
    if p > 4 {
        return Err(perr(&format!("{path}.p"), "levels above 4 are not supported"));
    }
    cochain_tables_from_json(get(obj, "tables", path)?, vars, r, m, p, q, &format!("{path}.tables"))
}

fn matrices_to_json(mats: &[PolyMatrix], vars: &[String]) -> Value {
    let mut out = Map::new();
    for (a, g) in mats.iter().enumerate() {
        for b in 0..g.rows {
            for c in 0..g.cols {
                let p = g.get(b, c);
                if !p.is_zero() {
                    out.insert(
                        format!("{},{},{}", a + 1, b + 1, c + 1),
                        Value::String(p.to_string_with(vars)),
                    );
                }
            }
        }
    }
    Value::Object(out)
}

fn matrices_from_json(
    v: &Value,
    vars: &[String],
    count: usize,
    m: usize,
    path: &str,
) -> Result<Vec<PolyMatrix>> {
    let n = vars.len();
    let mut mats = vec![PolyMatrix::zero(n, m, m); count];
    for (key, pv) in as_object(v, path)? {
        let kpath = format!("{path}.\"{key}\"");
        let idx = index_tuple(key, &[count, m, m], &kpath)?;
        mats[idx[0]].set(idx[1], idx[2], parse_poly(pv, vars, &kpath)?);
    }
    Ok(mats)
}

impl SpecFile {
    pub fn new(variables: Vec<String>, algebroid: AlgebroidPresentation) -> Self {
        SpecFile {
            variables,
            algebroid,
            ideal: None,
            representation: None,
            connection: None,
            im_connection: None,
            splitting: None,
            cochains: Vec::new(),
            curving: None,
        }
    }

    pub fn parse(src: &str) -> Result<SpecFile> {
        let root: Value = serde_json::from_str(src).map_err(|e| {
            perr(
                &format!("line {} column {}", e.line(), e.column()),
                format!("invalid JSON: {e}"),
            )
        })?;
        let obj = as_object(&root, "$")?;
        check_keys(
            obj,
            &[
                "chart",
                "algebroid",
                "ideal",
                "representation",
                "connection",
                "im_connection",
                "splitting",
                "cochains",
                "curving",
            ],
            "$",
        )?;

        let chart = as_object(get(obj, "chart", "$")?, "$.chart")?;
        check_keys(chart, &["dim", "variables"], "$.chart")?;
        let n = as_usize(get(chart, "dim", "$.chart")?, "$.chart.dim")?;
        if n > crate::algebroid::forms::MAX_CHART_DIM {
            return Err(perr("$.chart.dim", "chart dimension too large"));
        }
        let variables = match chart.get("variables") {
            None => default_var_names(n),
            Some(v) => {
                let arr = v
                    .as_array()
                    .ok_or_else(|| perr("$.chart.variables", "expected an array"))?;
                let names: Vec<String> = arr
                    .iter()
                    .enumerate()
                    .map(|(i, x)| as_str(x, &format!("$.chart.variables[{i}]")).map(str::to_string))
                    .collect::<Result<_>>()?;
                if names.len() != n {
                    return Err(perr("$.chart.variables", format!("expected {n} names")));
                }
                for (i, s) in names.iter().enumerate() {
                    let ok = s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && s.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok || names[..i].contains(s) {
                        return Err(perr(
                            &format!("$.chart.variables[{i}]"),
                            format!("'{s}' is not a fresh identifier"),
                        ));
                    }
                }
                names
            }
        };

        let a = as_object(get(obj, "algebroid", "$")?, "$.algebroid")?;
        check_keys(a, &["rank", "structure", "anchor"], "$.algebroid")?;
        let r = as_usize(get(a, "rank", "$.algebroid")?, "$.algebroid.rank")?;
        let mut upper = Vec::new();
        if let Some(s) = a.get("structure") {
            for (key, pv) in as_object(s, "$.algebroid.structure")? {
                let path = format!("$.algebroid.structure.\"{key}\"");
                let idx = index_tuple(key, &[r, r, r], &path)?;
                if idx[0] >= idx[1] {
                    return Err(perr(&path, "structure keys need i < j"));
                }
                upper.push(((idx[0], idx[1], idx[2]), parse_poly(pv, &variables, &path)?));
            }
        }
        let mut anchor = vec![Poly::zero(n); r * n];
        if let Some(s) = a.get("anchor") {
            for (key, pv) in as_object(s, "$.algebroid.anchor")? {
                let path = format!("$.algebroid.anchor.\"{key}\"");
                let idx = index_tuple(key, &[r, n], &path)?;
                anchor[idx[0] * n + idx[1]] = parse_poly(pv, &variables, &path)?;
            }
        }
        let algebroid = AlgebroidPresentation::from_upper(n, r, upper, anchor)?;
        let mut spec = SpecFile::new(variables, algebroid);
        let vars = spec.variables.clone();

        if let Some(v) = obj.get("ideal") {
            let io = as_object(v, "$.ideal")?;
            check_keys(io, &["indices"], "$.ideal")?;
            let arr = get(io, "indices", "$.ideal")?
                .as_array()
                .ok_or_else(|| perr("$.ideal.indices", "expected an array"))?;
            let mut idx = Vec::new();
            for (t, x) in arr.iter().enumerate() {
                let path = format!("$.ideal.indices[{t}]");
                let i = as_usize(x, &path)?;
                if i == 0 || i > r {
                    return Err(perr(&path, format!("index {i} out of range 1..={r}")));
                }
                if idx.contains(&(i - 1)) {
                    return Err(perr(&path, format!("index {i} repeated")));
                }
                idx.push(i - 1);
            }
            idx.sort();
            spec.ideal = Some(idx);
        }

        if let Some(v) = obj.get("representation") {
            let ro = as_object(v, "$.representation")?;
            check_keys(ro, &["rank", "coefficients"], "$.representation")?;
            let m = as_usize(get(ro, "rank", "$.representation")?, "$.representation.rank")?;
            let psi = match ro.get("coefficients") {
                Some(c) => matrices_from_json(c, &vars, r, m, "$.representation.coefficients")?,
                None => vec![PolyMatrix::zero(n, m, m); r],
            };
            spec.representation = Some(ARep::new(n, m, psi)?);
        }

        if let Some(v) = obj.get("connection") {
            let co = as_object(v, "$.connection")?;
            check_keys(co, &["rank", "christoffels"], "$.connection")?;
            let m = as_usize(get(co, "rank", "$.connection")?, "$.connection.rank")?;
            let gamma = match co.get("christoffels") {
                Some(c) => matrices_from_json(c, &vars, n, m, "$.connection.christoffels")?,
                None => vec![PolyMatrix::zero(n, m, m); n],
            };
            spec.connection = Some(LinearConnection::new(n, m, gamma)?);
        }

        let ideal_rank = spec.ideal.as_ref().map(Vec::len);

        if let Some(v) = obj.get("im_connection") {
            let io = as_object(v, "$.im_connection")?;
            check_keys(io, &["tables"], "$.im_connection")?;
            let m = ideal_rank.ok_or_else(|| perr("$.im_connection", "an IM connection needs an ideal"))?;
            let c = cochain_tables_from_json(
                get(io, "tables", "$.im_connection")?,
                &vars,
                r,
                m,
                1,
                1,
                "$.im_connection.tables",
            )?;
            spec.im_connection = Some(c);
        }

        if let Some(v) = obj.get("splitting") {
            let so = as_object(v, "$.splitting")?;
            check_keys(so, &["symbol", "u"], "$.splitting")?;
            let m = ideal_rank.ok_or_else(|| perr("$.splitting", "a splitting needs an ideal"))?;
            let mut symbol = vec![vec![Poly::zero(n); m]; r];
            if let Some(sv) = so.get("symbol") {
                for (key, pv) in as_object(sv, "$.splitting.symbol")? {
                    let path = format!("$.splitting.symbol.\"{key}\"");
                    let idx = index_tuple(key, &[r, m], &path)?;
                    symbol[idx[0]][idx[1]] = parse_poly(pv, &vars, &path)?;
                }
            }
            let mut u = BTreeMap::new();
            if let Some(uv) = so.get("u") {
                for (key, fv) in as_object(uv, "$.splitting.u")? {
                    let path = format!("$.splitting.u.{key}");
                    let i = index_tuple(key, &[r], &path)?[0];
                    u.insert(i, form_from_json(fv, &vars, m, 1, &path)?);
                }
            }
            spec.splitting = Some(Splitting { symbol, u });
        }

        if let Some(v) = obj.get("cochains") {
            let arr = v
                .as_array()
                .ok_or_else(|| perr("$.cochains", "expected an array"))?;
            for (t, cv) in arr.iter().enumerate() {
                spec.cochains
                    .push(cochain_from_json(cv, &vars, r, &format!("$.cochains[{t}]"))?);
            }
        }

        if let Some(v) = obj.get("curving") {
            let co = as_object(v, "$.curving")?;
            check_keys(co, &["form"], "$.curving")?;
            let m = ideal_rank.ok_or_else(|| perr("$.curving", "a curving needs an ideal"))?;
            spec.curving = Some(form_from_json(
                get(co, "form", "$.curving")?,
                &vars,
                m,
                2,
                "$.curving.form",
            )?);
        }
        Ok(spec)
    }

    pub fn to_value(&self) -> Value {
        let vars = &self.variables;
        let alg = &self.algebroid;
        let (n, r) = (alg.chart_dim(), alg.rank());
        let mut structure = Map::new();
        for i in 0..r {
            for j in i + 1..r {
                for k in 0..r {
                    let p = alg.c(i, j, k);
                    if !p.is_zero() {
                        structure.insert(
                            format!("{},{},{}", i + 1, j + 1, k + 1),
                            Value::String(p.to_string_with(vars)),
                        );
                    }
                }
            }
        }
        let mut anchor = Map::new();
        for i in 0..r {
            for a in 0..n {
                let p = alg.rho(i, a);
                if !p.is_zero() {
                    anchor.insert(format!("{},{}", i + 1, a + 1), Value::String(p.to_string_with(vars)));
                }
            }
        }
        let mut root = Map::new();
        root.insert("chart".into(), json!({"dim": n, "variables": vars}));
        root.insert(
            "algebroid".into(),
            json!({"rank": r, "structure": structure, "anchor": anchor}),
        );
        if let Some(idx) = &self.ideal {
            let one_based: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            root.insert("ideal".into(), json!({ "indices": one_based }));
        }
        if let Some(rep) = &self.representation {
            let psi: Vec<PolyMatrix> = (0..r).map(|i| rep.psi(i).clone()).collect();
            root.insert(
                "representation".into(),
                json!({"rank": rep.rank(), "coefficients": matrices_to_json(&psi, vars)}),
            );
        }
        if let Some(conn) = &self.connection {
            let gamma: Vec<PolyMatrix> = (0..n).map(|a| conn.gamma(a).clone()).collect();
            root.insert(
                "connection".into(),
                json!({"rank": conn.rank(), "christoffels": matrices_to_json(&gamma, vars)}),
            );
        }
        if let Some(c) = &self.im_connection {
            root.insert(
                "im_connection".into(),
                json!({ "tables": cochain_tables_to_json(c, vars) }),
            );
        }
        if let Some(s) = &self.splitting {
            let mut symbol = Map::new();
            for (i, v) in s.symbol.iter().enumerate() {
                for (b, p) in v.iter().enumerate() {
                    if !p.is_zero() {
                        symbol.insert(format!("{},{}", i + 1, b + 1), Value::String(p.to_string_with(vars)));
                    }
                }
            }
            let u: Map<String, Value> = s
                .u
                .iter()
                .map(|(i, w)| ((i + 1).to_string(), form_to_json(w, vars)))
                .collect();
            root.insert("splitting".into(), json!({"symbol": symbol, "u": u}));
        }
        if !self.cochains.is_empty() {
            let arr: Vec<Value> = self.cochains.iter().map(|c| cochain_to_json(c, vars)).collect();
            root.insert("cochains".into(), Value::Array(arr));
        }
        if let Some(f) = &self.curving {
            root.insert("curving".into(), json!({ "form": form_to_json(f, vars) }));
        }
        Value::Object(root)
    }

    /// Canonical text: sorted keys, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_fixture(fx: &Fixture) -> SpecFile {
        let imc = &fx.coupled.imc;
        let mut spec = SpecFile::new(fx.variables.clone(), imc.algebroid().clone());
        spec.ideal = Some(imc.ideal().indices().to_vec());
        spec.connection = Some(fx.coupled.conn.clone());
        spec.im_connection = Some(imc.cochain().clone());
        spec.curving = Some(fx.coupled.curving.clone());
        spec
    }

    pub fn ideal_bundle(&self) -> Result<Option<IdealBundle>> {
        self.ideal
            .as_ref()
            .map(|idx| IdealBundle::new(self.algebroid.clone(), idx.clone()))
            .transpose()
    }

    /// The IM connection, without the compatibility check.
    pub fn imc(&self) -> Result<Option<IMConnection>> {
        match (self.ideal_bundle()?, &self.im_connection) {
            (Some(ideal), Some(c)) => Ok(Some(IMConnection::new_unchecked(ideal, c.clone())?)),
            _ => Ok(None),
        }
    }

    /// Splitting triple from `splitting` + `connection`, or read off the IM connection.
    pub fn triple(&self) -> Result<Option<CouplingTriple>> {
        if let Some(s) = &self.splitting {
            let ideal = self.ideal.as_ref().map(Vec::len).unwrap_or(0);
            let conn = self
                .connection
                .clone()
                .unwrap_or_else(|| LinearConnection::trivial(self.algebroid.chart_dim(), ideal));
            return Ok(Some(CouplingTriple {
                symbol: s.symbol.clone(),
                conn,
                u: s.u.clone(),
            }));
        }
        Ok(self.imc()?.map(|imc| CouplingTriple::from_imc(&imc)))
    }

    /// Representation acting on cochains of value rank `m`: the explicit one,
    /// else the adjoint action on the ideal, else the trivial one.
    pub fn representation_for(&self, m: usize) -> Result<ARep> {
        if let Some(rep) = &self.representation {
            if rep.rank() == m {
                return Ok(rep.clone());
            }
        }
        if let Some(ideal) = self.ideal_bundle()? {
            if ideal.rank() == m {
                return Ok(ideal.adjoint_rep());
            }
        }
        if self.representation.is_some() {
            return Err(Error::structural(format!(
                "no representation of rank {m} available"
            )));
        }
        Ok(ARep::trivial(&self.algebroid, m))
    }

    /// Connection on a bundle of rank `m`: the explicit one, else trivial.
    pub fn connection_for(&self, m: usize) -> Result<LinearConnection> {
        match &self.connection {
            Some(c) if c.rank() == m => Ok(c.clone()),
            Some(_) => Err(Error::structural(format!("no connection of rank {m} available"))),
            None => Ok(LinearConnection::trivial(self.algebroid.chart_dim(), m)),
        }
    }
}
