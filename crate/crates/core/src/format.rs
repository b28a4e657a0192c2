//! Canonical JSON files for categories and bimodules.
//!
//! Matrices are stored dense and row-major with explicit `rows` and `cols`.
//! Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
//! Serialization sorts keys and pretty-prints with a trailing newline, so a file
//! written here parses and re-serializes to the same bytes.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::flowcat::{
    validate_category, BimoduleBlock, CorrespondenceMap, FlowCategoryData, FlowDiagnostic, FlowObject,
};
use crate::homalg::{CoefficientRing, GradedChainComplex, HomologySummary};
use crate::twisted::BlockFamily;
use crate::{Int, IntegerMatrix};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported ring at {path}: {message}")]
    Ring { path: String, message: String },
    #[error("invalid category: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<FlowDiagnostic>),
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

/// Homology the file claims for its category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub description: String,
    pub expected_homology: HomologySummary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryFile {
    pub category: FlowCategoryData,
    pub oracle: Option<Oracle>,
}

/// Bimodule blocks between two categories stored in separate files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleFile {
    pub blocks: Vec<BimoduleBlock>,
}

fn schema<T>(path: &str, message: impl Into<String>) -> FormatResult<T> {
    Err(FormatError::Schema { path: path.to_string(), message: message.into() })
}

fn parse_json(text: &str) -> FormatResult<Value> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn object<'a>(v: &'a Value, path: &str) -> FormatResult<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| schema(path, "expected an object"), Ok)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> FormatResult<&'a Value> {
    m.get(key).map_or_else(|| schema(path, format!("missing field `{key}`")), Ok)
}

fn reject_unknown(m: &Map<String, Value>, allowed: &[&str], path: &str) -> FormatResult<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => schema(&format!("{path}.{k}"), "unknown field"),
        None => Ok(()),
    }
}

fn string<'a>(v: &'a Value, path: &str) -> FormatResult<&'a str> {
    v.as_str().map_or_else(|| schema(path, "expected a string"), Ok)
}

fn array<'a>(v: &'a Value, path: &str) -> FormatResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| schema(path, "expected an array"), Ok)
}

fn boolean(v: &Value, path: &str) -> FormatResult<bool> {
    v.as_bool().map_or_else(|| schema(path, "expected a boolean"), Ok)
}

fn small(v: &Value, path: &str) -> FormatResult<i64> {
    v.as_i64().map_or_else(|| schema(path, "expected a 64-bit integer"), Ok)
}

fn count(v: &Value, path: &str) -> FormatResult<usize> {
    v.as_u64().map_or_else(|| schema(path, "expected a nonnegative integer"), |n| Ok(n as usize))
}

fn integer(v: &Value, path: &str) -> FormatResult<Int> {
    if let Some(n) = v.as_i64() {
        return Ok(Int::from(n));
    }
    match v.as_str().and_then(|s| s.parse::<Int>().ok()) {
        Some(n) => Ok(n),
        None => schema(path, "expected an integer or a decimal string"),
    }
}

fn integer_value(n: &Int) -> Value {
    i64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn matrix(v: &Value, path: &str) -> FormatResult<IntegerMatrix> {
    let m = object(v, path)?;
    reject_unknown(m, &["rows", "cols", "entries"], path)?;
    let rows = count(field(m, "rows", path)?, &format!("{path}.rows"))?;
    let cols = count(field(m, "cols", path)?, &format!("{path}.cols"))?;
    let epath = format!("{path}.entries");
    let entries = array(field(m, "entries", path)?, &epath)?;
    if entries.len() != rows {
        return schema(&epath, format!("{} rows, declared {rows}", entries.len()));
    }
    let mut data = Vec::with_capacity(rows);
    for (i, row) in entries.iter().enumerate() {
        let rpath = format!("{epath}[{i}]");
        let row = array(row, &rpath)?;
        if row.len() != cols {
            return schema(&rpath, format!("{} columns, declared {cols}", row.len()));
        }
        data.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| integer(x, &format!("{rpath}[{j}]")))
                .collect::<FormatResult<Vec<_>>>()?,
        );
    }
    Ok(IntegerMatrix::from_dense(rows, cols, &data))
}

fn matrix_value(m: &IntegerMatrix) -> Value {
    let entries: Vec<Value> =
        m.to_dense().iter().map(|row| Value::Array(row.iter().map(integer_value).collect())).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

fn expect_shape(m: &IntegerMatrix, shape: (usize, usize), path: &str) -> FormatResult<()> {
    if m.shape() == shape {
        Ok(())
    } else {
        schema(path, format!("matrix is {}x{}, ranks demand {}x{}", m.rows(), m.cols(), shape.0, shape.1))
    }
}

fn ring(v: &Value, path: &str) -> FormatResult<CoefficientRing> {
    string(v, path)?
        .parse()
        .map_err(|e: crate::Error| FormatError::Ring { path: path.to_string(), message: e.to_string() })
}

fn chain(v: &Value, r: CoefficientRing, path: &str) -> FormatResult<GradedChainComplex> {
    let m = object(v, path)?;
    reject_unknown(m, &["min_degree", "ranks", "differentials"], path)?;
    let min_degree = match m.get("min_degree") {
        Some(d) => small(d, &format!("{path}.min_degree"))?,
        None => 0,
    };
    let rpath = format!("{path}.ranks");
    let ranks = array(field(m, "ranks", path)?, &rpath)?
        .iter()
        .enumerate()
        .map(|(k, x)| count(x, &format!("{rpath}[{k}]")))
        .collect::<FormatResult<Vec<_>>>()?;
    let dpath = format!("{path}.differentials");
    let diffs = array(field(m, "differentials", path)?, &dpath)?;
    if diffs.len() != ranks.len().saturating_sub(1) {
        return schema(&dpath, format!("{} differentials for {} ranks", diffs.len(), ranks.len()));
    }
    let mut ds = Vec::with_capacity(diffs.len());
    for (k, d) in diffs.iter().enumerate() {
        let p = format!("{dpath}[{k}]");
        let d = matrix(d, &p)?;
        expect_shape(&d, (ranks[k], ranks[k + 1]), &p)?;
        ds.push(d);
    }
    GradedChainComplex::new(r, min_degree, ranks, ds).or_else(|e| schema(&dpath, e.to_string()))
}

fn chain_value(c: &GradedChainComplex) -> Value {
    let Some(lo) = c.min_degree() else {
        return json!({ "min_degree": 0, "ranks": [], "differentials": [] });
    };
    let ranks: Vec<usize> = c.degrees().map(|n| c.rank(n)).collect();
    let diffs: Vec<Value> = c.degrees().skip(1).map(|n| matrix_value(&c.differential(n))).collect();
    json!({ "min_degree": lo, "ranks": ranks, "differentials": diffs })
}

fn blocks(v: &Value, path: &str) -> FormatResult<BlockFamily> {
    let mut out = BlockFamily::new();
    for (k, b) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{k}]");
        let m = object(b, &p)?;
        reject_unknown(m, &["degree", "matrix"], &p)?;
        let degree = small(field(m, "degree", &p)?, &format!("{p}.degree"))?;
        if out.insert(degree, matrix(field(m, "matrix", &p)?, &format!("{p}.matrix"))?).is_some() {
            return schema(&p, format!("degree {degree} repeated"));
        }
    }
    Ok(out)
}

fn blocks_value(b: &BlockFamily) -> Value {
    Value::Array(b.iter().map(|(d, m)| json!({ "degree": d, "matrix": matrix_value(m) })).collect())
}

/// Expected shape of a block `C(from)_m -> C(to)_{m + shift}`.
fn check_block_shapes(b: &BlockFamily, from: &FlowObject, to: &FlowObject, shift: i64, path: &str) -> FormatResult<()> {
    for (k, (&m, mat)) in b.iter().enumerate() {
        expect_shape(mat, (to.chain.rank(m + shift), from.chain.rank(m)), &format!("{path}[{k}].matrix"))?;
    }
    Ok(())
}

fn homology_value(h: &HomologySummary) -> Value {
    let ranks: Map<String, Value> = h.free_rank.iter().map(|(n, r)| (n.to_string(), Value::from(*r))).collect();
    let torsion: Map<String, Value> =
        h.torsion.iter().map(|(n, t)| (n.to_string(), Value::Array(t.iter().map(integer_value).collect()))).collect();
    json!({ "ranks": ranks, "torsion": torsion })
}

fn degree_key(k: &str, path: &str) -> FormatResult<i64> {
    k.parse().map_or_else(|_| schema(path, format!("`{k}` is not a degree")), Ok)
}

fn homology_summary(v: &Value, r: CoefficientRing, path: &str) -> FormatResult<HomologySummary> {
    let m = object(v, path)?;
    reject_unknown(m, &["ranks", "torsion"], path)?;
    let mut h = HomologySummary::empty(r);
    let rpath = format!("{path}.ranks");
    for (k, x) in object(field(m, "ranks", path)?, &rpath)? {
        let p = format!("{rpath}.{k}");
        let rank = count(x, &p)?;
        if rank > 0 {
            h.free_rank.insert(degree_key(k, &p)?, rank);
        }
    }
    if let Some(t) = m.get("torsion") {
        let tpath = format!("{path}.torsion");
        for (k, x) in object(t, &tpath)? {
            let p = format!("{tpath}.{k}");
            let factors = array(x, &p)?
                .iter()
                .enumerate()
                .map(|(i, f)| integer(f, &format!("{p}[{i}]")))
                .collect::<FormatResult<Vec<_>>>()?;
            if !factors.is_empty() {
                h.torsion.insert(degree_key(k, &p)?, factors);
            }
        }
    }
    Ok(h)
}

fn version(m: &Map<String, Value>) -> FormatResult<()> {
    let v = string(field(m, "format_version", "$")?, "$.format_version")?;
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        schema("$.format_version", format!("unsupported version `{v}`"))
    }
}

/// Parses and validates a category file.
pub fn parse_category(text: &str) -> FormatResult<CategoryFile> {
    let file = parse_category_unchecked(text)?;
    let issues = validate_category(&file.category);
    if issues.is_empty() {
        Ok(file)
    } else {
        Err(FormatError::Validation(issues))
    }
}

/// Parses a category file with schema and shape checks only; `D∘D = 0` is left to [`validate_category`].
pub fn parse_category_unchecked(text: &str) -> FormatResult<CategoryFile> {
    let root = parse_json(text)?;
    let m = object(&root, "$")?;
    reject_unknown(m, &["format_version", "ring", "objects", "correspondences", "oracle"], "$")?;
    version(m)?;
    let r = ring(field(m, "ring", "$")?, "$.ring")?;
    let mut f = FlowCategoryData::new(r);
    for (k, o) in array(field(m, "objects", "$")?, "$.objects")?.iter().enumerate() {
        let p = format!("$.objects[{k}]");
        let om = object(o, &p)?;
        reject_unknown(om, &["name", "index", "framing_rank", "orientable", "chain"], &p)?;
        let name = string(field(om, "name", &p)?, &format!("{p}.name"))?;
        if f.object(name).is_some() {
            return schema(&format!("{p}.name"), format!("duplicate object `{name}`"));
        }
        let mut obj = FlowObject::new(
            name,
            small(field(om, "index", &p)?, &format!("{p}.index"))?,
            small(field(om, "framing_rank", &p)?, &format!("{p}.framing_rank"))?,
            chain(field(om, "chain", &p)?, r, &format!("{p}.chain"))?,
        );
        if let Some(b) = om.get("orientable") {
            obj.orientable = boolean(b, &format!("{p}.orientable"))?;
        }
        f.objects.push(obj);
    }
    let cs = match m.get("correspondences") {
        Some(v) => array(v, "$.correspondences")?.as_slice(),
        None => &[],
    };
    for (k, c) in cs.iter().enumerate() {
        let p = format!("$.correspondences[{k}]");
        let cm = object(c, &p)?;
        reject_unknown(cm, &["from", "to", "blocks"], &p)?;
        let endpoint = |key: &str| -> FormatResult<&FlowObject> {
            let kp = format!("{p}.{key}");
            let name = string(field(cm, key, &p)?, &kp)?;
            f.object(name).map_or_else(|| schema(&kp, format!("unknown object `{name}`")), Ok)
        };
        let (from, to) = (endpoint("from")?, endpoint("to")?);
        let bpath = format!("{p}.blocks");
        let b = blocks(field(cm, "blocks", &p)?, &bpath)?;
        check_block_shapes(&b, from, to, from.framing_rank - to.framing_rank - 1, &bpath)?;
        f.correspondences.push(CorrespondenceMap::new(from.name.clone(), to.name.clone(), b));
    }
    let oracle = match m.get("oracle") {
        None => None,
        Some(o) => {
            let om = object(o, "$.oracle")?;
            reject_unknown(om, &["description", "expected_homology"], "$.oracle")?;
            Some(Oracle {
                description: string(field(om, "description", "$.oracle")?, "$.oracle.description")?.to_string(),
                expected_homology: homology_summary(
                    field(om, "expected_homology", "$.oracle")?,
                    r,
                    "$.oracle.expected_homology",
                )?,
            })
        }
    };
    Ok(CategoryFile { category: f, oracle })
}

/// Canonical text of a category file.
pub fn serialize_category(file: &CategoryFile) -> String {
    let f = &file.category;
    let objects: Vec<Value> = f
        .objects
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "index": o.index,
                "framing_rank": o.framing_rank,
                "orientable": o.orientable,
                "chain": chain_value(&o.chain),
            })
        })
        .collect();
    let correspondences: Vec<Value> = f
        .correspondences
        .iter()
        .map(|c| json!({ "from": c.from, "to": c.to, "blocks": blocks_value(&c.blocks) }))
        .collect();
    let mut root = json!({
        "format_version": FORMAT_VERSION,
        "ring": f.ring.to_string(),
        "objects": objects,
        "correspondences": correspondences,
    });
    if let Some(o) = &file.oracle {
        root["oracle"] =
            json!({ "description": o.description, "expected_homology": homology_value(&o.expected_homology) });
    }
    to_text(&root)
}

/// Parses bimodule blocks and checks their shapes against the two categories.
pub fn parse_bimodule(text: &str, source: &FlowCategoryData, target: &FlowCategoryData) -> FormatResult<BimoduleFile> {
    let root = parse_json(text)?;
    let m = object(&root, "$")?;
    reject_unknown(m, &["format_version", "blocks"], "$")?;
    version(m)?;
    let mut out = Vec::new();
    for (k, b) in array(field(m, "blocks", "$")?, "$.blocks")?.iter().enumerate() {
        let p = format!("$.blocks[{k}]");
        let bm = object(b, &p)?;
        reject_unknown(bm, &["from", "to", "blocks"], &p)?;
        let name = |key: &str, side: &FlowCategoryData| -> FormatResult<FlowObject> {
            let kp = format!("{p}.{key}");
            let n = string(field(bm, key, &p)?, &kp)?;
            side.object(n).cloned().map_or_else(|| schema(&kp, format!("unknown object `{n}`")), Ok)
        };
        let (from, to) = (name("from", source)?, name("to", target)?);
        let bpath = format!("{p}.blocks");
        let fam = blocks(field(bm, "blocks", &p)?, &bpath)?;
        check_block_shapes(&fam, &from, &to, from.framing_rank - to.framing_rank, &bpath)?;
        out.push(BimoduleBlock::new(from.name, to.name, fam));
    }
    Ok(BimoduleFile { blocks: out })
}

pub fn serialize_bimodule(file: &BimoduleFile) -> String {
    let blocks: Vec<Value> =
        file.blocks.iter().map(|b| json!({ "from": b.from, "to": b.to, "blocks": blocks_value(&b.blocks) })).collect();
    to_text(&json!({ "format_version": FORMAT_VERSION, "blocks": blocks }))
}
