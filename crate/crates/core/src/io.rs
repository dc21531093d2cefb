//! Versioned JSON documents for complexes, subgroup tables, module
//! presentations, directed chains, idempotent matrices, Burnside elements
//! and computed reports.
//!
//! Every document carries `"format": 1`. Rationals are `[num, den]` with
//! integers beyond 2⁵³ written as decimal strings, and `+∞` is `"inf"`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::amenability::{KestenReport, Verdict};
use crate::betti::{integrality_verdict, BettiReport, Engine};
use crate::burnside::{
    subgroup_lattice, BurnsideElement, BurnsideError, FiniteSubgroupTable, Provenance, SubgroupClass,
    DEFAULT_MAX_ORDER,
};
use crate::gcw::{group_ring, Cell, GammaCWComplex, GcwError, GroupRingElem, Stabilizer, StabilizerOrder};
use crate::group::{FiniteGroup, GroupElem, GroupError, GroupSpec};
use crate::linalg::{LaurentPoly, LinalgError, RingMatrix, RingTag};
use crate::pid::{DimError, DirectedChain, FgModulePresentation, SubmoduleSpec};
use crate::rational::json::{ext_from_json, ext_to_json, int_from_json, int_to_json, rat_from_json, rat_to_json};
use crate::rational::{ExtDim, Rat};

pub const FORMAT: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported format version {0}, expected 1")]
    Format(u64),
    #[error("invalid group: {0}")]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] GcwError),
    #[error("invalid module data: {0}")]
    Module(#[from] DimError),
    #[error("invalid subgroup table: {0}")]
    Table(#[from] BurnsideError),
    #[error("invalid matrix: {0}")]
    Linalg(#[from] LinalgError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema { path: path.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IngestOptions {
    /// Largest finite group accepted and used for subgroup enumeration.
    pub max_finite_order: usize,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions { max_finite_order: DEFAULT_MAX_ORDER }
    }
}

/// Deserializes a document, reporting the JSON path of any schema violation.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            IoError::Syntax(inner.to_string())
        } else {
            schema(path, inner.to_string())
        }
    })?;
    de.end().map_err(|e| IoError::Syntax(e.to_string()))?;
    Ok(value)
}

fn check_format(format: u64) -> Result<(), IoError> {
    if format == FORMAT { Ok(()) } else { Err(IoError::Format(format)) }
}

fn to_value<T: Serialize>(wire: &T) -> Value {
    serde_json::to_value(wire).expect("wire types serialize")
}

/// A rational in `[num, den]` form; integers and `"a/b"` strings are also
/// accepted on input.
#[derive(Clone, Debug, PartialEq)]
pub struct JRat(pub Rat);

impl Serialize for JRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rat_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for JRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        rat_from_json(&v)
            .map(JRat)
            .ok_or_else(|| serde::de::Error::custom(format!("expected a rational [num, den], got {v}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JExt(pub ExtDim);

impl Serialize for JExt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ext_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for JExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ext_from_json(&v)
            .map(JExt)
            .ok_or_else(|| serde::de::Error::custom(format!("expected [num, den] or \"inf\", got {v}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JInt(pub BigInt);

impl Serialize for JInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for JInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        int_from_json(&v)
            .map(JInt)
            .ok_or_else(|| serde::de::Error::custom(format!("expected an integer, got {v}")))
    }
}

fn order_to_json(o: StabilizerOrder) -> Value {
    match o {
        StabilizerOrder::Finite(n) => json!(n),
        StabilizerOrder::Infinite => json!("inf"),
    }
}

fn order_from_json(v: &Value, path: &str) -> Result<StabilizerOrder, IoError> {
    match v {
        Value::String(s) if s == "inf" => Ok(StabilizerOrder::Infinite),
        _ => v
            .as_u64()
            .filter(|&n| n > 0)
            .map(|n| StabilizerOrder::Finite(n as usize))
            .ok_or_else(|| schema(path, "expected a positive integer or \"inf\"")),
    }
}

// groups

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupWire {
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
        /// `cyclic`, `dihedral`, `symmetric`, `alternating` or `klein`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    FreeAbelian {
        rank: usize,
    },
    Free {
        rank: usize,
    },
    Declared {
        name: String,
    },
}

fn factorial(n: usize) -> usize {
    (1..=n).try_fold(1usize, |a, b| a.checked_mul(b)).unwrap_or(usize::MAX)
}

fn preset_group(preset: &str, n: Option<usize>, max: usize) -> Result<FiniteGroup, IoError> {
    let need = |n: Option<usize>| n.filter(|&n| n >= 1).ok_or_else(|| schema("group.n", "preset needs n ≥ 1"));
    let order = match preset {
        "cyclic" => need(n)?,
        "dihedral" => need(n)?.saturating_mul(2),
        "symmetric" => factorial(need(n)?),
        "alternating" => factorial(need(n)?).div_ceil(2),
        "klein" => 4,
        other => return Err(schema("group.preset", format!("unknown preset {other:?}"))),
    };
    if order > max {
        return Err(schema("group", format!("group order {order} exceeds the bound {max}")));
    }
    Ok(match preset {
        "cyclic" => FiniteGroup::cyclic(order),
        "dihedral" => FiniteGroup::dihedral(order / 2),
        "symmetric" => FiniteGroup::symmetric(n.unwrap_or(1)),
        "alternating" => FiniteGroup::alternating(n.unwrap_or(1)),
        _ => FiniteGroup::klein(),
    })
}

pub fn group_from_wire(wire: GroupWire, options: &IngestOptions) -> Result<GroupSpec, IoError> {
    Ok(match wire {
        GroupWire::Finite { table: Some(table), names, preset: None, n: None } => {
            if table.len() > options.max_finite_order {
                return Err(schema(
                    "group.table",
                    format!("group order {} exceeds the bound {}", table.len(), options.max_finite_order),
                ));
            }
            GroupSpec::Finite(FiniteGroup::new(table, names)?)
        }
        GroupWire::Finite { table: None, names: None, preset: Some(p), n } => {
            GroupSpec::Finite(preset_group(&p, n, options.max_finite_order)?)
        }
        GroupWire::Finite { .. } => {
            return Err(schema("group", "finite group needs either \"table\" (with optional \"names\") or \"preset\""))
        }
        GroupWire::FreeAbelian { rank } => GroupSpec::free_abelian(rank)?,
        GroupWire::Free { rank } => GroupSpec::free(rank)?,
        GroupWire::Declared { name } => GroupSpec::Declared { name },
    })
}

pub fn group_to_wire(g: &GroupSpec) -> GroupWire {
    match g {
        GroupSpec::Finite(f) => GroupWire::Finite {
            table: Some(f.table().to_vec()),
            names: Some(f.names().to_vec()),
            preset: None,
            n: None,
        },
        GroupSpec::FreeAbelian { rank } => GroupWire::FreeAbelian { rank: *rank },
        GroupSpec::Free { rank } => GroupWire::Free { rank: *rank },
        GroupSpec::Declared { name } => GroupWire::Declared { name: name.clone() },
    }
}

/// Index or name (finite), exponent vector (free abelian), reduced word of
/// nonzero letters `±i` (free).
pub fn element_from_json(group: &GroupSpec, v: &Value, path: &str) -> Result<GroupElem, IoError> {
    let bad = |what: &str| schema(path, format!("expected {what}, got {v}"));
    let x = match group {
        GroupSpec::Finite(g) => match v {
            Value::String(s) => GroupElem::Finite(g.element_by_name(s).ok_or_else(|| bad("an element name"))?),
            _ => GroupElem::Finite(v.as_u64().ok_or_else(|| bad("an element index"))? as usize),
        },
        GroupSpec::FreeAbelian { .. } => {
            GroupElem::Abelian(serde_json::from_value(v.clone()).map_err(|_| bad("an exponent vector"))?)
        }
        GroupSpec::Free { .. } => {
            GroupElem::Word(serde_json::from_value(v.clone()).map_err(|_| bad("a word of nonzero letters"))?)
        }
        GroupSpec::Declared { name } => {
            return Err(schema(path, format!("group {name} is declared by name and has no elements")))
        }
    };
    group.check(&x).map_err(|e| schema(path, e.to_string()))?;
    Ok(x)
}

pub fn element_to_json(x: &GroupElem) -> Value {
    match x {
        GroupElem::Finite(i) => json!(i),
        GroupElem::Abelian(v) => json!(v),
        GroupElem::Word(w) => json!(w),
    }
}

type TermWire = (Value, JInt, JInt);

fn group_ring_from_wire(group: &GroupSpec, terms: &[TermWire], path: &str) -> Result<GroupRingElem, IoError> {
    let mut out = Vec::with_capacity(terms.len());
    for (i, (x, num, den)) in terms.iter().enumerate() {
        let here = format!("{path}[{i}]");
        if den.0.is_zero() {
            return Err(schema(format!("{here}[2]"), "zero denominator"));
        }
        out.push((element_from_json(group, x, &format!("{here}[0]"))?, Rat::new(num.0.clone(), den.0.clone())));
    }
    Ok(group_ring(out))
}

fn group_ring_to_wire(a: &GroupRingElem) -> Vec<TermWire> {
    a.iter()
        .map(|(x, c)| (element_to_json(x), JInt(c.numer().clone()), JInt(c.denom().clone())))
        .collect()
}

// complexes

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexWire {
    format: u64,
    group: GroupWire,
    cells: Vec<CellWire>,
    connected: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellWire {
    id: String,
    dim: usize,
    #[serde(default = "trivial_stabilizer")]
    stabilizer: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    boundary: Vec<(String, Vec<TermWire>)>,
}

fn trivial_stabilizer() -> Value {
    json!("trivial")
}

fn stabilizer_from_json(
    group: &GroupSpec,
    v: &Value,
    path: &str,
    lattice: &mut Option<FiniteSubgroupTable>,
    options: &IngestOptions,
) -> Result<Stabilizer, IoError> {
    match v {
        Value::String(s) if s == "trivial" => Ok(Stabilizer::Trivial),
        Value::String(class) => match group {
            GroupSpec::Finite(g) => {
                if lattice.is_none() {
                    *lattice = Some(subgroup_lattice(g, options.max_finite_order)?);
                }
                let table = lattice.as_ref().expect("lattice computed");
                let i = table.class_index(class).map_err(|e| schema(path, e.to_string()))?;
                let l = table.lattice().expect("computed tables carry their lattice");
                Ok(Stabilizer::Subgroup(l.representative(i).to_vec()))
            }
            _ => Ok(Stabilizer::Declared { class: class.clone(), order: None }),
        },
        Value::Object(map) if map.contains_key("elements") => {
            let GroupSpec::Finite(g) = group else {
                return Err(schema(path, "explicit stabilizer elements need a finite group"));
            };
            let items = map["elements"].as_array().ok_or_else(|| schema(format!("{path}.elements"), "expected an array"))?;
            let elems = items
                .iter()
                .enumerate()
                .map(|(i, x)| match element_from_json(group, x, &format!("{path}.elements[{i}]"))? {
                    GroupElem::Finite(e) => Ok(e),
                    _ => unreachable!("finite groups have finite elements"),
                })
                .collect::<Result<Vec<usize>, IoError>>()?;
            Ok(Stabilizer::Subgroup(g.subgroup(&elems).map_err(|e| schema(path, e.to_string()))?))
        }
        Value::Object(map) if map.contains_key("class") => {
            if let Some(k) = map.keys().find(|k| *k != "class" && *k != "order") {
                return Err(schema(path, format!("unknown field {k:?}")));
            }
            let class = map["class"].as_str().ok_or_else(|| schema(format!("{path}.class"), "expected a string"))?;
            let order = map.get("order").map(|o| order_from_json(o, &format!("{path}.order"))).transpose()?;
            Ok(Stabilizer::Declared { class: class.to_owned(), order })
        }
        _ => Err(schema(path, "expected \"trivial\", a class id, {\"elements\": [...]} or {\"class\", \"order\"}")),
    }
}

fn stabilizer_to_json(s: &Stabilizer) -> Value {
    match s {
        Stabilizer::Trivial => json!("trivial"),
        Stabilizer::Subgroup(v) => json!({ "elements": v }),
        Stabilizer::Declared { class, order: None } => json!({ "class": class }),
        Stabilizer::Declared { class, order: Some(o) } => json!({ "class": class, "order": order_to_json(*o) }),
    }
}

/// Reads and validates a complex document.
pub fn complex_from_str(text: &str, options: &IngestOptions) -> Result<GammaCWComplex, IoError> {
    let wire: ComplexWire = parse_document(text)?;
    check_format(wire.format)?;
    let group = group_from_wire(wire.group, options)?;
    let mut lattice = None;
    let mut cells = Vec::with_capacity(wire.cells.len());
    for (i, c) in wire.cells.into_iter().enumerate() {
        let path = format!("cells[{i}]");
        let stabilizer =
            stabilizer_from_json(&group, &c.stabilizer, &format!("{path}.stabilizer"), &mut lattice, options)?;
        let mut cell = Cell::new(c.id, c.dim, stabilizer);
        for (j, (target, terms)) in c.boundary.iter().enumerate() {
            let a = group_ring_from_wire(&group, terms, &format!("{path}.boundary[{j}][1]"))?;
            cell = cell.with_boundary(target.clone(), a);
        }
        cells.push(cell);
    }
    let x = GammaCWComplex::new(group, cells, wire.connected);
    x.validated()?;
    Ok(x)
}

pub fn complex_to_json(x: &GammaCWComplex) -> Value {
    let cells = x
        .cells()
        .iter()
        .map(|c| CellWire {
            id: c.id.clone(),
            dim: c.dim,
            stabilizer: stabilizer_to_json(&c.stabilizer),
            boundary: c.boundary.iter().map(|(t, a)| (t.clone(), group_ring_to_wire(a))).collect(),
        })
        .collect();
    to_value(&ComplexWire { format: FORMAT, group: group_to_wire(x.group()), cells, connected: x.connected() })
}

// subgroup tables

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassWire {
    id: String,
    order: usize,
    weyl_order: Value,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableWire {
    format: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<GroupWire>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    classes: Vec<ClassWire>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    subconjugacy: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    character: Vec<(String, String, JInt, JInt)>,
}

/// A table document: either `{"group": finite group}`, computed from the
/// group, or explicit `classes`, `subconjugacy` and `character` data.
pub fn table_from_str(text: &str, options: &IngestOptions) -> Result<FiniteSubgroupTable, IoError> {
    let wire: TableWire = parse_document(text)?;
    check_format(wire.format)?;
    if let Some(g) = wire.group {
        if !(wire.classes.is_empty() && wire.subconjugacy.is_empty() && wire.character.is_empty()) {
            return Err(schema("", "a table is given either by \"group\" or by explicit classes, not both"));
        }
        let GroupSpec::Finite(g) = group_from_wire(g, options)? else {
            return Err(schema("group", "subgroup tables are computed only for finite groups"));
        };
        return Ok(subgroup_lattice(&g, options.max_finite_order)?);
    }
    let classes = wire
        .classes
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(SubgroupClass {
                id: c.id,
                order: c.order,
                weyl_order: order_from_json(&c.weyl_order, &format!("classes[{i}].weyl_order"))?,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let character = wire
        .character
        .into_iter()
        .enumerate()
        .map(|(i, (k, h, n, d))| {
            if d.0.is_zero() {
                Err(schema(format!("character[{i}][3]"), "zero denominator"))
            } else {
                Ok((k, h, Rat::new(n.0, d.0)))
            }
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(FiniteSubgroupTable::user_supplied(classes, &wire.subconjugacy, &character)?)
}

pub fn table_to_json(t: &FiniteSubgroupTable) -> Value {
    if let (Provenance::ComputedFromFiniteGroup, Some(l)) = (t.provenance(), t.lattice()) {
        return to_value(&TableWire {
            format: FORMAT,
            group: Some(group_to_wire(&GroupSpec::Finite(l.group.clone()))),
            classes: Vec::new(),
            subconjugacy: Vec::new(),
            character: Vec::new(),
        });
    }
    let classes = t.classes();
    let mut subconjugacy = Vec::new();
    let mut character = Vec::new();
    for (k, h) in t.subconjugacy_pairs() {
        let v = &t.character_matrix()[k][h];
        if k != h {
            subconjugacy.push((classes[k].id.clone(), classes[h].id.clone()));
        }
        character.push((classes[k].id.clone(), classes[h].id.clone(), JInt(v.numer().clone()), JInt(v.denom().clone())));
    }
    to_value(&TableWire {
        format: FORMAT,
        group: None,
        classes: classes
            .iter()
            .map(|c| ClassWire { id: c.id.clone(), order: c.order, weyl_order: order_to_json(c.weyl_order) })
            .collect(),
        subconjugacy,
        character,
    })
}

// modules and chains

/// Constants are rationals; Laurent polynomials are lists of terms
/// `[[e₁, …, eₙ], num, den]`.
pub fn poly_from_json(ring: RingTag, v: &Value, path: &str) -> Result<LaurentPoly, IoError> {
    let n = ring.arity();
    let is_term_list =
        matches!(v, Value::Array(items) if items.iter().all(|t| matches!(t, Value::Array(a) if a.first().is_some_and(Value::is_array))));
    let p = if n > 0 && is_term_list {
        let mut terms = Vec::new();
        for (i, t) in v.as_array().expect("checked array").iter().enumerate() {
            let here = format!("{path}[{i}]");
            let parts = t.as_array().expect("checked array");
            if parts.len() != 3 {
                return Err(schema(here, "expected a term [[exponents], num, den]"));
            }
            let e: Vec<i64> = serde_json::from_value(parts[0].clone())
                .map_err(|_| schema(format!("{here}[0]"), "expected integer exponents"))?;
            if e.len() != n {
                return Err(schema(format!("{here}[0]"), format!("expected {n} exponents, got {}", e.len())));
            }
            let c = rat_from_json(&Value::Array(parts[1..].to_vec()))
                .ok_or_else(|| schema(format!("{here}[1]"), "expected a coefficient num, den"))?;
            terms.push((e, c));
        }
        LaurentPoly::from_terms(n, terms)
    } else {
        let c = rat_from_json(v).ok_or_else(|| schema(path, format!("expected a ring element, got {v}")))?;
        LaurentPoly::constant(n, c)
    };
    if !ring.contains(&p) {
        return Err(schema(path, format!("{v} is not an element of {}", ring.name())));
    }
    Ok(p)
}

pub fn poly_to_json(p: &LaurentPoly) -> Value {
    match p.as_constant() {
        Some(c) if p.nvars() == 0 => rat_to_json(&c),
        _ => Value::Array(
            p.terms()
                .map(|(e, c)| json!([e, int_to_json(c.numer()), int_to_json(c.denom())]))
                .collect(),
        ),
    }
}

fn matrix_from_rows(ring: RingTag, rows: &[Vec<Value>], cols: usize, path: &str) -> Result<RingMatrix, IoError> {
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(schema(format!("{path}[{i}]"), format!("expected {cols} entries, got {}", row.len())));
        }
        for (j, v) in row.iter().enumerate() {
            entries.push(poly_from_json(ring, v, &format!("{path}[{i}][{j}]"))?);
        }
    }
    Ok(RingMatrix::new(ring, rows.len(), cols, entries)?)
}

fn matrix_to_rows(m: &RingMatrix) -> Vec<Vec<Value>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(poly_to_json).collect()).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleWire {
    format: u64,
    ring: RingTag,
    generators: usize,
    relations: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    submodule: Option<Vec<Vec<Value>>>,
}

/// A presentation `M = Rⁿ / rowspace(relations)`, optionally with
/// generators of a submodule `K ⊆ M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleDocument {
    pub module: FgModulePresentation,
    pub submodule: Option<SubmoduleSpec>,
}

pub fn module_from_str(text: &str) -> Result<ModuleDocument, IoError> {
    let wire: ModuleWire = parse_document(text)?;
    check_format(wire.format)?;
    if !wire.ring.is_valid() {
        return Err(schema("ring", "laurent_multi needs at least one variable"));
    }
    let relations = matrix_from_rows(wire.ring, &wire.relations, wire.generators, "relations")?;
    let module = FgModulePresentation::new(relations);
    let submodule = match wire.submodule {
        None => None,
        Some(rows) => {
            let gens = matrix_from_rows(wire.ring, &rows, wire.generators, "submodule")?;
            Some(SubmoduleSpec::new(module.clone(), gens.to_rows())?)
        }
    };
    Ok(ModuleDocument { module, submodule })
}

pub fn module_to_json(doc: &ModuleDocument) -> Value {
    let m = &doc.module;
    to_value(&ModuleWire {
        format: FORMAT,
        ring: m.ring(),
        generators: m.generator_count(),
        relations: matrix_to_rows(m.relations()),
        submodule: doc
            .submodule
            .as_ref()
            .map(|k| k.generators().iter().map(|g| g.iter().map(poly_to_json).collect()).collect()),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainWire {
    format: u64,
    ring: RingTag,
    modules: Vec<usize>,
    maps: Vec<Vec<Vec<Value>>>,
}

/// Free modules `R^{n_i}` with maps `φ_i : R^{n_i} → R^{n_{i+1}}` given as
/// `n_i × n_{i+1}` matrices acting on row vectors.
pub fn chain_from_str(text: &str) -> Result<DirectedChain, IoError> {
    let wire: ChainWire = parse_document(text)?;
    check_format(wire.format)?;
    if !wire.ring.is_valid() {
        return Err(schema("ring", "laurent_multi needs at least one variable"));
    }
    if wire.maps.len() + 1 != wire.modules.len() {
        return Err(schema("maps", format!("expected {} maps for {} modules", wire.modules.len().saturating_sub(1), wire.modules.len())));
    }
    let maps = wire
        .maps
        .iter()
        .enumerate()
        .map(|(i, rows)| {
            if rows.len() != wire.modules[i] {
                return Err(schema(format!("maps[{i}]"), format!("expected {} rows, got {}", wire.modules[i], rows.len())));
            }
            matrix_from_rows(wire.ring, rows, wire.modules[i + 1], &format!("maps[{i}]"))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(DirectedChain::new(wire.ring, wire.modules, maps)?)
}

pub fn chain_to_json(c: &DirectedChain) -> Value {
    to_value(&ChainWire {
        format: FORMAT,
        ring: c.ring(),
        modules: c.modules().to_vec(),
        maps: c.maps().iter().map(matrix_to_rows).collect(),
    })
}

// idempotent matrices over group rings

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRingMatrixWire {
    format: u64,
    group: GroupWire,
    matrix: Vec<Vec<Vec<TermWire>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingMatrix {
    pub group: GroupSpec,
    pub rows: Vec<Vec<GroupRingElem>>,
}

pub fn group_ring_matrix_from_str(text: &str, options: &IngestOptions) -> Result<GroupRingMatrix, IoError> {
    let wire: GroupRingMatrixWire = parse_document(text)?;
    check_format(wire.format)?;
    let group = group_from_wire(wire.group, options)?;
    let n = wire.matrix.len();
    let mut rows = Vec::with_capacity(n);
    for (i, row) in wire.matrix.iter().enumerate() {
        if row.len() != n {
            return Err(schema(format!("matrix[{i}]"), format!("expected a square matrix with {n} columns")));
        }
        rows.push(
            row.iter()
                .enumerate()
                .map(|(j, terms)| group_ring_from_wire(&group, terms, &format!("matrix[{i}][{j}]")))
                .collect::<Result<Vec<_>, IoError>>()?,
        );
    }
    Ok(GroupRingMatrix { group, rows })
}

pub fn group_ring_matrix_to_json(m: &GroupRingMatrix) -> Value {
    to_value(&GroupRingMatrixWire {
        format: FORMAT,
        group: group_to_wire(&m.group),
        matrix: m.rows.iter().map(|r| r.iter().map(group_ring_to_wire).collect()).collect(),
    })
}

// Burnside elements

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementWire {
    format: u64,
    coefficients: BTreeMap<String, JRat>,
}

pub fn burnside_element_from_str(text: &str) -> Result<BurnsideElement, IoError> {
    let wire: ElementWire = parse_document(text)?;
    check_format(wire.format)?;
    let mut a = BurnsideElement::new();
    for (k, v) in wire.coefficients {
        a.add(&k, v.0);
    }
    Ok(a)
}

pub fn burnside_element_to_json(a: &BurnsideElement) -> Value {
    to_value(&ElementWire {
        format: FORMAT,
        coefficients: a.coefficients.iter().map(|(k, v)| (k.clone(), JRat(v.clone()))).collect(),
    })
}

// reports

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BettiWire {
    group: String,
    engine: Engine,
    values: Vec<JExt>,
    d: usize,
    integrality: bool,
}

pub fn betti_report_to_json(r: &BettiReport) -> Value {
    to_value(&BettiWire {
        group: r.group.clone(),
        engine: r.engine,
        values: r.values.iter().cloned().map(JExt).collect(),
        d: r.d,
        integrality: integrality_verdict(r).holds,
    })
}

pub fn betti_report_from_json(v: &Value) -> Result<BettiReport, IoError> {
    let w: BettiWire = parse_document(&v.to_string())?;
    Ok(BettiReport { group: w.group, values: w.values.into_iter().map(|e| e.0).collect(), engine: w.engine, d: w.d })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KestenWire {
    generators: Vec<String>,
    steps: usize,
    margin: JRat,
    probabilities: Vec<JRat>,
    root_bounds: Vec<String>,
    ratio_bounds: Vec<String>,
    lower_bounds: Vec<String>,
    radius_squared: Option<JRat>,
    verdict: Verdict,
}

pub fn kesten_report_to_json(r: &KestenReport) -> Value {
    to_value(&KestenWire {
        generators: r.generators.clone(),
        steps: r.steps,
        margin: JRat(r.margin.clone()),
        probabilities: r.probabilities.iter().cloned().map(JRat).collect(),
        root_bounds: r.root_bounds.clone(),
        ratio_bounds: r.ratio_bounds.clone(),
        lower_bounds: r.lower_bounds.clone(),
        radius_squared: r.radius_squared.clone().map(JRat),
        verdict: r.verdict,
    })
}

pub fn kesten_report_from_json(v: &Value) -> Result<KestenReport, IoError> {
    let w: KestenWire = parse_document(&v.to_string())?;
    Ok(KestenReport {
        generators: w.generators,
        steps: w.steps,
        margin: w.margin.0,
        probabilities: w.probabilities.into_iter().map(|r| r.0).collect(),
        root_bounds: w.root_bounds,
        ratio_bounds: w.ratio_bounds,
        lower_bounds: w.lower_bounds,
        radius_squared: w.radius_squared.map(|r| r.0),
        verdict: w.verdict,
    })
}

pub fn rat_vector_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn rat_matrix_to_json(m: &[Vec<Rat>]) -> Value {
    Value::Array(m.iter().map(|r| rat_vector_to_json(r)).collect())
}
