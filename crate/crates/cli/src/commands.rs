//! One function per subcommand, each returning the JSON result and its text
//! rendering.

use std::fmt::Display;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use l2dim::amenability::{kesten_evidence, KestenReport};
use l2dim::betti::{alternating_betti_sum, betti as betti_engines, integrality_verdict};
use l2dim::burnside::{
    equivariant_euler, example9_table, global_character, hattori_stallings, integrality_condition_texts,
    integrality_conditions, l2_euler_of_element, subgroup_lattice, BurnsideElement, FiniteSubgroupTable,
    IntegralityCondition,
};
use l2dim::gcw::GammaCWComplex;
use l2dim::group::{FreeAbelianOracle, FreeGroupOracle, GroupElem, GroupOracle, GroupSpec};
use l2dim::io::{self, GroupWire, ModuleDocument};
use l2dim::pid;
use l2dim::rational::json::{ext_to_json, rat_to_json};
use l2dim::rational::parse_rat;
use l2dim::Rat;

use crate::render::table;
use crate::{CliError, Context, Outcome};

fn domain<E: Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn load_complex(ctx: &mut Context, path: &Path) -> Result<GammaCWComplex, CliError> {
    let text = ctx.read(path)?;
    Ok(io::complex_from_str(&text, &ctx.ingest_options())?)
}

fn load_table(ctx: &mut Context, path: &Path) -> Result<FiniteSubgroupTable, CliError> {
    let text = ctx.read(path)?;
    Ok(io::table_from_str(&text, &ctx.ingest_options())?)
}

fn load_module(ctx: &mut Context, path: &Path) -> Result<ModuleDocument, CliError> {
    let text = ctx.read(path)?;
    Ok(io::module_from_str(&text)?)
}

pub fn dim(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let doc = load_module(ctx, path)?;
    let m = &doc.module;
    let d = pid::extended_dimension(m).map_err(domain)?;
    let split = pid::torsion_projective_split(m).map_err(domain)?;
    let sub = doc.submodule.as_ref().map(pid::submodule_dimension).transpose().map_err(domain)?;
    let mut text = format!(
        "ring: {}\ngenerators: {}\ndimension: {d}\nprojective rank: {}\n",
        m.ring().name(),
        m.generator_count(),
        split.projective_rank
    );
    let factors: Vec<String> = split.invariant_factors.iter().map(|p| p.to_string()).collect();
    writeln!(text, "torsion invariant factors: [{}]", factors.join(", ")).unwrap();
    if let Some(s) = &sub {
        writeln!(text, "submodule dimension: {s}").unwrap();
    }
    Ok(Outcome {
        result: json!({
            "ring": m.ring(),
            "generators": m.generator_count(),
            "dimension": ext_to_json(&d),
            "projective_rank": split.projective_rank,
            "invariant_factors": split.invariant_factors.iter().map(io::poly_to_json).collect::<Vec<_>>(),
            "submodule_dimension": sub.as_ref().map(ext_to_json),
        }),
        text,
    })
}

pub fn closure(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let doc = load_module(ctx, path)?;
    let k = doc.submodule.as_ref().ok_or_else(|| CliError::Input("module file has no \"submodule\" to close".into()))?;
    let c = pid::closure(k).map_err(domain)?;
    let dk = pid::submodule_dimension(k).map_err(domain)?;
    let dc = pid::submodule_dimension(&c).map_err(domain)?;
    let mut text = format!("submodule dimension: {dk}\nclosure dimension: {dc}\nclosure generators:\n");
    for g in c.generators() {
        let entries: Vec<String> = g.iter().map(|p| p.to_string()).collect();
        writeln!(text, "  ({})", entries.join(", ")).unwrap();
    }
    let closed = ModuleDocument { module: doc.module.clone(), submodule: Some(c) };
    Ok(Outcome {
        result: json!({
            "submodule_dimension": ext_to_json(&dk),
            "closure_dimension": ext_to_json(&dc),
            "closure": io::module_to_json(&closed),
        }),
        text,
    })
}

pub fn colim(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let text = ctx.read(path)?;
    let chain = io::chain_from_str(&text)?;
    let d = pid::colimit_dimension(&chain).map_err(domain)?;
    let agree = d.direct == d.formula;
    Ok(Outcome {
        result: json!({
            "direct": ext_to_json(&d.direct),
            "formula": ext_to_json(&d.formula),
            "agree": agree,
        }),
        text: format!("dimension of colimit: {}\nsup-inf formula: {}\nagree: {agree}\n", d.direct, d.formula),
    })
}

pub fn betti(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let x = load_complex(ctx, path)?;
    let report = betti_engines(&x).map_err(domain)?;
    let verdict = integrality_verdict(&report);
    let mut text = format!("group: {}\nengine: {}\nd: {}\n", report.group, report.engine, report.d);
    for (p, v) in report.values.iter().enumerate() {
        writeln!(text, "b{p} = {v}").unwrap();
    }
    writeln!(text, "integrality: {}", verdict.holds).unwrap();
    Ok(Outcome { result: io::betti_report_to_json(&report), text })
}

pub fn euler(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let x = load_complex(ctx, path)?;
    let e = x.l2_euler_characteristic().map_err(domain)?;
    let betti_sum = betti_engines(&x).ok().and_then(|r| alternating_betti_sum(&r.values));
    let mut text = format!("chi = {}\nm = {}\n", e.chi, e.mass);
    if let Some(s) = &betti_sum {
        writeln!(text, "alternating sum of Betti numbers = {s}").unwrap();
    }
    Ok(Outcome {
        result: json!({
            "chi": rat_to_json(&e.chi),
            "mass": ext_to_json(&e.mass),
            "betti_alternating_sum": betti_sum.as_ref().map(rat_to_json),
        }),
        text,
    })
}

fn classes_json(t: &FiniteSubgroupTable) -> Value {
    Value::Array(
        t.classes()
            .iter()
            .map(|c| {
                let weyl = match c.weyl_order {
                    l2dim::gcw::StabilizerOrder::Finite(n) => json!(n),
                    l2dim::gcw::StabilizerOrder::Infinite => json!("inf"),
                };
                json!({ "id": c.id, "order": c.order, "weyl_order": weyl })
            })
            .collect(),
    )
}

fn matrix_text(t: &FiniteSubgroupTable) -> String {
    let ids: Vec<&str> = t.classes().iter().map(|c| c.id.as_str()).collect();
    let mut headers = vec!["K \\ H"];
    headers.extend(&ids);
    let rows: Vec<Vec<String>> = t
        .character_matrix()
        .iter()
        .zip(&ids)
        .map(|(row, id)| std::iter::once(id.to_string()).chain(row.iter().map(|v| v.to_string())).collect())
        .collect();
    table(&headers, &rows)
}

fn element_json(a: &BurnsideElement) -> Value {
    io::burnside_element_to_json(a)["coefficients"].clone()
}

fn vector_text(label: &str, t: &FiniteSubgroupTable, v: &[Rat]) -> String {
    let parts: Vec<String> = t.classes().iter().zip(v).map(|(c, x)| format!("{}: {x}", c.id)).collect();
    format!("{label}: {}\n", parts.join(", "))
}

fn conditions_json(cs: &[IntegralityCondition]) -> Value {
    Value::Array(
        cs.iter()
            .map(|c| json!({ "text": c.text, "range": c.range.map(|(a, b)| [a, b]), "display": c.to_string() }))
            .collect(),
    )
}

pub fn burnside(
    ctx: &mut Context,
    table_path: Option<&Path>,
    complex: Option<&Path>,
    element: Option<&Path>,
) -> Result<Outcome, CliError> {
    let x = complex.map(|p| load_complex(ctx, p)).transpose()?;
    let t = match (table_path, &x) {
        (Some(p), _) => load_table(ctx, p)?,
        (None, Some(x)) => match x.group() {
            GroupSpec::Finite(g) => subgroup_lattice(g, ctx.config.max_finite_group_order).map_err(domain)?,
            other => {
                return Err(CliError::Input(format!(
                    "--table is required for complexes over {}",
                    other.summary()
                )))
            }
        },
        (None, None) => return Err(CliError::Input("burnside needs --table or --complex".into())),
    };
    let a = match (&x, element) {
        (Some(x), _) => Some(equivariant_euler(x, &t).map_err(domain)?),
        (None, Some(p)) => Some(io::burnside_element_from_str(&ctx.read(p)?)?),
        (None, None) => None,
    };
    let mut result = json!({
        "classes": classes_json(&t),
        "character_matrix": io::rat_matrix_to_json(t.character_matrix()),
    });
    let mut text = matrix_text(&t);
    if let Some(a) = a {
        let eta = global_character(&t, &a).map_err(domain)?;
        let chi = l2_euler_of_element(&t, &a).map_err(domain)?;
        result["element"] = element_json(&a);
        result["global_character"] = io::rat_vector_to_json(&eta);
        result["l2_euler"] = rat_to_json(&chi);
        writeln!(text, "element: {a}").unwrap();
        text += &vector_text("global character", &t, &eta);
        writeln!(text, "chi = {chi}").unwrap();
    }
    Ok(Outcome { result, text })
}

pub fn example9(ctx: &mut Context, v: &[u64]) -> Result<Outcome, CliError> {
    let [n, p, r] = v else {
        return Err(CliError::Input(format!("--example9 takes n,p,r; got {} values", v.len())));
    };
    ctx.note(&format!("example9 {n},{p},{r}"));
    let e = example9_table(*n as usize, *p, *r as usize).map_err(domain)?;
    let mut text = matrix_text(&e.table);
    writeln!(text, "element: {}", e.element).unwrap();
    text += &vector_text("global character", &e.table, &e.global_character);
    writeln!(text, "chi = {}", e.l2_euler).unwrap();
    text += "integrality conditions:\n";
    for c in &e.conditions {
        writeln!(text, "  {c}").unwrap();
    }
    Ok(Outcome {
        result: json!({
            "classes": classes_json(&e.table),
            "character_matrix": io::rat_matrix_to_json(e.table.character_matrix()),
            "element": element_json(&e.element),
            "global_character": io::rat_vector_to_json(&e.global_character),
            "l2_euler": rat_to_json(&e.l2_euler),
            "conditions": conditions_json(&e.conditions),
        }),
        text,
    })
}

pub fn congruence(ctx: &mut Context, table_path: &Path, eta: &[String]) -> Result<Outcome, CliError> {
    let t = load_table(ctx, table_path)?;
    ctx.note(&eta.join(","));
    let eta = eta
        .iter()
        .map(|s| parse_rat(s).ok_or_else(|| CliError::Input(format!("--eta: {s:?} is not a rational"))))
        .collect::<Result<Vec<Rat>, CliError>>()?;
    if eta.len() != t.len() {
        return Err(CliError::Input(format!("--eta has {} entries but the table has {} classes", eta.len(), t.len())));
    }
    let report = integrality_conditions(&t, &eta).map_err(domain)?;
    let conditions = integrality_condition_texts(&t);
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|id| {
            let i = t.class_index(id).expect("witnesses are table classes");
            json!({ "class": id, "index": i, "value": rat_to_json(&report.preimage[i]) })
        })
        .collect();
    let mut text = format!("pass: {}\n", report.pass);
    text += &vector_text("preimage", &t, &report.preimage);
    for id in &report.witnesses {
        let i = t.class_index(id).expect("witnesses are table classes");
        writeln!(text, "witness: xi_{i} ({id}) = {}", report.preimage[i]).unwrap();
    }
    text += "conditions:\n";
    for c in &conditions {
        writeln!(text, "  {c}").unwrap();
    }
    Ok(Outcome {
        result: json!({
            "pass": report.pass,
            "preimage": io::rat_vector_to_json(&report.preimage),
            "witnesses": witnesses,
            "conditions": conditions_json(&conditions),
        }),
        text,
    })
}

pub fn hs(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let text = ctx.read(path)?;
    let m = io::group_ring_matrix_from_str(&text, &ctx.ingest_options())?;
    let cf = hattori_stallings(&m.group, &m.rows).map_err(domain)?;
    let rows: Vec<Vec<String>> = cf.values.iter().map(|(l, v)| vec![l.clone(), v.to_string()]).collect();
    Ok(Outcome {
        result: json!({
            "values": cf.values.iter().map(|(l, v)| json!([l, rat_to_json(v)])).collect::<Vec<_>>(),
        }),
        text: table(&["class", "value"], &rows),
    })
}

fn parse_group(s: &str, ctx: &Context) -> Result<GroupSpec, CliError> {
    let s = s.trim();
    let number = |t: &str| t.parse::<usize>().map_err(|_| CliError::Input(format!("--group: cannot read {s:?}")));
    let preset = |name: &str, n: Option<usize>| {
        io::group_from_wire(
            GroupWire::Finite { table: None, names: None, preset: Some(name.into()), n },
            &ctx.ingest_options(),
        )
        .map_err(CliError::from)
    };
    if s == "Z" {
        return Ok(GroupSpec::FreeAbelian { rank: 1 });
    }
    if let Some(n) = s.strip_prefix("Z^") {
        return GroupSpec::free_abelian(number(n)?).map_err(|e| CliError::Input(e.to_string()));
    }
    if let Some(n) = s.strip_prefix("Z/") {
        return preset("cyclic", Some(number(n)?));
    }
    if s == "V4" || s == "klein" {
        return preset("klein", None);
    }
    if let Some(k) = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')) {
        return GroupSpec::free(number(k)?).map_err(|e| CliError::Input(e.to_string()));
    }
    for (prefix, name) in [("D", "dihedral"), ("S", "symmetric"), ("A", "alternating")] {
        if let Some(n) = s.strip_prefix(prefix) {
            return preset(name, Some(number(n)?));
        }
    }
    Err(CliError::Input(format!("--group: unknown group {s:?}")))
}

fn kesten_outcome<O: GroupOracle>(
    oracle: &O,
    generators: &[O::Elem],
    steps: usize,
    margin: &Rat,
    bound: usize,
) -> Result<Outcome, CliError> {
    let r: KestenReport = kesten_evidence(oracle, generators, steps, margin, bound).map_err(domain)?;
    let rows: Vec<Vec<String>> = (0..r.steps)
        .map(|i| {
            vec![
                (i + 1).to_string(),
                r.probabilities[i].to_string(),
                r.root_bounds[i].clone(),
                r.ratio_bounds[i].clone(),
                r.lower_bounds[i].clone(),
            ]
        })
        .collect();
    let mut text = format!("generators: {}\nmargin: {}\n", r.generators.join(", "), r.margin);
    text += &table(&["n", "p_2n", "root bound", "ratio bound", "lower bound"], &rows);
    if let Some(rho) = &r.radius_squared {
        writeln!(text, "spectral radius squared: {rho}").unwrap();
    }
    writeln!(text, "verdict: {}", r.verdict).unwrap();
    Ok(Outcome { result: io::kesten_report_to_json(&r), text })
}

pub fn amenable(
    ctx: &mut Context,
    group: &str,
    generators: Option<&str>,
    steps: usize,
    margin: &str,
) -> Result<Outcome, CliError> {
    ctx.note(&format!("{group}|{}|{steps}|{margin}", generators.unwrap_or("")));
    let margin = parse_rat(margin).ok_or_else(|| CliError::Input(format!("--margin: {margin:?} is not a rational")))?;
    let g = parse_group(group, ctx)?;
    let given = generators
        .map(|text| -> Result<Vec<GroupElem>, CliError> {
            let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("--generators: {e}")))?;
            let items = v.as_array().ok_or_else(|| CliError::Input("--generators must be a JSON array".into()))?;
            items
                .iter()
                .enumerate()
                .map(|(i, x)| io::element_from_json(&g, x, &format!("generators[{i}]")).map_err(CliError::from))
                .collect()
        })
        .transpose()?;
    let bound = ctx.config.walk_support_bound;
    match &g {
        GroupSpec::FreeAbelian { rank } => {
            let oracle = FreeAbelianOracle { rank: *rank };
            let gens: Vec<Vec<i64>> = match given {
                Some(v) => v.into_iter().map(|x| match x { GroupElem::Abelian(a) => a, _ => unreachable!() }).collect(),
                None => (0..*rank)
                    .flat_map(|i| {
                        let mut e = vec![0; *rank];
                        e[i] = 1;
                        [e.clone(), e.iter().map(|x| -x).collect()]
                    })
                    .collect(),
            };
            kesten_outcome(&oracle, &gens, steps, &margin, bound)
        }
        GroupSpec::Free { rank } => {
            let oracle = FreeGroupOracle { rank: *rank };
            let gens: Vec<Vec<i32>> = match given {
                Some(v) => v.into_iter().map(|x| match x { GroupElem::Word(w) => w, _ => unreachable!() }).collect(),
                None => oracle.standard_generators(),
            };
            kesten_outcome(&oracle, &gens, steps, &margin, bound)
        }
        GroupSpec::Finite(fg) => {
            let gens: Vec<usize> = match given {
                Some(v) => v.into_iter().map(|x| match x { GroupElem::Finite(i) => i, _ => unreachable!() }).collect(),
                None => (0..fg.order()).filter(|&i| i != fg.identity()).collect(),
            };
            kesten_outcome(fg, &gens, steps, &margin, bound)
        }
        GroupSpec::Declared { name } => Err(CliError::Input(format!("--group: {name} has no word problem oracle"))),
    }
}

pub fn validate(ctx: &mut Context, kind: &str, path: &Path) -> Result<Outcome, CliError> {
    let text = ctx.read(path)?;
    let options = ctx.ingest_options();
    let summary = match kind {
        "complex" => {
            let x = io::complex_from_str(&text, &options)?;
            json!({
                "group": x.group().summary(),
                "cells": x.cells().len(),
                "dimension": x.dimension(),
                "connected": x.connected(),
            })
        }
        "table" => {
            let t = io::table_from_str(&text, &options)?;
            json!({ "classes": t.len(), "provenance": format!("{:?}", t.provenance()) })
        }
        "module" => {
            let d = io::module_from_str(&text)?;
            json!({
                "ring": d.module.ring(),
                "generators": d.module.generator_count(),
                "relations": d.module.relations().rows(),
                "submodule": d.submodule.as_ref().map(|k| k.generators().len()),
            })
        }
        "chain" => {
            let c = io::chain_from_str(&text)?;
            json!({ "ring": c.ring(), "modules": c.modules() })
        }
        "matrix" => {
            let m = io::group_ring_matrix_from_str(&text, &options)?;
            json!({ "group": m.group.summary(), "size": m.rows.len() })
        }
        _ => {
            let a = io::burnside_element_from_str(&text)?;
            json!({ "classes": a.coefficients.len() })
        }
    };
    let mut lines = format!("{kind}: valid\n");
    if let Value::Object(map) = &summary {
        for (k, v) in map {
            writeln!(lines, "{k}: {v}").unwrap();
        }
    }
    Ok(Outcome { result: json!({ "kind": kind, "valid": true, "summary": summary }), text: lines })
}
