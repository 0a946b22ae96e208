use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use angstruct::angles::{decide, max_chi_star, CriterionVerdict};
use angstruct::cwsurface::{CombAngleStructure, Realization};
use angstruct::format::{parse_rational, AreaCurvatureFile, TriangulationFile};
use angstruct::normal::{chi_star, in_kernel, residual_row, verify_basis, vertex_link_vector, NormalVector};
use angstruct::polytope::enumerate_vertices;
use angstruct::prescribe::{decide_prescribed, AreaCurvature, PrescribedDecision};
use angstruct::{Triangulation, Q};
use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Report, Summary};
use crate::{Cli, Command};

struct Loaded {
    file: TriangulationFile,
    tri: Triangulation,
}

fn load(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = TriangulationFile::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let tri = file.build().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(Loaded { file, tri })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<Q>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| parse_rational(s).ok_or_else(|| anyhow!("{what}: entry {} `{s}` is not a rational", i + 1)))
        .collect()
}

/// Output of a command: JSON result, text body and exit status.
type Outcome = (Value, String, u8);

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<(Report, u8)> {
    let path = match &cli.command {
        Command::Info(f) | Command::Basis(f) | Command::Vertices(f) => &f.file,
        Command::Chi { file, .. }
        | Command::Decide { file, .. }
        | Command::Prescribe { file, .. }
        | Command::Gb { file, .. } => &file.file,
    };
    let loaded = load(path)?;
    let start = Instant::now();
    let (result, text, status) = match &cli.command {
        Command::Info(_) => info(&loaded),
        Command::Basis(_) => basis(&loaded)?,
        Command::Chi { vector, .. } => chi(&loaded, vector.as_deref())?,
        Command::Vertices(_) => vertices(&loaded),
        Command::Decide { kind, .. } => {
            let d = decide(&loaded.tri, *kind)?;
            let mut text = format!("{kind} angle structure: {}\n", verdict(d.feasible));
            if let Some(w) = &d.witness {
                writeln!(text, "witness: {}", fmt_vec(&w.values))?;
            }
            if let Some(dim) = d.dimension {
                writeln!(text, "dimension: {dim}")?;
            }
            if let Some(c) = &d.certificate {
                writeln!(text, "certificate: w = {}, z = {}", fmt_vec(&c.wz.w), fmt_vec(&c.wz.z))?;
                writeln!(text, "  normal vector {} with χ* = {}", fmt_vec(&c.normal_vector.coords), c.chi_value)?;
            }
            text += &criterion_text(&d.agreement.criterion);
            (to_value(&d), text, status(d.feasible))
        }
        Command::Prescribe { data, kind, .. } => {
            let ac = read_area_curvature(&loaded, data)?;
            let basis = verify_basis(&loaded.tri)?;
            let d = decide_prescribed(&loaded.tri, &basis, &ac, *kind)?;
            let text = prescribed_text(&d);
            let value = json!({ "area_curvature": to_value(&ac), "decision": to_value(&d) });
            (value, text, status(d.feasible))
        }
        Command::Gb {
            vertex,
            angles,
            curvature,
            area,
            ..
        } => gb(&loaded, vertex, angles.as_deref(), curvature.as_deref().zip(area.as_deref()))?,
    };
    let elapsed_ms = (!cli.no_timing).then(|| start.elapsed().as_secs_f64() * 1000.0);
    let report = Report {
        command: argv,
        triangulation: Summary::new(&loaded.tri, &loaded.file),
        result,
        elapsed_ms,
        text,
    };
    Ok((report, status))
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn verdict(feasible: bool) -> &'static str {
    if feasible {
        "feasible"
    } else {
        "infeasible"
    }
}

fn info(l: &Loaded) -> Outcome {
    let tri = &l.tri;
    let value = json!({
        "inverted_edges": tri.has_inverted_edge(),
        "boundary_faces": tri.boundary_faces(),
        "gluings": tri.gluings().iter().map(|g| {
            json!([g.src_tet, g.src_face, g.dst_tet, g.dst_face, g.vertex_map.to_string()])
        }).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    if tri.has_inverted_edge() {
        text += "some edge is identified with itself in reverse\n";
    }
    (value, text, 0)
}

fn basis(l: &Loaded) -> Result<Outcome> {
    let tri = &l.tri;
    let b = verify_basis(tri)?;
    let mut text = format!(
        "solution space has dimension {} = t + n; the tetrahedral and edge solutions form a basis\n",
        tri.tet_count() + tri.edge_count()
    );
    for (i, v) in b.tet_solutions.iter().enumerate() {
        writeln!(text, "W_tet{i} = {}", fmt_vec(&v.coords))?;
    }
    for (j, v) in b.edge_solutions.iter().enumerate() {
        writeln!(text, "W_edge{j} = {}", fmt_vec(&v.coords))?;
    }
    let value = json!({
        "dimension": tri.tet_count() + tri.edge_count(),
        "verified": true,
        "tet_solutions": to_value(&b.tet_solutions),
        "edge_solutions": to_value(&b.edge_solutions),
    });
    Ok((value, text, 0))
}

fn chi(l: &Loaded, vector: Option<&str>) -> Result<Outcome> {
    let tri = &l.tri;
    let basis = verify_basis(tri)?;
    if let Some(v) = vector {
        let coords = parse_list(v, "--vector")?;
        if coords.len() != 7 * tri.tet_count() {
            bail!("--vector: expected {} coordinates, got {}", 7 * tri.tet_count(), coords.len());
        }
        let s = NormalVector::new(coords);
        let value = chi_star(tri, &s);
        let mut text = format!("χ* = {value}\n");
        let mut out = json!({ "vector": to_value(&s), "chi_star": value.to_string(), "in_kernel": in_kernel(tri, &s) });
        if let Some(row) = residual_row(tri, &s) {
            writeln!(text, "note: the vector violates matching equation {row}")?;
        } else {
            let c = basis.coefficients(tri, &s)?;
            writeln!(text, "w = {}, z = {}", fmt_vec(&c.w), fmt_vec(&c.z))?;
            out["coefficients"] = to_value(&c);
        }
        return Ok((out, text, 0));
    }
    let mut text = String::new();
    let names = l.file.vertex_class_names(tri);
    let mut links = Vec::new();
    for v in 0..tri.vertex_count() {
        let s = vertex_link_vector(tri, v);
        let value = chi_star(tri, &s);
        let euler = tri.vertex_classes()[v].link_euler;
        writeln!(text, "vertex link {v}: χ* = {value}, χ = {euler}")?;
        links.push(json!({ "vertex": v, "label": names[v], "chi_star": value.to_string(), "euler": euler }));
    }
    let tets: Vec<String> = basis.tet_solutions.iter().map(|s| chi_star(tri, s).to_string()).collect();
    let edges: Vec<String> = basis.edge_solutions.iter().map(|s| chi_star(tri, s).to_string()).collect();
    writeln!(text, "tetrahedral solutions: χ* = {}", tets.join(", "))?;
    writeln!(text, "edge solutions: χ* = {}", edges.join(", "))?;
    let value = json!({ "vertex_links": links, "tet_solutions": tets, "edge_solutions": edges });
    Ok((value, text, 0))
}

fn vertices(l: &Loaded) -> Outcome {
    let tri = &l.tri;
    let vs = enumerate_vertices(tri);
    let mut text = format!("{} vertex solutions\n", vs.len());
    let mut rows = Vec::new();
    for v in &vs {
        let c = v.chi_star(tri);
        let _ = writeln!(text, "{}  χ* = {c}", fmt_vec(&v.primitive.coords));
        let mut row = to_value(v);
        row["chi_star"] = json!(c.to_string());
        rows.push(row);
    }
    let max = max_chi_star(tri).map(|(m, _)| m.to_string());
    if let Some(m) = &max {
        let _ = writeln!(text, "maximum χ* on the projective solution space: {m}");
    }
    (json!({ "count": vs.len(), "vertices": rows, "max_chi_star": max }), text, 0)
}

fn criterion_text(c: &CriterionVerdict) -> String {
    match c {
        CriterionVerdict::Applied { feasible, offending } => {
            let mut s = format!("vertex-solution criterion: {}\n", verdict(*feasible));
            if let Some(o) = offending {
                s += &format!("  offending vertex {} with χ* = {}\n", fmt_vec(&o.vector.coords), o.chi_star);
            }
            s
        }
        CriterionVerdict::Skipped { reason } => format!("vertex-solution criterion not applicable: {reason}\n"),
    }
}

fn read_area_curvature(l: &Loaded, path: &Path) -> Result<AreaCurvature> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw = AreaCurvatureFile::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let (area, kappa) = raw.resolve(&l.tri, &l.file).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(AreaCurvature::new(&l.tri, area, kappa)?)
}

fn prescribed_text(d: &PrescribedDecision) -> String {
    let mut text = format!("{} wedge structure with the given area-curvature: {}\n", d.kind, verdict(d.feasible));
    if let Some(w) = &d.witness {
        text += &format!("witness: {}\n", fmt_vec(&w.values));
    }
    if let Some(dim) = d.dimension {
        text += &format!("dimension: {dim}\n");
    }
    if let Some(c) = &d.certificate {
        text += &format!("certificate: h = {}, z = {} (pairing {})\n", fmt_vec(&c.h), fmt_vec(&c.z), c.pairing);
    }
    if let Some(c) = &d.link_criterion {
        text += &criterion_text(c).replace("vertex-solution", "vertex-link");
    }
    if let Some(c) = &d.conditions {
        let regime = serde_json::to_value(c.regime).expect("regime serializes");
        text += &format!(
            "area sign regime: {}; links balanced: {}; vertex condition: {}\n",
            regime.as_str().unwrap_or_default(),
            c.links_balanced,
            if c.condition_holds { "holds" } else { "fails" }
        );
        if !c.applicable() {
            text += "  the vertex conditions imply nothing for mixed-sign areas\n";
        }
        if let Some(v) = &c.violation {
            text += &format!(
                "  violated at {} with χ* = {}, χ^ = {}\n",
                fmt_vec(&v.vector.coords),
                v.chi_star,
                v.chi_ak
            );
        }
    }
    text
}

fn gb(l: &Loaded, vertex: &str, angles: Option<&str>, prescription: Option<(&str, &str)>) -> Result<Outcome> {
    let tri = &l.tri;
    let v = match vertex.parse::<usize>() {
        Ok(i) if i < tri.vertex_count() => i,
        Ok(i) => bail!("vertex {i} out of range 0..{}", tri.vertex_count()),
        Err(_) => l
            .file
            .vertex_class(tri, vertex)
            .ok_or_else(|| anyhow!("unknown vertex label `{vertex}`"))?,
    };
    let surface = tri.vertex_link_surface(v);
    let summary = json!({
        "vertex": v,
        "cells": surface.cells().len(),
        "corners": surface.corners().len(),
        "vertices": surface.vertex_count(),
        "edges": surface.edge_count(),
        "euler": surface.euler(),
        "orientable": surface.orientable(),
    });
    let mut text = format!(
        "link of vertex {v}: {} cells, {} vertices, {} edges, χ = {}\n",
        surface.cells().len(),
        surface.vertex_count(),
        surface.edge_count(),
        surface.euler()
    );
    if let Some((k, a)) = prescription {
        let k = parse_list(k, "--curvature")?;
        let a = parse_list(a, "--area")?;
        let r = surface.realize(&k, &a)?;
        let ok = matches!(r, Realization::Realized(_));
        match &r {
            Realization::Realized(s) => writeln!(text, "realized: {}", fmt_vec(&s.angles))?,
            Realization::Refused { defect } => writeln!(text, "refused: Gauss–Bonnet defect {defect}")?,
        }
        return Ok((json!({ "surface": summary, "realization": to_value(&r) }), text, status(ok)));
    }
    let corner_count = surface.corners().len();
    let values = match angles {
        Some(a) => parse_list(a, "--angles")?,
        None => vec![Q::new(1.into(), 3.into()); corner_count],
    };
    if values.len() != corner_count {
        bail!("--angles: expected {corner_count} corner angles, got {}", values.len());
    }
    let structure = CombAngleStructure { angles: values };
    let report = surface.gauss_bonnet_check(&structure)?;
    writeln!(
        text,
        "Σ areas = {}, Σ curvatures = {}, 2χ = {}",
        report.total_area, report.total_curvature, report.two_chi
    )?;
    Ok((json!({ "surface": summary, "angles": to_value(&structure), "gauss_bonnet": to_value(&report) }), text, 0))
}
