use std::io::Write;

use angstruct::format::TriangulationFile;
use angstruct::Triangulation;
use serde::Serialize;
use serde_json::Value;

#[derive(Serialize, Debug)]
pub struct EdgeSummary {
    pub index: usize,
    pub label: Option<String>,
    pub degree: usize,
    pub boundary: bool,
    pub inverted: bool,
}

#[derive(Serialize, Debug)]
pub struct VertexSummary {
    pub index: usize,
    pub label: Option<String>,
    pub link: String,
    pub link_euler: i64,
    pub link_orientable: bool,
    pub link_closed: bool,
}

#[derive(Serialize, Debug)]
pub struct Summary {
    pub tetrahedra: usize,
    pub edges: usize,
    pub vertices: usize,
    pub closed: bool,
    pub degrees: Vec<usize>,
    pub edge_classes: Vec<EdgeSummary>,
    pub vertex_classes: Vec<VertexSummary>,
}

impl Summary {
    pub fn new(tri: &Triangulation, file: &TriangulationFile) -> Self {
        let edge_names = file.edge_class_names(tri);
        let vertex_names = file.vertex_class_names(tri);
        Summary {
            tetrahedra: tri.tet_count(),
            edges: tri.edge_count(),
            vertices: tri.vertex_count(),
            closed: tri.is_closed(),
            degrees: tri.degrees(),
            edge_classes: tri
                .edge_classes()
                .iter()
                .enumerate()
                .map(|(i, c)| EdgeSummary {
                    index: i,
                    label: edge_names[i].clone(),
                    degree: c.degree(),
                    boundary: c.on_boundary,
                    inverted: c.inverted,
                })
                .collect(),
            vertex_classes: tri
                .vertex_classes()
                .iter()
                .enumerate()
                .map(|(i, v)| VertexSummary {
                    index: i,
                    label: vertex_names[i].clone(),
                    link: v.classification.to_string(),
                    link_euler: v.link_euler,
                    link_orientable: v.link_orientable,
                    link_closed: v.link_closed,
                })
                .collect(),
        }
    }

    fn text(&self) -> String {
        let mut out = format!(
            "t = {}, n = {}, v = {}, {}\n",
            self.tetrahedra,
            self.edges,
            self.vertices,
            if self.closed { "closed" } else { "with boundary" }
        );
        for e in &self.edge_classes {
            out += &format!(
                "  edge {}{}: degree {}{}{}\n",
                e.index,
                name(&e.label),
                e.degree,
                if e.boundary { ", boundary" } else { "" },
                if e.inverted { ", inverted" } else { "" }
            );
        }
        for v in &self.vertex_classes {
            out += &format!("  vertex {}{}: {} link, χ = {}\n", v.index, name(&v.label), v.link, v.link_euler);
        }
        out
    }
}

fn name(label: &Option<String>) -> String {
    label.as_ref().map(|l| format!(" ({l})")).unwrap_or_default()
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub command: Vec<String>,
    pub triangulation: Summary,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    /// Writes the report to stdout; a closed pipe is not an error.
    pub fn print(&self, json: bool) {
        let mut out = std::io::stdout().lock();
        let body = if json {
            serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
        } else {
            let mut s = self.triangulation.text() + &self.text;
            if let Some(ms) = self.elapsed_ms {
                s += &format!("elapsed: {ms:.1} ms\n");
            }
            s
        };
        let _ = out.write_all(body.as_bytes()).and_then(|_| out.flush());
    }
}
