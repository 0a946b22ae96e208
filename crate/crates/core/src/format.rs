//! Text formats for triangulations and area-curvature prescriptions.
//!
//! Triangulation files hold one record per line; `#` starts a comment.
//!
//! ```text
//! format 1
//! tets 2
//! glue 0 0 1 1 1302
//! edge e1 0 1
//! vertex v1 0 0
//! ```
//!
//! `glue <tet> <face> <tet'> <face'> <p0p1p2p3>` identifies a face pair;
//! the digits are the images of vertices 0..3. `edge <label> <tet> <edge>`
//! and `vertex <label> <tet> <vertex>` name the class containing the given
//! tetrahedron edge or vertex.
//!
//! Area-curvature files use `area <tet> <triangle> <p/q>` and
//! `curv <edge-label-or-index> <p/q>`, in units of π. Missing entries are
//! zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::complex::{BuildError, Gluing, Perm4, Triangulation};
use crate::Q;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(token: &Token<'_>, message: impl Into<String>) -> Self {
        ParseError {
            line: token.line,
            column: token.column,
            message: message.into(),
        }
    }

    fn line(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column: 1,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub name: String,
    pub tet: usize,
    pub index: usize,
}

/// Parsed triangulation file, before the complex is built. Equality ignores
/// source line bookkeeping.
#[derive(Clone, Debug)]
pub struct TriangulationFile {
    pub version: u32,
    pub tet_count: usize,
    pub gluings: Vec<Gluing>,
    pub edge_labels: Vec<Label>,
    pub vertex_labels: Vec<Label>,
    /// Source line of each gluing record, used for error reporting.
    gluing_lines: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(token(content, line_no, s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(token(content, line_no, s, content.len()));
    }
    tokens
}

fn token<'a>(content: &'a str, line: usize, start: usize, end: usize) -> Token<'a> {
    Token {
        text: &content[start..end],
        line,
        column: content[..start].chars().count() + 1,
    }
}

fn expect_args(head: &Token<'_>, args: &[Token<'_>], n: usize) -> Result<(), ParseError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(ParseError::at(
            head,
            format!("`{}` takes {n} arguments, found {}", head.text, args.len()),
        ))
    }
}

fn parse_usize(tok: &Token<'_>, what: &str) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| ParseError::at(tok, format!("expected {what}, found `{}`", tok.text)))
}

fn parse_bounded(tok: &Token<'_>, what: &str, bound: usize) -> Result<usize, ParseError> {
    let v = parse_usize(tok, what)?;
    if v < bound {
        Ok(v)
    } else {
        Err(ParseError::at(tok, format!("{what} {v} out of range 0..{bound}")))
    }
}

fn parse_perm(tok: &Token<'_>) -> Result<Perm4, ParseError> {
    let digits: Vec<usize> = tok
        .text
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()
        .ok_or_else(|| ParseError::at(tok, format!("bad permutation `{}`", tok.text)))?;
    let images: [usize; 4] = digits
        .try_into()
        .map_err(|_| ParseError::at(tok, "a permutation has exactly four digits"))?;
    Perm4::new(images).map_err(|e| ParseError::at(tok, e.to_string()))
}

pub fn parse_rational(tok_text: &str) -> Option<Q> {
    Q::from_str(tok_text).ok()
}

fn parse_q(tok: &Token<'_>) -> Result<Q, ParseError> {
    parse_rational(tok.text)
        .ok_or_else(|| ParseError::at(tok, format!("expected a rational p/q, found `{}`", tok.text)))
}

impl TriangulationFile {
    pub fn new(tet_count: usize, gluings: Vec<Gluing>) -> Self {
        let n = gluings.len();
        TriangulationFile {
            version: FORMAT_VERSION,
            tet_count,
            gluings,
            edge_labels: Vec::new(),
            vertex_labels: Vec::new(),
            gluing_lines: vec![0; n],
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut version = None;
        let mut tet_count: Option<usize> = None;
        let mut gluings = Vec::new();
        let mut gluing_lines = Vec::new();
        let mut edge_labels = Vec::new();
        let mut vertex_labels = Vec::new();
        let mut names: BTreeMap<String, usize> = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let tokens = tokenize(line_no, raw);
            let Some((head, args)) = tokens.split_first() else {
                continue;
            };
            match head.text {
                "format" => {
                    expect_args(head, args, 1)?;
                    if version.is_some() || tet_count.is_some() {
                        return Err(ParseError::at(head, "`format` must be the first record"));
                    }
                    let v = parse_usize(&args[0], "a format version")?;
                    if v != FORMAT_VERSION as usize {
                        return Err(ParseError::at(&args[0], format!("unsupported format version {v}")));
                    }
                    version = Some(v as u32);
                }
                "tets" => {
                    expect_args(head, args, 1)?;
                    if tet_count.is_some() {
                        return Err(ParseError::at(head, "duplicate `tets` record"));
                    }
                    tet_count = Some(parse_usize(&args[0], "a tetrahedron count")?);
                }
                "glue" | "edge" | "vertex" => {
                    let t = tet_count
                        .ok_or_else(|| ParseError::at(head, format!("`{}` before `tets`", head.text)))?;
                    if head.text == "glue" {
                        expect_args(head, args, 5)?;
                        let src_tet = parse_bounded(&args[0], "tetrahedron", t)?;
                        let src_face = parse_bounded(&args[1], "face", 4)?;
                        let dst_tet = parse_bounded(&args[2], "tetrahedron", t)?;
                        let dst_face = parse_bounded(&args[3], "face", 4)?;
                        let perm = parse_perm(&args[4])?;
                        gluings.push(Gluing::new(src_tet, src_face, dst_tet, dst_face, perm));
                        gluing_lines.push(line_no);
                    } else {
                        expect_args(head, args, 3)?;
                        let name = args[0].text.to_string();
                        if name.parse::<usize>().is_ok() {
                            return Err(ParseError::at(&args[0], "labels must not be plain integers"));
                        }
                        let key = format!("{}:{name}", head.text);
                        if let Some(first) = names.insert(key, line_no) {
                            return Err(ParseError::at(
                                &args[0],
                                format!("label `{name}` already defined on line {first}"),
                            ));
                        }
                        let tet = parse_bounded(&args[1], "tetrahedron", t)?;
                        let bound = if head.text == "edge" { 6 } else { 4 };
                        let index = parse_bounded(&args[2], head.text, bound)?;
                        let label = Label { name, tet, index };
                        if head.text == "edge" {
                            edge_labels.push(label);
                        } else {
                            vertex_labels.push(label);
                        }
                    }
                }
                other => {
                    return Err(ParseError::at(head, format!("unknown record `{other}`")));
                }
            }
        }
        let tet_count = tet_count.ok_or_else(|| ParseError::line(1, "missing `tets` record"))?;
        Ok(TriangulationFile {
            version: version.unwrap_or(FORMAT_VERSION),
            tet_count,
            gluings,
            edge_labels,
            vertex_labels,
            gluing_lines,
        })
    }

    /// Builds the complex; semantic errors point at the offending gluing
    /// line.
    pub fn build(&self) -> Result<Triangulation, ParseError> {
        Triangulation::build(self.tet_count, self.gluings.clone()).map_err(|e| {
            let record = match &e {
                BuildError::TetOutOfRange { record, .. }
                | BuildError::FaceOutOfRange { record, .. }
                | BuildError::SelfIdentifiedFace { record, .. }
                | BuildError::DuplicateFace { record, .. }
                | BuildError::FaceMismatch { record, .. } => Some(*record),
                _ => None,
            };
            let line = record
                .and_then(|r| self.gluing_lines.get(r).copied())
                .filter(|&l| l > 0)
                .unwrap_or(1);
            ParseError::line(line, e.to_string())
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("format {}\ntets {}\n", self.version, self.tet_count);
        for g in &self.gluings {
            out.push_str(&format!(
                "glue {} {} {} {} {}\n",
                g.src_tet, g.src_face, g.dst_tet, g.dst_face, g.vertex_map
            ));
        }
        for l in &self.edge_labels {
            out.push_str(&format!("edge {} {} {}\n", l.name, l.tet, l.index));
        }
        for l in &self.vertex_labels {
            out.push_str(&format!("vertex {} {} {}\n", l.name, l.tet, l.index));
        }
        out
    }

    /// Edge class named by `label`.
    pub fn edge_class(&self, tri: &Triangulation, label: &str) -> Option<usize> {
        self.edge_labels
            .iter()
            .find(|l| l.name == label)
            .map(|l| tri.edge_class_of(l.tet, l.index))
    }

    /// Vertex class named by `label`.
    pub fn vertex_class(&self, tri: &Triangulation, label: &str) -> Option<usize> {
        self.vertex_labels
            .iter()
            .find(|l| l.name == label)
            .map(|l| tri.vertex_class_of(l.tet, l.index))
    }

    /// Label attached to each edge class, if any (first label wins).
    pub fn edge_class_names(&self, tri: &Triangulation) -> Vec<Option<String>> {
        let mut names = vec![None; tri.edge_count()];
        for l in &self.edge_labels {
            let c = tri.edge_class_of(l.tet, l.index);
            names[c].get_or_insert_with(|| l.name.clone());
        }
        names
    }

    pub fn vertex_class_names(&self, tri: &Triangulation) -> Vec<Option<String>> {
        let mut names = vec![None; tri.vertex_count()];
        for l in &self.vertex_labels {
            let c = tri.vertex_class_of(l.tet, l.index);
            names[c].get_or_insert_with(|| l.name.clone());
        }
        names
    }
}

impl PartialEq for TriangulationFile {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version
            && self.tet_count == other.tet_count
            && self.gluings == other.gluings
            && self.edge_labels == other.edge_labels
            && self.vertex_labels == other.vertex_labels
    }
}

impl Eq for TriangulationFile {}

impl fmt::Display for TriangulationFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Parses and builds in one step.
pub fn parse(text: &str) -> Result<Triangulation, ParseError> {
    TriangulationFile::parse(text)?.build()
}

/// Serializes a triangulation without labels.
pub fn serialize(tri: &Triangulation) -> String {
    TriangulationFile::new(tri.tet_count(), tri.gluings().to_vec()).serialize()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeRef {
    Index(usize),
    Label(String),
}

/// Raw (A, κ) records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaCurvatureFile {
    pub areas: Vec<(usize, usize, Q)>,
    pub curvatures: Vec<(EdgeRef, Q)>,
    lines: Vec<usize>,
}

impl AreaCurvatureFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut areas = Vec::new();
        let mut curvatures = Vec::new();
        let mut lines = Vec::new();
        let mut area_lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let tokens = tokenize(line_no, raw);
            let Some((head, args)) = tokens.split_first() else {
                continue;
            };
            match head.text {
                "area" => {
                    expect_args(head, args, 3)?;
                    let tet = parse_usize(&args[0], "a tetrahedron index")?;
                    let slot = parse_bounded(&args[1], "triangle slot", 4)?;
                    areas.push((tet, slot, parse_q(&args[2])?));
                    area_lines.push(line_no);
                }
                "curv" => {
                    expect_args(head, args, 2)?;
                    let target = match args[0].text.parse::<usize>() {
                        Ok(i) => EdgeRef::Index(i),
                        Err(_) => EdgeRef::Label(args[0].text.to_string()),
                    };
                    curvatures.push((target, parse_q(&args[1])?));
                    lines.push(line_no);
                }
                other => {
                    return Err(ParseError::at(head, format!("unknown record `{other}`")));
                }
            }
        }
        area_lines.extend(lines);
        Ok(AreaCurvatureFile {
            areas,
            curvatures,
            lines: area_lines,
        })
    }

    /// Resolves labels and indices against a triangulation, returning the
    /// triangle areas (`4t`, ordered `4i + k`) and edge curvatures (`n`).
    pub fn resolve(
        &self,
        tri: &Triangulation,
        labels: &TriangulationFile,
    ) -> Result<(Vec<Q>, Vec<Q>), ParseError> {
        let t = tri.tet_count();
        let mut area = vec![None; 4 * t];
        for (k, (tet, slot, value)) in self.areas.iter().enumerate() {
            let line = self.lines[k];
            if *tet >= t {
                return Err(ParseError::line(line, format!("tetrahedron {tet} out of range 0..{t}")));
            }
            if area[4 * tet + slot].replace(value.clone()).is_some() {
                return Err(ParseError::line(line, format!("area of triangle ({tet}, {slot}) given twice")));
            }
        }
        let mut curv = vec![None; tri.edge_count()];
        for (k, (target, value)) in self.curvatures.iter().enumerate() {
            let line = self.lines[self.areas.len() + k];
            let class = match target {
                EdgeRef::Index(i) if *i < tri.edge_count() => *i,
                EdgeRef::Index(i) => {
                    return Err(ParseError::line(
                        line,
                        format!("edge class {i} out of range 0..{}", tri.edge_count()),
                    ))
                }
                EdgeRef::Label(name) => labels
                    .edge_class(tri, name)
                    .ok_or_else(|| ParseError::line(line, format!("unknown edge label `{name}`")))?,
            };
            if curv[class].replace(value.clone()).is_some() {
                return Err(ParseError::line(line, format!("curvature of edge class {class} given twice")));
            }
        }
        let fill = |v: Vec<Option<Q>>| v.into_iter().map(|x| x.unwrap_or_else(Q::zero)).collect();
        Ok((fill(area), fill(curv)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qr};

    #[test]
    fn parses_minimal_file() {
        let tri = parse("tets 1\n").unwrap();
        assert_eq!(tri.tet_count(), 1);
        assert_eq!(tri.edge_count(), 6);
        assert_eq!(tri.vertex_count(), 4);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nformat 1 # trailing\ntets 1\n  glue 0 2 0 0 2103  \n";
        let f = TriangulationFile::parse(text).unwrap();
        assert_eq!(f.gluings.len(), 1);
    }

    #[test]
    fn syntax_error_location() {
        let err = TriangulationFile::parse("tets 1\nglue 0 2 0 0 21x3\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 14));
        let err = TriangulationFile::parse("tets 1\n  frobnicate\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = TriangulationFile::parse("glue 0 0 0 1 1023\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn semantic_error_location() {
        let err = parse("tets 1\nglue 0 2 0 0 2103\n\nglue 0 0 0 1 1023\n").unwrap_err();
        assert_eq!(err.line, 4);
        let err = parse("tets 1\nglue 0 2 0 0 0123\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn round_trip_with_labels() {
        let text = "format 1\ntets 1\nglue 0 2 0 0 2103\nglue 0 3 0 1 0321\nedge e1 0 1\nvertex v 0 0\n";
        let f = TriangulationFile::parse(text).unwrap();
        assert_eq!(f.serialize(), text);
        assert_eq!(TriangulationFile::parse(&f.serialize()).unwrap(), f);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = TriangulationFile::parse("tets 1\nedge a 0 1\nedge a 0 2\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn area_curvature_file() {
        let text = "tets 1\nglue 0 2 0 0 2103\nglue 0 3 0 1 0321\nedge e1 0 1\n";
        let f = TriangulationFile::parse(text).unwrap();
        let tri = f.build().unwrap();
        let ak = AreaCurvatureFile::parse("area 0 1 -1/2\ncurv e1 3/4\ncurv 2 1\n").unwrap();
        let (a, k) = ak.resolve(&tri, &f).unwrap();
        assert_eq!(a, vec![q(0), qr(-1, 2), q(0), q(0)]);
        let e1 = tri.edge_class_of(0, 1);
        assert_eq!(k[e1], qr(3, 4));
        assert_eq!(k[2], q(1));

        let bad = AreaCurvatureFile::parse("curv nope 1\n").unwrap();
        assert!(bad.resolve(&tri, &f).is_err());
        let err = AreaCurvatureFile::parse("area 0 0 1/0\n").unwrap_err();
        assert_eq!(err.column, 10);
    }
}
