//! Graph files: a JSON document or a TSV edge list with an optional vertex
//! sidecar.
//!
//! JSON: `{"vertices":[{"id":0,"m":1,"c":0}],"edges":[{"x":0,"y":1,"b":1}],"interior":[0]}`.
//! `m` defaults to 1, `c` to 0 and `interior` to every vertex.
//!
//! TSV: one `x<TAB>y<TAB>b` record per line; the sidecar holds `id<TAB>m<TAB>c`.
//! Blank lines and lines starting with `#` are skipped. External ids are
//! arbitrary tokens, numbered densely in order of first appearance (sidecar
//! first).

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use pgraph_core::{Error as CoreError, GraphBuilder, VertexSubset, WeightedGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Json,
    Tsv,
}

impl GraphFormat {
    /// `.json` is JSON, anything else TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::Tsv,
        }
    }
}

/// Where in the input a problem was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Location {
    /// 1-based line and column.
    Line {
        source: String,
        line: usize,
        column: Option<usize>,
    },
    /// A JSON record, e.g. `edges[3]`.
    Record(String),
    Whole,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line { source, line, column: Some(c) } => write!(f, "{source}:{line}:{c}"),
            Location::Line { source, line, column: None } => write!(f, "{source}:{line}"),
            Location::Record(r) => f.write_str(r),
            Location::Whole => f.write_str("input"),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{location}: {message}")]
    Parse { location: Location, message: String },
    #[error("{location}: {source}")]
    Invalid {
        location: Location,
        #[source]
        source: CoreError,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl LoadError {
    fn parse(location: Location, message: impl Into<String>) -> Self {
        LoadError::Parse { location, message: message.into() }
    }
}

/// A graph together with the external id of every dense vertex.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub labels: Vec<String>,
}

impl LoadedGraph {
    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVertex {
    id: i64,
    #[serde(default = "one")]
    m: f64,
    #[serde(default)]
    c: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEdge {
    x: i64,
    y: i64,
    b: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    #[serde(default)]
    edges: Vec<JsonEdge>,
    #[serde(default)]
    interior: Option<Vec<i64>>,
}

/// Runs the builder edge by edge so an invariant violation names its record.
fn build_located(
    n: usize,
    edges: &[(usize, usize, f64, Location)],
    measure: Vec<f64>,
    potential: Vec<f64>,
    vertex_locations: &[Location],
    interior: Option<VertexSubset>,
) -> Result<WeightedGraph, LoadError> {
    let mut seen: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    for (i, (x, y, b, loc)) in edges.iter().enumerate() {
        let single = GraphBuilder::new(n).edge(*x, *y, *b).build();
        if let Err(source) = single {
            return Err(LoadError::Invalid { location: loc.clone(), source });
        }
        let key = if x < y { (*x, *y) } else { (*y, *x) };
        if let Some(&(first, _)) = seen.get(&key) {
            if first != *b {
                return Err(LoadError::Invalid {
                    location: loc.clone(),
                    source: CoreError::AsymmetricDuplicate { x: key.0, y: key.1, first, second: *b },
                });
            }
        } else {
            seen.insert(key, (*b, i));
        }
    }
    for (i, &m) in measure.iter().enumerate() {
        if !(m > 0.0) || !m.is_finite() {
            let source = if m.is_finite() {
                CoreError::NonPositiveMeasure { vertex: i, value: m }
            } else {
                CoreError::NonFinite { what: "measure", index: i }
            };
            return Err(LoadError::Invalid { location: vertex_locations[i].clone(), source });
        }
    }
    let mut builder = GraphBuilder::new(n).measure(measure).potential(potential);
    for (x, y, b, _) in edges {
        builder.add_edge(*x, *y, *b);
    }
    if let Some(s) = interior {
        builder = builder.interior(s);
    }
    builder.build().map_err(|source| LoadError::Invalid { location: Location::Whole, source })
}

pub fn load_json(text: &str, source_name: &str) -> Result<LoadedGraph, LoadError> {
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| {
        LoadError::parse(
            Location::Line { source: source_name.to_owned(), line: e.line(), column: Some(e.column()) },
            e.to_string(),
        )
    })?;
    let mut index: HashMap<i64, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(doc.vertices.len());
    let mut measure = Vec::with_capacity(doc.vertices.len());
    let mut potential = Vec::with_capacity(doc.vertices.len());
    let mut locations = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.iter().enumerate() {
        let loc = Location::Record(format!("vertices[{i}]"));
        if index.insert(v.id, labels.len()).is_some() {
            return Err(LoadError::parse(loc, format!("duplicate vertex id {}", v.id)));
        }
        labels.push(v.id.to_string());
        measure.push(v.m);
        potential.push(v.c);
        locations.push(loc);
    }
    let lookup = |id: i64, loc: &Location| {
        index.get(&id).copied().ok_or_else(|| LoadError::parse(loc.clone(), format!("unknown vertex id {id}")))
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.iter().enumerate() {
        let loc = Location::Record(format!("edges[{i}]"));
        edges.push((lookup(e.x, &loc)?, lookup(e.y, &loc)?, e.b, loc));
    }
    let n = labels.len();
    let interior = match &doc.interior {
        Some(ids) => {
            let mut s = VertexSubset::empty(n);
            for (i, &id) in ids.iter().enumerate() {
                s.insert(lookup(id, &Location::Record(format!("interior[{i}]")))?);
            }
            Some(s)
        }
        None => None,
    };
    let graph = build_located(n, &edges, measure, potential, &locations, interior)?;
    Ok(LoadedGraph { graph, labels })
}

fn fields(line: &str) -> Vec<&str> {
    line.split('\t').map(str::trim).collect()
}

fn number(field: &str, what: &str, loc: &Location) -> Result<f64, LoadError> {
    field.parse::<f64>().map_err(|_| LoadError::parse(loc.clone(), format!("{what} `{field}` is not a number")))
}

fn records<R: BufRead>(reader: R, source: &str) -> Result<Vec<(Location, String)>, LoadError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| LoadError::Io { path: source.to_owned(), source: e })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((Location::Line { source: source.to_owned(), line: i + 1, column: None }, line));
    }
    Ok(out)
}

pub fn load_tsv<R: BufRead, S: BufRead>(
    edges: R,
    edge_source: &str,
    sidecar: Option<(S, &str)>,
) -> Result<LoadedGraph, LoadError> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut measure = Vec::new();
    let mut potential = Vec::new();
    let mut locations = Vec::new();
    let intern = |label: &str,
                  loc: &Location,
                  index: &mut HashMap<String, usize>,
                  labels: &mut Vec<String>,
                  measure: &mut Vec<f64>,
                  potential: &mut Vec<f64>,
                  locations: &mut Vec<Location>| {
        *index.entry(label.to_owned()).or_insert_with(|| {
            labels.push(label.to_owned());
            measure.push(1.0);
            potential.push(0.0);
            locations.push(loc.clone());
            labels.len() - 1
        })
    };
    if let Some((reader, name)) = sidecar {
        for (loc, line) in records(reader, name)? {
            let f = fields(&line);
            if f.len() != 3 {
                return Err(LoadError::parse(loc, format!("expected `id\\tm\\tc`, found {} fields", f.len())));
            }
            if index.contains_key(f[0]) {
                return Err(LoadError::parse(loc, format!("duplicate vertex id {}", f[0])));
            }
            let m = number(f[1], "measure", &loc)?;
            let c = number(f[2], "potential", &loc)?;
            let id = intern(f[0], &loc, &mut index, &mut labels, &mut measure, &mut potential, &mut locations);
            measure[id] = m;
            potential[id] = c;
        }
    }
    let has_sidecar = !labels.is_empty();
    let mut list = Vec::new();
    for (loc, line) in records(edges, edge_source)? {
        let f = fields(&line);
        if f.len() != 3 {
            return Err(LoadError::parse(loc, format!("expected `x\\ty\\tb`, found {} fields", f.len())));
        }
        let b = number(f[2], "weight", &loc)?;
        let mut ends = [0; 2];
        for (k, label) in f[..2].iter().enumerate() {
            if has_sidecar && !index.contains_key(*label) {
                return Err(LoadError::parse(loc, format!("vertex {label} is missing from the sidecar")));
            }
            ends[k] = intern(label, &loc, &mut index, &mut labels, &mut measure, &mut potential, &mut locations);
        }
        list.push((ends[0], ends[1], b, loc));
    }
    let graph = build_located(labels.len(), &list, measure, potential, &locations, None)?;
    Ok(LoadedGraph { graph, labels })
}

/// Reads a graph from `source` in the given format.
pub fn load_graph<R: Read>(source: R, format: GraphFormat) -> Result<LoadedGraph, LoadError> {
    match format {
        GraphFormat::Json => {
            let mut text = String::new();
            BufReader::new(source)
                .read_to_string(&mut text)
                .map_err(|e| LoadError::Io { path: "input".into(), source: e })?;
            load_json(&text, "input")
        }
        GraphFormat::Tsv => load_tsv(BufReader::new(source), "input", None::<(&[u8], &str)>),
    }
}

/// Reads a graph file, with an optional TSV vertex sidecar.
pub fn load_graph_path(path: &Path, sidecar: Option<&Path>) -> Result<LoadedGraph, LoadError> {
    let name = path.display().to_string();
    fn io(p: &Path) -> impl FnOnce(std::io::Error) -> LoadError + '_ {
        move |e| LoadError::Io { path: p.display().to_string(), source: e }
    }
    match GraphFormat::from_path(path) {
        GraphFormat::Json => {
            if sidecar.is_some() {
                return Err(LoadError::parse(Location::Whole, "a sidecar only applies to TSV edge lists"));
            }
            load_json(&fs::read_to_string(path).map_err(io(path))?, &name)
        }
        GraphFormat::Tsv => {
            let edges = BufReader::new(fs::File::open(path).map_err(io(path))?);
            match sidecar {
                Some(s) => {
                    let side = BufReader::new(fs::File::open(s).map_err(io(s))?);
                    load_tsv(edges, &name, Some((side, s.display().to_string().as_str())))
                }
                None => load_tsv(edges, &name, None::<(&[u8], &str)>),
            }
        }
    }
}

/// Reads a vector of reals: a JSON array, or numbers separated by whitespace
/// or commas.
pub fn parse_values(text: &str, source: &str) -> Result<Vec<f64>, LoadError> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| {
            LoadError::parse(
                Location::Line { source: source.to_owned(), line: e.line(), column: Some(e.column()) },
                e.to_string(),
            )
        });
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let loc = Location::Line { source: source.to_owned(), line: i + 1, column: None };
            out.push(number(token, "value", &loc)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_two_vertices() {
        let text = r#"{"vertices":[{"id":0,"m":1,"c":0},{"id":1,"m":1,"c":0}],"edges":[{"x":0,"y":1,"b":1}]}"#;
        let g = load_graph(text.as_bytes(), GraphFormat::Json).unwrap();
        assert_eq!(g.graph.vertex_count(), 2);
        assert_eq!(g.graph.weight(1, 0), 1.0);
    }

    #[test]
    fn json_external_ids_and_interior() {
        let text =
            r#"{"vertices":[{"id":10},{"id":-3,"m":2,"c":0.5}],"edges":[{"x":10,"y":-3,"b":0.25}],"interior":[-3]}"#;
        let g = load_json(text, "g.json").unwrap();
        assert_eq!(g.labels, ["10", "-3"]);
        assert_eq!(g.graph.measure(1), 2.0);
        assert!(g.graph.is_interior(1) && !g.graph.is_interior(0));
    }

    #[test]
    fn json_errors_carry_location() {
        let err = load_json("{\"vertices\": [\n{\"id\": 0, \"m\": }]}", "g.json").unwrap_err();
        assert!(err.to_string().starts_with("g.json:2:"), "{err}");
        let err =
            load_json(r#"{"vertices":[{"id":0},{"id":1}],"edges":[{"x":0,"y":1,"b":1},{"x":1,"y":1,"b":1}]}"#, "g")
                .unwrap_err();
        assert!(matches!(err, LoadError::Invalid { source: CoreError::SelfLoop { vertex: 1 }, .. }));
        assert!(err.to_string().starts_with("edges[1]"));
        let err = load_json(r#"{"vertices":[{"id":0,"m":0}]}"#, "g").unwrap_err();
        assert!(err.to_string().starts_with("vertices[0]"), "{err}");
    }

    #[test]
    fn tsv_self_loop() {
        let err = load_graph("0\t0\t1.0\n".as_bytes(), GraphFormat::Tsv).unwrap_err();
        assert!(matches!(err, LoadError::Invalid { source: CoreError::SelfLoop { .. }, .. }));
        assert_eq!(err.to_string().split(':').take(2).collect::<Vec<_>>(), ["input", "1"]);
    }

    #[test]
    fn tsv_duplicates() {
        let err = load_graph("0\t1\t1.0\n1\t0\t2.0\n".as_bytes(), GraphFormat::Tsv).unwrap_err();
        assert!(matches!(err, LoadError::Invalid { source: CoreError::AsymmetricDuplicate { .. }, .. }));
        assert!(err.to_string().starts_with("input:2"));
        let g = load_graph("0\t1\t1.0\n1\t0\t1.0\n".as_bytes(), GraphFormat::Tsv).unwrap();
        assert_eq!(g.graph.edge_count(), 1);
    }

    #[test]
    fn tsv_with_sidecar() {
        let side = "# id m c\na\t2\t0.5\nb\t1\t0\nc\t1\t-1\n";
        let edges = "a\tb\t1\nb\tc\t0.5\n";
        let g = load_tsv(edges.as_bytes(), "e.tsv", Some((side.as_bytes(), "v.tsv"))).unwrap();
        assert_eq!(g.vertex("c"), Some(2));
        assert_eq!(g.graph.potential(2), -1.0);
        assert_eq!(g.graph.degree(1).unwrap(), 1.5);
        let err = load_tsv("a\td\t1\n".as_bytes(), "e.tsv", Some((side.as_bytes(), "v.tsv"))).unwrap_err();
        assert!(err.to_string().contains("missing from the sidecar"));
        let err = load_tsv("a\tb\tx\n".as_bytes(), "e.tsv", None::<(&[u8], &str)>).unwrap_err();
        assert_eq!(err.to_string(), "e.tsv:1: weight `x` is not a number");
    }

    #[test]
    fn values() {
        assert_eq!(parse_values("[1, 2.5]", "v").unwrap(), [1.0, 2.5]);
        assert_eq!(parse_values("1 2\n3,4 # tail\n", "v").unwrap(), [1.0, 2.0, 3.0, 4.0]);
        assert!(parse_values("1 z", "v").is_err());
    }
}
