//! Vertex- and edge-weighted directed graphs.
//!
//! A [`Graph`] couples a fixed vertex set (each vertex has a unique name and
//! a nonnegative *multiplicity*, a prior importance weight) with a set of
//! directed edges carrying positive lengths. Graphs are immutable after
//! construction and every constructor validates the full invariant set, so
//! downstream code can assume a well-formed graph.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Index of a vertex within one [`Graph`]; stable for the graph's lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A directed edge with a positive length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: f64,
}

/// Immutable vertex- and edge-weighted directed graph.
#[derive(Debug, Clone)]
pub struct Graph {
    names: Vec<String>,
    multiplicities: Vec<f64>,
    edges: Vec<Edge>,
    // out_adj[u] lists (target, weight) in insertion order
    out_adj: Vec<Vec<(usize, f64)>>,
    name_index: HashMap<String, usize>,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    /// Vertex multiplicities in index order.
    pub fn multiplicities(&self) -> &[f64] {
        &self.multiplicities
    }

    /// Sum of all vertex multiplicities; always positive.
    pub fn total_multiplicity(&self) -> f64 {
        self.multiplicities.iter().sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing (target, weight) pairs of `u`.
    pub fn out_edges(&self, u: VertexId) -> &[(usize, f64)] {
        &self.out_adj[u.0]
    }

    /// Look up a vertex by name.
    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.name_index.get(name).copied().map(VertexId)
    }
}

/// Strong-connectivity decomposition of a graph.
#[derive(Debug, Clone)]
pub struct ConnectivityReport {
    pub strongly_connected: bool,
    /// Strongly connected components; members sorted by index. The
    /// components partition the vertex set.
    pub components: Vec<Vec<VertexId>>,
    /// Number of distinct edges in the condensation (component DAG).
    pub condensation_edge_count: usize,
}

/// Build a validated graph from named parts.
///
/// Vertex indices are assigned in the order of `names`. Edges are given as
/// `(source name, target name, weight)` triples.
pub fn build_graph(
    names: Vec<String>,
    multiplicities: Vec<f64>,
    edges: &[(String, String, f64)],
) -> Result<Graph> {
    if names.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if names.len() != multiplicities.len() {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            got: multiplicities.len(),
        });
    }

    let mut name_index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::EmptyVertexName);
        }
        if name_index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateVertexName { name: name.clone() });
        }
    }

    for (name, &eta) in names.iter().zip(&multiplicities) {
        if eta < 0.0 || eta.is_nan() {
            return Err(Error::NegativeMultiplicity {
                name: name.clone(),
                value: eta,
            });
        }
    }
    if multiplicities.iter().sum::<f64>() <= 0.0 {
        return Err(Error::ZeroTotalMultiplicity);
    }

    let n = names.len();
    let mut out_adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut seen: HashMap<(usize, usize), ()> = HashMap::with_capacity(edges.len());
    let mut edge_list = Vec::with_capacity(edges.len());
    for (src, dst, w) in edges {
        let s = *name_index
            .get(src)
            .ok_or_else(|| Error::UnknownVertexName { name: src.clone() })?;
        let t = *name_index
            .get(dst)
            .ok_or_else(|| Error::UnknownVertexName { name: dst.clone() })?;
        if s == t {
            return Err(Error::SelfLoopEdge { name: src.clone() });
        }
        if !(*w > 0.0) || !w.is_finite() {
            return Err(Error::NonPositiveEdgeWeight {
                source: src.clone(),
                target: dst.clone(),
                weight: *w,
            });
        }
        if seen.insert((s, t), ()).is_some() {
            return Err(Error::DuplicateEdge {
                source: src.clone(),
                target: dst.clone(),
            });
        }
        out_adj[s].push((t, *w));
        edge_list.push(Edge {
            source: VertexId(s),
            target: VertexId(t),
            weight: *w,
        });
    }

    Ok(Graph {
        names,
        multiplicities,
        edges: edge_list,
        out_adj,
        name_index,
    })
}

/// Build a directed graph from undirected edges: each `{a, b, w}` becomes
/// the directed pair `(a, b, w)` and `(b, a, w)`.
pub fn from_undirected(
    names: Vec<String>,
    multiplicities: Vec<f64>,
    undirected_edges: &[(String, String, f64)],
) -> Result<Graph> {
    let mut directed = Vec::with_capacity(undirected_edges.len() * 2);
    for (a, b, w) in undirected_edges {
        directed.push((a.clone(), b.clone(), *w));
        directed.push((b.clone(), a.clone(), *w));
    }
    build_graph(names, multiplicities, &directed)
}

/// Decompose `g` into strongly connected components (iterative Tarjan) and
/// report whether the whole graph is one component.
pub fn check_strong_connectivity(g: &Graph) -> ConnectivityReport {
    let n = g.n();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    let mut counter = 0usize;

    // Explicit DFS frames: (vertex, next out-edge position).
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = frames.last_mut() {
            if *next < g.out_adj[v].len() {
                let (w, _) = g.out_adj[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let cid = components.len();
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp_of[w] = cid;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    members.sort_unstable();
                    components.push(members.into_iter().map(VertexId).collect());
                }
            }
        }
    }

    let mut condensation_edges: HashMap<(usize, usize), ()> = HashMap::new();
    for e in &g.edges {
        let (a, b) = (comp_of[e.source.0], comp_of[e.target.0]);
        if a != b {
            condensation_edges.insert((a, b), ());
        }
    }

    ConnectivityReport {
        strongly_connected: components.len() == 1,
        components,
        condensation_edge_count: condensation_edges.len(),
    }
}

// ---------------------------------------------------------------------------
// File interface: edge-list CSV plus optional vertex CSV.
// ---------------------------------------------------------------------------

/// Read a graph from an edge-list CSV (`source,target,weight`) and an
/// optional vertex CSV (`name,multiplicity`).
///
/// Without a vertex file every multiplicity is 1 and vertex order is first
/// appearance in the edge list. With a vertex file, that file fixes the
/// vertex order and multiplicities; every edge endpoint must be listed and
/// every listed vertex must touch at least one edge.
pub fn read_graph_files(edges_path: &Path, vertices_path: Option<&Path>) -> Result<Graph> {
    let edge_bytes = std::fs::read(edges_path)?;
    let vertex_bytes = match vertices_path {
        Some(p) => Some(std::fs::read(p)?),
        None => None,
    };
    read_graph_bytes(&edge_bytes, vertex_bytes.as_deref())
}

/// As [`read_graph_files`], from in-memory CSV bytes.
pub fn read_graph_bytes(edge_csv: &[u8], vertex_csv: Option<&[u8]>) -> Result<Graph> {
    let edges = parse_edge_csv(edge_csv)?;

    let (names, multiplicities) = match vertex_csv {
        Some(bytes) => {
            let (names, mults) = parse_vertex_csv(bytes)?;
            let mut touched: HashMap<&str, bool> =
                names.iter().map(|n| (n.as_str(), false)).collect();
            for (s, t, _) in &edges {
                if let Some(flag) = touched.get_mut(s.as_str()) {
                    *flag = true;
                }
                if let Some(flag) = touched.get_mut(t.as_str()) {
                    *flag = true;
                }
            }
            if let Some(name) = names.iter().find(|n| !touched[n.as_str()]) {
                return Err(Error::IsolatedVertex { name: name.clone() });
            }
            (names, mults)
        }
        None => {
            let mut names: Vec<String> = Vec::new();
            let mut seen: HashMap<String, ()> = HashMap::new();
            for (s, t, _) in &edges {
                for name in [s, t] {
                    if seen.insert(name.clone(), ()).is_none() {
                        names.push(name.clone());
                    }
                }
            }
            let mults = vec![1.0; names.len()];
            (names, mults)
        }
    };

    build_graph(names, multiplicities, &edges)
}

/// Write the `(edge list, vertex list)` CSV pair for `g`.
///
/// Numbers round-trip exactly (shortest representation that parses back to
/// the same double).
pub fn write_graph_files(g: &Graph, edges_path: &Path, vertices_path: &Path) -> Result<()> {
    let mut ew = csv::Writer::from_path(edges_path)?;
    ew.write_record(["source", "target", "weight"])?;
    for e in g.edges() {
        ew.write_record([
            g.name(e.source),
            g.name(e.target),
            &format_num(e.weight),
        ])?;
    }
    ew.flush()?;

    let mut vw = csv::Writer::from_path(vertices_path)?;
    vw.write_record(["name", "multiplicity"])?;
    for (name, eta) in g.names().iter().zip(g.multiplicities()) {
        vw.write_record([name.as_str(), &format_num(*eta)])?;
    }
    vw.flush()?;
    Ok(())
}

fn format_num(x: f64) -> String {
    // Shortest round-trip representation; `{}` on f64 guarantees this.
    format!("{x}")
}

fn parse_edge_csv(bytes: &[u8]) -> Result<Vec<(String, String, f64)>> {
    let mut reader = csv_reader(bytes);
    check_header(&mut reader, &["source", "target", "weight"])?;
    let mut edges = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(Error::MalformedRow {
                line,
                message: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let weight: f64 = record[2].trim().parse().map_err(|_| Error::MalformedRow {
            line,
            message: format!("cannot parse weight {:?}", &record[2]),
        })?;
        edges.push((record[0].to_string(), record[1].to_string(), weight));
    }
    Ok(edges)
}

fn parse_vertex_csv(bytes: &[u8]) -> Result<(Vec<String>, Vec<f64>)> {
    let mut reader = csv_reader(bytes);
    check_header(&mut reader, &["name", "multiplicity"])?;
    let mut names = Vec::new();
    let mut mults = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(Error::MalformedRow {
                line,
                message: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let eta: f64 = record[1].trim().parse().map_err(|_| Error::MalformedRow {
            line,
            message: format!("cannot parse multiplicity {:?}", &record[1]),
        })?;
        names.push(record[0].to_string());
        mults.push(eta);
    }
    Ok((names, mults))
}

pub(crate) fn csv_reader(bytes: &[u8]) -> csv::Reader<impl Read + '_> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes)
}

pub(crate) fn check_header<R: Read>(
    reader: &mut csv::Reader<R>,
    expected: &[&str],
) -> Result<()> {
    let headers = reader.headers()?.clone();
    let found: Vec<String> = headers.iter().map(|h| h.trim().to_lowercase()).collect();
    if found != expected {
        return Err(Error::MalformedHeader {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn edges(list: &[(&str, &str, f64)]) -> Vec<(String, String, f64)> {
        list.iter()
            .map(|(a, b, w)| (a.to_string(), b.to_string(), *w))
            .collect()
    }

    #[test]
    fn minimal_valid_graph() {
        let g = build_graph(
            names(&["a", "b"]),
            vec![1.0, 1.0],
            &edges(&[("a", "b", 1.0), ("b", "a", 2.0)]),
        )
        .unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.total_multiplicity(), 2.0);
        assert_eq!(g.vertex("a"), Some(VertexId(0)));
        assert_eq!(g.vertex("missing"), None);
    }

    #[test]
    fn zero_weight_edge_rejected() {
        let err = build_graph(
            names(&["a", "b"]),
            vec![1.0, 1.0],
            &edges(&[("a", "b", 0.0), ("b", "a", 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveEdgeWeight { .. }));
    }

    #[test]
    fn zero_total_multiplicity_rejected() {
        let err = build_graph(
            names(&["a", "b"]),
            vec![0.0, 0.0],
            &edges(&[("a", "b", 1.0), ("b", "a", 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ZeroTotalMultiplicity));
    }

    #[test]
    fn negative_multiplicity_rejected() {
        let err = build_graph(
            names(&["a", "b"]),
            vec![1.0, -0.5],
            &edges(&[("a", "b", 1.0), ("b", "a", 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NegativeMultiplicity { .. }));
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = build_graph(
            names(&["a", "b"]),
            vec![1.0, 1.0],
            &edges(&[("a", "b", 1.0), ("a", "b", 2.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { .. }));
    }

    #[test]
    fn self_loop_rejected() {
        let err = build_graph(
            names(&["a", "b"]),
            vec![1.0, 1.0],
            &edges(&[("a", "a", 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SelfLoopEdge { .. }));
    }

    #[test]
    fn unknown_vertex_rejected() {
        let err = build_graph(
            names(&["a", "b"]),
            vec![1.0, 1.0],
            &edges(&[("a", "c", 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownVertexName { .. }));
    }

    #[test]
    fn duplicate_name_rejected() {
        let err = build_graph(names(&["a", "a"]), vec![1.0, 1.0], &[]).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertexName { .. }));
    }

    #[test]
    fn three_cycle_is_strongly_connected() {
        let g = build_graph(
            names(&["a", "b", "c"]),
            vec![1.0; 3],
            &edges(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)]),
        )
        .unwrap();
        let report = check_strong_connectivity(&g);
        assert!(report.strongly_connected);
        assert_eq!(report.components.len(), 1);
        assert_eq!(report.condensation_edge_count, 0);
    }

    #[test]
    fn one_way_path_has_singleton_components() {
        let g = build_graph(
            names(&["a", "b", "c"]),
            vec![1.0; 3],
            &edges(&[("a", "b", 1.0), ("b", "c", 1.0)]),
        )
        .unwrap();
        let report = check_strong_connectivity(&g);
        assert!(!report.strongly_connected);
        assert_eq!(report.components.len(), 3);
        assert!(report.components.iter().all(|c| c.len() == 1));
        assert_eq!(report.condensation_edge_count, 2);
    }

    #[test]
    fn bridged_two_cycles_give_two_components() {
        // Two 2-cycles {a,b} and {c,d} joined by the one-way edge b -> c.
        // Brute-force reachability closure on this 4-vertex instance:
        // a<->b mutually reachable, c<->d mutually reachable, and c,d are
        // reachable from a,b but not vice versa, so exactly 2 components.
        let g = build_graph(
            names(&["a", "b", "c", "d"]),
            vec![1.0; 4],
            &edges(&[
                ("a", "b", 1.0),
                ("b", "a", 1.0),
                ("c", "d", 1.0),
                ("d", "c", 1.0),
                ("b", "c", 1.0),
            ]),
        )
        .unwrap();
        let report = check_strong_connectivity(&g);
        assert!(!report.strongly_connected);
        assert_eq!(report.components.len(), 2);
        assert_eq!(report.condensation_edge_count, 1);
        let mut sizes: Vec<usize> = report.components.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2]);
    }

    #[test]
    fn undirected_edge_becomes_directed_pair() {
        let g = from_undirected(
            names(&["a", "b"]),
            vec![1.0, 1.0],
            &edges(&[("a", "b", 1.0)]),
        )
        .unwrap();
        assert_eq!(g.edges().len(), 2);
        let e0 = g.edges()[0];
        let e1 = g.edges()[1];
        assert_eq!((e0.source, e0.target), (VertexId(0), VertexId(1)));
        assert_eq!((e1.source, e1.target), (VertexId(1), VertexId(0)));
    }

    #[test]
    fn undirected_triangle_has_six_edges() {
        let g = from_undirected(
            names(&["a", "b", "c"]),
            vec![1.0; 3],
            &edges(&[("a", "b", 1.0), ("b", "c", 2.0), ("c", "a", 3.0)]),
        )
        .unwrap();
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn edge_csv_round_trip() {
        let g = build_graph(
            names(&["a", "b", "c"]),
            vec![1.5, 0.0, 2.25],
            &edges(&[("a", "b", 0.1), ("b", "c", 2.0), ("c", "a", 10.0)]),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let ep = dir.path().join("edges.csv");
        let vp = dir.path().join("vertices.csv");
        write_graph_files(&g, &ep, &vp).unwrap();
        let g2 = read_graph_files(&ep, Some(&vp)).unwrap();
        assert_eq!(g.names(), g2.names());
        assert_eq!(g.multiplicities(), g2.multiplicities());
        assert_eq!(g.edges(), g2.edges());
    }

    #[test]
    fn missing_vertex_file_defaults_multiplicity_one() {
        let csv = b"source,target,weight\nx,y,1\ny,x,2\n";
        let g = read_graph_bytes(csv, None).unwrap();
        assert_eq!(g.multiplicities(), &[1.0, 1.0]);
        assert_eq!(g.names(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn vertex_file_fixes_order_and_multiplicity() {
        let ecsv = b"source,target,weight\nx,y,1\ny,x,2\n";
        let vcsv = b"name,multiplicity\ny,3\nx,4\n";
        let g = read_graph_bytes(ecsv, Some(vcsv)).unwrap();
        assert_eq!(g.names(), &["y".to_string(), "x".to_string()]);
        assert_eq!(g.multiplicities(), &[3.0, 4.0]);
    }

    #[test]
    fn isolated_vertex_in_vertex_file_rejected() {
        let ecsv = b"source,target,weight\nx,y,1\ny,x,2\n";
        let vcsv = b"name,multiplicity\nx,1\ny,1\nz,1\n";
        let err = read_graph_bytes(ecsv, Some(vcsv)).unwrap_err();
        assert!(matches!(err, Error::IsolatedVertex { .. }));
    }

    #[test]
    fn malformed_weight_reports_line() {
        let csv = b"source,target,weight\nx,y,1\ny,x,oops\n";
        let err = read_graph_bytes(csv, None).unwrap_err();
        match err {
            Error::MalformedRow { line, .. } => assert_eq!(line, 3),
            other => panic!("expected MalformedRow, got {other:?}"),
        }
    }

    #[test]
    fn wrong_header_rejected() {
        let csv = b"from,to,w\nx,y,1\n";
        let err = read_graph_bytes(csv, None).unwrap_err();
        assert!(matches!(err, Error::MalformedHeader { .. }));
    }
}
