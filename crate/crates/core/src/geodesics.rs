//! All-pairs geodesic distances and the symmetry constant.
//!
//! Geodesic distance from `u` to `v` is the minimum total edge length over
//! directed paths. It need not be symmetric; the [`SymmetryConstant`]
//! `S = min over ordered pairs i != j of d(i,j)/d(j,i)` quantifies how far
//! from symmetric a graph's distances are (`S = 1` iff symmetric).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Dense n x n matrix of geodesic distances, row-major: `get(i, j)` is the
/// distance from vertex `i` to vertex `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Wrap a row-major distance buffer. Panics if the buffer is not n*n.
    pub fn from_raw(n: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), n * n, "distance buffer must be n*n");
        DistanceMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    /// Transposed copy; turns incoming-distance problems into outgoing ones.
    pub fn transposed(&self) -> DistanceMatrix {
        let n = self.n;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[j * n + i] = self.d[i * n + j];
            }
        }
        DistanceMatrix { n, d }
    }
}

/// Minimum of `d(i,j)/d(j,i)` over ordered pairs; lies in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryConstant(f64);

impl SymmetryConstant {
    pub fn value(self) -> f64 {
        self.0
    }
}

// Max-heap entry ordered by smallest distance first.
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.vertex == other.vertex
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so BinaryHeap pops the smallest distance.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

fn dijkstra_row(g: &Graph, source: usize) -> Vec<f64> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        vertex: source,
    });
    while let Some(HeapEntry { dist: du, vertex: u }) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, w) in g.out_edges(crate::graph::VertexId(u)) {
            let cand = du + w;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(HeapEntry {
                    dist: cand,
                    vertex: v,
                });
            }
        }
    }
    dist
}

/// Compute all-pairs geodesic distances with one Dijkstra run per source,
/// parallelized over sources. Row `i` is produced by the worker for source
/// `i` only, so the result is identical for any worker count.
///
/// Returns [`Error::NotStronglyConnected`] if any pair is unreachable.
pub fn all_pairs_shortest(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.n();
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| dijkstra_row(g, s)).collect();
    let mut d = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if let Some(j) = row.iter().position(|x| !x.is_finite()) {
            return Err(Error::NotStronglyConnected {
                from: g.names()[i].clone(),
                to: g.names()[j].clone(),
            });
        }
        d.extend_from_slice(row);
    }
    Ok(DistanceMatrix { n, d })
}

/// `S = min_{i != j} d(i,j)/d(j,i)`; requires n >= 2.
pub fn symmetry_constant(d: &DistanceMatrix) -> Result<SymmetryConstant> {
    let n = d.n();
    if n < 2 {
        return Err(Error::DegenerateGraph { needed: 2, got: n });
    }
    let mut s = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let ratio = d.get(i, j) / d.get(j, i);
            if ratio < s {
                s = ratio;
            }
        }
    }
    Ok(SymmetryConstant(s))
}

// ---------------------------------------------------------------------------
// On-disk cache: 8-byte little-endian n, then n*n row-major little-endian
// doubles. A sidecar `<path>.sha256` holds the fingerprint of the inputs the
// matrix was computed from, so a stale cache is detected and ignored.
// ---------------------------------------------------------------------------

const CACHE_SIDECAR_EXT: &str = "sha256";

/// Fingerprint of the graph input files that determine the distance matrix:
/// the edge-list bytes and, when present, the vertex-file bytes (the vertex
/// file fixes index order, which the matrix layout depends on).
pub fn input_fingerprint(edge_csv: &[u8], vertex_csv: Option<&[u8]>) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(edge_csv);
    hasher.update([0u8]);
    if let Some(v) = vertex_csv {
        hasher.update(v);
    }
    hasher.finalize().into()
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".");
    os.push(CACHE_SIDECAR_EXT);
    std::path::PathBuf::from(os)
}

/// Persist `d` at `path` with the given input fingerprint.
pub fn save_distance_cache(path: &Path, d: &DistanceMatrix, fingerprint: &[u8; 32]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&(d.n() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(d.as_slice().len() * 8);
    for x in d.as_slice() {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    file.write_all(&buf)?;
    file.flush()?;
    std::fs::write(sidecar_path(path), hex(fingerprint))?;
    Ok(())
}

/// Load a cached matrix if `path` exists and its sidecar fingerprint matches;
/// `Ok(None)` means missing or stale (recompute), `Err` means corrupt.
pub fn load_distance_cache(path: &Path, fingerprint: &[u8; 32]) -> Result<Option<DistanceMatrix>> {
    if !path.exists() {
        return Ok(None);
    }
    let sidecar = sidecar_path(path);
    match std::fs::read_to_string(&sidecar) {
        Ok(stored) if stored.trim() == hex(fingerprint) => {}
        Ok(_) => return Ok(None),
        Err(_) => return Ok(None),
    }
    let mut file = std::fs::File::open(path)?;
    let mut header = [0u8; 8];
    file.read_exact(&mut header).map_err(|_| Error::CorruptCache {
        message: "missing header".into(),
    })?;
    let n = u64::from_le_bytes(header) as usize;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;
    if bytes.len() != n * n * 8 {
        return Err(Error::CorruptCache {
            message: format!("expected {} payload bytes, found {}", n * n * 8, bytes.len()),
        });
    }
    let d = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Some(DistanceMatrix { n, d }))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
