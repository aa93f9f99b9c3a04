//! Simple 3-regular graphs with a fixed edge numbering, plus the exact
//! vertex-cover machinery the rest of the crate leans on.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count the exhaustive cover searches accept.
pub const MAX_COVER_SEARCH_N: usize = 32;

/// Attempts made by the configuration model before giving up.
pub const PAIRING_ATTEMPTS: usize = 10_000;

/// A set of vertex indices kept sorted and deduplicated. Comparison is
/// lexicographic on the ascending index sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    /// Bitmask form; only meaningful when every member is below 64.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn complement(&self, n: usize) -> Self {
        VertexSet((0..n).filter(|&v| !self.contains(v)).collect())
    }

    pub fn without(&self, v: usize) -> Self {
        VertexSet(self.0.iter().copied().filter(|&u| u != v).collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// A validated simple cubic graph. Edge `i` (0-based index) carries edge
/// number `i + 1`; endpoints are stored with the smaller index first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    incident: Vec<[usize; 3]>,
}

impl CubicGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Param("graph needs at least one vertex".into()));
        }
        if n % 2 == 1 {
            return Err(Error::OddVertexCount(n));
        }
        let mut norm = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = [u.min(v), u.max(v)];
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e[0], e[1]));
            }
            norm.push(e);
        }
        let mut inc: Vec<Vec<usize>> = vec![Vec::with_capacity(3); n];
        for (i, e) in norm.iter().enumerate() {
            inc[e[0]].push(i);
            inc[e[1]].push(i);
        }
        if let Some((vertex, list)) = inc.iter().enumerate().find(|(_, l)| l.len() != 3) {
            return Err(Error::Degree {
                vertex,
                degree: list.len(),
            });
        }
        if norm.len() != 3 * n / 2 {
            return Err(Error::EdgeCount {
                edges: norm.len(),
                expected: 3 * n / 2,
            });
        }
        // edges were pushed in index order, so each list is already ascending
        let incident = inc.into_iter().map(|l| [l[0], l[1], l[2]]).collect();
        Ok(CubicGraph {
            n,
            edges: norm,
            incident,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of the edge at 0-based index `e`, smaller first.
    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// The three incident edge indices of `v`, ascending by edge number.
    pub fn incident(&self, v: usize) -> [usize; 3] {
        self.incident[v]
    }

    pub fn neighbors(&self, v: usize) -> [usize; 3] {
        self.incident[v].map(|e| {
            let [a, b] = self.edges[e];
            if a == v {
                b
            } else {
                a
            }
        })
    }

    fn edge_masks(&self) -> Vec<u64> {
        self.edges.iter().map(|&[u, v]| 1 << u | 1 << v).collect()
    }

    fn check_search_size(&self) -> Result<()> {
        if self.n > MAX_COVER_SEARCH_N {
            return Err(Error::Budget {
                what: "exhaustive cover search",
                size: self.n,
                limit: MAX_COVER_SEARCH_N,
            });
        }
        Ok(())
    }
}

/// Parses the text graph format: a `N M` header, then `M` lines `u v`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_graph(text: &str) -> Result<CubicGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Malformed {
        line: 1,
        msg: "missing \"N M\" header".into(),
    })?;
    let [n, m] = two_ints(header, hline)?;
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        if edges.len() == m {
            return Err(Error::Malformed {
                line,
                msg: format!("more than the {m} edges declared in the header"),
            });
        }
        let [u, v] = two_ints(l, line)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Malformed {
            line: text.lines().count(),
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    CubicGraph::new(n, edges)
}

fn two_ints(l: &str, line: usize) -> Result<[usize; 2]> {
    let bad = || Error::Malformed {
        line,
        msg: format!("expected two non-negative integers, got {l:?}"),
    };
    let mut it = l.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(bad()),
    }
}

pub fn write_graph(g: &CubicGraph) -> String {
    let mut out = format!("{} {}\n", g.n, g.edges.len());
    for [u, v] in &g.edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub const FAMILIES: [&str; 5] = ["k4", "k33", "prism", "petersen", "random"];

/// Builds a named family or a seeded random cubic graph. Named families
/// ignore the seed; a given `n` must match their fixed size.
pub fn generate_family(name: &str, n: Option<usize>, seed: Option<u64>) -> Result<CubicGraph> {
    let fixed = |size: usize, edges: Vec<(usize, usize)>| -> Result<CubicGraph> {
        if let Some(n) = n {
            if n != size {
                return Err(Error::Param(format!("family {name} has {size} vertices, not {n}")));
            }
        }
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        CubicGraph::new(size, edges)
    };
    match name {
        "k4" => fixed(4, pairs_of(0..4)),
        "k33" => fixed(
            6,
            (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect(),
        ),
        "prism" => fixed(
            6,
            vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        ),
        "petersen" => fixed(
            10,
            (0..5)
                .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)])
                .collect(),
        ),
        "random" => {
            let n = n.ok_or_else(|| Error::Param("random family needs --n".into()))?;
            let seed = seed.ok_or_else(|| Error::Param("random family needs --seed".into()))?;
            random_cubic(n, seed)
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn pairs_of(r: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let v: Vec<usize> = r.collect();
    let mut out = Vec::new();
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// Configuration model: three stubs per vertex, a ChaCha8 shuffle seeded
/// from `seed`, consecutive stubs paired. Pairings with loops or parallel
/// edges are rejected and redrawn from the same stream.
pub fn random_cubic(n: usize, seed: u64) -> Result<CubicGraph> {
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if n < 4 {
        return Err(Error::Param(format!("random cubic graphs need n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v; 3]).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                continue 'attempt;
            }
        }
        if edges.iter().any(|(u, v)| u == v) {
            continue;
        }
        return CubicGraph::new(n, edges);
    }
    Err(Error::RejectionBudget(PAIRING_ATTEMPTS))
}

pub fn is_vertex_cover(g: &CubicGraph, s: &VertexSet) -> bool {
    g.edges.iter().all(|&[u, v]| s.contains(u) || s.contains(v))
}

/// Whether the cover `s` has no removable vertex. Single-vertex removal
/// suffices: covers are closed under supersets.
pub fn is_minimal_cover(g: &CubicGraph, s: &VertexSet) -> Result<bool> {
    if !is_vertex_cover(g, s) {
        return Err(Error::NotCover);
    }
    Ok(removable_vertex(g, s).is_none())
}

/// Smallest vertex of the cover `s` whose removal still leaves a cover.
/// A vertex is removable exactly when all three of its neighbours are in `s`.
pub fn removable_vertex(g: &CubicGraph, s: &VertexSet) -> Option<usize> {
    s.iter()
        .find(|&v| v < g.n && g.neighbors(v).iter().all(|&u| s.contains(u)))
}

/// All minimum vertex covers, found by scanning subsets in ascending size
/// and stopping at the first size that admits a cover. Covers are listed in
/// ascending bitmask order.
pub fn minimum_vertex_covers(g: &CubicGraph) -> Result<(usize, Vec<VertexSet>)> {
    g.check_search_size()?;
    let masks = g.edge_masks();
    let n = g.n as u32;
    for size in 0..=n {
        let covers: Vec<VertexSet> = SubsetsOfSize::new(n, size)
            .filter(|&m| masks.iter().all(|&e| m & e != 0))
            .map(VertexSet::from_mask)
            .collect();
        if !covers.is_empty() {
            return Ok((size as usize, covers));
        }
    }
    unreachable!("the full vertex set is always a cover")
}

/// Every vertex cover, in ascending bitmask order.
pub fn all_vertex_covers(g: &CubicGraph) -> Result<Vec<VertexSet>> {
    g.check_search_size()?;
    let masks = g.edge_masks();
    Ok((0..1u64 << g.n)
        .filter(|&m| masks.iter().all(|&e| m & e != 0))
        .map(VertexSet::from_mask)
        .collect())
}

/// Number of edges with both endpoints in `s`.
pub fn d_count(g: &CubicGraph, s: &VertexSet) -> usize {
    g.edges
        .iter()
        .filter(|&&[u, v]| s.contains(u) && s.contains(v))
        .count()
}

/// The minimum vertex cover with the most internal edges; ties go to the
/// lexicographically smallest index sequence.
pub fn select_cstar(g: &CubicGraph) -> Result<VertexSet> {
    let (_, covers) = minimum_vertex_covers(g)?;
    Ok(covers
        .into_iter()
        .map(|c| (d_count(g, &c), c))
        .max_by(|(da, a), (db, b)| da.cmp(db).then_with(|| b.cmp(a)))
        .map(|(_, c)| c)
        .expect("at least one minimum cover"))
}

/// Gosper's hack: all `k`-subsets of `n` bits in ascending numeric order.
struct SubsetsOfSize {
    next: Option<u64>,
    limit: u64,
}

impl SubsetsOfSize {
    fn new(n: u32, k: u32) -> Self {
        let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
        SubsetsOfSize {
            next: (k <= n).then_some(first),
            limit: 1u64 << n,
        }
    }
}

impl Iterator for SubsetsOfSize {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur)
    }
}
