//! Compiles a cubic graph into the auction instance: three items per vertex,
//! one additive agent per edge, and one greedy agent whose value grows by a
//! factor of alpha per fully collected vertex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraction;
use crate::graph::CubicGraph;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    c: BigRational,
    epsilon: BigRational,
}

impl ReductionParams {
    pub fn new(c: BigRational, epsilon: BigRational) -> Result<Self> {
        if c < BigRational::one() {
            return Err(Error::Param(format!(
                "c must be at least 1, got {}",
                fraction::to_string(&c)
            )));
        }
        if !epsilon.is_positive() {
            return Err(Error::Param(format!(
                "epsilon must be positive, got {}",
                fraction::to_string(&epsilon)
            )));
        }
        Ok(ReductionParams { c, epsilon })
    }

    /// `c` and `epsilon` given as integers or `p/q` strings.
    pub fn parse(c: &str, epsilon: &str) -> Result<Self> {
        Self::new(fraction::parse_loose(c)?, fraction::parse_loose(epsilon)?)
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }
}

impl Default for ReductionParams {
    /// `c = 1`, `epsilon = 1/100`.
    fn default() -> Self {
        ReductionParams {
            c: BigRational::one(),
            epsilon: BigRational::new(1.into(), 100.into()),
        }
    }
}

/// One of the three items of a vertex; `rank` 1, 2, 3 stands for the
/// vertex's smallest-, middle- and largest-numbered incident edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Item {
    pub vertex: usize,
    pub rank: u8,
}

impl Item {
    pub fn index(self) -> usize {
        3 * self.vertex + (self.rank as usize - 1)
    }

    pub fn from_index(i: usize) -> Self {
        Item {
            vertex: i / 3,
            rank: (i % 3 + 1) as u8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuctionInstance {
    pub graph: CubicGraph,
    pub params: ReductionParams,
    /// `3N/2` edge agents plus the greedy agent.
    pub n_agents: usize,
    /// Canonical item list, `(vertex, rank)` ascending; item `i` is
    /// `Item::from_index(i)`.
    pub items: Vec<Item>,
    /// Edge index of the unique edge agent valuing each item.
    pub item_to_edge: Vec<usize>,
    /// The two items valued by each edge agent, lower endpoint first.
    pub edge_items: Vec<[usize; 2]>,
    pub alpha: BigRational,
    /// Reporting only; never used to compare values.
    pub alpha_log2: f64,
}

impl AuctionInstance {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    /// `f_v(e)`: the item of `v` mapped to its incident edge `e`.
    pub fn item_for(&self, v: usize, e: usize) -> Option<usize> {
        self.graph
            .incident(v)
            .iter()
            .position(|&x| x == e)
            .map(|pos| 3 * v + pos)
    }

    /// `c^n`, the scale on NSW^n that corresponds to a factor `c` on NSW.
    pub fn c_pow_n(&self) -> BigRational {
        fraction::pow(self.params.c(), self.n_agents as u32)
    }
}

/// `8^N * (c + epsilon)^(3N/2 + 1)`, exactly.
pub fn compute_alpha(g: &CubicGraph, p: &ReductionParams) -> BigRational {
    let n = g.vertex_count();
    let agents = 3 * n / 2 + 1;
    let eight_pow = BigRational::from_integer(BigInt::one() << (3 * n));
    let alpha = eight_pow * fraction::pow(&(p.c() + p.epsilon()), agents as u32);
    let two_pow_m = BigRational::from_integer(BigInt::one() << g.edge_count());
    assert!(alpha > two_pow_m, "alpha must exceed 2^M");
    alpha
}

/// `log2(alpha)` computed from the closed form rather than the big value.
fn alpha_log2(g: &CubicGraph, p: &ReductionParams) -> f64 {
    let n = g.vertex_count();
    3.0 * n as f64 + (3 * n / 2 + 1) as f64 * fraction::log2(&(p.c() + p.epsilon()))
}

pub fn build_instance(g: &CubicGraph, p: &ReductionParams) -> AuctionInstance {
    let n = g.vertex_count();
    let m = g.edge_count();
    let items: Vec<Item> = (0..3 * n).map(Item::from_index).collect();
    let mut item_to_edge = vec![usize::MAX; 3 * n];
    for v in 0..n {
        for (pos, e) in g.incident(v).into_iter().enumerate() {
            item_to_edge[3 * v + pos] = e;
        }
    }
    let edge_items: Vec<[usize; 2]> = (0..m)
        .map(|e| {
            let [u, v] = g.edge(e);
            let fu = 3 * u + g.incident(u).iter().position(|&x| x == e).unwrap();
            let fv = 3 * v + g.incident(v).iter().position(|&x| x == e).unwrap();
            [fu, fv]
        })
        .collect();
    AuctionInstance {
        graph: g.clone(),
        params: p.clone(),
        n_agents: 3 * n / 2 + 1,
        items,
        item_to_edge,
        edge_items,
        alpha: compute_alpha(g, p),
        alpha_log2: alpha_log2(g, p),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    format: u32,
    graph: GraphJson,
    c: String,
    epsilon: String,
    n_agents: usize,
    items: Vec<Item>,
    edge_items: Vec<[usize; 2]>,
    alpha: String,
}

pub fn serialize_instance(inst: &AuctionInstance) -> String {
    let file = InstanceFile {
        format: FORMAT_VERSION,
        graph: GraphJson {
            n: inst.vertex_count(),
            edges: inst.graph.edges().to_vec(),
        },
        c: fraction::to_string(inst.params.c()),
        epsilon: fraction::to_string(inst.params.epsilon()),
        n_agents: inst.n_agents,
        items: inst.items.clone(),
        edge_items: inst.edge_items.clone(),
        alpha: fraction::to_string(&inst.alpha),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
    s.push('\n');
    s
}

/// Parses and fully re-validates an instance file: every derived field is
/// recomputed from the graph and parameters and must match.
pub fn parse_instance(text: &str) -> Result<AuctionInstance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("instance file: {e}")))?;
    if file.format != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {}", file.format)));
    }
    let graph = CubicGraph::new(
        file.graph.n,
        file.graph.edges.iter().map(|&[u, v]| (u, v)).collect(),
    )?;
    let params = ReductionParams::new(
        fraction::parse_reduced(&file.c)?,
        fraction::parse_reduced(&file.epsilon)?,
    )?;
    let inst = build_instance(&graph, &params);
    if file.n_agents != inst.n_agents {
        return Err(Error::Format(format!(
            "n_agents is {}, expected {}",
            file.n_agents, inst.n_agents
        )));
    }
    if file.items != inst.items {
        return Err(Error::Format("items are not in canonical (vertex, rank) order".into()));
    }
    if file.edge_items.len() != inst.edge_items.len() {
        return Err(Error::Format("edge_items must have one entry per edge".into()));
    }
    for (e, (got, want)) in file.edge_items.iter().zip(&inst.edge_items).enumerate() {
        if got == want {
            continue;
        }
        let owners = got.map(|i| i / 3);
        if got.iter().all(|&i| i < inst.item_count()) && owners == graph.edge(e) {
            return Err(Error::MappingOrder { edge: e + 1 });
        }
        return Err(Error::Format(format!(
            "edge {} must map to one item of each endpoint",
            e + 1
        )));
    }
    let alpha = fraction::parse_reduced(&file.alpha)?;
    if alpha != inst.alpha {
        return Err(Error::AlphaMismatch {
            found: file.alpha,
            expected: fraction::to_string(&inst.alpha),
        });
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_family, parse_graph};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn labelled_k4() -> CubicGraph {
        parse_graph("4 6\n0 1\n1 2\n2 3\n0 3\n0 2\n1 3").unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ReductionParams::parse("1/2", "1/100").is_err());
        assert!(ReductionParams::parse("1", "0").is_err());
        assert!(ReductionParams::parse("1", "-1/3").is_err());
        assert!(ReductionParams::parse("1.5", "1/100").is_err());
        assert_eq!(ReductionParams::parse("1", "1/100").unwrap(), ReductionParams::default());
    }

    #[test]
    fn alpha_for_k4_and_petersen() {
        let k4 = labelled_k4();
        let a = compute_alpha(&k4, &ReductionParams::default());
        assert_eq!(a, r(4096, 1) * fraction::pow(&r(101, 100), 7));
        assert!(a > r(64, 1));
        assert!(a >= r(4096, 1));

        let pet = generate_family("petersen", None, None).unwrap();
        let p = ReductionParams::parse("2", "1/100").unwrap();
        let a = compute_alpha(&pet, &p);
        assert_eq!(a, fraction::pow(&r(8, 1), 10) * fraction::pow(&r(201, 100), 16));
    }

    #[test]
    fn labelled_k4_edge_one_and_vertex_three_mapping() {
        let inst = build_instance(&labelled_k4(), &ReductionParams::default());
        // e1 = {v1, v2} values v1' and v2'
        assert_eq!(inst.edge_items[0], [Item { vertex: 0, rank: 1 }.index(), Item { vertex: 1, rank: 1 }.index()]);
        // vertex v3 (index 2) sits on e2, e3, e5
        assert_eq!(inst.graph.incident(2), [1, 2, 4]);
        assert_eq!(inst.item_for(2, 1), Some(Item { vertex: 2, rank: 1 }.index()));
        assert_eq!(inst.item_for(2, 2), Some(Item { vertex: 2, rank: 2 }.index()));
        assert_eq!(inst.item_for(2, 4), Some(Item { vertex: 2, rank: 3 }.index()));
        assert_eq!(inst.item_for(2, 0), None);
        assert_eq!(inst.item_count(), 12);
        assert_eq!(inst.n_agents, 7);
    }

    #[test]
    fn mapping_is_a_bijection() {
        for name in ["k4", "k33", "prism", "petersen"] {
            let g = generate_family(name, None, None).unwrap();
            let inst = build_instance(&g, &ReductionParams::default());
            let mut seen = vec![0; inst.item_count()];
            for (e, pair) in inst.edge_items.iter().enumerate() {
                for &i in pair {
                    seen[i] += 1;
                    assert_eq!(inst.item_to_edge[i], e);
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "{name}");
            assert_eq!(inst.item_count(), 3 * g.vertex_count());
            assert_eq!(inst.n_agents, 3 * g.vertex_count() / 2 + 1);
        }
    }

    #[test]
    fn serialized_alpha_is_reduced_fraction() {
        let inst = build_instance(&labelled_k4(), &ReductionParams::default());
        let text = serialize_instance(&inst);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let alpha = v["alpha"].as_str().unwrap();
        assert_eq!(fraction::parse_reduced(alpha).unwrap(), inst.alpha);
        assert_eq!(v["n_agents"], 7);
        assert_eq!(v["items"].as_array().unwrap().len(), 12);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["format", "graph", "c", "epsilon", "n_agents", "items", "edge_items", "alpha"]
        );
    }

    fn tamper(inst: &AuctionInstance, f: impl FnOnce(&mut serde_json::Value)) -> Result<AuctionInstance> {
        let mut v: serde_json::Value = serde_json::from_str(&serialize_instance(inst)).unwrap();
        f(&mut v);
        parse_instance(&serde_json::to_string(&v).unwrap())
    }

    #[test]
    fn parse_rejects_tampered_fields() {
        let inst = build_instance(&labelled_k4(), &ReductionParams::default());
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);

        let off_by_one = fraction::to_string(&(&inst.alpha + BigRational::one()));
        let err = tamper(&inst, |v| v["alpha"] = off_by_one.clone().into()).unwrap_err();
        assert!(matches!(err, Error::AlphaMismatch { .. }));
        assert!(err.to_string().starts_with("alpha mismatch"));

        let err = tamper(&inst, |v| v["alpha"] = "4096/1 * (101/100)^7".into()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));

        // swap ranks 1 and 2 of vertex 0: e1 and the edge holding rank 2
        let e_rank2 = inst.item_to_edge[1];
        let err = tamper(&inst, |v| {
            let ei = v["edge_items"].as_array_mut().unwrap();
            ei[0][0] = 1.into();
            ei[e_rank2][0] = 0.into();
        })
        .unwrap_err();
        assert_eq!(err, Error::MappingOrder { edge: 1 });
        assert!(err.to_string().contains("mapping violates ordering rule"));

        let err = tamper(&inst, |v| v["n_agents"] = 8.into()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        let err = tamper(&inst, |v| v["format"] = 2.into()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        let err = tamper(&inst, |v| v["c"] = "1/2".into()).unwrap_err();
        assert!(matches!(err, Error::Param(_)));
    }
}
