//! Exact NSW maximisation on reduced instances, the cover-to-allocation
//! construction, and the single-vertex improving move.

use std::cmp::Ordering;

use crate::allocation::{Agent, Allocation};
use crate::error::{Error, Result};
use crate::graph::{self, d_count, is_vertex_cover, select_cstar, VertexSet};
use crate::reduction::AuctionInstance;
use crate::valuations::{compare, nsw_power, NswPower};

/// Largest edge count for [`solve_bruteforce`] (3^M candidates).
pub const MAX_BRUTEFORCE_EDGES: usize = 16;

/// Largest vertex count for [`solve_structured`] (2^N covers).
pub const MAX_STRUCTURED_VERTICES: usize = 24;

/// What an edge agent keeps of its two items in the dominance-reduced space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Keep {
    Lower,
    Upper,
    Both,
}

const KEEPS: [Keep; 3] = [Keep::Lower, Keep::Upper, Keep::Both];

/// Exhaustive optimum over allocations where each item sits either with its
/// valuing edge agent or with the greedy agent, every edge agent keeping a
/// nonempty part of its pair (3^M candidates). Items parked at a
/// non-valuing edge agent never help; see the dominance tests. Ties go to
/// the lexicographically smallest assignment vector.
pub fn solve_bruteforce(inst: &AuctionInstance) -> Result<(Allocation, NswPower)> {
    let m = inst.edge_count();
    if m > MAX_BRUTEFORCE_EDGES {
        return Err(Error::Budget {
            what: "brute-force solver",
            size: m,
            limit: MAX_BRUTEFORCE_EDGES,
        });
    }
    let mut search = BruteForce {
        inst,
        kept_per_vertex: vec![0; inst.vertex_count()],
        choice: Vec::with_capacity(m),
        best: None,
    };
    search.descend(0, 0);
    let Some((choice, value)) = search.best else {
        let a = Allocation::all_to_greedy(inst);
        return Ok((a, NswPower::Zero));
    };
    let a = allocation_from_choice(inst, &choice);
    debug_assert_eq!(nsw_power(inst, &a), value);
    Ok((a, value))
}

struct BruteForce<'a> {
    inst: &'a AuctionInstance,
    kept_per_vertex: Vec<u8>,
    choice: Vec<Keep>,
    best: Option<(Vec<Keep>, NswPower)>,
}

impl BruteForce<'_> {
    fn descend(&mut self, e: usize, twos: u32) {
        let m = self.inst.edge_count();
        if e == m {
            let g = self.kept_per_vertex.iter().filter(|&&k| k == 0).count() as u32;
            self.offer(NswPower::new(twos, g));
            return;
        }
        let [u, v] = self.inst.graph.edge(e);
        for keep in KEEPS {
            let (ku, kv) = match keep {
                Keep::Lower => (1, 0),
                Keep::Upper => (0, 1),
                Keep::Both => (1, 1),
            };
            self.kept_per_vertex[u] += ku;
            self.kept_per_vertex[v] += kv;
            self.choice.push(keep);
            self.descend(e + 1, twos + (keep == Keep::Both) as u32);
            self.choice.pop();
            self.kept_per_vertex[u] -= ku;
            self.kept_per_vertex[v] -= kv;
        }
    }

    fn offer(&mut self, value: NswPower) {
        let m = self.inst.edge_count() as u32;
        let better = match &self.best {
            None => true,
            Some((best_choice, best_value)) => {
                match compare(value, *best_value, m).expect("two_exp <= M") {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => {
                        let mine = allocation_from_choice(self.inst, &self.choice).assignment_vector();
                        let theirs = allocation_from_choice(self.inst, best_choice).assignment_vector();
                        mine < theirs
                    }
                }
            }
        };
        if better {
            self.best = Some((self.choice.clone(), value));
        }
    }
}

fn allocation_from_choice(inst: &AuctionInstance, choice: &[Keep]) -> Allocation {
    let mut owners = vec![Agent::Greedy; inst.item_count()];
    for (e, keep) in choice.iter().enumerate() {
        let [lo, hi] = inst.edge_items[e];
        if *keep != Keep::Upper {
            owners[lo] = Agent::Edge(e);
        }
        if *keep != Keep::Lower {
            owners[hi] = Agent::Edge(e);
        }
    }
    Allocation::from_owners(inst, owners).expect("owners cover every item")
}

/// Optimum via covers: every vertex cover `C` is scored `(d_C, N - |C|)`
/// and the best one (ties to the smallest index sequence) is realised by
/// [`construct_from_cover`].
pub fn solve_structured(inst: &AuctionInstance) -> Result<(Allocation, NswPower)> {
    let n = inst.vertex_count();
    if n > MAX_STRUCTURED_VERTICES {
        return Err(Error::Budget {
            what: "structured solver",
            size: n,
            limit: MAX_STRUCTURED_VERTICES,
        });
    }
    let g = &inst.graph;
    let m = g.edge_count() as u32;
    let mut best: Option<(VertexSet, NswPower)> = None;
    for cover in graph::all_vertex_covers(g)? {
        let value = NswPower::new(d_count(g, &cover) as u32, (n - cover.len()) as u32);
        let better = match &best {
            None => true,
            Some((bc, bv)) => match compare(value, *bv, m)? {
                Ordering::Greater => true,
                Ordering::Equal => cover < *bc,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((cover, value));
        }
    }
    let (cover, value) = best.expect("the full vertex set is a cover");
    Ok((construct_from_cover(inst, &cover)?, value))
}

/// Each edge agent receives the items of its endpoints that lie in the
/// cover; the greedy agent receives everything else.
pub fn construct_from_cover(inst: &AuctionInstance, cover: &VertexSet) -> Result<Allocation> {
    if !is_vertex_cover(&inst.graph, cover) {
        return Err(Error::NotCover);
    }
    let mut owners = vec![Agent::Greedy; inst.item_count()];
    for (e, &[u, v]) in inst.graph.edges().iter().enumerate() {
        let [fu, fv] = inst.edge_items[e];
        if cover.contains(u) {
            owners[fu] = Agent::Edge(e);
        }
        if cover.contains(v) {
            owners[fv] = Agent::Edge(e);
        }
    }
    Allocation::from_owners(inst, owners)
}

/// `V_E`: vertices with at least one item held by some edge agent.
pub fn edge_vertices(inst: &AuctionInstance, a: &Allocation) -> VertexSet {
    VertexSet::new(
        (0..inst.vertex_count()).filter(|&v| (0..3).any(|r| a.owner(3 * v + r) != Agent::Greedy)),
    )
}

/// Frees the vertex `vbar` for the greedy agent.
///
/// All three items of `vbar` go to the greedy agent. Each edge touching
/// `vbar` instead receives the item of its other endpoint `v̂`, which must be
/// in `V_E` for the move to apply. Everything else stays put, so every edge
/// agent keeps at least half its value and the greedy agent gains exactly
/// the vertex `vbar`.
pub fn improve_allocation(inst: &AuctionInstance, a: &Allocation, vbar: usize) -> Result<Allocation> {
    if !nsw_power(inst, a).is_positive() {
        return Err(Error::NotPositive);
    }
    let ve = edge_vertices(inst, a);
    if !ve.contains(vbar) || !is_vertex_cover(&inst.graph, &ve.without(vbar)) {
        return Err(Error::NotRemovable(vbar));
    }
    let rest = ve.without(vbar);
    let mut out = a.clone();
    for r in 0..3 {
        out.set_owner(3 * vbar + r, Agent::Greedy);
    }
    for e in inst.graph.incident(vbar) {
        // smallest vertex of (V_E \ {vbar}) ∩ e; here only the other endpoint
        let vhat = inst
            .graph
            .edge(e)
            .into_iter()
            .find(|&x| rest.contains(x))
            .expect("rest is a cover");
        let item = inst.item_for(vhat, e).expect("vhat is an endpoint");
        out.set_owner(item, Agent::Edge(e));
    }
    Ok(out)
}

/// The closed-form optimum `(d_{C*}, N - |C*|)`.
pub fn opt_formula(inst: &AuctionInstance) -> Result<NswPower> {
    let cstar = select_cstar(&inst.graph)?;
    Ok(NswPower::new(
        d_count(&inst.graph, &cstar) as u32,
        (inst.vertex_count() - cstar.len()) as u32,
    ))
}
