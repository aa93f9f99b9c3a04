//! Bundles and allocations. An allocation stores the owner of every item,
//! so it is a full partition by construction.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduction::{AuctionInstance, FORMAT_VERSION};

/// A set of item indices into the instance's canonical item list, kept
/// sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bundle(Vec<usize>);

impl Bundle {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Bundle(v)
    }

    pub fn empty() -> Self {
        Bundle(Vec::new())
    }

    pub fn all(item_count: usize) -> Self {
        Bundle((0..item_count).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        Bundle((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
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

    pub fn union(&self, other: &Bundle) -> Bundle {
        Bundle::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &Bundle) -> Bundle {
        Bundle(self.iter().filter(|&i| other.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &Bundle) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

/// Edge agents are identified by 0-based edge index; edge number is index + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Agent {
    Edge(usize),
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Allocation {
    owner: Vec<Agent>,
    edge_count: usize,
}

impl Allocation {
    /// Every item to the greedy agent.
    pub fn all_to_greedy(inst: &AuctionInstance) -> Self {
        Allocation {
            owner: vec![Agent::Greedy; inst.item_count()],
            edge_count: inst.edge_count(),
        }
    }

    pub fn from_owners(inst: &AuctionInstance, owner: Vec<Agent>) -> Result<Self> {
        if owner.len() != inst.item_count() {
            return Err(Error::NotPartition(format!(
                "{} owners for {} items",
                owner.len(),
                inst.item_count()
            )));
        }
        if let Some(Agent::Edge(e)) = owner
            .iter()
            .find(|a| matches!(a, Agent::Edge(e) if *e >= inst.edge_count()))
        {
            return Err(Error::NotPartition(format!("no edge agent with index {e}")));
        }
        Ok(Allocation {
            owner,
            edge_count: inst.edge_count(),
        })
    }

    /// Builds an allocation from explicit bundles. Items appearing twice are
    /// always rejected; items appearing nowhere are rejected unless
    /// `complete_with_greedy` hands them to the greedy agent.
    pub fn from_bundles(
        inst: &AuctionInstance,
        edge_bundles: &[Vec<usize>],
        greedy_bundle: &[usize],
        complete_with_greedy: bool,
    ) -> Result<Self> {
        if edge_bundles.len() != inst.edge_count() {
            return Err(Error::NotPartition(format!(
                "{} edge bundles for {} edges",
                edge_bundles.len(),
                inst.edge_count()
            )));
        }
        let mut owner: Vec<Option<Agent>> = vec![None; inst.item_count()];
        let holders = edge_bundles
            .iter()
            .enumerate()
            .map(|(e, b)| (Agent::Edge(e), b.as_slice()))
            .chain(std::iter::once((Agent::Greedy, greedy_bundle)));
        for (agent, bundle) in holders {
            for &i in bundle {
                let slot = owner.get_mut(i).ok_or_else(|| {
                    Error::NotPartition(format!("item {i} out of range"))
                })?;
                if slot.is_some() {
                    return Err(Error::NotPartition(format!("item {i} assigned twice")));
                }
                *slot = Some(agent);
            }
        }
        let owner = owner
            .into_iter()
            .enumerate()
            .map(|(i, o)| match o {
                Some(a) => Ok(a),
                None if complete_with_greedy => Ok(Agent::Greedy),
                None => Err(Error::NotPartition(format!("item {i} is unassigned"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Allocation {
            owner,
            edge_count: inst.edge_count(),
        })
    }

    pub fn owner(&self, item: usize) -> Agent {
        self.owner[item]
    }

    pub fn owners(&self) -> &[Agent] {
        &self.owner
    }

    pub fn set_owner(&mut self, item: usize, agent: Agent) {
        if let Agent::Edge(e) = agent {
            assert!(e < self.edge_count, "edge agent {e} out of range");
        }
        self.owner[item] = agent;
    }

    pub fn bundle(&self, agent: Agent) -> Bundle {
        Bundle(
            self.owner
                .iter()
                .enumerate()
                .filter(|(_, &a)| a == agent)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn edge_bundles(&self) -> Vec<Bundle> {
        let mut out = vec![Vec::new(); self.edge_count];
        for (i, a) in self.owner.iter().enumerate() {
            if let Agent::Edge(e) = a {
                out[*e].push(i);
            }
        }
        out.into_iter().map(Bundle).collect()
    }

    pub fn greedy_bundle(&self) -> Bundle {
        self.bundle(Agent::Greedy)
    }

    /// Owner vector with edge agents as `0..M` and the greedy agent as `M`;
    /// the key for canonical tie-breaking.
    pub fn assignment_vector(&self) -> Vec<usize> {
        self.owner
            .iter()
            .map(|a| match a {
                Agent::Edge(e) => *e,
                Agent::Greedy => self.edge_count,
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationFile {
    format: u32,
    edge_bundles: Vec<Vec<usize>>,
    greedy_bundle: Vec<usize>,
}

pub fn serialize_allocation(a: &Allocation) -> String {
    let file = AllocationFile {
        format: FORMAT_VERSION,
        edge_bundles: a.edge_bundles().into_iter().map(|b| b.0).collect(),
        greedy_bundle: a.greedy_bundle().0,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("allocation serializes");
    s.push('\n');
    s
}

pub fn parse_allocation(
    inst: &AuctionInstance,
    text: &str,
    complete_with_greedy: bool,
) -> Result<Allocation> {
    let file: AllocationFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("allocation file: {e}")))?;
    if file.format != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {}", file.format)));
    }
    Allocation::from_bundles(inst, &file.edge_bundles, &file.greedy_bundle, complete_with_greedy)
}

/// How [`random_allocation`] draws owners.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomAllocation {
    /// Probability that an item goes to a uniformly random edge agent
    /// instead of the usual coin flip.
    pub stray: f64,
    /// Grant every edge agent left at zero one of its two items.
    pub force_positive: bool,
}

/// Seeded random allocation. Each item first goes, with probability
/// `stray`, to a uniformly chosen edge agent; otherwise to its valuing edge
/// agent or the greedy agent with probability 1/2 each. The positivity pass
/// then walks the edges in order and, for each edge agent valued at zero,
/// moves one of its two items (chosen by a fair coin) to it.
pub fn random_allocation<R: Rng>(inst: &AuctionInstance, rng: &mut R, how: RandomAllocation) -> Allocation {
    let m = inst.edge_count();
    let owner: Vec<Agent> = (0..inst.item_count())
        .map(|i| {
            if how.stray > 0.0 && rng.random_bool(how.stray) {
                Agent::Edge(rng.random_range(0..m))
            } else if rng.random_bool(0.5) {
                Agent::Edge(inst.item_to_edge[i])
            } else {
                Agent::Greedy
            }
        })
        .collect();
    let mut a = Allocation {
        owner,
        edge_count: m,
    };
    if how.force_positive {
        for e in 0..m {
            let [x, y] = inst.edge_items[e];
            if a.owner[x] != Agent::Edge(e) && a.owner[y] != Agent::Edge(e) {
                let pick = if rng.random_bool(0.5) { x } else { y };
                a.owner[pick] = Agent::Edge(e);
            }
        }
    }
    a
}
