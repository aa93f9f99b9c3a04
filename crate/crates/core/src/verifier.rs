//! Diagnoses allocations of a reduced instance: value decomposition,
//! c-approximation, and extraction of the minimum vertex cover.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::allocation::{random_allocation, Agent, Allocation, RandomAllocation};
use crate::error::{Error, Result};
use crate::fraction;
use crate::graph::{
    all_vertex_covers, d_count, is_minimal_cover, is_vertex_cover, minimum_vertex_covers,
    removable_vertex, select_cstar, VertexSet,
};
use crate::reduction::{AuctionInstance, FORMAT_VERSION};
use crate::solver::{
    construct_from_cover, edge_vertices, improve_allocation, opt_formula, solve_bruteforce,
    solve_structured,
};
use crate::valuations::{covered_vertices, nsw_log2, nsw_power, to_big_rational, NswPower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    NotPositive,
    Positive {
        v_e: VertexSet,
        v_g: VertexSet,
        k: u32,
    },
}

/// Splits a positive allocation into `V_E`, `V_g` and the number `k` of
/// edge agents holding both of their items.
pub fn decompose(inst: &AuctionInstance, a: &Allocation) -> Decomposition {
    if !nsw_power(inst, a).is_positive() {
        return Decomposition::NotPositive;
    }
    Decomposition::Positive {
        v_e: edge_vertices(inst, a),
        v_g: covered_vertices(inst, &a.greedy_bundle()),
        k: twos(inst, a),
    }
}

fn twos(inst: &AuctionInstance, a: &Allocation) -> u32 {
    inst.edge_items
        .iter()
        .enumerate()
        .filter(|(e, pair)| pair.iter().all(|&i| a.owner(i) == Agent::Edge(*e)))
        .count() as u32
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactValues {
    pub nsw: String,
    pub opt: String,
    pub c_pow_n: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisplayValues {
    pub nsw_log2: Option<f64>,
    pub opt_log2: f64,
    pub alpha_log2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifierReport {
    pub format: u32,
    pub positive: bool,
    pub v_e: VertexSet,
    pub v_g: VertexSet,
    pub k: u32,
    pub nsw: NswPower,
    pub opt: NswPower,
    pub is_cover: bool,
    pub is_minimal: bool,
    pub is_minimum: bool,
    pub c_approximate: bool,
    pub theorem_holds: bool,
    pub exact: ExactValues,
    pub display: DisplayValues,
}

/// Full diagnosis of one allocation. `c_approximate` is the exact test
/// `NSW^n * c^n >= OPT^n`.
pub fn verify_capprox(inst: &AuctionInstance, a: &Allocation) -> Result<VerifierReport> {
    let g = &inst.graph;
    let nsw = nsw_power(inst, a);
    let opt = opt_formula(inst)?;
    let (mvc_size, _) = minimum_vertex_covers(g)?;
    let v_e = edge_vertices(inst, a);
    let v_g = covered_vertices(inst, &a.greedy_bundle());
    let is_cover = is_vertex_cover(g, &v_e);
    let is_minimal = is_cover && is_minimal_cover(g, &v_e)?;
    let is_minimum = is_cover && v_e.len() == mvc_size;

    let c_pow_n = inst.c_pow_n();
    let nsw_exact = to_big_rational(nsw, &inst.alpha);
    let opt_exact = to_big_rational(opt, &inst.alpha);
    let c_approximate = &nsw_exact * &c_pow_n >= opt_exact;

    Ok(VerifierReport {
        format: FORMAT_VERSION,
        positive: nsw.is_positive(),
        v_e,
        v_g,
        k: twos(inst, a),
        nsw,
        opt,
        is_cover,
        is_minimal,
        is_minimum,
        c_approximate,
        theorem_holds: !c_approximate || is_minimum,
        exact: ExactValues {
            nsw: fraction::to_string(&nsw_exact),
            opt: fraction::to_string(&opt_exact),
            c_pow_n: fraction::to_string(&c_pow_n),
        },
        display: DisplayValues {
            nsw_log2: nsw_log2(nsw, inst.alpha_log2, inst.n_agents).ok(),
            opt_log2: nsw_log2(opt, inst.alpha_log2, inst.n_agents)?,
            alpha_log2: inst.alpha_log2,
        },
    })
}

/// `V_E` of a c-approximate allocation, which is then a minimum vertex cover.
pub fn extract_cover(inst: &AuctionInstance, a: &Allocation) -> Result<VertexSet> {
    let report = verify_capprox(inst, a)?;
    if !report.c_approximate {
        return Err(Error::NotApproximate);
    }
    if !report.is_minimum {
        return Err(Error::Falsified(format!(
            "c-approximate allocation has V_E = {{{}}}, not a minimum cover",
            report.v_e
        )));
    }
    Ok(report.v_e)
}

/// Exact helper holding powers of alpha for repeated comparisons.
struct Exact<'a> {
    inst: &'a AuctionInstance,
    alpha_pows: Vec<BigRational>,
    c_pow_n: BigRational,
}

impl<'a> Exact<'a> {
    fn new(inst: &'a AuctionInstance) -> Self {
        let mut alpha_pows = vec![BigRational::one()];
        for _ in 0..=inst.vertex_count() {
            let next = alpha_pows.last().unwrap() * &inst.alpha;
            alpha_pows.push(next);
        }
        Exact {
            inst,
            alpha_pows,
            c_pow_n: inst.c_pow_n(),
        }
    }

    fn value(&self, two_exp: u32, alpha_exp: u32) -> BigRational {
        BigRational::from_integer(BigInt::one() << two_exp) * &self.alpha_pows[alpha_exp as usize]
    }

    fn of(&self, x: NswPower) -> BigRational {
        to_big_rational(x, &self.inst.alpha)
    }
}

/// The two steps bounding a larger-than-minimum cover `C` away from the
/// optimum: `c^n 2^{d_C} alpha^{N-|C|} < alpha^{N-|C|+1}` and
/// `alpha^{N-|C|+1} <= 2^{d_{C*}} alpha^{N-|C*|}`.
pub fn gap_chain(inst: &AuctionInstance, cover: &VertexSet, cstar: &VertexSet) -> (bool, bool) {
    gap_chain_with(&Exact::new(inst), cover, cstar)
}

fn gap_chain_with(x: &Exact, cover: &VertexSet, cstar: &VertexSet) -> (bool, bool) {
    let g = &x.inst.graph;
    let n = g.vertex_count() as u32;
    let free = n - cover.len() as u32;
    let lhs = &x.c_pow_n * x.value(d_count(g, cover) as u32, free);
    let mid = x.value(0, free + 1);
    let opt = x.value(d_count(g, cstar) as u32, n - cstar.len() as u32);
    (lhs < mid, mid <= opt)
}

/// Sweeps cross-check the optimum with brute force up to this edge count.
pub const SWEEP_BRUTEFORCE_EDGES: usize = 12;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepViolation {
    pub trial: usize,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub format: u32,
    pub mode: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub structured: usize,
    pub positive: usize,
    pub non_minimal: usize,
    pub minimal_not_minimum: usize,
    pub minimum: usize,
    pub c_approximate: usize,
    pub improvements_checked: usize,
    pub gap_chains_checked: usize,
    pub opt: NswPower,
    pub opt_cross_check: &'static str,
    pub checked: usize,
    pub violation_count: usize,
    pub violations: Vec<SweepViolation>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Sweeps `trials` seeded random positive allocations plus the allocation
/// built from every vertex cover, checking on each:
/// the decomposition of its value, that a non-minimal `V_E` is beaten by
/// the improving move by more than a factor `c`, that a minimal but not
/// minimum `V_E` sits below the optimum by more than `c` (step by step),
/// and that every c-approximate allocation has a minimum `V_E`.
///
/// Random allocations come from [`random_allocation`] with
/// `force_positive`, seeded with `ChaCha8Rng::seed_from_u64(seed)`; even
/// trials use no stray items, odd trials send items to a random edge agent
/// with probability 1/4.
pub fn theorem_sweep(inst: &AuctionInstance, trials: usize, seed: u64) -> Result<SweepReport> {
    let g = &inst.graph;
    let opt = opt_formula(inst)?;
    let (structured_alloc, structured_opt) = solve_structured(inst)?;
    debug_assert_eq!(nsw_power(inst, &structured_alloc), structured_opt);
    let mut violations = Vec::new();
    if structured_opt != opt {
        violations.push(SweepViolation {
            trial: 0,
            kind: "opt_formula disagrees with structured solver".into(),
        });
    }
    let opt_cross_check = if inst.edge_count() <= SWEEP_BRUTEFORCE_EDGES {
        if solve_bruteforce(inst)?.1 != opt {
            violations.push(SweepViolation {
                trial: 0,
                kind: "opt_formula disagrees with brute force".into(),
            });
        }
        "bruteforce"
    } else {
        "structured"
    };

    let (mvc_size, _) = minimum_vertex_covers(g)?;
    let cstar = select_cstar(g)?;
    let exact = Exact::new(inst);
    let opt_exact = exact.of(opt);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut allocations: Vec<Allocation> = (0..trials)
        .map(|t| {
            let how = RandomAllocation {
                stray: if t % 2 == 0 { 0.0 } else { 0.25 },
                force_positive: true,
            };
            random_allocation(inst, &mut rng, how)
        })
        .collect();
    let covers = all_vertex_covers(g)?;
    let structured = covers.len();
    for c in &covers {
        allocations.push(construct_from_cover(inst, c)?);
    }

    let mut r = SweepReport {
        format: FORMAT_VERSION,
        mode: "lemmas",
        seed,
        trials,
        structured,
        positive: 0,
        non_minimal: 0,
        minimal_not_minimum: 0,
        minimum: 0,
        c_approximate: 0,
        improvements_checked: 0,
        gap_chains_checked: 0,
        opt,
        opt_cross_check,
        checked: allocations.len(),
        violation_count: 0,
        violations,
    };
    let flag = |r: &mut SweepReport, trial: usize, kind: &str| {
        r.violations.push(SweepViolation {
            trial,
            kind: kind.to_string(),
        });
    };

    for (trial, a) in allocations.iter().enumerate() {
        let nsw = nsw_power(inst, a);
        let Decomposition::Positive { v_e, v_g, k } = decompose(inst, a) else {
            flag(&mut r, trial, "sweep allocation is not positive");
            continue;
        };
        r.positive += 1;

        // value decomposition and complementarity
        if nsw != NswPower::new(k, v_g.len() as u32) {
            flag(&mut r, trial, "NSW^n != 2^k alpha^|V_g|");
        }
        if k as usize > d_count(g, &v_e) {
            flag(&mut r, trial, "k > d_{V_E}");
        }
        if !is_vertex_cover(g, &v_e) {
            flag(&mut r, trial, "V_E is not a vertex cover");
            continue;
        }
        if v_g != v_e.complement(g.vertex_count()) {
            flag(&mut r, trial, "V_E and V_g are not complementary");
        }

        let value = exact.of(nsw);
        let c_approx = &value * &exact.c_pow_n >= opt_exact;
        if c_approx {
            r.c_approximate += 1;
        }

        if let Some(vbar) = removable_vertex(g, &v_e) {
            r.non_minimal += 1;
            if c_approx {
                flag(&mut r, trial, "non-minimal V_E is c-approximate");
            }
            let better = improve_allocation(inst, a, vbar)?;
            let improved = exact.of(nsw_power(inst, &better));
            r.improvements_checked += 1;
            if &improved * BigRational::from_integer(8.into()) < &inst.alpha * &value {
                flag(&mut r, trial, "improving move gains less than alpha/8");
            }
            if improved <= &exact.c_pow_n * &value {
                flag(&mut r, trial, "improving move gains no more than c");
            }
        } else if v_e.len() > mvc_size {
            r.minimal_not_minimum += 1;
            if c_approx {
                flag(&mut r, trial, "minimal non-minimum V_E is c-approximate");
            }
            let (first, second) = gap_chain_with(&exact, &v_e, &cstar);
            r.gap_chains_checked += 1;
            if !first {
                flag(&mut r, trial, "c^n 2^d alpha^(N-|C|) >= alpha^(N-|C|+1)");
            }
            if !second {
                flag(&mut r, trial, "alpha^(N-|C|+1) > OPT^n");
            }
        } else {
            r.minimum += 1;
        }
        if c_approx && v_e.len() != mvc_size {
            flag(&mut r, trial, "c-approximate allocation without minimum V_E");
        }
    }
    r.violation_count = r.violations.len();
    Ok(r)
}
