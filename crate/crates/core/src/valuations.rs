//! Agent valuations, the exact NSW^n representation, and the
//! valuation-class checks.
//!
//! Greedy values are never materialised on hot paths: a bundle is reduced
//! to its exponent `|V_S|` and big rationals only appear when two sums of
//! powers of alpha have to be compared.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::allocation::{Agent, Allocation, Bundle};
use crate::error::{Error, Result};
use crate::fraction;
use crate::graph::VertexSet;
use crate::reduction::{AuctionInstance, FORMAT_VERSION};

/// Largest item count accepted by the exhaustive supermodularity sweep.
pub const MAX_EXHAUSTIVE_ITEMS: usize = 14;

/// Violations kept verbatim in a report; the count is always exact.
pub const MAX_LISTED_VIOLATIONS: usize = 32;

/// NSW raised to the number of agents: zero, or `2^two_exp * alpha^alpha_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NswPower {
    Zero,
    Positive { two_exp: u32, alpha_exp: u32 },
}

impl NswPower {
    pub fn new(two_exp: u32, alpha_exp: u32) -> Self {
        NswPower::Positive { two_exp, alpha_exp }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, NswPower::Positive { .. })
    }

    pub fn exponents(&self) -> Option<(u32, u32)> {
        match *self {
            NswPower::Zero => None,
            NswPower::Positive { two_exp, alpha_exp } => Some((two_exp, alpha_exp)),
        }
    }
}

impl Serialize for NswPower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Exps {
            two_exp: u32,
            alpha_exp: u32,
        }
        match *self {
            NswPower::Zero => s.serialize_none(),
            NswPower::Positive { two_exp, alpha_exp } => {
                s.serialize_some(&Exps { two_exp, alpha_exp })
            }
        }
    }
}

/// `v_e(S)`: how many of the two items mapped to edge `e` lie in `s`.
pub fn edge_value(inst: &AuctionInstance, e: usize, s: &Bundle) -> u32 {
    inst.edge_items[e].iter().filter(|&&i| s.contains(i)).count() as u32
}

/// `V_S`: vertices all three of whose items are in `s`.
pub fn covered_vertices(inst: &AuctionInstance, s: &Bundle) -> VertexSet {
    VertexSet::new((0..inst.vertex_count()).filter(|&v| (0..3).all(|r| s.contains(3 * v + r))))
}

/// `|V_S|`; the greedy agent values `s` at `alpha^|V_S|`.
pub fn greedy_exponent(inst: &AuctionInstance, s: &Bundle) -> u32 {
    (0..inst.vertex_count())
        .filter(|&v| (0..3).all(|r| s.contains(3 * v + r)))
        .count() as u32
}

pub fn greedy_value(inst: &AuctionInstance, s: &Bundle) -> BigRational {
    fraction::pow(&inst.alpha, greedy_exponent(inst, s))
}

pub fn nsw_power(inst: &AuctionInstance, a: &Allocation) -> NswPower {
    let mut twos = 0;
    for (e, pair) in inst.edge_items.iter().enumerate() {
        match pair.iter().filter(|&&i| a.owner(i) == Agent::Edge(e)).count() {
            0 => return NswPower::Zero,
            2 => twos += 1,
            _ => {}
        }
    }
    let g = (0..inst.vertex_count())
        .filter(|&v| (0..3).all(|r| a.owner(3 * v + r) == Agent::Greedy))
        .count();
    NswPower::new(twos, g as u32)
}

/// Orders two NSW^n values of the same instance by `(alpha_exp, two_exp)`.
///
/// Valid because `alpha > 2^M`: one extra power of alpha outweighs any
/// difference in powers of two as long as `two_exp <= M`.
pub fn compare(x: NswPower, y: NswPower, m: u32) -> Result<Ordering> {
    for v in [x, y] {
        if let NswPower::Positive { two_exp, .. } = v {
            if two_exp > m {
                return Err(Error::CompareBound { two_exp, bound: m });
            }
        }
    }
    Ok(match (x, y) {
        (NswPower::Zero, NswPower::Zero) => Ordering::Equal,
        (NswPower::Zero, _) => Ordering::Less,
        (_, NswPower::Zero) => Ordering::Greater,
        (
            NswPower::Positive { two_exp: k1, alpha_exp: g1 },
            NswPower::Positive { two_exp: k2, alpha_exp: g2 },
        ) => g1.cmp(&g2).then(k1.cmp(&k2)),
    })
}

pub fn to_big_rational(x: NswPower, alpha: &BigRational) -> BigRational {
    match x {
        NswPower::Zero => BigRational::zero(),
        NswPower::Positive { two_exp, alpha_exp } => {
            BigRational::from_integer(BigInt::one() << two_exp) * fraction::pow(alpha, alpha_exp)
        }
    }
}

/// `log2 NSW = (k + g * log2 alpha) / n`, for display.
pub fn nsw_log2(x: NswPower, alpha_log2: f64, n: usize) -> Result<f64> {
    match x {
        NswPower::Zero => Err(Error::NotPositive),
        NswPower::Positive { two_exp, alpha_exp } => {
            Ok((two_exp as f64 + alpha_exp as f64 * alpha_log2) / n as f64)
        }
    }
}

/// Memoised exact check `alpha^a + alpha^b >= alpha^c + alpha^d`.
struct PowerSums<'a> {
    alpha: &'a BigRational,
    pows: Vec<BigRational>,
    memo: HashMap<[u32; 4], bool>,
}

impl<'a> PowerSums<'a> {
    fn new(alpha: &'a BigRational) -> Self {
        PowerSums {
            alpha,
            pows: vec![BigRational::one()],
            memo: HashMap::new(),
        }
    }

    fn pow(&mut self, e: u32) -> &BigRational {
        while self.pows.len() <= e as usize {
            let next = self.pows.last().unwrap() * self.alpha;
            self.pows.push(next);
        }
        &self.pows[e as usize]
    }

    fn holds(&mut self, a: u32, b: u32, c: u32, d: u32) -> bool {
        if let Some(&v) = self.memo.get(&[a, b, c, d]) {
            return v;
        }
        let lhs = self.pow(a).clone() + self.pow(b);
        let rhs = self.pow(c).clone() + self.pow(d);
        let v = lhs >= rhs;
        self.memo.insert([a, b, c, d], v);
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub s: Bundle,
    pub t: Bundle,
}

/// One row of the per-vertex indicator table, observed on a constructed
/// witness pair for vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorRow {
    pub in_s: u8,
    pub in_t: u8,
    pub in_cap: u8,
    pub in_cup: u8,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupermodularReport {
    pub format: u32,
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub v_g_empty: String,
    pub mode: CheckMode,
    pub seed: u64,
    pub violation_count: u64,
    pub monotone_checked: u64,
    pub indicator_rows: Vec<IndicatorRow>,
}

impl SupermodularReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// `alpha^|V_∅|` rendered as an integer string; always `"1"`.
fn greedy_empty_value(inst: &AuctionInstance) -> String {
    let v = greedy_value(inst, &Bundle::empty());
    if v.is_integer() {
        v.numer().to_string()
    } else {
        fraction::to_string(&v)
    }
}

/// Witness pairs for the four indicator-table rows on vertex 0, with both
/// outcomes of the (0, 0) row.
pub fn indicator_rows(inst: &AuctionInstance) -> Vec<IndicatorRow> {
    let (a, b, c) = (0, 1, 2);
    let witnesses = [
        (vec![a], vec![b]),
        (vec![a], vec![b, c]),
        (vec![a], vec![a, b, c]),
        (vec![a, b, c], vec![a]),
        (vec![a, b, c], vec![a, b, c]),
    ];
    witnesses
        .into_iter()
        .map(|(s, t)| {
            let (s, t) = (Bundle::new(s), Bundle::new(t));
            let ind = |x: &Bundle| covered_vertices(inst, x).contains(0) as u8;
            let (is, it) = (ind(&s), ind(&t));
            let icap = ind(&s.intersection(&t));
            let icup = ind(&s.union(&t));
            IndicatorRow {
                in_s: is,
                in_t: it,
                in_cap: icap,
                in_cup: icup,
                holds: icup as i32 >= is as i32 + it as i32 - icap as i32,
            }
        })
        .collect()
}

/// Per-vertex indicator violations: vertices where
/// `1[cup] + 1[cap] < 1[S] + 1[T]`.
fn indicator_violation(s: u64, t: u64, cap: u64, cup: u64) -> bool {
    let both = s & t;
    let one = s ^ t;
    (both & !(cup & cap)) != 0 || (one & !(cup | cap)) != 0
}

#[derive(Default)]
struct SweepAcc {
    checked: u64,
    count: u64,
    monotone_checked: u64,
    listed: Vec<Violation>,
}

impl SweepAcc {
    fn record(&mut self, kind: &'static str, s: u64, t: u64) {
        self.count += 1;
        if self.listed.len() < MAX_LISTED_VIOLATIONS {
            self.listed.push(Violation {
                kind,
                s: Bundle::from_mask(s),
                t: Bundle::from_mask(t),
            });
        }
    }

    fn merge(mut self, other: SweepAcc) -> SweepAcc {
        self.checked += other.checked;
        self.count += other.count;
        self.monotone_checked += other.monotone_checked;
        for v in other.listed {
            if self.listed.len() < MAX_LISTED_VIOLATIONS {
                self.listed.push(v);
            }
        }
        self
    }
}

/// Checks `v_g(S∪T) + v_g(S∩T) >= v_g(S) + v_g(T)`, monotonicity, and the
/// per-vertex indicator inequality.
///
/// Exhaustive mode visits every ordered pair of bundles (item count at most
/// [`MAX_EXHAUSTIVE_ITEMS`]). Sampled mode draws `budget` pairs from
/// `ChaCha8Rng::seed_from_u64(seed)`, each item joining `S` and `T`
/// independently with probability 1/2; the monotonicity check pairs each
/// `S` with `S ∪ T`.
pub fn check_supermodular(
    inst: &AuctionInstance,
    mode: CheckMode,
    budget: u64,
    seed: u64,
) -> Result<SupermodularReport> {
    let acc = match mode {
        CheckMode::Exhaustive => exhaustive_sweep(inst)?,
        CheckMode::Sampled => sampled_sweep(inst, budget, seed),
    };
    Ok(SupermodularReport {
        format: FORMAT_VERSION,
        checked: acc.checked,
        violations: acc.listed,
        v_g_empty: greedy_empty_value(inst),
        mode,
        seed,
        violation_count: acc.count,
        monotone_checked: acc.monotone_checked,
        indicator_rows: indicator_rows(inst),
    })
}

fn exhaustive_sweep(inst: &AuctionInstance) -> Result<SweepAcc> {
    let items = inst.item_count();
    if items > MAX_EXHAUSTIVE_ITEMS {
        return Err(Error::Budget {
            what: "exhaustive supermodularity check",
            size: items,
            limit: MAX_EXHAUSTIVE_ITEMS,
        });
    }
    let n = inst.vertex_count();
    let size = 1usize << items;
    let triples: Vec<u64> = (0..n).map(|v| 0b111u64 << (3 * v)).collect();
    let cover: Vec<u64> = (0..size as u64)
        .map(|s| {
            triples
                .iter()
                .enumerate()
                .filter(|(_, &t)| s & t == t)
                .fold(0, |acc, (v, _)| acc | 1 << v)
        })
        .collect();
    let exp: Vec<u32> = cover.iter().map(|c| c.count_ones()).collect();

    // the inequality only depends on four exponents in 0..=N
    let side = n + 1;
    let mut table = vec![false; side.pow(4)];
    let mut sums = PowerSums::new(&inst.alpha);
    for (idx, slot) in table.iter_mut().enumerate() {
        let (a, b, c, d) = (idx / side.pow(3), idx / side.pow(2) % side, idx / side % side, idx % side);
        *slot = sums.holds(a as u32, b as u32, c as u32, d as u32);
    }
    let holds = |a: u32, b: u32, c: u32, d: u32| {
        table[((a as usize * side + b as usize) * side + c as usize) * side + d as usize]
    };

    let row = |s: u64| {
        let mut acc = SweepAcc::default();
        for t in 0..size as u64 {
            let (cup, cap) = (s | t, s & t);
            acc.checked += 1;
            if !holds(exp[cup as usize], exp[cap as usize], exp[s as usize], exp[t as usize]) {
                acc.record("supermodular", s, t);
            }
            if indicator_violation(cover[s as usize], cover[t as usize], cover[cap as usize], cover[cup as usize]) {
                acc.record("indicator", s, t);
            }
            if cap == s {
                acc.monotone_checked += 1;
                if exp[s as usize] > exp[t as usize] {
                    acc.record("monotone", s, t);
                }
            }
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<SweepAcc> = {
        use rayon::prelude::*;
        (0..size as u64).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<SweepAcc> = (0..size as u64).map(row).collect();

    Ok(rows.into_iter().fold(SweepAcc::default(), SweepAcc::merge))
}

fn random_bundle<R: Rng>(rng: &mut R, items: usize) -> Bundle {
    Bundle::new((0..items).filter(|_| rng.random_bool(0.5)))
}

fn cover_mask(inst: &AuctionInstance, s: &Bundle) -> Vec<bool> {
    let cv = covered_vertices(inst, s);
    (0..inst.vertex_count()).map(|v| cv.contains(v)).collect()
}

fn sampled_sweep(inst: &AuctionInstance, budget: u64, seed: u64) -> SweepAcc {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = PowerSums::new(&inst.alpha);
    let mut acc = SweepAcc::default();
    let items = inst.item_count();
    let push = |acc: &mut SweepAcc, kind, s: &Bundle, t: &Bundle| {
        acc.count += 1;
        if acc.listed.len() < MAX_LISTED_VIOLATIONS {
            acc.listed.push(Violation {
                kind,
                s: s.clone(),
                t: t.clone(),
            });
        }
    };
    for _ in 0..budget {
        let s = random_bundle(&mut rng, items);
        let t = random_bundle(&mut rng, items);
        let (cup, cap) = (s.union(&t), s.intersection(&t));
        let e = |x: &Bundle| greedy_exponent(inst, x);
        acc.checked += 1;
        if !sums.holds(e(&cup), e(&cap), e(&s), e(&t)) {
            push(&mut acc, "supermodular", &s, &t);
        }
        let [ms, mt, mcap, mcup] = [&s, &t, &cap, &cup].map(|x| cover_mask(inst, x));
        let bad = (0..inst.vertex_count()).any(|v| {
            (mcup[v] as i32 + mcap[v] as i32) < ms[v] as i32 + mt[v] as i32
        });
        if bad {
            push(&mut acc, "indicator", &s, &t);
        }
        acc.monotone_checked += 1;
        if e(&s) > e(&cup) {
            push(&mut acc, "monotone", &s, &cup);
        }
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub format: u32,
    pub mode: &'static str,
    pub seed: u64,
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub v_g_empty: String,
    pub violation_count: u64,
    pub edge_additive_checked: u64,
    pub greedy_superadditive_checked: u64,
    /// Disjoint pairs with `v_g(S∪T) < v_g(S) + v_g(T)` for the raw greedy
    /// valuation, whose value on bundles covering nothing is 1, not 0.
    /// Informational; the pass/fail check uses `v_g - v_g(∅)`.
    pub raw_superadditive_failures: u64,
}

impl ClassReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Confirms each edge valuation is additive and the greedy valuation is
/// superadditive once normalised.
///
/// Per edge agent: all four subsets of its two items, each combined with
/// `samples` random subsets of the other items, must evaluate to the sum of
/// singleton values. Greedy agent: `samples` random disjoint nonempty pairs
/// (each item to `S`, `T`, or neither with probability 1/3) must satisfy
/// `v_g(S∪T) - v_g(∅) >= (v_g(S) - v_g(∅)) + (v_g(T) - v_g(∅))`.
pub fn check_superadditive_additive(inst: &AuctionInstance, samples: u64, seed: u64) -> ClassReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = inst.item_count();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut record = |kind, s: Bundle, t: Bundle| {
        violation_count += 1;
        if violations.len() < MAX_LISTED_VIOLATIONS {
            violations.push(Violation { kind, s, t });
        }
    };

    let mut edge_checked = 0;
    for e in 0..inst.edge_count() {
        let [x, y] = inst.edge_items[e];
        let others: Vec<usize> = (0..items).filter(|&i| i != x && i != y).collect();
        for _ in 0..samples.max(1) {
            let extra: Vec<usize> = others.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            for mask in 0..4u8 {
                let mut s = extra.clone();
                if mask & 1 == 1 {
                    s.push(x);
                }
                if mask & 2 == 2 {
                    s.push(y);
                }
                let s = Bundle::new(s);
                let singles: u32 = s.iter().map(|i| edge_value(inst, e, &Bundle::new([i]))).sum();
                edge_checked += 1;
                if edge_value(inst, e, &s) != singles {
                    record("edge_additive", s, Bundle::empty());
                }
            }
        }
    }

    let mut sums = PowerSums::new(&inst.alpha);
    let mut greedy_checked = 0;
    let mut raw_failures = 0;
    while greedy_checked < samples {
        let (mut s, mut t) = (Vec::new(), Vec::new());
        for i in 0..items {
            match rng.random_range(0..3u8) {
                0 => s.push(i),
                1 => t.push(i),
                _ => {}
            }
        }
        if s.is_empty() || t.is_empty() {
            continue;
        }
        let (s, t) = (Bundle::new(s), Bundle::new(t));
        let e = |x: &Bundle| greedy_exponent(inst, x);
        let (gs, gt, gu) = (e(&s), e(&t), e(&s.union(&t)));
        greedy_checked += 1;
        // normalised form: alpha^gu + alpha^0 >= alpha^gs + alpha^gt
        if !sums.holds(gu, 0, gs, gt) {
            record("greedy_superadditive", s.clone(), t.clone());
        }
        let raw = sums.pow(gu).clone() >= sums.pow(gs).clone() + sums.pow(gt);
        if !raw {
            raw_failures += 1;
        }
    }

    ClassReport {
        format: FORMAT_VERSION,
        mode: "classes",
        seed,
        checked: edge_checked + greedy_checked,
        violations,
        v_g_empty: greedy_empty_value(inst),
        violation_count,
        edge_additive_checked: edge_checked,
        greedy_superadditive_checked: greedy_checked,
        raw_superadditive_failures: raw_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_family, parse_graph};
    use crate::reduction::{build_instance, ReductionParams};

    fn labelled_k4() -> AuctionInstance {
        let g = parse_graph("4 6\n0 1\n1 2\n2 3\n0 3\n0 2\n1 3").unwrap();
        build_instance(&g, &ReductionParams::default())
    }

    #[test]
    fn edge_values() {
        let inst = labelled_k4();
        assert_eq!(edge_value(&inst, 0, &Bundle::new([0])), 1);
        assert_eq!(edge_value(&inst, 0, &Bundle::new([3])), 1);
        assert_eq!(edge_value(&inst, 0, &Bundle::new([1, 2, 4])), 0);
        assert_eq!(edge_value(&inst, 3, &Bundle::empty()), 0);
        assert_eq!(edge_value(&inst, 0, &Bundle::all(12)), 2);
    }

    #[test]
    fn covered_and_exponent() {
        let inst = labelled_k4();
        assert_eq!(covered_vertices(&inst, &Bundle::new([6, 7, 8])), VertexSet::new([2]));
        assert_eq!(covered_vertices(&inst, &Bundle::new([6, 7])), VertexSet::empty());
        assert_eq!(covered_vertices(&inst, &Bundle::all(12)), VertexSet::full(4));
        assert_eq!(greedy_exponent(&inst, &Bundle::empty()), 0);
        assert_eq!(greedy_exponent(&inst, &Bundle::all(12)), 4);
        assert_eq!(greedy_exponent(&inst, &Bundle::new(0..6)), 2);
        assert_eq!(greedy_value(&inst, &Bundle::empty()), BigRational::one());
    }

    #[test]
    fn nsw_power_extremes() {
        let inst = labelled_k4();
        let everything_to_g = Allocation::all_to_greedy(&inst);
        assert_eq!(nsw_power(&inst, &everything_to_g), NswPower::Zero);
        let mut owners = vec![Agent::Greedy; 12];
        for (i, &e) in inst.item_to_edge.iter().enumerate() {
            owners[i] = Agent::Edge(e);
        }
        let full = Allocation::from_owners(&inst, owners).unwrap();
        assert_eq!(nsw_power(&inst, &full), NswPower::new(6, 0));
    }

    #[test]
    fn compare_cases() {
        let m = 6;
        assert_eq!(compare(NswPower::Zero, NswPower::new(0, 0), m).unwrap(), Ordering::Less);
        assert_eq!(compare(NswPower::new(6, 0), NswPower::new(0, 1), m).unwrap(), Ordering::Less);
        assert_eq!(compare(NswPower::new(3, 1), NswPower::new(2, 1), m).unwrap(), Ordering::Greater);
        assert_eq!(compare(NswPower::Zero, NswPower::Zero, m).unwrap(), Ordering::Equal);
        assert_eq!(
            compare(NswPower::new(7, 0), NswPower::new(0, 0), m).unwrap_err(),
            Error::CompareBound { two_exp: 7, bound: 6 }
        );
    }

    #[test]
    fn big_rational_values() {
        let inst = labelled_k4();
        assert!(to_big_rational(NswPower::Zero, &inst.alpha).is_zero());
        assert!(to_big_rational(NswPower::new(0, 0), &inst.alpha).is_one());
        let a = BigRational::from_integer(4096.into())
            * fraction::pow(&BigRational::new(101.into(), 100.into()), 7);
        assert_eq!(
            to_big_rational(NswPower::new(3, 1), &inst.alpha),
            BigRational::from_integer(8.into()) * a
        );
    }

    #[test]
    fn log2_display() {
        let inst = labelled_k4();
        assert_eq!(nsw_log2(NswPower::new(0, 0), inst.alpha_log2, 7).unwrap(), 0.0);
        assert_eq!(nsw_log2(NswPower::new(6, 0), inst.alpha_log2, 7).unwrap(), 6.0 / 7.0);
        // oracle: log2 of 4096 * 1.01^7 = 12 + 7 log2(1.01)
        let want = (3.0 + 12.0 + 7.0 * 1.01f64.log2()) / 7.0;
        let got = nsw_log2(NswPower::new(3, 1), inst.alpha_log2, 7).unwrap();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        assert!((got - 2.157).abs() < 1e-3);
        assert_eq!(nsw_log2(NswPower::Zero, 1.0, 7).unwrap_err(), Error::NotPositive);
    }

    #[test]
    fn indicator_table_rows() {
        let rows = indicator_rows(&labelled_k4());
        let seen: Vec<(u8, u8, u8, u8)> = rows.iter().map(|r| (r.in_s, r.in_t, r.in_cap, r.in_cup)).collect();
        assert_eq!(seen, vec![(0, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 1), (1, 0, 0, 1), (1, 1, 1, 1)]);
        assert!(rows.iter().all(|r| r.holds));
    }

    #[test]
    fn indicator_bit_logic_matches_integer_form() {
        for s in 0..2u64 {
            for t in 0..2u64 {
                for cap in 0..2u64 {
                    for cup in 0..2u64 {
                        let want = cup + cap < s + t;
                        assert_eq!(indicator_violation(s, t, cap, cup), want);
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_supermodular_on_petersen_is_clean_and_reproducible() {
        let g = generate_family("petersen", None, None).unwrap();
        let inst = build_instance(&g, &ReductionParams::default());
        let a = check_supermodular(&inst, CheckMode::Sampled, 2000, 5).unwrap();
        let b = check_supermodular(&inst, CheckMode::Sampled, 2000, 5).unwrap();
        assert!(a.passed());
        assert_eq!(a.checked, 2000);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.v_g_empty, "1");
    }

    #[test]
    fn exhaustive_refuses_large_instances() {
        let g = generate_family("prism", None, None).unwrap();
        let inst = build_instance(&g, &ReductionParams::default());
        assert!(matches!(
            check_supermodular(&inst, CheckMode::Exhaustive, 0, 0),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn classes_report_passes_and_flags_raw_superadditivity() {
        let inst = labelled_k4();
        let r = check_superadditive_additive(&inst, 200, 9);
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.edge_additive_checked, 6 * 200 * 4);
        assert_eq!(r.greedy_superadditive_checked, 200);
        // pairs covering no vertex have value 1 + 1 > 1 on the union
        assert!(r.raw_superadditive_failures > 0);
    }
}
