use proptest::prelude::*;

use nswhard::allocation::{parse_allocation, random_allocation, serialize_allocation, RandomAllocation};
use nswhard::graph::{parse_graph, random_cubic, write_graph};
use nswhard::reduction::{parse_instance, serialize_instance};
use nswhard::valuations::{covered_vertices, edge_value, greedy_exponent};
use nswhard::{build_instance, AuctionInstance, Bundle, ReductionParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(n: usize, seed: u64) -> AuctionInstance {
    build_instance(&random_cubic(n, seed).unwrap(), &ReductionParams::default())
}

fn bundle_from_bits(bits: &[bool]) -> Bundle {
    Bundle::new(bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn covered_vertices_lattice(
        seed in 0u64..50,
        half in prop::sample::select(vec![2usize, 3, 4, 5]),
        s in prop::collection::vec(any::<bool>(), 30),
        t in prop::collection::vec(any::<bool>(), 30),
    ) {
        let inst = instance(2 * half, seed);
        let m = inst.item_count();
        let (s, t) = (bundle_from_bits(&s[..m]), bundle_from_bits(&t[..m]));
        let cs = covered_vertices(&inst, &s);
        let ct = covered_vertices(&inst, &t);
        let cup = covered_vertices(&inst, &s.union(&t));
        let cap = covered_vertices(&inst, &s.intersection(&t));
        for v in cs.iter().chain(ct.iter()) {
            prop_assert!(cup.contains(v));
        }
        let both: Vec<usize> = cs.iter().filter(|&v| ct.contains(v)).collect();
        prop_assert_eq!(cap.as_slice(), &both[..]);
        if s.is_subset(&s.union(&t)) {
            prop_assert!(greedy_exponent(&inst, &s) <= greedy_exponent(&inst, &s.union(&t)));
        }
    }

    #[test]
    fn edge_values_are_additive(
        seed in 0u64..50,
        s in prop::collection::vec(any::<bool>(), 24),
    ) {
        let inst = instance(8, seed);
        let s = bundle_from_bits(&s);
        for e in 0..inst.edge_count() {
            let singles: u32 = s.iter().map(|i| edge_value(&inst, e, &Bundle::new([i]))).sum();
            prop_assert_eq!(edge_value(&inst, e, &s), singles);
        }
    }

    #[test]
    fn files_round_trip(half in 2usize..8, seed in any::<u64>(), aseed in any::<u64>()) {
        let g = random_cubic(2 * half, seed).unwrap();
        prop_assert_eq!(&parse_graph(&write_graph(&g)).unwrap(), &g);
        let params = ReductionParams::parse("3/2", "1/7").unwrap();
        let inst = build_instance(&g, &params);
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
        let mut rng = ChaCha8Rng::seed_from_u64(aseed);
        let a = random_allocation(&inst, &mut rng, RandomAllocation { stray: 0.3, force_positive: false });
        prop_assert_eq!(parse_allocation(&inst, &serialize_allocation(&a), false).unwrap(), a);
    }

    #[test]
    fn generated_graphs_are_cubic(half in 2usize..20, seed in any::<u64>()) {
        let g = random_cubic(2 * half, seed).unwrap();
        let n = g.vertex_count();
        let mut deg = vec![0; n];
        for [u, v] in g.edges() {
            prop_assert!(u < v);
            deg[*u] += 1;
            deg[*v] += 1;
        }
        prop_assert!(deg.iter().all(|&d| d == 3));
        prop_assert_eq!(g.edge_count(), 3 * n / 2);
    }
}
