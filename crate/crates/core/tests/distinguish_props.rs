use std::collections::BTreeSet;

use functor_he::bnf_distinguish::{
    build_pattern_quotient, distinguish_game, encode_host, graph_catalog, has_canonical_form,
    reduce_si_to_distinguishing, subgraph_iso_bruteforce, Adversary, CanonicalForm,
    ClassSizeProfile, CoinFlip, GameConfig, Graph, OracleRecognizer, Provenance, SearchBudget,
    SlotPartition,
};
use functor_he::seeded_rng;

/// Existence of an injective edge-preserving map, by trying every tuple of
/// host vertices.
fn embeds_by_tuples(pattern: &Graph, host: &Graph) -> bool {
    let k = pattern.vertex_count();
    let n = host.vertex_count();
    if k > n {
        return false;
    }
    let total = (n as u64).pow(k as u32);
    let edges: Vec<(usize, usize)> = pattern.edges().collect();
    (0..total).any(|mut code| {
        let mut map = vec![0usize; k];
        for slot in map.iter_mut() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        let distinct = map.iter().collect::<BTreeSet<_>>().len() == k;
        distinct && edges.iter().all(|&(u, v)| host.has_edge(map[u], map[v]))
    })
}

#[test]
fn backtracker_agrees_with_tuple_search() {
    let catalog = graph_catalog(5);
    let budget = SearchBudget::default();
    for pattern in &catalog {
        for host in &catalog {
            let fast = subgraph_iso_bruteforce(pattern, host, &budget).unwrap();
            assert_eq!(
                fast.is_some(),
                embeds_by_tuples(pattern, host),
                "{pattern:?} in {host:?}"
            );
            if let Some(map) = fast {
                assert!(pattern.edges().all(|(u, v)| host.has_edge(map[u], map[v])));
            }
        }
    }
}

#[test]
fn reduction_agrees_with_brute_force() {
    let patterns = graph_catalog(4);
    let hosts = graph_catalog(6);
    let budget = SearchBudget::default();
    let recognizer = OracleRecognizer::default();
    let mut rng = seeded_rng(31);
    for pattern in &patterns {
        for host in &hosts {
            let verdict =
                reduce_si_to_distinguishing(pattern, host, &recognizer, &mut rng, &budget).unwrap();
            let truth = subgraph_iso_bruteforce(pattern, host, &budget)
                .unwrap()
                .is_some();
            assert_eq!(verdict, truth, "{pattern:?} in {host:?}");
        }
    }
}

fn is_partition(p: &SlotPartition) -> bool {
    let mut seen = vec![false; p.slot_count()];
    for class in p.classes() {
        if class.is_empty() {
            return false;
        }
        for &s in class {
            if s >= seen.len() || seen[s] {
                return false;
            }
            seen[s] = true;
        }
    }
    seen.into_iter().all(|x| x)
}

#[test]
fn quotients_are_well_formed() {
    let patterns = graph_catalog(4);
    let hosts = graph_catalog(5);
    let budget = SearchBudget::default();
    let mut rng = seeded_rng(4);
    for pattern in &patterns {
        for host in &hosts {
            let q = build_pattern_quotient(pattern, host, &mut rng, &budget).unwrap();
            assert!(is_partition(&q.slot_partition));
            assert_eq!(
                q.slot_partition.slot_count(),
                encode_host(host).slot_count()
            );
            assert!(q.slot_partition.classes().iter().all(|c| c.len() <= 2));
            let doubletons = q.slot_partition.doubletons().len();
            match q.provenance {
                Provenance::Embedding(_) => {
                    assert_eq!(doubletons, pattern.edge_count());
                    assert!(has_canonical_form(&q.slot_partition, pattern, host, &budget).unwrap());
                }
                Provenance::Decoy => {
                    let cap = encode_host(host).slot_count() / 2;
                    assert_eq!(doubletons, pattern.edge_count().min(cap));
                    if pattern.edge_count() <= cap {
                        assert_eq!(doubletons, pattern.edge_count());
                    }
                }
            }
        }
    }
}

/// Every way of merging `k` disjoint pairs among `slots` slots.
fn all_matchings(slots: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        free: &[usize],
        k: usize,
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        // choose the next pair with its first slot larger than the previous pair's
        let floor = acc.last().map_or(0, |p| p.0 + 1);
        for (i, &a) in free.iter().enumerate() {
            if a < floor {
                continue;
            }
            for (j, &b) in free.iter().enumerate().skip(i + 1) {
                let rest: Vec<usize> = free
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != i && t != j)
                    .map(|(_, &s)| s)
                    .collect();
                acc.push((a, b));
                go(&rest, k, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(
        &(0..slots).collect::<Vec<_>>(),
        k,
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Number of distinct edge sets of `host` forming a copy of `pattern`.
fn copies(pattern: &Graph, host: &Graph) -> usize {
    let host_edges: Vec<(usize, usize)> = host.edges().collect();
    let m = pattern.edge_count();
    let mut count = 0;
    for mask in 0u32..(1 << host_edges.len()) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let sub = Graph::new(
            host.vertex_count(),
            host_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
        .unwrap();
        if embeds_by_tuples(pattern, &sub) {
            count += 1;
        }
    }
    count
}

#[test]
fn recognized_matchings_are_exactly_the_copies() {
    let budget = SearchBudget::default();
    let cases = [
        (Graph::complete(3), Graph::complete(4), 13_860),
        (Graph::complete(3), Graph::cycle(4), 420),
        (Graph::path(3), Graph::complete(4), 1485),
        (Graph::path(3), Graph::cycle(5), 45 * 28 / 2),
    ];
    for (pattern, host, expected_matchings) in cases {
        let slots = encode_host(&host).slot_count();
        let matchings = all_matchings(slots, pattern.edge_count());
        assert_eq!(matchings.len(), expected_matchings);
        let recognized = matchings
            .iter()
            .filter(|pairs| {
                let p = SlotPartition::from_pairs(slots, pairs).unwrap();
                has_canonical_form(&p, &pattern, &host, &budget).unwrap()
            })
            .count();
        assert_eq!(
            recognized,
            copies(&pattern, &host),
            "{pattern:?} in {host:?}"
        );
    }
}

#[test]
fn coin_flip_advantage_is_small() {
    let r = distinguish_game(
        &Graph::complete(4),
        &Graph::complete(3),
        &Graph::path(3),
        &CoinFlip,
        &GameConfig::new(2000, 1),
    )
    .unwrap();
    assert!(r.advantage.abs() <= 0.05, "{r:?}");
}

#[test]
fn identical_candidates_are_indistinguishable() {
    let oracle = CanonicalForm::<OracleRecognizer>::default();
    let adversaries: [&dyn Adversary; 3] = [&CoinFlip, &ClassSizeProfile, &oracle];
    let host = Graph::complete(4);
    for pattern in [Graph::complete(3), Graph::cycle(4), Graph::path(4)] {
        for adv in adversaries {
            let r = distinguish_game(&host, &pattern, &pattern, adv, &GameConfig::new(2000, 6))
                .unwrap();
            assert!(r.advantage.abs() <= 0.05, "{} {r:?}", adv.name());
        }
    }
}

#[test]
fn game_results_do_not_depend_on_thread_count() {
    let oracle = CanonicalForm::<OracleRecognizer>::default();
    let mut cfg = GameConfig::new(500, 12);
    let host = Graph::complete(5);
    let one =
        distinguish_game(&host, &Graph::complete(4), &Graph::cycle(5), &oracle, &cfg).unwrap();
    cfg.jobs = 3;
    let three =
        distinguish_game(&host, &Graph::complete(4), &Graph::cycle(5), &oracle, &cfg).unwrap();
    assert_eq!(one, three);
}
