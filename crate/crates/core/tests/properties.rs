//! Property tests for the engine invariants: canonical-form idempotence
//! and permutation invariance, rewrite conservation, match completeness,
//! codec roundtrips, evolution shape, strict monoidal laws, and category
//! axioms on random quiver walks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;

use irrex_core::category::{
    compose, free_category, tensor, Arrow, DiscreteInterval, IntervalTensor, MorphismRecord,
    Quiver, QuiverObject, TensoredMorphism,
};
use irrex_core::hypergraph::{
    apply_match, canonical_form, find_matches, is_isomorphic, Hypergraph, RewriteRule,
};
use irrex_core::multiway::{build_multiway, DedupMode, System, TmSystem};
use irrex_core::tm::{decode_rule, encode_rule, tm_evolve, tm_step, StepOutcome, TmConfig, TmSpec};

fn arb_hypergraph(max_vertices: u64, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    prop::collection::vec(
        prop::collection::vec(0..max_vertices, 1..=3),
        0..=max_edges,
    )
    .prop_map(Hypergraph::new)
}

fn permuted(h: &Hypergraph, seed: u64) -> Hypergraph {
    let vertices: Vec<u64> = h.vertices().into_iter().collect();
    let mut order = vertices.clone();
    // Fisher-Yates driven by a splitmix-style sequence.
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
        state >> 16
    };
    for i in (1..order.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let map: HashMap<u64, u64> = vertices.into_iter().zip(order).collect();
    Hypergraph::new(
        h.edges
            .iter()
            .map(|e| e.iter().map(|v| map[v]).collect())
            .collect(),
    )
}

proptest! {
    // More cases than the default so the associativity check below sees
    // over a thousand composable triples.
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn canonical_form_is_idempotent(h in arb_hypergraph(6, 5)) {
        let first = canonical_form(&h);
        let second = canonical_form(&first.graph);
        prop_assert_eq!(&first.graph, &second.graph);
        prop_assert_eq!(first.certificate, second.certificate);
    }

    #[test]
    fn certificates_are_permutation_invariant(h in arb_hypergraph(7, 5), seed in any::<u64>()) {
        let p = permuted(&h, seed);
        prop_assert_eq!(canonical_form(&h).certificate, canonical_form(&p).certificate);
        prop_assert!(is_isomorphic(&h, &p));
    }

    #[test]
    fn rewrite_conserves_edge_counts(h in arb_hypergraph(5, 6)) {
        let rule = RewriteRule::wolfram_2_2();
        for m in find_matches(&rule, &h) {
            let result = apply_match(&rule, &h, &m).unwrap();
            prop_assert_eq!(
                result.edge_count(),
                h.edge_count() - rule.lhs.len() + rule.rhs.len()
            );
            // Fresh vertices never collide with host vertices.
            let host_max = h.max_vertex().unwrap_or(0);
            let fresh: BTreeSet<u64> = result
                .vertices()
                .into_iter()
                .filter(|v| *v > host_max)
                .collect();
            prop_assert!(fresh.len() <= rule.fresh_vars().len());
        }
    }

    #[test]
    fn matches_agree_with_exhaustive_enumeration(h in arb_hypergraph(4, 6)) {
        // Oracle: every total binding of pattern variables to host
        // vertices, every assignment to distinct equal edges.
        let rule = RewriteRule::wolfram_2_2();
        let vars: Vec<&str> = rule.lhs_vars().into_iter().collect();
        let vertices: Vec<u64> = h.vertices().into_iter().collect();
        let mut expected = BTreeSet::new();
        if !vertices.is_empty() {
            let mut counters = vec![0usize; vars.len()];
            'outer: loop {
                let binding: BTreeMap<String, u64> = vars
                    .iter()
                    .zip(counters.iter())
                    .map(|(v, &i)| (v.to_string(), vertices[i]))
                    .collect();
                let needed: Vec<Vec<u64>> = rule
                    .lhs
                    .iter()
                    .map(|p| p.iter().map(|v| binding[v]).collect())
                    .collect();
                // All ways to choose distinct occurrences matching `needed`.
                let mut stack = vec![(0usize, Vec::<usize>::new())];
                while let Some((depth, chosen)) = stack.pop() {
                    if depth == needed.len() {
                        let mut edges = chosen.clone();
                        edges.sort_unstable();
                        expected.insert((edges, binding.clone()));
                        continue;
                    }
                    for (i, edge) in h.edges.iter().enumerate() {
                        if !chosen.contains(&i) && edge == &needed[depth] {
                            let mut next = chosen.clone();
                            next.push(i);
                            stack.push((depth + 1, next));
                        }
                    }
                }
                let mut slot = 0;
                loop {
                    if slot == counters.len() {
                        break 'outer;
                    }
                    counters[slot] += 1;
                    if counters[slot] < vertices.len() {
                        break;
                    }
                    counters[slot] = 0;
                    slot += 1;
                }
            }
        }
        let got: BTreeSet<(Vec<usize>, BTreeMap<String, u64>)> = find_matches(&rule, &h)
            .into_iter()
            .map(|m| (m.edges, m.binding))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn rule_codec_roundtrips(n in 0u128..4096) {
        let spec = TmSpec::new(2, 2).unwrap();
        let rule = decode_rule(n, spec).unwrap();
        prop_assert_eq!(encode_rule(&rule).unwrap(), n);
    }

    #[test]
    fn step_frame_condition(n in 0u128..4096, cells in prop::collection::vec(0u32..2, 1..6)) {
        let spec = TmSpec::new(2, 2).unwrap();
        let rule = decode_rule(n, spec).unwrap();
        let cfg = TmConfig::from_cells(&cells);
        if let StepOutcome::Advanced(next) = tm_step(&rule, &cfg) {
            prop_assert_eq!((next.head - cfg.head).abs(), 1);
            let positions: BTreeSet<i64> = cfg
                .occupied()
                .map(|(p, _)| p)
                .chain(next.occupied().map(|(p, _)| p))
                .collect();
            let changed = positions
                .into_iter()
                .filter(|&p| cfg.color_at(p) != next.color_at(p))
                .count();
            prop_assert!(changed <= 1);
        }
    }

    #[test]
    fn deterministic_evolution_quiver_has_out_degree_at_most_one(
        n in 0u128..4096,
        cells in prop::collection::vec(0u32..2, 1..5),
    ) {
        let spec = TmSpec::new(2, 2).unwrap();
        let system = TmSystem::new(vec![decode_rule(n, spec).unwrap()]);
        let init = TmConfig::from_cells(&cells);
        let graph = build_multiway(&system, &[init], 6, DedupMode::Global, None).unwrap();
        let mut out_degree = vec![0usize; graph.states.len()];
        for event in &graph.events {
            out_degree[event.from] += 1;
        }
        prop_assert!(out_degree.iter().all(|&d| d <= 1));
    }

    #[test]
    fn evolution_is_deterministic(n in 0u128..4096, cells in prop::collection::vec(0u32..2, 1..5)) {
        let spec = TmSpec::new(2, 2).unwrap();
        let rule = decode_rule(n, spec).unwrap();
        let cfg = TmConfig::from_cells(&cells);
        let a = tm_evolve(&rule, &cfg, 6);
        let b = tm_evolve(&rule, &cfg, 6);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn interval_tensor_is_a_commutative_monoid(
        parts_a in prop::collection::vec((0usize..6, 0usize..4), 0..4),
        parts_b in prop::collection::vec((0usize..6, 0usize..4), 0..4),
        parts_c in prop::collection::vec((0usize..6, 0usize..4), 0..4),
    ) {
        let build = |parts: &[(usize, usize)]| {
            IntervalTensor::from_parts(
                parts
                    .iter()
                    .map(|&(lo, len)| DiscreteInterval::new(lo, lo + len).unwrap())
                    .collect(),
            )
        };
        let (a, b, c) = (build(&parts_a), build(&parts_b), build(&parts_c));
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
        prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
        prop_assert_eq!(a.tensor(&IntervalTensor::unit()), a.clone());
        prop_assert_eq!(IntervalTensor::unit().tensor(&a), a);
    }

    #[test]
    fn composition_is_associative_on_random_walks(
        extra in prop::collection::vec((0usize..5, 0usize..5), 0..8),
        chain in [0usize..5, 0usize..5, 0usize..5, 0usize..5],
    ) {
        // Random quiver on 5 objects plus a guaranteed composable chain
        // f: chain[0] -> chain[1], g: -, h: chain[2] -> chain[3].
        let objects: Vec<QuiverObject> = (0..5)
            .map(|i| QuiverObject { name: format!("o{i}"), time: i })
            .collect();
        let mut arrow_list: Vec<Arrow> = extra
            .iter()
            .enumerate()
            .map(|(i, &(s, t))| Arrow { name: format!("a{i}"), source: s, target: t })
            .collect();
        for (i, pair) in chain.windows(2).enumerate() {
            arrow_list.push(Arrow {
                name: format!("chain{i}"),
                source: pair[0],
                target: pair[1],
            });
        }
        let quiver = Quiver::new(objects, arrow_list.clone()).unwrap();
        let single = |name: &str| {
            let a = arrow_list.iter().find(|a| a.name == name).unwrap();
            MorphismRecord {
                source: a.source,
                target: a.target,
                steps: 1,
                trace: vec![quiver.objects[a.source].time, quiver.objects[a.target].time],
                path: vec![a.name.clone()],
            }
        };
        let f = single("chain0");
        let g = single("chain1");
        let h = single("chain2");

        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tensored_records_are_symmetric_and_unital(
        steps_a in 0usize..4,
        steps_b in 0usize..4,
    ) {
        let record = |steps: usize, tag: usize| MorphismRecord {
            source: tag,
            target: tag,
            steps,
            trace: (0..=steps).collect(),
            path: (0..steps).map(|i| format!("p{tag}.{i}")).collect(),
        };
        let f = TensoredMorphism::from_single(record(steps_a, 0));
        let g = TensoredMorphism::from_single(record(steps_b, 1));
        prop_assert_eq!(tensor(&f, &g), tensor(&g, &f));
        prop_assert_eq!(tensor(&f, &TensoredMorphism::unit()), f.clone());
        let fg = tensor(&f, &g);
        prop_assert_eq!(fg.total_steps(), steps_a + steps_b);
    }
}

#[test]
fn free_category_closure_counts_on_random_dags() {
    // Oracle: path counting by dynamic programming over a layered DAG.
    for nodes_per_layer in 1..=3usize {
        let layers = 4;
        let mut objects = Vec::new();
        for layer in 0..layers {
            for i in 0..nodes_per_layer {
                objects.push(QuiverObject {
                    name: format!("n{layer}_{i}"),
                    time: layer,
                });
            }
        }
        let index = |layer: usize, i: usize| layer * nodes_per_layer + i;
        let mut arrows = Vec::new();
        for layer in 0..layers - 1 {
            for a in 0..nodes_per_layer {
                for b in 0..nodes_per_layer {
                    if (a + b + layer) % 2 == 0 {
                        arrows.push(Arrow {
                            name: format!("e{layer}_{a}_{b}"),
                            source: index(layer, a),
                            target: index(layer + 1, b),
                        });
                    }
                }
            }
        }
        let quiver = Quiver::new(objects, arrows.clone()).unwrap();
        let fc = free_category(&quiver, None).unwrap();

        // Count all directed paths of length >= 1 by DP.
        let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for arrow in &arrows {
            adjacency.entry(arrow.source).or_default().push(arrow.target);
        }
        let object_count = quiver.objects.len();
        // paths_from[v] = number of nonempty paths starting at v
        let mut paths_from = vec![0usize; object_count];
        for v in (0..object_count).rev() {
            if let Some(next) = adjacency.get(&v) {
                for &w in next {
                    paths_from[v] += 1 + paths_from[w];
                }
            }
        }
        let expected: usize = paths_from.iter().sum();
        assert_eq!(fc.non_identities().count(), expected);
        assert_eq!(fc.identities().count(), object_count);
    }
}

#[test]
fn hg_system_is_deterministic_across_runs() {
    let system = irrex_core::multiway::HgSystem::new(vec![RewriteRule::wolfram_2_2()]);
    let init = Hypergraph::double_self_loop();
    let a = build_multiway(&system, std::slice::from_ref(&init), 3, DedupMode::PerLayer, None).unwrap();
    let b = build_multiway(&system, &[init], 3, DedupMode::PerLayer, None).unwrap();
    assert_eq!(a, b);
    // Keys in every layer are certificates: lowercase hex.
    for state in &a.states {
        assert!(state
            .key
            .chars()
            .all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()));
    }
    let _ = system.canonical_key(&Hypergraph::double_self_loop());
}
