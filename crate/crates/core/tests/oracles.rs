//! Oracle cross-checks on the in-paper setups: path-enumeration counts for
//! the free category, Floyd-Warshall distances behind sequential defects,
//! and indegree censuses behind parallel defects.

use std::collections::BTreeMap;

use irrex_core::category::free_category;
use irrex_core::defect::{parallel_defects, sequential_defects};
use irrex_core::hypergraph::{Hypergraph, RewriteRule};
use irrex_core::multiway::{build_multiway, DedupMode, HgSystem, MultiwayGraph, TmSystem};
use irrex_core::tm::{decode_rule, TmConfig, TmSpec};

fn tm_pair_graph(depth: usize, mode: DedupMode) -> MultiwayGraph {
    let spec = TmSpec::new(2, 2).unwrap();
    let system = TmSystem::new(vec![
        decode_rule(2506, spec).unwrap(),
        decode_rule(3506, spec).unwrap(),
    ]);
    build_multiway(
        &system,
        &[TmConfig::from_cells(&[0, 1, 0, 0])],
        depth,
        mode,
        None,
    )
    .unwrap()
}

fn hg_graph(depth: usize, mode: DedupMode) -> MultiwayGraph {
    let system = HgSystem::new(vec![RewriteRule::wolfram_2_2()]);
    build_multiway(&system, &[Hypergraph::double_self_loop()], depth, mode, None).unwrap()
}

/// Count directed paths of length 1..=bound by depth-first enumeration,
/// independently of the category builder.
fn dfs_path_count(graph: &MultiwayGraph, bound: usize) -> usize {
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for event in &graph.events {
        adjacency.entry(event.from).or_default().push(event.to);
    }
    fn walk(adjacency: &BTreeMap<usize, Vec<usize>>, at: usize, remaining: usize) -> usize {
        if remaining == 0 {
            return 0;
        }
        let mut count = 0;
        for &next in adjacency.get(&at).map(|v| v.as_slice()).unwrap_or(&[]) {
            count += 1 + walk(adjacency, next, remaining - 1);
        }
        count
    }
    (0..graph.states.len())
        .map(|source| walk(&adjacency, source, bound))
        .sum()
}

#[test]
fn multiway_category_morphism_count_matches_path_enumeration() {
    for (graph, bound) in [
        (tm_pair_graph(3, DedupMode::PerLayer), 3usize),
        (tm_pair_graph(4, DedupMode::Global), 4),
        (hg_graph(2, DedupMode::PerLayer), 2),
    ] {
        let fc = free_category(&graph.quiver(), Some(bound)).unwrap();
        assert_eq!(fc.non_identities().count(), dfs_path_count(&graph, bound));
        assert_eq!(fc.identities().count(), graph.states.len());
    }
}

#[allow(clippy::needless_range_loop)]
/// All-pairs shortest paths by Floyd-Warshall; a different algorithm from
/// the breadth-first search inside the defect computation.
fn floyd_warshall(graph: &MultiwayGraph) -> Vec<Vec<Option<usize>>> {
    let n = graph.states.len();
    let mut dist: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for event in &graph.events {
        let entry = &mut dist[event.from][event.to];
        if entry.is_none() || entry.unwrap() > 1 {
            *entry = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(kj) = dist[k][j] else { continue };
                if dist[i][j].is_none_or(|ij| ij > ik + kj) {
                    dist[i][j] = Some(ik + kj);
                }
            }
        }
    }
    dist
}

#[test]
fn sequential_defect_histogram_matches_floyd_warshall() {
    // The deepest graph here has 179 states and a few hundred events.
    for graph in [
        tm_pair_graph(4, DedupMode::Global),
        hg_graph(3, DedupMode::Global),
        hg_graph(4, DedupMode::Global),
    ] {
        let fc = free_category(&graph.quiver(), Some(graph.depth)).unwrap();
        let defects = sequential_defects(&graph, &fc).unwrap();
        let dist = floyd_warshall(&graph);

        let mut expected_hist: BTreeMap<usize, usize> = BTreeMap::new();
        for m in fc.non_identities() {
            let shortest = dist[m.source][m.target].expect("endpoint reachable");
            *expected_hist.entry(m.steps - shortest).or_insert(0) += 1;
        }
        let mut got_hist: BTreeMap<usize, usize> = BTreeMap::new();
        for d in &defects {
            assert_eq!(d.shortest, dist[d.source][d.target].unwrap());
            *got_hist.entry(d.defect).or_insert(0) += 1;
        }
        assert_eq!(got_hist, expected_hist);
    }
}

#[test]
fn parallel_defects_match_indegree_census() {
    for graph in [
        hg_graph(3, DedupMode::PerLayer),
        tm_pair_graph(4, DedupMode::PerLayer),
        tm_pair_graph(4, DedupMode::Global),
    ] {
        let defects = parallel_defects(&graph);
        assert_eq!(defects.len(), graph.depth);
        for d in &defects {
            // Independent census: indegrees of the targets of this layer's
            // events, straight off the event list.
            let mut census: BTreeMap<usize, usize> = BTreeMap::new();
            for event in graph.events.iter().filter(|e| e.layer == d.layer) {
                *census.entry(event.to).or_insert(0) += 1;
            }
            let expected: usize = census.values().map(|&c| c - 1).sum();
            assert_eq!(d.defect, expected, "layer {}", d.layer);
            assert_eq!(d.branch_events, census.values().sum::<usize>());
            assert_eq!(d.distinct_successors, census.len());
        }
    }
}

#[test]
fn deterministic_evolution_traces_equal_interval_elements() {
    // On a pure path every morphism's layer trace is exactly the element
    // list of its image interval.
    use irrex_core::category::zprime;
    let spec = TmSpec::new(2, 2).unwrap();
    let system = TmSystem::new(vec![decode_rule(2506, spec).unwrap()]);
    let graph = build_multiway(
        &system,
        &[TmConfig::from_cells(&[0, 1, 0, 0])],
        4,
        DedupMode::Global,
        None,
    )
    .unwrap();
    let fc = free_category(&graph.quiver(), None).unwrap();
    let fd = zprime(&fc, &graph.foliation_times()).unwrap();
    assert!(fd.order_violations.is_empty());
    for (index, m) in fc.morphisms.iter().enumerate() {
        let interval = fd.images[index].interval().unwrap();
        assert_eq!(m.trace, interval.elements(), "morphism {index}");
    }
}

#[test]
fn morphism_complexity_obeys_the_metric_like_axioms() {
    let graph = tm_pair_graph(3, DedupMode::PerLayer);
    let fc = free_category(&graph.quiver(), Some(3)).unwrap();
    for m in &fc.morphisms {
        if m.is_identity() {
            assert_eq!(m.steps, 0);
        } else {
            assert!(m.steps >= 1, "generator-backed morphisms cost a step");
            assert_eq!(m.steps, m.path.len());
            assert_eq!(m.trace.len(), m.steps + 1);
        }
    }
}
