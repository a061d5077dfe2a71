//! Additivity defects: how far sequential and parallel composition fall
//! short of pure additivity over a multiway evolution.
//!
//! The sequential defect of a composite is its realized step count minus
//! the breadth-first distance between its endpoints in the (globally
//! deduplicated) evolution graph; it is zero exactly when the evolution
//! cannot be shortcut. The parallel defect of a layer is its merge
//! multiplicity: branches minus distinct successors, with pure branching
//! from a single source not penalized. Both reduce to the functor and
//! strict-monoidal law failure counts respectively, which the report
//! cross-checks.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::category::{
    check_functor_laws, check_monoidal_laws, zprime, FreeCategory, FunctorLawReport,
    MonoidalLawReport,
};
use crate::error::{Error, Result};
use crate::multiway::MultiwayGraph;

/// One composite's additivity defect under sequential composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequentialDefect {
    /// Index of the composite in the category's morphism list.
    pub morphism: usize,
    pub source: usize,
    pub target: usize,
    pub steps: usize,
    /// Breadth-first distance between the endpoints.
    pub shortest: usize,
    pub defect: usize,
}

/// One layer's additivity defect under parallel composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelDefect {
    /// Layer the branches leave from.
    #[serde(rename = "t")]
    pub layer: usize,
    /// Events leaving the layer, counted per branch.
    pub branch_events: usize,
    /// Distinct canonical targets credited once each.
    pub distinct_successors: usize,
    /// Merge multiplicity: sum of (indegree - 1) over the targets.
    pub defect: usize,
}

/// Directed single-source shortest path lengths by breadth-first search.
fn bfs_distances(graph: &MultiwayGraph, source: usize) -> Vec<Option<usize>> {
    let mut adjacency = vec![Vec::new(); graph.states.len()];
    for event in &graph.events {
        adjacency[event.from].push(event.to);
    }
    let mut dist = vec![None; graph.states.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(node) = queue.pop_front() {
        let d = dist[node].expect("queued nodes have distances");
        for &next in &adjacency[node] {
            if dist[next].is_none() {
                dist[next] = Some(d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

/// Defect of every enumerated composite: steps minus graph distance.
///
/// The category must be generated from the graph's quiver; endpoints are
/// shared state indices.
pub fn sequential_defects(
    graph: &MultiwayGraph,
    fc: &FreeCategory,
) -> Result<Vec<SequentialDefect>> {
    if fc.objects.len() != graph.states.len() {
        return Err(Error::InternalConsistency(format!(
            "category has {} objects, graph has {} states",
            fc.objects.len(),
            graph.states.len()
        )));
    }
    let mut by_source: BTreeMap<usize, Vec<Option<usize>>> = BTreeMap::new();
    let mut out = Vec::new();
    for (index, m) in fc.morphisms.iter().enumerate() {
        if m.is_identity() {
            continue;
        }
        let dist = by_source
            .entry(m.source)
            .or_insert_with(|| bfs_distances(graph, m.source));
        let shortest = dist[m.target].ok_or_else(|| {
            Error::InternalConsistency(format!(
                "state {} unreachable from {} despite a realized path",
                m.target, m.source
            ))
        })?;
        if shortest > m.steps {
            return Err(Error::InternalConsistency(format!(
                "shortest path {} exceeds realized path {} between {} and {}",
                shortest, m.steps, m.source, m.target
            )));
        }
        out.push(SequentialDefect {
            morphism: index,
            source: m.source,
            target: m.target,
            steps: m.steps,
            shortest,
            defect: m.steps - shortest,
        });
    }
    Ok(out)
}

/// Per-layer merge multiplicity over all events leaving each layer.
pub fn parallel_defects(graph: &MultiwayGraph) -> Vec<ParallelDefect> {
    let mut out = Vec::new();
    for layer in 0..graph.depth {
        let mut indegree: BTreeMap<usize, usize> = BTreeMap::new();
        let mut branch_events = 0;
        for event in &graph.events {
            if event.layer == layer {
                branch_events += 1;
                *indegree.entry(event.to).or_insert(0) += 1;
            }
        }
        let distinct_successors = indegree.len();
        let defect = indegree.values().map(|&count| count - 1).sum();
        out.push(ParallelDefect {
            layer,
            branch_events,
            distinct_successors,
            defect,
        });
    }
    out
}

/// Exact mean as a reduced fraction rendered `"p/q"` (or `"n"` when whole),
/// keeping report JSON free of floating point.
fn mean_fraction(total: usize, count: usize) -> String {
    if count == 0 {
        return "0".to_string();
    }
    let gcd = {
        let (mut a, mut b) = (total, count);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.max(1)
    };
    let (p, q) = (total / gcd, count / gcd);
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequentialSummary {
    pub count: usize,
    pub max: usize,
    /// Exact mean defect as a reduced fraction string.
    pub mean: String,
    /// Defect value -> number of composites attaining it.
    pub hist: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// True exactly when every sequential defect is zero.
    pub computationally_irreducible: bool,
    /// True exactly when every parallel defect is zero.
    pub multicomputationally_irreducible: bool,
}

/// Aggregated defect statistics with the law-check cross-products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub sequential: SequentialSummary,
    pub parallel: Vec<ParallelDefect>,
    pub functor_violations: usize,
    pub monoidal_violations: usize,
    pub verdicts: Verdicts,
}

/// Aggregate both defect families and the law reports over one evolution.
///
/// Consistency between the defect counts and the law violations is a
/// theorem of the definitions; a mismatch is reported as an internal
/// consistency error rather than silently published.
pub fn report(graph: &MultiwayGraph, fc: &FreeCategory) -> Result<DefectReport> {
    let sequential = sequential_defects(graph, fc)?;
    let parallel = parallel_defects(graph);

    let fd = zprime(fc, &graph.foliation_times())?;
    let functor: FunctorLawReport = check_functor_laws(&fd, fc);
    let monoidal: MonoidalLawReport = check_monoidal_laws(&graph.layer_transitions());

    let all_sequential_zero = sequential.iter().all(|d| d.defect == 0);
    let all_parallel_zero = parallel.iter().all(|d| d.defect == 0);
    if all_sequential_zero != functor.is_functorial() {
        return Err(Error::InternalConsistency(format!(
            "sequential defects {} zero but functor report lists {} violations",
            if all_sequential_zero { "all" } else { "not all" },
            functor.violations.len()
        )));
    }
    if all_parallel_zero != monoidal.is_monoidal() {
        return Err(Error::InternalConsistency(format!(
            "parallel defects {} zero but monoidal report lists {} violations",
            if all_parallel_zero { "all" } else { "not all" },
            monoidal.violations.len()
        )));
    }

    let total: usize = sequential.iter().map(|d| d.defect).sum();
    let max = sequential.iter().map(|d| d.defect).max().unwrap_or(0);
    let mut hist = BTreeMap::new();
    for d in &sequential {
        *hist.entry(d.defect).or_insert(0) += 1;
    }
    Ok(DefectReport {
        sequential: SequentialSummary {
            count: sequential.len(),
            max,
            mean: mean_fraction(total, sequential.len()),
            hist,
        },
        parallel,
        functor_violations: functor.violations.len(),
        monoidal_violations: monoidal.violation_count(),
        verdicts: Verdicts {
            computationally_irreducible: all_sequential_zero,
            multicomputationally_irreducible: all_parallel_zero,
        },
    })
}
