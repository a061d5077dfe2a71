//! Ordered directed hypergraphs, canonical isomorphism certificates, and
//! set-substitution (double-pushout) rewriting.
//!
//! A hypergraph is a multiset of ordered hyperedges over nonnegative vertex
//! identifiers; the vertex set is exactly the set of identifiers that occur
//! in edges. Rules are variable patterns whose shared left/right variables
//! form the preserved interface; applying a rule deletes the matched edge
//! occurrences and appends the instantiated right-hand side, with fresh
//! vertices numbered consecutively above the host's maximum identifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multiset of ordered hyperedges; arity may vary per edge, but every
/// edge relates at least one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HypergraphWire")]
pub struct Hypergraph {
    pub edges: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
struct HypergraphWire {
    edges: Vec<Vec<u64>>,
}

impl TryFrom<HypergraphWire> for Hypergraph {
    type Error = Error;

    fn try_from(wire: HypergraphWire) -> Result<Self> {
        if wire.edges.iter().any(|e| e.is_empty()) {
            return Err(Error::MalformedInput(
                "hyperedges must relate at least one vertex".into(),
            ));
        }
        Ok(Hypergraph { edges: wire.edges })
    }
}

impl Hypergraph {
    pub fn new(edges: Vec<Vec<u64>>) -> Self {
        Hypergraph { edges }
    }

    /// The double self-loop `{{0,0},{0,0}}`.
    pub fn double_self_loop() -> Self {
        Hypergraph::new(vec![vec![0, 0], vec![0, 0]])
    }

    pub fn vertices(&self) -> BTreeSet<u64> {
        self.edges.iter().flatten().copied().collect()
    }

    pub fn max_vertex(&self) -> Option<u64> {
        self.edges.iter().flatten().copied().max()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// A set-substitution rule over variable patterns.
///
/// Variables shared between both sides are preserved; right-hand variables
/// absent from the left are instantiated as fresh vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RewriteRuleWire")]
pub struct RewriteRule {
    pub lhs: Vec<Vec<String>>,
    pub rhs: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct RewriteRuleWire {
    lhs: Vec<Vec<String>>,
    rhs: Vec<Vec<String>>,
}

impl TryFrom<RewriteRuleWire> for RewriteRule {
    type Error = Error;

    fn try_from(wire: RewriteRuleWire) -> Result<Self> {
        RewriteRule::new(wire.lhs, wire.rhs)
    }
}

impl RewriteRule {
    pub fn new(lhs: Vec<Vec<String>>, rhs: Vec<Vec<String>>) -> Result<Self> {
        if lhs.is_empty() {
            return Err(Error::InvalidRule("left-hand side must be nonempty".into()));
        }
        if lhs.iter().chain(rhs.iter()).any(|e| e.is_empty()) {
            return Err(Error::InvalidRule(
                "pattern edges must relate at least one variable".into(),
            ));
        }
        Ok(RewriteRule { lhs, rhs })
    }

    pub fn parse(lhs: &[&[&str]], rhs: &[&[&str]]) -> Result<Self> {
        let conv = |side: &[&[&str]]| {
            side.iter()
                .map(|edge| edge.iter().map(|v| v.to_string()).collect())
                .collect()
        };
        RewriteRule::new(conv(lhs), conv(rhs))
    }

    /// The rule `{{x,y},{x,z}} -> {{x,z},{x,w},{y,w},{z,w}}`.
    pub fn wolfram_2_2() -> Self {
        RewriteRule::parse(
            &[&["x", "y"], &["x", "z"]],
            &[&["x", "z"], &["x", "w"], &["y", "w"], &["z", "w"]],
        )
        .expect("static rule")
    }

    pub fn lhs_vars(&self) -> BTreeSet<&str> {
        self.lhs.iter().flatten().map(|s| s.as_str()).collect()
    }

    /// Right-hand variables not bound by the left side, in first-appearance order.
    pub fn fresh_vars(&self) -> Vec<&str> {
        let bound = self.lhs_vars();
        let mut seen = BTreeSet::new();
        let mut fresh = Vec::new();
        for var in self.rhs.iter().flatten() {
            if !bound.contains(var.as_str()) && seen.insert(var.as_str()) {
                fresh.push(var.as_str());
            }
        }
        fresh
    }

    /// Swap the two sides; the preserved interface is unchanged.
    pub fn reversed(&self) -> RewriteRule {
        RewriteRule {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

/// A located occurrence of a rule's left-hand side in a host.
///
/// Two matches are equal exactly when their selected edge occurrence
/// multisets and bindings are equal; bindings need not be vertex-injective,
/// but the selected occurrences are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Match {
    /// Host edge indices, sorted; one occurrence per left-hand pattern edge.
    pub edges: Vec<usize>,
    pub binding: BTreeMap<String, u64>,
}

impl Match {
    /// Compact descriptor used in event labels: `e0,e1;x=0,y=0`.
    pub fn descriptor(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "e{e}");
        }
        out.push(';');
        for (i, (var, vertex)) in self.binding.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{var}={vertex}");
        }
        out
    }
}

/// Complete, duplicate-free match enumeration in deterministic order.
pub fn find_matches(rule: &RewriteRule, host: &Hypergraph) -> Vec<Match> {
    let mut found = BTreeSet::new();
    let mut used = vec![false; host.edges.len()];
    let mut binding: BTreeMap<String, u64> = BTreeMap::new();
    let mut selection = Vec::with_capacity(rule.lhs.len());
    search(rule, host, 0, &mut used, &mut binding, &mut selection, &mut found);
    found.into_iter().collect()
}

fn search(
    rule: &RewriteRule,
    host: &Hypergraph,
    depth: usize,
    used: &mut Vec<bool>,
    binding: &mut BTreeMap<String, u64>,
    selection: &mut Vec<usize>,
    found: &mut BTreeSet<Match>,
) {
    if depth == rule.lhs.len() {
        let mut edges = selection.clone();
        edges.sort_unstable();
        found.insert(Match {
            edges,
            binding: binding.clone(),
        });
        return;
    }
    let pattern = &rule.lhs[depth];
    for (index, edge) in host.edges.iter().enumerate() {
        if used[index] || edge.len() != pattern.len() {
            continue;
        }
        let mut newly_bound = Vec::new();
        let mut ok = true;
        for (var, &vertex) in pattern.iter().zip(edge.iter()) {
            match binding.get(var) {
                Some(&bound) if bound != vertex => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    binding.insert(var.clone(), vertex);
                    newly_bound.push(var.clone());
                }
            }
        }
        if ok {
            used[index] = true;
            selection.push(index);
            search(rule, host, depth + 1, used, binding, selection, found);
            selection.pop();
            used[index] = false;
        }
        for var in newly_bound {
            binding.remove(&var);
        }
    }
}

/// Delete the matched occurrences, then append the instantiated right side.
pub fn apply_match(rule: &RewriteRule, host: &Hypergraph, m: &Match) -> Result<Hypergraph> {
    if m.edges.len() != rule.lhs.len() {
        return Err(Error::InvalidMatch(format!(
            "match selects {} occurrences for a {}-edge pattern",
            m.edges.len(),
            rule.lhs.len()
        )));
    }
    for &index in &m.edges {
        if index >= host.edges.len() {
            return Err(Error::InvalidMatch(format!(
                "edge occurrence {index} outside host of {} edges",
                host.edges.len()
            )));
        }
    }
    if m.edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidMatch(
            "edge occurrences must be sorted and pairwise distinct".into(),
        ));
    }
    // Instantiating the pattern under the binding must reproduce exactly the
    // selected occurrences, as a multiset of ordered edges.
    let mut selected: Vec<&Vec<u64>> = m.edges.iter().map(|&i| &host.edges[i]).collect();
    let mut instantiated: Vec<Vec<u64>> = Vec::with_capacity(rule.lhs.len());
    for pattern in &rule.lhs {
        let mut edge = Vec::with_capacity(pattern.len());
        for var in pattern {
            match m.binding.get(var) {
                Some(&vertex) => edge.push(vertex),
                None => {
                    return Err(Error::InvalidMatch(format!("variable {var} unbound")));
                }
            }
        }
        instantiated.push(edge);
    }
    selected.sort();
    instantiated.sort();
    if selected.iter().map(|e| e.as_slice()).ne(instantiated.iter().map(|e| e.as_slice())) {
        return Err(Error::InvalidMatch(
            "binding does not reproduce the selected occurrences".into(),
        ));
    }

    let removed: BTreeSet<usize> = m.edges.iter().copied().collect();
    let mut result: Vec<Vec<u64>> = host
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, e)| e.clone())
        .collect();

    let mut assignment = m.binding.clone();
    let first_fresh = host.max_vertex().map(|v| v + 1).unwrap_or(0);
    for (offset, var) in rule.fresh_vars().into_iter().enumerate() {
        assignment.insert(var.to_string(), first_fresh + offset as u64);
    }
    for pattern in &rule.rhs {
        result.push(pattern.iter().map(|v| assignment[v]).collect());
    }
    Ok(Hypergraph::new(result))
}

/// One rewrite: which rule fired, where, and what it consumed/produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteEvent {
    pub rule_index: usize,
    pub m: Match,
    /// Edge occurrence indices deleted from the host.
    pub consumed: Vec<usize>,
    /// Edge occurrence indices of the appended right-hand side in the result.
    pub produced: Vec<usize>,
}

/// One successor per (rule, match) pair, in deterministic order.
pub fn successors(rules: &[RewriteRule], host: &Hypergraph) -> Vec<(RewriteEvent, Hypergraph)> {
    let mut out = Vec::new();
    for (rule_index, rule) in rules.iter().enumerate() {
        for m in find_matches(rule, host) {
            let result = apply_match(rule, host, &m).expect("enumerated match is valid");
            let residual_len = host.edges.len() - rule.lhs.len();
            let event = RewriteEvent {
                rule_index,
                consumed: m.edges.clone(),
                produced: (residual_len..residual_len + rule.rhs.len()).collect(),
                m,
            };
            out.push((event, result));
        }
    }
    out
}

/// Interchange vertices and hyperedges: the dual has one vertex per edge of
/// `h` and, for each vertex `v` of `h`, one hyperedge listing (in edge-index
/// order) the edges that contain `v`.
pub fn dual_hypergraph(h: &Hypergraph) -> Hypergraph {
    let mut dual_edges = Vec::new();
    for vertex in h.vertices() {
        let incident: Vec<u64> = h
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(&vertex))
            .map(|(i, _)| i as u64)
            .collect();
        dual_edges.push(incident);
    }
    Hypergraph::new(dual_edges)
}

// --- Canonical isomorphism certificates ---------------------------------

/// An isomorphism-invariant relabeling of a hypergraph.
///
/// Vertices are renamed `0..|V|-1`, edges are sorted by (arity, content),
/// and the certificate is the lowercase-hex serialization of that edge
/// list. Two hypergraphs have equal certificates exactly when they are
/// isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub graph: Hypergraph,
    pub certificate: String,
}

/// Canonicalize to the lexicographically minimal relabeled edge list over
/// every vertex permutation. Iterated partition refinement on vertex
/// incidence signatures orders the backtracking search; an optimistic
/// lower bound (unassigned slots filled with the smallest future label)
/// prunes branches that cannot beat the best labeling found so far.
pub fn canonical_form(h: &Hypergraph) -> CanonicalForm {
    let vertices: Vec<u64> = h.vertices().into_iter().collect();
    if vertices.is_empty() {
        let graph = Hypergraph::new(sorted_edges(&h.edges));
        let certificate = serialize_edges(&graph.edges);
        return CanonicalForm { graph, certificate };
    }
    let index_of: HashMap<u64, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let edges: Vec<Vec<usize>> = h
        .edges
        .iter()
        .map(|e| e.iter().map(|v| index_of[v]).collect())
        .collect();
    // incidences[v] = list of (edge index, position) where v occurs
    let mut incidences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices.len()];
    for (ei, edge) in edges.iter().enumerate() {
        for (pos, &v) in edge.iter().enumerate() {
            incidences[v].push((ei, pos));
        }
    }

    let colors = refine(&edges, &incidences, initial_colors(&edges, &incidences));
    // Candidate order: refinement color first, then index. The order only
    // affects how quickly a good bound appears, never the result.
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&v| (colors[v], v));

    let mut search = LabelSearch {
        edges: &edges,
        sorted_internal: {
            let mut sorted: Vec<&Vec<usize>> = edges.iter().collect();
            sorted.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
            sorted.into_iter().cloned().collect()
        },
        order,
        assigned: vec![None; vertices.len()],
        best: None,
    };
    search.descend(0);
    let canonical = search.best.expect("nonempty vertex set yields a labeling");
    let graph = Hypergraph::new(canonical);
    let certificate = serialize_edges(&graph.edges);
    CanonicalForm { graph, certificate }
}

struct LabelSearch<'a> {
    edges: &'a [Vec<usize>],
    /// Edge multiset in sorted order, for transposition checks.
    sorted_internal: Vec<Vec<usize>>,
    order: Vec<usize>,
    /// `assigned[v]` is the label given to internal vertex `v`, if any.
    assigned: Vec<Option<u64>>,
    best: Option<Vec<Vec<u64>>>,
}

impl LabelSearch<'_> {
    fn descend(&mut self, next_label: u64) {
        let n = self.order.len();
        if let Some(best) = &self.best {
            // `best` is always an achieved candidate, so a branch whose
            // optimistic bound cannot go strictly below it is dead.
            let bound = self.optimistic(next_label);
            if edge_list_cmp(&bound, best) != std::cmp::Ordering::Less {
                return;
            }
        }
        if next_label as usize == n {
            let complete: Vec<Vec<u64>> = self
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| self.assigned[v].expect("complete")).collect())
                .collect();
            let candidate = sorted_edges(&complete);
            let better = match &self.best {
                None => true,
                Some(best) => edge_list_cmp(&candidate, best) == std::cmp::Ordering::Less,
            };
            if better {
                self.best = Some(candidate);
            }
            return;
        }
        let mut tried: Vec<usize> = Vec::new();
        for i in 0..n {
            let v = self.order[i];
            if self.assigned[v].is_some() {
                continue;
            }
            // Exchanging two unassigned vertices related by an edge-
            // preserving transposition yields the same subtree minimum.
            // Below six vertices plain search is cheaper than the check.
            if n >= 6 && tried.iter().any(|&w| self.swap_is_automorphism(w, v)) {
                continue;
            }
            tried.push(v);
            self.assigned[v] = Some(next_label);
            self.descend(next_label + 1);
            self.assigned[v] = None;
        }
    }

    // TODO: orbit pruning would also collapse component-permutation
    // symmetry (many identical multi-vertex components), which single
    // transpositions cannot express.
    fn swap_is_automorphism(&self, a: usize, b: usize) -> bool {
        let swap = |v: usize| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        };
        let mut swapped: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| swap(v)).collect())
            .collect();
        swapped.sort_by(|x, y| (x.len(), x.as_slice()).cmp(&(y.len(), y.as_slice())));
        swapped == self.sorted_internal
    }

    /// Lower bound on any completion: every unassigned slot takes the
    /// smallest label still available. Slotwise decreases can only shrink
    /// the sorted edge list, so pruning on this bound is exact.
    fn optimistic(&self, next_label: u64) -> Vec<Vec<u64>> {
        let filled: Vec<Vec<u64>> = self
            .edges
            .iter()
            .map(|e| {
                e.iter()
                    .map(|&v| self.assigned[v].unwrap_or(next_label))
                    .collect()
            })
            .collect();
        sorted_edges(&filled)
    }
}

pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    canonical_form(a).certificate == canonical_form(b).certificate
}

fn sorted_edges(edges: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = edges.to_vec();
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    out
}

fn serialize_edges(edges: &[Vec<u64>]) -> String {
    let mut text = String::new();
    for edge in edges {
        let parts: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
        let _ = write!(text, "{}:{};", edge.len(), parts.join(","));
    }
    let mut hexed = String::with_capacity(text.len() * 2);
    for byte in text.as_bytes() {
        let _ = write!(hexed, "{byte:02x}");
    }
    hexed
}

/// Initial coloring from arity/position incidence multisets, including
/// self-co-occurrence counts so loops separate from plain edges up front.
fn initial_colors(edges: &[Vec<usize>], incidences: &[Vec<(usize, usize)>]) -> Vec<usize> {
    let mut signatures: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(incidences.len());
    for (v, incident) in incidences.iter().enumerate() {
        let mut sig: Vec<(usize, usize, usize)> = incident
            .iter()
            .map(|&(ei, pos)| {
                let self_occurrences = edges[ei].iter().filter(|&&u| u == v).count();
                (edges[ei].len(), pos, self_occurrences)
            })
            .collect();
        sig.sort_unstable();
        signatures.push(sig);
    }
    rank_by(&signatures)
}

/// Assign dense ranks by sorted signature order.
fn rank_by<T: Ord + Clone>(signatures: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = signatures.iter().collect();
    sorted.sort();
    sorted.dedup();
    signatures
        .iter()
        .map(|s| sorted.binary_search(&s).expect("present"))
        .collect()
}

/// Per-incidence view of a vertex: edge arity, slot, and slot colors.
type IncidenceSignature = (usize, usize, Vec<usize>);

/// Iterate vertex-signature refinement to a fixed point. The signature of a
/// vertex combines its color with, per incidence, the colors of every slot
/// of the incident edge.
fn refine(
    edges: &[Vec<usize>],
    incidences: &[Vec<(usize, usize)>],
    mut colors: Vec<usize>,
) -> Vec<usize> {
    loop {
        let mut signatures: Vec<(usize, Vec<IncidenceSignature>)> =
            Vec::with_capacity(colors.len());
        for (v, incident) in incidences.iter().enumerate() {
            let mut local: Vec<IncidenceSignature> = incident
                .iter()
                .map(|&(ei, pos)| {
                    let slot_colors: Vec<usize> = edges[ei].iter().map(|&u| colors[u]).collect();
                    (edges[ei].len(), pos, slot_colors)
                })
                .collect();
            local.sort_unstable();
            signatures.push((colors[v], local));
        }
        let next = rank_by(&signatures);
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

// Lexicographic comparison by (arity, content) without allocating.
fn edge_list_cmp(a: &[Vec<u64>], b: &[Vec<u64>]) -> std::cmp::Ordering {
    a.iter()
        .map(|e| (e.len(), e.as_slice()))
        .cmp(b.iter().map(|e| (e.len(), e.as_slice())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(edges: &[&[u64]]) -> Hypergraph {
        Hypergraph::new(edges.iter().map(|e| e.to_vec()).collect())
    }

    /// Brute-force canonical form: minimum sorted edge list over every
    /// permutation of the vertex set.
    fn brute_canonical(h: &Hypergraph) -> Vec<Vec<u64>> {
        let vertices: Vec<u64> = h.vertices().into_iter().collect();
        if vertices.is_empty() {
            return sorted_edges(&h.edges);
        }
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        let mut best: Option<Vec<Vec<u64>>> = None;
        permute(&mut order, 0, &mut |perm| {
            let relabel: HashMap<u64, u64> = vertices
                .iter()
                .zip(perm.iter())
                .map(|(&v, &i)| (v, i as u64))
                .collect();
            let candidate = sorted_edges(
                &h.edges
                    .iter()
                    .map(|e| e.iter().map(|v| relabel[v]).collect::<Vec<u64>>())
                    .collect::<Vec<_>>(),
            );
            let better = match &best {
                None => true,
                Some(current) => edge_list_cmp(&candidate, current) == std::cmp::Ordering::Less,
            };
            if better {
                best = Some(candidate);
            }
        });
        best.unwrap()
    }

    fn permute(order: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == order.len() {
            visit(order);
            return;
        }
        for i in k..order.len() {
            order.swap(k, i);
            permute(order, k + 1, visit);
            order.swap(k, i);
        }
    }

    #[test]
    fn relabelings_share_certificates() {
        let a = hg(&[&[0, 1], &[1, 2]]);
        let b = hg(&[&[5, 7], &[7, 9]]);
        assert_eq!(canonical_form(&a).certificate, canonical_form(&b).certificate);
    }

    #[test]
    fn self_loop_differs_from_plain_edge() {
        let loop_edge = hg(&[&[0, 0]]);
        let plain = hg(&[&[0, 1]]);
        assert_ne!(
            canonical_form(&loop_edge).certificate,
            canonical_form(&plain).certificate
        );
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for h in [
            hg(&[&[0, 1], &[1, 2], &[2, 0]]),
            Hypergraph::double_self_loop(),
            hg(&[&[3, 1, 4], &[1, 5]]),
        ] {
            let first = canonical_form(&h);
            let second = canonical_form(&first.graph);
            assert_eq!(first.graph, second.graph);
            assert_eq!(first.certificate, second.certificate);
        }
    }

    #[test]
    fn canonical_matches_brute_force_on_small_graphs() {
        // Spot sample here; the exhaustive sweep lives in the acceptance suite.
        let samples = [
            hg(&[&[0, 0], &[0, 0]]),
            hg(&[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]),
            hg(&[&[0, 1], &[0, 2], &[0, 3]]),
            hg(&[&[4, 4], &[4, 2], &[2, 4]]),
            hg(&[&[1, 2, 3], &[3, 2, 1]]),
        ];
        for h in samples {
            assert_eq!(canonical_form(&h).graph.edges, brute_canonical(&h), "{h:?}");
        }
    }

    #[test]
    fn highly_symmetric_graphs_canonicalize_quickly() {
        // Twelve disjoint self-loops: a factorial search without the
        // equality prune.
        let loops: Vec<Vec<u64>> = (0..12).map(|v| vec![v, v]).collect();
        let h = Hypergraph::new(loops);
        let canon = canonical_form(&h);
        let expected: Vec<Vec<u64>> = (0..12).map(|v| vec![v, v]).collect();
        assert_eq!(canon.graph.edges, expected);
        // A disjoint union of two directed triangles.
        let mut edges = Vec::new();
        for base in [0u64, 10] {
            for i in 0..3 {
                edges.push(vec![base + i, base + (i + 1) % 3]);
            }
        }
        let h = Hypergraph::new(edges);
        let canon = canonical_form(&h);
        assert_eq!(canon.graph.edges.len(), 6);
        assert_eq!(canonical_form(&canon.graph).certificate, canon.certificate);
    }

    #[test]
    fn isomorphism_rejects_edge_count_mismatch() {
        let a = hg(&[&[0, 1]]);
        let b = hg(&[&[0, 1], &[0, 1]]);
        assert!(is_isomorphic(&a, &a.clone()));
        assert!(!is_isomorphic(&a, &b));
    }

    #[test]
    fn double_self_loop_has_exactly_one_match() {
        let rule = RewriteRule::wolfram_2_2();
        let host = Hypergraph::double_self_loop();
        let matches = find_matches(&rule, &host);
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].edges, vec![0, 1]);
        let binding: Vec<(String, u64)> = matches[0].binding.clone().into_iter().collect();
        assert_eq!(
            binding,
            vec![
                ("x".to_string(), 0),
                ("y".to_string(), 0),
                ("z".to_string(), 0)
            ]
        );
    }

    #[test]
    fn single_edge_pattern_matches_once_per_edge() {
        let rule = RewriteRule::parse(&[&["x", "y"]], &[&["y", "x"]]).unwrap();
        let host = hg(&[&[0, 1], &[2, 3]]);
        assert_eq!(find_matches(&rule, &host).len(), 2);
    }

    #[test]
    fn fork_pattern_finds_both_bindings() {
        let rule = RewriteRule::parse(&[&["x", "y"], &["x", "z"]], &[]).unwrap();
        let host = hg(&[&[0, 1], &[0, 2]]);
        let matches = find_matches(&rule, &host);
        assert_eq!(matches.len(), 2);
        let bindings: Vec<Vec<u64>> = matches
            .iter()
            .map(|m| vec![m.binding["x"], m.binding["y"], m.binding["z"]])
            .collect();
        assert!(bindings.contains(&vec![0, 1, 2]));
        assert!(bindings.contains(&vec![0, 2, 1]));
    }

    /// Exhaustive binding enumerator used as the match oracle: every
    /// function from variables to host vertices, times every assignment of
    /// pattern edges to distinct host occurrences.
    fn brute_matches(rule: &RewriteRule, host: &Hypergraph) -> Vec<Match> {
        let vars: Vec<&str> = rule.lhs_vars().into_iter().collect();
        let vertices: Vec<u64> = host.vertices().into_iter().collect();
        let mut found = BTreeSet::new();
        if vertices.is_empty() {
            return Vec::new();
        }
        let mut assignment = vec![0usize; vars.len()];
        loop {
            let binding: BTreeMap<String, u64> = vars
                .iter()
                .zip(assignment.iter())
                .map(|(v, &i)| (v.to_string(), vertices[i]))
                .collect();
            let needed: Vec<Vec<u64>> = rule
                .lhs
                .iter()
                .map(|p| p.iter().map(|v| binding[v]).collect())
                .collect();
            let mut used = vec![false; host.edges.len()];
            assign_edges(&needed, 0, host, &mut used, &mut Vec::new(), &mut |sel| {
                let mut edges = sel.to_vec();
                edges.sort_unstable();
                found.insert(Match {
                    edges,
                    binding: binding.clone(),
                });
            });
            // Odometer over assignments.
            let mut i = 0;
            loop {
                if i == assignment.len() {
                    return found.into_iter().collect();
                }
                assignment[i] += 1;
                if assignment[i] < vertices.len() {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    fn assign_edges(
        needed: &[Vec<u64>],
        depth: usize,
        host: &Hypergraph,
        used: &mut Vec<bool>,
        selection: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if depth == needed.len() {
            visit(selection);
            return;
        }
        for (i, edge) in host.edges.iter().enumerate() {
            if !used[i] && edge == &needed[depth] {
                used[i] = true;
                selection.push(i);
                assign_edges(needed, depth + 1, host, used, selection, visit);
                selection.pop();
                used[i] = false;
            }
        }
    }

    #[test]
    fn matches_agree_with_binding_enumerator() {
        let rule = RewriteRule::wolfram_2_2();
        let hosts = [
            Hypergraph::double_self_loop(),
            hg(&[&[0, 1], &[0, 2]]),
            hg(&[&[0, 0], &[0, 1], &[0, 1], &[0, 1]]),
            hg(&[&[0, 1], &[1, 2], &[2, 0], &[1, 1]]),
            hg(&[&[0, 1], &[2, 3]]),
        ];
        for host in hosts {
            assert_eq!(find_matches(&rule, &host), brute_matches(&rule, &host), "{host:?}");
        }
    }

    #[test]
    fn applying_the_unique_double_self_loop_match() {
        let rule = RewriteRule::wolfram_2_2();
        let host = Hypergraph::double_self_loop();
        let m = &find_matches(&rule, &host)[0];
        let result = apply_match(&rule, &host, m).unwrap();
        assert_eq!(
            result.edges,
            vec![vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1]]
        );
    }

    #[test]
    fn identity_rule_preserves_host_up_to_reorder() {
        let rule = RewriteRule::parse(&[&["x", "y"]], &[&["x", "y"]]).unwrap();
        let host = hg(&[&[3, 4], &[5, 6]]);
        for m in find_matches(&rule, &host) {
            let result = apply_match(&rule, &host, &m).unwrap();
            assert_eq!(sorted_edges(&result.edges), sorted_edges(&host.edges));
        }
    }

    #[test]
    fn fresh_vertices_follow_first_appearance_order() {
        // Two fresh variables: `a` appears before `b` on the right side,
        // so `a` takes max+1 and `b` takes max+2.
        let rule = RewriteRule::parse(&[&["x"]], &[&["x", "a"], &["b", "a"]]).unwrap();
        let host = hg(&[&[5]]);
        let m = &find_matches(&rule, &host)[0];
        let result = apply_match(&rule, &host, m).unwrap();
        assert_eq!(result.edges, vec![vec![5, 6], vec![7, 6]]);
    }

    #[test]
    fn edge_count_bookkeeping() {
        let rule = RewriteRule::wolfram_2_2();
        let host = hg(&[&[0, 1], &[0, 2], &[7, 8]]);
        for m in find_matches(&rule, &host) {
            let result = apply_match(&rule, &host, &m).unwrap();
            assert_eq!(
                result.edge_count(),
                host.edge_count() - rule.lhs.len() + rule.rhs.len()
            );
        }
    }

    #[test]
    fn invalid_match_is_rejected() {
        let rule = RewriteRule::wolfram_2_2();
        let host = Hypergraph::double_self_loop();
        let bogus = Match {
            edges: vec![0, 1],
            binding: [("x".into(), 0), ("y".into(), 1), ("z".into(), 0)]
                .into_iter()
                .collect(),
        };
        assert!(apply_match(&rule, &host, &bogus).is_err());
        let out_of_range = Match {
            edges: vec![0, 5],
            binding: BTreeMap::new(),
        };
        assert!(apply_match(&rule, &host, &out_of_range).is_err());
    }

    #[test]
    fn successor_count_is_total_match_count() {
        let rules = vec![
            RewriteRule::wolfram_2_2(),
            RewriteRule::parse(&[&["a", "a"]], &[&["a", "a"], &["a", "a"]]).unwrap(),
        ];
        let host = Hypergraph::double_self_loop();
        let succ = successors(&rules, &host);
        let expected: usize = rules.iter().map(|r| find_matches(r, &host).len()).sum();
        assert!(expected > 0);
        assert_eq!(succ.len(), expected);
        assert!(successors(&[], &host).is_empty());
    }

    #[test]
    fn reverse_swaps_sides_and_is_involutive() {
        let rule = RewriteRule::wolfram_2_2();
        let reversed = rule.reversed();
        assert_eq!(reversed.lhs.len(), 4);
        assert_eq!(reversed.rhs.len(), 2);
        assert_eq!(reversed.reversed(), rule);
    }

    #[test]
    fn reverse_application_restores_first_step() {
        let rule = RewriteRule::wolfram_2_2();
        let host = Hypergraph::double_self_loop();
        let m = &find_matches(&rule, &host)[0];
        let stepped = apply_match(&rule, &host, m).unwrap();
        let back = rule.reversed();
        let restored = find_matches(&back, &stepped).into_iter().any(|rm| {
            apply_match(&back, &stepped, &rm)
                .map(|g| is_isomorphic(&g, &host))
                .unwrap_or(false)
        });
        assert!(restored);
    }

    #[test]
    fn dual_of_single_edge() {
        let h = hg(&[&[0, 1]]);
        let dual = dual_hypergraph(&h);
        assert_eq!(dual.edges, vec![vec![0], vec![0]]);
    }

    #[test]
    fn dual_of_double_self_loop_is_one_edge() {
        let dual = dual_hypergraph(&Hypergraph::double_self_loop());
        assert_eq!(dual.edges, vec![vec![0, 1]]);
    }

    #[test]
    fn dual_edge_count_equals_vertex_count() {
        for h in [
            hg(&[&[0, 1], &[1, 2], &[2, 3]]),
            hg(&[&[0, 1, 2], &[2, 1]]),
            Hypergraph::double_self_loop(),
        ] {
            assert_eq!(dual_hypergraph(&h).edge_count(), h.vertices().len());
        }
    }
}
