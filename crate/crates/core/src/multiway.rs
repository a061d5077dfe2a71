//! Multiway evolution graphs for any system exposing ordered successors
//! and canonical state keys, together with their foliation and the
//! branchial, causal, and token-event (glocal) derivatives.
//!
//! Construction is breadth-first by layers. In per-layer mode states are
//! merged by canonical key within a layer, so every event advances the
//! universal time function by exactly one. In global mode a state whose
//! key was seen at any earlier layer is merged into that earlier state;
//! the resulting flat or backward event edges are the witnesses of
//! sequential reducibility and are kept, not repaired.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::category::{Arrow, Quiver, QuiverObject};
use crate::error::{Error, Result};
use crate::hypergraph::{self, Hypergraph, RewriteRule};
use crate::tm::{tm_step, StepOutcome, TmConfig, TmRule};

/// Printable token payload; instance identity is handled by the engine.
pub type TokenValue = String;

/// How a transition names a token it consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenRef {
    /// Index into the source state's token decomposition.
    At(usize),
    /// The live token with this value; a background token is materialized
    /// as an initial token when no live instance carries the value.
    Value(TokenValue),
}

/// One successor of a state, with optional token bookkeeping.
#[derive(Debug, Clone)]
pub struct Transition<S> {
    /// Event label: rule index plus match descriptor.
    pub label: String,
    pub target: S,
    pub consumed: Vec<TokenRef>,
    pub produced: Vec<TokenValue>,
}

/// A system that a multiway evolution can be built over.
///
/// Successor order must be deterministic and the canonical key must
/// respect the system's state equivalence.
pub trait System {
    type State: Clone + Send + Sync;

    fn successors(&self, state: &Self::State) -> Vec<Transition<Self::State>>;

    fn canonical_key(&self, state: &Self::State) -> String;

    /// Token decomposition of a state, used to seed initial tokens.
    /// `None` when the system has no token semantics.
    fn tokens(&self, _state: &Self::State) -> Option<Vec<TokenValue>> {
        None
    }

    /// Spatial location of a token, when the system has one (tape position
    /// for Turing machines). Locations drive glocal branchial edges.
    fn token_location(&self, _value: &str) -> Option<String> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupMode {
    PerLayer,
    Global,
}

/// A canonical state of the multiway graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateNode {
    pub id: usize,
    pub key: String,
    /// First-seen layer; the universal time function.
    pub layer: usize,
}

/// A single application of one rule at one match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEdge {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub label: String,
    /// Layer of the source state at expansion time.
    pub layer: usize,
    /// Token instances consumed/produced; empty without token support.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub consumed: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub produced: Vec<usize>,
}

/// Layered multiway evolution graph over canonical states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiwayGraph {
    pub states: Vec<StateNode>,
    pub events: Vec<EventEdge>,
    pub depth: usize,
    pub mode: DedupMode,
    pub initial: Vec<usize>,
    /// Whether events carry token data.
    pub has_tokens: bool,
    /// Values of the token instances referenced by events.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub token_values: Vec<TokenValue>,
}

impl MultiwayGraph {
    pub fn layer(&self, t: usize) -> Vec<usize> {
        self.states
            .iter()
            .filter(|s| s.layer == t)
            .map(|s| s.id)
            .collect()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.depth + 1];
        for state in &self.states {
            if state.layer < sizes.len() {
                sizes[state.layer] += 1;
            }
        }
        sizes
    }

    /// Events leaving layer `t`, as (source key, target key) pairs.
    pub fn layer_transitions(&self) -> Vec<Vec<(String, String)>> {
        let mut layers = vec![Vec::new(); self.depth];
        for event in &self.events {
            if event.layer < layers.len() {
                layers[event.layer].push((
                    self.states[event.from].key.clone(),
                    self.states[event.to].key.clone(),
                ));
            }
        }
        layers
    }

    /// The evolution quiver: objects are states tagged with their layer,
    /// arrows are events named by source and label.
    pub fn quiver(&self) -> Quiver {
        let objects = self
            .states
            .iter()
            .map(|s| QuiverObject {
                name: s.key.clone(),
                time: s.layer,
            })
            .collect();
        let arrows = self
            .events
            .iter()
            .map(|e| Arrow {
                name: format!("s{}:{}", e.from, e.label),
                source: e.from,
                target: e.to,
            })
            .collect();
        Quiver::new(objects, arrows).expect("events reference existing states")
    }

    /// Layer time per state id.
    pub fn foliation_times(&self) -> Vec<usize> {
        self.states.iter().map(|s| s.layer).collect()
    }
}

/// Expand `system` breadth-first from `inits` for `depth` layers.
///
/// `pool` shards successor computation across a layer's states; the merge
/// is a deterministic reduction, so results are identical for any worker
/// count.
pub fn build_multiway<S: System + Sync>(
    system: &S,
    inits: &[S::State],
    depth: usize,
    mode: DedupMode,
    pool: Option<&rayon::ThreadPool>,
) -> Result<MultiwayGraph> {
    if inits.is_empty() {
        return Err(Error::MalformedInput("at least one initial state".into()));
    }
    let has_tokens = system.tokens(&inits[0]).is_some();

    let mut states: Vec<StateNode> = Vec::new();
    let mut events: Vec<EventEdge> = Vec::new();
    // key -> id; in per-layer mode the key is scoped by layer.
    let mut seen: HashMap<(Option<usize>, String), usize> = HashMap::new();
    let scope = |mode: DedupMode, layer: usize| match mode {
        DedupMode::PerLayer => Some(layer),
        DedupMode::Global => None,
    };

    let mut tokens = TokenArena::default();
    // Live token instances per state, aligned with engine bookkeeping:
    // carried-over source tokens in order, then produced tokens.
    let mut state_tokens: Vec<Vec<usize>> = Vec::new();
    // The system state behind each node, kept for expansion.
    let mut state_values: Vec<S::State> = Vec::new();

    let mut frontier: Vec<usize> = Vec::new();
    for init in inits {
        let key = system.canonical_key(init);
        if seen.contains_key(&(scope(mode, 0), key.clone())) {
            continue;
        }
        let id = states.len();
        seen.insert((scope(mode, 0), key.clone()), id);
        states.push(StateNode { id, key, layer: 0 });
        state_values.push(init.clone());
        let instances = match system.tokens(init) {
            Some(values) if has_tokens => {
                // Duplicate values within one state are distinct instances;
                // the ordinal keeps them apart while still sharing initial
                // tokens across branches.
                let mut ordinals: HashMap<TokenValue, usize> = HashMap::new();
                values
                    .into_iter()
                    .map(|v| {
                        let ordinal = ordinals.entry(v.clone()).or_insert(0);
                        let id = tokens.initial(v, *ordinal);
                        *ordinal += 1;
                        id
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        state_tokens.push(instances);
        frontier.push(id);
    }

    for layer in 0..depth {
        if frontier.is_empty() {
            break;
        }
        // Expansion order: sources sorted by canonical key.
        let mut sources = frontier.clone();
        sources.sort_by(|&a, &b| states[a].key.cmp(&states[b].key));

        let expansions: Vec<Vec<Transition<S::State>>> = {
            let expand = |&id: &usize| system.successors(&state_values[id]);
            match pool {
                Some(pool) => pool.install(|| {
                    use rayon::prelude::*;
                    sources.par_iter().map(expand).collect()
                }),
                None => sources.iter().map(expand).collect(),
            }
        };

        let mut next_frontier = Vec::new();
        for (&source, transitions) in sources.iter().zip(expansions.iter()) {
            // Labels are unique per source, so (source key, label) orders
            // the layer's events totally.
            let mut ordered: Vec<&Transition<S::State>> = transitions.iter().collect();
            ordered.sort_by(|a, b| a.label.cmp(&b.label));
            for transition in ordered {
                let key = system.canonical_key(&transition.target);
                let (consumed, produced) = if has_tokens {
                    tokens.resolve(&state_tokens[source], transition)?
                } else {
                    (Vec::new(), Vec::new())
                };
                let target_scope = (scope(mode, layer + 1), key.clone());
                let to = match seen.get(&target_scope) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        seen.insert(target_scope, id);
                        states.push(StateNode {
                            id,
                            key,
                            layer: layer + 1,
                        });
                        state_values.push(transition.target.clone());
                        let instances = if has_tokens {
                            next_tokens(&state_tokens[source], &consumed, &produced)
                        } else {
                            Vec::new()
                        };
                        state_tokens.push(instances);
                        next_frontier.push(id);
                        id
                    }
                };
                events.push(EventEdge {
                    id: events.len(),
                    from: source,
                    to,
                    label: transition.label.clone(),
                    layer,
                    consumed,
                    produced,
                });
            }
        }
        frontier = next_frontier;
    }

    Ok(MultiwayGraph {
        initial: inits
            .iter()
            .map(|i| seen[&(scope(mode, 0), system.canonical_key(i))])
            .collect(),
        states,
        events,
        depth,
        mode,
        has_tokens,
        token_values: tokens.values,
    })
}

/// Token instances; initial instances are memoized by (value, ordinal) so
/// branches share their common background while duplicate values within
/// one state stay distinct.
#[derive(Default)]
struct TokenArena {
    values: Vec<TokenValue>,
    initial_by_value: HashMap<(TokenValue, usize), usize>,
}

impl TokenArena {
    fn initial(&mut self, value: TokenValue, ordinal: usize) -> usize {
        if let Some(&id) = self.initial_by_value.get(&(value.clone(), ordinal)) {
            return id;
        }
        let id = self.values.len();
        self.values.push(value.clone());
        self.initial_by_value.insert((value, ordinal), id);
        id
    }

    fn created(&mut self, value: TokenValue) -> usize {
        let id = self.values.len();
        self.values.push(value);
        id
    }

    /// Resolve a transition's token references against the live instances
    /// of the source branch.
    fn resolve<S>(
        &mut self,
        live: &[usize],
        transition: &Transition<S>,
    ) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut consumed = Vec::with_capacity(transition.consumed.len());
        let mut taken: BTreeSet<usize> = BTreeSet::new();
        for token_ref in &transition.consumed {
            let instance = match token_ref {
                TokenRef::At(position) => *live.get(*position).ok_or_else(|| {
                    Error::InternalConsistency(format!(
                        "token position {position} outside branch of {} tokens",
                        live.len()
                    ))
                })?,
                TokenRef::Value(value) => {
                    match live
                        .iter()
                        .find(|&&id| !taken.contains(&id) && &self.values[id] == value)
                    {
                        Some(&id) => id,
                        // Background cell never touched on this branch.
                        None => self.initial(value.clone(), 0),
                    }
                }
            };
            if !taken.insert(instance) {
                return Err(Error::InternalConsistency(format!(
                    "token instance {instance} consumed twice by one event"
                )));
            }
            consumed.push(instance);
        }
        let produced = transition
            .produced
            .iter()
            .map(|value| self.created(value.clone()))
            .collect();
        Ok((consumed, produced))
    }
}

fn next_tokens(live: &[usize], consumed: &[usize], produced: &[usize]) -> Vec<usize> {
    let consumed_set: BTreeSet<usize> = consumed.iter().copied().collect();
    let mut next: Vec<usize> = live
        .iter()
        .copied()
        .filter(|id| !consumed_set.contains(id))
        .collect();
    next.extend_from_slice(produced);
    next
}

/// The layers of the universal time function; layer `t` holds the states
/// first seen at time `t`. Layers partition the state set.
pub fn foliate(graph: &MultiwayGraph) -> Vec<Vec<usize>> {
    let mut layers = vec![Vec::new(); graph.depth + 1];
    for state in &graph.states {
        layers[state.layer].push(state.id);
    }
    layers
}

/// Undirected graph on one layer: two states are linked exactly when some
/// state of the previous layer has events to both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchialGraph {
    pub layer: usize,
    pub vertices: Vec<usize>,
    /// Sorted pairs (low id, high id).
    pub edges: Vec<(usize, usize)>,
}

/// Immediate-ancestor branchial graph; see
/// [`branchial_graph_with_radius`] for the general form.
pub fn branchial_graph(graph: &MultiwayGraph, t: usize) -> Result<BranchialGraph> {
    branchial_graph_with_radius(graph, t, 1)
}

/// Branchial graph with a configurable ancestor radius: two states of
/// layer `t` are linked when some state of layer `t - k` (for any
/// `1 <= k <= radius`) reaches both through directed paths of length `k`.
/// Radius 1 is the immediate common-ancestor reading.
pub fn branchial_graph_with_radius(
    graph: &MultiwayGraph,
    t: usize,
    radius: usize,
) -> Result<BranchialGraph> {
    if t > graph.depth {
        return Err(Error::LayerOutOfRange {
            layer: t,
            depth: graph.depth,
        });
    }
    if radius == 0 {
        return Err(Error::MalformedInput("ancestor radius must be positive".into()));
    }
    let vertices = graph.layer(t);
    if t == 0 {
        return Ok(BranchialGraph {
            layer: 0,
            vertices,
            edges: Vec::new(),
        });
    }
    let members: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut outgoing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for event in &graph.events {
        outgoing.entry(event.from).or_default().push(event.to);
    }
    let mut edges = BTreeSet::new();
    for k in 1..=radius.min(t) {
        for &ancestor in &graph.layer(t - k) {
            // States reachable in exactly k steps.
            let mut frontier: BTreeSet<usize> = BTreeSet::from([ancestor]);
            for _ in 0..k {
                frontier = frontier
                    .iter()
                    .flat_map(|z| {
                        outgoing.get(z).map(|v| v.as_slice()).unwrap_or(&[]).iter().copied()
                    })
                    .collect();
            }
            let reached: Vec<usize> = frontier.intersection(&members).copied().collect();
            for (i, &a) in reached.iter().enumerate() {
                for &b in &reached[i + 1..] {
                    edges.insert((a, b));
                }
            }
        }
    }
    Ok(BranchialGraph {
        layer: t,
        vertices,
        edges: edges.into_iter().collect(),
    })
}

/// Directed acyclic graph of events ordered by token flow: an edge runs
/// from `e1` to `e2` exactly when a token instance produced by `e1` is
/// consumed by `e2`. Transitive edges are not added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalGraph {
    /// (id, label, layer) per event, in event order.
    pub events: Vec<(usize, String, usize)>,
    pub edges: Vec<(usize, usize)>,
}

pub fn causal_graph(graph: &MultiwayGraph) -> Result<CausalGraph> {
    if !graph.has_tokens {
        return Err(Error::TokensUnavailable);
    }
    let mut producer: HashMap<usize, usize> = HashMap::new();
    for event in &graph.events {
        for &token in &event.produced {
            producer.insert(token, event.id);
        }
    }
    let mut edges = BTreeSet::new();
    for event in &graph.events {
        for &token in &event.consumed {
            if let Some(&source) = producer.get(&token) {
                if source != event.id {
                    edges.insert((source, event.id));
                }
            }
        }
    }
    Ok(CausalGraph {
        events: graph
            .events
            .iter()
            .map(|e| (e.id, e.label.clone(), e.layer))
            .collect(),
        edges: edges.into_iter().collect(),
    })
}

// --- Glocal (token-event) construction --------------------------------------

/// A token instance of the glocal multiway system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenNode {
    pub id: usize,
    pub value: TokenValue,
    /// Creating event, or `None` for initial tokens.
    pub creator: Option<usize>,
    /// Spatial location, when the system defines one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub location: Option<String>,
}

/// A global event of the glocal multiway system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TegEvent {
    pub id: usize,
    pub label: String,
    pub layer: usize,
    /// Ingested token instances.
    pub consumed: Vec<usize>,
    /// Egested token instances.
    pub produced: Vec<usize>,
}

/// Bipartite graph of token instances and events, with the per-layer
/// branch membership needed for glocal branchial graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenEventGraph {
    pub tokens: Vec<TokenNode>,
    pub events: Vec<TegEvent>,
    /// `branches[t]` lists each live branch at layer `t` as a sorted token
    /// id set.
    pub branches: Vec<Vec<Vec<usize>>>,
}

impl TokenEventGraph {
    /// Total ingestion plus egestion edges.
    pub fn edge_count(&self) -> usize {
        self.events
            .iter()
            .map(|e| e.consumed.len() + e.produced.len())
            .sum()
    }
}

/// Build the glocal multiway system: states shatter into tokens, events
/// consume and produce token instances, and equivalence acts at event
/// level, so two events with the same consumed instances, rule, and
/// produced values are one event.
pub fn token_event_graph<S: System>(
    system: &S,
    inits: &[S::State],
    depth: usize,
) -> Result<TokenEventGraph> {
    if inits.is_empty() {
        return Err(Error::MalformedInput("at least one initial state".into()));
    }
    if system.tokens(&inits[0]).is_none() {
        return Err(Error::TokensUnavailable);
    }

    let mut tokens: Vec<TokenNode> = Vec::new();
    let mut initial_by_value: HashMap<(TokenValue, usize), usize> = HashMap::new();
    let mut events: Vec<TegEvent> = Vec::new();
    // (consumed instance set, label, produced values) -> event id
    let mut event_ids: HashMap<(Vec<usize>, String, Vec<TokenValue>), usize> = HashMap::new();

    // A branch: the underlying state plus live instances aligned with the
    // engine's bookkeeping (residual order, then produced order).
    struct Branch<S> {
        state: S,
        live: Vec<usize>,
    }

    fn intern_initial<S: System>(
        system: &S,
        tokens: &mut Vec<TokenNode>,
        initial_by_value: &mut HashMap<(TokenValue, usize), usize>,
        value: &str,
        ordinal: usize,
    ) -> usize {
        match initial_by_value.get(&(value.to_string(), ordinal)) {
            Some(&id) => id,
            None => {
                let id = tokens.len();
                tokens.push(TokenNode {
                    id,
                    value: value.to_string(),
                    creator: None,
                    location: system.token_location(value),
                });
                initial_by_value.insert((value.to_string(), ordinal), id);
                id
            }
        }
    }

    let mut branches: Vec<Branch<S::State>> = Vec::new();
    let mut seen_branches: BTreeSet<Vec<usize>> = BTreeSet::new();
    for init in inits {
        let values = system.tokens(init).ok_or(Error::TokensUnavailable)?;
        let mut ordinals: HashMap<&str, usize> = HashMap::new();
        let live: Vec<usize> = values
            .iter()
            .map(|value| {
                let ordinal = ordinals.entry(value.as_str()).or_insert(0);
                let id = intern_initial(
                    system,
                    &mut tokens,
                    &mut initial_by_value,
                    value,
                    *ordinal,
                );
                *ordinal += 1;
                id
            })
            .collect();
        let mut sorted = live.clone();
        sorted.sort_unstable();
        if seen_branches.insert(sorted) {
            branches.push(Branch {
                state: init.clone(),
                live,
            });
        }
    }

    fn snapshot<S>(branches: &[Branch<S>]) -> Vec<Vec<usize>>
    where
        Branch<S>: Sized,
    {
        let mut snap: Vec<Vec<usize>> = branches
            .iter()
            .map(|b| {
                let mut ids = b.live.clone();
                ids.sort_unstable();
                ids
            })
            .collect();
        snap.sort();
        snap
    }

    let mut layers: Vec<Vec<Vec<usize>>> = Vec::with_capacity(depth + 1);
    layers.push(snapshot(&branches));

    for layer in 0..depth {
        let mut next: Vec<Branch<S::State>> = Vec::new();
        let mut next_seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        // Deterministic branch order: by sorted live set.
        let mut order: Vec<usize> = (0..branches.len()).collect();
        order.sort_by_key(|&i| {
            let mut ids = branches[i].live.clone();
            ids.sort_unstable();
            ids
        });
        for &bi in &order {
            let branch = &branches[bi];
            let mut transitions = system.successors(&branch.state);
            transitions.sort_by(|a, b| a.label.cmp(&b.label));
            for transition in transitions {
                let mut consumed = Vec::with_capacity(transition.consumed.len());
                let mut taken = BTreeSet::new();
                for token_ref in &transition.consumed {
                    let id = match token_ref {
                        TokenRef::At(position) => {
                            *branch.live.get(*position).ok_or_else(|| {
                                Error::InternalConsistency(format!(
                                    "token position {position} outside branch"
                                ))
                            })?
                        }
                        TokenRef::Value(value) => match branch
                            .live
                            .iter()
                            .find(|&&id| !taken.contains(&id) && &tokens[id].value == value)
                        {
                            Some(&id) => id,
                            None => intern_initial(
                                system,
                                &mut tokens,
                                &mut initial_by_value,
                                value,
                                0,
                            ),
                        },
                    };
                    taken.insert(id);
                    consumed.push(id);
                }
                let mut consumed_key = consumed.clone();
                consumed_key.sort_unstable();
                let event_key = (
                    consumed_key,
                    transition.label.clone(),
                    transition.produced.clone(),
                );
                let event_id = match event_ids.get(&event_key) {
                    Some(&id) => id,
                    None => {
                        let id = events.len();
                        let produced: Vec<usize> = transition
                            .produced
                            .iter()
                            .map(|value| {
                                let tid = tokens.len();
                                tokens.push(TokenNode {
                                    id: tid,
                                    value: value.clone(),
                                    creator: Some(id),
                                    location: system.token_location(value),
                                });
                                tid
                            })
                            .collect();
                        events.push(TegEvent {
                            id,
                            label: transition.label.clone(),
                            layer,
                            consumed: consumed.clone(),
                            produced,
                        });
                        event_ids.insert(event_key, id);
                        id
                    }
                };
                let produced = events[event_id].produced.clone();
                let consumed_set: BTreeSet<usize> = consumed.iter().copied().collect();
                let mut live: Vec<usize> = branch
                    .live
                    .iter()
                    .copied()
                    .filter(|id| !consumed_set.contains(id))
                    .collect();
                live.extend_from_slice(&produced);
                let mut sorted = live.clone();
                sorted.sort_unstable();
                if next_seen.insert(sorted) {
                    next.push(Branch {
                        state: transition.target.clone(),
                        live,
                    });
                }
            }
        }
        branches = next;
        layers.push(snapshot(&branches));
        if branches.is_empty() {
            layers.resize(depth + 1, Vec::new());
            break;
        }
    }

    Ok(TokenEventGraph {
        tokens,
        events,
        branches: layers,
    })
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum GlocalEdgeKind {
    /// Tokens co-resident in one branch's state.
    Spatial,
    /// Tokens on different branches at the same location, or descended
    /// from events that consumed a common token instance.
    Branchial,
}

/// Glocal branchial graph at one layer: live token instances connected by
/// spatial and branchial edges. The two kinds partition the edge set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlocalBranchialGraph {
    pub layer: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize, GlocalEdgeKind)>,
}

pub fn glocal_branchial_graph(teg: &TokenEventGraph, t: usize) -> Result<GlocalBranchialGraph> {
    let branches = teg.branches.get(t).ok_or(Error::LayerOutOfRange {
        layer: t,
        depth: teg.branches.len().saturating_sub(1),
    })?;
    let vertices: BTreeSet<usize> = branches.iter().flatten().copied().collect();

    let mut spatial: BTreeSet<(usize, usize)> = BTreeSet::new();
    for branch in branches {
        for (i, &a) in branch.iter().enumerate() {
            for &b in &branch[i + 1..] {
                spatial.insert((a.min(b), a.max(b)));
            }
        }
    }

    let located = vertices.iter().all(|&id| teg.tokens[id].location.is_some());
    let mut branchial: BTreeSet<(usize, usize)> = BTreeSet::new();
    let ordered: Vec<usize> = vertices.iter().copied().collect();
    for (i, &a) in ordered.iter().enumerate() {
        for &b in &ordered[i + 1..] {
            let pair = (a, b);
            if spatial.contains(&pair) {
                continue;
            }
            let related = if located {
                teg.tokens[a].location == teg.tokens[b].location
            } else {
                match (teg.tokens[a].creator, teg.tokens[b].creator) {
                    (Some(ea), Some(eb)) if ea != eb => {
                        let ca: BTreeSet<usize> =
                            teg.events[ea].consumed.iter().copied().collect();
                        teg.events[eb].consumed.iter().any(|id| ca.contains(id))
                    }
                    _ => false,
                }
            };
            if related {
                branchial.insert(pair);
            }
        }
    }

    let mut edges: Vec<(usize, usize, GlocalEdgeKind)> = spatial
        .into_iter()
        .map(|(a, b)| (a, b, GlocalEdgeKind::Spatial))
        .chain(
            branchial
                .into_iter()
                .map(|(a, b)| (a, b, GlocalEdgeKind::Branchial)),
        )
        .collect();
    edges.sort();
    Ok(GlocalBranchialGraph {
        layer: t,
        vertices: ordered,
        edges,
    })
}

// --- System adapters ---------------------------------------------------------

/// One or more Turing machine rules acting on tape configurations.
///
/// Tokens: one per occupied tape cell (`c:<pos>:<color>`) plus the head
/// (`h:<state>:<pos>`). Reading a blank cell consumes a background token.
pub struct TmSystem {
    pub rules: Vec<TmRule>,
    /// Use the translation-invariant key instead of the absolute one.
    pub translation_invariant: bool,
}

impl TmSystem {
    pub fn new(rules: Vec<TmRule>) -> Self {
        TmSystem {
            rules,
            translation_invariant: false,
        }
    }

    fn cell_token(position: i64, color: u32) -> TokenValue {
        format!("c:{position}:{color}")
    }

    fn head_token(state: u32, position: i64) -> TokenValue {
        format!("h:{state}:{position}")
    }
}

impl System for TmSystem {
    type State = TmConfig;

    fn successors(&self, state: &Self::State) -> Vec<Transition<Self::State>> {
        let mut out = Vec::new();
        for (index, rule) in self.rules.iter().enumerate() {
            let next = match tm_step(rule, state) {
                StepOutcome::Advanced(next) => next,
                StepOutcome::Halted => continue,
            };
            let read = state.color_at(state.head);
            let written = next.color_at(state.head);
            out.push(Transition {
                label: format!("rule:{index};case:{},{}", state.state, read),
                consumed: vec![
                    TokenRef::Value(Self::head_token(state.state, state.head)),
                    TokenRef::Value(Self::cell_token(state.head, read)),
                ],
                produced: vec![
                    Self::head_token(next.state, next.head),
                    Self::cell_token(state.head, written),
                ],
                target: next,
            });
        }
        out
    }

    fn canonical_key(&self, state: &Self::State) -> String {
        if self.translation_invariant {
            state.translated_key()
        } else {
            state.canonical_key()
        }
    }

    fn tokens(&self, state: &Self::State) -> Option<Vec<TokenValue>> {
        let mut values: Vec<TokenValue> = state
            .occupied()
            .map(|(pos, color)| Self::cell_token(pos, color))
            .collect();
        values.push(Self::head_token(state.state, state.head));
        Some(values)
    }

    fn token_location(&self, value: &str) -> Option<String> {
        let mut parts = value.split(':');
        match parts.next()? {
            "c" => Some(format!("c@{}", parts.next()?)),
            "h" => {
                let _state = parts.next()?;
                Some(format!("h@{}", parts.next()?))
            }
            _ => None,
        }
    }
}

/// One or more set-substitution rules acting on hypergraphs.
///
/// Tokens: one per edge occurrence, referenced by position so duplicate
/// edges stay distinct instances.
pub struct HgSystem {
    pub rules: Vec<RewriteRule>,
}

impl HgSystem {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        HgSystem { rules }
    }

    fn edge_token(edge: &[u64]) -> TokenValue {
        let parts: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
        format!("e:[{}]", parts.join(","))
    }
}

impl System for HgSystem {
    type State = Hypergraph;

    fn successors(&self, state: &Self::State) -> Vec<Transition<Self::State>> {
        hypergraph::successors(&self.rules, state)
            .into_iter()
            .map(|(event, target)| {
                let produced = event
                    .produced
                    .iter()
                    .map(|&i| Self::edge_token(&target.edges[i]))
                    .collect();
                Transition {
                    label: format!("rule:{};match:{}", event.rule_index, event.m.descriptor()),
                    consumed: event.consumed.iter().map(|&i| TokenRef::At(i)).collect(),
                    produced,
                    target,
                }
            })
            .collect()
    }

    fn canonical_key(&self, state: &Self::State) -> String {
        hypergraph::canonical_form(state).certificate
    }

    fn tokens(&self, state: &Self::State) -> Option<Vec<TokenValue>> {
        Some(state.edges.iter().map(|e| Self::edge_token(e)).collect())
    }
}

/// An explicit successor map over named states; no token semantics.
///
/// Useful for hand-built quivers whose defect structure is known in
/// advance.
pub struct GraphSystem {
    /// state -> ordered (label, successor) pairs
    pub transitions: BTreeMap<String, Vec<(String, String)>>,
}

impl GraphSystem {
    pub fn new(edges: &[(&str, &str)]) -> Self {
        let mut transitions: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for (i, (from, to)) in edges.iter().enumerate() {
            transitions
                .entry(from.to_string())
                .or_default()
                .push((format!("edge:{i}"), to.to_string()));
            transitions.entry(to.to_string()).or_default();
        }
        GraphSystem { transitions }
    }
}

impl System for GraphSystem {
    type State = String;

    fn successors(&self, state: &Self::State) -> Vec<Transition<Self::State>> {
        self.transitions
            .get(state)
            .map(|next| {
                next.iter()
                    .map(|(label, target)| Transition {
                        label: label.clone(),
                        target: target.clone(),
                        consumed: Vec::new(),
                        produced: Vec::new(),
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    fn canonical_key(&self, state: &Self::State) -> String {
        state.clone()
    }
}
