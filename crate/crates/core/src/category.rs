//! Free categories generated by evolution quivers, step-count metadata on
//! morphisms, and the map sending states to layer times and morphisms to
//! discrete intervals.
//!
//! Morphisms are generator paths: two distinct paths between the same pair
//! of objects are distinct morphisms with their own step counts, which is
//! what makes reducibility measurable. The interval map is a functor
//! exactly when step counts compose purely additively; every law failure
//! is reported rather than repaired.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A directed multigraph whose objects carry layer times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub objects: Vec<QuiverObject>,
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverObject {
    pub name: String,
    /// Layer time assigned by the evolution's foliation.
    pub time: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

impl Quiver {
    pub fn new(objects: Vec<QuiverObject>, arrows: Vec<Arrow>) -> Result<Self> {
        for arrow in &arrows {
            if arrow.source >= objects.len() || arrow.target >= objects.len() {
                return Err(Error::DanglingArrow {
                    arrow: arrow.name.clone(),
                });
            }
        }
        Ok(Quiver { objects, arrows })
    }

    pub fn times(&self) -> Vec<usize> {
        self.objects.iter().map(|o| o.time).collect()
    }

    fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (i, arrow) in self.arrows.iter().enumerate() {
            out[arrow.source].push(i);
        }
        out
    }

    /// True when no directed cycle exists.
    pub fn is_dag(&self) -> bool {
        let out = self.outgoing();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.objects.len()];
        for start in 0..self.objects.len() {
            if mark[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            mark[start] = 1;
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                if *next < out[node].len() {
                    let arrow = out[node][*next];
                    *next += 1;
                    let target = self.arrows[arrow].target;
                    match mark[target] {
                        0 => {
                            mark[target] = 1;
                            stack.push((target, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    mark[node] = 2;
                    stack.pop();
                }
            }
        }
        true
    }
}

/// A morphism of the free category: a generator path with complexity
/// metadata. Identities are the zero-step records.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MorphismRecord {
    #[serde(rename = "src")]
    pub source: usize,
    #[serde(rename = "dst")]
    pub target: usize,
    /// Number of generators composed; the morphism's step count.
    pub steps: usize,
    /// Layer times of every object visited, endpoints included.
    pub trace: Vec<usize>,
    /// Names of the generators composed, innermost first.
    pub path: Vec<String>,
}

impl MorphismRecord {
    pub fn identity(object: usize, time: usize) -> Self {
        MorphismRecord {
            source: object,
            target: object,
            steps: 0,
            trace: vec![time],
            path: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.steps == 0
    }
}

/// Sequential composition `g after f`: steps add, traces share the middle
/// endpoint, generator paths concatenate.
pub fn compose(g: &MorphismRecord, f: &MorphismRecord) -> Result<MorphismRecord> {
    if f.target != g.source {
        return Err(Error::CompositionMismatch {
            inner_target: f.target,
            outer_source: g.source,
        });
    }
    let mut trace = f.trace.clone();
    trace.extend_from_slice(&g.trace[1..]);
    let mut path = f.path.clone();
    path.extend_from_slice(&g.path);
    Ok(MorphismRecord {
        source: f.source,
        target: g.target,
        steps: f.steps + g.steps,
        trace,
        path,
    })
}

/// The free category on a quiver, enumerated up to a composite bound.
///
/// Morphisms hold every composite of at most `bound` generators plus one
/// identity per object; composites are distinguished by generator path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCategory {
    pub objects: Vec<QuiverObject>,
    pub morphisms: Vec<MorphismRecord>,
    pub bound: usize,
}

impl FreeCategory {
    pub fn identities(&self) -> impl Iterator<Item = &MorphismRecord> {
        self.morphisms.iter().filter(|m| m.is_identity())
    }

    pub fn non_identities(&self) -> impl Iterator<Item = &MorphismRecord> {
        self.morphisms.iter().filter(|m| !m.is_identity())
    }
}

/// Enumerate the free category. `bound = None` takes the full closure and
/// requires the quiver to be acyclic; a cyclic quiver needs a finite bound.
pub fn free_category(quiver: &Quiver, bound: Option<usize>) -> Result<FreeCategory> {
    let bound = match bound {
        Some(b) => b,
        None => {
            if !quiver.is_dag() {
                return Err(Error::BoundRequired);
            }
            // On a DAG no path revisits an object.
            quiver.arrows.len()
        }
    };
    let out = quiver.outgoing();
    let times = quiver.times();
    let mut morphisms = Vec::new();
    for (object, info) in quiver.objects.iter().enumerate() {
        morphisms.push(MorphismRecord::identity(object, info.time));
    }
    // Depth-first path enumeration from every object; each generator path
    // occurs exactly once, so path identity needs no deduplication.
    for source in 0..quiver.objects.len() {
        extend_paths(
            quiver,
            &out,
            &times,
            source,
            source,
            bound,
            &mut Vec::new(),
            &mut vec![times[source]],
            &mut morphisms,
        );
    }
    morphisms.sort();
    Ok(FreeCategory {
        objects: quiver.objects.clone(),
        morphisms,
        bound,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_paths(
    quiver: &Quiver,
    out: &[Vec<usize>],
    times: &[usize],
    source: usize,
    at: usize,
    remaining: usize,
    path: &mut Vec<String>,
    trace: &mut Vec<usize>,
    morphisms: &mut Vec<MorphismRecord>,
) {
    if remaining == 0 {
        return;
    }
    for &arrow_index in &out[at] {
        let arrow = &quiver.arrows[arrow_index];
        path.push(arrow.name.clone());
        trace.push(times[arrow.target]);
        morphisms.push(MorphismRecord {
            source,
            target: arrow.target,
            steps: path.len(),
            trace: trace.clone(),
            path: path.clone(),
        });
        extend_paths(
            quiver,
            out,
            times,
            source,
            arrow.target,
            remaining - 1,
            path,
            trace,
            morphisms,
        );
        path.pop();
        trace.pop();
    }
}

// --- Parallel (tensor) structure ------------------------------------------

/// A parallel composite of morphisms. Components are kept in construction
/// order; equality treats them as a multiset, which realizes the strict
/// symmetry of the tensor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensoredMorphism {
    pub components: Vec<MorphismRecord>,
}

impl TensoredMorphism {
    /// The tensor unit: an empty multiset of branches.
    pub fn unit() -> Self {
        TensoredMorphism {
            components: Vec::new(),
        }
    }

    pub fn from_single(f: MorphismRecord) -> Self {
        TensoredMorphism {
            components: vec![f],
        }
    }

    pub fn total_steps(&self) -> usize {
        self.components.iter().map(|m| m.steps).sum()
    }

    fn normalized(&self) -> Vec<&MorphismRecord> {
        let mut sorted: Vec<&MorphismRecord> = self.components.iter().collect();
        sorted.sort();
        sorted
    }
}

impl PartialEq for TensoredMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl Eq for TensoredMorphism {}

/// Parallel composition: multiset union of components. Total, strictly
/// associative, strictly commutative, with [`TensoredMorphism::unit`] as
/// strict unit.
pub fn tensor(f: &TensoredMorphism, g: &TensoredMorphism) -> TensoredMorphism {
    let mut components = f.components.clone();
    components.extend(g.components.iter().cloned());
    TensoredMorphism { components }
}

/// Componentwise sequential composition of equal-width tensor products.
pub fn compose_tensored(g: &TensoredMorphism, f: &TensoredMorphism) -> Result<TensoredMorphism> {
    if f.components.len() != g.components.len() {
        return Err(Error::TensorWidthMismatch {
            left: g.components.len(),
            right: f.components.len(),
        });
    }
    let components = g
        .components
        .iter()
        .zip(f.components.iter())
        .map(|(gc, fc)| compose(gc, fc))
        .collect::<Result<Vec<_>>>()?;
    Ok(TensoredMorphism { components })
}

// --- The interval-valued time map ------------------------------------------

/// A discrete interval `[lower, upper] ∩ ℕ`; the identity intervals are the
/// singletons with `lower == upper`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct DiscreteInterval {
    pub lower: usize,
    pub upper: usize,
}

impl DiscreteInterval {
    pub fn new(lower: usize, upper: usize) -> Result<Self> {
        if lower > upper {
            return Err(Error::MalformedInput(format!(
                "interval [{lower}, {upper}] is reversed"
            )));
        }
        Ok(DiscreteInterval { lower, upper })
    }

    pub fn singleton(t: usize) -> Self {
        DiscreteInterval { lower: t, upper: t }
    }

    pub fn cardinality(&self) -> usize {
        self.upper - self.lower + 1
    }

    pub fn elements(&self) -> Vec<usize> {
        (self.lower..=self.upper).collect()
    }

    /// Union of contiguous intervals; `None` when they do not abut or
    /// overlap, since the result would not be an interval.
    pub fn union(&self, other: &DiscreteInterval) -> Option<DiscreteInterval> {
        let (a, b) = if self.lower <= other.lower {
            (self, other)
        } else {
            (other, self)
        };
        if b.lower > a.upper + 1 {
            return None;
        }
        Some(DiscreteInterval {
            lower: a.lower,
            upper: a.upper.max(b.upper),
        })
    }
}

/// A multiset of intervals: the image of a tensored morphism. Tensoring is
/// multiset union with the empty multiset as unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalTensor {
    /// Kept sorted; multiset semantics.
    pub intervals: Vec<DiscreteInterval>,
}

impl IntervalTensor {
    pub fn unit() -> Self {
        IntervalTensor {
            intervals: Vec::new(),
        }
    }

    pub fn from_parts(mut intervals: Vec<DiscreteInterval>) -> Self {
        intervals.sort();
        IntervalTensor { intervals }
    }

    pub fn tensor(&self, other: &IntervalTensor) -> IntervalTensor {
        let mut intervals = self.intervals.clone();
        intervals.extend(other.intervals.iter().copied());
        IntervalTensor::from_parts(intervals)
    }
}

/// Image of one morphism under the time map. Order violations (a source
/// later than its target, which global deduplication can produce) are kept
/// as reversed intervals and flagged, never clamped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeImage {
    Interval { lower: usize, upper: usize },
    /// `lower > upper`: witnesses a non-functorial assignment.
    Reversed { lower: usize, upper: usize },
}

impl TimeImage {
    fn of(source_time: usize, target_time: usize) -> Self {
        if source_time <= target_time {
            TimeImage::Interval {
                lower: source_time,
                upper: target_time,
            }
        } else {
            TimeImage::Reversed {
                lower: source_time,
                upper: target_time,
            }
        }
    }

    pub fn interval(&self) -> Option<DiscreteInterval> {
        match *self {
            TimeImage::Interval { lower, upper } => Some(DiscreteInterval { lower, upper }),
            TimeImage::Reversed { .. } => None,
        }
    }
}

/// Object and morphism images of the time map over one free category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    /// Layer time per object.
    pub object_times: Vec<usize>,
    /// One image per morphism, indexed as in the category.
    pub images: Vec<TimeImage>,
    /// Morphism indices whose image is reversed.
    pub order_violations: Vec<usize>,
}

/// Map every object to its layer time and every morphism to the interval
/// between its endpoint times.
pub fn zprime(fc: &FreeCategory, foliation: &[usize]) -> Result<FunctorData> {
    if foliation.len() != fc.objects.len() {
        return Err(Error::MalformedInput(format!(
            "foliation covers {} objects, category has {}",
            foliation.len(),
            fc.objects.len()
        )));
    }
    let mut images = Vec::with_capacity(fc.morphisms.len());
    let mut order_violations = Vec::new();
    for (index, m) in fc.morphisms.iter().enumerate() {
        let image = TimeImage::of(foliation[m.source], foliation[m.target]);
        if matches!(image, TimeImage::Reversed { .. }) {
            order_violations.push(index);
        }
        images.push(image);
    }
    Ok(FunctorData {
        object_times: foliation.to_vec(),
        images,
        order_violations,
    })
}

/// Image of a tensored morphism: the multiset of component images. Fails
/// when any component is order-reversed.
pub fn zprime_tensored(t: &TensoredMorphism, foliation: &[usize]) -> Result<IntervalTensor> {
    let mut intervals = Vec::with_capacity(t.components.len());
    for m in &t.components {
        let image = TimeImage::of(foliation[m.source], foliation[m.target]);
        match image.interval() {
            Some(interval) => intervals.push(interval),
            None => {
                return Err(Error::MalformedInput(format!(
                    "component {:?} maps to a reversed interval",
                    m.path
                )));
            }
        }
    }
    Ok(IntervalTensor::from_parts(intervals))
}

// --- Law checks -------------------------------------------------------------

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum FunctorLawKind {
    /// Morphism image is a reversed interval.
    Order,
    /// Image cardinality differs from `steps + 1`: the composite reached
    /// its target in fewer layers than its own step count.
    Cardinality,
    /// Image of a composite differs from the union of the factors' images.
    Composition,
    /// Image of an identity is not the singleton at the object's time.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorLawViolation {
    pub kind: FunctorLawKind,
    /// Morphism indices involved: one for order/cardinality/identity,
    /// `[f, g, g∘f]` for composition.
    pub morphisms: Vec<usize>,
}

/// Outcome of checking functor laws over an enumerated category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorLawReport {
    pub violations: Vec<FunctorLawViolation>,
    pub checked_morphisms: usize,
    pub checked_compositions: usize,
}

impl FunctorLawReport {
    pub fn is_functorial(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verify that the time map preserves identities and composition and that
/// every image's cardinality matches the morphism's step count. Reports
/// every violation with the offending morphisms.
pub fn check_functor_laws(fd: &FunctorData, fc: &FreeCategory) -> FunctorLawReport {
    let mut violations = Vec::new();
    for (index, m) in fc.morphisms.iter().enumerate() {
        match fd.images[index].interval() {
            None => violations.push(FunctorLawViolation {
                kind: FunctorLawKind::Order,
                morphisms: vec![index],
            }),
            Some(interval) => {
                if m.is_identity() {
                    if interval != DiscreteInterval::singleton(fd.object_times[m.source]) {
                        violations.push(FunctorLawViolation {
                            kind: FunctorLawKind::Identity,
                            morphisms: vec![index],
                        });
                    }
                } else if interval.cardinality() != m.steps + 1 {
                    violations.push(FunctorLawViolation {
                        kind: FunctorLawKind::Cardinality,
                        morphisms: vec![index],
                    });
                }
            }
        }
    }

    // Composable pairs whose composite stays within the enumeration bound.
    let mut by_path: HashMap<(usize, &[String]), usize> = HashMap::new();
    for (index, m) in fc.morphisms.iter().enumerate() {
        by_path.insert((m.source, m.path.as_slice()), index);
    }
    let mut checked_compositions = 0;
    for (fi, f) in fc.morphisms.iter().enumerate() {
        if f.is_identity() {
            continue;
        }
        for (gi, g) in fc.morphisms.iter().enumerate() {
            if g.is_identity() || g.source != f.target || f.steps + g.steps > fc.bound {
                continue;
            }
            let mut composite_path = f.path.clone();
            composite_path.extend_from_slice(&g.path);
            let ci = by_path[&(f.source, composite_path.as_slice())];
            checked_compositions += 1;
            let lhs = fd.images[ci].interval();
            let rhs = match (fd.images[fi].interval(), fd.images[gi].interval()) {
                (Some(a), Some(b)) => a.union(&b),
                _ => None,
            };
            if lhs.is_none() || lhs != rhs {
                violations.push(FunctorLawViolation {
                    kind: FunctorLawKind::Composition,
                    morphisms: vec![fi, gi, ci],
                });
            }
        }
    }
    violations.sort_by(|a, b| (a.kind, &a.morphisms).cmp(&(b.kind, &b.morphisms)));
    FunctorLawReport {
        violations,
        checked_morphisms: fc.morphisms.len(),
        checked_compositions,
    }
}

/// One layer's strict-monoidal law failure: parallel branches whose images
/// collapse because the equivalence function merged their targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidalLawViolation {
    pub layer: usize,
    /// Canonical key of the shared target state.
    pub target: String,
    /// Number of parallel branches that merged into the target.
    pub merged_branches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidalLawReport {
    pub violations: Vec<MonoidalLawViolation>,
    pub checked_layers: usize,
}

impl MonoidalLawReport {
    pub fn is_monoidal(&self) -> bool {
        self.violations.is_empty()
    }

    /// Total number of collapsed branches across all violations.
    pub fn violation_count(&self) -> usize {
        self.violations.iter().map(|v| v.merged_branches - 1).sum()
    }
}

/// Check strict preservation of the layer tensor products. Each layer's
/// events form one parallel composite; its image must carry one interval
/// per branch, which fails exactly when distinct branches share a target,
/// while pure branching from a shared source stays lawful. Layers are given
/// as `(source key, target key)` pairs per event.
pub fn check_monoidal_laws(layers: &[Vec<(String, String)>]) -> MonoidalLawReport {
    let mut violations = Vec::new();
    for (layer, events) in layers.iter().enumerate() {
        let mut by_target: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, target) in events {
            *by_target.entry(target.as_str()).or_insert(0) += 1;
        }
        for (target, count) in by_target {
            if count > 1 {
                violations.push(MonoidalLawViolation {
                    layer,
                    target: target.to_string(),
                    merged_branches: count,
                });
            }
        }
    }
    MonoidalLawReport {
        violations,
        checked_layers: layers.len(),
    }
}
