//! Canonically numbered Turing machines and their deterministic evolution.
//!
//! Rule numbers index the full `(2sk)^(sk)` table space of an `s`-state,
//! `k`-color machine: the number is expanded into `s*k` mixed-radix digits
//! base `2sk` (most significant first), the digits are assigned to the
//! cases `(s, k-1), (s, k-2), ..., (1, 0)` in that order, and a digit `d`
//! decodes to new state `d / 2k + 1`, written color `(d / 2) mod k`, and a
//! head offset of `+1` when `d` is odd, `-1` when even.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Machine shape: number of head states and tape colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TmSpec {
    /// Head states, numbered `1..=states`.
    pub states: u32,
    /// Tape colors, numbered `0..colors`; color 0 is the blank.
    pub colors: u32,
}

impl TmSpec {
    pub fn new(states: u32, colors: u32) -> Result<Self> {
        if states < 1 || colors < 1 {
            return Err(Error::InvalidSpec(format!(
                "need at least 1 state and 1 color, got {states} states, {colors} colors"
            )));
        }
        Ok(TmSpec { states, colors })
    }

    /// Number of table cases (`s * k`).
    pub fn case_count(&self) -> u32 {
        self.states * self.colors
    }

    /// Size of the rule-number space, `(2sk)^(sk)`.
    pub fn rule_space(&self) -> Result<u128> {
        let base = 2u128 * self.states as u128 * self.colors as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.case_count() {
            acc = acc.checked_mul(base).ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "rule space for {} states, {} colors overflows u128",
                    self.states, self.colors
                ))
            })?;
        }
        Ok(acc)
    }

    /// Cases in canonical enumeration order: state descending, color descending.
    fn cases_desc(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (1..=self.states)
            .rev()
            .flat_map(move |state| (0..self.colors).rev().map(move |color| (state, color)))
    }
}

/// One table entry: what the head does after reading a color in a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmAction {
    pub state: u32,
    pub write: u32,
    /// Head offset, `-1` or `+1`.
    pub offset: i8,
}

/// A total transition table plus an optional halt-state set.
///
/// Canonically enumerated machines are total and never halt; halt states
/// exist only for user-supplied tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmRule {
    pub spec: TmSpec,
    /// Indexed by `(state - 1) * colors + color`.
    table: Vec<TmAction>,
    pub halt_states: BTreeSet<u32>,
}

impl TmRule {
    pub fn new(spec: TmSpec, table: Vec<TmAction>, halt_states: BTreeSet<u32>) -> Result<Self> {
        if table.len() != spec.case_count() as usize {
            return Err(Error::InvalidSpec(format!(
                "table has {} cases, spec requires {}",
                table.len(),
                spec.case_count()
            )));
        }
        for action in &table {
            if action.state < 1 || action.state > spec.states {
                return Err(Error::InvalidSpec(format!(
                    "action targets state {} outside 1..={}",
                    action.state, spec.states
                )));
            }
            if action.write >= spec.colors {
                return Err(Error::InvalidSpec(format!(
                    "action writes color {} outside 0..{}",
                    action.write, spec.colors
                )));
            }
            if action.offset != 1 && action.offset != -1 {
                return Err(Error::InvalidSpec(format!(
                    "head offset must be -1 or +1, got {}",
                    action.offset
                )));
            }
        }
        for &h in &halt_states {
            if h < 1 || h > spec.states {
                return Err(Error::InvalidSpec(format!(
                    "halt state {} outside 1..={}",
                    h, spec.states
                )));
            }
        }
        Ok(TmRule {
            spec,
            table,
            halt_states,
        })
    }

    /// Table lookup for the case `(state, color)`.
    pub fn action(&self, state: u32, color: u32) -> TmAction {
        self.table[((state - 1) * self.spec.colors + color) as usize]
    }

    pub fn cases(&self) -> impl Iterator<Item = ((u32, u32), TmAction)> + '_ {
        (1..=self.spec.states).flat_map(move |state| {
            (0..self.spec.colors).map(move |color| ((state, color), self.action(state, color)))
        })
    }
}

/// Expand `n` into the canonical rule table for `spec`.
pub fn decode_rule(n: u128, spec: TmSpec) -> Result<TmRule> {
    let bound = spec.rule_space()?;
    if n >= bound {
        return Err(Error::RuleNumberOutOfRange {
            number: n,
            states: spec.states,
            colors: spec.colors,
            bound,
        });
    }
    let base = 2 * spec.states as u128 * spec.colors as u128;
    let cases = spec.case_count() as usize;
    // Mixed-radix digits, most significant first.
    let mut digits = vec![0u128; cases];
    let mut rest = n;
    for slot in (0..cases).rev() {
        digits[slot] = rest % base;
        rest /= base;
    }
    let mut table = vec![
        TmAction {
            state: 1,
            write: 0,
            offset: -1
        };
        cases
    ];
    let two_k = 2 * spec.colors as u128;
    for ((state, color), &digit) in spec.cases_desc().zip(digits.iter()) {
        let action = TmAction {
            state: (digit / two_k) as u32 + 1,
            write: ((digit / 2) % spec.colors as u128) as u32,
            offset: if digit % 2 == 1 { 1 } else { -1 },
        };
        table[((state - 1) * spec.colors + color) as usize] = action;
    }
    TmRule::new(spec, table, BTreeSet::new())
}

/// Exact inverse of [`decode_rule`] for halt-free tables.
pub fn encode_rule(rule: &TmRule) -> Result<u128> {
    if !rule.halt_states.is_empty() {
        return Err(Error::UnencodableRule(
            "rule has halt states; only total tables are enumerable".into(),
        ));
    }
    let spec = rule.spec;
    let base = 2 * spec.states as u128 * spec.colors as u128;
    let two_k = 2 * spec.colors as u128;
    let mut n: u128 = 0;
    for (state, color) in spec.cases_desc() {
        let action = rule.action(state, color);
        let digit = (action.state as u128 - 1) * two_k
            + (action.write as u128) * 2
            + if action.offset == 1 { 1 } else { 0 };
        n = n * base + digit;
    }
    Ok(n)
}

/// Tape, head position and head state.
///
/// The tape is sparse: only cells carrying a nonzero color are stored, and
/// it extends without bound in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmConfig {
    tape: BTreeMap<i64, u32>,
    pub head: i64,
    pub state: u32,
}

impl TmConfig {
    pub fn new(tape: BTreeMap<i64, u32>, head: i64, state: u32) -> Self {
        let tape = tape.into_iter().filter(|&(_, c)| c != 0).collect();
        TmConfig { tape, head, state }
    }

    /// Blank tape, head at 0, state 1.
    pub fn blank() -> Self {
        TmConfig::new(BTreeMap::new(), 0, 1)
    }

    /// Tape cells `values` laid out from position 0 upward, head at 0, state 1.
    pub fn from_cells(values: &[u32]) -> Self {
        let tape = values
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64, c))
            .collect();
        TmConfig::new(tape, 0, 1)
    }

    pub fn color_at(&self, position: i64) -> u32 {
        self.tape.get(&position).copied().unwrap_or(0)
    }

    /// Nonzero cells in position order.
    pub fn occupied(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.tape.iter().map(|(&p, &c)| (p, c))
    }

    fn with_write(&self, position: i64, color: u32) -> BTreeMap<i64, u32> {
        let mut tape = self.tape.clone();
        if color == 0 {
            tape.remove(&position);
        } else {
            tape.insert(position, color);
        }
        tape
    }

    /// Deterministic serialization; equal exactly on equal
    /// (tape contents, head state, head position).
    pub fn canonical_key(&self) -> String {
        self.key_relative_to(0)
    }

    /// Translation-invariant variant: cells are keyed relative to the head.
    pub fn translated_key(&self) -> String {
        self.key_relative_to(self.head)
    }

    fn key_relative_to(&self, origin: i64) -> String {
        let mut key = format!("q{};h{};", self.state, self.head - origin);
        for (pos, color) in &self.tape {
            key.push_str(&format!("{}:{},", pos - origin, color));
        }
        key
    }
}

/// Result of one transition attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Advanced(TmConfig),
    /// The head state is a halt state; distinct from any failure.
    Halted,
}

/// Apply one application of the transition table.
pub fn tm_step(rule: &TmRule, cfg: &TmConfig) -> StepOutcome {
    if rule.halt_states.contains(&cfg.state) {
        return StepOutcome::Halted;
    }
    let read = cfg.color_at(cfg.head);
    let action = rule.action(cfg.state, read);
    let tape = cfg.with_write(cfg.head, action.write);
    StepOutcome::Advanced(TmConfig {
        tape,
        head: cfg.head + action.offset as i64,
        state: action.state,
    })
}

/// An evolution trace; `halted` marks early truncation at a halt state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evolution {
    pub configs: Vec<TmConfig>,
    pub halted: bool,
}

/// Evolve for `steps` transitions, recording every configuration.
pub fn tm_evolve(rule: &TmRule, cfg: &TmConfig, steps: usize) -> Evolution {
    let mut configs = vec![cfg.clone()];
    let mut halted = false;
    for _ in 0..steps {
        match tm_step(rule, configs.last().expect("nonempty")) {
            StepOutcome::Advanced(next) => configs.push(next),
            StepOutcome::Halted => {
                halted = true;
                break;
            }
        }
    }
    Evolution { configs, halted }
}

// --- JSON wire formats -------------------------------------------------
//
// Config: {"tape":{"0":1},"head":0,"state":1}
// Rule:   {"s":2,"k":2,"cases":[{"state":1,"color":0,"to":[2,1,1]}, ...]}

impl Serialize for TmConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            tape: BTreeMap<String, u32>,
            head: i64,
            state: u32,
            #[serde(skip)]
            _marker: &'a (),
        }
        let tape = self
            .tape
            .iter()
            .map(|(p, &c)| (p.to_string(), c))
            .collect();
        Wire {
            tape,
            head: self.head,
            state: self.state,
            _marker: &(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TmConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            #[serde(default)]
            tape: BTreeMap<String, u32>,
            #[serde(default)]
            head: i64,
            #[serde(default = "default_state")]
            state: u32,
        }
        fn default_state() -> u32 {
            1
        }
        let wire = Wire::deserialize(deserializer)?;
        let mut tape = BTreeMap::new();
        for (pos, color) in wire.tape {
            let pos: i64 = pos
                .parse()
                .map_err(|_| D::Error::custom(format!("bad tape position {pos:?}")))?;
            tape.insert(pos, color);
        }
        Ok(TmConfig::new(tape, wire.head, wire.state))
    }
}

#[derive(Serialize, Deserialize)]
struct RuleCaseWire {
    state: u32,
    color: u32,
    /// `[new_state, write_color, offset]` with offset `-1` or `+1`.
    to: [i64; 3],
}

#[derive(Serialize, Deserialize)]
struct RuleWire {
    s: u32,
    k: u32,
    cases: Vec<RuleCaseWire>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    halt: BTreeSet<u32>,
}

impl Serialize for TmRule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let cases = self
            .cases()
            .map(|((state, color), a)| RuleCaseWire {
                state,
                color,
                to: [a.state as i64, a.write as i64, a.offset as i64],
            })
            .collect();
        RuleWire {
            s: self.spec.states,
            k: self.spec.colors,
            cases,
            halt: self.halt_states.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TmRule {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = RuleWire::deserialize(deserializer)?;
        let spec = TmSpec::new(wire.s, wire.k).map_err(D::Error::custom)?;
        let mut table: Vec<Option<TmAction>> = vec![None; spec.case_count() as usize];
        for case in &wire.cases {
            if case.state < 1 || case.state > spec.states || case.color >= spec.colors {
                return Err(D::Error::custom(format!(
                    "case ({}, {}) outside the {}x{} table",
                    case.state, case.color, spec.states, spec.colors
                )));
            }
            let idx = ((case.state - 1) * spec.colors + case.color) as usize;
            table[idx] = Some(TmAction {
                state: u32::try_from(case.to[0]).map_err(D::Error::custom)?,
                write: u32::try_from(case.to[1]).map_err(D::Error::custom)?,
                offset: i8::try_from(case.to[2]).map_err(D::Error::custom)?,
            });
        }
        let table: Vec<TmAction> = table
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                a.ok_or_else(|| {
                    let state = i as u32 / spec.colors + 1;
                    let color = i as u32 % spec.colors;
                    D::Error::custom(format!("missing table case ({state}, {color})"))
                })
            })
            .collect::<std::result::Result<_, _>>()?;
        TmRule::new(spec, table, wire.halt).map_err(D::Error::custom)
    }
}
