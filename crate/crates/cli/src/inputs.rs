//! Flag and file parsing for the system specifications shared by the
//! subcommands: rule lists, machine shapes, and initial conditions.

use std::fs;
use std::path::Path;

use irrex_core::hypergraph::{Hypergraph, RewriteRule};
use irrex_core::tm::{decode_rule, TmConfig, TmRule, TmSpec};

pub fn parse_spec(text: &str) -> Result<TmSpec, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("spec must be s,k (got {text:?})"));
    }
    let states = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad state count {:?}", parts[0]))?;
    let colors = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad color count {:?}", parts[1]))?;
    TmSpec::new(states, colors).map_err(|e| e.to_string())
}

/// A rule item is a canonical rule number, inline JSON, or a path to an
/// explicit JSON table.
pub fn parse_tm_rule(item: &str, spec: TmSpec) -> Result<TmRule, String> {
    let trimmed = item.trim();
    if let Ok(number) = trimmed.parse::<u128>() {
        return decode_rule(number, spec).map_err(|e| e.to_string());
    }
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| format!("bad rule JSON: {e}"));
    }
    let path = Path::new(trimmed);
    if path.exists() {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {trimmed}: {e}"))?;
        return serde_json::from_str(&text).map_err(|e| format!("bad rule file {trimmed}: {e}"));
    }
    Err(format!(
        "rule {trimmed:?} is neither a number nor a readable file"
    ))
}

pub fn parse_tm_rules(list: &[String], spec: TmSpec) -> Result<Vec<TmRule>, String> {
    let mut rules = Vec::new();
    for item in list.iter().flat_map(|s| s.split(',')) {
        if item.trim().is_empty() {
            continue;
        }
        rules.push(parse_tm_rule(item, spec)?);
    }
    if rules.is_empty() {
        return Err("at least one rule is required (field: rules)".into());
    }
    Ok(rules)
}

/// Initial tape: comma-separated cells laid out from position 0, or a path
/// to / inline text of the config JSON `{"tape":{"0":1},"head":0,"state":1}`.
pub fn parse_tm_init(text: &str, head: i64, state: u32) -> Result<TmConfig, String> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| format!("bad config JSON: {e}"));
    }
    let path = Path::new(trimmed);
    if path.exists() && trimmed.ends_with(".json") {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {trimmed}: {e}"))?;
        return serde_json::from_str(&text).map_err(|e| format!("bad config file: {e}"));
    }
    let mut cells = Vec::new();
    for part in trimmed.split(',') {
        cells.push(
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad tape cell {part:?} (field: init)"))?,
        );
    }
    let tape = cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i as i64, c))
        .collect();
    Ok(TmConfig::new(tape, head, state))
}

pub fn parse_hg_rule(item: &str) -> Result<RewriteRule, String> {
    let trimmed = item.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| format!("bad rule JSON: {e}"));
    }
    let path = Path::new(trimmed);
    if path.exists() {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {trimmed}: {e}"))?;
        return serde_json::from_str(&text).map_err(|e| format!("bad rule file {trimmed}: {e}"));
    }
    Err(format!("rule {trimmed:?} is not a readable file or JSON"))
}

pub fn parse_hg_rules(list: &[String]) -> Result<Vec<RewriteRule>, String> {
    let mut rules = Vec::new();
    for item in list {
        rules.push(parse_hg_rule(item)?);
    }
    if rules.is_empty() {
        return Err("at least one rule is required (field: rules)".into());
    }
    Ok(rules)
}

/// Named built-in initial conditions, a file path, or inline JSON.
pub fn parse_hg_init(text: &str) -> Result<Hypergraph, String> {
    let trimmed = text.trim();
    if trimmed == "double-self-loop" {
        return Ok(Hypergraph::double_self_loop());
    }
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| format!("bad hypergraph JSON: {e}"));
    }
    let path = Path::new(trimmed);
    if path.exists() {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {trimmed}: {e}"))?;
        return serde_json::from_str(&text)
            .map_err(|e| format!("bad hypergraph file {trimmed}: {e}"));
    }
    Err(format!(
        "init {trimmed:?} is not a named condition, file, or JSON (field: init)"
    ))
}
