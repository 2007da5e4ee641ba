//! JSON-lines trace export: one action per line,
//! `{"t": 0, "action": "move", "args": ["a", "b"]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Action, PlanTrace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TraceLine {
    t: usize,
    action: String,
    args: Vec<String>,
}

fn to_line(t: usize, action: &Action) -> TraceLine {
    let (name, args) = match action {
        Action::Move { from, to } => ("move", vec![from.clone(), to.clone()]),
        Action::Observe { at } => ("observe", vec![at.clone()]),
        Action::Pick { object, at } => ("pick", vec![object.clone(), at.clone()]),
        Action::Place { object, container, at } => ("place", vec![object.clone(), container.clone(), at.clone()]),
    };
    TraceLine { t, action: name.into(), args }
}

fn from_line(line: TraceLine) -> Result<Action> {
    let bad = || Error::InvalidInput(format!("trace line {}: bad `{}` arguments", line.t, line.action));
    let mut args = line.args.clone().into_iter();
    let mut next = || args.next().ok_or_else(bad);
    let action = match line.action.as_str() {
        "move" => Action::Move { from: next()?, to: next()? },
        "observe" => Action::Observe { at: next()? },
        "pick" => Action::Pick { object: next()?, at: next()? },
        "place" => Action::Place { object: next()?, container: next()?, at: next()? },
        other => return Err(Error::InvalidInput(format!("trace line {}: unknown action `{other}`", line.t))),
    };
    if args.next().is_some() {
        return Err(bad());
    }
    Ok(action)
}

pub fn to_jsonl(trace: &PlanTrace) -> String {
    let mut out = String::new();
    for (t, a) in trace.actions.iter().enumerate() {
        out.push_str(&serde_json::to_string(&to_line(t, a)).expect("trace line serializes"));
        out.push('\n');
    }
    out
}

/// Parses a JSON-lines trace. Blank lines are skipped; indices must be
/// consecutive from zero.
pub fn from_jsonl(text: &str) -> Result<PlanTrace> {
    let mut actions = Vec::new();
    for (n, raw) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line: TraceLine =
            serde_json::from_str(raw).map_err(|e| Error::InvalidInput(format!("trace line {}: {e}", n + 1)))?;
        if line.t != actions.len() {
            return Err(Error::InvalidInput(format!(
                "trace index {} out of sequence, expected {}",
                line.t,
                actions.len()
            )));
        }
        actions.push(from_line(line)?);
    }
    Ok(PlanTrace::from_actions(actions))
}
