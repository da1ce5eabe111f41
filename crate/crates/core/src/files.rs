//! JSON state files.
//!
//! ```json
//! {"version":1,"label":"...","genera":{"g12":2,"g13":0,"g23":0},
//!  "link":{"components":["c0"],"next_id":1},"history":[...]}
//! ```
//!
//! Unknown fields are rejected. On load the history is walked backwards to
//! recover the initial state and then replayed forwards; the replay must
//! reproduce the stored genera, link and records exactly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{ComponentId, LinkComponentSet};
use crate::moves::apply_record;
use crate::profile::SurfaceGenera;
use crate::script::{Arc, ArcKind, MoveRecord, MoveScript};
use crate::state::TrisectionState;

pub const STATE_FILE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    version: u32,
    label: String,
    genera: SurfaceGenera,
    link: LinkFile,
    history: MoveScript,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    components: Vec<ComponentId>,
    next_id: u32,
}

pub fn state_to_json(state: &TrisectionState) -> String {
    let file = StateFile {
        version: STATE_FILE_VERSION,
        label: state.label().to_string(),
        genera: state.genera(),
        link: LinkFile {
            components: state.link().components().collect(),
            next_id: state.link().next_id(),
        },
        history: state.history().clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("state serializes");
    s.push('\n');
    s
}

pub fn state_from_json(text: &str) -> Result<TrisectionState> {
    let file: StateFile = serde_json::from_str(text)?;
    if file.version != STATE_FILE_VERSION {
        return Err(Error::Format(format!("unsupported state file version {}", file.version)));
    }
    let components: BTreeSet<ComponentId> = file.link.components.iter().copied().collect();
    if components.len() != file.link.components.len() {
        return Err(Error::InvalidState("duplicate link component".into()));
    }
    if components.is_empty() {
        return Err(Error::InvalidState("link has no components".into()));
    }
    if let Some(c) = components.iter().find(|c| c.0 >= file.link.next_id) {
        return Err(Error::InvalidState(format!("component {c} is not below next_id {}", file.link.next_id)));
    }

    let (initial_genera, initial_link, initial_next) =
        rewind(file.genera, components.clone(), file.link.next_id, &file.history)?;
    let mut state = TrisectionState::from_parts(
        initial_genera,
        LinkComponentSet::from_initial(initial_link, initial_next)?,
        MoveScript::new(),
        String::new(),
    );
    for (k, r) in file.history.iter().enumerate() {
        state = apply_record(&state, r).map_err(|e| match e {
            Error::IllegalMove { reason, .. } => Error::IllegalMove { step: Some(k + 1), reason },
            other => other,
        })?;
    }
    let consistent = state.genera() == file.genera
        && state.link().components().eq(components.iter().copied())
        && state.link().next_id() == file.link.next_id
        && state.history() == &file.history;
    if !consistent {
        return Err(Error::InvalidState("history does not replay to the stored state".into()));
    }
    let state = state.with_label(file.label);
    state.validate()?;
    Ok(state)
}

/// Undoes `history` from the final parameters, checking that each record's
/// created/removed lists are shaped like its arc class.
fn rewind(
    mut genera: SurfaceGenera,
    mut live: BTreeSet<ComponentId>,
    mut next_id: u32,
    history: &MoveScript,
) -> Result<(SurfaceGenera, BTreeSet<ComponentId>, u32)> {
    let corrupt = |k: usize, why: &str| Error::InvalidState(format!("history record {}: {why}", k + 1));
    for (k, r) in history.iter().enumerate().rev() {
        check_shape(r).map_err(|why| corrupt(k, why))?;
        for c in &r.created {
            if !live.remove(c) {
                return Err(corrupt(k, "created component is not live afterwards"));
            }
        }
        for c in &r.removed {
            if !live.insert(*c) {
                return Err(corrupt(k, "removed component is still live"));
            }
        }
        next_id = next_id
            .checked_sub(r.created.len() as u32)
            .ok_or_else(|| corrupt(k, "next_id underflow"))?;

        let h = r.handlebody;
        let [s_ij, s_ik] = h.adjacent();
        let opposite = h.opposite();
        let dec = |g: &mut SurfaceGenera, s| -> Result<()> {
            let v = g.get_mut(s);
            *v = v.checked_sub(1).ok_or_else(|| corrupt(k, "surface genus would be negative"))?;
            Ok(())
        };
        match (r.is_stabilization(), r.arc.kind()) {
            (true, ArcKind::Same) => *genera.get_mut(opposite) += 1,
            (true, ArcKind::Distinct) => {
                dec(&mut genera, s_ij)?;
                dec(&mut genera, s_ik)?;
            }
            (false, ArcKind::Distinct) => dec(&mut genera, opposite)?,
            (false, ArcKind::Same) => {
                *genera.get_mut(s_ij) += 1;
                *genera.get_mut(s_ik) += 1;
            }
        }
    }
    if live.is_empty() {
        return Err(Error::InvalidState("initial link would be empty".into()));
    }
    Ok((genera, live, next_id))
}

fn check_shape(r: &MoveRecord) -> std::result::Result<(), &'static str> {
    // A split consumes one component and creates two; a merge the reverse.
    let splits = matches!(r.arc, Arc::Same(_));
    let consumed: Vec<ComponentId> = match r.arc {
        Arc::Same(c) => vec![c],
        Arc::Distinct(a, b) => vec![a.min(b), a.max(b)],
    };
    let mut removed = r.removed.clone();
    removed.sort();
    if removed != consumed {
        return Err("removed components do not match the arc");
    }
    let expected_created = if splits { 2 } else { 1 };
    if r.created.len() != expected_created {
        return Err("wrong number of created components");
    }
    Ok(())
}

pub fn script_to_json(script: &MoveScript) -> String {
    let mut s = serde_json::to_string_pretty(script).expect("script serializes");
    s.push('\n');
    s
}

pub fn script_from_json(text: &str) -> Result<MoveScript> {
    Ok(serde_json::from_str(text)?)
}
