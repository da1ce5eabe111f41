//! Common stabilization of two trisection states.
//!
//! Five steps, applied to each side with canonical move choices:
//!
//! 1. balance, push `b` down to at most 2, then raise the smaller genus until
//!    both sides carry the same balanced `(h;b)`;
//! 2. stabilize `H1` until `S23` is a disk (the built Heegaard splitting);
//! 3. `rs_bound` fake Heegaard stabilizations;
//! 4. stabilize `H3` until `S12` is a disk;
//! 5. stabilize `H2` until `S13` is a disk.
//!
//! The number of fake stabilizations that makes the two Heegaard splittings
//! isotopic is not computable from parameters, so the caller supplies it.
//! The report certifies equal final parameters and move provenance only; it
//! makes no isotopy claim.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moves::{apply_record, apply_stabilization, balance, build_heegaard, canonical_stab, fake_heegaard_stab};
use crate::profile::{Handlebody, Profile, SurfaceGenera};
use crate::script::{Arc, MoveScript, StabMove};
use crate::state::TrisectionState;

pub const PLAN_REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSteps {
    pub step1_balance: MoveScript,
    pub step2_build: MoveScript,
    pub step3_fake: MoveScript,
    pub step4_s12_to_disk: MoveScript,
    pub step5_s13_to_disk: MoveScript,
}

impl PlanSteps {
    pub fn concatenated(&self) -> MoveScript {
        let mut all = MoveScript::new();
        for s in self.in_order() {
            all.extend(s);
        }
        all
    }

    pub fn in_order(&self) -> [&MoveScript; 5] {
        [
            &self.step1_balance,
            &self.step2_build,
            &self.step3_fake,
            &self.step4_s12_to_disk,
            &self.step5_s13_to_disk,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidePlan {
    pub steps: PlanSteps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanReport {
    pub version: u32,
    pub rs_bound: u32,
    pub final_profile: Profile,
    pub final_genera: SurfaceGenera,
    pub a: SidePlan,
    pub b: SidePlan,
}

impl PlanReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Balances and then lowers `b` to at most 2 by alternating one `Distinct`
/// stabilization of `H1` with re-balancing.
fn balance_with_small_link(state: &TrisectionState) -> Result<TrisectionState> {
    let (mut s, _) = balance(state)?;
    while s.b() > 2 {
        let (a, b) = s.link().smallest_pair().expect("b > 2");
        s = apply_stabilization(&s, &StabMove::new(Handlebody::H1, Arc::Distinct(a, b)))?;
        s = balance(&s)?.0;
    }
    Ok(s)
}

/// One canonical stabilization on `H1` followed by re-balancing, until the
/// balanced genus reaches `target`.
fn raise_balanced_genus(state: &TrisectionState, target: u32) -> Result<TrisectionState> {
    let mut s = state.clone();
    while s.profile().h1 < target {
        let m = canonical_stab(&s, Handlebody::H1)
            .ok_or_else(|| Error::illegal(format!("cannot stabilize {} further", s.profile())))?;
        s = apply_stabilization(&s, &m)?;
        s = balance(&s)?.0;
    }
    Ok(s)
}

fn check_input(s: &TrisectionState, which: &str) -> Result<()> {
    let p = s.profile();
    if !p.is_feasible() {
        return Err(Error::InfeasibleInput(format!("{which} has infeasible profile {p}")));
    }
    if p.is_trivial() {
        return Err(Error::TrivialInput);
    }
    Ok(())
}

fn run_steps_2_to_5(s: &TrisectionState, rs_bound: u32, steps: &mut PlanSteps) -> Result<TrisectionState> {
    let (s, _, script) = build_heegaard(s, Handlebody::H1)?;
    steps.step2_build = script;
    debug_assert_eq!((s.genera().g23, s.b()), (0, 1));

    let mark = s.history().len();
    let mut s = s;
    for _ in 0..rs_bound {
        s = fake_heegaard_stab(&s)?;
    }
    steps.step3_fake = s.history().tail(mark);

    let (s, _, script) = build_heegaard(&s, Handlebody::H3)?;
    steps.step4_s12_to_disk = script;
    let (s, _, script) = build_heegaard(&s, Handlebody::H2)?;
    steps.step5_s13_to_disk = script;
    debug_assert_eq!((s.genera().g13, s.b()), (0, 1));
    Ok(s)
}

/// Drives both states to identical parameters through stabilizations only.
///
/// Scripts in the report replay from the inputs' current states (their
/// existing history is not repeated).
pub fn plan_common_stabilization(a: &TrisectionState, b: &TrisectionState, rs_bound: u32) -> Result<PlanReport> {
    check_input(a, "first input")?;
    check_input(b, "second input")?;
    let a0 = a.without_history();
    let b0 = b.without_history();

    let a1 = balance_with_small_link(&a0)?;
    let b1 = balance_with_small_link(&b0)?;
    let target = a1.profile().h1.max(b1.profile().h1);
    let a1 = raise_balanced_genus(&a1, target)?;
    let b1 = raise_balanced_genus(&b1, target)?;
    debug_assert_eq!(a1.profile(), b1.profile());

    let mut steps_a = PlanSteps { step1_balance: a1.history().clone(), ..Default::default() };
    let mut steps_b = PlanSteps { step1_balance: b1.history().clone(), ..Default::default() };
    let a_final = run_steps_2_to_5(&a1, rs_bound, &mut steps_a)?;
    let b_final = run_steps_2_to_5(&b1, rs_bound, &mut steps_b)?;

    if a_final.genera() != b_final.genera() || a_final.b() != b_final.b() {
        return Err(Error::InvalidState(format!(
            "planner endpoints differ: {} vs {}",
            a_final.profile(),
            b_final.profile()
        )));
    }
    Ok(PlanReport {
        version: PLAN_REPORT_VERSION,
        rs_bound,
        final_profile: a_final.profile(),
        final_genera: a_final.genera(),
        a: SidePlan { steps: steps_a },
        b: SidePlan { steps: steps_b },
    })
}

/// Folds a script over a state. Failures report the 1-based step.
pub fn replay(state: &TrisectionState, script: &MoveScript) -> Result<TrisectionState> {
    let mut s = state.clone();
    for (k, r) in script.iter().enumerate() {
        s = apply_record(&s, r).map_err(|e| match e {
            Error::IllegalMove { reason, .. } => Error::IllegalMove { step: Some(k + 1), reason },
            other => other,
        })?;
    }
    Ok(s)
}
