//! Trisection states: the combinatorial shadow of `(H1, H2, H3; B)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::link::LinkComponentSet;
use crate::profile::{
    genera_from_profile, surface_euler_characteristic, Handlebody, Profile, Surface, SurfaceGenera,
};
use crate::script::MoveScript;

/// Pairwise-surface genera, the labeled link, and the moves that produced them.
///
/// Values are immutable from the outside; every operation returns a new state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrisectionState {
    pub(crate) genera: SurfaceGenera,
    pub(crate) link: LinkComponentSet,
    pub(crate) history: MoveScript,
    pub(crate) label: String,
}

impl TrisectionState {
    /// Fresh state with components `c0..c{b-1}` and no history.
    pub fn new(genera: SurfaceGenera, b: u32, label: impl Into<String>) -> Result<Self> {
        Ok(TrisectionState {
            genera,
            link: LinkComponentSet::new(b)?,
            history: MoveScript::new(),
            label: label.into(),
        })
    }

    pub fn from_profile(p: &Profile, label: impl Into<String>) -> Result<Self> {
        let genera = genera_from_profile(p)?;
        TrisectionState::new(genera, p.b, label)
    }

    pub(crate) fn from_parts(
        genera: SurfaceGenera,
        link: LinkComponentSet,
        history: MoveScript,
        label: String,
    ) -> Self {
        TrisectionState { genera, link, history, label }
    }

    pub fn genera(&self) -> SurfaceGenera {
        self.genera
    }

    pub fn link(&self) -> &LinkComponentSet {
        &self.link
    }

    pub fn b(&self) -> u32 {
        self.link.len()
    }

    pub fn history(&self) -> &MoveScript {
        &self.history
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        TrisectionState { label: label.into(), ..self.clone() }
    }

    /// Same genera and link, history cleared. Scripts produced afterwards
    /// replay from this state.
    pub fn without_history(&self) -> Self {
        let initial = self.link.components().collect();
        TrisectionState {
            genera: self.genera,
            link: LinkComponentSet::from_initial(initial, self.link.next_id())
                .expect("components of a live link are valid"),
            history: MoveScript::new(),
            label: self.label.clone(),
        }
    }

    pub fn profile(&self) -> Profile {
        profile_of(self)
    }

    pub fn handlebody_genus(&self, h: Handlebody) -> u32 {
        self.genera.handlebody_genus(h, self.b())
    }

    pub fn surface_genus(&self, s: Surface) -> u32 {
        self.genera.get(s)
    }

    pub fn is_trivial(&self) -> bool {
        self.profile().is_trivial()
    }

    pub fn is_balanced(&self) -> bool {
        self.profile().is_balanced()
    }

    /// `sum_i (1 - h_i) - sum_ij chi(S_ij)`; zero for every closed orientable 3-manifold.
    pub fn euler_defect(&self) -> i64 {
        let b = self.b();
        let handlebodies: i64 = Handlebody::ALL
            .iter()
            .map(|&h| 1 - self.handlebody_genus(h) as i64)
            .sum();
        let surfaces: i64 = Surface::ALL
            .iter()
            .map(|&s| surface_euler_characteristic(self.genera.get(s), b))
            .sum();
        handlebodies - surfaces
    }

    /// Structural checks: link nonempty, genealogy consistent, Euler identity.
    pub fn validate(&self) -> Result<()> {
        if self.link.is_empty() {
            return Err(Error::InvalidState("link has no components".into()));
        }
        let replayed = self.link.replay_genealogy()?;
        if !replayed.iter().copied().eq(self.link.components()) {
            return Err(Error::InvalidState("genealogy does not replay to the component set".into()));
        }
        if self.euler_defect() != 0 {
            return Err(Error::InvalidState(format!("Euler identity fails: defect {}", self.euler_defect())));
        }
        Ok(())
    }

    /// Relabels handlebodies: old `H_i` becomes `perm[i-1]`. History is
    /// relabeled too, so it still replays from the relabeled initial state.
    pub fn relabel(&self, perm: [Handlebody; 3]) -> Result<Self> {
        let mut sorted = perm;
        sorted.sort();
        if sorted != Handlebody::ALL {
            return Err(Error::InvalidState(format!("{perm:?} is not a permutation")));
        }
        let map = |h: Handlebody| perm[h.index() as usize - 1];
        let mut genera = SurfaceGenera::default();
        for s in Surface::ALL {
            let (a, b) = s.handlebodies();
            let target = Surface::between(map(a), map(b)).expect("distinct handlebodies");
            *genera.get_mut(target) = self.genera.get(s);
        }
        let mut history = self.history.clone();
        for r in &mut history.0 {
            r.handlebody = map(r.handlebody);
        }
        Ok(TrisectionState {
            genera,
            link: self.link.clone(),
            history,
            label: self.label.clone(),
        })
    }

    /// Documentation notes attached to this state through its label.
    pub fn notes(&self) -> Vec<String> {
        crate::catalogue::notes_for_label(&self.label)
    }

    pub fn summary(&self) -> StateSummary {
        let p = self.profile();
        StateSummary {
            profile: p,
            genera: self.genera,
            b: self.b(),
            feasible: p.is_feasible(),
            balanced: p.is_balanced(),
            trivial: p.is_trivial(),
        }
    }
}

/// `(h1,h2,h3;b)` from the genus formula. Always feasible.
pub fn profile_of(state: &TrisectionState) -> Profile {
    state.genera.profile(state.b())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateSummary {
    pub profile: Profile,
    pub genera: SurfaceGenera,
    pub b: u32,
    pub feasible: bool,
    pub balanced: bool,
    pub trivial: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use Handlebody::*;

    #[test]
    fn profile_of_examples() {
        let s = TrisectionState::new(SurfaceGenera::new(0, 0, 0), 1, "t").unwrap();
        assert_eq!(profile_of(&s), Profile::new(0, 0, 0, 1));
        assert!(s.is_trivial());
        let s = TrisectionState::new(SurfaceGenera::new(2, 0, 0), 1, "t").unwrap();
        assert_eq!(profile_of(&s), Profile::new(2, 2, 0, 1));
        let s = TrisectionState::new(SurfaceGenera::new(0, 0, 1), 2, "t").unwrap();
        assert_eq!(profile_of(&s), Profile::new(1, 2, 2, 2));
        assert!(s.profile().is_feasible());
    }

    #[test]
    fn euler_identity_holds() {
        for g12 in 0..5 {
            for g13 in 0..5 {
                for g23 in 0..5 {
                    for b in 1..6 {
                        let s = TrisectionState::new(SurfaceGenera::new(g12, g13, g23), b, "").unwrap();
                        assert_eq!(s.euler_defect(), 0);
                        s.validate().unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn relabel_permutes_profile() {
        let s = TrisectionState::new(SurfaceGenera::new(2, 2, 0), 1, "").unwrap();
        assert_eq!(s.profile(), Profile::new(4, 2, 2, 1));
        let r = s.relabel([H2, H1, H3]).unwrap();
        assert_eq!(r.profile(), Profile::new(2, 4, 2, 1));
        let r = s.relabel([H3, H1, H2]).unwrap();
        assert_eq!(r.profile(), Profile::new(2, 2, 4, 1));
        assert_eq!(r.relabel([H2, H3, H1]).unwrap().genera(), s.genera());
        assert!(s.relabel([H1, H1, H3]).is_err());
    }

    #[test]
    fn from_profile_rejects_infeasible() {
        assert!(matches!(
            TrisectionState::from_profile(&Profile::new(1, 1, 1, 1), ""),
            Err(Error::Infeasible { .. })
        ));
    }
}
