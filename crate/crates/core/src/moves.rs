//! Stabilization and destabilization on labeled states, the compound fake
//! Heegaard stabilization, balancing, and the built Heegaard splitting.
//!
//! Stabilizing `H_i` along a nonseparating arc in `S_jk` has one of two
//! parameter effects, depending on where the arc's endpoints sit:
//!
//! | arc class                  | `g_jk` | `g_ij`, `g_ik` | `b`  |
//! |----------------------------|--------|----------------|------|
//! | `Same(c)` (ends on `c`)    | `-1`   | `0`            | `+1` |
//! | `Distinct(c1,c2)`          | `0`    | `+1`           | `-1` |
//!
//! In both cases `h_i` grows by one and `h_j`, `h_k` are unchanged. Arcs are
//! modeled up to this effect only; different isotopy classes with the same
//! effect collapse to one move.

use crate::catalogue::FORMAL_DESTAB_MARKER;
use crate::error::{Error, Result};
use crate::profile::Handlebody;
use crate::script::{Arc, DestabMove, MoveOp, MoveRecord, MoveScript, StabMove};
use crate::state::TrisectionState;

/// Every legal stabilization, ordered by handlebody, then `Same` moves by
/// component, then `Distinct` moves by pair.
pub fn legal_moves(state: &TrisectionState) -> Vec<StabMove> {
    let mut out = Vec::new();
    for h in Handlebody::ALL {
        if state.genera.get(h.opposite()) >= 1 {
            out.extend(state.link.components().map(|c| StabMove::new(h, Arc::Same(c))));
        }
        out.extend(
            state
                .link
                .pairs()
                .into_iter()
                .map(|(a, b)| StabMove::new(h, Arc::Distinct(a, b))),
        );
    }
    out
}

/// Canonical stabilization of `h`: `Distinct` on the smallest pair when
/// `b >= 2`, else `Same` on the smallest component when `S_jk` has genus.
pub fn canonical_stab(state: &TrisectionState, h: Handlebody) -> Option<StabMove> {
    if let Some((a, b)) = state.link.smallest_pair() {
        Some(StabMove::new(h, Arc::Distinct(a, b)))
    } else if state.genera.get(h.opposite()) >= 1 {
        Some(StabMove::new(h, Arc::Same(state.link.smallest())))
    } else {
        None
    }
}

pub fn apply_stabilization(state: &TrisectionState, m: &StabMove) -> Result<TrisectionState> {
    stabilize(state, m, MoveOp::Stab)
}

pub(crate) fn stabilize(state: &TrisectionState, m: &StabMove, op: MoveOp) -> Result<TrisectionState> {
    let h = m.handlebody;
    let opposite = h.opposite();
    let [s_ij, s_ik] = h.adjacent();
    let mut next = state.clone();
    let (created, removed) = match m.arc.normalized() {
        Arc::Same(c) => {
            if state.genera.get(opposite) == 0 {
                return Err(Error::illegal(format!(
                    "{opposite} has genus 0, so no nonseparating arc has both ends on {c}"
                )));
            }
            let children = next.link.split(c)?;
            *next.genera.get_mut(opposite) -= 1;
            (children.to_vec(), vec![c])
        }
        Arc::Distinct(a, b) => {
            if state.b() < 2 {
                return Err(Error::illegal("a distinct-components arc needs b >= 2"));
            }
            let merged = next.link.merge(a, b)?;
            *next.genera.get_mut(s_ij) += 1;
            *next.genera.get_mut(s_ik) += 1;
            (vec![merged], vec![a, b])
        }
    };
    next.history.push(MoveRecord { op, handlebody: h, arc: m.arc.normalized(), created, removed });
    debug_assert_eq!(next.euler_defect(), 0);
    debug_assert_eq!(next.handlebody_genus(h), state.handlebody_genus(h) + 1);
    Ok(next)
}

/// Formal inverse of a stabilization. Parameter legality does not imply that
/// a destabilizing disk exists, so the result's label carries a caveat.
pub fn apply_destabilization(state: &TrisectionState, m: &DestabMove) -> Result<TrisectionState> {
    let h = m.handlebody;
    let opposite = h.opposite();
    let [s_ij, s_ik] = h.adjacent();
    let mut next = state.clone();
    let (created, removed) = match m.arc.normalized() {
        // Undo of a `Same` stabilization: the two halves re-merge.
        Arc::Distinct(a, b) => {
            if state.b() < 2 {
                return Err(Error::illegal("re-merging components needs b >= 2"));
            }
            let merged = next.link.merge(a, b)?;
            *next.genera.get_mut(opposite) += 1;
            (vec![merged], vec![a, b])
        }
        // Undo of a `Distinct` stabilization: the component splits again.
        Arc::Same(c) => {
            if state.genera.get(s_ij) == 0 || state.genera.get(s_ik) == 0 {
                return Err(Error::illegal(format!("splitting {c} needs {s_ij} and {s_ik} of positive genus")));
            }
            let children = next.link.split(c)?;
            *next.genera.get_mut(s_ij) -= 1;
            *next.genera.get_mut(s_ik) -= 1;
            (children.to_vec(), vec![c])
        }
    };
    if state.handlebody_genus(h) == 0 {
        return Err(Error::illegal(format!("{h} already has genus 0")));
    }
    if !next.label.contains(FORMAL_DESTAB_MARKER) {
        next.label = if next.label.is_empty() {
            FORMAL_DESTAB_MARKER.to_string()
        } else {
            format!("{} {FORMAL_DESTAB_MARKER}", next.label)
        };
    }
    next.history.push(MoveRecord {
        op: MoveOp::Destab,
        handlebody: h,
        arc: m.arc.normalized(),
        created,
        removed,
    });
    debug_assert_eq!(next.euler_defect(), 0);
    debug_assert_eq!(next.handlebody_genus(h) + 1, state.handlebody_genus(h));
    Ok(next)
}

/// Stabilize `H2`, then `H1`, with net effect one standard Heegaard
/// stabilization between `H1` and `H2`: `g12 += 1`, everything else fixed.
///
/// With `b = 1` this is `Same` on `S13` followed by `Distinct` on `S23`
/// (needs `g13 >= 1`); with `b >= 2` it is `Distinct` on `S13` followed by
/// `Same` on the freshly merged component in `S23`.
pub fn fake_heegaard_stab(state: &TrisectionState) -> Result<TrisectionState> {
    let first = if let Some((a, b)) = state.link.smallest_pair() {
        StabMove::new(Handlebody::H2, Arc::Distinct(a, b))
    } else if state.genera.g13 >= 1 {
        StabMove::new(Handlebody::H2, Arc::Same(state.link.smallest()))
    } else {
        return Err(Error::illegal("fake Heegaard stabilization needs b >= 2 or g13 >= 1"));
    };
    let mid = stabilize(state, &first, MoveOp::FakeStab)?;
    let created = &mid.history.records().last().expect("just pushed").created;
    let second = match *created.as_slice() {
        [a, b] => StabMove::new(Handlebody::H1, Arc::Distinct(a, b)),
        [c] => StabMove::new(Handlebody::H1, Arc::Same(c)),
        _ => unreachable!("a stabilization creates one or two components"),
    };
    let out = stabilize(&mid, &second, MoveOp::FakeStab)?;
    debug_assert_eq!(out.b(), state.b());
    debug_assert_eq!(out.genera.g12, state.genera.g12 + 1);
    Ok(out)
}

/// Raises the smallest handlebody (lowest index on ties) one canonical move
/// at a time until all three genera equal the largest.
///
/// The moves are always legal: when `b = 1` and `h_i > h_k`, the surface
/// opposite `H_k` has genus `g_ij = g_jk + (h_i - h_k) >= 1`.
pub fn balance(state: &TrisectionState) -> Result<(TrisectionState, MoveScript)> {
    let start = state.history.len();
    let mut s = state.clone();
    loop {
        let p = s.profile();
        if p.is_balanced() {
            break;
        }
        let k = Handlebody::ALL
            .into_iter()
            .min_by_key(|&h| (p.h(h), h))
            .expect("three handlebodies");
        let m = canonical_stab(&s, k)
            .ok_or_else(|| Error::illegal(format!("no stabilization of {k} while balancing {p}")))?;
        s = apply_stabilization(&s, &m)?;
    }
    let script = s.history.tail(start);
    Ok((s, script))
}

/// Stabilizes `H_i` along a maximal arc system in `S_jk` until `S_jk` is a
/// disk, returning the new state and the genus of the resulting Heegaard
/// splitting `(H_i', H_j' ∪ H_k')`.
///
/// Uses `2 g_jk + b - 1` moves and ends with `h_i' = h_j + h_k`.
pub fn build_heegaard(state: &TrisectionState, i: Handlebody) -> Result<(TrisectionState, u32, MoveScript)> {
    let start = state.history.len();
    let opposite = i.opposite();
    let mut s = state.clone();
    while s.genera.get(opposite) > 0 || s.b() > 1 {
        let m = canonical_stab(&s, i).expect("b >= 2 or the surface has genus");
        s = apply_stabilization(&s, &m)?;
    }
    let genus = s.handlebody_genus(i);
    let script = s.history.tail(start);
    Ok((s, genus, script))
}

/// Applies one recorded move, honoring its op.
pub(crate) fn apply_record(state: &TrisectionState, r: &MoveRecord) -> Result<TrisectionState> {
    match r.op {
        MoveOp::Stab | MoveOp::FakeStab => stabilize(state, &StabMove::new(r.handlebody, r.arc), r.op),
        MoveOp::Destab => apply_destabilization(state, &DestabMove::new(r.handlebody, r.arc)),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::catalogue::{from_heegaard, koda_ozawa, open_book, split_heegaard, trivial};
    use crate::link::ComponentId;
    use crate::profile::{Profile, SurfaceGenera};
    use Handlebody::*;

    fn c(i: u32) -> ComponentId {
        ComponentId(i)
    }

    fn state(g12: u32, g13: u32, g23: u32, b: u32) -> TrisectionState {
        TrisectionState::new(SurfaceGenera::new(g12, g13, g23), b, "test").unwrap()
    }

    #[test]
    fn legal_moves_examples() {
        assert!(legal_moves(&trivial()).is_empty());

        let moves = legal_moves(&from_heegaard(2));
        assert_eq!(moves, vec![StabMove::new(H3, Arc::Same(c(0)))]);

        let moves = legal_moves(&koda_ozawa());
        let same: Vec<_> = moves.iter().filter(|m| matches!(m.arc, Arc::Same(_))).collect();
        assert!(same.iter().all(|m| m.handlebody == H1));
        assert_eq!(same.len(), 2);
        let distinct: Vec<_> = moves.iter().filter(|m| matches!(m.arc, Arc::Distinct(..))).collect();
        assert_eq!(distinct.iter().map(|m| m.handlebody).collect::<Vec<_>>(), vec![H1, H2, H3]);
    }

    #[test]
    fn genus_two_heegaard_balancing_moves() {
        let s = from_heegaard(2);
        let s = apply_stabilization(&s, &StabMove::new(H3, Arc::Same(c(0)))).unwrap();
        assert_eq!((s.genera(), s.b()), (SurfaceGenera::new(1, 0, 0), 2));
        assert_eq!(s.profile(), Profile::new(2, 2, 1, 2));
        let s = apply_stabilization(&s, &StabMove::new(H3, Arc::distinct(c(1), c(2)))).unwrap();
        assert_eq!((s.genera(), s.b()), (SurfaceGenera::new(1, 1, 1), 1));
        assert_eq!(s.profile(), Profile::balanced(2, 1));
        assert_eq!(s.link().components().collect::<Vec<_>>(), vec![c(3)]);
    }

    #[test]
    fn illegal_stabilizations() {
        for m in [
            StabMove::new(H1, Arc::Same(c(0))),
            StabMove::new(H2, Arc::Same(c(0))),
            StabMove::new(H3, Arc::Same(c(0))),
            StabMove::new(H1, Arc::distinct(c(0), c(1))),
        ] {
            assert!(matches!(apply_stabilization(&trivial(), &m), Err(Error::IllegalMove { .. })));
        }
        // Unknown component.
        let s = from_heegaard(2);
        assert!(apply_stabilization(&s, &StabMove::new(H3, Arc::Same(c(7)))).is_err());
        // Same component twice is not a distinct pair.
        let s = koda_ozawa();
        assert!(apply_stabilization(&s, &StabMove::new(H1, Arc::Distinct(c(0), c(0)))).is_err());
    }

    #[test]
    fn destabilization_examples() {
        // Koda-Ozawa: re-merging for H1 is parameter legal even though no
        // destabilizing disk exists.
        let s = apply_destabilization(&koda_ozawa(), &DestabMove::new(H1, Arc::distinct(c(0), c(1)))).unwrap();
        assert_eq!((s.genera(), s.b()), (SurfaceGenera::new(0, 0, 2), 1));
        assert_eq!(s.profile(), Profile::new(0, 2, 2, 1));
        assert!(s.label().contains(FORMAL_DESTAB_MARKER));
        assert_eq!(s.notes().len(), 1);

        for h in Handlebody::ALL {
            assert!(apply_destabilization(&trivial(), &DestabMove::new(h, Arc::Same(c(0)))).is_err());
        }
        // Splitting needs both adjacent surfaces to have genus.
        let s = from_heegaard(2);
        assert!(apply_destabilization(&s, &DestabMove::new(H1, Arc::Same(c(0)))).is_err());
        assert!(apply_destabilization(&s, &DestabMove::new(H3, Arc::Same(c(0)))).is_err());
    }

    #[test]
    fn destab_label_marker_added_once() {
        let s = state(2, 2, 2, 1);
        let s = apply_destabilization(&s, &DestabMove::new(H1, Arc::Same(c(0)))).unwrap();
        let s = apply_destabilization(&s, &DestabMove::new(H1, Arc::Same(c(1)))).unwrap();
        assert_eq!(s.label().matches(FORMAL_DESTAB_MARKER).count(), 1);
    }

    #[test]
    fn fake_stab_examples() {
        let s = split_heegaard(4, 2).unwrap();
        let out = fake_heegaard_stab(&s).unwrap();
        assert_eq!((out.genera(), out.b()), (SurfaceGenera::new(3, 2, 0), 1));
        assert_eq!(out.profile(), Profile::new(5, 3, 2, 1));
        assert_eq!(out.history().len(), 2);
        assert!(out.history().iter().all(|r| r.op == MoveOp::FakeStab));
        assert_eq!(out.history().records()[0].handlebody, H2);
        assert_eq!(out.history().records()[1].handlebody, H1);

        let mut t = s.clone();
        for n in 1..=5 {
            t = fake_heegaard_stab(&t).unwrap();
            assert_eq!((t.genera(), t.b()), (SurfaceGenera::new(2 + n, 2, 0), 1));
        }

        assert!(matches!(fake_heegaard_stab(&trivial()), Err(Error::IllegalMove { .. })));
        // b = 1 with g13 = 0 has no legal variant.
        assert!(fake_heegaard_stab(&from_heegaard(3)).is_err());
        // b >= 2 variant.
        let out = fake_heegaard_stab(&koda_ozawa()).unwrap();
        assert_eq!((out.genera(), out.b()), (SurfaceGenera::new(1, 0, 1), 2));
    }

    #[test]
    fn balance_examples() {
        let (s, script) = balance(&from_heegaard(2)).unwrap();
        assert_eq!(s.profile(), Profile::balanced(2, 1));
        assert_eq!(script.len(), 2);
        assert!(script.iter().all(|r| r.handlebody == H3));

        let b = open_book(2);
        let (s, script) = balance(&b).unwrap();
        assert_eq!(s, b);
        assert!(script.is_empty());

        let (s, script) = balance(&koda_ozawa()).unwrap();
        assert_eq!(s.profile(), Profile::balanced(2, 1));
        assert_eq!((s.genera(), script.len()), (SurfaceGenera::new(1, 1, 1), 1));
        assert_eq!(script.records()[0].handlebody, H1);
        assert_eq!(script.records()[0].arc, Arc::distinct(c(0), c(1)));

        let (s, script) = balance(&split_heegaard(4, 2).unwrap()).unwrap();
        assert_eq!(s.profile(), Profile::balanced(4, 1));
        assert_eq!(script.len(), 4);
    }

    #[test]
    fn build_heegaard_examples() {
        let (s, genus, script) = build_heegaard(&open_book(1), H1).unwrap();
        assert_eq!((genus, script.len()), (4, 2));
        assert_eq!((s.genera().g23, s.b()), (0, 1));

        for g in 0..6 {
            let (_, genus, script) = build_heegaard(&from_heegaard(g), H1).unwrap();
            assert_eq!((genus, script.len()), (g, 0));
        }

        let (s, genus, script) = build_heegaard(&koda_ozawa(), H1).unwrap();
        assert_eq!((genus, script.len()), (4, 3));
        assert!(s.history().iter().all(|r| r.handlebody == H1));
    }

    fn arb_state() -> impl Strategy<Value = TrisectionState> {
        (0u32..6, 0u32..6, 0u32..6, 1u32..6).prop_map(|(a, b, c, d)| state(a, b, c, d))
    }

    proptest! {
        #[test]
        fn effect_table_is_exact(s in arb_state()) {
            let before = s.profile();
            for m in legal_moves(&s) {
                let t = apply_stabilization(&s, &m).unwrap();
                let after = t.profile();
                for h in Handlebody::ALL {
                    let expected = before.h(h) + u32::from(h == m.handlebody);
                    prop_assert_eq!(after.h(h), expected);
                }
                prop_assert_eq!(before.b.abs_diff(after.b), 1);
                prop_assert_eq!(t.euler_defect(), 0);
                t.validate().unwrap();
            }
        }

        #[test]
        fn destab_inverts_stab(s in arb_state()) {
            for m in legal_moves(&s) {
                let t = apply_stabilization(&s, &m).unwrap();
                let inv = t.history().records().last().unwrap().inverse().unwrap();
                let back = apply_destabilization(&t, &inv).unwrap();
                prop_assert_eq!(back.genera(), s.genera());
                prop_assert_eq!(back.b(), s.b());
            }
        }

        #[test]
        fn fake_stab_net_effect(s in arb_state()) {
            if let Ok(t) = fake_heegaard_stab(&s) {
                let g = s.genera();
                prop_assert_eq!(t.genera(), SurfaceGenera::new(g.g12 + 1, g.g13, g.g23));
                prop_assert_eq!(t.b(), s.b());
            } else {
                prop_assert!(s.b() == 1 && s.genera().g13 == 0);
            }
        }
    }
}
