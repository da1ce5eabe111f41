//! Handlebody and surface indexing, pairwise-surface genera, and the
//! `(h1,h2,h3;b)` profile arithmetic.
//!
//! A handlebody genus is determined by the two surfaces it touches and the
//! number of link components: `h_i = g(S_ij) + g(S_ik) + b - 1`. Inverting
//! that linear system gives `g_ij = (h_i + h_j - h_k + 1 - b) / 2`, so a
//! quadruple is trisection data only when every such quotient is a
//! nonnegative integer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three handlebodies `H1`, `H2`, `H3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Handlebody {
    H1,
    H2,
    H3,
}

impl Handlebody {
    pub const ALL: [Handlebody; 3] = [Handlebody::H1, Handlebody::H2, Handlebody::H3];

    /// 1-based index.
    pub fn index(self) -> u8 {
        match self {
            Handlebody::H1 => 1,
            Handlebody::H2 => 2,
            Handlebody::H3 => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Handlebody::H1),
            2 => Some(Handlebody::H2),
            3 => Some(Handlebody::H3),
            _ => None,
        }
    }

    /// The surface `S_jk` not touching this handlebody; stabilization arcs live here.
    pub fn opposite(self) -> Surface {
        match self {
            Handlebody::H1 => Surface::S23,
            Handlebody::H2 => Surface::S13,
            Handlebody::H3 => Surface::S12,
        }
    }

    /// The two surfaces `S_ij`, `S_ik` on the boundary of this handlebody.
    pub fn adjacent(self) -> [Surface; 2] {
        match self {
            Handlebody::H1 => [Surface::S12, Surface::S13],
            Handlebody::H2 => [Surface::S12, Surface::S23],
            Handlebody::H3 => [Surface::S13, Surface::S23],
        }
    }
}

impl TryFrom<u8> for Handlebody {
    type Error = String;

    fn try_from(i: u8) -> Result<Self, String> {
        Handlebody::from_index(i).ok_or_else(|| format!("handlebody index must be 1, 2 or 3, got {i}"))
    }
}

impl From<Handlebody> for u8 {
    fn from(h: Handlebody) -> u8 {
        h.index()
    }
}

impl fmt::Display for Handlebody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}", self.index())
    }
}

/// One of the pairwise intersections `S12`, `S13`, `S23`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Surface {
    S12,
    S13,
    S23,
}

impl Surface {
    pub const ALL: [Surface; 3] = [Surface::S12, Surface::S13, Surface::S23];

    pub fn between(a: Handlebody, b: Handlebody) -> Option<Surface> {
        use Handlebody::*;
        match (a.min(b), a.max(b)) {
            (H1, H2) => Some(Surface::S12),
            (H1, H3) => Some(Surface::S13),
            (H2, H3) => Some(Surface::S23),
            _ => None,
        }
    }

    pub fn handlebodies(self) -> (Handlebody, Handlebody) {
        match self {
            Surface::S12 => (Handlebody::H1, Handlebody::H2),
            Surface::S13 => (Handlebody::H1, Handlebody::H3),
            Surface::S23 => (Handlebody::H2, Handlebody::H3),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.handlebodies();
        write!(f, "S{}{}", a.index(), b.index())
    }
}

/// Genera of the three pairwise surfaces. Each surface is connected with
/// exactly `b` boundary circles, all shared with the link `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceGenera {
    pub g12: u32,
    pub g13: u32,
    pub g23: u32,
}

impl SurfaceGenera {
    pub const fn new(g12: u32, g13: u32, g23: u32) -> Self {
        SurfaceGenera { g12, g13, g23 }
    }

    pub fn get(&self, s: Surface) -> u32 {
        match s {
            Surface::S12 => self.g12,
            Surface::S13 => self.g13,
            Surface::S23 => self.g23,
        }
    }

    pub fn get_mut(&mut self, s: Surface) -> &mut u32 {
        match s {
            Surface::S12 => &mut self.g12,
            Surface::S13 => &mut self.g13,
            Surface::S23 => &mut self.g23,
        }
    }

    pub fn total(&self) -> u32 {
        self.g12 + self.g13 + self.g23
    }

    /// `h_i = g_ij + g_ik + b - 1`.
    pub fn handlebody_genus(&self, h: Handlebody, b: u32) -> u32 {
        let [s, t] = h.adjacent();
        self.get(s) + self.get(t) + b - 1
    }

    pub fn profile(&self, b: u32) -> Profile {
        assert!(b >= 1, "link must have at least one component");
        Profile {
            h1: self.handlebody_genus(Handlebody::H1, b),
            h2: self.handlebody_genus(Handlebody::H2, b),
            h3: self.handlebody_genus(Handlebody::H3, b),
            b,
        }
    }
}

impl fmt::Display for SurfaceGenera {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g12={} g13={} g23={}", self.g12, self.g13, self.g23)
    }
}

/// Euler characteristic of a connected genus-`g` surface with `b` boundary circles.
pub fn surface_euler_characteristic(genus: u32, b: u32) -> i64 {
    2 - 2 * genus as i64 - b as i64
}

/// The quadruple `(h1,h2,h3;b)`.
///
/// Serialized as the array `[h1,h2,h3,b]`; displayed as `(h1,h2,h3;b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 4]", into = "[u32; 4]")]
pub struct Profile {
    pub h1: u32,
    pub h2: u32,
    pub h3: u32,
    pub b: u32,
}

impl Profile {
    pub const fn new(h1: u32, h2: u32, h3: u32, b: u32) -> Self {
        Profile { h1, h2, h3, b }
    }

    pub const fn balanced(h: u32, b: u32) -> Self {
        Profile { h1: h, h2: h, h3: h, b }
    }

    pub fn h(&self, i: Handlebody) -> u32 {
        match i {
            Handlebody::H1 => self.h1,
            Handlebody::H2 => self.h2,
            Handlebody::H3 => self.h3,
        }
    }

    pub fn sum_h(&self) -> u32 {
        self.h1 + self.h2 + self.h3
    }

    pub fn max_h(&self) -> u32 {
        self.h1.max(self.h2).max(self.h3)
    }

    pub fn is_balanced(&self) -> bool {
        self.h1 == self.h2 && self.h2 == self.h3
    }

    /// Three balls meeting in disks along a single circle.
    pub fn is_trivial(&self) -> bool {
        *self == Profile::new(0, 0, 0, 1)
    }

    pub fn is_feasible(&self) -> bool {
        is_feasible(self)
    }
}

impl From<[u32; 4]> for Profile {
    fn from([h1, h2, h3, b]: [u32; 4]) -> Self {
        Profile { h1, h2, h3, b }
    }
}

impl From<Profile> for [u32; 4] {
    fn from(p: Profile) -> Self {
        [p.h1, p.h2, p.h3, p.b]
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{};{})", self.h1, self.h2, self.h3, self.b)
    }
}

/// Inverts the genus formula. Fails with [`Error::Infeasible`] when any
/// `g_ij` would be negative or half-integral, or when `b = 0`.
pub fn genera_from_profile(p: &Profile) -> Result<SurfaceGenera> {
    let infeasible = || Error::Infeasible { profile: *p };
    if p.b == 0 {
        return Err(infeasible());
    }
    let (h1, h2, h3, b) = (p.h1 as i64, p.h2 as i64, p.h3 as i64, p.b as i64);
    let solve = |hi: i64, hj: i64, hk: i64| -> Option<u32> {
        let twice = hi + hj - hk + 1 - b;
        if twice < 0 || twice % 2 != 0 {
            return None;
        }
        u32::try_from(twice / 2).ok()
    };
    Ok(SurfaceGenera {
        g12: solve(h1, h2, h3).ok_or_else(infeasible)?,
        g13: solve(h1, h3, h2).ok_or_else(infeasible)?,
        g23: solve(h2, h3, h1).ok_or_else(infeasible)?,
    })
}

/// Necessary condition for a quadruple to be trisection data. Realizability
/// by an actual trisection is not decided.
pub fn is_feasible(p: &Profile) -> bool {
    genera_from_profile(p).is_ok()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use proptest::prelude::*;

    use super::*;

    /// Forward enumeration: every genera triple and link size up to the bound,
    /// keyed by the profile it produces.
    fn enumerate_profiles(max_genus: u32, max_b: u32) -> BTreeMap<Profile, Vec<SurfaceGenera>> {
        let mut out: BTreeMap<Profile, Vec<SurfaceGenera>> = BTreeMap::new();
        for g12 in 0..=max_genus {
            for g13 in 0..=max_genus {
                for g23 in 0..=max_genus {
                    for b in 1..=max_b {
                        let g = SurfaceGenera::new(g12, g13, g23);
                        out.entry(g.profile(b)).or_default().push(g);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn profile_examples() {
        assert_eq!(SurfaceGenera::new(0, 0, 0).profile(1), Profile::new(0, 0, 0, 1));
        assert_eq!(SurfaceGenera::new(2, 0, 0).profile(1), Profile::new(2, 2, 0, 1));
        assert_eq!(SurfaceGenera::new(0, 0, 1).profile(2), Profile::new(1, 2, 2, 2));
    }

    #[test]
    fn genera_from_profile_examples() {
        assert_eq!(genera_from_profile(&Profile::new(0, 0, 0, 1)), Ok(SurfaceGenera::new(0, 0, 0)));
        assert_eq!(genera_from_profile(&Profile::new(2, 2, 0, 1)), Ok(SurfaceGenera::new(2, 0, 0)));
        assert_eq!(
            genera_from_profile(&Profile::new(6, 3, 3, 3)),
            Err(Error::Infeasible { profile: Profile::new(6, 3, 3, 3) })
        );
        assert!(genera_from_profile(&Profile::new(0, 0, 0, 0)).is_err());
    }

    #[test]
    fn feasibility_examples() {
        assert!(is_feasible(&Profile::new(1, 1, 2, 1)));
        assert!(!is_feasible(&Profile::new(1, 1, 1, 1)));
        for h in 0..=6 {
            for b in 1..=6 {
                if (h + b) % 2 == 0 {
                    assert!(!is_feasible(&Profile::balanced(h, b)));
                }
            }
        }
    }

    #[test]
    fn inversion_agrees_with_brute_force_enumeration() {
        // Genera up to 8 and b up to 10 cover every profile with h_i <= 8 exactly.
        let table = enumerate_profiles(8, 10);
        for (p, solutions) in &table {
            assert_eq!(solutions.len(), 1, "linear system has a unique solution for {p}");
        }
        for h1 in 0..=8 {
            for h2 in 0..=8 {
                for h3 in 0..=8 {
                    for b in 1..=9 {
                        let p = Profile::new(h1, h2, h3, b);
                        match table.get(&p) {
                            Some(sol) => assert_eq!(genera_from_profile(&p), Ok(sol[0]), "{p}"),
                            None => assert!(!is_feasible(&p), "{p} has no preimage"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_parity_exhaustive() {
        for h in 0..=12 {
            for b in 1..=12 {
                let feasible = is_feasible(&Profile::balanced(h, b));
                if feasible {
                    assert_eq!((h + b) % 2, 1, "({h};{b})");
                }
                // The converse needs the common surface genus (h + 1 - b) / 2 to be nonnegative.
                assert_eq!(feasible, (h + b) % 2 == 1 && b <= h + 1, "({h};{b})");
                if let Ok(g) = genera_from_profile(&Profile::balanced(h, b)) {
                    let each = (h + 1 - b) / 2;
                    assert_eq!(g, SurfaceGenera::new(each, each, each));
                }
            }
        }
    }

    #[test]
    fn display_and_serde_shape() {
        let p = Profile::new(4, 10, 6, 1);
        assert_eq!(p.to_string(), "(4,10,6;1)");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[4,10,6,1]");
        assert_eq!(serde_json::to_string(&Handlebody::H2).unwrap(), "2");
        assert!(serde_json::from_str::<Handlebody>("4").is_err());
        assert!(serde_json::from_str::<SurfaceGenera>(r#"{"g12":1,"g13":0,"g23":0,"x":1}"#).is_err());
    }

    #[test]
    fn surface_indexing_is_consistent() {
        for h in Handlebody::ALL {
            let opp = h.opposite();
            let (a, b) = opp.handlebodies();
            assert!(a != h && b != h);
            for s in h.adjacent() {
                let (x, y) = s.handlebodies();
                assert!(x == h || y == h);
                assert_eq!(Surface::between(x, y), Some(s));
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip(g12 in 0u32..40, g13 in 0u32..40, g23 in 0u32..40, b in 1u32..40) {
            let g = SurfaceGenera::new(g12, g13, g23);
            let p = g.profile(b);
            prop_assert!(p.is_feasible());
            prop_assert_eq!(genera_from_profile(&p), Ok(g));
        }

        #[test]
        fn feasible_profiles_round_trip(h1 in 0u32..30, h2 in 0u32..30, h3 in 0u32..30, b in 1u32..30) {
            let p = Profile::new(h1, h2, h3, b);
            if let Ok(g) = genera_from_profile(&p) {
                prop_assert_eq!(g.profile(b), p);
                prop_assert_eq!((h1 + h2 + h3 + b) % 2, 1);
            }
        }
    }
}
