//! Constructors for the standard families of trisections.
//!
//! Each constructor emits only the combinatorial shadow (surface genera and
//! link size) of the family; no embedding, gluing map or monodromy is
//! represented. Handlebodies keep the order in which the family's quadruple
//! is usually written, largest genus first.

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{genera_from_profile, Profile};
use crate::state::TrisectionState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructorKind {
    /// Three balls meeting in disks.
    Trivial,
    /// Genus-`genus` Heegaard splitting with a disk neighborhood as `H3`: `(g,g,0;1)`.
    FromHeegaard { genus: u32 },
    /// Open book with page genus `page_genus`, pages cut into thirds: `(2g,2g,2g;1)`.
    OpenBook { page_genus: u32 },
    /// Heegaard splitting with one side cut by a disk into genus `h` and
    /// `genus - h` pieces: `(g,h,g-h;1)`.
    SplitHeegaard { genus: u32, h: u32 },
    /// Knot neighborhood plus a disk and `tunnels` tunnel arcs: `(1,m,m+1;1)`.
    TunnelSystem { tunnels: u32 },
    /// Connected sum of two genus-`genus` manifolds: `(g,g,g;g+1)`, all surfaces planar.
    ConnectSumEqualGenus { genus: u32 },
    /// Surface bundle with closed fiber of genus `fiber_genus`:
    /// `(2g,g+1,g+1;1)` for even `g`, `(2g,g+1,g+1;3)` for odd `g`.
    SurfaceBundle { fiber_genus: u32 },
    /// Knot exterior cut by a twice punctured torus: `(1,2,2;2)`.
    KodaOzawa,
}

impl ConstructorKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructorKind::Trivial => "trivial",
            ConstructorKind::FromHeegaard { .. } => "from-heegaard",
            ConstructorKind::OpenBook { .. } => "open-book",
            ConstructorKind::SplitHeegaard { .. } => "split-heegaard",
            ConstructorKind::TunnelSystem { .. } => "tunnel",
            ConstructorKind::ConnectSumEqualGenus { .. } => "connect-sum",
            ConstructorKind::SurfaceBundle { .. } => "surface-bundle",
            ConstructorKind::KodaOzawa => "koda-ozawa",
        }
    }

    /// Builds a kind from a CLI-style name and positional integer parameters.
    pub fn parse(name: &str, params: &[u32]) -> Result<ConstructorKind> {
        let arity = |n: usize, constructor: &'static str| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::OutOfDomain {
                    constructor,
                    reason: format!("expects {n} parameter(s), got {}", params.len()),
                })
            }
        };
        let kind = match name {
            "trivial" => {
                arity(0, "trivial")?;
                ConstructorKind::Trivial
            }
            "from-heegaard" => {
                arity(1, "from-heegaard")?;
                ConstructorKind::FromHeegaard { genus: params[0] }
            }
            "open-book" => {
                arity(1, "open-book")?;
                ConstructorKind::OpenBook { page_genus: params[0] }
            }
            "split-heegaard" => {
                arity(2, "split-heegaard")?;
                ConstructorKind::SplitHeegaard { genus: params[0], h: params[1] }
            }
            "tunnel" => {
                arity(1, "tunnel")?;
                ConstructorKind::TunnelSystem { tunnels: params[0] }
            }
            "connect-sum" => {
                arity(1, "connect-sum")?;
                ConstructorKind::ConnectSumEqualGenus { genus: params[0] }
            }
            "surface-bundle" => {
                arity(1, "surface-bundle")?;
                ConstructorKind::SurfaceBundle { fiber_genus: params[0] }
            }
            "koda-ozawa" => {
                arity(0, "koda-ozawa")?;
                ConstructorKind::KodaOzawa
            }
            other => {
                return Err(Error::Format(format!("unknown constructor {other:?}")));
            }
        };
        Ok(kind)
    }

    /// The quadruple this family is known to realize.
    pub fn profile(&self) -> Result<Profile> {
        let p = match *self {
            ConstructorKind::Trivial => Profile::new(0, 0, 0, 1),
            ConstructorKind::FromHeegaard { genus: g } => Profile::new(g, g, 0, 1),
            ConstructorKind::OpenBook { page_genus: g } => Profile::balanced(2 * g, 1),
            ConstructorKind::SplitHeegaard { genus: g, h } => {
                if h > g {
                    return Err(Error::OutOfDomain {
                        constructor: "split-heegaard",
                        reason: format!("need 0 <= h <= g, got g={g} h={h}"),
                    });
                }
                Profile::new(g, h, g - h, 1)
            }
            ConstructorKind::TunnelSystem { tunnels: m } => Profile::new(1, m, m + 1, 1),
            ConstructorKind::ConnectSumEqualGenus { genus: g } => Profile::balanced(g, g + 1),
            ConstructorKind::SurfaceBundle { fiber_genus: g } => {
                if g == 0 {
                    return Err(Error::OutOfDomain {
                        constructor: "surface-bundle",
                        reason: "fiber genus must be at least 1".into(),
                    });
                }
                let b = if g % 2 == 0 { 1 } else { 3 };
                Profile::new(2 * g, g + 1, g + 1, b)
            }
            ConstructorKind::KodaOzawa => Profile::new(1, 2, 2, 2),
        };
        Ok(p)
    }
}

impl fmt::Display for ConstructorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match *self {
            ConstructorKind::Trivial | ConstructorKind::KodaOzawa => write!(f, "{name}"),
            ConstructorKind::FromHeegaard { genus } => write!(f, "{name}(genus={genus})"),
            ConstructorKind::OpenBook { page_genus } => write!(f, "{name}(page_genus={page_genus})"),
            ConstructorKind::SplitHeegaard { genus, h } => write!(f, "{name}(genus={genus},h={h})"),
            ConstructorKind::TunnelSystem { tunnels } => write!(f, "{name}(tunnels={tunnels})"),
            ConstructorKind::ConnectSumEqualGenus { genus } => write!(f, "{name}(genus={genus})"),
            ConstructorKind::SurfaceBundle { fiber_genus } => write!(f, "{name}(fiber_genus={fiber_genus})"),
        }
    }
}

/// Builds the state for `kind`; the label records the construction.
pub fn construct(kind: ConstructorKind) -> Result<TrisectionState> {
    let profile = kind.profile()?;
    let genera = genera_from_profile(&profile)?;
    TrisectionState::new(genera, profile.b, kind.to_string())
}

pub fn trivial() -> TrisectionState {
    construct(ConstructorKind::Trivial).expect("trivial is always constructible")
}

pub fn from_heegaard(genus: u32) -> TrisectionState {
    construct(ConstructorKind::FromHeegaard { genus }).expect("every genus is in domain")
}

pub fn open_book(page_genus: u32) -> TrisectionState {
    construct(ConstructorKind::OpenBook { page_genus }).expect("every page genus is in domain")
}

pub fn split_heegaard(genus: u32, h: u32) -> Result<TrisectionState> {
    construct(ConstructorKind::SplitHeegaard { genus, h })
}

pub fn tunnel_system(tunnels: u32) -> TrisectionState {
    construct(ConstructorKind::TunnelSystem { tunnels }).expect("every tunnel count is in domain")
}

pub fn connect_sum_equal_genus(genus: u32) -> TrisectionState {
    construct(ConstructorKind::ConnectSumEqualGenus { genus }).expect("every genus is in domain")
}

pub fn surface_bundle(fiber_genus: u32) -> Result<TrisectionState> {
    construct(ConstructorKind::SurfaceBundle { fiber_genus })
}

pub fn koda_ozawa() -> TrisectionState {
    construct(ConstructorKind::KodaOzawa).expect("fixed profile is feasible")
}

/// Label marker appended by formal destabilizations.
pub const FORMAL_DESTAB_MARKER: &str = "[formal-destab]";

pub const FORMAL_DESTAB_NOTE: &str = "formal destabilization: the parameter inverse exists, but a destabilizing disk \
     need not; the (1,2,2;2) knot-exterior family admits none";

/// Notes implied by a state label.
pub fn notes_for_label(label: &str) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(g) = label
        .strip_prefix("surface-bundle(fiber_genus=")
        .and_then(|rest| rest.split(')').next())
        .and_then(|g| g.parse::<u32>().ok())
    {
        if g % 2 == 1 {
            notes.push(format!(
                "note: odd fiber genus g={g} is built as (2g,g+1,g+1;3) = {}; the tuple (2g,g,g;3) \
                 sometimes quoted for this case is infeasible (the genus formula gives g23 = -1)",
                Profile::new(2 * g, g + 1, g + 1, 3)
            ));
        }
    }
    if label.contains(FORMAL_DESTAB_MARKER) {
        notes.push(format!("note: {FORMAL_DESTAB_NOTE}"));
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::SurfaceGenera;

    #[test]
    fn catalogue_examples() {
        let cases: Vec<(TrisectionState, Profile, SurfaceGenera)> = vec![
            (trivial(), Profile::new(0, 0, 0, 1), SurfaceGenera::new(0, 0, 0)),
            (from_heegaard(2), Profile::new(2, 2, 0, 1), SurfaceGenera::new(2, 0, 0)),
            (open_book(1), Profile::new(2, 2, 2, 1), SurfaceGenera::new(1, 1, 1)),
            (split_heegaard(4, 2).unwrap(), Profile::new(4, 2, 2, 1), SurfaceGenera::new(2, 2, 0)),
            (tunnel_system(1), Profile::new(1, 1, 2, 1), SurfaceGenera::new(0, 1, 1)),
            (connect_sum_equal_genus(1), Profile::new(1, 1, 1, 2), SurfaceGenera::new(0, 0, 0)),
            (connect_sum_equal_genus(5), Profile::new(5, 5, 5, 6), SurfaceGenera::new(0, 0, 0)),
            (surface_bundle(2).unwrap(), Profile::new(4, 3, 3, 1), SurfaceGenera::new(2, 2, 1)),
            (surface_bundle(3).unwrap(), Profile::new(6, 4, 4, 3), SurfaceGenera::new(2, 2, 0)),
            (koda_ozawa(), Profile::new(1, 2, 2, 2), SurfaceGenera::new(0, 0, 1)),
        ];
        for (s, p, g) in cases {
            assert_eq!(s.profile(), p, "{}", s.label());
            assert_eq!(s.genera(), g, "{}", s.label());
            assert!(s.history().is_empty());
            s.validate().unwrap();
        }
    }

    #[test]
    fn out_of_domain() {
        assert!(matches!(split_heegaard(2, 3), Err(Error::OutOfDomain { .. })));
        assert!(matches!(surface_bundle(0), Err(Error::OutOfDomain { .. })));
        assert!(ConstructorKind::parse("from-heegaard", &[]).is_err());
        assert!(ConstructorKind::parse("nope", &[1]).is_err());
        assert_eq!(
            ConstructorKind::parse("split-heegaard", &[4, 2]).unwrap(),
            ConstructorKind::SplitHeegaard { genus: 4, h: 2 }
        );
    }

    #[test]
    fn odd_bundle_note() {
        assert_eq!(surface_bundle(3).unwrap().notes().len(), 1);
        assert!(surface_bundle(3).unwrap().notes()[0].contains("(2g,g,g;3)"));
        assert!(surface_bundle(4).unwrap().notes().is_empty());
        assert!(koda_ozawa().notes().is_empty());
    }
}
