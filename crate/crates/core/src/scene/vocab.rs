//! Closed vocabularies used by the scene graph.
//!
//! Every enum here round-trips through its snake_case wire name. Unknown
//! strings are rejected by the parser rather than coerced.

use std::fmt;

macro_rules! wire_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $wire:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $wire),+
                }
            }

            pub fn from_wire(s: &str) -> Option<Self> {
                match s {
                    $($wire => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

wire_enum!(
    /// Relation between two objects (or an object and a structure node) inside one zone.
    IntraZoneRelation {
        SupportedBy => "supported_by",
        EmbeddedIn => "embedded_in",
        OnTopOf => "on_top_of",
        Under => "under",
        FacingDirect => "facing_direct",
        FacingAngled => "facing_angled",
        BackTo => "back_to",
        SideBySide => "side_by_side",
        Perpendicular => "perpendicular",
        SurroundingRadial => "surrounding_radial",
        SurroundingLinear => "surrounding_linear",
        Flanking => "flanking",
        AlignedFlush => "aligned_flush",
        ParallelOffset => "parallel_offset",
        CornerPlacement => "corner_placement",
    }
);

impl IntraZoneRelation {
    /// Vertical stacking / containment relations. Boxes joined by one of these
    /// are expected to touch or interpenetrate.
    pub fn is_stacking(self) -> bool {
        matches!(
            self,
            IntraZoneRelation::SupportedBy
                | IntraZoneRelation::EmbeddedIn
                | IntraZoneRelation::OnTopOf
                | IntraZoneRelation::Under
        )
    }
}

wire_enum!(
    /// Zone-to-zone connectivity and zone-to-structure anchoring relations.
    TopoRelation {
        AdjacentOpen => "adjacent_open",
        AdjacentPassageway => "adjacent_passageway",
        ConnectedViaDoor => "connected_via_door",
        SeparatedVisual => "separated_visual",
        AnchoredAgainst => "anchored_against",
        CornerAnchored => "corner_anchored",
        FloatingCenter => "floating_center",
        ClearancePath => "clearance_path",
    }
);

wire_enum!(
    OffsetDescriptor {
        NorthOf => "north_of",
        SouthOf => "south_of",
        EastOf => "east_of",
        WestOf => "west_of",
        AdjacentTo => "adjacent_to",
        AcrossFrom => "across_from",
        DiagonalTo => "diagonal_to",
    }
);

wire_enum!(
    AssetRole {
        ZoneAnchor => "zone_anchor",
        Satellite => "satellite",
    }
);

wire_enum!(
    StructureKind {
        Wall => "wall",
        Door => "door",
        Window => "window",
        Opening => "opening",
    }
);

wire_enum!(
    ZoneKind {
        Primary => "primary",
        Secondary => "secondary",
    }
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_names_round_trip() {
        for r in IntraZoneRelation::ALL {
            assert_eq!(IntraZoneRelation::from_wire(r.as_str()), Some(*r));
        }
        for r in TopoRelation::ALL {
            assert_eq!(TopoRelation::from_wire(r.as_str()), Some(*r));
        }
        assert_eq!(IntraZoneRelation::ALL.len(), 15);
        assert_eq!(TopoRelation::ALL.len(), 8);
        assert_eq!(OffsetDescriptor::ALL.len(), 7);
    }

    #[test]
    fn unknown_names_are_not_coerced() {
        assert_eq!(IntraZoneRelation::from_wire("next_to"), None);
        assert_eq!(IntraZoneRelation::from_wire("Supported_By"), None);
        assert_eq!(TopoRelation::from_wire("adjacent"), None);
    }

    #[test]
    fn stacking_subset() {
        let stacking: Vec<_> = IntraZoneRelation::ALL
            .iter()
            .filter(|r| r.is_stacking())
            .collect();
        assert_eq!(stacking.len(), 4);
    }
}
