use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::Scale;

/// Selects the Lance-Williams update rule used during agglomeration.
///
/// `WardD` is the classic squared-scale Ward implementation (`ward.D`): it only
/// realizes Ward's criterion when fed squared Euclidean distances. `WardD2`
/// (`ward.D2`) squares inside the update and takes the square root of the
/// result, so it consumes plain distances and reports heights on the distance
/// scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkageMethod {
    #[serde(rename = "ward.D")]
    WardD,
    #[serde(rename = "ward.D2")]
    WardD2,
    #[serde(rename = "single")]
    Single,
    #[serde(rename = "complete")]
    Complete,
    #[serde(rename = "average")]
    Average,
    #[serde(rename = "centroid")]
    Centroid,
    #[serde(rename = "median")]
    Median,
}

impl LinkageMethod {
    pub const ALL: [LinkageMethod; 7] = [
        LinkageMethod::WardD,
        LinkageMethod::WardD2,
        LinkageMethod::Single,
        LinkageMethod::Complete,
        LinkageMethod::Average,
        LinkageMethod::Centroid,
        LinkageMethod::Median,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkageMethod::WardD => "ward.D",
            LinkageMethod::WardD2 => "ward.D2",
            LinkageMethod::Single => "single",
            LinkageMethod::Complete => "complete",
            LinkageMethod::Average => "average",
            LinkageMethod::Centroid => "centroid",
            LinkageMethod::Median => "median",
        }
    }

    pub fn is_ward(self) -> bool {
        matches!(self, LinkageMethod::WardD | LinkageMethod::WardD2)
    }

    /// Reducible methods never produce inversions and admit the
    /// nearest-neighbor-chain algorithm.
    pub fn is_reducible(self) -> bool {
        !matches!(self, LinkageMethod::Centroid | LinkageMethod::Median)
    }

    /// Whether the update takes a square root. Only `ward.D2` does.
    pub fn applies_square_root(self) -> bool {
        self == LinkageMethod::WardD2
    }

    /// Input scale the method's geometric meaning depends on, or `None` when
    /// the method is scale-agnostic.
    pub fn required_scale(self) -> Option<Scale> {
        match self {
            LinkageMethod::WardD | LinkageMethod::Centroid | LinkageMethod::Median => {
                Some(Scale::Squared)
            }
            LinkageMethod::WardD2 => Some(Scale::Plain),
            LinkageMethod::Single | LinkageMethod::Complete | LinkageMethod::Average => None,
        }
    }
}

impl fmt::Display for LinkageMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkageMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ward.D" | "ward_d" | "ward" => Ok(LinkageMethod::WardD),
            "ward.D2" | "ward_d2" => Ok(LinkageMethod::WardD2),
            "single" => Ok(LinkageMethod::Single),
            "complete" => Ok(LinkageMethod::Complete),
            "average" => Ok(LinkageMethod::Average),
            "centroid" => Ok(LinkageMethod::Centroid),
            "median" => Ok(LinkageMethod::Median),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_ward_d2_takes_root() {
        let rooted: Vec<_> = LinkageMethod::ALL
            .iter()
            .filter(|m| m.applies_square_root())
            .collect();
        assert_eq!(rooted, vec![&LinkageMethod::WardD2]);
    }

    #[test]
    fn centroid_and_median_are_not_reducible() {
        for m in LinkageMethod::ALL {
            let expected = !matches!(m, LinkageMethod::Centroid | LinkageMethod::Median);
            assert_eq!(m.is_reducible(), expected, "{m}");
        }
    }

    #[test]
    fn names_round_trip() {
        for m in LinkageMethod::ALL {
            assert_eq!(m.name().parse::<LinkageMethod>().unwrap(), m);
        }
        assert!("ward.D3".parse::<LinkageMethod>().is_err());
    }
}
