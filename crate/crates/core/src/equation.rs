use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The PDE whose dependent variable a lattice or scheme refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    /// `u_t = u_xx`
    Heat,
    /// `v_t + v v_x = v_xx`
    Burgers,
    /// `w_t + w_x^2 / 2 = w_xx`
    PotentialBurgers,
    /// `u_t = u u_x + u_xxx`
    Kdv,
    /// `u_xt = 0`
    WaveDemo,
}

impl Equation {
    pub const ALL: [Equation; 5] = [
        Equation::Heat,
        Equation::Burgers,
        Equation::PotentialBurgers,
        Equation::Kdv,
        Equation::WaveDemo,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Equation::Heat => "heat",
            Equation::Burgers => "burgers",
            Equation::PotentialBurgers => "potential_burgers",
            Equation::Kdv => "kdv",
            Equation::WaveDemo => "wave_demo",
        }
    }

    /// Name of the dependent variable, used in reports.
    pub fn variable(self) -> &'static str {
        match self {
            Equation::Burgers => "v",
            Equation::PotentialBurgers => "w",
            _ => "u",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Equation::ALL
            .into_iter()
            .find(|e| e.tag() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "equation",
                name: s.to_string(),
            })
    }
}
