use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{omega, WitnessFamily};
use crate::qcore::{c, ProductVector, C64};
use crate::{Error, Result};

/// The fourteen families of product vectors pairing to zero with `C_φ`.
///
/// The six flat families have a zero entry in some factor; the eight
/// `eta`/`zeta` families have none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelFamily {
    /// `|x⟩|0⟩|1⟩`
    #[serde(rename = "x01")]
    X01,
    /// `|x⟩|1⟩|0⟩`
    #[serde(rename = "x10")]
    X10,
    /// `|0⟩|y⟩|0⟩`
    #[serde(rename = "0y0")]
    ZeroYZero,
    /// `|1⟩|y⟩|1⟩`
    #[serde(rename = "1y1")]
    OneYOne,
    /// `|0⟩|0⟩|z⟩`
    #[serde(rename = "00z")]
    ZeroZeroZ,
    /// `|1⟩|1⟩|z⟩`
    #[serde(rename = "11z")]
    OneOneZ,
    #[serde(rename = "eta1")]
    Eta1,
    #[serde(rename = "eta2")]
    Eta2,
    #[serde(rename = "eta3")]
    Eta3,
    #[serde(rename = "eta4")]
    Eta4,
    #[serde(rename = "zeta1")]
    Zeta1,
    #[serde(rename = "zeta2")]
    Zeta2,
    #[serde(rename = "zeta3")]
    Zeta3,
    #[serde(rename = "zeta4")]
    Zeta4,
}

use KernelFamily::*;

pub fn all_families() -> [KernelFamily; 14] {
    [
        X01, X10, ZeroYZero, OneYOne, ZeroZeroZ, OneOneZ, Eta1, Eta2, Eta3, Eta4, Zeta1, Zeta2, Zeta3, Zeta4,
    ]
}

impl KernelFamily {
    pub fn is_flat(self) -> bool {
        matches!(self, X01 | X10 | ZeroYZero | OneYOne | ZeroZeroZ | OneOneZ)
    }

    pub fn name(self) -> &'static str {
        match self {
            X01 => "x01",
            X10 => "x10",
            ZeroYZero => "0y0",
            OneYOne => "1y1",
            ZeroZeroZ => "00z",
            OneOneZ => "11z",
            Eta1 => "eta1",
            Eta2 => "eta2",
            Eta3 => "eta3",
            Eta4 => "eta4",
            Zeta1 => "zeta1",
            Zeta2 => "zeta2",
            Zeta3 => "zeta3",
            Zeta4 => "zeta4",
        }
    }

    /// For a flat family: the free party (1-based) and the fixed basis
    /// states of the other two parties, in party order.
    pub fn flat_shape(self) -> Option<(usize, [usize; 2])> {
        match self {
            X01 => Some((1, [0, 1])),
            X10 => Some((1, [1, 0])),
            ZeroYZero => Some((2, [0, 0])),
            OneYOne => Some((2, [1, 1])),
            ZeroZeroZ => Some((3, [0, 0])),
            OneOneZ => Some((3, [1, 1])),
            _ => None,
        }
    }

    /// Powers of `ω` in the second entries of the three factors.
    pub fn omega_powers(self) -> Option<[i32; 3]> {
        match self {
            Eta1 => Some([3, 1, 7]),
            Eta2 => Some([3, 5, 3]),
            Eta3 => Some([7, 1, 3]),
            Eta4 => Some([7, 5, 7]),
            Zeta1 => Some([5, 7, 1]),
            Zeta2 => Some([5, 3, 5]),
            Zeta3 => Some([1, 7, 5]),
            Zeta4 => Some([1, 3, 1]),
            _ => None,
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        all_families()
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown kernel family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyParams {
    /// Coefficients of the two basis vectors spanned by a flat family, e.g.
    /// `z₀|000⟩ + z₁|001⟩` for `00z`.
    Flat { coeffs: [C64; 2] },
    /// `(a₁, a₂)` of an `eta`/`zeta` family.
    Moduli { a1: f64, a2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMember {
    pub family: KernelFamily,
    pub params: FamilyParams,
}

impl KernelMember {
    pub fn flat(family: KernelFamily, coeffs: [C64; 2]) -> Self {
        KernelMember {
            family,
            params: FamilyParams::Flat { coeffs },
        }
    }

    pub fn moduli(family: KernelFamily, a1: f64, a2: f64) -> Self {
        KernelMember {
            family,
            params: FamilyParams::Moduli { a1, a2 },
        }
    }
}

/// Product vector of a kernel family member.
///
/// For the `eta`/`zeta` families the factors are
/// `(√(u a₁), ω^k₁) ⊗ (√(a₂/u), ω^k₂) ⊗ (√(a₁/a₂), ω^k₃)`.
pub fn kernel_vector(w: &WitnessFamily, member: &KernelMember) -> Result<ProductVector> {
    let basis = |b: usize| {
        if b == 0 {
            [c(1.0, 0.0), c(0.0, 0.0)]
        } else {
            [c(0.0, 0.0), c(1.0, 0.0)]
        }
    };
    match (member.family.flat_shape(), member.params) {
        (Some((free, fixed)), FamilyParams::Flat { coeffs }) => {
            let (f0, f1) = (basis(fixed[0]), basis(fixed[1]));
            Ok(match free {
                1 => ProductVector::new(coeffs, f0, f1),
                2 => ProductVector::new(f0, coeffs, f1),
                _ => ProductVector::new(f0, f1, coeffs),
            })
        }
        (None, FamilyParams::Moduli { a1, a2 }) => {
            if a1.is_nan() || a1 <= 0.0 {
                return Err(Error::NonPositive { name: "a1", value: a1 });
            }
            if a2.is_nan() || a2 <= 0.0 {
                return Err(Error::NonPositive { name: "a2", value: a2 });
            }
            let k = member.family.omega_powers().expect("non-flat family");
            let u = w.u();
            let moduli = [(u * a1).sqrt(), (a2 / u).sqrt(), (a1 / a2).sqrt()];
            let f = |i: usize| [c(moduli[i], 0.0), omega(k[i])];
            Ok(ProductVector::new(f(0), f(1), f(2)))
        }
        _ => Err(Error::Malformed(format!(
            "parameters do not match kernel family {}",
            member.family
        ))),
    }
}

/// Parameter grid for sampling the kernel families.
///
/// Flat families use the two basis vectors plus `(1, e^{2πik/phases})`;
/// `eta`/`zeta` families use every pair `(a₁, a₂)` drawn from `moduli`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub moduli: Vec<f64>,
    pub phases: usize,
}

impl Grid {
    /// `a₁, a₂ ∈ {1/2, 1, 2}`, three phases.
    pub fn small() -> Self {
        Grid {
            moduli: vec![0.5, 1.0, 2.0],
            phases: 3,
        }
    }

    /// `a₁, a₂ ∈ {1/2, 1, 2}`, five phases.
    pub fn standard() -> Self {
        Grid {
            moduli: vec![0.5, 1.0, 2.0],
            phases: 5,
        }
    }

    /// `a₁, a₂ ∈ {1/3, 1/2, 1, 2, 3}`, five phases.
    pub fn fine() -> Self {
        Grid {
            moduli: vec![1.0 / 3.0, 0.5, 1.0, 2.0, 3.0],
            phases: 5,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "small" => Some(Self::small()),
            "default" => Some(Self::standard()),
            "fine" => Some(Self::fine()),
            _ => None,
        }
    }

    pub fn flat_coefficients(&self) -> Vec<[C64; 2]> {
        let mut out = vec![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        out.extend((0..self.phases).map(|k| [c(1.0, 0.0), C64::from_polar(1.0, TAU * k as f64 / self.phases as f64)]));
        out
    }

    pub fn moduli_pairs(&self) -> Vec<(f64, f64)> {
        self.moduli
            .iter()
            .flat_map(|&a1| self.moduli.iter().map(move |&a2| (a1, a2)))
            .collect()
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self::standard()
    }
}

/// All members of `families` over `grid`, in family order.
pub fn kernel_members(grid: &Grid, families: &[KernelFamily]) -> Vec<KernelMember> {
    let flat = grid.flat_coefficients();
    let pairs = grid.moduli_pairs();
    let mut out = Vec::new();
    for &family in families {
        if family.is_flat() {
            out.extend(flat.iter().map(|&coeffs| KernelMember::flat(family, coeffs)));
        } else {
            out.extend(pairs.iter().map(|&(a1, a2)| KernelMember::moduli(family, a1, a2)));
        }
    }
    out
}
