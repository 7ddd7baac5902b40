use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, SubsetMask, C64};
use crate::{Error, Result};

/// Three-qubit product vector `x ⊗ y ⊗ z` with its expanded 8-vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ProductVectorJson", try_from = "ProductVectorJson")]
pub struct ProductVector {
    parties: [[C64; 2]; 3],
    full: [C64; 8],
}

impl ProductVector {
    pub fn new(x: [C64; 2], y: [C64; 2], z: [C64; 2]) -> Self {
        let mut full = [C64::default(); 8];
        for (idx, slot) in full.iter_mut().enumerate() {
            *slot = x[idx >> 2] * y[(idx >> 1) & 1] * z[idx & 1];
        }
        ProductVector {
            parties: [x, y, z],
            full,
        }
    }

    pub fn from_real(x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Self {
        let r = |v: [f64; 2]| [C64::new(v[0], 0.0), C64::new(v[1], 0.0)];
        Self::new(r(x), r(y), r(z))
    }

    /// Basis vector `|ijk⟩`.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        let e = |b: usize| if b == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
        Self::from_real(e(i), e(j), e(k))
    }

    pub fn x(&self) -> [C64; 2] {
        self.parties[0]
    }

    pub fn y(&self) -> [C64; 2] {
        self.parties[1]
    }

    pub fn z(&self) -> [C64; 2] {
        self.parties[2]
    }

    /// Factor for party `p` (1-based).
    pub fn party(&self, p: usize) -> [C64; 2] {
        self.parties[p - 1]
    }

    pub fn full(&self) -> &[C64; 8] {
        &self.full
    }

    pub fn norm(&self) -> f64 {
        self.full.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Each factor rescaled to unit norm.
    pub fn normalized(&self) -> Self {
        let unit = |v: [C64; 2]| {
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / n, v[1] / n]
        };
        Self::new(unit(self.x()), unit(self.y()), unit(self.z()))
    }

    pub fn conj(&self) -> Self {
        partial_conjugate(self, SubsetMask::FULL)
    }

    /// `|v⟩⟨v|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.full)
    }

    pub fn has_zero_entry(&self) -> bool {
        self.parties.iter().flatten().any(|z| *z == C64::default())
    }
}

/// `|v⟩^{Γ(S)}`: conjugates the factors of the parties in `subset`.
pub fn partial_conjugate(v: &ProductVector, subset: SubsetMask) -> ProductVector {
    let mut parties = v.parties;
    for (p, factor) in parties.iter_mut().enumerate() {
        if subset.contains(p as u8 + 1) {
            *factor = [factor[0].conj(), factor[1].conj()];
        }
    }
    ProductVector::new(parties[0], parties[1], parties[2])
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorJson {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

/// On-disk form: `{"x": {"re": [..], "im": [..]}, "y": .., "z": ..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductVectorJson {
    pub x: FactorJson,
    pub y: FactorJson,
    pub z: FactorJson,
}

impl From<ProductVector> for ProductVectorJson {
    fn from(v: ProductVector) -> Self {
        let f = |w: [C64; 2]| FactorJson {
            re: [w[0].re, w[1].re],
            im: [w[0].im, w[1].im],
        };
        ProductVectorJson {
            x: f(v.x()),
            y: f(v.y()),
            z: f(v.z()),
        }
    }
}

impl TryFrom<ProductVectorJson> for ProductVector {
    type Error = Error;

    fn try_from(j: ProductVectorJson) -> Result<Self> {
        let f = |w: &FactorJson| -> Result<[C64; 2]> {
            if w.re.iter().chain(&w.im).any(|x| !x.is_finite()) {
                return Err(Error::Malformed("non-finite product vector entry".into()));
            }
            Ok([C64::new(w.re[0], w.im[0]), C64::new(w.re[1], w.im[1])])
        };
        Ok(ProductVector::new(f(&j.x)?, f(&j.y)?, f(&j.z)?))
    }
}
