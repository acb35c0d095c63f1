//! Fusion rings: the discrete data of a rational conformal field theory.
//!
//! A ring has finitely many simple objects, a unit, a duality involution and
//! a multiplicity tensor `N(x, y, z)` = multiplicity of `z` in `x ⊗ y`. All
//! coherence bijections are checked at the level of cardinalities.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{Mat, Scalar};
use crate::outcome::{first_failure, Outcome, Witness};
use crate::scheme::GroupTable;
use crate::tensor::{pairs, IntersectionTensor, Involution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("fusion ring has no objects")]
    Empty,
    #[error("{what} has {found} entries for {m} objects")]
    Size {
        what: &'static str,
        m: usize,
        found: usize,
    },
    #[error("unit index {unit} out of range 0..{m}")]
    UnitRange { unit: usize, m: usize },
    #[error("left unit law fails at ({y},{z}): N(unit,{y},{z}) = {value}")]
    LeftUnit { y: usize, z: usize, value: BigUint },
    #[error("right unit law fails at ({x},{z}): N({x},unit,{z}) = {value}")]
    RightUnit { x: usize, z: usize, value: BigUint },
    #[error("dual is not an involution at object {object}")]
    DualNotInvolutive { object: usize },
}

/// Unvalidated fusion data, as parsed or generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionData {
    pub names: Vec<String>,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub tensor: IntersectionTensor,
}

/// Fusion data that passed [`validate_fusion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    data: FusionData,
    dual: Involution,
}

pub fn validate_fusion(data: FusionData) -> Result<FusionRing, FusionError> {
    let m = data.names.len();
    if m == 0 {
        return Err(FusionError::Empty);
    }
    if data.tensor.size() != m {
        return Err(FusionError::Size {
            what: "tensor",
            m,
            found: data.tensor.size(),
        });
    }
    if data.dual.len() != m {
        return Err(FusionError::Size {
            what: "dual map",
            m,
            found: data.dual.len(),
        });
    }
    if data.unit >= m {
        return Err(FusionError::UnitRange { unit: data.unit, m });
    }
    if let Some(w) = data.tensor.check_left_unit(data.unit).witness() {
        let (y, z) = (w.at[0], w.at[1]);
        return Err(FusionError::LeftUnit {
            y,
            z,
            value: data.tensor.get(data.unit, y, z).clone(),
        });
    }
    if let Some(w) = data.tensor.check_right_unit(data.unit).witness() {
        let (x, z) = (w.at[0], w.at[1]);
        return Err(FusionError::RightUnit {
            x,
            z,
            value: data.tensor.get(x, data.unit, z).clone(),
        });
    }
    let object = (0..m).find(|&x| data.dual[x] >= m || data.dual[data.dual[x]] != x);
    if let Some(object) = object {
        return Err(FusionError::DualNotInvolutive { object });
    }
    let dual = Involution::new(data.dual.clone()).expect("checked above");
    Ok(FusionRing { data, dual })
}

/// Hom-map `[y, z]` of a closed ring: the unique `x` with `N(x, y, z) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMap {
    m: usize,
    table: Vec<usize>,
}

impl HomMap {
    pub fn hom(&self, y: usize, z: usize) -> usize {
        self.table[y * self.m + z]
    }
}

impl FusionRing {
    /// Wraps data without validating it. Checks on the result still run, and
    /// report whatever the data violates; used for mutation testing.
    pub fn assume_valid(data: FusionData) -> Self {
        let m = data.names.len();
        let map = (0..m).map(|x| data.dual.get(x).copied().filter(|&d| d < m).unwrap_or(x));
        let dual = Involution::new(map.collect()).unwrap_or_else(|_| Involution::identity(m));
        FusionRing { data, dual }
    }

    pub fn len(&self) -> usize {
        self.data.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.data.names
    }

    pub fn unit(&self) -> usize {
        self.data.unit
    }

    pub fn dual(&self) -> &Involution {
        &self.dual
    }

    pub fn tensor(&self) -> &IntersectionTensor {
        &self.data.tensor
    }

    pub fn data(&self) -> &FusionData {
        &self.data
    }

    pub fn into_data(self) -> FusionData {
        self.data
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.data.names.iter().position(|n| n == name)
    }

    pub fn check_unit_laws(&self) -> Outcome {
        let t = &self.data.tensor;
        t.check_left_unit(self.unit())
            .and(t.check_right_unit(self.unit()))
    }

    pub fn check_proassociativity(&self) -> Outcome {
        self.data.tensor.check_proassociativity()
    }

    /// `N(x,y,z*) = N(y,z,x*)`.
    pub fn check_cyclic(&self) -> Outcome {
        self.data.tensor.check_compact(&self.dual)
    }

    /// `N(x,y,z) = N(y,x,z)`.
    pub fn check_braiding(&self) -> Outcome {
        self.data.tensor.check_braiding()
    }

    /// `N(x,y,z) = N(y*,x*,z*)` and `unit* = unit`.
    pub fn check_precompact(&self) -> Outcome {
        self.data.tensor.check_precompact(&self.dual, self.unit())
    }

    /// `(N_x)_{y,z} = N(x,y,z)` for each object `x`.
    pub fn fusion_matrices(&self) -> Vec<Mat> {
        let m = self.len();
        let t = &self.data.tensor;
        (0..m)
            .map(|x| {
                let mut a = Mat::zeros(m, m);
                for (y, z) in pairs(m) {
                    a.set(y, z, big_scalar(t.get(x, y, z)));
                }
                a
            })
            .collect()
    }

    /// Proassociativity in matrix form: `N_y N_x = sum_u N(x,y,u) N_u` for
    /// all `x, y`. Entry `(a, b)` of both sides is the multiplicity of `b` in
    /// `(x ⊗ y) ⊗ a` resp. `y ⊗ (x ⊗ a)`, hence the reversed order on the
    /// left. The witness is `(x, y, a, b)`.
    pub fn check_matrix_associativity(&self) -> Outcome {
        let mats = self.fusion_matrices();
        let m = self.len();
        let t = &self.data.tensor;
        first_failure(pairs(m), |(x, y)| {
            let lhs = mats[y].mul(&mats[x]).expect("square");
            let mut rhs = Mat::zeros(m, m);
            for (u, nu) in mats.iter().enumerate() {
                let c = t.get(x, y, u);
                if !c.is_zero() {
                    rhs = rhs.add(&nu.scale(&big_scalar(c))).expect("square");
                }
            }
            pairs(m)
                .find(|&(a, b)| lhs.get(a, b) != rhs.get(a, b))
                .map(|(a, b)| {
                    Witness::new("x,y,a,b", vec![x, y, a, b], lhs.get(a, b), rhs.get(a, b))
                })
        })
    }

    /// Returns the hom-map when every `N(·, y, z)` is an indicator of a single
    /// object.
    pub fn is_closed(&self) -> Option<HomMap> {
        let m = self.len();
        let t = &self.data.tensor;
        let mut table = Vec::with_capacity(m * m);
        for (y, z) in pairs(m) {
            let mut found = None;
            for x in 0..m {
                let v = t.get(x, y, z);
                if v.is_zero() {
                    continue;
                }
                if !v.is_one() || found.is_some() {
                    return None;
                }
                found = Some(x);
            }
            table.push(found?);
        }
        Some(HomMap { m, table })
    }

    /// Tensor-hom adjunction on multiplicities, `N(x,y,z) = N(z,y*,x)`: the
    /// internal hom `[y,z] = z ⊗ y*` exists exactly when this holds.
    pub fn check_frobenius(&self) -> Outcome {
        let t = &self.data.tensor;
        first_failure(crate::tensor::triples(self.len()), |(x, y, z)| {
            let l = t.get(x, y, z);
            let r = t.get(z, self.dual.apply(y), x);
            (l != r).then(|| Witness::new("x,y,z", vec![x, y, z], l, r))
        })
    }

    /// For a closed ring, `[x,y]* = [y,x]` for all pairs.
    pub fn check_hom_involution(&self, hom: &HomMap) -> Outcome {
        first_failure(pairs(self.len()), |(x, y)| {
            let l = self.dual.apply(hom.hom(x, y));
            let r = hom.hom(y, x);
            (l != r).then(|| Witness::new("x,y", vec![x, y], l, r))
        })
    }
}

pub(crate) fn big_scalar(v: &BigUint) -> Scalar {
    Scalar::from_integer(num_bigint::BigInt::from(v.clone()))
}

fn named(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Fibonacci: objects `1, tau` with `tau ⊗ tau = 1 + tau`.
pub fn gen_fibonacci() -> FusionRing {
    let tensor = IntersectionTensor::from_fn(2, |x, y, z| match (x, y, z) {
        (0, 0, 0) | (0, 1, 1) | (1, 0, 1) | (1, 1, 0) | (1, 1, 1) => 1,
        _ => 0,
    });
    let data = FusionData {
        names: named(&["1", "tau"]),
        unit: 0,
        dual: vec![0, 1],
        tensor,
    };
    validate_fusion(data).expect("Fibonacci data is valid")
}

/// Ising: objects `1, sigma, psi` with `sigma² = 1 + psi`,
/// `sigma psi = psi sigma = sigma`, `psi² = 1`.
pub fn gen_ising() -> FusionRing {
    const ONE: usize = 0;
    const SIGMA: usize = 1;
    const PSI: usize = 2;
    let tensor = IntersectionTensor::from_fn(3, |x, y, z| {
        let hit = match (x, y) {
            (ONE, a) | (a, ONE) => z == a,
            (SIGMA, SIGMA) => z == ONE || z == PSI,
            (SIGMA, PSI) | (PSI, SIGMA) => z == SIGMA,
            (PSI, PSI) => z == ONE,
            _ => false,
        };
        u64::from(hit)
    });
    let data = FusionData {
        names: named(&["1", "sigma", "psi"]),
        unit: ONE,
        dual: vec![0, 1, 2],
        tensor,
    };
    validate_fusion(data).expect("Ising data is valid")
}

/// Pointed fusion ring of a finite group: `N(x,y,z) = [xy = z]`,
/// `x* = x^-1`. Objects are named by their index.
pub fn group_fusion(group: &GroupTable) -> FusionRing {
    let n = group.order();
    let tensor = IntersectionTensor::from_fn(n, |x, y, z| u64::from(group.mul(x, y) == z));
    let data = FusionData {
        names: (0..n).map(|i| i.to_string()).collect(),
        unit: group.identity(),
        dual: (0..n).map(|x| group.inverse(x)).collect(),
        tensor,
    };
    validate_fusion(data).expect("group fusion data is valid")
}

/// `Z_n` fusion: `N(x,y,z) = [x + y ≡ z mod n]`, `x* = -x`.
pub fn gen_group_fusion(n: usize) -> Result<FusionRing, FusionError> {
    let group = GroupTable::cyclic(n).map_err(|_| FusionError::Empty)?;
    Ok(group_fusion(&group))
}
