//! Multiplicity tensors `N(a, b, c)` of a discrete promonoidal structure.
//!
//! The same tensor type serves both settings: the intersection numbers of an
//! association scheme (indices are classes) and the fusion rules of a fusion
//! ring (indices are simple objects). In both cases `N(a, b, c)` is the
//! multiplicity of `c` in the product of `a` and `b`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::outcome::{first_failure, Outcome, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("involution has {found} entries, expected {expected}")]
    InvolutionLength { expected: usize, found: usize },
    #[error("involution maps {index} to {image}, outside 0..{len}")]
    InvolutionRange {
        index: usize,
        image: usize,
        len: usize,
    },
    #[error("map is not involutive at {index}: {index} -> {image} -> {back}")]
    NotInvolutive {
        index: usize,
        image: usize,
        back: usize,
    },
    #[error("multiplicity {value} at ({a},{b},{c}) does not fit in memory-sized dimension")]
    Overflow {
        a: usize,
        b: usize,
        c: usize,
        value: BigUint,
    },
}

/// An involutive relabelling `i -> i*` of an index set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Involution(Vec<usize>);

impl Involution {
    pub fn new(map: Vec<usize>) -> Result<Self, TensorError> {
        let len = map.len();
        for (index, &image) in map.iter().enumerate() {
            if image >= len {
                return Err(TensorError::InvolutionRange { index, image, len });
            }
        }
        for (index, &image) in map.iter().enumerate() {
            let back = map[image];
            if back != index {
                return Err(TensorError::NotInvolutive { index, image, back });
            }
        }
        Ok(Involution(map))
    }

    pub fn identity(len: usize) -> Self {
        Involution((0..len).collect())
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Dense `m x m x m` tensor of non-negative arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntersectionTensor {
    m: usize,
    entries: Vec<BigUint>,
}

impl IntersectionTensor {
    pub fn zeros(m: usize) -> Self {
        IntersectionTensor {
            m,
            entries: vec![BigUint::zero(); m * m * m],
        }
    }

    pub fn from_fn<F>(m: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize, usize) -> u64,
    {
        let mut t = IntersectionTensor::zeros(m);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    t.entries[(a * m + b) * m + c] = BigUint::from(f(a, b, c));
                }
            }
        }
        t
    }

    /// Index set size.
    pub fn size(&self) -> usize {
        self.m
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.m + b) * self.m + c
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &BigUint {
        &self.entries[self.idx(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: BigUint) {
        let i = self.idx(a, b, c);
        self.entries[i] = v;
    }

    /// Adds one to a single entry; used to build mutants.
    pub fn bump(&mut self, a: usize, b: usize, c: usize) {
        let i = self.idx(a, b, c);
        self.entries[i] += 1u32;
    }

    /// Nonzero entries in lexicographic index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &BigUint)> + '_ {
        let m = self.m;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (i / (m * m), (i / m) % m, i % m, v))
    }

    /// Same tensor as machine-sized counts, for building matrices.
    pub fn to_usize(&self) -> Result<Vec<usize>, TensorError> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.to_usize().ok_or_else(|| TensorError::Overflow {
                    a: i / (self.m * self.m),
                    b: (i / self.m) % self.m,
                    c: i % self.m,
                    value: v.clone(),
                })
            })
            .collect()
    }

    /// `(sum_x N(s,t,x) N(x,r,u), sum_x N(s,x,u) N(t,r,x))`: the two
    /// bracketings of a triple product, read off at `u`.
    pub fn associativity_sides(
        &self,
        s: usize,
        t: usize,
        r: usize,
        u: usize,
    ) -> (BigUint, BigUint) {
        let mut left = BigUint::zero();
        let mut right = BigUint::zero();
        for x in 0..self.m {
            let a = self.get(s, t, x);
            if !a.is_zero() {
                left += a * self.get(x, r, u);
            }
            let b = self.get(t, r, x);
            if !b.is_zero() {
                right += self.get(s, x, u) * b;
            }
        }
        (left, right)
    }

    /// Checks `sum_x N(s,t,x) N(x,r,u) = sum_x N(s,x,u) N(t,r,x)` for every
    /// quadruple.
    pub fn check_proassociativity(&self) -> Outcome {
        let m = self.m;
        first_failure(quads(m), |(s, t, r, u)| {
            let (l, rr) = self.associativity_sides(s, t, r, u);
            (l != rr).then(|| Witness::new("s,t,r,u", vec![s, t, r, u], l, rr))
        })
    }

    /// `N(s,t,r) = N(t*,s*,r*)` for all triples, plus the unit condition
    /// `unit* = unit`.
    pub fn check_precompact(&self, inv: &Involution, unit: usize) -> Outcome {
        let unit_ok = if inv.apply(unit) == unit {
            Outcome::pass()
        } else {
            Outcome::fail(Witness::new("c", vec![unit], 1, 0))
        };
        let main = first_failure(triples(self.m), |(s, t, r)| {
            let l = self.get(s, t, r);
            let rr = self.get(inv.apply(t), inv.apply(s), inv.apply(r));
            (l != rr).then(|| Witness::new("s,t,r", vec![s, t, r], l, rr))
        });
        main.and(unit_ok)
    }

    /// Cyclic condition `N(s,t,r*) = N(t,r,s*)` for all triples.
    pub fn check_compact(&self, inv: &Involution) -> Outcome {
        first_failure(triples(self.m), |(s, t, r)| {
            let l = self.get(s, t, inv.apply(r));
            let rr = self.get(t, r, inv.apply(s));
            (l != rr).then(|| Witness::new("s,t,r", vec![s, t, r], l, rr))
        })
    }

    /// Symmetry in the first two indices, `N(x,y,z) = N(y,x,z)`.
    pub fn check_braiding(&self) -> Outcome {
        first_failure(triples(self.m), |(x, y, z)| {
            let l = self.get(x, y, z);
            let r = self.get(y, x, z);
            (l != r).then(|| Witness::new("x,y,z", vec![x, y, z], l, r))
        })
    }

    /// Left unit law at `unit`: `N(unit, y, z) = [y = z]`.
    pub fn check_left_unit(&self, unit: usize) -> Outcome {
        first_failure(pairs(self.m), |(y, z)| {
            let l = self.get(unit, y, z);
            let want = BigUint::from(u8::from(y == z));
            (*l != want).then(|| Witness::new("y,z", vec![y, z], l, want))
        })
    }

    /// Right unit law at `unit`: `N(x, unit, z) = [x = z]`.
    pub fn check_right_unit(&self, unit: usize) -> Outcome {
        first_failure(pairs(self.m), |(x, z)| {
            let l = self.get(x, unit, z);
            let want = BigUint::from(u8::from(x == z));
            (*l != want).then(|| Witness::new("x,z", vec![x, z], l, want))
        })
    }

    /// Same tensor with indices renamed by the permutation `perm`
    /// (`perm[old] = new`).
    pub fn relabel(&self, perm: &[usize]) -> IntersectionTensor {
        let mut out = IntersectionTensor::zeros(self.m);
        for (a, b, c, v) in self.nonzero() {
            out.set(perm[a], perm[b], perm[c], v.clone());
        }
        out
    }
}

impl fmt::Debug for IntersectionTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntersectionTensor(m={}", self.m)?;
        for (a, b, c, v) in self.nonzero() {
            write!(f, " N({a},{b},{c})={v}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |a| (0..m).map(move |b| (a, b)))
}

pub(crate) fn triples(m: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    pairs(m).flat_map(move |(a, b)| (0..m).map(move |c| (a, b, c)))
}

pub(crate) fn quads(m: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    triples(m).flat_map(move |(a, b, c)| (0..m).map(move |d| (a, b, c, d)))
}
