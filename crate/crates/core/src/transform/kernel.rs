//! Kernels `K(a, cell)` generating the transform.
//!
//! A kernel assigns to each source index `a` and each target cell a
//! multiplicity. For a scheme the multiplicity is the 0/1 indicator of
//! `cell ∈ a`; for a fusion ring (Cayley kernel) it is `N(a, y, z)`. The
//! transform sends `f` to `K̂(f)(cell) = ⊕_a f(a) ⊗ k^{K(a, cell)}`.

use num_traits::ToPrimitive;

use crate::fusion::{FusionRing, HomMap};
use crate::outcome::Witness;
use crate::scheme::{AssociationScheme, SchemeError, DIAGONAL};
use crate::tensor::{IntersectionTensor, Involution, TensorError};

use super::functor::{check_source_len, mul_add};
use super::objects::{DimObject, MatObject};
use super::{khat, TransformError};

/// Which matrix product realizes the target tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeOrder {
    /// Relational composition over `X x X`:
    /// `(F ∘ G)(x,y) = ⊕_z F(x,z) ⊗ G(z,y)`.
    Relational,
    /// Profunctor composition over `S x S`, taken so that the Cayley
    /// transform is multiplicative: `(F ∘ G)(y,z) = ⊕_u G(y,u) ⊗ F(u,z)`.
    Profunctor,
}

/// How the involution is transported through the transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarRoute<'a> {
    /// Compare `K̂(f*)` and `K̂(f)*` directly (scheme kernels).
    Direct,
    /// Closed fusion ring: go through the hom-map `[x, y]`.
    ClosedHom(&'a HomMap),
    /// No argument available; the check is not applicable.
    Unavailable(&'static str),
}

/// Outcome of a Wiener-image membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Every source object `f` with `K̂(f)` equal to the query, in
    /// lexicographic order.
    Member(Vec<DimObject>),
    NotMember(Witness),
}

pub trait Kernel {
    /// Number of source indices.
    fn source_len(&self) -> usize;
    /// Side of the square target grid.
    fn grid_side(&self) -> usize;
    /// `K(a, cell)` with `cell = x * side + y`.
    fn weight(&self, a: usize, cell: usize) -> usize;
    /// Promonoidal multiplication on the source.
    fn tensor(&self) -> &IntersectionTensor;
    /// Source index carrying the promonoidal unit.
    fn unit(&self) -> usize;
    fn involution(&self) -> &Involution;
    fn compose_order(&self) -> ComposeOrder;
    fn star_route(&self) -> StarRoute<'_>;
    fn wiener_membership(&self, target: &MatObject) -> Result<Membership, TransformError>;

    /// A cell whose weight at `a` must be exactly one, if the kernel has one.
    fn anchor_cell(&self, _a: usize) -> Option<usize> {
        None
    }

    /// Total weight `sum_cell K(a, cell)` as predicted by the tensor, if the
    /// kernel has such a prediction.
    fn expected_support(&self, _a: usize) -> Option<usize> {
        None
    }

    /// `ǨK̂(f)` computed from the tensor alone, without forming `K̂(f)`.
    fn round_trip_prediction(&self, f: &DimObject) -> Result<DimObject, TransformError>;

    fn cells(&self) -> usize {
        self.grid_side() * self.grid_side()
    }
}

/// `K(s, x, y) = [(x, y) ∈ s]`, stored as an explicit table so that it can
/// be mutated independently of the scheme it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeKernel {
    classes: usize,
    side: usize,
    table: Vec<u8>,
    tensor: IntersectionTensor,
    involution: Involution,
}

impl SchemeKernel {
    pub fn new(scheme: &AssociationScheme) -> Result<Self, SchemeError> {
        let tensor = scheme.intersection_numbers()?;
        Ok(SchemeKernel::with_tensor(scheme, tensor))
    }

    /// Kernel of `scheme` paired with an arbitrary tensor (e.g. a mutant).
    pub fn with_tensor(scheme: &AssociationScheme, tensor: IntersectionTensor) -> Self {
        let side = scheme.points();
        let classes = scheme.classes();
        let mut table = vec![0u8; classes * side * side];
        for x in 0..side {
            for y in 0..side {
                let cell = x * side + y;
                table[scheme.class_of(x, y) * side * side + cell] = 1;
            }
        }
        SchemeKernel {
            classes,
            side,
            table,
            tensor,
            involution: scheme.involution().clone(),
        }
    }

    /// Overwrites `K(s, x, y)`; used to break the partition in mutation runs.
    pub fn set_weight(&mut self, s: usize, x: usize, y: usize, v: u8) {
        let cell = x * self.side + y;
        self.table[s * self.side * self.side + cell] = v;
    }

    /// Adds one to `K(s, x, y)`.
    pub fn bump_weight(&mut self, s: usize, x: usize, y: usize) {
        let cell = x * self.side + y;
        let slot = &mut self.table[s * self.side * self.side + cell];
        *slot = slot.saturating_add(1);
    }

    /// Valency `k_s = N(s, s*, diagonal)` read off the tensor.
    fn valency(&self, s: usize) -> Result<usize, TransformError> {
        self.tensor
            .get(s, self.involution.apply(s), DIAGONAL)
            .to_usize()
            .ok_or(TransformError::Overflow)
    }

    /// Cells in the support of class `s`, in row-major order.
    pub fn class_cells(&self, s: usize) -> Vec<usize> {
        (0..self.cells())
            .filter(|&c| self.weight(s, c) > 0)
            .collect()
    }

    /// Number of pairs `|s|` in class `s`.
    pub fn class_size(&self, s: usize) -> usize {
        (0..self.cells()).map(|c| self.weight(s, c)).sum()
    }
}

impl Kernel for SchemeKernel {
    fn source_len(&self) -> usize {
        self.classes
    }

    fn grid_side(&self) -> usize {
        self.side
    }

    fn weight(&self, a: usize, cell: usize) -> usize {
        usize::from(self.table[a * self.side * self.side + cell])
    }

    fn tensor(&self) -> &IntersectionTensor {
        &self.tensor
    }

    fn unit(&self) -> usize {
        DIAGONAL
    }

    fn involution(&self) -> &Involution {
        &self.involution
    }

    fn compose_order(&self) -> ComposeOrder {
        ComposeOrder::Relational
    }

    fn star_route(&self) -> StarRoute<'_> {
        StarRoute::Direct
    }

    /// `|s| = n k_s`.
    fn expected_support(&self, a: usize) -> Option<usize> {
        self.valency(a).ok()?.checked_mul(self.side)
    }

    /// `ǨK̂(f)(s) = |s| f(s) = n N(s, s*, diagonal) f(s)`.
    fn round_trip_prediction(&self, f: &DimObject) -> Result<DimObject, TransformError> {
        check_source_len(self, f)?;
        let dims = (0..self.classes)
            .map(|s| {
                let size = self
                    .valency(s)?
                    .checked_mul(self.side)
                    .ok_or(TransformError::Overflow)?;
                mul_add(0, size, f.get(s))
            })
            .collect::<Result<_, _>>()?;
        Ok(DimObject::new(dims))
    }

    /// `F` is in the image iff it is constant on every class; the witness is
    /// the first pair of cells of one class carrying different dimensions.
    fn wiener_membership(&self, target: &MatObject) -> Result<Membership, TransformError> {
        check_grid(self, target)?;
        let side = self.side;
        let mut dims = vec![0; self.classes];
        for (s, dim) in dims.iter_mut().enumerate() {
            let cells = self.class_cells(s);
            let Some(&first) = cells.first() else {
                continue;
            };
            if let Some(&other) = cells.iter().find(|&&c| target.at(c) != target.at(first)) {
                return Ok(Membership::NotMember(Witness::new(
                    "x,y,x',y'",
                    vec![first / side, first % side, other / side, other % side],
                    target.at(first),
                    target.at(other),
                )));
            }
            *dim = target.at(first);
        }
        let f = DimObject::new(dims);
        let image = khat(self, &f)?;
        if let Some(cell) = (0..self.cells()).find(|&c| image.at(c) != target.at(c)) {
            // only reachable when the kernel is not a partition
            return Ok(Membership::NotMember(Witness::new(
                "x,y",
                vec![cell / side, cell % side],
                image.at(cell),
                target.at(cell),
            )));
        }
        Ok(Membership::Member(vec![f]))
    }
}

/// Cayley kernel of a fusion ring: `K(x, (y, z)) = N(x, y, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionKernel {
    ring: FusionRing,
    weights: Vec<usize>,
    closed: Option<HomMap>,
}

impl FusionKernel {
    pub fn new(ring: &FusionRing) -> Result<Self, TensorError> {
        let weights = ring.tensor().to_usize()?;
        Ok(FusionKernel {
            ring: ring.clone(),
            weights,
            closed: ring.is_closed(),
        })
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn hom_map(&self) -> Option<&HomMap> {
        self.closed.as_ref()
    }
}

impl Kernel for FusionKernel {
    fn source_len(&self) -> usize {
        self.ring.len()
    }

    fn grid_side(&self) -> usize {
        self.ring.len()
    }

    fn weight(&self, a: usize, cell: usize) -> usize {
        let m = self.ring.len();
        self.weights[a * m * m + cell]
    }

    fn tensor(&self) -> &IntersectionTensor {
        self.ring.tensor()
    }

    fn unit(&self) -> usize {
        self.ring.unit()
    }

    fn involution(&self) -> &Involution {
        self.ring.dual()
    }

    fn compose_order(&self) -> ComposeOrder {
        ComposeOrder::Profunctor
    }

    /// `ǨK̂(f)(x) = sum_{b,u} f(b) N(x,u,b) c_u` with
    /// `c_u = sum_y N(y, y*, u)`. Follows from `N(b,y,z) = N(z,y*,b)` and
    /// associativity, so it holds for every rigid ring.
    fn round_trip_prediction(&self, f: &DimObject) -> Result<DimObject, TransformError> {
        check_source_len(self, f)?;
        let m = self.ring.len();
        let n = |a: usize, b: usize, c: usize| self.weights[(a * m + b) * m + c];
        let dual = self.ring.dual();
        let c = (0..m)
            .map(|u| (0..m).try_fold(0, |acc, y| mul_add(acc, n(y, dual.apply(y), u), 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let dims = (0..m)
            .map(|x| {
                let mut acc = 0;
                for b in 0..m {
                    for (u, &cu) in c.iter().enumerate() {
                        let nc = n(x, u, b).checked_mul(cu).ok_or(TransformError::Overflow)?;
                        acc = mul_add(acc, nc, f.get(b))?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_, TransformError>>()?;
        Ok(DimObject::new(dims))
    }

    /// `N(x, unit, x) = 1` by the right unit law.
    fn anchor_cell(&self, a: usize) -> Option<usize> {
        Some(self.unit() * self.grid_side() + a)
    }

    fn star_route(&self) -> StarRoute<'_> {
        match &self.closed {
            Some(hom) => StarRoute::ClosedHom(hom),
            None => StarRoute::Unavailable("fusion ring is not closed"),
        }
    }

    /// Solves `sum_x f(x) N(x,y,z) = F(y,z)` over non-negative integers by
    /// bounded backtracking and returns every solution.
    fn wiener_membership(&self, target: &MatObject) -> Result<Membership, TransformError> {
        check_grid(self, target)?;
        let solutions = solve_nonnegative(self, target);
        if !solutions.is_empty() {
            return Ok(Membership::Member(solutions));
        }
        // report against the candidate read off the unit row, where the
        // right unit law isolates f(z) = F(unit, z)
        let side = self.grid_side();
        let u = self.unit();
        let candidate = DimObject::new((0..side).map(|z| target.get(u, z)).collect());
        let image = khat(self, &candidate)?;
        let cell = (0..self.cells())
            .find(|&c| image.at(c) != target.at(c))
            .unwrap_or(0);
        Ok(Membership::NotMember(Witness::new(
            "y,z",
            vec![cell / side, cell % side],
            image.at(cell),
            target.at(cell),
        )))
    }
}

fn check_grid<K: Kernel + ?Sized>(k: &K, target: &MatObject) -> Result<(), TransformError> {
    if target.side() != k.grid_side() {
        return Err(TransformError::IndexMismatch {
            what: "grid side",
            expected: k.grid_side(),
            found: target.side(),
        });
    }
    Ok(())
}

fn solve_nonnegative<K: Kernel + ?Sized>(k: &K, target: &MatObject) -> Vec<DimObject> {
    let n = k.source_len();
    let cells = k.cells();
    // cells that are fully determined once index a has been assigned
    let mut closes_at: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for c in 0..cells {
        let last = (0..n).rev().find(|&a| k.weight(a, c) > 0);
        closes_at[last.map_or(0, |a| a + 1)].push(c);
    }
    if closes_at[0].iter().any(|&c| target.at(c) != 0) {
        return Vec::new();
    }
    let bounds: Vec<usize> = (0..n)
        .map(|a| {
            (0..cells)
                .filter(|&c| k.weight(a, c) > 0)
                .map(|c| target.at(c) / k.weight(a, c))
                .min()
                .unwrap_or(0)
        })
        .collect();

    let mut residual: Vec<usize> = target.dims().to_vec();
    let mut current = vec![0; n];
    let mut out = Vec::new();

    fn go<K: Kernel + ?Sized>(
        k: &K,
        a: usize,
        bounds: &[usize],
        closes_at: &[Vec<usize>],
        residual: &mut Vec<usize>,
        current: &mut Vec<usize>,
        out: &mut Vec<DimObject>,
    ) {
        let n = bounds.len();
        if a == n {
            out.push(DimObject::new(current.clone()));
            return;
        }
        let cells = residual.len();
        for v in 0..=bounds[a] {
            let fits = (0..cells).all(|c| residual[c] >= v * k.weight(a, c));
            if !fits {
                break;
            }
            for (c, r) in residual.iter_mut().enumerate() {
                *r -= v * k.weight(a, c);
            }
            current[a] = v;
            if closes_at[a + 1].iter().all(|&c| residual[c] == 0) {
                go(k, a + 1, bounds, closes_at, residual, current, out);
            }
            for (c, r) in residual.iter_mut().enumerate() {
                *r += v * k.weight(a, c);
            }
        }
        current[a] = 0;
    }

    go(
        k,
        0,
        &bounds,
        &closes_at,
        &mut residual,
        &mut current,
        &mut out,
    );
    out
}
