//! Source convolution, target composition, and multiplicativity of `K̂`.

use crate::exactlin::Mat;
use crate::outcome::{first_failure, Outcome, Witness};
use crate::tensor::{pairs, IntersectionTensor};

use super::functor::{khat, mul_add};
use super::kernel::{ComposeOrder, Kernel};
use super::objects::{DimObject, MatMorphismFamily, MatObject, MorphismFamily};
use super::TransformError;

fn tensor_weights(n: &IntersectionTensor) -> Result<Vec<usize>, TransformError> {
    Ok(n.to_usize()?)
}

fn check_lengths(n: &IntersectionTensor, f: &DimObject) -> Result<(), TransformError> {
    if f.len() != n.size() {
        return Err(TransformError::IndexMismatch {
            what: "source indices",
            expected: n.size(),
            found: f.len(),
        });
    }
    Ok(())
}

/// Day convolution `(f ⊗ g)(r) = sum_{s,t} N(s,t,r) f(s) g(t)`.
pub fn convolve(
    n: &IntersectionTensor,
    f: &DimObject,
    g: &DimObject,
) -> Result<DimObject, TransformError> {
    check_lengths(n, f)?;
    check_lengths(n, g)?;
    let m = n.size();
    let w = tensor_weights(n)?;
    let dims = (0..m)
        .map(|r| {
            pairs(m).try_fold(0, |acc, (s, t)| {
                let fg = f
                    .get(s)
                    .checked_mul(g.get(t))
                    .ok_or(TransformError::Overflow)?;
                mul_add(acc, w[(s * m + t) * m + r], fg)
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(DimObject::new(dims))
}

/// `(α ⊗ β)_r = ⊕_{s,t} α_s ⊗ β_t ⊗ 1_{N(s,t,r)}`, blocks in `(s, t)`
/// row-major order.
pub fn convolve_morphisms(
    n: &IntersectionTensor,
    alpha: &MorphismFamily,
    beta: &MorphismFamily,
) -> Result<MorphismFamily, TransformError> {
    let source = convolve(n, alpha.source(), beta.source())?;
    let target = convolve(n, alpha.target(), beta.target())?;
    let m = n.size();
    let w = tensor_weights(n)?;
    let mats = (0..m)
        .map(|r| {
            let blocks: Vec<Mat> = pairs(m)
                .filter(|&(s, t)| w[(s * m + t) * m + r] > 0)
                .map(|(s, t)| {
                    alpha
                        .component(s)
                        .kron(beta.component(t))
                        .kron(&Mat::identity(w[(s * m + t) * m + r]))
                })
                .collect();
            Mat::block_diag(&blocks)
        })
        .collect();
    MorphismFamily::new(source, target, mats)
}

fn check_same_side(f: &MatObject, g: &MatObject) -> Result<(), TransformError> {
    if f.side() != g.side() {
        return Err(TransformError::IndexMismatch {
            what: "grid side",
            expected: f.side(),
            found: g.side(),
        });
    }
    Ok(())
}

/// Target tensor product `F ∘ G` under the given composition order.
pub fn mat_compose(
    order: ComposeOrder,
    f: &MatObject,
    g: &MatObject,
) -> Result<MatObject, TransformError> {
    check_same_side(f, g)?;
    let side = f.side();
    let dims = pairs(side)
        .map(|(x, y)| {
            (0..side).try_fold(0, |acc, z| match order {
                ComposeOrder::Relational => mul_add(acc, f.get(x, z), g.get(z, y)),
                ComposeOrder::Profunctor => mul_add(acc, g.get(x, z), f.get(z, y)),
            })
        })
        .collect::<Result<_, _>>()?;
    MatObject::new(side, dims)
}

/// `φ ∘ γ` on morphisms; the summand over the middle index is
/// `φ_(x,z) ⊗ γ_(z,y)` (relational) or `γ_(y,u) ⊗ φ_(u,z)` (profunctor).
pub fn mat_compose_morphisms(
    order: ComposeOrder,
    phi: &MatMorphismFamily,
    gamma: &MatMorphismFamily,
) -> Result<MatMorphismFamily, TransformError> {
    let source = mat_compose(order, phi.source(), gamma.source())?;
    let target = mat_compose(order, phi.target(), gamma.target())?;
    let side = source.side();
    let mats = pairs(side)
        .map(|(x, y)| {
            let blocks: Vec<Mat> = (0..side)
                .map(|z| match order {
                    ComposeOrder::Relational => phi.cell(x, z).kron(gamma.cell(z, y)),
                    ComposeOrder::Profunctor => gamma.cell(x, z).kron(phi.cell(z, y)),
                })
                .collect();
            Mat::block_diag(&blocks)
        })
        .collect();
    MatMorphismFamily::new(source, target, mats)
}

/// Promonoidal unit of the kernel's source: `J` (scheme) or `j` (fusion).
pub fn unit_object<K: Kernel + ?Sized>(k: &K) -> DimObject {
    DimObject::delta(k.source_len(), k.unit())
}

/// `K̂(f ⊗ g) = K̂(f) ∘ K̂(g)` cell by cell; the witness is the first cell
/// where the two dimensions differ.
pub fn check_multiplicative<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
    g: &DimObject,
) -> Result<Outcome, TransformError> {
    let lhs = khat(k, &convolve(k.tensor(), f, g)?)?;
    let rhs = mat_compose(k.compose_order(), &khat(k, f)?, &khat(k, g)?)?;
    let side = k.grid_side();
    Ok(first_failure(pairs(side), |(x, y)| {
        let (l, r) = (lhs.get(x, y), rhs.get(x, y));
        (l != r).then(|| Witness::new("x,y", vec![x, y], l, r))
    }))
}

/// `K̂(J)` is the identity pattern.
pub fn check_unit_preserved<K: Kernel + ?Sized>(k: &K) -> Result<Outcome, TransformError> {
    let got = khat(k, &unit_object(k))?;
    let want = MatObject::identity_pattern(k.grid_side());
    let side = k.grid_side();
    Ok(first_failure(pairs(side), |(x, y)| {
        let (l, r) = (got.get(x, y), want.get(x, y));
        (l != r).then(|| Witness::new("x,y", vec![x, y], l, r))
    }))
}
