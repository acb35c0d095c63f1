//! `K̂ ⊣ Ǩ` on objects and morphisms, with the unit and counit.
//!
//! Layouts:
//! * `K̂(f)(cell) = ⊕_a f(a) ⊗ k^{K(a,cell)}`; basis vector `e_i ⊗ e_j` of
//!   summand `a` sits at `off_a + i·K + j`.
//! * `Ǩ(F)(a) = ⊕_cell ⊕_{j < K(a,cell)} F(cell)`; coordinate `r` of copy
//!   `j` at `cell` sits at `off_cell + j·F(cell) + r`.

use crate::exactlin::{int, Mat};
use crate::outcome::{first_failure, Outcome, Witness};

use super::kernel::Kernel;
use super::objects::{DimObject, MatMorphismFamily, MatObject, MorphismFamily};
use super::TransformError;

pub(super) fn check_source_len<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
) -> Result<(), TransformError> {
    if f.len() != k.source_len() {
        return Err(TransformError::IndexMismatch {
            what: "source indices",
            expected: k.source_len(),
            found: f.len(),
        });
    }
    Ok(())
}

pub(super) fn check_side<K: Kernel + ?Sized>(k: &K, f: &MatObject) -> Result<(), TransformError> {
    if f.side() != k.grid_side() {
        return Err(TransformError::IndexMismatch {
            what: "grid side",
            expected: k.grid_side(),
            found: f.side(),
        });
    }
    Ok(())
}

pub(super) fn mul_add(acc: usize, a: usize, b: usize) -> Result<usize, TransformError> {
    a.checked_mul(b)
        .and_then(|p| acc.checked_add(p))
        .ok_or(TransformError::Overflow)
}

/// `K̂(f)(cell) = sum_a K(a, cell) f(a)`.
pub fn khat<K: Kernel + ?Sized>(k: &K, f: &DimObject) -> Result<MatObject, TransformError> {
    check_source_len(k, f)?;
    let dims = (0..k.cells())
        .map(|c| (0..k.source_len()).try_fold(0, |acc, a| mul_add(acc, k.weight(a, c), f.get(a))))
        .collect::<Result<_, _>>()?;
    MatObject::new(k.grid_side(), dims)
}

/// `K̂(α)(cell) = ⊕_a α_a ⊗ 1_{K(a,cell)}`.
pub fn khat_morphism<K: Kernel + ?Sized>(
    k: &K,
    alpha: &MorphismFamily,
) -> Result<MatMorphismFamily, TransformError> {
    let source = khat(k, alpha.source())?;
    let target = khat(k, alpha.target())?;
    let mats = (0..k.cells())
        .map(|c| {
            let blocks: Vec<Mat> = (0..k.source_len())
                .filter(|&a| k.weight(a, c) > 0)
                .map(|a| alpha.component(a).kron(&Mat::identity(k.weight(a, c))))
                .collect();
            Mat::block_diag(&blocks)
        })
        .collect();
    MatMorphismFamily::new(source, target, mats)
}

/// `Ǩ(F)(a) = sum_cell K(a, cell) F(cell)`: the end over the discrete grid
/// of `[k^{K(a,cell)}, F(cell)]`.
pub fn kcheck<K: Kernel + ?Sized>(k: &K, f: &MatObject) -> Result<DimObject, TransformError> {
    check_side(k, f)?;
    let dims = (0..k.source_len())
        .map(|a| (0..k.cells()).try_fold(0, |acc, c| mul_add(acc, k.weight(a, c), f.at(c))))
        .collect::<Result<_, _>>()?;
    Ok(DimObject::new(dims))
}

/// `Ǩ(β)_a = ⊕_cell 1_{K(a,cell)} ⊗ β_cell`.
pub fn kcheck_morphism<K: Kernel + ?Sized>(
    k: &K,
    beta: &MatMorphismFamily,
) -> Result<MorphismFamily, TransformError> {
    let source = kcheck(k, beta.source())?;
    let target = kcheck(k, beta.target())?;
    let mats = (0..k.source_len())
        .map(|a| {
            let blocks: Vec<Mat> = (0..k.cells())
                .filter(|&c| k.weight(a, c) > 0)
                .map(|c| Mat::identity(k.weight(a, c)).kron(beta.at(c)))
                .collect();
            Mat::block_diag(&blocks)
        })
        .collect();
    MorphismFamily::new(source, target, mats)
}

/// Offset of summand `a` inside `K̂(f)(cell)`.
fn khat_offset<K: Kernel + ?Sized>(k: &K, f: &DimObject, a: usize, cell: usize) -> usize {
    (0..a).map(|b| f.get(b) * k.weight(b, cell)).sum()
}

/// Offsets of each cell block inside `Ǩ(F)(a)`.
fn kcheck_offsets<K: Kernel + ?Sized>(k: &K, f: &MatObject, a: usize) -> Vec<usize> {
    let mut offs = Vec::with_capacity(k.cells());
    let mut acc = 0;
    for c in 0..k.cells() {
        offs.push(acc);
        acc += k.weight(a, c) * f.at(c);
    }
    offs
}

/// Unit `η_f : f → ǨK̂(f)`. Component `a` sends `e_i` to the sum over all
/// `(cell, j)` of `e_i ⊗ e_j` placed in copy `j` of `K̂(f)(cell)`; for a
/// scheme kernel this is `|a|` stacked identity blocks.
pub fn unit_eta<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
) -> Result<MorphismFamily, TransformError> {
    let image = khat(k, f)?;
    let target = kcheck(k, &image)?;
    let mats = (0..k.source_len())
        .map(|a| {
            let mut m = Mat::zeros(target.get(a), f.get(a));
            let offs = kcheck_offsets(k, &image, a);
            for c in 0..k.cells() {
                let w = k.weight(a, c);
                let base = khat_offset(k, f, a, c);
                for j in 0..w {
                    for i in 0..f.get(a) {
                        m.set(offs[c] + j * image.at(c) + base + i * w + j, i, int(1));
                    }
                }
            }
            m
        })
        .collect();
    MorphismFamily::new(f.clone(), target, mats)
}

/// Counit `ε_F : K̂Ǩ(F) → F`. Component `cell` evaluates each copy
/// `φ ⊗ e_j` (summand `a`) at coordinate `(cell, j)` of `φ ∈ Ǩ(F)(a)`.
pub fn counit_eps<K: Kernel + ?Sized>(
    k: &K,
    f: &MatObject,
) -> Result<MatMorphismFamily, TransformError> {
    let adj = kcheck(k, f)?;
    let source = khat(k, &adj)?;
    let offsets: Vec<Vec<usize>> = (0..k.source_len())
        .map(|a| kcheck_offsets(k, f, a))
        .collect();
    let mats = (0..k.cells())
        .map(|c| {
            let d = f.at(c);
            let mut m = Mat::zeros(d, source.at(c));
            for a in 0..k.source_len() {
                let w = k.weight(a, c);
                let base = khat_offset(k, &adj, a, c);
                for j in 0..w {
                    for r in 0..d {
                        let b = offsets[a][c] + j * d + r;
                        m.set(r, base + b * w + j, int(1));
                    }
                }
            }
            m
        })
        .collect();
    MatMorphismFamily::new(source, f.clone(), mats)
}

/// Both triangle identities as literal matrix equalities:
/// `ε_{K̂f} ∘ K̂(η_f) = 1` per cell and `Ǩ(ε_F) ∘ η_{ǨF} = 1` per index.
pub fn check_triangles<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
    big_f: &MatObject,
) -> Result<Outcome, TransformError> {
    let side = k.grid_side();
    let image = khat(k, f)?;
    let left = counit_eps(k, &image)?.compose(&khat_morphism(k, &unit_eta(k, f)?)?)?;
    let left_ok = first_failure(0..k.cells(), |c| {
        let id = Mat::identity(image.at(c));
        (*left.at(c) != id).then(|| Witness::new("x,y", vec![c / side, c % side], left.at(c), id))
    });

    let adj = kcheck(k, big_f)?;
    let right = kcheck_morphism(k, &counit_eps(k, big_f)?)?.compose(&unit_eta(k, &adj)?)?;
    let right_ok = first_failure(0..k.source_len(), |a| {
        let id = Mat::identity(adj.get(a));
        (*right.component(a) != id).then(|| Witness::new("a", vec![a], right.component(a), id))
    });
    Ok(left_ok.and(right_ok))
}

/// A coordinate projection left inverse of `η_{f,a}`, taken at the first
/// cell in the support of `a`. `None` when `a` has empty support and
/// `f(a) > 0`.
pub fn eta_left_inverse<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
    a: usize,
) -> Result<Option<Mat>, TransformError> {
    let image = khat(k, f)?;
    let rows = kcheck(k, &image)?.get(a);
    let d = f.get(a);
    if d == 0 {
        return Ok(Some(Mat::zeros(0, rows)));
    }
    let Some(c) = (0..k.cells()).find(|&c| k.weight(a, c) > 0) else {
        return Ok(None);
    };
    let offs = kcheck_offsets(k, &image, a);
    let base = khat_offset(k, f, a, c);
    let w = k.weight(a, c);
    let mut p = Mat::zeros(d, rows);
    for i in 0..d {
        p.set(i, offs[c] + base + i * w, int(1));
    }
    Ok(Some(p))
}

/// `η_f` is a split monomorphism: every component has a coordinate-projection
/// left inverse.
pub fn check_split_mono<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
) -> Result<Outcome, TransformError> {
    let eta = unit_eta(k, f)?;
    let mut out = Outcome::pass();
    for a in 0..k.source_len() {
        let id = Mat::identity(f.get(a));
        let ok = match eta_left_inverse(k, f, a)? {
            Some(p) => p.mul(eta.component(a))? == id,
            None => false,
        };
        if !ok {
            out = Outcome::fail(Witness::new("a", vec![a], eta.component(a), id));
            break;
        }
    }
    Ok(out)
}

/// `ǨK̂(f)` against the kernel's tensor-side prediction (for a scheme,
/// `|s| f(s)` with `|s| = n N(s, s*, diagonal)`).
pub fn check_round_trip<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
) -> Result<Outcome, TransformError> {
    let got = kcheck(k, &khat(k, f)?)?;
    let want = k.round_trip_prediction(f)?;
    Ok(first_failure(0..k.source_len(), |a| {
        (got.get(a) != want.get(a)).then(|| Witness::new("a", vec![a], got.get(a), want.get(a)))
    }))
}
