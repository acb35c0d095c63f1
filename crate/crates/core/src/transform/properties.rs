//! Conservativity, involution, regular morphisms, Wiener membership and the
//! dual comparison map.

use crate::exactlin::Mat;
use crate::outcome::{first_failure, Outcome, Witness};
use crate::tensor::pairs;

use super::functor::{check_side, check_source_len};
use super::kernel::{Kernel, Membership, SchemeKernel, StarRoute};
use super::monoidal::{convolve, mat_compose, unit_object};
use super::objects::{DimObject, MatMorphismFamily, MatObject, MorphismFamily};
use super::{kcheck_morphism, khat, khat_morphism, unit_eta, TransformError};

/// Structural half of conservativity: every source index has nonempty
/// support, of the size the tensor predicts, and the kernel's anchor cell
/// (if any) has weight exactly one.
pub fn check_conservative<K: Kernel + ?Sized>(k: &K) -> Outcome {
    first_failure(0..k.source_len(), |a| {
        let support = (0..k.cells()).filter(|&c| k.weight(a, c) > 0).count();
        if support == 0 {
            return Some(Witness::new("a", vec![a], support, "nonzero"));
        }
        if let Some(want) = k.expected_support(a) {
            let total: usize = (0..k.cells()).map(|c| k.weight(a, c)).sum();
            if total != want {
                return Some(Witness::new("a", vec![a], total, want));
            }
        }
        let c = k.anchor_cell(a)?;
        let w = k.weight(a, c);
        (w != 1).then(|| Witness::new("a", vec![a], w, 1))
    })
}

/// Dynamic half: `K̂(α)` iso at every cell iff `α` iso at every index.
pub fn reflects_iso<K: Kernel + ?Sized>(
    k: &K,
    alpha: &MorphismFamily,
) -> Result<Outcome, TransformError> {
    let hat = khat_morphism(k, alpha)?;
    let side = k.grid_side();
    Ok(match (hat.first_non_iso(), alpha.first_non_iso()) {
        (None, Some(a)) => {
            let m = alpha.component(a);
            Outcome::fail(Witness::new(
                "a",
                vec![a],
                format!("rank{}", m.rank()),
                format!("{}x{}", m.rows(), m.cols()),
            ))
        }
        (Some(c), None) => {
            let m = hat.at(c);
            Outcome::fail(Witness::new(
                "x,y",
                vec![c / side, c % side],
                format!("rank{}", m.rank()),
                format!("{}x{}", m.rows(), m.cols()),
            ))
        }
        _ => Outcome::pass(),
    })
}

/// `f*(a) = f(a*)`.
pub fn star_source<K: Kernel + ?Sized>(k: &K, f: &DimObject) -> Result<DimObject, TransformError> {
    check_source_len(k, f)?;
    let inv = k.involution();
    Ok(DimObject::new(
        (0..f.len()).map(|a| f.get(inv.apply(a))).collect(),
    ))
}

/// `(α*)_a = (α_{a*})^T`, a morphism `g* → f*` for `α : f → g`.
pub fn star_source_morphism<K: Kernel + ?Sized>(
    k: &K,
    alpha: &MorphismFamily,
) -> Result<MorphismFamily, TransformError> {
    let source = star_source(k, alpha.target())?;
    let target = star_source(k, alpha.source())?;
    let inv = k.involution();
    let mats = (0..source.len())
        .map(|a| alpha.component(inv.apply(a)).dual())
        .collect();
    MorphismFamily::new(source, target, mats)
}

/// `F*(x, y) = F(y, x)`.
pub fn star_target(f: &MatObject) -> MatObject {
    let side = f.side();
    let mut out = MatObject::zero(side);
    for (x, y) in pairs(side) {
        out.set(x, y, f.get(y, x));
    }
    out
}

/// `(β*)(x, y) = β(y, x)^T`, a morphism `G* → F*` for `β : F → G`.
pub fn star_target_morphism(beta: &MatMorphismFamily) -> Result<MatMorphismFamily, TransformError> {
    let source = star_target(beta.target());
    let target = star_target(beta.source());
    let side = source.side();
    let mats = pairs(side).map(|(x, y)| beta.cell(y, x).dual()).collect();
    MatMorphismFamily::new(source, target, mats)
}

/// `K̂(f*) = K̂(f)*`. Scheme kernels compare the two dimension matrices
/// directly. A closed fusion ring goes through the hom-map:
/// `K̂(f*)(y,z) = f([y,z]*) = f([z,y]) = K̂(f)(z,y)`, each link checked.
pub fn check_star_preserved<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
) -> Result<Outcome, TransformError> {
    let side = k.grid_side();
    let lhs = khat(k, &star_source(k, f)?)?;
    let rhs = star_target(&khat(k, f)?);
    match k.star_route() {
        StarRoute::Direct => Ok(first_failure(pairs(side), |(x, y)| {
            let (l, r) = (lhs.get(x, y), rhs.get(x, y));
            (l != r).then(|| Witness::new("x,y", vec![x, y], l, r))
        })),
        StarRoute::ClosedHom(hom) => {
            let inv = k.involution();
            Ok(first_failure(pairs(side), |(y, z)| {
                let chain = [
                    lhs.get(y, z),
                    f.get(inv.apply(hom.hom(y, z))),
                    f.get(hom.hom(z, y)),
                    rhs.get(y, z),
                ];
                chain
                    .windows(2)
                    .find(|w| w[0] != w[1])
                    .map(|w| Witness::new("y,z", vec![y, z], w[0], w[1]))
            }))
        }
        StarRoute::Unavailable(reason) => Ok(Outcome::not_applicable(reason)),
    }
}

/// Star reverses products on the image: `K̂((f ⊗ g)*) = K̂(g)* ∘ K̂(f)*`.
pub fn check_star_antimonoidal<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
    g: &DimObject,
) -> Result<Outcome, TransformError> {
    if let StarRoute::Unavailable(reason) = k.star_route() {
        return Ok(Outcome::not_applicable(reason));
    }
    let lhs = khat(k, &star_source(k, &convolve(k.tensor(), f, g)?)?)?;
    let rhs = mat_compose(
        k.compose_order(),
        &star_target(&khat(k, g)?),
        &star_target(&khat(k, f)?),
    )?;
    let side = k.grid_side();
    Ok(first_failure(pairs(side), |(x, y)| {
        let (l, r) = (lhs.get(x, y), rhs.get(x, y));
        (l != r).then(|| Witness::new("x,y", vec![x, y], l, r))
    }))
}

/// `K̂Ǩ(α) ∘ K̂(η_f) = K̂(η_g) ∘ α`, both sides built as literal morphism
/// families and compared cell by cell.
pub fn is_regular<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
    g: &DimObject,
    alpha: &MatMorphismFamily,
) -> Result<Outcome, TransformError> {
    if *alpha.source() != khat(k, f)? || *alpha.target() != khat(k, g)? {
        return Err(TransformError::WrongEndpoints("from K̂(f) to K̂(g)"));
    }
    let lhs = khat_morphism(k, &kcheck_morphism(k, alpha)?)?
        .compose(&khat_morphism(k, &unit_eta(k, f)?)?)?;
    let rhs = khat_morphism(k, &unit_eta(k, g)?)?.compose(alpha)?;
    let side = k.grid_side();
    Ok(first_failure(0..k.cells(), |c| {
        (lhs.at(c) != rhs.at(c))
            .then(|| Witness::new("x,y", vec![c / side, c % side], lhs.at(c), rhs.at(c)))
    }))
}

/// Whether every class of the scheme carries a single matrix.
pub fn is_class_constant(k: &SchemeKernel, alpha: &MatMorphismFamily) -> bool {
    (0..k.source_len()).all(|s| {
        let cells = k.class_cells(s);
        cells.windows(2).all(|w| alpha.at(w[0]) == alpha.at(w[1]))
    })
}

pub fn wiener_membership<K: Kernel + ?Sized>(
    k: &K,
    target: &MatObject,
) -> Result<Membership, TransformError> {
    check_side(k, target)?;
    k.wiener_membership(target)
}

/// The comparison `f* ⊗ g* → (g ⊗ f)*` in the discrete case.
///
/// Block `(a, b)` of `(f* ⊗ g*)(c)` is `f(Sa) ⊗ g(Sb) ⊗ k^{N(a,b,c)}`; it is
/// sent to block `(Sb, Sa)` of `(g ⊗ f)(Sc)`, which has the same
/// multiplicity by precompactness, swapping the first two tensor factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualComparison {
    source: DimObject,
    target: DimObject,
    /// `maps[c][i]` is the target coordinate of source basis vector `i`.
    maps: Vec<Vec<usize>>,
    unit_source: DimObject,
    unit_target: DimObject,
}

impl DualComparison {
    pub fn source(&self) -> &DimObject {
        &self.source
    }

    pub fn target(&self) -> &DimObject {
        &self.target
    }

    /// Component at `c` as an explicit permutation matrix.
    pub fn component(&self, c: usize) -> Mat {
        let map = &self.maps[c];
        let mut m = Mat::zeros(self.target.get(c), map.len());
        for (i, &j) in map.iter().enumerate() {
            m.set(j, i, crate::exactlin::int(1));
        }
        m
    }

    /// Dims agree at every index, every component is a bijection, and
    /// `J* = J`.
    pub fn outcome(&self) -> Outcome {
        let dims = first_failure(0..self.source.len(), |c| {
            let (l, r) = (self.source.get(c), self.target.get(c));
            (l != r).then(|| Witness::new("c", vec![c], l, r))
        });
        let bijective = first_failure(0..self.maps.len(), |c| {
            let map = &self.maps[c];
            let mut hit = vec![false; self.target.get(c)];
            let mut images = 0;
            for &j in map {
                if j < hit.len() && !hit[j] {
                    hit[j] = true;
                    images += 1;
                }
            }
            (images != map.len() || images != hit.len())
                .then(|| Witness::new("c", vec![c], images, self.target.get(c)))
        });
        let unit = first_failure(0..self.unit_source.len(), |c| {
            let (l, r) = (self.unit_source.get(c), self.unit_target.get(c));
            (l != r).then(|| Witness::new("c", vec![c], l, r))
        });
        dims.and(bijective).and(unit)
    }
}

pub fn dual_comparison<K: Kernel + ?Sized>(
    k: &K,
    f: &DimObject,
    g: &DimObject,
) -> Result<DualComparison, TransformError> {
    let n = k.tensor();
    let inv = k.involution();
    let pre = n.check_precompact(inv, k.unit());
    if !pre.is_pass() {
        let at = pre.witness().map(|w| w.to_string()).unwrap_or_default();
        return Err(TransformError::Precondition(format!(
            "not precompact: {at}"
        )));
    }
    let m = n.size();
    let weights = n.to_usize()?;
    let w = |a: usize, b: usize, c: usize| weights[(a * m + b) * m + c];

    let source = convolve(n, &star_source(k, f)?, &star_source(k, g)?)?;
    let target = star_source(k, &convolve(n, g, f)?)?;

    let mut maps = Vec::with_capacity(m);
    for c in 0..m {
        let sc = inv.apply(c);
        // offsets of the (b', a') blocks inside (g ⊗ f)(Sc)
        let mut offsets = vec![0; m * m];
        let mut acc = 0;
        for (b, a) in pairs(m) {
            offsets[b * m + a] = acc;
            acc += g.get(b) * f.get(a) * w(b, a, sc);
        }
        let mut map = Vec::with_capacity(source.get(c));
        for (a, b) in pairs(m) {
            let mult = w(a, b, c);
            let (fa, gb) = (f.get(inv.apply(a)), g.get(inv.apply(b)));
            let base = offsets[inv.apply(b) * m + inv.apply(a)];
            for i in 0..fa {
                for j in 0..gb {
                    for t in 0..mult {
                        map.push(base + (j * fa + i) * mult + t);
                    }
                }
            }
        }
        maps.push(map);
    }
    let unit = unit_object(k);
    Ok(DualComparison {
        source,
        target,
        maps,
        unit_target: star_source(k, &unit)?,
        unit_source: unit,
    })
}
