//! Finite association schemes.
//!
//! A scheme is given by a [`ClassMatrix`]: for every ordered pair of points
//! `(x, y)` the index of the relation (class) containing it. [`validate`]
//! checks the axioms (diagonal class, closure under transposition,
//! well-defined intersection numbers) and returns a canonically labelled
//! [`AssociationScheme`].

mod generate;

pub use generate::{gen_cyclic, gen_group, gen_hamming, gen_johnson, GroupError, GroupTable};

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::exactlin::{int, Mat, ShapeError};
use crate::outcome::{first_failure, Outcome, Witness};
use crate::tensor::{pairs, IntersectionTensor, Involution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("class matrix needs {expected} cells for {n} points, got {found}")]
    CellCount {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("class matrix has no points")]
    Empty,
    #[error("bad generator parameter: {0}")]
    BadParameter(String),
    #[error("class label {missing} is unused (labels must be 0..{m})")]
    UnusedLabel { missing: usize, m: usize },
    #[error(
        "diagonal is not a single class: ({x},{x}) and ({y},{y}) lie in classes {cx} and {cy}"
    )]
    DiagonalSplit {
        x: usize,
        y: usize,
        cx: usize,
        cy: usize,
    },
    #[error("diagonal class also contains off-diagonal pair ({x},{y})")]
    DiagonalImpure { x: usize, y: usize },
    #[error("class {class} is not closed under transposition: ({x},{y}) is in it but ({y},{x}) lies in class {other} instead of {expected}")]
    NotTransposeClosed {
        class: usize,
        x: usize,
        y: usize,
        other: usize,
        expected: usize,
    },
    #[error("intersection number N({s},{t},{r}) is ill-defined: pair ({x},{y}) gives {count} but ({x0},{y0}) gives {count0}")]
    IllDefined {
        s: usize,
        t: usize,
        r: usize,
        x0: usize,
        y0: usize,
        count0: usize,
        x: usize,
        y: usize,
        count: usize,
    },
}

/// Raw class assignment on `X x X`, row-major. Labels must cover `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassMatrix {
    n: usize,
    m: usize,
    cells: Vec<usize>,
}

impl ClassMatrix {
    pub fn new(n: usize, cells: Vec<usize>) -> Result<Self, SchemeError> {
        if n == 0 {
            return Err(SchemeError::Empty);
        }
        if cells.len() != n * n {
            return Err(SchemeError::CellCount {
                n,
                expected: n * n,
                found: cells.len(),
            });
        }
        let m = cells.iter().max().map_or(0, |&c| c + 1);
        let mut used = vec![false; m];
        for &c in &cells {
            used[c] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(SchemeError::UnusedLabel { missing, m });
        }
        Ok(ClassMatrix { n, m, cells })
    }

    /// Builds from a closure `class_of(x, y)`, then relabels densely by first
    /// occurrence so arbitrary labels are allowed.
    pub fn from_fn<F>(n: usize, mut class_of: F) -> Result<Self, SchemeError>
    where
        F: FnMut(usize, usize) -> usize,
    {
        let mut labels: Vec<usize> = Vec::new();
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let raw = class_of(x, y);
                let pos = labels.iter().position(|&l| l == raw).unwrap_or_else(|| {
                    labels.push(raw);
                    labels.len() - 1
                });
                cells.push(pos);
            }
        }
        ClassMatrix::new(n, cells)
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> usize {
        self.m
    }

    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }
}

/// A validated scheme with canonical labels: the diagonal is class 0 and the
/// other classes are numbered by first occurrence in a row-major scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme {
    classes: ClassMatrix,
    involution: Involution,
    sizes: Vec<usize>,
}

/// Index of the diagonal class after canonicalization.
pub const DIAGONAL: usize = 0;

/// Validates the scheme axioms and canonicalizes labels.
pub fn validate(cm: &ClassMatrix) -> Result<AssociationScheme, SchemeError> {
    let n = cm.n;
    let d = cm.class_of(0, 0);
    for x in 1..n {
        let c = cm.class_of(x, x);
        if c != d {
            return Err(SchemeError::DiagonalSplit {
                x: 0,
                y: x,
                cx: d,
                cy: c,
            });
        }
    }
    // canonical relabelling: diagonal first, then first occurrence
    let mut relabel = vec![usize::MAX; cm.m];
    relabel[d] = DIAGONAL;
    let mut next = 1;
    for &c in &cm.cells {
        if relabel[c] == usize::MAX {
            relabel[c] = next;
            next += 1;
        }
    }
    let classes = ClassMatrix {
        n,
        m: cm.m,
        cells: cm.cells.iter().map(|&c| relabel[c]).collect(),
    };

    // transposition: the first pair of each class fixes the partner class
    let mut partner = vec![usize::MAX; classes.m];
    for (x, y) in pairs(n) {
        let s = classes.class_of(x, y);
        let t = classes.class_of(y, x);
        if partner[s] == usize::MAX {
            partner[s] = t;
        } else if partner[s] != t {
            return Err(SchemeError::NotTransposeClosed {
                class: s,
                x,
                y,
                other: t,
                expected: partner[s],
            });
        }
    }
    // all pairs of s land in partner[s] and vice versa, so s* = partner[s]
    let involution = Involution::new(partner).expect("transpose partner map is involutive");
    for (x, y) in pairs(n) {
        if x != y && classes.class_of(x, y) == DIAGONAL {
            return Err(SchemeError::DiagonalImpure { x, y });
        }
    }

    let mut sizes = vec![0; classes.m];
    for &c in &classes.cells {
        sizes[c] += 1;
    }
    let scheme = AssociationScheme {
        classes,
        involution,
        sizes,
    };
    scheme.intersection_numbers()?;
    Ok(scheme)
}

impl AssociationScheme {
    pub fn points(&self) -> usize {
        self.classes.n
    }

    pub fn classes(&self) -> usize {
        self.classes.m
    }

    pub fn class_matrix(&self) -> &ClassMatrix {
        &self.classes
    }

    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.classes.class_of(x, y)
    }

    pub fn diagonal_class(&self) -> usize {
        DIAGONAL
    }

    pub fn involution(&self) -> &Involution {
        &self.involution
    }

    /// Number of pairs `|s|` in each class.
    pub fn class_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Valency `k_s = |s| / n`.
    pub fn valency(&self, s: usize) -> usize {
        self.sizes[s] / self.points()
    }

    /// Number of `z` with `(x,z)` in `s` and `(z,y)` in `t`, for every `(s, t)`
    /// at once, as an `m x m` row-major table.
    fn path_counts(&self, x: usize, y: usize) -> Vec<usize> {
        let m = self.classes();
        let mut counts = vec![0; m * m];
        for z in 0..self.points() {
            counts[self.class_of(x, z) * m + self.class_of(z, y)] += 1;
        }
        counts
    }

    /// Intersection numbers from the first pair of each class, verified
    /// against every other pair.
    pub fn intersection_numbers(&self) -> Result<IntersectionTensor, SchemeError> {
        let n = self.points();
        let m = self.classes();
        let mut reps: Vec<Option<(usize, usize, Vec<usize>)>> = vec![None; m];
        for (x, y) in pairs(n) {
            let r = self.class_of(x, y);
            let counts = self.path_counts(x, y);
            match &reps[r] {
                None => reps[r] = Some((x, y, counts)),
                Some((x0, y0, base)) => {
                    if let Some(i) = (0..m * m).find(|&i| base[i] != counts[i]) {
                        return Err(SchemeError::IllDefined {
                            s: i / m,
                            t: i % m,
                            r,
                            x0: *x0,
                            y0: *y0,
                            count0: base[i],
                            x,
                            y,
                            count: counts[i],
                        });
                    }
                }
            }
        }
        let mut tensor = IntersectionTensor::zeros(m);
        for (r, rep) in reps.into_iter().enumerate() {
            let (_, _, counts) = rep.expect("every class is nonempty");
            for (i, c) in counts.into_iter().enumerate() {
                if c > 0 {
                    tensor.set(i / m, i % m, r, BigUint::from(c));
                }
            }
        }
        Ok(tensor)
    }

    /// 0/1 adjacency matrix `M_s` over `X x X`.
    pub fn adjacency(&self, s: usize) -> Mat {
        let n = self.points();
        let mut a = Mat::zeros(n, n);
        for (x, y) in pairs(n) {
            if self.class_of(x, y) == s {
                a.set(x, y, int(1));
            }
        }
        a
    }

    /// Verifies `M_s M_t = sum_r N(s,t,r) M_r` as exact integer matrices for
    /// all class pairs. The witness is `(s, t, x, y)` with the two entries.
    pub fn bose_mesner_closure(&self, tensor: &IntersectionTensor) -> Result<Outcome, ShapeError> {
        let m = self.classes();
        let mats: Vec<Mat> = (0..m).map(|s| self.adjacency(s)).collect();
        for (s, t) in pairs(m) {
            let prod = mats[s].mul(&mats[t])?;
            let mut combo = Mat::zeros(self.points(), self.points());
            for (r, mr) in mats.iter().enumerate() {
                let coeff = tensor.get(s, t, r);
                if !coeff.is_zero() {
                    combo = combo.add(&mr.scale(&int_big(coeff)))?;
                }
            }
            if prod != combo {
                let (x, y) = pairs(self.points())
                    .find(|&(x, y)| prod.get(x, y) != combo.get(x, y))
                    .expect("matrices differ somewhere");
                return Ok(Outcome::fail(Witness::new(
                    "s,t,x,y",
                    vec![s, t, x, y],
                    prod.get(x, y),
                    combo.get(x, y),
                )));
            }
        }
        Ok(Outcome::pass())
    }

    /// Same scheme with class labels permuted (`perm[old] = new`). The result
    /// is not canonically labelled; it is meant for relabelling-invariance
    /// checks on tensors and involutions.
    pub fn relabelled_involution(&self, perm: &[usize]) -> Involution {
        let mut map = vec![0; self.classes()];
        for s in 0..self.classes() {
            map[perm[s]] = perm[self.involution.apply(s)];
        }
        Involution::new(map).expect("conjugate of an involution")
    }
}

fn int_big(v: &BigUint) -> crate::exactlin::Scalar {
    crate::exactlin::Scalar::from_integer(num_bigint::BigInt::from(v.clone()))
}

/// Proassociativity of the intersection numbers.
pub fn check_proassociativity(tensor: &IntersectionTensor) -> Outcome {
    tensor.check_proassociativity()
}

/// `N(s,t,r) = N(t*,s*,r*)` together with `J* = J`.
pub fn check_precompact(tensor: &IntersectionTensor, involution: &Involution) -> Outcome {
    tensor.check_precompact(involution, DIAGONAL)
}

/// `N(s,t,r*) = N(t,r,s*)`.
pub fn check_compact(tensor: &IntersectionTensor, involution: &Involution) -> Outcome {
    tensor.check_compact(involution)
}

/// Checks `sum_r N(s,t,r) k_r = k_s k_t`, an exact consequence of counting
/// paths out of a fixed point.
pub fn check_valencies(scheme: &AssociationScheme, tensor: &IntersectionTensor) -> Outcome {
    let m = scheme.classes();
    first_failure(pairs(m), |(s, t)| {
        let lhs: BigUint = (0..m)
            .map(|r| tensor.get(s, t, r) * BigUint::from(scheme.valency(r)))
            .sum();
        let rhs = BigUint::from(scheme.valency(s) * scheme.valency(t));
        (lhs != rhs).then(|| Witness::new("s,t", vec![s, t], lhs, rhs))
    })
}
