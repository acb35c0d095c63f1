//! Objects and morphisms of the two functor categories.
//!
//! Source side: functors on a discrete index set, i.e. dimension vectors
//! ([`DimObject`]) with one matrix per index for morphisms
//! ([`MorphismFamily`]). Target side: functors on a square grid of cells,
//! i.e. dimension matrices ([`MatObject`]) with one matrix per cell
//! ([`MatMorphismFamily`]). Cells are numbered row-major.

use std::fmt;

use crate::exactlin::Mat;

use super::TransformError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimObject(Vec<usize>);

impl DimObject {
    pub fn new(dims: Vec<usize>) -> Self {
        DimObject(dims)
    }

    pub fn zero(len: usize) -> Self {
        DimObject(vec![0; len])
    }

    /// Representable at `i`: dimension one there, zero elsewhere.
    pub fn delta(len: usize, i: usize) -> Self {
        let mut d = vec![0; len];
        d[i] = 1;
        DimObject(d)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for DimObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dimension matrix over a `side x side` grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatObject {
    side: usize,
    dims: Vec<usize>,
}

impl MatObject {
    pub fn new(side: usize, dims: Vec<usize>) -> Result<Self, TransformError> {
        if dims.len() != side * side {
            return Err(TransformError::IndexMismatch {
                what: "grid cells",
                expected: side * side,
                found: dims.len(),
            });
        }
        Ok(MatObject { side, dims })
    }

    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self, TransformError> {
        let side = rows.len();
        let dims: Vec<usize> = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        MatObject::new(side, dims)
    }

    pub fn zero(side: usize) -> Self {
        MatObject {
            side,
            dims: vec![0; side * side],
        }
    }

    /// One on the diagonal, zero elsewhere: the unit of both target tensor
    /// products.
    pub fn identity_pattern(side: usize) -> Self {
        let mut o = MatObject::zero(side);
        for x in 0..side {
            o.dims[x * side + x] = 1;
        }
        o
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> usize {
        self.dims.len()
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.dims[x * self.side + y]
    }

    pub fn at(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn set(&mut self, x: usize, y: usize, d: usize) {
        self.dims[x * self.side + y] = d;
    }
}

impl fmt::Display for MatObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .dims
            .chunks(self.side.max(1))
            .map(|r| {
                let cells: Vec<String> = r.iter().map(usize::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

fn check_cell_shapes(
    mats: &[Mat],
    source: &[usize],
    target: &[usize],
) -> Result<(), TransformError> {
    if mats.len() != source.len() || source.len() != target.len() {
        return Err(TransformError::IndexMismatch {
            what: "morphism components",
            expected: source.len(),
            found: mats.len(),
        });
    }
    for (i, m) in mats.iter().enumerate() {
        if m.shape() != (target[i], source[i]) {
            return Err(TransformError::ComponentShape {
                index: i,
                expected: (target[i], source[i]),
                found: m.shape(),
            });
        }
    }
    Ok(())
}

/// Natural transformation between source functors: component `i` is a
/// `target(i) x source(i)` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismFamily {
    source: DimObject,
    target: DimObject,
    mats: Vec<Mat>,
}

impl MorphismFamily {
    pub fn new(
        source: DimObject,
        target: DimObject,
        mats: Vec<Mat>,
    ) -> Result<Self, TransformError> {
        check_cell_shapes(&mats, source.dims(), target.dims())?;
        Ok(MorphismFamily {
            source,
            target,
            mats,
        })
    }

    pub fn identity(obj: &DimObject) -> Self {
        MorphismFamily {
            source: obj.clone(),
            target: obj.clone(),
            mats: obj.dims().iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    pub fn source(&self) -> &DimObject {
        &self.source
    }

    pub fn target(&self) -> &DimObject {
        &self.target
    }

    pub fn component(&self, i: usize) -> &Mat {
        &self.mats[i]
    }

    pub fn components(&self) -> &[Mat] {
        &self.mats
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &MorphismFamily) -> Result<MorphismFamily, TransformError> {
        if rhs.target != self.source {
            return Err(TransformError::NotComposable);
        }
        let mats = self
            .mats
            .iter()
            .zip(&rhs.mats)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<_, _>>()?;
        Ok(MorphismFamily {
            source: rhs.source.clone(),
            target: self.target.clone(),
            mats,
        })
    }

    /// Index of the first non-invertible component, if any.
    pub fn first_non_iso(&self) -> Option<usize> {
        self.mats.iter().position(|m| !m.is_iso())
    }
}

/// Natural transformation between target functors, one matrix per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatMorphismFamily {
    source: MatObject,
    target: MatObject,
    mats: Vec<Mat>,
}

impl MatMorphismFamily {
    pub fn new(
        source: MatObject,
        target: MatObject,
        mats: Vec<Mat>,
    ) -> Result<Self, TransformError> {
        if source.side != target.side {
            return Err(TransformError::IndexMismatch {
                what: "grid side",
                expected: source.side,
                found: target.side,
            });
        }
        check_cell_shapes(&mats, source.dims(), target.dims())?;
        Ok(MatMorphismFamily {
            source,
            target,
            mats,
        })
    }

    pub fn identity(obj: &MatObject) -> Self {
        MatMorphismFamily {
            source: obj.clone(),
            target: obj.clone(),
            mats: obj.dims().iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    pub fn source(&self) -> &MatObject {
        &self.source
    }

    pub fn target(&self) -> &MatObject {
        &self.target
    }

    pub fn cell(&self, x: usize, y: usize) -> &Mat {
        &self.mats[x * self.source.side + y]
    }

    pub fn at(&self, cell: usize) -> &Mat {
        &self.mats[cell]
    }

    pub fn cells(&self) -> &[Mat] {
        &self.mats
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &MatMorphismFamily) -> Result<MatMorphismFamily, TransformError> {
        if rhs.target != self.source {
            return Err(TransformError::NotComposable);
        }
        let mats = self
            .mats
            .iter()
            .zip(&rhs.mats)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<_, _>>()?;
        Ok(MatMorphismFamily {
            source: rhs.source.clone(),
            target: self.target.clone(),
            mats,
        })
    }

    pub fn first_non_iso(&self) -> Option<usize> {
        self.mats.iter().position(|m| !m.is_iso())
    }
}
