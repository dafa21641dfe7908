//! Length-2 chain complexes `C2 → C1 → C0`, their (co)homology, and chain maps.
//!
//! Only the chain orientation is stored. Cochain statements go through
//! [`ChainComplex::transposed`], which reverses the degrees: the transposed
//! complex has `d2 = d1ᵀ` and `d1 = d2ᵀ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2linalg::{
    image_basis, kernel_basis, quotient_basis, solve, BitVec, F2Matrix, Subspace,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainComplex {
    d2: F2Matrix,
    d1: F2Matrix,
}

impl ChainComplex {
    /// Checks shapes and `d1 · d2 = 0`.
    pub fn validate(d2: F2Matrix, d1: F2Matrix) -> Result<Self> {
        if d1.ncols() != d2.nrows() {
            return Err(Error::DimensionMismatch {
                context: "d1 columns vs d2 rows",
                expected: d2.nrows(),
                found: d1.ncols(),
            });
        }
        if !d1.mul(&d2).is_zero() {
            return Err(Error::NonZeroComposition);
        }
        Ok(Self { d2, d1 })
    }

    /// The complex with every space zero-dimensional.
    #[must_use]
    pub fn zero() -> Self {
        Self {
            d2: F2Matrix::zeros(0, 0),
            d1: F2Matrix::zeros(0, 0),
        }
    }

    #[must_use]
    pub fn d2(&self) -> &F2Matrix {
        &self.d2
    }

    #[must_use]
    pub fn d1(&self) -> &F2Matrix {
        &self.d1
    }

    /// Dimension of `C_degree`.
    ///
    /// # Panics
    /// If `degree > 2`.
    #[must_use]
    pub fn dim(&self, degree: usize) -> usize {
        match degree {
            2 => self.d2.ncols(),
            1 => self.d2.nrows(),
            0 => self.d1.nrows(),
            _ => panic!("degree {degree} out of range"),
        }
    }

    #[must_use]
    pub fn dims(&self) -> [usize; 3] {
        [self.dim(0), self.dim(1), self.dim(2)]
    }

    /// Boundary out of `C_degree`; the zero map for degree 0 and into degree 2.
    #[must_use]
    pub fn boundary(&self, degree: usize) -> F2Matrix {
        match degree {
            3 => F2Matrix::zeros(self.dim(2), 0),
            2 => self.d2.clone(),
            1 => self.d1.clone(),
            0 => F2Matrix::zeros(0, self.dim(0)),
            _ => panic!("degree {degree} out of range"),
        }
    }

    /// Cochain complex read as a chain complex with degrees reversed.
    #[must_use]
    pub fn transposed(&self) -> Self {
        Self {
            d2: self.d1.transpose(),
            d1: self.d2.transpose(),
        }
    }

    /// Cycles `ker ∂_degree`.
    #[must_use]
    pub fn cycles(&self, degree: usize) -> Subspace {
        kernel_basis(&self.boundary(degree))
    }

    /// Boundaries `im ∂_{degree+1}`.
    #[must_use]
    pub fn boundaries(&self, degree: usize) -> Subspace {
        image_basis(&self.boundary(degree + 1))
    }
}

/// Block-diagonal sum; `a`'s coordinates come first in every degree.
#[must_use]
pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    ChainComplex {
        d2: F2Matrix::block_diag(&a.d2, &b.d2),
        d1: F2Matrix::block_diag(&a.d1, &b.d1),
    }
}

/// A basis of `H_n = ker ∂_n / im ∂_{n+1}` given by representatives.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HomologyBasis {
    degree: usize,
    cohomological: bool,
    representatives: Vec<BitVec>,
    cycles: Subspace,
    boundaries: Subspace,
}

impl HomologyBasis {
    /// Uses caller-chosen representatives; they must be cycles, independent
    /// modulo boundaries, and span the homology.
    pub fn from_representatives(
        c: &ChainComplex,
        degree: usize,
        representatives: Vec<BitVec>,
    ) -> Result<Self> {
        let cycles = c.cycles(degree);
        let boundaries = c.boundaries(degree);
        for r in &representatives {
            if r.len() != c.dim(degree) {
                return Err(Error::DimensionMismatch {
                    context: "homology representative length",
                    expected: c.dim(degree),
                    found: r.len(),
                });
            }
            if !cycles.contains(r) {
                return Err(Error::NotInKernel { degree });
            }
        }
        let expected = cycles.dim() - boundaries.dim();
        let spanned = Subspace::from_generators(
            c.dim(degree),
            representatives.iter().chain(boundaries.basis()).cloned(),
        )?;
        if representatives.len() != expected || spanned.dim() != cycles.dim() {
            return Err(Error::InvalidLogicals(format!(
                "{} representatives do not form a basis of a {expected}-dimensional homology",
                representatives.len()
            )));
        }
        Ok(Self {
            degree,
            cohomological: false,
            representatives,
            cycles,
            boundaries,
        })
    }

    #[must_use]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[must_use]
    pub fn is_cohomological(&self) -> bool {
        self.cohomological
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    #[must_use]
    pub fn representatives(&self) -> &[BitVec] {
        &self.representatives
    }

    #[must_use]
    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    #[must_use]
    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Coordinates of the class `[v]` in this basis.
    pub fn coordinates(&self, v: &BitVec) -> Result<BitVec> {
        if !self.cycles.contains(v) {
            return Err(Error::NotInKernel {
                degree: self.degree,
            });
        }
        let cols: Vec<BitVec> = self
            .representatives
            .iter()
            .chain(self.boundaries.basis())
            .cloned()
            .collect();
        let m = F2Matrix::from_columns(self.cycles.ambient_dim(), &cols)?;
        let x = solve(&m, v)?.ok_or(Error::NotInKernel {
            degree: self.degree,
        })?;
        Ok(x.slice(0, self.dim()))
    }

    /// The representative combination `Σ c_i r_i`.
    #[must_use]
    pub fn combine(&self, coords: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.cycles.ambient_dim());
        for i in coords.iter_ones() {
            v += &self.representatives[i];
        }
        v
    }

    fn into_cohomology(mut self, degree: usize) -> Self {
        self.degree = degree;
        self.cohomological = true;
        self
    }
}

/// `H_degree(c)` with the pivot-complement representatives.
///
/// # Panics
/// If `degree > 2`.
#[must_use]
pub fn homology(c: &ChainComplex, degree: usize) -> HomologyBasis {
    assert!(degree <= 2, "degree {degree} out of range");
    let cycles = c.cycles(degree);
    let boundaries = c.boundaries(degree);
    let representatives =
        quotient_basis(&cycles, &boundaries).expect("boundaries are cycles in a valid complex");
    HomologyBasis {
        degree,
        cohomological: false,
        representatives,
        cycles,
        boundaries,
    }
}

/// `H^degree(c)`, computed as homology of the transposed complex.
#[must_use]
pub fn cohomology(c: &ChainComplex, degree: usize) -> HomologyBasis {
    homology(&c.transposed(), 2 - degree).into_cohomology(degree)
}

/// Cohomology basis from chosen representatives.
pub fn cohomology_from_representatives(
    c: &ChainComplex,
    degree: usize,
    representatives: Vec<BitVec>,
) -> Result<HomologyBasis> {
    Ok(
        HomologyBasis::from_representatives(&c.transposed(), 2 - degree, representatives)?
            .into_cohomology(degree),
    )
}

/// A chain map `source → target` with components `f2, f1, f0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    f2: F2Matrix,
    f1: F2Matrix,
    f0: F2Matrix,
}

/// Checks component shapes and that both squares commute.
pub fn validate_chain_map(
    source: &ChainComplex,
    target: &ChainComplex,
    f2: F2Matrix,
    f1: F2Matrix,
    f0: F2Matrix,
) -> Result<ChainMap> {
    for (deg, f) in [(2, &f2), (1, &f1), (0, &f0)] {
        if f.ncols() != source.dim(deg) {
            return Err(Error::DimensionMismatch {
                context: "chain map component columns",
                expected: source.dim(deg),
                found: f.ncols(),
            });
        }
        if f.nrows() != target.dim(deg) {
            return Err(Error::DimensionMismatch {
                context: "chain map component rows",
                expected: target.dim(deg),
                found: f.nrows(),
            });
        }
    }
    if f1.mul(source.d2()) != target.d2().mul(&f2) {
        return Err(Error::SquareDoesNotCommute { degree: 2 });
    }
    if f0.mul(source.d1()) != target.d1().mul(&f1) {
        return Err(Error::SquareDoesNotCommute { degree: 1 });
    }
    Ok(ChainMap {
        source: source.clone(),
        target: target.clone(),
        f2,
        f1,
        f0,
    })
}

impl ChainMap {
    #[must_use]
    pub fn identity(c: &ChainComplex) -> Self {
        Self {
            source: c.clone(),
            target: c.clone(),
            f2: F2Matrix::identity(c.dim(2)),
            f1: F2Matrix::identity(c.dim(1)),
            f0: F2Matrix::identity(c.dim(0)),
        }
    }

    #[must_use]
    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    #[must_use]
    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// Component at `degree`.
    ///
    /// # Panics
    /// If `degree > 2`.
    #[must_use]
    pub fn component(&self, degree: usize) -> &F2Matrix {
        match degree {
            2 => &self.f2,
            1 => &self.f1,
            0 => &self.f0,
            _ => panic!("degree {degree} out of range"),
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ChainMap) -> Result<ChainMap> {
        if g.source != self.target {
            return Err(Error::DimensionMismatch {
                context: "composition: target of first map vs source of second",
                expected: self.target.dim(1),
                found: g.source.dim(1),
            });
        }
        validate_chain_map(
            &self.source,
            &g.target,
            g.f2.mul(&self.f2),
            g.f1.mul(&self.f1),
            g.f0.mul(&self.f0),
        )
    }

    /// The cochain map, as a chain map between transposed complexes going
    /// the other way: `target^T → source^T` with components `(f0ᵀ, f1ᵀ, f2ᵀ)`.
    #[must_use]
    pub fn transpose(&self) -> ChainMap {
        ChainMap {
            source: self.target.transposed(),
            target: self.source.transposed(),
            f2: self.f0.transpose(),
            f1: self.f1.transpose(),
            f0: self.f2.transpose(),
        }
    }

    #[must_use]
    pub fn is_surjective(&self, degree: usize) -> bool {
        let f = self.component(degree);
        f.rank() == f.nrows()
    }

    #[must_use]
    pub fn is_injective(&self, degree: usize) -> bool {
        let f = self.component(degree);
        f.rank() == f.ncols()
    }
}

/// Matrix of `f_*: H_degree(source) → H_degree(target)` in the given bases.
pub fn induced_on_homology(
    f: &ChainMap,
    degree: usize,
    src_basis: &HomologyBasis,
    tgt_basis: &HomologyBasis,
) -> Result<F2Matrix> {
    let fd = f.component(degree);
    let columns = src_basis
        .representatives()
        .iter()
        .map(|r| tgt_basis.coordinates(&fd.mul_vec(r)))
        .collect::<Result<Vec<_>>>()?;
    F2Matrix::from_columns(tgt_basis.dim(), &columns)
}
