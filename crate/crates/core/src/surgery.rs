//! Subcodes, quotient merges, splits and the exact-sequence analysis.
//!
//! Everything is computed in a *working* complex: the parent itself for
//! Z-type subcodes, its transpose for X-type ones. In the working complex an
//! X merge is literally a quotient of a chain complex, so one code path
//! serves both orientations.

use serde::{Deserialize, Serialize};

use crate::chaincomplex::{
    direct_sum, homology, induced_on_homology, validate_chain_map, ChainComplex, ChainMap,
    HomologyBasis,
};
use crate::csscode::CssCode;
use crate::error::{Error, Result};
use crate::f2linalg::{image_basis, inverse, kernel_basis, BitVec, F2Matrix, Subspace};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Orientation {
    Z,
    X,
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orientation::Z => "Z",
            Orientation::X => "X",
        })
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "z" => Ok(Orientation::Z),
            "X" | "x" => Ok(Orientation::X),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("orientation must be Z or X, got {other:?}"),
            }),
        }
    }
}

/// Degree-wise subspaces `v2 ⊆ C2`, `v1 ⊆ C1`, `v0 ⊆ C0` of a parent complex,
/// closed under the boundary (Z) or the coboundary (X).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Subcode {
    parent: ChainComplex,
    v2: Subspace,
    v1: Subspace,
    v0: Subspace,
    orientation: Orientation,
}

pub fn validate_subcode(
    parent: &ChainComplex,
    v2: Subspace,
    v1: Subspace,
    v0: Subspace,
    orientation: Orientation,
) -> Result<Subcode> {
    for (deg, v) in [(2, &v2), (1, &v1), (0, &v0)] {
        if v.ambient_dim() != parent.dim(deg) {
            return Err(Error::DimensionMismatch {
                context: "subcode ambient dimension",
                expected: parent.dim(deg),
                found: v.ambient_dim(),
            });
        }
    }
    let checks: [(usize, &Subspace, &F2Matrix, &Subspace); 2] = match orientation {
        Orientation::Z => [(2, &v2, parent.d2(), &v1), (1, &v1, parent.d1(), &v0)],
        Orientation::X => [
            (1, &v0, &parent.d1().transpose(), &v1),
            (2, &v1, &parent.d2().transpose(), &v2),
        ],
    };
    // Transposes above are computed eagerly; fine at these sizes.
    for (degree, from, map, into) in checks {
        if !from.image_under(map).is_subspace_of(into) {
            return Err(Error::ClosureViolated { degree });
        }
    }
    Ok(Subcode {
        parent: parent.clone(),
        v2,
        v1,
        v0,
        orientation,
    })
}

impl Subcode {
    /// Subcode spanned by generator lists for degrees 2, 1, 0 of the parent.
    pub fn from_generators(
        parent: &ChainComplex,
        orientation: Orientation,
        g2: Vec<BitVec>,
        g1: Vec<BitVec>,
        g0: Vec<BitVec>,
    ) -> Result<Self> {
        validate_subcode(
            parent,
            Subspace::from_generators(parent.dim(2), g2)?,
            Subspace::from_generators(parent.dim(1), g1)?,
            Subspace::from_generators(parent.dim(0), g0)?,
            orientation,
        )
    }

    /// The zero subcode.
    #[must_use]
    pub fn zero(parent: &ChainComplex, orientation: Orientation) -> Self {
        Self {
            parent: parent.clone(),
            v2: Subspace::zero(parent.dim(2)),
            v1: Subspace::zero(parent.dim(1)),
            v0: Subspace::zero(parent.dim(0)),
            orientation,
        }
    }

    #[must_use]
    pub fn parent(&self) -> &ChainComplex {
        &self.parent
    }

    #[must_use]
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Subspace at a parent degree.
    #[must_use]
    pub fn space(&self, degree: usize) -> &Subspace {
        match degree {
            2 => &self.v2,
            1 => &self.v1,
            0 => &self.v0,
            _ => panic!("degree {degree} out of range"),
        }
    }

    /// Parent complex in working orientation.
    #[must_use]
    pub fn working_complex(&self) -> ChainComplex {
        match self.orientation {
            Orientation::Z => self.parent.clone(),
            Orientation::X => self.parent.transposed(),
        }
    }

    /// Subspace at a working degree.
    #[must_use]
    pub fn working_space(&self, degree: usize) -> &Subspace {
        match self.orientation {
            Orientation::Z => self.space(degree),
            Orientation::X => self.space(2 - degree),
        }
    }

    /// The subcode as a complex in its own basis coordinates (working orientation).
    #[must_use]
    pub fn complex(&self) -> ChainComplex {
        let e = self.working_complex();
        let restrict = |map: &F2Matrix, from: &Subspace, into: &Subspace| {
            let cols: Vec<BitVec> = from
                .basis()
                .iter()
                .map(|b| into.coordinates(&map.mul_vec(b)).expect("closure holds"))
                .collect();
            F2Matrix::from_columns(into.dim(), &cols).expect("coordinate lengths")
        };
        let d2 = restrict(e.d2(), self.working_space(2), self.working_space(1));
        let d1 = restrict(e.d1(), self.working_space(1), self.working_space(0));
        ChainComplex::validate(d2, d1).expect("restriction of a complex is a complex")
    }

    /// Inclusion of [`Subcode::complex`] into the working complex.
    #[must_use]
    pub fn inclusion(&self) -> ChainMap {
        validate_chain_map(
            &self.complex(),
            &self.working_complex(),
            self.working_space(2).generator_matrix(),
            self.working_space(1).generator_matrix(),
            self.working_space(0).generator_matrix(),
        )
        .expect("inclusion of a subcode is a chain map")
    }
}

/// A quotient merge `p: E → E/V` with its inclusion `i: V → E`, both in
/// working orientation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MergeResult {
    orientation: Orientation,
    source: ChainComplex,
    quotient: ChainComplex,
    p: ChainMap,
    i: ChainMap,
    bases: [Vec<BitVec>; 3],
}

impl MergeResult {
    #[must_use]
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Source complex, working orientation.
    #[must_use]
    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    /// Quotient complex, working orientation.
    #[must_use]
    pub fn quotient(&self) -> &ChainComplex {
        &self.quotient
    }

    #[must_use]
    pub fn p(&self) -> &ChainMap {
        &self.p
    }

    #[must_use]
    pub fn i(&self) -> &ChainMap {
        &self.i
    }

    /// Representatives (in source coordinates) of the quotient basis at a
    /// working degree.
    #[must_use]
    pub fn quotient_basis(&self, degree: usize) -> &[BitVec] {
        &self.bases[degree]
    }

    /// The merged code's complex in chain orientation.
    #[must_use]
    pub fn merged_complex(&self) -> ChainComplex {
        match self.orientation {
            Orientation::Z => self.quotient.clone(),
            Orientation::X => self.quotient.transposed(),
        }
    }

    #[must_use]
    pub fn merged_code(&self) -> CssCode {
        CssCode::from_complex(self.merged_complex())
    }

    /// The section `Q_n → E_n` sending basis vectors to their representatives.
    #[must_use]
    pub fn section(&self, degree: usize) -> F2Matrix {
        F2Matrix::from_columns(self.source.dim(degree), &self.bases[degree])
            .expect("representative lengths")
    }
}

/// Quotient by `v` with pivot-complement bases.
pub fn quotient_merge(v: &Subcode) -> Result<MergeResult> {
    quotient_merge_with_bases(v, [None, None, None])
}

/// Quotient by `v`, optionally with caller-chosen representatives for the
/// quotient bases (indexed by working degree).
pub fn quotient_merge_with_bases(
    v: &Subcode,
    bases: [Option<Vec<BitVec>>; 3],
) -> Result<MergeResult> {
    let source = v.working_complex();
    let mut reps: [Vec<BitVec>; 3] = Default::default();
    let mut proj: Vec<F2Matrix> = Vec::with_capacity(3);
    for (deg, chosen) in bases.into_iter().enumerate() {
        let sub = v.working_space(deg);
        let dim = source.dim(deg);
        let r = chosen.unwrap_or_else(|| {
            sub.non_pivots()
                .into_iter()
                .map(|j| BitVec::unit(dim, j))
                .collect()
        });
        let cols: Vec<BitVec> = r.iter().chain(sub.basis()).cloned().collect();
        let square = F2Matrix::from_columns(dim, &cols)?;
        if square.ncols() != dim {
            return Err(Error::DimensionMismatch {
                context: "quotient basis size",
                expected: dim - sub.dim(),
                found: r.len(),
            });
        }
        let inv = inverse(&square).map_err(|_| Error::NotContained)?;
        proj.push(inv.select_rows(&(0..r.len()).collect::<Vec<_>>()));
        reps[deg] = r;
    }
    let section =
        |deg: usize| F2Matrix::from_columns(source.dim(deg), &reps[deg]).expect("lengths");
    let q2 = proj[1].mul(source.d2()).mul(&section(2));
    let q1 = proj[0].mul(source.d1()).mul(&section(1));
    let quotient = ChainComplex::validate(q2, q1)?;
    let [p0, p1, p2]: [F2Matrix; 3] = proj.try_into().expect("three degrees");
    let p = validate_chain_map(&source, &quotient, p2, p1, p0)?;
    Ok(MergeResult {
        orientation: v.orientation(),
        source,
        quotient,
        p,
        i: v.inclusion(),
        bases: reps,
    })
}

/// The split dual to a merge: `pᵀ`, a chain map `Qᵀ → Eᵀ` between the
/// transposed working complexes.
pub fn split_from_merge(m: &MergeResult) -> Result<ChainMap> {
    let s = m.p.transpose();
    for degree in 0..3 {
        if !s.is_injective(degree) {
            return Err(Error::NotInjective { degree });
        }
    }
    Ok(s)
}

/// Quotient of `C ⊕ D` by the image of `f ⊕ g` for maps out of a common apex.
pub fn span_merge(f: &ChainMap, g: &ChainMap) -> Result<MergeResult> {
    if f.source() != g.source() {
        return Err(Error::DimensionMismatch {
            context: "span_merge apex",
            expected: f.source().dim(1),
            found: g.source().dim(1),
        });
    }
    let e = direct_sum(f.target(), g.target());
    let image = |deg: usize| {
        let stacked = F2Matrix::vstack(&[f.component(deg), g.component(deg)]).expect("same apex");
        image_basis(&stacked)
    };
    let v = validate_subcode(&e, image(2), image(1), image(0), Orientation::Z)?;
    quotient_merge(&v)
}

/// Factors a degree-wise surjective chain map as `p = σ ∘ p̃` with `p̃` the
/// quotient by `ker p` and `σ` an isomorphism.
pub fn merge_decompose(p: &ChainMap) -> Result<(MergeResult, ChainMap)> {
    for degree in [2, 1, 0] {
        if !p.is_surjective(degree) {
            return Err(Error::NotSurjective { degree });
        }
    }
    let v = validate_subcode(
        p.source(),
        kernel_basis(p.component(2)),
        kernel_basis(p.component(1)),
        kernel_basis(p.component(0)),
        Orientation::Z,
    )?;
    let m = quotient_merge(&v)?;
    let sigma = validate_chain_map(
        m.quotient(),
        p.target(),
        p.component(2).mul(&m.section(2)),
        p.component(1).mul(&m.section(1)),
        p.component(0).mul(&m.section(0)),
    )?;
    Ok((m, sigma))
}

/// What a merge does to the logical operators, read off the long exact
/// sequence `H1(V) → H1(E) → H1(Q) → H0(V) → H0(E)`.
///
/// `surjective`/`injective` are facts about the matrix of `p1*`. The
/// `*_by_dimension` flags are the conditions `H0(V) = 0` and `H1(V) = 0`,
/// which are sufficient; the exact criteria are `ker i0* = 0` and `i1* = 0`,
/// reported as `i0_injective` and `i1_zero`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExactSequenceReport {
    pub orientation: Orientation,
    pub labels: [String; 2],
    pub h1_sub_dim: usize,
    pub h0_sub_dim: usize,
    pub h1_source_dim: usize,
    pub h1_quotient_dim: usize,
    pub h0_source_dim: usize,
    pub induced: F2Matrix,
    pub i1_star: F2Matrix,
    pub i0_star: F2Matrix,
    pub surjective: bool,
    pub injective: bool,
    pub surjective_by_dimension: bool,
    pub injective_by_dimension: bool,
    pub i0_injective: bool,
    pub i1_zero: bool,
    /// Killed classes: RREF basis of `im i1*`, as coordinates in the source
    /// homology basis, and as representatives.
    pub killed: Vec<BitVec>,
    pub killed_representatives: Vec<BitVec>,
    /// Created classes: quotient basis vectors completing `im p1*`.
    pub created: Vec<BitVec>,
    pub created_representatives: Vec<BitVec>,
}

/// Runs the exact-sequence analysis of a merge built from `v`.
pub fn analyze_merge(m: &MergeResult, v: &Subcode) -> Result<ExactSequenceReport> {
    let vc = v.complex();
    let incl = v.inclusion();
    let (h1v, h0v) = (homology(&vc, 1), homology(&vc, 0));
    let (h1e, h0e) = (homology(m.source(), 1), homology(m.source(), 0));
    let h1q = homology(m.quotient(), 1);
    let induced = induced_on_homology(m.p(), 1, &h1e, &h1q)?;
    let i1_star = induced_on_homology(&incl, 1, &h1v, &h1e)?;
    let i0_star = induced_on_homology(&incl, 0, &h0v, &h0e)?;
    let rank = induced.rank();
    let killed_space = image_basis(&i1_star);
    let image_p = image_basis(&induced);
    let created: Vec<BitVec> = image_p
        .non_pivots()
        .into_iter()
        .map(|j| BitVec::unit(h1q.dim(), j))
        .collect();
    let labels = match v.orientation() {
        Orientation::Z => ["H1(V)".to_string(), "H0(V)".to_string()],
        Orientation::X => ["H^1(W)".to_string(), "H^2(W)".to_string()],
    };
    Ok(ExactSequenceReport {
        orientation: v.orientation(),
        labels,
        h1_sub_dim: h1v.dim(),
        h0_sub_dim: h0v.dim(),
        h1_source_dim: h1e.dim(),
        h1_quotient_dim: h1q.dim(),
        h0_source_dim: h0e.dim(),
        surjective: rank == h1q.dim(),
        injective: rank == h1e.dim(),
        surjective_by_dimension: h0v.dim() == 0,
        injective_by_dimension: h1v.dim() == 0,
        i0_injective: i0_star.rank() == h0v.dim(),
        i1_zero: i1_star.is_zero(),
        killed_representatives: killed_space
            .basis()
            .iter()
            .map(|c| h1e.combine(c))
            .collect(),
        killed: killed_space.basis().to_vec(),
        created_representatives: created.iter().map(|c| h1q.combine(c)).collect(),
        created,
        induced,
        i1_star,
        i0_star,
    })
}

/// Matrix of `p1*` in the given bases.
pub fn induced_logical_matrix(
    m: &MergeResult,
    src_basis: &HomologyBasis,
    tgt_basis: &HomologyBasis,
) -> Result<F2Matrix> {
    induced_on_homology(m.p(), 1, src_basis, tgt_basis)
}

/// The quotient homology basis obtained by echelonizing `im i1*` in the
/// coordinates of `src_basis` and pushing the non-pivot source
/// representatives through `p1`. In this basis `p1*` is the identity on the
/// non-pivot columns.
pub fn canonical_target_basis(
    m: &MergeResult,
    v: &Subcode,
    src_basis: &HomologyBasis,
) -> Result<HomologyBasis> {
    let vc = v.complex();
    let i1 = induced_on_homology(&v.inclusion(), 1, &homology(&vc, 1), src_basis)?;
    let reps = image_basis(&i1)
        .non_pivots()
        .into_iter()
        .map(|j| m.p().component(1).mul_vec(&src_basis.representatives()[j]))
        .collect();
    HomologyBasis::from_representatives(m.quotient(), 1, reps)
}
