//! Exact linear algebra over F2.
//!
//! Everything is dense and bit-packed. Subspaces keep a reduced row-echelon
//! basis, so equal subspaces compare equal and coset representatives are
//! canonical.

mod bitvec;
mod matrix;

pub use bitvec::BitVec;
pub use matrix::F2Matrix;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output of [`rref`]: `transform · m = reduced`.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: F2Matrix,
    pub pivots: Vec<usize>,
    pub transform: F2Matrix,
}

impl Rref {
    #[must_use]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row-echelon form by Gauss-Jordan elimination.
#[must_use]
pub fn rref(m: &F2Matrix) -> Rref {
    let n = m.nrows();
    let mut rows: Vec<BitVec> = m.rows().to_vec();
    let mut tr: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.ncols() {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        tr.swap(r, p);
        let (pr, pt) = (rows[r].clone(), tr[r].clone());
        for i in 0..n {
            if i != r && rows[i].get(c) {
                rows[i] += &pr;
                tr[i] += &pt;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        reduced: F2Matrix::from_rows(m.ncols(), rows).expect("row lengths preserved"),
        pivots,
        transform: F2Matrix::from_rows(n, tr).expect("square transform"),
    }
}

/// A linear subspace of F2^n held by its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    basis: Vec<BitVec>,
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        Self {
            ambient: s.ambient,
            basis: s.basis,
        }
    }
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::from_generators(r.ambient, r.basis)
    }
}

impl Subspace {
    #[must_use]
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[must_use]
    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary generators.
    pub fn from_generators<I>(ambient: usize, gens: I) -> Result<Self>
    where
        I: IntoIterator<Item = BitVec>,
    {
        let m = F2Matrix::from_rows(ambient, gens.into_iter().collect())?;
        Ok(Self::row_space(&m))
    }

    /// Row space of a matrix.
    #[must_use]
    pub fn row_space(m: &F2Matrix) -> Self {
        let r = rref(m);
        let k = r.rank();
        Self {
            ambient: m.ncols(),
            basis: r.reduced.rows()[..k].to_vec(),
            pivots: r.pivots,
        }
    }

    #[must_use]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[must_use]
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    #[must_use]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Ambient coordinates that are not pivots, in increasing order.
    #[must_use]
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }

    /// Canonical coset representative: clears every pivot column.
    ///
    /// # Panics
    /// If `v` has the wrong length.
    #[must_use]
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ambient, "vector length vs subspace ambient");
        let mut out = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if out.get(p) {
                out += b;
            }
        }
        out
    }

    #[must_use]
    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    #[must_use]
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        self.contains(v).then(|| v.select(&self.pivots))
    }

    #[must_use]
    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    /// Sum (join) of two subspaces of the same ambient space.
    #[must_use]
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Self::from_generators(self.ambient, self.basis.iter().chain(&other.basis).cloned())
            .expect("same ambient")
    }

    /// Intersection of two subspaces of the same ambient space.
    #[must_use]
    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        // a·x = b·y  ⇔  [Aᵀ | Bᵀ](x, y) = 0
        let a = self.generator_matrix();
        let b = other.generator_matrix();
        let joint = F2Matrix::hstack(&[&a, &b]).expect("same rows");
        let ker = kernel_basis(&joint);
        let gens = ker
            .basis()
            .iter()
            .map(|k| a.mul_vec(&k.slice(0, self.dim())));
        Self::from_generators(self.ambient, gens).expect("ambient")
    }

    /// Basis vectors as rows (dim × ambient).
    #[must_use]
    pub fn basis_matrix(&self) -> F2Matrix {
        F2Matrix::from_rows(self.ambient, self.basis.clone()).expect("consistent lengths")
    }

    /// Basis vectors as columns (ambient × dim); the inclusion map.
    #[must_use]
    pub fn generator_matrix(&self) -> F2Matrix {
        F2Matrix::from_columns(self.ambient, &self.basis).expect("consistent lengths")
    }

    /// Image of the subspace under a linear map.
    #[must_use]
    pub fn image_under(&self, m: &F2Matrix) -> Self {
        Self::from_generators(m.nrows(), self.basis.iter().map(|b| m.mul_vec(b)))
            .expect("matrix output length")
    }

    /// Orthogonal complement under the standard dot product.
    #[must_use]
    pub fn orthogonal_complement(&self) -> Self {
        kernel_basis(&self.basis_matrix())
    }

    /// Every element of the subspace, enumerated in Gray-code order.
    ///
    /// # Panics
    /// If the dimension exceeds 30.
    #[must_use]
    pub fn elements(&self) -> Vec<BitVec> {
        assert!(self.dim() <= 30, "subspace too large to enumerate");
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut cur = BitVec::zeros(self.ambient);
        out.push(cur.clone());
        for i in 1u64..(1 << self.dim()) {
            cur += &self.basis[i.trailing_zeros() as usize];
            out.push(cur.clone());
        }
        out
    }
}

/// Kernel of `m` as a subspace of F2^cols.
#[must_use]
pub fn kernel_basis(m: &F2Matrix) -> Subspace {
    let r = rref(m);
    let mut is_pivot = vec![false; m.ncols()];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let gens = (0..m.ncols()).filter(|&f| !is_pivot[f]).map(|f| {
        let mut v = BitVec::unit(m.ncols(), f);
        for (row, &p) in r.reduced.rows().iter().zip(&r.pivots) {
            if row.get(f) {
                v.set(p, true);
            }
        }
        v
    });
    Subspace::from_generators(m.ncols(), gens).expect("kernel vectors have cols entries")
}

/// Column space of `m` as a subspace of F2^rows.
#[must_use]
pub fn image_basis(m: &F2Matrix) -> Subspace {
    Subspace::row_space(&m.transpose())
}

/// Some `x` with `m·x = b`: pivot variables solved, free variables zero.
pub fn solve(m: &F2Matrix, b: &BitVec) -> Result<Option<BitVec>> {
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            context: "solve right-hand side",
            expected: m.nrows(),
            found: b.len(),
        });
    }
    let r = rref(m);
    let tb = r.transform.mul_vec(b);
    if tb.iter_ones().any(|i| i >= r.rank()) {
        return Ok(None);
    }
    let mut x = BitVec::zeros(m.ncols());
    for (i, &p) in r.pivots.iter().enumerate() {
        if tb.get(i) {
            x.set(p, true);
        }
    }
    Ok(Some(x))
}

/// Canonical representative of `v + w`.
pub fn coset_reduce(v: &BitVec, w: &Subspace) -> Result<BitVec> {
    if v.len() != w.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "coset_reduce",
            expected: w.ambient_dim(),
            found: v.len(),
        });
    }
    Ok(w.reduce(v))
}

/// Representatives of a basis of `u / w`, using `u`'s RREF basis as the
/// ordered basis of `u`. See [`quotient_basis_in`].
pub fn quotient_basis(u: &Subspace, w: &Subspace) -> Result<Vec<BitVec>> {
    quotient_basis_in(u.basis(), w)
}

/// Representatives of a basis of `span(u_basis) / w`.
///
/// `w` is written in the coordinates of the ordered basis `u_basis` and
/// echelonized; the members of `u_basis` at non-pivot positions are returned.
pub fn quotient_basis_in(u_basis: &[BitVec], w: &Subspace) -> Result<Vec<BitVec>> {
    let ambient = w.ambient_dim();
    let u = F2Matrix::from_columns(ambient, u_basis)?;
    let mut coords = Vec::with_capacity(w.dim());
    for b in w.basis() {
        coords.push(solve(&u, b)?.ok_or(Error::NotContained)?);
    }
    let c = Subspace::from_generators(u_basis.len(), coords)?;
    Ok(c.non_pivots()
        .into_iter()
        .map(|i| u_basis[i].clone())
        .collect())
}

/// `M` with `M · [b_1 | b_2 | ...] = I`; the concatenation must be square.
pub fn left_inverse_block(blocks: &[&F2Matrix]) -> Result<F2Matrix> {
    let m = F2Matrix::hstack(blocks)?;
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            context: "left_inverse_block squareness",
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let r = rref(&m);
    if r.rank() < m.ncols() {
        return Err(Error::Singular);
    }
    Ok(r.transform)
}

/// Inverse of a square invertible matrix.
pub fn inverse(m: &F2Matrix) -> Result<F2Matrix> {
    left_inverse_block(&[m])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steane_px() -> F2Matrix {
        F2Matrix::parse_rows(&["1110100", "0011110", "0100111"])
    }

    /// Every vector of F2^n, for exhaustive oracles.
    fn all_vectors(n: usize) -> impl Iterator<Item = BitVec> {
        (0..1u64 << n).map(move |x| BitVec::from_u64(n, x))
    }

    #[test]
    fn rref_examples() {
        let r = rref(&F2Matrix::parse_rows(&["11", "11"]));
        assert_eq!(r.pivots, vec![0]);
        let id = F2Matrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn steane_rank_matches_enumeration() {
        let m = steane_px();
        let distinct: std::collections::HashSet<_> = all_vectors(3)
            .map(|c| {
                let mut acc = BitVec::zeros(7);
                for i in c.iter_ones() {
                    acc += m.row(i);
                }
                acc
            })
            .filter(|v| !v.is_zero())
            .collect();
        // 2^rank - 1 nonzero combinations
        assert_eq!(distinct.len(), 7);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&F2Matrix::zeros(2, 3)).dim(), 3);
        let k = kernel_basis(&F2Matrix::parse_rows(&["11"]));
        assert_eq!(k.basis(), &["11".parse::<BitVec>().unwrap()]);
        let m = steane_px();
        let count = all_vectors(7).filter(|v| m.mul_vec(v).is_zero()).count();
        assert_eq!(count, 16);
        assert_eq!(kernel_basis(&m).dim(), 4);
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&F2Matrix::identity(4)), Subspace::full(4));
        assert_eq!(image_basis(&F2Matrix::zeros(3, 2)).dim(), 0);
        let pzt = steane_px().transpose();
        let images: std::collections::HashSet<_> =
            all_vectors(3).map(|c| pzt.mul_vec(&c)).collect();
        assert_eq!(images.len(), 8);
        assert_eq!(image_basis(&pzt).dim(), 3);
    }

    #[test]
    fn solve_examples() {
        let b: BitVec = "101".parse().unwrap();
        assert_eq!(solve(&F2Matrix::identity(3), &b).unwrap(), Some(b));
        let x = solve(&F2Matrix::parse_rows(&["11"]), &"1".parse().unwrap()).unwrap();
        assert_eq!(x.unwrap().to_string(), "10");
        assert_eq!(
            solve(&F2Matrix::zeros(1, 2), &"1".parse().unwrap()).unwrap(),
            None
        );
        assert!(solve(&F2Matrix::zeros(1, 2), &"11".parse().unwrap()).is_err());
    }

    #[test]
    fn steane_single_qubit_syndrome_has_weight_one_preimage() {
        let m = steane_px();
        let syndrome = m.mul_vec(&BitVec::unit(7, 0));
        let min = all_vectors(7)
            .filter(|v| m.mul_vec(v) == syndrome)
            .map(|v| v.weight())
            .min();
        assert_eq!(min, Some(1));
        let x = solve(&m, &syndrome).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), syndrome);
    }

    #[test]
    fn coset_reduce_examples() {
        let w = Subspace::from_generators(2, ["11".parse().unwrap()]).unwrap();
        assert!(coset_reduce(&"11".parse().unwrap(), &w).unwrap().is_zero());
        assert_eq!(
            coset_reduce(&"10".parse().unwrap(), &w)
                .unwrap()
                .to_string(),
            "01"
        );
        let stab = image_basis(&steane_px().transpose());
        for s in stab.elements() {
            assert!(coset_reduce(&s, &stab).unwrap().is_zero());
        }
        assert!(coset_reduce(&"1".parse().unwrap(), &w).is_err());
    }

    #[test]
    fn quotient_basis_examples() {
        let w = Subspace::from_generators(2, ["11".parse().unwrap()]).unwrap();
        let reps = quotient_basis(&Subspace::full(2), &w).unwrap();
        assert_eq!(reps, vec!["01".parse::<BitVec>().unwrap()]);
        assert!(quotient_basis(&w, &w).unwrap().is_empty());

        let u = Subspace::full(4);
        let w = Subspace::from_generators(4, ["1010".parse().unwrap(), "0111".parse().unwrap()])
            .unwrap();
        let reps = quotient_basis(&u, &w).unwrap();
        assert_eq!(reps, vec![BitVec::unit(4, 2), BitVec::unit(4, 3)]);

        let small = Subspace::from_generators(4, [BitVec::unit(4, 0)]).unwrap();
        assert_eq!(quotient_basis(&small, &w), Err(Error::NotContained));
    }

    #[test]
    fn left_inverse_examples() {
        let id = F2Matrix::identity(3);
        assert_eq!(left_inverse_block(&[&id]).unwrap(), id);
        let m = F2Matrix::parse_rows(&["11", "01"]);
        assert_eq!(left_inverse_block(&[&m]).unwrap(), m);
        assert_eq!(
            left_inverse_block(&[&F2Matrix::parse_rows(&["11", "11"])]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn intersection_and_complement() {
        let a =
            Subspace::from_generators(3, ["110".parse().unwrap(), "001".parse().unwrap()]).unwrap();
        let b = Subspace::from_generators(3, ["111".parse().unwrap()]).unwrap();
        assert_eq!(a.intersection(&b), b);
        let perp = b.orthogonal_complement();
        assert_eq!(perp.dim(), 2);
        assert!(perp.basis().iter().all(|v| !v.dot(&"111".parse().unwrap())));
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = steane_px();
        let text = m.to_string();
        assert!(text.starts_with("3 7\n1110100\n"));
        assert_eq!(text.parse::<F2Matrix>().unwrap(), m);
        let empty = F2Matrix::zeros(0, 5);
        assert_eq!(empty.to_string().parse::<F2Matrix>().unwrap(), empty);
        assert!("2 2\n10\n1".parse::<F2Matrix>().is_err());
    }
}
