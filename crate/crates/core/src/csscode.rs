//! CSS codes as chain complexes `C2 → C1 → C0` with `d2 = hzᵀ`, `d1 = hx`,
//! together with a fixed pair of dual logical bases.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chaincomplex::{cohomology_from_representatives, homology, ChainComplex, HomologyBasis};
use crate::error::{Error, Result};
use crate::f2linalg::{image_basis, left_inverse_block, BitVec, F2Matrix, Subspace};
use crate::simverify::{StateVector, MAX_QUBITS};

/// A Pauli operator `± X^x Z^z` (phases of `i` are ignored).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PauliOperator {
    pub x: BitVec,
    pub z: BitVec,
    pub negative: bool,
}

impl PauliOperator {
    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    #[must_use]
    pub fn x_type(x: BitVec) -> Self {
        let n = x.len();
        Self {
            x,
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    #[must_use]
    pub fn z_type(z: BitVec) -> Self {
        let n = z.len();
        Self {
            x: BitVec::zeros(n),
            z,
            negative: false,
        }
    }

    pub fn new(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch(x.len(), z.len()));
        }
        Ok(Self {
            x,
            z,
            negative: false,
        })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Product up to phase; the sign flag is carried by parity.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch(self.n(), other.n()));
        }
        Ok(Self {
            x: &self.x + &other.x,
            z: &self.z + &other.z,
            negative: self.negative ^ other.negative,
        })
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for i in 0..self.n() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `x_a · z_b + z_a · x_b`: false iff the operators commute.
pub fn symplectic_product(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch(a.n(), b.n()));
    }
    Ok(a.x.dot(&b.z) ^ a.z.dot(&b.x))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CssCode {
    complex: ChainComplex,
    z_logicals: HomologyBasis,
    x_logicals: HomologyBasis,
    distance: Option<usize>,
}

impl CssCode {
    /// Builds the code from X- and Z-check matrices (rows are checks).
    pub fn from_parity_checks(hx: F2Matrix, hz: F2Matrix) -> Result<Self> {
        if hx.ncols() != hz.ncols() {
            return Err(Error::DimensionMismatch {
                context: "hx vs hz columns",
                expected: hx.ncols(),
                found: hz.ncols(),
            });
        }
        if !hx.mul(&hz.transpose()).is_zero() {
            return Err(Error::NonCommutingChecks);
        }
        let complex = ChainComplex::validate(hz.transpose(), hx)?;
        Ok(Self::from_complex(complex))
    }

    /// Code of a complex, with the default logical bases.
    #[must_use]
    pub fn from_complex(complex: ChainComplex) -> Self {
        let z = homology(&complex, 1);
        let x = dual_basis(&complex, &z).expect("pivot-complement basis is a valid H1 basis");
        Self {
            complex,
            z_logicals: z,
            x_logicals: x,
            distance: None,
        }
    }

    /// Replaces the Z-logical basis; the X basis becomes its dual.
    pub fn with_z_logicals(self, reps: Vec<BitVec>) -> Result<Self> {
        let z = HomologyBasis::from_representatives(&self.complex, 1, reps)?;
        let x = dual_basis(&self.complex, &z)?;
        Ok(Self {
            z_logicals: z,
            x_logicals: x,
            ..self
        })
    }

    /// Replaces the X-logical basis; the Z basis becomes its dual.
    pub fn with_x_logicals(self, reps: Vec<BitVec>) -> Result<Self> {
        let x = cohomology_from_representatives(&self.complex, 1, reps)?;
        let t = self.complex.transposed();
        let x_as_homology =
            HomologyBasis::from_representatives(&t, 1, x.representatives().to_vec())?;
        let z_reps = dual_basis(&t, &x_as_homology)?.representatives().to_vec();
        let z = HomologyBasis::from_representatives(&self.complex, 1, z_reps)?;
        Ok(Self {
            z_logicals: z,
            x_logicals: x,
            ..self
        })
    }

    /// Replaces both bases; they must pair to the identity.
    pub fn with_logicals(self, z_reps: Vec<BitVec>, x_reps: Vec<BitVec>) -> Result<Self> {
        let z = HomologyBasis::from_representatives(&self.complex, 1, z_reps)?;
        let x = cohomology_from_representatives(&self.complex, 1, x_reps)?;
        if pairing_matrix(&x, &z) != F2Matrix::identity(z.dim()) {
            return Err(Error::InvalidLogicals(
                "X and Z logical bases are not dual".into(),
            ));
        }
        Ok(Self {
            z_logicals: z,
            x_logicals: x,
            ..self
        })
    }

    /// Computes and caches the distance by enumeration (see [`distance_bruteforce`]).
    #[must_use]
    pub fn with_distance(mut self) -> Self {
        self.distance = distance_bruteforce(&self, DEFAULT_DISTANCE_CAP);
        self
    }

    /// Records a distance computed elsewhere.
    #[must_use]
    pub fn with_known_distance(mut self, d: usize) -> Self {
        self.distance = Some(d);
        self
    }

    #[must_use]
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    #[must_use]
    pub fn hx(&self) -> &F2Matrix {
        self.complex.d1()
    }

    #[must_use]
    pub fn hz(&self) -> F2Matrix {
        self.complex.d2().transpose()
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.complex.dim(1)
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.z_logicals.dim()
    }

    #[must_use]
    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    #[must_use]
    pub fn z_logicals(&self) -> &HomologyBasis {
        &self.z_logicals
    }

    #[must_use]
    pub fn x_logicals(&self) -> &HomologyBasis {
        &self.x_logicals
    }

    /// Z-stabiliser space `im d2`.
    #[must_use]
    pub fn z_stabilisers(&self) -> Subspace {
        image_basis(self.complex.d2())
    }

    /// X-stabiliser space `im d1ᵀ`.
    #[must_use]
    pub fn x_stabilisers(&self) -> Subspace {
        Subspace::row_space(self.complex.d1())
    }

    /// Every stabiliser generator as a Pauli operator, X checks first.
    #[must_use]
    pub fn stabiliser_generators(&self) -> Vec<PauliOperator> {
        let hz = self.hz();
        self.hx()
            .rows()
            .iter()
            .map(|r| PauliOperator::x_type(r.clone()))
            .chain(hz.rows().iter().map(|r| PauliOperator::z_type(r.clone())))
            .collect()
    }

    /// `[[n, k, d]]` with `?` for an unknown distance.
    #[must_use]
    pub fn parameters(&self) -> String {
        match self.distance {
            Some(d) => format!("[[{},{},{d}]]", self.n(), self.k()),
            None => format!("[[{},{},?]]", self.n(), self.k()),
        }
    }

    /// `self ⊕ other` with both logical bases concatenated (`self` first).
    /// The distance is the minimum when both are known.
    #[must_use]
    pub fn direct_sum(&self, other: &CssCode) -> CssCode {
        let complex = crate::chaincomplex::direct_sum(&self.complex, &other.complex);
        let (na, nb) = (self.n(), other.n());
        let pad = |a: &[BitVec], b: &[BitVec]| -> Vec<BitVec> {
            a.iter()
                .map(|v| v.concat(&BitVec::zeros(nb)))
                .chain(b.iter().map(|v| BitVec::zeros(na).concat(v)))
                .collect()
        };
        let z = pad(
            self.z_logicals.representatives(),
            other.z_logicals.representatives(),
        );
        let x = pad(
            self.x_logicals.representatives(),
            other.x_logicals.representatives(),
        );
        let mut sum = CssCode::from_complex(complex)
            .with_logicals(z, x)
            .expect("direct sum of dual bases is dual");
        sum.distance = self.distance.zip(other.distance).map(|(a, b)| a.min(b));
        sum
    }
}

/// Matrix with entry `(i, j) = x_i · z_j`.
#[must_use]
pub fn pairing_matrix(x: &HomologyBasis, z: &HomologyBasis) -> F2Matrix {
    let mut m = F2Matrix::zeros(x.dim(), z.dim());
    for (i, xi) in x.representatives().iter().enumerate() {
        for (j, zj) in z.representatives().iter().enumerate() {
            m.set(i, j, xi.dot(zj));
        }
    }
    m
}

/// The X-logical basis dual to `z_basis`.
///
/// Assembles `(L_Z | basis of im d2 | basis of im d1ᵀ)`, which is square and
/// invertible when `z_basis` is an H1 basis, and reads the first `k` rows of
/// its inverse.
pub fn dual_basis(c: &ChainComplex, z_basis: &HomologyBasis) -> Result<HomologyBasis> {
    let n = c.dim(1);
    let k = z_basis.dim();
    let lz = F2Matrix::from_columns(n, z_basis.representatives())?;
    let b = image_basis(c.d2()).generator_matrix();
    let complement: Vec<BitVec> = c
        .cycles(1)
        .non_pivots()
        .into_iter()
        .map(|j| BitVec::unit(n, j))
        .collect();
    let complement = F2Matrix::from_columns(n, &complement)?;
    let inv = left_inverse_block(&[&lz, &b, &complement])
        .map_err(|_| Error::InvalidLogicals("assembled logical matrix is singular".into()))?;
    let reps = inv.rows()[..k].to_vec();
    cohomology_from_representatives(c, 1, reps)
}

/// Enumeration budget used by [`CssCode::with_distance`].
pub const DEFAULT_DISTANCE_CAP: u64 = 1 << 24;

/// Minimum weight of a nontrivial logical operator of either type.
///
/// Enumerates `ker hx` and `ker hz`; an element is nontrivial when it pairs
/// oddly with some logical of the other type. Returns `None` for `k = 0` or
/// when either kernel has more than `cap` elements.
#[must_use]
pub fn distance_bruteforce(code: &CssCode, cap: u64) -> Option<usize> {
    if code.k() == 0 {
        return None;
    }
    let c = code.complex();
    let dz = min_nontrivial_weight(&c.cycles(1), code.x_logicals().representatives(), cap)?;
    let dx = min_nontrivial_weight(
        &c.transposed().cycles(1),
        code.z_logicals().representatives(),
        cap,
    )?;
    Some(dz.min(dx))
}

fn min_nontrivial_weight(cycles: &Subspace, duals: &[BitVec], cap: u64) -> Option<usize> {
    let dim = cycles.dim();
    if dim >= 63 || (1u64 << dim) > cap {
        return None;
    }
    let signature = |v: &BitVec| -> u64 {
        duals
            .iter()
            .enumerate()
            .fold(0, |acc, (i, d)| acc | (u64::from(d.dot(v)) << i))
    };
    let gen_sigs: Vec<u64> = cycles.basis().iter().map(signature).collect();
    let mut cur = BitVec::zeros(cycles.ambient_dim());
    let mut sig = 0u64;
    let mut best: Option<usize> = None;
    for i in 1u64..(1 << dim) {
        let g = i.trailing_zeros() as usize;
        cur += &cycles.basis()[g];
        sig ^= gen_sigs[g];
        if sig != 0 {
            let w = cur.weight();
            best = Some(best.map_or(w, |b| b.min(w)));
        }
    }
    best
}

/// Type-preserving encoder: column `u` is the uniform superposition over
/// `{ Σ u_i x_i + s : s ∈ rowspace(hx) }`.
///
/// Qubit `j` is bit `j` of a basis-state index; logical label `u` has bit `i`
/// for logical qubit `i`.
#[derive(Clone, Debug)]
pub struct Encoder {
    n: usize,
    k: usize,
    columns: Vec<StateVector>,
}

/// Logical single-qubit states used to fix encoder inputs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum LogicalState {
    Zero,
    One,
    Plus,
    Minus,
}

impl LogicalState {
    fn amplitudes(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            LogicalState::Zero => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            LogicalState::One => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            LogicalState::Plus => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            LogicalState::Minus => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }
}

pub fn encoder_isometry(code: &CssCode) -> Result<Encoder> {
    let n = code.n();
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            limit: MAX_QUBITS,
        });
    }
    let k = code.k();
    let stabs = code.x_stabilisers().elements();
    let amp = Complex64::new(1.0 / (stabs.len() as f64).sqrt(), 0.0);
    let xs = code.x_logicals().representatives();
    let columns = (0..1u64 << k)
        .map(|u| {
            let mut offset = BitVec::zeros(n);
            for (i, x) in xs.iter().enumerate() {
                if u >> i & 1 == 1 {
                    offset += x;
                }
            }
            let mut s = StateVector::zero_amplitudes(n);
            for st in &stabs {
                let idx = (&offset + st).to_u64() as usize;
                s.amplitudes_mut()[idx] = amp;
            }
            s
        })
        .collect();
    Ok(Encoder { n, k, columns })
}

impl Encoder {
    /// Builds an encoder from explicit columns.
    pub fn from_columns(n: usize, k: usize, columns: Vec<StateVector>) -> Result<Self> {
        if columns.len() != 1 << k {
            return Err(Error::DimensionMismatch {
                context: "encoder column count",
                expected: 1 << k,
                found: columns.len(),
            });
        }
        if let Some(c) = columns.iter().find(|c| c.n() != n) {
            return Err(Error::DimensionMismatch {
                context: "encoder column qubits",
                expected: n,
                found: c.n(),
            });
        }
        Ok(Self { n, k, columns })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }

    #[must_use]
    pub fn column(&self, u: usize) -> &StateVector {
        &self.columns[u]
    }

    #[must_use]
    pub fn columns(&self) -> &[StateVector] {
        &self.columns
    }

    /// Encodes logical amplitudes (length `2^k`).
    #[must_use]
    pub fn encode(&self, logical: &[Complex64]) -> StateVector {
        assert_eq!(logical.len(), self.columns.len());
        let mut out = StateVector::zero_amplitudes(self.n);
        for (c, &a) in self.columns.iter().zip(logical) {
            if a != Complex64::new(0.0, 0.0) {
                out.add_scaled(c, a);
            }
        }
        out
    }

    /// `E† ψ`: the logical amplitudes of a physical state.
    #[must_use]
    pub fn decode(&self, s: &StateVector) -> Vec<Complex64> {
        self.columns.iter().map(|c| c.inner(s)).collect()
    }

    /// Tensor product; `self`'s qubits and logical bits come first.
    #[must_use]
    pub fn tensor(&self, other: &Encoder) -> Encoder {
        let mut columns = Vec::with_capacity(self.columns.len() * other.columns.len());
        for b in &other.columns {
            for a in &self.columns {
                columns.push(a.tensor(b));
            }
        }
        Encoder {
            n: self.n + other.n,
            k: self.k + other.k,
            columns,
        }
    }

    /// Encoder with logical qubit `index` fixed to `state` and removed.
    #[must_use]
    pub fn with_fixed_logical(&self, index: usize, state: LogicalState) -> Encoder {
        assert!(index < self.k);
        let amps = state.amplitudes();
        let columns = (0..1usize << (self.k - 1))
            .map(|u| {
                let low = u & ((1 << index) - 1);
                let high = (u >> index) << (index + 1);
                let mut out = StateVector::zero_amplitudes(self.n);
                for (bit, a) in amps.iter().enumerate() {
                    if a.norm() > 0.0 {
                        out.add_scaled(&self.columns[low | high | (bit << index)], *a);
                    }
                }
                out
            })
            .collect();
        Encoder {
            n: self.n,
            k: self.k - 1,
            columns,
        }
    }
}
