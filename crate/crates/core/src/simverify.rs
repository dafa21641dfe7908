//! State-vector verification of code maps.
//!
//! A Z-preserving chain map acts physically as the Hadamard-conjugated parity
//! map of its middle component followed by post-selected Z-stabiliser
//! projections on a complement of the image of its top component. The
//! X-preserving case exchanges the roles of X and Z.
//!
//! Basis-state index bit `j` is qubit `j`. Every op has a list of binary
//! measurement outcomes; the ideal branch is all-zero. For parity maps the
//! outcomes are the discarded kernel coordinates, measured in the conjugate
//! basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chaincomplex::{ChainComplex, ChainMap};
use crate::csscode::{symplectic_product, CssCode, Encoder, PauliOperator};
use crate::error::{Error, Result};
use crate::f2linalg::{image_basis, kernel_basis, solve, BitVec, F2Matrix};
use crate::surgery::Orientation;

/// Largest qubit count the simulator accepts.
pub const MAX_QUBITS: usize = 20;

const ZERO_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zero vector (not a valid state; a starting point for sums).
    #[must_use]
    pub fn zero_amplitudes(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "{n} qubits exceeds simulator limit");
        Self {
            n,
            amps: vec![Complex64::new(0.0, 0.0); 1 << n],
        }
    }

    #[must_use]
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut s = Self::zero_amplitudes(n);
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                limit: MAX_QUBITS,
            });
        }
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                context: "state vector length",
                expected: 1 << n,
                found: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    #[must_use]
    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    /// Scales to unit norm; errors on the zero vector.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n < ZERO_TOL {
            return Err(Error::ZeroProbabilityOutcome);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(self)
    }

    /// `⟨self|other⟩`.
    #[must_use]
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
    }

    /// Tensor product; `self` occupies the low qubits.
    #[must_use]
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero_amplitudes(self.n + other.n);
        for (j, b) in other.amps.iter().enumerate() {
            if b.norm_sqr() == 0.0 {
                continue;
            }
            for (i, a) in self.amps.iter().enumerate() {
                out.amps[i | (j << self.n)] = a * b;
            }
        }
        out
    }

    /// Equality up to a global phase, after normalizing both.
    #[must_use]
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let (na, nb) = (self.norm(), other.norm());
        if na < ZERO_TOL || nb < ZERO_TOL {
            return na < ZERO_TOL && nb < ZERO_TOL;
        }
        let overlap = self.inner(other);
        let phase = if overlap.norm() < ZERO_TOL {
            Complex64::new(1.0, 0.0)
        } else {
            overlap / overlap.norm()
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a / na * phase - b / nb).norm() < tol)
    }

    /// Applies `± X^x Z^z` (Z first).
    #[must_use]
    pub fn apply_pauli(&self, p: &PauliOperator) -> Self {
        assert_eq!(p.n(), self.n);
        let x = p.x.to_u64() as usize;
        let z = p.z.to_u64() as usize;
        let sign = if p.negative { -1.0 } else { 1.0 };
        let mut out = Self::zero_amplitudes(self.n);
        for (i, a) in self.amps.iter().enumerate() {
            let s = if (i & z).count_ones() % 2 == 1 {
                -sign
            } else {
                sign
            };
            out.amps[i ^ x] = a * s;
        }
        out
    }

    /// `⟨ψ|P|ψ⟩ / ⟨ψ|ψ⟩` (real for Hermitian `P`, i.e. without Y phases).
    #[must_use]
    pub fn expectation(&self, p: &PauliOperator) -> f64 {
        let n2 = self.norm().powi(2);
        self.inner(&self.apply_pauli(p)).re / n2
    }

    fn hadamard_all(&mut self) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for q in 0..self.n {
            let bit = 1 << q;
            for i in 0..self.amps.len() {
                if i & bit == 0 {
                    let (a, b) = (self.amps[i], self.amps[i | bit]);
                    self.amps[i] = (a + b) * h;
                    self.amps[i | bit] = (a - b) * h;
                }
            }
        }
    }

    fn parity_map(&self, a: &F2Matrix) -> Self {
        assert_eq!(a.ncols(), self.n, "parity map input qubits");
        let cols: Vec<usize> = a.columns().iter().map(|c| c.to_u64() as usize).collect();
        let mut out = Self::zero_amplitudes(a.nrows());
        let mut image = 0usize;
        // Gray-code walk keeps A·x current with one XOR per step.
        let mut x = 0usize;
        for step in 0..self.amps.len() {
            if step > 0 {
                let j = step.trailing_zeros() as usize;
                x ^= 1 << j;
                image ^= cols[j];
            }
            out.amps[image] += self.amps[x];
        }
        out
    }
}

/// One physical operation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum PhysicalOp {
    /// `|x⟩ ↦ |A x⟩`, summing amplitudes over preimages.
    ParityMap(F2Matrix),
    /// `H^{⊗n} ∘ ParityMap(Aᵀ) ∘ H^{⊗m}` where `A` is `m × n`.
    HadamardConjugatedParityMap(F2Matrix),
    /// Post-selected projector `(I + s S)/2` with `s = (-1)^outcome`.
    Projection {
        stabiliser: PauliOperator,
        outcome: bool,
    },
    PauliGate(PauliOperator),
}

impl PhysicalOp {
    #[must_use]
    pub fn input_qubits(&self) -> usize {
        match self {
            PhysicalOp::ParityMap(a) => a.ncols(),
            PhysicalOp::HadamardConjugatedParityMap(a) => a.nrows(),
            PhysicalOp::Projection { stabiliser: p, .. } | PhysicalOp::PauliGate(p) => p.n(),
        }
    }

    #[must_use]
    pub fn output_qubits(&self) -> usize {
        match self {
            PhysicalOp::ParityMap(a) => a.nrows(),
            PhysicalOp::HadamardConjugatedParityMap(a) => a.ncols(),
            PhysicalOp::Projection { stabiliser: p, .. } | PhysicalOp::PauliGate(p) => p.n(),
        }
    }

    /// The matrix whose kernel is measured out, in the computational frame
    /// of the inner parity map.
    fn inner_parity(&self) -> Option<F2Matrix> {
        match self {
            PhysicalOp::ParityMap(a) => Some(a.clone()),
            PhysicalOp::HadamardConjugatedParityMap(a) => Some(a.transpose()),
            _ => None,
        }
    }

    /// Number of binary outcomes this op produces.
    #[must_use]
    pub fn measurement_count(&self) -> usize {
        match self {
            PhysicalOp::Projection { .. } => 1,
            PhysicalOp::PauliGate(_) => 0,
            _ => kernel_basis(&self.inner_parity().expect("parity op")).dim(),
        }
    }

    /// Pivot positions of the measured kernel basis.
    #[must_use]
    pub fn kernel_pivots(&self) -> Vec<usize> {
        self.inner_parity()
            .map(|a| kernel_basis(&a).pivots().to_vec())
            .unwrap_or_default()
    }

    /// Input-side Pauli that turns the ideal branch into the given one, for
    /// the parity-map ops.
    #[must_use]
    pub fn branch_pauli(&self, outcomes: &[bool]) -> Option<PauliOperator> {
        let mask = |n: usize| {
            let pivots: Vec<usize> = self
                .kernel_pivots()
                .into_iter()
                .zip(outcomes)
                .filter(|(_, &o)| o)
                .map(|(p, _)| p)
                .collect();
            BitVec::from_indices(n, &pivots)
        };
        match self {
            PhysicalOp::ParityMap(a) => Some(PauliOperator::z_type(mask(a.ncols()))),
            PhysicalOp::HadamardConjugatedParityMap(a) => {
                Some(PauliOperator::x_type(mask(a.nrows())))
            }
            _ => None,
        }
    }

    /// The unnormalized linear map of the branch with the given outcomes.
    pub fn apply_branch(&self, s: &StateVector, outcomes: &[bool]) -> Result<StateVector> {
        if s.n() != self.input_qubits() {
            return Err(Error::DimensionMismatch {
                context: "op input qubits",
                expected: self.input_qubits(),
                found: s.n(),
            });
        }
        if outcomes.len() != self.measurement_count() {
            return Err(Error::DimensionMismatch {
                context: "op outcome count",
                expected: self.measurement_count(),
                found: outcomes.len(),
            });
        }
        let branch_mask = |n: usize| {
            let pivots: Vec<usize> = self
                .kernel_pivots()
                .into_iter()
                .zip(outcomes)
                .filter(|(_, &o)| o)
                .map(|(p, _)| p)
                .collect();
            BitVec::from_indices(n, &pivots)
        };
        Ok(match self {
            PhysicalOp::ParityMap(a) => {
                let pre = s.apply_pauli(&PauliOperator::z_type(branch_mask(a.ncols())));
                pre.parity_map(a)
            }
            PhysicalOp::HadamardConjugatedParityMap(a) => {
                let mut t = s.apply_pauli(&PauliOperator::x_type(branch_mask(a.nrows())));
                t.hadamard_all();
                let mut t = t.parity_map(&a.transpose());
                t.hadamard_all();
                t
            }
            PhysicalOp::Projection {
                stabiliser,
                outcome,
            } => {
                let mut p = stabiliser.clone();
                p.negative ^= *outcome ^ outcomes[0];
                let mut out = s.apply_pauli(&p);
                out.add_scaled(s, Complex64::new(1.0, 0.0));
                for a in out.amplitudes_mut() {
                    *a *= 0.5;
                }
                out
            }
            PhysicalOp::PauliGate(p) => s.apply_pauli(p),
        })
    }

    /// Unnormalized ideal-branch map.
    pub fn apply_linear(&self, s: &StateVector) -> Result<StateVector> {
        self.apply_branch(s, &vec![false; self.measurement_count()])
    }

    /// Carries `p` from the input side to the output side of the branch map:
    /// `U_o · p = ± p' · U_{o ⊕ flips}`.
    pub fn transport(&self, p: &PauliOperator) -> Result<(PauliOperator, Vec<bool>)> {
        if p.n() != self.input_qubits() {
            return Err(Error::LengthMismatch(p.n(), self.input_qubits()));
        }
        match self {
            PhysicalOp::Projection { stabiliser, .. } => {
                Ok((p.clone(), vec![symplectic_product(p, stabiliser)?]))
            }
            PhysicalOp::PauliGate(_) => Ok((p.clone(), Vec::new())),
            PhysicalOp::ParityMap(a) => {
                let (z, flips) = pull_through(a, &p.z)?;
                Ok((
                    PauliOperator {
                        x: a.mul_vec(&p.x),
                        z,
                        negative: p.negative,
                    },
                    flips,
                ))
            }
            PhysicalOp::HadamardConjugatedParityMap(a) => {
                let inner = a.transpose();
                let (x, flips) = pull_through(&inner, &p.x)?;
                Ok((
                    PauliOperator {
                        x,
                        z: inner.mul_vec(&p.z),
                        negative: p.negative,
                    },
                    flips,
                ))
            }
        }
    }
}

/// For `R_A` with kernel basis `k_j` (pivots `π_j`): flips `f_j = v · k_j`
/// and the `v'` with `Aᵀ v' = v + Σ f_j e_{π_j}`.
fn pull_through(a: &F2Matrix, v: &BitVec) -> Result<(BitVec, Vec<bool>)> {
    let ker = kernel_basis(a);
    let flips: Vec<bool> = ker.basis().iter().map(|k| k.dot(v)).collect();
    let mut target = v.clone();
    for (&p, &f) in ker.pivots().iter().zip(&flips) {
        if f {
            target.flip(p);
        }
    }
    let out = solve(&a.transpose(), &target)?
        .expect("vector orthogonal to the kernel lies in the row space");
    Ok((out, flips))
}

/// Applies the ideal branch of `op` and renormalizes; the returned amplitude
/// is the norm ratio (the post-selection amplitude).
pub fn apply(op: &PhysicalOp, s: &StateVector) -> Result<(StateVector, f64)> {
    let before = s.norm();
    let out = op.apply_linear(s)?;
    let after = out.norm();
    if after < ZERO_TOL * before.max(1.0) {
        return Err(Error::ZeroProbabilityOutcome);
    }
    let ratio = after / before;
    Ok((out.normalized()?, ratio))
}

/// Physical interpretation of a code map.
///
/// For `Orientation::Z`, `f` is a chain map of code complexes. For
/// `Orientation::X`, `f` is a chain map between transposed complexes, i.e.
/// a cochain map with `component(1)` acting on X-type vectors.
#[must_use]
pub fn physical_op_sequence(f: &ChainMap, orientation: Orientation) -> Vec<PhysicalOp> {
    let f1 = f.component(1);
    let mut ops = vec![match orientation {
        Orientation::X => PhysicalOp::ParityMap(f1.clone()),
        Orientation::Z if f1.is_permutation() => PhysicalOp::ParityMap(f1.clone()),
        Orientation::Z => PhysicalOp::HadamardConjugatedParityMap(f1.transpose()),
    }];
    let d2 = f.target().d2();
    for j in image_basis(f.component(2)).non_pivots() {
        let support = d2.column(j);
        if support.is_zero() {
            continue;
        }
        let stabiliser = match orientation {
            Orientation::Z => PauliOperator::z_type(support),
            Orientation::X => PauliOperator::x_type(support),
        };
        ops.push(PhysicalOp::Projection {
            stabiliser,
            outcome: false,
        });
    }
    ops
}

/// Runs a sequence of ops on one state along the given branches.
pub fn run_branch(
    ops: &[PhysicalOp],
    outcomes: &[Vec<bool>],
    s: &StateVector,
) -> Result<StateVector> {
    let mut cur = s.clone();
    for (op, o) in ops.iter().zip(outcomes) {
        cur = op.apply_branch(&cur, o)?;
    }
    Ok(cur)
}

/// Ideal outcome record for a sequence of ops.
#[must_use]
pub fn ideal_outcomes(ops: &[PhysicalOp]) -> Vec<Vec<bool>> {
    ops.iter()
        .map(|op| vec![false; op.measurement_count()])
        .collect()
}

/// A complex matrix with row-major storage, serialized as `[re, im]` pairs.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Real 0/1 matrix from a function of `(row, col)`.
    #[must_use]
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = Complex64::new(f(r, c), 0.0);
            }
        }
        m
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| f64::from(u8::from(r == c)))
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    /// Matrix product; panics on mismatched shapes.
    #[must_use]
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(r, j);
                if a.norm() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(j, c);
                }
            }
        }
        out
    }

    /// Largest entrywise distance; infinite for mismatched shapes.
    #[must_use]
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Divides by the largest-magnitude entry (first one on ties), so that
    /// entry becomes exactly 1.
    pub fn normalized(mut self) -> Result<Self> {
        let mut best = Complex64::new(0.0, 0.0);
        for a in &self.data {
            if a.norm() > best.norm() + 1e-12 {
                best = *a;
            }
        }
        if best.norm() < ZERO_TOL {
            return Err(Error::ZeroProbabilityOutcome);
        }
        for a in &mut self.data {
            *a /= best;
        }
        Ok(self)
    }

    #[must_use]
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        let a = self.get(r, c);
                        serde_json::json!([clean(a.re), clean(a.im)])
                    })
                    .collect()
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Rounds away floating noise so printed reports are byte-stable.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl std::fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = (0..self.cols)
                .map(|c| {
                    let a = self.get(r, c);
                    if clean(a.im) == 0.0 {
                        format!("{:>7.4}", clean(a.re))
                    } else {
                        format!("{:.4}{:+.4}i", clean(a.re), clean(a.im))
                    }
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `E_out† · ops · E_in` on the given branch, normalized (see
/// [`ComplexMatrix::normalized`]).
pub fn extract_logical_channel_branch(
    ops: &[PhysicalOp],
    outcomes: &[Vec<bool>],
    e_in: &Encoder,
    e_out: &Encoder,
) -> Result<ComplexMatrix> {
    let n_total = ops
        .iter()
        .map(|o| o.input_qubits().max(o.output_qubits()))
        .chain([e_in.n(), e_out.n()])
        .max()
        .unwrap_or(0);
    if n_total > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n: n_total,
            limit: MAX_QUBITS,
        });
    }
    let cols = 1 << e_in.k();
    let rows = 1 << e_out.k();
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (u, col) in e_in.columns().iter().enumerate() {
        let out = run_branch(ops, outcomes, col)?;
        if out.n() != e_out.n() {
            return Err(Error::DimensionMismatch {
                context: "output encoder qubits",
                expected: out.n(),
                found: e_out.n(),
            });
        }
        for (r, a) in e_out.decode(&out).into_iter().enumerate() {
            m.data[r * cols + u] = a;
        }
    }
    m.normalized()
}

/// Ideal-branch channel `E_out† · ops · E_in`.
pub fn extract_logical_channel(
    ops: &[PhysicalOp],
    e_in: &Encoder,
    e_out: &Encoder,
) -> Result<ComplexMatrix> {
    extract_logical_channel_branch(ops, &ideal_outcomes(ops), e_in, e_out)
}

/// Logical action of a Z-preserving map whose Z-logical matrix is `f`
/// (`k_out × k_in`): `H R_f H`, normalized.
#[must_use]
pub fn z_map_interpretation(f: &F2Matrix) -> ComplexMatrix {
    let op = PhysicalOp::HadamardConjugatedParityMap(f.transpose());
    logical_matrix_of(&op, f.ncols(), f.nrows())
}

/// Logical action of an X-preserving map whose X-logical matrix is `g`: `R_g`.
#[must_use]
pub fn x_map_interpretation(g: &F2Matrix) -> ComplexMatrix {
    logical_matrix_of(&PhysicalOp::ParityMap(g.clone()), g.ncols(), g.nrows())
}

fn logical_matrix_of(op: &PhysicalOp, k_in: usize, k_out: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(1 << k_out, 1 << k_in);
    for u in 0..1 << k_in {
        let out = op
            .apply_linear(&StateVector::basis_state(k_in, u))
            .expect("dimensions match");
        for (r, a) in out.amplitudes().iter().enumerate() {
            m.data[r * m.cols + u] = *a;
        }
    }
    m.normalized().expect("parity maps are nonzero")
}

/// Outcome of the check that stabiliser projections are needed when the top
/// component of a Z-preserving map is not surjective.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub projection_count: usize,
    pub z_expectations_without_projections: Vec<f64>,
    pub z_expectations_with_projections: Vec<f64>,
    pub trivial_input_passes: bool,
}

impl CounterexampleReport {
    /// True when omitting projections leaves the target codespace and
    /// including them restores it.
    #[must_use]
    pub fn demonstrates_gap(&self) -> bool {
        self.z_expectations_without_projections
            .iter()
            .any(|e| (e - 1.0).abs() > 1e-9)
            && self
                .z_expectations_with_projections
                .iter()
                .all(|e| (e - 1.0).abs() < 1e-12)
            && self.trivial_input_passes
    }
}

/// The two-qubit pair of codes and map with a non-surjective top component.
pub fn counterexample_maps() -> Result<(CssCode, CssCode, ChainMap)> {
    let src = ChainComplex::validate(
        F2Matrix::parse_rows(&["1", "1"]),
        F2Matrix::parse_rows(&["11"]),
    )?;
    let tgt = ChainComplex::validate(F2Matrix::identity(2), F2Matrix::zeros(0, 2))?;
    let f = crate::chaincomplex::validate_chain_map(
        &src,
        &tgt,
        F2Matrix::parse_rows(&["1", "1"]),
        F2Matrix::identity(2),
        F2Matrix::zeros(0, 1),
    )?;
    Ok((CssCode::from_complex(src), CssCode::from_complex(tgt), f))
}

pub fn counterexample_check() -> Result<CounterexampleReport> {
    let (src, tgt, f) = counterexample_maps()?;
    let ops = physical_op_sequence(&f, Orientation::Z);
    let bell = crate::csscode::encoder_isometry(&src)?.column(0).clone();
    let z_checks: Vec<PauliOperator> = tgt
        .hz()
        .rows()
        .iter()
        .map(|r| PauliOperator::z_type(r.clone()))
        .collect();
    let expectations = |s: &StateVector| z_checks.iter().map(|p| s.expectation(p)).collect();
    let without = apply(&ops[0], &bell)?.0;
    let with = run_ops(&ops, &bell)?;
    let zero = StateVector::basis_state(2, 0);
    let passes = |s: &StateVector| {
        z_checks
            .iter()
            .all(|p| (s.expectation(p) - 1.0).abs() < 1e-12)
    };
    let trivial_input_passes = passes(&apply(&ops[0], &zero)?.0) && passes(&run_ops(&ops, &zero)?);
    Ok(CounterexampleReport {
        projection_count: ops.len() - 1,
        z_expectations_without_projections: expectations(&without),
        z_expectations_with_projections: expectations(&with),
        trivial_input_passes,
    })
}

/// Applies every op on its ideal branch with renormalization.
pub fn run_ops(ops: &[PhysicalOp], s: &StateVector) -> Result<StateVector> {
    let mut cur = s.clone();
    for op in ops {
        cur = apply(op, &cur)?.0;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn parity_identity_keeps_state() {
        let s = StateVector::from_amplitudes(2, vec![c(0.6), c(0.0), c(0.0), c(0.8)]).unwrap();
        let (out, amp) = apply(&PhysicalOp::ParityMap(F2Matrix::identity(2)), &s).unwrap();
        assert!(out.approx_eq_up_to_phase(&s, 1e-12));
        assert!((amp - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_merge_on_bell_gives_zero() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let (out, _) = apply(&PhysicalOp::ParityMap(F2Matrix::parse_rows(&["11"])), &bell).unwrap();
        assert!(out.approx_eq_up_to_phase(&StateVector::basis_state(1, 0), 1e-12));
    }

    #[test]
    fn projection_on_codeword() {
        let s = StateVector::basis_state(2, 0);
        let op = PhysicalOp::Projection {
            stabiliser: PauliOperator::z_type(BitVec::from_indices(2, &[0, 1])),
            outcome: false,
        };
        let (out, amp) = apply(&op, &s).unwrap();
        assert!(out.approx_eq_up_to_phase(&s, 1e-12));
        assert!((amp - 1.0).abs() < 1e-12);
        let flipped = PhysicalOp::Projection {
            stabiliser: PauliOperator::z_type(BitVec::from_indices(2, &[0, 1])),
            outcome: true,
        };
        assert_eq!(apply(&flipped, &s), Err(Error::ZeroProbabilityOutcome));
    }

    #[test]
    fn hadamard_conjugated_merge_is_green_spider() {
        // H R_[1 1] H = |0><00| + |1><11| up to scale.
        let m = z_map_interpretation(&F2Matrix::parse_rows(&["11"]));
        let expected = ComplexMatrix::from_fn(2, 4, |r, c| {
            f64::from(u8::from((r, c) == (0, 0) || (r, c) == (1, 3)))
        });
        assert!(m.max_deviation(&expected) < 1e-12);
    }

    #[test]
    fn counterexample_shows_projection_gap() {
        let r = counterexample_check().unwrap();
        assert_eq!(r.projection_count, 1);
        assert!(r.z_expectations_without_projections[0].abs() < 1e-12);
        assert!(r.demonstrates_gap());
    }

    #[test]
    fn identity_map_sequence() {
        let c = ChainComplex::validate(
            F2Matrix::parse_rows(&["1", "1"]),
            F2Matrix::parse_rows(&["11"]),
        )
        .unwrap();
        let ops = physical_op_sequence(&ChainMap::identity(&c), Orientation::Z);
        assert_eq!(ops, vec![PhysicalOp::ParityMap(F2Matrix::identity(2))]);
    }

    #[test]
    fn empty_ops_identity_channel() {
        let code =
            CssCode::from_parity_checks(F2Matrix::zeros(0, 2), F2Matrix::zeros(0, 2)).unwrap();
        let e = crate::csscode::encoder_isometry(&code).unwrap();
        let m = extract_logical_channel(&[], &e, &e).unwrap();
        let id = ComplexMatrix::from_fn(4, 4, |r, c| f64::from(u8::from(r == c)));
        assert!(m.max_deviation(&id) < 1e-12);
    }
}
