//! Random instances and property checks shared by the property suite and the
//! acceptance target. Each check takes a seeded RNG and returns `Err` with a
//! description of the first violated fact.

#![allow(dead_code)]

use chainsurg::catalog;
use chainsurg::chaincomplex::{cohomology, homology, ChainComplex};
use chainsurg::csscode::{pairing_matrix, CssCode, PauliOperator};
use chainsurg::f2linalg::{image_basis, kernel_basis, BitVec, F2Matrix};
use chainsurg::protocols::singleton_check;
use chainsurg::simverify::{PhysicalOp, StateVector};
use chainsurg::surgery::{analyze_merge, merge_decompose, quotient_merge, Orientation, Subcode};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if let false = $cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> BitVec {
    BitVec::from_bools(&(0..len).map(|_| rng.gen()).collect::<Vec<bool>>())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> F2Matrix {
    F2Matrix::from_rows(cols, (0..rows).map(|_| random_vec(rng, cols)).collect()).unwrap()
}

/// `d2` has columns drawn from `ker d1`, so the pair is always a complex.
pub fn random_complex(rng: &mut ChaCha8Rng, max_n: usize) -> ChainComplex {
    let n = rng.gen_range(1..=max_n);
    let r0 = rng.gen_range(0..=n);
    let d1 = random_matrix(rng, r0, n);
    let ker = kernel_basis(&d1);
    let r2 = rng.gen_range(0..=n);
    let cols: Vec<BitVec> = (0..r2)
        .map(|_| {
            let mut v = BitVec::zeros(n);
            for b in ker.basis() {
                if rng.gen() {
                    v = &v + b;
                }
            }
            v
        })
        .collect();
    let d2 = F2Matrix::from_columns(n, &cols).unwrap();
    ChainComplex::validate(d2, d1).unwrap()
}

/// Catalog codes small enough for every check, plus small random complexes.
pub fn random_code(rng: &mut ChaCha8Rng) -> CssCode {
    const NAMES: [&str; 8] = [
        "steane",
        "reed_muller_15",
        "trivial",
        "no_check:2",
        "surface:2x2",
        "surface:3x2",
        "surface:3x3",
        "toric:2",
    ];
    if rng.gen_bool(0.3) {
        return CssCode::from_complex(random_complex(rng, 8));
    }
    let a = catalog::code_by_name(NAMES[rng.gen_range(0..NAMES.len())]).unwrap();
    if rng.gen_bool(0.3) {
        let b = catalog::code_by_name(NAMES[rng.gen_range(0..4)]).unwrap();
        a.direct_sum(&b)
    } else {
        a
    }
}

fn random_element(rng: &mut ChaCha8Rng, basis: &[BitVec], len: usize) -> BitVec {
    let mut v = BitVec::zeros(len);
    for b in basis {
        if rng.gen() {
            v = &v + b;
        }
    }
    v
}

/// A closed subcode: random top generators, their boundaries plus random
/// extras one degree down, and so on.
pub fn random_subcode(rng: &mut ChaCha8Rng, code: &CssCode) -> Subcode {
    let orientation = if rng.gen() {
        Orientation::Z
    } else {
        Orientation::X
    };
    let parent = code.complex();
    let w = match orientation {
        Orientation::Z => parent.clone(),
        Orientation::X => parent.transposed(),
    };
    let [n0, n1, n2] = w.dims();
    let g2: Vec<BitVec> = (0..rng.gen_range(0..=2.min(n2)))
        .map(|_| random_vec(rng, n2))
        .collect();
    let mut g1: Vec<BitVec> = g2.iter().map(|g| w.d2().mul_vec(g)).collect();
    g1.extend((0..rng.gen_range(0..=3.min(n1))).map(|_| random_vec(rng, n1)));
    let mut g0: Vec<BitVec> = g1.iter().map(|g| w.d1().mul_vec(g)).collect();
    g0.extend((0..rng.gen_range(0..=1.min(n0))).map(|_| random_vec(rng, n0)));
    let (p2, p0) = match orientation {
        Orientation::Z => (g2, g0),
        Orientation::X => (g0, g2),
    };
    Subcode::from_generators(parent, orientation, p2, g1, p0).unwrap()
}

/// Chain-level and homology-level exactness of `V → E → E/V`, and the
/// Corollary flags against the ranks of the maps around `H1(E)`.
pub fn check_merge_exactness(rng: &mut ChaCha8Rng) -> Check {
    let code = random_code(rng);
    let v = random_subcode(rng, &code);
    let m = quotient_merge(&v).map_err(|e| e.to_string())?;
    for deg in 0..3 {
        let ker = kernel_basis(m.p().component(deg));
        let im = image_basis(m.i().component(deg));
        ensure!(ker == im, "degree {deg}: ker p != im i");
    }
    let r = analyze_merge(&m, &v).map_err(|e| e.to_string())?;
    ensure!(
        kernel_basis(&r.induced) == image_basis(&r.i1_star),
        "ker p1* != im i1*"
    );
    let rank_p = r.induced.rank();
    ensure!(
        rank_p + r.i1_star.rank() == r.h1_source_dim,
        "rank p1* + rank i1* != dim H1(E)"
    );
    // The connecting map's image is ker i0*; its kernel is im p1*.
    ensure!(
        r.h1_quotient_dim - rank_p == r.h0_sub_dim - r.i0_star.rank(),
        "coker p1* and ker i0* differ in dimension"
    );
    ensure!(
        r.surjective == (rank_p == r.h1_quotient_dim),
        "surjective flag vs rank"
    );
    ensure!(
        r.injective == (rank_p == r.h1_source_dim),
        "injective flag vs rank"
    );
    ensure!(
        r.surjective == r.i0_injective,
        "surjective iff i0* injective"
    );
    ensure!(r.injective == r.i1_zero, "injective iff i1* = 0");
    ensure!(
        !r.surjective_by_dimension || r.surjective,
        "H0(V)=0 must force surjectivity"
    );
    ensure!(
        !r.injective_by_dimension || r.injective,
        "H1(V)=0 must force injectivity"
    );
    Ok(())
}

/// Any Z basis, scrambled by an invertible change and stabilisers, gets an X
/// basis with `x_i · z_j = δ_ij`.
pub fn check_dual_basis(rng: &mut ChaCha8Rng) -> Check {
    let code = random_code(rng);
    let k = code.k();
    let n = code.n();
    let z = code.z_logicals().representatives().to_vec();
    let stabs = code.z_stabilisers();
    let change = loop {
        let m = random_matrix(rng, k, k);
        if m.rank() == k {
            break m;
        }
    };
    let reps: Vec<BitVec> = (0..k)
        .map(|i| {
            let mut v = random_element(rng, stabs.basis(), n);
            for (j, zj) in z.iter().enumerate() {
                if change.get(i, j) {
                    v = &v + zj;
                }
            }
            v
        })
        .collect();
    let code = code.with_z_logicals(reps).map_err(|e| e.to_string())?;
    let p = pairing_matrix(code.x_logicals(), code.z_logicals());
    ensure!(
        p == F2Matrix::identity(k),
        "pairing is not the identity: {p:?}"
    );
    let hz = code.hz();
    for x in code.x_logicals().representatives() {
        ensure!(hz.mul_vec(x).is_zero(), "X logical fails a Z check");
    }
    Ok(())
}

fn enumerate_dim(count: usize) -> usize {
    count.trailing_zeros() as usize
}

fn count_kernel(m: &F2Matrix, n: usize) -> usize {
    (0..1u64 << n)
        .filter(|&x| m.mul_vec(&BitVec::from_u64(n, x)).is_zero())
        .count()
}

fn count_image(m: &F2Matrix) -> usize {
    let k = m.ncols();
    let mut seen: Vec<BitVec> = (0..1u64 << k)
        .map(|x| m.mul_vec(&BitVec::from_u64(k, x)))
        .collect();
    seen.sort_by_key(|v| v.to_string());
    seen.dedup();
    seen.len()
}

/// Homology and cohomology in degree 1 against enumeration of all cycles,
/// boundaries, cocycles and coboundaries.
pub fn check_homology_duality(rng: &mut ChaCha8Rng) -> Check {
    let c = random_complex(rng, 7);
    let n = c.dim(1);
    let h1 = enumerate_dim(count_kernel(c.d1(), n)) - enumerate_dim(count_image(c.d2()));
    let h1_co = enumerate_dim(count_kernel(&c.d2().transpose(), n))
        - enumerate_dim(count_image(&c.d1().transpose()));
    ensure!(h1 == h1_co, "enumerated H1 {h1} != H^1 {h1_co}");
    ensure!(
        homology(&c, 1).dim() == h1,
        "homology dim {} != {h1}",
        homology(&c, 1).dim()
    );
    ensure!(cohomology(&c, 1).dim() == h1, "cohomology dim differs");
    Ok(())
}

/// `merge_decompose(p)` returns a quotient merge and an isomorphism `σ` with
/// `σ ∘ p̃ = p`.
pub fn check_merge_decompose(rng: &mut ChaCha8Rng) -> Check {
    let code = random_code(rng);
    let v = random_subcode(rng, &code);
    let m = quotient_merge(&v).map_err(|e| e.to_string())?;
    let (tilde, sigma) = merge_decompose(m.p()).map_err(|e| e.to_string())?;
    let round = tilde.p().then(&sigma).map_err(|e| e.to_string())?;
    for deg in 0..3 {
        ensure!(
            round.component(deg) == m.p().component(deg),
            "degree {deg}: σ∘p̃ != p"
        );
        ensure!(
            sigma.is_injective(deg) && sigma.is_surjective(deg),
            "σ is not invertible in degree {deg}"
        );
    }
    Ok(())
}

fn random_pauli(rng: &mut ChaCha8Rng, n: usize) -> PauliOperator {
    let mut p = PauliOperator::new(random_vec(rng, n), random_vec(rng, n)).unwrap();
    p.negative = rng.gen();
    p
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(n, amps).unwrap()
}

fn same_up_to_phase(a: &StateVector, b: &StateVector) -> bool {
    (a.norm() - b.norm()).abs() < 1e-9 && a.approx_eq_up_to_phase(b, 1e-9)
}

/// `U_o · P = ± P' · U_{o ⊕ flips}` on a random state, for parity maps in
/// both frames and for stabiliser projections.
pub fn check_pauli_transport(rng: &mut ChaCha8Rng) -> Check {
    let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let a = random_matrix(rng, rows, cols);
    let op = match rng.gen_range(0..3) {
        0 => PhysicalOp::ParityMap(a),
        1 => PhysicalOp::HadamardConjugatedParityMap(a),
        _ => PhysicalOp::Projection {
            stabiliser: random_pauli(rng, cols),
            outcome: rng.gen(),
        },
    };
    let n = op.input_qubits();
    let p = random_pauli(rng, n);
    let psi = random_state(rng, n);
    let outcomes: Vec<bool> = (0..op.measurement_count()).map(|_| rng.gen()).collect();
    let (moved, flips) = op.transport(&p).map_err(|e| e.to_string())?;
    let shifted: Vec<bool> = outcomes.iter().zip(&flips).map(|(o, f)| o ^ f).collect();
    let lhs = op
        .apply_branch(&psi.apply_pauli(&p), &outcomes)
        .map_err(|e| e.to_string())?;
    let rhs = op
        .apply_branch(&psi, &shifted)
        .map_err(|e| e.to_string())?
        .apply_pauli(&moved);
    ensure!(
        same_up_to_phase(&lhs, &rhs),
        "{op:?} with {p}: transport mismatch"
    );
    Ok(())
}

/// Every pair of catalog codes with a known distance satisfies the bound, and
/// the direct sum is strict unless both summands have no checks.
pub fn check_singleton_pairs() -> Result<usize, String> {
    let codes: Vec<CssCode> = catalog::entries()
        .into_iter()
        .filter_map(|e| {
            let d = e.expected.2?;
            Some(
                catalog::code_by_name(&e.name)
                    .unwrap()
                    .with_known_distance(d),
            )
        })
        .collect();
    let mut pairs = 0;
    for a in &codes {
        for b in &codes {
            let r = singleton_check(a, b);
            ensure!(
                r.first.holds && r.second.holds && r.sum.holds,
                "bound fails for {} ⊕ {}",
                a.parameters(),
                b.parameters()
            );
            let both_free = a.n() == a.k() && b.n() == b.k();
            ensure!(
                r.sum_strict != both_free,
                "strictness wrong for {} ⊕ {}",
                a.parameters(),
                b.parameters()
            );
            pairs += 1;
        }
    }
    Ok(pairs)
}
