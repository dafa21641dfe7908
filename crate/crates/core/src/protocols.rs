//! Surgery plans: the merge/split CNOT, the Steane to Reed-Muller switch,
//! low-weight subcode decomposition, Pauli propagation, measurement
//! corrections and the Singleton check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, SubcodeSpec};
use crate::chaincomplex::{induced_on_homology, ChainMap, HomologyBasis};
use crate::csscode::{
    distance_bruteforce, encoder_isometry, CssCode, LogicalState, PauliOperator,
    DEFAULT_DISTANCE_CAP,
};
use crate::error::{Error, Result};
use crate::f2linalg::{BitVec, F2Matrix, Subspace};
use crate::simverify::{
    extract_logical_channel_branch, physical_op_sequence, ComplexMatrix, PhysicalOp, StateVector,
};
use crate::surgery::{quotient_merge, MergeResult, Orientation, Subcode};

/// Where the auxiliary logical qubit of the CNOT lives.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum AncillaStrategy {
    TrivialQubit,
    ProvidedCode(Box<CssCode>),
    /// A spare logical qubit of the code itself.
    EmbeddedLogical(usize),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum StepKind {
    InitAncillaPlus,
    ZMerge { subcode: SubcodeSpec },
    XSplit,
    XMerge { subcode: SubcodeSpec },
    ZSplit,
    MeasureAncillaZ,
    MeasureAncillaX,
}

/// Effect of a step on the logical qubits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum LogicalAction {
    /// Insert a logical qubit at `index` in `state`.
    Prepare { index: usize, state: LogicalState },
    /// Z-logical matrix of a Z-preserving map; acts as `H R_F H`.
    ZType(F2Matrix),
    /// X-logical matrix of an X-preserving map; acts as `R_G`.
    XType(F2Matrix),
    /// Measure logical `index` and drop it.
    Measure {
        index: usize,
        orientation: Orientation,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanStep {
    pub kind: StepKind,
    pub before: CssCode,
    pub after: CssCode,
    pub logical: LogicalAction,
    pub ops: Vec<PhysicalOp>,
}

/// Apply `pauli` when the listed outcome bits have odd parity, right after
/// step `after_step` (at the end of the plan when `None`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectionRule {
    pub outcomes: Vec<usize>,
    pub after_step: Option<usize>,
    pub description: String,
    pub pauli: PauliOperator,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurgeryPlan {
    pub name: String,
    pub steps: Vec<PlanStep>,
    /// Logical index of the auxiliary qubit in the working code.
    pub ancilla: usize,
    pub control: Option<usize>,
    pub target: Option<usize>,
    /// Merges use decomposed low-weight subcodes.
    pub locality: bool,
    pub corrections: Vec<CorrectionRule>,
}

impl SurgeryPlan {
    /// Code the physical ops start from (after the ancilla is introduced).
    #[must_use]
    pub fn working_code(&self) -> &CssCode {
        &self.steps[0].after
    }

    #[must_use]
    pub fn final_code(&self) -> &CssCode {
        &self.steps.last().expect("plans are nonempty").after
    }

    /// Flattened physical ops.
    #[must_use]
    pub fn ops(&self) -> Vec<PhysicalOp> {
        self.steps
            .iter()
            .flat_map(|s| s.ops.iter().cloned())
            .collect()
    }

    #[must_use]
    pub fn measurement_count(&self) -> usize {
        self.ops().iter().map(PhysicalOp::measurement_count).sum()
    }

    /// Splits a flat outcome record into per-op records.
    pub fn split_outcomes(&self, outcomes: &[bool]) -> Result<Vec<Vec<bool>>> {
        if outcomes.len() != self.measurement_count() {
            return Err(Error::DimensionMismatch {
                context: "outcome record length",
                expected: self.measurement_count(),
                found: outcomes.len(),
            });
        }
        let mut rest = outcomes;
        Ok(self
            .ops()
            .iter()
            .map(|op| {
                let (head, tail) = rest.split_at(op.measurement_count());
                rest = tail;
                head.to_vec()
            })
            .collect())
    }

    /// Number of data logical qubits (the ancilla excluded).
    #[must_use]
    pub fn data_qubits(&self) -> usize {
        self.working_code().k() - 1
    }

    /// Index of working-code logical `i` among the data logicals.
    #[must_use]
    pub fn data_index(&self, i: usize) -> usize {
        if i > self.ancilla {
            i - 1
        } else {
            i
        }
    }

    /// Adjacent snapshots agree and op qubit counts chain.
    pub fn validate(&self) -> Result<()> {
        for pair in self.steps.windows(2) {
            if pair[0].after != pair[1].before {
                return Err(Error::Unsupported(
                    "adjacent plan steps disagree on the code".into(),
                ));
            }
        }
        let mut n = self.working_code().n();
        for op in self.ops() {
            if op.input_qubits() != n {
                return Err(Error::DimensionMismatch {
                    context: "plan op input qubits",
                    expected: n,
                    found: op.input_qubits(),
                });
            }
            n = op.output_qubits();
        }
        Ok(())
    }
}

fn x_basis(code: &CssCode) -> Result<HomologyBasis> {
    HomologyBasis::from_representatives(
        &code.complex().transposed(),
        1,
        code.x_logicals().representatives().to_vec(),
    )
}

/// Image of a list of vectors under a matrix, as a spanning list.
fn images(m: &F2Matrix, vs: &[BitVec]) -> Vec<BitVec> {
    Subspace::from_generators(m.nrows(), vs.iter().map(|v| m.mul_vec(v)))
        .expect("image lengths")
        .basis()
        .to_vec()
}

/// Merged code whose logical basis is the image of the source basis with
/// entry `drop` removed.
fn merged_with_basis(m: &MergeResult, src: &[BitVec], drop: usize) -> Result<CssCode> {
    let reps: Vec<BitVec> = src
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != drop)
        .map(|(_, r)| m.p().component(1).mul_vec(r))
        .collect();
    let merged = m.merged_code();
    match m.orientation() {
        Orientation::Z => merged.with_z_logicals(reps),
        Orientation::X => merged.with_x_logicals(reps),
    }
}

struct MergeSplit {
    merge: PlanStep,
    split: PlanStep,
}

/// A Z merge of `e` along `spec` followed by its dual X split, keeping all
/// logicals except `drop`.
fn z_merge_split(e: &CssCode, spec: SubcodeSpec, drop: usize) -> Result<MergeSplit> {
    let v = spec.build(e.complex())?;
    let m = quotient_merge(&v)?;
    let q = merged_with_basis(&m, e.z_logicals().representatives(), drop)?;
    let p = m.p();
    let merge = PlanStep {
        kind: StepKind::ZMerge { subcode: spec },
        before: e.clone(),
        after: q.clone(),
        logical: LogicalAction::ZType(induced_on_homology(p, 1, e.z_logicals(), q.z_logicals())?),
        ops: physical_op_sequence(p, Orientation::Z),
    };
    let s = p.transpose();
    let split = PlanStep {
        kind: StepKind::XSplit,
        before: q.clone(),
        after: e.clone(),
        logical: LogicalAction::XType(induced_on_homology(&s, 1, &x_basis(&q)?, &x_basis(e)?)?),
        ops: physical_op_sequence(&s, Orientation::X),
    };
    Ok(MergeSplit { merge, split })
}

/// An X merge of `e` along `spec` followed by its dual Z split.
fn x_merge_split(e: &CssCode, spec: SubcodeSpec, drop: usize) -> Result<MergeSplit> {
    let w = spec.build(e.complex())?;
    let m = quotient_merge(&w)?;
    let r = merged_with_basis(&m, e.x_logicals().representatives(), drop)?;
    let q = m.p();
    let merge = PlanStep {
        kind: StepKind::XMerge { subcode: spec },
        before: e.clone(),
        after: r.clone(),
        logical: LogicalAction::XType(induced_on_homology(q, 1, &x_basis(e)?, &x_basis(&r)?)?),
        ops: physical_op_sequence(q, Orientation::X),
    };
    let t = q.transpose();
    let split = PlanStep {
        kind: StepKind::ZSplit,
        before: r.clone(),
        after: e.clone(),
        logical: LogicalAction::ZType(induced_on_homology(&t, 1, r.z_logicals(), e.z_logicals())?),
        ops: physical_op_sequence(&t, Orientation::Z),
    };
    Ok(MergeSplit { merge, split })
}

/// The code with X and Z exchanged, logical bases swapped accordingly.
fn dual_code(code: &CssCode) -> CssCode {
    CssCode::from_complex(code.complex().transposed())
        .with_logicals(
            code.x_logicals().representatives().to_vec(),
            code.z_logicals().representatives().to_vec(),
        )
        .expect("dual bases stay dual")
}

/// Merge/split CNOT with `control` and `target` logical indices of `code`.
///
/// `locality` is an optional weight cap: when set, both merge subcodes are
/// spanned by generators of at most that weight (see
/// [`decompose_merge_support`]).
pub fn build_cnot_plan(
    code: &CssCode,
    control: usize,
    target: usize,
    ancilla: &AncillaStrategy,
    locality: Option<usize>,
) -> Result<SurgeryPlan> {
    let k = code.k();
    if control == target {
        return Err(Error::ControlEqualsTarget);
    }
    for index in [control, target] {
        if index >= k {
            return Err(Error::LogicalIndexOutOfRange { index, k });
        }
    }
    let (e, a) = match ancilla {
        AncillaStrategy::TrivialQubit => (code.direct_sum(&catalog::trivial_qubit()), k),
        AncillaStrategy::ProvidedCode(anc) => {
            if anc.k() != 1 {
                return Err(Error::Unsupported(format!(
                    "ancilla code must encode one logical qubit, not {}",
                    anc.k()
                )));
            }
            let dist = |x: &CssCode| {
                x.distance()
                    .or_else(|| distance_bruteforce(x, DEFAULT_DISTANCE_CAP))
            };
            if let (Some(da), Some(dc)) = (dist(anc), dist(code)) {
                if da < dc {
                    return Err(Error::AncillaDistanceTooSmall {
                        ancilla: da,
                        code: dc,
                    });
                }
            }
            (code.direct_sum(anc), k)
        }
        AncillaStrategy::EmbeddedLogical(i) => {
            if *i >= k {
                return Err(Error::LogicalIndexOutOfRange { index: *i, k });
            }
            if *i == control || *i == target {
                return Err(Error::Unsupported(
                    "embedded ancilla must differ from control and target".into(),
                ));
            }
            (code.clone(), *i)
        }
    };
    let z = e.z_logicals().representatives();
    let x = e.x_logicals().representatives();

    let v1 = match locality {
        Some(w) => decompose_merge_support(&e, &z[control], &z[a], w)?,
        None => vec![&z[control] + &z[a]],
    };
    let v_spec = SubcodeSpec {
        orientation: Orientation::Z,
        v2: vec![],
        v0: images(e.hx(), &v1),
        v1,
    };
    let zs = z_merge_split(&e, v_spec, a)?;

    let w1 = match locality {
        Some(w) => decompose_merge_support(&dual_code(&e), &x[target], &x[a], w)?,
        None => vec![&x[target] + &x[a]],
    };
    let w_spec = SubcodeSpec {
        orientation: Orientation::X,
        v2: images(&e.hz(), &w1),
        v1: w1,
        v0: vec![],
    };
    let xs = x_merge_split(&e, w_spec, a)?;

    let steps = vec![
        PlanStep {
            kind: StepKind::InitAncillaPlus,
            before: code.clone(),
            after: e.clone(),
            logical: LogicalAction::Prepare {
                index: a,
                state: LogicalState::Plus,
            },
            ops: vec![],
        },
        zs.merge,
        zs.split,
        xs.merge,
        xs.split,
        PlanStep {
            kind: StepKind::MeasureAncillaZ,
            before: e.clone(),
            after: e.clone(),
            logical: LogicalAction::Measure {
                index: a,
                orientation: Orientation::Z,
            },
            ops: vec![PhysicalOp::Projection {
                stabiliser: PauliOperator::z_type(z[a].clone()),
                outcome: false,
            }],
        },
    ];
    let mut plan = SurgeryPlan {
        name: "cnot".into(),
        steps,
        ancilla: a,
        control: Some(control),
        target: Some(target),
        locality: locality.is_some(),
        corrections: vec![],
    };
    if locality.is_none() {
        plan.corrections = cnot_corrections(&plan, &e, control, target)?;
    }
    plan.validate()?;
    Ok(plan)
}

/// Outcome bit positions of each step's ops.
fn step_outcome_ranges(plan: &SurgeryPlan) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    plan.steps
        .iter()
        .map(|s| {
            let len: usize = s.ops.iter().map(PhysicalOp::measurement_count).sum();
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

fn cnot_corrections(
    plan: &SurgeryPlan,
    e: &CssCode,
    control: usize,
    target: usize,
) -> Result<Vec<CorrectionRule>> {
    let ranges = step_outcome_ranges(plan);
    let single = |step: usize| -> Result<usize> {
        let r = ranges[step].clone();
        if r.len() != 1 {
            return Err(Error::Unsupported(format!(
                "expected one outcome from step {step}, found {}",
                r.len()
            )));
        }
        Ok(r.start)
    };
    let (zz, xx, anc) = (single(1)?, single(3)?, single(5)?);
    let mut rules = Vec::new();
    // A flipped kernel bit leaves the branch Pauli as a frame on the split
    // output, which now sits on the opposite projector.
    for (step, bit) in [(1, zz), (3, xx)] {
        let op = plan.steps[step]
            .ops
            .iter()
            .find(|op| op.measurement_count() == 1)
            .expect("one measured op");
        rules.push(CorrectionRule {
            outcomes: vec![bit],
            after_step: Some(step + 1),
            description: "Pauli frame of the merge kernel".into(),
            pauli: op.branch_pauli(&[true]).expect("parity op"),
        });
    }
    rules.push(CorrectionRule {
        outcomes: vec![zz, anc],
        after_step: None,
        description: "logical X on the target".into(),
        pauli: PauliOperator::x_type(e.x_logicals().representatives()[target].clone()),
    });
    rules.push(CorrectionRule {
        outcomes: vec![xx],
        after_step: None,
        description: "logical Z on the control".into(),
        pauli: PauliOperator::z_type(e.z_logicals().representatives()[control].clone()),
    });
    Ok(rules)
}

/// Correction rules that fire for an outcome record (`true` = −1).
pub fn measurement_correction(
    plan: &SurgeryPlan,
    outcomes: &[bool],
) -> Result<Vec<CorrectionRule>> {
    plan.split_outcomes(outcomes)?;
    if outcomes.iter().all(|o| !o) {
        return Ok(vec![]);
    }
    if plan.locality {
        return Err(Error::Unsupported(
            "corrections for negative outcomes are not derived for decomposed merges".into(),
        ));
    }
    Ok(plan
        .corrections
        .iter()
        .filter(|r| r.outcomes.iter().filter(|&&i| outcomes[i]).count() % 2 == 1)
        .cloned()
        .collect())
}

/// Qubit onto which a −1 outcome of the first merge is relocated: a qubit of
/// `supp(x_c) ∩ supp(z_c + z_a + δ)` where `δ` marks a qubit of `z_a`
/// outside `z_c`.
pub fn relocation_qubit(plan: &SurgeryPlan) -> Result<usize> {
    let control = plan.control.ok_or(Error::EmptyOverlap)?;
    let e = plan.working_code();
    let z = e.z_logicals().representatives();
    let (zc, za) = (&z[control], &z[plan.ancilla]);
    let delta = za
        .iter_ones()
        .find(|&q| !zc.get(q))
        .ok_or(Error::EmptyOverlap)?;
    let mut v = zc + za;
    v.flip(delta);
    let xc = &e.x_logicals().representatives()[control];
    v.and(xc).first_one().ok_or(Error::EmptyOverlap)
}

/// Generators `v_j` of weight at most `max_weight` with `Σ v_j = u + w`
/// whose span meets the cycles only inside `stabilisers + Span{u + w}`.
///
/// Depth-first search over partitions of `supp(u + w)` into blocks, largest
/// blocks first; a partial partition is abandoned as soon as its span
/// already contains a forbidden cycle.
pub fn decompose_merge_support(
    code: &CssCode,
    u: &BitVec,
    w: &BitVec,
    max_weight: usize,
) -> Result<Vec<BitVec>> {
    const NODE_CAP: usize = 200_000;
    let t = u + w;
    if t.is_zero() || max_weight == 0 {
        return Err(Error::DecompositionInfeasible(
            "nothing to decompose or zero weight cap".into(),
        ));
    }
    if t.weight() <= max_weight {
        return Ok(vec![t]);
    }
    let c = code.complex();
    let cycles = c.cycles(1);
    let allowed = c
        .boundaries(1)
        .sum(&Subspace::from_generators(t.len(), [t.clone()])?);
    let n = t.len();
    let admissible = |blocks: &[BitVec]| {
        Subspace::from_generators(n, blocks.iter().cloned())
            .expect("lengths")
            .intersection(&cycles)
            .is_subspace_of(&allowed)
    };

    struct Search<'a> {
        n: usize,
        max_weight: usize,
        nodes: usize,
        admissible: &'a dyn Fn(&[BitVec]) -> bool,
    }
    impl Search<'_> {
        fn run(&mut self, remaining: &[usize], blocks: &mut Vec<BitVec>) -> Option<Vec<BitVec>> {
            self.nodes += 1;
            if self.nodes > NODE_CAP || !(self.admissible)(blocks) {
                return None;
            }
            let Some((&first, rest)) = remaining.split_first() else {
                return Some(blocks.clone());
            };
            for extra in (0..self.max_weight.min(remaining.len())).rev() {
                let mut chosen = vec![0; extra];
                if let Some(found) = self.choose(first, rest, &mut chosen, 0, 0, blocks) {
                    return Some(found);
                }
                if self.nodes > NODE_CAP {
                    return None;
                }
            }
            None
        }

        fn choose(
            &mut self,
            first: usize,
            rest: &[usize],
            chosen: &mut Vec<usize>,
            depth: usize,
            from: usize,
            blocks: &mut Vec<BitVec>,
        ) -> Option<Vec<BitVec>> {
            if depth == chosen.len() {
                let mut block = vec![first];
                block.extend(chosen.iter().map(|&i| rest[i]));
                let remaining: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !chosen.contains(i))
                    .map(|(_, &q)| q)
                    .collect();
                blocks.push(BitVec::from_indices(self.n, &block));
                let found = self.run(&remaining, blocks);
                blocks.pop();
                return found;
            }
            for i in from..rest.len() {
                chosen[depth] = i;
                if let Some(found) = self.choose(first, rest, chosen, depth + 1, i + 1, blocks) {
                    return Some(found);
                }
                if self.nodes > NODE_CAP {
                    return None;
                }
            }
            None
        }
    }

    let support: Vec<usize> = t.iter_ones().collect();
    let mut search = Search {
        n,
        max_weight,
        nodes: 0,
        admissible: &admissible,
    };
    search.run(&support, &mut Vec::new()).ok_or_else(|| {
        Error::DecompositionInfeasible(format!(
            "no admissible split of a weight-{} support into blocks of weight <= {max_weight}",
            t.weight()
        ))
    })
}

/// Commutes `p` through a step: returns the output Pauli and the outcome
/// bits it flips.
pub fn propagate_pauli(step: &PlanStep, p: &PauliOperator) -> Result<(PauliOperator, Vec<bool>)> {
    let mut cur = p.clone();
    let mut flips = Vec::new();
    for op in &step.ops {
        let (next, f) = op.transport(&cur)?;
        cur = next;
        flips.extend(f);
    }
    Ok((cur, flips))
}

/// Steane to 15-qubit Reed-Muller switch and back.
///
/// Steps: prepare the Reed-Muller logical in `|+⟩`, Z-merge along the
/// subcode pairing Steane qubit `i` with Reed-Muller qubit `i` and Steane
/// checks with the matching cells and faces; then X-split and measure the
/// Reed-Muller logical in the X basis. The first two steps are the switch.
pub fn code_switch_plan() -> Result<SurgeryPlan> {
    let s = catalog::steane();
    let rm = catalog::reed_muller_15();
    let e = s.direct_sum(&rm);
    let spec = switch_subcode(&s, &rm);
    let ms = z_merge_split(&e, spec, 1)?;
    let x_a = e.x_logicals().representatives()[1].clone();
    let steps = vec![
        PlanStep {
            kind: StepKind::InitAncillaPlus,
            before: s,
            after: e.clone(),
            logical: LogicalAction::Prepare {
                index: 1,
                state: LogicalState::Plus,
            },
            ops: vec![],
        },
        ms.merge,
        ms.split,
        PlanStep {
            kind: StepKind::MeasureAncillaX,
            before: e.clone(),
            after: e,
            logical: LogicalAction::Measure {
                index: 1,
                orientation: Orientation::X,
            },
            ops: vec![PhysicalOp::Projection {
                stabiliser: PauliOperator::x_type(x_a),
                outcome: false,
            }],
        },
    ];
    let plan = SurgeryPlan {
        name: "steane_reed_muller_switch".into(),
        steps,
        ancilla: 1,
        control: None,
        target: None,
        locality: false,
        corrections: vec![],
    };
    plan.validate()?;
    Ok(plan)
}

/// Subcode of Steane ⊕ RM15 identifying qubits and checks pairwise.
#[must_use]
pub fn switch_subcode(s: &CssCode, rm: &CssCode) -> SubcodeSpec {
    let (ns, nr) = (s.n(), rm.n());
    let (xs, xr) = (s.hx().nrows(), rm.hx().nrows());
    let (zs, zr) = (s.hz().nrows(), rm.hz().nrows());
    SubcodeSpec {
        orientation: Orientation::Z,
        v2: (0..zs)
            .map(|j| {
                BitVec::from_indices(zs + zr, &[j, zs + catalog::reed_muller_face_index(j, 3)])
            })
            .collect(),
        v1: (0..ns)
            .map(|i| BitVec::from_indices(ns + nr, &[i, ns + i]))
            .collect(),
        v0: (0..xs)
            .map(|j| BitVec::from_indices(xs + xr, &[j, xs + j]))
            .collect(),
    }
}

/// Algebraic stabiliser checks for a Z merge: the merge carries the source
/// Z stabilisers onto exactly the merged ones, and pulls merged X checks
/// back into source X stabilisers.
#[derive(Clone, Debug, Serialize)]
pub struct StabiliserCheck {
    pub z_stabilisers_preserved: bool,
    pub x_checks_pulled_back: bool,
}

#[must_use]
pub fn check_merge_stabilisers(
    source: &CssCode,
    merged: &CssCode,
    p1: &F2Matrix,
) -> StabiliserCheck {
    let pushed = source.z_stabilisers().image_under(p1);
    let pulled = merged.x_stabilisers().image_under(&p1.transpose());
    StabiliserCheck {
        z_stabilisers_preserved: pushed == merged.z_stabilisers(),
        x_checks_pulled_back: pulled.is_subspace_of(&source.x_stabilisers()),
    }
}

/// Composes the per-step logical actions into a matrix on the data logical
/// qubits, normalized as in [`ComplexMatrix::normalized`]. Measurements are
/// taken on the given outcomes (`false` = +1).
pub fn compose_logical(plan: &SurgeryPlan, measured: &[bool]) -> Result<ComplexMatrix> {
    let k = plan.data_qubits();
    let mut m = ComplexMatrix::zeros(1 << k, 1 << k);
    for col in 0..1usize << k {
        let mut s = StateVector::basis_state(k, col);
        let mut outcomes = measured.iter();
        for step in &plan.steps {
            s = match &step.logical {
                LogicalAction::Prepare { index, state } => insert_qubit(&s, *index, *state),
                LogicalAction::ZType(f) => {
                    PhysicalOp::HadamardConjugatedParityMap(f.transpose()).apply_linear(&s)?
                }
                LogicalAction::XType(g) => PhysicalOp::ParityMap(g.clone()).apply_linear(&s)?,
                LogicalAction::Measure { index, orientation } => {
                    let minus = *outcomes.next().unwrap_or(&false);
                    let state = match (orientation, minus) {
                        (Orientation::Z, false) => LogicalState::Zero,
                        (Orientation::Z, true) => LogicalState::One,
                        (Orientation::X, false) => LogicalState::Plus,
                        (Orientation::X, true) => LogicalState::Minus,
                    };
                    remove_qubit(&s, *index, state)
                }
            };
        }
        if s.n() != k {
            return Err(Error::DimensionMismatch {
                context: "composed logical qubits",
                expected: k,
                found: s.n(),
            });
        }
        for (r, a) in s.amplitudes().iter().enumerate() {
            m.data[r * m.cols + col] = *a;
        }
    }
    m.normalized()
}

fn single_qubit(state: LogicalState) -> [Complex64; 2] {
    let s = StateVector::basis_state(1, 0);
    let enc = crate::csscode::Encoder::from_columns(
        1,
        1,
        vec![s.clone(), StateVector::basis_state(1, 1)],
    )
    .expect("one qubit");
    let col = enc.with_fixed_logical(0, state).column(0).clone();
    [col.amplitudes()[0], col.amplitudes()[1]]
}

fn insert_qubit(s: &StateVector, index: usize, state: LogicalState) -> StateVector {
    let amps = single_qubit(state);
    let n = s.n() + 1;
    let mut out = StateVector::zero_amplitudes(n);
    for (x, a) in s.amplitudes().iter().enumerate() {
        let low = x & ((1 << index) - 1);
        let high = (x >> index) << (index + 1);
        for (bit, b) in amps.iter().enumerate() {
            out.amplitudes_mut()[low | high | (bit << index)] = a * b;
        }
    }
    out
}

fn remove_qubit(s: &StateVector, index: usize, state: LogicalState) -> StateVector {
    let amps = single_qubit(state);
    let mut out = StateVector::zero_amplitudes(s.n() - 1);
    for (x, a) in s.amplitudes().iter().enumerate() {
        let bit = x >> index & 1;
        let low = x & ((1 << index) - 1);
        let high = (x >> (index + 1)) << index;
        out.amplitudes_mut()[low | high] += amps[bit].conj() * a;
    }
    out
}

/// Which correction rules [`plan_channel`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corrections {
    None,
    /// Only the frame fixes placed inside the plan.
    FrameOnly,
    Full,
}

/// Logical channel of a plan on one outcome branch, with the chosen
/// corrections for that branch.
pub fn plan_channel(
    plan: &SurgeryPlan,
    outcomes: &[bool],
    corrections: Corrections,
) -> Result<ComplexMatrix> {
    let rules: Vec<CorrectionRule> = match corrections {
        Corrections::None => vec![],
        Corrections::FrameOnly => measurement_correction(plan, outcomes)?
            .into_iter()
            .filter(|r| r.after_step.is_some())
            .collect(),
        Corrections::Full => measurement_correction(plan, outcomes)?,
    };
    let mut split = plan.split_outcomes(outcomes)?.into_iter();
    let (mut ops, mut per_op) = (Vec::new(), Vec::new());
    let fire = |at: Option<usize>, ops: &mut Vec<PhysicalOp>, per_op: &mut Vec<Vec<bool>>| {
        for r in rules.iter().filter(|r| r.after_step == at) {
            ops.push(PhysicalOp::PauliGate(r.pauli.clone()));
            per_op.push(vec![]);
        }
    };
    for (i, step) in plan.steps.iter().enumerate() {
        for op in &step.ops {
            ops.push(op.clone());
            per_op.push(split.next().expect("split by op"));
        }
        fire(Some(i), &mut ops, &mut per_op);
    }
    fire(None, &mut ops, &mut per_op);
    let a = plan.ancilla;
    let e_in = encoder_isometry(plan.working_code())?.with_fixed_logical(a, LogicalState::Plus);
    let last = plan.steps.last().expect("nonempty");
    let minus = outcomes.last().copied().unwrap_or(false);
    let out_state = match (&last.kind, minus) {
        (StepKind::MeasureAncillaZ, false) => LogicalState::Zero,
        (StepKind::MeasureAncillaZ, true) => LogicalState::One,
        (StepKind::MeasureAncillaX, false) => LogicalState::Plus,
        _ => LogicalState::Minus,
    };
    let e_out = encoder_isometry(plan.final_code())?.with_fixed_logical(a, out_state);
    extract_logical_channel_branch(&ops, &per_op, &e_in, &e_out)
}

/// `CNOT` on `k` qubits as a complex matrix.
#[must_use]
pub fn cnot_matrix(k: usize, control: usize, target: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(1 << k, 1 << k, |r, c| {
        f64::from(u8::from(r == c ^ ((c >> control & 1) << target)))
    })
}

/// Image of each of `X_0..X_{k-1}, Z_0..Z_{k-1}` under conjugation by `u`,
/// found by enumerating all Paulis. Errors if some image is not a Pauli.
pub fn pauli_conjugation_action(u: &ComplexMatrix) -> Result<Vec<PauliOperator>> {
    let dim = u.cols;
    let k = dim.trailing_zeros() as usize;
    if dim != 1 << k || u.rows != dim {
        return Err(Error::Unsupported(
            "conjugation needs a square 2^k matrix".into(),
        ));
    }
    let column = |j: usize| {
        StateVector::from_amplitudes(k, (0..dim).map(|r| u.get(r, j)).collect()).expect("size")
    };
    let cols: Vec<StateVector> = (0..dim).map(column).collect();
    // u P |j⟩ = phase · u|j ⊕ x⟩
    let left = |p: &PauliOperator| -> Vec<StateVector> {
        (0..dim)
            .map(|j| {
                let pj = StateVector::basis_state(k, j).apply_pauli(p);
                let (idx, amp) = pj
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .find(|(_, a)| a.norm() > 0.5)
                    .map(|(i, a)| (i, *a))
                    .expect("Pauli maps basis to basis");
                let mut c = cols[idx].clone();
                for a in c.amplitudes_mut() {
                    *a *= amp;
                }
                c
            })
            .collect()
    };
    let generators: Vec<PauliOperator> = (0..k)
        .map(|i| PauliOperator::x_type(BitVec::unit(k, i)))
        .chain((0..k).map(|i| PauliOperator::z_type(BitVec::unit(k, i))))
        .collect();
    generators
        .iter()
        .map(|g| {
            let lhs = left(g);
            (0..1u64 << (2 * k))
                .map(|bits| {
                    PauliOperator::new(BitVec::from_u64(k, bits), BitVec::from_u64(k, bits >> k))
                        .expect("lengths")
                })
                .find(|q| {
                    let rhs: Vec<StateVector> = cols.iter().map(|c| c.apply_pauli(q)).collect();
                    same_up_to_phase(&lhs, &rhs)
                })
                .ok_or_else(|| Error::Unsupported("conjugate is not a Pauli".into()))
        })
        .collect()
}

fn same_up_to_phase(a: &[StateVector], b: &[StateVector]) -> bool {
    let mut phase: Option<Complex64> = None;
    for (x, y) in a.iter().zip(b) {
        for (p, q) in x.amplitudes().iter().zip(y.amplitudes()) {
            if p.norm() < 1e-9 && q.norm() < 1e-9 {
                continue;
            }
            if p.norm() < 1e-9 || q.norm() < 1e-9 {
                return false;
            }
            let r = p / q;
            match phase {
                None => phase = Some(r),
                Some(ph) if (ph - r).norm() > 1e-9 => return false,
                _ => {}
            }
        }
    }
    true
}

/// Whether conjugation by `u` acts as CNOT(control → target) on Paulis.
pub fn acts_as_cnot(u: &ComplexMatrix, control: usize, target: usize) -> Result<bool> {
    let k = u.cols.trailing_zeros() as usize;
    let images = pauli_conjugation_action(u)?;
    let unit = |i| BitVec::unit(k, i);
    Ok((0..k).all(|i| {
        let mut x = unit(i);
        if i == control {
            x.flip(target);
        }
        let mut z = unit(i);
        if i == target {
            z.flip(control);
        }
        images[i].x == x
            && images[i].z.is_zero()
            && images[k + i].z == z
            && images[k + i].x.is_zero()
    }))
}

/// Singleton-bound bookkeeping for one code.
#[derive(Clone, Debug, Serialize)]
pub struct SingletonEntry {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    /// `n - k`.
    pub redundancy: usize,
    /// `2(d - 1)`, when `d` is known.
    pub bound: Option<usize>,
    pub holds: bool,
    pub saturates: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingletonReport {
    pub first: SingletonEntry,
    pub second: SingletonEntry,
    pub sum: SingletonEntry,
    /// `n - k > 2(d - 1)` for the direct sum.
    pub sum_strict: bool,
}

fn singleton_entry(n: usize, k: usize, d: Option<usize>) -> SingletonEntry {
    let bound = d.map(|d| 2 * (d - 1));
    let redundancy = n - k;
    SingletonEntry {
        n,
        k,
        d,
        redundancy,
        bound,
        holds: bound.is_none_or(|b| redundancy >= b),
        saturates: bound == Some(redundancy),
    }
}

/// Checks `n - k ≥ 2(d - 1)` for both codes and their direct sum, whose
/// distance is the smaller of the two.
#[must_use]
pub fn singleton_check(c: &CssCode, a: &CssCode) -> SingletonReport {
    let dist = |x: &CssCode| {
        x.distance()
            .or_else(|| distance_bruteforce(x, DEFAULT_DISTANCE_CAP))
    };
    let (dc, da) = (dist(c), dist(a));
    let d_sum = match (dc, da) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    };
    let sum = singleton_entry(c.n() + a.n(), c.k() + a.k(), d_sum);
    SingletonReport {
        first: singleton_entry(c.n(), c.k(), dc),
        second: singleton_entry(a.n(), a.k(), da),
        sum_strict: sum.bound.is_none_or(|b| sum.redundancy > b),
        sum,
    }
}

/// Z-merge result for a subcode given by generators on `code`.
pub fn merge_with_spec(code: &CssCode, spec: &SubcodeSpec) -> Result<(Subcode, MergeResult)> {
    let v = spec.build(code.complex())?;
    let m = quotient_merge(&v)?;
    Ok((v, m))
}

/// Chain map of a step's merge, rebuilt from its subcode.
pub fn step_merge_map(step: &PlanStep) -> Result<Option<ChainMap>> {
    match &step.kind {
        StepKind::ZMerge { subcode } | StepKind::XMerge { subcode } => {
            Ok(Some(merge_with_spec(&step.before, subcode)?.1.p().clone()))
        }
        _ => Ok(None),
    }
}
