//! Named codes and the worked merge examples.
//!
//! Qubit numbering used throughout:
//!
//! * Steane: qubits 1..7 at indices 0..6, checks `a = {1,2,3,5}`,
//!   `b = {3,4,5,6}`, `c = {2,5,6,7}` (the same sets serve as X and Z checks).
//! * 15-qubit Reed-Muller: qubits are the nonzero vectors `v ∈ F2^4`. Labels
//!   1..7 are `(m(i), 0)` where `m(i)` records which Steane checks contain
//!   qubit `i`; label 8 is `(0,0,0,1)`; labels 9..15 are `(m(i-8), 1)`.
//!   X checks are the four cells `{v_j = 1}`, Z checks the 18 weight-4 faces
//!   `{v_i = v_j = 1}` and `{v_j = 1, v_l = 0}`.
//! * Surface patches: see [`surface_patch`].

use serde::{Deserialize, Serialize};

use crate::chaincomplex::ChainComplex;
use crate::csscode::CssCode;
use crate::error::{Error, Result};
use crate::f2linalg::{BitVec, F2Matrix, Subspace};
use crate::surgery::{validate_subcode, Orientation, Subcode};

const STEANE_CHECKS: [&str; 3] = ["1110100", "0011110", "0100111"];

#[must_use]
pub fn steane() -> CssCode {
    let h = F2Matrix::parse_rows(&STEANE_CHECKS);
    CssCode::from_parity_checks(h.clone(), h).expect("Steane checks commute")
}

/// Membership of Steane qubit `label` (1..7) in checks a, b, c as bits 0..2.
fn steane_membership(label: usize) -> u64 {
    (0..3).fold(0, |acc, j| {
        let row = STEANE_CHECKS[j].as_bytes();
        acc | (u64::from(row[label - 1] == b'1') << j)
    })
}

/// The 4-bit vector of Reed-Muller qubit `label` (1..15).
#[must_use]
pub fn reed_muller_vector(label: usize) -> u64 {
    match label {
        1..=7 => steane_membership(label),
        8 => 0b1000,
        9..=15 => steane_membership(label - 8) | 0b1000,
        _ => panic!("label {label} out of range"),
    }
}

/// Index of the Z check `{v_j = 1, v_3 = 0}` in [`reed_muller_15`].
#[must_use]
pub fn reed_muller_face_index(j: usize, l: usize) -> usize {
    reed_muller_faces()
        .iter()
        .position(|f| *f == Face::Boundary { on: j, off: l })
        .expect("boundary face exists")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Face {
    Interior(usize, usize),
    Boundary { on: usize, off: usize },
}

fn reed_muller_faces() -> Vec<Face> {
    let mut faces = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            faces.push(Face::Interior(i, j));
        }
    }
    for on in 0..4 {
        for off in 0..4 {
            if on != off {
                faces.push(Face::Boundary { on, off });
            }
        }
    }
    faces
}

#[must_use]
pub fn reed_muller_15() -> CssCode {
    let vectors: Vec<u64> = (1..=15).map(reed_muller_vector).collect();
    let row = |pred: &dyn Fn(u64) -> bool| {
        BitVec::from_bools(&vectors.iter().map(|&v| pred(v)).collect::<Vec<_>>())
    };
    let hx: Vec<BitVec> = (0..4).map(|j| row(&|v| v >> j & 1 == 1)).collect();
    let hz: Vec<BitVec> = reed_muller_faces()
        .into_iter()
        .map(|f| match f {
            Face::Interior(i, j) => row(&|v| v >> i & 1 == 1 && v >> j & 1 == 1),
            Face::Boundary { on, off } => row(&|v| v >> on & 1 == 1 && v >> off & 1 == 0),
        })
        .collect();
    CssCode::from_parity_checks(
        F2Matrix::from_rows(15, hx).expect("row length"),
        F2Matrix::from_rows(15, hz).expect("row length"),
    )
    .expect("cells and faces overlap evenly")
}

/// One physical qubit, no checks.
#[must_use]
pub fn trivial_qubit() -> CssCode {
    no_check(1)
}

/// `n` physical qubits with no checks: `[[n, n, 1]]`.
#[must_use]
pub fn no_check(n: usize) -> CssCode {
    CssCode::from_parity_checks(F2Matrix::zeros(0, n), F2Matrix::zeros(0, n)).expect("no checks")
}

/// Horizontal edge `(r, j)` of a `w × h` patch.
#[must_use]
pub fn patch_h_edge(w: usize, r: usize, j: usize) -> usize {
    r * w + j
}

/// Vertical edge `(r, c)` of a `w × h` patch.
#[must_use]
pub fn patch_v_edge(w: usize, h: usize, r: usize, c: usize) -> usize {
    w * h + r * (w - 1) + c
}

/// Vertex (X check) `(r, c)` of a `w × h` patch.
#[must_use]
pub fn patch_vertex(w: usize, r: usize, c: usize) -> usize {
    r * (w - 1) + c
}

/// Planar surface code with `h` rows of `w` horizontal edges.
///
/// Horizontal edges `(r, j)`, `r < h`, `j < w`, come first (row-major), then
/// vertical edges `(r, c)`, `r < h-1`, `c < w-1`. Vertices `(r, c)` with
/// `c < w-1` carry X checks; faces `(r, j)`, `r < h-1`, are bounded by the
/// horizontal edges `(r, j)`, `(r+1, j)` and the vertical edges to their
/// left and right where present. The left and right boundaries are rough.
///
/// Default logicals: Z along horizontal row 0 (weight `w`), X along
/// horizontal column 0 (weight `h`).
#[must_use]
pub fn surface_patch(w: usize, h: usize) -> CssCode {
    assert!(w >= 1 && h >= 1, "patch dimensions must be positive");
    let n = w * h + (h - 1) * (w - 1);
    let mut hx = Vec::new();
    for r in 0..h {
        for c in 0..w.saturating_sub(1) {
            let mut e = vec![patch_h_edge(w, r, c), patch_h_edge(w, r, c + 1)];
            if r >= 1 {
                e.push(patch_v_edge(w, h, r - 1, c));
            }
            if r + 1 < h {
                e.push(patch_v_edge(w, h, r, c));
            }
            hx.push(BitVec::from_indices(n, &e));
        }
    }
    let mut hz = Vec::new();
    for r in 0..h - 1 {
        for j in 0..w {
            let mut e = vec![patch_h_edge(w, r, j), patch_h_edge(w, r + 1, j)];
            if j >= 1 {
                e.push(patch_v_edge(w, h, r, j - 1));
            }
            if j + 1 < w {
                e.push(patch_v_edge(w, h, r, j));
            }
            hz.push(BitVec::from_indices(n, &e));
        }
    }
    let z = BitVec::from_indices(
        n,
        &(0..w).map(|j| patch_h_edge(w, 0, j)).collect::<Vec<_>>(),
    );
    let x = BitVec::from_indices(
        n,
        &(0..h).map(|r| patch_h_edge(w, r, 0)).collect::<Vec<_>>(),
    );
    CssCode::from_parity_checks(
        F2Matrix::from_rows(n, hx).expect("row length"),
        F2Matrix::from_rows(n, hz).expect("row length"),
    )
    .expect("patch checks commute")
    .with_logicals(vec![z], vec![x])
    .expect("row and column cross once")
}

/// Toric code on an `L × L` torus: qubits on edges, X checks on vertices,
/// Z checks on plaquettes.
#[must_use]
pub fn toric(l: usize) -> CssCode {
    assert!(l >= 2, "toric code needs L >= 2");
    let n = 2 * l * l;
    let h_edge = |r: usize, c: usize| (r % l) * l + c % l;
    let v_edge = |r: usize, c: usize| l * l + (r % l) * l + c % l;
    let mut hx = Vec::new();
    let mut hz = Vec::new();
    for r in 0..l {
        for c in 0..l {
            hx.push(BitVec::from_indices(
                n,
                &[
                    h_edge(r, c),
                    h_edge(r, c + l - 1),
                    v_edge(r, c),
                    v_edge(r + l - 1, c),
                ],
            ));
            hz.push(BitVec::from_indices(
                n,
                &[
                    h_edge(r, c),
                    h_edge(r + 1, c),
                    v_edge(r, c),
                    v_edge(r, c + 1),
                ],
            ));
        }
    }
    CssCode::from_parity_checks(
        F2Matrix::from_rows(n, hx).expect("row length"),
        F2Matrix::from_rows(n, hz).expect("row length"),
    )
    .expect("toric checks commute")
}

/// A named catalog code with the parameters it is expected to have.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub expected: (usize, usize, Option<usize>),
}

/// Names understood by [`code_by_name`], with expected parameters.
#[must_use]
pub fn entries() -> Vec<CatalogEntry> {
    let e = |name: &str, n, k, d| CatalogEntry {
        name: name.into(),
        expected: (n, k, d),
    };
    vec![
        e("steane", 7, 1, Some(3)),
        e("reed_muller_15", 15, 1, Some(3)),
        e("trivial", 1, 1, Some(1)),
        e("no_check:2", 2, 2, Some(1)),
        e("surface:1x1", 1, 1, Some(1)),
        e("surface:2x2", 5, 1, Some(2)),
        e("surface:3x3", 13, 1, Some(3)),
        e("toric:2", 8, 2, Some(2)),
        e("toric:3", 18, 2, Some(3)),
    ]
}

/// Looks up a code: `steane`, `reed_muller_15` (or `rm15`), `trivial`,
/// `no_check:N`, `surface:WxH`, `toric:L`.
pub fn code_by_name(name: &str) -> Result<CssCode> {
    let unknown = || Error::UnknownExample(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    match name.split_once(':') {
        None => match name {
            "steane" => Ok(steane()),
            "reed_muller_15" | "rm15" => Ok(reed_muller_15()),
            "trivial" => Ok(trivial_qubit()),
            _ => Err(unknown()),
        },
        Some(("no_check", n)) => Ok(no_check(num(n)?)),
        Some(("toric", l)) => {
            let l = num(l)?;
            if l < 2 {
                return Err(unknown());
            }
            Ok(toric(l))
        }
        Some(("surface", dims)) => {
            let (w, h) = dims.split_once('x').ok_or_else(unknown)?;
            let (w, h) = (num(w)?, num(h)?);
            if w == 0 || h == 0 {
                return Err(unknown());
            }
            Ok(surface_patch(w, h))
        }
        _ => Err(unknown()),
    }
}

/// Generators of a subcode, before validation against a parent.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SubcodeSpec {
    pub orientation: Orientation,
    pub v2: Vec<BitVec>,
    pub v1: Vec<BitVec>,
    pub v0: Vec<BitVec>,
}

impl SubcodeSpec {
    pub fn build(&self, parent: &ChainComplex) -> Result<Subcode> {
        let span = |deg: usize, g: &[BitVec]| {
            Subspace::from_generators(parent.dim(deg), g.iter().cloned())
        };
        validate_subcode(
            parent,
            span(2, &self.v2)?,
            span(1, &self.v1)?,
            span(0, &self.v0)?,
            self.orientation,
        )
    }

    #[must_use]
    pub fn of(subcode: &Subcode) -> Self {
        Self {
            orientation: subcode.orientation(),
            v2: subcode.space(2).basis().to_vec(),
            v1: subcode.space(1).basis().to_vec(),
            v0: subcode.space(0).basis().to_vec(),
        }
    }
}

/// Facts a worked example is expected to exhibit. `None` means "not stated".
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Expectation {
    /// Error kind expected from subcode validation, if invalid.
    pub error: Option<String>,
    /// Error kind expected from naively gluing the Tanner graph.
    pub naive_gluing_error: Option<String>,
    pub h1_sub: Option<usize>,
    pub h0_sub: Option<usize>,
    pub surjective: Option<bool>,
    pub injective: Option<bool>,
    pub killed: Option<usize>,
    pub created: Option<usize>,
    /// Quotient dimensions at degrees (2, 1, 0).
    pub quotient_dims: Option<(usize, usize, usize)>,
}

/// A worked example: the code being operated on, the subcode, and what
/// should come out.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PaperExample {
    pub name: String,
    pub code: CssCode,
    pub subcode: SubcodeSpec,
    /// Quotient-basis representatives to use instead of the default rule.
    pub quotient_bases: Option<[Option<Vec<BitVec>>; 3]>,
    /// Qubit pairs identified by the naive Tanner-graph gluing.
    pub glued_pairs: Vec<(usize, usize)>,
    pub expected: Expectation,
}

pub const EXAMPLE_NAMES: [&str; 8] = [
    "welding",
    "partial_boundary",
    "internal_cylinder",
    "wrong_merge",
    "virtual_merge",
    "steane_z_subcode",
    "steane_x_subcode",
    "steane_invalid_subcode",
];

/// Two `w × h` patches `C ⊕ D` and the Z subcode welding C's top row of
/// horizontal edges to D's bottom row, vertex checks included.
#[must_use]
pub fn weld_patches(w: usize, h: usize) -> (CssCode, SubcodeSpec) {
    let patch = surface_patch(w, h);
    let code = patch.direct_sum(&patch);
    let (n, m) = (patch.n(), patch.hx().nrows());
    let v1 = (0..w)
        .map(|j| {
            BitVec::from_indices(
                2 * n,
                &[patch_h_edge(w, 0, j), n + patch_h_edge(w, h - 1, j)],
            )
        })
        .collect();
    let v0 = (0..w - 1)
        .map(|c| {
            BitVec::from_indices(
                2 * m,
                &[patch_vertex(w, 0, c), m + patch_vertex(w, h - 1, c)],
            )
        })
        .collect();
    let spec = SubcodeSpec {
        orientation: Orientation::Z,
        v2: vec![],
        v1,
        v0,
    };
    (code, spec)
}

pub fn paper_example(name: &str) -> Result<PaperExample> {
    let blank = |code: CssCode, subcode: SubcodeSpec, expected: Expectation| PaperExample {
        name: name.to_string(),
        code,
        subcode,
        quotient_bases: None,
        glued_pairs: Vec::new(),
        expected,
    };
    let z_spec = |v2, v1, v0| SubcodeSpec {
        orientation: Orientation::Z,
        v2,
        v1,
        v0,
    };
    match name {
        "welding" | "partial_boundary" | "wrong_merge" => {
            let (w, h) = (3, 3);
            let (code, weld) = weld_patches(w, h);
            let n = code.n() / 2;
            let c_edge = |j| patch_h_edge(w, 0, j);
            let d_edge = |j| n + patch_h_edge(w, h - 1, j);
            let pair = |j: usize| weld.v1[j].clone();
            let checks = weld.v0.clone();
            Ok(match name {
                "welding" => blank(
                    code,
                    z_spec(vec![], (0..w).map(pair).collect(), checks),
                    Expectation {
                        h1_sub: Some(1),
                        h0_sub: Some(0),
                        surjective: Some(true),
                        injective: Some(false),
                        killed: Some(1),
                        created: Some(0),
                        ..Expectation::default()
                    },
                ),
                "partial_boundary" => blank(
                    code,
                    z_spec(vec![], vec![pair(1)], checks),
                    Expectation {
                        h1_sub: Some(0),
                        h0_sub: Some(1),
                        injective: Some(true),
                        surjective: Some(false),
                        killed: Some(0),
                        created: Some(1),
                        ..Expectation::default()
                    },
                ),
                _ => PaperExample {
                    glued_pairs: vec![(c_edge(0), d_edge(0))],
                    ..blank(
                        code,
                        z_spec(vec![], vec![pair(0)], vec![]),
                        Expectation {
                            error: Some("ClosureViolated".into()),
                            naive_gluing_error: Some("NonCommutingChecks".into()),
                            ..Expectation::default()
                        },
                    )
                },
            })
        }
        "internal_cylinder" => {
            let (w, h) = (3, 3);
            let code = surface_patch(w, h);
            let n = code.n();
            let v1 = (0..w)
                .map(|j| {
                    BitVec::from_indices(n, &[patch_h_edge(w, 0, j), patch_h_edge(w, h - 1, j)])
                })
                .collect();
            let m = code.hx().nrows();
            let v0 = (0..w - 1)
                .map(|c| {
                    BitVec::from_indices(m, &[patch_vertex(w, 0, c), patch_vertex(w, h - 1, c)])
                })
                .collect();
            Ok(blank(
                code,
                z_spec(vec![], v1, v0),
                Expectation {
                    h1_sub: Some(1),
                    h0_sub: Some(0),
                    surjective: Some(true),
                    injective: Some(true),
                    killed: Some(0),
                    created: Some(0),
                    ..Expectation::default()
                },
            ))
        }
        "virtual_merge" => {
            let c = CssCode::from_complex(
                ChainComplex::validate(F2Matrix::parse_rows(&["1", "1"]), F2Matrix::zeros(0, 2))
                    .expect("valid"),
            );
            let d = CssCode::from_complex(
                ChainComplex::validate(F2Matrix::zeros(1, 0), F2Matrix::identity(1))
                    .expect("valid"),
            );
            let code = c.direct_sum(&d);
            let bv = |s: &str| s.parse::<BitVec>().expect("literal");
            Ok(PaperExample {
                quotient_bases: Some([None, Some(vec![bv("100"), bv("010")]), None]),
                ..blank(
                    code,
                    z_spec(vec![], vec![bv("111")], vec![bv("1")]),
                    Expectation {
                        quotient_dims: Some((1, 2, 0)),
                        ..Expectation::default()
                    },
                )
            })
        }
        "steane_z_subcode" | "steane_x_subcode" | "steane_invalid_subcode" => {
            let q = |labels: &[usize]| {
                BitVec::from_indices(7, &labels.iter().map(|l| l - 1).collect::<Vec<_>>())
            };
            // Checks a, b, c (and alpha, beta, gamma) are indices 0, 1, 2.
            let chk = |idx: &[usize]| BitVec::from_indices(3, idx);
            let (spec, expected) = match name {
                "steane_z_subcode" => (
                    z_spec(
                        vec![chk(&[0, 2])],
                        vec![q(&[1, 3]), q(&[6, 7])],
                        vec![chk(&[1])],
                    ),
                    Expectation::default(),
                ),
                "steane_x_subcode" => (
                    SubcodeSpec {
                        orientation: Orientation::X,
                        v2: vec![],
                        v1: vec![q(&[1, 4, 5, 7])],
                        v0: vec![chk(&[0, 1, 2])],
                    },
                    Expectation::default(),
                ),
                _ => (
                    z_spec(vec![], vec![q(&[1, 2])], vec![chk(&[0, 2])]),
                    Expectation {
                        error: Some("ClosureViolated".into()),
                        ..Expectation::default()
                    },
                ),
            };
            Ok(blank(steane(), spec, expected))
        }
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}

/// The code obtained by identifying qubit pairs of a Tanner graph and
/// keeping every check, without regard to the subcode conditions.
pub fn naive_gluing(code: &CssCode, pairs: &[(usize, usize)]) -> Result<CssCode> {
    let n = code.n();
    let mut target: Vec<usize> = (0..n).collect();
    for &(keep, merge) in pairs {
        target[merge] = keep;
    }
    let mut kept: Vec<usize> = target.clone();
    kept.sort_unstable();
    kept.dedup();
    let glue = |m: &F2Matrix| -> Result<F2Matrix> {
        let rows = m
            .rows()
            .iter()
            .map(|r| {
                let mut out = BitVec::zeros(kept.len());
                for q in r.iter_ones() {
                    out.flip(kept.binary_search(&target[q]).expect("kept"));
                }
                out
            })
            .collect();
        F2Matrix::from_rows(kept.len(), rows)
    };
    CssCode::from_parity_checks(glue(code.hx())?, glue(&code.hz())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steane_and_reed_muller_labelling_agree() {
        let s = steane();
        let rm = reed_muller_15();
        for j in 0..3 {
            let face = rm.hz().row(reed_muller_face_index(j, 3)).clone();
            assert_eq!(face.slice(0, 7), s.hz().row(j).clone());
            assert!(face.slice(7, 15).is_zero());
            assert_eq!(rm.hx().row(j).slice(0, 7), s.hx().row(j).clone());
        }
    }

    #[test]
    fn patch_sizes() {
        for d in 1..=4 {
            let p = surface_patch(d, d);
            assert_eq!(p.n(), d * d + (d - 1) * (d - 1));
            assert_eq!(p.k(), 1);
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(code_by_name("surface:2x2").unwrap().n(), 5);
        assert!(code_by_name("surface:0x2").is_err());
        assert!(code_by_name("bogus").is_err());
        assert!(paper_example("bogus").is_err());
    }
}
