//! Text formats for complexes, codes and subcodes.
//!
//! Every file is a list of `key:` sections. Matrix sections hold a matrix in
//! the shared format (`rows cols` header, one 0/1 line per row); inline
//! sections carry their value on the key line. Blank lines and lines
//! starting with `#` between sections are ignored.
//!
//! ```text
//! hx:
//! 1 3
//! 111
//! hz:
//! 0 3
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::catalog::SubcodeSpec;
use crate::chaincomplex::ChainComplex;
use crate::csscode::{CssCode, PauliOperator};
use crate::error::{Error, Result};
use crate::f2linalg::{BitVec, F2Matrix};
use crate::surgery::Subcode;

#[derive(Default)]
struct Sections {
    inline: BTreeMap<String, String>,
    matrices: BTreeMap<String, F2Matrix>,
    /// Line number reported for missing sections.
    end: usize,
}

fn parse_sections(s: &str, matrix_keys: &[&str], inline_keys: &[&str]) -> Result<Sections> {
    let mut out = Sections::default();
    let mut lines = s.lines();
    let mut line_no = 0;
    while let Some(line) = lines.next() {
        line_no += 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let (key, rest) = t
            .split_once(':')
            .ok_or_else(|| err(format!("expected a `key:` section, found {t:?}")))?;
        let key = key.trim();
        let rest = rest.trim();
        if out.inline.contains_key(key) || out.matrices.contains_key(key) {
            return Err(err(format!("duplicate section {key:?}")));
        }
        if matrix_keys.contains(&key) {
            if !rest.is_empty() {
                return Err(err(format!(
                    "section {key:?} takes a matrix on following lines"
                )));
            }
            let m = F2Matrix::read_from(&mut lines, &mut line_no)?;
            out.matrices.insert(key.to_string(), m);
        } else if inline_keys.contains(&key) {
            out.inline.insert(key.to_string(), rest.to_string());
        } else {
            return Err(err(format!("unknown section {key:?}")));
        }
    }
    out.end = line_no;
    Ok(out)
}

impl Sections {
    fn matrix(&mut self, key: &str) -> Result<F2Matrix> {
        self.matrices.remove(key).ok_or_else(|| self.missing(key))
    }

    fn missing(&self, key: &str) -> Error {
        Error::Parse {
            line: self.end,
            msg: format!("missing section {key:?}"),
        }
    }
}

fn matrix_section(out: &mut String, key: &str, m: &F2Matrix) {
    let _ = write!(out, "{key}:\n{m}");
}

fn vectors_section(out: &mut String, key: &str, len: usize, vs: &[BitVec]) {
    let m = F2Matrix::from_rows(len, vs.to_vec()).expect("vector lengths match");
    matrix_section(out, key, &m);
}

#[must_use]
pub fn write_complex(c: &ChainComplex) -> String {
    let mut out = String::new();
    matrix_section(&mut out, "d2", c.d2());
    matrix_section(&mut out, "d1", c.d1());
    out
}

pub fn read_complex(s: &str) -> Result<ChainComplex> {
    let mut sec = parse_sections(s, &["d2", "d1"], &[])?;
    ChainComplex::validate(sec.matrix("d2")?, sec.matrix("d1")?)
}

/// Writes checks, both logical bases and, when known, the distance.
#[must_use]
pub fn write_code(code: &CssCode) -> String {
    let mut out = String::new();
    let n = code.n();
    matrix_section(&mut out, "hx", code.hx());
    matrix_section(&mut out, "hz", &code.hz());
    vectors_section(&mut out, "zl", n, code.z_logicals().representatives());
    vectors_section(&mut out, "xl", n, code.x_logicals().representatives());
    if let Some(d) = code.distance() {
        let _ = writeln!(out, "distance: {d}");
    }
    out
}

/// Reads a code file; `zl` alone derives the X basis as its dual.
pub fn read_code(s: &str) -> Result<CssCode> {
    let mut sec = parse_sections(s, &["hx", "hz", "zl", "xl"], &["distance"])?;
    let code = CssCode::from_parity_checks(sec.matrix("hx")?, sec.matrix("hz")?)?;
    let rows = |m: F2Matrix| m.rows().to_vec();
    let code = match (sec.matrices.remove("zl"), sec.matrices.remove("xl")) {
        (None, None) => code,
        (Some(z), None) => code.with_z_logicals(rows(z))?,
        (None, Some(x)) => code.with_x_logicals(rows(x))?,
        (Some(z), Some(x)) => code.with_logicals(rows(z), rows(x))?,
    };
    match sec.inline.get("distance") {
        None => Ok(code),
        Some(d) => {
            let d = d.parse().map_err(|_| Error::Parse {
                line: sec.end,
                msg: format!("bad distance {d:?}"),
            })?;
            Ok(code.with_known_distance(d))
        }
    }
}

/// Reads either a code file (`hx`/`hz`) or a complex file (`d2`/`d1`).
pub fn read_code_or_complex(s: &str) -> Result<CssCode> {
    if s.lines().any(|l| l.trim_start().starts_with("d1:")) {
        Ok(CssCode::from_complex(read_complex(s)?))
    } else {
        read_code(s)
    }
}

#[must_use]
pub fn write_subcode(v: &Subcode) -> String {
    let spec = SubcodeSpec::of(v);
    let dims = v.parent().dims();
    let mut out = format!("orientation: {}\n", v.orientation());
    vectors_section(&mut out, "v2", dims[2], &spec.v2);
    vectors_section(&mut out, "v1", dims[1], &spec.v1);
    vectors_section(&mut out, "v0", dims[0], &spec.v0);
    out
}

/// Reads subcode generators; validation happens in [`SubcodeSpec::build`].
pub fn read_subcode(s: &str) -> Result<SubcodeSpec> {
    let mut sec = parse_sections(s, &["v2", "v1", "v0"], &["orientation"])?;
    let orientation = sec
        .inline
        .get("orientation")
        .ok_or_else(|| sec.missing("orientation"))?
        .parse()?;
    let mut rows = |k: &str| {
        sec.matrices
            .remove(k)
            .map(|m| m.rows().to_vec())
            .unwrap_or_default()
    };
    Ok(SubcodeSpec {
        orientation,
        v2: rows("v2"),
        v1: rows("v1"),
        v0: rows("v0"),
    })
}

/// Parses a Pauli string such as `+IXZY` or `XXI` (qubit 0 first).
pub fn parse_pauli(s: &str) -> Result<PauliOperator> {
    let t = s.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let n = body.chars().count();
    let (mut x, mut z) = (BitVec::zeros(n), BitVec::zeros(n));
    for (i, c) in body.chars().enumerate() {
        match c.to_ascii_uppercase() {
            'I' => {}
            'X' => x.set(i, true),
            'Z' => z.set(i, true),
            'Y' => {
                x.set(i, true);
                z.set(i, true);
            }
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("bad Pauli letter {c:?}"),
                })
            }
        }
    }
    let mut p = PauliOperator::new(x, z)?;
    p.negative = negative;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn code_round_trip() {
        for name in ["steane", "surface:2x3", "toric:2", "trivial"] {
            let code = catalog::code_by_name(name).unwrap();
            assert_eq!(read_code(&write_code(&code)).unwrap(), code, "{name}");
        }
        let code = catalog::steane().with_distance();
        assert_eq!(read_code(&write_code(&code)).unwrap(), code);
    }

    #[test]
    fn subcode_round_trip() {
        let ex = catalog::paper_example("welding").unwrap();
        let v = ex.subcode.build(ex.code.complex()).unwrap();
        let spec = read_subcode(&write_subcode(&v)).unwrap();
        assert_eq!(spec.build(ex.code.complex()).unwrap(), v);
    }

    #[test]
    fn complex_round_trip() {
        let c = catalog::toric(2).complex().clone();
        assert_eq!(read_complex(&write_complex(&c)).unwrap(), c);
        assert_eq!(read_code_or_complex(&write_complex(&c)).unwrap().k(), 2);
    }

    #[test]
    fn bad_inputs_report_lines() {
        let err = read_code("hx:\n1 3\n11\nhz:\n0 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(read_code("hx:\n1 2\n11\nqq: 1\n").is_err());
        assert!(read_subcode("v1:\n1 2\n11\n").is_err());
    }

    #[test]
    fn pauli_strings() {
        let p = parse_pauli("-XIZY").unwrap();
        assert_eq!(p.to_string(), "-XIZY");
        assert!(parse_pauli("XQ").is_err());
    }
}
