//! Line-oriented text files for states and selective measures.
//!
//! ```text
//! # comment lines start with '#'
//! dim <extrinsic_dim> <spin_dim>
//! amp <slot1_mode> <slot2_mode> <re> <im>      (state files)
//! A <row> <col> <re> <im>                      (measure files, slot-1 factor)
//! B <row> <col> <re> <im>                      (measure files, slot-2 factor)
//! ```
//!
//! One record per line, whitespace-separated. `dim` must be the first record. Entries
//! that are not listed are zero; listing the same entry twice is an error.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ebm_core::{Complex64, OneParticleOperator, SelectiveMeasure, SpaceSpec, TwoParticleState};
use nalgebra::{DMatrix, DVector};

use crate::error::CliError;

/// A parsed value plus anything worth telling the user about it.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

struct Record<'a> {
    line: usize,
    tag: &'a str,
    fields: Vec<&'a str>,
}

fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut parts = trimmed.split_whitespace();
        let tag = parts.next()?;
        Some(Record {
            line: k + 1,
            tag,
            fields: parts.collect(),
        })
    })
}

fn parse_usize(field: &str, line: usize, what: &str) -> Result<usize, CliError> {
    field.parse().map_err(|_| CliError::Parse {
        line,
        message: format!("invalid {what} '{field}'"),
    })
}

fn parse_f64(field: &str, line: usize, what: &str) -> Result<f64, CliError> {
    let value: f64 = field.parse().map_err(|_| CliError::Parse {
        line,
        message: format!("invalid {what} '{field}'"),
    })?;
    if !value.is_finite() {
        return Err(CliError::Parse {
            line,
            message: format!("{what} must be finite, got '{field}'"),
        });
    }
    Ok(value)
}

fn expect_arity(rec: &Record<'_>, n: usize) -> Result<(), CliError> {
    if rec.fields.len() != n {
        return Err(CliError::Parse {
            line: rec.line,
            message: format!(
                "'{}' record takes {n} fields, found {}",
                rec.tag,
                rec.fields.len()
            ),
        });
    }
    Ok(())
}

/// Reads the leading `dim` record.
fn header<'a>(recs: &mut impl Iterator<Item = Record<'a>>) -> Result<SpaceSpec, CliError> {
    let Some(rec) = recs.next() else {
        return Err(CliError::Format {
            line: 0,
            message: "missing 'dim' header".into(),
        });
    };
    if rec.tag != "dim" {
        return Err(CliError::Format {
            line: rec.line,
            message: format!("expected 'dim' header, found '{}'", rec.tag),
        });
    }
    expect_arity(&rec, 2)?;
    let extrinsic = parse_usize(rec.fields[0], rec.line, "extrinsic dimension")?;
    let spin = parse_usize(rec.fields[1], rec.line, "spin dimension")?;
    SpaceSpec::new(extrinsic, spin).map_err(|e| CliError::Format {
        line: rec.line,
        message: e.to_string(),
    })
}

/// Reads `<row> <col> <re> <im>` and range-checks the indices against `bound`.
fn entry(rec: &Record<'_>, bound: usize) -> Result<(usize, usize, Complex64), CliError> {
    expect_arity(rec, 4)?;
    let row = parse_usize(rec.fields[0], rec.line, "index")?;
    let col = parse_usize(rec.fields[1], rec.line, "index")?;
    let re = parse_f64(rec.fields[2], rec.line, "real part")?;
    let im = parse_f64(rec.fields[3], rec.line, "imaginary part")?;
    if row >= bound || col >= bound {
        return Err(CliError::Format {
            line: rec.line,
            message: format!("index pair ({row}, {col}) out of range 0..{bound}"),
        });
    }
    Ok((row, col, Complex64::new(re, im)))
}

pub fn parse_state(text: &str) -> Result<Parsed<TwoParticleState>, CliError> {
    let mut recs = records(text);
    let space = header(&mut recs)?;
    let n = space.total_dim();
    let mut amps = DVector::zeros(space.pair_dim());
    let mut seen = HashSet::new();
    for rec in recs {
        if rec.tag != "amp" {
            return Err(CliError::Parse {
                line: rec.line,
                message: format!("unexpected '{}' record in a state file", rec.tag),
            });
        }
        let (i, j, value) = entry(&rec, n)?;
        if !seen.insert((i, j)) {
            return Err(CliError::Parse {
                line: rec.line,
                message: format!("duplicate amplitude ({i}, {j})"),
            });
        }
        amps[i * n + j] = value;
    }
    let mut warnings = Vec::new();
    if seen.is_empty() {
        warnings.push("state file lists no amplitudes; using the zero state".to_string());
    }
    let value = TwoParticleState::new(space, amps).map_err(|e| CliError::Format {
        line: 0,
        message: e.to_string(),
    })?;
    if !value.is_zero() && !value.is_normalized() {
        warnings.push(format!("state is not normalized (norm {:.6})", value.norm()));
    }
    Ok(Parsed { value, warnings })
}

pub fn parse_measure(text: &str) -> Result<Parsed<SelectiveMeasure>, CliError> {
    let mut recs = records(text);
    let space = header(&mut recs)?;
    let n = space.total_dim();
    let mut factors = [DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    let mut seen = [HashSet::new(), HashSet::new()];
    for rec in recs {
        let slot = match rec.tag {
            "A" => 0,
            "B" => 1,
            other => {
                return Err(CliError::Parse {
                    line: rec.line,
                    message: format!("unexpected '{other}' record in a measure file"),
                })
            }
        };
        let (row, col, value) = entry(&rec, n)?;
        if !seen[slot].insert((row, col)) {
            return Err(CliError::Parse {
                line: rec.line,
                message: format!("duplicate {} entry ({row}, {col})", rec.tag),
            });
        }
        factors[slot][(row, col)] = value;
    }
    let mut warnings = Vec::new();
    for (slot, tag) in ["A", "B"].iter().enumerate() {
        if seen[slot].is_empty() {
            warnings.push(format!("measure file has no {tag} entries; that factor is zero"));
        }
    }
    let [a, b] = factors;
    let to_format = |e: ebm_core::Error| CliError::Format {
        line: 0,
        message: e.to_string(),
    };
    let value = SelectiveMeasure::new(
        OneParticleOperator::new(space, a).map_err(to_format)?,
        OneParticleOperator::new(space, b).map_err(to_format)?,
    )
    .map_err(to_format)?;
    Ok(Parsed { value, warnings })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_state_file(path: impl AsRef<Path>) -> Result<Parsed<TwoParticleState>, CliError> {
    parse_state(&read(path.as_ref())?)
}

pub fn parse_measure_file(path: impl AsRef<Path>) -> Result<Parsed<SelectiveMeasure>, CliError> {
    parse_measure(&read(path.as_ref())?)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_dim(out: &mut String, space: SpaceSpec) {
    let _ = writeln!(out, "dim {} {}", space.extrinsic_dim(), space.spin_dim());
}

fn write_entry(out: &mut String, tag: &str, row: usize, col: usize, z: Complex64) {
    let _ = writeln!(out, "{tag} {row} {col} {} {}", fmt_float(z.re), fmt_float(z.im));
}

/// Serializes a state, skipping exact zeros.
pub fn write_state(state: &TwoParticleState, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    write_dim(&mut out, state.space());
    for ((i, j), z) in state.iter() {
        if z.norm_sqr() != 0.0 {
            write_entry(&mut out, "amp", i, j, z);
        }
    }
    out
}

/// Serializes both factors of a measure, skipping exact zeros.
pub fn write_measure(measure: &SelectiveMeasure, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    write_dim(&mut out, measure.space());
    for (tag, factor) in [("A", measure.slot1()), ("B", measure.slot2())] {
        let m = factor.entries();
        for row in 0..m.nrows() {
            for col in 0..m.ncols() {
                let z = m[(row, col)];
                if z.norm_sqr() != 0.0 {
                    write_entry(&mut out, tag, row, col, z);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ebm_core::{momentum_projector, permutation_overlap};

    #[test]
    fn singlet_like_state() {
        let text = "dim 2 2\namp 0 3 0.7071067811865476 0.0\namp 3 0 -0.7071067811865476 0.0\n";
        let parsed = parse_state(text).unwrap();
        let psi = parsed.value;
        assert!(psi.is_normalized());
        assert!(parsed.warnings.is_empty());
        assert_eq!(psi.amplitude(3, 0).unwrap().re, -std::f64::consts::FRAC_1_SQRT_2);
        assert!((permutation_overlap(&psi).re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_state_is_zero_and_flagged() {
        let parsed = parse_state("# nothing here\ndim 2 2\n").unwrap();
        assert!(parsed.value.is_zero());
        assert_eq!(parsed.warnings.len(), 1);
    }

    #[test]
    fn out_of_range_amplitude() {
        let err = parse_state("dim 2 2\namp 5 0 1 0\n").unwrap_err();
        assert!(matches!(err, CliError::Format { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("dim 2 2\n\n# c\namp 0 1 x 0\n", 4),
            ("dim 2 2\namp 0 1 1\n", 2),
            ("dim 2 2\namp 0 1 1 0\namp 0 1 1 0\n", 3),
            ("dim 2 2\nA 0 0 1 0\n", 2),
            ("amp 0 0 1 0\n", 1),
            ("dim 0 2\n", 1),
            ("dim 2 2\namp 0 1 nan 0\n", 2),
        ];
        for (text, line) in cases {
            let err = parse_state(text).unwrap_err();
            assert_eq!(err.line(), Some(line), "{text:?} -> {err:?}");
            assert!(err.to_string().contains(&format!("line {line}")));
        }
        assert_eq!(parse_state("").unwrap_err().line(), Some(0));
    }

    #[test]
    fn identity_measure_file() {
        let text = "dim 1 2\nA 0 0 1 0\nA 1 1 1 0\nB 0 0 1 0\nB 1 1 1 0\n";
        let parsed = parse_measure(text).unwrap();
        assert_eq!(parsed.value, SelectiveMeasure::identity(SpaceSpec::new(1, 2).unwrap()));
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn measure_with_only_a_entries() {
        let parsed = parse_measure("dim 1 2\nA 0 0 1 0\n").unwrap();
        assert_eq!(parsed.value.slot2().max_column_norm(), 0.0);
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parse_measure("dim 1 2\namp 0 0 1 0\n").is_err());
    }

    #[test]
    fn momentum_projector_roundtrip() {
        let space = SpaceSpec::spin_half(8).unwrap();
        let m = momentum_projector(1, 7, space).unwrap();
        let back = parse_measure(&write_measure(&m, Some("momentum projector"))).unwrap().value;
        let diff = (back.slot1().entries() - m.slot1().entries())
            .iter()
            .chain((back.slot2().entries() - m.slot2().entries()).iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-15);
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        let x = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }
}
