//! Extended XYZ reader/writer.
//!
//! Format per frame:
//!
//! ```text
//! <atom count>
//! key=value key=value ...
//! <element> <x> <y> <z> <frozen_flag>
//! ```
//!
//! Coordinates are Å with 10 decimal digits; the frozen flag is `T` or `F`.
//! Multiple frames may be concatenated (trajectories).

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::structure::Structure;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Serializes one structure as a single extended-XYZ frame.
pub fn to_xyz(structure: &Structure) -> String {
    let mut out = String::new();
    writeln!(out, "{}", structure.len()).unwrap();
    writeln!(out, "{}", comment_line(structure)).unwrap();
    for i in 0..structure.len() {
        let p = structure.positions[i];
        writeln!(
            out,
            "{} {:.10} {:.10} {:.10} {}",
            structure.species[i],
            p[0],
            p[1],
            p[2],
            if structure.frozen[i] { "T" } else { "F" }
        )
        .unwrap();
    }
    out
}

fn comment_line(structure: &Structure) -> String {
    if structure.provenance.is_empty() {
        "provenance=unknown".to_string()
    } else {
        structure.provenance.clone()
    }
}

/// Parses every frame in the input.
pub fn from_xyz(text: &str) -> Result<Vec<Structure>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut frames = Vec::new();
    let mut cursor = 0usize;
    while cursor < lines.len() {
        if lines[cursor].trim().is_empty() {
            cursor += 1;
            continue;
        }
        let n: usize = lines[cursor].trim().parse().map_err(|_| CoreError::XyzParse {
            line: cursor + 1,
            message: format!("expected atom count, got '{}'", lines[cursor].trim()),
        })?;
        if cursor + 1 + n >= lines.len() + 1 {
            return Err(CoreError::XyzParse {
                line: cursor + 1,
                message: format!("frame declares {n} atoms but input is truncated"),
            });
        }
        let provenance = lines
            .get(cursor + 1)
            .map(|l| l.trim().to_string())
            .unwrap_or_default();
        let mut species = Vec::with_capacity(n);
        let mut positions = Vec::with_capacity(n);
        let mut frozen = Vec::with_capacity(n);
        for k in 0..n {
            let line_no = cursor + 2 + k;
            let line = lines.get(line_no).ok_or_else(|| CoreError::XyzParse {
                line: line_no + 1,
                message: "unexpected end of file inside frame".into(),
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 4 {
                return Err(CoreError::XyzParse {
                    line: line_no + 1,
                    message: format!("expected 'element x y z [flag]', got '{line}'"),
                });
            }
            let element: Element = fields[0].parse().map_err(|e| CoreError::XyzParse {
                line: line_no + 1,
                message: format!("{e}"),
            })?;
            let mut coord = [0.0f64; 3];
            for (slot, field) in coord.iter_mut().zip(&fields[1..4]) {
                *slot = field.parse().map_err(|_| CoreError::XyzParse {
                    line: line_no + 1,
                    message: format!("bad coordinate '{field}'"),
                })?;
            }
            let flag = match fields.get(4).copied() {
                None => false,
                Some("T") | Some("t") | Some("1") | Some("true") => true,
                Some("F") | Some("f") | Some("0") | Some("false") => false,
                Some(other) => {
                    return Err(CoreError::XyzParse {
                        line: line_no + 1,
                        message: format!("bad frozen flag '{other}'"),
                    })
                }
            };
            species.push(element);
            positions.push(coord);
            frozen.push(flag);
        }
        frames.push(Structure::new(species, positions, frozen, provenance)?);
        cursor += 2 + n;
    }
    if frames.is_empty() {
        return Err(CoreError::XyzParse {
            line: 1,
            message: "no frames found".into(),
        });
    }
    Ok(frames)
}

pub fn write_xyz(path: &Path, structure: &Structure) -> Result<()> {
    fs::write(path, to_xyz(structure))?;
    Ok(())
}

/// Appends frames for trajectory dumps.
pub fn write_trajectory(path: &Path, frames: &[Structure]) -> Result<()> {
    let mut out = String::new();
    for f in frames {
        out.push_str(&to_xyz(f));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_xyz(path: &Path) -> Result<Structure> {
    let text = fs::read_to_string(path)?;
    let mut frames = from_xyz(&text)?;
    Ok(frames.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Structure {
        Structure::new(
            vec![Element::Pt, Element::Ir, Element::X],
            vec![[0.0, 0.0, 0.0], [2.75, 0.0, 0.0], [0.0, 0.0, 2.0]],
            vec![true, false, false],
            "shape=test seed=1",
        )
        .unwrap()
    }

    #[test]
    fn round_trip_preserves_everything() {
        let s = sample();
        let text = to_xyz(&s);
        let back = from_xyz(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].species, s.species);
        assert_eq!(back[0].frozen, s.frozen);
        for (a, b) in back[0].positions.iter().zip(&s.positions) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-10);
            }
        }
        assert_eq!(back[0].provenance, s.provenance);
    }

    #[test]
    fn truncated_frame_reports_line() {
        let text = "3\ncomment\nPt 0 0 0 F\n";
        let err = from_xyz(text).unwrap_err();
        assert!(matches!(err, CoreError::XyzParse { .. }));
    }

    #[test]
    fn multi_frame_parses() {
        let s = sample();
        let text = format!("{}{}", to_xyz(&s), to_xyz(&s));
        assert_eq!(from_xyz(&text).unwrap().len(), 2);
    }
}
