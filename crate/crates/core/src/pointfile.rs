//! The plain-text points file format.
//!
//! One point per line as `d` base-10 integers separated by single spaces,
//! LF line endings. Lines starting with `#` are comments. The first
//! non-comment line may be a `dim d` header.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{GridPoint, PointSet};

/// Parses points text. `dim_hint` (e.g. from `--dim`) must agree with the
/// header and the points when both are present.
pub fn parse_points(text: &str, dim_hint: Option<usize>) -> Result<PointSet> {
    let mut dim = dim_hint;
    let mut seen_data = false;
    let mut points = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if raw.starts_with('#') || raw.trim().is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix("dim ") {
            if seen_data {
                return Err(err("'dim' header must precede all points".into()));
            }
            let d: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad dimension {rest:?}")))?;
            if let Some(h) = dim {
                if h != d {
                    return Err(err(format!("header dimension {d} disagrees with {h}")));
                }
            }
            dim = Some(d);
            seen_data = true;
            continue;
        }
        seen_data = true;
        let coords = raw
            .split(' ')
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| err(format!("bad integer {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match dim {
            Some(d) if d != coords.len() => {
                return Err(err(format!("expected {d} coordinates, got {}", coords.len())))
            }
            None => dim = Some(coords.len()),
            _ => {}
        }
        points.push(GridPoint::new(coords).map_err(|e| err(e.to_string()))?);
    }
    let dim = dim.ok_or_else(|| Error::Parse { line: 1, msg: "empty file without 'dim' header".into() })?;
    PointSet::from_points(dim, points)
}

/// Serializes a point set with a `dim` header, in set order.
pub fn write_points(s: &PointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", s.dim());
    for p in s.iter() {
        let mut first = true;
        for c in p.coords() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
    out
}

pub fn read_points_file(path: &Path, dim_hint: Option<usize>) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_points(&text, dim_hint)
}

pub fn write_points_file(path: &Path, s: &PointSet) -> Result<()> {
    std::fs::write(path, write_points(s)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::gp;

    #[test]
    fn parses_with_comments_and_header() {
        let s = parse_points("# circle\ndim 2\n1 2\n-3 4\n", None).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.points(), vec![gp(&[1, 2]), gp(&[-3, 4])]);
    }

    #[test]
    fn infers_dimension_without_header() {
        let s = parse_points("1 2 3\n4 5 6", None).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn canonical_text_round_trips_exactly() {
        let text = "dim 3\n1 2 3\n-4 0 7\n";
        assert_eq!(write_points(&parse_points(text, None).unwrap()), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_points("1 2\n1 2 3\n", None), Err(Error::Parse { line: 2, .. })));
        assert!(parse_points("1  2\n", None).is_err());
        assert!(parse_points("1 x\n", None).is_err());
        assert!(parse_points("1 2\ndim 2\n", None).is_err());
        assert!(parse_points("dim 3\n1 2\n", None).is_err());
        assert!(parse_points("1 2\n", Some(3)).is_err());
        assert!(parse_points("1 2\n1 2\n", None).is_err());
        assert!(parse_points("# only a comment\n", None).is_err());
    }

    #[test]
    fn header_only_file_is_an_empty_set() {
        let s = parse_points("dim 4\n", None).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.is_empty());
    }
}
