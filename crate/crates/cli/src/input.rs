//! Node-set documents: `{"n": 2, "points": [[0, 0], [0.5, 0.25]]}`.
//!
//! Decimal coordinates are parsed to the nearest double, and validation runs
//! on those doubles.

use serde_json::Value;
use vandercert::geometry::NORM_TOLERANCE;
use vandercert::NodeSet;

use crate::error::{CliError, Result};

pub fn parse_nodeset(document: &str) -> Result<NodeSet> {
    let doc: Value = serde_json::from_str(document).map_err(|e| CliError::Parse(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::Parse("document: expected an object".into()))?;
    let n = obj
        .get("n")
        .ok_or_else(|| CliError::Parse("n: missing field".into()))?
        .as_u64()
        .ok_or_else(|| CliError::Parse("n: expected a non-negative integer".into()))?;
    let n = usize::try_from(n).map_err(|_| CliError::Parse("n: too large".into()))?;
    if n == 0 {
        return Err(CliError::Validation("n must be at least 1".into()));
    }
    let raw = obj
        .get("points")
        .ok_or_else(|| CliError::Parse("points: missing field".into()))?
        .as_array()
        .ok_or_else(|| CliError::Parse("points: expected an array".into()))?;
    if let Some(key) = obj.keys().find(|k| *k != "n" && *k != "points") {
        return Err(CliError::Parse(format!("{key}: unknown field")));
    }

    let mut points = Vec::with_capacity(raw.len());
    for (i, p) in raw.iter().enumerate() {
        let coords = p
            .as_array()
            .ok_or_else(|| CliError::Parse(format!("points[{i}]: expected an array")))?;
        let point = coords
            .iter()
            .enumerate()
            .map(|(k, c)| {
                c.as_f64()
                    .ok_or_else(|| CliError::Parse(format!("points[{i}][{k}]: expected a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if point.len() != n {
            return Err(CliError::Validation(format!(
                "point {i} has {} coordinates, expected {n}",
                point.len()
            )));
        }
        let norm = point.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1.0 + NORM_TOLERANCE {
            return Err(CliError::Validation(format!(
                "point {i} has norm {norm}, outside the unit ball"
            )));
        }
        points.push(point);
    }
    NodeSet::new(n, points).map_err(|e| CliError::Validation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let z = parse_nodeset(r#"{"n":1, "points":[[-0.5],[0.5]]}"#).unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z.point(1), &[0.5]);

        let dup = parse_nodeset(r#"{"n":2, "points":[[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(dup, CliError::Validation(_)), "{dup}");

        let far = parse_nodeset(r#"{"n":2, "points":[[3,0]]}"#).unwrap_err();
        assert!(far.to_string().contains("point 0"), "{far}");
        let single = parse_nodeset(r#"{"n":2, "points":[[0.3,0]]}"#).unwrap_err();
        assert!(matches!(single, CliError::Validation(_)));
    }

    #[test]
    fn errors_name_the_location() {
        let e = parse_nodeset(r#"{"n":2, "points":[[0,0],[0.1,"x"]]}"#).unwrap_err();
        assert!(e.to_string().contains("points[1][1]"), "{e}");
        let e = parse_nodeset(r#"{"n":2, "points":[[0,0],[0.1]]}"#).unwrap_err();
        assert!(e.to_string().contains("point 1"), "{e}");
        let e = parse_nodeset("{\"n\":2,\n \"points\": [[0,0],\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_nodeset(r#"{"n":-1, "points":[]}"#).unwrap_err();
        assert!(e.to_string().starts_with("parse error: n:"), "{e}");
        let e = parse_nodeset(r#"{"n":1, "points":[[0],[1]], "m":3}"#).unwrap_err();
        assert!(e.to_string().contains("m: unknown field"), "{e}");
    }

    #[test]
    fn decimal_text_parses_to_nearest_double() {
        let z = parse_nodeset(r#"{"n":1, "points":[[0.1],[0.30000000000000004]]}"#).unwrap();
        assert_eq!(z.point(0)[0], 0.1);
        assert_eq!(z.point(1)[0], 0.1 + 0.2);
    }
}
