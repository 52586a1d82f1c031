use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::objectives::{CoverageObjective, ExemplarObjective, RecommendationObjective};

fn parse_error(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Reads an undirected graph from whitespace-separated `u v` lines. Lines
/// starting with `#` and blank lines are skipped; vertex ids run up to the
/// largest id seen.
pub fn load_edge_list(path: &Path) -> Result<CoverageObjective> {
    let text = fs::read_to_string(path)?;
    let mut edges = Vec::new();
    let mut max_id = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(parse_error(path, i + 1, format!("expected two vertex ids, got '{line}'")));
        };
        let parse = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| parse_error(path, i + 1, format!("'{s}' is not a vertex id")))
        };
        let (u, v) = (parse(u)?, parse(v)?);
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u, v));
    }
    let Some(max_id) = max_id else {
        return Err(Error::Data(format!("{} holds no edges", path.display())));
    };
    CoverageObjective::from_edges(max_id as usize + 1, &edges)
}

/// Reads a headerless CSV of real vectors, one per row.
fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                let x: f64 = field
                    .parse()
                    .map_err(|_| parse_error(path, line, format!("'{field}' is not a number")))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(Error::Data(format!("{}:{line}: non-finite value '{field}'", path.display())))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_error(
                    path,
                    line,
                    format!("row has {} values, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data(format!("{} holds no rows", path.display())));
    }
    Ok(rows)
}

/// One point per CSV row; `center` subtracts the column means.
pub fn load_points_csv(path: &Path, center: bool) -> Result<ExemplarObjective> {
    ExemplarObjective::new(read_matrix(path)?, center)
}

/// Movie vectors from `movies_path`; the user vector is row `user_row`
/// (0-based) of `users_path`, a file in the same format.
pub fn load_recsys(movies_path: &Path, users_path: &Path, user_row: usize, alpha: f64) -> Result<RecommendationObjective> {
    let movies = read_matrix(movies_path)?;
    let mut users = read_matrix(users_path)?;
    if user_row >= users.len() {
        return Err(Error::Parameter(format!(
            "user row {user_row} outside the {} rows of {}",
            users.len(),
            users_path.display()
        )));
    }
    RecommendationObjective::new(movies, users.swap_remove(user_row), alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{ids, SubmodularOracle};
    use std::io::Write;

    fn file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn two_line_edge_list_is_a_path() {
        let f = file("# comment\n0 1\n\n1 2\n1 0\n");
        let g = load_edge_list(f.path()).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.value(&ids(&[1])), 3.0);
    }

    #[test]
    fn malformed_edge_line_names_line() {
        let f = file("0 1\n1 x\n");
        match load_edge_list(f.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let f = file("0 1 2\n");
        assert!(matches!(load_edge_list(f.path()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn points_rows_become_elements() {
        let f = file("0,0\n1.5, 2\n-1,3e-1\n");
        let e = load_points_csv(f.path(), false).unwrap();
        assert_eq!(e.ground_size(), 3);
        assert_eq!(e.points()[1], vec![1.5, 2.0]);
    }

    #[test]
    fn bad_points_files() {
        assert!(load_points_csv(file("").path(), true).is_err());
        assert!(matches!(load_points_csv(file("1,2\nnan,1\n").path(), true), Err(Error::Data(_))));
        assert!(matches!(
            load_points_csv(file("1,2\n3\n").path(), true),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_points_csv(file("1,2\n3,q\n").path(), true),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn recsys_selects_user_row() {
        let movies = file("1,0\n0,1\n");
        let users = file("0,0\n1,1\n");
        let r = load_recsys(movies.path(), users.path(), 1, 0.5).unwrap();
        assert_eq!(r.movie_count(), 2);
        assert!(load_recsys(movies.path(), users.path(), 2, 0.5).is_err());
    }
}
