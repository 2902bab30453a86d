use std::collections::HashSet;

use super::ParseError;
use crate::model::{pair_count, pair_index, DissimilarityMap, TaxonSet};

/// Relative tolerance for reconciling `d(i,j)` with `d(j,i)`.
const SYMMETRY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// A count line, then one row per taxon: the name followed by either all
    /// `n` entries or only the entries left of the diagonal.
    Phylip,
    /// A header of names, then a square body. A leading empty header cell
    /// means every body row starts with its taxon name.
    Csv,
}

pub fn parse_distance_matrix(text: &str, format: Format) -> Result<DissimilarityMap, ParseError> {
    match format {
        Format::Phylip => parse_phylip(text),
        Format::Csv => parse_csv(text),
    }
}

/// An entry together with where it was read.
#[derive(Clone, Copy)]
struct Cell {
    value: f64,
    line: usize,
    column: usize,
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col, i)),
            (true, Some((sc, si))) => {
                out.push((sc + 1, &line[si..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((sc, si)) = start {
        out.push((sc + 1, &line[si..]));
    }
    out
}

fn number(token: &str, line: usize, column: usize) -> Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError::NonNumeric {
            line,
            column,
            token: token.to_string(),
        }),
    }
}

fn check_name(seen: &mut HashSet<String>, name: &str, line: usize) -> Result<(), ParseError> {
    if !seen.insert(name.to_string()) {
        return Err(ParseError::DuplicateName {
            line,
            name: name.to_string(),
        });
    }
    Ok(())
}

fn parse_phylip(text: &str) -> Result<DissimilarityMap, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());
    let (head_line, head) = lines.next().ok_or(ParseError::Empty)?;
    let (col, tok) = head[0];
    let n: usize = tok.parse().map_err(|_| ParseError::NonNumeric {
        line: head_line,
        column: col,
        token: tok.to_string(),
    })?;
    if n < 2 {
        return Err(ParseError::TooFewTaxa { line: head_line, n });
    }

    let mut names = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    let mut cells: Vec<Vec<Option<Cell>>> = vec![vec![None; n]; n];
    let mut lower = false;
    let mut last_line = head_line;
    for i in 0..n {
        let (line, row) = lines.next().ok_or(ParseError::Dimension {
            line: last_line + 1,
            expected: n,
            found: i,
        })?;
        last_line = line;
        let (_, name) = row[0];
        check_name(&mut seen, name, line)?;
        names.push(name.to_string());
        let values = &row[1..];
        if i == 0 {
            lower = values.is_empty();
        }
        let expected = if lower { i } else { n };
        if values.len() != expected {
            return Err(ParseError::Dimension {
                line,
                expected,
                found: values.len(),
            });
        }
        for (k, &(column, tok)) in values.iter().enumerate() {
            let value = number(tok, line, column)?;
            cells[i][k] = Some(Cell {
                value,
                line,
                column,
            });
        }
    }
    if let Some((line, row)) = lines.next() {
        return Err(ParseError::Dimension {
            line,
            expected: 0,
            found: row.len(),
        });
    }
    assemble(names, cells)
}

fn parse_csv(text: &str) -> Result<DissimilarityMap, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let csv_error = |e: csv::Error| ParseError::Csv {
        line: e.position().map_or(0, |p| p.line() as usize),
        message: e.to_string(),
    };
    let header = records
        .next()
        .ok_or(ParseError::Empty)?
        .map_err(csv_error)?;
    let header_line = header.position().map_or(1, |p| p.line() as usize);
    let named_rows = header.get(0) == Some("");
    let names: Vec<String> = header
        .iter()
        .skip(usize::from(named_rows))
        .map(str::to_string)
        .collect();
    let n = names.len();
    if n < 2 {
        return Err(ParseError::TooFewTaxa {
            line: header_line,
            n,
        });
    }
    let mut seen = HashSet::new();
    for name in &names {
        if name.is_empty() {
            return Err(ParseError::Csv {
                line: header_line,
                message: "empty taxon name".into(),
            });
        }
        check_name(&mut seen, name, header_line)?;
    }

    let width = n + usize::from(named_rows);
    let mut cells: Vec<Vec<Option<Cell>>> = vec![vec![None; n]; n];
    let mut rows = 0;
    let mut last_line = header_line;
    for record in records {
        let record = record.map_err(csv_error)?;
        let line = record
            .position()
            .map_or(last_line + 1, |p| p.line() as usize);
        last_line = line;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if rows == n || record.len() != width {
            return Err(ParseError::Dimension {
                line,
                expected: if rows == n { 0 } else { width },
                found: record.len(),
            });
        }
        if named_rows && record[0] != names[rows] {
            return Err(ParseError::NameMismatch {
                line,
                expected: names[rows].clone(),
                found: record[0].to_string(),
            });
        }
        for k in 0..n {
            let field = k + usize::from(named_rows);
            let value = number(&record[field], line, field + 1)?;
            cells[rows][k] = Some(Cell {
                value,
                line,
                column: field + 1,
            });
        }
        rows += 1;
    }
    if rows != n {
        return Err(ParseError::Dimension {
            line: last_line + 1,
            expected: n,
            found: rows,
        });
    }
    assemble(names, cells)
}

/// Builds the pair vector from whichever triangle(s) were given, checking
/// the diagonal and reconciling the two copies of each entry.
fn assemble(
    names: Vec<String>,
    cells: Vec<Vec<Option<Cell>>>,
) -> Result<DissimilarityMap, ParseError> {
    let n = names.len();
    let scale = cells
        .iter()
        .flatten()
        .flatten()
        .fold(0.0f64, |m, c| m.max(c.value.abs()));
    let tol = SYMMETRY_TOLERANCE * scale;
    let mut values = vec![0.0; pair_count(n)];
    for i in 0..n {
        if let Some(c) = cells[i][i] {
            if c.value.abs() > tol {
                return Err(ParseError::Diagonal {
                    line: c.line,
                    column: c.column,
                    name: names[i].clone(),
                    value: c.value,
                });
            }
        }
        for j in 0..i {
            let below = cells[i][j].expect("row i always covers columns left of the diagonal");
            values[pair_index(i, j, n)] = match cells[j][i] {
                None => below.value,
                Some(above) => {
                    if (above.value - below.value).abs() > tol {
                        return Err(ParseError::Asymmetry {
                            line: below.line,
                            column: below.column,
                            a: names[i].clone(),
                            b: names[j].clone(),
                            forward: below.value,
                            backward: above.value,
                        });
                    }
                    (above.value + below.value) / 2.0
                }
            };
        }
    }
    let taxa = TaxonSet::new(names).expect("names are unique and non-empty");
    Ok(DissimilarityMap::new(taxa, values).expect("entries are finite and complete"))
}

/// Square PHYLIP matrix. Entries use the shortest decimal form that reads
/// back to the same `f64`.
pub fn write_phylip(d: &DissimilarityMap) -> String {
    let mut out = format!("{}\n", d.n());
    for (i, row) in d.to_square().iter().enumerate() {
        out.push_str(d.taxa().label(i));
        for v in row {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// CSV with a name column, quoting names where needed.
pub fn write_csv(d: &DissimilarityMap) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(d.taxa().labels().iter().cloned());
    writer.write_record(&header).expect("in-memory write");
    for (i, row) in d.to_square().iter().enumerate() {
        let mut record = vec![d.taxa().label(i).to_string()];
        record.extend(row.iter().map(f64::to_string));
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phylip(text: &str) -> Result<DissimilarityMap, ParseError> {
        parse_distance_matrix(text, Format::Phylip)
    }

    #[test]
    fn square_phylip() {
        let d = phylip("4\na 0 1 2 20\nb 1 0 10 28\nc 2 10 0 5\nd 20 28 5 0\n").unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 20.0, 10.0, 28.0, 5.0]);
        assert_eq!(d.taxa().labels(), &["a", "b", "c", "d"]);
    }

    #[test]
    fn lower_triangular_phylip() {
        let d = phylip("3\na\nb 1\nc 4 6\n").unwrap();
        assert_eq!(d.values(), &[1.0, 4.0, 6.0]);
    }

    #[test]
    fn blank_lines_and_spacing_are_ignored() {
        let d = phylip("\n  3\n\na   0 1 4\n\tb 1 0 6\nc 4 6 0\n\n").unwrap();
        assert_eq!(d.values(), &[1.0, 4.0, 6.0]);
    }

    #[test]
    fn small_asymmetry_is_averaged() {
        let d = phylip("2\na 0 1\nb 1.0000001 0\n").unwrap();
        assert!((d.get(0, 1) - 1.00000005).abs() < 1e-15);
    }

    #[test]
    fn phylip_errors() {
        assert_eq!(phylip(""), Err(ParseError::Empty));
        assert!(matches!(
            phylip("2\na 0 1\nb 1.5 0\n"),
            Err(ParseError::Asymmetry {
                line: 3,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            phylip("3\na 0 1 2\nb 1 0\nc 2 3 0\n"),
            Err(ParseError::Dimension {
                line: 3,
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            phylip("2\na 0 x\nb 1 0\n"),
            Err(ParseError::NonNumeric {
                line: 2,
                column: 5,
                ..
            })
        ));
        assert!(matches!(
            phylip("2\na 0 1\na 1 0\n"),
            Err(ParseError::DuplicateName { line: 3, .. })
        ));
        assert!(matches!(
            phylip("2\na 3 1\nb 1 0\n"),
            Err(ParseError::Diagonal {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            phylip("3\na\nb 1\n"),
            Err(ParseError::Dimension {
                expected: 3,
                found: 2,
                ..
            })
        ));
        assert!(matches!(
            phylip("2\na 0 1\nb 1 0\nc 1 1\n"),
            Err(ParseError::Dimension { line: 4, .. })
        ));
        assert!(matches!(
            phylip("1\na 0\n"),
            Err(ParseError::TooFewTaxa { .. })
        ));
        assert!(matches!(
            phylip("two\n"),
            Err(ParseError::NonNumeric { line: 1, .. })
        ));
        assert!(matches!(
            phylip("2\na 0 nan\nb nan 0\n"),
            Err(ParseError::NonNumeric { .. })
        ));
    }

    #[test]
    fn csv_with_and_without_name_column() {
        let a = parse_distance_matrix(",x,y,z\nx,0,1,4\ny,1,0,6\nz,4,6,0\n", Format::Csv).unwrap();
        let b = parse_distance_matrix("x,y,z\n0,1,4\n1,0,6\n4,6,0\n", Format::Csv).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values(), &[1.0, 4.0, 6.0]);
    }

    #[test]
    fn csv_errors() {
        let csv = |t: &str| parse_distance_matrix(t, Format::Csv);
        assert!(matches!(
            csv("x,y\n0,1\n1.5,0\n"),
            Err(ParseError::Asymmetry {
                line: 3,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            csv("x,x\n0,1\n1,0\n"),
            Err(ParseError::DuplicateName { line: 1, .. })
        ));
        assert!(matches!(
            csv("x,y\n0,1\n"),
            Err(ParseError::Dimension {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            csv("x,y\n0,oops\n1,0\n"),
            Err(ParseError::NonNumeric {
                line: 2,
                column: 2,
                ..
            })
        ));
        assert!(matches!(
            csv(",x,y\nx,0,1\nq,1,0\n"),
            Err(ParseError::NameMismatch { line: 3, .. })
        ));
        assert!(matches!(
            csv("x,y\n0,1,2\n1,0\n"),
            Err(ParseError::Dimension { line: 2, .. })
        ));
    }

    #[test]
    fn writers_are_fixpoints() {
        let d = phylip("3\nalpha\nbeta 0.1\n\"g,amma\" 1e-7 123456.789\n").unwrap();
        let p = phylip(&write_phylip(&d)).unwrap();
        assert_eq!(p, d);
        assert_eq!(write_phylip(&p), write_phylip(&d));
        let c = parse_distance_matrix(&write_csv(&d), Format::Csv).unwrap();
        assert_eq!(c, d);
        assert_eq!(write_csv(&c), write_csv(&d));
    }

    proptest! {
        #[test]
        fn random_round_trips(n in 2usize..8, seed in prop::collection::vec(-1e6f64..1e6, 28)) {
            let values = seed[..pair_count(n)].to_vec();
            let d = DissimilarityMap::from_pairs(values).unwrap();
            prop_assert_eq!(&phylip(&write_phylip(&d)).unwrap(), &d);
            prop_assert_eq!(&parse_distance_matrix(&write_csv(&d), Format::Csv).unwrap(), &d);
        }
    }
}
