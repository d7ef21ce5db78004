//! The `.grp` table format and the constructor shorthand used in `.gtr`
//! files.
//!
//! ```text
//! order 3
//! labels e a b
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```

use super::{FiniteGroup, GroupError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: GroupError },
}

pub fn parse_grp(text: &str) -> Result<FiniteGroup, GroupFormatError> {
    let syntax = |line, message: String| GroupFormatError::Syntax { line, message };
    let mut order: Option<usize> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        last_line = line;
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "order" if order.is_none() => {
                let m = words
                    .get(1)
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|_| words.len() == 2)
                    .ok_or_else(|| syntax(line, "`order` takes one count".into()))?;
                order = Some(m);
            }
            "labels" if labels.is_none() && rows.is_empty() => {
                labels = Some(words[1..].iter().map(|s| s.to_string()).collect());
            }
            _ => {
                let m = order.ok_or_else(|| syntax(line, "`order` must come first".into()))?;
                let row = words
                    .iter()
                    .map(|w| w.parse::<usize>().map_err(|_| syntax(line, format!("expected an index, found {w:?}"))))
                    .collect::<Result<Vec<usize>, _>>()?;
                if row.len() != m {
                    return Err(syntax(line, format!("expected {m} entries, found {}", row.len())));
                }
                rows.push(row);
            }
        }
    }
    let m = order.ok_or_else(|| syntax(last_line, "missing `order` line".into()))?;
    if rows.len() != m {
        return Err(syntax(last_line, format!("expected {m} table rows, found {}", rows.len())));
    }
    FiniteGroup::from_table(&rows, labels).map_err(|source| GroupFormatError::Invalid { line: last_line, source })
}

pub fn write_grp(g: &FiniteGroup) -> String {
    let mut out = format!("order {}\n", g.order());
    if let Some(labels) = g.labels() {
        out.push_str(&format!("labels {}\n", labels.join(" ")));
    }
    for row in g.table() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a constructor expression from the front of `words`:
/// `cyclic <n>`, `symmetric <n>`, `dihedral <n>`, `quaternion`,
/// `product <g1> <g2>`, `table <path>` or `inline <m> <m*m entries>`. Returns the group and the unread words.
/// `table` references are handed to `resolve`.
pub fn parse_group_expr<'a>(
    words: &'a [&'a str],
    resolve: &dyn Fn(&str) -> Result<FiniteGroup, String>,
) -> Result<(FiniteGroup, &'a [&'a str]), String> {
    let number = |w: Option<&&str>| -> Result<usize, String> {
        let w = w.ok_or("missing number")?;
        w.parse::<usize>().map_err(|_| format!("expected a number, found {w:?}"))
    };
    let (head, rest) = words.split_first().ok_or("missing group constructor")?;
    match *head {
        "cyclic" => Ok((FiniteGroup::cyclic(number(rest.first())?).map_err(|e| e.to_string())?, &rest[1..])),
        "symmetric" => Ok((FiniteGroup::symmetric(number(rest.first())?).map_err(|e| e.to_string())?, &rest[1..])),
        "dihedral" => Ok((FiniteGroup::dihedral(number(rest.first())?).map_err(|e| e.to_string())?, &rest[1..])),
        "quaternion" => Ok((FiniteGroup::quaternion(), rest)),
        "product" => {
            let (g, rest) = parse_group_expr(rest, resolve)?;
            let (h, rest) = parse_group_expr(rest, resolve)?;
            Ok((FiniteGroup::direct_product(&g, &h).map_err(|e| e.to_string())?, rest))
        }
        "table" => {
            let path = rest.first().ok_or("missing table path")?;
            Ok((resolve(path)?, &rest[1..]))
        }
        "inline" => {
            let m = number(rest.first())?;
            if rest.len() < 1 + m * m {
                return Err(format!("inline table needs {} entries", m * m));
            }
            let cells = rest[1..1 + m * m]
                .iter()
                .map(|w| w.parse::<usize>().map_err(|_| format!("expected an index, found {w:?}")))
                .collect::<Result<Vec<usize>, _>>()?;
            let table: Vec<Vec<usize>> = cells.chunks(m).map(|r| r.to_vec()).collect();
            Ok((FiniteGroup::from_table(&table, None).map_err(|e| e.to_string())?, &rest[1 + m * m..]))
        }
        other => Err(format!("unknown group constructor {other:?}")),
    }
}

/// The `inline` expression for a table.
pub fn inline_expr(g: &FiniteGroup) -> String {
    let cells: Vec<String> = g.table().concat().iter().map(|c| c.to_string()).collect();
    format!("inline {} {}", g.order(), cells.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_files(_: &str) -> Result<FiniteGroup, String> {
        Err("no files".into())
    }

    #[test]
    fn grp_round_trip() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let back = parse_grp(&write_grp(&s3)).unwrap();
        assert!(back.same_table(&s3));
        assert_eq!(back.labels(), s3.labels());
    }

    #[test]
    fn grp_errors() {
        let err = parse_grp("order 2\n0 1\n1\n").unwrap_err();
        assert_eq!(err, GroupFormatError::Syntax { line: 3, message: "expected 2 entries, found 1".into() });
        assert!(matches!(parse_grp("order 2\n0 1\n0 1\n"), Err(GroupFormatError::Invalid { .. })));
    }

    #[test]
    fn expressions() {
        let words = ["product", "cyclic", "2", "symmetric", "3", "tail"];
        let (g, rest) = parse_group_expr(&words, &no_files).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(rest, ["tail"]);
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let text = inline_expr(&z3);
        let words: Vec<&str> = text.split_whitespace().collect();
        let (back, rest) = parse_group_expr(&words, &no_files).unwrap();
        assert!(back.same_table(&z3));
        assert!(rest.is_empty());
        assert!(parse_group_expr(&["table", "x.grp"], &no_files).is_err());
    }
}
