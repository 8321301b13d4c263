//! Text formats: facet lists, bracketed facet lists and poset files.

use crate::complex::{FacePoset, PosetCellJson, SimplicialComplex};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads a facet file: one facet per line as whitespace-separated labels,
/// `#` starts a comment.
pub fn parse_facets(text: &str) -> Result<SimplicialComplex> {
    let mut facets: Vec<Vec<String>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let labels: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        if labels.is_empty() {
            continue;
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_err(i + 1, format!("duplicate vertex {:?}", w[0])));
        }
        facets.push(labels);
    }
    if facets.is_empty() {
        return Err(Error::Empty);
    }
    SimplicialComplex::from_facets(facets)
}

/// Writes the facet file format.
pub fn write_facets(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for f in k.facet_labels() {
        out.push_str(&f.join(" "));
        out.push('\n');
    }
    out
}

/// Reads the bracketed facet-list format `name=[[1,2,3],[1,2,4],...]`, which
/// may span several lines. The name and `=` are optional.
pub fn parse_lutz(text: &str) -> Result<SimplicialComplex> {
    let mut facets: Vec<Vec<String>> = Vec::new();
    let mut depth = 0;
    let mut current: Vec<String> = Vec::new();
    let mut token = String::new();
    let mut started = false;
    let mut finished = false;
    let mut line = 1;
    for ch in text.chars() {
        if ch == '\n' {
            line += 1;
        }
        if finished {
            if !ch.is_whitespace() {
                return Err(parse_err(line, format!("unexpected {ch:?} after the facet list")));
            }
            continue;
        }
        match ch {
            '[' => {
                started = true;
                depth += 1;
                if depth > 2 {
                    return Err(parse_err(line, "lists nest deeper than two levels"));
                }
            }
            ']' => {
                if depth == 2 {
                    if !token.is_empty() {
                        current.push(std::mem::take(&mut token));
                    }
                    if current.is_empty() {
                        return Err(parse_err(line, "empty facet"));
                    }
                    facets.push(std::mem::take(&mut current));
                } else if depth == 1 {
                    finished = true;
                } else {
                    return Err(parse_err(line, "unbalanced ']'"));
                }
                depth -= 1;
            }
            ',' => {
                if depth == 2 {
                    if token.is_empty() {
                        return Err(parse_err(line, "missing label"));
                    }
                    current.push(std::mem::take(&mut token));
                }
            }
            c if c.is_whitespace() => {}
            c if !started => {
                if !(c.is_alphanumeric() || "_=-.^".contains(c)) {
                    return Err(parse_err(line, format!("unexpected {c:?} before the facet list")));
                }
            }
            c if depth == 2 && (c.is_alphanumeric() || c == '_') => token.push(c),
            c => return Err(parse_err(line, format!("unexpected {c:?}"))),
        }
    }
    if !finished {
        let last = text.trim_end().lines().count().max(1);
        return Err(parse_err(last, "facet list is not closed"));
    }
    for (i, f) in facets.iter().enumerate() {
        let mut s = f.clone();
        s.sort();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex { label: s.windows(2).find(|w| w[0] == w[1]).unwrap()[0].clone(), facet: i });
        }
    }
    SimplicialComplex::from_facets(facets)
}

/// Either format, chosen by content.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let first = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
    match first {
        Some(l) if l.contains('[') => parse_lutz(text),
        _ => parse_facets(text),
    }
}

/// Reads a poset file: a JSON array of `{id, dim, boundary}`.
pub fn parse_poset(text: &str) -> Result<FacePoset> {
    let cells: Vec<PosetCellJson> = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    FacePoset::from_json_cells(&cells)
}

pub fn write_poset(p: &FacePoset) -> String {
    serde_json::to_string_pretty(&p.to_json_cells()).expect("poset cells serialize")
}
