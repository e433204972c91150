//! Interchange formats. JSON is the primary format and embeds the group; CSV
//! is a fixed minimal dialect (one line per row, cells comma-separated,
//! residues colon-joined, empty cell = empty field) that needs the group
//! supplied on import; DOT embeds the group and shape in comment lines so the
//! graph view re-imports losslessly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{ArraySet, Pfa};
use crate::graph::BipartiteGraph;
use crate::group::Group;
use crate::verify::MagicSpec;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse: {0}")]
    Parse(String),
    #[error("array: {0}")]
    Array(#[from] crate::array::ArrayError),
    #[error("group: {0}")]
    Group(#[from] crate::group::GroupError),
}

fn parse_err(msg: impl Into<String>) -> SerialError {
    SerialError::Parse(msg.into())
}

#[derive(Serialize, Deserialize)]
struct ArrayDto {
    group: Group,
    m: usize,
    n: usize,
    cells: Vec<Vec<Option<Vec<i64>>>>,
}

#[derive(Serialize, Deserialize)]
struct SetDto {
    c: usize,
    arrays: Vec<ArrayDto>,
}

fn array_to_dto(a: &Pfa) -> ArrayDto {
    let cells = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| a.get(i, j).map(|e| e.residues().to_vec()))
                .collect()
        })
        .collect();
    ArrayDto {
        group: a.group().clone(),
        m: a.rows(),
        n: a.cols(),
        cells,
    }
}

fn array_from_dto(dto: &ArrayDto) -> Result<Pfa, SerialError> {
    if dto.cells.len() != dto.m || dto.cells.iter().any(|r| r.len() != dto.n) {
        return Err(parse_err("cell grid does not match declared dimensions"));
    }
    Ok(Pfa::from_rows(&dto.group, &dto.cells)?)
}

pub fn set_to_json(set: &ArraySet) -> String {
    let dto = SetDto {
        c: set.len(),
        arrays: set.arrays().iter().map(array_to_dto).collect(),
    };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

/// Accepts either a set document or a bare array document.
pub fn set_from_json(text: &str) -> Result<ArraySet, SerialError> {
    if let Ok(dto) = serde_json::from_str::<SetDto>(text) {
        if dto.c != dto.arrays.len() {
            return Err(parse_err("declared count differs from array list length"));
        }
        let arrays: Result<Vec<Pfa>, SerialError> = dto.arrays.iter().map(array_from_dto).collect();
        return Ok(ArraySet::new(arrays?)?);
    }
    let dto = serde_json::from_str::<ArrayDto>(text)?;
    Ok(ArraySet::singleton(array_from_dto(&dto)?))
}

pub fn spec_to_json(spec: &MagicSpec) -> String {
    serde_json::to_string_pretty(spec).expect("serializable")
}

pub fn spec_from_json(text: &str) -> Result<MagicSpec, SerialError> {
    Ok(serde_json::from_str(text)?)
}

pub fn set_to_csv(set: &ArraySet) -> String {
    let mut out = String::new();
    for (idx, a) in set.arrays().iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        for i in 0..a.rows() {
            let row: Vec<String> = (0..a.cols())
                .map(|j| match a.get(i, j) {
                    Some(e) => e
                        .residues()
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(":"),
                    None => String::new(),
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

/// CSV carries no group metadata, so the group must be supplied.
pub fn set_from_csv(text: &str, group: &Group) -> Result<ArraySet, SerialError> {
    let mut arrays = Vec::new();
    for chunk in text.split("\n\n") {
        let lines: Vec<&str> = chunk.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.is_empty() {
            continue;
        }
        let mut grid: Vec<Vec<Option<Vec<i64>>>> = Vec::with_capacity(lines.len());
        for line in lines {
            let mut row = Vec::new();
            for field in line.split(',') {
                let field = field.trim();
                if field.is_empty() {
                    row.push(None);
                } else {
                    let residues: Result<Vec<i64>, _> =
                        field.split(':').map(|t| t.trim().parse::<i64>()).collect();
                    row.push(Some(residues.map_err(|e| {
                        parse_err(format!("bad residue in {field:?}: {e}"))
                    })?));
                }
            }
            grid.push(row);
        }
        arrays.push(Pfa::from_rows(group, &grid)?);
    }
    if arrays.is_empty() {
        return Err(parse_err("no arrays found in csv input"));
    }
    Ok(ArraySet::new(arrays)?)
}

pub fn set_to_dot(set: &ArraySet) -> String {
    let mut out = String::new();
    let moduli: Vec<String> = set.group().moduli().iter().map(|m| m.to_string()).collect();
    out.push_str(&format!("// group: {}\n", moduli.join(",")));
    out.push_str(&format!(
        "// shape: {} {} {}\n",
        set.len(),
        set.rows(),
        set.cols()
    ));
    for (idx, a) in set.arrays().iter().enumerate() {
        out.push_str(&BipartiteGraph::from_array(a).to_dot(&format!("a{idx}")));
    }
    out
}

pub fn set_from_dot(text: &str) -> Result<ArraySet, SerialError> {
    let mut group: Option<Group> = None;
    let mut shape: Option<(usize, usize, usize)> = None;
    let mut arrays: Vec<Pfa> = Vec::new();
    let mut current: Option<Pfa> = None;

    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("// group:") {
            let rest = rest.trim();
            let moduli: Vec<u64> = if rest.is_empty() {
                Vec::new()
            } else {
                rest.split(',')
                    .map(|t| t.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| parse_err(format!("bad group comment: {e}")))?
            };
            group = Some(Group::new(moduli)?);
        } else if let Some(rest) = line.strip_prefix("// shape:") {
            let nums: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| parse_err(format!("bad shape comment: {e}")))?;
            if nums.len() != 3 {
                return Err(parse_err("shape comment needs three numbers"));
            }
            shape = Some((nums[0], nums[1], nums[2]));
        } else if line.starts_with("graph ") {
            let (_, rows, cols) = shape.ok_or_else(|| parse_err("graph before shape comment"))?;
            let g = group.clone().ok_or_else(|| parse_err("graph before group comment"))?;
            if let Some(done) = current.take() {
                arrays.push(done);
            }
            current = Some(Pfa::empty(g, rows, cols));
        } else if line.contains(" -- ") {
            let a = current
                .as_mut()
                .ok_or_else(|| parse_err("edge outside a graph block"))?;
            // r<i> -- c<j> [label="x:y"];
            let (left, rest) = line
                .split_once(" -- ")
                .ok_or_else(|| parse_err("malformed edge"))?;
            let row: usize = left
                .trim()
                .strip_prefix('r')
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(format!("bad row vertex in {line:?}")))?;
            let (mid, rest) = rest
                .split_once("[label=\"")
                .ok_or_else(|| parse_err("edge without label"))?;
            let col: usize = mid
                .trim()
                .strip_prefix('c')
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(format!("bad column vertex in {line:?}")))?;
            let label = rest
                .split_once('"')
                .map(|(l, _)| l)
                .ok_or_else(|| parse_err("unterminated label"))?;
            let residues: Vec<i64> = label
                .split(':')
                .map(|t| t.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| parse_err(format!("bad label {label:?}: {e}")))?;
            let e = a
                .group()
                .clone()
                .element(residues)
                .map_err(SerialError::Group)?;
            a.set(row - 1, col - 1, e)?;
        }
    }
    if let Some(done) = current.take() {
        arrays.push(done);
    }
    let (c, _, _) = shape.ok_or_else(|| parse_err("missing shape comment"))?;
    if arrays.len() != c {
        return Err(parse_err(format!(
            "shape declares {} arrays, found {}",
            c,
            arrays.len()
        )));
    }
    Ok(ArraySet::new(arrays)?)
}

/// Human-readable rendering: the group, then each array as an aligned grid.
pub fn set_to_text(set: &ArraySet) -> String {
    let mut out = format!(
        "group {}  ({} array{} of {}x{})\n",
        set.group(),
        set.len(),
        if set.len() == 1 { "" } else { "s" },
        set.rows(),
        set.cols()
    );
    for (idx, a) in set.arrays().iter().enumerate() {
        if set.len() > 1 {
            out.push_str(&format!("array {}:\n", idx + 1));
        }
        out.push_str(&a.to_string());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    pub fn from_name(name: &str) -> Option<Format> {
        match name.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "dot" => Some(Format::Dot),
            "text" | "txt" => Some(Format::Text),
            _ => None,
        }
    }

    pub fn from_path(path: &str) -> Option<Format> {
        path.rsplit_once('.').and_then(|(_, ext)| Format::from_name(ext))
    }
}

pub fn write_set(set: &ArraySet, format: Format) -> String {
    match format {
        Format::Json => set_to_json(set),
        Format::Csv => set_to_csv(set),
        Format::Dot => set_to_dot(set),
        Format::Text => set_to_text(set),
    }
}

/// `group` is only consulted for CSV input; text is write-only.
pub fn read_set(text: &str, format: Format, group: Option<&Group>) -> Result<ArraySet, SerialError> {
    match format {
        Format::Json => set_from_json(text),
        Format::Csv => {
            let g = group.ok_or_else(|| parse_err("csv input needs the group supplied"))?;
            set_from_csv(text, g)
        }
        Format::Dot => set_from_dot(text),
        Format::Text => Err(parse_err("text format is write-only")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn sample_set() -> ArraySet {
        let g = Group::new(vec![2, 6]).unwrap();
        let a = Pfa::from_rows(
            &g,
            &[
                vec![Some(vec![0, 0]), None, Some(vec![1, 5])],
                vec![None, Some(vec![1, 0]), Some(vec![0, 3])],
            ],
        )
        .unwrap();
        let b = Pfa::from_rows(
            &g,
            &[
                vec![Some(vec![0, 1]), Some(vec![1, 1]), None],
                vec![Some(vec![1, 4]), None, Some(vec![0, 5])],
            ],
        )
        .unwrap();
        ArraySet::new(vec![a, b]).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let set = sample_set();
        let text = set_to_json(&set);
        let back = set_from_json(&text).unwrap();
        assert_eq!(back, set);
        // byte stability
        assert_eq!(set_to_json(&back), text);
    }

    #[test]
    fn csv_round_trip_with_group() {
        let set = sample_set();
        let text = set_to_csv(&set);
        assert!(text.contains("1:5"));
        let back = set_from_csv(&text, set.group()).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn dot_round_trip() {
        let set = sample_set();
        let text = set_to_dot(&set);
        let back = set_from_dot(&text).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn bare_array_json_accepted() {
        let g = Group::integers();
        let a = Pfa::from_int_rows(&[vec![Some(5), None]]).unwrap();
        let dto = super::array_to_dto(&a);
        let text = serde_json::to_string(&dto).unwrap();
        let back = set_from_json(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back.group(), &g);
    }

    #[test]
    fn csv_rejects_garbage() {
        let g = Group::integers();
        assert!(set_from_csv("a,b\n", &g).is_err());
        assert!(set_from_csv("", &g).is_err());
    }
}
