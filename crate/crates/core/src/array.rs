//! Partially filled arrays and sets thereof. Rows and columns are 0-based
//! internally; every rendering layer converts to 1-based for display.

use std::fmt;

use thiserror::Error;

use crate::group::{Group, GroupElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrayError {
    #[error("cell ({row},{col}) outside a {rows}x{cols} array")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("cell ({row},{col}) is already filled")]
    Occupied { row: usize, col: usize },
    #[error("entry group differs from array group")]
    GroupMismatch,
    #[error("arrays in a set must share group and dimensions")]
    MixedSet,
    #[error("a set must contain at least one array")]
    EmptySet,
    #[error("operation requires a square array")]
    NotSquare,
    #[error("juxtaposition requires equal row counts and a common group")]
    BadJuxtaposition,
    #[error("fold target {rows}x{cols} does not divide a side-{side} square")]
    BadFoldShape { rows: usize, cols: usize, side: usize },
    #[error("fold maps two filled cells onto ({row},{col})")]
    FoldCollision { row: usize, col: usize },
    #[error("entry map is not injective on the filled cells")]
    NotInjective,
    #[error("integer entries required")]
    NotIntegers,
}

/// A partially filled array: an m x n grid over one group, each cell empty or
/// holding one element.
#[derive(Clone, PartialEq, Eq)]
pub struct Pfa {
    group: Group,
    rows: usize,
    cols: usize,
    cells: Vec<Option<GroupElement>>,
}

impl Pfa {
    pub fn empty(group: Group, rows: usize, cols: usize) -> Pfa {
        Pfa {
            group,
            rows,
            cols,
            cells: vec![None; rows * cols],
        }
    }

    /// Build from per-row residue vectors; `None` marks an empty cell.
    pub fn from_rows(group: &Group, rows: &[Vec<Option<Vec<i64>>>]) -> Result<Pfa, ArrayError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut out = Pfa::empty(group.clone(), height, width);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(ArrayError::MixedSet);
            }
            for (j, cell) in row.iter().enumerate() {
                if let Some(residues) = cell {
                    let e = group
                        .element(residues.clone())
                        .map_err(|_| ArrayError::GroupMismatch)?;
                    out.set(i, j, e)?;
                }
            }
        }
        Ok(out)
    }

    /// Shorthand for integer arrays: 0 is rendered as an empty cell is NOT
    /// assumed; use `None` via `from_rows` when 0 must be an entry.
    pub fn from_int_rows(rows: &[Vec<Option<i64>>]) -> Result<Pfa, ArrayError> {
        let grid: Vec<Vec<Option<Vec<i64>>>> = rows
            .iter()
            .map(|r| r.iter().map(|c| c.map(|v| vec![v])).collect())
            .collect();
        Pfa::from_rows(&Group::integers(), &grid)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&GroupElement> {
        self.cells.get(row * self.cols + col).and_then(|c| c.as_ref())
    }

    /// Place an entry; placing onto a filled cell is an error so construction
    /// collisions surface immediately.
    pub fn set(&mut self, row: usize, col: usize, value: GroupElement) -> Result<(), ArrayError> {
        if row >= self.rows || col >= self.cols {
            return Err(ArrayError::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if value.group() != &self.group {
            return Err(ArrayError::GroupMismatch);
        }
        let slot = &mut self.cells[row * self.cols + col];
        if slot.is_some() {
            return Err(ArrayError::Occupied { row, col });
        }
        *slot = Some(value);
        Ok(())
    }

    pub fn filled(&self) -> impl Iterator<Item = (usize, usize, &GroupElement)> {
        self.cells.iter().enumerate().filter_map(move |(idx, c)| {
            c.as_ref().map(|e| (idx / self.cols, idx % self.cols, e))
        })
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> Vec<GroupElement> {
        self.cells.iter().filter_map(|c| c.clone()).collect()
    }

    pub fn row_fill(&self, row: usize) -> usize {
        (0..self.cols).filter(|&j| self.get(row, j).is_some()).count()
    }

    pub fn col_fill(&self, col: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, col).is_some()).count()
    }

    pub fn row_sum(&self, row: usize) -> GroupElement {
        (0..self.cols)
            .filter_map(|j| self.get(row, j))
            .fold(self.group.zero(), |acc, e| acc.add(e).unwrap())
    }

    pub fn col_sum(&self, col: usize) -> GroupElement {
        (0..self.rows)
            .filter_map(|i| self.get(i, col))
            .fold(self.group.zero(), |acc, e| acc.add(e).unwrap())
    }

    pub fn transpose(&self) -> Pfa {
        let mut out = Pfa::empty(self.group.clone(), self.cols, self.rows);
        for (i, j, e) in self.filled() {
            out.set(j, i, e.clone()).unwrap();
        }
        out
    }

    /// Add `delta` to every entry. Injective by construction.
    pub fn shift_entries(&self, delta: &GroupElement) -> Result<Pfa, ArrayError> {
        if delta.group() != &self.group {
            return Err(ArrayError::GroupMismatch);
        }
        let mut out = Pfa::empty(self.group.clone(), self.rows, self.cols);
        for (i, j, e) in self.filled() {
            out.set(i, j, e.add(delta).unwrap())?;
        }
        Ok(out)
    }

    /// Apply `f` to every entry, landing in `target`. The images must be
    /// pairwise distinct.
    pub fn map_entries(
        &self,
        target: &Group,
        mut f: impl FnMut(&GroupElement) -> GroupElement,
    ) -> Result<Pfa, ArrayError> {
        let mut out = Pfa::empty(target.clone(), self.rows, self.cols);
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, e) in self.filled() {
            let image = f(e);
            if image.group() != target {
                return Err(ArrayError::GroupMismatch);
            }
            if !seen.insert(image.residues().to_vec()) {
                return Err(ArrayError::NotInjective);
            }
            out.set(i, j, image)?;
        }
        Ok(out)
    }

    /// Reduce integer entries into Z_modulus.
    pub fn reduce_mod(&self, modulus: u64) -> Result<Pfa, ArrayError> {
        if !self.group.is_integers() {
            return Err(ArrayError::NotIntegers);
        }
        let target = Group::cyclic(modulus).map_err(|_| ArrayError::NotIntegers)?;
        self.map_entries(&target, |e| target.scalar(e.residues()[0]).unwrap())
    }

    /// Cells grouped by cyclic diagonal: cell (i,j) lies on diagonal
    /// (j - i) mod n. Square arrays only.
    pub fn filled_diagonals(&self) -> Result<Vec<usize>, ArrayError> {
        if self.rows != self.cols {
            return Err(ArrayError::NotSquare);
        }
        let n = self.rows;
        let mut seen = vec![false; n];
        for (i, j, _) in self.filled() {
            seen[(j + n - i) % n] = true;
        }
        Ok((0..n).filter(|&d| seen[d]).collect())
    }

    /// True when the filled cells are exactly `band` cyclically consecutive
    /// full diagonals.
    pub fn is_diagonal(&self, band: usize) -> Result<bool, ArrayError> {
        if self.rows != self.cols {
            return Err(ArrayError::NotSquare);
        }
        let n = self.rows;
        let diags = self.filled_diagonals()?;
        if diags.len() != band || self.filled_count() != band * n {
            return Ok(false);
        }
        // every listed diagonal must be completely filled
        for &d in &diags {
            for i in 0..n {
                if self.get(i, (i + d) % n).is_none() {
                    return Ok(false);
                }
            }
        }
        if band == n {
            return Ok(true);
        }
        // cyclic consecutiveness: exactly one gap in the sorted diagonal list
        let mut gaps = 0;
        for w in 0..diags.len() {
            let next = diags[(w + 1) % diags.len()];
            let step = (next + n - diags[w]) % n;
            if step != 1 {
                gaps += 1;
            }
        }
        Ok(gaps == 1)
    }

    /// Wrap a square array onto an m x n grid by (i,j) -> (i mod m, j mod n).
    pub fn fold_to_rect(&self, rows: usize, cols: usize) -> Result<Pfa, ArrayError> {
        if self.rows != self.cols {
            return Err(ArrayError::NotSquare);
        }
        let side = self.rows;
        if rows == 0 || cols == 0 || side % rows != 0 || side % cols != 0 {
            return Err(ArrayError::BadFoldShape { rows, cols, side });
        }
        let mut out = Pfa::empty(self.group.clone(), rows, cols);
        for (i, j, e) in self.filled() {
            let (ti, tj) = (i % rows, j % cols);
            out.set(ti, tj, e.clone()).map_err(|err| match err {
                ArrayError::Occupied { row, col } => ArrayError::FoldCollision { row, col },
                other => other,
            })?;
        }
        Ok(out)
    }

    /// Kronecker-style product: block (q1,q2) of the left array, when filled,
    /// is replaced by a copy of the right array paired with that entry.
    pub fn kronecker(&self, other: &Pfa) -> Pfa {
        let group = self.group.direct_sum(&other.group);
        let mut out = Pfa::empty(group.clone(), self.rows * other.rows, self.cols * other.cols);
        for (i1, j1, e1) in self.filled() {
            for (i2, j2, e2) in other.filled() {
                let mut residues = e1.residues().to_vec();
                residues.extend_from_slice(e2.residues());
                let e = group.element(residues).unwrap();
                out.set(i1 * other.rows + i2, j1 * other.cols + j2, e).unwrap();
            }
        }
        out
    }
}

impl fmt::Debug for Pfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Pfa {}x{} over {}", self.rows, self.cols, self.group)?;
        write!(f, "{}", self)
    }
}

impl fmt::Display for Pfa {
    /// Aligned grid; empty cells print as '.'.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut widths = vec![1usize; self.cols];
        let mut texts = vec![String::new(); self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let t = match self.get(i, j) {
                    Some(e) => e.to_string(),
                    None => ".".to_string(),
                };
                widths[j] = widths[j].max(t.len());
                texts[i * self.cols + j] = t;
            }
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", texts[i * self.cols + j], w = widths[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Place arrays side by side (same height, same group).
pub fn juxtapose(parts: &[Pfa]) -> Result<Pfa, ArrayError> {
    let first = parts.first().ok_or(ArrayError::EmptySet)?;
    if parts
        .iter()
        .any(|p| p.rows != first.rows || p.group != first.group)
    {
        return Err(ArrayError::BadJuxtaposition);
    }
    let cols = parts.iter().map(|p| p.cols).sum();
    let mut out = Pfa::empty(first.group.clone(), first.rows, cols);
    let mut offset = 0;
    for p in parts {
        for (i, j, e) in p.filled() {
            out.set(i, offset + j, e.clone())?;
        }
        offset += p.cols;
    }
    Ok(out)
}

/// A nonempty list of same-shaped arrays over one group, intended to
/// partition a symbol set jointly.
#[derive(Clone, PartialEq, Eq)]
pub struct ArraySet {
    arrays: Vec<Pfa>,
}

impl ArraySet {
    pub fn new(arrays: Vec<Pfa>) -> Result<ArraySet, ArrayError> {
        let first = arrays.first().ok_or(ArrayError::EmptySet)?;
        if arrays
            .iter()
            .any(|a| a.rows != first.rows || a.cols != first.cols || a.group != first.group)
        {
            return Err(ArrayError::MixedSet);
        }
        Ok(ArraySet { arrays })
    }

    pub fn singleton(array: Pfa) -> ArraySet {
        ArraySet { arrays: vec![array] }
    }

    pub fn arrays(&self) -> &[Pfa] {
        &self.arrays
    }

    pub fn len(&self) -> usize {
        self.arrays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrays.is_empty()
    }

    pub fn group(&self) -> &Group {
        self.arrays[0].group()
    }

    pub fn rows(&self) -> usize {
        self.arrays[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.arrays[0].cols()
    }

    /// Entries of every member, in set order then row-major order.
    pub fn entries(&self) -> Vec<GroupElement> {
        self.arrays.iter().flat_map(|a| a.entries()).collect()
    }

    pub fn map(&self, mut f: impl FnMut(&Pfa) -> Result<Pfa, ArrayError>) -> Result<ArraySet, ArrayError> {
        let arrays: Result<Vec<Pfa>, ArrayError> = self.arrays.iter().map(|a| f(a)).collect();
        ArraySet::new(arrays?)
    }

    pub fn transpose(&self) -> ArraySet {
        ArraySet {
            arrays: self.arrays.iter().map(|a| a.transpose()).collect(),
        }
    }

    pub fn fold_to_rect(&self, rows: usize, cols: usize) -> Result<ArraySet, ArrayError> {
        self.map(|a| a.fold_to_rect(rows, cols))
    }

    /// Pairwise Kronecker products, left index slow.
    pub fn kronecker(&self, other: &ArraySet) -> ArraySet {
        let mut arrays = Vec::with_capacity(self.len() * other.len());
        for a in &self.arrays {
            for b in &other.arrays {
                arrays.push(a.kronecker(b));
            }
        }
        ArraySet { arrays }
    }
}

impl fmt::Debug for ArraySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, a) in self.arrays.iter().enumerate() {
            writeln!(f, "array {}:", idx)?;
            write!(f, "{}", a)?;
        }
        Ok(())
    }
}
