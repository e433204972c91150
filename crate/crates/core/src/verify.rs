//! Specification of what it means for a set of partially filled arrays to be
//! magic, and a verifier that reports every violated requirement instead of
//! stopping at the first.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::ArraySet;
use crate::group::{Group, GroupElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("{0}")]
    Invalid(String),
}

/// The symbol set the arrays must jointly use, each symbol exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaSpec {
    /// 1..=upper inside the integers.
    IntegerInterval { upper: i64 },
    /// -half..=half inside the integers, optionally without 0.
    SignedRange { half: i64, include_zero: bool },
    /// Every element of the group.
    FullGroup,
    /// Every element except zero.
    NonzeroGroup,
    /// One representative from each pair {x,-x} of nonzero classes of
    /// Z_modulus; which representative is free per class.
    HalfClasses { modulus: u64 },
    /// An explicit list of residue vectors.
    Explicit { elements: Vec<Vec<i64>> },
}

impl OmegaSpec {
    /// Number of symbols demanded, when determined by the spec alone.
    pub fn size(&self, group: &Group) -> Option<u64> {
        match self {
            OmegaSpec::IntegerInterval { upper } => Some((*upper).max(0) as u64),
            OmegaSpec::SignedRange { half, include_zero } => {
                Some(2 * (*half).max(0) as u64 + u64::from(*include_zero))
            }
            OmegaSpec::FullGroup => group.order(),
            OmegaSpec::NonzeroGroup => group.order().map(|o| o - 1),
            OmegaSpec::HalfClasses { modulus } => Some((modulus - 1) / 2),
            OmegaSpec::Explicit { elements } => Some(elements.len() as u64),
        }
    }

    /// The concrete symbol set, when it is a fixed set. `HalfClasses` has no
    /// fixed set and returns None.
    pub fn materialize(&self, group: &Group) -> Result<Option<Vec<GroupElement>>, SpecError> {
        let bad = |msg: &str| Err(SpecError::Invalid(msg.to_string()));
        match self {
            OmegaSpec::IntegerInterval { upper } => {
                if !group.is_integers() {
                    return bad("an integer interval needs the integers as group");
                }
                Ok(Some(
                    (1..=*upper).map(|v| group.scalar(v).unwrap()).collect(),
                ))
            }
            OmegaSpec::SignedRange { half, include_zero } => {
                if !group.is_integers() {
                    return bad("a signed range needs the integers as group");
                }
                let mut v: Vec<GroupElement> = (-*half..=-1).map(|x| group.scalar(x).unwrap()).collect();
                if *include_zero {
                    v.push(group.zero());
                }
                v.extend((1..=*half).map(|x| group.scalar(x).unwrap()));
                Ok(Some(v))
            }
            OmegaSpec::FullGroup => match group.elements() {
                Ok(v) => Ok(Some(v)),
                Err(_) => bad("the full-group symbol set needs a finite group"),
            },
            OmegaSpec::NonzeroGroup => match group.elements() {
                Ok(v) => Ok(Some(v.into_iter().filter(|e| !e.is_zero()).collect())),
                Err(_) => bad("the nonzero-group symbol set needs a finite group"),
            },
            OmegaSpec::HalfClasses { modulus } => {
                if group.moduli() != [*modulus] {
                    return bad("half-class symbols need the matching cyclic group");
                }
                if *modulus % 2 == 0 {
                    return bad("half-class symbols need an odd modulus");
                }
                Ok(None)
            }
            OmegaSpec::Explicit { elements } => {
                let mut out = Vec::with_capacity(elements.len());
                let mut seen = BTreeSet::new();
                for res in elements {
                    match group.element(res.clone()) {
                        Ok(e) => {
                            if !seen.insert(e.clone()) {
                                return bad(&format!("explicit symbol repeated: {e}"));
                            }
                            out.push(e);
                        }
                        Err(e) => return bad(&format!("explicit symbol invalid: {e}")),
                    }
                }
                Ok(Some(out))
            }
        }
    }
}

/// Full description of a magic partially-filled-array problem instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagicSpec {
    pub group: Group,
    /// Grid height m.
    pub rows: usize,
    /// Grid width n.
    pub cols: usize,
    /// Filled cells per row (s).
    pub row_fill: usize,
    /// Filled cells per column (k).
    pub col_fill: usize,
    /// Number of arrays jointly partitioning the symbol set (c).
    pub arrays: usize,
    pub omega: OmegaSpec,
    /// Require row and column sums to be zero.
    #[serde(default)]
    pub zero_sum: bool,
    /// Require each array to occupy `col_fill` consecutive cyclic diagonals.
    #[serde(default)]
    pub diagonal: bool,
}

impl MagicSpec {
    pub fn new(
        group: Group,
        rows: usize,
        cols: usize,
        row_fill: usize,
        col_fill: usize,
        arrays: usize,
        omega: OmegaSpec,
    ) -> MagicSpec {
        MagicSpec {
            group,
            rows,
            cols,
            row_fill,
            col_fill,
            arrays,
            omega,
            zero_sum: false,
            diagonal: false,
        }
    }

    pub fn zero_sum(mut self) -> MagicSpec {
        self.zero_sum = true;
        self
    }

    pub fn diagonal(mut self) -> MagicSpec {
        self.diagonal = true;
        self
    }

    /// Filled cells per array.
    pub fn cells_per_array(&self) -> usize {
        self.cols * self.col_fill
    }

    /// Total symbols across the whole set.
    pub fn total_cells(&self) -> usize {
        self.cells_per_array() * self.arrays
    }

    /// Structural sanity: line-degree bounds, the counting identity
    /// m*s = n*k, more than one symbol, and a symbol set of matching size.
    pub fn validate(&self) -> Result<(), SpecError> {
        let e = |msg: String| Err(SpecError::Invalid(msg));
        if self.arrays == 0 {
            return e("a set must contain at least one array".into());
        }
        if !(2 <= self.row_fill && self.row_fill <= self.cols) {
            return e(format!(
                "row fill must satisfy 2 <= s <= n, got s={} n={}",
                self.row_fill, self.cols
            ));
        }
        if !(2 <= self.col_fill && self.col_fill <= self.rows) {
            return e(format!(
                "column fill must satisfy 2 <= k <= m, got k={} m={}",
                self.col_fill, self.rows
            ));
        }
        if self.rows * self.row_fill != self.cols * self.col_fill {
            return e(format!(
                "cell count mismatch: m*s = {} but n*k = {}",
                self.rows * self.row_fill,
                self.cols * self.col_fill
            ));
        }
        if self.total_cells() <= 1 {
            return e("the symbol set must have more than one element".into());
        }
        if self.diagonal && self.rows != self.cols {
            return e("diagonal arrays must be square".into());
        }
        match &self.omega {
            OmegaSpec::HalfClasses { modulus } => {
                if self.arrays != 1 {
                    return e("half-class specs describe a single array".into());
                }
                if *modulus != 2 * self.total_cells() as u64 + 1 {
                    return e(format!(
                        "half-class modulus must be 2*n*k+1 = {}, got {}",
                        2 * self.total_cells() + 1,
                        modulus
                    ));
                }
                if !self.zero_sum {
                    return e("half-class specs are zero-sum by definition".into());
                }
            }
            other => {
                let need = self.total_cells() as u64;
                match other.size(&self.group) {
                    Some(sz) if sz == need => {}
                    Some(sz) => {
                        return e(format!("symbol set has {} elements, need {}", sz, need))
                    }
                    None => return e("symbol set size undetermined (infinite group)".into()),
                }
            }
        }
        self.omega.materialize(&self.group)?;
        Ok(())
    }
}

/// Everything the verifier measured, plus the list of violated requirements.
/// `failures` empty means the set satisfies the spec.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub row_fills: Vec<Vec<usize>>,
    pub col_fills: Vec<Vec<usize>>,
    pub row_sums: Vec<Vec<GroupElement>>,
    pub col_sums: Vec<Vec<GroupElement>>,
    /// The shared row sum x / column sum y, when uniform.
    pub row_constant: Option<GroupElement>,
    pub col_constant: Option<GroupElement>,
    pub missing_symbols: Vec<String>,
    pub duplicate_symbols: Vec<String>,
    pub foreign_symbols: Vec<String>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.pass() {
            let x = self
                .row_constant
                .as_ref()
                .map_or("-".to_string(), |e| e.to_string());
            let y = self
                .col_constant
                .as_ref()
                .map_or("-".to_string(), |e| e.to_string());
            format!("pass (row sum {x}, column sum {y})")
        } else {
            format!("fail: {}", self.failures.join("; "))
        }
    }
}

/// Check `set` against `spec`, reporting every violation.
pub fn verify(set: &ArraySet, spec: &MagicSpec) -> VerificationReport {
    let mut failures = Vec::new();
    let mut report = VerificationReport {
        row_fills: Vec::new(),
        col_fills: Vec::new(),
        row_sums: Vec::new(),
        col_sums: Vec::new(),
        row_constant: None,
        col_constant: None,
        missing_symbols: Vec::new(),
        duplicate_symbols: Vec::new(),
        foreign_symbols: Vec::new(),
        failures: Vec::new(),
    };

    if let Err(SpecError::Invalid(msg)) = spec.validate() {
        failures.push(format!("spec invalid: {msg}"));
        report.failures = failures;
        return report;
    }
    if set.len() != spec.arrays {
        failures.push(format!("expected {} arrays, got {}", spec.arrays, set.len()));
    }
    if set.rows() != spec.rows || set.cols() != spec.cols {
        failures.push(format!(
            "expected {}x{} arrays, got {}x{}",
            spec.rows,
            spec.cols,
            set.rows(),
            set.cols()
        ));
    }
    if set.group() != &spec.group {
        failures.push("arrays live over a different group than the spec".to_string());
    }
    if !failures.is_empty() {
        report.failures = failures;
        return report;
    }

    // fill counts and line sums
    for a in set.arrays() {
        let rf: Vec<usize> = (0..a.rows()).map(|i| a.row_fill(i)).collect();
        let cf: Vec<usize> = (0..a.cols()).map(|j| a.col_fill(j)).collect();
        if rf.iter().any(|&f| f != spec.row_fill) {
            failures.push(format!(
                "row fill counts {:?} differ from required {}",
                rf, spec.row_fill
            ));
        }
        if cf.iter().any(|&f| f != spec.col_fill) {
            failures.push(format!(
                "column fill counts {:?} differ from required {}",
                cf, spec.col_fill
            ));
        }
        report.row_sums.push((0..a.rows()).map(|i| a.row_sum(i)).collect());
        report.col_sums.push((0..a.cols()).map(|j| a.col_sum(j)).collect());
        report.row_fills.push(rf);
        report.col_fills.push(cf);
    }

    let all_row_sums: Vec<&GroupElement> = report.row_sums.iter().flatten().collect();
    let all_col_sums: Vec<&GroupElement> = report.col_sums.iter().flatten().collect();
    if let Some(first) = all_row_sums.first() {
        if all_row_sums.iter().all(|s| s == first) {
            report.row_constant = Some((*first).clone());
        } else {
            failures.push("row sums are not constant across the set".to_string());
        }
    }
    if let Some(first) = all_col_sums.first() {
        if all_col_sums.iter().all(|s| s == first) {
            report.col_constant = Some((*first).clone());
        } else {
            failures.push("column sums are not constant across the set".to_string());
        }
    }
    if spec.zero_sum {
        if report.row_constant.as_ref().is_some_and(|x| !x.is_zero()) {
            failures.push(format!(
                "row sums equal {} instead of zero",
                report.row_constant.as_ref().unwrap()
            ));
        }
        if report.col_constant.as_ref().is_some_and(|y| !y.is_zero()) {
            failures.push(format!(
                "column sums equal {} instead of zero",
                report.col_constant.as_ref().unwrap()
            ));
        }
    }

    // symbol coverage
    match &spec.omega {
        OmegaSpec::HalfClasses { modulus } => {
            let half = (modulus - 1) / 2;
            let mut class_count: BTreeMap<u64, usize> = BTreeMap::new();
            for e in set.entries() {
                let r = e.residues()[0] as u64;
                if r == 0 {
                    report.foreign_symbols.push("0".to_string());
                    continue;
                }
                let class = r.min(modulus - r);
                *class_count.entry(class).or_default() += 1;
            }
            for cls in 1..=half {
                match class_count.get(&cls).copied().unwrap_or(0) {
                    0 => report.missing_symbols.push(format!("{{{cls},-{cls}}}")),
                    1 => {}
                    _ => report.duplicate_symbols.push(format!("{{{cls},-{cls}}}")),
                }
            }
        }
        fixed => {
            let symbols = fixed
                .materialize(&spec.group)
                .expect("validated above")
                .expect("fixed symbol sets materialize");
            let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
            for e in set.entries() {
                *counts.entry(e.residues().to_vec()).or_default() += 1;
            }
            for sym in &symbols {
                match counts.remove(sym.residues()) {
                    None | Some(0) => report.missing_symbols.push(sym.to_string()),
                    Some(1) => {}
                    Some(_) => report.duplicate_symbols.push(sym.to_string()),
                }
            }
            for (res, count) in counts {
                let shown = spec.group.element(res).unwrap().to_string();
                for _ in 0..count {
                    report.foreign_symbols.push(shown.clone());
                }
            }
        }
    }
    if !report.missing_symbols.is_empty() {
        failures.push(format!(
            "missing symbols: {}",
            preview(&report.missing_symbols)
        ));
    }
    if !report.duplicate_symbols.is_empty() {
        failures.push(format!(
            "repeated symbols: {}",
            preview(&report.duplicate_symbols)
        ));
    }
    if !report.foreign_symbols.is_empty() {
        failures.push(format!(
            "entries outside the symbol set: {}",
            preview(&report.foreign_symbols)
        ));
    }

    if spec.diagonal {
        for (idx, a) in set.arrays().iter().enumerate() {
            match a.is_diagonal(spec.col_fill) {
                Ok(true) => {}
                Ok(false) => failures.push(format!(
                    "array {} does not occupy {} consecutive diagonals",
                    idx, spec.col_fill
                )),
                Err(_) => failures.push(format!("array {} is not square", idx)),
            }
        }
    }

    report.failures = failures;
    report
}

fn preview(items: &[String]) -> String {
    const LIMIT: usize = 8;
    if items.len() <= LIMIT {
        items.join(", ")
    } else {
        format!("{}, ... ({} total)", items[..LIMIT].join(", "), items.len())
    }
}
