//! Exhaustive backtracking search for magic sets. Patterns (which cells are
//! filled) are enumerated first with column-capacity pruning; entries are
//! assigned row-major with forced-last-cell propagation and, over the
//! integers, partial-sum window pruning. A `NoneExists` outcome is only
//! reported after the full (symmetry-reduced) space has been enumerated.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::array::{ArraySet, Pfa};
use crate::group::GroupElement;
use crate::verify::{MagicSpec, OmegaSpec};

#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Refuse instances with more filled cells than this outright.
    pub max_cells: usize,
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_cells: 64,
            max_nodes: 2_000_000,
            time_limit: Duration::from_secs(10),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Additionally require every line to balance positive and negative
    /// entries (integer symbol sets only; zero entries are then forbidden).
    pub shiftable: bool,
    /// Symmetry-reduced enumeration. Off is slower but explores the raw
    /// space; both must agree on whether a solution exists.
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { shiftable: false, symmetry: true }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(ArraySet),
    /// The whole space was enumerated and holds no solution.
    NoneExists,
    /// Node or time budget hit before the space was exhausted.
    BudgetExceeded,
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::NoneExists => "none-exists",
            SearchOutcome::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchCertificate {
    pub spec: MagicSpec,
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub elapsed: Duration,
}

pub fn search(spec: &MagicSpec, budget: &SearchBudget) -> SearchCertificate {
    search_with(spec, budget, &SearchOptions::default())
}

pub fn search_with(
    spec: &MagicSpec,
    budget: &SearchBudget,
    opts: &SearchOptions,
) -> SearchCertificate {
    let start = Instant::now();
    let done = |outcome: SearchOutcome, nodes: u64| SearchCertificate {
        spec: spec.clone(),
        outcome,
        nodes,
        elapsed: start.elapsed(),
    };

    // A structurally inconsistent spec has no solutions at all.
    if spec.validate().is_err() {
        return done(SearchOutcome::NoneExists, 0);
    }
    if spec.total_cells() > budget.max_cells {
        return done(SearchOutcome::BudgetExceeded, 0);
    }
    if let Some(order) = spec.group.order() {
        // the addition table is materialized for non-integer symbol sets
        if order > 4096 && !matches!(spec.omega, OmegaSpec::HalfClasses { .. }) {
            return done(SearchOutcome::BudgetExceeded, 0);
        }
    }
    let Some(dom) = Domain::build(spec, opts) else {
        return done(SearchOutcome::NoneExists, 0);
    };
    let targets = line_sum_candidates(spec, &dom);
    if targets.is_empty() {
        // no (x,y) satisfies the counting identities; enumerating an empty
        // candidate space is still complete enumeration
        return done(SearchOutcome::NoneExists, 0);
    }

    let mut engine = Engine {
        spec,
        budget,
        opts: *opts,
        dom,
        deadline: start + budget.time_limit,
        nodes: 0,
        slot_used: vec![false; spec.total_cells()],
        row_part: vec![0; spec.rows],
        col_part: vec![0; spec.cols],
        row_pos: vec![0; spec.rows],
        row_neg: vec![0; spec.rows],
        col_pos: vec![0; spec.cols],
        col_neg: vec![0; spec.cols],
        anchors: Vec::new(),
        row0_min: Vec::new(),
        trail: Vec::new(),
        target_x: 0,
        target_y: 0,
        solution: None,
    };

    for (x, y) in targets {
        engine.target_x = x;
        engine.target_y = y;
        match engine.solve_array(0) {
            Flow::Found => {
                let set = engine.take_solution();
                return done(SearchOutcome::Found(set), engine.nodes);
            }
            Flow::Budget => return done(SearchOutcome::BudgetExceeded, engine.nodes),
            Flow::Exhausted => {}
        }
    }
    done(SearchOutcome::NoneExists, engine.nodes)
}

/// Packed-value arithmetic for the three symbol universes. Values are i64:
/// the integer itself, an element index into the group table, or a residue
/// mod the half-class modulus.
enum Domain {
    Int {
        values: Vec<i64>,
        by_value: HashMap<i64, usize>,
    },
    Table {
        elems: Vec<GroupElement>,       // candidates = the symbol set
        add: Vec<u32>,                  // full-group addition on element ids
        size: usize,
        cand_of_id: Vec<Option<usize>>, // group element id -> candidate index
        id_of_cand: Vec<usize>,
    },
    Half {
        modulus: u64,
    },
}

impl Domain {
    /// `None` means the symbol set itself admits no solution (it cannot be
    /// materialized for this group, or a forbidden zero entry is present).
    fn build(spec: &MagicSpec, opts: &SearchOptions) -> Option<Domain> {
        match &spec.omega {
            OmegaSpec::HalfClasses { modulus } => Some(Domain::Half { modulus: *modulus }),
            omega => {
                let symbols = omega.materialize(&spec.group).ok()??;
                if spec.group.is_integers() {
                    let values: Vec<i64> = symbols.iter().map(|e| e.residues()[0]).collect();
                    if opts.shiftable && values.contains(&0) {
                        // a zero entry can never satisfy the sign balance, yet
                        // coverage would require placing it: no solutions
                        return None;
                    }
                    let by_value = values.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                    Some(Domain::Int { values, by_value })
                } else {
                    let all = spec.group.elements().ok()?;
                    let size = all.len();
                    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
                    for (i, e) in all.iter().enumerate() {
                        index.insert(e.residues().to_vec(), i);
                    }
                    let mut add = vec![0u32; size * size];
                    for (i, a) in all.iter().enumerate() {
                        for (j, b) in all.iter().enumerate() {
                            let s = a.add(b).unwrap();
                            add[i * size + j] = index[s.residues()] as u32;
                        }
                    }
                    let mut cand_of_id = vec![None; size];
                    let mut id_of_cand = Vec::with_capacity(symbols.len());
                    for (c, e) in symbols.iter().enumerate() {
                        let id = index[e.residues()];
                        cand_of_id[id] = Some(c);
                        id_of_cand.push(id);
                    }
                    Some(Domain::Table { elems: symbols, add, size, cand_of_id, id_of_cand })
                }
            }
        }
    }

    fn cand_count(&self) -> usize {
        match self {
            Domain::Int { values, .. } => values.len(),
            Domain::Table { elems, .. } => elems.len(),
            Domain::Half { modulus } => (*modulus - 1) as usize,
        }
    }

    fn value(&self, cand: usize) -> i64 {
        match self {
            Domain::Int { values, .. } => values[cand],
            Domain::Table { id_of_cand, .. } => id_of_cand[cand] as i64,
            Domain::Half { .. } => cand as i64 + 1,
        }
    }

    /// The resource a candidate consumes: itself, or its sign class.
    fn slot(&self, cand: usize) -> usize {
        match self {
            Domain::Int { .. } | Domain::Table { .. } => cand,
            Domain::Half { modulus } => {
                let r = cand as u64 + 1;
                (r.min(*modulus - r) - 1) as usize
            }
        }
    }

    fn add(&self, a: i64, b: i64) -> i64 {
        match self {
            Domain::Int { .. } => a + b,
            Domain::Table { add, size, .. } => add[a as usize * size + b as usize] as i64,
            Domain::Half { modulus } => (a + b).rem_euclid(*modulus as i64),
        }
    }

    fn sub(&self, a: i64, b: i64) -> i64 {
        match self {
            Domain::Int { .. } => a - b,
            Domain::Table { .. } => self.add(a, self.neg(b)),
            Domain::Half { modulus } => (a - b).rem_euclid(*modulus as i64),
        }
    }

    fn neg(&self, a: i64) -> i64 {
        match self {
            Domain::Int { .. } => -a,
            Domain::Table { add, size, .. } => {
                // scan the addition row for the id summing to zero (id 0 is
                // the group zero: element enumeration starts at the origin)
                let row = a as usize * size;
                (0..*size).find(|&j| add[row + j] == 0).expect("inverse exists") as i64
            }
            Domain::Half { modulus } => (-a).rem_euclid(*modulus as i64),
        }
    }

    fn find_by_value(&self, v: i64) -> Option<usize> {
        match self {
            Domain::Int { by_value, .. } => by_value.get(&v).copied(),
            Domain::Table { cand_of_id, .. } => cand_of_id.get(v as usize).copied().flatten(),
            Domain::Half { modulus } => {
                if v >= 1 && (v as u64) < *modulus {
                    Some(v as usize - 1)
                } else {
                    None
                }
            }
        }
    }

    fn element(&self, spec: &MagicSpec, cand: usize) -> GroupElement {
        match self {
            Domain::Int { values, .. } => spec.group.scalar(values[cand]).unwrap(),
            Domain::Table { elems, .. } => elems[cand].clone(),
            Domain::Half { .. } => spec.group.scalar(cand as i64 + 1).unwrap(),
        }
    }
}

/// All (x,y) line-sum targets consistent with the symbol total. Zero-sum
/// specs admit only (0,0), and only when the total vanishes.
fn line_sum_candidates(spec: &MagicSpec, dom: &Domain) -> Vec<(i64, i64)> {
    match dom {
        Domain::Half { .. } => vec![(0, 0)], // sign choice is free: no total constraint
        Domain::Int { values, .. } => {
            let total: i64 = values.iter().sum();
            if spec.zero_sum {
                return if total == 0 { vec![(0, 0)] } else { vec![] };
            }
            let cm = (spec.arrays * spec.rows) as i64;
            let cn = (spec.arrays * spec.cols) as i64;
            if total % cm != 0 || total % cn != 0 {
                return vec![];
            }
            vec![(total / cm, total / cn)]
        }
        Domain::Table { elems, size, add, .. } => {
            let all = spec.group.elements().unwrap();
            let total = elems
                .iter()
                .fold(spec.group.zero(), |acc, e| acc.add(e).unwrap());
            let total_id = all.iter().position(|x| *x == total).unwrap() as i64;
            if spec.zero_sum {
                return if total_id == 0 { vec![(0, 0)] } else { vec![] };
            }
            let times = |id: i64, t: usize| -> i64 {
                let mut acc = 0i64;
                for _ in 0..t {
                    acc = add[acc as usize * size + id as usize] as i64;
                }
                acc
            };
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for id in 0..*size as i64 {
                if times(id, spec.arrays * spec.rows) == total_id {
                    xs.push(id);
                }
                if times(id, spec.arrays * spec.cols) == total_id {
                    ys.push(id);
                }
            }
            let mut out = Vec::new();
            for &x in &xs {
                for &y in &ys {
                    if times(x, spec.rows) == times(y, spec.cols) {
                        out.push((x, y));
                    }
                }
            }
            out
        }
    }
}

enum Flow {
    Found,
    Exhausted,
    Budget,
}

struct Pattern {
    cells: Vec<(usize, usize)>,
    row_after: Vec<usize>,
    col_after: Vec<usize>,
}

fn finish_pattern(cells: Vec<(usize, usize)>, rows: usize, cols: usize) -> Pattern {
    let mut row_left = vec![0usize; rows];
    let mut col_left = vec![0usize; cols];
    for &(i, j) in &cells {
        row_left[i] += 1;
        col_left[j] += 1;
    }
    let mut row_after = Vec::with_capacity(cells.len());
    let mut col_after = Vec::with_capacity(cells.len());
    for &(i, j) in &cells {
        row_left[i] -= 1;
        col_left[j] -= 1;
        row_after.push(row_left[i]);
        col_after.push(col_left[j]);
    }
    Pattern { cells, row_after, col_after }
}

struct Engine<'a> {
    spec: &'a MagicSpec,
    budget: &'a SearchBudget,
    opts: SearchOptions,
    dom: Domain,
    deadline: Instant,
    nodes: u64,
    slot_used: Vec<bool>,
    row_part: Vec<i64>,
    col_part: Vec<i64>,
    row_pos: Vec<usize>,
    row_neg: Vec<usize>,
    col_pos: Vec<usize>,
    col_neg: Vec<usize>,
    /// candidate anchoring each completed array (symmetry ordering)
    anchors: Vec<usize>,
    /// minimum candidate in row 0 of each array (diagonal symmetry)
    row0_min: Vec<usize>,
    /// (array, row, col, candidate) assignment stack
    trail: Vec<(usize, usize, usize, usize)>,
    target_x: i64,
    target_y: i64,
    solution: Option<ArraySet>,
}

impl<'a> Engine<'a> {
    fn take_solution(&mut self) -> ArraySet {
        self.solution.take().expect("solution recorded on Found")
    }

    fn record_solution(&mut self) {
        let mut arrays = Vec::with_capacity(self.spec.arrays);
        for l in 0..self.spec.arrays {
            let mut a = Pfa::empty(self.spec.group.clone(), self.spec.rows, self.spec.cols);
            for &(al, i, j, cand) in &self.trail {
                if al == l {
                    a.set(i, j, self.dom.element(self.spec, cand)).unwrap();
                }
            }
            arrays.push(a);
        }
        self.solution = Some(ArraySet::new(arrays).unwrap());
    }

    fn solve_array(&mut self, l: usize) -> Flow {
        if l == self.spec.arrays {
            self.record_solution();
            return Flow::Found;
        }
        if self.spec.diagonal {
            let n = self.spec.cols;
            let band = self.spec.col_fill;
            // column rotation lets the band start at diagonal 0
            let cells: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| {
                    let mut cols: Vec<usize> = (0..band).map(|d| (i + d) % n).collect();
                    cols.sort_unstable();
                    cols.into_iter().map(move |j| (i, j))
                })
                .collect();
            let pattern = finish_pattern(cells, self.spec.rows, self.spec.cols);
            return self.assign(l, &pattern, 0);
        }
        let mut col_counts = vec![0usize; self.spec.cols];
        let mut rows_sets: Vec<Vec<usize>> = vec![Vec::new(); self.spec.rows];
        self.gen_pattern(l, 0, 0, 0, &mut col_counts, &mut rows_sets)
    }

    /// Stream every admissible fill pattern for array `l`, row by row.
    fn gen_pattern(
        &mut self,
        l: usize,
        row: usize,
        col: usize,
        taken: usize,
        col_counts: &mut Vec<usize>,
        rows_sets: &mut Vec<Vec<usize>>,
    ) -> Flow {
        if row == self.spec.rows {
            let cells: Vec<(usize, usize)> = rows_sets
                .iter()
                .enumerate()
                .flat_map(|(i, set)| set.iter().map(move |&j| (i, j)))
                .collect();
            let pattern = finish_pattern(cells, self.spec.rows, self.spec.cols);
            return self.assign(l, &pattern, 0);
        }
        let need = self.spec.row_fill - taken;
        if self.spec.cols - col < need {
            return Flow::Exhausted;
        }
        if col == self.spec.cols {
            return self.gen_pattern(l, row + 1, 0, 0, col_counts, rows_sets);
        }
        let remaining_rows = self.spec.rows - row - 1;
        let deficit = self.spec.col_fill - col_counts[col];
        let must_take = deficit > remaining_rows
            || (self.opts.symmetry && row == 0 && col == 0); // anchor cell
        let can_take = need > 0 && col_counts[col] < self.spec.col_fill;
        if can_take {
            col_counts[col] += 1;
            rows_sets[row].push(col);
            let flow = self.gen_pattern(l, row, col + 1, taken + 1, col_counts, rows_sets);
            rows_sets[row].pop();
            col_counts[col] -= 1;
            if !matches!(flow, Flow::Exhausted) {
                return flow;
            }
        }
        if !must_take {
            return self.gen_pattern(l, row, col + 1, taken, col_counts, rows_sets);
        }
        Flow::Exhausted
    }

    fn budget_tripped(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return true;
        }
        if self.nodes % 4096 == 0 && Instant::now() > self.deadline {
            return true;
        }
        false
    }

    /// Smallest candidate admissible at pattern position `t` of array `l`
    /// under the symmetry ordering.
    fn min_candidate(&self, l: usize, t: usize, band: usize) -> usize {
        if !self.opts.symmetry {
            return 0;
        }
        if self.spec.diagonal {
            // every entry exceeds the previous array's anchor; entries below
            // row 0 also exceed this array's own row-0 minimum
            let mut min = if l == 0 { 0 } else { self.anchors[l - 1] + 1 };
            if t >= band {
                min = min.max(self.row0_min[l] + 1);
            }
            min
        } else if t == 0 {
            if l == 0 {
                0
            } else {
                self.anchors[l - 1] + 1
            }
        } else {
            self.anchors[l] + 1
        }
    }

    fn assign(&mut self, l: usize, pattern: &Pattern, t: usize) -> Flow {
        if t == pattern.cells.len() {
            // line partials are per array: stash the completed array's and
            // hand the next array a clean slate, restoring on backtrack
            let saved = (
                std::mem::replace(&mut self.row_part, vec![0; self.spec.rows]),
                std::mem::replace(&mut self.col_part, vec![0; self.spec.cols]),
                std::mem::replace(&mut self.row_pos, vec![0; self.spec.rows]),
                std::mem::replace(&mut self.row_neg, vec![0; self.spec.rows]),
                std::mem::replace(&mut self.col_pos, vec![0; self.spec.cols]),
                std::mem::replace(&mut self.col_neg, vec![0; self.spec.cols]),
            );
            let flow = self.solve_array(l + 1);
            (
                self.row_part,
                self.col_part,
                self.row_pos,
                self.row_neg,
                self.col_pos,
                self.col_neg,
            ) = saved;
            return flow;
        }
        let (i, j) = pattern.cells[t];
        let band = self.spec.col_fill;
        let row_forced = pattern.row_after[t] == 0;
        let col_forced = pattern.col_after[t] == 0;
        let min_id = self.min_candidate(l, t, band);

        let forced = if row_forced || col_forced {
            let v = if row_forced {
                self.dom.sub(self.target_x, self.row_part[i])
            } else {
                self.dom.sub(self.target_y, self.col_part[j])
            };
            if row_forced && col_forced && v != self.dom.sub(self.target_y, self.col_part[j]) {
                return Flow::Exhausted;
            }
            match self.dom.find_by_value(v) {
                Some(c) => Some(c),
                None => return Flow::Exhausted,
            }
        } else {
            None
        };

        let (lo, hi) = match forced {
            Some(c) => (c, c + 1),
            None => (min_id, self.dom.cand_count()),
        };
        for cand in lo..hi {
            if cand < min_id {
                break;
            }
            if self.budget_tripped() {
                return Flow::Budget;
            }
            if self.slot_used[self.dom.slot(cand)] {
                continue;
            }
            let v = self.dom.value(cand);
            if self.opts.shiftable && !self.shift_ok(i, j, v) {
                continue;
            }
            if row_forced && self.dom.add(self.row_part[i], v) != self.target_x {
                continue;
            }
            if col_forced && self.dom.add(self.col_part[j], v) != self.target_y {
                continue;
            }
            if matches!(self.dom, Domain::Int { .. })
                && !self.int_window_ok(i, j, v, pattern.row_after[t], pattern.col_after[t])
            {
                continue;
            }
            self.push(l, i, j, cand, v, t, band);
            let flow = self.assign(l, pattern, t + 1);
            self.pop(l, i, j, cand, v, t, band);
            match flow {
                Flow::Exhausted => {}
                other => return other,
            }
        }
        Flow::Exhausted
    }

    fn push(&mut self, l: usize, i: usize, j: usize, cand: usize, v: i64, t: usize, band: usize) {
        self.slot_used[self.dom.slot(cand)] = true;
        self.row_part[i] = self.dom.add(self.row_part[i], v);
        self.col_part[j] = self.dom.add(self.col_part[j], v);
        if self.opts.shiftable {
            if v > 0 {
                self.row_pos[i] += 1;
                self.col_pos[j] += 1;
            } else {
                self.row_neg[i] += 1;
                self.col_neg[j] += 1;
            }
        }
        self.trail.push((l, i, j, cand));
        if self.opts.symmetry {
            if self.spec.diagonal {
                if t == 0 {
                    self.row0_min.push(cand);
                } else if t < band {
                    self.row0_min[l] = self.row0_min[l].min(cand);
                }
                if t + 1 == band {
                    // row 0 complete: its minimum anchors the array
                    self.anchors.push(self.row0_min[l]);
                }
            } else if t == 0 {
                self.anchors.push(cand);
            }
        }
    }

    fn pop(&mut self, l: usize, i: usize, j: usize, cand: usize, v: i64, t: usize, band: usize) {
        self.slot_used[self.dom.slot(cand)] = false;
        self.row_part[i] = self.dom.sub(self.row_part[i], v);
        self.col_part[j] = self.dom.sub(self.col_part[j], v);
        if self.opts.shiftable {
            if v > 0 {
                self.row_pos[i] -= 1;
                self.col_pos[j] -= 1;
            } else {
                self.row_neg[i] -= 1;
                self.col_neg[j] -= 1;
            }
        }
        self.trail.pop();
        if self.opts.symmetry {
            if self.spec.diagonal {
                if t + 1 == band {
                    self.anchors.pop();
                }
                if t == 0 {
                    self.row0_min.pop();
                } else if t < band {
                    // recompute the running row-0 minimum from the trail
                    let m = self
                        .trail
                        .iter()
                        .rev()
                        .take_while(|&&(al, _, _, _)| al == l)
                        .filter(|&&(_, ri, _, _)| ri == 0)
                        .map(|&(_, _, _, c)| c)
                        .min()
                        .unwrap_or(usize::MAX);
                    self.row0_min[l] = m;
                }
            } else if t == 0 {
                self.anchors.pop();
            }
        }
    }

    fn shift_ok(&self, i: usize, j: usize, v: i64) -> bool {
        if v == 0 || self.spec.row_fill % 2 != 0 || self.spec.col_fill % 2 != 0 {
            return false;
        }
        if v > 0 {
            self.row_pos[i] < self.spec.row_fill / 2 && self.col_pos[j] < self.spec.col_fill / 2
        } else {
            self.row_neg[i] < self.spec.row_fill / 2 && self.col_neg[j] < self.spec.col_fill / 2
        }
    }

    /// Partial-sum window over the integers: the r cells remaining in the
    /// line must reach the target using r distinct unused values.
    fn int_window_ok(
        &self,
        i: usize,
        j: usize,
        v: i64,
        row_after: usize,
        col_after: usize,
    ) -> bool {
        let Domain::Int { values, .. } = &self.dom else {
            return true;
        };
        let check = |need: i64, r: usize| -> bool {
            if r == 0 {
                return need == 0;
            }
            let mut lo = 0i64;
            let mut cnt = 0;
            for (c, &w) in values.iter().enumerate() {
                if !self.slot_used[c] && w != v {
                    lo += w;
                    cnt += 1;
                    if cnt == r {
                        break;
                    }
                }
            }
            if cnt < r {
                return false;
            }
            let mut hi = 0i64;
            cnt = 0;
            for (c, &w) in values.iter().enumerate().rev() {
                if !self.slot_used[c] && w != v {
                    hi += w;
                    cnt += 1;
                    if cnt == r {
                        break;
                    }
                }
            }
            lo <= need && need <= hi
        };
        check(self.target_x - self.row_part[i] - v, row_after)
            && check(self.target_y - self.col_part[j] - v, col_after)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::verify::verify;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn finds_integer_rectangle_set() {
        let spec = MagicSpec::new(
            Group::integers(),
            2,
            4,
            4,
            2,
            1,
            OmegaSpec::IntegerInterval { upper: 8 },
        );
        let cert = search(&spec, &budget());
        let SearchOutcome::Found(set) = &cert.outcome else {
            panic!("expected a solution, got {}", cert.outcome.label());
        };
        assert!(verify(set, &spec).pass());
    }

    #[test]
    fn finds_two_array_partition() {
        // each array's line sums are tracked independently of the other's
        let spec = MagicSpec::new(
            Group::integers(),
            2,
            4,
            4,
            2,
            2,
            OmegaSpec::IntegerInterval { upper: 16 },
        );
        let cert = search(&spec, &budget());
        let SearchOutcome::Found(set) = &cert.outcome else {
            panic!("expected a solution, got {}", cert.outcome.label());
        };
        assert_eq!(set.arrays().len(), 2);
        assert!(verify(set, &spec).pass());
    }

    #[test]
    fn two_by_two_square_has_no_integer_solution() {
        let spec = MagicSpec::new(
            Group::integers(),
            2,
            2,
            2,
            2,
            1,
            OmegaSpec::IntegerInterval { upper: 4 },
        );
        let cert = search(&spec, &budget());
        assert!(matches!(cert.outcome, SearchOutcome::NoneExists));
    }

    #[test]
    fn parity_mismatch_rejected_without_exploring() {
        // interval total 78 is not divisible by the 4 columns
        let spec = MagicSpec::new(
            Group::integers(),
            3,
            4,
            4,
            3,
            1,
            OmegaSpec::IntegerInterval { upper: 12 },
        );
        let cert = search(&spec, &budget());
        assert!(matches!(cert.outcome, SearchOutcome::NoneExists));
        assert_eq!(cert.nodes, 0);
    }

    #[test]
    fn finds_full_group_square() {
        let spec = MagicSpec::new(
            Group::cyclic(4).unwrap(),
            2,
            2,
            2,
            2,
            1,
            OmegaSpec::FullGroup,
        );
        let cert = search(&spec, &budget());
        let SearchOutcome::Found(set) = &cert.outcome else {
            panic!("expected a solution, got {}", cert.outcome.label());
        };
        assert!(verify(set, &spec).pass());
    }

    #[test]
    fn zero_sum_over_even_cyclic_is_instantly_empty() {
        // the elements of Z4 sum to the involution 2, not to 0
        let spec = MagicSpec::new(
            Group::cyclic(4).unwrap(),
            2,
            2,
            2,
            2,
            1,
            OmegaSpec::FullGroup,
        )
        .zero_sum();
        let cert = search(&spec, &budget());
        assert!(matches!(cert.outcome, SearchOutcome::NoneExists));
        assert_eq!(cert.nodes, 0);
    }

    #[test]
    fn shiftable_signed_rows() {
        let spec = MagicSpec::new(
            Group::integers(),
            2,
            4,
            4,
            2,
            1,
            OmegaSpec::SignedRange { half: 4, include_zero: false },
        )
        .zero_sum();
        let opts = SearchOptions { shiftable: true, symmetry: true };
        let cert = search_with(&spec, &budget(), &opts);
        let SearchOutcome::Found(set) = &cert.outcome else {
            panic!("expected a solution, got {}", cert.outcome.label());
        };
        assert!(verify(set, &spec).pass());
        let a = &set.arrays()[0];
        for i in 0..2 {
            let pos = (0..4)
                .filter(|&col| a.get(i, col).unwrap().residues()[0] > 0)
                .count();
            assert_eq!(pos, 2);
        }
    }

    #[test]
    fn half_class_search_finds_small_instance() {
        let spec = MagicSpec {
            group: Group::cyclic(19).unwrap(),
            rows: 3,
            cols: 3,
            row_fill: 3,
            col_fill: 3,
            arrays: 1,
            omega: OmegaSpec::HalfClasses { modulus: 19 },
            zero_sum: true,
            diagonal: false,
        };
        let cert = search(&spec, &budget());
        let SearchOutcome::Found(set) = &cert.outcome else {
            panic!("expected a solution, got {}", cert.outcome.label());
        };
        assert!(verify(set, &spec).pass());
    }

    #[test]
    fn diagonal_mode_finds_order_three_square() {
        let spec = MagicSpec::new(
            Group::integers(),
            3,
            3,
            3,
            3,
            1,
            OmegaSpec::IntegerInterval { upper: 9 },
        )
        .diagonal();
        let cert = search(&spec, &budget());
        let SearchOutcome::Found(set) = &cert.outcome else {
            panic!("expected a solution, got {}", cert.outcome.label());
        };
        assert!(verify(set, &spec).pass());
    }

    #[test]
    fn budget_trips_cleanly() {
        let spec = MagicSpec::new(
            Group::integers(),
            4,
            4,
            4,
            4,
            1,
            OmegaSpec::IntegerInterval { upper: 16 },
        );
        let tiny = SearchBudget {
            max_cells: 64,
            max_nodes: 3,
            time_limit: Duration::from_secs(5),
        };
        let cert = search(&spec, &tiny);
        assert!(matches!(cert.outcome, SearchOutcome::BudgetExceeded));
    }

    #[test]
    fn symmetry_on_off_agree() {
        let cases = [
            (2usize, 2usize, 2usize, 2usize, 1usize, 4i64),
            (2, 4, 4, 2, 1, 8),
            (3, 3, 2, 2, 1, 6),
            (2, 3, 3, 2, 1, 6),
        ];
        for (m, n, s, k, c, upper) in cases {
            let spec = MagicSpec::new(
                Group::integers(),
                m,
                n,
                s,
                k,
                c,
                OmegaSpec::IntegerInterval { upper },
            );
            let on = search_with(
                &spec,
                &budget(),
                &SearchOptions { shiftable: false, symmetry: true },
            );
            let off = search_with(
                &spec,
                &budget(),
                &SearchOptions { shiftable: false, symmetry: false },
            );
            assert_eq!(
                matches!(on.outcome, SearchOutcome::Found(_)),
                matches!(off.outcome, SearchOutcome::Found(_)),
                "disagreement on ({m},{n},{s},{k},{c})"
            );
        }
    }
}
