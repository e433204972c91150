//! Reusable arrays the assembly routines consume: tight integer rectangle
//! sets, diagonal square sets, sign-symmetric arrays (plain and shiftable)
//! and half-class row sets. Requests go through one caching facade that
//! consults a registry of pre-verified fixtures first, then closed-form
//! fillers, and finally the exhaustive search.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use thiserror::Error;

use crate::array::{ArraySet, Pfa};
use crate::group::{Group, GroupElement};
use crate::search::{search_with, SearchBudget, SearchOptions, SearchOutcome};
use crate::serial;
use crate::verify::{verify, MagicSpec, OmegaSpec};

/// Why an ingredient request could not be served.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngredientError {
    /// The requested object provably does not exist.
    #[error("{0}")]
    Infeasible(String),
    /// Existence is open, or the object is too large for the current budget.
    #[error("{0}")]
    Unavailable(String),
}

/// Spec implied by a registry key, or why the key is malformed.
///
/// Key grammar: `tight:RxCxN` (rectangle set, N arrays of R rows and C
/// columns, every cell filled), `diag:SIDExBANDxN` (square diagonal set),
/// `shiftable:MxNxSxK` / `signed:MxNxSxK` (zero-sum arrays on a symmetric
/// integer range; shiftable additionally balances signs on every line) and
/// `half:RxC` (one full rectangle using one element from each pair {x,-x}).
pub fn spec_for_key(key: &str) -> Result<MagicSpec, String> {
    let (kind, rest) = key
        .split_once(':')
        .ok_or_else(|| format!("registry key '{key}' has no kind prefix"))?;
    let dims: Vec<usize> = rest
        .split('x')
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| format!("registry key '{key}': bad dimension '{p}'"))
        })
        .collect::<Result<_, _>>()?;
    let spec = match (kind, dims.as_slice()) {
        ("tight", &[r, c, n]) => tight_spec(r, c, n),
        ("diag", &[s, b, n]) => diag_spec(s, b, n),
        ("shiftable", &[m, n, s, k]) => {
            if (n * k) % 2 != 0 {
                return Err(format!("registry key '{key}': odd cell count cannot balance signs"));
            }
            signed_spec(m, n, s, k)
        }
        ("signed", &[m, n, s, k]) => signed_spec(m, n, s, k),
        ("half", &[r, c]) => half_spec(r, c),
        _ => return Err(format!("registry key '{key}' not recognised")),
    };
    spec.validate()
        .map_err(|e| format!("registry key '{key}': {e}"))?;
    Ok(spec)
}

fn tight_spec(rows: usize, cols: usize, count: usize) -> MagicSpec {
    MagicSpec::new(
        Group::integers(),
        rows,
        cols,
        cols,
        rows,
        count,
        OmegaSpec::IntegerInterval { upper: (rows * cols * count) as i64 },
    )
}

fn diag_spec(side: usize, band: usize, count: usize) -> MagicSpec {
    MagicSpec::new(
        Group::integers(),
        side,
        side,
        band,
        band,
        count,
        OmegaSpec::IntegerInterval { upper: (side * band * count) as i64 },
    )
    .diagonal()
}

fn signed_spec(m: usize, n: usize, s: usize, k: usize) -> MagicSpec {
    let total = n * k;
    let omega = if total % 2 == 0 {
        OmegaSpec::SignedRange { half: (total / 2) as i64, include_zero: false }
    } else {
        OmegaSpec::SignedRange { half: ((total - 1) / 2) as i64, include_zero: true }
    };
    MagicSpec::new(Group::integers(), m, n, s, k, 1, omega).zero_sum()
}

fn half_spec(rows: usize, cols: usize) -> MagicSpec {
    let modulus = (2 * rows * cols + 1) as u64;
    MagicSpec::new(
        Group::cyclic(modulus).expect("modulus >= 3"),
        rows,
        cols,
        cols,
        rows,
        1,
        OmegaSpec::HalfClasses { modulus },
    )
    .zero_sum()
}

/// Keyed store of pre-verified array sets.
///
/// Every insert re-verifies the set against the spec implied by its key (see
/// [`spec_for_key`]), so a registry can only ever hand out correct data. The
/// built-in registry carries one hand-checked tight 3x5 rectangle triple that
/// seeds several cyclic constructions.
pub struct Registry {
    entries: BTreeMap<String, ArraySet>,
}

impl Registry {
    pub fn empty() -> Registry {
        Registry { entries: BTreeMap::new() }
    }

    pub fn builtin() -> Registry {
        let mut reg = Registry::empty();
        reg.insert("tight:3x5x3", builtin_tight_3x5x3())
            .expect("built-in fixture verifies");
        reg
    }

    pub fn insert(&mut self, key: &str, set: ArraySet) -> Result<(), String> {
        let spec = spec_for_key(key)?;
        let report = verify(&set, &spec);
        if !report.pass() {
            return Err(format!("registry entry '{key}' fails verification: {}", report.summary()));
        }
        if key.starts_with("shiftable:") && !set.arrays().iter().all(is_sign_balanced) {
            return Err(format!("registry entry '{key}' does not balance signs on every line"));
        }
        self.entries.insert(key.to_string(), set);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&ArraySet> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merge a JSON object mapping keys to serialized array sets. Returns how
    /// many entries were added; any malformed or non-verifying entry aborts.
    pub fn merge_json(&mut self, text: &str) -> Result<usize, String> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| format!("registry file is not valid JSON: {e}"))?;
        let map = value
            .as_object()
            .ok_or_else(|| "registry file must be a JSON object keyed by ingredient".to_string())?;
        let mut added = 0;
        for (key, entry) in map {
            let set = serial::set_from_json(&entry.to_string())
                .map_err(|e| format!("registry entry '{key}': {e}"))?;
            self.insert(key, set)?;
            added += 1;
        }
        Ok(added)
    }
}

fn builtin_tight_3x5x3() -> ArraySet {
    let grids: [[[i64; 5]; 3]; 3] = [
        [[1, 35, 9, 31, 39], [24, 28, 20, 27, 16], [44, 6, 40, 11, 14]],
        [[2, 36, 7, 32, 38], [45, 4, 41, 12, 13], [22, 29, 21, 25, 18]],
        [[3, 34, 8, 33, 37], [43, 5, 42, 10, 15], [23, 30, 19, 26, 17]],
    ];
    let arrays = grids
        .iter()
        .map(|grid| {
            let rows: Vec<Vec<Option<i64>>> =
                grid.iter().map(|row| row.iter().map(|&v| Some(v)).collect()).collect();
            Pfa::from_int_rows(&rows).expect("static fixture")
        })
        .collect();
    ArraySet::new(arrays).expect("static fixture")
}

/// True when every row and column of an integer array carries as many
/// positive as negative entries and no zero. Shifting all positives by one
/// offset and all negatives by another then moves every line sum by the same
/// amount, which is what the layered cyclic constructions exploit.
pub fn is_sign_balanced(array: &Pfa) -> bool {
    if !array.group().is_integers() {
        return false;
    }
    let mut rows = vec![(0u32, 0u32); array.rows()];
    let mut cols = vec![(0u32, 0u32); array.cols()];
    for (r, c, e) in array.filled() {
        let v = e.residues()[0];
        if v == 0 {
            return false;
        }
        if v > 0 {
            rows[r].0 += 1;
            cols[c].0 += 1;
        } else {
            rows[r].1 += 1;
            cols[c].1 += 1;
        }
    }
    rows.iter().all(|&(p, n)| p == n) && cols.iter().all(|&(p, n)| p == n)
}

fn int(v: i64) -> GroupElement {
    Group::integers().scalar(v).unwrap()
}

/// Full-band diagonal square set: `side` odd, `count` dividing `side`. Cell
/// (i, i+q mod side) of array t holds
///
/// ```text
///   ((q+2i) mod side) * side * count + ((q+3i) mod side) * count + (t+q) mod count + 1
/// ```
///
/// a bijection onto [1, side^2 * count] because (q+2i, q+3i) determines
/// (q, i) when side is odd. Along any row or column the three mixed residues
/// each sweep their full range, so all line sums equal side*(side^2*count+1)/2.
fn full_band_square(side: usize, count: usize) -> ArraySet {
    debug_assert!(side % 2 == 1 && count >= 1 && side % count == 0);
    let g = Group::integers();
    let n = side as i64;
    let c = count as i64;
    let mut arrays = Vec::with_capacity(count);
    for t in 0..c {
        let mut a = Pfa::empty(g.clone(), side, side);
        for i in 0..n {
            for q in 0..n {
                let value = ((q + 2 * i) % n) * n * c + ((q + 3 * i) % n) * c + (t + q) % c + 1;
                a.set(i as usize, ((i + q) % n) as usize, int(value)).expect("distinct cells");
            }
        }
        arrays.push(a);
    }
    ArraySet::new(arrays).expect("side >= 2")
}

/// Sign-balanced array for doubly even fills: both fill counts divisible by
/// four and both dimensions even. The grid is tiled with 2x2 blocks
///
/// ```text
///    a      -(a+1)
///  -(a+2)    a+3
/// ```
///
/// (row sums -1/+1, column sums -2/+2) and their negatives. Block-row r
/// places its t-th block in block-column (r*s/2 + t) mod (n/2); consecutive
/// windows tile the columns evenly. An Euler-circuit two-colouring of that
/// block layout puts equally many blocks of each orientation on every block
/// line, so the +-1 and +-2 sums cancel, and each colour consumes the
/// magnitudes 4t+1..4t+4 of opposite global sign, covering [1, nk/2] twice.
fn doubly_even_shiftable(m: usize, n: usize, s: usize, k: usize) -> ArraySet {
    debug_assert!(s % 4 == 0 && k % 4 == 0 && m % 2 == 0 && n % 2 == 0 && m * s == n * k);
    let (bm, bn, bs) = (m / 2, n / 2, s / 2);
    let mut layout = Vec::with_capacity(bm * bs);
    for r in 0..bm {
        for t in 0..bs {
            layout.push((r, (r * bs + t) % bn));
        }
    }
    let colors = euler_two_color(bm, bn, &layout);
    let g = Group::integers();
    let mut array = Pfa::empty(g.clone(), m, n);
    let mut next = [0i64; 2];
    for (&(r, c), &color) in layout.iter().zip(&colors) {
        let base = 4 * next[color] + 1;
        next[color] += 1;
        let sign = if color == 0 { 1 } else { -1 };
        let values = [base, -(base + 1), -(base + 2), base + 3];
        let cells = [(2 * r, 2 * c), (2 * r, 2 * c + 1), (2 * r + 1, 2 * c), (2 * r + 1, 2 * c + 1)];
        for (&v, (ri, ci)) in values.iter().zip(cells) {
            array.set(ri, ci, int(sign * v)).expect("blocks land on distinct cells");
        }
    }
    ArraySet::singleton(array)
}

/// Colour the edges of a bipartite multigraph (rows 0..rows, columns as
/// (row, col) pairs in `edges`) so that every vertex carries equally many
/// edges of each colour. All degrees must be even; walking an Euler circuit
/// of each component and alternating colours does the job because the two
/// edges of every visit through a vertex get opposite colours and each
/// circuit has even length.
fn euler_two_color(rows: usize, cols: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let vertex_count = rows + cols;
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (id, &(r, c)) in edges.iter().enumerate() {
        adjacent[r].push(id);
        adjacent[rows + c].push(id);
    }
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; vertex_count];
    let mut colors = vec![0usize; edges.len()];
    for start in 0..vertex_count {
        if adjacent[start].iter().all(|&e| used[e]) {
            continue;
        }
        let mut trail = Vec::new();
        let mut stack = vec![(start, usize::MAX)];
        while let Some(&(v, _)) = stack.last() {
            while cursor[v] < adjacent[v].len() && used[adjacent[v][cursor[v]]] {
                cursor[v] += 1;
            }
            if cursor[v] == adjacent[v].len() {
                let (_, via) = stack.pop().expect("stack non-empty");
                if via != usize::MAX {
                    trail.push(via);
                }
            } else {
                let e = adjacent[v][cursor[v]];
                used[e] = true;
                let (r, c) = edges[e];
                let w = if v == r { rows + c } else { r };
                stack.push((w, e));
            }
        }
        for (i, &e) in trail.iter().enumerate() {
            colors[e] = i % 2;
        }
    }
    colors
}

/// Zero-sum two-row array with full rows over +-[1, n], for n = 0 or 3 mod 4:
/// the top row is 1, 2, -3 (odd case) followed by windows a, -(a+1), -(a+2),
/// a+3; the bottom row is its negation. For n = 0 mod 4 every line is also
/// sign-balanced.
fn two_row_signed(n: usize) -> Pfa {
    debug_assert!(n >= 3 && matches!(n % 4, 0 | 3));
    let mut top: Vec<i64> = Vec::with_capacity(n);
    if n % 4 == 3 {
        top.extend([1, 2, -3]);
    }
    let mut a = top.len() as i64 + 1;
    while top.len() < n {
        top.extend(crate::blocks::window_quad(a));
        a += 4;
    }
    let rows: Vec<Vec<Option<i64>>> = vec![
        top.iter().map(|&v| Some(v)).collect(),
        top.iter().map(|&v| Some(-v)).collect(),
    ];
    Pfa::from_int_rows(&rows).expect("shape is fixed")
}

/// How the assembly routines obtain their ingredients. Implementations must
/// only return arrays that verify against the spec implied by the request;
/// [`Oracle`] is the default implementation.
pub trait IngredientProvider {
    /// N arrays, every cell filled, jointly using [1, rows*cols*N], with
    /// constant row sums and constant column sums.
    fn tight_rectangle_set(&self, rows: usize, cols: usize, count: usize)
        -> Result<ArraySet, IngredientError>;

    /// N square arrays filled exactly on `band` cyclically consecutive
    /// diagonals, jointly using [1, side*band*N].
    fn diagonal_rectangle_set(&self, side: usize, band: usize, count: usize)
        -> Result<ArraySet, IngredientError>;

    /// One zero-sum array on +-[1, nk/2] whose rows and columns each balance
    /// positive against negative entries.
    fn shiftable_signed(&self, m: usize, n: usize, s: usize, k: usize)
        -> Result<ArraySet, IngredientError>;

    /// One zero-sum array on the symmetric integer range of nk values.
    fn signed_array(&self, m: usize, n: usize, s: usize, k: usize)
        -> Result<ArraySet, IngredientError>;

    /// One full rectangle over Z_{2*rows*cols+1} using exactly one element of
    /// each pair {x, -x}, all row and column sums zero.
    fn half_class_rows(&self, rows: usize, cols: usize) -> Result<ArraySet, IngredientError>;
}

/// Default ingredient source: registry fixtures first, then closed-form
/// fillers, then exhaustive search under a budget. Successes and failures are
/// both cached so repeated requests (and repeated budget misses) stay cheap.
pub struct Oracle {
    registry: Registry,
    budget: SearchBudget,
    cache: Mutex<HashMap<String, Result<ArraySet, IngredientError>>>,
}

impl Oracle {
    pub fn new(registry: Registry, budget: SearchBudget) -> Oracle {
        Oracle { registry, budget, cache: Mutex::new(HashMap::new()) }
    }

    pub fn with_defaults() -> Oracle {
        Oracle::new(Registry::builtin(), SearchBudget::default())
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    fn cached<F>(&self, key: String, build: F) -> Result<ArraySet, IngredientError>
    where
        F: FnOnce(&Oracle) -> Result<ArraySet, IngredientError>,
    {
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        // compute outside the lock: resolution may recurse into the oracle
        let result = build(self);
        self.cache.lock().unwrap().insert(key, result.clone());
        result
    }

    fn run_search(&self, spec: &MagicSpec, options: &SearchOptions, what: &str)
        -> Result<ArraySet, IngredientError>
    {
        let cert = search_with(spec, &self.budget, options);
        match cert.outcome {
            SearchOutcome::Found(set) => Ok(set),
            SearchOutcome::NoneExists => Err(IngredientError::Infeasible(format!(
                "exhaustive search shows no {what} exists"
            ))),
            SearchOutcome::BudgetExceeded => Err(IngredientError::Unavailable(format!(
                "search budget exhausted before settling {what}"
            ))),
        }
    }

    fn resolve_tight(&self, rows: usize, cols: usize, count: usize)
        -> Result<ArraySet, IngredientError>
    {
        if rows < 2 || cols < 2 || count < 1 {
            return Err(IngredientError::Infeasible(
                "tight rectangle sets need at least two rows, two columns and one array".into(),
            ));
        }
        let total = rows * cols * count;
        if total % 2 == 0 && !(rows % 2 == 0 && cols % 2 == 0 && rows * cols > 4) {
            return Err(IngredientError::Infeasible(format!(
                "no tight rectangle set with {rows} rows, {cols} columns and {count} arrays: \
                 every row sums to half an odd multiple of {}, so an even symbol count needs \
                 both sides even, and 2x2 arrays repeat values around their fill cycle",
                total + 1
            )));
        }
        if let Some(set) = self.registry.get(&format!("tight:{rows}x{cols}x{count}")) {
            return Ok(set.clone());
        }
        if let Some(set) = self.registry.get(&format!("tight:{cols}x{rows}x{count}")) {
            return Ok(set.transpose());
        }
        if rows == 2 || cols == 2 || (rows % 2 == 0 && cols % 2 == 0) {
            // band and layered assemblies live in the construction dispatcher
            match crate::constructions::magic_rectangle_set(rows, cols, cols, rows, count, self) {
                Ok(built) => return Ok(built.set),
                Err(err) => return self.tight_search_fallback(rows, cols, count, Some(demote(err))),
            }
        }
        if rows == cols {
            // odd square: the full-band diagonal request is the same object
            return self.resolve_diagonal(rows, rows, count);
        }
        if gcd(rows, cols) >= 3 {
            match crate::constructions::magic_rectangle_set(rows, cols, cols, rows, count, self) {
                Ok(built) => return Ok(built.set),
                Err(err) => return self.tight_search_fallback(rows, cols, count, Some(demote(err))),
            }
        }
        self.tight_search_fallback(rows, cols, count, None)
    }

    fn tight_search_fallback(
        &self,
        rows: usize,
        cols: usize,
        count: usize,
        prior: Option<IngredientError>,
    ) -> Result<ArraySet, IngredientError> {
        let spec = tight_spec(rows, cols, count);
        let what = format!("tight rectangle set {rows}x{cols}x{count}");
        match self.run_search(&spec, &SearchOptions::default(), &what) {
            Ok(set) => Ok(set),
            Err(IngredientError::Unavailable(msg)) => Err(IngredientError::Unavailable(match prior {
                Some(p) => format!("{msg}; closed-form route also failed: {p}"),
                None => msg,
            })),
            Err(other) => Err(other),
        }
    }

    fn resolve_diagonal(&self, side: usize, band: usize, count: usize)
        -> Result<ArraySet, IngredientError>
    {
        if side < 2 || band < 2 || band > side || count < 1 {
            return Err(IngredientError::Infeasible(
                "diagonal square sets need 2 <= band <= side and at least one array".into(),
            ));
        }
        if band == 2 {
            return Err(IngredientError::Infeasible(
                "two filled cells per line force repeated values around the fill cycle".into(),
            ));
        }
        let total = side * band * count;
        if band % 2 == 1 && total % 2 == 0 {
            return Err(IngredientError::Infeasible(format!(
                "every line of {band} cells sums to half an odd multiple of {}, which is not an \
                 integer when the symbol count is even",
                total + 1
            )));
        }
        if let Some(set) = self.registry.get(&format!("diag:{side}x{band}x{count}")) {
            return Ok(set.clone());
        }
        if band == side && side % 2 == 1 && side % count == 0 {
            return Ok(full_band_square(side, count));
        }
        let spec = diag_spec(side, band, count);
        self.run_search(
            &spec,
            &SearchOptions::default(),
            &format!("diagonal square set {side}x{side} on {band} diagonals x{count}"),
        )
    }

    fn resolve_shiftable(&self, m: usize, n: usize, s: usize, k: usize)
        -> Result<ArraySet, IngredientError>
    {
        check_shape(m, n, s, k)?;
        if s % 2 != 0 || k % 2 != 0 {
            return Err(IngredientError::Infeasible(
                "a line balances signs only with an even number of filled cells".into(),
            ));
        }
        if let Some(set) = self.registry.get(&format!("shiftable:{m}x{n}x{s}x{k}")) {
            return Ok(set.clone());
        }
        if let Some(set) = self.registry.get(&format!("shiftable:{n}x{m}x{k}x{s}")) {
            return Ok(set.transpose());
        }
        if m == 2 && k == 2 && s == n && n % 4 == 0 {
            return Ok(ArraySet::singleton(two_row_signed(n)));
        }
        if n == 2 && s == 2 && k == m && m % 4 == 0 {
            return Ok(ArraySet::singleton(two_row_signed(m).transpose()));
        }
        if s % 4 == 0 && k % 4 == 0 && m % 2 == 0 && n % 2 == 0 {
            return Ok(doubly_even_shiftable(m, n, s, k));
        }
        let spec = signed_spec(m, n, s, k);
        let options = SearchOptions { shiftable: true, ..SearchOptions::default() };
        self.run_search(&spec, &options, &format!("sign-balanced zero-sum array {m}x{n} ({s} per row, {k} per column)"))
    }

    fn resolve_signed(&self, m: usize, n: usize, s: usize, k: usize)
        -> Result<ArraySet, IngredientError>
    {
        check_shape(m, n, s, k)?;
        if (n * k) % 2 == 1 {
            // odd cell count: shift a tight-sum integer rectangle down by its mean
            return match crate::constructions::signed_magic_array_odd(m, n, s, k, self) {
                Ok(built) => Ok(built.set),
                Err(err) => Err(demote(err)),
            };
        }
        if let Some(set) = self.registry.get(&format!("signed:{m}x{n}x{s}x{k}")) {
            return Ok(set.clone());
        }
        if let Some(set) = self.registry.get(&format!("signed:{n}x{m}x{k}x{s}")) {
            return Ok(set.transpose());
        }
        if m == 2 && k == 2 && s == n && matches!(n % 4, 0 | 3) {
            return Ok(ArraySet::singleton(two_row_signed(n)));
        }
        if n == 2 && s == 2 && k == m && matches!(m % 4, 0 | 3) {
            return Ok(ArraySet::singleton(two_row_signed(m).transpose()));
        }
        if s % 4 == 0 && k % 4 == 0 && m % 2 == 0 && n % 2 == 0 {
            return Ok(doubly_even_shiftable(m, n, s, k));
        }
        let spec = signed_spec(m, n, s, k);
        self.run_search(
            &spec,
            &SearchOptions::default(),
            &format!("zero-sum array {m}x{n} ({s} per row, {k} per column) on a symmetric range"),
        )
    }

    fn resolve_half(&self, rows: usize, cols: usize) -> Result<ArraySet, IngredientError> {
        if rows < 2 || cols < 2 {
            return Err(IngredientError::Infeasible(
                "half-class rectangles need at least two rows and two columns".into(),
            ));
        }
        if rows == 2 || cols == 2 {
            return Err(IngredientError::Infeasible(
                "two filled cells on a zero-sum line would pair an element with its negative, \
                 using both members of a class".into(),
            ));
        }
        if let Some(set) = self.registry.get(&format!("half:{rows}x{cols}")) {
            return Ok(set.clone());
        }
        if let Some(set) = self.registry.get(&format!("half:{cols}x{rows}")) {
            return Ok(set.transpose());
        }
        let spec = half_spec(rows, cols);
        self.run_search(
            &spec,
            &SearchOptions::default(),
            &format!("half-class rectangle {rows}x{cols}"),
        )
    }
}

impl IngredientProvider for Oracle {
    fn tight_rectangle_set(&self, rows: usize, cols: usize, count: usize)
        -> Result<ArraySet, IngredientError>
    {
        self.cached(format!("tight:{rows}x{cols}x{count}"), |me| {
            me.resolve_tight(rows, cols, count)
        })
    }

    fn diagonal_rectangle_set(&self, side: usize, band: usize, count: usize)
        -> Result<ArraySet, IngredientError>
    {
        self.cached(format!("diag:{side}x{band}x{count}"), |me| {
            me.resolve_diagonal(side, band, count)
        })
    }

    fn shiftable_signed(&self, m: usize, n: usize, s: usize, k: usize)
        -> Result<ArraySet, IngredientError>
    {
        self.cached(format!("shiftable:{m}x{n}x{s}x{k}"), |me| me.resolve_shiftable(m, n, s, k))
    }

    fn signed_array(&self, m: usize, n: usize, s: usize, k: usize)
        -> Result<ArraySet, IngredientError>
    {
        self.cached(format!("signed:{m}x{n}x{s}x{k}"), |me| me.resolve_signed(m, n, s, k))
    }

    fn half_class_rows(&self, rows: usize, cols: usize) -> Result<ArraySet, IngredientError> {
        self.cached(format!("half:{rows}x{cols}"), |me| me.resolve_half(rows, cols))
    }
}

fn check_shape(m: usize, n: usize, s: usize, k: usize) -> Result<(), IngredientError> {
    if s < 2 || k < 2 || s > n || k > m || m * s != n * k {
        return Err(IngredientError::Infeasible(format!(
            "shape {m}x{n} with {s} per row and {k} per column is not a valid fill pattern"
        )));
    }
    Ok(())
}

fn demote(err: crate::constructions::BuildError) -> IngredientError {
    use crate::constructions::BuildError;
    match err {
        BuildError::Infeasible(msg) => IngredientError::Infeasible(msg),
        BuildError::Ingredient(inner) => inner,
        other => IngredientError::Unavailable(other.to_string()),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}
