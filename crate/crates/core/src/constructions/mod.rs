//! Assembly of verified magic arrays from blocks and ingredients, and the
//! feasibility analysis that routes requests to the right assembly.
//!
//! Every public constructor re-verifies its output before returning it, so a
//! successful result is always a correct array set for the spec it carries.

mod nonzero;
mod rectangles;
mod zero_sum;

pub use nonzero::{
    double_half_rows, heffter_rows, nonzero_cyclic_even, nonzero_extend, nonzero_from_signed,
    nonzero_group, nonzero_tight, nonzero_two_rows, nonzero_two_rows_group,
};
pub use rectangles::{
    band_rectangle_set, even_rectangle_set, magic_rectangle_set, odd_rectangle_set,
    signed_magic_array, signed_magic_array_odd,
};
pub use zero_sum::{
    zero_sum_cyclic, zero_sum_diagonal, zero_sum_diagonal_doubly_even, zero_sum_diagonal_odd,
    zero_sum_group,
};

use thiserror::Error;

use crate::array::{ArrayError, ArraySet};
use crate::blocks::BlockError;
use crate::group::{Group, GroupElement, GroupError, GroupIsomorphism};
use crate::ingredients::IngredientError;
use crate::verify::{verify, MagicSpec, OmegaSpec, VerificationReport};

/// Why a construction request failed.
#[derive(Debug, Error)]
pub enum BuildError {
    /// The requested object provably does not exist.
    #[error("{0}")]
    Infeasible(String),
    /// No implemented construction covers the request; existence may be open.
    #[error("{0}")]
    Unsupported(String),
    /// A required ingredient could not be obtained.
    #[error("ingredient: {0}")]
    Ingredient(#[from] IngredientError),
    /// The request itself is malformed.
    #[error("invalid request: {0}")]
    Invalid(String),
    /// The assembly produced something that failed verification; a bug.
    #[error("internal construction error: {0}")]
    Internal(String),
}

impl From<ArrayError> for BuildError {
    fn from(e: ArrayError) -> BuildError {
        BuildError::Internal(e.to_string())
    }
}

impl From<BlockError> for BuildError {
    fn from(e: BlockError) -> BuildError {
        BuildError::Internal(e.to_string())
    }
}

impl From<GroupError> for BuildError {
    fn from(e: GroupError) -> BuildError {
        BuildError::Internal(e.to_string())
    }
}

/// A verified array set together with the spec it satisfies and a readable
/// account of the assembly steps that produced it.
pub struct Construction {
    pub set: ArraySet,
    pub spec: MagicSpec,
    pub trace: Vec<String>,
}

impl Construction {
    pub fn report(&self) -> VerificationReport {
        verify(&self.set, &self.spec)
    }
}

/// Verify and wrap; constructors must never hand out unverified output.
pub(crate) fn finish(
    set: ArraySet,
    spec: MagicSpec,
    trace: Vec<String>,
) -> Result<Construction, BuildError> {
    let report = verify(&set, &spec);
    if !report.pass() {
        return Err(BuildError::Internal(format!(
            "assembled set fails verification: {}",
            report.summary()
        )));
    }
    Ok(Construction { set, spec, trace })
}

pub(crate) fn int(v: i64) -> GroupElement {
    Group::integers().scalar(v).unwrap()
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Re-express a construction in another presentation of the same group.
/// `via` must map the desired presentation (source) to the one the
/// construction currently uses (target).
pub(crate) fn into_presentation(
    built: Construction,
    group: &Group,
    via: &GroupIsomorphism,
) -> Result<Construction, BuildError> {
    if built.set.group() == group {
        let mut spec = built.spec;
        spec.group = group.clone();
        return finish(built.set, spec, built.trace);
    }
    let set = built.set.map(|a| {
        a.map_entries(group, |e| via.backward(e).expect("presentations are isomorphic"))
    })?;
    let mut spec = built.spec;
    spec.group = group.clone();
    let mut trace = built.trace;
    trace.push(format!("entries rewritten in the presentation {group}"));
    finish(set, spec, trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    Exists,
    NotExists,
    Unknown,
}

impl FeasibilityStatus {
    pub fn label(&self) -> &'static str {
        match self {
            FeasibilityStatus::Exists => "exists",
            FeasibilityStatus::NotExists => "not-exists",
            FeasibilityStatus::Unknown => "unknown",
        }
    }
}

/// Existence verdict for a spec, with a self-contained reason. `NotExists`
/// only ever comes from a necessary-condition violation; `Exists` only from
/// a condition under which one of the implemented assemblies succeeds.
#[derive(Debug, Clone)]
pub struct Feasibility {
    pub status: FeasibilityStatus,
    pub reason: String,
}

impl Feasibility {
    fn exists(reason: impl Into<String>) -> Feasibility {
        Feasibility { status: FeasibilityStatus::Exists, reason: reason.into() }
    }
    fn not_exists(reason: impl Into<String>) -> Feasibility {
        Feasibility { status: FeasibilityStatus::NotExists, reason: reason.into() }
    }
    fn unknown(reason: impl Into<String>) -> Feasibility {
        Feasibility { status: FeasibilityStatus::Unknown, reason: reason.into() }
    }
}

/// Decide existence for a spec as far as the implemented theory reaches.
pub fn feasibility(spec: &MagicSpec) -> Feasibility {
    if let Err(e) = spec.validate() {
        return Feasibility::not_exists(format!("invalid layout: {e}"));
    }
    match &spec.omega {
        OmegaSpec::IntegerInterval { .. } => integer_feasibility(spec),
        OmegaSpec::SignedRange { .. } => signed_feasibility(spec),
        OmegaSpec::FullGroup => full_group_feasibility(spec),
        OmegaSpec::NonzeroGroup => nonzero_feasibility(spec),
        OmegaSpec::HalfClasses { .. } => Feasibility::unknown(
            "rectangles on one element per sign class are settled only case by case; \
             the search can still decide small instances",
        ),
        OmegaSpec::Explicit { .. } => explicit_feasibility(spec),
    }
}

fn integer_feasibility(spec: &MagicSpec) -> Feasibility {
    let (n, s, k, c) = (spec.cols, spec.row_fill, spec.col_fill, spec.arrays);
    let cells = n * k * c;
    if spec.zero_sum {
        return Feasibility::not_exists("line sums of positive integers are positive, never zero");
    }
    if spec.diagonal {
        if k == 2 {
            return Feasibility::not_exists(
                "two filled cells per line force repeated values around the fill cycles",
            );
        }
        if k % 2 == 1 && cells % 2 == 0 {
            return Feasibility::not_exists(format!(
                "every line of {k} cells would sum to {k}({cells}+1)/2, which is not an integer"
            ));
        }
        if k == n && n % 2 == 1 && n % c == 0 {
            return Feasibility::exists(
                "full odd square with the array count dividing the side: direct mixed-radix filling",
            );
        }
        return Feasibility::unknown(
            "diagonally supported integer squares beyond the full odd case are settled only case by case",
        );
    }
    if cells % 2 == 1 {
        return Feasibility::exists(format!(
            "odd symbol count: row sums {s}({cells}+1)/2 and column sums {k}({cells}+1)/2 are \
             integers and the odd assembly applies"
        ));
    }
    if s % 2 == 0 && k % 2 == 0 {
        if s * k > 4 {
            return Feasibility::exists(
                "even fill counts with product above 4: layered shifts of a sign-balanced array",
            );
        }
        return Feasibility::not_exists(
            "with two cells per row and per column the filled positions form cycles on which \
             values must repeat",
        );
    }
    Feasibility::not_exists(format!(
        "with {cells} symbols every row sums to {s}({cells}+1)/2 and every column to \
         {k}({cells}+1)/2; both fill counts must be even"
    ))
}

fn signed_feasibility(spec: &MagicSpec) -> Feasibility {
    let (n, k, c) = (spec.cols, spec.col_fill, spec.arrays);
    if !spec.zero_sum {
        return Feasibility::unknown(
            "only zero-sum layouts on symmetric ranges are classified here",
        );
    }
    if spec.diagonal {
        return Feasibility::unknown("diagonal symmetric-range layouts are settled only case by case");
    }
    if c == 1 && (n * k) % 2 == 1 {
        return Feasibility::exists(
            "odd cell count: an integer rectangle shifted down by its mean lands on the \
             symmetric range with zero sums",
        );
    }
    Feasibility::unknown(
        "zero-sum arrays on symmetric ranges with even cell count are settled only case by case",
    )
}

fn full_group_feasibility(spec: &MagicSpec) -> Feasibility {
    let (n, s, k, c) = (spec.cols, spec.row_fill, spec.col_fill, spec.arrays);
    let cells = n * k * c;
    if !spec.zero_sum {
        return Feasibility::unknown(
            "full-group layouts with unconstrained line sums are not classified here",
        );
    }
    let group = &spec.group;
    match group.has_zero_sum() {
        Ok(true) => {}
        Ok(false) => {
            return Feasibility::not_exists(
                "all entries together sum to the group total, which here is the unique \
                 involution, not zero",
            )
        }
        Err(e) => return Feasibility::unknown(format!("group analysis failed: {e}")),
    }
    let chain = match group.invariant_factors() {
        Ok((chain, _)) => chain,
        Err(e) => return Feasibility::unknown(format!("group analysis failed: {e}")),
    };
    let cyclic = chain.rank() == 1;
    let d = gcd(s, k);
    if spec.diagonal {
        // here m == n and s == k (forced by the shape identities)
        if k % 4 == 0 && n >= k {
            return Feasibility::exists(
                "fill count divisible by four over a group with zero total: corner blocks \
                 fill bands of four diagonals",
            );
        }
        if k % 2 == 1 && k >= 3 && c == 1 && n >= k && gcd(n, k - 1) == 1 {
            if let Ok((two_chain, _)) =
                Group::new(vec![k as u64, n as u64]).and_then(|g| g.invariant_factors())
            {
                if two_chain.moduli() == chain.moduli() {
                    return Feasibility::exists(
                        "group splits as the fill count times the side with the side coprime \
                         to fill-1: deterministic diagonal filling",
                    );
                }
            }
        }
        return Feasibility::unknown(
            "diagonal group layouts beyond the two covered families are open here",
        );
    }
    if cyclic {
        if cells % 2 == 1 {
            return Feasibility::exists(
                "cyclic group of odd order: shift an integer rectangle set and reduce",
            );
        }
        // even cyclic groups have a unique involution; already rejected above
        return Feasibility::not_exists(
            "a cyclic group of even order has a unique involution, so the total of all \
             entries cannot be zero",
        );
    }
    if d % 4 == 0 {
        return Feasibility::exists(
            "the fill counts share a factor divisible by four: corner-block diagonals over \
             any group with zero total, folded to shape",
        );
    }
    if cells % 2 == 1 && c == 1 && d >= 3 && gcd(n * k / d, d.saturating_sub(1)) == 1 {
        let side = (n * k / d) as u64;
        if let Ok((two_chain, _)) =
            Group::new(vec![d as u64, side]).and_then(|g| g.invariant_factors())
        {
            if two_chain.moduli() == chain.moduli() {
                return Feasibility::exists(
                    "group splits as the common fill divisor times the remaining side: \
                     diagonal filling folded to shape",
                );
            }
        }
    }
    Feasibility::unknown(
        "no classification covers this group and shape; the search can still decide small \
         instances",
    )
}

fn nonzero_feasibility(spec: &MagicSpec) -> Feasibility {
    let (m, n, s, k, c) = (spec.rows, spec.cols, spec.row_fill, spec.col_fill, spec.arrays);
    if !spec.zero_sum {
        return Feasibility::unknown(
            "nonzero-symbol layouts with unconstrained line sums are not classified here",
        );
    }
    let group = &spec.group;
    match group.has_zero_sum() {
        Ok(true) => {}
        Ok(false) => {
            return Feasibility::not_exists(
                "the nonzero elements sum to the group total, which here is the unique \
                 involution, not zero",
            )
        }
        Err(e) => return Feasibility::unknown(format!("group analysis failed: {e}")),
    }
    if spec.diagonal {
        return Feasibility::unknown("diagonal nonzero-symbol layouts are settled only case by case");
    }
    let chain = match group.invariant_factors() {
        Ok((chain, _)) => chain,
        Err(e) => return Feasibility::unknown(format!("group analysis failed: {e}")),
    };
    let cyclic = chain.rank() == 1;
    let tight = s == n && k == m;
    if tight && (m == 2 || n == 2) {
        let width = if m == 2 { n } else { m };
        if width < 3 {
            return Feasibility::not_exists(
                "each zero-sum line of two cells pairs an element with its negative, using \
                 one sign class twice",
            );
        }
        if cyclic {
            return Feasibility::exists(
                "two full rows over a cyclic group exist for every width of at least three",
            );
        }
        if c == 1 {
            if chain.moduli() == [3, 3] {
                return Feasibility::not_exists(
                    "checked exhaustively: over the group of order nine with two factors of \
                     order three, no pair of mirrored zero-sum rows covers the sign classes",
                );
            }
            return Feasibility::exists(
                "two full rows over any other odd-order group: seed rows extended along the \
                 invariant factors",
            );
        }
        return Feasibility::unknown(
            "several two-row arrays over a non-cyclic group are settled only case by case",
        );
    }
    if tight && c == 1 && cyclic && (m * n) % 2 == 0 {
        return if m * n > 4 {
            Feasibility::exists(
                "full rectangle over the cyclic group of order mn+1 with mn even above 4: \
                 reduce an integer or symmetric-range construction",
            )
        } else {
            Feasibility::not_exists(
                "each zero-sum line of two cells pairs an element with its negative, using \
                 one sign class twice",
            )
        };
    }
    if cyclic && s % 2 == 0 && k % 2 == 0 && s * k > 4 {
        return Feasibility::exists(
            "even fill counts: an integer rectangle set reduced modulo one more than the \
             symbol count",
        );
    }
    Feasibility::unknown(
        "no classification covers this group and shape; the search can still decide small \
         instances",
    )
}

fn explicit_feasibility(spec: &MagicSpec) -> Feasibility {
    if spec.zero_sum {
        if let Ok(Some(elements)) = spec.omega.materialize(&spec.group) {
            let mut total = spec.group.zero();
            for e in &elements {
                total = total.add(e).expect("same group");
            }
            if !total.is_zero() {
                return Feasibility::not_exists(
                    "the listed symbols sum to a nonzero element, but all line sums are zero, \
                     so the entries of the set must total zero",
                );
            }
        }
    }
    Feasibility::unknown("explicit symbol lists are settled only by search")
}

/// Componentwise product of two constructions: cell ((i1,i2),(j1,j2)) is
/// filled with the pair (a(i1,j1), b(i2,j2)) whenever both cells are filled.
/// Line sums multiply out to (s2*x1, s1*x2), so magic inputs give a magic
/// product and zero-sum inputs a zero-sum product.
pub fn kronecker_product(
    left: &Construction,
    right: &Construction,
) -> Result<Construction, BuildError> {
    let (ga, gb) = (left.set.group(), right.set.group());
    if !ga.is_finite() || !gb.is_finite() {
        return Err(BuildError::Unsupported(
            "componentwise products are only taken over finite groups".into(),
        ));
    }
    let group = ga.direct_sum(gb);
    let omega = match (&left.spec.omega, &right.spec.omega) {
        (OmegaSpec::FullGroup, OmegaSpec::FullGroup) => OmegaSpec::FullGroup,
        (oa, ob) => {
            let ea = oa
                .materialize(ga)
                .map_err(|e| BuildError::Invalid(e.to_string()))?
                .ok_or_else(|| {
                    BuildError::Unsupported("left symbol list cannot be enumerated".into())
                })?;
            let eb = ob
                .materialize(gb)
                .map_err(|e| BuildError::Invalid(e.to_string()))?
                .ok_or_else(|| {
                    BuildError::Unsupported("right symbol list cannot be enumerated".into())
                })?;
            let mut elements = Vec::with_capacity(ea.len() * eb.len());
            for x in &ea {
                for y in &eb {
                    let mut residues = x.residues().to_vec();
                    residues.extend_from_slice(y.residues());
                    elements.push(residues);
                }
            }
            OmegaSpec::Explicit { elements }
        }
    };
    let mut spec = MagicSpec::new(
        group,
        left.spec.rows * right.spec.rows,
        left.spec.cols * right.spec.cols,
        left.spec.row_fill * right.spec.row_fill,
        left.spec.col_fill * right.spec.col_fill,
        left.spec.arrays * right.spec.arrays,
        omega,
    );
    if left.spec.zero_sum && right.spec.zero_sum {
        spec = spec.zero_sum();
    }
    let set = left.set.kronecker(&right.set);
    let trace = vec![format!(
        "componentwise product of a {}x{} set over {} with a {}x{} set over {}",
        left.spec.rows, left.spec.cols, ga, right.spec.rows, right.spec.cols, gb
    )];
    finish(set, spec, trace)
}
