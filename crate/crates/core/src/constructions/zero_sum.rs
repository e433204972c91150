//! Arrays using every element of a finite group once, all line sums zero.

use crate::array::{ArraySet, Pfa};
use crate::blocks::corner_quad;
use crate::group::Group;
use crate::ingredients::IngredientProvider;
use crate::verify::{MagicSpec, OmegaSpec};

use super::{
    feasibility, finish, gcd, int, into_presentation, magic_rectangle_set, BuildError,
    Construction, FeasibilityStatus,
};

fn full_spec(
    group: &Group,
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
) -> Result<MagicSpec, BuildError> {
    let spec = MagicSpec::new(group.clone(), m, n, s, k, c, OmegaSpec::FullGroup).zero_sum();
    spec.validate().map_err(|e| BuildError::Invalid(e.to_string()))?;
    Ok(spec)
}

fn refuse_impossible(spec: &MagicSpec) -> Result<(), BuildError> {
    let verdict = feasibility(spec);
    if verdict.status == FeasibilityStatus::NotExists {
        return Err(BuildError::Infeasible(verdict.reason));
    }
    Ok(())
}

/// Build c arrays over the cyclic group of order nkc (which must be odd) by
/// shifting an integer rectangle set down by its mean and reducing.
pub fn zero_sum_cyclic(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let total = (n * k * c) as u64;
    let group = Group::cyclic(total)
        .map_err(|e| BuildError::Invalid(format!("cyclic group of order {total}: {e}")))?;
    let spec = full_spec(&group, m, n, s, k, c)?;
    refuse_impossible(&spec)?;
    // only odd totals survive the check above, so (total + 1) / 2 is the
    // common line-mean of the integer set
    let inner = magic_rectangle_set(m, n, s, k, c, ingredients)?;
    let delta = int(-(((total + 1) / 2) as i64));
    let set = inner.set.map(|a| a.shift_entries(&delta)?.reduce_mod(total))?;
    let mut trace = inner.trace;
    trace.push(format!("shifted by -{} and reduced modulo {total}", (total + 1) / 2));
    finish(set, spec, trace)
}

/// Deterministic n x n array over Z_k + Z_n supported on k cyclically
/// consecutive diagonals, for odd n >= k >= 3 with n coprime to k-1. Every
/// element appears once and all line sums are zero.
pub fn zero_sum_diagonal_odd(n: usize, k: usize) -> Result<Construction, BuildError> {
    if k < 3 || n < k || k % 2 == 0 || n % 2 == 0 {
        return Err(BuildError::Invalid(format!(
            "this filling needs odd side >= fill >= 3, got side {n} and fill {k}"
        )));
    }
    if gcd(n, k - 1) != 1 {
        return Err(BuildError::Invalid(format!(
            "this filling needs the side {n} coprime to fill-1 = {}",
            k - 1
        )));
    }
    let group = Group::new(vec![k as u64, n as u64])?;
    let spec = MagicSpec::new(group.clone(), n, n, k, k, 1, OmegaSpec::FullGroup)
        .zero_sum()
        .diagonal();
    spec.validate().map_err(|e| BuildError::Invalid(e.to_string()))?;
    let (ni, ki) = (n as i64, k as i64);
    let half = (ki - 1) / 2;
    let mut a = Pfa::empty(group.clone(), n, n);
    for i in 0..n {
        let ii = i as i64;
        // row i walks 1..n in the second coordinate on every off diagonal;
        // the main diagonal balances both line sums at once
        a.set(i, i, group.element(vec![0, (ii + 1) * (1 - ki)])?)?;
        for l in 1..=half {
            let up = (ii + l).rem_euclid(ni) as usize;
            let down = (ii - l).rem_euclid(ni) as usize;
            a.set(i, up, group.element(vec![2 * l, ii + 1])?)?;
            a.set(i, down, group.element(vec![2 * l - 1, ii + 1])?)?;
        }
    }
    finish(
        ArraySet::singleton(a),
        spec,
        vec![format!(
            "direct filling of {k} diagonals of a {n}x{n} square over Z{k}+Z{n}"
        )],
    )
}

/// Build c diagonally supported n x n arrays over a group of order nkc with
/// more than one involution, for n >= k >= 4 and k divisible by four. The
/// group is re-presented as Z_2a + Z_2b + rest and filled with 3x2 corner
/// blocks whose line contributions cancel in pairs.
pub fn zero_sum_diagonal_doubly_even(
    group: &Group,
    n: usize,
    k: usize,
    c: usize,
) -> Result<Construction, BuildError> {
    if k % 4 != 0 || k < 4 || n < k {
        return Err(BuildError::Invalid(format!(
            "this filling needs side >= fill >= 4 with the fill divisible by four, \
             got side {n} and fill {k}"
        )));
    }
    let spec = MagicSpec::new(group.clone(), n, n, k, k, c, OmegaSpec::FullGroup)
        .zero_sum()
        .diagonal();
    spec.validate().map_err(|e| BuildError::Invalid(e.to_string()))?;
    refuse_impossible(&spec)?;
    // more than one involution guarantees two even invariant factors
    let parts = group.even_pair_split()?;
    let split = parts.split.clone();
    let rest_elements = parts.rest.elements()?;
    let mut quads = Vec::with_capacity((group.order().unwrap() / 4) as usize);
    for x in 1..=parts.a as i64 {
        for y in 1..=parts.b as i64 {
            for g in &rest_elements {
                quads.push(corner_quad(x, y, g, &split)?);
            }
        }
    }
    let mut feed = quads.into_iter();
    let mut arrays = Vec::with_capacity(c);
    for _ in 0..c {
        let mut a = Pfa::empty(split.clone(), n, n);
        for band in 0..k / 4 {
            for j0 in 0..n {
                let quad = feed.next().expect("one corner block per band position");
                let rows = [j0, (j0 + 2) % n];
                let cols = [(j0 + 4 * band) % n, (j0 + 4 * band + 1) % n];
                for (i, j, e) in quad.filled() {
                    a.set(rows[i / 2], cols[j], e.clone())?;
                }
            }
        }
        arrays.push(a);
    }
    let split_spec = MagicSpec::new(split.clone(), n, n, k, k, c, OmegaSpec::FullGroup)
        .zero_sum()
        .diagonal();
    let built = finish(
        ArraySet::new(arrays)?,
        split_spec,
        vec![format!(
            "corner blocks over {split} walk {} bands of four diagonals",
            k / 4
        )],
    )?;
    into_presentation(built, group, &parts.iso)
}

/// Build c diagonally supported n x n arrays over `group` with k filled
/// diagonals each and zero line sums, routing on k mod 4 and rewriting the
/// presentation when the direct filling uses a different one.
pub fn zero_sum_diagonal(group: &Group, n: usize, k: usize, c: usize) -> Result<Construction, BuildError> {
    if k % 4 == 0 {
        return zero_sum_diagonal_doubly_even(group, n, k, c);
    }
    if k % 2 == 1 && k >= 3 {
        if c != 1 {
            return Err(BuildError::Unsupported(
                "the odd diagonal filling produces a single array".into(),
            ));
        }
        if n < k || gcd(n, k - 1) != 1 {
            return Err(BuildError::Unsupported(format!(
                "the odd diagonal filling needs n >= k and n coprime to k-1, got n={n} k={k}"
            )));
        }
        let (chain, to_chain) = group.invariant_factors()?;
        let two = Group::new(vec![k as u64, n as u64])?;
        let (two_chain, two_iso) = two.invariant_factors()?;
        if two_chain.moduli() != chain.moduli() {
            return Err(BuildError::Unsupported(format!(
                "{group} is not isomorphic to Z{k}+Z{n}"
            )));
        }
        let inner = zero_sum_diagonal_odd(n, k)?;
        if group.moduli() == [k as u64, n as u64] {
            return Ok(inner);
        }
        let mapped = inner.set.map(|a| {
            a.map_entries(group, |e| {
                let via_chain = two_iso.forward(e).expect("checked equal chains");
                to_chain.backward(&via_chain).expect("checked equal chains")
            })
        })?;
        let mut trace = inner.trace;
        trace.push(format!("entries rewritten in the presentation {group}"));
        let spec = full_spec(group, n, n, k, k, 1)?.diagonal();
        return finish(mapped, spec, trace);
    }
    Err(BuildError::Unsupported(
        "no diagonal filling covers 2 mod 4 diagonals".into(),
    ))
}

/// Build c arrays of shape m x n using every element of `group` once per set,
/// all line sums zero, routing on the group presentation and on the common
/// divisor of the fill counts.
pub fn zero_sum_group(
    group: &Group,
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let spec = full_spec(group, m, n, s, k, c)?;
    refuse_impossible(&spec)?;
    let (chain, to_chain) = group.invariant_factors()?;
    if chain.rank() == 1 {
        // odd cyclic order (even ones fail the involution check above)
        let built = zero_sum_cyclic(m, n, s, k, c, ingredients)?;
        return into_presentation(built, group, &to_chain);
    }
    let d = gcd(s, k);
    let side = n * k / d;
    if d % 4 == 0 {
        let inner = zero_sum_diagonal_doubly_even(group, side, d, c)?;
        let set = inner.set.fold_to_rect(m, n)?;
        let mut trace = inner.trace;
        if side != m || side != n {
            trace.push(format!("diagonal square folded onto {m}x{n}"));
        }
        return finish(set, spec, trace);
    }
    if (n * k * c) % 2 == 1 && c == 1 && d >= 3 && gcd(side, d - 1) == 1 {
        let two = Group::new(vec![d as u64, side as u64])?;
        let (two_chain, two_iso) = two.invariant_factors()?;
        if two_chain.moduli() == chain.moduli() {
            let inner = zero_sum_diagonal_odd(side, d)?;
            let mapped = inner.set.map(|a| {
                a.map_entries(group, |e| {
                    let via_chain = two_iso.forward(e).expect("checked equal chains");
                    to_chain.backward(&via_chain).expect("checked equal chains")
                })
            })?;
            let folded = mapped.fold_to_rect(m, n)?;
            let mut trace = inner.trace;
            trace.push(format!(
                "rewritten in the presentation {group} and folded onto {m}x{n}"
            ));
            return finish(folded, spec, trace);
        }
    }
    Err(BuildError::Unsupported(format!(
        "no implemented construction covers {group} at {m}x{n} with fills {s},{k} and {c} \
         arrays of zero line sums"
    )))
}
