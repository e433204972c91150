//! Zero-sum arrays over the nonzero elements of a finite group.

use std::collections::BTreeSet;

use crate::array::{juxtapose, ArraySet, Pfa};
use crate::blocks::{
    mirrored_rows, signed_coset_rows, window_spread, zero_lift, NINE_HIGH, NINE_LOW, TRIPLE_HIGH,
    TRIPLE_LOW,
};
use crate::group::{Group, GroupElement};
use crate::ingredients::IngredientProvider;
use crate::verify::{verify, MagicSpec, OmegaSpec};

use super::{
    feasibility, finish, into_presentation, magic_rectangle_set, BuildError, Construction,
    FeasibilityStatus,
};

fn nonzero_spec(
    group: &Group,
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
) -> Result<MagicSpec, BuildError> {
    let spec = MagicSpec::new(group.clone(), m, n, s, k, c, OmegaSpec::NonzeroGroup).zero_sum();
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

/// Build c arrays over the nonzero residues modulo nkc+1 (s, k even, sk > 4)
/// by reducing an integer rectangle set: line sums s(nkc+1)/2 and k(nkc+1)/2
/// vanish modulo nkc+1 exactly because the fill counts are even.
pub fn nonzero_cyclic_even(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let modulus = (n * k * c + 1) as u64;
    let group = Group::cyclic(modulus)
        .map_err(|e| BuildError::Invalid(format!("cyclic group of order {modulus}: {e}")))?;
    let spec = nonzero_spec(&group, m, n, s, k, c)?;
    refuse_impossible(&spec)?;
    if s % 2 != 0 || k % 2 != 0 {
        return Err(BuildError::Invalid(format!(
            "reduction modulo {modulus} needs even fill counts, got {s} and {k}"
        )));
    }
    if s * k == 4 {
        return Err(BuildError::Unsupported(
            "no integer rectangle set with two cells per row and column exists to reduce".into(),
        ));
    }
    let inner = magic_rectangle_set(m, n, s, k, c, ingredients)?;
    let set = inner.set.map(|a| a.reduce_mod(modulus))?;
    let mut trace = inner.trace;
    trace.push(format!("reduced modulo {modulus}"));
    finish(set, spec, trace)
}

/// Build one m x n array over the nonzero residues modulo nk+1 (nk even) by
/// reducing a zero-sum array over +-[1, nk/2].
pub fn nonzero_from_signed(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let total = n * k;
    if total % 2 != 0 {
        return Err(BuildError::Invalid(
            "reduction of a symmetric range needs an even cell count".into(),
        ));
    }
    let modulus = (total + 1) as u64;
    let group = Group::cyclic(modulus)
        .map_err(|e| BuildError::Invalid(format!("cyclic group of order {modulus}: {e}")))?;
    let spec = nonzero_spec(&group, m, n, s, k, 1)?;
    refuse_impossible(&spec)?;
    let signed = ingredients.signed_array(m, n, s, k)?;
    let set = signed.map(|a| a.reduce_mod(modulus))?;
    finish(
        set,
        spec,
        vec![format!("zero-sum array over +-[1, {}] reduced modulo {modulus}", total / 2)],
    )
}

/// Stack each row of a full array over its negated copy: row r becomes the
/// 2 x cols array [r; -r]. Columns pair x with -x, so all sums stay zero.
pub fn double_half_rows(h: &Pfa) -> Result<ArraySet, BuildError> {
    let mut arrays = Vec::with_capacity(h.rows());
    for i in 0..h.rows() {
        let mut a = Pfa::empty(h.group().clone(), 2, h.cols());
        for (r, j, e) in h.filled() {
            if r == i {
                a.set(0, j, e.clone())?;
                a.set(1, j, e.neg())?;
            }
        }
        arrays.push(a);
    }
    Ok(ArraySet::new(arrays)?)
}

/// Double a tight c x n Heffter array (one element from each pair {x, -x} of
/// the nonzero residues modulo 2nc+1, zero line sums) into c two-row arrays
/// that together cover all nonzero residues.
pub fn heffter_rows(h: &Pfa) -> Result<Construction, BuildError> {
    let (c, n) = (h.rows(), h.cols());
    let modulus = (2 * n * c + 1) as u64;
    let half_spec = MagicSpec::new(
        Group::cyclic(modulus)
            .map_err(|e| BuildError::Invalid(format!("cyclic group of order {modulus}: {e}")))?,
        c,
        n,
        n,
        c,
        1,
        OmegaSpec::HalfClasses { modulus },
    )
    .zero_sum();
    half_spec.validate().map_err(|e| BuildError::Invalid(e.to_string()))?;
    let report = verify(&ArraySet::singleton(h.clone()), &half_spec);
    if !report.pass() {
        return Err(BuildError::Invalid(format!(
            "the supplied array is not a tight Heffter array: {}",
            report.summary()
        )));
    }
    let spec = nonzero_spec(h.group(), 2, n, n, 2, c)?;
    let set = double_half_rows(h)?;
    finish(set, spec, vec![format!("each of the {c} rows stacked over its negation")])
}

/// Build c tight 2 x n arrays over the nonzero residues modulo 2nc+1, n >= 3.
pub fn nonzero_two_rows(
    n: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let modulus = (2 * n * c + 1) as u64;
    let group = Group::cyclic(modulus)
        .map_err(|e| BuildError::Invalid(format!("cyclic group of order {modulus}: {e}")))?;
    let spec = nonzero_spec(&group, 2, n, n, 2, c)?;
    refuse_impossible(&spec)?;
    if n % 2 == 0 {
        return nonzero_cyclic_even(2, n, n, 2, c, ingredients);
    }
    let ni = n as i64;
    let set = match c {
        1 => {
            if n % 4 == 3 {
                return nonzero_from_signed(2, n, n, 2, ingredients);
            }
            // n = 4l+5: split [1, n] into a positive and a negative part whose
            // sums differ by exactly 2n+1
            let l = (ni - 5) / 4;
            let mut top: Vec<i64> = Vec::with_capacity(n);
            top.push(l + 1);
            top.extend(l + 3..=3 * l + 5);
            for x in (1..=l).chain([l + 2]).chain(3 * l + 6..=4 * l + 5) {
                top.push(-x);
            }
            ArraySet::singleton(mirrored_rows(&top, modulus)?)
        }
        2 => {
            let (first, second): (Vec<i64>, Vec<i64>) = if n == 5 {
                (vec![1, 2, 13, 16, 10], vec![3, 17, 6, 7, 9])
            } else if n % 4 == 3 {
                let l = (ni - 3) / 4;
                let mut first = TRIPLE_LOW.to_vec();
                let mut second = TRIPLE_HIGH.to_vec();
                for j in 0..l {
                    first.extend(window_spread(6 + 4 * j));
                    second.extend(window_spread(ni + 3 + 4 * j));
                }
                (first, second)
            } else {
                let l = (ni - 9) / 4;
                let mut first = NINE_LOW.to_vec();
                let mut second = NINE_HIGH.to_vec();
                for j in 0..l {
                    first.extend(window_spread(18 + 4 * j));
                    second.extend(window_spread(ni + 9 + 4 * j));
                }
                (first, second)
            };
            ArraySet::new(vec![
                mirrored_rows(&first, modulus)?,
                mirrored_rows(&second, modulus)?,
            ])?
        }
        _ => {
            let half = ingredients.half_class_rows(c, n)?;
            double_half_rows(&half.arrays()[0])?
        }
    };
    finish(
        set,
        spec,
        vec![format!("two-row catalogue over the residues modulo {modulus}")],
    )
}

/// One representative from each pair {g, -g} of nonzero elements, taking the
/// lexicographically smaller residue vector.
fn class_representatives(group: &Group) -> Result<Vec<GroupElement>, BuildError> {
    let mut reps = Vec::new();
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    for g in group.elements()? {
        if g.is_zero() || seen.contains(&g) {
            continue;
        }
        seen.insert(g.neg());
        seen.insert(g.clone());
        reps.push(g);
    }
    Ok(reps)
}

/// Widen a two-row array over the nonzero part of G2 to one over the nonzero
/// part of G1 + G2: a zero block keeps the old columns, and one full-coset
/// block per sign class of G1 supplies the rest. Needs odd orders with the
/// largest invariant factor of G1 dividing |G2|, so the coset rows sum to
/// zero.
fn extend_rows(left: &Group, inner: &Pfa) -> Result<Pfa, BuildError> {
    let right = inner.group();
    let lorder = left.order().ok_or_else(|| {
        BuildError::Invalid("the widening step needs finite groups".into())
    })?;
    let rorder = right.order().ok_or_else(|| {
        BuildError::Invalid("the widening step needs finite groups".into())
    })?;
    if lorder < 3 || lorder % 2 == 0 || rorder % 2 == 0 {
        return Err(BuildError::Invalid(format!(
            "the widening step needs odd group orders of at least 3, got {lorder} and {rorder}"
        )));
    }
    let exponent = *left.invariant_factors()?.0.moduli().last().unwrap();
    if rorder % exponent != 0 {
        return Err(BuildError::Invalid(format!(
            "rows of {rorder} equal entries from Z{exponent} cannot sum to zero: \
             {exponent} must divide {rorder}"
        )));
    }
    let right_elements = right.elements()?;
    let mut parts = vec![zero_lift(left, inner)?];
    for g in class_representatives(left)? {
        parts.push(signed_coset_rows(&g, &right_elements)?);
    }
    Ok(juxtapose(&parts)?)
}

/// Widen a verified two-row array over the nonzero part of its group to one
/// over the nonzero part of `left + group`.
pub fn nonzero_extend(left: &Group, inner: &Pfa) -> Result<Construction, BuildError> {
    if inner.rows() != 2 {
        return Err(BuildError::Invalid(format!(
            "the widening step starts from a two-row array, got {} rows",
            inner.rows()
        )));
    }
    let b = inner.cols();
    let inner_spec = nonzero_spec(inner.group(), 2, b, b, 2, 1)?;
    let report = verify(&ArraySet::singleton(inner.clone()), &inner_spec);
    if !report.pass() {
        return Err(BuildError::Invalid(format!(
            "the supplied two-row array does not verify: {}",
            report.summary()
        )));
    }
    let wide = extend_rows(left, inner)?;
    let sum = left.direct_sum(inner.group());
    let width = wide.cols();
    let spec = nonzero_spec(&sum, 2, width, width, 2, 1)?;
    finish(
        ArraySet::singleton(wide),
        spec,
        vec![format!("zero block and {} signed coset blocks over {left}", (left.order().unwrap() - 1) / 2)],
    )
}

fn element_rows(group: &Group, top: &[&[i64]]) -> Result<Pfa, BuildError> {
    let mut a = Pfa::empty(group.clone(), 2, top.len());
    for (j, residues) in top.iter().enumerate() {
        let e = group.element(residues.to_vec())?;
        a.set(1, j, e.neg())?;
        a.set(0, j, e)?;
    }
    Ok(a)
}

fn z3_cubed_rows() -> Result<Pfa, BuildError> {
    let group = Group::new(vec![3, 3, 3])?;
    let top: [&[i64]; 13] = [
        &[0, 0, 1],
        &[0, 1, 0],
        &[0, 1, 1],
        &[0, 2, 1],
        &[1, 0, 0],
        &[1, 0, 1],
        &[1, 0, 2],
        &[1, 1, 0],
        &[1, 1, 1],
        &[2, 2, 1],
        &[2, 1, 0],
        &[2, 1, 2],
        &[1, 2, 2],
    ];
    element_rows(&group, &top)
}

fn z5_squared_rows() -> Result<Pfa, BuildError> {
    let group = Group::new(vec![5, 5])?;
    let top: [&[i64]; 12] = [
        &[0, 1],
        &[0, 2],
        &[1, 0],
        &[1, 1],
        &[1, 2],
        &[1, 3],
        &[4, 1],
        &[2, 0],
        &[2, 1],
        &[3, 3],
        &[3, 2],
        &[2, 4],
    ];
    element_rows(&group, &top)
}

/// Build the tight two-row array over the nonzero part of any odd-order
/// group outside the three exceptional cases (orders 3 and 5, and the
/// two-factor group of order 9), walking the invariant chain from its
/// largest factor down.
pub fn nonzero_two_rows_group(
    group: &Group,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let order = group
        .order()
        .ok_or_else(|| BuildError::Invalid("a finite group is required".into()))?;
    if order % 2 == 0 {
        return Err(BuildError::Invalid(format!(
            "two full rows pair each column to zero, so the order {order} must be odd"
        )));
    }
    let n = ((order - 1) / 2) as usize;
    let spec = nonzero_spec(group, 2, n, n, 2, 1)?;
    refuse_impossible(&spec)?;
    let (chain, to_chain) = group.invariant_factors()?;
    let moduli = chain.moduli().to_vec();
    let (mut current, mut remaining, seed_note) = if moduli.len() == 1 {
        let built = nonzero_two_rows(n, 1, ingredients)?;
        return into_presentation(built, group, &to_chain);
    } else if moduli.iter().all(|&q| q == 3) {
        // two factors of order three were refused above, so at least three
        (z3_cubed_rows()?, moduli.len() - 3, "thirteen-column base over Z3+Z3+Z3")
    } else if moduli.iter().all(|&q| q == 5) {
        (z5_squared_rows()?, moduli.len() - 2, "twelve-column base over Z5+Z5")
    } else {
        // the divisibility chain rules out mixed factors of 3 and 5 only,
        // so the largest factor is at least 7 and the cyclic catalogue applies
        let last = *moduli.last().unwrap();
        let built = nonzero_two_rows(((last - 1) / 2) as usize, 1, ingredients)?;
        (built.set.arrays()[0].clone(), moduli.len() - 1, "cyclic two-row catalogue")
    };
    let mut trace = vec![format!("seed: {seed_note}")];
    while remaining > 0 {
        remaining -= 1;
        let left = Group::cyclic(moduli[remaining])?;
        current = extend_rows(&left, &current)?;
        trace.push(format!("widened by Z{}", moduli[remaining]));
    }
    let chain_spec = nonzero_spec(&chain, 2, n, n, 2, 1)?;
    let built = finish(ArraySet::singleton(current), chain_spec, trace)?;
    into_presentation(built, group, &to_chain)
}

/// Build the full m x n array over the nonzero residues modulo mn+1.
pub fn nonzero_tight(
    m: usize,
    n: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let modulus = (m * n + 1) as u64;
    let group = Group::cyclic(modulus)
        .map_err(|e| BuildError::Invalid(format!("cyclic group of order {modulus}: {e}")))?;
    let spec = nonzero_spec(&group, m, n, n, m, 1)?;
    refuse_impossible(&spec)?;
    if m == 2 {
        return nonzero_two_rows(n, 1, ingredients);
    }
    if n == 2 {
        let built = nonzero_two_rows(m, 1, ingredients)?;
        let set = built.set.transpose();
        let mut trace = built.trace;
        trace.push("transposed into the column layout".into());
        return finish(set, spec, trace);
    }
    if m % 2 == 0 && n % 2 == 0 {
        return nonzero_cyclic_even(m, n, n, m, 1, ingredients);
    }
    // mixed parity with both sides at least 3: mn is even, reduce a
    // zero-sum array over the symmetric range
    nonzero_from_signed(m, n, n, m, ingredients)
}

/// Build c arrays of shape m x n over the nonzero elements of `group`, all
/// line sums zero, routing on the shape and the group presentation.
pub fn nonzero_group(
    group: &Group,
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let spec = nonzero_spec(group, m, n, s, k, c)?;
    refuse_impossible(&spec)?;
    let (chain, to_chain) = group.invariant_factors()?;
    let cyclic = chain.rank() == 1;
    let tight = s == n && k == m;
    let unsupported = || {
        BuildError::Unsupported(format!(
            "no implemented construction covers the nonzero part of {group} at {m}x{n} \
             with fills {s},{k} and {c} arrays"
        ))
    };
    if tight && m == 2 {
        if cyclic {
            let built = nonzero_two_rows(n, c, ingredients)?;
            return into_presentation(built, group, &to_chain);
        }
        if c == 1 {
            return nonzero_two_rows_group(group, ingredients);
        }
        return Err(unsupported());
    }
    if tight && n == 2 {
        let built = if cyclic {
            let inner = nonzero_two_rows(m, c, ingredients)?;
            into_presentation(inner, group, &to_chain)?
        } else if c == 1 {
            nonzero_two_rows_group(group, ingredients)?
        } else {
            return Err(unsupported());
        };
        let set = built.set.transpose();
        let mut trace = built.trace;
        trace.push("transposed into the column layout".into());
        return finish(set, spec, trace);
    }
    if cyclic {
        if tight && c == 1 && (m * n) % 2 == 0 {
            let built = nonzero_tight(m, n, ingredients)?;
            return into_presentation(built, group, &to_chain);
        }
        if s % 2 == 0 && k % 2 == 0 && s * k > 4 {
            let built = nonzero_cyclic_even(m, n, s, k, c, ingredients)?;
            return into_presentation(built, group, &to_chain);
        }
        if c == 1 && (n * k) % 2 == 0 {
            let built = nonzero_from_signed(m, n, s, k, ingredients)?;
            return into_presentation(built, group, &to_chain);
        }
    }
    Err(unsupported())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingredients::Oracle;

    fn residues(a: &Pfa, row: usize) -> Vec<i64> {
        let mut cells: Vec<(usize, i64)> =
            a.filled().filter(|&(i, _, _)| i == row).map(|(_, j, e)| (j, e.residues()[0])).collect();
        cells.sort_unstable();
        cells.into_iter().map(|(_, v)| v).collect()
    }

    #[test]
    fn even_reductions_wrap_rectangles() {
        let oracle = Oracle::with_defaults();
        assert!(nonzero_cyclic_even(2, 4, 4, 2, 1, &oracle).unwrap().report().pass());
        assert!(nonzero_cyclic_even(4, 4, 4, 4, 1, &oracle).unwrap().report().pass());
        assert!(nonzero_cyclic_even(4, 4, 4, 4, 3, &oracle).unwrap().report().pass());
        assert!(matches!(
            nonzero_cyclic_even(2, 2, 2, 2, 1, &oracle),
            Err(BuildError::Infeasible(_))
        ));
    }

    #[test]
    fn two_row_catalogue_covers_all_residues() {
        let oracle = Oracle::with_defaults();

        // lone array, width 1 mod 4: the printed split of [1, 9]
        let built = nonzero_two_rows(9, 1, &oracle).unwrap();
        assert!(built.report().pass());
        let a = &built.set.arrays()[0];
        assert_eq!(residues(a, 0), vec![2, 4, 5, 6, 7, 8, 18, 16, 10]);
        assert_eq!(residues(a, 1), vec![17, 15, 14, 13, 12, 11, 1, 3, 9]);

        // the frozen pair of width five
        let built = nonzero_two_rows(5, 2, &oracle).unwrap();
        assert!(built.report().pass());
        assert_eq!(residues(&built.set.arrays()[0], 0), vec![1, 2, 13, 16, 10]);
        assert_eq!(residues(&built.set.arrays()[0], 1), vec![20, 19, 8, 5, 11]);
        assert_eq!(residues(&built.set.arrays()[1], 0), vec![3, 17, 6, 7, 9]);
        assert_eq!(residues(&built.set.arrays()[1], 1), vec![18, 4, 15, 14, 12]);

        // remaining widths and counts
        for (n, c) in [(3, 1), (5, 1), (7, 1), (13, 1), (4, 2), (3, 2), (7, 2), (9, 2), (13, 2), (6, 3)] {
            let built = nonzero_two_rows(n, c, &oracle).unwrap();
            assert!(built.report().pass(), "width {n}, {c} arrays");
        }

        // doubling a searched Heffter array
        let built = nonzero_two_rows(3, 3, &oracle).unwrap();
        assert!(built.report().pass());

        assert!(matches!(nonzero_two_rows(2, 1, &oracle), Err(BuildError::Infeasible(_))));
    }

    #[test]
    fn widening_prepends_a_factor() {
        let oracle = Oracle::with_defaults();
        let inner = nonzero_two_rows(4, 1, &oracle).unwrap();
        let left = Group::cyclic(3).unwrap();
        let built = nonzero_extend(&left, &inner.set.arrays()[0]).unwrap();
        assert!(built.report().pass());
        assert_eq!(built.set.cols(), 13);
        assert_eq!(built.set.group().moduli(), &[3, 9]);
    }

    #[test]
    fn group_two_rows_walk_the_invariant_chain() {
        let oracle = Oracle::with_defaults();
        let cases: [&[u64]; 6] =
            [&[3, 9], &[3, 3, 3], &[5, 5], &[3, 3, 3, 3], &[5, 5, 5], &[7, 7]];
        for moduli in cases {
            let group = Group::new(moduli.to_vec()).unwrap();
            let built = nonzero_two_rows_group(&group, &oracle).unwrap();
            assert!(built.report().pass(), "{group}");
            assert_eq!(built.set.cols() as u64, (group.order().unwrap() - 1) / 2);
        }
        let z3z3 = Group::new(vec![3, 3]).unwrap();
        assert!(matches!(
            nonzero_two_rows_group(&z3z3, &oracle),
            Err(BuildError::Infeasible(_))
        ));
        // a cyclic presentation reduces to the cyclic catalogue
        let z45 = Group::new(vec![9, 5]).unwrap();
        assert!(nonzero_two_rows_group(&z45, &oracle).unwrap().report().pass());
    }

    #[test]
    fn tight_rectangles_route_by_parity() {
        let oracle = Oracle::with_defaults();
        for (m, n) in [(2, 3), (3, 2), (4, 4), (3, 4), (4, 3), (2, 4)] {
            let built = nonzero_tight(m, n, &oracle).unwrap();
            assert!(built.report().pass(), "{m}x{n}");
        }
        for (m, n) in [(3, 3), (2, 2)] {
            assert!(
                matches!(nonzero_tight(m, n, &oracle), Err(BuildError::Infeasible(_))),
                "{m}x{n}"
            );
        }
    }

    #[test]
    fn router_translates_presentations() {
        let oracle = Oracle::with_defaults();
        // tight two-row over a non-cyclic group
        let g = Group::new(vec![3, 9]).unwrap();
        assert!(nonzero_group(&g, 2, 13, 13, 2, 1, &oracle).unwrap().report().pass());
        assert!(nonzero_group(&g, 13, 2, 2, 13, 1, &oracle).unwrap().report().pass());
        // even fills over a two-factor presentation of a cyclic group
        let g = Group::new(vec![5, 13]).unwrap();
        assert!(nonzero_group(&g, 4, 4, 4, 4, 4, &oracle).unwrap().report().pass());
        // no route for several arrays over a non-cyclic group
        let g = Group::new(vec![3, 15]).unwrap();
        assert!(matches!(
            nonzero_group(&g, 2, 11, 11, 2, 2, &oracle),
            Err(BuildError::Unsupported(_))
        ));
    }
}
