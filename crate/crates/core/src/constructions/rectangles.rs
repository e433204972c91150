//! Integer rectangles: sets of arrays over [1, nkc] with constant line sums,
//! and single zero-sum arrays over symmetric ranges.

use crate::array::{juxtapose, ArraySet, Pfa};
use crate::blocks::{pair_block, triple_block, triple_block_alt};
use crate::group::Group;
use crate::ingredients::IngredientProvider;
use crate::verify::{MagicSpec, OmegaSpec};

use super::{feasibility, finish, gcd, int, BuildError, Construction, FeasibilityStatus};

fn interval_spec(m: usize, n: usize, s: usize, k: usize, c: usize) -> Result<MagicSpec, BuildError> {
    let spec = MagicSpec::new(
        Group::integers(),
        m,
        n,
        s,
        k,
        c,
        OmegaSpec::IntegerInterval { upper: (n * k * c) as i64 },
    );
    spec.validate().map_err(|e| BuildError::Invalid(e.to_string()))?;
    Ok(spec)
}

fn symmetric_spec(m: usize, n: usize, s: usize, k: usize) -> Result<MagicSpec, BuildError> {
    let total = n * k;
    let omega = if total % 2 == 0 {
        OmegaSpec::SignedRange { half: (total / 2) as i64, include_zero: false }
    } else {
        OmegaSpec::SignedRange { half: ((total - 1) / 2) as i64, include_zero: true }
    };
    let spec = MagicSpec::new(Group::integers(), m, n, s, k, 1, omega).zero_sum();
    spec.validate().map_err(|e| BuildError::Invalid(e.to_string()))?;
    Ok(spec)
}

/// Build c arrays of shape m x n, each row holding s = 2n/m values and each
/// column two, jointly covering [1, 2nc] with row sums s(2nc+1)/2 and column
/// sums 2nc+1. Needs s even and at least 4.
pub fn band_rectangle_set(m: usize, n: usize, c: usize) -> Result<Construction, BuildError> {
    if m < 2 || (2 * n) % m != 0 {
        return Err(BuildError::Invalid(format!(
            "a two-per-column rectangle needs the row fill 2*{n}/{m} to be an integer"
        )));
    }
    let spec = interval_spec(m, n, 2 * n / m, 2, c)?;
    let verdict = feasibility(&spec);
    if verdict.status == FeasibilityStatus::NotExists {
        return Err(BuildError::Infeasible(verdict.reason));
    }
    let set = band_rows(m, n, c)?;
    finish(
        set,
        spec,
        vec![format!(
            "each array is a band of {m}x{m} strips whose columns sum to {}",
            2 * n * c + 1
        )],
    )
}

/// The band assembly behind [`band_rectangle_set`]; callers guarantee m >= 2,
/// m | n and n/m >= 2. Strips are m x 2m pairs and m x 3m triples whose
/// columns each sum to the modulus 2nc+1; consecutive strips walk the value
/// range so the c arrays cover [1, 2nc] exactly.
fn band_rows(m: usize, n: usize, c: usize) -> Result<ArraySet, BuildError> {
    let half = n / m;
    let modulus = (2 * n * c + 1) as i64;
    let mi = m as i64;
    let mut arrays = Vec::with_capacity(c);
    if half % 2 == 0 {
        let t = (half / 2) as i64;
        for l in 0..c as i64 {
            let mut strips = Vec::with_capacity(t as usize);
            for u in 0..t {
                strips.push(pair_block(2 * mi * (t * l + u), m, modulus)?);
            }
            arrays.push(juxtapose(&strips)?);
        }
    } else {
        // odd strip count: a pair of consecutive arrays shares the window
        // [2nl+1, 2n(l+1)], the triples interleaving odd and even values
        // across the seam; with c odd the final lone array closes up through
        // the midpoint of the range instead.
        let t = ((half - 1) / 2) as i64;
        for idx in 0..c {
            let base = 2 * (n as i64) * (idx / 2) as i64;
            let mut strips = Vec::new();
            if idx % 2 == 0 {
                for u in 0..t - 1 {
                    strips.push(pair_block(base + 2 * mi * u, m, modulus)?);
                }
                strips.push(triple_block(base + 2 * mi * (t - 1), m, modulus)?);
            } else {
                strips.push(triple_block_alt(base + 2 * mi * t, m, modulus)?);
                for u in t + 2..=2 * t {
                    strips.push(pair_block(base + 2 * mi * u, m, modulus)?);
                }
            }
            arrays.push(juxtapose(&strips)?);
        }
    }
    Ok(ArraySet::new(arrays)?)
}

/// Build c arrays of shape m x n with fills s, k and an odd total cell count,
/// covering [1, nkc]. Routes on d = gcd(s, k): a shared factor of at least 3
/// folds a diagonally supported square; otherwise the shape is a block
/// diagonal of m/k tight rectangles.
pub fn odd_rectangle_set(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let spec = interval_spec(m, n, s, k, c)?;
    if (n * k * c) % 2 == 0 {
        return Err(BuildError::Invalid(
            "this assembly applies only to odd symbol counts".into(),
        ));
    }
    let (set, trace) = odd_assembly(m, n, s, k, c, ingredients)?;
    finish(set, spec, trace)
}

fn odd_assembly(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<(ArraySet, Vec<String>), BuildError> {
    let d = gcd(s, k);
    if d >= 3 {
        let side = n * k / d;
        let square = ingredients.diagonal_rectangle_set(side, d, c)?;
        let set = square.fold_to_rect(m, n)?;
        return Ok((
            set,
            vec![format!(
                "{side}x{side} arrays on {d} consecutive diagonals, folded onto {m}x{n}"
            )],
        ));
    }
    // coprime fills: m/k = n/s is an odd integer r and the array is a block
    // diagonal of r tight k x s rectangles
    let r = m / k;
    if r == 1 {
        let set = ingredients.tight_rectangle_set(m, n, c)?;
        return Ok((set, vec![format!("full {m}x{n} rectangles taken as supplied")]));
    }
    let members = ingredients.tight_rectangle_set(k, s, r * c)?;
    let mut arrays = Vec::with_capacity(c);
    for t in 0..c {
        let mut big = Pfa::empty(Group::integers(), m, n);
        for u in 0..r {
            let small = &members.arrays()[t * r + u];
            for (i, j, e) in small.filled() {
                big.set(k * u + i, s * u + j, e.clone())?;
            }
        }
        arrays.push(big);
    }
    Ok((
        ArraySet::new(arrays)?,
        vec![format!(
            "each array places {r} full {k}x{s} rectangles down the diagonal"
        )],
    ))
}

/// Build c arrays of shape m x n with even fills s, k (sk > 4), covering
/// [1, nkc]: one sign-balanced zero-sum array over +-[1, nk/2] is shifted so
/// its positive and negative halves land on disjoint windows of the range.
pub fn even_rectangle_set(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let spec = interval_spec(m, n, s, k, c)?;
    if s % 2 != 0 || k % 2 != 0 {
        return Err(BuildError::Invalid(
            "this assembly applies only to even fill counts".into(),
        ));
    }
    let verdict = feasibility(&spec);
    if verdict.status == FeasibilityStatus::NotExists {
        return Err(BuildError::Infeasible(verdict.reason));
    }
    let (set, trace) = even_assembly(m, n, s, k, c, ingredients)?;
    finish(set, spec, trace)
}

fn even_assembly(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<(ArraySet, Vec<String>), BuildError> {
    let balanced = ingredients.shiftable_signed(m, n, s, k)?;
    let seed = &balanced.arrays()[0];
    let h = (n * k / 2) as i64;
    let ints = Group::integers();
    let mut arrays = Vec::with_capacity(c);
    for l in 1..=c as i64 {
        // positives climb into the top half of [1, nkc], negatives into the
        // bottom half; each row keeps s/2 of each sign, so its sum becomes
        // (s/2)(nkc+1) regardless of l
        let up = h * (2 * c as i64 - l);
        let down = h * l + 1;
        let shifted = seed.map_entries(&ints, |e| {
            let v = e.residues()[0];
            int(if v > 0 { v + up } else { v + down })
        })?;
        arrays.push(shifted);
    }
    Ok((
        ArraySet::new(arrays)?,
        vec![format!(
            "layered shifts of one sign-balanced zero-sum array over +-[1, {h}]"
        )],
    ))
}

/// Build c arrays of shape m x n with s values per row and k per column that
/// together cover [1, nkc], every row summing to s(nkc+1)/2 and every column
/// to k(nkc+1)/2. Fails with a proof sketch when no such set exists.
pub fn magic_rectangle_set(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    c: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let spec = interval_spec(m, n, s, k, c)?;
    let verdict = feasibility(&spec);
    if verdict.status == FeasibilityStatus::NotExists {
        return Err(BuildError::Infeasible(verdict.reason));
    }
    if k == 2 {
        return band_rectangle_set(m, n, c);
    }
    if s == 2 {
        let built = band_rectangle_set(n, m, c)?;
        let set = built.set.transpose();
        let mut trace = built.trace;
        trace.push("transposed from the two-per-column layout".into());
        return finish(set, spec, trace);
    }
    let (set, trace) = if (n * k * c) % 2 == 1 {
        odd_assembly(m, n, s, k, c, ingredients)?
    } else {
        even_assembly(m, n, s, k, c, ingredients)?
    };
    finish(set, spec, trace)
}

/// Build a zero-sum m x n array over the symmetric range with nk odd (so the
/// range is [-(nk-1)/2, (nk-1)/2] including zero) by shifting an integer
/// rectangle down by its line mean.
pub fn signed_magic_array_odd(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    let spec = symmetric_spec(m, n, s, k)?;
    if (n * k) % 2 == 0 {
        return Err(BuildError::Invalid(
            "this shift applies only to odd cell counts".into(),
        ));
    }
    let inner = magic_rectangle_set(m, n, s, k, 1, ingredients)?;
    let delta = int(-(((n * k + 1) / 2) as i64));
    let set = inner.set.map(|a| a.shift_entries(&delta))?;
    let mut trace = inner.trace;
    trace.push(format!(
        "all entries shifted by -{} to centre the range on zero",
        (n * k + 1) / 2
    ));
    finish(set, spec, trace)
}

/// Build a zero-sum m x n array over the symmetric range (no zero when nk is
/// even, zero included when nk is odd).
pub fn signed_magic_array(
    m: usize,
    n: usize,
    s: usize,
    k: usize,
    ingredients: &dyn IngredientProvider,
) -> Result<Construction, BuildError> {
    if (n * k) % 2 == 1 {
        return signed_magic_array_odd(m, n, s, k, ingredients);
    }
    let spec = symmetric_spec(m, n, s, k)?;
    let set = ingredients.signed_array(m, n, s, k)?;
    finish(set, spec, vec!["zero-sum array taken as supplied".into()])
}
