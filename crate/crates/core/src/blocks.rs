//! Small building blocks that the constructions juxtapose and assemble. The
//! integer blocks are built over the integers and only reduced into a cyclic
//! group at assembly time, so their arithmetic identities are exact.

use thiserror::Error;

use crate::array::{juxtapose, ArrayError, Pfa};
use crate::group::{Group, GroupElement, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("block with offset {offset} and size {size} does not fit below modulus {modulus}")]
    Range { offset: i64, size: usize, modulus: i64 },
    #[error("block size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("{0}")]
    Array(#[from] ArrayError),
    #[error("{0}")]
    Group(#[from] GroupError),
}

fn int(v: i64) -> GroupElement {
    Group::integers().scalar(v).unwrap()
}

/// Size x size block on the main diagonal plus the broken superdiagonal.
/// Diagonal entries rise offset+1..offset+size; the off-diagonal holds their
/// modulus-complements one step ahead. Every column sums to `modulus`; rows
/// sum to modulus-1 except the last, which sums to modulus+size-1.
pub fn two_diag_rising(offset: i64, size: usize, modulus: i64) -> Result<Pfa, BlockError> {
    check(offset, size, modulus, size as i64)?;
    let mut a = Pfa::empty(Group::integers(), size, size);
    for i in 0..size {
        a.set(i, i, int(offset + i as i64 + 1))?;
        let j = (i + 1) % size;
        a.set(i, j, int(modulus - (offset + ((i + 1) % size) as i64 + 1)))?;
    }
    Ok(a)
}

/// Mirror image of [`two_diag_rising`]: diagonal entries fall
/// offset+size..offset+1. Columns sum to `modulus`; rows sum to modulus+1
/// except the last, which sums to modulus+1-size.
pub fn two_diag_falling(offset: i64, size: usize, modulus: i64) -> Result<Pfa, BlockError> {
    check(offset, size, modulus, size as i64)?;
    let mut a = Pfa::empty(Group::integers(), size, size);
    for i in 0..size {
        let i1 = i as i64 + 1;
        a.set(i, i, int(offset + size as i64 - i1 + 1))?;
        if i + 1 < size {
            a.set(i, i + 1, int(modulus - (offset + size as i64 - i1)))?;
        }
    }
    a.set(size - 1, 0, int(modulus - (offset + size as i64)))?;
    Ok(a)
}

/// Same shape but stepping through the odd offsets offset+1, offset+3, ...,
/// offset+2*size-1. Columns sum to `modulus`; rows sum to modulus+2 except
/// the last, which sums to modulus+2-2*size.
pub fn two_diag_odd_steps(offset: i64, size: usize, modulus: i64) -> Result<Pfa, BlockError> {
    check(offset, size, modulus, 2 * size as i64 - 1)?;
    let mut a = Pfa::empty(Group::integers(), size, size);
    for i in 0..size {
        let i1 = i as i64 + 1;
        a.set(i, i, int(offset + 2 * size as i64 - 2 * i1 + 1))?;
        if i + 1 < size {
            a.set(i, i + 1, int(modulus - (offset + 2 * size as i64 - 2 * i1 - 1)))?;
        }
    }
    a.set(size - 1, 0, int(modulus - (offset + 2 * size as i64 - 1)))?;
    Ok(a)
}

fn check(offset: i64, size: usize, modulus: i64, span: i64) -> Result<(), BlockError> {
    if size < 2 {
        return Err(BlockError::TooSmall(size));
    }
    // entries [offset+1, offset+span] and their complements must stay inside
    // [1, modulus-1]; the two halves may interleave (assemblies whose values
    // wrap past modulus/2 depend on that), duplicates surface in verification
    if offset < 0 || offset + span >= modulus {
        return Err(BlockError::Range { offset, size, modulus });
    }
    Ok(())
}

/// Rising block next to a falling block: a size x 2*size strip whose rows all
/// sum to 2*modulus and whose columns sum to `modulus`. Uses the integers
/// offset+1..offset+2*size and their complements.
pub fn pair_block(offset: i64, size: usize, modulus: i64) -> Result<Pfa, BlockError> {
    Ok(juxtapose(&[
        two_diag_rising(offset, size, modulus)?,
        two_diag_falling(offset + size as i64, size, modulus)?,
    ])?)
}

/// Two rising blocks and an odd-step block: size x 3*size, rows sum to
/// 3*modulus, columns to `modulus`. Uses offset+1..offset+2*size, the odd
/// numbers from offset+2*size+1 on, and all complements.
pub fn triple_block(offset: i64, size: usize, modulus: i64) -> Result<Pfa, BlockError> {
    let s = size as i64;
    Ok(juxtapose(&[
        two_diag_rising(offset, size, modulus)?,
        two_diag_rising(offset + s, size, modulus)?,
        two_diag_odd_steps(offset + 2 * s, size, modulus)?,
    ])?)
}

/// Odd-step block first, then two rising blocks: the companion of
/// [`triple_block`] covering the complementary residues. Rows sum to
/// 3*modulus, columns to `modulus`.
pub fn triple_block_alt(offset: i64, size: usize, modulus: i64) -> Result<Pfa, BlockError> {
    let s = size as i64;
    Ok(juxtapose(&[
        two_diag_odd_steps(offset + 1, size, modulus)?,
        two_diag_rising(offset + 2 * s, size, modulus)?,
        two_diag_rising(offset + 3 * s, size, modulus)?,
    ])?)
}

/// 3x2 block with an empty middle row, over a group presented as
/// Z_2a + Z_2b + rest:
///
/// ```text
///   ( 2x, 2y, g)  -(2x+1, 2y,   g)
///        .              .
///  -(2x, 2y+1, g)  (2x+1, 2y+1, g)
/// ```
///
/// Taken over all x in [1,a], y in [1,b], g in rest, the four entries
/// partition the whole group.
pub fn corner_quad(
    x: i64,
    y: i64,
    g: &GroupElement,
    split: &Group,
) -> Result<Pfa, BlockError> {
    let make = |dx: i64, dy: i64| -> Result<GroupElement, BlockError> {
        let mut residues = vec![2 * x + dx, 2 * y + dy];
        residues.extend_from_slice(g.residues());
        Ok(split.element(residues)?)
    };
    let mut a = Pfa::empty(split.clone(), 3, 2);
    a.set(0, 0, make(0, 0)?)?;
    a.set(0, 1, make(1, 0)?.neg())?;
    a.set(2, 0, make(0, 1)?.neg())?;
    a.set(2, 1, make(1, 1)?)?;
    Ok(a)
}

/// 2 x len block over Z_modulus: the given values on top, their negatives
/// below. Columns sum to zero by construction.
pub fn mirrored_rows(values: &[i64], modulus: u64) -> Result<Pfa, BlockError> {
    let g = Group::cyclic(modulus)?;
    let mut a = Pfa::empty(g.clone(), 2, values.len());
    for (j, &v) in values.iter().enumerate() {
        let e = g.scalar(v)?;
        a.set(0, j, e.clone())?;
        a.set(1, j, e.neg())?;
    }
    Ok(a)
}

/// Two rows over a direct sum: (g,h) across the given h's, negated below.
pub fn signed_coset_rows(g1: &GroupElement, hs: &[GroupElement]) -> Result<Pfa, BlockError> {
    let sum = g1.group().direct_sum(hs[0].group());
    let mut a = Pfa::empty(sum.clone(), 2, hs.len());
    for (j, h) in hs.iter().enumerate() {
        let mut residues = g1.residues().to_vec();
        residues.extend_from_slice(h.residues());
        let e = sum.element(residues)?;
        a.set(0, j, e.clone())?;
        a.set(1, j, e.neg())?;
    }
    Ok(a)
}

/// Re-embed an array over G into left + G with zero left coordinates.
pub fn zero_lift(left: &Group, v: &Pfa) -> Result<Pfa, BlockError> {
    let sum = left.direct_sum(v.group());
    let mut a = Pfa::empty(sum.clone(), v.rows(), v.cols());
    for (i, j, e) in v.filled() {
        let mut residues = vec![0; left.rank()];
        residues.extend_from_slice(e.residues());
        a.set(i, j, sum.element(residues)?)?;
    }
    Ok(a)
}

/// Sign pattern + - - + on four consecutive integers starting at `start`:
/// sums to zero and uses each magnitude once.
pub fn window_quad(start: i64) -> [i64; 4] {
    [start, -(start + 1), -(start + 2), start + 3]
}

/// Zero-sum triples of small magnitudes used to lead odd-length signed rows.
pub const TRIPLE_LOW: [i64; 3] = [1, 3, -4];
pub const TRIPLE_HIGH: [i64; 3] = [2, 5, -7];

/// Zero-sum nine-term leads for the two-array constructions.
pub const NINE_LOW: [i64; 9] = [1, 2, 3, 4, -5, 12, 13, -14, -16];
pub const NINE_HIGH: [i64; 9] = [6, 7, 8, 9, 10, 11, -15, -17, -19];

/// Window of four magnitudes x, x+2, x+3, x+5 with signs + - - +.
pub fn window_spread(x: i64) -> [i64; 4] {
    [x, -(x + 2), -(x + 3), x + 5]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    fn int_vals(a: &Pfa) -> Vec<i64> {
        let mut v: Vec<i64> = a.entries().iter().map(|e| e.residues()[0]).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn rising_block_frozen_example() {
        // offset 0, size 3, modulus 31
        let a = two_diag_rising(0, 3, 31).unwrap();
        let expect = Pfa::from_int_rows(&[
            vec![Some(1), Some(29), None],
            vec![None, Some(2), Some(28)],
            vec![Some(30), None, Some(3)],
        ])
        .unwrap();
        assert_eq!(a, expect);
    }

    #[test]
    fn falling_block_frozen_example() {
        let a = two_diag_falling(0, 3, 31).unwrap();
        let expect = Pfa::from_int_rows(&[
            vec![Some(3), Some(29), None],
            vec![None, Some(2), Some(30)],
            vec![Some(28), None, Some(1)],
        ])
        .unwrap();
        assert_eq!(a, expect);
    }

    #[test]
    fn odd_steps_block_frozen_example() {
        let a = two_diag_odd_steps(0, 3, 31).unwrap();
        let expect = Pfa::from_int_rows(&[
            vec![Some(5), Some(28), None],
            vec![None, Some(3), Some(30)],
            vec![Some(26), None, Some(1)],
        ])
        .unwrap();
        assert_eq!(a, expect);
    }

    #[test]
    fn random_blocks_meet_their_contracts() {
        let mut rng = SmallRng::seed_from_u64(0x5eed);
        for _ in 0..120 {
            let size = rng.random_range(2..7usize);
            let offset = rng.random_range(0..40i64);
            let modulus = 2 * (offset + 2 * size as i64) + 1 + rng.random_range(0..30i64);

            let u = two_diag_rising(offset, size, modulus).unwrap();
            for j in 0..size {
                assert_eq!(u.col_sum(j).residues()[0], modulus);
            }
            for i in 0..size - 1 {
                assert_eq!(u.row_sum(i).residues()[0], modulus - 1);
            }
            assert_eq!(u.row_sum(size - 1).residues()[0], modulus + size as i64 - 1);
            let mut expect: Vec<i64> = (offset + 1..=offset + size as i64).collect();
            expect.extend((offset + 1..=offset + size as i64).map(|v| modulus - v));
            expect.sort_unstable();
            assert_eq!(int_vals(&u), expect);

            let v = two_diag_falling(offset, size, modulus).unwrap();
            for j in 0..size {
                assert_eq!(v.col_sum(j).residues()[0], modulus);
            }
            for i in 0..size - 1 {
                assert_eq!(v.row_sum(i).residues()[0], modulus + 1);
            }
            assert_eq!(v.row_sum(size - 1).residues()[0], modulus + 1 - size as i64);
            assert_eq!(int_vals(&v), expect);

            let w = two_diag_odd_steps(offset, size, modulus).unwrap();
            for j in 0..size {
                assert_eq!(w.col_sum(j).residues()[0], modulus);
            }
            for i in 0..size - 1 {
                assert_eq!(w.row_sum(i).residues()[0], modulus + 2);
            }
            assert_eq!(
                w.row_sum(size - 1).residues()[0],
                modulus + 2 - 2 * size as i64
            );
            let mut expect_odd: Vec<i64> =
                (0..size as i64).map(|t| offset + 2 * t + 1).collect();
            expect_odd.extend((0..size as i64).map(|t| modulus - (offset + 2 * t + 1)));
            expect_odd.sort_unstable();
            assert_eq!(int_vals(&w), expect_odd);
        }
    }

    #[test]
    fn composite_blocks_have_flat_rows() {
        let mut rng = SmallRng::seed_from_u64(0xb10c);
        for _ in 0..100 {
            let size = rng.random_range(2..6usize);
            let offset = 2 * rng.random_range(0..12i64);
            let modulus = 2 * (offset + 6 * size as i64) + 1 + 2 * rng.random_range(0..20i64);

            let p = pair_block(offset, size, modulus).unwrap();
            for i in 0..size {
                assert_eq!(p.row_sum(i).residues()[0], 2 * modulus);
            }
            for j in 0..2 * size {
                assert_eq!(p.col_sum(j).residues()[0], modulus);
            }

            // consecutive triple blocks: odd steps of the first interleave
            // with even steps of the second into a solid interval
            let t = triple_block(offset, size, modulus).unwrap();
            let ta = triple_block_alt(offset + 2 * size as i64, size, modulus).unwrap();
            for blk in [&t, &ta] {
                for i in 0..size {
                    assert_eq!(blk.row_sum(i).residues()[0], 3 * modulus);
                }
                for j in 0..3 * size {
                    assert_eq!(blk.col_sum(j).residues()[0], modulus);
                }
            }
            let mut all = int_vals(&t);
            all.extend(int_vals(&ta));
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), 12 * size);
            let span = 6 * size as i64;
            let lows: Vec<i64> = all.iter().copied().filter(|&v| v <= offset + span).collect();
            assert_eq!(lows, (offset + 1..=offset + span).collect::<Vec<_>>());
            let highs: Vec<i64> = all.iter().copied().filter(|&v| v > offset + span).collect();
            assert_eq!(
                highs,
                (modulus - offset - span..=modulus - offset - 1).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn range_violations_rejected() {
        assert!(matches!(
            two_diag_rising(5, 4, 9),
            Err(BlockError::Range { .. })
        ));
        assert!(matches!(two_diag_rising(0, 1, 9), Err(BlockError::TooSmall(1))));
        assert!(matches!(
            two_diag_odd_steps(0, 5, 9),
            Err(BlockError::Range { .. })
        ));
        assert!(matches!(
            two_diag_rising(-1, 3, 31),
            Err(BlockError::Range { .. })
        ));
        // wrapping past modulus/2 is allowed as long as values stay in range
        assert!(two_diag_rising(5, 4, 18).is_ok());
    }

    #[test]
    fn corner_quad_layout() {
        let split = Group::new(vec![6, 2, 4]).unwrap();
        let rest = Group::new(vec![4]).unwrap();
        let g = rest.scalar(3).unwrap();
        let b = corner_quad(1, 1, &g, &split).unwrap();
        assert_eq!(b.get(0, 0).unwrap().residues(), &[2, 0, 3]);
        assert_eq!(b.get(0, 1).unwrap().residues(), &[3, 0, 1]); // -(3,0,3)
        assert_eq!(b.get(2, 0).unwrap().residues(), &[4, 1, 1]); // -(2,1,3)
        assert_eq!(b.get(2, 1).unwrap().residues(), &[3, 1, 3]);
        assert_eq!(b.row_fill(1), 0);
        assert_eq!(b.filled_count(), 4);
    }

    #[test]
    fn corner_quads_partition_the_group() {
        let split = Group::new(vec![6, 2, 4]).unwrap();
        let rest = Group::new(vec![4]).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for x in 1..=3i64 {
            for y in 1..=1i64 {
                for g in rest.elements().unwrap() {
                    let b = corner_quad(x, y, &g, &split).unwrap();
                    for e in b.entries() {
                        assert!(seen.insert(e.residues().to_vec()), "duplicate {:?}", e);
                    }
                }
            }
        }
        assert_eq!(seen.len(), 48);
    }

    #[test]
    fn mirrored_rows_cancel_columns() {
        let b = mirrored_rows(&[1, 3, -4], 19).unwrap();
        for j in 0..3 {
            assert!(b.col_sum(j).is_zero());
        }
        assert_eq!(b.get(1, 2).unwrap().residues(), &[4]);
    }

    #[test]
    fn window_sums_vanish() {
        assert_eq!(window_quad(7).iter().sum::<i64>(), 0);
        assert_eq!(window_spread(9).iter().sum::<i64>(), 0);
        assert_eq!(TRIPLE_LOW.iter().sum::<i64>(), 0);
        assert_eq!(TRIPLE_HIGH.iter().sum::<i64>(), 0);
        assert_eq!(NINE_LOW.iter().sum::<i64>(), 0);
        assert_eq!(NINE_HIGH.iter().sum::<i64>(), 0);
    }

    #[test]
    fn coset_rows_and_lift() {
        let g1 = Group::cyclic(3).unwrap();
        let g2 = Group::cyclic(9).unwrap();
        let hs = g2.elements().unwrap();
        let u = signed_coset_rows(&g1.scalar(1).unwrap(), &hs).unwrap();
        assert_eq!((u.rows(), u.cols()), (2, 9));
        assert_eq!(u.get(0, 2).unwrap().residues(), &[1, 2]);
        assert_eq!(u.get(1, 2).unwrap().residues(), &[2, 7]);

        let v = Pfa::from_rows(&g2, &[vec![Some(vec![4])], vec![Some(vec![5])]]).unwrap();
        let lifted = zero_lift(&g1, &v).unwrap();
        assert_eq!(lifted.get(0, 0).unwrap().residues(), &[0, 4]);
        assert_eq!(lifted.group().moduli(), &[3, 9]);
    }
}
