//! Exact domino tiling counts of rectangular boards.
//!
//! The main counter is a broken-profile DP: cells are visited in row-major
//! order along the longer side, and a bitmask of width `min(rows, cols)`
//! records which frontier cells are already covered. A column transfer matrix
//! is kept alongside as an independent second counter.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padics::isqrt_exact;

/// Default limit on the shorter board side (the DP holds `2^width` counters).
pub const DEFAULT_MAX_WIDTH: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoardDims {
    pub rows: usize,
    pub cols: usize,
}

impl BoardDims {
    pub fn new(rows: usize, cols: usize) -> Self {
        BoardDims { rows, cols }
    }

    /// The `2n x 2n` square.
    pub fn square(n: usize) -> Self {
        BoardDims::new(2 * n, 2 * n)
    }

    fn width(self) -> usize {
        self.rows.min(self.cols)
    }

    fn length(self) -> usize {
        self.rows.max(self.cols)
    }
}

/// A `2n x 2n` count written as `2^two_exponent * odd_root^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingFactorization {
    pub n: usize,
    pub count: BigUint,
    pub two_exponent: u64,
    pub odd_root: BigUint,
}

fn check_width(dims: BoardDims, max_width: usize) -> Result<()> {
    if dims.width() > max_width {
        return Err(Error::BudgetExceeded {
            what: "board width",
            requested: dims.width() as u64,
            limit: max_width as u64,
        });
    }
    Ok(())
}

pub fn count_tilings(dims: BoardDims) -> Result<BigUint> {
    count_tilings_with_limit(dims, DEFAULT_MAX_WIDTH)
}

/// Broken-profile count with an explicit limit on the shorter side.
pub fn count_tilings_with_limit(dims: BoardDims, max_width: usize) -> Result<BigUint> {
    if dims.rows == 0 || dims.cols == 0 {
        return Ok(BigUint::one());
    }
    if (dims.rows * dims.cols) % 2 == 1 {
        return Ok(BigUint::zero());
    }
    check_width(dims, max_width)?;

    let w = dims.width();
    let len = dims.length();
    let states = 1usize << w;
    let mut cur = vec![BigUint::zero(); states];
    let mut next = vec![BigUint::zero(); states];
    cur[0] = BigUint::one();

    // Bit c of the mask: the cell in column c of the frontier is already
    // covered. Bits below the current column refer to the next row.
    for r in 0..len {
        let last_row = r + 1 == len;
        for c in 0..w {
            let bit = 1usize << c;
            let right = if c + 1 < w { 1usize << (c + 1) } else { 0 };
            for x in next.iter_mut() {
                x.set_zero();
            }
            for (mask, ways) in cur.iter().enumerate() {
                if ways.is_zero() {
                    continue;
                }
                if mask & bit != 0 {
                    next[mask & !bit] += ways;
                    continue;
                }
                if !last_row {
                    next[mask | bit] += ways;
                }
                if right != 0 && mask & right == 0 {
                    next[mask | right] += ways;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
    }
    Ok(std::mem::take(&mut cur[0]))
}

/// Column-by-column transfer-matrix count; independent of the broken-profile
/// DP and used to cross-check it.
pub fn count_tilings_transfer(dims: BoardDims, max_width: usize) -> Result<BigUint> {
    if dims.rows == 0 || dims.cols == 0 {
        return Ok(BigUint::one());
    }
    if (dims.rows * dims.cols) % 2 == 1 {
        return Ok(BigUint::zero());
    }
    check_width(dims, max_width)?;

    let h = dims.width();
    let len = dims.length();
    let states = 1usize << h;

    // successors[m]: masks of horizontal dominoes sticking into the next
    // column when the current column arrives with cells `m` pre-filled.
    let successors: Vec<Vec<usize>> = (0..states)
        .map(|m| {
            let mut out = Vec::new();
            fill_column(m, 0, 0, h, &mut out);
            out
        })
        .collect();

    let mut cur = vec![BigUint::zero(); states];
    cur[0] = BigUint::one();
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); states];
        for (m, ways) in cur.iter().enumerate() {
            if ways.is_zero() {
                continue;
            }
            for &s in &successors[m] {
                next[s] += ways;
            }
        }
        cur = next;
    }
    Ok(std::mem::take(&mut cur[0]))
}

fn fill_column(filled: usize, row: usize, out_mask: usize, h: usize, out: &mut Vec<usize>) {
    if row == h {
        out.push(out_mask);
        return;
    }
    let bit = 1 << row;
    if filled & bit != 0 {
        fill_column(filled, row + 1, out_mask, h, out);
        return;
    }
    // horizontal domino into the next column
    fill_column(filled, row + 1, out_mask | bit, h, out);
    // vertical domino covering this row and the next
    if row + 1 < h && filled & (bit << 1) == 0 {
        fill_column(filled, row + 2, out_mask, h, out);
    }
}

/// Counts the `2n x 2n` square and splits off `2^v * f^2`.
pub fn factor_square_count(n: usize) -> Result<TilingFactorization> {
    factor_square_count_with_limit(n, DEFAULT_MAX_WIDTH)
}

pub fn factor_square_count_with_limit(n: usize, max_width: usize) -> Result<TilingFactorization> {
    let count = count_tilings_with_limit(BoardDims::square(n), max_width)?;
    factor_count(n, count)
}

pub(crate) fn factor_count(n: usize, count: BigUint) -> Result<TilingFactorization> {
    let two_exponent = count.trailing_zeros().ok_or_else(|| {
        Error::identity("tiling count is positive", format!("2n x 2n count is 0 for n={n}"))
    })?;
    let odd = &count >> two_exponent;
    let odd_root = isqrt_exact(&odd).ok_or_else(|| Error::NotPerfectSquare(odd.to_string()))?;
    Ok(TilingFactorization {
        n,
        count,
        two_exponent,
        odd_root,
    })
}

impl TilingFactorization {
    /// `2^two_exponent * odd_root^2`, which must equal `count`.
    pub fn reassemble(&self) -> BigUint {
        (&self.odd_root * &self.odd_root) << self.two_exponent
    }

    pub fn odd_root_signed(&self) -> BigInt {
        BigInt::from(self.odd_root.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(r: usize, c: usize) -> BigUint {
        count_tilings(BoardDims::new(r, c)).unwrap()
    }

    /// Backtracking over perfect matchings of the grid graph.
    fn enumerate(rows: usize, cols: usize) -> u64 {
        fn go(covered: &mut Vec<bool>, rows: usize, cols: usize) -> u64 {
            let Some(p) = covered.iter().position(|&x| !x) else {
                return 1;
            };
            let (r, c) = (p / cols, p % cols);
            let mut total = 0;
            covered[p] = true;
            if c + 1 < cols && !covered[p + 1] {
                covered[p + 1] = true;
                total += go(covered, rows, cols);
                covered[p + 1] = false;
            }
            if r + 1 < rows && !covered[p + cols] {
                covered[p + cols] = true;
                total += go(covered, rows, cols);
                covered[p + cols] = false;
            }
            covered[p] = false;
            total
        }
        go(&mut vec![false; rows * cols], rows, cols)
    }

    #[test]
    fn small_boards() {
        assert_eq!(count(2, 2), BigUint::from(2u32));
        assert_eq!(count(3, 3), BigUint::zero());
        assert_eq!(count(0, 0), BigUint::one());
        assert_eq!(count(1, 2), BigUint::one());
        assert_eq!(count(1, 3), BigUint::zero());
    }

    #[test]
    fn four_by_four_matches_enumeration() {
        assert_eq!(enumerate(4, 4), 36);
        assert_eq!(count(4, 4), BigUint::from(36u32));
    }

    #[test]
    fn dp_matches_enumeration_on_small_rectangles() {
        for r in 1..=6 {
            for c in 1..=6 {
                assert_eq!(count(r, c), BigUint::from(enumerate(r, c)), "{r}x{c}");
            }
        }
    }

    #[test]
    fn chessboard() {
        assert_eq!(count(8, 8), BigUint::from(12_988_816u64));
        assert_eq!(
            count_tilings_transfer(BoardDims::new(8, 8), 24).unwrap(),
            BigUint::from(12_988_816u64)
        );
    }

    #[test]
    fn factorizations() {
        let f0 = factor_square_count(0).unwrap();
        assert_eq!((f0.count, f0.two_exponent, f0.odd_root), (1u32.into(), 0, 1u32.into()));
        let f3 = factor_square_count(3).unwrap();
        assert_eq!((f3.count, f3.two_exponent, f3.odd_root), (6728u32.into(), 3, 29u32.into()));
        let f4 = factor_square_count(4).unwrap();
        assert_eq!(
            (f4.count.clone(), f4.two_exponent, f4.odd_root.clone()),
            (12_988_816u32.into(), 4, 901u32.into())
        );
        assert_eq!(f4.reassemble(), f4.count);
    }

    #[test]
    fn budget_is_enforced() {
        let err = count_tilings_with_limit(BoardDims::new(10, 30), 8).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { requested: 10, limit: 8, .. }));
        // Odd area short-circuits before the budget check.
        assert_eq!(count_tilings_with_limit(BoardDims::new(9, 31), 8).unwrap(), BigUint::zero());
    }

    #[test]
    fn non_square_odd_part_is_reported() {
        assert!(matches!(
            factor_count(1, BigUint::from(12u32)),
            Err(Error::NotPerfectSquare(s)) if s == "3"
        ));
    }
}
