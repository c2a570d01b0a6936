//! `c_k(n)`: ordered representations of `n` as a sum of `k` squares of
//! positive integers, i.e. the coefficients of `(Σ_{m≥1} q^{m²})^k`.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

/// Yields the rows `c_1, c_2, ...` (each of length `order`) by repeated
/// convolution with the positive-squares series. Only the current row is
/// held in memory.
#[derive(Clone, Debug)]
pub struct SquareRows {
    order: usize,
    k: usize,
    row: Vec<BigUint>,
}

impl SquareRows {
    pub fn new(order: usize) -> Self {
        // c_0 = [n == 0]
        let mut row = vec![BigUint::zero(); order];
        if order > 0 {
            row[0] = BigUint::from(1u32);
        }
        SquareRows { order, k: 0, row }
    }
}

impl SquareRows {
    /// Index `k` of the row most recently produced (0 before the first call).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Step to the next row and borrow it.
    pub fn advance(&mut self) -> &[BigUint] {
        let t = self.order;
        let prev = &self.row;
        let mut next = vec![BigUint::zero(); t];
        // c_{k+1}(n) = Σ_{m≥1} c_k(n - m²); c_k vanishes below n = k.
        for n in (self.k + 1)..t {
            let mut acc = BigUint::zero();
            let mut m = 1usize;
            while m * m + self.k <= n {
                let p = &prev[n - m * m];
                if !p.is_zero() {
                    acc += p;
                }
                m += 1;
            }
            next[n] = acc;
        }
        self.k += 1;
        self.row = next;
        &self.row
    }
}

impl Iterator for SquareRows {
    type Item = Vec<BigUint>;

    fn next(&mut self) -> Option<Vec<BigUint>> {
        Some(self.advance().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquaresTable {
    order: usize,
    rows: Vec<Vec<BigUint>>,
}

pub fn squares_table(k_max: usize, order: usize) -> Result<SquaresTable> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if order == 0 {
        return Err(Error::EmptyOrder);
    }
    Ok(SquaresTable {
        order,
        rows: SquareRows::new(order).take(k_max).collect(),
    })
}

impl SquaresTable {
    pub fn k_max(&self) -> usize {
        self.rows.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Row `k` (1-based), indexed by `n`.
    pub fn row(&self, k: usize) -> Option<&[BigUint]> {
        k.checked_sub(1).and_then(|i| self.rows.get(i)).map(Vec::as_slice)
    }

    /// `c_k(n)`, or `None` outside the table.
    pub fn get(&self, k: usize, n: usize) -> Option<&BigUint> {
        self.row(k).and_then(|r| r.get(n))
    }

    pub(crate) fn require(&self, k: usize, n: usize) -> Result<&BigUint> {
        if k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "squares table has k_max={}, need k={k}",
                self.k_max()
            )));
        }
        self.get(k, n).ok_or(Error::TableTooShort {
            required: n + 1,
            available: self.order,
        })
    }

    /// CSV with header `n,c1,...,ck`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = vec!["n".to_string()];
        header.extend((1..=self.k_max()).map(|k| format!("c{k}")));
        w.write_record(&header)?;
        for n in 0..self.order {
            let mut rec = vec![n.to_string()];
            rec.extend(self.rows.iter().map(|r| r[n].to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadrupleReport {
    pub order: usize,
    pub pass: bool,
    /// `(k, n)` of the first failing equality `c_k(n) = c_k(4n)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(usize, usize)>,
}

/// Checks `c_1(n) = c_1(4n)` and `c_2(n) = c_2(4n)` for `1 <= n < order`.
pub fn c1_c2_quadruple_check(order: usize) -> Result<QuadrupleReport> {
    if order <= 1 {
        return Ok(QuadrupleReport {
            order,
            pass: true,
            first_failure: None,
        });
    }
    let table = squares_table(2, 4 * (order - 1) + 1)?;
    let first_failure = (1..order)
        .flat_map(|n| [(1usize, n), (2usize, n)])
        .find(|&(k, n)| table.get(k, n) != table.get(k, 4 * n));
    Ok(QuadrupleReport {
        order,
        pass: first_failure.is_none(),
        first_failure,
    })
}
