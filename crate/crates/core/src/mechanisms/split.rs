use crate::domain::{eval_query, QuerySpec, SampleMatrix};
use crate::error::{Error, Result};

/// Rows `[start, end)` of block `i` (1-based) when `n` rows are cut into
/// `k_max` blocks of `⌊n/k_max⌋` rows.
pub fn split_block(n: usize, i: usize, k_max: usize) -> Result<(usize, usize)> {
    if k_max == 0 || n < k_max {
        return Err(Error::InvalidParameter(format!("cannot cut {n} rows into {k_max} blocks")));
    }
    if i == 0 {
        return Err(Error::InvalidParameter("block index starts at 1".into()));
    }
    if i > k_max {
        return Err(Error::BudgetExhausted { index: i, max: k_max });
    }
    let size = n / k_max;
    Ok(((i - 1) * size, i * size))
}

/// Empirical mean of `q` on the `i`-th fresh block of the data.
pub fn sample_split_answer(x: &SampleMatrix, q: &QuerySpec, i: usize, k_max: usize) -> Result<f64> {
    let (start, end) = split_block(x.n(), i, k_max)?;
    eval_query(q, &x.row_range(start, end)?)
}
