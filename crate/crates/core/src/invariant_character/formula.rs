use num::{BigUint, One, Zero};

/// `p_n(m)`: partitions of `m` into at most `n` parts, zero for `m <= 0`.
pub fn partitions_at_most(n: u32, m: i64) -> BigUint {
    if m <= 0 || n == 0 {
        return BigUint::zero();
    }
    let m = m as usize;
    // partitions into parts of size at most n (conjugate count)
    let mut ways = vec![BigUint::zero(); m + 1];
    ways[0] = BigUint::one();
    for part in 1..=(n as usize).min(m) {
        for total in part..=m {
            let add = ways[total - part].clone();
            ways[total] += add;
        }
    }
    ways[m].clone()
}

fn binomial(n: &BigUint, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        if *n < BigUint::from(i + 1) {
            return BigUint::zero();
        }
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn multichoose(n: &BigUint, k: u32) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    binomial(&(n + BigUint::from(k - 1)), k)
}

/// Multiplicity vectors `(n_1, ..., n_{r-1})` with `sum k n_k = r`.
pub fn weighted_compositions(r: u32) -> Vec<Vec<u32>> {
    fn go(part: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if part == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for count in 0..=left / part {
            cur[part as usize - 1] = count;
            go(part - 1, left - count * part, cur, out);
        }
        cur[part as usize - 1] = 0;
    }
    if r < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; r as usize - 1];
    go(r - 1, r, &mut cur, &mut out);
    out
}

/// How the decomposable part of the recursion counts products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductCount {
    /// `binom(len V^k, n_k)`
    Binomial,
    /// `binom(len V^k + n_k - 1, n_k)`, products with repetition
    Multichoose,
}

/// The recursive length formula for `r = 1..=r_max`, index `r - 1`:
/// `4r + 2 p_N(r) + 2 p_N(r - N) + sum prod count(len V^k, n_k)`.
pub fn formula_table(n: u32, r_max: u32, mode: ProductCount) -> Vec<BigUint> {
    let mut lengths: Vec<BigUint> = Vec::new();
    for r in 1..=r_max {
        let mut total = BigUint::from(4 * r)
            + partitions_at_most(n, r as i64) * 2u32
            + partitions_at_most(n, r as i64 - n as i64) * 2u32;
        for comp in weighted_compositions(r) {
            let mut term = BigUint::one();
            for (k, &nk) in comp.iter().enumerate() {
                term *= match mode {
                    ProductCount::Binomial => binomial(&lengths[k], nk),
                    ProductCount::Multichoose => multichoose(&lengths[k], nk),
                };
            }
            total += term;
        }
        lengths.push(total);
    }
    lengths
}

pub fn formula_length(n: u32, r: u32) -> BigUint {
    formula_table(n, r, ProductCount::Binomial)
        .pop()
        .unwrap_or_default()
}

pub fn formula_length_multichoose(n: u32, r: u32) -> BigUint {
    formula_table(n, r, ProductCount::Multichoose)
        .pop()
        .unwrap_or_default()
}
