use super::partition::{partitions_of, Partition};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

const MAX_COLUMN_ENTRY: u32 = 20;

/// Limits on exhaustive tableau enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest admissible |λ|.
    pub max_size: u32,
    /// Largest admissible entry bound N.
    pub max_entry: u32,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self { max_size: 14, max_entry: 6 }
    }
}

impl EnumerationBudget {
    fn check_size(&self, size: u64) -> Result<()> {
        if size > self.max_size as u64 {
            return Err(Error::Budget(format!("size {size} exceeds the cap {}", self.max_size)));
        }
        Ok(())
    }

    /// Cap for sums over all shapes of a given size.
    fn check(&self, size: u64, n: u32) -> Result<()> {
        self.check_size(size)?;
        if n > self.max_entry {
            return Err(Error::Budget(format!("entry bound {n} exceeds the cap {}", self.max_entry)));
        }
        Ok(())
    }

    /// d_λ(N): number of semistandard tableaux of shape λ with entries in 1..=N.
    ///
    /// Dynamic programming over columns: each column is a strictly increasing
    /// subset of 1..=N, and adjacent columns must be weakly increasing row-wise.
    /// A single shape is cheap for any N up to the column-set limit, so only
    /// the size cap applies here.
    pub fn ssyt_count(&self, lambda: &Partition, n: u32) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::Domain("entry bound must be at least 1".into()));
        }
        self.check_size(lambda.size())?;
        if n > MAX_COLUMN_ENTRY {
            return Err(Error::Budget(format!("entry bound {n} exceeds the column-set limit {MAX_COLUMN_ENTRY}")));
        }
        if lambda.len() > n as usize {
            return Ok(BigUint::zero());
        }
        let cols = lambda.conjugate();
        let sets: Vec<Vec<u32>> = (0u32..1 << n)
            .map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
            .collect();
        let mut dp: Vec<(usize, BigUint)> = Vec::new();
        for (c, &h) in cols.parts().iter().enumerate() {
            let mut next = Vec::new();
            for (mask, set) in sets.iter().enumerate() {
                if set.len() != h as usize {
                    continue;
                }
                let ways = if c == 0 {
                    BigUint::one()
                } else {
                    dp.iter()
                        .filter(|(pm, _)| sets[*pm].iter().zip(set).all(|(a, b)| a <= b))
                        .fold(BigUint::zero(), |acc, (_, w)| acc + w)
                };
                if !ways.is_zero() {
                    next.push((mask, ways));
                }
            }
            dp = next;
        }
        if cols.is_empty() {
            return Ok(BigUint::one());
        }
        Ok(dp.into_iter().fold(BigUint::zero(), |acc, (_, w)| acc + w))
    }

    /// b(N, j, m, l): Σ d_λ(N) over λ ⊢ 2j+m with m odd columns and at most l rows.
    /// `l = None` means no row bound.
    pub fn b_exact(&self, n: u32, j: u64, m: u64, l: Option<usize>) -> Result<BigUint> {
        let size = 2 * j + m;
        self.check(size, n)?;
        if n == 0 {
            return Ok(if size == 0 { BigUint::one() } else { BigUint::zero() });
        }
        let rows = l.map_or(n as usize, |l| l.min(n as usize));
        let mut total = BigUint::zero();
        for lambda in partitions_of(size as u32, Some(rows)) {
            if lambda.odd_columns() as u64 == m {
                total += self.ssyt_count(&lambda, n)?;
            }
        }
        Ok(total)
    }

    /// P(L_1(N,k) ≤ l) as an exact rational.
    pub fn conditional_cdf_exact(&self, n: u32, k: u64, l: usize) -> Result<BigRational> {
        self.check(k, n)?;
        let mut favourable = BigUint::zero();
        if n > 0 {
            for lambda in partitions_of(k as u32, Some(l.min(n as usize))) {
                favourable += self.ssyt_count(&lambda, n)?;
            }
        } else if k == 0 {
            favourable = BigUint::one();
        }
        let total = path_count(n, k);
        if total.is_zero() {
            return Err(Error::Domain(format!("no configurations with N={n}, k={k}")));
        }
        Ok(BigRational::new(BigInt::from(favourable), BigInt::from(total)))
    }
}

pub fn ssyt_count(lambda: &Partition, n: u32) -> Result<BigUint> {
    EnumerationBudget::default().ssyt_count(lambda, n)
}

pub fn b_exact(n: u32, j: u64, m: u64, l: Option<usize>) -> Result<BigUint> {
    EnumerationBudget::default().b_exact(n, j, m, l)
}

pub fn conditional_cdf_exact(n: u32, k: u64, l: usize) -> Result<BigRational> {
    EnumerationBudget::default().conditional_cdf_exact(n, k, l)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of multisets of size k from n kinds, binom(n+k−1, k).
pub fn multichoose(n: u64, k: u64) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n + k - 1, k)
}

/// b(N, j, m, ∞) = binom(N(N−1)/2 + j − 1, j) · binom(N + m − 1, m).
pub fn b_inf(n: u32, j: u64, m: u64) -> BigUint {
    let n = n as u64;
    multichoose(n * n.saturating_sub(1) / 2, j) * multichoose(n, m)
}

/// Terms a(m) = b(N, (k−m)/2, m, ∞) for every admissible m (k − m even), ascending in m.
pub fn path_count_terms(n: u32, k: u64) -> Vec<(u64, BigUint)> {
    let ms = (k % 2..=k).step_by(2);
    if n < 2 {
        return ms.map(|m| (m, b_inf(n, (k - m) / 2, m))).collect();
    }
    let nn = n as u128;
    let kk = k as u128;
    let mut out = Vec::with_capacity((k / 2 + 1) as usize);
    let mut a = b_inf(n, k / 2, k % 2);
    for m in ms {
        if m > k % 2 {
            // a(m)/a(m−2) = (N+m−1)(N+m−2)(k−m+2) / (m(m−1)(N(N−1)+k−m))
            let mp = (m - 2) as u128;
            let num = (nn + mp + 1) * (nn + mp) * (kk - mp);
            let den = (mp + 2) * (mp + 1) * (nn * (nn - 1) + kk - mp - 2);
            a = a * BigUint::from(num) / BigUint::from(den);
        }
        out.push((m, a.clone()));
    }
    out
}

/// |P(N,k)| = Σ_{2j+m=k} b(N, j, m, ∞).
pub fn path_count(n: u32, k: u64) -> BigUint {
    path_count_terms(n, k).into_iter().map(|(_, a)| a).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Brute force: fill cells in row order with every admissible value.
    fn enumerate_fillings(lambda: &Partition, n: u32) -> u64 {
        let shape: Vec<usize> = lambda.parts().iter().map(|&x| x as usize).collect();
        let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
        let mut rows: Vec<Vec<u32>> = shape.iter().map(|&l| vec![0; l]).collect();
        fn rec(i: usize, cells: &[(usize, usize)], rows: &mut Vec<Vec<u32>>, n: u32) -> u64 {
            if i == cells.len() {
                return 1;
            }
            let (r, c) = cells[i];
            let lo = if c > 0 { rows[r][c - 1] } else { 1 };
            let lo = if r > 0 { lo.max(rows[r - 1][c] + 1) } else { lo };
            let mut total = 0;
            for v in lo..=n {
                rows[r][c] = v;
                total += rec(i + 1, cells, rows, n);
            }
            total
        }
        rec(0, &cells, &mut rows, n)
    }

    #[test]
    fn ssyt_count_examples() {
        assert_eq!(ssyt_count(&p(&[2]), 2).unwrap(), BigUint::from(3u32));
        assert_eq!(ssyt_count(&p(&[1, 1]), 2).unwrap(), BigUint::from(1u32));
        assert_eq!(ssyt_count(&p(&[1]), 7).unwrap(), BigUint::from(7u32));
        assert_eq!(ssyt_count(&Partition::empty(), 3).unwrap(), BigUint::one());
        assert!(matches!(ssyt_count(&p(&[15]), 2), Err(Error::Budget(_))));
        assert!(ssyt_count(&p(&[1]), 7).is_ok());
        assert!(matches!(ssyt_count(&p(&[1]), 21), Err(Error::Budget(_))));
        assert!(matches!(b_exact(7, 0, 1, None), Err(Error::Budget(_))));
    }

    #[test]
    fn ssyt_count_matches_brute_force() {
        let budget = EnumerationBudget { max_size: 14, max_entry: 8 };
        for size in 0..=7 {
            for lambda in partitions_of(size, None) {
                for n in 1..=4 {
                    let dp = budget.ssyt_count(&lambda, n).unwrap();
                    assert_eq!(dp, BigUint::from(enumerate_fillings(&lambda, n)), "{lambda} N={n}");
                }
            }
        }
    }

    #[test]
    fn b_exact_examples() {
        assert_eq!(b_exact(2, 0, 2, Some(1)).unwrap(), BigUint::from(3u32));
        for n in 0..5 {
            for l in 0..4 {
                assert_eq!(b_exact(n, 0, 0, Some(l)).unwrap(), BigUint::one());
            }
        }
        assert_eq!(b_exact(2, 1, 0, None).unwrap(), BigUint::one());
        assert!(matches!(b_exact(2, 8, 0, None), Err(Error::Budget(_))));
    }

    #[test]
    fn b_inf_examples() {
        assert_eq!(b_inf(2, 1, 0), BigUint::one());
        assert_eq!(b_inf(2, 0, 2), BigUint::from(3u32));
        for n in 0..6 {
            assert_eq!(b_inf(n, 0, 0), BigUint::one());
        }
        assert_eq!(b_inf(1, 1, 0), BigUint::zero());
    }

    #[test]
    fn b_exact_grows_to_b_inf() {
        for n in 1..=3 {
            for j in 0..=3u64 {
                for m in 0..=(8 - 2 * j) {
                    let mut prev = BigUint::zero();
                    for l in 0..=(2 * j + m) as usize {
                        let b = b_exact(n, j, m, Some(l)).unwrap();
                        assert!(b >= prev);
                        prev = b;
                    }
                    assert_eq!(prev, b_inf(n, j, m));
                }
            }
        }
    }

    #[test]
    fn path_count_examples() {
        assert_eq!(path_count(2, 2), BigUint::from(4u32));
        for n in 1..8 {
            assert_eq!(path_count(n, 0), BigUint::one());
        }
        let brute: BigUint = partitions_of(14, Some(6)).iter().map(|l| ssyt_count(l, 6).unwrap()).sum();
        assert_eq!(path_count(6, 14), brute);
    }

    #[test]
    fn incremental_terms_match_direct() {
        for n in 0..7u32 {
            for k in 0..25u64 {
                for (m, a) in path_count_terms(n, k) {
                    assert_eq!(a, b_inf(n, (k - m) / 2, m), "N={n} k={k} m={m}");
                }
            }
        }
        let big = path_count_terms(40, 301);
        let (m, a) = &big[big.len() / 2];
        assert_eq!(*a, b_inf(40, (301 - m) / 2, *m));
    }

    #[test]
    fn conditional_cdf_examples() {
        let r = conditional_cdf_exact(2, 2, 1).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 4.into()));
        assert_eq!(conditional_cdf_exact(2, 2, 0).unwrap(), BigRational::from_integer(0.into()));
        for n in 1..=4 {
            for k in 0..=8 {
                assert!(conditional_cdf_exact(n, k, k as usize).unwrap().is_one());
            }
        }
    }
}
