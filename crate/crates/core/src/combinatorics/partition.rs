use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer partition stored as a weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// |λ|
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// ℓ(λ): number of rows, equal to the length of the first column.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width).map(|c| self.parts.iter().take_while(|&&p| p >= c).count() as u32).collect();
        Partition { parts }
    }

    /// f(λ): number of odd parts.
    pub fn odd_rows(&self) -> usize {
        self.parts.iter().filter(|&&p| p % 2 == 1).count()
    }

    /// Number of odd columns, f(λ').
    pub fn odd_columns(&self) -> usize {
        // Columns c with λ_{i+1} < c ≤ λ_i have length i+1.
        let mut odd = 0usize;
        for (i, &p) in self.parts.iter().enumerate() {
            let next = self.parts.get(i + 1).copied().unwrap_or(0);
            if i % 2 == 0 {
                odd += (p - next) as usize;
            }
        }
        odd
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` with at most `max_rows` rows, in reverse lexicographic order.
pub fn partitions_of(n: u32, max_rows: Option<usize>) -> Vec<Partition> {
    fn rec(rest: u32, max_part: u32, rows_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_rows.unwrap_or(usize::MAX), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
        assert_eq!(p(&[4, 2, 1]).conjugate(), p(&[3, 2, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn odd_rows_examples() {
        assert_eq!(p(&[2, 2]).odd_rows(), 0);
        assert_eq!(p(&[3, 1]).odd_rows(), 2);
        assert_eq!(p(&[4, 3, 3, 1]).odd_rows(), 3);
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn partition_counts() {
        // p(n) for n = 0..10
        let expect = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(partitions_of(n as u32, None).len(), e);
        }
        assert!(partitions_of(8, Some(2)).iter().all(|l| l.len() <= 2));
        assert_eq!(partitions_of(8, Some(2)).len(), 5);
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(mut v in proptest::collection::vec(1u32..12, 0..10)) {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let l = p(&v);
            let c = l.conjugate();
            prop_assert_eq!(c.conjugate(), l.clone());
            prop_assert_eq!(c.size(), l.size());
            prop_assert_eq!(c.parts().first().copied().unwrap_or(0) as usize, l.len());
            prop_assert_eq!(l.odd_columns(), c.odd_rows());
        }
    }
}
