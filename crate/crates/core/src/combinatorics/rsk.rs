use super::partition::Partition;
use super::tableau::Ssyt;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Two-row array (i_r, j_r) in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenPerm {
    pairs: Vec<(u32, u32)>,
}

impl GenPerm {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("generalized permutation is not in lexicographic order".into()));
        }
        Ok(Self { pairs })
    }

    pub fn from_rows(top: &[u32], bottom: &[u32]) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::Domain("rows of a generalized permutation differ in length".into()));
        }
        Self::new(top.iter().copied().zip(bottom.iter().copied()).collect())
    }

    /// Generalized permutation with a_{ik} copies of (i, k), indices 1-based.
    pub fn from_matrix(rows: usize, cols: usize, a: &[u32]) -> Self {
        let mut pairs = Vec::new();
        for i in 0..rows {
            for k in 0..cols {
                pairs.extend(std::iter::repeat_n((i as u32 + 1, k as u32 + 1), a[i * cols + k] as usize));
            }
        }
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn bottom(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(_, j)| j).collect()
    }
}

/// Symmetric N×N matrix of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymConfig {
    dim: usize,
    entries: Vec<u32>,
}

impl SymConfig {
    pub fn new(dim: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Domain(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        for i in 0..dim {
            for k in 0..i {
                if entries[i * dim + k] != entries[k * dim + i] {
                    return Err(Error::Domain(format!("matrix is not symmetric at ({i},{k})")));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![0; dim * dim] }
    }

    /// Build from diagonal occupancies and strict-upper occupancies in row-major order.
    pub fn from_parts(dim: usize, diag: &[u32], upper: &[u32]) -> Result<Self> {
        if diag.len() != dim || upper.len() != dim * dim.saturating_sub(1) / 2 {
            return Err(Error::Domain("occupancy vectors have the wrong length".into()));
        }
        let mut entries = vec![0; dim * dim];
        let mut u = upper.iter();
        for i in 0..dim {
            entries[i * dim + i] = diag[i];
            for k in i + 1..dim {
                let v = *u.next().unwrap();
                entries[i * dim + k] = v;
                entries[k * dim + i] = v;
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, k: usize) -> u32 {
        self.entries[i * self.dim + k]
    }

    /// m = Σ a_ii
    pub fn diag_sum(&self) -> u64 {
        (0..self.dim).map(|i| self.get(i, i) as u64).sum()
    }

    /// j = Σ_{i<k} a_ik
    pub fn upper_sum(&self) -> u64 {
        (0..self.dim).flat_map(|i| (i + 1..self.dim).map(move |k| (i, k))).map(|(i, k)| self.get(i, k) as u64).sum()
    }

    pub fn to_genperm(&self) -> GenPerm {
        GenPerm::from_matrix(self.dim, self.dim, &self.entries)
    }

    /// Every symmetric matrix of the given dimension with 2j + m = `size`.
    pub fn enumerate(dim: usize, size: u32) -> Vec<SymConfig> {
        let cells: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i..dim).map(move |k| (i, k))).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; cells.len()];
        fn rec(idx: usize, rest: u32, cells: &[(usize, usize)], cur: &mut [u32], dim: usize, out: &mut Vec<SymConfig>) {
            if idx == cells.len() {
                if rest == 0 {
                    let mut entries = vec![0; dim * dim];
                    for (c, &(i, k)) in cells.iter().enumerate() {
                        entries[i * dim + k] = cur[c];
                        entries[k * dim + i] = cur[c];
                    }
                    out.push(SymConfig { dim, entries });
                }
                return;
            }
            let w = if cells[idx].0 == cells[idx].1 { 1 } else { 2 };
            for v in 0..=rest / w {
                cur[idx] = v;
                rec(idx + 1, rest - v * w, cells, cur, dim, out);
            }
            cur[idx] = 0;
        }
        rec(0, size, &cells, &mut cur, dim, &mut out);
        out
    }
}

/// Length of the longest strictly decreasing subsequence of a word.
pub fn lds_of_word(word: impl IntoIterator<Item = u32>) -> usize {
    // Patience piles on the negated word: tops[i] is the smallest possible last
    // value of a strictly decreasing run of length i+1, stored negated.
    let mut tops: Vec<i64> = Vec::new();
    for v in word {
        let x = -(v as i64);
        let pos = tops.partition_point(|&t| t < x);
        if pos == tops.len() {
            tops.push(x);
        } else {
            tops[pos] = x;
        }
    }
    tops.len()
}

/// L(π): longest strictly decreasing subsequence of the bottom row.
pub fn lds_length(g: &GenPerm) -> usize {
    lds_of_word(g.pairs.iter().map(|&(_, j)| j))
}

/// Row insertion of a word; returns the insertion tableau P.
pub fn rsk_insert(word: &[u32]) -> Ssyt {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &v in word {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[r];
            let pos = row.partition_point(|&y| y <= x);
            if pos == row.len() {
                row.push(x);
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
            r += 1;
        }
    }
    Ssyt::new(rows).expect("row insertion preserves semistandardness")
}

pub fn rsk_shape(c: &SymConfig) -> Partition {
    rsk_insert(&c.to_genperm().bottom()).shape().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lds_examples() {
        let g = GenPerm::from_rows(&[1, 1, 1, 2, 2, 2, 2, 3, 3], &[1, 3, 3, 2, 2, 2, 4, 3, 4]).unwrap();
        assert_eq!(lds_length(&g), 2);
        assert_eq!(lds_length(&GenPerm::default()), 0);
        let g = GenPerm::from_rows(&[1, 2, 3], &[3, 2, 1]).unwrap();
        assert_eq!(lds_length(&g), 3);
        assert_eq!(lds_of_word([2, 2, 2]), 1);
    }

    #[test]
    fn example_matrix_matches_array() {
        let a = [1, 0, 2, 0, 0, 3, 0, 1, 0, 0, 1, 1];
        let g = GenPerm::from_matrix(3, 4, &a);
        assert_eq!(g.bottom(), vec![1, 3, 3, 2, 2, 2, 4, 3, 4]);
    }

    #[test]
    fn genperm_order_checked() {
        assert!(GenPerm::from_rows(&[2, 1], &[1, 1]).is_err());
        assert!(GenPerm::from_rows(&[1, 1], &[2, 1]).is_err());
    }

    #[test]
    fn shape_of_zero_and_diagonal() {
        assert!(rsk_shape(&SymConfig::zeros(3)).is_empty());
        let d = SymConfig::from_parts(3, &[2, 0, 3], &[0, 0, 0]).unwrap();
        assert_eq!(rsk_shape(&d).parts(), &[5]);
    }

    #[test]
    fn symmetric_shapes_exhaustive() {
        for dim in 1..=3 {
            for size in 0..=8 {
                for c in SymConfig::enumerate(dim, size) {
                    let sh = rsk_shape(&c);
                    assert_eq!(sh.len(), lds_length(&c.to_genperm()));
                    assert_eq!(sh.size(), 2 * c.upper_sum() + c.diag_sum());
                    assert_eq!(sh.odd_columns() as u64, c.diag_sum());
                }
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        // N=2, size 2: diag (2,0),(1,1),(0,2) plus one off-diagonal pair
        assert_eq!(SymConfig::enumerate(2, 2).len(), 4);
        assert!(SymConfig::new(2, vec![0, 1, 2, 0]).is_err());
    }
}
