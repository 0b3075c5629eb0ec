use super::partition::Partition;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Semistandard Young tableau: rows weakly increasing, columns strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ssyt {
    shape: Partition,
    rows: Vec<Vec<u32>>,
}

impl Ssyt {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let rows: Vec<Vec<u32>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        let shape = Partition::new(rows.iter().map(|r| r.len() as u32).collect())
            .map_err(|e| Error::InvalidTableau(format!("row lengths: {e}")))?;
        for (i, row) in rows.iter().enumerate() {
            if row.contains(&0) {
                return Err(Error::InvalidTableau(format!("row {i} has a zero entry")));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidTableau(format!("row {i} is not weakly increasing")));
            }
            if i > 0 {
                let above = &rows[i - 1];
                if let Some(c) = row.iter().zip(above).position(|(b, a)| b <= a) {
                    return Err(Error::InvalidTableau(format!("column {c} is not strictly increasing at row {i}")));
                }
            }
        }
        Ok(Self { shape, rows })
    }

    pub fn empty() -> Self {
        Self { shape: Partition::empty(), rows: Vec::new() }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn max_entry(&self) -> u32 {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width).map(|c| self.rows.iter().take_while(|r| r.len() > c).map(|r| r[c]).collect()).collect()
    }

    fn from_columns(cols: &[Vec<u32>]) -> Result<Self> {
        let height = cols.first().map_or(0, Vec::len);
        let rows = (0..height).map(|r| cols.iter().take_while(|c| c.len() > r).map(|c| c[r]).collect()).collect();
        let t = Self::new(rows)?;
        if t.columns() != cols {
            return Err(Error::InvalidTableau("column lengths are not weakly decreasing".into()));
        }
        Ok(t)
    }
}

/// Lock-step configuration over `horizon` time steps, listing for each walker
/// (leftmost first) the sorted times at which it moved left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathConfig {
    horizon: u32,
    left_moves: Vec<Vec<u32>>,
}

impl PathConfig {
    /// Validates that the move lists describe a collision-free trajectory.
    /// Trailing walkers without moves are dropped.
    pub fn new(horizon: u32, mut left_moves: Vec<Vec<u32>>) -> Result<Self> {
        while left_moves.last().is_some_and(Vec::is_empty) {
            left_moves.pop();
        }
        for (w, moves) in left_moves.iter().enumerate() {
            if moves.iter().any(|&s| s == 0 || s > horizon) {
                return Err(Error::InvalidPath(format!("walker {w} has a move outside 1..={horizon}")));
            }
            if moves.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::InvalidPath(format!("walker {w} moves are not strictly increasing")));
            }
        }
        for w in 1..left_moves.len() {
            let (a, b) = (&left_moves[w - 1], &left_moves[w]);
            if b.len() > a.len() {
                return Err(Error::InvalidPath(format!("walker {w} overtakes walker {}", w - 1)));
            }
            if let Some(r) = a.iter().zip(b).position(|(x, y)| y < x) {
                return Err(Error::InvalidPath(format!("walker {w} collides with walker {} at its move {r}", w - 1)));
            }
        }
        Ok(Self { horizon, left_moves })
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn left_moves(&self) -> &[Vec<u32>] {
        &self.left_moves
    }

    /// Total number of left moves k.
    pub fn total_moves(&self) -> usize {
        self.left_moves.iter().map(Vec::len).sum()
    }

    /// L_j: number of left moves of walker j (0-based, leftmost first).
    pub fn moves_of(&self, walker: usize) -> usize {
        self.left_moves.get(walker).map_or(0, Vec::len)
    }

    /// Exclusion-process position of walker j (1-based) after time `n`.
    pub fn position(&self, walker: usize, n: u32) -> i64 {
        let moved = self.left_moves.get(walker - 1).map_or(0, |m| m.iter().filter(|&&s| s <= n).count());
        walker as i64 - moved as i64
    }
}

/// Column j of the tableau lists walker j's left-move times.
pub fn gov_to_tableau(p: &PathConfig) -> Ssyt {
    Ssyt::from_columns(&p.left_moves).expect("a valid path configuration always yields a tableau")
}

pub fn gov_to_path(t: &Ssyt, horizon: u32) -> Result<PathConfig> {
    if t.max_entry() > horizon {
        return Err(Error::InvalidTableau(format!("entry {} exceeds the horizon {horizon}", t.max_entry())));
    }
    PathConfig::new(horizon, t.columns())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_roundtrip() {
        let p = PathConfig::new(5, vec![]).unwrap();
        let t = gov_to_tableau(&p);
        assert_eq!(t, Ssyt::empty());
        assert_eq!(gov_to_path(&t, 5).unwrap(), p);
    }

    #[test]
    fn tableau_validation() {
        assert!(Ssyt::new(vec![vec![1, 1, 2], vec![2, 3]]).is_ok());
        assert!(Ssyt::new(vec![vec![1, 2], vec![1, 3]]).is_err());
        assert!(Ssyt::new(vec![vec![2, 1]]).is_err());
        assert!(Ssyt::new(vec![vec![1], vec![2, 3]]).is_err());
    }

    #[test]
    fn path_validation() {
        // walker 2 cannot make its first left move before walker 1 does
        assert!(PathConfig::new(3, vec![vec![2], vec![1]]).is_err());
        assert!(PathConfig::new(3, vec![vec![1], vec![1, 2]]).is_err());
        assert!(PathConfig::new(3, vec![vec![1, 1]]).is_err());
        assert!(PathConfig::new(3, vec![vec![4]]).is_err());
        let p = PathConfig::new(3, vec![vec![1, 2], vec![2, 3], vec![]]).unwrap();
        assert_eq!(p.left_moves().len(), 2);
        assert_eq!(p.position(1, 3), -1);
        assert_eq!(p.position(2, 1), 2);
        assert_eq!(p.position(3, 3), 3);
    }

    #[test]
    fn columns_become_walkers() {
        let t = Ssyt::new(vec![vec![1, 1, 2], vec![2, 3]]).unwrap();
        let p = gov_to_path(&t, 3).unwrap();
        assert_eq!(p.left_moves(), &[vec![1, 2], vec![1, 3], vec![2]]);
        assert_eq!(gov_to_tableau(&p), t);
        assert!(gov_to_path(&t, 2).is_err());
    }
}
