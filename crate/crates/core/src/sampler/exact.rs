use crate::combinatorics::{lds_of_word, path_count_terms, SymConfig};
use num_bigint::{BigUint, RandBigInt};
use rand::Rng;

/// Exact cumulative weights b(N, (k−m)/2, m, ∞) over admissible m.
#[derive(Clone, Debug)]
pub struct JmTable {
    pub n: u32,
    pub k: u64,
    ms: Vec<u64>,
    cumulative: Vec<BigUint>,
}

impl JmTable {
    pub fn new(n: u32, k: u64) -> Self {
        let mut ms = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = BigUint::from(0u32);
        for (m, a) in path_count_terms(n, k) {
            if a == BigUint::from(0u32) {
                continue;
            }
            acc += a;
            ms.push(m);
            cumulative.push(acc.clone());
        }
        Self { n, k, ms, cumulative }
    }

    /// |P(N, k)|.
    pub fn total(&self) -> BigUint {
        self.cumulative.last().cloned().unwrap_or_default()
    }

    /// Admissible m values with nonzero weight.
    pub fn support(&self) -> &[u64] {
        &self.ms
    }

    /// (j, m) with probability b(N,j,m,∞)/|P(N,k)|, by an exact uniform integer below the total.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        if self.ms.len() <= 1 {
            let m = self.ms.first().copied().unwrap_or(0);
            return ((self.k - m) / 2, m);
        }
        let u = rng.gen_biguint_below(&self.total());
        let idx = self.cumulative.partition_point(|c| *c <= u);
        let m = self.ms[idx];
        ((self.k - m) / 2, m)
    }
}

/// (j, m) for a uniform element of P(N, k).
pub fn sample_jm<R: Rng + ?Sized>(n: u32, k: u64, rng: &mut R) -> (u64, u64) {
    JmTable::new(n, k).sample(rng)
}

/// Uniform multiset of `balls` items from `boxes` kinds, as the sorted list of chosen
/// boxes (with repetition). Stars and bars: a uniform `balls`-subset of
/// `boxes + balls − 1` slots, drawn by Floyd's method.
pub fn sample_multiset_sorted<R: Rng + ?Sized>(boxes: u64, balls: u64, rng: &mut R) -> Vec<u64> {
    assert!(boxes >= 1, "at least one box is needed");
    if balls == 0 {
        return Vec::new();
    }
    if boxes == 1 {
        return vec![0; balls as usize];
    }
    let slots = boxes + balls - 1;
    let mut chosen = vec![false; slots as usize];
    for top in slots - balls..slots {
        let r = rng.gen_range(0..=top);
        let pick = if chosen[r as usize] { top } else { r };
        chosen[pick as usize] = true;
    }
    let mut out = Vec::with_capacity(balls as usize);
    for (p, _) in chosen.iter().enumerate().filter(|(_, &c)| c) {
        // the r-th chosen slot (0-based) lands in box p − r
        out.push(p as u64 - out.len() as u64);
    }
    out
}

/// Occupancy vector of a uniform multiset.
pub fn sample_multiset<R: Rng + ?Sized>(boxes: u64, balls: u64, rng: &mut R) -> Vec<u32> {
    let mut occ = vec![0u32; boxes as usize];
    for b in sample_multiset_sorted(boxes, balls, rng) {
        occ[b as usize] += 1;
    }
    occ
}

/// Strict upper-triangle cell of a row-major index, 0-based (i < k).
fn upper_cell(n: u64, idx: u64) -> (u32, u32) {
    // rows i hold n−1−i cells; start(i) = i(2n−i−1)/2
    let mut lo = 0u64;
    let mut hi = n - 1;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if mid * (2 * n - mid - 1) / 2 <= idx {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let start = lo * (2 * n - lo - 1) / 2;
    (lo as u32, (lo + 1 + idx - start) as u32)
}

/// Uniform element of P(N, k) as a symmetric matrix with diagonal sum m and upper sum j.
pub fn sample_symconfig<R: Rng + ?Sized>(table: &JmTable, rng: &mut R) -> SymConfig {
    let n = table.n as usize;
    let (j, m) = table.sample(rng);
    let diag = sample_multiset(n as u64, m, rng);
    let upper = if n >= 2 { sample_multiset((n * (n - 1) / 2) as u64, j, rng) } else { Vec::new() };
    SymConfig::from_parts(n, &diag, &upper).expect("sizes match")
}

/// L_1 of a uniform element of P(N, k), without building the matrix.
///
/// The row-ordered bottom word visits row i's nonzero columns in increasing order;
/// repeated letters cannot extend a strictly decreasing run, so each cell is read once.
pub fn sample_l1_with<R: Rng + ?Sized>(table: &JmTable, rng: &mut R) -> u32 {
    let n = table.n as usize;
    let (j, m) = table.sample(rng);
    let mut diag = vec![false; n];
    for b in sample_multiset_sorted(n as u64, m, rng) {
        diag[b as usize] = true;
    }
    let mut upper: Vec<(u32, u32)> = Vec::new();
    if n >= 2 {
        let mut last = None;
        for idx in sample_multiset_sorted((n * (n - 1) / 2) as u64, j, rng) {
            if last != Some(idx) {
                upper.push(upper_cell(n as u64, idx));
                last = Some(idx);
            }
        }
    }
    // Row r reads the column entries (a, r), a < r, then (r, r), then (r, c), c > r.
    // Row-major order of the cells keeps both parts sorted, so a counting sort by row suffices.
    let mut below = vec![0usize; n + 1];
    let mut above = vec![0usize; n + 1];
    for &(a, c) in &upper {
        below[c as usize + 1] += 1;
        above[a as usize + 1] += 1;
    }
    for r in 0..n {
        below[r + 1] += below[r];
        above[r + 1] += above[r];
    }
    let mut lo_vals = vec![0u32; upper.len()];
    let mut hi_vals = vec![0u32; upper.len()];
    let (mut lo_pos, mut hi_pos) = (below.clone(), above.clone());
    for &(a, c) in &upper {
        lo_vals[lo_pos[c as usize]] = a;
        lo_pos[c as usize] += 1;
        hi_vals[hi_pos[a as usize]] = c;
        hi_pos[a as usize] += 1;
    }
    let word = (0..n).flat_map(|r| {
        let d = if diag[r] { Some(r as u32) } else { None };
        lo_vals[below[r]..below[r + 1]].iter().copied().chain(d).chain(hi_vals[above[r]..above[r + 1]].iter().copied())
    });
    lds_of_word(word) as u32
}

pub fn sample_l1<R: Rng + ?Sized>(n: u32, k: u64, rng: &mut R) -> u32 {
    sample_l1_with(&JmTable::new(n, k), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{b_inf, lds_length, partitions_of, rsk_shape, ssyt_count};
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// |count − np| ≤ 4√(np(1−p))
    fn within_4_sigma(count: usize, n: usize, p: f64) -> bool {
        let mean = n as f64 * p;
        (count as f64 - mean).abs() <= 4.0 * (mean * (1.0 - p)).sqrt() + 1e-9
    }

    #[test]
    fn jm_small_case() {
        let t = JmTable::new(2, 2);
        assert_eq!(t.total(), BigUint::from(4u32));
        let mut r = rng(1);
        let draws = 100_000;
        let hits = (0..draws).filter(|_| t.sample(&mut r) == (0, 2)).count();
        assert!(within_4_sigma(hits, draws, 0.75));
        assert_eq!(sample_jm(5, 0, &mut r), (0, 0));
    }

    #[test]
    fn jm_frequencies() {
        let (n, k) = (4u32, 9u64);
        let t = JmTable::new(n, k);
        let total = t.total().to_f64().unwrap();
        let mut r = rng(2);
        let draws = 100_000;
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(t.sample(&mut r).1).or_default() += 1;
        }
        for &m in t.support() {
            let p = b_inf(n, (k - m) / 2, m).to_f64().unwrap() / total;
            assert!(within_4_sigma(counts.get(&m).copied().unwrap_or(0), draws, p), "m={m}");
        }
    }

    #[test]
    fn multiset_uniformity() {
        let mut r = rng(3);
        assert_eq!(sample_multiset(1, 5, &mut r), vec![5]);
        for (b, n, outcomes) in [(2u64, 2u64, 3usize), (3, 2, 6)] {
            let draws = 60_000;
            let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
            for _ in 0..draws {
                let occ = sample_multiset(b, n, &mut r);
                assert_eq!(occ.iter().sum::<u32>() as u64, n);
                *counts.entry(occ).or_default() += 1;
            }
            assert_eq!(counts.len(), outcomes);
            for &c in counts.values() {
                assert!(within_4_sigma(c, draws, 1.0 / outcomes as f64));
            }
        }
    }

    #[test]
    fn upper_cells_enumerate_row_major() {
        for n in 2..9u64 {
            let mut idx = 0;
            for i in 0..n as u32 {
                for k in i + 1..n as u32 {
                    assert_eq!(upper_cell(n, idx), (i, k));
                    idx += 1;
                }
            }
        }
    }

    #[test]
    fn fast_l1_matches_matrix_route() {
        // same draws through the dense matrix and the generalized permutation
        let table = JmTable::new(5, 12);
        for seed in 0..300 {
            let a = sample_l1_with(&table, &mut rng(seed));
            let c = sample_symconfig(&table, &mut rng(seed));
            assert_eq!(a as usize, lds_length(&c.to_genperm()), "seed {seed}");
            assert_eq!(a as usize, rsk_shape(&c).len());
        }
    }

    #[test]
    fn small_case_calibration() {
        let table = JmTable::new(2, 2);
        let mut r = rng(4);
        let draws = 100_000;
        let hits = (0..draws).filter(|_| sample_l1_with(&table, &mut r) <= 1).count();
        assert!(within_4_sigma(hits, draws, 0.75));
        assert_eq!(sample_l1(3, 0, &mut r), 0);
    }

    #[test]
    fn shapes_follow_tableau_counts() {
        // chi-square over shapes against ssyt_count(λ, N)/|P(N,k)|
        for (n, k) in [(2u32, 4u64), (3, 4), (3, 6)] {
            let table = JmTable::new(n, k);
            let total = table.total().to_f64().unwrap();
            let mut r = rng(5 + k);
            let draws = 100_000;
            let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
            for _ in 0..draws {
                *counts.entry(rsk_shape(&sample_symconfig(&table, &mut r)).parts().to_vec()).or_default() += 1;
            }
            let mut chi2 = 0.0;
            let mut cells = 0;
            for lam in partitions_of(k as u32, Some(n as usize)) {
                let p = ssyt_count(&lam, n).unwrap().to_f64().unwrap() / total;
                let e = draws as f64 * p;
                let o = counts.get(lam.parts()).copied().unwrap_or(0) as f64;
                chi2 += (o - e).powi(2) / e;
                cells += 1;
            }
            let dof = (cells - 1) as f64;
            assert!(chi2 <= dof + 4.0 * (2.0 * dof).sqrt(), "N={n} k={k}: χ² = {chi2} on {dof} dof");
        }
    }

    #[test]
    fn l1_law_matches_enumeration() {
        // N = 3, k = 4: exact law of ℓ(λ) from tableau counts
        let (n, k) = (3u32, 4u64);
        let table = JmTable::new(n, k);
        let total = table.total().to_f64().unwrap();
        let mut exact = [0.0f64; 4];
        for lam in partitions_of(k as u32, Some(n as usize)) {
            exact[lam.len()] += ssyt_count(&lam, n).unwrap().to_f64().unwrap() / total;
        }
        let mut r = rng(6);
        let draws = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            counts[sample_l1_with(&table, &mut r) as usize] += 1;
        }
        for l in 0..4 {
            assert!(within_4_sigma(counts[l], draws, exact[l]), "ℓ={l}");
        }
    }
}
