use crate::combinatorics::PathConfig;
use rand::Rng;

/// One run of the discrete-time exclusion process for W particles over N steps.
///
/// Particles start at 1..=W. At each step every particle whose left site is vacant
/// picks uniformly among: stay, or move left together with its first s successors
/// (s = 0..successor count). Moves are recorded as the walker's left-move times.
/// Demonstration only: no claim is made about the law of the result.
pub fn demo_walk<R: Rng + ?Sized>(steps: u32, walkers: usize, rng: &mut R) -> PathConfig {
    assert!(walkers >= 1, "need at least one walker");
    let mut pos: Vec<i64> = (1..=walkers as i64).collect();
    let mut moves: Vec<Vec<u32>> = vec![Vec::new(); walkers];
    for time in 1..=steps {
        let before = pos.clone();
        let mut i = 0;
        while i < walkers {
            // block of consecutive particles starting at i
            let mut end = i + 1;
            while end < walkers && before[end] == before[end - 1] + 1 {
                end += 1;
            }
            let leader_free = i == 0 || before[i - 1] < before[i] - 1;
            if leader_free {
                let successors = end - i - 1;
                // 0 = stay, c ≥ 1 moves the first c particles of the block
                let c = rng.gen_range(0..=successors + 1);
                for w in i..i + c {
                    pos[w] -= 1;
                    moves[w].push(time);
                }
            }
            i = end;
        }
    }
    PathConfig::new(steps, moves).expect("exclusion moves form a valid configuration")
}
