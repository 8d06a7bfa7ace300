//! Deterministic synthetic contact streams for smoke tests, benchmarks and
//! demos. Self-contained splitmix64 generator, no external RNG.

use crate::inference::Interaction;
use crate::model::NodeId;

/// Splitmix64 step.
fn next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `count` interactions between `num_nodes` nodes with timestamps uniform
/// in `[0, horizon)`, sorted by timestamp. Deterministic in `seed`.
pub fn interaction_stream(
    num_nodes: u64,
    count: usize,
    horizon: i64,
    seed: u64,
) -> Vec<Interaction> {
    assert!(num_nodes >= 2, "need at least two nodes");
    assert!(horizon > 0, "horizon must be positive");
    let mut state = seed;
    let mut stream: Vec<Interaction> = (0..count)
        .map(|_| {
            let u = next(&mut state) % num_nodes;
            let mut v = next(&mut state) % (num_nodes - 1);
            if v >= u {
                v += 1;
            }
            let ts = (next(&mut state) % horizon as u64) as i64;
            Interaction {
                u: NodeId(u),
                v: NodeId(v),
                ts,
            }
        })
        .collect();
    stream.sort_by_key(|i| (i.ts, i.u, i.v));
    stream
}
