//! Fixtures shared by the benchmarks.

use faultdiag_core::{ProcessorType, World};

/// `n` processors with the largest admissible number of Normals, interleaved
/// so every algorithm meets them early.
pub fn adversarial_world(n: usize) -> World {
    let normals = n.div_ceil(2) - 1;
    let types = (0..n)
        .map(|i| {
            if i % 2 == 0 && i / 2 < normals {
                ProcessorType::Normal
            } else if i % 3 == 0 {
                ProcessorType::Knave
            } else {
                ProcessorType::Knight
            }
        })
        .collect();
    World::new(types).expect("n >= 1")
}

pub fn all_knights(n: usize) -> World {
    World::new(vec![ProcessorType::Knight; n]).expect("n >= 1")
}
