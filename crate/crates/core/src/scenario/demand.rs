use alloc::vec::Vec;

use crate::rng::SplitMix64;

/// One scheduled departure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spawn {
    /// Sequential vehicle number, counting only spawns.
    pub id: usize,
    /// Index into the caller's vehicle-type list.
    pub type_index: usize,
    pub depart_step: usize,
}

/// Seeded departure schedule: at each step `i` in `0..n_steps` one uniform
/// draw is taken from `SplitMix64::new(seed)` and a vehicle spawns when the
/// draw is below `spawn_prob`. Types are assigned round-robin by vehicle
/// number so they do not consume draws.
pub fn generate_demand(seed: u64, n_steps: usize, spawn_prob: f64, n_types: usize) -> Vec<Spawn> {
    let mut rng = SplitMix64::new(seed);
    let mut schedule = Vec::new();
    let mut veh_nr = 0;
    for i in 0..n_steps {
        if rng.uniform() < spawn_prob {
            schedule.push(Spawn {
                id: veh_nr,
                type_index: veh_nr % n_types.max(1),
                depart_step: i,
            });
            veh_nr += 1;
        }
    }
    schedule
}
