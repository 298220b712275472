//! Seeded random streams. Every stage of a pipeline draws from its own
//! ChaCha8 stream derived from the user seed, so changing how many numbers
//! one stage consumes never shifts another stage's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stage {
    Bicriteria,
    CandidateSubsample,
    Sampling,
    Pool,
    Trial(u64),
}

impl Stage {
    fn stream(self) -> u64 {
        match self {
            Stage::Bicriteria => 1,
            Stage::CandidateSubsample => 2,
            Stage::Sampling => 3,
            Stage::Pool => 4,
            Stage::Trial(t) => 1 << 32 | t,
        }
    }
}

pub(crate) fn stage_rng(seed: u64, stage: Stage) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage.stream());
    rng
}
