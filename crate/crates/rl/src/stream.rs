use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type handed to environments and samplers.
pub type StreamRng = ChaCha8Rng;

/// Independent random streams derived from one root seed. Each stream is
/// the same ChaCha key on its own stream number, so draws on one stream
/// never shift another.
#[derive(Clone, Debug)]
pub struct RngStreams {
    /// Environment dynamics: arrivals, failures, weather.
    pub env: StreamRng,
    /// Action sampling.
    pub exploration: StreamRng,
    /// Observation sampling.
    pub sampling: StreamRng,
    /// Sensor noise.
    pub noise: StreamRng,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        let stream = |n: u64| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(n);
            r
        };
        RngStreams { env: stream(0), exploration: stream(1), sampling: stream(2), noise: stream(3) }
    }
}
