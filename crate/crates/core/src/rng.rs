//! Deterministic RNG streams for the simulation harness.
//!
//! Every (iteration, simulation) pair gets its own stream, derived
//! statelessly from the master seed with the splitmix64 finalizer, so
//! simulations can run in any order (or in parallel) and still produce
//! identical results.

/// splitmix64 avalanche finalizer (Steele, Lea & Flood).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Sub-seed for one simulation, a pure function of the identifying indices.
pub fn derive_seed(master_seed: u64, iteration: u64, simulation: u64) -> u64 {
    let mut s = mix64(master_seed);
    s = mix64(s ^ mix64(iteration ^ 0xa076_1d64_78bd_642f));
    s = mix64(s ^ mix64(simulation ^ 0xe703_7ed1_a0b4_28db));
    s
}

/// Sequential splitmix64 generator.
#[derive(Debug, Clone)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream { state: seed }
    }

    pub fn for_simulation(master_seed: u64, iteration: u64, simulation: u64) -> Self {
        RngStream::from_seed(derive_seed(master_seed, iteration, simulation))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in [0, n) via bitmask rejection (no modulo bias).
    pub fn uniform(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let mask = (n as u64).next_power_of_two() - 1;
        loop {
            let v = self.next_u64() & mask;
            if (v as usize) < n {
                return v as usize;
            }
        }
    }
}

/// Source of single tie-breaking bits. Each randomized tie consumes
/// exactly one bit so runs are reproducible from the seed.
pub trait TieBreaker {
    fn tie_bit(&mut self) -> bool;
}

impl TieBreaker for RngStream {
    fn tie_bit(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// Fixed bit sequence, for tests that pin tie outcomes.
#[derive(Debug, Clone)]
pub struct FixedTies {
    bits: Vec<bool>,
    pos: usize,
}

impl FixedTies {
    pub fn new(bits: Vec<bool>) -> Self {
        FixedTies { bits, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl TieBreaker for FixedTies {
    fn tie_bit(&mut self) -> bool {
        let b = self.bits[self.pos];
        self.pos += 1;
        b
    }
}
