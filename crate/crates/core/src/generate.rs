//! Seeded tournament generators.
//!
//! All randomness comes from [`rng_from_seed`], a ChaCha8 stream keyed by a
//! `u64` seed, so outputs are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tournament::{check_probability, ScoreVector, StochasticTournament, TournamentBuilder};
use crate::tournament::{PairwiseOracle, DEFAULT_FLOOR};

/// Identifier of the generator behind every seeded operation.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/rand_chacha-0.3/seed_from_u64";

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bradley–Terry tournament: `p_xy = a(x) / (a(x) + a(y))`, edges oriented
/// from lower to higher id.
pub fn gen_bt(scores: &ScoreVector) -> Result<StochasticTournament> {
    let a = scores.as_slice();
    let n = a.len();
    let mut b = TournamentBuilder::new(n, DEFAULT_FLOOR)?;
    for x in 0..n {
        for y in x + 1..n {
            b.insert(x, y, a[x] / (a[x] + a[y]))?;
        }
    }
    b.finish()
}

/// `x_i` beats `x_{i+1 mod n}` with probability `p`; every other pair is a
/// fair coin.
pub fn gen_cyclic(n: usize, p: f64) -> Result<StochasticTournament> {
    if n < 3 {
        return Err(Error::TooFewVertices { n, min: 3 });
    }
    check_probability(p, DEFAULT_FLOOR)?;
    let mut b = TournamentBuilder::new(n, DEFAULT_FLOOR)?;
    for x in 0..n {
        for y in x + 1..n {
            if y == x + 1 {
                b.insert(x, y, p)?;
            } else if x == 0 && y == n - 1 {
                b.insert(y, x, p)?;
            } else {
                b.insert(x, y, 0.5)?;
            }
        }
    }
    b.finish()
}

/// Adds independent `U[-noise, noise]` to every stored weight and clamps the
/// result into `[floor, 1 - floor]`. Orientation is kept.
pub fn gen_perturbed(
    base: &StochasticTournament,
    noise: f64,
    seed: u64,
) -> Result<StochasticTournament> {
    if !(noise.is_finite() && (0.0..0.5).contains(&noise)) {
        return Err(Error::OutOfRange {
            name: "noise",
            value: noise,
        });
    }
    let floor = base.floor();
    let mut rng = rng_from_seed(seed);
    let mut b = TournamentBuilder::new(base.n(), floor)?;
    for e in base.edges() {
        let w = if noise == 0.0 {
            e.weight
        } else {
            (e.weight + rng.gen_range(-noise..=noise)).clamp(floor, 1.0 - floor)
        };
        b.insert(e.tail, e.head, w)?;
    }
    b.finish()
}

/// Every weight uniform on `[floor, 1 - floor]`, every orientation a fair
/// coin flip.
pub fn gen_random(n: usize, seed: u64) -> Result<StochasticTournament> {
    let mut rng = rng_from_seed(seed);
    let mut b = TournamentBuilder::new(n, DEFAULT_FLOOR)?;
    for x in 0..n {
        for y in x + 1..n {
            let w = rng.gen_range(DEFAULT_FLOOR..=1.0 - DEFAULT_FLOOR);
            if rng.gen::<bool>() {
                b.insert(x, y, w)?;
            } else {
                b.insert(y, x, w)?;
            }
        }
    }
    b.finish()
}

/// Scores drawn log-uniformly from `[lo, hi]`.
pub fn random_scores(n: usize, lo: f64, hi: f64, seed: u64) -> Result<ScoreVector> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::OutOfRange {
            name: "score range",
            value: lo,
        });
    }
    let mut rng = rng_from_seed(seed);
    let (l, h) = (lo.ln(), hi.ln());
    ScoreVector::new(
        (0..n)
            .map(|_| {
                if l == h {
                    lo
                } else {
                    rng.gen_range(l..=h).exp()
                }
            })
            .collect(),
    )
}

/// Materializes any oracle into a tournament, edges oriented low to high.
pub fn collect<O: PairwiseOracle>(o: &O) -> Result<StochasticTournament> {
    let n = o.vertex_count();
    let mut b = TournamentBuilder::new(n, DEFAULT_FLOOR)?;
    for x in 0..n {
        for y in x + 1..n {
            b.insert(x, y, o.p(x, y))?;
        }
    }
    b.finish()
}
