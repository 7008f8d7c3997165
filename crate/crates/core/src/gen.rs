//! Seeded uniform sampling of `(a,e)` instances with `L` clauses drawn
//! independently with replacement.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Clause, QxorInstance, VarList};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub m: usize,
    pub n: usize,
    /// Clause count `L`.
    pub clauses: usize,
    pub a: usize,
    pub e: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.a > self.m {
            return Err(Error::invalid(format!("a = {} exceeds m = {}", self.a, self.m)));
        }
        if self.e == 0 || self.e > self.n {
            return Err(Error::invalid(format!("e = {} must be in 1..={}", self.e, self.n)));
        }
        if self.m > u32::MAX as usize || self.n > u32::MAX as usize {
            return Err(Error::invalid("variable counts must fit in 32 bits"));
        }
        Ok(())
    }
}

/// Number of distinct clauses, `C(m,a) · C(n,e) · 2`.
pub fn clause_space_size(m: usize, n: usize, a: usize, e: usize) -> Result<BigUint> {
    if a > m || e > n {
        return Err(Error::invalid(format!(
            "arity exceeds variable count (a = {a}, m = {m}, e = {e}, n = {n})"
        )));
    }
    Ok(binomial(m, a) * binomial(n, e) * 2u32)
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    // each partial product is itself a binomial coefficient, so the division is exact
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Clause count for density `c`: round-to-nearest of `c·n`.
pub fn clauses_for_density(c: f64, n: usize) -> usize {
    (c * n as f64 + 0.5).floor() as usize
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Counter-based seed for sample `index` of stream `stream` under `master`.
///
/// For fixed `(master, stream)` the map `index -> seed` is a bijection on
/// `u64`, so seeds within a stream never collide.
pub fn derive_seed(master: u64, stream: &str, index: u64) -> u64 {
    let key = mix64(mix64(master ^ 0x5851_f42d_4c95_7f2d) ^ fnv1a(stream.as_bytes()));
    mix64(key.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Uniform `k`-subset of `1..=n` (Floyd's algorithm), returned ascending.
fn sample_subset<R: Rng>(rng: &mut R, n: u32, k: usize, out: &mut VarList) {
    out.clear();
    for j in (n - k as u32)..n {
        let t = rng.gen_range(0..=j) + 1;
        if out.contains(&t) {
            out.push(j + 1);
        } else {
            out.push(t);
        }
    }
    out.sort_unstable();
}

fn random_clause<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Clause {
    let mut universal = VarList::new();
    let mut existential = VarList::new();
    sample_subset(rng, cfg.m as u32, cfg.a, &mut universal);
    sample_subset(rng, cfg.n as u32, cfg.e, &mut existential);
    let rhs = rng.gen::<bool>();
    Clause::new(universal, existential, rhs)
}

/// Draws a random instance. A pure function of `cfg`.
pub fn generate(cfg: &GenConfig) -> Result<QxorInstance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let clauses = (0..cfg.clauses).map(|_| random_clause(&mut rng, cfg)).collect();
    Ok(QxorInstance::from_parts_unchecked(cfg.m, cfg.n, cfg.a, cfg.e, clauses))
}
