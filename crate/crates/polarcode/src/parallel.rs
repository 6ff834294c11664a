//! Data-parallel drivers. Work is split into pieces whose boundaries do not
//! depend on the thread count, and results are merged in piece order, so
//! every output is the same for any `--workers`.

use polar_grassmann::code::{CertifiedMinimum, ExactMinimum, PolarCode, SAMPLE_BLOCK};
use polar_grassmann::counting::{empirical_census, line_type_census, tau_sum, ClassCensus};
use polar_grassmann::forms::AlternatingForm;
use polar_grassmann::geometry::PolarGeometry;
use polar_grassmann::sample::random_alternating_form;
use polar_grassmann::{Error, FieldCtx, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Messages per piece of the exhaustive scan.
pub const SCAN_CHUNK: u128 = 1 << 14;

/// Runs `job` on a pool of `workers` threads; 0 lets rayon choose.
pub fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(job)
}

/// Exhaustive minimum distance. Ties go to the smallest message index.
pub fn min_distance_exact(code: &PolarCode, budget: u128) -> Result<ExactMinimum> {
    let space = code.message_space();
    let total = space.total();
    if total > budget {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let chunks = total.div_ceil(SCAN_CHUNK) as usize;
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let start = c as u128 * SCAN_CHUNK;
            code.min_weight_in_range(start, (start + SCAN_CHUNK).min(total))
        })
        .min()
        .expect("at least one message");
    Ok(ExactMinimum {
        d_min: best.0 as u64,
        witness: space.message(best.1),
        messages: total,
    })
}

/// Sampling certificate with one RNG stream per block of `SAMPLE_BLOCK`
/// forms. A counterexample from the earliest block wins.
pub fn min_distance_certified(
    code: &PolarCode,
    samples: u64,
    seed: u64,
) -> Result<CertifiedMinimum> {
    let upper_bound = code.canonical_upper_bound()?;
    let blocks = samples.div_ceil(SAMPLE_BLOCK);
    let results: Vec<Result<u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| code.sample_block(seed, b, SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK)))
        .collect();
    let mut min_sampled = None::<u64>;
    for r in results {
        let w = r?;
        min_sampled = Some(min_sampled.map_or(w, |m| m.min(w)));
    }
    Ok(CertifiedMinimum {
        upper_bound,
        claimed: code.params().d_claimed,
        samples_checked: samples,
        min_sampled,
    })
}

/// `count` random non-zero alternating forms from a single stream.
pub fn random_forms(f: &FieldCtx, dim: usize, count: usize, seed: u64) -> Vec<AlternatingForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_alternating_form(f, dim, &mut rng))
        .collect()
}

/// Point census, line types and `sum tau(p)` of one form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormScan {
    pub census: ClassCensus,
    pub line_types: [u64; 5],
    pub tau_sum: i128,
}

pub fn scan_form(geom: &PolarGeometry, af: &AlternatingForm) -> Result<FormScan> {
    Ok(FormScan {
        census: empirical_census(geom, af)?,
        line_types: line_type_census(geom, af)?,
        tau_sum: tau_sum(geom, af)?,
    })
}

pub fn scan_forms(geom: &PolarGeometry, forms: &[AlternatingForm]) -> Vec<Result<FormScan>> {
    forms.par_iter().map(|af| scan_form(geom, af)).collect()
}
