//! Randomized check that simple closed curves have at most two simple-path
//! coordinate shadows.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rayon::ThreadPoolBuilder;
use serde::Serialize;

use crate::complex::{shadow_classes, TopologyTag};
use crate::generators::gen_random_knot;
use crate::Rational;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SHADOWLAB_THREADS";

/// Largest number of simple-path shadows a simple closed curve can have.
pub const PATH_BOUND: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarnessConfig {
    pub trials: usize,
    pub dimension: usize,
    pub vertices: usize,
    pub seed: u64,
    /// Worker threads; `None` reads [`THREADS_ENV`], falling back to rayon's default.
    pub threads: Option<usize>,
}

/// A trial whose curve had more simple-path shadows than the bound allows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub seed: u64,
    pub tags: Vec<TopologyTag>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub trials: usize,
    pub dimension: usize,
    pub vertices: usize,
    pub seed: u64,
    /// Number of curves with a given count of simple-path shadows.
    pub histogram: BTreeMap<usize, usize>,
    /// Trials whose generator gave up, with the reason.
    pub failed: Vec<(usize, String)>,
    pub violations: Vec<Violation>,
}

impl HarnessReport {
    pub fn max_paths(&self) -> Option<usize> {
        self.histogram.keys().next_back().copied()
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.max_paths().is_none_or(|m| m <= PATH_BOUND)
    }

    fn merge(mut self, other: HarnessReport) -> HarnessReport {
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.failed.extend(other.failed);
        self.violations.extend(other.violations);
        self
    }
}

/// Seed of trial `i`; independent of scheduling.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    // splitmix64 step
    let mut z = seed.wrapping_add((trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

fn run_trial(config: &HarnessConfig, trial: usize) -> HarnessReport {
    let seed = trial_seed(config.seed, trial);
    let mut report = HarnessReport::default();
    let curve = match gen_random_knot::<Rational>(config.dimension, config.vertices, seed) {
        Ok(c) => c,
        Err(e) => {
            report.failed.push((trial, e.to_string()));
            return report;
        }
    };
    match shadow_classes(&curve) {
        Ok(classes) => {
            let tags: Vec<TopologyTag> = classes.iter().map(|c| c.tag()).collect();
            let paths = tags.iter().filter(|t| **t == TopologyTag::SimplePath).count();
            report.histogram.insert(paths, 1);
            if paths > PATH_BOUND {
                report.violations.push(Violation { trial, seed, tags });
            }
        }
        Err(e) => report.failed.push((trial, e.to_string())),
    }
    report
}

/// Classifies the shadows of `config.trials` seeded random simple curves in
/// parallel. The report does not depend on the number of threads.
pub fn run_path_bound_harness(config: &HarnessConfig) -> HarnessReport {
    let threads = config.threads.or_else(thread_cap_from_env).unwrap_or(0);
    let work = || {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, i))
            .reduce(HarnessReport::default, HarnessReport::merge)
    };
    let mut report = match ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    report.failed.sort();
    report.violations.sort_by_key(|v| v.trial);
    report.trials = config.trials;
    report.dimension = config.dimension;
    report.vertices = config.vertices;
    report.seed = config.seed;
    report
}
