//! Seeded synthetic score matrices and perturbation sweeps.
//!
//! Each entry `(i, j)` is drawn from its own generator, seeded by mixing
//! `(seed, i, j)`, so rows can be produced in any order or in parallel
//! without changing the output.

use rand::RngCore;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;

use crate::config::{AnalysisConfig, FlatConfig};
use crate::error::{Error, Result};
use crate::labels::CopingLabelSet;
use crate::model::{GpiComponents, ScoreMatrix};
use crate::pipeline::analyze;
use crate::scalar::Scalar;

/// Generated scores are rounded to this grid so they survive the CSV
/// interchange format bit-for-bit.
const QUANTUM: f64 = 1e9;

/// Bounded distribution of one label's score: Beta with the given mean and
/// `alpha + beta = concentration`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabelDistribution {
    pub mean: f64,
    pub concentration: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub seed: u64,
    pub doc_count: usize,
    pub labels: Vec<LabelDistribution>,
}

impl SynthSpec {
    pub fn uniform(seed: u64, doc_count: usize, n: usize, mean: f64, concentration: f64) -> Self {
        SynthSpec {
            seed,
            doc_count,
            labels: vec![
                LabelDistribution {
                    mean,
                    concentration
                };
                n
            ],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.doc_count < 2 {
            return Err(Error::Config(format!(
                "doc_count must be at least 2, got {}",
                self.doc_count
            )));
        }
        if self.labels.len() != n {
            return Err(Error::Config(format!(
                "spec has {} label distributions, label set has {n}",
                self.labels.len()
            )));
        }
        for (j, d) in self.labels.iter().enumerate() {
            if !(0.0..=1.0).contains(&d.mean) {
                return Err(Error::Config(format!(
                    "label {}: mean {} outside [0, 1]",
                    j + 1,
                    d.mean
                )));
            }
            if !(d.concentration > 0.0 && d.concentration.is_finite()) {
                return Err(Error::Config(format!(
                    "label {}: concentration {} must be positive",
                    j + 1,
                    d.concentration
                )));
            }
        }
        Ok(())
    }

    /// Reads `seed`, `doc_count`, default `mean` / `concentration`, and
    /// per-label overrides `mean.<label>` / `concentration.<label>`.
    pub fn from_flat(flat: &FlatConfig, labels: &CopingLabelSet) -> Result<Self> {
        let parse = |key: &str, value: &str| -> Result<f64> {
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: {value:?} is not a number")))
        };
        let mut seed = None;
        let mut doc_count = None;
        let mut mean = 0.5;
        let mut concentration = 10.0;
        let mut overrides = Vec::new();
        for (key, value) in flat.iter() {
            match key {
                "seed" => {
                    seed = Some(value.trim().parse::<u64>().map_err(|_| {
                        Error::Config(format!("seed: {value:?} is not an unsigned integer"))
                    })?)
                }
                "doc_count" => {
                    doc_count = Some(value.trim().parse::<usize>().map_err(|_| {
                        Error::Config(format!("doc_count: {value:?} is not an unsigned integer"))
                    })?)
                }
                "mean" => mean = parse(key, value)?,
                "concentration" => concentration = parse(key, value)?,
                _ => {
                    let (field, label) = key
                        .split_once('.')
                        .filter(|(f, _)| *f == "mean" || *f == "concentration")
                        .ok_or_else(|| Error::Config(format!("unknown spec key {key:?}")))?;
                    let j = labels
                        .position(label)
                        .ok_or_else(|| Error::Config(format!("{key}: unknown label {label:?}")))?;
                    overrides.push((field == "mean", j, parse(key, value)?));
                }
            }
        }
        let mut spec = SynthSpec::uniform(
            seed.ok_or_else(|| Error::Config("spec is missing seed".into()))?,
            doc_count.ok_or_else(|| Error::Config("spec is missing doc_count".into()))?,
            labels.len(),
            mean,
            concentration,
        );
        for (is_mean, j, v) in overrides {
            if is_mean {
                spec.labels[j].mean = v;
            } else {
                spec.labels[j].concentration = v;
            }
        }
        spec.validate(labels.len())?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>, labels: &CopingLabelSet) -> Result<Self> {
        Self::from_flat(&FlatConfig::from_file(path)?, labels)
    }

    pub fn reseeded(&self, seed: u64) -> Self {
        SynthSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn means(&self) -> Vec<f64> {
        self.labels.iter().map(|d| d.mean).collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn cell_key(seed: u64, row: u64, col: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ row) ^ col)
}

/// SplitMix64 stream starting at a cell key.
struct CellRng {
    state: u64,
}

impl RngCore for CellRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        splitmix64(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Draws the score at `(row, col)`; identical arguments give identical bits.
pub fn sample_cell(seed: u64, row: usize, col: usize, dist: LabelDistribution) -> f64 {
    if dist.mean <= 0.0 || dist.mean >= 1.0 {
        return dist.mean.clamp(0.0, 1.0);
    }
    let alpha = dist.mean * dist.concentration;
    let beta = (1.0 - dist.mean) * dist.concentration;
    let mut rng = CellRng {
        state: cell_key(seed, row as u64, col as u64),
    };
    let x = Beta::new(alpha, beta)
        .expect("validated beta parameters")
        .sample(&mut rng);
    ((x * QUANTUM).round() / QUANTUM).clamp(0.0, 1.0)
}

/// Generates a `doc_count × n` matrix with group id `synth-<seed>` and doc ids
/// `d00000, d00001, ...`.
pub fn generate<T: Scalar>(spec: &SynthSpec, labels: &CopingLabelSet) -> Result<ScoreMatrix<T>> {
    spec.validate(labels.len())?;
    let rows: Vec<(String, Vec<T>)> = (0..spec.doc_count)
        .into_par_iter()
        .map(|i| {
            let row = spec
                .labels
                .iter()
                .enumerate()
                .map(|(j, &d)| T::lit(sample_cell(spec.seed, i, j, d)))
                .collect();
            (format!("d{i:05}"), row)
        })
        .collect();
    ScoreMatrix::new(format!("synth-{}", spec.seed), labels, rows)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    /// Adds each delta to the means of the given labels (all labels if empty),
    /// clamping to [0, 1].
    MeanShift { deltas: Vec<f64>, labels: Vec<usize> },
    /// Sets both groups' doc count.
    SampleSize(Vec<usize>),
    /// Rotates the `(first, second)` mean pair about (0.5, 0.5) by each angle
    /// (radians), clamping to [0, 1].
    Rotation {
        first: usize,
        second: usize,
        angles: Vec<f64>,
    },
}

impl Perturbation {
    fn grid(&self) -> Vec<f64> {
        match self {
            Perturbation::MeanShift { deltas, .. } => deltas.clone(),
            Perturbation::SampleSize(sizes) => sizes.iter().map(|&s| s as f64).collect(),
            Perturbation::Rotation { angles, .. } => angles.clone(),
        }
    }

    /// `(group A spec, group B spec)` at grid value `value`.
    fn apply(&self, base: &SynthSpec, other: &SynthSpec, value: f64) -> (SynthSpec, SynthSpec) {
        let mut a = base.clone();
        let mut b = other.clone();
        match self {
            Perturbation::MeanShift { labels, .. } => {
                let all: Vec<usize> = (0..b.labels.len()).collect();
                let targets = if labels.is_empty() { &all } else { labels };
                for &j in targets {
                    b.labels[j].mean = (b.labels[j].mean + value).clamp(0.0, 1.0);
                }
            }
            Perturbation::SampleSize(_) => {
                a.doc_count = value as usize;
                b.doc_count = value as usize;
            }
            Perturbation::Rotation { first, second, .. } => {
                let (x, y) = (b.labels[*first].mean - 0.5, b.labels[*second].mean - 0.5);
                let (s, c) = value.sin_cos();
                b.labels[*first].mean = (0.5 + c * x - s * y).clamp(0.0, 1.0);
                b.labels[*second].mean = (0.5 + s * x + c * y).clamp(0.0, 1.0);
            }
        }
        (a, b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint<T> {
    pub value: f64,
    pub components: GpiComponents<T>,
}

/// Runs `analyze` at each grid point, comparing a group drawn from `base`
/// against a perturbed group drawn from `other` (typically `base` reseeded).
/// Results are sorted by grid value.
pub fn sweep<T: Scalar>(
    base: &SynthSpec,
    other: &SynthSpec,
    perturbation: &Perturbation,
    config: &AnalysisConfig,
    labels: &CopingLabelSet,
) -> Result<Vec<SweepPoint<T>>> {
    base.validate(labels.len())?;
    other.validate(labels.len())?;
    let n = labels.len();
    match perturbation {
        Perturbation::MeanShift { labels: idx, .. } if idx.iter().any(|&j| j >= n) => {
            return Err(Error::Config("mean-shift label index out of range".into()))
        }
        Perturbation::Rotation { first, second, .. }
            if *first >= n || *second >= n || first == second =>
        {
            return Err(Error::Config("rotation needs two distinct label indices".into()))
        }
        _ => {}
    }
    let mut points: Vec<SweepPoint<T>> = perturbation
        .grid()
        .into_par_iter()
        .map(|value| {
            let (sa, sb) = perturbation.apply(base, other, value);
            let a: ScoreMatrix<T> = generate::<T>(&sa, labels)?.with_group_id("base");
            let b: ScoreMatrix<T> = generate::<T>(&sb, labels)?.with_group_id("perturbed");
            let report = analyze(&a, &b, config)?;
            Ok(SweepPoint {
                value,
                components: report.components,
            })
        })
        .collect::<Result<_>>()?;
    points.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> CopingLabelSet {
        CopingLabelSet::new(&crate::labels::DEFAULT_LABELS[..n]).unwrap()
    }

    #[test]
    fn generation_is_deterministic() {
        let l = labels(27);
        let spec = SynthSpec::uniform(1, 5, 27, 0.3, 4.0);
        let a: ScoreMatrix<f64> = generate(&spec, &l).unwrap();
        let b: ScoreMatrix<f64> = generate(&spec, &l).unwrap();
        assert_eq!(a, b);
        let c: ScoreMatrix<f64> = generate(&spec.reseeded(2), &l).unwrap();
        assert_ne!(a.scores(), c.scores());
    }

    #[test]
    fn two_row_spec_is_valid_matrix() {
        let l = labels(3);
        let m: ScoreMatrix<f64> = generate(&SynthSpec::uniform(9, 2, 3, 0.5, 2.0), &l).unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.fingerprint(), l.fingerprint());
    }

    #[test]
    fn entries_are_on_the_interchange_grid() {
        let l = labels(4);
        let m: ScoreMatrix<f64> =
            generate(&SynthSpec::uniform(5, 50, 4, 0.2, 0.7), &l).unwrap();
        for &x in m.scores().as_slice() {
            assert!((0.0..=1.0).contains(&x));
            let printed = format!("{x:.9}");
            assert_eq!(printed.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn extreme_means_are_constant() {
        let d = LabelDistribution {
            mean: 1.0,
            concentration: 3.0,
        };
        assert_eq!(sample_cell(1, 0, 0, d), 1.0);
        let d = LabelDistribution { mean: 0.0, ..d };
        assert_eq!(sample_cell(1, 0, 0, d), 0.0);
    }

    #[test]
    fn invalid_specs() {
        let l = labels(3);
        assert!(generate::<f64>(&SynthSpec::uniform(1, 1, 3, 0.5, 1.0), &l).is_err());
        assert!(generate::<f64>(&SynthSpec::uniform(1, 5, 2, 0.5, 1.0), &l).is_err());
        assert!(generate::<f64>(&SynthSpec::uniform(1, 5, 3, 1.5, 1.0), &l).is_err());
        assert!(generate::<f64>(&SynthSpec::uniform(1, 5, 3, 0.5, 0.0), &l).is_err());
    }

    #[test]
    fn spec_from_flat_config() {
        let l = labels(3);
        let flat = FlatConfig::parse(
            "seed = 7\ndoc_count = 40\nmean = 0.3\nconcentration = 12\nmean.Overapologizing = 0.8\n",
        )
        .unwrap();
        let spec = SynthSpec::from_flat(&flat, &l).unwrap();
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.doc_count, 40);
        assert_eq!(spec.means(), [0.3, 0.8, 0.3]);
        assert_eq!(spec.labels[2].concentration, 12.0);
        let bad = FlatConfig::parse("seed = 7\ndoc_count = 40\nmean.Nope = 0.8\n").unwrap();
        assert!(SynthSpec::from_flat(&bad, &l).is_err());
        let missing = FlatConfig::parse("doc_count = 40\n").unwrap();
        assert!(SynthSpec::from_flat(&missing, &l).is_err());
    }

    #[test]
    fn sweep_is_sorted_and_rotation_moves_means() {
        let l = labels(4);
        let base = SynthSpec::uniform(3, 30, 4, 0.4, 20.0);
        let pts: Vec<SweepPoint<f64>> = sweep(
            &base,
            &base.reseeded(4),
            &Perturbation::Rotation {
                first: 0,
                second: 1,
                angles: vec![1.0, 0.0, 0.5],
            },
            &AnalysisConfig::default(),
            &l,
        )
        .unwrap();
        let values: Vec<f64> = pts.iter().map(|p| p.value).collect();
        assert_eq!(values, [0.0, 0.5, 1.0]);
        let p = Perturbation::Rotation {
            first: 0,
            second: 1,
            angles: vec![],
        };
        let (_, b) = p.apply(&base, &base, std::f64::consts::FRAC_PI_2);
        assert!((b.labels[0].mean - 0.6).abs() < 1e-12);
        assert!((b.labels[1].mean - 0.4).abs() < 1e-12);
    }

    #[test]
    fn sweep_rejects_bad_indices() {
        let l = labels(3);
        let base = SynthSpec::uniform(3, 10, 3, 0.4, 20.0);
        let p = Perturbation::MeanShift {
            deltas: vec![0.1],
            labels: vec![5],
        };
        assert!(sweep::<f64>(&base, &base, &p, &AnalysisConfig::default(), &l).is_err());
    }
}
