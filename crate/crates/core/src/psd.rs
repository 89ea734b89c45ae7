//! PSD-side predicates: sampling refutation of Hankel PSD membership, an exact
//! decision for binary forms, samples of the convolution cone `U(m, n)`, the
//! pairing experiment between the two, and a search harness for PSD Hankel
//! forms that resist SOS certification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::convolution::{conv_power, dot, hankel_form, norm};
use crate::error::{Error, Result};
use crate::sampling;
use crate::sos::{check_hsos, FeasibilityVerdict, Refutation, SosCertificate};
use crate::tensor::{rank_one, GeneratingVector, SymmetricTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingVerdict {
    Refuted,
    NoNegativeFound,
}

/// Result of evaluating a Hankel form at many unit vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub generator: String,
    pub seed: u64,
    /// Points evaluated: the `2n` signed coordinate vectors plus the random ones.
    pub samples: usize,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub verdict: SamplingVerdict,
}

impl SamplingReport {
    pub fn is_refuted(&self) -> bool {
        self.verdict == SamplingVerdict::Refuted
    }
}

/// Evaluates `v • x^{*m}` at the signed coordinate vectors and at `count`
/// random unit vectors. The form is refuted when a value drops below
/// `−eps_certify`.
///
/// Points are drawn sequentially, so a larger `count` with the same seed
/// evaluates a superset of the points.
pub fn sample_psd(
    gv: &GeneratingVector,
    count: usize,
    seed: u64,
    config: &SolverConfig,
) -> Result<SamplingReport> {
    let n = gv.n();
    let mut best = f64::INFINITY;
    let mut argmin = vec![0.0; n];
    let mut consider = |x: Vec<f64>| -> Result<()> {
        let value = hankel_form(gv, &x)?;
        if value < best {
            best = value;
            argmin = x;
        }
        Ok(())
    };
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            consider(e)?;
        }
    }
    let mut rng = sampling::rng(seed);
    for _ in 0..count {
        consider(sampling::unit_vec(&mut rng, n))?;
    }
    let verdict = if best < -config.eps_certify {
        SamplingVerdict::Refuted
    } else {
        SamplingVerdict::NoNegativeFound
    };
    Ok(SamplingReport {
        generator: sampling::GENERATOR.into(),
        seed,
        samples: 2 * n + count,
        min_value: best,
        argmin,
        verdict,
    })
}

/// Decision for binary forms, where PSD and SOS coincide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum BinaryDecision {
    Psd {
        certificate: SosCertificate,
    },
    NotPsd {
        witness: Vec<f64>,
        value: f64,
    },
    BoundaryInconclusive {
        min_value: f64,
        samples: usize,
        note: String,
    },
}

/// Decides PSD-ness of a binary Hankel form (`n = 2`).
///
/// A certificate from `check_hsos` (tightened tolerances) proves PSD; a
/// negative sampled value disproves it. If neither turns up, sampling is
/// repeated once with ten times as many points before giving up.
pub fn decide_psd_n2(
    gv: &GeneratingVector,
    samples: usize,
    seed: u64,
    config: &SolverConfig,
) -> Result<BinaryDecision> {
    if gv.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "binary decision requires n = 2, got n = {}",
            gv.n()
        )));
    }
    gv.require_even()?;
    let tight = config.tightened();
    match check_hsos(gv, &tight)? {
        FeasibilityVerdict::Certified(certificate) => return Ok(BinaryDecision::Psd { certificate }),
        FeasibilityVerdict::Refuted(Refutation::Point { x, value }) => {
            return Ok(BinaryDecision::NotPsd { witness: x, value })
        }
        _ => {}
    }
    let mut last = None;
    for count in [samples, samples.saturating_mul(10)] {
        let report = sample_psd(gv, count, seed, &tight)?;
        if report.is_refuted() {
            return Ok(BinaryDecision::NotPsd {
                witness: report.argmin,
                value: report.min_value,
            });
        }
        last = Some(report);
    }
    let report = last.expect("loop ran");
    Ok(BinaryDecision::BoundaryInconclusive {
        min_value: report.min_value,
        samples: report.samples,
        note: "no certificate and no negative value; the form is at or near the PSD boundary".into(),
    })
}

/// A point `y = Σ_j λ_j (x^j)^{*m}` of the convex hull of convolution powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UConeSample {
    pub m: usize,
    pub bases: Vec<Vec<f64>>,
    /// Convex weights `λ_j`.
    pub weights: Vec<f64>,
    pub y: Vec<f64>,
}

impl UConeSample {
    /// Builds the sample from explicit bases and convex weights.
    pub fn from_parts(m: usize, bases: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if bases.is_empty() || bases.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "need one weight per base vector, got {} bases and {} weights",
                bases.len(),
                weights.len()
            )));
        }
        let n = bases[0].len();
        if n == 0 || bases.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidArgument(
                "base vectors must share a positive length".into(),
            ));
        }
        if weights.iter().any(|&w| w < 0.0) || (sampling::kahan_sum(&weights) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "weights must be nonnegative and sum to one".into(),
            ));
        }
        let mut y = vec![0.0; (n - 1) * m + 1];
        for (b, w) in bases.iter().zip(&weights) {
            for (yi, c) in y.iter_mut().zip(conv_power(b, m)) {
                *yi += w * c;
            }
        }
        Ok(Self { m, bases, weights, y })
    }

    /// `s · y`, an element of the cone generated by the convex hull.
    pub fn cone_element(&self, s: f64) -> Vec<f64> {
        self.y.iter().map(|v| v * s).collect()
    }
}

/// Random element of `U(m, n)` with `terms` standard-normal bases and uniform simplex weights.
pub fn sample_ucone(m: usize, n: usize, terms: usize, seed: u64) -> Result<UConeSample> {
    if terms == 0 || n == 0 {
        return Err(Error::InvalidArgument("terms and n must be at least 1".into()));
    }
    let mut rng = sampling::rng(seed);
    let bases: Vec<Vec<f64>> = (0..terms).map(|_| sampling::normal_vec(&mut rng, n)).collect();
    let weights = sampling::simplex_weights(&mut rng, terms);
    UConeSample::from_parts(m, bases, weights)
}

/// Random convex combination of rank-one tensors `Σ_j λ_j (x^j)^{⊗m}`.
pub fn sample_rank_one_mixture(m: usize, n: usize, terms: usize, seed: u64) -> Result<SymmetricTensor> {
    if terms == 0 {
        return Err(Error::InvalidArgument("terms must be at least 1".into()));
    }
    let mut rng = sampling::rng(seed);
    let bases: Vec<Vec<f64>> = (0..terms).map(|_| sampling::normal_vec(&mut rng, n)).collect();
    let weights = sampling::simplex_weights(&mut rng, terms);
    let tensors: Vec<SymmetricTensor> = bases.iter().map(|b| rank_one(b, m).to_symmetric()).collect();
    let terms: Vec<(f64, &SymmetricTensor)> = weights.iter().copied().zip(&tensors).collect();
    SymmetricTensor::linear_combination(&terms)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub pairs: usize,
    /// Smallest raw inner product `v • y`.
    pub min_value: f64,
    /// Smallest `v • y / max(1, ‖v‖‖y‖)`.
    pub min_scaled: f64,
    /// `(member, sample)` indices of the smallest scaled pairing.
    pub worst: Option<(usize, usize)>,
    pub pass: bool,
}

/// Scaled pairings below this fail the experiment.
pub const PAIRING_TOL: f64 = 1e-9;

/// Pairs every PSD member with every convolution-cone sample; PSD Hankel
/// vectors and `U(m, n)` are mutually dual, so all pairings should be
/// nonnegative. `jobs > 1` splits the members across a thread pool.
pub fn pairing_experiment(
    members: &[GeneratingVector],
    samples: &[UConeSample],
    jobs: usize,
) -> Result<PairingReport> {
    if let Some(first) = members.first() {
        let (m, n) = (first.m(), first.n());
        let len = first.values().len();
        for v in members {
            if v.m() != m || v.n() != n {
                return Err(Error::ShapeMismatch {
                    m,
                    n,
                    other_m: v.m(),
                    other_n: v.n(),
                });
            }
        }
        if let Some(s) = samples.iter().find(|s| s.m != m || s.y.len() != len) {
            return Err(Error::DimensionMismatch {
                expected: len,
                actual: s.y.len(),
            });
        }
    }
    // (smallest raw pairing, smallest scaled pairing, where the latter occurs)
    type MemberMin = (f64, f64, Option<(usize, usize)>);
    let per_member = |(i, v): (usize, &GeneratingVector)| -> MemberMin {
        let vnorm = norm(v.values());
        samples.iter().enumerate().fold(
            (f64::INFINITY, f64::INFINITY, None),
            |(raw, scaled, worst), (j, s)| {
                let p = dot(v.values(), &s.y);
                let sp = p / (vnorm * norm(&s.y)).max(1.0);
                let raw = raw.min(p);
                if sp < scaled {
                    (raw, sp, Some((i, j)))
                } else {
                    (raw, scaled, worst)
                }
            },
        )
    };
    let results: Vec<MemberMin> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| members.par_iter().enumerate().map(per_member).collect())
    } else {
        members.iter().enumerate().map(per_member).collect()
    };
    let mut report = PairingReport {
        pairs: members.len() * samples.len(),
        min_value: f64::INFINITY,
        min_scaled: f64::INFINITY,
        worst: None,
        pass: true,
    };
    for (raw, scaled, worst) in results {
        report.min_value = report.min_value.min(raw);
        if scaled < report.min_scaled {
            report.min_scaled = scaled;
            report.worst = worst;
        }
    }
    if report.pairs == 0 {
        report.min_value = 0.0;
        report.min_scaled = 0.0;
    }
    report.pass = report.min_scaled >= -PAIRING_TOL;
    Ok(report)
}

/// Label attached to every flagged candidate.
pub const CANDIDATE_LABEL: &str = "candidate (inconclusive)";

/// A generating vector with no sampled negative value that the SOS solver
/// could not certify. This is never a proof of anything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PnsCandidate {
    pub label: String,
    pub trial: usize,
    pub gv: GeneratingVector,
    pub sampling: SamplingReport,
    pub verdict: FeasibilityVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub trials: usize,
    pub seed: u64,
    /// Random points per sampling test; at least 10⁴ is recommended.
    pub psd_samples: usize,
    pub jobs: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            psd_samples: 10_000,
            jobs: 1,
        }
    }
}

/// Screens one generating vector: flagged when sampling finds no negative
/// value and the SOS solver does not certify it.
pub fn screen_candidate(
    gv: &GeneratingVector,
    trial: usize,
    psd_samples: usize,
    seed: u64,
    config: &SolverConfig,
) -> Result<Option<PnsCandidate>> {
    let sampling = sample_psd(gv, psd_samples, seed, config)?;
    if sampling.is_refuted() {
        return Ok(None);
    }
    let verdict = check_hsos(gv, config)?;
    if verdict.is_certified() {
        return Ok(None);
    }
    Ok(Some(PnsCandidate {
        label: CANDIDATE_LABEL.into(),
        trial,
        gv: gv.clone(),
        sampling,
        verdict,
    }))
}

/// Random unit-norm generating vector for trial `trial` of a search.
pub fn search_trial_vector(m: usize, n: usize, seed: u64, trial: usize) -> Result<GeneratingVector> {
    let mut rng = sampling::rng_stream(seed, trial as u64);
    GeneratingVector::new(m, n, sampling::unit_vec(&mut rng, (n - 1) * m + 1))
}

/// Searches random unit generating vectors for PSD Hankel forms that resist
/// SOS certification. Trial `i` draws from stream `i` of the seed, so the
/// result does not depend on `jobs`.
pub fn search_pns(
    m: usize,
    n: usize,
    settings: &SearchSettings,
    config: &SolverConfig,
) -> Result<Vec<PnsCandidate>> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::OddOrder(m));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let run = |trial: usize| -> Result<Option<PnsCandidate>> {
        let gv = search_trial_vector(m, n, settings.seed, trial)?;
        screen_candidate(
            &gv,
            trial,
            settings.psd_samples,
            settings.seed ^ trial as u64,
            config,
        )
    };
    let found: Vec<Option<PnsCandidate>> = if settings.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(settings.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| {
            (0..settings.trials)
                .into_par_iter()
                .map(run)
                .collect::<Result<_>>()
        })?
    } else {
        (0..settings.trials).map(run).collect::<Result<_>>()?
    };
    Ok(found.into_iter().flatten().collect())
}
