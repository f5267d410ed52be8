//! Stochastic and greedy search over Latin hypercubes and U-type designs.
//!
//! All moves swap two entries within one column, so column level multisets
//! are preserved. Restarts run in parallel with per-restart seeds derived from
//! the master seed; the winner is the lowest value, ties going to the lowest
//! restart index, so results do not depend on thread scheduling.

mod objective;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::design::{random_balanced_design, random_latin_hypercube, LevelMatrix};
use crate::distance::DistanceOrder;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rng::{self, DesignRng};

pub(crate) use objective::Evaluator;
pub use objective::Objective;

/// Samples used to estimate the initial temperature or threshold scale.
const CALIBRATION_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchParams {
    pub seed: u64,
    /// Proposals per restart.
    pub max_iterations: usize,
    /// Starting temperature; estimated from random neighbours when absent.
    pub initial_temperature: Option<f64>,
    pub cooling_factor: f64,
    /// Proposals between cooling steps; `100 n` when absent.
    pub cooling_interval: Option<usize>,
    pub restarts: usize,
    /// Number of threshold levels for threshold accepting.
    pub threshold_stages: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            seed: 0,
            max_iterations: 10_000,
            initial_temperature: None,
            cooling_factor: 0.95,
            cooling_interval: None,
            restarts: 1,
            threshold_stages: 20,
        }
    }
}

impl SearchParams {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidParameter(
                "restarts must be at least 1".into(),
            ));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cooling factor {}",
                self.cooling_factor
            )));
        }
        if self.threshold_stages == 0 {
            return Err(Error::InvalidParameter(
                "threshold stages must be at least 1".into(),
            ));
        }
        if let Some(t) = self.initial_temperature {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter(format!("initial temperature {t}")));
            }
        }
        Ok(())
    }
}

/// Objective values after each recorded step, starting with the initial design.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchTrace {
    pub current: Vec<f64>,
    pub best: Vec<f64>,
}

impl SearchTrace {
    fn push(&mut self, current: f64, best: f64) {
        self.current.push(current);
        self.best.push(best);
    }

    fn extend(&mut self, other: SearchTrace) {
        self.current.extend(other.current);
        self.best.extend(other.best);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub design: LevelMatrix,
    pub value: f64,
    /// Restart that produced the design.
    pub restart: usize,
    pub trace: SearchTrace,
}

/// State passed to an observer after every proposal.
#[derive(Debug)]
pub struct SearchEvent<'a> {
    pub restart: usize,
    pub iteration: usize,
    /// Doubled levels of the current design.
    pub design: &'a IntMatrix,
    pub current: f64,
    pub best: f64,
}

type Observer<'o> = &'o mut dyn FnMut(&SearchEvent<'_>);

/// Simulated annealing from a random Latin hypercube.
pub fn anneal_lh(
    n: usize,
    k: usize,
    objective: Objective,
    params: &SearchParams,
) -> Result<SearchOutcome> {
    params.validate()?;
    restarts(params, |restart, seed| {
        let start = random_latin_hypercube(n, k, seed)?;
        anneal_chain(
            start,
            objective,
            params,
            restart,
            rng::stream(seed, 1),
            None,
        )
    })
}

/// Simulated annealing from a given design, single chain per restart, with
/// `observer` called after every proposal. Restarts run sequentially.
pub fn anneal_observed(
    start: &LevelMatrix,
    objective: Objective,
    params: &SearchParams,
    observer: Observer<'_>,
) -> Result<SearchOutcome> {
    params.validate()?;
    let mut best: Option<SearchOutcome> = None;
    for restart in 0..params.restarts {
        let seed = rng::child_seed(params.seed, restart as u64);
        let outcome = anneal_chain(
            start.clone(),
            objective,
            params,
            restart,
            rng::stream(seed, 1),
            Some(observer),
        )?;
        if best.as_ref().is_none_or(|b| outcome.value < b.value) {
            best = Some(outcome);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Simulated annealing from a given design.
pub fn anneal_from(
    start: &LevelMatrix,
    objective: Objective,
    params: &SearchParams,
) -> Result<SearchOutcome> {
    params.validate()?;
    restarts(params, |restart, seed| {
        anneal_chain(
            start.clone(),
            objective,
            params,
            restart,
            rng::stream(seed, 1),
            None,
        )
    })
}

/// Threshold accepting over U-type designs with `levels` levels per column.
pub fn threshold_accepting_utype(
    n: usize,
    k: usize,
    levels: usize,
    objective: Objective,
    params: &SearchParams,
) -> Result<SearchOutcome> {
    params.validate()?;
    restarts(params, |restart, seed| {
        let start = random_balanced_design(n, k, levels, seed)?;
        threshold_chain(start, objective, params, restart, rng::stream(seed, 1))
    })
}

/// Greedy columnwise-pairwise exchange: each column in turn takes its best
/// improving swap; stops after a sweep without improvement or after
/// `max_sweeps` sweeps.
pub fn columnwise_pairwise(
    start: &LevelMatrix,
    objective: Objective,
    max_sweeps: usize,
) -> Result<SearchOutcome> {
    let mut eval = Evaluator::new(start, objective)?;
    let (n, k) = (start.rows(), start.cols());
    let mut trace = SearchTrace::default();
    trace.push(eval.value(), eval.value());
    for _ in 0..max_sweeps {
        let mut improved = false;
        for col in 0..k {
            let mut choice: Option<(f64, usize, usize)> = None;
            for r1 in 0..n {
                for r2 in r1 + 1..n {
                    let v = eval.propose(col, r1, r2)?;
                    if v < choice.map_or(eval.value(), |c| c.0) {
                        choice = Some((v, r1, r2));
                    }
                }
            }
            if let Some((_, r1, r2)) = choice {
                let before = eval.value();
                eval.apply(col, r1, r2)?;
                if eval.value() < before {
                    improved = true;
                }
                trace.push(eval.value(), eval.value());
            }
        }
        if !improved || at_bound(objective, eval.value()) {
            break;
        }
    }
    Ok(SearchOutcome {
        value: eval.value(),
        design: eval.level_matrix(),
        restart: 0,
        trace,
    })
}

/// Maximin Latin hypercube: annealing on φ_q followed by a columnwise-pairwise
/// polish. The reported value is φ_q of the result.
pub fn maximin_lh(
    n: usize,
    k: usize,
    q: u32,
    order: DistanceOrder,
    params: &SearchParams,
) -> Result<SearchOutcome> {
    let objective = Objective::PhiQ { q, order };
    let annealed = anneal_lh(n, k, objective, params)?;
    let polished = columnwise_pairwise(&annealed.design, objective, n * k)?;
    let mut trace = annealed.trace;
    trace.extend(polished.trace);
    let (design, value) = if polished.value <= annealed.value {
        (polished.design, polished.value)
    } else {
        (annealed.design, annealed.value)
    };
    Ok(SearchOutcome {
        design,
        value,
        restart: annealed.restart,
        trace,
    })
}

fn restarts<F>(params: &SearchParams, chain: F) -> Result<SearchOutcome>
where
    F: Fn(usize, u64) -> Result<SearchOutcome> + Sync,
{
    let outcomes: Vec<SearchOutcome> = (0..params.restarts)
        .into_par_iter()
        .map(|r| chain(r, rng::child_seed(params.seed, r as u64)))
        .collect::<Result<_>>()?;
    Ok(outcomes
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart"))
}

fn at_bound(objective: Objective, value: f64) -> bool {
    objective.lower_bound().is_some_and(|b| value <= b + 1e-15)
}

fn random_move(rng: &mut DesignRng, n: usize, k: usize) -> (usize, usize, usize) {
    let col = rng.gen_range(0..k);
    let r1 = rng.gen_range(0..n);
    let mut r2 = rng.gen_range(0..n - 1);
    if r2 >= r1 {
        r2 += 1;
    }
    (col, r1, r2)
}

/// Standard deviation of objective changes over random neighbours.
fn neighbour_spread(eval: &Evaluator, rng: &mut DesignRng) -> Result<f64> {
    let (n, k) = (eval.design().rows(), eval.design().cols());
    let mut deltas = Vec::with_capacity(CALIBRATION_SAMPLES);
    for _ in 0..CALIBRATION_SAMPLES {
        let (c, a, b) = random_move(rng, n, k);
        let d = eval.propose(c, a, b)? - eval.value();
        if d.is_finite() {
            deltas.push(d);
        }
    }
    if deltas.is_empty() {
        return Ok(1.0);
    }
    let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
    let var = deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / deltas.len() as f64;
    let sd = var.sqrt();
    Ok(if sd > 0.0 {
        sd
    } else {
        eval.value().abs().max(1e-12) * 1e-3
    })
}

fn check_movable(design: &LevelMatrix) -> Result<()> {
    if design.rows() < 2 || design.cols() == 0 {
        return Err(Error::InvalidDimension(format!(
            "{}x{} design has no within-column swaps",
            design.rows(),
            design.cols()
        )));
    }
    Ok(())
}

struct Best {
    design: IntMatrix,
    value: f64,
}

fn anneal_chain(
    start: LevelMatrix,
    objective: Objective,
    params: &SearchParams,
    restart: usize,
    mut rng: DesignRng,
    mut observer: Option<Observer<'_>>,
) -> Result<SearchOutcome> {
    check_movable(&start)?;
    let (n, k, levels) = (start.rows(), start.cols(), start.levels());
    let mut eval = Evaluator::new(&start, objective)?;
    let mut temperature = match params.initial_temperature {
        Some(t) => t,
        None => neighbour_spread(&eval, &mut rng)?,
    };
    let interval = params.cooling_interval.unwrap_or(100 * n).max(1);
    let mut best = Best {
        design: eval.design().clone(),
        value: eval.value(),
    };
    let mut trace = SearchTrace::default();
    trace.push(eval.value(), best.value);
    for iteration in 1..=params.max_iterations {
        if at_bound(objective, best.value) {
            break;
        }
        let (col, r1, r2) = random_move(&mut rng, n, k);
        let proposed = eval.propose(col, r1, r2)?;
        let delta = proposed - eval.value();
        let accept =
            delta <= 0.0 || (delta.is_finite() && rng.gen::<f64>() < (-delta / temperature).exp());
        if accept {
            eval.apply(col, r1, r2)?;
            if eval.value() < best.value {
                best = Best {
                    design: eval.design().clone(),
                    value: eval.value(),
                };
            }
        }
        trace.push(eval.value(), best.value);
        if let Some(obs) = observer.as_mut() {
            obs(&SearchEvent {
                restart,
                iteration,
                design: eval.design(),
                current: eval.value(),
                best: best.value,
            });
        }
        if iteration % interval == 0 {
            temperature *= params.cooling_factor;
        }
    }
    finish(best, levels, objective, restart, trace)
}

fn threshold_chain(
    start: LevelMatrix,
    objective: Objective,
    params: &SearchParams,
    restart: usize,
    mut rng: DesignRng,
) -> Result<SearchOutcome> {
    check_movable(&start)?;
    let (n, k, levels) = (start.rows(), start.cols(), start.levels());
    let mut eval = Evaluator::new(&start, objective)?;
    let scale = neighbour_spread(&eval, &mut rng)?;
    let stages = params.threshold_stages;
    let per_stage = (params.max_iterations / stages).max(1);
    let mut best = Best {
        design: eval.design().clone(),
        value: eval.value(),
    };
    let mut trace = SearchTrace::default();
    trace.push(eval.value(), best.value);
    'stages: for stage in 0..stages {
        let threshold = scale * (1.0 - stage as f64 / stages as f64);
        for _ in 0..per_stage {
            if at_bound(objective, best.value) {
                break 'stages;
            }
            let (col, r1, r2) = random_move(&mut rng, n, k);
            let proposed = eval.propose(col, r1, r2)?;
            if proposed - eval.value() <= threshold {
                eval.apply(col, r1, r2)?;
                if eval.value() < best.value {
                    best = Best {
                        design: eval.design().clone(),
                        value: eval.value(),
                    };
                }
            }
            trace.push(eval.value(), best.value);
        }
    }
    finish(best, levels, objective, restart, trace)
}

fn finish(
    best: Best,
    levels: usize,
    objective: Objective,
    restart: usize,
    trace: SearchTrace,
) -> Result<SearchOutcome> {
    let design = LevelMatrix::from_doubled(best.design, levels)?;
    let value = objective.evaluate(&design)?;
    Ok(SearchOutcome {
        design,
        value,
        restart,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::validate_latin_hypercube;
    use crate::distance::phi_q;

    fn params(seed: u64, iters: usize, restarts: usize) -> SearchParams {
        SearchParams {
            seed,
            max_iterations: iters,
            restarts,
            ..SearchParams::default()
        }
    }

    #[test]
    fn anneal_improves_phi_q_and_keeps_latin() {
        let obj = Objective::PhiQ {
            q: 15,
            order: DistanceOrder::EUCLIDEAN,
        };
        let start = random_latin_hypercube(12, 3, 5).unwrap();
        let out = anneal_lh(12, 3, obj, &params(5, 3000, 1)).unwrap();
        assert!(validate_latin_hypercube(&out.design).passed);
        assert!(out.value <= obj.evaluate(&start).unwrap());
        assert_eq!(
            out.value,
            phi_q(&out.design, 15, DistanceOrder::EUCLIDEAN).unwrap()
        );
        assert!(out.trace.best.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn restarts_are_deterministic_and_never_worse() {
        let obj = Objective::RhoAveSq;
        let one = anneal_lh(9, 4, obj, &params(3, 500, 1)).unwrap();
        let many = anneal_lh(9, 4, obj, &params(3, 500, 4)).unwrap();
        let again = anneal_lh(9, 4, obj, &params(3, 500, 4)).unwrap();
        assert_eq!(many, again);
        assert!(many.value <= one.value);
    }

    #[test]
    fn finds_orthogonal_small_lh() {
        let out = anneal_lh(9, 2, Objective::RhoMax, &params(1, 20_000, 4)).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn cp_reaches_local_optimum() {
        let obj = Objective::PhiQ {
            q: 10,
            order: DistanceOrder::RECTANGULAR,
        };
        let start = random_latin_hypercube(8, 3, 2).unwrap();
        let out = columnwise_pairwise(&start, obj, 100).unwrap();
        let eval = Evaluator::new(&out.design, obj).unwrap();
        for col in 0..3 {
            for a in 0..8 {
                for b in a + 1..8 {
                    assert!(eval.propose(col, a, b).unwrap() >= out.value - 1e-12);
                }
            }
        }
    }

    #[test]
    fn threshold_accepting_keeps_balance() {
        let out = threshold_accepting_utype(12, 3, 4, Objective::Cl2, &params(8, 2000, 2)).unwrap();
        assert_eq!(out.design.levels(), 4);
        let start = random_balanced_design(12, 3, 4, 0).unwrap();
        for j in 0..3 {
            let mut a = out.design.doubled().column(j);
            let mut b = start.doubled().column(j);
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn observer_sees_every_proposal() {
        let start = random_latin_hypercube(6, 2, 1).unwrap();
        let mut seen = 0;
        let mut obs = |e: &SearchEvent<'_>| {
            seen += 1;
            assert!(e.best <= e.current + 1e-12);
        };
        let p = SearchParams {
            initial_temperature: Some(1.0),
            ..params(2, 50, 1)
        };
        anneal_observed(
            &start,
            Objective::AudzeEglais {
                order: DistanceOrder::EUCLIDEAN,
            },
            &p,
            &mut obs,
        )
        .unwrap();
        assert_eq!(seen, 50);
    }

    #[test]
    fn maximin_beats_random() {
        let out = maximin_lh(10, 2, 15, DistanceOrder::EUCLIDEAN, &params(4, 2000, 2)).unwrap();
        let random = phi_q(
            &random_latin_hypercube(10, 2, 4).unwrap(),
            15,
            DistanceOrder::EUCLIDEAN,
        )
        .unwrap();
        assert!(out.value < random);
    }

    #[test]
    fn rejects_bad_params() {
        let p = SearchParams {
            restarts: 0,
            ..SearchParams::default()
        };
        assert!(anneal_lh(4, 2, Objective::RhoMax, &p).is_err());
        assert!(anneal_lh(1, 2, Objective::RhoMax, &SearchParams::default()).is_err());
    }
}
