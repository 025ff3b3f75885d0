//! Multi-threaded bounded entailment search.
//!
//! The index range is cut into fixed-size blocks that workers claim in
//! increasing order. The reported countermodel is the one with the smallest
//! index, and the statistics are those of a sequential scan stopping there,
//! so the verdict does not depend on the number of threads or on timing.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{mpsc, Mutex};
use std::thread;
use std::time::Duration;

use alcft_core::engine::{
    enumerate_interpretations, search, EngineError, EntailmentProblem, EntailmentVerdict, SearchConfig, SearchStats,
};
use alcft_core::interpretation::EvalError;
use alcft_core::FuzzyInterpretation;

const BLOCK: u128 = 4096;

/// Thread count and wall-clock limit for [`parallel_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parallelism {
    pub jobs: usize,
    pub timeout: Option<Duration>,
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism { jobs: 1, timeout: None }
    }
}

enum Stop {
    Countermodel(FuzzyInterpretation),
    Error(EvalError),
}

#[derive(Default)]
struct Tally {
    examined: u64,
    models: u64,
    stop: Option<(u128, Stop)>,
}

/// Runs `f` while a watcher thread raises `cancel` after `timeout`.
fn with_deadline<T: Send>(timeout: Option<Duration>, cancel: &AtomicBool, f: impl FnOnce() -> T + Send) -> T {
    let Some(timeout) = timeout else { return f() };
    thread::scope(|s| {
        let (done, wait) = mpsc::channel::<()>();
        s.spawn(move || {
            if wait.recv_timeout(timeout) == Err(mpsc::RecvTimeoutError::Timeout) {
                cancel.store(true, Ordering::Relaxed);
            }
        });
        let out = f();
        drop(done);
        out
    })
}

/// Same verdict as [`search`], spread over `par.jobs` threads.
pub fn parallel_search(
    problem: &EntailmentProblem<'_>,
    config: &SearchConfig,
    par: Parallelism,
) -> Result<EntailmentVerdict, EngineError> {
    let cancel = AtomicBool::new(false);
    if par.jobs <= 1 {
        return with_deadline(par.timeout, &cancel, || search(problem, config, Some(&cancel)));
    }
    config.validate()?;
    problem.check()?;

    let space = enumerate_interpretations(&problem.signature(), config);
    let limit = space.len().min(u128::from(config.budget));
    let blocks = limit.div_ceil(BLOCK);
    let next = AtomicU64::new(0);
    // Smallest block holding a stop so far; blocks past it are skipped.
    let best = AtomicU64::new(u64::MAX);
    let tallies: Mutex<Vec<(u64, Tally)>> = Mutex::new(Vec::new());

    let worker = || loop {
        let b = next.fetch_add(1, Ordering::Relaxed);
        if u128::from(b) >= blocks || b > best.load(Ordering::Relaxed) || cancel.load(Ordering::Relaxed) {
            return;
        }
        let start = u128::from(b) * BLOCK;
        let mut tally = Tally::default();
        space.scan(start..(start + BLOCK).min(limit), |index, interp| {
            if tally.examined % 256 == 0 && (cancel.load(Ordering::Relaxed) || b > best.load(Ordering::Relaxed)) {
                return ControlFlow::Break(());
            }
            tally.examined += 1;
            match problem.classify(interp) {
                Err(e) => tally.stop = Some((index, Stop::Error(e))),
                Ok(c) => {
                    tally.models += u64::from(c.is_model);
                    if c.is_countermodel {
                        tally.stop = Some((index, Stop::Countermodel(interp.clone())));
                    }
                }
            }
            match tally.stop {
                Some(_) => ControlFlow::Break(()),
                None => ControlFlow::Continue(()),
            }
        });
        if tally.stop.is_some() {
            best.fetch_min(b, Ordering::Relaxed);
        }
        tallies.lock().expect("worker panicked").push((b, tally));
    };
    with_deadline(par.timeout, &cancel, || {
        thread::scope(|s| {
            for _ in 0..par.jobs {
                s.spawn(worker);
            }
        })
    });

    let mut tallies = tallies.into_inner().expect("worker panicked");
    tallies.sort_by_key(|(b, _)| *b);
    let cancelled = cancel.load(Ordering::Relaxed);
    let mut stats = SearchStats {
        examined: 0,
        models: 0,
        space: space.exact_len(),
        truncated: space.len() > u128::from(config.budget),
        cancelled,
        max_domain: config.max_domain,
        denominator: config.denominator,
    };
    let stop_block = best.load(Ordering::Relaxed);
    for (b, tally) in tallies {
        if b > stop_block {
            break;
        }
        stats.examined += tally.examined;
        stats.models += tally.models;
        match tally.stop {
            Some((_, Stop::Error(e))) => return Err(e.into()),
            Some((index, Stop::Countermodel(countermodel))) => {
                // Unless cancelled, earlier blocks all ran to completion and
                // this is the first countermodel in enumeration order.
                return Ok(EntailmentVerdict::Refuted { countermodel, index, stats });
            }
            None => {}
        }
    }
    Ok(EntailmentVerdict::NoCountermodelWithinBounds { stats })
}
