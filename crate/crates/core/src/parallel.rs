//! Deterministic fan-out for the exhaustive search loops.
//!
//! Work is split into contiguous index chunks. Results never depend on the
//! thread count: searches report the hit with the smallest index.

use std::sync::atomic::{AtomicU64, Ordering};

/// Worker count used when the caller does not say: `COSETRA_THREADS` if set,
/// else the available parallelism.
pub fn default_threads() -> usize {
    std::env::var("COSETRA_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Returns `f(i)` for the least `i < len` where it is `Some`.
pub fn first_hit<W, F>(len: u64, threads: usize, f: F) -> Option<W>
where
    W: Send,
    F: Fn(u64) -> Option<W> + Sync,
{
    let threads = threads.max(1) as u64;
    if threads == 1 || len < 4096 {
        return (0..len).find_map(&f);
    }
    let best = AtomicU64::new(u64::MAX);
    let chunk = len.div_ceil(threads);
    let found: Vec<Option<(u64, W)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let (f, best) = (&f, &best);
                scope.spawn(move || {
                    let start = t * chunk;
                    let end = ((t + 1) * chunk).min(len);
                    for i in start..end {
                        // Checked every 1024 steps so a hit elsewhere can stop us.
                        if i % 1024 == 0 && best.load(Ordering::Relaxed) < start {
                            return None;
                        }
                        if let Some(w) = f(i) {
                            best.fetch_min(i, Ordering::Relaxed);
                            return Some((i, w));
                        }
                    }
                    None
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    found.into_iter().flatten().min_by_key(|(i, _)| *i).map(|(_, w)| w)
}

/// Maps `f` over `0..len` in order, using up to `threads` workers.
pub fn map_range<T, F>(len: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(len.max(1));
    if threads == 1 {
        return (0..len).map(f).collect();
    }
    let chunk = len.div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let f = &f;
                scope.spawn(move || (t * chunk..((t + 1) * chunk).min(len)).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
