//! Deterministic chunked parallelism. Work is split into fixed-size chunks
//! whose boundaries do not depend on the worker count, and chunk results
//! are merged in chunk order, so results are bit-identical no matter how
//! many threads run.

use std::sync::atomic::{AtomicUsize, Ordering};

static MAX_THREADS: AtomicUsize = AtomicUsize::new(0);

/// Caps the worker count for subsequent parallel maps (0 = auto).
pub fn set_max_threads(n: usize) {
    MAX_THREADS.store(n, Ordering::SeqCst);
}

pub fn max_threads() -> usize {
    let cap = MAX_THREADS.load(Ordering::SeqCst);
    let avail = std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1);
    if cap == 0 {
        avail
    } else {
        cap.min(avail)
    }
}

const CHUNK: usize = 2048;

/// Maps `f` over `0..len` in fixed chunks, returning per-index results in
/// order. `f` must be pure.
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync>(len: usize, f: F) -> Vec<T> {
    let threads = max_threads();
    if threads <= 1 || len <= CHUNK {
        return (0..len).map(f).collect();
    }
    let nchunks = len.div_ceil(CHUNK);
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<Vec<T>>> = (0..nchunks).map(|_| None).collect();
    let slot_ptr = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(nchunks) {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::SeqCst);
                if c >= nchunks {
                    break;
                }
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(len);
                let out: Vec<T> = (lo..hi).map(&f).collect();
                let mut guard = slot_ptr.lock().unwrap();
                guard[c] = Some(out);
            });
        }
    });
    slots.into_iter().flat_map(|s| s.expect("chunk computed")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let out = map_indexed(10_000, |i| i * i);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }

    #[test]
    fn result_independent_of_thread_cap() {
        set_max_threads(1);
        let a = map_indexed(5000, |i| (i as f64).sin());
        set_max_threads(4);
        let b = map_indexed(5000, |i| (i as f64).sin());
        set_max_threads(0);
        assert_eq!(a, b);
    }
}
