//! Shared timing helpers for the benchmark binary.

use std::time::Instant;

/// Time `f` over `iters` runs and report the mean in microseconds; a
/// blackhole accumulator keeps the optimizer honest.
pub fn bench<T>(name: &str, iters: u32, mut f: impl FnMut() -> T) {
    // Warmup.
    for _ in 0..iters.div_ceil(10).max(1) {
        std::hint::black_box(f());
    }
    let started = Instant::now();
    for _ in 0..iters {
        std::hint::black_box(f());
    }
    let total = started.elapsed();
    println!(
        "{name:48} {:>10.2} us/iter  ({iters} iters)",
        total.as_secs_f64() * 1e6 / iters as f64
    );
}
