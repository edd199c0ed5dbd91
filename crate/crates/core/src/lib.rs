//! Exact verification and constructive machinery for map-type colourings of
//! the plane.
//!
//! Coordinates of maps and circle colourings are exact rationals; curve
//! constructions use `f64` with explicit tolerances.

use std::sync::OnceLock;

pub mod circlecolor;
pub mod corpus;
pub mod curves;
pub mod geom;
pub mod io;
pub mod planemap;
pub mod properness;
pub mod render;
pub mod scanner;

/// Environment variable capping the worker count (`0` or unset means auto).
pub const THREADS_ENV: &str = "CHROMAP_THREADS";

/// Shared worker pool sized from [`THREADS_ENV`].
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
    })
}
