//! Data-parallel batch layer for the property suites and the CLI.
//!
//! Every batch in this crate is a pure function of a per-sample seed, so
//! sharding is free: samples get disjoint seeds and the result order is the
//! sample order regardless of thread count. With the `parallel` feature
//! (default) the maps run on rayon; without it they degrade to plain
//! iterators with the same API and output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::generators::Seed;

/// Maps `f` over `0..count`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..count`, in parallel when the `parallel` feature is on.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Sequential twin of [`map_indexed`], available under either feature; the
/// benchmark suite compares the two on identical workloads.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Maps `f` over the seeds `base..base+count` (wrapping).
pub fn map_seeds<T, F>(base: Seed, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Seed) -> T + Sync + Send,
{
    map_indexed(count, |i| f(base.wrapping_add(i as u64)))
}

/// Sequential twin of [`map_seeds`].
pub fn map_seeds_seq<T, F>(base: Seed, count: usize, f: F) -> Vec<T>
where
    F: Fn(Seed) -> T,
{
    map_indexed_seq(count, |i| f(base.wrapping_add(i as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let par = map_seeds(100, 64, |s| s.wrapping_mul(s));
        let seq = map_seeds_seq(100, 64, |s| s.wrapping_mul(s));
        assert_eq!(par, seq);
    }

    #[test]
    fn order_is_sample_order() {
        let out = map_indexed(16, |i| i * 3);
        assert_eq!(out, (0..16).map(|i| i * 3).collect::<Vec<_>>());
    }
}
