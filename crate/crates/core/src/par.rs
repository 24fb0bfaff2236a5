//! Data-parallel helpers. With the `parallel` feature these fan out over rayon;
//! without it they run the same closures sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps every item and sums the results.
pub fn map_sum<T, R, F>(items: &[T], f: F) -> R
where
    T: Sync,
    R: Send + std::iter::Sum<R> + std::ops::Add<Output = R> + Default,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).reduce(R::default, |x, y| x + y)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).sum()
    }
}

/// Maps every item, keeping input order.
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
