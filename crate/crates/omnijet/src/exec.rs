//! Data-parallel sweep helpers.
//!
//! Per-point and per-triple checks are embarrassingly parallel: the shared
//! state is the precomputed sample set, results are order-independent except
//! for which witness gets reported. `find_map_first` keeps the *first*
//! failure in item order even on the parallel path, so verdicts are
//! identical with and without the `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First `Some` produced by `f` over `items`, in item order.
pub fn find_map_first<I, T, F>(items: &[I], f: F) -> Option<T>
where
    I: Sync,
    T: Send,
    F: Sync + Fn(&I) -> Option<T>,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().filter_map(|i| f(i)).find_first(|_| true)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(f)
    }
}

/// Sequential twin of [`find_map_first`]; the benchmark suite compares the
/// two on identical workloads.
pub fn find_map_first_seq<I, T, F>(items: &[I], f: F) -> Option<T>
where
    F: Fn(&I) -> Option<T>,
{
    items.iter().find_map(f)
}

/// Order-preserving map over items.
pub fn map_collect<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Sync + Fn(&I) -> T,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(|i| f(i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`map_collect`].
pub fn map_collect_seq<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    F: Fn(&I) -> T,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_match_wins_in_item_order() {
        let items: Vec<usize> = (0..1000).collect();
        let hit = find_map_first(&items, |&i| if i % 7 == 3 { Some(i) } else { None });
        assert_eq!(hit, Some(3));
        let seq = find_map_first_seq(&items, |&i| if i % 7 == 3 { Some(i) } else { None });
        assert_eq!(hit, seq);
    }

    #[test]
    fn map_keeps_order() {
        let items: Vec<usize> = (0..100).collect();
        let doubled = map_collect(&items, |&i| 2 * i);
        assert_eq!(doubled, map_collect_seq(&items, |&i| 2 * i));
    }
}
