//! Execution mode for the data-parallel loops.
//!
//! Every enumeration in the crate funnels through [`map_collect`] so the
//! same call site runs on rayon when the `parallel` feature is enabled and
//! falls back to a plain iterator otherwise. Output order never depends on
//! the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` only if the crate was built with rayon.
    pub fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `items` and concatenates the results in input order.
pub fn map_collect<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel if items.len() > 1 => items.par_iter().map(&f).flatten_iter().collect(),
        _ => items.iter().flat_map(f).collect(),
    }
}

/// Maps `f` over `items`, preserving order, one output per input.
pub fn map<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Exec::Parallel if items.len() > 1 => items.par_iter().map(&f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u32> = (0..500).collect();
        let f = |x: &u32| (0..(x % 4)).map(|k| x * 10 + k).collect::<Vec<_>>();
        assert_eq!(
            map_collect(Exec::Sequential, &xs, f),
            map_collect(Exec::Parallel, &xs, f)
        );
        assert_eq!(
            map(Exec::Sequential, &xs, |x| x * 3),
            map(Exec::Parallel, &xs, |x| x * 3)
        );
    }
}
