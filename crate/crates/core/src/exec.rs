//! Sequential or data-parallel evaluation of independent work items.

/// How independent items are evaluated. `Parallel` falls back to sequential
/// evaluation when the crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `items`, keeping input order in the output.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Runs `f` inside a pool of `threads` workers (or inline when sequential).
    pub fn install<R: Send>(self, threads: usize, f: impl FnOnce() -> R + Send) -> R {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if threads > 0 => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(f),
                Err(e) => {
                    log::warn!("could not build a {threads}-thread pool ({e}); using the global pool");
                    f()
                }
            },
            _ => {
                let _ = threads;
                f()
            }
        }
    }

    /// `Sequential` for one thread, `Parallel` otherwise.
    pub fn for_threads(threads: usize) -> Exec {
        if threads == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_keeps_order() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Exec::Sequential.map(&items, |x| x * 3);
        let par = Exec::Parallel.map(&items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(par[999], 2997);
    }

    #[test]
    fn install_runs_closure() {
        assert_eq!(Exec::Parallel.install(2, || 7), 7);
        assert_eq!(Exec::Sequential.install(8, || 7), 7);
    }
}
