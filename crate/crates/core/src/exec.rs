use serde::{Deserialize, Serialize};

/// How independent work items (grid cells, lattice rows, quadrature rows)
/// are scheduled. Results are identical in both modes: items are evaluated
/// independently and always reduced in index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExecMode {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled; falls back
    /// to sequential otherwise.
    #[default]
    Parallel,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_in_both_modes() {
        let seq = map_indexed(1000, ExecMode::Sequential, |i| (i as f64).sqrt());
        let par = map_indexed(1000, ExecMode::Parallel, |i| (i as f64).sqrt());
        assert_eq!(seq, par);
        assert_eq!(seq[9], 3.0);
    }
}
