//! Fixed instances for the criterion benchmarks.

use gmcp_core::netgen::GenConfig;
use gmcp_core::{generate, Instance};

/// Expected Erdős-Rényi out-degree of the benchmark instances.
pub const ER_DEGREE: f64 = 50.0;

/// One generated instance per size `n`, with `n / 2` paths and `n / 10`
/// cycles.
pub fn fixtures(sizes: &[usize]) -> Vec<(usize, Instance)> {
    sizes
        .iter()
        .map(|&n| {
            let cfg = GenConfig::new(n, n / 2, n / 10, (ER_DEGREE / n as f64).min(1.0), n as u64);
            (n, generate(&cfg).expect("fixture config is valid"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(fixtures(&[100]), fixtures(&[100]));
        assert_eq!(fixtures(&[100, 200]).len(), 2);
    }
}
