/// Uniform time grid `t_i = i · t_max / (n − 1)` in units of `1/γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn uniform(t_max: f64, n: usize) -> Self {
        let n = n.max(2);
        let dt = t_max / (n - 1) as f64;
        let mut times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        times[n - 1] = t_max;
        TimeGrid { t_max, times }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.times.len() - 1) as f64
    }
}

/// True when two sampled series live on bit-identical grids.
pub(crate) fn same_grid(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}
