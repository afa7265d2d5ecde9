//! Richardson extrapolation along geometric step sequences.

/// One elimination step for an error term `c h^power`, given values at step
/// `h` (`coarse`) and `h / ratio` (`fine`).
pub fn richardson_step(coarse: f64, fine: f64, ratio: f64, power: f64) -> f64 {
    let r = ratio.powf(power);
    (r * fine - coarse) / (r - 1.0)
}

/// Limit estimate from the tail of a sequence sampled at `h, h/ratio, h/ratio^2, ...`,
/// eliminating error terms `h^1 .. h^levels` (repeated Richardson, Neville style).
/// Uses the last `levels + 1` values; returns the last value when too few exist.
pub fn extrapolate_limit(values: &[f64], ratio: f64, levels: usize) -> f64 {
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    let levels = levels.min(n - 1);
    let mut column: Vec<f64> = values[n - levels - 1..].to_vec();
    for p in 1..=levels {
        column = column
            .windows(2)
            .map(|w| richardson_step(w[0], w[1], ratio, p as f64))
            .collect();
    }
    column[0]
}
