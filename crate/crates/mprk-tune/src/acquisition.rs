//! Acquisition functions for minimization under a Gaussian posterior.

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Expected improvement below `best` for a posterior `N(mu, sd^2)`.
pub fn expected_improvement(mu: f64, sd: f64, best: f64) -> f64 {
    if sd <= 0.0 {
        return (best - mu).max(0.0);
    }
    let z = (best - mu) / sd;
    (sd * (z * normal_cdf(z) + normal_pdf(z))).max(0.0)
}

/// Probability of improving below `best - xi`.
pub fn prob_improvement(mu: f64, sd: f64, best: f64, xi: f64) -> f64 {
    if sd <= 0.0 {
        return if mu < best - xi { 1.0 } else { 0.0 };
    }
    normal_cdf((best - xi - mu) / sd)
}
