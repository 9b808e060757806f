//! Nonnegative Butcher tableaux underlying the MPRK families.

use crate::error::CoreError;

/// Explicit Butcher tableau with nonnegative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    /// Stage count.
    pub s: usize,
    /// Row-major strictly lower-triangular stage matrix.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ButcherTableau {
    #[inline]
    pub fn a(&self, k: usize, nu: usize) -> f64 {
        self.a[k * self.s + nu]
    }

    /// Consistency residuals: max of |Σ_ν a_kν - c_k| and |Σ_k b_k - 1|.
    pub fn consistency_residual(&self) -> f64 {
        let mut max = (self.b.iter().sum::<f64>() - 1.0).abs();
        for k in 0..self.s {
            let row: f64 = (0..self.s).map(|nu| self.a(k, nu)).sum();
            max = max.max((row - self.c[k]).abs());
        }
        max
    }

    fn assert_explicit_nonnegative(&self) -> Result<(), CoreError> {
        for k in 0..self.s {
            for nu in k..self.s {
                if self.a(k, nu) != 0.0 {
                    return Err(CoreError::InvalidProblem(format!(
                        "tableau is not explicit at ({k},{nu})"
                    )));
                }
            }
        }
        let all = self
            .a
            .iter()
            .chain(self.b.iter())
            .chain(self.c.iter())
            .all(|v| *v >= 0.0 && v.is_finite());
        if !all {
            return Err(CoreError::InfeasibleParameter(
                "tableau entries must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Two-stage second-order tableau: `c = (0, α)`, `b = (1 - 1/(2α), 1/(2α))`.
pub fn mprk22(alpha: f64) -> Result<ButcherTableau, CoreError> {
    if !(alpha >= 0.5) {
        return Err(CoreError::InfeasibleParameter(format!(
            "MPRK22 requires alpha >= 1/2, got {alpha}"
        )));
    }
    let t = ButcherTableau {
        s: 2,
        a: vec![0.0, 0.0, alpha, 0.0],
        b: vec![1.0 - 1.0 / (2.0 * alpha), 1.0 / (2.0 * alpha)],
        c: vec![0.0, alpha],
    };
    t.assert_explicit_nonnegative()?;
    Ok(t)
}

/// Boundary between the middle and upper feasibility branches of the
/// (α, β) family; root of 18α³ - 27α² + 12α - 2.
pub const ALPHA0: f64 = 0.892_549_609_236_958_6;

/// Three-stage third-order tableau parameterized by `(α, β)`.
pub fn mprk43_alpha_beta(alpha: f64, beta: f64) -> Result<ButcherTableau, CoreError> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(CoreError::InfeasibleParameter(
            "non-finite (alpha, beta)".into(),
        ));
    }
    if alpha == 2.0 / 3.0 || beta == alpha {
        return Err(CoreError::SingularDenominator(format!(
            "(alpha, beta) = ({alpha}, {beta})"
        )));
    }
    let feasible = if (1.0 / 3.0..2.0 / 3.0).contains(&alpha) {
        (2.0 / 3.0..=3.0 * alpha * (1.0 - alpha)).contains(&beta)
    } else if (2.0 / 3.0..ALPHA0).contains(&alpha) {
        (3.0 * alpha * (1.0 - alpha)..=2.0 / 3.0).contains(&beta)
    } else if alpha >= ALPHA0 {
        ((3.0 * alpha - 2.0) / (6.0 * alpha - 3.0)..=2.0 / 3.0).contains(&beta)
    } else {
        false
    };
    if !feasible {
        return Err(CoreError::InfeasibleParameter(format!(
            "(alpha, beta) = ({alpha}, {beta}) outside the feasibility region"
        )));
    }

    let den = alpha * (2.0 - 3.0 * alpha);
    let a31 = (3.0 * alpha * beta * (1.0 - alpha) - beta * beta) / den;
    let a32 = beta * (beta - alpha) / den;
    let b1 = 1.0 + (2.0 - 3.0 * (alpha + beta)) / (6.0 * alpha * beta);
    let b2 = (3.0 * beta - 2.0) / (6.0 * alpha * (beta - alpha));
    let b3 = (2.0 - 3.0 * alpha) / (6.0 * beta * (beta - alpha));
    let t = ButcherTableau {
        s: 3,
        a: vec![0.0, 0.0, 0.0, alpha, 0.0, 0.0, a31, a32, 0.0],
        b: vec![b1, b2, b3],
        c: vec![0.0, alpha, beta],
    };
    t.assert_explicit_nonnegative()?;
    Ok(t)
}

/// Three-stage third-order tableau parameterized by `γ ∈ [3/8, 3/4]`.
pub fn mprk43_gamma(gamma: f64) -> Result<ButcherTableau, CoreError> {
    if !(0.375..=0.75).contains(&gamma) {
        return Err(CoreError::InfeasibleParameter(format!(
            "MPRK43 requires 3/8 <= gamma <= 3/4, got {gamma}"
        )));
    }
    let c2 = 2.0 / 3.0;
    let a31 = c2 - 1.0 / (4.0 * gamma);
    let a32 = 1.0 / (4.0 * gamma);
    let t = ButcherTableau {
        s: 3,
        a: vec![0.0, 0.0, 0.0, c2, 0.0, 0.0, a31, a32, 0.0],
        b: vec![0.25, 0.75 - gamma, gamma],
        c: vec![0.0, c2, c2],
    };
    t.assert_explicit_nonnegative()?;
    Ok(t)
}
