//! MPRK scheme families and their Patankar-weight exponents.

use crate::error::CoreError;
use crate::tableau::{self, ButcherTableau};

/// Scheme family tag with its free parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeFamily {
    Mprk22 { alpha: f64 },
    Mprk43AlphaBeta { alpha: f64, beta: f64 },
    Mprk43Gamma { gamma: f64 },
}

/// A fully assembled MPRK scheme.
///
/// `q` sets the exponent `1/q` of the embedded denominator
/// `(y^(2))^(1/q) (y^n)^(1-1/q)`; for the third-order families `p` sets the
/// analogous exponent of the stage-3 denominator and `(beta1, beta2)` the
/// weights of the linear system defining σ.
#[derive(Debug, Clone, PartialEq)]
pub struct MprkScheme {
    pub family: SchemeFamily,
    pub tableau: ButcherTableau,
    /// Order of the main method; the embedded method has order `k - 1`.
    pub order: u32,
    pub p: f64,
    pub q: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl MprkScheme {
    pub fn new(family: SchemeFamily) -> Result<Self, CoreError> {
        match family {
            SchemeFamily::Mprk22 { alpha } => {
                let t = tableau::mprk22(alpha)?;
                Ok(Self {
                    family,
                    tableau: t,
                    order: 2,
                    p: alpha,
                    q: alpha,
                    beta1: 0.0,
                    beta2: 0.0,
                })
            }
            SchemeFamily::Mprk43AlphaBeta { alpha, beta } => {
                let t = tableau::mprk43_alpha_beta(alpha, beta)?;
                let p = alpha * (2.0 - 3.0 * alpha) / (2.0 * (beta - alpha));
                let beta2 = 1.0 / (2.0 * alpha);
                Ok(Self {
                    family,
                    tableau: t,
                    order: 3,
                    p,
                    q: alpha,
                    beta1: 1.0 - beta2,
                    beta2,
                })
            }
            SchemeFamily::Mprk43Gamma { gamma } => {
                let t = tableau::mprk43_gamma(gamma)?;
                Ok(Self {
                    family,
                    tableau: t,
                    order: 3,
                    p: 4.0 * gamma / 3.0,
                    q: 2.0 / 3.0,
                    beta1: 0.25,
                    beta2: 0.75,
                })
            }
        }
    }

    pub fn mprk22(alpha: f64) -> Result<Self, CoreError> {
        Self::new(SchemeFamily::Mprk22 { alpha })
    }

    pub fn mprk43_alpha_beta(alpha: f64, beta: f64) -> Result<Self, CoreError> {
        Self::new(SchemeFamily::Mprk43AlphaBeta { alpha, beta })
    }

    pub fn mprk43_gamma(gamma: f64) -> Result<Self, CoreError> {
        Self::new(SchemeFamily::Mprk43Gamma { gamma })
    }

    pub fn label(&self) -> String {
        match self.family {
            SchemeFamily::Mprk22 { alpha } => format!("MPRK22({alpha})"),
            SchemeFamily::Mprk43AlphaBeta { alpha, beta } => {
                format!("MPRK43({alpha},{beta})")
            }
            SchemeFamily::Mprk43Gamma { gamma } => format!("MPRK43({gamma})"),
        }
    }
}
