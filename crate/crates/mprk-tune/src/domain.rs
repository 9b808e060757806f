//! The controller-gain search domain and its unit-cube encoding.

use mprk_core::DspGains;
use rand::Rng;

/// Box domain for `(β1, β2, β3, α2)` plus the categorical κ2.
///
/// Encoded points live in `[0,1]^4` (affine per dimension) followed by a
/// four-entry one-hot block for κ2. Frozen dimensions stay at their fixed
/// value under both `sample` and `decode`, which restricts the search
/// without changing the encoding layout.
#[derive(Debug, Clone)]
pub struct SearchDomain {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub frozen: [Option<f64>; 4],
    /// Restrict to one limiter gain; `None` searches all of {1, 2, 3, 4}.
    pub kappa2: Option<u8>,
}

impl Default for SearchDomain {
    fn default() -> Self {
        Self {
            lo: [-5.0, -3.0, -2.0, -3.0],
            hi: [5.0, 3.0, 2.0, 3.0],
            frozen: [None; 4],
            kappa2: None,
        }
    }
}

/// Encoded dimensionality: 4 continuous + 4 one-hot.
pub const ENC_DIM: usize = 8;

impl SearchDomain {
    pub fn freeze(mut self, dim: usize, value: f64) -> Self {
        self.frozen[dim] = Some(value);
        self
    }

    pub fn with_kappa2(mut self, kappa2: u8) -> Self {
        self.kappa2 = Some(kappa2);
        self
    }

    pub fn kappa2_choices(&self) -> Vec<u8> {
        match self.kappa2 {
            Some(k) => vec![k],
            None => vec![1, 2, 3, 4],
        }
    }

    pub fn contains(&self, g: &DspGains) -> bool {
        let v = [g.beta1, g.beta2, g.beta3, g.alpha2];
        (0..4).all(|i| (self.lo[i]..=self.hi[i]).contains(&v[i]))
            && (1..=4).contains(&g.kappa2)
            && self.kappa2.map_or(true, |k| k == g.kappa2)
            && (0..4).all(|i| self.frozen[i].map_or(true, |f| v[i] == f))
    }

    /// Affine map to the unit cube plus κ2 one-hot.
    pub fn encode(&self, g: &DspGains) -> Vec<f64> {
        let v = [g.beta1, g.beta2, g.beta3, g.alpha2];
        let mut out = Vec::with_capacity(ENC_DIM);
        for i in 0..4 {
            out.push((v[i] - self.lo[i]) / (self.hi[i] - self.lo[i]));
        }
        for k in 1..=4u8 {
            out.push(if g.kappa2 == k { 1.0 } else { 0.0 });
        }
        out
    }

    /// Inverse of [`encode`]; clamps continuous coordinates into the box.
    ///
    /// Returns the gains together with a flag marking whether clamping or
    /// frozen-dimension overriding changed the point.
    pub fn decode(&self, x: &[f64]) -> (DspGains, bool) {
        assert_eq!(x.len(), ENC_DIM);
        let mut clamped = false;
        let mut v = [0.0; 4];
        for i in 0..4 {
            let unit = x[i];
            let c = unit.clamp(0.0, 1.0);
            if c != unit {
                clamped = true;
            }
            let mut val = self.lo[i] + c * (self.hi[i] - self.lo[i]);
            if let Some(f) = self.frozen[i] {
                if val != f {
                    clamped = true;
                }
                val = f;
            }
            v[i] = val;
        }
        let onehot = &x[4..8];
        let mut best = 0usize;
        for k in 1..4 {
            if onehot[k] > onehot[best] {
                best = k;
            }
        }
        let mut kappa2 = best as u8 + 1;
        if let Some(fixed) = self.kappa2 {
            if kappa2 != fixed {
                clamped = true;
            }
            kappa2 = fixed;
        }
        (DspGains::new(v[0], v[1], v[2], v[3], kappa2), clamped)
    }

    /// Uniform sample honoring frozen dimensions.
    pub fn sample(&self, rng: &mut impl Rng) -> DspGains {
        let mut v = [0.0; 4];
        for i in 0..4 {
            v[i] = match self.frozen[i] {
                Some(f) => f,
                None => rng.gen_range(self.lo[i]..=self.hi[i]),
            };
        }
        let kappa2 = match self.kappa2 {
            Some(k) => k,
            None => rng.gen_range(1..=4u8),
        };
        DspGains::new(v[0], v[1], v[2], v[3], kappa2)
    }
}
