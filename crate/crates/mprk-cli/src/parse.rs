//! Scheme and controller selector parsing.

use mprk_core::{DspGains, MprkScheme};

use crate::CliError;

/// `mprk22[:alpha]`, `mprk43ab[:alpha,beta]`, `mprk43g[:gamma]`.
pub fn scheme(spec: &str) -> Result<MprkScheme, CliError> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    let nums = |p: Option<&str>, n: usize, defaults: &[f64]| -> Result<Vec<f64>, CliError> {
        match p {
            None => Ok(defaults.to_vec()),
            Some(p) => {
                let vals: Result<Vec<f64>, _> = p.split(',').map(str::parse::<f64>).collect();
                let vals =
                    vals.map_err(|_| CliError::Usage(format!("bad scheme parameters '{p}'")))?;
                if vals.len() != n {
                    return Err(CliError::Usage(format!(
                        "scheme '{name}' expects {n} parameter(s), got {}",
                        vals.len()
                    )));
                }
                Ok(vals)
            }
        }
    };
    let built = match name {
        "mprk22" => {
            let v = nums(params, 1, &[1.0])?;
            MprkScheme::mprk22(v[0])
        }
        "mprk43ab" => {
            let v = nums(params, 2, &[0.5, 0.75])?;
            MprkScheme::mprk43_alpha_beta(v[0], v[1])
        }
        "mprk43g" => {
            let v = nums(params, 1, &[0.563])?;
            MprkScheme::mprk43_gamma(v[0])
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown scheme '{other}'; valid: mprk22[:alpha], mprk43ab[:alpha,beta], mprk43g[:gamma]"
            )))
        }
    };
    built.map_err(|e| CliError::Usage(e.to_string()))
}

/// `beta1,beta2,beta3,alpha2,kappa2`.
pub fn controller(spec: &str) -> Result<DspGains, CliError> {
    let vals: Result<Vec<f64>, _> = spec.split(',').map(str::parse::<f64>).collect();
    let vals = vals.map_err(|_| CliError::Usage(format!("bad controller '{spec}'")))?;
    if vals.len() != 5 {
        return Err(CliError::Usage(format!(
            "controller needs 5 entries beta1,beta2,beta3,alpha2,kappa2, got {}",
            vals.len()
        )));
    }
    let kappa2 = vals[4];
    if kappa2.fract() != 0.0 || !(1.0..=4.0).contains(&kappa2) {
        return Err(CliError::Usage(format!(
            "kappa2 must be one of 1,2,3,4, got {kappa2}"
        )));
    }
    Ok(DspGains::new(vals[0], vals[1], vals[2], vals[3], kappa2 as u8))
}

pub fn tolerance(tol: f64) -> Result<f64, CliError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

/// `n1,n2` budget pair.
pub fn budget(spec: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("budget must be 'n1,n2', got '{spec}'")));
    }
    let n1 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad budget '{spec}'")))?;
    let n2 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad budget '{spec}'")))?;
    Ok((n1, n2))
}
