//! Argument value parsers: complex literals, coefficient lists, spaces.

use std::str::FromStr;

use num_complex::Complex64;
use semiflow_core::series::TruncatedSeries;
use semiflow_core::space::WeightSequence;

/// `a`, `bi`, `a+bi` or `a-bi` (`j` also accepted for the imaginary unit).
pub fn complex(s: &str) -> Result<Complex64, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let z = Complex64::from_str(&cleaned).map_err(|_| format!("not a complex number: {s:?}"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("not a finite complex number: {s:?}"));
    }
    Ok(z)
}

/// Inverse of [`complex`], shortest round-trip digits.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Comma-separated complex coefficients, constant term first.
pub fn series(s: &str) -> Result<TruncatedSeries, String> {
    if s.trim().is_empty() {
        return Err(String::from("empty coefficient list"));
    }
    let coeffs = s.split(',').map(complex).collect::<Result<Vec<_>, _>>()?;
    TruncatedSeries::new(coeffs).map_err(|e| e.to_string())
}

pub fn real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| {
            let x: f64 = v.trim().parse().map_err(|_| format!("not a number: {v:?}"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("not a finite number: {v:?}"))
            }
        })
        .collect()
}

/// `hardy`, `dirichlet`, `bergman`, `power:<alpha>` or `custom:<b0>,<b1>,…`.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceArg {
    Named(WeightSequence),
    Power(f64),
}

impl SpaceArg {
    pub fn weights(&self, len: usize) -> Result<WeightSequence, String> {
        match self {
            Self::Named(w) => Ok(w.clone()),
            Self::Power(alpha) => WeightSequence::power_law(*alpha, len).map_err(|e| e.to_string()),
        }
    }
}

pub fn space(s: &str) -> Result<SpaceArg, String> {
    let lower = s.trim().to_ascii_lowercase();
    match lower.as_str() {
        "hardy" => return Ok(SpaceArg::Named(WeightSequence::Hardy)),
        "dirichlet" => return Ok(SpaceArg::Named(WeightSequence::Dirichlet)),
        "bergman" => return Ok(SpaceArg::Named(WeightSequence::Bergman)),
        _ => {}
    }
    if let Some(rest) = lower.strip_prefix("power:") {
        let alpha: f64 = rest.trim().parse().map_err(|_| format!("bad power-law exponent: {rest:?}"))?;
        if !alpha.is_finite() {
            return Err(format!("bad power-law exponent: {rest:?}"));
        }
        return Ok(SpaceArg::Power(alpha));
    }
    if let Some(rest) = lower.strip_prefix("custom:") {
        let values = real_list(rest)?;
        return WeightSequence::custom(values).map(SpaceArg::Named).map_err(|e| e.to_string());
    }
    Err(format!("unknown space {s:?} (expected hardy, dirichlet, bergman, power:<alpha> or custom:<values>)"))
}

/// `-z0` is a single-dash long flag in the documented usage; clap wants `--z0`.
pub fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| match a.strip_prefix("-z0") {
            Some(rest) if rest.is_empty() || rest.starts_with('=') => format!("--z0{rest}"),
            _ => a,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = Complex64::new;
        assert_eq!(complex("0.57735").unwrap(), c(0.57735, 0.0));
        assert_eq!(complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(complex("1 - 2.5i").unwrap(), c(1.0, -2.5));
        assert_eq!(complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("1e-3-2e-4i").unwrap(), c(1e-3, -2e-4));
        assert!(complex("abc").is_err());
        assert!(complex("nan").is_err());
    }

    #[test]
    fn coefficient_lists() {
        let s = series("0,-1,0.57735,-0.57735").unwrap();
        assert_eq!(s.coeffs().len(), 4);
        assert!(series("").is_err());
        assert!(series("1,,2").is_err());
    }

    #[test]
    fn spaces() {
        assert_eq!(space("Dirichlet").unwrap(), SpaceArg::Named(WeightSequence::Dirichlet));
        assert_eq!(space("power:0.5").unwrap(), SpaceArg::Power(0.5));
        assert!(matches!(space("custom:1,0.5").unwrap(), SpaceArg::Named(WeightSequence::Custom(_))));
        assert!(space("custom:1,-1").is_err());
        assert!(space("sobolev").is_err());
    }

    #[test]
    fn z0_flag() {
        let args = ["flow", "-z0", "0.5", "-z0=0.1", "-z01"].map(String::from);
        assert_eq!(normalize_args(args), ["flow", "--z0", "0.5", "--z0=0.1", "-z01"]);
    }
}
