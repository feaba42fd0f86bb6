use serde::Serialize;
use statrs::function::beta::beta_reg;

use super::AnalyticsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Welch {
    pub t: f64,
    pub df: f64,
    /// Two-sided.
    pub p: f64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (m, ss / (n - 1.0))
}

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of
/// freedom.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<Welch, AnalyticsError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(AnalyticsError::Domain(format!(
            "welch_t needs at least two observations per sample (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        if ma == mb {
            return Ok(Welch {
                t: 0.0,
                df: na + nb - 2.0,
                p: 1.0,
            });
        }
        return Err(AnalyticsError::Domain("both samples are constant with different means".into()));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = if t == 0.0 { 1.0 } else { beta_reg(df / 2.0, 0.5, df / (df + t * t)) };
    Ok(Welch { t, df, p })
}
