//! Thin wrappers over the regularized incomplete beta function.

use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

/// Two-sided tail probability `P(|T| >= |t|)` for Student's t with `df`
/// degrees of freedom. Evaluated as `I_{df/(df+t^2)}(df/2, 1/2)`, which keeps
/// full relative precision deep in the tail.
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_nan() || df.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    if df.is_infinite() {
        return erfc(t.abs() / std::f64::consts::SQRT_2);
    }
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Upper tail `P(F >= f)` for the F distribution.
pub fn f_upper_p(f: f64, df_num: f64, df_den: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    let x = df_den / (df_den + df_num * f);
    beta_reg(df_den / 2.0, df_num / 2.0, x).clamp(0.0, 1.0)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
