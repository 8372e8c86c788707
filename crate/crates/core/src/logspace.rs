//! Overflow-safe arithmetic on values carried as natural logarithms.

/// `log Σ exp(x_i)`, factoring out the maximum. Empty input or all `-inf` gives `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// `log(Σ_i exp(t_i) − (k − 1))` where `k = ts.len()`, i.e. `log(1 + Σ expm1(t_i))`.
///
/// This is the shape of every per-μ factor `Σ_i x_i − (m−1)` with `x_i ≥ 1`.
/// Near `t_i ≈ 0` the `expm1` form keeps full relative precision; for large
/// `t_i` the maximum is factored out instead.
pub fn log_one_plus_sum_expm1(ts: &[f64]) -> f64 {
    let max = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= 30.0 {
        return ts.iter().map(|&t| t.exp_m1()).sum::<f64>().ln_1p();
    }
    let k = ts.len() as f64;
    let scaled: f64 = ts.iter().map(|&t| (t - max).exp()).sum();
    max + (scaled - (k - 1.0) * (-max).exp()).ln()
}

/// Log-margin `lhs − rhs` with the conventions for zero (`-inf`) sides:
/// `0 ≥ 0` has margin `0`, `x ≥ 0` has margin `+inf`, `0 ≥ x` has margin `-inf`.
pub fn log_margin(lhs: f64, rhs: f64) -> f64 {
    match (lhs == f64::NEG_INFINITY, rhs == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, true) => f64::INFINITY,
        _ => lhs - rhs,
    }
}

/// Serde adapter writing non-finite doubles as the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod serde_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("invalid number `{other}`"))),
            },
        }
    }
}

/// [`serde_f64`] for optional values; `None` is written as `null`.
pub mod serde_opt_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct W(#[serde(with = "super::serde_f64")] f64);

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(W).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}
