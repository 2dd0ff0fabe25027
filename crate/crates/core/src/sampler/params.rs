use serde::Serialize;

use super::SamplerError;

/// List size `k` and survival threshold `ℓ` of a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    pub k: usize,
    pub ell: usize,
}

/// Ceiling that tolerates floating-point noise just above an integer, so that
/// `16^{1/4}` rounds to 2 even when `powf` returns `2.0000000000000004`.
pub fn ceil_param(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

fn domain(msg: impl Into<String>) -> SamplerError {
    SamplerError::Domain(msg.into())
}

/// `k = ⌈(1+ε)Δ/ln Δ⌉`, `ℓ = ⌈Δ^{ε/2}⌉`.
pub fn params_triangle_free(max_degree: usize, eps: f64) -> Result<Params, SamplerError> {
    if max_degree < 2 {
        return Err(domain(format!("triangle-free parameters need Δ >= 2, got {max_degree}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("ε must lie in (0, 1), got {eps}")));
    }
    let d = max_degree as f64;
    Ok(Params {
        k: ceil_param((1.0 + eps) * d / d.ln()),
        ell: ceil_param(d.powf(eps / 2.0)),
    })
}

/// `k = ⌈200 r Δ log₂log₂Δ / log₂Δ⌉`, `ℓ = ⌈Δ^{9/10}⌉`.
pub fn params_kr(max_degree: usize, r: usize) -> Result<Params, SamplerError> {
    if max_degree <= 4 {
        return Err(domain(format!("K_r-free parameters need Δ > 4, got {max_degree}")));
    }
    if r < 4 {
        return Err(domain(format!("K_r-free parameters need r >= 4, got {r}")));
    }
    let d = max_degree as f64;
    let lg = d.log2();
    Ok(Params {
        k: ceil_param(200.0 * r as f64 * d * lg.log2() / lg),
        ell: ceil_param(d.powf(0.9)),
    })
}

/// `f(λ) = log₂λ / (2r log₂log₂λ)`.
pub fn f_lambda(lambda: f64, r: usize) -> Result<f64, SamplerError> {
    if lambda.is_nan() || lambda <= 2.0 {
        return Err(domain(format!("f(λ) needs λ > 2, got {lambda}")));
    }
    if r < 4 {
        return Err(domain(format!("f(λ) needs r >= 4, got {r}")));
    }
    let lg = lambda.log2();
    Ok(lg / (2.0 * r as f64 * lg.log2()))
}

/// Default layer threshold `⌈Δ^{1/20}⌉`.
pub fn layer_threshold(max_degree: usize) -> u128 {
    ceil_param((max_degree.max(1) as f64).powf(0.05)) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_free_examples() {
        assert_eq!(params_triangle_free(8, 0.5).unwrap(), Params { k: 6, ell: 2 });
        assert_eq!(params_triangle_free(100, 0.5).unwrap(), Params { k: 33, ell: 4 });
        assert_eq!(params_triangle_free(16, 0.5).unwrap().ell, 2);
        assert!(params_triangle_free(8, 0.0).is_err());
        assert!(params_triangle_free(8, 1.0).is_err());
        assert!(params_triangle_free(1, 0.5).is_err());
    }

    #[test]
    fn kr_examples() {
        // log₂16 = 4 and log₂log₂16 = 2, so k = 200·4·16·2/4; 16^0.9 ≈ 12.13.
        assert_eq!(params_kr(16, 4).unwrap(), Params { k: 6400, ell: 13 });
        assert!(params_kr(4, 4).is_err());
        assert!(params_kr(16, 3).is_err());
    }

    #[test]
    fn f_lambda_examples() {
        assert!((f_lambda(65536.0, 4).unwrap() - 0.5).abs() < 1e-15);
        assert!((f_lambda(16.0, 4).unwrap() - 0.25).abs() < 1e-15);
        assert!((f_lambda(1024.0, 4).unwrap() - 10.0 / (8.0 * 10f64.log2())).abs() < 1e-15);
        assert!((f_lambda(3.0, 4).unwrap() - 0.2983).abs() < 1e-3);
        assert!(f_lambda(2.0, 4).is_err());
        assert!(f_lambda(16.0, 3).is_err());
    }

    #[test]
    fn threshold_and_ceiling() {
        assert_eq!(layer_threshold(32), 2);
        assert_eq!(layer_threshold(1), 1);
        assert_eq!(ceil_param(2.0000000000000004), 2);
        assert_eq!(ceil_param(2.01), 3);
        assert_eq!(ceil_param(0.0), 0);
    }
}
