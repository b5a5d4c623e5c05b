//! Composite Simpson quadrature on a fixed node count.

use crate::error::{Error, Result};

/// Integrates `f` over `[a, b]` with composite Simpson on `nodes` equally
/// spaced points. `nodes` must be odd and at least 3.
pub fn composite_simpson<F>(f: F, a: f64, b: f64, nodes: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::BadNodeCount { nodes });
    }
    let h = (b - a) / (nodes - 1) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..nodes - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    Ok(sum * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = composite_simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 3).unwrap();
        // antiderivative: x^4/4 - x^2 + x
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn converges_at_fourth_order() {
        let exact = 1.0 - (-1.0f64).exp();
        let e1 = (composite_simpson(|x| (-x).exp(), 0.0, 1.0, 11).unwrap() - exact).abs();
        let e2 = (composite_simpson(|x| (-x).exp(), 0.0, 1.0, 21).unwrap() - exact).abs();
        assert!(e2 < e1 / 12.0, "e1 = {e1}, e2 = {e2}");
    }

    #[test]
    fn rejects_bad_node_counts() {
        assert_eq!(
            composite_simpson(|x| x, 0.0, 1.0, 4),
            Err(Error::BadNodeCount { nodes: 4 })
        );
        assert_eq!(
            composite_simpson(|x| x, 0.0, 1.0, 1),
            Err(Error::BadNodeCount { nodes: 1 })
        );
    }
}
