//! Closed-form query and size bounds, evaluated in exact integer arithmetic.

/// `∏ (s_i + 1) − 1`, saturating at `u128::MAX`.
pub fn product_bound(sizes: &[usize]) -> u128 {
    sizes
        .iter()
        .fold(1u128, |acc, &s| acc.saturating_mul(s as u128 + 1))
        - 1
}

/// Whether `value <= (total/d + 1)^d − 1`, decided without rounding by
/// comparing `value · d^d <= (total + d)^d − d^d`.
///
/// Falls back to floating point only if the integers overflow `u128`.
pub fn within_amgm_bound(value: u128, total: usize, d: usize) -> bool {
    if d == 0 {
        return value == 0;
    }
    let exact = (|| {
        let dd = (d as u128).checked_pow(d as u32)?;
        let rhs = (total as u128 + d as u128).checked_pow(d as u32)? - dd;
        Some(value.checked_mul(dd)? <= rhs)
    })();
    exact.unwrap_or_else(|| value as f64 <= amgm_bound(total, d))
}

/// `(total/d + 1)^d − 1` as a float, for display.
pub fn amgm_bound(total: usize, d: usize) -> f64 {
    if d == 0 {
        return 0.0;
    }
    (total as f64 / d as f64 + 1.0).powi(d as i32) - 1.0
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_bound_values() {
        assert_eq!(product_bound(&[1, 1]), 3);
        assert_eq!(product_bound(&[1]), 1);
        assert_eq!(product_bound(&[2, 2]), 8);
        assert_eq!(product_bound(&[]), 0);
    }

    #[test]
    fn amgm_is_exact_at_equality() {
        // (4/2 + 1)^2 - 1 = 8
        assert!(within_amgm_bound(8, 4, 2));
        assert!(!within_amgm_bound(9, 4, 2));
        // (5/2 + 1)^2 - 1 = 11.25
        assert!(within_amgm_bound(11, 5, 2));
        assert!(!within_amgm_bound(12, 5, 2));
        assert!((amgm_bound(5, 2) - 11.25).abs() < 1e-12);
    }

    #[test]
    fn amgm_dominates_product() {
        for a in 0..6usize {
            for b in 0..6usize {
                for c in 0..6usize {
                    let p = product_bound(&[a, b, c]);
                    assert!(within_amgm_bound(p, a + b + c, 3));
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(3, 2), 3);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(2, 3), 0);
    }
}
