//! Clebsch-Gordan coefficients under the Condon-Shortley phase convention.

use crate::error::{Error, Result};
use crate::spin::HalfInt;

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::MalformedSpin(j.value()));
    }
    if m.abs() > j || (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::InconsistentProjection { j: j.value(), m: m.value() });
    }
    Ok(())
}

/// `<j1 m1; j2 m2 | j m>` by the Racah closed form.
///
/// Returns zero when `m != m1 + m2` or the triangle condition fails. Errors
/// on negative spins or projections incompatible with their spin.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<f64> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j, m)?;

    if m1 + m2 != m {
        return Ok(0.0);
    }
    if j > j1 + j2 || j < (j1 - j2).abs() || (j1 + j2 - j).twice() % 2 != 0 {
        return Ok(0.0);
    }

    // All arguments below are integers once the checks above hold.
    let half = |x: HalfInt| x.twice() / 2;
    let a = half(j1 + j2 - j);
    let b = half(j1 - m1);
    let c = half(j2 + m2);
    let d = half(j - j2 + m1);
    let e = half(j - j1 - m2);

    let prefactor =
        ((j.twice() + 1) as f64 * factorial(half(j + j1 - j2)) * factorial(half(j - j1 + j2)) * factorial(a)
            / factorial(half(j1 + j2 + j) + 1))
        .sqrt()
            * (factorial(half(j + m))
                * factorial(half(j - m))
                * factorial(half(j1 - m1))
                * factorial(half(j1 + m1))
                * factorial(half(j2 - m2))
                * factorial(half(j2 + m2)))
            .sqrt();

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let sum: f64 = (k_min..=k_max)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign / (factorial(k)
                * factorial(a - k)
                * factorial(b - k)
                * factorial(c - k)
                * factorial(d + k)
                * factorial(e + k))
        })
        .sum();

    Ok(prefactor * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn cg(t: [i32; 6]) -> f64 {
        clebsch_gordan(h(t[0]), h(t[1]), h(t[2]), h(t[3]), h(t[4]), h(t[5])).unwrap()
    }

    #[test]
    fn singlet_coefficient() {
        assert!((cg([1, 1, 1, -1, 0, 0]) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((cg([1, -1, 1, 1, 0, 0]) + 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn stretched_state() {
        assert!((cg([1, 1, 1, 1, 2, 2]) - 1.0).abs() < 1e-15);
        assert!((cg([3, 3, 3, 3, 6, 6]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_one_with_half() {
        assert!((cg([2, 2, 1, -1, 1, 1]) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((cg([2, 0, 1, 1, 1, 1]) + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn selection_rules_give_zero() {
        assert_eq!(cg([1, 1, 1, 1, 0, 0]), 0.0);
        assert_eq!(cg([1, 1, 1, -1, 4, 0]), 0.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(clebsch_gordan(h(-1), h(1), h(1), h(1), h(0), h(0)).is_err());
        assert!(clebsch_gordan(h(1), h(3), h(1), h(1), h(2), h(2)).is_err());
        assert!(clebsch_gordan(h(2), h(1), h(1), h(1), h(1), h(1)).is_err());
    }
}
