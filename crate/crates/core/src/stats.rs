//! Pearson correlation and least-squares slope through the origin.

use crate::error::{Error, Result};

fn check_pairs(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::UndefinedStatistic(format!(
            "need at least 2 samples, got {}",
            xs.len()
        )));
    }
    Ok(())
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample Pearson correlation coefficient.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pairs(xs, ys)?;
    let mx = mean(xs);
    let my = mean(ys);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedStatistic("zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Slope `k` of the model `y = k x` minimising squared error: `Σxy / Σx²`.
pub fn slope_through_origin(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pairs(xs, ys)?;
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::UndefinedStatistic(
            "regressor is identically zero".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_linear_relation() {
        let xs = [-1.0, 0.5, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x).collect();
        assert!((pearson_r(&xs, &ys).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(slope_through_origin(&xs, &ys).unwrap(), 0.5);
        let neg: Vec<f64> = xs.iter().map(|x| -2.0 * x).collect();
        assert!((pearson_r(&xs, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn undefined_cases() {
        let zeros = [0.0; 5];
        assert!(matches!(
            pearson_r(&zeros, &zeros),
            Err(Error::UndefinedStatistic(_))
        ));
        assert!(matches!(
            slope_through_origin(&zeros, &[1.0; 5]),
            Err(Error::UndefinedStatistic(_))
        ));
        assert!(pearson_r(&[1.0], &[2.0]).is_err());
        assert!(pearson_r(&[1.0, 2.0], &[2.0]).is_err());
    }

    #[test]
    fn known_values() {
        // mx = 2, my = 3
        let xs = [1.0, 2.0, 3.0];
        let ys = [1.0, 4.0, 4.0];
        // dx = (-1, 0, 1), dy = (-2, 1, 1): sxy = 3, sxx = 2, syy = 6
        let r = pearson_r(&xs, &ys).unwrap();
        assert!((r - 3.0 / (12.0f64).sqrt()).abs() < 1e-15);
        // Σxy = 1 + 8 + 12 = 21, Σx² = 14
        assert!((slope_through_origin(&xs, &ys).unwrap() - 1.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn bounded_and_order_invariant(
            pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..40),
            rot in 0usize..40,
        ) {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
            if let Ok(r) = pearson_r(&xs, &ys) {
                prop_assert!(r.abs() <= 1.0);
                let k = rot % xs.len();
                let mut xr = xs.clone();
                let mut yr = ys.clone();
                xr.rotate_left(k);
                yr.rotate_left(k);
                prop_assert!((pearson_r(&xr, &yr).unwrap() - r).abs() < 1e-12);
            }
        }
    }
}
