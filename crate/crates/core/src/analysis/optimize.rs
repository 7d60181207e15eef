use crate::closed_form::{heisenberg_limit, optimal_point_sensitivity};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`. Returns `(x_min, f(x_min))`.
///
/// Fails when the minimum sits on the boundary, i.e. the interval does not
/// bracket an interior minimum.
pub fn golden_section<T: Real, F>(f: F, lo: T, hi: T, tol: T) -> Result<(T, T)>
where
    F: Fn(T) -> T,
{
    let no_bracket = || Error::NoBracketedMinimum {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
    };
    if !(lo < hi) || !(tol > T::zero()) {
        return Err(no_bracket());
    }
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if (b - a).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / T::lit(2.0);
    let fx = f(x);
    let edge = T::lit(1e-6) * (hi - lo);
    if x - lo <= edge || hi - x <= edge || !(fx <= f(lo)) || !(fx <= f(hi)) {
        return Err(no_bracket());
    }
    Ok((x, fx))
}

/// Optimal-point sensitivity divided by the Heisenberg limit.
pub fn hl_ratio<T: Real>(g: T, r: T, beta_mag: T) -> Result<T> {
    Ok(optimal_point_sensitivity(g, r, beta_mag)? / heisenberg_limit(g, r, beta_mag)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalBeta<T> {
    pub beta_star: T,
    pub ratio_at_min: T,
}

/// Minimizes `hl_ratio(g, r, beta)` over `beta` in `interval` to `|d beta| < 1e-8`.
pub fn find_optimal_beta<T: Real>(g: T, r: T, interval: (T, T)) -> Result<OptimalBeta<T>> {
    if !(g > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "g",
            value: g.as_f64(),
            reason: "optimal coherent amplitude needs g > 0",
        });
    }
    let (lo, hi) = interval;
    if !(lo > T::zero()) {
        return Err(Error::NoBracketedMinimum {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let ratio = |beta: T| hl_ratio(g, r, beta).unwrap_or(T::infinity());
    let (beta_star, ratio_at_min) = golden_section(ratio, lo, hi, T::lit(1e-8))?;
    Ok(OptimalBeta {
        beta_star,
        ratio_at_min,
    })
}

/// Search interval used when none is given: two decades either side of
/// the approximate optimum.
pub fn default_beta_interval<T: Real>(g: T, r: T) -> Result<(T, T)> {
    let guess = crate::closed_form::optimal_beta(g, r)?.max(T::lit(0.5));
    Ok((guess * T::lit(1e-2), guess * T::lit(1e2)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonMonotonicity<T> {
    /// `(r, ratio)` in the order given.
    pub ratios: Vec<(T, T)>,
    pub non_monotonic: bool,
}

impl<T: Real> NonMonotonicity<T> {
    /// Index of the smallest ratio when it lies strictly inside the sequence.
    pub fn interior_minimum(&self) -> Option<usize> {
        let (idx, _) = self.ratios.iter().enumerate().min_by(|x, y| {
            x.1 .1
                .partial_cmp(&y.1 .1)
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        (idx > 0 && idx + 1 < self.ratios.len()).then_some(idx)
    }
}

/// Ratio to the Heisenberg limit at the optimal point for each squeeze
/// strength, and whether the sequence changes direction.
pub fn nonmonotonicity_report<T: Real>(
    beta_mag: T,
    g: T,
    r_values: &[T],
) -> Result<NonMonotonicity<T>> {
    let ratios = r_values
        .iter()
        .map(|&r| Ok((r, hl_ratio(g, r, beta_mag)?)))
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<T> = ratios.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let up = diffs.iter().any(|d| *d > T::zero());
    let down = diffs.iter().any(|d| *d < T::zero());
    Ok(NonMonotonicity {
        ratios,
        non_monotonic: up && down,
    })
}
