use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PiecewiseError {
    #[error("quadratic coefficient {0} is negative; only convex curves can be linearised")]
    NonConvex(f64),
    #[error("at least one segment is required")]
    NoSegments,
    #[error("domain [{0}, {1}] is empty or not finite")]
    BadDomain(f64, f64),
}

/// Chordal interpolation of `const + lin·x + quad·x²` at uniform breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCurve {
    /// `(x, f(x))`, strictly increasing in `x`. A degenerate domain
    /// (`x_min = x_max`) yields a single breakpoint.
    pub breakpoints: Vec<(f64, f64)>,
    pub domain: (f64, f64),
    pub coeffs: (f64, f64, f64),
}

pub fn quadratic(coeffs: (f64, f64, f64), x: f64) -> f64 {
    coeffs.0 + coeffs.1 * x + coeffs.2 * x * x
}

pub fn linearize_quadratic(
    coeffs: (f64, f64, f64),
    domain: (f64, f64),
    segments: usize,
) -> Result<PiecewiseCurve, PiecewiseError> {
    if !(coeffs.2 >= 0.0) {
        return Err(PiecewiseError::NonConvex(coeffs.2));
    }
    if segments == 0 {
        return Err(PiecewiseError::NoSegments);
    }
    let (lo, hi) = domain;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(PiecewiseError::BadDomain(lo, hi));
    }
    let breakpoints = if lo == hi {
        alloc::vec![(lo, quadratic(coeffs, lo))]
    } else {
        let w = (hi - lo) / segments as f64;
        (0..=segments)
            .map(|k| {
                let x = if k == segments { hi } else { lo + w * k as f64 };
                (x, quadratic(coeffs, x))
            })
            .collect()
    };
    Ok(PiecewiseCurve { breakpoints, domain, coeffs })
}

impl PiecewiseCurve {
    pub fn segments(&self) -> usize {
        self.breakpoints.len().saturating_sub(1)
    }

    pub fn width(&self) -> f64 {
        match self.segments() {
            0 => 0.0,
            s => (self.domain.1 - self.domain.0) / s as f64,
        }
    }

    /// Largest gap between the chords and the quadratic, `quad·w²/4`.
    pub fn error_bound(&self) -> f64 {
        let w = self.width();
        self.coeffs.2 * w * w / 4.0
    }

    pub fn exact(&self, x: f64) -> f64 {
        quadratic(self.coeffs, x)
    }

    /// Interpolated value; outside the domain the end segments are extended.
    pub fn eval(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.len() == 1 {
            return self.exact(x);
        }
        let w = self.width();
        let seg = ((x - self.domain.0) / w).clamp(0.0, (bp.len() - 2) as f64);
        let k = seg as usize;
        let (x0, y0) = bp[k];
        let (x1, y1) = bp[k + 1];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_parabola_error_is_one_at_midpoints() {
        let c = linearize_quadratic((0.0, 0.0, 1.0), (0.0, 10.0), 5).unwrap();
        assert_eq!(c.breakpoints.len(), 6);
        assert_eq!(c.error_bound(), 1.0);
        for k in 0..5 {
            let mid = 2.0 * k as f64 + 1.0;
            assert!((c.eval(mid) - c.exact(mid) - 1.0).abs() < 1e-12);
        }
        let fine = linearize_quadratic((0.0, 0.0, 1.0), (0.0, 10.0), 10).unwrap();
        assert_eq!(fine.error_bound(), 0.25);
    }

    #[test]
    fn affine_is_exact() {
        let c = linearize_quadratic((5.0, 2.0, 0.0), (-3.0, 8.0), 1).unwrap();
        for i in 0..=20 {
            let x = -3.0 + 11.0 * i as f64 / 20.0;
            assert!((c.eval(x) - (5.0 + 2.0 * x)).abs() < 1e-12);
        }
        assert_eq!(c.error_bound(), 0.0);
    }

    #[test]
    fn rejects_concave_and_empty() {
        assert_eq!(linearize_quadratic((0.0, 0.0, -1.0), (0.0, 1.0), 2), Err(PiecewiseError::NonConvex(-1.0)));
        assert_eq!(linearize_quadratic((0.0, 0.0, 1.0), (0.0, 1.0), 0), Err(PiecewiseError::NoSegments));
        assert!(linearize_quadratic((0.0, 0.0, 1.0), (2.0, 1.0), 1).is_err());
    }

    #[test]
    fn degenerate_domain_has_one_breakpoint() {
        let c = linearize_quadratic((1.0, 1.0, 1.0), (3.0, 3.0), 4).unwrap();
        assert_eq!(c.breakpoints, alloc::vec![(3.0, 13.0)]);
        assert_eq!(c.error_bound(), 0.0);
    }
}
