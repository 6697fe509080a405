use serde::{Deserialize, Serialize};

use crate::error::{FlagError, Result};
use crate::scalar::Real;

/// Weights `(a, b)` of the elastic metric on parameterized curves:
/// `a` penalizes stretching, `b` bending.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveElasticWeights<T> {
    pub a: T,
    pub b: T,
}

/// Weights `(a′, b′, c′)` of the elastic metric on parameterized surfaces:
/// area-preserving shear, area change and bending of the normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceElasticWeights<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// The six weights of the flag metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagWeights<T> {
    pub a1: T,
    pub b1: T,
    pub c1: T,
    pub a2: T,
    pub b2: T,
    pub c2: T,
}

impl<T: Real> Default for FlagWeights<T> {
    fn default() -> Self {
        Self::ones()
    }
}

impl<T: Real> FlagWeights<T> {
    pub fn new(a1: T, b1: T, c1: T, a2: T, b2: T, c2: T) -> Self {
        Self {
            a1,
            b1,
            c1,
            a2,
            b2,
            c2,
        }
    }

    pub fn ones() -> Self {
        let one = T::one();
        Self::new(one, one, one, one, one, one)
    }

    /// Weights obtained by restricting the curve and surface elastic metrics to
    /// normal variations: `(a₁, b₁, c₁, a₂, b₂, c₂) = (a, b, b, 2a′, 4b′, c′)`.
    pub fn from_elastic(curve: CurveElasticWeights<T>, surface: SurfaceElasticWeights<T>) -> Self {
        Self::new(
            curve.a,
            curve.b,
            curve.b,
            T::lit(2.0) * surface.a,
            T::lit(4.0) * surface.b,
            surface.c,
        )
    }

    /// Parses `a1,b1,c1,a2,b2,c2`.
    pub fn parse(s: &str) -> Result<Self> {
        let vals: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| FlagError::InvalidParameter(format!("weights `{s}`: {e}")))?;
        if vals.len() != 6 {
            return Err(FlagError::InvalidParameter(format!(
                "expected six comma-separated weights, got {}",
                vals.len()
            )));
        }
        let w = Self::new(
            T::lit(vals[0]),
            T::lit(vals[1]),
            T::lit(vals[2]),
            T::lit(vals[3]),
            T::lit(vals[4]),
            T::lit(vals[5]),
        );
        w.validate()?;
        Ok(w)
    }

    pub fn as_array(&self) -> [T; 6] {
        [self.a1, self.b1, self.c1, self.a2, self.b2, self.c2]
    }

    pub fn validate(&self) -> Result<()> {
        if self.as_array().iter().all(|w| w.is_finite() && *w >= T::zero()) {
            Ok(())
        } else {
            Err(FlagError::InvalidParameter(
                "metric weights must be finite and non-negative".into(),
            ))
        }
    }
}

/// Flag weights plus the optional raw elastic weights they may derive from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricParams<T> {
    pub flag: FlagWeights<T>,
    pub curve: Option<CurveElasticWeights<T>>,
    pub surface: Option<SurfaceElasticWeights<T>>,
}

impl<T: Real> Default for MetricParams<T> {
    fn default() -> Self {
        Self {
            flag: FlagWeights::ones(),
            curve: None,
            surface: None,
        }
    }
}

impl<T: Real> MetricParams<T> {
    pub fn from_flag_weights(flag: FlagWeights<T>) -> Self {
        Self {
            flag,
            curve: None,
            surface: None,
        }
    }

    /// Flag weights derived from the raw elastic weights.
    pub fn from_elastic(curve: CurveElasticWeights<T>, surface: SurfaceElasticWeights<T>) -> Self {
        Self {
            flag: FlagWeights::from_elastic(curve, surface),
            curve: Some(curve),
            surface: Some(surface),
        }
    }

    /// True when the flag weights agree with the raw weights under the
    /// normal-restriction mapping (vacuously true if no raw weights are set).
    pub fn is_consistent(&self) -> bool {
        match (self.curve, self.surface) {
            (Some(c), Some(s)) => {
                let m = FlagWeights::from_elastic(c, s);
                let tol = T::lit(1e-12);
                m.as_array()
                    .iter()
                    .zip(self.flag.as_array())
                    .all(|(x, y)| (*x - y).abs() <= tol * (T::one() + y.abs()))
            }
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping_from_elastic_weights() {
        let w = FlagWeights::from_elastic(
            CurveElasticWeights { a: 1.5, b: 0.5 },
            SurfaceElasticWeights {
                a: 2.0,
                b: 3.0,
                c: 0.25,
            },
        );
        assert_eq!(w.as_array(), [1.5, 0.5, 0.5, 4.0, 12.0, 0.25]);
    }

    #[test]
    fn parse_weights() {
        let w = FlagWeights::<f64>::parse("1,2,3,4,5,6").unwrap();
        assert_eq!(w.as_array(), [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(FlagWeights::<f64>::parse("1,2,3").is_err());
        assert!(FlagWeights::<f64>::parse("1,2,3,4,5,-6").is_err());
        assert!(FlagWeights::<f64>::parse("1,2,x,4,5,6").is_err());
    }

    #[test]
    fn consistency_check() {
        let c = CurveElasticWeights { a: 1.0, b: 2.0 };
        let s = SurfaceElasticWeights {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        };
        let mut p = MetricParams::from_elastic(c, s);
        assert!(p.is_consistent());
        p.flag.a2 = 7.0;
        assert!(!p.is_consistent());
    }
}
