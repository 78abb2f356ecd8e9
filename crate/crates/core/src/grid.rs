use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

impl FromStr for Spacing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lin" | "linear" => Ok(Spacing::Linear),
            "log" | "logarithmic" => Ok(Spacing::Log),
            other => Err(format!("unknown spacing '{other}' (expected 'log' or 'linear')")),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        })
    }
}

/// Closed interval sampled at `points` ascending values, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let g = Grid { min, max, points, spacing };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(domain("grid bounds must be finite"));
        }
        if self.points == 0 {
            return Err(domain("grid needs at least one point"));
        }
        if self.points > 1 && !(self.min < self.max) {
            return Err(domain(format!("grid needs min < max, got [{}, {}]", self.min, self.max)));
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err(domain("log spacing needs a positive lower bound"));
        }
        Ok(())
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        if self.points == 1 {
            return Ok(vec![self.min]);
        }
        let last = (self.points - 1) as f64;
        let v = (0..self.points).map(|i| {
            let t = i as f64 / last;
            match self.spacing {
                Spacing::Linear => self.min + t * (self.max - self.min),
                Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
            }
        });
        let mut out: Vec<f64> = v.collect();
        out[0] = self.min;
        out[self.points - 1] = self.max;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let v = Grid::new(10e-9, 2e-6, 200, Spacing::Log).unwrap().values().unwrap();
        assert_eq!(v.len(), 200);
        assert_eq!(v[0], 10e-9);
        assert_eq!(v[199], 2e-6);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Grid::new(1.0, 1.0, 2, Spacing::Linear).is_err());
        assert!(Grid::new(-1.0, 1.0, 5, Spacing::Log).is_err());
        assert!(Grid::new(-1.0, 1.0, 5, Spacing::Linear).is_ok());
        assert!("cubic".parse::<Spacing>().is_err());
        assert_eq!("LOG".parse::<Spacing>().unwrap(), Spacing::Log);
    }
}
