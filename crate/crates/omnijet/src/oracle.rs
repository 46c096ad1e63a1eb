//! The randomized point-sampling equality oracle.
//!
//! Every identity in this crate is certified by evaluating both sides at `N`
//! seeded random chart points and comparing within `atol + rtol * max(|a|,
//! |b|)`. The sample set is a pure function of `(seed, chart)`, so verdicts
//! and witnesses are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{Chart, Point};
use crate::error::{Error, Result};
use crate::exec;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oracle {
    pub seed: u64,
    pub samples: usize,
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            seed: 42,
            samples: 32,
            atol: 1e-9,
            rtol: 1e-9,
        }
    }
}

/// A concrete counterexample: the point plus the two values that disagreed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointWitness {
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub context: String,
}

impl std::fmt::Display for PointWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: lhs = {:.17e}, rhs = {:.17e} at {:?}",
            self.context, self.lhs, self.rhs, self.point
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EqVerdict {
    Equal,
    Unequal(PointWitness),
}

impl EqVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqVerdict::Equal)
    }

    pub fn witness(&self) -> Option<&PointWitness> {
        match self {
            EqVerdict::Equal => None,
            EqVerdict::Unequal(w) => Some(w),
        }
    }
}

impl Oracle {
    pub fn new(seed: u64, samples: usize, atol: f64, rtol: f64) -> Oracle {
        assert!(samples >= 1, "oracle needs at least one sample");
        Oracle {
            seed,
            samples,
            atol,
            rtol,
        }
    }

    pub fn with_seed(seed: u64) -> Oracle {
        Oracle {
            seed,
            ..Oracle::default()
        }
    }

    /// The seeded sample set for `chart`; same seed, same points.
    pub fn points(&self, chart: &Chart) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.samples);
        for _ in 0..self.samples {
            let coords = (0..chart.dim())
                .map(|i| {
                    let (lo, hi) = chart.domain(i);
                    rng.gen_range(lo..=hi)
                })
                .collect();
            out.push(chart.point(coords).expect("sample inside domain"));
        }
        out
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.atol + self.rtol * a.abs().max(b.abs())
    }

    pub fn eval(&self, f: &Scalar, p: &Point) -> Result<f64> {
        f.eval_at(p.coords(), self.atol).map_err(|kind| Error::Eval {
            point: p.coords().to_vec(),
            kind,
        })
    }

    /// Point-sampled equality of two scalars on a chart.
    pub fn scalars_equal(&self, chart: &Chart, f: &Scalar, g: &Scalar) -> Result<EqVerdict> {
        self.scalars_equal_at(&self.points(chart), f, g, "scalars_equal")
    }

    /// Same check against a caller-supplied point set.
    pub fn scalars_equal_at(
        &self,
        points: &[Point],
        f: &Scalar,
        g: &Scalar,
        context: &str,
    ) -> Result<EqVerdict> {
        let hit = exec::find_map_first(points, |p| {
            let fv = match self.eval(f, p) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let gv = match self.eval(g, p) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            if self.close(fv, gv) {
                None
            } else {
                Some(Ok(PointWitness {
                    point: p.coords().to_vec(),
                    lhs: fv,
                    rhs: gv,
                    context: context.to_string(),
                }))
            }
        });
        match hit {
            None => Ok(EqVerdict::Equal),
            Some(Ok(w)) => Ok(EqVerdict::Unequal(w)),
            Some(Err(e)) => Err(e),
        }
    }

    pub fn is_zero(&self, chart: &Chart, f: &Scalar) -> Result<EqVerdict> {
        self.scalars_equal(chart, f, &Scalar::zero())
    }

    /// First failing component among labelled scalars that should all vanish.
    pub fn all_zero_at(
        &self,
        points: &[Point],
        labelled: &[(String, Scalar)],
    ) -> Result<EqVerdict> {
        for (label, f) in labelled {
            match self.scalars_equal_at(points, f, &Scalar::zero(), label)? {
                EqVerdict::Equal => {}
                other => return Ok(other),
            }
        }
        Ok(EqVerdict::Equal)
    }

    /// True iff `f` stays away from zero (|f| > atol) at every sample point.
    pub fn nonvanishing(&self, chart: &Chart, f: &Scalar) -> Result<bool> {
        for p in self.points(chart) {
            if self.eval(f, &p)?.abs() <= self.atol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_x() -> Chart {
        Chart::new(&["x"]).unwrap()
    }

    #[test]
    fn pythagorean_identity_holds() {
        let c = chart_x();
        let x = Scalar::coord(0);
        let lhs = x.sin().pow(2).add(&x.cos().pow(2));
        let o = Oracle::default();
        assert!(o.scalars_equal(&c, &lhs, &Scalar::one()).unwrap().is_equal());
    }

    #[test]
    fn small_shift_is_detected_with_witness() {
        let c = chart_x();
        let x = Scalar::coord(0);
        let shifted = x.add(&Scalar::constant(num::rational::Ratio::new(1, 1000)));
        let o = Oracle::default();
        match o.scalars_equal(&c, &x, &shifted).unwrap() {
            EqVerdict::Unequal(w) => {
                assert!((w.lhs - w.rhs).abs() > 1e-4);
            }
            EqVerdict::Equal => panic!("x and x + 1e-3 compared equal"),
        }
    }

    #[test]
    fn binomial_expansion_equal() {
        let c = chart_x();
        let x = Scalar::coord(0);
        let lhs = x.add(&Scalar::one()).pow(2);
        let rhs = x
            .pow(2)
            .add(&Scalar::from_int(2).mul(&x))
            .add(&Scalar::one());
        let o = Oracle::default();
        assert!(o.scalars_equal(&c, &lhs, &rhs).unwrap().is_equal());
    }

    #[test]
    fn determinism_same_seed_same_points_and_witness() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let o1 = Oracle::with_seed(7);
        let o2 = Oracle::with_seed(7);
        let p1 = o1.points(&c);
        let p2 = o2.points(&c);
        assert_eq!(
            p1.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
            p2.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()
        );
        let x = Scalar::coord(0);
        let y = Scalar::coord(1);
        let w1 = o1.scalars_equal(&c, &x, &y).unwrap();
        let w2 = o2.scalars_equal(&c, &x, &y).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn eval_failure_reports_point() {
        let c = chart_x();
        let x = Scalar::coord(0);
        let f = Scalar::one().div(&x.sub(&x)); // denominator identically zero
        let o = Oracle::default();
        match o.scalars_equal(&c, &f, &Scalar::one()) {
            Err(Error::Eval { point, .. }) => assert_eq!(point.len(), 1),
            other => panic!("expected evaluation failure, got {:?}", other),
        }
    }
}
