//! Coordinate charts and points.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parse::{parse_expr, ParseError};
use crate::scalar::Scalar;

#[derive(Debug, PartialEq)]
struct ChartData {
    names: Vec<String>,
    domains: Vec<(f64, f64)>,
}

/// An ordered list of named coordinates, each with a closed sampling
/// interval (default `[-1, 1]`). Cheap to clone.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({})", self.describe())
    }
}

impl Chart {
    pub fn new(names: &[&str]) -> Result<Chart> {
        let domains = vec![(-1.0, 1.0); names.len()];
        Chart::with_domains(names, &domains)
    }

    pub fn with_domains(names: &[&str], domains: &[(f64, f64)]) -> Result<Chart> {
        if names.is_empty() {
            return Err(Error::Invalid("chart needs at least one coordinate".into()));
        }
        if names.len() != domains.len() {
            return Err(Error::Invalid(format!(
                "{} names but {} domains",
                names.len(),
                domains.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Invalid("empty coordinate name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate coordinate `{}`", n)));
            }
        }
        for (n, (lo, hi)) in names.iter().zip(domains) {
            if !(hi > lo) {
                return Err(Error::Invalid(format!(
                    "domain of `{}` has nonpositive length: [{}, {}]",
                    n, lo, hi
                )));
            }
        }
        Ok(Chart(Arc::new(ChartData {
            names: names.iter().map(|s| s.to_string()).collect(),
            domains: domains.to_vec(),
        })))
    }

    pub fn dim(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn domain(&self, i: usize) -> (f64, f64) {
        self.0.domains[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn describe(&self) -> String {
        self.0.names.join(",")
    }

    /// Parses an expression whose identifiers are this chart's coordinates.
    pub fn parse(&self, text: &str) -> std::result::Result<Scalar, ParseError> {
        parse_expr(text, &self.0.names)
    }

    pub fn print(&self, f: &Scalar) -> String {
        f.print(&|i| self.0.names[i].clone())
    }

    /// New chart with one extra trailing coordinate.
    pub fn extend(&self, name: &str, domain: (f64, f64)) -> Result<Chart> {
        let mut names: Vec<&str> = self.0.names.iter().map(|s| s.as_str()).collect();
        if names.contains(&name) {
            return Err(Error::Invalid(format!("duplicate coordinate `{}`", name)));
        }
        names.push(name);
        let mut domains = self.0.domains.clone();
        domains.push(domain);
        Chart::with_domains(&names, &domains)
    }

    /// Sub-chart keeping the listed coordinate indices, in their given order.
    pub fn subchart(&self, keep: &[usize]) -> Result<Chart> {
        let names: Vec<&str> = keep.iter().map(|&i| self.0.names[i].as_str()).collect();
        let domains: Vec<(f64, f64)> = keep.iter().map(|&i| self.0.domains[i]).collect();
        Chart::with_domains(&names, &domains)
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<Point> {
        if coords.len() != self.dim() {
            return Err(Error::PointArity {
                got: coords.len(),
                dim: self.dim(),
            });
        }
        for (i, &v) in coords.iter().enumerate() {
            let (lo, hi) = self.0.domains[i];
            let slack = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
            if v < lo - slack || v > hi + slack {
                return Err(Error::OutsideDomain {
                    name: self.0.names[i].clone(),
                    value: v,
                    lo,
                    hi,
                });
            }
        }
        Ok(Point {
            chart: self.clone(),
            coords,
        })
    }

    /// Regular grid with `per_axis` samples per coordinate (domain corners
    /// included); `per_axis^dim` points in lexicographic order.
    pub fn grid(&self, per_axis: usize) -> Vec<Point> {
        assert!(per_axis >= 2);
        let n = self.dim();
        let total = per_axis.pow(n as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut coords = vec![0.0; n];
            for i in (0..n).rev() {
                let step = rem % per_axis;
                rem /= per_axis;
                let (lo, hi) = self.0.domains[i];
                coords[i] = lo + (hi - lo) * step as f64 / (per_axis - 1) as f64;
            }
            out.push(Point {
                chart: self.clone(),
                coords,
            });
        }
        out
    }
}

/// A point of a chart; arity always equals the chart dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    chart: Chart,
    coords: Vec<f64>,
}

impl Point {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn display(&self) -> String {
        self.chart
            .names()
            .iter()
            .zip(&self.coords)
            .map(|(n, v)| format!("{}={}", n, v))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub(crate) fn check_same_chart(a: &Chart, b: &Chart) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::chart_mismatch(a, b))
    }
}
