//! Derivations and first jets of the trivialized line bundle `L = span(mu)`
//! over a chart, plus regular line-bundle morphisms.
//!
//! With the trivialization fixed, a section of `L` is a [`Scalar`], a
//! derivation is a symbol vector plus a coefficient of the identity
//! derivation `1`, and a first jet is a covector plus a `j1(mu)`
//! coefficient. The frames `(delta_i, 1)` of `DL` and `(dz^i (x) mu, j1 mu)`
//! of `J1L` are dual under the twisted pairing.

use crate::chart::{check_same_chart, Chart, Point};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::scalar::{sum, Scalar};

/// An element of `Der L`: symbol components `x` (one per coordinate) and the
/// coefficient `a` of the identity derivation.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub chart: Chart,
    pub x: Vec<Scalar>,
    pub a: Scalar,
}

impl Derivation {
    pub fn new(chart: Chart, x: Vec<Scalar>, a: Scalar) -> Derivation {
        assert_eq!(x.len(), chart.dim(), "symbol arity != chart dimension");
        Derivation { chart, x, a }
    }

    pub fn zero(chart: &Chart) -> Derivation {
        Derivation::new(
            chart.clone(),
            vec![Scalar::zero(); chart.dim()],
            Scalar::zero(),
        )
    }

    /// Coordinate derivation `delta_i`.
    pub fn delta(chart: &Chart, i: usize) -> Result<Derivation> {
        if i >= chart.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: chart.dim(),
            });
        }
        let mut x = vec![Scalar::zero(); chart.dim()];
        x[i] = Scalar::one();
        Ok(Derivation::new(chart.clone(), x, Scalar::zero()))
    }

    /// The identity derivation `1`.
    pub fn unit(chart: &Chart) -> Derivation {
        Derivation::new(
            chart.clone(),
            vec![Scalar::zero(); chart.dim()],
            Scalar::one(),
        )
    }

    /// Component in the frame `(delta_1..delta_n, 1)`; index `n` is the unit.
    pub fn component(&self, frame_index: usize) -> &Scalar {
        if frame_index < self.chart.dim() {
            &self.x[frame_index]
        } else {
            &self.a
        }
    }

    pub fn scale(&self, f: &Scalar) -> Derivation {
        Derivation::new(
            self.chart.clone(),
            self.x.iter().map(|c| c.mul(f)).collect(),
            self.a.mul(f),
        )
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.chart, other.chart);
        Derivation::new(
            self.chart.clone(),
            self.x
                .iter()
                .zip(&other.x)
                .map(|(a, b)| a.add(b))
                .collect(),
            self.a.add(&other.a),
        )
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Numeric components `(x(p)..., a(p))` in frame order.
    pub fn eval(&self, o: &Oracle, p: &Point) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.chart.dim() + 1);
        for c in &self.x {
            out.push(o.eval(c, p)?);
        }
        out.push(o.eval(&self.a, p)?);
        Ok(out)
    }
}

/// An element of `Gamma(J1 L)`: covector components `eta` plus the
/// coefficient `g` of `j1(mu)`. Spencer-embedded covectors have `g = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    pub chart: Chart,
    pub eta: Vec<Scalar>,
    pub g: Scalar,
}

impl Jet1 {
    pub fn new(chart: Chart, eta: Vec<Scalar>, g: Scalar) -> Jet1 {
        assert_eq!(eta.len(), chart.dim(), "covector arity != chart dimension");
        Jet1 { chart, eta, g }
    }

    pub fn zero(chart: &Chart) -> Jet1 {
        Jet1::new(
            chart.clone(),
            vec![Scalar::zero(); chart.dim()],
            Scalar::zero(),
        )
    }

    /// Spencer-embedded frame covector `dz^i (x) mu`.
    pub fn dz(chart: &Chart, i: usize) -> Result<Jet1> {
        if i >= chart.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: chart.dim(),
            });
        }
        let mut eta = vec![Scalar::zero(); chart.dim()];
        eta[i] = Scalar::one();
        Ok(Jet1::new(chart.clone(), eta, Scalar::zero()))
    }

    /// The frame jet `j1(mu)`.
    pub fn unit(chart: &Chart) -> Jet1 {
        Jet1::new(
            chart.clone(),
            vec![Scalar::zero(); chart.dim()],
            Scalar::one(),
        )
    }

    /// Spencer embedding of a covector: `eta -> (eta, 0)`. This is the
    /// convention `df (x) mu -> j1(f mu) - f j1(mu)`, the one adjoint to the
    /// symbol map; the opposite sign convention found elsewhere in the
    /// literature is recorded here but not implemented.
    pub fn embed_covector(chart: &Chart, eta: Vec<Scalar>) -> Jet1 {
        Jet1::new(chart.clone(), eta, Scalar::zero())
    }

    pub fn component(&self, frame_index: usize) -> &Scalar {
        if frame_index < self.chart.dim() {
            &self.eta[frame_index]
        } else {
            &self.g
        }
    }

    pub fn scale(&self, f: &Scalar) -> Jet1 {
        Jet1::new(
            self.chart.clone(),
            self.eta.iter().map(|c| c.mul(f)).collect(),
            self.g.mul(f),
        )
    }

    pub fn add(&self, other: &Jet1) -> Jet1 {
        assert_eq!(self.chart, other.chart);
        Jet1::new(
            self.chart.clone(),
            self.eta
                .iter()
                .zip(&other.eta)
                .map(|(a, b)| a.add(b))
                .collect(),
            self.g.add(&other.g),
        )
    }

    pub fn sub(&self, other: &Jet1) -> Jet1 {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn eval(&self, o: &Oracle, p: &Point) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.chart.dim() + 1);
        for c in &self.eta {
            out.push(o.eval(c, p)?);
        }
        out.push(o.eval(&self.g, p)?);
        Ok(out)
    }
}

/// `Delta(f)` for the section `f mu`: the Leibniz action `X(f) + a f`.
pub fn apply_derivation(d: &Derivation, f: &Scalar) -> Scalar {
    let lead = sum(d.x.iter().enumerate().map(|(i, xi)| xi.mul(&f.diff(i))));
    lead.add(&d.a.mul(f))
}

/// Commutator of derivations: `([X, Y], X(b) - Y(a))`.
pub fn commutator(d: &Derivation, e: &Derivation) -> Result<Derivation> {
    check_same_chart(&d.chart, &e.chart)?;
    let n = d.chart.dim();
    let bracket: Vec<Scalar> = (0..n)
        .map(|k| {
            let fwd = sum(d.x.iter().enumerate().map(|(i, xi)| xi.mul(&e.x[k].diff(i))));
            let bwd = sum(e.x.iter().enumerate().map(|(i, yi)| yi.mul(&d.x[k].diff(i))));
            fwd.sub(&bwd)
        })
        .collect();
    let x_of_b = sum(d.x.iter().enumerate().map(|(i, xi)| xi.mul(&e.a.diff(i))));
    let y_of_a = sum(e.x.iter().enumerate().map(|(i, yi)| yi.mul(&d.a.diff(i))));
    Ok(Derivation::new(
        d.chart.clone(),
        bracket,
        x_of_b.sub(&y_of_a),
    ))
}

/// Duality pairing twisted by `L`: `<Delta, psi> = sum X^i eta_i + a g`.
pub fn jet_pairing(d: &Derivation, psi: &Jet1) -> Result<Scalar> {
    check_same_chart(&d.chart, &psi.chart)?;
    let lead = sum(d.x.iter().zip(&psi.eta).map(|(xi, ei)| xi.mul(ei)));
    Ok(lead.add(&d.a.mul(&psi.g)))
}

/// First jet prolongation `j1(f mu) = (df, f)`.
pub fn jet_prolong(chart: &Chart, f: &Scalar) -> Jet1 {
    Jet1::new(chart.clone(), f.gradient(chart.dim()), f.clone())
}

/// A regular morphism of trivialized line bundles over `base_map`:
/// `F(mu_x) = factor(x) * mu'` at `base_map(x)`. Regularity means the factor
/// never vanishes on the source domain.
#[derive(Debug, Clone)]
pub struct LineBundleMorphism {
    pub source: Chart,
    pub target: Chart,
    /// One scalar over the source chart per target coordinate.
    pub base_map: Vec<Scalar>,
    /// Fiber factor over the source chart; nonvanishing.
    pub factor: Scalar,
}

impl LineBundleMorphism {
    pub fn new(
        source: Chart,
        target: Chart,
        base_map: Vec<Scalar>,
        factor: Scalar,
    ) -> LineBundleMorphism {
        assert_eq!(base_map.len(), target.dim(), "base map arity");
        LineBundleMorphism {
            source,
            target,
            base_map,
            factor,
        }
    }

    pub fn identity(chart: &Chart) -> LineBundleMorphism {
        LineBundleMorphism::new(
            chart.clone(),
            chart.clone(),
            (0..chart.dim()).map(Scalar::coord).collect(),
            Scalar::one(),
        )
    }

    /// Samples the regularity conditions: the factor is nonvanishing and the
    /// base map lands inside the target domain at all oracle points.
    pub fn validate(&self, o: &Oracle) -> Result<()> {
        if !o.nonvanishing(&self.source, &self.factor)? {
            return Err(Error::Invalid(
                "morphism factor vanishes at a sampled point".into(),
            ));
        }
        for p in o.points(&self.source) {
            for (j, comp) in self.base_map.iter().enumerate() {
                let v = o.eval(comp, &p)?;
                let (lo, hi) = self.target.domain(j);
                if v < lo || v > hi {
                    return Err(Error::OutsideDomain {
                        name: self.target.name(j).to_string(),
                        value: v,
                        lo,
                        hi,
                    });
                }
            }
        }
        Ok(())
    }

    /// Composes a target-chart scalar with the base map.
    pub fn compose_base(&self, f_target: &Scalar) -> Scalar {
        f_target.subst(&self.base_map)
    }

    /// `G o F` (this morphism first, then `g`).
    pub fn then(&self, g: &LineBundleMorphism) -> Result<LineBundleMorphism> {
        check_same_chart(&self.target, &g.source)?;
        let base_map = g.base_map.iter().map(|c| self.compose_base(c)).collect();
        let factor = self.factor.mul(&self.compose_base(&g.factor));
        Ok(LineBundleMorphism::new(
            self.source.clone(),
            g.target.clone(),
            base_map,
            factor,
        ))
    }

    pub fn base_point(&self, o: &Oracle, p: &Point) -> Result<Point> {
        let mut coords = Vec::with_capacity(self.target.dim());
        for comp in &self.base_map {
            coords.push(o.eval(comp, p)?);
        }
        self.target.point(coords)
    }
}

/// Pullback of a section: `F*(f') = (f' o base) / factor`.
pub fn pullback_section(f: &LineBundleMorphism, f_target: &Scalar) -> Scalar {
    f.compose_base(f_target).div(&f.factor)
}

/// Pointwise derivation at a target point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointDerivation {
    pub point: Point,
    pub x: Vec<f64>,
    pub a: f64,
}

impl PointDerivation {
    pub fn components(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.push(self.a);
        v
    }
}

/// Pushforward `(d_D F)(Delta)` at `base(p)`: symbol `dF(X)|_p`, unit
/// coefficient `a(p) - X(factor)(p)/factor(p)`.
pub fn pushforward_derivation(
    f: &LineBundleMorphism,
    d: &Derivation,
    o: &Oracle,
    p: &Point,
) -> Result<PointDerivation> {
    check_same_chart(&f.source, &d.chart)?;
    let target_point = f.base_point(o, p)?;
    let mut x = Vec::with_capacity(f.target.dim());
    for comp in &f.base_map {
        // (dF(X))^j = sum_i X^i d_i F^j
        let pushed = sum(d.x.iter().enumerate().map(|(i, xi)| xi.mul(&comp.diff(i))));
        x.push(o.eval(&pushed, p)?);
    }
    let c_val = o.eval(&f.factor, p)?;
    if c_val.abs() <= o.atol {
        return Err(Error::Eval {
            point: p.coords().to_vec(),
            kind: crate::error::EvalKind::DivisionNearZero { denom: c_val },
        });
    }
    let x_of_c = sum(d.x.iter().enumerate().map(|(i, xi)| xi.mul(&f.factor.diff(i))));
    let a = o.eval(&d.a, p)? - o.eval(&x_of_c, p)? / c_val;
    Ok(PointDerivation {
        point: target_point,
        x,
        a,
    })
}

/// Pullback of a jet, pinned by adjointness with the pushforward:
/// `<F_* Delta, psi'> = F* <Delta, F* psi'>` forces
/// `eta_i = (sum_j eta'_j o F) d_i F^j / c - (g' o F) d_i c / c^2` and
/// `g = (g' o F) / c`. In particular `F*(j1 f') = j1(F* f')`.
pub fn pullback_jet(f: &LineBundleMorphism, psi: &Jet1) -> Result<Jet1> {
    check_same_chart(&f.target, &psi.chart)?;
    let n = f.source.dim();
    let g_comp = f.compose_base(&psi.g);
    let c = &f.factor;
    let c2 = c.pow(2);
    let eta: Vec<Scalar> = (0..n)
        .map(|i| {
            let lead = sum(psi.eta.iter().zip(&f.base_map).map(|(eta_j, base_j)| {
                f.compose_base(eta_j).mul(&base_j.diff(i))
            }));
            lead.div(c).sub(&g_comp.mul(&c.diff(i)).div(&c2))
        })
        .collect();
    Ok(Jet1::new(f.source.clone(), eta, g_comp.div(c)))
}
