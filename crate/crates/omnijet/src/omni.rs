//! The omni-Lie algebroid `DL (+) J1L`: pairing, Dorfman-like bracket,
//! Courant-Jacobi tensor, and subbundle verdicts.

use crate::bundle::{commutator, jet_pairing, Derivation, Jet1};
use crate::chart::{check_same_chart, Chart, Point};
use crate::error::{Error, Result};
use crate::exec;
use crate::forms::{contract, d_d, lie_derivative, LForm};
use crate::linalg::Mat;
use crate::oracle::{EqVerdict, Oracle, PointWitness};
use crate::scalar::Scalar;

/// An element of `Gamma(DL (+) J1L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmniSection {
    pub der: Derivation,
    pub jet: Jet1,
}

impl OmniSection {
    pub fn new(der: Derivation, jet: Jet1) -> OmniSection {
        assert_eq!(der.chart, jet.chart, "omni-section halves on one chart");
        OmniSection { der, jet }
    }

    pub fn chart(&self) -> &Chart {
        &self.der.chart
    }

    pub fn zero(chart: &Chart) -> OmniSection {
        OmniSection::new(Derivation::zero(chart), Jet1::zero(chart))
    }

    pub fn from_derivation(d: Derivation) -> OmniSection {
        let jet = Jet1::zero(&d.chart);
        OmniSection::new(d, jet)
    }

    pub fn from_jet(j: Jet1) -> OmniSection {
        let der = Derivation::zero(&j.chart);
        OmniSection::new(der, j)
    }

    pub fn add(&self, other: &OmniSection) -> OmniSection {
        OmniSection::new(self.der.add(&other.der), self.jet.add(&other.jet))
    }

    pub fn sub(&self, other: &OmniSection) -> OmniSection {
        OmniSection::new(self.der.sub(&other.der), self.jet.sub(&other.jet))
    }

    pub fn scale(&self, f: &Scalar) -> OmniSection {
        OmniSection::new(self.der.scale(f), self.jet.scale(f))
    }

    /// Numeric components `(X, a, eta, g)` of length `2(n+1)`.
    pub fn eval(&self, o: &Oracle, p: &Point) -> Result<Vec<f64>> {
        let mut v = self.der.eval(o, p)?;
        v.extend(self.jet.eval(o, p)?);
        Ok(v)
    }
}

/// Symmetric `L`-valued pairing `<<(D, phi), (B, psi)>> = <D, psi> + <B, phi>`.
pub fn omni_pairing(a: &OmniSection, b: &OmniSection) -> Result<Scalar> {
    Ok(jet_pairing(&a.der, &b.jet)?.add(&jet_pairing(&b.der, &a.jet)?))
}

/// Dorfman-like bracket `[[(D, phi), (B, psi)]] = ([D, B], L_D psi - i_B d phi)`.
pub fn dorfman(a: &OmniSection, b: &OmniSection) -> Result<OmniSection> {
    check_same_chart(a.chart(), b.chart())?;
    let der = commutator(&a.der, &b.der)?;
    let lie = lie_derivative(&a.der, &LForm::from_jet(&b.jet))?;
    let corr = contract(&b.der, &d_d(&LForm::from_jet(&a.jet))?)?;
    let jet = lie.sub(&corr).to_jet()?;
    Ok(OmniSection::new(der, jet))
}

/// A finite spanning family of omni-sections representing a candidate
/// subbundle of `DL (+) J1L`.
#[derive(Debug, Clone)]
pub struct StructureFrame {
    pub chart: Chart,
    pub sections: Vec<OmniSection>,
    pub label: String,
}

impl StructureFrame {
    pub fn new(chart: Chart, sections: Vec<OmniSection>, label: impl Into<String>) -> StructureFrame {
        for s in &sections {
            assert_eq!(*s.chart(), chart, "section chart mismatch");
        }
        StructureFrame {
            chart,
            sections,
            label: label.into(),
        }
    }

    pub fn rank(&self) -> usize {
        self.sections.len()
    }

    /// Numeric `m x 2(n+1)` matrix of the frame at a point.
    pub fn matrix_at(&self, o: &Oracle, p: &Point) -> Result<Mat> {
        let rows = self
            .sections
            .iter()
            .map(|s| s.eval(o, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(&rows))
    }

    /// Derivation halves only (`m x (n+1)`).
    pub fn der_matrix_at(&self, o: &Oracle, p: &Point) -> Result<Mat> {
        let rows = self
            .sections
            .iter()
            .map(|s| s.der.eval(o, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(&rows))
    }

    /// Jet halves only (`m x (n+1)`).
    pub fn jet_matrix_at(&self, o: &Oracle, p: &Point) -> Result<Mat> {
        let rows = self
            .sections
            .iter()
            .map(|s| s.jet.eval(o, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(&rows))
    }

    /// Frame condition: the coefficient matrix has rank `m` at all oracle
    /// points.
    pub fn frame_condition(&self, o: &Oracle) -> Result<FrameVerdict> {
        let points = o.points(&self.chart);
        let hit = exec::find_map_first(&points, |p| {
            match self.matrix_at(o, p) {
                Err(e) => Some(Err(e)),
                Ok(m) => {
                    let r = m.rank(o.atol);
                    if r == self.rank() {
                        None
                    } else {
                        Some(Ok(FrameWitness {
                            point: p.coords().to_vec(),
                            indices: vec![r],
                            value: r as f64,
                            law: format!(
                                "frame rank {} < {} sections",
                                r,
                                self.rank()
                            ),
                        }))
                    }
                }
            }
        });
        match hit {
            None => Ok(FrameVerdict::Pass),
            Some(Ok(w)) => Ok(FrameVerdict::Fail(w)),
            Some(Err(e)) => Err(e),
        }
    }
}

/// A failure localized to a point, some frame indices, and a value.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameWitness {
    pub point: Vec<f64>,
    pub indices: Vec<usize>,
    pub value: f64,
    pub law: String,
}

impl std::fmt::Display for FrameWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (indices {:?}, value {:.6e}) at {:?}",
            self.law, self.indices, self.value, self.point
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameVerdict {
    Pass,
    Fail(FrameWitness),
}

impl FrameVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, FrameVerdict::Pass)
    }

    pub fn witness(&self) -> Option<&FrameWitness> {
        match self {
            FrameVerdict::Pass => None,
            FrameVerdict::Fail(w) => Some(w),
        }
    }
}

fn witness_from_eq(w: PointWitness, indices: Vec<usize>, law: &str) -> FrameWitness {
    FrameWitness {
        point: w.point,
        indices,
        value: w.lhs,
        law: law.to_string(),
    }
}

/// The Courant-Jacobi tensor `Upsilon(a, b, c) = <<[[a, b]], c>>` on a frame
/// triple. Tensorial only on isotropic frames, so isotropy is checked first.
pub fn courant_jacobi_tensor(
    frame: &StructureFrame,
    o: &Oracle,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Scalar> {
    if let FrameVerdict::Fail(w) = isotropy_verdict(frame, o)? {
        return Err(Error::NonIsotropic {
            i: w.indices[0],
            j: w.indices[1],
            point: w.point,
            value: w.value,
        });
    }
    upsilon(frame, i, j, k)
}

/// `Upsilon` without the isotropy gate; callers must have checked it.
pub(crate) fn upsilon(frame: &StructureFrame, i: usize, j: usize, k: usize) -> Result<Scalar> {
    let bracket = dorfman(&frame.sections[i], &frame.sections[j])?;
    omni_pairing(&bracket, &frame.sections[k])
}

pub(crate) fn isotropy_verdict(frame: &StructureFrame, o: &Oracle) -> Result<FrameVerdict> {
    let points = o.points(&frame.chart);
    let mut pairs = Vec::new();
    for i in 0..frame.rank() {
        for j in i..frame.rank() {
            pairs.push((i, j));
        }
    }
    let hit = exec::find_map_first(&pairs, |&(i, j)| {
        let val = match omni_pairing(&frame.sections[i], &frame.sections[j]) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        match o.scalars_equal_at(&points, &val, &Scalar::zero(), "isotropy") {
            Ok(EqVerdict::Equal) => None,
            Ok(EqVerdict::Unequal(w)) => Some(Ok(witness_from_eq(
                w,
                vec![i, j],
                "pairing of frame sections nonzero",
            ))),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(FrameVerdict::Pass),
        Some(Ok(w)) => Ok(FrameVerdict::Fail(w)),
        Some(Err(e)) => Err(e),
    }
}

fn involutivity_verdict(frame: &StructureFrame, o: &Oracle) -> Result<FrameVerdict> {
    let points = o.points(&frame.chart);
    let mut triples = Vec::new();
    for i in 0..frame.rank() {
        for j in (i + 1)..frame.rank() {
            for k in (j + 1)..frame.rank() {
                triples.push((i, j, k));
            }
        }
    }
    let hit = exec::find_map_first(&triples, |&(i, j, k)| {
        let ups = match upsilon(frame, i, j, k) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        match o.scalars_equal_at(&points, &ups, &Scalar::zero(), "involutivity") {
            Ok(EqVerdict::Equal) => None,
            Ok(EqVerdict::Unequal(w)) => Some(Ok(witness_from_eq(
                w,
                vec![i, j, k],
                "Courant-Jacobi tensor nonzero on triple",
            ))),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(FrameVerdict::Pass),
        Some(Ok(w)) => Ok(FrameVerdict::Fail(w)),
        Some(Err(e)) => Err(e),
    }
}

/// Full verdict on a candidate subbundle.
#[derive(Debug, Clone)]
pub struct Classification {
    pub frame_condition: FrameVerdict,
    pub isotropic: FrameVerdict,
    /// `rank = dim M + 1`, required for maximality once isotropic.
    pub maximal: bool,
    /// `None` when isotropy failed (the tensor is not tensorial there).
    pub involutive: Option<FrameVerdict>,
    pub dirac_jacobi: bool,
}

impl Classification {
    pub fn first_failure(&self) -> Option<&FrameWitness> {
        if let Some(w) = self.frame_condition.witness() {
            return Some(w);
        }
        if let Some(w) = self.isotropic.witness() {
            return Some(w);
        }
        self.involutive.as_ref().and_then(|v| v.witness())
    }
}

/// Decides isotropy, maximality, and involutivity (via `Upsilon` on frame
/// triples, which suffices by tensoriality) under the oracle.
pub fn classify_subbundle(frame: &StructureFrame, o: &Oracle) -> Result<Classification> {
    let frame_condition = frame.frame_condition(o)?;
    let isotropic = isotropy_verdict(frame, o)?;
    let maximal = frame.rank() == frame.chart.dim() + 1;
    let involutive = if isotropic.passed() {
        Some(involutivity_verdict(frame, o)?)
    } else {
        None
    };
    let dirac_jacobi = frame_condition.passed()
        && isotropic.passed()
        && maximal
        && involutive.as_ref().map(|v| v.passed()).unwrap_or(false);
    Ok(Classification {
        frame_condition,
        isotropic,
        maximal,
        involutive,
        dirac_jacobi,
    })
}

/// Requires the frame to be a verified Dirac-Jacobi structure.
pub fn require_dirac_jacobi(frame: &StructureFrame, o: &Oracle) -> Result<()> {
    let c = classify_subbundle(frame, o)?;
    if c.dirac_jacobi {
        Ok(())
    } else {
        let detail = c
            .first_failure()
            .map(|w| w.to_string())
            .unwrap_or_else(|| format!("rank {} != dim + 1", frame.rank()));
        Err(Error::NotDiracJacobi(format!(
            "`{}` is not a Dirac-Jacobi structure: {}",
            frame.label, detail
        )))
    }
}

/// The two pointwise characterizations of maximal isotropic subbundles:
/// `pr_D(L)^0 = L cap J1L` and `pr_J1(L) = (L cap DL)^0`, decided by rank
/// arithmetic at one point.
pub fn char_identities_at(frame: &StructureFrame, o: &Oracle, p: &Point) -> Result<bool> {
    let n1 = frame.chart.dim() + 1;
    let full = frame.matrix_at(o, p)?;
    let der = frame.der_matrix_at(o, p)?;
    let jet = frame.jet_matrix_at(o, p)?;
    let tol = o.atol;

    // L cap J1L: combinations with vanishing derivation half, jet parts taken
    let cap_jet: Vec<Vec<f64>> = der
        .transpose()
        .nullspace(tol)
        .iter()
        .map(|c| apply_combo(&jet, c))
        .collect();
    // annihilator of pr_D(L) inside J1L
    let pr_d_ann = der.nullspace(tol);
    let ok1 = crate::linalg::span_equal(&cap_jet, &pr_d_ann, tol);

    // L cap DL: combinations with vanishing jet half, derivation parts taken
    let cap_der: Vec<Vec<f64>> = jet
        .transpose()
        .nullspace(tol)
        .iter()
        .map(|c| apply_combo(&der, c))
        .collect();
    let cap_der_ann = if cap_der.is_empty() {
        // annihilator of 0 is everything
        (0..n1)
            .map(|i| {
                let mut v = vec![0.0; n1];
                v[i] = 1.0;
                v
            })
            .collect::<Vec<_>>()
    } else {
        Mat::from_rows(&cap_der).nullspace(tol)
    };
    let pr_jet: Vec<Vec<f64>> = (0..full.rows).map(|r| jet.row(r).to_vec()).collect();
    let ok2 = crate::linalg::span_equal(&pr_jet, &cap_der_ann, tol);
    Ok(ok1 && ok2)
}

/// Row-combination `sum_k c_k row_k` of a matrix.
pub(crate) fn apply_combo(m: &Mat, c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.cols];
    for (k, &ck) in c.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate() {
            *o += ck * m[(k, j)];
        }
    }
    out
}

/// Random derivation with sparse polynomial components; the identity suites
/// quantify over these.
pub fn random_derivation<R: rand::Rng>(rng: &mut R, chart: &Chart) -> Derivation {
    Derivation {
        chart: chart.clone(),
        x: (0..chart.dim())
            .map(|_| crate::scalar::random_polynomial(rng, chart.dim(), 2, 2))
            .collect(),
        a: crate::scalar::random_polynomial(rng, chart.dim(), 2, 2),
    }
}

/// Random omni-section with sparse polynomial components.
pub fn random_omni<R: rand::Rng>(rng: &mut R, chart: &Chart) -> OmniSection {
    let der = random_derivation(rng, chart);
    let jet = Jet1 {
        chart: chart.clone(),
        eta: (0..chart.dim())
            .map(|_| crate::scalar::random_polynomial(rng, chart.dim(), 2, 2))
            .collect(),
        g: crate::scalar::random_polynomial(rng, chart.dim(), 2, 2),
    };
    OmniSection::new(der, jet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::jet_prolong;
    use crate::scalar::random_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chart(names: &[&str]) -> Chart {
        Chart::new(names).unwrap()
    }

    fn assert_zero(o: &Oracle, c: &Chart, f: &Scalar, what: &str) {
        match o.scalars_equal(c, f, &Scalar::zero()).unwrap() {
            EqVerdict::Equal => {}
            EqVerdict::Unequal(w) => panic!("{} nonzero: {}", what, w),
        }
    }

    #[test]
    fn pairing_examples() {
        let c = chart(&["x", "y"]);
        let o = Oracle::default();
        let f = random_polynomial(&mut ChaCha8Rng::seed_from_u64(1), 2, 2, 2);

        // <<(1, 0), (0, j1 f)>> = f
        let a = OmniSection::from_derivation(Derivation::unit(&c));
        let b = OmniSection::from_jet(jet_prolong(&c, &f));
        let got = omni_pairing(&a, &b).unwrap();
        assert!(o.scalars_equal(&c, &got, &f).unwrap().is_equal());

        // DL is isotropic
        let d = OmniSection::from_derivation(Derivation::delta(&c, 1).unwrap());
        assert_zero(&o, &c, &omni_pairing(&d, &d).unwrap(), "<<D, D>>");

        // <<(delta_x, 0), (0, dx)>> = 1
        let a = OmniSection::from_derivation(Derivation::delta(&c, 0).unwrap());
        let b = OmniSection::from_jet(Jet1::dz(&c, 0).unwrap());
        let got = omni_pairing(&a, &b).unwrap();
        assert!(o.scalars_equal(&c, &got, &Scalar::one()).unwrap().is_equal());
    }

    #[test]
    fn dorfman_closed_on_derivations() {
        let c = chart(&["x", "y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let o = Oracle::default();
        let d = random_omni(&mut rng, &c);
        let e = random_omni(&mut rng, &c);
        let a = OmniSection::from_derivation(d.der.clone());
        let b = OmniSection::from_derivation(e.der.clone());
        let got = dorfman(&a, &b).unwrap();
        let expect = commutator(&d.der, &e.der).unwrap();
        for k in 0..=c.dim() {
            assert_zero(
                &o,
                &c,
                &got.der.component(k).sub(expect.component(k)),
                "derivation part",
            );
            assert_zero(&o, &c, got.jet.component(k), "jet part");
        }
    }

    #[test]
    fn dorfman_explicit_instance() {
        // on chart (x): [[(delta_x, 0), (0, (x dx, x^2))]] = ((0,0), (dx, 2x))
        let c = chart(&["x"]);
        let o = Oracle::default();
        let a = OmniSection::from_derivation(Derivation::delta(&c, 0).unwrap());
        let psi = Jet1::new(c.clone(), vec![Scalar::coord(0)], Scalar::coord(0).pow(2));
        let b = OmniSection::from_jet(psi);
        let got = dorfman(&a, &b).unwrap();
        assert_zero(&o, &c, got.der.component(0), "sym");
        assert_zero(&o, &c, got.der.component(1), "unit");
        assert!(o
            .scalars_equal(&c, &got.jet.eta[0], &Scalar::one())
            .unwrap()
            .is_equal());
        let two_x = Scalar::from_int(2).mul(&Scalar::coord(0));
        assert!(o.scalars_equal(&c, &got.jet.g, &two_x).unwrap().is_equal());
    }

    #[test]
    fn courant_properties_hold_on_random_sections() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let a = random_omni(&mut rng, &c);
            let b = random_omni(&mut rng, &c);
            let g = random_omni(&mut rng, &c);
            let f = random_polynomial(&mut rng, 2, 2, 2);

            // cour1: [[a, b]] + [[b, a]] = d <<a, b>> = (0, j1 <<a, b>>)
            let sym = dorfman(&a, &b).unwrap().add(&dorfman(&b, &a).unwrap());
            let rhs = OmniSection::from_jet(jet_prolong(&c, &omni_pairing(&a, &b).unwrap()));
            for k in 0..=c.dim() {
                assert_zero(&o, &c, &sym.der.component(k).sub(rhs.der.component(k)), "cour1 der");
                assert_zero(&o, &c, &sym.jet.component(k).sub(rhs.jet.component(k)), "cour1 jet");
            }

            // cour2: [[a, [[b, g]]]] = [[[[a, b]], g]] + [[b, [[a, g]]]]
            let lhs = dorfman(&a, &dorfman(&b, &g).unwrap()).unwrap();
            let rhs = dorfman(&dorfman(&a, &b).unwrap(), &g)
                .unwrap()
                .add(&dorfman(&b, &dorfman(&a, &g).unwrap()).unwrap());
            for k in 0..=c.dim() {
                assert_zero(&o, &c, &lhs.der.component(k).sub(rhs.der.component(k)), "cour2 der");
                assert_zero(&o, &c, &lhs.jet.component(k).sub(rhs.jet.component(k)), "cour2 jet");
            }

            // cour3: [[a, f b]] = f [[a, b]] + (sigma pr_D a)(f) b
            let lhs = dorfman(&a, &b.scale(&f)).unwrap();
            let x_of_f = crate::scalar::sum(
                a.der
                    .x
                    .iter()
                    .enumerate()
                    .map(|(i, xi)| xi.mul(&f.diff(i))),
            );
            let rhs = dorfman(&a, &b).unwrap().scale(&f).add(&b.scale(&x_of_f));
            for k in 0..=c.dim() {
                assert_zero(&o, &c, &lhs.der.component(k).sub(rhs.der.component(k)), "cour3 der");
                assert_zero(&o, &c, &lhs.jet.component(k).sub(rhs.jet.component(k)), "cour3 jet");
            }

            // cour4: <<[[a, b]], g>> + <<b, [[a, g]]>> = pr_D(a) <<b, g>>
            let lhs = omni_pairing(&dorfman(&a, &b).unwrap(), &g)
                .unwrap()
                .add(&omni_pairing(&b, &dorfman(&a, &g).unwrap()).unwrap());
            let rhs = crate::bundle::apply_derivation(&a.der, &omni_pairing(&b, &g).unwrap());
            assert_zero(&o, &c, &lhs.sub(&rhs), "cour4");
        }
    }

    #[test]
    fn classify_unit_structure_frame() {
        // {(1, 0)} U {(0, dz^i)} is a Dirac-Jacobi structure
        let c = chart(&["x", "y"]);
        let o = Oracle::default();
        let mut sections = vec![OmniSection::from_derivation(Derivation::unit(&c))];
        for i in 0..2 {
            sections.push(OmniSection::from_jet(Jet1::dz(&c, i).unwrap()));
        }
        let frame = StructureFrame::new(c.clone(), sections, "L_unit");
        let v = classify_subbundle(&frame, &o).unwrap();
        assert!(v.frame_condition.passed());
        assert!(v.isotropic.passed());
        assert!(v.maximal);
        assert!(v.involutive.unwrap().passed());
        assert!(v.dirac_jacobi);
    }

    #[test]
    fn non_isotropic_pair_is_flagged() {
        let c = chart(&["x"]);
        let o = Oracle::default();
        let frame = StructureFrame::new(
            c.clone(),
            vec![
                OmniSection::from_derivation(Derivation::delta(&c, 0).unwrap()),
                OmniSection::from_jet(Jet1::dz(&c, 0).unwrap()),
            ],
            "graph of duality",
        );
        let v = classify_subbundle(&frame, &o).unwrap();
        assert!(!v.isotropic.passed());
        assert!(v.involutive.is_none());
        assert!(!v.dirac_jacobi);
        let w = v.isotropic.witness().unwrap();
        assert_eq!(w.indices, vec![0, 1]);
        assert!((w.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upsilon_is_pointwise_linear_on_isotropic_frames() {
        // Upsilon(f a, b, c) = f Upsilon(a, b, c) on an isotropic frame
        let c = chart(&["x", "y"]);
        let o = Oracle::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // isotropic, non-involutive: graph of a non-closed 2-form
        let mut comps = vec![Scalar::zero(); 3];
        comps[0] = Scalar::coord(0); // omega(delta_x, delta_y) = x
        let omega = LForm::from_components(&c, 2, comps).unwrap();
        let sections: Vec<OmniSection> = (0..=c.dim())
            .map(|a| {
                let d = if a < c.dim() {
                    Derivation::delta(&c, a).unwrap()
                } else {
                    Derivation::unit(&c)
                };
                let jet = contract(&d, &omega).unwrap().to_jet().unwrap();
                OmniSection::new(d, jet)
            })
            .collect();
        let frame = StructureFrame::new(c.clone(), sections, "graph");
        assert!(isotropy_verdict(&frame, &o).unwrap().passed());

        let f = random_polynomial(&mut rng, 2, 2, 2);
        let mut scaled = frame.clone();
        scaled.sections[0] = scaled.sections[0].scale(&f);
        let lhs = upsilon(&scaled, 0, 1, 2).unwrap();
        let rhs = upsilon(&frame, 0, 1, 2).unwrap().mul(&f);
        assert_zero(&o, &c, &lhs.sub(&rhs), "C-infinity linearity");
    }

    #[test]
    fn char_identities_hold_for_maximal_isotropic() {
        let c = chart(&["x", "y"]);
        let o = Oracle::default();
        // unit structure frame
        let mut sections = vec![OmniSection::from_derivation(Derivation::unit(&c))];
        for i in 0..2 {
            sections.push(OmniSection::from_jet(Jet1::dz(&c, i).unwrap()));
        }
        let frame = StructureFrame::new(c.clone(), sections, "L_unit");
        for p in o.points(&c).into_iter().take(6) {
            assert!(char_identities_at(&frame, &o, &p).unwrap());
        }
    }
}
