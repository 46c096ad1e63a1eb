//! Constructors and recognizers for the Dirac-Jacobi structure classes:
//! graphs of 2-cochains, graphs of Jacobi brackets, flat connections, the
//! unit structure, lcps pairs, homogeneous Poisson pairs, lifted Dirac
//! structures, and gauge transformations.

use crate::bundle::{jet_pairing, jet_prolong, Derivation, Jet1};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::{combinations, contract, LForm};
use crate::omni::{require_dirac_jacobi, OmniSection, StructureFrame};
use crate::oracle::{EqVerdict, Oracle};
use crate::scalar::{sum, Scalar};
use crate::symmat::{invert, left_nullspace, rref, SymMat};

/// A skew-symmetric first order bidifferential operator, stored as the upper
/// triangle of an antisymmetric `(n+1) x (n+1)` matrix over the `J1L`-frame
/// `(dz^i (x) mu, j1 mu)`. Entries with both indices below `n` form the
/// bivector part `Lambda`, entries against the last index form the vector
/// part `Gamma`.
///
/// The wedge convention is `(u ^ v)(a, b) = u(a) v(b) - u(b) v(a)` with the
/// identity slot acting on `j1 f` as `f`, so the induced bracket is
/// `{f, g} = Lambda^{ij} d_i f d_j g + Gamma^i (d_i f g - f d_i g)`.
#[derive(Debug, Clone)]
pub struct JacobiMatrix {
    pub chart: Chart,
    /// Entries `J^{AB}` for `A < B` in lexicographic pair order.
    upper: Vec<Scalar>,
}

impl JacobiMatrix {
    pub fn new(chart: Chart, upper: Vec<Scalar>) -> Result<JacobiMatrix> {
        let nf = chart.dim() + 1;
        let expect = nf * (nf - 1) / 2;
        if upper.len() != expect {
            return Err(Error::Invalid(format!(
                "a Jacobi matrix on a {}-chart needs {} upper entries, got {}",
                chart.dim(),
                expect,
                upper.len()
            )));
        }
        Ok(JacobiMatrix { chart, upper })
    }

    pub fn zero(chart: &Chart) -> JacobiMatrix {
        let nf = chart.dim() + 1;
        JacobiMatrix {
            chart: chart.clone(),
            upper: vec![Scalar::zero(); nf * (nf - 1) / 2],
        }
    }

    /// Builds from a bivector upper triangle (`C(n,2)` entries, pairs of
    /// coordinates in lex order) and a vector part (`n` entries).
    pub fn from_parts(chart: &Chart, lambda: &[Scalar], gamma: &[Scalar]) -> Result<JacobiMatrix> {
        let n = chart.dim();
        if lambda.len() != n * (n - 1) / 2 || gamma.len() != n {
            return Err(Error::Invalid(format!(
                "expected {} bivector and {} vector entries, got {} and {}",
                n * (n - 1) / 2,
                n,
                lambda.len(),
                gamma.len()
            )));
        }
        let mut j = JacobiMatrix::zero(chart);
        let mut lam = lambda.iter();
        for i in 0..n {
            for k in (i + 1)..n {
                *j.upper_mut(i, k) = lam.next().unwrap().clone();
            }
        }
        for (i, g) in gamma.iter().enumerate() {
            *j.upper_mut(i, n) = g.clone();
        }
        Ok(j)
    }

    fn pair_pos(&self, a: usize, b: usize) -> usize {
        let combos = combinations(self.chart.dim() + 1, 2);
        combos
            .iter()
            .position(|c| c[0] == a && c[1] == b)
            .expect("pair in range")
    }

    fn upper_mut(&mut self, a: usize, b: usize) -> &mut Scalar {
        let pos = self.pair_pos(a, b);
        &mut self.upper[pos]
    }

    /// Signed entry `J^{AB}`.
    pub fn entry(&self, a: usize, b: usize) -> Scalar {
        use std::cmp::Ordering;
        match a.cmp(&b) {
            Ordering::Equal => Scalar::zero(),
            Ordering::Less => self.upper[self.pair_pos(a, b)].clone(),
            Ordering::Greater => self.upper[self.pair_pos(b, a)].neg(),
        }
    }

    pub fn upper_entries(&self) -> &[Scalar] {
        &self.upper
    }

    /// `J#(psi) = J(psi, -)`: component `B` is `sum_A J^{AB} psi_A`.
    pub fn sharp(&self, psi: &Jet1) -> Derivation {
        let nf = self.chart.dim() + 1;
        let comp = |b: usize| sum((0..nf).map(|a| self.entry(a, b).mul(psi.component(a))));
        Derivation::new(
            self.chart.clone(),
            (0..self.chart.dim()).map(comp).collect(),
            comp(self.chart.dim()),
        )
    }

    /// The induced bracket `{f, g} = J(j1 f, j1 g)`.
    pub fn bracket(&self, f: &Scalar, g: &Scalar) -> Scalar {
        jet_pairing(
            &self.sharp(&jet_prolong(&self.chart, f)),
            &jet_prolong(&self.chart, g),
        )
        .expect("same chart")
    }
}

/// A bivector plus scaling vector field; a homogeneous Poisson structure
/// when the bivector is Poisson and `L_Z pi = -pi`.
#[derive(Debug, Clone)]
pub struct HomogeneousPoissonData {
    pub chart: Chart,
    /// Upper triangle of `pi` over coordinate pairs in lex order.
    pi: Vec<Scalar>,
    pub z: Vec<Scalar>,
}

impl HomogeneousPoissonData {
    pub fn new(chart: Chart, pi: Vec<Scalar>, z: Vec<Scalar>) -> Result<HomogeneousPoissonData> {
        let n = chart.dim();
        if pi.len() != n * (n - 1) / 2 || z.len() != n {
            return Err(Error::Invalid(format!(
                "expected {} bivector and {} vector entries, got {} and {}",
                n * (n - 1) / 2,
                n,
                pi.len(),
                z.len()
            )));
        }
        Ok(HomogeneousPoissonData { chart, pi, z })
    }

    pub fn pi_entry(&self, i: usize, j: usize) -> Scalar {
        use std::cmp::Ordering;
        let n = self.chart.dim();
        let pos = |a: usize, b: usize| {
            combinations(n, 2)
                .iter()
                .position(|c| c[0] == a && c[1] == b)
                .expect("pair in range")
        };
        match i.cmp(&j) {
            Ordering::Equal => Scalar::zero(),
            Ordering::Less => self.pi[pos(i, j)].clone(),
            Ordering::Greater => self.pi[pos(j, i)].neg(),
        }
    }

    pub fn pi_upper(&self) -> &[Scalar] {
        &self.pi
    }

    /// `(pi#(eta))^j = sum_i eta_i pi^{ij}`.
    pub fn sharp(&self, eta: &[Scalar]) -> Vec<Scalar> {
        let n = self.chart.dim();
        (0..n)
            .map(|j| sum((0..n).map(|i| eta[i].mul(&self.pi_entry(i, j)))))
            .collect()
    }

    /// Components of `L_Z pi + pi`; all must vanish for homogeneity.
    pub fn homogeneity_defect(&self) -> Vec<(String, Scalar)> {
        let n = self.chart.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let p = self.pi_entry(i, j);
                let z_of_p = sum(self.z.iter().enumerate().map(|(k, zk)| zk.mul(&p.diff(k))));
                let corr1 = sum((0..n).map(|k| self.pi_entry(k, j).mul(&self.z[i].diff(k))));
                let corr2 = sum((0..n).map(|k| self.pi_entry(i, k).mul(&self.z[j].diff(k))));
                let lie = z_of_p.sub(&corr1).sub(&corr2);
                out.push((
                    format!(
                        "(L_Z pi + pi)^{{{},{}}}",
                        self.chart.name(i),
                        self.chart.name(j)
                    ),
                    lie.add(&p),
                ));
            }
        }
        out
    }

    /// Jacobiator components `sum_l pi^{il} d_l pi^{jk} + cyclic`; all must
    /// vanish for `pi` to be Poisson.
    pub fn jacobiator(&self) -> Vec<(String, Scalar)> {
        let n = self.chart.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let term = |a: usize, b: usize, c: usize| {
                        sum((0..n)
                            .map(|l| self.pi_entry(a, l).mul(&self.pi_entry(b, c).diff(l))))
                    };
                    let jac = term(i, j, k).add(&term(j, k, i)).add(&term(k, i, j));
                    out.push((
                        format!(
                            "jacobiator({}, {}, {})",
                            self.chart.name(i),
                            self.chart.name(j),
                            self.chart.name(k)
                        ),
                        jac,
                    ));
                }
            }
        }
        out
    }
}

fn frame_derivations(chart: &Chart) -> Vec<Derivation> {
    let mut out: Vec<Derivation> = (0..chart.dim())
        .map(|i| Derivation::delta(chart, i).expect("in range"))
        .collect();
    out.push(Derivation::unit(chart));
    out
}

fn frame_jets(chart: &Chart) -> Vec<Jet1> {
    let mut out: Vec<Jet1> = (0..chart.dim())
        .map(|i| Jet1::dz(chart, i).expect("in range"))
        .collect();
    out.push(Jet1::unit(chart));
    out
}

/// Graph of a 2-cochain: frame `{(e_A, i_{e_A} omega)}` over the `DL` frame.
/// Dirac-Jacobi exactly when `omega` is closed.
pub fn from_two_cocycle(omega: &LForm) -> Result<StructureFrame> {
    if omega.degree != 2 {
        return Err(Error::FormDegree {
            degree: omega.degree,
            max: 2,
        });
    }
    let chart = omega.chart.clone();
    let sections = frame_derivations(&chart)
        .into_iter()
        .map(|d| {
            let jet = contract(&d, omega)?.to_jet()?;
            Ok(OmniSection::new(d, jet))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureFrame::new(chart, sections, "graph of 2-cochain"))
}

/// Graph of a Jacobi matrix: frame `{(J#(eps_A), eps_A)}` over the `J1L`
/// frame. Dirac-Jacobi exactly when the bracket satisfies Jacobi.
pub fn from_jacobi(j: &JacobiMatrix) -> StructureFrame {
    let chart = j.chart.clone();
    let sections = frame_jets(&chart)
        .into_iter()
        .map(|psi| OmniSection::new(j.sharp(&psi), psi))
        .collect();
    StructureFrame::new(chart, sections, "graph of Jacobi matrix")
}

fn flatness_check(chart: &Chart, gamma: &[Scalar], o: &Oracle) -> Result<()> {
    for i in 0..chart.dim() {
        for j in (i + 1)..chart.dim() {
            let curv = gamma[j].diff(i).sub(&gamma[i].diff(j));
            if let EqVerdict::Unequal(w) = o.is_zero(chart, &curv)? {
                return Err(Error::NonFlat {
                    i,
                    j,
                    point: w.point,
                    value: w.lhs,
                });
            }
        }
    }
    Ok(())
}

/// Flat connection `nabla_i = delta_i + Gamma_i 1` as the structure
/// `V (+) V^0` with `V = im(nabla)`; frame
/// `{(nabla_i, 0)} U {(0, (-Gamma, 1))}`.
pub fn from_flat_connection(chart: &Chart, gamma: &[Scalar], o: &Oracle) -> Result<StructureFrame> {
    if gamma.len() != chart.dim() {
        return Err(Error::Invalid(format!(
            "connection needs {} components, got {}",
            chart.dim(),
            gamma.len()
        )));
    }
    flatness_check(chart, gamma, o)?;
    Ok(lcps_frame(
        chart,
        gamma,
        &LForm::zero(chart, 2)?,
        "flat connection",
    ))
}

/// Unit structure: `{(1, 0)} U {(0, dz^i)}`, the span of the identity
/// derivation plus its annihilator.
pub fn unit_structure(chart: &Chart) -> StructureFrame {
    let mut sections = vec![OmniSection::from_derivation(Derivation::unit(chart))];
    for i in 0..chart.dim() {
        sections.push(OmniSection::from_jet(Jet1::dz(chart, i).expect("in range")));
    }
    StructureFrame::new(chart.clone(), sections, "unit structure")
}

fn lcps_frame(chart: &Chart, gamma: &[Scalar], omega: &LForm, label: &str) -> StructureFrame {
    let mut sections = Vec::with_capacity(chart.dim() + 1);
    for i in 0..chart.dim() {
        let mut x = vec![Scalar::zero(); chart.dim()];
        x[i] = Scalar::one();
        let nabla_i = Derivation::new(chart.clone(), x, gamma[i].clone());
        let jet = contract(&nabla_i, omega)
            .expect("degree 2")
            .to_jet()
            .expect("degree 1");
        sections.push(OmniSection::new(nabla_i, jet));
    }
    let covector: Vec<Scalar> = gamma.iter().map(|g| g.neg()).collect();
    sections.push(OmniSection::from_jet(Jet1::new(
        chart.clone(),
        covector,
        Scalar::one(),
    )));
    StructureFrame::new(chart.clone(), sections, label)
}

/// Deformation of a flat connection by an `L`-valued base 2-form: frame
/// `{(nabla_i, i_{nabla_i} sigma* omega)} U {(0, (-Gamma, 1))}`. The base
/// form is given by its `C(n, 2)` upper entries over coordinate pairs.
pub fn from_lcps(
    chart: &Chart,
    gamma: &[Scalar],
    omega_base: &[Scalar],
    o: &Oracle,
) -> Result<StructureFrame> {
    if gamma.len() != chart.dim() {
        return Err(Error::Invalid(format!(
            "connection needs {} components, got {}",
            chart.dim(),
            gamma.len()
        )));
    }
    flatness_check(chart, gamma, o)?;
    let omega = base_two_form(chart, omega_base)?;
    Ok(lcps_frame(chart, gamma, &omega, "lcps structure"))
}

/// `sigma* omega` of a base 2-form: identity slots vanish, coordinate pairs
/// carry the given upper entries.
pub fn base_two_form(chart: &Chart, upper: &[Scalar]) -> Result<LForm> {
    let n = chart.dim();
    if upper.len() != n * (n - 1) / 2 {
        return Err(Error::Invalid(format!(
            "base 2-form needs {} entries, got {}",
            n * (n - 1) / 2,
            upper.len()
        )));
    }
    let pairs = combinations(n + 1, 2);
    let base_pairs = combinations(n, 2);
    let comps = pairs
        .iter()
        .map(|p| {
            if p[1] < n {
                let pos = base_pairs
                    .iter()
                    .position(|q| q == p)
                    .expect("coordinate pair");
                upper[pos].clone()
            } else {
                Scalar::zero()
            }
        })
        .collect();
    LForm::from_components(chart, 2, comps)
}

/// Frame of `L_(pi, Z)`:
/// `{((-Z, 1), 0)} U {((pi# dz^i, 0), (dz^i, Z^i))}`.
pub fn from_homogeneous_poisson(data: &HomogeneousPoissonData) -> StructureFrame {
    let chart = data.chart.clone();
    let n = chart.dim();
    let mut sections = Vec::with_capacity(n + 1);
    let z_neg: Vec<Scalar> = data.z.iter().map(|z| z.neg()).collect();
    sections.push(OmniSection::new(
        Derivation::new(chart.clone(), z_neg, Scalar::one()),
        Jet1::zero(&chart),
    ));
    for i in 0..n {
        let mut eta = vec![Scalar::zero(); n];
        eta[i] = Scalar::one();
        let x: Vec<Scalar> = (0..n).map(|j| data.pi_entry(i, j)).collect();
        sections.push(OmniSection::new(
            Derivation::new(chart.clone(), x, Scalar::zero()),
            Jet1::new(chart.clone(), eta, data.z[i].clone()),
        ));
    }
    StructureFrame::new(chart, sections, "homogeneous Poisson")
}

/// Gauge transformation `tau_omega`: each `(Delta, psi)` becomes
/// `(Delta, psi + i_Delta omega)`.
pub fn gauge_transform(frame: &StructureFrame, omega: &LForm) -> Result<StructureFrame> {
    if omega.degree != 2 {
        return Err(Error::FormDegree {
            degree: omega.degree,
            max: 2,
        });
    }
    let sections = frame
        .sections
        .iter()
        .map(|s| {
            let shift = contract(&s.der, omega)?.to_jet()?;
            Ok(OmniSection::new(s.der.clone(), s.jet.add(&shift)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureFrame::new(
        frame.chart.clone(),
        sections,
        format!("{} (gauged)", frame.label),
    ))
}

/// Lift of a tangent Dirac structure to the omni-Lie algebroid: sections
/// `(X, eta)` become `((X, 0), (eta, 0))`, plus the extra generator
/// `((0, 0), (0, 1))`. The input must pass the tangent Dirac checks.
pub fn lift_dirac(
    chart: &Chart,
    dirac_frame: &[crate::dirac::TangentSection],
    o: &Oracle,
) -> Result<StructureFrame> {
    let verdict = crate::dirac::tangent_classify(chart, dirac_frame, o)?;
    if !verdict.dirac {
        let what = verdict
            .first_failure()
            .map(|w| w.to_string())
            .unwrap_or_else(|| "rank mismatch".into());
        return Err(Error::NotDiracJacobi(format!(
            "input frame is not a tangent Dirac structure: {}",
            what
        )));
    }
    let mut sections: Vec<OmniSection> = dirac_frame
        .iter()
        .map(|s| {
            OmniSection::new(
                Derivation::new(chart.clone(), s.x.clone(), Scalar::zero()),
                Jet1::new(chart.clone(), s.alpha.clone(), Scalar::zero()),
            )
        })
        .collect();
    sections.push(OmniSection::from_jet(Jet1::unit(chart)));
    Ok(StructureFrame::new(chart.clone(), sections, "lifted Dirac"))
}

/// Per-point intersection ranks used by [`recognize`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointRanks {
    pub point: Vec<f64>,
    /// rank of the derivation halves (full iff `L cap J1L = 0`)
    pub der_rank: usize,
    /// rank of the jet halves (full iff `L cap DL = 0`)
    pub jet_rank: usize,
    /// rank of `E = L cap DL`
    pub e_rank: usize,
}

/// What a verified Dirac-Jacobi frame turned out to be. Several tags can
/// hold at once (a contact structure is both a cocycle graph and a Jacobi
/// graph); extraction is symbolic and exact up to the recorded divisions.
#[derive(Debug)]
pub struct RecognizeReport {
    pub two_cocycle: Option<LForm>,
    pub jacobi: Option<JacobiMatrix>,
    pub hom_poisson: Option<HomogeneousPoissonData>,
    pub rank_table: Vec<PointRanks>,
}

impl RecognizeReport {
    pub fn unclassified(&self) -> bool {
        self.two_cocycle.is_none() && self.jacobi.is_none() && self.hom_poisson.is_none()
    }
}

pub(crate) fn der_symmat(frame: &StructureFrame) -> SymMat {
    SymMat::from_rows(
        frame
            .sections
            .iter()
            .map(|s| {
                let mut row = s.der.x.clone();
                row.push(s.der.a.clone());
                row
            })
            .collect(),
    )
}

pub(crate) fn jet_symmat(frame: &StructureFrame) -> SymMat {
    SymMat::from_rows(
        frame
            .sections
            .iter()
            .map(|s| {
                let mut row = s.jet.eta.clone();
                row.push(s.jet.g.clone());
                row
            })
            .collect(),
    )
}

/// Decides which graph descriptions hold at every oracle point and extracts
/// the generating data. Intersection ranks must be uniform across sample
/// points; mixed answers leave the corresponding tag empty.
pub fn recognize(frame: &StructureFrame, o: &Oracle) -> Result<RecognizeReport> {
    require_dirac_jacobi(frame, o)?;
    let chart = &frame.chart;
    let n = chart.dim();
    let m = frame.rank();

    let mut rank_table = Vec::new();
    for p in o.points(chart) {
        let der = frame.der_matrix_at(o, &p)?;
        let jet = frame.jet_matrix_at(o, &p)?;
        rank_table.push(PointRanks {
            point: p.coords().to_vec(),
            der_rank: der.rank(o.atol),
            jet_rank: jet.rank(o.atol),
            e_rank: m - jet.rank(o.atol),
        });
    }
    let der_full = rank_table.iter().all(|r| r.der_rank == m);
    let jet_full = rank_table.iter().all(|r| r.jet_rank == m);
    let e_line = rank_table.iter().all(|r| r.e_rank == 1);

    // (a) L cap J1L = 0: normalize the derivation halves to the DL frame and
    // read the cocycle off the jets: omega_{AB} = psi_A(e_B).
    let two_cocycle = if der_full {
        let t = invert(&der_symmat(frame), chart, o)?;
        let jets = jet_symmat(frame);
        let normalized_jet =
            |a: usize, b: usize| sum((0..m).map(|k| t[(a, k)].mul(&jets[(k, b)])));
        let comps = combinations(n + 1, 2)
            .iter()
            .map(|pair| normalized_jet(pair[0], pair[1]))
            .collect();
        Some(LForm::from_components(chart, 2, comps)?)
    } else {
        None
    };

    // (b) L cap DL = 0: normalize the jet halves to the J1L frame and read
    // the Jacobi matrix off the derivations: J^{AB} = Delta_A(e_B).
    let jacobi = if jet_full {
        let t = invert(&jet_symmat(frame), chart, o)?;
        let ders = der_symmat(frame);
        let normalized_der =
            |a: usize, b: usize| sum((0..m).map(|k| t[(a, k)].mul(&ders[(k, b)])));
        let upper = combinations(n + 1, 2)
            .iter()
            .map(|pair| normalized_der(pair[0], pair[1]))
            .collect();
        Some(JacobiMatrix::new(chart.clone(), upper)?)
    } else {
        None
    };

    // (c) E has rank one with invertible unit coefficient: recover (pi, Z).
    let hom_poisson = if e_line {
        recover_homogeneous_poisson(frame, o)?
    } else {
        None
    };

    Ok(RecognizeReport {
        two_cocycle,
        jacobi,
        hom_poisson,
        rank_table,
    })
}

fn recover_homogeneous_poisson(
    frame: &StructureFrame,
    o: &Oracle,
) -> Result<Option<HomogeneousPoissonData>> {
    let chart = &frame.chart;
    let n = chart.dim();
    let jets = jet_symmat(frame);
    let ders = der_symmat(frame);

    // E generator: the unique combination with vanishing jet half.
    let kernel = left_nullspace(&jets, chart, o)?;
    if kernel.len() != 1 {
        return Ok(None);
    }
    let combo = &kernel[0];
    let e_comp = |b: usize| sum((0..frame.rank()).map(|k| combo[k].mul(&ders[(k, b)])));
    let tau = e_comp(n);
    if !o.nonvanishing(chart, &tau).unwrap_or(false) {
        return Ok(None);
    }
    // normalize to (-Z, 1)
    let z: Vec<Scalar> = (0..n).map(|j| e_comp(j).div(&tau).neg()).collect();

    // Reduce the jet halves; pivots must land on the covector columns.
    let (_r, t, pivots) = rref(&jets, chart, o)?;
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return Err(Error::Elimination(
            "jet reduction did not normalize the covector block".into(),
        ));
    }
    // Row for pivot column i carries jet (dz^i, g_i); take its derivation
    // half, then cancel the unit coefficient against the E generator.
    let mut pi_rows: Vec<Vec<Scalar>> = vec![Vec::new(); n];
    for (row, &col) in pivots.iter().enumerate() {
        let der_comp =
            |b: usize| sum((0..frame.rank()).map(|k| t[(row, k)].mul(&ders[(k, b)])));
        let a_coeff = der_comp(n);
        let adj: Vec<Scalar> = (0..n)
            .map(|j| der_comp(j).add(&a_coeff.mul(&z[j])))
            .collect();
        pi_rows[col] = adj;
    }
    let pairs = combinations(n, 2);
    let pi = pairs.iter().map(|p| pi_rows[p[0]][p[1]].clone()).collect();
    Ok(Some(HomogeneousPoissonData::new(chart.clone(), pi, z)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{cocycle_from_precontact, d_d};
    use crate::omni::classify_subbundle;

    fn chart(names: &[&str]) -> Chart {
        Chart::new(names).unwrap()
    }

    /// The worked Jacobi structure `J = x d/dy ^ d/dx + d/dy ^ 1` on (x, y):
    /// `Lambda^{xy} = -x`, `Gamma = (0, 1)`.
    pub(crate) fn running_jacobi(c: &Chart) -> JacobiMatrix {
        JacobiMatrix::from_parts(
            c,
            &[Scalar::coord(0).neg()],
            &[Scalar::zero(), Scalar::one()],
        )
        .unwrap()
    }

    #[test]
    fn jacobi_sharp_components() {
        let c = chart(&["x", "y"]);
        let j = running_jacobi(&c);
        let x = Scalar::coord(0);
        let o = Oracle::default();

        // J#(dx) = -x d_y, J#(dy) = (x d_x, 1), J#(j1 mu) = -d_y
        let s_dx = j.sharp(&Jet1::dz(&c, 0).unwrap());
        assert!(o.scalars_equal(&c, &s_dx.x[0], &Scalar::zero()).unwrap().is_equal());
        assert!(o.scalars_equal(&c, &s_dx.x[1], &x.neg()).unwrap().is_equal());
        assert!(o.scalars_equal(&c, &s_dx.a, &Scalar::zero()).unwrap().is_equal());

        let s_dy = j.sharp(&Jet1::dz(&c, 1).unwrap());
        assert!(o.scalars_equal(&c, &s_dy.x[0], &x).unwrap().is_equal());
        assert!(o.scalars_equal(&c, &s_dy.x[1], &Scalar::zero()).unwrap().is_equal());
        assert!(o.scalars_equal(&c, &s_dy.a, &Scalar::one()).unwrap().is_equal());

        let s_u = j.sharp(&Jet1::unit(&c));
        assert!(o.scalars_equal(&c, &s_u.x[1], &Scalar::from_int(-1)).unwrap().is_equal());
        assert!(o.scalars_equal(&c, &s_u.a, &Scalar::zero()).unwrap().is_equal());
    }

    #[test]
    fn running_jacobi_bracket_convention() {
        // {f, g} = x(d_y f d_x g - d_x f d_y g) + d_y f g - f d_y g
        let c = chart(&["x", "y"]);
        let j = running_jacobi(&c);
        let o = Oracle::default();
        let f = Scalar::coord(0);
        let g = Scalar::coord(1);
        // {x, y} = x(0 - 1) + 0*y - x*1 = -2x
        let got = j.bracket(&f, &g);
        let expect = Scalar::from_int(-2).mul(&Scalar::coord(0));
        assert!(o.scalars_equal(&c, &got, &expect).unwrap().is_equal());
        // skew-symmetry is exact
        let skew = j.bracket(&g, &f).add(&got);
        assert!(o.scalars_equal(&c, &skew, &Scalar::zero()).unwrap().is_equal());
    }

    #[test]
    fn from_two_cocycle_verdicts() {
        let o = Oracle::default();

        // omega = 0: graph of zero is DL (+) 0, a Dirac-Jacobi structure
        let c = chart(&["x", "y"]);
        let zero = LForm::zero(&c, 2).unwrap();
        let v = classify_subbundle(&from_two_cocycle(&zero).unwrap(), &o).unwrap();
        assert!(v.dirac_jacobi);

        // contact cocycle of dz - y dx on (x, y, z): Dirac-Jacobi
        let c3 = chart(&["x", "y", "z"]);
        let theta = vec![Scalar::coord(1).neg(), Scalar::zero(), Scalar::one()];
        let omega = cocycle_from_precontact(&c3, &theta).unwrap();
        let v = classify_subbundle(&from_two_cocycle(&omega).unwrap(), &o).unwrap();
        assert!(v.dirac_jacobi);

        // non-closed 2-cochain: involutivity fails
        let mut comps = vec![Scalar::zero(); 3];
        comps[0] = Scalar::coord(0);
        let bad = LForm::from_components(&c, 2, comps).unwrap();
        assert!(d_d(&bad).unwrap().is_zero(&o).unwrap().witness().is_some());
        let v = classify_subbundle(&from_two_cocycle(&bad).unwrap(), &o).unwrap();
        assert!(v.isotropic.passed());
        assert!(!v.involutive.unwrap().passed());
        assert!(!v.dirac_jacobi);
    }

    #[test]
    fn from_jacobi_verdicts() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);

        // J = 0: the structure J1L
        let v = classify_subbundle(&from_jacobi(&JacobiMatrix::zero(&c)), &o).unwrap();
        assert!(v.dirac_jacobi);

        // the worked example passes
        let v = classify_subbundle(&from_jacobi(&running_jacobi(&c)), &o).unwrap();
        assert!(v.dirac_jacobi);

        // perturbing the vector part by y^2 d_x breaks involutivity
        let bad = JacobiMatrix::from_parts(
            &c,
            &[Scalar::coord(0).neg()],
            &[Scalar::coord(1).pow(2), Scalar::one()],
        )
        .unwrap();
        let v = classify_subbundle(&from_jacobi(&bad), &o).unwrap();
        assert!(v.isotropic.passed());
        assert!(!v.involutive.unwrap().passed());
    }

    #[test]
    fn bracket_jacobi_identity_matches_involutivity() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);
        let good = running_jacobi(&c);
        let f = Scalar::coord(0).pow(2);
        let g = Scalar::coord(1);
        let h = Scalar::coord(0).mul(&Scalar::coord(1));
        let jac = good
            .bracket(&f, &good.bracket(&g, &h))
            .add(&good.bracket(&g, &good.bracket(&h, &f)))
            .add(&good.bracket(&h, &good.bracket(&f, &g)));
        assert!(o.scalars_equal(&c, &jac, &Scalar::zero()).unwrap().is_equal());

        let bad = JacobiMatrix::from_parts(
            &c,
            &[Scalar::coord(0).neg()],
            &[Scalar::coord(1).pow(2), Scalar::one()],
        )
        .unwrap();
        let jac = bad
            .bracket(&f, &bad.bracket(&g, &h))
            .add(&bad.bracket(&g, &bad.bracket(&h, &f)))
            .add(&bad.bracket(&h, &bad.bracket(&f, &g)));
        assert!(!o.scalars_equal(&c, &jac, &Scalar::zero()).unwrap().is_equal());
    }

    #[test]
    fn flat_connection_verdicts() {
        let o = Oracle::default();

        // trivial connection on (x, y)
        let c = chart(&["x", "y"]);
        let frame = from_flat_connection(&c, &[Scalar::zero(), Scalar::zero()], &o).unwrap();
        assert!(classify_subbundle(&frame, &o).unwrap().dirac_jacobi);

        // Gamma = (x) on a 1-chart is flat
        let cx = chart(&["x"]);
        let frame = from_flat_connection(&cx, &[Scalar::coord(0)], &o).unwrap();
        assert!(classify_subbundle(&frame, &o).unwrap().dirac_jacobi);

        // Gamma = (y, 0) has curvature 1
        match from_flat_connection(&c, &[Scalar::coord(1), Scalar::zero()], &o) {
            Err(Error::NonFlat { i: 0, j: 1, value, .. }) => {
                assert!((value.abs() - 1.0).abs() < 1e-9)
            }
            other => panic!("expected NonFlat, got {:?}", other),
        }
    }

    #[test]
    fn unit_structure_facts() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);
        let unit = unit_structure(&c);
        assert!(classify_subbundle(&unit, &o).unwrap().dirac_jacobi);

        // DL (+) J1L = L_nabla (+) L_unit for the trivial connection
        let flat = from_flat_connection(&c, &[Scalar::zero(), Scalar::zero()], &o).unwrap();
        let p = c.point(vec![0.3, -0.7]).unwrap();
        let mut rows = Vec::new();
        for s in flat.sections.iter().chain(&unit.sections) {
            rows.push(s.eval(&o, &p).unwrap());
        }
        assert_eq!(crate::linalg::span_rank(&rows, o.atol), 6);
    }

    #[test]
    fn lcps_verdicts() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);
        let zeros = [Scalar::zero(), Scalar::zero()];

        // omega = 0 reduces to the flat connection frame
        let a = from_lcps(&c, &zeros, &[Scalar::zero()], &o).unwrap();
        let b = from_flat_connection(&c, &zeros, &o).unwrap();
        for (sa, sb) in a.sections.iter().zip(&b.sections) {
            assert_eq!(sa, sb);
        }

        // constant symplectic form dx ^ dy with trivial connection
        let frame = from_lcps(&c, &zeros, &[Scalar::one()], &o).unwrap();
        assert!(classify_subbundle(&frame, &o).unwrap().dirac_jacobi);

        // omega = x dy ^ dz on (x, y, z) with trivial connection: d omega != 0
        let c3 = chart(&["x", "y", "z"]);
        let z3 = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        let upper = [Scalar::zero(), Scalar::zero(), Scalar::coord(0)]; // pairs (xy, xz, yz)
        let frame = from_lcps(&c3, &z3, &upper, &o).unwrap();
        let v = classify_subbundle(&frame, &o).unwrap();
        assert!(v.isotropic.passed());
        assert!(!v.involutive.unwrap().passed());
    }

    #[test]
    fn homogeneous_poisson_verdicts() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);

        // pi = 0, Z = 0
        let data =
            HomogeneousPoissonData::new(c.clone(), vec![Scalar::zero()], vec![Scalar::zero(); 2])
                .unwrap();
        assert!(classify_subbundle(&from_homogeneous_poisson(&data), &o)
            .unwrap()
            .dirac_jacobi);

        // pi = x d_x ^ d_y scales with degree -1 under the full Euler field:
        // Z = x d_x + y d_y gives L_Z pi = -pi (the defect certifies it)
        let data = HomogeneousPoissonData::new(
            c.clone(),
            vec![Scalar::coord(0)],
            vec![Scalar::coord(0), Scalar::coord(1)],
        )
        .unwrap();
        for (label, d) in data.homogeneity_defect() {
            assert!(
                o.scalars_equal(&c, &d, &Scalar::zero()).unwrap().is_equal(),
                "{} should vanish",
                label
            );
        }
        assert!(classify_subbundle(&from_homogeneous_poisson(&data), &o)
            .unwrap()
            .dirac_jacobi);

        // Z = x d_x leaves pi invariant instead of scaling it; involutivity breaks
        let bad = HomogeneousPoissonData::new(
            c.clone(),
            vec![Scalar::coord(0)],
            vec![Scalar::coord(0), Scalar::zero()],
        )
        .unwrap();
        assert!(bad
            .homogeneity_defect()
            .iter()
            .any(|(_, d)| !o.scalars_equal(&c, d, &Scalar::zero()).unwrap().is_equal()));
        let v = classify_subbundle(&from_homogeneous_poisson(&bad), &o).unwrap();
        assert!(v.isotropic.passed());
        assert!(!v.involutive.unwrap().passed());
    }

    #[test]
    fn gauge_transform_facts() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);
        let j = running_jacobi(&c);
        let frame = from_jacobi(&j);

        // omega = 0 is the identity
        let zero = LForm::zero(&c, 2).unwrap();
        let same = gauge_transform(&frame, &zero).unwrap();
        for (a, b) in frame.sections.iter().zip(&same.sections) {
            assert_eq!(a, b);
        }

        // closed omega preserves the Dirac-Jacobi property
        let theta = vec![Scalar::coord(1), Scalar::zero()];
        let omega = cocycle_from_precontact(&c, &theta).unwrap();
        let gauged = gauge_transform(&frame, &omega).unwrap();
        assert!(classify_subbundle(&gauged, &o).unwrap().dirac_jacobi);

        // tau_{-omega} tau_omega = id on sections
        let back = gauge_transform(&gauged, &omega.neg()).unwrap();
        for (a, b) in frame.sections.iter().zip(&back.sections) {
            for k in 0..=c.dim() {
                assert!(o
                    .scalars_equal(&c, a.jet.component(k), b.jet.component(k))
                    .unwrap()
                    .is_equal());
            }
        }
    }

    #[test]
    fn recognize_round_trips() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);

        // (b) graph of the worked Jacobi matrix
        let j = running_jacobi(&c);
        let rep = recognize(&from_jacobi(&j), &o).unwrap();
        let got = rep.jacobi.expect("jacobi tag");
        for (a, b) in j.upper_entries().iter().zip(got.upper_entries()) {
            assert!(o.scalars_equal(&c, a, b).unwrap().is_equal());
        }
        assert!(rep.hom_poisson.is_none());

        // (a) graph of the contact cocycle: both (a) and (b) hold
        let c3 = chart(&["x", "y", "z"]);
        let theta = vec![Scalar::coord(1).neg(), Scalar::zero(), Scalar::one()];
        let omega = cocycle_from_precontact(&c3, &theta).unwrap();
        let rep = recognize(&from_two_cocycle(&omega).unwrap(), &o).unwrap();
        let got = rep.two_cocycle.expect("cocycle tag");
        for (pos, (a, b)) in omega.components().iter().zip(got.components()).enumerate() {
            assert!(
                o.scalars_equal(&c3, a, b).unwrap().is_equal(),
                "component {} differs",
                pos
            );
        }
        assert!(rep.jacobi.is_some());

        // (c) homogeneous Poisson round trip
        let data = HomogeneousPoissonData::new(
            c.clone(),
            vec![Scalar::coord(0)],
            vec![Scalar::coord(0), Scalar::coord(1)],
        )
        .unwrap();
        let rep = recognize(&from_homogeneous_poisson(&data), &o).unwrap();
        let got = rep.hom_poisson.expect("homogeneous Poisson tag");
        for (a, b) in data.pi_upper().iter().zip(got.pi_upper()) {
            assert!(o.scalars_equal(&c, a, b).unwrap().is_equal());
        }
        for (a, b) in data.z.iter().zip(&got.z) {
            assert!(o.scalars_equal(&c, a, b).unwrap().is_equal());
        }

        // the unit structure is the homogeneous Poisson pair (0, 0)
        let rep = recognize(&unit_structure(&c), &o).unwrap();
        assert!(rep.two_cocycle.is_none());
        assert!(rep.jacobi.is_none());
        let got = rep.hom_poisson.expect("unit structure is L_(0,0)");
        for e in got.pi_upper() {
            assert!(o.scalars_equal(&c, e, &Scalar::zero()).unwrap().is_equal());
        }
        for z in &got.z {
            assert!(o.scalars_equal(&c, z, &Scalar::zero()).unwrap().is_equal());
        }
    }
}
