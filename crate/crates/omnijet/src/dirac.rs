//! Homogenization onto the slit dual bundle and the standard tangent
//! Courant algebroid used to cross-validate it.
//!
//! The tangent side is written with direct component formulas — vector
//! field bracket, `L_X beta` and `i_Y d alpha` expanded in coordinates — on
//! purpose: it shares no code with the Koszul machinery of the der-complex,
//! so the intertwining laws of the lift check two independent routes
//! against each other.

use rand::Rng;

use crate::analysis::point_report;
use crate::chart::{check_same_chart, Chart, Point};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::span_rank;
use crate::omni::{FrameVerdict, FrameWitness, OmniSection, StructureFrame};
use crate::oracle::{EqVerdict, Oracle};
use crate::scalar::{sum, Scalar};

/// A section of `TM (+) T*M` over a chart: vector field components plus
/// 1-form components.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSection {
    pub chart: Chart,
    pub x: Vec<Scalar>,
    pub alpha: Vec<Scalar>,
}

impl TangentSection {
    pub fn new(chart: Chart, x: Vec<Scalar>, alpha: Vec<Scalar>) -> TangentSection {
        assert_eq!(x.len(), chart.dim());
        assert_eq!(alpha.len(), chart.dim());
        TangentSection { chart, x, alpha }
    }

    pub fn eval(&self, o: &Oracle, p: &Point) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(2 * self.chart.dim());
        for c in self.x.iter().chain(&self.alpha) {
            out.push(o.eval(c, p)?);
        }
        Ok(out)
    }
}

/// `[X, Y]^k = sum_j X^j d_j Y^k - Y^j d_j X^k`.
pub fn vf_bracket(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let fwd = sum((0..n).map(|j| x[j].mul(&y[k].diff(j))));
            let bwd = sum((0..n).map(|j| y[j].mul(&x[k].diff(j))));
            fwd.sub(&bwd)
        })
        .collect()
}

/// `(L_X beta)_k = sum_j X^j d_j beta_k + beta_j d_k X^j`.
pub fn lie_one_form(x: &[Scalar], beta: &[Scalar]) -> Vec<Scalar> {
    let n = x.len();
    (0..n)
        .map(|k| {
            sum((0..n).map(|j| x[j].mul(&beta[k].diff(j)).add(&beta[j].mul(&x[j].diff(k)))))
        })
        .collect()
}

/// `(i_Y d alpha)_k = sum_j Y^j (d_j alpha_k - d_k alpha_j)`.
pub fn contract_d_one_form(y: &[Scalar], alpha: &[Scalar]) -> Vec<Scalar> {
    let n = y.len();
    (0..n)
        .map(|k| sum((0..n).map(|j| y[j].mul(&alpha[k].diff(j).sub(&alpha[j].diff(k))))))
        .collect()
}

/// Standard pairing `<<(X, alpha), (Y, beta)>> = alpha(Y) + beta(X)`.
pub fn tangent_pairing(a: &TangentSection, b: &TangentSection) -> Result<Scalar> {
    check_same_chart(&a.chart, &b.chart)?;
    let n = a.chart.dim();
    Ok(sum((0..n).map(|j| a.alpha[j].mul(&b.x[j]).add(&b.alpha[j].mul(&a.x[j])))))
}

/// Standard Dorfman bracket `([X, Y], L_X beta - i_Y d alpha)`.
pub fn tangent_dorfman(a: &TangentSection, b: &TangentSection) -> Result<TangentSection> {
    check_same_chart(&a.chart, &b.chart)?;
    let x = vf_bracket(&a.x, &b.x);
    let lie = lie_one_form(&a.x, &b.alpha);
    let corr = contract_d_one_form(&b.x, &a.alpha);
    let alpha = lie
        .into_iter()
        .zip(corr)
        .map(|(l, c)| l.sub(&c))
        .collect();
    Ok(TangentSection::new(a.chart.clone(), x, alpha))
}

/// Verdict on a candidate tangent Dirac frame: rank `dim M` everywhere,
/// isotropic, involutive under the standard bracket.
#[derive(Debug, Clone)]
pub struct TangentVerdict {
    pub rank_ok: Option<FrameWitness>,
    pub isotropic: FrameVerdict,
    pub involutive: Option<FrameVerdict>,
    pub dirac: bool,
}

impl TangentVerdict {
    pub fn first_failure(&self) -> Option<&FrameWitness> {
        if let Some(w) = &self.rank_ok {
            return Some(w);
        }
        if let Some(w) = self.isotropic.witness() {
            return Some(w);
        }
        self.involutive.as_ref().and_then(|v| v.witness())
    }
}

pub fn tangent_classify(
    chart: &Chart,
    sections: &[TangentSection],
    o: &Oracle,
) -> Result<TangentVerdict> {
    for s in sections {
        check_same_chart(chart, &s.chart)?;
    }
    let points = o.points(chart);

    // spanning rank must equal the section count at all sample points
    let rank_ok = exec::find_map_first(&points, |p| {
        let rows: std::result::Result<Vec<Vec<f64>>, Error> =
            sections.iter().map(|s| s.eval(o, p)).collect();
        match rows {
            Err(e) => Some(Err(e)),
            Ok(rows) => {
                let r = span_rank(&rows, o.atol);
                if r == sections.len() {
                    None
                } else {
                    Some(Ok(FrameWitness {
                        point: p.coords().to_vec(),
                        indices: vec![r],
                        value: r as f64,
                        law: format!("tangent frame rank {} < {} sections", r, sections.len()),
                    }))
                }
            }
        }
    });
    let rank_ok = match rank_ok {
        None => None,
        Some(Ok(w)) => Some(w),
        Some(Err(e)) => return Err(e),
    };

    let mut isotropic = FrameVerdict::Pass;
    'pairs: for i in 0..sections.len() {
        for j in i..sections.len() {
            let val = tangent_pairing(&sections[i], &sections[j])?;
            if let EqVerdict::Unequal(w) =
                o.scalars_equal_at(&points, &val, &Scalar::zero(), "tangent isotropy")?
            {
                isotropic = FrameVerdict::Fail(FrameWitness {
                    point: w.point,
                    indices: vec![i, j],
                    value: w.lhs,
                    law: "tangent pairing nonzero".into(),
                });
                break 'pairs;
            }
        }
    }

    let involutive = if isotropic.passed() {
        let mut v = FrameVerdict::Pass;
        'triples: for i in 0..sections.len() {
            for j in (i + 1)..sections.len() {
                for k in (j + 1)..sections.len() {
                    let ups = tangent_pairing(
                        &tangent_dorfman(&sections[i], &sections[j])?,
                        &sections[k],
                    )?;
                    if let EqVerdict::Unequal(w) =
                        o.scalars_equal_at(&points, &ups, &Scalar::zero(), "tangent involutivity")?
                    {
                        v = FrameVerdict::Fail(FrameWitness {
                            point: w.point,
                            indices: vec![i, j, k],
                            value: w.lhs,
                            law: "tangent Courant tensor nonzero".into(),
                        });
                        break 'triples;
                    }
                }
            }
        }
        Some(v)
    } else {
        None
    };

    let dirac = rank_ok.is_none()
        && isotropic.passed()
        && sections.len() == chart.dim()
        && involutive.as_ref().map(|v| v.passed()).unwrap_or(false);
    Ok(TangentVerdict {
        rank_ok,
        isotropic,
        involutive,
        dirac,
    })
}

pub const FIBER_COORD: &str = "s";

/// The slit dual bundle in the chosen trivialization: the base chart plus a
/// fiber coordinate `s` sampled away from zero. Both components of the
/// R-minus-zero fiber exist; checks that care run on each sign.
pub fn extended_chart(chart: &Chart, positive: bool) -> Result<Chart> {
    let domain = if positive { (0.5, 2.0) } else { (-2.0, -0.5) };
    chart.extend(FIBER_COORD, domain)
}

/// Lift of an omni-section: `(X, a)` becomes `X + a s d_s` and `(eta, g)`
/// becomes `s eta + g ds`. Homogeneous sections of `L` become `s f`.
pub fn lift_omni(alpha: &OmniSection, ext: &Chart) -> TangentSection {
    let n = alpha.chart().dim();
    assert_eq!(ext.dim(), n + 1, "extended chart has one fiber coordinate");
    let s = Scalar::coord(n);
    let mut x: Vec<Scalar> = alpha.der.x.clone();
    x.push(alpha.der.a.mul(&s));
    let mut a: Vec<Scalar> = alpha.jet.eta.iter().map(|e| e.mul(&s)).collect();
    a.push(alpha.jet.g.clone());
    TangentSection::new(ext.clone(), x, a)
}

/// The Euler vector field `s d_s` on the extended chart.
pub fn euler_field(ext: &Chart) -> Vec<Scalar> {
    let n = ext.dim() - 1;
    let mut x = vec![Scalar::zero(); ext.dim()];
    x[n] = Scalar::coord(n);
    x
}

#[derive(Debug, Clone)]
pub struct DiracizeReport {
    /// Lifted frame over the positive component.
    pub lifted: Vec<TangentSection>,
    pub verdict_plus: TangentVerdict,
    pub verdict_minus: TangentVerdict,
    /// First homogeneity failure, if any: `[E, X~] = 0`, `L_E psi~ = psi~`.
    pub homogeneity: Option<FrameWitness>,
    pub dirac: bool,
}

/// Lifts a Dirac-Jacobi frame to the slit dual bundle and verifies that the
/// image is a homogeneous Dirac structure there.
pub fn diracize(frame: &StructureFrame, o: &Oracle) -> Result<DiracizeReport> {
    crate::omni::require_dirac_jacobi(frame, o)?;
    let ext_plus = extended_chart(&frame.chart, true)?;
    let ext_minus = extended_chart(&frame.chart, false)?;
    let lifted: Vec<TangentSection> = frame
        .sections
        .iter()
        .map(|s| lift_omni(s, &ext_plus))
        .collect();
    let lifted_minus: Vec<TangentSection> = frame
        .sections
        .iter()
        .map(|s| lift_omni(s, &ext_minus))
        .collect();
    let verdict_plus = tangent_classify(&ext_plus, &lifted, o)?;
    let verdict_minus = tangent_classify(&ext_minus, &lifted_minus, o)?;

    let homogeneity = homogeneity_defect(&ext_plus, &lifted, o)?
        .or(homogeneity_defect(&ext_minus, &lifted_minus, o)?);

    let dirac = verdict_plus.dirac && verdict_minus.dirac && homogeneity.is_none();
    Ok(DiracizeReport {
        lifted,
        verdict_plus,
        verdict_minus,
        homogeneity,
        dirac,
    })
}

fn homogeneity_defect(
    ext: &Chart,
    lifted: &[TangentSection],
    o: &Oracle,
) -> Result<Option<FrameWitness>> {
    let points = o.points(ext);
    let euler = euler_field(ext);
    for (idx, s) in lifted.iter().enumerate() {
        // [E, X~] = 0
        let br = vf_bracket(&euler, &s.x);
        for (k, comp) in br.iter().enumerate() {
            if let EqVerdict::Unequal(w) =
                o.scalars_equal_at(&points, comp, &Scalar::zero(), "[Euler, lift]")?
            {
                return Ok(Some(FrameWitness {
                    point: w.point,
                    indices: vec![idx, k],
                    value: w.lhs,
                    law: "lifted vector field not degree-zero homogeneous".into(),
                }));
            }
        }
        // L_E psi~ = psi~
        let lie = lie_one_form(&euler, &s.alpha);
        for (k, comp) in lie.iter().enumerate() {
            if let EqVerdict::Unequal(w) =
                o.scalars_equal_at(&points, comp, &s.alpha[k], "L_Euler lift")?
            {
                return Ok(Some(FrameWitness {
                    point: w.point,
                    indices: vec![idx, k],
                    value: w.lhs,
                    law: "lifted 1-form not degree-one homogeneous".into(),
                }));
            }
        }
    }
    Ok(None)
}

/// Checks the characteristic dimension relation at one point: the rank of
/// the lifted tangent parts at `(p, s)` equals `rank sigma(I_p)` for lcps
/// points and `rank sigma(I_p) + 1` for precontact points.
#[derive(Debug, Clone)]
pub struct CharDimCheck {
    pub lifted_rank: usize,
    pub expected: usize,
    pub precontact: bool,
    pub pass: bool,
}

pub fn characteristic_dimension_check(
    frame: &StructureFrame,
    o: &Oracle,
    p: &Point,
    s_value: f64,
) -> Result<CharDimCheck> {
    let report = point_report(frame, o, p)?;
    let expected = report.rank_sigma_i + usize::from(report.precontact);

    let ext = extended_chart(&frame.chart, s_value > 0.0)?;
    let mut coords = p.coords().to_vec();
    coords.push(s_value);
    let ext_p = ext.point(coords)?;
    let lifted_tangent: Vec<Vec<f64>> = frame
        .sections
        .iter()
        .map(|sec| {
            let lifted = lift_omni(sec, &ext);
            lifted.x.iter().map(|c| o.eval(c, &ext_p)).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let lifted_rank = span_rank(&lifted_tangent, o.atol);
    Ok(CharDimCheck {
        lifted_rank,
        expected,
        precontact: report.precontact,
        pass: lifted_rank == expected,
    })
}

/// Random tangent section with polynomial components; test helper shared by
/// the identity suites.
pub fn random_tangent<R: Rng>(rng: &mut R, chart: &Chart) -> TangentSection {
    TangentSection::new(
        chart.clone(),
        (0..chart.dim())
            .map(|_| crate::scalar::random_polynomial(rng, chart.dim(), 2, 2))
            .collect(),
        (0..chart.dim())
            .map(|_| crate::scalar::random_polynomial(rng, chart.dim(), 2, 2))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{Derivation, Jet1};
    use crate::omni::{dorfman, omni_pairing};
    use crate::zoo;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chart(names: &[&str]) -> Chart {
        Chart::new(names).unwrap()
    }

    fn running_jacobi(c: &Chart) -> zoo::JacobiMatrix {
        zoo::JacobiMatrix::from_parts(
            c,
            &[Scalar::coord(0).neg()],
            &[Scalar::zero(), Scalar::one()],
        )
        .unwrap()
    }

    fn assert_zero(o: &Oracle, c: &Chart, f: &Scalar, what: &str) {
        match o.scalars_equal(c, f, &Scalar::zero()).unwrap() {
            EqVerdict::Equal => {}
            EqVerdict::Unequal(w) => panic!("{} nonzero: {}", what, w),
        }
    }

    #[test]
    fn lift_of_frame_elements() {
        let c = chart(&["x", "y"]);
        let ext = extended_chart(&c, true).unwrap();
        let s = Scalar::coord(2);

        // 1 lifts to the Euler field
        let unit = OmniSection::from_derivation(Derivation::unit(&c));
        let lifted = lift_omni(&unit, &ext);
        assert_eq!(lifted.x, vec![Scalar::zero(), Scalar::zero(), s.clone()]);

        // delta_i lifts to d_i
        let d0 = OmniSection::from_derivation(Derivation::delta(&c, 0).unwrap());
        let lifted = lift_omni(&d0, &ext);
        assert_eq!(
            lifted.x,
            vec![Scalar::one(), Scalar::zero(), Scalar::zero()]
        );

        // j1 f lifts to d(s f)
        let f = Scalar::coord(0).mul(&Scalar::coord(1));
        let jet = OmniSection::from_jet(crate::bundle::jet_prolong(&c, &f));
        let lifted = lift_omni(&jet, &ext);
        let sf = s.mul(&f);
        let o = Oracle::default();
        for k in 0..3 {
            assert_zero(
                &o,
                &ext,
                &lifted.alpha[k].sub(&sf.diff(k)),
                "j1 lift vs d(sf)",
            );
        }
    }

    #[test]
    fn lift_acts_correctly_on_homogeneous_functions() {
        // X~(s f) = s (Delta f)
        let c = chart(&["x", "y"]);
        let ext = extended_chart(&c, true).unwrap();
        let o = Oracle::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = Scalar::coord(2);
        for _ in 0..5 {
            let om = crate::omni::random_omni(&mut rng, &c);
            let f = crate::scalar::random_polynomial(&mut rng, 2, 2, 2);
            let lifted = lift_omni(&om, &ext);
            let sf = s.mul(&f);
            let lhs = sum((0..3).map(|j| lifted.x[j].mul(&sf.diff(j))));
            let rhs = s.mul(&crate::bundle::apply_derivation(&om.der, &f));
            assert_zero(&o, &ext, &lhs.sub(&rhs), "X~(sf) = s Delta(f)");
        }
    }

    #[test]
    fn pairing_intertwines_with_scale_s() {
        let c = chart(&["x", "y"]);
        let ext = extended_chart(&c, true).unwrap();
        let o = Oracle::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = Scalar::coord(2);
        for _ in 0..6 {
            let a = crate::omni::random_omni(&mut rng, &c);
            let b = crate::omni::random_omni(&mut rng, &c);
            let lhs = tangent_pairing(&lift_omni(&a, &ext), &lift_omni(&b, &ext)).unwrap();
            let rhs = s.mul(&omni_pairing(&a, &b).unwrap());
            assert_zero(&o, &ext, &lhs.sub(&rhs), "pairing of lifts");
        }
    }

    #[test]
    fn dorfman_intertwines_with_lift() {
        let c = chart(&["x", "y"]);
        let ext = extended_chart(&c, true).unwrap();
        let o = Oracle::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let a = crate::omni::random_omni(&mut rng, &c);
            let b = crate::omni::random_omni(&mut rng, &c);
            let lhs = tangent_dorfman(&lift_omni(&a, &ext), &lift_omni(&b, &ext)).unwrap();
            let rhs = lift_omni(&dorfman(&a, &b).unwrap(), &ext);
            for k in 0..3 {
                assert_zero(&o, &ext, &lhs.x[k].sub(&rhs.x[k]), "dorfman lift x");
                assert_zero(&o, &ext, &lhs.alpha[k].sub(&rhs.alpha[k]), "dorfman lift alpha");
            }
        }
    }

    #[test]
    fn lift_intertwines_commutators() {
        let c = chart(&["x", "y"]);
        let ext = extended_chart(&c, true).unwrap();
        let o = Oracle::default();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..5 {
            let a = crate::omni::random_omni(&mut rng, &c);
            let b = crate::omni::random_omni(&mut rng, &c);
            let br = crate::bundle::commutator(&a.der, &b.der).unwrap();
            let lifted_br = lift_omni(&OmniSection::from_derivation(br), &ext);
            let br_of_lifts = vf_bracket(
                &lift_omni(&OmniSection::from_derivation(a.der.clone()), &ext).x,
                &lift_omni(&OmniSection::from_derivation(b.der.clone()), &ext).x,
            );
            for k in 0..3 {
                assert_zero(&o, &ext, &lifted_br.x[k].sub(&br_of_lifts[k]), "commutator lift");
            }
        }
    }

    #[test]
    fn explicit_self_bracket_instance() {
        // a = (d_x, x ds) on the extended 1-chart:
        // [[a, a]] = (0, d <a, a>/2) with <<a, a>> = 2 x ds(d_x)... direct check:
        // L_X alpha - i_X d alpha with X = d_x, alpha = x ds:
        // L_{d_x}(x ds) = ds; (i_{d_x} d(x ds))_k = (dx ^ ds)(d_x)_k = ds_k
        // so the bracket is ((0), ds - ds)? no: L - i = ds... compute numerically.
        let c = chart(&["x"]);
        let ext = extended_chart(&c, true).unwrap();
        let o = Oracle::default();
        let x = Scalar::coord(0);
        let a = TangentSection::new(
            ext.clone(),
            vec![Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), x.clone()],
        );
        let got = tangent_dorfman(&a, &a).unwrap();
        // [[a, a]] = (0, d<<a,a>>/2); <<a, a>> = 2 alpha(X) = 2x... alpha(X) = 0*1 + x*0 = 0
        // here alpha(X) = alpha_x X^x + alpha_s X^s = 0; so [[a, a]] jet = L_X alpha - i_X d alpha
        // L_{d_x}(x ds) = (d_x x) ds = ds? via formula: (L)_s = X^x d_x(x) = 1 -> ds
        // (i_{d_x} d(x ds))_s = d_x(x) = 1 -> ds; difference = 0. And half d<<a,a>> = 0.
        for k in 0..2 {
            assert_zero(&o, &ext, &got.x[k], "self bracket x");
            assert_zero(&o, &ext, &got.alpha[k], "self bracket alpha");
        }
    }

    #[test]
    fn diracize_zoo_structures() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);

        // unit structure: lift is {(s d_s, 0)} U {(0, s dz^i)}
        let rep = diracize(&zoo::unit_structure(&c), &o).unwrap();
        assert!(rep.dirac, "unit structure diracization failed");

        // worked Jacobi structure
        let j = running_jacobi(&c);
        let rep = diracize(&zoo::from_jacobi(&j), &o).unwrap();
        assert!(rep.dirac, "jacobi diracization failed");

        // flat connection
        let flat = zoo::from_flat_connection(&c, &[Scalar::zero(), Scalar::zero()], &o).unwrap();
        let rep = diracize(&flat, &o).unwrap();
        assert!(rep.dirac, "flat connection diracization failed");
    }

    #[test]
    fn characteristic_dimension_examples() {
        let o = Oracle::default();
        let c = chart(&["x", "y"]);

        // unit structure: precontact with zero-dimensional leaves -> lifted rank 1
        let unit = zoo::unit_structure(&c);
        let p = c.point(vec![0.25, -0.5]).unwrap();
        let chk = characteristic_dimension_check(&unit, &o, &p, 1.0).unwrap();
        assert!(chk.precontact);
        assert_eq!(chk.lifted_rank, 1);
        assert!(chk.pass);

        // flat connection: lcps with n-dimensional leaves -> lifted rank n
        let flat = zoo::from_flat_connection(&c, &[Scalar::zero(), Scalar::zero()], &o).unwrap();
        let chk = characteristic_dimension_check(&flat, &o, &p, -1.0).unwrap();
        assert!(!chk.precontact);
        assert_eq!(chk.lifted_rank, 2);
        assert!(chk.pass);

        // worked Jacobi structure at a generic point: lcps leaf of dim 2
        let j = running_jacobi(&c);
        let frame = zoo::from_jacobi(&j);
        let chk = characteristic_dimension_check(&frame, &o, &p, 1.0).unwrap();
        assert!(!chk.precontact);
        assert_eq!(chk.lifted_rank, 2);
        assert!(chk.pass);

        // a contact-type Jacobi structure on chart (x): J = d_x ^ 1; every
        // point is precontact with a 1-dimensional leaf, lifted rank n + 1
        let cx = chart(&["x"]);
        let contact = zoo::JacobiMatrix::from_parts(&cx, &[], &[Scalar::one()]).unwrap();
        let px = cx.point(vec![0.3]).unwrap();
        let chk =
            characteristic_dimension_check(&zoo::from_jacobi(&contact), &o, &px, 1.0).unwrap();
        assert!(chk.precontact);
        assert_eq!(chk.lifted_rank, 2);
        assert!(chk.pass);
    }

    #[test]
    fn lift_dirac_of_symplectic_graph() {
        // graph of dx ^ dy: sections (d_x, dy), (d_y, -dx)
        let o = Oracle::default();
        let c = chart(&["x", "y"]);
        let sections = vec![
            TangentSection::new(
                c.clone(),
                vec![Scalar::one(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::one()],
            ),
            TangentSection::new(
                c.clone(),
                vec![Scalar::zero(), Scalar::one()],
                vec![Scalar::from_int(-1), Scalar::zero()],
            ),
        ];
        let lifted = zoo::lift_dirac(&c, &sections, &o).unwrap();
        assert!(crate::omni::classify_subbundle(&lifted, &o).unwrap().dirac_jacobi);

        // zero Dirac structure TM (+) 0 lifts to {(delta_i, 0)} U {(0, j1 mu)}
        let tm = vec![
            TangentSection::new(
                c.clone(),
                vec![Scalar::one(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero()],
            ),
            TangentSection::new(
                c.clone(),
                vec![Scalar::zero(), Scalar::one()],
                vec![Scalar::zero(), Scalar::zero()],
            ),
        ];
        let lifted = zoo::lift_dirac(&c, &tm, &o).unwrap();
        assert!(crate::omni::classify_subbundle(&lifted, &o).unwrap().dirac_jacobi);
        // projecting the lift back recovers the input span
        let p = c.point(vec![0.4, 0.1]).unwrap();
        let projected: Vec<Vec<f64>> = lifted.sections[..2]
            .iter()
            .map(|s| {
                let mut v = Vec::new();
                for comp in s.der.x.iter().chain(s.jet.eta.iter()) {
                    v.push(o.eval(comp, &p).unwrap());
                }
                v
            })
            .collect();
        let original: Vec<Vec<f64>> = tm.iter().map(|s| s.eval(&o, &p).unwrap()).collect();
        assert!(crate::linalg::span_equal(&projected, &original, o.atol));

        // a non-Dirac input frame is rejected
        let bad = vec![
            TangentSection::new(
                c.clone(),
                vec![Scalar::one(), Scalar::zero()],
                vec![Scalar::one(), Scalar::zero()],
            ),
            tm[1].clone(),
        ];
        assert!(zoo::lift_dirac(&c, &bad, &o).is_err());
    }
}
