//! Randomized identity suites: the Cartan-calculus laws of the der-complex
//! and the Courant-like laws of the Dorfman bracket, quantified over seeded
//! random inputs. Shared by the CLI self-test and the acceptance gate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{apply_derivation, commutator, jet_prolong};
use crate::chart::Chart;
use crate::error::Result;
use crate::exec;
use crate::forms::{combinations, contract, d_d, lie_derivative, LForm};
use crate::omni::{dorfman, omni_pairing, random_derivation, random_omni, upsilon, StructureFrame};
use crate::oracle::{EqVerdict, Oracle, PointWitness};
use crate::scalar::{random_polynomial, sum, Scalar};
use crate::zoo::from_two_cocycle;

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Number of (identity, instance) pairs that were checked.
    pub instances: usize,
    /// First failure in round order, if any.
    pub failure: Option<SuiteFailure>,
}

#[derive(Debug, Clone)]
pub struct SuiteFailure {
    pub round: usize,
    pub law: String,
    pub witness: PointWitness,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn random_lform<R: rand::Rng>(rng: &mut R, chart: &Chart, degree: usize) -> LForm {
    let count = combinations(chart.dim() + 1, degree).len();
    let comps = (0..count)
        .map(|_| random_polynomial(rng, chart.dim(), 2, 2))
        .collect();
    LForm::from_components(chart, degree, comps).expect("valid degree")
}

struct RoundCheck {
    law: &'static str,
    form: LForm,
}

fn zero_check(law: &'static str, form: LForm) -> RoundCheck {
    RoundCheck { law, form }
}

fn run_rounds<F>(
    chart: &Chart,
    o: &Oracle,
    rounds: usize,
    per_round: usize,
    make: F,
) -> Result<SuiteReport>
where
    F: Sync + Fn(&mut ChaCha8Rng) -> Result<Vec<RoundCheck>>,
{
    let points = o.points(chart);
    let indices: Vec<usize> = (0..rounds).collect();
    let hit = exec::find_map_first(&indices, |&round| {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ ((round as u64 + 1) * 0x9e37_79b9));
        let checks = match make(&mut rng) {
            Ok(c) => c,
            Err(e) => return Some(Err(e)),
        };
        for check in checks {
            for (pos, comp) in check.form.components().iter().enumerate() {
                let label = format!("{} {}", check.law, check.form.index_label(pos));
                match o.scalars_equal_at(&points, comp, &Scalar::zero(), &label) {
                    Ok(EqVerdict::Equal) => {}
                    Ok(EqVerdict::Unequal(w)) => {
                        return Some(Ok(SuiteFailure {
                            round,
                            law: check.law.to_string(),
                            witness: w,
                        }))
                    }
                    Err(e) => return Some(Err(e)),
                }
            }
        }
        None
    });
    let failure = match hit {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(e)) => return Err(e),
    };
    Ok(SuiteReport {
        instances: rounds * per_round,
        failure,
    })
}

/// Cartan calculus suite on random derivations and forms:
/// `d^2 = 0`, the contracting homotopy `[i_1, d] = id`, `[i, i] = 0`,
/// `[d, L] = 0`, `[L, i] = i_[,]`, and `[L, L] = L_[,]`.
pub fn cartan_suite(chart: &Chart, o: &Oracle, rounds: usize) -> Result<SuiteReport> {
    let n = chart.dim();
    let unit = crate::bundle::Derivation::unit(chart);
    run_rounds(chart, o, rounds, 6, move |rng| {
        let mut checks = Vec::new();
        let d1 = random_derivation(rng, chart);
        let d2 = random_derivation(rng, chart);

        // d^2 = 0 on a random form of every differentiable degree
        let deg = (rng.next_u64() as usize) % n.max(1);
        let omega = random_lform(rng, chart, deg);
        checks.push(zero_check("d_D^2", d_d(&d_d(&omega)?)?));

        // homotopy [i_1, d] = id on a random degree
        let deg = (rng.next_u64() as usize) % (n + 2);
        let omega = random_lform(rng, chart, deg);
        let mut acc = if deg <= n {
            contract(&unit, &d_d(&omega)?)?
        } else {
            LForm::zero(chart, deg)?
        };
        if deg > 0 {
            acc = acc.add(&d_d(&contract(&unit, &omega)?)?);
        }
        checks.push(zero_check("[i_1, d] - id", acc.sub(&omega)));

        // [i, i] = 0 on a 2-form
        let omega2 = random_lform(rng, chart, 2.min(n + 1));
        if omega2.degree == 2 {
            checks.push(zero_check(
                "i_Delta i_Delta",
                contract(&d1, &contract(&d1, &omega2)?)?,
            ));
        }

        // [d, L] = 0 on a 1-form
        let omega1 = random_lform(rng, chart, 1);
        checks.push(zero_check(
            "[d, L]",
            d_d(&lie_derivative(&d1, &omega1)?)?.sub(&lie_derivative(&d1, &d_d(&omega1)?)?),
        ));

        // [L, i] = i_[,] and [L, L] = L_[,] on a 2-form
        if omega2.degree == 2 {
            let br = commutator(&d1, &d2)?;
            let lhs = lie_derivative(&d1, &contract(&d2, &omega2)?)?
                .sub(&contract(&d2, &lie_derivative(&d1, &omega2)?)?);
            checks.push(zero_check("[L, i] - i_[,]", lhs.sub(&contract(&br, &omega2)?)));

            let lhs = lie_derivative(&d1, &lie_derivative(&d2, &omega2)?)?
                .sub(&lie_derivative(&d2, &lie_derivative(&d1, &omega2)?)?);
            checks.push(zero_check(
                "[L, L] - L_[,]",
                lhs.sub(&lie_derivative(&br, &omega2)?),
            ));
        }
        Ok(checks)
    })
}

fn omni_diff_form(a: &crate::omni::OmniSection, b: &crate::omni::OmniSection) -> LForm {
    // pack the component differences of two omni-sections into one 1-form
    // pair per half so the generic zero-check machinery applies
    let der = LForm::from_jet(&crate::bundle::Jet1::new(
        a.chart().clone(),
        a.der
            .x
            .iter()
            .zip(&b.der.x)
            .map(|(p, q)| p.sub(q))
            .collect(),
        a.der.a.sub(&b.der.a),
    ));
    der
}

fn omni_jet_diff_form(a: &crate::omni::OmniSection, b: &crate::omni::OmniSection) -> LForm {
    LForm::from_jet(&a.jet.sub(&b.jet))
}

/// Courant-like laws of the Dorfman bracket on random omni-sections:
/// symmetrized bracket vs `d<<,>>`, the left Jacobi identity, the Leibniz
/// rule, pairing compatibility, plus pointwise linearity of the
/// Courant-Jacobi tensor on an isotropic frame.
pub fn courant_suite(chart: &Chart, o: &Oracle, rounds: usize) -> Result<SuiteReport> {
    run_rounds(chart, o, rounds, 5, move |rng| {
        let mut checks = Vec::new();
        let a = random_omni(rng, chart);
        let b = random_omni(rng, chart);
        let g = random_omni(rng, chart);
        let f = random_polynomial(rng, chart.dim(), 2, 2);

        // cour1: [[a, b]] + [[b, a]] = (0, j1 <<a, b>>)
        let sym = dorfman(&a, &b)?.add(&dorfman(&b, &a)?);
        let rhs = crate::omni::OmniSection::from_jet(jet_prolong(chart, &omni_pairing(&a, &b)?));
        checks.push(zero_check("cour1 (derivations)", omni_diff_form(&sym, &rhs)));
        checks.push(zero_check("cour1 (jets)", omni_jet_diff_form(&sym, &rhs)));

        // cour2: [[a, [[b, g]]]] = [[[[a, b]], g]] + [[b, [[a, g]]]]
        let lhs = dorfman(&a, &dorfman(&b, &g)?)?;
        let rhs = dorfman(&dorfman(&a, &b)?, &g)?.add(&dorfman(&b, &dorfman(&a, &g)?)?);
        checks.push(zero_check("cour2 (derivations)", omni_diff_form(&lhs, &rhs)));
        checks.push(zero_check("cour2 (jets)", omni_jet_diff_form(&lhs, &rhs)));

        // cour3: [[a, f b]] = f [[a, b]] + sigma(pr_D a)(f) b
        let lhs = dorfman(&a, &b.scale(&f))?;
        let x_of_f = sum(a.der.x.iter().enumerate().map(|(i, xi)| xi.mul(&f.diff(i))));
        let rhs = dorfman(&a, &b)?.scale(&f).add(&b.scale(&x_of_f));
        checks.push(zero_check("cour3 (derivations)", omni_diff_form(&lhs, &rhs)));
        checks.push(zero_check("cour3 (jets)", omni_jet_diff_form(&lhs, &rhs)));

        // cour4: <<[[a, b]], g>> + <<b, [[a, g]]>> = pr_D(a)(<<b, g>>)
        let lhs = omni_pairing(&dorfman(&a, &b)?, &g)?.add(&omni_pairing(&b, &dorfman(&a, &g)?)?);
        let rhs = apply_derivation(&a.der, &omni_pairing(&b, &g)?);
        checks.push(zero_check(
            "cour4",
            LForm::from_scalar(chart, &lhs.sub(&rhs)),
        ));

        // Upsilon is pointwise linear on isotropic frames: graphs of random
        // 2-cochains are always isotropic
        let omega = random_lform(rng, chart, 2);
        let frame = from_two_cocycle(&omega)?;
        let mut scaled_sections = frame.sections.clone();
        scaled_sections[0] = scaled_sections[0].scale(&f);
        let scaled = StructureFrame::new(chart.clone(), scaled_sections, "scaled graph");
        if frame.rank() >= 3 {
            let lhs = upsilon(&scaled, 0, 1, 2)?;
            let rhs = upsilon(&frame, 0, 1, 2)?.mul(&f);
            checks.push(zero_check(
                "Upsilon linearity",
                LForm::from_scalar(chart, &lhs.sub(&rhs)),
            ));
        }
        Ok(checks)
    })
}

use rand::RngCore;
