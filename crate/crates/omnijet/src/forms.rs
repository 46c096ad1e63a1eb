//! The der-complex: `L`-valued alternating forms on `DL` with the
//! differential of the tautological representation.
//!
//! Forms are stored componentwise over the frame `(delta_1..delta_n, 1)` of
//! `DL`, indexed by strictly increasing multi-indices. All frame brackets
//! vanish, so the Koszul formula for the differential reduces to signed
//! sums of frame actions on components: `delta_i` acts as `d/dz^i` and the
//! identity derivation acts as multiplication by 1.

use crate::bundle::{Derivation, Jet1};
use crate::chart::{check_same_chart, Chart, Point};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Mat};
use crate::oracle::{EqVerdict, Oracle};
use crate::scalar::{sum, Scalar};

/// Strictly increasing multi-indices of size `k` drawn from `0..n_frame`,
/// in lexicographic order.
pub fn combinations(n_frame: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n_frame {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n_frame - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn combo_position(combos: &[Vec<usize>], key: &[usize]) -> usize {
    combos
        .binary_search_by(|c| c.as_slice().cmp(key))
        .expect("multi-index present")
}

/// A degree-`k` element of the der-complex, `0 <= k <= n + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LForm {
    pub chart: Chart,
    pub degree: usize,
    /// Components over strictly increasing multi-indices in lex order.
    comps: Vec<Scalar>,
}

impl LForm {
    /// Frame size of `DL`: chart dimension plus one (the identity slot).
    pub fn frame_size(chart: &Chart) -> usize {
        chart.dim() + 1
    }

    pub fn zero(chart: &Chart, degree: usize) -> Result<LForm> {
        let nf = Self::frame_size(chart);
        if degree > nf {
            return Err(Error::FormDegree {
                degree,
                max: nf,
            });
        }
        let count = combinations(nf, degree).len();
        Ok(LForm {
            chart: chart.clone(),
            degree,
            comps: vec![Scalar::zero(); count],
        })
    }

    pub fn from_components(chart: &Chart, degree: usize, comps: Vec<Scalar>) -> Result<LForm> {
        let mut f = LForm::zero(chart, degree)?;
        if comps.len() != f.comps.len() {
            return Err(Error::Invalid(format!(
                "degree-{} form on a {}-chart needs {} components, got {}",
                degree,
                chart.dim(),
                f.comps.len(),
                comps.len()
            )));
        }
        f.comps = comps;
        Ok(f)
    }

    pub fn from_scalar(chart: &Chart, f: &Scalar) -> LForm {
        LForm {
            chart: chart.clone(),
            degree: 0,
            comps: vec![f.clone()],
        }
    }

    /// Degree-1 forms are jets: components `(eta_1..eta_n, g)`.
    pub fn from_jet(psi: &Jet1) -> LForm {
        let mut comps = psi.eta.clone();
        comps.push(psi.g.clone());
        LForm {
            chart: psi.chart.clone(),
            degree: 1,
            comps,
        }
    }

    pub fn to_jet(&self) -> Result<Jet1> {
        if self.degree != 1 {
            return Err(Error::FormDegree {
                degree: self.degree,
                max: 1,
            });
        }
        let n = self.chart.dim();
        Ok(Jet1::new(
            self.chart.clone(),
            self.comps[..n].to_vec(),
            self.comps[n].clone(),
        ))
    }

    pub fn to_scalar(&self) -> Result<Scalar> {
        if self.degree != 0 {
            return Err(Error::FormDegree {
                degree: self.degree,
                max: 0,
            });
        }
        Ok(self.comps[0].clone())
    }

    pub fn components(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn multi_indices(&self) -> Vec<Vec<usize>> {
        combinations(Self::frame_size(&self.chart), self.degree)
    }

    /// Component label like `(delta_x, 1)` for reports.
    pub fn index_label(&self, pos: usize) -> String {
        let idx = &self.multi_indices()[pos];
        let names: Vec<String> = idx
            .iter()
            .map(|&a| {
                if a < self.chart.dim() {
                    format!("delta_{}", self.chart.name(a))
                } else {
                    "1".to_string()
                }
            })
            .collect();
        format!("({})", names.join(", "))
    }

    /// Value on an ordered frame tuple (with possible repeats), expanded by
    /// antisymmetry. Zero on repeated indices.
    pub fn on_frame(&self, indices: &[usize]) -> Scalar {
        assert_eq!(indices.len(), self.degree);
        let mut sorted: Vec<usize> = indices.to_vec();
        // bubble sort, tracking sign
        let mut sign = 1i64;
        for i in 0..sorted.len() {
            for j in 0..sorted.len().saturating_sub(1 + i) {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Scalar::zero();
        }
        let combos = self.multi_indices();
        let pos = combo_position(&combos, &sorted);
        if sign == 1 {
            self.comps[pos].clone()
        } else {
            self.comps[pos].neg()
        }
    }

    pub fn add(&self, other: &LForm) -> LForm {
        assert_eq!(self.chart, other.chart);
        assert_eq!(self.degree, other.degree);
        LForm {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &LForm) -> LForm {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, f: &Scalar) -> LForm {
        LForm {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        }
    }

    pub fn neg(&self) -> LForm {
        self.scale(&Scalar::from_int(-1))
    }

    /// Is every component oracle-zero?
    pub fn is_zero(&self, o: &Oracle) -> Result<EqVerdict> {
        let points = o.points(&self.chart);
        for (pos, c) in self.comps.iter().enumerate() {
            match o.scalars_equal_at(&points, c, &Scalar::zero(), &self.index_label(pos))? {
                EqVerdict::Equal => {}
                other => return Ok(other),
            }
        }
        Ok(EqVerdict::Equal)
    }
}

/// Action of frame element `a` on a component scalar: `delta_i` acts by the
/// exact partial derivative, the identity slot by multiplication by 1.
fn frame_action(chart: &Chart, a: usize, f: &Scalar) -> Scalar {
    if a < chart.dim() {
        f.diff(a)
    } else {
        f.clone()
    }
}

/// Koszul differential. All frame brackets vanish, so
/// `(d omega)(e_{i0},..,e_{ik}) = sum_j (-1)^j e_{ij} . omega(.. e_{ij} ..)`.
/// On degree 0 this is the jet prolongation `f -> (df, f)`.
pub fn d_d(omega: &LForm) -> Result<LForm> {
    let nf = LForm::frame_size(&omega.chart);
    if omega.degree + 1 > nf {
        return Err(Error::FormDegree {
            degree: omega.degree + 1,
            max: nf,
        });
    }
    let target = combinations(nf, omega.degree + 1);
    let comps = target
        .iter()
        .map(|idx| {
            sum(idx.iter().enumerate().map(|(j, &a)| {
                let rest: Vec<usize> = idx
                    .iter()
                    .copied()
                    .filter(|&b| b != a)
                    .collect();
                let inner = omega.on_frame(&rest);
                let term = frame_action(&omega.chart, a, &inner);
                if j % 2 == 0 {
                    term
                } else {
                    term.neg()
                }
            }))
        })
        .collect();
    Ok(LForm {
        chart: omega.chart.clone(),
        degree: omega.degree + 1,
        comps,
    })
}

/// Contraction `i_Delta omega` expanded bilinearly over the frame.
pub fn contract(d: &Derivation, omega: &LForm) -> Result<LForm> {
    check_same_chart(&d.chart, &omega.chart)?;
    if omega.degree == 0 {
        return Err(Error::FormDegree {
            degree: 0,
            max: 0,
        });
    }
    let nf = LForm::frame_size(&omega.chart);
    let target = combinations(nf, omega.degree - 1);
    let comps = target
        .iter()
        .map(|idx| {
            sum((0..nf).filter(|a| !idx.contains(a)).map(|a| {
                let mut full = vec![a];
                full.extend_from_slice(idx);
                d.component(a).mul(&omega.on_frame(&full))
            }))
        })
        .collect();
    Ok(LForm {
        chart: omega.chart.clone(),
        degree: omega.degree - 1,
        comps,
    })
}

/// Cartan's magic formula `L_Delta = i_Delta d + d i_Delta`. The
/// differential of a top-degree form is zero.
pub fn lie_derivative(d: &Derivation, omega: &LForm) -> Result<LForm> {
    let term1 = if omega.degree < LForm::frame_size(&omega.chart) {
        contract(d, &d_d(omega)?)?
    } else {
        LForm::zero(&omega.chart, omega.degree)?
    };
    if omega.degree == 0 {
        return Ok(term1);
    }
    let term2 = d_d(&contract(d, omega)?)?;
    Ok(term1.add(&term2))
}

/// A precontact form `theta` (components of `theta o sigma`) corresponds to
/// the 2-cocycle `omega = -d(theta o sigma)`; the inverse direction is
/// `theta = -i_1 omega`.
pub fn cocycle_from_precontact(chart: &Chart, theta: &[Scalar]) -> Result<LForm> {
    if theta.len() != chart.dim() {
        return Err(Error::Invalid(format!(
            "precontact form needs {} components, got {}",
            chart.dim(),
            theta.len()
        )));
    }
    let big_theta = LForm::from_jet(&Jet1::embed_covector(chart, theta.to_vec()));
    Ok(d_d(&big_theta)?.neg())
}

/// Recovers the precontact components from a 2-cocycle; fails with a witness
/// when the form is not closed under the oracle.
pub fn precontact_from_cocycle(omega: &LForm, o: &Oracle) -> Result<Vec<Scalar>> {
    if omega.degree != 2 {
        return Err(Error::FormDegree {
            degree: omega.degree,
            max: 2,
        });
    }
    let domega = d_d(omega)?;
    if let EqVerdict::Unequal(w) = domega.is_zero(o)? {
        return Err(Error::NotClosed {
            point: w.point,
            component: w.context,
            value: w.lhs,
        });
    }
    let theta = contract(&Derivation::unit(&omega.chart), omega)?.neg();
    let jet = theta.to_jet()?;
    // the identity slot of i_1 omega is omega(1, 1) = 0 structurally
    debug_assert!(jet.g.is_zero_const());
    Ok(jet.eta)
}

/// Pointwise kernel of a 2-form: nullspace of the `(n+1) x (n+1)`
/// antisymmetric matrix at `p`, with the symbol projections of the basis.
#[derive(Debug, Clone)]
pub struct FormKernel {
    /// Basis of `K_omega` at the point, components over `(delta_i, 1)`.
    pub kernel: Vec<Vec<f64>>,
    /// Independent symbol projections: the null distribution `sigma(K_omega)`.
    pub symbols: Vec<Vec<f64>>,
}

pub fn form_kernel_at_point(omega: &LForm, o: &Oracle, p: &Point) -> Result<FormKernel> {
    if omega.degree != 2 {
        return Err(Error::FormDegree {
            degree: omega.degree,
            max: 2,
        });
    }
    check_same_chart(&omega.chart, p.chart())?;
    let nf = LForm::frame_size(&omega.chart);
    let mut m = Mat::zeros(nf, nf);
    for a in 0..nf {
        for b in (a + 1)..nf {
            let v = o.eval(&omega.on_frame(&[a, b]), p)?;
            m[(a, b)] = v;
            m[(b, a)] = -v;
        }
    }
    let kernel = m.nullspace(o.atol);
    let symbols = independent_subset(
        &kernel
            .iter()
            .map(|v| v[..omega.chart.dim()].to_vec())
            .collect::<Vec<_>>(),
        o.atol,
    );
    let symbols = symbols
        .into_iter()
        .filter(|v| v.iter().any(|&x| x.abs() > o.atol))
        .collect();
    Ok(FormKernel { kernel, symbols })
}
