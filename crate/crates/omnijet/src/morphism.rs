//! Backward and forward images of Dirac-Jacobi structures along regular
//! line-bundle morphisms, and the Jacobi thickening.
//!
//! Closed-form frames are produced for the two canonical shapes the theory
//! reduces to — coordinate slices and coordinate projections — while
//! general-position forward images are pointwise linear algebra.

use crate::bundle::{pullback_jet, Derivation, Jet1, LineBundleMorphism};
use crate::chart::{Chart, Point};
use crate::error::{Error, Result};
use crate::forms::{d_d, LForm};
use crate::linalg::{in_span, independent_subset, span_equal, Mat};
use crate::omni::{FrameWitness, OmniSection, StructureFrame};
use crate::oracle::Oracle;
use crate::scalar::{sum, Scalar};
use crate::symmat::{invert, left_nullspace, SymMat};
use crate::zoo::gauge_transform;

/// Substitution map sending full-chart scalars onto the slice: frozen
/// coordinates become constants, kept ones are renumbered.
fn slice_subst_map(chart: &Chart, constants: &[(usize, f64)], kept: &[usize]) -> Result<Vec<Scalar>> {
    let mut map = vec![Scalar::zero(); chart.dim()];
    for &(idx, val) in constants {
        map[idx] = Scalar::from_f64(val).ok_or_else(|| {
            Error::Invalid(format!("slice constant {} is not representable", val))
        })?;
    }
    for (new_idx, &old_idx) in kept.iter().enumerate() {
        map[old_idx] = Scalar::coord(new_idx);
    }
    Ok(map)
}

/// Rank of `L cap (N*S (x) L|_S)` at one slice point: sections supported on
/// the frozen covector directions only.
fn conormal_rank_at(
    frame: &StructureFrame,
    o: &Oracle,
    p: &Point,
    kept: &[usize],
) -> Result<usize> {
    let n = frame.chart.dim();
    let full = frame.matrix_at(o, p)?;
    // columns that must vanish: all derivation components, kept jet
    // components, and the unit jet slot
    let mut cols: Vec<usize> = (0..=n).collect();
    cols.extend(kept.iter().map(|&c| n + 1 + c));
    cols.push(2 * n + 1);
    let rows: Vec<Vec<f64>> = (0..full.rows)
        .map(|r| cols.iter().map(|&c| full[(r, c)]).collect())
        .collect();
    let m = Mat::from_rows(&rows);
    Ok(m.transpose().nullspace(o.atol).len())
}

/// Backward image along the inclusion of the coordinate slice
/// `{z^i = const : i frozen}`. The tangency conditions are solved by
/// symbolic elimination: the result is the span of the combinations of the
/// frame whose symbols have no frozen components on the slice, with jets
/// restricted (frozen covector components dropped, constants substituted).
pub fn backward_image_slice(
    frame: &StructureFrame,
    o: &Oracle,
    constants: &[(usize, f64)],
) -> Result<StructureFrame> {
    let n = frame.chart.dim();
    for &(idx, _) in constants {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, dim: n });
        }
    }
    let frozen: Vec<usize> = constants.iter().map(|&(i, _)| i).collect();
    let kept: Vec<usize> = (0..n).filter(|c| !frozen.contains(c)).collect();
    if kept.is_empty() {
        return Err(Error::Invalid("slice must keep at least one coordinate".into()));
    }
    let sub = frame.chart.subchart(&kept)?;
    let map = slice_subst_map(&frame.chart, constants, &kept)?;

    // clean intersection: conormal rank constant over sampled slice points
    let slice_points: Vec<Point> = o
        .points(&sub)
        .into_iter()
        .map(|sp| {
            let mut coords = vec![0.0; n];
            for &(idx, val) in constants {
                coords[idx] = val;
            }
            for (j, &old) in kept.iter().enumerate() {
                coords[old] = sp.coords()[j];
            }
            frame.chart.point(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let ranks: Vec<usize> = slice_points
        .iter()
        .map(|p| conormal_rank_at(frame, o, p, &kept))
        .collect::<Result<Vec<_>>>()?;
    if ranks.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::CleanIntersection { ranks });
    }

    // tangency conditions: symbol components along frozen coordinates,
    // restricted to the slice
    let tangency = SymMat::from_rows(
        frame
            .sections
            .iter()
            .map(|s| frozen.iter().map(|&c| s.der.x[c].subst(&map)).collect())
            .collect(),
    );
    let combos = left_nullspace(&tangency, &sub, o)?;
    if combos.is_empty() {
        return Err(Error::Elimination(
            "no tangent combinations survive on the slice".into(),
        ));
    }

    let sections = combos
        .iter()
        .map(|combo| {
            let mut acc = OmniSection::zero(&frame.chart);
            for (k, ck) in combo.iter().enumerate() {
                // restrict the section componentwise, then combine over the slice
                let restricted = OmniSection::new(
                    Derivation::new(
                        frame.chart.clone(),
                        frame.sections[k].der.x.iter().map(|c| c.subst(&map)).collect(),
                        frame.sections[k].der.a.subst(&map),
                    ),
                    Jet1::new(
                        frame.chart.clone(),
                        frame.sections[k].jet.eta.iter().map(|c| c.subst(&map)).collect(),
                        frame.sections[k].jet.g.subst(&map),
                    ),
                );
                acc = acc.add(&restricted.scale(ck));
            }
            // frozen symbol components vanish by construction of the combos
            let x: Vec<Scalar> = kept.iter().map(|&c| acc.der.x[c].clone()).collect();
            let eta: Vec<Scalar> = kept.iter().map(|&c| acc.jet.eta[c].clone()).collect();
            Ok(OmniSection::new(
                Derivation::new(sub.clone(), x, acc.der.a.clone()),
                Jet1::new(sub.clone(), eta, acc.jet.g.clone()),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureFrame::new(
        sub,
        sections,
        format!("{} | slice", frame.label),
    ))
}

/// Backward image along a coordinate projection with fiber factor `c`: the
/// base structure lives on the coordinates `base_indices` of `total`, the
/// rest are fiber directions. Generators are the factor-corrected lifts of
/// the base frame plus one fiber generator `((d_a, d_a(c)/c), 0)` per fiber
/// coordinate.
pub fn backward_image_projection(
    base: &StructureFrame,
    total: &Chart,
    base_indices: &[usize],
    factor: &Scalar,
    o: &Oracle,
) -> Result<StructureFrame> {
    let nb = base.chart.dim();
    let nt = total.dim();
    if base_indices.len() != nb {
        return Err(Error::Invalid(format!(
            "{} base indices for a {}-dimensional base",
            base_indices.len(),
            nb
        )));
    }
    for (j, &idx) in base_indices.iter().enumerate() {
        if idx >= nt {
            return Err(Error::IndexOutOfRange { index: idx, dim: nt });
        }
        if base.chart.name(j) != total.name(idx) {
            return Err(Error::Invalid(format!(
                "base coordinate `{}` does not match total coordinate `{}`",
                base.chart.name(j),
                total.name(idx)
            )));
        }
    }
    if !o.nonvanishing(total, factor)? {
        return Err(Error::Invalid(
            "projection factor vanishes at a sampled point".into(),
        ));
    }
    let fiber: Vec<usize> = (0..nt).filter(|i| !base_indices.contains(i)).collect();
    // reindex base scalars into the total chart
    let lift_map: Vec<Scalar> = base_indices.iter().map(|&i| Scalar::coord(i)).collect();
    let c2 = factor.pow(2);

    let mut sections = Vec::with_capacity(nt + 1);
    for s in &base.sections {
        let y: Vec<Scalar> = s.der.x.iter().map(|v| v.subst(&lift_map)).collect();
        let b = s.der.a.subst(&lift_map);
        let g = s.jet.g.subst(&lift_map);
        // derivation: base symbols in base slots, unit coefficient corrected
        // so the pushforward recovers (Y, b)
        let mut x_total = vec![Scalar::zero(); nt];
        for (j, &idx) in base_indices.iter().enumerate() {
            x_total[idx] = y[j].clone();
        }
        let x_of_c = sum(
            base_indices
                .iter()
                .enumerate()
                .map(|(j, &idx)| y[j].mul(&factor.diff(idx))),
        );
        let a_total = b.add(&x_of_c.div(factor));
        // jet: the pullback along the projection
        let mut eta_total = vec![Scalar::zero(); nt];
        for i in 0..nt {
            let lead = match base_indices.iter().position(|&idx| idx == i) {
                Some(j) => s.jet.eta[j].subst(&lift_map).div(factor),
                None => Scalar::zero(),
            };
            eta_total[i] = lead.sub(&g.mul(&factor.diff(i)).div(&c2));
        }
        sections.push(OmniSection::new(
            Derivation::new(total.clone(), x_total, a_total),
            Jet1::new(total.clone(), eta_total, g.div(factor)),
        ));
    }
    for &a in &fiber {
        let mut x = vec![Scalar::zero(); nt];
        x[a] = Scalar::one();
        let coeff = factor.diff(a).div(factor);
        sections.push(OmniSection::new(
            Derivation::new(total.clone(), x, coeff),
            Jet1::zero(total),
        ));
    }
    Ok(StructureFrame::new(
        total.clone(),
        sections,
        format!("{} | pulled back", base.label),
    ))
}

/// Pointwise forward image at `p`: the subspace
/// `{(F_* Delta, psi') : (Delta, F* psi') in L_p}` of the target fiber,
/// with the rank of `ker d_D F cap L` at `p` as a clean-intersection
/// diagnostic.
#[derive(Debug, Clone)]
pub struct ForwardImage {
    pub target_point: Point,
    /// basis vectors of length `2(n' + 1)`
    pub basis: Vec<Vec<f64>>,
    pub ker_ddf_cap_rank: usize,
}

pub fn forward_image_pointwise(
    f: &LineBundleMorphism,
    frame: &StructureFrame,
    o: &Oracle,
    p: &Point,
) -> Result<ForwardImage> {
    let n = f.source.dim();
    let n_t = f.target.dim();
    let q = f.base_point(o, p)?;

    // pullback matrix on jets at p: columns F*(frame jet of the target)
    let mut pullback_cols = Vec::with_capacity(n_t + 1);
    for b in 0..=n_t {
        let psi = if b < n_t {
            Jet1::dz(&f.target, b)?
        } else {
            Jet1::unit(&f.target)
        };
        pullback_cols.push(pullback_jet(f, &psi)?.eval(o, p)?);
    }
    // pushforward matrix on derivations at p: columns F_*(e_A)
    let mut pushforward_cols = Vec::with_capacity(n + 1);
    for a in 0..=n {
        let d = if a < n {
            Derivation::delta(&f.source, a)?
        } else {
            Derivation::unit(&f.source)
        };
        let pd = crate::bundle::pushforward_derivation(f, &d, o, p)?;
        pushforward_cols.push(pd.components());
    }

    let der = frame.der_matrix_at(o, p)?;
    let jet = frame.jet_matrix_at(o, p)?;
    let m = frame.rank();

    // solve jet(sum v_k a_k) = P psi' for (v, psi')
    let mut rows = Vec::with_capacity(n + 1);
    for comp in 0..=n {
        let mut row = vec![0.0; m + n_t + 1];
        for k in 0..m {
            row[k] = jet[(k, comp)];
        }
        for b in 0..=n_t {
            row[m + b] = -pullback_cols[b][comp];
        }
        rows.push(row);
    }
    let solutions = Mat::from_rows(&rows).nullspace(o.atol);
    let mapped: Vec<Vec<f64>> = solutions
        .iter()
        .map(|sol| {
            // Delta = sum v_k der_k, then push forward
            let mut delta = vec![0.0; n + 1];
            for k in 0..m {
                for a in 0..=n {
                    delta[a] += sol[k] * der[(k, a)];
                }
            }
            let mut pushed = vec![0.0; n_t + 1];
            for a in 0..=n {
                for (b, pb) in pushed.iter_mut().enumerate() {
                    *pb += delta[a] * pushforward_cols[a][b];
                }
            }
            let mut v = pushed;
            for b in 0..=n_t {
                v.push(sol[m + b]);
            }
            v
        })
        .collect();
    let basis = independent_subset(&mapped, o.atol);

    // ker d_D F cap L: combinations with zero jet and vanishing pushforward
    let mut rows = Vec::new();
    for comp in 0..=n {
        let mut row = vec![0.0; m];
        for k in 0..m {
            row[k] = jet[(k, comp)];
        }
        rows.push(row);
    }
    for b in 0..=n_t {
        let mut row = vec![0.0; m];
        for k in 0..m {
            for a in 0..=n {
                row[k] += der[(k, a)] * pushforward_cols[a][b];
            }
        }
        rows.push(row);
    }
    let ker = Mat::from_rows(&rows).nullspace(o.atol).len();

    Ok(ForwardImage {
        target_point: q,
        basis,
        ker_ddf_cap_rank: ker,
    })
}

/// Invariance probe: do two fiber mates produce the same forward image?
pub fn forward_images_match(
    f: &LineBundleMorphism,
    frame: &StructureFrame,
    o: &Oracle,
    p1: &Point,
    p2: &Point,
) -> Result<bool> {
    let a = forward_image_pointwise(f, frame, o, p1)?;
    let b = forward_image_pointwise(f, frame, o, p2)?;
    if a.target_point
        .coords()
        .iter()
        .zip(b.target_point.coords())
        .any(|(x, y)| (x - y).abs() > 1e-9)
    {
        return Err(Error::Invalid(
            "points are not fiber mates: their images differ".into(),
        ));
    }
    Ok(span_equal(&a.basis, &b.basis, o.atol))
}

/// Result of the Jacobi thickening.
#[derive(Debug)]
pub struct ThickenResult {
    /// The thickened structure over the extended chart.
    pub structure: StructureFrame,
    pub extended: Chart,
    /// Indices of the fiber coordinates in the extended chart.
    pub eps_indices: Vec<usize>,
    pub theta: LForm,
    pub omega: LForm,
    /// First sampled point near the zero section where `L_G cap DL != 0`.
    pub jacobi_defect: Option<FrameWitness>,
    /// First coisotropy failure of the zero section.
    pub coisotropy_defect: Option<FrameWitness>,
    /// The zero-section backward image spans the input structure.
    pub slice_recovers: bool,
}

impl ThickenResult {
    pub fn verified(&self) -> bool {
        self.jacobi_defect.is_none() && self.coisotropy_defect.is_none() && self.slice_recovers
    }
}

/// Builds the thickening of a structure with regular null der-distribution.
/// The caller supplies a frame of `E = L cap DL` (each element pairs with
/// one new fiber coordinate) and a complement `G` with `DL = G (+) E`; the
/// construction is `tau_{omega_G}` applied to the projection pullback,
/// where `omega_G = -d Theta_G` and `Theta_G` pairs the `E`-projection with
/// the tautological fiber values.
pub fn thicken(
    frame: &StructureFrame,
    e_frame: &[Derivation],
    g_frame: &[Derivation],
    o: &Oracle,
) -> Result<ThickenResult> {
    let n = frame.chart.dim();
    let r = e_frame.len();
    if r + g_frame.len() != n + 1 {
        return Err(Error::Invalid(format!(
            "E ({}) and G ({}) frames must split DL of rank {}",
            r,
            g_frame.len(),
            n + 1
        )));
    }

    // each (e, 0) must lie in the structure at every oracle point
    for (l, e) in e_frame.iter().enumerate() {
        let section = OmniSection::from_derivation(e.clone());
        for p in o.points(&frame.chart) {
            let m = frame.matrix_at(o, &p)?;
            let rows: Vec<Vec<f64>> = (0..m.rows).map(|row| m.row(row).to_vec()).collect();
            if !in_span(&rows, &section.eval(o, &p)?, 1e-7) {
                return Err(Error::Invalid(format!(
                    "E-frame element {} is not a section of the structure at {:?}",
                    l,
                    p.coords()
                )));
            }
        }
    }

    if r == 0 {
        // already Jacobi-like: the thickening is the identity construction
        return Ok(ThickenResult {
            structure: frame.clone(),
            extended: frame.chart.clone(),
            eps_indices: Vec::new(),
            theta: LForm::zero(&frame.chart, 1)?,
            omega: LForm::zero(&frame.chart, 2)?,
            jacobi_defect: None,
            coisotropy_defect: None,
            slice_recovers: true,
        });
    }

    // invert the [E | G] frame of DL to get the E-projection coefficients
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
    for e in e_frame.iter().chain(g_frame.iter()) {
        let mut col = e.x.clone();
        col.push(e.a.clone());
        cols.push(col);
    }
    let m = SymMat::from_rows(
        (0..=n)
            .map(|row| cols.iter().map(|c| c[row].clone()).collect())
            .collect(),
    );
    let w = invert(&m, &frame.chart, o)?;

    // extended chart with one fiber coordinate per E element
    let mut extended = frame.chart.clone();
    let mut eps_indices = Vec::with_capacity(r);
    for l in 0..r {
        let name = format!("eps{}", l + 1);
        eps_indices.push(extended.dim());
        extended = extended.extend(&name, (-0.1, 0.1))?;
    }
    let nt = extended.dim();

    // Theta_G: pairs the E-projection of the pushed-down derivation with the
    // tautological fiber values; zero on fiber directions
    let mut theta_comps = vec![Scalar::zero(); nt + 1];
    for (slot, col) in (0..=n).enumerate() {
        // base frame slots: delta_{z_i} for i < n (slot i), unit (slot nt)
        let target = if col < n { slot } else { nt };
        theta_comps[target] = sum(
            (0..r).map(|l| Scalar::coord(eps_indices[l]).mul(&w[(l, col)])),
        );
    }
    let theta = LForm::from_components(&extended, 1, theta_comps)?;
    let omega = d_d(&theta)?.neg();

    let pulled = backward_image_projection(
        frame,
        &extended,
        &(0..n).collect::<Vec<_>>(),
        &Scalar::one(),
        o,
    )?;
    let mut structure = gauge_transform(&pulled, &omega)?;
    structure.label = format!("{} | thickened", frame.label);

    // near the zero section the result must be a Jacobi graph: E-rank 0
    let mut jacobi_defect = None;
    for p in o.points(&extended) {
        let jet = structure.jet_matrix_at(o, &p)?;
        let rank = jet.rank(o.atol);
        if rank != structure.rank() {
            jacobi_defect = Some(FrameWitness {
                point: p.coords().to_vec(),
                indices: vec![rank],
                value: (structure.rank() - rank) as f64,
                law: "thickened structure meets DL".into(),
            });
            break;
        }
    }

    // coisotropy of the zero section: Hamiltonian symbols of fiber-linear
    // sections vanishing on it stay tangent to it
    let mut coisotropy_defect = None;
    'outer: for sp in o.points(&frame.chart) {
        let mut coords = sp.coords().to_vec();
        coords.extend(std::iter::repeat(0.0).take(r));
        let zp = extended.point(coords)?;
        let der = structure.der_matrix_at(o, &zp)?;
        let jet = structure.jet_matrix_at(o, &zp)?;
        for l in 0..r {
            // j1(eps_l) on the zero section: covector slot eps_l, value 0
            let mut target = vec![0.0; nt + 1];
            target[eps_indices[l]] = 1.0;
            let jet_t = jet.transpose();
            let Some(v) = jet_t.solve(&target, o.atol) else {
                coisotropy_defect = Some(FrameWitness {
                    point: zp.coords().to_vec(),
                    indices: vec![l],
                    value: 0.0,
                    law: "no Hamiltonian section for a fiber coordinate".into(),
                });
                break 'outer;
            };
            for &eps_col in &eps_indices {
                let mut x_eps = 0.0;
                for k in 0..structure.rank() {
                    x_eps += v[k] * der[(k, eps_col)];
                }
                if x_eps.abs() > 1e-7 {
                    coisotropy_defect = Some(FrameWitness {
                        point: zp.coords().to_vec(),
                        indices: vec![l, eps_col],
                        value: x_eps,
                        law: "Hamiltonian symbol leaves the zero section".into(),
                    });
                    break 'outer;
                }
            }
        }
    }

    // restricting back along {eps = 0} must recover the input span
    let zero_constants: Vec<(usize, f64)> = eps_indices.iter().map(|&i| (i, 0.0)).collect();
    let restricted = backward_image_slice(&structure, o, &zero_constants)?;
    let mut slice_recovers = true;
    for p in o.points(&frame.chart) {
        let a = restricted.matrix_at(o, &p)?;
        let b = frame.matrix_at(o, &p)?;
        let rows_a: Vec<Vec<f64>> = (0..a.rows).map(|row| a.row(row).to_vec()).collect();
        let rows_b: Vec<Vec<f64>> = (0..b.rows).map(|row| b.row(row).to_vec()).collect();
        if !span_equal(&rows_a, &rows_b, 1e-7) {
            slice_recovers = false;
            break;
        }
    }

    Ok(ThickenResult {
        structure,
        extended,
        eps_indices,
        theta,
        omega,
        jacobi_defect,
        coisotropy_defect,
        slice_recovers,
    })
}
