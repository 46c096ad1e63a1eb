//! Pointwise geometry of a Dirac-Jacobi structure: characteristic
//! distribution, null distributions, precontact/lcps classification, the
//! leaf 2-form, reconstruction from the pair `(I, omega)`, admissible
//! sections and functions, the local normal form at a point, and transverse
//! structures on coordinate slices.

use crate::bundle::{jet_prolong, Derivation};
use crate::chart::{Chart, Point};
use crate::error::{Error, Result};
use crate::linalg::{in_span, independent_subset, span_equal, span_rank, Mat};
use crate::omni::{apply_combo, require_dirac_jacobi, StructureFrame};
use crate::oracle::{Oracle, PointWitness};
use crate::scalar::Scalar;
use crate::zoo::{recognize, RecognizeReport};

/// Everything pointwise about a structure at one chart point.
#[derive(Debug, Clone)]
pub struct PointReport {
    pub point: Point,
    /// rank of `I = pr_D(L)` at the point
    pub rank_i: usize,
    /// rank of `sigma(I)`; the leaf dimension
    pub rank_sigma_i: usize,
    /// rank of `E = L cap DL`
    pub rank_e: usize,
    /// rank of `K = sigma(E)`
    pub rank_k: usize,
    /// a point is precontact when `I` contains a nonzero vertical element
    pub precontact: bool,
    /// basis of `I` (derivation components, length `n + 1`)
    pub i_basis: Vec<Vec<f64>>,
    /// frame rows whose derivation halves give `i_basis`
    pub i_rows: Vec<usize>,
    pub e_basis: Vec<Vec<f64>>,
    pub k_basis: Vec<Vec<f64>>,
    /// matrix of the leaf 2-form on `i_basis`: `W[u][v] = omega(D_u, D_v)`
    pub leaf_form: Vec<Vec<f64>>,
}

/// Ranks, classification, bases, and the leaf 2-form at `p`. The leaf form
/// uses `omega(Delta, Box) = <Box, phi>` with `phi` any jet partner of
/// `Delta` inside the structure; isotropy plus the pointwise characterization
/// of maximal isotropics make the value independent of the partner.
pub fn point_report(frame: &StructureFrame, o: &Oracle, p: &Point) -> Result<PointReport> {
    let n = frame.chart.dim();
    let full = frame.matrix_at(o, p)?;
    if full.rank(o.atol) != frame.rank() {
        return Err(Error::PivotFailure {
            point: p.coords().to_vec(),
        });
    }
    let der = frame.der_matrix_at(o, p)?;
    let jet = frame.jet_matrix_at(o, p)?;

    // independent rows of the derivation half, remembering which frame rows
    let mut i_basis: Vec<Vec<f64>> = Vec::new();
    let mut i_rows: Vec<usize> = Vec::new();
    for r in 0..der.rows {
        let candidate = der.row(r).to_vec();
        if !in_span(&i_basis, &candidate, o.atol) {
            i_basis.push(candidate);
            i_rows.push(r);
        }
    }
    let rank_i = i_basis.len();
    let sigma_rows: Vec<Vec<f64>> = i_basis.iter().map(|v| v[..n].to_vec()).collect();
    let rank_sigma_i = span_rank(&sigma_rows, o.atol);
    let precontact = rank_i == rank_sigma_i + 1;

    // E = combinations with vanishing jet half
    let e_basis: Vec<Vec<f64>> = jet
        .transpose()
        .nullspace(o.atol)
        .iter()
        .map(|c| apply_combo(&der, c))
        .collect();
    let rank_e = span_rank(&e_basis, o.atol);
    let k_basis: Vec<Vec<f64>> = independent_subset(
        &e_basis
            .iter()
            .map(|v| v[..n].to_vec())
            .collect::<Vec<_>>(),
        o.atol,
    )
    .into_iter()
    .filter(|v| v.iter().any(|&x| x.abs() > o.atol))
    .collect();
    let rank_k = k_basis.len();

    // leaf form on the chosen basis: W[u][v] = <D_v, phi_u> with phi_u the
    // jet of the frame row behind basis vector u
    let leaf_form: Vec<Vec<f64>> = i_rows
        .iter()
        .map(|&u| {
            i_basis
                .iter()
                .map(|dv| {
                    (0..=n)
                        .map(|b| dv[b] * jet[(u, b)])
                        .sum()
                })
                .collect()
        })
        .collect();

    Ok(PointReport {
        point: p.clone(),
        rank_i,
        rank_sigma_i,
        rank_e,
        rank_k,
        precontact,
        i_basis,
        i_rows,
        e_basis,
        k_basis,
        leaf_form,
    })
}

/// Checks the reconstruction `L = {(Delta, psi) : Delta in I, i_Delta omega
/// = psi|_I}` at every oracle point: the solution space of the linear
/// conditions coincides with the span of the frame.
pub fn reconstruction_check(frame: &StructureFrame, o: &Oracle) -> Result<Option<PointWitness>> {
    require_dirac_jacobi(frame, o)?;
    let n = frame.chart.dim();
    for p in o.points(&frame.chart) {
        let rep = point_report(frame, o, &p)?;
        let d = rep.rank_i;
        // unknowns: t (coordinates in i_basis) and psi (n + 1 components);
        // conditions: <D_v, psi> = omega(Delta, D_v) = sum_r t_r W[r][v]
        let mut rows = Vec::new();
        for (v, dv) in rep.i_basis.iter().enumerate() {
            let mut row = vec![0.0; d + n + 1];
            for (r, _) in rep.i_basis.iter().enumerate() {
                row[r] = -rep.leaf_form[r][v];
            }
            for b in 0..=n {
                row[d + b] = dv[b];
            }
            rows.push(row);
        }
        let solutions = Mat::from_rows(&rows).nullspace(o.atol);
        // map (t, psi) -> (sum t_r D_r, psi) in R^{2(n+1)}
        let mapped: Vec<Vec<f64>> = solutions
            .iter()
            .map(|sol| {
                let mut v = vec![0.0; 2 * (n + 1)];
                for (r, basis_vec) in rep.i_basis.iter().enumerate() {
                    for b in 0..=n {
                        v[b] += sol[r] * basis_vec[b];
                    }
                }
                for b in 0..=n {
                    v[n + 1 + b] = sol[d + b];
                }
                v
            })
            .collect();
        let frame_rows: Vec<Vec<f64>> = (0..frame.rank())
            .map(|r| frame.matrix_at(o, &p).map(|m| m.row(r).to_vec()))
            .collect::<Result<Vec<_>>>()?;
        if !span_equal(&mapped, &frame_rows, o.atol) {
            return Ok(Some(PointWitness {
                point: p.coords().to_vec(),
                lhs: span_rank(&mapped, o.atol) as f64,
                rhs: span_rank(&frame_rows, o.atol) as f64,
                context: "reconstruction span mismatch".into(),
            }));
        }
    }
    Ok(None)
}

/// Verdict for an admissibility question, with the two routes reported
/// separately: membership of the jet in `pr_J1(L)` versus annihilation by
/// the relevant null distribution.
#[derive(Debug, Clone)]
pub struct AdmissibleReport {
    pub admissible: bool,
    /// jet membership held at every sampled point
    pub membership: bool,
    /// annihilation by `E` (sections) or `K` (functions) held everywhere
    pub annihilation: bool,
    /// the two routes agreed at every sampled point
    pub routes_agree: bool,
    /// supplied Hamiltonian witness lies in the structure at every point
    pub witness_ok: Option<bool>,
    pub first_failure: Option<Vec<f64>>,
}

fn jet_membership_at(
    frame: &StructureFrame,
    o: &Oracle,
    p: &Point,
    jet_vals: &[f64],
) -> Result<bool> {
    let jet = frame.jet_matrix_at(o, p)?;
    let rows: Vec<Vec<f64>> = (0..jet.rows).map(|r| jet.row(r).to_vec()).collect();
    Ok(in_span(&rows, jet_vals, 1e-7))
}

/// Is the section `f mu` admissible: does `j1 f` lie in `pr_J1(L)`
/// pointwise? Cross-checked against `Box(f) = 0` for `Box` in the `E`
/// basis. An optional Hamiltonian witness is verified as well.
pub fn is_admissible_section(
    frame: &StructureFrame,
    o: &Oracle,
    f: &Scalar,
    witness: Option<&Derivation>,
) -> Result<AdmissibleReport> {
    let n = frame.chart.dim();
    let jet = jet_prolong(&frame.chart, f);
    let mut membership = true;
    let mut annihilation = true;
    let mut routes_agree = true;
    let mut witness_ok = witness.map(|_| true);
    let mut first_failure = None;

    for p in o.points(&frame.chart) {
        let jet_vals = jet.eval(o, &p)?;
        let member = jet_membership_at(frame, o, &p, &jet_vals)?;

        let rep = point_report(frame, o, &p)?;
        let mut annihilated = true;
        for e in &rep.e_basis {
            // Box(f) = sum Y^i d_i f + b f at the point
            let mut val = e[n] * o.eval(f, &p)?;
            for i in 0..n {
                val += e[i] * o.eval(&f.diff(i), &p)?;
            }
            if val.abs() > o.atol + o.rtol {
                annihilated = false;
                break;
            }
        }

        if member != annihilated {
            routes_agree = false;
        }
        if !member {
            membership = false;
        }
        if !annihilated {
            annihilation = false;
        }
        if let Some(w) = witness {
            let mut candidate = w.eval(o, &p)?;
            candidate.extend(jet_vals.iter().copied());
            let m = frame.matrix_at(o, &p)?;
            let rows: Vec<Vec<f64>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
            if !in_span(&rows, &candidate, 1e-7) {
                witness_ok = Some(false);
            }
        }
        if (!member || !annihilated) && first_failure.is_none() {
            first_failure = Some(p.coords().to_vec());
        }
    }
    Ok(AdmissibleReport {
        admissible: membership,
        membership,
        annihilation,
        routes_agree,
        witness_ok,
        first_failure,
    })
}

/// Is the function `f` admissible: does the embedded covector `(df, 0)` lie
/// in `pr_J1(L)` pointwise? Cross-checked against `X(f) = 0` over the `K`
/// basis.
pub fn is_admissible_function(
    frame: &StructureFrame,
    o: &Oracle,
    f: &Scalar,
) -> Result<AdmissibleReport> {
    let n = frame.chart.dim();
    let mut membership = true;
    let mut annihilation = true;
    let mut routes_agree = true;
    let mut first_failure = None;

    for p in o.points(&frame.chart) {
        let mut jet_vals = Vec::with_capacity(n + 1);
        for i in 0..n {
            jet_vals.push(o.eval(&f.diff(i), &p)?);
        }
        jet_vals.push(0.0);
        let member = jet_membership_at(frame, o, &p, &jet_vals)?;

        let rep = point_report(frame, o, &p)?;
        let mut annihilated = true;
        for k in &rep.k_basis {
            let mut val = 0.0;
            for i in 0..n {
                val += k[i] * jet_vals[i];
            }
            if val.abs() > o.atol + o.rtol {
                annihilated = false;
                break;
            }
        }

        if member != annihilated {
            routes_agree = false;
        }
        if !member {
            membership = false;
        }
        if !annihilated {
            annihilation = false;
        }
        if (!member || !annihilated) && first_failure.is_none() {
            first_failure = Some(p.coords().to_vec());
        }
    }
    Ok(AdmissibleReport {
        admissible: membership,
        membership,
        annihilation,
        routes_agree,
        witness_ok: None,
        first_failure,
    })
}

/// The Jacobi-module bracket `{f, g} = Delta_f(g)`, after verifying that
/// `(Delta_f, j1 f)` lies in the structure at every oracle point.
pub fn admissible_bracket(
    frame: &StructureFrame,
    o: &Oracle,
    f: &Scalar,
    delta_f: &Derivation,
    g: &Scalar,
) -> Result<Scalar> {
    let jet = jet_prolong(&frame.chart, f);
    for p in o.points(&frame.chart) {
        let mut candidate = delta_f.eval(o, &p)?;
        candidate.extend(jet.eval(o, &p)?);
        let m = frame.matrix_at(o, &p)?;
        let rows: Vec<Vec<f64>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
        if !in_span(&rows, &candidate, 1e-7) {
            return Err(Error::BadWitness(PointWitness {
                point: p.coords().to_vec(),
                lhs: 0.0,
                rhs: 0.0,
                context: "(Delta_f, j1 f) not in the structure".into(),
            }));
        }
    }
    Ok(crate::bundle::apply_derivation(delta_f, g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalCase {
    Lcps,
    Precontact,
}

/// The pointwise block decomposition of the local normal form: the frame is
/// row-reduced at one point into
///
/// ```text
///             pivot Id | E-block || F-block | 0
///                    0 | G-block || H-block | Id
/// ```
///
/// with pivot columns `(delta_x)` (lcps) or `(delta_x, 1)` (precontact) and
/// trailing identity on the complementary jet columns. Isotropy forces
/// `F + F^t = G + G^t = 0` and `H + E^t = 0`.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub case: NormalCase,
    /// leaf coordinate indices (the `x` block), `rank sigma(I)` of them
    pub leaf_coords: Vec<usize>,
    pub transverse_coords: Vec<usize>,
    pub e_block: Vec<Vec<f64>>,
    pub f_block: Vec<Vec<f64>>,
    pub g_block: Vec<Vec<f64>>,
    pub h_block: Vec<Vec<f64>>,
    pub antisymmetry_ok: bool,
    /// normalized frame rows at the point (`m x 2(n+1)`)
    pub basis: Vec<Vec<f64>>,
}

/// Gauss-Jordan restricted to `cols` (in order): pivot rows are moved up in
/// encounter order and scaled to 1; returns the pivot (row, col) pairs.
fn reduce_on_columns(
    m: &mut Vec<Vec<f64>>,
    start_row: usize,
    cols: &[usize],
    tol: f64,
) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut row = start_row;
    for &col in cols {
        if row == m.len() {
            break;
        }
        let Some((best, best_val)) = (row..m.len())
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        else {
            break;
        };
        if best_val <= tol {
            continue;
        }
        m.swap(row, best);
        let p = m[row][col];
        for v in m[row].iter_mut() {
            *v /= p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col].abs() > 0.0 {
                let f = m[r][col];
                for cc in 0..m[r].len() {
                    let sub = f * m[row][cc];
                    m[r][cc] -= sub;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    pivots
}

/// Performs the normal-form elimination of the local structure theorem at a
/// single point. Pivot choices follow the chart's coordinate order; a point
/// too degenerate for this ordering is reported, not worked around.
pub fn normalize_frame_at_point(
    frame: &StructureFrame,
    o: &Oracle,
    p: &Point,
) -> Result<NormalForm> {
    let n = frame.chart.dim();
    let m_count = frame.rank();
    let rep = point_report(frame, o, p)?;
    let case = if rep.precontact {
        NormalCase::Precontact
    } else {
        NormalCase::Lcps
    };
    let d = rep.rank_sigma_i;

    // leaf coordinates: greedy independent columns of the symbol block of I
    let sigma: Vec<Vec<f64>> = rep.i_basis.iter().map(|v| v[..n].to_vec()).collect();
    let mut leaf_coords = Vec::new();
    let mut picked: Vec<Vec<f64>> = Vec::new();
    for col in 0..n {
        if leaf_coords.len() == d {
            break;
        }
        let col_vec: Vec<f64> = sigma.iter().map(|r| r[col]).collect();
        if !in_span(&picked, &col_vec, o.atol) {
            picked.push(col_vec);
            leaf_coords.push(col);
        }
    }
    if leaf_coords.len() != d {
        return Err(Error::PivotFailure {
            point: p.coords().to_vec(),
        });
    }
    let transverse_coords: Vec<usize> = (0..n).filter(|c| !leaf_coords.contains(c)).collect();

    let full = frame.matrix_at(o, p)?;
    let mut rows: Vec<Vec<f64>> = (0..m_count).map(|r| full.row(r).to_vec()).collect();

    // derivation pivot columns: delta_x (lcps) or delta_x plus the unit slot
    let mut der_pivot_cols = leaf_coords.clone();
    if case == NormalCase::Precontact {
        der_pivot_cols.push(n);
    }
    let alpha_count = der_pivot_cols.len();
    let pivots = reduce_on_columns(&mut rows, 0, &der_pivot_cols, o.atol);
    if pivots.len() != alpha_count {
        return Err(Error::PivotFailure {
            point: p.coords().to_vec(),
        });
    }

    // beta rows: the rest; their complementary jet block must normalize
    let jet_pivot_cols: Vec<usize> = match case {
        NormalCase::Lcps => {
            // (dy (x) mu, j1 mu) columns
            let mut cols: Vec<usize> = transverse_coords.iter().map(|&c| n + 1 + c).collect();
            cols.push(2 * n + 1);
            cols
        }
        NormalCase::Precontact => transverse_coords.iter().map(|&c| n + 1 + c).collect(),
    };
    let beta_count = m_count - alpha_count;
    let beta_pivots = reduce_on_columns(&mut rows, alpha_count, &jet_pivot_cols, o.atol);
    if beta_pivots.len() != beta_count {
        return Err(Error::PivotFailure {
            point: p.coords().to_vec(),
        });
    }

    // alpha jet columns on the leaf block
    let alpha_jet_cols: Vec<usize> = match case {
        NormalCase::Lcps => leaf_coords.iter().map(|&c| n + 1 + c).collect(),
        NormalCase::Precontact => {
            let mut cols: Vec<usize> = leaf_coords.iter().map(|&c| n + 1 + c).collect();
            cols.push(2 * n + 1);
            cols
        }
    };
    // derivation columns of the transverse block
    let der_rest_cols: Vec<usize> = match case {
        NormalCase::Lcps => {
            let mut cols = transverse_coords.clone();
            cols.push(n);
            cols
        }
        NormalCase::Precontact => transverse_coords.clone(),
    };

    let take = |rows: &Vec<Vec<f64>>, rs: std::ops::Range<usize>, cols: &[usize]| -> Vec<Vec<f64>> {
        rs.map(|r| cols.iter().map(|&c| rows[r][c]).collect()).collect()
    };
    let e_block = take(&rows, 0..alpha_count, &der_rest_cols);
    let f_block = take(&rows, 0..alpha_count, &alpha_jet_cols);
    let g_block = take(&rows, alpha_count..m_count, &der_rest_cols);
    let h_block = take(&rows, alpha_count..m_count, &alpha_jet_cols);

    let tol = 1e-7;
    let mut antisymmetry_ok = true;
    for i in 0..alpha_count {
        for j in 0..alpha_count {
            if (f_block[i][j] + f_block[j][i]).abs() > tol {
                antisymmetry_ok = false;
            }
        }
    }
    for i in 0..beta_count {
        for j in 0..beta_count {
            if (g_block[i][j] + g_block[j][i]).abs() > tol {
                antisymmetry_ok = false;
            }
        }
    }
    for i in 0..beta_count {
        for j in 0..alpha_count {
            if (h_block[i][j] + e_block[j][i]).abs() > tol {
                antisymmetry_ok = false;
            }
        }
    }

    Ok(NormalForm {
        case,
        leaf_coords,
        transverse_coords,
        e_block,
        f_block,
        g_block,
        h_block,
        antisymmetry_ok,
        basis: rows,
    })
}

/// Recognized transverse structure on a coordinate slice through `p`.
#[derive(Debug)]
pub struct TransverseStructure {
    pub slice_chart: Chart,
    pub report: RecognizeReport,
    /// max |entry| of the recognized Jacobi matrix at the base point
    pub jacobi_norm_at_point: Option<f64>,
    /// max |entry| of the recognized `(pi, Z)` at the base point
    pub poisson_norm_at_point: Option<f64>,
}

/// Computes the backward image onto the slice `{z^i = p^i : i in frozen}`
/// and recognizes the induced structure. The slice must be transverse to
/// the leaf at `p`: the frozen directions complete `sigma(I_p)` to the whole
/// tangent space.
pub fn transverse_structure_at(
    frame: &StructureFrame,
    o: &Oracle,
    p: &Point,
    frozen: &[usize],
) -> Result<TransverseStructure> {
    let n = frame.chart.dim();
    let rep = point_report(frame, o, p)?;
    if frozen.len() != rep.rank_sigma_i {
        return Err(Error::Invalid(format!(
            "slice freezes {} coordinates but the leaf dimension is {}",
            frozen.len(),
            rep.rank_sigma_i
        )));
    }
    // transversality: sigma(I_p) plus the kept coordinate directions span
    let mut vectors: Vec<Vec<f64>> = rep
        .i_basis
        .iter()
        .map(|v| v[..n].to_vec())
        .collect();
    for c in 0..n {
        if !frozen.contains(&c) {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            vectors.push(e);
        }
    }
    if span_rank(&vectors, o.atol) != n {
        return Err(Error::Invalid(
            "slice is not transverse to the leaf at the point".into(),
        ));
    }

    let constants: Vec<(usize, f64)> = frozen
        .iter()
        .map(|&c| (c, p.coords()[c]))
        .collect();
    let sliced = crate::morphism::backward_image_slice(frame, o, &constants)?;
    let report = recognize(&sliced, o)?;

    // evaluate the recognized data at the base point of the slice
    let kept: Vec<usize> = (0..n).filter(|c| !frozen.contains(c)).collect();
    let base = sliced
        .chart
        .point(kept.iter().map(|&c| p.coords()[c]).collect())?;
    let jacobi_norm_at_point = match &report.jacobi {
        None => None,
        Some(j) => {
            let mut m: f64 = 0.0;
            for e in j.upper_entries() {
                m = m.max(o.eval(e, &base)?.abs());
            }
            Some(m)
        }
    };
    let poisson_norm_at_point = match &report.hom_poisson {
        None => None,
        Some(d) => {
            let mut m: f64 = 0.0;
            for e in d.pi_upper().iter().chain(&d.z) {
                m = m.max(o.eval(e, &base)?.abs());
            }
            Some(m)
        }
    };
    Ok(TransverseStructure {
        slice_chart: sliced.chart.clone(),
        report,
        jacobi_norm_at_point,
        poisson_norm_at_point,
    })
}
