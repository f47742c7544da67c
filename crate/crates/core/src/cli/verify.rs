use super::{read_graph, read_matrix, Suite, VerifyArgs};
use crate::error::{Error, Result};
use crate::linalg::{self, columns, for_each_subset, Matrix, Subset};
use crate::lowerbounds::{self, Family};
use crate::lowstretch::{self, WeightedGraph};
use crate::randomized::random_matrix;
use crate::volume;

/// Relative tolerance of every identity and expectation check.
pub const REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    match a.suite {
        Suite::Identities => identities(a),
        Suite::Volsamp => volsamp(a),
        Suite::Lowerbound => lowerbound(a),
        Suite::Stretch => stretch(a),
    }
}

fn instance(a: &VerifyArgs, trial: u64) -> Result<Matrix> {
    match &a.input {
        Some(p) => read_matrix(p, a.format),
        None => Ok(random_matrix(a.rows, a.cols, a.seed.wrapping_add(trial))),
    }
}

fn det(x: &Matrix) -> f64 {
    x.to_nalgebra().determinant()
}

/// `det(X X^T)` against the sum of squared maximal minors.
pub fn cauchy_binet(x: &Matrix) -> Result<(f64, f64)> {
    volume::check_enumerable(x.cols(), x.rows())?;
    let lhs = linalg::gram_det(x, &Subset::all(x.cols()))?;
    let mut rhs = 0.0;
    let mut err = None;
    for_each_subset(x.cols(), x.rows(), |idx| match columns(x, &Subset(idx.to_vec())) {
        Ok(xs) => rhs += det(&xs).powi(2),
        Err(e) => err = Some(e),
    });
    err.map_or(Ok((lhs, rhs)), Err)
}

/// For each `j`, the sum of `j x j` principal minors of `X X^T` against the
/// `j`-th elementary symmetric function of its eigenvalues.
pub fn principal_minors(x: &Matrix) -> Result<Vec<(f64, f64)>> {
    let g = x.gram();
    let n = g.rows();
    let eig = linalg::sym_eigenvalues(&g);
    (1..=n)
        .map(|j| {
            let mut sum = 0.0;
            for_each_subset(n, j, |idx| {
                let sub = nalgebra::DMatrix::from_fn(j, j, |r, c| g.get(idx[r], idx[c]));
                sum += sub.determinant();
            });
            Ok((sum, linalg::elem_sym(&eig, j)?))
        })
        .collect()
}

fn identities(a: &VerifyArgs) -> Result<Vec<Check>> {
    let trials = if a.input.is_some() { 1 } else { a.trials.max(1) };
    let mut out = Vec::new();
    let (mut cb, mut pm, mut sd, mut sm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut fails = [0usize; 4];
    for t in 0..trials as u64 {
        let x = instance(a, t)?;
        let n = x.rows();

        let (l, r) = cauchy_binet(&x)?;
        cb = cb.max((l - r).abs() / l.abs().max(r.abs()));
        fails[0] += usize::from(!close(l, r));

        for (l, r) in principal_minors(&x)? {
            pm = pm.max((l - r).abs() / l.abs().max(r.abs()));
            fails[1] += usize::from(!close(l, r));
        }

        let all = Subset::all(x.cols());
        let mut pairs = vec![(linalg::pinv_fro_sq(&x)?, linalg::pinv_fro_sq_via_det(&x, &all)?)];
        let square = Subset((0..n).collect());
        if let Ok(v) = linalg::pinv_fro_sq(&columns(&x, &square)?) {
            pairs.push((v, linalg::pinv_fro_sq_via_det(&x, &square)?));
        }
        for (l, r) in pairs {
            sd = sd.max((l - r).abs() / l.abs().max(r.abs()));
            fails[2] += usize::from(!close(l, r));
        }

        let b = random_matrix(n, n, a.seed.wrapping_add(t).wrapping_mul(31).wrapping_add(7));
        let ab = b.matmul(&x);
        let b_spec = linalg::pinv_spec_sq(&b)?;
        let spec_ratio = linalg::pinv_spec_sq(&ab)? / (b_spec * linalg::pinv_spec_sq(&x)?);
        let fro_ratio = linalg::pinv_fro_sq(&ab)? / (b_spec * linalg::pinv_fro_sq(&x)?);
        sm = sm.max(spec_ratio).max(fro_ratio);
        fails[3] += usize::from(spec_ratio > 1.0 + REL_TOL) + usize::from(fro_ratio > 1.0 + REL_TOL);
    }
    let detail = |err: f64| format!("max relative error {err:.3e} over {trials} instance(s)");
    out.push(check("cauchy-binet", fails[0] == 0, detail(cb)));
    out.push(check("principal-minor sum", fails[1] == 0, detail(pm)));
    out.push(check("square-to-det", fails[2] == 0, detail(sd)));
    out.push(check(
        "pinv submultiplicativity",
        fails[3] == 0,
        format!("max ||(AB)^+||^2 / (||A^+||^2 ||B^+||^2) = {sm:.6} over {trials} instance(s)"),
    ));
    Ok(out)
}

fn volsamp(a: &VerifyArgs) -> Result<Vec<Check>> {
    let x = instance(a, 0)?;
    let (n, m) = (x.rows(), x.cols());
    let fro_full = linalg::pinv_fro_sq(&x)?;
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (n..=m).collect(),
    };
    let mut out = Vec::new();
    for k in ks {
        let table = volume::volsamp_enumerate(&x, k)?;
        let general = table.entries.len() as u128 == linalg::binomial(m, k);
        let e = volume::expected_pinv_fro(&x, k)?;
        let bound = volume::volume_fro_factor(n, m, k) * fro_full;
        let passed = if general { close(e, bound) } else { e <= bound * (1.0 + REL_TOL) };
        let relation = if general { "=" } else { "<=" };
        out.push(check(
            format!("k={k} E||X_S^+||_F^2"),
            passed,
            format!("{e:.12} {relation} {bound:.12}"),
        ));
        let rep = volume::expected_spec_bound_check(&x, k)?;
        let worst = rep
            .expectations
            .iter()
            .zip(&rep.bounds)
            .map(|(e, b)| e / b)
            .fold(0.0, f64::max);
        out.push(check(
            format!("k={k} E[sigma_i^-2(X_S)]"),
            rep.all_hold,
            format!("max expectation / bound = {worst:.6}"),
        ));
    }
    Ok(out)
}

fn lowerbound(a: &VerifyArgs) -> Result<Vec<Check>> {
    let n = a.n.unwrap_or(1);
    let m = a.m.unwrap_or(3);
    let inst = match a.family {
        Family::Spectral => lowerbounds::build_spectral_hard(n, m, a.alpha)?,
        Family::Frobenius => lowerbounds::build_frobenius_hard(n, m, a.alpha)?,
    };
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (n..=m).collect(),
    };
    ks.into_iter()
        .map(|k| {
            let r = lowerbounds::verify_lower_bound(&inst, k)?;
            let note = if r.vacuous { " (vacuous)" } else { "" };
            Ok(check(
                format!("{} n={n} m={m} k={k}", inst.family.name()),
                r.passed(),
                format!(
                    "min {:.9} >= bound {:.9}, slack {:.3e}, {} violation(s){note}",
                    r.min_value, r.bound, r.slack, r.violations
                ),
            ))
        })
        .collect()
}

fn stretch(a: &VerifyArgs) -> Result<Vec<Check>> {
    let g: WeightedGraph = match &a.graph {
        Some(p) => read_graph(p)?,
        None => {
            return Err(Error::Parse {
                line: 0,
                message: "--graph is required for the stretch suite".into(),
            })
        }
    };
    let trees = [
        ("greedy", lowstretch::greedy_tree(&g)?),
        ("maxweight", lowstretch::max_weight_tree(&g)?),
        ("random", lowstretch::random_tree(&g, a.seed)?),
    ];
    let mut out = Vec::new();
    for (name, t) in &trees {
        let d = lowstretch::stretch_direct(&g, t)?;
        let tr = lowstretch::stretch_trace(&g, t)?;
        let s = lowstretch::stretch_subset(&g, t)?;
        out.push(check(
            format!("{name} tree: three stretch routes"),
            close(d, tr) && close(d, s),
            format!("path {d:.12}, trace {tr:.12}, subset {s:.12}"),
        ));
    }
    let all = lowstretch::all_spanning_trees(&g)?;
    let reduced = g.incidence().without_row(0).expect("at least two vertices");
    let mut best: f64 = 0.0;
    for t in &all {
        best = best.max(linalg::gram_det(&reduced, &t.edge_ids)?);
    }
    let mw = trees[1].1.weight_product(&g);
    out.push(check(
        "max-weight tree = max volume",
        close(mw, best),
        format!("product {mw:.12}, max det over {} trees {best:.12}", all.len()),
    ));
    Ok(out)
}
