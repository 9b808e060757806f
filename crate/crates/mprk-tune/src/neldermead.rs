//! Small Nelder-Mead simplex minimizer for low-dimensional refinement.

/// Minimize `f` from `x0` with initial simplex spread `scale`.
///
/// Plain downhill simplex with standard coefficients; the caller handles
/// bounds by clamping inside the objective. Returns the best vertex.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    scale: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = f(x0);
    simplex.push((x0.to_vec(), fx0));
    for d in 0..n {
        let mut v = x0.to_vec();
        v[d] += scale;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() <= 1e-12 * (1.0 + best.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(v, _)| v[d]).sum::<f64>() / n as f64)
            .collect();
        let xw = simplex[n].0.clone();
        let reflect: Vec<f64> = (0..n).map(|d| 2.0 * centroid[d] - xw[d]).collect();
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = (0..n).map(|d| 3.0 * centroid[d] - 2.0 * xw[d]).collect();
            let fe = f(&expand);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = (0..n).map(|d| 0.5 * (centroid[d] + xw[d])).collect();
            let fc = f(&contract);
            if fc < simplex[n].1 {
                simplex[n] = (contract, fc);
            } else {
                // Shrink toward the best vertex.
                let x_best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for d in 0..n {
                        entry.0[d] = 0.5 * (entry.0[d] + x_best[d]);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}
