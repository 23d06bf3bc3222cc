use nalgebra::{DMatrix, DVector};

fn richardson(fine: f64, coarse: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Central-difference gradient with one Richardson step (`h` and `h/2`).
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> DVector<f64> {
    let mut y = x.to_vec();
    let mut central = |i: usize, h: f64| {
        y[i] = x[i] + h;
        let fp = f(&y);
        y[i] = x[i] - h;
        let fm = f(&y);
        y[i] = x[i];
        (fp - fm) / (2.0 * h)
    };
    DVector::from_iterator(x.len(), (0..x.len()).map(|i| richardson(central(i, h / 2.0), central(i, h))).collect::<Vec<_>>())
}

/// Hessian by central differences of a gradient, with one Richardson step.
/// Column `j` differentiates in direction `j`; the result is not symmetrized.
pub fn fd_hessian(grad: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut y = x.to_vec();
    let mut column = |j: usize, h: f64| {
        y[j] = x[j] + h;
        let gp = grad(&y);
        y[j] = x[j] - h;
        let gm = grad(&y);
        y[j] = x[j];
        gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<_>>()
    };
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let fine = column(j, h / 2.0);
        let coarse = column(j, h);
        for i in 0..n {
            out[(i, j)] = richardson(fine[i], coarse[i]);
        }
    }
    out
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
