//! Small nonlinear least-squares fits with a central-difference Jacobian.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{storage::Owned, DMatrix, DVector, Dyn};

/// Result of a least-squares fit.
#[derive(Clone, Debug, PartialEq)]
pub struct Fit {
    pub params: Vec<f64>,
    /// Largest absolute residual at the solution.
    pub max_residual: f64,
}

struct Problem<'a, F> {
    x: DVector<f64>,
    m: usize,
    f: &'a F,
}

impl<F> Problem<'_, F>
where
    F: Fn(&[f64], &mut [f64]),
{
    fn eval(&self, x: &[f64]) -> DVector<f64> {
        let mut r = vec![0.0; self.m];
        (self.f)(x, &mut r);
        DVector::from_vec(r)
    }
}

impl<F> LeastSquaresProblem<f64, Dyn, Dyn> for Problem<'_, F>
where
    F: Fn(&[f64], &mut [f64]),
{
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        self.x.copy_from(x);
    }

    fn params(&self) -> DVector<f64> {
        self.x.clone()
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let r = self.eval(self.x.as_slice());
        r.iter().all(|v| v.is_finite()).then_some(r)
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let n = self.x.len();
        let mut jac = DMatrix::zeros(self.m, n);
        let mut xp = self.x.as_slice().to_vec();
        for j in 0..n {
            let h = 1e-7 * (1.0 + xp[j].abs());
            let x0 = xp[j];
            xp[j] = x0 + h;
            let rp = self.eval(&xp);
            xp[j] = x0 - h;
            let rm = self.eval(&xp);
            xp[j] = x0;
            jac.set_column(j, &((rp - rm) / (2.0 * h)));
        }
        jac.iter().all(|v| v.is_finite()).then_some(jac)
    }
}

/// Minimizes the sum of squares of `m` residuals written by `f` starting from `x0`.
pub fn least_squares<F>(x0: &[f64], m: usize, f: &F) -> Option<Fit>
where
    F: Fn(&[f64], &mut [f64]),
{
    let problem = Problem {
        x: DVector::from_column_slice(x0),
        m,
        f,
    };
    let (solved, _report) = LevenbergMarquardt::new()
        .with_patience(200)
        .minimize(problem);
    let params = solved.x.as_slice().to_vec();
    let r = solved.eval(&params);
    let max_residual = r.amax();
    max_residual.is_finite().then_some(Fit {
        params,
        max_residual,
    })
}

/// Best of several starts.
pub fn least_squares_multistart<F>(starts: &[Vec<f64>], m: usize, f: &F) -> Option<Fit>
where
    F: Fn(&[f64], &mut [f64]),
{
    starts
        .iter()
        .filter_map(|x0| least_squares(x0, m, f))
        .min_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
}
