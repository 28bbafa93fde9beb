//! Variational-inequality machinery for the followers' game at a fixed price.
//!
//! The followers' generalized Nash game reduces to VI(X, F) over
//! `X = {x : x >= 0, sum(x) <= C}` with the strongly monotone map
//! `F_n(x) = s_n x_n + p - b_n`. The solver is the Solodov–Svaiter
//! hyperplane-projection method: each iteration projects onto X, runs an
//! Armijo search along the residual to find a separating point `z`, then
//! projects the iterate onto the intersection of X with the half-space
//! `{x : <F(z), x - z> <= 0}`.

use crate::error::{Error, Result};
use crate::model::{capacity_condition, feasible, Allocation, Price, Scenario, FEASIBILITY_TOL};

/// Coordinates above this are treated as interior when recovering the
/// shared multiplier; below it the nonnegativity constraint is active.
pub const INTERIOR_EPS: f64 = 1e-7;

/// Bracket width at which the nested projection bisections stop.
const BISECT_TOL: f64 = 1e-12;

/// Hard cap on bisection steps (well past f64 resolution for any bracket).
const BISECT_MAX_STEPS: usize = 200;

/// Armijo backtracks allowed before concluding the monotonicity
/// assumption is violated.
const ARMIJO_MAX_BACKTRACKS: usize = 60;

/// Tuning for the hyperplane-projection solver. The Armijo constants are
/// standard choices; the underlying method fixes none of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop when the natural-residual norm drops below this.
    pub tol: f64,
    /// Iteration cap; exceeding it is a reported outcome, not a panic.
    pub max_iter: usize,
    /// Armijo acceptance parameter, in (0, 1).
    pub sigma: f64,
    /// Backtracking ratio, in (0, 1).
    pub gamma: f64,
    /// Initial trial step.
    pub eta0: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-8,
            max_iter: 10_000,
            sigma: 0.3,
            gamma: 0.5,
            eta0: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be >= 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must lie in (0,1), got {}",
                self.sigma
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidInput(format!(
                "gamma must lie in (0,1), got {}",
                self.gamma
            )));
        }
        if !(self.eta0 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "eta0 must be > 0, got {}",
                self.eta0
            )));
        }
        Ok(())
    }

    /// Same constants, different stopping tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// One solver step, for convergence traces: the iterate, the separating
/// point found by the Armijo search, the accepted step, and the
/// natural-residual norm at the iterate.
#[derive(Debug, Clone)]
pub struct SsIterate {
    pub x_k: Allocation,
    pub z_k: Vec<f64>,
    pub eta_k: f64,
    pub residual: f64,
}

/// Converged followers' equilibrium at a fixed price.
#[derive(Debug, Clone)]
pub struct VeSolution {
    pub x_star: Allocation,
    /// Shared multiplier of the capacity constraint, >= 0.
    pub lambda: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
}

/// The VI map `F_n = s_n x_n + p - b_n` (negated utility gradients).
pub fn game_map(scenario: &Scenario, x: &Allocation, p: Price) -> Result<Vec<f64>> {
    if x.len() != scenario.len() {
        return Err(Error::InvalidInput(format!(
            "allocation has {} entries for {} PEVGs",
            x.len(),
            scenario.len()
        )));
    }
    Ok(game_map_raw(scenario, x.as_slice(), p))
}

fn game_map_raw(scenario: &Scenario, x: &[f64], p: Price) -> Vec<f64> {
    scenario
        .pevgs
        .iter()
        .zip(x)
        .map(|(g, &xn)| g.s * xn + p.value() - g.b)
        .collect()
}

/// Diagonal of the Jacobian of F: the satisfaction parameters. All entries
/// positive certifies strong monotonicity of the VI.
pub fn jacobian_diag(scenario: &Scenario) -> Vec<f64> {
    scenario.pevgs.iter().map(|g| g.s).collect()
}

/// Euclidean projection onto `X = {x : x >= 0, sum(x) <= C}`.
///
/// If clamping at zero already satisfies the cap, that is the projection;
/// otherwise the unique simplex multiplier `tau` with
/// `sum(max(y_n - tau, 0)) = C` is found by bisection.
pub fn project_feasible(y: &[f64], c: f64) -> Allocation {
    let clamped: Vec<f64> = y.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total <= c {
        return Allocation::new(clamped);
    }
    // sum(max(y - tau, 0)) is continuous, non-increasing in tau;
    // it exceeds C at tau = 0 and vanishes at tau = max(y).
    let mut lo = 0.0;
    let mut hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(0.0);
    for _ in 0..BISECT_MAX_STEPS {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s: f64 = y.iter().map(|&v| (v - mid).max(0.0)).sum();
        if s > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Take the feasible side of the bracket so the cap is never exceeded.
    Allocation::new(y.iter().map(|&v| (v - hi).max(0.0)).collect())
}

/// Euclidean projection onto `X ∩ {x : <normal, x - anchor> <= 0}`.
///
/// Solved on the two-multiplier dual: for a trial half-space multiplier
/// `mu`, the candidate is `Proj_X(y - mu * normal)`; the inner product with
/// `normal` is non-increasing in `mu`, so the binding `mu` is bisected, with
/// the simplex multiplier handled inside `project_feasible`.
pub fn project_capped_halfspace(
    y: &[f64],
    c: f64,
    normal: &[f64],
    anchor: &[f64],
) -> Result<Vec<f64>> {
    if normal.iter().all(|&a| a == 0.0) {
        return Err(Error::InvalidInput("half-space normal must be nonzero".into()));
    }
    if y.len() != normal.len() || y.len() != anchor.len() {
        return Err(Error::InvalidInput("projection vector lengths differ".into()));
    }
    let rhs: f64 = dot(normal, anchor);
    let scale = 1.0 + rhs.abs() + normal.iter().map(|a| a.abs()).fold(0.0, f64::max) * c;

    let violation = |w: &[f64]| dot(normal, w) - rhs;

    // Unconstrained-in-H candidate first.
    let candidate = project_feasible(y, c);
    if violation(candidate.as_slice()) <= 1e-12 * scale {
        return Ok(candidate.into_vec());
    }

    // The linear form attains its minimum over X at a vertex; if even that
    // violates the half-space, the intersection is empty.
    let lin_min = normal.iter().map(|&a| a * c).fold(0.0_f64, f64::min);
    if lin_min - rhs > 1e-9 * scale {
        return Err(Error::Internal(
            "projection target X ∩ H is empty (half-space does not meet the feasible set)".into(),
        ));
    }

    let shifted = |mu: f64| -> Vec<f64> {
        let v: Vec<f64> = y.iter().zip(normal).map(|(&yi, &ai)| yi - mu * ai).collect();
        project_feasible(&v, c).into_vec()
    };

    // violation(shifted(mu)) is non-increasing in mu; bracket then bisect.
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while violation(&shifted(hi)) > 0.0 {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 80 {
            break; // touching intersection; bisection below still converges
        }
    }
    for _ in 0..BISECT_MAX_STEPS {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if violation(&shifted(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(shifted(hi))
}

/// Armijo search along the residual direction: returns `z = x - eta * r`
/// with `eta = eta0 * gamma^m` for the smallest `m >= 0` satisfying
/// `<F(z), r> >= sigma * ||r||^2`.
pub fn armijo_search(
    scenario: &Scenario,
    x: &Allocation,
    r: &[f64],
    p: Price,
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, f64)> {
    let rr = dot(r, r);
    if rr == 0.0 {
        return Err(Error::InvalidInput("armijo search needs a nonzero residual".into()));
    }
    let threshold = cfg.sigma * rr;
    let mut eta = cfg.eta0;
    for _ in 0..=ARMIJO_MAX_BACKTRACKS {
        let z: Vec<f64> = x
            .as_slice()
            .iter()
            .zip(r)
            .map(|(&xi, &ri)| xi - eta * ri)
            .collect();
        let fz = game_map_raw(scenario, &z, p);
        if dot(&fz, r) >= threshold {
            return Ok((z, eta));
        }
        eta *= cfg.gamma;
    }
    Err(Error::Internal(format!(
        "armijo search failed after {ARMIJO_MAX_BACKTRACKS} backtracks; \
         the map is not monotone on this instance"
    )))
}

/// Hyperplane-projection solve of the followers' VE at price `p`.
///
/// Stops when `||x - Proj_X(x - F(x))|| <= cfg.tol`; the shared multiplier
/// is recovered from the interior coordinates as
/// `max_n (b_n - s_n x_n - p)`, clamped at zero.
pub fn ss_solve(
    scenario: &Scenario,
    p: Price,
    x0: &Allocation,
    cfg: &SolverConfig,
) -> Result<VeSolution> {
    ss_solve_inner(scenario, p, x0, cfg, &mut |_| {})
}

/// Same as [`ss_solve`] but records every iterate for convergence plots.
pub fn ss_solve_traced(
    scenario: &Scenario,
    p: Price,
    x0: &Allocation,
    cfg: &SolverConfig,
) -> Result<(VeSolution, Vec<SsIterate>)> {
    let mut trace = Vec::new();
    let sol = ss_solve_inner(scenario, p, x0, cfg, &mut |it| trace.push(it.clone()))?;
    Ok((sol, trace))
}

fn ss_solve_inner(
    scenario: &Scenario,
    p: Price,
    x0: &Allocation,
    cfg: &SolverConfig,
    observe: &mut dyn FnMut(&SsIterate),
) -> Result<VeSolution> {
    cfg.validate()?;
    if x0.len() != scenario.len() {
        return Err(Error::InvalidInput(format!(
            "starting point has {} entries for {} PEVGs",
            x0.len(),
            scenario.len()
        )));
    }
    if !feasible(scenario, x0, FEASIBILITY_TOL) {
        return Err(Error::InvalidInput("starting point is infeasible".into()));
    }
    if !capacity_condition(scenario, x0, p) {
        log::warn!(
            "capacity condition sum(b) > p*N + sum(s*x) fails at the starting point; \
             the game may be trivial at price {p}"
        );
    }

    let c = scenario.capacity();
    let mut x = x0.clone();
    let mut residual = f64::INFINITY;

    for k in 0..cfg.max_iter {
        let f = game_map_raw(scenario, x.as_slice(), p);
        let step: Vec<f64> = x.as_slice().iter().zip(&f).map(|(&xi, &fi)| xi - fi).collect();
        let proj = project_feasible(&step, c);
        let r: Vec<f64> = x
            .as_slice()
            .iter()
            .zip(proj.as_slice())
            .map(|(&xi, &pi)| xi - pi)
            .collect();
        residual = dot(&r, &r).sqrt();

        if residual <= cfg.tol {
            let lambda = extract_lambda(scenario, x.as_slice(), p);
            let kkt = kkt_residual(scenario, &x, lambda, p)?;
            return Ok(VeSolution {
                x_star: x,
                lambda,
                iterations: k,
                kkt_residual: kkt,
            });
        }

        let (z, eta) = armijo_search(scenario, &x, &r, p, cfg)?;
        let fz = game_map_raw(scenario, &z, p);
        let next = project_capped_halfspace(x.as_slice(), c, &fz, &z)?;
        observe(&SsIterate {
            x_k: x.clone(),
            z_k: z,
            eta_k: eta,
            residual,
        });
        x = Allocation::new(next);
    }

    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual,
        last: x.into_vec(),
    })
}

/// Shared multiplier from the interior coordinates: `b_n - s_n x_n - p`
/// agrees across them at the VE; zero when no coordinate is interior.
pub fn extract_lambda(scenario: &Scenario, x: &[f64], p: Price) -> f64 {
    let mut lambda = f64::NEG_INFINITY;
    for (g, &xn) in scenario.pevgs.iter().zip(x) {
        if xn > INTERIOR_EPS {
            lambda = lambda.max(g.b - g.s * xn - p.value());
        }
    }
    if lambda.is_finite() {
        lambda.max(0.0)
    } else {
        0.0
    }
}

/// KKT residual of `(x, lambda)` for the followers' game at price `p`:
/// the worst of per-coordinate stationarity (`F_n + lambda = 0` on interior
/// coordinates, `F_n + lambda >= 0` at zero), complementarity
/// `|lambda * (sum(x) - C)|`, and primal violation `max(0, sum(x) - C)`.
pub fn kkt_residual(scenario: &Scenario, x: &Allocation, lambda: f64, p: Price) -> Result<f64> {
    if x.len() != scenario.len() {
        return Err(Error::InvalidInput(format!(
            "allocation has {} entries for {} PEVGs",
            x.len(),
            scenario.len()
        )));
    }
    if lambda < 0.0 {
        return Err(Error::InvalidInput(format!(
            "multiplier must be >= 0, got {lambda}"
        )));
    }
    let f = game_map_raw(scenario, x.as_slice(), p);
    let mut stationarity: f64 = 0.0;
    for (&fi, &xi) in f.iter().zip(x.as_slice()) {
        let g = fi + lambda;
        if xi > INTERIOR_EPS {
            stationarity = stationarity.max(g.abs());
        } else {
            stationarity = stationarity.max(-g.min(0.0));
        }
    }
    let slack = x.total() - scenario.capacity();
    let complementarity = (lambda * slack).abs();
    let primal = slack.max(0.0);
    Ok(stationarity.max(complementarity).max(primal))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GridParams, PevgParams};

    fn scenario(b: &[f64], s: &[f64], c: f64, p0: f64) -> Scenario {
        let pevgs = b
            .iter()
            .zip(s)
            .map(|(&b, &s)| PevgParams::new(b, s, 0.0).unwrap())
            .collect();
        Scenario::new(GridParams::new(c, p0).unwrap(), pevgs, 0).unwrap()
    }

    fn price(p: f64) -> Price {
        Price::new(p).unwrap()
    }

    #[test]
    fn game_map_direct() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let f = game_map(&sc, &Allocation::new(vec![5.0, 5.0]), price(17.0)).unwrap();
        assert_eq!(f, vec![-18.0, -23.0]);
    }

    #[test]
    fn game_map_vanishes_at_zero_when_price_matches_capacity() {
        let sc = scenario(&[12.0, 12.0], &[1.0, 2.0], 30.0, 12.0);
        let f = game_map(&sc, &Allocation::zeros(2), price(12.0)).unwrap();
        assert_eq!(f, vec![0.0, 0.0]);
    }

    #[test]
    fn game_map_at_ve_equals_minus_lambda() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let ve = Allocation::new(vec![50.0 / 3.0, 40.0 / 3.0]);
        let f = game_map(&sc, &ve, price(17.0)).unwrap();
        let lambda = 19.0 / 3.0;
        assert!((f[0] + lambda).abs() < 1e-12);
        assert!((f[1] + lambda).abs() < 1e-12);
    }

    #[test]
    fn jacobian_is_the_satisfaction_vector() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        assert_eq!(jacobian_diag(&sc), vec![1.0, 2.0]);
        let sc = scenario(&[50.0; 5], &[1.5; 5], 99.0, 17.0);
        let d = jacobian_diag(&sc);
        assert_eq!(d, vec![1.5; 5]);
        assert!(d.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn projection_interior_clamp_and_shift() {
        assert_eq!(project_feasible(&[1.0, 2.0], 10.0).as_slice(), &[1.0, 2.0]);
        assert_eq!(project_feasible(&[-1.0, 2.0], 10.0).as_slice(), &[0.0, 2.0]);
        let p = project_feasible(&[6.0, 6.0], 10.0);
        assert!((p[0] - 5.0).abs() < 1e-9 && (p[1] - 5.0).abs() < 1e-9);
        assert!(p.total() <= 10.0 + 1e-12);
    }

    #[test]
    fn halfspace_projection_examples() {
        let w = project_capped_halfspace(&[6.0, 6.0], 10.0, &[1.0, 1.0], &[4.0, 4.0]).unwrap();
        assert!((w[0] - 4.0).abs() < 1e-9 && (w[1] - 4.0).abs() < 1e-9);

        let w = project_capped_halfspace(&[5.0, 1.0], 10.0, &[1.0, 0.0], &[3.0, 0.0]).unwrap();
        assert!((w[0] - 3.0).abs() < 1e-9 && (w[1] - 1.0).abs() < 1e-9);

        // Already inside X and H: idempotent.
        let w = project_capped_halfspace(&[2.0, 1.0], 10.0, &[1.0, 0.0], &[3.0, 0.0]).unwrap();
        assert_eq!(w, vec![2.0, 1.0]);
    }

    #[test]
    fn halfspace_rejects_zero_normal_and_empty_intersection() {
        assert!(project_capped_halfspace(&[1.0, 1.0], 10.0, &[0.0, 0.0], &[0.0, 0.0]).is_err());
        // <x, (1,1)> <= -5 is unreachable on x >= 0.
        let r = project_capped_halfspace(&[1.0, 1.0], 10.0, &[1.0, 1.0], &[-2.5, -2.5]);
        assert!(r.is_err());
    }

    #[test]
    fn armijo_hand_worked_example() {
        // 1-D: b=10, s=1, p=0, x=2 gives r = -8; eta=1 fails, eta=0.5 accepts z=6.
        let sc = scenario(&[10.0], &[1.0], 100.0, 0.0);
        let x = Allocation::new(vec![2.0]);
        let f = game_map(&sc, &x, Price::ZERO).unwrap();
        let proj = project_feasible(&[x[0] - f[0]], 100.0);
        let r = vec![x[0] - proj[0]];
        assert_eq!(r, vec![-8.0]);
        let (z, eta) = armijo_search(&sc, &x, &r, Price::ZERO, &SolverConfig::default()).unwrap();
        assert_eq!(eta, 0.5);
        assert!((z[0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn armijo_accepts_full_step_when_inequality_holds() {
        // At x far beyond the root, F(x - r) stays aligned with r.
        let sc = scenario(&[10.0], &[1.0], 100.0, 0.0);
        let x = Allocation::new(vec![20.0]);
        let f = game_map(&sc, &x, Price::ZERO).unwrap();
        let proj = project_feasible(&[x[0] - f[0]], 100.0);
        let r = vec![x[0] - proj[0]];
        let cfg = SolverConfig::default();
        let (z, eta) = armijo_search(&sc, &x, &r, Price::ZERO, &cfg).unwrap();
        assert_eq!(eta, cfg.eta0);
        // postcondition restated
        let fz = game_map_raw(&sc, &z, Price::ZERO);
        assert!(dot(&fz, &r) >= cfg.sigma * dot(&r, &r));
    }

    #[test]
    fn ss_solve_two_player_worked_instance() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let sol = ss_solve(&sc, price(17.0), &Allocation::zeros(2), &SolverConfig::default())
            .unwrap();
        assert!((sol.x_star[0] - 50.0 / 3.0).abs() < 1e-6);
        assert!((sol.x_star[1] - 40.0 / 3.0).abs() < 1e-6);
        assert!((sol.lambda - 19.0 / 3.0).abs() < 1e-6);
        assert!((sol.x_star.total() - 30.0).abs() < 1e-6);
        assert!(sol.kkt_residual <= 1e-6);
    }

    #[test]
    fn ss_solve_at_the_solution_stops_immediately() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let ve = Allocation::new(vec![50.0 / 3.0, 40.0 / 3.0]);
        let sol = ss_solve(&sc, price(17.0), &ve, &SolverConfig::default()).unwrap();
        assert!(sol.iterations <= 1);
        assert_eq!(sol.x_star, ve);
    }

    #[test]
    fn ss_solve_unconstrained_scalar() {
        let sc = scenario(&[10.0], &[1.0], 100.0, 4.0);
        let sol =
            ss_solve(&sc, price(4.0), &Allocation::zeros(1), &SolverConfig::default()).unwrap();
        assert!((sol.x_star[0] - 6.0).abs() < 1e-7);
        assert!(sol.lambda.abs() < 1e-7);
    }

    #[test]
    fn ss_solve_reports_non_convergence() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let cfg = SolverConfig {
            max_iter: 2,
            tol: 1e-15,
            ..SolverConfig::default()
        };
        match ss_solve(&sc, price(17.0), &Allocation::zeros(2), &cfg) {
            Err(Error::NonConvergence {
                iterations,
                residual,
                last,
            }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 0.0);
                assert_eq!(last.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn ss_solve_rejects_infeasible_start() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let bad = Allocation::new(vec![20.0, 20.0]);
        assert!(matches!(
            ss_solve(&sc, price(17.0), &bad, &SolverConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn kkt_residual_at_ve_and_at_origin() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let ve = Allocation::new(vec![50.0 / 3.0, 40.0 / 3.0]);
        let res = kkt_residual(&sc, &ve, 19.0 / 3.0, price(17.0)).unwrap();
        assert!(res <= 1e-8, "residual {res}");

        // x = 0 with lambda = 0: F = (-23, -33) violates F + lambda >= 0 by 33.
        let res = kkt_residual(&sc, &Allocation::zeros(2), 0.0, price(17.0)).unwrap();
        assert!((res - 33.0).abs() < 1e-12);

        // Slack capacity with lambda = 0 has zero complementarity term.
        let x = Allocation::new(vec![1.0, 1.0]);
        let res = kkt_residual(&sc, &x, 0.0, price(17.0)).unwrap();
        let f = game_map(&sc, &x, price(17.0)).unwrap();
        assert!((res - f.iter().map(|v| -v).fold(0.0_f64, f64::max)).abs() < 1e-12);
    }

    #[test]
    fn traced_solve_records_decreasing_residuals_eventually() {
        let sc = scenario(&[40.0, 50.0], &[1.0, 2.0], 30.0, 17.0);
        let (sol, trace) =
            ss_solve_traced(&sc, price(17.0), &Allocation::zeros(2), &SolverConfig::default())
                .unwrap();
        assert_eq!(trace.len(), sol.iterations);
        assert!(trace.iter().all(|it| it.eta_k > 0.0));
        let first = trace.first().unwrap().residual;
        let last = trace.last().unwrap().residual;
        assert!(last < first, "residual did not shrink: {first} -> {last}");
    }
}
