//! Leader price optimization on top of the followers' equilibrium.
//!
//! The end-to-end procedure: solve the followers' VE at the announced
//! price, recover the shared multiplier, set the revenue-optimal price
//! `p* = b_n - s_n x_n*` (the capacity-binding price), then re-solve the
//! followers at `p*` and confirm the multiplier vanishes. A closed-form
//! active-set route computes the same equilibrium analytically and serves
//! as the cross-check.

use crate::error::{Error, Result};
use crate::model::{grid_revenue, pevg_utility, Allocation, Price, Scenario};
use crate::vi::{ss_solve, SolverConfig, VeSolution, INTERIOR_EPS};

/// Multiplier below this counts as "capacity not binding".
const BIND_EPS: f64 = 1e-6;

/// Phase-2 agreement tolerance against the equilibrium-demand formula.
const CONSISTENCY_TOL: f64 = 1e-6;

/// The generalized Stackelberg equilibrium: demands, optimal price, the
/// (vanishing) multiplier at that price, grid revenue, per-PEVG utilities,
/// and the iteration total across all solver phases.
#[derive(Debug, Clone)]
pub struct GseOutcome {
    pub x_star: Allocation,
    pub p_star: Price,
    pub lambda: f64,
    pub revenue: f64,
    pub utilities: Vec<f64>,
    pub iterations_total: usize,
}

/// Result of a grid check of the equilibrium definition.
#[derive(Debug, Clone, Copy)]
pub struct GseCheck {
    pub passed: bool,
    /// Largest payoff improvement any deviation achieved.
    pub max_violation: f64,
}

/// The revenue-optimal price given a followers' equilibrium at `p_used`:
/// `p* = b_n - s_n x_n*` on the interior coordinates (they agree at a VE),
/// equivalently `p_used + lambda` when the constraint binds.
pub fn optimal_price(scenario: &Scenario, ve: &VeSolution, p_used: Price) -> Result<Price> {
    let _ = p_used;
    let mut best = f64::NEG_INFINITY;
    for (g, &xn) in scenario.pevgs.iter().zip(ve.x_star.as_slice()) {
        if xn > INTERIOR_EPS {
            best = best.max(g.b - g.s * xn);
        }
    }
    if !best.is_finite() {
        return Err(Error::Degenerate(
            "no PEVG has interior demand; the price formula needs an interior coordinate".into(),
        ));
    }
    Price::new(best.max(0.0))
}

/// Analytic equilibrium by active-set elimination.
///
/// Start with every PEVG active and iterate: the capacity-binding price is
/// `p = (sum_A b/s - C) / (sum_A 1/s)`; any member with `b <= p` leaves the
/// active set. The loop terminates because `p` only grows as members drop.
/// If the very first price is nonpositive, capacity is slack even at a free
/// grid: the price clamps to zero and every PEVG charges to satiation.
pub fn closed_form_gse(scenario: &Scenario) -> Result<GseOutcome> {
    let n = scenario.len();
    let c = scenario.capacity();
    let mut active: Vec<bool> = scenario.pevgs.iter().map(|g| g.b > 0.0).collect();
    if !active.iter().any(|&a| a) {
        return Err(Error::Degenerate("no PEVG with positive battery capacity".into()));
    }

    let p_star = loop {
        let mut sum_bs = 0.0;
        let mut sum_inv = 0.0;
        for (g, &a) in scenario.pevgs.iter().zip(&active) {
            if a {
                sum_bs += g.b / g.s;
                sum_inv += 1.0 / g.s;
            }
        }
        if sum_inv == 0.0 {
            return Err(Error::Degenerate("active set emptied during elimination".into()));
        }
        let p = (sum_bs - c) / sum_inv;
        if p <= 0.0 {
            break 0.0;
        }
        let mut dropped = false;
        for (g, a) in scenario.pevgs.iter().zip(active.iter_mut()) {
            if *a && g.b <= p {
                *a = false;
                dropped = true;
            }
        }
        if !dropped {
            break p;
        }
    };

    let p_star = Price::new(p_star)?;
    let mut x = vec![0.0; n];
    for ((g, &a), xi) in scenario.pevgs.iter().zip(&active).zip(&mut x) {
        if a {
            *xi = g.satiation(p_star);
        }
    }
    let x_star = Allocation::new(x);
    finish_outcome(scenario, x_star, p_star, 0.0, 0)
}

/// The two-phase equilibrium procedure.
///
/// Phase 1 solves the followers' VE at the announced price. A positive
/// multiplier identifies the binding price directly (`p* = p0 + lambda`).
/// When capacity is slack at the announced price — a regime outside the
/// game's scarcity premise — the followers are re-solved at a zero price,
/// whose multiplier is the binding price itself (possibly zero). Phase 2
/// re-solves at `p*` and verifies the multiplier vanishes and demands
/// match `x_n* = (b_n - p*) / s_n` on the active set.
pub fn gse_solve(scenario: &Scenario, cfg: &SolverConfig) -> Result<GseOutcome> {
    let p0 = scenario.initial_price();
    let x0 = Allocation::zeros(scenario.len());

    let phase1 = ss_solve(scenario, p0, &x0, cfg)?;
    let mut iterations = phase1.iterations;

    let (p_star, warm) = if phase1.lambda > BIND_EPS {
        (optimal_price(scenario, &phase1, p0)?, phase1)
    } else {
        log::warn!(
            "capacity is slack at the announced price {p0}; the binding-price rule \
             has no leverage there, re-solving from a zero price"
        );
        let floor = ss_solve(scenario, Price::ZERO, &x0, cfg)?;
        iterations += floor.iterations;
        let p = optimal_price(scenario, &floor, Price::ZERO)?;
        (p, floor)
    };

    let phase2 = ss_solve(scenario, p_star, &warm.x_star, cfg)?;
    iterations += phase2.iterations;

    if phase2.lambda > CONSISTENCY_TOL {
        return Err(Error::Internal(format!(
            "multiplier {:.3e} did not vanish at the optimal price {p_star}",
            phase2.lambda
        )));
    }
    for (i, (g, &xi)) in scenario.pevgs.iter().zip(phase2.x_star.as_slice()).enumerate() {
        let expected = g.satiation(p_star);
        if (xi - expected).abs() > CONSISTENCY_TOL {
            return Err(Error::Internal(format!(
                "PEVG {i} demand {xi} disagrees with the equilibrium formula {expected} at p* = {p_star}"
            )));
        }
    }

    finish_outcome(scenario, phase2.x_star, p_star, phase2.lambda, iterations)
}

fn finish_outcome(
    scenario: &Scenario,
    x_star: Allocation,
    p_star: Price,
    lambda: f64,
    iterations_total: usize,
) -> Result<GseOutcome> {
    let revenue = grid_revenue(p_star, &x_star);
    let utilities = scenario
        .pevgs
        .iter()
        .zip(x_star.as_slice())
        .map(|(g, &x)| pevg_utility(g, x.max(0.0), p_star))
        .collect::<Result<Vec<f64>>>()?;
    Ok(GseOutcome {
        x_star,
        p_star,
        lambda,
        revenue,
        utilities,
        iterations_total,
    })
}

/// Followers' VE at an arbitrary price, analytically: if the satiation
/// demands fit within capacity the multiplier is zero; otherwise the
/// multiplier solves `sum(max(0, (b - p - lambda)/s)) = C` by bisection.
pub fn ve_at_price(scenario: &Scenario, p: Price) -> (Vec<f64>, f64) {
    let c = scenario.capacity();
    let demand = |lambda: f64| -> f64 {
        scenario
            .pevgs
            .iter()
            .map(|g| ((g.b - p.value() - lambda) / g.s).max(0.0))
            .sum()
    };
    let mut lambda = 0.0;
    if demand(0.0) > c {
        let mut lo = 0.0;
        let mut hi = scenario
            .pevgs
            .iter()
            .map(|g| g.b - p.value())
            .fold(0.0_f64, f64::max);
        for _ in 0..200 {
            if hi - lo <= 1e-13 * (1.0 + hi.abs()) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if demand(mid) > c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lambda = 0.5 * (lo + hi);
    }
    let x = scenario
        .pevgs
        .iter()
        .map(|g| ((g.b - p.value() - lambda) / g.s).max(0.0))
        .collect();
    (x, lambda)
}

/// Grid verification of the equilibrium definition.
///
/// (a) No PEVG improves its utility by a unilateral feasible deviation,
/// scanned on a demand grid plus the exact best response within the
/// residual capacity. (b) No price on `[0, max(b)]` earns the grid more
/// revenue against re-equilibrated follower demands. Passes when the
/// largest observed improvement stays within `tol`.
pub fn check_gse(
    scenario: &Scenario,
    outcome: &GseOutcome,
    price_grid_step: f64,
    demand_grid_step: f64,
    tol: f64,
) -> Result<GseCheck> {
    if price_grid_step <= 0.0 || demand_grid_step <= 0.0 {
        return Err(Error::InvalidInput("grid steps must be positive".into()));
    }
    let c = scenario.capacity();
    let p_star = outcome.p_star;
    let total = outcome.x_star.total();
    let mut max_violation: f64 = 0.0;

    // Follower side: unilateral deviations against fixed opponents.
    for (n, g) in scenario.pevgs.iter().enumerate() {
        let xn = outcome.x_star[n];
        let room = (c - (total - xn)).max(0.0);
        let base = pevg_utility(g, xn.max(0.0), p_star)?;
        let mut probe = |x: f64| -> Result<()> {
            let u = pevg_utility(g, x, p_star)?;
            if u - base > max_violation {
                max_violation = u - base;
            }
            Ok(())
        };
        let mut x = 0.0;
        while x < room {
            probe(x)?;
            x += demand_grid_step;
        }
        probe(room)?;
        // Exact best response: the satiation point clamped into the room.
        probe(g.satiation(p_star).min(room))?;
    }

    // Leader side: any price against followers re-solving their game.
    let p_max = scenario.pevgs.iter().map(|g| g.b).fold(0.0_f64, f64::max);
    let mut check_price = |p: Price| {
        let (x, _) = ve_at_price(scenario, p);
        let revenue = p.value() * x.iter().sum::<f64>();
        if revenue - outcome.revenue > max_violation {
            max_violation = revenue - outcome.revenue;
        }
    };
    let mut p = 0.0;
    while p < p_max {
        check_price(Price::new(p)?);
        p += price_grid_step;
    }
    check_price(Price::new(p_max)?);
    check_price(p_star);

    Ok(GseCheck {
        passed: max_violation <= tol,
        max_violation,
    })
}

/// True when the followers' satiation demands at the announced price
/// already fit within capacity, the regime the binding-price rule does not
/// cover (its revenue claim assumes scarcity).
pub fn slack_capacity(scenario: &Scenario, p: Price) -> bool {
    let demand: f64 = scenario.pevgs.iter().map(|g| g.satiation(p)).sum();
    demand <= scenario.capacity()
}
