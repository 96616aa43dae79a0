//! Acceptance gate: one PASS/FAIL line per criterion with its runtime.
//! The process exits non-zero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use singular_heat::constants::*;
use singular_heat::fields::{make_grid, sample, GridFunction, Params};
use singular_heat::scheme::{monotone_solve, Nonlinearity, SolveConfig, Solver, MONOTONICITY_SLACK};
use singular_heat::semigroup::{apply_heat, HeatOperator, DEFAULT_TAIL_TOLERANCE};
use singular_heat::verify::*;
use singular_heat::InitialData;

type Outcome = singular_heat::Result<(bool, String)>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn constants_sanity() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for q in [0.2, 0.5, 0.8] {
            worst = worst.max((eta0(q, 0.0, n)? - 1.0).abs());
            worst = worst.max((beta_gamma(q, 0.0)? - (1.0 - q)).abs());
        }
        worst = worst.max((eta1(0.0, n)? - 1.0).abs());
        worst = worst.max((eta2(0.0, n)? - 1.0).abs());
    }
    Ok((worst <= 1e-8, format!("max deviation {worst:.3e} (tol 1e-8)")))
}

fn closed_forms() -> Outcome {
    let e1 = (eta1(0.5, 1)? - common::GAMMA_QUARTER / (2.0 * std::f64::consts::PI).sqrt()).abs();
    let e1q = (eta1_quadrature(0.5, 1)? - common::GAMMA_QUARTER / (2.0 * std::f64::consts::PI).sqrt()).abs();
    let b = (beta_gamma(0.5, 1.0)? - 2.0).abs();
    let mut oracle = 0.0f64;
    for (q, g, n) in [
        (0.5, 0.3, 1),
        (0.2, 0.9, 1),
        (0.3, 0.5, 2),
        (0.5, 1.2, 2),
        (0.5, 1.5, 3),
    ] {
        let pairs = [
            (eta0(q, g, n)?, common::eta0(q, g, n)),
            (eta1_quadrature(g, n)?, common::eta1(g, n)),
            (eta2(g, n)?, common::eta2(g, n)),
            (eta_k(q, g, n, 1)?, common::eta_k(q, g, n, 1)),
            (eta_k(q, g, n, 5)?, common::eta_k(q, g, n, 5)),
            (beta_gamma(q, g)?, common::beta_gamma(q, g)),
        ];
        for (a, o) in pairs {
            oracle = oracle.max((a - o).abs());
        }
    }
    let pass = e1 <= 1e-8 && e1q <= 1e-8 && b <= 1e-10 && oracle <= 1e-6;
    Ok((
        pass,
        format!("eta1 {e1:.2e}/{e1q:.2e} (1e-8), beta {b:.2e} (1e-10), oracle {oracle:.2e} (1e-6)"),
    ))
}

fn lambda_limit() -> Outcome {
    let mut worst = (0.0f64, 0.0, 0);
    for n in 1..=3 {
        for q in [0.2, 0.5, 0.8] {
            let d = (lambda_gamma(q, 1e-3, n)? - q).abs();
            if d > worst.0 {
                worst = (d, q, n);
            }
        }
    }
    let (d, q, n) = worst;
    Ok((
        d <= 1e-3,
        format!("max |Λ(1e-3) - q| = {d:.4e} at q={q} N={n} (tol 1e-3)"),
    ))
}

fn gamma_star_existence() -> Outcome {
    let gs = gamma_star(0.5, 1)?;
    let half = lambda_gamma(0.5, gs.gamma_star / 2.0, 1)?;
    let dev = (gs.lambda_at_gamma_star - 1.0).abs();
    let pass = gs.crossed && gs.gamma_star > 0.0 && gs.gamma_star < 1.0 && dev <= 1e-8 && half < 1.0;
    Ok((
        pass,
        format!("γ* = {:.8}, |Λ(γ*)-1| = {dev:.2e}, Λ(γ*/2) = {half:.6}", gs.gamma_star),
    ))
}

fn semigroup_exactness() -> Outcome {
    let grid = make_grid(1, 12.0, 1024)?;
    let u0 = sample(|x| (-0.25 * x[0] * x[0]).exp(), &grid)?;
    let mut err = 0.0f64;
    let mut mass = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let u = apply_heat(&u0, t)?;
        let exact: Vec<f64> = (0..grid.len())
            .map(|i| common::gaussian_flow(0.25, t, &grid.node(i)[..1]))
            .collect();
        err = err.max(common::sup_diff(u.values(), &exact));
        mass = mass.max((HeatOperator::new(&grid, t, DEFAULT_TAIL_TOLERANCE)?.mass() - 1.0).abs());
    }
    Ok((
        err <= 1e-6 && mass <= 1e-10,
        format!("sup error {err:.2e} (1e-6), mass deviation {mass:.2e} (1e-10)"),
    ))
}

fn smoothing_exponent() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for g in [0.2, 0.5] {
        let r = check_smoothing_exponent(g, 1, &[0.25, 0.5, 1.0, 2.0, 4.0])?;
        pass &= r.pass;
        detail.push(format!(
            "γ={g}: slope {} intercept {}",
            r.parameters["slope"], r.parameters["intercept"]
        ));
    }
    Ok((pass, detail.join("; ")))
}

fn ode_recovery() -> Outcome {
    let grid = make_grid(1, 12.0, 256)?;
    let params = Params::new(1, 0.5, 0.0)?;
    let u0 = GridFunction::constant(grid, 1.0);
    let solver = Solver::new(&grid, &params, &SolveConfig::default())?;
    let mesh = solver.mesh_for(Nonlinearity::Power, &u0)?;
    let u = solver.solve(&u0, Nonlinearity::Power, &mesh)?.final_snapshot().values()[grid.nearest_origin()];
    let exact = common::separable_ode(1.0, 0.5, 1.0);

    let config = SolveConfig {
        n_schedule: SolveConfig::doubling_schedule(16),
        early_stop: false,
        ..SolveConfig::default()
    };
    let traj = monotone_solve(&GridFunction::zeros(grid), &params, &config)?;
    let m = traj.final_snapshot().values()[grid.nearest_origin()];
    let pass = (u - exact).abs() <= 1e-3 && (m - 0.25).abs() <= 5e-3;
    Ok((
        pass,
        format!("constant data {u:.8} (exact {exact}), maximal from zero {m:.6} (0.25 ± 5e-3)"),
    ))
}

fn subsolution() -> Outcome {
    let cases = [
        (Params::new(1, 0.5, 0.3)?, make_grid(1, 12.0, 512)?),
        (Params::new(1, 0.5, 0.6)?, make_grid(1, 12.0, 512)?),
        (Params::new(2, 0.3, 0.5)?, make_grid(2, 10.0, 128)?),
    ];
    let mut pass = true;
    let mut margins = Vec::new();
    for (p, grid) in &cases {
        let r = check_subsolution(p, grid, &[0.25, 1.0], 1e-3)?;
        pass &= r.pass && r.worst_margin >= -1e-3;
        margins.push(format!("{:.3e}", r.worst_margin));
    }
    Ok((pass, format!("margins [{}] (≥ -1e-3)", margins.join(", "))))
}

fn lower_bound() -> Outcome {
    let grid = default_grid(1)?;
    let config = SolveConfig {
        output_times: vec![0.5, 1.0, 2.0],
        ..SolveConfig::default()
    };
    let mut pass = true;
    let mut worst = f64::INFINITY;
    for data in [InitialData::Zero, InitialData::Bump] {
        for g in [0.0, 0.3] {
            let params = Params::new(1, 0.5, g)?;
            let traj = monotone_solve(&data.sample(&grid)?, &params, &config)?;
            let r = check_lower_bound(&traj, &params, 5e-3)?;
            pass &= r.pass;
            worst = worst.min(r.worst_margin);
        }
    }
    Ok((pass, format!("worst margin {worst:.4e} (≥ -5e-3)")))
}

fn monotone_structure() -> Outcome {
    let grid = default_grid(1)?;
    let params = Params::new(1, 0.5, 0.3)?;
    let config = SolveConfig {
        output_times: vec![0.5, 1.0],
        early_stop: false,
        ..SolveConfig::default()
    };
    let bump = InitialData::Bump.sample(&grid)?;
    // monotone_solve itself errors on a violation beyond the slack
    let traj = monotone_solve(&bump, &params, &config)?;
    let mono = traj
        .metadata
        .monotonicity_margins
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let against_zero = check_comparison(&bump, &GridFunction::zeros(grid), &params, &config, 1e-6)?;
    let against_half = check_comparison(&bump, &bump.scale(0.5), &params, &config, 1e-6)?;
    let pass = mono >= -MONOTONICITY_SLACK && against_zero.pass && against_half.pass;
    Ok((
        pass,
        format!(
            "min u_n - u_2n {mono:.3e} (≥ -1e-8); comparison margins {:.3e}, {:.3e} (≥ -1e-6)",
            against_zero.worst_margin, against_half.worst_margin
        ),
    ))
}

fn gronwall() -> Outcome {
    let exp_case = GronwallInstance {
        a: 1.0,
        m: 1.0,
        alpha: 0.0,
        t: 1.0,
    };
    let psi = gronwall_extremal(&exp_case, 4096)?;
    let exp_err = psi.iter().map(|(t, v)| (v - t.exp()).abs()).fold(0.0, f64::max);
    let half = check_gronwall(
        &GronwallInstance {
            a: 1.0,
            m: 1.0,
            alpha: 0.5,
            t: 1.0,
        },
        4096,
    )?;
    let zero = gronwall_extremal(
        &GronwallInstance {
            a: 0.0,
            m: 1.0,
            alpha: 0.5,
            t: 1.0,
        },
        4096,
    )?;
    let zero_sup = zero.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let pass = exp_err <= 1e-6 && half.worst_margin >= -1e-4 && half.pass && zero_sup <= 1e-12;
    Ok((
        pass,
        format!(
            "|ψ - e^t| {exp_err:.2e} (1e-6), α=½ margin {:.3e} (≥ -1e-4), A=0 sup {zero_sup:.1e} (1e-12)",
            half.worst_margin
        ),
    ))
}

fn maximum_and_heaviside() -> Outcome {
    let grid = make_grid(2, 8.0, 64)?;
    let mut profiles_pass = true;
    for p in RadialProfile::random_family(20, 11) {
        profiles_pass &= check_max_at_origin(&p, 1.0, &grid)?.pass;
    }
    let r = check_heaviside_gap(&[0.01, 1.0], &make_grid(1, 20.0, 131_072)?)?;
    let gaps: Vec<f64> = serde_json::from_value(r.parameters["gaps"].clone())?;
    let gaps_ok = gaps.iter().all(|g| (g - 0.5).abs() <= 1e-3);
    Ok((
        profiles_pass && gaps_ok && r.pass,
        format!(
            "20 profiles {}, gaps {gaps:?} (0.5 ± 1e-3)",
            if profiles_pass { "ok" } else { "failed" }
        ),
    ))
}

fn property_suite() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (k, q) in [0.2, 0.5, 0.8].into_iter().enumerate() {
        let a = check_g_n_properties(q, 10_000, 100 + k as u64)?;
        let b = check_positive_part_sweep(q, 10_000, 200 + k as u64)?;
        pass &= a.pass && b.pass;
        detail.push(format!(
            "q={q}: g_n {:.2e}, [·]₊ {:.2e}",
            a.worst_margin, b.worst_margin
        ));
    }
    Ok((pass, detail.join("; ")))
}

fn ck_fixed_point() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    for (q, g) in [(0.5, 0.3), (0.2, 0.6), (0.8, 0.1)] {
        let seq = ck_sequence(q, g, 1, 1.0, 200)?;
        let fixed = ((1.0 - q) * common::eta0(q, g, 1)).powf(1.0 / (1.0 - q));
        let d = (seq.values[199] - fixed).abs();
        worst = worst.max(d);
        pass &= d <= 1e-6;
        pass &= seq
            .values
            .iter()
            .zip(&seq.lower_bounds)
            .all(|(c, lb)| *c >= lb * (1.0 - 1e-12));
    }
    Ok((
        pass,
        format!("max |C_200 - fixed point| {worst:.2e} (1e-6), lower bounds held: {pass}"),
    ))
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "constants sanity",
            limit: secs(5),
            run: constants_sanity,
        },
        Criterion {
            id: 2,
            name: "closed-form cross-checks",
            limit: secs(30),
            run: closed_forms,
        },
        Criterion {
            id: 3,
            name: "Λ limit at γ = 1e-3",
            limit: secs(10),
            run: lambda_limit,
        },
        Criterion {
            id: 4,
            name: "γ* existence",
            limit: secs(10),
            run: gamma_star_existence,
        },
        Criterion {
            id: 5,
            name: "semigroup exactness",
            limit: secs(5),
            run: semigroup_exactness,
        },
        Criterion {
            id: 6,
            name: "smoothing exponent",
            limit: secs(30),
            run: smoothing_exponent,
        },
        Criterion {
            id: 7,
            name: "exact ODE recovery",
            limit: secs(120),
            run: ode_recovery,
        },
        Criterion {
            id: 8,
            name: "sub-solution inequality",
            limit: secs(300),
            run: subsolution,
        },
        Criterion {
            id: 9,
            name: "lower bound",
            limit: secs(300),
            run: lower_bound,
        },
        Criterion {
            id: 10,
            name: "monotone scheme structure",
            limit: secs(300),
            run: monotone_structure,
        },
        Criterion {
            id: 11,
            name: "Gronwall / Mittag-Leffler",
            limit: secs(30),
            run: gronwall,
        },
        Criterion {
            id: 12,
            name: "maximum at origin and Heaviside gap",
            limit: secs(60),
            run: maximum_and_heaviside,
        },
        Criterion {
            id: 13,
            name: "g_n and positive-part properties",
            limit: secs(5),
            run: property_suite,
        },
        Criterion {
            id: 14,
            name: "C_k fixed point",
            limit: secs(5),
            run: ck_fixed_point,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && elapsed <= c.limit, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {:<38} {:>8.2}s (limit {}s)  {detail}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
