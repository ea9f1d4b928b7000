#include "riccert/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riccert/quadrature.hpp"

namespace riccert {
namespace {

// 2-D Kronecker sequence based on the plastic constant; deterministic and
// well spread for small counts.
double frac(double x) { return x - std::floor(x); }

std::pair<double, double> kronecker2(int i) {
    constexpr double g = 1.32471795724474602596;  // plastic constant
    const double a1 = 1.0 / g;
    const double a2 = 1.0 / (g * g);
    return {frac(0.5 + a1 * (i + 1)), frac(0.5 + a2 * (i + 1))};
}

}  // namespace

std::vector<InitialCondition> sample_admissible_ics(const Certificate& cert, int count) {
    if (cert.verdict != Verdict::certified)
        throw HarnessError("sample_admissible_ics requires a certified certificate");
    if (!cert.admissible)
        throw HarnessError("certificate carries no admissible initial-condition region");
    const auto& r = *cert.admissible;
    if (!(r.y_hi >= r.y_lo)) throw HarnessError("empty admissible region");

    std::vector<InitialCondition> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        auto [u, v] = kronecker2(i);
        double y0 = r.y_lo + u * (r.y_hi - r.y_lo);
        auto [dlo, dhi] = r.dy_bounds(y0);
        if (dlo > dhi) {
            // degenerate slice; fall back to the nu-feasible single point
            double mid = 0.5 * (dlo + dhi);
            out.push_back({y0, mid});
            continue;
        }
        out.push_back({y0, dlo + v * (dhi - dlo)});
    }
    return out;
}

namespace {

ICOutcome run_one_ic(const RiccatiProblem& problem, const Certificate& cert,
                     InitialCondition ic, double horizon, double tol,
                     const IntegrateOptions& opts) {
    ICOutcome out;
    out.ic = ic;
    if (cert.admissible) {
        const auto& r = *cert.admissible;
        auto [dlo, dhi] = r.dy_bounds(ic.y0);
        out.admissible = ic.y0 >= r.y_lo - tol && ic.y0 <= r.y_hi + tol &&
                         ic.dy0 >= dlo - tol && ic.dy0 <= dhi + tol;
    }
    Field field = assemble_field(problem.co);
    Trajectory traj = integrate(field, {ic.y0, ic.dy0}, problem.t_a, horizon, opts);

    if (traj.status() == TrajectoryStatus::escaped) {
        out.kind = ICOutcomeKind::escaped;
        out.t_worst = traj.t_end();
        out.pass = false;
        return out;
    }
    if (traj.status() == TrajectoryStatus::stalled) {
        out.kind = ICOutcomeKind::stalled;
        out.t_worst = traj.t_end();
        out.pass = true;  // reported, not a refutation
        return out;
    }

    out.bound_margin = std::numeric_limits<double>::infinity();
    out.nu_margin = std::numeric_limits<double>::infinity();
    auto grid = uniform_grid(problem.t_a, traj.t_end(), 1001);
    State s;
    for (double t : grid) {
        traj.sample(t, s);
        double lo = cert.lower_bound(t), hi = cert.upper_bound(t);
        double bm = std::min(s[0] - lo, hi - s[0]);
        if (bm < out.bound_margin) {
            out.bound_margin = bm;
            out.t_worst = t;
        }
        double nu_hi = nu(problem.co, t, hi, s[0], cert.upper_deriv(t), s[1]);
        double nu_lo = -nu(problem.co, t, lo, s[0], cert.lower_deriv(t), s[1]);
        out.nu_margin = std::min({out.nu_margin, nu_hi, nu_lo});
    }
    bool held = out.bound_margin >= -tol && out.nu_margin >= -tol;
    out.kind = held ? ICOutcomeKind::bounds_held : ICOutcomeKind::bounds_violated;
    out.pass = held;
    return out;
}

}  // namespace

VerificationReport verify_conclusion(const RiccatiProblem& problem, const Certificate& cert,
                                     const std::vector<InitialCondition>& ics, double horizon,
                                     double tol, const IntegrateOptions& opts) {
    if (cert.verdict != Verdict::certified)
        throw HarnessError("verify_conclusion requires a certified certificate");
    if (!cert.lower_bound || !cert.upper_bound)
        throw HarnessError("certificate carries no conclusion fences");

    VerificationReport rep;
    rep.theorem = cert.theorem;
    rep.pass = true;
    for (const auto& ic : ics) {
        auto outcome = run_one_ic(problem, cert, ic, horizon, tol, opts);
        if (outcome.kind == ICOutcomeKind::stalled) ++rep.stalled_count;
        rep.pass = rep.pass && (outcome.pass || !outcome.admissible);
        rep.outcomes.push_back(outcome);
    }
    return rep;
}

VerificationReport verify_nonoscillation_conclusion(const LinearSystem3& sys,
                                                    const Certificate& cert,
                                                    const std::vector<InitialCondition>& ics,
                                                    double horizon, double tol,
                                                    const IntegrateOptions& opts) {
    if (!cert.reduced) throw HarnessError("certificate carries no reduced coefficients");
    RiccatiProblem problem;
    problem.co = *cert.reduced;
    problem.t_a = cert.t_a;
    problem.t_b = cert.t_b;

    VerificationReport rep = verify_conclusion(problem, cert, ics, horizon, tol, opts);
    rep.theorem = "T5.1";
    rep.phi_min = std::numeric_limits<double>::infinity();
    rep.lift_max_diff = 0.0;
    // The T5.1 conclusion is non-oscillation (phi != 0), not the scalar
    // fences; the per-IC scalar outcomes above stay in the report as
    // informational evidence but do not decide the verdict.
    rep.pass = true;
    // phi grows like exp(int a11 + a12 y); that is legitimate growth of a
    // linear system, never finite-time escape, so lift the escape guard.
    IntegrateOptions sys_opts = opts;
    sys_opts.escape_threshold = 1e300;

    Field sys_field = sys.field();
    Expr B = reduction_B(sys);
    const Expr& a12 = sys(1, 2);
    const Expr& a21 = sys(2, 1);
    const Expr& a23 = sys(2, 3);
    const double t0 = cert.t_a;
    const double phi1 = 1.0;

    for (const auto& ic : ics) {
        double chi1 =
            (ic.dy0 + a12(t0) * ic.y0 * ic.y0 + B(t0) * ic.y0 - a21(t0)) / a23(t0) * phi1;
        Trajectory direct =
            integrate(sys_field, {phi1, ic.y0 * phi1, chi1}, t0, horizon, sys_opts);
        if (direct.status() != TrajectoryStatus::completed) {
            rep.pass = false;
            continue;
        }
        Trajectory ytraj =
            integrate(assemble_field(problem.co), {ic.y0, ic.dy0}, t0, horizon, sys_opts);
        if (ytraj.status() != TrajectoryStatus::completed) {
            rep.pass = false;
            continue;
        }
        LiftedTriple lift = lift_sys3_solution(sys, problem.co, ytraj, t0, phi1, sys_opts);
        for (double t : uniform_grid(t0, horizon, 501)) {
            double phi_direct = direct.sample(t, 0);
            rep.phi_min = std::min(rep.phi_min, std::fabs(phi_direct));
            // relative agreement: phi spans many orders of magnitude
            rep.lift_max_diff =
                std::max(rep.lift_max_diff, std::fabs(phi_direct - lift.phi(t)) /
                                                std::max(1.0, std::fabs(phi_direct)));
        }
    }
    if (rep.phi_min <= tol) rep.pass = false;
    return rep;
}

double brute_force_gamma_min(const RiccatiCoefficients& co, double t, double box_radius,
                             std::size_t n) {
    if (n < 100) n = 100;
    // Gamma(t, u, v) = a^2 (u^2 + uv + v^2) + (c - (3/2)a')(u + v) + (d - b');
    // the t-dependent values are hoisted so the grid scan is pure arithmetic.
    const double k2 = co.a(t) * co.a(t);
    const double k1 = co.c(t) - 1.5 * co.da(t);
    const double k0 = co.d(t) - co.db(t);
    auto scan = [&](double ulo, double uhi, double vlo, double vhi, std::size_t m, double& bu,
                    double& bv) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            double u = ulo + (uhi - ulo) * static_cast<double>(i) / static_cast<double>(m - 1);
            for (std::size_t j = 0; j < m; ++j) {
                double v =
                    vlo + (vhi - vlo) * static_cast<double>(j) / static_cast<double>(m - 1);
                double g = k2 * (u * u + u * v + v * v) + k1 * (u + v) + k0;
                if (g < best) {
                    best = g;
                    bu = u;
                    bv = v;
                }
            }
        }
        return best;
    };
    double bu = 0.0, bv = 0.0;
    double best = scan(-box_radius, box_radius, -box_radius, box_radius, n, bu, bv);
    double cell = 2.0 * box_radius / static_cast<double>(n - 1);
    double bu2 = bu, bv2 = bv;
    double refined = scan(bu - cell, bu + cell, bv - cell, bv + cell, 10 * 2 + 1, bu2, bv2);
    return std::min(best, refined);
}

ComparisonReport verify_comparison_lemma(const RiccatiCoefficients& co, double witness,
                                         const Trajectory& ytraj, WitnessSide side, double tol) {
    const double t1 = ytraj.t_begin();
    State s0 = ytraj.state(0);
    double init_nu = nu(co, t1, witness, s0[0], 0.0, s0[1]);
    if (side == WitnessSide::upper) {
        if (witness < s0[0] || init_nu < -tol)
            throw HarnessError("inadmissible initial data for the upper comparison lemma");
    } else {
        if (witness > s0[0] || init_nu > tol)
            throw HarnessError("inadmissible initial data for the lower comparison lemma");
    }

    ComparisonReport rep;
    rep.comparison_margin = std::numeric_limits<double>::infinity();
    rep.nu_margin = std::numeric_limits<double>::infinity();
    State s;
    for (double t : uniform_grid(t1, ytraj.t_end(), 1001)) {
        ytraj.sample(t, s);
        double nuv = nu(co, t, witness, s[0], 0.0, s[1]);
        if (side == WitnessSide::upper) {
            rep.comparison_margin = std::min(rep.comparison_margin, witness - s[0]);
            rep.nu_margin = std::min(rep.nu_margin, nuv);
        } else {
            rep.comparison_margin = std::min(rep.comparison_margin, s[0] - witness);
            rep.nu_margin = std::min(rep.nu_margin, -nuv);
        }
    }
    rep.pass = rep.comparison_margin >= -tol && rep.nu_margin >= -tol;
    return rep;
}

ContinuationReport verify_continuation(const RiccatiCoefficients& co, const Trajectory& ytraj,
                                       double t2, double bound_threshold,
                                       const IntegrateOptions& opts) {
    const double t1 = ytraj.t_begin();
    double t_hi = std::min(t2, ytraj.t_end());

    ContinuationReport rep;
    auto grid = uniform_grid(t1, t_hi, 2001);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        f[i] = co.a(grid[i]) * ytraj.sample(grid[i], 0);
    auto cum = cumulative_simpson(f, grid[1] - grid[0]);
    rep.f_min = *std::min_element(cum.begin(), cum.end());
    rep.hypothesis_holds = rep.f_min > bound_threshold;
    if (!rep.hypothesis_holds) return rep;  // the lemma makes no claim

    double target = t2 + 0.1 * (t2 - t1);
    Trajectory cont = integrate(assemble_field(co), ytraj.state(0), t1, target, opts);
    rep.t_reached = cont.t_end();
    rep.continued = cont.status() == TrajectoryStatus::completed;
    return rep;
}

}  // namespace riccert
