#include "riccert/transform.hpp"

#include <cmath>
#include <memory>

#include "riccert/quadrature.hpp"

namespace riccert {

Field LinearSystem3::field() const {
    auto sys = *this;
    return [sys](double t, const State& s, State& ds) {
        for (int j = 0; j < 3; ++j) {
            ds[j] = 0.0;
            for (int k = 0; k < 3; ++k) ds[j] += sys.a[j][k](t) * s[k];
        }
    };
}

LinearSystem3 LinearSystem3::companion(Expr p, Expr q) {
    LinearSystem3 sys;
    Expr zero = Expr::constant(0.0);
    for (auto& row : sys.a)
        for (auto& el : row) el = zero;
    sys(1, 2) = Expr::constant(1.0);
    sys(2, 3) = Expr::constant(1.0);
    sys(3, 2) = -p;
    sys(3, 1) = -q;
    return sys;
}

Field CanonicalSystem::field(const RiccatiCoefficients& co) const {
    auto self = *this;
    auto a = co.a;
    return [self, a](double t, const State& s, State& ds) {
        ds[0] = a(t) * s[1];
        ds[1] = self.X(t) * s[2];
        ds[2] = self.Y(t) * s[0] + self.Z(t) * s[1] + self.W(t) * s[2];
    };
}

namespace {

// Dense sampler of exp{int_t0^t g}: integrates u' = g(t) adaptively and
// exponentiates on sampling.
ScalarFn exponential_of_integral(std::function<double(double)> g, double t0, double t_end,
                                 double scale, const IntegrateOptions& opts) {
    Field f = [g = std::move(g)](double t, const State&, State& ds) { ds[0] = g(t); };
    auto traj = std::make_shared<Trajectory>(integrate(f, {0.0}, t0, t_end, opts));
    if (traj->status() != TrajectoryStatus::completed)
        throw OdeError("auxiliary integral for an exponential factor did not complete");
    return [traj, scale](double t) { return scale * std::exp(traj->sample(t, 0)); };
}

void check_nonvanishing(const Expr& e, const char* what, double t_a, double t_b,
                        std::size_t grid_n) {
    auto grid = uniform_grid(t_a, t_b, grid_n);
    for (double t : grid)
        if (e(t) == 0.0)
            throw PreconditionError(std::string(what) + " vanishes at t=" + std::to_string(t));
    // a sign change between grid points implies a zero crossing
    double s0 = e(grid[0]);
    for (double t : grid) {
        double v = e(t);
        if (v * s0 < 0.0)
            throw PreconditionError(std::string(what) + " changes sign near t=" +
                                    std::to_string(t));
    }
}

}  // namespace

CanonicalSystem riccati_to_canonical(const RiccatiCoefficients& co, double t0, double t_end,
                                     const IntegrateOptions& opts) {
    check_nonvanishing(co.a, "riccati_to_canonical: a(t)", t0, t_end, 501);

    auto integrand = [co](double t) {
        double a = co.a(t);
        return co.da(t) / (2.0 * a) - co.c(t) / (2.0 * a) - co.b(t) / 2.0;
    };
    CanonicalSystem canon;
    canon.t_begin = t0;
    canon.t_end = t_end;
    canon.X = exponential_of_integral(integrand, t0, t_end, 1.0, opts);
    auto X = canon.X;
    // Y and Z carry a minus sign: eliminating chi from the system leaves
    // y'' + ... - XZ y - XY = 0, so matching d and e of the scalar equation
    // needs Z = -d/X, Y = -e/X (the companion closed form pins the sign)
    canon.Y = [co, X](double t) { return -co.e(t) / X(t); };
    canon.Z = [co, X](double t) { return -co.d(t) / X(t); };
    // W solves the coefficient-matching system X'/X + W = -b and
    // a W - a X'/X + a' = c jointly with the X exponential above
    canon.W = [co](double t) {
        double a = co.a(t);
        return co.c(t) / (2.0 * a) - co.da(t) / (2.0 * a) - co.b(t) / 2.0;
    };
    return canon;
}

LiftedTriple lift_riccati_solution(const RiccatiCoefficients& co, const Trajectory& ytraj,
                                   double t1, double phi1, const CanonicalSystem& canon,
                                   const IntegrateOptions& opts) {
    if (phi1 == 0.0) throw PreconditionError("lift_riccati_solution: phi1 must be nonzero");
    if (t1 < ytraj.t_begin() || t1 >= ytraj.t_end())
        throw PreconditionError("lift_riccati_solution: t1 outside trajectory span");

    auto a = co.a;
    auto yt = std::make_shared<Trajectory>(ytraj);
    auto ay = [a, yt](double t) { return a(t) * yt->sample(t, 0); };
    ScalarFn phi = exponential_of_integral(ay, t1, ytraj.t_end(), phi1, opts);

    LiftedTriple out;
    out.t_begin = t1;
    out.t_end = ytraj.t_end();
    out.phi = phi;
    out.psi = [phi, yt](double t) { return yt->sample(t, 0) * phi(t); };
    auto X = canon.X;
    out.chi = [phi, a, X, yt](double t) {
        State s = yt->sample(t);
        return (s[1] + a(t) * s[0] * s[0]) / X(t) * phi(t);
    };
    return out;
}

Expr reduction_B(const LinearSystem3& sys) { return sys(1, 1) - sys(2, 2); }

RiccatiCoefficients reduce_system3(const LinearSystem3& sys, double t_a, double t_b,
                                   std::size_t grid_n) {
    // condition: a13 identically zero
    {
        auto grid = uniform_grid(t_a, t_b, grid_n);
        for (double t : grid)
            if (std::fabs(sys(1, 3)(t)) > 1e-12)
                throw PreconditionError("reduce_system3: a13 is not identically zero (t=" +
                                        std::to_string(t) + ")");
    }
    check_nonvanishing(sys(2, 3), "reduce_system3: a23(t)", t_a, t_b, grid_n);

    const Expr& a11 = sys(1, 1);
    const Expr& a12 = sys(1, 2);
    const Expr& a21 = sys(2, 1);
    const Expr& a22 = sys(2, 2);
    const Expr& a23 = sys(2, 3);
    const Expr& a31 = sys(3, 1);
    const Expr& a32 = sys(3, 2);
    const Expr& a33 = sys(3, 3);

    Expr trace_part = 2.0 * a11 - a22 - a33;
    Expr A = trace_part - a23.derivative() / a23;
    Expr C = a12 * trace_part + a23 * (a12 / a23).derivative();
    Expr B = a11 - a22;
    // The -a12*a21 term is required for the scalar equation to match the
    // system: expanding {(y' + a12 y^2 + B y - a21)/a23}' + (a11 - a33 + a12 y)
    // * {...} - a32 y - a31 = 0 produces it from the a12 y * (-a21) cross term.
    // It vanishes for companion systems (a21 = 0), which is why those round
    // trips cannot detect its absence.
    Expr F = B * (a11 - a33) - a23 * a32 + a23 * (B / a23).derivative() - a12 * a21;
    Expr E = (a33 - a11) * a21 - a23 * a31 - a23 * (a21 / a23).derivative();

    return RiccatiCoefficients::make(a12, A, C, F, E);
}

LinearSystem3 eliminate_a13(const LinearSystem3& sys, double t_a, double t_b,
                            std::size_t grid_n) {
    check_nonvanishing(sys(1, 2), "eliminate_a13: a12(t)", t_a, t_b, grid_n);

    Expr lambda = sys(1, 3) / sys(1, 2);
    Expr dlambda = lambda.derivative();

    const Expr& a11 = sys(1, 1);
    const Expr& a12 = sys(1, 2);
    const Expr& a21 = sys(2, 1);
    const Expr& a22 = sys(2, 2);
    const Expr& a23 = sys(2, 3);
    const Expr& a31 = sys(3, 1);
    const Expr& a32 = sys(3, 2);
    const Expr& a33 = sys(3, 3);

    // with psi = eta - lambda chi (so eta = psi + lambda chi):
    //   phi' = a11 phi + a12 eta + (a13 - a12 lambda) chi, the last term zero
    //   eta' = psi' + lambda' chi + lambda chi'
    //   chi' = a31 phi + a32 (eta - lambda chi) + a33 chi
    LinearSystem3 out;
    out(1, 1) = a11;
    out(1, 2) = a12;
    out(1, 3) = Expr::constant(0.0);
    out(2, 1) = a21 + lambda * a31;
    out(2, 2) = a22 + lambda * a32;
    out(2, 3) = a23 + dlambda + lambda * (a33 - a22) - lambda * lambda * a32;
    out(3, 1) = a31;
    out(3, 2) = a32;
    out(3, 3) = a33 - lambda * a32;
    return out;
}

LiftedTriple lift_sys3_solution(const LinearSystem3& sys, const RiccatiCoefficients&,
                                const Trajectory& ytraj, double t1, double phi1,
                                const IntegrateOptions& opts) {
    if (phi1 == 0.0) throw PreconditionError("lift_sys3_solution: phi1 must be nonzero");
    if (t1 < ytraj.t_begin() || t1 >= ytraj.t_end())
        throw PreconditionError("lift_sys3_solution: t1 outside trajectory span");

    Expr a11 = sys(1, 1);
    Expr a12 = sys(1, 2);
    Expr a21 = sys(2, 1);
    Expr a23 = sys(2, 3);
    Expr B = reduction_B(sys);

    auto yt = std::make_shared<Trajectory>(ytraj);
    auto growth = [a11, a12, yt](double t) { return a11(t) + a12(t) * yt->sample(t, 0); };
    ScalarFn phi = exponential_of_integral(growth, t1, ytraj.t_end(), phi1, opts);

    LiftedTriple out;
    out.t_begin = t1;
    out.t_end = ytraj.t_end();
    out.phi = phi;
    out.psi = [phi, yt](double t) { return yt->sample(t, 0) * phi(t); };
    out.chi = [phi, a12, a21, a23, B, yt](double t) {
        State s = yt->sample(t);
        return (s[1] + a12(t) * s[0] * s[0] + B(t) * s[0] - a21(t)) / a23(t) * phi(t);
    };
    return out;
}

}  // namespace riccert
