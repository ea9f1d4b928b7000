#include <cmath>
#include <random>

#include "doctest.h"
#include "riccert/riccati.hpp"

using namespace riccert;

namespace {

RiccatiCoefficients cubic_only() { return RiccatiCoefficients::constants(1, 0, 0, 0, 0); }

}  // namespace

TEST_CASE("assemble_field matches the first-order form") {
    auto field = assemble_field(cubic_only());
    State dy(2);
    field(0.0, {0.0, 1.0}, dy);
    CHECK(dy[0] == 1.0);
    CHECK(dy[1] == 0.0);

    SUBCASE("y = 2t/(1+t^2) is an exact solution when a=1, b=c=d=e=0") {
        Expr t = Expr::var();
        Expr y = 2.0 * t / (1.0 + t * t);
        Expr dy1 = y.derivative();
        Expr residual = dy1.derivative() + 3.0 * y * dy1 + Expr::pow(y, Expr::constant(3.0));
        for (int i = 0; i <= 500; ++i) {
            double tt = 5.0 * i / 500.0;
            CHECK(std::abs(residual(tt)) < 1e-9);
        }
    }

    SUBCASE("stationary root y=1 of y^3 + e with e=-1") {
        auto f = assemble_field(RiccatiCoefficients::constants(1, 0, 0, 0, -1));
        f(2.0, {1.0, 0.0}, dy);
        CHECK(dy[0] == 0.0);
        CHECK(dy[1] == 0.0);
    }
}

TEST_CASE("nu formula and antisymmetry") {
    auto co = RiccatiCoefficients::constants(2, 3, 0, 0, 0);
    CHECK(nu(co, 0.7, 1, 0, 0, 0) == doctest::Approx(6.0));
    for (double u : {-2.0, 0.0, 1.5})
        for (double w : {-1.0, 3.0}) CHECK(nu(co, 0.0, u, u, w, w) == 0.0);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    auto co2 = RiccatiCoefficients::make(parse("1+t^2/9"), parse("sin(t)"), parse("t"),
                                         parse("cos(2*t)"), parse("1"));
    for (int i = 0; i < 100; ++i) {
        double t = dist(rng), u = dist(rng), v = dist(rng), u1 = dist(rng), v1 = dist(rng);
        CHECK(nu(co2, t, u, v, u1, v1) + nu(co2, t, v, u, v1, u1) == 0.0);
    }
}

TEST_CASE("gamma and jfun") {
    auto co = cubic_only();
    for (double u : {-3.0, 0.0, 2.0}) CHECK(jfun(co, 1.0, u, u) == 0.0);
    CHECK(gamma(co, 0.0, 1.0, 2.0) == doctest::Approx(7.0));  // u^2 + uv + v^2
    CHECK(gamma(co, 0.0, 0.0, 0.0) == 0.0);
    auto co_d = RiccatiCoefficients::constants(1, 0, 0, 1, 0);
    CHECK(gamma(co_d, 0.0, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(jfun(co_d, 0.0, 2.0, -1.0) ==
          doctest::Approx(3.0 * gamma(co_d, 0.0, 2.0, -1.0)));
}

TEST_CASE("gamma_min closed form") {
    auto sym = RiccatiCoefficients::constants(1, 0, 0, 1, 0);
    auto g1 = gamma_min(sym, 0.0);
    CHECK(g1.u0 == doctest::Approx(0.0));
    CHECK(g1.value == doctest::Approx(1.0));

    auto skew = RiccatiCoefficients::constants(1, 0, 3, 1, 0);
    auto g2 = gamma_min(skew, 0.0);
    CHECK(g2.value == doctest::Approx(-2.0));  // 1 - 36/12

    // c = (3/2) a' makes the linear term vanish: u0 = 0, value = d - b'
    auto balanced = RiccatiCoefficients::make(parse("exp(t)"), parse("0"),
                                              parse("1.5*exp(t)"), parse("2"), parse("0"));
    auto g3 = gamma_min(balanced, 0.7);
    CHECK(g3.u0 == doctest::Approx(0.0));
    CHECK(g3.value == doctest::Approx(2.0));

    SUBCASE("degenerate when a vanishes") {
        auto degenerate = RiccatiCoefficients::make(parse("t"), parse("0"), parse("0"),
                                                    parse("0"), parse("0"));
        CHECK_THROWS_AS(gamma_min(degenerate, 0.0), DegenerateError);
    }

    SUBCASE("gamma_min is a lower bound for gamma on a grid") {
        auto co = RiccatiCoefficients::make(parse("1+t^2/4"), parse("sin(t)"), parse("t"),
                                            parse("cos(t)"), parse("0"));
        for (double t : {0.0, 1.0, 2.5}) {
            auto gm = gamma_min(co, t);
            for (int i = -20; i <= 20; ++i)
                for (int j = -20; j <= 20; ++j)
                    CHECK(gm.value <= gamma(co, t, 5.0 * i, 5.0 * j) + 1e-9);
            CHECK(gamma(co, t, gm.u0, gm.u0) == doctest::Approx(gm.value));
        }
    }
}

TEST_CASE("discriminant modes") {
    auto sym = RiccatiCoefficients::constants(1, 0, 0, 1, 0);
    CHECK(disc_D(sym, 0.0, DiscriminantMode::paper_literal) == doctest::Approx(1.0));
    CHECK(disc_D(sym, 0.0, DiscriminantMode::corrected) == doctest::Approx(12.0));

    auto skew = RiccatiCoefficients::constants(1, 0, 3, 1, 0);
    CHECK(disc_D(skew, 0.0, DiscriminantMode::paper_literal) == doctest::Approx(73.0));
    CHECK(disc_D(skew, 0.0, DiscriminantMode::corrected) == doctest::Approx(-24.0));

    // c = (3/2)a', d = b' kills both modes
    auto flat = RiccatiCoefficients::make(parse("exp(t)"), parse("t"), parse("1.5*exp(t)"),
                                          parse("1"), parse("0"));
    CHECK(disc_D(flat, 0.4, DiscriminantMode::paper_literal) == doctest::Approx(0.0));
    CHECK(disc_D(flat, 0.4, DiscriminantMode::corrected) == doctest::Approx(0.0));

    SUBCASE("corrected mode equals 12 a^2 gamma_min") {
        auto co = RiccatiCoefficients::make(parse("1+t^2/4"), parse("sin(t)"), parse("t"),
                                            parse("cos(t)"), parse("0"));
        for (double t : {0.0, 0.9, 2.2}) {
            double lhs = disc_D(co, t, DiscriminantMode::corrected);
            double a = co.a(t);
            double rhs = 12.0 * a * a * gamma_min(co, t).value;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("coefficient mismatch L") {
    auto base = RiccatiCoefficients::make(parse("1+t^2/9"), parse("t"), parse("sin(t)"),
                                          parse("2"), parse("cos(t)"));
    for (double t : {0.0, 1.0})
        for (double u : {-1.0, 0.5})
            for (double v : {-2.0, 3.0}) CHECK(mismatch_L(base, base, t, u, v) == 0.0);

    auto shifted_e = RiccatiCoefficients::make(parse("1+t^2/9"), parse("t"), parse("sin(t)"),
                                               parse("2"), parse("cos(t)+t"));
    for (double t : {0.0, 1.5})
        for (double u : {-1.0, 2.0})
            CHECK(mismatch_L(base, shifted_e, t, u, 0.7) == doctest::Approx(t));

    // other set has e1 = 0: L(t,0,0) = -e(t)
    auto zero_e = RiccatiCoefficients::make(parse("1+t^2/9"), parse("t"), parse("sin(t)"),
                                            parse("2"), parse("0"));
    for (double t : {0.3, 2.0})
        CHECK(mismatch_L(base, zero_e, t, 0.0, 0.0) == doctest::Approx(-std::cos(t)));
}

TEST_CASE("constant witnesses") {
    auto trivial = RiccatiCoefficients::constants(2, 1, 0, 0, 0);
    CHECK(constant_witness(trivial, 0.0, 5.0, 0.7, WitnessSide::upper) == doctest::Approx(0.7));
    CHECK(constant_witness(trivial, 0.0, 5.0, 0.7, WitnessSide::lower) == doctest::Approx(-0.7));

    auto small_e = RiccatiCoefficients::constants(1, 0, 0, 0, -0.1);
    CHECK(constant_witness(small_e, 0.0, 50.0, 0.0, WitnessSide::upper) ==
          doctest::Approx(0.1));

    SUBCASE("witness satisfies the defining inequality when the ratio exceeds 1") {
        auto co = RiccatiCoefficients::make(parse("1"), parse("sin(t)"), parse("0-1"),
                                            parse("1"), parse("0-1"));
        double eta = constant_witness(co, 0.0, 6.0, 0.0, WitnessSide::upper);
        double zeta = constant_witness(co, 0.0, 6.0, 0.0, WitnessSide::lower);
        CHECK(eta == doctest::Approx(3.0));
        for (int i = 0; i <= 600; ++i) {
            double t = 6.0 * i / 600.0;
            double a = co.a(t), c = co.c(t), d = co.d(t), e = co.e(t);
            CHECK(a * a * eta * eta * eta + c * eta * eta + d * eta + e >= -1e-12);
            CHECK(a * a * zeta * zeta * zeta + c * zeta * zeta + d * zeta + e <= 1e-12);
        }
    }

    SUBCASE("degenerate when a vanishes on the span") {
        auto bad = RiccatiCoefficients::make(parse("t-1"), parse("0"), parse("1"), parse("0"),
                                             parse("0"));
        CHECK_THROWS_AS(constant_witness(bad, 0.0, 2.0, 0.0, WitnessSide::upper),
                        DegenerateError);
    }
}

TEST_CASE("comparison identity residual") {
    auto co = cubic_only();
    auto field = assemble_field(co);
    auto traj0 = integrate(field, {0.0, 2.0}, 0.0, 3.0);  // y = 2t/(1+t^2)
    auto traj1 = integrate(field, {0.0, 0.0}, 0.0, 3.0);  // y = 0

    SUBCASE("identical trajectories give zero residual") {
        auto res = identity_residual(co, co, traj0, traj0, 0.0, 3.0);
        CHECK(res.max_abs <= 1e-12);
    }

    SUBCASE("closed-form pair stays under 1e-6") {
        auto res = identity_residual(co, co, traj0, traj1, 0.0, 3.0);
        CHECK(res.max_abs <= 1e-6);
        CHECK(res.grid.size() == res.residual.size());
    }

    SUBCASE("residual shrinks when integrator tolerances tighten") {
        auto co1 = RiccatiCoefficients::make(parse("1+t^2/9"), parse("t/3"), parse("sin(t)/2"),
                                             parse("1"), parse("cos(t)/4"));
        auto co2 = RiccatiCoefficients::make(parse("1+t/7"), parse("0"), parse("t/5"),
                                             parse("1/2"), parse("0"));
        IntegrateOptions loose;
        loose.rtol = 1e-8;
        loose.atol = 1e-10;
        IntegrateOptions tight;
        tight.rtol = 1e-10;
        tight.atol = 1e-12;
        auto f1 = assemble_field(co1);
        auto f2 = assemble_field(co2);
        auto a0 = integrate(f1, {0.1, 0.0}, 0.0, 1.0, loose);
        auto a1 = integrate(f2, {0.2, -0.1}, 0.0, 1.0, loose);
        auto b0 = integrate(f1, {0.1, 0.0}, 0.0, 1.0, tight);
        auto b1 = integrate(f2, {0.2, -0.1}, 0.0, 1.0, tight);
        double r_loose = identity_residual(co1, co2, a0, a1, 0.0, 1.0).max_abs;
        double r_tight = identity_residual(co1, co2, b0, b1, 0.0, 1.0).max_abs;
        CHECK(r_loose <= 1e-6);
        CHECK(r_tight <= r_loose);
    }
}

TEST_CASE("cubic-only blow-up from y(0) = y'(0) = -1") {
    auto traj = integrate(assemble_field(cubic_only()), {-1.0, -1.0}, 0.0, 2.0);
    REQUIRE(traj.status() == TrajectoryStatus::escaped);
    auto rep = detect_escape(traj, 2.0);
    CHECK(rep.classification == EscapeReport::Kind::finite_escape);
    CHECK(rep.t_est >= 0.99);
    CHECK(rep.t_est <= 1.01);
    // closed form y = -1/(1-t): sampled values track it until late in the run
    for (double t : {0.2, 0.5, 0.8}) {
        CHECK(traj.sample(t, 0) == doctest::Approx(-1.0 / (1.0 - t)).epsilon(1e-6));
    }
}
