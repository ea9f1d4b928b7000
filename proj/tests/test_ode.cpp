#include <cmath>
#include <random>

#include "doctest.h"
#include "riccert/ode.hpp"

using namespace riccert;

namespace {

const Field exp_field = [](double, const State& y, State& dy) { dy[0] = y[0]; };
const Field decay_field = [](double, const State& y, State& dy) { dy[0] = -y[0]; };
const Field square_field = [](double, const State& y, State& dy) { dy[0] = y[0] * y[0]; };

}  // namespace

TEST_CASE("exponential growth hits e at t=1") {
    auto traj = integrate(exp_field, {1.0}, 0.0, 1.0);
    CHECK(traj.status() == TrajectoryStatus::completed);
    CHECK(std::abs(traj.sample(1.0, 0) - std::exp(1.0)) < 1e-8);
}

TEST_CASE("zero field keeps a constant trajectory") {
    Field zero = [](double, const State&, State& dy) { dy[0] = 0.0; };
    auto traj = integrate(zero, {3.25}, 0.0, 10.0);
    CHECK(traj.status() == TrajectoryStatus::completed);
    for (double t : {0.0, 1.7, 5.0, 10.0}) CHECK(traj.sample(t, 0) == 3.25);
}

TEST_CASE("dense output on the exponential problem") {
    auto traj = integrate(exp_field, {1.0}, 0.0, 1.0);
    CHECK(std::abs(traj.sample(0.5, 0) - std::exp(0.5)) < 1e-7);

    SUBCASE("mesh points reproduce stored states exactly") {
        const auto& mesh = traj.mesh();
        for (std::size_t i = 0; i < mesh.size(); ++i)
            CHECK(traj.sample(mesh[i], 0) == traj.state(i)[0]);
    }

    SUBCASE("outside the span throws") {
        CHECK_THROWS_AS(traj.sample(-0.1), OdeError);
        CHECK_THROWS_AS(traj.sample(1.1), OdeError);
    }
}

TEST_CASE("quadratic blow-up escapes near t=1") {
    auto traj = integrate(square_field, {1.0}, 0.0, 2.0);
    CHECK(traj.status() == TrajectoryStatus::escaped);
    auto rep = detect_escape(traj, 2.0);
    CHECK(rep.classification == EscapeReport::Kind::finite_escape);
    CHECK(rep.t_est >= 0.99);
    CHECK(rep.t_est <= 1.01);
    CHECK(rep.norm_at_last_step > 1e6);
}

TEST_CASE("decaying solution reaches the horizon") {
    auto traj = integrate(decay_field, {1.0}, 0.0, 10.0);
    CHECK(traj.status() == TrajectoryStatus::completed);
    auto rep = detect_escape(traj, 10.0);
    CHECK(rep.classification == EscapeReport::Kind::horizon_reached);
    CHECK(rep.t_est == doctest::Approx(10.0));
}

TEST_CASE("tightening tolerances improves the endpoint error") {
    // adaptive step control keeps the local error near the tolerance, so the
    // endpoint error scales like tol^(4/5); a 100x tighter tolerance must buy
    // well over an 8x smaller error
    IntegrateOptions loose;
    loose.rtol = 1e-5;
    loose.atol = 1e-7;
    IntegrateOptions tight;
    tight.rtol = 1e-7;
    tight.atol = 1e-9;
    double e1 = std::abs(integrate(exp_field, {1.0}, 0.0, 1.0, loose).sample(1.0, 0) -
                         std::exp(1.0));
    double e2 = std::abs(integrate(exp_field, {1.0}, 0.0, 1.0, tight).sample(1.0, 0) -
                         std::exp(1.0));
    CHECK(e2 * 8.0 <= e1 * (1.0 + 1e-9));
}

TEST_CASE("dense output agrees with a fine-mesh re-integration") {
    // oscillator keeps the state norm near 1 so the tolerance bound is uniform
    Field osc = [](double, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    IntegrateOptions opts;
    opts.rtol = 1e-8;
    opts.atol = 1e-10;
    auto coarse = integrate(osc, {1.0, 0.0}, 0.0, 10.0, opts);
    IntegrateOptions fine_opts;
    fine_opts.rtol = 1e-12;
    fine_opts.atol = 1e-14;
    auto fine = integrate(osc, {1.0, 0.0}, 0.0, 10.0, fine_opts);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> tdist(0.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        double t = tdist(rng);
        for (std::size_t k = 0; k < 2; ++k) {
            double ref = fine.sample(t, k);
            double bound = 10.0 * (opts.atol + opts.rtol * std::abs(ref));
            CHECK(std::abs(coarse.sample(t, k) - ref) <= bound + 1e-9);
        }
    }
}

TEST_CASE("escape time decreases as the initial value grows") {
    for (int p : {2, 3}) {
        Field f = [p](double, const State& y, State& dy) { dy[0] = std::pow(y[0], p); };
        double prev = 1e300;
        for (double y0 : {0.5, 1.0, 2.0, 4.0}) {
            auto traj = integrate(f, {y0}, 0.0, 50.0);
            REQUIRE(traj.status() == TrajectoryStatus::escaped);
            double t_est = detect_escape(traj, 50.0).t_est;
            CHECK(t_est < prev);
            prev = t_est;
        }
    }
}

TEST_CASE("escaped trajectories show monotone norm growth at the end") {
    auto traj = integrate(square_field, {1.0}, 0.0, 2.0);
    CHECK(traj.norm_growing(5));
}
