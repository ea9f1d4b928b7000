#include "riccert/ode.hpp"

#include <algorithm>
#include <cmath>

namespace riccert {
namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bhat (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights for the 5th-order interpolant
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double euclid_norm(const State& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

bool all_finite(const State& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

std::size_t Trajectory::find_step(double t) const {
    if (mesh_.size() < 2 || t < mesh_.front() || t > mesh_.back())
        throw OdeError("sample time " + std::to_string(t) + " outside trajectory span [" +
                       std::to_string(mesh_.front()) + ", " + std::to_string(mesh_.back()) + "]");
    auto it = std::upper_bound(mesh_.begin(), mesh_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - mesh_.begin());
    if (i == 0) return 0;
    if (i >= mesh_.size()) return mesh_.size() - 2;
    return i - 1;
}

void Trajectory::sample(double t, State& out) const {
    std::size_t i = find_step(t);
    // exact reproduction at mesh points
    if (t == mesh_[i]) {
        out = states_[i];
        return;
    }
    if (t == mesh_[i + 1]) {
        out = states_[i + 1];
        return;
    }
    double h = mesh_[i + 1] - mesh_[i];
    double theta = (t - mesh_[i]) / h;
    double theta1 = 1.0 - theta;
    const auto& r = dense_[i].r;
    out.resize(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        out[k] = r[0][k] +
                 theta * (r[1][k] + theta1 * (r[2][k] + theta * (r[3][k] + theta1 * r[4][k])));
    }
}

State Trajectory::sample(double t) const {
    State out;
    sample(t, out);
    return out;
}

double Trajectory::sample(double t, std::size_t k) const {
    State out;
    sample(t, out);
    return out.at(k);
}

double Trajectory::norm_at_last_step() const { return euclid_norm(states_.back()); }

bool Trajectory::norm_growing(std::size_t n) const {
    if (states_.size() < 2) return false;
    std::size_t first = states_.size() > n ? states_.size() - n : 0;
    for (std::size_t i = first + 1; i < states_.size(); ++i)
        if (euclid_norm(states_[i]) < euclid_norm(states_[i - 1])) return false;
    return true;
}

Trajectory integrate(const Field& field, State y0, double t_a, double t_b,
                     const IntegrateOptions& opts) {
    if (!(t_a < t_b)) throw OdeError("integration span must satisfy t_a < t_b");
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw OdeError("tolerances must be positive");

    const std::size_t n = y0.size();
    const double h_min = opts.h_min_factor * (t_b - t_a);

    Trajectory traj;
    traj.dim_ = n;
    traj.mesh_.push_back(t_a);
    traj.states_.push_back(y0);

    State y = std::move(y0);
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);

    auto eval = [&](double t, const State& s, State& out) -> bool {
        try {
            field(t, s, out);
        } catch (...) {
            if (euclid_norm(s) > 0.5 * opts.escape_threshold) return false;  // blow-up territory
            throw;
        }
        return all_finite(out);
    };

    double t = t_a;
    if (!eval(t, y, k1)) throw OdeError("field not evaluable at the initial point");

    // initial step: conservative fraction of the span scaled by the slope
    double h = (t_b - t_a) / 100.0;
    {
        double d0 = euclid_norm(y), d1n = euclid_norm(k1);
        if (d1n > 1e-10) h = std::min(h, 0.01 * std::max(d0, 1.0) / d1n);
    }

    auto stage = [&](double tt, const State& base, State& out) { return eval(tt, base, out); };

    TrajectoryStatus status = TrajectoryStatus::completed;
    std::size_t step_count = 0;
    bool done = false;

    while (!done) {
        if (++step_count > opts.max_steps) {
            status = TrajectoryStatus::stalled;
            break;
        }
        if (t + h >= t_b) {
            h = t_b - t;
            done = true;
        }

        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        ok = ok && stage(t + c2 * h, ytmp, k2);
        if (ok) {
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            ok = stage(t + c3 * h, ytmp, k3);
        }
        if (ok) {
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            ok = stage(t + c4 * h, ytmp, k4);
        }
        if (ok) {
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            ok = stage(t + c5 * h, ytmp, k5);
        }
        if (ok) {
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] =
                    y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            ok = stage(t + h, ytmp, k6);
        }
        if (ok) {
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] =
                    y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            ok = all_finite(ynew) && stage(t + h, ynew, k7);
        }

        double err = 0.0;
        if (ok) {
            for (std::size_t i = 0; i < n; ++i) {
                yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
                double sc = opts.atol + opts.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
                double q = yerr[i] / sc;
                err += q * q;
            }
            err = std::sqrt(err / static_cast<double>(n));
        }

        if (!ok || err > 1.0 || !std::isfinite(err)) {
            done = false;
            double shrink = (ok && std::isfinite(err)) ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                                                       : 0.2;
            h *= shrink;
            if (h < h_min) {
                status = (euclid_norm(y) > opts.escape_threshold || traj.norm_growing())
                             ? TrajectoryStatus::escaped
                             : TrajectoryStatus::stalled;
                break;
            }
            continue;
        }

        // accept
        Trajectory::DenseStep ds;
        for (auto& r : ds.r) r.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ydiff = ynew[i] - y[i];
            double bspl = h * k1[i] - ydiff;
            ds.r[0][i] = y[i];
            ds.r[1][i] = ydiff;
            ds.r[2][i] = bspl;
            ds.r[3][i] = ydiff - h * k7[i] - bspl;
            ds.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                              d7 * k7[i]);
        }
        t += h;
        y = ynew;
        k1 = k7;  // FSAL
        traj.mesh_.push_back(t);
        traj.states_.push_back(y);
        traj.dense_.push_back(std::move(ds));

        if (euclid_norm(y) > opts.escape_threshold) {
            status = TrajectoryStatus::escaped;
            break;
        }
        if (done) break;

        double grow = std::min(10.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-16), -0.2)));
        h = std::min(h * grow, t_b - t);
        if (h <= 0.0) break;
    }

    if (status != TrajectoryStatus::completed)
        traj.status_ = status;
    else
        traj.status_ = done ? TrajectoryStatus::completed : TrajectoryStatus::stalled;
    return traj;
}

EscapeReport detect_escape(const Trajectory& traj, double horizon) {
    EscapeReport rep{};
    rep.norm_at_last_step = traj.norm_at_last_step();
    rep.t_est = std::min(traj.t_end(), horizon);
    rep.classification = (traj.status() == TrajectoryStatus::escaped && traj.norm_growing())
                             ? EscapeReport::Kind::finite_escape
                             : EscapeReport::Kind::horizon_reached;
    return rep;
}

}  // namespace riccert
