#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace riccert {

using State = std::vector<double>;
/// Right-hand side f(t, y, dydt). dydt is pre-sized to y.size().
using Field = std::function<void(double, const State&, State&)>;

class OdeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegrateOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    /// Norm beyond which a trajectory counts as escaped (finite-time blow-up
    /// candidate), as opposed to a step-size failure.
    double escape_threshold = 1e8;
    /// h_min = h_min_factor * (t_b - t_a)
    double h_min_factor = 1e-12;
    std::size_t max_steps = 2'000'000;
};

enum class TrajectoryStatus { completed, escaped, stalled };

/// Adaptive-mesh solution with per-step quintic dense output. Immutable after
/// integrate() returns; evaluation at mesh points reproduces stored states.
class Trajectory {
public:
    TrajectoryStatus status() const noexcept { return status_; }
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t steps() const noexcept { return mesh_.empty() ? 0 : mesh_.size() - 1; }

    double t_begin() const { return mesh_.front(); }
    double t_end() const { return mesh_.back(); }
    const std::vector<double>& mesh() const noexcept { return mesh_; }
    const State& state(std::size_t i) const { return states_[i]; }

    /// Dense-output interpolation; throws OdeError outside [t_begin, t_end].
    State sample(double t) const;
    void sample(double t, State& out) const;

    /// Scalar convenience for component k.
    double sample(double t, std::size_t k) const;

    double norm_at_last_step() const;
    /// Euclidean norm grows monotonically over the last n accepted steps.
    bool norm_growing(std::size_t n = 5) const;

private:
    friend Trajectory integrate(const Field&, State, double, double, const IntegrateOptions&);

    // dense coefficients per step: y(t0+theta*h) =
    //   r0 + theta*(r1 + (1-theta)*(r2 + theta*(r3 + (1-theta)*r4)))
    struct DenseStep {
        std::array<State, 5> r;
    };

    std::size_t find_step(double t) const;

    std::vector<double> mesh_;
    std::vector<State> states_;
    std::vector<DenseStep> dense_;
    TrajectoryStatus status_ = TrajectoryStatus::completed;
    std::size_t dim_ = 0;
};

Trajectory integrate(const Field& field, State y0, double t_a, double t_b,
                     const IntegrateOptions& opts = {});

struct EscapeReport {
    enum class Kind { finite_escape, horizon_reached };
    Kind classification;
    /// Last accepted mesh point (conservative under-estimate of the right
    /// endpoint of the maximum existence interval).
    double t_est;
    double norm_at_last_step;
};

/// Classify a trajectory produced by integrate(). A stalled trajectory is not
/// classified as finite escape; callers must consult Trajectory::status().
EscapeReport detect_escape(const Trajectory& traj, double horizon);

}  // namespace riccert
