#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riccert/expr.hpp"
#include "riccert/riccati.hpp"
#include "riccert/transform.hpp"

namespace riccert {

class CriteriaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result of checking one pointwise or running condition on a grid.
/// For non-strict conditions ("q >= 0"): pass iff min_margin >= -tolerance.
/// For strict conditions ("q > 0", "q != 0"): pass iff min_margin > tolerance.
struct GridEvidence {
    std::string condition;
    double min_margin = 0.0;
    double argmin_t = 0.0;
    double tolerance = 0.0;
    bool strict = false;
    bool pass = false;
    /// Advisory evidence is recorded but excluded from the verdict (used for
    /// paper-text-ambiguous variants and comparison-solution residuals).
    bool advisory = false;
    std::size_t grid_n = 0;
};

enum class Verdict { certified, refuted, inconclusive };

std::string to_string(Verdict v);

/// Admissible initial-condition region in the (y(t0), y'(t0)) plane: y0 in
/// [y_lo, y_hi] and, per y0, dy0 between the two nu-constraint lines
///   dy_lo(y0) = lo' + (3/2) a (lo^2 - y0^2) + b (lo - y0)
///   dy_hi(y0) = hi' + (3/2) a (hi^2 - y0^2) + b (hi - y0)
/// where lo/hi are the theorem's lower/upper fences at t0.
struct AdmissibleRegion {
    double t0 = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
    double a0 = 0.0, b0 = 0.0;
    double lo_val = 0.0, lo_deriv = 0.0;
    double hi_val = 0.0, hi_deriv = 0.0;

    std::pair<double, double> dy_bounds(double y0) const;
};

struct Certificate {
    std::string theorem;
    std::vector<GridEvidence> evidence;
    std::map<std::string, double> constants;
    std::vector<double> m_sequence;  // M_n for the partition theorems
    Verdict verdict = Verdict::inconclusive;
    std::optional<AdmissibleRegion> admissible;
    std::vector<std::string> notes;
    double t_a = 0.0, t_b = 0.0;

    /// Conclusion fences as samplers (present when the hypotheses define
    /// them): lower(t) <= y(t) <= upper(t), with nu-sign conclusions
    ///   nu(t, upper, y, upper', y') >= 0 and nu(t, lower, y, lower', y') <= 0.
    ScalarFn lower_bound, upper_bound, lower_deriv, upper_deriv;

    /// Set by certify_nonoscillation: the reduced Riccati coefficients and the
    /// section-4 theorem that certified them.
    std::optional<RiccatiCoefficients> reduced;
    std::string via_theorem;
};

struct CriteriaOptions {
    std::size_t grid_n = 2001;
    double condition_tol = 1e-9;
    DiscriminantMode d_mode = DiscriminantMode::corrected;
    double lambda = 0.0;  // slack of the constant witnesses eta_lambda / zeta_lambda
    double gamma = 0.0;   // the free comparison constant of the section-3 theorems
    IntegrateOptions integrate;
};

/// A problem instance: base coefficients plus the optional comparison data the
/// section-3 theorems need.
struct RiccatiProblem {
    RiccatiCoefficients co;
    double t_a = 0.0, t_b = 0.0;
    std::vector<double> partition;  // interior partition points for T4.3/T4.4
    std::optional<RiccatiCoefficients> co1, co2;
    std::optional<Expr> y1, y2;
};

/// Pointwise evidence with one 10x local-refinement pass around the argmin.
GridEvidence grid_evidence(const std::string& name, const std::function<double(double)>& margin,
                           double t_a, double t_b, std::size_t grid_n, double tol,
                           bool strict = false);

/// Sign hypotheses shared by the theorems: a > 0 and D >= 0 (in the requested
/// mode), plus the branch condition "if a = 0 then c = (3/2)a', d >= b'".
std::vector<GridEvidence> check_sign_conditions(const RiccatiCoefficients& co, double t_a,
                                                double t_b, std::size_t grid_n, double tol,
                                                DiscriminantMode mode);

/// Grid maximum of (|c|+|d|+|e|)/a^2 with one refinement pass.
double sup_ratio(const RiccatiCoefficients& co, double t_a, double t_b, std::size_t grid_n);

/// Nondecreasing sequence M_n over the nested intervals [t0, t_n] of a
/// partition (points strictly increasing, first > t_a).
std::vector<double> sup_ratio_partition(const RiccatiCoefficients& co, double t_a,
                                        const std::vector<double>& partition,
                                        std::size_t grid_n);

enum class SignRequirement { non_negative, non_positive };

/// Running nested double integral
///   R(t) = offset + int_a^t exp{int_a^tau w} (int_a^tau g) dtau
/// by cumulative composite Simpson (inner cumulative integrals reused),
/// checked against the requested sign for all t in [t_a, t_b].
GridEvidence check_running_integral(const std::string& name,
                                    const std::function<double(double)>& weight,
                                    const std::function<double(double)>& inner, double offset,
                                    double t_a, double t_b, SignRequirement sign,
                                    std::size_t grid_n, double tol);

/// T4.1's condition with weight (3/2) weight_const a + b and inner
/// integrand e.
GridEvidence check_integral_condition(const RiccatiCoefficients& co, double weight_const,
                                      double t_a, double t_b, SignRequirement sign,
                                      std::size_t grid_n, double tol);

struct RhoConditions {
    Expr rho_minus, rho_plus;
    std::vector<GridEvidence> evidence;
};

/// Build rho_+- = (-d +- sqrt(d^2 - 4ce))/(2c) as composite expressions (so
/// their first and second derivatives come from symbolic differentiation) and
/// check conditions (c != 0, positive discriminant, the two running-integral
/// sign conditions on rho_-'' + 3a rho_- rho_-' + a^2 rho_-^3 and its rho_+
/// mirror).
RhoConditions rho_conditions(const RiccatiCoefficients& co, double t_a, double t_b,
                             std::size_t grid_n, double tol);

/// Evaluate the hypotheses of the named theorem and assemble a certificate.
/// theorem_id in {L2.1, T3.1, T3.2, T3.3, T4.1, T4.2, T4.3, T4.4, T4.5}.
Certificate certify(const RiccatiProblem& problem, const std::string& theorem_id,
                    const CriteriaOptions& opts = {});

/// Reduce a 3-D linear system (eliminating a13 first if needed) and try the
/// listed section-4 theorems in order; the first certified one wins.
Certificate certify_nonoscillation(const LinearSystem3& sys, double t_a, double t_b,
                                   const std::vector<std::string>& strategies,
                                   const CriteriaOptions& opts = {});

}  // namespace riccert
