#pragma once

#include <array>
#include <functional>

#include "riccert/expr.hpp"
#include "riccert/ode.hpp"
#include "riccert/riccati.hpp"

namespace riccert {

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ScalarFn = std::function<double(double)>;

/// 3x3 linear system phi' = a11 phi + a12 psi + a13 chi, etc.
struct LinearSystem3 {
    std::array<std::array<Expr, 3>, 3> a;

    const Expr& operator()(int j, int k) const { return a[j - 1][k - 1]; }
    Expr& operator()(int j, int k) { return a[j - 1][k - 1]; }

    Field field() const;

    /// Companion system of phi''' + p phi' + q phi = 0.
    static LinearSystem3 companion(Expr p, Expr q);
};

/// Canonical system phi' = a psi, psi' = X chi, chi' = Y phi + Z psi + W chi.
/// X is an exponential of a running integral, carried as a dense-output
/// sampler; valid on [t_begin, t_end].
struct CanonicalSystem {
    ScalarFn X, Y, Z, W;
    double t_begin, t_end;

    Field field(const RiccatiCoefficients& co) const;
};

/// Build the canonical system whose psi/phi ratio solves the Riccati equation
/// with coefficients co. X(t) = exp{int_t0^t [a'/(2a) - c/(2a) - b/2]},
/// W = c/(2a) - a'/(2a) - b/2, Y = -e/X, Z = -d/X. The running integral is
/// carried inside an auxiliary adaptive integration over [t0, t_end], not by
/// quadrature of stored samples. Requires a != 0 on the span.
///
/// The equivalence y = psi/phi <-> the scalar equation is exact precisely on
/// the representable subfamily c = a' + a b (where W vanishes); outside it no
/// system of this row structure reproduces the scalar equation, because the
/// y' and y^2 coefficients both depend only on X'/X + W.
CanonicalSystem riccati_to_canonical(const RiccatiCoefficients& co, double t0, double t_end,
                                     const IntegrateOptions& opts = {});

/// A (phi, psi, chi) solution carried as dense samplers on [t_begin, t_end].
struct LiftedTriple {
    ScalarFn phi, psi, chi;
    double t_begin, t_end;
};

/// Lift a Riccati solution trajectory (state (y, y')) to a solution of the
/// canonical system: phi = phi1 exp{int a y}, psi = y phi,
/// chi = (y' + a y^2)/X phi. phi1 must be nonzero.
LiftedTriple lift_riccati_solution(const RiccatiCoefficients& co, const Trajectory& ytraj,
                                   double t1, double phi1, const CanonicalSystem& canon,
                                   const IntegrateOptions& opts = {});

/// Reduce a 3-D linear system with a13 = 0 and a23 != 0 to the Riccati
/// coefficients (a12, A, C, F, E). Preconditions checked on a dense grid over
/// [t_a, t_b]; violations raise PreconditionError naming the condition.
RiccatiCoefficients reduce_system3(const LinearSystem3& sys, double t_a, double t_b,
                                   std::size_t grid_n = 2001);

/// Auxiliary coefficient B = a11 - a22 of the reduction.
Expr reduction_B(const LinearSystem3& sys);

/// Remove the (1,3) coefficient by the change of variables psi = eta - lambda
/// chi with lambda = a13/a12. Requires a12 nonvanishing on [t_a, t_b].
LinearSystem3 eliminate_a13(const LinearSystem3& sys, double t_a, double t_b,
                            std::size_t grid_n = 2001);

/// Lift a solution of the reduced Riccati equation back to the 3-D system:
/// phi = phi1 exp{int (a11 + a12 y)}, psi = y phi,
/// chi = (y' + a12 y^2 + B y - a21)/a23 phi.
LiftedTriple lift_sys3_solution(const LinearSystem3& sys, const RiccatiCoefficients& co,
                                const Trajectory& ytraj, double t1, double phi1,
                                const IntegrateOptions& opts = {});

}  // namespace riccert
