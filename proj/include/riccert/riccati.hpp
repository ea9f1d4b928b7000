#pragma once

#include <utility>
#include <vector>

#include "riccert/expr.hpp"
#include "riccert/ode.hpp"

namespace riccert {

class DegenerateError : public ExprError {
public:
    using ExprError::ExprError;
};

/// Coefficient quintuple of y'' + 3a yy' + b y' + a^2 y^3 + c y^2 + d y + e = 0,
/// with the derivatives of a and b cached (a, b are required to be C^1).
struct RiccatiCoefficients {
    Expr a, b, c, d, e;
    Expr da, db;

    static RiccatiCoefficients make(Expr a, Expr b, Expr c, Expr d, Expr e) {
        Expr da = a.derivative();
        Expr db = b.derivative();
        return {std::move(a), std::move(b), std::move(c), std::move(d), std::move(e),
                std::move(da), std::move(db)};
    }

    static RiccatiCoefficients constants(double a, double b, double c, double d, double e) {
        return make(Expr::constant(a), Expr::constant(b), Expr::constant(c), Expr::constant(d),
                    Expr::constant(e));
    }
};

enum class DiscriminantMode {
    /// The discriminant exactly as printed: 2(2c - 3a')^2 + a^2 (d - b').
    paper_literal,
    /// 12 a^2 (d - b') - (2c - 3a')^2 = 12 a^2 min Gamma; the quantity whose
    /// nonnegativity actually implies Gamma >= 0.
    corrected,
};

/// First-order field on (y, y') for the second-order Riccati equation.
Field assemble_field(const RiccatiCoefficients& co);

/// nu(t,u,v,u1,v1) = u1 - v1 + (3/2) a (u^2 - v^2) + b (u - v)
double nu(const RiccatiCoefficients& co, double t, double u, double v, double u1, double v1);

/// Gamma(t,u,v) = a^2 (u^2 + uv + v^2) + (c - (3/2)a')(u + v) + d - b'
double gamma(const RiccatiCoefficients& co, double t, double u, double v);

/// J(t,u,v) = (u - v) Gamma(t,u,v)
double jfun(const RiccatiCoefficients& co, double t, double u, double v);

struct GammaMin {
    double u0;     // shared minimizer coordinate (u0 = v0)
    double value;  // global minimum of Gamma(t, ., .)
};

/// Closed-form global minimum of the strictly convex quadratic Gamma(t,.,.):
/// u0 = (3a' - 2c)/(6a^2), value = (d - b') - (3a' - 2c)^2 / (12 a^2).
/// Throws DegenerateError when a(t) = 0.
GammaMin gamma_min(const RiccatiCoefficients& co, double t);

double disc_D(const RiccatiCoefficients& co, double t, DiscriminantMode mode);

/// L(t,u,v) with base coefficients unsubscripted and `other` subscripted:
/// 3(a1-a)uv + (b1-b)v + (a1^2-a^2)u^3 + (c1-c)u^2 + (d1-d)u + (e1-e).
double mismatch_L(const RiccatiCoefficients& base, const RiccatiCoefficients& other, double t,
                  double u, double v);

/// Constant solution of the one-sided differential inequality obtained by
/// maximizing (|c|+|d|+|e|)/a^2 over a grid with one local-refinement pass.
/// upper: lambda + max-ratio; lower: -lambda - max-ratio.
enum class WitnessSide { upper, lower };
double constant_witness(const RiccatiCoefficients& co, double t_a, double t_b, double lambda,
                        WitnessSide side, std::size_t grid_n = 2001);

/// Pointwise residual of the integrated comparison identity between a solution
/// of the base equation and a solution of the comparison equation, evaluated
/// on a uniform grid using dense output and cumulative Simpson quadrature.
struct IdentityResidual {
    std::vector<double> grid;
    std::vector<double> residual;
    double max_abs = 0.0;
};

IdentityResidual identity_residual(const RiccatiCoefficients& co, const RiccatiCoefficients& co1,
                                   const Trajectory& traj0, const Trajectory& traj1, double t1,
                                   double t2, std::size_t grid_n = 2001);

}  // namespace riccert
