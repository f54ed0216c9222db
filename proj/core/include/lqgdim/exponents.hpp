#ifndef LQGDIM_EXPONENTS_HPP
#define LQGDIM_EXPONENTS_HPP

#include <vector>

namespace lqgdim {

/// LQG coupling parameter, restricted to the subcritical range (0,2).
class Gamma {
public:
    explicit Gamma(double value);
    double value() const { return value_; }
    double sq() const { return value_ * value_; }

private:
    double value_;
};

namespace exponents {

/// Closed-form lower bound for the LQG dimension. Piecewise in gamma,
/// with the branch point at sqrt(8/3); both branches give 4 there.
double lower_bound(Gamma gamma);

/// Closed-form upper bound for the LQG dimension. Shares the branch
/// point (and the value 4) with lower_bound at sqrt(8/3).
double upper_bound(Gamma gamma);

/// Watabiki's predicted dimension. Defined on (0,2]; the endpoint 2 is
/// accepted here (limit value) even though the critical case is not
/// otherwise handled.
double watabiki(double gamma);

/// Simplest quadratic interpolation matching 2 at gamma=0 and 4 at
/// gamma=sqrt(8/3).
double quad_guess(double gamma);

/// First-passage weight exponent xi = gamma/d for dimension d > 2.
double lfpp_xi(Gamma gamma, double d);

/// Rescaling exponent lambda = 1 - 2/d - gamma^2/(2d).
double lfpp_lambda(Gamma gamma, double d);

/// Lattice FPP growth exponent 2/d + gamma^2/(2d) = 1 - lfpp_lambda.
double discrete_lfpp_exponent(Gamma gamma, double d);

/// Heat-kernel stretched-exponential exponent 1/(d-1).
double heat_kernel_exponent(double d);

struct BoundsRow {
    double gamma;
    double lower;
    double upper;
    double watabiki;
    double quad;
};

/// Evaluate all bound curves on a list of gamma values. Asserts the
/// sandwich lower <= watabiki <= upper for every row.
std::vector<BoundsRow> bounds_table(const std::vector<Gamma>& gammas);

} // namespace exponents
} // namespace lqgdim

#endif
