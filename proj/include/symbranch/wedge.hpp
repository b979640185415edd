#ifndef SYMBRANCH_WEDGE_HPP
#define SYMBRANCH_WEDGE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sbm {

// Closed-form exit analytics for rho-correlated planar Brownian motion
// stopped on leaving the positive quadrant. Decorrelating the pair maps the
// quadrant to a wedge of angle theta = pi/2 + arcsin(rho); the conformal map
// z -> z^(pi/theta) then sends the wedge to the upper half-plane, where the
// exit point of Brownian motion is Cauchy distributed.

// Moment order below which p-th moments of the exit point (equivalently
// tau^(p/2)) stay finite: p(rho) = pi / (pi/2 + arctan(rho/sqrt(1-rho^2))).
// Strictly decreasing from +inf (rho -> -1) to 1 (rho -> 1).
double critical_p(double rho);

// Analytic inverse of critical_p: rho(p) = -cos(pi/p) for p > 1.
double critical_rho(double p);

// Wedge angle theta(rho) in (0, pi).
double wedge_angle(double rho);

enum class Axis { x, y };

struct WedgeGeometry {
  double rho;
  double u, v;      // start in the open quadrant
  double theta;     // wedge angle
  double alpha;     // pi / theta, the half-plane map exponent
  double z1t, z2t;  // transformed start in the upper half-plane, z2t > 0
};

// Builds the transformed start: polar form of the decorrelated start in the
// sector, rotated by arcsin(rho), then raised to the power pi/theta.
WedgeGeometry build_geometry(double u, double v, double rho);

// P(exit happens on the x-axis), i.e. the second coordinate hits 0 first.
double exit_axis_probability(const WedgeGeometry& geom);

// P(B1_tau <= r, exit on x-axis) for axis = x; P(B2_tau <= r, exit on
// y-axis) for axis = y. Sub-probability CDF: the r -> inf limit is the axis
// probability. Throws on r < 0.
double exit_cdf(const WedgeGeometry& geom, Axis axis, double r);

// Density of the sub-probability law above.
double exit_density(const WedgeGeometry& geom, Axis axis, double r);

struct ExitMoment {
  bool finite = false;
  double value = 0.0;
  double err_est = 0.0;
  bool near_critical = false;  // p within 1e-3 of the critical order
};

// E[|(B1_tau, B2_tau)|^p]; Infinite (finite=false) iff p >= critical_p(rho).
// Finite values come from adaptive quadrature of the transformed Cauchy
// integral with an exact power-substitution for the tail.
ExitMoment exit_point_moment(const WedgeGeometry& geom, double p);

// First moment restricted to one axis, e.g. E[B1_tau] for axis = x (the
// other coordinate is 0 there). The two axis moments of the same coordinate
// sum to the martingale value: E[B1_tau] = u.
ExitMoment exit_axis_moment(const WedgeGeometry& geom, Axis axis, double p);

// Theorem criterion for E[tau^(p/2)] < infinity: p < pi/theta(rho),
// independent of the start.
bool exit_time_moment_finite(double rho, double p);

// Critical-curve table (rho, p_of_rho) over a uniform rho grid.
struct CriticalCurvePoint {
  double rho;
  double p;
};
std::vector<CriticalCurvePoint> critical_curve_table(double rho_min, double rho_max,
                                                     std::size_t n_points);

}  // namespace sbm

#endif
