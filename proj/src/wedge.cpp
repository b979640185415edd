#include "symbranch/wedge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "symbranch/quadrature.hpp"

namespace sbm {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wedge_angle(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw std::domain_error("wedge_angle: need |rho| < 1");
  return kPi / 2.0 + std::atan(rho / std::sqrt(1.0 - rho * rho));
}

double critical_p(double rho) {
  return kPi / wedge_angle(rho);  // wedge_angle validates rho
}

double critical_rho(double p) {
  if (!(p > 1.0)) throw std::domain_error("critical_rho: need p > 1");
  return -std::cos(kPi / p);
}

WedgeGeometry build_geometry(double u, double v, double rho) {
  if (!(u > 0.0 && v > 0.0))
    throw std::domain_error("build_geometry: start must be strictly inside the quadrant");
  const double theta = wedge_angle(rho);  // validates |rho| < 1
  const double alpha = kPi / theta;
  const double root = std::sqrt(1.0 - rho * rho);
  const double w2 = (v - rho * u) / root;        // decorrelated second coordinate
  const double r0 = std::hypot(u, w2);
  const double phi0 = std::atan2(w2, u);
  const double rot = std::atan(rho / root);      // sector -> cone rotation
  const double angle = alpha * (phi0 + rot);
  WedgeGeometry g;
  g.rho = rho;
  g.u = u;
  g.v = v;
  g.theta = theta;
  g.alpha = alpha;
  g.z1t = std::pow(r0, alpha) * std::cos(angle);
  g.z2t = std::pow(r0, alpha) * std::sin(angle);
  if (u == v) g.z1t = 0.0;  // symmetry axis maps to the imaginary axis
  return g;
}

double exit_axis_probability(const WedgeGeometry& g) {
  // Cauchy(z1t, z2t) mass on the positive half-line.
  return 0.5 + std::atan(g.z1t / g.z2t) / kPi;
}

namespace {

// Half-plane coordinate of a boundary point at distance r from the origin:
// s = (r / sqrt(1-rho^2))^alpha.
double transformed_radius(const WedgeGeometry& g, double r) {
  return std::pow(r / std::sqrt(1.0 - g.rho * g.rho), g.alpha);
}

}  // namespace

double exit_cdf(const WedgeGeometry& g, Axis axis, double r) {
  if (r < 0.0) throw std::domain_error("exit_cdf: r must be nonnegative");
  if (r == 0.0) return 0.0;
  const double s = transformed_radius(g, r);
  if (axis == Axis::x)
    return (std::atan((s - g.z1t) / g.z2t) + std::atan(g.z1t / g.z2t)) / kPi;
  return (std::atan((s + g.z1t) / g.z2t) - std::atan(g.z1t / g.z2t)) / kPi;
}

double exit_density(const WedgeGeometry& g, Axis axis, double r) {
  if (r < 0.0) throw std::domain_error("exit_density: r must be nonnegative");
  if (r == 0.0) return 0.0;
  const double c = std::sqrt(1.0 - g.rho * g.rho);
  const double s = transformed_radius(g, r);
  const double center = (axis == Axis::x) ? g.z1t : -g.z1t;
  const double cauchy = g.z2t / (kPi * (g.z2t * g.z2t + (s - center) * (s - center)));
  return cauchy * g.alpha * std::pow(r / c, g.alpha - 1.0) / c;
}

namespace {

// Half of the p-th moment integral living on one axis, computed in the
// transformed coordinate t = s: integrand (1-rho^2)^(p/2) t^(p/alpha) times
// the Cauchy(center, z2t) density on (0, inf). Split at T0 and map the tail
// through w = (T0/t)^(1-a) so the endpoint singularity disappears.
ExitMoment axis_moment_impl(const WedgeGeometry& g, double center, double p) {
  ExitMoment out;
  const double pc = g.alpha;  // critical order
  out.near_critical = std::fabs(p - pc) < 1e-3;
  if (p >= pc) return out;  // infinite
  const double a = p / g.alpha;  // tail exponent in (0,1)
  const double scale = std::pow(1.0 - g.rho * g.rho, p / 2.0);
  const double z2 = g.z2t;
  auto cauchy = [&](double t) {
    return z2 / (kPi * (z2 * z2 + (t - center) * (t - center)));
  };
  const double T0 = std::max(1.0, 10.0 * (std::fabs(center) + z2));
  const double tol = 1e-12 * std::max(1.0, z2);

  // Head over [0, T0]: substitute t = q^(1/a) so the t^a kink at the origin
  // becomes the smooth factor q^(1/a).
  const double m = 1.0 / a;
  auto head_f = [&](double q) {
    const double t = std::pow(q, m);
    return m * t * cauchy(t);
  };
  const QuadResult head = integrate(head_f, 0.0, std::pow(T0, a), tol);

  // Tail over (T0, inf): substitute w = (T0/t)^(1-a), mapping to (0, 1].
  // The w-power of the Jacobian cancels against t^(a-2), leaving
  //   z2 T0^(a-1) / (pi (1-a)) * 1 / ((z2/t)^2 + (1 - center/t)^2),
  // which is smooth on [0, 1] with 1/t = w^(1/(1-a)) / T0.
  const double tail_const = z2 * std::pow(T0, a - 1.0) / (kPi * (1.0 - a));
  auto tail_f = [&](double w) {
    const double inv_t = (w <= 0.0) ? 0.0 : std::pow(w, 1.0 / (1.0 - a)) / T0;
    const double d1 = z2 * inv_t;
    const double d2 = 1.0 - center * inv_t;
    return tail_const / (d1 * d1 + d2 * d2);
  };
  const QuadResult tail = integrate(tail_f, 0.0, 1.0, tol * std::max(1.0, tail_const));

  out.finite = true;
  out.value = scale * (head.value + tail.value);
  out.err_est = scale * (head.err_est + tail.err_est);
  if (!head.converged || !tail.converged)
    throw std::runtime_error("exit moment quadrature failed to converge");
  return out;
}

}  // namespace

ExitMoment exit_axis_moment(const WedgeGeometry& g, Axis axis, double p) {
  if (!(p > 0.0)) throw std::domain_error("exit moment: p must be positive");
  const double center = (axis == Axis::x) ? g.z1t : -g.z1t;
  return axis_moment_impl(g, center, p);
}

ExitMoment exit_point_moment(const WedgeGeometry& g, double p) {
  if (!(p > 0.0)) throw std::domain_error("exit moment: p must be positive");
  ExitMoment mx = exit_axis_moment(g, Axis::x, p);
  if (!mx.finite) return mx;
  const ExitMoment my = exit_axis_moment(g, Axis::y, p);
  mx.value += my.value;
  mx.err_est += my.err_est;
  mx.near_critical = mx.near_critical || my.near_critical;
  return mx;
}

bool exit_time_moment_finite(double rho, double p) {
  if (!(p > 0.0)) throw std::domain_error("exit_time_moment_finite: p must be positive");
  return p < critical_p(rho);
}

std::vector<CriticalCurvePoint> critical_curve_table(double rho_min, double rho_max,
                                                     std::size_t n_points) {
  if (!(rho_min > -1.0 && rho_max < 1.0 && rho_min <= rho_max))
    throw std::domain_error("critical_curve_table: need -1 < rho_min <= rho_max < 1");
  if (n_points < 2) throw std::domain_error("critical_curve_table: need >= 2 points");
  std::vector<CriticalCurvePoint> table;
  table.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double rho =
        rho_min + (rho_max - rho_min) * static_cast<double>(i) / static_cast<double>(n_points - 1);
    table.push_back({rho, critical_p(rho)});
  }
  return table;
}

}  // namespace sbm
