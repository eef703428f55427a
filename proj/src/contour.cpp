#include "lapmor/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lapmor/errors.hpp"
#include "lapmor/fom_laplace.hpp"
#include "lapmor/model.hpp"

namespace lapmor {

using std::numbers::pi;

ParabolicContour::ParabolicContour(double a1_, double a2_) : a1(a1_), a2(a2_) {
  if (!(a1 < 0.0)) throw ConfigError("contour: a1 must be negative");
  if (!(a2 > 0.0)) throw ConfigError("contour: a2 must be positive");
}

std::pair<Complex, Complex> eval_contour(const ParabolicContour& contour, double s) {
  const Complex z(-s * s + contour.a2, -2.0 * s * contour.a1);
  const Complex dz(-2.0 * s, -2.0 * contour.a1);
  return {z, dz};
}

QuadratureGrid build_grid(const ParabolicContour& contour, double c, int N) {
  if (!(c > 0.0)) throw ConfigError("build_grid: c must be positive");
  if (N < 2) throw ConfigError("build_grid: N must be at least 2");
  QuadratureGrid g;
  g.contour = contour;
  g.c = c;
  g.N = N;
  g.xi.resize(N - 1);
  g.z.resize(N - 1);
  g.dz.resize(N - 1);
  const double h = 2.0 * c * pi / N;
  for (int j = 1; j < N; ++j) {
    // Written so that ξ_j and ξ_{N−j} are exact negatives of each other.
    const double xi = (2 * j == N) ? 0.0 : (2 * j < N ? -(N - 2 * j) : (2 * j - N)) * (h / 2.0);
    auto [z, dz] = eval_contour(contour, xi);
    g.xi[j - 1] = xi;
    g.z[j - 1] = z;
    g.dz[j - 1] = dz;
  }
  return g;
}

double truncation_tail(const ParabolicContour& contour, double T, double transform_bound, double c) {
  auto [z, dz] = eval_contour(contour, c * pi);
  return std::exp(z.real() * T) * std::abs(dz) * transform_bound;
}

double choose_truncation(const ParabolicContour& contour, double T, double transform_bound,
                         double tol, const TruncationOptions& opts) {
  if (!(tol > 0.0)) throw ConfigError("choose_truncation: tol must be positive");
  if (!(T > 0.0)) throw ConfigError("choose_truncation: T must be positive");
  if (transform_bound < 0.0) throw ConfigError("choose_truncation: negative transform bound");
  // The tail decreases for x = cπ beyond x*, where 2T(x² + a1²) = 1.
  const double xs = std::sqrt(std::max(0.0, 1.0 / (2.0 * T) - contour.a1 * contour.a1));
  double lo = std::max(opts.c_min, xs / pi);
  if (lo > opts.c_max) throw TruncationFailure("choose_truncation: monotone branch starts beyond c_max");
  auto ok = [&](double c) { return truncation_tail(contour, T, transform_bound, c) <= tol; };
  if (ok(lo)) return lo;
  double hi = opts.c_max;
  if (!ok(hi))
    throw TruncationFailure("choose_truncation: tail " +
                            std::to_string(truncation_tail(contour, T, transform_bound, hi)) +
                            " above tol at c_max");
  while (hi - lo > opts.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

NodeCountResult choose_node_count(const DiscretizedModel& model, const ParabolicContour& contour,
                                  const Parameter& mu_ref, const std::vector<double>& times,
                                  double tol, double c, int cap) {
  if (times.empty()) throw ConfigError("choose_node_count: no times given");
  auto solve = [&](int n) {
    const QuadratureGrid g = build_grid(contour, c, n);
    const auto snaps = solve_nodes(model, g, mu_ref);
    std::vector<Vec> out;
    for (double t : times) out.push_back(invert(g, snaps, t));
    return out;
  };
  NodeCountResult res;
  auto prev = solve(8);
  for (int n = 8; 2 * n <= cap; n *= 2) {
    auto next = solve(2 * n);
    double d = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double den = next[k].norm();
      const double num = (next[k] - prev[k]).norm();
      d = std::max(d, den > 0.0 ? num / den : num);
    }
    res.history.push_back(d);
    res.discrepancy = d;
    if (d <= tol) {
      res.N = 2 * n;
      return res;
    }
    prev = std::move(next);
  }
  throw NodeCountFailure("choose_node_count: no convergence up to N = " + std::to_string(cap),
                         res.discrepancy);
}

ParabolicContour default_contour(const DiscretizedModel& model, const std::vector<Parameter>& probe,
                                 double margin) {
  const auto& hint = model.contour_hint;
  const double a1 = hint.a1.value_or(-1.0);
  if (hint.a2) return ParabolicContour(a1, *hint.a2);
  double right = std::max(0.0, model.spectral_bound(probe));
  for (const auto& mu : probe)
    for (Complex p : model.laplace_rhs().pole_locations(mu)) right = std::max(right, p.real());
  return ParabolicContour(a1, right + margin);
}

double estimate_transform_bound(const DiscretizedModel& model, const ParabolicContour& contour,
                                const std::vector<Parameter>& probe, const std::vector<double>& cs) {
  double bound = 0.0;
  for (const auto& mu : probe)
    for (double c : cs) {
      const Complex z = eval_contour(contour, c * pi).first;
      bound = std::max(bound, solve_transform(model, z, mu).uhat.norm());
    }
  return bound;
}

}  // namespace lapmor
