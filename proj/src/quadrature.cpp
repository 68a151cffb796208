#include "lopt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "lopt/errors.hpp"

namespace lopt {

namespace {

constexpr mpfr_prec_t kTablePrecision = 1088;

/// Positive Gauss-Legendre abscissae on [-1, 1] with their weights.
struct GaussRule {
  std::vector<BigFloat> nodes;
  std::vector<BigFloat> weights;
};

GaussRule build_rule(int points, Precision p) {
  const int kGaussPoints = points;
  const Precision wp = p + 32;
  GaussRule rule;
  for (int i = 1; i <= kGaussPoints / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    BigFloat x = BigFloat(std::cos(3.14159265358979323846 * (i - 0.25) / (kGaussPoints + 0.5)), wp);
    BigFloat dp(wp);
    for (int iter = 0; iter < 100; ++iter) {
      BigFloat p0(1, wp);
      BigFloat p1 = x;
      for (int n = 2; n <= kGaussPoints; ++n) {
        BigFloat p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = kGaussPoints * (x * p1 - p0) / (x * x - 1);
      const BigFloat step = p1 / dp;
      x -= step;
      if (abs(step) <= ldexp(abs(x), -(wp.bits - 8))) break;
    }
    BigFloat p0(1, wp);
    BigFloat p1 = x;
    for (int n = 2; n <= kGaussPoints; ++n) {
      BigFloat p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    dp = kGaussPoints * (x * p1 - p0) / (x * x - 1);
    rule.weights.push_back((2 / ((1 - x * x) * dp * dp)).at(p));
    rule.nodes.push_back(x.at(p));
  }
  return rule;
}

const GaussRule& table_rule(int points) {
  static std::mutex mu;
  static std::map<int, GaussRule> tables;
  const std::lock_guard<std::mutex> lock(mu);
  auto it = tables.find(points);
  if (it == tables.end()) it = tables.emplace(points, build_rule(points, Precision(kTablePrecision))).first;
  return it->second;
}

GaussRule rule_for(int points, Precision p) {
  if (p.bits > kTablePrecision) return build_rule(points, p);
  const GaussRule& t = table_rule(points);
  GaussRule r;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    r.nodes.push_back(t.nodes[i].at(p));
    r.weights.push_back(t.weights[i].at(p));
  }
  return r;
}

BigFloat checked(const RealFunction& f, const BigFloat& x) {
  BigFloat v = f(x);
  if (!v.is_finite()) {
    throw Error(ErrorKind::DomainError, "integrand is not finite at " + x.str(20));
  }
  return v;
}

BigFloat panel(const RealFunction& f, const GaussRule& rule, const BigFloat& a, const BigFloat& b) {
  const BigFloat mid = (a + b) / 2;
  const BigFloat half = (b - a) / 2;
  BigFloat sum(mid.precision());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const BigFloat dx = half * rule.nodes[i];
    sum += rule.weights[i] * (checked(f, mid - dx) + checked(f, mid + dx));
  }
  return sum * half;
}

struct Interval {
  BigFloat a;
  BigFloat b;
  BigFloat whole;
};

}  // namespace

QuadratureResult integrate_regularized(const RealFunction& f, const BigFloat& a, const BigFloat& b,
                                       EndpointSingularity singularity,
                                       const QuadratureOptions& options) {
  const Precision p(std::max(a.precision().bits, b.precision().bits));
  if (b < a) throw Error(ErrorKind::InvalidArgument, "integration bounds must satisfy a <= b");
  if (a == b) return {BigFloat(0, p), BigFloat(0, p), 0};

  // Reduce every singularity declaration to a plain integral over [lo, hi].
  RealFunction g;
  BigFloat lo(0, p);
  BigFloat hi(p);
  switch (singularity) {
    case EndpointSingularity::None:
    case EndpointSingularity::SimplePoleSubtractedAtA:
      g = f;
      lo = a;
      hi = b;
      break;
    case EndpointSingularity::InverseSqrtAtA:
      g = [&f, &a](const BigFloat& u) { return f(a + u * u) * u * 2; };
      hi = sqrt(b - a);
      break;
    case EndpointSingularity::InverseSqrtAtB:
      g = [&f, &b](const BigFloat& u) { return f(b - u * u) * u * 2; };
      hi = sqrt(b - a);
      break;
  }

  if (options.points < 2 || options.points % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "Gauss rule size must be even and positive");
  }
  const GaussRule rule = rule_for(options.points, p);
  const BigFloat total_width = hi - lo;
  std::vector<Interval> stack;
  stack.push_back({lo, hi, panel(g, rule, lo, hi)});
  const BigFloat rough = abs(stack.back().whole);
  const BigFloat tol = max(options.abs_tol.at(p), rough * BigFloat(options.rel_tol, p));

  BigFloat result(0, p);
  BigFloat error(0, p);
  int panels = 1;
  while (!stack.empty()) {
    Interval iv = std::move(stack.back());
    stack.pop_back();
    const BigFloat mid = (iv.a + iv.b) / 2;
    BigFloat left = panel(g, rule, iv.a, mid);
    BigFloat right = panel(g, rule, mid, iv.b);
    panels += 2;
    const BigFloat refined = left + right;
    const BigFloat diff = abs(refined - iv.whole);
    const BigFloat local_tol = tol * (iv.b - iv.a) / total_width;
    if (diff <= local_tol) {
      result += refined;
      error += diff;
      continue;
    }
    if (panels >= options.max_panels) {
      throw Error(ErrorKind::NonConvergence,
                  "quadrature budget of " + std::to_string(options.max_panels) +
                      " panels exhausted near [" + iv.a.str(12) + ", " + iv.b.str(12) + "]");
    }
    stack.push_back({mid, iv.b, std::move(right)});
    stack.push_back({iv.a, mid, std::move(left)});
  }
  return {result, error, panels};
}

BigFloat integrate(const RealFunction& f, const BigFloat& a, const BigFloat& b,
                   EndpointSingularity singularity, const BigFloat& tol) {
  QuadratureOptions opts;
  opts.abs_tol = tol;
  return integrate_regularized(f, a, b, singularity, opts).value;
}

}  // namespace lopt
