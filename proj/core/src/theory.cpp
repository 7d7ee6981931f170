#include "polylink/theory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "polylink/error.hpp"

namespace polylink {

namespace {

void require(bool ok, const char* op, const std::string& condition) {
  if (!ok) throw DomainError(std::string(op) + ": requires " + condition);
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// y H(a/y) for y >= a > 0, written as y - a - a log(y/a).
double scaled_rate(double a, double y) { return y * h_function(a / y); }

}  // namespace

BetaMode BetaMode::finite(double beta) {
  require(std::isfinite(beta) && beta >= 0.0, "BetaMode::finite",
          "0 <= beta < inf (got " + fmt_num(beta) + ")");
  BetaMode m;
  m.beta_ = beta;
  return m;
}

double BetaMode::value() const {
  if (!beta_) throw DomainError("BetaMode::value: beta is infinite");
  return *beta_;
}

double h_function(double t) {
  if (!(std::isfinite(t) && t >= 0.0)) require(false, "h_function", "finite t >= 0 (got " + fmt_num(t) + ")");
  if (t == 0.0) return 1.0;
  const double u = t - 1.0;
  if (std::abs(u) < 0.05) {
    // sum_{m>=2} (-u)^m / (m (m-1)); the direct form cancels to ~u^2/2.
    double sum = 0.0;
    double power = u * u;
    for (int m = 2; m < 40; ++m) {
      const double term = power / (static_cast<double>(m) * (m - 1));
      sum += (m % 2 == 0) ? term : -term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      power *= u;
    }
    return sum;
  }
  return 1.0 - t + t * std::log(t);
}

double hhat(double a, double x) {
  // Checked before formatting: this is on hot paths.
  if (!(std::isfinite(a) && a >= 0.0)) require(false, "hhat", "finite a >= 0 (got " + fmt_num(a) + ")");
  if (!(std::isfinite(x) && x >= 0.0)) require(false, "hhat", "finite x >= 0 (got " + fmt_num(x) + ")");
  if (a == 0.0) return x;
  if (x == 0.0) return a;

  double lo = a;
  double hi = a + x + 20.0;
  while (scaled_rate(a, hi) < x) {
    lo = hi;
    hi *= 2.0;
  }
  constexpr double kTol = 1e-12;
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (scaled_rate(a, mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Newton on g(y) = y H(a/y) - x, g'(y) = 1 - a/y > 0 inside the bracket.
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double slope = 1.0 - a / y;
    if (slope <= 0.0) break;
    const double next = y - (scaled_rate(a, y) - x) / slope;
    if (!(next >= a) || !std::isfinite(next)) break;
    if (next == y) break;
    y = next;
  }
  return y;
}

std::string_view to_string(ChernoffKind kind) {
  switch (kind) {
    case ChernoffKind::binom_upper: return "binom_upper";
    case ChernoffKind::binom_lower: return "binom_lower";
    case ChernoffKind::binom_poly: return "binom_poly";
    case ChernoffKind::poisson_lower: return "poisson_lower";
    case ChernoffKind::poisson_point_lb: return "poisson_point_lb";
  }
  return "unknown";
}

std::optional<ChernoffKind> chernoff_kind_from_string(std::string_view name) {
  for (auto kind : {ChernoffKind::binom_upper, ChernoffKind::binom_lower, ChernoffKind::binom_poly,
                    ChernoffKind::poisson_lower, ChernoffKind::poisson_point_lb}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

namespace {

void check_binomial(const char* op, long n, double p, long k) {
  require(n >= 1, op, "n >= 1 (got " + std::to_string(n) + ")");
  require(p > 0.0 && p < 1.0, op, "0 < p < 1 (got " + fmt_num(p) + ")");
  require(k >= 0 && k < n,
          op, "0 <= k < n (got k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
}

void check_rate(const char* op, double t) {
  require(std::isfinite(t) && t > 0.0, op, "finite t > 0 (got " + fmt_num(t) + ")");
}

}  // namespace

double binom_upper_bound(long n, double p, long k) {
  check_binomial("binom_upper", n, p, k);
  const double mean = static_cast<double>(n) * p;
  require(static_cast<double>(k) >= mean, "binom_upper",
          "k >= np (got k=" + std::to_string(k) + ", np=" + fmt_num(mean) + ")");
  return std::exp(-mean * h_function(static_cast<double>(k) / mean));
}

double binom_lower_bound(long n, double p, long k) {
  check_binomial("binom_lower", n, p, k);
  const double mean = static_cast<double>(n) * p;
  require(static_cast<double>(k) <= mean, "binom_lower",
          "k <= np (got k=" + std::to_string(k) + ", np=" + fmt_num(mean) + ")");
  return std::exp(-mean * h_function(static_cast<double>(k) / mean));
}

double binom_poly_bound(long n, double p, long k) {
  check_binomial("binom_poly", n, p, k);
  const double mean = static_cast<double>(n) * p;
  const double e2 = std::exp(2.0);
  require(static_cast<double>(k) >= e2 * mean, "binom_poly",
          "k >= e^2 np (got k=" + std::to_string(k) + ", e^2 np=" + fmt_num(e2 * mean) + ")");
  const double kk = static_cast<double>(k);
  return std::exp(-(kk / 2.0) * std::log(kk / mean));
}

double poisson_lower_bound(double t, long k) {
  check_rate("poisson_lower", t);
  require(k >= 0, "poisson_lower", "k >= 0 (got " + std::to_string(k) + ")");
  require(static_cast<double>(k) < t, "poisson_lower",
          "k < t (got k=" + std::to_string(k) + ", t=" + fmt_num(t) + ")");
  return std::exp(-t * h_function(static_cast<double>(k) / t));
}

double poisson_point_lower_bound(double t, long k) {
  check_rate("poisson_point_lb", t);
  require(k >= 1, "poisson_point_lb", "k >= 1 (got " + std::to_string(k) + ")");
  const double kk = static_cast<double>(k);
  return std::exp(-0.5 * std::log(2.0 * std::numbers::pi * kk) - 1.0 / (12.0 * kk) -
                  t * h_function(kk / t));
}

double chernoff_bound(ChernoffKind kind, double count_or_rate, double p, long k) {
  auto as_count = [&](const char* op) {
    require(std::isfinite(count_or_rate) && count_or_rate == std::floor(count_or_rate), op,
            "integral n (got " + fmt_num(count_or_rate) + ")");
    return static_cast<long>(count_or_rate);
  };
  switch (kind) {
    case ChernoffKind::binom_upper: return binom_upper_bound(as_count("binom_upper"), p, k);
    case ChernoffKind::binom_lower: return binom_lower_bound(as_count("binom_lower"), p, k);
    case ChernoffKind::binom_poly: return binom_poly_bound(as_count("binom_poly"), p, k);
    case ChernoffKind::poisson_lower: return poisson_lower_bound(count_or_rate, k);
    case ChernoffKind::poisson_point_lb: return poisson_point_lower_bound(count_or_rate, k);
  }
  throw DomainError("chernoff_bound: unknown kind");
}

}  // namespace polylink
