#pragma once

#include <optional>
#include <string_view>

namespace polylink {

/// Limit of k(n)/log n. Finite(beta) selects the "per log n" normalization,
/// Infinite the "per k(n)" one.
class BetaMode {
 public:
  static BetaMode finite(double beta);
  static BetaMode infinite() { return BetaMode{}; }

  bool is_infinite() const { return !beta_.has_value(); }
  /// Throws DomainError when called on the infinite mode.
  double value() const;

  friend bool operator==(const BetaMode&, const BetaMode&) = default;

 private:
  BetaMode() = default;
  std::optional<double> beta_;
};

/// Rate function H(t) = 1 - t + t log t, with H(0) = 1.
double h_function(double t);

/// Inverse of y -> y H(a/y) on [a, inf): the unique y >= a with y H(a/y) = x.
double hhat(double a, double x);

enum class ChernoffKind {
  binom_upper,       // P[Bin(n,p) >= k] for k >= np
  binom_lower,       // P[Bin(n,p) <= k] for k <= np
  binom_poly,        // P[Bin(n,p) >= k] for k >= e^2 np
  poisson_lower,     // P[Z_t <= k] for k < t
  poisson_point_lb,  // lower bound on P[Z_t = k], k >= 1
};

std::string_view to_string(ChernoffKind kind);
std::optional<ChernoffKind> chernoff_kind_from_string(std::string_view name);

// Binomial bounds. Require n >= 1, 0 < p < 1 and 0 <= k < n, plus the
// kind-specific inequality.
double binom_upper_bound(long n, double p, long k);
double binom_lower_bound(long n, double p, long k);
double binom_poly_bound(long n, double p, long k);

// Poisson bounds, t > 0.
double poisson_lower_bound(double t, long k);
double poisson_point_lower_bound(double t, long k);

/// Dispatches to the bound of the given kind. For the Poisson kinds
/// `count_or_rate` is the rate t and `p` is ignored; for the binomial kinds it
/// is the trial count n and must be integral.
double chernoff_bound(ChernoffKind kind, double count_or_rate, double p, long k);

}  // namespace polylink
