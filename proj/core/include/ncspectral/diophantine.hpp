#pragma once

// Continued fractions, badly-approximable scans and Jarnik constructions.
// Exact integers are Boost cpp_int; high-precision reals stay internal.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "ncspectral/weyl.hpp"

namespace ncspectral::dio {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A real number known to arbitrary precision.
struct RealSpec {
  enum class Kind { Rational, Quadratic, Liouville, Quotients };
  Kind kind = Kind::Rational;
  BigInt p = 0, q = 1;                 // Rational
  std::int64_t qa = 0, qb = 0, qc = 0, qd = 1;  // Quadratic: (qa + qb sqrt(qc)) / qd
  int liouville_terms = 0;             // Liouville: sum_{j>=1} 10^-j!, 0 = infinite
  std::vector<BigInt> quotients;       // Quotients: [a0; a1, a2, ...], exact rational value

  static RealSpec rational(BigInt p, BigInt q);
  static RealSpec quadratic(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
  static RealSpec golden() { return quadratic(1, 1, 5, 2); }
  static RealSpec liouville(int terms = 0) {
    RealSpec r;
    r.kind = Kind::Liouville;
    r.liouville_terms = terms;
    return r;
  }
  /// Exact binary value of x.
  static RealSpec from_double(double x);
  /// "[-]d[.d][e[-]d]" read as the exact rational it spells.
  static RealSpec from_decimal(const std::string& s);
  static RealSpec from_quotients(std::vector<BigInt> a);
  /// "golden" (1+sqrt5)/2, "golden-frac" (sqrt5-1)/2, "sqrt:<d>", "rational:p/q",
  /// "liouville[:<terms>]", "cf:a0,a1,..." or a decimal literal.
  static RealSpec parse(const std::string& s);

  double to_double() const;
  std::string describe() const;
};

struct ContinuedFraction {
  std::vector<BigInt> quotients;  // a0, a1, ...
  std::vector<BigInt> p, q;       // convergents p_k / q_k
  /// True when the expansion ended because the number is rational.
  bool terminated = false;
  /// Number of quotients certified by the error bound.
  std::size_t trustworthy_depth = 0;

  static ContinuedFraction from_quotients(std::vector<BigInt> a, bool terminated = false);
  std::size_t depth() const noexcept { return quotients.size(); }
  Rational convergent(std::size_t k) const;
  /// p_k q_{k-1} - p_{k-1} q_k == (-1)^(k-1) and the recurrences, checked exactly.
  bool identities_hold() const;
  double to_double() const;
  std::string to_decimal(int digits) const;
  nlohmann::json to_json() const;
};

/// Throws Error{PrecisionExhausted} if `depth` quotients cannot be certified
/// at `digits` decimal digits; the message states the trustworthy depth.
ContinuedFraction cf_expand(const RealSpec& x, std::size_t depth, int digits = 150);
/// Same expansion, stopping quietly at the trustworthy depth.
ContinuedFraction cf_expand_partial(const RealSpec& x, std::size_t depth, int digits = 150);

struct Witness {
  std::vector<std::int64_t> q;
  BigInt m;
  double distance = 0.0;   // |q.a - m|
  double bound = 0.0;      // c |q|^-delta
  bool ambiguous = false;  // within the precision of a; counted as a violation
};

enum class Verdict { NoViolationUpToQ, ViolationsFound };

struct ApproximabilityReport {
  std::vector<std::string> target;
  double delta = 0.0;
  double c = 0.0;
  std::int64_t qmax = 0;
  std::vector<Witness> witnesses;  // capped, ordered by q
  std::size_t violations = 0;      // total found, may exceed witnesses.size()
  std::size_t scanned = 0;
  std::string method;
  Verdict verdict = Verdict::NoViolationUpToQ;
  std::vector<std::int64_t> u;     // classify_matrix only

  nlohmann::json to_json() const;
};

struct ScanOptions {
  int digits = 60;
  std::size_t witness_cap = 200;
  std::size_t random_samples = 200000;  // n > 2
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Reports every q with 0 < |q|_inf <= qmax and |q.a - m| < c |q|_inf^-delta.
/// Exhaustive for n <= 2 (q and -q are identified), randomized plus
/// convergent-guided for n > 2.
ApproximabilityReport bv_search(const std::vector<RealSpec>& a, double delta, double c,
                                std::int64_t qmax, const ScanOptions& opt = {});

/// Searches u with |u|_inf <= u_bound for a vector (1/2pi) Theta^T u whose
/// nonzero coordinates show no violation up to qmax.
ApproximabilityReport classify_matrix(const weyl::DeformationMatrix& theta, double delta, double c,
                                      std::int64_t qmax, int u_bound = 3,
                                      const ScanOptions& opt = {});

/// Decreasing profile f used by the Jarnik construction.
struct Profile {
  enum class Kind { Power, Exp, PowerLog };
  Kind kind = Kind::Power;
  double alpha = 3.0;
  Rational coefficient = 1;  // Power: f(q) = coefficient * q^-alpha

  static Profile power(double alpha, Rational c = 1);
  static Profile exp();
  static Profile power_log(double alpha);
  /// "power:<alpha>[:<c>]", "exp", "power-log:<alpha>".
  static Profile parse(const std::string& s);
  double operator()(double q) const;
  std::string describe() const;
};

/// |theta - p_k/q_k| < f(q_k) for the constructed theta = p_D/q_D, together
/// with the continuation-independent bound 1/(q_k q_{k+1}) < f(q_k).
struct Certificate {
  std::size_t k = 0;
  BigInt q;
  double log10_error = 0.0;  // log10 |theta - p_k/q_k|
  double log10_gap = 0.0;    // log10 1/(q_k q_{k+1})
  double log10_f = 0.0;      // log10 f(q_k)
  bool exact = false;        // decided in exact rational arithmetic
  bool holds = false;
};

struct JarnikResult {
  ContinuedFraction cf;
  std::vector<Certificate> certificates;
  bool truncated = false;
  bool all_hold() const;
  nlohmann::json to_json() const;
};

/// a_{k+1} = ceil(1 / (q_k^2 f(q_k))) + 1 starting from [0; ...].
/// Throws Error{Precondition} if x^2 f(x) increases on the sample points.
JarnikResult jarnik_construct(const Profile& f, std::size_t depth);

struct ExponentEstimate {
  double value = 0.0;
  std::size_t depth_used = 0;
  bool divergent = false;  // rational input
};

/// max of 2 + ln a_{k+1} / ln q_k over the later half of the indices with
/// q_k >= 2, so the first few quotients do not dominate. Throws if depth < 3.
ExponentEstimate irrationality_exponent_estimate(const ContinuedFraction& cf);

}  // namespace ncspectral::dio
