#pragma once

#include <map>
#include <string>
#include <vector>

#include "ncspectral/numeric.hpp"

namespace ncspectral {

/// Polynomial in k_1..k_n with complex coefficients, keyed by exponent vector.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, Complex>;

  explicit Polynomial(int n);
  static Polynomial constant(int n, Complex c);
  static Polynomial monomial(const Exponents& e, Complex c = 1.0);
  /// k_i with 0-based i.
  static Polynomial variable(int n, int i);

  /// Parses sums of monomials such as "k1^2*k2^2", "3*k1*k2 - k3^2" or "1".
  /// Variables are 1-based (k1..kn). Throws Error{Config} on malformed input.
  static Polynomial parse(const std::string& text, int n);

  int dim() const noexcept { return n_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  void add_term(const Exponents& e, Complex c);

  int degree() const;
  bool is_homogeneous() const;
  /// Throws Error{Precondition} unless homogeneous (0 counts as degree 0).
  int homogeneous_degree() const;
  Complex constant_term() const;

  Complex evaluate(const std::vector<double>& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Complex s, Polynomial a);

  std::string to_string() const;

 private:
  int n_;
  Terms terms_;
};

}  // namespace ncspectral
