#include "ncspectral/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ncspectral/error.hpp"

namespace ncspectral {

Polynomial::Polynomial(int n) : n_(n) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "polynomial needs at least one variable");
}

Polynomial Polynomial::constant(int n, Complex c) {
  Polynomial p(n);
  p.add_term(Exponents(static_cast<std::size_t>(n), 0), c);
  return p;
}

Polynomial Polynomial::monomial(const Exponents& e, Complex c) {
  Polynomial p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  Exponents e(static_cast<std::size_t>(n), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return monomial(e);
}

void Polynomial::add_term(const Exponents& e, Complex c) {
  if (static_cast<int>(e.size()) != n_) {
    throw Error(ErrorKind::DimensionMismatch, "monomial has wrong number of exponents");
  }
  for (int x : e) {
    if (x < 0) throw Error(ErrorKind::Precondition, "negative exponent");
  }
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool Polynomial::is_homogeneous() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    const int s = std::accumulate(e.begin(), e.end(), 0);
    if (d >= 0 && s != d) return false;
    d = s;
  }
  return true;
}

int Polynomial::homogeneous_degree() const {
  if (!is_homogeneous()) throw Error(ErrorKind::Precondition, "polynomial is not homogeneous");
  return degree();
}

Complex Polynomial::constant_term() const {
  const auto it = terms_.find(Exponents(static_cast<std::size_t>(n_), 0));
  return it == terms_.end() ? Complex{} : it->second;
}

Complex Polynomial::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error(ErrorKind::DimensionMismatch, "evaluate");
  Complex s{};
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < e[i]; ++j) m *= x[i];
    }
    s += c * m;
  }
  return s;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "polynomial sum");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "polynomial difference");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.n_ != b.n_) throw Error(ErrorKind::DimensionMismatch, "polynomial product");
  Polynomial r(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial operator*(Complex s, Polynomial a) {
  Polynomial r(a.n_);
  for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
  return r;
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  Polynomial run() {
    Polynomial p(n_);
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    double sign = 1.0;
    if (peek() == '-' || peek() == '+') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    term(p, sign);
    while (skip(), pos_ < s_.size()) {
      const char c = s_[pos_++];
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      term(p, c == '-' ? -1.0 : 1.0);
    }
    return p;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::Config,
                "cannot parse polynomial '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
  }
  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stol(s_.substr(start, pos_ - start));
  }
  double number() {
    skip();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    pos_ += used;
    return v;
  }
  void factor(Polynomial::Exponents& e, double& coeff) {
    skip();
    if (peek() == 'k') {
      ++pos_;
      const long var = integer();
      if (var < 1 || var > n_) fail("variable index outside 1.." + std::to_string(n_));
      long power = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        power = integer();
      }
      e[static_cast<std::size_t>(var - 1)] += static_cast<int>(power);
    } else {
      coeff *= number();
    }
  }
  void term(Polynomial& p, double sign) {
    Polynomial::Exponents e(static_cast<std::size_t>(n_), 0);
    double coeff = sign;
    factor(e, coeff);
    while (skip(), peek() == '*') {
      ++pos_;
      factor(e, coeff);
    }
    p.add_term(e, coeff);
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, int n) { return Parser(text, n).run(); }

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  char buf[64];
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    if (c.imag() == 0.0) {
      std::snprintf(buf, sizeof buf, "%.17g", c.real());
    } else {
      std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
    }
    out += buf;
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      out += "*k" + std::to_string(i + 1);
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

}  // namespace ncspectral
