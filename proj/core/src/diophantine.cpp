#include "ncspectral/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include <gmp.h>
#include <mpfr.h>

#include "ncspectral/error.hpp"

namespace ncspectral::dio {

namespace {

// Thin RAII holder; every value carries its own precision.
class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Mp(const Mp& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Mp& operator=(const Mp& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

void set_big(mpfr_ptr x, const BigInt& b) {
  const std::string s = b.str();
  mpfr_set_str(x, s.c_str(), 10, MPFR_RNDN);
}

BigInt get_big(mpfr_srcptr x, mpfr_rnd_t rnd) {
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, x, rnd);
  char* s = mpz_get_str(nullptr, 10, z);
  BigInt out(s);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(s, std::char_traits<char>::length(s) + 1);
  mpz_clear(z);
  return out;
}

mpfr_prec_t bits_of(const BigInt& b) {
  return b == 0 ? 1 : static_cast<mpfr_prec_t>(boost::multiprecision::msb(abs(b)) + 1);
}

// log10 |r| for a nonzero rational, safe for numbers far outside double range.
double log10_rational(const Rational& r) {
  const BigInt num = abs(boost::multiprecision::numerator(r));
  const BigInt den = boost::multiprecision::denominator(r);
  auto lg = [](const BigInt& b) {
    const auto m = boost::multiprecision::msb(b);
    if (m < 60) return std::log10(b.convert_to<double>());
    const BigInt top = b >> (m - 52);
    return std::log10(top.convert_to<double>()) + static_cast<double>(m - 52) * std::log10(2.0);
  };
  return lg(num) - lg(den);
}

double ln_big(const BigInt& b) { return log10_rational(Rational(b)) * std::log(10.0); }

bool is_square(std::int64_t c, std::int64_t& root) {
  if (c < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(c))));
  for (std::int64_t t = std::max<std::int64_t>(0, r - 2); t <= r + 2; ++t) {
    if (t * t == c) {
      root = t;
      return true;
    }
  }
  return false;
}

std::optional<Rational> exact_value(const RealSpec& x) {
  switch (x.kind) {
    case RealSpec::Kind::Rational:
      return Rational(x.p, x.q);
    case RealSpec::Kind::Quotients: {
      if (x.quotients.empty()) return Rational(0);
      Rational v(x.quotients.back());
      for (auto it = x.quotients.rbegin() + 1; it != x.quotients.rend(); ++it) v = Rational(*it) + 1 / v;
      return v;
    }
    case RealSpec::Kind::Quadratic: {
      std::int64_t r = 0;
      if (x.qb == 0) return Rational(BigInt(x.qa), BigInt(x.qd));
      if (is_square(x.qc, r)) return Rational(BigInt(x.qa) + BigInt(x.qb) * r, BigInt(x.qd));
      return std::nullopt;
    }
    case RealSpec::Kind::Liouville:
      if (x.liouville_terms > 0) {
        Rational s = 0;
        BigInt f = 1;
        for (int j = 1; j <= x.liouville_terms; ++j) {
          f *= j;
          s += Rational(BigInt(1), boost::multiprecision::pow(BigInt(10), f.convert_to<unsigned>()));
        }
        return s;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

// Value and an absolute error bound at `prec` bits.
struct Approx {
  Mp v;
  Mp err;
  explicit Approx(mpfr_prec_t prec) : v(prec), err(64) {}
};

void set_rational(mpfr_ptr out, const Rational& r) {
  const BigInt& n = boost::multiprecision::numerator(r);
  const BigInt& d = boost::multiprecision::denominator(r);
  const mpfr_prec_t w = std::max(bits_of(n), bits_of(d)) + 8;
  Mp a(w), b(w);
  set_big(a.get(), n);
  set_big(b.get(), d);
  mpfr_div(out, a.get(), b.get(), MPFR_RNDN);
}

void ulp_error(Approx& a, double ulps) {
  // |x| 2^(1-prec) * ulps, plus a floor for x == 0.
  mpfr_set_d(a.err.get(), ulps, MPFR_RNDU);
  mpfr_mul_2si(a.err.get(), a.err.get(), 1 - static_cast<long>(a.v.prec()), MPFR_RNDU);
  Mp mag(64);
  mpfr_abs(mag.get(), a.v.get(), MPFR_RNDU);
  if (mpfr_cmp_ui(mag.get(), 1) < 0) mpfr_set_ui(mag.get(), 1, MPFR_RNDU);
  mpfr_mul(a.err.get(), a.err.get(), mag.get(), MPFR_RNDU);
}

Approx evaluate(const RealSpec& x, mpfr_prec_t prec) {
  Approx a(prec);
  if (auto r = exact_value(x)) {
    set_rational(a.v.get(), *r);
    ulp_error(a, 1.0);
    return a;
  }
  if (x.kind == RealSpec::Kind::Quadratic) {
    if (x.qc < 0) throw Error(ErrorKind::Precondition, "quadratic real needs c >= 0");
    mpfr_set_si(a.v.get(), x.qc, MPFR_RNDN);
    mpfr_sqrt(a.v.get(), a.v.get(), MPFR_RNDN);
    mpfr_mul_si(a.v.get(), a.v.get(), x.qb, MPFR_RNDN);
    mpfr_add_si(a.v.get(), a.v.get(), x.qa, MPFR_RNDN);
    mpfr_div_si(a.v.get(), a.v.get(), x.qd, MPFR_RNDN);
    ulp_error(a, 8.0);
    return a;
  }
  // Infinite Liouville sum: terms past the precision go into the error.
  const double digits = static_cast<double>(prec) * std::log10(2.0);
  Mp term(prec);
  double fact = 1.0;
  int j = 1;
  for (;; ++j) {
    fact *= j;
    if (fact > digits + 20) break;
    mpfr_set_ui(term.get(), 10, MPFR_RNDN);
    mpfr_pow_si(term.get(), term.get(), -static_cast<long>(fact), MPFR_RNDN);
    mpfr_add(a.v.get(), a.v.get(), term.get(), MPFR_RNDN);
  }
  ulp_error(a, 2.0 * j);
  Mp tail(64);
  mpfr_set_ui(tail.get(), 10, MPFR_RNDU);
  mpfr_pow_si(tail.get(), tail.get(), -static_cast<long>(std::min(fact, 1e9)), MPFR_RNDU);
  mpfr_mul_ui(tail.get(), tail.get(), 2, MPFR_RNDU);
  mpfr_add(a.err.get(), a.err.get(), tail.get(), MPFR_RNDU);
  return a;
}

mpfr_prec_t prec_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 32;
}

std::string big_str(const BigInt& b) { return b.str(); }

}  // namespace

// ---------------------------------------------------------------- RealSpec

RealSpec RealSpec::rational(BigInt p, BigInt q) {
  if (q == 0) throw Error(ErrorKind::Precondition, "rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const BigInt g = boost::multiprecision::gcd(p, q);
  RealSpec r;
  r.kind = Kind::Rational;
  r.p = g == 0 ? p : p / g;
  r.q = g == 0 ? q : q / g;
  return r;
}

RealSpec RealSpec::quadratic(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (d == 0) throw Error(ErrorKind::Precondition, "quadratic real with zero denominator");
  if (c < 0) throw Error(ErrorKind::Precondition, "quadratic real needs c >= 0");
  RealSpec r;
  r.kind = Kind::Quadratic;
  r.qa = a;
  r.qb = b;
  r.qc = c;
  r.qd = d;
  return r;
}

RealSpec RealSpec::from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::Precondition, "non-finite real");
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  BigInt p = mant, q = 1;
  if (e >= 0) p <<= e;
  else q <<= -e;
  return rational(p, q);
}

RealSpec RealSpec::from_decimal(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  BigInt num = 0;
  long scale = 0;
  bool any = false, dot = false;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch >= '0' && ch <= '9') {
      num = num * 10 + (ch - '0');
      if (dot) --scale;
      any = true;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw Error(ErrorKind::Config, "not a number: '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) eneg = s[i++] == '-';
    long ex = 0;
    bool edig = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      ex = ex * 10 + (s[i] - '0');
      edig = true;
      if (ex > 100000) throw Error(ErrorKind::Config, "exponent too large: '" + s + "'");
    }
    if (!edig) throw Error(ErrorKind::Config, "not a number: '" + s + "'");
    scale += eneg ? -ex : ex;
  }
  if (i != s.size()) throw Error(ErrorKind::Config, "not a number: '" + s + "'");
  if (neg) num = -num;
  const BigInt pw = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(scale)));
  return scale >= 0 ? rational(num * pw, 1) : rational(num, pw);
}

RealSpec RealSpec::from_quotients(std::vector<BigInt> a) {
  if (a.empty()) throw Error(ErrorKind::Precondition, "empty quotient list");
  for (std::size_t k = 1; k < a.size(); ++k) {
    if (a[k] <= 0) throw Error(ErrorKind::Precondition, "partial quotients past a0 must be positive");
  }
  RealSpec r;
  r.kind = Kind::Quotients;
  r.quotients = std::move(a);
  return r;
}

RealSpec RealSpec::parse(const std::string& s) {
  auto to_i64 = [&](const std::string& t) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return static_cast<std::int64_t>(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "bad integer '" + t + "' in real '" + s + "'");
    }
  };
  if (s == "golden") return golden();
  if (s == "golden-frac") return quadratic(-1, 1, 5, 2);
  if (s == "sqrt2") return quadratic(0, 1, 2, 1);
  if (s.rfind("sqrt:", 0) == 0) return quadratic(0, 1, to_i64(s.substr(5)), 1);
  if (s == "liouville") return liouville();
  if (s.rfind("liouville:", 0) == 0) {
    const auto t = to_i64(s.substr(10));
    if (t < 1 || t > 8) throw Error(ErrorKind::Config, "liouville terms must lie in [1, 8]");
    return liouville(static_cast<int>(t));
  }
  if (s.rfind("rational:", 0) == 0) {
    const auto body = s.substr(9);
    const auto slash = body.find('/');
    if (slash == std::string::npos) throw Error(ErrorKind::Config, "expected rational:p/q, got '" + s + "'");
    const auto q = to_i64(body.substr(slash + 1));
    if (q == 0) throw Error(ErrorKind::Config, "zero denominator in '" + s + "'");
    return rational(to_i64(body.substr(0, slash)), q);
  }
  if (s.rfind("cf:", 0) == 0) {
    std::vector<BigInt> a;
    std::size_t start = 3;
    while (start <= s.size()) {
      const auto comma = s.find(',', start);
      const auto tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      a.emplace_back(to_i64(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    try {
      return from_quotients(std::move(a));
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, e.what());
    }
  }
  return from_decimal(s);
}

double RealSpec::to_double() const { return evaluate(*this, 128).v.to_double(); }

std::string RealSpec::describe() const {
  switch (kind) {
    case Kind::Rational:
      return q == 1 ? big_str(p) : big_str(p) + "/" + big_str(q);
    case Kind::Quadratic: {
      char buf[160];
      std::snprintf(buf, sizeof buf, "(%lld + %lld*sqrt(%lld))/%lld", static_cast<long long>(qa),
                    static_cast<long long>(qb), static_cast<long long>(qc), static_cast<long long>(qd));
      return buf;
    }
    case Kind::Liouville:
      return liouville_terms > 0 ? "liouville:" + std::to_string(liouville_terms) : "liouville";
    case Kind::Quotients: {
      std::string out = "cf:";
      for (std::size_t k = 0; k < quotients.size(); ++k) out += (k ? "," : "") + big_str(quotients[k]);
      return out;
    }
  }
  return "?";
}

// ------------------------------------------------------- ContinuedFraction

ContinuedFraction ContinuedFraction::from_quotients(std::vector<BigInt> a, bool terminated) {
  ContinuedFraction cf;
  cf.quotients = std::move(a);
  cf.terminated = terminated;
  cf.trustworthy_depth = cf.quotients.size();
  BigInt pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
  for (const auto& ak : cf.quotients) {
    BigInt pk = ak * pm1 + pm2, qk = ak * qm1 + qm2;
    cf.p.push_back(pk);
    cf.q.push_back(qk);
    pm2 = pm1;
    pm1 = pk;
    qm2 = qm1;
    qm1 = qk;
  }
  return cf;
}

Rational ContinuedFraction::convergent(std::size_t k) const {
  if (k >= p.size()) throw Error(ErrorKind::OutOfRange, "convergent index past depth");
  return Rational(p[k], q[k]);
}

bool ContinuedFraction::identities_hold() const {
  if (p.size() != quotients.size() || q.size() != quotients.size()) return false;
  for (std::size_t k = 0; k < quotients.size(); ++k) {
    const BigInt pm1 = k >= 1 ? p[k - 1] : BigInt(1), qm1 = k >= 1 ? q[k - 1] : BigInt(0);
    const BigInt pm2 = k >= 2 ? p[k - 2] : (k == 1 ? BigInt(1) : BigInt(0));
    const BigInt qm2 = k >= 2 ? q[k - 2] : (k == 1 ? BigInt(0) : BigInt(1));
    if (p[k] != quotients[k] * pm1 + pm2 || q[k] != quotients[k] * qm1 + qm2) return false;
    if (k >= 1 && quotients[k] <= 0) return false;
    const BigInt det = p[k] * qm1 - pm1 * q[k];
    const BigInt sign = (k % 2 == 1) ? BigInt(1) : BigInt(-1);  // (-1)^(k-1)
    if (det != sign) return false;
  }
  return true;
}

double ContinuedFraction::to_double() const {
  if (p.empty()) return 0.0;
  return RealSpec::rational(p.back(), q.back()).to_double();
}

std::string ContinuedFraction::to_decimal(int digits) const {
  if (p.empty()) return "0";
  BigInt num = p.back(), den = q.back();
  const bool neg = num < 0;
  if (neg) num = -num;
  const BigInt scaled = num * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits)) / den;
  std::string s = scaled.str();
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return (neg ? "-" : "") + s;
}

nlohmann::json ContinuedFraction::to_json() const {
  nlohmann::json j;
  j["quotients"] = nlohmann::json::array();
  j["convergents"] = nlohmann::json::array();
  for (std::size_t k = 0; k < quotients.size(); ++k) {
    j["quotients"].push_back(big_str(quotients[k]));
    j["convergents"].push_back({{"p", big_str(p[k])}, {"q", big_str(q[k])}});
  }
  j["terminated"] = terminated;
  j["trustworthy_depth"] = trustworthy_depth;
  return j;
}

namespace {

ContinuedFraction expand(const RealSpec& x, std::size_t depth, int digits, bool strict) {
  if (auto r = exact_value(x)) {
    // Euclid on the exact value.
    std::vector<BigInt> a;
    BigInt num = boost::multiprecision::numerator(*r), den = boost::multiprecision::denominator(*r);
    bool done = false;
    while (a.size() < depth) {
      BigInt fl = num / den;
      if (num < 0 && fl * den != num) fl -= 1;
      a.push_back(fl);
      const BigInt rem = num - fl * den;
      if (rem == 0) {
        done = true;
        break;
      }
      num = den;
      den = rem;
    }
    return ContinuedFraction::from_quotients(std::move(a), done);
  }

  const mpfr_prec_t prec = prec_for_digits(digits);
  Approx cur = evaluate(x, prec);
  std::vector<BigInt> a;
  Mp lo(prec), hi(prec), r(prec), tmp(prec);
  while (a.size() < depth) {
    mpfr_sub(lo.get(), cur.v.get(), cur.err.get(), MPFR_RNDD);
    mpfr_add(hi.get(), cur.v.get(), cur.err.get(), MPFR_RNDU);
    mpfr_floor(lo.get(), lo.get());
    mpfr_floor(hi.get(), hi.get());
    if (!mpfr_equal_p(lo.get(), hi.get())) break;
    const BigInt fl = get_big(lo.get(), MPFR_RNDN);
    a.push_back(fl);
    // r = x - a, error unchanged up to rounding; next x = 1/r.
    mpfr_sub(r.get(), cur.v.get(), lo.get(), MPFR_RNDN);
    mpfr_sub(tmp.get(), r.get(), cur.err.get(), MPFR_RNDD);
    if (mpfr_sgn(tmp.get()) <= 0) break;  // fractional part not separated from 0
    // |1/r - 1/r'| <= e / (r (r - e)), plus one rounding.
    Mp e(64);
    mpfr_mul(tmp.get(), tmp.get(), r.get(), MPFR_RNDD);
    mpfr_div(e.get(), cur.err.get(), tmp.get(), MPFR_RNDU);
    mpfr_ui_div(cur.v.get(), 1, r.get(), MPFR_RNDN);
    cur.err = e;
    Approx rounding(prec);
    mpfr_set(rounding.v.get(), cur.v.get(), MPFR_RNDN);
    ulp_error(rounding, 2.0);
    mpfr_add(cur.err.get(), cur.err.get(), rounding.err.get(), MPFR_RNDU);
  }
  const std::size_t got = a.size();
  if (got < depth && strict) {
    throw Error(ErrorKind::PrecisionExhausted,
                "continued fraction of " + x.describe() + ": only " + std::to_string(got) +
                    " quotients are trustworthy at " + std::to_string(digits) + " digits (requested " +
                    std::to_string(depth) + ")");
  }
  auto cf = ContinuedFraction::from_quotients(std::move(a), false);
  cf.trustworthy_depth = got;
  return cf;
}

}  // namespace

ContinuedFraction cf_expand(const RealSpec& x, std::size_t depth, int digits) {
  return expand(x, depth, digits, true);
}

ContinuedFraction cf_expand_partial(const RealSpec& x, std::size_t depth, int digits) {
  return expand(x, depth, digits, false);
}

// --------------------------------------------------------------- BV scans

namespace {

struct Target {
  std::vector<long double> ld;  // a_j in long double
  std::vector<Approx> hp;       // a_j at working precision
  long double slack_per_q = 0;  // long double error per unit |q|_1
};

Target make_target(const std::vector<RealSpec>& a, int digits) {
  Target t;
  const mpfr_prec_t prec = prec_for_digits(digits);
  long double mag = 1;
  for (const auto& x : a) {
    t.hp.push_back(evaluate(x, prec));
    t.ld.push_back(t.hp.back().v.to_ld());
    mag = std::max(mag, std::fabs(t.ld.back()));
  }
  t.slack_per_q = 16 * mag * std::numeric_limits<long double>::epsilon() * static_cast<long double>(a.size());
  return t;
}

double bound_of(double c, double delta, std::int64_t qn) {
  return c * std::pow(static_cast<double>(qn), -delta);
}

// Recheck a candidate at high precision. Returns false when no violation.
bool recheck(const Target& t, const std::vector<std::int64_t>& q, double c, double delta, Witness& w) {
  const mpfr_prec_t prec = t.hp.front().v.prec();
  Mp s(prec), term(prec), err(64), eterm(64);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] == 0) continue;
    mpfr_mul_si(term.get(), t.hp[j].v.get(), q[j], MPFR_RNDN);
    mpfr_add(s.get(), s.get(), term.get(), MPFR_RNDN);
    mpfr_mul_ui(eterm.get(), t.hp[j].err.get(), static_cast<unsigned long>(std::llabs(q[j])), MPFR_RNDU);
    mpfr_add(err.get(), err.get(), eterm.get(), MPFR_RNDU);
  }
  Mp m(prec), d(prec);
  mpfr_round(m.get(), s.get());
  mpfr_sub(d.get(), s.get(), m.get(), MPFR_RNDN);
  mpfr_abs(d.get(), d.get(), MPFR_RNDN);
  // Rounding of the accumulation.
  Mp rnd(64);
  mpfr_abs(rnd.get(), s.get(), MPFR_RNDU);
  mpfr_add_ui(rnd.get(), rnd.get(), 1, MPFR_RNDU);
  mpfr_mul_2si(rnd.get(), rnd.get(), 4 - static_cast<long>(prec), MPFR_RNDU);
  mpfr_mul_ui(rnd.get(), rnd.get(), static_cast<unsigned long>(q.size() + 1), MPFR_RNDU);
  mpfr_add(err.get(), err.get(), rnd.get(), MPFR_RNDU);

  std::int64_t qn = 0;
  for (auto v : q) qn = std::max<std::int64_t>(qn, std::llabs(v));
  Mp bound(prec);
  mpfr_set_ui(bound.get(), static_cast<unsigned long>(qn), MPFR_RNDN);
  Mp de(64);
  mpfr_set_d(de.get(), -delta, MPFR_RNDN);
  mpfr_pow(bound.get(), bound.get(), de.get(), MPFR_RNDN);
  mpfr_mul_d(bound.get(), bound.get(), c, MPFR_RNDN);

  Mp lo(prec), hi(prec);
  mpfr_sub(lo.get(), d.get(), err.get(), MPFR_RNDD);
  mpfr_add(hi.get(), d.get(), err.get(), MPFR_RNDU);
  if (mpfr_cmp(lo.get(), bound.get()) >= 0) return false;
  w.q = q;
  w.m = get_big(m.get(), MPFR_RNDN);
  w.distance = d.to_double();
  w.bound = bound.to_double();
  w.ambiguous = mpfr_cmp(hi.get(), bound.get()) >= 0;
  return true;
}

bool witness_less(const Witness& x, const Witness& y) {
  std::int64_t nx = 0, ny = 0;
  for (auto v : x.q) nx = std::max<std::int64_t>(nx, std::llabs(v));
  for (auto v : y.q) ny = std::max<std::int64_t>(ny, std::llabs(v));
  if (nx != ny) return nx < ny;
  return x.q < y.q;
}

struct Partial {
  std::vector<Witness> hits;
  std::size_t scanned = 0;
};

// Candidate filter in long double, then recheck.
void test_point(const Target& t, const std::vector<std::int64_t>& q, std::int64_t qn, double c, double delta,
                Partial& out) {
  long double s = 0;
  std::int64_t q1 = 0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    s += static_cast<long double>(q[j]) * t.ld[j];
    q1 += std::llabs(q[j]);
  }
  const long double d = std::fabs(s - std::nearbyint(s));
  ++out.scanned;
  const long double b = static_cast<long double>(bound_of(c, delta, qn));
  if (d < b * 1.000001L + t.slack_per_q * static_cast<long double>(q1) + 1e-300L) {
    Witness w;
    if (recheck(t, q, c, delta, w)) out.hits.push_back(std::move(w));
  }
}

template <class Work>
std::vector<Partial> run_ranges(std::int64_t lo, std::int64_t hi, unsigned threads, Work work) {
  threads = std::max(1u, threads);
  const std::int64_t span = hi - lo + 1;
  const auto nt = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(1, span)));
  std::vector<Partial> parts(nt);
  if (nt == 1) {
    work(lo, hi, parts[0]);
    return parts;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < nt; ++i) {
    const std::int64_t a = lo + span * i / nt, b = lo + span * (i + 1) / nt - 1;
    pool.emplace_back([&, a, b, i] { work(a, b, parts[i]); });
  }
  for (auto& th : pool) th.join();
  return parts;
}

}  // namespace

nlohmann::json ApproximabilityReport::to_json() const {
  nlohmann::json j;
  j["target"] = target;
  j["delta"] = delta;
  j["c"] = c;
  j["qmax"] = qmax;
  j["method"] = method;
  j["scanned"] = scanned;
  j["violations"] = violations;
  j["verdict"] = verdict == Verdict::NoViolationUpToQ ? "no-violation-up-to-Q" : "violations-found";
  if (!u.empty()) j["u"] = u;
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : witnesses) {
    j["witnesses"].push_back({{"q", w.q},
                              {"m", big_str(w.m)},
                              {"distance", w.distance},
                              {"bound", w.bound},
                              {"ambiguous", w.ambiguous}});
  }
  return j;
}

ApproximabilityReport bv_search(const std::vector<RealSpec>& a, double delta, double c, std::int64_t qmax,
                                const ScanOptions& opt) {
  if (qmax < 1) throw Error(ErrorKind::Precondition, "bv_search needs Qmax >= 1");
  if (a.empty()) throw Error(ErrorKind::Precondition, "bv_search needs a nonempty target");
  ApproximabilityReport rep;
  for (const auto& x : a) rep.target.push_back(x.describe());
  rep.delta = delta;
  rep.c = c;
  rep.qmax = qmax;
  const Target t = make_target(a, opt.digits);
  const std::size_t n = a.size();
  std::vector<Partial> parts;

  if (n == 1) {
    rep.method = "exhaustive";
    parts = run_ranges(1, qmax, opt.threads, [&](std::int64_t lo, std::int64_t hi, Partial& out) {
      std::vector<std::int64_t> q(1);
      for (std::int64_t k = lo; k <= hi; ++k) {
        q[0] = k;
        test_point(t, q, k, c, delta, out);
      }
    });
  } else if (n == 2) {
    rep.method = "exhaustive";
    // Half-space: q1 > 0, or q1 == 0 and q2 > 0.
    parts = run_ranges(0, qmax, opt.threads, [&](std::int64_t lo, std::int64_t hi, Partial& out) {
      std::vector<std::int64_t> q(2);
      for (std::int64_t q1 = lo; q1 <= hi; ++q1) {
        for (std::int64_t q2 = (q1 == 0 ? 1 : -qmax); q2 <= qmax; ++q2) {
          q[0] = q1;
          q[1] = q2;
          test_point(t, q, std::max<std::int64_t>(q1, std::llabs(q2)), c, delta, out);
        }
      }
    });
  } else {
    rep.method = "randomized+convergents";
    Partial out;
    std::vector<std::int64_t> q(n);
    auto visit = [&] {
      std::int64_t qn = 0;
      for (auto v : q) qn = std::max<std::int64_t>(qn, std::llabs(v));
      if (qn == 0 || qn > qmax) return;
      test_point(t, q, qn, c, delta, out);
    };
    // Small box, exhaustively.
    std::int64_t r = 1;
    while (std::pow(2.0 * static_cast<double>(r + 1) + 1, static_cast<double>(n)) <= 2e5 && r + 1 <= qmax) ++r;
    std::vector<std::int64_t> idx(n, -r);
    for (;;) {
      q = idx;
      visit();
      std::size_t j = 0;
      while (j < n && ++idx[j] > r) idx[j++] = -r;
      if (j == n) break;
    }
    // Convergent denominators of each coordinate, and of the pairwise sums.
    auto along = [&](const std::vector<std::int64_t>& dir) {
      long double x = 0;
      for (std::size_t j = 0; j < n; ++j) x += static_cast<long double>(dir[j]) * t.ld[j];
      std::vector<RealSpec> one{RealSpec::from_double(static_cast<double>(x - std::nearbyint(x)))};
      const auto cf = cf_expand_partial(one.front(), 40, 40);
      for (const auto& qk : cf.q) {
        if (qk <= 0 || qk > BigInt(qmax)) continue;
        const auto s = qk.convert_to<std::int64_t>();
        for (std::size_t j = 0; j < n; ++j) q[j] = dir[j] * s;
        visit();
      }
    };
    std::vector<std::int64_t> dir(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(dir.begin(), dir.end(), 0);
      dir[i] = 1;
      along(dir);
      for (std::size_t k = i + 1; k < n; ++k) {
        dir[k] = 1;
        along(dir);
        dir[k] = -1;
        along(dir);
        dir[k] = 0;
      }
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::int64_t> coord(-qmax, qmax);
    for (std::size_t s = 0; s < opt.random_samples; ++s) {
      for (auto& v : q) v = coord(rng);
      visit();
    }
    parts.push_back(std::move(out));
  }

  std::vector<Witness> all;
  for (auto& p : parts) {
    rep.scanned += p.scanned;
    for (auto& w : p.hits) all.push_back(std::move(w));
  }
  std::sort(all.begin(), all.end(), witness_less);
  all.erase(std::unique(all.begin(), all.end(), [](const Witness& x, const Witness& y) { return x.q == y.q; }),
            all.end());
  rep.violations = all.size();
  if (all.size() > opt.witness_cap) all.resize(opt.witness_cap);
  rep.witnesses = std::move(all);
  rep.verdict = rep.violations == 0 ? Verdict::NoViolationUpToQ : Verdict::ViolationsFound;
  return rep;
}

ApproximabilityReport classify_matrix(const weyl::DeformationMatrix& theta, double delta, double c,
                                      std::int64_t qmax, int u_bound, const ScanOptions& opt) {
  const int n = theta.dim();
  ApproximabilityReport first_failure;
  bool have_failure = false;
  if (theta.is_zero()) {
    first_failure.target = {"0"};
    first_failure.delta = delta;
    first_failure.c = c;
    first_failure.qmax = qmax;
    first_failure.method = "zero-matrix";
    Witness w;
    w.q = std::vector<std::int64_t>(static_cast<std::size_t>(n), 0);
    w.q[0] = 1;
    w.bound = c;
    first_failure.witnesses.push_back(w);
    first_failure.violations = 1;
    first_failure.verdict = Verdict::ViolationsFound;
    first_failure.u = std::vector<std::int64_t>(static_cast<std::size_t>(n), 0);
    first_failure.u[0] = 1;
    return first_failure;
  }
  // One of each +-u pair with |u|_inf <= u_bound.
  std::vector<Point> us;
  for (int b = 1; b <= u_bound; ++b) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n), -b);
    for (;;) {
      Point u(std::span<const std::int64_t>(idx.data(), idx.size()));
      if (u.max_norm() == b && u > -u) us.push_back(u);
      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] > b) idx[j++] = -b;
      if (j == idx.size()) break;
    }
  }
  // Sparse u first, so unit vectors (rows of Theta) are tried before mixtures.
  auto support_size = [](const Point& u) {
    int s = 0;
    for (int i = 0; i < u.dim(); ++i) s += u[i] != 0;
    return s;
  };
  std::stable_sort(us.begin(), us.end(), [&](const Point& x, const Point& y) {
    if (x.max_norm() != y.max_norm()) return x.max_norm() < y.max_norm();
    if (support_size(x) != support_size(y)) return support_size(x) < support_size(y);
    return x > y;
  });
  const double two_pi = 2.0 * std::acos(-1.0);
  for (const auto& u : us) {
    const auto col = theta.transpose_apply(u);
    std::vector<RealSpec> sub;
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < col.size(); ++j) {
      if (col[j] != 0.0) {
        sub.push_back(RealSpec::from_double(col[j] / two_pi));
        support.push_back(j);
      }
    }
    if (sub.empty()) continue;
    auto rep = bv_search(sub, delta, c, qmax, opt);
    rep.u = u.to_vector();
    rep.method = "support-restricted " + rep.method;
    // Lift witnesses back to Z^n.
    for (auto& w : rep.witnesses) {
      std::vector<std::int64_t> full(static_cast<std::size_t>(n), 0);
      for (std::size_t j = 0; j < support.size(); ++j) full[support[j]] = w.q[j];
      w.q = std::move(full);
    }
    if (rep.verdict == Verdict::NoViolationUpToQ) return rep;
    if (!have_failure) {
      first_failure = std::move(rep);
      have_failure = true;
    }
  }
  return first_failure;
}

// ------------------------------------------------------------------ Jarnik

Profile Profile::power(double alpha, Rational c) {
  if (!(alpha > 0) || c <= 0) throw Error(ErrorKind::Precondition, "power profile needs alpha > 0, c > 0");
  Profile f;
  f.kind = Kind::Power;
  f.alpha = alpha;
  f.coefficient = c;
  return f;
}

Profile Profile::exp() {
  Profile f;
  f.kind = Kind::Exp;
  return f;
}

Profile Profile::power_log(double alpha) {
  if (!(alpha > 0)) throw Error(ErrorKind::Precondition, "power-log profile needs alpha > 0");
  Profile f;
  f.kind = Kind::PowerLog;
  f.alpha = alpha;
  return f;
}

Profile Profile::parse(const std::string& s) {
  auto num = [&](const std::string& t) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "bad number '" + t + "' in profile '" + s + "'");
    }
  };
  try {
    if (s == "exp") return exp();
    if (s.rfind("power-log:", 0) == 0) return power_log(num(s.substr(10)));
    if (s.rfind("power:", 0) == 0) {
      const auto body = s.substr(6);
      const auto colon = body.find(':');
      if (colon == std::string::npos) return power(num(body));
      const RealSpec c = RealSpec::from_decimal(body.substr(colon + 1));
      return power(num(body.substr(0, colon)), Rational(c.p, c.q));
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  throw Error(ErrorKind::Config, "unknown profile '" + s + "' (power:<alpha>[:<c>], exp, power-log:<alpha>)");
}

double Profile::operator()(double q) const {
  switch (kind) {
    case Kind::Power:
      return coefficient.convert_to<double>() * std::pow(q, -alpha);
    case Kind::Exp:
      return std::exp(-q);
    case Kind::PowerLog:
      return std::pow(q, -alpha) / std::log(std::exp(1.0) + q);
  }
  return 0.0;
}

std::string Profile::describe() const {
  char buf[96];
  switch (kind) {
    case Kind::Power:
      std::snprintf(buf, sizeof buf, "power:%.17g", alpha);
      return coefficient == 1 ? std::string(buf) : std::string(buf) + ":" + coefficient.str();
    case Kind::Exp:
      return "exp";
    case Kind::PowerLog:
      std::snprintf(buf, sizeof buf, "power-log:%.17g", alpha);
      return buf;
  }
  return "?";
}

bool JarnikResult::all_hold() const {
  return !certificates.empty() &&
         std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.holds; });
}

nlohmann::json JarnikResult::to_json() const {
  nlohmann::json j;
  j["continued_fraction"] = cf.to_json();
  j["truncated"] = truncated;
  j["all_hold"] = all_hold();
  j["certificates"] = nlohmann::json::array();
  for (const auto& c : certificates) {
    j["certificates"].push_back({{"k", c.k},
                                 {"q", big_str(c.q)},
                                 {"log10_error", c.log10_error},
                                 {"log10_gap", c.log10_gap},
                                 {"log10_f", c.log10_f},
                                 {"exact", c.exact},
                                 {"holds", c.holds}});
  }
  return j;
}

namespace {

bool integer_alpha(const Profile& f) {
  return f.kind == Profile::Kind::Power && f.alpha == std::floor(f.alpha) && f.alpha <= 64;
}

// log f(q) at high precision, q an exact integer.
void log_f(const Profile& f, const BigInt& q, Mp& out) {
  const mpfr_prec_t prec = out.prec();
  Mp qq(std::max(prec, bits_of(q) + 8)), t(prec);
  set_big(qq.get(), q);
  switch (f.kind) {
    case Profile::Kind::Power: {
      mpfr_log(out.get(), qq.get(), MPFR_RNDN);
      mpfr_mul_d(out.get(), out.get(), -f.alpha, MPFR_RNDN);
      set_rational(t.get(), f.coefficient);
      mpfr_log(t.get(), t.get(), MPFR_RNDN);
      mpfr_add(out.get(), out.get(), t.get(), MPFR_RNDN);
      break;
    }
    case Profile::Kind::Exp:
      mpfr_neg(out.get(), qq.get(), MPFR_RNDN);
      break;
    case Profile::Kind::PowerLog: {
      mpfr_log(out.get(), qq.get(), MPFR_RNDN);
      mpfr_mul_d(out.get(), out.get(), -f.alpha, MPFR_RNDN);
      mpfr_set_ui(t.get(), 1, MPFR_RNDN);
      mpfr_exp(t.get(), t.get(), MPFR_RNDN);
      mpfr_add(t.get(), t.get(), qq.get(), MPFR_RNDN);
      mpfr_log(t.get(), t.get(), MPFR_RNDN);
      mpfr_log(t.get(), t.get(), MPFR_RNDN);
      mpfr_sub(out.get(), out.get(), t.get(), MPFR_RNDN);
      break;
    }
  }
}

// ceil(1 / (q^2 f(q))) + 1.
BigInt next_quotient(const Profile& f, const BigInt& q) {
  if (integer_alpha(f)) {
    const int e = static_cast<int>(f.alpha) - 2;
    const BigInt num = boost::multiprecision::denominator(f.coefficient);
    const BigInt den = boost::multiprecision::numerator(f.coefficient);
    Rational v = Rational(num, den);
    if (e >= 0) v *= boost::multiprecision::pow(q, static_cast<unsigned>(e));
    else v /= boost::multiprecision::pow(q, static_cast<unsigned>(-e));
    BigInt fl = boost::multiprecision::numerator(v) / boost::multiprecision::denominator(v);
    if (Rational(fl) < v) fl += 1;
    return fl + 1;
  }
  // -log(q^2 f(q)) can be large; size the precision to the integer part.
  Mp lf(256);
  log_f(f, q, lf);
  const double lq = ln_big(q);
  const double expo = -(lf.to_double() + 2 * lq);  // natural log of the target
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::max(0.0, expo) * 1.4427 + 128);
  Mp lf2(prec), v(prec), qq(std::max(prec, bits_of(q) + 8));
  log_f(f, q, lf2);
  set_big(qq.get(), q);
  mpfr_log(qq.get(), qq.get(), MPFR_RNDN);
  mpfr_mul_2ui(qq.get(), qq.get(), 1, MPFR_RNDN);
  mpfr_add(lf2.get(), lf2.get(), qq.get(), MPFR_RNDN);
  mpfr_neg(lf2.get(), lf2.get(), MPFR_RNDN);
  mpfr_exp(v.get(), lf2.get(), MPFR_RNDU);
  mpfr_ceil(v.get(), v.get());
  return get_big(v.get(), MPFR_RNDU) + 1;
}

// Sign of log(value) - log f(q) for a positive rational value, decided at
// high precision; `resolved` is false when the difference is below the working precision.
int compare_log(const Profile& f, const BigInt& q, const Rational& value, bool& resolved) {
  const BigInt& den0 = boost::multiprecision::denominator(value);
  const mpfr_prec_t prec = 512 + 2 * bits_of(den0);
  Mp lv(prec), lf(prec), a(prec), b(prec);
  const BigInt& num = boost::multiprecision::numerator(value);
  const BigInt& den = boost::multiprecision::denominator(value);
  Mp nn(std::max(prec, bits_of(num) + 8)), dd(std::max(prec, bits_of(den) + 8));
  set_big(nn.get(), num);
  set_big(dd.get(), den);
  mpfr_log(a.get(), nn.get(), MPFR_RNDN);
  mpfr_log(b.get(), dd.get(), MPFR_RNDN);
  mpfr_sub(lv.get(), a.get(), b.get(), MPFR_RNDN);
  log_f(f, q, lf);
  mpfr_sub(a.get(), lv.get(), lf.get(), MPFR_RNDN);
  // Resolved when the difference sits well above the working precision.
  resolved = mpfr_zero_p(a.get()) == 0 &&
             mpfr_get_exp(a.get()) > std::max<mpfr_exp_t>(mpfr_get_exp(lv.get()), 1) - (prec - 32);
  return mpfr_sgn(a.get());
}

// value < f(q), exactly when possible.
bool below_f(const Profile& f, const BigInt& q, const Rational& value, bool& exact) {
  if (integer_alpha(f)) {
    exact = true;
    // value < c q^-alpha  <=>  value q^alpha < c
    return value * Rational(boost::multiprecision::pow(q, static_cast<unsigned>(f.alpha))) < f.coefficient;
  }
  exact = false;
  bool resolved = false;
  const int s = compare_log(f, q, value, resolved);
  return s < 0 && resolved;
}

double log10_f(const Profile& f, const BigInt& q) {
  Mp lf(128);
  log_f(f, q, lf);
  return lf.to_double() / std::log(10.0);
}

}  // namespace

JarnikResult jarnik_construct(const Profile& f, std::size_t depth) {
  if (depth < 1) throw Error(ErrorKind::Precondition, "jarnik_construct needs depth >= 1");
  // x^2 f(x) non-increasing on a geometric grid from x = 2 on.
  double prev = std::numeric_limits<double>::infinity();
  for (double x = 2.0; x <= 600.0; x *= 1.1) {
    const double h = x * x * f(x);
    if (h > prev * (1 + 1e-12)) {
      throw Error(ErrorKind::Precondition,
                  "profile " + f.describe() + ": x^2 f(x) increases near x = " + std::to_string(x));
    }
    prev = h;
  }
  JarnikResult res;
  std::vector<BigInt> a{0};
  BigInt qm1 = 0, qk = 1;  // q_{-1}, q_0
  while (a.size() <= depth) {
    if (f.kind == Profile::Kind::Exp && qk > 20000) {
      res.truncated = true;
      break;
    }
    const BigInt ak = next_quotient(f, qk);
    a.push_back(ak);
    const BigInt qn = ak * qk + qm1;
    qm1 = qk;
    qk = qn;
  }
  res.cf = ContinuedFraction::from_quotients(a, false);
  const auto& cf = res.cf;
  const std::size_t d = cf.depth() - 1;
  const Rational theta = cf.convergent(d);
  for (std::size_t k = 0; k < d; ++k) {
    Certificate c;
    c.k = k;
    c.q = cf.q[k];
    const Rational err = abs(theta - cf.convergent(k));
    const Rational gap(BigInt(1), cf.q[k] * cf.q[k + 1]);
    c.log10_error = log10_rational(err);
    c.log10_gap = log10_rational(gap);
    c.log10_f = log10_f(f, c.q);
    bool e1 = false, e2 = false;
    const bool h1 = below_f(f, c.q, err, e1);
    const bool h2 = below_f(f, c.q, gap, e2);
    c.exact = e1 && e2;
    c.holds = h1 && h2 && err <= gap;
    res.certificates.push_back(c);
  }
  return res;
}

ExponentEstimate irrationality_exponent_estimate(const ContinuedFraction& cf) {
  if (cf.depth() < 3) throw Error(ErrorKind::Precondition, "exponent estimate needs depth >= 3");
  ExponentEstimate est;
  if (cf.terminated) {
    est.divergent = true;
    est.value = std::numeric_limits<double>::infinity();
    est.depth_used = cf.depth();
    return est;
  }
  std::vector<double> vals;
  for (std::size_t k = 0; k + 1 < cf.depth(); ++k) {
    if (cf.q[k] < 2) continue;
    vals.push_back(2.0 + ln_big(cf.quotients[k + 1]) / ln_big(cf.q[k]));
  }
  if (vals.empty()) {
    est.value = 2.0;
    est.depth_used = 0;
    return est;
  }
  const std::size_t from = vals.size() / 2;
  est.value = *std::max_element(vals.begin() + static_cast<std::ptrdiff_t>(from), vals.end());
  est.depth_used = vals.size() - from;
  return est;
}

}  // namespace ncspectral::dio
