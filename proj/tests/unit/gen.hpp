#pragma once

#include <random>

#include "ncspectral/weyl.hpp"

namespace gen {

using ncspectral::Complex;
using ncspectral::Point;
using ncspectral::weyl::FourierElement;
using ncspectral::weyl::OneForm;

inline Point point(std::mt19937_64& rng, int n, int r) {
  std::uniform_int_distribution<int> d(-r, r);
  Point p(n);
  for (int i = 0; i < n; ++i) p[i] = d(rng);
  return p;
}

inline Complex complex(std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  return {d(rng), d(rng)};
}

inline FourierElement element(std::mt19937_64& rng, int n, int terms, int r) {
  FourierElement a(n);
  for (int i = 0; i < terms; ++i) a.add_term(point(rng, n, r), complex(rng));
  return a;
}

// Anti-selfadjoint components with `modes` random Fourier modes in total.
inline OneForm one_form(std::mt19937_64& rng, int n, int modes, int r) {
  OneForm A = OneForm::zero(n);
  std::uniform_int_distribution<int> axis(0, n - 1);
  for (int i = 0; i < modes; ++i) {
    const Point k = point(rng, n, r);
    const Complex z = 0.3 * complex(rng);
    auto& c = A.components[static_cast<std::size_t>(axis(rng))];
    c.add_term(k, z);
    c.add_term(-k, -std::conj(z));
  }
  return A;
}

// Anti-selfadjoint one-form with every mode a multiple of one primitive v,
// so D_A couples modes along lines only.
inline OneForm chain_one_form(std::mt19937_64& rng, int n, int modes) {
  Point v(n);
  std::uniform_int_distribution<int> d(-2, 2);
  do {
    for (int i = 0; i < n; ++i) v[i] = d(rng);
  } while (v.is_zero());
  OneForm A = OneForm::zero(n);
  std::uniform_int_distribution<int> axis(0, n - 1), mult(1, 2);
  for (int i = 0; i < modes; ++i) {
    const Point k = static_cast<std::int64_t>(mult(rng)) * v;
    const Complex z = 0.3 * complex(rng);
    auto& c = A.components[static_cast<std::size_t>(axis(rng))];
    c.add_term(k, z);
    c.add_term(-k, -std::conj(z));
  }
  return A;
}

// lambda U_q with |lambda| = 1.
inline FourierElement weyl_unitary(std::mt19937_64& rng, int n, int r) {
  std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
  return FourierElement::weyl(point(rng, n, r), std::polar(1.0, ph(rng)));
}

}  // namespace gen
