#pragma once

// Noncommutative integrals of (A~ D^-1)^q by large-|k| symbol expansion.

#include <cstddef>

#include <nlohmann/json.hpp>

#include "ncspectral/numeric.hpp"
#include "ncspectral/operator.hpp"

namespace ncspectral::action {

struct NcIntegral {
  int q = 0;
  Complex value;
  /// |value(order) - value(order - 1)|.
  double truncation_error = 0.0;
  int expansion_order = 0;
  std::size_t paths = 0;              // closed shift sequences
  std::size_t diagonal_terms = 0;     // nonvanishing (path, L/R choice) amplitudes
  std::size_t resonant_terms = 0;
  std::size_t nonresonant_terms = 0;
  /// Smallest distance to Z^n among non-resonant twists (inf if none).
  double min_twist_distance = 0.0;
  /// Hypotheses of the twisted residue theorem not certified.
  bool uncertified = false;

  nlohmann::json to_json() const;
};

struct SymbolOptions {
  /// Terms kept in the expansion of each |k + u|^-2; default n + 3.
  int expansion_order = -1;
  bool diophantine_certified = false;
  double resonance_tol = 1e-9;
  /// Twists closer than this to Z^n without being resonant raise the flag.
  double near_resonance = 1e-6;
};

/// Res_{s=0} Tr((A~ D^-1)^q |D|^-s) with A~ = D_A - D.
NcIntegral nc_integral_power(const weyl::OneForm& A, const ops::SpectralTriple& st, int q,
                             const SymbolOptions& opt = {});

}  // namespace ncspectral::action
