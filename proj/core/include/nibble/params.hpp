#pragma once

#include <cstddef>
#include <vector>

#include "nibble/types.hpp"

namespace nibble {

inline constexpr unsigned kDefaultK = 48;

/// Parameters shared by every nibble-based algorithm.
struct Params {
  std::size_t n = 0;
  std::size_t delta = 0;
  double epsilon = 0.0;
  unsigned K = kDefaultK;
  /// Number of rounds; phase one runs rounds 1 .. t_eps-1.
  unsigned t_eps = 1;
  /// C = ceil((1 + eps^2) * delta), the tentative palette [C].
  Color phase1_colors = 0;
  /// gamma[i-1] is the envelope error for round i, i = 1 .. t_eps.
  std::vector<double> gamma;
  /// Whether 1e-4 >= eps >= 10 (ln n / delta)^(1/6). Advisory only.
  bool regime_holds = false;

  unsigned phase_one_rounds() const { return t_eps - 1; }
  double gamma_at(unsigned round) const { return gamma.at(round - 1); }
  /// (1 - eps)^(2(i-1)) * delta: the predicted palette size / c-degree in round i.
  double envelope_center(unsigned round) const;
};

/// floor(ln(1/eps) / (2 K eps)).
unsigned round_count(double epsilon, unsigned K);

/// ceil((1 + eps^2) * delta), robust to floating-point noise on exact products.
Color phase_one_color_count(std::size_t delta, double epsilon);

/// gamma_1 = K eps^2, gamma_{i+1} = (1 + K eps) gamma_i + K eps^2.
std::vector<double> gamma_sequence(double epsilon, unsigned K, unsigned rounds);

/// Throws Error{kInvalidEpsilon} unless 0 < eps < 1 and t_eps >= 1;
/// Error{kInfeasibleParams} for delta = 0 or K = 0.
Params derive_params(std::size_t n, std::size_t delta, double epsilon, unsigned K = kDefaultK);

/// Same as derive_params but with an explicit round count. Accepts eps = 0 and
/// eps = 1 (degenerate runs) and any t_eps >= 1.
Params make_params(std::size_t n, std::size_t delta, double epsilon, unsigned K, unsigned t_eps);

}  // namespace nibble
