#include "nibble/params.hpp"

#include <cmath>
#include <string>

namespace nibble {
namespace {

// Products like 1.01 * 100 land a hair above the integer they represent.
constexpr double kRoundingSlack = 1e-9;

}  // namespace

double Params::envelope_center(unsigned round) const {
  return std::pow(1.0 - epsilon, 2.0 * (round - 1)) * static_cast<double>(delta);
}

unsigned round_count(double epsilon, unsigned K) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || K == 0) return 0;
  const double raw = std::log(1.0 / epsilon) / (2.0 * K * epsilon);
  return static_cast<unsigned>(std::floor(raw + kRoundingSlack));
}

Color phase_one_color_count(std::size_t delta, double epsilon) {
  const double raw = (1.0 + epsilon * epsilon) * static_cast<double>(delta);
  return static_cast<Color>(std::ceil(raw - kRoundingSlack));
}

std::vector<double> gamma_sequence(double epsilon, unsigned K, unsigned rounds) {
  std::vector<double> gamma;
  gamma.reserve(rounds);
  const double step = K * epsilon * epsilon;
  double g = step;
  for (unsigned i = 0; i < rounds; ++i) {
    gamma.push_back(g);
    g = (1.0 + K * epsilon) * g + step;
  }
  return gamma;
}

Params make_params(std::size_t n, std::size_t delta, double epsilon, unsigned K, unsigned t_eps) {
  if (delta == 0) throw Error(ErrorCode::kInfeasibleParams, "delta must be >= 1");
  if (K == 0) throw Error(ErrorCode::kInfeasibleParams, "K must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::kInvalidEpsilon, "epsilon=" + std::to_string(epsilon) + " outside [0,1]");
  }
  if (t_eps == 0) throw Error(ErrorCode::kInvalidEpsilon, "round count must be >= 1");
  Params p;
  p.n = n;
  p.delta = delta;
  p.epsilon = epsilon;
  p.K = K;
  p.t_eps = t_eps;
  p.phase1_colors = phase_one_color_count(delta, epsilon);
  p.gamma = gamma_sequence(epsilon, K, t_eps);
  const double lower = n > 1 ? 10.0 * std::pow(std::log(static_cast<double>(n)) / delta, 1.0 / 6.0) : 0.0;
  p.regime_holds = epsilon <= 1e-4 && epsilon >= lower;
  return p;
}

Params derive_params(std::size_t n, std::size_t delta, double epsilon, unsigned K) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidEpsilon, "epsilon=" + std::to_string(epsilon) + " outside (0,1)");
  }
  if (K == 0) throw Error(ErrorCode::kInfeasibleParams, "K must be >= 1");
  const unsigned t = round_count(epsilon, K);
  if (t == 0) {
    throw Error(ErrorCode::kInvalidEpsilon, "epsilon=" + std::to_string(epsilon) + " with K=" +
                                                std::to_string(K) + " gives zero rounds");
  }
  return make_params(n, delta, epsilon, K, t);
}

}  // namespace nibble
