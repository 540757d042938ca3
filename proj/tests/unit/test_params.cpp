#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "nibble/params.hpp"

using namespace nibble;

namespace {

// Largest t with 2 K eps t <= ln(1/eps), by search in long double.
unsigned t_oracle(long double eps, unsigned K) {
  const long double budget = std::log(1.0L / eps);
  unsigned t = 0;
  while (2.0L * K * eps * (t + 1) <= budget + 1e-15L) ++t;
  return t;
}

// ceil((1 + (p/q)^2) Δ) in integers.
std::uint64_t c_oracle(std::uint64_t p, std::uint64_t q, std::uint64_t delta) {
  const std::uint64_t num = (q * q + p * p) * delta;
  const std::uint64_t den = q * q;
  return (num + den - 1) / den;
}

// Closed form of the recursion: gamma_i = eps ((1 + K eps)^i - 1).
double gamma_oracle(double eps, unsigned K, unsigned i) {
  return eps * (std::pow(1.0 + K * eps, static_cast<double>(i)) - 1.0);
}

}  // namespace

TEST_CASE("worked parameter example") {
  const Params p = derive_params(10'000, 1000, 0.01, 48);
  CHECK(p.t_eps == 4);
  CHECK(p.phase1_colors == 1001);
  REQUIRE(p.gamma.size() == 4);
  CHECK(p.gamma[0] == doctest::Approx(0.0048).epsilon(1e-12));
  CHECK(p.gamma[1] == doctest::Approx(0.011904).epsilon(1e-12));
  CHECK(p.phase_one_rounds() == 3);
}

TEST_CASE("round count for K=1") {
  CHECK(round_count(0.1, 1) == 11);
  CHECK(derive_params(100, 1000, 0.1, 1).t_eps == 11);
}

TEST_CASE("eps=0.9 with K=48 has no rounds") {
  CHECK(round_count(0.9, 48) == 0);
  CHECK_THROWS_AS(derive_params(100, 100, 0.9, 48), Error);
  try {
    derive_params(100, 100, 0.9, 48);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidEpsilon);
  }
}

TEST_CASE("round count against search oracle") {
  for (unsigned K : {1U, 2U, 5U, 48U}) {
    for (int k = 1; k < 200; ++k) {
      const double eps = k / 400.0;
      CHECK_MESSAGE(round_count(eps, K) == t_oracle(eps, K), "eps=" << eps << " K=" << K);
    }
  }
}

TEST_CASE("palette size against integer oracle") {
  for (std::uint64_t q : {10U, 100U, 1000U}) {
    for (std::uint64_t p = 1; p < q; p += q / 10 + 1) {
      for (std::uint64_t delta : {1U, 7U, 100U, 300U, 1000U, 4096U}) {
        const double eps = static_cast<double>(p) / static_cast<double>(q);
        CHECK_MESSAGE(phase_one_color_count(delta, eps) == c_oracle(p, q, delta),
                      "eps=" << eps << " delta=" << delta);
      }
    }
  }
}

TEST_CASE("gamma recursion against closed form") {
  for (double eps : {0.01, 0.05, 0.1, 0.2}) {
    for (unsigned K : {1U, 48U}) {
      const auto g = gamma_sequence(eps, K, 12);
      for (unsigned i = 1; i <= 12; ++i) CHECK(g[i - 1] == doctest::Approx(gamma_oracle(eps, K, i)).epsilon(1e-9));
    }
  }
}

TEST_CASE("envelope center") {
  const Params p = make_params(10, 100, 0.1, 1, 5);
  CHECK(p.envelope_center(1) == doctest::Approx(100.0));
  CHECK(p.envelope_center(3) == doctest::Approx(100.0 * std::pow(0.9, 4)));
}

TEST_CASE("make_params accepts degenerate eps and explicit t") {
  const Params zero = make_params(10, 5, 0.0, 1, 3);
  CHECK(zero.t_eps == 3);
  CHECK(zero.phase1_colors == 5);
  const Params one = make_params(10, 5, 1.0, 1, 2);
  CHECK(one.phase1_colors == 10);
  CHECK_THROWS_AS(make_params(10, 5, 0.1, 1, 0), Error);
  CHECK_THROWS_AS(make_params(10, 0, 0.1, 1, 2), Error);
}

TEST_CASE("regime flag is advisory") {
  CHECK_FALSE(derive_params(1000, 100, 0.1, 1).regime_holds);
}
