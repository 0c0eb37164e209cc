#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qgen/bounds.hpp"

using namespace qgen;
using std::numbers::pi;

namespace {

// Inputs whose global constant C' equals c (V_Theta = e^c V_d, m = L = 1).
BoundInputs with_cprime(std::size_t d, double c, std::size_t n, double delta, double risk = 0.0) {
  BoundInputs in;
  in.d = d;
  in.n = n;
  in.conf_delta = delta;
  in.log_v_theta = c + unit_ball_volume(d).log_value;
  in.log_m = 0.0;
  in.lipschitz = 1.0;
  in.empirical_risk = risk;
  return in;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1).value == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2).value == doctest::Approx(pi));
  CHECK(unit_ball_volume(3).value == doctest::Approx(4 * pi / 3));
  CHECK(unit_ball_volume(12).value == doctest::Approx(std::pow(pi, 6) / 720));
  CHECK(std::isfinite(unit_ball_volume(100000).log_value));
  CHECK_THROWS(unit_ball_volume(0));
}

TEST_CASE("covering and complexity constants") {
  CHECK(covering_log_bound(1.0, 3, 5.0, 0.5) == doctest::Approx(5.0 - unit_ball_volume(3).log_value - 0.5));
  CHECK(covering_log_bound(1.0, 4, unit_ball_volume(4).log_value, 0.0) == doctest::Approx(0.0));
  CHECK(covering_log_bound(0.5, 2, 1.0, 0.0) == doctest::Approx(1.0 - std::log(pi) + 2 * std::log(2.0)));
  CHECK_THROWS(covering_log_bound(0.0, 2, 1.0, 0.0));

  CHECK(complexity_constant(5, unit_ball_volume(5).log_value, 0.0, 1.0) == doctest::Approx(0.0));
  const double expect = 12 * std::log(4 * pi) - std::log(std::pow(pi, 6) / 720);
  CHECK(complexity_constant(12, 12 * std::log(4 * pi), 0.0, 1.0) == doctest::Approx(expect));
  CHECK_THROWS(complexity_constant(2, 1.0, 0.0, 0.0));
}

TEST_CASE("rademacher and confidence terms") {
  CHECK(rademacher_bound(1, 36, 0.0) == doctest::Approx(std::sqrt(pi)));
  const auto r = generalization_bound(with_cprime(1, 1.0, 8, 0.005));
  CHECK(r.c_prime == doctest::Approx(1.0));
  CHECK(r.complexity_term == doctest::Approx(12 * std::sqrt(pi) * std::exp(1.0) / std::sqrt(8.0)));
  CHECK(r.complexity_term == doctest::Approx(20.44).epsilon(1e-3));
  CHECK(r.confidence_term == doctest::Approx(3 * std::sqrt(std::log(400.0) / 16)));
  CHECK(r.confidence_term == doctest::Approx(1.836).epsilon(1e-3));
  CHECK(r.bound == doctest::Approx(r.complexity_term + r.confidence_term));
}

TEST_CASE("generalization bound tends to the empirical risk") {
  const auto r = generalization_bound(with_cprime(4, 2.0, std::size_t{1} << 50, 0.05, 0.2));
  CHECK(r.bound == doctest::Approx(0.2).epsilon(1e-4));
  BoundInputs bad = with_cprime(4, 2.0, 10, 1.5);
  CHECK_THROWS(generalization_bound(bad));
  bad.conf_delta = 0.05;
  bad.lipschitz = 0.0;
  CHECK_THROWS(generalization_bound(bad));
}

TEST_CASE("local bound") {
  BoundInputs in = with_cprime(6, 3.0, 50, 0.05, 0.1);
  in.lipschitz = 0.7;
  const auto g = generalization_bound(in);
  const auto same = local_bound(in, {in.log_v_theta, in.log_m, in.lipschitz});
  CHECK(same.bound == g.bound);
  const auto smaller = local_bound(in, {in.log_v_theta - 1.0, in.log_m, in.lipschitz});
  CHECK(smaller.bound < g.bound);
  CHECK(smaller.confidence_term == g.confidence_term);

  // d = 12, radius 0.5, m_loc = 1e-3, L_loc = 0.8, N = 80, delta = 0.05.
  BoundInputs e;
  e.d = 12;
  e.n = 80;
  e.conf_delta = 0.05;
  e.empirical_risk = 0.1;
  e.log_v_theta = 12 * std::log(4 * pi);
  const auto r = local_bound(e, {12 * std::log(2 * 0.5), std::log(1e-3), 0.8});
  const double c = -std::log(std::pow(pi, 6) / 720) - std::log(1e-3) + 12 * std::log(0.8);
  CHECK(r.c_prime == doctest::Approx(c));
  CHECK(r.complexity_term == doctest::Approx(12 * std::sqrt(12 * pi) * std::exp(c / 12) / std::sqrt(80.0)));
  CHECK(r.confidence_term == doctest::Approx(3 * std::sqrt(std::log(40.0) / 160)));
  CHECK(r.bound == doctest::Approx(0.1 + r.complexity_term + r.confidence_term));
}

TEST_CASE("effective-dimension bound") {
  BoundInputs in = with_cprime(12, 0.0, 100, 0.05);
  const LocalConstants loc{in.log_v_theta - 2.0, 0.5, 0.9};
  const auto l = local_bound(in, loc);
  const auto full = effdim_bound(in, 12.0, l.c_prime);
  CHECK(full.bound == doctest::Approx(l.bound));

  // 12 sqrt(pi) / sqrt(N) crosses 1 at N = 144 pi ~ 452.4.
  in.n = 452;
  CHECK(effdim_bound(in, 1.0, 0.0).complexity_term == doctest::Approx(12 * std::sqrt(pi / 452)));
  CHECK(effdim_bound(in, 1.0, 0.0).complexity_term > 1.0);
  in.n = 453;
  CHECK(effdim_bound(in, 1.0, 0.0).complexity_term < 1.0);

  in.n = 100;
  CHECK(effdim_bound(in, 4.0, 1.0).complexity_term == doctest::Approx(12 * std::sqrt(4 * pi) * std::exp(0.25) / 10));
  CHECK_THROWS(effdim_bound(in, 0.5, 1.0));
  CHECK_THROWS(effdim_bound(in, 12.5, 1.0));
}

TEST_CASE("local <= global for nested constants") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    BoundInputs in;
    in.d = 1 + static_cast<std::size_t>(u(rng) * 40);
    in.n = 1 + static_cast<std::size_t>(u(rng) * 1000);
    in.conf_delta = 0.01 + 0.9 * u(rng);
    in.log_v_theta = 10 * u(rng);
    in.log_m = -20 * u(rng);
    in.lipschitz = 0.1 + 2 * u(rng);
    const LocalConstants loc{in.log_v_theta - 5 * u(rng), in.log_m + 5 * u(rng), in.lipschitz * u(rng) + 1e-6};
    CHECK(local_bound(in, loc).bound <= generalization_bound(in).bound);
  }
}

TEST_CASE("k(d) and required samples") {
  CHECK(k_complexity(1, 1) == doctest::Approx(2.72).epsilon(0.004));
  CHECK(required_samples(1, 1) == 8);
  CHECK(k_complexity(100, 1) == doctest::Approx(10.10).epsilon(0.001));
  CHECK(required_samples(100, 1) == 102);
  CHECK(k_complexity(4, 0) == doctest::Approx(2.0));
  CHECK(required_samples(4, 0) == 4);
  CHECK_THROWS(k_complexity(0.5, 1));

  std::size_t prev = 0;
  for (double d = 1; d <= 2000; d += 7) {
    const std::size_t n = required_samples(d, 1.0);
    CHECK(n >= prev);
    prev = n;
    CHECK(required_samples(d, 1.5) >= n);
  }
}

TEST_CASE("Dudley integral") {
  CHECK(dudley_integral(1, 0) == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-9));
  CHECK(dudley_integral(1, 100) == doctest::Approx(10.0).epsilon(0.01));
  for (double d : {1.0, 4.0, 12.0})
    for (double c : {0.0, 0.5, 1.0, 5.0}) {
      CHECK(dudley_integral(d, c) <= std::sqrt(pi * d) / 2 * std::exp(c / d) + 1e-9);
      for (std::size_t n : {1u, 10u, 1000u})
        CHECK(dudley_numeric(d, c, n) <= 2 * rademacher_bound(d, n, c) + 1e-9);
    }
  CHECK_THROWS(dudley_integral(1, -0.1));
  CHECK_THROWS(dudley_numeric(1, 1, 0));
}
