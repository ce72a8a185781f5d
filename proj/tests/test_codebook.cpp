#include "doctest.h"
#include "oracles.hpp"

#include <igid/codebook.hpp>
#include <igid/errors.hpp>
#include <igid/rng.hpp>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <vector>

using namespace igid;

TEST_CASE("scaling quantities") {
  const auto s = scaling_quantities(100, 1, 0.1);
  CHECK(s.epsilon_n == doctest::Approx(0.12589).epsilon(1e-4));
  CHECK(s.r0 == doctest::Approx(3.5481).epsilon(1e-4));
  CHECK(s.delta_n == doctest::Approx(0.16786).epsilon(1e-4));
  CHECK(s.alpha_n == doctest::Approx(0.0039811).epsilon(1e-4));
  const auto t = scaling_quantities(10000, 1, 0.5);
  CHECK(t.epsilon_n == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(t.r0 == doctest::Approx(31.623).epsilon(1e-4));
  CHECK(t.delta_n == doctest::Approx(0.13333).epsilon(1e-4));
  CHECK(t.alpha_n == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK_THROWS_AS(scaling_quantities(100, 1, 0.0), DomainError);
  CHECK_THROWS_AS(scaling_quantities(100, 1, 1.0), DomainError);
  CHECK_THROWS_AS(scaling_quantities(100, 1, 1.5), DomainError);
  CHECK_THROWS_AS(scaling_quantities(1, 1, 0.5), DomainError);
  CHECK_THROWS_AS(scaling_quantities(100, -1, 0.5), InvalidInput);

  SUBCASE("relations") {
    for (std::size_t n : {2u, 10u, 1000u, 1000000u}) {
      for (double b : {0.05, 0.5, 0.95}) {
        const auto q = scaling_quantities(n, 0.7, b);
        CHECK(q.r0 * q.r0 == doctest::Approx(n * q.epsilon_n).epsilon(1e-12));
        CHECK(q.delta_n == doctest::Approx(4.0 / 3.0 * q.epsilon_n).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("ball volume") {
  CHECK(sphere_log2_volume(2, 1) == doctest::Approx(std::log2(std::numbers::pi)).epsilon(1e-12));
  CHECK(sphere_log2_volume(3, 1) == doctest::Approx(std::log2(4 * std::numbers::pi / 3)).epsilon(1e-12));
  CHECK(sphere_log2_volume(1, 2) == doctest::Approx(2.0).epsilon(1e-12));
  for (std::size_t n = 1; n <= 100; ++n) {
    for (double r : {0.3, 1.0, 2.5}) {
      const double ref = oracle::ball_log2_volume_raw(n, r);
      REQUIRE(std::abs(sphere_log2_volume(n, r) - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
  // Past the range where tgamma or pow would overflow.
  CHECK(std::isfinite(sphere_log2_volume(1u << 20, 1e-6)));
  CHECK(std::isfinite(sphere_log2_volume(1u << 20, 1e3)));
}

TEST_CASE("count bounds") {
  // n log2(T/2) - log2 Vol at n = 2, r = 1: log2((T/2)^2 / pi)
  CHECK(2 * std::log2(5.0) - sphere_log2_volume(2, 1) == doctest::Approx(2.9924).epsilon(1e-4));
  CHECK(std::pow(5.0, 2) / std::numbers::pi == doctest::Approx(7.9577).epsilon(1e-4));

  CHECK_THROWS_AS(count_bounds(3, 10, 1, 0.1), DomainError);
  CHECK_THROWS_AS(count_bounds(16, 10, 1, 1.0), DomainError);
  const auto c4 = count_bounds(4, 10, 1, 0.1);
  CHECK(std::isfinite(c4.log2_m_lower));
  CHECK(std::isfinite(c4.log2_m_upper));
  CHECK(c4.rate_lower < c4.rate_upper);

  SUBCASE("matches raw gamma evaluation") {
    for (std::size_t n : {4u, 8u, 16u, 40u, 64u}) {
      const double nd = static_cast<double>(n);
      const double r0 = std::pow(nd, 0.275);
      const double alpha = std::pow(nd, -1.2);
      const double lower = nd * std::log2(5.0) - oracle::ball_log2_volume_raw(n, r0);
      const double upper =
          -0.599 * nd + nd * std::log2(10 + 2 * alpha) - oracle::ball_log2_volume_raw(n, alpha);
      const auto c = count_bounds(n, 10, 1, 0.1);
      CHECK(c.log2_m_lower == doctest::Approx(lower).epsilon(1e-9));
      CHECK(c.log2_m_upper == doctest::Approx(upper).epsilon(1e-9));
      CHECK(c.rate_lower == doctest::Approx(lower / (nd * std::log2(nd))).epsilon(1e-9));
    }
  }

  SUBCASE("asymptotics") {
    // Lower rate tends to (1-b)/4. The upper rate of this volume bound
    // tends to 3/2 + 2b: log2 Vol(alpha_n) ~ -(1+2b) n log2 n - n log2 n / 2.
    const auto far = count_bounds(std::size_t{1} << 60, 10, 1, 0.1);
    CHECK(far.rate_lower == doctest::Approx(0.225).epsilon(0.05));
    CHECK(far.rate_upper == doctest::Approx(1.7).epsilon(0.01));
    double lo_prev = 1e9, up_prev = 1e9;
    for (int k = 4; k <= 40; ++k) {
      const auto c = count_bounds(std::size_t{1} << k, 10, 1, 0.1);
      CHECK(c.rate_lower < lo_prev);
      CHECK(c.rate_upper < up_prev);
      CHECK(c.rate_lower > 0.225);
      CHECK(c.rate_upper > 1.7);
      lo_prev = c.rate_lower;
      up_prev = c.rate_upper;
    }
  }
}

TEST_CASE("codebook container") {
  Codebook book(2, 10, 1);
  CHECK(book.empty());
  book.push_back(std::vector<double>{1, 2});
  book.push_back(std::vector<double>{3, 4});
  CHECK(book.size() == 2);
  CHECK(book[1][0] == 3);
  CHECK_THROWS_AS(book.at(2), InvalidInput);
  CHECK_THROWS_AS(book.push_back(std::vector<double>{1}), InvalidInput);
  CHECK_THROWS_AS(Codebook(0, 1, 1), InvalidInput);
}

TEST_CASE("greedy packing") {
  SUBCASE("one dimension") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RandomStream rng(seed);
      const auto r = build_greedy_packing(1, 10, 2, 1000000, 100000, rng);
      CHECK(r.codebook.size() >= 3);
      CHECK(r.codebook.size() <= 6);
      CHECK(r.saturated);
      CHECK(audit_codebook(r.codebook).ok);
    }
  }
  SUBCASE("large blocklength") {
    RandomStream rng(1);
    const double d = 2 * scaling_quantities(10000, 1, 0.5).r0;
    const auto r = build_greedy_packing(10000, 10, d, 32, 1000, rng);
    CHECK(r.codebook.size() == 32);
    CHECK_FALSE(r.saturated);
    const auto audit = audit_codebook(r.codebook);
    CHECK(audit.ok);
    CHECK(audit.min_pairwise_distance >= d);
  }
  SUBCASE("infeasible") {
    RandomStream rng(1);
    CHECK_THROWS_AS(build_greedy_packing(2, 1, 10, 10, 1000, rng), PackingInfeasible);
    CHECK_THROWS_AS(build_greedy_packing(2, 1, 0.1, 1, 1000, rng), InvalidInput);
  }
}

TEST_CASE("audit") {
  Codebook book(2, 10, 1);
  book.push_back(std::vector<double>{1, 1});
  book.push_back(std::vector<double>{5, 5});
  CHECK(audit_codebook(book).ok);
  book.push_back(std::vector<double>{5, 5.5});
  auto a = audit_codebook(book);
  CHECK_FALSE(a.distance_ok);
  REQUIRE(a.closest_pair);
  CHECK(a.closest_pair->first == 1);
  CHECK(a.closest_pair->second == 2);
  CHECK(a.min_pairwise_distance == doctest::Approx(0.5));

  Codebook peak(1, 10, 1);
  peak.push_back(std::vector<double>{2});
  peak.push_back(std::vector<double>{10.5});
  auto p = audit_codebook(peak);
  CHECK_FALSE(p.peak_ok);
  CHECK(p.first_peak_violation == 1u);
  CHECK_FALSE(p.ok);
}

TEST_CASE("packing density") {
  SUBCASE("single centred codeword") {
    Codebook book(1, 10, 2);
    book.push_back(std::vector<double>{5});
    const auto d = estimate_packing_density(book, 1, 200000, 3);
    CHECK(std::abs(d.value - 0.2) < 3 * d.std_error + 1e-12);
  }
  SUBCASE("saturated packings") {
    for (std::size_t n = 1; n <= 3; ++n) {
      RandomStream rng(40 + n);
      const auto r = build_greedy_packing(n, 10, 2, 1000000, 2000000, rng);
      REQUIRE(r.saturated);
      const auto d = estimate_packing_density(r.codebook, 1, 200000, 5);
      CHECK(d.value >= std::pow(2.0, -static_cast<double>(n)) - 3 * d.std_error);
      const double log2_union = std::log2(static_cast<double>(r.codebook.size())) +
                                sphere_log2_volume(n, 1) - n * std::log2(10.0);
      CHECK(d.value <= std::exp2(log2_union) + 3 * d.std_error);
      CHECK(estimate_packing_density(r.codebook, 2, 100000, 6).value >= 0.99);
    }
  }
  SUBCASE("errors") {
    Codebook empty(2, 1, 1);
    CHECK_THROWS_AS(estimate_packing_density(empty, 1, 10, 1), InvalidInput);
  }
}

TEST_CASE("codebook csv round trip") {
  RandomStream rng(8);
  const auto r = build_greedy_packing(5, 10, 3, 20, 10000, rng);
  const auto file = std::filesystem::temp_directory_path() / "igid_codebook_test.csv";
  const std::vector<std::string> comments{"seed=8"};
  write_codebook_csv(file, r.codebook, comments);
  const auto back = read_codebook_csv(file);
  CHECK(back.n() == 5);
  CHECK(back.t_max() == 10);
  CHECK(back.min_distance() == 3);
  REQUIRE(back.size() == r.codebook.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    for (std::size_t t = 0; t < 5; ++t) REQUIRE(back[i][t] == r.codebook[i][t]);
  }
  std::filesystem::remove(file);
  CHECK_THROWS_AS(read_codebook_csv(file), InvalidInput);
}
