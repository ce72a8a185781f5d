#include "doctest.h"

#include <igid/codebook.hpp>
#include <igid/codec.hpp>
#include <igid/errors.hpp>
#include <igid/ig_distribution.hpp>
#include <igid/rng.hpp>
#include <igid/stats.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace igid;

TEST_CASE("encode returns the stored codeword") {
  Codebook book(3, 10, 1);
  book.push_back(std::vector<double>{1, 2, 3});
  book.push_back(std::vector<double>{4, 5, 6});
  const auto c = encode(book, 0);
  CHECK(c.data() == book[0].data());
  CHECK(encode(book, 1)[2] == 6);
  CHECK_THROWS_AS(encode(book, 2), InvalidInput);
}

TEST_CASE("transmit") {
  const auto p = IGParams::make(1, 1);
  const std::vector<double> zero(100000, 0.0);
  RandomStream rng(4);
  const auto y = transmit(zero, p, rng);
  const auto s = summarize(y);
  CHECK(std::abs(s.mean - 1.0) < 3 * std::sqrt(1.0 / y.size()));

  const std::vector<double> c{0.5, 3.0, 9.5};
  RandomStream a(10), b(10);
  const auto ya = transmit(c, p, a);
  const auto yb = transmit(c, p, b);
  CHECK(ya == yb);
  for (std::size_t t = 0; t < c.size(); ++t) CHECK(ya[t] > c[t]);

  std::vector<double> out(2);
  CHECK_THROWS_AS(transmit(c, p, a, out), InvalidInput);
}

TEST_CASE("decoding measure") {
  const std::vector<double> c{1, 2, 3};
  CHECK(decoding_measure(c, c, IGParams::make(1, 1)) == doctest::Approx(-2.0));
  CHECK(decoding_measure(c, c, IGParams::make(2, 10)) == doctest::Approx(-4.8));
  CHECK_THROWS_AS(decoding_measure(c, std::vector<double>{1, 2}, IGParams::make(1, 1)),
                  InvalidInput);
  CHECK_THROWS_AS(decoding_measure(std::vector<double>{}, std::vector<double>{},
                                   IGParams::make(1, 1)),
                  InvalidInput);

  SUBCASE("unbiased for the sent codeword") {
    const auto p = IGParams::make(1, 4);
    const std::vector<double> cw(10, 2.0);
    RandomStream rng(6);
    std::vector<double> t(100000);
    for (auto& x : t) x = decoding_measure(transmit(cw, p, rng), cw, p);
    const auto s = summarize(t);
    CHECK(std::abs(s.mean) < 3 * std::sqrt(s.variance / t.size()));
  }

  SUBCASE("shift invariance and permutation symmetry") {
    const auto p = IGParams::make(2, 10);
    RandomStream rng(7);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> y(20), c(20);
      for (std::size_t t = 0; t < 20; ++t) {
        c[t] = 10 * rng.uniform();
        y[t] = c[t] + 5 * rng.uniform();
      }
      const double s = 4 * rng.uniform() - 2;
      auto ys = y, cs = c;
      for (auto& v : ys) v += s;
      for (auto& v : cs) v += s;
      const double base = decoding_measure(y, c, p);
      CHECK(std::abs(decoding_measure(ys, cs, p) - base) < 1e-12 * std::max(1.0, std::abs(base)));
      std::reverse(ys.begin(), ys.end());
      std::reverse(cs.begin(), cs.end());
      CHECK(std::abs(decoding_measure(ys, cs, p) - base) < 1e-12 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST_CASE("identify") {
  const auto p = IGParams::make(1, 1);
  SUBCASE("closed boundary") {
    // T = 2^2 - 2 = 2 exactly.
    const std::vector<double> c{0.0}, y{2.0};
    CHECK(decoding_measure(y, c, p) == 2.0);
    CHECK(identify(y, c, p, DecodingRule::make(p, 2.0)));
    CHECK_FALSE(identify(y, c, p, DecodingRule::make(p, std::nextafter(2.0, 0.0))));
  }
  SUBCASE("zero noise is atypical") {
    const std::vector<double> c{1, 2, 3};
    CHECK_FALSE(identify(c, c, p, DecodingRule::make(p, 1.5)));
    CHECK(identify(c, c, p, DecodingRule::make(p, 2.0)));
  }
  SUBCASE("own codeword accepted at scale") {
    const auto q = IGParams::make(1, 4);
    const auto s = scaling_quantities(10000, 1, 0.5);
    const auto rule = DecodingRule::make(q, s.delta_n);
    const std::vector<double> cw(10000, 5.0);
    RandomStream rng(9);
    int accepted = 0;
    const int trials = 2000;
    for (int k = 0; k < trials; ++k) accepted += identify(transmit(cw, q, rng), cw, q, rule);
    CHECK(accepted >= 0.999 * trials);
  }
  SUBCASE("rule validation") {
    CHECK_THROWS_AS(DecodingRule::make(p, -1.0), InvalidInput);
    CHECK_THROWS_AS(DecodingRule::make(p, std::nan("")), InvalidInput);
    CHECK(DecodingRule::make(IGParams::make(2, 10), 0.1).alpha == doctest::Approx(4.8));
  }
}
