#include <doctest.h>

#include "flowpotts/catalogue.hpp"
#include "flowpotts/currents.hpp"

#include <cmath>
#include <random>

using namespace flowpotts;

namespace {

double d(Real x) { return static_cast<double>(x); }

std::vector<Real> uniform(const Multigraph& g, Real lambda) { return std::vector<Real>(g.edge_count(), lambda); }

}  // namespace

TEST_CASE("bernoulli_density") {
  CHECK(bernoulli_density(0) == 0);
  CHECK(d(bernoulli_density(40)) == doctest::Approx(0.5));
  CHECK(bernoulli_density(40) <= 0.5L);
  CHECK(d(bernoulli_density(0.5L)) == doctest::Approx((1 - std::exp(-1.0)) / 2).epsilon(1e-15));
}

TEST_CASE("source_prob") {
  auto k2 = builtin_graph("k2");
  Rational p(2, 7);
  CHECK(source_prob<Rational>(k2, p, SourceSet{0, 1}) == p);
  CHECK(source_prob<Rational>(k2, p, SourceSet{}) == 1 - p);
  CHECK(source_prob<Rational>(k2, p, SourceSet{0}) == 0);
  auto tri = builtin_graph("triangle");
  // Edge {0,1} alone, or the path 0-2-1: 1/4 · (3/4)^2 + (1/4)^2 · 3/4.
  CHECK(source_prob<Rational>(tri, Rational(1, 4), SourceSet{0, 1}) == Rational(3, 16));
  // The even subgraphs are ∅ and the whole triangle: (3/4)^3 + (1/4)^3.
  CHECK(source_prob<Rational>(tri, Rational(1, 4), SourceSet{}) == Rational(28, 64));
  CurrentLimits tight;
  tight.subset_cap = 4;
  CHECK_THROWS_AS(source_prob<Rational>(tri, Rational(1, 4), SourceSet{}, tight), CapExceeded);

  SUBCASE("handshake: odd source sets never occur") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
      std::uniform_int_distribution<std::size_t> nv(2, 5), ne(1, 8);
      auto g = random_multigraph(rng, nv(rng), ne(rng), true);
      std::vector<Rational> probs(g.edge_count(), Rational(1, 3));
      Rational total = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.vertex_count()); ++mask) {
        auto prob = source_prob<Rational>(g, probs, SourceSet::from_mask(mask));
        if (std::popcount(mask) % 2 != 0) CHECK(prob == 0);
        total += prob;
      }
      CHECK(total == 1);
      auto dist = source_distribution<Rational>(g, probs);
      for (const auto& [mask, w] : dist) CHECK(source_prob<Rational>(g, probs, SourceSet::from_mask(mask)) == w);
    }
  }
}

TEST_CASE("sigma_source_ratio") {
  auto k2 = builtin_graph("k2");
  CHECK(sigma_source_ratio(k2, {0}, 0, 1) == 0);
  for (Real l : {0.2L, 0.5L, 1.7L}) {
    CHECK(d(sigma_source_ratio(k2, {l}, 0, 1)) == doctest::Approx(d(std::tanh(l))).epsilon(1e-15));
  }
  auto tri = builtin_graph("triangle");
  CHECK(std::fabs(sigma_source_ratio(tri, uniform(tri, 0.5L), 0, 1) -
                  potts_sigma(tri, PottsParams::uniform(tri, 2, 0.5L), 0, 1)) <= 1e-12);
  CHECK_THROWS_AS(sigma_source_ratio(tri, uniform(tri, 0.5L), 2, 2), InvalidArgument);
}

TEST_CASE("switching_check_fixed") {
  auto path = builtin_graph("path:3");
  auto c = switching_check_fixed(path, {1, 1}, 0, 2, SourceSet{});
  CHECK(c.lhs == 1);
  CHECK(c.rhs == 1);
  auto k2 = builtin_graph("k2");
  auto c2 = switching_check_fixed(k2, {2}, 0, 1, SourceSet{0, 1});
  CHECK(c2.lhs == c2.rhs);
  CHECK(c2.lhs == 2);
  auto odd = switching_check_fixed(builtin_graph("triangle"), {1, 2, 1}, 0, 1, SourceSet{2});
  CHECK(odd.lhs == 0);
  CHECK(odd.rhs == 0);
  CHECK_THROWS_AS(switching_check_fixed(path, {1, 0}, 0, 2, SourceSet{}), PreconditionFailed);

  SUBCASE("enumerated histogram equals the bundle-parity law") {
    auto g = builtin_graph("ladder:2");
    MultiplicityVector m{2, 0, 1, 3};
    auto hist = split_histogram_enumerated(g, m);
    auto dist = split_distribution(g, m);
    CHECK(hist.size() == dist.size());
    for (const auto& [mask, count] : hist) {
      CHECK(d(dist.at(mask)) == doctest::Approx(double(count) / 64).epsilon(1e-15));
    }
  }
  SUBCASE("all instances on the triangle with Σm ≤ 6") {
    auto tri = builtin_graph("triangle");
    int checked = 0;
    for (std::uint32_t a = 0; a <= 6; ++a) {
      for (std::uint32_t b = 0; a + b <= 6; ++b) {
        for (std::uint32_t cc = 0; a + b + cc <= 6; ++cc) {
          MultiplicityVector m{a, b, cc};
          for (Vertex x = 0; x < 3; ++x) {
            for (Vertex y = x + 1; y < 3; ++y) {
              if (!connected_in(tri, m, x, y)) continue;
              for (std::uint64_t A = 0; A < 8; ++A) {
                auto r = switching_check_fixed(tri, m, x, y, SourceSet::from_mask(A));
                CHECK(r.lhs == r.rhs);
                ++checked;
              }
            }
          }
        }
      }
    }
    CHECK(checked > 500);
  }
}

TEST_CASE("switching_check_poisson") {
  auto path = builtin_graph("path:3");
  auto odd = switching_check_poisson(path, uniform(path, 0.4L), 0, 2, SourceSet{1}, 6);
  CHECK(odd.lhs == 0);
  CHECK(odd.rhs == 0);
  auto r = switching_check_poisson(path, uniform(path, 0.4L), 0, 2, SourceSet{}, 6);
  CHECK(r.passed());
  CHECK(r.lhs > 0);
  CHECK(r.bound < 1e-3);
  auto k2 = switching_check_poisson(builtin_graph("k2"), {0.5L}, 0, 1, SourceSet{0, 1}, 10);
  CHECK(k2.passed());
  CHECK(k2.lhs > 0);
  auto tri = builtin_graph("triangle");
  CHECK(switching_check_poisson(tri, uniform(tri, 0.3L), 0, 2, SourceSet{1, 2}, 8).passed());
}

TEST_CASE("appls_identity_i") {
  auto k2 = builtin_graph("k2");
  auto zero = appls_identity_i(k2, {0}, 0, 1, 4);
  CHECK(zero.lhs == 0);
  CHECK(zero.rhs == 0);
  auto r = appls_identity_i(k2, {0.5L}, 0, 1, 12);
  CHECK(r.passed());
  CHECK(d(r.lhs) == doctest::Approx(std::pow(std::tanh(0.5), 2)).epsilon(1e-14));
  CHECK(r.bound < 1e-6);
  auto tri = builtin_graph("triangle");
  auto t = appls_identity_i(tri, uniform(tri, 0.4L), 0, 1, 8);
  CHECK(t.passed());
  CHECK(t.bound < 1e-4);
}

TEST_CASE("appls_identity_ii") {
  auto path = builtin_graph("path:3");
  auto zero = appls_identity_ii(path, uniform(path, 0), 0, 1, 2, 4);
  CHECK(zero.lhs == 0);
  CHECK(zero.rhs == 0);
  // On the path x-y-z the conditional connection probability is 1.
  auto r = appls_identity_ii(path, uniform(path, 0.5L), 0, 1, 2, 14);
  CHECK(r.passed());
  auto q = two_copy_connection(path, uniform(path, 0.5L), SourceSet{0, 2}, SourceSet{}, 0, 1, 14);
  REQUIRE(q.has_value());
  CHECK(std::fabs(q->value - 1) <= q->bound);
  auto tri = builtin_graph("triangle");
  CHECK(appls_identity_ii(tri, uniform(tri, 0.3L), 0, 1, 2, 8).passed());
  // Disconnected z: both sides vanish.
  Multigraph split(3, {{0, 1}});
  auto s = appls_identity_ii(split, {0.5L}, 0, 1, 2, 6);
  CHECK(s.lhs == 0);
  CHECK(s.rhs == 0);
  CHECK(s.passed());
}

TEST_CASE("sample_conditioned_current") {
  auto tri = builtin_graph("triangle");
  auto m = sample_conditioned_current(tri, uniform(tri, 0.5L), SourceSet{0, 1}, 5, 10000);
  REQUIRE(m.has_value());
  CHECK(source_set(tri, *m) == SourceSet{0, 1});
  CHECK(!sample_conditioned_current(tri, uniform(tri, 0.5L), SourceSet{0}, 5, 100).has_value());
}

TEST_CASE("simon_check") {
  auto path = builtin_graph("path:3");
  auto eq = simon_check(path, uniform(path, 0.5L), 0, 2, {1});
  CHECK(std::fabs(eq.margin) <= 1e-12);
  CHECK(eq.holds());
  auto zero = simon_check(path, uniform(path, 0), 0, 2, {1});
  CHECK(zero.lhs == 0);
  CHECK(zero.rhs == 0);
  auto ladder = builtin_graph("ladder:3");
  auto l = simon_check(ladder, uniform(ladder, 0.5L), 0, 2, {1, 4});
  CHECK(l.holds());
  CHECK(l.margin > 0);
  CHECK_THROWS_AS(simon_check(ladder, uniform(ladder, 0.5L), 0, 2, {1}), PreconditionFailed);
}

TEST_CASE("rc_simon_scan") {
  auto ladder = builtin_graph("ladder:3");
  auto scan = rc_simon_scan(ladder, 0.5L, {1.5L}, 0, 2, {1, 4});
  REQUIRE(scan.points.size() == 3);
  CHECK(scan.points.front().q == 1);
  CHECK(scan.points.back().q == 2);
  CHECK(scan.points.front().margin >= -1e-12);
  CHECK(scan.points.back().margin >= -1e-12);
  // q = 2 is the Ising case: φ(x↔y) = σ(x,y) with p = 1 - e^{-2λ}.
  const Real lambda = -std::log1p(-0.5L) / 2;
  auto ising = simon_check(ladder, uniform(ladder, lambda), 0, 2, {1, 4});
  CHECK(std::fabs(ising.margin - scan.points.back().margin) <= 1e-12);

  auto flat = rc_simon_scan(ladder, 0, {}, 0, 2, {1, 4});
  for (const auto& pt : flat.points) CHECK(pt.margin == 0);
  CHECK_THROWS_AS(rc_simon_scan(ladder, 0.5L, {2.5L}, 0, 2, {1, 4}), InvalidArgument);
}
