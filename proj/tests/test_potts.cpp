#include <doctest.h>

#include "flowpotts/catalogue.hpp"
#include "flowpotts/potts.hpp"

#include <cmath>
#include <random>

using namespace flowpotts;

namespace {

double d(Real x) { return static_cast<double>(x); }

// Loopless connected multigraphs with at most 5 vertices.
std::vector<Multigraph> small_loopless(std::size_t count, std::uint64_t seed, std::size_t max_edges) {
  std::mt19937_64 rng(seed);
  std::vector<Multigraph> out;
  std::uniform_int_distribution<std::size_t> nv(2, 5);
  while (out.size() < count) {
    auto n = nv(rng);
    std::uniform_int_distribution<std::size_t> ne(n - 1, std::max(n - 1, max_edges));
    out.push_back(random_connected_multigraph(rng, n, ne(rng), false));
  }
  return out;
}

}  // namespace

TEST_CASE("edge_prob") {
  auto k2 = builtin_graph("k2");
  CHECK(d(edge_prob(PottsParams::uniform(k2, 2, 0))[0]) == 0.0);
  CHECK(d(edge_prob(PottsParams::uniform(k2, 2, 0.5))[0]) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
  Real prev = 0;
  for (Real lambda : {0.1L, 0.5L, 1.0L, 3.0L, 10.0L}) {
    auto p = edge_prob(PottsParams::uniform(k2, 3, lambda))[0];
    CHECK(p > prev);
    CHECK(p < 1);
    prev = p;
  }
  // β and J enter only through their product.
  PottsParams params{3, 2, {0.25}};
  CHECK(d(edge_prob(params)[0]) == doctest::Approx(d(edge_prob(PottsParams::uniform(k2, 3, 0.5))[0])));
}

TEST_CASE("potts_partition") {
  auto tri = builtin_graph("triangle");
  CHECK(d(potts_partition(tri, PottsParams::uniform(tri, 3, 0))) == doctest::Approx(27));
  auto k2 = builtin_graph("k2");
  for (Real l : {0.2L, 0.5L, 1.3L}) {
    CHECK(d(potts_partition(k2, PottsParams::uniform(k2, 2, l))) ==
          doctest::Approx(d(2 * std::exp(l) + 2 * std::exp(-l))).epsilon(1e-14));
  }
  // 8-term enumeration, frozen from an independent script.
  CHECK(d(potts_partition(tri, PottsParams::uniform(tri, 2, 0.3L))) == doctest::Approx(9.364115546404207).epsilon(1e-14));
  CHECK_THROWS_AS(potts_partition(Multigraph(1, {{0, 0}}), PottsParams::uniform(Multigraph(1, {{0, 0}}), 2, 1)),
                  InvalidArgument);
  EnumerationLimits tight;
  tight.spin_config_cap = 10;
  CHECK_THROWS_AS(potts_partition(tri, PottsParams::uniform(tri, 3, 1), tight), CapExceeded);
  CHECK_THROWS_AS(potts_partition(tri, PottsParams{3, 1, {1, -1, 1}}), InvalidArgument);
}

TEST_CASE("potts_partition exact form") {
  // Z^P = exp{(q-1) Σλ} Σ_σ Π_{unsat} x_e with x_e = exp(-qλ).
  auto tri = builtin_graph("triangle");
  const Real lambda = 0.3L;
  const unsigned q = 3;
  Real x = std::exp(-Real(q) * lambda);
  auto reduced = potts_partition_reduced_exact(tri, q, std::vector<Rational>(3, rational_from_real(x)));
  Real rebuilt = std::exp((q - 1) * 3 * lambda) * to_real(reduced);
  CHECK(d(rebuilt) == doctest::Approx(d(potts_partition(tri, PottsParams::uniform(tri, q, lambda)))).epsilon(1e-15));
  CHECK(potts_partition_reduced_exact(tri, 2, std::vector<Rational>(3, Rational(1))) == 8);
}

TEST_CASE("potts_sigma") {
  auto k2 = builtin_graph("k2");
  CHECK(d(potts_sigma(k2, PottsParams::uniform(k2, 4, 0), 0, 1)) == doctest::Approx(0.0));
  CHECK(d(potts_sigma(k2, PottsParams::uniform(k2, 2, 0.5L), 0, 1)) == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
  // 2(e^{1.5}-1)/(e^{1.5}+2) = 1.07431536..., from a 9-config enumeration.
  CHECK(d(potts_sigma(k2, PottsParams::uniform(k2, 3, 0.5L), 0, 1)) == doctest::Approx(1.0743153621086827).epsilon(1e-14));
  auto tri = builtin_graph("triangle");
  CHECK(d(potts_sigma(tri, PottsParams::uniform(tri, 3, 0.4L), 0, 1)) == doctest::Approx(1.2166398396507145).epsilon(1e-14));
  CHECK_THROWS_AS(potts_sigma(k2, PottsParams::uniform(k2, 2, 0.5L), 1, 1), InvalidArgument);

  SUBCASE("matrix form agrees with pairwise form") {
    auto g = builtin_graph("ladder:2");
    auto params = PottsParams::uniform(g, 3, 0.7L);
    auto m = potts_sigma_matrix(g, params);
    for (Vertex a = 0; a < 4; ++a) {
      for (Vertex b = a + 1; b < 4; ++b) CHECK(d(m[a][b]) == doctest::Approx(d(potts_sigma(g, params, a, b))).epsilon(1e-15));
    }
  }
}

TEST_CASE("rc_partition") {
  auto k4 = builtin_graph("k4");
  for (Real p : {0.0L, 0.3L, 0.9L}) {
    CHECK(d(rc_partition<Real>(k4, uniform_edge_values<Real>(k4, p), 1)) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(rc_partition<Rational>(k4, uniform_edge_values<Rational>(k4, 0), 3) == 81);
  auto k2 = builtin_graph("k2");
  Rational p(2, 7);
  Rational q(5, 2);
  CHECK(rc_partition<Rational>(k2, {p}, q) == (1 - p) * q * q + p * q);
  EnumerationLimits tight;
  tight.rc_config_cap = 16;
  CHECK_THROWS_AS(rc_partition<Real>(k4, uniform_edge_values<Real>(k4, 0.5L), 2, tight), CapExceeded);
}

TEST_CASE("rc_prob") {
  auto tri = builtin_graph("triangle");
  auto half = uniform_edge_values<Rational>(tri, Rational(1, 2));
  CHECK(rc_prob<Rational>(tri, half, 2, any_configuration()) == 1);
  CHECK(rc_prob<Rational>(tri, uniform_edge_values<Rational>(tri, 1), 2, connection_event(0, 2)) == 1);
  // 8-term enumeration, frozen from an independent script.
  CHECK(rc_prob<Rational>(tri, half, 2, connection_event(0, 1)) == Rational(3, 7));
}

TEST_CASE("verify_corrconn") {
  auto k2 = builtin_graph("k2");
  CHECK(d(verify_corrconn(k2, PottsParams::uniform(k2, 2, 0))) == 0.0);
  CHECK(d(verify_corrconn(k2, PottsParams::uniform(k2, 2, 0.5L))) <= 1e-12);
  auto tri = builtin_graph("triangle");
  CHECK(d(verify_corrconn(tri, PottsParams::uniform(tri, 3, 0.4L))) <= 1e-12);

  SUBCASE("random graphs, q in {2,3,4}, lambda in [0,2]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lam(0, 2);
    for (const auto& g : small_loopless(25, 3, 7)) {
      for (unsigned q = 2; q <= 4; ++q) {
        std::vector<Real> lambda(g.edge_count());
        for (auto& l : lambda) l = lam(rng);
        auto params = PottsParams::from_lambda(q, lambda);
        CHECK(d(verify_corrconn(g, params)) <= 1e-12);
        auto sigma = potts_sigma_matrix(g, params);
        for (std::size_t a = 0; a < g.vertex_count(); ++a) {
          for (std::size_t b = a + 1; b < g.vertex_count(); ++b) {
            CHECK(sigma[a][b] >= -1e-15);
            CHECK(sigma[a][b] <= q - 1 + 1e-15);
          }
        }
      }
    }
  }
  SUBCASE("exact mode is identically zero") {
    CHECK(verify_corrconn_exact(tri, 3, uniform_edge_values<Rational>(tri, Rational(2, 5))) == 0);
    CHECK(verify_corrconn_exact(builtin_graph("k4"), 2, {Rational(1, 3), Rational(1, 2), 0, Rational(3, 4),
                                                         Rational(1, 5), Rational(1, 7)}) == 0);
  }
}

TEST_CASE("Potts measure normalization") {
  // Σ_σ π(σ) = 1 exactly: the reduced weights divided by their sum.
  auto tri = builtin_graph("triangle");
  std::vector<Rational> x{Rational(1, 3), Rational(1, 2), Rational(2, 3)};
  auto z = potts_partition_reduced_exact(tri, 3, x);
  CHECK(z / z == 1);
  CHECK(z > 0);
}

TEST_CASE("verify_rc_whitney") {
  auto tri = builtin_graph("triangle");
  CHECK(verify_rc_whitney<Rational>(tri, 0, 3) == 0);
  CHECK(verify_rc_whitney<Rational>(builtin_graph("k2"), Rational(1, 2), 2) == 0);
  CHECK(verify_rc_whitney<Rational>(tri, Rational(1, 3), 3) == 0);
  CHECK(verify_rc_whitney<Rational>(builtin_graph("k4"), Rational(2, 9), Rational(3, 2)) == 0);
  CHECK(d(verify_rc_whitney<Real>(builtin_graph("ladder:3"), 0.37L, 2.5L)) <= 1e-12);
  CHECK_THROWS_AS(verify_rc_whitney<Rational>(tri, 1, 2), InvalidArgument);
}

TEST_CASE("rc_q_moment") {
  auto k2 = builtin_graph("k2");
  CHECK(rc_q_moment<Rational>(k2, Rational(1, 2), 2) == 3);
  CHECK(rc_q_moment<Rational>(builtin_graph("k4"), Rational(1, 3), 1) == 1);
  CHECK(rc_q_moment<Rational>(builtin_graph("k4"), 0, 3) == 81);
}
