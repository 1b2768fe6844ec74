#pragma once

// Exact enumeration of Potts and random-cluster measures on small graphs.

#include "flowpotts/errors.hpp"
#include "flowpotts/graph.hpp"
#include "flowpotts/polynomials.hpp"
#include "flowpotts/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <vector>

namespace flowpotts {

struct EnumerationLimits {
  std::uint64_t spin_config_cap = 10'000'000;  // q^|V|
  std::uint64_t rc_config_cap = 1'000'000;     // 2^|E|
};

// q-state Potts parameters; λ_e = β J_e.
struct PottsParams {
  unsigned q = 2;
  Real beta = 1;
  std::vector<Real> couplings;

  static PottsParams from_lambda(unsigned q, std::vector<Real> lambda) { return {q, 1, std::move(lambda)}; }
  static PottsParams uniform(const Multigraph& g, unsigned q, Real lambda) {
    return from_lambda(q, std::vector<Real>(g.edge_count(), lambda));
  }
  std::vector<Real> lambda() const;
  void validate(const Multigraph& g) const;
};

struct SpinConfig {
  std::vector<unsigned> spins;  // values in [0, q)
};

// One random-cluster configuration with its open clusters.
struct RCConfig {
  EdgeSubset omega;
  std::vector<std::size_t> component;  // cluster label per vertex
  std::size_t components = 0;

  bool connected(Vertex x, Vertex y) const { return component[x] == component[y]; }
};

using RcEvent = std::function<bool(const RCConfig&)>;
RcEvent connection_event(Vertex x, Vertex y);
inline RcEvent any_configuration() {
  return [](const RCConfig&) { return true; };
}

// p_e = 1 - exp(-β J_e q).
std::vector<Real> edge_prob(const PottsParams& params);

// Z^P = Σ_σ exp{Σ_e λ_e (q δ_e(σ) - 1)}.
Real potts_partition(const Multigraph& g, const PottsParams& params, const EnumerationLimits& limits = {});

// Exact reduced partition Σ_σ Π_{e: σ_x≠σ_y} x_e with x_e = exp(-q λ_e) = 1 - p_e.
// Z^P = exp{(q-1) Σ λ_e} times this value.
Rational potts_partition_reduced_exact(const Multigraph& g, unsigned q, const std::vector<Rational>& x,
                                       const EnumerationLimits& limits = {});

// σ(x,y) = E_π[q δ_{σx,σy} - 1].
Real potts_sigma(const Multigraph& g, const PottsParams& params, Vertex x, Vertex y,
                 const EnumerationLimits& limits = {});
// σ for every vertex pair from one enumeration; diagonal is q-1.
std::vector<std::vector<Real>> potts_sigma_matrix(const Multigraph& g, const PottsParams& params,
                                                  const EnumerationLimits& limits = {});
// Exact σ with weights x_e = 1 - p_e as in potts_partition_reduced_exact.
Rational potts_sigma_exact(const Multigraph& g, unsigned q, const std::vector<Rational>& x, Vertex xv, Vertex yv,
                           const EnumerationLimits& limits = {});

namespace detail {

void check_rc_cap(const Multigraph& g, const EnumerationLimits& limits);
void check_loopless(const Multigraph& g);
RCConfig make_rc_config(const Multigraph& g, std::uint64_t mask);

template <class S>
S rc_weight(const std::vector<S>& p, std::uint64_t mask) {
  S w{1};
  for (std::size_t i = 0; i < p.size(); ++i) w *= ((mask >> i) & 1U) ? p[i] : S(S{1} - p[i]);
  return w;
}

}  // namespace detail

template <class S>
std::vector<S> uniform_edge_values(const Multigraph& g, const S& value) {
  return std::vector<S>(g.edge_count(), value);
}

// Z^RC = Σ_ω Π_e p_e^{ω(e)} (1-p_e)^{1-ω(e)} q^{k(ω)}; real q > 0 allowed.
template <class S>
S rc_partition(const Multigraph& g, const std::vector<S>& p, const std::type_identity_t<S>& q,
               const EnumerationLimits& limits = {}) {
  detail::check_rc_cap(g, limits);
  if (p.size() != g.edge_count()) throw InvalidArgument("edge probability vector length mismatch");
  S total{0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.edge_count()); ++mask) {
    total += detail::rc_weight(p, mask) * ipow(q, component_count(g, mask));
  }
  return total;
}

// φ_{p,q}(event).
template <class S>
S rc_prob(const Multigraph& g, const std::vector<S>& p, const std::type_identity_t<S>& q, const RcEvent& event,
          const EnumerationLimits& limits = {}) {
  detail::check_rc_cap(g, limits);
  if (p.size() != g.edge_count()) throw InvalidArgument("edge probability vector length mismatch");
  S total{0};
  S hit{0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.edge_count()); ++mask) {
    auto config = detail::make_rc_config(g, mask);
    S w = detail::rc_weight(p, mask) * ipow(q, config.components);
    total += w;
    if (event(config)) hit += w;
  }
  return hit / total;
}

// φ_{p,q}(x ↔ y) for every pair from one enumeration.
template <class S>
std::vector<std::vector<S>> rc_connection_matrix(const Multigraph& g, const std::vector<S>& p,
                                                 const std::type_identity_t<S>& q,
                                                 const EnumerationLimits& limits = {}) {
  detail::check_rc_cap(g, limits);
  if (p.size() != g.edge_count()) throw InvalidArgument("edge probability vector length mismatch");
  const auto n = g.vertex_count();
  std::vector<std::vector<S>> hit(n, std::vector<S>(n, S{0}));
  S total{0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.edge_count()); ++mask) {
    auto config = detail::make_rc_config(g, mask);
    S w = detail::rc_weight(p, mask) * ipow(q, config.components);
    total += w;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (config.component[a] == config.component[b]) hit[a][b] += w;
      }
    }
  }
  for (auto& row : hit) {
    for (auto& v : row) v /= total;
  }
  return hit;
}

// φ_p(q^{k(ω)}) under the product (percolation) measure with density p.
template <class S>
S rc_q_moment(const Multigraph& g, const std::type_identity_t<S>& p, const std::type_identity_t<S>& q,
              const EnumerationLimits& limits = {}) {
  // Product-measure expectation of q^k is exactly the q-weighted partition sum.
  return rc_partition<S>(g, uniform_edge_values<S>(g, p), q, limits);
}

// |Z^RC(p,q) - q^|V| (1-p)^|E| W(p/(q(1-p)), p/(1-p))|; zero in exact arithmetic.
template <class S>
S verify_rc_whitney(const Multigraph& g, const std::type_identity_t<S>& p, const std::type_identity_t<S>& q,
                    const EnumerationLimits& limits = {}) {
  if (p == S{1}) throw InvalidArgument("Whitney form of Z^RC needs p != 1");
  S lhs = rc_partition<S>(g, uniform_edge_values<S>(g, p), q, limits);
  PolynomialLimits poly_limits;
  poly_limits.subset_edge_cap = 62;
  auto tally = rank_corank_tally(g, poly_limits);
  const S one_minus = S{1} - p;
  const S u = p / (q * one_minus);
  const S v = p / one_minus;
  S w{0};
  for (std::size_t r = 0; r < tally.size(); ++r) {
    for (std::size_t c = 0; c < tally[r].size(); ++c) {
      if (tally[r][c] != 0) w += S(tally[r][c]) * ipow(u, r) * ipow(v, c);
    }
  }
  S rhs = ipow(q, g.vertex_count()) * ipow(one_minus, g.edge_count()) * w;
  S diff = lhs - rhs;
  return diff < S{0} ? S(-diff) : diff;
}

// Worst |τ(x,y) - (1 - 1/q) φ_{p,q}(x↔y)| over pairs x ≠ y, p from edge_prob.
Real verify_corrconn(const Multigraph& g, const PottsParams& params, const EnumerationLimits& limits = {});
// Same in exact arithmetic with rational edge probabilities p_e.
Rational verify_corrconn_exact(const Multigraph& g, unsigned q, const std::vector<Rational>& p,
                               const EnumerationLimits& limits = {});

}  // namespace flowpotts
