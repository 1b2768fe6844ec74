#pragma once

// q = 2 random currents: source sets, the switching lemma, σ products and
// the Simon inequality.

#include "flowpotts/check.hpp"
#include "flowpotts/errors.hpp"
#include "flowpotts/graph.hpp"
#include "flowpotts/poisson_flow.hpp"
#include "flowpotts/potts.hpp"
#include "flowpotts/scalar.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace flowpotts {

struct CurrentLimits {
  std::uint64_t subset_cap = std::uint64_t{1} << 24;  // 2^|E| or 2^{Σm}
  std::uint64_t state_cap = 10'000'000;               // 5^|E| two-copy states
};

// P(∂ζ = A) for independent Bernoulli(p_e) edges by enumerating all 2^|E|
// open subgraphs. Zero when |A| is odd.
template <class S>
S source_prob(const Multigraph& g, const std::vector<S>& p, const SourceSet& A, const CurrentLimits& limits = {}) {
  if (p.size() != g.edge_count()) throw InvalidArgument("edge probability vector length mismatch");
  if (g.vertex_count() > 64) throw CapExceeded("source masks need at most 64 vertices");
  if (g.edge_count() >= 63 || (std::uint64_t{1} << g.edge_count()) > limits.subset_cap) {
    throw CapExceeded("source enumeration 2^" + std::to_string(g.edge_count()) + " exceeds cap");
  }
  if (A.size() % 2 != 0) return S{0};
  const std::uint64_t target = A.mask();
  S total{0};
  for (std::uint64_t open = 0; open < (std::uint64_t{1} << g.edge_count()); ++open) {
    std::uint64_t boundary = 0;
    S w{1};
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if ((open >> e) & 1U) {
        w *= p[e];
        boundary ^= (std::uint64_t{1} << g.edge(e).tail) ^ (std::uint64_t{1} << g.edge(e).head);
      } else {
        w *= S{1} - p[e];
      }
    }
    if (boundary == target) total += w;
  }
  return total;
}

template <class S>
S source_prob(const Multigraph& g, const std::type_identity_t<S>& p, const SourceSet& A,
              const CurrentLimits& limits = {}) {
  return source_prob<S>(g, std::vector<S>(g.edge_count(), p), A, limits);
}

// σ(x,y) = P(∂P = {x,y}) / P(∂P = ∅) at densities p'(λ_e).
Real sigma_source_ratio(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y,
                        const CurrentLimits& limits = {});

// Number of labelled sub-multisets n ⊆ m by source set ∂n, by exhaustive
// Gray-code enumeration of all 2^{Σm} choices.
std::map<std::uint64_t, std::uint64_t> split_histogram_enumerated(const Multigraph& g, const MultiplicityVector& m,
                                                                  const CurrentLimits& limits = {});
// Same histogram from per-edge parity counts (2^{m_e - 1} even and odd
// subsets of each bundle), scaled by 2^{-Σm}: the law of ∂N under P^M.
std::map<std::uint64_t, Real> split_distribution(const Multigraph& g, const MultiplicityVector& m);

struct SwitchingCounts {
  std::uint64_t lhs = 0;  // #{n: ∂n = {x,y}, ∂(m∖n) = A}
  std::uint64_t rhs = 0;  // #{n: ∂n = ∅, ∂(m∖n) = A △ {x,y}}
};

// Throws PreconditionFailed unless x ↔ y in m.
SwitchingCounts switching_check_fixed(const Multigraph& g, const MultiplicityVector& m, Vertex x, Vertex y,
                                      const SourceSet& A, const CurrentLimits& limits = {});

// Both sides of the Poisson switching identity summed over the union
// multiplicities t = m + m' with t_e ≤ M and x ↔ y in t; bound is the
// probability mass outside that box.
IdentityCheck switching_check_poisson(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y,
                                      const SourceSet& A, std::uint32_t M);

// lhs = σ(x,y)², rhs = Q_{∅;∅}(x ↔ y in P1 + P2).
IdentityCheck appls_identity_i(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y,
                               std::uint32_t M, const CurrentLimits& limits = {});
// lhs = σ(x,y) σ(y,z), rhs = σ(x,z) Q_{{x,z};∅}(x ↔ y in P1 + P2).
IdentityCheck appls_identity_ii(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y, Vertex z,
                                std::uint32_t M, const CurrentLimits& limits = {});

// Two-copy probability Q_{A;B}(x ↔ y in P1 + P2), truncated at M per copy
// and edge. The joint event is taken under P × P first and then divided by
// P(∂P = A) P(∂P = B). Returns nullopt when P(∂P = A) P(∂P = B) = 0.
struct TwoCopyProbability {
  Real value = 0;
  Real bound = 0;
};
std::optional<TwoCopyProbability> two_copy_connection(const Multigraph& g, const std::vector<Real>& lambda,
                                                      const SourceSet& A, const SourceSet& B, Vertex x, Vertex y,
                                                      std::uint32_t M, const CurrentLimits& limits = {});

// Draw from P conditioned on ∂P = A by rejection; for spot checks only.
std::optional<MultiplicityVector> sample_conditioned_current(const Multigraph& g, const std::vector<Real>& lambda,
                                                             const SourceSet& A, std::uint64_t seed,
                                                             std::uint64_t max_tries);

struct SimonReport {
  Real lhs = 0;     // σ(x,z)
  Real rhs = 0;     // Σ_{y∈W} σ(x,y) σ(y,z)
  Real margin = 0;  // rhs - lhs
  bool holds() const { return margin >= -1e-12; }
};

// Throws PreconditionFailed unless W separates x and z.
SimonReport simon_check(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex z,
                        const std::vector<Vertex>& W);

struct ScanPoint {
  Real q = 0;
  Real lhs = 0;
  Real rhs = 0;
  Real margin = 0;
};

struct SimonScan {
  std::vector<ScanPoint> points;
  Real min_margin = 0;
};

// Random-cluster Simon form φ(x↔z) ≤ Σ_{y∈W} φ(x↔y) φ(y↔z) over a q grid in
// [1, 2]; both endpoints are always included. Reports margins only.
SimonScan rc_simon_scan(const Multigraph& g, Real p, std::vector<Real> q_grid, Vertex x, Vertex z,
                        const std::vector<Vertex>& W, const EnumerationLimits& limits = {});

}  // namespace flowpotts
