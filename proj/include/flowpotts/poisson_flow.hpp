#pragma once

// Flow-count expectations over Poisson multigraphs G_P: Monte Carlo and
// truncated exact sums with certified tail bounds.

#include "flowpotts/check.hpp"
#include "flowpotts/errors.hpp"
#include "flowpotts/graph.hpp"
#include "flowpotts/potts.hpp"
#include "flowpotts/rng.hpp"
#include "flowpotts/scalar.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowpotts {

struct TruncatedExpectation {
  Real value = 0;
  Real tail_bound = 0;            // |true value - value| ≤ tail_bound
  Real rounding = 0;              // floating round-off allowance on value
  std::uint32_t truncation_level = 0;
  bool certified = true;          // false if an adaptive target was not reached
};

struct McEstimate {
  Real mean = 0;
  Real std_error = 0;
  std::uint64_t samples = 0;      // accepted samples
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> rejected;  // sample indices over the edge cap
};

struct McOptions {
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t edge_cap = 64;    // samples with more edges are rejected
};

struct TruncationOptions {
  Real target = 1e-10;
  std::uint32_t max_level = 400;
  std::size_t subset_edge_cap = 20;
};

void validate_intensity(const Multigraph& g, const std::vector<Real>& lambda);

// One Poisson(λ_e) draw per edge from a sequential stream.
MultiplicityVector sample_multiplicities(const Multigraph& g, const std::vector<Real>& lambda, SplitMix64& rng);
// Draw for sample index `sample` of run `seed`; edge e uses its own substream.
MultiplicityVector sample_multiplicities(const Multigraph& g, const std::vector<Real>& lambda, std::uint64_t seed,
                                         std::uint64_t sample);

// Sample mean of C(G_P; q).
McEstimate expect_flow_mc(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, const McOptions& options);

// Σ_{m: m_e ≤ M} Π_e Po(λ_e){m_e} C(G_m; q). Evaluated by summing each edge
// bundle separately: a bundle of m parallel edges carries net flow 0 in
// a(m) = ((q-1)^m + (q-1)(-1)^m)/q ways and each non-zero net flow in
// b(m) = ((q-1)^m - (-1)^m)/q ways, so only 2^|E| flow counts are needed.
TruncatedExpectation exact_expect_flow(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                       std::uint32_t M, const TruncationOptions& options = {});
// Smallest M whose tail bound meets options.target.
TruncatedExpectation exact_expect_flow(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                       const TruncationOptions& options = {});
// Same sum for G_P^{x,y}: the extra edge (x, y) is always present once.
TruncatedExpectation exact_expect_flow_pair(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                            Vertex x, Vertex y, std::uint32_t M,
                                            const TruncationOptions& options = {});

enum class FlowRatioMode { exact, mc };

struct FlowRatio {
  Real value = 0;
  Real error = 0;                 // certified bound (exact) or delta-method SE (mc)
  FlowRatioMode mode = FlowRatioMode::exact;
  std::uint32_t truncation_level = 0;
  bool certified = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> rejected;
};

// σ(x,y) = E C(G_P^{x,y}; q) / E C(G_P; q).
FlowRatio sigma_flow_ratio_exact(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, Vertex x,
                                 Vertex y, const TruncationOptions& options = {});
// Numerator and denominator from the same multiplicity samples.
FlowRatio sigma_flow_ratio_mc(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, Vertex x, Vertex y,
                              const McOptions& options);

// e^{-Σλ} Z^P against q^|V| E C(G_P; q), with J = λ and β = 1.
IdentityCheck verify_partition_identity(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                        std::uint32_t M, const TruncationOptions& options = {});
IdentityCheck verify_partition_identity(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                        const TruncationOptions& options = {});

// P(∂ζ = A) under independent Bernoulli(p_e) edges, as a map from source
// mask to probability. Vertices must be < 64.
template <class S>
std::map<std::uint64_t, S> source_distribution(const Multigraph& g, const std::vector<S>& p) {
  if (p.size() != g.edge_count()) throw InvalidArgument("edge probability vector length mismatch");
  if (g.vertex_count() > 64) throw CapExceeded("source masks need at most 64 vertices");
  std::map<std::uint64_t, S> dist{{0, S{1}}};
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    const std::uint64_t flip = (std::uint64_t{1} << e.tail) ^ (std::uint64_t{1} << e.head);
    std::map<std::uint64_t, S> next;
    for (const auto& [mask, w] : dist) {
      next[mask] += w * (S{1} - p[i]);
      next[mask ^ flip] += w * p[i];
    }
    dist = std::move(next);
  }
  return dist;
}

// p' = P(Po(λ) is odd) = (1 - e^{-2λ})/2.
Real bernoulli_density(Real lambda);

// σ(x,y) for q = 2 as P(G_P^{x,y} even) / P(G_P even), exactly through
// edge parities.
Real even_ratio_sigma(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y);

// (q-1) φ_{p,q}(x↔y) against the signed Tutte ratio
// E[(-1)^{1+|E_P|} T(G_P^{x,y}; 0, 1-q)] / E[(-1)^{|E_P|} T(G_P; 0, 1-q)]
// for real q > 0 and λ = -ln(1-p)/q on every edge. Uncertified when the
// tail target cannot be met.
IdentityCheck verify_flowconn_tutte(const Multigraph& g, Real p, Real q, Vertex x, Vertex y,
                                    const TruncationOptions& options = {});
// φ_p(q^{k(ω)}) against (1-p)^{|E|(q-2)/q} q^|V| E C(G_P; q).
IdentityCheck verify_compflow(const Multigraph& g, Real p, unsigned q, const TruncationOptions& options = {});
// φ_p(2^{k(ω)}) against 2^|V| P(G_P is even) with λ = -ln(1-p)/2.
IdentityCheck verify_curiosity(const Multigraph& g, Real p);
// φ_p(2^{k(ω)}) - 2^|V| φ_{p/2}(open graph even), exactly.
Rational verify_even_open_identity(const Multigraph& g, const Rational& p, const EnumerationLimits& limits = {});

}  // namespace flowpotts
