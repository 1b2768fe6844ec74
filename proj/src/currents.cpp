#include "flowpotts/currents.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

namespace flowpotts {

namespace {

void check_vertex(const Multigraph& g, Vertex v) {
  if (v >= g.vertex_count()) throw InvalidArgument("vertex out of range");
  if (v >= 64) throw CapExceeded("source masks need vertices below 64");
}

std::uint64_t bit(Vertex v) { return std::uint64_t{1} << v; }

std::uint64_t edge_flip(const Edge& e) { return bit(e.tail) ^ bit(e.head); }

std::vector<Real> parity_densities(const std::vector<Real>& lambda) {
  std::vector<Real> p(lambda.size());
  for (std::size_t e = 0; e < p.size(); ++e) p[e] = bernoulli_density(lambda[e]);
  return p;
}

// Po(λ){k} for k ≤ M.
std::vector<Real> poisson_pmf(Real lambda, std::uint32_t M) {
  std::vector<Real> pmf(M + 1);
  pmf[0] = std::exp(-lambda);
  for (std::uint32_t k = 1; k <= M; ++k) pmf[k] = pmf[k - 1] * lambda / k;
  return pmf;
}

Real mass(const std::vector<Real>& pmf) {
  Real s = 0;
  for (auto v : pmf) s += v;
  return s;
}

}  // namespace

Real sigma_source_ratio(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y,
                        const CurrentLimits& limits) {
  validate_intensity(g, lambda);
  check_vertex(g, x);
  check_vertex(g, y);
  if (x == y) throw InvalidArgument("two-point function needs x != y");
  auto p = parity_densities(lambda);
  return source_prob<Real>(g, p, SourceSet{x, y}, limits) / source_prob<Real>(g, p, SourceSet{}, limits);
}

std::map<std::uint64_t, std::uint64_t> split_histogram_enumerated(const Multigraph& g, const MultiplicityVector& m,
                                                                  const CurrentLimits& limits) {
  if (m.size() != g.edge_count()) throw InvalidArgument("multiplicity vector length mismatch");
  if (g.vertex_count() > 64) throw CapExceeded("source masks need at most 64 vertices");
  std::vector<std::uint64_t> flips;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (std::uint32_t k = 0; k < m[e]; ++k) flips.push_back(edge_flip(g.edge(e)));
  }
  if (flips.size() >= 63 || (std::uint64_t{1} << flips.size()) > limits.subset_cap) {
    throw CapExceeded("sub-multiset enumeration 2^" + std::to_string(flips.size()) + " exceeds cap");
  }
  std::map<std::uint64_t, std::uint64_t> hist;
  std::uint64_t boundary = 0;
  const std::uint64_t count = std::uint64_t{1} << flips.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    if (i > 0) boundary ^= flips[static_cast<std::size_t>(std::countr_zero(i))];
    ++hist[boundary];
  }
  return hist;
}

std::map<std::uint64_t, Real> split_distribution(const Multigraph& g, const MultiplicityVector& m) {
  if (m.size() != g.edge_count()) throw InvalidArgument("multiplicity vector length mismatch");
  if (g.vertex_count() > 64) throw CapExceeded("source masks need at most 64 vertices");
  std::map<std::uint64_t, Real> dist{{0, 1}};
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (m[e] == 0) continue;
    // A non-empty bundle has as many odd as even subsets.
    const auto flip = edge_flip(g.edge(e));
    std::map<std::uint64_t, Real> next;
    for (const auto& [mask, w] : dist) {
      next[mask] += w / 2;
      next[mask ^ flip] += w / 2;
    }
    dist = std::move(next);
  }
  return dist;
}

SwitchingCounts switching_check_fixed(const Multigraph& g, const MultiplicityVector& m, Vertex x, Vertex y,
                                      const SourceSet& A, const CurrentLimits& limits) {
  check_vertex(g, x);
  check_vertex(g, y);
  if (x == y) throw InvalidArgument("switching needs x != y");
  if (!connected_in(g, m, x, y)) throw PreconditionFailed("switching lemma needs x <-> y in m");
  const std::uint64_t pair = bit(x) | bit(y);
  const std::uint64_t a = A.mask();
  const std::uint64_t total = source_set(g, m).mask();
  SwitchingCounts counts;
  for (const auto& [boundary, n] : split_histogram_enumerated(g, m, limits)) {
    // ∂(m∖n) = ∂m △ ∂n.
    const std::uint64_t rest = total ^ boundary;
    if (boundary == pair && rest == a) counts.lhs += n;
    if (boundary == 0 && rest == (a ^ pair)) counts.rhs += n;
  }
  return counts;
}

IdentityCheck switching_check_poisson(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y,
                                      const SourceSet& A, std::uint32_t M) {
  validate_intensity(g, lambda);
  check_vertex(g, x);
  check_vertex(g, y);
  if (x == y) throw InvalidArgument("switching needs x != y");
  const auto edges = g.edge_count();
  double boxes = std::pow(double(M) + 1, double(edges));
  if (boxes > 1e7) throw CapExceeded("switching box (M+1)^|E| exceeds 10^7");
  // m + m' is Poisson(2λ) per edge; given the union, each element lies in m
  // with probability 1/2.
  std::vector<std::vector<Real>> pmf(edges);
  Real inside = 1;
  for (std::size_t e = 0; e < edges; ++e) {
    pmf[e] = poisson_pmf(2 * lambda[e], M);
    inside *= mass(pmf[e]);
  }
  const std::uint64_t pair = bit(x) | bit(y);
  const std::uint64_t a = A.mask();
  std::vector<std::uint32_t> t(edges, 0);
  Real lhs = 0;
  Real rhs = 0;
  while (true) {
    MultiplicityVector tv(t);
    if (connected_in(g, tv, x, y)) {
      Real w = 1;
      for (std::size_t e = 0; e < edges; ++e) w *= pmf[e][t[e]];
      const std::uint64_t total = source_set(g, tv).mask();
      auto dist = split_distribution(g, tv);
      if ((total ^ pair) == a) {
        if (auto it = dist.find(pair); it != dist.end()) lhs += w * it->second;
      }
      if (total == (a ^ pair)) {
        if (auto it = dist.find(0); it != dist.end()) rhs += w * it->second;
      }
    }
    std::size_t i = 0;
    while (i < edges && t[i] == M) t[i++] = 0;
    if (i == edges) break;
    ++t[i];
  }
  Real tail = std::max<Real>(0, 1 - inside);
  return make_check(lhs, rhs, tail + rounding_allowance(1, Real(4 * edges + 64)), true, M);
}

std::optional<TwoCopyProbability> two_copy_connection(const Multigraph& g, const std::vector<Real>& lambda,
                                                      const SourceSet& A, const SourceSet& B, Vertex x, Vertex y,
                                                      std::uint32_t M, const CurrentLimits& limits) {
  validate_intensity(g, lambda);
  check_vertex(g, x);
  check_vertex(g, y);
  const auto edges = g.edge_count();
  // Per-edge states of (m1, m2): empty, or occupied with parities (a, b).
  constexpr std::size_t kStates = 5;
  double combos = std::pow(double(kStates), double(edges));
  if (combos > double(limits.state_cap)) throw CapExceeded("two-copy state enumeration 5^|E| exceeds cap");
  std::vector<std::array<Real, kStates>> weight(edges);
  Real inside = 1;
  for (std::size_t e = 0; e < edges; ++e) {
    auto pmf = poisson_pmf(lambda[e], M);
    Real even = 0, odd = 0;
    for (std::uint32_t k = 0; k <= M; ++k) (k % 2 == 0 ? even : odd) += pmf[k];
    const Real empty = pmf[0] * pmf[0];
    weight[e] = {empty, even * even - empty, odd * even, even * odd, odd * odd};
    inside *= (even + odd) * (even + odd);
  }
  static constexpr std::array<int, kStates> kParity1{0, 0, 1, 0, 1};
  static constexpr std::array<int, kStates> kParity2{0, 0, 0, 1, 1};
  const std::uint64_t a = A.mask();
  const std::uint64_t b = B.mask();
  std::vector<std::size_t> state(edges, 0);
  Real numerator = 0;
  while (true) {
    std::uint64_t d1 = 0, d2 = 0;
    Real w = 1;
    for (std::size_t e = 0; e < edges; ++e) {
      w *= weight[e][state[e]];
      if (kParity1[state[e]]) d1 ^= edge_flip(g.edge(e));
      if (kParity2[state[e]]) d2 ^= edge_flip(g.edge(e));
    }
    if (d1 == a && d2 == b && w > 0) {
      DisjointSets dsu(g.vertex_count());
      for (std::size_t e = 0; e < edges; ++e) {
        if (state[e] != 0) dsu.unite(g.edge(e).tail, g.edge(e).head);
      }
      if (dsu.find(x) == dsu.find(y)) numerator += w;
    }
    std::size_t i = 0;
    while (i < edges && state[i] == kStates - 1) state[i++] = 0;
    if (i == edges) break;
    ++state[i];
  }
  auto p = parity_densities(lambda);
  auto dist = source_distribution<Real>(g, p);
  auto find = [&](std::uint64_t mask) {
    auto it = dist.find(mask);
    return it == dist.end() ? Real(0) : it->second;
  };
  const Real denominator = find(a) * find(b);
  if (denominator <= 0) return std::nullopt;
  TwoCopyProbability out;
  out.value = numerator / denominator;
  out.bound = std::max<Real>(0, 1 - inside) / denominator + rounding_allowance(out.value, Real(8 * edges + 64));
  return out;
}

IdentityCheck appls_identity_i(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y,
                               std::uint32_t M, const CurrentLimits& limits) {
  if (x == y) throw InvalidArgument("needs x != y");
  Real s = sigma_source_ratio(g, lambda, x, y, limits);
  auto q = two_copy_connection(g, lambda, SourceSet{}, SourceSet{}, x, y, M, limits);
  // P(∂P = ∅) > 0 always: the empty current has no sources.
  if (!q) throw InternalError("empty source set has zero probability");
  return make_check(s * s, q->value, q->bound + rounding_allowance(s * s, 64), true, M);
}

IdentityCheck appls_identity_ii(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y, Vertex z,
                                std::uint32_t M, const CurrentLimits& limits) {
  if (x == y || y == z || x == z) throw InvalidArgument("needs distinct x, y, z");
  Real sxy = sigma_source_ratio(g, lambda, x, y, limits);
  Real syz = sigma_source_ratio(g, lambda, y, z, limits);
  Real sxz = sigma_source_ratio(g, lambda, x, z, limits);
  Real lhs = sxy * syz;
  auto q = two_copy_connection(g, lambda, SourceSet{x, z}, SourceSet{}, x, y, M, limits);
  // P(∂P = {x,z}) = 0 forces σ(x,z) = 0 and the right side vanishes.
  Real rhs = q ? sxz * q->value : Real(0);
  Real bound = (q ? sxz * q->bound : Real(0)) + rounding_allowance(std::max(lhs, rhs), 64);
  return make_check(lhs, rhs, bound, true, M);
}

std::optional<MultiplicityVector> sample_conditioned_current(const Multigraph& g, const std::vector<Real>& lambda,
                                                             const SourceSet& A, std::uint64_t seed,
                                                             std::uint64_t max_tries) {
  for (std::uint64_t i = 0; i < max_tries; ++i) {
    auto m = sample_multiplicities(g, lambda, seed, i);
    if (source_set(g, m) == A) return m;
  }
  return std::nullopt;
}

SimonReport simon_check(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex z,
                        const std::vector<Vertex>& W) {
  check_vertex(g, x);
  check_vertex(g, z);
  if (x == z) throw InvalidArgument("Simon inequality needs x != z");
  for (auto w : W) check_vertex(g, w);
  if (!separates(g, W, x, z)) throw PreconditionFailed("W does not separate x and z");
  auto sigma = potts_sigma_matrix(g, PottsParams::from_lambda(2, lambda));
  SimonReport r;
  r.lhs = sigma[x][z];
  for (auto y : W) r.rhs += sigma[x][y] * sigma[y][z];
  r.margin = r.rhs - r.lhs;
  return r;
}

SimonScan rc_simon_scan(const Multigraph& g, Real p, std::vector<Real> q_grid, Vertex x, Vertex z,
                        const std::vector<Vertex>& W, const EnumerationLimits& limits) {
  check_vertex(g, x);
  check_vertex(g, z);
  if (x == z) throw InvalidArgument("Simon inequality needs x != z");
  for (auto w : W) check_vertex(g, w);
  if (!separates(g, W, x, z)) throw PreconditionFailed("W does not separate x and z");
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("p must lie in [0, 1]");
  for (auto q : q_grid) {
    if (!(q >= 1 && q <= 2)) throw InvalidArgument("scan grid must lie in [1, 2]");
  }
  q_grid.push_back(1);
  q_grid.push_back(2);
  std::sort(q_grid.begin(), q_grid.end());
  q_grid.erase(std::unique(q_grid.begin(), q_grid.end()), q_grid.end());
  SimonScan scan;
  scan.min_margin = std::numeric_limits<Real>::infinity();
  auto probs = uniform_edge_values<Real>(g, p);
  for (auto q : q_grid) {
    auto phi = rc_connection_matrix<Real>(g, probs, q, limits);
    ScanPoint point;
    point.q = q;
    point.lhs = phi[x][z];
    for (auto y : W) point.rhs += phi[x][y] * phi[y][z];
    point.margin = point.rhs - point.lhs;
    scan.min_margin = std::min(scan.min_margin, point.margin);
    scan.points.push_back(point);
  }
  return scan;
}

}  // namespace flowpotts
