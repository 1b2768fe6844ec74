#include "flowpotts/potts.hpp"

#include <cmath>

namespace flowpotts {

std::vector<Real> PottsParams::lambda() const {
  std::vector<Real> out(couplings.size());
  for (std::size_t i = 0; i < couplings.size(); ++i) out[i] = beta * couplings[i];
  return out;
}

void PottsParams::validate(const Multigraph& g) const {
  if (q < 2) throw InvalidArgument("Potts model needs q >= 2");
  if (!(beta >= 0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and non-negative");
  if (couplings.size() != g.edge_count()) throw InvalidArgument("coupling vector length mismatch");
  for (auto j : couplings) {
    if (!(j >= 0) || !std::isfinite(j)) throw InvalidArgument("couplings must be finite and non-negative");
  }
}

RcEvent connection_event(Vertex x, Vertex y) {
  return [x, y](const RCConfig& c) { return c.connected(x, y); };
}

std::vector<Real> edge_prob(const PottsParams& params) {
  std::vector<Real> p(params.couplings.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = -std::expm1(-params.beta * params.couplings[i] * params.q);
  return p;
}

namespace detail {

void check_rc_cap(const Multigraph& g, const EnumerationLimits& limits) {
  if (g.edge_count() >= 63 || (std::uint64_t{1} << g.edge_count()) > limits.rc_config_cap) {
    throw CapExceeded("random-cluster enumeration 2^" + std::to_string(g.edge_count()) + " exceeds cap of " +
                      std::to_string(limits.rc_config_cap));
  }
}

void check_loopless(const Multigraph& g) {
  if (g.has_loops()) throw InvalidArgument("Potts measures are defined on loopless graphs only");
}

RCConfig make_rc_config(const Multigraph& g, std::uint64_t mask) {
  RCConfig config;
  config.omega = EdgeSubset(g.edge_count(), mask);
  DisjointSets dsu(g.vertex_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if ((mask >> i) & 1U) dsu.unite(g.edge(i).tail, g.edge(i).head);
  }
  config.component.resize(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) config.component[v] = dsu.find(v);
  config.components = dsu.classes();
  return config;
}

}  // namespace detail

namespace {

void check_spin_cap(const Multigraph& g, unsigned q, const EnumerationLimits& limits) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    if (total > limits.spin_config_cap / q) {
      throw CapExceeded("spin enumeration q^|V| exceeds cap of " + std::to_string(limits.spin_config_cap));
    }
    total *= q;
  }
  if (total > limits.spin_config_cap) {
    throw CapExceeded("spin enumeration q^|V| exceeds cap of " + std::to_string(limits.spin_config_cap));
  }
}

// Calls visit(spins) for every σ ∈ {0..q-1}^V in lexicographic order.
template <class Visit>
void for_each_spin_config(std::size_t n, unsigned q, Visit&& visit) {
  SpinConfig config{std::vector<unsigned>(n, 0)};
  while (true) {
    visit(config);
    std::size_t i = 0;
    while (i < n && config.spins[i] == q - 1) config.spins[i++] = 0;
    if (i == n) return;
    ++config.spins[i];
  }
}

Real log_weight(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, const SpinConfig& s) {
  Real e = 0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& edge = g.edge(i);
    e += lambda[i] * (s.spins[edge.tail] == s.spins[edge.head] ? Real(q) - 1 : Real(-1));
  }
  return e;
}

Rational reduced_weight(const Multigraph& g, const std::vector<Rational>& x, const SpinConfig& s) {
  Rational w = 1;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& edge = g.edge(i);
    if (s.spins[edge.tail] != s.spins[edge.head]) w *= x[i];
  }
  return w;
}

void check_pair(const Multigraph& g, Vertex x, Vertex y) {
  if (x >= g.vertex_count() || y >= g.vertex_count()) throw InvalidArgument("vertex out of range");
  if (x == y) throw InvalidArgument("two-point function needs x != y");
}

}  // namespace

Real potts_partition(const Multigraph& g, const PottsParams& params, const EnumerationLimits& limits) {
  detail::check_loopless(g);
  params.validate(g);
  check_spin_cap(g, params.q, limits);
  auto lambda = params.lambda();
  Real z = 0;
  for_each_spin_config(g.vertex_count(), params.q,
                       [&](const SpinConfig& s) { z += std::exp(log_weight(g, lambda, params.q, s)); });
  return z;
}

Rational potts_partition_reduced_exact(const Multigraph& g, unsigned q, const std::vector<Rational>& x,
                                       const EnumerationLimits& limits) {
  detail::check_loopless(g);
  if (q < 2) throw InvalidArgument("Potts model needs q >= 2");
  if (x.size() != g.edge_count()) throw InvalidArgument("weight vector length mismatch");
  check_spin_cap(g, q, limits);
  Rational z = 0;
  for_each_spin_config(g.vertex_count(), q, [&](const SpinConfig& s) { z += reduced_weight(g, x, s); });
  return z;
}

std::vector<std::vector<Real>> potts_sigma_matrix(const Multigraph& g, const PottsParams& params,
                                                  const EnumerationLimits& limits) {
  detail::check_loopless(g);
  params.validate(g);
  check_spin_cap(g, params.q, limits);
  const auto n = g.vertex_count();
  const auto q = params.q;
  auto lambda = params.lambda();
  // Shift exponents by the all-equal energy so weights stay in (0, 1].
  Real top = 0;
  for (auto l : lambda) top += l * (Real(q) - 1);
  Real z = 0;
  std::vector<std::vector<Real>> equal(n, std::vector<Real>(n, 0));
  for_each_spin_config(n, q, [&](const SpinConfig& s) {
    Real w = std::exp(log_weight(g, lambda, q, s) - top);
    z += w;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (s.spins[a] == s.spins[b]) equal[a][b] += w;
      }
    }
  });
  std::vector<std::vector<Real>> sigma(n, std::vector<Real>(n, Real(q) - 1));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      sigma[a][b] = sigma[b][a] = Real(q) * equal[a][b] / z - 1;
    }
  }
  return sigma;
}

Real potts_sigma(const Multigraph& g, const PottsParams& params, Vertex x, Vertex y, const EnumerationLimits& limits) {
  check_pair(g, x, y);
  detail::check_loopless(g);
  params.validate(g);
  check_spin_cap(g, params.q, limits);
  const auto q = params.q;
  auto lambda = params.lambda();
  Real top = 0;
  for (auto l : lambda) top += l * (Real(q) - 1);
  Real z = 0;
  Real num = 0;
  for_each_spin_config(g.vertex_count(), q, [&](const SpinConfig& s) {
    Real w = std::exp(log_weight(g, lambda, q, s) - top);
    z += w;
    num += (s.spins[x] == s.spins[y] ? Real(q) - 1 : Real(-1)) * w;
  });
  return num / z;
}

Rational potts_sigma_exact(const Multigraph& g, unsigned q, const std::vector<Rational>& x, Vertex xv, Vertex yv,
                           const EnumerationLimits& limits) {
  check_pair(g, xv, yv);
  detail::check_loopless(g);
  if (q < 2) throw InvalidArgument("Potts model needs q >= 2");
  if (x.size() != g.edge_count()) throw InvalidArgument("weight vector length mismatch");
  check_spin_cap(g, q, limits);
  Rational z = 0;
  Rational num = 0;
  for_each_spin_config(g.vertex_count(), q, [&](const SpinConfig& s) {
    Rational w = reduced_weight(g, x, s);
    z += w;
    num += (s.spins[xv] == s.spins[yv] ? Rational(q - 1) : Rational(-1)) * w;
  });
  return num / z;
}

Real verify_corrconn(const Multigraph& g, const PottsParams& params, const EnumerationLimits& limits) {
  auto sigma = potts_sigma_matrix(g, params, limits);
  auto p = edge_prob(params);
  auto phi = rc_connection_matrix<Real>(g, p, Real(params.q), limits);
  const Real q = params.q;
  Real worst = 0;
  for (std::size_t a = 0; a < g.vertex_count(); ++a) {
    for (std::size_t b = a + 1; b < g.vertex_count(); ++b) {
      Real tau = sigma[a][b] / q;
      worst = std::max(worst, std::fabs(tau - (1 - 1 / q) * phi[a][b]));
    }
  }
  return worst;
}

Rational verify_corrconn_exact(const Multigraph& g, unsigned q, const std::vector<Rational>& p,
                               const EnumerationLimits& limits) {
  if (p.size() != g.edge_count()) throw InvalidArgument("edge probability vector length mismatch");
  std::vector<Rational> x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || p[i] >= 1) throw InvalidArgument("exact Potts weights need p_e in [0, 1)");
    x[i] = 1 - p[i];
  }
  auto phi = rc_connection_matrix<Rational>(g, p, Rational(q), limits);
  const Rational qr = q;
  Rational worst = 0;
  for (Vertex a = 0; a < g.vertex_count(); ++a) {
    for (Vertex b = a + 1; b < g.vertex_count(); ++b) {
      Rational tau = potts_sigma_exact(g, q, x, a, b, limits) / qr;
      Rational d = tau - (1 - 1 / qr) * phi[a][b];
      if (d < 0) d = -d;
      if (d > worst) worst = d;
    }
  }
  return worst;
}

}  // namespace flowpotts
