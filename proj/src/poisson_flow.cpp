#include "flowpotts/poisson_flow.hpp"

#include "flowpotts/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace flowpotts {

namespace {

constexpr Real kEps = std::numeric_limits<Real>::epsilon();

// e^{-λ} Σ_{k>M} x^k / k!, rounded up. With x = λr this is the part of
// E[r^{Po(λ)}] beyond M.
Real poisson_tail(Real lambda, Real x, std::uint32_t M) {
  if (x <= 0) return 0;
  // First term e^{-λ} x^{M+1} / (M+1)! in log space.
  Real log_term = -lambda + (M + 1) * std::log(x) - std::lgamma(Real(M) + 2);
  Real term = std::exp(log_term);
  Real sum = 0;
  std::uint64_t k = M + 1;
  for (int guard = 0; guard < 100000; ++guard) {
    sum += term;
    Real ratio = x / Real(k + 1);
    if (ratio < 0.5L && term * ratio / (1 - ratio) <= sum * kEps) {
      sum += term * ratio / (1 - ratio);
      break;
    }
    term *= ratio;
    ++k;
  }
  return sum * (1 + 64 * kEps);
}

// Truncated per-edge sums E[a(m); m ≤ M] and E[b(m); m ≤ M] with bounds on
// what lies beyond M.
struct BundleSums {
  Real a = 0;
  Real b = 0;
  Real da = 0;
  Real db = 0;
};

BundleSums bundle_sums(Real lambda, Real q, std::uint32_t M) {
  const Real r = q - 1;
  Real s1 = 0;  // Σ Po(k) r^k
  Real s2 = 0;  // Σ Po(k) (-1)^k
  Real po = std::exp(-lambda);
  Real rk = 1;
  for (std::uint32_t k = 0; k <= M; ++k) {
    if (k > 0) {
      po *= lambda / k;
      rk *= r;
    }
    s1 += po * rk;
    s2 += (k % 2 == 0) ? po : -po;
  }
  BundleSums s;
  s.a = (s1 + r * s2) / q;
  s.b = (s1 - s2) / q;
  // |a(m)| ≤ (|r|^m + |r|)/q and |b(m)| ≤ (|r|^m + 1)/q.
  Real moment = poisson_tail(lambda, lambda * std::fabs(r), M);
  Real beyond = poisson_tail(lambda, lambda, M);
  s.da = (moment + std::fabs(r) * beyond) / q;
  s.db = (moment + beyond) / q;
  return s;
}

// C(h|S; q) for every edge subset S of h.
struct FlowTable {
  Multigraph h;
  Rational q;
  std::vector<Real> values;
};

bool is_integer_q(const Rational& q) { return denominator(q) == 1 && q >= 2; }

FlowTable make_flow_table(const Multigraph& h, const Rational& q, std::size_t cap) {
  if (h.edge_count() > cap) {
    throw CapExceeded("bundle expansion needs 2^" + std::to_string(h.edge_count()) + " flow counts; edge cap is " +
                      std::to_string(cap));
  }
  FlowTable t{h, q, {}};
  if (is_integer_q(q)) {
    auto exact = flow_values_all_subsets<BigInt>(h, numerator(q));
    t.values.reserve(exact.size());
    for (const auto& v : exact) t.values.push_back(to_real(v));
  } else {
    auto exact = flow_values_all_subsets<Rational>(h, q);
    t.values.reserve(exact.size());
    for (const auto& v : exact) t.values.push_back(to_real(v));
  }
  return t;
}

// Evaluates the truncated expectation over h. fixed[e] >= 0 pins edge e to
// that multiplicity (0 or 1); otherwise the edge is Poisson(lambda[e]).
TruncatedExpectation evaluate(const FlowTable& t, const std::vector<Real>& lambda, const std::vector<int>& fixed,
                              std::uint32_t M) {
  const auto m = t.h.edge_count();
  const Real q = to_real(t.q);
  std::vector<BundleSums> sums(m);
  std::uint64_t fixed_total = 0;
  for (std::size_t e = 0; e < m; ++e) {
    if (fixed[e] == 0) {
      sums[e] = {1, 0, 0, 0};
    } else if (fixed[e] == 1) {
      sums[e] = {0, 1, 0, 0};
      ++fixed_total;
    } else if (fixed[e] > 1) {
      throw InternalError("fixed multiplicity above 1");
    } else {
      sums[e] = bundle_sums(lambda[e], q, M);
    }
  }
  // Products over edges for each subset S: weight, |weight|, and the
  // widened |weight| with tail allowances.
  std::vector<Real> w{1}, wabs{1}, wwide{1};
  for (std::size_t e = 0; e < m; ++e) {
    const auto& s = sums[e];
    const auto size = w.size();
    w.resize(2 * size);
    wabs.resize(2 * size);
    wwide.resize(2 * size);
    for (std::size_t mask = 0; mask < size; ++mask) {
      w[mask + size] = w[mask] * s.b;
      wabs[mask + size] = wabs[mask] * std::fabs(s.b);
      wwide[mask + size] = wwide[mask] * (std::fabs(s.b) + s.db);
      w[mask] *= s.a;
      wabs[mask] *= std::fabs(s.a);
      wwide[mask] *= std::fabs(s.a) + s.da;
    }
  }
  Real value = 0;
  Real factored_tail = 0;
  Real magnitude = 0;
  for (std::size_t mask = 0; mask < t.values.size(); ++mask) {
    const Real c = t.values[mask];
    if (c == 0) continue;
    value += w[mask] * c;
    factored_tail += std::fabs(c) * (wwide[mask] - wabs[mask]);
    magnitude += std::fabs(c) * wwide[mask];
  }
  TruncatedExpectation out;
  out.value = value;
  out.truncation_level = M;
  out.tail_bound = factored_tail * (1 + 64 * kEps);
  if (is_integer_q(t.q)) {
    // C(G_m; q) ≤ (q-1)^{Σm}: tail ≤ Σ_e B_e Π_{f≠e} A_f with
    // A_f = E[(q-1)^{Po(λ_f)}] and B_e its part beyond M.
    Real growth = ipow(q - 1, fixed_total);
    Real product_tail = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (fixed[e] >= 0) continue;
      Real term = poisson_tail(lambda[e], lambda[e] * (q - 1), M);
      for (std::size_t f = 0; f < m; ++f) {
        if (f != e && fixed[f] < 0) term *= std::exp(lambda[f] * (q - 2));
      }
      product_tail += term;
    }
    product_tail *= growth * (1 + 64 * kEps);
    out.tail_bound = std::min(out.tail_bound, product_tail);
  }
  out.rounding = rounding_allowance(magnitude, Real(4 * m + 2 * M + 64));
  return out;
}

// Smallest M in [0, max_level] with good(M), assuming good is monotone.
template <class Good>
std::optional<std::uint32_t> smallest_level(std::uint32_t max_level, Good&& good) {
  if (!good(max_level)) return std::nullopt;
  std::uint32_t lo = 0;
  std::uint32_t hi = max_level;
  if (good(lo)) return lo;
  // good(hi) holds, good(lo) fails.
  std::uint32_t step = 1;
  while (lo + step < hi) {
    if (good(lo + step)) {
      hi = lo + step;
      break;
    }
    lo += step;
    step *= 2;
  }
  while (hi - lo > 1) {
    std::uint32_t mid = lo + (hi - lo) / 2;
    if (good(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

struct Interval {
  Real lo;
  Real hi;
};

// Certified distance from num/den to any ratio of points within the error
// intervals; infinite when the denominator interval reaches 0.
Real ratio_bound(const TruncatedExpectation& num, const TruncatedExpectation& den) {
  const Real en = num.tail_bound + num.rounding;
  const Real ed = den.tail_bound + den.rounding;
  Interval n{num.value - en, num.value + en};
  Interval d{den.value - ed, den.value + ed};
  if (d.lo <= 0) return std::numeric_limits<Real>::infinity();
  const Real r = num.value / den.value;
  Real worst = 0;
  for (Real a : {n.lo, n.hi}) {
    for (Real b : {d.lo, d.hi}) worst = std::max(worst, std::fabs(a / b - r));
  }
  return worst * (1 + 64 * kEps) + rounding_allowance(r, 8);
}

struct PairSeries {
  FlowTable table;  // over G^{x,y}; the extra edge is last
  std::vector<Real> lambda;
  std::vector<int> den_fixed;
  std::vector<int> num_fixed;

  PairSeries(const Multigraph& g, const std::vector<Real>& lam, const Rational& q, Vertex x, Vertex y,
             std::size_t cap)
      : table(make_flow_table(add_pair_edge(g, x, y), q, cap)), lambda(lam) {
    lambda.push_back(0);
    den_fixed.assign(lambda.size(), -1);
    num_fixed.assign(lambda.size(), -1);
    den_fixed.back() = 0;
    num_fixed.back() = 1;
  }
  TruncatedExpectation den(std::uint32_t M) const { return evaluate(table, lambda, den_fixed, M); }
  TruncatedExpectation num(std::uint32_t M) const { return evaluate(table, lambda, num_fixed, M); }
};

struct RatioAtLevel {
  Real value = 0;
  Real bound = 0;
  std::uint32_t level = 0;
  bool certified = false;
};

RatioAtLevel adaptive_ratio(const PairSeries& series, const TruncationOptions& options) {
  auto at = [&](std::uint32_t M) {
    auto n = series.num(M);
    auto d = series.den(M);
    return RatioAtLevel{n.value / d.value, ratio_bound(n, d), M, true};
  };
  auto level = smallest_level(options.max_level, [&](std::uint32_t M) { return at(M).bound <= options.target; });
  if (!level) {
    auto best = at(options.max_level);
    best.certified = false;
    return best;
  }
  return at(*level);
}

void check_pair_vertices(const Multigraph& g, Vertex x, Vertex y) {
  if (x >= g.vertex_count() || y >= g.vertex_count()) throw InvalidArgument("vertex out of range");
  if (x == y) throw InvalidArgument("two-point function needs x != y");
}

void check_q(unsigned q) {
  if (q < 2) throw InvalidArgument("flow counts need integer q >= 2");
}

Real flow_count_real(const Multigraph& h, unsigned q, FlowCountCache& cache) {
  if (q == 2) return Real(even_flow_indicator(h));
  return to_real(count_flows_dc(h, cache));
}

// Runs fn(i, cache) for i in [0, n) over contiguous worker blocks; output
// order is the index order whatever the worker count.
template <class Record, class Fn>
std::vector<Record> run_samples(std::uint64_t n, unsigned workers, unsigned q, Fn&& fn) {
  std::vector<Record> out(n);
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(n, 1))));
  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    FlowCountCache cache(q);
    for (std::uint64_t i = begin; i < end; ++i) out[i] = fn(i, cache);
  };
  if (workers == 1) {
    block(0, n);
    return out;
  }
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::uint64_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t begin = std::min(n, w * chunk);
    std::uint64_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, begin, end] {
      try {
        block(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct FlowSample {
  bool accepted = false;
  Real x = 0;
  Real y = 0;
};

}  // namespace

void validate_intensity(const Multigraph& g, const std::vector<Real>& lambda) {
  if (lambda.size() != g.edge_count()) throw InvalidArgument("intensity vector length mismatch");
  for (auto l : lambda) {
    if (!(l >= 0) || !std::isfinite(l)) throw InvalidArgument("intensities must be finite and non-negative");
    if (l > 500) throw InvalidArgument("intensity above 500 is outside the supported range");
  }
}

MultiplicityVector sample_multiplicities(const Multigraph& g, const std::vector<Real>& lambda, SplitMix64& rng) {
  validate_intensity(g, lambda);
  std::vector<std::uint32_t> counts(g.edge_count());
  for (std::size_t e = 0; e < counts.size(); ++e) {
    counts[e] = poisson_inversion(static_cast<double>(lambda[e]), rng.uniform());
  }
  return MultiplicityVector(std::move(counts));
}

MultiplicityVector sample_multiplicities(const Multigraph& g, const std::vector<Real>& lambda, std::uint64_t seed,
                                         std::uint64_t sample) {
  validate_intensity(g, lambda);
  std::vector<std::uint32_t> counts(g.edge_count());
  for (std::size_t e = 0; e < counts.size(); ++e) {
    auto rng = SplitMix64::substream(seed, sample, e);
    counts[e] = poisson_inversion(static_cast<double>(lambda[e]), rng.uniform());
  }
  return MultiplicityVector(std::move(counts));
}

McEstimate expect_flow_mc(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, const McOptions& options) {
  check_q(q);
  validate_intensity(g, lambda);
  if (options.samples == 0) throw InvalidArgument("need at least one sample");
  auto records = run_samples<FlowSample>(options.samples, options.workers, q,
                                         [&](std::uint64_t i, FlowCountCache& cache) {
    auto m = sample_multiplicities(g, lambda, options.seed, i);
    FlowSample s;
    if (m.total() > options.edge_cap) return s;
    s.accepted = true;
    s.x = flow_count_real(expand(g, m), q, cache);
    return s;
  });
  McEstimate est;
  est.seed = options.seed;
  Real sum = 0;
  for (std::uint64_t i = 0; i < records.size(); ++i) {
    if (!records[i].accepted) {
      est.rejected.push_back(i);
      continue;
    }
    sum += records[i].x;
    ++est.samples;
  }
  if (est.samples == 0) throw CapExceeded("every sample exceeded the edge cap");
  est.mean = sum / Real(est.samples);
  Real ss = 0;
  for (const auto& r : records) {
    if (r.accepted) ss += (r.x - est.mean) * (r.x - est.mean);
  }
  est.std_error = est.samples > 1 ? std::sqrt(ss / Real(est.samples - 1) / Real(est.samples)) : Real(0);
  return est;
}

TruncatedExpectation exact_expect_flow(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                       std::uint32_t M, const TruncationOptions& options) {
  check_q(q);
  validate_intensity(g, lambda);
  auto table = make_flow_table(g, Rational(q), options.subset_edge_cap);
  return evaluate(table, lambda, std::vector<int>(g.edge_count(), -1), M);
}

TruncatedExpectation exact_expect_flow(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                       const TruncationOptions& options) {
  check_q(q);
  validate_intensity(g, lambda);
  auto table = make_flow_table(g, Rational(q), options.subset_edge_cap);
  std::vector<int> fixed(g.edge_count(), -1);
  auto level = smallest_level(options.max_level, [&](std::uint32_t M) {
    return evaluate(table, lambda, fixed, M).tail_bound <= options.target;
  });
  auto out = evaluate(table, lambda, fixed, level.value_or(options.max_level));
  out.certified = level.has_value();
  return out;
}

TruncatedExpectation exact_expect_flow_pair(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                            Vertex x, Vertex y, std::uint32_t M, const TruncationOptions& options) {
  check_q(q);
  validate_intensity(g, lambda);
  check_pair_vertices(g, x, y);
  PairSeries series(g, lambda, Rational(q), x, y, options.subset_edge_cap);
  return series.num(M);
}

FlowRatio sigma_flow_ratio_exact(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, Vertex x,
                                 Vertex y, const TruncationOptions& options) {
  check_q(q);
  detail::check_loopless(g);
  validate_intensity(g, lambda);
  check_pair_vertices(g, x, y);
  PairSeries series(g, lambda, Rational(q), x, y, options.subset_edge_cap);
  auto r = adaptive_ratio(series, options);
  FlowRatio out;
  out.value = r.value;
  out.error = r.bound;
  out.mode = FlowRatioMode::exact;
  out.truncation_level = r.level;
  out.certified = r.certified;
  return out;
}

FlowRatio sigma_flow_ratio_mc(const Multigraph& g, const std::vector<Real>& lambda, unsigned q, Vertex x, Vertex y,
                              const McOptions& options) {
  check_q(q);
  detail::check_loopless(g);
  validate_intensity(g, lambda);
  check_pair_vertices(g, x, y);
  if (options.samples == 0) throw InvalidArgument("need at least one sample");
  auto records = run_samples<FlowSample>(options.samples, options.workers, q,
                                         [&](std::uint64_t i, FlowCountCache& cache) {
    auto m = sample_multiplicities(g, lambda, options.seed, i);
    FlowSample s;
    if (m.total() > options.edge_cap) return s;
    s.accepted = true;
    auto gm = expand(g, m);
    s.x = flow_count_real(gm, q, cache);
    s.y = flow_count_real(add_pair_edge(gm, x, y), q, cache);
    return s;
  });
  FlowRatio out;
  out.mode = FlowRatioMode::mc;
  out.seed = options.seed;
  Real sx = 0;
  Real sy = 0;
  for (std::uint64_t i = 0; i < records.size(); ++i) {
    if (!records[i].accepted) {
      out.rejected.push_back(i);
      continue;
    }
    sx += records[i].x;
    sy += records[i].y;
    ++out.samples;
  }
  if (out.samples == 0) throw CapExceeded("every sample exceeded the edge cap");
  const Real n = Real(out.samples);
  const Real mx = sx / n;
  const Real my = sy / n;
  if (mx <= 0) throw PreconditionFailed("denominator sample mean is zero");
  Real vxx = 0, vyy = 0, vxy = 0;
  for (const auto& r : records) {
    if (!r.accepted) continue;
    vxx += (r.x - mx) * (r.x - mx);
    vyy += (r.y - my) * (r.y - my);
    vxy += (r.x - mx) * (r.y - my);
  }
  out.value = my / mx;
  if (out.samples > 1) {
    vxx /= n - 1;
    vyy /= n - 1;
    vxy /= n - 1;
    // Delta method for a ratio of means.
    Real var = (vyy - 2 * out.value * vxy + out.value * out.value * vxx) / (n * mx * mx);
    out.error = std::sqrt(std::max<Real>(var, 0));
  }
  return out;
}

IdentityCheck verify_partition_identity(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                        std::uint32_t M, const TruncationOptions& options) {
  auto e = exact_expect_flow(g, lambda, q, M, options);
  Real total = 0;
  for (auto l : lambda) total += l;
  Real lhs = std::exp(-total) * potts_partition(g, PottsParams::from_lambda(q, lambda));
  Real scale = ipow(Real(q), g.vertex_count());
  Real rhs = scale * e.value;
  Real bound = scale * (e.tail_bound + e.rounding) + rounding_allowance(lhs, Real(4 * (g.edge_count() + 16)));
  return make_check(lhs, rhs, bound, true, M);
}

IdentityCheck verify_partition_identity(const Multigraph& g, const std::vector<Real>& lambda, unsigned q,
                                        const TruncationOptions& options) {
  auto e = exact_expect_flow(g, lambda, q, options);
  auto check = verify_partition_identity(g, lambda, q, e.truncation_level, options);
  if (!e.certified) check.status = CheckStatus::uncertified;
  return check;
}

Real bernoulli_density(Real lambda) {
  if (!(lambda >= 0)) throw InvalidArgument("intensity must be non-negative");
  return -std::expm1(-2 * lambda) / 2;
}

Real even_ratio_sigma(const Multigraph& g, const std::vector<Real>& lambda, Vertex x, Vertex y) {
  validate_intensity(g, lambda);
  check_pair_vertices(g, x, y);
  std::vector<Real> p(lambda.size());
  for (std::size_t e = 0; e < p.size(); ++e) p[e] = bernoulli_density(lambda[e]);
  // With the extra edge present, G^{x,y}_P is even iff the parity subgraph
  // has sources exactly {x, y}.
  auto dist = source_distribution<Real>(g, p);
  const std::uint64_t pair = (std::uint64_t{1} << x) | (std::uint64_t{1} << y);
  auto it = dist.find(pair);
  return (it == dist.end() ? Real(0) : it->second) / dist.at(0);
}

IdentityCheck verify_flowconn_tutte(const Multigraph& g, Real p, Real q, Vertex x, Vertex y,
                                    const TruncationOptions& options) {
  if (!(q > 0) || !std::isfinite(q)) throw InvalidArgument("q must be positive");
  if (!(p >= 0 && p < 1)) throw InvalidArgument("p must lie in [0, 1)");
  check_pair_vertices(g, x, y);
  Real lhs = (q - 1) * rc_prob<Real>(g, uniform_edge_values<Real>(g, p), q, connection_event(x, y));
  const Real lambda = -std::log1p(-p) / q;
  // (-1)^{|E|} T(G; 0, 1-q) = (-1)^{|V|-1} C(G; q) as polynomials in q and
  // |V| is shared by G_P and G_P^{x,y}, so the signed Tutte ratio is the
  // flow-polynomial ratio.
  PairSeries series(g, std::vector<Real>(g.edge_count(), lambda), rational_from_real(q), x, y,
                    options.subset_edge_cap);
  auto r = adaptive_ratio(series, options);
  Real bound = r.bound + rounding_allowance(lhs, Real(4 * g.edge_count() + 64));
  return make_check(lhs, r.value, bound, r.certified, r.level);
}

IdentityCheck verify_compflow(const Multigraph& g, Real p, unsigned q, const TruncationOptions& options) {
  check_q(q);
  if (!(p >= 0 && p < 1)) throw InvalidArgument("p must lie in [0, 1)");
  Real lhs = rc_q_moment<Real>(g, p, Real(q));
  const Real lambda = -std::log1p(-p) / q;
  auto e = exact_expect_flow(g, std::vector<Real>(g.edge_count(), lambda), q, options);
  Real factor = std::pow(1 - p, Real(g.edge_count()) * (Real(q) - 2) / q) * ipow(Real(q), g.vertex_count());
  Real rhs = factor * e.value;
  Real bound = factor * (e.tail_bound + e.rounding) + rounding_allowance(lhs, Real(4 * g.edge_count() + 64));
  return make_check(lhs, rhs, bound, e.certified, e.truncation_level);
}

IdentityCheck verify_curiosity(const Multigraph& g, Real p) {
  if (!(p >= 0 && p < 1)) throw InvalidArgument("p must lie in [0, 1)");
  Real lhs = rc_q_moment<Real>(g, p, 2);
  const Real lambda = -std::log1p(-p) / 2;
  std::vector<Real> parity(g.edge_count(), bernoulli_density(lambda));
  Real rhs = ipow(Real(2), g.vertex_count()) * source_distribution<Real>(g, parity).at(0);
  Real bound = rounding_allowance(std::max(lhs, rhs), Real(8 * g.edge_count() + 64));
  return make_check(lhs, rhs, bound);
}

Rational verify_even_open_identity(const Multigraph& g, const Rational& p, const EnumerationLimits& limits) {
  if (p < 0 || p > 1) throw InvalidArgument("p must lie in [0, 1]");
  Rational lhs = rc_q_moment<Rational>(g, p, 2, limits);
  auto dist = source_distribution<Rational>(g, uniform_edge_values<Rational>(g, p / 2));
  Rational rhs = ipow(Rational(2), g.vertex_count()) * dist.at(0);
  Rational d = lhs - rhs;
  return d < 0 ? Rational(-d) : d;
}

}  // namespace flowpotts
