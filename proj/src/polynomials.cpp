#include "flowpotts/polynomials.hpp"

#include "flowpotts/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <utility>

namespace flowpotts {

// --- IntPolynomial --------------------------------------------------------

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
}

Rational IntPolynomial::operator()(const Rational& q) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * q + Rational(*it);
  return acc;
}

Real IntPolynomial::operator()(Real q) const {
  Real acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * q + to_real(*it);
  return acc;
}

std::string IntPolynomial::str(const std::string& variable) const {
  if (coefficients_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    const auto& c = coefficients_[i];
    if (c == 0) continue;
    BigInt magnitude = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      out << magnitude;
      continue;
    }
    if (magnitude != 1) out << magnitude << '*';
    out << variable;
    if (i > 1) out << '^' << i;
  }
  return out.str();
}

// --- Whitney / Tutte via subset enumeration -------------------------------

static void check_subset_cap(const Multigraph& g, const PolynomialLimits& limits) {
  if (g.edge_count() > limits.subset_edge_cap || g.edge_count() > 62) {
    throw CapExceeded("subset enumeration over " + std::to_string(g.edge_count()) + " edges exceeds cap of " +
                      std::to_string(limits.subset_edge_cap));
  }
}

RankCorankTally rank_corank_tally(const Multigraph& g, const PolynomialLimits& limits) {
  check_subset_cap(g, limits);
  const auto n = g.vertex_count();
  const auto m = g.edge_count();
  RankCorankTally tally(n, std::vector<std::uint64_t>(m + 1, 0));
  const std::uint64_t subsets = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    auto k = component_count(g, mask);
    auto size = static_cast<std::size_t>(std::popcount(mask));
    ++tally[n - k][size + k - n];
  }
  return tally;
}

Rational whitney_eval(const Multigraph& g, const Rational& u, const Rational& v, const PolynomialLimits& limits) {
  auto tally = rank_corank_tally(g, limits);
  Rational total = 0;
  for (std::size_t r = 0; r < tally.size(); ++r) {
    Rational ur = ipow(u, r);
    for (std::size_t c = 0; c < tally[r].size(); ++c) {
      if (tally[r][c] == 0) continue;
      total += Rational(tally[r][c]) * ur * ipow(v, c);
    }
  }
  return total;
}

Rational tutte_eval_whitney(const Multigraph& g, const Rational& u, const Rational& v, const PolynomialLimits& limits) {
  if (u == 1) throw InvalidArgument("Whitney route of the Tutte polynomial needs u != 1");
  // (u-1)^{|V|-1} W(1/(u-1), v-1), expanded termwise to stay exact at u = 0.
  auto tally = rank_corank_tally(g, limits);
  const Rational shift = u - 1;
  const auto n = static_cast<std::int64_t>(g.vertex_count());
  Rational total = 0;
  for (std::size_t r = 0; r < tally.size(); ++r) {
    Rational factor = ipow_signed(shift, n - 1 - static_cast<std::int64_t>(r));
    for (std::size_t c = 0; c < tally[r].size(); ++c) {
      if (tally[r][c] == 0) continue;
      total += Rational(tally[r][c]) * factor * ipow(Rational(v - 1), c);
    }
  }
  return total;
}

// --- deletion–contraction machinery ---------------------------------------

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

struct DcGraph {
  std::uint32_t n = 0;
  std::vector<Pair> edges;  // normalized first <= second
};

DcGraph from_multigraph(const Multigraph& g) {
  DcGraph out;
  out.n = static_cast<std::uint32_t>(g.vertex_count());
  for (const auto& e : g.edges()) out.edges.emplace_back(std::min(e.tail, e.head), std::max(e.tail, e.head));
  return out;
}

std::size_t strip_loops(DcGraph& g) {
  auto it = std::remove_if(g.edges.begin(), g.edges.end(), [](const Pair& p) { return p.first == p.second; });
  auto loops = static_cast<std::size_t>(g.edges.end() - it);
  g.edges.erase(it, g.edges.end());
  return loops;
}

// Drops isolated vertices and relabels by descending degree; sorts edges.
void canonicalize(DcGraph& g) {
  std::vector<std::uint32_t> deg(g.n, 0);
  for (const auto& [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return deg[a] > deg[b]; });
  std::vector<std::uint32_t> label(g.n, 0);
  std::uint32_t used = 0;
  for (auto v : order) {
    if (deg[v] > 0) label[v] = used++;
  }
  for (auto& [a, b] : g.edges) {
    a = label[a];
    b = label[b];
    if (a > b) std::swap(a, b);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.n = used;
}

std::string key_of(const DcGraph& g) {
  std::string key;
  key.reserve(4 + 4 * g.edges.size());
  key += std::to_string(g.n);
  key += ':';
  for (const auto& [a, b] : g.edges) {
    key += std::to_string(a);
    key += ',';
    key += std::to_string(b);
    key += ';';
  }
  return key;
}

bool is_bridge(const DcGraph& g, std::size_t index) {
  DisjointSets dsu(g.n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i != index) dsu.unite(g.edges[i].first, g.edges[i].second);
  }
  return dsu.find(g.edges[index].first) != dsu.find(g.edges[index].second);
}

DcGraph delete_edge(const DcGraph& g, std::size_t index) {
  DcGraph out{g.n, g.edges};
  out.edges.erase(out.edges.begin() + static_cast<std::ptrdiff_t>(index));
  return out;
}

// Merges the endpoints of edge `index`; other parallel copies become loops.
DcGraph contract_edge(const DcGraph& g, std::size_t index) {
  auto [keep, gone] = g.edges[index];
  DcGraph out;
  out.n = g.n - 1;
  auto relabel = [keep, gone](std::uint32_t v) {
    if (v == gone) v = keep;
    return v > gone ? v - 1 : v;
  };
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i == index) continue;
    auto a = relabel(g.edges[i].first);
    auto b = relabel(g.edges[i].second);
    out.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return out;
}

BigInt flows_dc(DcGraph g, FlowCountCache& cache) {
  const BigInt q_minus_1 = cache.q() - 1;
  auto loops = strip_loops(g);
  BigInt factor = ipow(q_minus_1, loops);
  if (g.edges.empty()) return factor;
  if (factor == 0) return 0;
  canonicalize(g);
  // A degree-1 vertex sits on a bridge.
  std::vector<std::uint32_t> deg(g.n, 0);
  for (const auto& [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  if (std::find(deg.begin(), deg.end(), 1U) != deg.end()) return 0;

  auto key = key_of(g);
  if (const auto* hit = cache.find(key)) return factor * *hit;

  // Branch on an edge of the largest parallel class so contraction makes loops.
  std::size_t pick = 0;
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < g.edges.size();) {
    std::size_t j = i;
    while (j < g.edges.size() && g.edges[j] == g.edges[i]) ++j;
    if (j - i > best_run) {
      best_run = j - i;
      pick = i;
    }
    i = j;
  }
  BigInt value;
  if (is_bridge(g, pick)) {
    value = 0;
  } else {
    value = flows_dc(contract_edge(g, pick), cache) - flows_dc(delete_edge(g, pick), cache);
  }
  cache.store(std::move(key), value);
  return factor * value;
}

Rational tutte_std_dc(DcGraph g, const Rational& u, const Rational& v, std::map<std::string, Rational>& memo) {
  auto loops = strip_loops(g);
  Rational factor = ipow(v, loops);
  if (g.edges.empty()) return factor;
  canonicalize(g);
  auto key = key_of(g);
  if (auto it = memo.find(key); it != memo.end()) return factor * it->second;
  Rational value;
  if (is_bridge(g, 0)) {
    value = u * tutte_std_dc(contract_edge(g, 0), u, v, memo);
  } else {
    value = tutte_std_dc(delete_edge(g, 0), u, v, memo) + tutte_std_dc(contract_edge(g, 0), u, v, memo);
  }
  memo.emplace(std::move(key), value);
  return factor * value;
}

}  // namespace

const BigInt* FlowCountCache::find(const std::string& key) const {
  auto it = memo_.find(key);
  return it == memo_.end() ? nullptr : &it->second;
}

void FlowCountCache::store(std::string key, BigInt value) { memo_.emplace(std::move(key), std::move(value)); }

BigInt count_flows_dc(const Multigraph& g, FlowCountCache& cache) {
  if (cache.q() < 2) throw InvalidArgument("flow counts need q >= 2");
  return flows_dc(from_multigraph(g), cache);
}

BigInt count_flows_dc(const Multigraph& g, unsigned q) {
  FlowCountCache cache(q);
  return count_flows_dc(g, cache);
}

Rational tutte_eval_dc(const Multigraph& g, const Rational& u, const Rational& v) {
  std::map<std::string, Rational> memo;
  Rational standard = tutte_std_dc(from_multigraph(g), u, v, memo);
  // Standard T carries (u-1)^{r(E)}; this normalization uses (u-1)^{|V|-1}.
  auto k = component_count(g, g.all_edges());
  return ipow(Rational(u - 1), k - 1) * standard;
}

Rational tutte_eval(const Multigraph& g, const Rational& u, const Rational& v, const PolynomialLimits& limits) {
  if (u != 1) return tutte_eval_whitney(g, u, v, limits);
  return tutte_eval_dc(g, u, v);
}

// --- brute-force flows ----------------------------------------------------

BigInt count_flows_enum(const Multigraph& g, unsigned q, const PolynomialLimits& limits) {
  if (q < 2) throw InvalidArgument("flow counts need q >= 2");
  const auto m = g.edge_count();
  {
    // q^|E| against the cap without overflow.
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (total > limits.flow_assignment_cap / q) {
        throw CapExceeded("flow enumeration q^|E| exceeds cap of " + std::to_string(limits.flow_assignment_cap));
      }
      total *= q;
    }
    if (total > limits.flow_assignment_cap) {
      throw CapExceeded("flow enumeration q^|E| exceeds cap of " + std::to_string(limits.flow_assignment_cap));
    }
  }
  const auto n = g.vertex_count();
  const auto edges = g.edges();
  // Net outflow per vertex modulo q; every edge starts at value 1.
  std::vector<unsigned> balance(n, 0);
  auto shift = [&](Vertex v, unsigned delta) { balance[v] = (balance[v] + delta) % q; };
  for (const auto& e : edges) {
    if (e.is_loop()) continue;
    shift(e.tail, 1);
    shift(e.head, q - 1);
  }
  auto unbalanced = static_cast<std::size_t>(std::count_if(balance.begin(), balance.end(), [](unsigned b) { return b != 0; }));
  std::vector<unsigned> value(m, 1);
  BigInt count = 0;
  std::uint64_t local = 0;
  while (true) {
    if (unbalanced == 0) ++local;
    // Odometer step over {1..q-1}^E.
    std::size_t i = 0;
    for (; i < m; ++i) {
      const auto& e = edges[i];
      unsigned next = value[i] == q - 1 ? 1 : value[i] + 1;
      unsigned delta = (next + q - value[i]) % q;
      value[i] = next;
      if (!e.is_loop() && delta != 0) {
        for (auto [v, d] : {std::pair{e.tail, delta}, std::pair{e.head, q - delta}}) {
          bool was = balance[v] != 0;
          shift(v, d);
          bool now = balance[v] != 0;
          if (was && !now) --unbalanced;
          if (!was && now) ++unbalanced;
        }
      }
      if (next != 1) break;
    }
    if (i == m) break;
  }
  count += local;
  return count;
}

// --- interpolation --------------------------------------------------------

IntPolynomial flow_polynomial(const Multigraph& g) {
  const std::size_t points = g.edge_count() + 1;
  std::vector<Rational> xs(points);
  std::vector<Rational> coef(points);
  for (std::size_t i = 0; i < points; ++i) {
    auto q = static_cast<unsigned>(i + 2);
    xs[i] = q;
    coef[i] = Rational(count_flows_dc(g, q));
  }
  // Newton divided differences in place.
  for (std::size_t level = 1; level < points; ++level) {
    for (std::size_t i = points - 1; i >= level; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level]);
    }
  }
  // Expand the Newton form into monomial coefficients.
  std::vector<Rational> mono(points, Rational(0));
  for (std::size_t k = points; k-- > 0;) {
    // mono = mono * (x - xs[k]) + coef[k]
    for (std::size_t j = points - 1; j > 0; --j) mono[j] = mono[j - 1] - xs[k] * mono[j];
    mono[0] = -xs[k] * mono[0] + coef[k];
  }
  std::vector<BigInt> ints;
  ints.reserve(points);
  for (const auto& c : mono) {
    if (denominator(c) != 1) throw InternalError("flow polynomial interpolation produced a non-integral coefficient");
    ints.push_back(numerator(c));
  }
  return IntPolynomial(std::move(ints));
}

int even_flow_indicator(const Multigraph& g) { return is_even(g) ? 1 : 0; }

// --- all-subset flow values -----------------------------------------------

template <class Scalar>
std::vector<Scalar> flow_values_all_subsets(const Multigraph& g, const Scalar& q) {
  const auto m = g.edge_count();
  if (m > 24) throw CapExceeded("all-subset flow table needs |E| <= 24");
  const auto n = g.vertex_count();
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<Scalar> table(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    auto k = component_count(g, static_cast<std::uint64_t>(mask));
    auto size = static_cast<std::size_t>(std::popcount(mask));
    Scalar term = ipow(q, size + k - n);
    table[mask] = (size % 2 == 0) ? term : Scalar(-term);
  }
  // Zeta transform: table[S] = Σ_{A⊆S} (-1)^{|A|} q^{c(A)}.
  for (std::size_t bit = 0; bit < m; ++bit) {
    const std::size_t b = std::size_t{1} << bit;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & b) table[mask] += table[mask ^ b];
    }
  }
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    if (std::popcount(mask) % 2 != 0) table[mask] = -table[mask];
  }
  return table;
}

template std::vector<BigInt> flow_values_all_subsets<BigInt>(const Multigraph&, const BigInt&);
template std::vector<Rational> flow_values_all_subsets<Rational>(const Multigraph&, const Rational&);
template std::vector<Real> flow_values_all_subsets<Real>(const Multigraph&, const Real&);

}  // namespace flowpotts
