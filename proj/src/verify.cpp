#include "flowpotts/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace flowpotts {

SigmaRoute parse_sigma_route(const std::string& name) {
  if (name == "spin") return SigmaRoute::spin;
  if (name == "flow-exact") return SigmaRoute::flow_exact;
  if (name == "flow-mc") return SigmaRoute::flow_mc;
  if (name == "even") return SigmaRoute::even;
  if (name == "source") return SigmaRoute::source;
  throw InvalidArgument("unknown route '" + name + "' (spin, flow-exact, flow-mc, even, source)");
}

const char* to_string(SigmaRoute route) {
  switch (route) {
    case SigmaRoute::spin: return "spin";
    case SigmaRoute::flow_exact: return "flow-exact";
    case SigmaRoute::flow_mc: return "flow-mc";
    case SigmaRoute::even: return "even";
    case SigmaRoute::source: return "source";
  }
  return "?";
}

SigmaRecord sigma_by_route(const Multigraph& g, const PottsParams& params, Vertex x, Vertex y, SigmaRoute route,
                           const RunLimits& limits) {
  params.validate(g);
  SigmaRecord r;
  r.route = route;
  r.error_kind = "none";
  auto lambda = params.lambda();
  switch (route) {
    case SigmaRoute::spin:
      r.value = potts_sigma(g, params, x, y, limits.enumeration);
      break;
    case SigmaRoute::flow_exact: {
      auto f = sigma_flow_ratio_exact(g, lambda, params.q, x, y, limits.truncation);
      r.value = f.value;
      r.error = f.error;
      r.error_kind = "bound";
      r.truncation_level = f.truncation_level;
      r.certified = f.certified;
      break;
    }
    case SigmaRoute::flow_mc: {
      auto f = sigma_flow_ratio_mc(g, lambda, params.q, x, y, limits.mc);
      r.value = f.value;
      r.error = f.error;
      r.error_kind = "std_error";
      r.samples = f.samples;
      r.seed = f.seed;
      r.rejected = f.rejected.size();
      break;
    }
    case SigmaRoute::even:
      if (params.q != 2) throw InvalidArgument("the even route needs q = 2");
      detail::check_loopless(g);
      r.value = even_ratio_sigma(g, lambda, x, y);
      break;
    case SigmaRoute::source:
      if (params.q != 2) throw InvalidArgument("the source route needs q = 2");
      detail::check_loopless(g);
      r.value = sigma_source_ratio(g, lambda, x, y, limits.currents);
      break;
  }
  return r;
}

std::size_t VerificationReport::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [s](const ReportEntry& e) { return e.status == s; }));
}

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> suites{"polys", "theorem1", "theorem2", "switching", "simon"};
  return suites;
}

namespace {

Multigraph instance_graph(const CatalogueInstance& inst) {
  return is_builtin_graph_name(inst.graph) ? builtin_graph(inst.graph) : load_graph_file(inst.graph);
}

std::string fmt(Real v) {
  std::ostringstream os;
  os.precision(4);
  os << static_cast<double>(v);
  return os.str();
}

class Recorder {
 public:
  Recorder(VerificationReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

  void exact(const std::string& identity, const std::string& instance, const Rational& lhs, const Rational& rhs) {
    push(identity, instance, to_real(lhs), to_real(rhs), 0, lhs == rhs ? CheckStatus::pass : CheckStatus::fail);
  }
  void check(const std::string& identity, const std::string& instance, const IdentityCheck& c) {
    push(identity, instance, c.lhs, c.rhs, c.bound, c.status);
  }
  void within(const std::string& identity, const std::string& instance, Real lhs, Real rhs, Real tol) {
    check(identity, instance, make_check(lhs, rhs, tol));
  }
  void push(const std::string& identity, const std::string& instance, Real lhs, Real rhs, Real bound,
            CheckStatus status) {
    report_.entries.push_back({suite_, identity, instance, lhs, rhs, bound, status});
  }
  // Runs body; an exceeded cap becomes an uncertified entry.
  void guarded(const std::string& identity, const std::string& instance, const std::function<void()>& body) {
    try {
      body();
    } catch (const CapExceeded&) {
      push(identity, instance, 0, 0, 0, CheckStatus::uncertified);
    }
  }

 private:
  VerificationReport& report_;
  std::string suite_;
};

void suite_polys(Recorder& rec, const CatalogueInstance& inst, const RunLimits& limits, std::uint64_t seed) {
  auto g = instance_graph(inst);
  for (unsigned q = 2; q <= 5; ++q) {
    const std::string where = inst.name + " q=" + std::to_string(q);
    rec.guarded("flow-triple", where, [&] {
      BigInt enumerated = count_flows_enum(g, q, limits.polynomial);
      BigInt dc = count_flows_dc(g, q);
      Rational whitney = whitney_eval(g, -1, -Rational(q), limits.polynomial);
      if (g.edge_count() % 2 != 0) whitney = -whitney;
      bool ok = Rational(enumerated) == whitney && enumerated == dc;
      rec.push("flow-triple", where, to_real(enumerated), to_real(whitney), 0,
               ok ? CheckStatus::pass : CheckStatus::fail);
    });
  }
  rec.guarded("orientation", inst.name, [&] {
    std::mt19937_64 rng(seed ^ std::hash<std::string>{}(inst.name));
    std::bernoulli_distribution coin(0.5);
    BigInt base = count_flows_dc(g, 3);
    BigInt worst = base;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<bool> flip(g.edge_count());
      for (std::size_t i = 0; i < flip.size(); ++i) flip[i] = coin(rng);
      BigInt c = count_flows_dc(reorient(g, flip), 3);
      if (c != base) worst = c;
    }
    rec.exact("orientation", inst.name + " q=3", Rational(base), Rational(worst));
  });
  rec.guarded("tutte-routes", inst.name, [&] {
    for (const auto& [u, v] : std::vector<std::pair<Rational, Rational>>{{2, 3}, {-1, Rational(1, 2)}}) {
      rec.exact("tutte-routes", inst.name + " u=" + to_string(u) + " v=" + to_string(v),
                tutte_eval_whitney(g, u, v, limits.polynomial), tutte_eval_dc(g, u, v));
    }
  });
  rec.guarded("rc-whitney", inst.name, [&] {
    for (const auto& [p, q] : std::vector<std::pair<Rational, Rational>>{{Rational(1, 3), 2}, {Rational(2, 5), Rational(3, 2)}}) {
      auto diff = verify_rc_whitney<Rational>(g, p, q, limits.enumeration);
      rec.exact("rc-whitney", inst.name + " p=" + to_string(p) + " q=" + to_string(q), diff, 0);
    }
  });
}

void suite_theorem1(Recorder& rec, const CatalogueInstance& inst, const RunLimits& limits) {
  auto g = instance_graph(inst);
  if (g.has_loops()) return;
  const Real lambda = inst.lambda;
  for (unsigned q : {2U, 3U}) {
    auto params = PottsParams::uniform(g, q, lambda);
    const std::string where = inst.name + " q=" + std::to_string(q);
    rec.guarded("corrconn", where, [&] {
      rec.within("corrconn", where, verify_corrconn(g, params, limits.enumeration), 0, 1e-12);
      auto p = rational_from_real(edge_prob(params)[0]);
      rec.exact("corrconn-exact", where,
                verify_corrconn_exact(g, q, uniform_edge_values<Rational>(g, p), limits.enumeration), 0);
    });
    rec.guarded("flow-ratio", where, [&] {
      auto f = sigma_flow_ratio_exact(g, params.lambda(), q, inst.x, inst.y, limits.truncation);
      Real spin = potts_sigma(g, params, inst.x, inst.y, limits.enumeration);
      rec.check("flow-ratio", where, make_check(f.value, spin, f.error, f.certified, f.truncation_level));
    });
    rec.guarded("partition-flow", where, [&] {
      rec.check("partition-flow", where, verify_partition_identity(g, params.lambda(), q, limits.truncation));
    });
    if (q == 2) {
      rec.guarded("even-ratio", where, [&] {
        Real spin = potts_sigma(g, params, inst.x, inst.y, limits.enumeration);
        rec.within("even-ratio", where, even_ratio_sigma(g, params.lambda(), inst.x, inst.y), spin, 1e-12);
        rec.within("source-ratio", where,
                   sigma_source_ratio(g, params.lambda(), inst.x, inst.y, limits.currents), spin, 1e-12);
      });
    }
  }
}

void suite_theorem2(Recorder& rec, const CatalogueInstance& inst, const RunLimits& limits) {
  auto g = instance_graph(inst);
  const Real p = inst.p ? Real(*inst.p) : -std::expm1(-2 * Real(inst.lambda));
  const std::string base = inst.name + " p=" + fmt(p);
  for (Real q : {1.5L, 2.0L, 3.0L}) {
    const std::string where = base + " q=" + fmt(q);
    rec.guarded("flowconn-tutte", where, [&] {
      rec.check("flowconn-tutte", where, verify_flowconn_tutte(g, p, q, inst.x, inst.y, limits.truncation));
    });
  }
  for (unsigned q : {2U, 3U}) {
    const std::string where = base + " q=" + std::to_string(q);
    rec.guarded("compflow", where, [&] { rec.check("compflow", where, verify_compflow(g, p, q, limits.truncation)); });
  }
  rec.guarded("curiosity", base, [&] { rec.check("curiosity", base, verify_curiosity(g, p)); });
  for (const auto& pr : {Rational(1, 4), Rational(1, 2), Rational(2, 3)}) {
    const std::string where = inst.name + " p=" + to_string(pr);
    rec.guarded("even-open", where, [&] {
      rec.exact("even-open", where, verify_even_open_identity(g, pr, limits.enumeration), 0);
    });
  }
}

void suite_switching(Recorder& rec, const CatalogueInstance& inst, const RunLimits& limits) {
  auto g = instance_graph(inst);
  const auto edges = g.edge_count();
  const Vertex x = inst.x;
  const Vertex y = inst.y;
  rec.guarded("switching-fixed", inst.name, [&] {
    // Every m with Σm ≤ 6 where x ↔ y, every source set A.
    constexpr std::uint32_t kTotal = 6;
    std::uint64_t sum_lhs = 0, sum_rhs = 0;
    bool ok = true;
    std::vector<std::uint32_t> m(edges, 0);
    std::function<void(std::size_t, std::uint32_t)> walk = [&](std::size_t e, std::uint32_t left) {
      if (e == edges) {
        MultiplicityVector mv(m);
        if (!connected_in(g, mv, x, y)) return;
        for (std::uint64_t A = 0; A < (std::uint64_t{1} << g.vertex_count()); ++A) {
          auto c = switching_check_fixed(g, mv, x, y, SourceSet::from_mask(A), limits.currents);
          sum_lhs += c.lhs;
          sum_rhs += c.rhs;
          ok = ok && c.lhs == c.rhs;
        }
        return;
      }
      for (std::uint32_t k = 0; k <= left; ++k) {
        m[e] = k;
        walk(e + 1, left - k);
      }
      m[e] = 0;
    };
    walk(0, kTotal);
    rec.push("switching-fixed", inst.name + " sum(m)<=6", Real(sum_lhs), Real(sum_rhs), 0,
             ok ? CheckStatus::pass : CheckStatus::fail);
  });
  std::uint32_t M = 1;
  while (M < 8 && std::pow(double(M) + 2, double(edges)) <= 2e5) ++M;
  for (const auto& A : {SourceSet{}, SourceSet{x, y}}) {
    std::ostringstream where;
    where << inst.name << " A=" << A << " M=" << M;
    rec.guarded("switching-poisson", where.str(), [&] {
      rec.check("switching-poisson", where.str(),
                switching_check_poisson(g, uniform_edge_values<Real>(g, inst.lambda), x, y, A, M));
    });
  }
  if (g.has_loops()) return;
  auto lambda = uniform_edge_values<Real>(g, inst.lambda);
  const std::uint32_t appls_level = 8;
  rec.guarded("sigma-products-i", inst.name, [&] {
    rec.check("sigma-products-i", inst.name, appls_identity_i(g, lambda, x, y, appls_level, limits.currents));
  });
  if (inst.z) {
    rec.guarded("sigma-products-ii", inst.name, [&] {
      rec.check("sigma-products-ii", inst.name,
                appls_identity_ii(g, lambda, x, y, *inst.z, appls_level, limits.currents));
    });
  }
}

void suite_simon(Recorder& rec, const CatalogueInstance& inst, const RunLimits& limits) {
  if (inst.separator.empty()) return;
  auto g = instance_graph(inst);
  if (g.has_loops()) return;
  rec.guarded("simon", inst.name, [&] {
    auto s = simon_check(g, uniform_edge_values<Real>(g, inst.lambda), inst.x, inst.y, inst.separator);
    rec.push("simon", inst.name, s.lhs, s.rhs, 1e-12, s.holds() ? CheckStatus::pass : CheckStatus::fail);
    if (inst.graph.rfind("path:", 0) == 0 && inst.separator.size() == 1) {
      rec.within("simon-path-equality", inst.name, s.lhs, s.rhs, 1e-12);
    }
  });
  const Real p = inst.p ? Real(*inst.p) : -std::expm1(-2 * Real(inst.lambda));
  rec.guarded("rc-simon", inst.name, [&] {
    auto scan = rc_simon_scan(g, p, {1.25L, 1.5L, 1.75L}, inst.x, inst.y, inst.separator, limits.enumeration);
    for (const auto& pt : scan.points) {
      // Only q = 1 and q = 2 are theorems; interior points are reported, not judged.
      CheckStatus status = CheckStatus::uncertified;
      if (pt.q == 1 || pt.q == 2) status = pt.margin >= -1e-12 ? CheckStatus::pass : CheckStatus::fail;
      rec.push("rc-simon", inst.name + " q=" + fmt(pt.q), pt.lhs, pt.rhs, 1e-12, status);
    }
  });
}

}  // namespace

VerificationReport run_verification(const std::string& suite, const std::vector<CatalogueInstance>& catalogue,
                                    const RunLimits& limits, std::uint64_t seed) {
  const auto& known = verification_suites();
  if (suite != "all" && std::find(known.begin(), known.end(), suite) == known.end()) {
    throw InvalidArgument("unknown suite '" + suite + "'");
  }
  VerificationReport report;
  for (const auto& name : known) {
    if (suite != "all" && suite != name) continue;
    Recorder rec(report, name);
    for (const auto& inst : catalogue) {
      if (name == "polys") suite_polys(rec, inst, limits, seed);
      if (name == "theorem1") suite_theorem1(rec, inst, limits);
      if (name == "theorem2") suite_theorem2(rec, inst, limits);
      if (name == "switching") suite_switching(rec, inst, limits);
      if (name == "simon") suite_simon(rec, inst, limits);
    }
  }
  return report;
}

DecayTable decay_table(const Multigraph& g, const PottsParams& params, SigmaRoute route, const RunLimits& limits) {
  params.validate(g);
  if (g.vertex_count() < 2) throw InvalidArgument("decay table needs at least two vertices");
  auto dist = bfs_distances(g, 0);
  DecayTable table;
  std::vector<std::vector<Real>> spin;
  if (route == SigmaRoute::spin) spin = potts_sigma_matrix(g, params, limits.enumeration);
  for (Vertex v = 1; v < g.vertex_count(); ++v) {
    if (dist[v] == SIZE_MAX) continue;
    DecayRow row;
    row.vertex = v;
    row.distance = dist[v];
    if (route == SigmaRoute::spin) {
      row.sigma = spin[0][v];
    } else {
      auto r = sigma_by_route(g, params, 0, v, route, limits);
      row.sigma = r.value;
      row.error = r.error;
    }
    table.rows.push_back(row);
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const DecayRow& a, const DecayRow& b) { return a.distance < b.distance; });
  std::map<std::size_t, std::pair<Real, Real>> range;  // distance -> (min, max)
  for (const auto& r : table.rows) {
    auto [it, fresh] = range.try_emplace(r.distance, r.sigma, r.sigma);
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.sigma);
      it->second.second = std::max(it->second.second, r.sigma);
    }
  }
  for (auto it = range.begin(); it != range.end(); ++it) {
    auto next = std::next(it);
    if (next != range.end() && next->second.second > it->second.first + 1e-12) table.monotone = false;
  }
  return table;
}

}  // namespace flowpotts
