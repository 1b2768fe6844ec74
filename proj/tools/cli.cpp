#include "cli.hpp"

#include "flowpotts/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace flowpotts::cli {
namespace {

using Json = nlohmann::ordered_json;
constexpr const char* kEnvPrefix = "FLOWPOTTS_";

struct Options {
  std::string graph;
  std::string graph_file;
  std::string q;
  std::string lambda;
  std::string beta;
  std::string couplings;
  std::optional<Vertex> x, y, z;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;
  double truncation_target = 1e-10;
  unsigned workers = 1;
  std::string format = "json";
  std::string config;

  std::size_t cap_subset_edges = 20;
  std::uint64_t cap_flow_assignments = 10'000'000;
  std::uint64_t cap_spin_configs = 10'000'000;
  std::uint64_t cap_rc_configs = 1'000'000;
  std::uint64_t cap_current_subsets = std::uint64_t{1} << 24;
  std::uint64_t cap_current_states = 10'000'000;
  std::uint32_t cap_truncation_level = 400;
  std::size_t cap_mc_edges = 64;

  // poly
  bool whitney = false, tutte = false, flow = false, flowpoly = false;
  std::string u, v;
  // sigma, decay
  std::string route = "spin";
  // verify
  std::string suite = "all";
  std::string catalogue;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat key=value lines become --key=value tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto key = trim(line.substr(0, eq));
    if (key == "config") throw UsageError(path + ":" + std::to_string(lineno) + ": nested config not allowed");
    tokens.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return tokens;
}

std::string env_name(const std::string& option) {
  std::string name = kEnvPrefix;
  for (char c : option) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

Real parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    Real v = std::stold(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad number for " + what + ": '" + text + "'");
}

std::vector<Real> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<Real> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item), what));
  if (out.empty()) throw UsageError("empty list for " + what);
  return out;
}

unsigned parse_q(const std::string& text) {
  if (text.empty()) throw UsageError("--q is required");
  if (!std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }) || text.size() > 6) {
    throw UsageError("--q must be a positive integer here, got '" + text + "'");
  }
  return static_cast<unsigned>(std::stoul(text));
}

Rational parse_point(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad rational for ") + flag + ": '" + text + "'");
  }
}

Multigraph resolve_graph(const Options& o) {
  if (o.graph.empty() == o.graph_file.empty()) throw UsageError("give exactly one of --graph, --graph-file");
  return o.graph.empty() ? load_graph_file(o.graph_file) : builtin_graph(o.graph);
}

std::string graph_label(const Options& o) { return o.graph.empty() ? o.graph_file : o.graph; }

PottsParams resolve_params(const Options& o, const Multigraph& g) {
  const unsigned q = parse_q(o.q);
  if (!o.lambda.empty() == !o.beta.empty()) throw UsageError("give exactly one of --lambda, --beta");
  if (!o.lambda.empty()) {
    if (!o.couplings.empty()) throw UsageError("--couplings goes with --beta, not --lambda");
    auto lambda = parse_real_list(o.lambda, "--lambda");
    if (lambda.size() == 1) lambda.assign(g.edge_count(), lambda[0]);
    return PottsParams::from_lambda(q, lambda);
  }
  PottsParams p;
  p.q = q;
  p.beta = parse_real(o.beta, "--beta");
  p.couplings = o.couplings.empty() ? std::vector<Real>(g.edge_count(), 1) : parse_real_list(o.couplings, "--couplings");
  return p;
}

RunLimits resolve_limits(const Options& o) {
  RunLimits l;
  l.polynomial.subset_edge_cap = o.cap_subset_edges;
  l.polynomial.flow_assignment_cap = o.cap_flow_assignments;
  l.enumeration.spin_config_cap = o.cap_spin_configs;
  l.enumeration.rc_config_cap = o.cap_rc_configs;
  l.currents.subset_cap = o.cap_current_subsets;
  l.currents.state_cap = o.cap_current_states;
  l.truncation.target = o.truncation_target;
  l.truncation.max_level = o.cap_truncation_level;
  l.truncation.subset_edge_cap = o.cap_subset_edges;
  l.mc.samples = o.samples;
  l.mc.seed = o.seed;
  l.mc.workers = o.workers;
  l.mc.edge_cap = o.cap_mc_edges;
  return l;
}

Vertex need(const std::optional<Vertex>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  return *v;
}

Json exact_json(const BigInt& i) {
  if (i >= std::numeric_limits<std::int64_t>::min() && i <= std::numeric_limits<std::int64_t>::max()) {
    return i.convert_to<std::int64_t>();
  }
  return to_string(i);
}

Json exact_json(const Rational& r) {
  if (denominator(r) == 1) return exact_json(BigInt(numerator(r)));
  return to_string(r);
}

Json real_json(Real v) { return static_cast<double>(v); }

// Rows of named cells; null cells are omitted from JSON and left empty in CSV.
struct Output {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

std::string cell_text(const Json& v, bool table) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& item : v) s += (s.empty() ? "" : " ") + cell_text(item, table);
    return s;
  }
  if (table && v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n ") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void emit(const Output& o, const std::string& format, std::ostream& out) {
  if (format == "json") {
    for (const auto& row : o.rows) {
      Json rec = Json::object();
      for (std::size_t i = 0; i < o.columns.size(); ++i) {
        if (!row[i].is_null()) rec[o.columns[i]] = row[i];
      }
      out << rec.dump() << '\n';
    }
    return;
  }
  if (format == "csv") {
    for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << o.columns[i];
    out << '\n';
    for (const auto& row : o.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i], false));
      out << '\n';
    }
    return;
  }
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width;
  for (const auto& c : o.columns) width.push_back(c.size());
  for (const auto& row : o.rows) {
    text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      text.back().push_back(cell_text(row[i], true));
      width[i] = std::max(width[i], text.back().back().size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += "  ";
      s += cells[i] + std::string(width[i] - cells[i].size(), ' ');
    }
    s.erase(s.find_last_not_of(' ') + 1);
    out << s << '\n';
  };
  line(o.columns);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : text) line(r);
}

int cmd_poly(const Options& o, std::ostream& out) {
  const int picked = int(o.whitney) + int(o.tutte) + int(o.flow) + int(o.flowpoly);
  if (picked != 1) throw UsageError("poly needs exactly one of --whitney, --tutte, --flow, --flowpoly");
  auto g = resolve_graph(o);
  auto limits = resolve_limits(o);
  Output res;
  if (o.flowpoly) {
    auto poly = flow_polynomial(g);
    Json coeffs = Json::array();
    for (const auto& c : poly.coefficients()) coeffs.push_back(exact_json(c));
    res.columns = {"graph", "which", "coefficients", "polynomial"};
    res.rows.push_back({graph_label(o), "flowpoly", coeffs, poly.str()});
  } else if (o.flow) {
    const unsigned q = parse_q(o.q);
    res.columns = {"graph", "which", "q", "value"};
    res.rows.push_back({graph_label(o), "flow", q, exact_json(count_flows_dc(g, q))});
  } else {
    auto u = parse_point(o.u, "--u");
    auto v = parse_point(o.v, "--v");
    Rational value = o.whitney ? whitney_eval(g, u, v, limits.polynomial) : tutte_eval(g, u, v, limits.polynomial);
    res.columns = {"graph", "which", "u", "v", "value"};
    res.rows.push_back({graph_label(o), o.whitney ? "whitney" : "tutte", exact_json(u), exact_json(v),
                        exact_json(value)});
  }
  emit(res, o.format, out);
  return exit_ok;
}

int cmd_sigma(const Options& o, std::ostream& out) {
  auto g = resolve_graph(o);
  auto params = resolve_params(o, g);
  auto route = parse_sigma_route(o.route);
  const Vertex x = need(o.x, "--x"), y = need(o.y, "--y");
  auto r = sigma_by_route(g, params, x, y, route, resolve_limits(o));
  Output res;
  res.columns = {"graph", "q", "x", "y", "route", "value", "tail_bound", "M", "certified",
                 "std_error", "samples", "seed", "rejected"};
  std::vector<Json> row{graph_label(o), params.q, x, y, to_string(route), real_json(r.value)};
  if (r.error_kind == "bound") {
    row.insert(row.end(), {real_json(r.error), r.truncation_level, r.certified, nullptr, nullptr, nullptr, nullptr});
  } else if (r.error_kind == "std_error") {
    row.insert(row.end(), {nullptr, nullptr, nullptr, real_json(r.error), r.samples, r.seed, r.rejected});
  } else {
    row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr});
  }
  res.rows.push_back(std::move(row));
  emit(res, o.format, out);
  return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  auto catalogue = o.catalogue.empty() ? parse_catalogue(default_catalogue_text()) : load_catalogue_file(o.catalogue);
  auto report = run_verification(o.suite, catalogue, resolve_limits(o), o.seed);
  Output res;
  res.columns = {"suite", "identity", "instance", "lhs", "rhs", "bound", "status"};
  for (const auto& e : report.entries) {
    res.rows.push_back({e.suite, e.identity, e.instance, real_json(e.lhs), real_json(e.rhs), real_json(e.bound),
                        to_string(e.status)});
  }
  emit(res, o.format, out);
  err << "verify: " << report.entries.size() << " entries, " << report.count(CheckStatus::pass) << " pass, "
      << report.count(CheckStatus::fail) << " fail, " << report.count(CheckStatus::uncertified) << " uncertified\n";
  return report.any_fail() ? exit_failed : exit_ok;
}

int cmd_decay(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = resolve_graph(o);
  auto params = resolve_params(o, g);
  auto route = parse_sigma_route(o.route);
  auto table = decay_table(g, params, route, resolve_limits(o));
  Output res;
  res.columns = {"vertex", "distance", "sigma", "error"};
  for (const auto& r : table.rows) res.rows.push_back({r.vertex, r.distance, real_json(r.sigma), real_json(r.error)});
  emit(res, o.format, out);
  err << "decay: " << table.rows.size() << " rows, monotone " << (table.monotone ? "yes" : "no") << '\n';
  return exit_ok;
}

void build_app(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", o.config, "flat key=value file; flags and env override it");
  app.add_option("--graph", o.graph, "built-in graph: k2, digon, triangle, k4, path:<n>, cycle:<n>, ladder:<n>, ...");
  app.add_option("--graph-file", o.graph_file, "graph file");
  app.add_option("--q", o.q, "number of Potts states");
  app.add_option("--lambda", o.lambda, "intensity, one value or one per edge (comma separated)");
  app.add_option("--beta", o.beta, "inverse temperature; lambda_e = beta J_e");
  app.add_option("--couplings", o.couplings, "J_e per edge, comma separated (default 1)");
  app.add_option("--x", o.x, "vertex x");
  app.add_option("--y", o.y, "vertex y");
  app.add_option("--z", o.z, "vertex z");
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--truncation-target", o.truncation_target, "target for certified truncation bounds")
      ->capture_default_str();
  app.add_option("--workers", o.workers, "worker threads; output does not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", o.format, "json (newline delimited), csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  app.add_option("--cap-subset-edges", o.cap_subset_edges, "max |E| for 2^|E| subset sums")->capture_default_str();
  app.add_option("--cap-flow-assignments", o.cap_flow_assignments, "max q^|E| for flow enumeration")
      ->capture_default_str();
  app.add_option("--cap-spin-configs", o.cap_spin_configs, "max q^|V| spin configurations")->capture_default_str();
  app.add_option("--cap-rc-configs", o.cap_rc_configs, "max 2^|E| random-cluster configurations")
      ->capture_default_str();
  app.add_option("--cap-current-subsets", o.cap_current_subsets, "max current subset enumeration")
      ->capture_default_str();
  app.add_option("--cap-current-states", o.cap_current_states, "max two-copy states")->capture_default_str();
  app.add_option("--cap-truncation-level", o.cap_truncation_level, "max per-edge truncation level M")
      ->capture_default_str();
  app.add_option("--cap-mc-edges", o.cap_mc_edges, "max edges of a sampled multigraph")->capture_default_str();

  app.add_flag("--whitney", o.whitney, "poly: Whitney rank-generating function at (u, v)");
  app.add_flag("--tutte", o.tutte, "poly: Tutte polynomial at (u, v)");
  app.add_flag("--flow", o.flow, "poly: number of nowhere-zero mod-q flows");
  app.add_flag("--flowpoly", o.flowpoly, "poly: flow polynomial coefficients, lowest degree first");
  app.add_option("--u", o.u, "poly: first argument (rational)");
  app.add_option("--v", o.v, "poly: second argument (rational)");
  app.add_option("--route", o.route, "sigma/decay: spin, flow-exact, flow-mc, even or source")->capture_default_str();
  app.add_option("--suite", o.suite, "verify: all, polys, theorem1, theorem2, switching or simon")
      ->capture_default_str();
  app.add_option("--catalogue", o.catalogue, "verify: catalogue file (default: built-in)");

  app.add_subcommand("poly", "evaluate graph polynomials exactly")->fallthrough();
  app.add_subcommand("sigma", "two-point correlation by route")->fallthrough();
  app.add_subcommand("verify", "run identity suites over the catalogue")->fallthrough();
  app.add_subcommand("decay", "correlation against graph distance from vertex 0")->fallthrough();
}

}  // namespace

int run(const std::vector<std::string>& args, const std::vector<std::string>& env, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Flow and random-current representations of the Potts model on small graphs", "flowpotts"};
  build_app(app, o);

  std::map<std::string, std::string> environment;
  for (const auto& e : env) {
    auto eq = e.find('=');
    if (eq != std::string::npos) environment[e.substr(0, eq)] = e.substr(eq + 1);
  }

  try {
    // Precedence: config file < environment < command line, by token order.
    std::string config_path;
    if (auto it = environment.find(env_name("config")); it != environment.end()) config_path = it->second;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    std::vector<std::string> tokens;
    if (!config_path.empty()) tokens = config_tokens(config_path);
    for (const CLI::Option* opt : app.get_options()) {
      const auto& name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "config") continue;
      if (auto it = environment.find(env_name(name)); it != environment.end()) {
        tokens.push_back("--" + name + "=" + it->second);
      }
    }
    // Subcommand first so that every option token reaches the root by fallthrough.
    auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return a == "poly" || a == "sigma" || a == "verify" || a == "decay";
    });
    std::vector<std::string> full;
    if (sub != args.end()) full.push_back(*sub);
    full.insert(full.end(), tokens.begin(), tokens.end());
    for (auto it = args.begin(); it != args.end(); ++it) {
      if (it != sub) full.push_back(*it);
    }
    std::reverse(full.begin(), full.end());
    app.parse(full);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "flowpotts: " << e.what() << '\n';
    return exit_usage;
  } catch (const UsageError& e) {
    err << "flowpotts: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto& name = sub->get_name();
    if (name == "poly") return cmd_poly(o, out);
    if (name == "sigma") return cmd_sigma(o, out);
    if (name == "verify") return cmd_verify(o, out, err);
    return cmd_decay(o, out, err);
  } catch (const UsageError& e) {
    err << "flowpotts: " << e.what() << '\n';
    return exit_usage;
  } catch (const InvalidArgument& e) {
    err << "flowpotts: " << e.what() << '\n';
    return exit_usage;
  } catch (const PreconditionFailed& e) {
    err << "flowpotts: " << e.what() << '\n';
    return exit_usage;
  } catch (const CapExceeded& e) {
    err << "flowpotts: cap exceeded: " << e.what() << '\n';
    return exit_cap;
  }
}

}  // namespace flowpotts::cli
