#include "flowpotts/catalogue.hpp"

#include "flowpotts/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "catalogue_data.hpp"

namespace flowpotts {

Multigraph random_multigraph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool allow_loops) {
  if (n == 0) throw InvalidArgument("random graph needs n > 0");
  if (n == 1 && !allow_loops && m > 0) throw InvalidArgument("one vertex without loops admits no edges");
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  std::vector<Edge> edges;
  while (edges.size() < m) {
    Edge e{pick(rng), pick(rng)};
    if (e.is_loop() && !allow_loops) continue;
    edges.push_back(e);
  }
  return Multigraph(n, std::move(edges));
}

Multigraph random_connected_multigraph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool allow_loops) {
  if (n == 0) throw InvalidArgument("random graph needs n > 0");
  if (m + 1 < n) throw InvalidArgument("connected graph needs m >= n - 1");
  if (n == 1 && !allow_loops && m > 0) throw InvalidArgument("one vertex without loops admits no edges");
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    edges.push_back({order[parent(rng)], order[i]});
  }
  auto extra = random_multigraph(rng, n, m - (n - 1), allow_loops);
  edges.insert(edges.end(), extra.edges().begin(), extra.edges().end());
  std::shuffle(edges.begin(), edges.end(), rng);
  std::bernoulli_distribution coin(0.5);
  for (auto& e : edges) {
    if (coin(rng)) std::swap(e.tail, e.head);
  }
  return Multigraph(n, std::move(edges));
}

std::vector<Multigraph> generated_catalogue(std::size_t count, std::uint64_t seed, std::size_t max_vertices,
                                            std::size_t max_edges) {
  std::vector<Multigraph> out;
  std::set<std::pair<std::size_t, std::vector<std::pair<Vertex, Vertex>>>> seen;
  auto add = [&](const Multigraph& g) {
    std::vector<std::pair<Vertex, Vertex>> key;
    for (const auto& e : g.edges()) key.emplace_back(e.tail, e.head);
    std::sort(key.begin(), key.end());
    if (seen.insert({g.vertex_count(), key}).second) out.push_back(g);
  };
  for (const auto* name : {"k2", "digon", "triangle", "k4", "path:3", "path:4", "cycle:4", "cycle:5", "ladder:2",
                           "ladder:3"}) {
    auto g = builtin_graph(name);
    if (g.vertex_count() <= max_vertices && g.edge_count() <= max_edges) add(g);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> vertices(1, max_vertices);
  std::bernoulli_distribution loops(0.3);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * count) throw InternalError("catalogue generator cannot find enough distinct graphs");
    auto n = vertices(rng);
    if (n - 1 > max_edges) continue;
    std::uniform_int_distribution<std::size_t> edges(std::max<std::size_t>(n - 1, 1), max_edges);
    auto m = edges(rng);
    bool allow_loops = loops(rng) || n == 1;
    add(random_connected_multigraph(rng, n, m, allow_loops));
  }
  return out;
}

// --- instance catalogue ---------------------------------------------------

namespace {

Vertex parse_vertex(const std::string& text, const std::string& where) {
  unsigned long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw InvalidArgument("bad vertex '" + text + "' in " + where);
  return static_cast<Vertex>(v);
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw InvalidArgument("bad number");
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad number '" + text + "' in " + where);
  }
}

}  // namespace

std::vector<CatalogueInstance> parse_catalogue(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CatalogueInstance> out;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto where = "catalogue line " + std::to_string(line_no);
    std::istringstream tokens(line);
    std::string head;
    if (!(tokens >> head) || head[0] == '#') continue;
    if (head == "format") {
      std::string kind;
      int version = 0;
      if (!(tokens >> kind >> version) || kind != "flowpotts-catalogue" || version != 1) {
        throw InvalidArgument("unsupported catalogue format at " + where);
      }
      header = true;
      continue;
    }
    if (!header) throw InvalidArgument("catalogue is missing its 'format flowpotts-catalogue 1' header");
    if (head != "instance") throw InvalidArgument("unknown record '" + head + "' at " + where);
    CatalogueInstance inst;
    std::map<std::string, std::string> fields;
    std::string token;
    while (tokens >> token) {
      auto eq = token.find('=');
      if (eq == std::string::npos) throw InvalidArgument("expected key=value at " + where);
      fields[token.substr(0, eq)] = token.substr(eq + 1);
    }
    for (const auto& [key, value] : fields) {
      if (key == "name") {
        inst.name = value;
      } else if (key == "graph") {
        inst.graph = value;
      } else if (key == "lambda") {
        inst.lambda = parse_double(value, where);
      } else if (key == "x") {
        inst.x = parse_vertex(value, where);
      } else if (key == "y") {
        inst.y = parse_vertex(value, where);
      } else if (key == "z") {
        inst.z = parse_vertex(value, where);
      } else if (key == "p") {
        inst.p = parse_double(value, where);
      } else if (key == "W") {
        std::istringstream list(value);
        std::string item;
        while (std::getline(list, item, ',')) inst.separator.push_back(parse_vertex(item, where));
      } else {
        throw InvalidArgument("unknown key '" + key + "' at " + where);
      }
    }
    if (inst.graph.empty()) throw InvalidArgument("instance without graph at " + where);
    auto g = builtin_graph(inst.graph);
    if (inst.x >= g.vertex_count() || inst.y >= g.vertex_count() || (inst.z && *inst.z >= g.vertex_count())) {
      throw InvalidArgument("instance vertex out of range at " + where);
    }
    if (inst.name.empty()) inst.name = inst.graph;
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<CatalogueInstance> load_catalogue_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open catalogue '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_catalogue(buffer.str());
}

const std::string& default_catalogue_text() {
  static const std::string text(kDefaultCatalogue);
  return text;
}

}  // namespace flowpotts
