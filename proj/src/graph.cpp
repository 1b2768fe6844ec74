#include "flowpotts/graph.hpp"

#include "flowpotts/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace flowpotts {

// --- Multigraph -----------------------------------------------------------

Multigraph::Multigraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.tail >= vertex_count_ || e.head >= vertex_count_) {
      throw InvalidArgument("edge endpoint out of range [0, " + std::to_string(vertex_count_) + ")");
    }
  }
}

bool Multigraph::has_loops() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_loop(); });
}

std::vector<std::size_t> Multigraph::degrees() const {
  std::vector<std::size_t> deg(vertex_count_, 0);
  for (const auto& e : edges_) {
    ++deg[e.tail];
    ++deg[e.head];
  }
  return deg;
}

std::uint64_t MultiplicityVector::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

// --- SourceSet ------------------------------------------------------------

SourceSet::SourceSet(std::initializer_list<Vertex> vs) : SourceSet(std::vector<Vertex>(vs)) {}

SourceSet::SourceSet(std::vector<Vertex> vs) : vertices_(std::move(vs)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

SourceSet SourceSet::from_mask(std::uint64_t mask) {
  std::vector<Vertex> vs;
  for (Vertex v = 0; mask != 0; ++v, mask >>= 1U) {
    if (mask & 1U) vs.push_back(v);
  }
  return SourceSet(std::move(vs));
}

std::uint64_t SourceSet::mask() const {
  std::uint64_t m = 0;
  for (auto v : vertices_) {
    if (v >= 64) throw InvalidArgument("source set mask needs vertices < 64");
    m |= std::uint64_t{1} << v;
  }
  return m;
}

bool SourceSet::contains(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

SourceSet SourceSet::symmetric_difference(const SourceSet& other) const {
  std::vector<Vertex> out;
  std::set_symmetric_difference(vertices_.begin(), vertices_.end(), other.vertices_.begin(),
                                other.vertices_.end(), std::back_inserter(out));
  return SourceSet(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const SourceSet& s) {
  os << '{';
  for (std::size_t i = 0; i < s.vertices().size(); ++i) {
    if (i) os << ',';
    os << s.vertices()[i];
  }
  return os << '}';
}

// --- DisjointSets ---------------------------------------------------------

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), classes_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t v) {
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --classes_;
  return true;
}

// --- structural queries ---------------------------------------------------

std::size_t component_count(const Multigraph& g, const EdgeSubset& active) {
  if (active.size() != g.edge_count()) throw InvalidArgument("edge subset size mismatch");
  DisjointSets dsu(g.vertex_count());
  for (auto i = active.find_first(); i != EdgeSubset::npos; i = active.find_next(i)) {
    dsu.unite(g.edge(i).tail, g.edge(i).head);
  }
  return dsu.classes();
}

std::size_t component_count(const Multigraph& g, std::uint64_t active_mask) {
  DisjointSets dsu(g.vertex_count());
  const auto edges = g.edges();
  for (std::size_t i = 0; active_mask != 0; ++i, active_mask >>= 1U) {
    if (active_mask & 1U) dsu.unite(edges[i].tail, edges[i].head);
  }
  return dsu.classes();
}

RankCorank rank_corank(const Multigraph& g, const EdgeSubset& active) {
  auto k = component_count(g, active);
  auto n = g.vertex_count();
  return {n - k, active.count() + k - n};
}

static void check_length(const Multigraph& g, const MultiplicityVector& m) {
  if (m.size() != g.edge_count()) {
    throw InvalidArgument("multiplicity vector has length " + std::to_string(m.size()) + ", graph has " +
                          std::to_string(g.edge_count()) + " edges");
  }
}

Multigraph expand(const Multigraph& g, const MultiplicityVector& m) {
  check_length(g, m);
  std::vector<Edge> out;
  out.reserve(m.total());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    out.insert(out.end(), m[i], g.edge(i));
  }
  return Multigraph(g.vertex_count(), std::move(out));
}

Multigraph add_pair_edge(const Multigraph& g, Vertex x, Vertex y) {
  if (x >= g.vertex_count() || y >= g.vertex_count()) throw InvalidArgument("pair vertex out of range");
  if (x == y) throw InvalidArgument("pair edge needs x != y");
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  edges.push_back({x, y});
  return Multigraph(g.vertex_count(), std::move(edges));
}

Multigraph restrict_edges(const Multigraph& g, std::uint64_t edge_mask) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if ((edge_mask >> i) & 1U) edges.push_back(g.edge(i));
  }
  return Multigraph(g.vertex_count(), std::move(edges));
}

Multigraph reorient(const Multigraph& g, const std::vector<bool>& flip) {
  if (flip.size() != g.edge_count()) throw InvalidArgument("flip vector length mismatch");
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (flip[i]) std::swap(edges[i].tail, edges[i].head);
  }
  return Multigraph(g.vertex_count(), std::move(edges));
}

bool is_even(const Multigraph& g) {
  auto deg = g.degrees();
  return std::all_of(deg.begin(), deg.end(), [](std::size_t d) { return d % 2 == 0; });
}

SourceSet source_set(const Multigraph& g, const MultiplicityVector& m) {
  check_length(g, m);
  std::vector<std::uint8_t> parity(g.vertex_count(), 0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (m[i] % 2 == 0) continue;
    parity[g.edge(i).tail] ^= 1U;
    parity[g.edge(i).head] ^= 1U;
  }
  std::vector<Vertex> vs;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (parity[v]) vs.push_back(v);
  }
  return SourceSet(std::move(vs));
}

bool connected_in(const Multigraph& g, const MultiplicityVector& m, Vertex x, Vertex y) {
  check_length(g, m);
  if (x >= g.vertex_count() || y >= g.vertex_count()) throw InvalidArgument("vertex out of range");
  if (x == y) return true;
  DisjointSets dsu(g.vertex_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (m[i] > 0) dsu.unite(g.edge(i).tail, g.edge(i).head);
  }
  return dsu.find(x) == dsu.find(y);
}

static std::vector<std::vector<Vertex>> adjacency(const Multigraph& g) {
  std::vector<std::vector<Vertex>> adj(g.vertex_count());
  for (const auto& e : g.edges()) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  return adj;
}

std::vector<std::size_t> bfs_distances(const Multigraph& g, Vertex source) {
  if (source >= g.vertex_count()) throw InvalidArgument("source vertex out of range");
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  auto adj = adjacency(g);
  std::vector<std::size_t> dist(g.vertex_count(), kUnreached);
  std::queue<Vertex> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    auto v = frontier.front();
    frontier.pop();
    for (auto w : adj[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

bool separates(const Multigraph& g, const std::vector<Vertex>& W, Vertex x, Vertex z) {
  auto n = g.vertex_count();
  if (x >= n || z >= n) throw InvalidArgument("vertex out of range");
  std::vector<bool> blocked(n, false);
  for (auto w : W) {
    if (w >= n) throw InvalidArgument("separator vertex out of range");
    blocked[w] = true;
  }
  if (blocked[x] || blocked[z] || x == z) return false;
  auto adj = adjacency(g);
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{x};
  seen[x] = true;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (v == z) return false;
    for (auto w : adj[v]) {
      if (!seen[w] && !blocked[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return true;
}

// --- text format ----------------------------------------------------------

Multigraph parse_graph(std::istream& in) {
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n <= 0 || m < 0) throw InvalidArgument("graph header must be 'n m' with n > 0, m >= 0");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long t = -1;
    long long h = -1;
    if (!(in >> t >> h)) throw InvalidArgument("graph text ended after " + std::to_string(i) + " edges");
    if (t < 0 || h < 0 || t >= n || h >= n) throw InvalidArgument("edge " + std::to_string(i) + " endpoint out of range");
    edges.push_back({static_cast<Vertex>(t), static_cast<Vertex>(h)});
  }
  std::string trailing;
  if (in >> trailing) throw InvalidArgument("unexpected trailing content in graph text");
  return Multigraph(static_cast<std::size_t>(n), std::move(edges));
}

Multigraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

std::string format_graph(const Multigraph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.tail << ' ' << e.head << '\n';
  return out.str();
}

namespace {

std::size_t parse_size_suffix(const std::string& name, std::size_t colon) {
  std::size_t n = 0;
  const char* first = name.data() + colon + 1;
  const char* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc{} || ptr != last || first == last) throw InvalidArgument("bad size in graph name '" + name + "'");
  return n;
}

}  // namespace

Multigraph builtin_graph(const std::string& name) {
  if (name == "k2") return Multigraph(2, {{0, 1}});
  if (name == "digon") return Multigraph(2, {{0, 1}, {0, 1}});
  if (name == "triangle") return Multigraph(3, {{0, 1}, {1, 2}, {2, 0}});
  if (name == "k4") return Multigraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto colon = name.find(':');
  if (colon == std::string::npos) throw InvalidArgument("unknown graph name '" + name + "'");
  auto family = name.substr(0, colon);
  auto n = parse_size_suffix(name, colon);
  std::vector<Edge> edges;
  if (family == "path") {
    if (n < 1) throw InvalidArgument("path needs at least 1 vertex");
    for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    return Multigraph(n, std::move(edges));
  }
  if (family == "cycle") {
    if (n < 1) throw InvalidArgument("cycle needs at least 1 vertex");
    for (Vertex v = 0; v < n; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % n)});
    return Multigraph(n, std::move(edges));
  }
  if (family == "ladder") {
    // Rails 0..n-1 and n..2n-1, rung i joins i and n+i.
    if (n < 1) throw InvalidArgument("ladder needs at least 1 rung");
    auto top = [](std::size_t i) { return static_cast<Vertex>(i); };
    auto bottom = [n](std::size_t i) { return static_cast<Vertex>(n + i); };
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({top(i), top(i + 1)});
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({bottom(i), bottom(i + 1)});
    for (std::size_t i = 0; i < n; ++i) edges.push_back({top(i), bottom(i)});
    return Multigraph(2 * n, std::move(edges));
  }
  throw InvalidArgument("unknown graph family '" + family + "'");
}

bool is_builtin_graph_name(const std::string& name) {
  try {
    builtin_graph(name);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

Multigraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

}  // namespace flowpotts
