#pragma once

#include "flowpotts/graph.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace flowpotts {

// Uniform random multigraph with n vertices and m edges.
Multigraph random_multigraph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool allow_loops);

// Random connected multigraph: a random spanning tree plus m - (n-1) random
// edges, with random orientations. Needs m >= n - 1.
Multigraph random_connected_multigraph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool allow_loops);

// Deterministic catalogue of connected multigraphs: the built-ins that fit,
// then seeded random ones, without exact duplicates.
std::vector<Multigraph> generated_catalogue(std::size_t count, std::uint64_t seed, std::size_t max_vertices,
                                            std::size_t max_edges);

// One named test instance of the verification catalogue.
struct CatalogueInstance {
  std::string name;
  std::string graph;  // built-in name
  double lambda = 0.5;
  Vertex x = 0;
  Vertex y = 1;
  std::optional<Vertex> z;
  std::vector<Vertex> separator;  // W for Simon checks
  std::optional<double> p;        // random-cluster density
};

// Parses the versioned catalogue text. Lines: "# comment", a required
// "format flowpotts-catalogue 1" header, then
// "instance name=... graph=... lambda=... x=.. y=.. [z=..] [W=a,b] [p=..]".
std::vector<CatalogueInstance> parse_catalogue(const std::string& text);
std::vector<CatalogueInstance> load_catalogue_file(const std::string& path);

// The catalogue shipped in data/catalogue.txt, embedded at build time.
const std::string& default_catalogue_text();

}  // namespace flowpotts
