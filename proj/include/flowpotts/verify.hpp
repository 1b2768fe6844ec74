#pragma once

// Catalogue-driven verification suites, σ by route, and decay tables.

#include "flowpotts/catalogue.hpp"
#include "flowpotts/check.hpp"
#include "flowpotts/currents.hpp"
#include "flowpotts/poisson_flow.hpp"
#include "flowpotts/polynomials.hpp"
#include "flowpotts/potts.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flowpotts {

struct RunLimits {
  PolynomialLimits polynomial;
  EnumerationLimits enumeration;
  CurrentLimits currents;
  TruncationOptions truncation;
  McOptions mc;
};

enum class SigmaRoute { spin, flow_exact, flow_mc, even, source };

SigmaRoute parse_sigma_route(const std::string& name);
const char* to_string(SigmaRoute route);

struct SigmaRecord {
  Real value = 0;
  Real error = 0;  // 0 for exact enumeration routes
  std::string error_kind;  // "none", "bound" or "std_error"
  SigmaRoute route = SigmaRoute::spin;
  std::uint32_t truncation_level = 0;
  bool certified = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejected = 0;
};

// σ(x,y) by one of five independent routes. The even and source routes need
// q = 2.
SigmaRecord sigma_by_route(const Multigraph& g, const PottsParams& params, Vertex x, Vertex y, SigmaRoute route,
                           const RunLimits& limits = {});

struct ReportEntry {
  std::string suite;
  std::string identity;
  std::string instance;
  Real lhs = 0;
  Real rhs = 0;
  Real bound = 0;
  CheckStatus status = CheckStatus::pass;
};

struct VerificationReport {
  std::vector<ReportEntry> entries;

  std::size_t count(CheckStatus s) const;
  bool any_fail() const { return count(CheckStatus::fail) > 0; }
};

// Suites: polys, theorem1, theorem2, switching, simon, or all of them.
const std::vector<std::string>& verification_suites();
VerificationReport run_verification(const std::string& suite, const std::vector<CatalogueInstance>& catalogue,
                                    const RunLimits& limits = {}, std::uint64_t seed = 1);

struct DecayRow {
  Vertex vertex = 0;
  std::size_t distance = 0;
  Real sigma = 0;
  Real error = 0;
};

struct DecayTable {
  std::vector<DecayRow> rows;  // sorted by distance, then vertex
  bool monotone = true;        // every σ at distance k+1 ≤ every σ at distance k
};

// σ(0, v) for every other vertex v reachable from 0.
DecayTable decay_table(const Multigraph& g, const PottsParams& params, SigmaRoute route,
                       const RunLimits& limits = {});

}  // namespace flowpotts
