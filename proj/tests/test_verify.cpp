#include <doctest.h>

#include "flowpotts/verify.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

using namespace flowpotts;

TEST_CASE("sigma_by_route agrees across routes on the triangle") {
  auto tri = builtin_graph("triangle");
  auto params = PottsParams::uniform(tri, 2, 0.5L);
  Real spin = sigma_by_route(tri, params, 0, 1, SigmaRoute::spin).value;
  for (auto route : {SigmaRoute::flow_exact, SigmaRoute::even, SigmaRoute::source}) {
    auto r = sigma_by_route(tri, params, 0, 1, route);
    CHECK(std::fabs(r.value - spin) <= std::max<Real>(r.error, 1e-12));
  }
  auto exact = sigma_by_route(tri, params, 0, 1, SigmaRoute::flow_exact);
  CHECK(exact.error_kind == "bound");
  CHECK(exact.certified);
  RunLimits limits;
  limits.mc.samples = 2000;
  limits.mc.seed = 9;
  auto mc = sigma_by_route(tri, params, 0, 1, SigmaRoute::flow_mc, limits);
  CHECK(mc.error_kind == "std_error");
  CHECK(mc.samples == 2000);
  CHECK(std::fabs(mc.value - spin) <= 6 * mc.error);
  CHECK_THROWS_AS(sigma_by_route(tri, PottsParams::uniform(tri, 3, 0.5L), 0, 1, SigmaRoute::even), InvalidArgument);
  CHECK(parse_sigma_route("flow-mc") == SigmaRoute::flow_mc);
  CHECK_THROWS_AS(parse_sigma_route("nope"), InvalidArgument);
}

TEST_CASE("decay_table on a path") {
  auto path = builtin_graph("path:5");
  auto table = decay_table(path, PottsParams::uniform(path, 2, 0.5L), SigmaRoute::spin);
  REQUIRE(table.rows.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(table.rows[k].distance == k + 1);
    CHECK(std::fabs(table.rows[k].sigma - std::pow(std::tanh(0.5L), Real(k + 1))) <= 1e-12);
  }
  CHECK(table.monotone);
  auto flow = decay_table(path, PottsParams::uniform(path, 2, 0.5L), SigmaRoute::flow_exact);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::fabs(flow.rows[k].sigma - table.rows[k].sigma) <= flow.rows[k].error + 1e-15);
  }
}

TEST_CASE("run_verification") {
  CHECK(run_verification("all", {}).entries.empty());
  CHECK_THROWS_AS(run_verification("nope", {}), InvalidArgument);
  auto catalogue = parse_catalogue(default_catalogue_text());
  auto start = std::chrono::steady_clock::now();
  auto report = run_verification("all", catalogue);
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("entries " << report.entries.size() << " in " << secs << " s");
  for (const auto& e : report.entries) {
    if (e.status == CheckStatus::fail) {
      FAIL_CHECK(e.suite << " " << e.identity << " " << e.instance << " lhs=" << double(e.lhs)
                         << " rhs=" << double(e.rhs) << " bound=" << double(e.bound));
    }
  }
  CHECK(!report.any_fail());
  CHECK(report.count(CheckStatus::pass) > 100);
  for (const auto& suite : verification_suites()) {
    auto part = run_verification(suite, {catalogue.front()});
    for (const auto& e : part.entries) CHECK(e.suite == suite);
  }
}
