#include <doctest.h>

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using flowpotts::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args, const std::vector<std::string>& env = {}) {
  std::ostringstream out, err;
  int code = run(args, env, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("poly examples") {
  CHECK(call({"poly", "--graph", "cycle:3", "--flowpoly"}).out ==
        "{\"graph\":\"cycle:3\",\"which\":\"flowpoly\",\"coefficients\":[-1,1],\"polynomial\":\"-1 + q\"}\n");
  CHECK(call({"poly", "--graph", "k2", "--whitney", "--u", "1", "--v", "1"}).out.find("\"value\":2}") !=
        std::string::npos);
  CHECK(call({"poly", "--graph", "k4", "--tutte", "--u", "1", "--v", "1"}).out.find("\"value\":16}") !=
        std::string::npos);
  CHECK(call({"poly", "--graph", "k4", "--flow", "--q", "3", "--format", "csv"}).out ==
        "graph,which,q,value\nk4,flow,3,0\n");
}

TEST_CASE("sigma and decay") {
  auto r = call({"sigma", "--graph", "k2", "--q", "2", "--lambda", "0.5", "--x", "0", "--y", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"value\":0.46211715726000") != std::string::npos);
  auto zero = call({"sigma", "--graph", "triangle", "--q", "3", "--lambda", "0", "--x", "0", "--y", "1",
                    "--route", "flow-exact"});
  CHECK(zero.out.find("\"value\":0.0") != std::string::npos);
  auto beta = call({"sigma", "--graph", "k2", "--q", "2", "--beta", "0.25", "--couplings", "2", "--x", "0", "--y",
                    "1"});
  CHECK(beta.out == r.out);
  auto d = call({"decay", "--graph", "path:2", "--q", "2", "--lambda", "0.5", "--format", "csv"});
  CHECK(d.out.rfind("vertex,distance,sigma,error\n1,1,0.4621171572600", 0) == 0);
}

TEST_CASE("identical seeds give identical bytes, whatever the worker count") {
  std::vector<std::string> args{"sigma", "--graph", "triangle", "--q", "2", "--lambda", "0.5", "--x", "0",
                                "--y", "1", "--route", "flow-mc", "--samples", "3000", "--seed", "17"};
  auto a = call(args);
  auto b = call(args);
  args.insert(args.end(), {"--workers", "4"});
  auto c = call(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  args[16] = "18";
  CHECK(call(args).out != a.out);
  auto v1 = call({"verify", "--suite", "polys"});
  auto v2 = call({"verify", "--suite", "polys"});
  CHECK(v1.out == v2.out);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"poly", "--graph", "k2"}).code == 2);
  CHECK(call({"poly", "--graph", "nope:3", "--flowpoly"}).code == 2);
  CHECK(call({"sigma", "--graph", "k2", "--q", "2", "--x", "0", "--y", "1"}).code == 2);
  CHECK(call({"sigma", "--graph", "k2", "--q", "2", "--lambda", "1", "--beta", "1", "--x", "0", "--y", "1"}).code ==
        2);
  CHECK(call({"sigma", "--graph", "k2", "--q", "3", "--lambda", "1", "--x", "0", "--y", "1", "--route", "even"})
            .code == 2);
  CHECK(call({"sigma", "--graph", "k2", "--format", "xml", "--q", "2", "--lambda", "1", "--x", "0", "--y", "1"})
            .code == 2);
  CHECK(call({"sigma", "--graph", "ladder:6", "--q", "5", "--lambda", "1", "--x", "0", "--y", "1"}).code == 3);
  CHECK(call({"poly", "--graph", "k4", "--whitney", "--u", "1", "--v", "1", "--cap-subset-edges", "4"}).code == 3);
  CHECK(call({"verify", "--suite", "nope"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("verify: empty catalogue, built-in catalogue") {
  const std::string path = "test_cli_empty_catalogue.txt";
  std::ofstream(path) << "format flowpotts-catalogue 1\n";
  auto empty = call({"verify", "--catalogue", path});
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());
  std::remove(path.c_str());
  auto sw = call({"verify", "--suite", "switching"});
  CHECK(sw.code == 0);
  CHECK(sw.out.find("\"status\":\"fail\"") == std::string::npos);
}

TEST_CASE("config file and environment") {
  const std::string path = "test_cli_config.txt";
  std::ofstream(path) << "# defaults\ngraph = k2\nq=2\nlambda=0.5\nx=0\ny=1\nformat=csv\n";
  auto base = call({"sigma", "--config", path});
  CHECK(base.code == 0);
  CHECK(base.out.find("k2,2,0,1,spin,0.4621171572600") != std::string::npos);
  // Environment beats the file, flags beat both.
  auto env = call({"sigma", "--config", path}, {"FLOWPOTTS_LAMBDA=0", "FLOWPOTTS_FORMAT=json"});
  CHECK(env.out.find("\"value\":0.0") != std::string::npos);
  auto flag = call({"sigma", "--config", path, "--lambda", "0.5"}, {"FLOWPOTTS_LAMBDA=0", "FLOWPOTTS_FORMAT=json"});
  CHECK(flag.out.find("\"value\":0.4621171572600") != std::string::npos);
  auto via_env = call({"sigma"}, {"FLOWPOTTS_CONFIG=" + path});
  CHECK(via_env.out == base.out);
  std::ofstream(path) << "graph k2\n";
  CHECK(call({"sigma", "--config", path}).code == 2);
  std::ofstream(path) << "colour=blue\n";
  CHECK(call({"sigma", "--config", path}).code == 2);
  std::remove(path.c_str());
  CHECK(call({"sigma", "--config", "/nonexistent/flowpotts.cfg"}).code == 2);
}
