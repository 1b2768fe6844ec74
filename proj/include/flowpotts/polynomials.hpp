#pragma once

#include "flowpotts/graph.hpp"
#include "flowpotts/scalar.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flowpotts {

struct PolynomialLimits {
  // Max |E| for 2^|E| subset enumeration.
  std::size_t subset_edge_cap = 20;
  // Max q^|E| for brute-force flow enumeration.
  std::uint64_t flow_assignment_cap = 10'000'000;
};

// Univariate integer polynomial; coefficient i multiplies q^i.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coefficients);

  const std::vector<BigInt>& coefficients() const { return coefficients_; }
  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }

  Rational operator()(const Rational& q) const;
  Real operator()(Real q) const;

  // "-1 + q", "0", "3 - 3*q + q^2".
  std::string str(const std::string& variable = "q") const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<BigInt> coefficients_;
};

// Number of spanning subsets by (rank, corank): tally[r][c].
using RankCorankTally = std::vector<std::vector<std::uint64_t>>;
RankCorankTally rank_corank_tally(const Multigraph& g, const PolynomialLimits& limits = {});

// W_G(u, v) = Σ_{E'⊆E} u^{r(E')} v^{c(E')}, exact, 0^0 = 1.
Rational whitney_eval(const Multigraph& g, const Rational& u, const Rational& v,
                      const PolynomialLimits& limits = {});

// T_G(u, v) = (u-1)^{|V|-1} W_G(1/(u-1), v-1). Uses the Whitney route when
// u != 1 and deletion–contraction otherwise.
Rational tutte_eval(const Multigraph& g, const Rational& u, const Rational& v,
                    const PolynomialLimits& limits = {});
// Whitney-substitution route; u must differ from 1.
Rational tutte_eval_whitney(const Multigraph& g, const Rational& u, const Rational& v,
                            const PolynomialLimits& limits = {});
// Deletion–contraction route; defined for every (u, v).
Rational tutte_eval_dc(const Multigraph& g, const Rational& u, const Rational& v);

// Nowhere-zero mod-q flows by direct enumeration over {1..q-1}^E.
BigInt count_flows_enum(const Multigraph& g, unsigned q, const PolynomialLimits& limits = {});

// Memo for deletion–contraction flow counts, keyed by canonical graph form.
// Per-worker; results never depend on hits.
class FlowCountCache {
 public:
  explicit FlowCountCache(unsigned q) : q_(q) {}
  unsigned q() const { return q_; }
  const BigInt* find(const std::string& key) const;
  void store(std::string key, BigInt value);
  std::size_t size() const { return memo_.size(); }

 private:
  unsigned q_;
  std::map<std::string, BigInt> memo_;
};

// Nowhere-zero mod-q flows by deletion–contraction.
BigInt count_flows_dc(const Multigraph& g, unsigned q);
BigInt count_flows_dc(const Multigraph& g, FlowCountCache& cache);

// C_G(q) as an integer polynomial, interpolated from q = 2..|E|+2.
IntPolynomial flow_polynomial(const Multigraph& g);

// 1 iff every degree is even (equals C_G(2)).
int even_flow_indicator(const Multigraph& g);

// C(G|S; q) for every edge mask S ⊆ E, indexed by mask, via the subset
// expansion C = Σ_{A⊆S} (-1)^{|S|-|A|} q^{corank(A)}. Needs |E| ≤ 24.
template <class Scalar>
std::vector<Scalar> flow_values_all_subsets(const Multigraph& g, const Scalar& q);

}  // namespace flowpotts
