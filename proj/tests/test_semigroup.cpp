#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "multising/semigroup.hpp"

using namespace multising;

namespace {

// independent reference: all points of a box, odometer order
std::vector<Index> box_points(const Box& box) {
  std::vector<Index> pts;
  Index i(box.size(), 1);
  for (;;) {
    pts.push_back(i);
    int s = static_cast<int>(box.size()) - 1;
    while (s >= 0 && i[s] == box[s]) {
      i[s] = 1;
      --s;
    }
    if (s < 0) break;
    ++i[s];
  }
  return pts;
}

// definitional J-cell membership: i_s l_{M_s} <= N_s < i_s l_{M_s+1}
bool in_J_cell(const Index& i, const Box& box, const SemigroupSpec& spec,
               const std::vector<int>& M) {
  for (int s = 0; s < spec.d; ++s) {
    auto els = first_scalar_elements(direction_generators(spec, s + 1),
                                     static_cast<std::size_t>(M[s]) + 1);
    if (els.size() < static_cast<std::size_t>(M[s])) return false;
    __int128 lo = static_cast<__int128>(i[s]) * els[M[s] - 1];
    if (lo > box[s]) return false;
    if (els.size() > static_cast<std::size_t>(M[s])) {
      __int128 hi = static_cast<__int128>(i[s]) * els[M[s]];
      if (hi <= box[s]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("generator validation") {
  CHECK_NOTHROW(scalar_spec({2, 3, 5, 7, 11}));
  CHECK_NOTHROW(validate_generators(
      {{2, 3}, {3, 5}, {5, 7}, {7, 11}, {11, 2}}, 2));
  CHECK_THROWS_AS(scalar_spec({2, 4}), CoprimalityViolation);
  CHECK_THROWS_AS(scalar_spec({2, 1}), DegenerateGenerator);
  CHECK_THROWS_AS(validate_generators({{1, 1}}, 2), DegenerateGenerator);
  CHECK_THROWS_AS(validate_generators({{2, 3}}, 2, 3), ConfigError);
  CHECK_THROWS_AS(validate_generators({{2, 6}, {3, 4}}, 2),
                  CoprimalityViolation);
  // mixed unit coordinates are fine as long as each coordinate is coprime
  CHECK_NOTHROW(validate_generators({{2, 1}, {1, 3}}, 2));
}

TEST_CASE("bounded sieve enumeration") {
  CHECK(enumerate_scalar_semigroup({2}, 16) ==
        std::vector<std::uint64_t>{1, 2, 4, 8, 16});
  CHECK(enumerate_scalar_semigroup({2, 3}, 12) ==
        std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 9, 12});
  CHECK(enumerate_scalar_semigroup({2, 3, 5, 7, 11}, 5) ==
        std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(enumerate_scalar_semigroup({}, 100) ==
        std::vector<std::uint64_t>{1});
  CHECK(first_scalar_elements({2, 3}, 5) ==
        std::vector<std::uint64_t>{1, 2, 3, 4, 6});
}

TEST_CASE("gamma closed product and truncated reciprocal sum") {
  CHECK(gamma_value({2}) == Rational(2));
  CHECK(gamma_value({2, 3, 5, 7, 11}) == Rational(77, 16));
  CHECK(gamma_value({3}) == Rational(3, 2));

  // partial sums increase monotonically toward the closed value
  double prev = 0.0;
  for (std::uint64_t bound : {10ULL, 1000ULL, 100000ULL}) {
    double s = gamma_partial_sum({2, 3}, bound);
    CHECK(s > prev);
    CHECK(s < 3.0);
    prev = s;
  }
  CHECK(3.0 - gamma_partial_sum({2, 3}, 1000000000ULL) < 1e-3);
}

TEST_CASE("root membership") {
  SemigroupSpec g2 = scalar_spec({2});
  CHECK(is_root({3}, g2));
  CHECK_FALSE(is_root({4}, g2));
  SemigroupSpec s23 = validate_generators({{2, 3}}, 2);
  CHECK(is_root({2, 5}, s23));
  CHECK_FALSE(is_root({2, 3}, s23));
}

TEST_CASE("orbit factorization") {
  SemigroupSpec g2 = scalar_spec({2});
  Factorization f = factor_index({12}, g2);
  CHECK(f.root == Index{3});
  CHECK(f.exponents == std::vector<int>{2});

  SemigroupSpec g23 = scalar_spec({2, 3});
  f = factor_index({18}, g23);
  CHECK(f.root == Index{1});
  CHECK(f.exponents == std::vector<int>{1, 2});

  SemigroupSpec s23 = validate_generators({{2, 3}}, 2);
  f = factor_index({4, 9}, s23);
  CHECK(f.root == Index{1, 1});
  CHECK(f.exponents == std::vector<int>{2});
}

TEST_CASE("factorization roundtrip over a whole box") {
  SemigroupSpec spec = validate_generators({{2, 3}, {3, 5}}, 2);
  for (const Index& i : box_points({30, 30})) {
    Factorization f = factor_index(i, spec);
    CHECK(is_root(f.root, spec));
    Index rebuilt = f.root;
    for (std::size_t g = 0; g < spec.generators.size(); ++g)
      for (int e = 0; e < f.exponents[g]; ++e)
        for (int s = 0; s < spec.d; ++s)
          rebuilt[s] *= spec.generators[g][s];
    CHECK(rebuilt == i);
  }
}

TEST_CASE("orbit rank within a chain") {
  CHECK(chain_index({12}, scalar_spec({2}), 1) == 3);
  // chain of root 1 in <2,3> runs 1,2,3,4,6,...; 6 sits fifth
  CHECK(chain_index({6}, scalar_spec({2, 3}), 1) == 5);
  CHECK(chain_index({4, 5}, validate_generators({{2, 1}}, 2), 1) == 3);
  CHECK_THROWS_AS(
      chain_index({2, 3}, validate_generators({{2, 1}, {1, 3}}, 2), 1),
      OrderAmbiguity);
}

TEST_CASE("box decomposition, one dimension") {
  SemigroupSpec g2 = scalar_spec({2});
  ChainDecomposition dec = decompose_box({8}, g2, 1);
  REQUIRE(dec.chains.size() == 4);
  CHECK(dec.chains[0].root == Index{1});
  CHECK(dec.chains[0].members ==
        std::vector<Index>{{1}, {2}, {4}, {8}});
  CHECK(dec.chains[1].members == std::vector<Index>{{3}, {6}});
  CHECK(dec.census == std::map<long long, long long>{{4, 1}, {2, 1}, {1, 2}});

  ChainDecomposition d23 = decompose_box({6}, scalar_spec({2, 3}), 1);
  REQUIRE(d23.chains.size() == 2);
  CHECK(d23.chains[0].members ==
        std::vector<Index>{{1}, {2}, {3}, {4}, {6}});
  CHECK(d23.chains[1].members == std::vector<Index>{{5}});
}

TEST_CASE("box decomposition, two dimensions") {
  SemigroupSpec s23 = validate_generators({{2, 3}}, 2);
  ChainDecomposition dec = decompose_box({4, 9}, s23, 1);
  bool found = false;
  for (const Chain& c : dec.chains)
    if (c.root == Index{1, 1}) {
      found = true;
      CHECK(c.members == std::vector<Index>{{1, 1}, {2, 3}, {4, 9}});
    }
  CHECK(found);
}

TEST_CASE("chains partition the box") {
  std::vector<std::pair<SemigroupSpec, Box>> cases;
  cases.push_back({scalar_spec({2}), {500}});
  cases.push_back({scalar_spec({2, 3}), {400}});
  cases.push_back({scalar_spec({2, 3, 5}), {300}});
  cases.push_back({validate_generators({{2, 3}}, 2), {40, 40}});
  cases.push_back({validate_generators({{2, 3}, {3, 5}}, 2), {30, 33}});
  for (auto& [spec, box] : cases) {
    ChainDecomposition dec = decompose_box(box, spec, 1);
    std::set<Index> seen;
    long long total = 0;
    for (const Chain& c : dec.chains) {
      CHECK(is_root(c.root, spec));
      for (const Index& m : c.members) {
        CHECK(seen.insert(m).second);  // disjoint
        CHECK(factor_index(m, spec).root == c.root);
      }
      total += static_cast<long long>(c.members.size());
    }
    CHECK(total == dec.total_members);
    // every box point is some chain member (members may also exit the box
    // in the unconstrained coordinates)
    for (const Index& p : box_points(box)) CHECK(seen.count(p) == 1);
  }
}

TEST_CASE("cell census closed form") {
  CHECK(census_J({8}, scalar_spec({2}), {2}) == 2);
  CHECK(census_J({12}, scalar_spec({2, 3}), {3}) == 1);
  CHECK(census_J({8, 9}, validate_generators({{2, 3}}, 2), {1, 1}) == 24);
}

TEST_CASE("cell census equals exhaustive counting") {
  std::vector<std::pair<SemigroupSpec, Box>> cases;
  cases.push_back({scalar_spec({2, 3}), {60}});
  cases.push_back({validate_generators({{2, 3}, {3, 5}}, 2), {24, 18}});
  for (auto& [spec, box] : cases) {
    std::vector<Index> pts = box_points(box);
    std::vector<int> M(spec.d, 1);
    for (int trial = 0; trial < 12; ++trial) {
      long long exhaustive_J = 0, exhaustive_K = 0;
      for (const Index& i : pts)
        if (in_J_cell(i, box, spec, M)) {
          ++exhaustive_J;
          if (is_root(i, spec)) ++exhaustive_K;
        }
      CHECK(census_J(box, spec, M) == exhaustive_J);
      CHECK(census_K(box, spec, M) == exhaustive_K);
      // walk through a few multi-indices
      M[trial % spec.d] += 1;
    }
  }
}

TEST_CASE("census identity: cells cover the box exactly once") {
  std::vector<std::pair<SemigroupSpec, Box>> cases;
  cases.push_back({scalar_spec({2, 3}), {64}});
  cases.push_back({validate_generators({{2, 3}}, 2), {16, 27}});
  for (auto& [spec, box] : cases) {
    long long total = 0;
    std::vector<int> M(spec.d, 1);
    // iterate all admissible multi-indices (l_{M_s} <= N_s)
    auto loop = [&](auto&& self, int s) -> void {
      if (s == spec.d) {
        total += census_J(box, spec, M);
        return;
      }
      auto els = enumerate_scalar_semigroup(
          direction_generators(spec, s + 1),
          static_cast<std::uint64_t>(box[s]));
      for (std::size_t m = 1; m <= els.size(); ++m) {
        M[s] = static_cast<int>(m);
        self(self, s + 1);
      }
      M[s] = 1;
    };
    loop(loop, 0);
    long long volume = 1;
    for (long long n : box) volume *= n;
    CHECK(total == volume);
  }
}

TEST_CASE("root density inside cells approaches the closed product") {
  SemigroupSpec g23 = scalar_spec({2, 3});
  double target = density_K_over_J(g23).to_double();
  CHECK(density_K_over_J(scalar_spec({2})) == Rational(1, 2));
  CHECK(density_K_over_J(g23) == Rational(1, 3));
  Box big{100000};
  for (int M1 : {1, 2, 3}) {
    std::vector<int> M{M1};
    double ratio = static_cast<double>(census_K(big, g23, M)) /
                   static_cast<double>(census_J(big, g23, M));
    CHECK(std::fabs(ratio - target) / target < 0.02);
  }
  SemigroupSpec fig2 = validate_generators(
      {{2, 3}, {3, 5}, {5, 7}, {7, 11}, {11, 2}}, 2);
  // (5/6)(14/15)(34/35)(76/77)(21/22)
  CHECK(density_K_over_J(fig2) ==
        Rational(5, 6) * Rational(14, 15) * Rational(34, 35) *
            Rational(76, 77) * Rational(21, 22));
  CHECK(density_K_over_J(fig2) == Rational(1292, 1815));
}

TEST_CASE("census by counting matches census by enumeration") {
  std::vector<std::pair<SemigroupSpec, Box>> cases;
  cases.push_back({scalar_spec({2}), {77}});
  cases.push_back({scalar_spec({2, 3}), {90}});
  cases.push_back({validate_generators({{2, 3}}, 2), {32, 20}});
  cases.push_back({validate_generators({{2, 3}, {3, 5}}, 2), {25, 25}});
  for (auto& [spec, box] : cases)
    CHECK(chain_length_census(box, spec, 1) ==
          decompose_box(box, spec, 1).census);
}

TEST_CASE("chain length weights") {
  // single generator, full-box convention: w_l = (P-1)^2 / P^{l+1}
  std::vector<Rational> w2 = orbit_length_weights({2}, 10);
  for (int l = 1; l <= 10; ++l)
    CHECK(w2[l - 1] == Rational(1, 1LL << (l + 1)));
  // (P-1)^2/P^{l+1} at l=1, P=6; equals the exhaustive root fraction whose
  // orbit is cut after one member: (5/6) * (1 - 1/6)
  std::vector<Rational> w6 = orbit_length_weights({2, 3}, 5);
  CHECK(w6[0] == Rational(25, 36));

  // truncated sums approach (P-1)/P and 1/P
  Rational sum(0), weighted(0);
  std::vector<Rational> w3 = orbit_length_weights({3}, 25);
  for (int l = 1; l <= 25; ++l) {
    sum += w3[l - 1];
    weighted += Rational(l - 1) * w3[l - 1];
  }
  CHECK(std::fabs(sum.to_double() - 2.0 / 3.0) < 1e-11);
  CHECK(std::fabs(weighted.to_double() - 1.0 / 3.0) < 1e-10);

  // directional convention: density * telescoping reciprocals; in one
  // dimension with a single generator the two conventions coincide
  std::vector<Rational> v2 = chain_length_weights(scalar_spec({2}), 1, 10);
  CHECK(v2 == w2);
  std::vector<Rational> v23 =
      chain_length_weights(scalar_spec({2, 3}), 1, 6);
  // B (1/l_M - 1/l_{M+1}) with B = 1/3 over 1,2,3,4,6,8,9
  CHECK(v23[0] == Rational(1, 3) * (Rational(1) - Rational(1, 2)));
  CHECK(v23[4] == Rational(1, 3) * (Rational(1, 6) - Rational(1, 8)));
  Rational partial(0);
  for (auto& w : v23) partial += w;
  CHECK(partial == Rational(1, 3) * (Rational(1) - Rational(1, 9)));
}

TEST_CASE("empirical chain-length frequencies match the weights") {
  SemigroupSpec g2 = scalar_spec({2});
  Box box{1000000};
  std::map<long long, long long> census = chain_length_census(box, g2, 1);
  for (int l = 1; l <= 6; ++l) {
    double expected = 1000000.0 / std::pow(2.0, l + 1);
    CHECK(std::fabs(static_cast<double>(census[l]) - expected) <
          0.01 * expected + 2.0);
  }
  CHECK(total_chain_members(census) == 1000000);
}

TEST_CASE("rank counts in scaled boxes") {
  SemigroupSpec g23 = scalar_spec({2, 3});
  for (int k = 1; k <= 8; ++k) CHECK(b_count(g23, 1, {k}) == k);

  SemigroupSpec s23 = validate_generators({{2, 3}}, 2);
  CHECK(b_count(s23, 1, {3, 2}) == 2);
  CHECK(b_count(s23, 1, {2, 3}) == 2);

  // rank cap never exceeds the direction index
  SemigroupSpec two = validate_generators({{2, 3}, {3, 5}}, 2);
  for (int k1 = 1; k1 <= 6; ++k1)
    for (int k2 = 1; k2 <= 6; ++k2) {
      long long b = b_count(two, 1, {k1, k2});
      CHECK(b >= 1);
      CHECK(b <= k1);
    }
}

TEST_CASE("randomized specs: factorization, census, and cell counts agree") {
  std::mt19937_64 rng(2024);
  const std::vector<std::vector<Index>> generator_pool{
      {{2}, {3}}, {{2}, {5}, {9}}, {{4}, {7}}, {{2, 3}}, {{3, 2}},
      {{2, 3}, {3, 5}}, {{2, 5}, {5, 2}}, {{2, 3}, {7, 5}, {5, 7}}};
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<Index>& gens =
        generator_pool[rng() % generator_pool.size()];
    int d = static_cast<int>(gens[0].size());
    SemigroupSpec spec = validate_generators(gens, d);
    Box box(d);
    for (int s = 0; s < d; ++s) box[s] = 2 + static_cast<long long>(rng() % 40);

    // factorization partitions the box
    std::set<Index> seen;
    for (const Index& p : box_points(box)) {
      Factorization f = factor_index(p, spec);
      CHECK(is_root(f.root, spec));
      Index rebuilt = f.root;
      for (std::size_t g = 0; g < gens.size(); ++g)
        for (int e = 0; e < f.exponents[g]; ++e)
          for (int s = 0; s < d; ++s) rebuilt[s] *= gens[g][s];
      CHECK(rebuilt == p);
      CHECK(seen.insert(p).second);
    }

    // random cells: closed-form counts match exhaustive scans
    std::vector<int> M(d);
    for (int s = 0; s < d; ++s) M[s] = 1 + static_cast<int>(rng() % 4);
    long long exhaustive_J = 0, exhaustive_K = 0;
    for (const Index& p : box_points(box))
      if (in_J_cell(p, box, spec, M)) {
        ++exhaustive_J;
        if (is_root(p, spec)) ++exhaustive_K;
      }
    CHECK(census_J(box, spec, M) == exhaustive_J);
    CHECK(census_K(box, spec, M) == exhaustive_K);

    // census by counting matches census by enumeration
    CHECK(chain_length_census(box, spec, 1) ==
          decompose_box(box, spec, 1).census);
  }
}

TEST_CASE("directional constants") {
  SemigroupSpec fig2 = validate_generators(
      {{2, 3}, {3, 5}, {5, 7}, {7, 11}, {11, 2}}, 2);
  CHECK(directional_constant(fig2, 1) == Rational(2261, 660));
  CHECK(directional_constant(fig2, 2) == Rational(2261, 660));
  SemigroupSpec g23571 = scalar_spec({2, 3, 5, 7, 11});
  CHECK(directional_constant(g23571, 1) == Rational(16, 77));
  // single generator with trivial tail coordinates: C = 1 - 1/P
  SemigroupSpec cor = validate_generators({{6, 1}}, 2);
  CHECK(directional_constant(cor, 1) == Rational(5, 6));
  CHECK(bonds_per_site(cor, 1) == Rational(1));
  CHECK(bonds_per_site(fig2, 1) == Rational(2261, 660));
  CHECK(bonds_per_site(scalar_spec({2}), 1) == Rational(1));
}
