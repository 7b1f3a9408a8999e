/* Multiplicative semigroups on N^d: generator validation, smooth-number
 * sieves, root sets, orbit factorization, box decompositions into chains,
 * and the exact counting quantities (cell census, densities, weights). */
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "multising/errors.hpp"
#include "multising/rational.hpp"

namespace multising {

using Index = std::vector<long long>;  // lattice point or generator vector
using Box = std::vector<long long>;    // (N_1,...,N_d)

struct SemigroupSpec {
  int d = 1;
  std::vector<Index> generators;  // each of length d, entries >= 1
  int direction = 1;              // 1-based coordinate used for ordering
};

// ---------------------------------------------------------------------------
// validation

inline SemigroupSpec validate_generators(const std::vector<Index>& generators,
                                         int d, int direction = 1) {
  if (d < 1) throw ConfigError("dimension must be >= 1");
  if (direction < 1 || direction > d)
    throw ConfigError("direction out of range");
  for (std::size_t g = 0; g < generators.size(); ++g) {
    if (static_cast<int>(generators[g].size()) != d)
      throw ConfigError("generator " + std::to_string(g + 1) +
                        " has wrong dimension");
    bool has_nontrivial = false;
    for (long long e : generators[g]) {
      if (e < 1) throw ConfigError("generator entries must be >= 1");
      if (e >= 2) has_nontrivial = true;
    }
    if (!has_nontrivial)
      throw DegenerateGenerator("generator " + std::to_string(g + 1) +
                                " is the all-ones vector");
  }
  for (int s = 0; s < d; ++s)
    for (std::size_t a = 0; a < generators.size(); ++a)
      for (std::size_t b = a + 1; b < generators.size(); ++b)
        if (std::gcd(generators[a][s], generators[b][s]) != 1)
          throw CoprimalityViolation(s + 1, static_cast<int>(a + 1),
                                     static_cast<int>(b + 1));
  SemigroupSpec spec;
  spec.d = d;
  spec.generators = generators;
  spec.direction = direction;
  return spec;
}

inline SemigroupSpec scalar_spec(const std::vector<long long>& gens) {
  std::vector<Index> vecs;
  vecs.reserve(gens.size());
  for (long long g : gens) vecs.push_back(Index{g});
  return validate_generators(vecs, 1, 1);
}

inline std::vector<long long> direction_generators(const SemigroupSpec& spec,
                                                   int j) {
  if (j < 1 || j > spec.d) throw ConfigError("direction out of range");
  std::vector<long long> out;
  out.reserve(spec.generators.size());
  for (const Index& p : spec.generators) out.push_back(p[j - 1]);
  return out;
}

// ---------------------------------------------------------------------------
// scalar semigroup sieves

// All products of the generators up to `bound`, ascending, starting at 1.
// Generators equal to 1 contribute nothing and are skipped.
inline std::vector<std::uint64_t> enumerate_scalar_semigroup(
    const std::vector<long long>& gens, std::uint64_t bound) {
  std::vector<std::uint64_t> out{1};
  if (bound == 0) return {};
  for (long long pg : gens) {
    if (pg <= 1) continue;
    const std::uint64_t p = static_cast<std::uint64_t>(pg);
    std::vector<std::uint64_t> ext;
    ext.reserve(out.size() * 2);
    for (std::uint64_t e : out) {
      for (std::uint64_t v = e;;) {
        ext.push_back(v);
        if (v > bound / p) break;
        v *= p;
      }
    }
    out.swap(ext);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// First `count` elements in ascending order. May return fewer when the
// remaining elements exceed the uint64 range; callers treat the missing
// tail as having reciprocal 0.
inline std::vector<std::uint64_t> first_scalar_elements(
    const std::vector<long long>& gens, std::size_t count) {
  bool any = false;
  for (long long g : gens)
    if (g > 1) any = true;
  if (!any || count == 0) return {1};
  const std::uint64_t kMaxBound = 4000000000000000000ULL;
  std::uint64_t bound = 4096;
  for (;;) {
    std::vector<std::uint64_t> els = enumerate_scalar_semigroup(gens, bound);
    if (els.size() >= count) {
      els.resize(count);
      return els;
    }
    if (bound >= kMaxBound / 16) return els;
    bound *= 16;
  }
}

// gamma(G) = sum of reciprocals = prod p/(p-1), exact.
inline Rational gamma_value(const std::vector<long long>& gens) {
  Rational g(1);
  for (long long p : gens)
    if (p > 1) g *= Rational(p, p - 1);
  return g;
}

// Truncated reciprocal sum over the enumerated semigroup, for cross-checks
// against the closed product.
inline double gamma_partial_sum(const std::vector<long long>& gens,
                                std::uint64_t bound) {
  long double s = 0.0L;
  for (std::uint64_t v : enumerate_scalar_semigroup(gens, bound))
    s += 1.0L / static_cast<long double>(v);
  return static_cast<double>(s);
}

// ---------------------------------------------------------------------------
// roots and factorization

namespace detail {

inline int multiplicity(long long p, long long x) {
  int m = 0;
  while (x % p == 0) {
    x /= p;
    ++m;
  }
  return m;
}

inline long long checked_mul(long long a, long long b) {
  __int128 w = static_cast<__int128>(a) * b;
  if (w > std::numeric_limits<long long>::max())
    throw Error("lattice coordinate overflow");
  return static_cast<long long>(w);
}

inline long long checked_pow(long long p, int e) {
  long long v = 1;
  for (int i = 0; i < e; ++i) v = checked_mul(v, p);
  return v;
}

}  // namespace detail

inline bool is_root(const Index& i, const SemigroupSpec& spec) {
  if (static_cast<int>(i.size()) != spec.d)
    throw ConfigError("index has wrong dimension");
  for (long long c : i)
    if (c < 1) throw ConfigError("index entries must be >= 1");
  for (const Index& p : spec.generators) {
    bool all_divide = true;
    for (int s = 0; s < spec.d; ++s)
      if (i[s] % p[s] != 0) {
        all_divide = false;
        break;
      }
    if (all_divide) return false;
  }
  return true;
}

struct Factorization {
  Index root;
  std::vector<int> exponents;  // one per generator
};

// Unique decomposition i = root * p_1^{e_1} ... p_k^{e_k} with root in the
// root set: e_g is the smallest per-coordinate multiplicity of generator g.
inline Factorization factor_index(const Index& i, const SemigroupSpec& spec) {
  if (static_cast<int>(i.size()) != spec.d)
    throw ConfigError("index has wrong dimension");
  for (long long c : i)
    if (c < 1) throw ConfigError("index entries must be >= 1");
  Factorization f;
  f.root = i;
  f.exponents.assign(spec.generators.size(), 0);
  for (std::size_t g = 0; g < spec.generators.size(); ++g) {
    int e = std::numeric_limits<int>::max();
    for (int s = 0; s < spec.d; ++s) {
      long long p = spec.generators[g][s];
      if (p >= 2) e = std::min(e, detail::multiplicity(p, i[s]));
    }
    f.exponents[g] = e;
    for (int s = 0; s < spec.d; ++s) {
      long long p = spec.generators[g][s];
      if (p >= 2)
        for (int t = 0; t < e; ++t) f.root[s] /= p;
    }
  }
  return f;
}

namespace detail {

inline void require_ordered_direction(const SemigroupSpec& spec, int j) {
  if (spec.generators.empty())
    throw ConfigError("at least one generator required");
  for (const Index& p : spec.generators)
    if (p[j - 1] < 2)
      throw OrderAmbiguity(
          "generator coordinate " + std::to_string(j) +
          " equals 1; orbit ranks along this direction are not well-defined");
}

}  // namespace detail

// 1-based position of i within its orbit under the direction-j order.
// Single-generator orbits are ordered by exponent; otherwise ranks follow
// the scalar semigroup of the j-th generator coordinates.
inline long long chain_index(const Index& i, const SemigroupSpec& spec,
                             int j) {
  Factorization f = factor_index(i, spec);
  if (spec.generators.size() <= 1)
    return f.exponents.empty() ? 1 : f.exponents[0] + 1;
  detail::require_ordered_direction(spec, j);
  long long value = 1;
  for (std::size_t g = 0; g < spec.generators.size(); ++g)
    value = detail::checked_mul(
        value, detail::checked_pow(spec.generators[g][j - 1], f.exponents[g]));
  std::vector<std::uint64_t> els = enumerate_scalar_semigroup(
      direction_generators(spec, j), static_cast<std::uint64_t>(value));
  return static_cast<long long>(els.size());
}

// ---------------------------------------------------------------------------
// box decomposition

struct Chain {
  Index root;
  std::vector<Index> members;  // ascending orbit rank; j-coordinate <= N_j
};

struct ChainDecomposition {
  Box box;
  int direction = 1;
  std::vector<Chain> chains;               // ordered by root, lexicographic
  std::map<long long, long long> census;   // chain length -> count
  long long total_members = 0;
};

namespace detail {

// Members of the orbit of `root` whose direction-j coordinate stays within
// the box; other coordinates are unconstrained.
inline void collect_members(const SemigroupSpec& spec, int j, long long cap_j,
                            std::size_t g, const Index& cur,
                            std::vector<std::pair<long long, Index>>& out) {
  if (g == spec.generators.size()) {
    out.emplace_back(cur[j - 1], cur);
    return;
  }
  Index next = cur;
  for (;;) {
    collect_members(spec, j, cap_j, g + 1, next, out);
    bool grows = false;
    for (int s = 0; s < spec.d; ++s) {
      long long p = spec.generators[g][s];
      if (p >= 2) grows = true;
      next[s] = checked_mul(next[s], p);
    }
    if (!grows || next[j - 1] > cap_j) break;
  }
}

}  // namespace detail

inline ChainDecomposition decompose_box(const Box& box,
                                        const SemigroupSpec& spec, int j) {
  if (static_cast<int>(box.size()) != spec.d)
    throw ConfigError("box has wrong dimension");
  for (long long n : box)
    if (n < 1) throw ConfigError("box sides must be >= 1");
  detail::require_ordered_direction(spec, j);
  long long volume = 1;
  for (long long n : box) {
    volume = detail::checked_mul(volume, n);
    if (volume > 2000000)
      throw TooLargeForEnumeration("box too large to materialize chains");
  }
  ChainDecomposition dec;
  dec.box = box;
  dec.direction = j;

  Index i(spec.d, 1);
  for (;;) {
    if (is_root(i, spec)) {
      std::vector<std::pair<long long, Index>> keyed;
      detail::collect_members(spec, j, box[j - 1], 0, i, keyed);
      std::sort(keyed.begin(), keyed.end());
      Chain c;
      c.root = i;
      c.members.reserve(keyed.size());
      for (auto& kv : keyed) c.members.push_back(std::move(kv.second));
      dec.census[static_cast<long long>(c.members.size())]++;
      dec.total_members += static_cast<long long>(c.members.size());
      dec.chains.push_back(std::move(c));
    }
    // advance odometer over the box
    int s = spec.d - 1;
    while (s >= 0 && i[s] == box[s]) {
      i[s] = 1;
      --s;
    }
    if (s < 0) break;
    ++i[s];
  }
  return dec;
}

// ---------------------------------------------------------------------------
// exact counting (works for huge boxes; nothing is materialized)

namespace detail {

// #{ i in the box : i in root set, i_j <= cap_j } by inclusion-exclusion
// over generator subsets (coordinate-wise coprimality makes lcm = product).
inline long long count_roots_capped(const Box& box, const SemigroupSpec& spec,
                                    int j, long long cap_j) {
  if (cap_j <= 0) return 0;
  const std::size_t k = spec.generators.size();
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    __int128 term = 1;
    for (int s = 0; s < spec.d && term != 0; ++s) {
      __int128 prod = 1;
      for (std::size_t g = 0; g < k; ++g)
        if (mask & (1u << g)) prod *= spec.generators[g][s];
      long long cap = (s == j - 1) ? cap_j : box[s];
      term *= (prod > cap) ? 0 : cap / static_cast<long long>(prod);
    }
    total += (__builtin_popcount(mask) % 2 == 0)
                 ? static_cast<long long>(term)
                 : -static_cast<long long>(term);
  }
  return total;
}

}  // namespace detail

// Chain-length census of the direction-j decomposition without enumerating:
// chains of length M are rooted at i with N_j/l_{M+1} < i_j <= N_j/l_M.
inline std::map<long long, long long> chain_length_census(
    const Box& box, const SemigroupSpec& spec, int j) {
  if (static_cast<int>(box.size()) != spec.d)
    throw ConfigError("box has wrong dimension");
  detail::require_ordered_direction(spec, j);
  const std::uint64_t nj = static_cast<std::uint64_t>(box[j - 1]);
  std::vector<std::uint64_t> els =
      enumerate_scalar_semigroup(direction_generators(spec, j), nj);
  std::map<long long, long long> census;
  for (std::size_t m = 0; m < els.size(); ++m) {
    long long hi = box[j - 1] / static_cast<long long>(els[m]);
    long long lo = (m + 1 < els.size())
                       ? box[j - 1] / static_cast<long long>(els[m + 1])
                       : 0;
    long long c = detail::count_roots_capped(box, spec, j, hi) -
                  detail::count_roots_capped(box, spec, j, lo);
    if (c != 0) census[static_cast<long long>(m + 1)] = c;
  }
  return census;
}

inline long long total_chain_members(
    const std::map<long long, long long>& census) {
  long long t = 0;
  for (auto& [len, cnt] : census) t += len * cnt;
  return t;
}

// |J cell|: the floor-difference product over coordinates.
inline long long census_J(const Box& box, const SemigroupSpec& spec,
                          const std::vector<int>& M) {
  if (static_cast<int>(box.size()) != spec.d ||
      static_cast<int>(M.size()) != spec.d)
    throw ConfigError("box/multi-index dimension mismatch");
  long long out = 1;
  for (int s = 0; s < spec.d; ++s) {
    if (M[s] < 1) throw ConfigError("multi-index entries must be >= 1");
    std::vector<std::uint64_t> els = first_scalar_elements(
        direction_generators(spec, s + 1), static_cast<std::size_t>(M[s]) + 1);
    if (els.size() < static_cast<std::size_t>(M[s])) return 0;
    long long hi = box[s] / static_cast<long long>(els[M[s] - 1]);
    long long lo = (els.size() > static_cast<std::size_t>(M[s]))
                       ? box[s] / static_cast<long long>(els[M[s]])
                       : 0;
    out *= (hi - lo);
    if (out == 0) return 0;
  }
  return out;
}

// |K cell| = |J cell intersected with the root set|, exact.
inline long long census_K(const Box& box, const SemigroupSpec& spec,
                          const std::vector<int>& M) {
  if (static_cast<int>(box.size()) != spec.d ||
      static_cast<int>(M.size()) != spec.d)
    throw ConfigError("box/multi-index dimension mismatch");
  std::vector<long long> lo(spec.d), hi(spec.d);
  for (int s = 0; s < spec.d; ++s) {
    if (M[s] < 1) throw ConfigError("multi-index entries must be >= 1");
    std::vector<std::uint64_t> els = first_scalar_elements(
        direction_generators(spec, s + 1), static_cast<std::size_t>(M[s]) + 1);
    if (els.size() < static_cast<std::size_t>(M[s])) return 0;
    hi[s] = box[s] / static_cast<long long>(els[M[s] - 1]);
    lo[s] = (els.size() > static_cast<std::size_t>(M[s]))
                ? box[s] / static_cast<long long>(els[M[s]])
                : 0;
    if (hi[s] <= lo[s]) return 0;
  }
  const std::size_t k = spec.generators.size();
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    __int128 term = 1;
    for (int s = 0; s < spec.d && term != 0; ++s) {
      __int128 prod = 1;
      for (std::size_t g = 0; g < k; ++g)
        if (mask & (1u << g)) prod *= spec.generators[g][s];
      long long p = (prod > hi[s]) ? 0
                                   : static_cast<long long>(prod);
      long long cnt = (p == 0) ? 0 : hi[s] / p - lo[s] / p;
      term *= cnt;
    }
    total += (__builtin_popcount(mask) % 2 == 0)
                 ? static_cast<long long>(term)
                 : -static_cast<long long>(term);
  }
  return total;
}

// Asymptotic root density prod (1 - 1/(p_{g1}...p_{gd})), exact.
inline Rational density_K_over_J(const SemigroupSpec& spec) {
  Rational dens(1);
  for (const Index& p : spec.generators) {
    Rational prod(1);
    for (long long e : p) prod *= Rational(e);
    dens *= Rational(1) - prod.inverse();
  }
  return dens;
}

// ---------------------------------------------------------------------------
// chain-length weights

// Single-generator orbits capped by the full box: weight of length L is
// (P-1)^2 / P^{L+1} with P the coordinate product.
inline std::vector<Rational> orbit_length_weights(const Index& p, int K) {
  Rational P(1);
  for (long long e : p) {
    if (e < 1) throw ConfigError("generator entries must be >= 1");
    P *= Rational(e);
  }
  if (P == Rational(1))
    throw DegenerateGenerator("all-ones generator has no finite orbits");
  std::vector<Rational> w;
  w.reserve(K);
  Rational num = (P - Rational(1)) * (P - Rational(1));
  Rational denom = P * P;
  for (int l = 1; l <= K; ++l) {
    w.push_back(num / denom);
    denom *= P;
  }
  return w;
}

// Direction-j capped chains: weight of length M is
// density * (1/l^{(j)}_M - 1/l^{(j)}_{M+1}).
inline std::vector<Rational> chain_length_weights(const SemigroupSpec& spec,
                                                  int j, int K) {
  detail::require_ordered_direction(spec, j);
  std::vector<std::uint64_t> els = first_scalar_elements(
      direction_generators(spec, j), static_cast<std::size_t>(K) + 1);
  if (els.size() < static_cast<std::size_t>(K) + 1)
    throw Error("semigroup elements exceed exact range at requested depth");
  Rational B = density_K_over_J(spec);
  std::vector<Rational> w;
  w.reserve(K);
  for (int m = 1; m <= K; ++m) {
    Rational lm(static_cast<long long>(els[m - 1]));
    Rational ln(static_cast<long long>(els[m]));
    w.push_back(B * (lm.inverse() - ln.inverse()));
  }
  return w;
}

// ---------------------------------------------------------------------------
// rank counts for the general free-energy sum

// Number of semigroup elements ranked no higher (direction-j order) than the
// highest element inside the box l^{(1)}_{k_1} x ... x l^{(d)}_{k_d}.
inline long long b_count(const SemigroupSpec& spec, int j,
                         const std::vector<int>& ks) {
  if (static_cast<int>(ks.size()) != spec.d)
    throw ConfigError("multi-index dimension mismatch");
  for (int v : ks)
    if (v < 1) throw ConfigError("multi-index entries must be >= 1");
  if (spec.generators.empty()) return 1;
  if (spec.generators.size() == 1) {
    long long b = std::numeric_limits<long long>::max();
    for (int s = 0; s < spec.d; ++s)
      if (spec.generators[0][s] >= 2) b = std::min<long long>(b, ks[s]);
    return b;
  }
  detail::require_ordered_direction(spec, j);
  std::vector<long long> cap(spec.d);
  for (int s = 0; s < spec.d; ++s) {
    std::vector<std::uint64_t> els = first_scalar_elements(
        direction_generators(spec, s + 1), static_cast<std::size_t>(ks[s]));
    if (els.size() < static_cast<std::size_t>(ks[s])) {
      if (els.size() == 1 && els[0] == 1 && ks[s] >= 1) {
        // degenerate coordinate: only the element 1 exists, cap never binds
        cap[s] = std::numeric_limits<long long>::max();
        continue;
      }
      throw Error("semigroup element index out of exact range");
    }
    cap[s] = static_cast<long long>(els[ks[s] - 1]);
  }
  // depth-first over exponent tuples, tracking the largest j-coordinate of
  // an element that fits the box in every coordinate
  long long best = 1;
  std::vector<long long> coords(spec.d, 1);
  const std::size_t k = spec.generators.size();
  auto dfs = [&](auto&& self, std::size_t g) -> void {
    if (g == k) {
      best = std::max(best, coords[j - 1]);
      return;
    }
    std::vector<long long> saved = coords;
    for (;;) {
      self(self, g + 1);
      bool ok = true;
      for (int s = 0; s < spec.d; ++s) {
        __int128 w = static_cast<__int128>(coords[s]) * spec.generators[g][s];
        if (w > cap[s]) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      for (int s = 0; s < spec.d; ++s) coords[s] *= spec.generators[g][s];
    }
    coords = saved;
  };
  dfs(dfs, 0);
  std::vector<std::uint64_t> els = enumerate_scalar_semigroup(
      direction_generators(spec, j), static_cast<std::uint64_t>(best));
  return static_cast<long long>(els.size());
}

// Series constant of the directional formula, exact:
// density * prod_{i != j} gamma(S^{(i)}).
inline Rational directional_constant(const SemigroupSpec& spec, int j) {
  Rational C = density_K_over_J(spec);
  for (int s = 1; s <= spec.d; ++s)
    if (s != j) C *= gamma_value(direction_generators(spec, s));
  return C;
}

// Asymptotic number of coupling terms per box site for the direction-j
// decomposition: density * gamma(S^{(j)}).
inline Rational bonds_per_site(const SemigroupSpec& spec, int j) {
  return density_K_over_J(spec) * gamma_value(direction_generators(spec, j));
}

}  // namespace multising
