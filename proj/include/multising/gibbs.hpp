/* Exact finite-volume measures, infinite-volume cylinder probabilities via
 * independent chain layers, multiplication-invariance checks, configuration
 * sampling, and Kolmogorov-Sinai entropies. */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "multising/errors.hpp"
#include "multising/semigroup.hpp"
#include "multising/summation.hpp"
#include "multising/transfer.hpp"

namespace multising {

struct CylinderEvent {
  std::vector<Index> sites;
  std::vector<int> values;  // +-1, matching sites
};

namespace detail {

inline void validate_event(const CylinderEvent& ev, int d) {
  if (ev.sites.size() != ev.values.size())
    throw ConfigError("event sites and values differ in length");
  if (ev.sites.empty()) throw EmptyBlock("event must name at least one site");
  for (const Index& s : ev.sites) {
    if (static_cast<int>(s.size()) != d)
      throw ConfigError("event site has wrong dimension");
    for (long long c : s)
      if (c < 1) throw ConfigError("event sites must have entries >= 1");
  }
  for (int v : ev.values)
    if (v != 1 && v != -1) throw ConfigError("event values must be +-1");
  for (std::size_t a = 0; a < ev.sites.size(); ++a)
    for (std::size_t b = a + 1; b < ev.sites.size(); ++b)
      if (ev.sites[a] == ev.sites[b])
        throw ConfigError("event sites must be distinct");
}

// Chains of the box decomposition closed with one successor site each:
// members by ascending orbit rank, then the first orbit element whose
// direction-j coordinate exceeds the box.
inline std::vector<std::vector<Index>> closed_chains(const Box& box,
                                                     const SemigroupSpec& spec,
                                                     int j) {
  require_ordered_direction(spec, j);
  long long minp = std::numeric_limits<long long>::max();
  for (const Index& p : spec.generators) minp = std::min(minp, p[j - 1]);
  if (spec.generators.empty()) minp = 2;
  long long volume = 1;
  for (long long n : box) {
    volume = checked_mul(volume, n);
    if (volume > 2000000)
      throw TooLargeForEnumeration("box too large to materialize chains");
  }
  const long long ext_cap = checked_mul(box[j - 1], minp);
  std::vector<std::vector<Index>> chains;
  Index i(spec.d, 1);
  for (;;) {
    if (is_root(i, spec)) {
      std::vector<std::pair<long long, Index>> keyed;
      collect_members(spec, j, ext_cap, 0, i, keyed);
      std::sort(keyed.begin(), keyed.end());
      std::size_t in_box = 0;
      while (in_box < keyed.size() && keyed[in_box].first <= box[j - 1])
        ++in_box;
      std::vector<Index> chain;
      chain.reserve(in_box + 1);
      for (std::size_t t = 0; t < in_box + 1 && t < keyed.size(); ++t)
        chain.push_back(keyed[t].second);
      chains.push_back(std::move(chain));
    }
    int s = spec.d - 1;
    while (s >= 0 && i[s] == box[s]) {
      i[s] = 1;
      --s;
    }
    if (s < 0) break;
    ++i[s];
  }
  return chains;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// infinite-volume cylinder probabilities

// The trace of an event on one independent layer: occupied orbit ranks in
// strictly increasing order with the pinned values.
struct LayerView {
  Index root;
  std::vector<long long> ranks;
  std::vector<int> values;
};

inline std::vector<LayerView> layer_views(const CylinderEvent& ev,
                                          const SemigroupSpec& spec,
                                          int j = 0) {
  if (j == 0) j = spec.direction;
  detail::validate_event(ev, spec.d);
  std::map<Index, std::vector<std::pair<long long, int>>> layers;
  for (std::size_t t = 0; t < ev.sites.size(); ++t) {
    Factorization f = factor_index(ev.sites[t], spec);
    long long rank = chain_index(ev.sites[t], spec, j);
    layers[f.root].emplace_back(rank, ev.values[t]);
  }
  std::vector<LayerView> out;
  out.reserve(layers.size());
  for (auto& [root, occ] : layers) {
    std::sort(occ.begin(), occ.end());
    LayerView lv;
    lv.root = root;
    for (std::size_t t = 0; t < occ.size(); ++t) {
      if (t > 0 && occ[t].first == occ[t - 1].first)
        throw Error("two event sites share an orbit rank");
      lv.ranks.push_back(occ[t].first);
      lv.values.push_back(occ[t].second);
    }
    out.push_back(std::move(lv));
  }
  return out;
}

// Probability of a finite cylinder under the limit measure: sites factor
// into independent layers; within a layer, ranks n_1 < n_2 < ... carry the
// stationary chain marginal (1/2) prod (1 + s_t lambda^{gap_t})/2 with
// lambda = tanh(beta).
inline double limit_cylinder_probability(const CylinderEvent& ev, double beta,
                                         const SemigroupSpec& spec,
                                         int j = 0) {
  const double lam = std::tanh(beta);
  double prob = 1.0;
  for (const LayerView& lv : layer_views(ev, spec, j)) {
    double p = 0.5;
    for (std::size_t t = 0; t + 1 < lv.ranks.size(); ++t) {
      long long gap = lv.ranks[t + 1] - lv.ranks[t];
      double agree = (lv.values[t] == lv.values[t + 1]) ? 1.0 : -1.0;
      p *= 0.5 * (1.0 + agree * std::pow(lam, static_cast<double>(gap)));
    }
    prob *= p;
  }
  return prob;
}

// ---------------------------------------------------------------------------
// finite-volume measure

// Probability of the event under the finite-volume measure of the box
// Hamiltonian (chains closed with their successor spins). Chains factorize
// under the measure, so each involved chain is enumerated on its own.
inline double finite_volume_probability(const CylinderEvent& ev, double beta,
                                        const SemigroupSpec& spec,
                                        const Box& box, int j = 0) {
  if (j == 0) j = spec.direction;
  detail::validate_event(ev, spec.d);
  if (static_cast<int>(box.size()) != spec.d)
    throw ConfigError("box has wrong dimension");
  std::vector<std::vector<Index>> chains = detail::closed_chains(box, spec, j);
  std::map<Index, std::pair<std::size_t, std::size_t>> where;  // site -> (chain, pos)
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t t = 0; t < chains[c].size(); ++t)
      where[chains[c][t]] = {c, t};

  std::map<std::size_t, std::vector<std::pair<std::size_t, int>>> involved;
  for (std::size_t t = 0; t < ev.sites.size(); ++t) {
    auto it = where.find(ev.sites[t]);
    if (it == where.end())
      throw ConfigError("event site lies outside the finite volume");
    involved[it->second.first].emplace_back(it->second.second, ev.values[t]);
  }
  std::size_t total_sites = 0;
  for (auto& [c, pins] : involved) total_sites += chains[c].size();
  if (total_sites > 24)
    throw TooLargeForEnumeration("more than 24 involved spins");

  double prob = 1.0;
  for (auto& [c, pins] : involved) {
    const std::size_t n = chains[c].size();
    NeumaierSum matched, total;
    for (std::uint64_t cfg = 0; cfg < (1ULL << n); ++cfg) {
      double s_sum = 0.0;
      for (std::size_t t = 0; t + 1 < n; ++t) {
        int a = (cfg >> t) & 1 ? 1 : -1;
        int b = (cfg >> (t + 1)) & 1 ? 1 : -1;
        s_sum += a * b;
      }
      double w = std::exp(beta * s_sum);
      total.add(w);
      bool match = true;
      for (auto& [pos, val] : pins)
        if ((((cfg >> pos) & 1) ? 1 : -1) != val) {
          match = false;
          break;
        }
      if (match) matched.add(w);
    }
    prob *= matched.value() / total.value();
  }
  return prob;
}

// |P(m . event) - P(event)| under the limit measure.
inline double check_multiplication_invariance(const CylinderEvent& ev,
                                              const Index& m, double beta,
                                              const SemigroupSpec& spec,
                                              int j = 0) {
  if (static_cast<int>(m.size()) != spec.d)
    throw ConfigError("multiplier has wrong dimension");
  for (long long c : m)
    if (c < 1) throw ConfigError("multiplier entries must be >= 1");
  CylinderEvent scaled = ev;
  for (Index& s : scaled.sites)
    for (int t = 0; t < spec.d; ++t) s[t] = detail::checked_mul(s[t], m[t]);
  return std::fabs(limit_cylinder_probability(scaled, beta, spec, j) -
                   limit_cylinder_probability(ev, beta, spec, j));
}

// ---------------------------------------------------------------------------
// sampling

struct SampleResult {
  std::vector<Index> sites;               // chain members + successors
  std::vector<std::vector<int>> configs;  // one +-1 row per sample
};

// Direct layer sampler: first spin of each chain uniform, each bond agrees
// with probability q. Deterministic for a fixed seed.
inline SampleResult sample_box(const Box& box, double beta,
                               const SemigroupSpec& spec, int j,
                               std::uint64_t seed, int count) {
  if (count < 0) throw ConfigError("sample count must be >= 0");
  long long volume = 1;
  for (long long n : box) volume = detail::checked_mul(volume, n);
  if (volume > 10000000)
    throw TooLargeForEnumeration("box volume above sampling limit");
  std::vector<std::vector<Index>> chains = detail::closed_chains(box, spec, j);
  SampleResult out;
  std::vector<std::size_t> chain_len;
  for (auto& c : chains) {
    chain_len.push_back(c.size());
    for (auto& s : c) out.sites.push_back(s);
  }
  const double q = bond_agree_probability(beta);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  out.configs.reserve(static_cast<std::size_t>(count));
  for (int rep = 0; rep < count; ++rep) {
    std::vector<int> cfg;
    cfg.reserve(out.sites.size());
    for (std::size_t len : chain_len) {
      int spin = (uniform() < 0.5) ? 1 : -1;
      cfg.push_back(spin);
      for (std::size_t t = 1; t < len; ++t) {
        if (uniform() >= q) spin = -spin;
        cfg.push_back(spin);
      }
    }
    out.configs.push_back(std::move(cfg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Sinai entropies

struct KsResult {
  double value = 0.0;
  long long truncation_K = 0;
  double tail_bound = 0.0;
};

// Single-generator (full-box) case: sum_k (P-1)^2/P^{k+1} [log 2 + (k-1)H].
// The geometric tail is summed in closed form, so truncation contributes
// only rounding; equals ((P-1)/P) log 2 + H(q)/P.
inline KsResult ks_entropy_2multiple(double beta, const Index& p) {
  long long P = 1;
  for (long long e : p) {
    if (e < 1) throw ConfigError("generator entries must be >= 1");
    P = detail::checked_mul(P, e);
  }
  if (P < 2)
    throw DegenerateGenerator("all-ones generator has no chain structure");
  const double H = bond_entropy(beta);
  const double log2v = std::log(2.0);
  const double Pd = static_cast<double>(P);
  const long long K = 48;
  NeumaierSum acc;
  double wk = (Pd - 1.0) * (Pd - 1.0) / (Pd * Pd);  // (P-1)^2/P^{k+1} at k=1
  for (long long k = 1; k <= K; ++k) {
    acc.add(wk * (log2v + static_cast<double>(k - 1) * H));
    wk /= Pd;
  }
  // exact geometric remainders: sum_{k>K} w_k and sum_{k>K} (k-1) w_k
  const double s0 = (Pd - 1.0) / std::pow(Pd, static_cast<double>(K + 1));
  const double s1m = (static_cast<double>(K) - static_cast<double>(K - 1) / Pd) /
                     std::pow(Pd, static_cast<double>(K));
  acc.add(log2v * s0 + H * s1m);
  KsResult res;
  res.value = acc.value();
  res.truncation_K = K;
  res.tail_bound = 1e-14 * std::max(1.0, std::fabs(res.value));
  return res;
}

// Directional case: kappa * sum_k (1/l_k - 1/l_{k+1}) [log 2 + (k-1)H] with
// kappa = 1/gamma(S^{(j)}). Remainders are exact via the telescoping sums
// sum_{k>K} w_k = 1/l_{K+1} and sum_{k>K} k w_k = (K+1)/l_{K+1} + tail of
// gamma, so the reported value carries only rounding error.
inline KsResult ks_entropy_directional(double beta, const SemigroupSpec& spec,
                                       int j, double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  detail::require_ordered_direction(spec, j);
  std::vector<long long> dir = direction_generators(spec, j);
  const Rational gamma_exact = gamma_value(dir);
  const double gamma_d = gamma_exact.to_double();
  const double kappa = gamma_exact.inverse().to_double();
  const double H = bond_entropy(beta);
  const double log2v = std::log(2.0);
  std::vector<std::uint64_t> els = first_scalar_elements(dir, 128);
  NeumaierSum acc;
  double prefix = 1.0;
  KsResult res;
  for (long long k = 1;; ++k) {
    if (els.size() < static_cast<std::size_t>(k) + 1) {
      std::vector<std::uint64_t> more =
          first_scalar_elements(dir, els.size() * 2 + 2);
      if (more.size() <= els.size()) {
        res.truncation_K = k - 1;
        break;  // weights below 1/l ~ 2.5e-19; remainder negligible
      }
      els = std::move(more);
    }
    const double recip_k = 1.0 / static_cast<double>(els[k - 1]);
    const double recip_next = 1.0 / static_cast<double>(els[k]);
    prefix += recip_next;
    acc.add(kappa * (recip_k - recip_next) *
            (log2v + static_cast<double>(k - 1) * H));
    const double s0 = recip_next;
    const double s1 = static_cast<double>(k + 1) * recip_next +
                      std::max(0.0, gamma_d - prefix);
    const double rem = kappa * (log2v * s0 + H * (s1 - s0));
    if (rem <= tol || k >= 100000) {
      acc.add(rem);
      res.truncation_K = k;
      break;
    }
  }
  res.value = acc.value();
  res.tail_bound = std::max(tol * 1e-2, 1e-14 * std::max(1.0, std::fabs(res.value)));
  return res;
}

}  // namespace multising
