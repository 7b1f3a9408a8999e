/* Brute-force reference implementations: exhaustive enumeration over spin
 * configurations with definitional weights only. These share the lattice
 * combinatorics with the rest of the library but none of the closed-form
 * expressions they are used to check. */
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "multising/errors.hpp"
#include "multising/gibbs.hpp"
#include "multising/semigroup.hpp"
#include "multising/summation.hpp"

namespace multising {
namespace oracle {

struct InvolvedSiteSet {
  std::vector<Index> sites;                      // enumeration order
  std::vector<std::pair<int, int>> bonds;        // index pairs into sites
  std::map<Index, int> position;
};

// Sites and couplings of the box Hamiltonian: every chain member paired
// with its successor along the chain.
inline InvolvedSiteSet involved_sites(const Box& box, const SemigroupSpec& spec,
                                      int j) {
  InvolvedSiteSet out;
  for (const std::vector<Index>& chain : detail::closed_chains(box, spec, j)) {
    int prev = -1;
    for (const Index& site : chain) {
      auto it = out.position.find(site);
      int idx;
      if (it == out.position.end()) {
        idx = static_cast<int>(out.sites.size());
        out.sites.push_back(site);
        out.position[site] = idx;
      } else {
        idx = it->second;
      }
      if (prev >= 0) out.bonds.emplace_back(prev, idx);
      prev = idx;
    }
  }
  return out;
}

// (1/volume) log E_r[e^{beta S}] by summing all 2^{|sites|} assignments with
// their Bernoulli weights.
inline double brute_force_mgf(double r, double beta, const SemigroupSpec& spec,
                              const Box& box, int j) {
  if (!(r > 0.0) || !(r < 1.0))
    throw BiasOutOfRange("bias must lie strictly between 0 and 1");
  InvolvedSiteSet inv = involved_sites(box, spec, j);
  const std::size_t n = inv.sites.size();
  if (n > 24) throw TooLargeForEnumeration("more than 24 involved spins");
  NeumaierSum acc;
  for (std::uint64_t cfg = 0; cfg < (1ULL << n); ++cfg) {
    double weight = 1.0;
    for (std::size_t t = 0; t < n; ++t)
      weight *= ((cfg >> t) & 1) ? r : (1.0 - r);
    long long s = 0;
    for (auto& [a, b] : inv.bonds) {
      int sa = ((cfg >> a) & 1) ? 1 : -1;
      int sb = ((cfg >> b) & 1) ? 1 : -1;
      s += sa * sb;
    }
    acc.add(weight * std::exp(beta * static_cast<double>(s)));
  }
  long double volume = 1.0L;
  for (long long nn : box) volume *= static_cast<long double>(nn);
  return static_cast<double>(std::log(acc.value()) /
                             static_cast<double>(volume));
}

// Finite-volume cylinder probability by enumerating e^{-H} over every
// involved spin jointly (no chain factorization).
inline double brute_force_cylinder(const CylinderEvent& ev, double beta,
                                   const SemigroupSpec& spec, const Box& box,
                                   int j) {
  detail::validate_event(ev, spec.d);
  InvolvedSiteSet inv = involved_sites(box, spec, j);
  const std::size_t n = inv.sites.size();
  if (n > 24) throw TooLargeForEnumeration("more than 24 involved spins");
  std::vector<std::pair<int, int>> pins;
  for (std::size_t t = 0; t < ev.sites.size(); ++t) {
    auto it = inv.position.find(ev.sites[t]);
    if (it == inv.position.end())
      throw ConfigError("event site lies outside the finite volume");
    pins.emplace_back(it->second, ev.values[t]);
  }
  NeumaierSum matched, total;
  for (std::uint64_t cfg = 0; cfg < (1ULL << n); ++cfg) {
    long long s = 0;
    for (auto& [a, b] : inv.bonds) {
      int sa = ((cfg >> a) & 1) ? 1 : -1;
      int sb = ((cfg >> b) & 1) ? 1 : -1;
      s += sa * sb;
    }
    double w = std::exp(beta * static_cast<double>(s));
    total.add(w);
    bool ok = true;
    for (auto& [pos, val] : pins)
      if ((((cfg >> pos) & 1) ? 1 : -1) != val) {
        ok = false;
        break;
      }
    if (ok) matched.add(w);
  }
  return matched.value() / total.value();
}

// Block entropy of the h=0 chain measure from first principles: block
// probabilities are ratios of pinned partition sums, evaluated by summing
// three explicit buffer spins past the block (the free chain marginal does
// not depend on how far the chain extends).
inline double brute_force_block_entropy(double beta, int k) {
  if (k < 1) throw EmptyBlock("block length must be >= 1");
  if (k > 20) throw TooLargeForEnumeration("block longer than 20 spins");
  const int extra = 3;
  const int n = k + extra;
  NeumaierSum denom;
  for (std::uint64_t cfg = 0; cfg < (1ULL << n); ++cfg) {
    double s = 0.0;
    for (int t = 0; t + 1 < n; ++t) {
      int a = ((cfg >> t) & 1) ? 1 : -1;
      int b = ((cfg >> (t + 1)) & 1) ? 1 : -1;
      s += a * b;
    }
    denom.add(std::exp(beta * s));
  }
  NeumaierSum entropy;
  for (std::uint64_t block = 0; block < (1ULL << k); ++block) {
    NeumaierSum numer;
    for (std::uint64_t rest = 0; rest < (1ULL << extra); ++rest) {
      std::uint64_t cfg = block | (rest << k);
      double s = 0.0;
      for (int t = 0; t + 1 < n; ++t) {
        int a = ((cfg >> t) & 1) ? 1 : -1;
        int b = ((cfg >> (t + 1)) & 1) ? 1 : -1;
        s += a * b;
      }
      numer.add(std::exp(beta * s));
    }
    double p = numer.value() / denom.value();
    entropy.add(-p * std::log(p));
  }
  return entropy.value();
}

}  // namespace oracle
}  // namespace multising
