/* Transfer-matrix machinery for the one-dimensional +-1 chain with free
 * boundaries: spectral data of M = [[e^{b+h}, e^{-b}], [e^{-b}, e^{b-h}]],
 * chain partition sums, and block probabilities/entropies of the h=0 chain
 * measure. */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "multising/errors.hpp"

namespace multising {

struct SpectralData {
  double beta = 0.0;
  double h = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  std::array<double, 2> boundary_vector{};  // (e^{h/2}, e^{-h/2})
  std::array<double, 2> e_plus{};           // unit eigenvector of lambda_plus
  double overlap = 0.0;                     // (v . e_plus)^2
};

// h = (1/2) log(r/(1-r)); the effective field induced by Bernoulli bias r.
inline double field_from_bias(double r) {
  if (!(r > 0.0) || !(r < 1.0))
    throw BiasOutOfRange("bias must lie strictly between 0 and 1");
  return 0.5 * std::log(r / (1.0 - r));
}

inline SpectralData spectral(double beta, double h) {
  if (!std::isfinite(beta) || !std::isfinite(h))
    throw ConfigError("beta and h must be finite");
  SpectralData sd;
  sd.beta = beta;
  sd.h = h;
  const double sh = std::sinh(h);
  const double ch = std::cosh(h);
  const double root = std::sqrt(sh * sh + std::exp(-4.0 * beta));
  const double eb = std::exp(beta);
  sd.lambda_plus = eb * (ch + root);
  sd.lambda_minus = eb * (ch - root);
  sd.boundary_vector = {std::exp(0.5 * h), std::exp(-0.5 * h)};

  // Two parallel kernel vectors of (M - lambda_plus I); the longer one is
  // the numerically reliable representative.
  const std::array<double, 2> w_a{-std::exp(-beta),
                                  std::exp(h + beta) - sd.lambda_plus};
  const std::array<double, 2> w_b{std::exp(beta - h) - sd.lambda_plus,
                                  -std::exp(-beta)};
  const double na = w_a[0] * w_a[0] + w_a[1] * w_a[1];
  const double nb = w_b[0] * w_b[0] + w_b[1] * w_b[1];
  const std::array<double, 2>& w = (na >= nb) ? w_a : w_b;
  const double norm = std::sqrt(std::max(na, nb));
  if (!(norm > 0.0))
    throw Error("degenerate eigenvector at requested parameters");
  sd.e_plus = {w[0] / norm, w[1] / norm};
  const double dot =
      sd.boundary_vector[0] * sd.e_plus[0] + sd.boundary_vector[1] * sd.e_plus[1];
  sd.overlap = dot * dot;
  return sd;
}

// Z(beta, h, n) = v^T M^{n-1} v over n spins, by iterated matrix-vector
// products. Intended for moderate n; see chain_log_partition for the rest.
inline double chain_partition(double beta, double h, long long n_spins) {
  if (n_spins < 1) throw ConfigError("need at least one spin");
  const double m00 = std::exp(beta + h);
  const double m01 = std::exp(-beta);
  const double m11 = std::exp(beta - h);
  double w0 = std::exp(0.5 * h);
  double w1 = std::exp(-0.5 * h);
  for (long long t = 1; t < n_spins; ++t) {
    double n0 = m00 * w0 + m01 * w1;
    double n1 = m01 * w0 + m11 * w1;
    w0 = n0;
    w1 = n1;
  }
  return std::exp(0.5 * h) * w0 + std::exp(-0.5 * h) * w1;
}

// log Z(beta, h, n); switches to the spectral form once the direct product
// risks overflow.
inline double chain_log_partition(double beta, double h, long long n_spins) {
  if (n_spins < 1) throw ConfigError("need at least one spin");
  const double scale = (std::fabs(beta) + std::fabs(h) + 1.0) *
                       static_cast<double>(n_spins);
  if (n_spins <= 64 && scale < 600.0)
    return std::log(chain_partition(beta, h, n_spins));
  SpectralData sd = spectral(beta, h);
  const double two_cosh_h = 2.0 * std::cosh(h);
  const double k = static_cast<double>(n_spins - 1);
  const double ratio = sd.lambda_minus / sd.lambda_plus;
  const double corr = (two_cosh_h - sd.overlap) * std::pow(ratio, k);
  return k * std::log(sd.lambda_plus) + std::log(sd.overlap + corr);
}

// log E[ e^{beta * sum of n-1 consecutive products} ] over n i.i.d.
// Bernoulli(r) spins: log (r(1-r))^{n/2} Z(beta, h(r), n).
inline double chain_log_expectation(double r, double beta, long long n_spins) {
  const double h = field_from_bias(r);
  return 0.5 * static_cast<double>(n_spins) * std::log(r * (1.0 - r)) +
         chain_log_partition(beta, h, n_spins);
}

// q = e^beta / (2 cosh beta): probability that a bond agrees under the
// field-free chain measure.
inline double bond_agree_probability(double beta) {
  return 1.0 / (1.0 + std::exp(-2.0 * beta));
}

// Free-boundary h=0 chain measure of a contiguous block:
// (1/2) * prod over bonds of q or (1-q).
inline double ising_block_probability(double beta, std::span<const int> block) {
  if (block.empty()) throw EmptyBlock("block must contain at least one spin");
  for (int v : block)
    if (v != 1 && v != -1) throw ConfigError("spins must be +-1");
  const double q = bond_agree_probability(beta);
  double p = 0.5;
  for (std::size_t t = 0; t + 1 < block.size(); ++t)
    p *= (block[t] == block[t + 1]) ? q : (1.0 - q);
  return p;
}

// Binary entropy of the bond distribution, in the numerically stable form
// H(q) = log(2 cosh beta) - beta tanh beta.
inline double bond_entropy(double beta) {
  double l2c;  // log(2 cosh beta) without overflow
  double ab = std::fabs(beta);
  l2c = ab + std::log1p(std::exp(-2.0 * ab));
  return l2c - beta * std::tanh(beta);
}

// Shannon entropy of a length-k block: log 2 + (k-1) H(q).
inline double ising_block_entropy(double beta, long long k) {
  if (k < 1) throw EmptyBlock("block length must be >= 1");
  return std::log(2.0) + static_cast<double>(k - 1) * bond_entropy(beta);
}

}  // namespace multising
