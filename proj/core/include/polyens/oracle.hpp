#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polyens/ensemble.hpp"

namespace polyens {

/// Eigenvalue samples, count x n row-major, each row sorted ascending.
/// Bitwise reproducible for a given seed: every matrix entry is drawn from
/// a counter-based stream keyed by (seed, sample index, entry index).
struct SampleBatch {
  std::size_t count = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> eigenvalues;

  std::span<const double> row(std::size_t i) const {
    return {eigenvalues.data() + i * n, n};
  }
};

struct McEstimate {
  Complex mean;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Eigenvalues of H = A + W with W Hermitian Gaussian matching
/// exp(-Tr W^2): diagonal entries N(0, 1/2), off-diagonal real and
/// imaginary parts N(0, 1/4) each.
SampleBatch sample_gue_ext(std::span<const double> a, std::size_t count,
                           std::uint64_t seed);

/// Eigenvalues of X X^dagger for X = A + W, W complex N x (N+nu) with unit
/// total variance per entry (exp(-|w|^2)); A has sqrt(a_j) on the main
/// diagonal. The matrix model needs integer rectangularity nu >= 0.
SampleBatch sample_chgue_ext(std::span<const double> a, unsigned nu,
                             std::size_t count, std::uint64_t seed);

/// Sample mean and standard error of prod_m D(z_m) / prod_l D(y_l).
McEstimate mc_expect_ratio(const SampleBatch& batch,
                           std::span<const Complex> zs,
                           std::span<const Complex> ys);

/// Ground-truth expectation of a symmetric function by full tensor-product
/// quadrature of f times the joint density over I^N; N <= 3 only. At
/// least 120 nodes per axis, result passes the doubling gate.
Gated<Complex> quad_expect_full(const PolynomialEnsemble& ens,
                                const std::function<Complex(std::span<const double>)>& f,
                                std::size_t nodes_per_axis = 120);
Complex quad_expect(const PolynomialEnsemble& ens,
                    const std::function<Complex(std::span<const double>)>& f,
                    std::size_t nodes_per_axis = 120);

/// Same density pass shared by several integrands (the expensive part of
/// the tensor sweep is the density grid).
std::vector<Gated<Complex>> quad_expect_many(
    const PolynomialEnsemble& ens,
    std::span<const std::function<Complex(std::span<const double>)>> fs,
    std::size_t nodes_per_axis = 120);

namespace rng {

/// splitmix64 finalizer; the basis of all sampling streams.
std::uint64_t mix(std::uint64_t x);

/// Counter-based stream: draw index k of the stream keyed by
/// (seed, sample, entry).
std::uint64_t draw(std::uint64_t seed, std::uint64_t sample,
                   std::uint64_t entry, std::uint64_t k);

/// Uniform in (0, 1).
double uniform(std::uint64_t bits);

/// Standard-normal pair via Box-Muller from draws 2k, 2k+1.
void normal_pair(std::uint64_t seed, std::uint64_t sample, std::uint64_t entry,
                 double& g0, double& g1);

}  // namespace rng

}  // namespace polyens
