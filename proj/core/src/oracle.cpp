#include "polyens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace polyens {

namespace rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t draw(std::uint64_t seed, std::uint64_t sample,
                   std::uint64_t entry, std::uint64_t k) {
  std::uint64_t key = mix(seed ^ mix(sample * 0xA24BAED4963EE407ULL));
  key = mix(key ^ mix(entry * 0x9FB21C651E98DF25ULL));
  return mix(key + k * 0x9E3779B97F4A7C15ULL);
}

double uniform(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void normal_pair(std::uint64_t seed, std::uint64_t sample, std::uint64_t entry,
                 double& g0, double& g1) {
  double u1 = uniform(draw(seed, sample, entry, 0));
  double u2 = uniform(draw(seed, sample, entry, 1));
  double r = std::sqrt(-2.0 * std::log(u1));
  g0 = r * std::cos(2.0 * std::numbers::pi * u2);
  g1 = r * std::sin(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

namespace {

void sort_rows(SampleBatch& batch) {
  for (std::size_t i = 0; i < batch.count; ++i) {
    double* begin = batch.eigenvalues.data() + i * batch.n;
    std::sort(begin, begin + batch.n);
  }
}

}  // namespace

SampleBatch sample_gue_ext(std::span<const double> a, std::size_t count,
                           std::uint64_t seed) {
  if (count < 1) throw PreconditionError("sample_gue_ext: need count >= 1");
  const std::size_t n = a.size();
  SampleBatch batch;
  batch.count = count;
  batch.n = n;
  batch.seed = seed;
  batch.eigenvalues.resize(count * n);

  const double diag_sigma = std::sqrt(0.5);
  const double off_sigma = std::sqrt(0.25);
  ComplexMatrix h(n, n);
  for (std::size_t s = 0; s < count; ++s) {
    std::uint64_t entry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double g0, g1;
      rng::normal_pair(seed, s, entry++, g0, g1);
      h(i, i) = a[i] + diag_sigma * g0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double g0, g1;
        rng::normal_pair(seed, s, entry++, g0, g1);
        Complex w(off_sigma * g0, off_sigma * g1);
        h(i, j) = w;
        h(j, i) = std::conj(w);
      }
    }
    std::vector<double> ev = hermitian_eigenvalues(h);
    std::copy(ev.begin(), ev.end(), batch.eigenvalues.begin() + s * n);
  }
  sort_rows(batch);
  return batch;
}

SampleBatch sample_chgue_ext(std::span<const double> a, unsigned nu,
                             std::size_t count, std::uint64_t seed) {
  if (count < 1) throw PreconditionError("sample_chgue_ext: need count >= 1");
  const std::size_t n = a.size();
  const std::size_t cols = n + nu;
  for (double av : a) {
    if (!(av > 0.0)) {
      throw PreconditionError("sample_chgue_ext: source must be positive");
    }
  }
  SampleBatch batch;
  batch.count = count;
  batch.n = n;
  batch.seed = seed;
  batch.eigenvalues.resize(count * n);

  const double sigma = std::sqrt(0.5);
  std::vector<Complex> x(n * cols);
  ComplexMatrix w(n, n);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        double g0, g1;
        rng::normal_pair(seed, s, i * cols + j, g0, g1);
        Complex e(sigma * g0, sigma * g1);
        if (i == j) e += std::sqrt(a[i]);
        x[i * cols + j] = e;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
          acc += x[i * cols + k] * std::conj(x[j * cols + k]);
        }
        w(i, j) = acc;
      }
    }
    std::vector<double> ev = hermitian_eigenvalues(w);
    std::copy(ev.begin(), ev.end(), batch.eigenvalues.begin() + s * n);
  }
  sort_rows(batch);
  return batch;
}

McEstimate mc_expect_ratio(const SampleBatch& batch,
                           std::span<const Complex> zs,
                           std::span<const Complex> ys) {
  if (batch.count < 2) {
    throw PreconditionError("mc_expect_ratio: need at least two samples");
  }
  for (const Complex& y : ys) {
    if (!off_real_axis(y)) {
      throw PreconditionError("mc_expect_ratio: y on the real axis");
    }
  }
  std::vector<Complex> values(batch.count);
  for (std::size_t s = 0; s < batch.count; ++s) {
    std::span<const double> xs = batch.row(s);
    Complex v = 1.0;
    for (const Complex& z : zs) {
      for (double x : xs) v *= (z - x);
    }
    for (const Complex& y : ys) {
      for (double x : xs) v /= (y - x);
    }
    values[s] = v;
  }
  CompensatedSumComplex mean_acc;
  for (const Complex& v : values) mean_acc.add(v);
  Complex mean = mean_acc.value() / static_cast<double>(batch.count);
  CompensatedSum var_acc;
  for (const Complex& v : values) var_acc.add(std::norm(v - mean));
  double var = var_acc.value() / static_cast<double>(batch.count - 1);
  McEstimate est;
  est.mean = mean;
  est.std_error = std::sqrt(var / static_cast<double>(batch.count));
  est.count = batch.count;
  return est;
}

namespace {

std::vector<Complex> tensor_pass(
    const PolynomialEnsemble& ens, const QuadratureRule& rule,
    std::span<const std::function<Complex(std::span<const double>)>> fs) {
  const std::size_t n = ens.size();
  const std::size_t nodes = rule.size();
  // phi_l at every node, one evaluation each
  std::vector<double> phi_tab(n * nodes);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < nodes; ++k) {
      phi_tab[l * nodes + k] = ens.phi(l, rule.nodes[k]);
    }
  }
  auto phi_det = [&](const std::size_t* idx) -> double {
    switch (n) {
      case 1:
        return phi_tab[idx[0]];
      case 2:
        return phi_tab[idx[0]] * phi_tab[nodes + idx[1]] -
               phi_tab[idx[1]] * phi_tab[nodes + idx[0]];
      default: {
        const double* r0 = phi_tab.data();
        const double* r1 = phi_tab.data() + nodes;
        const double* r2 = phi_tab.data() + 2 * nodes;
        // det over variables k (rows) and weights l (cols):
        // rows are phi_l(x_k) with k = idx[row]
        double a0 = r0[idx[0]], b0 = r1[idx[0]], c0 = r2[idx[0]];
        double a1 = r0[idx[1]], b1 = r1[idx[1]], c1 = r2[idx[1]];
        double a2 = r0[idx[2]], b2 = r1[idx[2]], c2 = r2[idx[2]];
        return a0 * (b1 * c2 - b2 * c1) - b0 * (a1 * c2 - a2 * c1) +
               c0 * (a1 * b2 - a2 * b1);
      }
    }
  };

  std::vector<CompensatedSumComplex> num(fs.size());
  CompensatedSumComplex den;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> xs(n);
  bool more = true;
  while (more) {
    double wprod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      wprod *= rule.weights[idx[i]];
      xs[i] = rule.nodes[idx[i]];
    }
    double delta = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) delta *= xs[i] - xs[j];
    }
    double dens = wprod * delta * phi_det(idx.data());
    if (dens != 0.0) {
      for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        num[fi].add(dens * fs[fi](xs));
      }
      den.add(dens);
    }
    more = [&] {
      for (std::size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < nodes) return true;
        idx[i] = 0;
      }
      return false;
    }();
  }
  std::vector<Complex> out(fs.size());
  Complex norm = den.value();
  for (std::size_t fi = 0; fi < fs.size(); ++fi) {
    out[fi] = num[fi].value() / norm;
  }
  return out;
}

}  // namespace

std::vector<Gated<Complex>> quad_expect_many(
    const PolynomialEnsemble& ens,
    std::span<const std::function<Complex(std::span<const double>)>> fs,
    std::size_t nodes_per_axis) {
  if (ens.size() > 3) {
    throw PreconditionError("quad_expect: tensor oracle limited to N <= 3");
  }
  std::size_t n_axis = std::max<std::size_t>(nodes_per_axis, 120);
  QuadratureRule coarse_rule = ens.make_rule(n_axis);
  QuadratureRule fine_rule = ens.make_rule(2 * n_axis);
  std::vector<Complex> coarse = tensor_pass(ens, coarse_rule, fs);
  std::vector<Complex> fine = tensor_pass(ens, fine_rule, fs);
  std::vector<Gated<Complex>> out;
  out.reserve(fs.size());
  for (std::size_t fi = 0; fi < fs.size(); ++fi) {
    double gap = relative_gap(coarse[fi], fine[fi]);
    if (!(gap <= kConvergenceTol) || !std::isfinite(fine[fi].real()) ||
        !std::isfinite(fine[fi].imag())) {
      throw NonConvergenceError("quad_expect did not converge: gap " +
                                gap_string(gap));
    }
    out.push_back({fine[fi], gap});
  }
  return out;
}

Gated<Complex> quad_expect_full(
    const PolynomialEnsemble& ens,
    const std::function<Complex(std::span<const double>)>& f,
    std::size_t nodes_per_axis) {
  std::vector<std::function<Complex(std::span<const double>)>> fs{f};
  return quad_expect_many(ens, fs, nodes_per_axis)[0];
}

Complex quad_expect(const PolynomialEnsemble& ens,
                    const std::function<Complex(std::span<const double>)>& f,
                    std::size_t nodes_per_axis) {
  return quad_expect_full(ens, f, nodes_per_axis).value;
}

}  // namespace polyens
