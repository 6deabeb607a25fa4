#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace altnet {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Numerical knobs. Each one can be overridden through the environment so a
// misbehaving instance can be inspected without recompiling:
//   ALTNET_SVD_RTOL   relative singular-value cutoff for pseudoinverses
//   ALTNET_FEAS_TOL   feasibility residual threshold for alternative flows
//   ALTNET_PHASE_TOL  eigenphase grouping / reconstruction threshold
struct Tolerances {
  double svd_rtol = 1e-10;
  double feas_tol = 1e-8;
  double phase_tol = 1e-9;
};

inline double env_or(const char* name, double fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  double x = std::strtod(v, &end);
  if (end == v) throw std::runtime_error(std::string("bad value for ") + name);
  return x;
}

inline const Tolerances& tols() {
  static const Tolerances t{
      env_or("ALTNET_SVD_RTOL", 1e-10),
      env_or("ALTNET_FEAS_TOL", 1e-8),
      env_or("ALTNET_PHASE_TOL", 1e-9),
  };
  return t;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic RNG with portable sampling primitives. The distributions in
// <random> are implementation-defined, so bounded draws and shuffles are done
// by hand: same seed, same stream, any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    for (int i = 0; i < 4; ++i) splitmix64(state_);
  }

  static Rng derived(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x6a09e667f3bcc908ULL + salt + (s << 6) + (s >> 2);
    return Rng(s);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform on [0, n) by rejection
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded(0)");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = std::size_t(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // index draw from unnormalized nonnegative weights
  std::size_t weighted(const std::vector<double>& w) {
    double total = 0;
    for (double x : w) total += x;
    if (total <= 0) throw std::invalid_argument("weighted: empty distribution");
    double r = uniform01() * total;
    double acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (r < acc) return i;
    }
    return w.size() - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace altnet
