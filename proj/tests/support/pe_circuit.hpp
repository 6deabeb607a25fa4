#pragma once

// Phase-estimation references for tests: direct power iteration (no
// eigendecomposition) and a two-stage Monte-Carlo sampler of the measurement
// outcome.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "altnet/common.hpp"
#include "altnet/walk.hpp"

namespace pe_ref {

struct Direct {
  double p_zero = 0;
  altnet::CVec post;
};

// (1/T) sum_{t<T} U^t psi is the unnormalized zero-outcome state; its squared
// norm is the outcome probability
inline Direct pe_zero_direct(const altnet::CMat& U, const altnet::CVec& psi,
                             long T) {
  altnet::CVec cur = psi;
  altnet::CVec acc = psi;
  for (long t = 1; t < T; ++t) {
    cur = U * cur;
    acc += cur;
  }
  acc /= double(T);
  Direct out;
  out.p_zero = acc.squaredNorm();
  out.post = acc.norm() > 0 ? altnet::CVec(acc / acc.norm()) : acc;
  return out;
}

// sample the phase register: eigenspace j with weight |Pi_j psi|^2, then the
// zero outcome with the geometric-sum probability |c_j|^2
inline double mc_zero_frequency(const altnet::Spectrum& sp,
                                const altnet::CVec& psi, long T, int samples,
                                altnet::Rng& rng) {
  std::vector<double> wj(sp.phases.size());
  std::vector<double> pj(sp.phases.size());
  for (std::size_t j = 0; j < sp.phases.size(); ++j) {
    wj[j] = (sp.block(j).adjoint() * psi).squaredNorm();
    double th = sp.phases[j];
    if (th == 0.0) {
      pj[j] = 1.0;
    } else {
      double num = std::sin(double(T) * th / 2.0);
      double den = double(T) * std::sin(th / 2.0);
      pj[j] = (num * num) / (den * den);
    }
  }
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    std::size_t j = rng.weighted(wj);
    if (rng.bernoulli(pj[j])) ++hits;
  }
  return double(hits) / double(samples);
}

}  // namespace pe_ref
