// Independent reference computations used by the tests. Nothing here calls
// into the library code it checks.
#ifndef SEMCOM_TESTS_ORACLES_HPP
#define SEMCOM_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Gaussian upper tail by composite Simpson integration of the density on [x, x + 12].
inline double gaussian_tail(double x, int intervals = 20000) {
  if (x < 0.0) return 1.0 - gaussian_tail(-x, intervals);
  const double hi = x + 12.0;
  const double h = (hi - x) / intervals;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double sum = pdf(x) + pdf(hi);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * pdf(x + i * h);
  return sum * h / 3.0;
}

// CET reference: P_j proportional to the score in the label's own vocabulary column.
inline Eigen::VectorXd cet(const Eigen::MatrixXd& scores, const std::vector<int>& column) {
  Eigen::VectorXd d(scores.rows());
  for (Eigen::Index j = 0; j < scores.rows(); ++j) d(j) = scores(j, column[static_cast<std::size_t>(j)]);
  const double total = d.sum();
  if (total == 0.0) return Eigen::VectorXd::Constant(d.size(), 1.0 / static_cast<double>(d.size()));
  return d / total;
}

inline double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    dot += u(i) * v(i);
    uu += u(i) * u(i);
    vv += v(i) * v(i);
  }
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

// Straight-line contextual reweighting: clamp, power, multiply, renormalize.
inline Eigen::VectorXd reweight(const Eigen::VectorXd& p, const Eigen::VectorXd& cosines, double tau) {
  Eigen::VectorXd out(p.size());
  double denom = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double ca = std::min(1.0, std::max(1e-6, cosines(j)));
    out(j) = p(j) * std::pow(ca, tau);
    denom += out(j);
  }
  return out / denom;
}

inline int argmax_first(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

// Positive PMI of a symmetric count matrix, rows unit-normalized; empty rows
// become the label's own basis vector.
inline Eigen::MatrixXd ppmi_rows(const Eigen::MatrixXd& counts) {
  const Eigen::Index m = counts.rows();
  const double total = counts.sum();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double ri = counts.row(i).sum();
    for (Eigen::Index j = 0; j < m; ++j) {
      const double cj = counts.col(j).sum();
      if (counts(i, j) <= 0.0 || ri <= 0.0 || cj <= 0.0) continue;
      out(i, j) = std::max(0.0, std::log(counts(i, j) * total / (ri * cj)));
    }
    const double n = out.row(i).norm();
    if (n > 0.0) out.row(i) /= n;
    else out(i, i) = 1.0;
  }
  return out;
}

// Probability that the returned scene is correct, by enumerating every
// accept/reject history of length K.
inline double loop_accuracy_enumerated(double q, double fa, double fr, int k) {
  double acc = 0.0;
  double alive = 1.0;
  for (int round = 1; round <= k; ++round) {
    if (round == k) return acc + alive * q;
    acc += alive * q * (1.0 - fr);
    alive *= q * fr + (1.0 - q) * (1.0 - fa);
  }
  return acc;
}

inline double binomial_sigma(double p, int n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace oracle

#endif
