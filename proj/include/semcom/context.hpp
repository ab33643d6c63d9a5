#ifndef SEMCOM_CONTEXT_HPP
#define SEMCOM_CONTEXT_HPP

#include <cmath>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "semcom/perception.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

using EmbeddingVector = Eigen::VectorXd;

/// Maps tokens to fixed-dimension vectors. Implementations are immutable.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  /// Throws std::out_of_range for an unknown token.
  virtual EmbeddingVector token_vector(const std::string& token) const = 0;
  virtual std::string name() const = 0;
};

/// Label vectors are rows of the positive-PMI matrix of a label co-occurrence
/// count matrix, normalized to unit length. Dimension equals the label count.
class CooccurrenceEmbedding final : public EmbeddingProvider {
 public:
  CooccurrenceEmbedding(const LabelTaxonomy& taxonomy, const Eigen::MatrixXd& counts);

  int dimension() const override { return static_cast<int>(vectors_.cols()); }
  EmbeddingVector token_vector(const std::string& token) const override;
  std::string name() const override { return "cooccurrence"; }

  const Eigen::MatrixXd& vectors() const { return vectors_; }

 private:
  std::unordered_map<std::string, int> index_;
  Eigen::MatrixXd vectors_;
};

/// Positive pointwise mutual information of a symmetric count matrix.
Eigen::MatrixXd positive_pmi(const Eigen::MatrixXd& counts);

/// Word vectors read from text: `token v1 ... vG` per line, optional `COUNT DIM` header.
/// Multi-word labels are looked up with spaces replaced by underscores.
class FileEmbedding final : public EmbeddingProvider {
 public:
  static FileEmbedding load(const std::string& path);
  static FileEmbedding parse(std::istream& in);

  int dimension() const override { return dim_; }
  EmbeddingVector token_vector(const std::string& token) const override;
  std::string name() const override { return "file"; }
  std::size_t size() const { return index_.size(); }

 private:
  int dim_ = 0;
  std::unordered_map<std::string, int> index_;
  std::vector<EmbeddingVector> vectors_;
};

/// Mean of the token vectors of a phrase.
EmbeddingVector embed_text(const EmbeddingProvider& provider, const std::vector<std::string>& tokens);

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_angle(const Eigen::MatrixBase<DerivedA>& u,
                                       const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  if (u.size() != v.size()) throw std::invalid_argument("cosine_angle: dimension mismatch");
  const Scalar uu = u.squaredNorm();
  const Scalar vv = v.squaredNorm();
  if (uu == Scalar(0) || vv == Scalar(0)) throw std::invalid_argument("cosine_angle: zero vector");
  // u.dot(v) and v.dot(u) accumulate in the same order, so the result is symmetric bit-for-bit
  return u.dot(v) / std::sqrt(uu * vv);
}

inline constexpr double kCosineFloor = 1e-6;

/// clamp(ca, 1e-6, 1) ^ tau.
double contextual_similarity(double ca, double tau);

/// P'_j = cs_j P_j / sum_n P_n cs_n.
template <typename DerivedP, typename DerivedC>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, 1> bayes_reweight(
    const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedC>& cs) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != cs.size()) throw std::invalid_argument("bayes_reweight: size mismatch");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weighted = p.cwiseProduct(cs);
  const Scalar denom = weighted.sum();
  if (!(denom > Scalar(0))) throw std::domain_error("bayes_reweight: zero normalizer");
  return weighted / denom;
}

/// Confident expert identifications of a scene (a multiset of labels).
struct ContextInfo {
  std::vector<LabelIndex> labels;
  bool empty() const { return labels.empty(); }
};

/// Cosine between the context phrase embedding and every label embedding.
Eigen::VectorXd context_cosines(const ContextInfo& context, const EmbeddingProvider& provider,
                                const LabelTaxonomy& taxonomy);

/// Reweighted distribution for precomputed cosines; tau = 0 returns p unchanged.
ProbabilityVector reweight_with_cosines(const ProbabilityVector& p, const Eigen::VectorXd& cosines,
                                        double tau);

LabelIndex revise_identification(const ProbabilityVector& p, const ContextInfo& context,
                                 const EmbeddingProvider& provider, const LabelTaxonomy& taxonomy,
                                 double tau);

}  // namespace semcom

#endif  // SEMCOM_CONTEXT_HPP
