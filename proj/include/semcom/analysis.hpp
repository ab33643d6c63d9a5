#ifndef SEMCOM_ANALYSIS_HPP
#define SEMCOM_ANALYSIS_HPP

#include <vector>

#include "semcom/context.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

enum class Averaging { Micro, Macro };

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Single-label precision / recall / F1 over the classes present in either list.
PrfScores compute_prf(const std::vector<LabelIndex>& predictions, const std::vector<LabelIndex>& truths,
                      Averaging mode = Averaging::Micro);

struct RevisionRecord {
  bool initially_correct = false;
  bool finally_correct = false;
};

struct CorrectionRates {
  double r_plus = 0.0;
  double r_minus = 0.0;
  int initially_wrong = 0;
  int initially_correct = 0;
  int fixed = 0;
  int broken = 0;
  /// True when a rate had an empty denominator and was reported as 0.
  bool undefined = false;
};

/// r_plus = fixed / initially wrong, r_minus = broken / initially correct.
CorrectionRates rplus_rminus(const std::vector<RevisionRecord>& outcomes);

struct ParetoPoint {
  double tau = 0.0;
  double r_plus = 0.0;
  double r_minus = 0.0;
};

/// Share of initially-wrong (eps_plus) and initially-correct (eps_minus) cases.
struct EpsilonSplit {
  double eps_plus = 0.5;
  double eps_minus = 0.5;
};

EpsilonSplit epsilon_split(int initially_wrong, int initially_correct);

/// One frozen evaluation case: raw distribution, cosines to the context, and the truth.
struct EvalCase {
  ProbabilityVector p;
  Eigen::VectorXd cosines;
  LabelIndex truth = 0;
};

/// Builds an evaluation case from a context; the cosines are computed once here.
EvalCase make_eval_case(const ProbabilityVector& p, const ContextInfo& context,
                        const EmbeddingProvider& provider, const LabelTaxonomy& taxonomy, LabelIndex truth);

std::vector<RevisionRecord> evaluate_at_tau(const std::vector<EvalCase>& pool, double tau);

/// Grid tau_from, tau_from + step, ... up to tau_to (inclusive, computed by index to avoid drift).
std::vector<double> tau_grid(double tau_from, double tau_to, double step);

std::vector<ParetoPoint> pareto_sweep(const std::vector<EvalCase>& pool, const std::vector<double>& taus);

/// a dominates b iff a.r_plus >= b.r_plus and a.r_minus <= b.r_minus with one strict.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

/// Non-dominated points sorted by r_plus (then r_minus, then tau); duplicates of a rate pair are kept once.
std::vector<ParetoPoint> pareto_frontier(const std::vector<ParetoPoint>& points);

/// R = -eps_plus * r_plus + eps_minus * r_minus.
inline double r_metric(double r_plus, double r_minus, const EpsilonSplit& eps) {
  return -eps.eps_plus * r_plus + eps.eps_minus * r_minus;
}

struct TauOptimum {
  double tau = 0.0;
  ParetoPoint point;
  double r = 0.0;
  /// Largest amount by which a frontier point falls below the supporting line (<= 0 when tangent).
  double max_frontier_violation = 0.0;
  bool certificate_holds = false;
};

/// Grid argmin of R (ties to smaller tau) with the supporting-line certificate over the frontier.
TauOptimum optimize_tau(const std::vector<ParetoPoint>& points, const EpsilonSplit& eps);

}  // namespace semcom

#endif  // SEMCOM_ANALYSIS_HPP
