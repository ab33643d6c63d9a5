#include "semcom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace semcom {

PrfScores compute_prf(const std::vector<LabelIndex>& predictions, const std::vector<LabelIndex>& truths,
                      Averaging mode) {
  if (predictions.size() != truths.size()) throw std::invalid_argument("compute_prf: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("compute_prf: empty input");

  struct Counts {
    long tp = 0, fp = 0, fn = 0;
  };
  std::map<LabelIndex, Counts> per_class;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (predictions[i] == truths[i]) {
      ++per_class[truths[i]].tp;
    } else {
      ++per_class[predictions[i]].fp;
      ++per_class[truths[i]].fn;
    }
  }
  auto f1_of = [](double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; };
  auto ratio = [](long num, long den) { return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0; };

  PrfScores out;
  if (mode == Averaging::Micro) {
    Counts total;
    for (const auto& [label, c] : per_class) {
      total.tp += c.tp;
      total.fp += c.fp;
      total.fn += c.fn;
    }
    out.precision = ratio(total.tp, total.tp + total.fp);
    out.recall = ratio(total.tp, total.tp + total.fn);
    out.f1 = f1_of(out.precision, out.recall);
    return out;
  }
  for (const auto& [label, c] : per_class) {
    const double p = ratio(c.tp, c.tp + c.fp);
    const double r = ratio(c.tp, c.tp + c.fn);
    out.precision += p;
    out.recall += r;
    out.f1 += f1_of(p, r);
  }
  const auto classes = static_cast<double>(per_class.size());
  out.precision /= classes;
  out.recall /= classes;
  out.f1 /= classes;
  return out;
}

CorrectionRates rplus_rminus(const std::vector<RevisionRecord>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("rplus_rminus: empty outcome set");
  CorrectionRates rates;
  for (const auto& o : outcomes) {
    if (o.initially_correct) {
      ++rates.initially_correct;
      rates.broken += o.finally_correct ? 0 : 1;
    } else {
      ++rates.initially_wrong;
      rates.fixed += o.finally_correct ? 1 : 0;
    }
  }
  rates.undefined = rates.initially_wrong == 0 || rates.initially_correct == 0;
  if (rates.initially_wrong > 0) rates.r_plus = static_cast<double>(rates.fixed) / rates.initially_wrong;
  if (rates.initially_correct > 0)
    rates.r_minus = static_cast<double>(rates.broken) / rates.initially_correct;
  return rates;
}

EpsilonSplit epsilon_split(int initially_wrong, int initially_correct) {
  const int total = initially_wrong + initially_correct;
  if (initially_wrong < 0 || initially_correct < 0 || total == 0)
    throw std::invalid_argument("epsilon_split: need a non-empty pool");
  EpsilonSplit eps;
  eps.eps_plus = static_cast<double>(initially_wrong) / total;
  eps.eps_minus = 1.0 - eps.eps_plus;
  return eps;
}

EvalCase make_eval_case(const ProbabilityVector& p, const ContextInfo& context,
                        const EmbeddingProvider& provider, const LabelTaxonomy& taxonomy, LabelIndex truth) {
  if (context.empty()) throw std::invalid_argument("evaluation case needs a non-empty context");
  return {p, context_cosines(context, provider, taxonomy), truth};
}

std::vector<RevisionRecord> evaluate_at_tau(const std::vector<EvalCase>& pool, double tau) {
  std::vector<RevisionRecord> records;
  records.reserve(pool.size());
  for (const auto& c : pool) {
    const bool before = argmax_lowest(c.p) == c.truth;
    const bool after = argmax_lowest(reweight_with_cosines(c.p, c.cosines, tau)) == c.truth;
    records.push_back({before, after});
  }
  return records;
}

std::vector<double> tau_grid(double tau_from, double tau_to, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("tau grid step must be positive");
  if (tau_to < tau_from) throw std::invalid_argument("tau grid is empty");
  const auto n = static_cast<long>(std::floor((tau_to - tau_from) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n + 1));
  // snap to 12 decimals so 3 * 0.025 prints as 0.075
  for (long i = 0; i <= n; ++i)
    grid.push_back(std::round((tau_from + static_cast<double>(i) * step) * 1e12) / 1e12);
  return grid;
}

std::vector<ParetoPoint> pareto_sweep(const std::vector<EvalCase>& pool, const std::vector<double>& taus) {
  if (pool.empty()) throw std::invalid_argument("pareto_sweep: empty evaluation pool");
  std::vector<ParetoPoint> points;
  points.reserve(taus.size());
  for (double tau : taus) {
    const CorrectionRates rates = rplus_rminus(evaluate_at_tau(pool, tau));
    points.push_back({tau, rates.r_plus, rates.r_minus});
  }
  return points;
}

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.r_plus >= b.r_plus && a.r_minus <= b.r_minus && (a.r_plus > b.r_plus || a.r_minus < b.r_minus);
}

std::vector<ParetoPoint> pareto_frontier(const std::vector<ParetoPoint>& points) {
  std::vector<ParetoPoint> front;
  for (const auto& candidate : points) {
    const bool dominated = std::any_of(points.begin(), points.end(),
                                       [&](const ParetoPoint& other) { return dominates(other, candidate); });
    if (dominated) continue;
    const bool duplicate = std::any_of(front.begin(), front.end(), [&](const ParetoPoint& kept) {
      return kept.r_plus == candidate.r_plus && kept.r_minus == candidate.r_minus;
    });
    if (!duplicate) front.push_back(candidate);
  }
  std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.r_plus != b.r_plus) return a.r_plus < b.r_plus;
    if (a.r_minus != b.r_minus) return a.r_minus < b.r_minus;
    return a.tau < b.tau;
  });
  return front;
}

TauOptimum optimize_tau(const std::vector<ParetoPoint>& points, const EpsilonSplit& eps) {
  if (points.empty()) throw std::invalid_argument("optimize_tau: no points");
  TauOptimum best;
  bool have = false;
  for (const auto& p : points) {
    const double r = r_metric(p.r_plus, p.r_minus, eps);
    if (!have || r < best.r || (r == best.r && p.tau < best.tau)) {
      best.tau = p.tau;
      best.point = p;
      best.r = r;
      have = true;
    }
  }
  // Line through the optimum in (-R+, R-) coordinates with slope -eps+/eps-:
  // R-(x) = -(eps+/eps-) x + R*/eps-. A point lies on or above it iff its R >= R*.
  best.max_frontier_violation = -std::numeric_limits<double>::infinity();
  for (const auto& p : pareto_frontier(points)) {
    const double violation = eps.eps_minus > 0.0
                                 ? (best.r - r_metric(p.r_plus, p.r_minus, eps)) / eps.eps_minus
                                 : best.r - r_metric(p.r_plus, p.r_minus, eps);
    best.max_frontier_violation = std::max(best.max_frontier_violation, violation);
  }
  best.certificate_holds = best.max_frontier_violation <= 1e-9;
  return best;
}

}  // namespace semcom
