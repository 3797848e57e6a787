#include "tlkit/l1fit.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tlkit/kernels.hpp"
#include "tlkit/moments.hpp"
#include "tlkit/simplex.hpp"

namespace tlkit {

nlohmann::ordered_json FittedModel::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [m, c] : poly.terms()) terms.push_back({{"index", m.key(dim)}, {"coef", c}});
  j["terms"] = std::move(terms);
  if (threshold) j["threshold"] = *threshold;
  else j["threshold"] = nullptr;
  j["empirical_l1"] = empirical_l1;
  j["empirical_01"] = empirical_01;
  return j;
}

namespace {

bool prefix_closed(const std::vector<MultiIndex>& features) {
  std::set<MultiIndex, GrlexLess> seen;
  for (const auto& a : features) {
    if (a.degree() > 0) {
      const auto low = a.lowered(a.last_coord());
      if (low.degree() > 0 && !seen.count(low)) return false;
    }
    seen.insert(a);
  }
  return true;
}

}  // namespace

std::vector<double> feature_matrix(const std::vector<MultiIndex>& features,
                                   const LabeledDataset& data) {
  if (prefix_closed(features))
    return kernels::monomial_matrix(data.x.data(), data.size(), data.dim, make_plan(features));
  const std::size_t f = features.size();
  std::vector<double> out(data.size() * f);
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < f; ++j) out[i * f + j] = features[j].eval(data.row(i));
  return out;
}

FittedModel fit_l1(const RegressionProblem& problem) {
  if (!problem.samples) throw std::invalid_argument("fit_l1: no samples");
  const auto& data = *problem.samples;
  if (data.empty()) throw std::invalid_argument("fit_l1: no samples");
  if (problem.features.empty()) throw std::invalid_argument("fit_l1: empty feature set");
  if (problem.features.size() > kMaxFeatures) throw std::length_error("fit_l1: feature count exceeds 50000");
  for (const auto& a : problem.features) {
    if (a.degree() > problem.degree) throw std::invalid_argument("fit_l1: feature above the stated degree");
    if (!a.entries().empty() && a.last_coord() >= data.dim)
      throw std::invalid_argument("fit_l1: feature coordinate beyond dimension");
  }

  FittedModel model;
  model.dim = data.dim;
  const bool constant_labels = std::all_of(data.y.begin(), data.y.end(), [&](int v) { return v == data.y[0]; });
  const bool has_constant = std::any_of(problem.features.begin(), problem.features.end(),
                                        [](const MultiIndex& a) { return a.degree() == 0; });
  if (constant_labels && has_constant) {
    model.poly.add(MultiIndex{}, data.y[0]);
    model.empirical_l1 = 0.0;
    return model;
  }

  const std::size_t m = data.size(), f = problem.features.size();
  const auto A = feature_matrix(problem.features, data);
  std::vector<double> y(data.y.begin(), data.y.end());
  const auto sol = solve_lad(A, m, f, y);
  for (std::size_t j = 0; j < f; ++j) model.poly.add(problem.features[j], sol.coef[j]);
  model.empirical_l1 = sol.objective / static_cast<double>(m);
  model.lp_iterations = sol.iterations;
  return model;
}

FittedModel best_threshold(FittedModel model, const LabeledDataset& samples) {
  if (samples.empty()) throw std::invalid_argument("best_threshold: no samples");
  const std::size_t m = samples.size();
  std::vector<std::pair<double, int>> pv(m);
  for (std::size_t i = 0; i < m; ++i) pv[i] = {model.poly.eval(samples.row(i)), samples.label(i)};
  std::sort(pv.begin(), pv.end());

  // errors(tau) = #{y=+1, P<tau} + #{y=-1, P>=tau}; start with tau below everything
  std::size_t neg_total = 0;
  for (const auto& [p, y] : pv) neg_total += y < 0;
  std::size_t err = neg_total;
  double best_tau = pv.front().first - 1.0;
  std::size_t best_err = err;
  std::size_t i = 0;
  while (i < m) {
    const double p = pv[i].first;
    // tau = p: nothing below p has changed side relative to the previous candidate
    if (err < best_err) {
      best_err = err;
      best_tau = p;
    }
    std::size_t j = i;
    while (j < m && pv[j].first == p) {
      err += pv[j].second > 0 ? 1 : 0;
      err -= pv[j].second < 0 ? 1 : 0;
      ++j;
    }
    // candidate just above p: midpoint to the next value, or max + 1
    const double next = j < m ? 0.5 * (p + pv[j].first) : p + 1.0;
    if (err < best_err) {
      best_err = err;
      best_tau = next;
    }
    i = j;
  }
  model.threshold = best_tau;
  model.empirical_01 = static_cast<double>(best_err) / static_cast<double>(m);
  return model;
}

int predict(const FittedModel& model, std::span<const double> x) {
  if (!model.threshold) throw std::logic_error("predict: threshold not set");
  return model.poly.eval(x) >= *model.threshold ? 1 : -1;
}

double error_rate(const FittedModel& model, const LabeledDataset& data) {
  if (data.empty()) throw std::invalid_argument("error_rate: empty data");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) wrong += predict(model, data.row(i)) != data.label(i);
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace tlkit
