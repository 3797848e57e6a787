#include "tlkit/cube_pair.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tlkit/kernels.hpp"

namespace tlkit {

int cube_k_formula(double eps) {
  const double l = std::log(1.0 / eps);
  return std::max(1, static_cast<int>(std::ceil(l * l * l * l / (50.0 * std::pow(eps, 4)) - 1e-12)));
}

int cube_degree_formula(double eps) {
  const double l = std::log(1.0 / eps);
  const double v = std::ceil(20.0 * l * l / std::pow(eps, 4) - 1e-12);
  return v > 1e9 ? 1000000000 : std::max(1, static_cast<int>(v));
}

int dl_k_formula(double eps) {
  return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps) - 1e-12)));
}

nlohmann::ordered_json CubeParams::to_json() const {
  nlohmann::ordered_json j;
  j["eps"] = eps;
  j["n"] = n;
  j["k"] = k;
  j["degree"] = degree;
  j["tv_tol"] = tv_tol;
  j["learner_samples"] = learner_samples;
  return j;
}

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
}

void apply_common(CubeParams& p, const CubeOverrides& ov) {
  if (ov.k) {
    if (*ov.k < 1) throw std::invalid_argument("k override must be positive");
    if (*ov.k != p.k) p.deviations.push_back("k overridden: " + std::to_string(p.k) + " -> " + std::to_string(*ov.k));
    p.k = *ov.k;
  }
  if (static_cast<std::size_t>(p.k) > p.n) throw std::invalid_argument("k exceeds n");
  p.tv_tol = p.eps / 4.0;
  if (ov.tv_tol) {
    if (!(*ov.tv_tol > 0.0)) throw std::invalid_argument("tv_tol must be positive");
    p.tv_tol = *ov.tv_tol;
  }
}

}  // namespace

CubeParams derive_cube_params(double eps, std::size_t n, const CubeOverrides& ov) {
  check_eps(eps);
  if (n < 1 || n > 64) throw std::invalid_argument("cube dimension must lie in [1, 64]");
  CubeParams p;
  p.eps = eps;
  p.n = n;
  p.k = cube_k_formula(eps);
  p.degree = std::min<int>(cube_degree_formula(eps), static_cast<int>(n));
  if (ov.degree) {
    if (*ov.degree < 1) throw std::invalid_argument("degree override must be positive");
    const int d = std::min<int>(*ov.degree, static_cast<int>(n));
    if (d != p.degree) p.deviations.push_back("degree overridden: " + std::to_string(p.degree) + " -> " + std::to_string(d));
    p.degree = d;
  }
  apply_common(p, ov);
  const double features = count_indices(n, p.degree, 0, true);
  p.learner_samples = static_cast<std::uint64_t>(std::ceil(10.0 * features / (eps * eps)));
  if (ov.learner_samples) p.learner_samples = *ov.learner_samples;
  return p;
}

CubeParams derive_dl_params(double eps, std::size_t n, const CubeOverrides& ov) {
  check_eps(eps);
  if (n < 1 || n > 64) throw std::invalid_argument("cube dimension must lie in [1, 64]");
  CubeParams p;
  p.eps = eps;
  p.n = n;
  p.k = dl_k_formula(eps);
  p.degree = 0;
  apply_common(p, ov);
  p.learner_samples = dl_sample_count(eps, n);
  if (ov.learner_samples) {
    if (*ov.learner_samples != p.learner_samples)
      p.deviations.push_back("decision-list sample count overridden: " + std::to_string(p.learner_samples) + " -> " +
                             std::to_string(*ov.learner_samples));
    p.learner_samples = *ov.learner_samples;
  }
  return p;
}

std::vector<std::uint64_t> subsets_up_to(std::size_t n, int k) {
  if (k < 1) throw std::invalid_argument("subsets_up_to: k must be positive");
  if (static_cast<std::size_t>(k) > n) throw std::invalid_argument("subsets_up_to: k exceeds n");
  if (n > 64) throw std::invalid_argument("subsets_up_to: n above 64");
  if (count_indices(n, k, 1, true) > 2e6) throw std::length_error("subsets_up_to: too many subsets");
  std::vector<std::uint64_t> out;
  for (int s = 1; s <= k; ++s) {
    std::uint64_t v = (s == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << s) - 1);
    const std::uint64_t limit = n == 64 ? 0 : (std::uint64_t{1} << n);
    for (;;) {
      out.push_back(v);
      // Gosper: next integer with the same popcount, i.e. next subset in colex order
      const std::uint64_t c = v & (~v + 1);
      const std::uint64_t r = v + c;
      if (r == 0) break;
      const std::uint64_t next = (((r ^ v) >> 2) / c) | r;
      if (limit != 0 && next >= limit) break;
      v = next;
    }
  }
  return out;
}

namespace {

template <class BiasFn>
BiasTable bias_impl(const LabeledDataset& data, int k, BiasFn fn) {
  if (data.empty()) throw std::invalid_argument("kwise_bias_table: no samples");
  if (k < 1 || static_cast<std::size_t>(k) > data.dim) throw std::invalid_argument("kwise_bias_table: need 1 <= k <= n");
  BiasTable t;
  t.n = data.dim;
  t.k = k;
  t.subsets = subsets_up_to(data.dim, k);
  t.sample_count = data.size();
  const auto packed = kernels::pack_signs(data.x.data(), data.size(), data.dim);
  t.bias = fn(packed, t.subsets);
  return t;
}

MultiIndex subset_index(std::uint64_t mask) {
  MultiIndex m;
  for (std::uint32_t i = 0; i < 64; ++i)
    if (mask >> i & 1u) m = m * MultiIndex::unit(i);
  return m;
}

}  // namespace

BiasTable kwise_bias_table(const LabeledDataset& data, int k) {
  return bias_impl(data, k, [](auto& p, auto& s) { return kernels::parity_biases(p, s); });
}

BiasTable kwise_bias_table_serial(const LabeledDataset& data, int k) {
  return bias_impl(data, k, [](auto& p, auto& s) { return kernels::parity_biases_serial(p, s); });
}

std::uint64_t kwise_sample_count(std::size_t subsets, double tv_tol) {
  return static_cast<std::uint64_t>(std::ceil(2.0 * std::log(20.0 * static_cast<double>(subsets)) / (tv_tol * tv_tol)));
}

double kwise_threshold(std::size_t subsets, std::uint64_t m) {
  return std::sqrt(2.0 * std::log(20.0 * static_cast<double>(subsets)) / static_cast<double>(m));
}

Verdict run_kwise_tester(Stream& stream, const CubeParams& p) {
  if (stream.dim() != p.n) throw std::invalid_argument("run_kwise_tester: stream dimension differs from n");
  const std::size_t K = subsets_up_to(p.n, p.k).size();
  const std::uint64_t m = kwise_sample_count(K, p.tv_tol);
  const auto data = stream.take(m);
  const auto table = kwise_bias_table(data, p.k);
  Verdict v;
  v.dim = p.n;
  v.samples_used = data.size();
  v.threshold = kwise_threshold(K, m);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < table.bias.size(); ++i)
    if (std::abs(table.bias[i]) > std::abs(table.bias[worst])) worst = i;
  v.gap = std::abs(table.bias[worst]);
  v.worst_index = subset_index(table.subsets[worst]);
  v.accept = v.gap <= v.threshold;
  v.stage = v.accept ? Stage::ok : Stage::moments;
  return v;
}

CubeLearnerResult run_cube_halfspace_learner(Stream& stream, const CubeParams& p, std::size_t feature_cap) {
  if (stream.dim() != p.n) throw std::invalid_argument("run_cube_halfspace_learner: stream dimension differs from n");
  if (count_indices(p.n, p.degree, 0, true) > static_cast<double>(feature_cap))
    throw std::length_error("run_cube_halfspace_learner: multilinear basis exceeds the feature cap");
  const auto data = stream.take(p.learner_samples);
  RegressionProblem prob{grlex_indices(p.n, p.degree, 0, true), &data, p.degree};
  CubeLearnerResult out;
  out.model = best_threshold(fit_l1(prob), data);
  out.report.samples_drawn = data.size();
  out.report.samples_kept = data.size();
  out.report.features = prob.features.size();
  out.report.degree = p.degree;
  out.report.empirical_l1 = out.model.empirical_l1;
  out.report.empirical_01 = out.model.empirical_01;
  out.report.threshold = *out.model.threshold;
  out.report.lp_iterations = out.model.lp_iterations;
  return out;
}

// ---- decision lists ----

nlohmann::ordered_json DecisionList::to_json() const {
  nlohmann::ordered_json j;
  std::vector<std::uint32_t> one_based(order.size());
  std::transform(order.begin(), order.end(), one_based.begin(), [](std::uint32_t c) { return c + 1; });
  j["order"] = one_based;
  j["bits"] = bits;
  j["values"] = values;
  j["default"] = default_output;
  return j;
}

DecisionList DecisionList::from_json(const nlohmann::json& j) {
  DecisionList dl;
  for (auto c : j.at("order").get<std::vector<std::uint32_t>>()) {
    if (c < 1) throw std::invalid_argument("decision list coordinates are 1-based");
    dl.order.push_back(c - 1);
  }
  dl.bits = j.at("bits").get<std::vector<int>>();
  dl.values = j.at("values").get<std::vector<int>>();
  dl.default_output = j.value("default", -1);
  if (dl.bits.size() != dl.order.size() || dl.values.size() != dl.order.size())
    throw std::invalid_argument("decision list fields must have equal length");
  return dl;
}

int eval_decision_list(const DecisionList& dl, std::span<const double> x) {
  for (std::size_t i = 0; i < dl.order.size(); ++i)
    if (static_cast<int>(x[dl.order[i]]) == dl.bits[i]) return dl.values[i];
  return dl.default_output;
}

nlohmann::ordered_json DecisionListFit::to_json() const {
  nlohmann::ordered_json j;
  j["list"] = list.to_json();
  j["empirical_error"] = empirical_error;
  j["samples"] = samples;
  j["candidates"] = candidates;
  return j;
}

std::uint64_t dl_sample_count(double eps, std::size_t n) {
  const double k = dl_k_formula(eps);
  const double ln = std::max(1.0, std::log2(static_cast<double>(n)));
  return static_cast<std::uint64_t>(std::ceil(100.0 / (eps * eps) * k * k * k * ln));
}

namespace {

std::vector<std::uint32_t> ksubsets_flat(std::size_t n, int k) {
  std::vector<std::uint32_t> flat;
  for (auto mask : subsets_up_to(n, k)) {
    if (std::popcount(mask) != k) continue;
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask >> i & 1u) flat.push_back(i);
  }
  return flat;
}

struct Candidate {
  std::size_t errors = std::numeric_limits<std::size_t>::max();
  std::size_t subset = 0;
  std::vector<int> perm;
  unsigned bits = 0, values = 0;
};

DecisionList make_list(const std::uint32_t* coords, const std::vector<int>& perm, unsigned bits, unsigned values) {
  DecisionList dl;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    dl.order.push_back(coords[perm[i]]);
    dl.bits.push_back(bits >> i & 1u ? 1 : -1);
    dl.values.push_back(values >> i & 1u ? 1 : -1);
  }
  return dl;
}

void check_dl(const LabeledDataset& data, int k) {
  if (data.empty()) throw std::invalid_argument("fit_decision_list: no samples");
  if (k < 1 || k > 4) throw std::invalid_argument("fit_decision_list: k must lie in [1, 4]");
  if (static_cast<std::size_t>(k) > data.dim) throw std::invalid_argument("fit_decision_list: k exceeds n");
}

std::size_t lists_per_subset(int k) {
  std::size_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::size_t>(i);
  return f << (2 * k);
}

}  // namespace

DecisionListFit fit_decision_list(const LabeledDataset& data, int k) {
  check_dl(data, k);
  const auto flat = ksubsets_flat(data.dim, k);
  const std::size_t ns = flat.size() / static_cast<std::size_t>(k);
  const auto packed = kernels::pack_signs(data.x.data(), data.size(), data.dim);
  const auto hist = kernels::pattern_histograms(packed, data.y, flat, k);
  const std::size_t patterns = std::size_t{1} << k;

  std::vector<Candidate> best(ns);
  const auto nsi = static_cast<std::int64_t>(ns);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t si = 0; si < nsi; ++si) {
    const auto s = static_cast<std::size_t>(si);
    const std::uint32_t* h = hist.data() + s * patterns * 2;
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    Candidate& b = best[s];
    b.subset = s;
    do {
      for (unsigned bits = 0; bits < patterns; ++bits)
        for (unsigned values = 0; values < patterns; ++values) {
          std::size_t err = 0;
          for (unsigned p = 0; p < patterns; ++p) {
            int out = -1;
            for (int i = 0; i < k; ++i) {
              // pattern bit set iff the coordinate is -1; list bit set iff it tests +1
              const unsigned xbit = p >> perm[static_cast<std::size_t>(i)] & 1u;
              const unsigned want = bits >> i & 1u;
              if (xbit != want) {
                out = values >> i & 1u ? 1 : -1;
                break;
              }
            }
            err += h[p * 2 + (out > 0 ? 0 : 1)];
          }
          if (err < b.errors) {
            b.errors = err;
            b.perm = perm;
            b.bits = bits;
            b.values = values;
          }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::size_t win = 0;
  for (std::size_t s = 1; s < ns; ++s)
    if (best[s].errors < best[win].errors) win = s;
  DecisionListFit fit;
  fit.list = make_list(flat.data() + win * static_cast<std::size_t>(k), best[win].perm, best[win].bits, best[win].values);
  fit.empirical_error = static_cast<double>(best[win].errors) / static_cast<double>(data.size());
  fit.samples = data.size();
  fit.candidates = ns * lists_per_subset(k);
  return fit;
}

DecisionListFit fit_decision_list_serial(const LabeledDataset& data, int k) {
  check_dl(data, k);
  const auto flat = ksubsets_flat(data.dim, k);
  const std::size_t ns = flat.size() / static_cast<std::size_t>(k);
  const unsigned patterns = 1u << k;
  DecisionListFit fit;
  std::size_t best_err = std::numeric_limits<std::size_t>::max();
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (unsigned bits = 0; bits < patterns; ++bits)
        for (unsigned values = 0; values < patterns; ++values) {
          const auto dl = make_list(flat.data() + s * static_cast<std::size_t>(k), perm, bits, values);
          std::size_t err = 0;
          for (std::size_t i = 0; i < data.size(); ++i) err += eval_decision_list(dl, data.row(i)) != data.label(i);
          if (err < best_err) {
            best_err = err;
            fit.list = dl;
          }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  fit.empirical_error = static_cast<double>(best_err) / static_cast<double>(data.size());
  fit.samples = data.size();
  fit.candidates = ns * lists_per_subset(k);
  return fit;
}

DecisionListFit run_decision_list_learner(Stream& stream, double eps, std::optional<std::uint64_t> sample_cap) {
  check_eps(eps);
  std::uint64_t m = dl_sample_count(eps, stream.dim());
  if (sample_cap) m = std::min(m, *sample_cap);
  return fit_decision_list(stream.take(m), dl_k_formula(eps));
}

Verdict run_decision_list_tester(Stream& stream, double eps) {
  return run_kwise_tester(stream, derive_dl_params(eps, stream.dim()));
}

// ---- exact k-wise uniform families ----

namespace {

LabeledDataset from_columns(const std::vector<std::uint32_t>& cols, int bits) {
  const std::size_t n = cols.size();
  LabeledDataset out(n);
  std::vector<double> row(n);
  for (std::uint32_t s = 0; s < (1u << bits); ++s) {
    for (std::size_t i = 0; i < n; ++i) row[i] = std::popcount(s & cols[i]) & 1 ? -1.0 : 1.0;
    out.push(row, 1);
  }
  return out;
}

unsigned gf16_mul(unsigned a, unsigned b) {
  unsigned r = 0;
  for (int i = 0; i < 4; ++i) {
    if (b >> i & 1u) r ^= a << i;
  }
  for (int i = 7; i >= 4; --i)
    if (r >> i & 1u) r ^= 0x13u << (i - 4);  // x^4 + x + 1
  return r & 0xfu;
}

}  // namespace

LabeledDataset kwise_family_odd_weight(int r) {
  if (r < 2 || r > 16) throw std::invalid_argument("kwise_family_odd_weight: r must lie in [2, 16]");
  std::vector<std::uint32_t> cols;
  for (std::uint32_t c = 1; c < (1u << r); ++c)
    if (std::popcount(c) & 1) cols.push_back(c);
  return from_columns(cols, r);
}

LabeledDataset kwise_family_bch5() {
  std::vector<std::uint32_t> cols;
  for (unsigned a = 1; a < 16; ++a) {
    const unsigned a3 = gf16_mul(a, gf16_mul(a, a));
    cols.push_back(1u | (a << 1) | (a3 << 5));
  }
  return from_columns(cols, 9);
}

}  // namespace tlkit
