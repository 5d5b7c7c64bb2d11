#include "rqcm/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "rqcm/errors.hpp"
#include "rqcm/spectra.hpp"

namespace rqcm::stats {

double Histogram::mass() const {
  double m = 0.0;
  for (std::size_t i = 0; i < bins(); ++i) m += density[i] * width(i);
  return m;
}

Histogram histogram(std::span<const double> values, int bins,
                    std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  double lo = 0.0, hi = 1.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(hi > lo)) throw DomainError("histogram range must have hi > lo");
  } else if (!values.empty()) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }

  Histogram h;
  h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.bin_edges[i] = lo + (hi - lo) * i / bins;
  h.bin_edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  h.density.assign(static_cast<std::size_t>(bins), 0.0);

  const double scale = bins / (hi - lo);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto i = static_cast<std::int64_t>((v - lo) * scale);
    i = std::clamp<std::int64_t>(i, 0, bins - 1);
    // Floating-point rounding of the index can be off by one near an edge.
    if (v < h.bin_edges[i] && i > 0) --i;
    else if (i + 1 < bins && v >= h.bin_edges[i + 1]) ++i;
    ++h.counts[i];
    ++h.total;
  }
  if (h.total > 0) {
    for (std::size_t i = 0; i < h.bins(); ++i) {
      h.density[i] = static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * h.width(i));
    }
  }
  return h;
}

double l1_distance(const Histogram& h, const std::function<double(double)>& f) {
  double d = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) d += std::abs(h.density[i] - f(h.mid(i))) * h.width(i);
  return d;
}

double l1_distance(const Histogram& h, const freeprob::DensityCurve& f) {
  return l1_distance(h, [&f](double x) { return f(x); });
}

const char* to_string(Observable o) {
  switch (o) {
    case Observable::spectrum: return "spectrum";
    case Observable::symplectic: return "symplectic";
    case Observable::ppt: return "ppt";
    case Observable::separability: return "separability";
    case Observable::max_k: return "max_k";
    case Observable::purity: return "purity";
  }
  return "unknown";
}

std::optional<Observable> observable_from_string(const std::string& s) {
  for (Observable o : {Observable::spectrum, Observable::symplectic, Observable::ppt,
                       Observable::separability, Observable::max_k, Observable::purity}) {
    if (s == to_string(o)) return o;
  }
  return std::nullopt;
}

void SweepConfig::validate() const {
  ensemble::GoeSpec{n, sigma, normalized}.validate();
  partition.validate(n);
  if (samples < 1) throw DomainError("a sweep needs at least one sample");
  if (k_cap < 2) throw DomainError("k_cap must be >= 2");
  if (bins < 1) throw DomainError("bins must be >= 1");
}

MeanVariance mean_variance(std::span<const double> values) {
  MeanVariance mv;
  mv.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return mv;
  double sum = 0.0;
  for (double v : values) sum += v;
  mv.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mv.mean) * (v - mv.mean);
    mv.variance = ss / static_cast<double>(values.size() - 1);
  }
  return mv;
}

std::optional<double> SweepSummary::fraction(const std::string& key) const {
  for (const auto& [k, v] : fractions) {
    if (k == key) return v;
  }
  return std::nullopt;
}

int sweep_threads() {
  if (const char* env = std::getenv("RQCM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct SampleOutput {
  SampleRecord record;
  std::vector<double> spectrum;
  std::vector<double> symplectic;
};

SampleOutput run_one(const SweepConfig& cfg, std::int64_t index) {
  SampleOutput out;
  SampleRecord& r = out.record;
  r.index = index;
  r.seed = {cfg.seed, static_cast<std::uint64_t>(index)};
  const auto has = [&](Observable o) { return cfg.what.count(o) > 0; };

  try {
    const QuantumCovarianceMatrix s = ensemble::sample_rqcm({cfg.n, cfg.sigma, cfg.normalized}, r.seed);
    r.shift = s.shift().value_or(0.0);
    if (has(Observable::spectrum)) {
      const RealVector v = spectra::spectrum(s).values;
      out.spectrum.assign(v.data(), v.data() + v.size());
    }
    if (has(Observable::symplectic)) {
      const RealVector v = spectra::symplectic_spectrum(s).values;
      out.symplectic.assign(v.data(), v.data() + v.size());
    }
    if (has(Observable::purity)) r.purity_rate = spectra::purity_rate(s);
    if (has(Observable::ppt)) r.ppt_defect = spectra::ppt_defect(s, cfg.partition);

    if (has(Observable::max_k)) {
      const auto rep = extend::max_extendability(s, cfg.partition, cfg.k_cap, cfg.solver);
      r.separability = rep.separability_status;
      r.separability_residual = rep.separability_residual;
      r.max_k = rep.max_k;
      r.max_k_at_cap = rep.max_k_at_cap;
      r.undecided = rep.undecided;
      r.ppt_defect = rep.ppt_defect;
    } else if (has(Observable::separability)) {
      const auto res = extend::is_separable(s, cfg.partition, cfg.solver);
      r.separability = res.status;
      r.separability_residual = res.residual;
      r.undecided = res.status == extend::Status::undecided;
    }
  } catch (const NumericalError& e) {
    r.error = e.what();
  }
  return out;
}

}  // namespace

SweepSummary run_sweep(const SweepConfig& cfg, int threads) {
  cfg.validate();
  const std::int64_t count = cfg.samples;
  if (threads <= 0) threads = sweep_threads();
  threads = static_cast<int>(std::min<std::int64_t>(threads, count));

  std::vector<SampleOutput> outputs(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        outputs[static_cast<std::size_t>(i)] = run_one(cfg, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepSummary sum;
  sum.config = cfg;
  sum.threads = threads;
  const auto has = [&](Observable o) { return cfg.what.count(o) > 0; };

  std::vector<double> defects, purities, spec, symp, maxk;
  std::int64_t separable = 0, entangled = 0, ppt = 0, non_ppt = 0;
  for (auto& o : outputs) {
    SampleRecord& r = o.record;
    if (!r.error.empty()) {
      ++sum.failed;
      sum.records.push_back(std::move(r));
      continue;
    }
    spec.insert(spec.end(), o.spectrum.begin(), o.spectrum.end());
    symp.insert(symp.end(), o.symplectic.begin(), o.symplectic.end());
    if (r.purity_rate) purities.push_back(*r.purity_rate);
    if (r.ppt_defect) {
      defects.push_back(*r.ppt_defect);
      (*r.ppt_defect >= -cfg.solver.tol ? ppt : non_ppt)++;
    }
    if (r.separability) {
      switch (*r.separability) {
        case extend::Status::feasible: ++separable; break;
        case extend::Status::infeasible: ++entangled; break;
        case extend::Status::undecided: ++sum.undecided; break;
      }
      if (*r.separability == extend::Status::feasible && r.ppt_defect &&
          *r.ppt_defect < -10.0 * cfg.solver.tol) {
        throw NumericalError("sample " + std::to_string(r.index) +
                             " is separable but violates PPT: ppt_defect = " +
                             std::to_string(*r.ppt_defect));
      }
      if (r.max_k && *r.separability == extend::Status::infeasible) {
        maxk.push_back(static_cast<double>(*r.max_k));
      }
    }
    sum.records.push_back(std::move(r));
  }

  if (has(Observable::separability) || has(Observable::max_k)) {
    sum.decided = separable + entangled;
    const double d = static_cast<double>(std::max<std::int64_t>(sum.decided, 1));
    sum.fractions.emplace_back("separable", sum.decided ? separable / d : 0.0);
    sum.fractions.emplace_back("entangled", sum.decided ? entangled / d : 0.0);
  }
  if (!defects.empty()) {
    const double d = static_cast<double>(defects.size());
    sum.fractions.emplace_back("ppt", ppt / d);
    sum.fractions.emplace_back("non_ppt", non_ppt / d);
    sum.defect_stats = mean_variance(defects);
  }
  if (!purities.empty()) sum.purity_stats = mean_variance(purities);
  if (has(Observable::max_k)) {
    sum.max_k_histogram = histogram(maxk, cfg.k_cap, std::make_pair(0.5, cfg.k_cap + 0.5));
  }
  if (has(Observable::spectrum)) sum.spectrum_histogram = histogram(spec, cfg.bins);
  if (has(Observable::symplectic)) sum.symplectic_histogram = histogram(symp, cfg.bins);
  return sum;
}

}  // namespace rqcm::stats
