#pragma once

// Histograms, histogram-vs-density distances and the Monte Carlo sweep.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rqcm/ensemble.hpp"
#include "rqcm/extend.hpp"
#include "rqcm/freeprob.hpp"
#include "rqcm/rng.hpp"

namespace rqcm::stats {

inline constexpr int kDefaultBins = 100;

/// Equal-width bins [e_i, e_{i+1}); the last bin is closed on the right.
struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::int64_t> counts;
  std::vector<double> density;  ///< count / (total * width); zero when total == 0
  std::int64_t total = 0;

  std::size_t bins() const noexcept { return counts.size(); }
  double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
  double mid(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  /// Sum of density * width: 1 when total > 0.
  double mass() const;
};

/// Range defaults to [min, max] of the data. A degenerate range (all values
/// equal) is widened to [v - 0.5, v + 0.5]. Values outside an explicit range
/// are dropped and do not count towards total.
Histogram histogram(std::span<const double> values, int bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

/// Sum over bins of |density_i - f(mid_i)| * width_i.
double l1_distance(const Histogram& h, const std::function<double(double)>& f);
double l1_distance(const Histogram& h, const freeprob::DensityCurve& f);

enum class Observable { spectrum, symplectic, ppt, separability, max_k, purity };
const char* to_string(Observable o);
std::optional<Observable> observable_from_string(const std::string& s);

struct SweepConfig {
  int n = 2;
  ModeBipartition partition{1, 1};
  double sigma = 1.0;
  bool normalized = false;
  int samples = 100;
  std::uint64_t seed = 0;  ///< sample i uses the stream (seed, i)
  int k_cap = 64;
  std::set<Observable> what{Observable::ppt, Observable::separability};
  int bins = kDefaultBins;
  extend::SolverOptions solver;

  /// Throws DimensionError / DomainError on an inconsistent configuration.
  void validate() const;
};

/// Everything computed for one sample; absent fields were not requested.
struct SampleRecord {
  std::int64_t index = 0;
  RngSeed seed;
  double shift = 0.0;
  std::optional<double> ppt_defect;
  std::optional<extend::Status> separability;
  std::optional<double> separability_residual;
  std::optional<int> max_k;
  bool max_k_at_cap = false;
  bool undecided = false;  ///< some SDP probe for this sample was undecided
  std::optional<double> purity_rate;
  std::string error;       ///< numerical failure message, empty on success
};

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased; 0 for fewer than two values
  std::int64_t count = 0;
};

MeanVariance mean_variance(std::span<const double> values);

struct SweepSummary {
  SweepConfig config;
  /// separable, entangled over decided separability samples; ppt, non_ppt
  /// over all samples with a defect.
  std::vector<std::pair<std::string, double>> fractions;
  std::int64_t decided = 0;
  std::int64_t undecided = 0;
  std::int64_t failed = 0;  ///< samples that raised a numerical error
  /// Max-k of entangled samples, unit-width bins centred on 1..k_cap.
  std::optional<Histogram> max_k_histogram;
  std::optional<MeanVariance> defect_stats;
  std::optional<MeanVariance> purity_stats;
  std::optional<Histogram> spectrum_histogram;
  std::optional<Histogram> symplectic_histogram;
  std::vector<SampleRecord> records;  ///< in index order
  int threads = 1;

  std::optional<double> fraction(const std::string& key) const;
};

/// Worker count: RQCM_THREADS if set and positive, else hardware concurrency.
int sweep_threads();

/// Samples are processed by a pool of workers; every per-sample quantity
/// depends only on (seed, index) and aggregation runs in index order, so the
/// summary is identical for any number of threads.
/// Throws NumericalError if a sample is separable while clearly non-PPT.
SweepSummary run_sweep(const SweepConfig& config, int threads = 0);

}  // namespace rqcm::stats
