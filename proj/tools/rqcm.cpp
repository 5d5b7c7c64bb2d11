// rqcm: sampling, spectra, entanglement decisions, sweeps and limit laws
// from the command line. CSV goes to stdout unless --out is given.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rqcm/errors.hpp"
#include "rqcm/extend.hpp"
#include "rqcm/freeprob.hpp"
#include "rqcm/io.hpp"
#include "rqcm/spectra.hpp"
#include "rqcm/stats.hpp"
#include "rqcm/version.hpp"

namespace {

using namespace rqcm;

struct Options {
  int modes = 2;
  double sigma = 1.0;
  bool normalized = false;
  std::string partition;  // "m:l"; empty means an even split
  int samples = 1;
  std::uint64_t seed = 0;
  int bins = 0;  // 0: raw values instead of a histogram
  int k_cap = 64;
  double tol = 1e-8;
  std::string out;
  std::string format = "csv";
  std::string curve = "symplectic";
  double t = 0.5;
  std::string log;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ModeBipartition parse_partition(const Options& o) {
  if (o.partition.empty()) {
    if (o.modes < 2) throw UsageError("a bipartition needs --modes >= 2");
    return {o.modes / 2, o.modes - o.modes / 2};
  }
  const auto colon = o.partition.find(':');
  if (colon == std::string::npos) throw UsageError("--partition must look like m:l");
  ModeBipartition p;
  try {
    p.m = std::stoi(o.partition.substr(0, colon));
    p.l = std::stoi(o.partition.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--partition must look like m:l, got '" + o.partition + "'");
  }
  if (p.m < 1 || p.l < 1 || p.m + p.l != o.modes) {
    throw UsageError("--partition " + o.partition + " does not split --modes " +
                     std::to_string(o.modes));
  }
  return p;
}

// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open --out file '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class Cli {
 public:
  Cli(int argc, char** argv) {
    invocation_ = "rqcm";
    for (int i = 1; i < argc; ++i) {
      invocation_ += ' ';
      invocation_ += argv[i];
    }
  }

  int run(int argc, char** argv);

 private:
  io::Meta meta(const std::string& command) const {
    return {{"tool", "rqcm"}, {"version", kVersion}, {"command", command},
            {"invocation", invocation_}, {"flags", flags_}};
  }
  void flag(const std::string& k, const std::string& v) {
    if (!flags_.empty()) flags_ += ' ';
    flags_ += k + '=' + v;
  }
  void record_common(const CLI::App& sub);

  ensemble::GoeSpec spec() const { return {o_.modes, o_.sigma, o_.normalized}; }
  extend::SolverOptions solver() const {
    extend::SolverOptions s;
    s.tol = o_.tol;
    return s;
  }

  void cmd_sample();
  void cmd_spectrum(bool symplectic);
  void cmd_ppt();
  void cmd_extend();
  void cmd_sweep();
  void cmd_theory();

  Options o_;
  std::string invocation_;
  std::string command_;
  std::string flags_;  // every flag of the subcommand with its effective value
};

void add_out(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output file (default: stdout)");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_ensemble(CLI::App* sub, Options& o) {
  sub->add_option("--modes", o.modes, "Number of modes n (matrices are 2n x 2n)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--sigma", o.sigma, "GOE off-diagonal standard deviation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--normalized", o.normalized, "Use sigma / sqrt(2n)");
  sub->add_option("--seed", o.seed, "Base seed; sample i uses the stream (seed, i)")
      ->capture_default_str();
}

void Cli::record_common(const CLI::App& sub) {
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.rfind("--", 0) != 0 || name == "--help" || name == "--out") continue;
    std::string value;
    if (name == "--normalized") {
      value = o_.normalized ? "true" : "false";
    } else {
      const auto& res = opt->results();
      value = res.empty() ? opt->get_default_str() : res.front();
    }
    if (value.empty()) continue;
    flag(name.substr(2), value);
  }
}

int Cli::run(int argc, char** argv) {
  CLI::App app{"Random quantum covariance matrices: sampling, spectra, entanglement, limit laws"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "Draw one RQCM and print the matrix");
  add_ensemble(sample, o_);
  add_out(sample, o_);

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of RQCM samples (raw or histogram)");
  auto* symplectic = app.add_subcommand("symplectic", "Symplectic eigenvalues of RQCM samples");
  for (auto* sub : {spectrum, symplectic}) {
    add_ensemble(sub, o_);
    sub->add_option("--samples", o_.samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--bins", o_.bins, "Histogram bins (0: print raw values)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_out(sub, o_);
  }

  auto* ppt = app.add_subcommand("ppt", "PPT defect lambda_min(S + i(J_A (+) -J_B)) per sample");
  add_ensemble(ppt, o_);
  ppt->add_option("--partition", o_.partition, "Mode split m:l (default: even)");
  ppt->add_option("--samples", o_.samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  ppt->add_option("--bins", o_.bins, "Histogram bins (0: one row per sample)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  ppt->add_option("--tol", o_.tol, "PPT tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  add_out(ppt, o_);

  auto* ext = app.add_subcommand("extend", "Separability, PPT and maximal k-extendability per sample");
  add_ensemble(ext, o_);
  ext->add_option("--partition", o_.partition, "Mode split m:l (default: even)");
  ext->add_option("--samples", o_.samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  ext->add_option("--k-cap", o_.k_cap, "Largest k probed")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  ext->add_option("--tol", o_.tol, "SDP tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  add_out(ext, o_);

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep: separable / PPT fractions and max-k histogram");
  add_ensemble(sweep, o_);
  sweep->add_option("--partition", o_.partition, "Mode split m:l (default: even)");
  sweep->add_option("--samples", o_.samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--bins", o_.bins, "Bins of the spectrum histograms (0: none)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_option("--k-cap", o_.k_cap, "Largest k probed")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  sweep->add_option("--tol", o_.tol, "SDP and PPT tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--log", o_.log, "Also write one JSON line per sample to this file");
  add_out(sweep, o_);

  auto* theory = app.add_subcommand("theory", "Limit laws: density curves and scalar tables");
  theory->add_option("--curve", o_.curve, "What to evaluate")
      ->check(CLI::IsMember({"mu", "eigen", "symplectic", "marginal", "edges", "ld", "energy"}))
      ->capture_default_str();
  theory->add_option("--sigma", o_.sigma, "sigma")->check(CLI::PositiveNumber)->capture_default_str();
  theory->add_option("--t", o_.t, "Marginal fraction m/n in (0, 1]")->capture_default_str();
  theory->add_option("--bins", o_.bins, "Grid intervals of a curve (0: 400)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_out(theory, o_);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  command_ = chosen->get_name();
  record_common(*chosen);

  try {
    if (command_ == "sample") cmd_sample();
    else if (command_ == "spectrum") cmd_spectrum(false);
    else if (command_ == "symplectic") cmd_spectrum(true);
    else if (command_ == "ppt") cmd_ppt();
    else if (command_ == "extend") cmd_extend();
    else if (command_ == "sweep") cmd_sweep();
    else cmd_theory();
  } catch (const UsageError& e) {
    std::cerr << "rqcm " << command_ << ": " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "rqcm " << command_ << ": " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "rqcm " << command_ << ": " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "rqcm " << command_ << ": numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

void Cli::cmd_sample() {
  spec().validate();
  const RngSeed seed{o_.seed, 0};
  const QuantumCovarianceMatrix s = ensemble::sample_rqcm(spec(), seed);
  const io::MatrixInfo info{o_.modes, o_.sigma, o_.normalized, o_.seed, 0, s.shift()};
  Sink sink(o_.out);
  if (o_.format == "json") sink.os() << io::matrix_to_json(s.matrix(), info, meta(command_)).dump(1) << "\n";
  else io::write_matrix_csv(sink.os(), s.matrix(), info, meta(command_));
}

void Cli::cmd_spectrum(bool symplectic) {
  spec().validate();
  SpectralSample all;
  all.kind = symplectic ? SpectrumKind::symplectic : SpectrumKind::ordinary;
  std::vector<double> values;
  for (int i = 0; i < o_.samples; ++i) {
    const auto s = ensemble::sample_rqcm(spec(), {o_.seed, static_cast<std::uint64_t>(i)});
    const SpectralSample one = symplectic ? spectra::symplectic_spectrum(s) : spectra::spectrum(s);
    all.degenerate = all.degenerate || one.degenerate;
    values.insert(values.end(), one.values.data(), one.values.data() + one.values.size());
  }
  std::sort(values.begin(), values.end());
  all.values = Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));

  Sink sink(o_.out);
  io::Meta m = meta(command_);
  m.emplace_back("kind", to_string(all.kind));
  if (o_.bins > 0) {
    const stats::Histogram h = stats::histogram(values, o_.bins);
    if (o_.format == "json") sink.os() << io::histogram_to_json(h, m).dump(1) << "\n";
    else io::write_histogram_csv(sink.os(), h, m);
  } else if (o_.format == "json") {
    sink.os() << io::spectrum_to_json(all, meta(command_)).dump(1) << "\n";
  } else {
    io::write_spectrum_csv(sink.os(), all, meta(command_));
  }
}

void Cli::cmd_ppt() {
  spec().validate();
  const ModeBipartition part = parse_partition(o_);
  std::vector<double> defects;
  for (int i = 0; i < o_.samples; ++i) {
    const auto s = ensemble::sample_rqcm(spec(), {o_.seed, static_cast<std::uint64_t>(i)});
    defects.push_back(spectra::ppt_defect(s, part));
  }
  Sink sink(o_.out);
  io::Meta m = meta(command_);
  m.emplace_back("kind", "ppt_defect");
  if (o_.bins > 0) {
    const stats::Histogram h = stats::histogram(defects, o_.bins);
    if (o_.format == "json") sink.os() << io::histogram_to_json(h, m).dump(1) << "\n";
    else io::write_histogram_csv(sink.os(), h, m);
    return;
  }
  if (o_.format == "json") {
    io::Json rows = io::Json::array();
    for (std::size_t i = 0; i < defects.size(); ++i) {
      rows.push_back({{"stream", i}, {"ppt_defect", defects[i]}, {"ppt", defects[i] >= -o_.tol}});
    }
    io::Json j;
    j["schema"] = io::schema_id("ppt");
    j["meta"] = io::Json::object();
    for (const auto& [k, v] : m) j["meta"][k] = v;
    j["samples"] = std::move(rows);
    sink.os() << j.dump(1) << "\n";
    return;
  }
  io::write_csv_header(sink.os(), "ppt", m);
  sink.os() << "stream,ppt_defect,ppt\n";
  for (std::size_t i = 0; i < defects.size(); ++i) {
    sink.os() << i << "," << io::format_double(defects[i]) << "," << (defects[i] >= -o_.tol ? 1 : 0) << "\n";
  }
}

void Cli::cmd_extend() {
  spec().validate();
  const ModeBipartition part = parse_partition(o_);
  Sink sink(o_.out);
  const io::Meta m = meta(command_);
  if (o_.format == "csv") {
    io::write_csv_header(sink.os(), "extend", m);
    sink.os() << "stream,separability,ppt_defect,ppt,max_k,max_k_at_cap,undecided,separability_residual\n";
  } else {
    io::Json head;
    head["schema"] = io::schema_id("extend");
    head["meta"] = io::Json::object();
    for (const auto& [k, v] : m) head["meta"][k] = v;
    sink.os() << head.dump() << "\n";
  }
  for (int i = 0; i < o_.samples; ++i) {
    const RngSeed seed{o_.seed, static_cast<std::uint64_t>(i)};
    const auto s = ensemble::sample_rqcm(spec(), seed);
    const auto rep = extend::max_extendability(s, part, o_.k_cap, solver());
    if (o_.format == "csv") {
      sink.os() << i << "," << extend::to_string(rep.separability_status) << ","
                << io::format_double(rep.ppt_defect) << "," << (rep.ppt ? 1 : 0) << "," << rep.max_k
                << "," << (rep.max_k_at_cap ? 1 : 0) << "," << (rep.undecided ? 1 : 0) << ","
                << io::format_double(rep.separability_residual) << "\n";
    } else {
      sink.os() << io::extendability_to_json(rep, {seed, o_.modes, part, o_.sigma}).dump() << "\n";
    }
  }
}

void Cli::cmd_sweep() {
  stats::SweepConfig cfg;
  cfg.n = o_.modes;
  cfg.partition = parse_partition(o_);
  cfg.sigma = o_.sigma;
  cfg.normalized = o_.normalized;
  cfg.samples = o_.samples;
  cfg.seed = o_.seed;
  cfg.k_cap = o_.k_cap;
  cfg.solver = solver();
  cfg.what = {stats::Observable::ppt, stats::Observable::separability, stats::Observable::max_k,
              stats::Observable::purity};
  if (o_.bins > 0) {
    cfg.bins = o_.bins;
    cfg.what.insert(stats::Observable::spectrum);
    cfg.what.insert(stats::Observable::symplectic);
  }
  const stats::SweepSummary sum = stats::run_sweep(cfg);

  if (!o_.log.empty()) {
    std::ofstream log(o_.log);
    if (!log) throw UsageError("cannot open --log file '" + o_.log + "'");
    for (const auto& r : sum.records) log << io::sample_record_to_json(r, cfg).dump() << "\n";
  }

  Sink sink(o_.out);
  const io::Meta m = meta(command_);
  if (o_.format == "json") {
    sink.os() << io::sweep_summary_to_json(sum, m).dump(1) << "\n";
    return;
  }
  io::Meta cm = m;
  cm.emplace_back("decided", std::to_string(sum.decided));
  cm.emplace_back("undecided", std::to_string(sum.undecided));
  cm.emplace_back("failed", std::to_string(sum.failed));
  io::write_csv_header(sink.os(), "sweep", cm);
  sink.os() << "quantity,value\n";
  for (const auto& [k, v] : sum.fractions) sink.os() << k << "," << io::format_double(v) << "\n";
  if (sum.defect_stats) {
    sink.os() << "ppt_defect_mean," << io::format_double(sum.defect_stats->mean) << "\n";
    sink.os() << "ppt_defect_variance," << io::format_double(sum.defect_stats->variance) << "\n";
  }
  if (sum.purity_stats) sink.os() << "purity_rate_mean," << io::format_double(sum.purity_stats->mean) << "\n";
}

void Cli::cmd_theory() {
  const int intervals = o_.bins > 0 ? o_.bins : 400;
  Sink sink(o_.out);
  io::Meta m = meta(command_);
  const bool json = o_.format == "json";

  auto emit_curve = [&](const freeprob::DensityCurve& c) {
    if (json) sink.os() << io::curve_to_json(c, m).dump(1) << "\n";
    else io::write_curve_csv(sink.os(), c, m);
  };
  auto emit_scalars = [&](const std::vector<std::pair<std::string, std::optional<double>>>& rows) {
    if (json) {
      io::Json j;
      j["schema"] = io::schema_id("scalars");
      j["meta"] = io::Json::object();
      for (const auto& [k, v] : m) j["meta"][k] = v;
      for (const auto& [k, v] : rows) j[k] = v ? io::Json(*v) : io::Json(nullptr);
      sink.os() << j.dump(1) << "\n";
      return;
    }
    io::write_csv_header(sink.os(), "scalars", m);
    sink.os() << "quantity,value\n";
    for (const auto& [k, v] : rows) sink.os() << k << "," << (v ? io::format_double(*v) : "") << "\n";
  };

  const double s = o_.sigma;
  if (o_.curve == "mu") emit_curve(freeprob::mu_sigma_curve(s, intervals + 1));
  else if (o_.curve == "eigen") emit_curve(freeprob::eigen_curve(s, intervals + 1));
  else if (o_.curve == "symplectic") emit_curve(freeprob::symplectic_curve(s, intervals + 1));
  else if (o_.curve == "marginal") emit_curve(freeprob::marginal_curve(s, o_.t, intervals + 1));
  else if (o_.curve == "edges") {
    const auto e = freeprob::edges(s);
    emit_scalars({{"sigma", s}, {"R", e.r}, {"L", e.l}, {"sqrt_F", e.sqrt_f}});
  } else if (o_.curve == "ld") {
    emit_scalars({{"sigma", s}, {"purity_rate_ld", freeprob::purity_rate_ld(s)}});
  } else {
    emit_scalars({{"sigma", s}, {"energy_per_mode", freeprob::energy_per_mode(s)}});
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Cli cli(argc, argv);
    return cli.run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "rqcm: " << e.what() << "\n";
    return 1;
  }
}
