#include "rqcm/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rqcm::io {

namespace {

Json meta_json(const Meta& meta) {
  Json j = Json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

Json document(const std::string& kind, const Meta& meta) {
  Json j;
  j["schema"] = schema_id(kind);
  j["meta"] = meta_json(meta);
  return j;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  return out;
}

const std::string* find_meta(const Meta& meta, const std::string& key) {
  for (const auto& [k, v] : meta) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& require_meta(const Meta& meta, const std::string& key) {
  const std::string* v = find_meta(meta, key);
  if (!v) throw std::runtime_error("missing header field '" + key + "'");
  return *v;
}

void check_schema(const std::string& got, const std::string& kind) {
  if (got != schema_id(kind)) {
    throw std::runtime_error("expected schema " + schema_id(kind) + ", found '" + got + "'");
  }
}

std::string support_string(const freeprob::Support& s) {
  std::string out;
  for (const auto& [lo, hi] : s.intervals) {
    if (!out.empty()) out += ";";
    out += "[" + format_double(lo) + "," + format_double(hi) + "]";
  }
  return out;
}

Json support_json(const freeprob::Support& s) {
  Json arr = Json::array();
  for (const auto& [lo, hi] : s.intervals) arr.push_back({lo, hi});
  return arr;
}

Json mean_variance_json(const stats::MeanVariance& mv) {
  return {{"mean", mv.mean}, {"variance", mv.variance}, {"count", mv.count}};
}

}  // namespace

std::string schema_id(const std::string& kind) {
  return "rqcm." + kind + "/" + std::to_string(kSchemaVersion);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv_header(std::ostream& os, const std::string& kind, const Meta& meta) {
  os << "# schema: " << schema_id(kind) << "\n";
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
}

Meta read_csv_meta(std::istream& is, std::string* header) {
  Meta meta;
  std::string line;
  if (header) header->clear();
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] != '#') {
      if (header) *header = line;
      break;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    meta.emplace_back(trim(line.substr(1, colon - 1)), trim(line.substr(colon + 1)));
  }
  return meta;
}

void write_matrix_csv(std::ostream& os, const SymmetricMatrix& s, const MatrixInfo& info,
                      const Meta& meta) {
  Meta m{{"n", std::to_string(info.n)},
         {"sigma", format_double(info.sigma)},
         {"normalized", info.normalized ? "true" : "false"},
         {"seed", std::to_string(info.seed)},
         {"stream", std::to_string(info.stream)}};
  if (info.shift) m.emplace_back("shift", format_double(*info.shift));
  m.insert(m.end(), meta.begin(), meta.end());
  write_csv_header(os, "matrix", m);
  const auto d = s.dim();
  for (Eigen::Index j = 0; j < d; ++j) os << (j ? "," : "") << "c" << j;
  os << "\n";
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) os << (j ? "," : "") << format_double(s(i, j));
    os << "\n";
  }
}

Json matrix_to_json(const SymmetricMatrix& s, const MatrixInfo& info, const Meta& meta) {
  Json j = document("matrix", meta);
  j["n"] = info.n;
  j["sigma"] = info.sigma;
  j["normalized"] = info.normalized;
  j["seed"] = info.seed;
  j["stream"] = info.stream;
  if (info.shift) j["shift"] = *info.shift;
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < s.dim(); ++k) row.push_back(s(i, k));
    rows.push_back(std::move(row));
  }
  j["data"] = std::move(rows);
  return j;
}

MatrixRecord read_matrix_csv(std::istream& is) {
  std::string header;
  MatrixRecord rec;
  rec.meta = read_csv_meta(is, &header);
  check_schema(require_meta(rec.meta, "schema"), "matrix");
  rec.info.n = std::stoi(require_meta(rec.meta, "n"));
  rec.info.sigma = std::stod(require_meta(rec.meta, "sigma"));
  rec.info.normalized = require_meta(rec.meta, "normalized") == "true";
  rec.info.seed = std::stoull(require_meta(rec.meta, "seed"));
  rec.info.stream = std::stoull(require_meta(rec.meta, "stream"));
  if (const auto* sh = find_meta(rec.meta, "shift")) rec.info.shift = std::stod(*sh);

  const Eigen::Index d = 2 * rec.info.n;
  if (static_cast<Eigen::Index>(split(header, ',').size()) != d) {
    throw std::runtime_error("matrix CSV header has the wrong number of columns");
  }
  RealMatrix m(d, d);
  std::string line;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("matrix CSV is truncated");
    const auto cells = split(line, ',');
    if (static_cast<Eigen::Index>(cells.size()) != d) throw std::runtime_error("ragged matrix CSV row");
    for (Eigen::Index k = 0; k < d; ++k) m(i, k) = std::stod(cells[k]);
  }
  rec.matrix = SymmetricMatrix(m);
  return rec;
}

MatrixRecord matrix_from_json(const Json& j) {
  check_schema(j.at("schema").get<std::string>(), "matrix");
  MatrixRecord rec;
  rec.info.n = j.at("n").get<int>();
  rec.info.sigma = j.at("sigma").get<double>();
  rec.info.normalized = j.at("normalized").get<bool>();
  rec.info.seed = j.at("seed").get<std::uint64_t>();
  rec.info.stream = j.value("stream", std::uint64_t{0});
  if (j.contains("shift")) rec.info.shift = j.at("shift").get<double>();
  if (j.contains("meta")) {
    for (const auto& [k, v] : j.at("meta").items()) rec.meta.emplace_back(k, v.get<std::string>());
  }
  const auto& rows = j.at("data");
  const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
  if (d != 2 * rec.info.n) throw std::runtime_error("matrix JSON data does not match n");
  RealMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d) throw std::runtime_error("ragged matrix JSON row");
    for (Eigen::Index k = 0; k < d; ++k) m(i, k) = rows[i][k].get<double>();
  }
  rec.matrix = SymmetricMatrix(m);
  return rec;
}

void write_spectrum_csv(std::ostream& os, const SpectralSample& s, const Meta& meta) {
  Meta m{{"kind", to_string(s.kind)},
         {"count", std::to_string(s.values.size())},
         {"degenerate", s.degenerate ? "true" : "false"}};
  m.insert(m.end(), meta.begin(), meta.end());
  write_csv_header(os, "spectrum", m);
  os << "value\n";
  for (Eigen::Index i = 0; i < s.values.size(); ++i) os << format_double(s.values[i]) << "\n";
}

Json spectrum_to_json(const SpectralSample& s, const Meta& meta) {
  Json j = document("spectrum", meta);
  j["kind"] = to_string(s.kind);
  j["degenerate"] = s.degenerate;
  j["values"] = std::vector<double>(s.values.data(), s.values.data() + s.values.size());
  return j;
}

void write_curve_csv(std::ostream& os, const freeprob::DensityCurve& c, const Meta& meta) {
  Meta m{{"kind", freeprob::to_string(c.kind)},
         {"sigma", format_double(c.sigma)},
         {"support", support_string(c.support)},
         {"total_mass", format_double(c.total_mass)},
         {"points", std::to_string(c.grid.size())}};
  m.insert(m.end(), meta.begin(), meta.end());
  write_csv_header(os, "curve", m);
  os << "x,density\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    os << format_double(c.grid[i]) << "," << format_double(c.density[i]) << "\n";
  }
}

Json curve_to_json(const freeprob::DensityCurve& c, const Meta& meta) {
  Json j = document("curve", meta);
  j["kind"] = freeprob::to_string(c.kind);
  j["sigma"] = c.sigma;
  j["support"] = support_json(c.support);
  j["total_mass"] = c.total_mass;
  j["x"] = c.grid;
  j["density"] = c.density;
  return j;
}

void write_histogram_csv(std::ostream& os, const stats::Histogram& h, const Meta& meta) {
  Meta m = meta;
  m.emplace_back("total", std::to_string(h.total));
  write_csv_header(os, "histogram", m);
  os << "bin_left,bin_right,count,density\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    os << format_double(h.bin_edges[i]) << "," << format_double(h.bin_edges[i + 1]) << ","
       << h.counts[i] << "," << format_double(h.density[i]) << "\n";
  }
}

Json histogram_to_json(const stats::Histogram& h, const Meta& meta) {
  Json j = document("histogram", meta);
  j["total"] = h.total;
  j["bin_edges"] = h.bin_edges;
  j["counts"] = h.counts;
  j["density"] = h.density;
  return j;
}

stats::Histogram read_histogram_csv(std::istream& is, Meta* meta_out) {
  std::string header;
  Meta meta = read_csv_meta(is, &header);
  check_schema(require_meta(meta, "schema"), "histogram");
  if (split(header, ',') != std::vector<std::string>{"bin_left", "bin_right", "count", "density"}) {
    throw std::runtime_error("unexpected histogram CSV header: " + header);
  }
  stats::Histogram h;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw std::runtime_error("malformed histogram row: " + line);
    if (h.bin_edges.empty()) h.bin_edges.push_back(std::stod(cells[0]));
    h.bin_edges.push_back(std::stod(cells[1]));
    h.counts.push_back(std::stoll(cells[2]));
    h.density.push_back(std::stod(cells[3]));
    h.total += h.counts.back();
  }
  if (meta_out) *meta_out = std::move(meta);
  return h;
}

Json sweep_config_to_json(const stats::SweepConfig& c) {
  Json what = Json::array();
  for (auto o : c.what) what.push_back(stats::to_string(o));
  return {{"n", c.n},
          {"partition", {c.partition.m, c.partition.l}},
          {"sigma", c.sigma},
          {"normalized", c.normalized},
          {"samples", c.samples},
          {"seed", c.seed},
          {"k_cap", c.k_cap},
          {"what", what},
          {"bins", c.bins},
          {"solver",
           {{"method", extend::to_string(c.solver.method)},
            {"tol", c.solver.tol},
            {"max_iterations", c.solver.max_iterations}}}};
}

Json sweep_summary_to_json(const stats::SweepSummary& s, const Meta& meta) {
  Json j = document("sweep", meta);
  j["config"] = sweep_config_to_json(s.config);
  Json fr = Json::object();
  for (const auto& [k, v] : s.fractions) fr[k] = v;
  j["fractions"] = fr;
  j["decided"] = s.decided;
  j["undecided"] = s.undecided;
  j["failed"] = s.failed;
  if (s.defect_stats) j["ppt_defect"] = mean_variance_json(*s.defect_stats);
  if (s.purity_stats) j["purity_rate"] = mean_variance_json(*s.purity_stats);
  if (s.max_k_histogram) j["max_k_histogram"] = histogram_to_json(*s.max_k_histogram);
  if (s.spectrum_histogram) j["spectrum_histogram"] = histogram_to_json(*s.spectrum_histogram);
  if (s.symplectic_histogram) j["symplectic_histogram"] = histogram_to_json(*s.symplectic_histogram);
  return j;
}

Json sample_record_to_json(const stats::SampleRecord& r, const stats::SweepConfig& c) {
  Json j;
  j["index"] = r.index;
  j["seed"] = r.seed.seed;
  j["stream"] = r.seed.stream_id;
  j["n"] = c.n;
  j["partition"] = {c.partition.m, c.partition.l};
  j["sigma"] = c.sigma;
  j["shift"] = r.shift;
  if (r.ppt_defect) {
    j["ppt_defect"] = *r.ppt_defect;
    j["ppt"] = *r.ppt_defect >= -c.solver.tol;
  }
  if (r.separability) {
    j["separability"] = extend::to_string(*r.separability);
    j["separable"] = *r.separability == extend::Status::feasible;
    j["separability_residual"] = r.separability_residual.value_or(0.0);
  }
  if (r.max_k) {
    j["max_k"] = *r.max_k;
    j["max_k_at_cap"] = r.max_k_at_cap;
  }
  if (r.purity_rate) j["purity_rate"] = *r.purity_rate;
  j["undecided"] = r.undecided;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

Json extendability_to_json(const extend::ExtendabilityReport& r, const ReportContext& ctx) {
  Json j;
  j["seed"] = ctx.seed.seed;
  j["stream"] = ctx.seed.stream_id;
  j["n"] = ctx.n;
  j["partition"] = {ctx.partition.m, ctx.partition.l};
  j["sigma"] = ctx.sigma;
  j["separable"] = r.separable;
  j["separability"] = extend::to_string(r.separability_status);
  j["ppt"] = r.ppt;
  j["ppt_defect"] = r.ppt_defect;
  j["k_cap"] = r.k_cap;
  j["max_k"] = r.max_k;
  j["max_k_at_cap"] = r.max_k_at_cap;
  j["undecided"] = r.undecided;
  Json residuals = Json::object();
  residuals["separability"] = r.separability_residual;
  Json probes = Json::array();
  for (const auto& p : r.per_k) {
    probes.push_back({{"k", p.k}, {"status", extend::to_string(p.status)}, {"residual", p.residual}});
  }
  j["residuals"] = residuals;
  j["per_k"] = probes;
  return j;
}

}  // namespace rqcm::io
