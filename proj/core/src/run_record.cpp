#include "emx/run_record.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "emx/errors.hpp"

namespace fs = std::filesystem;

namespace emx {

namespace {

const char* kCsvHeader =
    "t,linf_omega,besov1_omega,energy_l2,besov2_Eb,riesz_linf,remainder_b121,"
    "int_riesz_linf,int_remainder_b121";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_field(const fs::path& stem, const ScalarField2D& f, double t,
                 const std::string& name) {
  std::ofstream bin(stem.string() + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + stem.string() + ".bin");
  auto phys = f.phys();
  bin.write(reinterpret_cast<const char*>(phys.data()),
            static_cast<std::streamsize>(phys.size() * sizeof(double)));
  nlohmann::json header = {{"t", t},           {"n", f.grid().n()},
                           {"field", name},    {"dtype", "float64"},
                           {"order", "row-major"}, {"endianness", "little"}};
  write_text(stem.string() + ".json", header.dump(2) + "\n");
}

ScalarField2D read_field(const fs::path& bin_path, const FourierGrid& grid) {
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot read " + bin_path.string());
  ScalarField2D f(grid);
  auto phys = f.phys_mut();
  bin.read(reinterpret_cast<char*>(phys.data()),
           static_cast<std::streamsize>(phys.size() * sizeof(double)));
  if (!bin) throw std::runtime_error("short read on " + bin_path.string());
  return f;
}

nlohmann::json params_to_json(const Params& p) {
  return {{"c", p.c},
          {"sigma", p.sigma},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"background_scale", p.background_scale}};
}

Params params_from_json(const nlohmann::json& j) {
  Params p;
  p.c = j.at("c");
  p.sigma = j.at("sigma");
  p.alpha = j.at("alpha");
  p.beta = j.at("beta");
  p.background_scale = j.at("background_scale");
  return p;
}

}  // namespace

std::string series_to_csv(const std::vector<SeriesPoint>& series) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SeriesPoint& p : series) {
    out += fmt(p.t);
    for (double v : {p.linf_omega, p.besov1_omega, p.energy_l2, p.besov2_Eb, p.riesz_linf,
                     p.remainder_b121, p.int_riesz_linf, p.int_remainder_b121}) {
      out += ',';
      out += fmt(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<SeriesPoint> series_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("series.csv: unexpected header");
  std::vector<SeriesPoint> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SeriesPoint p;
    double* cols[] = {&p.t,          &p.linf_omega,     &p.besov1_omega,
                      &p.energy_l2,  &p.besov2_Eb,      &p.riesz_linf,
                      &p.remainder_b121, &p.int_riesz_linf, &p.int_remainder_b121};
    std::istringstream row(line);
    std::string cell;
    for (double* col : cols) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("series.csv: short row");
      *col = std::stod(cell);
    }
    series.push_back(p);
  }
  return series;
}

void write_run_dir(const std::string& dir, const RunRecord& record,
                   const std::vector<CheckReport>& checks) {
  record.validate();
  fs::create_directories(fs::path(dir) / "snapshots");

  write_text(fs::path(dir) / "config.json", record.config.dump(2) + "\n");
  nlohmann::json meta = {{"model", record.model},
                         {"grid_n", record.grid_n},
                         {"params", params_to_json(record.params)},
                         {"partition_profile", record.partition_profile},
                         {"dt_nominal", record.dt_nominal},
                         {"wall_seconds", record.wall_seconds},
                         {"started_at", record.started_at},
                         {"snapshot_count", record.snapshots.size()}};
  write_text(fs::path(dir) / "meta.json", meta.dump(2) + "\n");
  write_text(fs::path(dir) / "series.csv", series_to_csv(record.series));

  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    const Snapshot& snap = record.snapshots[i];
    char tag[32];
    std::snprintf(tag, sizeof tag, "snap_%04zu", i);
    for (const auto& [name, f] : snap.fields)
      write_field(fs::path(dir) / "snapshots" / (std::string(tag) + "_" + name), f, snap.t,
                  name);
    if (snap.flow) {
      const FlowMap& fm = *snap.flow;
      write_field(fs::path(dir) / "snapshots" / (std::string(tag) + "_flow_dp1"),
                  fm.d_plus.x1, snap.t, "flow_dp1");
      write_field(fs::path(dir) / "snapshots" / (std::string(tag) + "_flow_dp2"),
                  fm.d_plus.x2, snap.t, "flow_dp2");
      write_field(fs::path(dir) / "snapshots" / (std::string(tag) + "_flow_dm1"),
                  fm.d_minus.x1, snap.t, "flow_dm1");
      write_field(fs::path(dir) / "snapshots" / (std::string(tag) + "_flow_dm2"),
                  fm.d_minus.x2, snap.t, "flow_dm2");
    }
  }
  write_checks(dir, checks);
  write_text(fs::path(dir) / "done", "ok\n");
}

void write_checks(const std::string& dir, const std::vector<CheckReport>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckReport& c : checks) arr.push_back(to_json(c));
  write_text(fs::path(dir) / "checks.json", arr.dump(2) + "\n");
}

RunRecord load_run_record(const std::string& dir) {
  RunRecord record;
  record.config = nlohmann::json::parse(read_text(fs::path(dir) / "config.json"));
  nlohmann::json meta = nlohmann::json::parse(read_text(fs::path(dir) / "meta.json"));
  record.model = meta.at("model");
  record.grid_n = meta.at("grid_n");
  record.params = params_from_json(meta.at("params"));
  record.partition_profile = meta.at("partition_profile");
  record.dt_nominal = meta.at("dt_nominal");
  record.wall_seconds = meta.at("wall_seconds");
  record.started_at = meta.at("started_at");
  record.series = series_from_csv(read_text(fs::path(dir) / "series.csv"));

  FourierGrid grid(record.grid_n);
  // Group snapshot files by index tag; headers supply time and field name.
  std::map<std::string, std::vector<fs::path>> groups;
  const fs::path snapdir = fs::path(dir) / "snapshots";
  if (fs::exists(snapdir))
    for (const auto& entry : fs::directory_iterator(snapdir)) {
      const std::string name = entry.path().filename().string();
      if (entry.path().extension() != ".json") continue;
      groups[name.substr(0, 9)].push_back(entry.path());  // "snap_NNNN"
    }
  for (auto& [tag, headers] : groups) {
    Snapshot snap;
    std::map<std::string, ScalarField2D> flow_parts;
    for (const fs::path& hpath : headers) {
      nlohmann::json header = nlohmann::json::parse(read_text(hpath));
      snap.t = header.at("t");
      const std::string field_name = header.at("field");
      fs::path bin = hpath;
      bin.replace_extension(".bin");
      ScalarField2D f = read_field(bin, grid);
      if (field_name.rfind("flow_", 0) == 0)
        flow_parts.emplace(field_name, std::move(f));
      else
        snap.fields.emplace_back(field_name, std::move(f));
    }
    std::sort(snap.fields.begin(), snap.fields.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (flow_parts.size() == 4) {
      FlowMap fm(grid);
      fm.d_plus = VectorField2D(std::move(flow_parts.at("flow_dp1")),
                                std::move(flow_parts.at("flow_dp2")));
      fm.d_minus = VectorField2D(std::move(flow_parts.at("flow_dm1")),
                                 std::move(flow_parts.at("flow_dm2")));
      fm.t = snap.t;
      snap.flow = std::move(fm);
    }
    record.snapshots.push_back(std::move(snap));
  }
  return record;
}

}  // namespace emx
