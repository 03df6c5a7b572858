#include "cosmo/dataset_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cosmo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

fs::path with_suffix(const fs::path& stem, const char* suffix) {
  fs::path p = stem;
  p += suffix;
  return p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

bool parse_row(const std::string& line, std::vector<double>& values) {
  values.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  while (end > p && (end[-1] == '\r' || end[-1] == ' ')) --end;
  if (p == end) return false;
  while (true) {
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) return false;
    values.push_back(v);
    p = next;
    if (p == end) return true;
    if (*p != ',') return false;
    ++p;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_matrix_csv(const Matrix& m, const fs::path& path) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Matrix read_matrix_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::vector<std::vector<double>> rows;
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (!parse_row(line, values)) {
      if (first) {
        first = false;
        continue;
      }
      throw std::runtime_error("malformed CSV row in " + path.string());
    }
    first = false;
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::runtime_error("ragged CSV in " + path.string());
    }
    rows.push_back(values);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = n ? static_cast<Eigen::Index>(rows.front().size()) : 0;
  Matrix m(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

void write_dataset(const Dataset& data, const fs::path& stem) {
  {
    auto out = open_out(with_suffix(stem, ".csv"));
    for (Eigen::Index c = 0; c < data.x.cols(); ++c) out << (c ? ",x" : "x") << c;
    out << '\n';
    for (Eigen::Index r = 0; r < data.x.rows(); ++r) {
      for (Eigen::Index c = 0; c < data.x.cols(); ++c) {
        if (c) out << ',';
        out << format_double(data.x(r, c));
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + stem.string() + ".csv");
  }

  json arcs = json::array();
  for (Eigen::Index u = 0; u < data.w_true.rows(); ++u) {
    for (Eigen::Index v = 0; v < data.w_true.cols(); ++v) {
      if (data.w_true(u, v) != 0.0) arcs.push_back(json::array({u, v, data.w_true(u, v)}));
    }
  }
  const auto& s = data.spec;
  json meta = {
      {"format", "cosmo-dataset"},
      {"version", kFormatVersion},
      {"n", data.x.rows()},
      {"d", data.x.cols()},
      {"graph", {{"kind", to_string(s.graph.kind)}, {"k", s.graph.edge_factor}, {"seed", s.graph.seed}}},
      {"noise", to_string(s.noise)},
      {"sem", to_string(s.sem)},
      {"hidden", s.hidden},
      {"seed", s.seed},
      {"arcs", arcs},
  };
  auto out = open_out(with_suffix(stem, ".json"));
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + stem.string() + ".json");
}

Dataset read_dataset(const fs::path& stem) {
  const fs::path meta_path = with_suffix(stem, ".json");
  std::ifstream in(meta_path);
  if (!in) throw std::runtime_error("cannot open for reading: " + meta_path.string());
  json meta;
  try {
    in >> meta;
    if (meta.at("format") != "cosmo-dataset") throw std::runtime_error("not a cosmo dataset");
    if (meta.at("version").get<int>() != kFormatVersion) throw std::runtime_error("unsupported version");

    Dataset data;
    auto& s = data.spec;
    const auto d = meta.at("d").get<std::size_t>();
    s.n = meta.at("n").get<std::size_t>();
    s.graph.d = d;
    s.graph.kind = parse_graph_kind(meta.at("graph").at("kind").get<std::string>());
    s.graph.edge_factor = meta.at("graph").at("k").get<std::size_t>();
    s.graph.seed = meta.at("graph").at("seed").get<std::uint64_t>();
    s.noise = parse_noise_family(meta.at("noise").get<std::string>());
    s.sem = parse_sem_kind(meta.at("sem").get<std::string>());
    s.hidden = meta.at("hidden").get<std::size_t>();
    s.seed = meta.at("seed").get<std::uint64_t>();

    const auto dd = static_cast<Eigen::Index>(d);
    data.w_true = WeightedAdjacency::Zero(dd, dd);
    for (const auto& arc : meta.at("arcs")) {
      const auto u = arc.at(0).get<Eigen::Index>();
      const auto v = arc.at(1).get<Eigen::Index>();
      if (u < 0 || v < 0 || u >= dd || v >= dd) throw std::runtime_error("arc index out of range");
      data.w_true(u, v) = arc.at(2).get<double>();
    }
    data.x = read_matrix_csv(with_suffix(stem, ".csv"));
    if (data.x.cols() != dd || static_cast<std::size_t>(data.x.rows()) != s.n) {
      throw std::runtime_error("CSV shape disagrees with metadata");
    }
    return data;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed dataset metadata " + meta_path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("malformed dataset metadata " + meta_path.string() + ": " + e.what());
  }
}

}  // namespace cosmo
