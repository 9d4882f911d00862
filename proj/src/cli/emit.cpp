#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "cli/cli.hpp"
#include "qanneal/error.hpp"
#include "qanneal/version.hpp"

namespace qanneal::cli {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw ValidationError("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              os << format_double(v);
            } else {
              os << v;
            }
          },
          row[i]);
    }
    os << '\n';
  }
  return os.str();
}

json Table::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            // JSON has no inf/nan; emit them as strings.
            if constexpr (std::is_same_v<V, double>) {
              if (std::isfinite(v)) {
                r.push_back(v);
              } else {
                r.push_back(format_double(v));
              }
            } else {
              r.push_back(v);
            }
          },
          cell);
    }
    rows_json.push_back(std::move(r));
  }
  return {{"columns", columns}, {"rows", std::move(rows_json)}};
}

void emit(const RunConfig& config, const Output& output, std::ostream& stdout_stream) {
  if (config.out.empty()) {
    stdout_stream << output.primary;
    return;
  }
  const std::filesystem::path primary(config.out);
  write_file(primary, output.primary);
  json outputs = json::array({primary.filename().string()});
  for (const auto& [suffix, content] : output.sidecars) {
    const std::filesystem::path p(config.out + suffix);
    write_file(p, content);
    outputs.push_back(p.filename().string());
  }

  json manifest;
  manifest["tool"] = "anneal";
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(config);
  manifest["outputs"] = outputs;
  manifest["prng"] = "mt19937_64";
  for (const auto& [key, value] : output.manifest_extra.items()) manifest[key] = value;
  write_file(config.out + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace qanneal::cli
