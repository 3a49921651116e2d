#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltspec {

// Shortest exact decimal form; keeps CSV reports byte-reproducible.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      if (std::strtod(shorter, nullptr) == v) return shorter;
    }
  }
  return buf;
}

/// Reports are written atomically: a temp file in the target directory is
/// renamed into place, so an interrupted run leaves no partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.good()) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      out += header[i];
      out += (i + 1 < header.size()) ? "," : "\n";
    }
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        out += r[i];
        out += (i + 1 < r.size()) ? "," : "\n";
      }
    }
    return out;
  }
};

}  // namespace ltspec
