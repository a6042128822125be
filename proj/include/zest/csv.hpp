#pragma once

// CSV artifacts: a metadata comment block (enough to re-run the computation),
// one header line, then data rows.  All numbers are printed with %.17g so
// values round-trip exactly and files are byte-reproducible for identical
// inputs; nothing environment-dependent (time, host, thread count) is ever
// written.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "zest/errors.hpp"

namespace zest {

// Round-trip decimal form of a double (17 significant digits).
inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_int(long long x) { return std::to_string(x); }

struct CsvTable {
  // rendered as "# key = value", in insertion order
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string header;             // comma-joined column names
  std::vector<std::string> rows;  // preformatted comma-joined lines

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void meta(std::string key, double value) { meta(std::move(key), fmt_g17(value)); }
  void meta(std::string key, int value) { meta(std::move(key), std::to_string(value)); }

  void row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    rows.push_back(std::move(line));
  }
};

inline std::string render_csv(const CsvTable& t) {
  std::string out;
  for (const auto& [k, v] : t.metadata) {
    out += "# ";
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  out += t.header;
  out += '\n';
  for (const auto& r : t.rows) {
    out += r;
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open for writing: " + path);
  const std::string body = render_csv(t);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  f.flush();
  if (!f) throw io_error("write failed: " + path);
}

}  // namespace zest
