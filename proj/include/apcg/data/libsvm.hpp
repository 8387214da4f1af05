#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "apcg/core/errors.hpp"
#include "apcg/core/vector_ops.hpp"
#include "apcg/data/sparse.hpp"

namespace apcg {

/// Examples as columns of A plus one label per column.
struct LabeledData {
  SparseColMatrix A;
  Vector labels;
};

/// binary: labels must be exactly +1 or -1. real: any finite value (regression).
enum class LabelMode { binary, real };

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline bool parse_index(std::string_view s, std::uint64_t& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tok;
  std::size_t p = 0;
  while (p < line.size()) {
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t' || line[p] == '\r')) ++p;
    std::size_t q = p;
    while (q < line.size() && line[q] != ' ' && line[q] != '\t' && line[q] != '\r') ++q;
    if (q > p) tok.push_back(line.substr(p, q - p));
    p = q;
  }
  return tok;
}

}  // namespace detail

/// Reads "label idx:val idx:val ..." lines with 1-based, strictly increasing
/// feature indices. Blank lines and lines starting with '#' are skipped;
/// explicit zero values are dropped. The row count is the largest index seen,
/// or `min_features` if larger.
inline LabeledData parse_libsvm(std::istream& in, LabelMode mode = LabelMode::binary,
                                std::size_t min_features = 0) {
  constexpr std::uint64_t max_index = std::numeric_limits<std::uint32_t>::max();
  SparseColMatrix::Builder b(0);
  Vector labels;
  std::size_t rows = min_features;
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok.front().front() == '#') continue;
    double label;
    if (!detail::parse_double(tok[0], label) || !std::isfinite(label))
      throw parse_error(lineno, "malformed label '" + std::string(tok[0]) + "'");
    if (mode == LabelMode::binary && label != 1.0 && label != -1.0)
      throw label_error(lineno, "label must be +1 or -1, got '" + std::string(tok[0]) + "'");
    idx.clear();
    val.clear();
    std::uint64_t prev = 0;
    for (std::size_t t = 1; t < tok.size(); ++t) {
      const auto colon = tok[t].find(':');
      if (colon == std::string_view::npos)
        throw parse_error(lineno, "expected idx:val, got '" + std::string(tok[t]) + "'");
      std::uint64_t k;
      double v;
      if (!detail::parse_index(tok[t].substr(0, colon), k) || k == 0 || k > max_index)
        throw parse_error(lineno, "bad feature index in '" + std::string(tok[t]) + "'");
      if (!detail::parse_double(tok[t].substr(colon + 1), v))
        throw parse_error(lineno, "bad feature value in '" + std::string(tok[t]) + "'");
      if (!std::isfinite(v)) throw parse_error(lineno, "non-finite feature value");
      if (k == prev) throw parse_error(lineno, "duplicate feature index " + std::to_string(k));
      if (k < prev) throw parse_error(lineno, "feature indices out of order at " + std::to_string(k));
      prev = k;
      if (v == 0.0) continue;
      idx.push_back(static_cast<std::uint32_t>(k - 1));
      val.push_back(v);
    }
    if (prev > rows) rows = static_cast<std::size_t>(prev);
    b.add_column(idx, val);
    labels.push_back(label);
  }
  if (in.bad()) throw io_error("parse_libsvm: read failure");
  b.set_rows(rows);
  return {std::move(b).build(), std::move(labels)};
}

inline LabeledData parse_libsvm(std::string_view text, LabelMode mode = LabelMode::binary,
                                std::size_t min_features = 0) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, mode, min_features);
}

/// Whole file contents; files ending in ".gz" are inflated with zlib.
inline std::string read_file(const std::string& path) {
  const bool gz = path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  std::string out;
  if (gz) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw io_error("cannot open '" + path + "'");
    char buf[1 << 16];
    int got;
    while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw io_error("corrupt gzip stream in '" + path + "'");
    return out;
  }
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw io_error("cannot open '" + path + "'");
  char buf[1 << 16];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  const bool failed = std::ferror(f) != 0;
  std::fclose(f);
  if (failed) throw io_error("read failure on '" + path + "'");
  return out;
}

inline LabeledData load_libsvm(const std::string& path, LabelMode mode = LabelMode::binary,
                               std::size_t min_features = 0) {
  return parse_libsvm(std::string_view(read_file(path)), mode, min_features);
}

/// Writes values with 17 significant digits so that parsing the output
/// reproduces the matrix bit for bit.
inline void write_libsvm(std::ostream& out, const LabeledData& data) {
  if (data.labels.size() != data.A.cols()) throw input_error("write_libsvm: one label per column");
  char buf[64];
  for (std::size_t i = 0; i < data.A.cols(); ++i) {
    const double y = data.labels[i];
    if (y == 1.0)
      out << "+1";
    else if (y == -1.0)
      out << "-1";
    else {
      std::snprintf(buf, sizeof buf, "%.17g", y);
      out << buf;
    }
    const auto idx = data.A.col_indices(i);
    const auto val = data.A.col_values(i);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      std::snprintf(buf, sizeof buf, " %u:%.17g", idx[p] + 1u, val[p]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw io_error("write_libsvm: write failure");
}

/// Columns multiplied by their labels, the form used by the dual solvers.
inline SparseColMatrix premultiply_labels(const LabeledData& data) {
  return data.A.scale_columns(data.labels);
}

}  // namespace apcg
