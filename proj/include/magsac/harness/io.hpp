#ifndef MAGSAC_HARNESS_IO_HPP_
#define MAGSAC_HARNESS_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"

namespace magsac::harness {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline bool is_skippable(std::string_view line) { return line.empty() || line.front() == '#'; }

}  // namespace detail

inline std::string labels_path(const std::filesystem::path& path) { return path.string() + ".labels"; }

/// Parses "x1 y1 x2 y2" or "x y" rows from a stream. Every data row must
/// have the same arity. `line` numbers in errors are 1-based.
inline PointSet parse_correspondences(std::istream& in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (detail::is_skippable(line)) continue;
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 2 && tokens.size() != 4)
      throw ParseError(line_no, "expected 2 or 4 numbers, got " + std::to_string(tokens.size()));
    if (dim == 0) dim = tokens.size();
    if (tokens.size() != dim) throw ParseError(line_no, "inconsistent column count");
    for (const auto tok : tokens) {
      double v = 0.0;
      if (!detail::parse_double(tok, v)) throw ParseError(line_no, "not a number: '" + std::string(tok) + "'");
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
      coords.push_back(v);
    }
  }
  if (dim == 0) throw ParseError(line_no, "no data rows");
  return PointSet(dim, std::move(coords));
}

inline std::vector<bool> parse_labels(std::istream& in) {
  std::vector<bool> mask;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (detail::is_skippable(line)) continue;
    if (line == "0")
      mask.push_back(false);
    else if (line == "1")
      mask.push_back(true);
    else
      throw ParseError(line_no, "label must be 0 or 1");
  }
  return mask;
}

/// Loads a correspondence file plus its optional "<path>.labels" sidecar.
inline PointSet load_correspondences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  PointSet points = parse_correspondences(in);
  const std::filesystem::path sidecar = labels_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream lab(sidecar);
    if (!lab) throw Error(ErrorCode::kInvalidArgument, "cannot open " + sidecar.string());
    points.set_gt_inlier_mask(parse_labels(lab));
  }
  return points;
}

inline void write_correspondences(std::ostream& out, const PointSet& points) {
  char buf[32];
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t c = 0; c < points.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", points(i, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

/// Writes the points and, when present, the ground-truth labels sidecar.
inline void save_correspondences(const std::filesystem::path& path, const PointSet& points) {
  {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
    write_correspondences(out, points);
  }
  if (const auto& mask = points.gt_inlier_mask()) {
    std::ofstream lab(labels_path(path));
    if (!lab) throw Error(ErrorCode::kInvalidArgument, "cannot write " + labels_path(path));
    for (bool b : *mask) lab << (b ? "1\n" : "0\n");
  }
}

}  // namespace magsac::harness

#endif  // MAGSAC_HARNESS_IO_HPP_
