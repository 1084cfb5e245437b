#pragma once

// Text file formats.
//
//   setfn v1
//   n <int>
//   kind dense|sparse
//   model none|1|2|3|4|5
//   <mask> <value>
//   ...
//
// Covariance matrices are plain CSV, one row per line.

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "setsp/powerset.hpp"

namespace setsp {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &reason,
             const std::string &source = {})
      : std::runtime_error((source.empty() ? "" : source + ":") + "line " +
                           std::to_string(line) + ": " + reason),
        line_(line), reason_(reason) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string &reason() const noexcept { return reason_; }

private:
  std::size_t line_;
  std::string reason_;
};

enum class StorageKind { Dense, Sparse };

struct SetFnDocument {
  std::optional<Model> model; // nullopt for plain signals
  std::variant<SetFunction, SparseSetFunction> data;

  [[nodiscard]] const GroundSet &ground() const {
    return std::visit([](const auto &f) -> const GroundSet & { return f.ground(); },
                      data);
  }
  [[nodiscard]] StorageKind kind() const {
    return std::holds_alternative<SetFunction>(data) ? StorageKind::Dense
                                                     : StorageKind::Sparse;
  }
  [[nodiscard]] SetFunction to_dense() const {
    if (const auto *d = std::get_if<SetFunction>(&data))
      return *d;
    return std::get<SparseSetFunction>(data).densify();
  }
  [[nodiscard]] SparseSetFunction to_sparse() const {
    if (const auto *s = std::get_if<SparseSetFunction>(&data))
      return *s;
    return SparseSetFunction::from_dense(std::get<SetFunction>(data));
  }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
      ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r')
      ++i;
    if (i > b)
      out.push_back(s.substr(b, i - b));
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view tok) {
  T v{};
  const auto *end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    return std::nullopt;
  return v;
}

inline std::string_view header_value(std::istream &in, std::size_t line_no,
                                     std::string &line, std::string_view key) {
  if (!std::getline(in, line))
    throw ParseError(line_no, "missing '" + std::string(key) + "' header");
  const auto toks = split_ws(line);
  if (toks.size() != 2 || toks[0] != key)
    throw ParseError(line_no, "expected '" + std::string(key) + " <value>'");
  return toks[1];
}

inline void write_header(std::ostream &out, const GroundSet &g,
                         StorageKind kind, std::optional<Model> model) {
  out << "setfn v1\n";
  out << "n " << g.size() << '\n';
  out << "kind " << (kind == StorageKind::Dense ? "dense" : "sparse") << '\n';
  out << "model ";
  if (model)
    out << to_int(*model);
  else
    out << "none";
  out << '\n';
}

} // namespace detail

[[nodiscard]] inline SetFnDocument parse_setfn(std::istream &in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || detail::trim(line) != "setfn v1")
    throw ParseError(1, "expected 'setfn v1'");

  ++line_no;
  const auto n_tok = detail::header_value(in, line_no, line, "n");
  const auto n = detail::parse_number<int>(n_tok);
  if (!n)
    throw ParseError(line_no, "ground set size is not an integer");
  if (*n < 0 || *n > kMaxSparseElements)
    throw ParseError(line_no, "ground set size " + std::to_string(*n) +
                                  " out of range");

  ++line_no;
  const std::string kind_tok(detail::header_value(in, line_no, line, "kind"));
  StorageKind kind;
  if (kind_tok == "dense")
    kind = StorageKind::Dense;
  else if (kind_tok == "sparse")
    kind = StorageKind::Sparse;
  else
    throw ParseError(line_no, "kind must be 'dense' or 'sparse'");
  if (kind == StorageKind::Dense && *n > kMaxDenseElements)
    throw ParseError(line_no, "dense files support n <= " +
                                  std::to_string(kMaxDenseElements));

  ++line_no;
  const std::string model_tok(detail::header_value(in, line_no, line, "model"));
  std::optional<Model> model;
  if (model_tok != "none") {
    const auto k = detail::parse_number<int>(model_tok);
    if (!k || *k < 1 || *k > 5)
      throw ParseError(line_no, "model must be 'none' or 1..5");
    model = static_cast<Model>(*k);
  }

  const GroundSet g(*n);
  std::vector<double> dense_values;
  std::vector<bool> seen;
  SparseSetFunction sparse(g);
  if (kind == StorageKind::Dense) {
    dense_values.assign(g.powerset_size(), 0.0);
    seen.assign(g.powerset_size(), false);
  }
  std::uint64_t count = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = detail::split_ws(line);
    if (toks.empty())
      continue;
    if (toks.size() != 2)
      throw ParseError(line_no, "expected '<mask> <value>'");
    const auto mask = detail::parse_number<mask_t>(toks[0]);
    if (!mask)
      throw ParseError(line_no, "subset index is not a non-negative integer");
    if (!g.contains(*mask))
      throw ParseError(line_no, "subset index " + std::to_string(*mask) +
                                    " >= 2^" + std::to_string(*n));
    const auto value = detail::parse_number<double>(toks[1]);
    if (!value)
      throw ParseError(line_no, "value is not a number");
    if (kind == StorageKind::Dense) {
      if (seen[*mask])
        throw ParseError(line_no,
                         "duplicate subset index " + std::to_string(*mask));
      seen[*mask] = true;
      dense_values[*mask] = *value;
    } else {
      if (sparse.entries().contains(*mask))
        throw ParseError(line_no,
                         "duplicate subset index " + std::to_string(*mask));
      sparse.set(*mask, *value);
    }
    ++count;
  }

  if (kind == StorageKind::Dense) {
    if (count != g.powerset_size())
      throw ParseError(line_no, "dense file lists " + std::to_string(count) +
                                    " of " +
                                    std::to_string(g.powerset_size()) +
                                    " subsets");
    return {model, SetFunction(g, std::move(dense_values))};
  }
  return {model, std::move(sparse)};
}

[[nodiscard]] inline SetFnDocument read_setfn(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  try {
    return parse_setfn(in);
  } catch (const ParseError &e) {
    throw ParseError(e.line(), e.reason(), path);
  }
}

inline void write_setfn(std::ostream &out, const SetFunction &s,
                        std::optional<Model> model = std::nullopt) {
  detail::write_header(out, s.ground(), StorageKind::Dense, model);
  std::string buf;
  for (mask_t a = 0; a < s.size(); ++a) {
    buf.clear();
    buf += std::to_string(a);
    buf += ' ';
    buf += detail::format_double(s[a]);
    buf += '\n';
    out << buf;
  }
}

inline void write_setfn(std::ostream &out, const SparseSetFunction &s,
                        std::optional<Model> model = std::nullopt) {
  detail::write_header(out, s.ground(), StorageKind::Sparse, model);
  for (const auto &[a, v] : s.entries())
    out << a << ' ' << detail::format_double(v) << '\n';
}

inline void write_setfn(std::ostream &out, const Spectrum &s) {
  write_setfn(out, s.as_set_function(), s.model());
}

template <class F>
void write_setfn_file(const std::string &path, const F &f) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_setfn(out, f);
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

template <class F>
void write_setfn_file(const std::string &path, const F &f,
                      std::optional<Model> model) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_setfn(out, f, model);
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

// Square matrix of reals, row-major rows.
using DenseRows = std::vector<std::vector<double>>;

[[nodiscard]] inline DenseRows parse_covariance_csv(std::istream &in) {
  DenseRows rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty())
      continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const auto cell = detail::trim(rest.substr(0, comma));
      const auto v = detail::parse_number<double>(cell);
      if (!v)
        throw ParseError(line_no, "non-numeric covariance entry '" +
                                      std::string(cell) + "'");
      row.push_back(*v);
      if (comma == std::string_view::npos)
        break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != rows.size())
      throw ParseError(i + 1, "covariance must be square: row has " +
                                  std::to_string(rows[i].size()) +
                                  " entries, expected " +
                                  std::to_string(rows.size()));
  return rows;
}

[[nodiscard]] inline DenseRows read_covariance_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return parse_covariance_csv(in);
}

inline void write_covariance_csv(std::ostream &out, const DenseRows &rows) {
  for (const auto &row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j)
        out << ',';
      out << detail::format_double(row[j]);
    }
    out << '\n';
  }
}

} // namespace setsp
