#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "combhelper/error.hpp"
#include "combhelper/gcn.hpp"

namespace combhelper {

// Text layout:
//   combhelper-gcn 1
//   dims d0 d1 ... dL
//   seed <init seed>
//   bias <0|1>
//   layer <k> self <rows> <cols>      followed by <rows> lines of values
//   layer <k> neighbor <rows> <cols>  likewise
//   layer <k> bias 1 <cols>           only when bias is 1
// Values use the shortest round-trip decimal form, so loading is exact.

namespace detail {

inline std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("cannot format double");
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& tok, const std::string& source, std::size_t line) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(source, line, "not a number: '" + tok + "'");
  return x;
}

}  // namespace detail

inline void write_params(std::ostream& out, const GcnParams& p) {
  out << "combhelper-gcn 1\ndims";
  for (int d : p.dims) out << ' ' << d;
  out << "\nseed " << p.seed << "\nbias " << (p.has_bias() ? 1 : 0) << '\n';
  auto dump = [&](std::size_t k, const char* name, const Matrix& m) {
    out << "layer " << k << ' ' << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        out << (c ? " " : "") << detail::format_double(m(r, c));
      out << '\n';
    }
  };
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    dump(k, "self", p.layers[k].self);
    dump(k, "neighbor", p.layers[k].neighbor);
    if (p.has_bias()) dump(k, "bias", p.layers[k].bias);
  }
}

inline GcnParams read_params(std::istream& in, const std::string& source) {
  std::size_t lineno = 0;
  std::string line;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError(source, lineno + 1, "unexpected end of file");
    ++lineno;
    return std::istringstream(line);
  };

  GcnParams p;
  {
    auto ls = next_line();
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    if (magic != "combhelper-gcn" || version != 1)
      throw ParseError(source, lineno, "not a combhelper-gcn v1 parameter file");
  }
  {
    auto ls = next_line();
    std::string key;
    ls >> key;
    if (key != "dims") throw ParseError(source, lineno, "expected dims");
    for (int d; ls >> d;) p.dims.push_back(d);
    if (p.dims.size() < 2) throw ParseError(source, lineno, "need at least two widths");
  }
  {
    auto ls = next_line();
    std::string key;
    ls >> key >> p.seed;
    if (key != "seed" || ls.fail()) throw ParseError(source, lineno, "expected seed");
  }
  bool with_bias = false;
  {
    auto ls = next_line();
    std::string key;
    int flag = -1;
    ls >> key >> flag;
    if (key != "bias" || (flag != 0 && flag != 1)) throw ParseError(source, lineno, "expected bias 0|1");
    with_bias = flag == 1;
  }
  auto read_matrix = [&](std::size_t k, const std::string& name, Eigen::Index want_rows) {
    auto ls = next_line();
    std::string key, got_name;
    std::size_t got_k = 0;
    Eigen::Index rows = 0, cols = 0;
    ls >> key >> got_k >> got_name >> rows >> cols;
    if (key != "layer" || got_k != k || got_name != name || rows != want_rows ||
        cols != p.dims[k + 1])
      throw ParseError(source, lineno, "expected layer " + std::to_string(k) + " " + name);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      auto row = next_line();
      std::string tok;
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(row >> tok)) throw ParseError(source, lineno, "row too short");
        m(r, c) = detail::parse_double(tok, source, lineno);
      }
    }
    return m;
  };
  for (std::size_t k = 0; k + 1 < p.dims.size(); ++k) {
    LayerWeights l;
    l.self = read_matrix(k, "self", p.dims[k]);
    l.neighbor = read_matrix(k, "neighbor", p.dims[k]);
    if (with_bias) l.bias = read_matrix(k, "bias", 1);
    p.layers.push_back(std::move(l));
  }
  return p;
}

inline void save_params(const GcnParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  write_params(out, p);
  if (!out) throw IoError(path, "write failed");
}

inline GcnParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open parameter file");
  return read_params(in, path);
}

}  // namespace combhelper
