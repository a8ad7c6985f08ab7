#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "nst/types.hpp"

namespace nst {

// Plain-text matrix format: first line "M N real|complex", then M rows of
// whitespace-separated entries. Complex entries are written "re+imi" with an
// explicit sign, e.g. "1.5-2.25i". Vectors are stored as L x 1 matrices.
// Floating-point is printed with 17 significant digits so files round-trip
// losslessly.

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string format_entry(double x) { return format_real(x); }

inline std::string format_entry(const std::complex<double>& z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

inline std::complex<double> parse_complex(const std::string& tok) {
  if (tok.empty() || tok.back() != 'i')
    throw std::invalid_argument("matrix file: bad complex entry '" + tok + "'");
  // split at the sign of the imaginary part: the last '+'/'-' not preceded
  // by an exponent marker
  std::size_t split = std::string::npos;
  for (std::size_t i = tok.size() - 1; i > 0; --i) {
    const char c = tok[i];
    if ((c == '+' || c == '-') && tok[i - 1] != 'e' && tok[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos)
    throw std::invalid_argument("matrix file: bad complex entry '" + tok + "'");
  try {
    const double re = std::stod(tok.substr(0, split));
    const double im = std::stod(tok.substr(split, tok.size() - split - 1));
    return {re, im};
  } catch (const std::exception&) {
    throw std::invalid_argument("matrix file: bad complex entry '" + tok + "'");
  }
}

}  // namespace detail

template <class Scalar>
void write_matrix(std::ostream& os, const Matrix<Scalar>& m) {
  os << m.rows() << ' ' << m.cols() << ' '
     << (is_complex_v<Scalar> ? "complex" : "real") << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << detail::format_entry(m(i, j));
    }
    os << '\n';
  }
}

template <class Scalar>
void write_matrix(const std::string& path, const Matrix<Scalar>& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_matrix(os, m);
  if (!os) throw std::runtime_error("write failed: " + path);
}

template <class Scalar>
void write_vector(const std::string& path, const Vector<Scalar>& v) {
  Matrix<Scalar> m = v;
  write_matrix(path, m);
}

/// A matrix read from the text format: exactly one of `real`/`cplx` is
/// populated, per the header's field tag.
struct TextMatrix {
  bool is_complex = false;
  MatrixXd real;
  MatrixXcd cplx;

  Index rows() const { return is_complex ? cplx.rows() : real.rows(); }
  Index cols() const { return is_complex ? cplx.cols() : real.cols(); }

  VectorXd real_vector() const {
    if (is_complex) throw std::invalid_argument("expected a real vector file");
    if (real.cols() != 1) throw std::invalid_argument("expected a single-column vector file");
    return real.col(0);
  }

  VectorXcd complex_vector() const {
    if (!is_complex) {
      if (real.cols() != 1) throw std::invalid_argument("expected a single-column vector file");
      return real.col(0).cast<std::complex<double>>();
    }
    if (cplx.cols() != 1) throw std::invalid_argument("expected a single-column vector file");
    return cplx.col(0);
  }
};

inline TextMatrix read_matrix(std::istream& is, const std::string& label = "<stream>") {
  std::string header;
  if (!std::getline(is, header))
    throw std::runtime_error("matrix file " + label + ": missing header");
  std::istringstream hs(header);
  Index rows = 0, cols = 0;
  std::string field;
  if (!(hs >> rows >> cols >> field) || rows < 1 || cols < 1 ||
      (field != "real" && field != "complex"))
    throw std::runtime_error("matrix file " + label +
                             ": header must be 'M N real|complex'");
  TextMatrix out;
  out.is_complex = field == "complex";
  if (out.is_complex)
    out.cplx.resize(rows, cols);
  else
    out.real.resize(rows, cols);
  std::string tok;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(is >> tok))
        throw std::runtime_error("matrix file " + label + ": truncated at row " +
                                 std::to_string(i));
      if (out.is_complex) {
        out.cplx(i, j) = detail::parse_complex(tok);
      } else {
        try {
          out.real(i, j) = std::stod(tok);
        } catch (const std::exception&) {
          throw std::runtime_error("matrix file " + label + ": bad entry '" + tok + "'");
        }
      }
    }
  }
  return out;
}

inline TextMatrix read_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_matrix(is, path);
}

}  // namespace nst
