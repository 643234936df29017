#include "mig/harness/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mig/errors.hpp"

namespace mig::harness {

namespace {

constexpr const char* kHeader = "MIGW 1";

std::string digits17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  /// Next non-blank line; false at end of input.
  bool next(std::string& out) {
    while (std::getline(is_, out)) {
      ++line_;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.find_first_not_of(" \t") != std::string::npos) return true;
    }
    ++line_;
    return false;
  }
  int line() const noexcept { return line_; }

 private:
  std::istream& is_;
  int line_ = 0;
};

template <class T>
bool parse_fields(const std::string& s, T& a, T& b) {
  std::istringstream in(s);
  std::string ta, tb, extra;
  if (!(in >> ta >> tb) || (in >> extra)) return false;
  auto conv = [](const std::string& t, T& v) {
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    return ec == std::errc() && ptr == t.data() + t.size();
  };
  return conv(ta, a) && conv(tb, b);
}

/// Reads one record whose header line has already been consumed into `line`.
CMatrix read_record(LineReader& r, const std::string& header) {
  const auto first = header.find_first_not_of(" \t");
  const auto last = header.find_last_not_of(" \t");
  if (header.substr(first, last - first + 1) != kHeader) {
    throw ParseError("matrix file: expected header 'MIGW 1'", r.line());
  }
  std::string line;
  if (!r.next(line)) throw ParseError("matrix file: missing dimension line", r.line());
  long long n = 0, m = 0;
  if (!parse_fields(line, n, m) || n < 1 || m < 1) {
    throw ParseError("matrix file: expected two positive integers 'n m'", r.line());
  }
  CMatrix a(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (!r.next(line)) {
        std::ostringstream os;
        os << "matrix file: missing entry (" << i << ", " << j << ")";
        throw ParseError(os.str(), r.line());
      }
      double re = 0.0, im = 0.0;
      if (!parse_fields(line, re, im)) throw ParseError("matrix file: expected 're im'", r.line());
      a(i, j) = Complex(re, im);
    }
  }
  return a;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path.string());
  return is;
}

}  // namespace

void write_matrix(std::ostream& os, const CMatrix& a) {
  os << kHeader << '\n' << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      os << digits17(a(i, j).real()) << ' ' << digits17(a(i, j).imag()) << '\n';
    }
  }
}

void write_matrix(const std::filesystem::path& path, const CMatrix& a) {
  auto os = open_out(path);
  write_matrix(os, a);
}

void write_matrices(const std::filesystem::path& path, const std::vector<CMatrix>& stack) {
  auto os = open_out(path);
  for (const auto& a : stack) write_matrix(os, a);
}

std::vector<CMatrix> read_matrices(std::istream& is) {
  LineReader r(is);
  std::vector<CMatrix> out;
  std::string line;
  while (r.next(line)) out.push_back(read_record(r, line));
  if (out.empty()) throw ParseError("matrix file: empty, expected header 'MIGW 1'", 1);
  return out;
}

std::vector<CMatrix> read_matrices(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_matrices(is);
}

CMatrix read_matrix(const std::filesystem::path& path) {
  auto is = open_in(path);
  LineReader r(is);
  std::string line;
  if (!r.next(line)) throw ParseError("matrix file: empty, expected header 'MIGW 1'", r.line());
  CMatrix a = read_record(r, line);
  if (r.next(line)) throw ParseError("matrix file: unexpected content after matrix", r.line());
  return a;
}

CMatrix io_roundtrip(const std::filesystem::path& path, const CMatrix& a) {
  write_matrix(path, a);
  return read_matrix(path);
}

}  // namespace mig::harness
