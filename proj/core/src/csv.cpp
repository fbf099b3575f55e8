#include "koreg/csv.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace koreg {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  for (auto& f : fields) {
    auto b = f.find_first_not_of(" \t\"");
    auto e = f.find_last_not_of(" \t\"");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return fields;
}

double parse_field(const std::string& s, std::size_t line, std::size_t col) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc{} || ptr != last) {
    throw InvalidArgument(fmt::format("line {}, column {}: cannot parse '{}' as a number", line, col, s));
  }
  return v;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

Dataset read_dataset_csv(std::istream& in, const ModelFamily& family) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (lineno == 0 || line.find_first_not_of(" \t\r") == std::string::npos) {
    throw InvalidArgument("empty CSV input: expected a header row");
  }
  const auto header = split_fields(line);
  std::ptrdiff_t ycol = -1;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y") {
      if (ycol >= 0) throw InvalidArgument("header has more than one column named 'y'");
      ycol = static_cast<std::ptrdiff_t>(c);
    } else {
      names.push_back(header[c].empty() ? fmt::format("X{}", names.size() + 1) : header[c]);
    }
  }
  if (ycol < 0) throw InvalidArgument("header has no column named 'y'");

  std::vector<double> xs;
  std::vector<double> ys;
  const std::size_t width = header.size();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      throw InvalidArgument(fmt::format("line {}: expected {} fields, found {}", lineno, width, fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const double v = parse_field(fields[c], lineno, c + 1);
      if (static_cast<std::ptrdiff_t>(c) == ycol) {
        ys.push_back(v);
      } else {
        xs.push_back(v);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(names.size());
  Matrix X(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = xs[static_cast<std::size_t>(i * p + j)];
  }
  Vector y = Eigen::Map<Vector>(ys.data(), n);
  return Dataset(std::move(X), std::move(y), family, std::move(names));
}

Dataset read_dataset_csv(const std::string& path, const ModelFamily& family) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open '{}'", path));
  return read_dataset_csv(in, family);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (const auto& name : data.names()) out << name << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) out << format_number(data.X()(i, j)) << ',';
    out << format_number(data.y()[i]) << '\n';
  }
}

void write_path_csv(std::ostream& out, const LassoPath& path, const std::vector<std::string>& coef_names) {
  out << "lambda";
  for (Eigen::Index k = 0; k < path.intercepts.cols(); ++k) out << ",alpha_" << k + 1;
  for (Eigen::Index j = 0; j < path.coefs.cols(); ++j) {
    if (static_cast<Eigen::Index>(coef_names.size()) == path.coefs.cols()) {
      out << ',' << coef_names[static_cast<std::size_t>(j)];
    } else {
      out << ",beta_" << j + 1;
    }
  }
  out << '\n';
  for (Eigen::Index g = 0; g < path.grid_size(); ++g) {
    out << format_number(path.lambdas[g]);
    for (Eigen::Index k = 0; k < path.intercepts.cols(); ++k) out << ',' << format_number(path.intercepts(g, k));
    for (Eigen::Index j = 0; j < path.coefs.cols(); ++j) out << ',' << format_number(path.coefs(g, j));
    out << '\n';
  }
}

}  // namespace koreg
