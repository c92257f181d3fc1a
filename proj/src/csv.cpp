#include "pce/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace pce {

void write_dataset_csv(const std::string& path, const Dataset& data) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (Index j = 0; j < data.dim(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  char buf[40];
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.inputs(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.outputs[i]);
    out << buf << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0' && *end != '\r'))
    throw IoError("non-numeric field '" + s + "' " + where);
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw IoError(path + ": header must be x1,...,xn,y");
  const Index n = static_cast<Index>(header.size()) - 1;
  for (Index j = 0; j < n; ++j)
    if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j + 1))
      throw IoError(path + ": header must be x1,...,xn,y");

  std::vector<Vector> rows;
  Index lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != n + 1)
      throw IoError(path + ": line " + std::to_string(lineno) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(n + 1));
    Vector row(n + 1);
    for (Index j = 0; j <= n; ++j)
      row[j] = parse_double(fields[static_cast<std::size_t>(j)],
                            "at line " + std::to_string(lineno) + " of " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": no data rows");

  Dataset data{Matrix(static_cast<Index>(rows.size()), n), Vector(static_cast<Index>(rows.size()))};
  for (Index i = 0; i < data.size(); ++i) {
    data.inputs.row(i) = rows[static_cast<std::size_t>(i)].head(n).transpose();
    data.outputs[i] = rows[static_cast<std::size_t>(i)][n];
  }
  data.validate();
  return data;
}

}  // namespace pce
