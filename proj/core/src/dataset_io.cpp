#include "pconf/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pconf/errors.hpp"

namespace pconf {

namespace {

std::vector<std::string> split_comma(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Validates "x1,...,xd,<last>" and returns d.
int parse_header(const std::string& path, const std::string& line,
                 const std::string& last) {
  auto fields = split_comma(line);
  if (fields.size() < 2)
    throw InputFormatError(path + ": header must be x1,...,xd," + last);
  if (fields.back() != last)
    throw InputFormatError(path + ": missing column '" + last +
                           "' (found '" + fields.back() + "')");
  for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
    if (fields[i] != "x" + std::to_string(i + 1))
      throw InputFormatError(path + ": expected column 'x" + std::to_string(i + 1) +
                             "', found '" + fields[i] + "'");
  }
  return static_cast<int>(fields.size()) - 1;
}

double parse_double(const std::string& path, int row, const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputFormatError(path + ": row " + std::to_string(row) +
                           ": cannot parse value '" + s + "'");
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::vector<PconfSample> read_pconf_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputFormatError(path + ": empty file");
  const int d = parse_header(path, strip_cr(line), "r");

  std::vector<PconfSample> samples;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_comma(line);
    if (static_cast<int>(fields.size()) != d + 1)
      throw InputFormatError(path + ": row " + std::to_string(row) +
                             ": expected " + std::to_string(d + 1) + " fields");
    PconfSample s;
    s.x.resize(d);
    for (int j = 0; j < d; ++j) s.x[j] = parse_double(path, row, fields[j]);
    s.r = parse_double(path, row, fields.back());
    if (!(s.r >= 0.0 && s.r <= 1.0))
      throw InputFormatError(path + ": row " + std::to_string(row) +
                             ": confidence outside [0,1]");
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<LabeledSample> read_labeled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputFormatError(path + ": empty file");
  const int d = parse_header(path, strip_cr(line), "y");

  std::vector<LabeledSample> samples;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_comma(line);
    if (static_cast<int>(fields.size()) != d + 1)
      throw InputFormatError(path + ": row " + std::to_string(row) +
                             ": expected " + std::to_string(d + 1) + " fields");
    LabeledSample s;
    s.x.resize(d);
    for (int j = 0; j < d; ++j) s.x[j] = parse_double(path, row, fields[j]);
    const std::string& ys = fields.back();
    if (ys == "1" || ys == "+1")
      s.y = 1;
    else if (ys == "-1")
      s.y = -1;
    else
      throw InputFormatError(path + ": row " + std::to_string(row) +
                             ": label must be 1 or -1, found '" + ys + "'");
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_pconf_csv(const std::string& path, std::span<const PconfSample> samples) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw IoError("cannot open for writing: " + path);
  std::string buf;
  const int d = samples.empty() ? 0 : static_cast<int>(samples.front().x.size());
  for (int j = 1; j <= d; ++j) buf += "x" + std::to_string(j) + ",";
  buf += "r\n";
  for (const auto& s : samples) {
    for (Eigen::Index j = 0; j < s.x.size(); ++j) {
      format_double(buf, s.x[j]);
      buf += ',';
    }
    format_double(buf, s.r);
    buf += '\n';
  }
  out << buf;
  if (!out) throw IoError("failed writing: " + path);
}

void write_labeled_csv(const std::string& path, std::span<const LabeledSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  std::string buf;
  const int d = samples.empty() ? 0 : static_cast<int>(samples.front().x.size());
  for (int j = 1; j <= d; ++j) buf += "x" + std::to_string(j) + ",";
  buf += "y\n";
  for (const auto& s : samples) {
    for (Eigen::Index j = 0; j < s.x.size(); ++j) {
      format_double(buf, s.x[j]);
      buf += ',';
    }
    buf += s.y > 0 ? "1" : "-1";
    buf += '\n';
  }
  out << buf;
  if (!out) throw IoError("failed writing: " + path);
}

std::string detect_csv_kind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputFormatError(path + ": empty file");
  auto fields = split_comma(strip_cr(line));
  if (fields.empty()) throw InputFormatError(path + ": empty header");
  if (fields.back() == "r") return "pconf";
  if (fields.back() == "y") return "labeled";
  throw InputFormatError(path + ": last header column must be 'r' or 'y'");
}

}  // namespace pconf
