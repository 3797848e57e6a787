#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tlkit/cli.hpp"

namespace tlkit::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& s, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw IngestError("non-numeric cell at row " + std::to_string(row) + ", column " + std::to_string(col) + ": '" +
                      s + "'");
  return v;
}

}  // namespace

LabeledDataset ingest_csv_text(const std::string& text, bool map01) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) header = split(line);
  }
  if (header.empty()) throw IngestError("empty file");
  std::size_t ycol = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == "y") {
      if (ycol != header.size()) throw IngestError("header has more than one 'y' column");
      ycol = i;
    }
  if (ycol == header.size()) throw IngestError("header has no 'y' column");
  LabeledDataset d(header.size() - 1);
  std::vector<double> row(d.dim);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw IngestError("row " + std::to_string(lineno) + " has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    int label = 0;
    for (std::size_t c = 0, k = 0; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], lineno, c + 1);
      if (c == ycol) {
        if (v == 1.0) label = 1;
        else if (v == -1.0 && !map01) label = -1;
        else if (v == 0.0 && map01) label = -1;
        else
          throw IngestError("label outside the domain at row " + std::to_string(lineno) + ": '" + cells[c] + "'" +
                            (v == 0.0 ? " (0/1 labels need the mapping flag)" : ""));
      } else {
        row[k++] = v;
      }
    }
    d.push(row, label);
  }
  if (d.empty()) throw IngestError("no data rows");
  return d;
}

LabeledDataset ingest_csv(const std::string& path, bool map01) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingest_csv_text(ss.str(), map01);
}

std::string to_csv(const LabeledDataset& d) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t j = 0; j < d.dim; ++j) out << 'x' << j + 1 << ',';
  out << "y\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double v : d.row(i)) out << v << ',';
    out << d.label(i) << '\n';
  }
  return out.str();
}

}  // namespace tlkit::cli
