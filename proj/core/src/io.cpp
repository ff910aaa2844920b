#include "ultra/io.hpp"

#include "ultra/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace ultra {

std::string format_number(double v) {
  std::array<char, 40> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::string csv_field(std::string_view field) {
  // A leading '#' would read back as a comment line.
  if (field.find_first_of(",\"\n\r") == std::string_view::npos && !field.starts_with('#')) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t p = 0; p < line.size(); ++p) {
    const char ch = line[p];
    if (quoted) {
      if (ch == '"') {
        if (p + 1 < line.size() && line[p + 1] == '"') {
          current += '"';
          ++p;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (quoted) throw IoError("unterminated quoted CSV field");
  fields.push_back(std::move(current));
  return fields;
}

namespace {

double parse_number(const std::string& text, std::size_t line_no) {
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw IoError("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
  }
  return v;
}

bool next_record(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

LabeledTable parse_table(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) throw IoError("table has no header row");

  LabeledTable table;
  auto header = split_csv_record(line);
  table.corner = header.front();
  table.col_labels.assign(header.begin() + 1, header.end());
  const std::size_t cols = table.col_labels.size();

  std::vector<double> flat;
  while (next_record(in, line, line_no)) {
    auto fields = split_csv_record(line);
    if (fields.size() != cols + 1) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols + 1) +
                    " fields, got " + std::to_string(fields.size()));
    }
    table.row_labels.push_back(std::move(fields.front()));
    for (std::size_t c = 1; c <= cols; ++c) flat.push_back(parse_number(fields[c], line_no));
  }

  const auto rows = static_cast<Index>(table.row_labels.size());
  table.values.resize(rows, static_cast<Index>(cols));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < static_cast<Index>(cols); ++c) {
      table.values(r, c) = flat[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
    }
  }
  return table;
}

LabeledTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_table(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_table(std::ostream& out, const LabeledTable& table) {
  out << csv_field(table.corner);
  for (const auto& label : table.col_labels) out << ',' << csv_field(label);
  out << '\n';
  for (Index r = 0; r < table.values.rows(); ++r) {
    out << csv_field(table.row_labels[static_cast<std::size_t>(r)]);
    for (Index c = 0; c < table.values.cols(); ++c) out << ',' << format_number(table.values(r, c));
    out << '\n';
  }
}

DissimilarityMatrix to_dissimilarity(const LabeledTable& table) {
  if (table.values.rows() != table.values.cols()) {
    throw DimensionError("distance table is " + std::to_string(table.values.rows()) + "x" +
                         std::to_string(table.values.cols()) + ", expected square");
  }
  if (table.row_labels != table.col_labels) {
    throw DimensionError("distance table row labels differ from its column labels");
  }
  return DissimilarityMatrix(table.values, table.row_labels);
}

LabeledTable to_table(const DissimilarityMatrix& d) {
  return {"", d.labels(), d.labels(), d.values()};
}

CoordinateMatrix to_coordinates(const LabeledTable& table) {
  return CoordinateMatrix(table.values, table.row_labels);
}

LabeledTable to_table(const CoordinateMatrix& coords) {
  Labels axes;
  for (Index c = 0; c < coords.dimensions(); ++c) axes.push_back("F" + std::to_string(c + 1));
  return {"", coords.labels(), std::move(axes), coords.coords()};
}

FrequencyMatrix to_frequency(const LabeledTable& table) {
  return FrequencyMatrix(table.values, table.row_labels, table.col_labels);
}

LabeledTable to_table(const FrequencyMatrix& f) {
  return {"", f.row_labels(), f.col_labels(), f.values()};
}

void write_merge_table(std::ostream& out, const Dendrogram& h) {
  out << "left,right,height,size\n";
  for (const Merge& m : h.merges()) {
    out << m.left << ',' << m.right << ',' << format_number(m.height) << ',' << m.size << '\n';
  }
}

Dendrogram parse_merge_table(std::istream& in, Labels leaf_labels) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) throw IoError("merge table has no header row");
  if (split_csv_record(line) != std::vector<std::string>{"left", "right", "height", "size"}) {
    throw IoError("merge table header must be left,right,height,size");
  }
  std::vector<Merge> merges;
  while (next_record(in, line, line_no)) {
    const auto f = split_csv_record(line);
    if (f.size() != 4) throw IoError("line " + std::to_string(line_no) + ": expected 4 fields");
    auto as_index = [&](const std::string& s) {
      const double v = parse_number(s, line_no);
      if (v != static_cast<double>(static_cast<Index>(v))) {
        throw IoError("line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
      }
      return static_cast<Index>(v);
    };
    merges.push_back({as_index(f[0]), as_index(f[1]), parse_number(f[2], line_no), as_index(f[3])});
  }
  const auto leaves = static_cast<Index>(merges.size()) + 1;
  return Dendrogram(leaves, std::move(merges), std::move(leaf_labels));
}

void write_comment_header(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& line : lines) out << "# " << line << '\n';
}

}  // namespace ultra
