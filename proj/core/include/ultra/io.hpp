#pragma once

#include "ultra/hierarchy.hpp"
#include "ultra/matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ultra {

/// Dense labelled matrix as stored on disk: a header row of column labels
/// (after a corner cell) and one leading label per row. Lines starting with
/// '#' are comments.
struct LabeledTable {
  std::string corner;
  Labels row_labels;
  Labels col_labels;
  Eigen::MatrixXd values;
};

/// 17 significant digits, so values survive a text round trip exactly.
std::string format_number(double v);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view field);

/// Splits one CSV record, honouring double quotes.
std::vector<std::string> split_csv_record(std::string_view line);

LabeledTable parse_table(std::istream& in);
LabeledTable read_table(const std::filesystem::path& path);
void write_table(std::ostream& out, const LabeledTable& table);

/// Square table with identical row and column labels.
DissimilarityMatrix to_dissimilarity(const LabeledTable& table);
LabeledTable to_table(const DissimilarityMatrix& d);

CoordinateMatrix to_coordinates(const LabeledTable& table);
/// Axis columns are named F1..Fp.
LabeledTable to_table(const CoordinateMatrix& coords);

FrequencyMatrix to_frequency(const LabeledTable& table);
LabeledTable to_table(const FrequencyMatrix& f);

/// Merge table with columns left,right,height,size.
void write_merge_table(std::ostream& out, const Dendrogram& h);
Dendrogram parse_merge_table(std::istream& in, Labels leaf_labels = {});

/// Writes `lines` as "# line" comments.
void write_comment_header(std::ostream& out, const std::vector<std::string>& lines);

}  // namespace ultra
