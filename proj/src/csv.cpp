#include "lmhet/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lmhet {

namespace {

std::vector<std::string> split_record(const std::string& line, std::size_t line_no,
                                      const std::string& what) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted)
    throw InputError(what + ": unterminated quote on line " + std::to_string(line_no));
  fields.push_back(field);
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no, std::size_t col,
                    const std::string& what) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end)
    throw InputError(what + ": cannot parse '" + field + "' as a number (line " +
                     std::to_string(line_no) + ", column " + std::to_string(col + 1) + ")");
  if (!std::isfinite(value))
    throw InputError(what + ": non-finite value on line " + std::to_string(line_no));
  return value;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& what) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_record(line, line_no, what);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        throw InputError(what + ": line " + std::to_string(line_no) + " has " +
                         std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(table.header.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw InputError(what + ": file is empty");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

DataPanel read_panel_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() < 3)
    throw InputError(path + ": need a period column plus at least 2 series columns");
  if (table.rows.size() < 2) throw InputError(path + ": need at least 2 period rows");
  const std::size_t n = table.header.size() - 1;
  const std::size_t t = table.rows.size();
  DataPanel panel;
  panel.series_ids.assign(table.header.begin() + 1, table.header.end());
  panel.values.resize(n, t);
  for (std::size_t row = 0; row < t; ++row)
    for (std::size_t col = 0; col < n; ++col)
      panel.values(col, row) = parse_number(table.rows[row][col + 1], row + 2, col + 1, path);
  validate_panel(panel);
  return panel;
}

DataPanel to_log_returns(const DataPanel& levels) {
  const Index n = levels.values.rows();
  const Index t = levels.values.cols();
  if (t < 3) throw InputError("need at least 3 periods to take log returns");
  if ((levels.values.array() <= 0.0).any())
    throw InputError("log returns need strictly positive levels");
  DataPanel out;
  out.series_ids = levels.series_ids;
  out.values.resize(n, t - 1);
  for (Index i = 0; i < n; ++i)
    for (Index s = 0; s + 1 < t; ++s)
      out.values(i, s) = 100.0 * (std::log(levels.values(i, s + 1)) -
                                  std::log(levels.values(i, s)));
  return out;
}

IngestedPanel ingest_panel(const std::string& values_path, const std::string& groups_path,
                           const IngestOptions& options) {
  DataPanel panel = read_panel_csv(values_path);
  if (options.log_returns) panel = to_log_returns(panel);

  const CsvTable map = read_csv(groups_path);
  if (map.header.size() != 2)
    throw InputError(groups_path + ": expected exactly 2 columns (series id, group tag)");
  std::unordered_map<std::string, std::string> tag_of;
  for (std::size_t row = 0; row < map.rows.size(); ++row) {
    const std::string& id = map.rows[row][0];
    if (id.empty())
      throw MappingError(groups_path + ": empty series id on line " + std::to_string(row + 2));
    if (!tag_of.emplace(id, map.rows[row][1]).second)
      throw MappingError(groups_path + ": series '" + id + "' mapped more than once");
  }

  std::vector<std::string> tags;
  tags.reserve(panel.series_ids.size());
  for (const auto& id : panel.series_ids) {
    const auto it = tag_of.find(id);
    if (it == tag_of.end())
      throw MappingError("series '" + id + "' has no group assignment");
    tags.push_back(it->second);
  }
  if (tag_of.size() != panel.series_ids.size())
    throw MappingError("group map lists " + std::to_string(tag_of.size()) +
                       " series but the panel has " +
                       std::to_string(panel.series_ids.size()));

  GroupingResult grouping = group_structure(tags);
  IngestedPanel out;
  out.panel = apply_permutation(panel, grouping.permutation);
  out.groups = std::move(grouping.groups);
  out.permutation = std::move(grouping.permutation);
  return out;
}

void write_critical_values_csv(const std::string& path,
                               const std::vector<CriticalValueRow>& rows) {
  std::string content = "statistic,alpha,value,n_draws,seed\n";
  for (const auto& row : rows) {
    content += csv_escape(row.statistic);
    content += ',';
    content += format_double(row.alpha);
    content += ',';
    content += format_double(row.value);
    content += ',';
    content += std::to_string(row.n_draws);
    content += ',';
    content += std::to_string(row.seed);
    content += '\n';
  }
  write_text_file_atomic(path, content);
}

void write_experiment_csv(const std::string& path, const ExperimentResult& result) {
  std::string content =
      "design,N,T,replications,excluded,mean_r,"
      "reject_asym_lm1,se_asym_lm1,reject_asym_lm2,se_asym_lm2,"
      "reject_perm_lm1,se_perm_lm1,reject_perm_lm2,se_perm_lm2\n";
  for (const auto& cell : result.cells) {
    content += dgp_kind_name(result.config.kind);
    content += ',';
    content += std::to_string(cell.N) + ',' + std::to_string(cell.T) + ',';
    content += std::to_string(cell.replications_used) + ',' + std::to_string(cell.excluded);
    content += ',';
    content += format_double(cell.mean_r);
    for (double v : {cell.reject_asym_lm1, cell.se_asym_lm1, cell.reject_asym_lm2,
                     cell.se_asym_lm2, cell.reject_perm_lm1, cell.se_perm_lm1,
                     cell.reject_perm_lm2, cell.se_perm_lm2}) {
      content += ',';
      content += std::isnan(v) ? "" : format_double(v);
    }
    content += '\n';
  }
  write_text_file_atomic(path, content);
}

std::string format_experiment_table(const ExperimentResult& result) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "design %s, alpha %.3f, %d replications per cell\n",
                dgp_kind_name(result.config.kind).c_str(), result.config.alpha,
                result.config.replications);
  out << buf;
  out << "    N     T  mean_r   asym LM1   asym LM2   perm LM1   perm LM2  excl\n";
  for (const auto& cell : result.cells) {
    auto fmt = [&](double v) -> std::string {
      if (std::isnan(v)) return "         -";
      char b[32];
      std::snprintf(b, sizeof(b), "%10.2f", v);
      return b;
    };
    std::snprintf(buf, sizeof(buf), "%5d %5d  %6.2f %s %s %s %s %5d\n", cell.N, cell.T,
                  cell.mean_r, fmt(cell.reject_asym_lm1).c_str(),
                  fmt(cell.reject_asym_lm2).c_str(), fmt(cell.reject_perm_lm1).c_str(),
                  fmt(cell.reject_perm_lm2).c_str(), cell.excluded);
    out << buf;
  }
  return out.str();
}

}  // namespace lmhet
