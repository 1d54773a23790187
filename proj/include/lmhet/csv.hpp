#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lmhet/experiment.hpp"
#include "lmhet/panel.hpp"

namespace lmhet {

// Minimal CSV support: comma-separated, double-quote escaping with "" for a
// literal quote, CRLF tolerated.  Every record must have as many fields as
// the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::istream& in, const std::string& what);
CsvTable read_csv(const std::string& path);

// Write text through a temporary file in the same directory plus rename, so
// readers never observe a half-written file.
void write_text_file_atomic(const std::string& path, const std::string& content);

struct IngestOptions {
  bool log_returns = false;  // map levels x_t to 100 * (ln x_{t+1} - ln x_t)
};

struct IngestedPanel {
  DataPanel panel;  // rows reordered so groups are contiguous
  GroupStructure groups;
  std::vector<int> permutation;  // row i of panel = row permutation[i] of the file
};

// Values CSV: header "<period label>,<id_1>,..,<id_N>", one row per period.
DataPanel read_panel_csv(const std::string& path);

// Group map CSV: header plus one "<series_id>,<group tag>" row per series.
// Every series in the panel must be mapped exactly once (MappingError
// otherwise); tags define the groups by order of first appearance.
IngestedPanel ingest_panel(const std::string& values_path, const std::string& groups_path,
                           const IngestOptions& options = {});

// Log-return transform used by ingest_panel, exposed for direct use.
DataPanel to_log_returns(const DataPanel& levels);

struct CriticalValueRow {
  std::string statistic;  // "lm1" or "lm2"
  double alpha = 0.0;
  double value = 0.0;
  std::int64_t n_draws = 0;
  std::uint64_t seed = 0;
};

void write_critical_values_csv(const std::string& path,
                               const std::vector<CriticalValueRow>& rows);

void write_experiment_csv(const std::string& path, const ExperimentResult& result);
std::string format_experiment_table(const ExperimentResult& result);

}  // namespace lmhet
