#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsrm/common.hpp"
#include "fsrm/estimators.hpp"

namespace fsrm {

// Parsed intraday data grouped into kept trading days (log prices).
struct IngestResult {
  std::vector<std::vector<double>> day_log_prices;
  std::vector<double> log_closes;        // last observation of each kept day
  std::vector<std::string> day_labels;   // calendar date or day index
  int obs_per_day = 0;                   // given or modal per-day count
  std::vector<std::string> warnings;     // dropped days, coverage notes
};

// `timestamp,price` CSV with ISO-8601 timestamps at minute precision.
// Timestamps must increase strictly within a day; prices must be positive.
// Days below half the expected coverage are dropped with a warning.
IngestResult ingest_price_csv(std::istream& in, std::optional<int> obs_per_day = {});

// `t,value` CSV as written by the simulate subcommand (t in days, value =
// log price); days are unit intervals of t.
IngestResult ingest_path_csv(std::istream& in, std::optional<int> obs_per_day = {});

// Dispatch on the header line.
IngestResult ingest_stream(std::istream& in, std::optional<int> obs_per_day = {});
IngestResult ingest_file(const std::string& path, std::optional<int> obs_per_day = {});

// Daily Hurst estimates from ingested days (per-day window, gap markers for
// degenerate or too-short days).
RegularitySeries hurst_series_from_days(const std::vector<std::vector<double>>& days);

// CSV writers; every file starts with a `# fsrm-csv v1 <kind>` schema line
// and serializes doubles at 17 significant digits.
void write_path_csv(std::ostream& out, const SamplePath& path, const std::string& kind);
void write_table_csv(std::ostream& out, const std::string& kind, const std::string& header,
                     const std::vector<std::vector<double>>& rows);

// Write-temp-then-rename; `write` receives the temporary stream.
void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& write);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace fsrm
