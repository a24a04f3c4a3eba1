#include "fsrm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace fsrm {

namespace {

struct ParsedRow {
  long date_key = 0;   // YYYYMMDD
  long minute = 0;     // minute of day
  double price = 0.0;
};

bool parse_timestamp(const std::string& s, long& date_key, long& minute) {
  // YYYY-MM-DD[ T]HH:MM[:SS]
  int y, mo, d, h, mi, se = 0;
  if (s.size() < 16) return false;
  if (s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':') return false;
  auto num = [&](std::size_t pos, std::size_t len, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      out = out * 10 + (s[i] - '0');
    }
    return true;
  };
  if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi))
    return false;
  if (s.size() >= 19 && s[16] == ':') {
    if (!num(17, 2, se)) return false;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 59) return false;
  date_key = y * 10000L + mo * 100L + d;
  minute = h * 60L + mi;
  return true;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Reads the header line, skipping schema/comment lines; returns it trimmed.
std::string read_header(std::istream& in, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    return t;
  }
  throw DataError("ingest: empty file");
}

IngestResult finalize_days(std::vector<std::pair<std::string, std::vector<double>>>& days,
                           std::optional<int> obs_per_day) {
  if (days.empty()) throw DataError("ingest: no complete day of data");

  int r = 0;
  if (obs_per_day) {
    r = *obs_per_day;
    if (r < 4) throw ConfigError("ingest: obs_per_day must be >= 4");
  } else {
    // Modal per-day count.
    std::map<std::size_t, std::size_t> freq;
    for (const auto& [label, v] : days) ++freq[v.size()];
    std::size_t best = 0, best_count = 0;
    for (const auto& [size, count] : freq) {
      if (count > best_count || (count == best_count && size > best)) {
        best = size;
        best_count = count;
      }
    }
    r = static_cast<int>(best);
  }

  IngestResult out;
  out.obs_per_day = r;
  const std::size_t min_keep =
      std::max<std::size_t>(7, static_cast<std::size_t>((r + 1) / 2));
  for (auto& [label, v] : days) {
    if (v.size() < min_keep) {
      out.warnings.push_back("dropped day " + label + ": " + std::to_string(v.size()) +
                             " of " + std::to_string(r) + " observations");
      continue;
    }
    out.log_closes.push_back(v.back());
    out.day_labels.push_back(label);
    out.day_log_prices.push_back(std::move(v));
  }
  if (out.day_log_prices.empty()) throw DataError("ingest: every day fell below coverage");
  return out;
}

}  // namespace

IngestResult ingest_price_csv(std::istream& in, std::optional<int> obs_per_day) {
  std::size_t line_no = 0;
  const std::string header = read_header(in, line_no);
  if (header != "timestamp,price")
    throw DataError("ingest: expected header 'timestamp,price', got '" + header + "'");

  std::vector<std::pair<std::string, std::vector<double>>> days;
  long prev_date = -1, prev_minute = -1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw DataError("ingest: malformed row at line " + std::to_string(line_no));
    long date_key, minute;
    if (!parse_timestamp(trim(t.substr(0, comma)), date_key, minute))
      throw DataError("ingest: bad timestamp at line " + std::to_string(line_no));
    double price;
    try {
      price = std::stod(trim(t.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DataError("ingest: bad price at line " + std::to_string(line_no));
    }
    if (!(price > 0.0) || !std::isfinite(price))
      throw DataError("ingest: nonpositive price at line " + std::to_string(line_no));

    if (date_key < prev_date)
      throw DataError("ingest: out-of-order date at line " + std::to_string(line_no));
    if (date_key != prev_date) {
      days.emplace_back(std::to_string(date_key), std::vector<double>{});
      prev_date = date_key;
      prev_minute = -1;
    }
    if (minute <= prev_minute)
      throw DataError("ingest: non-increasing timestamp at line " + std::to_string(line_no));
    prev_minute = minute;
    days.back().second.push_back(std::log(price));
  }
  return finalize_days(days, obs_per_day);
}

IngestResult ingest_path_csv(std::istream& in, std::optional<int> obs_per_day) {
  std::size_t line_no = 0;
  const std::string header = read_header(in, line_no);
  if (header != "t,value")
    throw DataError("ingest: expected header 't,value', got '" + header + "'");

  std::vector<std::pair<std::string, std::vector<double>>> days;
  double prev_t = -std::numeric_limits<double>::infinity();
  long prev_day = -1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw DataError("ingest: malformed row at line " + std::to_string(line_no));
    double time, value;
    try {
      time = std::stod(trim(t.substr(0, comma)));
      value = std::stod(trim(t.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DataError("ingest: bad number at line " + std::to_string(line_no));
    }
    if (!(time > prev_t))
      throw DataError("ingest: non-increasing time at line " + std::to_string(line_no));
    if (!std::isfinite(value))
      throw DataError("ingest: non-finite value at line " + std::to_string(line_no));
    prev_t = time;
    const long day = static_cast<long>(std::floor(time + 1e-12));
    if (day != prev_day) {
      days.emplace_back(std::to_string(day), std::vector<double>{});
      prev_day = day;
    }
    days.back().second.push_back(value);
  }
  return finalize_days(days, obs_per_day);
}

IngestResult ingest_stream(std::istream& in, std::optional<int> obs_per_day) {
  // Peek past schema/comment lines to find the header, then re-dispatch.
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::istringstream probe(content);
  std::size_t line_no = 0;
  const std::string header = read_header(probe, line_no);
  std::istringstream replay(content);
  if (header == "timestamp,price") return ingest_price_csv(replay, obs_per_day);
  if (header == "t,value") return ingest_path_csv(replay, obs_per_day);
  throw DataError("ingest: unrecognized header '" + header + "'");
}

IngestResult ingest_file(const std::string& path, std::optional<int> obs_per_day) {
  if (path == "-") return ingest_stream(std::cin, obs_per_day);
  std::ifstream in(path);
  if (!in) throw DataError("ingest: cannot open " + path);
  return ingest_stream(in, obs_per_day);
}

RegularitySeries hurst_series_from_days(const std::vector<std::vector<double>>& days) {
  if (days.size() < 2) throw DataError("hurst_series: need at least two days");
  RegularitySeries out;
  out.values.reserve(days.size());
  int window_mode = 0;
  for (const auto& day : days) {
    const int nu = day_window(static_cast<int>(day.size()));
    if (nu < 4) {
      out.values.push_back(kGapValue);
      continue;
    }
    window_mode = std::max(window_mode, nu);
    try {
      out.values.push_back(local_hurst(day, nu, day.size() - 1));
    } catch (const DataError&) {
      out.values.push_back(kGapValue);
    }
  }
  out.window = window_mode;
  if (out.valid_count() == 0) throw DataError("hurst_series: every day degenerate");
  return out;
}

void write_path_csv(std::ostream& out, const SamplePath& path, const std::string& kind) {
  out << "# fsrm-csv v1 " << kind << "\n";
  out << "t,value\n";
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    const double t = path.origin + static_cast<double>(k) * path.dt;
    out << format_double(t) << ',' << format_double(path.values[k]) << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::string& kind, const std::string& header,
                     const std::vector<std::vector<double>>& rows) {
  out << "# fsrm-csv v1 " << kind << "\n";
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& write) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp + " for writing");
    write(out);
    out.flush();
    if (!out) throw DataError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fsrm
