#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace turnmix {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Streaming CSV reader with RFC 4180 quoting (quoted fields may contain
// commas, doubled quotes, and newlines).
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  const std::vector<std::string>& header() const { return header_; }

  // Column index lookup; throws SchemaError naming the column when required.
  int require_column(const std::string& name) const;
  std::optional<int> find_column(const std::string& name) const;

  // Reads the next record into `fields`; returns false at end of file.
  bool next(std::vector<std::string>& fields);

  const std::string& path() const { return path_; }
  long long line() const { return line_; }

 private:
  bool read_record(std::vector<std::string>& fields);

  std::string path_;
  std::ifstream in_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, int> index_;
  long long line_ = 0;
};

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void write_row(const std::vector<std::string>& fields);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

// Shortest-ish decimal representation that round-trips a double.
std::string format_double(double v);

std::string csv_escape(const std::string& field);

// strtod with full-string validation; nullopt on any trailing garbage.
std::optional<double> parse_double(const std::string& s);
std::optional<long long> parse_int(const std::string& s);

}  // namespace turnmix
