#include "turnmix/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace turnmix {

CsvReader::CsvReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::vector<std::string> fields;
  if (!read_record(header_)) {
    throw SchemaError("empty file, header row required: " + path);
  }
  // Strip a UTF-8 BOM if present.
  if (!header_.empty() && header_[0].size() >= 3 &&
      std::memcmp(header_[0].data(), "\xEF\xBB\xBF", 3) == 0) {
    header_[0] = header_[0].substr(3);
  }
  for (std::size_t i = 0; i < header_.size(); ++i) {
    index_.emplace(header_[i], static_cast<int>(i));
  }
}

int CsvReader::require_column(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw SchemaError(path_ + ": missing required column '" + name + "'");
  }
  return it->second;
}

std::optional<int> CsvReader::find_column(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  if (!read_record(fields)) return false;
  if (fields.size() != header_.size()) {
    throw SchemaError(path_ + ":" + std::to_string(line_) + ": expected " +
                      std::to_string(header_.size()) + " fields, got " +
                      std::to_string(fields.size()));
  }
  return true;
}

bool CsvReader::read_record(std::vector<std::string>& fields) {
  fields.clear();
  int c = in_.get();
  if (c == EOF) return false;
  ++line_;
  std::string cur;
  bool quoted = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(std::move(cur));
      return true;
    }
    if (quoted) {
      if (c == '"') {
        const int peek = in_.peek();
        if (peek == '"') {
          cur.push_back('"');
          in_.get();
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(static_cast<char>(c));
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r') {
      if (in_.peek() == '\n') in_.get();
      fields.push_back(std::move(cur));
      return true;
    } else if (c == '\n') {
      fields.push_back(std::move(cur));
      return true;
    } else {
      cur.push_back(static_cast<char>(c));
    }
    c = in_.get();
  }
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << '\n';
}

std::string format_double(double v) {
  char buf[40];
  // Try increasing precision until the value round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

}  // namespace turnmix
