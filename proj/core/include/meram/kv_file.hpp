#pragma once

// Sectioned key=value text used by the run config, the device parameter
// override file and the technology profile file.
//
//   # comment
//   [section]
//   key = value
//
// Keys that appear before the first header belong to the unnamed section "".

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace meram::kv {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

struct Document {
  std::string source;
  std::vector<Section> sections;

  const Section* find(std::string_view name) const;
};

// Duplicate keys inside one section and duplicate section names are errors.
Document parse(std::istream& in, std::string source);
Document parse_file(const std::string& path);

double to_double(const Entry& e, const std::string& source);
std::uint64_t to_uint(const Entry& e, const std::string& source);
bool to_bool(const Entry& e, const std::string& source);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace meram::kv
