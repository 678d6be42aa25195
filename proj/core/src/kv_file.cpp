#include "meram/kv_file.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>

#include "meram/error.hpp"

namespace meram::kv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const Section* Document::find(std::string_view name) const {
  auto it = std::find_if(sections.begin(), sections.end(),
                         [&](const Section& s) { return s.name == name; });
  return it == sections.end() ? nullptr : &*it;
}

Document parse(std::istream& in, std::string source) {
  Document doc;
  doc.source = std::move(source);
  std::set<std::string> section_names;
  std::set<std::string> keys;
  std::string raw;
  std::size_t line_no = 0;

  auto current = [&]() -> Section& {
    if (doc.sections.empty()) doc.sections.push_back(Section{"", 0, {}});
    return doc.sections.back();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(doc.source, line_no, "unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) throw ParseError(doc.source, line_no, "empty section name");
      if (!section_names.insert(name).second)
        throw ParseError(doc.source, line_no, "duplicate section [" + name + "]");
      doc.sections.push_back(Section{name, line_no, {}});
      keys.clear();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(doc.source, line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(doc.source, line_no, "empty key");
    if (!keys.insert(key).second) throw ParseError(doc.source, line_no, "duplicate key '" + key + "'");
    current().entries.push_back(Entry{std::move(key), std::move(value), line_no});
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse(in, path);
}

double to_double(const Entry& e, const std::string& source) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ParseError(source, e.line, "'" + e.key + "': not a number: " + e.value);
  return v;
}

std::uint64_t to_uint(const Entry& e, const std::string& source) {
  std::uint64_t v = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(source, e.line, "'" + e.key + "': not an unsigned integer: " + e.value);
  return v;
}

bool to_bool(const Entry& e, const std::string& source) {
  const auto& v = e.value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError(source, e.line, "'" + e.key + "': expected yes/no: " + v);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace meram::kv
