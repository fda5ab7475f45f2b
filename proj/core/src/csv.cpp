#include "csv.hpp"

#include <fmt/format.h>

#include "laca/error.hpp"

namespace laca::csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

std::optional<std::vector<std::string>> read_record(std::istream& in, std::size_t& line) {
  std::string physical;
  if (!std::getline(in, physical)) return std::nullopt;
  ++line;
  const std::size_t start_line = line;

  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i >= physical.size()) {
      if (!quoted) break;
      // Newline inside a quoted field.
      field += '\n';
      if (!std::getline(in, physical)) {
        throw InputError(fmt::format("line {}: unterminated quoted field", start_line));
      }
      ++line;
      i = 0;
      continue;
    }
    const char c = physical[i++];
    if (quoted) {
      if (c == '"') {
        if (i < physical.size() && physical[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\r' && i == physical.size()) {
      // tolerate CRLF
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace laca::csv
