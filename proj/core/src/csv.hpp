#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace laca::csv {

// RFC 4180 quoting: fields containing a comma, quote, CR or LF are wrapped in
// double quotes with embedded quotes doubled.
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

// Reads one record, honouring quoted fields that span lines. Returns nullopt
// at end of input. `line` is advanced by the number of physical lines read.
std::optional<std::vector<std::string>> read_record(std::istream& in, std::size_t& line);

}  // namespace laca::csv
