#pragma once

#include <string>
#include <vector>

namespace privar {

// Minimal RFC-4180-style CSV: comma separator, double-quote quoting with
// doubled quotes for escapes. Enough for the sidecar and report formats.
std::vector<std::string> csv_split(const std::string& line);

std::string csv_quote(const std::string& field);

std::string csv_join(const std::vector<std::string>& fields);

// Splits on \n, tolerating \r\n; drops a trailing empty line.
std::vector<std::string> split_lines(const std::string& text);

}  // namespace privar
