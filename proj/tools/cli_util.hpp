#pragma once

#include <string>
#include <vector>

namespace oneshot::cli {

// n lists: comma-separated items, each "n", "a..b" (every integer),
// "a..b:k" (step k) or "a..b*r" (geometric, ratio r > 1). Sorted, unique.
std::vector<long long> parse_n_range(const std::string& text);

// Decimal or "p/q".
double parse_real(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::string> split(const std::string& text, char sep);

// Writes to path.tmp then renames; "-" or "" writes to stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace oneshot::cli
