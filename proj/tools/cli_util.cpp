#include "cli_util.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "oneshot/io.hpp"
#include "oneshot/registers.hpp"

namespace oneshot::cli {

namespace {

long long parse_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("n range: '" + s + "' is not a nonnegative integer");
  errno = 0;
  const long long v = std::strtoll(s.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ParseError("n range: '" + s + "' is too large");
  return v;
}

}  // namespace

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) return parse_real(text.substr(0, slash)) / parse_real(text.substr(slash + 1));
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw ParseError("'" + text + "' is not a number");
  return v;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_real(s));
  return out;
}

std::vector<long long> parse_n_range(const std::string& text) {
  constexpr std::size_t kMaxPoints = 1000000;
  std::vector<long long> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_count(item));
      continue;
    }
    const long long a = parse_count(item.substr(0, dots));
    std::string rest = item.substr(dots + 2);
    char mode = 0;
    std::string step = "1";
    const auto pos = rest.find_first_of(":*");
    if (pos != std::string::npos) {
      mode = rest[pos];
      step = rest.substr(pos + 1);
      rest = rest.substr(0, pos);
    }
    const long long b = parse_count(rest);
    if (b < a) throw ParseError("n range: '" + item + "' runs backwards");
    if (mode == '*') {
      const double r = parse_real(step);
      if (!(r > 1.0)) throw ParseError("n range: geometric ratio must exceed 1");
      for (double x = static_cast<double>(a); x <= static_cast<double>(b) * (1.0 + 1e-12); x *= r) {
        out.push_back(std::llround(x));
        if (out.size() > kMaxPoints) throw ParseError("n range: more than 1e6 points");
      }
    } else {
      const long long k = parse_count(step);
      if (k < 1) throw ParseError("n range: step must be positive");
      if ((b - a) / k + 1 > static_cast<long long>(kMaxPoints)) throw ParseError("n range: more than 1e6 points");
      for (long long n = a; n <= b; n += k) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && out.front() < 1) throw DomainError("n range: n must be at least 1");
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot write '" + path + "'");
    f << content;
    if (!f) throw DomainError("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace oneshot::cli
