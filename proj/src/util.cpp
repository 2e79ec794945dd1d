#include "fairauc/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fairauc/common.hpp"

namespace fairauc {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  write_file(tmp, content);
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("rename failed: " + path);
}

static const char* kHexDigits = "0123456789abcdef";

std::string doubles_to_hex(const std::vector<double>& v) {
  std::string out;
  out.reserve(v.size() * 16);
  for (double x : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    for (int shift = 60; shift >= 0; shift -= 4)
      out.push_back(kHexDigits[(bits >> shift) & 0xF]);
  }
  return out;
}

std::vector<double> hex_to_doubles(const std::string& hex) {
  if (hex.size() % 16 != 0) throw ParseError("bad hex double block length");
  std::vector<double> out(hex.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < 16; ++j) {
      char c = hex[i * 16 + j];
      int nib;
      if (c >= '0' && c <= '9') nib = c - '0';
      else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
      else throw ParseError("bad hex digit in double block");
      bits = (bits << 4) | static_cast<std::uint64_t>(nib);
    }
    std::memcpy(&out[i], &bits, 8);
  }
  return out;
}

std::string double_to_hex(double x) { return doubles_to_hex({x}); }

double hex_to_double(const std::string& hex) { return hex_to_doubles(hex)[0]; }

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("FAIRAUC_LOG");
    if (!env) return LogLevel::Warn;
    std::string s(env);
    if (s == "error") return LogLevel::Error;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  static const char* names[] = {"ERROR", "WARN", "INFO", "DEBUG"};
  std::fprintf(stderr, "[fairauc %s] %s\n", names[static_cast<int>(level)],
               msg.c_str());
}

}  // namespace fairauc
