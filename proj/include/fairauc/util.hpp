#ifndef FAIRAUC_UTIL_HPP
#define FAIRAUC_UTIL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fairauc {

// 17 significant digits: lossless round trip for 64-bit floats.
std::string format_double(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
// Write to <path>.tmp then rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Hex encoding of little-endian IEEE-754 doubles for bit-exact checkpoints.
std::string doubles_to_hex(const std::vector<double>& v);
std::vector<double> hex_to_doubles(const std::string& hex);
std::string double_to_hex(double x);
double hex_to_double(const std::string& hex);

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };
// Level taken from FAIRAUC_LOG (error|warn|info|debug), default warn.
LogLevel log_level();
void log(LogLevel level, const std::string& msg);

}  // namespace fairauc

#endif  // FAIRAUC_UTIL_HPP
