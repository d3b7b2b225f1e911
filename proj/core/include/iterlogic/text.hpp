#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace iterlogic {

// Shortest decimal form that round-trips the exact double (std::to_chars).
// Keeps rule files and CSV logs byte-stable.
std::string format_double(double value);

double parse_double(std::string_view text);           // throws on garbage
std::uint64_t parse_uint(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

// Atomic-ish file write: writes to "<path>.partial", then renames on
// commit. A failure mid-write leaves only the .partial artifact behind.
class FileWriter {
 public:
  explicit FileWriter(const std::string& path);
  ~FileWriter();
  FileWriter(const FileWriter&) = delete;
  FileWriter& operator=(const FileWriter&) = delete;

  void write(std::string_view data);
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  void* stream_ = nullptr;
  bool committed_ = false;
};

}  // namespace iterlogic
