#include "iterlogic/text.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace iterlogic {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text) {
  std::uint64_t value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

FileWriter::FileWriter(const std::string& path)
    : path_(path), tmp_path_(path + ".partial") {
  stream_ = std::fopen(tmp_path_.c_str(), "wb");
  if (stream_ == nullptr) {
    throw std::runtime_error("cannot open for writing: " + tmp_path_);
  }
}

FileWriter::~FileWriter() {
  if (stream_ != nullptr) {
    std::fclose(static_cast<std::FILE*>(stream_));
  }
}

void FileWriter::write(std::string_view data) {
  auto* f = static_cast<std::FILE*>(stream_);
  if (std::fwrite(data.data(), 1, data.size(), f) != data.size()) {
    throw std::runtime_error("short write to " + tmp_path_);
  }
}

void FileWriter::commit() {
  auto* f = static_cast<std::FILE*>(stream_);
  if (std::fclose(f) != 0) {
    stream_ = nullptr;
    throw std::runtime_error("close failed for " + tmp_path_);
  }
  stream_ = nullptr;
  if (std::rename(tmp_path_.c_str(), path_.c_str()) != 0) {
    throw std::runtime_error("rename failed for " + tmp_path_);
  }
  committed_ = true;
}

}  // namespace iterlogic
