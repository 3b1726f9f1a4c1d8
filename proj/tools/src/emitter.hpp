#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fountain::cli {

// Collects every artifact in memory and writes them in one pass, so a run that
// fails part way leaves nothing on disk.
class Emitter {
 public:
  void json_file(const std::string& name, const nlohmann::json& doc);
  void text_file(const std::string& name, std::string content);
  // Writes all files under dir (created if needed); returns the written paths.
  std::vector<std::filesystem::path> flush(const std::filesystem::path& dir) const;
  bool empty() const { return files_.empty(); }

 private:
  std::map<std::string, std::string> files_;
};

// Fixed-width CSV builder; numbers use 17 significant digits.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<double>& values);
  std::string str() const { return out_; }

 private:
  size_t width_;
  std::string out_;
};

std::string format_number(double x);

}  // namespace fountain::cli
