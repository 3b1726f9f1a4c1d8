#include "emitter.hpp"

#include <cstdio>
#include <fstream>

#include "fountain/errors.hpp"

namespace fountain::cli {

void Emitter::json_file(const std::string& name, const nlohmann::json& doc) {
  files_[name] = doc.dump(2) + "\n";
}

void Emitter::text_file(const std::string& name, std::string content) {
  files_[name] = std::move(content);
}

std::vector<std::filesystem::path> Emitter::flush(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files_) {
    const auto path = dir / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw Error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) out_ += (i ? "," : "") + header[i];
  out_ += "\n";
}

Csv& Csv::row(const std::vector<double>& values) {
  if (values.size() != width_) throw InternalError("csv row width mismatch");
  for (size_t i = 0; i < values.size(); ++i) out_ += (i ? "," : "") + format_number(values[i]);
  out_ += "\n";
  return *this;
}

}  // namespace fountain::cli
