#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlg/common.hpp"

namespace qlg {

// Raised when an artifact cannot be written; mapped to the CLI I/O exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal for a double ('.' separator, locale free).
std::string fmt_double(double x);

// RFC-4180 style table; cells are pre-formatted strings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t n_rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string sha256_hex(const std::string& data);

// Versions of the numerical dependencies compiled in.
Json library_versions();

// Run manifest: command, anchor, canonical config hash, seed, versions, artifacts.
Json make_manifest(const std::string& command, const std::string& anchor, const Json& config,
                   unsigned long long seed, const std::vector<std::string>& artifacts);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace qlg
