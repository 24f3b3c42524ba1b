// Serialization helpers for the omctrack CLI: number formatting, RFC-4180
// CSV emission, and run-manifest plumbing.
#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace omcli {

// Raised for output file problems; exit code 2 (bad --out is a usage error).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full precision (17 significant digits), round-trippable.
std::string fmt_full(double v);
// Fixed decimals, e.g. fmt_fixed(6.552, 2) == "6.55".
std::string fmt_fixed(double v, int prec);
// Scientific with the exponent's leading zeros stripped, e.g. "3.93e-2".
std::string fmt_sci(double v, int prec);

// Writes rows with CRLF line endings, quoting fields that contain commas,
// quotes, or line breaks (RFC 4180).
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

// Writes content to path (binary, so CSV CRLFs survive untouched).
void write_text_file(const std::string& path, const std::string& content);

// Manifest written alongside every output: <out>.manifest.json, or
// <command>.manifest.json in the working directory when no --out was given.
std::string manifest_path_for(const std::string& out_path,
                              const std::string& command);
nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& invocation,
                             const nlohmann::json& config_snapshot,
                             const std::vector<std::string>& outputs);

}  // namespace omcli
