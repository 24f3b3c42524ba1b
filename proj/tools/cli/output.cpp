#include "output.hpp"

#include <cstdio>
#include <fstream>

namespace omcli {

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

std::string fmt_sci(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", prec, v);
  std::string s = buf;
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mantissa = s.substr(0, e);
  std::string exponent = s.substr(e + 1);
  std::string sign;
  if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
    if (exponent[0] == '-') sign = "-";
    exponent.erase(0, 1);
  }
  std::size_t first = exponent.find_first_not_of('0');
  exponent = first == std::string::npos ? "0" : exponent.substr(first);
  return mantissa + "e" + sign + exponent;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os_ << ',';
    os_ << csv_field(fields[i]);
  }
  os_ << "\r\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing output file '" + path + "'");
}

std::string manifest_path_for(const std::string& out_path,
                              const std::string& command) {
  return out_path.empty() ? command + ".manifest.json"
                          : out_path + ".manifest.json";
}

nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& invocation,
                             const nlohmann::json& config_snapshot,
                             const std::vector<std::string>& outputs) {
  nlohmann::json manifest;
  manifest["omctrack_manifest"] = 1;
  manifest["version"] = "1.0.0";
  manifest["command"] = command;
  manifest["invocation"] = invocation;
  manifest["config"] = config_snapshot;
  manifest["outputs"] = outputs;
  return manifest;
}

}  // namespace omcli
