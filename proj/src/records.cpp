#include "contring/records.hpp"

#include <json.hpp>

namespace contring {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

std::string md_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

}  // namespace

std::string to_csv(const std::vector<CountRecord>& records) {
  std::string out = "ring,n,kind,target,method,value,expected,status\n";
  for (const CountRecord& r : records) {
    out += csv_field(r.ring) + "," + std::to_string(r.n) + "," +
           csv_field(r.kind) + "," + csv_field(r.target) + "," +
           csv_field(r.method) + "," + csv_field(r.value) + "," +
           csv_field(r.expected) + "," + csv_field(r.status) + "\n";
  }
  return out;
}

std::string to_json(const std::vector<CountRecord>& records) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CountRecord& r : records) {
    rows.push_back({
        {"ring", r.ring},
        {"n", r.n},
        {"kind", r.kind},
        {"target", r.target},
        {"method", r.method},
        {"value", r.value},
        {"expected", r.expected},
        {"status", r.status},
    });
  }
  return rows.dump(2) + "\n";
}

std::string to_markdown(const std::vector<CountRecord>& records) {
  std::string out =
      "| ring | n | kind | target | method | value | expected | status |\n"
      "|---|---|---|---|---|---|---|---|\n";
  for (const CountRecord& r : records) {
    out += "| " + md_field(r.ring) + " | " + std::to_string(r.n) + " | " +
           md_field(r.kind) + " | " + md_field(r.target) + " | " +
           md_field(r.method) + " | " + md_field(r.value) + " | " +
           md_field(r.expected) + " | " + md_field(r.status) + " |\n";
  }
  return out;
}

}  // namespace contring
