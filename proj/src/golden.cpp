#include "contring/golden.hpp"

#include <fstream>

#include <json.hpp>

#include "contring/errors.hpp"

namespace contring {

const std::vector<std::string>& golden_table_names() {
  static const std::vector<std::string> names = {
      "roots-a", "roots-b", "roots-exotic", "w-plus", "w-minus"};
  return names;
}

std::string golden_path(const std::string& data_dir, const std::string& name) {
  std::string file = name;
  for (char& c : file) {
    if (c == '-') c = '_';
  }
  return data_dir + "/" + file + ".json";
}

GoldenTable load_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BuildError("cannot open reference table: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw BuildError("reference table " + path + ": " + e.what());
  }
  GoldenTable table;
  try {
    table.name = doc.at("name").get<std::string>();
    table.provenance = doc.value("provenance", std::string());
    for (const auto& row : doc.at("rows")) {
      GoldenRow r;
      r.ring = row.at("ring").get<std::string>();
      r.n = row.at("n").get<long>();
      r.kind = row.at("kind").get<std::string>();
      r.target = row.at("target").get<std::string>();
      r.expected = BigInt(row.at("expected").get<std::string>());
      table.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw BuildError("reference table " + path + ": " + e.what());
  }
  if (table.rows.empty()) {
    throw BuildError("reference table " + path + " has no rows");
  }
  return table;
}

GoldenTable load_golden(const std::string& data_dir, const std::string& name) {
  return load_golden_file(golden_path(data_dir, name));
}

}  // namespace contring
