#pragma once

#include <string>
#include <vector>

#include "contring/bigint.hpp"

namespace contring {

struct GoldenRow {
  std::string ring;
  long n = 0;
  std::string kind;
  std::string target;
  BigInt expected;
};

struct GoldenTable {
  std::string name;
  std::string provenance;
  std::vector<GoldenRow> rows;
};

// The five bundled tables: roots-a, roots-b, roots-exotic, w-plus, w-minus.
const std::vector<std::string>& golden_table_names();

std::string golden_path(const std::string& data_dir, const std::string& name);
GoldenTable load_golden_file(const std::string& path);
GoldenTable load_golden(const std::string& data_dir, const std::string& name);

}  // namespace contring
