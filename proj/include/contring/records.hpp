#pragma once

#include <string>
#include <vector>

namespace contring {

// One computed cell. All numeric fields travel as decimal strings so records
// serialize identically everywhere.
struct CountRecord {
  std::string ring;
  long n = 0;
  std::string kind;    // roots | quiddity | sum-w | omega
  std::string target;  // canonical element literal; "-" when the kind has none
  std::string method;  // formula | dp | brute | cache(<method>)
  std::string value;
  std::string expected;  // empty when there is no reference value
  std::string status;    // ok | pass | fail | agree | disagree | skipped-budget
};

// Column order: ring,n,kind,target,method,value,expected,status. Fields
// containing commas or quotes are quoted. Output is byte-deterministic.
std::string to_csv(const std::vector<CountRecord>& records);
std::string to_json(const std::vector<CountRecord>& records);
std::string to_markdown(const std::vector<CountRecord>& records);

}  // namespace contring
