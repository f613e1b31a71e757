// contring: count continuant roots and lambda-quiddities over small finite
// commutative rings, by closed form, transfer-matrix DP, or brute force.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contring/crosscheck.hpp"
#include "contring/dispatch.hpp"
#include "contring/errors.hpp"

namespace {

#ifndef CONTRING_DATA_DIR
#define CONTRING_DATA_DIR ""
#endif

int cmd_ring_info(contring::Session& session, const std::string& spec) {
  contring::RingPtr ring = session.ring(spec);
  const contring::Ring& A = *ring;
  std::cout << "spec: " << A.spec_string() << "\n";
  std::cout << "size: " << A.size() << "\n";
  std::cout << "units: " << A.unit_count() << "\n";
  std::cout << "non-units: " << A.nonunit_count() << "\n";
  std::cout << "local: " << (A.is_local() ? "yes" : "no") << "\n";
  if (A.is_local()) {
    std::cout << "residue-field: " << A.residue_size() << "\n";
  }
  std::cout << "sample non-units:";
  int shown = 0;
  for (int a : A.nonunits()) {
    if (shown == 5) break;
    std::cout << (shown ? ", " : " ") << A.display(a);
    ++shown;
  }
  std::cout << "\n";
  return 0;
}

int cmd_count(contring::Session& session, const std::string& kind_text,
              const std::string& spec, long n, const std::string& target,
              const std::string& method) {
  std::vector<contring::CountRecord> records = session.compute(
      spec, n, contring::parse_kind(kind_text), target, method);
  if (records.size() == 1) {
    std::cout << records.front().value << "\n";
    return 0;
  }
  bool agree = true;
  for (const contring::CountRecord& rec : records) {
    std::cout << rec.method << " " << rec.value << "\n";
    agree = agree && rec.status == "agree";
  }
  if (!agree) {
    std::cerr << "methods disagree\n";
    return 1;
  }
  return 0;
}

int cmd_table(contring::Session& session, const std::string& name,
              const std::string& format) {
  contring::GoldenTable table =
      contring::load_golden(session.config().data_dir, name);
  contring::TableRunResult result = contring::run_table(session, table);
  if (format == "csv") {
    std::cout << contring::to_csv(result.records);
  } else if (format == "json") {
    std::cout << contring::to_json(result.records);
  } else {
    std::cout << contring::to_markdown(result.records);
  }
  return result.all_pass ? 0 : 1;
}

int cmd_crosscheck(contring::Session& session, const std::string& spec,
                   int max_n) {
  std::vector<contring::PropertyResult> results =
      contring::run_crosscheck(session, spec, max_n);
  int pass = 0, fail = 0, skip = 0;
  for (const contring::PropertyResult& res : results) {
    std::cout << res.status << " " << res.name;
    if (!res.detail.empty()) std::cout << ": " << res.detail;
    std::cout << "\n";
    if (res.status == "PASS") ++pass;
    else if (res.status == "FAIL") ++fail;
    else ++skip;
  }
  std::cout << results.size() << " properties: " << pass << " pass, " << fail
            << " fail, " << skip << " skipped\n";
  return fail == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact counts of continuant roots and lambda-quiddities over small "
      "finite commutative rings"};
  app.require_subcommand(1);
  app.fallthrough();

  contring::RunConfig config;
  config.data_dir = CONTRING_DATA_DIR;
  app.add_option("--budget-brute", config.budget.brute_leaves,
                 "max |A|^n leaves for brute-force enumeration")
      ->capture_default_str();
  app.add_option("--budget-sl2", config.budget.sl2_size_limit,
                 "max |A| for the SL2 table scan")
      ->capture_default_str();
  app.add_option("--workers", config.workers,
                 "worker threads for DP rounds and table cells")
      ->capture_default_str();
  app.add_option("--cache", config.cache_path,
                 "JSON result cache, read on start and written on exit");
  app.add_option("--data", config.data_dir, "golden table directory");
  app.add_option("--ring-cap", config.build.size_cap,
                 "refuse rings larger than this")
      ->capture_default_str();

  // ring info <spec>
  CLI::App* ring_cmd = app.add_subcommand("ring", "ring structure commands");
  ring_cmd->require_subcommand(1);
  CLI::App* info_cmd =
      ring_cmd->add_subcommand("info", "print size, units, and locality");
  std::string info_spec;
  info_cmd->add_option("spec", info_spec, "ring spec, e.g. Zmod:8")
      ->required();

  // count {roots|quiddity|sum-w|omega} --ring <spec> --n <N>
  CLI::App* count_cmd =
      app.add_subcommand("count", "count tuples for one cell");
  std::string count_kind, count_ring, count_target, count_method = "auto";
  long count_n = 0;
  count_cmd->add_option("kind", count_kind, "what to count")
      ->required()
      ->check(CLI::IsMember({"roots", "quiddity", "sum-w", "omega"}));
  count_cmd->add_option("--ring", count_ring, "ring spec")->required();
  count_cmd->add_option("--n", count_n, "tuple length")->required();
  count_cmd->add_option("--target", count_target,
                        "target literal (roots: element, default 0; quiddity: "
                        "unit, default 1; omega: [[a,b],[c,d]], default "
                        "identity)");
  count_cmd->add_option("--method", count_method, "evaluation method")
      ->check(CLI::IsMember({"auto", "brute", "dp", "formula", "all"}))
      ->capture_default_str();

  // table --name <id> --format csv|json|md
  CLI::App* table_cmd =
      app.add_subcommand("table", "recompute a golden table and diff it");
  std::string table_name, table_format = "csv";
  table_cmd->add_option("--name", table_name, "golden table name")
      ->required()
      ->check(CLI::IsMember(contring::golden_table_names()));
  table_cmd->add_option("--format", table_format, "output format")
      ->check(CLI::IsMember({"csv", "json", "md"}))
      ->capture_default_str();

  // crosscheck --ring <spec> --max-n <N>
  CLI::App* cross_cmd =
      app.add_subcommand("crosscheck", "run the property suite on one ring");
  std::string cross_ring;
  int cross_max_n = 5;
  cross_cmd->add_option("--ring", cross_ring, "ring spec")->required();
  cross_cmd->add_option("--max-n", cross_max_n, "largest tuple length")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    contring::Session session(config);
    int code = 2;
    if (info_cmd->parsed()) {
      code = cmd_ring_info(session, info_spec);
    } else if (count_cmd->parsed()) {
      code = cmd_count(session, count_kind, count_ring, count_n, count_target,
                       count_method);
    } else if (table_cmd->parsed()) {
      code = cmd_table(session, table_name, table_format);
    } else if (cross_cmd->parsed()) {
      code = cmd_crosscheck(session, cross_ring, cross_max_n);
    }
    session.flush_cache();
    return code;
  } catch (const contring::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
  } catch (const contring::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
  } catch (const contring::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
  } catch (const contring::BuildError& e) {
    std::cerr << "build error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
