#pragma once

// Rows of the two summary tables (single-class families and disjoint pairs),
// each bound to the minimal desk-scale instance that witnesses it.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "holoform/classify.hpp"

namespace holoform {

struct RowOutcome {
  bool pass = false;
  std::string note;
};

struct TableRow {
  std::string dims;      // dimension range as printed in the summary
  std::string instance;  // spec(s) actually run
  int dim = 0;
  bool long_running = false;
  std::function<RowOutcome(int samples, std::uint64_t seed)> run;
};

std::vector<TableRow> ucc_table_rows();
std::vector<TableRow> pair_table_rows();

/// Caps the sample count for high-dimensional rows.
int table_row_samples(int requested, int dim);

/// The finite-coverage statement attached to every table report.
const std::string& table_footer();

}  // namespace holoform
