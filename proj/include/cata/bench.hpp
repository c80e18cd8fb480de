#pragma once

#include <string>
#include <vector>

#include "cata/emit.hpp"

namespace cata {

struct BenchRow {
  std::string name;
  std::size_t attempted = 0;
  std::size_t verified = 0;
  long transform_ms = 0;
  long checksat_ms = 0;
  bool failed = false;
  std::string error;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  /// Column sums; `failed` is set when any row failed.
  BenchRow totals() const;
};

/// The `.pl` files directly inside `dir`, sorted by name.
std::vector<std::string> corpus_files(const std::string& dir);

BenchRow bench_row(const std::string& name, const VerifyReport& rep);

/// Verifies every file with `jobs` workers. Rows keep the order of `files`.
BenchReport run_bench(const std::vector<std::string>& files, const PipelineOptions& opts, unsigned jobs);

std::string format_table(const BenchReport& r);
std::string format_csv(const BenchReport& r);

}  // namespace cata
