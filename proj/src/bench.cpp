#include "cata/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <sstream>
#include <thread>

namespace cata {

BenchRow BenchReport::totals() const {
  BenchRow t;
  t.name = "total";
  for (const auto& r : rows) {
    t.attempted += r.attempted;
    t.verified += r.verified;
    t.transform_ms += r.transform_ms;
    t.checksat_ms += r.checksat_ms;
    t.failed = t.failed || r.failed;
  }
  return t;
}

std::vector<std::string> corpus_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pl") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BenchRow bench_row(const std::string& name, const VerifyReport& rep) {
  BenchRow row;
  row.name = name;
  row.transform_ms = rep.transform_ms;
  row.checksat_ms = rep.checksat_ms;
  if (rep.failure != VerifyReport::Failure::None) {
    row.failed = true;
    row.error = rep.error;
    return row;
  }
  row.attempted = rep.verdicts.size();
  for (const auto& v : rep.verdicts) {
    if (v.status == Verdict::Status::Verified) ++row.verified;
  }
  return row;
}

BenchReport run_bench(const std::vector<std::string>& files, const PipelineOptions& opts, unsigned jobs) {
  BenchReport report;
  report.rows.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = std::filesystem::path(files[i]).stem().string();
      report.rows[i] = bench_row(name, verify_file(files[i], opts));
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

namespace {

std::vector<std::string> cells(const BenchRow& r) {
  return {r.name, std::to_string(r.attempted), std::to_string(r.verified), std::to_string(r.transform_ms),
          std::to_string(r.checksat_ms), r.failed ? "failed" : "ok"};
}

}  // namespace

std::string format_table(const BenchReport& r) {
  const std::vector<std::string> header{"program", "contracts", "verified", "transform_ms", "checksat_ms", "status"};
  std::vector<std::vector<std::string>> lines{header};
  for (const auto& row : r.rows) lines.push_back(cells(row));
  lines.push_back(cells(r.totals()));
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.size(); ++i) width[i] = std::max(width[i], l[i].size());
  }
  std::ostringstream os;
  auto put = [&](const std::vector<std::string>& l) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i) os << "  ";
      const std::size_t pad = width[i] - l[i].size();
      if (i == 0 || i + 1 == l.size()) {
        os << l[i] << (i + 1 == l.size() ? "" : std::string(pad, ' '));
      } else {
        os << std::string(pad, ' ') << l[i];
      }
    }
    os << '\n';
  };
  put(lines.front());
  std::size_t rule = 2 * (width.size() - 1);
  for (auto w : width) rule += w;
  os << std::string(rule, '-') << '\n';
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) put(lines[i]);
  os << std::string(rule, '-') << '\n';
  put(lines.back());
  return os.str();
}

std::string format_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "program,contracts,verified,transform_ms,checksat_ms,status\n";
  auto put = [&](const BenchRow& row) {
    const auto c = cells(row);
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << '\n';
  };
  for (const auto& row : r.rows) put(row);
  put(r.totals());
  return os.str();
}

}  // namespace cata
