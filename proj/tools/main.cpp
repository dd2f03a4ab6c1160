#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "maxtsp/certificate.hpp"
#include "maxtsp/instance.hpp"
#include "maxtsp/oracle.hpp"

namespace {

using namespace maxtsp;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

/// Thrown for a bad argument value the parser cannot catch.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string tour_string(const std::vector<Vertex>& order) {
  std::string s;
  for (Vertex v : order) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto s = std::stoull(text);
      return {s, s};
    }
    const auto a = std::stoull(text.substr(0, dots));
    const auto b = std::stoull(text.substr(dots + 2));
    if (b < a) throw UsageError("empty seed range " + text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("seed range must look like A..B, got " + text);
  }
}

int cmd_gen(const std::string& family, int n, std::uint64_t seed, const std::string& out) {
  const auto inst = generate_instance(parse_family(family), n, seed);
  write_text(out, format_instance(inst.graph));
  return kOk;
}

struct SolveArgs {
  std::string file;
  std::string certificate;
  bool fast_odd = false;
  bool trace = false;
  bool no_oracle = false;
  int threads = 1;
};

int cmd_solve(const SolveArgs& a) {
  const auto g = read_instance_file(a.file);
  SolveOptions so;
  so.fast_odd = a.fast_odd;
  so.trace = a.trace;
  so.threads = a.threads;
  const auto res = solve(g, so);
  CertificateOptions co;
  co.with_oracle = !a.no_oracle;
  co.include_trace = a.trace;
  const auto cert = make_certificate(g, res, so, co);
  if (a.trace && res.run)
    for (const auto& line : res.run->trace) std::cerr << line << "\n";
  std::cout << "n " << g.size() << "\n";
  std::cout << "tour " << tour_string(res.tour.order) << "\n";
  std::cout << "weight " << res.tour.weight << "\n";
  if (!cert["opt"].is_null()) {
    std::cout << "opt " << cert["opt"].get<Weight>() << "\n";
    std::cout << "ratio " << cert["ratio"]["exact"].get<std::string>() << " (" << cert["ratio"]["decimal"].get<std::string>()
              << ")\n";
  }
  if (!res.bound_guaranteed) std::cout << "note: fast odd mode, the 4/5 bound is not guaranteed\n";
  int failed = 0;
  for (const auto& c : cert["checks"])
    if (c["status"] == "fail") {
      ++failed;
      std::cout << "FAIL " << c["name"].get<std::string>() << ": " << c.value("detail", "") << "\n";
    }
  if (!a.certificate.empty()) write_text(a.certificate, cert.dump(2) + "\n");
  return failed == 0 ? kOk : kViolation;
}

int cmd_verify(const std::string& file, const std::string& cert_path) {
  const auto g = read_instance_file(file);
  const auto cert = read_json(cert_path);
  const auto rep = verify_certificate(g, cert);
  std::size_t width = 0;
  for (const auto& c : rep.checks) width = std::max(width, c.name.size());
  for (const auto& c : rep.checks) {
    std::cout << c.name << std::string(width + 2 - c.name.size(), ' ') << status_name(c.status);
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << "\n";
  }
  std::cout << (rep.ok() ? "certificate ok" : "certificate REJECTED") << "\n";
  return rep.ok() ? kOk : kViolation;
}

int cmd_oracle(const std::string& file) {
  const auto g = read_instance_file(file);
  std::cout << oracle_max_tsp(g) << "\n";
  return kOk;
}

struct BenchArgs {
  std::vector<std::string> families;
  std::vector<int> sizes;
  std::string seeds = "0..9";
  int parallel = 1;
  std::string json;
  bool fast_odd = false;
};

struct BenchRow {
  std::string family;
  int n = 0;
  int count = 0;
  int errors = 0;
  int violations = 0;
  int with_opt = 0;
  Ratio min_ratio{1, 1};
  double ratio_sum = 0;
  double seconds_sum = 0;
  double best_over_average_sum = 0;
  long kites3 = 0;
  long kites4 = 0;
  long repairs = 0;
  long widened = 0;
  std::string first_error;
};

bool ratio_less(const Ratio& a, const Ratio& b) { return static_cast<__int128>(a.p) * b.q < static_cast<__int128>(b.p) * a.q; }

int cmd_bench(const BenchArgs& a) {
  std::vector<std::string> families = a.families;
  if (families.empty() || (families.size() == 1 && families[0] == "all")) {
    families.clear();
    for (auto f : all_families()) families.emplace_back(family_name(f));
  }
  for (const auto& f : families) parse_family(f);
  if (a.sizes.empty()) throw UsageError("--sizes needs at least one value");
  for (int n : a.sizes)
    if (n < 3) throw UsageError("sizes must be at least 3");
  const auto [lo, hi] = parse_seed_range(a.seeds);

  struct Job {
    std::size_t row;
    std::uint64_t seed;
  };
  std::vector<BenchRow> rows;
  std::vector<Job> jobs;
  for (const auto& f : families)
    for (int n : a.sizes) {
      rows.push_back({f, n});
      for (auto s = lo; s <= hi; ++s) jobs.push_back({rows.size() - 1, s});
    }
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      auto& row = rows[jobs[j].row];
      const auto inst = generate_instance(parse_family(row.family), row.n, jobs[j].seed);
      SolveOptions so;
      so.fast_odd = a.fast_odd;
      const auto t0 = std::chrono::steady_clock::now();
      std::optional<SolveResult> res;
      std::string error;
      try {
        res = solve(inst.graph, so);
      } catch (const std::exception& e) {
        error = e.what();
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::optional<Ratio> ratio;
      if (res && row.n <= kOracleTspLimit) ratio = make_ratio(res->tour.weight, oracle_max_tsp(inst.graph));
      std::lock_guard lock(mu);
      ++row.count;
      row.seconds_sum += secs;
      if (!res) {
        ++row.errors;
        if (row.first_error.empty()) row.first_error = "seed " + std::to_string(jobs[j].seed) + ": " + error;
        continue;
      }
      if (ratio) {
        ++row.with_opt;
        if (row.with_opt == 1 || ratio_less(*ratio, row.min_ratio)) row.min_ratio = *ratio;
        row.ratio_sum += static_cast<double>(ratio->p) / static_cast<double>(ratio->q);
        if (5 * ratio->p < 4 * ratio->q && res->bound_guaranteed) ++row.violations;
      }
      if (res->run) {
        const auto& L = res->run->ledger;
        row.kites3 += L.kites3;
        row.kites4 += L.kites4;
        row.repairs += L.repairs;
        row.widened += L.widening > 0 ? 1 : 0;
        const Weight total = 2 * L.cmax + L.m + L.i + L.z + L.m;
        if (total > 0) row.best_over_average_sum += 5.0 * static_cast<double>(L.class_weights[L.best_class - 1]) / static_cast<double>(total);
      }
    }
  };
  const int workers = std::max(1, std::min<int>(a.parallel, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  char line[256];
  std::snprintf(line, sizeof line, "%-24s %5s %6s %6s %10s %9s %9s %7s %7s %8s %9s\n", "family", "n", "runs", "errors",
                "min_ratio", "min_dec", "mean", "kites3", "kites4", "repairs", "mean_s");
  std::cout << line;
  Json out = Json::array();
  int bad = 0;
  for (const auto& r : rows) {
    const double mean = r.with_opt ? r.ratio_sum / r.with_opt : 0.0;
    const double per = r.count ? 1.0 / r.count : 0.0;
    std::snprintf(line, sizeof line, "%-24s %5d %6d %6d %10s %9s %9s %7.2f %7.2f %8.2f %9.4f\n", r.family.c_str(), r.n,
                  r.count, r.errors, r.with_opt ? r.min_ratio.exact().c_str() : "-",
                  r.with_opt ? r.min_ratio.decimal().c_str() : "-",
                  r.with_opt ? std::to_string(mean).substr(0, 8).c_str() : "-", r.kites3 * per, r.kites4 * per,
                  r.repairs * per, r.seconds_sum * per);
    std::cout << line;
    if (!r.first_error.empty()) std::cout << "  error: " << r.first_error << "\n";
    bad += r.errors + r.violations;
    Json j;
    j["family"] = r.family;
    j["n"] = r.n;
    j["runs"] = r.count;
    j["errors"] = r.errors;
    j["bound_violations"] = r.violations;
    j["with_opt"] = r.with_opt;
    j["min_ratio"] = r.with_opt ? Json(r.min_ratio.exact()) : Json(nullptr);
    j["min_ratio_decimal"] = r.with_opt ? Json(r.min_ratio.decimal()) : Json(nullptr);
    j["mean_ratio"] = r.with_opt ? Json(mean) : Json(nullptr);
    j["mean_kites3"] = r.kites3 * per;
    j["mean_kites4"] = r.kites4 * per;
    j["mean_repairs"] = r.repairs * per;
    j["widened_runs"] = r.widened;
    j["mean_best_class_over_average"] = r.best_over_average_sum * per;
    j["mean_seconds"] = r.seconds_sum * per;
    if (!r.first_error.empty()) j["first_error"] = r.first_error;
    out.push_back(std::move(j));
  }
  if (!a.json.empty()) {
    Json doc;
    doc["format"] = "maxtsp-bench";
    doc["version"] = 1;
    doc["seeds"] = a.seeds;
    doc["rows"] = out;
    write_text(a.json, doc.dump(2) + "\n");
  }
  return bad == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max TSP 4/5-approximation: solve, certify, verify, benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "maxtsp 1.0");

  std::string family = "uniform_random";
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--family", family, "uniform_random, metric_euclidean, kite_heavy or adversarial_alternating");
  gen->add_option("--n", n, "Vertex count")->required()->check(CLI::Range(3, 100000));
  gen->add_option("--seed", seed, "Seed")->required();
  gen->add_option("-o,--output", out, "Output file (stdout by default)");

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Solve an instance and optionally write its certificate");
  sol->add_option("file", sa.file, "Instance file")->required();
  sol->add_option("--certificate", sa.certificate, "Write the JSON certificate here");
  sol->add_flag("--fast-odd", sa.fast_odd, "Odd n: shrink only the heaviest edge (no guarantee)");
  sol->add_flag("--trace", sa.trace, "Print the per-stage trace to stderr");
  sol->add_flag("--no-oracle", sa.no_oracle, "Skip the exact optimum even for small n");
  sol->add_option("--threads", sa.threads, "Workers for the odd-n sweep")->check(CLI::Range(1, 256));

  std::string vfile;
  std::string vcert;
  auto* ver = app.add_subcommand("verify", "Re-check a certificate against its instance");
  ver->add_option("file", vfile, "Instance file")->required();
  ver->add_option("certificate", vcert, "Certificate JSON")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Ratio table over generated instances");
  bench->add_option("--families", ba.families, "Families, or all")->expected(1, -1);
  bench->add_option("--sizes", ba.sizes, "Vertex counts")->required()->expected(1, -1);
  bench->add_option("--seeds", ba.seeds, "Seed range A..B");
  bench->add_option("--parallel", ba.parallel, "Worker threads")->check(CLI::Range(1, 256));
  bench->add_option("--json", ba.json, "Also write the table as JSON (- for stdout)");
  bench->add_flag("--fast-odd", ba.fast_odd, "Odd n: shrink only the heaviest edge");

  std::string ofile;
  auto* orc = app.add_subcommand("oracle", "Exact optimum by dynamic programming (n <= 18)");
  orc->add_option("file", ofile, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (gen->parsed()) return cmd_gen(family, n, seed, out);
    if (sol->parsed()) return cmd_solve(sa);
    if (ver->parsed()) return cmd_verify(vfile, vcert);
    if (bench->parsed()) return cmd_bench(ba);
    if (orc->parsed()) return cmd_oracle(ofile);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
