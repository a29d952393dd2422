// Command-line front end for the bigraded dimension pipelines: dimension
// formulas, the conjectural dimension table, the upper/lower bound runs and
// the oracle-backed self test.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lkv/bk.hpp"
#include "lkv/bounds.hpp"
#include "lkv/lie.hpp"
#include "lkv/selftest.hpp"
#include "lkv/words.hpp"

namespace {

struct CommonFlags {
  lkv::PipelineConfig cfg;
  std::string delta_mode = "strip1";
  std::string format = "csv";

  void attach_pipeline(CLI::App* cmd) {
    cmd->add_option("--prime", cfg.prime, "modulus for the modular pipelines")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.rng_seed, "seed for the folding multipliers")
        ->capture_default_str();
    cmd->add_option("--threads", cfg.threads,
                    "worker threads (0: LKV_THREADS env, then all cores)")
        ->capture_default_str();
    cmd->add_option("--delta-mode", delta_mode, "half-divergence convention")
        ->check(CLI::IsMember({"strip1", "strip2"}))
        ->capture_default_str();
    cmd->add_option("--w1", cfg.w1, "length split of the generating pairs (0: floor((W+1)/2))")
        ->capture_default_str();
    cmd->add_option("--checkpoint", cfg.checkpoint_dir, "directory for matrix checkpoints");
    cmd->add_option("--checkpoint-interval", cfg.checkpoint_interval,
                    "rows folded between checkpoints (0: 65536)");
  }

  void finalize() {
    cfg.delta_mode = delta_mode == "strip2" ? lkv::DeltaMode::strip2 : lkv::DeltaMode::strip1;
  }
};

int run(int argc, char** argv) {
  CLI::App app{
      "lkv: two-sided modular rank pipelines for the bigraded dimensions of the "
      "linearized Kashiwara-Vergne Lie algebra, with a generating-function cross-check"};
  app.require_subcommand(1);

  // dims
  auto* dims = app.add_subcommand("dims", "print dimension formulas");
  std::string dims_kind;
  int dims_w = 0;
  int dims_d = -1;
  dims->add_option("kind", dims_kind, "f2 | sder | cyclic")
      ->required()
      ->check(CLI::IsMember({"f2", "sder", "cyclic"}));
  dims->add_option("W", dims_w, "weight (for cyclic: word length)")->required();
  dims->add_option("D", dims_d, "depth (for cyclic: Y-count); optional for f2");
  dims->callback([&] {
    if (dims_kind == "f2") {
      std::cout << (dims_d < 0 ? lkv::dim_f2(dims_w) : lkv::dim_f2(dims_w, dims_d)).str() << "\n";
    } else if (dims_kind == "sder") {
      if (dims_d < 0) throw CLI::ValidationError("dims sder needs W and D");
      std::cout << lkv::dim_sder(dims_w, dims_d).str() << "\n";
    } else {
      if (dims_d < 0) throw CLI::ValidationError("dims cyclic needs length and Y-count");
      std::cout << lkv::count_cyclic_words(dims_w, dims_d).str() << "\n";
    }
  });

  // bk-table
  auto* bk = app.add_subcommand("bk-table", "predicted dimension table as CSV");
  int bk_maxw = 30;
  bk->add_option("--max-weight", bk_maxw, "largest weight")->capture_default_str();
  bk->callback([&] {
    auto table = lkv::bk_table(bk_maxw);
    std::cout << "W,D,BK\n";
    for (int w = 3; w <= bk_maxw; ++w)
      for (int d = 1; d <= w; ++d)
        std::cout << w << "," << d << "," << table.at({w, d}) << "\n";
  });

  // upper
  auto* upper = app.add_subcommand("upper", "upper bound for one bidegree");
  CommonFlags upper_flags;
  int ub_w = 0, ub_d = 0;
  upper->add_option("W", ub_w, "weight")->required();
  upper->add_option("D", ub_d, "depth")->required();
  upper_flags.attach_pipeline(upper);
  upper->add_option("--format", upper_flags.format, "plain | json")
      ->check(CLI::IsMember({"plain", "json", "csv"}))
      ->capture_default_str();
  upper->callback([&] {
    upper_flags.finalize();
    lkv::UpperDetail detail;
    uint64_t v = lkv::upper_bound(ub_w, ub_d, upper_flags.cfg, &detail);
    if (upper_flags.format == "json") {
      nlohmann::json j = {{"W", ub_w},
                          {"D", ub_d},
                          {"upper", v},
                          {"hat_upper", lkv::assemble_hat_lkv(ub_w, ub_d, v)},
                          {"sder_dim", detail.sder_dim},
                          {"rows", detail.n_rows},
                          {"cols", detail.n_cols},
                          {"rank", detail.rank},
                          {"w1", detail.w1},
                          {"runtime_s", detail.seconds}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << v << "\n";
    }
  });

  // lower
  auto* lower = app.add_subcommand("lower", "lower bound for one bidegree");
  CommonFlags lower_flags;
  int lb_w = 0, lb_d = 0;
  lower->add_option("W", lb_w, "weight")->required();
  lower->add_option("D", lb_d, "depth")->required();
  lower_flags.attach_pipeline(lower);
  lower->add_option("--seeds", lower_flags.cfg.seed_file, "extra seed elements, one per line");
  lower->add_option("--format", lower_flags.format, "plain | json")
      ->check(CLI::IsMember({"plain", "json", "csv"}))
      ->capture_default_str();
  lower->callback([&] {
    lower_flags.finalize();
    lkv::PrimeField f(lower_flags.cfg.prime);
    std::vector<lkv::SeedElement> extra;
    if (!lower_flags.cfg.seed_file.empty())
      extra = lkv::load_seed_file(lower_flags.cfg.seed_file, f);
    lkv::LowerDetail detail;
    uint64_t v = lkv::lower_bound(lb_w, lb_d, extra, lower_flags.cfg, &detail);
    if (lower_flags.format == "json") {
      nlohmann::json j = {{"W", lb_w},     {"D", lb_d},          {"lower", v},
                          {"rows", detail.n_rows}, {"cols", detail.n_cols}, {"rank", detail.rank},
                          {"runtime_s", detail.seconds}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << v << "\n";
    }
  });

  // table
  auto* table = app.add_subcommand("table", "two-sided bound table over a weight range");
  CommonFlags table_flags;
  lkv::TableOptions topt;
  bool upper_only = false;
  table->add_option("--max-weight", topt.max_weight, "largest weight")->required();
  table->add_option("--max-depth", topt.max_depth, "largest depth (0: up to W)")
      ->capture_default_str();
  table->add_option("--min-weight", topt.min_weight, "smallest weight")->capture_default_str();
  table->add_flag("--upper-only", upper_only, "skip the lower-bound runs");
  table_flags.attach_pipeline(table);
  table->add_option("--seeds", table_flags.cfg.seed_file, "extra seed elements, one per line");
  table->add_option("--format", table_flags.format, "csv | json | table")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  table->callback([&] {
    table_flags.finalize();
    topt.with_lower = !upper_only;
    auto progress = [](const lkv::BoundResult& r) {
      std::cerr << "W=" << r.W << " D=" << r.D << " upper=" << r.upper;
      if (r.lower) std::cerr << " lower=" << *r.lower;
      std::cerr << " bk=" << r.bk << " status=" << lkv::to_string(r.status) << " ("
                << r.seconds << "s)\n";
    };
    auto results = lkv::run_table(topt, table_flags.cfg, progress);
    if (table_flags.format == "json")
      std::cout << lkv::table_to_json(results, table_flags.cfg, topt);
    else if (table_flags.format == "table")
      std::cout << lkv::table_to_pretty(results);
    else
      std::cout << lkv::table_to_csv(results);
  });

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the oracle-backed property suites");
  lkv::SelftestOptions sopt;
  std::string st_mode = "strip1";
  selftest->add_option("--prime", sopt.prime, "modulus")->capture_default_str();
  selftest->add_option("--seed", sopt.rng_seed, "seed")->capture_default_str();
  selftest->add_option("--threads", sopt.threads, "worker threads")->capture_default_str();
  selftest->add_option("--delta-mode", st_mode, "half-divergence convention")
      ->check(CLI::IsMember({"strip1", "strip2"}))
      ->capture_default_str();
  selftest->add_option("--max-weight", sopt.mode_report_max_weight,
                       "weight bound for the mode comparison grid")
      ->capture_default_str();
  selftest->callback([&] {
    sopt.delta_mode = st_mode == "strip2" ? lkv::DeltaMode::strip2 : lkv::DeltaMode::strip1;
    auto report = lkv::run_selftest(sopt);
    for (const auto& s : report.sections) {
      std::cout << (s.passed ? "[PASS] " : "[FAIL] ") << s.name << "\n";
      for (const auto& line : s.lines) std::cout << "       " << line << "\n";
    }
    std::cout << (report.all_passed() ? "selftest: all sections passed"
                                      : "selftest: FAILURES detected")
              << "\n";
    if (!report.all_passed()) throw CLI::RuntimeError("selftest failed", 1);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
