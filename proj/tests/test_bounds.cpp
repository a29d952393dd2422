#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "lkv/bounds.hpp"
#include "lkv/reference.hpp"
#include "lkv/selftest.hpp"

using namespace lkv;

namespace {

PipelineConfig quiet_cfg() {
  PipelineConfig cfg;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("upper bounds at small bidegrees") {
  auto cfg = quiet_cfg();
  CHECK(upper_bound(3, 1, cfg) == 0);
  CHECK(upper_bound(8, 2, cfg) == 1);
  CHECK(upper_bound(12, 4, cfg) == 1);
  CHECK(upper_bound(13, 3, cfg) == 2);
  for (int W = 2; W <= 12; ++W) CHECK(upper_bound(W, 1, cfg) == 0);
  CHECK_THROWS_AS(upper_bound(3, 1, [] { auto c = quiet_cfg(); c.prime = 2; return c; }()),
                  std::invalid_argument);
}

TEST_CASE("upper bound is split independent") {
  auto cfg = quiet_cfg();
  for (int W = 4; W <= 10; ++W)
    for (int D = 1; D <= W; ++D) {
      cfg.w1 = 0;
      uint64_t v = upper_bound(W, D, cfg);
      for (int w1 : {1, 2, W - 1}) {
        cfg.w1 = w1;
        CHECK(upper_bound(W, D, cfg) == v);
      }
      cfg.w1 = 0;
    }
}

TEST_CASE("upper bound is prime independent") {
  auto cfg = quiet_cfg();
  for (int W = 4; W <= 12; ++W)
    for (int D = 1; D <= W; ++D) {
      uint64_t v = upper_bound(W, D, cfg);
      for (uint32_t p : {65521u, 2147483629u}) {
        auto alt = cfg;
        alt.prime = p;
        CHECK(upper_bound(W, D, alt) == v);
      }
    }
}

TEST_CASE("lower bounds from the depth-1 generators") {
  auto cfg = quiet_cfg();
  CHECK(lower_bound(3, 1, {}, cfg) == 1);
  CHECK(lower_bound(4, 1, {}, cfg) == 0);
  CHECK(lower_bound(8, 2, {}, cfg) == 1);
  CHECK(lower_bound(6, 2, {}, cfg) == 0);   // [s3,s3] vanishes
  CHECK(lower_bound(12, 4, {}, cfg) == 0);  // no Lyndon word in four copies of s3
  CHECK(lower_bound(11, 3, {}, cfg) == 1);
  CHECK(lower_bound(13, 3, {}, cfg) == 2);
}

TEST_CASE("hat assembly") {
  CHECK(assemble_hat_lkv(3, 1, 0) == 1);
  CHECK(assemble_hat_lkv(4, 1, 0) == 0);
  CHECK(assemble_hat_lkv(8, 2, 1) == 1);
  CHECK(assemble_hat_lkv(9, 4, 7) == 7);
  CHECK(assemble_hat_lkv(5, 0, 3) == 0);
}

TEST_CASE("run_table statuses and serializations") {
  TableOptions opt;
  opt.max_weight = 8;
  auto cfg = quiet_cfg();
  auto results = run_table(opt, cfg);
  REQUIRE(!results.empty());
  for (const auto& r : results) {
    auto ref = reference_dim(r.W, r.D);
    REQUIRE(ref);
    INFO("W=" << r.W << " D=" << r.D);
    CHECK(static_cast<long long>(r.upper) == *ref);
    CHECK(r.status == CellStatus::matched);
    REQUIRE(r.lower);
    CHECK(*r.lower == r.upper);
    CHECK(r.bk == *ref);
    CHECK(*r.lower <= r.upper);
  }

  auto csv = table_to_csv(results);
  CHECK(csv.find("W,D,upper,lower,bk,status") == 0);
  CHECK(csv.find("8,2,1,1,1,matched") != std::string::npos);
  CHECK(csv.find("3,1,1,1,1,matched") != std::string::npos);

  auto js = nlohmann::json::parse(table_to_json(results, cfg, opt));
  CHECK(js["config"]["prime"] == 3323);
  CHECK(js["cells"].size() == results.size());

  auto pretty = table_to_pretty(results);
  CHECK(pretty.find("W\\D") != std::string::npos);

  // CSV and pretty outputs are byte-identical across thread counts; JSON
  // agrees once the runtime metadata is stripped
  auto cfg1 = cfg;
  cfg1.threads = 1;
  auto results1 = run_table(opt, cfg1);
  CHECK(table_to_csv(results1) == csv);
  CHECK(table_to_pretty(results1) == pretty);
  CHECK(table_to_json(results1, cfg1, opt, false) != table_to_json(results, cfg, opt, false));
  // (thread count is part of the config block; cells must agree)
  auto cells_a = nlohmann::json::parse(table_to_json(results1, cfg1, opt, false))["cells"];
  auto cells_b = nlohmann::json::parse(table_to_json(results, cfg, opt, false))["cells"];
  CHECK(cells_a == cells_b);
}

TEST_CASE("the exceptional bidegree is reported as a gap") {
  TableOptions opt;
  opt.min_weight = 12;
  opt.max_weight = 12;
  auto cfg = quiet_cfg();
  auto results = run_table(opt, cfg);
  bool saw_gap = false;
  for (const auto& r : results) {
    if (r.W == 12 && r.D == 4) {
      CHECK(r.status == CellStatus::gap);
      CHECK(r.upper == 1);
      REQUIRE(r.lower);
      CHECK(*r.lower == 0);
      saw_gap = true;
    } else {
      CHECK(r.status == CellStatus::matched);
    }
  }
  CHECK(saw_gap);

  // upper-only mode skips the lower pipeline
  opt.with_lower = false;
  auto uo = run_table(opt, cfg);
  for (const auto& r : uo) {
    CHECK(r.status == CellStatus::upper_only);
    CHECK(!r.lower);
  }
}

TEST_CASE("seed files") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "lkv_seed_test";
  fs::create_directories(dir);
  auto path = (dir / "seeds.txt").string();

  PrimeField f(3323);
  {
    std::ofstream os(path);
    os << "# comment line\n";
    os << "alt3 3 1 1 (XXYY) -1 (XYXY)\n";
  }
  auto seeds = load_seed_file(path, f);
  REQUIRE(seeds.size() == 1);
  CHECK(seeds[0].name == "alt3");
  CHECK(seeds[0].weight == 3);
  CHECK(seeds[0].depth == 1);

  // a redundant seed (a copy of the weight-3 generator image) changes nothing
  auto cfg = quiet_cfg();
  CHECK(lower_bound(8, 2, seeds, cfg) == lower_bound(8, 2, {}, cfg));
  CHECK(lower_bound(3, 1, seeds, cfg) == 1);

  {
    std::ofstream os(path);
    os << "bad 5 2 1 (XXYY)\n";  // declared bidegree does not match the value
  }
  CHECK_THROWS_AS(load_seed_file(path, f), std::runtime_error);

  {
    std::ofstream os(path);
    os << "mixed 3 1 1 (XXYY) 1 (XXY)\n";  // inhomogeneous support
  }
  CHECK_THROWS_AS(load_seed_file(path, f), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("a derived exceptional seed closes the (12,4) gap") {
  // Derive a genuine kernel element over exact rationals: the generating
  // rows span the embedded special derivations, and the combinations killed
  // by the half-divergence form the one-dimensional (12,4) kernel.
  const RationalField Q;
  auto rows = genset_rows(Q, 12, 4, 6);
  std::vector<CyclicPoly<RationalField>> images;
  for (const auto& r : rows) images.push_back(delta_y(Q, r, DeltaMode::strip1));
  auto image_rows = to_dense_rows(images, 12, 4);  // (11,3) slice coordinates
  // transpose: columns are the row-combination unknowns
  std::vector<std::vector<Rational>> m(image_rows[0].size(),
                                       std::vector<Rational>(rows.size(), Rational(0)));
  for (size_t i = 0; i < image_rows.size(); ++i)
    for (size_t j = 0; j < image_rows[i].size(); ++j) m[j][i] = image_rows[i][j];
  auto kernel = exact_kernel_basis(m, rows.size());
  REQUIRE(!kernel.empty());

  CyclicPoly<RationalField> seed_value;
  for (const auto& x : kernel) {
    CyclicPoly<RationalField> combo;
    for (size_t i = 0; i < rows.size(); ++i) add_scaled(Q, combo, rows[i], x[i]);
    if (!combo.is_zero()) {
      seed_value = combo;
      break;
    }
  }
  REQUIRE(!seed_value.is_zero());
  CHECK(delta_y(Q, seed_value, DeltaMode::strip1).is_zero());
  auto bd = bidegree(seed_value);
  REQUIRE(bd);
  CHECK(*bd == std::pair<int, int>{12, 4});

  // clear denominators and round-trip through the seed file format
  BigInt common = 1;
  for (const auto& [cw, c] : seed_value.terms) common = lcm(common, BigInt(denominator(c)));
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "lkv_rho_test";
  fs::create_directories(dir);
  auto path = (dir / "rho.txt").string();
  {
    std::ofstream os(path);
    os << "rho12 12 4";
    for (const auto& [cw, c] : seed_value.terms) {
      BigInt n = numerator(c) * (common / denominator(c));
      os << " " << n.str() << " " << cw.str();
    }
    os << "\n";
  }

  auto cfg = quiet_cfg();
  cfg.seed_file = path;
  TableOptions opt;
  opt.min_weight = 12;
  opt.max_weight = 12;
  opt.max_depth = 4;
  auto results = run_table(opt, cfg);
  for (const auto& r : results)
    if (r.W == 12 && r.D == 4) {
      CHECK(r.status == CellStatus::matched);
      CHECK(r.upper == 1);
      REQUIRE(r.lower);
      CHECK(*r.lower == 1);
    }

  // the same seed participates in brackets at higher weight
  PrimeField f(cfg.prime);
  auto seeds = load_seed_file(path, f);
  CHECK(lower_bound(15, 5, seeds, cfg) == 1);
  CHECK(lower_bound(12, 4, seeds, cfg) == 1);
  fs::remove_all(dir);
}

TEST_CASE("checkpointed upper bound matches the uninterrupted run") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "lkv_ckpt_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  auto cfg = quiet_cfg();
  uint64_t direct = upper_bound(9, 3, cfg);

  auto ck = cfg;
  ck.checkpoint_dir = dir.string();
  ck.checkpoint_interval = 2;  // force many checkpoint blocks
  CHECK(upper_bound(9, 3, ck) == direct);
  // a second run resumes from the completed checkpoint
  CHECK(upper_bound(9, 3, ck) == direct);
  CHECK(!fs::is_empty(dir));
  fs::remove_all(dir);
}

TEST_CASE("mode adjudication grid runs") {
  auto cells = mode_adjudication(6, quiet_cfg());
  REQUIRE(!cells.empty());
  for (const auto& c : cells) {
    if (!c.reference) continue;
    CHECK(static_cast<long long>(c.strip1_value) == *c.reference);
  }
}
