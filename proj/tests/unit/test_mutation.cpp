#include <doctest.h>

#include <algorithm>

#include "support/mutant_oracle.hpp"
#include "support/programs.hpp"
#include "updcheck/analysis/diffing.hpp"
#include "updcheck/error.hpp"
#include "updcheck/metrics/metrics.hpp"
#include "updcheck/minilang/printer.hpp"
#include "updcheck/mutation/mutation.hpp"

using namespace updcheck;
using namespace updcheck::mutation;
using updcheck::testing::check;
using updcheck::testing::listing;
using minilang::Origin;

namespace {

std::vector<std::string> fragments(const std::vector<Mutant>& ms, Operator op) {
  std::vector<std::string> out;
  for (const auto& m : ms) {
    if (m.op == op) out.push_back(m.mutated_fragment);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* kBody = R"(package lib;
class K {
    var n: int;
    fn get() -> int { return self.n; }
}
fn helper(k: int) -> int { return k; }
fn f(x: int, y: int, p: bool) -> int {
    var s: int = x + y * 2;
    var k: K = new K();
    k.n = s % 3;
    if (x > y && p || !p) {
        s = -s;
    }
    while ((s < 10) ^ p) {
        s = s + helper(abs(x));
    }
    assert k.get() >= 0 == p;
    return s - 0;
}
fn empty() {}
)";

std::shared_ptr<const minilang::SemanticModel> lib_model() {
  return check({{"c", Origin::Client, {{"src/c.ml0", "package c;"}}},
                {"lib", Origin::DirectDep, {{"src/lib.ml0", kBody}}}});
}

}  // namespace

TEST_CASE("operator names") {
  CHECK(parse_operators("abs, ROR") == std::set{Operator::ABS, Operator::ROR});
  CHECK(parse_operators("ABS,AOR,LCR,ROR,UOI") == all_operators());
  CHECK_THROWS_AS(parse_operators("ABS,XYZ"), Error);
  for (Operator op : all_operators()) CHECK(parse_operators(to_string(op)) == std::set{op});
}

TEST_CASE("relational replacement of the worked example condition") {
  auto model = check(listing());
  auto ms = generate_mutants(*model->function("p1.A.v"), *model, {Operator::ROR});
  CHECK(fragments(ms, Operator::ROR) ==
        std::vector<std::string>{"a != 0", "a < 0", "a <= 0", "a == 0", "a >= 0"});
  for (const auto& m : ms) CHECK(m.original_fragment == "a > 0");
}

TEST_CASE("arithmetic replacement covers the other four operators") {
  auto model = check(listing());
  auto ms = generate_mutants(*model->function("p2.B.b"), *model, {Operator::AOR});
  std::vector<std::string> sum;
  for (const auto& m : ms) {
    if (m.original_fragment == "x + y") sum.push_back(m.mutated_fragment);
  }
  std::sort(sum.begin(), sum.end());
  CHECK(sum == std::vector<std::string>{"x % y", "x * y", "x - y", "x / y"});
}

TEST_CASE("each operator rule on a known function") {
  auto model = check(listing());
  const auto& v = *model->function("p1.A.v");
  auto ms = generate_mutants(v, *model);
  // a > 0: ABS on a (3) and on 0 (2), ROR 5, UOI a+1 a-1 and !(a > 0);
  // true / false literals: one negation each.
  CHECK(fragments(ms, Operator::ABS) ==
        std::vector<std::string>{"-abs(0)", "-abs(a)", "0", "abs(0)", "abs(a)"});
  CHECK(fragments(ms, Operator::UOI) ==
        std::vector<std::string>{"!(a > 0)", "!false", "!true", "a + 1", "a - 1"});
  CHECK(fragments(ms, Operator::AOR).empty());
  CHECK(fragments(ms, Operator::LCR).empty());
  CHECK(ms.size() == 15);
  CHECK(generate_mutants(*lib_model()->function("lib.empty"), *lib_model()).empty());
}

TEST_CASE("mutant counts agree with an independent enumeration") {
  auto model = lib_model();
  for (const char* fn : {"lib.f", "lib.helper", "lib.K.get", "lib.empty"}) {
    const auto& info = *model->function(fn);
    for (Operator op : all_operators()) {
      CHECK(generate_mutants(info, *model, {op}).size() ==
            testing::brute_force_mutant_count(info, *model, std::string(to_string(op))));
    }
    CHECK(generate_mutants(info, *model).size() ==
          testing::brute_force_mutant_count(info, *model, ""));
  }
  auto wl = check(listing());
  for (const char* fn : {"p1.A.a", "p1.A.v", "p2.B.b", "p2.B.z", "client.Main.main"}) {
    const auto& info = *wl->function(fn);
    CHECK(generate_mutants(info, *wl).size() == testing::brute_force_mutant_count(info, *wl, ""));
  }
}

TEST_CASE("assignment targets are never mutated") {
  auto model = lib_model();
  for (const auto& m : generate_mutants(*model->function("lib.f"), *model)) {
    CHECK(m.original_fragment != "k.n");
    CHECK(m.original_fragment != "k");
  }
}

TEST_CASE("every mutant type-checks and differs from the original in exactly one place") {
  auto model = lib_model();
  const auto& unit = *model->program().find("lib");
  auto ms = generate_mutants(*model->function("lib.f"), *model);
  CHECK(ms.size() > 50);
  int rejected = 0;
  for (auto& m : ms) {
    auto mutated = materialize(m, unit.sources);
    auto prog = model->program();
    prog.find("lib")->sources = mutated;
    try {
      minilang::SemanticModel::check(prog);
    } catch (const TypeError&) {
      ++rejected;
      continue;
    }
    auto cs = analysis::diff_library("lib", registry::Version{1, 0, 0}, registry::Version{1, 0, 0},
                                     unit.sources, mutated);
    REQUIRE(cs.changes.size() == 1);
    CHECK(cs.changes[0].function == "lib.f");
    CHECK(cs.changes[0].edits.size() == 1);
    for (auto k : cs.changes[0].kinds) {
      CHECK((k == analysis::ChangeKind::DataFlow || k == analysis::ChangeKind::BranchCondition));
    }
    // The edit may sit below the replaced node (`!p` to `!!p` edits `p`).
    CHECK(m.mutated_fragment.find(cs.changes[0].edits[0].new_text) != std::string::npos);
  }
  // Every rule preserves types by construction.
  CHECK(rejected == 0);
}

TEST_CASE("materialize rejects a mutant that points elsewhere") {
  auto model = check(listing());
  auto ms = generate_mutants(*model->function("p1.A.v"), *model, {Operator::ROR});
  Mutant m = ms.at(0);
  m.node_index = 999;
  CHECK_THROWS_AS(materialize(m, model->program().find("p1")->sources), Error);
}

TEST_CASE("detection scores") {
  std::vector<metrics::MutantRecord> records;
  for (int i = 0; i < 10; ++i) {
    records.push_back({"m" + std::to_string(10 - i), "f", "AOR", i % 2 == 0, true});
  }
  auto r = metrics::detection_score(records);
  CHECK(r.test_suite.detected == 5);
  CHECK(r.test_suite.all == 10);
  CHECK(r.test_suite.score == 0.5);
  CHECK(r.static_analyzer.score == 1.0);
  CHECK(std::is_sorted(r.records.begin(), r.records.end(),
                       [](const auto& a, const auto& b) { return a.id < b.id; }));

  for (auto& m : records) m.detected_by_tests = true;
  auto all = metrics::detection_score(records);
  CHECK(all.test_suite.score == 1.0);
  CHECK(all.static_analyzer.score == 1.0);

  auto none = metrics::detection_score({});
  CHECK_FALSE(none.test_suite.score);
  CHECK_FALSE(none.static_analyzer.score);
}
