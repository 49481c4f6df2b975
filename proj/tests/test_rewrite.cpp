#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "osrlab/analysis.hpp"
#include "osrlab/rewrite.hpp"

using namespace osrlab;

TEST_CASE("constant propagation on P1") {
  Program p1 = testutil::P1();
  auto result = apply_rule(p1, builtin_cp());
  REQUIRE(result.has_value());
  CHECK(result->program == parse_program("in X\nV := 3\nY := 3 + X\nout Y"));
  CHECK(result->fwd == identity_point_map(4));
  CHECK(result->bwd == identity_point_map(4));
  CHECK(result->theta.point("m") == 3);
  CHECK(result->theta.var("x") == "Y");
  CHECK(result->theta.var("v") == "V");
  CHECK(result->theta.expr("c") == Expr::lit(3));

  REQUIRE(result->log.size() == 1);
  const auto& rep = std::get<ReplaceOperand>(result->log[0]);
  CHECK(rep.at == 3);
  CHECK(rep.old_op == Expr::var("V"));
  CHECK(rep.new_op == Expr::lit(3));
}

TEST_CASE("dead code elimination") {
  Program p1 = testutil::P1();
  SUBCASE("does not fire while the value is used") {
    CHECK_FALSE(apply_rule(p1, builtin_dce()).has_value());
  }
  SUBCASE("fires after propagation") {
    Program propagated = apply_rule(p1, builtin_cp())->program;
    auto result = apply_rule(propagated, builtin_dce());
    REQUIRE(result.has_value());
    CHECK(result->program == testutil::P2());
    REQUIRE(result->log.size() == 1);
    CHECK(std::get<DeleteInstr>(result->log[0]).at == 2);
  }
}

TEST_CASE("hoist") {
  SUBCASE("moves the assignment into the skip slot") {
    auto result = apply_rule(testutil::P3(), builtin_hoist());
    REQUIRE(result.has_value());
    CHECK(result->program == testutil::P4());
    CHECK(result->theta.point("p") == 2);
    CHECK(result->theta.point("q") == 3);
    REQUIRE(result->log.size() == 1);
    const auto& mv = std::get<HoistInstr>(result->log[0]);
    CHECK(mv.from == 3);
    CHECK(mv.to == 2);
  }
  SUBCASE("blocked by an intervening use") {
    Program p = parse_program("in X Y\nskip\nif (Y < 0) goto 5\nY := X * 2\nout Y");
    CHECK_FALSE(apply_rule(p, builtin_hoist()).has_value());
  }
  SUBCASE("blocked when the moved expression is redefined on the way") {
    Program p = parse_program("in X\nskip\nX := X + 1\nY := X * 2\nout Y");
    CHECK_FALSE(apply_rule(p, builtin_hoist()).has_value());
  }
  SUBCASE("self-referential assignments stay put") {
    Program p = parse_program("in X\nskip\nX := X * 2\nout X");
    CHECK_FALSE(apply_rule(p, builtin_hoist()).has_value());
  }
}

TEST_CASE("constant propagation needs one constant on every path") {
  CHECK(apply_rule(testutil::load_corpus("p08_branch_cp.osr"), builtin_cp()).has_value());
  CHECK_FALSE(
      apply_rule(testutil::load_corpus("p09_branch_cp_nomatch.osr"), builtin_cp()).has_value());
}

TEST_CASE("exhaustive application") {
  Program p = testutil::load_corpus("p10_dce_chain.osr");
  auto result = apply_rule_exhaustively(p, builtin_dce());
  CHECK(result.program == parse_program("in X\nskip\nskip\nC := X - 3\nout C"));
  CHECK(result.log.size() == 2);
  // first pass removes the later dead assignment, unblocking the earlier one
  CHECK(std::get<DeleteInstr>(result.log[0]).at == 3);
  CHECK(std::get<DeleteInstr>(result.log[1]).at == 2);
}

TEST_CASE("replay reproduces rule output") {
  for (const char* rule_name : {"cp", "dce", "hoist"}) {
    RewriteRule rule = *builtin_rule(rule_name);
    for (const auto& file : testutil::corpus_files()) {
      Program p = parse_program(testutil::read_file(file));
      auto result = apply_rule(p, rule);
      if (!result) continue;
      CHECK_MESSAGE(replay_log(p, result->log) == result->program, rule_name, " on ",
                    file.filename().string());
    }
  }
}

TEST_CASE("replay edge cases") {
  Program p1 = testutil::P1();
  SUBCASE("empty log is the identity") { CHECK(replay_log(p1, {}) == p1); }
  SUBCASE("insertion shifts goto targets at or past the point") {
    Program p = parse_program("in X\nif (X < 0) goto 3\nY := X + 1\nout X");
    Program padded = replay_log(p, {AddInstr{Skip{}, 3}});
    CHECK(padded == parse_program("in X\nif (X < 0) goto 4\nskip\nY := X + 1\nout X"));
    CHECK(padded.size() == 5);
  }
  SUBCASE("pad helper") {
    Program padded = pad_program(p1, 2, 2);
    CHECK(padded == parse_program("in X\nskip\nskip\nV := 3\nY := V + X\nout Y"));
  }
  SUBCASE("stale points are rejected") {
    CHECK_THROWS_AS(replay_log(p1, {DeleteInstr{1}}), InvalidAction);
    CHECK_THROWS_AS(replay_log(p1, {DeleteInstr{4}}), InvalidAction);
    CHECK_THROWS_AS(replay_log(p1, {HoistInstr{3, 2}}), InvalidAction);  // 2 is not skip
    CHECK_THROWS_AS(replay_log(p1, {ReplaceOperand{2, Expr::var("Q"), Expr::lit(1)}}),
                    InvalidAction);
  }
  SUBCASE("replace-all rewrites every expression position") {
    Program p = parse_program("in X\nA := X + 1\nif (X < 0) goto 4\nout A");
    Program rewritten = replay_log(p, {ReplaceAllUses{Expr::var("X"), Expr::lit(5)}});
    CHECK(rewritten == parse_program("in X\nA := 5 + 1\nif (5 < 0) goto 4\nout A"));
  }
}

TEST_CASE("rule matches enumerate in point order") {
  // two independent dead assignments: the earlier one must fire first
  Program p = parse_program("in X\nA := X + 1\nB := X + 2\nout X");
  auto matches = rule_matches(p, builtin_dce());
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].point("m") == 2);
  CHECK(matches[1].point("m") == 3);
}

TEST_CASE("semantics preservation on random stores") {
  std::mt19937_64 rng(21);
  int applications = 0;
  for (const char* rule_name : {"cp", "dce", "hoist"}) {
    RewriteRule rule = *builtin_rule(rule_name);
    for (const auto& file : testutil::corpus_files()) {
      Program p = parse_program(testutil::read_file(file));
      auto result = apply_rule(p, rule);
      if (!result) continue;
      ++applications;
      for (int i = 0; i < 50; ++i) {
        Store s = testutil::random_store(p, rng);
        auto a = run(p, s, 10000);
        auto b = run(result->program, s, 10000);
        CHECK(same_outcome_class(a, b));
        if (std::holds_alternative<Completed>(a))
          CHECK(std::get<Completed>(a).final == std::get<Completed>(b).final);
      }
    }
  }
  CHECK(applications >= 6);
}

TEST_CASE("rewritten programs are live-variable bisimilar") {
  std::mt19937_64 rng(22);
  for (const char* rule_name : {"cp", "dce", "hoist"}) {
    RewriteRule rule = *builtin_rule(rule_name);
    for (const auto& file : testutil::corpus_files()) {
      Program p = parse_program(testutil::read_file(file));
      auto result = apply_rule(p, rule);
      if (!result) continue;
      CHECK(result->program.size() == p.size());
      for (int i = 0; i < 25; ++i) {
        Store s = testutil::random_store(p, rng);
        Trace ta = trace(p, s, 5000);
        Trace tb = trace(result->program, s, 5000);
        REQUIRE(ta.states.size() == tb.states.size());
        for (size_t k = 0; k < ta.states.size(); ++k) {
          CHECK(ta.states[k].point == tb.states[k].point);
          int l = ta.states[k].point;
          if (l > p.size()) continue;
          std::set<std::string> common;
          for (const auto& x : live_vars(p, l))
            if (live_vars(result->program, l).count(x)) common.insert(x);
          CHECK(ta.states[k].store.restricted(common) == tb.states[k].store.restricted(common));
        }
      }
    }
  }
}

TEST_CASE("pipeline parsing") {
  auto items = parse_pipeline("cp,dce*,hoist");
  REQUIRE(items.size() == 3);
  CHECK(items[0].rule.name == "cp");
  CHECK_FALSE(items[0].exhaustive);
  CHECK(items[1].rule.name == "dce");
  CHECK(items[1].exhaustive);
  CHECK(items[2].rule.name == "hoist");
  CHECK_THROWS_AS(parse_pipeline("cp,unknown"), std::invalid_argument);
}
