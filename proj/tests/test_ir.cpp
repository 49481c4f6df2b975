#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "osrlab/cfg.hpp"
#include "osrlab/interp.hpp"
#include "osrlab/parse.hpp"

using namespace osrlab;

TEST_CASE("parse basic program") {
  Program p = parse_program("in X\nY := X + 1\nout Y");
  REQUIRE(p.size() == 3);
  const auto& a = std::get<Assign>(p.at(2));
  CHECK(a.target == "Y");
  CHECK(a.rhs == Expr::bin(BinOp::Add, Expr::var("X"), Expr::lit(1)));
}

TEST_CASE("parse minimal two-instruction program") {
  Program p = parse_program("in X\nout X");
  CHECK(p.size() == 2);
}

TEST_CASE("structure errors") {
  CHECK_THROWS_AS(parse_program("skip\nout X"), StructureError);
  CHECK_THROWS_AS(parse_program("in X\nskip"), StructureError);
  CHECK_THROWS_AS(parse_program("in X X\nout X"), StructureError);
  CHECK_THROWS_AS(parse_program("in X\ngoto 9\nout X"), StructureError);
  CHECK_THROWS_AS(parse_program("in X\nin Y\nout X"), StructureError);
}

TEST_CASE("syntax errors carry line numbers") {
  try {
    parse_program("in X\nY := := 2\nout Y");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("comments and blank lines do not consume points") {
  Program p = parse_program("# header\nin X\n\n  # note\nY := X * 2  # double\nout Y\n");
  CHECK(p.size() == 3);
  CHECK(std::get<Assign>(p.at(2)).target == "Y");
}

TEST_CASE("print round-trips and parenthesizes") {
  Program p = parse_program("in X\nY := X + 1 * X - 2\nout Y");
  std::string text = print_program(p);
  CHECK(text == "in X\nY := ((X + (1 * X)) - 2)\nout Y");
  CHECK(parse_program(text) == p);

  Program minimal = parse_program("in X\nout X");
  CHECK(print_program(minimal) == "in X\nout X");

  Program cond = parse_program("in X\nif (X < 3) goto 3\nout X");
  CHECK(print_program(cond) == "in X\nif (X < 3) goto 3\nout X");
  CHECK(parse_program(print_program(cond)) == cond);
}

TEST_CASE("negative literals round-trip") {
  Program p = parse_program("in X\nY := -2 + X\nZ := -(X + 1)\nout Y Z");
  CHECK(parse_program(print_program(p)) == p);
  const auto& y = std::get<Assign>(p.at(2));
  CHECK(y.rhs.lhs().lit_value() == -2);
}

TEST_CASE("eval_expr") {
  Store s{{"X", Value(5)}};
  CHECK(eval_expr(s, parse_expr("X + 1")) == 6);
  CHECK(eval_expr(s, parse_expr("X < 3")) == 0);
  CHECK(eval_expr(s, parse_expr("X <= 5")) == 1);
  CHECK(eval_expr(s, parse_expr("X != 5")) == 0);
  CHECK_THROWS_AS(eval_expr(Store{}, parse_expr("X")), EvalError);
}

TEST_CASE("step rules") {
  Program p = testutil::P1();
  SUBCASE("assignment advances with updated store") {
    auto r = step(p, ProgState{Store{{"X", Value(5)}}, 2});
    auto& next = std::get<ProgState>(r);
    CHECK(next.point == 3);
    CHECK(next.store == Store{{"X", Value(5)}, {"V", Value(3)}});
  }
  SUBCASE("out restricts the store") {
    auto r = step(p, ProgState{Store{{"X", Value(5)}, {"Y", Value(6)}}, 4});
    auto& next = std::get<ProgState>(r);
    CHECK(next.point == 5);
    CHECK(next.store == Store{{"Y", Value(6)}});
  }
  SUBCASE("conditional falls through on zero") {
    Program q = parse_program("in X\nif (X < 3) goto 5\nskip\nskip\nout X");
    auto r = step(q, ProgState{Store{{"X", Value(5)}}, 2});
    CHECK(std::get<ProgState>(r).point == 3);
    auto jumped = step(q, ProgState{Store{{"X", Value(1)}}, 2});
    CHECK(std::get<ProgState>(jumped).point == 5);
  }
  SUBCASE("in violation") {
    auto r = step(p, ProgState{Store{}, 1});
    CHECK(std::get<RunOutcome>(r) == RunOutcome(InViolation{"X"}));
  }
  SUBCASE("abort") {
    Program q = parse_program("in X\nabort\nout X");
    auto r = step(q, ProgState{Store{{"X", Value(0)}}, 2});
    CHECK(std::get<RunOutcome>(r) == RunOutcome(Aborted{2}));
  }
}

TEST_CASE("run examples") {
  CHECK(run(testutil::P1(), Store{{"X", Value(5)}}, 100) ==
        RunOutcome(Completed{Store{{"Y", Value(8)}}}));

  Program loop = testutil::load_corpus("p06_loop.osr");
  CHECK(run(loop, Store{{"N", Value(3)}}, 100) == RunOutcome(Completed{Store{{"S", Value(3)}}}));

  Program self = parse_program("in X\ngoto 2\nout X");
  CHECK(run(self, Store{{"X", Value(1)}}, 10) == RunOutcome(FuelExhausted{10}));
}

TEST_CASE("trace examples") {
  Trace t = trace(testutil::P1(), Store{{"X", Value(5)}}, 100);
  REQUIRE(t.states.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(t.states[static_cast<size_t>(i)].point == i + 1);
  CHECK(t.states[2].store == Store{{"X", Value(5)}, {"V", Value(3)}});
  CHECK(t.states[3].store == Store{{"X", Value(5)}, {"V", Value(3)}, {"Y", Value(8)}});
  CHECK(t.states[4].store == Store{{"Y", Value(8)}});
  CHECK(t.outcome == RunOutcome(Completed{Store{{"Y", Value(8)}}}));

  Trace two = trace(parse_program("in X\nout X"), Store{{"X", Value(1)}}, 10);
  CHECK(two.states.size() == 3);  // two transitions

  Trace diverged = trace(parse_program("in X\ngoto 2\nout X"), Store{{"X", Value(1)}}, 5);
  CHECK(diverged.outcome == RunOutcome(FuelExhausted{5}));
  CHECK(diverged.states.size() == 6);
}

TEST_CASE("determinism of trace") {
  Program p = testutil::load_corpus("p06_loop.osr");
  Store s{{"N", Value(4)}};
  Trace a = trace(p, s, 200);
  Trace b = trace(p, s, 200);
  REQUIRE(a.states.size() == b.states.size());
  for (size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i] == b.states[i]);
  CHECK(a.outcome == b.outcome);
}

TEST_CASE("completed store contains exactly the out-listed variables") {
  std::mt19937_64 rng(7);
  for (const auto& file : testutil::corpus_files()) {
    Program p = parse_program(testutil::read_file(file));
    for (int i = 0; i < 20; ++i) {
      auto outcome = run(p, testutil::random_store(p, rng), 10000);
      if (const auto* c = std::get_if<Completed>(&outcome)) {
        std::set<std::string> allowed(p.out_vars().begin(), p.out_vars().end());
        for (const auto& [name, value] : c->final.bindings()) CHECK(allowed.count(name) == 1);
        for (const auto& name : allowed) CHECK(c->final.defined(name));
      }
    }
  }
}

TEST_CASE("cfg construction") {
  SUBCASE("straight line") {
    Cfg g = build_cfg(testutil::P1());
    CHECK(g.successors(1) == std::vector<int>{2});
    CHECK(g.successors(2) == std::vector<int>{3});
    CHECK(g.successors(3) == std::vector<int>{4});
    CHECK(g.successors(4).empty());
    CHECK(g.predecessors(3) == std::vector<int>{2});
    CHECK(g.acyclic());
  }
  SUBCASE("conditional contributes both edges") {
    Program p = parse_program(
        "in X\nskip\nskip\nif (X < 0) goto 8\nskip\nskip\nskip\nout X");
    Cfg g = build_cfg(p);
    CHECK(g.successors(4) == std::vector<int>{5, 8});
  }
  SUBCASE("abort has no successors") {
    Program p = parse_program("in X\nabort\nout X");
    Cfg g = build_cfg(p);
    CHECK(g.successors(2).empty());
    CHECK(g.predecessors(3).empty());
  }
  SUBCASE("loop is cyclic and sink-reachability is computed") {
    Cfg g = build_cfg(testutil::load_corpus("p06_loop.osr"));
    CHECK_FALSE(g.acyclic());
    auto reach = g.can_reach_sink();
    for (int i = 1; i <= g.n; ++i) CHECK(reach[static_cast<size_t>(i)]);
    Cfg self = build_cfg(parse_program("in X\ngoto 2\nout X"));
    auto r2 = self.can_reach_sink();
    CHECK(r2[3]);
    CHECK_FALSE(r2[2]);
    CHECK_FALSE(r2[1]);
  }
}

TEST_CASE("compose_programs") {
  Program p = parse_program("in X\nV := 3\nout V X");
  Program q = parse_program("in V X\nY := V + X\nout Y");
  Program composed = compose_programs(p, q);
  CHECK(composed == parse_program("in X\nV := 3\nY := V + X\nout Y"));

  Program id = parse_program("in X\nout X");
  CHECK(compose_programs(id, id) == id);

  Program needs_z = parse_program("in Z\nout Z");
  try {
    compose_programs(p, needs_z);
    FAIL("expected NotComposable");
  } catch (const NotComposable& e) {
    CHECK(e.missing() == std::vector<std::string>{"Z"});
  }
}

TEST_CASE("compose_programs relocates goto targets") {
  Program p = parse_program("in X\nA := X + 1\nout A");
  Program q = parse_program("in A\nif (A < 0) goto 4\nA := A * 2\nout A");
  Program composed = compose_programs(p, q);
  // q's point 4 lands at 4 + 3 - 2 = 5
  CHECK(print_program(composed) ==
        "in X\nA := (X + 1)\nif (A < 0) goto 5\nA := (A * 2)\nout A");
  Store s{{"X", Value(3)}};
  CHECK(run(composed, s, 100) == RunOutcome(Completed{Store{{"A", Value(8)}}}));
  CHECK(run(composed, Store{{"X", Value(-5)}}, 100) ==
        RunOutcome(Completed{Store{{"A", Value(-4)}}}));
}

TEST_CASE("composition semantics on random stores") {
  // holds when the second program reads only its in list, as compensation
  // codes do
  Program p = parse_program("in X\nV := X * 2\nout V X");
  Program q = parse_program("in V X\nY := V + X\nout Y");
  Program composed = compose_programs(p, q);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dist(-50, 50);
  for (int i = 0; i < 100; ++i) {
    Store s{{"X", Value(dist(rng))}};
    auto direct = run(composed, s, 100);
    auto first = run(p, s, 100);
    REQUIRE(std::holds_alternative<Completed>(first));
    auto second = run(q, std::get<Completed>(first).final, 100);
    CHECK(direct == second);
  }
}

TEST_CASE("round-trip identity on the corpus") {
  for (const auto& file : testutil::corpus_files()) {
    Program p = parse_program(testutil::read_file(file));
    CHECK(parse_program(print_program(p)) == p);
  }
}
