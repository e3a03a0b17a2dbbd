#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "../test_support.hpp"
#include "mersched/lp_format.hpp"

using namespace mersched;

TEST_CASE("format_double keeps integers terse and round trips doubles") {
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(0.0) == "0");
  for (double v : {0.1, -1.0 / 3.0, 2.5e-7, 1.23456789012345e12, 0.0922 / 160.2756}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("writer and reader agree on a handmade model") {
  ModelIR ir;
  int a = ir.add_binary("a");
  int b = ir.add_var("b", -1.5, 4.5, false);
  int c = ir.add_var("c", 0, 2, true);
  int d = ir.add_var("d", 1.25, 1.25, false);  // pinned
  ir.objective.add(a, 2.0).add(b, -0.5);
  ir.add_row("one", LinExpr{}.add(a, 1.0).add(b, 1.0), Sense::le, 3);
  ir.add_row("two", LinExpr{}.add(b, -2.0).add(c, 1.0), Sense::ge, -1);
  ir.add_row("three", LinExpr{}.add(a, 1.0).add(c, 1.0).add(d, 1.0), Sense::eq, 2);

  LpModel lp = parse_lp(write_lp(ir));
  CHECK(lp.maximize);
  REQUIRE(lp.objective.size() == 2);
  CHECK(lp.objective[0] == std::pair<std::string, double>{"a", 2.0});
  CHECK(lp.objective[1] == std::pair<std::string, double>{"b", -0.5});

  REQUIRE(lp.rows.size() == 3);
  CHECK(lp.rows[0].sense == Sense::le);
  CHECK(lp.rows[0].rhs == 3);
  CHECK(lp.rows[1].sense == Sense::ge);
  CHECK(lp.rows[1].rhs == -1);
  CHECK(lp.rows[1].terms ==
        std::vector<std::pair<std::string, double>>{{"b", -2.0}, {"c", 1.0}});
  CHECK(lp.rows[2].sense == Sense::eq);

  CHECK(lp.bounds.at("b").lb == -1.5);
  CHECK(lp.bounds.at("b").ub == 4.5);
  CHECK(lp.bounds.at("d").lb == 1.25);
  CHECK(lp.bounds.at("d").ub == 1.25);
  // a is binary, c a bounded integer: both must land in the integral section.
  CHECK(std::count(lp.binaries.begin(), lp.binaries.end(), "a") == 1);
}

TEST_CASE("assembled fixture model survives an LP round trip") {
  Scenario sc = testsup::load_fixture("t4_loop_choice.json");
  Model m = assemble(sc);
  std::string text = write_lp(m.ir);
  LpModel lp = parse_lp(text);

  CHECK(lp.rows.size() == m.ir.rows.size());
  // The writer canonicalizes the objective, so compare against that form.
  LinExpr obj = m.ir.objective;
  obj.canonicalize();
  REQUIRE(lp.objective.size() == obj.terms.size());
  for (std::size_t i = 0; i < lp.objective.size(); ++i) {
    const auto& [name, coef] = lp.objective[i];
    CHECK(m.ir.var_id(name) == obj.terms[i].var);
    CHECK(coef == Catch::Approx(obj.terms[i].coef).margin(0));
  }
  // Every row reproduces its coefficients exactly.
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const LinRow& want = m.ir.rows[r];
    const LpRow& got = lp.rows[r];
    CHECK(got.name == want.name);
    CHECK(got.sense == want.sense);
    CHECK(got.rhs == want.rhs);
    REQUIRE(got.terms.size() == want.expr.terms.size());
    for (std::size_t k = 0; k < got.terms.size(); ++k) {
      CHECK(m.ir.var_id(got.terms[k].first) == want.expr.terms[k].var);
      CHECK(got.terms[k].second == want.expr.terms[k].coef);
    }
  }
  // Emission is deterministic.
  CHECK(write_lp(m.ir) == text);
}

TEST_CASE("reader accepts spelling variants") {
  LpModel lp = parse_lp(
      "Maximize\n obj: 2 x + 3 y\n"
      "Subject To\n r1: x + y <= 4\n r2: x - y >= -1\n"
      "Bounds\n -1 <= y <= 7\n x free\n"
      "Generals\n x\nEnd\n");
  CHECK(lp.maximize);
  REQUIRE(lp.rows.size() == 2);
  CHECK(lp.rows[1].rhs == -1);
  CHECK(lp.bounds.at("y").lb == -1);
  CHECK(lp.bounds.at("x").lb < -1e29);
}
