#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "vsi/curvature.hpp"

using namespace vsi;

namespace {

bool same(const Tensor& a, const Tensor& b) { return (a - b).is_zero(); }

}  // namespace

TEST_CASE("flat metric has vanishing connection and curvature", "[curvature]") {
  FamilyInstance inst = make_builtin("flat4", {});
  CurvatureStack stack = build_stack(inst.metric, 2);
  CHECK(stack.conn.gamma.is_zero());
  for (const Tensor& t : stack.nabla_riem) CHECK(t.is_zero());
  CHECK(stack.ricci.is_zero());
  CHECK(stack.scalar.is_zero());
  CHECK(stack.traceless_ricci.is_zero());
  REQUIRE(stack.weyl.has_value());
  CHECK(stack.weyl->is_zero());
}

TEST_CASE("connection is torsion-free and metric-compatible", "[curvature]") {
  for (const char* name : {"vsi3", "kundt-null"}) {
    FamilyInstance inst = make_builtin(name, {});
    Connection conn = christoffel(inst.metric);
    CHECK(audit_pair_symmetry(conn.gamma, 1, 2, +1));
    CHECK(covariant_derivative(inst.metric.g, conn).is_zero());
  }
}

TEST_CASE("Riemann tensor satisfies its algebraic and differential identities",
          "[curvature]") {
  FamilyInstance inst = make_builtin("walker-general", {{"A", "2*v^2+3*V^2+5*v*V"},
                                                        {"B", "29*v^2+31*V^2+37*v*V"},
                                                        {"C", "67*v^2"}});
  CurvatureStack stack = build_stack(inst.metric, 1);
  const Tensor& r = stack.nabla_riem[0];
  const int dim = stack.metric.dim;
  REQUIRE(r.rank() == 4);
  CHECK(audit_pair_symmetry(r, 0, 1, -1));
  CHECK(audit_pair_symmetry(r, 2, 3, -1));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          CHECK(r.at({a, b, c, d}) == r.at({c, d, a, b}));
          RationalFunction cyc =
              r.at({a, b, c, d}) + r.at({a, c, d, b}) + r.at({a, d, b, c});
          CHECK(cyc.is_zero());
        }
  const Tensor& dr = stack.nabla_riem[1];
  REQUIRE(dr.rank() == 5);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d)
          for (int e = 0; e < dim; ++e) {
            RationalFunction cyc = dr.at({a, b, c, d, e}) + dr.at({a, b, d, e, c}) +
                                   dr.at({a, b, e, c, d});
            CHECK(cyc.is_zero());
          }
}

TEST_CASE("Ricci data is consistent with the Riemann tensor", "[curvature]") {
  FamilyInstance inst = make_builtin("vsi1not2", {});
  CurvatureStack stack = build_stack(inst.metric, 0);
  const Metric& g = stack.metric;

  Tensor ricci_again = contract(raise_slot(stack.nabla_riem[0], 0, g), 0, 2);
  CHECK(same(ricci_again, stack.ricci));
  CHECK(audit_pair_symmetry(stack.ricci, 0, 1, +1));

  RationalFunction scalar_again =
      contract(raise_slot(stack.ricci, 0, g), 0, 1).comp[0];
  CHECK(scalar_again == stack.scalar);

  Tensor s = stack.ricci - g.g.scaled(stack.scalar.scaled(Rational(1, g.dim)));
  CHECK(same(s, stack.traceless_ricci));
  CHECK(contract(raise_slot(stack.traceless_ricci, 0, g), 0, 1).comp[0].is_zero());
}

TEST_CASE("Weyl tensor is fully traceless and splits into dual halves",
          "[curvature]") {
  FamilyInstance inst = make_builtin("vsi3", {});
  CurvatureStack stack = build_stack(inst.metric, 0);
  REQUIRE(stack.weyl.has_value());
  Tensor traced = contract(raise_slot(*stack.weyl, 0, stack.metric), 0, 2);
  CHECK(traced.is_zero());

  auto [plus, minus] = weyl_split(stack);
  CHECK(same(plus + minus, *stack.weyl));
  for (const Tensor* part : {&plus, &minus}) {
    CHECK(audit_pair_symmetry(*part, 0, 1, -1));
    CHECK(audit_pair_symmetry(*part, 2, 3, -1));
  }
}

TEST_CASE("six-dimensional stacks have a Weyl tensor but no dual split",
          "[curvature]") {
  FamilyInstance inst = make_builtin("sixd", {});
  CurvatureStack stack = build_stack(inst.metric, 0);
  REQUIRE(stack.weyl.has_value());
  CHECK_FALSE(stack.weyl_plus.has_value());
  CHECK_THROWS_AS(weyl_split(stack), ValidationError);
}

TEST_CASE("self-norm invariants vanish through order 3 and freeze at order 4",
          "[curvature]") {
  FamilyInstance inst = make_builtin("vsi3", {});
  CurvatureStack stack = build_stack(inst.metric, 4);
  for (int j = 0; j <= 3; ++j) CHECK(self_norm_invariant(stack, j).is_zero());

  RationalFunction i4 = self_norm_invariant(stack, 4);
  CHECK(i4 == parse_expression(stack.metric.ctx, "331776*a^2"));
  CHECK(to_expression_string(i4) == "331776*a^2");

  for (const NamedInvariant& w : operator_invariants(stack, 4))
    CHECK(w.value.is_zero());
  CHECK_THROWS_AS(self_norm_invariant(stack, 5), ValidationError);
}

TEST_CASE("witness invariants are named deterministically", "[curvature]") {
  FamilyInstance inst = make_builtin("vsi1not2", {});
  CurvatureStack stack = build_stack(inst.metric, 2);
  std::vector<NamedInvariant> ws = witness_invariants(stack, 2);
  std::vector<std::string> names;
  for (const auto& w : ws) names.push_back(w.name);
  std::vector<std::string> expected{
      "self_norm_0",    "tr(Ricci^1)",    "tr(Ricci^2)",    "tr(Ricci^3)",
      "tr(Ricci^4)",    "tr(Bivector^1)", "tr(Bivector^2)", "tr(Bivector^3)",
      "tr(Bivector^4)", "self_norm_1",    "self_norm_2"};
  CHECK(names == expected);
  CHECK(to_expression_string(ws.back().value) == "256*a^2 - 384*a*b + 576*b^2");
}

TEST_CASE("component cap aborts oversized builds with a resource error",
          "[curvature]") {
  FamilyInstance inst = make_builtin("vsi3", {});
  CHECK_THROWS_AS(build_stack(inst.metric, 4, 10), ResourceLimitError);
  CurvatureStack stack = build_stack(inst.metric, 1);
  CHECK(stack.components_built > 0);
  CHECK(stack.order == 1);
  REQUIRE(stack.nabla_riem.size() == 2);
  CHECK(stack.nabla_riem[1].rank() == 5);
}
