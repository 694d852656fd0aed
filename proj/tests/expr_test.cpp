#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "expr_gen.hpp"
#include "oracles.hpp"
#include "rdtm/error.hpp"
#include "rdtm/expr.hpp"
#include "rdtm/parse.hpp"

namespace rdtm {
namespace {

constexpr double kPi = std::numbers::pi;

// Walks a simplified tree and checks the structural normal-form invariants.
void expect_normalized(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Sum:
    case NodeKind::Product: EXPECT_GE(e.children().size(), 2u) << to_string(e); break;
    case NodeKind::Scale:
      EXPECT_NE(e.value(), 1.0) << to_string(e);
      EXPECT_NE(e.child().kind(), NodeKind::Scale) << to_string(e);
      break;
    default: break;
  }
  for (const auto& c : e.children()) expect_normalized(c);
}

TEST(Parse, CosineInitialCondition) {
  const Expr e = parse_expr("cos(pi/2*x)");
  EXPECT_EQ(e, Expr::cos(Expr::scale(kPi / 2, Expr::x())));
}

TEST(Parse, BareVariable) { EXPECT_EQ(parse_expr("x"), Expr::x()); }

TEST(Parse, GrammarBoundaries) {
  EXPECT_NO_THROW(parse_expr("x^2 + 3"));
  EXPECT_THROW(parse_expr("x^-1"), ParseError);
  EXPECT_THROW(parse_expr("x^2.5"), ParseError);
  EXPECT_THROW(parse_expr("x/x"), ParseError);
  EXPECT_THROW(parse_expr("x/(2-2)"), ParseError);
  EXPECT_THROW(parse_expr("cos(x"), ParseError);
  EXPECT_THROW(parse_expr("tan(x)"), ParseError);
  EXPECT_THROW(parse_expr(""), ParseError);
  EXPECT_THROW(parse_expr("2x"), ParseError);
}

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse_expr("x + $");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  try {
    parse_expr("x^-1");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Parse, ConstantDivisionAndExponentNotation) {
  EXPECT_DOUBLE_EQ(evaluate(parse_expr("x/4"), 2.0), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(parse_expr("1.5e-3*x"), 2.0), 3e-3);
  EXPECT_DOUBLE_EQ(evaluate(parse_expr("-x^2"), 3.0), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expr("2^3 - 8 + x"), 1.0), 1.0);
}

TEST(Parse, TimeOnlyDivisorForExactSolutions) {
  const Expr e = parse_expr("x/(1+t)");
  EXPECT_NEAR(evaluate(e, 0.5, 0.5), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(parse_expr("t/(1+x)"), ParseError);
}

TEST(Evaluate, Examples) {
  EXPECT_NEAR(evaluate(parse_expr("cos(pi/2*x)"), 1.0), 0.0, 1e-16);
  const double expected = std::exp(-kPi * kPi / 4 * 0.2);
  EXPECT_NEAR(evaluate(parse_expr("exp(-pi^2/4*t)*cos(pi/2*x)"), 0.0, 0.2), expected, 1e-15);
  EXPECT_NEAR(expected, 0.610499, 1e-6);
}

TEST(Evaluate, OverflowIsAnError) {
  EXPECT_THROW(evaluate(parse_expr("exp(1000*x)"), 1.0), NumericError);
  EXPECT_THROW(evaluate(Expr::power(Expr::x(), 400), 1e3), NumericError);
  EXPECT_THROW(evaluate(parse_expr("x/(1-t)"), 1.0, 1.0), NumericError);
}

TEST(Differentiate, CosineChainRule) {
  const Expr f = parse_expr("cos(pi/2*x)");
  const Expr d = differentiate_x(f);
  EXPECT_EQ(d, Expr::scale(-kPi / 2, Expr::sin(Expr::scale(kPi / 2, Expr::x()))));
}

TEST(Differentiate, SecondDerivativeOfCosine) {
  const Expr d2 = differentiate_x(differentiate_x(parse_expr("cos(pi/2*x)")));
  const auto basis = as_basis_terms(d2);
  ASSERT_TRUE(basis.has_value());
  ASSERT_EQ(basis->size(), 1u);
  EXPECT_EQ(basis->front().factor, BasisTerm::Factor::Cos);
  EXPECT_DOUBLE_EQ(basis->front().frequency, kPi / 2);
  EXPECT_NEAR(basis->front().coefficient, -kPi * kPi / 4, 1e-15);
  EXPECT_NEAR(std::abs(basis->front().coefficient), 2.467401101, 1e-9);
}

TEST(Differentiate, Identity) {
  EXPECT_EQ(differentiate_x(Expr::x()), Expr::constant(1.0));
  EXPECT_TRUE(differentiate_x(Expr::t()).is_zero());
  EXPECT_TRUE(differentiate_x(parse_expr("3*t^2")).is_zero());
}

TEST(Differentiate, MatchesFiniteDifferences) {
  auto check = [](const Expr& e) {
    const Expr d = differentiate_x(e);
    for (double x : oracle::sample_xs()) {
      const double exact = evaluate(d, x);
      const double fd = oracle::central_difference([&](double s) { return evaluate(e, s); }, x);
      EXPECT_LE(std::abs(exact - fd), 1e-5 * (1.0 + std::abs(exact))) << to_string(e) << " at x=" << x;
    }
  };
  for (const auto& e : testing::curated_expressions()) check(e);
  testing::ExprGenerator gen(1234);
  for (int i = 0; i < 200; ++i) check(gen(3));
}

TEST(Simplify, MergesScales) {
  EXPECT_EQ(simplify(Expr::scale(2.0, Expr::scale(3.0, Expr::x()))), Expr::scale(6.0, Expr::x()));
}

TEST(Simplify, MergesMonomials) {
  EXPECT_EQ(simplify(Expr::product({Expr::x(), Expr::x()})), Expr::power(Expr::x(), 2));
}

TEST(Simplify, RawSecondDerivativeCollapsesToOneTerm) {
  // Hand-built, unsimplified product-rule tree for d2/dx2 cos(pi x / 2).
  const Expr arg = Expr::scale(kPi / 2, Expr::x());
  const Expr raw = Expr::scale(
      -1.0, Expr::product({Expr::product({Expr::cos(arg), Expr::scale(kPi / 2, Expr::constant(1.0))}),
                           Expr::scale(kPi / 2, Expr::constant(1.0))}));
  const Expr s = simplify(raw);
  EXPECT_EQ(s, Expr::scale(-kPi * kPi / 4, Expr::cos(arg)));
  EXPECT_LE(node_count(s), node_count(raw));
}

TEST(Simplify, TrigFactorsStayInBasis) {
  const Expr e = parse_expr("3*x^2*cos(2*x+1) - x*x*cos(2*x+1)*3 + sin(-x)");
  const auto basis = as_basis_terms(e);
  ASSERT_TRUE(basis.has_value());
  ASSERT_EQ(basis->size(), 1u);
  EXPECT_EQ(basis->front().factor, BasisTerm::Factor::Sin);
  EXPECT_EQ(basis->front().coefficient, -1.0);
  EXPECT_EQ(basis->front().frequency, 1.0);
}

TEST(Simplify, ExponentialsCombine) {
  const auto basis = as_basis_terms(parse_expr("exp(2*x)*exp(-x+1)"));
  ASSERT_TRUE(basis.has_value());
  ASSERT_EQ(basis->size(), 1u);
  EXPECT_EQ(basis->front().factor, BasisTerm::Factor::Exp);
  EXPECT_DOUBLE_EQ(basis->front().frequency, 1.0);
  EXPECT_DOUBLE_EQ(basis->front().coefficient, std::exp(1.0));
}

TEST(Simplify, NonBasisTreesAreFoldedNotExpanded) {
  const Expr e = simplify(parse_expr("2*cos(x^2)*3 + cos(x^2) - 7*cos(x^2)"));
  EXPECT_TRUE(e.is_zero()) << to_string(e);
  EXPECT_FALSE(as_basis_terms(parse_expr("cos(x^2)")).has_value());
  EXPECT_FALSE(as_basis_terms(parse_expr("cos(x)*sin(x)")).has_value());
}

TEST(Simplify, SoundOnRandomTrees) {
  testing::ExprGenerator gen(99, /*allow_t=*/true);
  for (int i = 0; i < 300; ++i) {
    const Expr e = gen(4);
    const Expr s = simplify(e);
    expect_normalized(s);
    EXPECT_EQ(simplify(s), s) << to_string(e);
    for (double x : oracle::sample_xs()) {
      const double v = evaluate(e, x, 0.3);
      EXPECT_LE(std::abs(evaluate(s, x, 0.3) - v), 1e-12 * (1.0 + std::abs(v))) << to_string(e);
    }
  }
}

TEST(Algebra, Examples) {
  EXPECT_TRUE(expr_scale(0.0, parse_expr("cos(x^2)+x")).is_zero());
  EXPECT_TRUE(expr_add(Expr::x(), Expr::scale(-1.0, Expr::x())).is_zero());
  EXPECT_EQ(expr_mul(Expr::x(), Expr::constant(1.0)), Expr::x());
}

TEST(Algebra, LawsHoldAtSamplePoints) {
  testing::ExprGenerator gen(7);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); };
  for (int i = 0; i < 150; ++i) {
    const Expr a = gen(2);
    const Expr b = gen(2);
    const Expr c = gen(2);
    const Expr ab = expr_add(a, b);
    const Expr ba = expr_add(b, a);
    const Expr mab = expr_mul(a, b);
    const Expr mba = expr_mul(b, a);
    const Expr left = expr_mul(a, expr_add(b, c));
    const Expr right = expr_add(expr_mul(a, b), expr_mul(a, c));
    for (double x : oracle::sample_xs(11)) {
      EXPECT_TRUE(close(evaluate(ab, x), evaluate(ba, x)));
      EXPECT_TRUE(close(evaluate(mab, x), evaluate(mba, x)));
      EXPECT_TRUE(close(evaluate(left, x), evaluate(right, x))) << to_string(a) << " | " << to_string(b);
    }
  }
}

TEST(Print, RoundTripsThroughParser) {
  testing::ExprGenerator gen(2024, /*allow_t=*/true);
  for (int i = 0; i < 300; ++i) {
    const Expr e = i % 2 == 0 ? gen(4) : simplify(gen(4));
    const std::string once = to_string(parse_expr(to_string(e)));
    EXPECT_EQ(to_string(parse_expr(once)), once);
    const Expr back = parse_expr(to_string(e));
    for (double x : oracle::sample_xs(7)) {
      const double v = evaluate(e, x, 0.4);
      EXPECT_LE(std::abs(evaluate(back, x, 0.4) - v), 1e-12 * (1.0 + std::abs(v))) << to_string(e);
    }
  }
}

TEST(Print, CoefficientsKeepFullPrecision) {
  const std::string text = to_string(Expr::scale(kPi / 2, Expr::x()));
  EXPECT_EQ(text, "1.5707963267948966*x");
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(parse_expr(to_string(Expr::constant(1.0 / 3.0))).value(), 1.0 / 3.0);
}

TEST(Structure, Reciprocal) {
  EXPECT_THROW(Expr::reciprocal(Expr::x()), DomainError);
  const Expr e = parse_expr("x/(1+t)");
  EXPECT_TRUE(contains_t(e));
  EXPECT_FALSE(as_basis_terms(e).has_value());
  EXPECT_NEAR(evaluate(differentiate_x(e), 0.3, 1.0), 0.5, 1e-15);
}

}  // namespace
}  // namespace rdtm
