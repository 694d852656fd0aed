#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "expr_gen.hpp"
#include "oracles.hpp"
#include "rdtm/error.hpp"
#include "rdtm/parse.hpp"
#include "rdtm/pde.hpp"

namespace rdtm {
namespace {

constexpr double kPi = std::numbers::pi;

double cos_coefficient(const Expr& e) {
  const auto basis = as_basis_terms(e);
  if (!basis || basis->size() != 1 || basis->front().factor != BasisTerm::Factor::Cos ||
      basis->front().frequency != kPi / 2 || basis->front().power != 0) {
    ADD_FAILURE() << "not a multiple of cos(pi x / 2): " << to_string(e);
    return NAN;
  }
  return basis->front().coefficient;
}

double x_coefficient(const Expr& e) {
  const auto basis = as_basis_terms(e);
  if (!basis || basis->size() != 1 || basis->front().factor != BasisTerm::Factor::None ||
      basis->front().power != 1) {
    ADD_FAILURE() << "not a multiple of x: " << to_string(e);
    return NAN;
  }
  return basis->front().coefficient;
}

TEST(Builtin, Heat) {
  const auto heat = builtin_pde("heat");
  EXPECT_EQ(heat.pde.time_order, 1);
  ASSERT_EQ(heat.pde.rhs_terms.size(), 1u);
  EXPECT_EQ(heat.pde.rhs_terms[0].coefficient, 1.0);
  EXPECT_EQ(heat.pde.rhs_terms[0].derivative_orders, std::vector<int>{2});
  EXPECT_EQ(heat.initial, parse_expr("cos(pi/2*x)"));
  EXPECT_NEAR(evaluate(heat.exact, 0.5, 0.25), std::exp(-kPi * kPi / 16) * std::cos(kPi / 4), 1e-15);
}

TEST(Builtin, Burgers) {
  const auto burgers = builtin_pde("burgers");
  ASSERT_EQ(burgers.pde.rhs_terms.size(), 2u);
  EXPECT_EQ(burgers.pde.rhs_terms[0].coefficient, -1.0);
  EXPECT_EQ(burgers.pde.rhs_terms[0].derivative_orders, (std::vector<int>{0, 1}));
  EXPECT_EQ(burgers.pde.rhs_terms[1].coefficient, 1.0);
  EXPECT_EQ(burgers.pde.rhs_terms[1].derivative_orders, std::vector<int>{2});
  EXPECT_EQ(burgers.initial, Expr::x());
  EXPECT_NEAR(evaluate(burgers.exact, 0.5, 0.5), 1.0 / 3.0, 1e-15);
}

TEST(Builtin, UnknownName) { EXPECT_THROW(builtin_pde("wave"), DomainError); }

TEST(Convolve, BurgersSecondIndex) {
  const Spectra u{Expr::x(), Expr::scale(-1.0, Expr::x())};
  const Spectra v{Expr::constant(1.0), Expr::constant(-1.0)};
  EXPECT_EQ(convolve(u, v, 1), Expr::scale(-2.0, Expr::x()));
  EXPECT_EQ(convolve(u, v, 0), Expr::x());
}

TEST(Convolve, ZeroFactorAnnihilates) {
  const Spectra u{Expr::x(), parse_expr("cos(x)"), parse_expr("x^3")};
  const Spectra zeros(3);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_TRUE(convolve(u, zeros, k).is_zero());
}

TEST(Convolve, IndexOutOfRange) {
  const Spectra u{Expr::x()};
  EXPECT_THROW(convolve(u, u, 1), DomainError);
}

TEST(Convolve, Symmetric) {
  testing::ExprGenerator gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    Spectra u, v;
    for (int j = 0; j < 5; ++j) {
      u.push_back(gen(2));
      v.push_back(gen(2));
    }
    for (std::size_t k = 0; k < 5; ++k) {
      const Expr uv = convolve(u, v, k);
      const Expr vu = convolve(v, u, k);
      for (double x : oracle::sample_xs(11)) {
        const double a = evaluate(uv, x);
        EXPECT_LE(std::abs(a - evaluate(vu, x)), 1e-12 * (1.0 + std::abs(a)));
      }
    }
  }
}

TEST(MultiConvolve, Cases) {
  const Spectra u{Expr::x(), Expr::constant(2.0)};
  const Spectra v{Expr::constant(3.0), Expr::x()};
  EXPECT_EQ(multi_convolve(std::vector<Spectra>{u}, 1), Expr::constant(2.0));
  EXPECT_EQ(multi_convolve(std::vector<Spectra>{u, v}, 1), convolve(u, v, 1));
  EXPECT_EQ(multi_convolve(std::vector<Spectra>{Spectra{Expr::x()}, Spectra{Expr::x()}, Spectra{Expr::x()}}, 0),
            Expr::power(Expr::x(), 3));
  EXPECT_THROW(multi_convolve(std::vector<Spectra>{}, 0), DomainError);
}

TEST(MultiConvolve, ThreeFactorsMatchDirectCauchyProduct) {
  // Polynomials in t with constant spectra: compare against direct coefficient products.
  const std::vector<double> a{1.0, 2.0, -1.0}, b{0.5, 0.0, 3.0}, c{-2.0, 1.0, 1.0};
  auto to_spectra = [](const std::vector<double>& v) {
    Spectra s;
    for (double d : v) s.push_back(Expr::constant(d));
    return s;
  };
  for (std::size_t k = 0; k < 3; ++k) {
    double expected = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = 0; i + j <= k; ++j) expected += a[i] * b[j] * c[k - i - j];
    }
    const Expr got = multi_convolve(std::vector<Spectra>{to_spectra(a), to_spectra(b), to_spectra(c)}, k);
    EXPECT_DOUBLE_EQ(evaluate(got, 0.0), expected);
  }
}

TEST(Transforms, Forcing) {
  const Expr g = parse_expr("x^2");
  EXPECT_EQ(transform_forcing(g, 3, 3), g);
  EXPECT_TRUE(transform_forcing(g, 3, 2).is_zero());
  EXPECT_EQ(transform_forcing(Expr::constant(1.0), 0, 0), Expr::constant(1.0));
  EXPECT_THROW(transform_forcing(Expr::t(), 0, 0), DomainError);
}

TEST(Transforms, Shifted) {
  const Spectra u{parse_expr("cos(x)"), parse_expr("sin(x)"), parse_expr("exp(x)")};
  EXPECT_EQ(transform_shifted(1, 1, u, 2), expr_mul(Expr::x(), u[1]));
  EXPECT_TRUE(transform_shifted(1, 3, u, 2).is_zero());
  EXPECT_EQ(transform_shifted(0, 0, u, 2), u[2]);
  EXPECT_THROW(transform_shifted(0, 0, u, 3), DomainError);
}

TEST(Transforms, TimeShiftFactor) {
  EXPECT_EQ(time_shift_factor(0, 1), 1.0);
  EXPECT_EQ(time_shift_factor(2, 1), 3.0);
  EXPECT_EQ(time_shift_factor(1, 2), 6.0);
  EXPECT_EQ(time_shift_factor(4, 3), 210.0);
  EXPECT_THROW(time_shift_factor(1u << 30, 3), NumericError);
  EXPECT_THROW(time_shift_factor(1, 0), DomainError);
}

TEST(Advance, HeatFirstSpectra) {
  const auto heat = builtin_pde("heat");
  const Expr u1 = rdtm::advance(heat.pde, Spectra{heat.initial});
  EXPECT_NEAR(cos_coefficient(u1), -2.467401101, 1e-8);
  const Expr u2 = rdtm::advance(heat.pde, Spectra{heat.initial, u1});
  EXPECT_NEAR(cos_coefficient(u2), 3.044034097, 1e-8);
}

TEST(Advance, HeatSpectraMatchExactTaylorCoefficients) {
  const auto heat = builtin_pde("heat");
  SpectrumBuilder builder(heat.pde, {heat.initial});
  for (int k = 0; k <= 8; ++k) {
    const double expected = oracle::heat_taylor_coefficient(k);
    EXPECT_LE(std::abs(cos_coefficient(builder.spectrum(k)) - expected), 1e-12 * std::abs(expected)) << k;
  }
}

TEST(Advance, BurgersSpectraAlternate) {
  const auto burgers = builtin_pde("burgers");
  EXPECT_EQ(rdtm::advance(burgers.pde, Spectra{Expr::x()}), Expr::scale(-1.0, Expr::x()));
  SpectrumBuilder builder(burgers.pde, {burgers.initial});
  for (int k = 0; k <= 8; ++k) {
    EXPECT_NEAR(x_coefficient(builder.spectrum(k)), k % 2 == 0 ? 1.0 : -1.0, 1e-12) << k;
  }
}

TEST(Advance, LinearInSpectraForHeat) {
  const auto heat = builtin_pde("heat");
  testing::ExprGenerator gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Expr u0 = gen(3);
    const double alpha = 0.5 + trial * 0.1;
    const Expr a = rdtm::advance(heat.pde, Spectra{expr_scale(alpha, u0)});
    const Expr b = expr_scale(alpha, rdtm::advance(heat.pde, Spectra{u0}));
    for (double x : oracle::sample_xs(11)) {
      const double va = evaluate(a, x);
      EXPECT_LE(std::abs(va - evaluate(b, x)), 1e-12 * (1.0 + std::abs(va))) << to_string(u0);
    }
  }
}

TEST(Advance, ForcingAndShiftedTerms) {
  // u_t = 2 x t + x^2 t u  with u(x,0) = 1: U_1 = 0, U_2 = x + x^2/2.
  PdeSpec pde{1, {PdeTerm::source(2.0, Expr::x(), 1), PdeTerm::product(1.0, {0}, 2, 1)}};
  SpectrumBuilder builder(pde, {Expr::constant(1.0)});
  EXPECT_TRUE(builder.spectrum(1).is_zero());
  const Expr u2 = builder.spectrum(2);
  EXPECT_DOUBLE_EQ(evaluate(u2, 2.0), 2.0 + 2.0);
}

TEST(Advance, SecondOrderInTime) {
  // u_tt = u_xx with u = cos(x) cos(t): U_{2j} = (-1)^j / (2j)! cos(x).
  PdeSpec pde{2, {PdeTerm::product(1.0, {2})}};
  SpectrumBuilder builder(pde, {parse_expr("cos(x)"), Expr()});
  double factorial = 1.0;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) factorial *= k;
    const double expected = k % 2 == 1 ? 0.0 : (k % 4 == 0 ? 1.0 : -1.0) / factorial;
    EXPECT_NEAR(evaluate(builder.spectrum(k), 0.0), expected, 1e-15) << k;
  }
  EXPECT_THROW(SpectrumBuilder(pde, {Expr::x()}), DomainError);
}

TEST(Advance, NodeCapIsEnforced) {
  const auto burgers = builtin_pde("burgers");
  SpectrumBuilder builder(burgers.pde, {parse_expr("cos(x^2)")}, 200);
  EXPECT_THROW(builder.spectrum(6), NodeCapError);
}

TEST(TermDsl, ParsesBurgers) {
  const PdeSpec spec = parse_terms("-1 * u * dx(u) + 1 * dx(u,2)");
  const auto builtin = builtin_pde("burgers").pde;
  ASSERT_EQ(spec.rhs_terms.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(spec.rhs_terms[i].coefficient, builtin.rhs_terms[i].coefficient);
    EXPECT_EQ(spec.rhs_terms[i].derivative_orders, builtin.rhs_terms[i].derivative_orders);
  }
}

TEST(TermDsl, ForcingAndPowers) {
  const PdeSpec spec = parse_terms("dx(u,2) - 0.5 * x^2 * t * u + 3 * sin(pi*x) * t^2 + 1e-3");
  ASSERT_EQ(spec.rhs_terms.size(), 4u);
  EXPECT_EQ(spec.rhs_terms[1].coefficient, -0.5);
  EXPECT_EQ(spec.rhs_terms[1].x_power, 2);
  EXPECT_EQ(spec.rhs_terms[1].t_power, 1);
  ASSERT_TRUE(spec.rhs_terms[2].is_forcing());
  EXPECT_EQ(spec.rhs_terms[2].t_power, 2);
  EXPECT_NEAR(evaluate(*spec.rhs_terms[2].forcing, 0.5), 1.0, 1e-15);
  EXPECT_EQ(spec.rhs_terms[3].coefficient, 1e-3);

  const PdeSpec again = parse_terms(to_string(spec));
  EXPECT_EQ(to_string(again), to_string(spec));
}

TEST(TermDsl, Errors) {
  EXPECT_THROW(parse_terms(""), ParseError);
  EXPECT_THROW(parse_terms("u +"), ParseError);
  EXPECT_THROW(parse_terms("dx(v)"), ParseError);
  EXPECT_THROW(parse_terms("dx(u,-1)"), ParseError);
  EXPECT_THROW(parse_terms("sin(x) * u"), ParseError);
  EXPECT_THROW(parse_terms("exp(t) * u"), ParseError);
  EXPECT_THROW(parse_terms("(u"), ParseError);
}

}  // namespace
}  // namespace rdtm
