#include <gtest/gtest.h>

#include "support.hpp"

using namespace simpchern;
using namespace testsupport;

namespace {

NumericConfig quick(int samples = 8)
{
	NumericConfig cfg;
	cfg.samples = samples;
	return cfg;
}

FormExpr tr(Context c, Word w, Rational k = 1) { return FormExpr::trace(c, std::move(w), k); }

} // namespace

TEST(Faces, MiddleFaceMultipliesAdjacentFactors)
{
	Context one{Family::NG, 1, 0}, two{Family::NG, 2, 0};
	auto f = face_pullback(1, tr(one, {Letter::dh(1), Letter::hinv(1)}));
	auto expect = tr(two, {Letter::dh(1), Letter::hinv(1)}) +
	              tr(two, {Letter::h(1), Letter::dh(2), Letter::hinv(2), Letter::hinv(1)});
	EXPECT_EQ(f, expect);
	EXPECT_TRUE(equal_numeric(f, expect, quick()).pass);
}

TEST(Faces, OuterFacesShiftOrKeep)
{
	Context one{Family::NG, 1, 0}, two{Family::NG, 2, 0};
	auto a = tr(one, {Letter::dh(1), Letter::hinv(1)});
	EXPECT_EQ(face_pullback(0, a), tr(two, {Letter::dh(2), Letter::hinv(2)}));
	EXPECT_EQ(face_pullback(2, a), tr(two, {Letter::dh(1), Letter::hinv(1)}));
}

TEST(Faces, PullbackMatchesPointMap)
{
	// evaluate(ε_i^* a, pt) = evaluate(a, ε_i(pt))
	std::mt19937_64 rng(21);
	auto cfg = quick();
	for (int k = 0; k < 30; ++k)
	{
		int q = 1 + k % 3;
		auto a = random_nonzero_form(rng, Context{Family::NG, q, 0}, 1 + k % 3, 2);
		int i = k % (q + 2);
		auto f = face_pullback(i, a);
		auto pt = sample_point(f.context(), *a.degree(), cfg, static_cast<std::uint64_t>(k), 3);
		EXPECT_LT(relative_residual(evaluate(f, pt), evaluate(a, apply_face(i, pt))), 1e-10);
	}
}

TEST(Faces, SimplicialIdentityOnRandomForms)
{
	// ε_j^* ε_i^* = ε_i^* ε_{j-1}^* for i < j
	std::mt19937_64 rng(22);
	int checked = 0;
	for (int k = 0; k < 100; ++k)
	{
		for (Family fam : {Family::NG, Family::NbarG})
		{
			int q = fam == Family::NG ? 1 + k % 3 : k % 3;
			auto a = random_form(rng, Context{fam, q, k % 2}, k % 3, 2);
			int top = q + 2;
			for (int j = 1; j <= top; ++j)
				for (int i = 0; i < j; ++i)
				{
					auto lhs = face_pullback(j, face_pullback(i, a));
					auto rhs = face_pullback(i, face_pullback(j - 1, a));
					EXPECT_EQ(lhs, rhs) << "i=" << i << " j=" << j << " " << to_sexpr(a);
					++checked;
				}
		}
	}
	EXPECT_GT(checked, 1000);
}

TEST(Faces, IndexOutOfRangeThrows)
{
	EXPECT_THROW(face_rule(Family::NG, 2, 3), std::out_of_range);
	EXPECT_THROW(face_rule(Family::NG, 0, 0), std::out_of_range);
	EXPECT_THROW(gamma_pullback(tr(Context{Family::NbarG, 1, 0}, {Letter::dg(0)})), ContextMismatch);
}

TEST(Differentials, DPrimeOfAFunctionUnrolls)
{
	Context one{Family::NG, 1, 0}, two{Family::NG, 2, 0};
	auto f = tr(one, {Letter::h(1)});
	auto expect = tr(two, {Letter::h(2)}) - tr(two, {Letter::h(1), Letter::h(2)}) + tr(two, {Letter::h(1)});
	EXPECT_EQ(d_prime(f), expect);
}

TEST(Differentials, SquaresAndAnticommutatorVanish)
{
	std::mt19937_64 rng(23);
	for (int k = 0; k < 100; ++k)
	{
		Family fam = k % 2 ? Family::NG : Family::NbarG;
		int q = fam == Family::NG ? 1 + k % 3 : k % 3;
		auto a = random_form(rng, Context{fam, q, 0}, k % 3, 2);
		EXPECT_TRUE(d_prime(d_prime(a)).is_zero());
		EXPECT_TRUE(d_second(d_second(a)).is_zero());
		EXPECT_TRUE((d_prime(d_second(a)) + d_second(d_prime(a))).is_zero()) << to_sexpr(a);
	}
}

TEST(Differentials, DSecondCarriesLevelSign)
{
	Context one{Family::NG, 1, 0};
	auto f = tr(one, {Letter::h(1)});
	EXPECT_EQ(d_second(f), -exterior_derivative(f));
	Context zero{Family::NbarG, 0, 0};
	auto g = tr(zero, {Letter::g(0)});
	EXPECT_EQ(d_second(g), exterior_derivative(g));
}

TEST(Differentials, TotalDifferentialSquaresToZero)
{
	std::mt19937_64 rng(24);
	for (int k = 0; k < 20; ++k)
	{
		int total = 2 + k % 3;
		CochainSet c(Family::NG, total);
		for (int lvl = 1; lvl <= std::min(total, 3); ++lvl)
			c.set(lvl, random_form(rng, Context{Family::NG, lvl, 0}, total - lvl, 2));
		EXPECT_TRUE(total_differential(total_differential(c)).is_zero());
	}
}

TEST(Differentials, ZeroFormComponentHasBothParts)
{
	CochainSet c(Family::NG, 1);
	c.set(1, tr(Context{Family::NG, 1, 0}, {Letter::h(1)}));
	auto d = total_differential(c);
	EXPECT_FALSE(d.at(1).is_zero());
	EXPECT_FALSE(d.at(2).is_zero());
}

TEST(Differentials, ChernCharacterTwoIsACocycle)
{
	auto c = bss_cocycle(2);
	EXPECT_TRUE((d_prime(c.at(1)) + d_second(c.at(2))).is_zero());
	EXPECT_TRUE(total_differential(c).is_zero());
}

TEST(Cochain, ComponentValidation)
{
	CochainSet c(Family::NG, 4);
	EXPECT_THROW(c.set(1, tr(Context{Family::NG, 2, 0}, {Letter::dh(1)})), ContextMismatch);
	EXPECT_THROW(c.set(2, tr(Context{Family::NG, 2, 0}, {Letter::dh(1)})), std::invalid_argument);
	EXPECT_TRUE(c.at(3).is_zero());
}

TEST(Gamma, TwoFactorTrace)
{
	Context two{Family::NG, 2, 0}, bar{Family::NbarG, 2, 0};
	auto g = gamma_pullback(tr(two, concat(phi(1), phi(2))));
	auto d0 = MatrixForm::word(bar, maurer_cartan(0)) - MatrixForm::word(bar, maurer_cartan(1));
	auto d1 = MatrixForm::word(bar, maurer_cartan(1)) - MatrixForm::word(bar, maurer_cartan(2));
	EXPECT_EQ(g, (d0 * d1).trace());
}

TEST(Gamma, ConstantsArePreserved)
{
	auto c = FormExpr::constant(Context{Family::NG, 2, 0}, Rational(5, 3), 1);
	EXPECT_EQ(gamma_pullback(c), FormExpr::constant(Context{Family::NbarG, 2, 0}, Rational(5, 3), 1));
}

TEST(Gamma, IsAChainMap)
{
	std::mt19937_64 rng(25);
	for (int k = 0; k < 60; ++k)
	{
		int q = 1 + k % 3;
		auto a = random_form(rng, Context{Family::NG, q, 0}, k % 3, 2);
		EXPECT_EQ(gamma_pullback(d_second(a)), d_second(gamma_pullback(a)));
		EXPECT_EQ(gamma_pullback(d_prime(a)), d_prime(gamma_pullback(a))) << to_sexpr(a);
	}
}

TEST(Gamma, ChernTwoLevelTwoMatchesBarConstruction)
{
	auto r = equal_numeric(gamma_pullback(bss_component(2, 0)), bss_bar_component(2, 0), quick(20));
	EXPECT_TRUE(r.pass) << r.maxResidual;
}
