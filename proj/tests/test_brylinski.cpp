#include <gtest/gtest.h>

#include "support.hpp"

using namespace simpchern;
using namespace testsupport;

namespace {

constexpr int N = 3;

double mat_residual(Matrix const &a, Matrix const &b)
{
	return (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
}

double tuple_residual(std::vector<Matrix> const &a, std::vector<Matrix> const &b)
{
	EXPECT_EQ(a.size(), b.size());
	double r = 0;
	for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
		r = std::max(r, mat_residual(a[k], b[k]));
	return r;
}

std::vector<Matrix> near_identity(std::mt19937_64 &rng, int count, double radius = 0.1)
{
	return sample_local_point(count, 0, N, radius, rng(), 0).h;
}

std::vector<double> random_bary(std::mt19937_64 &rng, int dim)
{
	std::exponential_distribution<double> e(1.0);
	std::vector<double> t(static_cast<std::size_t>(dim) + 1);
	double s = 0;
	for (auto &x : t)
		s += (x = e(rng));
	for (auto &x : t)
		x /= s;
	return t;
}

} // namespace

TEST(Sigma, BaseCases)
{
	std::mt19937_64 rng(1);
	auto h = near_identity(rng, 1);
	EXPECT_LT(mat_residual(sigma(std::vector<double>{1.0}, std::span<Matrix const>{}, N), Matrix::Identity(N, N)), 1e-15);
	EXPECT_LT(mat_residual(sigma(std::vector<double>{0.0, 1.0}, h, N), h[0]), 1e-15);
	EXPECT_LT(mat_residual(sigma(std::vector<double>{1.0, 0.0}, h, N), Matrix::Identity(N, N)), 1e-15);
}

TEST(Sigma, OneSimplexIsAPowerPath)
{
	std::mt19937_64 rng(2);
	auto h = near_identity(rng, 1);
	// σ_1(1-s, s; h)² = σ_1(1-2s, 2s; h) along the one-parameter subgroup
	for (double s : {0.1, 0.2, 0.35})
	{
		Matrix a = sigma(std::vector<double>{1 - s, s}, h, N);
		Matrix b = sigma(std::vector<double>{1 - 2 * s, 2 * s}, h, N);
		EXPECT_LT(mat_residual(a * a, b), 1e-12);
	}
}

TEST(Sigma, FaceProperty)
{
	std::mt19937_64 rng(3);
	double worst = 0;
	for (int draw = 0; draw < 100; ++draw)
		for (int l = 1; l <= 3; ++l)
		{
			auto h = near_identity(rng, l);
			auto u = random_bary(rng, l - 1);
			std::span<Matrix const> hs(h);
			for (int j = 0; j <= l; ++j)
			{
				Matrix lhs = sigma(coface(j, u), hs, N);
				Matrix rhs;
				if (j == 0)
					rhs = h[0] * sigma(u, hs.subspan(1), N);
				else
					rhs = sigma(u, face_tuple(j, h), N);
				worst = std::max(worst, mat_residual(lhs, rhs));
			}
		}
	EXPECT_LT(worst, 1e-12);
}

TEST(Sigma, LeavesLogDomain)
{
	Matrix far = 2.5 * Matrix::Identity(N, N);
	EXPECT_THROW(principal_log(far), DomainError);
	std::vector<Matrix> h{far};
	EXPECT_THROW(sigma(std::vector<double>{0.5, 0.5}, h, N), DomainError);
	EXPECT_THROW(sigma(std::vector<double>{1.0}, h, N), std::invalid_argument);
}

TEST(FMap, TrivialCases)
{
	std::mt19937_64 rng(4);
	auto h = near_identity(rng, 3);
	auto f0 = f_map(4, 0, std::vector<double>{1.0}, h, N);
	ASSERT_EQ(f0.size(), 4u);
	for (int k = 0; k < 3; ++k)
		EXPECT_EQ(f0[static_cast<std::size_t>(k)], h[static_cast<std::size_t>(k)]);
	EXPECT_LT(mat_residual(f0[3], Matrix::Identity(N, N)), 1e-15);

	auto t = random_bary(rng, 3);
	auto f1 = f_map(1, 3, t, h, N);
	ASSERT_EQ(f1.size(), 1u);
	EXPECT_LT(mat_residual(f1[0], sigma(t, h, N)), 1e-15);

	EXPECT_THROW(f_map(2, 1, t, h, N), std::invalid_argument);
	EXPECT_THROW(f_map(0, 4, t, h, N), std::invalid_argument);
}

TEST(FMap, SimplicialCompatibilities)
{
	std::mt19937_64 rng(5);
	double worst = 0;
	for (int draw = 0; draw < 30; ++draw)
		for (int m = 1; m <= 3; ++m)
			for (int q = 0; q <= 2; ++q)
			{
				auto h = near_identity(rng, m + q);
				auto t = random_bary(rng, q);
				// inner faces act on the untouched prefix
				for (int j = 0; j <= m - 1; ++j)
					worst = std::max(worst, tuple_residual(f_map(m, q, t, face_tuple(j, h), N),
					                                       face_tuple(j, f_map(m + 1, q, t, h, N))));
				// faces inside the contracted block become cofaces of the simplex
				for (int j = m; j <= m + q; ++j)
					worst = std::max(worst, tuple_residual(f_map(m, q, t, face_tuple(j, h), N),
					                                       f_map(m, q + 1, coface(j - m + 1, t), h, N)));
				worst = std::max(worst, tuple_residual(face_tuple(m, f_map(m + 1, q, t, h, N)),
				                                       f_map(m, q + 1, coface(0, t), h, N)));
			}
	EXPECT_LT(worst, 1e-12);
}

TEST(FaceTuple, MatchesNerveFaces)
{
	std::mt19937_64 rng(6);
	auto h = near_identity(rng, 3);
	auto f0 = face_tuple(0, h), f1 = face_tuple(1, h), f3 = face_tuple(3, h);
	ASSERT_EQ(f0.size(), 2u);
	EXPECT_EQ(f0[0], h[1]);
	EXPECT_EQ(f1[0], Matrix(h[0] * h[1]));
	EXPECT_EQ(f1[1], h[2]);
	EXPECT_EQ(f3[1], h[1]);
	EXPECT_THROW(face_tuple(4, h), std::out_of_range);
}

TEST(Beta, VanishesAboveTheTopLevel)
{
	ChernCocycle om(2);
	ContractionConfig cfg;
	auto pt = sample_local_point(2, 1, N, cfg.radius, 7, 0);
	EXPECT_EQ(beta_eval(3, 0, om, pt, cfg), Complex(0.0));
	auto pt2 = sample_local_point(3, 0, N, cfg.radius, 7, 1);
	EXPECT_EQ(beta_eval(4, 0, om, pt2, cfg), Complex(0.0));
}

TEST(Beta, RejectsMismatchedPoints)
{
	ChernCocycle om(2);
	ContractionConfig cfg;
	auto pt = sample_local_point(2, 2, N, cfg.radius, 7, 0);
	EXPECT_THROW(beta_eval(1, 1, om, pt, cfg), std::invalid_argument);
	EXPECT_THROW(beta_eval(0, 2, om, pt, cfg), std::invalid_argument);
}

TEST(Beta, ZeroSimplexEvaluatesAtTheIdentity)
{
	// every term of the top component for c = 2 carries dh_2, which is zero at h_2 = 1
	ChernCocycle om(2);
	ContractionConfig cfg;
	auto pt = sample_local_point(1, 2, N, cfg.radius, 8, 0);
	EXPECT_LT(std::abs(beta_eval(2, 0, om, pt, cfg)), 1e-15);
	// for c = 1 the level-one component is 1-form tr(h⁻¹dh); on (h, 1) with zero tangent it vanishes
	ChernCocycle om1(1);
	auto pt0 = sample_local_point(0, 1, N, cfg.radius, 8, 1);
	EXPECT_EQ(beta_eval(1, 0, om1, pt0, cfg), Complex(0.0));
}

TEST(Beta, FirstChernClassIntegratesTheLog)
{
	// β_{1,1}(h) = -∫ σ_1^* ω_1 = -ω_1 evaluated on the tangent h·log h
	ChernCocycle om(1);
	ContractionConfig cfg;
	for (std::uint64_t s = 0; s < 10; ++s)
	{
		auto pt = sample_local_point(1, 0, N, cfg.radius, 9, s);
		Matrix L = principal_log(pt.h[0]);
		std::vector<std::vector<Matrix>> tv{{Matrix(pt.h[0] * L)}};
		Complex expect = -evaluate(*om.omega(1), to_eval_point(pt.h, tv, N));
		Complex got = beta_eval(1, 1, om, pt, cfg);
		EXPECT_LT(relative_residual(got, expect), 1e-7) << got << " vs " << expect;
		// independent value: the trace of the log divided by 2πi
		Complex direct = -L.trace() / Complex(0, 2 * std::acos(-1.0));
		EXPECT_LT(relative_residual(got, direct), 1e-7);
	}
}

TEST(Beta, SelfConvergence)
{
	ChernCocycle om(2);
	ContractionConfig coarse, fine;
	fine.quadratureOrder = coarse.quadratureOrder + 4;
	fine.fdStep = coarse.fdStep / 2;
	for (std::uint64_t s = 0; s < 5; ++s)
	{
		auto pt = sample_local_point(2, 1, N, coarse.radius, 10, s);
		Complex a = beta_eval(2, 1, om, pt, coarse);
		Complex b = beta_eval(2, 1, om, pt, fine);
		EXPECT_GT(std::abs(b), 0.0);
		EXPECT_LT(relative_residual(a, b), 1e-6);
	}
}

TEST(Eta, DeterministicAndRangeChecked)
{
	ChernCocycle om(2);
	ContractionConfig cfg;
	auto pt = sample_local_point(1, 2, N, cfg.radius, 11, 0);
	EXPECT_EQ(eta_eval(2, om, pt, cfg), eta_eval(2, om, pt, cfg));
	auto again = sample_local_point(1, 2, N, cfg.radius, 11, 0);
	EXPECT_EQ(eta_eval(2, om, pt, cfg), eta_eval(2, om, again, cfg));
	EXPECT_THROW(eta_eval(4, om, pt, cfg), std::out_of_range);
	EXPECT_THROW(eta_eval(-1, om, pt, cfg), std::out_of_range);
}

TEST(Eta, LargeRadiusRaisesDomainError)
{
	ChernCocycle om(2);
	ContractionConfig cfg;
	LocalPoint pt;
	pt.size = N;
	pt.h = {Matrix(2.5 * Matrix::Identity(N, N))};
	pt.tangents = {{Matrix::Identity(N, N)}, {Matrix::Identity(N, N)}};
	EXPECT_THROW(eta_eval(2, om, pt, cfg), DomainError);
}

TEST(Transfer, TruncatedTransferHolds)
{
	ChernCocycle om(2);
	ContractionConfig cfg;
	NumericConfig ncfg;
	ncfg.samples = 10;
	for (int l = 0; l <= 3; ++l)
	{
		auto rep = verify_transfer(om, l, cfg, ncfg);
		EXPECT_TRUE(rep.pass) << rep.to_json().dump();
		EXPECT_LT(rep.maxResidual, 1e-4);
	}
	EXPECT_THROW(verify_transfer(om, 4, cfg, ncfg), std::out_of_range);
}

TEST(Transfer, FirstChernClass)
{
	ChernCocycle om(1);
	ContractionConfig cfg;
	NumericConfig ncfg;
	ncfg.samples = 5;
	for (int l = 0; l <= 1; ++l)
		EXPECT_TRUE(verify_transfer(om, l, cfg, ncfg).pass) << l;
}

TEST(Transfer, RefinementDecreasesResidual)
{
	ChernCocycle om(2);
	ContractionConfig cfg;
	NumericConfig ncfg;
	ncfg.samples = 10;
	for (int l = 1; l <= 3; ++l)
	{
		auto reps = refine_transfer(om, l, cfg, ncfg);
		ASSERT_EQ(reps.size(), 3u);
		EXPECT_EQ(reps.back().quadOrder, cfg.quadratureOrder);
		EXPECT_DOUBLE_EQ(reps.back().fdStep, cfg.fdStep);
		EXPECT_GE(reps[0].maxResidual, reps[1].maxResidual) << l;
		EXPECT_GE(reps[1].maxResidual, reps[2].maxResidual) << l;
	}
}
