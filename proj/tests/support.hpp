#pragma once

// Shared test helpers: random forms and reference implementations that do
// not go through the library code they check.

#include <algorithm>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include <simpchern/simpchern.hpp>

namespace testsupport {

using namespace simpchern;

/// Random letter valid in ctx; differential with probability pd.
inline Letter random_letter(std::mt19937_64 &rng, Context const &ctx, double pd)
{
	std::uniform_int_distribution<int> idx(ctx.min_index(), ctx.max_index());
	std::uniform_real_distribution<double> u(0, 1);
	double x = u(rng);
	LetterKind k = x < pd ? LetterKind::Differential : x < pd + (1 - pd) / 2 ? LetterKind::Var : LetterKind::Inverse;
	return Letter{ctx.family, k, idx(rng)};
}

inline Word random_word_raw(std::mt19937_64 &rng, Context const &ctx, int deg, int extra)
{
	std::uniform_int_distribution<int> e(0, std::max(extra, deg == 0 ? 1 : 0));
	Word w;
	int groups = e(rng);
	for (int i = 0; i < deg; ++i)
		w.push_back(Letter{ctx.family, LetterKind::Differential, std::uniform_int_distribution<int>(ctx.min_index(), ctx.max_index())(rng)});
	for (int i = 0; i < groups; ++i)
	{
		Letter l = random_letter(rng, ctx, 0.0);
		w.push_back(l);
	}
	std::shuffle(w.begin(), w.end(), rng);
	return w;
}

/// Random word with exactly `deg` differentials and up to `extra` group
/// letters; never reduces to the empty word.
inline Word random_word(std::mt19937_64 &rng, Context const &ctx, int deg, int extra)
{
	for (;;)
	{
		Word w = random_word_raw(rng, ctx, deg, extra);
		Word c = w;
		try
		{
			canonicalize_trace(c);
			return w;
		}
		catch (std::domain_error const &)
		{
		}
	}
}

inline Rational random_rational(std::mt19937_64 &rng)
{
	std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
	int a = num(rng);
	return Rational(a == 0 ? 1 : a, den(rng));
}

/// Random homogeneous form of degree `deg` with simplex dimension sdim.
inline FormExpr random_form(std::mt19937_64 &rng, Context ctx, int deg, int terms = 3)
{
	std::vector<Term> out;
	for (int k = 0; k < terms; ++k)
	{
		Term t;
		t.coeff = {random_rational(rng), std::uniform_int_distribution<int>(0, 2)(rng)};
		int dtDeg = ctx.simplexDim ? std::uniform_int_distribution<int>(0, std::min(deg, ctx.simplexDim))(rng) : 0;
		for (int j = 0; j < dtDeg; ++j)
			t.dt.push_back(std::uniform_int_distribution<int>(1, ctx.simplexDim)(rng));
		if (ctx.simplexDim)
		{
			t.tpow.assign(static_cast<std::size_t>(ctx.simplexDim) + 1, 0);
			for (auto &p : t.tpow)
				p = std::uniform_int_distribution<int>(0, 2)(rng);
		}
		int left = deg - dtDeg;
		int nTr = std::uniform_int_distribution<int>(1, 2)(rng);
		for (int j = 0; j < nTr; ++j)
		{
			int d = j + 1 == nTr ? left : std::uniform_int_distribution<int>(0, left)(rng);
			left -= d;
			t.traces.push_back({random_word(rng, ctx, d, 3)});
		}
		out.push_back(std::move(t));
	}
	FormExpr f(ctx, std::move(out));
	return f;
}

/// Random non-zero form; retries until something survives normalization.
inline FormExpr random_nonzero_form(std::mt19937_64 &rng, Context ctx, int deg, int terms = 3)
{
	for (;;)
	{
		auto f = random_form(rng, ctx, deg, terms);
		if (!f.is_zero())
			return f;
	}
}

/// Brute-force evaluation: explicit sum over all permutations of tangents
/// assigned to the ordered degree-1 slots.
inline Complex brute_force_evaluate(FormExpr const &a, EvalPoint const &pt)
{
	int const K = static_cast<int>(pt.tangents.size());
	int const n = pt.n();
	Complex total = 0;
	for (auto const &t : a.terms())
	{
		std::vector<int> perm(static_cast<std::size_t>(K));
		std::iota(perm.begin(), perm.end(), 0);
		Complex termSum = 0;
		do
		{
			int inv = 0;
			for (int i = 0; i < K; ++i)
				for (int j = i + 1; j < K; ++j)
					inv += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
			std::size_t slot = 0;
			Complex prod = 1;
			for (int d : t.dt)
				prod *= pt.tangents[static_cast<std::size_t>(perm[slot++])].simplex[static_cast<std::size_t>(d)];
			for (auto const &tr : t.traces)
			{
				Matrix m = Matrix::Identity(n, n);
				for (auto l : tr.letters)
				{
					auto i = static_cast<std::size_t>(l.index);
					if (l.kind == LetterKind::Var)
						m = m * pt.mats[i];
					else if (l.kind == LetterKind::Inverse)
						m = m * pt.mats[i].inverse();
					else
						m = m * pt.tangents[static_cast<std::size_t>(perm[slot++])].mats[i];
				}
				prod *= m.trace();
			}
			termSum += (inv % 2 ? -1.0 : 1.0) * prod;
		} while (std::next_permutation(perm.begin(), perm.end()));
		Complex tv = 1;
		for (std::size_t i = 0; i < t.tpow.size(); ++i)
			tv *= std::pow(pt.simplex[i], t.tpow[i]);
		total += t.coeff.rational.convert_to<double>() * std::pow(Complex(0, 2 * M_PI), -t.coeff.ipi) * tv * termSum;
	}
	return total;
}

/// ∫_{Δʳ} Π t_i^{b_i} by Duffy's collapsed coordinates and tensor Gauss–Legendre.
inline double duffy_dirichlet(std::vector<int> const &b)
{
	int const r = static_cast<int>(b.size()) - 1;
	if (r == 0)
		return 1.0;
	using GL = boost::math::quadrature::gauss<double, 20>;
	// t_1 = u_1, t_2 = (1-u_1)u_2, ..., t_0 = (1-u_1)...(1-u_r)
	std::function<double(int, double, double)> rec = [&](int k, double rest, double acc) -> double {
		if (k > r)
			return acc * std::pow(rest, b[0]);
		return GL::integrate(
		    [&](double u) {
			    double tk = rest * u;
			    return rest * std::pow(tk, b[static_cast<std::size_t>(k)]) * rec(k + 1, rest * (1 - u), acc);
		    },
		    0.0, 1.0);
	};
	return rec(1, 1.0, 1.0);
}

inline double to_double(Rational const &q) { return q.convert_to<double>(); }

} // namespace testsupport
