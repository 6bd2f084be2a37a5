#pragma once

// Numerical evaluation of FormExprs at points of GL(n,C)^p with tangent
// tuples, randomized equality checks, and finite-difference validation of
// the symbolic exterior derivative.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <nlohmann/json.hpp>

#include "form_algebra.hpp"

namespace simpchern {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class NumericError : public std::runtime_error
{
  public:
	using std::runtime_error::runtime_error;
};

enum class SampleMode
{
	General, // I + small Gaussian perturbation in GL(n,C)
	Special  // exp(X), X ∈ su(n); tangents g·Y with Y ∈ su(n)
};

struct NumericConfig
{
	int n = 3;
	int samples = 20;
	std::uint64_t seed = 20240531;
	double tolerance = 1e-9;
	double fdStep = 1e-4;
	double perturbation = 0.5;
	double conditionBound = 1e3;
	int retryCap = 100;
	SampleMode mode = SampleMode::General;

	void validate() const
	{
		if (n < 2 || samples < 1 || !(tolerance > 0) || !(fdStep > 0))
			throw std::invalid_argument("NumericConfig requires n >= 2, samples >= 1, tolerance > 0, fdStep > 0");
	}
};

/// One tangent vector at a point: a matrix per letter index and a simplex
/// component per barycentric coordinate (components sum to zero).
struct Tangent
{
	std::vector<Matrix> mats;
	std::vector<double> simplex;
};

/// Matrices are indexed by letter index (slot 0 unused on NG).
struct EvalPoint
{
	Context ctx;
	std::vector<Matrix> mats;
	std::vector<Matrix> inverses;
	std::vector<double> simplex;
	std::vector<Tangent> tangents;

	int n() const { return mats.empty() ? 0 : static_cast<int>(mats.back().rows()); }

	void refresh_inverses()
	{
		inverses.resize(mats.size());
		for (std::size_t i = 0; i < mats.size(); ++i)
		{
			if (static_cast<int>(i) < ctx.min_index())
			{
				inverses[i] = mats[i];
				continue;
			}
			Eigen::PartialPivLU<Matrix> lu(mats[i]);
			if (!(std::abs(lu.determinant()) > 1e-300))
				throw NumericError("singular matrix at slot " + std::to_string(i));
			inverses[i] = lu.inverse();
		}
	}
};

inline Complex two_pi_i() { return Complex(0, 2 * std::numbers::pi); }

inline double coefficient_value(Coefficient const &c)
{
	return c.rational.convert_to<double>();
}

inline Complex ipi_factor(int k) { return std::pow(two_pi_i(), -k); }

namespace detail {

inline int inversion_sign(unsigned mask, int j)
{
	return std::popcount(mask >> (j + 1)) % 2 ? -1 : 1;
}

inline Matrix const &letter_matrix(EvalPoint const &pt, Letter l)
{
	auto i = static_cast<std::size_t>(l.index);
	return l.kind == LetterKind::Inverse ? pt.inverses[i] : pt.mats[i];
}

/// Σ_σ sgn σ Π slot_a(V_σ(a)) for one term, by dynamic programming over the
/// subset of tangents already consumed.
inline Complex evaluate_term(Term const &t, EvalPoint const &pt)
{
	int const K = static_cast<int>(pt.tangents.size());
	unsigned const states = 1u << K;
	int const n = pt.n();
	std::vector<Complex> s(states, 0.0);
	s[0] = 1.0;
	int consumed = 0;
	for (int di : t.dt)
	{
		std::vector<Complex> ns(states, 0.0);
		for (unsigned m = 0; m < states; ++m)
		{
			if (std::popcount(m) != consumed || s[m] == 0.0)
				continue;
			for (int j = 0; j < K; ++j)
				if (!(m & (1u << j)))
					ns[m | (1u << j)] +=
					    double(inversion_sign(m, j)) * s[m] * pt.tangents[static_cast<std::size_t>(j)].simplex[static_cast<std::size_t>(di)];
		}
		s = std::move(ns);
		++consumed;
	}
	std::vector<Matrix> M(states);
	std::vector<char> active(states, 0);
	for (auto const &tr : t.traces)
	{
		for (unsigned m = 0; m < states; ++m)
		{
			active[m] = std::popcount(m) == consumed && s[m] != 0.0;
			if (active[m])
				M[m] = s[m] * Matrix::Identity(n, n);
		}
		for (auto l : tr.letters)
		{
			if (l.kind != LetterKind::Differential)
			{
				auto const &L = letter_matrix(pt, l);
				for (unsigned m = 0; m < states; ++m)
					if (active[m])
						M[m] = M[m] * L;
				continue;
			}
			std::vector<Matrix> NM(states);
			std::vector<char> nactive(states, 0);
			for (unsigned m = 0; m < states; ++m)
			{
				if (!active[m])
					continue;
				for (int j = 0; j < K; ++j)
				{
					if (m & (1u << j))
						continue;
					unsigned nm = m | (1u << j);
					Matrix contrib = double(inversion_sign(m, j)) *
					                 (M[m] * pt.tangents[static_cast<std::size_t>(j)].mats[static_cast<std::size_t>(l.index)]);
					if (nactive[nm])
						NM[nm] += contrib;
					else
					{
						NM[nm] = std::move(contrib);
						nactive[nm] = 1;
					}
				}
			}
			M = std::move(NM);
			active = std::move(nactive);
			++consumed;
		}
		for (unsigned m = 0; m < states; ++m)
			s[m] = active[m] ? M[m].trace() : Complex(0.0);
	}
	Complex tval = 1.0;
	for (std::size_t i = 0; i < t.tpow.size(); ++i)
		tval *= std::pow(pt.simplex[i], t.tpow[i]);
	return coefficient_value(t.coeff) * ipi_factor(t.coeff.ipi) * tval * s[states - 1];
}

} // namespace detail

/// Determinant convention: α₁∧⋯∧α_k(V₁..V_k) = Σ_σ sgn σ Π α_a(V_σ(a)).
inline Complex evaluate(FormExpr const &a, EvalPoint const &pt)
{
	require_same(a.context(), pt.ctx);
	if (pt.tangents.size() > 20)
		throw std::invalid_argument("too many tangents");
	Complex sum = 0;
	for (auto const &t : a.terms())
	{
		if (t.degree() != static_cast<int>(pt.tangents.size()))
			throw std::invalid_argument("degree mismatch: term of degree " + std::to_string(t.degree()) + " on " +
			                            std::to_string(pt.tangents.size()) + " tangents");
		sum += detail::evaluate_term(t, pt);
	}
	return sum;
}

/// |x - y| / max(1, |x|, |y|).
inline double relative_residual(Complex x, Complex y)
{
	return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

// ---------------------------------------------------------------------------
// sampling

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
	                  static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
	                  static_cast<std::uint32_t>(salt)};
	return std::mt19937_64(seq);
}

inline Matrix gaussian_matrix(std::mt19937_64 &rng, int n)
{
	std::normal_distribution<double> N(0.0, std::numbers::sqrt2 / 2);
	Matrix m(n, n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			m(i, j) = Complex(N(rng), N(rng));
	return m;
}

inline Matrix random_su_algebra(std::mt19937_64 &rng, int n)
{
	Matrix g = gaussian_matrix(rng, n);
	Matrix x = (g - g.adjoint()) / 2.0;
	x -= (x.trace() / double(n)) * Matrix::Identity(n, n);
	return x;
}

inline double condition_number(Matrix const &m)
{
	Eigen::JacobiSVD<Matrix> svd(m);
	auto const &sv = svd.singularValues();
	return sv(0) / sv(sv.size() - 1);
}

/// Deterministic in (cfg.seed, index, n): a point of the context's manifold
/// with `degree` random tangents and, when simplexDim > 0, a Dirichlet(1..1)
/// simplex point.
inline EvalPoint sample_point(Context ctx, int degree, NumericConfig const &cfg, std::uint64_t index, int n)
{
	auto rng = sample_rng(cfg.seed, index, static_cast<std::uint64_t>(n) * 1000003u + 7u);
	EvalPoint pt;
	pt.ctx = ctx;
	auto const slots = static_cast<std::size_t>(ctx.level) + 1;
	pt.mats.assign(slots, Matrix::Identity(n, n));
	double const scale = cfg.perturbation / std::sqrt(double(n));
	for (int i = ctx.min_index(); i <= ctx.max_index(); ++i)
	{
		int tries = 0;
		for (;;)
		{
			Matrix m;
			if (cfg.mode == SampleMode::Special)
				m = (2.0 * cfg.perturbation * random_su_algebra(rng, n)).exp();
			else
				m = Matrix::Identity(n, n) + scale * gaussian_matrix(rng, n);
			if (condition_number(m) < cfg.conditionBound)
			{
				pt.mats[static_cast<std::size_t>(i)] = m;
				break;
			}
			if (++tries >= cfg.retryCap)
				throw NumericError("sample_point: condition-number retry cap reached");
		}
	}
	if (ctx.simplexDim > 0)
	{
		std::exponential_distribution<double> E(1.0);
		double total = 0;
		pt.simplex.resize(static_cast<std::size_t>(ctx.simplexDim) + 1);
		for (auto &x : pt.simplex)
			total += (x = E(rng));
		for (auto &x : pt.simplex)
			x /= total;
	}
	std::normal_distribution<double> N(0.0, 1.0);
	for (int k = 0; k < degree; ++k)
	{
		Tangent v;
		v.mats.assign(slots, Matrix::Zero(n, n));
		for (int i = ctx.min_index(); i <= ctx.max_index(); ++i)
		{
			auto ii = static_cast<std::size_t>(i);
			v.mats[ii] = cfg.mode == SampleMode::Special ? Matrix(pt.mats[ii] * random_su_algebra(rng, n))
			                                               : gaussian_matrix(rng, n);
		}
		if (ctx.simplexDim > 0)
		{
			v.simplex.resize(static_cast<std::size_t>(ctx.simplexDim) + 1);
			double mean = 0;
			for (auto &x : v.simplex)
				mean += (x = N(rng));
			mean /= double(v.simplex.size());
			for (auto &x : v.simplex)
				x -= mean;
		}
		pt.tangents.push_back(std::move(v));
	}
	pt.refresh_inverses();
	return pt;
}

/// Default matrix size for a word length L: max(3, ⌈L/2⌉ + 1).
inline int default_matrix_size(std::size_t longestWord)
{
	return std::max(3, static_cast<int>((longestWord + 1) / 2) + 1);
}

// ---------------------------------------------------------------------------
// reports

struct Report
{
	std::string check;
	Context ctx;
	std::vector<int> sizes;
	int samples = 0;
	double maxResidual = 0;
	double threshold = 0;
	bool pass = false;

	nlohmann::json to_json() const
	{
		return {{"check", check},
		        {"context", simpchern::to_string(ctx)},
		        {"n", sizes.empty() ? 0 : sizes.front()},
		        {"sizes", sizes},
		        {"samples", samples},
		        {"maxResidual", maxResidual},
		        {"threshold", threshold},
		        {"pass", pass}};
	}
};

/// Compares a and b at cfg.samples seeded points for sizes n and n+1, where
/// n = max(cfg.n, default_matrix_size(L)).
inline Report equal_numeric(FormExpr const &a, FormExpr const &b, NumericConfig const &cfg, std::string check = "equal")
{
	cfg.validate();
	require_same(a.context(), b.context());
	Report rep{std::move(check), a.context(), {}, cfg.samples, 0.0, cfg.tolerance, true};
	auto da = a.degree(), db = b.degree();
	if ((!a.is_zero() && !da) || (!b.is_zero() && !db))
		throw std::invalid_argument("equal_numeric needs homogeneous forms");
	if (da && db && *da != *db)
	{
		rep.pass = false;
		rep.maxResidual = INFINITY;
		return rep;
	}
	int const deg = da ? *da : db.value_or(0);
	int const n0 = std::max(cfg.n, default_matrix_size(std::max(a.longest_word(), b.longest_word())));
	rep.sizes = {n0, n0 + 1};
	for (int n : rep.sizes)
		for (int s = 0; s < cfg.samples; ++s)
		{
			auto pt = sample_point(a.context(), deg, cfg, static_cast<std::uint64_t>(s), n);
			rep.maxResidual = std::max(rep.maxResidual, relative_residual(evaluate(a, pt), evaluate(b, pt)));
		}
	rep.pass = rep.maxResidual < cfg.tolerance;
	return rep;
}

/// Moves the base point by h·v (matrices and simplex coordinates).
inline EvalPoint shifted(EvalPoint const &pt, Tangent const &v, double h)
{
	EvalPoint q = pt;
	for (std::size_t i = 0; i < q.mats.size(); ++i)
		if (static_cast<int>(i) >= q.ctx.min_index())
			q.mats[i] += h * v.mats[i];
	for (std::size_t i = 0; i < q.simplex.size(); ++i)
		q.simplex[i] += h * v.simplex[i];
	q.refresh_inverses();
	return q;
}

/// dα(V_0..V_k) ≈ Σ_i (-1)^i ∂_{V_i} α(V_0..V̂_i..V_k) by central differences
/// along the straight lines H + sV_i (constant fields commute).
inline Complex fd_exterior_derivative(FormExpr const &a, EvalPoint const &pt, double h)
{
	Complex sum = 0;
	int const k1 = static_cast<int>(pt.tangents.size());
	for (int i = 0; i < k1; ++i)
	{
		auto const &v = pt.tangents[static_cast<std::size_t>(i)];
		EvalPoint plus = shifted(pt, v, h), minus = shifted(pt, v, -h);
		plus.tangents.erase(plus.tangents.begin() + i);
		minus.tangents.erase(minus.tangents.begin() + i);
		Complex deriv = (evaluate(a, plus) - evaluate(a, minus)) / (2 * h);
		sum += i % 2 ? -deriv : deriv;
	}
	return sum;
}

/// Rescales a tangent to unit length (Frobenius over all slots plus the
/// simplex part), so the step h is a step in arc length.
inline void normalize_tangent(Tangent &v)
{
	double sq = 0;
	for (auto const &m : v.mats)
		sq += m.squaredNorm();
	for (double x : v.simplex)
		sq += x * x;
	if (sq == 0)
		return;
	double const inv = 1.0 / std::sqrt(sq);
	for (auto &m : v.mats)
		m *= inv;
	for (auto &x : v.simplex)
		x *= inv;
}

/// Symbolic d against finite differences along unit tangents; passes below
/// max(cfg.tolerance, 100·fdStep²).
inline Report fd_derivative_check(FormExpr const &a, NumericConfig const &cfg, std::string check = "fd_derivative")
{
	cfg.validate();
	if (cfg.fdStep < 1e-12)
		throw NumericError("finite-difference step underflow");
	auto deg = a.degree();
	if (!a.is_zero() && !deg)
		throw std::invalid_argument("fd_derivative_check needs a homogeneous form");
	auto da = exterior_derivative(a);
	Report rep{std::move(check), a.context(), {cfg.n}, cfg.samples, 0.0,
	           std::max(cfg.tolerance, 100 * cfg.fdStep * cfg.fdStep), true};
	if (a.is_zero())
		return rep;
	for (int s = 0; s < cfg.samples; ++s)
	{
		auto pt = sample_point(a.context(), *deg + 1, cfg, static_cast<std::uint64_t>(s), cfg.n);
		for (auto &v : pt.tangents)
			normalize_tangent(v);
		Complex sym = da.is_zero() ? Complex(0) : evaluate(da, pt);
		rep.maxResidual = std::max(rep.maxResidual, relative_residual(sym, fd_exterior_derivative(a, pt, cfg.fdStep)));
	}
	rep.pass = rep.maxResidual < rep.threshold;
	return rep;
}

// ---------------------------------------------------------------------------
// point maps

/// γ(g_0..g_q) = (g_0g_1⁻¹, …) with tangents pushed forward by dγ.
inline EvalPoint apply_gamma(EvalPoint const &pt)
{
	if (pt.ctx.family != Family::NbarG)
		throw ContextMismatch("apply_gamma expects a point of NbarG");
	int const q = pt.ctx.level;
	EvalPoint out;
	out.ctx = {Family::NG, q, pt.ctx.simplexDim};
	out.simplex = pt.simplex;
	int const n = pt.n();
	out.mats.assign(static_cast<std::size_t>(q) + 1, Matrix::Identity(n, n));
	for (int j = 1; j <= q; ++j)
		out.mats[static_cast<std::size_t>(j)] = pt.mats[static_cast<std::size_t>(j - 1)] * pt.inverses[static_cast<std::size_t>(j)];
	for (auto const &v : pt.tangents)
	{
		Tangent w;
		w.simplex = v.simplex;
		w.mats.assign(static_cast<std::size_t>(q) + 1, Matrix::Zero(n, n));
		for (int j = 1; j <= q; ++j)
		{
			auto const &gi = pt.inverses[static_cast<std::size_t>(j)];
			w.mats[static_cast<std::size_t>(j)] =
			    v.mats[static_cast<std::size_t>(j - 1)] * gi -
			    pt.mats[static_cast<std::size_t>(j - 1)] * gi * v.mats[static_cast<std::size_t>(j)] * gi;
		}
		out.tangents.push_back(std::move(w));
	}
	out.refresh_inverses();
	return out;
}

/// ε_i : NG(q) → NG(q-1) on points and tangents.
inline EvalPoint apply_face(int i, EvalPoint const &pt)
{
	if (pt.ctx.family != Family::NG)
		throw ContextMismatch("apply_face expects a point of NG");
	int const q = pt.ctx.level;
	if (q < 1 || i < 0 || i > q)
		throw std::out_of_range("face index out of range");
	int const n = pt.n();
	auto push = [&](std::vector<Matrix> const &h, std::vector<Matrix> const *v) {
		std::vector<Matrix> out(static_cast<std::size_t>(q), v ? Matrix(Matrix::Zero(n, n)) : Matrix(Matrix::Identity(n, n)));
		for (int j = 1; j <= q - 1; ++j)
		{
			auto jj = static_cast<std::size_t>(j);
			if (j < i)
				out[jj] = v ? (*v)[jj] : h[jj];
			else if (j == i)
				out[jj] = v ? Matrix((*v)[jj] * h[jj + 1] + h[jj] * (*v)[jj + 1]) : Matrix(h[jj] * h[jj + 1]);
			else
				out[jj] = v ? (*v)[jj + 1] : h[jj + 1];
		}
		return out;
	};
	EvalPoint out;
	out.ctx = {Family::NG, q - 1, pt.ctx.simplexDim};
	out.simplex = pt.simplex;
	out.mats = push(pt.mats, nullptr);
	for (auto const &v : pt.tangents)
		out.tangents.push_back({push(pt.mats, &v.mats), v.simplex});
	out.refresh_inverses();
	return out;
}

} // namespace simpchern
