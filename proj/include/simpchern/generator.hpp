#pragma once

// Chern-character cocycles in the simplicial de Rham complex of NG and N̄G
// for G = GL(n, C): the closed-form generators, the first-principles
// curvature oracle, simplex integration, the c₂ cocycle and the
// Chern–Simons forms.

#include <bit>
#include <numeric>
#include <span>

#include "form_algebra.hpp"
#include "simplicial.hpp"

namespace simpchern {

class EnvelopeError : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxChernDegree = 4;

inline void check_envelope(int p)
{
	if (p < 1)
		throw std::invalid_argument("Chern degree must be at least 1");
	if (p > kMaxChernDegree)
		throw EnvelopeError("Chern degree " + std::to_string(p) + " exceeds the supported envelope p <= " +
		                    std::to_string(kMaxChernDegree));
}

inline BigInt factorial(int n)
{
	BigInt r = 1;
	for (int i = 2; i <= n; ++i)
		r *= i;
	return r;
}

inline BigInt binomial(int n, int k)
{
	if (k < 0 || k > n)
		return 0;
	return factorial(n) / (factorial(k) * factorial(n - k));
}

/// ∫_{Δʳ} t_0^{b_0}⋯t_r^{b_r} dt_1∧⋯∧dt_r = b_0!⋯b_r! / (b_0+⋯+b_r+r)!.
inline Rational dirichlet(std::span<int const> b)
{
	if (b.empty())
		throw std::invalid_argument("dirichlet needs at least one exponent");
	BigInt num = 1;
	int sum = 0;
	for (int x : b)
	{
		if (x < 0)
			throw std::invalid_argument("negative Dirichlet exponent");
		num *= factorial(x);
		sum += x;
	}
	int const r = static_cast<int>(b.size()) - 1;
	return Rational(num) / Rational(factorial(sum + r));
}

inline Rational dirichlet(std::initializer_list<int> b) { return dirichlet(std::span<int const>(b.begin(), b.size())); }

/// ∫₀¹ sᵃ(1-s)ᵇ ds.
inline Rational beta_integral(int a, int b) { return Rational(factorial(a) * factorial(b)) / Rational(factorial(a + b + 1)); }

/// φ_s = h_1⋯h_{s-1} dh_s h_s⁻¹⋯h_1⁻¹.
inline Word phi(int s)
{
	if (s < 1)
		throw std::out_of_range("phi index must be >= 1");
	Word w;
	for (int i = 1; i < s; ++i)
		w.push_back(Letter::h(i));
	w.push_back(Letter::dh(s));
	w.push_back(Letter::hinv(s));
	for (int i = s - 1; i >= 1; --i)
		w.push_back(Letter::hinv(i));
	return w;
}

/// θ_i = g_i⁻¹ dg_i.
inline Word maurer_cartan(int i) { return {Letter::ginv(i), Letter::dg(i)}; }

/// R_ij = (φ_i + ⋯ + φ_{j-1})², untraced.
inline MatrixForm R(int i, int j, Context ctx)
{
	if (i >= j)
		throw std::invalid_argument("R(i, j) requires i < j");
	MatrixForm s(ctx);
	for (int k = i; k < j; ++k)
		s = s + MatrixForm::word(ctx, phi(k));
	return s * s;
}

/// (θ_i - θ_j)², untraced.
inline MatrixForm theta_difference_squared(int i, int j, Context ctx)
{
	auto d = MatrixForm::word(ctx, maurer_cartan(i)) - MatrixForm::word(ctx, maurer_cartan(j));
	return d * d;
}

/// θ_{k-1} - θ_k.
inline MatrixForm theta_step(int k, Context ctx)
{
	return MatrixForm::word(ctx, maurer_cartan(k - 1)) - MatrixForm::word(ctx, maurer_cartan(k));
}

// ---------------------------------------------------------------------------
// insertion patterns

struct Insertion
{
	int gap; // 0: right after the leading factor; k: after the k-th permuted factor
	int i;
	int j;
	auto operator<=>(Insertion const &) const = default;
};

/// q ordered insertions of squared differences into the gaps of the base
/// word; `insertions` is listed in word order.
struct InsertionPattern
{
	std::vector<Insertion> insertions;

	std::map<std::pair<int, int>, int> exponents() const
	{
		std::map<std::pair<int, int>, int> a;
		for (auto const &x : insertions)
			++a[{x.i, x.j}];
		return a;
	}
};

/// All patterns for level r = p - q with pairs drawn from [lo, hi]. Every
/// interleaving of the r-1 permuted factors with q insertions is produced
/// once, with each insertion ranging over all pairs lo <= i < j <= hi.
inline std::vector<InsertionPattern> insertion_patterns(int p, int q, int lo, int hi)
{
	int const slots = p - 1;
	std::vector<std::pair<int, int>> pairs;
	for (int i = lo; i <= hi; ++i)
		for (int j = i + 1; j <= hi; ++j)
			pairs.emplace_back(i, j);
	std::vector<InsertionPattern> out;
	for (unsigned mask = 0; mask < (1u << slots); ++mask)
	{
		if (std::popcount(mask) != q)
			continue;
		std::vector<int> gaps;
		int seen = 0;
		for (int s = 0; s < slots; ++s)
		{
			if (mask & (1u << s))
				gaps.push_back(seen);
			else
				++seen;
		}
		std::size_t total = 1;
		for (int k = 0; k < q; ++k)
			total *= pairs.size();
		for (std::size_t code = 0; code < total; ++code)
		{
			InsertionPattern pat;
			std::size_t c = code;
			for (int k = 0; k < q; ++k)
			{
				auto [i, j] = pairs[c % pairs.size()];
				c /= pairs.size();
				pat.insertions.push_back({gaps[static_cast<std::size_t>(k)], i, j});
			}
			out.push_back(std::move(pat));
		}
	}
	return out;
}

/// Permutations of {1..m} with their signs.
inline std::vector<std::pair<int, std::vector<int>>> signed_permutations(int m)
{
	std::vector<int> perm(static_cast<std::size_t>(m));
	std::iota(perm.begin(), perm.end(), 1);
	std::vector<std::pair<int, std::vector<int>>> out;
	do
	{
		int inv = 0;
		for (int a = 0; a < m; ++a)
			for (int b = a + 1; b < m; ++b)
				inv += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
		out.emplace_back(inv % 2 ? -1 : 1, perm);
	} while (std::next_permutation(perm.begin(), perm.end()));
	return out;
}

namespace detail {

/// Σ_σ Σ_patterns sgn(σ)·dirichlet(b)·tr(lead · interleaved word); shared by
/// the NG and N̄G generators. `factor(k)` gives the k-th permuted factor,
/// `insert(i, j)` the squared difference, `tIndex(i)` the barycentric index
/// weighting pair member i.
template <class Factor, class Insert, class TIndex>
FormExpr permutation_insertion_sum(int p, int q, Context ctx, MatrixForm const &lead, Factor factor, Insert insert,
                                   TIndex tIndex, int pairLo, int pairHi)
{
	int const r = p - q;
	auto patterns = insertion_patterns(p, q, pairLo, pairHi);
	std::map<std::pair<int, int>, MatrixForm> inserts;
	for (int i = pairLo; i <= pairHi; ++i)
		for (int j = i + 1; j <= pairHi; ++j)
			inserts.emplace(std::pair{i, j}, insert(i, j));

	MatrixForm acc(ctx);
	for (auto const &[sign, perm] : signed_permutations(r - 1))
	{
		for (auto const &pat : patterns)
		{
			std::vector<int> b(static_cast<std::size_t>(r) + 1, 0);
			MatrixForm w = lead;
			std::size_t nextIns = 0;
			for (int gap = 0; gap <= r - 1; ++gap)
			{
				if (gap > 0)
					w = w * factor(perm[static_cast<std::size_t>(gap) - 1] + 1);
				while (nextIns < pat.insertions.size() && pat.insertions[nextIns].gap == gap)
				{
					auto const &x = pat.insertions[nextIns++];
					w = w * inserts.at({x.i, x.j});
					++b[static_cast<std::size_t>(tIndex(x.i))];
					++b[static_cast<std::size_t>(tIndex(x.j))];
				}
			}
			acc = acc + (Rational(sign) * dirichlet(b)) * w;
		}
	}
	return acc.trace();
}

} // namespace detail

/// ω_{p-q} ∈ Ω^{p+q}(NG(p-q)), the closed-form Chern-character component.
inline FormExpr bss_component(int p, int q)
{
	check_envelope(p);
	if (q < 0 || q > p - 1)
		throw std::out_of_range("bss_component requires 0 <= q <= p-1");
	int const r = p - q;
	Context ctx{Family::NG, r, 0};
	auto body = detail::permutation_insertion_sum(
	    p, q, ctx, MatrixForm::word(ctx, phi(1)), [&](int k) { return MatrixForm::word(ctx, phi(k)); },
	    [&](int i, int j) { return R(i, j, ctx); }, [](int i) { return i - 1; }, 1, r + 1);
	Rational pre = Rational(1) / Rational(factorial(p - 1));
	if ((r * (r - 1) / 2) % 2)
		pre = -pre;
	return (pre * body).with_ipi(p);
}

/// The N̄G(p-q) component obtained by integrating the p-th Chern character
/// form of the simplicial connection over Δ^{p-q}.
inline FormExpr bss_bar_component(int p, int q)
{
	check_envelope(p);
	if (q < 0 || q > p - 1)
		throw std::out_of_range("bss_bar_component requires 0 <= q <= p-1");
	int const r = p - q;
	Context ctx{Family::NbarG, r, 0};
	auto body = detail::permutation_insertion_sum(
	    p, q, ctx, Rational(p) * theta_step(1, ctx), [&](int k) { return theta_step(k, ctx); },
	    [&](int i, int j) { return theta_difference_squared(i, j, ctx); }, [](int i) { return i; }, 0, r);
	Rational pre = Rational(1) / Rational(factorial(p));
	if ((r * (r - 1) / 2) % 2)
		pre = -pre;
	return (pre * body).with_ipi(p);
}

/// ω_1 + ⋯ + ω_p, total degree 2p.
inline CochainSet bss_cocycle(int p)
{
	check_envelope(p);
	CochainSet c(Family::NG, 2 * p);
	for (int q = 0; q <= p - 1; ++q)
		c.set(p - q, bss_component(p, q));
	return c;
}

// ---------------------------------------------------------------------------
// first-principles oracle: Dupont's simplicial connection on Δʳ × N̄G(r)

inline Context simplex_context(int r) { return Context{Family::NbarG, r, r}; }

/// θ = t_0θ_0 + ⋯ + t_rθ_r.
inline MatrixForm simplicial_connection(int r)
{
	auto ctx = simplex_context(r);
	MatrixForm th(ctx);
	for (int i = 0; i <= r; ++i)
	{
		std::vector<int> e(static_cast<std::size_t>(i) + 1, 0);
		e[static_cast<std::size_t>(i)] = 1;
		th = th + MatrixForm::word(ctx, maurer_cartan(i)).times_t(e);
	}
	return th;
}

/// Ω = dθ + ½[θ, θ] = dθ + θ∧θ.
inline MatrixForm simplicial_curvature(int r)
{
	auto th = simplicial_connection(r);
	return exterior_derivative(th) + th * th;
}

/// Σ_i dt_i∧(θ_{i-1} - θ_i) + Σ_{i<j} t_it_j(θ_i - θ_j)², the rewritten −Ω
/// in which the cross terms of the dt-part have been cancelled.
inline MatrixForm bracketed_curvature(int r)
{
	auto ctx = simplex_context(r);
	MatrixForm s(ctx);
	for (int i = 1; i <= r; ++i)
		s = s + theta_step(i, ctx).times_dt(i);
	for (int i = 0; i <= r; ++i)
		for (int j = i + 1; j <= r; ++j)
		{
			std::vector<int> e(static_cast<std::size_t>(j) + 1, 0);
			++e[static_cast<std::size_t>(i)];
			++e[static_cast<std::size_t>(j)];
			s = s + theta_difference_squared(i, j, ctx).times_t(e);
		}
	return s;
}

/// (1/p!)(1/2πi)ᵖ tr((−Ω)ᵖ) on Δ^{p-q} × N̄G(p-q), fully expanded.
inline FormExpr curvature_expansion(int p, int q)
{
	check_envelope(p);
	if (q < 0 || q > p - 1)
		throw std::out_of_range("curvature_expansion requires 0 <= q <= p-1");
	auto minusOmega = Rational(-1) * simplicial_curvature(p - q);
	return (Rational(1) / Rational(factorial(p)) * minusOmega.pow(p).trace()).with_ipi(p);
}

/// I_Δ: keeps the dt_1∧⋯∧dt_r part (dt block first) and integrates its
/// t-monomial by the Dirichlet formula.
inline FormExpr integrate_simplex(FormExpr const &a)
{
	int const r = a.context().simplexDim;
	std::vector<int> full(static_cast<std::size_t>(r));
	std::iota(full.begin(), full.end(), 1);
	Context out = a.context();
	out.simplexDim = 0;
	std::vector<Term> terms;
	for (auto const &t : a.terms())
	{
		if (t.dt != full)
			continue;
		auto b = t.tpow;
		b.resize(static_cast<std::size_t>(r) + 1, 0);
		Term n = t;
		n.dt.clear();
		n.tpow.clear();
		n.coeff.rational *= dirichlet(b);
		terms.push_back(std::move(n));
	}
	return FormExpr(out, std::move(terms));
}

// ---------------------------------------------------------------------------
// closed forms of the corollaries

inline Word maurer_cartan_power(int k, int index = 1)
{
	Word w;
	for (int i = 0; i < k; ++i)
	{
		w.push_back(Letter::hinv(index));
		w.push_back(Letter::dh(index));
	}
	return w;
}

/// (1/p!)(1/2πi)ᵖ (1/C(2p-1, p-1)) tr((h⁻¹dh)^{2p-1}) on NG(1).
inline FormExpr cor_level_one(int p)
{
	Rational c = Rational(1) / Rational(factorial(p) * binomial(2 * p - 1, p - 1));
	return FormExpr::trace({Family::NG, 1, 0}, maurer_cartan_power(2 * p - 1), c, p);
}

/// (-1)^{p(p-1)/2} (1/(p!(p-1)!)) (1/2πi)ᵖ tr(φ_1 Σ_σ sgn σ φ_{σ(1)+1}⋯) on NG(p).
inline FormExpr cor_top_level(int p)
{
	Context ctx{Family::NG, p, 0};
	std::vector<Term> terms;
	Rational pre = Rational(1) / Rational(factorial(p) * factorial(p - 1));
	if ((p * (p - 1) / 2) % 2)
		pre = -pre;
	for (auto const &[sign, perm] : signed_permutations(p - 1))
	{
		Word w = phi(1);
		for (int s : perm)
			w = concat(w, phi(s + 1));
		Term t;
		t.coeff = {pre * sign, p};
		t.traces.push_back({w});
		terms.push_back(std::move(t));
	}
	return FormExpr(ctx, std::move(terms));
}

/// Cup product on NG: (a ∪ b)(h_1..h_{i+j}) = (-1)^{|a|·j} a(h_1..h_i) ∧ b(h_{i+1}..h_{i+j}).
inline FormExpr cup(FormExpr const &a, FormExpr const &b)
{
	if (a.context().family != Family::NG || b.context().family != Family::NG)
		throw ContextMismatch("cup product is defined on NG");
	int const i = a.context().level, j = b.context().level;
	Context target{Family::NG, i + j, 0};
	SubstitutionRule front{Family::NG, target, {}}, back{Family::NG, target, {}};
	for (int k = 1; k <= i; ++k)
		front.images[k] = {Letter::h(k)};
	for (int k = 1; k <= j; ++k)
		back.images[k] = {Letter::h(i + k)};
	auto r = wedge(substitute(a, front), substitute(b, back));
	auto da = a.degree().value_or(0);
	return (da * j) % 2 ? -r : r;
}

/// Second Chern class cocycle: c_{1,3} on NG(1) and c_{2,2} on NG(2).
inline CochainSet c2_cocycle()
{
	CochainSet c(Family::NG, 4);
	c.set(1, FormExpr::trace({Family::NG, 1, 0}, maurer_cartan_power(3), Rational(-1, 6), 2));
	Context two{Family::NG, 2, 0};
	Term a, b;
	a.coeff = {Rational(1, 2), 2};
	a.traces = {{{Letter::dh(1), Letter::dh(2), Letter::hinv(2), Letter::hinv(1)}}};
	b.coeff = {Rational(-1, 2), 2};
	b.traces = {{{Letter::hinv(1), Letter::dh(1)}}, {{Letter::hinv(2), Letter::dh(2)}}};
	c.set(2, FormExpr(two, {a, b}));
	return c;
}

/// Chern–Simons form of c₂ on N̄U(n): Tc_{0,3} on level 0, Tc_{1,2} on level 1.
inline CochainSet chern_simons_c2()
{
	CochainSet c(Family::NbarG, 3);
	Word mc3;
	for (int k = 0; k < 3; ++k)
		mc3 = concat(mc3, maurer_cartan(0));
	c.set(0, FormExpr::trace({Family::NbarG, 0, 0}, mc3, Rational(1, 6), 2));
	Context one{Family::NbarG, 1, 0};
	Term a, b;
	a.coeff = {Rational(1, 2), 2};
	a.traces = {{concat(maurer_cartan(0), maurer_cartan(1))}};
	b.coeff = {Rational(-1, 2), 2};
	b.traces = {{maurer_cartan(0)}, {maurer_cartan(1)}};
	c.set(1, FormExpr(one, {a, b}));
	return c;
}

/// Symmetric bilinear polarization of c₂: ½(1/2πi)²(tr X ∧ tr Y − tr(X∧Y)).
inline FormExpr c2_polarized(MatrixForm const &x, MatrixForm const &y)
{
	auto r = wedge(x.trace(), y.trace()) - (x * y).trace();
	return (Rational(1, 2) * r).with_ipi(2);
}

/// TP(θ) = k ∫₀¹ P(θ ∧ φ_s^{k-1}) ds with φ_s = sΩ + ½s(s−1)[θ,θ], for the
/// simplicial connection on Δ^level × N̄G(level), then integrated over the
/// simplex. The s-integral uses ∫₀¹ sᵃ(1−s)ᵇ ds on each coefficient.
inline FormExpr transgression_TP(int k, int level)
{
	if (k != 2)
		throw std::invalid_argument("transgression is implemented for k = 2 (the c2 polynomial) only");
	if (level < 0 || level > 1)
		throw std::out_of_range("transgression level must be 0 or 1");
	auto th = simplicial_connection(level);
	auto omega = exterior_derivative(th) + th * th;
	auto bracket = Rational(2) * (th * th);
	// φ_s = s·Ω − ½·s(1−s)·[θ,θ]
	struct Piece
	{
		int a, b;
		MatrixForm form;
	};
	std::vector<Piece> phiS{{1, 0, omega}, {1, 1, Rational(-1, 2) * bracket}};
	FormExpr acc(simplex_context(level));
	for (auto const &pc : phiS)
		acc = acc + beta_integral(pc.a, pc.b) * c2_polarized(th, pc.form);
	return integrate_simplex(Rational(k) * acc);
}

} // namespace simpchern
