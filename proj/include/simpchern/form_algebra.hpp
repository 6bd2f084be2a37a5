#pragma once

// Symbolic differential forms on Δʳ × NG(p) and Δʳ × N̄G(p): exact
// coefficients times dt-monomials times products of traces of words in
// noncommuting matrix letters.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace simpchern {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class ContextMismatch : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

class SubstitutionError : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

enum class Family : std::uint8_t
{
	NG,
	NbarG
};

inline char const *family_name(Family f) { return f == Family::NG ? "NG" : "NbarG"; }

// Declaration order is the canonical letter order: differentials sort first.
enum class LetterKind : std::uint8_t
{
	Differential,
	Var,
	Inverse
};

struct Letter
{
	Family family = Family::NG;
	LetterKind kind = LetterKind::Var;
	int index = 1;

	constexpr int degree() const { return kind == LetterKind::Differential ? 1 : 0; }
	constexpr auto operator<=>(Letter const &) const = default;

	static constexpr Letter h(int i) { return {Family::NG, LetterKind::Var, i}; }
	static constexpr Letter hinv(int i) { return {Family::NG, LetterKind::Inverse, i}; }
	static constexpr Letter dh(int i) { return {Family::NG, LetterKind::Differential, i}; }
	static constexpr Letter g(int i) { return {Family::NbarG, LetterKind::Var, i}; }
	static constexpr Letter ginv(int i) { return {Family::NbarG, LetterKind::Inverse, i}; }
	static constexpr Letter dg(int i) { return {Family::NbarG, LetterKind::Differential, i}; }
};

inline std::string letter_name(Letter l)
{
	bool ng = l.family == Family::NG;
	switch (l.kind)
	{
	case LetterKind::Var: return ng ? "h" : "g";
	case LetterKind::Inverse: return ng ? "inv" : "ginv";
	default: return ng ? "dh" : "dg";
	}
}

using Word = std::vector<Letter>;

inline int degree(Word const &w)
{
	int d = 0;
	for (auto l : w)
		d += l.degree();
	return d;
}

inline bool are_inverse(Letter a, Letter b)
{
	if (a.family != b.family || a.index != b.index)
		return false;
	return (a.kind == LetterKind::Var && b.kind == LetterKind::Inverse) ||
	       (a.kind == LetterKind::Inverse && b.kind == LetterKind::Var);
}

/// Cancels adjacent x·x⁻¹ and x⁻¹·x pairs.
inline Word free_reduce(Word const &w)
{
	Word out;
	out.reserve(w.size());
	for (auto l : w)
	{
		if (!out.empty() && are_inverse(out.back(), l))
			out.pop_back();
		else
			out.push_back(l);
	}
	return out;
}

inline Word concat(Word a, Word const &b)
{
	a.insert(a.end(), b.begin(), b.end());
	return a;
}

struct Context
{
	Family family = Family::NG;
	int level = 0;
	int simplexDim = 0;

	auto operator<=>(Context const &) const = default;

	int min_index() const { return family == Family::NG ? 1 : 0; }
	int max_index() const { return level; }
};

inline std::string to_string(Context const &c)
{
	return std::string(family_name(c.family)) + "(" + std::to_string(c.level) + ")" +
	       (c.simplexDim ? " x D^" + std::to_string(c.simplexDim) : "");
}

inline void require_same(Context const &a, Context const &b)
{
	if (a != b)
		throw ContextMismatch("context mismatch: " + to_string(a) + " vs " + to_string(b));
}

inline void validate_letter(Context const &c, Letter l)
{
	if (l.family != c.family || l.index < c.min_index() || l.index > c.max_index())
		throw std::out_of_range("letter " + letter_name(l) + std::to_string(l.index) +
		                        " not valid in " + to_string(c));
}

/// A trace factor tr(w). Canonical instances are freely and cyclically
/// reduced and stored at the minimal graded-cyclic rotation.
struct TraceWord
{
	Word letters;

	int degree() const { return simpchern::degree(letters); }
	auto operator<=>(TraceWord const &) const = default;
};

/// Rotates w to its canonical representative. Returns the Koszul sign of
/// the rotation, or 0 when the trace vanishes identically (two minimal
/// rotations with opposite signs, e.g. tr((h⁻¹dh)²)).
inline int canonicalize_trace(Word &w)
{
	w = free_reduce(w);
	while (w.size() >= 2 && are_inverse(w.front(), w.back()))
	{
		w.pop_back();
		w.erase(w.begin());
	}
	if (w.empty())
		throw std::domain_error("trace of the identity is size-dependent and not representable");

	std::size_t const n = w.size();
	int const total = degree(w);
	std::size_t best = 0;
	int bestSign = 1;
	bool conflict = false;
	int prefixDeg = 0;
	auto cmp = [&](std::size_t a, std::size_t b) {
		for (std::size_t k = 0; k < n; ++k)
		{
			auto x = w[(a + k) % n], y = w[(b + k) % n];
			if (x != y)
				return x < y ? -1 : 1;
		}
		return 0;
	};
	for (std::size_t k = 1; k < n; ++k)
	{
		prefixDeg += w[k - 1].degree();
		int sign = (prefixDeg * (total - prefixDeg)) % 2 ? -1 : 1;
		int c = cmp(k, best);
		if (c < 0)
		{
			best = k;
			bestSign = sign;
			conflict = false;
		}
		else if (c == 0 && sign != bestSign)
			conflict = true;
	}
	if (conflict)
		return 0;
	std::rotate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(best), w.end());
	return bestSign;
}

/// Sorts an anticommuting dt-monomial; returns the permutation sign or 0 on
/// a repeated index.
inline int sort_dt(std::vector<int> &dt)
{
	int sign = 1;
	for (std::size_t i = 1; i < dt.size(); ++i)
		for (std::size_t j = i; j > 0 && dt[j - 1] > dt[j]; --j)
		{
			std::swap(dt[j - 1], dt[j]);
			sign = -sign;
		}
	for (std::size_t i = 1; i < dt.size(); ++i)
		if (dt[i] == dt[i - 1])
			return 0;
	return sign;
}

inline void trim(std::vector<int> &tpow)
{
	while (!tpow.empty() && tpow.back() == 0)
		tpow.pop_back();
}

inline std::vector<int> add_powers(std::vector<int> a, std::vector<int> const &b)
{
	if (a.size() < b.size())
		a.resize(b.size(), 0);
	for (std::size_t i = 0; i < b.size(); ++i)
		a[i] += b[i];
	return a;
}

/// Exact rational times (2πi)^(-ipi).
struct Coefficient
{
	Rational rational{0};
	int ipi = 0;
};

/// coeff · dt_{i1}∧⋯∧dt_{ik} · t^tpow · tr(w1)∧tr(w2)∧⋯, in that order.
/// The tPolynomial of the canonical form is a single monic monomial; its
/// exponents are `tpow` over t_0..t_r (trailing zeros trimmed).
struct Term
{
	Coefficient coeff;
	std::vector<int> dt;
	std::vector<int> tpow;
	std::vector<TraceWord> traces;

	int trace_degree() const
	{
		int d = 0;
		for (auto const &t : traces)
			d += t.degree();
		return d;
	}
	int degree() const { return static_cast<int>(dt.size()) + trace_degree(); }
};

inline auto term_key(Term const &t) { return std::tie(t.coeff.ipi, t.dt, t.tpow, t.traces); }

/// Brings a single term into canonical order. Returns false when it
/// vanishes.
inline bool canonicalize(Term &t)
{
	if (t.coeff.rational == 0)
		return false;
	int sign = sort_dt(t.dt);
	if (sign == 0)
		return false;
	trim(t.tpow);
	for (auto &tr : t.traces)
	{
		int s = canonicalize_trace(tr.letters);
		if (s == 0)
			return false;
		sign *= s;
	}
	auto &tr = t.traces;
	for (std::size_t i = 1; i < tr.size(); ++i)
		for (std::size_t j = i; j > 0 && tr[j] < tr[j - 1]; --j)
		{
			if (tr[j].degree() % 2 && tr[j - 1].degree() % 2)
				sign = -sign;
			std::swap(tr[j - 1], tr[j]);
		}
	for (std::size_t i = 1; i < tr.size(); ++i)
		if (tr[i] == tr[i - 1] && tr[i].degree() % 2)
			return false;
	if (sign < 0)
		t.coeff.rational = -t.coeff.rational;
	return true;
}

class FormExpr
{
  public:
	FormExpr() = default;
	explicit FormExpr(Context ctx, std::vector<Term> terms = {}) : ctx_(ctx), terms_(std::move(terms))
	{
		normalize_in_place();
	}

	static FormExpr constant(Context ctx, Rational value, int ipi = 0)
	{
		Term t;
		t.coeff = {std::move(value), ipi};
		return FormExpr(ctx, {std::move(t)});
	}

	static FormExpr trace(Context ctx, Word w, Rational c = 1, int ipi = 0)
	{
		Term t;
		t.coeff = {std::move(c), ipi};
		t.traces.push_back({std::move(w)});
		return FormExpr(ctx, {std::move(t)});
	}

	Context const &context() const { return ctx_; }
	std::vector<Term> const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }

	/// Form degree when all terms agree, nullopt for zero or mixed forms.
	std::optional<int> degree() const
	{
		std::optional<int> d;
		for (auto const &t : terms_)
		{
			if (d && *d != t.degree())
				return std::nullopt;
			d = t.degree();
		}
		return d;
	}

	std::size_t longest_word() const
	{
		std::size_t L = 0;
		for (auto const &t : terms_)
			for (auto const &w : t.traces)
				L = std::max(L, w.letters.size());
		return L;
	}

	bool operator==(FormExpr const &o) const
	{
		if (ctx_ != o.ctx_ || terms_.size() != o.terms_.size())
			return false;
		for (std::size_t i = 0; i < terms_.size(); ++i)
			if (term_key(terms_[i]) != term_key(o.terms_[i]) ||
			    terms_[i].coeff.rational != o.terms_[i].coeff.rational)
				return false;
		return true;
	}

	friend FormExpr operator+(FormExpr const &a, FormExpr const &b)
	{
		require_same(a.ctx_, b.ctx_);
		auto terms = a.terms_;
		terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
		return FormExpr(a.ctx_, std::move(terms));
	}
	friend FormExpr operator*(Rational const &c, FormExpr const &a)
	{
		auto terms = a.terms_;
		for (auto &t : terms)
			t.coeff.rational *= c;
		return FormExpr(a.ctx_, std::move(terms));
	}
	friend FormExpr operator-(FormExpr const &a) { return Rational(-1) * a; }
	friend FormExpr operator-(FormExpr const &a, FormExpr const &b) { return a + (-b); }

	/// Multiplies every coefficient by (2πi)^(-k).
	FormExpr with_ipi(int k) const
	{
		auto terms = terms_;
		for (auto &t : terms)
			t.coeff.ipi += k;
		return FormExpr(ctx_, std::move(terms));
	}

  private:
	void normalize_in_place()
	{
		std::vector<Term> kept;
		kept.reserve(terms_.size());
		for (auto &t : terms_)
		{
			for (int i : t.dt)
				if (i < 1 || i > ctx_.simplexDim)
					throw std::out_of_range("dt index " + std::to_string(i) + " outside " + to_string(ctx_));
			if (static_cast<int>(t.tpow.size()) > ctx_.simplexDim + 1)
			{
				auto tp = t.tpow;
				trim(tp);
				if (static_cast<int>(tp.size()) > ctx_.simplexDim + 1)
					throw std::out_of_range("t variable outside " + to_string(ctx_));
			}
			for (auto const &w : t.traces)
				for (auto l : w.letters)
					validate_letter(ctx_, l);
			if (canonicalize(t))
				kept.push_back(std::move(t));
		}
		std::sort(kept.begin(), kept.end(),
		          [](Term const &a, Term const &b) { return term_key(a) < term_key(b); });
		terms_.clear();
		for (auto &t : kept)
		{
			if (!terms_.empty() && term_key(terms_.back()) == term_key(t))
				terms_.back().coeff.rational += t.coeff.rational;
			else
				terms_.push_back(std::move(t));
		}
		std::erase_if(terms_, [](Term const &t) { return t.coeff.rational == 0; });
	}

	Context ctx_;
	std::vector<Term> terms_;
};

/// Canonical form. Construction already normalizes, so this is a copy; it
/// exists as the named entry point and for re-checking idempotence.
inline FormExpr normalize(FormExpr const &a) { return FormExpr(a.context(), a.terms()); }

inline Term multiply(Term const &a, Term const &b)
{
	Term r;
	r.coeff = {a.coeff.rational * b.coeff.rational, a.coeff.ipi + b.coeff.ipi};
	// b's dt block moves left past a's traces.
	if ((a.trace_degree() * static_cast<int>(b.dt.size())) % 2)
		r.coeff.rational = -r.coeff.rational;
	r.dt = a.dt;
	r.dt.insert(r.dt.end(), b.dt.begin(), b.dt.end());
	r.tpow = add_powers(a.tpow, b.tpow);
	r.traces = a.traces;
	r.traces.insert(r.traces.end(), b.traces.begin(), b.traces.end());
	return r;
}

inline FormExpr wedge(FormExpr const &a, FormExpr const &b)
{
	require_same(a.context(), b.context());
	std::vector<Term> out;
	out.reserve(a.size() * b.size());
	for (auto const &x : a.terms())
		for (auto const &y : b.terms())
			out.push_back(multiply(x, y));
	return FormExpr(a.context(), std::move(out));
}

/// The multiplicative unit 1 in a context.
inline FormExpr unit(Context ctx) { return FormExpr::constant(ctx, 1); }

// ---------------------------------------------------------------------------
// d on words, scalars and terms

/// A signed linear combination of words.
using WordSum = std::vector<std::pair<int, Word>>;

inline WordSum d_letter(Letter l)
{
	switch (l.kind)
	{
	case LetterKind::Var: return {{1, {Letter{l.family, LetterKind::Differential, l.index}}}};
	case LetterKind::Inverse:
		return {{-1, {l, Letter{l.family, LetterKind::Differential, l.index}, l}}};
	default: return {};
	}
}

/// Graded Leibniz expansion of d(w).
inline WordSum d_word(Word const &w)
{
	WordSum out;
	int before = 0;
	for (std::size_t k = 0; k < w.size(); ++k)
	{
		for (auto const &[s, dl] : d_letter(w[k]))
		{
			Word nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
			nw.insert(nw.end(), dl.begin(), dl.end());
			nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(k) + 1, w.end());
			out.emplace_back(before % 2 ? -s : s, std::move(nw));
		}
		before += w[k].degree();
	}
	return out;
}

/// d(t^a) on Δʳ as (coefficient, new exponents, dt index) triples, with
/// dt_0 = -(dt_1 + ⋯ + dt_r).
struct ScalarDiff
{
	int coeff;
	std::vector<int> tpow;
	int dt;
};

inline std::vector<ScalarDiff> d_tmonomial(std::vector<int> const &tpow, int simplexDim)
{
	std::vector<ScalarDiff> out;
	for (std::size_t i = 0; i < tpow.size(); ++i)
	{
		if (tpow[i] == 0)
			continue;
		auto np = tpow;
		--np[i];
		if (i == 0)
			for (int j = 1; j <= simplexDim; ++j)
				out.push_back({-tpow[i], np, j});
		else
			out.push_back({tpow[i], np, static_cast<int>(i)});
	}
	return out;
}

inline FormExpr exterior_derivative(FormExpr const &a)
{
	std::vector<Term> out;
	int const r = a.context().simplexDim;
	for (auto const &t : a.terms())
	{
		for (auto const &sd : d_tmonomial(t.tpow, r))
		{
			Term n = t;
			n.coeff.rational *= sd.coeff;
			n.tpow = sd.tpow;
			n.dt.insert(n.dt.begin(), sd.dt);
			out.push_back(std::move(n));
		}
		int const dtSign = t.dt.size() % 2 ? -1 : 1;
		int before = 0;
		for (std::size_t k = 0; k < t.traces.size(); ++k)
		{
			for (auto const &[s, w] : d_word(t.traces[k].letters))
			{
				Term n = t;
				n.traces[k].letters = w;
				int sign = dtSign * s * (before % 2 ? -1 : 1);
				if (sign < 0)
					n.coeff.rational = -n.coeff.rational;
				out.push_back(std::move(n));
			}
			before += t.traces[k].degree();
		}
	}
	return FormExpr(a.context(), std::move(out));
}

// ---------------------------------------------------------------------------
// substitution homomorphisms

/// Maps each source letter index to a word of group letters (no
/// differentials) in the target family.
struct SubstitutionRule
{
	Family source = Family::NG;
	Context target;
	std::map<int, Word> images;
};

inline Word inverse_word(Word const &w)
{
	Word out;
	out.reserve(w.size());
	for (auto it = w.rbegin(); it != w.rend(); ++it)
	{
		auto l = *it;
		if (l.kind == LetterKind::Differential)
			throw SubstitutionError("cannot invert a word containing a differential");
		l.kind = l.kind == LetterKind::Var ? LetterKind::Inverse : LetterKind::Var;
		out.push_back(l);
	}
	return out;
}

inline WordSum substitute_letter(Letter l, SubstitutionRule const &rule)
{
	auto it = l.family == rule.source ? rule.images.find(l.index) : rule.images.end();
	if (it == rule.images.end())
		throw SubstitutionError("substitution rule has no image for letter " + letter_name(l) + " " +
		                        std::to_string(l.index));
	switch (l.kind)
	{
	case LetterKind::Var: return {{1, it->second}};
	case LetterKind::Inverse: return {{1, inverse_word(it->second)}};
	default: return d_word(it->second);
	}
}

inline WordSum substitute_word(Word const &w, SubstitutionRule const &rule)
{
	WordSum acc{{1, {}}};
	for (auto l : w)
	{
		auto img = substitute_letter(l, rule);
		WordSum next;
		next.reserve(acc.size() * img.size());
		for (auto const &[s1, w1] : acc)
			for (auto const &[s2, w2] : img)
				next.emplace_back(s1 * s2, free_reduce(concat(w1, w2)));
		acc = std::move(next);
	}
	return acc;
}

inline FormExpr substitute(FormExpr const &a, SubstitutionRule const &rule)
{
	if (a.context().family != rule.source)
		throw ContextMismatch("substitution source family does not match the form");
	if (a.context().simplexDim != rule.target.simplexDim)
		throw ContextMismatch("substitution must preserve the simplex factor");
	std::vector<Term> out;
	for (auto const &t : a.terms())
	{
		std::vector<Term> acc;
		Term base = t;
		base.traces.clear();
		acc.push_back(std::move(base));
		for (auto const &tr : t.traces)
		{
			auto img = substitute_word(tr.letters, rule);
			std::vector<Term> next;
			next.reserve(acc.size() * img.size());
			for (auto const &partial : acc)
				for (auto const &[s, w] : img)
				{
					Term n = partial;
					if (s < 0)
						n.coeff.rational = -n.coeff.rational;
					n.traces.push_back({w});
					next.push_back(std::move(n));
				}
			acc = std::move(next);
		}
		out.insert(out.end(), std::make_move_iterator(acc.begin()), std::make_move_iterator(acc.end()));
	}
	return FormExpr(rule.target, std::move(out));
}

inline SubstitutionRule identity_rule(Context ctx)
{
	SubstitutionRule r{ctx.family, ctx, {}};
	for (int i = ctx.min_index(); i <= ctx.max_index(); ++i)
		r.images[i] = {Letter{ctx.family, LetterKind::Var, i}};
	return r;
}

// ---------------------------------------------------------------------------
// matrix-valued forms (untraced), used to build curvatures and R_ij

struct MatrixTerm
{
	Rational coeff{0};
	std::vector<int> dt;
	std::vector<int> tpow;
	Word word; // empty word is the identity matrix
};

class MatrixForm
{
  public:
	MatrixForm() = default;
	explicit MatrixForm(Context ctx, std::vector<MatrixTerm> terms = {}) : ctx_(ctx), terms_(std::move(terms))
	{
		normalize_in_place();
	}

	static MatrixForm word(Context ctx, Word w, Rational c = 1)
	{
		return MatrixForm(ctx, {MatrixTerm{std::move(c), {}, {}, std::move(w)}});
	}

	Context const &context() const { return ctx_; }
	std::vector<MatrixTerm> const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	friend MatrixForm operator+(MatrixForm const &a, MatrixForm const &b)
	{
		require_same(a.ctx_, b.ctx_);
		auto t = a.terms_;
		t.insert(t.end(), b.terms_.begin(), b.terms_.end());
		return MatrixForm(a.ctx_, std::move(t));
	}
	friend MatrixForm operator*(Rational const &c, MatrixForm const &a)
	{
		auto t = a.terms_;
		for (auto &x : t)
			x.coeff *= c;
		return MatrixForm(a.ctx_, std::move(t));
	}
	friend MatrixForm operator-(MatrixForm const &a, MatrixForm const &b) { return a + Rational(-1) * b; }

	/// Multiplies by a monic t-monomial (even degree, commutes with everything).
	MatrixForm times_t(std::vector<int> const &tpow) const
	{
		auto t = terms_;
		for (auto &x : t)
			x.tpow = add_powers(x.tpow, tpow);
		return MatrixForm(ctx_, std::move(t));
	}

	/// Multiplies on the left by dt_i.
	MatrixForm times_dt(int i) const
	{
		auto t = terms_;
		for (auto &x : t)
			x.dt.insert(x.dt.begin(), i);
		return MatrixForm(ctx_, std::move(t));
	}

	friend MatrixForm operator*(MatrixForm const &a, MatrixForm const &b)
	{
		require_same(a.ctx_, b.ctx_);
		std::vector<MatrixTerm> out;
		out.reserve(a.terms_.size() * b.terms_.size());
		for (auto const &x : a.terms_)
			for (auto const &y : b.terms_)
			{
				MatrixTerm r;
				r.coeff = x.coeff * y.coeff;
				if ((simpchern::degree(x.word) * static_cast<int>(y.dt.size())) % 2)
					r.coeff = -r.coeff;
				r.dt = x.dt;
				r.dt.insert(r.dt.end(), y.dt.begin(), y.dt.end());
				r.tpow = add_powers(x.tpow, y.tpow);
				r.word = concat(x.word, y.word);
				out.push_back(std::move(r));
			}
		return MatrixForm(a.ctx_, std::move(out));
	}

	MatrixForm pow(int k) const
	{
		MatrixForm r = MatrixForm::word(ctx_, {});
		for (int i = 0; i < k; ++i)
			r = r * *this;
		return r;
	}

	FormExpr trace() const
	{
		std::vector<Term> out;
		out.reserve(terms_.size());
		for (auto const &m : terms_)
		{
			Term t;
			t.coeff = {m.coeff, 0};
			t.dt = m.dt;
			t.tpow = m.tpow;
			t.traces.push_back({m.word});
			out.push_back(std::move(t));
		}
		return FormExpr(ctx_, std::move(out));
	}

  private:
	void normalize_in_place()
	{
		std::vector<MatrixTerm> kept;
		for (auto &m : terms_)
		{
			if (m.coeff == 0)
				continue;
			int s = sort_dt(m.dt);
			if (s == 0)
				continue;
			if (s < 0)
				m.coeff = -m.coeff;
			trim(m.tpow);
			for (auto l : m.word)
				validate_letter(ctx_, l);
			m.word = free_reduce(m.word);
			kept.push_back(std::move(m));
		}
		auto key = [](MatrixTerm const &m) { return std::tie(m.dt, m.tpow, m.word); };
		std::sort(kept.begin(), kept.end(), [&](auto const &a, auto const &b) { return key(a) < key(b); });
		terms_.clear();
		for (auto &m : kept)
		{
			if (!terms_.empty() && key(terms_.back()) == key(m))
				terms_.back().coeff += m.coeff;
			else
				terms_.push_back(std::move(m));
		}
		std::erase_if(terms_, [](MatrixTerm const &m) { return m.coeff == 0; });
	}

	Context ctx_;
	std::vector<MatrixTerm> terms_;
};

inline MatrixForm exterior_derivative(MatrixForm const &a)
{
	std::vector<MatrixTerm> out;
	for (auto const &m : a.terms())
	{
		for (auto const &sd : d_tmonomial(m.tpow, a.context().simplexDim))
		{
			MatrixTerm n = m;
			n.coeff *= sd.coeff;
			n.tpow = sd.tpow;
			n.dt.insert(n.dt.begin(), sd.dt);
			out.push_back(std::move(n));
		}
		int const dtSign = m.dt.size() % 2 ? -1 : 1;
		for (auto const &[s, w] : d_word(m.word))
		{
			MatrixTerm n = m;
			n.word = w;
			if (dtSign * s < 0)
				n.coeff = -n.coeff;
			out.push_back(std::move(n));
		}
	}
	return MatrixForm(a.context(), std::move(out));
}

} // namespace simpchern
