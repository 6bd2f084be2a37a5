#pragma once

// Face-map pullbacks on NG and N̄G, the γ-pullback, and the double-complex
// differentials d' = Σ(-1)^i ε_i^* and d'' = (-1)^p d.

#include <map>

#include <nlohmann/json.hpp>

#include "form_algebra.hpp"
#include "serialize.hpp"

namespace simpchern {

/// Rule realizing ε_i^*: forms on level q-1 → forms on level q.
inline SubstitutionRule face_rule(Family family, int q, int i, int simplexDim = 0)
{
	if (q < 1 || i < 0 || i > q)
		throw std::out_of_range("face index " + std::to_string(i) + " out of range for level " + std::to_string(q));
	SubstitutionRule r{family, Context{family, q, simplexDim}, {}};
	if (family == Family::NG)
	{
		for (int j = 1; j <= q - 1; ++j)
		{
			if (j < i)
				r.images[j] = {Letter::h(j)};
			else if (j == i)
				r.images[j] = {Letter::h(j), Letter::h(j + 1)};
			else
				r.images[j] = {Letter::h(j + 1)};
		}
	}
	else
	{
		for (int j = 0; j <= q - 1; ++j)
			r.images[j] = {Letter::g(j < i ? j : j + 1)};
	}
	return r;
}

inline FormExpr face_pullback(int i, FormExpr const &a)
{
	auto const &c = a.context();
	return substitute(a, face_rule(c.family, c.level + 1, i, c.simplexDim));
}

/// γ(g_0..g_q) = (g_0 g_1⁻¹, …, g_{q-1} g_q⁻¹).
inline SubstitutionRule gamma_rule(int q, int simplexDim = 0)
{
	SubstitutionRule r{Family::NG, Context{Family::NbarG, q, simplexDim}, {}};
	for (int j = 1; j <= q; ++j)
		r.images[j] = {Letter::g(j - 1), Letter::ginv(j)};
	return r;
}

inline FormExpr gamma_pullback(FormExpr const &a)
{
	if (a.context().family != Family::NG)
		throw ContextMismatch("gamma pullback expects a form on NG");
	return substitute(a, gamma_rule(a.context().level, a.context().simplexDim));
}

inline FormExpr d_prime(FormExpr const &a)
{
	int const q = a.context().level + 1;
	Context target = a.context();
	target.level = q;
	FormExpr sum(target);
	for (int i = 0; i <= q; ++i)
	{
		auto f = face_pullback(i, a);
		sum = i % 2 ? sum - f : sum + f;
	}
	return sum;
}

inline FormExpr d_second(FormExpr const &a)
{
	auto d = exterior_derivative(a);
	return a.context().level % 2 ? -d : d;
}

/// One total-degree cochain of the double complex, indexed by simplicial
/// level. Missing levels are zero.
class CochainSet
{
  public:
	CochainSet(Family family, int totalDegree) : family_(family), totalDegree_(totalDegree) {}

	Family family() const { return family_; }
	int total_degree() const { return totalDegree_; }
	std::map<int, FormExpr> const &components() const { return components_; }

	void set(int level, FormExpr f)
	{
		if (f.context().family != family_ || f.context().level != level || f.context().simplexDim != 0)
			throw ContextMismatch("component context does not match level " + std::to_string(level));
		if (auto d = f.degree(); !f.is_zero() && d != totalDegree_ - level)
			throw std::invalid_argument("component at level " + std::to_string(level) + " must have form degree " +
			                            std::to_string(totalDegree_ - level));
		if (f.is_zero())
			components_.erase(level);
		else
			components_.insert_or_assign(level, std::move(f));
	}

	FormExpr at(int level) const
	{
		auto it = components_.find(level);
		return it == components_.end() ? FormExpr(Context{family_, level, 0}) : it->second;
	}

	bool is_zero() const { return components_.empty(); }

  private:
	Family family_;
	int totalDegree_;
	std::map<int, FormExpr> components_;
};

inline CochainSet total_differential(CochainSet const &c)
{
	CochainSet out(c.family(), c.total_degree() + 1);
	std::map<int, FormExpr> acc;
	auto add = [&](FormExpr f) {
		int lvl = f.context().level;
		auto it = acc.find(lvl);
		if (it == acc.end())
			acc.emplace(lvl, std::move(f));
		else
			it->second = it->second + f;
	};
	for (auto const &[lvl, f] : c.components())
	{
		add(d_prime(f));
		add(d_second(f));
	}
	for (auto &[lvl, f] : acc)
		out.set(lvl, std::move(f));
	return out;
}

/// The two pieces of D(c) at `level`: d'(c_{level-1}) and d''(c_level).
inline std::pair<FormExpr, FormExpr> total_differential_parts(CochainSet const &c, int level)
{
	Context ctx{c.family(), level, 0};
	FormExpr prime = level >= 1 && c.components().contains(level - 1) ? d_prime(c.at(level - 1)) : FormExpr(ctx);
	return {prime, d_second(c.at(level))};
}

inline nlohmann::json to_json(CochainSet const &c)
{
	nlohmann::json comps = nlohmann::json::object();
	for (auto const &[lvl, f] : c.components())
		comps[std::to_string(lvl)] = to_sexpr(f);
	return {{"family", family_name(c.family())}, {"totalDegree", c.total_degree()}, {"components", comps}};
}

inline CochainSet cochain_from_json(nlohmann::json const &j)
{
	try
	{
		auto fam = j.at("family").get<std::string>();
		CochainSet c(fam == "NG" ? Family::NG : Family::NbarG, j.at("totalDegree").get<int>());
		for (auto const &[k, v] : j.at("components").items())
			c.set(std::stoi(k), parse_sexpr(v.get<std::string>()));
		return c;
	}
	catch (nlohmann::json::exception const &e)
	{
		throw ParseError(std::string("malformed cochain JSON: ") + e.what());
	}
}

} // namespace simpchern
