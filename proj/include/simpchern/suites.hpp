#pragma once

// Named verification suites shared by the command-line tool and the tests.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evaluator.hpp"
#include "generator.hpp"
#include "serialize.hpp"
#include "simplicial.hpp"

namespace simpchern {

struct CheckResult
{
	std::string name;
	bool pass = false;
	bool gated = true;
	nlohmann::json detail;
};

struct SuiteResult
{
	std::string suite;
	std::vector<CheckResult> checks;

	bool pass() const
	{
		for (auto const &c : checks)
			if (c.gated && !c.pass)
				return false;
		return true;
	}

	void add(Report const &r, bool gated = true) { checks.push_back({r.check, r.pass, gated, r.to_json()}); }

	void add_symbolic(std::string name, FormExpr const &a, FormExpr const &b)
	{
		bool eq = a == b;
		nlohmann::json d{{"check", name}, {"context", to_string(a.context())}, {"symbolic", true},
		                 {"terms", {a.size(), b.size()}}, {"pass", eq}};
		if (!eq)
			d["difference"] = to_sexpr(a - b);
		checks.push_back({std::move(name), eq, true, std::move(d)});
	}

	nlohmann::json to_json() const
	{
		nlohmann::json arr = nlohmann::json::array();
		for (auto const &c : checks)
		{
			auto d = c.detail;
			d["gated"] = c.gated;
			arr.push_back(std::move(d));
		}
		return {{"suite", suite}, {"schema", 1}, {"pass", pass()}, {"checks", std::move(arr)}};
	}
};

inline std::string default_fixture_dir()
{
#ifdef SIMPCHERN_FIXTURE_DIR
	return SIMPCHERN_FIXTURE_DIR;
#else
	return "fixtures";
#endif
}

inline FormExpr load_fixture(std::string const &dir, std::string const &rel)
{
	return read_sexpr_file((std::filesystem::path(dir) / rel).string());
}

/// d'(ω_{m}) + d''(ω_{m+1}) = 0 at every level, numerically.
inline SuiteResult suite_cocycle(CochainSet const &c, NumericConfig const &cfg, std::string const &label)
{
	SuiteResult out{"cocycle", {}};
	int top = 0;
	for (auto const &[lvl, f] : c.components())
		top = std::max(top, lvl);
	for (int lvl = 1; lvl <= top + 1; ++lvl)
	{
		auto [a, b] = total_differential_parts(c, lvl);
		out.add(equal_numeric(a, -b, cfg, label + ": D at level " + std::to_string(lvl)));
	}
	return out;
}

inline SuiteResult suite_cocycle(int p, NumericConfig const &cfg)
{
	return suite_cocycle(bss_cocycle(p), cfg, "ch" + std::to_string(p));
}

/// γ*(ω) against the N̄G construction, and evaluation of γ* against the
/// pushed-forward point.
inline SuiteResult suite_gamma(int p, NumericConfig const &cfg)
{
	check_envelope(p);
	SuiteResult out{"gamma", {}};
	for (int q = 0; q <= p - 1; ++q)
	{
		auto a = bss_component(p, q);
		auto g = gamma_pullback(a);
		out.add(equal_numeric(g, bss_bar_component(p, q), cfg,
		                      "gamma* C(" + std::to_string(p) + "," + std::to_string(q) + ") vs bar"));
		Report rep{"gamma pushforward C(" + std::to_string(p) + "," + std::to_string(q) + ")", g.context(),
		           {cfg.n}, cfg.samples, 0.0, cfg.tolerance, true};
		for (int s = 0; s < cfg.samples; ++s)
		{
			auto pt = sample_point(g.context(), *g.degree(), cfg, static_cast<std::uint64_t>(s), cfg.n);
			rep.maxResidual = std::max(rep.maxResidual, relative_residual(evaluate(g, pt), evaluate(a, apply_gamma(pt))));
		}
		rep.pass = rep.maxResidual < rep.threshold;
		out.add(rep);
	}
	return out;
}

/// First-principles curvature expansion against both generated forms.
inline SuiteResult suite_oracle(int p, NumericConfig const &cfg)
{
	if (p < 1 || p > 3)
		throw EnvelopeError("the oracle suite supports 1 <= p <= 3");
	SuiteResult out{"oracle", {}};
	for (int q = 0; q <= p - 1; ++q)
	{
		std::string tag = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
		auto orc = integrate_simplex(curvature_expansion(p, q));
		out.add(equal_numeric(orc, gamma_pullback(bss_component(p, q)), cfg, "oracle vs gamma* C" + tag));
		out.add(equal_numeric(orc, bss_bar_component(p, q), cfg, "oracle vs bar C" + tag));
	}
	return out;
}

inline SuiteResult suite_corollaries(int p)
{
	check_envelope(p);
	SuiteResult out{"corollaries", {}};
	out.add_symbolic("level-one reduction p=" + std::to_string(p), bss_component(p, p - 1), cor_level_one(p));
	if (p <= 3)
		out.add_symbolic("top-level permutation sum p=" + std::to_string(p), bss_component(p, 0), cor_top_level(p));
	return out;
}

/// Generated components against the shipped fixtures (p = 2 or 3).
inline SuiteResult suite_examples(int p, std::string const &dir)
{
	SuiteResult out{"examples", {}};
	if (p == 2)
	{
		out.add_symbolic("ch2 C13", bss_component(2, 1), load_fixture(dir, "ch2/C13.sexpr"));
		out.add_symbolic("ch2 C22", bss_component(2, 0), load_fixture(dir, "ch2/C22.sexpr"));
	}
	else if (p == 3)
	{
		out.add_symbolic("ch3 C15", bss_component(3, 2), load_fixture(dir, "ch3/C15.sexpr"));
		out.add_symbolic("ch3 C24", bss_component(3, 1), load_fixture(dir, "ch3/C24.sexpr"));
		out.add_symbolic("ch3 C33", bss_component(3, 0), load_fixture(dir, "ch3/C33.sexpr"));
	}
	else
		throw std::invalid_argument("worked examples exist for p = 2 and p = 3 only");
	return out;
}

/// Values of the tr·tr term of Tc_{1,2} at special-unitary samples.
inline Report su_trace_product_vanishing(NumericConfig cfg, double tolerance = 1e-10)
{
	cfg.mode = SampleMode::Special;
	Context one{Family::NbarG, 1, 0};
	Term t;
	t.coeff = {Rational(-1, 2), 2};
	t.traces = {{maurer_cartan(0)}, {maurer_cartan(1)}};
	FormExpr term(one, {t});
	Report rep{"SU(n) vanishing of tr*tr term", one, {cfg.n}, cfg.samples, 0.0, tolerance, true};
	for (int s = 0; s < cfg.samples; ++s)
	{
		auto pt = sample_point(one, 2, cfg, static_cast<std::uint64_t>(s), cfg.n);
		rep.maxResidual = std::max(rep.maxResidual, std::abs(evaluate(term, pt)));
	}
	rep.pass = rep.maxResidual < tolerance;
	return rep;
}

/// c₂ and its Chern–Simons form: fixtures, transgression, SU(n) vanishing,
/// the cocycle condition, and the reported-only comparison D(Tc) vs γ*c₂.
inline SuiteResult suite_cs(NumericConfig const &cfg, std::string const &dir)
{
	SuiteResult out{"cs", {}};
	auto c2 = c2_cocycle();
	auto cs = chern_simons_c2();
	out.add_symbolic("c2 level 1 fixture", c2.at(1), load_fixture(dir, "c2/c13.sexpr"));
	out.add_symbolic("c2 level 2 fixture", c2.at(2), load_fixture(dir, "c2/c22.sexpr"));
	out.add_symbolic("Chern-Simons level 0 fixture", cs.at(0), load_fixture(dir, "cs/Tc03.sexpr"));
	out.add_symbolic("Chern-Simons level 1 fixture", cs.at(1), load_fixture(dir, "cs/Tc12.sexpr"));
	out.add_symbolic("transgression level 0", transgression_TP(2, 0), cs.at(0));
	out.add_symbolic("transgression level 1", transgression_TP(2, 1), cs.at(1));

	// c₂ = ½ ch₁∪ch₁ − ch₂ as cochains
	auto ch1 = bss_component(1, 0);
	auto ch2 = bss_cocycle(2);
	out.add(equal_numeric(c2.at(1), -ch2.at(1), cfg, "c2 = ch1^2/2 - ch2 at level 1"));
	out.add(equal_numeric(c2.at(2), Rational(1, 2) * cup(ch1, ch1) - ch2.at(2), cfg, "c2 = ch1^2/2 - ch2 at level 2"));

	for (auto &c : suite_cocycle(c2, cfg, "c2").checks)
		out.checks.push_back(std::move(c));
	out.add(su_trace_product_vanishing(cfg));

	// D(Tc) against γ*c₂ (not gated)
	auto gamma_c2 = [&](int lvl) { return gamma_pullback(c2.at(lvl)); };
	for (int lvl = 1; lvl <= 2; ++lvl)
	{
		auto [a, b] = total_differential_parts(cs, lvl);
		out.add(equal_numeric(a + b, gamma_c2(lvl), cfg, "D(Tc) vs gamma* c2 at level " + std::to_string(lvl)), false);
	}
	return out;
}

} // namespace simpchern
