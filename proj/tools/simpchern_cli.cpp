// simpchern: emit cocycles, run verification suites, check the local
// truncated-complex identity, and evaluate Dirichlet integrals.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include <simpchern/simpchern.hpp>

namespace fs = std::filesystem;
using namespace simpchern;
using nlohmann::json;

namespace {

struct Common
{
	std::uint64_t seed = 20240531;
	bool seedGiven = false;
	int n = 3;
	int samples = 20;
	double tol = -1;
	int quadOrder = 5;
	double fdStep = 1e-4;
	std::string out;
};

std::uint64_t resolve_seed(Common const &c)
{
	if (c.seedGiven)
		return c.seed;
	if (char const *env = std::getenv("SIMPCHERN_SEED"))
		return std::stoull(env);
	return c.seed;
}

NumericConfig numeric(Common const &c, double defaultTol)
{
	NumericConfig cfg;
	cfg.n = c.n;
	cfg.samples = c.samples;
	cfg.seed = resolve_seed(c);
	cfg.tolerance = c.tol > 0 ? c.tol : defaultTol;
	cfg.fdStep = c.fdStep;
	cfg.validate();
	return cfg;
}

/// 64-bit FNV-1a over the sorted "coefficient:ipi" strings.
std::string coefficient_checksum(FormExpr const &a)
{
	std::uint64_t h = 1469598103934665603ull;
	for (auto const &t : a.terms())
		for (char ch : rational_string(t.coeff.rational) + ":" + std::to_string(t.coeff.ipi) + ";")
		{
			h ^= static_cast<unsigned char>(ch);
			h *= 1099511628211ull;
		}
	std::ostringstream s;
	s << std::hex << std::setw(16) << std::setfill('0') << h;
	return s.str();
}

void write_or_print(std::string const &dir, std::string const &name, std::string const &body)
{
	if (dir.empty())
	{
		std::cout << body << "\n";
		return;
	}
	fs::create_directories(dir);
	std::ofstream(fs::path(dir) / name) << body << "\n";
}

json manifest_base(std::string const &command, json params, Common const &c)
{
	return {{"command", command}, {"parameters", std::move(params)}, {"seed", resolve_seed(c)},
	        {"toolVersion", SIMPCHERN_VERSION}};
}

int run_emit(int p, int q, std::string const &family, std::string const &fmt, Common const &c)
{
	auto t0 = std::chrono::steady_clock::now();
	check_envelope(p);
	std::vector<int> qs;
	if (q >= 0)
	{
		if (q > p - 1)
			throw std::out_of_range("q must satisfy 0 <= q <= p-1");
		qs.push_back(q);
	}
	else
		for (int k = p - 1; k >= 0; --k)
			qs.push_back(k);
	json comps = json::array();
	for (int k : qs)
	{
		FormExpr f = family == "NbarG" ? bss_bar_component(p, k) : bss_component(p, k);
		std::string ext = fmt == "json" ? "json" : fmt == "latex" ? "tex" : "sexpr";
		std::string body = fmt == "json" ? to_json(f).dump(2) : fmt == "latex" ? to_latex(f) : to_sexpr(f);
		std::string name = "C_" + std::to_string(p) + "_" + std::to_string(k) + "." + ext;
		write_or_print(c.out, name, body);
		json coeffs = json::array();
		for (auto const &t : f.terms())
			coeffs.push_back(rational_string(t.coeff.rational));
		comps.push_back({{"p", p}, {"q", k}, {"level", p - k}, {"file", name}, {"terms", f.size()},
		                 {"coefficients", coeffs}, {"checksum", coefficient_checksum(f)}});
		std::cerr << "C(" << p << "," << k << "): " << f.size() << " terms, coefficients";
		for (auto const &x : coeffs)
			std::cerr << " " << x.get<std::string>();
		std::cerr << "\n";
	}
	if (!c.out.empty())
	{
		auto m = manifest_base("emit", {{"p", p}, {"q", q}, {"family", family}, {"fmt", fmt}}, c);
		m["components"] = comps;
		m["timing"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		m["outcome"] = "ok";
		std::ofstream(fs::path(c.out) / "manifest.json") << m.dump(2) << "\n";
	}
	return 0;
}

int emit_report(json report, std::string const &command, json params, Common const &c, bool pass)
{
	auto m = manifest_base(command, std::move(params), c);
	m["report"] = std::move(report);
	m["outcome"] = pass ? "pass" : "fail";
	if (!c.out.empty())
	{
		fs::create_directories(c.out);
		std::ofstream(fs::path(c.out) / "report.json") << m.dump(2) << "\n";
	}
	std::cout << m.dump(2) << "\n";
	return pass ? 0 : 1;
}

int run_verify(int p, std::string const &suite, std::string const &fixtures, Common const &c)
{
	auto cfg = numeric(c, 1e-9);
	SuiteResult r;
	if (suite == "cocycle")
		r = suite_cocycle(p, cfg);
	else if (suite == "gamma")
		r = suite_gamma(p, cfg);
	else if (suite == "oracle")
		r = suite_oracle(p, cfg);
	else if (suite == "corollaries")
		r = suite_corollaries(p);
	else if (suite == "cs")
		r = suite_cs(cfg, fixtures);
	else
		r = suite_examples(p, fixtures);
	json params{{"p", p}, {"suite", suite}, {"n", cfg.n}, {"samples", cfg.samples}, {"tol", cfg.tolerance}};
	return emit_report(r.to_json(), "verify", params, c, r.pass());
}

int run_brylinski(int p, int l, bool refine, double radius, Common const &c)
{
	if (p != 2 && p != 3)
		throw EnvelopeError("brylinski supports p = 2 (and p = 3 as a stretch setting)");
	auto cfg = numeric(c, 1e-4);
	ContractionConfig cc;
	cc.radius = radius;
	cc.quadratureOrder = c.quadOrder;
	cc.fdStep = c.fdStep;
	double const tol = c.tol > 0 ? c.tol : (p == 2 ? 1e-4 : 1e-3);
	ChernCocycle omega(p);
	std::vector<int> ls;
	if (l >= 0)
		ls.push_back(l);
	else
		for (int k = 0; k <= 2 * p - 1; ++k)
			ls.push_back(k);
	json rows = json::array();
	bool pass = true;
	for (int k : ls)
	{
		try
		{
			if (refine)
			{
				auto reps = refine_transfer(omega, k, cc, cfg, tol);
				json table = json::array();
				bool mono = true;
				for (std::size_t i = 0; i < reps.size(); ++i)
				{
					table.push_back(reps[i].to_json());
					if (i > 0 && !(reps[i].maxResidual < reps[i - 1].maxResidual))
						mono = false;
				}
				bool ok = mono && reps.back().pass;
				pass = pass && ok;
				rows.push_back({{"l", k}, {"levels", table}, {"monotone", mono}, {"pass", ok}});
			}
			else
			{
				auto rep = verify_transfer(omega, k, cc, cfg, tol);
				pass = pass && rep.pass;
				rows.push_back(rep.to_json());
			}
		}
		catch (DomainError const &e)
		{
			throw DomainError(std::string(e.what()) + " (seed " + std::to_string(cfg.seed) + ", l = " +
			                  std::to_string(k) + ")");
		}
	}
	json params{{"p", p}, {"l", l}, {"refine", refine}, {"radius", radius}, {"quadOrder", cc.quadratureOrder},
	            {"fdStep", cc.fdStep}, {"samples", cfg.samples}, {"n", cfg.n}};
	return emit_report(rows, "brylinski", params, c, pass);
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Chern-character cocycles in the simplicial de Rham complex"};
	app.require_subcommand(1);
	app.set_version_flag("--version", std::string(SIMPCHERN_VERSION));
	Common c;

	auto add_common = [&](CLI::App *sub) {
		sub->add_option("--seed", c.seed, "random seed (fallback: SIMPCHERN_SEED)")
		    ->each([&](std::string const &) { c.seedGiven = true; });
		sub->add_option("--n", c.n, "matrix size")->check(CLI::Range(2, 64));
		sub->add_option("--samples", c.samples, "number of sample points")->check(CLI::PositiveNumber);
		sub->add_option("--tol", c.tol, "relative tolerance");
		sub->add_option("--quad-order", c.quadOrder, "simplex quadrature degree (odd)");
		sub->add_option("--fd-step", c.fdStep, "finite-difference step");
		sub->add_option("--out", c.out, "output directory");
	};

	int p = 2, q = -1, l = -1;
	std::string family = "NG", fmt = "sexpr", suite = "examples", fixtures = default_fixture_dir();
	bool refine = false;
	double radius = 0.1;

	auto *emit = app.add_subcommand("emit", "generate cocycle components");
	emit->add_option("--p", p, "Chern degree")->required();
	emit->add_option("--q", q, "single component C(p,q)");
	emit->add_option("--family", family)->check(CLI::IsMember({"NG", "NbarG"}));
	emit->add_option("--fmt", fmt)->check(CLI::IsMember({"sexpr", "json", "latex"}));
	add_common(emit);

	auto *verify = app.add_subcommand("verify", "run a verification suite");
	verify->add_option("--p", p, "Chern degree");
	verify->add_option("--suite", suite)
	    ->check(CLI::IsMember({"cocycle", "gamma", "oracle", "corollaries", "cs", "examples"}));
	verify->add_option("--fixtures", fixtures, "fixture directory");
	add_common(verify);

	auto *bry = app.add_subcommand("brylinski", "check the truncated-complex identity for eta");
	bry->add_option("--p", p, "Chern degree (2; 3 with relaxed tolerance)");
	bry->add_option("--l", l, "single component index");
	bry->add_flag("--refine", refine, "three-level convergence table");
	bry->add_option("--radius", radius, "neighbourhood radius around 1");
	add_common(bry);

	std::vector<int> exps;
	auto *dir = app.add_subcommand("dirichlet", "exact simplex integral of a barycentric monomial");
	dir->add_option("exponents", exps, "b_0 ... b_r")->required()->check(CLI::NonNegativeNumber);

	CLI11_PARSE(app, argc, argv);

	try
	{
		if (*emit)
			return run_emit(p, q, family, fmt, c);
		if (*verify)
			return run_verify(p, suite, fixtures, c);
		if (*bry)
			return run_brylinski(p, l, refine, radius, c);
		if (*dir)
		{
			std::cout << dirichlet(std::span<int const>(exps)) << "\n";
			return 0;
		}
	}
	catch (EnvelopeError const &e)
	{
		std::cerr << "envelope error: " << e.what() << "\n";
		return 2;
	}
	catch (std::exception const &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 3;
	}
	return 0;
}
