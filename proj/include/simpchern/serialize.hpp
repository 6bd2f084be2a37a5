#pragma once

// Text formats for FormExpr: S-expressions and JSON (both round-trip on
// normal forms) and a one-way LaTeX rendering.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "form_algebra.hpp"

namespace simpchern {

class ParseError : public std::runtime_error
{
  public:
	using std::runtime_error::runtime_error;
};

inline std::string rational_string(Rational const &r)
{
	return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(std::string_view s)
{
	try
	{
		auto slash = s.find('/');
		if (slash == std::string_view::npos)
			return Rational(BigInt(std::string(s)));
		BigInt den(std::string(s.substr(slash + 1)));
		if (den == 0)
			throw ParseError("zero denominator in '" + std::string(s) + "'");
		return Rational(BigInt(std::string(s.substr(0, slash)))) / Rational(den);
	}
	catch (ParseError const &)
	{
		throw;
	}
	catch (std::exception const &)
	{
		throw ParseError("bad rational '" + std::string(s) + "'");
	}
}

// ---------------------------------------------------------------------------
// S-expressions

namespace sexpr {

struct Node
{
	std::string atom;
	std::vector<Node> children;
	bool is_list = false;

	std::string const &head() const
	{
		if (!is_list || children.empty() || children[0].is_list)
			throw ParseError("expected a list with an atom head");
		return children[0].atom;
	}
};

inline Node parse_tree(std::string_view text)
{
	std::size_t pos = 0;
	auto skip = [&] {
		while (pos < text.size())
		{
			if (std::isspace(static_cast<unsigned char>(text[pos])))
				++pos;
			else if (text[pos] == ';') // comment to end of line
				while (pos < text.size() && text[pos] != '\n')
					++pos;
			else
				break;
		}
	};
	auto rec = [&](auto &self) -> Node {
		skip();
		if (pos >= text.size())
			throw ParseError("unexpected end of input");
		if (text[pos] == ')')
			throw ParseError("unexpected ')'");
		Node n;
		if (text[pos] == '(')
		{
			++pos;
			n.is_list = true;
			for (;;)
			{
				skip();
				if (pos >= text.size())
					throw ParseError("unterminated list");
				if (text[pos] == ')')
				{
					++pos;
					return n;
				}
				n.children.push_back(self(self));
			}
		}
		std::size_t start = pos;
		while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
		       text[pos] != ')')
			++pos;
		n.atom = std::string(text.substr(start, pos - start));
		return n;
	};
	Node root = rec(rec);
	skip();
	if (pos != text.size())
		throw ParseError("trailing input after expression");
	return root;
}

inline int to_int(Node const &n)
{
	if (n.is_list)
		throw ParseError("expected integer");
	try
	{
		std::size_t used = 0;
		int v = std::stoi(n.atom, &used);
		if (used != n.atom.size())
			throw ParseError("bad integer '" + n.atom + "'");
		return v;
	}
	catch (std::logic_error const &)
	{
		throw ParseError("bad integer '" + n.atom + "'");
	}
}

inline Letter parse_letter(Node const &n)
{
	if (!n.is_list || n.children.size() != 2)
		throw ParseError("letter must be (kind index)");
	auto const &k = n.head();
	int i = to_int(n.children[1]);
	if (k == "h") return Letter::h(i);
	if (k == "inv") return Letter::hinv(i);
	if (k == "dh") return Letter::dh(i);
	if (k == "g") return Letter::g(i);
	if (k == "ginv") return Letter::ginv(i);
	if (k == "dg") return Letter::dg(i);
	throw ParseError("unknown letter kind '" + k + "'");
}

inline Context parse_ctx(Node const &n)
{
	if (n.head() != "ctx" || n.children.size() != 4)
		throw ParseError("expected (ctx <family> <level> <sdim>)");
	Context c;
	auto const &f = n.children[1].atom;
	if (f == "NG")
		c.family = Family::NG;
	else if (f == "NbarG")
		c.family = Family::NbarG;
	else
		throw ParseError("unknown family '" + f + "'");
	c.level = to_int(n.children[2]);
	c.simplexDim = to_int(n.children[3]);
	if (c.level < 0 || c.simplexDim < 0)
		throw ParseError("negative level or simplex dimension");
	return c;
}

/// One parsed (term ...) may expand to several canonical terms when its
/// tpoly has more than one monomial.
inline std::vector<Term> parse_term(Node const &n)
{
	if (n.head() != "term")
		throw ParseError("expected (term ...)");
	Term base;
	bool haveCoeff = false;
	std::vector<std::pair<Rational, std::vector<int>>> tpoly;
	bool haveTpoly = false;
	for (std::size_t k = 1; k < n.children.size(); ++k)
	{
		auto const &c = n.children[k];
		auto const &h = c.head();
		if (h == "coeff")
		{
			if (c.children.size() != 3 || c.children[2].head() != "ipi" || c.children[2].children.size() != 2)
				throw ParseError("expected (coeff <p>/<q> (ipi <k>))");
			base.coeff.rational = parse_rational(c.children[1].atom);
			base.coeff.ipi = to_int(c.children[2].children[1]);
			haveCoeff = true;
		}
		else if (h == "dt")
		{
			for (std::size_t j = 1; j < c.children.size(); ++j)
				base.dt.push_back(to_int(c.children[j]));
		}
		else if (h == "tpoly")
		{
			haveTpoly = true;
			for (std::size_t j = 1; j < c.children.size(); ++j)
			{
				auto const &mono = c.children[j];
				if (!mono.is_list || mono.children.empty() || mono.children[0].is_list)
					throw ParseError("expected (<coef> (<i> <exp>)*)");
				std::vector<int> pw;
				for (std::size_t e = 1; e < mono.children.size(); ++e)
				{
					auto const &pr = mono.children[e];
					if (!pr.is_list || pr.children.size() != 2)
						throw ParseError("expected (<i> <exp>)");
					int i = to_int(pr.children[0]), x = to_int(pr.children[1]);
					if (i < 0 || x < 0)
						throw ParseError("negative t index or exponent");
					if (static_cast<int>(pw.size()) <= i)
						pw.resize(static_cast<std::size_t>(i) + 1, 0);
					pw[static_cast<std::size_t>(i)] += x;
				}
				tpoly.emplace_back(parse_rational(mono.children[0].atom), std::move(pw));
			}
		}
		else if (h == "tr")
		{
			TraceWord w;
			for (std::size_t j = 1; j < c.children.size(); ++j)
				w.letters.push_back(parse_letter(c.children[j]));
			base.traces.push_back(std::move(w));
		}
		else
			throw ParseError("unknown term field '" + h + "'");
	}
	if (!haveCoeff)
		throw ParseError("term without coeff");
	if (!haveTpoly)
		return {base};
	std::vector<Term> out;
	for (auto const &[c, pw] : tpoly)
	{
		Term t = base;
		t.coeff.rational *= c;
		t.tpow = pw;
		out.push_back(std::move(t));
	}
	return out;
}

inline FormExpr from_tree(Node const &root)
{
	if (root.head() != "form" || root.children.size() < 2)
		throw ParseError("expected (form (ctx ...) term*)");
	Context ctx = parse_ctx(root.children[1]);
	std::vector<Term> terms;
	for (std::size_t k = 2; k < root.children.size(); ++k)
	{
		auto ts = parse_term(root.children[k]);
		terms.insert(terms.end(), ts.begin(), ts.end());
	}
	return FormExpr(ctx, std::move(terms));
}

} // namespace sexpr

inline std::string to_sexpr(Letter l) { return "(" + letter_name(l) + " " + std::to_string(l.index) + ")"; }

inline std::string to_sexpr(Context const &c)
{
	return "(ctx " + std::string(family_name(c.family)) + " " + std::to_string(c.level) + " " +
	       std::to_string(c.simplexDim) + ")";
}

inline std::string to_sexpr(Term const &t)
{
	std::string s = "(term (coeff " + rational_string(t.coeff.rational) + " (ipi " + std::to_string(t.coeff.ipi) + "))";
	if (!t.dt.empty())
	{
		s += " (dt";
		for (int i : t.dt)
			s += " " + std::to_string(i);
		s += ")";
	}
	if (!t.tpow.empty())
	{
		s += " (tpoly (1";
		for (std::size_t i = 0; i < t.tpow.size(); ++i)
			if (t.tpow[i])
				s += " (" + std::to_string(i) + " " + std::to_string(t.tpow[i]) + ")";
		s += "))";
	}
	for (auto const &w : t.traces)
	{
		s += " (tr ";
		for (auto l : w.letters)
			s += to_sexpr(l);
		s += ")";
	}
	return s + ")";
}

inline std::string to_sexpr(FormExpr const &a)
{
	std::string s = "(form " + to_sexpr(a.context());
	for (auto const &t : a.terms())
		s += "\n  " + to_sexpr(t);
	return s + ")";
}

inline FormExpr parse_sexpr(std::string_view text) { return sexpr::from_tree(sexpr::parse_tree(text)); }

inline FormExpr read_sexpr_file(std::string const &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open " + path);
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_sexpr(buf.str());
}

// ---------------------------------------------------------------------------
// JSON mirror of the S-expression tree

inline nlohmann::json to_json(Context const &c)
{
	return {{"family", family_name(c.family)}, {"level", c.level}, {"sdim", c.simplexDim}};
}

inline nlohmann::json to_json(FormExpr const &a)
{
	nlohmann::json terms = nlohmann::json::array();
	for (auto const &t : a.terms())
	{
		nlohmann::json jt;
		jt["coeff"] = rational_string(t.coeff.rational);
		jt["ipi"] = t.coeff.ipi;
		jt["dt"] = t.dt;
		nlohmann::json tp = nlohmann::json::array();
		if (!t.tpow.empty())
		{
			nlohmann::json mono = nlohmann::json::array();
			for (std::size_t i = 0; i < t.tpow.size(); ++i)
				if (t.tpow[i])
					mono.push_back({i, t.tpow[i]});
			tp.push_back({{"coef", "1/1"}, {"mono", mono}});
		}
		jt["tpoly"] = tp;
		nlohmann::json trs = nlohmann::json::array();
		for (auto const &w : t.traces)
		{
			nlohmann::json jw = nlohmann::json::array();
			for (auto l : w.letters)
				jw.push_back({letter_name(l), l.index});
			trs.push_back(jw);
		}
		jt["tr"] = trs;
		terms.push_back(jt);
	}
	return {{"ctx", to_json(a.context())}, {"terms", terms}};
}

inline std::string to_json_string(FormExpr const &a) { return to_json(a).dump(); }

inline FormExpr from_json(nlohmann::json const &j)
{
	try
	{
		auto const &jc = j.at("ctx");
		std::string fam = jc.at("family").get<std::string>();
		Context ctx;
		if (fam == "NG")
			ctx.family = Family::NG;
		else if (fam == "NbarG")
			ctx.family = Family::NbarG;
		else
			throw ParseError("unknown family '" + fam + "'");
		ctx.level = jc.at("level").get<int>();
		ctx.simplexDim = jc.at("sdim").get<int>();
		std::vector<Term> terms;
		for (auto const &jt : j.at("terms"))
		{
			Term base;
			base.coeff.rational = parse_rational(jt.at("coeff").get<std::string>());
			base.coeff.ipi = jt.at("ipi").get<int>();
			base.dt = jt.at("dt").get<std::vector<int>>();
			for (auto const &jw : jt.at("tr"))
			{
				TraceWord w;
				for (auto const &jl : jw)
				{
					sexpr::Node n;
					n.is_list = true;
					n.children.push_back({jl.at(0).get<std::string>(), {}, false});
					n.children.push_back({std::to_string(jl.at(1).get<int>()), {}, false});
					w.letters.push_back(sexpr::parse_letter(n));
				}
				base.traces.push_back(std::move(w));
			}
			auto const &tp = jt.at("tpoly");
			if (tp.empty())
			{
				terms.push_back(std::move(base));
				continue;
			}
			for (auto const &mono : tp)
			{
				Term t = base;
				t.coeff.rational *= parse_rational(mono.at("coef").get<std::string>());
				for (auto const &pr : mono.at("mono"))
				{
					auto i = pr.at(0).get<std::size_t>();
					if (t.tpow.size() <= i)
						t.tpow.resize(i + 1, 0);
					t.tpow[i] += pr.at(1).get<int>();
				}
				terms.push_back(std::move(t));
			}
		}
		return FormExpr(ctx, std::move(terms));
	}
	catch (nlohmann::json::exception const &e)
	{
		throw ParseError(std::string("malformed form JSON: ") + e.what());
	}
}

inline FormExpr parse_json(std::string_view text)
{
	try
	{
		return from_json(nlohmann::json::parse(text));
	}
	catch (nlohmann::json::parse_error const &e)
	{
		throw ParseError(e.what());
	}
}

// ---------------------------------------------------------------------------
// LaTeX

inline std::string to_latex(Letter l)
{
	std::string base = l.family == Family::NG ? "h" : "g";
	std::string idx = "_{" + std::to_string(l.index) + "}";
	switch (l.kind)
	{
	case LetterKind::Var: return base + idx;
	case LetterKind::Inverse: return base + idx + "^{-1}";
	default: return "d" + base + idx;
	}
}

inline std::string to_latex(FormExpr const &a)
{
	if (a.is_zero())
		return "0";
	std::string s;
	bool first = true;
	for (auto const &t : a.terms())
	{
		Rational c = t.coeff.rational;
		bool neg = c < 0;
		if (neg)
			c = -c;
		s += neg ? (first ? "-" : " - ") : (first ? "" : " + ");
		first = false;
		bool bare = t.dt.empty() && t.tpow.empty() && t.traces.empty() && t.coeff.ipi == 0;
		if (denominator(c) != 1)
			s += "\\frac{" + numerator(c).str() + "}{" + denominator(c).str() + "}";
		else if (c != 1 || bare)
			s += numerator(c).str();
		if (t.coeff.ipi == 1)
			s += "\\frac{1}{2\\pi i}";
		else if (t.coeff.ipi > 1)
			s += "\\left(\\frac{1}{2\\pi i}\\right)^{" + std::to_string(t.coeff.ipi) + "}";
		for (std::size_t i = 0; i < t.tpow.size(); ++i)
			if (t.tpow[i])
				s += "t_{" + std::to_string(i) + "}" + (t.tpow[i] > 1 ? "^{" + std::to_string(t.tpow[i]) + "}" : "");
		for (std::size_t i = 0; i < t.dt.size(); ++i)
			s += (i ? " \\wedge dt_{" : " dt_{") + std::to_string(t.dt[i]) + "}";
		for (auto const &w : t.traces)
		{
			s += "\\,\\mathrm{tr}(";
			for (std::size_t i = 0; i < w.letters.size(); ++i)
				s += (i ? "\\," : "") + to_latex(w.letters[i]);
			s += ")";
		}
	}
	return s;
}

} // namespace simpchern
