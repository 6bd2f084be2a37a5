#pragma once

// Cochains of the local truncated complex built from the Chern-character
// cocycle: the contractions σ_l, the maps f_{m,q}, the integrated pullbacks
// β_{m,q} = (-1)^m ∫_{Δ^q} f_{m,q}^* ω_m, and η_l = Σ β_{m,q}. All of these
// are numeric functionals.

#include <span>

#include "evaluator.hpp"
#include "generator.hpp"
#include "quadrature.hpp"

namespace simpchern {

class DomainError : public std::domain_error
{
  public:
	using std::domain_error::domain_error;
};

struct ContractionConfig
{
	double radius = 0.1;
	int quadratureOrder = 5;
	double fdStep = 1e-4;
};

/// Principal logarithm, restricted to ‖h - 1‖₂ < 1 where the series converges.
inline Matrix principal_log(Matrix const &h)
{
	Matrix e = h - Matrix::Identity(h.rows(), h.cols());
	double nrm = Eigen::JacobiSVD<Matrix>(e).singularValues()(0);
	if (!(nrm < 1.0))
		throw DomainError("matrix leaves the principal-log domain (|h - 1| = " + std::to_string(nrm) + ")");
	return h.log();
}

/// ρ(h, s) = exp(s·log h).
inline Matrix contract(Matrix const &h, double s)
{
	if (s == 0.0)
		return Matrix::Identity(h.rows(), h.cols());
	if (s == 1.0)
		return h;
	return Matrix((s * principal_log(h)).exp());
}

/// σ_l(t_0..t_l; h_1..h_l) = ρ(h_1·σ_{l-1}(t_1/(1-t_0), …; h_2..h_l), 1 - t_0),
/// σ_0 = 1.
inline Matrix sigma(std::span<double const> t, std::span<Matrix const> hs, int n)
{
	if (t.size() != hs.size() + 1)
		throw std::invalid_argument("sigma needs l+1 barycentric coordinates for l matrices");
	if (hs.empty())
		return Matrix::Identity(n, n);
	double const rest = 1.0 - t[0];
	if (rest <= 0.0)
		return Matrix::Identity(n, n);
	std::vector<double> u(t.begin() + 1, t.end());
	for (auto &x : u)
		x /= rest;
	Matrix inner = sigma(u, hs.subspan(1), n);
	return contract(hs[0] * inner, rest);
}

/// ε^j : Δ^{l-1} → Δ^l, inserting a zero coordinate at position j.
inline std::vector<double> coface(int j, std::span<double const> t)
{
	std::vector<double> out(t.begin(), t.end());
	out.insert(out.begin() + j, 0.0);
	return out;
}

/// ε_i on a tuple (h_1..h_q) (0-based storage).
inline std::vector<Matrix> face_tuple(int i, std::span<Matrix const> h)
{
	int const q = static_cast<int>(h.size());
	if (i < 0 || i > q)
		throw std::out_of_range("face index out of range");
	std::vector<Matrix> out;
	for (int j = 0; j < q; ++j)
	{
		if (i >= 1 && i <= q - 1 && j == i - 1)
		{
			out.push_back(h[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(j) + 1]);
			++j;
		}
		else if (!(i == 0 && j == 0) && !(i == q && j == q - 1))
			out.push_back(h[static_cast<std::size_t>(j)]);
	}
	return out;
}

/// f_{m,q}(t; h_1..h_{m+q-1}) = (h_1, …, h_{m-1}, σ_q(t; h_m..h_{m+q-1})).
inline std::vector<Matrix> f_map(int m, int q, std::span<double const> t, std::span<Matrix const> hs, int n)
{
	if (m < 1 || q < 0 || static_cast<int>(hs.size()) != m + q - 1 || static_cast<int>(t.size()) != q + 1)
		throw std::invalid_argument("f_map: expected m+q-1 matrices and q+1 coordinates");
	std::vector<Matrix> out(hs.begin(), hs.begin() + (m - 1));
	out.push_back(sigma(t, hs.subspan(static_cast<std::size_t>(m - 1)), n));
	return out;
}

/// ω_1..ω_p of the Chern-character cocycle, generated once.
class ChernCocycle
{
  public:
	explicit ChernCocycle(int p) : p_(p)
	{
		for (int m = 1; m <= p; ++m)
			omega_.push_back(bss_component(p, p - m));
	}
	int p() const { return p_; }
	/// ω_m on NG(m); zero for m > p.
	FormExpr const *omega(int m) const
	{
		return m >= 1 && m <= p_ ? &omega_[static_cast<std::size_t>(m - 1)] : nullptr;
	}

  private:
	int p_;
	std::vector<FormExpr> omega_;
};

/// A point of U^k with tangents, 0-based storage.
struct LocalPoint
{
	int size = 3;
	std::vector<Matrix> h;
	std::vector<std::vector<Matrix>> tangents;
	int n() const { return size; }
};

inline EvalPoint to_eval_point(std::vector<Matrix> const &h, std::vector<std::vector<Matrix>> const &tangents, int n)
{
	EvalPoint pt;
	int const k = static_cast<int>(h.size());
	pt.ctx = {Family::NG, k, 0};
	pt.mats.assign(1, Matrix::Identity(n, n));
	pt.mats.insert(pt.mats.end(), h.begin(), h.end());
	for (auto const &v : tangents)
	{
		Tangent w;
		w.mats.assign(1, Matrix::Zero(n, n));
		w.mats.insert(w.mats.end(), v.begin(), v.end());
		pt.tangents.push_back(std::move(w));
	}
	pt.refresh_inverses();
	return pt;
}

/// β_{m,q} at a point of U^{m+q-1} on its l = 2p-m-q tangents.
inline Complex beta_eval(int m, int q, ChernCocycle const &omega, LocalPoint const &pt, ContractionConfig const &cfg)
{
	int const p = omega.p();
	int const l = 2 * p - m - q;
	if (m < 1 || q < 0 || l < 0)
		throw std::invalid_argument("beta_eval: need m >= 1, q >= 0, m + q <= 2p");
	if (static_cast<int>(pt.h.size()) != m + q - 1 || static_cast<int>(pt.tangents.size()) != l)
		throw std::invalid_argument("beta_eval: point has the wrong number of slots or tangents");
	auto const *om = omega.omega(m);
	if (!om)
		return 0.0;
	int const n = pt.n();
	double const sign = m % 2 ? -1.0 : 1.0;
	std::span<Matrix const> hs(pt.h);
	auto tail = hs.subspan(static_cast<std::size_t>(m - 1));

	if (q == 0)
	{
		auto img = f_map(m, 0, std::vector<double>{1.0}, hs, n);
		std::vector<std::vector<Matrix>> tv;
		for (auto const &v : pt.tangents)
		{
			std::vector<Matrix> w(v.begin(), v.begin() + (m - 1));
			w.push_back(Matrix::Zero(n, n));
			tv.push_back(std::move(w));
		}
		return sign * evaluate(*om, to_eval_point(img, tv, n));
	}

	if (cfg.quadratureOrder < 1)
		throw std::invalid_argument("quadrature order must be positive");
	double const hstep = cfg.fdStep;
	Complex total = 0;
	for (auto const &nd : grundmann_moeller(q, cfg.quadratureOrder))
	{
		std::span<double const> t(nd.bary);
		auto img = f_map(m, q, t, hs, n);
		std::vector<std::vector<Matrix>> tv;
		// ∂/∂t_j (j = 1..q) with t_0 = 1 - Σ t_j: only σ moves.
		for (int j = 1; j <= q; ++j)
		{
			auto tp = nd.bary, tm = nd.bary;
			tp[static_cast<std::size_t>(j)] += hstep;
			tp[0] -= hstep;
			tm[static_cast<std::size_t>(j)] -= hstep;
			tm[0] += hstep;
			std::vector<Matrix> w(static_cast<std::size_t>(m), Matrix::Zero(n, n));
			w.back() = (sigma(tp, tail, n) - sigma(tm, tail, n)) / (2 * hstep);
			tv.push_back(std::move(w));
		}
		for (auto const &v : pt.tangents)
		{
			std::vector<Matrix> w(v.begin(), v.begin() + (m - 1));
			std::vector<Matrix> hp(tail.begin(), tail.end()), hm = hp;
			for (std::size_t k = 0; k < hp.size(); ++k)
			{
				hp[k] += hstep * v[static_cast<std::size_t>(m - 1) + k];
				hm[k] -= hstep * v[static_cast<std::size_t>(m - 1) + k];
			}
			w.push_back((sigma(t, hp, n) - sigma(t, hm, n)) / (2 * hstep));
			tv.push_back(std::move(w));
		}
		total += nd.weight * evaluate(*om, to_eval_point(img, tv, n));
	}
	return sign * total;
}

/// η_l = Σ_{m+q=2p-l, m>=1} β_{m,q} on U^{2p-1-l}.
inline Complex eta_eval(int l, ChernCocycle const &omega, LocalPoint const &pt, ContractionConfig const &cfg)
{
	int const p = omega.p();
	if (l < 0 || l > 2 * p - 1)
		throw std::out_of_range("eta_eval: need 0 <= l <= 2p-1");
	Complex sum = 0;
	for (int m = 1; m <= 2 * p - l; ++m)
		sum += beta_eval(m, 2 * p - l - m, omega, pt, cfg);
	return sum;
}

struct TransferReport
{
	int p = 2;
	int l = 0;
	int samples = 0;
	int quadOrder = 0;
	double fdStep = 0;
	double maxResidual = 0;
	double tolerance = 0;
	double maxLhs = 0;
	double maxRhs = 0;
	bool pass = false;

	nlohmann::json to_json() const
	{
		return {{"p", p},           {"l", l},           {"samples", samples},         {"quadOrder", quadOrder},
		        {"fdStep", fdStep}, {"lhs", maxLhs},    {"rhs", maxRhs},              {"maxResidual", maxResidual},
		        {"tolerance", tolerance}, {"pass", pass}};
	}
};

/// h = 1 + E with ‖E‖₂ uniform in (0.2, 0.9)·radius; Gaussian tangents.
inline LocalPoint sample_local_point(int slots, int tangents, int n, double radius, std::uint64_t seed, std::uint64_t index)
{
	auto rng = sample_rng(seed, index, 0xB7u);
	std::uniform_real_distribution<double> U(0.2, 0.9);
	LocalPoint pt;
	pt.size = n;
	for (int k = 0; k < slots; ++k)
	{
		Matrix e = gaussian_matrix(rng, n);
		e *= radius * U(rng) / Eigen::JacobiSVD<Matrix>(e).singularValues()(0);
		pt.h.push_back(Matrix::Identity(n, n) + e);
	}
	for (int a = 0; a < tangents; ++a)
	{
		std::vector<Matrix> v;
		for (int k = 0; k < slots; ++k)
			v.push_back(gaussian_matrix(rng, n));
		pt.tangents.push_back(std::move(v));
	}
	return pt;
}

/// Pushes a point of U^q forward along ε_i (analytic derivative of the product).
inline LocalPoint face_point(int i, LocalPoint const &pt)
{
	LocalPoint out;
	out.size = pt.size;
	out.h = face_tuple(i, pt.h);
	int const q = static_cast<int>(pt.h.size());
	for (auto const &v : pt.tangents)
	{
		std::vector<Matrix> w;
		for (int j = 0; j < q; ++j)
		{
			auto jj = static_cast<std::size_t>(j);
			if (i >= 1 && i <= q - 1 && j == i - 1)
			{
				w.push_back(v[jj] * pt.h[jj + 1] + pt.h[jj] * v[jj + 1]);
				++j;
			}
			else if (!(i == 0 && j == 0) && !(i == q && j == q - 1))
				w.push_back(v[jj]);
		}
		out.tangents.push_back(std::move(w));
	}
	return out;
}

/// dη_{l-1} at pt (l tangents) by central differences along h + sV_i.
inline Complex fd_d_eta(int lMinus1, ChernCocycle const &omega, LocalPoint const &pt, ContractionConfig const &cfg,
                        double step)
{
	Complex sum = 0;
	int const k1 = static_cast<int>(pt.tangents.size());
	for (int i = 0; i < k1; ++i)
	{
		LocalPoint plus = pt, minus = pt;
		for (std::size_t s = 0; s < pt.h.size(); ++s)
		{
			plus.h[s] += step * pt.tangents[static_cast<std::size_t>(i)][s];
			minus.h[s] -= step * pt.tangents[static_cast<std::size_t>(i)][s];
		}
		plus.tangents.erase(plus.tangents.begin() + i);
		minus.tangents.erase(minus.tangents.begin() + i);
		Complex deriv = (eta_eval(lMinus1, omega, plus, cfg) - eta_eval(lMinus1, omega, minus, cfg)) / (2 * step);
		sum += i % 2 ? -deriv : deriv;
	}
	return sum;
}

/// Σ_{i=0}^{2p-l} (-1)^i ε_i^* η_l  vs  (-1)^{2p-l+1} dη_{l-1} + ω_{2p-l}
/// at random points of U^{2p-l}.
inline TransferReport verify_transfer(ChernCocycle const &omega, int l, ContractionConfig const &ccfg,
                                        NumericConfig const &ncfg, double tolerance = 1e-4)
{
	int const p = omega.p();
	if (l < 0 || l > 2 * p - 1)
		throw std::out_of_range("verify_transfer: need 0 <= l <= 2p-1");
	int const slots = 2 * p - l;
	TransferReport rep;
	rep.p = p;
	rep.l = l;
	rep.samples = ncfg.samples;
	rep.quadOrder = ccfg.quadratureOrder;
	rep.fdStep = ccfg.fdStep;
	rep.tolerance = tolerance;
	for (int s = 0; s < ncfg.samples; ++s)
	{
		auto pt = sample_local_point(slots, l, ncfg.n, ccfg.radius, ncfg.seed, static_cast<std::uint64_t>(s));
		Complex lhs = 0;
		for (int i = 0; i <= slots; ++i)
		{
			Complex v = eta_eval(l, omega, face_point(i, pt), ccfg);
			lhs += i % 2 ? -v : v;
		}
		Complex rhs = 0;
		if (l >= 1)
		{
			Complex d = fd_d_eta(l - 1, omega, pt, ccfg, ccfg.fdStep);
			rhs += (slots + 1) % 2 ? -d : d;
		}
		if (auto const *om = omega.omega(slots))
			rhs += evaluate(*om, to_eval_point(pt.h, pt.tangents, ncfg.n));
		rep.maxLhs = std::max(rep.maxLhs, std::abs(lhs));
		rep.maxRhs = std::max(rep.maxRhs, std::abs(rhs));
		rep.maxResidual = std::max(rep.maxResidual, relative_residual(lhs, rhs));
	}
	rep.pass = rep.maxResidual < tolerance;
	return rep;
}

/// Three-level refinement ending at `base`: level k uses quadrature order
/// base - 4 + 2k (at least 1) and fdStep 4h, 2h, h. Below h ≈ 1e-4 the nested
/// differences hit the rounding floor, so the ladder approaches the configured
/// step from above.
inline std::vector<TransferReport> refine_transfer(ChernCocycle const &omega, int l, ContractionConfig const &base,
                                                     NumericConfig const &ncfg, double tolerance = 1e-4)
{
	std::vector<TransferReport> out;
	for (int k = 0; k < 3; ++k)
	{
		ContractionConfig c = base;
		c.quadratureOrder = std::max(1, base.quadratureOrder - 4 + 2 * k);
		c.fdStep = base.fdStep * static_cast<double>(1 << (2 - k));
		out.push_back(verify_transfer(omega, l, c, ncfg, tolerance));
	}
	return out;
}

} // namespace simpchern
