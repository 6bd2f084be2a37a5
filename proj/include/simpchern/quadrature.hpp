#pragma once

// Grundmann–Möller cubature on the standard simplex {t_i >= 0, Σ t_i = 1},
// parametrized by (t_1..t_r) with Lebesgue measure (volume 1/r!).

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace simpchern {

struct QuadratureNode
{
	std::vector<double> bary; // t_0..t_r
	double weight;
};

/// Exact for polynomials of total degree <= `degree` (odd, >= 1).
inline std::vector<QuadratureNode> grundmann_moeller(int dim, int degree)
{
	if (dim < 0)
		throw std::invalid_argument("negative simplex dimension");
	if (degree < 1 || degree % 2 == 0)
		throw std::invalid_argument("Grundmann-Moeller degree must be odd and positive");
	if (dim == 0)
		return {{{1.0}, 1.0}};
	int const s = (degree - 1) / 2;
	std::vector<QuadratureNode> nodes;
	auto fact = [](int k) { return std::tgamma(k + 1.0); };
	for (int i = 0; i <= s; ++i)
	{
		double const denom = degree + dim - 2 * i;
		double w = (i % 2 ? -1.0 : 1.0) * std::pow(2.0, -2 * s) * std::pow(denom, degree) /
		           (fact(i) * fact(degree + dim - i));
		// all β ∈ N^{dim+1} with |β| = s - i
		std::vector<int> beta(static_cast<std::size_t>(dim) + 1, 0);
		std::function<void(int, int)> rec = [&](int pos, int left) {
			if (pos == dim)
			{
				beta[static_cast<std::size_t>(pos)] = left;
				QuadratureNode nd{std::vector<double>(beta.size()), w};
				for (std::size_t k = 0; k < beta.size(); ++k)
					nd.bary[k] = (2.0 * beta[k] + 1.0) / denom;
				nodes.push_back(std::move(nd));
				return;
			}
			for (int b = 0; b <= left; ++b)
			{
				beta[static_cast<std::size_t>(pos)] = b;
				rec(pos + 1, left - b);
			}
		};
		rec(0, s - i);
	}
	return nodes;
}

inline double integrate_simplex_numeric(int dim, int degree, std::function<double(std::vector<double> const &)> const &f)
{
	double sum = 0;
	for (auto const &nd : grundmann_moeller(dim, degree))
		sum += nd.weight * f(nd.bary);
	return sum;
}

} // namespace simpchern
