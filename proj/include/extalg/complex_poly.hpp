/*
   Copyright 2026 The extalg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Dense univariate polynomials over C, stored low degree first. These are the
// per-character shadows of polynomials over the base algebra.

#ifndef EXTALG_COMPLEX_POLY_HPP
#define EXTALG_COMPLEX_POLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "algebra_core.hpp"

namespace extalg::cpoly {

using CPoly = std::vector<cplx>;

inline cplx eval(std::span<const cplx> p, cplx x) {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// Drops high-order coefficients with modulus <= tol.
inline CPoly trimmed(CPoly p, double tol = 0.0) {
    while (!p.empty() && std::abs(p.back()) <= tol) p.pop_back();
    return p;
}

inline CPoly mul(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.empty() || b.empty()) return {};
    CPoly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline CPoly sub(std::span<const cplx> a, std::span<const cplx> b) {
    CPoly out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

/// Quotient and remainder of a by b; b must have a nonzero leading coefficient.
inline std::pair<CPoly, CPoly> divmod(std::span<const cplx> a, std::span<const cplx> b) {
    const std::size_t nb = b.size();
    if (a.size() < nb) return {CPoly{}, CPoly(a.begin(), a.end())};
    CPoly rem(a.begin(), a.end());
    CPoly quot(a.size() - nb + 1, 0.0);
    const cplx lead = b.back();
    for (std::size_t step = 0; step < quot.size(); ++step) {
        const std::size_t k = a.size() - 1 - step;
        const cplx c = rem[k] / lead;
        quot[k - (nb - 1)] = c;
        for (std::size_t j = 0; j < nb; ++j) rem[k - (nb - 1) + j] -= c * b[j];
        rem[k] = 0.0;
    }
    rem.resize(nb - 1);
    return {quot, rem};
}

/// Roots of x^n + a_{n-1} x^{n-1} + ... + a_0 as eigenvalues of the companion matrix.
inline std::vector<cplx> companion_roots(std::span<const cplx> lower) {
    const auto n = static_cast<Eigen::Index>(lower.size());
    if (n == 0) return {};
    if (n == 1) return {-lower[0]};
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) c(i, n - 1) = -lower[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, false);
    std::vector<cplx> roots(lower.size());
    for (Eigen::Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

inline bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

struct RootCluster {
    cplx centre;
    int multiplicity = 1;
    double radius = 0.0;
};

/// Single-linkage clustering with threshold `tol`; centres are cluster means,
/// returned in lexicographic (re, im) order.
inline std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots, double tol) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = i;
    auto find = [&](std::size_t i) {
        while (label[i] != i) i = label[i] = label[label[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(roots[i] - roots[j]) <= tol) label[find(i)] = find(j);
    std::vector<RootCluster> out;
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        auto it = std::find(reps.begin(), reps.end(), r);
        if (it == reps.end()) {
            reps.push_back(r);
            out.push_back({roots[i], 1, 0.0});
        } else {
            auto& c = out[static_cast<std::size_t>(it - reps.begin())];
            c.centre += roots[i];
            ++c.multiplicity;
        }
    }
    for (auto& c : out) c.centre /= static_cast<double>(c.multiplicity);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        auto& c = out[static_cast<std::size_t>(std::find(reps.begin(), reps.end(), r) - reps.begin())];
        c.radius = std::max(c.radius, std::abs(roots[i] - c.centre));
    }
    std::sort(out.begin(), out.end(),
              [](const RootCluster& a, const RootCluster& b) { return lex_less(a.centre, b.centre); });
    return out;
}

inline cplx determinant(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
}

/// Monic polynomial with the given roots, low degree first (leading 1 included).
inline CPoly from_roots(std::span<const cplx> roots) {
    CPoly p{1.0};
    for (auto r : roots) {
        const CPoly lin{-r, 1.0};
        p = mul(p, lin);
    }
    return p;
}

}  // namespace extalg::cpoly

#endif  // EXTALG_COMPLEX_POLY_HPP
