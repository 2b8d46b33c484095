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

// Independent reference computations and random generators for the tests.
// Nothing here calls into the library's numerics.

#ifndef EXTALG_TESTS_ORACLES_HPP
#define EXTALG_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "extalg/extalg.hpp"

namespace oracle {

using extalg::cplx;

/// Roots of the monic polynomial x^n + lower[n-1] x^{n-1} + ... + lower[0]
/// by Aberth-Ehrlich iteration.
inline std::vector<cplx> roots(const std::vector<cplx>& lower) {
    const std::size_t n = lower.size();
    auto eval = [&](cplx z, cplx& dp) {
        cplx p = 1.0;
        dp = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + lower[k];
        }
        return p;
    };
    double bound = 1.0;
    for (auto c : lower) bound = std::max(bound, 1.0 + std::abs(c));
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(0.5 * bound, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n));
    for (int it = 0; it < 500; ++it) {
        double move = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            cplx dp;
            const cplx p = eval(z[k], dp);
            if (p == cplx{}) continue;
            const cplx ratio = p / dp;
            cplx s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k && z[k] != z[j]) s += 1.0 / (z[k] - z[j]);
            const cplx step = ratio / (1.0 - ratio * s);
            z[k] -= step;
            move = std::max(move, std::abs(step));
        }
        if (move < 1e-15 * bound) break;
    }
    return z;
}

inline cplx eval_low_first(const std::vector<cplx>& c, cplx x) {
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

/// prod_i beta(lambda_i) over the roots of the monic polynomial.
inline cplx root_product(const std::vector<cplx>& alpha_lower, const std::vector<cplx>& beta) {
    cplx acc = 1.0;
    for (auto r : roots(alpha_lower)) acc *= eval_low_first(beta, r);
    return acc;
}

inline cplx power_sum(const std::vector<cplx>& rs, std::size_t j) {
    cplx acc = 0.0;
    for (auto r : rs) acc += std::pow(r, static_cast<int>(j));
    return acc;
}

/// b with sum_k b_k x_i^k = y_i, by a dense Vandermonde solve.
inline std::vector<cplx> interpolate(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXcd V(n, n);
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx p = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            V(i, k) = p;
            p *= x[static_cast<std::size_t>(i)];
        }
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXcd b = V.fullPivLu().solve(rhs);
    return std::vector<cplx>(b.data(), b.data() + n);
}

/// Branches k with |Log v + 2 pi i k| <= t by scanning a generous k-range.
inline std::vector<long> brute_branches(cplx v, double t) {
    const long K = static_cast<long>(std::ceil(t / std::numbers::pi)) + 1;
    std::vector<long> out;
    const cplx l = std::log(v);
    for (long k = -K; k <= K; ++k)
        if (std::abs(l + cplx(0.0, 2.0 * std::numbers::pi * static_cast<double>(k))) <= t) out.push_back(k);
    return out;
}

/// Seeded generators for property tests.
class Gen {
   public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::size_t size(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    /// Uniform in the disk of radius r.
    cplx disk(double r) {
        return std::polar(r * std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 2.0 * std::numbers::pi));
    }

    extalg::Element element(const extalg::CharacterSpace& s, double r = 1.0) {
        return extalg::Element::generate(s, [&](std::size_t) { return disk(r); });
    }

    /// Values with modulus in [lo, hi].
    extalg::Element annulus(const extalg::CharacterSpace& s, double lo, double hi) {
        return extalg::Element::generate(s, [&](std::size_t) {
            return std::polar(uniform(lo, hi), uniform(0.0, 2.0 * std::numbers::pi));
        });
    }

    extalg::MonicPoly monic(const extalg::CharacterSpace& s, std::size_t n, double r = 1.0) {
        std::vector<extalg::Element> c;
        for (std::size_t k = 0; k < n; ++k) c.push_back(element(s, r));
        return extalg::MonicPoly(std::move(c));
    }

    std::vector<extalg::Element> coeffs(const extalg::CharacterSpace& s, std::size_t n, double r = 1.0) {
        std::vector<extalg::Element> c;
        for (std::size_t k = 0; k < n; ++k) c.push_back(element(s, r));
        return c;
    }

    extalg::AHElement ah(const extalg::AHExtension& ext, double r = 1.0) {
        return extalg::AHElement(ext, coeffs(ext.space(), ext.degree(), r));
    }

    std::mt19937_64& engine() { return rng_; }

   private:
    std::mt19937_64 rng_;
};

/// Random u whose transform vanishes at one root over every character, so
/// res(alpha, u) = 0 up to rounding.
inline extalg::AHElement singular_ah(Gen& g, const extalg::AHExtension& ext, double r = 1.0) {
    using extalg::Element;
    auto c = g.coeffs(ext.space(), ext.degree(), r);
    c[0] = Element::generate(ext.space(), [&](std::size_t w) {
        const auto rs = roots(ext.alpha().lower_at(w));
        const cplx lam = rs[static_cast<std::size_t>(g.integer(0, static_cast<int>(rs.size()) - 1))];
        cplx acc = 0.0, p = lam;
        for (std::size_t k = 1; k < c.size(); ++k, p *= lam) acc += c[k][w] * p;
        return -acc;
    });
    return extalg::AHElement(ext, std::move(c));
}

/// alpha with separated roots, f = exp(phi), and coefficients of h with
/// h(lambda_i) = phi + 2 pi i k_i at every root.
struct ExpWitness {
    extalg::MonicPoly alpha;
    extalg::Element f;
    std::vector<extalg::Element> h;
};

inline ExpWitness exp_witness(Gen& g, const extalg::CharacterSpace& s, std::size_t n) {
    using extalg::Element;
    std::vector<std::vector<cplx>> rs(s.size());
    for (auto& r : rs) {
        for (bool ok = false; !ok;) {
            r.clear();
            for (std::size_t i = 0; i < n; ++i) r.push_back(g.disk(2.0));
            ok = true;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) ok = ok && std::abs(r[i] - r[j]) > 0.3;
        }
    }
    std::vector<Element> root_elems;
    for (std::size_t i = 0; i < n; ++i)
        root_elems.push_back(Element::generate(s, [&](std::size_t w) { return rs[w][i]; }));
    const Element phi = g.element(s, 1.5);
    std::vector<std::vector<cplx>> hc(s.size());
    for (std::size_t w = 0; w < s.size(); ++w) {
        std::vector<cplx> y;
        for (std::size_t i = 0; i < n; ++i)
            y.push_back(phi[w] + cplx(0.0, 2.0 * std::numbers::pi * g.integer(-2, 2)));
        hc[w] = interpolate(rs[w], y);
    }
    std::vector<Element> h;
    for (std::size_t k = 0; k < n; ++k) h.push_back(Element::generate(s, [&](std::size_t w) { return hc[w][k]; }));
    return {extalg::MonicPoly::from_roots(root_elems), exp_elem(phi), std::move(h)};
}

}  // namespace oracle

#endif  // EXTALG_TESTS_ORACLES_HPP
