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

// Approximation of Arens-Hoffman elements by invertible ones, perturbing the
// constant coefficient only.

#ifndef EXTALG_INVERTIBLE_DENSITY_HPP
#define EXTALG_INVERTIBLE_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "algebra_core.hpp"
#include "arens_hoffman.hpp"
#include "complex_poly.hpp"
#include "poly_resultant.hpp"

namespace extalg {

inline constexpr double kInvertibleMargin = 1e-9;

/// True when min |R| > 1e-9 max(1, ||R||).
inline bool has_margin(const Element& R) {
    return min_modulus(R) > kInvertibleMargin * std::max(1.0, sup_norm(R));
}

namespace detail {

inline std::vector<Element> upper_coeffs(const AHElement& u) {
    return std::vector<Element>(u.coeffs().begin() + 1, u.coeffs().end());
}

inline AHElement with_b0(const AHElement& u, Element b0) {
    auto c = u.coeffs();
    c[0] = std::move(b0);
    return AHElement(u.ext(), std::move(c));
}

}  // namespace detail

/// At each character where P(b_0) lacks margin, moves b_0 to the point of the
/// disk of radius 0.999 eps / 2 farthest from the roots of P.
inline AHElement approx_invertible_direct(const AHElement& u, double eps) {
    if (!(eps > 0.0)) throw InvalidElement("eps must be positive");
    const auto& ext = u.ext();
    const auto P = resultant_as_poly_in_c(ext.alpha(), detail::upper_coeffs(u));
    const Element& b0 = u.coeff(0);
    const Element R = P(b0);
    const double thr = kInvertibleMargin * std::max(1.0, sup_norm(R));
    const double radius = 0.999 * eps / 2.0;
    std::vector<cplx> out(b0.values().begin(), b0.values().end());
    for (std::size_t w = 0; w < out.size(); ++w) {
        if (std::abs(R[w]) > thr) continue;
        const auto coeffs = P.at(w);
        const auto roots = cpoly::companion_roots(std::vector<cplx>(coeffs.begin(), coeffs.end() - 1));
        auto clearance = [&](cplx c) {
            double d = std::numeric_limits<double>::infinity();
            for (auto r : roots) d = std::min(d, std::abs(c - r));
            return d;
        };
        cplx best = b0[w];
        double best_d = clearance(best);
        for (int ring = 1; ring <= 16; ++ring) {
            const double rr = radius * ring / 16.0;
            for (int k = 0; k < 64; ++k) {
                const cplx c = b0[w] + std::polar(rr, 2.0 * std::numbers::pi * k / 64.0);
                const double d = clearance(c);
                if (d > best_d) {
                    best_d = d;
                    best = c;
                }
            }
        }
        out[w] = best;
    }
    return detail::with_b0(u, Element(b0.space(), std::move(out)));
}

struct PerturbationTrace {
    /// c_{n-1} = b_0, c_{n-2}, ..., c_0, then the final b_0.
    std::vector<Element> chain;
    std::vector<double> step_norms;
    double final_min_modulus = 0.0;
    std::uint64_t seed = 0;
    std::size_t draws = 0;
};

struct ChainResult {
    AHElement element;
    PerturbationTrace trace;
};

/// The derivative chain: starting from b_0, for m = n-1 down to 0 perturb by
/// less than eps / n so that the m-th derivative of P is invertible there.
/// Zero perturbation is tried first; failing characters are redrawn.
inline ChainResult approx_invertible_chain(const AHElement& u, double eps, int retries = 32,
                                           std::uint64_t seed = 7) {
    if (!(eps > 0.0)) throw InvalidElement("eps must be positive");
    const auto& ext = u.ext();
    const std::size_t n = ext.degree();
    const auto P = resultant_as_poly_in_c(ext.alpha(), detail::upper_coeffs(u));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double step_radius = 0.99 * eps / static_cast<double>(n);
    PerturbationTrace trace;
    trace.seed = seed;
    Element cur = u.coeff(0);
    trace.chain.push_back(cur);
    const std::size_t np = cur.size();
    for (std::size_t m = n; m-- > 0;) {
        auto value_at = [&](std::size_t w, cplx c) { return P.derivative_at(m, w, c); };
        std::vector<cplx> cand(cur.values().begin(), cur.values().end());
        std::vector<bool> ok(np, false);
        for (int attempt = 0; attempt <= retries; ++attempt) {
            double scale = 1.0;
            for (std::size_t w = 0; w < np; ++w) scale = std::max(scale, std::abs(value_at(w, cand[w])));
            bool all = true;
            for (std::size_t w = 0; w < np; ++w) {
                ok[w] = std::abs(value_at(w, cand[w])) > kInvertibleMargin * scale;
                all = all && ok[w];
            }
            if (all) break;
            if (attempt == retries)
                throw RetriesExhausted("derivative of order " + std::to_string(m) + " stayed singular after " +
                                       std::to_string(retries) + " redraws");
            for (std::size_t w = 0; w < np; ++w) {
                if (ok[w]) continue;
                const double r = step_radius * std::sqrt(unit(rng));
                const double th = 2.0 * std::numbers::pi * unit(rng);
                cand[w] = cur[w] + std::polar(r, th);
                ++trace.draws;
            }
        }
        Element next(cur.space(), std::move(cand));
        trace.step_norms.push_back(sup_norm(next - cur));
        cur = std::move(next);
        trace.chain.push_back(cur);
    }
    AHElement out = detail::with_b0(u, cur);
    trace.final_min_modulus = min_modulus(ah_resultant(out));
    return {std::move(out), std::move(trace)};
}

struct PowerWitness {
    double eps;
    Element R;
    double distance;  // ||R - a^n||
};

/// Invertible elements R_alpha(beta_eps) of the base converging to a^n.
inline std::vector<PowerWitness> nth_power_witness(const Element& a, const AHExtension& ext,
                                                   const std::vector<double>& eps_list) {
    const Element an = power(a, static_cast<int>(ext.degree()));
    std::vector<PowerWitness> out;
    for (double eps : eps_list) {
        const auto u = approx_invertible_direct(embed(ext, a), eps);
        Element R = ah_resultant(u);
        const double d = sup_norm(R - an);
        out.push_back({eps, std::move(R), d});
    }
    return out;
}

}  // namespace extalg

#endif  // EXTALG_INVERTIBLE_DENSITY_HPP
