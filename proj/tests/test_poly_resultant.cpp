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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"

using namespace extalg;

namespace {

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (auto c : v) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST(MonicPoly, Validation) {
    EXPECT_THROW(MonicPoly(std::vector<Element>{}), InvalidPolynomial);
    oracle::Gen g(1);
    const auto s = spaces::discrete(2);
    EXPECT_THROW(MonicPoly(g.coeffs(s, 9)), DegreeTooHigh);
    EXPECT_NO_THROW(MonicPoly(g.coeffs(s, 9), 12));
    auto c = g.coeffs(s, 2);
    c.push_back(g.element(spaces::discrete(2)));
    EXPECT_THROW(MonicPoly(std::move(c)), SpaceMismatch);
}

TEST(MonicDivmod, OneReductionStep) {
    const auto s = spaces::discrete(3);
    oracle::Gen g(2);
    const Element a = g.element(s);
    const MonicPoly alpha({-a, Element::constant(s, 0.0)});
    const PolyOverA x2(s, {Element::constant(s, 0.0), Element::constant(s, 0.0), Element::constant(s, 1.0)});
    const auto [q, r] = monic_divmod(x2, alpha);
    EXPECT_EQ(q.degree(), 0);
    EXPECT_LE(sup_norm(q.coeff(0) - 1.0), 0.0);
    EXPECT_LE(sup_norm(r.coeff(0) - a), 0.0);
    EXPECT_LE(sup_norm(r.coeff(1)), 0.0);
}

TEST(MonicDivmod, LowDegreePassesThrough) {
    const auto s = spaces::discrete(3);
    oracle::Gen g(3);
    const MonicPoly alpha = g.monic(s, 3);
    const PolyOverA beta(s, g.coeffs(s, 2));
    const auto [q, r] = monic_divmod(beta, alpha);
    EXPECT_TRUE(q.is_zero());
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(sup_norm(r.coeff(k) - beta.coeff(k)), 0.0);
}

TEST(MonicDivmod, Reconstruction) {
    oracle::Gen g(4);
    const auto s = spaces::discrete(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = g.size(1, 5);
        const MonicPoly alpha = g.monic(s, n);
        const PolyOverA beta(s, g.coeffs(s, g.size(1, 2 * n + 1)));
        const auto [q, r] = monic_divmod(beta, alpha);
        EXPECT_LT(r.degree(), static_cast<long>(n));
        const PolyOverA back = q * as_poly(alpha) + r;
        for (std::size_t k = 0; k < beta.coeffs().size(); ++k)
            EXPECT_LE(sup_norm(back.coeff(k) - beta.coeff(k)), 1e-10);
    }
}

TEST(MonicDivmod, CosetRepresentativesAgree) {
    oracle::Gen g(5);
    const auto s = spaces::discrete(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = g.size(1, 4);
        const MonicPoly alpha = g.monic(s, n);
        const PolyOverA beta(s, g.coeffs(s, 2 * n));
        const PolyOverA shifted = beta + PolyOverA(s, g.coeffs(s, n)) * as_poly(alpha);
        const auto r1 = monic_divmod(beta, alpha).remainder.padded(n);
        const auto r2 = monic_divmod(shifted, alpha).remainder.padded(n);
        for (std::size_t k = 0; k < n; ++k) EXPECT_LE(sup_norm(r1[k] - r2[k]), 1e-10);
    }
}

TEST(Resultant, QuadraticFormula) {
    oracle::Gen g(6);
    const auto s = spaces::discrete(6);
    const Element a0 = g.element(s), b0 = g.element(s), b1 = g.element(s);
    const MonicPoly alpha({-a0, Element::constant(s, 0.0)});
    const Element R = resultant(alpha, PolyOverA(s, {b0, b1}));
    EXPECT_LE(sup_norm(R - (b0 * b0 - a0 * b1 * b1)), 1e-14);
}

TEST(Resultant, XOverXSquaredMinusOne) {
    const auto s = spaces::discrete(2);
    const MonicPoly alpha({Element::constant(s, -1.0), Element::constant(s, 0.0)});
    const Element R = resultant(alpha, PolyOverA(s, {Element::constant(s, 0.0), Element::constant(s, 1.0)}));
    EXPECT_LE(sup_norm(R + 1.0), 1e-15);
}

TEST(Resultant, ConstantBeta) {
    oracle::Gen g(7);
    const auto s = spaces::discrete(4);
    for (std::size_t n = 1; n <= 6; ++n) {
        const MonicPoly alpha = g.monic(s, n);
        const Element c = g.element(s, 1.5);
        const Element R = resultant(alpha, PolyOverA(s, {c}));
        EXPECT_LE(sup_norm(R - power(c, static_cast<int>(n))), 1e-12);
    }
}

TEST(Resultant, DegreeTooHighForBeta) {
    oracle::Gen g(8);
    const auto s = spaces::discrete(2);
    EXPECT_THROW(resultant(g.monic(s, 2), PolyOverA(s, g.coeffs(s, 3))), DegreeTooHigh);
}

TEST(Resultant, RootProductIdentityUpToCap) {
    oracle::Gen g(9);
    const auto s = spaces::discrete(4);
    for (std::size_t n = 1; n <= kDefaultMaxDegree; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const MonicPoly alpha = g.monic(s, n);
            const PolyOverA beta(s, g.coeffs(s, n));
            const Element R = resultant(alpha, beta);
            for (std::size_t w = 0; w < s.size(); ++w) {
                const auto al = alpha.lower_at(w);
                const auto bw = beta.at(w);
                const double scale = std::pow(1.0 + std::max(max_abs(al), max_abs(bw)), static_cast<double>(n));
                EXPECT_LE(std::abs(R[w] - oracle::root_product(al, bw)), 1e-8 * scale) << "n=" << n;
            }
        }
    }
}

TEST(Resultant, Homogeneous) {
    oracle::Gen g(10);
    const auto s = spaces::discrete(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        const MonicPoly alpha = g.monic(s, n);
        const PolyOverA beta(s, g.coeffs(s, n));
        const cplx sc(0.7, -1.3);
        std::vector<Element> scaled;
        for (const auto& c : beta.coeffs()) scaled.push_back(sc * c);
        const Element lhs = resultant(alpha, PolyOverA(s, scaled));
        const Element rhs = std::pow(sc, static_cast<int>(n)) * resultant(alpha, beta);
        EXPECT_LE(sup_norm(lhs - rhs), 1e-12 * std::max(1.0, sup_norm(rhs)));
    }
}

TEST(ResultantPoly, QuadraticSpecialisation) {
    oracle::Gen g(11);
    const auto s = spaces::discrete(3);
    const Element a0 = g.element(s), b1 = g.element(s);
    const MonicPoly alpha({-a0, Element::constant(s, 0.0)});
    const auto P = resultant_as_poly_in_c(alpha, {b1});
    ASSERT_EQ(P.degree(), 2u);
    EXPECT_LE(sup_norm(P.p[0] + a0 * b1 * b1), 1e-12);
    EXPECT_LE(sup_norm(P.p[1]), 1e-12);
}

TEST(ResultantPoly, ZeroUpperGivesCToTheN) {
    oracle::Gen g(12);
    const auto s = spaces::discrete(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        const MonicPoly alpha = g.monic(s, n);
        std::vector<Element> upper(n - 1, Element::constant(s, 0.0));
        const auto P = resultant_as_poly_in_c(alpha, upper);
        for (const auto& c : P.p) EXPECT_LE(sup_norm(c), 1e-10);
    }
}

TEST(ResultantPoly, MatchesDirectResultant) {
    oracle::Gen g(13);
    const auto s = spaces::discrete(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        const MonicPoly alpha = g.monic(s, n);
        const auto upper = g.coeffs(s, n - 1);
        const auto P = resultant_as_poly_in_c(alpha, upper);
        for (int trial = 0; trial < 10; ++trial) {
            const Element c = g.element(s);
            std::vector<Element> beta{c};
            beta.insert(beta.end(), upper.begin(), upper.end());
            const Element direct = resultant(alpha, PolyOverA(s, beta));
            EXPECT_LE(sup_norm(P(c) - direct), 1e-9);
        }
    }
}

TEST(NewtonSums, SZeroIsExactlyN) {
    oracle::Gen g(14);
    const auto s = spaces::discrete(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto sums = newton_sums(g.monic(s, n), 3);
        for (auto v : sums[0].values()) EXPECT_EQ(v, cplx(static_cast<double>(n)));
    }
}

TEST(NewtonSums, SquareRootCase) {
    oracle::Gen g(15);
    const auto s = spaces::discrete(4);
    const Element a = g.element(s);
    const auto sums = newton_sums(MonicPoly({-a, Element::constant(s, 0.0)}), 3);
    EXPECT_LE(sup_norm(sums[1]), 1e-15);
    EXPECT_LE(sup_norm(sums[2] - 2.0 * a), 1e-15);
    EXPECT_LE(sup_norm(sums[3]), 1e-15);
}

TEST(NewtonSums, MatchRootPowerSums) {
    oracle::Gen g(16);
    const auto s = spaces::discrete(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = g.size(1, 5);
        const MonicPoly alpha = g.monic(s, n);
        const auto sums = newton_sums(alpha, 2 * n);
        for (std::size_t w = 0; w < s.size(); ++w) {
            const auto rs = oracle::roots(alpha.lower_at(w));
            for (std::size_t j = 0; j <= 2 * n; ++j) EXPECT_LE(std::abs(sums[j][w] - oracle::power_sum(rs, j)), 1e-8);
        }
    }
}

TEST(Rescale, IdentityAndHalving) {
    oracle::Gen g(17);
    const auto s = spaces::discrete(3);
    const MonicPoly alpha = g.monic(s, 3);
    const MonicPoly same = rescale_poly(alpha, 1.0);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(sup_norm(same.coeff(k) - alpha.coeff(k)), 0.0);

    const Element a = g.element(s);
    const MonicPoly half = rescale_poly(MonicPoly({-a, Element::constant(s, 0.0)}), 0.5);
    EXPECT_LE(sup_norm(half.coeff(0) + 0.25 * a), 1e-16);
    for (std::size_t w = 0; w < s.size(); ++w) {
        const auto r = oracle::roots(half.lower_at(w));
        const cplx sq = std::sqrt(a[w]);
        for (auto x : r) EXPECT_NEAR(std::min(std::abs(x - 0.5 * sq), std::abs(x + 0.5 * sq)), 0.0, 1e-12);
    }
}

TEST(Rescale, NewtonSumsShrink) {
    oracle::Gen g(18);
    const auto s = spaces::discrete(3);
    const MonicPoly alpha = g.monic(s, 4, 2.0);
    const auto base = newton_sums(alpha, 3);
    for (double mu : {1e-1, 1e-2}) {
        const auto sc = newton_sums(rescale_poly(alpha, mu), 3);
        for (std::size_t j = 1; j <= 3; ++j)
            EXPECT_LE(sup_norm(sc[j]), std::pow(mu, static_cast<double>(j)) * sup_norm(base[j]) * (1.0 + 1e-12) + 1e-300);
    }
}

TEST(ComplexPoly, CompanionRootsMatchAberth) {
    oracle::Gen g(19);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = g.size(1, 8);
        std::vector<cplx> lower(n);
        for (auto& c : lower) c = g.disk(2.0);
        auto a = cpoly::companion_roots(lower);
        auto b = oracle::roots(lower);
        ASSERT_EQ(a.size(), n);
        for (auto r : a) {
            double best = 1e300;
            for (auto q : b) best = std::min(best, std::abs(r - q));
            EXPECT_LE(best, 1e-7);
        }
    }
}
