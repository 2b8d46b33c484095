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
#include <numbers>
#include <set>
#include <vector>

#include "oracles.hpp"

using namespace extalg;

namespace {

constexpr double kPiD = std::numbers::pi;

MonicPoly constant_quadratic(const CharacterSpace& s, cplx a0) {
    return MonicPoly({Element::constant(s, a0), Element::constant(s, 0.0)});
}

/// (x - e^{pi i t})(x - e^{-pi i t}) over the interval.
MonicPoly circle_example(const CharacterSpace& I) {
    const Element t = Element::coordinate(I);
    const Element r1 = t.map([](cplx x) { return std::exp(cplx(0.0, kPiD * x.real())); });
    const Element r2 = t.map([](cplx x) { return std::exp(cplx(0.0, -kPiD * x.real())); });
    return MonicPoly::from_roots({r1, r2});
}

}  // namespace

TEST(BuildFibration, SimpleAndDoubleRoots) {
    const auto s = spaces::discrete(3);
    const auto f = build_fibration(constant_quadratic(s, -1.0));
    for (std::size_t w = 0; w < 3; ++w) {
        ASSERT_EQ(f.distinct_count(w), 2u);
        EXPECT_NEAR(std::abs(f.fibre(w)[0].centre + 1.0), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(f.fibre(w)[1].centre - 1.0), 0.0, 1e-14);
        EXPECT_EQ(f.fibre(w)[0].multiplicity, 1u);
    }
    const auto d = build_fibration(constant_quadratic(s, 0.0));
    for (std::size_t w = 0; w < 3; ++w) {
        ASSERT_EQ(d.distinct_count(w), 1u);
        EXPECT_EQ(d.fibre(w)[0].multiplicity, 2u);
        EXPECT_EQ(std::abs(d.fibre(w)[0].centre), 0.0);
    }
    EXPECT_EQ(d.collapsed_size(), 3u);
    EXPECT_EQ(expanded_space(d).size(), 6u);
}

TEST(BuildFibration, CircleExampleFibres) {
    const auto I = spaces::interval(64);
    const auto f = build_fibration(circle_example(I));
    EXPECT_EQ(f.distinct_count(0), 1u);
    EXPECT_EQ(f.fibre(0)[0].multiplicity, 2u);
    EXPECT_EQ(f.distinct_count(63), 1u);
    for (std::size_t w = 1; w < 63; ++w) EXPECT_EQ(f.distinct_count(w), 2u);
    EXPECT_EQ(f.collapsed_size(), 2u * 64u - 2u);
}

TEST(BuildFibration, InvariantsOnRandomPolys) {
    oracle::Gen g(41);
    const auto s = spaces::discrete(6);
    for (int trial = 0; trial < 50; ++trial) {
        const MonicPoly alpha = g.monic(s, g.size(1, 6));
        const auto f = build_fibration(alpha);
        for (std::size_t w = 0; w < s.size(); ++w) {
            std::size_t total = 0;
            for (const auto& c : f.fibre(w)) {
                total += c.multiplicity;
                const double val = std::abs(cpoly::eval(alpha.at(w), c.centre));
                EXPECT_LE(val, 1e-7 * alpha.scale());
            }
            EXPECT_EQ(total, alpha.degree());
            // Against the oracle roots.
            for (auto r : oracle::roots(alpha.lower_at(w))) {
                double best = 1e300;
                for (const auto& c : f.fibre(w)) best = std::min(best, std::abs(c.centre - r));
                EXPECT_LE(best, 1e-7);
            }
        }
    }
}

TEST(GelfandAH, Examples) {
    oracle::Gen g(42);
    const auto s = spaces::discrete(3);
    const AHExtension ext(g.monic(s, 3));
    const auto f = build_fibration(ext.alpha());
    const Element a = g.element(s);
    for (std::size_t w = 0; w < 3; ++w)
        for (const auto& c : f.fibre(w)) {
            EXPECT_EQ(gelfand_ah(embed(ext, a), f, w, c.centre), a[w]);
            EXPECT_NEAR(std::abs(gelfand_ah(xbar(ext), f, w, c.centre) - c.centre), 0.0, 1e-12);
        }
    EXPECT_THROW(gelfand_ah(xbar(ext), f, 0, cplx(50.0, 0.0)), PointNotInFibration);
}

TEST(GelfandAH, BoundedByNorm) {
    oracle::Gen g(43);
    const auto s = spaces::discrete(4);
    for (int trial = 0; trial < 200; ++trial) {
        const AHExtension ext(g.monic(s, g.size(1, 4), 1.5));
        const AHElement u = g.ah(ext, 2.0);
        EXPECT_LE(fibration_sup(u, build_fibration(ext.alpha())), ah_norm(u) * (1.0 + 1e-9));
    }
}

TEST(RootSeparation, Examples) {
    const auto s = spaces::discrete(2);
    const auto sep = root_separation(build_fibration(constant_quadratic(s, -1.0)));
    for (double e : sep.per_character) EXPECT_NEAR(e, 2.0, 1e-14);
    EXPECT_NEAR(sep.global, 2.0, 1e-14);
    const auto dbl = root_separation(build_fibration(constant_quadratic(s, 0.0)));
    EXPECT_TRUE(std::isinf(dbl.global));
}

TEST(RootSeparation, ScalesLinearly) {
    oracle::Gen g(44);
    const auto s = spaces::discrete(3);
    const MonicPoly alpha = g.monic(s, 3);
    const double e1 = root_separation(build_fibration(alpha)).global;
    const double e2 = root_separation(build_fibration(rescale_poly(alpha, 0.25))).global;
    EXPECT_NEAR(e2, 0.25 * e1, 1e-9);
}

TEST(LocalTrivialization, ConstantCoefficients) {
    const auto s = spaces::interval(10);
    const auto f = build_fibration(constant_quadratic(s, -1.0));
    const auto lt = local_trivialization(f, 4, 0.2);
    EXPECT_EQ(lt.V.size(), 10u);
    ASSERT_EQ(lt.W.size(), 2u);
    EXPECT_EQ(lt.W[0].size(), 10u);
    EXPECT_EQ(lt.W[1].size(), 10u);
}

TEST(LocalTrivialization, CircleExampleAtOneHalf) {
    const auto I = spaces::interval(513);
    const auto f = build_fibration(circle_example(I));
    const std::size_t k0 = 256;  // t = 1/2, roots +-i
    const auto lt = local_trivialization(f, k0, 0.1);
    ASSERT_EQ(lt.W.size(), 2u);
    EXPECT_NEAR(std::abs(f.fibre(k0)[0].centre - cplx(0.0, -1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(f.fibre(k0)[1].centre - cplx(0.0, 1.0)), 0.0, 1e-12);
    // V is an interval of indices around k0.
    EXPECT_GT(lt.V.size(), 1u);
    for (std::size_t k = 1; k < lt.V.size(); ++k) EXPECT_EQ(lt.V[k], lt.V[k - 1] + 1);
    EXPECT_LE(lt.V.front(), k0);
    EXPECT_GE(lt.V.back(), k0);
    EXPECT_GT(lt.V.front(), 0u);
    EXPECT_LT(lt.V.back(), 512u);
}

TEST(LocalTrivialization, PostconditionsReplay) {
    oracle::Gen g(45);
    const auto s = spaces::plane_grid(6, 6, -0.3, 0.3, -0.3, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        const Element c0 = Element::constant(s, g.disk(1.0));
        const Element z = Element::coordinate(s);
        const MonicPoly alpha({c0 + 0.2 * z, Element::constant(s, 0.0), Element::constant(s, g.disk(0.3))});
        const auto f = build_fibration(alpha);
        const std::size_t k0 = g.size(0, s.size() - 1);
        const double rho = 0.25 * separation_at(f.fibre(k0));
        LocalTrivialization lt;
        try {
            lt = local_trivialization(f, k0, rho);
        } catch (const DegenerateNeighborhood&) {
            continue;
        }
        const std::set<std::size_t> V(lt.V.begin(), lt.V.end());
        std::set<std::pair<std::size_t, std::size_t>> seen;
        std::size_t total = 0;
        for (const auto& Wi : lt.W) {
            std::set<std::size_t> proj;
            for (const auto& pt : Wi) {
                EXPECT_TRUE(seen.insert(pt).second) << "W_i overlap";
                proj.insert(pt.first);
            }
            EXPECT_EQ(proj, V) << "projection not onto V";
            total += Wi.size();
        }
        std::size_t over_v = 0;
        for (auto w : V) over_v += f.distinct_count(w);
        EXPECT_EQ(total, over_v);
    }
}

TEST(LocalTrivialization, RejectsLargeRadius) {
    const auto s = spaces::interval(4);
    const auto f = build_fibration(constant_quadratic(s, -1.0));
    EXPECT_THROW(local_trivialization(f, 0, 1.0), CannotSeparate);
}

TEST(FibreSeparator, Examples) {
    const auto s = spaces::discrete(2);
    const AHExtension ext(constant_quadratic(s, -1.0));
    const auto f = build_fibration(ext.alpha());
    // Roots ordered (-1, 1); choose 1.
    const AHElement g = fibre_separator(ext, f, 0, 1);
    EXPECT_NEAR(std::abs(g.coeff(0)[0] - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g.coeff(1)[0] - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(cpoly::eval(g.at(0), 1.0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(cpoly::eval(g.at(0), -1.0)), 0.0, 1e-15);

    const AHExtension dbl(constant_quadratic(s, 0.0));
    const AHElement one = fibre_separator(dbl, build_fibration(dbl.alpha()), 0, 0);
    EXPECT_EQ(one.coeff(0)[0], cplx(1.0));
    EXPECT_EQ(one.coeff(1)[0], cplx(0.0));
}

TEST(FibreSeparator, OneHotOnRandomFibres) {
    oracle::Gen g(46);
    const auto s = spaces::discrete(1);
    int checked = 0;
    while (checked < 50) {
        const std::size_t n = g.size(2, 5);
        const MonicPoly alpha = g.monic(s, n, 1.5);
        const auto f = build_fibration(alpha);
        if (separation_at(f.fibre(0)) < 0.1) continue;
        const AHExtension ext(alpha);
        for (std::size_t i = 0; i < f.distinct_count(0); ++i) {
            const AHElement sep = fibre_separator(ext, f, 0, i);
            for (std::size_t j = 0; j < f.distinct_count(0); ++j)
                EXPECT_NEAR(std::abs(cpoly::eval(sep.at(0), f.fibre(0)[j].centre) - (i == j ? 1.0 : 0.0)), 0.0, 1e-10);
        }
        ++checked;
    }
}

TEST(LoopComponents, ConstantSheetsOverLoop) {
    const auto s = spaces::circle(32);
    const auto top = loop_components(build_fibration(constant_quadratic(s, -1.0)));
    EXPECT_EQ(top.component_count(), 2u);
    EXPECT_EQ(top.loops.size(), 2u);
    for (bool c : top.component_cyclic) EXPECT_TRUE(c);
}

TEST(LoopComponents, CircleExampleIsOneLoop) {
    const auto I = spaces::interval(128);
    const auto f = build_fibration(circle_example(I));
    const auto top = loop_components(f);
    EXPECT_EQ(top.component_count(), 1u);
    ASSERT_EQ(top.loops.size(), 1u);
    EXPECT_EQ(top.loops[0].size(), f.collapsed_size());
    // The fibre coordinate winds once around the loop.
    const Element lambda = gelfand_on(xbar(AHExtension(f.alpha())), f, top.space);
    EXPECT_EQ(winding_number(lambda, top.loops[0]), 1);
}

TEST(LoopComponents, SquareRootMonodromy) {
    const auto s = spaces::circle(64, 0.5);
    const Element z = Element::coordinate(s);
    const auto f = build_fibration(MonicPoly({-z, Element::constant(s, 0.0)}));
    const auto top = loop_components(f);
    EXPECT_EQ(top.component_count(), 1u);
    ASSERT_EQ(top.loops.size(), 1u);
    EXPECT_EQ(top.loops[0].size(), 128u);
}

TEST(LoopComponents, NeedsAdjacency) {
    const auto s = spaces::discrete(3);
    EXPECT_THROW(loop_components(build_fibration(constant_quadratic(s, -1.0))), InvalidSpace);
}

TEST(Fibration, InvertibilityMatchesFibreZeros) {
    oracle::Gen g(47);
    const auto s = spaces::discrete(5);
    for (int trial = 0; trial < 100; ++trial) {
        const AHExtension ext(g.monic(s, g.size(1, 4)));
        const AHElement u = g.ah(ext);
        const auto f = build_fibration(ext.alpha());
        const double inf = fibration_inf(u, f);
        if (has_margin(ah_resultant(u))) {
            EXPECT_GT(inf, 0.0);
        } else {
            EXPECT_LE(inf, 1e-6);
        }
    }
}
