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

// Logarithmic extensions: local logarithms, branch-enumerated fibrations,
// logarithm descent, winding numbers, and finite log towers.

#ifndef EXTALG_LOG_EXT_HPP
#define EXTALG_LOG_EXT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "algebra_core.hpp"
#include "arens_hoffman.hpp"
#include "averaging.hpp"
#include "cole_tower.hpp"
#include "fibration.hpp"

namespace extalg {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A patch of characters carrying one branch of log a.
struct LogPatch {
    std::vector<std::size_t> members;
    /// The log on the patch has argument in (cut - 2 pi, cut], shifted by 2 pi i k.
    double cut = kPi;
    long shift = 0;
    double sup = 0.0;
};

struct LogNormChoice {
    double t = 1.0;
    std::vector<LogPatch> patches;
};

namespace detail {

inline double principal_arg_ratio(cplx num, cplx den) { return std::arg(num / den); }

inline cplx patch_log(cplx v, const LogPatch& p) {
    return detail::log_with_cut(v, p.cut) + cplx(0.0, kTwoPi * static_cast<double>(p.shift));
}

}  // namespace detail

/// Covers the base by patches on which a stays within an argument window of
/// 3 pi / 2, each with its own log; t is the largest patch sup rounded up to
/// a multiple of pi, and at least `floor`.
inline LogNormChoice choose_norm_param_log(const Element& a, double floor = 1.0) {
    invert(a);
    const auto& space = a.space();
    const std::size_t n = space.size();
    constexpr double kSpread = 1.5 * kPi + 1e-12;
    std::vector<bool> covered(n, false);
    LogNormChoice out;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (covered[seed]) continue;
        std::vector<double> unwrapped(n, 0.0);
        double lo = std::arg(a[seed]), hi = lo;
        unwrapped[seed] = lo;
        covered[seed] = true;
        LogPatch patch;
        patch.members.push_back(seed);
        auto try_add = [&](std::size_t p, std::size_t from) {
            const double arg = unwrapped[from] + detail::principal_arg_ratio(a[p], a[from]);
            const double nlo = std::min(lo, arg), nhi = std::max(hi, arg);
            if (nhi - nlo > kSpread) return false;
            lo = nlo;
            hi = nhi;
            unwrapped[p] = arg;
            covered[p] = true;
            patch.members.push_back(p);
            return true;
        };
        if (space.has_adjacency()) {
            std::deque<std::size_t> queue{seed};
            while (!queue.empty()) {
                const std::size_t v = queue.front();
                queue.pop_front();
                for (auto nb : space.neighbours(v))
                    if (!covered[nb] && try_add(nb, v)) queue.push_back(nb);
            }
        } else {
            for (std::size_t p = seed + 1; p < n; ++p)
                if (!covered[p]) try_add(p, seed);
        }
        std::sort(patch.members.begin(), patch.members.end());
        patch.cut = 0.5 * (lo + hi) + kPi;
        // Pick the branch shift minimising the patch sup.
        double best = std::numeric_limits<double>::infinity();
        long best_k = 0;
        for (long k = -4; k <= 4; ++k) {
            patch.shift = k;
            double sup = 0.0;
            for (auto p : patch.members) sup = std::max(sup, std::abs(detail::patch_log(a[p], patch)));
            if (sup < best - 1e-15) {
                best = sup;
                best_k = k;
            }
        }
        patch.shift = best_k;
        patch.sup = best;
        out.patches.push_back(std::move(patch));
    }
    double sup = 0.0;
    for (const auto& p : out.patches) sup = std::max(sup, p.sup);
    out.t = std::max(floor, std::ceil(sup / kPi - 1e-9) * kPi);
    return out;
}

struct LogPoint {
    std::size_t character;
    long branch;
    cplx lambda;
};

/// {(w, lambda) : e^lambda = a(w), |lambda| <= t} with its sheet topology.
struct LogFibration {
    CharacterSpace base;
    Element a;
    double t;
    std::vector<LogPoint> points;
    /// Points with match edges; cyclic components carry loop flags.
    FibreTopology topology;

    std::vector<std::size_t> points_over(std::size_t w) const {
        std::vector<std::size_t> out;
        for (std::size_t p = 0; p < points.size(); ++p)
            if (points[p].character == w) out.push_back(p);
        return out;
    }
};

/// Branches k with |Log a + 2 pi i k| <= t, in increasing k.
inline std::vector<long> log_branches(cplx value, double t) {
    const cplx L = std::log(value);
    const double slack = t * (1.0 + 1e-12);
    std::vector<long> out;
    const long k0 = static_cast<long>(std::ceil((-slack - L.imag()) / kTwoPi));
    const long k1 = static_cast<long>(std::floor((slack - L.imag()) / kTwoPi));
    for (long k = k0; k <= k1; ++k)
        if (std::abs(L + cplx(0.0, kTwoPi * static_cast<double>(k))) <= slack) out.push_back(k);
    return out;
}

inline LogFibration build_log_fibration(const Element& a, double t) {
    invert(a);
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidNormParameter("t must be positive and finite");
    const auto& base = a.space();
    std::vector<LogPoint> points;
    std::vector<std::size_t> first(base.size() + 1, 0);
    for (std::size_t w = 0; w < base.size(); ++w) {
        first[w] = points.size();
        const cplx L = std::log(a[w]);
        for (long k : log_branches(a[w], t)) points.push_back({w, k, L + cplx(0.0, kTwoPi * static_cast<double>(k))});
        if (points.size() == first[w])
            throw InvalidNormParameter("no logarithm of modulus <= t over '" + base.id(w) + "'");
    }
    first[base.size()] = points.size();

    // Each point follows its nearest neighbour across an edge when that is
    // closer than pi and at most half as far as the runner-up.
    auto match = [&](std::size_t from, std::size_t to) {
        detail::EdgeSet out;
        for (std::size_t p = first[from]; p < first[from + 1]; ++p) {
            double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
            std::size_t best = 0;
            for (std::size_t q = first[to]; q < first[to + 1]; ++q) {
                const double d = std::abs(points[p].lambda - points[q].lambda);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    best = q;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            if (d1 < kPi && d1 <= 0.5 * d2) out.insert({std::min(p, best), std::max(p, best)});
        }
        return out;
    };
    detail::EdgeSet edges, regular;
    for (const auto& e : base.edges()) {
        const auto fwd = match(e.from, e.to);
        const auto bwd = match(e.to, e.from);
        for (const auto& k : fwd) {
            edges.insert(k);
            if (bwd.count(k)) regular.insert(k);
        }
        edges.insert(bwd.begin(), bwd.end());
    }
    std::vector<std::size_t> character;
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    for (const auto& pt : points) {
        character.push_back(pt.character);
        ids.push_back(base.id(pt.character) + "@" + std::to_string(pt.branch));
        coords.push_back(pt.lambda);
    }
    auto topo = detail::assemble_topology(base, std::move(character), std::move(ids), std::move(coords), edges, regular);
    return LogFibration{base, a, t, std::move(points), std::move(topo)};
}

/// The coordinate lambda on the log fibration's point space.
inline Element log_coordinate(const LogFibration& f) {
    return Element::generate(f.topology.space, [&](std::size_t p) { return f.points[p].lambda; });
}

struct DescentResult {
    Element log;
    /// k with eta(w) nearest zeta^k, per character.
    std::vector<int> classes;
};

/// Given f invertible and h in A_alpha with exp(h) = f on the fibration,
/// returns g with exp(g) = f on the base.
inline DescentResult log_descent(const Element& f, const AHElement& h, const AveragingOperator& op) {
    if (!(h.ext() == op.ext())) throw MixedExtensions("h and T belong to different extensions");
    f.require_same_space(h.coeff(0));
    const auto fib = build_fibration(op.ext().alpha());
    const auto& base = f.space();
    for (std::size_t w = 0; w < base.size(); ++w) {
        const auto hw = h.at(w);
        for (auto r : fib.expanded_roots(w)) {
            const double err = std::abs(std::exp(cpoly::eval(hw, r)) - f[w]);
            if (!(err <= 1e-9 * std::max(1.0, std::abs(f[w]))))
                throw NotAnExpWitness("exp(h) differs from f over '" + base.id(w) + "'");
        }
    }
    const std::size_t n = op.ext().degree();
    const double nn = static_cast<double>(n);
    const Element g = t_formula(op, h);
    std::vector<int> classes(base.size(), 0);
    std::vector<cplx> out(base.size());
    for (std::size_t w = 0; w < base.size(); ++w) {
        const cplx eta = std::exp(-g[w]) * f[w];
        const double ang = std::arg(eta);
        long k = std::lround(ang * nn / kTwoPi);
        const double dist = std::abs(ang - kTwoPi * static_cast<double>(k) / nn);
        k = ((k % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
        const cplx zeta_k = std::polar(1.0, kTwoPi * static_cast<double>(k) / nn);
        if (dist > kPi / (4.0 * nn) || std::abs(eta - zeta_k) > 1e-6)
            throw UnclassifiablePoint("e^{-g} f is not an n-th root of unity over '" + base.id(w) + "'");
        classes[w] = static_cast<int>(k);
        out[w] = g[w] + cplx(0.0, kTwoPi * static_cast<double>(k) / nn);
    }
    Element result(base, std::move(out));
    const double err = sup_norm(exp_elem(result) - f);
    if (!(err <= 1e-8)) throw DescentFailed("exp of the descended log misses f by " + std::to_string(err));
    return {std::move(result), std::move(classes)};
}

/// (1 / 2 pi) times the total argument increment of e around `loop`.
inline long winding_number(const Element& e, const std::vector<std::size_t>& loop) {
    if (loop.size() < 2) throw InvalidSpace("a loop needs at least two points");
    const double thr = zero_threshold(e);
    for (auto p : loop)
        if (std::abs(e[p]) <= thr) throw NotInvertibleOnLoop("value vanishes at '" + e.space().id(p) + "'");
    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const std::size_t cur = loop[k], next = loop[(k + 1) % loop.size()];
        const double step = std::arg(e[next] / e[cur]);
        if (std::abs(step) >= kPi * (1.0 - 1e-12))
            throw SamplingTooCoarse("argument step of pi or more between '" + e.space().id(cur) + "' and '" +
                                    e.space().id(next) + "'");
        total += step;
    }
    return std::lround(total / kTwoPi);
}

/// Winding numbers of e around every declared loop of its space.
inline std::vector<long> windings(const Element& e) {
    std::vector<long> out;
    for (const auto& loop : e.space().loops()) out.push_back(winding_number(e, loop));
    return out;
}

inline bool has_continuous_log(const Element& e) {
    for (long w : windings(e))
        if (w != 0) return false;
    return true;
}

/// A log of e that is continuous along every adjacency edge (argument steps
/// below pi), or nullopt when the edges force a nonzero period.
inline std::optional<Element> continuous_log(const Element& e) {
    const auto& space = e.space();
    if (!is_invertible(e)) return std::nullopt;
    std::vector<cplx> l(space.size());
    std::vector<bool> seen(space.size(), false);
    for (std::size_t s = 0; s < space.size(); ++s) {
        if (seen[s]) continue;
        seen[s] = true;
        l[s] = std::log(e[s]);
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (auto nb : space.neighbours(v)) {
                if (seen[nb]) continue;
                seen[nb] = true;
                l[nb] = cplx(std::log(std::abs(e[nb])), l[v].imag() + std::arg(e[nb] / e[v]));
                queue.push_back(nb);
            }
        }
    }
    for (const auto& edge : space.edges()) {
        const double step = std::arg(e[edge.to] / e[edge.from]);
        if (std::abs(l[edge.to].imag() - l[edge.from].imag() - step) > 1e-9) return std::nullopt;
    }
    return Element(space, std::move(l));
}

/// Elements u_j summing to 1 with logs l_j of a on their supports.
struct PartitionOfUnity {
    std::vector<Element> u;
    std::vector<Element> l;
};

/// Validates the partition against a.
inline void check_partition(const PartitionOfUnity& pu, const Element& a) {
    if (pu.u.empty() || pu.u.size() != pu.l.size()) throw InvalidPartition("need matching u_j and l_j");
    Element sum = Element::constant(a.space(), 0.0);
    for (const auto& u : pu.u) sum = sum + u;
    if (sup_norm(sum - 1.0) > 1e-12) throw InvalidPartition("the u_j do not sum to 1");
    for (std::size_t j = 0; j < pu.u.size(); ++j)
        for (std::size_t w = 0; w < a.size(); ++w)
            if (std::abs(pu.u[j][w]) > 0.0 && std::abs(std::exp(pu.l[j][w]) - a[w]) > 1e-10 * std::abs(a[w]))
                throw InvalidPartition("exp(l_j) differs from a on the support of u_j");
}

/// Indicator partition of the patches; l_j is the patch log extended by the
/// same branch wherever it is defined, and 0 on its cut.
inline PartitionOfUnity partition_from_patches(const Element& a, const LogNormChoice& choice) {
    PartitionOfUnity pu;
    const auto& space = a.space();
    for (const auto& patch : choice.patches) {
        std::vector<cplx> u(space.size(), 0.0);
        for (auto p : patch.members) u[p] = 1.0;
        pu.u.emplace_back(space, std::move(u));
        pu.l.push_back(Element::generate(space, [&](std::size_t w) {
            if (detail::distance_to_ray(a[w], patch.cut) <= zero_threshold(a)) return cplx{};
            return detail::patch_log(a[w], patch);
        }));
    }
    check_partition(pu, a);
    return pu;
}

/// sum_k q_k s_k with s_k = sum_j u_j l_j^k.
inline Element log_t_operator(const PartitionOfUnity& pu, const std::vector<Element>& q) {
    if (pu.u.empty()) throw InvalidPartition("empty partition");
    const auto& space = pu.u.front().space();
    Element acc = Element::constant(space, 0.0);
    for (std::size_t j = 0; j < pu.u.size(); ++j) {
        // Horner in l_j, weighted by u_j.
        Element h = Element::constant(space, 0.0);
        for (std::size_t k = q.size(); k-- > 0;) h = h * pu.l[j] + q[k];
        acc = acc + pu.u[j] * h;
    }
    return acc;
}

/// A parameter interval with open or closed ends.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = false;
};

namespace detail {

inline std::optional<Arc> intersect(const Arc& x, const Arc& y) {
    Arc r;
    if (x.lo > y.lo) {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed;
    } else if (y.lo > x.lo) {
        r.lo = y.lo;
        r.lo_closed = y.lo_closed;
    } else {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed && y.lo_closed;
    }
    if (x.hi < y.hi) {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed;
    } else if (y.hi < x.hi) {
        r.hi = y.hi;
        r.hi_closed = y.hi_closed;
    } else {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed && y.hi_closed;
    }
    if (r.lo > r.hi || (r.lo == r.hi && !(r.lo_closed && r.hi_closed))) return std::nullopt;
    return r;
}

}  // namespace detail

/// For a = id on the circle, parametrised by e^{i theta}: the image under the
/// projection of the fibration points over the open arc (arc_lo, arc_hi) whose
/// coordinate lies in the open disk B(c, r). Branches are lambda = i(theta + 2 pi k).
inline std::vector<Arc> example_region(double t, double arc_lo, double arc_hi, cplx c, double r) {
    std::vector<Arc> pieces;
    const double h2 = r * r - c.real() * c.real();
    if (h2 <= 0.0) return pieces;
    const double h = std::sqrt(h2);
    const Arc arc{arc_lo, arc_hi, false, false};
    const long kmax = static_cast<long>(std::ceil((t + std::max(std::abs(arc_lo), std::abs(arc_hi))) / kTwoPi)) + 1;
    for (long k = -kmax; k <= kmax; ++k) {
        const double shift = kTwoPi * static_cast<double>(k);
        const Arc disk{c.imag() - shift - h, c.imag() - shift + h, false, false};
        const Arc bound{-t - shift, t - shift, true, true};
        auto x = detail::intersect(arc, disk);
        if (!x) continue;
        x = detail::intersect(*x, bound);
        if (x) pieces.push_back(*x);
    }
    std::sort(pieces.begin(), pieces.end(), [](const Arc& x, const Arc& y) {
        if (x.lo != y.lo) return x.lo < y.lo;
        return x.lo_closed && !y.lo_closed;
    });
    std::vector<Arc> merged;
    for (const auto& p : pieces) {
        if (!merged.empty()) {
            auto& m = merged.back();
            const bool touches = p.lo < m.hi || (p.lo == m.hi && (p.lo_closed || m.hi_closed));
            if (touches) {
                if (p.hi > m.hi || (p.hi == m.hi && p.hi_closed)) {
                    m.hi = p.hi;
                    m.hi_closed = p.hi_closed || (p.hi == m.hi && m.hi_closed);
                }
                continue;
            }
        }
        merged.push_back(p);
    }
    return merged;
}

struct LogTowerRound {
    std::size_t round = 0;
    std::vector<std::string> adjoined;
    double coverage = 0.0;
    std::size_t points = 0;
    double t_max = 0.0;
    /// Largest |winding| of a pulled-back test element over the top-space loops.
    long max_winding = 0;
};

struct LogTowerResult {
    Tower tower;
    std::vector<LogTowerRound> rounds;
};

namespace detail {

inline bool has_exact_log(const Element& e) {
    const auto l = continuous_log(e);
    if (!l) return false;
    return sup_norm(exp_elem(*l) - e) <= 1e-9;
}

}  // namespace detail

/// Adjoins logarithms round by round. Each round samples up to S invertible
/// elements of the top stage without a continuous log (pulled-back test
/// elements first, then seeded products of them and their inverses) and
/// adjoins one log stage per sample.
inline LogTowerResult log_tower(const CharacterSpace& base, const std::vector<Element>& tests, std::size_t rounds,
                                std::size_t samples, std::uint64_t seed = 1, std::size_t cap = kDefaultPointCap) {
    if (rounds > 4) throw CapExceeded("at most 4 rounds");
    if (samples > 32) throw CapExceeded("at most 32 samples per round");
    for (const auto& e : tests) {
        if (!(e.space() == base)) throw SpaceMismatch("test element not on the base");
        invert(e);
    }
    LogTowerResult res{Tower(base, cap), {}};
    std::mt19937_64 rng(seed);
    auto report = [&](std::size_t r, std::vector<std::string> adjoined) {
        auto& tower = res.tower;
        LogTowerRound out{r, std::move(adjoined), 0.0, tower.top().size(), 0.0, 0};
        std::size_t ok = 0;
        for (const auto& e : tests) {
            const Element pulled = tower.embed(0, tower.height(), e);
            if (detail::has_exact_log(pulled)) ++ok;
            for (long w : windings(pulled)) out.max_winding = std::max(out.max_winding, std::abs(w));
        }
        out.coverage = tests.empty() ? 1.0 : static_cast<double>(ok) / static_cast<double>(tests.size());
        for (std::size_t k = 1; k <= tower.height(); ++k) out.t_max = std::max(out.t_max, tower.stage(k).t);
        res.rounds.push_back(std::move(out));
    };
    report(0, {});
    for (std::size_t r = 1; r <= rounds; ++r) {
        auto& tower = res.tower;
        std::vector<Element> gens;
        for (const auto& e : tests) gens.push_back(tower.embed(0, tower.height(), e));
        std::vector<std::pair<Element, std::string>> picks;
        for (std::size_t i = 0; i < gens.size() && picks.size() < samples; ++i)
            if (!detail::has_exact_log(gens[i])) picks.emplace_back(gens[i], "test" + std::to_string(i));
        std::uniform_int_distribution<int> expo(-1, 1);
        for (std::size_t draw = 0; draw < 4 * samples && picks.size() < samples && gens.size() > 1; ++draw) {
            Element prod = Element::constant(tower.top(), 1.0);
            std::string label = "prod";
            bool trivial = true;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                const int k = expo(rng);
                label += (i == 0 ? "(" : ",") + std::to_string(k);
                if (k != 0) trivial = false;
                if (k == 1) prod = prod * gens[i];
                if (k == -1) prod = prod * invert(gens[i]);
            }
            label += ")";
            if (!trivial && !detail::has_exact_log(prod)) picks.emplace_back(prod, label);
        }
        std::vector<std::string> adjoined;
        for (auto& [sample, label] : picks) {
            // The sample was drawn on an earlier top stage; carry it up.
            std::size_t level = 0;
            for (std::size_t k = 0; k <= tower.height(); ++k)
                if (tower.space(k) == sample.space()) level = k;
            const Element e = tower.embed(level, tower.height(), sample);
            if (detail::has_exact_log(e)) continue;
            const auto choice = choose_norm_param_log(e);
            const auto fib = build_log_fibration(e, choice.t);
            TowerStage st{fib.topology.space, {}, {}, "log:" + label, choice.t, log_coordinate(fib)};
            std::vector<double> count(tower.top().size(), 0.0);
            for (const auto& pt : fib.points) count[pt.character] += 1.0;
            for (const auto& pt : fib.points) {
                st.parent.push_back(pt.character);
                st.weight.push_back(1.0 / count[pt.character]);
            }
            tower.extend_with(std::move(st));
            adjoined.push_back(label);
        }
        report(r, std::move(adjoined));
    }
    return res;
}

}  // namespace extalg

#endif  // EXTALG_LOG_EXT_HPP
