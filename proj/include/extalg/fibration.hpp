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

// The character space of A_alpha: pairs (w, lambda) with alpha_w(lambda) = 0.

#ifndef EXTALG_FIBRATION_HPP
#define EXTALG_FIBRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "algebra_core.hpp"
#include "arens_hoffman.hpp"
#include "complex_poly.hpp"
#include "poly_resultant.hpp"

namespace extalg {

inline constexpr double kRootClusterTolerance = 1e-7;

/// Fibres of alpha over every base character, clustered by multiplicity.
class FibredSpace {
   public:
    FibredSpace(MonicPoly alpha, std::vector<std::vector<cpoly::RootCluster>> fibres)
        : alpha_(std::move(alpha)), fibres_(std::move(fibres)) {
        offsets_.push_back(0);
        for (const auto& f : fibres_) offsets_.push_back(offsets_.back() + f.size());
    }

    const MonicPoly& alpha() const noexcept { return alpha_; }
    const CharacterSpace& base() const noexcept { return alpha_.space(); }
    std::size_t degree() const noexcept { return alpha_.degree(); }

    const std::vector<cpoly::RootCluster>& fibre(std::size_t w) const { return fibres_.at(w); }
    std::size_t distinct_count(std::size_t w) const { return fibres_.at(w).size(); }

    /// Number of points in the distinct-collapsed view.
    std::size_t collapsed_size() const noexcept { return offsets_.back(); }
    /// Index of (w, i) in the collapsed view.
    std::size_t collapsed_index(std::size_t w, std::size_t i) const { return offsets_.at(w) + i; }
    /// Inverse of collapsed_index.
    std::pair<std::size_t, std::size_t> collapsed_point(std::size_t p) const {
        const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), p);
        const auto w = static_cast<std::size_t>(it - offsets_.begin()) - 1;
        return {w, p - offsets_[w]};
    }

    /// Roots at w repeated by multiplicity: the multiplicity-expanded view.
    std::vector<cplx> expanded_roots(std::size_t w) const {
        std::vector<cplx> out;
        for (const auto& c : fibres_.at(w))
            for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.centre);
        return out;
    }

    /// Root tolerance at w: 1e-7 (1 + max |coefficient|).
    double tolerance(std::size_t w) const {
        double m = 0.0;
        for (auto c : alpha_.lower_at(w)) m = std::max(m, std::abs(c));
        return kRootClusterTolerance * (1.0 + m);
    }

    /// Index of the listed root at w within tolerance of lambda, if any.
    std::optional<std::size_t> find_root(std::size_t w, cplx lambda) const {
        const auto& f = fibres_.at(w);
        const double tol = tolerance(w);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (std::abs(f[i].centre - lambda) <= std::max(tol, 10.0 * f[i].radius)) return i;
        return std::nullopt;
    }

   private:
    MonicPoly alpha_;
    std::vector<std::vector<cpoly::RootCluster>> fibres_;
    std::vector<std::size_t> offsets_;
};

namespace detail {

inline std::vector<cpoly::RootCluster> fibre_at(const std::vector<cplx>& lower, double tol,
                                                const std::string& id) {
    const auto clusters = cpoly::cluster_roots(cpoly::companion_roots(lower), tol);
    for (std::size_t i = 0; i < clusters.size(); ++i)
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            const double gap = std::abs(clusters[i].centre - clusters[j].centre);
            const double spread = std::max({clusters[i].radius, clusters[j].radius, tol});
            if (gap < 10.0 * spread)
                throw IllConditioned("root clusters over character '" + id + "' are not separated");
        }
    return clusters;
}

}  // namespace detail

inline FibredSpace build_fibration(const MonicPoly& alpha) {
    const auto& base = alpha.space();
    std::vector<std::vector<cpoly::RootCluster>> fibres(base.size());
    for (std::size_t w = 0; w < base.size(); ++w) {
        const auto lower = alpha.lower_at(w);
        double m = 0.0;
        for (auto c : lower) m = std::max(m, std::abs(c));
        fibres[w] = detail::fibre_at(lower, kRootClusterTolerance * (1.0 + m), base.id(w));
    }
    return FibredSpace(alpha, std::move(fibres));
}

inline FibredSpace build_fibration(const CharacterSpace& base, const MonicPoly& alpha) {
    if (!(base == alpha.space())) throw SpaceMismatch("alpha lives on a different space");
    return build_fibration(alpha);
}

/// u-hat(w, lambda) = sum_k b_k(w) lambda^k.
inline cplx gelfand_ah(const AHElement& u, const FibredSpace& f, std::size_t w, cplx lambda) {
    if (w >= f.base().size() || !f.find_root(w, lambda))
        throw PointNotInFibration("lambda is not a root of alpha over this character");
    return cpoly::eval(u.at(w), lambda);
}

/// Max of |u-hat| over the fibration.
inline double fibration_sup(const AHElement& u, const FibredSpace& f) {
    double m = 0.0;
    for (std::size_t w = 0; w < f.base().size(); ++w)
        for (const auto& c : f.fibre(w)) m = std::max(m, std::abs(cpoly::eval(u.at(w), c.centre)));
    return m;
}

/// Min of |u-hat| over the fibration.
inline double fibration_inf(const AHElement& u, const FibredSpace& f) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < f.base().size(); ++w)
        for (const auto& c : f.fibre(w)) m = std::min(m, std::abs(cpoly::eval(u.at(w), c.centre)));
    return m;
}

struct RootSeparation {
    std::vector<double> per_character;
    double global = std::numeric_limits<double>::infinity();
};

inline double separation_at(const std::vector<cpoly::RootCluster>& fibre) {
    double eps = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fibre.size(); ++i)
        for (std::size_t j = i + 1; j < fibre.size(); ++j)
            eps = std::min(eps, std::abs(fibre[i].centre - fibre[j].centre));
    return eps;
}

inline RootSeparation root_separation(const FibredSpace& f) {
    RootSeparation out;
    for (std::size_t w = 0; w < f.base().size(); ++w) {
        out.per_character.push_back(separation_at(f.fibre(w)));
        out.global = std::min(out.global, out.per_character.back());
    }
    return out;
}

struct LocalTrivialization {
    std::vector<std::size_t> V;
    /// W[i]: collapsed fibre points (character, root index) near the i-th root at the centre.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> W;
    double delta = 0.0;
    double rho = 0.0;
};

namespace detail {

/// True when the roots of the monic polynomial with lower coefficients `lower`
/// fall into the disks B(centre_i, rho) with the prescribed counts.
inline bool roots_in_balls(const std::vector<cplx>& lower, const std::vector<cpoly::RootCluster>& centres,
                           double rho) {
    std::vector<int> count(centres.size(), 0);
    for (auto r : cpoly::companion_roots(lower)) {
        bool placed = false;
        for (std::size_t i = 0; i < centres.size(); ++i)
            if (std::abs(r - centres[i].centre) < rho) {
                ++count[i];
                placed = true;
                break;
            }
        if (!placed) return false;
    }
    for (std::size_t i = 0; i < centres.size(); ++i)
        if (count[i] != centres[i].multiplicity) return false;
    return true;
}

inline bool certify_delta(const std::vector<cplx>& lower, const std::vector<cpoly::RootCluster>& centres,
                          double rho, double delta, std::mt19937_64& rng) {
    const std::size_t n = lower.size();
    std::vector<cplx> dirs(n);
    for (std::size_t k = 0; k < n; ++k)
        dirs[k] = std::polar(delta, std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) total *= 3;
    std::vector<cplx> trial(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t k = 0; k < n; ++k) {
            const int digit = static_cast<int>(c % 3) - 1;
            c /= 3;
            trial[k] = lower[k] + static_cast<double>(digit) * dirs[k];
        }
        if (!roots_in_balls(trial, centres, rho)) return false;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        for (std::size_t k = 0; k < n; ++k) {
            const double r = delta * std::sqrt(unit(rng));
            const double th = 2.0 * std::numbers::pi * unit(rng);
            trial[k] = lower[k] + std::polar(r, th);
        }
        if (!roots_in_balls(trial, centres, rho)) return false;
    }
    return true;
}

}  // namespace detail

/// A neighbourhood V of k0 over which the fibre splits into disjoint pieces
/// W_i, each within rho of one root at k0 and projecting onto V.
inline LocalTrivialization local_trivialization(const FibredSpace& f, std::size_t k0, double rho0,
                                                std::uint64_t seed = 0x5eed) {
    const auto& base = f.base();
    if (k0 >= base.size()) throw InvalidSpace("character index out of range");
    const auto& centre = f.fibre(k0);
    const double sep = separation_at(centre);
    if (!(rho0 > 0.0) || !(rho0 < sep / 3.0))
        throw CannotSeparate("rho0 must lie in (0, separation/3)");
    const auto lower0 = f.alpha().lower_at(k0);
    double cmax = 0.0;
    for (auto c : lower0) cmax = std::max(cmax, std::abs(c));
    std::mt19937_64 rng(seed);
    double delta = rho0 * (1.0 + cmax);
    bool certified = false;
    for (int h = 0; h < 60 && !certified; ++h) {
        certified = detail::certify_delta(lower0, centre, rho0, delta, rng);
        if (!certified) delta *= 0.5;
    }
    if (!certified) throw DegenerateNeighborhood("no coefficient radius certified around '" + base.id(k0) + "'");

    auto admissible = [&](std::size_t w) {
        const auto lw = f.alpha().lower_at(w);
        for (std::size_t k = 0; k < lw.size(); ++k)
            if (std::abs(lw[k] - lower0[k]) > delta) return false;
        return detail::roots_in_balls(lw, centre, rho0);
    };

    LocalTrivialization out;
    out.delta = delta;
    out.rho = rho0;
    if (base.has_adjacency()) {
        std::vector<bool> seen(base.size(), false);
        std::deque<std::size_t> queue{k0};
        seen[k0] = true;
        while (!queue.empty()) {
            const std::size_t w = queue.front();
            queue.pop_front();
            out.V.push_back(w);
            for (auto nb : base.neighbours(w))
                if (!seen[nb]) {
                    seen[nb] = true;
                    if (admissible(nb)) queue.push_back(nb);
                }
        }
        std::sort(out.V.begin(), out.V.end());
    } else {
        for (std::size_t w = 0; w < base.size(); ++w)
            if (w == k0 || admissible(w)) out.V.push_back(w);
    }
    out.W.assign(centre.size(), {});
    for (auto w : out.V) {
        const auto& fw = f.fibre(w);
        for (std::size_t j = 0; j < fw.size(); ++j)
            for (std::size_t i = 0; i < centre.size(); ++i)
                if (std::abs(fw[j].centre - centre[i].centre) < rho0) {
                    out.W[i].push_back({w, j});
                    break;
                }
    }
    return out;
}

/// prod_{i != i1} (xbar - lambda_i) / (lambda_{i1} - lambda_i) over the distinct roots at k0.
inline AHElement fibre_separator(const AHExtension& ext, const FibredSpace& f, std::size_t k0, std::size_t i1) {
    const auto& fibre = f.fibre(k0);
    if (i1 >= fibre.size()) throw InvalidElement("root index out of range");
    cpoly::CPoly g{1.0};
    for (std::size_t i = 0; i < fibre.size(); ++i) {
        if (i == i1) continue;
        const cplx denom = fibre[i1].centre - fibre[i].centre;
        const cpoly::CPoly lin{-fibre[i].centre / denom, 1.0 / denom};
        g = cpoly::mul(g, lin);
    }
    std::vector<Element> c;
    for (std::size_t k = 0; k < ext.degree(); ++k)
        c.push_back(Element::constant(ext.space(), k < g.size() ? g[k] : cplx{}));
    return AHElement(ext, std::move(c));
}

/// Sheet structure of the collapsed fibration over an adjacency graph.
struct FibreTopology {
    /// Collapsed fibration points with match edges; loop edges mark oriented cyclic components.
    CharacterSpace space;
    std::vector<std::size_t> component_id;
    std::vector<std::size_t> sheet_id;
    std::vector<bool> component_cyclic;
    /// Oriented cycles of collapsed point indices, one per cyclic component.
    std::vector<std::vector<std::size_t>> loops;
    /// Base character under each point.
    std::vector<std::size_t> character;

    std::size_t component_count() const noexcept { return component_cyclic.size(); }
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    /// Dense labels 0..k-1 in order of first appearance.
    std::vector<std::size_t> labels() {
        std::vector<std::size_t> out(parent.size());
        std::map<std::size_t, std::size_t> dense;
        for (std::size_t i = 0; i < parent.size(); ++i) {
            const auto r = find(i);
            auto it = dense.find(r);
            if (it == dense.end()) it = dense.emplace(r, dense.size()).first;
            out[i] = it->second;
        }
        return out;
    }
};

/// Maps each point of `from` to its nearest point of `to`, requiring the nearest
/// to be at most half as far as the runner-up.
inline std::optional<std::vector<std::size_t>> nearest_map(const std::vector<cpoly::RootCluster>& from,
                                                           const std::vector<cpoly::RootCluster>& to) {
    std::vector<std::size_t> out;
    for (const auto& p : from) {
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        std::size_t best = 0;
        for (std::size_t j = 0; j < to.size(); ++j) {
            const double d = std::abs(p.centre - to[j].centre);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                best = j;
            } else if (d < d2) {
                d2 = d;
            }
        }
        if (!(d1 <= 0.5 * d2)) return std::nullopt;
        out.push_back(best);
    }
    return out;
}

/// Multiplicities mapped onto each target must reproduce the target's multiplicity.
inline bool multiplicities_balance(const std::vector<cpoly::RootCluster>& from,
                                   const std::vector<cpoly::RootCluster>& to, const std::vector<std::size_t>& map) {
    std::vector<int> sum(to.size(), 0);
    for (std::size_t i = 0; i < from.size(); ++i) sum[map[i]] += from[i].multiplicity;
    for (std::size_t j = 0; j < to.size(); ++j)
        if (sum[j] != to[j].multiplicity) return false;
    return true;
}

}  // namespace detail

namespace detail {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

/// Components, sheets and oriented loops of a graph of fibre points lying
/// over `base`. Edges are unordered pairs (p, q) with p < q.
inline FibreTopology assemble_topology(const CharacterSpace& base, std::vector<std::size_t> character,
                                       std::vector<std::string> ids, std::vector<cplx> coords,
                                       const EdgeSet& edges, const EdgeSet& regular) {
    const std::size_t np = ids.size();
    detail::UnionFind comp(np), sheet(np);
    std::vector<std::vector<std::size_t>> adj(np);
    for (const auto& [p, q] : edges) {
        comp.unite(p, q);
        adj[p].push_back(q);
        adj[q].push_back(p);
    }
    for (const auto& [p, q] : regular) sheet.unite(p, q);
    FibreTopology topo{CharacterSpace(std::vector<std::string>{std::string("_")}), comp.labels(), sheet.labels(), {}, {}, {}};
    const std::size_t nc = np == 0 ? 0 : *std::max_element(topo.component_id.begin(), topo.component_id.end()) + 1;
    std::vector<std::vector<std::size_t>> members(nc);
    for (std::size_t p = 0; p < np; ++p) members[topo.component_id[p]].push_back(p);

    std::set<std::pair<std::size_t, std::size_t>> directed;
    for (std::size_t c = 0; c < nc; ++c) {
        const auto& mem = members[c];
        const bool cyclic =
            mem.size() >= 3 && std::all_of(mem.begin(), mem.end(), [&](std::size_t p) { return adj[p].size() == 2; });
        topo.component_cyclic.push_back(cyclic);
        if (!cyclic) continue;
        std::vector<std::size_t> cycle{mem.front()};
        std::size_t prev = mem.front(), cur = adj[mem.front()][0];
        while (cur != mem.front()) {
            cycle.push_back(cur);
            const std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
            prev = cur;
            cur = next;
        }
        // Orientation: follow a declared base loop when one is traversed,
        // otherwise make the fibre coordinate run counterclockwise.
        int base_votes = 0;
        double area = 0.0;
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const std::size_t w0 = character[cycle[k]];
            const std::size_t w1 = character[cycle[(k + 1) % cycle.size()]];
            if (base.is_loop_step(w0, w1)) ++base_votes;
            if (base.is_loop_step(w1, w0)) --base_votes;
            const cplx z0 = coords[cycle[k]], z1 = coords[cycle[(k + 1) % cycle.size()]];
            area += z0.real() * z1.imag() - z1.real() * z0.imag();
        }
        const bool reverse = base_votes != 0 ? base_votes < 0 : area < 0.0;
        if (reverse) std::reverse(cycle.begin() + 1, cycle.end());
        for (std::size_t k = 0; k < cycle.size(); ++k) directed.insert({cycle[k], cycle[(k + 1) % cycle.size()]});
        topo.loops.push_back(std::move(cycle));
    }

    std::vector<Edge> out_edges;
    for (const auto& [p, q] : edges) {
        if (directed.count({p, q}))
            out_edges.push_back({p, q, true});
        else if (directed.count({q, p}))
            out_edges.push_back({q, p, true});
        else
            out_edges.push_back({p, q, false});
    }
    topo.space = CharacterSpace(std::move(ids), std::move(coords), std::move(out_edges));
    topo.character = std::move(character);
    return topo;
}

}  // namespace detail

/// Matches roots across base edges and extracts components, sheets and loops.
inline FibreTopology loop_components(const FibredSpace& f) {
    const auto& base = f.base();
    if (!base.has_adjacency()) throw InvalidSpace("loop_components needs a base with adjacency");
    const std::size_t np = f.collapsed_size();
    detail::EdgeSet edges;
    detail::EdgeSet regular;
    for (const auto& e : base.edges()) {
        const std::size_t a = e.from, b = e.to;
        const auto& fa = f.fibre(a);
        const auto& fb = f.fibre(b);
        const auto ambiguous = [&] {
            return AmbiguousMatching("cannot match roots between '" + base.id(a) + "' and '" + base.id(b) + "'");
        };
        auto add = [&](std::size_t pa, std::size_t pb, bool reg) {
            const std::size_t x = f.collapsed_index(a, pa), y = f.collapsed_index(b, pb);
            const std::pair<std::size_t, std::size_t> key{std::min(x, y), std::max(x, y)};
            edges.insert(key);
            if (reg) regular.insert(key);
        };
        if (fa.size() == fb.size()) {
            const auto ab = detail::nearest_map(fa, fb);
            const auto ba = detail::nearest_map(fb, fa);
            if (!ab || !ba) throw ambiguous();
            for (std::size_t i = 0; i < fa.size(); ++i)
                if ((*ba)[(*ab)[i]] != i || fa[i].multiplicity != fb[(*ab)[i]].multiplicity) throw ambiguous();
            for (std::size_t i = 0; i < fa.size(); ++i) add(i, (*ab)[i], true);
        } else {
            const bool a_small = fa.size() < fb.size();
            const auto& small = a_small ? fa : fb;
            const auto& large = a_small ? fb : fa;
            const auto m = detail::nearest_map(large, small);
            if (!m || !detail::multiplicities_balance(large, small, *m)) throw ambiguous();
            for (std::size_t i = 0; i < large.size(); ++i) {
                if (a_small)
                    add((*m)[i], i, false);
                else
                    add(i, (*m)[i], false);
            }
        }
    }

    std::vector<std::size_t> character;
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    for (std::size_t p = 0; p < np; ++p) {
        const auto [w, i] = f.collapsed_point(p);
        character.push_back(w);
        ids.push_back(base.id(w) + "#" + std::to_string(i));
        coords.push_back(f.fibre(w)[i].centre);
    }
    return detail::assemble_topology(base, std::move(character), std::move(ids), std::move(coords), edges, regular);
}

/// Multiplicity-expanded view: n points per character, coordinates the roots.
inline CharacterSpace expanded_space(const FibredSpace& f) {
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    for (std::size_t w = 0; w < f.base().size(); ++w) {
        const auto roots = f.expanded_roots(w);
        for (std::size_t k = 0; k < roots.size(); ++k) {
            ids.push_back(f.base().id(w) + "#" + std::to_string(k));
            coords.push_back(roots[k]);
        }
    }
    return CharacterSpace(std::move(ids), std::move(coords));
}

/// Distinct-collapsed view without adjacency.
inline CharacterSpace collapsed_space(const FibredSpace& f) {
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    for (std::size_t p = 0; p < f.collapsed_size(); ++p) {
        const auto [w, i] = f.collapsed_point(p);
        ids.push_back(f.base().id(w) + "#" + std::to_string(i));
        coords.push_back(f.fibre(w)[i].centre);
    }
    return CharacterSpace(std::move(ids), std::move(coords));
}

/// u-hat on the collapsed view (topology space or collapsed_space).
inline Element gelfand_on(const AHElement& u, const FibredSpace& f, const CharacterSpace& collapsed) {
    if (collapsed.size() != f.collapsed_size()) throw SpaceMismatch("not a collapsed view of this fibration");
    return Element::generate(collapsed, [&](std::size_t p) {
        const auto [w, i] = f.collapsed_point(p);
        return cpoly::eval(u.at(w), f.fibre(w)[i].centre);
    });
}

/// Pullback of a base element to a collapsed view.
inline Element pullback_collapsed(const Element& a, const FibredSpace& f, const CharacterSpace& collapsed) {
    if (!(a.space() == f.base())) throw SpaceMismatch("element not on the base");
    return Element::generate(collapsed, [&](std::size_t p) { return a[f.collapsed_point(p).first]; });
}

}  // namespace extalg

#endif  // EXTALG_FIBRATION_HPP
