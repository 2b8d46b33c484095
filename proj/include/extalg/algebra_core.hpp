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

// Finite models of commutative unital algebras: complex functions on a finite
// character space with pointwise operations and the sup norm.

#ifndef EXTALG_ALGEBRA_CORE_HPP
#define EXTALG_ALGEBRA_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace extalg {

using cplx = std::complex<double>;

/// Relative threshold below which a value counts as zero for inversion.
inline constexpr double kZeroTolerance = 1e-12;
/// Absolute tolerance used when deduplicating spectra.
inline constexpr double kSpectrumTolerance = 1e-9;

/// An adjacency edge. Edges flagged `loop` are directed and together form
/// disjoint simple cycles.
struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    bool loop = false;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable finite set of characters. Copies share identity, so two spaces
/// compare equal only if one was copied from the other.
class CharacterSpace {
   public:
    CharacterSpace(std::vector<std::string> ids, std::vector<cplx> coords = {},
                   std::vector<Edge> edges = {}) {
        auto data = std::make_shared<Data>();
        auto& d = *data;
        d.ids = std::move(ids);
        d.coords = std::move(coords);
        d.edges = std::move(edges);
        const std::size_t n = d.ids.size();
        if (n == 0) throw InvalidSpace("a character space needs at least one point");
        for (std::size_t i = 0; i < n; ++i) {
            if (!d.index.emplace(d.ids[i], i).second)
                throw InvalidSpace("duplicate point id '" + d.ids[i] + "'");
        }
        if (!d.coords.empty() && d.coords.size() != n)
            throw InvalidSpace("coords must cover every point");
        for (const auto& c : d.coords)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw InvalidSpace("coordinates must be finite");
        d.neighbours.assign(n, {});
        std::vector<std::size_t> loop_out(n, n), loop_in(n, n);
        for (const auto& e : d.edges) {
            if (e.from >= n || e.to >= n) throw InvalidSpace("edge index out of range");
            if (e.from == e.to) throw InvalidSpace("self-loop edges are not allowed");
            d.neighbours[e.from].push_back(e.to);
            d.neighbours[e.to].push_back(e.from);
            if (e.loop) {
                if (loop_out[e.from] != n || loop_in[e.to] != n)
                    throw InvalidSpace("loop edges must form simple cycles");
                loop_out[e.from] = e.to;
                loop_in[e.to] = e.from;
            }
        }
        for (auto& nb : d.neighbours) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        std::vector<bool> seen(n, false);
        for (std::size_t s = 0; s < n; ++s) {
            if (seen[s] || (loop_out[s] == n && loop_in[s] == n)) continue;
            if (loop_out[s] == n || loop_in[s] == n)
                throw InvalidSpace("loop edges must form simple cycles");
            std::vector<std::size_t> cycle;
            std::size_t v = s;
            do {
                if (seen[v] || loop_out[v] == n)
                    throw InvalidSpace("loop edges must form simple cycles");
                seen[v] = true;
                cycle.push_back(v);
                v = loop_out[v];
            } while (v != s);
            if (cycle.size() < 3) throw InvalidSpace("a loop needs at least three points");
            d.loops.push_back(std::move(cycle));
        }
        d_ = std::move(data);
    }

    std::size_t size() const noexcept { return d_->ids.size(); }
    const std::string& id(std::size_t i) const { return d_->ids.at(i); }
    const std::vector<std::string>& ids() const noexcept { return d_->ids; }
    std::optional<std::size_t> index_of(const std::string& id) const {
        auto it = d_->index.find(id);
        if (it == d_->index.end()) return std::nullopt;
        return it->second;
    }

    bool has_coords() const noexcept { return !d_->coords.empty(); }
    cplx coord(std::size_t i) const { return d_->coords.at(i); }
    const std::vector<cplx>& coords() const noexcept { return d_->coords; }

    const std::vector<Edge>& edges() const noexcept { return d_->edges; }
    bool has_adjacency() const noexcept { return !d_->edges.empty(); }
    const std::vector<std::size_t>& neighbours(std::size_t i) const { return d_->neighbours.at(i); }

    /// Declared loops, each a cyclic sequence of point indices in edge direction.
    const std::vector<std::vector<std::size_t>>& loops() const noexcept { return d_->loops; }

    /// True when the directed edge from -> to belongs to a declared loop.
    bool is_loop_step(std::size_t from, std::size_t to) const {
        for (const auto& e : d_->edges)
            if (e.loop && e.from == from && e.to == to) return true;
        return false;
    }

    const void* token() const noexcept { return d_.get(); }

    friend bool operator==(const CharacterSpace& a, const CharacterSpace& b) noexcept {
        return a.d_ == b.d_;
    }

   private:
    struct Data {
        std::vector<std::string> ids;
        std::vector<cplx> coords;
        std::vector<Edge> edges;
        std::map<std::string, std::size_t> index;
        std::vector<std::vector<std::size_t>> neighbours;
        std::vector<std::vector<std::size_t>> loops;
    };
    std::shared_ptr<const Data> d_;
};

namespace spaces {

/// The interval [0, 1] sampled at `n` equally spaced points joined as a path.
inline CharacterSpace interval(std::size_t n) {
    if (n < 2) throw InvalidSpace("interval needs at least two points");
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < n; ++k) {
        ids.push_back("t" + std::to_string(k));
        coords.emplace_back(static_cast<double>(k) / static_cast<double>(n - 1), 0.0);
        if (k + 1 < n) edges.push_back({k, k + 1, false});
    }
    return CharacterSpace(std::move(ids), std::move(coords), std::move(edges));
}

/// A circle of radius `radius` about `centre`, sampled at `n` points and
/// declared as one counterclockwise loop.
inline CharacterSpace circle(std::size_t n, double radius = 1.0, cplx centre = {0.0, 0.0}) {
    if (n < 3) throw InvalidSpace("circle needs at least three points");
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < n; ++k) {
        ids.push_back("c" + std::to_string(k));
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        coords.push_back(centre + std::polar(radius, theta));
        edges.push_back({k, (k + 1) % n, true});
    }
    return CharacterSpace(std::move(ids), std::move(coords), std::move(edges));
}

/// An `nx` by `ny` grid over [x0, x1] x [y0, y1] with 4-neighbour adjacency.
inline CharacterSpace plane_grid(std::size_t nx, std::size_t ny, double x0, double x1, double y0,
                                 double y1) {
    if (nx < 2 || ny < 2) throw InvalidSpace("plane grid needs at least 2x2 points");
    std::vector<std::string> ids;
    std::vector<cplx> coords;
    std::vector<Edge> edges;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            ids.push_back("g" + std::to_string(i) + "_" + std::to_string(j));
            const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx - 1);
            const double y = y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ny - 1);
            coords.emplace_back(x, y);
            const std::size_t p = j * nx + i;
            if (i + 1 < nx) edges.push_back({p, p + 1, false});
            if (j + 1 < ny) edges.push_back({p, p + nx, false});
        }
    }
    return CharacterSpace(std::move(ids), std::move(coords), std::move(edges));
}

/// Points only, no coordinates or adjacency.
inline CharacterSpace discrete(std::size_t n, const std::string& prefix = "p") {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < n; ++k) ids.push_back(prefix + std::to_string(k));
    return CharacterSpace(std::move(ids));
}

}  // namespace spaces

/// A member of the base algebra: one complex value per character.
class Element {
   public:
    Element(CharacterSpace space, std::vector<cplx> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (values_.size() != space_.size())
            throw InvalidElement("expected " + std::to_string(space_.size()) + " values, got " +
                                 std::to_string(values_.size()));
        for (const auto& v : values_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw InvalidElement("element values must be finite");
    }

    static Element constant(const CharacterSpace& space, cplx c) {
        return Element(space, std::vector<cplx>(space.size(), c));
    }

    /// Evaluates `f(i)` at every point index.
    template <class F>
    static Element generate(const CharacterSpace& space, F&& f) {
        std::vector<cplx> v(space.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(i);
        return Element(space, std::move(v));
    }

    /// The coordinate function of a space with coordinates.
    static Element coordinate(const CharacterSpace& space) {
        if (!space.has_coords()) throw InvalidSpace("space has no coordinates");
        return Element(space, space.coords());
    }

    const CharacterSpace& space() const noexcept { return space_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    cplx operator[](std::size_t i) const { return values_[i]; }

    /// Pointwise image under `f`.
    template <class F>
    Element map(F&& f) const {
        std::vector<cplx> v(values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
        return Element(space_, std::move(v));
    }

    template <class F>
    Element zip(const Element& other, F&& f) const {
        require_same_space(other);
        std::vector<cplx> v(values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i], other.values_[i]);
        return Element(space_, std::move(v));
    }

    void require_same_space(const Element& other) const {
        if (!(space_ == other.space_)) throw SpaceMismatch("elements live on different spaces");
    }

    friend Element operator+(const Element& a, const Element& b) {
        return a.zip(b, [](cplx x, cplx y) { return x + y; });
    }
    friend Element operator-(const Element& a, const Element& b) {
        return a.zip(b, [](cplx x, cplx y) { return x - y; });
    }
    friend Element operator*(const Element& a, const Element& b) {
        return a.zip(b, [](cplx x, cplx y) { return x * y; });
    }
    friend Element operator-(const Element& a) {
        return a.map([](cplx x) { return -x; });
    }
    friend Element operator*(cplx s, const Element& a) {
        return a.map([s](cplx x) { return s * x; });
    }
    friend Element operator*(const Element& a, cplx s) { return s * a; }
    friend Element operator+(const Element& a, cplx s) {
        return a.map([s](cplx x) { return x + s; });
    }
    friend Element operator+(cplx s, const Element& a) { return a + s; }
    friend Element operator-(const Element& a, cplx s) { return a + (-s); }
    friend Element operator-(cplx s, const Element& a) { return (-a) + s; }

   private:
    CharacterSpace space_;
    std::vector<cplx> values_;
};

inline double sup_norm(const Element& e) {
    double m = 0.0;
    for (auto v : e.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double min_modulus(const Element& e) {
    double m = std::abs(e[0]);
    for (auto v : e.values()) m = std::min(m, std::abs(v));
    return m;
}

inline Element invert(const Element& e);

/// Integer power by repeated squaring; negative exponents invert.
inline Element power(const Element& e, int k) {
    if (k < 0) return power(invert(e), -k);
    Element result = Element::constant(e.space(), 1.0);
    Element base = e;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

/// Scale-aware zero threshold for `e`.
inline double zero_threshold(const Element& e) {
    return kZeroTolerance * std::max(1.0, sup_norm(e));
}

inline bool is_invertible(const Element& e) {
    const double thr = zero_threshold(e);
    for (auto v : e.values())
        if (std::abs(v) <= thr) return false;
    return true;
}

inline Element invert(const Element& e) {
    const double thr = zero_threshold(e);
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::abs(e[i]) <= thr)
            throw NotInvertible(i, e[i],
                                "element vanishes at point '" + e.space().id(i) + "'");
    }
    return e.map([](cplx x) { return 1.0 / x; });
}

inline Element operator/(const Element& a, const Element& b) { return a * invert(b); }

/// Distinct values of `e` in order of first appearance.
inline std::vector<cplx> spectrum(const Element& e) {
    std::vector<cplx> out;
    for (auto v : e.values()) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](cplx w) {
            return std::abs(w - v) <= kSpectrumTolerance;
        });
        if (!seen) out.push_back(v);
    }
    return out;
}

/// a o b = a + b - ab. Zero is the identity of this product.
inline Element quasi_product(const Element& a, const Element& b) {
    return a.zip(b, [](cplx x, cplx y) { return x + y - x * y; });
}

/// The c with b o c = 0, i.e. c = b / (b - 1). Exists iff 1 - b is invertible.
inline Element quasi_inverse(const Element& b) {
    const Element one_minus = 1.0 - b;
    return -(b * invert(one_minus));
}

inline Element exp_elem(const Element& e) {
    return e.map([](cplx x) { return std::exp(x); });
}

namespace detail {

/// Logarithm whose argument lies in (cut - 2 pi, cut].
inline cplx log_with_cut(cplx v, double cut) {
    const double shift = cut - std::numbers::pi;
    const double arg = std::arg(v * std::polar(1.0, -shift)) + shift;
    return {std::log(std::abs(v)), arg};
}

inline double distance_to_ray(cplx v, double angle) {
    const cplx dir = std::polar(1.0, angle);
    const double along = (v * std::conj(dir)).real();
    if (along <= 0.0) return std::abs(v);
    return std::abs((v * std::conj(dir)).imag());
}

}  // namespace detail

/// Pointwise logarithm with the branch cut along the ray at angle `cut`
/// (default: the nonpositive reals).
inline Element log_principal(const Element& e, double cut = std::numbers::pi) {
    const double thr = zero_threshold(e);
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (detail::distance_to_ray(e[i], cut) <= thr)
            throw LogOnCut("value at point '" + e.space().id(i) + "' lies on the branch cut");
    }
    return e.map([cut](cplx x) { return detail::log_with_cut(x, cut); });
}

/// An element (a, lambda) of the standard unitisation, normed by
/// ||a|| + |lambda|.
struct UnitizedElement {
    Element a;
    cplx lambda;

    double norm() const { return sup_norm(a) + std::abs(lambda); }

    friend UnitizedElement operator*(const UnitizedElement& x, const UnitizedElement& y) {
        return {x.a * y.a + x.lambda * y.a + y.lambda * x.a, x.lambda * y.lambda};
    }
    friend UnitizedElement operator-(const UnitizedElement& x, const UnitizedElement& y) {
        return {x.a - y.a, x.lambda - y.lambda};
    }

    static UnitizedElement one(const CharacterSpace& space) {
        return {Element::constant(space, 0.0), 1.0};
    }
};

/// (mu, b) -> (-mu b, mu); invertible whenever mu != 0 and b has a quasi-inverse.
inline UnitizedElement unitization_from_quasi(cplx mu, const Element& b) {
    return {-(mu * b), mu};
}

/// Inverse in the unitisation: (a, l)^-1 = (-c / l, 1 / l) with c the
/// quasi-inverse of -a / l.
inline UnitizedElement unitization_invert(const UnitizedElement& x) {
    if (std::abs(x.lambda) <= kZeroTolerance)
        throw NotInvertible(0, x.lambda, "unitisation scalar part is zero");
    const Element b = -(x.a * (1.0 / x.lambda));
    const Element c = quasi_inverse(b);
    return {-(c * (1.0 / x.lambda)), 1.0 / x.lambda};
}

/// Norm hook used by generic algorithms.
inline double norm_of(const Element& e) { return sup_norm(e); }

}  // namespace extalg

#endif  // EXTALG_ALGEBRA_CORE_HPP
