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

// The Arens-Hoffman extension A[x]/(alpha(x)) with its t-weighted norm.

#ifndef EXTALG_ARENS_HOFFMAN_HPP
#define EXTALG_ARENS_HOFFMAN_HPP

#include <cmath>
#include <concepts>
#include <limits>
#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "algebra_core.hpp"
#include "complex_poly.hpp"
#include "poly_resultant.hpp"

namespace extalg {

/// t^n - sum ||a_k|| t^k.
inline double ah_condition(const MonicPoly& alpha, double t) {
    double s = std::pow(t, static_cast<double>(alpha.degree()));
    for (std::size_t k = 0; k < alpha.degree(); ++k)
        s -= sup_norm(alpha.coeff(k)) * std::pow(t, static_cast<double>(k));
    return s;
}

/// Smallest t >= floor satisfying the norm condition, to bisection resolution 1e-12.
inline double min_norm_param(const MonicPoly& alpha, double floor = 1.0) {
    if (!(floor >= 1.0)) throw InvalidNormParameter("floor must be at least 1");
    if (ah_condition(alpha, floor) >= -1e-12) return floor;
    double lo = floor;
    double hi = floor + alpha.coefficient_norm_sum();
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (ah_condition(alpha, mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// A[x]/(alpha) with a fixed norm parameter. Copies share identity.
class AHExtension {
   public:
    explicit AHExtension(MonicPoly alpha, std::optional<double> t = std::nullopt) {
        const double tv = t ? *t : min_norm_param(alpha, 1.0);
        if (!(tv >= 1.0) || !std::isfinite(tv))
            throw InvalidNormParameter("t must be a finite number >= 1");
        if (ah_condition(alpha, tv) < -1e-12 * std::max(1.0, std::pow(tv, static_cast<double>(alpha.degree()))))
            throw InvalidNormParameter("t = " + std::to_string(tv) + " violates t^n >= sum ||a_k|| t^k");
        d_ = std::make_shared<const Data>(Data{std::move(alpha), tv});
    }

    const MonicPoly& alpha() const noexcept { return d_->alpha; }
    double t() const noexcept { return d_->t; }
    std::size_t degree() const noexcept { return d_->alpha.degree(); }
    const CharacterSpace& space() const noexcept { return d_->alpha.space(); }

    friend bool operator==(const AHExtension& a, const AHExtension& b) noexcept { return a.d_ == b.d_; }

   private:
    struct Data {
        MonicPoly alpha;
        double t;
    };
    std::shared_ptr<const Data> d_;
};

/// sum_k b_k xbar^k, the canonical representative of degree < n.
class AHElement {
   public:
    AHElement(AHExtension ext, std::vector<Element> coeffs) : ext_(std::move(ext)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != ext_.degree())
            throw InvalidElement("expected " + std::to_string(ext_.degree()) + " coefficients, got " +
                                 std::to_string(coeffs_.size()));
        for (const auto& c : coeffs_)
            if (!(c.space() == ext_.space())) throw SpaceMismatch("coefficient on a different space");
    }

    const AHExtension& ext() const noexcept { return ext_; }
    const std::vector<Element>& coeffs() const noexcept { return coeffs_; }
    const Element& coeff(std::size_t k) const { return coeffs_.at(k); }
    std::size_t degree() const noexcept { return coeffs_.size(); }

    /// Coefficients at character w, low degree first.
    cpoly::CPoly at(std::size_t w) const {
        cpoly::CPoly p(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) p[k] = coeffs_[k][w];
        return p;
    }

    PolyOverA as_poly() const { return PolyOverA(ext_.space(), coeffs_); }

    void require_same_ext(const AHElement& other) const {
        if (!(ext_ == other.ext_)) throw MixedExtensions("elements of different extensions");
    }

   private:
    AHExtension ext_;
    std::vector<Element> coeffs_;
};

inline AHElement embed(const AHExtension& ext, const Element& a) {
    std::vector<Element> c(ext.degree(), Element::constant(ext.space(), 0.0));
    c[0] = a;
    return AHElement(ext, std::move(c));
}

inline AHElement embed(const AHExtension& ext, cplx a) { return embed(ext, Element::constant(ext.space(), a)); }

/// The class of x. For n = 1 this is -a_0.
inline AHElement from_lift(const AHExtension& ext, const PolyOverA& lift) {
    const auto r = monic_divmod(lift, ext.alpha()).remainder;
    return AHElement(ext, r.padded(ext.degree()));
}

inline AHElement xbar(const AHExtension& ext) {
    const auto& space = ext.space();
    return from_lift(ext, PolyOverA(space, {Element::constant(space, 0.0), Element::constant(space, 1.0)}));
}

inline AHElement operator+(const AHElement& u, const AHElement& v) {
    u.require_same_ext(v);
    std::vector<Element> c;
    for (std::size_t k = 0; k < u.degree(); ++k) c.push_back(u.coeff(k) + v.coeff(k));
    return AHElement(u.ext(), std::move(c));
}

inline AHElement operator-(const AHElement& u, const AHElement& v) {
    u.require_same_ext(v);
    std::vector<Element> c;
    for (std::size_t k = 0; k < u.degree(); ++k) c.push_back(u.coeff(k) - v.coeff(k));
    return AHElement(u.ext(), std::move(c));
}

inline AHElement operator*(cplx s, const AHElement& u) {
    std::vector<Element> c;
    for (const auto& b : u.coeffs()) c.push_back(s * b);
    return AHElement(u.ext(), std::move(c));
}

inline AHElement ah_mul(const AHElement& u, const AHElement& v) {
    u.require_same_ext(v);
    return from_lift(u.ext(), u.as_poly() * v.as_poly());
}

inline AHElement operator*(const AHElement& u, const AHElement& v) { return ah_mul(u, v); }

inline double ah_norm(const AHElement& u) {
    double s = 0.0;
    double tk = 1.0;
    for (const auto& b : u.coeffs()) {
        s += sup_norm(b) * tk;
        tk *= u.ext().t();
    }
    return s;
}

inline double norm_of(const AHElement& u) { return ah_norm(u); }

/// res(alpha, u) as an element of the base.
inline Element ah_resultant(const AHElement& u) { return resultant(u.ext().alpha(), u.as_poly()); }

namespace detail {

/// Reduces p modulo the monic polynomial m (leading 1 included), padding to deg m.
inline cpoly::CPoly reduce_mod(const cpoly::CPoly& p, const cpoly::CPoly& m) {
    auto r = cpoly::divmod(p, m).second;
    r.resize(m.size() - 1, 0.0);
    return r;
}

/// Inverse of u modulo the monic m by extended Euclid, or nullopt when the
/// remainder sequence hits a zero pivot before reaching a constant.
inline std::optional<cpoly::CPoly> euclid_inverse(const cpoly::CPoly& u, const cpoly::CPoly& m) {
    double scale = 1.0;
    for (auto c : u) scale = std::max(scale, std::abs(c));
    for (auto c : m) scale = std::max(scale, std::abs(c));
    const double pivot = 1e-12 * scale;
    cpoly::CPoly r0 = m;
    cpoly::CPoly s0{0.0};
    cpoly::CPoly r1 = cpoly::trimmed(u, pivot);
    cpoly::CPoly s1{1.0};
    if (r1.empty()) return std::nullopt;
    while (true) {
        const cplx lead = r1.back();
        for (auto& c : r1) c /= lead;
        for (auto& c : s1) c /= lead;
        if (r1.size() == 1) return reduce_mod(s1, m);
        auto [q, r] = cpoly::divmod(r0, r1);
        r = cpoly::trimmed(r, pivot);
        if (r.empty()) return std::nullopt;
        auto s = cpoly::sub(s0, cpoly::mul(q, s1));
        r0 = std::move(r1);
        s0 = std::move(s1);
        r1 = std::move(r);
        s1 = std::move(s);
    }
}

/// Fibre root with the smallest |u(lambda)|, used as a witness.
inline std::pair<cplx, double> weakest_root(const cpoly::CPoly& u, const cpoly::CPoly& m) {
    const std::vector<cplx> lower(m.begin(), m.end() - 1);
    cplx best{};
    double val = std::numeric_limits<double>::infinity();
    for (auto r : cpoly::companion_roots(lower)) {
        const double v = std::abs(cpoly::eval(u, r));
        if (v < val) {
            val = v;
            best = r;
        }
    }
    return {best, val};
}

}  // namespace detail

/// Inverse in A_alpha via per-character extended Euclid.
inline AHElement ah_invert(const AHElement& u) {
    const auto& ext = u.ext();
    const auto& space = ext.space();
    const std::size_t n = ext.degree();
    std::vector<cpoly::CPoly> inv(space.size());
    for (std::size_t w = 0; w < space.size(); ++w) {
        const auto m = ext.alpha().at(w);
        const auto uw = u.at(w);
        auto v = detail::euclid_inverse(uw, m);
        bool ok = v.has_value();
        if (ok) {
            // One Newton step v <- v (2 - u v) tightens the roundoff of Euclid.
            auto uv = detail::reduce_mod(cpoly::mul(uw, *v), m);
            cpoly::CPoly corr = uv;
            for (auto& c : corr) c = -c;
            corr[0] += 2.0;
            v = detail::reduce_mod(cpoly::mul(*v, corr), m);
            uv = detail::reduce_mod(cpoly::mul(uw, *v), m);
            uv[0] -= 1.0;
            double res = 0.0;
            for (auto c : uv) res = std::max(res, std::abs(c));
            ok = res <= 1e-9 && std::isfinite(res);
        }
        if (!ok) {
            const auto [root, val] = detail::weakest_root(uw, m);
            throw NotInvertibleInExtension(w, root,
                                           "u vanishes over character '" + space.id(w) +
                                               "' (|u| = " + std::to_string(val) + " at a fibre root)");
        }
        inv[w] = std::move(*v);
    }
    std::vector<Element> c;
    for (std::size_t k = 0; k < n; ++k)
        c.push_back(Element::generate(space, [&](std::size_t w) { return inv[w][k]; }));
    return AHElement(ext, std::move(c));
}

/// Inverse by interpolating 1/u over simple fibres. Cross-check for ah_invert.
inline AHElement ah_invert_lagrange(const AHElement& u) {
    const auto& ext = u.ext();
    const auto& space = ext.space();
    const std::size_t n = ext.degree();
    const auto dim = static_cast<Eigen::Index>(n);
    std::vector<std::vector<cplx>> inv(space.size());
    for (std::size_t w = 0; w < space.size(); ++w) {
        const auto roots = cpoly::companion_roots(ext.alpha().lower_at(w));
        const auto clusters = cpoly::cluster_roots(roots, 1e-7 * ext.alpha().scale());
        if (clusters.size() != n) throw IllConditioned("repeated root over character '" + space.id(w) + "'");
        Eigen::MatrixXcd vander(dim, dim);
        Eigen::VectorXcd rhs(dim);
        const auto uw = u.at(w);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const cplx lam = clusters[static_cast<std::size_t>(i)].centre;
            cplx p = 1.0;
            for (Eigen::Index j = 0; j < dim; ++j) {
                vander(i, j) = p;
                p *= lam;
            }
            const cplx val = cpoly::eval(uw, lam);
            if (std::abs(val) <= kZeroTolerance * std::max(1.0, ah_norm(u)))
                throw NotInvertibleInExtension(w, lam, "u vanishes over character '" + space.id(w) + "'");
            rhs(i) = 1.0 / val;
        }
        const Eigen::VectorXcd sol = vander.partialPivLu().solve(rhs);
        inv[w].assign(sol.data(), sol.data() + n);
    }
    std::vector<Element> c;
    for (std::size_t k = 0; k < n; ++k)
        c.push_back(Element::generate(space, [&](std::size_t w) { return inv[w][k]; }));
    return AHElement(ext, std::move(c));
}

/// Anything with ring operations and a norm.
template <class Y>
concept AlgebraModel = requires(const Y& a, const Y& b) {
    { a + b } -> std::convertible_to<Y>;
    { a * b } -> std::convertible_to<Y>;
    { norm_of(a) } -> std::convertible_to<double>;
};

/// The unique unital homomorphism A_alpha -> B extending theta with xbar -> y.
template <AlgebraModel Y, class Theta>
    requires std::invocable<const Theta&, const Element&>
class UniversalMorphism {
   public:
    UniversalMorphism(AHExtension src, Theta theta, Y y)
        : src_(std::move(src)), theta_(std::move(theta)), y_(std::move(y)) {
        const auto& alpha = src_.alpha();
        Y acc = theta_(Element::constant(src_.space(), 1.0));
        for (std::size_t k = alpha.degree(); k-- > 0;) acc = acc * y_ + theta_(alpha.coeff(k));
        residual_ = norm_of(acc);
        if (!(residual_ <= 1e-9))
            throw NotARoot("theta(alpha)(y) has norm " + std::to_string(residual_));
    }

    Y operator()(const AHElement& u) const {
        if (!(u.ext() == src_)) throw MixedExtensions("element of a different extension");
        Y acc = theta_(u.coeff(u.degree() - 1));
        for (std::size_t k = u.degree() - 1; k-- > 0;) acc = acc * y_ + theta_(u.coeff(k));
        return acc;
    }

    double root_residual() const noexcept { return residual_; }

   private:
    AHExtension src_;
    Theta theta_;
    Y y_;
    double residual_ = 0.0;
};

}  // namespace extalg

#endif  // EXTALG_ARENS_HOFFMAN_HPP
