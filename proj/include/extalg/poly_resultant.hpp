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

// Polynomials over the base algebra: monic division, resultants, and Newton
// power sums.

#ifndef EXTALG_POLY_RESULTANT_HPP
#define EXTALG_POLY_RESULTANT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "algebra_core.hpp"
#include "complex_poly.hpp"

namespace extalg {

inline constexpr std::size_t kDefaultMaxDegree = 8;

/// alpha(x) = a_0 + ... + a_{n-1} x^{n-1} + x^n. Only a_0..a_{n-1} are stored.
class MonicPoly {
   public:
    explicit MonicPoly(std::vector<Element> lower, std::size_t max_degree = kDefaultMaxDegree)
        : coeffs_(std::move(lower)) {
        if (coeffs_.empty()) throw InvalidPolynomial("a monic polynomial needs degree >= 1");
        if (coeffs_.size() > max_degree)
            throw DegreeTooHigh("degree " + std::to_string(coeffs_.size()) + " exceeds cap " +
                                std::to_string(max_degree));
        for (const auto& c : coeffs_) coeffs_.front().require_same_space(c);
    }

    /// prod_j (x - r_j) for root elements r_j.
    static MonicPoly from_roots(const std::vector<Element>& roots,
                                std::size_t max_degree = kDefaultMaxDegree) {
        if (roots.empty()) throw InvalidPolynomial("need at least one root");
        const auto& space = roots.front().space();
        std::vector<std::vector<cplx>> per_point(space.size());
        for (std::size_t w = 0; w < space.size(); ++w) {
            std::vector<cplx> r;
            for (const auto& e : roots) r.push_back(e[w]);
            per_point[w] = cpoly::from_roots(r);
        }
        std::vector<Element> lower;
        for (std::size_t k = 0; k < roots.size(); ++k)
            lower.push_back(Element::generate(space, [&](std::size_t w) { return per_point[w][k]; }));
        return MonicPoly(std::move(lower), max_degree);
    }

    std::size_t degree() const noexcept { return coeffs_.size(); }
    const Element& coeff(std::size_t k) const { return coeffs_.at(k); }
    const std::vector<Element>& lower() const noexcept { return coeffs_; }
    const CharacterSpace& space() const noexcept { return coeffs_.front().space(); }

    /// Lower coefficients a_0(w)..a_{n-1}(w) at character w.
    std::vector<cplx> lower_at(std::size_t w) const {
        std::vector<cplx> out(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] = coeffs_[k][w];
        return out;
    }

    /// Full coefficient list at w, leading 1 included.
    cpoly::CPoly at(std::size_t w) const {
        auto p = lower_at(w);
        p.push_back(1.0);
        return p;
    }

    /// 1 + max_k ||a_k||, the scale used by root tolerances.
    double scale() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, sup_norm(c));
        return 1.0 + m;
    }

    double coefficient_norm_sum() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += sup_norm(c);
        return s;
    }

   private:
    std::vector<Element> coeffs_;
};

/// b_0 + b_1 x + ... + b_m x^m over the base; high-order zero coefficients are trimmed.
class PolyOverA {
   public:
    PolyOverA(CharacterSpace space, std::vector<Element> coeffs)
        : space_(std::move(space)), coeffs_(std::move(coeffs)) {
        for (const auto& c : coeffs_)
            if (!(c.space() == space_)) throw SpaceMismatch("coefficient on a different space");
        while (!coeffs_.empty() && sup_norm(coeffs_.back()) == 0.0) coeffs_.pop_back();
    }

    explicit PolyOverA(std::vector<Element> coeffs)
        : PolyOverA(coeffs.at(0).space(), std::move(coeffs)) {}

    static PolyOverA zero(const CharacterSpace& space) { return PolyOverA(space, {}); }

    /// Degree, with -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const CharacterSpace& space() const noexcept { return space_; }
    const std::vector<Element>& coeffs() const noexcept { return coeffs_; }

    /// Coefficient k, zero beyond the degree.
    Element coeff(std::size_t k) const {
        if (k < coeffs_.size()) return coeffs_[k];
        return Element::constant(space_, 0.0);
    }

    cpoly::CPoly at(std::size_t w) const {
        cpoly::CPoly p(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) p[k] = coeffs_[k][w];
        return p;
    }

    /// Coefficients padded with zeros to length `len`.
    std::vector<Element> padded(std::size_t len) const {
        std::vector<Element> out;
        for (std::size_t k = 0; k < len; ++k) out.push_back(coeff(k));
        return out;
    }

    friend PolyOverA operator*(const PolyOverA& a, const PolyOverA& b) {
        if (!(a.space_ == b.space_)) throw SpaceMismatch("polynomials on different spaces");
        if (a.is_zero() || b.is_zero()) return zero(a.space_);
        std::vector<Element> out(a.coeffs_.size() + b.coeffs_.size() - 1,
                                 Element::constant(a.space_, 0.0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                out[i + j] = out[i + j] + a.coeffs_[i] * b.coeffs_[j];
        return PolyOverA(a.space_, std::move(out));
    }

    friend PolyOverA operator+(const PolyOverA& a, const PolyOverA& b) {
        if (!(a.space_ == b.space_)) throw SpaceMismatch("polynomials on different spaces");
        const std::size_t len = std::max(a.coeffs_.size(), b.coeffs_.size());
        std::vector<Element> out;
        for (std::size_t k = 0; k < len; ++k) out.push_back(a.coeff(k) + b.coeff(k));
        return PolyOverA(a.space_, std::move(out));
    }

    friend PolyOverA operator-(const PolyOverA& a, const PolyOverA& b) {
        if (!(a.space_ == b.space_)) throw SpaceMismatch("polynomials on different spaces");
        const std::size_t len = std::max(a.coeffs_.size(), b.coeffs_.size());
        std::vector<Element> out;
        for (std::size_t k = 0; k < len; ++k) out.push_back(a.coeff(k) - b.coeff(k));
        return PolyOverA(a.space_, std::move(out));
    }

   private:
    CharacterSpace space_;
    std::vector<Element> coeffs_;
};

/// alpha as a (monic) PolyOverA.
inline PolyOverA as_poly(const MonicPoly& alpha) {
    auto c = alpha.lower();
    c.push_back(Element::constant(alpha.space(), 1.0));
    return PolyOverA(alpha.space(), std::move(c));
}

struct DivMod {
    PolyOverA quotient;
    PolyOverA remainder;
};

/// beta = q alpha + r with deg r < deg alpha, by synthetic division.
inline DivMod monic_divmod(const PolyOverA& beta, const MonicPoly& alpha) {
    if (!(beta.space() == alpha.space())) throw SpaceMismatch("beta and alpha on different spaces");
    const std::size_t n = alpha.degree();
    const auto& space = alpha.space();
    if (beta.degree() < static_cast<long>(n)) return {PolyOverA::zero(space), beta};
    std::vector<Element> rem = beta.coeffs();
    const std::size_t top = rem.size() - 1;
    std::vector<Element> quot(top - n + 1, Element::constant(space, 0.0));
    for (std::size_t k = top; k >= n; --k) {
        const Element lead = rem[k];
        quot[k - n] = lead;
        for (std::size_t j = 0; j < n; ++j) rem[k - n + j] = rem[k - n + j] - lead * alpha.coeff(j);
        rem[k] = Element::constant(space, 0.0);
        if (k == n) break;
    }
    rem.resize(n, Element::constant(space, 0.0));
    return {PolyOverA(space, std::move(quot)), PolyOverA(space, std::move(rem))};
}

namespace detail {

/// The (2n-1) x (2n-1) resultant matrix at one character: n-1 shifted rows of
/// alpha (leading coefficient first) over n shifted rows of beta.
inline Eigen::MatrixXcd resultant_matrix(std::span<const cplx> alpha_lower, std::span<const cplx> beta) {
    const std::size_t n = alpha_lower.size();
    const auto dim = static_cast<Eigen::Index>(2 * n - 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1 + k)) = alpha_lower[n - 1 - k];
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = static_cast<Eigen::Index>(n - 1 + j);
        for (std::size_t k = 0; k < n; ++k)
            m(row, static_cast<Eigen::Index>(j + k)) = k < beta.size() ? beta[n - 1 - k] : cplx{};
    }
    return m;
}

inline cplx resultant_at(std::span<const cplx> alpha_lower, std::span<const cplx> beta) {
    return cpoly::determinant(resultant_matrix(alpha_lower, beta));
}

}  // namespace detail

/// res(alpha, beta) per character, for deg beta <= n - 1. Equals the product of
/// beta over the roots of alpha, counted with multiplicity.
inline Element resultant(const MonicPoly& alpha, const PolyOverA& beta) {
    if (!(beta.space() == alpha.space())) throw SpaceMismatch("beta and alpha on different spaces");
    const std::size_t n = alpha.degree();
    if (beta.degree() >= static_cast<long>(n))
        throw DegreeTooHigh("resultant needs deg beta < deg alpha = " + std::to_string(n));
    return Element::generate(alpha.space(), [&](std::size_t w) {
        auto b = beta.at(w);
        b.resize(n, 0.0);
        return detail::resultant_at(alpha.lower_at(w), b);
    });
}

/// P(c) = p_0 + ... + p_{n-1} c^{n-1} + c^n with P(c) = res(alpha, c + b_1 x + ...).
struct ResultantPoly {
    std::vector<Element> p;  // p_0..p_{n-1}; the leading coefficient is 1

    std::size_t degree() const noexcept { return p.size(); }

    /// m-th formal derivative of P evaluated at the complex number c, character w.
    cplx derivative_at(std::size_t m, std::size_t w, cplx c) const {
        const std::size_t n = p.size();
        if (m > n) return 0.0;
        cplx acc = 0.0;
        for (std::size_t k = n + 1; k-- > m;) {
            const cplx coeff = k == n ? cplx{1.0} : p[k][w];
            double falling = 1.0;
            for (std::size_t r = 0; r < m; ++r) falling *= static_cast<double>(k - r);
            acc = acc * c + falling * coeff;
        }
        return acc;
    }

    cplx eval_at(std::size_t w, cplx c) const { return derivative_at(0, w, c); }

    Element derivative(std::size_t m, const Element& c) const {
        return Element::generate(c.space(), [&](std::size_t w) { return derivative_at(m, w, c[w]); });
    }

    Element operator()(const Element& c) const { return derivative(0, c); }

    /// Complex coefficients of P at character w, leading 1 included.
    cpoly::CPoly at(std::size_t w) const {
        cpoly::CPoly out;
        for (const auto& e : p) out.push_back(e[w]);
        out.push_back(1.0);
        return out;
    }
};

/// Interpolates P at the constant values c = 0, 1, ..., n.
inline ResultantPoly resultant_as_poly_in_c(const MonicPoly& alpha, const std::vector<Element>& upper) {
    const std::size_t n = alpha.degree();
    if (upper.size() + 1 > n)
        throw DegreeTooHigh("expected at most n - 1 = " + std::to_string(n - 1) + " coefficients");
    for (const auto& b : upper) b.require_same_space(alpha.coeff(0));
    const auto dim = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd vander(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) vander(i, j) = std::pow(static_cast<double>(i), static_cast<double>(j));
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(vander.cast<cplx>());
    const auto& space = alpha.space();
    std::vector<std::vector<cplx>> coeffs(space.size());
    for (std::size_t w = 0; w < space.size(); ++w) {
        const auto lower = alpha.lower_at(w);
        std::vector<cplx> beta(n, 0.0);
        for (std::size_t k = 0; k < upper.size(); ++k) beta[k + 1] = upper[k][w];
        Eigen::VectorXcd rhs(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            beta[0] = static_cast<double>(i);
            rhs(i) = detail::resultant_at(lower, beta);
        }
        const Eigen::VectorXcd sol = lu.solve(rhs);
        coeffs[w].assign(sol.data(), sol.data() + n);
    }
    ResultantPoly out;
    for (std::size_t k = 0; k < n; ++k)
        out.p.push_back(Element::generate(space, [&](std::size_t w) { return coeffs[w][k]; }));
    return out;
}

/// s_0..s_J with s_j(w) the j-th power sum of the roots of alpha at w.
struct NewtonSums {
    std::vector<Element> s;

    const Element& operator[](std::size_t j) const { return s.at(j); }
    std::size_t size() const noexcept { return s.size(); }
};

inline NewtonSums newton_sums(const MonicPoly& alpha, std::size_t count) {
    const std::size_t n = alpha.degree();
    const auto& space = alpha.space();
    NewtonSums out;
    out.s.push_back(Element::constant(space, static_cast<double>(n)));
    for (std::size_t k = 1; k <= count; ++k) {
        Element acc = Element::constant(space, 0.0);
        if (k <= n) {
            for (std::size_t i = 1; i < k; ++i) acc = acc + alpha.coeff(n - i) * out.s[k - i];
            acc = acc + static_cast<double>(k) * alpha.coeff(n - k);
        } else {
            for (std::size_t i = 1; i <= n; ++i) acc = acc + alpha.coeff(n - i) * out.s[k - i];
        }
        out.s.push_back(-acc);
    }
    return out;
}

/// alpha^mu: coefficient k becomes mu^{n-k} a_k, so roots scale by mu.
inline MonicPoly rescale_poly(const MonicPoly& alpha, double mu) {
    if (!(mu > 0.0)) throw InvalidPolynomial("rescale factor must be positive");
    const std::size_t n = alpha.degree();
    std::vector<Element> lower;
    for (std::size_t k = 0; k < n; ++k)
        lower.push_back(std::pow(mu, static_cast<double>(n - k)) * alpha.coeff(k));
    return MonicPoly(std::move(lower), std::max(n, kDefaultMaxDegree));
}

}  // namespace extalg

#endif  // EXTALG_POLY_RESULTANT_HPP
