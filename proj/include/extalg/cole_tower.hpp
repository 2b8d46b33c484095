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

// Cole extensions by finite sets of monic polynomials, finite towers of
// extensions, and sup-norm distance to finite-dimensional subspaces.

#ifndef EXTALG_COLE_TOWER_HPP
#define EXTALG_COLE_TOWER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "algebra_core.hpp"
#include "fibration.hpp"
#include "poly_resultant.hpp"

namespace extalg {

inline constexpr std::size_t kDefaultPointCap = 1000000;

/// The fibred product of the root sets of several polynomials, multiplicity
/// expanded. Points are ordered by character, then mixed radix over the
/// root indices with the first polynomial most significant.
class ColeSpace {
   public:
    struct Point {
        std::size_t character;
        std::vector<std::size_t> index;  // root index per polynomial
        std::vector<cplx> roots;         // lambda_j per polynomial
    };

    ColeSpace(CharacterSpace base, std::vector<MonicPoly> polys, std::vector<Point> points)
        : base_(std::move(base)), polys_(std::move(polys)), points_(std::move(points)), space_(make_space()) {}

    const CharacterSpace& base() const noexcept { return base_; }
    const std::vector<MonicPoly>& polys() const noexcept { return polys_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    const Point& point(std::size_t p) const { return points_.at(p); }
    std::size_t size() const noexcept { return points_.size(); }
    /// The points as a character space (no adjacency).
    const CharacterSpace& space() const noexcept { return space_; }

    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> d;
        for (const auto& a : polys_) d.push_back(a.degree());
        return d;
    }

    /// Projection to the base character.
    std::size_t project(std::size_t p) const { return points_.at(p).character; }

    /// Projection onto the sub-tuple of the polynomials listed in `keep`.
    std::pair<std::size_t, std::vector<cplx>> project_to(std::size_t p, const std::vector<std::size_t>& keep) const {
        const auto& pt = points_.at(p);
        std::vector<cplx> r;
        for (auto j : keep) r.push_back(pt.roots.at(j));
        return {pt.character, r};
    }

    /// Pullback of a base element.
    Element pullback(const Element& a) const {
        if (!(a.space() == base_)) throw SpaceMismatch("element not on the base");
        return Element::generate(space_, [&](std::size_t p) { return a[points_[p].character]; });
    }

    /// The coordinate function p_j.
    Element coordinate(std::size_t j) const {
        return Element::generate(space_, [&](std::size_t p) { return points_[p].roots.at(j); });
    }

    /// max(1, sum_k ||a_k||) for polynomial j.
    double coordinate_bound(std::size_t j) const { return std::max(1.0, polys_.at(j).coefficient_norm_sum()); }

   private:
    CharacterSpace make_space() const {
        std::vector<std::string> ids;
        for (const auto& pt : points_) {
            std::string id = base_.id(pt.character);
            for (std::size_t j = 0; j < pt.index.size(); ++j) id += (j == 0 ? "|" : ",") + std::to_string(pt.index[j]);
            ids.push_back(std::move(id));
        }
        return CharacterSpace(std::move(ids));
    }

    CharacterSpace base_;
    std::vector<MonicPoly> polys_;
    std::vector<Point> points_;
    CharacterSpace space_;
};

inline ColeSpace build_cole(const CharacterSpace& base, const std::vector<MonicPoly>& polys,
                            std::size_t cap = kDefaultPointCap) {
    double count = static_cast<double>(base.size());
    for (const auto& a : polys) {
        if (!(a.space() == base)) throw SpaceMismatch("polynomial on a different space");
        count *= static_cast<double>(a.degree());
    }
    if (count > static_cast<double>(cap))
        throw TooLarge("Cole space would have " + std::to_string(static_cast<long long>(count)) + " points");
    std::vector<std::vector<std::vector<cplx>>> roots;  // [poly][character] -> expanded roots
    for (const auto& a : polys) {
        const auto f = build_fibration(a);
        std::vector<std::vector<cplx>> per;
        for (std::size_t w = 0; w < base.size(); ++w) per.push_back(f.expanded_roots(w));
        roots.push_back(std::move(per));
    }
    std::vector<ColeSpace::Point> points;
    std::size_t per_fibre = 1;
    for (const auto& a : polys) per_fibre *= a.degree();
    for (std::size_t w = 0; w < base.size(); ++w) {
        for (std::size_t code = 0; code < per_fibre; ++code) {
            ColeSpace::Point pt{w, std::vector<std::size_t>(polys.size()), std::vector<cplx>(polys.size())};
            std::size_t c = code;
            for (std::size_t j = polys.size(); j-- > 0;) {
                pt.index[j] = c % polys[j].degree();
                c /= polys[j].degree();
                pt.roots[j] = roots[j][w][pt.index[j]];
            }
            points.push_back(std::move(pt));
        }
    }
    ColeSpace out(base, polys, std::move(points));
    for (std::size_t p = 0; p < out.size(); ++p)
        for (std::size_t j = 0; j < polys.size(); ++j)
            if (std::abs(out.point(p).roots[j]) > out.coordinate_bound(j) * (1.0 + 1e-9))
                throw IllConditioned("root exceeds the coordinate bound");
    return out;
}

/// sum_m b_m prod_j x_j^{m_j} with 0 <= m_j < n_j, stored in mixed radix
/// (first variable most significant).
class ColePolyElement {
   public:
    ColePolyElement(std::shared_ptr<const ColeSpace> space, std::vector<Element> coeffs)
        : space_(std::move(space)), coeffs_(std::move(coeffs)) {
        std::size_t total = 1;
        for (auto d : space_->degrees()) total *= d;
        if (coeffs_.size() != total)
            throw InvalidElement("expected " + std::to_string(total) + " coefficients");
        for (const auto& c : coeffs_)
            if (!(c.space() == space_->base())) throw SpaceMismatch("coefficient not on the base");
    }

    static ColePolyElement zero(std::shared_ptr<const ColeSpace> space) {
        std::size_t total = 1;
        for (auto d : space->degrees()) total *= d;
        const Element z = Element::constant(space->base(), 0.0);
        return ColePolyElement(std::move(space), std::vector<Element>(total, z));
    }

    const std::shared_ptr<const ColeSpace>& cole() const noexcept { return space_; }
    const std::vector<Element>& coeffs() const noexcept { return coeffs_; }
    const Element& coeff(std::size_t flat) const { return coeffs_.at(flat); }

    std::vector<std::size_t> multi_index(std::size_t flat) const {
        const auto d = space_->degrees();
        std::vector<std::size_t> m(d.size());
        for (std::size_t j = d.size(); j-- > 0;) {
            m[j] = flat % d[j];
            flat /= d[j];
        }
        return m;
    }

    std::size_t flat_index(const std::vector<std::size_t>& m) const {
        const auto d = space_->degrees();
        std::size_t flat = 0;
        for (std::size_t j = 0; j < d.size(); ++j) flat = flat * d[j] + m.at(j);
        return flat;
    }

   private:
    std::shared_ptr<const ColeSpace> space_;
    std::vector<Element> coeffs_;
};

inline ColePolyElement cole_embed(const std::shared_ptr<const ColeSpace>& space, const Element& a) {
    auto e = ColePolyElement::zero(space);
    auto c = e.coeffs();
    c[0] = a;
    return ColePolyElement(space, std::move(c));
}

/// The coordinate p_j reduced to minimal form (x_j, or -a_0 when n_j = 1).
inline ColePolyElement cole_coordinate(const std::shared_ptr<const ColeSpace>& space, std::size_t j) {
    auto c = ColePolyElement::zero(space).coeffs();
    const auto d = space->degrees();
    const auto& alpha = space->polys().at(j);
    std::vector<std::size_t> m(d.size(), 0);
    if (d[j] > 1) {
        m[j] = 1;
        std::size_t flat = 0;
        for (std::size_t k = 0; k < d.size(); ++k) flat = flat * d[k] + m[k];
        c[flat] = Element::constant(space->base(), 1.0);
    } else {
        c[0] = -alpha.coeff(0);
    }
    return ColePolyElement(space, std::move(c));
}

inline cplx eval_cole(const ColePolyElement& e, std::size_t p) {
    const auto& pt = e.cole()->point(p);
    cplx acc = 0.0;
    for (std::size_t flat = 0; flat < e.coeffs().size(); ++flat) {
        const auto m = e.multi_index(flat);
        cplx term = e.coeff(flat)[pt.character];
        for (std::size_t j = 0; j < m.size(); ++j) term *= std::pow(pt.roots[j], static_cast<double>(m[j]));
        acc += term;
    }
    return acc;
}

/// The Gelfand transform on the Cole space.
inline Element cole_gelfand(const ColePolyElement& e) {
    return Element::generate(e.cole()->space(), [&](std::size_t p) { return eval_cole(e, p); });
}

inline ColePolyElement operator+(const ColePolyElement& a, const ColePolyElement& b) {
    if (a.cole() != b.cole()) throw MixedExtensions("elements of different Cole spaces");
    std::vector<Element> c;
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) c.push_back(a.coeff(k) + b.coeff(k));
    return ColePolyElement(a.cole(), std::move(c));
}

inline ColePolyElement operator-(const ColePolyElement& a, const ColePolyElement& b) {
    if (a.cole() != b.cole()) throw MixedExtensions("elements of different Cole spaces");
    std::vector<Element> c;
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) c.push_back(a.coeff(k) - b.coeff(k));
    return ColePolyElement(a.cole(), std::move(c));
}

/// Product reduced to minimal form, one variable at a time.
inline ColePolyElement cole_mul(const ColePolyElement& a, const ColePolyElement& b) {
    if (a.cole() != b.cole()) throw MixedExtensions("elements of different Cole spaces");
    const auto& space = *a.cole();
    const auto d = space.degrees();
    const std::size_t N = d.size();
    const Element zero = Element::constant(space.base(), 0.0);
    // Dense tensor with extent e_j per variable, mixed radix.
    std::vector<std::size_t> ext(N);
    for (std::size_t j = 0; j < N; ++j) ext[j] = 2 * d[j] - 1;
    auto flat_of = [](const std::vector<std::size_t>& m, const std::vector<std::size_t>& extent) {
        std::size_t f = 0;
        for (std::size_t j = 0; j < extent.size(); ++j) f = f * extent[j] + m[j];
        return f;
    };
    auto multi_of = [](std::size_t f, const std::vector<std::size_t>& extent) {
        std::vector<std::size_t> m(extent.size());
        for (std::size_t j = extent.size(); j-- > 0;) {
            m[j] = f % extent[j];
            f /= extent[j];
        }
        return m;
    };
    std::size_t total = 1;
    for (auto e : ext) total *= e;
    std::vector<Element> t(total, zero);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const auto mi = a.multi_index(i);
        for (std::size_t k = 0; k < b.coeffs().size(); ++k) {
            const auto mk = b.multi_index(k);
            std::vector<std::size_t> m(N);
            for (std::size_t j = 0; j < N; ++j) m[j] = mi[j] + mk[j];
            auto& slot = t[flat_of(m, ext)];
            slot = slot + a.coeff(i) * b.coeff(k);
        }
    }
    // Reduce variable j from extent 2 n_j - 1 down to n_j.
    for (std::size_t j = 0; j < N; ++j) {
        const auto& alpha = space.polys()[j];
        const std::size_t n = d[j];
        for (std::size_t deg = ext[j]; deg-- > n;) {
            for (std::size_t f = 0; f < t.size(); ++f) {
                auto m = multi_of(f, ext);
                if (m[j] != deg) continue;
                const Element lead = t[f];
                // x^deg = x^{deg-n} x^n and x^n = -sum_k a_k x^k.
                for (std::size_t k = 0; k < n; ++k) {
                    m[j] = deg - n + k;
                    auto& slot = t[flat_of(m, ext)];
                    slot = slot - lead * alpha.coeff(k);
                }
                t[f] = zero;
            }
        }
        std::vector<std::size_t> next = ext;
        next[j] = n;
        std::size_t next_total = 1;
        for (auto e : next) next_total *= e;
        std::vector<Element> shrunk(next_total, zero);
        for (std::size_t f = 0; f < t.size(); ++f) {
            const auto m = multi_of(f, ext);
            if (m[j] < n) shrunk[flat_of(m, next)] = t[f];
        }
        t = std::move(shrunk);
        ext = std::move(next);
    }
    return ColePolyElement(a.cole(), std::move(t));
}

/// (1/prod n_j) sum_m b_m prod_j s_{alpha_j}^{m_j}.
inline Element t_u(const ColePolyElement& e) {
    const auto& space = *e.cole();
    const auto d = space.degrees();
    std::vector<NewtonSums> sums;
    double n = 1.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        sums.push_back(newton_sums(space.polys()[j], d[j] - 1));
        n *= static_cast<double>(d[j]);
    }
    Element acc = Element::constant(space.base(), 0.0);
    for (std::size_t flat = 0; flat < e.coeffs().size(); ++flat) {
        const auto m = e.multi_index(flat);
        Element term = e.coeff(flat);
        for (std::size_t j = 0; j < m.size(); ++j) term = term * sums[j][m[j]];
        acc = acc + term;
    }
    return (1.0 / n) * acc;
}

/// Average of the Gelfand transform over each product fibre.
inline Element t_u_fibre_average(const ColePolyElement& e) {
    const auto& space = *e.cole();
    std::vector<cplx> sum(space.base().size(), 0.0);
    std::vector<double> count(space.base().size(), 0.0);
    for (std::size_t p = 0; p < space.size(); ++p) {
        sum[space.project(p)] += eval_cole(e, p);
        count[space.project(p)] += 1.0;
    }
    return Element::generate(space.base(), [&](std::size_t w) { return sum[w] / count[w]; });
}

struct SupDistance {
    double distance = 0.0;  // max residual of the best coefficients found
    double lower = 0.0;     // certified lower bound
    std::vector<cplx> coefficients;
    int iterations = 0;
};

/// inf_c max_p |f - sum c_i g_i| by Lawson's reweighted least squares; the
/// weighted residual certifies a lower bound.
inline SupDistance sup_distance(const Element& f, const std::vector<Element>& basis, double gap = 1e-6,
                                int max_iter = 20000) {
    if (basis.size() > 64) throw TooLarge("at most 64 basis vectors");
    for (const auto& g : basis) f.require_same_space(g);
    const auto M = static_cast<Eigen::Index>(f.size());
    const auto K = static_cast<Eigen::Index>(basis.size());
    SupDistance out;
    if (K == 0) {
        out.distance = out.lower = sup_norm(f);
        return out;
    }
    Eigen::MatrixXcd G(M, K);
    Eigen::VectorXcd y(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        y(i) = f[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < K; ++k) G(i, k) = basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd best_c = Eigen::VectorXcd::Zero(K);
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        const Eigen::VectorXd sw = w.cwiseSqrt();
        const Eigen::MatrixXcd A = sw.asDiagonal() * G;
        const Eigen::VectorXcd b = sw.asDiagonal() * y;
        const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
        const Eigen::VectorXcd r = y - G * c;
        const Eigen::VectorXd ar = r.cwiseAbs();
        const double upper = ar.maxCoeff();
        const double lower = std::sqrt(std::max(0.0, (w.array() * ar.array().square()).sum()));
        if (upper < best) {
            best = upper;
            best_c = c;
        }
        out.lower = std::max(out.lower, lower);
        if (best - out.lower <= gap || best <= 1e-14) break;
        const double s = (w.array() * ar.array()).sum();
        if (!(s > 0.0)) break;
        w = (w.array() * ar.array()) / s;
    }
    out.distance = best;
    out.coefficients.assign(best_c.data(), best_c.data() + K);
    if (best <= 1e-14) out.lower = best;
    return out;
}

/// One stage of a tower at the level of character spaces: each point has a
/// parent in the previous stage and an averaging weight within its fibre.
struct TowerStage {
    CharacterSpace space;
    std::vector<std::size_t> parent;
    std::vector<double> weight;
    std::string label;
    double t = 1.0;
    /// The adjoined coordinate (root or logarithm) as a function on this stage.
    std::optional<Element> generator;
};

class Tower {
   public:
    explicit Tower(CharacterSpace base, std::size_t cap = kDefaultPointCap) : cap_(cap) {
        stages_.push_back({std::move(base), {}, {}, "base", 1.0, std::nullopt});
    }

    std::size_t height() const noexcept { return stages_.size() - 1; }
    const TowerStage& stage(std::size_t k) const { return stages_.at(k); }
    const CharacterSpace& space(std::size_t k) const { return stages_.at(k).space; }
    const CharacterSpace& top() const noexcept { return stages_.back().space; }

    /// Adjoins the roots of alpha, a monic polynomial over the top stage.
    const TowerStage& extend(const MonicPoly& alpha, std::optional<double> t = std::nullopt) {
        if (!(alpha.space() == top())) throw SpaceMismatch("polynomial must live on the top stage");
        const double count = static_cast<double>(top().size()) * static_cast<double>(alpha.degree());
        if (count > static_cast<double>(cap_)) throw StageTooLarge("stage would exceed the point cap");
        const auto f = build_fibration(alpha);
        std::vector<std::string> ids;
        std::vector<std::size_t> parent;
        std::vector<double> weight;
        std::vector<cplx> gen;
        const double n = static_cast<double>(alpha.degree());
        for (std::size_t w = 0; w < top().size(); ++w) {
            const auto roots = f.expanded_roots(w);
            for (std::size_t k = 0; k < roots.size(); ++k) {
                ids.push_back(top().id(w) + "/" + std::to_string(k));
                parent.push_back(w);
                weight.push_back(1.0 / n);
                gen.push_back(roots[k]);
            }
        }
        CharacterSpace sp(std::move(ids));
        Element g(sp, std::move(gen));
        const double tv = t ? *t : min_norm_param(alpha, 1.0);
        stages_.push_back({std::move(sp), std::move(parent), std::move(weight), "ah", tv, std::move(g)});
        return stages_.back();
    }

    /// Adjoins a stage given directly by its parent map and fibre weights.
    const TowerStage& extend_with(TowerStage stage) {
        if (stage.space.size() > cap_) throw StageTooLarge("stage would exceed the point cap");
        if (stage.parent.size() != stage.space.size() || stage.weight.size() != stage.space.size())
            throw InvalidSpace("stage tables must cover every point");
        std::vector<double> mass(top().size(), 0.0);
        for (std::size_t p = 0; p < stage.parent.size(); ++p) {
            if (stage.parent[p] >= top().size()) throw InvalidSpace("parent index out of range");
            mass[stage.parent[p]] += stage.weight[p];
        }
        for (double m : mass)
            if (std::abs(m - 1.0) > 1e-12) throw InvalidSpace("fibre weights must sum to 1 over every point");
        stages_.push_back(std::move(stage));
        return stages_.back();
    }

    /// pi_{sigma,tau}: the image in stage sigma of a point of stage tau.
    std::size_t project(std::size_t sigma, std::size_t tau, std::size_t point) const {
        check_order(sigma, tau);
        for (std::size_t k = tau; k > sigma; --k) point = stages_[k].parent.at(point);
        return point;
    }

    /// theta_{sigma,tau}: pullback from stage sigma to stage tau.
    Element embed(std::size_t sigma, std::size_t tau, const Element& e) const {
        check_order(sigma, tau);
        if (!(e.space() == space(sigma))) throw SpaceMismatch("element not on stage sigma");
        return Element::generate(space(tau), [&](std::size_t p) { return e[project(sigma, tau, p)]; });
    }

    /// T_{sigma,tau} as the composition of one-stage averages.
    Element average_down(std::size_t sigma, std::size_t tau, const Element& e) const {
        check_order(sigma, tau);
        if (!(e.space() == space(tau))) throw SpaceMismatch("element not on stage tau");
        Element cur = e;
        for (std::size_t k = tau; k > sigma; --k) {
            const auto& st = stages_[k];
            std::vector<cplx> acc(space(k - 1).size(), 0.0);
            for (std::size_t p = 0; p < st.space.size(); ++p) acc[st.parent[p]] += st.weight[p] * cur[p];
            cur = Element(space(k - 1), std::move(acc));
        }
        return cur;
    }

    /// T_{sigma,tau} in one pass with product weights along each path.
    Element average_down_direct(std::size_t sigma, std::size_t tau, const Element& e) const {
        check_order(sigma, tau);
        if (!(e.space() == space(tau))) throw SpaceMismatch("element not on stage tau");
        std::vector<cplx> acc(space(sigma).size(), 0.0);
        for (std::size_t p = 0; p < space(tau).size(); ++p) {
            double wgt = 1.0;
            std::size_t q = p;
            for (std::size_t k = tau; k > sigma; --k) {
                wgt *= stages_[k].weight[q];
                q = stages_[k].parent[q];
            }
            acc[q] += wgt * e[p];
        }
        return Element(space(sigma), std::move(acc));
    }

   private:
    void check_order(std::size_t sigma, std::size_t tau) const {
        if (sigma > tau || tau >= stages_.size())
            throw IndexOrder("need sigma <= tau <= height, got " + std::to_string(sigma) + ", " + std::to_string(tau));
    }

    std::size_t cap_;
    std::vector<TowerStage> stages_;
};

}  // namespace extalg

#endif  // EXTALG_COLE_TOWER_HPP
