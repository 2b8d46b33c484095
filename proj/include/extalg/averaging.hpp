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

// The averaging operator T: A_alpha -> A, a unital A-linear left inverse of
// the embedding.

#ifndef EXTALG_AVERAGING_HPP
#define EXTALG_AVERAGING_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "algebra_core.hpp"
#include "arens_hoffman.hpp"
#include "fibration.hpp"
#include "poly_resultant.hpp"

namespace extalg {

struct ContractionReport {
    bool ok = true;
    /// Smallest j with ||s_j|| > t^j n, when one exists.
    std::optional<std::size_t> witness;
    std::vector<double> sum_norms;
};

/// Checks ||s_j|| <= t^j n for j = 0..n-1.
inline ContractionReport check_contraction_at(const NewtonSums& sums, double t, std::size_t n) {
    ContractionReport out;
    for (std::size_t j = 0; j < n; ++j) {
        const double norm = sup_norm(sums[j]);
        out.sum_norms.push_back(norm);
        const double bound = std::pow(t, static_cast<double>(j)) * static_cast<double>(n);
        if (norm > bound * (1.0 + 1e-12) && !out.witness) {
            out.ok = false;
            out.witness = j;
        }
    }
    return out;
}

class AveragingOperator {
   public:
    explicit AveragingOperator(AHExtension ext)
        : ext_(std::move(ext)), sums_(newton_sums(ext_.alpha(), ext_.degree() - 1)) {
        condition_ok_ = check_contraction_at(sums_, ext_.t(), ext_.degree()).ok;
    }

    const AHExtension& ext() const noexcept { return ext_; }
    const NewtonSums& sums() const noexcept { return sums_; }
    bool condition_ok() const noexcept { return condition_ok_; }

   private:
    AHExtension ext_;
    NewtonSums sums_;
    bool condition_ok_ = false;
};

/// (1/n) sum_k b_k s_k.
inline Element t_formula(const AveragingOperator& op, const AHElement& u) {
    if (!(u.ext() == op.ext())) throw MixedExtensions("element of a different extension");
    const double n = static_cast<double>(op.ext().degree());
    Element acc = Element::constant(op.ext().space(), 0.0);
    for (std::size_t k = 0; k < u.degree(); ++k) acc = acc + u.coeff(k) * op.sums()[k];
    return (1.0 / n) * acc;
}

/// (1/n) sum_j u-hat(w, lambda_j), roots repeated by multiplicity.
inline Element t_fibre_average(const FibredSpace& f, const AHElement& u) {
    if (!(u.ext().space() == f.base())) throw SpaceMismatch("fibration over a different base");
    const double n = static_cast<double>(f.degree());
    return Element::generate(f.base(), [&](std::size_t w) {
        const auto p = u.at(w);
        cplx acc = 0.0;
        for (auto r : f.expanded_roots(w)) acc += cpoly::eval(p, r);
        return acc / n;
    });
}

inline ContractionReport check_contraction(const AveragingOperator& op) {
    return check_contraction_at(op.sums(), op.ext().t(), op.ext().degree());
}

/// Norm parameter policies for rescaling: the minimal admissible t above a
/// floor, or a fixed t.
struct MinimalParam {
    double floor = 1.0;
};
struct FixedParam {
    double t = 1.0;
};
using TPolicy = std::variant<MinimalParam, FixedParam>;

struct RescaleResult {
    double mu = 1.0;
    int halvings = 0;
    MonicPoly scaled;
    AHExtension ext;
    AveragingOperator op;
};

/// Halves mu until alpha^mu admits the policy's t and satisfies the
/// contraction condition.
inline RescaleResult enforce_by_rescaling(const MonicPoly& alpha, const TPolicy& policy) {
    double mu = 1.0;
    for (int h = 0; h <= 60; ++h, mu *= 0.5) {
        MonicPoly scaled = rescale_poly(alpha, mu);
        double t = 0.0;
        if (const auto* m = std::get_if<MinimalParam>(&policy)) {
            t = min_norm_param(scaled, m->floor);
        } else {
            t = std::get<FixedParam>(policy).t;
            if (ah_condition(scaled, t) < -1e-12 * std::max(1.0, std::pow(t, static_cast<double>(scaled.degree()))))
                continue;
        }
        AHExtension ext(scaled, t);
        AveragingOperator op(ext);
        if (op.condition_ok()) return {mu, h, std::move(scaled), std::move(ext), std::move(op)};
    }
    throw NotReached("no compliant rescaling within 60 halvings");
}

}  // namespace extalg

#endif  // EXTALG_AVERAGING_HPP
