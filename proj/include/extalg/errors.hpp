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

#ifndef EXTALG_ERRORS_HPP
#define EXTALG_ERRORS_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace extalg {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

#define EXTALG_DEFINE_ERROR(Name)                     \
    class Name : public Error {                       \
       public:                                        \
        explicit Name(const std::string& what_arg)    \
            : Error(std::string(#Name ": ") + what_arg) {} \
    };

EXTALG_DEFINE_ERROR(SpaceMismatch)
EXTALG_DEFINE_ERROR(InvalidSpace)
EXTALG_DEFINE_ERROR(InvalidElement)
EXTALG_DEFINE_ERROR(LogOnCut)
EXTALG_DEFINE_ERROR(DegreeTooHigh)
EXTALG_DEFINE_ERROR(InvalidPolynomial)
EXTALG_DEFINE_ERROR(InvalidNormParameter)
EXTALG_DEFINE_ERROR(MixedExtensions)
EXTALG_DEFINE_ERROR(NotARoot)
EXTALG_DEFINE_ERROR(IllConditioned)
EXTALG_DEFINE_ERROR(PointNotInFibration)
EXTALG_DEFINE_ERROR(CannotSeparate)
EXTALG_DEFINE_ERROR(DegenerateNeighborhood)
EXTALG_DEFINE_ERROR(AmbiguousMatching)
EXTALG_DEFINE_ERROR(NotReached)
EXTALG_DEFINE_ERROR(TooLarge)
EXTALG_DEFINE_ERROR(StageTooLarge)
EXTALG_DEFINE_ERROR(IndexOrder)
EXTALG_DEFINE_ERROR(NotAnExpWitness)
EXTALG_DEFINE_ERROR(UnclassifiablePoint)
EXTALG_DEFINE_ERROR(DescentFailed)
EXTALG_DEFINE_ERROR(SamplingTooCoarse)
EXTALG_DEFINE_ERROR(NotInvertibleOnLoop)
EXTALG_DEFINE_ERROR(InvalidPartition)
EXTALG_DEFINE_ERROR(RetriesExhausted)
EXTALG_DEFINE_ERROR(CapExceeded)
EXTALG_DEFINE_ERROR(ParseError)
EXTALG_DEFINE_ERROR(TaskFailure)

#undef EXTALG_DEFINE_ERROR

/// An element of the base algebra vanishes (within tolerance) at `point`.
class NotInvertible : public Error {
   public:
    NotInvertible(std::size_t point, std::complex<double> value, const std::string& what_arg)
        : Error("NotInvertible: " + what_arg), point_(point), value_(value) {}

    std::size_t point() const noexcept { return point_; }
    std::complex<double> value() const noexcept { return value_; }

   private:
    std::size_t point_;
    std::complex<double> value_;
};

/// An extension element whose Gelfand transform vanishes at (character, root).
class NotInvertibleInExtension : public Error {
   public:
    NotInvertibleInExtension(std::size_t character, std::complex<double> root,
                             const std::string& what_arg)
        : Error("NotInvertible: " + what_arg), character_(character), root_(root) {}

    std::size_t character() const noexcept { return character_; }
    std::complex<double> root() const noexcept { return root_; }

   private:
    std::size_t character_;
    std::complex<double> root_;
};

}  // namespace extalg

#endif  // EXTALG_ERRORS_HPP
