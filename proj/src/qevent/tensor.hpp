// Copyright 2026 The qevent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEVENT_TENSOR_HPP
#define QEVENT_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qevent {

using Complex = std::complex<double>;

/// Tolerance for every unit-norm validation on construction.
inline constexpr double kUnitTolerance = 1e-12;

/// A finite-dimensional Hilbert space associated with a link type.
struct SpaceType {
    std::string name;
    std::size_t dim = 1;

    friend bool operator==(const SpaceType&, const SpaceType&) = default;
};

/// Names one tensor factor: the link that carries it and its space.
struct FactorLabel {
    std::string link;
    SpaceType space;

    friend bool operator==(const FactorLabel&, const FactorLabel&) = default;
};

/// Maps space names to dimensions; rejects a name registered with two dims.
class SpaceRegistry {
public:
    const SpaceType& declare(std::string_view name, std::size_t dim);
    std::optional<SpaceType> find(std::string_view name) const;

private:
    std::map<std::string, SpaceType, std::less<>> spaces_;
};

/// Dense complex tensor whose factors are named by link ids.
///
/// Labels are always stored sorted by link id and amplitudes are laid out
/// row-major over that order, so two vectors over the same label set compare
/// entry by entry. Constructing from labels in any other order permutes the
/// amplitudes into the canonical layout. A vector without labels is a scalar.
class LabeledVector {
public:
    /// The scalar 1.
    LabeledVector();

    /// `amplitudes` are row-major over `labels` in the order given here.
    LabeledVector(std::vector<FactorLabel> labels, std::vector<Complex> amplitudes);

    static LabeledVector scalar(Complex value);
    static LabeledVector zeros(std::vector<FactorLabel> labels);

    const std::vector<FactorLabel>& labels() const noexcept { return labels_; }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    bool is_scalar() const noexcept { return labels_.empty(); }

    /// Position of `link` in the canonical label order.
    std::optional<std::size_t> find(std::string_view link) const;
    bool has_label(std::string_view link) const { return find(link).has_value(); }

    /// Amplitude at a multi-index given in canonical label order.
    Complex at(std::span<const std::size_t> index) const;

    /// Amplitudes laid out row-major over `order`, a permutation of the labels.
    std::vector<Complex> amplitudes_in_order(std::span<const std::string> order) const;

    LabeledVector scaled(Complex factor) const;
    /// Throws InvalidArgument on a zero vector.
    LabeledVector normalized() const;

    friend bool operator==(const LabeledVector&, const LabeledVector&) = default;

private:
    std::vector<FactorLabel> labels_;
    std::vector<Complex> amplitudes_;
};

double squared_norm(const LabeledVector& psi);

/// Outer product over the union of labels. Throws DuplicateLabel on overlap.
LabeledVector tensor_product(const LabeledVector& u, const LabeledVector& v);

/// A product of single-factor unit vectors, keyed by link id.
class ProductBra {
public:
    ProductBra() = default;
    /// Each factor must carry exactly one label and unit norm.
    explicit ProductBra(std::vector<LabeledVector> factors);

    const std::map<std::string, LabeledVector, std::less<>>& factors() const noexcept {
        return factors_;
    }
    std::vector<std::string> links() const;
    bool empty() const noexcept { return factors_.empty(); }

    friend bool operator==(const ProductBra&, const ProductBra&) = default;

private:
    std::map<std::string, LabeledVector, std::less<>> factors_;
};

/// Partial inner product <bra|psi> over the bra's links.
LabeledVector contract(const ProductBra& bra, const LabeledVector& psi);

/// The rank-1 map c |ket><bra| of a maximal event.
struct EventOperator {
    Complex c{1.0, 0.0};
    ProductBra bra;
    LabeledVector ket;
};

/// c * ket (x) <bra|psi>.
LabeledVector apply_event_operator(const EventOperator& op, const LabeledVector& psi);

/// Unit vector on a single label. Convenience for bras and tests.
LabeledVector single_factor(std::string link, SpaceType space, std::vector<Complex> amplitudes);

}  // namespace qevent

#endif  // QEVENT_TENSOR_HPP
