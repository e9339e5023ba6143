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

#include "qevent/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qevent/error.hpp"

namespace qevent {

namespace {

std::vector<std::size_t> row_major_strides(const std::vector<FactorLabel>& labels) {
    std::vector<std::size_t> strides(labels.size(), 1);
    for (std::size_t i = labels.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * labels[i].space.dim;
    }
    return strides;
}

std::size_t total_size(const std::vector<FactorLabel>& labels) {
    std::size_t n = 1;
    for (const auto& l : labels) n *= l.space.dim;
    return n;
}

// Advances a row-major multi-index; returns false after the last element.
bool advance(std::vector<std::size_t>& index, const std::vector<FactorLabel>& labels) {
    for (std::size_t i = index.size(); i-- > 0;) {
        if (++index[i] < labels[i].space.dim) return true;
        index[i] = 0;
    }
    return false;
}

// Offset contributed to a flat index in `target` layout by every element of
// `source`, whose labels must all occur in `target`.
std::vector<std::size_t> embedded_offsets(const std::vector<FactorLabel>& source,
                                          const std::vector<FactorLabel>& target) {
    const auto target_strides = row_major_strides(target);
    std::vector<std::size_t> stride_of(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) {
        const auto it = std::find_if(target.begin(), target.end(),
                                     [&](const FactorLabel& t) { return t.link == source[i].link; });
        stride_of[i] = target_strides[static_cast<std::size_t>(it - target.begin())];
    }
    std::vector<std::size_t> offsets;
    offsets.reserve(total_size(source));
    std::vector<std::size_t> index(source.size(), 0);
    do {
        std::size_t off = 0;
        for (std::size_t i = 0; i < index.size(); ++i) off += index[i] * stride_of[i];
        offsets.push_back(off);
    } while (advance(index, source));
    return offsets;
}

bool by_link(const FactorLabel& a, const FactorLabel& b) { return a.link < b.link; }

}  // namespace

const SpaceType& SpaceRegistry::declare(std::string_view name, std::size_t dim) {
    if (dim == 0) {
        throw Error(ErrorCode::InvalidArgument, "space '" + std::string(name) + "' has dimension 0");
    }
    auto it = spaces_.find(name);
    if (it != spaces_.end()) {
        if (it->second.dim != dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        "space '" + std::string(name) + "' declared with dims " +
                            std::to_string(it->second.dim) + " and " + std::to_string(dim));
        }
        return it->second;
    }
    return spaces_.emplace(std::string(name), SpaceType{std::string(name), dim}).first->second;
}

std::optional<SpaceType> SpaceRegistry::find(std::string_view name) const {
    auto it = spaces_.find(name);
    if (it == spaces_.end()) return std::nullopt;
    return it->second;
}

LabeledVector::LabeledVector() : amplitudes_{Complex{1.0, 0.0}} {}

LabeledVector::LabeledVector(std::vector<FactorLabel> labels, std::vector<Complex> amplitudes) {
    for (const auto& l : labels) {
        if (l.space.dim == 0) {
            throw Error(ErrorCode::InvalidArgument, "label '" + l.link + "' has dimension 0");
        }
        if (l.link.empty()) throw Error(ErrorCode::InvalidArgument, "empty link id");
    }
    if (amplitudes.size() != total_size(labels)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(total_size(labels)) + " amplitudes, got " +
                        std::to_string(amplitudes.size()));
    }
    for (const auto& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw Error(ErrorCode::InvalidArgument, "non-finite amplitude");
        }
    }
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end(), by_link);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].link == sorted[i - 1].link) {
            throw Error(ErrorCode::DuplicateLabel, "duplicate label '" + sorted[i].link + "'");
        }
    }
    if (std::is_sorted(labels.begin(), labels.end(), by_link)) {
        labels_ = std::move(labels);
        amplitudes_ = std::move(amplitudes);
        return;
    }
    const auto offsets = embedded_offsets(labels, sorted);
    amplitudes_.assign(amplitudes.size(), Complex{});
    for (std::size_t i = 0; i < amplitudes.size(); ++i) amplitudes_[offsets[i]] = amplitudes[i];
    labels_ = std::move(sorted);
}

LabeledVector LabeledVector::scalar(Complex value) { return LabeledVector({}, {value}); }

LabeledVector LabeledVector::zeros(std::vector<FactorLabel> labels) {
    const auto n = total_size(labels);
    return LabeledVector(std::move(labels), std::vector<Complex>(n));
}

std::optional<std::size_t> LabeledVector::find(std::string_view link) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].link == link) return i;
    }
    return std::nullopt;
}

Complex LabeledVector::at(std::span<const std::size_t> index) const {
    if (index.size() != labels_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "multi-index rank mismatch");
    }
    const auto strides = row_major_strides(labels_);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] >= labels_[i].space.dim) {
            throw Error(ErrorCode::InvalidArgument, "index out of range on '" + labels_[i].link + "'");
        }
        flat += index[i] * strides[i];
    }
    return amplitudes_[flat];
}

std::vector<Complex> LabeledVector::amplitudes_in_order(std::span<const std::string> order) const {
    if (order.size() != labels_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "label order has wrong rank");
    }
    std::vector<FactorLabel> target;
    for (const auto& link : order) {
        auto pos = find(link);
        if (!pos) throw Error(ErrorCode::MissingLabel, "label '" + link + "' not present");
        target.push_back(labels_[*pos]);
    }
    const auto offsets = embedded_offsets(labels_, target);
    std::vector<Complex> out(amplitudes_.size());
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) out[offsets[i]] = amplitudes_[i];
    return out;
}

LabeledVector LabeledVector::scaled(Complex factor) const {
    LabeledVector out = *this;
    for (auto& a : out.amplitudes_) a *= factor;
    return out;
}

LabeledVector LabeledVector::normalized() const {
    const double n2 = squared_norm(*this);
    if (!(n2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
    return scaled(Complex{1.0 / std::sqrt(n2), 0.0});
}

double squared_norm(const LabeledVector& psi) {
    double sum = 0.0;
    for (const auto& a : psi.amplitudes()) sum += std::norm(a);
    return sum;
}

LabeledVector tensor_product(const LabeledVector& u, const LabeledVector& v) {
    std::vector<FactorLabel> merged;
    merged.reserve(u.labels().size() + v.labels().size());
    std::merge(u.labels().begin(), u.labels().end(), v.labels().begin(), v.labels().end(),
               std::back_inserter(merged), by_link);
    for (std::size_t i = 1; i < merged.size(); ++i) {
        if (merged[i].link == merged[i - 1].link) {
            throw Error(ErrorCode::DuplicateLabel,
                        "tensor product of vectors sharing label '" + merged[i].link + "'");
        }
    }
    const auto u_off = embedded_offsets(u.labels(), merged);
    const auto v_off = embedded_offsets(v.labels(), merged);
    std::vector<Complex> amps(total_size(merged));
    const auto ua = u.amplitudes();
    const auto va = v.amplitudes();
    for (std::size_t i = 0; i < ua.size(); ++i) {
        for (std::size_t j = 0; j < va.size(); ++j) amps[u_off[i] + v_off[j]] = ua[i] * va[j];
    }
    return LabeledVector(std::move(merged), std::move(amps));
}

ProductBra::ProductBra(std::vector<LabeledVector> factors) {
    for (auto& f : factors) {
        if (f.labels().size() != 1) {
            throw Error(ErrorCode::InvalidArgument, "bra factor must carry exactly one label");
        }
        const double n2 = squared_norm(f);
        if (std::abs(n2 - 1.0) > kUnitTolerance) {
            throw Error(ErrorCode::NonUnitVector,
                        "bra factor on '" + f.labels()[0].link + "' has squared norm " +
                            std::to_string(n2));
        }
        auto link = f.labels()[0].link;
        if (!factors_.emplace(link, std::move(f)).second) {
            throw Error(ErrorCode::DuplicateLabel, "bra has two factors on '" + link + "'");
        }
    }
}

std::vector<std::string> ProductBra::links() const {
    std::vector<std::string> out;
    out.reserve(factors_.size());
    for (const auto& [link, _] : factors_) out.push_back(link);
    return out;
}

LabeledVector contract(const ProductBra& bra, const LabeledVector& psi) {
    const auto& labels = psi.labels();
    // For each psi factor, the bra amplitudes to conjugate or null for kept factors.
    std::vector<const LabeledVector*> bra_for(labels.size(), nullptr);
    std::vector<FactorLabel> kept;
    std::size_t matched = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = bra.factors().find(labels[i].link);
        if (it == bra.factors().end()) {
            kept.push_back(labels[i]);
            continue;
        }
        if (!(it->second.labels()[0].space == labels[i].space)) {
            throw Error(ErrorCode::DimensionMismatch,
                        "bra factor on '" + labels[i].link + "' lives in a different space");
        }
        bra_for[i] = &it->second;
        ++matched;
    }
    if (matched != bra.factors().size()) {
        for (const auto& [link, _] : bra.factors()) {
            if (!psi.has_label(link)) {
                throw Error(ErrorCode::MissingLabel, "bra label '" + link + "' absent from state");
            }
        }
    }

    const auto kept_strides = row_major_strides(kept);
    std::vector<std::size_t> stride_in_kept(labels.size(), 0);
    for (std::size_t i = 0, k = 0; i < labels.size(); ++i) {
        if (!bra_for[i]) stride_in_kept[i] = kept_strides[k++];
    }

    std::vector<Complex> out(total_size(kept));
    std::vector<std::size_t> index(labels.size(), 0);
    const auto amps = psi.amplitudes();
    std::size_t flat = 0;
    do {
        Complex weight{1.0, 0.0};
        std::size_t target = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (bra_for[i]) {
                weight *= std::conj(bra_for[i]->amplitudes()[index[i]]);
            } else {
                target += index[i] * stride_in_kept[i];
            }
        }
        out[target] += weight * amps[flat];
        ++flat;
    } while (advance(index, labels));
    return LabeledVector(std::move(kept), std::move(out));
}

LabeledVector apply_event_operator(const EventOperator& op, const LabeledVector& psi) {
    return tensor_product(op.ket, contract(op.bra, psi)).scaled(op.c);
}

LabeledVector single_factor(std::string link, SpaceType space, std::vector<Complex> amplitudes) {
    return LabeledVector({FactorLabel{std::move(link), std::move(space)}}, std::move(amplitudes));
}

}  // namespace qevent
