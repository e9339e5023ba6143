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

#include <doctest.h>

#include <cmath>

#include "qevent/error.hpp"
#include "qevent/tensor.hpp"
#include "random_history.hpp"

using namespace qevent;
using oracle::RawFactor;

namespace {

SpaceType dim(std::size_t d) { return testgen::space_of(d); }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("default vector is the scalar one") {
    LabeledVector one;
    CHECK(one.is_scalar());
    CHECK(one.size() == 1);
    CHECK(one.amplitudes()[0] == Complex{1.0, 0.0});
    CHECK(squared_norm(one) == 1.0);
}

TEST_CASE("labels are stored sorted and amplitudes follow them") {
    // Given over (b, a): amp(b, a) = 10 b + a.
    std::vector<Complex> amps;
    for (int b = 0; b < 2; ++b) {
        for (int a = 0; a < 3; ++a) amps.emplace_back(10 * b + a, 0.0);
    }
    LabeledVector v({{"b", dim(2)}, {"a", dim(3)}}, amps);
    REQUIRE(v.labels().size() == 2);
    CHECK(v.labels()[0].link == "a");
    CHECK(v.labels()[1].link == "b");
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            const std::size_t idx[] = {a, b};
            CHECK(v.at(idx) == Complex(10.0 * b + a, 0.0));
        }
    }
    const std::string order[] = {"b", "a"};
    const auto back = v.amplitudes_in_order(order);
    CHECK(std::equal(back.begin(), back.end(), amps.begin()));
}

TEST_CASE("construction rejects bad input") {
    CHECK(code_of([] { LabeledVector({{"a", dim(2)}}, {1.0}); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { LabeledVector({{"a", dim(1)}, {"a", dim(1)}}, {1.0}); }) == ErrorCode::DuplicateLabel);
    CHECK(code_of([] { LabeledVector({{"a", SpaceType{"z", 0}}}, {}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { LabeledVector({{"a", dim(1)}}, {Complex{NAN, 0.0}}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { LabeledVector::scalar(0.0).normalized(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("space registry pins one dimension per name") {
    SpaceRegistry reg;
    CHECK(reg.declare("spin", 2).dim == 2);
    CHECK(reg.declare("spin", 2).dim == 2);
    CHECK(code_of([&] { reg.declare("spin", 3); }) == ErrorCode::DimensionMismatch);
    CHECK(reg.find("spin")->dim == 2);
    CHECK_FALSE(reg.find("photon").has_value());
}

TEST_CASE("tensor product matches the naive Kronecker oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        testgen::Gen g(seed);
        const auto u = g.unit_vector(g.fresh_links("u", 1 + g.below(3), 4));
        const auto v = g.unit_vector(g.fresh_links("v", g.below(3), 4));
        const auto lib = tensor_product(testgen::to_vector(u), testgen::to_vector(v));
        CHECK(testgen::max_diff(lib, oracle::kron(u, v)) < 1e-15);
        CHECK(squared_norm(lib) == doctest::Approx(1.0).epsilon(1e-13));
    }
    const auto a = single_factor("x", dim(2), {1.0, 0.0});
    CHECK(code_of([&] { tensor_product(a, a); }) == ErrorCode::DuplicateLabel);
}

TEST_CASE("contraction matches full index summation") {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        testgen::Gen g(seed);
        const auto labels = g.fresh_links("s", 2 + g.below(3), 4);
        const auto psi = g.unit_vector(labels);
        std::vector<RawFactor> absorbed(labels.begin(), labels.begin() + 1 + static_cast<long>(g.below(2)));
        auto e = g.candidate("e", absorbed, g.below(2));
        const auto lib = apply_event_operator(testgen::to_candidate(e).op(), testgen::to_vector(psi));
        CHECK(testgen::max_diff(lib, oracle::apply(psi, e.bra, e.c, e.vec)) < 1e-14);

        // Bare contraction: c = 1, scalar ket.
        const auto c = contract(testgen::to_candidate(e).bra, testgen::to_vector(psi));
        CHECK(testgen::max_diff(c, oracle::apply(psi, e.bra, 1.0, {{}, {1.0}})) < 1e-14);
    }
}

TEST_CASE("product bra validation") {
    const auto half = single_factor("a", dim(2), {0.5, 0.0});
    CHECK(code_of([&] { ProductBra({half}); }) == ErrorCode::NonUnitVector);
    const LabeledVector two({{"a", dim(1)}, {"b", dim(1)}}, {1.0});
    CHECK(code_of([&] { ProductBra({two}); }) == ErrorCode::InvalidArgument);
    const auto up = single_factor("a", dim(2), {1.0, 0.0});
    CHECK(code_of([&] { ProductBra({up, up}); }) == ErrorCode::DuplicateLabel);

    const ProductBra bra({up});
    CHECK(bra.links() == std::vector<std::string>{"a"});
    const auto psi = single_factor("b", dim(2), {1.0, 0.0});
    CHECK(code_of([&] { contract(bra, psi); }) == ErrorCode::MissingLabel);
    const auto wide = single_factor("a", dim(3), {1.0, 0.0, 0.0});
    CHECK(code_of([&] { contract(bra, wide); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("event operator ket must land on fresh labels") {
    const auto psi = tensor_product(single_factor("a", dim(2), {1.0, 0.0}), single_factor("b", dim(1), {1.0}));
    const EventOperator op{1.0, ProductBra({single_factor("a", dim(2), {1.0, 0.0})}),
                           single_factor("b", dim(1), {1.0})};
    CHECK(code_of([&] { apply_event_operator(op, psi); }) == ErrorCode::DuplicateLabel);
}

TEST_CASE("norm of a product is the product of norms") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        testgen::Gen g(seed);
        auto u = testgen::to_vector(g.unit_vector(g.fresh_links("u", 2, 3))).scaled(Complex{0.3, 0.4});
        auto v = testgen::to_vector(g.unit_vector(g.fresh_links("v", 1, 4))).scaled(2.0);
        CHECK(squared_norm(tensor_product(u, v)) ==
              doctest::Approx(squared_norm(u) * squared_norm(v)).epsilon(1e-13));
        CHECK(squared_norm(u.normalized()) == doctest::Approx(1.0).epsilon(1e-14));
    }
}
