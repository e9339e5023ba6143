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

#include "qevent/lattice.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "qevent/error.hpp"

namespace qevent {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double PeriodicGrid::wrapped_offset(double x, double c) const noexcept {
    double d = std::fmod(x - c, box_length);
    if (d < -0.5 * box_length) d += box_length;
    if (d >= 0.5 * box_length) d -= box_length;
    return d;
}

std::vector<Complex> dft(std::span<const Complex> in, int sign) {
    if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "dft sign must be +-1");
    const int n = static_cast<int>(in.size());
    std::vector<Complex> src(in.begin(), in.end());
    std::vector<Complex> out(in.size());
    if (in.empty()) return out;
    auto* src_ptr = reinterpret_cast<fftw_complex*>(src.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, src_ptr, out_ptr, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace qevent
