// Copyright 2026 The qbench Authors
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

#ifndef QBENCH_CORE_ANGLE_H
#define QBENCH_CORE_ANGLE_H

#include "qbench/core/polarization.h"

namespace qbench {

/// Plate/PBS orientation. Stored in degrees so scene documents round-trip
/// exactly; physics code reads radians().
class Angle {
   public:
    constexpr Angle() = default;

    static constexpr Angle degrees(double d) { return Angle(d); }
    static constexpr Angle radians(double r) { return Angle(r * 180.0 / kPi); }

    constexpr double deg() const { return degrees_; }
    constexpr double rad() const { return degrees_ * kPi / 180.0; }

    constexpr bool operator==(const Angle &) const = default;

   private:
    constexpr explicit Angle(double d) : degrees_(d) {}
    double degrees_ = 0.0;
};

}  // namespace qbench

#endif
