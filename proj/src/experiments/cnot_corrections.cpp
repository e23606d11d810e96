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

#include "qbench/core/error.h"
#include "qbench/experiments/experiments.h"

namespace qbench::experiments {

const CorrectionTable &frozen_corrections(optics::BellState bell) {
    using P = Pauli;
    static const std::map<optics::BellState, CorrectionTable> kTables{
        {optics::BellState::PhiPlus,
         {{"D1+D3", {P::Z, P::X}}, {"D1+D4", {P::Z, P::I}}, {"D2+D3", {P::I, P::X}}, {"D2+D4", {P::I, P::I}}}},
        {optics::BellState::PhiMinus,
         {{"D1+D3", {P::I, P::X}}, {"D1+D4", {P::I, P::I}}, {"D2+D3", {P::Z, P::X}}, {"D2+D4", {P::Z, P::I}}}},
        {optics::BellState::PsiPlus,
         {{"D1+D3", {P::Z, P::I}}, {"D1+D4", {P::Z, P::X}}, {"D2+D3", {P::I, P::I}}, {"D2+D4", {P::I, P::X}}}},
        {optics::BellState::PsiMinus,
         {{"D1+D3", {P::I, P::I}}, {"D1+D4", {P::I, P::X}}, {"D2+D3", {P::Z, P::I}}, {"D2+D4", {P::Z, P::X}}}},
    };
    return kTables.at(bell);
}

}  // namespace qbench::experiments
