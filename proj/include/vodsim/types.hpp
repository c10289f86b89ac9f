// Copyright 2026 The vodsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#pragma once

#include <cstdint>

namespace vodsim {

/// Simulation time in whole ticks. The wall-clock length of a tick is a
/// scenario choice (1 ms for cache studies, 1 s for storage search studies).
using Tick = std::int64_t;

/// Index of a vertex in a StorageTopology.
using NodeId = std::uint32_t;

/// Zero-based video index; popularity rank is VideoId + 1.
using VideoId = std::uint32_t;

}  // namespace vodsim
