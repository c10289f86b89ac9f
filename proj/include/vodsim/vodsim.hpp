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

#include "vodsim/capacity_model.hpp"
#include "vodsim/lrfu_cache.hpp"
#include "vodsim/popularity.hpp"
#include "vodsim/random.hpp"
#include "vodsim/scenario.hpp"
#include "vodsim/simulator.hpp"
#include "vodsim/topology_search.hpp"
#include "vodsim/types.hpp"
