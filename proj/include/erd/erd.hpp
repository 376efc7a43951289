// Copyright 2026 The ERD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "erd/analysis.hpp"
#include "erd/bath.hpp"
#include "erd/checks.hpp"
#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/errors.hpp"
#include "erd/noise.hpp"
#include "erd/pauli.hpp"
#include "erd/random.hpp"
#include "erd/scenario.hpp"
#include "erd/sequence.hpp"
#include "erd/sm_gates.hpp"
