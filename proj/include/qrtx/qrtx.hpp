// Copyright 2026 The qrtx Authors
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

#pragma once

#include "qrtx/common.hpp"
#include "qrtx/tensor.hpp"
#include "qrtx/pauli.hpp"
#include "qrtx/rng.hpp"
#include "qrtx/witness.hpp"
#include "qrtx/clifford.hpp"
#include "qrtx/samplers.hpp"
#include "qrtx/parallel.hpp"
#include "qrtx/dataset.hpp"
#include "qrtx/optimize.hpp"
#include "qrtx/oracle.hpp"
#include "qrtx/stats.hpp"
#include "qrtx/pipeline.hpp"
