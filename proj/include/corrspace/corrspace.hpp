// Copyright 2026 The corrspace Authors
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

#include "corrspace/basis.hpp"
#include "corrspace/cz.hpp"
#include "corrspace/encoded.hpp"
#include "corrspace/errors.hpp"
#include "corrspace/group.hpp"
#include "corrspace/json_io.hpp"
#include "corrspace/lattice.hpp"
#include "corrspace/linalg.hpp"
#include "corrspace/mps.hpp"
#include "corrspace/pattern.hpp"
#include "corrspace/protocol.hpp"
#include "corrspace/resources.hpp"
#include "corrspace/rng.hpp"
#include "corrspace/statevec.hpp"
#include "corrspace/tensor.hpp"
#include "corrspace/validate.hpp"
