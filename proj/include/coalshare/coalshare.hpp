// Copyright 2026 Coalshare Authors
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

#ifndef COALSHARE_COALSHARE_HPP
#define COALSHARE_COALSHARE_HPP

#include "coalshare/game.hpp"
#include "coalshare/generator.hpp"
#include "coalshare/metrics.hpp"
#include "coalshare/model.hpp"
#include "coalshare/oracle.hpp"
#include "coalshare/projection.hpp"
#include "coalshare/report_io.hpp"
#include "coalshare/scenario_io.hpp"
#include "coalshare/solver.hpp"
#include "coalshare/utility.hpp"

#endif  // COALSHARE_COALSHARE_HPP
