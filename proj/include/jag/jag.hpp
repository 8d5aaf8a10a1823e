// Copyright 2026 The JAG Authors.
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

#include "jag/attributes.hpp"
#include "jag/baselines.hpp"
#include "jag/build.hpp"
#include "jag/dataset.hpp"
#include "jag/eval.hpp"
#include "jag/graph.hpp"
#include "jag/io.hpp"
#include "jag/metric.hpp"
#include "jag/search.hpp"
#include "jag/serialize.hpp"
#include "jag/unified.hpp"
#include "jag/workload.hpp"
