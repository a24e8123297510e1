// Copyright 2026 The LitterKit Authors
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

#include <cstddef>
#include <functional>

namespace litterkit
{

/// Number of worker threads: LITTERKIT_THREADS when set to a positive
/// integer, otherwise the hardware concurrency.
std::size_t worker_count();

/// Calls fn(i) for every i in [0, n), spread over worker_count() threads.
/// The first exception thrown by any call is rethrown after all workers join.
/// Callers must write results to disjoint slots so output does not depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> & fn);

}  // namespace litterkit
