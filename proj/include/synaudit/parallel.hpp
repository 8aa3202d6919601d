// Copyright 2026 The Synaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace synaudit {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Callers must
// make fn(i) touch only per-index state; under that contract the result is
// identical for any worker count. The first exception thrown by any worker
// is rethrown on the calling thread.
void parallel_for(size_t count, unsigned threads, const std::function<void(size_t)>& fn);

}  // namespace synaudit
