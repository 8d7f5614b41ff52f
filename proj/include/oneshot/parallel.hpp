#pragma once

#include <functional>

namespace oneshot {

// Worker count: hardware concurrency, capped by ONE_SHOT_QIT_THREADS when set.
int worker_count();

// Runs body(i) for i in [0, n). Each index writes only its own slot, so results
// do not depend on scheduling. Calls made from inside a worker run serially.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace oneshot
