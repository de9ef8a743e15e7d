#ifndef AF_PARALLEL_HPP
#define AF_PARALLEL_HPP

#include <functional>

namespace af {

/// Worker cap: AF_THREADS when set, hardware concurrency otherwise.
int worker_count();

/// Runs fn(i) for i in [0, count). Splits contiguous index ranges across
/// workers when count is large enough to pay off; results are identical to
/// the sequential loop since every index writes disjoint state.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace af

#endif
