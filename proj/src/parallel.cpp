#include "geis/parallel.hpp"

#include <atomic>

namespace geis {
namespace {
std::atomic<int> worker_count{1};
}

int jobs() noexcept { return worker_count.load(); }

void set_jobs(int k) noexcept { worker_count.store(k < 1 ? 1 : k); }

}  // namespace geis
