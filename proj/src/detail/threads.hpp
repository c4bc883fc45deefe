#pragma once

#include <cstdlib>
#include <thread>

namespace rmcurve::detail {

// Worker-thread budget; RMCURVE_THREADS caps it when set.
inline int worker_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("RMCURVE_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

} // namespace rmcurve::detail
