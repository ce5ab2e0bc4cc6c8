#include "visclimit/runtime.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace visclimit {

int thread_cap() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("VISCLIMIT_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0 && cap < n) n = cap;
        } catch (...) {
            // ignore malformed values
        }
    }
    return n;
}

} // namespace visclimit
