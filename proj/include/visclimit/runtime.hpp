#pragma once

namespace visclimit {

/// Execution policy for the data-parallel kernels (nu sweeps, region scans,
/// raster fills). Serial is the reference implementation; results must be
/// bit-identical between the two.
enum class Exec { Serial, OpenMP };

/// Thread count for sweep fan-out: min(omp_get_max_threads(),
/// VISCLIMIT_THREADS) when the environment variable is set and positive.
int thread_cap();

} // namespace visclimit
