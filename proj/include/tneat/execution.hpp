#pragma once

#include <cstddef>
#include <functional>

namespace tneat {

/*!
 * How population-wide phases run.
 *
 * `parallel` is the tensorized path: one fused pass over all genomes, split
 * across OpenMP threads, with episodic problems advanced in lockstep.
 * `serial` is the reference path: the same per-genome code applied one genome
 * at a time on the calling thread. Both produce bitwise-identical results.
 */
enum class Execution { parallel, serial };

/// Upper bound on worker threads for parallel phases (<= 0 restores the
/// OpenMP default).
void set_thread_count(int n);
int thread_count();
int hardware_threads();

/*!
 * Calls body(i) for i in [0, n). Under Execution::parallel the iterations are
 * distributed over threads; body must only write state owned by index i.
 * The first exception thrown by any iteration is rethrown after the loop.
 */
void for_each_index(Execution mode, std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tneat
