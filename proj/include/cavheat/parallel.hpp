// parallel.hpp: Serial / OpenMP execution of independent index loops
//
// The serial path is the reference: every parallel kernel must reproduce it
// bit for bit, because each index writes only its own output slot.

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace cavheat {

enum class Execution { serial, openmp };

/// Calls body(i) for i in [0, count). Exceptions thrown inside an OpenMP region are
/// captured and the one from the lowest index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Execution policy, Body&& body)
{
    if (policy == Execution::serial) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::exception_ptr first_error;
    std::size_t first_index = count;
    std::mutex guard;
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace cavheat
