#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cellsheaf {

/// Outcome of one task: a value or the error it raised.
template <class T>
struct TaskResult {
  std::optional<T> value;
  std::string error;
  std::exception_ptr exception;

  bool ok() const noexcept { return value.has_value(); }

  const T& get() const {
    if (!value) std::rethrow_exception(exception);
    return *value;
  }
};

/// Runs fn(0) .. fn(count - 1) on up to `workers` threads. Results are stored by task index,
/// so the output does not depend on the worker count or on scheduling. A failing task does
/// not stop the others.
template <class T, class Fn>
std::vector<TaskResult<T>> parallel_map(std::size_t count, std::size_t workers, Fn&& fn) {
  std::vector<TaskResult<T>> results(count);
  auto run_one = [&](std::size_t i) {
    try {
      results[i].value.emplace(fn(i));
    } catch (const std::exception& e) {
      results[i].error = e.what();
      results[i].exception = std::current_exception();
    } catch (...) {
      results[i].error = "unknown error";
      results[i].exception = std::current_exception();
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) run_one(i);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

/// Rethrows the first failure in task order, otherwise unwraps the values.
template <class T>
std::vector<T> unwrap_all(std::vector<TaskResult<T>>&& results) {
  std::vector<T> out;
  out.reserve(results.size());
  for (auto& r : results) {
    if (!r.ok()) std::rethrow_exception(r.exception);
    out.push_back(std::move(*r.value));
  }
  return out;
}

}  // namespace cellsheaf
