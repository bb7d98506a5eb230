// Copyright 2026 The pulsega Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file
 * Fixed-size work-stealing thread pool.
 *
 * Each worker owns a deque. Submitted batches are dealt round-robin onto
 * the deques; a worker pops from the back of its own deque and, when that
 * is empty, steals from the front of another's.
 */

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace pulsega {

class ThreadPool {
 public:
  /// workers >= 1.
  explicit ThreadPool(std::size_t workers);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const noexcept { return workers_.size(); }

  /// Calls body(i) for every i in [0, n) and waits for all of them. If any
  /// call throws, the exception of the lowest failing index is rethrown
  /// after the batch completes.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

  /// Total number of tasks a worker took from another worker's deque.
  std::size_t steals() const;

 private:
  struct Queue {
    std::mutex mutex;
    std::deque<std::function<void()>> tasks;
  };

  void worker_loop(std::size_t self);
  bool try_pop(std::size_t self, std::function<void()>& task);

  std::vector<std::unique_ptr<Queue>> queues_;
  std::vector<std::thread> workers_;
  mutable std::mutex wake_mutex_;
  std::condition_variable wake_;
  std::size_t queued_ = 0;   // tasks not yet taken; guarded by wake_mutex_
  bool stopping_ = false;    // guarded by wake_mutex_
  std::size_t steals_ = 0;   // guarded by wake_mutex_
};

}  // namespace pulsega
