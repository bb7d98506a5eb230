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

#include "pulsega/thread_pool.hpp"

#include "pulsega/errors.hpp"

namespace pulsega {

ThreadPool::ThreadPool(std::size_t workers) {
  if (workers < 1) throw ArgumentError("thread pool needs at least one worker");
  queues_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) queues_.push_back(std::make_unique<Queue>());
  workers_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) workers_.emplace_back([this, i] { worker_loop(i); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(wake_mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

bool ThreadPool::try_pop(std::size_t self, std::function<void()>& task) {
  {
    Queue& own = *queues_[self];
    std::lock_guard lock(own.mutex);
    if (!own.tasks.empty()) {
      task = std::move(own.tasks.back());
      own.tasks.pop_back();
      std::lock_guard count(wake_mutex_);
      --queued_;
      return true;
    }
  }
  for (std::size_t k = 1; k < queues_.size(); ++k) {
    Queue& victim = *queues_[(self + k) % queues_.size()];
    std::lock_guard lock(victim.mutex);
    if (!victim.tasks.empty()) {
      task = std::move(victim.tasks.front());
      victim.tasks.pop_front();
      std::lock_guard count(wake_mutex_);
      --queued_;
      ++steals_;
      return true;
    }
  }
  return false;
}

void ThreadPool::worker_loop(std::size_t self) {
  std::function<void()> task;
  for (;;) {
    if (try_pop(self, task)) {
      task();
      task = nullptr;
      continue;
    }
    std::unique_lock lock(wake_mutex_);
    wake_.wait(lock, [this] { return stopping_ || queued_ > 0; });
    if (stopping_ && queued_ == 0) return;
    lock.unlock();
    if (try_pop(self, task)) {
      task();
      task = nullptr;
    } else {
      std::this_thread::yield();
    }
  }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  std::vector<std::exception_ptr> errors(n);
  std::size_t remaining = n;  // guarded by done_mutex
  std::mutex done_mutex;
  std::condition_variable done;

  {
    std::lock_guard lock(wake_mutex_);
    queued_ += n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto task = [&, i] {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      std::lock_guard lock(done_mutex);
      if (--remaining == 0) done.notify_all();
    };
    Queue& q = *queues_[i % queues_.size()];
    std::lock_guard lock(q.mutex);
    q.tasks.push_back(std::move(task));
  }
  wake_.notify_all();

  {
    std::unique_lock lock(done_mutex);
    done.wait(lock, [&] { return remaining == 0; });
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t ThreadPool::steals() const {
  std::lock_guard lock(wake_mutex_);
  return steals_;
}

}  // namespace pulsega
