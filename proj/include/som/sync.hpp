/*
 * Copyright (c) 2026, The som-check authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef SOM_SYNC_HPP_
#define SOM_SYNC_HPP_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "som/checker.hpp"

namespace som {

// Misuse of a primitive that the mechanism itself refuses before any
// ownership statement is issued (e.g. a monitor unlocked by a thread
// that does not hold it).
class SyncDisciplineError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Received {
  EntityId msg{};
  const Violation* violation = nullptr;
};

// Synchronization mechanisms register as processes so they can take
// ownership; their statements run on the calling thread but are issued
// under the mechanism's identity. Every statement they issue counts as
// library plumbing, not as an explicit handoff.
//
// `ctx` parameters name the resource acting as the caller's context
// and default (when value-initialized) to the actor's thread object.

// FIFO rendezvous: send moves the message under the channel, receive
// blocks until one is available and moves it to the receiver.
class Channel {
 public:
  Channel(Session& session, EntityId creator, std::string name = "");

  EntityId pid() const { return pid_; }

  const Violation* send(EntityId actor, EntityId msg, EntityId ctx = {});
  Received receive(EntityId actor, EntityId ctx = {});

 private:
  Session& session_;
  EntityId pid_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<EntityId> items_;
};

// Like a channel, but removal may be non-blocking and the head may be
// peeked at without gaining any access to it.
class Queue {
 public:
  Queue(Session& session, EntityId creator, std::string name = "");

  EntityId pid() const { return pid_; }

  const Violation* add(EntityId actor, EntityId msg, EntityId ctx = {});
  Received remove(EntityId actor, EntityId ctx = {});
  std::optional<Received> try_remove(EntityId actor, EntityId ctx = {});
  std::optional<EntityId> peek();

 private:
  Session& session_;
  EntityId pid_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<EntityId> items_;
};

// Monitor permanently bound to one protected object. Locking moves the
// object to the caller, unlocking moves it back; only the holding
// actor may unlock, wait, or signal. Conditions use signal-and-continue.
class Lock {
 public:
  Lock(Session& session, EntityId creator, EntityId protected_obj,
       EntityId ctx = {}, std::string name = "");

  EntityId pid() const { return pid_; }
  EntityId protected_obj() const { return obj_; }

  const Violation* lock(EntityId actor, EntityId ctx = {});
  const Violation* unlock(EntityId actor, EntityId ctx = {});

  class Condition {
   public:
    explicit Condition(Lock& owner) : lock_(owner) {}

    // Caller must hold the lock; atomically releases it, sleeps until
    // signalled, and reacquires before returning.
    const Violation* wait(EntityId actor, EntityId ctx = {});
    void signal(EntityId actor);

   private:
    Lock& lock_;
    std::condition_variable cv_;
    std::uint64_t waiting_ = 0;
    std::uint64_t signals_ = 0;
  };

 private:
  friend class Condition;

  const Violation* lock_locked(std::unique_lock<std::mutex>& lk,
                               EntityId actor, EntityId ctx);
  const Violation* unlock_locked(EntityId actor, EntityId ctx);

  Session& session_;
  EntityId pid_;
  EntityId obj_;
  std::mutex mutex_;
  std::condition_variable available_;
  bool locked_ = false;
  EntityId holder_{};
};

// Binary semaphore over one object: same handoffs as Lock, but any
// actor that owns the object may unlock, and there is no holder
// bookkeeping at all.
class BinarySemaphore {
 public:
  BinarySemaphore(Session& session, EntityId creator, EntityId protected_obj,
                  EntityId ctx = {}, std::string name = "");

  EntityId pid() const { return pid_; }
  EntityId protected_obj() const { return obj_; }

  const Violation* lock(EntityId actor, EntityId ctx = {});
  const Violation* unlock(EntityId actor, EntityId ctx = {});

 private:
  Session& session_;
  EntityId pid_;
  EntityId obj_;
  std::mutex mutex_;
  std::condition_variable available_;
  bool locked_ = false;  // construction leaves it unlocked, holding the object
};

// Readers-writer lock: writers take the protected object itself, while
// readers co-own a proxy resource that the object permanently sits
// under, giving all of them read access through it.
class RwLock {
 public:
  RwLock(Session& session, EntityId creator, EntityId protected_obj,
         EntityId ctx = {}, std::string name = "");

  EntityId pid() const { return pid_; }
  EntityId proxy() const { return proxy_; }
  EntityId protected_obj() const { return obj_; }

  const Violation* lock_write(EntityId actor, EntityId ctx = {});
  const Violation* unlock_write(EntityId actor, EntityId ctx = {});
  const Violation* lock_read(EntityId actor, EntityId ctx = {});
  const Violation* unlock_read(EntityId actor, EntityId ctx = {});

 private:
  Session& session_;
  EntityId pid_;
  EntityId proxy_;
  EntityId obj_;
  std::mutex mutex_;
  std::condition_variable turn_;
  bool writer_active_ = false;
  std::uint64_t readers_ = 0;
};

// Runs `body` on a real thread under a freshly spawned process. The
// spawn happens on the constructing thread, so the parent's statement
// order is preserved. join() marks the process terminated.
class ActorThread {
 public:
  ActorThread(Session& session, EntityId parent,
              std::function<void(EntityId self)> body);
  ~ActorThread();

  ActorThread(const ActorThread&) = delete;
  ActorThread& operator=(const ActorThread&) = delete;

  EntityId pid() const { return pid_; }
  void join();

 private:
  Session& session_;
  EntityId pid_;
  std::thread thread_;
  bool joined_ = false;
};

}  // namespace som

#endif  // SOM_SYNC_HPP_
