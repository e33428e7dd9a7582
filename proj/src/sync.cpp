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

#include "som/sync.hpp"

#include <utility>

namespace som {

namespace {

EntityId context_or_staging(Session& session, const EntityId& actor,
                            const EntityId& ctx) {
  return ctx == EntityId{} ? session.staging_of(actor) : ctx;
}

EntityId spawn_mechanism(Session& session, const EntityId& creator,
                         std::string name) {
  EntityId pid = session.mint_entity(EntityKind::Process, std::move(name));
  ScopedInternalOps internal;
  session.check(creator, Statement::spawn(pid));
  return pid;
}

}  // namespace

Channel::Channel(Session& session, EntityId creator, std::string name)
    : session_(session),
      pid_(spawn_mechanism(session, creator, std::move(name))) {}

const Violation* Channel::send(EntityId actor, EntityId msg, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  const Violation* v;
  {
    ScopedInternalOps internal;
    v = session_.check(
        actor,
        Statement::pass(msg, context_or_staging(session_, actor, ctx), pid_));
  }
  items_.push_back(msg);
  ready_.notify_one();
  return v;
}

Received Channel::receive(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(mutex_);
  ready_.wait(lk, [this] { return !items_.empty(); });
  Received r;
  r.msg = items_.front();
  items_.pop_front();
  ScopedInternalOps internal;
  r.violation = session_.check(
      pid_, Statement::pass(r.msg, pid_,
                            context_or_staging(session_, actor, ctx)));
  return r;
}

Queue::Queue(Session& session, EntityId creator, std::string name)
    : session_(session),
      pid_(spawn_mechanism(session, creator, std::move(name))) {}

const Violation* Queue::add(EntityId actor, EntityId msg, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  const Violation* v;
  {
    ScopedInternalOps internal;
    v = session_.check(
        actor,
        Statement::pass(msg, context_or_staging(session_, actor, ctx), pid_));
  }
  items_.push_back(msg);
  ready_.notify_one();
  return v;
}

Received Queue::remove(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(mutex_);
  ready_.wait(lk, [this] { return !items_.empty(); });
  Received r;
  r.msg = items_.front();
  items_.pop_front();
  ScopedInternalOps internal;
  r.violation = session_.check(
      pid_, Statement::pass(r.msg, pid_,
                            context_or_staging(session_, actor, ctx)));
  return r;
}

std::optional<Received> Queue::try_remove(EntityId actor, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  if (items_.empty()) return std::nullopt;
  Received r;
  r.msg = items_.front();
  items_.pop_front();
  ScopedInternalOps internal;
  r.violation = session_.check(
      pid_, Statement::pass(r.msg, pid_,
                            context_or_staging(session_, actor, ctx)));
  return r;
}

std::optional<EntityId> Queue::peek() {
  std::lock_guard<std::mutex> lk(mutex_);
  if (items_.empty()) return std::nullopt;
  return items_.front();
}

Lock::Lock(Session& session, EntityId creator, EntityId protected_obj,
           EntityId ctx, std::string name)
    : session_(session),
      pid_(spawn_mechanism(session, creator, std::move(name))),
      obj_(protected_obj) {
  ScopedInternalOps internal;
  session_.check(creator,
                 Statement::pass(
                     obj_, context_or_staging(session_, creator, ctx), pid_));
}

const Violation* Lock::lock(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(mutex_);
  return lock_locked(lk, actor, ctx);
}

const Violation* Lock::lock_locked(std::unique_lock<std::mutex>& lk,
                                   EntityId actor, EntityId ctx) {
  available_.wait(lk, [this] { return !locked_; });
  locked_ = true;
  holder_ = actor;
  ScopedInternalOps internal;
  return session_.check(
      pid_, Statement::pass(obj_, pid_,
                            context_or_staging(session_, actor, ctx)));
}

const Violation* Lock::unlock(EntityId actor, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  return unlock_locked(actor, ctx);
}

const Violation* Lock::unlock_locked(EntityId actor, EntityId ctx) {
  if (!locked_ || holder_ != actor) {
    throw SyncDisciplineError("unlock by an actor that does not hold it");
  }
  const Violation* v;
  {
    ScopedInternalOps internal;
    v = session_.check(
        actor,
        Statement::pass(obj_, context_or_staging(session_, actor, ctx), pid_));
  }
  locked_ = false;
  holder_ = EntityId{};
  available_.notify_one();
  return v;
}

const Violation* Lock::Condition::wait(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(lock_.mutex_);
  const Violation* out = lock_.unlock_locked(actor, ctx);
  ++waiting_;
  cv_.wait(lk, [this] { return signals_ > 0; });
  --signals_;
  --waiting_;
  const Violation* in = lock_.lock_locked(lk, actor, ctx);
  return out != nullptr ? out : in;
}

void Lock::Condition::signal(EntityId actor) {
  std::lock_guard<std::mutex> lk(lock_.mutex_);
  if (!lock_.locked_ || lock_.holder_ != actor) {
    throw SyncDisciplineError("signal by an actor that does not hold the lock");
  }
  // Signals never outnumber waiters; a signal into the void is lost.
  if (signals_ < waiting_) {
    ++signals_;
    cv_.notify_one();
  }
}

BinarySemaphore::BinarySemaphore(Session& session, EntityId creator,
                                 EntityId protected_obj, EntityId ctx,
                                 std::string name)
    : session_(session),
      pid_(spawn_mechanism(session, creator, std::move(name))),
      obj_(protected_obj) {
  ScopedInternalOps internal;
  session_.check(creator,
                 Statement::pass(
                     obj_, context_or_staging(session_, creator, ctx), pid_));
}

const Violation* BinarySemaphore::lock(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(mutex_);
  available_.wait(lk, [this] { return !locked_; });
  locked_ = true;
  ScopedInternalOps internal;
  return session_.check(
      pid_, Statement::pass(obj_, pid_,
                            context_or_staging(session_, actor, ctx)));
}

const Violation* BinarySemaphore::unlock(EntityId actor, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  const Violation* v;
  {
    ScopedInternalOps internal;
    v = session_.check(
        actor,
        Statement::pass(obj_, context_or_staging(session_, actor, ctx), pid_));
  }
  locked_ = false;
  available_.notify_one();
  return v;
}

RwLock::RwLock(Session& session, EntityId creator, EntityId protected_obj,
               EntityId ctx, std::string name)
    : session_(session),
      pid_(spawn_mechanism(session, creator, std::move(name))),
      proxy_(session.mint_entity(EntityKind::Resource)),
      obj_(protected_obj) {
  ScopedInternalOps internal;
  session_.check(pid_, Statement::allocate(proxy_, pid_));
  session_.check(creator,
                 Statement::pass(
                     obj_, context_or_staging(session_, creator, ctx), proxy_));
}

const Violation* RwLock::lock_write(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(mutex_);
  turn_.wait(lk, [this] { return !writer_active_ && readers_ == 0; });
  writer_active_ = true;
  ScopedInternalOps internal;
  return session_.check(
      pid_, Statement::pass(obj_, proxy_,
                            context_or_staging(session_, actor, ctx)));
}

const Violation* RwLock::unlock_write(EntityId actor, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  const Violation* v;
  {
    ScopedInternalOps internal;
    v = session_.check(
        actor, Statement::pass(
                   obj_, context_or_staging(session_, actor, ctx), proxy_));
  }
  writer_active_ = false;
  turn_.notify_all();
  return v;
}

const Violation* RwLock::lock_read(EntityId actor, EntityId ctx) {
  std::unique_lock<std::mutex> lk(mutex_);
  turn_.wait(lk, [this] { return !writer_active_; });
  ++readers_;
  ScopedInternalOps internal;
  return session_.check(
      pid_, Statement::share(proxy_,
                             context_or_staging(session_, actor, ctx)));
}

const Violation* RwLock::unlock_read(EntityId actor, EntityId ctx) {
  std::lock_guard<std::mutex> lk(mutex_);
  if (readers_ == 0) {
    throw SyncDisciplineError("read-unlock with no readers active");
  }
  --readers_;
  const Violation* v;
  {
    ScopedInternalOps internal;
    v = session_.check(
        actor, Statement::release(
                   proxy_, context_or_staging(session_, actor, ctx)));
  }
  if (readers_ == 0) turn_.notify_all();
  return v;
}

ActorThread::ActorThread(Session& session, EntityId parent,
                         std::function<void(EntityId self)> body)
    : session_(session), pid_(session.on_thread_start(parent)) {
  thread_ = std::thread([body = std::move(body), pid = pid_] { body(pid); });
}

ActorThread::~ActorThread() {
  if (!joined_) join();
}

void ActorThread::join() {
  if (joined_) return;
  thread_.join();
  joined_ = true;
  session_.mark_terminated(pid_);
}

}  // namespace som
